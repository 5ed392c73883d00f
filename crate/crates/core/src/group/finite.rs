use crate::error::{Error, Result};
use std::collections::HashMap;
use std::fmt;

pub const DEFAULT_GROUP_CAP: usize = 512;

/// A finite group as a multiplication table; element 0 is the identity.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    n: usize,
    table: Vec<usize>,
    inv: Vec<usize>,
    gens: Vec<usize>,
    name: String,
}

impl FiniteGroup {
    /// Validates associativity, identity and inverses exhaustively.
    pub fn from_table(table: Vec<Vec<usize>>, name: &str) -> Result<FiniteGroup> {
        let n = table.len();
        if n == 0 {
            return Err(Error::Group("empty table".into()));
        }
        if table.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return Err(Error::Group("table is not n x n over 0..n".into()));
        }
        let flat: Vec<usize> = table.concat();
        let mul = |a: usize, b: usize| flat[a * n + b];
        for a in 0..n {
            if mul(0, a) != a || mul(a, 0) != a {
                return Err(Error::Group("element 0 is not the identity".into()));
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = mul(a, b);
                for c in 0..n {
                    if mul(ab, c) != mul(a, mul(b, c)) {
                        return Err(Error::Group(format!("not associative at ({a},{b},{c})")));
                    }
                }
            }
        }
        let mut inv = vec![usize::MAX; n];
        for a in 0..n {
            for b in 0..n {
                if mul(a, b) == 0 {
                    inv[a] = b;
                    break;
                }
            }
            if inv[a] == usize::MAX || mul(inv[a], a) != 0 {
                return Err(Error::Group(format!("element {a} has no inverse")));
            }
        }
        let mut g = FiniteGroup { n, table: flat, inv, gens: vec![], name: name.to_string() };
        g.gens = g.greedy_generators();
        Ok(g)
    }

    fn greedy_generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = vec![false; self.n];
        span[0] = true;
        for a in 1..self.n {
            if !span[a] {
                gens.push(a);
                span = self.closure(&gens);
            }
        }
        gens
    }

    fn closure(&self, gens: &[usize]) -> Vec<bool> {
        let mut seen = vec![false; self.n];
        seen[0] = true;
        let mut stack = vec![0];
        while let Some(x) = stack.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        seen
    }

    pub fn trivial() -> FiniteGroup {
        FiniteGroup::from_table(vec![vec![0]], "1").unwrap()
    }

    pub fn cyclic(n: usize) -> FiniteGroup {
        let t = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        FiniteGroup::from_table(t, &format!("C{n}")).unwrap()
    }

    pub fn klein() -> FiniteGroup {
        let t = (0..4).map(|a| (0..4).map(|b| a ^ b).collect()).collect();
        FiniteGroup::from_table(t, "C2xC2").unwrap()
    }

    pub fn symmetric3() -> FiniteGroup {
        let mut g = group_from_generators(&[vec![1, 0, 2], vec![1, 2, 0]]).unwrap();
        g.name = "S3".into();
        g
    }

    /// Dihedral group of order 2k acting on a k-gon.
    pub fn dihedral(k: usize) -> FiniteGroup {
        let rot: Vec<usize> = (0..k).map(|i| (i + 1) % k).collect();
        let refl: Vec<usize> = (0..k).map(|i| (k - i) % k).collect();
        let mut g = group_from_generators(&[rot, refl]).unwrap();
        g.name = format!("D{k}");
        g
    }

    pub fn quaternion() -> FiniteGroup {
        // elements (sign, unit) with unit in {1,i,j,k}; index = 4*sign + unit
        let unit_mul = |a: usize, b: usize| -> (usize, usize) {
            // returns (sign, unit) of e_a * e_b
            const T: [[(usize, usize); 4]; 4] = [
                [(0, 0), (0, 1), (0, 2), (0, 3)],
                [(0, 1), (1, 0), (0, 3), (1, 2)],
                [(0, 2), (1, 3), (1, 0), (0, 1)],
                [(0, 3), (0, 2), (1, 1), (1, 0)],
            ];
            T[a][b]
        };
        let t = (0..8)
            .map(|x| {
                (0..8)
                    .map(|y| {
                        let (s, u) = unit_mul(x % 4, y % 4);
                        4 * ((x / 4 + y / 4 + s) % 2) + u
                    })
                    .collect()
            })
            .collect();
        FiniteGroup::from_table(t, "Q8").unwrap()
    }

    pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> FiniteGroup {
        let (n, m) = (a.n, b.n);
        let t = (0..n * m)
            .map(|x| (0..n * m).map(|y| a.mul(x / m, y / m) * m + b.mul(x % m, y % m)).collect())
            .collect();
        FiniteGroup::from_table(t, &format!("{}x{}", a.name, b.name)).unwrap()
    }

    /// Looks up the battery groups by name.
    pub fn by_name(name: &str) -> Result<FiniteGroup> {
        Ok(match name {
            "1" | "trivial" => FiniteGroup::trivial(),
            "C2xC2" | "V4" => FiniteGroup::klein(),
            "S3" => FiniteGroup::symmetric3(),
            "D4" => FiniteGroup::dihedral(4),
            "Q8" => FiniteGroup::quaternion(),
            _ => {
                if let Some(k) = name.strip_prefix('C').and_then(|s| s.parse::<usize>().ok()) {
                    if k == 0 || k > DEFAULT_GROUP_CAP {
                        return Err(Error::Group(format!("bad cyclic order {k}")));
                    }
                    FiniteGroup::cyclic(k)
                } else {
                    return Err(Error::Group(format!("unknown group name {name:?}")));
                }
            }
        })
    }

    pub fn order(&self) -> usize {
        self.n
    }
    pub fn name(&self) -> &str {
        &self.name
    }
    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.n + b]
    }
    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }
    pub fn generators(&self) -> &[usize] {
        &self.gens
    }
    pub fn identity(&self) -> usize {
        0
    }

    pub fn elem_order(&self, a: usize) -> usize {
        let mut k = 1;
        let mut x = a;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Some prime p with |G| = p^k, or None (the trivial group gives None).
    pub fn prime_power(&self) -> Option<u32> {
        if self.n == 1 {
            return None;
        }
        let mut p = 2;
        while !self.n.is_multiple_of(p) {
            p += 1;
        }
        let mut m = self.n;
        while m.is_multiple_of(p) {
            m /= p;
        }
        (m == 1).then_some(p as u32)
    }

    pub fn is_cyclic(&self) -> bool {
        (0..self.n).any(|a| self.elem_order(a) == self.n)
    }

    /// A generator when the group is cyclic.
    pub fn cyclic_generator(&self) -> Option<usize> {
        (0..self.n).find(|&a| self.elem_order(a) == self.n)
    }

    /// Writes every element as a word in the generators (breadth first).
    pub fn words(&self) -> Vec<Vec<usize>> {
        let mut words: Vec<Option<Vec<usize>>> = vec![None; self.n];
        words[0] = Some(vec![]);
        let mut queue = std::collections::VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for (gi, &g) in self.gens.iter().enumerate() {
                let y = self.mul(x, g);
                if words[y].is_none() {
                    let mut w = words[x].clone().unwrap();
                    w.push(gi);
                    words[y] = Some(w);
                    queue.push_back(y);
                }
            }
        }
        words.into_iter().map(|w| w.unwrap()).collect()
    }

    pub fn table_rows(&self) -> Vec<Vec<usize>> {
        (0..self.n).map(|a| self.table[a * self.n..(a + 1) * self.n].to_vec()).collect()
    }
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(order {})", self.name, self.n)
    }
}

/// Closure of a set of permutations under composition, capped at `DEFAULT_GROUP_CAP`.
pub fn group_from_generators(perms: &[Vec<usize>]) -> Result<FiniteGroup> {
    group_from_generators_capped(perms, DEFAULT_GROUP_CAP)
}

/// Products are read left to right: (a b)(x) = b(a(x)).
pub fn group_from_generators_capped(perms: &[Vec<usize>], cap: usize) -> Result<FiniteGroup> {
    let deg = perms.first().map_or(0, |p| p.len());
    for p in perms {
        if p.len() != deg {
            return Err(Error::Group("generators act on different sets".into()));
        }
        let mut seen = vec![false; deg];
        for &x in p {
            if x >= deg || seen[x] {
                return Err(Error::Group(format!("not a bijection: {p:?}")));
            }
            seen[x] = true;
        }
    }
    let id: Vec<usize> = (0..deg).collect();
    let mut elems = vec![id.clone()];
    let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(id, 0)]);
    let mut i = 0;
    while i < elems.len() {
        for p in perms {
            let prod: Vec<usize> = elems[i].iter().map(|&x| p[x]).collect();
            if !index.contains_key(&prod) {
                if elems.len() >= cap {
                    return Err(Error::Cap(format!("group closure exceeds {cap} elements")));
                }
                index.insert(prod.clone(), elems.len());
                elems.push(prod);
            }
        }
        i += 1;
    }
    let n = elems.len();
    let table = (0..n)
        .map(|a| {
            (0..n)
                .map(|b| {
                    let prod: Vec<usize> = elems[a].iter().map(|&x| elems[b][x]).collect();
                    index[&prod]
                })
                .collect()
        })
        .collect();
    let mut g = FiniteGroup::from_table(table, &format!("perm{n}"))?;
    let gens: Vec<usize> = perms.iter().map(|p| index[p]).filter(|&x| x != 0).collect();
    if !gens.is_empty() {
        let mut dedup = Vec::new();
        for x in gens {
            if !dedup.contains(&x) {
                dedup.push(x);
            }
        }
        g.gens = dedup;
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_examples() {
        assert_eq!(group_from_generators(&[vec![1, 0]]).unwrap().order(), 2);
        assert_eq!(group_from_generators(&[vec![1, 0, 2], vec![1, 2, 0]]).unwrap().order(), 6);
        assert_eq!(group_from_generators(&[]).unwrap().order(), 1);
        assert!(group_from_generators(&[vec![0, 0]]).is_err());
        let s6: Vec<Vec<usize>> = vec![vec![1, 0, 2, 3, 4, 5], vec![1, 2, 3, 4, 5, 0]];
        assert!(group_from_generators(&s6).is_err());
    }

    #[test]
    fn battery_groups() {
        for (name, n) in [("C2", 2), ("C3", 3), ("C4", 4), ("C2xC2", 4), ("S3", 6), ("D4", 8), ("Q8", 8)] {
            let g = FiniteGroup::by_name(name).unwrap();
            assert_eq!(g.order(), n);
            assert_eq!(g.words().len(), n);
        }
        let q = FiniteGroup::quaternion();
        assert_eq!((0..8).filter(|&a| q.elem_order(a) == 4).count(), 6);
        assert_eq!(FiniteGroup::dihedral(4).generators().len(), 2);
        assert!(!FiniteGroup::klein().is_cyclic());
    }
}
