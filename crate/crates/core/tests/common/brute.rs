//! Exhaustive oracles for small instances.

use bockstein::linalg::{Mat, Modulus};
use rand::Rng;
use std::collections::HashSet;

/// All elements of the row span, or None once the span exceeds `cap`.
pub fn span_set(a: &Mat, cap: usize) -> Option<HashSet<Vec<u32>>> {
    let m = a.modulus();
    let zero = vec![0u32; a.cols()];
    let mut seen: HashSet<Vec<u32>> = HashSet::from([zero.clone()]);
    let mut frontier = vec![zero];
    while let Some(v) = frontier.pop() {
        for i in 0..a.rows() {
            let w: Vec<u32> = v.iter().zip(a.row(i)).map(|(&x, &y)| m.add(x, y)).collect();
            if seen.insert(w.clone()) {
                if seen.len() > cap {
                    return None;
                }
                frontier.push(w);
            }
        }
    }
    Some(seen)
}

/// Every vector of (Z/N)^k.
pub fn all_vectors(m: Modulus, k: usize) -> Vec<Vec<u32>> {
    let n = m.n();
    let mut out = vec![vec![]];
    for _ in 0..k {
        let mut next = Vec::with_capacity(out.len() * n as usize);
        for v in &out {
            for x in 0..n {
                let mut w = v.clone();
                w.push(x);
                next.push(w);
            }
        }
        out = next;
    }
    out
}

pub fn all_mats(m: Modulus, rows: usize, cols: usize) -> Vec<Mat> {
    all_vectors(m, rows * cols).into_iter().map(|d| Mat::from_data(m, rows, cols, d)).collect()
}

pub fn random_mat(rng: &mut impl Rng, m: Modulus, rows: usize, cols: usize) -> Mat {
    // bias towards non-units so that zero divisors show up
    let n = m.n();
    Mat::from_fn(m, rows, cols, |_, _| {
        if rng.gen_bool(0.5) {
            (rng.gen_range(0..n) * m.l() % n) as i64
        } else {
            rng.gen_range(0..n) as i64
        }
    })
}

/// Random invertible matrix as a product of elementary operations.
pub fn random_unimodular(rng: &mut impl Rng, m: Modulus, k: usize) -> Mat {
    let mut u = Mat::identity(m, k);
    for _ in 0..3 * k + 2 {
        let i = rng.gen_range(0..k);
        let j = rng.gen_range(0..k);
        if i != j {
            let c = rng.gen_range(0..m.n());
            let mut e = Mat::identity(m, k);
            e.set(i, j, c);
            u = e.mul(&u);
        } else {
            let mut c = rng.gen_range(1..m.n());
            while c % m.l() == 0 {
                c = rng.gen_range(1..m.n());
            }
            let mut e = Mat::identity(m, k);
            e.set(i, i, c);
            u = e.mul(&u);
        }
    }
    if k >= 2 {
        let mut p = Mat::zeros(m, k, k);
        for i in 0..k {
            p.set(i, (i + 1) % k, 1);
        }
        u = p.mul(&u);
    }
    u
}

pub fn exists_retraction(a: &Mat) -> bool {
    // R with A R = I
    let m = a.modulus();
    let id = Mat::identity(m, a.rows());
    all_mats(m, a.cols(), a.rows()).iter().any(|r| a.mul(r) == id)
}

pub fn exists_section(a: &Mat) -> bool {
    let m = a.modulus();
    let id = Mat::identity(m, a.cols());
    all_mats(m, a.cols(), a.rows()).iter().any(|s| s.mul(a) == id)
}

/// Whether every unit vector lies in the row span of `a`, decided by enumerating
/// the span; None when the span exceeds `cap`.
pub fn unit_vectors_in_span(a: &Mat, cap: usize) -> Option<bool> {
    let span = span_set(a, cap)?;
    Some((0..a.cols()).all(|j| {
        let mut e = vec![0u32; a.cols()];
        e[j] = 1;
        span.contains(&e)
    }))
}
