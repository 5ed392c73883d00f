use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

/// The ring Z/l^r with l prime.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawModulus", into = "RawModulus")]
pub struct Modulus {
    l: u32,
    r: u32,
    n: u32,
}

#[derive(Serialize, Deserialize)]
struct RawModulus {
    l: u32,
    r: u32,
}

impl TryFrom<RawModulus> for Modulus {
    type Error = Error;
    fn try_from(raw: RawModulus) -> Result<Self> {
        Modulus::new(raw.l, raw.r)
    }
}

impl From<Modulus> for RawModulus {
    fn from(m: Modulus) -> Self {
        RawModulus { l: m.l, r: m.r }
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl Modulus {
    pub fn new(l: u32, r: u32) -> Result<Self> {
        if !is_prime(l as u64) {
            return Err(Error::NotPrimePower(l as u64));
        }
        if r == 0 {
            return Err(Error::Precondition("exponent r must be at least 1".into()));
        }
        let mut n: u64 = 1;
        for _ in 0..r {
            n *= l as u64;
            if n >= 1 << 31 {
                return Err(Error::ModulusTooLarge { l, r });
            }
        }
        Ok(Modulus { l, r, n: n as u32 })
    }

    /// Parses N = l^r, rejecting anything that is not a prime power.
    pub fn from_order(n: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::NotPrimePower(n));
        }
        let mut l = 2;
        while !n.is_multiple_of(l) {
            l += 1;
        }
        let mut m = n;
        let mut r = 0;
        while m.is_multiple_of(l) {
            m /= l;
            r += 1;
        }
        if m != 1 {
            return Err(Error::NotPrimePower(n));
        }
        Modulus::new(l as u32, r)
    }

    pub fn field(p: u32) -> Result<Self> {
        Modulus::new(p, 1)
    }

    pub fn l(&self) -> u32 {
        self.l
    }
    pub fn r(&self) -> u32 {
        self.r
    }
    pub fn n(&self) -> u32 {
        self.n
    }

    /// Z/l^c for c in 1..=r.
    pub fn with_exp(&self, c: u32) -> Result<Self> {
        Modulus::new(self.l, c)
    }

    pub fn residue_field(&self) -> Self {
        Modulus { l: self.l, r: 1, n: self.l }
    }

    pub fn pow_l(&self, v: u32) -> u32 {
        if v >= self.r {
            0
        } else {
            self.l.pow(v)
        }
    }

    #[inline]
    pub fn reduce(&self, x: i64) -> u32 {
        x.rem_euclid(self.n as i64) as u32
    }
    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let s = a as u64 + b as u64;
        (s % self.n as u64) as u32
    }
    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        let s = a as u64 + self.n as u64 - b as u64;
        (s % self.n as u64) as u32
    }
    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.n - a
        }
    }
    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.n as u64) as u32
    }

    /// l-adic valuation; r for zero.
    pub fn val(&self, x: u32) -> u32 {
        let mut x = x % self.n;
        if x == 0 {
            return self.r;
        }
        let mut v = 0;
        while x.is_multiple_of(self.l) {
            x /= self.l;
            v += 1;
        }
        v
    }

    pub fn is_unit(&self, x: u32) -> bool {
        !x.is_multiple_of(self.l)
    }

    pub fn inv(&self, x: u32) -> Option<u32> {
        if !self.is_unit(x) {
            return None;
        }
        let (mut a, mut b) = (x as i64 % self.n as i64, self.n as i64);
        let (mut u, mut w) = (1i64, 0i64);
        while b != 0 {
            let q = a / b;
            (a, b) = (b, a - q * b);
            (u, w) = (w, u - q * w);
        }
        Some(self.reduce(u))
    }

    /// Writes x = unit * l^v, returning (unit, v); zero gives (0, r).
    pub fn split(&self, x: u32) -> (u32, u32) {
        let v = self.val(x);
        if v >= self.r {
            return (0, self.r);
        }
        let p = self.l.pow(v);
        ((x / p) % self.n, v)
    }

    /// Exact division a / b when b | a in Z/N; the result is the least such quotient.
    pub fn div(&self, a: u32, b: u32) -> Option<u32> {
        let (ub, vb) = self.split(b);
        if vb >= self.r {
            return if a.is_multiple_of(self.n) { Some(0) } else { None };
        }
        let va = self.val(a);
        if va < vb {
            return None;
        }
        let p = self.l.pow(vb);
        let q = (a / p) % self.n;
        let q = self.mul(q, self.inv(ub).unwrap());
        Some(q % self.l.pow(self.r - vb))
    }
}

impl fmt::Debug for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z/{}", self.n)
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z/{}", self.n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_composites() {
        assert!(Modulus::from_order(6).is_err());
        assert!(Modulus::from_order(12).is_err());
        assert_eq!(Modulus::from_order(9).unwrap().l(), 3);
        assert_eq!(Modulus::from_order(8).unwrap().r(), 3);
        assert!(Modulus::new(4, 1).is_err());
    }

    #[test]
    fn division_and_inverse() {
        let m = Modulus::new(2, 3).unwrap();
        assert_eq!(m.inv(3), Some(3));
        assert_eq!(m.inv(2), None);
        let q = m.div(6, 2).unwrap();
        assert_eq!(m.mul(q, 2), 6);
        assert_eq!(m.div(2, 4), None);
        assert_eq!(m.split(12), (3, 2));
    }
}
