//! Polynomials over prime fields and finite fields `F_p[t]/(m(t))`.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::check_prime;

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, b, p);
        }
        b = mulmod(b, b, p);
        e >>= 1;
    }
    r
}

/// Inverse of a nonzero element of `F_p`.
pub fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    powmod(a, p - 2, p)
}

/// A polynomial over `F_p`, coefficients in ascending order, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FpPoly {
    p: u64,
    c: Vec<u64>,
}

impl FpPoly {
    pub fn new(p: u64, mut c: Vec<u64>) -> Self {
        for x in c.iter_mut() {
            *x %= p;
        }
        while c.last() == Some(&0) {
            c.pop();
        }
        FpPoly { p, c }
    }

    pub fn zero(p: u64) -> Self {
        FpPoly { p, c: Vec::new() }
    }

    pub fn constant(p: u64, a: u64) -> Self {
        FpPoly::new(p, vec![a])
    }

    pub fn x(p: u64) -> Self {
        FpPoly::new(p, vec![0, 1])
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.c.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn leading(&self) -> u64 {
        self.c.last().copied().unwrap_or(0)
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        let v = (0..n)
            .map(|i| (self.coeff(i) + o.coeff(i)) % self.p)
            .collect();
        FpPoly::new(self.p, v)
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        let v = (0..n)
            .map(|i| (self.coeff(i) + self.p - o.coeff(i)) % self.p)
            .collect();
        FpPoly::new(self.p, v)
    }

    pub fn scale(&self, a: u64) -> Self {
        FpPoly::new(self.p, self.c.iter().map(|&x| mulmod(x, a, self.p)).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return FpPoly::zero(self.p);
        }
        let mut v = vec![0u64; self.c.len() + o.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate() {
                v[i + j] = (v[i + j] + mulmod(a, b, self.p)) % self.p;
            }
        }
        FpPoly::new(self.p, v)
    }

    pub fn derivative(&self) -> Self {
        let v = self
            .c
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &a)| mulmod(a, i as u64 % self.p, self.p))
            .collect();
        FpPoly::new(self.p, v)
    }

    pub fn eval(&self, x: u64) -> u64 {
        self.c
            .iter()
            .rev()
            .fold(0, |acc, &a| (mulmod(acc, x, self.p) + a) % self.p)
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(inv_mod(self.leading(), self.p))
    }

    /// Quotient and remainder; `d` must be nonzero.
    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let p = self.p;
        let mut r = self.c.clone();
        let dd = d.c.len() - 1;
        if r.len() < d.c.len() {
            return (FpPoly::zero(p), self.clone());
        }
        let inv = inv_mod(d.leading(), p);
        let mut q = vec![0u64; r.len() - dd];
        for k in (0..q.len()).rev() {
            let coef = mulmod(r[k + dd], inv, p);
            q[k] = coef;
            if coef == 0 {
                continue;
            }
            for (j, &b) in d.c.iter().enumerate() {
                r[k + j] = (r[k + j] + p - mulmod(coef, b, p)) % p;
            }
        }
        r.truncate(dd);
        (FpPoly::new(p, q), FpPoly::new(p, r))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.divrem(d).1
    }

    /// Monic gcd (zero if both inputs are zero).
    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Squarefree in the strong sense: `gcd(f, f') = 1` (so `f' ≠ 0`).
    pub fn is_separable(&self) -> bool {
        let d = self.derivative();
        !d.is_zero() && self.gcd(&d).degree() == Some(0)
    }

    /// Irreducibility over `F_p` by Rabin's test.
    pub fn is_irreducible(&self) -> bool {
        let n = match self.degree() {
            None | Some(0) => return false,
            Some(1) => return true,
            Some(n) => n,
        };
        let f = self.monic();
        let x = FpPoly::x(self.p);
        let frob = |g: &FpPoly, times: usize| {
            let mut h = g.clone();
            for _ in 0..times {
                h = pow_mod_poly(&h, self.p, &f);
            }
            h
        };
        let xq_n = frob(&x, n);
        if !xq_n.sub(&x).rem(&f).is_zero() {
            return false;
        }
        let mut m = n;
        let mut primes = Vec::new();
        let mut q = 2;
        while m > 1 {
            if m % q == 0 {
                primes.push(q);
                while m % q == 0 {
                    m /= q;
                }
            }
            q += 1;
        }
        primes.into_iter().all(|q| {
            let h = frob(&x, n / q).sub(&x);
            f.gcd(&h).degree() == Some(0)
        })
    }
}

fn pow_mod_poly(b: &FpPoly, mut e: u64, m: &FpPoly) -> FpPoly {
    let mut r = FpPoly::constant(b.p, 1).rem(m);
    let mut b = b.rem(m);
    while e > 0 {
        if e & 1 == 1 {
            r = r.mul(&b).rem(m);
        }
        b = b.mul(&b).rem(m);
        e >>= 1;
    }
    r
}

impl fmt::Debug for FpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FpPoly(p={}, {:?})", self.p, self.c)
    }
}

/// A finite field `F_p` or `F_p[t]/(m)` with `m` monic irreducible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteField {
    p: u64,
    modulus: Option<FpPoly>,
}

/// An element of a [`FiniteField`], as a polynomial in the generator `t`.
pub type FieldElem = FpPoly;

impl FiniteField {
    pub fn prime_field(p: u64) -> Result<Self> {
        check_prime(p)?;
        Ok(FiniteField { p, modulus: None })
    }

    /// `F_p[t]/(m)`; `m` must be monic and irreducible over `F_p`.
    pub fn extension(p: u64, modulus: &[u64]) -> Result<Self> {
        check_prime(p)?;
        let m = FpPoly::new(p, modulus.to_vec());
        if m.leading() != 1 || !m.is_irreducible() {
            return Err(Error::InvalidInput(
                "residue field modulus must be monic irreducible".into(),
            ));
        }
        if m.degree() == Some(1) {
            return Ok(FiniteField { p, modulus: None });
        }
        Ok(FiniteField {
            p,
            modulus: Some(m),
        })
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.modulus.as_ref().and_then(|m| m.degree()).unwrap_or(1)
    }

    pub fn elem(&self, a: u64) -> FieldElem {
        FpPoly::constant(self.p, a)
    }

    fn reduce(&self, a: FpPoly) -> FieldElem {
        match &self.modulus {
            Some(m) => a.rem(m),
            None => a,
        }
    }

    pub fn from_coeffs(&self, c: &[u64]) -> FieldElem {
        self.reduce(FpPoly::new(self.p, c.to_vec()))
    }

    pub fn zero(&self) -> FieldElem {
        FpPoly::zero(self.p)
    }

    pub fn one(&self) -> FieldElem {
        self.elem(1)
    }

    pub fn add(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        a.add(b)
    }

    pub fn sub(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        a.sub(b)
    }

    pub fn mul(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        self.reduce(a.mul(b))
    }

    pub fn inv(&self, a: &FieldElem) -> Option<FieldElem> {
        if a.is_zero() {
            return None;
        }
        match &self.modulus {
            None => Some(self.elem(inv_mod(a.coeff(0), self.p))),
            Some(m) => {
                let q = (self.p as u128).pow(self.degree() as u32);
                let e = u64::try_from(q - 2).ok()?;
                Some(pow_mod_poly(a, e, m))
            }
        }
    }

    /// Evaluate a polynomial with `F_p` coefficients at a field element.
    pub fn eval(&self, f: &FpPoly, x: &FieldElem) -> FieldElem {
        f.coeffs().iter().rev().fold(self.zero(), |acc, &a| {
            self.add(&self.mul(&acc, x), &self.elem(a))
        })
    }

    /// All field elements, in a fixed order. Intended for small fields.
    pub fn elements(&self) -> Vec<FieldElem> {
        let k = self.degree();
        let total = (self.p as usize).pow(k as u32);
        (0..total)
            .map(|mut idx| {
                let mut c = Vec::with_capacity(k);
                for _ in 0..k {
                    c.push((idx % self.p as usize) as u64);
                    idx /= self.p as usize;
                }
                FpPoly::new(self.p, c)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gcd_and_division() {
        let p = 7;
        let a = FpPoly::new(p, vec![6, 0, 1]); // x^2 - 1
        let b = FpPoly::new(p, vec![1, 1]); // x + 1
        let (q, r) = a.divrem(&b);
        assert!(r.is_zero());
        assert_eq!(q, FpPoly::new(p, vec![6, 1]));
        assert_eq!(a.gcd(&b), b);
        assert!(a.is_separable());
        let sq = b.mul(&b);
        assert!(!sq.is_separable());
    }

    #[test]
    fn irreducibility() {
        assert!(FpPoly::new(2, vec![1, 1, 1]).is_irreducible());
        assert!(!FpPoly::new(2, vec![1, 0, 1]).is_irreducible());
        assert!(FpPoly::new(3, vec![1, 0, 1]).is_irreducible());
        assert!(!FpPoly::new(5, vec![1, 0, 1]).is_irreducible());
        assert!(FpPoly::new(2, vec![1, 1, 0, 1]).is_irreducible());
    }

    #[test]
    fn extension_field_inverse() {
        let f4 = FiniteField::extension(2, &[1, 1, 1]).unwrap();
        assert_eq!(f4.elements().len(), 4);
        for a in f4.elements().iter().filter(|a| !a.is_zero()) {
            let inv = f4.inv(a).unwrap();
            assert_eq!(f4.mul(a, &inv), f4.one());
        }
        assert!(FiniteField::extension(2, &[1, 0, 1]).is_err());
    }
}
