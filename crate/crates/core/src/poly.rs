//! Dense univariate polynomials over ℚ, plus a small bivariate wrapper.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::ff::FpPoly;
use crate::scalar::{padic_residue, ExactScalar};

/// A polynomial with exact rational coefficients, ascending order, no
/// trailing zeros (the zero polynomial has no coefficients).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExactPoly {
    coeffs: Vec<ExactScalar>,
}

fn lcm_denoms<'a>(it: impl Iterator<Item = &'a ExactScalar>) -> BigInt {
    it.fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
}

fn int_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

impl ExactPoly {
    pub fn new(mut coeffs: Vec<ExactScalar>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        ExactPoly { coeffs }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        ExactPoly::new(c.iter().map(|&x| ExactScalar::from_int(x)).collect())
    }

    pub fn from_bigints(c: Vec<BigInt>) -> Self {
        ExactPoly::new(c.into_iter().map(ExactScalar::from_bigint).collect())
    }

    pub fn zero() -> Self {
        ExactPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        ExactPoly::constant(ExactScalar::one())
    }

    pub fn constant(c: ExactScalar) -> Self {
        ExactPoly::new(vec![c])
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        ExactPoly::monomial(ExactScalar::one(), 1)
    }

    pub fn monomial(c: ExactScalar, k: usize) -> Self {
        let mut v = vec![ExactScalar::zero(); k + 1];
        v[k] = c;
        ExactPoly::new(v)
    }

    /// `x - a`.
    pub fn linear_root(a: &ExactScalar) -> Self {
        ExactPoly::new(vec![-a, ExactScalar::one()])
    }

    pub fn coeffs(&self) -> &[ExactScalar] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> ExactScalar {
        self.coeffs.get(i).cloned().unwrap_or_else(ExactScalar::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree, with the zero polynomial treated as degree 0.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn leading(&self) -> Option<&ExactScalar> {
        self.coeffs.last()
    }

    /// Index of the lowest nonzero coefficient.
    pub fn low_order(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| c.is_one())
    }

    pub fn has_integer_coeffs(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    pub fn scale(&self, s: &ExactScalar) -> Self {
        if s.is_zero() {
            return ExactPoly::zero();
        }
        ExactPoly::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => self.clone(),
            Some(l) => self.scale(&l.recip().expect("nonzero leading coefficient")),
        }
    }

    /// Common denominator `D` and integer coefficients of `D·self`.
    pub fn to_integer_parts(&self) -> (BigInt, Vec<BigInt>) {
        let d = lcm_denoms(self.coeffs.iter());
        let v = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&d / c.denom()))
            .collect();
        (d, v)
    }

    fn from_integer_parts(d: &BigInt, v: Vec<BigInt>) -> Self {
        if d.is_one() {
            return ExactPoly::from_bigints(v);
        }
        ExactPoly::new(
            v.into_iter()
                .map(|n| ExactScalar::new(n, d.clone()).expect("nonzero denominator"))
                .collect(),
        )
    }

    /// Primitive integer polynomial with positive leading coefficient that is
    /// a rational multiple of `self`.
    pub fn primitive_part(&self) -> Vec<BigInt> {
        let (_, v) = self.to_integer_parts();
        let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        if g.is_zero() {
            return v;
        }
        let sign = if v.last().is_some_and(|l| l.is_negative()) {
            -BigInt::one()
        } else {
            BigInt::one()
        };
        v.into_iter().map(|x| x / &g * &sign).collect()
    }

    pub fn eval(&self, x: &ExactScalar) -> ExactScalar {
        if x.is_integer() && self.has_integer_coeffs() {
            let xi = x.numer();
            let mut acc = BigInt::zero();
            for c in self.coeffs.iter().rev() {
                acc = acc * xi + c.numer();
            }
            return ExactScalar::from_bigint(acc);
        }
        let mut acc = ExactScalar::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        ExactPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * ExactScalar::from_int(i as i64))
                .collect(),
        )
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = ExactPoly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// `self(g(x))`.
    pub fn compose(&self, g: &ExactPoly) -> Self {
        let mut acc = ExactPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * g) + &ExactPoly::constant(c.clone());
        }
        acc
    }

    pub fn divrem(&self, d: &ExactPoly) -> Result<(ExactPoly, ExactPoly)> {
        let dl = d.leading().ok_or(Error::ZeroPolynomial)?.clone();
        let dd = d.coeffs.len() - 1;
        if self.coeffs.len() <= dd {
            return Ok((ExactPoly::zero(), self.clone()));
        }
        let inv = dl.recip()?;
        let mut r = self.coeffs.clone();
        let mut q = vec![ExactScalar::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let coef = &r[k + dd] * &inv;
            if !coef.is_zero() {
                for (j, b) in d.coeffs.iter().enumerate() {
                    let t = &coef * b;
                    r[k + j] -= &t;
                }
            }
            q[k] = coef;
        }
        r.truncate(dd);
        Ok((ExactPoly::new(q), ExactPoly::new(r)))
    }

    /// `self / d` if the division is exact.
    pub fn exact_div(&self, d: &ExactPoly) -> Option<ExactPoly> {
        let (q, r) = self.divrem(d).ok()?;
        r.is_zero().then_some(q)
    }

    pub fn divides(&self, f: &ExactPoly) -> bool {
        f.exact_div(self).is_some()
    }

    /// Monic gcd over ℚ; zero iff both inputs are zero.
    pub fn gcd(&self, other: &ExactPoly) -> ExactPoly {
        let (mut a, mut b) = (self.monic(), other.monic());
        while !b.is_zero() {
            let r = a.divrem(&b).expect("nonzero divisor").1;
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// Monic `(g, s, t)` with `s·self + t·other = g`.
    pub fn ext_gcd(&self, other: &ExactPoly) -> (ExactPoly, ExactPoly, ExactPoly) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (ExactPoly::one(), ExactPoly::zero());
        let (mut t0, mut t1) = (ExactPoly::zero(), ExactPoly::one());
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1).expect("nonzero divisor");
            let s = &s0 - &(&q * &s1);
            let t = &t0 - &(&q * &t1);
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
            t0 = t1;
            t1 = t;
        }
        match r0.leading().cloned() {
            None => (r0, s0, t0),
            Some(l) => {
                let inv = l.recip().expect("nonzero");
                (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
            }
        }
    }

    /// Monic least common multiple.
    pub fn lcm(&self, other: &ExactPoly) -> ExactPoly {
        if self.is_zero() || other.is_zero() {
            return ExactPoly::zero();
        }
        let g = self.gcd(other);
        (self * &other.exact_div(&g).expect("gcd divides")).monic()
    }

    /// Squarefree factorization `self = lc · Π f_i^{i}` (Yun); returns the
    /// nonconstant monic `f_i` with their multiplicities.
    pub fn squarefree_factorization(&self) -> Vec<(ExactPoly, usize)> {
        let mut out = Vec::new();
        if self.is_constant() {
            return out;
        }
        let a = self.monic();
        let b = a.derivative();
        let c = a.gcd(&b);
        let mut w = a.exact_div(&c).expect("gcd divides");
        let mut y = b.exact_div(&c).expect("gcd divides");
        let mut z = &y - &w.derivative();
        let mut i = 1;
        while !w.is_constant() {
            let g = w.gcd(&z);
            if !g.is_constant() {
                out.push((g.clone(), i));
            }
            w = w.exact_div(&g).expect("gcd divides");
            y = z.exact_div(&g).expect("gcd divides");
            z = &y - &w.derivative();
            i += 1;
        }
        out
    }

    /// Monic product of the distinct irreducible factors.
    pub fn squarefree_part(&self) -> ExactPoly {
        self.squarefree_factorization()
            .into_iter()
            .fold(ExactPoly::one(), |acc, (f, _)| &acc * &f)
    }

    /// Whether `gcd(f, f')` is constant.
    ///
    /// A reduction modulo a word-size prime that keeps the degree and is
    /// separable proves squarefreeness; exact gcd over ℚ is the fallback.
    pub fn is_squarefree(&self) -> bool {
        if self.is_constant() {
            return true;
        }
        let (_, ints) = self.to_integer_parts();
        let lead = ints.last().expect("nonconstant");
        for q in MODULAR_PRIMES {
            let qb = BigInt::from(q);
            if (lead % &qb).is_zero() {
                continue;
            }
            let red = FpPoly::new(
                q,
                ints.iter()
                    .map(|c| c.mod_floor(&qb).to_u64().expect("reduced"))
                    .collect(),
            );
            if red.is_separable() {
                return true;
            }
        }
        self.gcd(&self.derivative()).is_constant()
    }

    /// Reduction modulo `p`; every coefficient must be p-integral.
    pub fn reduce_mod(&self, p: u64) -> Result<FpPoly> {
        let c = self
            .coeffs
            .iter()
            .map(|a| {
                padic_residue(a, p, 1).map(|r| r.to_u64().expect("residue below p"))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FpPoly::new(p, c))
    }

    /// `self(x + u)`, computed exactly. Rational centers are handled by
    /// rescaling to an integer shift.
    pub fn taylor_shift(&self, u: &ExactScalar) -> ExactPoly {
        if u.is_zero() || self.is_constant() {
            return self.clone();
        }
        let n = self.coeffs.len() - 1;
        let (dc, mut g) = self.to_integer_parts();
        // G(y) = D · v^n · F(y / v), an integer polynomial
        let v = u.denom().clone();
        if !v.is_one() {
            let mut vp = BigInt::one();
            for i in (0..=n).rev() {
                g[i] *= &vp;
                vp *= &v;
            }
        }
        // G(y + num) by synthetic division
        let a = u.numer();
        for i in 0..n {
            for j in (i..n).rev() {
                let t = &g[j + 1] * a;
                g[j] += t;
            }
        }
        // F(x + u) = G(v x + num) / (D v^n)
        let mut vp = BigInt::one();
        for gi in g.iter_mut() {
            *gi *= &vp;
            vp *= &v;
        }
        let denom = dc * v.pow(n as u32);
        ExactPoly::from_integer_parts(&denom, g)
    }

    /// Rational roots without multiplicity, in increasing order.
    ///
    /// Uses the rational root test; fails with `BudgetExceeded` when the
    /// relevant coefficients are too large to enumerate divisors.
    pub fn rational_roots(&self) -> Result<Vec<ExactScalar>> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let mut roots = Vec::new();
        let low = self.low_order().expect("nonzero");
        if low > 0 {
            roots.push(ExactScalar::zero());
        }
        let shifted = ExactPoly::new(self.coeffs[low..].to_vec());
        if shifted.is_constant() {
            return Ok(roots);
        }
        let prim = shifted.primitive_part();
        let a0 = prim[0].abs().to_u64();
        let an = prim.last().expect("nonconstant").abs().to_u64();
        let (a0, an) = match (a0, an) {
            (Some(a), Some(b)) if a <= 1 << 40 && b <= 1 << 40 => (a, b),
            _ => {
                return Err(Error::BudgetExceeded(
                    "coefficients too large for the rational root test".into(),
                ))
            }
        };
        for num in divisors(a0) {
            for den in divisors(an) {
                if num.gcd(&den) != 1 {
                    continue;
                }
                for s in [1i64, -1] {
                    let r = ExactScalar::new(BigInt::from(s * num as i64), BigInt::from(den))?;
                    if shifted.eval(&r).is_zero() {
                        roots.push(r);
                    }
                }
            }
        }
        roots.sort();
        roots.dedup();
        Ok(roots)
    }

    /// Render with the given variable name, highest degree first.
    pub fn to_string_var(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.numer().is_negative();
            let mag = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            if i == 0 {
                out.push_str(&mag.to_string());
            } else if mag.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{mag}*{mono}"));
            }
        }
        out
    }
}

/// Primes just below 2^31 used for modular certificates.
const MODULAR_PRIMES: [u64; 8] = [
    2147483647, 2147483629, 2147483587, 2147483579, 2147483563, 2147483549, 2147483543,
    2147483497,
];

fn divisors(n: u64) -> Vec<u64> {
    if n == 0 {
        return vec![];
    }
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut i = 1u64;
    while i * i <= n {
        if n.is_multiple_of(i) {
            small.push(i);
            if i * i != n {
                large.push(n / i);
            }
        }
        i += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

impl fmt::Display for ExactPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_var("z"))
    }
}

impl fmt::Debug for ExactPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExactPoly({self})")
    }
}

impl Serialize for ExactPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.coeffs.serialize(s)
    }
}

impl Add for &ExactPoly {
    type Output = ExactPoly;
    fn add(self, o: &ExactPoly) -> ExactPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        ExactPoly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }
}

impl Sub for &ExactPoly {
    type Output = ExactPoly;
    fn sub(self, o: &ExactPoly) -> ExactPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        ExactPoly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }
}

impl Mul for &ExactPoly {
    type Output = ExactPoly;
    fn mul(self, o: &ExactPoly) -> ExactPoly {
        if self.is_zero() || o.is_zero() {
            return ExactPoly::zero();
        }
        let (da, a) = self.to_integer_parts();
        let (db, b) = o.to_integer_parts();
        ExactPoly::from_integer_parts(&(da * db), int_mul(&a, &b))
    }
}

impl Neg for &ExactPoly {
    type Output = ExactPoly;
    fn neg(self) -> ExactPoly {
        ExactPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Add for ExactPoly {
    type Output = ExactPoly;
    fn add(self, o: ExactPoly) -> ExactPoly {
        &self + &o
    }
}

impl Sub for ExactPoly {
    type Output = ExactPoly;
    fn sub(self, o: ExactPoly) -> ExactPoly {
        &self - &o
    }
}

impl Mul for ExactPoly {
    type Output = ExactPoly;
    fn mul(self, o: ExactPoly) -> ExactPoly {
        &self * &o
    }
}

impl Neg for ExactPoly {
    type Output = ExactPoly;
    fn neg(self) -> ExactPoly {
        -&self
    }
}

/// A polynomial in `(x, y)` stored as `Σ_j P_j(x) y^j`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct BiPoly {
    rows: Vec<ExactPoly>,
}

impl BiPoly {
    pub fn new(mut rows: Vec<ExactPoly>) -> Self {
        while rows.last().is_some_and(|r| r.is_zero()) {
            rows.pop();
        }
        BiPoly { rows }
    }

    pub fn zero() -> Self {
        BiPoly { rows: Vec::new() }
    }

    /// A polynomial in `x` alone.
    pub fn from_x(p: ExactPoly) -> Self {
        BiPoly::new(vec![p])
    }

    /// A polynomial in `y` with constant coefficients.
    pub fn from_y(p: &ExactPoly) -> Self {
        BiPoly::new(
            p.coeffs()
                .iter()
                .map(|c| ExactPoly::constant(c.clone()))
                .collect(),
        )
    }

    pub fn x() -> Self {
        BiPoly::from_x(ExactPoly::x())
    }

    pub fn y() -> Self {
        BiPoly::new(vec![ExactPoly::zero(), ExactPoly::one()])
    }

    pub fn constant(c: ExactScalar) -> Self {
        BiPoly::from_x(ExactPoly::constant(c))
    }

    pub fn int(c: i64) -> Self {
        BiPoly::constant(ExactScalar::from_int(c))
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    /// Coefficient polynomial in `x` of `y^j`.
    pub fn row(&self, j: usize) -> ExactPoly {
        self.rows.get(j).cloned().unwrap_or_else(ExactPoly::zero)
    }

    pub fn rows(&self) -> &[ExactPoly] {
        &self.rows
    }

    pub fn degree_y(&self) -> Option<usize> {
        self.rows.len().checked_sub(1)
    }

    /// Coefficient of `x^i y^j`.
    pub fn coeff(&self, i: usize, j: usize) -> ExactScalar {
        self.row(j).coeff(i)
    }

    /// Nonzero terms `(i, j, coefficient)` of `x^i y^j`.
    pub fn terms(&self) -> Vec<(usize, usize, ExactScalar)> {
        let mut out = Vec::new();
        for (j, r) in self.rows.iter().enumerate() {
            for (i, c) in r.coeffs().iter().enumerate() {
                if !c.is_zero() {
                    out.push((i, j, c.clone()));
                }
            }
        }
        out
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = BiPoly::int(1);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Substitute `y ↦ q(x, y)`.
    pub fn compose_y(&self, q: &BiPoly) -> BiPoly {
        let mut acc = BiPoly::zero();
        for r in self.rows.iter().rev() {
            acc = &(&acc * q) + &BiPoly::from_x(r.clone());
        }
        acc
    }

    /// Substitute a polynomial in `y` alone, i.e. apply `p(y)` to `self`.
    pub fn apply(p: &ExactPoly, q: &BiPoly) -> BiPoly {
        BiPoly::from_y(p).compose_y(q)
    }

    /// Specialize `x = a`, giving a polynomial in `y`.
    pub fn eval_x(&self, a: &ExactScalar) -> ExactPoly {
        ExactPoly::new(self.rows.iter().map(|r| r.eval(a)).collect())
    }

    /// Specialize `y = q(x)`, giving a polynomial in `x`.
    pub fn eval_y_poly(&self, q: &ExactPoly) -> ExactPoly {
        let mut acc = ExactPoly::zero();
        for r in self.rows.iter().rev() {
            acc = &(&acc * q) + r;
        }
        acc
    }

    /// View as a polynomial in `x` with coefficients in `ℚ[y]` (swap roles).
    pub fn swap(&self) -> BiPoly {
        let nx = self.rows.iter().map(|r| r.coeffs().len()).max().unwrap_or(0);
        BiPoly::new(
            (0..nx)
                .map(|i| ExactPoly::new(self.rows.iter().map(|r| r.coeff(i)).collect()))
                .collect(),
        )
    }

    pub fn derivative_y(&self) -> BiPoly {
        BiPoly::new(
            self.rows
                .iter()
                .enumerate()
                .skip(1)
                .map(|(j, r)| r.scale(&ExactScalar::from_int(j as i64)))
                .collect(),
        )
    }

    pub fn scale(&self, s: &ExactScalar) -> BiPoly {
        BiPoly::new(self.rows.iter().map(|r| r.scale(s)).collect())
    }
}

impl Add for &BiPoly {
    type Output = BiPoly;
    fn add(self, o: &BiPoly) -> BiPoly {
        let n = self.rows.len().max(o.rows.len());
        BiPoly::new((0..n).map(|j| &self.row(j) + &o.row(j)).collect())
    }
}

impl Sub for &BiPoly {
    type Output = BiPoly;
    fn sub(self, o: &BiPoly) -> BiPoly {
        let n = self.rows.len().max(o.rows.len());
        BiPoly::new((0..n).map(|j| &self.row(j) - &o.row(j)).collect())
    }
}

impl Mul for &BiPoly {
    type Output = BiPoly;
    fn mul(self, o: &BiPoly) -> BiPoly {
        if self.is_zero() || o.is_zero() {
            return BiPoly::zero();
        }
        let mut out = vec![ExactPoly::zero(); self.rows.len() + o.rows.len() - 1];
        for (i, a) in self.rows.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.rows.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = &out[i + j] + &(a * b);
                }
            }
        }
        BiPoly::new(out)
    }
}

impl Neg for &BiPoly {
    type Output = BiPoly;
    fn neg(self) -> BiPoly {
        BiPoly::new(self.rows.iter().map(|r| -r).collect())
    }
}
