//! Rational maps over ℚ: iteration on ℙ¹, critical divisors, multipliers,
//! Möbius conjugation, cross-ratios, explicit good reduction and orbits in
//! the residue field.

use std::collections::HashMap;
use std::fmt;

use num_traits::ToPrimitive;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::ff::{FieldElem, FiniteField, FpPoly};
use crate::poly::ExactPoly;
use crate::scalar::{check_prime, padic_residue, ExactScalar, Valuation};

/// A point of `ℙ¹(ℚ)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ProjPoint {
    Finite(ExactScalar),
    Infinity,
}

impl ProjPoint {
    pub fn int(n: i64) -> Self {
        ProjPoint::Finite(ExactScalar::from_int(n))
    }

    /// Homogeneous coordinates `[x : y]`.
    pub fn homogeneous(&self) -> (ExactScalar, ExactScalar) {
        match self {
            ProjPoint::Finite(x) => (x.clone(), ExactScalar::one()),
            ProjPoint::Infinity => (ExactScalar::one(), ExactScalar::zero()),
        }
    }

    pub fn finite(&self) -> Option<&ExactScalar> {
        match self {
            ProjPoint::Finite(x) => Some(x),
            ProjPoint::Infinity => None,
        }
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProjPoint::Finite(x) => write!(f, "{x}"),
            ProjPoint::Infinity => write!(f, "inf"),
        }
    }
}

impl Serialize for ProjPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// `z ↦ (az + b) / (cz + d)` with `ad - bc ≠ 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mobius {
    pub a: ExactScalar,
    pub b: ExactScalar,
    pub c: ExactScalar,
    pub d: ExactScalar,
}

impl Mobius {
    pub fn new(a: ExactScalar, b: ExactScalar, c: ExactScalar, d: ExactScalar) -> Result<Self> {
        if (&a * &d - &b * &c).is_zero() {
            return Err(Error::InvalidInput("Mobius determinant is zero".into()));
        }
        Ok(Mobius { a, b, c, d })
    }

    pub fn from_ints(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        Self::new(
            ExactScalar::from_int(a),
            ExactScalar::from_int(b),
            ExactScalar::from_int(c),
            ExactScalar::from_int(d),
        )
    }

    pub fn identity() -> Self {
        Self::from_ints(1, 0, 0, 1).expect("invertible")
    }

    /// `z ↦ αz + β`.
    pub fn affine(alpha: ExactScalar, beta: ExactScalar) -> Result<Self> {
        Self::new(alpha, beta, ExactScalar::zero(), ExactScalar::one())
    }

    pub fn inverse(&self) -> Self {
        Mobius {
            a: self.d.clone(),
            b: -&self.b,
            c: -&self.c,
            d: self.a.clone(),
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, o: &Mobius) -> Mobius {
        Mobius {
            a: &self.a * &o.a + &self.b * &o.c,
            b: &self.a * &o.b + &self.b * &o.d,
            c: &self.c * &o.a + &self.d * &o.c,
            d: &self.c * &o.b + &self.d * &o.d,
        }
    }

    pub fn apply(&self, z: &ProjPoint) -> ProjPoint {
        let (x, y) = z.homogeneous();
        let num = &self.a * &x + &self.b * &y;
        let den = &self.c * &x + &self.d * &y;
        if den.is_zero() {
            ProjPoint::Infinity
        } else {
            ProjPoint::Finite(num / den)
        }
    }

    pub fn to_map(&self) -> RationalMap {
        RationalMap::new(
            ExactPoly::new(vec![self.b.clone(), self.a.clone()]),
            ExactPoly::new(vec![self.d.clone(), self.c.clone()]),
        )
        .expect("degree one")
    }
}

/// `g / h` with `gcd(g, h) = 1` and `h` monic.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalMap {
    num: ExactPoly,
    den: ExactPoly,
}

impl RationalMap {
    pub fn new(num: ExactPoly, den: ExactPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::InvalidInput("zero denominator".into()));
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = if g.is_constant() {
            (num, den)
        } else {
            (
                num.exact_div(&g).expect("gcd divides"),
                den.exact_div(&g).expect("gcd divides"),
            )
        };
        let l = den.leading().expect("nonzero").recip()?;
        num = num.scale(&l);
        den = den.scale(&l);
        let f = RationalMap { num, den };
        if f.degree() == 0 {
            return Err(Error::InvalidInput("constant map".into()));
        }
        Ok(f)
    }

    pub fn polynomial(f: ExactPoly) -> Result<Self> {
        Self::new(f, ExactPoly::one())
    }

    pub fn identity() -> Self {
        Self::polynomial(ExactPoly::x()).expect("degree one")
    }

    pub fn numerator(&self) -> &ExactPoly {
        &self.num
    }

    pub fn denominator(&self) -> &ExactPoly {
        &self.den
    }

    pub fn degree(&self) -> usize {
        self.num.deg().max(self.den.deg())
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    pub fn evaluate(&self, x: &ProjPoint) -> ProjPoint {
        match x {
            ProjPoint::Finite(x) => {
                let h = self.den.eval(x);
                if h.is_zero() {
                    ProjPoint::Infinity
                } else {
                    ProjPoint::Finite(self.num.eval(x) / h)
                }
            }
            ProjPoint::Infinity => {
                let (dg, dh) = (self.num.degree(), self.den.deg());
                match dg {
                    Some(dg) if dg > dh => ProjPoint::Infinity,
                    Some(dg) if dg == dh => ProjPoint::Finite(
                        self.num.leading().expect("nonzero") / self.den.leading().expect("nonzero"),
                    ),
                    _ => ProjPoint::Finite(ExactScalar::zero()),
                }
            }
        }
    }

    pub fn iterate(&self, x: &ProjPoint, n: usize) -> ProjPoint {
        (0..n).fold(x.clone(), |acc, _| self.evaluate(&acc))
    }

    /// `self ∘ g`.
    pub fn compose(&self, g: &RationalMap) -> RationalMap {
        let d = self.degree();
        let (a, b) = (&g.num, &g.den);
        let mut apow = vec![ExactPoly::one()];
        let mut bpow = vec![ExactPoly::one()];
        for i in 1..=d {
            apow.push(&apow[i - 1] * a);
            bpow.push(&bpow[i - 1] * b);
        }
        let homog = |f: &ExactPoly| {
            let mut acc = ExactPoly::zero();
            for (i, c) in f.coeffs().iter().enumerate() {
                if !c.is_zero() {
                    acc = &acc + &(&apow[i] * &bpow[d - i]).scale(c);
                }
            }
            acc
        };
        RationalMap::new(homog(&self.num), homog(&self.den)).expect("composition of nonconstant maps")
    }

    /// Wronskian `g'h - gh'`; its roots are the finite critical points.
    pub fn wronskian(&self) -> ExactPoly {
        &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative())
    }

    /// `f'(x)` at a finite point with `h(x) ≠ 0`.
    pub fn derivative_at(&self, x: &ExactScalar) -> Result<ExactScalar> {
        let h = self.den.eval(x);
        if h.is_zero() {
            return Err(Error::InvalidInput("pole".into()));
        }
        Ok(self.wronskian().eval(x) / (&h * &h))
    }

    pub fn multiplier(&self, fixed: &ProjPoint) -> Result<ExactScalar> {
        if &self.evaluate(fixed) != fixed {
            return Err(Error::NotFixed);
        }
        match fixed {
            ProjPoint::Finite(x) => self.derivative_at(x),
            ProjPoint::Infinity => {
                let inv = Mobius::from_ints(0, 1, 1, 0).expect("invertible");
                conjugate(self, &inv).derivative_at(&ExactScalar::zero())
            }
        }
    }

    pub fn critical_points(&self) -> Result<CriticalDivisor> {
        let d = self.degree();
        if d < 2 {
            return Err(Error::InvalidInput("degree below 2".into()));
        }
        let w = self.wronskian();
        let infinity = 2 * d - 2 - w.deg();
        let mut points = Vec::new();
        for (factor, mult) in w.squarefree_factorization() {
            let mut rest = factor.clone();
            if let Ok(roots) = factor.rational_roots() {
                for r in roots {
                    rest = rest.exact_div(&ExactPoly::linear_root(&r)).expect("root");
                    points.push(CriticalPoint {
                        locus: Locus::Point(ProjPoint::Finite(r)),
                        multiplicity: mult,
                    });
                }
            }
            if !rest.is_constant() {
                points.push(CriticalPoint {
                    locus: Locus::Roots(rest),
                    multiplicity: mult,
                });
            }
        }
        if infinity > 0 {
            points.push(CriticalPoint {
                locus: Locus::Point(ProjPoint::Infinity),
                multiplicity: infinity,
            });
        }
        Ok(CriticalDivisor { points })
    }

    /// Reduction modulo `p` after the unit normalization.
    pub fn good_reduction(&self, p: u64) -> Result<Reduction> {
        check_prime(p)?;
        let all = self.num.coeffs().iter().chain(self.den.coeffs().iter());
        let mut pivot: Option<(i64, ExactScalar)> = None;
        for c in all {
            if let Valuation::Finite(v) = c.valuation(p) {
                if pivot.as_ref().is_none_or(|(pv, _)| v < *pv) {
                    pivot = Some((v, c.clone()));
                }
            }
        }
        let inv = pivot.expect("nonzero map").1.recip()?;
        let g = self.num.scale(&inv).reduce_mod(p)?;
        let h = self.den.scale(&inv).reduce_mod(p)?;
        let reduced_degree = if g.is_zero() || h.is_zero() {
            0
        } else {
            let c = g.gcd(&h);
            let g2 = g.divrem(&c).0;
            let h2 = h.divrem(&c).0;
            g2.degree().unwrap_or(0).max(h2.degree().unwrap_or(0))
        };
        if reduced_degree == self.degree() {
            Ok(Reduction::Good(ReducedMap {
                p,
                num: g,
                den: h,
            }))
        } else {
            Ok(Reduction::Bad { reduced_degree })
        }
    }
}

/// `h^{-1} ∘ f ∘ h`.
pub fn conjugate(f: &RationalMap, h: &Mobius) -> RationalMap {
    h.inverse().to_map().compose(&f.compose(&h.to_map()))
}

/// `(β1-β2)(β3-β4) / ((β1-β4)(β3-β2))`, with differences taken as 2×2
/// determinants of homogeneous coordinates.
pub fn cross_ratio_lambda(b: [&ProjPoint; 4]) -> Result<ExactScalar> {
    let h: Vec<_> = b.iter().map(|x| x.homogeneous()).collect();
    let det = |i: usize, j: usize| &h[i].0 * &h[j].1 - &h[j].0 * &h[i].1;
    for i in 0..4 {
        for j in i + 1..4 {
            if det(i, j).is_zero() {
                return Err(Error::DegenerateQuadruple);
            }
        }
    }
    Ok(det(0, 1) * det(2, 3) / (det(0, 3) * det(2, 1)))
}

impl fmt::Display for RationalMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_polynomial() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RationalMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalMap({self})")
    }
}

impl Serialize for RationalMap {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("RationalMap", 3)?;
        st.serialize_field("degree", &self.degree())?;
        st.serialize_field("numerator", &self.num)?;
        st.serialize_field("denominator", &self.den)?;
        st.end()
    }
}

/// Where a critical point sits: a rational point, or the roots of a
/// squarefree polynomial with no rational roots.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Locus {
    Point(ProjPoint),
    Roots(ExactPoly),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CriticalPoint {
    pub locus: Locus,
    /// Multiplicity of each point in the locus (local degree minus one).
    pub multiplicity: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CriticalDivisor {
    pub points: Vec<CriticalPoint>,
}

impl CriticalDivisor {
    /// Total count with multiplicity; `2d - 2` by Riemann–Hurwitz.
    pub fn total(&self) -> usize {
        self.points
            .iter()
            .map(|c| {
                let n = match &c.locus {
                    Locus::Point(_) => 1,
                    Locus::Roots(f) => f.deg(),
                };
                n * c.multiplicity
            })
            .sum()
    }

    /// Number of geometric critical points.
    pub fn distinct(&self) -> usize {
        self.points
            .iter()
            .map(|c| match &c.locus {
                Locus::Point(_) => 1,
                Locus::Roots(f) => f.deg(),
            })
            .sum()
    }

    pub fn multiplicity_at(&self, x: &ProjPoint) -> usize {
        self.points
            .iter()
            .find(|c| c.locus == Locus::Point(x.clone()))
            .map_or(0, |c| c.multiplicity)
    }

    pub fn all_simple(&self) -> bool {
        self.points.iter().all(|c| c.multiplicity == 1)
    }
}

/// The reduction of a map with good reduction: `ḡ / h̄` over `F_p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedMap {
    pub p: u64,
    pub num: FpPoly,
    pub den: FpPoly,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Reduction {
    Good(ReducedMap),
    Bad { reduced_degree: usize },
}

impl Reduction {
    pub fn is_good(&self) -> bool {
        matches!(self, Reduction::Good(_))
    }
}

/// A point of `ℙ¹` over a finite field.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ResiduePoint {
    Finite(FieldElem),
    Infinity,
}

impl fmt::Display for ResiduePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ResiduePoint::Finite(x) if x.degree().unwrap_or(0) == 0 => write!(f, "{}", x.coeff(0)),
            ResiduePoint::Finite(x) => write!(f, "{:?}", x.coeffs()),
            ResiduePoint::Infinity => write!(f, "inf"),
        }
    }
}

impl Serialize for ResiduePoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Reduction `ℙ¹(ℚ) → ℙ¹(F_p)`.
pub fn reduce_point(x: &ProjPoint, p: u64) -> ResiduePoint {
    match x {
        ProjPoint::Infinity => ResiduePoint::Infinity,
        ProjPoint::Finite(x) => match padic_residue(x, p, 1) {
            Ok(r) => ResiduePoint::Finite(FpPoly::constant(p, r.to_u64().expect("below p"))),
            Err(_) => ResiduePoint::Infinity,
        },
    }
}

impl ReducedMap {
    pub fn degree(&self) -> usize {
        self.num.degree().unwrap_or(0).max(self.den.degree().unwrap_or(0))
    }

    pub fn evaluate(&self, field: &FiniteField, x: &ResiduePoint) -> ResiduePoint {
        match x {
            ResiduePoint::Finite(x) => {
                let h = field.eval(&self.den, x);
                match field.inv(&h) {
                    None => ResiduePoint::Infinity,
                    Some(hi) => ResiduePoint::Finite(field.mul(&field.eval(&self.num, x), &hi)),
                }
            }
            ResiduePoint::Infinity => {
                let dg = self.num.degree();
                let dh = self.den.degree().unwrap_or(0);
                match dg {
                    Some(dg) if dg > dh => ResiduePoint::Infinity,
                    Some(dg) if dg == dh => {
                        let inv = field.inv(&field.elem(self.den.leading())).expect("nonzero");
                        ResiduePoint::Finite(field.mul(&field.elem(self.num.leading()), &inv))
                    }
                    _ => ResiduePoint::Finite(field.zero()),
                }
            }
        }
    }

    pub fn iterate(&self, field: &FiniteField, x: &ResiduePoint, n: usize) -> ResiduePoint {
        (0..n).fold(x.clone(), |acc, _| self.evaluate(field, &acc))
    }
}

/// Minimal `M < N` with `f̄^N(x̄) = f̄^M(x̄)`.
pub fn residue_orbit(f: &ReducedMap, field: &FiniteField, x: &ResiduePoint) -> (usize, usize) {
    let mut seen: HashMap<ResiduePoint, usize> = HashMap::new();
    let mut cur = x.clone();
    let mut n = 0;
    loop {
        if let Some(&m) = seen.get(&cur) {
            return (m, n);
        }
        seen.insert(cur.clone(), n);
        cur = f.evaluate(field, &cur);
        n += 1;
    }
}
