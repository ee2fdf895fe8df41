//! Flexible Lattès maps on Legendre curves `y² = x(x-1)(x-λ)` and the
//! four-point postcritical criterion.
//!
//! Finite sets of algebraic points of `P¹` are kept as a monic squarefree
//! polynomial plus a flag for `∞`; images are computed with characteristic
//! polynomials, so no extension field is ever built.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::ExactPoly;
use crate::ratmap::{Mobius, ProjPoint, RationalMap};
use crate::scalar::ExactScalar;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LegendreCurve {
    lambda: ExactScalar,
}

impl LegendreCurve {
    pub fn new(lambda: ExactScalar) -> Result<Self> {
        if lambda.is_zero() || lambda.is_one() {
            return Err(Error::InvalidInput(format!("λ = {lambda} gives a singular curve")));
        }
        Ok(LegendreCurve { lambda })
    }

    pub fn lambda(&self) -> &ExactScalar {
        &self.lambda
    }

    /// `x(x-1)(x-λ)`.
    pub fn cubic(&self) -> ExactPoly {
        ExactPoly::new(vec![
            ExactScalar::zero(),
            self.lambda.clone(),
            -(ExactScalar::one() + &self.lambda),
            ExactScalar::one(),
        ])
    }

    /// `x`-coordinates of the 2-torsion: `0, 1, λ, ∞`.
    pub fn two_torsion_x(&self) -> PointSet {
        PointSet {
            poly: self.cubic(),
            infinity: true,
        }
    }
}

/// The 2-torsion point `T` in `[m]P + T`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Torsion {
    O,
    /// `(0, 0)`
    Zero,
    /// `(1, 0)`
    One,
    /// `(λ, 0)`
    Lambda,
}

impl Torsion {
    pub const ALL: [Torsion; 4] = [Torsion::O, Torsion::Zero, Torsion::One, Torsion::Lambda];

    /// The action `x(P) ↦ x(P + T)`.
    pub fn translation(self, curve: &LegendreCurve) -> Mobius {
        let l = curve.lambda.clone();
        let o = ExactScalar::one;
        let z = ExactScalar::zero;
        let m = match self {
            Torsion::O => return Mobius::identity(),
            Torsion::Zero => Mobius::new(z(), l, o(), z()),
            Torsion::One => Mobius::new(o(), -&l, o(), -o()),
            Torsion::Lambda => Mobius::new(l.clone(), -&l, o(), -&l),
        };
        m.expect("λ ≠ 0, 1")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LattesSpec {
    pub curve: LegendreCurve,
    pub m: u32,
    pub torsion: Torsion,
    pub h: Mobius,
}

/// The map `f` with `f(x(P)) = x([m]P)`, for `m ∈ {2, 3}`.
pub fn x_multiplication(m: u32, curve: &LegendreCurve) -> Result<RationalMap> {
    let l = curve.lambda.clone();
    let s = |v: i64| ExactScalar::from_int(v);
    let x = ExactPoly::x();
    match m {
        2 => {
            let a = ExactPoly::new(vec![-&l, s(0), s(1)]);
            RationalMap::new(a.pow(2), curve.cubic().scale(&s(4)))
        }
        3 => {
            let b2 = s(-4) * (s(1) + &l);
            let b4 = s(2) * &l;
            let b8 = -(&l * &l);
            let psi3 = ExactPoly::new(vec![
                b8.clone(),
                s(0),
                s(3) * &b4,
                b2.clone(),
                s(3),
            ]);
            let f4 = ExactPoly::new(vec![
                &b4 * &b8,
                &b2 * &b8,
                s(10) * &b8,
                s(0),
                s(5) * &b4,
                b2,
                s(2),
            ]);
            let psi2_sq = curve.cubic().scale(&s(4));
            let den = psi3.pow(2);
            let num = &(&x * &den) - &(&psi2_sq * &f4);
            RationalMap::new(num, den)
        }
        _ => Err(Error::UnsupportedM(m)),
    }
}

/// `h ∘ τ_T ∘ f_m ∘ h^{-1}`, of degree `m²`.
pub fn flexible_lattes(spec: &LattesSpec) -> Result<RationalMap> {
    let fm = x_multiplication(spec.m, &spec.curve)?;
    let translated = spec.torsion.translation(&spec.curve).to_map().compose(&fm);
    let f = crate::ratmap::conjugate(&translated, &spec.h.inverse());
    debug_assert_eq!(f.degree(), (spec.m * spec.m) as usize);
    Ok(f)
}

/// A finite set of points of `P¹(ℚ̄)`: the roots of a monic squarefree
/// polynomial, and possibly `∞`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointSet {
    poly: ExactPoly,
    infinity: bool,
}

impl PointSet {
    pub fn empty() -> Self {
        PointSet {
            poly: ExactPoly::one(),
            infinity: false,
        }
    }

    pub fn from_roots(f: &ExactPoly, infinity: bool) -> Self {
        let poly = if f.is_constant() {
            ExactPoly::one()
        } else {
            f.squarefree_part()
        };
        PointSet { poly, infinity }
    }

    pub fn point(x: &ProjPoint) -> Self {
        match x {
            ProjPoint::Finite(a) => PointSet::from_roots(&ExactPoly::linear_root(a), false),
            ProjPoint::Infinity => PointSet {
                poly: ExactPoly::one(),
                infinity: true,
            },
        }
    }

    pub fn from_points(pts: &[ProjPoint]) -> Self {
        pts.iter()
            .fold(PointSet::empty(), |acc, x| acc.union(&PointSet::point(x)))
    }

    pub fn polynomial(&self) -> &ExactPoly {
        &self.poly
    }

    pub fn has_infinity(&self) -> bool {
        self.infinity
    }

    pub fn len(&self) -> usize {
        self.poly.deg() + usize::from(self.infinity)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn union(&self, o: &PointSet) -> PointSet {
        PointSet {
            poly: self.poly.lcm(&o.poly),
            infinity: self.infinity || o.infinity,
        }
    }

    pub fn intersection(&self, o: &PointSet) -> PointSet {
        PointSet {
            poly: self.poly.gcd(&o.poly),
            infinity: self.infinity && o.infinity,
        }
    }

    pub fn contains_set(&self, o: &PointSet) -> bool {
        self.intersection(o) == *o
    }

    /// The rational points in the set; irrational roots are omitted.
    pub fn rational_points(&self) -> Result<Vec<ProjPoint>> {
        let mut out: Vec<ProjPoint> = self
            .poly
            .rational_roots()?
            .into_iter()
            .map(ProjPoint::Finite)
            .collect();
        if self.infinity {
            out.push(ProjPoint::Infinity);
        }
        Ok(out)
    }

    /// `f(S)`.
    pub fn image(&self, f: &RationalMap) -> PointSet {
        let h = f.denominator();
        let poles = self.poly.gcd(h);
        let rest = self.poly.exact_div(&poles).expect("gcd divides");
        let mut out = PointSet::from_roots(&image_polynomial(f, &rest), !poles.is_constant());
        if self.infinity {
            out = out.union(&PointSet::point(&f.evaluate(&ProjPoint::Infinity)));
        }
        out
    }
}

impl Serialize for PointSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("PointSet", 4)?;
        st.serialize_field("size", &self.len())?;
        st.serialize_field("polynomial", &self.poly.to_string_var("x"))?;
        st.serialize_field("infinity", &self.infinity)?;
        let rat: Vec<String> = self
            .rational_points()
            .unwrap_or_default()
            .iter()
            .map(ToString::to_string)
            .collect();
        st.serialize_field("rational_points", &rat)?;
        st.end()
    }
}

/// Characteristic polynomial of multiplication by `g/h` on `ℚ[x]/(P)`, i.e.
/// `Π (Y - f(α))` over the roots `α` of `P`, assuming `gcd(P, h) = 1`.
fn image_polynomial(f: &RationalMap, p: &ExactPoly) -> ExactPoly {
    let n = p.deg();
    if n == 0 {
        return ExactPoly::one();
    }
    let (_, s, _) = f.denominator().ext_gcd(p);
    let u = (f.numerator() * &s).divrem(p).expect("nonzero").1;
    // columns: u · x^i mod P
    let mut mat = vec![vec![ExactScalar::zero(); n]; n];
    let mut col = u;
    for i in 0..n {
        for (r, row) in mat.iter_mut().enumerate() {
            row[i] = col.coeff(r);
        }
        col = (&col * &ExactPoly::x()).divrem(p).expect("nonzero").1;
    }
    charpoly(&mat)
}

/// Faddeev–LeVerrier.
fn charpoly(a: &[Vec<ExactScalar>]) -> ExactPoly {
    let n = a.len();
    let mul = |x: &[Vec<ExactScalar>], y: &[Vec<ExactScalar>]| -> Vec<Vec<ExactScalar>> {
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        (0..n).fold(ExactScalar::zero(), |acc, k| acc + &x[i][k] * &y[k][j])
                    })
                    .collect()
            })
            .collect()
    };
    let mut c = vec![ExactScalar::zero(); n + 1];
    c[n] = ExactScalar::one();
    let mut mk = vec![vec![ExactScalar::zero(); n]; n];
    for k in 1..=n {
        let mut next = mul(a, &mk);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += &c[n - k + 1];
        }
        mk = next;
        let am = mul(a, &mk);
        let tr = (0..n).fold(ExactScalar::zero(), |acc, i| acc + &am[i][i]);
        c[n - k] = -(tr / ExactScalar::from_int(k as i64));
    }
    ExactPoly::new(c)
}

/// Critical points as a set, with whether each is simple: `W` squarefree and
/// `∞` of multiplicity at most one.
pub fn critical_set(f: &RationalMap) -> Result<(PointSet, bool)> {
    let d = f.degree();
    if d < 2 {
        return Err(Error::InvalidInput("degree below 2".into()));
    }
    let w = f.wronskian();
    let at_infinity = 2 * d - 2 - w.deg();
    let simple = at_infinity <= 1 && (w.is_constant() || w.is_squarefree());
    Ok((PointSet::from_roots(&w, at_infinity > 0), simple))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PostcriticalPortrait {
    pub critical: PointSet,
    /// Union of the strict forward orbits of the critical points.
    pub strict: PointSet,
    /// Forward-orbit iterations until the strict set stabilized.
    pub steps: usize,
}

/// Largest point-set degree tolerated while closing orbits.
pub const MAX_SET_DEGREE: usize = 512;

pub fn postcritical_set(f: &RationalMap, budget: usize) -> Result<PostcriticalPortrait> {
    let (critical, _) = critical_set(f)?;
    let mut strict = critical.image(f);
    for step in 1..=budget {
        let next = strict.union(&strict.image(f));
        if next == strict {
            return Ok(PostcriticalPortrait {
                critical,
                strict,
                steps: step,
            });
        }
        if next.len() > MAX_SET_DEGREE {
            break;
        }
        strict = next;
    }
    Err(Error::BudgetExceeded(
        "critical orbits did not close within the budget".into(),
    ))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MilnorVerdict {
    pub passes: bool,
    pub strictly_postcritical_count: usize,
    pub all_critical_simple: bool,
    pub none_strictly_postcritical_critical: bool,
    pub critical_count: usize,
    pub portrait: PostcriticalPortrait,
}

/// Four strictly postcritical points, all critical points simple, and no
/// critical point strictly postcritical.
pub fn milnor_criterion(f: &RationalMap, budget: usize) -> Result<MilnorVerdict> {
    let (_, simple) = critical_set(f)?;
    let portrait = postcritical_set(f, budget)?;
    let count = portrait.strict.len();
    let disjoint = portrait.strict.intersection(&portrait.critical).is_empty();
    Ok(MilnorVerdict {
        passes: count == 4 && simple && disjoint,
        strictly_postcritical_count: count,
        all_critical_simple: simple,
        none_strictly_postcritical_critical: disjoint,
        critical_count: portrait.critical.len(),
        portrait,
    })
}
