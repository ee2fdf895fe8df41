//! The unicritical family `f_c(z) = z^d + c`: orbit polynomials in `c`,
//! PCF parameter counts in p-adic disks, escape and stability certificates,
//! critical orbit relations, and the two worked families with a shifted
//! critical structure.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ff::FiniteField;
use crate::newton::count_roots_in_disk;
use crate::poly::{BiPoly, ExactPoly};
use crate::ratmap::{
    reduce_point, residue_orbit, ProjPoint, RationalMap, Reduction, ResiduePoint,
};
use crate::scalar::{check_prime, ExactScalar, LogRadius, Valuation};

/// `f_c(z) = z^d + c` with parameter `c = a + t` about the center `a`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UnicriticalFamily {
    pub d: u32,
    pub p: u64,
    pub center: ExactScalar,
}

impl UnicriticalFamily {
    pub fn new(d: u32, p: u64, center: ExactScalar) -> Result<Self> {
        check_prime(p)?;
        if d < 2 {
            return Err(Error::InvalidInput("degree must be at least 2".into()));
        }
        if let Valuation::Finite(v) = center.valuation(p) {
            if v < 0 {
                return Err(Error::NegativeValuation);
            }
        }
        Ok(UnicriticalFamily { d, p, center })
    }

    /// The map at parameter `c`.
    pub fn map_at(&self, c: &ExactScalar) -> RationalMap {
        unicritical_map(self.d, c)
    }
}

pub fn unicritical_map(d: u32, c: &ExactScalar) -> RationalMap {
    let mut coeffs = vec![ExactScalar::zero(); d as usize + 1];
    coeffs[0] = c.clone();
    coeffs[d as usize] = ExactScalar::one();
    RationalMap::polynomial(ExactPoly::new(coeffs)).expect("degree at least 1")
}

/// `f_c^k(0)` as polynomials in `c`, for `k = 0..=n`.
fn critical_orbit_polys(d: u32, n: usize) -> Vec<ExactPoly> {
    let c = ExactPoly::x();
    let mut out = vec![ExactPoly::zero()];
    for k in 0..n {
        let next = &out[k].pow(d) + &c;
        out.push(next);
    }
    out
}

/// `G_{m,n}(c) = f_c^n(0) - f_c^m(0)`.
pub fn orbit_poly(d: u32, m: usize, n: usize) -> Result<ExactPoly> {
    if n <= m {
        return Err(Error::InvalidInput("need n > m".into()));
    }
    if d < 2 {
        return Err(Error::InvalidInput("degree must be at least 2".into()));
    }
    let orb = critical_orbit_polys(d, n);
    Ok(&orb[n] - &orb[m])
}

/// `g_n(c) = f_c^n(0) + f_c^{n-1}(0)` for `f_c = z² + c`.
pub fn gleason_factor(n: usize) -> Result<ExactPoly> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be at least 1".into()));
    }
    let orb = critical_orbit_polys(2, n);
    Ok(&orb[n] + &orb[n - 1])
}

/// Whether `g_n ≡ c^{2^{n-1}} (mod 2)`.
pub fn gleason_mod2_check(n: usize) -> Result<bool> {
    let g = gleason_factor(n)?;
    let red = g.reduce_mod(2)?;
    let k = 1usize << (n - 1);
    Ok(red.degree() == Some(k) && red.coeffs().iter().take(k).all(|&c| c == 0))
}

/// Which parameter polynomial to count roots of.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PcfTarget {
    Relation { d: u32, m: usize, n: usize },
    Gleason(usize),
}

impl PcfTarget {
    pub fn polynomial(&self) -> Result<ExactPoly> {
        match *self {
            PcfTarget::Relation { d, m, n } => orbit_poly(d, m, n),
            PcfTarget::Gleason(n) => gleason_factor(n),
        }
    }
}

/// Number of parameters (with multiplicity) in the disk satisfying the
/// target relation.
pub fn count_pcf_in_disk(
    target: PcfTarget,
    p: u64,
    center: &ExactScalar,
    radius: &LogRadius,
) -> Result<usize> {
    if let Valuation::Finite(v) = center.valuation(p) {
        if v < 0 {
            return Err(Error::NegativeValuation);
        }
    }
    count_roots_in_disk(&target.polynomial()?, p, center, radius)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EscapeCertificate {
    pub d: u32,
    pub p: u64,
    pub c: ExactScalar,
    /// `v(f_c^n(0))` for `n = 1..=k`.
    pub valuations: Vec<i64>,
    pub proof: &'static str,
}

/// When `v(c) < 0`, each iterate satisfies `d·v(x) < v(c)`, so
/// `v(x^d + c) = d·v(x)` and the critical orbit escapes.
pub fn escape_certificate(d: u32, p: u64, c: &ExactScalar, k: usize) -> Result<Option<EscapeCertificate>> {
    check_prime(p)?;
    let vc = match c.valuation(p) {
        Valuation::Finite(v) if v < 0 => v,
        _ => return Ok(None),
    };
    let mut vals = vec![vc];
    while vals.len() < k {
        let v = *vals.last().expect("nonempty");
        let dv = v.checked_mul(d as i64).ok_or_else(|| {
            Error::BudgetExceeded("valuation exceeds 64-bit range".into())
        })?;
        if dv >= vc {
            return Err(Error::CertificateFailure("valuation did not drop".into()));
        }
        vals.push(dv);
    }
    vals.truncate(k);
    Ok(Some(EscapeCertificate {
        d,
        p,
        c: c.clone(),
        valuations: vals,
        proof: "strictly decreasing valuations",
    }))
}

/// Residue-disk itinerary of one critical point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CriticalItinerary {
    pub critical_point: ProjPoint,
    pub m: usize,
    pub n: usize,
    /// Residue classes `U_0..U_N`; `U_N = U_M`.
    pub disks: Vec<ResiduePoint>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StabilityCertificate {
    pub family: UnicriticalFamily,
    pub itineraries: Vec<CriticalItinerary>,
}

impl StabilityCertificate {
    pub fn for_point(&self, x: &ProjPoint) -> Option<&CriticalItinerary> {
        self.itineraries.iter().find(|i| &i.critical_point == x)
    }
}

/// Residue orbits of the critical points `0` and `∞` under `z^d + ā`.
///
/// Good reduction makes `f` map the residue disk of `x̄` onto that of
/// `f̄(x̄)`, so each step of the chain is checked as `U_{j+1} = f̄(U_j)`.
pub fn stability_certificate(family: &UnicriticalFamily) -> Result<StabilityCertificate> {
    let p = family.p;
    let f = family.map_at(&family.center);
    let Reduction::Good(red) = f.good_reduction(p)? else {
        return Err(Error::CertificateFailure("no good reduction at the center".into()));
    };
    let field = FiniteField::prime_field(p)?;
    let mut itineraries = Vec::new();
    for cp in [ProjPoint::int(0), ProjPoint::Infinity] {
        let start = reduce_point(&cp, p);
        let (m, n) = residue_orbit(&red, &field, &start);
        let mut disks = vec![start];
        for j in 0..n {
            let next = red.evaluate(&field, &disks[j]);
            disks.push(next);
        }
        if disks[n] != disks[m] {
            return Err(Error::CertificateFailure("residue chain does not close".into()));
        }
        itineraries.push(CriticalItinerary {
            critical_point: cp,
            m,
            n,
            disks,
        });
    }
    Ok(StabilityCertificate {
        family: family.clone(),
        itineraries,
    })
}

/// `f^m(α_i) = f^n(α_j)`; marked point 0 is the critical point `z = 0`,
/// marked point 1 is `∞`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct OrbitRelation {
    pub i: usize,
    pub j: usize,
    pub m: usize,
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum OrbitEvidence {
    Relations(Vec<OrbitRelation>),
    NotPcf(EscapeCertificate),
    /// No repeat within the limits; heights (bits) of the orbit points seen.
    Inconclusive { steps: usize, height_bits: Vec<u64> },
}

/// Search the exact orbit of `0` for a repeat.
pub fn detect_orbit_relations(
    d: u32,
    p: u64,
    c: &ExactScalar,
    budget: usize,
    height_cap_bits: u64,
) -> Result<OrbitEvidence> {
    if let Some(cert) = escape_certificate(d, p, c, 6)? {
        return Ok(OrbitEvidence::NotPcf(cert));
    }
    let f = unicritical_map(d, c);
    let mut seen: HashMap<ExactScalar, usize> = HashMap::new();
    let mut heights = Vec::new();
    let mut x = ExactScalar::zero();
    for k in 0..=budget {
        if let Some(&m) = seen.get(&x) {
            let rels = vec![
                OrbitRelation { i: 0, j: 0, m, n: k },
                OrbitRelation { i: 1, j: 1, m: 0, n: 1 },
            ];
            return Ok(OrbitEvidence::Relations(rels));
        }
        let h = x.height_bits();
        heights.push(h);
        if h > height_cap_bits {
            break;
        }
        seen.insert(x.clone(), k);
        x = f.evaluate(&ProjPoint::Finite(x)).finite().expect("polynomial").clone();
    }
    Ok(OrbitEvidence::Inconclusive {
        steps: heights.len(),
        height_bits: heights,
    })
}

/// Re-check a relation on the exact orbit.
pub fn relation_holds(d: u32, c: &ExactScalar, rel: &OrbitRelation) -> bool {
    let f = unicritical_map(d, c);
    let start = |i: usize| if i == 0 { ProjPoint::int(0) } else { ProjPoint::Infinity };
    f.iterate(&start(rel.i), rel.m) == f.iterate(&start(rel.j), rel.n)
}

/// Largest supported `n` for the `3^n`-fold iterate.
pub const EX72_MAX_N: usize = 2;

/// `h_n(b) = F_b^{3^n}(-b) + b` with `F_b(w) = w² - 2w + (b + 3)`.
pub fn ex72_h_poly(n: usize) -> Result<ExactPoly> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be at least 1".into()));
    }
    if n > EX72_MAX_N {
        return Err(Error::BudgetExceeded(format!(
            "degree 2^(3^{n}) is beyond the supported range (n <= {EX72_MAX_N})"
        )));
    }
    let b = ExactPoly::x();
    let shift = ExactPoly::from_ints(&[3, 1]);
    let mut w = -&b;
    for _ in 0..3usize.pow(n as u32) {
        // w² - 2w + b + 3
        w = &(&(&w * &w) - &w.scale(&ExactScalar::from_int(2))) + &shift;
    }
    Ok(&w + &b)
}

/// `F_b(w)` as a polynomial in `(b, w)` (`x = b`, `y = w`).
pub fn ex72_f() -> BiPoly {
    let w = BiPoly::y();
    &(&(&w * &w) - &w.scale(&ExactScalar::from_int(2))) + &(&BiPoly::x() + &BiPoly::int(3))
}

/// `F_b^k(w)` as a polynomial in `(b, w)`.
pub fn ex72_f_iterate(k: usize) -> BiPoly {
    let f = ex72_f();
    (0..k).fold(BiPoly::y(), |acc, _| f.compose_y(&acc))
}

/// Order of vanishing at 0 of the reduction mod `p`; `None` if `f ≡ 0`.
pub fn ord_at_zero_mod(f: &ExactPoly, p: u64) -> Result<Option<usize>> {
    let red = f.reduce_mod(p)?;
    Ok(red.coeffs().iter().position(|&c| c != 0))
}

/// Membership of an integer polynomial in `(b, w)` in
/// `I_n = ⟨3, w^{n+1}⟩ + b⟨b, w⟩^{n-1}`.
pub fn ex72_ideal_membership(q: &BiPoly, n: usize) -> Result<bool> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be at least 1".into()));
    }
    for (i, j, c) in q.terms() {
        if !c.is_integer() {
            return Err(Error::InvalidInput("coefficients must be integers".into()));
        }
        if (c.numer() % 3u32) == num_bigint::BigInt::from(0) {
            continue;
        }
        if j <= n && (i == 0 || i + j < n) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Ex72Report {
    pub n: usize,
    pub degree: usize,
    pub monic: bool,
    pub ord_at_0_mod3: Option<usize>,
    pub squarefree: bool,
    pub roots_in_unit_open_disk: usize,
}

pub fn ex72_report(n: usize) -> Result<Ex72Report> {
    let h = ex72_h_poly(n)?;
    Ok(Ex72Report {
        n,
        degree: h.deg(),
        monic: h.is_monic(),
        ord_at_0_mod3: ord_at_zero_mod(&h, 3)?,
        squarefree: h.is_squarefree(),
        roots_in_unit_open_disk: count_roots_in_disk(
            &h,
            3,
            &ExactScalar::zero(),
            &LogRadius::open(crate::scalar::exponent(0)),
        )?,
    })
}

/// `f_c(z) = γ(c)·(p z^{p+1} - (p+1) z^p + 1)` with `γ(c) = c + (p+1)/p`, as a
/// polynomial in `(c, z)` (`x = c`, `y = z`).
pub fn ex73_family(p: u64) -> BiPoly {
    let pi = p as i64;
    let gamma = ex73_gamma(p);
    let mut shape = vec![ExactScalar::zero(); p as usize + 2];
    shape[0] = ExactScalar::one();
    shape[p as usize] = ExactScalar::from_int(-(pi + 1));
    shape[p as usize + 1] = ExactScalar::from_int(pi);
    &BiPoly::from_x(gamma) * &BiPoly::from_y(&ExactPoly::new(shape))
}

/// `γ(c) = c + (p+1)/p`.
pub fn ex73_gamma(p: u64) -> ExactPoly {
    ExactPoly::new(vec![ExactScalar::ratio(p as i64 + 1, p as i64), ExactScalar::one()])
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CriticalEntry {
    pub point: ProjPoint,
    pub multiplicity: usize,
    pub local_degree: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Ex73Report {
    pub p: u64,
    pub f_of_1_is_zero: bool,
    pub f_of_0_is_gamma: bool,
    pub f_of_q_is_gamma: bool,
    pub critical_points: Vec<CriticalEntry>,
    pub gamma0_fixed: bool,
    pub multiplier: ExactScalar,
    pub multiplier_valuation: Valuation,
    pub repelling: bool,
}

pub fn ex73_report(p: u64) -> Result<Ex73Report> {
    check_prime(p)?;
    let fam = ex73_family(p);
    let gamma = ex73_gamma(p);
    let at = |z: ExactScalar| fam.eval_y_poly(&ExactPoly::constant(z));
    let q = ExactScalar::ratio(p as i64 + 1, p as i64);
    let f0 = RationalMap::polynomial(fam.eval_x(&ExactScalar::zero()))?;
    let crit = f0.critical_points()?;
    let critical_points = [ProjPoint::int(0), ProjPoint::int(1), ProjPoint::Infinity]
        .into_iter()
        .map(|x| {
            let m = crit.multiplicity_at(&x);
            CriticalEntry {
                point: x,
                multiplicity: m,
                local_degree: m + 1,
            }
        })
        .collect::<Vec<_>>();
    if critical_points.iter().map(|c| c.multiplicity).sum::<usize>() != crit.total() {
        return Err(Error::CertificateFailure("unexpected critical points".into()));
    }
    let g0 = ProjPoint::Finite(q.clone());
    let gamma0_fixed = f0.evaluate(&g0) == g0;
    let multiplier = f0.multiplier(&g0)?;
    let v = multiplier.valuation(p);
    Ok(Ex73Report {
        p,
        f_of_1_is_zero: at(ExactScalar::one()).is_zero(),
        f_of_0_is_gamma: at(ExactScalar::zero()) == gamma,
        f_of_q_is_gamma: at(q) == gamma,
        critical_points,
        gamma0_fixed,
        repelling: matches!(v, Valuation::Finite(x) if x < 0),
        multiplier,
        multiplier_valuation: v,
    })
}
