//! The return map `Ψ(t, z)` of a critical orbit about a stable residue
//! itinerary, its attracting/indifferent classification, attracting fixed
//! points, and the iterative logarithm with certified error exponents.
//!
//! `Ψ_c(z) = f_c^{N-M}(z + f_c^M(0)) - f_c^M(0)` with `c = a + t`. Radii are
//! exponents: `S = p^{-σ_S}` for `t`, `R = p^{-ρ_R}` for `z`.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::family::{
    escape_certificate, stability_certificate, EscapeCertificate, StabilityCertificate,
    UnicriticalFamily,
};
use crate::poly::{BiPoly, ExactPoly};
use crate::ratmap::ProjPoint;
use crate::scalar::{
    ceil_i64, check_prime, exponent, exponent_ratio, exponent_string, int_valuation,
    padic_residue, CappedPadic, ExactScalar, Exponent, Valuation,
};

/// Valuations of `A_{0,0}`, `A_{0,1}` are read modulo `p^VALUATION_CAP`; a
/// residue of zero is treated as valuation `VALUATION_CAP`, which only
/// weakens the derived bounds.
pub const VALUATION_CAP: u32 = 64;

fn modulus(p: u64, k: u32) -> BigInt {
    BigInt::from(p).pow(k)
}

fn residue(x: &ExactScalar, p: u64, k: u32) -> Result<BigInt> {
    padic_residue(x, p, k).map(BigInt::from)
}

/// `min(v_p(x), cap)` for an integer residue modulo `p^cap`.
fn floor_valuation(x: &BigInt, p: u64, cap: u32) -> i64 {
    int_valuation(x, p).map_or(cap as i64, |v| v.min(cap as i64))
}

/// `Ψ(t, ·)` for one parameter, reduced modulo `p^K`.
#[derive(Debug, Clone)]
pub enum Specialized {
    /// Coefficients of a polynomial in `z`.
    Poly { coeffs: Vec<BigInt>, modulus: BigInt },
    /// `z ↦ f^{steps}(z + base) - base` with `f(x) = x^d + c`.
    Unicritical {
        d: u32,
        c: BigInt,
        base: BigInt,
        steps: usize,
        modulus: BigInt,
    },
}

impl Specialized {
    pub fn modulus(&self) -> &BigInt {
        match self {
            Specialized::Poly { modulus, .. } | Specialized::Unicritical { modulus, .. } => modulus,
        }
    }

    pub fn eval(&self, z: &BigInt) -> BigInt {
        match self {
            Specialized::Poly { coeffs, modulus } => {
                let mut acc = BigInt::zero();
                for c in coeffs.iter().rev() {
                    acc = (acc * z + c).mod_floor(modulus);
                }
                acc
            }
            Specialized::Unicritical {
                d,
                c,
                base,
                steps,
                modulus,
            } => {
                let mut x = (z + base).mod_floor(modulus);
                for _ in 0..*steps {
                    x = (x.modpow(&BigInt::from(*d), modulus) + c).mod_floor(modulus);
                }
                (x - base).mod_floor(modulus)
            }
        }
    }

    /// `(Ψ(z), Ψ'(z))`.
    pub fn eval_with_derivative(&self, z: &BigInt) -> (BigInt, BigInt) {
        match self {
            Specialized::Poly { coeffs, modulus } => {
                let mut val = BigInt::zero();
                let mut der = BigInt::zero();
                for c in coeffs.iter().rev() {
                    der = (der * z + &val).mod_floor(modulus);
                    val = (val * z + c).mod_floor(modulus);
                }
                (val, der)
            }
            Specialized::Unicritical {
                d,
                c,
                base,
                steps,
                modulus,
            } => {
                let dd = BigInt::from(*d);
                let dm1 = BigInt::from(*d - 1);
                let mut x = (z + base).mod_floor(modulus);
                let mut der = BigInt::one();
                for _ in 0..*steps {
                    der = (der * &dd * x.modpow(&dm1, modulus)).mod_floor(modulus);
                    x = (x.modpow(&dd, modulus) + c).mod_floor(modulus);
                }
                ((x - base).mod_floor(modulus), der)
            }
        }
    }

    pub fn iterate(&self, z: &BigInt, n: u64) -> BigInt {
        let mut x = z.mod_floor(self.modulus());
        for _ in 0..n {
            x = self.eval(&x);
        }
        x
    }
}

/// A two-variable return map `Ψ(t, z)` on `D(0,S) × D(0,R)`.
pub trait ReturnMap {
    fn prime(&self) -> u64;
    /// `(σ_S, ρ_R)`.
    fn region(&self) -> (Exponent, Exponent);
    /// `Ψ(t, ·)` modulo `p^k`, for a p-integral parameter offset `t`.
    fn specialize(&self, t: &ExactScalar, k: u32) -> Result<Specialized>;

    /// `(A_{0,0}, A_{0,1})` modulo `p^k`.
    fn a00_a01_mod(&self, k: u32) -> Result<(BigInt, BigInt)> {
        let s = self.specialize(&ExactScalar::zero(), k)?;
        Ok(s.eval_with_derivative(&BigInt::zero()))
    }
}

/// `Ψ = Σ A_{i,j} t^i z^j` with exact coefficients, stored as a polynomial
/// in `(t, z)` (`x = t`, `y = z`), with the coefficient bound
/// `v(A_{i,j}) + iσ_S + jρ_R ≥ ρ_R`, strict at `(0,0)`, verified.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BivariateSeries {
    p: u64,
    coeffs: BiPoly,
    sigma_s: Exponent,
    rho_r: Exponent,
}

impl BivariateSeries {
    pub fn new(p: u64, coeffs: BiPoly, sigma_s: Exponent, rho_r: Exponent) -> Result<Self> {
        check_prime(p)?;
        for (i, j, a) in coeffs.terms() {
            let v = a.valuation(p).finite().expect("nonzero term");
            let lhs = exponent(v) + exponent(i as i64) * &sigma_s + exponent(j as i64) * &rho_r;
            let ok = if i == 0 && j == 0 { lhs > rho_r } else { lhs >= rho_r };
            if !ok {
                return Err(Error::CertificateFailure(format!(
                    "coefficient A_({i},{j}) = {a} violates the region bound"
                )));
            }
        }
        Ok(BivariateSeries {
            p,
            coeffs,
            sigma_s,
            rho_r,
        })
    }

    /// A map with no parameter dependence, `Ψ(t, z) = ψ(z)`.
    pub fn constant_in_t(p: u64, psi: &ExactPoly, rho_r: Exponent) -> Result<Self> {
        Self::new(p, BiPoly::from_y(psi), exponent(0), rho_r)
    }

    /// Exact expansion of the return map of the critical point `0` of
    /// `z^d + a + t` along the residue itinerary `(M, N)`, on the unit
    /// bidisk. Fails with `BudgetExceeded` beyond `max_terms` coefficients.
    pub fn build_psi(
        family: &UnicriticalFamily,
        m: usize,
        n: usize,
        max_terms: usize,
    ) -> Result<Self> {
        if n <= m {
            return Err(Error::InvalidInput("need N > M".into()));
        }
        let d = family.d as usize;
        let z_deg = (d as f64).powi((n - m) as i32);
        let t_deg = (d as f64).powi(n as i32 - 1);
        if (z_deg + 1.0) * (t_deg + 1.0) > max_terms as f64 {
            return Err(Error::BudgetExceeded(format!(
                "return map with d = {d}, N - M = {} has too many coefficients",
                n - m
            )));
        }
        let c = ExactPoly::new(vec![family.center.clone(), ExactScalar::one()]);
        let mut base = ExactPoly::zero();
        for _ in 0..m {
            base = &base.pow(family.d) + &c;
        }
        let cb = BiPoly::from_x(c);
        let bb = BiPoly::from_x(base);
        let mut zpoly = &BiPoly::y() + &bb;
        for _ in 0..n - m {
            zpoly = &zpoly.pow(family.d) + &cb;
        }
        Self::new(family.p, &zpoly - &bb, exponent(0), exponent(0))
    }

    pub fn coeffs(&self) -> &BiPoly {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize, j: usize) -> ExactScalar {
        self.coeffs.coeff(i, j)
    }

    pub fn a00(&self) -> ExactScalar {
        self.coeff(0, 0)
    }

    pub fn a01(&self) -> ExactScalar {
        self.coeff(0, 1)
    }
}

impl ReturnMap for BivariateSeries {
    fn prime(&self) -> u64 {
        self.p
    }

    fn region(&self) -> (Exponent, Exponent) {
        (self.sigma_s.clone(), self.rho_r.clone())
    }

    fn specialize(&self, t: &ExactScalar, k: u32) -> Result<Specialized> {
        let m = modulus(self.p, k);
        let tr = residue(t, self.p, k)?;
        let coeffs = self
            .coeffs
            .rows()
            .iter()
            .map(|row| {
                let mut acc = BigInt::zero();
                for a in row.coeffs().iter().rev() {
                    acc = (acc * &tr + residue(a, self.p, k)?).mod_floor(&m);
                }
                Ok(acc)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Specialized::Poly { coeffs, modulus: m })
    }
}

/// The same return map evaluated by iterating `f_c` directly, which stays
/// cheap when the exact expansion would be enormous.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnicriticalReturnMap {
    pub family: UnicriticalFamily,
    pub m: usize,
    pub n: usize,
}

impl UnicriticalReturnMap {
    pub fn new(family: UnicriticalFamily, m: usize, n: usize) -> Result<Self> {
        if n <= m {
            return Err(Error::InvalidInput("need N > M".into()));
        }
        Ok(UnicriticalReturnMap { family, m, n })
    }

    /// The map with `N` replaced by `e(N - M) + M`.
    pub fn with_period_multiple(&self, e: u64) -> Self {
        UnicriticalReturnMap {
            family: self.family.clone(),
            m: self.m,
            n: e as usize * (self.n - self.m) + self.m,
        }
    }
}

impl ReturnMap for UnicriticalReturnMap {
    fn prime(&self) -> u64 {
        self.family.p
    }

    fn region(&self) -> (Exponent, Exponent) {
        (exponent(0), exponent(0))
    }

    fn specialize(&self, t: &ExactScalar, k: u32) -> Result<Specialized> {
        let p = self.family.p;
        let m = modulus(p, k);
        let c = (residue(&self.family.center, p, k)? + residue(t, p, k)?).mod_floor(&m);
        let dd = BigInt::from(self.family.d);
        let mut base = BigInt::zero();
        for _ in 0..self.m {
            base = (base.modpow(&dd, &m) + &c).mod_floor(&m);
        }
        Ok(Specialized::Unicritical {
            d: self.family.d,
            c,
            base,
            steps: self.n - self.m,
            modulus: m,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CaseTag {
    Attracting,
    Indifferent { e: u64 },
}

/// Attracting iff `v(A_{0,1}) > 0`; otherwise `e` is the order of the
/// residue of `A_{0,1}` in `F_p^×`.
pub fn classify_case(psi: &dyn ReturnMap) -> Result<CaseTag> {
    let p = psi.prime();
    let (_, a01) = psi.a00_a01_mod(1)?;
    let r = a01.to_biguint().expect("reduced") % p;
    if r.is_zero() {
        return Ok(CaseTag::Attracting);
    }
    let pm = BigUint::from(p);
    let mut x = r.clone();
    let mut e = 1u64;
    while !x.is_one() {
        x = (x * &r) % &pm;
        e += 1;
    }
    Ok(CaseTag::Indifferent { e })
}

/// Exponent of `t_s = max{s/S, |A_{0,0}|/R, |A_{0,1}|}`; `sigma_s = None`
/// stands for `s = 0`.
pub fn t_s_exponent(psi: &dyn ReturnMap, sigma_s: Option<&Exponent>) -> Result<Exponent> {
    if classify_case(psi)? != CaseTag::Attracting {
        return Err(Error::NotAttracting);
    }
    let p = psi.prime();
    let (sig_big_s, rho_r) = psi.region();
    let (a00, a01) = psi.a00_a01_mod(VALUATION_CAP)?;
    let mut e = exponent(floor_valuation(&a00, p, VALUATION_CAP)) - &rho_r;
    e = e.min(exponent(floor_valuation(&a01, p, VALUATION_CAP)));
    if let Some(s) = sigma_s {
        if s <= &sig_big_s {
            return Err(Error::InvalidInput("need s < S".into()));
        }
        e = e.min(s - &sig_big_s);
    }
    Ok(e)
}

fn offset_exponent(t: &ExactScalar, p: u64) -> Option<Exponent> {
    t.valuation(p).as_exponent()
}

/// The attracting fixed point `β` of `Ψ_t`, as the limit of `Ψ_t^n(0)`,
/// known modulo `p^precision`.
pub fn attracting_fixed_point(
    psi: &dyn ReturnMap,
    t: &ExactScalar,
    precision: u32,
) -> Result<CappedPadic> {
    let p = psi.prime();
    let sigma = offset_exponent(t, p);
    let ts = t_s_exponent(psi, sigma.as_ref())?;
    if ts <= exponent(0) {
        return Err(Error::CertificateFailure("t_s is not below 1".into()));
    }
    let local = psi.specialize(t, precision)?;
    // contraction by t_s per step bounds the number of steps
    let max_steps = ceil_i64(&(exponent(precision as i64 + 1) / &ts)).unwrap_or(i64::MAX) as u64 + 2;
    let mut g = BigInt::zero();
    for _ in 0..=max_steps {
        let next = local.eval(&g);
        if next == g {
            return Ok(CappedPadic::from_residue(
                p,
                &g.to_biguint().expect("reduced"),
                precision,
            ));
        }
        g = next;
    }
    Err(Error::CertificateFailure(
        "fixed-point iteration did not stabilize within the a priori bound".into(),
    ))
}

/// Exponent of `C_n = max_{k≥1} |k|^{-1} (t |p|^{-1/(p^n(p-1))})^k`, given the
/// exponent `τ0` of `t`. `None` when the base is not below 1.
///
/// For fixed `v_p(k)` the smallest such `k` dominates, so only `k = p^j`
/// matter; `p^j τ - j` increases once `p^j (p-1) τ ≥ 1`.
pub fn c_n_exponent(tau0: &Exponent, p: u64, n: u32) -> Option<Exponent> {
    let pn = exponent(p as i64).pow(n as i32);
    let tau = tau0 - exponent(1) / (pn * exponent(p as i64 - 1));
    if tau <= exponent(0) {
        return None;
    }
    let pe = exponent(p as i64);
    let pm1 = exponent(p as i64 - 1);
    let mut pj = exponent(1);
    let mut j = 0i64;
    let mut best = tau.clone();
    loop {
        let val = &pj * &tau - exponent(j);
        if val < best {
            best = val;
        }
        if &pj * &pm1 * &tau >= exponent(1) {
            return Some(best);
        }
        pj *= &pe;
        j += 1;
    }
}

/// Exponent of `C_n · r · |p|^n`.
pub fn iterlog_error_bound(tau0: &Exponent, p: u64, n: u32, r_exponent: &Exponent) -> Option<Exponent> {
    c_n_exponent(tau0, p, n).map(|c| c + r_exponent + exponent(n as i64))
}

/// Radii chosen for the indifferent case: `σ_s̃`, `r`, and the exponent `τ0`
/// of `t`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Bookkeeping {
    #[serde(serialize_with = "ser_exp")]
    pub s_tilde_exponent: Exponent,
    #[serde(serialize_with = "ser_exp")]
    pub r_exponent: Exponent,
    #[serde(serialize_with = "ser_exp")]
    pub tau0: Exponent,
}

fn ser_exp<S: Serializer>(e: &Exponent, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&exponent_string(e))
}

/// Deterministic choices satisfying the strict inequalities: `s̃` halfway
/// between `s` and `S` (one unit inside `S` when `s = 0`), `r` at the
/// midpoint of its allowed interval, `τ0` half the smallest slack.
pub fn indifferent_bookkeeping(psi: &dyn ReturnMap, t: &ExactScalar) -> Result<Bookkeeping> {
    let p = psi.prime();
    let (sig_big_s, rho_r) = psi.region();
    let (a00, a01) = psi.a00_a01_mod(VALUATION_CAP)?;
    if !int_valuation(&a01, p).is_some_and(|v| v == 0) {
        return Err(Error::NotIndifferent);
    }
    let m = modulus(p, VALUATION_CAP);
    let v01m1 = exponent(floor_valuation(&(a01 - BigInt::one()).mod_floor(&m), p, VALUATION_CAP));
    if v01m1 <= exponent(0) {
        return Err(Error::NotIndifferent);
    }
    let v00 = exponent(floor_valuation(&a00, p, VALUATION_CAP));
    let s_tilde = match offset_exponent(t, p) {
        None => &sig_big_s + exponent(1),
        Some(s) if s > sig_big_s => (&s + &sig_big_s) * exponent_ratio(1, 2),
        Some(_) => {
            return Err(Error::InvalidInput(
                "parameter lies outside the certified disk".into(),
            ))
        }
    };
    let gap = &rho_r + &s_tilde - &sig_big_s;
    let upper = v00.clone().min(gap.clone());
    if upper <= rho_r {
        return Err(Error::CertificateFailure("no admissible radius r".into()));
    }
    let r = (&rho_r + &upper) * exponent_ratio(1, 2);
    let slack = [&v00 - &r, v01m1, &r - &rho_r, &gap - &r]
        .into_iter()
        .min()
        .expect("nonempty");
    Ok(Bookkeeping {
        s_tilde_exponent: s_tilde,
        r_exponent: r,
        tau0: slack * exponent_ratio(1, 2),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IterlogApprox {
    /// `p^{-n}(Ψ^{p^n}(z) - z)`, known to absolute precision `K - n`.
    pub approximation: CappedPadic,
    /// Exponent of the certified distance to `Λ(c, z)`; `None` if `C_n` is
    /// not yet finite at this `n`.
    pub error_exponent: Option<Exponent>,
    pub bookkeeping: Bookkeeping,
    pub n: u32,
}

/// `p^{-n}(Ψ_t^{p^n}(z) - z)` computed modulo `p^precision` before the
/// division.
pub fn iterative_log(
    psi: &dyn ReturnMap,
    t: &ExactScalar,
    z: &ExactScalar,
    n: u32,
    precision: u32,
) -> Result<IterlogApprox> {
    let p = psi.prime();
    let bk = indifferent_bookkeeping(psi, t)?;
    let r_disk = crate::scalar::LogRadius::closed(bk.r_exponent.clone());
    if !r_disk.contains_valuation(z.valuation(p)) {
        return Err(Error::InvalidInput("z lies outside the disk of radius r".into()));
    }
    if precision <= n {
        return Err(Error::PrecisionExhausted(format!(
            "dividing by p^{n} leaves no digits of p^{precision}"
        )));
    }
    let local = psi.specialize(t, precision)?;
    let z0 = residue(z, p, precision)?;
    let steps = p
        .checked_pow(n)
        .ok_or_else(|| Error::BudgetExceeded("p^n iterations".into()))?;
    let zn = local.iterate(&z0, steps);
    let diff = (zn - &z0).mod_floor(local.modulus());
    let approx = CappedPadic::from_residue(p, &diff.to_biguint().expect("reduced"), precision)
        .shift(-(n as i64));
    Ok(IterlogApprox {
        approximation: approx,
        error_exponent: iterlog_error_bound(&bk.tau0, p, n, &bk.r_exponent),
        bookkeeping: bk,
        n,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PreperiodicVerdict {
    /// `|approximation| > p^{-error_exponent} ≥ |Λ - approximation|`.
    NonzeroCertified {
        approximation: CappedPadic,
        error_exponent: Exponent,
    },
    /// Everything computed is `0` modulo `p^precision`.
    PossiblyZero { precision: Exponent },
}

impl PreperiodicVerdict {
    pub fn is_certified(&self) -> bool {
        matches!(self, PreperiodicVerdict::NonzeroCertified { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerdictOutcome {
    pub verdict: PreperiodicVerdict,
    pub n_used: u32,
    pub bookkeeping: Option<Bookkeeping>,
}

/// Extra digits carried beyond the error exponent.
const GUARD_DIGITS: u32 = 8;

/// Escalate `n` through `schedule` until `Λ(t, 0) ≠ 0` is certified.
pub fn preperiodic_verdict(
    psi: &dyn ReturnMap,
    t: &ExactScalar,
    schedule: &[u32],
) -> Result<VerdictOutcome> {
    let bk = indifferent_bookkeeping(psi, t)?;
    let p = psi.prime();
    let mut last: Option<(u32, Exponent)> = None;
    for &n in schedule {
        let Some(err) = iterlog_error_bound(&bk.tau0, p, n, &bk.r_exponent) else {
            continue;
        };
        let need = ceil_i64(&err).unwrap_or(0).max(1) as u32;
        let k = n + need + GUARD_DIGITS;
        let res = iterative_log(psi, t, &ExactScalar::zero(), n, k)?;
        let cap = exponent(res.approximation.abs_precision());
        let err_eff = err.clone().min(cap);
        if let Valuation::Finite(v) = res.approximation.valuation() {
            if exponent(v) < err_eff {
                return Ok(VerdictOutcome {
                    verdict: PreperiodicVerdict::NonzeroCertified {
                        approximation: res.approximation,
                        error_exponent: err_eff,
                    },
                    n_used: n,
                    bookkeeping: Some(bk),
                });
            }
        }
        last = Some((n, err_eff));
    }
    let (n_used, precision) = last.ok_or_else(|| {
        Error::Inconclusive("no step of the schedule has a finite error bound".into())
    })?;
    Ok(VerdictOutcome {
        verdict: PreperiodicVerdict::PossiblyZero { precision },
        n_used,
        bookkeeping: Some(bk),
    })
}

/// Attracting case: with `β` known mod `p^P` and `B_1 = Ψ'(β)`, an iterate
/// `x` with `v(B_1) < v(x - β) < P` satisfies `|Ψ(x) - β| = |B_1||x - β|`, so
/// the orbit of `0` never reaches `β`, the only periodic point in the basin.
pub fn attracting_verdict(psi: &dyn ReturnMap, t: &ExactScalar, precision: u32) -> Result<VerdictOutcome> {
    let p = psi.prime();
    let beta = attracting_fixed_point(psi, t, precision)?;
    let b = BigInt::from(beta.to_residue()?);
    let local = psi.specialize(t, precision)?;
    let (_, b1) = local.eval_with_derivative(&b);
    let vb1 = int_valuation(&b1, p);
    let ts = t_s_exponent(psi, offset_exponent(t, p).as_ref())?;
    let max_steps = ceil_i64(&(exponent(precision as i64 + 1) / &ts)).unwrap_or(0).max(1) as u32 + 2;
    let m = local.modulus().clone();
    let mut x = BigInt::zero();
    for k in 0..=max_steps {
        let y = (&x - &b).mod_floor(&m);
        let Some(w) = int_valuation(&y, p) else {
            return Ok(VerdictOutcome {
                verdict: PreperiodicVerdict::PossiblyZero {
                    precision: exponent(precision as i64),
                },
                n_used: k,
                bookkeeping: None,
            });
        };
        if vb1.is_some_and(|v| v < w) {
            return Ok(VerdictOutcome {
                verdict: PreperiodicVerdict::NonzeroCertified {
                    approximation: CappedPadic::from_residue(
                        p,
                        &y.to_biguint().expect("reduced"),
                        precision,
                    ),
                    error_exponent: exponent(precision as i64),
                },
                n_used: k,
                bookkeeping: None,
            });
        }
        x = local.eval(&x);
    }
    Err(Error::Inconclusive("orbit did not approach the fixed point".into()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum VerdictKind {
    Escapes,
    NonzeroCertified,
    PossiblyZero,
}

/// Full certificate chain for `z^d + c` at one parameter.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerdictReport {
    pub p: u64,
    pub d: u32,
    pub c: ExactScalar,
    pub verdict: VerdictKind,
    pub escape: Option<EscapeCertificate>,
    pub stability: Option<StabilityCertificate>,
    pub case: Option<CaseTag>,
    pub e: Option<u64>,
    pub n_used: Option<u32>,
    pub approximation_valuation: Option<Valuation>,
    #[serde(serialize_with = "ser_opt_exp")]
    pub error_exponent: Option<Exponent>,
    pub beta_residue: Option<String>,
    pub bookkeeping: Option<Bookkeeping>,
}

fn ser_opt_exp<S: Serializer>(e: &Option<Exponent>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match e {
        Some(e) => s.serialize_some(&exponent_string(e)),
        None => s.serialize_none(),
    }
}

/// Working precision for the attracting branch.
pub const ATTRACTING_PRECISION: u32 = 40;

/// Escape certificate when `v(c) < 0`; otherwise the residue itinerary of
/// `0` about `c` itself, the case split on `A_{0,1}`, and the matching
/// non-preperiodicity test.
pub fn verdict(p: u64, d: u32, c: &ExactScalar, schedule: &[u32]) -> Result<VerdictReport> {
    check_prime(p)?;
    let mut report = VerdictReport {
        p,
        d,
        c: c.clone(),
        verdict: VerdictKind::PossiblyZero,
        escape: None,
        stability: None,
        case: None,
        e: None,
        n_used: None,
        approximation_valuation: None,
        error_exponent: None,
        beta_residue: None,
        bookkeeping: None,
    };
    if let Some(cert) = escape_certificate(d, p, c, 6)? {
        report.escape = Some(cert);
        report.verdict = VerdictKind::Escapes;
        return Ok(report);
    }
    let family = UnicriticalFamily::new(d, p, c.clone())?;
    let stab = stability_certificate(&family)?;
    let it = stab
        .for_point(&ProjPoint::int(0))
        .expect("itinerary of 0")
        .clone();
    report.stability = Some(stab);
    let psi = UnicriticalReturnMap::new(family, it.m, it.n)?;
    let case = classify_case(&psi)?;
    report.case = Some(case);
    let t = ExactScalar::zero();
    let outcome = match case {
        CaseTag::Attracting => {
            let beta = attracting_fixed_point(&psi, &t, ATTRACTING_PRECISION)?;
            report.beta_residue = Some(beta.to_residue()?.to_string());
            attracting_verdict(&psi, &t, ATTRACTING_PRECISION)?
        }
        CaseTag::Indifferent { e } => {
            report.e = Some(e);
            preperiodic_verdict(&psi.with_period_multiple(e), &t, schedule)?
        }
    };
    report.n_used = Some(outcome.n_used);
    report.bookkeeping = outcome.bookkeeping;
    match outcome.verdict {
        PreperiodicVerdict::NonzeroCertified {
            approximation,
            error_exponent,
        } => {
            report.verdict = VerdictKind::NonzeroCertified;
            report.approximation_valuation = Some(approximation.valuation());
            report.error_exponent = Some(error_exponent);
        }
        PreperiodicVerdict::PossiblyZero { precision } => {
            report.verdict = VerdictKind::PossiblyZero;
            report.error_exponent = Some(precision);
        }
    }
    Ok(report)
}

/// Escalation used by the CLI: `n = 1..=6`.
pub const DEFAULT_SCHEDULE: [u32; 6] = [1, 2, 3, 4, 5, 6];
