//! End-to-end acceptance run: one line per criterion, non-zero exit if any
//! criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use padic_dynamo::family::{
    count_pcf_in_disk, escape_certificate, ex72_f_iterate, ex72_h_poly, ex72_ideal_membership,
    ex73_family, ex73_gamma, gleason_factor, ord_at_zero_mod, PcfTarget,
};
use padic_dynamo::ff::{FiniteField, FpPoly};
use padic_dynamo::itlog::{
    iterative_log, iterlog_error_bound, verdict, BivariateSeries, CaseTag, VerdictKind,
    DEFAULT_SCHEDULE,
};
use padic_dynamo::lattes::{flexible_lattes, milnor_criterion, LattesSpec, LegendreCurve, PointSet, Torsion};
use padic_dynamo::newton::{count_roots_in_disk, newton_polygon, unit_open};
use padic_dynamo::ratmap::{conjugate, reduce_point, residue_orbit, Mobius, ProjPoint, RationalMap, Reduction, ResiduePoint};
use padic_dynamo::scalar::{exponent, exponent_ratio, padic_residue, ExactScalar, Exponent, Valuation};
use padic_dynamo::series::{gauss_norm_exponent, TruncatedSeries};
use padic_dynamo::{BiPoly, ExactPoly};

type Outcome = Result<(), String>;
type Criterion = (u32, &'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)*) => {
        if !$cond {
            return Err(format!($($msg)*));
        }
    };
}

fn q(s: &str) -> ExactScalar {
    s.parse().unwrap()
}

fn int(v: i64) -> ExactScalar {
    ExactScalar::from_int(v)
}

fn within(start: Instant, limit: Duration, what: &str) -> Outcome {
    let t = start.elapsed();
    ensure!(t < limit, "{what} took {t:?}, limit {limit:?}");
    Ok(())
}

/// Critical orbit of `z² + c` as polynomials in `c`, built from scratch.
fn orbit_oracle(n: usize) -> Vec<ExactPoly> {
    let c = ExactPoly::x();
    let mut out = vec![ExactPoly::zero()];
    for k in 0..n {
        out.push(&(&out[k] * &out[k]) + &c);
    }
    out
}

fn c1_gleason_congruence() -> Outcome {
    let start = Instant::now();
    for n in 1..=10usize {
        let g = gleason_factor(n).map_err(|e| e.to_string())?;
        let red = g.reduce_mod(2).map_err(|e| e.to_string())?;
        let k = 1usize << (n - 1);
        let mut mono = vec![0u64; k + 1];
        mono[k] = 1;
        ensure!(red == FpPoly::new(2, mono), "g_{n} mod 2 is not c^{k}");
        let orb = orbit_oracle(n);
        ensure!(g == &orb[n] + &orb[n - 1], "g_{n} differs from the orbit oracle");
    }
    within(start, Duration::from_secs(60), "criterion 1")
}

fn c2_unit_disk() -> Outcome {
    let radius = unit_open();
    for n in 1..=10usize {
        let g = gleason_factor(n).map_err(|e| e.to_string())?;
        let count = count_pcf_in_disk(PcfTarget::Gleason(n), 2, &int(0), &radius).map_err(|e| e.to_string())?;
        let expect = 1usize << (n - 1);
        ensure!(count == expect, "n = {n}: {count} roots in D(0,1), expected {expect}");
        ensure!(g.deg() == expect, "n = {n}: degree {}", g.deg());
    }
    Ok(())
}

fn c3_g2_roots() -> Outcome {
    let g2 = gleason_factor(2).map_err(|e| e.to_string())?;
    let product = &ExactPoly::linear_root(&int(0)) * &ExactPoly::linear_root(&int(-2));
    ensure!(g2 == product, "g_2 = {g2}, expected c(c + 2)");
    let roots = g2.rational_roots().map_err(|e| e.to_string())?;
    ensure!(roots == vec![int(-2), int(0)], "roots {roots:?}");
    Ok(())
}

/// `F_b^{3^n}(-b) + b` evaluated numerically at an integer `b`.
fn h_at(n: u32, b: i64) -> BigInt {
    let b = BigInt::from(b);
    let mut w = -b.clone();
    for _ in 0..3usize.pow(n) {
        w = &w * &w - 2 * &w + &b + 3;
    }
    w + b
}

fn c4_example_72() -> Outcome {
    let start = Instant::now();
    let mut failures = Vec::new();
    for (n, degree, min_ord, min_roots) in [(1usize, 8usize, 3usize, 3usize), (2, 512, 4, 4)] {
        let h = ex72_h_poly(n).map_err(|e| e.to_string())?;
        for b in [-2i64, -1, 0, 1, 2] {
            let via_poly = h.eval(&int(b));
            ensure!(
                via_poly == ExactScalar::from_bigint(h_at(n as u32, b)),
                "h_{n}({b}) disagrees with direct iteration"
            );
        }
        if h.deg() != degree {
            failures.push(format!("h_{n} has degree {}", h.deg()));
        }
        let ord = ord_at_zero_mod(&h, 3).map_err(|e| e.to_string())?;
        if !ord.is_some_and(|o| o >= min_ord) {
            failures.push(format!("h_{n} mod 3 vanishes to order {ord:?} at b = 0, need >= {min_ord}"));
        }
        if n == 1 && !h.is_squarefree() {
            failures.push("h_1 is not squarefree".into());
        }
        let roots = count_roots_in_disk(&h, 3, &int(0), &unit_open()).map_err(|e| e.to_string())?;
        if roots < min_roots {
            failures.push(format!("h_{n} has {roots} roots of positive valuation, need >= {min_roots}"));
        }
    }
    within(start, Duration::from_secs(300), "criterion 4")?;
    ensure!(failures.is_empty(), "{}", failures.join("; "));
    Ok(())
}

fn c5_ideal() -> Outcome {
    let q3 = &ex72_f_iterate(3) - &BiPoly::y();
    ensure!(
        ex72_ideal_membership(&q3, 2).map_err(|e| e.to_string())?,
        "F_b^3(w) - w is not in I_2"
    );
    Ok(())
}

fn c6_example_73() -> Outcome {
    for p in [2u64, 3, 5] {
        let fam = ex73_family(p);
        let gamma = ex73_gamma(p);
        let at = |z: ExactScalar| fam.eval_y_poly(&ExactPoly::constant(z));
        let qp = ExactScalar::ratio(p as i64 + 1, p as i64);
        ensure!(at(int(1)).is_zero(), "p = {p}: f_c(1) != 0");
        ensure!(at(int(0)) == gamma, "p = {p}: f_c(0) != γ(c)");
        ensure!(at(qp.clone()) == gamma, "p = {p}: f_c((p+1)/p) != γ(c)");
        let f0 = RationalMap::polynomial(fam.eval_x(&int(0))).map_err(|e| e.to_string())?;
        let fixed = ProjPoint::Finite(qp.clone());
        let mult = f0.multiplier(&fixed).map_err(|e| e.to_string())?;
        let expect = int(p as i64 + 1).pow(p as u32 + 1) / int(p as i64).pow(p as u32);
        ensure!(mult == expect, "p = {p}: multiplier {mult}");
        ensure!(mult.valuation(p) == Valuation::Finite(-(p as i64)), "p = {p}: valuation");
    }
    Ok(())
}

fn c7_lattes() -> Outcome {
    for l in [2i64, -1, 3] {
        let curve = LegendreCurve::new(int(l)).map_err(|e| e.to_string())?;
        let f = flexible_lattes(&LattesSpec {
            curve,
            m: 2,
            torsion: Torsion::O,
            h: Mobius::identity(),
        })
        .map_err(|e| e.to_string())?;
        ensure!(f.degree() == 4, "λ = {l}: degree {}", f.degree());
        let crit = f.critical_points().map_err(|e| e.to_string())?;
        ensure!(crit.distinct() == 6 && crit.all_simple(), "λ = {l}: critical divisor {crit:?}");
        let v = milnor_criterion(&f, 16).map_err(|e| e.to_string())?;
        let expect = PointSet::from_points(&[ProjPoint::int(0), ProjPoint::int(1), ProjPoint::int(l), ProjPoint::Infinity]);
        ensure!(v.portrait.strict == expect, "λ = {l}: strict set {:?}", v.portrait.strict);
        ensure!(v.passes, "λ = {l}: criterion fails");
    }
    for coeffs in [[0i64, 0, 1], [-1, 0, 1]] {
        let f = RationalMap::polynomial(ExactPoly::from_ints(&coeffs)).map_err(|e| e.to_string())?;
        let v = milnor_criterion(&f, 16).map_err(|e| e.to_string())?;
        ensure!(!v.passes, "{f} passes");
    }
    Ok(())
}

fn c8_escape() -> Outcome {
    for (d, p, c) in [(2u32, 2u64, "1/2"), (3, 3, "1/3")] {
        let c = q(c);
        let vc = c.valuation(p).finite().unwrap();
        let cert = escape_certificate(d, p, &c, 8)
            .map_err(|e| e.to_string())?
            .ok_or("no certificate")?;
        // direct iteration of the exact orbit
        let mut x = ExactScalar::zero();
        for (k, v) in cert.valuations.iter().enumerate() {
            x = x.pow(d) + &c;
            let expect = (d as i64).pow(k as u32) * vc;
            ensure!(*v == expect, "step {}: {v} != {expect}", k + 1);
            ensure!(x.valuation(p) == Valuation::Finite(expect), "orbit valuation at step {}", k + 1);
        }
        ensure!(cert.valuations.windows(2).all(|w| w[1] < w[0]), "not strictly decreasing");
    }
    Ok(())
}

/// `log(1 + u) = Σ (-1)^{k+1} u^k / k` modulo `p^prec`.
fn log_oracle(u: i64, p: u64, prec: u32) -> BigInt {
    let mut acc = ExactScalar::zero();
    for k in 1..(4 * prec as i64 + 8) {
        let term = int(u).pow(k as u32) / int(k);
        acc = if k % 2 == 1 { acc + term } else { acc - term };
    }
    BigInt::from(padic_residue(&acc, p, prec).unwrap())
}

fn c9_iterative_log() -> Outcome {
    let p = 3u64;
    let psi = BivariateSeries::constant_in_t(p, &ExactPoly::from_ints(&[0, 4]), exponent(-1)).map_err(|e| e.to_string())?;
    let n = 4;
    let res = iterative_log(&psi, &int(0), &int(1), n, 40).map_err(|e| e.to_string())?;
    let err = res.error_exponent.clone().ok_or("C_4 is infinite")?;
    let prec = res.approximation.abs_precision() as u32;
    let approx = BigInt::from(res.approximation.to_residue().map_err(|e| e.to_string())?);
    let modulus = BigInt::from(p).pow(prec);
    let diff = ((approx - log_oracle(3, p, prec)) % &modulus + &modulus) % &modulus;
    let v = padic_dynamo::scalar::int_valuation(&diff, p).unwrap_or(prec as i64);
    ensure!(exponent(v) >= err, "v(approx - log 4) = {v} is below the error exponent {err}");
    for (p, tau0) in [(2u64, exponent(1)), (3u64, exponent(1))] {
        let bounds: Vec<Exponent> = (1..=16)
            .filter_map(|n| iterlog_error_bound(&tau0, p, n, &exponent(0)))
            .collect();
        ensure!(bounds.len() == 16, "p = {p}: some C_n is infinite");
        ensure!(
            bounds.windows(2).all(|w| w[0] <= w[1]),
            "p = {p}: error bounds increase in n"
        );
    }
    Ok(())
}

fn c10_verdicts() -> Outcome {
    let v = verdict(3, 2, &int(-1), &DEFAULT_SCHEDULE).map_err(|e| e.to_string())?;
    ensure!(v.verdict == VerdictKind::PossiblyZero, "c = -1: {:?}", v.verdict);
    let v = verdict(3, 2, &int(1), &DEFAULT_SCHEDULE).map_err(|e| e.to_string())?;
    ensure!(v.verdict == VerdictKind::NonzeroCertified, "c = 1: {:?}", v.verdict);
    ensure!(matches!(v.case, Some(CaseTag::Indifferent { .. })), "c = 1: case {:?}", v.case);
    ensure!(v.n_used.is_some_and(|n| n <= 6), "c = 1: n_used {:?}", v.n_used);
    let v = verdict(2, 2, &int(2), &DEFAULT_SCHEDULE).map_err(|e| e.to_string())?;
    ensure!(v.case == Some(CaseTag::Attracting), "c = 2: case {:?}", v.case);
    let beta: BigInt = v.beta_residue.ok_or("no β")?.parse().unwrap();
    ensure!(&beta % 32 == BigInt::from(6), "β = {beta} mod 32");
    // residual |Ψ(β) - β| ≤ 2^{-5} for Ψ(z) = z² + 2
    let residual = (&beta * &beta + 2 - &beta) % 32;
    ensure!(residual == BigInt::from(0), "residual {residual} mod 32");
    Ok(())
}

fn rand_scalar(rng: &mut ChaCha8Rng, p: u64, vmin: i32, vmax: i32) -> ExactScalar {
    let v = rng.gen_range(vmin..=vmax);
    let mut u: i64 = rng.gen_range(1..200);
    while u % p as i64 == 0 {
        u += 1;
    }
    let den: i64 = loop {
        let d = rng.gen_range(1..20);
        if d % p as i64 != 0 {
            break d;
        }
    };
    let s = if rng.gen_bool(0.5) { -1 } else { 1 };
    let pv = if v >= 0 {
        int(p as i64).pow(v as u32)
    } else {
        int(p as i64).pow((-v) as u32).recip().unwrap()
    };
    ExactScalar::ratio(s * u, den) * pv
}

fn rand_poly(rng: &mut ChaCha8Rng, deg: usize, range: i64) -> ExactPoly {
    loop {
        let c: Vec<i64> = (0..=deg).map(|_| rng.gen_range(-range..=range)).collect();
        let f = ExactPoly::from_ints(&c);
        if f.deg() == deg {
            return f;
        }
    }
}

const PRIMES: [u64; 4] = [2, 3, 5, 7];

fn c11_properties() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0011);

    // Gauss-norm multiplicativity
    for _ in 0..1000 {
        let p = PRIMES[rng.gen_range(0..4)];
        let f: Vec<ExactScalar> = (0..rng.gen_range(1..6)).map(|_| rand_scalar(&mut rng, p, -2, 3)).collect();
        let g: Vec<ExactScalar> = (0..rng.gen_range(1..6)).map(|_| rand_scalar(&mut rng, p, -2, 3)).collect();
        let (f, g) = (ExactPoly::new(f), ExactPoly::new(g));
        let rho = exponent_ratio(rng.gen_range(-6..=6), rng.gen_range(1..=4));
        let e = |h: &ExactPoly| gauss_norm_exponent(&TruncatedSeries::polynomial(h), p, &rho).unwrap();
        ensure!(e(&(&f * &g)) == e(&f) + e(&g), "multiplicativity fails for {f}, {g} at p = {p}");
    }

    // Newton polygon against constructed roots
    for _ in 0..1000 {
        let p = PRIMES[rng.gen_range(0..4)];
        let deg = rng.gen_range(1..=6);
        let mut f = ExactPoly::constant(rand_scalar(&mut rng, p, -2, 2));
        let mut zeros = 0usize;
        let mut vals = Vec::new();
        for _ in 0..deg {
            if rng.gen_bool(0.1) {
                zeros += 1;
                f = &f * &ExactPoly::x();
            } else {
                let r = rand_scalar(&mut rng, p, -3, 3);
                vals.push(exponent(r.valuation(p).finite().unwrap()));
                f = &f * &ExactPoly::linear_root(&r);
            }
        }
        vals.sort();
        let np = newton_polygon(&f, p).map_err(|e| e.to_string())?;
        ensure!(np.zero_order == zeros, "zero order for {f}");
        ensure!(np.root_valuations() == vals, "root valuations for {f} at p = {p}");
    }

    // conjugation round trip
    for _ in 0..1000 {
        let f = loop {
            let d = rng.gen_range(2..=3);
            let num = rand_poly(&mut rng, d, 9);
            let dd = rng.gen_range(0..=d);
        let den = rand_poly(&mut rng, dd, 9);
            if let Ok(f) = RationalMap::new(num, den) {
                if f.degree() >= 2 {
                    break f;
                }
            }
        };
        let h = loop {
            let c: Vec<i64> = (0..4).map(|_| rng.gen_range(-5..=5)).collect();
            if let Ok(h) = Mobius::from_ints(c[0], c[1], c[2], c[3]) {
                break h;
            }
        };
        let back = conjugate(&conjugate(&f, &h), &h.inverse());
        ensure!(back == f, "conjugation round trip fails for {f}");
    }

    // reduction commutes with evaluation
    let mut checked = 0;
    while checked < 1000 {
        let p = PRIMES[rng.gen_range(0..4)];
        let d = rng.gen_range(2..=3);
        let num = rand_poly(&mut rng, d, 12);
        let dd = rng.gen_range(0..=d);
        let den = rand_poly(&mut rng, dd, 12);
        let Ok(f) = RationalMap::new(num, den) else { continue };
        let Ok(Reduction::Good(red)) = f.good_reduction(p) else { continue };
        let field = FiniteField::prime_field(p).unwrap();
        let x = if rng.gen_bool(0.1) {
            ProjPoint::Infinity
        } else {
            ProjPoint::Finite(rand_scalar(&mut rng, p, -1, 3))
        };
        let lhs = reduce_point(&f.evaluate(&x), p);
        let rhs = red.evaluate(&field, &reduce_point(&x, p));
        ensure!(lhs == rhs, "reduction of {f} at {x} mod {p}: {lhs} vs {rhs}");
        checked += 1;
    }

    // residue orbits against brute force
    let mut checked = 0;
    while checked < 1000 {
        let p = PRIMES[rng.gen_range(0..4)];
        let d = rng.gen_range(1..=3);
        let num = rand_poly(&mut rng, d, 20);
        let dd = rng.gen_range(0..=d);
        let den = rand_poly(&mut rng, dd, 20);
        let Ok(f) = RationalMap::new(num, den) else { continue };
        let Ok(Reduction::Good(red)) = f.good_reduction(p) else { continue };
        let field = FiniteField::prime_field(p).unwrap();
        let start_pt = if rng.gen_range(0..=p) == p {
            ResiduePoint::Infinity
        } else {
            ResiduePoint::Finite(field.elem(rng.gen_range(0..p)))
        };
        let mut seen = vec![start_pt.clone()];
        let (m, n) = loop {
            let next = red.evaluate(&field, seen.last().unwrap());
            if let Some(i) = seen.iter().position(|s| *s == next) {
                break (i, seen.len());
            }
            seen.push(next);
        };
        ensure!(residue_orbit(&red, &field, &start_pt) == (m, n), "residue orbit of {start_pt} under {f} mod {p}");
        checked += 1;
    }
    within(start, Duration::from_secs(180), "criterion 11")
}

fn main() {
    let criteria: [Criterion; 11] = [
        (1, "Gleason congruence mod 2, n = 1..10", c1_gleason_congruence),
        (2, "unit-disk containment of g_n roots, n = 1..10", c2_unit_disk),
        (3, "g_2 roots are {0, -2}", c3_g2_roots),
        (4, "h_1 and h_2 degrees, orders, roots", c4_example_72),
        (5, "F_b^3(w) - w lies in I_2", c5_ideal),
        (6, "repelling family identities, p = 2, 3, 5", c6_example_73),
        (7, "flexible Lattès maps and the four-point criterion", c7_lattes),
        (8, "escape valuations", c8_escape),
        (9, "iterative logarithm of 4z at p = 3", c9_iterative_log),
        (10, "verdicts for c = -1, 1 (p = 3) and c = 2 (p = 2)", c10_verdicts),
        (11, "property suites, 1000 cases each", c11_properties),
    ];
    let mut failed = 0;
    for (k, name, f) in criteria {
        let t = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(()) => println!("criterion {k:>2} PASS  {name} ({secs:.2}s)"),
            Err(e) => {
                failed += 1;
                println!("criterion {k:>2} FAIL  {name} ({secs:.2}s): {e}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 11 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
