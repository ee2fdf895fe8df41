use num_bigint::BigInt;
use proptest::prelude::*;

use padic_dynamo::itlog::{c_n_exponent, iterative_log, BivariateSeries};
use padic_dynamo::lattes::{flexible_lattes, milnor_criterion, LattesSpec, LegendreCurve, Torsion};
use padic_dynamo::newton::newton_polygon;
use padic_dynamo::ratmap::Mobius;
use padic_dynamo::scalar::{exponent, exponent_ratio, padic_residue, ExactScalar, LogRadius, Valuation};
use padic_dynamo::series::{weierstrass_degree, TruncatedSeries};
use padic_dynamo::ExactPoly;

fn small_prime() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![2u64, 3, 5, 7])
}

fn int_poly(max_deg: usize) -> impl Strategy<Value = ExactPoly> {
    prop::collection::vec(-50i64..50, 1..=max_deg + 1)
        .prop_map(|c| ExactPoly::from_ints(&c))
        .prop_filter("nonzero", |f| !f.is_zero())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    /// Segment lengths sum to the degree minus the order at zero.
    #[test]
    fn newton_lengths_sum_to_degree(f in int_poly(8), p in small_prime()) {
        let np = newton_polygon(&f, p).unwrap();
        prop_assert_eq!(np.degree(), f.deg());
        prop_assert!(np.segments.windows(2).all(|w| w[0].slope < w[1].slope));
    }

    /// Open-disk degree never exceeds the closed-disk degree at the same radius.
    #[test]
    fn open_degree_at_most_closed(f in int_poly(6), p in small_prime(), n in -4i64..4, d in 1i64..4) {
        let h = TruncatedSeries::polynomial(&f);
        let rho = exponent_ratio(n, d);
        let open = weierstrass_degree(&h, p, &LogRadius::open(rho.clone())).unwrap();
        let closed = weierstrass_degree(&h, p, &LogRadius::closed(rho)).unwrap();
        prop_assert!(open <= closed);
    }

    /// `C_n` is non-increasing, i.e. its exponent is non-decreasing.
    #[test]
    fn c_n_monotone(p in small_prime(), num in 1i64..20, den in 1i64..10) {
        let tau0 = exponent_ratio(num, den);
        let vals: Vec<_> = (1..10).filter_map(|n| c_n_exponent(&tau0, p, n)).collect();
        prop_assert!(vals.windows(2).all(|w| w[0] <= w[1]));
    }

    /// For `Ψ(z) = (1 + p^k u) z`, the approximations of `Λ(1) = log(1 + p^k u)`
    /// all have valuation `k` (odd `p`).
    #[test]
    fn log_valuation_of_linear_maps(p in prop::sample::select(vec![3u64, 5, 7]), k in 1i64..3, u in 1i64..30, n in 1u32..4) {
        prop_assume!(u % p as i64 != 0);
        let a = 1 + (p as i64).pow(k as u32) * u;
        let psi = BivariateSeries::constant_in_t(p, &ExactPoly::from_ints(&[0, a]), exponent(-1)).unwrap();
        let res = iterative_log(&psi, &ExactScalar::zero(), &ExactScalar::one(), n, 30).unwrap();
        prop_assert_eq!(res.approximation.valuation(), Valuation::Finite(k));
    }

    /// Successive approximations agree to the certified error.
    #[test]
    fn iterates_are_cauchy(a in prop::sample::select(vec![4i64, 7, 10, 16, -2])) {
        let p = 3u64;
        let psi = BivariateSeries::constant_in_t(p, &ExactPoly::from_ints(&[0, a]), exponent(-1)).unwrap();
        let z = ExactScalar::one();
        let r3 = iterative_log(&psi, &ExactScalar::zero(), &z, 3, 40).unwrap();
        let r4 = iterative_log(&psi, &ExactScalar::zero(), &z, 4, 40).unwrap();
        let e3 = r3.error_exponent.unwrap();
        let diff = r3.approximation.sub(&r4.approximation);
        if let Valuation::Finite(v) = diff.valuation() {
            prop_assert!(exponent(v) >= e3);
        }
    }

    /// The Milnor verdict is invariant under affine conjugation.
    #[test]
    fn milnor_conjugation_invariant(
        l in prop::sample::select(vec![2i64, -1, 3, 5, -3]),
        t in prop::sample::select(Torsion::ALL.to_vec()),
        alpha in prop::sample::select(vec![1i64, -1, 2, 3]),
        beta in -3i64..3,
    ) {
        let h = Mobius::affine(ExactScalar::from_int(alpha), ExactScalar::from_int(beta)).unwrap();
        let spec = |h: Mobius| LattesSpec { curve: LegendreCurve::new(ExactScalar::from_int(l)).unwrap(), m: 2, torsion: t, h };
        let a = milnor_criterion(&flexible_lattes(&spec(Mobius::identity())).unwrap(), 16).unwrap();
        let b = milnor_criterion(&flexible_lattes(&spec(h)).unwrap(), 16).unwrap();
        prop_assert!(a.passes && b.passes);
        prop_assert_eq!(a.strictly_postcritical_count, b.strictly_postcritical_count);
    }

    /// Residues are compatible with ring operations.
    #[test]
    fn residue_is_a_ring_map(p in small_prime(), a in -500i64..500, b in 1i64..500, c in -500i64..500, k in 1u32..12) {
        prop_assume!(b % p as i64 != 0);
        let x = ExactScalar::ratio(a, b);
        let y = ExactScalar::from_int(c);
        let m = BigInt::from(p).pow(k);
        let r = |s: &ExactScalar| BigInt::from(padic_residue(s, p, k).unwrap());
        prop_assert_eq!(r(&(&x * &y)), (r(&x) * r(&y)) % &m);
        prop_assert_eq!(r(&(&x + &y)), (r(&x) + r(&y)) % &m);
    }
}
