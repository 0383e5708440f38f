//! Property tests over the exact arithmetic layer: polynomial gcd and
//! rational-root reconstruction, Smith decompositions, series ring axioms,
//! and E-function stream laws.

mod common;

use efn_core::matrix::{Matrix, PolyMatrix};
use efn_core::poly::Poly;
use efn_core::rat::Rat;
use efn_core::ratfun::RatFun;
use efn_core::series::{expand_ratfun, TruncSeries};
use efn_core::smith::Smith;
use efn_core::EFunction;
use proptest::prelude::*;

fn rat_strategy() -> impl Strategy<Value = Rat> {
    (-20i64..=20, 1i64..=6).prop_map(|(n, d)| Rat::from_frac(n, d))
}

fn poly_strategy(max_deg: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec(rat_strategy(), 1..=max_deg + 1).prop_map(Poly::new)
}

fn nonzero_poly(max_deg: usize) -> impl Strategy<Value = Poly> {
    poly_strategy(max_deg).prop_filter("nonzero", |p| !p.is_zero())
}

fn series_strategy(order: usize) -> impl Strategy<Value = TruncSeries> {
    prop::collection::vec(rat_strategy(), order + 1..=order + 1)
        .prop_map(|coeffs| TruncSeries::new(Rat::zero(), coeffs))
}

fn poly_matrix_strategy(n: usize, max_deg: usize) -> impl Strategy<Value = PolyMatrix> {
    prop::collection::vec(poly_strategy(max_deg), n * n)
        .prop_map(move |entries| Matrix::from_fn(n, n, |r, c| entries[r * n + c].clone()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gcd_divides_both_exactly(a in nonzero_poly(5), b in nonzero_poly(5)) {
        let g = a.gcd(&b);
        let (_, ra) = a.divrem(&g);
        let (_, rb) = b.divrem(&g);
        prop_assert!(ra.is_zero() && rb.is_zero());
    }

    #[test]
    fn ratfun_normalization_idempotent(n in poly_strategy(4), d in nonzero_poly(4)) {
        let f = RatFun::new(n, d);
        let again = RatFun::new(f.num().clone(), f.den().clone());
        prop_assert_eq!(&f, &again);
        prop_assert!(f.den().leading().unwrap().is_one());
        prop_assert!(f.num().gcd(f.den()).is_one() || f.is_zero());
    }

    #[test]
    fn rational_roots_reconstruction(p in nonzero_poly(6)) {
        let (roots, residual) = p.rational_roots().unwrap();
        let mut rebuilt = residual.clone();
        for (r, m) in &roots {
            rebuilt = &rebuilt * &Poly::linear_root(r).pow(*m);
        }
        // equality up to a nonzero constant
        prop_assert_eq!(rebuilt.monic(), p.monic());
        if !residual.is_constant() {
            let (extra, _) = residual.rational_roots().unwrap();
            prop_assert!(extra.is_empty());
        }
    }

    #[test]
    fn smith_decomposition_properties(m in poly_matrix_strategy(3, 2)) {
        let d = Smith::compute(&m);
        prop_assert_eq!(d.u.mul_mat(&m).mul_mat(&d.v), d.s.clone());
        let du = d.u.det();
        let dv = d.v.det();
        prop_assert!(du.is_constant() && !du.is_zero());
        prop_assert!(dv.is_constant() && !dv.is_zero());
        let factors = d.invariant_factors();
        for w in factors.windows(2) {
            let (_, r) = w[1].divrem(&w[0]);
            prop_assert!(r.is_zero());
        }
    }

    #[test]
    fn series_ring_axioms(
        a in series_strategy(8),
        b in series_strategy(8),
        c in series_strategy(8),
    ) {
        // associativity and distributivity, coefficientwise to order
        let left = a.mul(&b).mul(&c);
        let right = a.mul(&b.mul(&c));
        prop_assert!(left.agrees_to(&right, left.order()));
        let dist_l = a.mul(&b.add(&c));
        let dist_r = a.mul(&b).add(&a.mul(&c));
        prop_assert!(dist_l.agrees_to(&dist_r, dist_l.order()));
    }

    #[test]
    fn series_division_postcondition(
        a in series_strategy(8),
        b in series_strategy(8),
    ) {
        prop_assume!(b.valuation().is_some());
        prop_assume!(a.valuation().unwrap_or(usize::MAX) >= b.valuation().unwrap());
        let q = a.div(&b).unwrap();
        let back = q.mul(&b.truncated(q.order()));
        prop_assert!(back.sub(&a.truncated(back.order())).is_zero_to(back.order()));
    }

    #[test]
    fn expansion_is_multiplicative(
        n1 in poly_strategy(3), d1 in nonzero_poly(3),
        n2 in poly_strategy(3), d2 in nonzero_poly(3),
    ) {
        let f = RatFun::new(n1, d1);
        let g = RatFun::new(n2, d2);
        let center = Rat::from_int(7); // avoid the small random poles
        prop_assume!(!f.den().eval(&center).is_zero());
        prop_assume!(!g.den().eval(&center).is_zero());
        let k = 10;
        let fg = expand_ratfun(&(&f * &g), &center, k).unwrap();
        let sep = expand_ratfun(&f, &center, k).unwrap()
            .mul(&expand_ratfun(&g, &center, k).unwrap());
        prop_assert!(fg.agrees_to(&sep, k));
    }

    #[test]
    fn efunc_ops_commute_with_expansion(
        p in poly_strategy(2),
        c in -3i64..=3,
        xi in (1i64..=3).prop_map(Rat::from_int),
    ) {
        let f = EFunction::exp_poly(p.clone(), Rat::from_int(c));
        let k = 16;

        // scaling: taylor(f(xi z)) == taylor(f) with z -> xi z
        let scaled = f.scale_argument(&xi).unwrap().taylor(k);
        let direct = f.taylor(k);
        for i in 0..=k {
            prop_assert_eq!(scaled.coeff(i), &direct.coeff(i) * &xi.pow(i as i64));
        }

        // product: stream-level product expands to the series product
        let g = EFunction::exp(Rat::from_int(2));
        let prod_series = f.product(&g).taylor(k);
        let sep = f.taylor(k).mul(&g.taylor(k));
        prop_assert!(prod_series.agrees_to(&sep, k));
    }

    #[test]
    fn divide_by_linear_round_trip(
        c in -3i64..=3,
        xi in (1i64..=4).prop_map(Rat::from_int),
    ) {
        // f = (z - xi) e^{cz} manifestly vanishes at xi
        let f = EFunction::exp_poly(Poly::linear_root(&xi), Rat::from_int(c));
        let g = f.divide_by_linear(&xi, 60).unwrap();
        let back = g.mul_poly(&Poly::linear_root(&xi));
        prop_assert_eq!(back.coefficients(30), f.coefficients(30));
    }
}

#[test]
fn smith_minor_gcd_on_random_samples() {
    // product of the first k invariant factors == monic gcd of k x k minors
    for seed in 0..12u64 {
        let mut rng = common::rng(991 + seed);
        let m: PolyMatrix = Matrix::from_fn(2, 3, |_, _| common::small_poly(&mut rng, 2));
        let d = Smith::compute(&m);
        let factors = d.invariant_factors();
        for k in 1..=2usize {
            let mut gcd = Poly::zero();
            for rows in combinations(2, k) {
                for cols in combinations(3, k) {
                    let sub: PolyMatrix =
                        Matrix::from_fn(k, k, |i, j| m[(rows[i], cols[j])].clone());
                    gcd = gcd.gcd(&sub.det());
                }
            }
            if factors.len() >= k {
                let mut prod = Poly::one();
                for f in factors.iter().take(k) {
                    prod = &prod * f;
                }
                assert_eq!(prod.monic(), gcd.monic());
            } else {
                assert!(gcd.is_zero());
            }
        }
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in 0..n {
        for mut rest in combinations(n, k - 1) {
            if rest.iter().all(|&x| x > first) {
                let mut v = vec![first];
                v.append(&mut rest);
                out.push(v);
            }
        }
    }
    out
}

// growth-fit stability between K and 2K for the builtin streams
#[test]
fn growth_fit_stable_for_builtins() {
    let builtins = [
        EFunction::exp(Rat::one()),
        EFunction::exp(Rat::from_int(-3)),
        EFunction::exp_poly(Poly::from_ints(&[-1, 1]), Rat::one()),
        EFunction::cos(Rat::one()),
        EFunction::sin(Rat::from_frac(1, 2)),
        EFunction::bessel(),
    ];
    for f in &builtins {
        let r1 = f.growth_report(100);
        let r2 = f.growth_report(200);
        let rel = (r2.c - r1.c).abs() / r1.c.max(1e-12);
        assert!(rel < 0.05, "{}: C moved from {} to {}", f.name(), r1.c, r2.c);
        assert!(!r2.super_exponential, "{} flagged super-exponential", f.name());
    }
}

// Corollary-style bound: dividing (z-1)e^z at 1 yields |b_n| <= B e^C C^n
// with B, C fitted for the original stream, for n <= 200
#[test]
fn divided_stream_obeys_lifted_bound() {
    let f = EFunction::exp_poly(Poly::from_ints(&[-1, 1]), Rat::one());
    let fit = f.growth_report(200);
    let g = f.divide_by_linear(&Rat::one(), 120).unwrap();
    let b_coeffs = g.coefficients(200);
    let lift = fit.b * fit.c.exp();
    for (n, bn) in b_coeffs.iter().enumerate() {
        let bound = lift * fit.c.powi(n as i32);
        assert!(
            bn.abs().to_f64() <= bound * (1.0 + 1e-9),
            "n = {n}: |b_n| = {} > {}",
            bn.abs().to_f64(),
            bound
        );
    }
    // and the partial-sum law b_n/n! = -sum_{k<=n} a_k/k! for n <= 200
    let a = f.coefficients(200);
    let mut partial = Rat::zero();
    let mut fact = Rat::one();
    for n in 0..=200usize {
        if n > 0 {
            fact = &fact * &Rat::from_int(n as i64);
        }
        let t = &a[n] / &fact;
        partial = &partial + &t;
        let lhs = &b_coeffs[n] / &fact;
        assert_eq!(lhs, -&partial, "partial-sum law failed at n = {n}");
    }
}
