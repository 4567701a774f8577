use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use proptest::prelude::*;

use schur_hurwitz::ezzeta::{ez_zeta, ez_zeta_star, reals};
use schur_hurwitz::identities::{hook_expansion_star, jacobi_trudi_e, jacobi_trudi_h, IdentityId, IdentityReport};
use schur_hurwitz::lgv::verify_cancellation;
use schur_hurwitz::schurzeta::{schur_eval, SchurInstance};
use schur_hurwitz::shapes::{hash_transpose, RimKind};
use schur_hurwitz::tableaux::text::{complex_to_json, from_json, parse_complex};
use schur_hurwitz::{Approx, ContentSpec, EvalConfig, Partition, Tableau};

fn partition(max_rows: usize, max_part: usize) -> impl Strategy<Value = Partition> {
    prop::collection::vec(1..=max_part, 0..=max_rows).prop_map(|mut v| {
        v.sort_unstable_by(|a, b| b.cmp(a));
        Partition::new(v).unwrap()
    })
}

fn cfg() -> EvalConfig {
    EvalConfig::with_cutoff(1500)
}

fn approx() -> impl Strategy<Value = (Complex64, Complex64, f64)> {
    (-5.0..5.0f64, -5.0..5.0f64, -1.0..1.0f64, -1.0..1.0f64, 0.0..0.5f64).prop_map(|(a, b, da, db, e)| {
        let truth = Complex64::new(a, b);
        let offset = Complex64::new(da, db) * (e / 2.0);
        (truth, truth + offset, e)
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn certified_arithmetic_encloses_truth((t1, v1, e1) in approx(), (t2, v2, e2) in approx()) {
        let a = Approx::new(v1, e1);
        let b = Approx::new(v2, e2);
        prop_assert!((a + b).contains(t1 + t2, 1e-12));
        prop_assert!((a - b).contains(t1 - t2, 1e-12));
        prop_assert!((a * b).contains(t1 * t2, 1e-12));
    }

    #[test]
    fn conjugation_and_frobenius_round_trip(l in partition(7, 7)) {
        prop_assert_eq!(l.conjugate().conjugate(), l.clone());
        prop_assert_eq!(Partition::from_frobenius(&l.frobenius()), l.clone());
        prop_assert_eq!(l.conjugate().size(), l.size());
    }

    #[test]
    fn hash_transpose_keeps_contents(l in partition(5, 5)) {
        let h = hash_transpose(&l.as_skew());
        prop_assert_eq!(h.shape.size(), l.size());
        for (a, b) in &h.map {
            prop_assert_eq!(a.content(), b.content());
            prop_assert!(h.shape.contains(*b));
        }
    }

    #[test]
    fn tableau_json_round_trip(l in partition(4, 4), seed in 0u32..1000) {
        let t = Tableau::from_fn(l.as_skew(), |c| Complex64::new((seed + 3 * c.row as u32 + c.col as u32) as f64, 0.5));
        let back = from_json(&complex_to_json(&t), parse_complex).unwrap();
        prop_assert_eq!(back, t);
    }

    #[test]
    fn stuffle(a in 2.0..4.0f64, b in 2.0..4.0f64, y in 0.0..1.0f64) {
        let c = cfg();
        let za = ez_zeta(&reals(&[a]), &[y], &c).unwrap();
        let zb = ez_zeta(&reals(&[b]), &[y], &c).unwrap();
        let ab = ez_zeta(&reals(&[a, b]), &[y, y], &c).unwrap();
        let ba = ez_zeta(&reals(&[b, a]), &[y, y], &c).unwrap();
        let sum = ez_zeta(&reals(&[a + b]), &[y], &c).unwrap();
        let lhs = za * zb;
        let rhs = ab + ba + sum;
        prop_assert!((lhs.value - rhs.value).norm() <= lhs.err_bound + rhs.err_bound + 1e-12);
        let star = ez_zeta_star(&reals(&[a, b]), &[y, y], &c).unwrap();
        let parts = ab + sum;
        prop_assert!((star.value - parts.value).norm() <= star.err_bound + parts.err_bound + 1e-12);
    }

    #[test]
    fn rows_and_columns_reduce_to_euler_zagier(zs in prop::collection::vec(2.0..3.5f64, 1..4), y in 0.0..1.0f64) {
        let c = cfg();
        let n = zs.len();
        let ys = vec![y; n];
        let row = Tableau::from_rows(vec![reals(&zs)]).unwrap();
        let row_x = row.map(|_| y);
        let v = schur_eval(&SchurInstance::new(row, row_x).unwrap(), &c).unwrap();
        let w = ez_zeta_star(&reals(&zs), &ys, &c).unwrap();
        prop_assert!((v.value - w.value).norm() <= v.err_bound + w.err_bound + 1e-12);

        let col = Tableau::from_rows(zs.iter().map(|&z| reals(&[z])).collect()).unwrap();
        let col_x = col.map(|_| y);
        let v = schur_eval(&SchurInstance::new(col, col_x).unwrap(), &c).unwrap();
        let w = ez_zeta(&reals(&zs), &ys, &c).unwrap();
        prop_assert!((v.value - w.value).norm() <= v.err_bound + w.err_bound + 1e-12);
    }

    #[test]
    fn jacobi_trudi_random(
        l in prop::sample::select(vec!["1,1", "2", "2,1", "2,2", "3,1"]),
        zs in prop::collection::vec(2.0..3.5f64, 5),
        ys in prop::collection::vec(0.0..1.0f64, 5),
    ) {
        let lambda: Partition = l.parse().unwrap();
        let spec = ContentSpec::new((-2..=2).zip(zs), (-2..=2).zip(ys));
        let h = jacobi_trudi_h(&spec, &lambda, &cfg()).unwrap();
        let e = jacobi_trudi_e(&spec, &lambda, &cfg()).unwrap();
        prop_assert!(h.pass, "{:?}", h);
        prop_assert!(e.pass, "{:?}", e);
    }

    #[test]
    fn hook_expansion_random(
        p in 0usize..3, q in 0usize..3,
        zs in prop::collection::vec(2.0..3.5f64, 5),
        ys in prop::collection::vec(0.0..1.0f64, 5),
    ) {
        let spec = ContentSpec::new((-2..=2).zip(zs), (-2..=2).zip(ys));
        let r = hook_expansion_star(&spec, p, q, &cfg()).unwrap();
        prop_assert!(r.pass, "{:?}", r);
    }

    #[test]
    fn report_pass_matches_rule(lhs in -1.0..1.0f64, rhs in -1.0..1.0f64, e1 in 0.0..0.5f64, e2 in 0.0..0.5f64) {
        let r = IdentityReport::new(
            IdentityId::Giambelli, "1",
            Approx::new(Complex64::new(lhs, 0.0), e1),
            Approx::new(Complex64::new(rhs, 0.0), e2),
            1e-9,
        );
        prop_assert_eq!(r.pass, r.discrepancy <= r.budget + r.slack);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 16, ..ProptestConfig::default() })]

    #[test]
    fn lattice_paths_cancel(
        l in prop::sample::select(vec!["1,1", "2,1", "3,1", "2,2"]),
        zs in prop::collection::vec(1i64..=3, 5),
        halves in prop::collection::vec(0i64..=2, 5),
        kind in prop::sample::select(vec![RimKind::H, RimKind::E]),
    ) {
        let lambda: Partition = l.parse().unwrap();
        let s = Tableau::from_fn(lambda.as_skew(), |c| zs[(c.content() + 2) as usize]);
        let x = Tableau::from_fn(lambda.as_skew(), |c| {
            BigRational::new(BigInt::from(halves[(c.content() + 2) as usize]), BigInt::from(2))
        });
        let rep = verify_cancellation(&lambda, 3, kind, &s, &x).unwrap();
        prop_assert!(rep.pass, "{:?}", rep);
    }
}
