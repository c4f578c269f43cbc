//! Property tests for the invariants of each module.

use kahler_entanglement::entanglement::{analyze, entanglement_entropy, ppt_check, schmidt, wootters_eof};
use kahler_entanglement::io::{density_matrix_from_json, density_matrix_to_json, fmt17};
use kahler_entanglement::linalg::{frobenius, hermitian_defect, hermitian_eigenvalues, kron, projector};
use kahler_entanglement::projective::{dim_sections, fs_weight, SectionBasis};
use kahler_entanglement::quadrature::{FactorSubmanifold, Submanifold, SubmanifoldSpec};
use kahler_entanglement::scalar::{cplx, CMatrix, CVector};
use kahler_entanglement::states::{
    coherent_mixture, factor_gram, mixture_operator, partial_trace_1, partial_trace_2, restriction_gram, rho_from_gram,
    tensor_product, DensityMatrix,
};
use proptest::prelude::*;

fn complex_vec(len: usize) -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), len)
}

fn unit_vector(d: usize) -> impl Strategy<Value = CVector<f64>> {
    complex_vec(d)
        .prop_filter("nonzero", |v| v.iter().any(|(a, b)| a.abs() + b.abs() > 1e-3))
        .prop_map(move |v| {
            let v = CVector::from_iterator(d, v.into_iter().map(|(a, b)| cplx(a, b)));
            let n = v.norm();
            v.unscale(n)
        })
}

fn mixed_state(d1: usize, d2: usize) -> impl Strategy<Value = DensityMatrix<f64>> {
    let d = d1 * d2;
    complex_vec(d * d).prop_map(move |v| {
        let g = CMatrix::from_iterator(d, d, v.into_iter().map(|(a, b)| cplx(a, b)));
        let m = &g * g.adjoint() + CMatrix::identity(d, d) * cplx(1e-3, 0.0);
        let tr = m.trace();
        DensityMatrix::new(m.map(|z| z / tr), (d1, d2)).unwrap()
    })
}

fn unitary(d: usize) -> impl Strategy<Value = CMatrix<f64>> {
    complex_vec(d * d).prop_map(move |v| {
        CMatrix::from_iterator(d, d, v.into_iter().map(|(a, b)| cplx(a, b)))
            .qr()
            .q()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dimension_is_binomial(n in 1i64..5, power in 0i64..12) {
        let d = dim_sections(n, power).unwrap();
        let b = SectionBasis::<f64>::new(n as usize, power as u32).unwrap();
        prop_assert_eq!(d as usize, b.len());
        let expected = (1..=n as u64).fold(1u64, |acc, k| acc * (power as u64 + k) / k);
        prop_assert_eq!(d, expected);
    }

    #[test]
    fn fs_weight_is_multiplicative(re in -3.0..3.0f64, im in -3.0..3.0f64, a in 0u32..6, b in 0u32..6) {
        let z = [cplx(re, im)];
        let w = fs_weight(&z, a + b);
        prop_assert!(w > 0.0 && w <= 1.0);
        prop_assert!((w - fs_weight(&z, a) * fs_weight(&z, b)).abs() < 1e-14);
    }

    #[test]
    fn restriction_states_are_valid_and_ppt(r in 0.2..2.5f64, power in 1u32..4) {
        let b = SectionBasis::<f64>::new(1, power).unwrap();
        let sub = Submanifold::new(SubmanifoldSpec::DiagonalCircle { radius: r }, 1, 1).unwrap();
        let rule = sub.rule(power, Some(48)).unwrap();
        let g = restriction_gram(&b, &b, &sub, &rule).unwrap();
        prop_assert!(g.min_eigenvalue() >= -1e-10);
        let rho = rho_from_gram(&g).unwrap();
        prop_assert!((rho.matrix().trace().re - 1.0).abs() < 1e-12);
        prop_assert!(hermitian_defect(rho.matrix()) < 1e-12);
        prop_assert!(ppt_check(&rho).min_eigenvalue >= -1e-10);
        let mixture = mixture_operator(&coherent_mixture(&b, &b, &sub, &rule).unwrap()).unwrap();
        prop_assert!(frobenius(&(g.matrix() - mixture)) < 1e-10);
    }

    #[test]
    fn product_specs_factorize(r1 in 0.2..2.0f64, r2 in 0.2..2.0f64, power in 1u32..4) {
        let b = SectionBasis::<f64>::new(1, power).unwrap();
        let sub = Submanifold::new(SubmanifoldSpec::Torus { r1, r2 }, 1, 1).unwrap();
        let g = restriction_gram(&b, &b, &sub, &sub.rule(power, Some(32)).unwrap()).unwrap();
        let (fa, fb) = (FactorSubmanifold::Circle { radius: r1 }, FactorSubmanifold::Circle { radius: r2 });
        let a = factor_gram(&b, &fa, &fa.rule(1, power, Some(32)).unwrap()).unwrap();
        let bb = factor_gram(&b, &fb, &fb.rule(1, power, Some(32)).unwrap()).unwrap();
        prop_assert!(frobenius(&(g.matrix() - kron(&a, &bb))) <= 1e-9 * frobenius(g.matrix()));
    }

    #[test]
    fn partial_traces_invert_tensor_product(a in mixed_state(2, 1), b in mixed_state(3, 1)) {
        let rho = tensor_product(a.matrix(), b.matrix()).unwrap();
        prop_assert!(frobenius(&(partial_trace_2(&rho) - a.matrix())) < 1e-12);
        prop_assert!(frobenius(&(partial_trace_1(&rho) - b.matrix())) < 1e-12);
        prop_assert!(ppt_check(&rho).min_eigenvalue >= -1e-12);
    }

    #[test]
    fn schmidt_and_entropy_bounds(v in unit_vector(6)) {
        let s = schmidt(&v, 2, 3).unwrap();
        prop_assert_eq!(s.len(), 2);
        prop_assert!(s[0] >= s[1] && s[1] >= 0.0);
        prop_assert!((s.iter().map(|x| x * x).sum::<f64>() - 1.0).abs() < 1e-12);
        let h = entanglement_entropy(&v, 2, 3).unwrap();
        prop_assert!((0.0..=2f64.ln() + 1e-12).contains(&h));
    }

    #[test]
    fn wootters_ranges(rho in mixed_state(2, 2)) {
        let w = wootters_eof(&rho).unwrap();
        prop_assert!((0.0..=1.0).contains(&w.concurrence));
        prop_assert!(w.eof >= 0.0 && w.eof <= 2f64.ln() + 1e-15);
        prop_assert_eq!(w.eof == 0.0, w.concurrence == 0.0);
    }

    #[test]
    fn local_unitary_invariance(rho in mixed_state(2, 2), u in unitary(2), v in unitary(2)) {
        let a = analyze(&rho).unwrap();
        let b = analyze(&rho.conjugate_local(&u, &v).unwrap()).unwrap();
        prop_assert!((a.concurrence.unwrap() - b.concurrence.unwrap()).abs() < 1e-10);
        prop_assert!((a.ppt_min_eigenvalue - b.ppt_min_eigenvalue).abs() < 1e-10);
        prop_assert_eq!(a.ppt, b.ppt);
        let (ea, eb) = (rho.eigenvalues(), hermitian_eigenvalues(&rho.conjugate_local(&u, &v).unwrap().into_matrix()));
        for (x, y) in ea.iter().zip(&eb) {
            prop_assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn pure_entropy_is_unitarily_invariant(v in unit_vector(4), u in unitary(2), w in unitary(2)) {
        let rho = DensityMatrix::pure(&v, (2, 2)).unwrap();
        let moved = rho.conjugate_local(&u, &w).unwrap();
        let (a, b) = (analyze(&rho).unwrap(), analyze(&moved).unwrap());
        prop_assert!((a.entropy.unwrap() - b.entropy.unwrap()).abs() < 1e-10);
        prop_assert!((a.entropy.unwrap() - a.eof.unwrap()).abs() < 1e-12);
        prop_assert!(frobenius(&(projector(&v) - rho.matrix())) < 1e-14);
    }

    #[test]
    fn json_round_trip(rho in mixed_state(2, 3)) {
        let text = density_matrix_to_json(&rho);
        let back = density_matrix_from_json::<f64>(&text).unwrap();
        prop_assert_eq!(back.matrix(), rho.matrix());
    }

    #[test]
    fn seventeen_digits_round_trip(x in any::<f64>().prop_filter("finite", |x| x.is_finite())) {
        prop_assert_eq!(fmt17(x).parse::<f64>().unwrap(), x);
    }
}
