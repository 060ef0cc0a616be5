use fatsep_core::exactlin::{DenseMatrix, FieldSpec, Scalar};
use fatsep_core::polyring::{basis_size, binomial, monomial_basis, HomogeneousForm, Monomial};
use fatsep_core::scheme::FatPointScheme;
use proptest::prelude::*;

const Q: FieldSpec = FieldSpec::Rational;
const P: FieldSpec = FieldSpec::Prime { p: 2147483647 };

fn matrix(field: FieldSpec) -> impl Strategy<Value = DenseMatrix> {
    (1usize..6, 1usize..6).prop_flat_map(move |(r, c)| {
        // Small entries with many zeros so that rank deficiency is common.
        prop::collection::vec(prop_oneof![3 => Just(0i64), 2 => -3i64..=3], r * c).prop_map(move |v| {
            let entries = v.iter().map(|&x| field.from_i64(x)).collect();
            DenseMatrix::new(field, r, c, entries).unwrap()
        })
    })
}

fn form(nvars: usize, degree: u32) -> impl Strategy<Value = HomogeneousForm> {
    let size = basis_size(nvars, degree);
    prop::collection::vec(-5i64..=5, size).prop_map(move |v| {
        let coeffs: Vec<Scalar> = v.iter().map(|&x| Q.from_i64(x)).collect();
        HomogeneousForm::from_coeff_vector(Q, nvars, degree, &coeffs).unwrap()
    })
}

fn point(nvars: usize) -> impl Strategy<Value = Vec<Scalar>> {
    prop::collection::vec(-4i64..=4, nvars).prop_map(|v| v.iter().map(|&x| Q.from_i64(x)).collect())
}

proptest! {
    #[test]
    fn rank_equals_transpose_rank(m in prop_oneof![matrix(Q), matrix(P)]) {
        prop_assert_eq!(m.rank(), m.transpose().rank());
    }

    #[test]
    fn rank_plus_nullity(m in prop_oneof![matrix(Q), matrix(P)]) {
        let ker = m.kernel_basis();
        prop_assert_eq!(m.rank() + ker.len(), m.cols());
        for v in &ker {
            prop_assert!(m.mul_vec(v).unwrap().iter().all(Scalar::is_zero));
        }
        if !ker.is_empty() {
            let k = DenseMatrix::from_rows(m.field(), m.cols(), ker.clone()).unwrap();
            prop_assert_eq!(k.rank(), ker.len());
        }
    }

    #[test]
    fn euler_identity(f in form(3, 3)) {
        // sum_k x_k dF/dx_k = deg F * F
        let mut sum = HomogeneousForm::zero(Q, 3, 3);
        for k in 0..3 {
            let d = f.partial(&Monomial::var(3, k));
            sum = sum.add(&HomogeneousForm::var(Q, 3, k).multiply(&d).unwrap()).unwrap();
        }
        prop_assert_eq!(sum, f.scale(&Q.from_i64(3)));
    }

    #[test]
    fn partials_are_linear(f in form(3, 4), g in form(3, 4), a in -5i64..=5, alpha in prop::collection::vec(0u32..3, 3)) {
        let alpha = Monomial(alpha);
        let c = Q.from_i64(a);
        let lhs = f.scale(&c).add(&g).unwrap().partial(&alpha);
        let rhs = f.partial(&alpha).scale(&c).add(&g.partial(&alpha)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn evaluation_is_multiplicative(f in form(3, 2), g in form(3, 3), p in point(3)) {
        let fg = f.multiply(&g).unwrap();
        let lhs = fg.evaluate(&p).unwrap();
        let rhs = &f.evaluate(&p).unwrap() * &g.evaluate(&p).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn coefficient_round_trip(f in form(4, 3)) {
        let back = HomogeneousForm::from_coeff_vector(Q, 4, 3, &f.coeff_vector()).unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn hilbert_function_laws(
        pts in prop::collection::vec(prop::collection::vec(-4i64..=4, 2), 1..5),
        mults in prop::collection::vec(1u32..=3, 4),
    ) {
        let mut points: Vec<Vec<Scalar>> = Vec::new();
        let mut seen = std::collections::BTreeSet::new();
        for p in &pts {
            if seen.insert(p.clone()) {
                points.push(std::iter::once(1).chain(p.iter().copied()).map(|x| Q.from_i64(x)).collect());
            }
        }
        let mults = mults[..points.len()].to_vec();
        let z = FatPointScheme::new(2, Q, points, mults).unwrap();
        let h = z.hilbert_function().unwrap();
        prop_assert_eq!(h.stable_value(), z.degree() as u64);
        prop_assert_eq!(h.value(0), 1);
        for t in 0..=h.t_stab() as i64 + 2 {
            // Nondecreasing and bounded by the ring.
            prop_assert!(h.value(t) >= h.value(t - 1));
            prop_assert!(h.value(t) as u128 <= binomial(t as u64 + 2, 2));
        }
    }
}

#[test]
fn basis_sizes() {
    for n in 1..=4usize {
        for t in 0..=20u32 {
            let basis = monomial_basis(n, t);
            assert_eq!(basis.len() as u128, binomial(t as u64 + n as u64 - 1, n as u64 - 1));
            assert!(basis.windows(2).all(|w| w[0] > w[1]));
            assert!(basis.iter().all(|m| m.degree() == t));
        }
    }
}
