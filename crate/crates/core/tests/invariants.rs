use proptest::prelude::*;
use quantum_strata::dual_tensors::{distributions_at, lambda_at, riemann_jordan_at};
use quantum_strata::hermitian::{from_dual, gellmann_basis, spectral_oracle, structure_constants, to_dual, HermitianOperator};
use quantum_strata::kaehler::{bracket_g, bracket_omega, star_product, RealifiedState};
use quantum_strata::projective::{momentum_map, transition_probability};
use quantum_strata::sampling::{random_density_of_rank, random_hermitian, random_unit_vector, random_unitary, random_vector, rng};
use quantum_strata::strata::{
    certify_density, convex_decompose_spectral, face_of, orbit_dimension, tangency_check, weyl_reduce, DensityState,
};
use rand::Rng;

fn config() -> ProptestConfig {
    ProptestConfig { cases: 48, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn dual_coordinates_round_trip(seed in any::<u64>(), n in 2usize..6) {
        let a = random_hermitian(n, &mut rng(seed));
        let basis = gellmann_basis(n).unwrap();
        let back = from_dual(&to_dual(&a, &basis).unwrap(), &basis).unwrap();
        prop_assert!(back.max_abs_diff(&a) < 1e-12);
    }

    #[test]
    fn products_expand_in_structure_constants(n in 2usize..5) {
        let sc = structure_constants(&gellmann_basis(n).unwrap()).unwrap();
        let basis = gellmann_basis(n).unwrap();
        for mu in 0..n * n {
            for nu in 0..n * n {
                let direct = basis.element(mu).product(basis.element(nu));
                prop_assert!((sc.reconstruct_product(mu, nu) - direct).camax() < 1e-12);
            }
        }
    }

    #[test]
    fn certification_is_unitarily_invariant(seed in any::<u64>(), n in 2usize..5) {
        let mut r = rng(seed);
        let k = r.gen_range(1..=n);
        let rho = DensityState::from_operator(random_density_of_rank(n, k, &mut r)).unwrap();
        let moved = rho.operator().congruence(&random_unitary(n, &mut r)).unwrap();
        let moved = certify_density(&moved).state().unwrap();
        prop_assert_eq!(moved.rank(), k);
        for (a, b) in weyl_reduce(&moved).iter().zip(weyl_reduce(&rho)) {
            prop_assert!((a - b).abs() < 1e-12);
        }
        prop_assert_eq!(orbit_dimension(&moved).unwrap(), orbit_dimension(&rho).unwrap());
    }

    #[test]
    fn star_product_is_the_associative_product(seed in any::<u64>(), n in 2usize..5) {
        let mut r = rng(seed);
        let (a, b) = (random_hermitian(n, &mut r), random_hermitian(n, &mut r));
        let v = random_vector(n, &mut r);
        let psi = RealifiedState::from_complex(&v);
        let expected = v.dotc(&(a.product(&b) * &v));
        let star = star_product(&a, &b, &psi).unwrap();
        prop_assert!((star - expected).norm() < 1e-10);
        // symmetric and antisymmetric parts
        prop_assert!((bracket_g(&a, &b, &psi).unwrap() - bracket_g(&b, &a, &psi).unwrap()).abs() < 1e-12);
        prop_assert!((bracket_omega(&a, &b, &psi).unwrap() + bracket_omega(&b, &a, &psi).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn tensor_symmetries_and_distribution_dimensions(seed in any::<u64>(), n in 2usize..4) {
        let mut r = rng(seed);
        let rho = random_density_of_rank(n, r.gen_range(1..=n), &mut r);
        let y = to_dual(&rho, &gellmann_basis(n).unwrap()).unwrap();
        let l = lambda_at(&y).unwrap().matrix;
        let rr = riemann_jordan_at(&y).unwrap().matrix;
        prop_assert!((&l + l.transpose()).amax() < 1e-12);
        prop_assert!((&rr - rr.transpose()).amax() < 1e-12);
        let rep = distributions_at(&y).unwrap();
        let (dl, dr, d0, d1) = rep.dims();
        prop_assert!(d0 <= dl.min(dr) && dl.max(dr) <= d1 && d1 <= n * n);
        prop_assert_eq!(d0 + d1, dl + dr);
        prop_assert_eq!(rep.d0_commutator_dim, d0);
    }

    #[test]
    fn spectral_pieces_rebuild_the_state(seed in any::<u64>(), n in 2usize..5) {
        let mut r = rng(seed);
        let rho = DensityState::from_operator(random_density_of_rank(n, r.gen_range(1..=n), &mut r)).unwrap();
        let d = convex_decompose_spectral(&rho);
        prop_assert!(d.residual(rho.operator()) < 1e-10);
        let face = face_of(&rho);
        prop_assert_eq!(face.dimension(), rho.rank() * rho.rank() - 1);
        for c in &d.components {
            prop_assert!(face.contains(c.operator()));
        }
    }

    #[test]
    fn transition_probability_is_a_squared_overlap(seed in any::<u64>(), n in 2usize..5) {
        let mut r = rng(seed);
        let (u, v) = (random_unit_vector(n, &mut r), random_unit_vector(n, &mut r));
        let pu = momentum_map(&RealifiedState::from_complex(&u)).unwrap();
        let pv = momentum_map(&RealifiedState::from_complex(&v)).unwrap();
        let p = transition_probability(&pu, &pv).unwrap();
        prop_assert!((p - u.dotc(&v).norm_sqr()).abs() < 1e-12);
        prop_assert!((transition_probability(&pu, &pu).unwrap() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn gl_curves_through_rank_two_qutrit_states_are_tangent() {
    let mut r = rng(77);
    for _ in 0..10 {
        let rho0 = random_density_of_rank(3, 2, &mut r);
        let x = quantum_strata::sampling::random_matrix(3, &mut r);
        let curve: Vec<_> = (0..=8)
            .map(|i| {
                let t = i as f64 * 1e-4;
                let g = quantum_strata::hermitian::CMatrix::identity(3, 3) + &x * num_complex::Complex64::from(t);
                let m = rho0.congruence(&g).unwrap();
                (t, m.scale(1.0 / m.trace()))
            })
            .collect();
        let rep = tangency_check(&curve, 2).unwrap();
        assert!(rep.passed(), "{}", rep.max_residual);
    }
}

#[test]
fn oracle_handles_clustered_spectra() {
    // degenerate eigenvalues hidden by a random unitary
    let mut r = rng(78);
    for n in [3, 4, 6] {
        let mut values: Vec<f64> = (0..n).map(|i| if i < n / 2 { 1.0 } else { -0.5 }).collect();
        values[n - 1] = 1.0 / 3f64.sqrt();
        let d = HermitianOperator::diagonal(&values);
        let a = d.congruence(&random_unitary(n, &mut r)).unwrap();
        let spec = spectral_oracle(&a);
        assert!(spec.reconstruct().max_abs_diff(&a) < 1e-13);
        let v = spec.eigenvectors();
        assert!((v.adjoint() * &v - quantum_strata::hermitian::CMatrix::identity(n, n)).camax() < 1e-13);
    }
}
