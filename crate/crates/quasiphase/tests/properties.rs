use num_complex::Complex64 as C64;
use proptest::prelude::*;
use quasiphase::analytic::{interference_term, regularized_delta, KernelSpec};
use quasiphase::click::{g_interference, DetectionConfig};
use quasiphase::convolution::convolve;
use quasiphase::fock::{
    coherent_fock, loss_channel, overlap, superposition_density, thermal_density,
    CoherentSuperposition, DensityMatrix,
};
use quasiphase::grid::{Grid2D, GridAxes};

fn amplitude() -> impl Strategy<Value = C64> {
    (-1.5..1.5f64, -1.5..1.5f64).prop_map(|(re, im)| C64::new(re, im))
}

fn kernel() -> impl Strategy<Value = KernelSpec> {
    prop_oneof![
        (0.5..4.0f64).prop_map(|w| KernelSpec::sinc2(w).unwrap()),
        (-1.0..0.9f64).prop_map(|s| KernelSpec::gaussian_s(s).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn overlap_is_conjugate_symmetric(a in amplitude(), b in amplitude()) {
        prop_assert!((overlap(a, b) - overlap(b, a).conj()).norm() < 1e-14);
        prop_assert!(overlap(a, b).norm() <= 1.0 + 1e-14);
    }

    #[test]
    fn loss_channels_compose(beta in amplitude(), a in 0.0..1.0f64, b in 0.0..1.0f64, nbar in 0.1..1.0f64) {
        for rho in [DensityMatrix::pure(&coherent_fock(beta, 40).unwrap()), thermal_density(nbar, 60).unwrap()] {
            let twice = loss_channel(&loss_channel(&rho, a).unwrap(), b).unwrap();
            let once = loss_channel(&rho, a * b).unwrap();
            prop_assert!(twice.max_abs_diff(&once) < 1e-12);
        }
    }

    #[test]
    fn fock_superpositions_are_hermitian(beta in amplitude(), odd in any::<bool>()) {
        let state = if odd { CoherentSuperposition::odd_cat(beta) } else { CoherentSuperposition::even_cat(beta) };
        prop_assume!(state.is_ok());
        let rho = superposition_density(&state.unwrap(), 40).unwrap();
        prop_assert!(rho.hermiticity_residual() < 1e-14);
        prop_assert!((rho.trace().re - 1.0).abs() < 1e-9);
    }

    #[test]
    fn swapped_interference_terms_are_conjugate(ket in amplitude(), bra in amplitude(), k in kernel(), at in amplitude()) {
        let forward = regularized_delta(&interference_term(ket, bra), &k, at);
        let backward = regularized_delta(&interference_term(bra, ket), &k, at);
        prop_assert!((forward - backward.conj()).norm() <= 1e-10 * (1.0 + forward.norm()));
    }

    #[test]
    fn click_interference_is_conjugate_symmetric(
        a in amplitude(), b1 in amplitude(), b2 in amplitude(),
        eta in 0.1..1.0f64, z in -1.0..1.0f64, log_n in 0u32..4,
    ) {
        let cfg = DetectionConfig::balanced(1 << log_n, eta, z).unwrap();
        let forward = g_interference(a, b1, b2, &cfg);
        let backward = g_interference(a, b2, b1, &cfg);
        prop_assert!((forward - backward.conj()).norm() < 1e-12);
    }

    #[test]
    fn convolution_is_linear(
        x in -2.0..2.0f64, y in -2.0..2.0f64, lambda in -3.0..3.0f64, k in kernel(),
    ) {
        let axes = GridAxes::square(6.0, 48).unwrap();
        let f = Grid2D::from_fn(axes, |p| (-(p - C64::new(x, y)).norm_sqr()).exp());
        let g = Grid2D::from_fn(axes, |p| (-(p.norm_sqr()) / 2.0).exp() * p.re);
        let combined = Grid2D::from_values(axes, f.values().iter().zip(g.values()).map(|(a, b)| a + lambda * b).collect()).unwrap();
        let lhs = convolve(&combined, &k).unwrap();
        let (cf, cg) = (convolve(&f, &k).unwrap(), convolve(&g, &k).unwrap());
        let rhs = Grid2D::from_values(axes, cf.values().iter().zip(cg.values()).map(|(a, b)| a + lambda * b).collect()).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-10);
    }
}
