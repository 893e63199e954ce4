//! Structural invariants checked over seeded random ensembles: partial
//! trace, local-unitary invariances, fidelity and Bures-distance
//! properties.

use nalgebra::{DMatrix, DVector, Matrix2};
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use scissors_core::analytic::TruncatedQubitPair;
use scissors_core::fock::{partial_trace, DensityMatrix, FockDims, Mode, TwoModeState};
use scissors_core::measures::{
    bures_distance, concurrence, entanglement_of_formation, entropy_of_entanglement, fidelity,
    project_two_qubit,
};

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Ginibre construction: G G† normalized to unit trace.
fn random_density(dims: FockDims, rng: &mut ChaCha8Rng) -> DensityMatrix {
    let d = dims.total();
    let g = DMatrix::from_fn(d, d, |_, _| c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5));
    let mut m = &g * g.adjoint();
    let tr: f64 = m.diagonal().iter().map(|z| z.re).sum();
    m /= c(tr, 0.0);
    DensityMatrix::new(dims, m).unwrap()
}

fn random_pure(dims: FockDims, rng: &mut ChaCha8Rng) -> TwoModeState {
    let mut amps = DVector::<C64>::zeros(dims.total());
    for z in amps.iter_mut() {
        *z = c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
    }
    amps /= c(amps.norm(), 0.0);
    TwoModeState::new(dims, amps).unwrap()
}

/// Random 2x2 unitary from three angles.
fn random_unitary2(rng: &mut ChaCha8Rng) -> Matrix2<C64> {
    let theta = rng.gen_range(0.0..std::f64::consts::PI);
    let phi = rng.gen_range(0.0..2.0 * std::f64::consts::PI);
    let psi = rng.gen_range(0.0..2.0 * std::f64::consts::PI);
    let (s, ct) = theta.sin_cos();
    Matrix2::new(
        ct * (C64::i() * phi).exp(),
        s * (C64::i() * psi).exp(),
        -s * (-C64::i() * psi).exp(),
        ct * (-C64::i() * phi).exp(),
    )
}

fn kron2(u: &Matrix2<C64>, v: &Matrix2<C64>) -> DMatrix<C64> {
    let mut out = DMatrix::zeros(4, 4);
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out[(2 * i + k, 2 * j + l)] = u[(i, j)] * v[(k, l)];
                }
            }
        }
    }
    out
}

#[test]
fn partial_trace_preserves_trace_and_is_linear() {
    let dims = FockDims::new(5, 4).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(201);
    for _ in 0..20 {
        let rho1 = random_density(dims, &mut rng);
        let rho2 = random_density(dims, &mut rng);
        for keep in [Mode::A, Mode::B] {
            let ra = partial_trace(&rho1, keep);
            assert!((ra.diagonal().sum() - c(1.0, 0.0)).norm() < 1e-12);

            // Linearity on a convex combination.
            let w = rng.gen_range(0.0..1.0);
            let mixed = DensityMatrix::new(
                dims,
                rho1.matrix() * c(w, 0.0) + rho2.matrix() * c(1.0 - w, 0.0),
            )
            .unwrap();
            let lhs = partial_trace(&mixed, keep);
            let rhs = partial_trace(&rho1, keep) * c(w, 0.0)
                + partial_trace(&rho2, keep) * c(1.0 - w, 0.0);
            assert!((lhs - rhs).iter().all(|z| z.norm() < 1e-12));
        }
    }
}

#[test]
fn entropy_is_invariant_under_local_unitaries() {
    let dims = FockDims::new(2, 2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    for _ in 0..100 {
        let psi = random_pure(dims, &mut rng);
        let u = kron2(&random_unitary2(&mut rng), &random_unitary2(&mut rng));
        let rotated = TwoModeState::new(dims, &u * psi.amplitudes()).unwrap();
        let e0 = entropy_of_entanglement(&psi).unwrap();
        let e1 = entropy_of_entanglement(&rotated).unwrap();
        assert!((e0 - e1).abs() < 1e-10, "entropy moved {e0} -> {e1}");
    }
}

#[test]
fn concurrence_is_invariant_under_local_unitaries() {
    let dims = FockDims::new(2, 2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(203);
    for _ in 0..100 {
        let rho = random_density(dims, &mut rng);
        let (block, _) = project_two_qubit(&rho).unwrap();
        let u = kron2(&random_unitary2(&mut rng), &random_unitary2(&mut rng));
        let rotated = &u * &block * u.adjoint();
        let c0 = concurrence(&block).unwrap();
        let c1 = concurrence(&rotated).unwrap();
        assert!((c0 - c1).abs() < 1e-9, "concurrence moved {c0} -> {c1}");
    }
}

#[test]
fn formation_entanglement_equals_entropy_on_pure_states() {
    let dims = FockDims::new(2, 2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(204);
    for _ in 0..100 {
        let psi = random_pure(dims, &mut rng);
        let (block, _) = project_two_qubit(&DensityMatrix::from_pure(&psi)).unwrap();
        let ef = entanglement_of_formation(&block).unwrap();
        let e = entropy_of_entanglement(&psi).unwrap();
        assert!((ef - e).abs() < 1e-10, "E_F {ef} vs E {e}");
    }
}

#[test]
fn fidelity_distinguishes_perturbed_states() {
    let dims = FockDims::new(3, 3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(205);
    for _ in 0..10 {
        let rho = random_density(dims, &mut rng);
        // Mix with a different random state: fidelity must drop below one.
        let other = random_density(dims, &mut rng);
        let mixed = DensityMatrix::new(
            dims,
            rho.matrix() * c(0.9, 0.0) + other.matrix() * c(0.1, 0.0),
        )
        .unwrap();
        let f = fidelity(&rho, &mixed).unwrap();
        assert!(f < 1.0 - 1e-12, "perturbation not detected: F = {f}");
        assert!(f > 0.5, "perturbation too destructive for this check: F = {f}");
    }
}

#[test]
fn bures_distance_is_symmetric_and_consistent_with_fidelity() {
    let dims = FockDims::new(3, 2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(206);
    for _ in 0..10 {
        let rho = random_density(dims, &mut rng);
        let sigma = random_density(dims, &mut rng);
        let dab = bures_distance(&rho, &sigma).unwrap();
        let dba = bures_distance(&sigma, &rho).unwrap();
        assert!((dab - dba).abs() < 1e-10);
        let f = fidelity(&rho, &sigma).unwrap();
        assert!((dab - (2.0 - 2.0 * f.sqrt())).abs() < 1e-12);
    }
}

#[test]
fn qubit_pair_embeds_consistently() {
    let mut rng = ChaCha8Rng::seed_from_u64(207);
    let dims = FockDims::new(7, 5).unwrap();
    for _ in 0..20 {
        let raw = [
            c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5),
            c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5),
            c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5),
            c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5),
        ];
        let norm = raw.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let pair = TruncatedQubitPair::new(
            raw[0] / norm,
            raw[1] / norm,
            raw[2] / norm,
            raw[3] / norm,
        );
        let embedded = pair.embed(dims).unwrap();
        assert_eq!(embedded.qubit_amplitudes(), pair.amplitudes());
        assert!((embedded.norm() - 1.0).abs() < 1e-12);
        assert!(scissors_core::dynamics::leaked_probability(&embedded) < 1e-12);
    }
}
