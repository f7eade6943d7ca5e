//! Combs built from explicit networks and the strategy norm on them.

use gnorm_core::choi::{self, gates, KrausMap};
use gnorm_core::norms::{self, NormOptions};
use gnorm_core::{oracles, random, HermitianMatrix, Section};
use nalgebra::DMatrix;
use num_complex::Complex64;

/// Network H₀ → (H₁ ⊗ A) then (H₂ ⊗ A) → H₃ written as one map
/// H₀ ⊗ H₂ → H₁ ⊗ H₃, returned as a Choi matrix in order [H₃, H₂, H₁, H₀].
fn two_slot_network(first: &KrausMap, second: &KrausMap) -> HermitianMatrix {
    let da = 2;
    let mut ops = Vec::new();
    for b in first.operators() {
        for a in second.operators() {
            // b: (h1, anc) × h0, a: h3 × (h2, anc)
            let k = DMatrix::<Complex64>::from_fn(4, 4, |row, col| {
                let (h1, h3) = (row / 2, row % 2);
                let (h0, h2) = (col / 2, col % 2);
                (0..da).map(|x| a[(h3, h2 * da + x)] * b[(h1 * da + x, h0)]).sum()
            });
            ops.push(k);
        }
    }
    let x = choi::choi_of_kraus(&KrausMap::new(ops).unwrap()).into_matrix();
    x.with_dims(&[2, 2, 2, 2]).unwrap().permute_subsystems(&[1, 3, 0, 2]).unwrap()
}

fn memoryless(first: &HermitianMatrix, second: &HermitianMatrix) -> HermitianMatrix {
    // second acts on H₂ → H₃, first on H₀ → H₁: X₂ ⊗ X₁ is already ordered [H₃, H₂, H₁, H₀]
    second.tensor(first)
}

#[test]
fn network_with_ancilla_is_a_comb() {
    let s = Section::comb(&[2, 2, 2, 2]).unwrap();
    let mut r = random::rng(5);
    for _ in 0..5 {
        let first = random::channel(&mut r, 2, 4, 2);
        let second = random::channel(&mut r, 4, 2, 2);
        let x = two_slot_network(&first, &second);
        assert!(s.contains(&x, 1e-8).unwrap());
        let v = norms::ncomb_norm(&[2, 2, 2, 2], &x, NormOptions::with_tol(1e-9)).unwrap().value;
        assert!((v - 1.0).abs() < 1e-6, "{v}");
    }
}

#[test]
fn backward_signalling_is_rejected() {
    // H₂ → H₁ and H₀ → H₃: the first output depends on a later input
    let swap = DMatrix::<Complex64>::from_fn(4, 4, |row, col| {
        let (h1, h3) = (row / 2, row % 2);
        let (h0, h2) = (col / 2, col % 2);
        Complex64::new(if h1 == h2 && h3 == h0 { 1.0 } else { 0.0 }, 0.0)
    });
    let x = choi::choi_of_unitary(&swap).unwrap().into_matrix();
    let x = x.with_dims(&[2, 2, 2, 2]).unwrap().permute_subsystems(&[1, 3, 0, 2]).unwrap();
    let s = Section::comb(&[2, 2, 2, 2]).unwrap();
    assert!(!s.contains(&x, 1e-6).unwrap());
    // but as a plain channel from H₀ ⊗ H₂ it is fine
    assert!(x.min_eigenvalue().unwrap() > -1e-12);
}

#[test]
fn dual_of_comb_is_identity_tensor_shorter_comb() {
    let s = Section::comb(&[2, 2, 2, 2]).unwrap();
    let expected = Section::identity_tensor(2, &Section::comb(&[2, 2, 2]).unwrap()).unwrap();
    assert!(s.dual().unwrap().equivalent(&expected, 1e-8));
    let c = Section::channels(2, 3).unwrap();
    let states_lift = Section::identity_tensor(3, &Section::states(2).unwrap()).unwrap();
    assert!(c.dual().unwrap().equivalent(&states_lift, 1e-8));
}

#[test]
fn two_slot_norm_matches_diamond() {
    let mut r = random::rng(9);
    let x0 = choi::choi_of_kraus(&random::channel(&mut r, 2, 2, 2));
    let x1 = choi::choi_of_kraus(&random::channel(&mut r, 2, 2, 2));
    let diff = x0.combine(1.0, &x1, -1.0).unwrap();
    let opts = NormOptions::with_tol(1e-9);
    let d = norms::diamond_norm(&diff, opts).unwrap().value;
    let c = norms::ncomb_norm(&[2, 2], diff.matrix(), opts).unwrap().value;
    assert!((d - c).abs() < 1e-6);
}

#[test]
fn memoryless_strategies_id_id_versus_z_z() {
    let xi = choi::choi_of_unitary(&gates::identity(2)).unwrap().into_matrix();
    let xz = choi::choi_of_unitary(&gates::pauli_z()).unwrap().into_matrix();
    let a = memoryless(&xi, &xi);
    let b = memoryless(&xz, &xz);
    let s = Section::comb(&[2, 2, 2, 2]).unwrap();
    assert!(s.contains(&a, 1e-9).unwrap() && s.contains(&b, 1e-9).unwrap());
    let x = a.sub(&b);
    let n = norms::ncomb_norm(&[2, 2, 2, 2], &x, NormOptions::with_tol(1e-9)).unwrap();
    let one_slot = norms::diamond_norm(
        &choi::ChoiMatrix::from_matrix(xi.sub(&xz).with_dims(&[2, 2]).unwrap()).unwrap(),
        NormOptions::with_tol(1e-9),
    )
    .unwrap()
    .value;
    assert!(n.value >= one_slot - 1e-6 && n.value <= 2.0 + 1e-6, "{}", n.value);
    let co = oracles::sample_section(&s.dual().unwrap(), 200, 3).unwrap();
    let lower = oracles::norm_lower_bound(&x, &co).unwrap();
    assert!(lower <= n.value + 1e-6);
    // the uniform co-strategy already achieves 2
    let uniform = HermitianMatrix::identity(16).scale(0.25);
    let at_uniform = norms::base_norm_singleton(&uniform, &x).unwrap();
    assert!((at_uniform - 2.0).abs() < 1e-9);
    assert!(s.dual().unwrap().contains(&uniform, 1e-9).unwrap());
}

#[test]
fn comb_zero_and_members() {
    let opts = NormOptions::with_tol(1e-9);
    let z = HermitianMatrix::zeros(16);
    assert!(norms::ncomb_norm(&[2, 2, 2, 2], &z, opts).unwrap().value.abs() < 1e-7);
}
