use std::f64::consts::PI;

use atomarray_manybody::*;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn site_mask(n: usize, sites: &[usize]) -> Vec<bool> {
    (0..n).map(|i| sites.contains(&i)).collect()
}

fn rk4(h: &Hamiltonian, s: &ThreeLevelState, t: f64, steps: usize) -> ThreeLevelState {
    let dt = t / steps as f64;
    let d = h.dim();
    let deriv = |v: &[Complex64]| {
        let mut out = vec![c(0.0, 0.0); d];
        h.apply(v, &mut out);
        out.iter_mut().for_each(|x| *x *= c(0.0, -1.0));
        out
    };
    let mut v = s.amps.clone();
    for _ in 0..steps {
        let k1 = deriv(&v);
        let v2: Vec<_> = v.iter().zip(&k1).map(|(a, k)| a + k * (dt / 2.0)).collect();
        let k2 = deriv(&v2);
        let v3: Vec<_> = v.iter().zip(&k2).map(|(a, k)| a + k * (dt / 2.0)).collect();
        let k3 = deriv(&v3);
        let v4: Vec<_> = v.iter().zip(&k3).map(|(a, k)| a + k * dt).collect();
        let k4 = deriv(&v4);
        for i in 0..d {
            v[i] += (k1[i] + k2[i] * 2.0 + k3[i] * 2.0 + k4[i]) * (dt / 6.0);
        }
    }
    ThreeLevelState { n: s.n, amps: v }
}

// ---- propagation ----

#[test]
fn single_atom_pi_pulse_reaches_rydberg() {
    let p = HamiltonianParams::chain(1, mhz(2.0), 0.0, 0.0);
    let s = evolve(&ThreeLevelState::all_ground(1), &p, PI / p.omega).unwrap();
    assert!((s.amps[2] - c(0.0, -1.0)).norm() < 1e-10, "{:?}", s.amps);
    assert!(s.amps[1].norm() < 1e-10);
}

#[test]
fn blockaded_pair_oscillates_at_sqrt2_omega() {
    let omega = mhz(2.0);
    let p = HamiltonianParams::chain(2, omega, 0.0, 200.0 * omega);
    let t = PI / (2f64.sqrt() * omega);
    let s = evolve(&ThreeLevelState::all_ground(2), &p, t).unwrap();
    let p11 = s.amps[4].norm_sqr();
    let (p1r, pr1) = (s.amps[5].norm_sqr(), s.amps[7].norm_sqr());
    assert!(p11 < 1e-3, "{p11}");
    assert!((p1r - 0.5).abs() < 1e-3 && (pr1 - 0.5).abs() < 1e-3);
    // full period returns to |11>
    let back = evolve(&ThreeLevelState::all_ground(2), &p, 2.0 * t).unwrap();
    assert!(back.amps[4].norm_sqr() > 0.999);
}

#[test]
fn norm_and_energy_are_conserved() {
    let p = HamiltonianParams::scar_quench(8, DetuningPreset::Fixed);
    let h = Hamiltonian::new(&p).unwrap();
    for init in [ThreeLevelState::all_ground(8), ThreeLevelState::z2(8)] {
        let e0 = h.energy(&init);
        let s = h.evolve(&init, 1e-6).unwrap();
        assert!((s.norm() - 1.0).abs() < 1e-9);
        let scale = e0.abs().max(p.omega);
        assert!((h.energy(&s) - e0).abs() / scale < 1e-7, "{} vs {}", h.energy(&s), e0);
    }
}

#[test]
fn step_halving_agrees() {
    let p = HamiltonianParams::scar_quench(6, DetuningPreset::ScaledToV0);
    let err = step_halving_error(&ThreeLevelState::z2(6), &p, 0.7e-6).unwrap();
    assert!(err < 1e-8, "{err}");
}

#[test]
fn agrees_with_rk4_on_six_atoms() {
    let p = HamiltonianParams::scar_quench(6, DetuningPreset::Fixed);
    let h = Hamiltonian::new(&p).unwrap();
    let t = 0.4e-6;
    for init in [ThreeLevelState::all_ground(6), ThreeLevelState::z2(6)] {
        let a = h.evolve(&init, t).unwrap();
        let (_, bound) = h.spectral_bounds();
        let steps = (bound * t / 0.02).ceil() as usize;
        let b = rk4(&h, &init, t, steps);
        assert!(a.fidelity(&b).unwrap() > 1.0 - 1e-6);
    }
}

#[test]
fn agrees_with_dense_diagonalization() {
    let mut p = HamiltonianParams::chain(3, mhz(3.1), mhz(0.7), mhz(20.0));
    p.site_detuning = vec![mhz(0.1), -mhz(0.2), 0.0];
    p.laser_phase = 0.4;
    let h = Hamiltonian::new(&p).unwrap();
    let d = h.dim();
    let mut m = DMatrix::<Complex64>::zeros(d, d);
    for j in 0..d {
        let mut e = vec![c(0.0, 0.0); d];
        e[j] = c(1.0, 0.0);
        let mut col = vec![c(0.0, 0.0); d];
        h.apply(&e, &mut col);
        for i in 0..d {
            m[(i, j)] = col[i];
        }
    }
    let eig = m.clone().symmetric_eigen();
    let t = 0.9e-6;
    let phases = DMatrix::from_diagonal(&DVector::from_iterator(d, eig.eigenvalues.iter().map(|&l| Complex64::from_polar(1.0, -l * t))));
    let u = &eig.eigenvectors * phases * eig.eigenvectors.adjoint();
    let init = ThreeLevelState::all_ground(3);
    let exact = &u * DVector::from_vec(init.amps.clone());
    let s = h.evolve(&init, t).unwrap();
    for i in 0..d {
        assert!((exact[i] - s.amps[i]).norm() < 1e-8);
    }
}

#[test]
fn too_many_atoms_is_rejected() {
    let p = HamiltonianParams::chain(11, 1.0, 0.0, 10.0);
    assert_eq!(Hamiltonian::new(&p).unwrap_err(), ManybodyError::DimensionOverflow { n: 11, max: 10 });
    let s = ThreeLevelState::all_ground(2);
    assert!(matches!(evolve(&s, &HamiltonianParams::chain(2, 1.0, 0.0, 10.0), -1.0), Err(ManybodyError::NegativeTime(_))));
}

#[test]
fn detuning_presets_differ() {
    let a = HamiltonianParams::scar_quench(8, DetuningPreset::Fixed);
    let b = HamiltonianParams::scar_quench(8, DetuningPreset::ScaledToV0);
    assert!((a.delta / mhz(1.0) - 0.3).abs() < 1e-12);
    assert!((b.delta / mhz(1.0) - 0.346).abs() < 1e-9);
    assert!(a.is_blockaded());
}

// ---- CZ ----

#[test]
fn cz_constants_give_high_fidelity() {
    let p = CzPulseParams::standard(mhz(3.6));
    let r = cz_pulse_unitary(&p, 500.0 * p.omega).unwrap();
    assert!(r.fidelity >= 0.999, "{}", r.fidelity);
    assert!(r.leakage <= 1e-3);
}

#[test]
fn cz_fidelity_increases_with_blockade() {
    let p = CzPulseParams::standard(mhz(3.6));
    let mut last = 0.0;
    for k in [10.0, 20.0, 50.0, 100.0, 200.0, 500.0, 1000.0] {
        let f = cz_pulse_unitary(&p, k * p.omega).unwrap().fidelity;
        assert!(f > last, "{k}: {f} after {last}");
        last = f;
    }
}

#[test]
fn cz_leaves_00_dark() {
    let p = CzPulseParams::standard(mhz(3.6));
    let r = cz_pulse_unitary(&p, 500.0 * p.omega).unwrap();
    assert!((r.unitary[0][0].norm() - 1.0).abs() < 1e-12);
    for i in 1..4 {
        assert!(r.unitary[i][0].norm() < 1e-12);
    }
}

#[test]
fn echoed_cz_pair_cancels_the_single_qubit_phase() {
    let p = CzPulseParams::standard(mhz(3.6));
    let r = cz_pulse_unitary(&p, 500.0 * p.omega).unwrap();
    assert!(r.zeta.abs() > 0.1);
    // Y(π) ⊗ Y(π) on the basis |00>,|01>,|10>,|11>
    let y = [[c(0.0, 0.0), c(-1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]];
    let mut yy = [[c(0.0, 0.0); 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            yy[i][j] = y[i / 2][j / 2] * y[i % 2][j % 2];
        }
    }
    let total = cz::matmul(&r.unitary, &cz::matmul(&yy, &r.unitary));
    let ideal = cz::matmul(&ideal_cz(0.0), &cz::matmul(&yy, &ideal_cz(0.0)));
    assert!(process_fidelity(&ideal, &total) > 0.998);
}

#[test]
fn cz_rejects_bad_params() {
    let mut p = CzPulseParams::standard(1.0);
    p.tau = 0.0;
    assert!(cz_pulse_unitary(&p, 100.0).is_err());
}

// ---- state preparation ----

#[test]
fn unshifted_pi_pulse_excites_every_atom() {
    let p = HamiltonianParams::chain(4, mhz(4.45), 0.0, 0.0);
    let s = prepare_z2(&ThreeLevelState::all_ground(4), &p, &[false; 4], 0.0).unwrap();
    assert!(s.rydberg_density().iter().all(|&x| x > 1.0 - 1e-10));
}

#[test]
fn light_shifted_sites_stay_in_ground() {
    let p = HamiltonianParams::chain(8, mhz(4.45), 0.0, 0.0);
    let s = prepare_z2(&ThreeLevelState::all_ground(8), &p, &z2_mask(8), mhz(50.0)).unwrap();
    for (i, r) in s.rydberg_density().iter().enumerate() {
        let ok = if i % 2 == 0 { *r } else { 1.0 - r };
        assert!(ok >= 0.99, "site {i}: {r}");
    }
}

#[test]
fn z2_preparation_with_interactions() {
    // next-nearest neighbours shift the interior atoms by 2 V0/64, so only the
    // masked sites and the chain ends meet the 1% bound
    let p = HamiltonianParams::chain(8, mhz(4.45), 0.0, mhz(20.0));
    let s = prepare_z2(&ThreeLevelState::all_ground(8), &p, &z2_mask(8), mhz(50.0)).unwrap();
    let r = s.rydberg_density();
    for (i, x) in r.iter().enumerate() {
        if i % 2 == 1 {
            assert!(*x < 0.01, "site {i}: {x}");
        } else {
            assert!(*x > 0.985, "site {i}: {x}");
        }
    }
    assert!(r[0] > 0.99);
}

#[test]
fn infinite_light_shift_is_exact() {
    let p = HamiltonianParams::chain(6, mhz(4.45), 0.0, 0.0);
    let s = prepare_z2(&ThreeLevelState::all_ground(6), &p, &z2_mask(6), f64::INFINITY).unwrap();
    assert!(s.fidelity(&ThreeLevelState::z2(6)).unwrap() > 1.0 - 1e-12);
}

// ---- mapping ----

#[test]
fn ground_state_maps_to_zero() {
    let p = HamiltonianParams::chain(3, mhz(3.1), 0.0, mhz(20.0));
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let m = coherent_map(&ThreeLevelState::all_ground(3), &p, &MappingErrorModel::zeroed(), &[0.0; 3], &mut rng).unwrap();
    assert!(m.lost.iter().all(|l| !l));
    assert!((m.state.amps[0].norm_sqr() - 1.0).abs() < 1e-12);
}

#[test]
fn superposition_maps_into_hyperfine_space() {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let site = [c(0.0, 0.0), c(h, 0.0), c(0.0, h)];
    let s = ThreeLevelState::product(&[site; 3]);
    let p = HamiltonianParams::chain(3, mhz(3.1), 0.0, mhz(20.0));
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let m = coherent_map(&s, &p, &MappingErrorModel::zeroed(), &[0.0; 3], &mut rng).unwrap();
    assert!(m.lost.iter().all(|l| !l));
    for i in 0..3 {
        let pop = m.state.populations(i);
        assert!((pop[0] - 0.5).abs() < 1e-12 && (pop[1] - 0.5).abs() < 1e-12 && pop[2] < 1e-20);
    }
    // still a product state
    assert!((purity_overlap(&m.state, &m.state, &site_mask(3, &[0])).unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn zeroed_mapping_preserves_purity() {
    let p = HamiltonianParams::scar_quench(6, DetuningPreset::Fixed);
    let s = evolve(&ThreeLevelState::z2(6), &p, 0.3e-6).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let m = coherent_map(&s, &p, &MappingErrorModel::zeroed(), &[0.0; 6], &mut rng).unwrap();
    assert!(m.lost.iter().all(|l| !l));
    for sites in [vec![0], vec![2, 3], vec![0, 1, 2], vec![1, 4, 5]] {
        let mask = site_mask(6, &sites);
        let before = purity_overlap(&s, &s, &mask).unwrap();
        let after = purity_overlap(&m.state, &m.state, &mask).unwrap();
        assert!((before - after).abs() < 1e-10, "{sites:?}: {before} vs {after}");
    }
}

#[test]
fn blockade_violation_is_lost_at_its_residual_population() {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut s = ThreeLevelState::zero(2);
    s.amps[4] = c(h, 0.0); // |11>
    s.amps[8] = c(h, 0.0); // |rr>
    let p = HamiltonianParams::chain(2, mhz(3.1), 0.0, mhz(20.0));
    let mut errs = MappingErrorModel::zeroed();
    errs.interactions = true;
    let pulsed = mapping_pulses(&s, &p, &errs, &[0.0; 2]).unwrap();
    let residual = pulsed.populations(0)[2];
    assert!(residual > 0.05, "{residual}");
    let trials = 4000;
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let lost = (0..trials)
        .filter(|_| coherent_map(&s, &p, &errs, &[0.0; 2], &mut rng).unwrap().lost[0])
        .count() as f64
        / trials as f64;
    let sigma = (residual * (1.0 - residual) / trials as f64).sqrt();
    assert!((lost - residual).abs() < 4.0 * sigma, "{lost} vs {residual}");

    // without interactions the |rr> branch maps cleanly
    let clean = mapping_pulses(&s, &p, &MappingErrorModel::zeroed(), &[0.0; 2]).unwrap();
    assert!(clean.populations(0)[2] < 1e-20);
}

#[test]
fn error_model_defaults() {
    let e = MappingErrorModel::default();
    assert!((e.pair_factor(0.0) - 0.961).abs() < 1e-12);
    // depolarizing both copies at this rate gives the same pair purity
    let p = e.depolarizing(0.0);
    let q = (1.0 - p) * (1.0 - p);
    assert!((q + (1.0 - q) / 2.0 - 0.961).abs() < 1e-12);
    assert!(MappingErrorModel::zeroed().is_zeroed());
    assert_eq!(MappingErrorModel::zeroed().depolarizing(1e-6), 0.0);
    let mut bad = e.clone();
    bad.gap_time = -1.0;
    assert!(bad.validate().is_err());
}

// ---- interferometry ----

#[test]
fn bell_readout_maps_singlet_to_00() {
    let u = bell_pair_unitary();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let bell = [
        [c(0.0, 0.0), c(h, 0.0), c(-h, 0.0), c(0.0, 0.0)],
        [c(0.0, 0.0), c(h, 0.0), c(h, 0.0), c(0.0, 0.0)],
        [c(h, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(h, 0.0)],
        [c(h, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-h, 0.0)],
    ];
    let mut seen = [false; 4];
    for (k, b) in bell.iter().enumerate() {
        let out: Vec<Complex64> = (0..4).map(|i| (0..4).map(|j| u[i][j] * b[j]).sum()).collect();
        let hit = (0..4).find(|&i| out[i].norm_sqr() > 1.0 - 1e-12).expect("Bell state maps to a basis state");
        if k == 0 {
            assert_eq!(hit, 0);
        }
        assert!(!seen[hit]);
        seen[hit] = true;
    }
}

#[test]
fn identical_product_states_never_read_singlet() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for theta in [0.0, 0.7, 1.3, PI / 2.0, 2.9] {
        let site = [c((theta / 2.0).cos(), 0.0), c(0.3 * (theta / 2.0).sin(), -(0.91f64).sqrt() * (theta / 2.0).sin()), c(0.0, 0.0)];
        let s = MappedState::unmapped(ThreeLevelState::product(&[site; 4]));
        let probs = twin_distribution(&s, &s).unwrap();
        for pair in 0..4 {
            let p00: f64 = probs.iter().enumerate().filter(|(k, _)| (k >> (2 * (3 - pair))) & 3 == 0).map(|(_, p)| p).sum();
            assert!(p00 < 1e-15, "{theta} {pair} {p00}");
        }
        let shots = interfere_and_sample(&s, &s, 2000, 0.0, &mut rng).unwrap();
        assert!(shots.iter().all(|sh| sh.outcomes.iter().all(|&o| o != 0)));
    }
}

#[test]
fn twin_copies_must_match_in_length() {
    let a = MappedState::unmapped(ThreeLevelState::all_ground(2));
    let b = MappedState::unmapped(ThreeLevelState::all_ground(3));
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    assert_eq!(interfere_and_sample(&a, &b, 1, 0.0, &mut rng).unwrap_err(), ManybodyError::LengthMismatch { expected: 2, got: 3 });
}

#[test]
fn lost_pairs_count_as_plus_one() {
    let shot = TwinShot { outcomes: vec![0, 0, 3], lost: vec![false, true, false] };
    assert!(shot.singlet(0) && !shot.singlet(1));
    assert_eq!(shot.parity(&[true, true, true]), -1.0);
    assert_eq!(shot.parity(&[false, true, true]), 1.0);
}

// ---- entropy ----

#[test]
fn no_singlets_means_pure() {
    let shots = vec![TwinShot { outcomes: vec![1, 2, 3], lost: vec![false; 3] }; 50];
    let r = renyi_entropy(&shots, &[true; 3]).unwrap();
    assert_eq!(r.purity, 1.0);
    assert_eq!(r.s2, Some(0.0));
    assert!(!r.non_positive);
}

#[test]
fn non_positive_purity_is_flagged() {
    let shots = vec![TwinShot { outcomes: vec![0], lost: vec![false] }; 10];
    let r = renyi_entropy(&shots, &[true]).unwrap();
    assert!(r.non_positive);
    assert_eq!(r.s2, None);
    assert_eq!(r.purity, -1.0);
}

#[test]
fn w_state_is_locally_mixed_and_globally_pure() {
    let omega = mhz(3.1);
    let p = HamiltonianParams::chain(2, omega, 0.0, 200.0 * omega);
    let t = PI / (2f64.sqrt() * omega);
    let w = evolve(&ThreeLevelState::all_ground(2), &p, t).unwrap();
    assert!((purity_overlap(&w, &w, &[true, false]).unwrap() - 0.5).abs() < 1e-3);
    assert!((purity_overlap(&w, &w, &[true, true]).unwrap() - 1.0).abs() < 1e-9);

    let shots = sample_twin_shots(&ThreeLevelState::all_ground(2), &p, t, &MappingErrorModel::zeroed(), 20000, 1, 7).unwrap();
    let single = renyi_entropy(&shots, &[true, false]).unwrap();
    let global = renyi_entropy(&shots, &[true, true]).unwrap();
    assert!((single.purity - 0.5).abs() < 3.0 * single.purity_stderr + 1e-3, "{single:?}");
    assert!(global.purity > 0.99, "{global:?}");
}

#[test]
fn jackknife_matches_delta_method() {
    let mut shots = vec![TwinShot { outcomes: vec![1], lost: vec![false] }; 800];
    shots.extend(vec![TwinShot { outcomes: vec![0], lost: vec![false] }; 200]);
    let r = renyi_entropy(&shots, &[true]).unwrap();
    assert!((r.purity - 0.6).abs() < 1e-12);
    let delta = r.purity_stderr / (r.purity * 2f64.ln());
    assert!((r.s2_stderr.unwrap() - delta).abs() / delta < 0.01);
}

#[test]
fn classical_offset_removes_initial_entropy() {
    // t = 0 product state with the full error model: S2(k) − offset(k) ≈ 0
    let p = HamiltonianParams::scar_quench(6, DetuningPreset::Fixed);
    let errs = MappingErrorModel::default();
    let init = ThreeLevelState::all_ground(6);
    let shots = sample_twin_shots(&init, &p, 0.0, &errs, 20000, 200, 8).unwrap();
    let global = renyi_entropy(&shots, &[true; 6]).unwrap().s2.unwrap();
    for k in 1..=6 {
        let r = renyi_entropy(&shots, &interval_mask(6, 0, k)).unwrap().with_classical_offset(classical_offset(global, k, 6));
        let left = r.s2_corrected().unwrap();
        assert!(left.abs() < 3.0 * r.s2_stderr.unwrap() + 1e-12, "k={k}: {left} ± {:?}", r.s2_stderr);
    }
}

#[test]
fn mutual_information_volume_versus_area_law() {
    let p = HamiltonianParams::scar_quench(8, DetuningPreset::Fixed);
    let info = |init: ThreeLevelState| -> Vec<f64> {
        let s = evolve(&init, &p, 0.5e-6).unwrap();
        (1..=3)
            .map(|k| {
                // adjacent blocks of k sites on either side of the centre
                let a = interval_mask(8, 4 - k, 4);
                let b = interval_mask(8, 4, 4 + k);
                let ab: Vec<bool> = a.iter().zip(&b).map(|(x, y)| *x || *y).collect();
                mutual_information(renyi2(&s, &a).unwrap(), renyi2(&s, &b).unwrap(), renyi2(&s, &ab).unwrap())
            })
            .collect()
    };
    let g = info(ThreeLevelState::all_ground(8));
    let z = info(ThreeLevelState::z2(8));
    assert!(g[2] - g[0] > 1.5, "{g:?}");
    assert!(z[2] - z[0] < 0.5, "{z:?}");
    assert!(g.iter().zip(&z).all(|(a, b)| a > b));
}

// ---- oracle ----

#[test]
fn oracle_is_one_for_product_states_at_t0() {
    let p = HamiltonianParams::scar_quench(5, DetuningPreset::Fixed);
    for sites in [vec![0], vec![1, 2], vec![0, 1, 2, 3, 4]] {
        let v = purity_oracle(&ThreeLevelState::z2(5), &p, 0.0, &site_mask(5, &sites), &MappingErrorModel::zeroed(), 1, 0).unwrap();
        assert!((v - 1.0).abs() < 1e-12);
    }
}

#[test]
fn sampled_purity_matches_exact_oracle() {
    let p = HamiltonianParams::scar_quench(8, DetuningPreset::Fixed);
    let t = 0.5e-6;
    let errs = MappingErrorModel::zeroed();
    let shots = sample_twin_shots(&ThreeLevelState::z2(8), &p, t, &errs, 10000, 1, 9).unwrap();
    for sites in [vec![3], vec![4], vec![0, 1, 2, 3]] {
        let mask = site_mask(8, &sites);
        let exact = purity_oracle(&ThreeLevelState::z2(8), &p, t, &mask, &errs, 1, 0).unwrap();
        let r = renyi_entropy(&shots, &mask).unwrap();
        assert!((r.purity - exact).abs() < 3.0 * r.purity_stderr, "{sites:?}: {} vs {exact}", r.purity);
    }
}

#[test]
fn sampled_purity_matches_noisy_oracle() {
    let p = HamiltonianParams::scar_quench(4, DetuningPreset::Fixed);
    let t = 0.4e-6;
    let errs = MappingErrorModel::default();
    let init = ThreeLevelState::z2(4);
    let shots = sample_twin_shots(&init, &p, t, &errs, 10000, 400, 10).unwrap();
    for sites in [vec![1], vec![0, 1], vec![0, 1, 2, 3]] {
        let mask = site_mask(4, &sites);
        let oracle = purity_oracle(&init, &p, t, &mask, &errs, 80, 11).unwrap();
        let r = renyi_entropy(&shots, &mask).unwrap();
        assert!((r.purity - oracle).abs() < 3.0 * r.purity_stderr, "{sites:?}: {} vs {oracle}", r.purity);
    }
}

#[test]
fn sampling_is_deterministic_per_seed() {
    let p = HamiltonianParams::scar_quench(4, DetuningPreset::Fixed);
    let errs = MappingErrorModel::default();
    let a = sample_twin_shots(&ThreeLevelState::z2(4), &p, 0.2e-6, &errs, 500, 16, 3).unwrap();
    let b = sample_twin_shots(&ThreeLevelState::z2(4), &p, 0.2e-6, &errs, 500, 16, 3).unwrap();
    let c2 = sample_twin_shots(&ThreeLevelState::z2(4), &p, 0.2e-6, &errs, 500, 16, 4).unwrap();
    assert_eq!(a, b);
    assert_ne!(a, c2);
}

// ---- hyperfine benchmark ----

#[test]
fn raman_benchmark_noiseless_and_noisy() {
    for (k, theta) in [0.0, 0.8, 1.6, 2.4, PI].into_iter().enumerate() {
        let (pt, _) = raman_benchmark(theta, 4, 2000, &MappingErrorModel::zeroed(), k as u64).unwrap();
        assert_eq!(pt.p00, 0.0);
        let (noisy, _) = raman_benchmark(theta, 8, 5000, &MappingErrorModel::default(), k as u64).unwrap();
        assert!((noisy.p00 - 0.0195).abs() < 3.0 * noisy.purity_stderr / 2.0 + 1e-4, "{noisy:?}");
    }
}

// ---- PXP ----

#[test]
fn pxp_dimensions_follow_lucas_numbers() {
    assert_eq!(pxp_basis(2), vec![0, 1, 2]);
    for n in 3..=16 {
        assert_eq!(pxp_basis(n).len() as u64, lucas(n), "n={n}");
    }
    for n in 4..30 {
        assert_eq!(lucas(n), lucas(n - 1) + lucas(n - 2));
    }
    assert_eq!(lucas(24), 103682);
    assert_eq!(pxp_basis(24).len(), 103682);
    assert!(matches!(PxpState::z2(25), Err(ManybodyError::DimensionOverflow { .. })));
}

#[test]
fn pxp_z2_revives_and_sublattice_entropies_alternate() {
    let z = PxpState::z2(12).unwrap();
    let times: Vec<f64> = (0..=420).map(|k| k as f64 * 0.05).collect();
    let mut fid = Vec::new();
    let (mut s0, mut s1) = (Vec::new(), Vec::new());
    let mut cur = z.clone();
    let mut last = 0.0;
    for &t in &times {
        cur = pxp_evolve(&cur, 1.0, t - last).unwrap();
        last = t;
        fid.push(cur.overlap(&z));
        s0.push(cur.single_site_renyi2(0));
        s1.push(cur.single_site_renyi2(1));
        assert!((cur.amps.iter().map(|a| a.norm_sqr()).sum::<f64>() - 1.0).abs() < 1e-9);
    }
    let t_rev = revival_time(&times, &fid).unwrap();
    assert!((8.5..10.5).contains(&t_rev), "{t_rev}");
    let k = times.iter().position(|&t| t >= t_rev).unwrap();
    assert!(fid[k] > 0.7);
    // near |Z2> the excited sublattice fluctuates while the other is pinned,
    // and the roles swap near |Z2'> half a period later
    for half in 1..=4 {
        let i = times.iter().position(|&t| t >= half as f64 * t_rev / 2.0).unwrap();
        let (even, odd) = (s0[i], s1[i]);
        if half % 2 == 1 {
            assert!(odd > even + 0.03, "t={}: {even} {odd}", times[i]);
        } else {
            assert!(even > odd + 0.03, "t={}: {even} {odd}", times[i]);
        }
    }
}

// ---- properties ----

fn arb_site() -> impl Strategy<Value = [Complex64; 3]> {
    (0.0..PI, 0.0..2.0 * PI, 0.0..2.0 * PI).prop_map(|(a, p1, p2)| {
        [c(0.0, 0.0), Complex64::from_polar((a / 2.0).cos(), p1), Complex64::from_polar((a / 2.0).sin(), p2)]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn evolution_preserves_norm(sites in prop::collection::vec(arb_site(), 1..5), om in 0.5f64..5.0, de in -2.0f64..2.0, t in 0.0f64..1.0) {
        let n = sites.len();
        let p = HamiltonianParams::chain(n, mhz(om), mhz(de), mhz(20.0));
        let s = evolve(&ThreeLevelState::product(&sites), &p, t * 1e-6).unwrap();
        prop_assert!((s.norm() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn pure_state_entropy_is_symmetric(t in 0.0f64..0.8, cut in 1usize..5) {
        let p = HamiltonianParams::scar_quench(5, DetuningPreset::Fixed);
        let s = evolve(&ThreeLevelState::all_ground(5), &p, t * 1e-6).unwrap();
        let a = interval_mask(5, 0, cut);
        let b: Vec<bool> = a.iter().map(|x| !x).collect();
        let (sa, sb) = (renyi2(&s, &a).unwrap(), renyi2(&s, &b).unwrap());
        prop_assert!((sa - sb).abs() < 1e-9);
        let pur = purity_overlap(&s, &s, &a).unwrap();
        let d = 3f64.powi(cut.min(5 - cut) as i32);
        prop_assert!(pur <= 1.0 + 1e-12 && pur >= 1.0 / d - 1e-12);
    }
}

#[test]
fn mapping_map_matches_direct_pulses() {
    let p = HamiltonianParams::scar_quench(5, DetuningPreset::Fixed);
    let s = evolve(&ThreeLevelState::z2(5), &p, 0.2e-6).unwrap();
    let mut errs = MappingErrorModel::default();
    errs.interactions = true;
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let det = errs.sample_detunings(5, &mut rng);
    let direct = mapping_pulses(&s, &p, &errs, &det).unwrap();
    let via = MappingMap::new(5, &p, &errs, &det).unwrap().apply(&s).unwrap();
    let diff: f64 = direct.amps.iter().zip(&via.amps).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    assert!(diff < 1e-10, "{diff}");
}

#[test]
fn mapping_map_rejects_zero_population() {
    let p = HamiltonianParams::scar_quench(3, DetuningPreset::Fixed);
    let m = MappingMap::new(3, &p, &MappingErrorModel::zeroed(), &[0.0; 3]).unwrap();
    let s = ThreeLevelState::basis(&[Level::Zero, Level::One, Level::One]);
    assert!(m.apply(&s).is_err());
}
