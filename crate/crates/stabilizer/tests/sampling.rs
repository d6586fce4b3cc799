use std::f64::consts::FRAC_PI_2;

use atomarray_model::{AtomRecord, Axis, Circuit, Layer, ShotRecord};
use atomarray_stabilizer::io::{read_shots_csv, write_shots_csv};
use atomarray_stabilizer::*;
use proptest::prelude::*;

/// Two adjacent atoms: |++>, CZ, H-like readout of atom 0.
fn pair_circuit() -> Circuit {
    Circuit {
        name: "pair".into(),
        code: None,
        atoms: vec![AtomRecord::fixed(0, 0.0, 0.0), AtomRecord::fixed(1, 3.0, 0.0), AtomRecord::fixed(2, 30.0, 0.0)],
        layers: vec![
            Layer::GlobalRotation { axis: Axis::Y, angle: FRAC_PI_2 },
            Layer::ParallelCz { pairs: vec![(0, 1)] },
            Layer::EchoPulse,
            Layer::MeasureAll { basis: Axis::Z },
        ],
    }
}

#[test]
fn cz_on_plus_states() {
    let c = pair_circuit();
    let st = final_state(&c).unwrap();
    // Y(π) on every atom: XZ and ZX anticommute with YY twice, X on the idle atom once
    assert_eq!(st.tableau.expectation(&"+XZI".parse().unwrap()), Some(1));
    assert_eq!(st.tableau.expectation(&"+ZXI".parse().unwrap()), Some(1));
    assert_eq!(st.tableau.expectation(&"+IIX".parse().unwrap()), Some(-1));
}

#[test]
fn same_seed_same_shots() {
    let c = pair_circuit();
    let noise = NoiseModel::empirical();
    let a = sample_shots(&c, &noise, 2000, RngSpec::new(9)).unwrap();
    let b = sample_shots(&c, &noise, 2000, RngSpec::new(9)).unwrap();
    let d = sample_shots(&c, &noise, 2000, RngSpec::new(10)).unwrap();
    assert_eq!(a, b);
    assert_ne!(a, d);
}

#[test]
fn shot_k_depends_only_on_seed_and_index() {
    let c = pair_circuit();
    let s = Sampler::new(&c).unwrap();
    let noise = NoiseModel::empirical();
    let all = s.sample(&noise, 50, RngSpec::new(4));
    let again = s.run_shot(&noise, &mut RngSpec::new(4).stream(37));
    assert_eq!(all[37], again);
}

#[test]
fn certain_initial_loss_reads_all_ones() {
    let c = pair_circuit();
    let noise = NoiseModel { init_loss: 1.0, ..NoiseModel::zero() };
    for s in sample_shots(&c, &noise, 20, RngSpec::new(1)).unwrap() {
        assert_eq!(s.bits(), &[1, 1, 1]);
        assert!(s.lost().iter().all(|&l| l));
    }
}

#[test]
fn gate_channel_only_hits_participants() {
    let c = pair_circuit();
    let noise = NoiseModel { tq_layer: Channel::new(0.0, 0.0, 0.0, 1.0), ..NoiseModel::zero() };
    for acc in [Accounting::GateLayers, Accounting::GateParticipants, Accounting::PerCircuitLayer] {
        for s in sample_shots(&c, &noise.with_accounting(acc), 20, RngSpec::new(1)).unwrap() {
            assert_eq!(s.lost(), &[true, true, false], "{acc:?}");
        }
    }
    for s in sample_shots(&c, &noise.with_accounting(Accounting::PerGateLayer), 20, RngSpec::new(1)).unwrap() {
        assert_eq!(s.lost(), &[true, true, true]);
    }
}

#[test]
fn ambient_rate_matches_layer_count() {
    // two Z(π) layers leave |0> alone, so every ambient X flip shows in the readout
    let c = Circuit {
        name: "idle".into(),
        code: None,
        atoms: vec![AtomRecord::fixed(0, 0.0, 0.0)],
        layers: vec![
            Layer::GlobalRotation { axis: Axis::Z, angle: 2.0 * FRAC_PI_2 },
            Layer::GlobalRotation { axis: Axis::Z, angle: 2.0 * FRAC_PI_2 },
            Layer::MeasureAll { basis: Axis::Z },
        ],
    };
    let p = 0.1;
    let noise = NoiseModel { ambient_layer: Channel::new(p, 0.0, 0.0, 0.0), ..NoiseModel::zero() };
    let n = 20_000;
    let ones = sample_shots(&c, &noise, n, RngSpec::new(3)).unwrap().iter().filter(|s| s.bits()[0] == 1).count();
    // two ambient layers: odd number of flips
    let expect = 2.0 * p * (1.0 - p);
    let sigma = (expect * (1.0 - expect) / n as f64).sqrt();
    assert!((ones as f64 / n as f64 - expect).abs() < 4.0 * sigma);
}

#[test]
fn non_clifford_angle_is_rejected() {
    let mut c = pair_circuit();
    c.layers[0] = Layer::GlobalRotation { axis: Axis::Y, angle: 0.3 };
    assert!(matches!(Sampler::new(&c), Err(StabilizerError::NonCliffordAngle { .. })));
}

#[test]
fn invalid_circuit_is_rejected() {
    let mut c = pair_circuit();
    c.atoms[1].x = 20.0;
    assert!(matches!(sample_shots(&c, &NoiseModel::zero(), 1, RngSpec::new(1)), Err(StabilizerError::InvalidCircuit(_))));
}

#[test]
fn csv_round_trip() {
    let shots = sample_shots(&pair_circuit(), &NoiseModel::empirical(), 200, RngSpec::new(5)).unwrap();
    let mut buf = Vec::new();
    write_shots_csv(&mut buf, &shots).unwrap();
    let text = String::from_utf8(buf.clone()).unwrap();
    assert!(text.starts_with("shot_id,bitstring,loss_mask"));
    assert_eq!(read_shots_csv(&buf[..]).unwrap(), shots);
}

proptest! {
    #[test]
    fn lost_atoms_always_read_one(loss in 0.0f64..0.5, seed in any::<u64>()) {
        let noise = NoiseModel { tq_layer: Channel::new(0.0, 0.0, 0.0, loss), init_loss: loss, ..NoiseModel::zero() };
        let shots: Vec<ShotRecord> = sample_shots(&pair_circuit(), &noise, 64, RngSpec::new(seed)).unwrap();
        for s in shots {
            for (b, l) in s.bits().iter().zip(s.lost()) {
                prop_assert!(!*l || *b == 1);
            }
        }
    }
}
