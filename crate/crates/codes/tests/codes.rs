use atomarray_codes::*;
use atomarray_model::{validate_circuit, Pauli, PauliString};
use atomarray_stabilizer::{final_state, sample_shots, NoiseModel, RngSpec};

fn load(name: &str) -> (CodeSpec, Layout) {
    builtin_code(name).unwrap()
}

#[test]
fn compiled_circuits_are_valid_and_have_the_shipped_depth() {
    for (name, depth) in [("cluster-12", 2), ("steane-7", 4), ("surface-19", 4), ("toric-24", 5)] {
        let (code, layout) = load(name);
        for s in Setting::BOTH {
            let c = compile_code_circuit(&code, &layout, s).unwrap();
            assert_eq!(c.cz_layer_count(), depth, "{name}");
            let v = validate_circuit(&c);
            assert!(v.is_empty(), "{name} {s:?}: {v:?}");
            let echoes = c.layers.iter().filter(|l| matches!(l, atomarray_model::Layer::EchoPulse)).count();
            assert_eq!(echoes, depth - 1 + depth % 2, "{name}");
        }
    }
}

#[test]
fn echo_signs_match_the_simulated_state() {
    for name in BUILTIN_CODES {
        let (code, layout) = load(name);
        for s in Setting::BOTH {
            let c = compile_code_circuit(&code, &layout, s).unwrap();
            let st = final_state(&c).unwrap();
            let n = code.n();
            let t = s.css_type();
            for &i in &code.stabilizers_of(t) {
                let z = PauliString::uniform(n, &code.stabilizers[i].op.support(), Pauli::Z);
                assert_eq!(st.tableau.expectation(&z), Some(code.sign_corrections[i]), "{name} {}", code.stabilizers[i].name);
            }
            if t == CssType::X {
                for (k, l) in code.logicals.iter().enumerate() {
                    let z = PauliString::uniform(n, &l.x.support(), Pauli::Z);
                    assert_eq!(st.tableau.expectation(&z), Some(code.logical_sign_corrections[k].0), "{name} {}", l.name);
                }
            }
        }
    }
}

#[test]
fn echo_signs_are_nontrivial_for_deep_circuits() {
    // two CZ layers and one echo: every cluster stabilizer keeps its sign
    let (cluster, _) = load("cluster-12");
    assert!(cluster.sign_corrections.iter().all(|&s| s == 1));
    for name in ["steane-7", "surface-19", "toric-24"] {
        let (code, _) = load(name);
        assert!(code.sign_corrections.contains(&-1), "{name}");
        assert!(code.sign_corrections.contains(&1), "{name}");
    }
}

#[test]
fn noiseless_shots_satisfy_every_stabilizer() {
    for name in BUILTIN_CODES {
        let (code, layout) = load(name);
        let x = sample_shots(&compile_code_circuit(&code, &layout, Setting::Xside).unwrap(), &NoiseModel::zero(), 500, RngSpec::new(1))
            .unwrap();
        let z = sample_shots(&compile_code_circuit(&code, &layout, Setting::Zside).unwrap(), &NoiseModel::zero(), 500, RngSpec::new(2))
            .unwrap();
        let r = evaluate_code(&code, &SettingShots { xside: Some(&x), zside: Some(&z) }).unwrap();
        for s in &r.stabilizers {
            assert_eq!(s.value.mean, 1.0, "{name} {}", s.name);
        }
        for l in r.logicals.iter().filter(|l| l.setting == Setting::Xside) {
            assert_eq!(l.raw.mean, 1.0, "{name} {}", l.name);
            assert_eq!(l.detected.mean, 1.0);
        }
        for l in r.logicals.iter().filter(|l| l.setting == Setting::Zside) {
            assert!(l.raw.mean.abs() < 4.0 * 2.0 / (500f64).sqrt(), "{name} {} = {}", l.name, l.raw.mean);
        }
        assert_eq!(r.pass_fraction, 1.0);
    }
}

fn single_qubit_errors(n: usize) -> Vec<PauliString> {
    let mut out = Vec::new();
    for q in 0..n {
        for p in [Pauli::X, Pauli::Y, Pauli::Z] {
            out.push(PauliString::from_sparse(n, &[(q, p)]));
        }
    }
    out
}

#[test]
fn steane_lookup_corrects_every_single_qubit_error() {
    let (code, _) = load("steane-7");
    let dec = Decoder::new(&code).unwrap();
    let errors = single_qubit_errors(7);
    assert_eq!(errors.len(), 21);
    for e in errors {
        let c = dec.decode(&Syndrome::of_error(&code, &e)).unwrap();
        assert!(e.mul_with_phase(&c).0.is_identity(), "{e} corrected by {c}");
    }
}

#[test]
fn trivial_syndrome_gives_identity() {
    for name in ["steane-7", "surface-19", "toric-24"] {
        let (code, _) = load(name);
        let c = decode(&Syndrome::trivial(code.stabilizers.len()), &code).unwrap();
        assert!(c.is_identity());
    }
}

#[test]
fn bad_syndrome_length() {
    let (code, _) = load("surface-19");
    assert!(matches!(decode(&Syndrome(vec![1; 3]), &code), Err(CodesError::InvalidSyndromeLength { expected: 12, got: 3 })));
}

#[test]
fn cluster_has_no_decoder() {
    let (code, _) = load("cluster-12");
    assert!(matches!(Decoder::new(&code), Err(CodesError::NoDecoder(_))));
}

#[test]
fn surface_mwpm_restores_logicals_after_weight_one_errors() {
    let (code, _) = load("surface-19");
    let dec = Decoder::new(&code).unwrap();
    for e in single_qubit_errors(code.n()) {
        let c = dec.decode(&Syndrome::of_error(&code, &e)).unwrap();
        let residual = e.mul_with_phase(&c).0;
        assert!(Syndrome::of_error(&code, &residual).is_trivial());
        let l = &code.logicals[0];
        assert!(residual.commutes_with(&l.x), "{e} -> {c}");
        // an X flip on an ancilla looks exactly like one on its boundary data
        // neighbour, so Z_L is only protected against data-qubit errors
        let q = e.support()[0];
        if !code.graph.ancilla[q] {
            assert!(residual.commutes_with(&l.z), "{e} -> {c}");
        }
    }
}

#[test]
fn toric_mwpm_weight_one_behaviour() {
    let (code, _) = load("toric-24");
    let dec = Decoder::new(&code).unwrap();
    let (x1, x2) = (&code.logicals[0].x, &code.logicals[1].x);
    for e in single_qubit_errors(code.n()) {
        let c = dec.decode(&Syndrome::of_error(&code, &e)).unwrap();
        let residual = e.mul_with_phase(&c).0;
        assert!(Syndrome::of_error(&code, &residual).is_trivial());
        // distance-4 logical is restored
        assert!(residual.commutes_with(x1), "{e} -> {c}");
        // the distance-2 logical is never flipped by the decoder
        assert!(c.commutes_with(x2), "{e} -> {c}");
    }
}

/// Smallest weight of a Z-type error that no X check sees but that flips `logical`.
fn min_undetectable_flip(code: &CodeSpec, logical: &PauliString, max_w: usize) -> Option<usize> {
    let n = code.n();
    let checks: Vec<&PauliString> = code.stabilizers_of(CssType::X).iter().map(|&i| &code.stabilizers[i].op).collect();
    fn rec(start: usize, n: usize, left: usize, chosen: &mut Vec<usize>, f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if left == 0 {
            return f(chosen);
        }
        for q in start..n {
            chosen.push(q);
            if rec(q + 1, n, left - 1, chosen, f) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    for w in 1..=max_w {
        let mut hit = |qs: &[usize]| {
            let e = PauliString::uniform(n, qs, Pauli::Z);
            checks.iter().all(|c| c.commutes_with(&e)) && !logical.commutes_with(&e)
        };
        if rec(0, n, w, &mut Vec::new(), &mut hit) {
            return Some(w);
        }
    }
    None
}

#[test]
fn toric_distances_are_four_and_two() {
    let (code, _) = load("toric-24");
    assert_eq!(code.distances, vec![4, 2]);
    assert_eq!(min_undetectable_flip(&code, &code.logicals[0].x, 4), Some(4));
    assert_eq!(min_undetectable_flip(&code, &code.logicals[1].x, 4), Some(2));
}

#[test]
fn surface_and_steane_distance_three() {
    for name in ["steane-7", "surface-19"] {
        let (code, _) = load(name);
        assert_eq!(min_undetectable_flip(&code, &code.logicals[0].x, 3), Some(3), "{name}");
    }
}

#[test]
fn steane_graph_group_contains_plaquettes_and_logical() {
    // seven graph stabilizers become the six plaquettes plus X_L as a group
    let (code, _) = load("steane-7");
    let g: Vec<PauliString> = graph_stabilizers(&code.graph).iter().map(|s| to_code_frame(&code.graph, s)).collect();
    assert_eq!(g.len(), 7);
    let mut listed: Vec<PauliString> = code.stabilizers.iter().map(|s| s.op.clone()).collect();
    listed.push(code.logicals[0].x.clone());
    assert_eq!(symplectic_rank(&listed), 7);
    let mut both = g.clone();
    both.extend(listed);
    assert_eq!(symplectic_rank(&both), 7);
}

#[test]
fn detection_never_lowers_the_logical() {
    let (code, layout) = load("surface-19");
    let c = compile_code_circuit(&code, &layout, Setting::Xside).unwrap();
    for scale in [0.25, 0.5, 1.0, 2.0] {
        let shots = sample_shots(&c, &NoiseModel::empirical().scaled(scale), 4000, RngSpec::new(7)).unwrap();
        let r = evaluate_code(&code, &SettingShots { xside: Some(&shots), zside: None }).unwrap();
        let l = &r.logicals[0];
        let sigma = (l.raw.stderr.powi(2) + l.detected.stderr.powi(2)).sqrt();
        assert!(l.detected.mean >= l.raw.mean - 2.0 * sigma, "scale {scale}: {:?}", l);
    }
}

#[test]
fn layout_mismatch_is_reported() {
    let (code, mut layout) = load("steane-7");
    layout.layers[0].push((0, 1));
    assert!(matches!(compile_code_circuit(&code, &layout, Setting::Xside), Err(CodesError::LayoutMismatch(_))));
    let (code, mut layout) = load("steane-7");
    layout.atoms.pop();
    assert!(matches!(compile_code_circuit(&code, &layout, Setting::Xside), Err(CodesError::LayoutMismatch(_))));
}
