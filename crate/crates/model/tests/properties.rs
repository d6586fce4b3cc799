use atomarray_model::*;
use proptest::prelude::*;

fn arb_pauli() -> impl Strategy<Value = Pauli> {
    prop_oneof![Just(Pauli::I), Just(Pauli::X), Just(Pauli::Y), Just(Pauli::Z)]
}

fn arb_string(n: usize) -> impl Strategy<Value = PauliString> {
    (prop::collection::vec(arb_pauli(), n), any::<bool>())
        .prop_map(|(ops, neg)| PauliString::from_ops(ops).with_sign(if neg { -1 } else { 1 }))
}

fn arb_layer() -> impl Strategy<Value = Layer> {
    prop_oneof![
        (0.0f64..6.3).prop_map(|a| Layer::GlobalRotation { axis: Axis::Y, angle: a }),
        prop::collection::vec((0u32..8, 0u32..8), 0..4).prop_map(|pairs| Layer::ParallelCz { pairs }),
        Just(Layer::EchoPulse),
        (prop::collection::vec((0u32..8, -5.0f64..5.0, -5.0f64..5.0), 0..3), 1.0f64..300.0).prop_map(|(m, t)| {
            Layer::Move {
                moves: m.into_iter().map(|(id, dx, dy)| Displacement { id, dx, dy }).collect(),
                duration_us: t,
            }
        }),
    ]
}

proptest! {
    #[test]
    fn circuit_json_round_trip(layers in prop::collection::vec(arb_layer(), 0..6), xs in prop::collection::vec(-50.0f64..50.0, 4)) {
        let atoms = vec![
            AtomRecord::fixed(0, xs[0], 0.0),
            AtomRecord::fixed(1, xs[1], 0.0).with_sublattice(Sublattice::B),
            AtomRecord::mobile(2, 0, 0, xs[2], 3.0),
            AtomRecord::mobile(3, 0, 1, xs[3], 3.0),
        ];
        let mut layers = layers;
        layers.push(Layer::MeasureAll { basis: Axis::Z });
        let c = Circuit { name: "p".into(), code: Some("x".into()), atoms, layers };
        let text = serde_json::to_string(&c).unwrap();
        let back: Circuit = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, c);
    }

    #[test]
    fn expectation_permutation_invariant(bits in prop::collection::vec(prop::collection::vec(0u8..2, 3), 1..40), seed in any::<u64>()) {
        let shots: Vec<_> = bits.into_iter().map(ShotRecord::without_loss).collect();
        let mut shuffled = shots.clone();
        // deterministic permutation from the seed
        let n = shuffled.len();
        let mut s = seed;
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            shuffled.swap(i, (s >> 33) as usize % (i + 1));
        }
        let op: PauliString = "+ZIZ".parse().unwrap();
        let basis = ReadoutBasis::uniform(3, Axis::Z);
        prop_assert_eq!(pauli_expectation(&shots, &op, &basis).unwrap(), pauli_expectation(&shuffled, &op, &basis).unwrap());
    }

    #[test]
    fn lost_reads_one(bits in prop::collection::vec(0u8..2, 6), lost in prop::collection::vec(any::<bool>(), 6)) {
        let s = ShotRecord::new(bits, lost.clone()).unwrap();
        for (b, l) in s.bits().iter().zip(&lost) {
            if *l { prop_assert_eq!(*b, 1); }
        }
    }

    #[test]
    fn pauli_product_consistent(a in arb_string(5), b in arb_string(5)) {
        let (ab, odd_ab) = a.mul_with_phase(&b);
        let (ba, odd_ba) = b.mul_with_phase(&a);
        prop_assert_eq!(ab.ops(), ba.ops());
        prop_assert_eq!(odd_ab, odd_ba);
        // commuting products agree in sign, anticommuting ones differ
        if a.commutes_with(&b) {
            prop_assert_eq!(odd_ab, 0);
            prop_assert_eq!(ab.sign(), ba.sign());
        } else {
            prop_assert_eq!(odd_ab, 1);
            prop_assert_ne!(ab.sign(), ba.sign());
        }
        let text = a.to_string();
        prop_assert_eq!(text.parse::<PauliString>().unwrap(), a);
    }
}
