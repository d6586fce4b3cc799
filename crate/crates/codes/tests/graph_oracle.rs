//! Graph stabilizers against a dense state vector of the CZ network.

use atomarray_codes::{builtin_code, graph_stabilizers, GraphSpec};
use atomarray_model::{Pauli, PauliString};
use num_complex::Complex64 as C;
use proptest::prelude::*;

fn graph_state(g: &GraphSpec) -> Vec<C> {
    let n = g.n();
    let norm = (1.0 / (1u64 << n) as f64).sqrt();
    let idx = g.index_of();
    (0..1usize << n)
        .map(|k| {
            let odd = g.edges.iter().filter(|(a, b)| k >> idx[a] & 1 == 1 && k >> idx[b] & 1 == 1).count() % 2;
            C::new(if odd == 1 { -norm } else { norm }, 0.0)
        })
        .collect()
}

fn expect(amp: &[C], p: &PauliString) -> f64 {
    let mut acc = C::new(0.0, 0.0);
    for (k, &a) in amp.iter().enumerate() {
        let mut j = k;
        let mut ph = C::new(1.0, 0.0);
        for q in 0..p.len() {
            let b = k >> q & 1;
            match p.get(q) {
                Pauli::I => {}
                Pauli::X => j ^= 1 << q,
                Pauli::Y => {
                    j ^= 1 << q;
                    ph *= if b == 0 { C::new(0.0, 1.0) } else { C::new(0.0, -1.0) };
                }
                Pauli::Z => {
                    if b == 1 {
                        ph = -ph;
                    }
                }
            }
        }
        acc += amp[j].conj() * ph * a;
    }
    acc.re * p.sign() as f64
}

fn check(g: &GraphSpec) {
    let psi = graph_state(g);
    for s in graph_stabilizers(g) {
        assert!((expect(&psi, &s) - 1.0).abs() < 1e-9, "{s}");
    }
}

#[test]
fn shipped_small_graphs() {
    for name in ["cluster-12", "steane-7"] {
        check(&builtin_code(name).unwrap().0.graph);
    }
}

proptest! {
    #[test]
    fn random_graphs(n in 1usize..=9, mask in any::<u64>()) {
        let mut edges = Vec::new();
        let mut bit = 0;
        for a in 0..n as u32 {
            for b in a + 1..n as u32 {
                if mask >> (bit % 64) & 1 == 1 {
                    edges.push((a, b));
                }
                bit += 1;
            }
        }
        check(&GraphSpec::from_edges((0..n as u32).collect(), edges));
    }
}
