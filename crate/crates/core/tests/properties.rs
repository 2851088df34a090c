use std::cmp::Ordering;

use pmit_core::channels::{CircuitNoise, ExpansionStrategy, Placement};
use pmit_core::clifford::{clifford_matrix, conjugate_in_place, propagate, propagate_forward};
use pmit_core::linalg::{as_scaled_pauli, embed, max_abs_diff, pauli_matrix, CMat};
use pmit_core::pec::{gamma_triple, FusionMode, GlobalInverseOptions};
use pmit_core::sim::{random_clifford_circuit, rotation_matrix, TwoQubitPattern};
use pmit_core::{Axis, Circuit, DensePauliChannel, Gate, GateKind, Letter, PauliString, SplChannel, SplTerm};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const N: usize = 3;

fn pauli(n: usize) -> impl Strategy<Value = PauliString> {
    (0u64..1 << n, 0u64..1 << n).prop_map(move |(x, z)| PauliString::from_masks(n, x, z))
}

fn non_identity(n: usize) -> impl Strategy<Value = PauliString> {
    pauli(n).prop_filter("non-identity", |p| !p.is_identity())
}

fn spl(n: usize) -> impl Strategy<Value = SplChannel> {
    prop::collection::vec((non_identity(n), 0.6f64..1.0), 1..6)
        .prop_map(move |terms| SplChannel::from_terms(n, terms.into_iter().map(|(p, w)| SplTerm::forward(p, w)).collect()).unwrap())
}

fn gate() -> impl Strategy<Value = Gate> {
    let one = (0usize..GateKind::CLIFFORD_1Q.len(), 0..N).prop_map(|(k, q)| Gate::one(GateKind::CLIFFORD_1Q[k], q));
    let two = (0usize..GateKind::CLIFFORD_2Q.len(), 0..N, 1..N).prop_map(|(k, a, d)| Gate::two(GateKind::CLIFFORD_2Q[k], a, (a + d) % N));
    prop_oneof![one, two]
}

fn circuit() -> impl Strategy<Value = Circuit> {
    prop::collection::vec(gate(), 1..8).prop_map(|gates| {
        let mut c = Circuit::new(N);
        for g in gates {
            c.push_gates(vec![g]);
        }
        c
    })
}

fn unitary(c: &Circuit) -> CMat {
    let mut u = CMat::identity(1 << N, 1 << N);
    for g in c.gates() {
        u = embed(&clifford_matrix(g.kind), &g.qubits, N) * u;
    }
    u
}

fn fidelities(ch: &DensePauliChannel) -> Vec<f64> {
    PauliString::all(ch.n_qubits).map(|q| ch.pauli_fidelity(&q)).collect()
}

fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol * (1.0 + x.abs()))
}

fn lex_oracle(a: &PauliString, b: &PauliString) -> Ordering {
    let key = |p: &PauliString| (0..p.n_qubits()).map(|q| p.letter(q).rank()).collect::<Vec<_>>();
    key(a).cmp(&key(b))
}

proptest! {
    #[test]
    fn multiplication_is_a_group(a in pauli(5), b in pauli(5), c in pauli(5)) {
        let ab = a.multiply(&b).unwrap();
        prop_assert_eq!(ab.multiply(&c).unwrap(), a.multiply(&b.multiply(&c).unwrap()).unwrap());
        prop_assert_eq!(ab.multiply(&b).unwrap(), a.clone());
        prop_assert_eq!(a.commutes(&b).unwrap(), b.commutes(&a).unwrap());
    }

    #[test]
    fn phase_tracking_matches_matrices(a in pauli(2), b in pauli(2)) {
        let (q, k) = a.mul_with_phase(&b);
        let lhs = pauli_matrix(&a) * pauli_matrix(&b);
        let rhs = pauli_matrix(&q).map(|v| v * pmit_core::linalg::i_pow(k));
        prop_assert!(max_abs_diff(&lhs, &rhs) < 1e-12);
    }

    #[test]
    fn lex_order_is_total_and_matches_letter_ranks(a in pauli(4), b in pauli(4), c in pauli(4)) {
        let ab = a.lex_cmp_unchecked(&b);
        prop_assert_eq!(ab, lex_oracle(&a, &b));
        prop_assert_eq!(ab.reverse(), b.lex_cmp_unchecked(&a));
        prop_assert_eq!(ab == Ordering::Equal, a == b);
        if ab != Ordering::Greater && b.lex_cmp_unchecked(&c) != Ordering::Greater {
            prop_assert_ne!(a.lex_cmp_unchecked(&c), Ordering::Greater);
        }
    }

    #[test]
    fn xi_reduction_is_idempotent(p in pauli(6)) {
        let r = p.xi_reduce();
        prop_assert!((0..6).all(|q| matches!(r.letter(q), Letter::I | Letter::X)));
        prop_assert_eq!(r.xi_reduce(), r.clone());
        let xs = (0..6).filter(|&q| matches!(p.letter(q), Letter::X | Letter::Y)).count();
        prop_assert_eq!(r.weight(), xs);
    }

    #[test]
    fn text_round_trip(p in pauli(6)) {
        prop_assert_eq!(p.to_string().parse::<PauliString>().unwrap(), p);
    }

    #[test]
    fn propagation_matches_dense_conjugation(c in circuit(), p in pauli(N)) {
        let u = unitary(&c);
        let (back, _) = propagate(&p, &c, c.depth(), 0).unwrap();
        let (oracle, _) = as_scaled_pauli(&(u.adjoint() * pauli_matrix(&p) * &u), N).unwrap();
        prop_assert_eq!(back.clone(), oracle);
        let (fwd, _) = propagate_forward(&back, &c, 0, c.depth()).unwrap();
        prop_assert_eq!(fwd, p);
    }

    #[test]
    fn conjugation_is_a_bijection(g in gate()) {
        let mut seen = std::collections::HashSet::new();
        for p in PauliString::all(N) {
            let mut q = p.clone();
            conjugate_in_place(&g, &mut q);
            prop_assert_eq!(q.is_identity(), p.is_identity());
            seen.insert(q);
        }
        prop_assert_eq!(seen.len(), 1 << (2 * N));
    }

    #[test]
    fn rotation_sign_flip_commutation(axis in 0usize..3, p in pauli(2), theta in -3.0f64..3.0) {
        let axis = [Axis::X, Axis::Y, Axis::Z][axis];
        let mut c = Circuit::new(2);
        let id = c.add_angle(theta);
        c.push_gates(vec![Gate::rot(axis, 0, id)]);
        let (_, mask) = propagate(&p, &c, 1, 0).unwrap();
        let flipped = if mask.get(id) { -theta } else { theta };
        let r = |t: f64| embed(&rotation_matrix(axis, t), &[0], 2);
        let pm = pauli_matrix(&p);
        prop_assert!(max_abs_diff(&(r(theta) * &pm), &(&pm * r(flipped))) < 1e-12);
    }

    #[test]
    fn spl_inverse_inverts_every_fidelity(ch in spl(N)) {
        let f = fidelities(&ch.to_dense());
        let g = fidelities(&ch.inverse().unwrap().to_dense());
        prop_assert!(f.iter().zip(&g).all(|(a, b)| (a * b - 1.0).abs() < 1e-9));
        let product: f64 = ch.product_terms.iter().map(|t| t.inverse().gamma()).product();
        prop_assert!((ch.inverse().unwrap().gamma().unwrap() - product).abs() < 1e-9 * product);
    }

    #[test]
    fn dense_inversion_matches_fidelities(ch in spl(2)) {
        let d = ch.to_dense();
        let inv = d.invert().unwrap();
        prop_assert!(fidelities(&d).iter().zip(fidelities(&inv)).all(|(a, b)| (a * b - 1.0).abs() < 1e-9));
        prop_assert!((inv.multiply(&d).unwrap().coef(&PauliString::identity(2)) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn merging_preserves_the_channel(ch in spl(N)) {
        let mut doubled = ch.clone();
        doubled.extend(ch.clone());
        let merged = doubled.merge_equal_terms();
        prop_assert!(merged.product_terms.len() <= ch.product_terms.len());
        prop_assert!(close(&fidelities(&merged.to_dense()), &fidelities(&doubled.to_dense()), 1e-9));
    }

    #[test]
    fn passive_reduction_preserves_z_fidelities(ch in spl(N)) {
        let inv = ch.inverse().unwrap();
        let red = inv.passive_reduction();
        let (a, b) = (inv.to_dense(), red.to_dense());
        for q in PauliString::all(N).filter(|q| q.is_z_type()) {
            prop_assert!((a.pauli_fidelity(&q) - b.pauli_fidelity(&q)).abs() < 1e-9);
        }
        prop_assert!(red.gamma().unwrap() <= inv.gamma().unwrap() + 1e-9);
    }

    #[test]
    fn expansion_preserves_channel_and_never_raises_gamma(ch in spl(N), budget in 2usize..64, lex in any::<bool>()) {
        let strategy = if lex { ExpansionStrategy::LexicographicSupport } else { ExpansionStrategy::PlainOrder };
        let inv = ch.inverse().unwrap();
        let e = inv.expand_guided(budget, strategy);
        prop_assert!(e.gamma().unwrap() <= inv.gamma().unwrap() * (1.0 + 1e-9));
        prop_assert!(e.expanded_factors.iter().all(|f| f.len() <= budget));
        prop_assert!(close(&fidelities(&e.to_dense()), &fidelities(&inv.to_dense()), 1e-9));
    }

    #[test]
    fn truncation_reports_dropped_mass(ch in spl(N), eps in 0.0f64..0.2) {
        let d = ch.inverse().unwrap().to_dense();
        let (t, dropped) = d.truncate(eps);
        prop_assert!((t.gamma() + dropped - d.gamma()).abs() < 1e-9);
        prop_assert!(t.terms.values().all(|c| c.abs() >= eps));
    }

    #[test]
    fn fusion_never_raises_gamma(seed in any::<u64>(), layers in 1usize..5, f in 0.9f64..0.999) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_clifford_circuit(N, layers, TwoQubitPattern::RandomPairs, &mut rng).unwrap();
        let ch = pmit_core::channels::build_spl_model(N, &pmit_core::channels::NoiseModelSpec::spl(f)).unwrap();
        let noise = CircuitNoise::layer_level(&c, &ch, Placement::Before).unwrap();
        for mode in [FusionMode::Exact, FusionMode::Product] {
            let opts = GlobalInverseOptions { epsilon: 0.0, mode, ..GlobalInverseOptions::default() };
            let t = gamma_triple(&c, &noise, &opts).unwrap();
            prop_assert!(t.is_ordered(1e-9), "{:?}", t);
            prop_assert!(t.gamma_ppec_xi >= 1.0 - 1e-9);
        }
    }
}
