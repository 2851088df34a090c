//! Circuits used by the experiments.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::clifford::{schrodinger_signed, Axis, Circuit, Gate, GateKind, Layer};
use crate::error::{Error, Result};
use crate::pauli::{Letter, PauliString};

/// Measurement-basis change for the commuting set XXXX, XXYY, XYXY, YXXY.
pub fn build_grouping_circuit() -> Circuit {
    let mut c = Circuit::new(4);
    c.push_gates(vec![Gate::h(1), Gate::h(2), Gate::h(3)]);
    c.push_gates(vec![Gate::swap(1, 2)]);
    c.push_gates(vec![Gate::cx(1, 3)]);
    c.push_gates(vec![Gate::cx(2, 3)]);
    c.push_gates(vec![Gate::cx(3, 0)]);
    c.push_gates(vec![Gate::cx(2, 0)]);
    c.push_gates(vec![Gate::cx(1, 0)]);
    c.push_gates(vec![Gate::cz(0, 3)]);
    c.push_gates(vec![Gate::cz(1, 3)]);
    c.push_gates(vec![Gate::cz(2, 3)]);
    c.push_gates((0..4).map(Gate::h).collect());
    c
}

/// Replace every SWAP by three CX gates, each in its own layer.
pub fn decompose_swaps(c: &Circuit) -> Circuit {
    let mut out = Circuit { n_qubits: c.n_qubits, angles: c.angles.clone(), layers: Vec::new() };
    for layer in &c.layers {
        let (swaps, rest): (Vec<&Gate>, Vec<&Gate>) = layer.gates.iter().partition(|g| g.kind == GateKind::Swap);
        if swaps.is_empty() {
            out.layers.push(layer.clone());
            continue;
        }
        if !rest.is_empty() {
            out.layers.push(Layer::new(rest.into_iter().cloned().collect()));
        }
        for step in 0..3 {
            let gates = swaps
                .iter()
                .map(|g| {
                    let (a, b) = (g.qubits[0], g.qubits[1]);
                    if step == 1 {
                        Gate::cx(b, a)
                    } else {
                        Gate::cx(a, b)
                    }
                })
                .collect();
            out.layers.push(Layer::new(gates));
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Topology {
    Full,
    Linear,
}

/// Placement of lattice vertices on a line of qubits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LatticeLayout {
    /// Vertex `(r, c)` on qubit `r·cols + c`.
    #[default]
    RowMajor,
    /// Odd rows reversed so every row edge is nearest-neighbour.
    Serpentine,
}

impl LatticeLayout {
    pub fn qubit(self, r: usize, c: usize, cols: usize) -> usize {
        match self {
            LatticeLayout::RowMajor => r * cols + c,
            LatticeLayout::Serpentine if r % 2 == 1 => r * cols + cols - 1 - c,
            LatticeLayout::Serpentine => r * cols + c,
        }
    }
}

/// Options for placing a lattice graph state on hardware.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphStateOptions {
    pub topology: Topology,
    #[serde(default)]
    pub layout: LatticeLayout,
    /// Return moved qubits to their home position after each routed gate.
    #[serde(default)]
    pub swap_back: bool,
    /// Later gates considered by the router.
    #[serde(default)]
    pub lookahead: usize,
    /// Pack independent two-qubit gates into shared layers.
    #[serde(default)]
    pub pack: bool,
    /// Emit SWAP gates as three CX gates.
    #[serde(default = "yes")]
    pub decompose_swaps: bool,
}

fn yes() -> bool {
    true
}

impl Default for GraphStateOptions {
    fn default() -> Self {
        GraphStateOptions {
            topology: Topology::Linear,
            layout: LatticeLayout::RowMajor,
            swap_back: false,
            lookahead: 0,
            pack: false,
            decompose_swaps: true,
        }
    }
}

/// Lattice edges in colour order: even row edges, odd row edges, even column edges, odd column edges.
pub fn lattice_edges(rows: usize, cols: usize, layout: LatticeLayout) -> Vec<Vec<(usize, usize)>> {
    let v = |r: usize, c: usize| layout.qubit(r, c, cols);
    let mut colours = vec![Vec::new(); 4];
    for parity in 0..2 {
        for r in 0..rows {
            for c in (parity..cols.saturating_sub(1)).step_by(2) {
                colours[parity].push((v(r, c), v(r, c + 1)));
            }
        }
        for r in (parity..rows.saturating_sub(1)).step_by(2) {
            for c in 0..cols {
                colours[2 + parity].push((v(r, c), v(r + 1, c)));
            }
        }
    }
    colours
}

/// `|G⟩ = Π CZ |+⟩` for a rows×cols lattice, routed onto the requested topology.
///
/// Vertices are placed by `opts.layout`; edges follow the four-colour order of [`lattice_edges`].
pub fn build_graph_state_circuit(rows: usize, cols: usize, opts: GraphStateOptions) -> Result<Circuit> {
    let n = rows * cols;
    if n == 0 {
        return Err(Error::InvalidParameter("empty lattice".into()));
    }
    let mut c = Circuit::new(n);
    c.push_gates((0..n).map(Gate::h).collect());
    let colours = lattice_edges(rows, cols, opts.layout);
    match opts.topology {
        Topology::Full => {
            for edges in colours {
                if !edges.is_empty() {
                    c.push_gates(edges.iter().map(|&(a, b)| Gate::cz(a, b)).collect());
                }
            }
            Ok(c)
        }
        Topology::Linear => {
            for (a, b) in colours.into_iter().flatten() {
                c.push_gates(vec![Gate::cz(a, b)]);
            }
            route_linear(&c, &opts.route())
        }
    }
}

/// Options for [`route_linear`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RouteOptions {
    pub swap_back: bool,
    /// Number of later two-qubit gates considered when choosing where operands meet (0 = always move the first).
    pub lookahead: usize,
    pub pack: bool,
    pub decompose_swaps: bool,
}

impl GraphStateOptions {
    fn route(&self) -> RouteOptions {
        RouteOptions { swap_back: self.swap_back, lookahead: self.lookahead, pack: self.pack, decompose_swaps: self.decompose_swaps }
    }
}

/// Map a circuit onto a line of qubits `0 – 1 – … – n−1`.
///
/// Logical qubit `q` starts on physical qubit `q`. Before each two-qubit gate on
/// distant qubits, the first operand is walked next to the second with SWAPs
/// (optionally walked back afterwards). Single-qubit gates follow their qubit.
/// Without packing every two-qubit gate gets its own layer; single-qubit gates
/// stay grouped as in the input.
pub fn route_linear(c: &Circuit, opts: &RouteOptions) -> Result<Circuit> {
    c.validate()?;
    let n = c.n_qubits;
    let mut pos: Vec<usize> = (0..n).collect();
    let mut at: Vec<usize> = (0..n).collect();
    let mut blocks: Vec<Vec<Gate>> = Vec::new();
    let mut pending: Vec<Gate> = Vec::new();
    let remap = |g: &Gate, pos: &[usize]| {
        let mut h = g.clone();
        for q in h.qubits.iter_mut() {
            *q = pos[*q];
        }
        h
    };
    let upcoming: Vec<(usize, usize)> = c.gates().filter(|g| g.arity() == 2).map(|g| (g.qubits[0], g.qubits[1])).collect();
    let mut gate_index = 0usize;
    for layer in &c.layers {
        for g in &layer.gates {
            if g.arity() == 1 {
                pending.push(remap(g, &pos));
                continue;
            }
            if !pending.is_empty() {
                blocks.push(std::mem::take(&mut pending));
            }
            let (u, v) = (g.qubits[0], g.qubits[1]);
            let mut moves = Vec::new();
            if pos[u].abs_diff(pos[v]) > 1 {
                let lead = meeting_split(&pos, &at, u, v, &upcoming[gate_index + 1..], opts.lookahead);
                walk(&mut pos, &mut at, u, v, lead, &mut moves);
                blocks.extend(moves.iter().map(|&s| vec![Gate::swap(s, s + 1)]));
            }
            blocks.push(vec![remap(g, &pos)]);
            if opts.swap_back {
                for s in moves.into_iter().rev() {
                    let (a, b) = (at[s], at[s + 1]);
                    at.swap(s, s + 1);
                    pos[a] = s + 1;
                    pos[b] = s;
                    blocks.push(vec![Gate::swap(s, s + 1)]);
                }
            }
            gate_index += 1;
        }
        if !pending.is_empty() {
            blocks.push(std::mem::take(&mut pending));
        }
    }
    let mut out = Circuit { n_qubits: n, angles: c.angles.clone(), layers: Vec::new() };
    if opts.pack {
        let flat: Vec<Gate> = blocks.into_iter().flatten().collect();
        out.layers = schedule(n, &flat, true);
    } else {
        for b in blocks {
            if b.iter().all(|g| g.arity() == 1) {
                out.layers.extend(schedule(n, &b, true));
            } else {
                out.layers.push(Layer::new(b));
            }
        }
    }
    Ok(if opts.decompose_swaps { decompose_swaps(&out) } else { out })
}

/// Walk `u` next to `v` (first `lead` steps move `u`, the rest move `v`) on a copy of the layout.
fn walk(pos: &mut [usize], at: &mut [usize], u: usize, v: usize, lead: usize, steps: &mut Vec<usize>) {
    let mut step_of = |moving: usize, target: usize, pos: &mut [usize], at: &mut [usize]| {
        let p = pos[moving];
        let s = if p < pos[target] { p } else { p - 1 };
        let (a, b) = (at[s], at[s + 1]);
        at.swap(s, s + 1);
        pos[a] = s + 1;
        pos[b] = s;
        steps.push(s);
    };
    for _ in 0..lead {
        if pos[u].abs_diff(pos[v]) > 1 {
            step_of(u, v, pos, at);
        }
    }
    while pos[u].abs_diff(pos[v]) > 1 {
        step_of(v, u, pos, at);
    }
}

/// How many SWAPs the first operand takes so that the next `lookahead` gates
/// end up as close as possible; ties favour moving the first operand.
fn meeting_split(pos: &[usize], at: &[usize], u: usize, v: usize, next: &[(usize, usize)], lookahead: usize) -> usize {
    let d = pos[u].abs_diff(pos[v]);
    if lookahead == 0 {
        return d - 1;
    }
    let mut best = (usize::MAX, d - 1);
    for lead in (0..d).rev() {
        let (mut p, mut a) = (pos.to_vec(), at.to_vec());
        walk(&mut p, &mut a, u, v, lead, &mut Vec::new());
        let cost: usize = next.iter().take(lookahead).map(|&(x, y)| p[x].abs_diff(p[y]).saturating_sub(1)).sum();
        if cost < best.0 {
            best = (cost, lead);
        }
    }
    best.1
}

/// One gate per layer, or as-soon-as-possible packing.
fn schedule(n: usize, gates: &[Gate], pack: bool) -> Vec<Layer> {
    if !pack {
        return gates.iter().map(|g| Layer::new(vec![g.clone()])).collect();
    }
    let mut ready = vec![0usize; n];
    let mut layers: Vec<Vec<Gate>> = Vec::new();
    for g in gates {
        let t = g.qubits.iter().map(|&q| ready[q]).max().unwrap_or(0);
        if layers.len() <= t {
            layers.resize(t + 1, Vec::new());
        }
        layers[t].push(g.clone());
        for &q in &g.qubits {
            ready[q] = t + 1;
        }
    }
    layers.into_iter().map(Layer::new).collect()
}

/// First-order Trotter circuit for H = −J Σ Z Z + h Σ X on a chain.
pub fn build_ising_trotter(n_qubits: usize, h: f64, j: f64, dt: f64, steps: usize) -> Result<Circuit> {
    if steps == 0 {
        return Err(Error::InvalidParameter("steps must be at least 1".into()));
    }
    if n_qubits == 0 {
        return Err(Error::InvalidParameter("n_qubits must be positive".into()));
    }
    let mut c = Circuit::new(n_qubits);
    for _ in 0..steps {
        let rx: Vec<Gate> = (0..n_qubits)
            .map(|q| {
                let id = c.add_angle(2.0 * h * dt);
                Gate::rot(Axis::X, q, id)
            })
            .collect();
        c.push_gates(rx);
        for parity in 0..2 {
            let bonds: Vec<(usize, usize)> = (parity..n_qubits.saturating_sub(1)).step_by(2).map(|a| (a, a + 1)).collect();
            if bonds.is_empty() {
                continue;
            }
            c.push_gates(bonds.iter().map(|&(a, b)| Gate::cx(a, b)).collect());
            let rz: Vec<Gate> = bonds
                .iter()
                .map(|&(_, b)| {
                    let id = c.add_angle(-2.0 * j * dt);
                    Gate::rot(Axis::Z, b, id)
                })
                .collect();
            c.push_gates(rz);
            c.push_gates(bonds.iter().map(|&(a, b)| Gate::cx(a, b)).collect());
        }
    }
    Ok(c)
}

/// How two-qubit gates are drawn in random Clifford circuits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TwoQubitPattern {
    /// One CZ on a uniformly random pair per noisy layer.
    SingleGate,
    /// A random set of disjoint pairs (any distance) covering all qubits.
    RandomPairs,
    /// Disjoint nearest-neighbour pairs on a line with a random offset.
    NearestNeighbour,
}

const SINGLE_QUBIT_SET: [Option<GateKind>; 6] =
    [None, Some(GateKind::H), Some(GateKind::Sz), Some(GateKind::X), Some(GateKind::Y), Some(GateKind::Z)];

fn random_single_layer<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Layer {
    let gates = (0..n).filter_map(|q| SINGLE_QUBIT_SET[rng.random_range(0..SINGLE_QUBIT_SET.len())].map(|k| Gate::one(k, q))).collect();
    Layer::new(gates)
}

/// Random Clifford circuit over {I, H, S, X, Y, Z, CZ}: `n_noisy_layers` repetitions of
/// (random single-qubit layer, two-qubit layer), followed by a final single-qubit layer.
pub fn random_clifford_circuit<R: Rng + ?Sized>(
    n_qubits: usize,
    n_noisy_layers: usize,
    pattern: TwoQubitPattern,
    rng: &mut R,
) -> Result<Circuit> {
    if n_qubits < 2 {
        return Err(Error::InvalidParameter("random circuits need at least 2 qubits".into()));
    }
    let mut c = Circuit::new(n_qubits);
    for _ in 0..n_noisy_layers {
        c.push(random_single_layer(n_qubits, rng));
        let gates = match pattern {
            TwoQubitPattern::SingleGate => {
                let a = rng.random_range(0..n_qubits);
                let mut b = rng.random_range(0..n_qubits - 1);
                if b >= a {
                    b += 1;
                }
                vec![Gate::cz(a.min(b), a.max(b))]
            }
            TwoQubitPattern::RandomPairs => {
                let mut qs: Vec<usize> = (0..n_qubits).collect();
                qs.shuffle(rng);
                qs.chunks_exact(2).map(|p| Gate::cz(p[0].min(p[1]), p[0].max(p[1]))).collect()
            }
            TwoQubitPattern::NearestNeighbour => {
                let offset = rng.random_range(0..2);
                (offset..n_qubits - 1).step_by(2).map(|a| Gate::cz(a, a + 1)).collect()
            }
        };
        if gates.is_empty() {
            continue;
        }
        c.push(Layer::new(gates));
    }
    c.push(random_single_layer(n_qubits, rng));
    Ok(c)
}

/// Signed stabilizer `U Z_q U†` of the circuit's output state.
pub fn output_stabilizer(c: &Circuit, q: usize) -> Result<(PauliString, i8)> {
    if !c.is_clifford() {
        return Err(Error::NotClifford("stabilizer tracking needs a Clifford circuit".into()));
    }
    let mut p = PauliString::single(c.n_qubits, q, Letter::Z);
    let mut sign = 1i8;
    for g in c.gates() {
        sign *= schrodinger_signed(g, &mut p);
    }
    Ok((p, sign))
}

/// Append a noiseless layer rotating `p` onto a Z-type string; returns the new signed observable.
pub fn append_basis_change(c: &mut Circuit, p: &PauliString) -> (PauliString, i8) {
    let mut gates = Vec::new();
    for q in 0..c.n_qubits {
        match p.letter(q) {
            Letter::X => gates.push(Gate::h(q)),
            Letter::Y => gates.push(Gate::one(GateKind::Sx, q)),
            _ => {}
        }
    }
    let mut out = p.clone();
    let mut sign = 1i8;
    for g in &gates {
        sign *= schrodinger_signed(g, &mut out);
    }
    if !gates.is_empty() {
        c.push(Layer::with_noise(gates, false));
    }
    (out, sign)
}
