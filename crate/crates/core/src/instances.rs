//! Canonical shifts, gates and automata used by the verification suites and
//! tests: the full shift on two symbols, the complete graph on two vertices
//! with its middle-vertex swap gate, the golden-mean shift, and a
//! non-mixing two-cycle.

use crate::automaton::CellularAutomaton;
use crate::edge_shift::{
    validate_presentation, Context, EdgeId, EdgeShiftPresentation, RawEdge, RawGraph,
};
use crate::gate::Gate;
use crate::lattice::{make_lattice, GateLattice};
use crate::perm::Perm;
use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

fn graph(vertices: &[&str], edges: &[(&str, &str, &str)]) -> Arc<EdgeShiftPresentation> {
    let raw = RawGraph {
        vertices: vertices.iter().map(|v| v.to_string()).collect(),
        edges: edges
            .iter()
            .map(|(id, src, dst)| RawEdge {
                id: id.to_string(),
                src: src.to_string(),
                dst: dst.to_string(),
            })
            .collect(),
    };
    Arc::new(validate_presentation(&raw, false).expect("canonical instance validates"))
}

/// Full shift on two symbols: one vertex, two loops.
pub fn full2() -> Arc<EdgeShiftPresentation> {
    graph(&["v"], &[("0", "v", "v"), ("1", "v", "v")])
}

/// Full shift on three symbols.
pub fn full3() -> Arc<EdgeShiftPresentation> {
    graph(&["v"], &[("0", "v", "v"), ("1", "v", "v"), ("2", "v", "v")])
}

/// Complete graph on two vertices: one edge per ordered pair.
pub fn cg2() -> Arc<EdgeShiftPresentation> {
    graph(
        &["a", "b"],
        &[("aa", "a", "a"), ("ab", "a", "b"), ("ba", "b", "a"), ("bb", "b", "b")],
    )
}

/// Golden-mean style shift with matrix [[1,1],[1,0]].
pub fn gm() -> Arc<EdgeShiftPresentation> {
    graph(&["1", "2"], &[("a", "1", "1"), ("b", "1", "2"), ("c", "2", "1")])
}

/// Non-mixing two-cycle.
pub fn two_cycle() -> Arc<EdgeShiftPresentation> {
    graph(&["a", "b"], &[("ab", "a", "b"), ("ba", "b", "a")])
}

/// The middle-vertex swap gate on CG2 with strong neighborhood [0, 1]: in
/// contexts with left vertex `a` the middle vertex flips, elsewhere nothing
/// happens. On vertex triples this is (aaa aba)(aab abb)(baa)(bab)(bba)(bbb).
pub fn chi_gate() -> (Arc<EdgeShiftPresentation>, Gate) {
    let shift = cg2();
    let e = |name: &str| shift.edge_id(name).unwrap();
    let mut table = BTreeMap::new();
    let a = shift.vertex_id("a").unwrap();
    let b = shift.vertex_id("b").unwrap();
    table.insert(
        Context { left: a, right: a },
        vec![
            (vec![e("aa"), e("aa")], vec![e("ab"), e("ba")]),
            (vec![e("ab"), e("ba")], vec![e("aa"), e("aa")]),
        ],
    );
    table.insert(
        Context { left: a, right: b },
        vec![
            (vec![e("aa"), e("ab")], vec![e("ab"), e("bb")]),
            (vec![e("ab"), e("bb")], vec![e("aa"), e("ab")]),
        ],
    );
    let gate = Gate::from_table(Arc::clone(&shift), (0, 1), &table).expect("chi validates");
    (shift, gate)
}

/// Single-cell symbol swap on the full 2-shift.
pub fn bitflip_gate() -> (Arc<EdgeShiftPresentation>, Gate) {
    let shift = full2();
    let v = shift.vertex_id("v").unwrap();
    let mut rows = BTreeMap::new();
    rows.insert(
        Context { left: v, right: v },
        Perm::from_images(vec![1, 0]).unwrap(),
    );
    let gate = Gate::from_perms(Arc::clone(&shift), (0, 0), rows);
    (shift, gate)
}

/// The global complement automaton on the full 2-shift.
pub fn complement_ca(shift: &Arc<EdgeShiftPresentation>) -> CellularAutomaton {
    let mut rule = HashMap::new();
    rule.insert(vec![EdgeId(0)], EdgeId(1));
    rule.insert(vec![EdgeId(1)], EdgeId(0));
    CellularAutomaton::from_rule(Arc::clone(shift), (0, 0), &rule).expect("complement validates")
}

/// The vertex-relabeling automorphism a <-> b on CG2 (radius 0).
pub fn relabel_ca() -> (Arc<EdgeShiftPresentation>, CellularAutomaton) {
    let shift = cg2();
    let e = |name: &str| shift.edge_id(name).unwrap();
    let mut rule = HashMap::new();
    rule.insert(vec![e("aa")], e("bb"));
    rule.insert(vec![e("bb")], e("aa"));
    rule.insert(vec![e("ab")], e("ba"));
    rule.insert(vec![e("ba")], e("ab"));
    let ca = CellularAutomaton::from_rule(Arc::clone(&shift), (0, 0), &rule)
        .expect("relabeling validates");
    (shift, ca)
}

/// XOR endomorphism on the full 2-shift (valid, two-to-one).
pub fn xor_ca(shift: &Arc<EdgeShiftPresentation>) -> CellularAutomaton {
    let mut rule = HashMap::new();
    for a in 0..2u32 {
        for b in 0..2u32 {
            rule.insert(vec![EdgeId(a), EdgeId(b)], EdgeId(a ^ b));
        }
    }
    CellularAutomaton::from_rule(Arc::clone(shift), (0, 1), &rule).expect("xor validates")
}

/// An identity gate lattice on the non-mixing two-cycle.
pub fn two_cycle_chi() -> (Arc<EdgeShiftPresentation>, GateLattice) {
    let shift = two_cycle();
    let gate = Gate::identity(Arc::clone(&shift), (0, 1));
    let lat = make_lattice(gate, 2, 0).expect("identity lattice validates");
    (shift, lat)
}
