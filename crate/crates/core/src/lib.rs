//! Workbench for gates and gate lattices on one-dimensional subshifts of
//! finite type, presented as edge shifts of finite directed multigraphs.
//!
//! The library covers:
//!
//! * [`edge_shift`] — presentations, path/context/filling combinatorics,
//!   mixing and even-fillings predicates, higher-block recodings;
//! * [`gate`] — context-indexed permutations of fixed-length paths with
//!   rebasing, algebra, application and conjugation by automorphisms;
//! * [`parity`] — context-wise signs, the eventually-even test, single
//!   commutator factorization of even gates;
//! * [`perm`] — finite permutations, Ore-style commutator witnesses and
//!   alternating-closure certificates;
//! * [`automaton`] — shift-commuting endomorphisms given by local rules,
//!   compilation of gate lattices, simple graph symmetries;
//! * [`lattice`] — gate lattices `chi^{nZ+j}`, coset refinement, evenization,
//!   conjugation under stabilized automorphisms and the normal-generation
//!   trace;
//! * [`suites`] — named verification suites shared by the CLI and the
//!   acceptance tests;
//! * [`json`] — the stable JSON schemas for all of the above.

pub mod automaton;
pub mod edge_shift;
mod error;
pub mod gate;
pub mod instances;
pub mod json;
pub mod lattice;
pub mod parity;
pub mod perm;
pub mod suites;

pub use automaton::{gate_lattice_to_ca, simple_symmetry_form, CellularAutomaton, SimpleSymmetry};
pub use edge_shift::{
    validate_presentation, Context, EdgeId, EdgeShiftPresentation, PathPattern,
    PeriodicConfiguration, RawEdge, RawGraph, VertexId,
};
pub use error::{CommutationWitness, Error, Result};
pub use gate::Gate;
pub use lattice::{
    apply_lattice, conjugate_lattice, evenize, kin_commutator_check, make_lattice,
    normal_generation_trace, refine, separating_gate, word_equal, word_eval, EvenizeOutcome,
    GateLattice, KinReport, LatticeWord, TraceCertificate,
};
pub use parity::{commutator_witness, context_sign, is_even, parity_report_at, ParityReport};
pub use perm::Perm;

/// Default search budget (nodes explored, table entries built) used by the
/// bounded searches in [`lattice`] and [`perm`]. Overridable per call and via
/// the CLI `--budget` flag or the `GATELAT_BUDGET` environment variable.
pub const DEFAULT_BUDGET: u64 = 1_000_000;

/// Default radius bound for inverse-rule searches when no explicit bound is
/// given.
pub const DEFAULT_INVERSE_RADIUS: i64 = 8;
