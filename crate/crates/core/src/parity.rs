//! Context-wise signs of gates, the evenness decision, and single-commutator
//! witnesses for even gates.
//!
//! Enlarging a gate's support by one edge on the left multiplies the parity
//! matrix `P` (rows indexed by left context vertex, entries in GF(2), 1 for
//! odd) by `M mod 2` on the left, and symmetrically on the right: each new
//! boundary edge splits the filling set into blocks, one copy of the old
//! permutation per block. Eventual evenness is therefore decidable exactly:
//! the sequence `M2^k P M2^k` is eventually periodic, and the gate is even
//! iff some iterate vanishes.

use crate::edge_shift::{mat_is_zero, mod2_mul, Context};
use crate::error::{Error, Result};
use crate::gate::Gate;
use crate::perm::commutator_factor;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Even,
    Odd,
    Mixed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParityRow {
    pub left: String,
    pub right: String,
    pub sign: i8,
}

/// Per-context signs of a gate at a fixed support.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParityReport {
    pub support: (i64, i64),
    pub rows: Vec<ParityRow>,
    pub verdict: Verdict,
}

/// Sign of the permutation the gate performs in `ctx` at its current
/// support.
pub fn context_sign(gate: &Gate, ctx: Context) -> Result<i8> {
    let shift = gate.shift();
    if shift.path_count(ctx, gate.width()) == 0 {
        return Err(Error::EmptyContext {
            left: shift.vertex_name(ctx.left).to_string(),
            right: shift.vertex_name(ctx.right).to_string(),
            len: gate.width(),
        });
    }
    Ok(gate.context_perm(ctx).sign())
}

/// Signs of all nonempty contexts at the gate's current support.
pub fn parity_report(gate: &Gate) -> ParityReport {
    let shift = gate.shift();
    let mut rows = Vec::new();
    let mut pos = 0usize;
    let mut neg = 0usize;
    for ctx in shift.contexts_with_fillings(gate.width()) {
        let sign = gate.context_perm(ctx).sign();
        if sign > 0 {
            pos += 1;
        } else {
            neg += 1;
        }
        rows.push(ParityRow {
            left: shift.vertex_name(ctx.left).to_string(),
            right: shift.vertex_name(ctx.right).to_string(),
            sign,
        });
    }
    let verdict = if neg == 0 {
        Verdict::Even
    } else if pos == 0 {
        Verdict::Odd
    } else {
        Verdict::Mixed
    };
    ParityReport { support: gate.support(), rows, verdict }
}

/// Signs at an explicitly requested support (the gate is rebased first).
pub fn parity_report_at(gate: &Gate, support: (i64, i64)) -> Result<ParityReport> {
    Ok(parity_report(&gate.rebase(support)?))
}

/// Parity matrix at the gate's current support: `P[a][b] = 1` iff the
/// permutation in context `(a, b)` is odd.
pub fn parity_matrix(gate: &Gate) -> Vec<Vec<u8>> {
    let shift = gate.shift();
    let nv = shift.vertex_count();
    let mut p = vec![vec![0u8; nv]; nv];
    for ctx in shift.contexts_with_fillings(gate.width()) {
        if gate.context_perm(ctx).sign() < 0 {
            p[ctx.left.0 as usize][ctx.right.0 as usize] = 1;
        }
    }
    p
}

/// Decides whether the gate is (eventually) even and reports the signs at
/// the minimal support enlarged by one window step on each side.
///
/// The decision iterates `P -> M2 P M2` from the minimal support's parity
/// matrix and accepts iff a zero matrix appears before the iteration cycles;
/// evenness at any support propagates to all larger supports, so this is
/// support-independent.
pub fn is_even(gate: &Gate) -> (bool, ParityReport) {
    let min = gate.minimize_support();
    let m2 = gate.shift().matrix_mod2();
    let mut p = parity_matrix(&min);
    let mut seen: Vec<Vec<Vec<u8>>> = Vec::new();
    let even = loop {
        if mat_is_zero(&p) {
            break true;
        }
        if seen.contains(&p) {
            break false;
        }
        seen.push(p.clone());
        p = mod2_mul(&mod2_mul(&m2, &p), &m2);
    };
    let (s, e) = min.support();
    let report = parity_report(&min.rebase((s - 1, e + 1)).expect("enlargement"));
    (even, report)
}

/// Writes an even gate as a commutator of two gates, enlarging the support
/// (to the right) until every nonempty context has at least 5 fillings and
/// factoring per context.
pub fn commutator_witness(gate: &Gate) -> Result<(Gate, Gate)> {
    let shift = gate.shift().clone();
    if shift.is_mixing().is_none() {
        return Err(Error::NotMixing);
    }
    if gate.is_identity() {
        return Ok((gate.clone(), gate.clone()));
    }
    let (even, _) = is_even(gate);
    if !even {
        return Err(Error::NotEven);
    }

    // grow right until every context has >= 5 fillings, then symmetrically
    // until all signs are +1 (one-sided growth does not always reach
    // evenness even for even gates)
    let (mut s, mut e) = gate.support();
    let cap = e - s + 256;
    loop {
        let len = (e - s + 1) as u32;
        let enough = shift
            .contexts_with_fillings(len)
            .iter()
            .all(|&ctx| shift.path_count(ctx, len) >= 5);
        let wide = gate.rebase((s, e))?;
        let all_even = shift
            .contexts_with_fillings(len)
            .iter()
            .all(|&ctx| wide.context_perm(ctx).sign() > 0);
        if enough && all_even {
            let mut rows1 = BTreeMap::new();
            let mut rows2 = BTreeMap::new();
            for ctx in shift.contexts_with_fillings(len) {
                let p = wide.context_perm(ctx);
                if p.is_identity() {
                    continue;
                }
                let (q, r) = commutator_factor(&p)?;
                rows1.insert(ctx, q);
                rows2.insert(ctx, r);
            }
            let g1 = Gate::from_perms(shift.clone(), (s, e), rows1);
            let g2 = Gate::from_perms(shift.clone(), (s, e), rows2);
            let check = g1.inverse().compose(&g2.inverse())?.compose(&g1)?.compose(&g2)?;
            if !check.same_action(&wide)? {
                return Err(Error::VerificationFailed { stage: "commutator-witness" });
            }
            return Ok((g1, g2));
        }
        if !enough {
            e += 1;
        } else {
            s -= 1;
            e += 1;
        }
        if e - s > cap {
            return Err(Error::NotMixing);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gate::Gate;
    use crate::instances::{cg2, chi_gate, full3};
    use crate::perm::Perm;
    use std::sync::Arc;

    #[test]
    fn chi_parity_table_matches_worked_example() {
        let (shift, chi) = chi_gate();
        // at [0,1]: odd in contexts (a, .), even in (b, .)
        let report = parity_report(&chi);
        for row in &report.rows {
            let expect = if row.left == "a" { -1 } else { 1 };
            assert_eq!(row.sign, expect, "context ({}, {})", row.left, row.right);
        }
        assert_eq!(report.verdict, Verdict::Mixed);

        // chi at [0,2]: even everywhere
        let report = parity_report_at(&chi, (0, 2)).unwrap();
        assert!(report.rows.iter().all(|r| r.sign == 1));
        assert_eq!(report.verdict, Verdict::Even);

        // translate(chi, 1) at [0,2]: odd everywhere
        let report = parity_report_at(&chi.translate(1), (0, 2)).unwrap();
        assert!(report.rows.iter().all(|r| r.sign == -1));
        assert_eq!(report.verdict, Verdict::Odd);

        let a = shift.vertex_id("a").unwrap();
        assert_eq!(context_sign(&chi, crate::edge_shift::Context { left: a, right: a }).unwrap(), -1);
    }

    #[test]
    fn chi_is_even() {
        let (_, chi) = chi_gate();
        assert!(is_even(&chi).0);
        assert!(is_even(&chi.translate(1)).0);
    }

    #[test]
    fn identity_is_even() {
        let shift = cg2();
        let id = Gate::identity(shift, (0, 1));
        assert!(is_even(&id).0);
    }

    #[test]
    fn single_transposition_on_full3_is_odd_forever() {
        let shift = full3();
        let v = shift.vertex_id("v").unwrap();
        let ctx = crate::edge_shift::Context { left: v, right: v };
        let mut rows = BTreeMap::new();
        rows.insert(ctx, Perm::from_images(vec![1, 0, 2]).unwrap());
        let g = Gate::from_perms(shift, (0, 0), rows);
        let (even, _) = is_even(&g);
        assert!(!even);
        // sign is -1 at supports of length 1..3
        for e in 0..3i64 {
            let report = parity_report_at(&g, (0, e)).unwrap();
            assert!(report.rows.iter().all(|r| r.sign == -1));
        }
    }

    /// A gate odd in exactly one context at its minimal support on CG2. One
    /// enlargement makes it odd in all four contexts, two make it even in
    /// all: the exact decision must say even.
    #[test]
    fn lone_odd_context_on_cg2_is_eventually_even() {
        let shift = cg2();
        let a = shift.vertex_id("a").unwrap();
        let ctx = crate::edge_shift::Context { left: a, right: a };
        let mut rows = BTreeMap::new();
        rows.insert(ctx, Perm::from_images(vec![1, 0]).unwrap());
        let g = Gate::from_perms(Arc::clone(&shift), (0, 1), rows);
        let one = parity_report_at(&g, (-1, 2)).unwrap();
        assert_eq!(one.verdict, Verdict::Odd);
        let two = parity_report_at(&g, (-2, 3)).unwrap();
        assert_eq!(two.verdict, Verdict::Even);
        assert!(is_even(&g).0);
    }

    #[test]
    fn sign_multiplicativity() {
        let (shift, chi) = chi_gate();
        let other = chi.translate(1).rebase((0, 2)).unwrap();
        let chi_w = chi.rebase((0, 2)).unwrap();
        let prod = chi_w.compose(&other).unwrap();
        for ctx in shift.contexts_with_fillings(3) {
            assert_eq!(
                context_sign(&prod, ctx).unwrap(),
                context_sign(&chi_w, ctx).unwrap() * context_sign(&other, ctx).unwrap()
            );
        }
    }

    #[test]
    fn commutator_witness_chi() {
        let (_, chi) = chi_gate();
        let (g1, g2) = commutator_witness(&chi).unwrap();
        assert_eq!(g1.support(), (0, 3));
        let comm = g1.inverse().compose(&g2.inverse()).unwrap().compose(&g1).unwrap().compose(&g2).unwrap();
        assert!(comm.same_action(&chi).unwrap());
    }

    #[test]
    fn commutator_witness_identity() {
        let shift = cg2();
        let id = Gate::identity(shift, (0, 1));
        let (g1, g2) = commutator_witness(&id).unwrap();
        assert!(g1.is_identity() && g2.is_identity());
    }

    #[test]
    fn commutator_witness_rejects_odd() {
        let shift = full3();
        let v = shift.vertex_id("v").unwrap();
        let ctx = crate::edge_shift::Context { left: v, right: v };
        let mut rows = BTreeMap::new();
        rows.insert(ctx, Perm::from_images(vec![1, 0, 2]).unwrap());
        let g = Gate::from_perms(shift, (0, 0), rows);
        assert!(matches!(commutator_witness(&g), Err(Error::NotEven)));
    }
}
