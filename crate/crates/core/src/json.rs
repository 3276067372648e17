//! Stable JSON schemas for graphs, gates, automata, lattices, words,
//! certificates and parity reports.
//!
//! All emission goes through `serde_json::Value`, whose object maps are
//! ordered, so serialized output has sorted keys and identical inputs
//! produce byte-identical documents.

use crate::automaton::CellularAutomaton;
use crate::edge_shift::{
    validate_presentation, Context, EdgeId, EdgeShiftPresentation, RawEdge, RawGraph,
};
use crate::error::{Error, Result};
use crate::gate::Gate;
use crate::lattice::{GateLattice, LatticeWord, TraceCertificate, TraceTerm};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphDoc {
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EdgeDoc {
    pub id: String,
    pub src: String,
    pub dst: String,
}

pub fn graph_from_doc(doc: &GraphDoc, trim: bool) -> Result<Arc<EdgeShiftPresentation>> {
    let raw = RawGraph {
        vertices: doc.vertices.clone(),
        edges: doc
            .edges
            .iter()
            .map(|e| RawEdge { id: e.id.clone(), src: e.src.clone(), dst: e.dst.clone() })
            .collect(),
    };
    Ok(Arc::new(validate_presentation(&raw, trim)?))
}

pub fn graph_to_doc(shift: &EdgeShiftPresentation) -> GraphDoc {
    GraphDoc {
        vertices: (0..shift.vertex_count())
            .map(|v| shift.vertex_name(crate::edge_shift::VertexId(v as u32)).to_string())
            .collect(),
        edges: (0..shift.edge_count())
            .map(|e| {
                let e = EdgeId(e as u32);
                EdgeDoc {
                    id: shift.edge_name(e).to_string(),
                    src: shift.vertex_name(shift.edge_source(e)).to_string(),
                    dst: shift.vertex_name(shift.edge_target(e)).to_string(),
                }
            })
            .collect(),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GateDoc {
    pub support: (i64, i64),
    pub contexts: Vec<GateContextDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GateContextDoc {
    pub left: String,
    pub right: String,
    /// moved (from, to) path pairs, canonical order, fixed paths omitted
    pub perm: Vec<(Vec<String>, Vec<String>)>,
}

pub fn gate_from_doc(shift: &Arc<EdgeShiftPresentation>, doc: &GateDoc) -> Result<Gate> {
    let mut table = BTreeMap::new();
    for c in &doc.contexts {
        let ctx = Context { left: shift.vertex_id(&c.left)?, right: shift.vertex_id(&c.right)? };
        let pairs = c
            .perm
            .iter()
            .map(|(from, to)| {
                let f: Vec<EdgeId> =
                    from.iter().map(|n| shift.edge_id(n)).collect::<Result<_>>()?;
                let t: Vec<EdgeId> = to.iter().map(|n| shift.edge_id(n)).collect::<Result<_>>()?;
                Ok((f, t))
            })
            .collect::<Result<Vec<_>>>()?;
        table.insert(ctx, pairs);
    }
    Gate::from_table(Arc::clone(shift), doc.support, &table)
}

pub fn gate_to_doc(gate: &Gate) -> GateDoc {
    let shift = gate.shift();
    let mut contexts = Vec::new();
    for (&ctx, perm) in gate.table() {
        let fillings = shift.enumerate_paths(ctx, gate.width());
        let mut pairs = Vec::new();
        for (i, f) in fillings.iter().enumerate() {
            let img = perm.apply(i as u32) as usize;
            if img != i {
                pairs.push((shift.edge_names(f), shift.edge_names(&fillings[img])));
            }
        }
        contexts.push(GateContextDoc {
            left: shift.vertex_name(ctx.left).to_string(),
            right: shift.vertex_name(ctx.right).to_string(),
            perm: pairs,
        });
    }
    GateDoc { support: gate.support(), contexts }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CaDoc {
    pub power: u32,
    /// neighborhood in block units
    pub neighborhood: (i64, i64),
    pub rule: Vec<CaRuleEntryDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CaRuleEntryDoc {
    /// flattened input: (l + r + 1) * power edge ids
    #[serde(rename = "in")]
    pub input: Vec<String>,
    /// output block: the edge id for power 1, otherwise the JSON-encoded
    /// list of the block's edge ids
    pub out: String,
}

fn block_out_label(shift: &EdgeShiftPresentation, block: &[EdgeId], power: u32) -> String {
    if power == 1 {
        shift.edge_name(block[0]).to_string()
    } else {
        serde_json::to_string(&shift.edge_names(block)).unwrap()
    }
}

fn parse_block_out(
    shift: &EdgeShiftPresentation,
    label: &str,
    power: u32,
) -> Result<Vec<EdgeId>> {
    if power == 1 {
        return Ok(vec![shift.edge_id(label)?]);
    }
    let names: Vec<String> =
        serde_json::from_str(label).map_err(|e| Error::Parse(format!("block edge label: {e}")))?;
    if names.len() != power as usize {
        return Err(Error::Parse(format!(
            "block edge label has {} edges, power is {power}",
            names.len()
        )));
    }
    names.iter().map(|n| shift.edge_id(n)).collect()
}

pub fn ca_from_doc(shift: &Arc<EdgeShiftPresentation>, doc: &CaDoc) -> Result<CellularAutomaton> {
    let n = doc.power;
    if n == 0 {
        return Err(Error::Parse("power must be positive".into()));
    }
    let (nb_lo, nb_hi) = doc.neighborhood;
    if nb_lo > 0 || nb_hi < 0 || nb_lo > nb_hi {
        return Err(Error::Parse("neighborhood must be an interval [-l, r]".into()));
    }
    let blocks = (nb_hi - nb_lo + 1) as usize;
    let in_len = blocks * n as usize;
    let mut rule: HashMap<Vec<EdgeId>, Vec<EdgeId>> = HashMap::new();
    for entry in &doc.rule {
        if entry.input.len() != in_len {
            return Err(Error::Parse(format!(
                "rule input has {} edges, expected {in_len}",
                entry.input.len()
            )));
        }
        let key: Vec<EdgeId> =
            entry.input.iter().map(|e| shift.edge_id(e)).collect::<Result<_>>()?;
        let out = parse_block_out(shift, &entry.out, n)?;
        rule.insert(key, out);
    }
    // output coordinate i (phase p in [0, n)) reads the flattened block
    // input spanning [-l*n, (r+1)*n) around its block
    let lo = nb_lo * n as i64 - (n as i64 - 1);
    let hi = (nb_hi + 1) * n as i64 - 1;
    CellularAutomaton::from_fn(Arc::clone(shift), n, (lo, hi), |phase, path| {
        let base = phase as i64 + lo;
        let start = (nb_lo * n as i64 - base) as usize;
        let key = &path[start..start + in_len];
        match rule.get(key) {
            Some(out) => Ok(out[phase as usize]),
            None => Err(Error::PartialRule(shift.edge_names(key))),
        }
    })
}

pub fn ca_to_doc(ca: &CellularAutomaton) -> Result<CaDoc> {
    let ca = ca.minimize();
    let shift = Arc::clone(ca.shift());
    let n = ca.power() as i64;
    let (lo, hi) = ca.window();
    let l = if lo < 0 { (-lo + n - 1) / n } else { 0 };
    let r = if hi > 0 { (hi + n - 1) / n } else { 0 };
    let in_len = ((l + r + 1) * n) as usize;
    let idx = crate::automaton::PathIndexer::new(Arc::clone(&shift), in_len as u32);
    if idx.total() > 1 << 16 {
        return Err(Error::BudgetExceeded { stage: "ca-doc" });
    }
    let mut rule = Vec::with_capacity(idx.total() as usize);
    for rank in 0..idx.total() {
        let input = idx.unrank(rank);
        let pat = crate::edge_shift::PathPattern { base: -l * n, edges: input.clone() };
        let out = ca.apply_to_pattern(&pat, (0, n - 1))?;
        rule.push(CaRuleEntryDoc {
            input: shift.edge_names(&input),
            out: block_out_label(&shift, &out.edges, ca.power()),
        });
    }
    Ok(CaDoc { power: ca.power(), neighborhood: (-l, r), rule })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LatticeDoc {
    pub gate: GateDoc,
    pub period: u32,
    pub offset: u32,
}

pub fn lattice_from_doc(shift: &Arc<EdgeShiftPresentation>, doc: &LatticeDoc) -> Result<GateLattice> {
    let gate = gate_from_doc(shift, &doc.gate)?;
    crate::lattice::make_lattice(gate, doc.period, doc.offset)
}

pub fn lattice_to_doc(lat: &GateLattice) -> LatticeDoc {
    LatticeDoc { gate: gate_to_doc(lat.gate()), period: lat.period(), offset: lat.offset() }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WordDoc {
    pub factors: Vec<WordFactorDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WordFactorDoc {
    pub lattice: LatticeDoc,
    pub exp: i8,
}

pub fn word_from_doc(shift: &Arc<EdgeShiftPresentation>, doc: &WordDoc) -> Result<LatticeWord> {
    let factors = doc
        .factors
        .iter()
        .map(|f| {
            if f.exp != 1 && f.exp != -1 {
                return Err(Error::Parse("factor exponent must be +1 or -1".into()));
            }
            Ok((lattice_from_doc(shift, &f.lattice)?, f.exp))
        })
        .collect::<Result<Vec<_>>>()?;
    LatticeWord::new(Arc::clone(shift), factors)
}

pub fn word_to_doc(word: &LatticeWord) -> WordDoc {
    WordDoc {
        factors: word
            .factors()
            .iter()
            .map(|(lat, exp)| WordFactorDoc { lattice: lattice_to_doc(lat), exp: *exp })
            .collect(),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CertificateDoc {
    pub terms: Vec<CertificateTermDoc>,
    pub working_period: u32,
    pub verified: bool,
    pub lhs_hash: String,
    pub rhs_hash: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CertificateTermDoc {
    pub conjugator: WordDoc,
    pub exp: i8,
}

pub fn certificate_to_doc(cert: &TraceCertificate) -> CertificateDoc {
    CertificateDoc {
        terms: cert
            .terms
            .iter()
            .map(|TraceTerm { conjugator, exp }| CertificateTermDoc {
                conjugator: word_to_doc(conjugator),
                exp: *exp,
            })
            .collect(),
        working_period: cert.working_period,
        verified: cert.verified,
        lhs_hash: cert.lhs_fingerprint.clone(),
        rhs_hash: cert.rhs_fingerprint.clone(),
    }
}

/// Serializes any serializable value with sorted keys (via `Value`).
pub fn to_canonical_json<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("serializable");
    serde_json::to_string_pretty(&v).expect("serializable")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{chi_gate, full2};

    #[test]
    fn graph_roundtrip() {
        let shift = full2();
        let doc = graph_to_doc(&shift);
        let back = graph_from_doc(&doc, false).unwrap();
        assert_eq!(*shift, *back);
    }

    #[test]
    fn gate_roundtrip() {
        let (shift, chi) = chi_gate();
        let doc = gate_to_doc(&chi);
        let back = gate_from_doc(&shift, &doc).unwrap();
        assert!(back.same_action(&chi).unwrap());
    }

    #[test]
    fn sigma_doc_roundtrip() {
        let shift = full2();
        let sigma = CellularAutomaton::shift_map(Arc::clone(&shift));
        let doc = ca_to_doc(&sigma).unwrap();
        assert_eq!(doc.power, 1);
        let back = ca_from_doc(&shift, &doc).unwrap();
        assert!(back.equal(&sigma).unwrap());
    }

    #[test]
    fn power_two_ca_doc_roundtrip() {
        let (shift, flip) = crate::instances::bitflip_gate();
        let lat = crate::lattice::make_lattice(flip, 2, 0).unwrap();
        let ca = crate::automaton::gate_lattice_to_ca(&lat).unwrap();
        let doc = ca_to_doc(&ca).unwrap();
        assert_eq!(doc.power, 2);
        let back = ca_from_doc(&shift, &doc).unwrap();
        assert!(back.equal(&ca).unwrap());
    }

    #[test]
    fn canonical_json_sorts_keys() {
        #[derive(Serialize)]
        struct Demo {
            zebra: u32,
            apple: u32,
        }
        let s = to_canonical_json(&Demo { zebra: 1, apple: 2 });
        assert!(s.find("apple").unwrap() < s.find("zebra").unwrap());
    }
}
