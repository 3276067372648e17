//! Named verification suites for the constructive lemmas: each runs a
//! property set on canonical and seeded-random instances and reports
//! pass/fail per property with a counterexample description on failure.
//!
//! The same functions back the CLI `verify` command and the acceptance
//! tests, so a suite run is deterministic end to end.

use crate::automaton::{compile_commuting_product, gate_lattice_to_ca, CellularAutomaton};
use crate::edge_shift::{validate_presentation, Context, EdgeShiftPresentation, RawEdge, RawGraph, VertexId};
use crate::error::{Error, Result};
use crate::gate::Gate;
use crate::instances;
use crate::lattice::{
    evenize, kin_commutator_check, make_lattice, normal_generation_trace, refine, word_eval,
    GateLattice, LatticeWord,
};
use crate::parity::is_even;
use crate::perm::{alt_normal_closure, commutator_factor, Perm};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::BTreeMap;
use std::sync::Arc;

pub const SUITE_NAMES: &[&str] =
    &["decomposition", "zperfect", "kin", "ore", "an-closure", "generation"];

#[derive(Debug, Clone, Serialize)]
pub struct PropertyResult {
    pub name: String,
    pub pass: bool,
    pub details: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub properties: Vec<PropertyResult>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.properties.iter().all(|p| p.pass)
    }
}

pub fn run_suite(name: &str, budget: u64) -> Result<SuiteReport> {
    let properties = match name {
        "decomposition" => decomposition_suite()?,
        "zperfect" => zperfect_suite()?,
        "kin" => kin_suite()?,
        "ore" => ore_suite()?,
        "an-closure" => an_closure_suite(budget)?,
        "generation" => generation_suite(budget)?,
        _ => return Err(Error::UnknownSuite(name.to_string())),
    };
    Ok(SuiteReport { suite: name.to_string(), properties })
}

fn prop(name: impl Into<String>, pass: bool, details: impl Into<String>) -> PropertyResult {
    PropertyResult { name: name.into(), pass, details: details.into() }
}

// ---------------------------------------------------------------- fixtures

/// Seeded random essential graph with at most `max_v` vertices.
pub fn random_essential_graph(rng: &mut ChaCha8Rng, max_v: usize) -> Arc<EdgeShiftPresentation> {
    loop {
        let nv = rng.gen_range(1..=max_v);
        let ne = rng.gen_range(nv..=nv + 4);
        let vertices: Vec<String> = (0..nv).map(|i| format!("v{i}")).collect();
        let edges: Vec<RawEdge> = (0..ne)
            .map(|i| RawEdge {
                id: format!("e{i}"),
                src: format!("v{}", rng.gen_range(0..nv)),
                dst: format!("v{}", rng.gen_range(0..nv)),
            })
            .collect();
        if let Ok(shift) = validate_presentation(&RawGraph { vertices, edges }, false) {
            return Arc::new(shift);
        }
    }
}

/// Seeded random gate on the given support (a random permutation of every
/// context's fillings).
pub fn random_gate(
    rng: &mut ChaCha8Rng,
    shift: &Arc<EdgeShiftPresentation>,
    support: (i64, i64),
) -> Gate {
    let len = (support.1 - support.0 + 1) as u32;
    let mut rows = BTreeMap::new();
    for ctx in shift.contexts_with_fillings(len) {
        let n = shift.path_count(ctx, len) as usize;
        let mut images: Vec<u32> = (0..n as u32).collect();
        for i in (1..n).rev() {
            images.swap(i, rng.gen_range(0..=i));
        }
        rows.insert(ctx, Perm::from_images(images).unwrap());
    }
    Gate::from_perms(Arc::clone(shift), support, rows)
}

/// Seeded random valid lattice with period at most `max_period`; the gate
/// width never exceeds the period, so translates are support-disjoint.
pub fn random_lattice(
    rng: &mut ChaCha8Rng,
    shift: &Arc<EdgeShiftPresentation>,
    max_period: u32,
) -> GateLattice {
    let period = rng.gen_range(1..=max_period);
    let width = rng.gen_range(1..=period);
    let offset = rng.gen_range(0..period);
    let gate = random_gate(rng, shift, (0, width as i64 - 1));
    make_lattice(gate, period, offset).expect("disjoint supports commute")
}

/// Seeded random word with at most `max_len` factors.
pub fn random_word(
    rng: &mut ChaCha8Rng,
    shift: &Arc<EdgeShiftPresentation>,
    max_len: usize,
) -> LatticeWord {
    let len = rng.gen_range(1..=max_len);
    let periods = [1u32, 2, 3, 6];
    let factors = (0..len)
        .map(|_| {
            let period = periods[rng.gen_range(0..periods.len())];
            let width = rng.gen_range(1..=period);
            let offset = rng.gen_range(0..period);
            let gate = random_gate(rng, shift, (0, width as i64 - 1));
            let lat = make_lattice(gate, period, offset).expect("disjoint supports commute");
            let exp = if rng.gen_bool(0.5) { 1 } else { -1 };
            (lat, exp)
        })
        .collect();
    LatticeWord::new(Arc::clone(shift), factors).expect("one shift")
}

fn test_lattices() -> Vec<GateLattice> {
    let (_, chi) = instances::chi_gate();
    let (full2, flip) = instances::bitflip_gate();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut out = vec![
        make_lattice(chi.clone(), 2, 0).unwrap(),
        make_lattice(flip.clone(), 2, 0).unwrap(),
        make_lattice(flip, 3, 1).unwrap(),
        make_lattice(Gate::identity(Arc::clone(&full2), (0, 0)), 2, 1).unwrap(),
    ];
    let gm = instances::gm();
    for _ in 0..2 {
        out.push(random_lattice(&mut rng, &full2, 3));
        out.push(random_lattice(&mut rng, &gm, 3));
    }
    out
}

// ------------------------------------------------------------ suite bodies

/// Coset decomposition: the compiled product of `refine(lat, m)` equals the
/// compiled lattice, for every test lattice and m <= 4.
fn decomposition_suite() -> Result<Vec<PropertyResult>> {
    let mut out = Vec::new();
    for (i, lat) in test_lattices().iter().enumerate() {
        for m in 1..=4u32 {
            let parts = refine(lat, m)?;
            let lhs = compile_commuting_product(&parts)?;
            let rhs = gate_lattice_to_ca(lat)?;
            let pass = lhs.equal_any_power(&rhs)?;
            out.push(prop(
                format!("refine-product/lattice-{i}/m-{m}"),
                pass,
                format!("period {} offset {}", lat.period(), lat.offset()),
            ));
        }
    }
    Ok(out)
}

/// Evenization: every factor passes the evenness test and the compiled
/// product equals the compiled input.
fn zperfect_suite() -> Result<Vec<PropertyResult>> {
    let mut out = Vec::new();
    let (_, chi) = instances::chi_gate();
    let mut cases = vec![("cg2-chi-2z".to_string(), make_lattice(chi, 2, 0).unwrap())];
    let full2 = instances::full2();
    let gm = instances::gm();
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for i in 0..10 {
        let shift = if i % 2 == 0 { &full2 } else { &gm };
        cases.push((format!("random-{i}"), random_lattice(&mut rng, shift, 3)));
    }
    for (name, lat) in &cases {
        match evenize(lat) {
            Err(e) => out.push(prop(format!("evenize/{name}"), false, format!("{e}"))),
            Ok(outcome) => {
                let all_even = outcome.factors.iter().all(|f| is_even(f.gate()).0);
                let lhs = compile_commuting_product(&outcome.factors)?;
                let rhs = gate_lattice_to_ca(&outcome.normalized)?;
                let product_ok = lhs.equal_any_power(&rhs)?;
                out.push(prop(
                    format!("evenize/{name}"),
                    all_even && product_ok,
                    format!(
                        "m={} p={} factors={} all_even={all_even} product={product_ok}",
                        outcome.m,
                        outcome.p,
                        outcome.factors.len()
                    ),
                ));
            }
        }
    }
    Ok(out)
}

/// Sparse commutator identity at the computed bound, for the shift map and
/// the global complement against seeded random gates.
fn kin_suite() -> Result<Vec<PropertyResult>> {
    let mut out = Vec::new();
    let full2 = instances::full2();
    let sigma = CellularAutomaton::shift_map(Arc::clone(&full2));
    let comp = instances::complement_ca(&full2);
    let (_, chi) = instances::chi_gate();
    let cg2_sigma = CellularAutomaton::shift_map(Arc::clone(chi.shift()));

    let mut rng = ChaCha8Rng::seed_from_u64(37);
    let mut gates: Vec<(String, Arc<EdgeShiftPresentation>, Gate)> = Vec::new();
    for i in 0..5 {
        let width = rng.gen_range(1..=2i64);
        gates.push((
            format!("random-{i}"),
            Arc::clone(&full2),
            random_gate(&mut rng, &full2, (0, width - 1)),
        ));
    }
    for (name, _, gate) in &gates {
        for (fname, f) in [("sigma", &sigma), ("complement", &comp)] {
            let bound_probe = kin_commutator_check(f, gate, f.power())?;
            let k = bound_probe.bound.max(gate.width()).max(1);
            let k = k.div_ceil(f.power()) * f.power();
            let report = kin_commutator_check(f, gate, k)?;
            out.push(prop(
                format!("kin/{fname}/{name}"),
                report.holds(),
                format!("k={} bound={}", report.k, report.bound),
            ));
        }
    }
    // the worked gate on CG2 against sigma at a sparse period
    let report = kin_commutator_check(&cg2_sigma, &chi, 8)?;
    out.push(prop("kin/sigma/cg2-chi", report.holds(), format!("k=8 bound={}", report.bound)));
    Ok(out)
}

/// Single-commutator factorization of every even permutation on 5, 6 and 7
/// points, against an exhaustive commutator-image oracle.
fn ore_suite() -> Result<Vec<PropertyResult>> {
    let mut out = Vec::new();
    for n in 5..=7usize {
        let perms = all_perms(n);
        let index: BTreeMap<&[u8], usize> =
            perms.iter().enumerate().map(|(i, p)| (p.as_slice(), i)).collect();
        // oracle: the set of single commutators [q, r] over all pairs
        let mut image = vec![false; perms.len()];
        let mut qi = vec![0u8; n];
        let mut ri = vec![0u8; n];
        let mut comm = vec![0u8; n];
        for q in &perms {
            for x in 0..n {
                qi[q[x] as usize] = x as u8;
            }
            for r in &perms {
                for x in 0..n {
                    ri[r[x] as usize] = x as u8;
                }
                // [q, r](x) = q^{-1}(r^{-1}(q(r(x))))
                for x in 0..n {
                    comm[x] = qi[ri[q[r[x] as usize] as usize] as usize];
                }
                image[index[comm.as_slice()]] = true;
            }
        }
        let mut oracle_ok = true;
        let mut factored_ok = true;
        let mut detail = String::new();
        for (i, p) in perms.iter().enumerate() {
            let perm = Perm::from_images(p.iter().map(|&x| x as u32).collect()).unwrap();
            let even = perm.sign() > 0;
            if even != image[i] {
                oracle_ok = false;
                detail = format!("oracle mismatch at {p:?}");
            }
            if even {
                match commutator_factor(&perm) {
                    Ok((q, r)) => {
                        if Perm::commutator(&q, &r) != perm {
                            factored_ok = false;
                            detail = format!("bad witness for {p:?}");
                        }
                    }
                    Err(e) => {
                        factored_ok = false;
                        detail = format!("{e} for {p:?}");
                    }
                }
            }
        }
        out.push(prop(
            format!("ore/oracle-image-is-alternating/{n}"),
            oracle_ok,
            detail.clone(),
        ));
        out.push(prop(format!("ore/factor-all-even/{n}"), factored_ok, detail));
    }
    Ok(out)
}

fn all_perms(n: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let mut cur: Vec<u8> = (0..n as u8).collect();
    loop {
        out.push(cur.clone());
        // next permutation in lexicographic order
        let mut i = n - 1;
        while i > 0 && cur[i - 1] >= cur[i] {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        let mut j = n - 1;
        while cur[j] <= cur[i - 1] {
            j -= 1;
        }
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
}

/// Alternating-closure certificates for every non-identity permutation in
/// S5 and S6.
fn an_closure_suite(budget: u64) -> Result<Vec<PropertyResult>> {
    let mut out = Vec::new();
    for n in 5..=6usize {
        let mut pass = true;
        let mut detail = String::new();
        let mut count = 0usize;
        for images in all_perms(n) {
            let p = Perm::from_images(images.iter().map(|&x| x as u32).collect()).unwrap();
            if p.is_identity() {
                continue;
            }
            count += 1;
            match alt_normal_closure(&p, budget) {
                Ok(cert) => {
                    if !cert.target.is_three_cycle() || cert.evaluate() != cert.target {
                        pass = false;
                        detail = format!("bad certificate for {images:?}");
                    }
                    if cert.steps.iter().any(|s| s.conjugator.sign() < 0) {
                        pass = false;
                        detail = format!("odd conjugator for {images:?}");
                    }
                }
                Err(e) => {
                    pass = false;
                    detail = format!("{e} for {images:?}");
                }
            }
        }
        out.push(prop(
            format!("an-closure/all-nonidentity/{n}"),
            pass,
            if detail.is_empty() { format!("{count} permutations") } else { detail },
        ));
    }
    Ok(out)
}

/// The normal-generation instance: f = bitflip on 2Z, target bitflip on 4Z,
/// over the full 2-shift; the certificate must verify by compilation.
fn generation_suite(budget: u64) -> Result<Vec<PropertyResult>> {
    let (full2, flip) = instances::bitflip_gate();
    let f_lat = make_lattice(flip.clone(), 2, 0).unwrap();
    let target = make_lattice(flip, 4, 0).unwrap();
    let word = LatticeWord::new(Arc::clone(&full2), vec![(f_lat, 1)])?;
    let mut out = Vec::new();
    match normal_generation_trace(&word, &target, budget) {
        Ok(cert) => {
            out.push(prop(
                "generation/bitflip-2z-to-4z",
                cert.verified,
                format!(
                    "terms={} working_period={} lhs={} rhs={}",
                    cert.terms.len(),
                    cert.working_period,
                    &cert.lhs_fingerprint[..12],
                    &cert.rhs_fingerprint[..12]
                ),
            ));
            // conjugator words must consist of even lattices
            let even_words = cert.terms.iter().all(|t| {
                t.conjugator.factors().iter().all(|(lat, _)| is_even(lat.gate()).0)
            });
            out.push(prop("generation/conjugators-are-even", even_words, ""));
        }
        Err(e) => out.push(prop("generation/bitflip-2z-to-4z", false, format!("{e}"))),
    }
    Ok(out)
}

/// Brute-force mixing oracle: some uniform gluing length m <= `max_m` works
/// for all word pairs of length <= 3 (by explicit path enumeration).
pub fn mixing_oracle(shift: &EdgeShiftPresentation, max_m: u32) -> Option<u32> {
    let mut words: Vec<Vec<crate::edge_shift::EdgeId>> = Vec::new();
    for len in 1..=3u32 {
        words.extend(shift.all_paths(len));
    }
    'outer: for m in 1..=max_m {
        for u in &words {
            for v in &words {
                let ctx = Context { left: shift.path_target(u), right: shift.path_source(v) };
                if shift.enumerate_paths(ctx, m).is_empty() {
                    continue 'outer;
                }
            }
        }
        return Some(m);
    }
    None
}

/// Direct even-fillings oracle: least hole length (up to `max_n`) whose
/// filling count is even in every context, by explicit enumeration.
pub fn even_fillings_oracle(shift: &EdgeShiftPresentation, max_n: u32) -> Option<u32> {
    'outer: for n in 1..=max_n {
        for a in 0..shift.vertex_count() {
            for b in 0..shift.vertex_count() {
                let ctx = Context { left: VertexId(a as u32), right: VertexId(b as u32) };
                if shift.enumerate_paths(ctx, n).len() % 2 != 0 {
                    continue 'outer;
                }
            }
        }
        return Some(n);
    }
    None
}

/// Applies each factor of a word to a configuration in evaluation order
/// (rightmost factor first).
pub fn apply_word(
    word: &LatticeWord,
    cfg: &crate::edge_shift::PeriodicConfiguration,
) -> Result<crate::edge_shift::PeriodicConfiguration> {
    let mut acc = cfg.clone();
    for (lat, exp) in word.factors().iter().rev() {
        let lat = if *exp >= 0 { lat.clone() } else { lat.inverse() };
        acc = crate::lattice::apply_lattice(&lat, &acc)?;
    }
    Ok(acc)
}

/// Compilation homomorphism check for one word pair: the evaluation of the
/// concatenation must equal the composition of the parts and agree with
/// direct application on all periodic configurations of period <= `max_p`.
pub fn word_homomorphism_check(a: &LatticeWord, b: &LatticeWord, max_p: u32) -> Result<bool> {
    let shift = Arc::clone(a.shift());
    let ab = a.concat(b)?;
    let compiled = word_eval(&ab)?;
    let ca = word_eval(a)?;
    let cb = word_eval(b)?;
    let k = crate::automaton::lcm(compiled.power(), crate::automaton::lcm(ca.power(), cb.power()));
    let composed = ca
        .raise_power(k / ca.power())
        .compose(&cb.raise_power(k / cb.power()))?;
    if !compiled.raise_power(k / compiled.power()).equal(&composed)? {
        return Ok(false);
    }
    let kp = compiled.power();
    for period in 1..=max_p {
        let ext = crate::automaton::lcm(period, kp) / period;
        for path in shift.all_paths(period) {
            if shift.path_source(&path) != shift.path_target(&path) {
                continue;
            }
            let cfg = shift.config_from_edges(path)?.extend_period(ext);
            if compiled.apply(&cfg)? != apply_word(&ab, &cfg)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mixing_oracle_matches_pins() {
        assert_eq!(mixing_oracle(&instances::full2(), 12), Some(1));
        assert_eq!(mixing_oracle(&instances::gm(), 12), Some(2));
        assert_eq!(mixing_oracle(&instances::two_cycle(), 12), None);
    }

    #[test]
    fn even_fillings_oracle_matches_pins() {
        assert_eq!(even_fillings_oracle(&instances::full2(), 6), Some(1));
        assert_eq!(even_fillings_oracle(&instances::cg2(), 6), Some(2));
        assert_eq!(even_fillings_oracle(&instances::gm(), 6), None);
    }

    #[test]
    fn unknown_suite_rejected() {
        assert!(matches!(run_suite("nosuchsuite", 1000), Err(Error::UnknownSuite(_))));
    }

    #[test]
    fn decomposition_suite_passes() {
        let report = run_suite("decomposition", crate::DEFAULT_BUDGET).unwrap();
        assert!(report.passed(), "{:?}", report.properties);
    }
}
