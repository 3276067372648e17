//! Shift-commuting endomorphisms of edge shifts, given by local rules.
//!
//! A `CellularAutomaton` of power `n` commutes with `sigma^n`. Internally it
//! is stored phase-indexed in edge coordinates: `f(x)_i` is looked up in the
//! rule table of phase `i mod n`, applied to the window `x[i+lo ..= i+hi]`.
//! This keeps rule tables small even at high powers (the alternative, a rule
//! over the `n`-block alphabet, blows up as `|E|^n`); the block form of the
//! external JSON schema is converted at the boundary.
//!
//! Rule tables are indexed by the rank of the window path in the canonical
//! path order, via [`PathIndexer`].

use crate::edge_shift::{EdgeId, EdgeShiftPresentation, PathPattern, PeriodicConfiguration, VertexId};
use crate::error::{CommutationWitness, Error, Result};
use crate::lattice::GateLattice;
use sha2::{Digest, Sha256};
use std::collections::HashMap;
use std::sync::Arc;

/// Guard against degenerate table blow-ups; hit only by adversarial inputs.
const MAX_TABLE: u64 = 1 << 26;

/// Ranks paths of a fixed length in canonical (lexicographic by edge id)
/// order.
#[derive(Debug, Clone)]
pub struct PathIndexer {
    shift: Arc<EdgeShiftPresentation>,
    len: u32,
    /// counts[k][v]: number of paths of length k starting at v
    counts: Vec<Vec<u64>>,
    total: u64,
}

impl PathIndexer {
    pub fn new(shift: Arc<EdgeShiftPresentation>, len: u32) -> PathIndexer {
        assert!(len >= 1);
        let nv = shift.vertex_count();
        let mut counts = vec![vec![1u64; nv]];
        for k in 1..=len as usize {
            let prev = &counts[k - 1];
            let mut cur = vec![0u64; nv];
            for v in 0..nv {
                for &e in shift.out_edges(VertexId(v as u32)) {
                    cur[v] += prev[shift.edge_target(e).0 as usize];
                }
            }
            counts.push(cur);
        }
        let total = (0..nv).map(|v| counts[len as usize][v]).sum();
        PathIndexer { shift, len, counts, total }
    }

    pub fn len(&self) -> u32 {
        self.len
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn rank(&self, path: &[EdgeId]) -> u64 {
        debug_assert_eq!(path.len(), self.len as usize);
        let mut rank = 0u64;
        // vertices with smaller index contribute all their paths first? No:
        // rank is over paths ordered lexicographically by edge ids, with the
        // first edge free. Count paths with a smaller first edge, then
        // recurse along the fixed prefix.
        let remaining = self.len as usize - 1;
        for e in 0..path[0].0 {
            rank += self.counts[remaining][self.shift.edge_target(EdgeId(e)).0 as usize];
        }
        let mut cur = self.shift.edge_target(path[0]);
        for (i, &pe) in path.iter().enumerate().skip(1) {
            let remaining = self.len as usize - 1 - i;
            for &e in self.shift.out_edges(cur) {
                if e < pe {
                    rank += self.counts[remaining][self.shift.edge_target(e).0 as usize];
                } else {
                    break;
                }
            }
            cur = self.shift.edge_target(pe);
        }
        rank
    }

    pub fn unrank(&self, mut rank: u64) -> Vec<EdgeId> {
        debug_assert!(rank < self.total);
        let mut path = Vec::with_capacity(self.len as usize);
        let mut remaining = self.len as usize - 1;
        // first edge: unrestricted source
        let mut cur = VertexId(0);
        for e in 0..self.shift.edge_count() as u32 {
            let c = self.counts[remaining][self.shift.edge_target(EdgeId(e)).0 as usize];
            if rank < c {
                path.push(EdgeId(e));
                cur = self.shift.edge_target(EdgeId(e));
                break;
            }
            rank -= c;
        }
        while path.len() < self.len as usize {
            remaining -= 1;
            for &e in self.shift.out_edges(cur) {
                let c = self.counts[remaining][self.shift.edge_target(e).0 as usize];
                if rank < c {
                    path.push(e);
                    cur = self.shift.edge_target(e);
                    break;
                }
                rank -= c;
            }
        }
        path
    }
}

/// A shift-commuting endomorphism of `(X, sigma^power)`.
#[derive(Debug, Clone)]
pub struct CellularAutomaton {
    shift: Arc<EdgeShiftPresentation>,
    power: u32,
    lo: i64,
    hi: i64,
    /// rules[phase][path_rank] = output edge index
    rules: Vec<Vec<u32>>,
    indexer: PathIndexer,
}

impl PartialEq for CellularAutomaton {
    fn eq(&self, other: &Self) -> bool {
        self.shift == other.shift
            && self.power == other.power
            && self.lo == other.lo
            && self.hi == other.hi
            && self.rules == other.rules
    }
}

impl CellularAutomaton {
    fn build(
        shift: Arc<EdgeShiftPresentation>,
        power: u32,
        window: (i64, i64),
        rules: Vec<Vec<u32>>,
    ) -> Result<CellularAutomaton> {
        assert!(power >= 1 && window.1 >= window.0);
        let indexer = PathIndexer::new(Arc::clone(&shift), (window.1 - window.0 + 1) as u32);
        let ca = CellularAutomaton { shift, power, lo: window.0, hi: window.1, rules, indexer };
        ca.check_composability()?;
        Ok(ca)
    }

    /// Builds a power-1 automaton from an explicit rule on window paths.
    pub fn from_rule(
        shift: Arc<EdgeShiftPresentation>,
        window: (i64, i64),
        rule: &HashMap<Vec<EdgeId>, EdgeId>,
    ) -> Result<CellularAutomaton> {
        let indexer = PathIndexer::new(Arc::clone(&shift), (window.1 - window.0 + 1) as u32);
        let mut table = Vec::with_capacity(indexer.total() as usize);
        for r in 0..indexer.total() {
            let path = indexer.unrank(r);
            match rule.get(&path) {
                Some(&out) => table.push(out.0),
                None => return Err(Error::PartialRule(shift.edge_names(&path))),
            }
        }
        Self::build(shift, 1, window, vec![table])
    }

    /// Builds a power-`n` automaton by evaluating `f` on every phase and
    /// window path.
    pub fn from_fn(
        shift: Arc<EdgeShiftPresentation>,
        power: u32,
        window: (i64, i64),
        f: impl Fn(u32, &[EdgeId]) -> Result<EdgeId>,
    ) -> Result<CellularAutomaton> {
        let indexer = PathIndexer::new(Arc::clone(&shift), (window.1 - window.0 + 1) as u32);
        if indexer.total().saturating_mul(power as u64) > MAX_TABLE {
            return Err(Error::BudgetExceeded { stage: "rule-table" });
        }
        let mut rules = Vec::with_capacity(power as usize);
        for phase in 0..power {
            let mut table = Vec::with_capacity(indexer.total() as usize);
            for r in 0..indexer.total() {
                table.push(f(phase, &indexer.unrank(r))?.0);
            }
            rules.push(table);
        }
        Self::build(shift, power, window, rules)
    }

    /// Curtis-Hedlund-Lyndon sanity: consecutive rule outputs compose, so
    /// valid configurations map to valid configurations.
    fn check_composability(&self) -> Result<()> {
        let w = self.width() as usize;
        let ext = PathIndexer::new(Arc::clone(&self.shift), w as u32 + 1);
        for r in 0..ext.total() {
            let path = ext.unrank(r);
            for phase in 0..self.power {
                let a = self.lookup(phase, &path[..w]);
                let b = self.lookup((phase + 1) % self.power, &path[1..]);
                if self.shift.edge_target(a) != self.shift.edge_source(b) {
                    return Err(Error::InvalidImage(self.shift.edge_names(&path)));
                }
            }
        }
        Ok(())
    }

    pub fn shift(&self) -> &Arc<EdgeShiftPresentation> {
        &self.shift
    }

    pub fn power(&self) -> u32 {
        self.power
    }

    pub fn window(&self) -> (i64, i64) {
        (self.lo, self.hi)
    }

    pub fn width(&self) -> u32 {
        (self.hi - self.lo + 1) as u32
    }

    fn lookup(&self, phase: u32, window: &[EdgeId]) -> EdgeId {
        EdgeId(self.rules[phase as usize][self.indexer.rank(window) as usize])
    }

    /// Output edge at absolute coordinate `i`, reading `x` through a lookup
    /// for the window `[i+lo, i+hi]`.
    fn output_at(&self, i: i64, read: impl Fn(i64) -> EdgeId) -> EdgeId {
        let phase = i.rem_euclid(self.power as i64) as u32;
        let window: Vec<EdgeId> = (self.lo..=self.hi).map(|k| read(i + k)).collect();
        self.lookup(phase, &window)
    }

    /// The identity automaton.
    pub fn identity(shift: Arc<EdgeShiftPresentation>) -> CellularAutomaton {
        let table: Vec<u32> = (0..shift.edge_count() as u32).collect();
        Self::build(shift, 1, (0, 0), vec![table]).expect("identity is composable")
    }

    /// The shift map `sigma`: `f(x)_i = x_{i+1}`.
    pub fn shift_map(shift: Arc<EdgeShiftPresentation>) -> CellularAutomaton {
        let table: Vec<u32> = (0..shift.edge_count() as u32).collect();
        Self::build(shift, 1, (1, 1), vec![table]).expect("shift is composable")
    }

    pub fn is_identity(&self) -> bool {
        let lo = self.lo.min(0);
        let hi = self.hi.max(0);
        let wide = self.re_express(lo, hi);
        let center = (-lo) as usize;
        let idx = PathIndexer::new(Arc::clone(&self.shift), (hi - lo + 1) as u32);
        for phase in 0..self.power {
            for r in 0..idx.total() {
                let path = idx.unrank(r);
                if wide.rules[phase as usize][r as usize] != path[center].0 {
                    return false;
                }
            }
        }
        true
    }

    /// Same map on a wider window.
    fn re_express(&self, lo: i64, hi: i64) -> CellularAutomaton {
        assert!(lo <= self.lo && hi >= self.hi);
        if (lo, hi) == (self.lo, self.hi) {
            return self.clone();
        }
        let off = (self.lo - lo) as usize;
        let w = self.width() as usize;
        let idx = PathIndexer::new(Arc::clone(&self.shift), (hi - lo + 1) as u32);
        let mut rules = Vec::with_capacity(self.power as usize);
        for phase in 0..self.power {
            let mut table = Vec::with_capacity(idx.total() as usize);
            for r in 0..idx.total() {
                let path = idx.unrank(r);
                table.push(self.lookup(phase, &path[off..off + w]).0);
            }
            rules.push(table);
        }
        CellularAutomaton {
            shift: Arc::clone(&self.shift),
            power: self.power,
            lo,
            hi,
            rules,
            indexer: idx,
        }
    }

    /// Drops window positions the rule does not depend on.
    pub fn minimize(&self) -> CellularAutomaton {
        let mut cur = self.clone();
        loop {
            if cur.width() == 1 {
                return cur;
            }
            if let Some(next) = cur.try_drop(true) {
                cur = next;
                continue;
            }
            if let Some(next) = cur.try_drop(false) {
                cur = next;
                continue;
            }
            return cur;
        }
    }

    fn try_drop(&self, left: bool) -> Option<CellularAutomaton> {
        let w = self.width() as usize;
        let sub = PathIndexer::new(Arc::clone(&self.shift), w as u32 - 1);
        let mut rules = Vec::with_capacity(self.power as usize);
        for phase in 0..self.power {
            let mut table: Vec<u32> = vec![u32::MAX; sub.total() as usize];
            for r in 0..self.indexer.total() {
                let path = self.indexer.unrank(r);
                let key = if left { &path[1..] } else { &path[..w - 1] };
                let sr = sub.rank(key) as usize;
                let out = self.rules[phase as usize][r as usize];
                if table[sr] == u32::MAX {
                    table[sr] = out;
                } else if table[sr] != out {
                    return None;
                }
            }
            // sub-paths that never extend to a full window path cannot occur
            // in a valid configuration either; map them arbitrarily but
            // deterministically
            if table.iter().any(|&x| x == u32::MAX) {
                return None;
            }
            rules.push(table);
        }
        let (lo, hi) = if left { (self.lo + 1, self.hi) } else { (self.lo, self.hi - 1) };
        Some(CellularAutomaton {
            shift: Arc::clone(&self.shift),
            power: self.power,
            lo,
            hi,
            rules,
            indexer: sub,
        })
    }

    /// Re-presents the automaton as an endomorphism of `(X, sigma^{k * power})`.
    pub fn raise_power(&self, k: u32) -> CellularAutomaton {
        assert!(k >= 1);
        if k == 1 {
            return self.clone();
        }
        let power = self.power * k;
        let rules = (0..power)
            .map(|p| self.rules[(p % self.power) as usize].clone())
            .collect();
        CellularAutomaton {
            shift: Arc::clone(&self.shift),
            power,
            lo: self.lo,
            hi: self.hi,
            rules,
            indexer: self.indexer.clone(),
        }
    }

    /// Conjugation by the translation `sigma_t`: the automaton
    /// `sigma_{-t} . f . sigma_t`.
    pub fn translate(&self, t: i64) -> CellularAutomaton {
        let n = self.power as i64;
        let rules = (0..self.power as i64)
            .map(|p| self.rules[(p - t).rem_euclid(n) as usize].clone())
            .collect();
        CellularAutomaton {
            shift: Arc::clone(&self.shift),
            power: self.power,
            lo: self.lo,
            hi: self.hi,
            rules,
            indexer: self.indexer.clone(),
        }
    }

    /// `self` after `other`. Powers must agree.
    pub fn compose(&self, other: &CellularAutomaton) -> Result<CellularAutomaton> {
        if self.shift != other.shift {
            return Err(Error::ShiftMismatch);
        }
        if self.power != other.power {
            return Err(Error::PowerMismatch(self.power, other.power));
        }
        let lo = self.lo + other.lo;
        let hi = self.hi + other.hi;
        let shift = Arc::clone(&self.shift);
        let ca = CellularAutomaton::from_fn(shift, self.power, (lo, hi), |phase, path| {
            // y_j = other(x)_j for j in [phase+self.lo, phase+self.hi]
            let base = phase as i64 + lo;
            let y: Vec<EdgeId> = (self.lo..=self.hi)
                .map(|d| {
                    let j = phase as i64 + d;
                    other.output_at(j, |abs| path[(abs - base) as usize])
                })
                .collect();
            Ok(self.lookup(phase, &y))
        })?;
        Ok(ca.minimize())
    }

    /// Exact equality of the induced maps; powers must agree.
    pub fn equal(&self, other: &CellularAutomaton) -> Result<bool> {
        if self.shift != other.shift {
            return Err(Error::ShiftMismatch);
        }
        if self.power != other.power {
            return Err(Error::PowerMismatch(self.power, other.power));
        }
        Ok(self.equal_inner(other))
    }

    fn equal_inner(&self, other: &CellularAutomaton) -> bool {
        let a = self.minimize();
        let b = other.minimize();
        let lo = a.lo.min(b.lo);
        let hi = a.hi.max(b.hi);
        let aw = a.re_express(lo, hi);
        let bw = b.re_express(lo, hi);
        aw.rules == bw.rules
    }

    /// Equality after raising both to the least common power.
    pub fn equal_any_power(&self, other: &CellularAutomaton) -> Result<bool> {
        if self.shift != other.shift {
            return Err(Error::ShiftMismatch);
        }
        let l = lcm(self.power, other.power);
        Ok(self.raise_power(l / self.power).equal_inner(&other.raise_power(l / other.power)))
    }

    /// Bounded search for the inverse rule. Tries radii `0..=radius_bound`
    /// and verifies two-sided inversion at rule level before returning.
    pub fn invert(&self, radius_bound: i64) -> Result<CellularAutomaton> {
        for radius in 0..=radius_bound {
            match self.try_invert(radius) {
                Some(inv) => {
                    let a = self.compose(&inv).map_err(|_| Error::NotInvertible)?;
                    let b = inv.compose(self).map_err(|_| Error::NotInvertible)?;
                    if a.is_identity() && b.is_identity() {
                        return Ok(inv);
                    }
                }
                None => {}
            }
        }
        Err(Error::NotInvertibleWithinBound(radius_bound))
    }

    fn try_invert(&self, radius: i64) -> Option<CellularAutomaton> {
        // candidate g with window [-radius, radius]: for every x-window u
        // wide enough to determine f(x) on [i-radius, i+radius] and
        // containing x_i itself, the image window must determine x_i
        let gw = 2 * radius + 1;
        let sub = PathIndexer::new(Arc::clone(&self.shift), gw as u32);
        let u_lo = (-radius + self.lo).min(0);
        let u_hi = (radius + self.hi).max(0);
        let ext_len = u_hi - u_lo + 1;
        let ext = PathIndexer::new(Arc::clone(&self.shift), ext_len as u32);
        if ext.total().saturating_mul(self.power as u64) > MAX_TABLE {
            return None;
        }
        let mut rules: Vec<Vec<u32>> = vec![vec![u32::MAX; sub.total() as usize]; self.power as usize];
        for r in 0..ext.total() {
            let u = ext.unrank(r);
            for phase in 0..self.power as i64 {
                // u covers x on [i + u_lo, i + u_hi] with i == phase (mod power)
                let i = phase;
                let base = i + u_lo;
                let y: Vec<EdgeId> = (-radius..=radius)
                    .map(|d| self.output_at(i + d, |abs| u[(abs - base) as usize]))
                    .collect();
                let key = sub.rank(&y) as usize;
                let center = u[(-u_lo) as usize].0;
                let slot = &mut rules[phase as usize][key];
                if *slot == u32::MAX {
                    *slot = center;
                } else if *slot != center {
                    return None;
                }
            }
        }
        if rules.iter().any(|t| t.iter().any(|&x| x == u32::MAX)) {
            return None;
        }
        CellularAutomaton::build(
            Arc::clone(&self.shift),
            self.power,
            (-radius, radius),
            rules,
        )
        .ok()
    }

    /// Applies the automaton to a periodic configuration whose period is a
    /// multiple of the power.
    pub fn apply(&self, cfg: &PeriodicConfiguration) -> Result<PeriodicConfiguration> {
        if cfg.period() % self.power != 0 {
            return Err(Error::PeriodMismatch { lattice: self.power, config: cfg.period() });
        }
        let edges: Vec<EdgeId> =
            (0..cfg.period() as i64).map(|i| self.output_at(i, |j| cfg.edge_at(j))).collect();
        self.shift.config_from_edges(edges)
    }

    /// Computes `f(x)` on `out_range` from a pattern covering the needed
    /// input window.
    pub fn apply_to_pattern(&self, pat: &PathPattern, out_range: (i64, i64)) -> Result<PathPattern> {
        let need = (out_range.0 + self.lo, out_range.1 + self.hi);
        if pat.base > need.0 || pat.end() < need.1 {
            return Err(Error::SupportNotCovered);
        }
        let edges: Vec<EdgeId> = (out_range.0..=out_range.1)
            .map(|i| self.output_at(i, |j| pat.edges[(j - pat.base) as usize]))
            .collect();
        Ok(PathPattern { base: out_range.0, edges })
    }

    /// Deterministic digest of the minimized rule, used to cross-reference
    /// compiled maps in reports.
    pub fn fingerprint(&self) -> String {
        let min = self.minimize();
        let mut h = Sha256::new();
        h.update(min.power.to_le_bytes());
        h.update(min.lo.to_le_bytes());
        h.update(min.hi.to_le_bytes());
        for table in &min.rules {
            for &x in table {
                h.update(x.to_le_bytes());
            }
        }
        for e in 0..min.shift.edge_count() {
            h.update(min.shift.edge_name(EdgeId(e as u32)).as_bytes());
            h.update([0xff]);
        }
        hex(&h.finalize())
    }
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

pub(crate) fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn lcm(a: u32, b: u32) -> u32 {
    a / gcd(a, b) * b
}

/// Compiles a gate lattice `chi^{nZ+j}` into a cellular automaton of power
/// `n`. The rule applies, inside each window, every translate whose support
/// touches the output cell; commutation makes the application order
/// immaterial.
pub fn gate_lattice_to_ca(lat: &GateLattice) -> Result<CellularAutomaton> {
    let gate = lat.gate();
    let shift = Arc::clone(gate.shift());
    let n = lat.period() as i64;
    let j = lat.offset() as i64;
    let (a, b) = gate.support();
    let lo = a - b;
    let hi = b - a;
    let ca = CellularAutomaton::from_fn(shift.clone(), lat.period(), (lo, hi), |phase, path| {
        let i = phase as i64; // representative output coordinate
        let base = i + lo;
        let mut buf = path.to_vec();
        // sites s = j (mod n) whose support [s+a, s+b] contains i
        let mut s = first_site_at_least(i - b, j, n);
        while s <= i - a {
            let pat = PathPattern { base, edges: buf };
            let img = gate
                .translate(s)
                .apply_to_pattern(&pat, None)
                .expect("window covers every touching translate");
            buf = img.edges;
            s += n;
        }
        Ok(buf[(i - base) as usize])
    })?;
    Ok(ca.minimize())
}

fn first_site_at_least(min: i64, j: i64, n: i64) -> i64 {
    // least s >= min with s == j (mod n)
    min + (j - min).rem_euclid(n)
}

/// Compiles the product of several gate lattices whose translates pairwise
/// commute (checked), as a single automaton of power the lcm of the periods.
/// This avoids the window growth of iterated pairwise composition.
pub fn compile_commuting_product(lats: &[GateLattice]) -> Result<CellularAutomaton> {
    assert!(!lats.is_empty());
    let shift = Arc::clone(lats[0].gate().shift());
    let mut k = 1u32;
    for lat in lats {
        if lat.gate().shift() != &shift {
            return Err(Error::ShiftMismatch);
        }
        k = lcm(k, lat.period());
    }
    // cross-factor commutation of overlapping translates: site differences
    // range over (offset_b - offset_a) + gcd(period_a, period_b) * Z
    for (i, la) in lats.iter().enumerate() {
        for (jj, lb) in lats.iter().enumerate().skip(i) {
            let same = i == jj;
            let g = gcd(la.period(), lb.period()) as i64;
            let base = lb.offset() as i64 - la.offset() as i64;
            let reach = (la.gate().width() + lb.gate().width()) as i64 + 2;
            // least d >= -reach with d == base (mod g)
            let mut d = -reach + (base + reach).rem_euclid(g);
            while d <= reach {
                if !(same && d == 0) {
                    let ga = la.gate();
                    let gb = lb.gate().translate(d);
                    if let Some((ctx, path)) = ga.commutation_witness(&gb)? {
                        let witness = CommutationWitness {
                            offset_a: la.offset() as i64,
                            offset_b: la.offset() as i64 + d,
                            left: shift.vertex_name(ctx.left).to_string(),
                            right: shift.vertex_name(ctx.right).to_string(),
                            path: shift.edge_names(&path),
                            config: shift
                                .close_into_cycle(&path)
                                .map(|c| shift.edge_names(c.edges())),
                        };
                        return Err(Error::NonCommuting { witness: Box::new(witness) });
                    }
                }
                d += g;
            }
        }
    }

    let mut lo = 0i64;
    let mut hi = 0i64;
    for lat in lats {
        let (a, b) = lat.gate().support();
        lo = lo.min(a - b);
        hi = hi.max(b - a);
    }
    let ca = CellularAutomaton::from_fn(shift, k, (lo, hi), |phase, path| {
        let i = phase as i64;
        let base = i + lo;
        let mut buf = path.to_vec();
        for lat in lats {
            let gate = lat.gate();
            let (a, b) = gate.support();
            let n = lat.period() as i64;
            let mut s = first_site_at_least(i - b, lat.offset() as i64, n);
            while s <= i - a {
                let pat = PathPattern { base, edges: buf };
                buf = gate
                    .translate(s)
                    .apply_to_pattern(&pat, None)
                    .expect("window covers every touching translate")
                    .edges;
                s += n;
            }
        }
        Ok(buf[(i - base) as usize])
    })?;
    Ok(ca.minimize())
}

/// An edge permutation of a higher-block presentation preserving sources and
/// targets, together with the placement data tying it back to the original
/// shift.
#[derive(Debug, Clone)]
pub struct SimpleSymmetry {
    /// the (m*n, c=1) block presentation the permutation lives on
    pub blocked: Arc<EdgeShiftPresentation>,
    /// permutation of the blocked presentation's edges
    pub perm: Vec<u32>,
    /// block size in original edges
    pub block: u32,
    /// boundary (vertex-word) edges sit at `phase + k * block`
    pub phase: i64,
    recode: crate::edge_shift::BlockRecode,
}

impl SimpleSymmetry {
    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    /// The induced automorphism of `(X, sigma^{block})` as a cellular
    /// automaton on the original shift.
    pub fn to_ca(&self) -> Result<CellularAutomaton> {
        let block = self.block as i64;
        let shift = Arc::clone(&self.recode.original);
        let recode = &self.recode;
        let perm = &self.perm;
        let phase0 = self.phase;
        // output i lies in the symmetry block [w, w + block] with
        // w = phase + k*block <= i - ? : boundary edges at w and w + block
        let ca = CellularAutomaton::from_fn(
            shift.clone(),
            self.block,
            (-(block), block),
            move |p, path| {
                let i = p as i64;
                let base = i - block;
                // boundary edge position w <= i with w == phase0 (mod block)
                let w = i - (i - phase0).rem_euclid(block);
                if w == i {
                    return Ok(path[(i - base) as usize]); // boundary edges are fixed
                }
                let seg_lo = w;
                let seg = &path[(seg_lo - base) as usize..(seg_lo - base) as usize + block as usize + 1];
                let be = recode
                    .block_of_path(seg)
                    .ok_or_else(|| Error::InvalidPath(recode.original.edge_names(seg)))?;
                let img = recode.block_edge_path(EdgeId(perm[be.0 as usize]));
                Ok(img[(i - seg_lo) as usize])
            },
        )?;
        Ok(ca.minimize())
    }
}

/// Presents a gate lattice as a simple graph symmetry on the `(m*n)`-block
/// presentation: vertex words (of window length 1) are placed around
/// `offset + floor(mn/2) + k*mn` and each block-edge is permuted by the gate
/// translates falling strictly inside it.
pub fn simple_symmetry_form(lat: &GateLattice, m: u32) -> Result<SimpleSymmetry> {
    assert!(m >= 1);
    let gate = lat.gate();
    let shift = Arc::clone(gate.shift());
    let n = lat.period() as i64;
    let j = lat.offset() as i64;
    let (a, b) = gate.support();

    let fits = |m: i64| -> bool {
        let block = m * n;
        let phase = j + block / 2;
        // every site s = j + kn must have its padded support inside an open
        // block (w, w + block), i.e. not touching the boundary edges
        for site in 0..m {
            let s = j + site * n;
            let (lo, hi) = (s + a - 1, s + b + 1);
            // boundary edges at phase (mod block): none may fall in [lo, hi]
            let first = lo + (phase - lo).rem_euclid(block);
            if first <= hi {
                return false;
            }
        }
        true
    };
    if !gate.is_identity() && !fits(m as i64) {
        // the fits predicate is eventually periodic in m; a bounded scan
        // decides whether any larger m works
        let least = (m as i64 + 1..=m as i64 + 4 * n * (b - a + 3))
            .find(|&k| fits(k))
            .map(|k| k as u32);
        return Err(Error::BlockTooSmall { m, least });
    }

    let block = m as i64 * n;
    let phase = j + block / 2;
    let (blocked, recode) = shift.block_presentation(m * lat.period(), 1);
    let mut perm = Vec::with_capacity(blocked.edge_count());
    for be in 0..blocked.edge_count() as u32 {
        let path = recode.block_edge_path(EdgeId(be));
        // the block-edge spans [phase + k*block, phase + (k+1)*block]; place
        // it at base = phase
        let mut pat = PathPattern { base: phase, edges: path.to_vec() };
        let mut s = first_site_at_least(phase + 1 - a, j, n);
        while s + b <= phase + block - 1 {
            pat = gate.translate(s).apply_to_pattern(&pat, None)?;
            s += n;
        }
        let img = recode
            .block_of_path(&pat.edges)
            .ok_or_else(|| Error::InvalidPath(shift.edge_names(&pat.edges)))?;
        perm.push(img.0);
    }
    // sanity: the permutation preserves sources and targets
    for be in 0..blocked.edge_count() as u32 {
        let img = EdgeId(perm[be as usize]);
        if blocked.edge_source(img) != blocked.edge_source(EdgeId(be))
            || blocked.edge_target(img) != blocked.edge_target(EdgeId(be))
        {
            return Err(Error::VerificationFailed { stage: "simple-symmetry" });
        }
    }
    Ok(SimpleSymmetry { blocked, perm, block: (m as i64 * n) as u32, phase, recode })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{cg2, full2};
    use std::collections::HashMap;

    fn full2_arc() -> Arc<EdgeShiftPresentation> {
        full2()
    }

    #[test]
    fn indexer_roundtrip() {
        let shift = cg2();
        let idx = PathIndexer::new(Arc::clone(&shift), 3);
        assert_eq!(idx.total(), 16);
        for r in 0..idx.total() {
            let p = idx.unrank(r);
            assert!(shift.is_valid_path(&p));
            assert_eq!(idx.rank(&p), r);
        }
    }

    #[test]
    fn identity_and_shift() {
        let shift = full2_arc();
        let id = CellularAutomaton::identity(Arc::clone(&shift));
        assert!(id.is_identity());
        let sigma = CellularAutomaton::shift_map(Arc::clone(&shift));
        assert!(!sigma.is_identity());
        let cfg = shift.config_from_names(&["0".into(), "1".into()]).unwrap();
        let out = sigma.apply(&cfg).unwrap();
        assert_eq!(shift.edge_names(out.edges()), vec!["1", "0"]);
    }

    #[test]
    fn center_rule_is_identity() {
        let shift = full2_arc();
        let mut rule = HashMap::new();
        for e in 0..2u32 {
            rule.insert(vec![EdgeId(e)], EdgeId(e));
        }
        let ca = CellularAutomaton::from_rule(Arc::clone(&shift), (0, 0), &rule).unwrap();
        assert!(ca.is_identity());
    }

    fn xor_ca(shift: &Arc<EdgeShiftPresentation>) -> CellularAutomaton {
        let mut rule = HashMap::new();
        for a in 0..2u32 {
            for b in 0..2u32 {
                rule.insert(vec![EdgeId(a), EdgeId(b)], EdgeId(a ^ b));
            }
        }
        CellularAutomaton::from_rule(Arc::clone(shift), (0, 1), &rule).unwrap()
    }

    #[test]
    fn xor_is_valid_but_not_invertible() {
        let shift = full2_arc();
        let xor = xor_ca(&shift);
        assert!(matches!(xor.invert(4), Err(Error::NotInvertibleWithinBound(4))));
    }

    #[test]
    fn partial_rule_rejected() {
        let shift = full2_arc();
        let mut rule = HashMap::new();
        rule.insert(vec![EdgeId(0)], EdgeId(0));
        assert!(matches!(
            CellularAutomaton::from_rule(Arc::clone(&shift), (0, 0), &rule),
            Err(Error::PartialRule(_))
        ));
    }

    #[test]
    fn sigma_inverts() {
        let shift = full2_arc();
        let sigma = CellularAutomaton::shift_map(Arc::clone(&shift));
        let inv = sigma.invert(1).unwrap();
        let comp = sigma.compose(&inv).unwrap();
        assert!(comp.is_identity());
        let id1 = CellularAutomaton::identity(Arc::clone(&shift));
        assert!(comp.equal(&id1).unwrap());
    }

    #[test]
    fn identity_windows_equal() {
        let shift = full2_arc();
        let wide = CellularAutomaton::identity(Arc::clone(&shift)).re_express(-1, 1);
        let narrow = CellularAutomaton::identity(Arc::clone(&shift));
        assert!(wide.equal(&narrow).unwrap());
    }

    #[test]
    fn equality_agrees_with_pointwise_on_periodic_points() {
        let shift = full2_arc();
        let sigma = CellularAutomaton::shift_map(Arc::clone(&shift));
        let sigma2 = sigma.compose(&sigma).unwrap();
        let xor = xor_ca(&shift);
        let cas = [sigma.clone(), sigma2, xor, CellularAutomaton::identity(Arc::clone(&shift))];
        for f in &cas {
            for g in &cas {
                let eq = f.equal(g).unwrap();
                let mut pointwise = true;
                for period in 1..=8u32 {
                    for p in shift.all_paths(period) {
                        if shift.path_source(&p) != shift.path_target(&p) {
                            continue;
                        }
                        let cfg = shift.config_from_edges(p).unwrap();
                        if f.apply(&cfg).unwrap() != g.apply(&cfg).unwrap() {
                            pointwise = false;
                        }
                    }
                }
                assert_eq!(eq, pointwise);
            }
        }
    }

    #[test]
    fn translate_rotates_phases() {
        let shift = full2_arc();
        let sigma = CellularAutomaton::shift_map(Arc::clone(&shift));
        // power-1 maps are translation invariant
        assert!(sigma.translate(1).equal(&sigma).unwrap());
    }
}
