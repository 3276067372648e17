//! Gates: homeomorphisms of an edge shift that modify only a bounded
//! interval of coordinates.
//!
//! A gate is stored in strong-neighborhood form: an interval support
//! `[start, start + len - 1]` and, for every context (boundary vertex pair)
//! with a nonempty filling set, a permutation of the fillings in canonical
//! order. Contexts acting as the identity are dropped, which together with
//! the interval support makes structural equality after rebasing a decision
//! procedure for equality of the induced maps.

use crate::automaton::CellularAutomaton;
use crate::edge_shift::{Context, EdgeId, EdgeShiftPresentation, PathPattern, PeriodicConfiguration};
use crate::error::{Error, Result};
use crate::perm::Perm;
use std::collections::BTreeMap;
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gate {
    shift: Arc<EdgeShiftPresentation>,
    start: i64,
    len: u32,
    /// context -> permutation of the canonical filling list; identity rows
    /// are absent.
    table: BTreeMap<Context, Perm>,
}

impl Gate {
    /// The identity gate on the given support.
    pub fn identity(shift: Arc<EdgeShiftPresentation>, support: (i64, i64)) -> Gate {
        assert!(support.1 >= support.0);
        Gate {
            shift,
            start: support.0,
            len: (support.1 - support.0 + 1) as u32,
            table: BTreeMap::new(),
        }
    }

    /// Builds a gate from a context-indexed path mapping. Missing contexts
    /// and missing paths default to the identity.
    pub fn from_table(
        shift: Arc<EdgeShiftPresentation>,
        support: (i64, i64),
        table: &BTreeMap<Context, Vec<(Vec<EdgeId>, Vec<EdgeId>)>>,
    ) -> Result<Gate> {
        assert!(support.1 >= support.0);
        let len = (support.1 - support.0 + 1) as u32;
        let mut rows = BTreeMap::new();
        for (&ctx, pairs) in table {
            let ctx_err = || {
                (
                    shift.vertex_name(ctx.left).to_string(),
                    shift.vertex_name(ctx.right).to_string(),
                )
            };
            let fillings = shift.enumerate_paths(ctx, len);
            if fillings.is_empty() {
                let (left, right) = ctx_err();
                return Err(Error::EmptyContext { left, right, len });
            }
            let rank_of = |path: &[EdgeId]| fillings.binary_search_by(|f| f.as_slice().cmp(path));
            let mut images: Vec<u32> = (0..fillings.len() as u32).collect();
            let mut touched = vec![false; fillings.len()];
            for (from, to) in pairs {
                for p in [from, to] {
                    for &e in p {
                        if e.0 as usize >= shift.edge_count() {
                            return Err(Error::UnknownEdge(format!("#{}", e.0)));
                        }
                    }
                    if p.len() != len as usize || !shift.is_valid_path(p) {
                        return Err(Error::InvalidPath(shift.edge_names(p)));
                    }
                }
                if shift.path_source(to) != shift.path_source(from)
                    || shift.path_target(to) != shift.path_target(from)
                    || shift.path_source(from) != ctx.left
                    || shift.path_target(from) != ctx.right
                {
                    let (left, right) = ctx_err();
                    return Err(Error::EndpointMismatch { left, right });
                }
                let fi = rank_of(from).map_err(|_| Error::InvalidPath(shift.edge_names(from)))?;
                let ti = rank_of(to).map_err(|_| Error::InvalidPath(shift.edge_names(to)))?;
                if touched[fi] {
                    let (left, right) = ctx_err();
                    return Err(Error::NotBijective { left, right });
                }
                touched[fi] = true;
                images[fi] = ti as u32;
            }
            let perm = Perm::from_images(images).map_err(|_| {
                let (left, right) = ctx_err();
                Error::NotBijective { left, right }
            })?;
            if !perm.is_identity() {
                rows.insert(ctx, perm);
            }
        }
        Ok(Gate { shift, start: support.0, len, table: rows })
    }

    pub fn from_perms(
        shift: Arc<EdgeShiftPresentation>,
        support: (i64, i64),
        rows: BTreeMap<Context, Perm>,
    ) -> Gate {
        let len = (support.1 - support.0 + 1) as u32;
        let table = rows
            .into_iter()
            .filter(|(ctx, p)| {
                debug_assert_eq!(
                    p.degree() as u64,
                    shift.path_count(*ctx, len),
                    "permutation degree must match the filling count"
                );
                !p.is_identity()
            })
            .collect();
        Gate { shift, start: support.0, len, table }
    }

    pub fn shift(&self) -> &Arc<EdgeShiftPresentation> {
        &self.shift
    }

    pub fn support(&self) -> (i64, i64) {
        (self.start, self.start + self.len as i64 - 1)
    }

    pub fn width(&self) -> u32 {
        self.len
    }

    pub fn table(&self) -> &BTreeMap<Context, Perm> {
        &self.table
    }

    pub fn is_identity(&self) -> bool {
        self.table.is_empty()
    }

    /// Permutation performed in `ctx` at the current support (identity when
    /// the context is absent from the table).
    pub fn context_perm(&self, ctx: Context) -> Perm {
        match self.table.get(&ctx) {
            Some(p) => p.clone(),
            None => Perm::identity(self.shift.path_count(ctx, self.len) as usize),
        }
    }

    pub fn translate(&self, k: i64) -> Gate {
        Gate { shift: Arc::clone(&self.shift), start: self.start + k, len: self.len, table: self.table.clone() }
    }

    pub fn inverse(&self) -> Gate {
        let table = self.table.iter().map(|(&c, p)| (c, p.inverse())).collect();
        Gate { shift: Arc::clone(&self.shift), start: self.start, len: self.len, table }
    }

    /// Re-expresses the gate on a larger support inducing the same global
    /// map: in each new context the permutation acts on the old sub-window
    /// and fixes the margins.
    pub fn rebase(&self, support: (i64, i64)) -> Result<Gate> {
        let (s, e) = self.support();
        if support.0 > s || support.1 < e {
            return Err(Error::SupportTooSmall(support.0, support.1, s, e));
        }
        if support == (s, e) {
            return Ok(self.clone());
        }
        let new_len = (support.1 - support.0 + 1) as usize;
        let left_len = (s - support.0) as usize;
        let mid = self.len as usize;
        let mut table = BTreeMap::new();
        for ctx in self.shift.contexts_with_fillings(new_len as u32) {
            let fillings = self.shift.enumerate_paths(ctx, new_len as u32);
            let rank_of =
                |path: &[EdgeId]| fillings.binary_search_by(|f| f.as_slice().cmp(path)).unwrap();
            let mut images = Vec::with_capacity(fillings.len());
            let mut moved = false;
            for f in &fillings {
                let inner = &f[left_len..left_len + mid];
                let inner_ctx = Context {
                    left: self.shift.path_source(inner),
                    right: self.shift.path_target(inner),
                };
                match self.table.get(&inner_ctx) {
                    None => images.push(rank_of(f) as u32),
                    Some(p) => {
                        let inner_fillings = self.shift.enumerate_paths(inner_ctx, self.len);
                        let ri = inner_fillings
                            .binary_search_by(|x| x.as_slice().cmp(inner))
                            .unwrap();
                        let image_inner = &inner_fillings[p.apply(ri as u32) as usize];
                        let mut g = f.clone();
                        g[left_len..left_len + mid].copy_from_slice(image_inner);
                        let gi = rank_of(&g) as u32;
                        if gi != rank_of(f) as u32 {
                            moved = true;
                        }
                        images.push(gi);
                    }
                }
            }
            if moved {
                table.insert(ctx, Perm::from_images(images).expect("rebase preserves bijections"));
            }
        }
        Ok(Gate { shift: Arc::clone(&self.shift), start: support.0, len: new_len as u32, table })
    }

    /// `self` after `other` as global maps. Both gates are rebased to the
    /// union support first.
    pub fn compose(&self, other: &Gate) -> Result<Gate> {
        if self.shift != other.shift {
            return Err(Error::ShiftMismatch);
        }
        let (s1, e1) = self.support();
        let (s2, e2) = other.support();
        let support = (s1.min(s2), e1.max(e2));
        let a = self.rebase(support)?;
        let b = other.rebase(support)?;
        let mut table = BTreeMap::new();
        for ctx in a.shift.contexts_with_fillings(a.len) {
            let pa = a.context_perm(ctx);
            let pb = b.context_perm(ctx);
            let p = pa.compose(&pb);
            if !p.is_identity() {
                table.insert(ctx, p);
            }
        }
        Ok(Gate { shift: Arc::clone(&self.shift), start: support.0, len: a.len, table })
    }

    /// Exact commutation test: both application orders are compared on all
    /// paths covering the union support extended by one window step.
    pub fn commutes(&self, other: &Gate) -> Result<bool> {
        Ok(self.commutation_witness(other)?.is_none())
    }

    /// `None` when the gates commute, else a witnessing context and path.
    pub fn commutation_witness(&self, other: &Gate) -> Result<Option<(Context, Vec<EdgeId>)>> {
        if self.shift != other.shift {
            return Err(Error::ShiftMismatch);
        }
        let (s1, e1) = self.support();
        let (s2, e2) = other.support();
        let support = (s1.min(s2) - 1, e1.max(e2) + 1);
        let ab = self.compose(other)?.rebase(support)?;
        let ba = other.compose(self)?.rebase(support)?;
        for ctx in self.shift.contexts_with_fillings(ab.len) {
            let pa = ab.context_perm(ctx);
            let pb = ba.context_perm(ctx);
            if pa != pb {
                let fillings = self.shift.enumerate_paths(ctx, ab.len);
                for (i, f) in fillings.iter().enumerate() {
                    if pa.apply(i as u32) != pb.apply(i as u32) {
                        return Ok(Some((ctx, f.clone())));
                    }
                }
            }
        }
        Ok(None)
    }

    /// Applies the gate to a pattern covering the support. The context is
    /// read off the pattern; an explicitly supplied context must agree.
    pub fn apply_to_pattern(&self, pat: &PathPattern, ctx: Option<Context>) -> Result<PathPattern> {
        let (s, e) = self.support();
        if pat.base > s || pat.end() < e {
            return Err(Error::SupportNotCovered);
        }
        let lo = (s - pat.base) as usize;
        let hi = lo + self.len as usize;
        let inner = &pat.edges[lo..hi];
        let inner_ctx = Context {
            left: self.shift.path_source(inner),
            right: self.shift.path_target(inner),
        };
        if let Some(c) = ctx {
            if c != inner_ctx {
                return Err(Error::EndpointMismatch {
                    left: self.shift.vertex_name(c.left).to_string(),
                    right: self.shift.vertex_name(c.right).to_string(),
                });
            }
        }
        let mut out = pat.clone();
        if let Some(p) = self.table.get(&inner_ctx) {
            let fillings = self.shift.enumerate_paths(inner_ctx, self.len);
            let ri = fillings.binary_search_by(|x| x.as_slice().cmp(inner)).unwrap();
            out.edges[lo..hi].copy_from_slice(&fillings[p.apply(ri as u32) as usize]);
        }
        Ok(out)
    }

    /// Applies the gate once per period at `site` (equivalently, applies the
    /// period-length lattice through `site`). The support must fit inside
    /// one period.
    pub fn apply_to_config(
        &self,
        cfg: &PeriodicConfiguration,
        site: i64,
    ) -> Result<PeriodicConfiguration> {
        if self.len > cfg.period() {
            return Err(Error::SupportNotCovered);
        }
        let (s, _) = self.support();
        let window = cfg.window(site + s, self.len as usize);
        let image = self.apply_to_pattern(&window, None)?;
        let period = cfg.period() as i64;
        let mut edges = cfg.edges().to_vec();
        for (k, &e) in image.edges.iter().enumerate() {
            edges[(site + s + k as i64).rem_euclid(period) as usize] = e;
        }
        self.shift.config_from_edges(edges)
    }

    /// Conjugation by an invertible cellular automaton: the gate
    /// `f^{-1} . self . f`, re-expressed in strong-neighborhood form by
    /// reading off the induced permutation per context on a sufficiently
    /// wide interval, then minimized.
    pub fn conjugate_by(&self, f: &CellularAutomaton) -> Result<Gate> {
        let finv = f
            .invert(crate::DEFAULT_INVERSE_RADIUS)
            .map_err(|_| Error::NotInvertible)?;
        self.conjugate_by_with_inverse(f, &finv)
    }

    pub fn conjugate_by_with_inverse(
        &self,
        f: &CellularAutomaton,
        finv: &CellularAutomaton,
    ) -> Result<Gate> {
        if f.shift() != &self.shift {
            return Err(Error::ShiftMismatch);
        }
        let (s, e) = self.support();
        let (flo, fhi) = f.window();
        let (ulo, uhi) = finv.window();
        // weak neighborhood of f^{-1} . g . f
        let weak = (s - uhi, e - ulo);
        // reading f^{-1} on `weak` consumes z on dz; z = g(f(x)) consumes x on w
        let dz = (weak.0 + ulo, weak.1 + uhi);
        let w = (dz.0 + flo, dz.1 + fhi);
        let support = (w.0.min(weak.0), w.1.max(weak.1));
        let len = (support.1 - support.0 + 1) as u32;

        let mut table = BTreeMap::new();
        for ctx in self.shift.contexts_with_fillings(len) {
            let fillings = self.shift.enumerate_paths(ctx, len);
            let rank_of =
                |path: &[EdgeId]| fillings.binary_search_by(|x| x.as_slice().cmp(path)).unwrap();
            let mut images = Vec::with_capacity(fillings.len());
            let mut moved = false;
            for fill in &fillings {
                let pat = PathPattern { base: support.0, edges: fill.clone() };
                // y = f(x) on dz
                let y = f.apply_to_pattern(&pat, dz)?;
                // z = gate(y): apply on [s, e] inside y
                let z = self.apply_to_pattern(&y, None)?;
                // h(x) = f^{-1}(z) on weak
                let h = finv.apply_to_pattern(&z, weak)?;
                let mut out = fill.clone();
                for k in 0..h.edges.len() {
                    out[(weak.0 - support.0) as usize + k] = h.edges[k];
                }
                if !self.shift.is_valid_path(&out) {
                    return Err(Error::InvalidImage(self.shift.edge_names(&out)));
                }
                let oi = rank_of(&out) as u32;
                if oi != rank_of(fill) as u32 {
                    moved = true;
                }
                images.push(oi);
            }
            let perm = Perm::from_images(images)
                .map_err(|_| Error::VerificationFailed { stage: "conjugate-by-automorphism" })?;
            if moved {
                table.insert(ctx, perm);
            }
        }
        let gate = Gate { shift: Arc::clone(&self.shift), start: support.0, len, table };
        Ok(gate.minimize_support())
    }

    /// Conjugation by another gate on the same support family:
    /// `by^{-1} . self . by`.
    pub fn conjugate_by_gate(&self, by: &Gate) -> Result<Gate> {
        by.inverse().compose(self)?.compose(by)
    }

    /// Shrinks the support while the induced map stays expressible; the
    /// result is a minimal interval (no uniqueness claim).
    pub fn minimize_support(&self) -> Gate {
        let mut cur = self.clone();
        loop {
            if cur.len <= 1 {
                return cur;
            }
            if let Some(next) = cur.try_shrink(true) {
                cur = next;
                continue;
            }
            if let Some(next) = cur.try_shrink(false) {
                cur = next;
                continue;
            }
            return cur;
        }
    }

    fn try_shrink(&self, left: bool) -> Option<Gate> {
        let new_len = self.len - 1;
        let new_start = if left { self.start + 1 } else { self.start };
        // candidate inner table, keyed by inner context
        let mut inner: BTreeMap<Context, BTreeMap<Vec<EdgeId>, Vec<EdgeId>>> = BTreeMap::new();
        for ctx in self.shift.contexts_with_fillings(self.len) {
            let perm = self.context_perm(ctx);
            let fillings = self.shift.enumerate_paths(ctx, self.len);
            for (i, f) in fillings.iter().enumerate() {
                let img = &fillings[perm.apply(i as u32) as usize];
                let (f_in, img_in, boundary_fixed) = if left {
                    (&f[1..], &img[1..], f[0] == img[0])
                } else {
                    (&f[..f.len() - 1], &img[..img.len() - 1], f[f.len() - 1] == img[img.len() - 1])
                };
                if !boundary_fixed {
                    return None;
                }
                let ictx = Context {
                    left: self.shift.path_source(f_in),
                    right: self.shift.path_target(f_in),
                };
                let entry = inner.entry(ictx).or_default();
                match entry.get(f_in) {
                    Some(prev) if prev.as_slice() != img_in => return None,
                    Some(_) => {}
                    None => {
                        entry.insert(f_in.to_vec(), img_in.to_vec());
                    }
                }
            }
        }
        let mut table = BTreeMap::new();
        for (ctx, map) in inner {
            let fillings = self.shift.enumerate_paths(ctx, new_len);
            let mut images = Vec::with_capacity(fillings.len());
            for f in &fillings {
                let img = map.get(f).unwrap_or(f);
                let oi = fillings.binary_search_by(|x| x.as_slice().cmp(img)).ok()? as u32;
                images.push(oi);
            }
            let perm = Perm::from_images(images).ok()?;
            if !perm.is_identity() {
                table.insert(ctx, perm);
            }
        }
        Some(Gate { shift: Arc::clone(&self.shift), start: new_start, len: new_len, table })
    }

    /// Equality of the induced global maps, decided by rebasing to the union
    /// support.
    pub fn same_action(&self, other: &Gate) -> Result<bool> {
        if self.shift != other.shift {
            return Err(Error::ShiftMismatch);
        }
        let (s1, e1) = self.support();
        let (s2, e2) = other.support();
        let support = (s1.min(s2), e1.max(e2));
        let a = self.rebase(support)?;
        let b = other.rebase(support)?;
        Ok(a.table == b.table)
    }
}

/// The commutator `[f, g] = f^{-1} g^{-1} f g` of an invertible automaton
/// and a gate, itself a gate.
pub fn commutator_gate(f: &CellularAutomaton, g: &Gate) -> Result<Gate> {
    let finv = f.invert(crate::DEFAULT_INVERSE_RADIUS).map_err(|_| Error::NotInvertible)?;
    commutator_gate_with_inverse(f, &finv, g)
}

pub fn commutator_gate_with_inverse(
    f: &CellularAutomaton,
    finv: &CellularAutomaton,
    g: &Gate,
) -> Result<Gate> {
    let conj = g.inverse().conjugate_by_with_inverse(f, finv)?;
    conj.compose(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{cg2, chi_gate, full2};

    fn cg2_ctx(shift: &EdgeShiftPresentation, l: &str, r: &str) -> Context {
        Context { left: shift.vertex_id(l).unwrap(), right: shift.vertex_id(r).unwrap() }
    }

    /// Path through vertex word, e.g. "aab" -> edges aa, ab.
    fn vw(shift: &EdgeShiftPresentation, word: &str) -> Vec<EdgeId> {
        let chars: Vec<String> = word.chars().map(|c| c.to_string()).collect();
        chars
            .windows(2)
            .map(|w| shift.edge_id(&format!("{}{}", w[0], w[1])).unwrap())
            .collect()
    }

    #[test]
    fn chi_matches_cycle_notation() {
        let (shift, chi) = chi_gate();
        // (aaa aba): applying chi to vertex word a.a.a gives a.b.a
        let pat = PathPattern { base: 0, edges: vw(&shift, "aaa") };
        let img = chi.apply_to_pattern(&pat, None).unwrap();
        assert_eq!(img.edges, vw(&shift, "aba"));
        // (baa): b.a.a is fixed
        let pat = PathPattern { base: 0, edges: vw(&shift, "baa") };
        let img = chi.apply_to_pattern(&pat, None).unwrap();
        assert_eq!(img.edges, vw(&shift, "baa"));
        // (aab abb)
        let pat = PathPattern { base: 0, edges: vw(&shift, "aab") };
        let img = chi.apply_to_pattern(&pat, None).unwrap();
        assert_eq!(img.edges, vw(&shift, "abb"));
    }

    #[test]
    fn empty_table_is_identity() {
        let shift = cg2();
        let g = Gate::from_table(Arc::clone(&shift), (0, 1), &BTreeMap::new()).unwrap();
        assert!(g.is_identity());
        let pat = PathPattern { base: 0, edges: vw(&shift, "aab") };
        assert_eq!(g.apply_to_pattern(&pat, None).unwrap(), pat);
    }

    #[test]
    fn endpoint_mismatch_rejected() {
        let shift = cg2();
        let mut table = BTreeMap::new();
        table.insert(
            cg2_ctx(&shift, "a", "b"),
            vec![(vw(&shift, "aab"), vw(&shift, "aba"))],
        );
        assert!(matches!(
            Gate::from_table(Arc::clone(&shift), (0, 1), &table),
            Err(Error::EndpointMismatch { .. })
        ));
    }

    #[test]
    fn chi_is_involution() {
        let (_, chi) = chi_gate();
        let sq = chi.compose(&chi).unwrap();
        assert!(sq.is_identity());
        let inv = chi.compose(&chi.inverse()).unwrap();
        assert!(inv.is_identity());
    }

    #[test]
    fn translate_is_an_action() {
        let (_, chi) = chi_gate();
        assert_eq!(chi.translate(1).translate(-1), chi);
        assert_eq!(chi.translate(2).translate(3), chi.translate(5));
    }

    #[test]
    fn rebase_examples() {
        let (shift, chi) = chi_gate();
        let wide = chi.rebase((0, 2)).unwrap();
        // context (a, d): two disjoint transpositions; (b, d): identity
        for d in ["a", "b"] {
            let ctx = cg2_ctx(&shift, "a", d);
            let p = wide.context_perm(ctx);
            assert_eq!(p.cycle_type(), vec![2, 2]);
            let ctx = cg2_ctx(&shift, "b", d);
            assert!(wide.context_perm(ctx).is_identity());
        }
        // identity rebases to identity
        let id = Gate::identity(Arc::clone(&shift), (0, 1));
        assert!(id.rebase((-2, 3)).unwrap().is_identity());
        // too small
        assert!(matches!(chi.rebase((0, 0)), Err(Error::SupportTooSmall(..))));
    }

    #[test]
    fn rebase_preserves_global_map() {
        let (shift, chi) = chi_gate();
        let wide = chi.rebase((-1, 2)).unwrap();
        for ctx in shift.contexts_with_fillings(6) {
            for f in shift.enumerate_paths(ctx, 6) {
                let pat = PathPattern { base: -2, edges: f };
                let a = chi.apply_to_pattern(&pat, None).unwrap();
                let b = wide.apply_to_pattern(&pat, None).unwrap();
                assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn commutation_examples() {
        let (_, chi) = chi_gate();
        assert!(chi.commutes(&chi.translate(2)).unwrap());
        assert!(!chi.commutes(&chi.translate(1)).unwrap());
        let id = Gate::identity(Arc::clone(chi.shift()), (0, 0));
        assert!(chi.commutes(&id).unwrap());
    }

    #[test]
    fn non_commuting_witness_is_aaaa() {
        let (shift, chi) = chi_gate();
        let (ctx, path) = chi.commutation_witness(&chi.translate(1)).unwrap().unwrap();
        // witness path covers [-1, 3]; the interesting part is vertex word aaaa
        assert_eq!(shift.vertex_name(ctx.left).len(), 1);
        assert_eq!(path.len(), 5);
    }

    #[test]
    fn minimize_support_returns_to_core() {
        let (_, chi) = chi_gate();
        let wide = chi.rebase((-2, 3)).unwrap();
        let min = wide.minimize_support();
        assert_eq!(min.support(), (0, 1));
        assert!(min.same_action(&chi).unwrap());
    }

    #[test]
    fn apply_to_config_swaps_middle() {
        let (shift, chi) = chi_gate();
        // all-a configuration of period 2
        let cfg = shift.config_from_names(&["aa".into(), "aa".into()]).unwrap();
        let out = chi.apply_to_config(&cfg, 0).unwrap();
        assert_eq!(shift.edge_names(out.edges()), vec!["ab", "ba"]);
    }

    #[test]
    fn bitflip_on_full2() {
        let shift = full2();
        let v = shift.vertex_id("v").unwrap();
        let mut table = BTreeMap::new();
        table.insert(
            Context { left: v, right: v },
            vec![
                (vec![shift.edge_id("0").unwrap()], vec![shift.edge_id("1").unwrap()]),
                (vec![shift.edge_id("1").unwrap()], vec![shift.edge_id("0").unwrap()]),
            ],
        );
        let flip = Gate::from_table(Arc::clone(&shift), (0, 0), &table).unwrap();
        let cfg = shift.config_from_names(&["0".into()]).unwrap();
        let out = flip.apply_to_config(&cfg, 0).unwrap();
        assert_eq!(shift.edge_names(out.edges()), vec!["1"]);
    }
}
