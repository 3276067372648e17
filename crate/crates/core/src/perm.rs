//! Finite permutations and the two group-theoretic search primitives the
//! gate layer relies on: writing an even permutation as a single commutator,
//! and certifying that the conjugation closure of a nontrivial permutation
//! under the alternating group reaches a 3-cycle.

use crate::error::{Error, Result};
use std::collections::{BTreeMap, HashMap, VecDeque};

/// A permutation of `{0, .., n-1}`, stored as its image vector.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Perm {
    map: Vec<u32>,
}

impl Perm {
    pub fn identity(n: usize) -> Perm {
        Perm { map: (0..n as u32).collect() }
    }

    pub fn from_images(map: Vec<u32>) -> Result<Perm> {
        let n = map.len();
        let mut seen = vec![false; n];
        for &x in &map {
            if x as usize >= n || seen[x as usize] {
                return Err(Error::NotBijective { left: String::new(), right: String::new() });
            }
            seen[x as usize] = true;
        }
        Ok(Perm { map })
    }

    pub fn degree(&self) -> usize {
        self.map.len()
    }

    pub fn apply(&self, x: u32) -> u32 {
        self.map[x as usize]
    }

    pub fn images(&self) -> &[u32] {
        &self.map
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    /// `self` after `other`: `(self * other)(x) = self(other(x))`.
    pub fn compose(&self, other: &Perm) -> Perm {
        assert_eq!(self.degree(), other.degree());
        Perm { map: other.map.iter().map(|&x| self.map[x as usize]).collect() }
    }

    pub fn inverse(&self) -> Perm {
        let mut map = vec![0u32; self.map.len()];
        for (i, &x) in self.map.iter().enumerate() {
            map[x as usize] = i as u32;
        }
        Perm { map }
    }

    /// `by^{-1} * self * by`.
    pub fn conjugate(&self, by: &Perm) -> Perm {
        by.inverse().compose(self).compose(by)
    }

    /// Commutator `[a, b] = a^{-1} b^{-1} a b`.
    pub fn commutator(a: &Perm, b: &Perm) -> Perm {
        a.inverse().compose(&b.inverse()).compose(a).compose(b)
    }

    pub fn three_cycle(n: usize, x: u32, y: u32, z: u32) -> Perm {
        let mut map: Vec<u32> = (0..n as u32).collect();
        map[x as usize] = y;
        map[y as usize] = z;
        map[z as usize] = x;
        Perm { map }
    }

    pub fn transposition(n: usize, x: u32, y: u32) -> Perm {
        let mut map: Vec<u32> = (0..n as u32).collect();
        map.swap(x as usize, y as usize);
        Perm { map }
    }

    /// Cycles of length >= 2, each starting at its least element, ordered by
    /// least element.
    pub fn cycles(&self) -> Vec<Vec<u32>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for i in 0..n {
            if seen[i] || self.map[i] == i as u32 {
                continue;
            }
            let mut cyc = vec![i as u32];
            seen[i] = true;
            let mut cur = self.map[i];
            while cur != i as u32 {
                seen[cur as usize] = true;
                cyc.push(cur);
                cur = self.map[cur as usize];
            }
            out.push(cyc);
        }
        out
    }

    /// Multiset of cycle lengths including fixed points, descending.
    pub fn cycle_type(&self) -> Vec<u32> {
        let mut lens: Vec<u32> = self.cycles().iter().map(|c| c.len() as u32).collect();
        let moved: u32 = lens.iter().sum();
        for _ in 0..(self.degree() as u32 - moved) {
            lens.push(1);
        }
        lens.sort_unstable_by(|a, b| b.cmp(a));
        lens
    }

    /// +1 for even, -1 for odd.
    pub fn sign(&self) -> i8 {
        let transpositions: usize = self.cycles().iter().map(|c| c.len() - 1).sum();
        if transpositions % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn is_three_cycle(&self) -> bool {
        let c = self.cycles();
        c.len() == 1 && c[0].len() == 3
    }

    pub fn moved_points(&self) -> Vec<u32> {
        (0..self.degree() as u32).filter(|&i| self.map[i as usize] != i).collect()
    }

    /// Number of cycles counting fixed points.
    fn cycle_count(&self) -> usize {
        self.cycles().len() + self.degree() - self.moved_points().len()
    }
}

/// A conjugator `r` with `q^r = target`, built by aligning the cycle
/// structures. Requires equal cycle types.
fn conjugator_between(q: &Perm, target: &Perm) -> Perm {
    let n = q.degree();
    let collect = |p: &Perm| -> Vec<Vec<u32>> {
        let mut cs = p.cycles();
        let moved: Vec<u32> = p.moved_points();
        for i in 0..n as u32 {
            if !moved.contains(&i) {
                cs.push(vec![i]);
            }
        }
        // longest first, ties by least element; fixed points trail in order
        cs.sort_by(|a, b| b.len().cmp(&a.len()).then(a[0].cmp(&b[0])));
        cs
    };
    let qc = collect(q);
    let tc = collect(target);
    // want q^r = target, i.e. relabeling a |-> r^{-1}(a) carries q's cycles
    // onto target's: r(target_pt) = q_pt
    let mut map = vec![u32::MAX; n];
    for (cq, ct) in qc.iter().zip(tc.iter()) {
        debug_assert_eq!(cq.len(), ct.len());
        for (aq, at) in cq.iter().zip(ct.iter()) {
            map[*at as usize] = *aq;
        }
    }
    Perm::from_images(map).expect("cycle alignment is a bijection")
}

/// Writes an even permutation `p` of at least 5 points as a single
/// commutator `[q, r] = q^{-1} r^{-1} q r`, verified before returning.
///
/// The construction finds a full cycle `q` with `q * p` again a full cycle
/// (two-full-cycle factorization), by starting from the canonical cycle and
/// repairing `q * p` with 3-cycle multiplications that merge cycles of the
/// product while keeping `q` a single cycle; `r` is then read off from the
/// cycle structures.
pub fn commutator_factor(p: &Perm) -> Result<(Perm, Perm)> {
    let n = p.degree();
    if n < 5 {
        return Err(Error::DomainTooSmall(n));
    }
    if p.sign() < 0 {
        return Err(Error::OddPermutation);
    }
    if p.is_identity() {
        return Ok((Perm::identity(n), Perm::identity(n)));
    }

    let full_cycle = |perm: &Perm| perm.cycle_count() == 1;
    let mut c = Perm {
        map: (0..n as u32).map(|i| (i + 1) % n as u32).collect(),
    };
    let mut d = c.compose(p);
    let mut guard = 0usize;
    while !full_cycle(&d) {
        guard += 1;
        if guard > n {
            // cannot happen for even p; fall through to the exhaustive scan
            break;
        }
        let cycles = d.cycles();
        let fixed: Vec<u32> = (0..n as u32).filter(|&i| d.apply(i) == i).collect();
        // units to merge: nontrivial cycles and fixed points
        let mut units: Vec<Vec<u32>> = cycles;
        for f in fixed {
            units.push(vec![f]);
        }
        units.sort_by_key(|u| u[0]);
        let mut found = None;
        'search: for x in units[0].iter().copied() {
            for unit in units.iter().skip(1) {
                for y in unit.iter().copied() {
                    for z in 0..n as u32 {
                        if z == x || z == y {
                            continue;
                        }
                        let tau = Perm::three_cycle(n, x, y, z);
                        let c2 = tau.compose(&c);
                        if !full_cycle(&c2) {
                            continue;
                        }
                        let d2 = tau.compose(&d);
                        if d2.cycle_count() == d.cycle_count() - 2 {
                            found = Some((c2, d2));
                            break 'search;
                        }
                    }
                }
            }
        }
        match found {
            Some((c2, d2)) => {
                c = c2;
                d = d2;
            }
            None => break,
        }
    }

    let (q, qp) = if full_cycle(&d) {
        (c.clone(), d.clone())
    } else {
        // Exhaustive fallback: scan q in lexicographic order for
        // cycle_type(q p) = cycle_type(q). Reached only if the merge search
        // stalls, which the acceptance suite shows it does not on 5..=7.
        let mut witness = None;
        let mut q = Perm::identity(n);
        loop {
            let qp = q.compose(p);
            if qp.cycle_type() == q.cycle_type() {
                witness = Some((q.clone(), qp));
                break;
            }
            if !next_perm(&mut q.map) {
                break;
            }
        }
        witness.ok_or(Error::BudgetExceeded { stage: "commutator-factor" })?
    };

    let r = conjugator_between(&q, &qp);
    let result = Perm::commutator(&q, &r);
    if &result != p {
        return Err(Error::VerificationFailed { stage: "commutator-factor" });
    }
    Ok((q, r))
}

fn next_perm(map: &mut [u32]) -> bool {
    let n = map.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && map[i - 1] >= map[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while map[j] <= map[i - 1] {
        j -= 1;
    }
    map.swap(i - 1, j);
    map[i..].reverse();
    true
}

/// One step of a closure certificate: conjugate the base permutation by
/// `conjugator` (an even permutation) and raise to `exp`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureStep {
    pub conjugator: Perm,
    pub exp: i8,
}

/// A verified expression of `target` (a 3-cycle) as an ordered product of
/// alternating-group conjugates of the base permutation and their inverses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureCertificate {
    pub base: Perm,
    pub target: Perm,
    pub steps: Vec<ClosureStep>,
}

impl ClosureCertificate {
    pub fn evaluate(&self) -> Perm {
        let n = self.base.degree();
        let mut acc = Perm::identity(n);
        for step in &self.steps {
            let t = self.base.conjugate(&step.conjugator);
            let t = if step.exp >= 0 { t } else { t.inverse() };
            acc = acc.compose(&t);
        }
        acc
    }
}

/// Orbit of `p` under conjugation by the alternating group, with one even
/// conjugator recorded per element. Deterministic BFS over the 3-cycle
/// generators `(0 1 k)`.
pub fn alt_conjugation_orbit(p: &Perm) -> BTreeMap<Perm, Perm> {
    let n = p.degree();
    let gens: Vec<Perm> = (2..n as u32)
        .flat_map(|k| {
            [Perm::three_cycle(n, 0, 1, k), Perm::three_cycle(n, 0, 1, k).inverse()]
        })
        .collect();
    let mut orbit: BTreeMap<Perm, Perm> = BTreeMap::new();
    orbit.insert(p.clone(), Perm::identity(n));
    let mut queue = VecDeque::from([p.clone()]);
    while let Some(cur) = queue.pop_front() {
        let conj = orbit.get(&cur).unwrap().clone();
        for g in &gens {
            let next = cur.conjugate(g);
            if !orbit.contains_key(&next) {
                orbit.insert(next.clone(), conj.compose(g));
                queue.push_back(next);
            }
        }
    }
    orbit
}

/// Certificate that the smallest subgroup containing `p` and invariant under
/// conjugation by `A_n` contains a 3-cycle (hence all of `A_n`), for
/// `n >= 5` and `p` not the identity.
///
/// Returns the shortest certificate found by breadth-first search over
/// products of orbit elements; when `p` is itself a 3-cycle the certificate
/// has length one. Ties inside a BFS layer resolve to the 3-cycle with
/// lexicographically least moved points.
pub fn alt_normal_closure(p: &Perm, budget: u64) -> Result<ClosureCertificate> {
    let n = p.degree();
    if n < 5 {
        return Err(Error::DomainTooSmall(n));
    }
    if p.is_identity() {
        return Err(Error::IdentityInput);
    }
    if p.is_three_cycle() {
        let cert = ClosureCertificate {
            base: p.clone(),
            target: p.clone(),
            steps: vec![ClosureStep { conjugator: Perm::identity(n), exp: 1 }],
        };
        debug_assert_eq!(cert.evaluate(), *p);
        return Ok(cert);
    }

    let orbit = alt_conjugation_orbit(p);
    // generator list: (value, conjugator, exp), ordered for determinism
    let mut gens: Vec<(Perm, Perm, i8)> = Vec::with_capacity(orbit.len() * 2);
    for (value, conj) in &orbit {
        gens.push((value.clone(), conj.clone(), 1));
    }
    for (value, conj) in &orbit {
        gens.push((value.inverse(), conj.clone(), -1));
    }

    // BFS over reachable products; parent pointers rebuild the word.
    // A seed's parent is None.
    let mut parent: HashMap<Perm, (Option<Perm>, usize)> = HashMap::new();
    let mut frontier: Vec<Perm> = Vec::new();
    let mut explored = 0u64;
    for (gi, (value, _, _)) in gens.iter().enumerate() {
        if !parent.contains_key(value) {
            parent.insert(value.clone(), (None, gi));
            frontier.push(value.clone());
        }
    }

    loop {
        frontier.sort();
        frontier.dedup();
        if let Some(tc) = best_three_cycle(&frontier) {
            let mut steps = Vec::new();
            let mut cur = tc.clone();
            loop {
                let (prev, gi) = parent.get(&cur).unwrap().clone();
                let (_, conj, exp) = &gens[gi];
                steps.push(ClosureStep { conjugator: conj.clone(), exp: *exp });
                match prev {
                    Some(p) => cur = p,
                    None => break,
                }
            }
            steps.reverse();
            let cert = ClosureCertificate { base: p.clone(), target: tc.clone(), steps };
            if &cert.evaluate() != tc {
                return Err(Error::VerificationFailed { stage: "an-closure" });
            }
            return Ok(cert);
        }
        let mut next_frontier = Vec::new();
        for cur in &frontier {
            for (gi, (value, _, _)) in gens.iter().enumerate() {
                explored += 1;
                if explored > budget {
                    return Err(Error::BudgetExceeded { stage: "an-closure" });
                }
                let next = cur.compose(value);
                if let std::collections::hash_map::Entry::Vacant(e) = parent.entry(next.clone()) {
                    e.insert((Some(cur.clone()), gi));
                    next_frontier.push(next);
                }
            }
        }
        if next_frontier.is_empty() {
            // closure exhausted without a 3-cycle: impossible for n >= 5
            return Err(Error::VerificationFailed { stage: "an-closure" });
        }
        frontier = next_frontier;
    }
}

fn best_three_cycle(layer: &[Perm]) -> Option<&Perm> {
    layer
        .iter()
        .filter(|p| p.is_three_cycle())
        .min_by(|a, b| a.moved_points().cmp(&b.moved_points()).then(a.images().cmp(b.images())))
}

/// Balanced closure word: expresses `target` as an ordered product of
/// `Alt`-conjugates `(base^{a_i})^{e_i}` whose exponents sum to zero. Used by
/// the normal-generation trace, where the zero sum makes the expression
/// vanish in every other context.
pub fn balanced_closure(target: &Perm, base: &Perm, budget: u64) -> Result<Vec<ClosureStep>> {
    let n = target.degree();
    if target.is_identity() {
        return Ok(Vec::new());
    }
    if base.is_identity() {
        return Err(Error::TrivialInput);
    }
    let orbit = alt_conjugation_orbit(base);
    let inv_orbit: BTreeMap<Perm, Perm> =
        orbit.iter().map(|(v, c)| (v.inverse(), c.clone())).collect();

    // depth 2: target = base^a * (base^b)^{-1}
    for (v, a) in &orbit {
        let w = v.inverse().compose(target);
        if let Some(b) = inv_orbit.get(&w) {
            let steps = vec![
                ClosureStep { conjugator: a.clone(), exp: 1 },
                ClosureStep { conjugator: b.clone(), exp: -1 },
            ];
            return Ok(steps);
        }
    }

    // general BFS over (product value, exponent balance)
    let gens: Vec<(Perm, Perm, i8)> = orbit
        .iter()
        .map(|(v, c)| (v.clone(), c.clone(), 1i8))
        .chain(inv_orbit.iter().map(|(v, c)| (v.clone(), c.clone(), -1i8)))
        .collect();
    let start = (Perm::identity(n), 0i32);
    let mut parent: HashMap<(Perm, i32), ((Perm, i32), usize)> = HashMap::new();
    let mut queue = VecDeque::from([start.clone()]);
    parent.insert(start.clone(), (start.clone(), usize::MAX));
    let mut explored = 0u64;
    while let Some(state) = queue.pop_front() {
        for (gi, (value, _, exp)) in gens.iter().enumerate() {
            explored += 1;
            if explored > budget {
                return Err(Error::BudgetExceeded { stage: "balanced-closure" });
            }
            let next = (state.0.compose(value), state.1 + i32::from(*exp));
            if next.1.unsigned_abs() > 8 {
                continue;
            }
            if parent.contains_key(&next) {
                continue;
            }
            parent.insert(next.clone(), (state.clone(), gi));
            if next.0 == *target && next.1 == 0 {
                let mut steps = Vec::new();
                let mut cur = next;
                while parent.get(&cur).unwrap().1 != usize::MAX {
                    let (prev, gi) = parent.get(&cur).unwrap().clone();
                    let (_, conj, exp) = &gens[gi];
                    steps.push(ClosureStep { conjugator: conj.clone(), exp: *exp });
                    cur = prev;
                }
                steps.reverse();
                return Ok(steps);
            }
            queue.push_back(next);
        }
    }
    Err(Error::BudgetExceeded { stage: "balanced-closure" })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(images: &[u32]) -> Perm {
        Perm::from_images(images.to_vec()).unwrap()
    }

    #[test]
    fn sign_and_cycles() {
        let p = perm(&[1, 0, 3, 2, 4]); // (01)(23)
        assert_eq!(p.sign(), 1);
        assert_eq!(p.cycle_type(), vec![2, 2, 1]);
        let t = perm(&[1, 2, 0, 3, 4]); // (012)
        assert_eq!(t.sign(), 1);
        assert!(t.is_three_cycle());
        let s = perm(&[1, 0, 2, 3, 4]);
        assert_eq!(s.sign(), -1);
    }

    #[test]
    fn commutator_factor_identity() {
        let id = Perm::identity(5);
        let (q, r) = commutator_factor(&id).unwrap();
        assert!(q.is_identity() && r.is_identity());
    }

    #[test]
    fn commutator_factor_three_cycle() {
        // (1 2 3) on 5 points, 0-indexed as (0 1 2)
        let p = perm(&[1, 2, 0, 3, 4]);
        let (q, r) = commutator_factor(&p).unwrap();
        assert_eq!(Perm::commutator(&q, &r), p);
    }

    #[test]
    fn commutator_factor_double_transposition() {
        let p = perm(&[1, 0, 3, 2, 4]);
        let (q, r) = commutator_factor(&p).unwrap();
        assert_eq!(Perm::commutator(&q, &r), p);
    }

    #[test]
    fn commutator_factor_rejects_odd_and_small() {
        let odd = perm(&[1, 0, 2, 3, 4]);
        assert!(matches!(commutator_factor(&odd), Err(Error::OddPermutation)));
        let small = Perm::identity(4);
        assert!(matches!(commutator_factor(&small), Err(Error::DomainTooSmall(4))));
    }

    #[test]
    fn commutator_factor_all_even_on_five_points() {
        let mut p = Perm::identity(5);
        loop {
            if p.sign() > 0 {
                let (q, r) = commutator_factor(&p).unwrap();
                assert_eq!(Perm::commutator(&q, &r), p);
            }
            if !next_perm(&mut p.map) {
                break;
            }
        }
    }

    #[test]
    fn closure_three_cycle_is_length_one() {
        let p = perm(&[1, 2, 0, 3, 4]);
        let cert = alt_normal_closure(&p, 1_000_000).unwrap();
        assert_eq!(cert.steps.len(), 1);
        assert_eq!(cert.target, p);
        assert_eq!(cert.evaluate(), cert.target);
    }

    #[test]
    fn closure_transposition() {
        let p = perm(&[1, 0, 2, 3, 4]);
        let cert = alt_normal_closure(&p, 1_000_000).unwrap();
        assert!(cert.target.is_three_cycle());
        assert_eq!(cert.evaluate(), cert.target);
        for step in &cert.steps {
            assert_eq!(step.conjugator.sign(), 1);
        }
    }

    #[test]
    fn closure_rejects_identity() {
        assert!(matches!(
            alt_normal_closure(&Perm::identity(5), 1000),
            Err(Error::IdentityInput)
        ));
    }

    #[test]
    fn balanced_closure_balances() {
        let base = perm(&[1, 0, 3, 2, 4]);
        let target = perm(&[0, 2, 1, 4, 3]); // same cycle type, A5-conjugate
        let steps = balanced_closure(&target, &base, 1_000_000).unwrap();
        assert_eq!(steps.iter().map(|s| i32::from(s.exp)).sum::<i32>(), 0);
        let mut acc = Perm::identity(5);
        for s in &steps {
            let t = base.conjugate(&s.conjugator);
            let t = if s.exp >= 0 { t } else { t.inverse() };
            acc = acc.compose(&t);
        }
        assert_eq!(acc, target);
    }
}
