//! Edge shifts: one-dimensional SFTs presented by finite directed
//! multigraphs.
//!
//! A presentation carries a vertex set, an edge list sorted lexicographically
//! by edge id (this order is the canonical order of everything downstream:
//! paths, fillings, permutation tables), and the derived adjacency count
//! matrix `M` with `M[a][b]` the number of edges from `a` to `b`.
//!
//! Configurations are bi-infinite edge sequences with matching endpoints.
//! Edges sit at integer coordinates and vertices between them, so an interval
//! hole of edges is flanked by a vertex on each side; a [`Context`] is that
//! boundary vertex pair, and the fillings of a hole of length `n` in context
//! `(a, b)` are exactly the paths of length `n` from `a` to `b`.

use crate::error::{Error, Result};
use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub u32);

/// The boundary vertex pair of an interval hole.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Context {
    pub left: VertexId,
    pub right: VertexId,
}

/// Unvalidated graph input, as read from JSON.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawGraph {
    pub vertices: Vec<String>,
    pub edges: Vec<RawEdge>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawEdge {
    pub id: String,
    pub src: String,
    pub dst: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct EdgeRec {
    name: String,
    src: VertexId,
    dst: VertexId,
}

/// A validated edge-shift presentation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeShiftPresentation {
    vertex_names: Vec<String>,
    edges: Vec<EdgeRec>,
    /// out_edges[v] lists edge indices with source v, ascending.
    out_edges: Vec<Vec<EdgeId>>,
    in_degree: Vec<u32>,
    matrix: Vec<Vec<u64>>,
}

/// A finite pattern: a path of edges anchored at an integer coordinate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathPattern {
    pub base: i64,
    pub edges: Vec<EdgeId>,
}

impl PathPattern {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn end(&self) -> i64 {
        self.base + self.edges.len() as i64 - 1
    }
}

/// A bi-infinite periodic point, stored as one period of edges forming a
/// closed path.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PeriodicConfiguration {
    edges: Vec<EdgeId>,
}

impl PeriodicConfiguration {
    pub fn period(&self) -> u32 {
        self.edges.len() as u32
    }

    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    /// Edge at an arbitrary coordinate.
    pub fn edge_at(&self, i: i64) -> EdgeId {
        let n = self.edges.len() as i64;
        self.edges[i.rem_euclid(n) as usize]
    }

    /// Re-present the same configuration with period multiplied by `k`.
    pub fn extend_period(&self, k: u32) -> PeriodicConfiguration {
        assert!(k >= 1);
        let mut edges = Vec::with_capacity(self.edges.len() * k as usize);
        for _ in 0..k {
            edges.extend_from_slice(&self.edges);
        }
        PeriodicConfiguration { edges }
    }

    /// The window `[start, start+len)` as a pattern.
    pub fn window(&self, start: i64, len: usize) -> PathPattern {
        let edges = (0..len as i64).map(|k| self.edge_at(start + k)).collect();
        PathPattern { base: start, edges }
    }
}

/// Validates a raw graph into a presentation.
///
/// With `trim = false` a non-essential graph (some vertex of in- or
/// out-degree zero) is rejected; with `trim = true` offending vertices are
/// deleted iteratively and validation succeeds if a nonempty essential
/// subgraph remains.
pub fn validate_presentation(raw: &RawGraph, trim: bool) -> Result<EdgeShiftPresentation> {
    let mut vertex_index: HashMap<&str, u32> = HashMap::new();
    for v in &raw.vertices {
        if vertex_index.insert(v.as_str(), vertex_index.len() as u32).is_some() {
            return Err(Error::DuplicateVertexId(v.clone()));
        }
    }
    let mut seen_edges: HashMap<&str, ()> = HashMap::new();
    for e in &raw.edges {
        if seen_edges.insert(e.id.as_str(), ()).is_some() {
            return Err(Error::DuplicateEdgeId(e.id.clone()));
        }
    }

    let mut edges: Vec<EdgeRec> = Vec::with_capacity(raw.edges.len());
    for e in &raw.edges {
        let src = *vertex_index.get(e.src.as_str()).ok_or_else(|| Error::DanglingEdge {
            edge: e.id.clone(),
            vertex: e.src.clone(),
        })?;
        let dst = *vertex_index.get(e.dst.as_str()).ok_or_else(|| Error::DanglingEdge {
            edge: e.id.clone(),
            vertex: e.dst.clone(),
        })?;
        edges.push(EdgeRec { name: e.id.clone(), src: VertexId(src), dst: VertexId(dst) });
    }

    let mut vertices: Vec<String> = raw.vertices.clone();
    loop {
        let nv = vertices.len();
        let mut out = vec![0u32; nv];
        let mut inc = vec![0u32; nv];
        for e in &edges {
            out[e.src.0 as usize] += 1;
            inc[e.dst.0 as usize] += 1;
        }
        let bad: Vec<usize> =
            (0..nv).filter(|&v| out[v] == 0 || inc[v] == 0).collect();
        if bad.is_empty() {
            break;
        }
        if !trim {
            return Err(Error::NonEssential {
                vertices: bad.iter().map(|&v| vertices[v].clone()).collect(),
            });
        }
        let keep: Vec<bool> = (0..nv).map(|v| !bad.contains(&v)).collect();
        let mut remap = vec![u32::MAX; nv];
        let mut next = 0u32;
        let mut new_vertices = Vec::new();
        for v in 0..nv {
            if keep[v] {
                remap[v] = next;
                next += 1;
                new_vertices.push(vertices[v].clone());
            }
        }
        if new_vertices.is_empty() {
            return Err(Error::EmptyGraph);
        }
        edges.retain(|e| keep[e.src.0 as usize] && keep[e.dst.0 as usize]);
        for e in &mut edges {
            e.src = VertexId(remap[e.src.0 as usize]);
            e.dst = VertexId(remap[e.dst.0 as usize]);
        }
        vertices = new_vertices;
    }
    if vertices.is_empty() || edges.is_empty() {
        return Err(Error::EmptyGraph);
    }

    edges.sort_by(|a, b| a.name.cmp(&b.name));
    let nv = vertices.len();
    let mut matrix = vec![vec![0u64; nv]; nv];
    let mut out_edges = vec![Vec::new(); nv];
    let mut in_degree = vec![0u32; nv];
    for (i, e) in edges.iter().enumerate() {
        matrix[e.src.0 as usize][e.dst.0 as usize] += 1;
        out_edges[e.src.0 as usize].push(EdgeId(i as u32));
        in_degree[e.dst.0 as usize] += 1;
    }
    Ok(EdgeShiftPresentation { vertex_names: vertices, edges, out_edges, in_degree, matrix })
}

impl EdgeShiftPresentation {
    pub fn vertex_count(&self) -> usize {
        self.vertex_names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn matrix(&self) -> &Vec<Vec<u64>> {
        &self.matrix
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertex_names[v.0 as usize]
    }

    pub fn vertex_id(&self, name: &str) -> Result<VertexId> {
        self.vertex_names
            .iter()
            .position(|n| n == name)
            .map(|i| VertexId(i as u32))
            .ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    pub fn edge_name(&self, e: EdgeId) -> &str {
        &self.edges[e.0 as usize].name
    }

    pub fn edge_id(&self, name: &str) -> Result<EdgeId> {
        self.edges
            .binary_search_by(|rec| rec.name.as_str().cmp(name))
            .map(|i| EdgeId(i as u32))
            .map_err(|_| Error::UnknownEdge(name.to_string()))
    }

    pub fn edge_source(&self, e: EdgeId) -> VertexId {
        self.edges[e.0 as usize].src
    }

    pub fn edge_target(&self, e: EdgeId) -> VertexId {
        self.edges[e.0 as usize].dst
    }

    pub fn out_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.out_edges[v.0 as usize]
    }

    pub fn edge_names(&self, path: &[EdgeId]) -> Vec<String> {
        path.iter().map(|&e| self.edge_name(e).to_string()).collect()
    }

    pub fn is_valid_path(&self, path: &[EdgeId]) -> bool {
        path.windows(2).all(|w| self.edge_target(w[0]) == self.edge_source(w[1]))
    }

    pub fn path_source(&self, path: &[EdgeId]) -> VertexId {
        self.edge_source(path[0])
    }

    pub fn path_target(&self, path: &[EdgeId]) -> VertexId {
        self.edge_target(path[path.len() - 1])
    }

    /// All paths of length `n` from `ctx.left` to `ctx.right`, in canonical
    /// (lexicographic by edge id) order. The empty sequence is a valid result.
    pub fn enumerate_paths(&self, ctx: Context, n: u32) -> Vec<Vec<EdgeId>> {
        assert!(n >= 1, "path length must be positive");
        let mut out = Vec::new();
        let mut stack: Vec<EdgeId> = Vec::with_capacity(n as usize);
        self.dfs_paths(ctx.left, ctx.right, n, &mut stack, &mut out);
        out
    }

    fn dfs_paths(
        &self,
        cur: VertexId,
        goal: VertexId,
        remaining: u32,
        stack: &mut Vec<EdgeId>,
        out: &mut Vec<Vec<EdgeId>>,
    ) {
        if remaining == 0 {
            if cur == goal {
                out.push(stack.clone());
            }
            return;
        }
        for &e in self.out_edges(cur) {
            stack.push(e);
            self.dfs_paths(self.edge_target(e), goal, remaining - 1, stack, out);
            stack.pop();
        }
    }

    /// `(M^n)[a][b]`, computed by matrix power.
    pub fn path_count(&self, ctx: Context, n: u32) -> u64 {
        let p = mat_pow(&self.matrix, n);
        p[ctx.left.0 as usize][ctx.right.0 as usize]
    }

    /// Contexts with a nonempty filling set for holes of length `n`,
    /// ascending.
    pub fn contexts_with_fillings(&self, n: u32) -> Vec<Context> {
        let p = mat_pow(&self.matrix, n);
        let mut out = Vec::new();
        for a in 0..self.vertex_count() {
            for b in 0..self.vertex_count() {
                if p[a][b] > 0 {
                    out.push(Context { left: VertexId(a as u32), right: VertexId(b as u32) });
                }
            }
        }
        out
    }

    /// Primitivity of `M`: returns the least `m` with `M^m` entrywise
    /// positive, searching up to the Wielandt bound `|V|^2 - 2|V| + 2`.
    pub fn is_mixing(&self) -> Option<u32> {
        let nv = self.vertex_count();
        let bound = (nv * nv).saturating_sub(2 * nv) + 2;
        let mut p: Vec<Vec<bool>> =
            self.matrix.iter().map(|r| r.iter().map(|&x| x > 0).collect()).collect();
        for m in 1..=bound as u32 {
            if p.iter().all(|r| r.iter().all(|&x| x)) {
                return Some(m);
            }
            p = bool_mul(&p, &self.matrix);
        }
        if p.iter().all(|r| r.iter().all(|&x| x)) {
            return Some(bound as u32 + 1);
        }
        None
    }

    /// Least `n` with `M^n = 0 (mod 2)`, so that every context has an even
    /// number of fillings for holes of length `n`. `None` when `M mod 2` is
    /// not nilpotent; the nilpotency index of a `|V| x |V|` matrix over a
    /// field is at most `|V|`, so the scan stops there.
    pub fn has_even_fillings(&self) -> Option<u32> {
        let m2: Vec<Vec<u8>> =
            self.matrix.iter().map(|r| r.iter().map(|&x| (x % 2) as u8).collect()).collect();
        let mut p = m2.clone();
        for n in 1..=self.vertex_count() as u32 {
            if p.iter().all(|r| r.iter().all(|&x| x == 0)) {
                return Some(n);
            }
            p = mod2_mul(&p, &m2);
        }
        None
    }

    /// `M mod 2` as a GF(2) matrix.
    pub fn matrix_mod2(&self) -> Vec<Vec<u8>> {
        self.matrix.iter().map(|r| r.iter().map(|&x| (x % 2) as u8).collect()).collect()
    }

    /// Higher-block presentation of `(X, sigma^n)` with overlap `c`:
    /// vertices are paths of length `c` (original vertices when `c = 0`),
    /// edges are paths of length `n + c`, with source the initial `c`-prefix
    /// and target the terminal `c`-suffix.
    pub fn block_presentation(self: &Arc<Self>, n: u32, c: u32) -> (Arc<Self>, BlockRecode) {
        assert!(n >= 1);
        let vertices: Vec<String> = if c == 0 {
            self.vertex_names.clone()
        } else {
            self.all_paths(c).iter().map(|p| path_label(self, p)).collect()
        };
        let block_paths = self.all_paths(n + c);
        let raw_edges: Vec<RawEdge> = block_paths
            .iter()
            .map(|p| {
                let (src, dst) = if c == 0 {
                    (
                        self.vertex_name(self.path_source(p)).to_string(),
                        self.vertex_name(self.path_target(p)).to_string(),
                    )
                } else {
                    (
                        path_label(self, &p[..c as usize]),
                        path_label(self, &p[(p.len() - c as usize)..]),
                    )
                };
                RawEdge { id: path_label(self, p), src, dst }
            })
            .collect();
        let raw = RawGraph { vertices, edges: raw_edges };
        let blocked = Arc::new(
            validate_presentation(&raw, false).expect("block presentation is always essential"),
        );
        // Edge ids of the blocked presentation sort by label; recover the
        // underlying paths in that order.
        let mut by_label: HashMap<String, Vec<EdgeId>> = HashMap::new();
        for p in block_paths {
            by_label.insert(path_label(self, &p), p);
        }
        let block_edge_paths: Vec<Vec<EdgeId>> = (0..blocked.edge_count())
            .map(|i| by_label.remove(blocked.edge_name(EdgeId(i as u32))).unwrap())
            .collect();
        let mut path_to_block = HashMap::new();
        for (i, p) in block_edge_paths.iter().enumerate() {
            path_to_block.insert(p.clone(), EdgeId(i as u32));
        }
        let recode = BlockRecode {
            original: Arc::clone(self),
            blocked: Arc::clone(&blocked),
            n,
            c,
            block_edge_paths,
            path_to_block,
        };
        (blocked, recode)
    }

    /// All paths of length `n`, canonical order.
    pub fn all_paths(&self, n: u32) -> Vec<Vec<EdgeId>> {
        let mut out = Vec::new();
        for a in 0..self.vertex_count() {
            for b in 0..self.vertex_count() {
                let ctx = Context { left: VertexId(a as u32), right: VertexId(b as u32) };
                out.extend(self.enumerate_paths(ctx, n));
            }
        }
        out.sort();
        out
    }

    /// Closes a path into a periodic configuration by appending a shortest
    /// return path (lexicographically least among shortest). `None` when the
    /// end vertex cannot reach the start vertex.
    pub fn close_into_cycle(&self, path: &[EdgeId]) -> Option<PeriodicConfiguration> {
        assert!(!path.is_empty());
        let start = self.path_source(path);
        let end = self.path_target(path);
        let ret = self.shortest_path(end, start)?;
        let mut edges = path.to_vec();
        edges.extend(ret);
        Some(PeriodicConfiguration { edges })
    }

    /// Shortest path between vertices by BFS, lexicographically least among
    /// shortest; the empty path when `from == to`.
    pub fn shortest_path(&self, from: VertexId, to: VertexId) -> Option<Vec<EdgeId>> {
        if from == to {
            return Some(Vec::new());
        }
        let mut parent: Vec<Option<(VertexId, EdgeId)>> = vec![None; self.vertex_count()];
        let mut seen = vec![false; self.vertex_count()];
        seen[from.0 as usize] = true;
        let mut queue = VecDeque::new();
        queue.push_back(from);
        while let Some(v) = queue.pop_front() {
            for &e in self.out_edges(v) {
                let w = self.edge_target(e);
                if !seen[w.0 as usize] {
                    seen[w.0 as usize] = true;
                    parent[w.0 as usize] = Some((v, e));
                    if w == to {
                        let mut rev = Vec::new();
                        let mut cur = to;
                        while cur != from {
                            let (pv, pe) = parent[cur.0 as usize].unwrap();
                            rev.push(pe);
                            cur = pv;
                        }
                        rev.reverse();
                        return Some(rev);
                    }
                    queue.push_back(w);
                }
            }
        }
        None
    }

    /// Builds a periodic configuration from named edges.
    pub fn config_from_names(&self, names: &[String]) -> Result<PeriodicConfiguration> {
        let edges: Vec<EdgeId> =
            names.iter().map(|n| self.edge_id(n)).collect::<Result<_>>()?;
        self.config_from_edges(edges)
    }

    pub fn config_from_edges(&self, edges: Vec<EdgeId>) -> Result<PeriodicConfiguration> {
        if edges.is_empty() || !self.is_valid_path(&edges) {
            return Err(Error::InvalidPath(self.edge_names(&edges)));
        }
        if self.path_target(&edges) != self.path_source(&edges) {
            return Err(Error::InvalidPath(self.edge_names(&edges)));
        }
        Ok(PeriodicConfiguration { edges })
    }

    /// Lexicographically least periodic configuration (least edge closed
    /// into a cycle).
    pub fn least_periodic_config(&self) -> PeriodicConfiguration {
        self.close_into_cycle(&[EdgeId(0)])
            .expect("essential graph walks into a cycle")
    }
}

fn path_label(shift: &EdgeShiftPresentation, path: &[EdgeId]) -> String {
    serde_json::to_string(&shift.edge_names(path)).unwrap()
}

/// Mutually inverse recode maps attached to a block presentation.
#[derive(Debug, Clone)]
pub struct BlockRecode {
    pub original: Arc<EdgeShiftPresentation>,
    pub blocked: Arc<EdgeShiftPresentation>,
    pub n: u32,
    pub c: u32,
    block_edge_paths: Vec<Vec<EdgeId>>,
    path_to_block: HashMap<Vec<EdgeId>, EdgeId>,
}

impl BlockRecode {
    pub fn block_edge_path(&self, e: EdgeId) -> &[EdgeId] {
        &self.block_edge_paths[e.0 as usize]
    }

    pub fn block_of_path(&self, path: &[EdgeId]) -> Option<EdgeId> {
        self.path_to_block.get(path).copied()
    }

    /// Original configuration -> block configuration. The period must be a
    /// multiple of `n`.
    pub fn config_to_blocks(&self, cfg: &PeriodicConfiguration) -> Result<PeriodicConfiguration> {
        let period = cfg.period();
        if period % self.n != 0 {
            return Err(Error::PeriodMismatch { lattice: self.n, config: period });
        }
        let blocks = period / self.n;
        let mut edges = Vec::with_capacity(blocks as usize);
        for i in 0..blocks {
            let window = cfg.window((i * self.n) as i64, (self.n + self.c) as usize);
            let block = self.block_of_path(&window.edges).ok_or_else(|| {
                Error::InvalidPath(self.original.edge_names(&window.edges))
            })?;
            edges.push(block);
        }
        self.blocked.config_from_edges(edges)
    }

    /// Block configuration -> original configuration.
    pub fn blocks_to_config(&self, cfg: &PeriodicConfiguration) -> Result<PeriodicConfiguration> {
        let mut edges = Vec::with_capacity((cfg.period() * self.n) as usize);
        for &b in cfg.edges() {
            edges.extend_from_slice(&self.block_edge_path(b)[..self.n as usize]);
        }
        self.original.config_from_edges(edges)
    }

    /// Original pattern -> block pattern. The base must be `n`-aligned and
    /// the length of the form `k*n + c` with `k >= 1`.
    pub fn pattern_to_blocks(&self, pat: &PathPattern) -> Result<PathPattern> {
        let n = self.n as i64;
        let c = self.c as i64;
        let len = pat.edges.len() as i64;
        if pat.base % n != 0 || len < n + c || (len - c) % n != 0 {
            return Err(Error::SupportNotCovered);
        }
        let k = (len - c) / n;
        let mut edges = Vec::with_capacity(k as usize);
        for i in 0..k {
            let s = (i * n) as usize;
            let e = s + (self.n + self.c) as usize;
            let block = self.block_of_path(&pat.edges[s..e]).ok_or_else(|| {
                Error::InvalidPath(self.original.edge_names(&pat.edges[s..e]))
            })?;
            edges.push(block);
        }
        Ok(PathPattern { base: pat.base / n, edges })
    }

    /// Block pattern -> original pattern.
    pub fn blocks_to_pattern(&self, pat: &PathPattern) -> Result<PathPattern> {
        if pat.edges.is_empty() {
            return Err(Error::SupportNotCovered);
        }
        let mut edges: Vec<EdgeId> = Vec::new();
        for (i, &b) in pat.edges.iter().enumerate() {
            let p = self.block_edge_path(b);
            if i + 1 == pat.edges.len() {
                edges.extend_from_slice(p);
            } else {
                edges.extend_from_slice(&p[..self.n as usize]);
            }
        }
        if !self.original.is_valid_path(&edges) {
            return Err(Error::InvalidPath(self.original.edge_names(&edges)));
        }
        Ok(PathPattern { base: pat.base * self.n as i64, edges })
    }
}

pub(crate) fn mat_pow(m: &[Vec<u64>], n: u32) -> Vec<Vec<u64>> {
    let dim = m.len();
    let mut acc: Vec<Vec<u64>> =
        (0..dim).map(|i| (0..dim).map(|j| u64::from(i == j)).collect()).collect();
    for _ in 0..n {
        acc = mat_mul(&acc, m);
    }
    acc
}

pub(crate) fn mat_mul(a: &[Vec<u64>], b: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let dim = a.len();
    let mut out = vec![vec![0u64; dim]; dim];
    for i in 0..dim {
        for k in 0..dim {
            if a[i][k] == 0 {
                continue;
            }
            for j in 0..dim {
                out[i][j] = out[i][j].saturating_add(a[i][k].saturating_mul(b[k][j]));
            }
        }
    }
    out
}

fn bool_mul(a: &[Vec<bool>], m: &[Vec<u64>]) -> Vec<Vec<bool>> {
    let dim = a.len();
    let mut out = vec![vec![false; dim]; dim];
    for i in 0..dim {
        for k in 0..dim {
            if a[i][k] {
                for j in 0..dim {
                    if m[k][j] > 0 {
                        out[i][j] = true;
                    }
                }
            }
        }
    }
    out
}

pub(crate) fn mod2_mul(a: &[Vec<u8>], b: &[Vec<u8>]) -> Vec<Vec<u8>> {
    let dim = a.len();
    let mut out = vec![vec![0u8; dim]; dim];
    for i in 0..dim {
        for k in 0..dim {
            if a[i][k] == 1 {
                for j in 0..dim {
                    out[i][j] ^= b[k][j];
                }
            }
        }
    }
    out
}

pub(crate) fn mat_is_zero(a: &[Vec<u8>]) -> bool {
    a.iter().all(|r| r.iter().all(|&x| x == 0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{cg2, full2, gm, two_cycle};

    #[test]
    fn full2_valid() {
        let s = full2();
        assert_eq!(s.matrix(), &vec![vec![2]]);
    }

    #[test]
    fn cg2_valid() {
        let s = cg2();
        assert_eq!(s.matrix(), &vec![vec![1, 1], vec![1, 1]]);
    }

    #[test]
    fn non_essential_rejected() {
        let raw = RawGraph {
            vertices: vec!["a".into(), "b".into()],
            edges: vec![RawEdge { id: "e".into(), src: "a".into(), dst: "b".into() }],
        };
        // b has out-degree 0 and a has in-degree 0.
        match validate_presentation(&raw, false) {
            Err(Error::NonEssential { vertices }) => {
                assert_eq!(vertices, vec!["a".to_string(), "b".to_string()])
            }
            other => panic!("expected NonEssential, got {other:?}"),
        }
        assert!(matches!(validate_presentation(&raw, true), Err(Error::EmptyGraph)));
    }

    #[test]
    fn trim_keeps_essential_part() {
        let raw = RawGraph {
            vertices: vec!["a".into(), "b".into()],
            edges: vec![
                RawEdge { id: "loop".into(), src: "a".into(), dst: "a".into() },
                RawEdge { id: "tail".into(), src: "a".into(), dst: "b".into() },
            ],
        };
        let s = validate_presentation(&raw, true).unwrap();
        assert_eq!(s.vertex_count(), 1);
        assert_eq!(s.edge_count(), 1);
    }

    #[test]
    fn dangling_edge_rejected() {
        let raw = RawGraph {
            vertices: vec!["a".into()],
            edges: vec![RawEdge { id: "e".into(), src: "a".into(), dst: "zz".into() }],
        };
        assert!(matches!(validate_presentation(&raw, false), Err(Error::DanglingEdge { .. })));
    }

    #[test]
    fn path_enumeration_matches_pins() {
        let cg2 = cg2();
        let a = cg2.vertex_id("a").unwrap();
        let b = cg2.vertex_id("b").unwrap();
        let paths = cg2.enumerate_paths(Context { left: a, right: b }, 2);
        // (M^2)_{ab} = 2: vertex words a.a.b and a.b.b.
        assert_eq!(paths.len(), 2);
        assert_eq!(cg2.path_count(Context { left: a, right: b }, 2), 2);

        let full2 = full2();
        let v = full2.vertex_id("v").unwrap();
        assert_eq!(full2.enumerate_paths(Context { left: v, right: v }, 3).len(), 8);

        let gm = gm();
        let two = gm.vertex_id("2").unwrap();
        assert!(gm.enumerate_paths(Context { left: two, right: two }, 1).is_empty());
    }

    #[test]
    fn counts_match_matrix_powers() {
        for s in [full2(), cg2(), gm()] {
            for n in 1..=6u32 {
                for a in 0..s.vertex_count() {
                    for b in 0..s.vertex_count() {
                        let ctx = Context { left: VertexId(a as u32), right: VertexId(b as u32) };
                        assert_eq!(
                            s.enumerate_paths(ctx, n).len() as u64,
                            s.path_count(ctx, n),
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn mixing_pins() {
        assert_eq!(full2().is_mixing(), Some(1));
        assert_eq!(gm().is_mixing(), Some(2));
        assert_eq!(two_cycle().is_mixing(), None);
    }

    #[test]
    fn even_fillings_pins() {
        assert_eq!(full2().has_even_fillings(), Some(1));
        assert_eq!(cg2().has_even_fillings(), Some(2));
        assert_eq!(gm().has_even_fillings(), None);
    }

    #[test]
    fn block_presentation_pins() {
        let full2 = full2();
        let (b, _) = full2.block_presentation(2, 0);
        assert_eq!(b.vertex_count(), 1);
        assert_eq!(b.edge_count(), 4);

        let gm = gm();
        let (b, _) = gm.block_presentation(1, 1);
        assert_eq!(b.vertex_count(), 3);
        assert_eq!(b.edge_count(), 5);

        let cg2 = cg2();
        let (b, _) = cg2.block_presentation(1, 0);
        assert_eq!(b.vertex_count(), 2);
        assert_eq!(b.edge_count(), 4);
        assert_eq!(b.matrix(), cg2.matrix());
    }

    #[test]
    fn block_recode_roundtrip() {
        for (shift, n, c) in
            [(cg2(), 2u32, 0u32), (cg2(), 2, 1), (gm(), 3, 1), (full2(), 2, 2)]
        {
            let (_, recode) = shift.block_presentation(n, c);
            // every periodic configuration of period <= 12 (aligned to n)
            let mut period = n;
            while period <= 12 {
                for cfg in all_configs(&shift, period) {
                    let blocked = recode.config_to_blocks(&cfg).unwrap();
                    let back = recode.blocks_to_config(&blocked).unwrap();
                    assert_eq!(back, cfg);
                }
                period += n;
            }
        }
    }

    fn all_configs(shift: &EdgeShiftPresentation, period: u32) -> Vec<PeriodicConfiguration> {
        shift
            .all_paths(period)
            .into_iter()
            .filter(|p| shift.path_source(p) == shift.path_target(p))
            .map(|p| shift.config_from_edges(p).unwrap())
            .collect()
    }
}
