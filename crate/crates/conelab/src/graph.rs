//! Finite undirected graphs with optional loops, plus the generators and the
//! text format used across the crate.
//!
//! Vertices are `0..n`. A loop is stored as self-adjacency, so `neighbors(v)`
//! yields `v` itself exactly when `v` carries a loop. Loops matter here:
//! adjacency in a map graph (see [`crate::chromatic`]) has looped vertices,
//! and a loop is what makes a map a homomorphism.
//!
//! Text format (one record per line, `#`-free, whitespace separated):
//! `c ...` comment, `p <n> <m>` header, then exactly `m` lines `e <u> <v>`
//! with `0 <= u, v < n`; `e v v` records a loop. Duplicate edges are
//! rejected so serialize → parse is exact.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::bitset::BitSet;
use crate::{Error, Result};

/// Undirected graph on vertices `0..n`, loops allowed.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Graph {
    adj: Vec<BTreeSet<usize>>,
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn new(n: usize) -> Graph {
        Graph { adj: vec![BTreeSet::new(); n] }
    }

    /// Graph with the given edge list; `(v, v)` entries become loops.
    pub fn with_edges(n: usize, edges: &[(usize, usize)]) -> Result<Graph> {
        let mut g = Graph::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    /// Number of edges; a loop counts once.
    pub fn edge_count(&self) -> usize {
        let endpoints: usize = self.adj.iter().map(|s| s.len()).sum();
        let loops = self.loop_count();
        (endpoints - loops) / 2 + loops
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.adj.len() {
            return Err(Error::InvalidParameter(format!(
                "vertex {v} out of range for graph on {} vertices",
                self.adj.len()
            )));
        }
        Ok(())
    }

    /// Inserts edge `{u, v}` (loop when `u == v`). Re-inserting is a no-op.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        self.adj[u].insert(v);
        self.adj[v].insert(u);
        Ok(())
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.adj.len() && self.adj[u].contains(&v)
    }

    pub fn has_loop(&self, v: usize) -> bool {
        self.has_edge(v, v)
    }

    pub fn is_loop_free(&self) -> bool {
        (0..self.vertex_count()).all(|v| !self.has_loop(v))
    }

    pub fn loop_count(&self) -> usize {
        (0..self.vertex_count()).filter(|&v| self.has_loop(v)).count()
    }

    /// Ascending neighbours of `v`; includes `v` itself iff `v` has a loop.
    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[v].iter().copied()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// All edges as ordered pairs `u <= v`, lexicographically sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.vertex_count() {
            for &v in self.adj[u].range(u..) {
                out.push((u, v));
            }
        }
        out
    }

    /// Subgraph induced on `vertices` (strictly ascending); vertex `i` of the
    /// result is `vertices[i]`.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> Result<Graph> {
        if !vertices.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidParameter(
                "induced subgraph needs strictly ascending vertices".into(),
            ));
        }
        if let Some(&last) = vertices.last() {
            self.check_vertex(last)?;
        }
        let mut g = Graph::new(vertices.len());
        for (i, &u) in vertices.iter().enumerate() {
            for (j, &v) in vertices.iter().enumerate().skip(i) {
                if self.has_edge(u, v) {
                    g.add_edge(i, j)?;
                }
            }
        }
        Ok(g)
    }

    /// Per-vertex adjacency as bitsets (loop bit included), for search kernels.
    pub(crate) fn adjacency_bitsets(&self) -> Vec<BitSet> {
        let n = self.vertex_count();
        (0..n)
            .map(|v| {
                let mut row = BitSet::new(n);
                for u in self.neighbors(v) {
                    row.insert(u);
                }
                row
            })
            .collect()
    }
}

/// Cycle `C_n`, `n >= 3`.
pub fn cycle(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!("cycle needs n >= 3, got {n}")));
    }
    let mut g = Graph::new(n);
    for i in 0..n {
        g.add_edge(i, (i + 1) % n)?;
    }
    Ok(g)
}

/// Complete graph `K_n`, `n >= 1`.
pub fn complete(n: usize) -> Result<Graph> {
    if n < 1 {
        return Err(Error::InvalidParameter("complete graph needs n >= 1".into()));
    }
    let mut g = Graph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            g.add_edge(u, v)?;
        }
    }
    Ok(g)
}

/// Path of length `n` (vertices `0..=n`) with a loop added at vertex 0,
/// `n >= 1`.
pub fn path_with_loop(n: usize) -> Result<Graph> {
    if n < 1 {
        return Err(Error::InvalidParameter("looped path needs n >= 1".into()));
    }
    let mut g = Graph::new(n + 1);
    g.add_edge(0, 0)?;
    for i in 0..n {
        g.add_edge(i, i + 1)?;
    }
    Ok(g)
}

/// Circulant graph: `i ~ i ± d (mod n)` for every gap `d`. Gaps must satisfy
/// `1 <= d <= n/2`; `C_7^2` is `circulant(7, &[1, 2])`.
pub fn circulant(n: usize, gaps: &[usize]) -> Result<Graph> {
    if n < 1 {
        return Err(Error::InvalidParameter("circulant needs n >= 1".into()));
    }
    if gaps.is_empty() {
        return Err(Error::InvalidParameter("circulant needs at least one gap".into()));
    }
    let mut g = Graph::new(n);
    for &d in gaps {
        if d == 0 || 2 * d > n {
            return Err(Error::InvalidParameter(format!(
                "circulant gap must satisfy 1 <= gap <= n/2, got {d} with n = {n}"
            )));
        }
        for i in 0..n {
            g.add_edge(i, (i + d) % n)?;
        }
    }
    Ok(g)
}

/// The `t`-element subsets of `{1, ..., s}` in colexicographic order (the
/// vertex order of [`kneser`]), each sorted ascending.
pub fn kneser_subsets(s: usize, t: usize) -> Result<Vec<Vec<usize>>> {
    if t < 1 || t > s || s > 60 {
        return Err(Error::InvalidParameter(format!(
            "subset parameters need 1 <= t <= s <= 60, got s = {s}, t = {t}"
        )));
    }
    let count = binomial(s, t).ok_or_else(|| {
        Error::InvalidParameter(format!("binomial({s}, {t}) overflows"))
    })?;
    if count > 1_000_000 {
        return Err(Error::InvalidParameter(format!(
            "binomial({s}, {t}) = {count} subsets exceeds the 1000000 bound"
        )));
    }
    // Gosper's hack walks masks of fixed popcount in increasing numeric
    // order, which is exactly colexicographic order on the subsets.
    let mut out = Vec::with_capacity(count as usize);
    let mut mask: u64 = (1u64 << t) - 1;
    let limit: u64 = 1u64 << s;
    while mask < limit {
        out.push((0..s).filter(|i| mask >> i & 1 == 1).map(|i| i + 1).collect());
        let c = mask & mask.wrapping_neg();
        let r = mask + c;
        mask = (((r ^ mask) >> 2) / c) | r;
        if c == 0 {
            break;
        }
    }
    debug_assert_eq!(out.len() as u64, count);
    Ok(out)
}

fn binomial(n: usize, k: usize) -> Option<u64> {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul((n - i) as u128)?;
        acc /= (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return None;
        }
    }
    Some(acc as u64)
}

/// Kneser graph `K(s, t)`: vertices are the `t`-subsets of `{1, ..., s}` in
/// [`kneser_subsets`] order, adjacent iff disjoint. `K(s, 1) = K_s`.
pub fn kneser(s: usize, t: usize) -> Result<Graph> {
    let subsets = kneser_subsets(s, t)?;
    let masks: Vec<u64> = subsets
        .iter()
        .map(|sub| sub.iter().fold(0u64, |m, &e| m | 1 << (e - 1)))
        .collect();
    let mut g = Graph::new(masks.len());
    for a in 0..masks.len() {
        for b in a + 1..masks.len() {
            if masks[a] & masks[b] == 0 {
                g.add_edge(a, b)?;
            }
        }
    }
    Ok(g)
}

/// Named generator dispatch used by the command line.
pub fn generate(family: &str, params: &[usize]) -> Result<Graph> {
    let arity = |want: usize| {
        if params.len() == want {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!(
                "family {family:?} takes {want} parameter(s), got {}",
                params.len()
            )))
        }
    };
    match family.replace('-', "_").as_str() {
        "cycle" => {
            arity(1)?;
            cycle(params[0])
        }
        "complete" => {
            arity(1)?;
            complete(params[0])
        }
        "path_with_loop" => {
            arity(1)?;
            path_with_loop(params[0])
        }
        "kneser" => {
            arity(2)?;
            kneser(params[0], params[1])
        }
        "circulant" => {
            if params.len() < 2 {
                return Err(Error::InvalidParameter(
                    "family \"circulant\" takes n followed by at least one gap".into(),
                ));
            }
            circulant(params[0], &params[1..])
        }
        other => Err(Error::InvalidParameter(format!(
            "unknown family {other:?}; known: cycle, complete, path_with_loop, kneser, circulant"
        ))),
    }
}

/// Categorical (tensor) product: `(x, y) ~ (x', y')` iff `x ~ x'` and
/// `y ~ y'`. Vertex `(x, y)` gets index `x * |V(h)| + y`; the returned map
/// lists `(x, y)` per product vertex.
pub fn direct_product(g: &Graph, h: &Graph) -> (Graph, Vec<(usize, usize)>) {
    let (ng, nh) = (g.vertex_count(), h.vertex_count());
    let mut p = Graph::new(ng * nh);
    let labels: Vec<(usize, usize)> =
        (0..ng * nh).map(|i| (i / nh, i % nh)).collect();
    let directed = |gr: &Graph| -> Vec<(usize, usize)> {
        let mut d = Vec::new();
        for (u, v) in gr.edges() {
            d.push((u, v));
            if u != v {
                d.push((v, u));
            }
        }
        d
    };
    for &(x, xp) in &directed(g) {
        for &(y, yp) in &directed(h) {
            p.add_edge(x * nh + y, xp * nh + yp).expect("product vertices in range");
        }
    }
    (p, labels)
}

/// Parses the plain text format (`c` / `p` / `e` lines).
pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut graph: Option<Graph> = None;
    let mut expected_edges = 0usize;
    let mut seen_edges = 0usize;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let err = |msg: String| Error::Parse(format!("line {line_no}: {msg}"));
        let tokens: Vec<&str> = raw.split_whitespace().collect();
        match tokens.first() {
            None => continue,
            Some(&"c") => continue,
            Some(&"p") => {
                if graph.is_some() {
                    return Err(err("duplicate p line".into()));
                }
                let [n, m] = parse_fields(&tokens[1..], line_no, "p <vertices> <edges>")?;
                graph = Some(Graph::new(n));
                expected_edges = m;
            }
            Some(&"e") => {
                let g = graph
                    .as_mut()
                    .ok_or_else(|| err("e line before p line".into()))?;
                if seen_edges == expected_edges {
                    return Err(err(format!("more than {expected_edges} e lines")));
                }
                let [u, v] = parse_fields(&tokens[1..], line_no, "e <u> <v>")?;
                // Repeated edges are merged silently; the e-line count must
                // still match the header.
                g.add_edge(u, v).map_err(|e| err(e.to_string()))?;
                seen_edges += 1;
            }
            Some(other) => {
                return Err(err(format!("unknown record {other:?} (expected c, p or e)")));
            }
        }
    }
    let g = graph.ok_or_else(|| Error::Parse("missing p line".into()))?;
    if seen_edges != expected_edges {
        return Err(Error::Parse(format!(
            "p line declares {expected_edges} edges but found {seen_edges}"
        )));
    }
    Ok(g)
}

pub(crate) fn parse_fields<const N: usize>(
    tokens: &[&str],
    line_no: usize,
    shape: &str,
) -> Result<[usize; N]> {
    let err = || Error::Parse(format!("line {line_no}: expected {shape}"));
    if tokens.len() != N {
        return Err(err());
    }
    let mut out = [0usize; N];
    for (slot, token) in out.iter_mut().zip(tokens) {
        *slot = token.parse().map_err(|_| err())?;
    }
    Ok(out)
}

/// Emits the text format; `parse_graph` of the output reproduces the graph.
pub fn serialize_graph(g: &Graph) -> String {
    let mut out = String::new();
    let edges = g.edges();
    writeln!(out, "p {} {}", g.vertex_count(), edges.len()).unwrap();
    for (u, v) in edges {
        writeln!(out, "e {u} {v}").unwrap();
    }
    out
}
