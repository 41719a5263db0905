//! Cones Δₙ(G), generalized cones Δ_{H,h}(G), the join, and the explicit
//! homomorphisms relating cones of different heights.
//!
//! Δₙ(G) has vertex set (V(G) × {0..n−1}) ∪ {⋆}: n layers of G over a base
//! layer 0, with (x,i) ~ (y,j) iff xy ∈ E(G) and (|i−j| = 1 or i = j = 0),
//! and the apex ⋆ adjacent to the whole top layer. Δ₁(G) adds a universal
//! vertex; Δ₂(G) is the Mycielskian.
//!
//! Δ_{H,h}(G) glues one such cone of height h(v) per vertex v of a pattern
//! graph H along a single shared base copy of G, and joins apexes of copies
//! u, v whenever uv ∈ E(H). A copy with h(v) = 1 contributes only its apex,
//! adjacent to every base vertex; with h ≡ 1 the whole construction is the
//! join of G and H.
//!
//! Vertex numbering is canonical and documented: the base block in G order,
//! then the copies in H order (layers ascending, G order within a layer),
//! then the apexes in H order. Certificates and file output rely on it.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::graph::{complete, parse_fields, Graph};
use crate::{Error, Result};

/// Structured identity of a cone-graph vertex.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum ConeLabel {
    /// Vertex `x` of the shared base copy of G (layer 0 of every copy).
    Base(usize),
    /// Vertex `(x, layer)` of copy `copy`, `1 <= layer <= h(copy) - 1`.
    Inner { x: usize, layer: usize, copy: usize },
    /// Apex of copy `copy`.
    Apex(usize),
}

impl ConeLabel {
    /// The label's text form, as used in cone files: `B <x>`,
    /// `I <x> <layer> <copy>` or `A <v>`.
    pub fn code(&self) -> String {
        match *self {
            ConeLabel::Base(x) => format!("B {x}"),
            ConeLabel::Inner { x, layer, copy } => format!("I {x} {layer} {copy}"),
            ConeLabel::Apex(v) => format!("A {v}"),
        }
    }
}

/// A generalized cone together with its labelling and the data it was built
/// from.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ConeGraph {
    graph: Graph,
    labels: Vec<ConeLabel>,
    index: BTreeMap<ConeLabel, usize>,
    base: Graph,
    pattern: Graph,
    heights: Vec<usize>,
}

impl ConeGraph {
    /// The underlying plain graph.
    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    /// The base graph G.
    pub fn base(&self) -> &Graph {
        &self.base
    }

    /// The pattern graph H.
    pub fn pattern(&self) -> &Graph {
        &self.pattern
    }

    /// Heights h(v), one per pattern vertex.
    pub fn heights(&self) -> &[usize] {
        &self.heights
    }

    /// Label of each vertex, in vertex order.
    pub fn labels(&self) -> &[ConeLabel] {
        &self.labels
    }

    pub fn label(&self, vertex: usize) -> ConeLabel {
        self.labels[vertex]
    }

    /// Vertex index carrying `label`, if it exists in this cone.
    pub fn vertex(&self, label: ConeLabel) -> Option<usize> {
        self.index.get(&label).copied()
    }

    pub fn base_vertex(&self, x: usize) -> Option<usize> {
        self.vertex(ConeLabel::Base(x))
    }

    pub fn inner_vertex(&self, x: usize, layer: usize, copy: usize) -> Option<usize> {
        self.vertex(ConeLabel::Inner { x, layer, copy })
    }

    pub fn apex_vertex(&self, copy: usize) -> Option<usize> {
        self.vertex(ConeLabel::Apex(copy))
    }
}

fn check_cone_inputs(g: &Graph, h: &Graph, heights: &[usize]) -> Result<()> {
    if g.vertex_count() == 0 || h.vertex_count() == 0 {
        return Err(Error::InvalidParameter("cone needs nonempty base and pattern".into()));
    }
    if !g.is_loop_free() || !h.is_loop_free() {
        return Err(Error::InvalidParameter("cone needs loop-free base and pattern".into()));
    }
    if heights.len() != h.vertex_count() {
        return Err(Error::InvalidParameter(format!(
            "need one height per pattern vertex: got {} heights for {} vertices",
            heights.len(),
            h.vertex_count()
        )));
    }
    if let Some(v) = heights.iter().position(|&k| k == 0) {
        return Err(Error::InvalidParameter(format!("height of copy {v} must be >= 1")));
    }
    Ok(())
}

/// Builds Δ_{H,h}(G).
pub fn generalized_cone(g: &Graph, h: &Graph, heights: &[usize]) -> Result<ConeGraph> {
    check_cone_inputs(g, h, heights)?;
    let (ng, nh) = (g.vertex_count(), h.vertex_count());

    let mut labels = Vec::new();
    for x in 0..ng {
        labels.push(ConeLabel::Base(x));
    }
    for (copy, &height) in heights.iter().enumerate() {
        for layer in 1..height {
            for x in 0..ng {
                labels.push(ConeLabel::Inner { x, layer, copy });
            }
        }
    }
    for copy in 0..nh {
        labels.push(ConeLabel::Apex(copy));
    }
    let index: BTreeMap<ConeLabel, usize> =
        labels.iter().enumerate().map(|(i, &l)| (l, i)).collect();
    debug_assert_eq!(index.len(), labels.len());

    let at = |label: ConeLabel| index[&label];
    let mut graph = Graph::new(labels.len());
    for (x, y) in g.edges() {
        graph.add_edge(at(ConeLabel::Base(x)), at(ConeLabel::Base(y)))?;
    }
    for (copy, &height) in heights.iter().enumerate() {
        let top = height - 1;
        if top == 0 {
            for x in 0..ng {
                graph.add_edge(at(ConeLabel::Base(x)), at(ConeLabel::Apex(copy)))?;
            }
            continue;
        }
        for (x, y) in g.edges() {
            graph.add_edge(
                at(ConeLabel::Base(x)),
                at(ConeLabel::Inner { x: y, layer: 1, copy }),
            )?;
            graph.add_edge(
                at(ConeLabel::Base(y)),
                at(ConeLabel::Inner { x, layer: 1, copy }),
            )?;
            for layer in 1..top {
                graph.add_edge(
                    at(ConeLabel::Inner { x, layer, copy }),
                    at(ConeLabel::Inner { x: y, layer: layer + 1, copy }),
                )?;
                graph.add_edge(
                    at(ConeLabel::Inner { x: y, layer, copy }),
                    at(ConeLabel::Inner { x, layer: layer + 1, copy }),
                )?;
            }
        }
        for x in 0..ng {
            graph.add_edge(
                at(ConeLabel::Inner { x, layer: top, copy }),
                at(ConeLabel::Apex(copy)),
            )?;
        }
    }
    for (u, v) in h.edges() {
        graph.add_edge(at(ConeLabel::Apex(u)), at(ConeLabel::Apex(v)))?;
    }

    let inner: usize = heights.iter().map(|&k| k - 1).sum();
    debug_assert_eq!(graph.vertex_count(), ng * (1 + inner) + nh);
    debug_assert!(graph.is_loop_free());

    Ok(ConeGraph { graph, labels, index, base: g.clone(), pattern: h.clone(), heights: heights.to_vec() })
}

/// Builds Δₙ(G) (pattern K₁, all copies in copy 0).
pub fn cone(g: &Graph, n: usize) -> Result<ConeGraph> {
    if n == 0 {
        return Err(Error::InvalidParameter("cone height must be >= 1".into()));
    }
    generalized_cone(g, &complete(1)?, &[n])
}

/// Join of two loop-free graphs: disjoint union plus all cross edges.
/// Vertices of `h` are shifted by `|V(g)|`.
pub fn join(g: &Graph, h: &Graph) -> Result<Graph> {
    if !g.is_loop_free() || !h.is_loop_free() {
        return Err(Error::InvalidParameter("join needs loop-free inputs".into()));
    }
    let (ng, nh) = (g.vertex_count(), h.vertex_count());
    let mut out = Graph::new(ng + nh);
    for (u, v) in g.edges() {
        out.add_edge(u, v)?;
    }
    for (u, v) in h.edges() {
        out.add_edge(ng + u, ng + v)?;
    }
    for x in 0..ng {
        for y in 0..nh {
            out.add_edge(x, ng + y)?;
        }
    }
    Ok(out)
}

/// A total vertex map between two graphs, claimed to preserve edges.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HomomorphismMap {
    pub source: Graph,
    pub target: Graph,
    pub map: Vec<usize>,
}

/// Outcome of checking a [`HomomorphismMap`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HomCheck {
    pub holds: bool,
    /// First source edge (u <= v order) whose image is not an edge.
    pub violating_edge: Option<(usize, usize)>,
}

/// Checks edge preservation (loops included). Errors if the map is not a
/// total function into the target's vertex range.
pub fn verify_homomorphism(hm: &HomomorphismMap) -> Result<HomCheck> {
    if hm.map.len() != hm.source.vertex_count() {
        return Err(Error::InvalidParameter(format!(
            "map covers {} of {} source vertices",
            hm.map.len(),
            hm.source.vertex_count()
        )));
    }
    if let Some(&img) = hm.map.iter().find(|&&img| img >= hm.target.vertex_count()) {
        return Err(Error::InvalidParameter(format!(
            "map image {img} outside target with {} vertices",
            hm.target.vertex_count()
        )));
    }
    for (u, v) in hm.source.edges() {
        if !hm.target.has_edge(hm.map[u], hm.map[v]) {
            return Ok(HomCheck { holds: false, violating_edge: Some((u, v)) });
        }
    }
    Ok(HomCheck { holds: true, violating_edge: None })
}

/// Composition `second ∘ first`; the intermediate graphs must be equal.
pub fn compose(first: &HomomorphismMap, second: &HomomorphismMap) -> Result<HomomorphismMap> {
    if first.target != second.source {
        return Err(Error::InvalidParameter(
            "composition needs first.target == second.source".into(),
        ));
    }
    Ok(HomomorphismMap {
        source: first.source.clone(),
        target: second.target.clone(),
        map: first.map.iter().map(|&v| second.map[v]).collect(),
    })
}

/// The height-reduction homomorphism Δ_{H,h′}(G) → Δ_{H,h}(G) for pointwise
/// h ≤ h′: in each copy v, layers sink by h′(v) − h(v), the lowest ones onto
/// the base; base and apexes are fixed. The returned map is verified.
pub fn shift_homomorphism(
    g: &Graph,
    h: &Graph,
    heights: &[usize],
    heights_prime: &[usize],
) -> Result<HomomorphismMap> {
    if heights.len() != heights_prime.len() {
        return Err(Error::InvalidParameter("height vectors differ in length".into()));
    }
    if let Some(v) = (0..heights.len()).find(|&v| heights[v] > heights_prime[v]) {
        return Err(Error::InvalidParameter(format!(
            "need h(v) <= h'(v) everywhere; copy {v} has {} > {}",
            heights[v], heights_prime[v]
        )));
    }
    let source = generalized_cone(g, h, heights_prime)?;
    let target = generalized_cone(g, h, heights)?;
    let map = source
        .labels()
        .iter()
        .map(|&label| {
            let image = match label {
                ConeLabel::Inner { x, layer, copy } => {
                    let drop = heights_prime[copy] - heights[copy];
                    if layer > drop {
                        ConeLabel::Inner { x, layer: layer - drop, copy }
                    } else {
                        ConeLabel::Base(x)
                    }
                }
                fixed => fixed,
            };
            target.vertex(image).expect("image label exists in target cone")
        })
        .collect();
    let hm = HomomorphismMap { source: source.graph.clone(), target: target.graph.clone(), map };
    let check = verify_homomorphism(&hm)?;
    assert!(check.holds, "height-reduction map must preserve edges: {:?}", check.violating_edge);
    Ok(hm)
}

/// The collapse homomorphism Δ_{K₂,(n,n+1)}(G) → Δₙ(G): identity on base and
/// on layers 1..n−1 of both copies, both apexes-or-top-layer onto ⋆, except
/// the apex of the taller copy, which lands on (x₀, n−1) for the fixed choice
/// x₀ = vertex 0. Needs an edge in G so that image neighbourhoods work out.
pub fn k2_collapse_homomorphism(g: &Graph, n: usize) -> Result<HomomorphismMap> {
    if n == 0 {
        return Err(Error::InvalidParameter("cone height must be >= 1".into()));
    }
    if g.edge_count() == 0 {
        return Err(Error::InvalidParameter(
            "collapse map needs a base graph with at least one edge".into(),
        ));
    }
    let source = generalized_cone(g, &complete(2)?, &[n, n + 1])?;
    let target = cone(g, n)?;
    let apex = target.apex_vertex(0).expect("cone has an apex");
    let map = source
        .labels()
        .iter()
        .map(|&label| match label {
            ConeLabel::Base(x) => target.base_vertex(x).expect("base vertex"),
            ConeLabel::Inner { x, layer, copy: _ } if layer < n => {
                target.inner_vertex(x, layer, 0).expect("inner vertex")
            }
            // Only the taller copy has a layer n; it sits over the apex.
            ConeLabel::Inner { .. } => apex,
            ConeLabel::Apex(0) => apex,
            ConeLabel::Apex(_) => {
                if n == 1 {
                    target.base_vertex(0).expect("base vertex")
                } else {
                    target.inner_vertex(0, n - 1, 0).expect("inner vertex")
                }
            }
        })
        .collect();
    let hm = HomomorphismMap { source: source.graph.clone(), target: target.graph.clone(), map };
    let check = verify_homomorphism(&hm)?;
    assert!(check.holds, "collapse map must preserve edges: {:?}", check.violating_edge);
    Ok(hm)
}

/// Lifts a pattern homomorphism `phi: H -> H'` to the uniform-height cones:
/// the returned map sends the cone over `(g, H)` into the cone over
/// `(g, H')`, fixing the base and every layer index and sending copy `v` to
/// copy `phi(v)`. The lift is verified before it is returned.
pub fn lift_pattern_homomorphism(
    g: &Graph,
    n: usize,
    phi: &HomomorphismMap,
) -> Result<HomomorphismMap> {
    let check = verify_homomorphism(phi)?;
    if !check.holds {
        return Err(Error::InvalidParameter(format!(
            "pattern map is not a homomorphism: it collapses edge {:?}",
            check.violating_edge
        )));
    }
    let source = generalized_cone(g, &phi.source, &vec![n; phi.source.vertex_count()])?;
    let target = generalized_cone(g, &phi.target, &vec![n; phi.target.vertex_count()])?;
    let map = source
        .labels()
        .iter()
        .map(|&label| {
            let image = match label {
                ConeLabel::Base(x) => ConeLabel::Base(x),
                ConeLabel::Inner { x, layer, copy } => {
                    ConeLabel::Inner { x, layer, copy: phi.map[copy] }
                }
                ConeLabel::Apex(v) => ConeLabel::Apex(phi.map[v]),
            };
            target.vertex(image).expect("image label exists in the target cone")
        })
        .collect();
    let hm = HomomorphismMap { source: source.graph.clone(), target: target.graph.clone(), map };
    let check = verify_homomorphism(&hm)?;
    assert!(check.holds, "lifted map must preserve edges: {:?}", check.violating_edge);
    Ok(hm)
}

/// Emits the graph text format followed by one label line per vertex:
/// `l <index> B <x>` / `l <index> I <x> <layer> <copy>` / `l <index> A <v>`.
pub fn serialize_cone(c: &ConeGraph) -> String {
    let mut out = crate::graph::serialize_graph(&c.graph);
    for (i, label) in c.labels.iter().enumerate() {
        writeln!(out, "l {i} {}", label.code()).unwrap();
    }
    out
}

/// Parses a cone file. Accepts exactly the canonical form this tool emits:
/// labels in the canonical numbering, and the edge set equal to the cone
/// rebuilt from the labelled base, pattern and heights.
pub fn parse_cone(text: &str) -> Result<ConeGraph> {
    let mut graph_lines = String::new();
    let mut labels: Vec<(usize, ConeLabel, usize)> = Vec::new(); // (index, label, line_no)
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let tokens: Vec<&str> = raw.split_whitespace().collect();
        if tokens.first() == Some(&"l") {
            let err = |msg: &str| Error::Parse(format!("line {line_no}: {msg}"));
            fn rest<'a>(tokens: &[&'a str]) -> Vec<&'a str> {
                std::iter::once(tokens[1]).chain(tokens[3..].iter().copied()).collect()
            }
            let (vertex, label) = match tokens.get(2) {
                Some(&"B") => {
                    let [i, x] = parse_fields(&rest(&tokens), line_no, "l <i> B <x>")?;
                    (i, ConeLabel::Base(x))
                }
                Some(&"I") => {
                    let [i, x, layer, copy] =
                        parse_fields(&rest(&tokens), line_no, "l <i> I <x> <layer> <copy>")?;
                    if layer == 0 {
                        return Err(err("inner layer must be >= 1"));
                    }
                    (i, ConeLabel::Inner { x, layer, copy })
                }
                Some(&"A") => {
                    let [i, v] = parse_fields(&rest(&tokens), line_no, "l <i> A <v>")?;
                    (i, ConeLabel::Apex(v))
                }
                _ => return Err(err("label kind must be B, I or A")),
            };
            labels.push((vertex, label, line_no));
        } else {
            graph_lines.push_str(raw);
            graph_lines.push('\n');
        }
    }
    let graph = crate::graph::parse_graph(&graph_lines)?;
    let n = graph.vertex_count();
    if labels.len() != n {
        return Err(Error::Parse(format!("{} label lines for {n} vertices", labels.len())));
    }

    let mut by_vertex: Vec<Option<ConeLabel>> = vec![None; n];
    for &(vertex, label, line_no) in &labels {
        if vertex >= n {
            return Err(Error::Parse(format!("line {line_no}: label index {vertex} out of range")));
        }
        if by_vertex[vertex].replace(label).is_some() {
            return Err(Error::Parse(format!("line {line_no}: duplicate label for vertex {vertex}")));
        }
    }
    let labels: Vec<ConeLabel> = by_vertex.into_iter().map(|l| l.expect("all set")).collect();

    // Recover (base, pattern, heights) from the labels.
    let ng = labels.iter().filter(|l| matches!(l, ConeLabel::Base(_))).count();
    let nh = labels.iter().filter(|l| matches!(l, ConeLabel::Apex(_))).count();
    if ng == 0 || nh == 0 {
        return Err(Error::Parse("cone needs Base and Apex labels".into()));
    }
    let mut heights = vec![1usize; nh];
    for label in &labels {
        if let ConeLabel::Inner { layer, copy, .. } = *label {
            if copy >= nh {
                return Err(Error::Parse(format!("inner label names copy {copy}, have {nh} apexes")));
            }
            heights[copy] = heights[copy].max(layer + 1);
        }
    }

    let find = |label: ConeLabel| -> Result<usize> {
        labels
            .iter()
            .position(|&l| l == label)
            .ok_or_else(|| Error::Parse(format!("missing label {label:?}")))
    };
    let mut base = Graph::new(ng);
    for x in 0..ng {
        for y in x + 1..ng {
            if graph.has_edge(find(ConeLabel::Base(x))?, find(ConeLabel::Base(y))?) {
                base.add_edge(x, y)?;
            }
        }
    }
    let mut pattern = Graph::new(nh);
    for u in 0..nh {
        for v in u + 1..nh {
            if graph.has_edge(find(ConeLabel::Apex(u))?, find(ConeLabel::Apex(v))?) {
                pattern.add_edge(u, v)?;
            }
        }
    }

    let rebuilt = generalized_cone(&base, &pattern, &heights)
        .map_err(|e| Error::Parse(format!("labels do not describe a cone: {e}")))?;
    if rebuilt.labels != labels {
        return Err(Error::Parse("labels are not in the canonical cone numbering".into()));
    }
    if rebuilt.graph != graph {
        return Err(Error::Parse("edge set differs from the cone the labels describe".into()));
    }
    Ok(rebuilt)
}

/// A parsed input that may or may not carry cone labels.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum LoadedGraph {
    Plain(Graph),
    Cone(ConeGraph),
}

impl LoadedGraph {
    /// The plain graph either way.
    pub fn graph(&self) -> &Graph {
        match self {
            LoadedGraph::Plain(g) => g,
            LoadedGraph::Cone(c) => c.graph(),
        }
    }
}

/// Parses graph text, as a cone file when label lines are present.
pub fn parse_graph_or_cone(text: &str) -> Result<LoadedGraph> {
    let has_labels = text
        .lines()
        .any(|line| line.split_whitespace().next() == Some("l"));
    if has_labels {
        Ok(LoadedGraph::Cone(parse_cone(text)?))
    } else {
        Ok(LoadedGraph::Plain(crate::graph::parse_graph(text)?))
    }
}

/// Parses a height list `v:k,v:k,...` against a pattern on `pattern_size`
/// vertices. Every pattern vertex must appear exactly once, vertices are
/// 0-based, and every height must be at least 1.
pub fn parse_heights(text: &str, pattern_size: usize) -> Result<Vec<usize>> {
    let mut heights: Vec<Option<usize>> = vec![None; pattern_size];
    for item in text.split(',') {
        let (vertex, height) = item
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("height entry {item:?} is not of the form v:k")))?;
        let v: usize = vertex
            .parse()
            .map_err(|_| Error::Parse(format!("bad vertex number in height entry {item:?}")))?;
        let k: usize = height
            .parse()
            .map_err(|_| Error::Parse(format!("bad height in height entry {item:?}")))?;
        if v >= pattern_size {
            return Err(Error::Parse(format!(
                "height entry {item:?}: vertex {v} out of range for a pattern on {pattern_size} vertices"
            )));
        }
        if k == 0 {
            return Err(Error::Parse(format!("height of vertex {v} must be at least 1")));
        }
        if heights[v].is_some() {
            return Err(Error::Parse(format!("vertex {v} listed twice in the height list")));
        }
        heights[v] = Some(k);
    }
    heights
        .into_iter()
        .enumerate()
        .map(|(v, h)| h.ok_or_else(|| Error::Parse(format!("no height given for vertex {v}"))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete, cycle, path_with_loop};

    fn counts(c: &ConeGraph) -> (usize, usize) {
        (c.graph().vertex_count(), c.graph().edge_count())
    }

    #[test]
    fn mycielskian_of_c5_is_groetzsch() {
        let c = cone(&cycle(5).unwrap(), 2).unwrap();
        assert_eq!(counts(&c), (11, 20));
        let g = c.graph();
        // Triangle-free, as the Grötzsch graph is.
        for (u, v) in g.edges() {
            for w in 0..g.vertex_count() {
                assert!(!(g.has_edge(u, w) && g.has_edge(v, w)), "triangle at {u} {v} {w}");
            }
        }
        assert_eq!(g.degree(c.apex_vertex(0).unwrap()), 5);
    }

    #[test]
    fn height_one_cone_adds_universal_vertex() {
        let c = cone(&cycle(5).unwrap(), 1).unwrap();
        assert_eq!(counts(&c), (6, 10));
        let apex = c.apex_vertex(0).unwrap();
        assert_eq!(c.graph().degree(apex), 5);
        for x in 0..5 {
            assert!(c.graph().has_edge(c.base_vertex(x).unwrap(), apex));
        }
    }

    #[test]
    fn cone_layers_of_k2() {
        let c = cone(&complete(2).unwrap(), 3).unwrap();
        assert_eq!(counts(&c), (7, 7));
        let g = c.graph();
        assert!(g.has_edge(c.base_vertex(0).unwrap(), c.base_vertex(1).unwrap()));
        for layer in 1..3 {
            let a = c.inner_vertex(0, layer, 0).unwrap();
            let b = c.inner_vertex(1, layer, 0).unwrap();
            assert!(!g.has_edge(a, b), "layer {layer} must be independent");
        }
        let apex = c.apex_vertex(0).unwrap();
        for x in 0..2 {
            assert!(g.has_edge(c.inner_vertex(x, 2, 0).unwrap(), apex));
            assert!(!g.has_edge(c.inner_vertex(x, 1, 0).unwrap(), apex));
        }
    }

    #[test]
    fn cone_count_identities() {
        for (g, name) in [
            (cycle(5).unwrap(), "C5"),
            (complete(3).unwrap(), "K3"),
            (complete(2).unwrap(), "K2"),
            (cycle(6).unwrap(), "C6"),
        ] {
            for n in 1..=4 {
                let c = cone(&g, n).unwrap();
                let (nv, ne) = counts(&c);
                assert_eq!(nv, n * g.vertex_count() + 1, "{name} n={n}");
                assert_eq!(ne, g.edge_count() * (2 * n - 1) + g.vertex_count(), "{name} n={n}");
            }
        }
    }

    #[test]
    fn generalized_cone_counts_and_apex_edges() {
        let c = generalized_cone(&cycle(5).unwrap(), &complete(2).unwrap(), &[3, 3]).unwrap();
        assert_eq!(c.graph().vertex_count(), 27);
        let (a0, a1) = (c.apex_vertex(0).unwrap(), c.apex_vertex(1).unwrap());
        assert!(c.graph().has_edge(a0, a1));
        assert_eq!(c.heights(), &[3, 3]);
    }

    #[test]
    fn pattern_k1_reduces_to_plain_cone() {
        let g = cycle(5).unwrap();
        for n in 1..=3 {
            let plain = cone(&g, n).unwrap();
            let general = generalized_cone(&g, &complete(1).unwrap(), &[n]).unwrap();
            assert_eq!(plain, general);
        }
    }

    #[test]
    fn height_one_everywhere_is_the_join() {
        let g = complete(3).unwrap();
        let h = complete(2).unwrap();
        let c = generalized_cone(&g, &h, &[1, 1]).unwrap();
        assert_eq!(c.graph(), &complete(5).unwrap());
        assert_eq!(c.graph(), &join(&g, &h).unwrap());
    }

    #[test]
    fn join_examples() {
        assert_eq!(join(&complete(3).unwrap(), &complete(2).unwrap()).unwrap(), complete(5).unwrap());
        let wheel = join(&cycle(5).unwrap(), &complete(1).unwrap()).unwrap();
        assert_eq!((wheel.vertex_count(), wheel.edge_count()), (6, 10));
        let c4 = join(&Graph::new(2), &Graph::new(2)).unwrap();
        assert_eq!((c4.vertex_count(), c4.edge_count()), (4, 4));
        assert!((0..4).all(|v| c4.degree(v) == 2));
        assert!(join(&path_with_loop(2).unwrap(), &complete(1).unwrap()).is_err());
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(cone(&path_with_loop(2).unwrap(), 2).is_err());
        assert!(cone(&cycle(5).unwrap(), 0).is_err());
        assert!(generalized_cone(&cycle(5).unwrap(), &complete(2).unwrap(), &[3]).is_err());
        assert!(generalized_cone(&cycle(5).unwrap(), &complete(2).unwrap(), &[3, 0]).is_err());
        assert!(generalized_cone(&cycle(5).unwrap(), &path_with_loop(1).unwrap(), &[3, 3]).is_err());
        assert!(generalized_cone(&Graph::new(0), &complete(1).unwrap(), &[]).is_err());
    }

    #[test]
    fn verify_homomorphism_examples() {
        let c5 = cycle(5).unwrap();
        let identity =
            HomomorphismMap { source: c5.clone(), target: c5.clone(), map: (0..5).collect() };
        assert!(verify_homomorphism(&identity).unwrap().holds);

        let mut looped = Graph::new(1);
        looped.add_edge(0, 0).unwrap();
        let to_loop = HomomorphismMap { source: c5.clone(), target: looped, map: vec![0; 5] };
        assert!(verify_homomorphism(&to_loop).unwrap().holds);

        let to_point = HomomorphismMap { source: c5.clone(), target: Graph::new(1), map: vec![0; 5] };
        let check = verify_homomorphism(&to_point).unwrap();
        assert!(!check.holds);
        assert_eq!(check.violating_edge, Some((0, 1)));

        let colouring = HomomorphismMap {
            source: c5.clone(),
            target: complete(3).unwrap(),
            map: vec![0, 1, 0, 1, 2],
        };
        assert!(verify_homomorphism(&colouring).unwrap().holds);

        let partial = HomomorphismMap { source: c5, target: complete(3).unwrap(), map: vec![0; 4] };
        assert!(verify_homomorphism(&partial).is_err());
    }

    #[test]
    fn shift_examples() {
        let c5 = cycle(5).unwrap();
        let k2 = complete(2).unwrap();
        let hm = shift_homomorphism(&c5, &k2, &[3, 3], &[3, 4]).unwrap();
        assert_eq!(hm.source.vertex_count(), 32);
        assert_eq!(hm.target.vertex_count(), 27);

        let source = generalized_cone(&c5, &k2, &[3, 4]).unwrap();
        let target = generalized_cone(&c5, &k2, &[3, 3]).unwrap();
        // Copy 1 sinks by one layer; copy 0 is untouched.
        for x in 0..5 {
            assert_eq!(
                hm.map[source.inner_vertex(x, 1, 1).unwrap()],
                target.base_vertex(x).unwrap()
            );
            assert_eq!(
                hm.map[source.inner_vertex(x, 3, 1).unwrap()],
                target.inner_vertex(x, 2, 1).unwrap()
            );
            assert_eq!(
                hm.map[source.inner_vertex(x, 2, 0).unwrap()],
                target.inner_vertex(x, 2, 0).unwrap()
            );
        }

        let same = shift_homomorphism(&c5, &k2, &[3, 3], &[3, 3]).unwrap();
        assert_eq!(same.map, (0..27).collect::<Vec<_>>());

        let twice = shift_homomorphism(&complete(2).unwrap(), &complete(1).unwrap(), &[2], &[4]);
        assert!(twice.is_ok());

        assert!(shift_homomorphism(&c5, &k2, &[3, 4], &[3, 3]).is_err());
        assert!(shift_homomorphism(&c5, &k2, &[3], &[3, 3]).is_err());
    }

    #[test]
    fn collapse_examples() {
        let hm = k2_collapse_homomorphism(&cycle(5).unwrap(), 3).unwrap();
        assert_eq!(hm.source.vertex_count(), 32);
        assert_eq!(hm.target.vertex_count(), 16);

        let tiny = k2_collapse_homomorphism(&complete(2).unwrap(), 1).unwrap();
        assert_eq!(tiny.target, complete(3).unwrap());

        assert!(k2_collapse_homomorphism(&Graph::new(3), 2).is_err());
    }

    #[test]
    fn composition_reaches_plain_cone() {
        let c5 = cycle(5).unwrap();
        let k2 = complete(2).unwrap();
        // Δ_{K₂,(2,4)}(C₅) → Δ_{K₂,(2,3)}(C₅) → Δ₂(C₅).
        let sink = shift_homomorphism(&c5, &k2, &[2, 3], &[2, 4]).unwrap();
        let collapse = k2_collapse_homomorphism(&c5, 2).unwrap();
        let total = compose(&sink, &collapse).unwrap();
        assert!(verify_homomorphism(&total).unwrap().holds);
        assert_eq!(total.target.vertex_count(), 11);

        let mismatched = compose(&collapse, &sink);
        assert!(mismatched.is_err());
    }

    #[test]
    fn cone_file_round_trip() {
        for c in [
            cone(&cycle(5).unwrap(), 2).unwrap(),
            generalized_cone(&complete(3).unwrap(), &complete(2).unwrap(), &[3, 1]).unwrap(),
        ] {
            let text = serialize_cone(&c);
            let back = parse_cone(&text).unwrap();
            assert_eq!(back, c);
            match parse_graph_or_cone(&text).unwrap() {
                LoadedGraph::Cone(parsed) => assert_eq!(parsed, c),
                LoadedGraph::Plain(_) => panic!("labelled file parsed as plain"),
            }
        }
        let plain = crate::graph::serialize_graph(&cycle(5).unwrap());
        assert!(matches!(parse_graph_or_cone(&plain).unwrap(), LoadedGraph::Plain(_)));
    }

    #[test]
    fn height_lists_parse_strictly() {
        assert_eq!(parse_heights("0:3,1:4", 2).unwrap(), vec![3, 4]);
        assert_eq!(parse_heights("1:4,0:3", 2).unwrap(), vec![3, 4]);
        assert_eq!(parse_heights("0:1", 1).unwrap(), vec![1]);
        for bad in [
            "",            // no entries
            "0:3",         // vertex 1 missing (against size 2)
            "0:3,0:4",     // duplicate vertex
            "0:3,1:0",     // zero height
            "0:3,2:4",     // vertex out of range
            "0:3,1",       // missing colon
            "a:3,1:4",     // junk vertex
            "0:b,1:4",     // junk height
            "0:3, 1:4",    // stray whitespace
            "0:3,,1:4",    // empty entry
        ] {
            assert!(parse_heights(bad, 2).is_err(), "accepted {bad:?}");
        }
    }

    #[test]
    fn pattern_homomorphism_lifts_to_cones() {
        // A 3-colouring of the 5-cycle, as a map into the triangle.
        let phi = HomomorphismMap {
            source: cycle(5).unwrap(),
            target: complete(3).unwrap(),
            map: vec![0, 1, 0, 1, 2],
        };
        let g = complete(2).unwrap();
        let lifted = lift_pattern_homomorphism(&g, 3, &phi).unwrap();
        let source = generalized_cone(&g, &phi.source, &[3; 5]).unwrap();
        let target = generalized_cone(&g, &phi.target, &[3; 3]).unwrap();
        assert_eq!(lifted.map.len(), source.graph().vertex_count());
        assert_eq!(lifted.target.vertex_count(), target.graph().vertex_count());
        // Base fixed, copies renamed through phi.
        assert_eq!(lifted.map[source.base_vertex(1).unwrap()], target.base_vertex(1).unwrap());
        assert_eq!(lifted.map[source.apex_vertex(4).unwrap()], target.apex_vertex(2).unwrap());
        assert_eq!(
            lifted.map[source.inner_vertex(0, 2, 3).unwrap()],
            target.inner_vertex(0, 2, 1).unwrap()
        );

        // A non-homomorphism is rejected before any lifting happens.
        let broken = HomomorphismMap {
            source: cycle(5).unwrap(),
            target: complete(3).unwrap(),
            map: vec![0, 0, 0, 0, 0],
        };
        assert!(matches!(
            lift_pattern_homomorphism(&g, 3, &broken),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn cone_parser_rejects_corrupted_files() {
        let good = serialize_cone(&cone(&complete(3).unwrap(), 2).unwrap());
        // Missing one label line.
        let mut lines: Vec<&str> = good.lines().collect();
        let dropped = lines.remove(lines.len() - 1);
        assert!(parse_cone(&lines.join("\n")).is_err());
        lines.push(dropped);

        // Duplicate label index.
        let duplicated = format!("{good}l 0 B 1\n");
        assert!(parse_cone(&duplicated).is_err());

        // Swapping two labels breaks the canonical numbering.
        let swapped = good.replace("l 0 B 0", "l 0 B 9");
        assert!(parse_cone(&swapped).is_err());

        // An extra edge breaks the rebuilt-cone equality.
        assert!(good.starts_with("p 7 12\n"), "unexpected header in {good:?}");
        let tampered = good.replace("p 7 12", "p 7 13") + "e 3 4\n";
        assert!(parse_cone(&tampered).is_err());
    }
}
