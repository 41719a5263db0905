//! Exact chromatic numbers, homomorphism search, and exponential graphs.
//!
//! `chromatic_number` certifies χ by exhausting a branch-and-bound search at
//! χ−1 colours, so the answer is a proof, not a heuristic. `find_homomorphism`
//! is a backtracking search with forward checking that either returns a
//! verified map, certifies non-existence, or reports an explicit node-cap
//! hit. The exponential graph K^G (maps V(G) → V(K), f ~ g iff every edge xy
//! of G has both f(x)g(y) and f(y)g(x) in E(K)) links cones to walks: a walk
//! of length n from a looped map to a constant map corresponds to a
//! homomorphism Δₙ(G) → K, and the two translation functions below make that
//! correspondence executable in both directions.

use crate::bitset::BitSet;
use crate::cones::{cone, ConeGraph, ConeLabel, HomomorphismMap};
use crate::graph::Graph;
use crate::{Error, Result};

/// Largest graph `chromatic_number` accepts by default (the search packs
/// adjacency into single machine words).
pub const DEFAULT_CHI_VERTEX_BOUND: usize = 64;

/// Default node budget for `find_homomorphism`.
pub const DEFAULT_HOM_NODE_CAP: u64 = 20_000_000;

/// Default bound on |V(K)|^|V(G)| for exponential-graph construction.
pub const DEFAULT_EXP_SIZE_BOUND: usize = 1_000_000;

/// An exact chromatic number with a witness colouring. Optimality is
/// certified by exhaustion: the search proved no (chi−1)-colouring exists.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ColouringResult {
    pub chi: usize,
    /// Proper colouring with colours `0..chi`.
    pub colouring: Vec<usize>,
    pub nodes_explored: u64,
}

pub fn chromatic_number(g: &Graph) -> Result<ColouringResult> {
    chromatic_number_with_bound(g, DEFAULT_CHI_VERTEX_BOUND)
}

pub fn chromatic_number_with_bound(g: &Graph, vertex_bound: usize) -> Result<ColouringResult> {
    if !g.is_loop_free() {
        return Err(Error::InvalidParameter(
            "chromatic number is undefined on graphs with loops".into(),
        ));
    }
    let n = g.vertex_count();
    if n > vertex_bound.min(64) {
        return Err(Error::CapExceeded(format!(
            "{n} vertices exceeds the exact-colouring bound of {}",
            vertex_bound.min(64)
        )));
    }
    if n == 0 {
        return Ok(ColouringResult { chi: 0, colouring: Vec::new(), nodes_explored: 0 });
    }
    let adj = word_adjacency(g);
    let clique = greedy_clique(&adj);
    let greedy = dsatur_greedy(&adj);
    let upper = greedy.iter().max().copied().unwrap_or(0) + 1;
    let lower = clique.len().max(1);

    let mut best = greedy;
    let mut chi = upper;
    let mut nodes = 0;
    while chi > lower {
        match colour_with(&adj, &clique, chi - 1, &mut nodes) {
            Some(colouring) => {
                chi -= 1;
                best = colouring;
            }
            // Exhausted: no (chi−1)-colouring exists, so chi is exact.
            None => break,
        }
    }
    debug_assert!(is_proper(g, &best));
    Ok(ColouringResult { chi, colouring: best, nodes_explored: nodes })
}

fn word_adjacency(g: &Graph) -> Vec<u64> {
    (0..g.vertex_count())
        .map(|v| g.neighbors(v).fold(0u64, |m, u| m | (1 << u)))
        .collect()
}

fn is_proper(g: &Graph, colouring: &[usize]) -> bool {
    colouring.len() == g.vertex_count()
        && g.edges().iter().all(|&(u, v)| u == v || colouring[u] != colouring[v])
}

/// Largest clique found by greedy extension from every seed vertex
/// (deterministic; a lower bound for χ).
fn greedy_clique(adj: &[u64]) -> Vec<usize> {
    let n = adj.len();
    let mut best: Vec<usize> = Vec::new();
    for seed in 0..n {
        let mut clique = vec![seed];
        let mut common = adj[seed];
        while common != 0 {
            // Candidate keeping the most extension room.
            let pick = iter_bits(common)
                .max_by_key(|&c| ((common & adj[c]).count_ones(), std::cmp::Reverse(c)))
                .unwrap();
            clique.push(pick);
            common &= adj[pick];
        }
        if clique.len() > best.len() {
            clique.sort_unstable();
            best = clique;
        }
    }
    best
}

fn iter_bits(mut word: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if word == 0 {
            None
        } else {
            let i = word.trailing_zeros() as usize;
            word &= word - 1;
            Some(i)
        }
    })
}

/// DSATUR greedy colouring: repeatedly colour the vertex seeing the most
/// distinct neighbour colours (ties → lowest index) with the least colour.
fn dsatur_greedy(adj: &[u64]) -> Vec<usize> {
    let n = adj.len();
    let mut colour = vec![usize::MAX; n];
    let mut neighbour_colours = vec![0u64; n];
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| colour[v] == usize::MAX)
            .max_by_key(|&v| (neighbour_colours[v].count_ones(), std::cmp::Reverse(v)))
            .unwrap();
        let c = (!neighbour_colours[v]).trailing_zeros() as usize;
        colour[v] = c;
        for u in iter_bits(adj[v]) {
            neighbour_colours[u] |= 1 << c;
        }
    }
    colour
}

/// Decision search: a proper k-colouring, or None after exhausting the
/// space. The seed clique is pre-coloured 0,1,2,… and fresh colours are
/// introduced in ascending order, both of which only discard relabellings.
/// Vertex choice: fewest remaining colours, ties → lowest index.
fn colour_with(adj: &[u64], clique: &[usize], k: usize, nodes: &mut u64) -> Option<Vec<usize>> {
    if clique.len() > k {
        return None;
    }
    let n = adj.len();
    let full = if k >= 64 { !0u64 } else { (1u64 << k) - 1 };
    let mut search = ColourSearch {
        adj,
        k,
        allowed: vec![full; n],
        colour: vec![usize::MAX; n],
        used: 0,
        remaining: n,
    };
    for &v in clique {
        let c = search.used;
        if !search.assign(v, c).0 {
            return None;
        }
    }
    if search.solve(nodes) {
        Some(search.colour)
    } else {
        None
    }
}

struct ColourSearch<'a> {
    adj: &'a [u64],
    k: usize,
    allowed: Vec<u64>,
    colour: Vec<usize>,
    used: usize,
    remaining: usize,
}

impl ColourSearch<'_> {
    /// Assigns colour c to v, pruning neighbours. Returns (ok, trail of
    /// vertices whose domain changed, fresh-colour flag).
    fn assign(&mut self, v: usize, c: usize) -> (bool, Vec<usize>, bool) {
        let bit = 1u64 << c;
        debug_assert!(self.allowed[v] & bit != 0 && self.colour[v] == usize::MAX);
        self.colour[v] = c;
        self.remaining -= 1;
        let fresh = c == self.used;
        if fresh {
            self.used += 1;
        }
        let mut trail = Vec::new();
        let mut ok = true;
        for u in iter_bits(self.adj[v]) {
            if self.colour[u] != usize::MAX || self.allowed[u] & bit == 0 {
                continue;
            }
            self.allowed[u] &= !bit;
            trail.push(u);
            if self.allowed[u] == 0 {
                ok = false;
                break;
            }
        }
        (ok, trail, fresh)
    }

    fn undo(&mut self, v: usize, c: usize, trail: Vec<usize>, fresh: bool) {
        for u in trail {
            self.allowed[u] |= 1 << c;
        }
        self.colour[v] = usize::MAX;
        self.remaining += 1;
        if fresh {
            self.used -= 1;
        }
    }

    fn solve(&mut self, nodes: &mut u64) -> bool {
        if self.remaining == 0 {
            return true;
        }
        let open = if self.used >= self.k { self.k } else { self.used + 1 };
        let open_mask = if open >= 64 { !0u64 } else { (1u64 << open) - 1 };
        let v = (0..self.adj.len())
            .filter(|&v| self.colour[v] == usize::MAX)
            .min_by_key(|&v| ((self.allowed[v] & open_mask).count_ones(), v))
            .unwrap();
        let candidates = self.allowed[v] & open_mask;
        for c in iter_bits(candidates) {
            *nodes += 1;
            let (ok, trail, fresh) = self.assign(v, c);
            if ok && self.solve(nodes) {
                return true;
            }
            self.undo(v, c, trail, fresh);
        }
        false
    }
}

/// Outcome of a homomorphism search.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum HomSearch {
    /// A verified map, vertex of the source → vertex of the target.
    Found(Vec<usize>),
    /// The whole space was exhausted: no homomorphism exists.
    NoneExhausted { nodes: u64 },
    /// Indeterminate: the node budget ran out first.
    CapExceeded { nodes: u64 },
}

/// Searches for a homomorphism source → target by backtracking over the
/// source vertices in reverse degeneracy order with forward checking.
pub fn find_homomorphism(source: &Graph, target: &Graph, node_cap: u64) -> Result<HomSearch> {
    let ng = source.vertex_count();
    let nk = target.vertex_count();
    if ng == 0 {
        return Ok(HomSearch::Found(Vec::new()));
    }
    let target_adj = target.adjacency_bitsets();
    let mut domains: Vec<BitSet> = Vec::with_capacity(ng);
    for v in 0..ng {
        let mut d = BitSet::new(nk);
        for w in 0..nk {
            // A loop at v forces its image onto a looped target vertex.
            if !source.has_loop(v) || target.has_loop(w) {
                d.insert(w);
            }
        }
        domains.push(d);
    }
    let order = reverse_degeneracy_order(source);
    let mut assignment = vec![usize::MAX; ng];
    let mut nodes = 0u64;
    let found = extend(source, &target_adj, &order, 0, &mut domains, &mut assignment, &mut nodes, node_cap);
    match found {
        Extend::Found => {
            let hm = HomomorphismMap {
                source: source.clone(),
                target: target.clone(),
                map: assignment.clone(),
            };
            let check = crate::cones::verify_homomorphism(&hm)?;
            assert!(check.holds, "search returned a non-homomorphism");
            Ok(HomSearch::Found(assignment))
        }
        Extend::Exhausted => Ok(HomSearch::NoneExhausted { nodes }),
        Extend::CapHit => Ok(HomSearch::CapExceeded { nodes }),
    }
}

enum Extend {
    Found,
    Exhausted,
    CapHit,
}

#[allow(clippy::too_many_arguments)]
fn extend(
    source: &Graph,
    target_adj: &[BitSet],
    order: &[usize],
    depth: usize,
    domains: &mut Vec<BitSet>,
    assignment: &mut Vec<usize>,
    nodes: &mut u64,
    node_cap: u64,
) -> Extend {
    if depth == order.len() {
        return Extend::Found;
    }
    let v = order[depth];
    let candidates: Vec<usize> = domains[v].iter().collect();
    let mut capped = false;
    for w in candidates {
        if *nodes >= node_cap {
            capped = true;
            break;
        }
        *nodes += 1;
        let mut saved: Vec<(usize, BitSet)> = Vec::new();
        let mut wiped = false;
        for u in source.neighbors(v) {
            if u == v || assignment[u] != usize::MAX {
                continue;
            }
            let narrowed = domains[u].intersection(&target_adj[w]);
            if narrowed.is_empty() {
                wiped = true;
            }
            saved.push((u, std::mem::replace(&mut domains[u], narrowed)));
            if wiped {
                break;
            }
        }
        if !wiped {
            assignment[v] = w;
            match extend(source, target_adj, order, depth + 1, domains, assignment, nodes, node_cap) {
                Extend::Found => return Extend::Found,
                Extend::CapHit => capped = true,
                Extend::Exhausted => {}
            }
            assignment[v] = usize::MAX;
        }
        for (u, dom) in saved.into_iter().rev() {
            domains[u] = dom;
        }
        if capped {
            break;
        }
    }
    if capped {
        Extend::CapHit
    } else {
        Extend::Exhausted
    }
}

/// Reverse of the min-degree elimination order (ties → lowest index), so
/// each vertex is constrained by its already-assigned back-neighbours.
fn reverse_degeneracy_order(g: &Graph) -> Vec<usize> {
    let n = g.vertex_count();
    let mut degree: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut removed = vec![false; n];
    let mut removal = Vec::with_capacity(n);
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| !removed[v])
            .min_by_key(|&v| (degree[v], v))
            .unwrap();
        removed[v] = true;
        removal.push(v);
        for u in g.neighbors(v) {
            if !removed[u] {
                degree[u] -= 1;
            }
        }
    }
    removal.reverse();
    removal
}

/// The exponential graph K^G with its looped maps (exactly the
/// homomorphisms G → K) and constant maps identified.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExponentialGraph {
    pub graph: Graph,
    /// Vertex i of `graph` is the map `maps[i]`: V(G) → V(K), enumerated
    /// lexicographically with the image of G's vertex 0 most significant.
    pub maps: Vec<Vec<usize>>,
    /// Indices of looped maps = homomorphisms G → K, ascending.
    pub loop_set: Vec<usize>,
    /// Index of the constant map onto each K vertex, in K-vertex order.
    pub constant_set: Vec<usize>,
}

pub fn exponential_graph(target: &Graph, base: &Graph) -> Result<ExponentialGraph> {
    exponential_graph_with_bound(target, base, DEFAULT_EXP_SIZE_BOUND)
}

pub fn exponential_graph_with_bound(
    target: &Graph,
    base: &Graph,
    size_bound: usize,
) -> Result<ExponentialGraph> {
    let space = MapSpace::new(target, base, size_bound)?;
    let maps: Vec<Vec<usize>> = (0..space.count).map(|i| space.decode(i)).collect();
    let mut graph = Graph::new(space.count);
    let mut loop_set = Vec::new();
    for (f, map) in maps.iter().enumerate() {
        if space.is_homomorphism(map) {
            loop_set.push(f);
        }
        space.for_each_neighbor(map, |j| {
            if j >= f {
                graph.add_edge(f, j).expect("indices in range");
            }
        });
    }
    debug_assert!(loop_set.iter().all(|&f| graph.has_loop(f)));
    let constant_set = (0..target.vertex_count())
        .map(|c| space.encode_constant(c))
        .collect();
    Ok(ExponentialGraph { graph, maps, loop_set, constant_set })
}

/// Shared machinery for walking K^G without materializing it.
struct MapSpace<'a> {
    target: &'a Graph,
    base: &'a Graph,
    target_adj: Vec<BitSet>,
    count: usize,
    /// count = |V(K)|^|V(G)|; place value of base vertex x is nk^(ng−1−x).
    place: Vec<usize>,
}

impl<'a> MapSpace<'a> {
    fn new(target: &'a Graph, base: &'a Graph, size_bound: usize) -> Result<MapSpace<'a>> {
        let ng = base.vertex_count();
        let nk = target.vertex_count();
        if ng == 0 || nk == 0 {
            return Err(Error::InvalidParameter(
                "exponential graphs need nonempty base and target".into(),
            ));
        }
        let mut count: usize = 1;
        for _ in 0..ng {
            count = count.checked_mul(nk).filter(|&c| c <= size_bound).ok_or_else(|| {
                Error::CapExceeded(format!(
                    "|V(K)|^|V(G)| = {nk}^{ng} exceeds the size bound {size_bound}"
                ))
            })?;
        }
        let mut place = vec![1usize; ng];
        for x in (0..ng.saturating_sub(1)).rev() {
            place[x] = place[x + 1] * nk;
        }
        Ok(MapSpace { target, base, target_adj: target.adjacency_bitsets(), count, place })
    }

    fn decode(&self, index: usize) -> Vec<usize> {
        let nk = self.target.vertex_count();
        self.place.iter().map(|p| (index / p) % nk).collect()
    }

    fn encode_constant(&self, c: usize) -> usize {
        self.place.iter().map(|p| c * p).sum()
    }

    fn is_homomorphism(&self, f: &[usize]) -> bool {
        self.base.edges().iter().all(|&(x, y)| self.target.has_edge(f[x], f[y]))
    }

    /// Calls `visit` with the index of every map adjacent to `f` (including
    /// f itself when looped). g ~ f iff g(u) lies, for every base vertex u,
    /// in the common target-neighbourhood of f over u's base neighbours;
    /// neighbours therefore form a product set walked digit by digit.
    fn for_each_neighbor(&self, f: &[usize], mut visit: impl FnMut(usize)) {
        let ng = self.base.vertex_count();
        let nk = self.target.vertex_count();
        let mut domains: Vec<Vec<usize>> = Vec::with_capacity(ng);
        for u in 0..ng {
            let mut dom = BitSet::new(nk);
            let mut unconstrained = true;
            for (i, w) in self.base.neighbors(u).enumerate() {
                if i == 0 {
                    dom = self.target_adj[f[w]].clone();
                    unconstrained = false;
                } else {
                    dom.intersect_with(&self.target_adj[f[w]]);
                }
            }
            let values: Vec<usize> =
                if unconstrained { (0..nk).collect() } else { dom.iter().collect() };
            if values.is_empty() {
                return;
            }
            domains.push(values);
        }
        let mut stack = vec![(0usize, 0usize)]; // (digit position, partial index)
        while let Some((pos, partial)) = stack.pop() {
            if pos == ng {
                visit(partial);
                continue;
            }
            // Push in reverse so lower digits are visited first.
            for &w in domains[pos].iter().rev() {
                stack.push((pos + 1, partial + w * self.place[pos]));
            }
        }
    }
}

/// Walk distances in K^G from the looped maps to each constant map.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DistanceReport {
    pub map_count: usize,
    pub loop_count: usize,
    /// Per K vertex c: least number of K^G edges on a walk from a looped
    /// map to the constant map c, or None if unreachable.
    pub constant_distance: Vec<Option<usize>>,
    /// A shortest such walk (maps f_0 looped, …, f_d ≡ c) when one exists.
    pub constant_walk: Vec<Option<Vec<Vec<usize>>>>,
}

/// Multi-source BFS over K^G (never materialized) from the loop set.
/// A distance-n walk to constant c translates to a homomorphism
/// Δₙ(G) → K sending the apex to c; see `walk_to_cone_homomorphism`.
pub fn loop_to_constant_distances(
    target: &Graph,
    base: &Graph,
    size_bound: usize,
) -> Result<DistanceReport> {
    let space = MapSpace::new(target, base, size_bound)?;
    let mut dist: Vec<u32> = vec![u32::MAX; space.count];
    let mut parent: Vec<usize> = vec![usize::MAX; space.count];
    let mut queue = std::collections::VecDeque::new();
    let mut loop_count = 0;
    for (f, d) in dist.iter_mut().enumerate() {
        if space.is_homomorphism(&space.decode(f)) {
            *d = 0;
            queue.push_back(f);
            loop_count += 1;
        }
    }
    let constants: Vec<usize> =
        (0..target.vertex_count()).map(|c| space.encode_constant(c)).collect();
    let mut unreached = constants.iter().filter(|&&c| dist[c] == u32::MAX).count();
    while let Some(f) = queue.pop_front() {
        if unreached == 0 {
            break;
        }
        let fmap = space.decode(f);
        let d = dist[f];
        space.for_each_neighbor(&fmap, |j| {
            if dist[j] == u32::MAX {
                dist[j] = d + 1;
                parent[j] = f;
                if constants.contains(&j) {
                    unreached -= 1;
                }
                queue.push_back(j);
            }
        });
    }
    let mut constant_distance = Vec::with_capacity(constants.len());
    let mut constant_walk = Vec::with_capacity(constants.len());
    for &c in &constants {
        if dist[c] == u32::MAX {
            constant_distance.push(None);
            constant_walk.push(None);
        } else {
            constant_distance.push(Some(dist[c] as usize));
            let mut walk = vec![space.decode(c)];
            let mut at = c;
            while parent[at] != usize::MAX {
                at = parent[at];
                walk.push(space.decode(at));
            }
            walk.reverse();
            constant_walk.push(Some(walk));
        }
    }
    Ok(DistanceReport { map_count: space.count, loop_count, constant_distance, constant_walk })
}

/// Turns a K^G walk (f_0 looped, …, f_n constant) into a verified
/// homomorphism Δₙ(G) → K with the apex on the constant's value.
pub fn walk_to_cone_homomorphism(
    base: &Graph,
    target: &Graph,
    walk: &[Vec<usize>],
) -> Result<HomomorphismMap> {
    let n = walk.len().saturating_sub(1);
    if n == 0 {
        return Err(Error::InvalidParameter(
            "a walk needs at least two maps (cone height ≥ 1)".into(),
        ));
    }
    let ng = base.vertex_count();
    let nk = target.vertex_count();
    for step in walk {
        if step.len() != ng || step.iter().any(|&w| w >= nk) {
            return Err(Error::InvalidParameter(
                "walk entries must be maps V(G) → V(K)".into(),
            ));
        }
    }
    let last = &walk[n];
    if last.iter().any(|&w| w != last[0]) {
        return Err(Error::InvalidParameter("the walk must end at a constant map".into()));
    }
    let cone_graph = cone(base, n)?;
    let map: Vec<usize> = cone_graph
        .labels()
        .iter()
        .map(|label| match *label {
            ConeLabel::Base(x) => walk[0][x],
            ConeLabel::Inner { x, layer, .. } => walk[layer][x],
            ConeLabel::Apex(_) => last[0],
        })
        .collect();
    let hm = HomomorphismMap {
        source: cone_graph.graph().clone(),
        target: target.clone(),
        map,
    };
    let check = crate::cones::verify_homomorphism(&hm)?;
    if !check.holds {
        let (u, v) = check.violating_edge.expect("failed check carries a witness");
        return Err(Error::InvalidParameter(format!(
            "walk does not define a cone homomorphism: edge {u}-{v} breaks"
        )));
    }
    Ok(hm)
}

/// Inverse translation: reads the layer maps of a verified homomorphism
/// Δₙ(G) → K off as a K^G walk ending at the apex's constant.
pub fn cone_homomorphism_to_walk(
    cone_graph: &ConeGraph,
    hm: &HomomorphismMap,
) -> Result<Vec<Vec<usize>>> {
    if cone_graph.pattern().vertex_count() != 1 {
        return Err(Error::InvalidParameter(
            "walk extraction needs a plain cone (single-vertex pattern)".into(),
        ));
    }
    if hm.source != *cone_graph.graph() {
        return Err(Error::InvalidParameter(
            "homomorphism source is not this cone".into(),
        ));
    }
    let check = crate::cones::verify_homomorphism(hm)?;
    if !check.holds {
        return Err(Error::InvalidParameter("map is not a homomorphism".into()));
    }
    let n = cone_graph.heights()[0];
    let ng = cone_graph.base().vertex_count();
    let apex = cone_graph.apex_vertex(0).expect("cones have an apex");
    let mut walk = vec![vec![0usize; ng]; n + 1];
    for (layer, row) in walk.iter_mut().enumerate() {
        for (x, slot) in row.iter_mut().enumerate() {
            let vertex = if layer == n {
                apex
            } else if layer == 0 {
                cone_graph.base_vertex(x).expect("base vertex exists")
            } else {
                cone_graph.inner_vertex(x, layer, 0).expect("inner vertex exists")
            };
            *slot = hm.map[vertex];
        }
    }
    Ok(walk)
}
