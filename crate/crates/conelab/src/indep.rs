//! Independence testing, maximal-independent-set enumeration, and the
//! copy-wise decomposition of independent sets in generalized cones.
//!
//! The enumeration is Bron–Kerbosch with pivoting, run on the complement
//! (maximal independent sets = maximal cliques of the complement). Loop
//! vertices are self-adjacent and therefore belong to no independent set.
//! Output order is deterministic: sets sorted ascending internally, the
//! family sorted lexicographically.

use std::collections::{BTreeMap, BTreeSet};

use crate::bitset::BitSet;
use crate::cones::{cone, ConeGraph, ConeLabel};
use crate::graph::Graph;
use crate::{Error, Result};

/// Default bound on how many maximal independent sets to enumerate.
pub const DEFAULT_MIS_CAP: usize = 5_000_000;

/// The maximal independent sets of a graph, possibly cut off at a cap.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IndependentSetFamily {
    /// Each set ascending; the family lexicographically sorted when complete.
    pub sets: Vec<Vec<usize>>,
    /// True iff enumeration stopped at the cap; exact consumers must refuse.
    pub truncated: bool,
}

/// True iff `set` spans no edge and contains no loop vertex.
pub fn is_independent(g: &Graph, set: &[usize]) -> Result<bool> {
    let members: BTreeSet<usize> = set.iter().copied().collect();
    for &v in &members {
        if v >= g.vertex_count() {
            return Err(Error::InvalidParameter(format!(
                "vertex {v} out of range for graph on {} vertices",
                g.vertex_count()
            )));
        }
        if g.neighbors(v).any(|u| members.contains(&u)) {
            return Ok(false); // covers loops: v is its own neighbour
        }
    }
    Ok(true)
}

/// Enumerates all maximal independent sets, stopping (with `truncated`) once
/// `cap` sets have been produced and more exist.
pub fn maximal_independent_sets(g: &Graph, cap: usize) -> Result<IndependentSetFamily> {
    if cap == 0 {
        return Err(Error::InvalidParameter("enumeration cap must be >= 1".into()));
    }
    let n = g.vertex_count();
    // Complement adjacency restricted to loop-free vertices.
    let mut universe = BitSet::new(n);
    for v in 0..n {
        if !g.has_loop(v) {
            universe.insert(v);
        }
    }
    let cadj: Vec<BitSet> = (0..n)
        .map(|v| {
            let mut row = BitSet::new(n);
            if g.has_loop(v) {
                return row;
            }
            for u in universe.iter() {
                if u != v && !g.has_edge(u, v) {
                    row.insert(u);
                }
            }
            row
        })
        .collect();

    let mut out = Enumeration { cadj: &cadj, sets: Vec::new(), cap, truncated: false };
    let empty = BitSet::new(n);
    out.expand(&mut Vec::new(), universe, empty);
    let Enumeration { mut sets, truncated, .. } = out;
    sets.sort();
    Ok(IndependentSetFamily { sets, truncated })
}

struct Enumeration<'a> {
    cadj: &'a [BitSet],
    sets: Vec<Vec<usize>>,
    cap: usize,
    truncated: bool,
}

impl Enumeration<'_> {
    fn expand(&mut self, r: &mut Vec<usize>, mut p: BitSet, mut x: BitSet) {
        if self.truncated {
            return;
        }
        if p.is_empty() && x.is_empty() {
            if self.sets.len() == self.cap {
                self.truncated = true;
            } else {
                let mut found = r.clone();
                found.sort_unstable();
                self.sets.push(found);
            }
            return;
        }
        // Tomita pivot: maximize |P ∩ cadj(u)| over P ∪ X, ties to the
        // lowest vertex index.
        let mut pivot = usize::MAX;
        let mut best = usize::MAX;
        for u in p.iter().chain(x.iter()) {
            let score = p.intersection_len(&self.cadj[u]);
            if best == usize::MAX || score > best || (score == best && u < pivot) {
                best = score;
                pivot = u;
            }
        }
        let extension: Vec<usize> =
            p.iter().filter(|&v| !self.cadj[pivot].contains(v)).collect();
        for v in extension {
            r.push(v);
            self.expand(r, p.intersection(&self.cadj[v]), x.intersection(&self.cadj[v]));
            r.pop();
            if self.truncated {
                return;
            }
            p.remove(v);
            x.insert(v);
        }
    }
}

/// An independent-set candidate in a generalized cone, split copy by copy.
///
/// `copy_restrictions[v]` is the set's trace on copy `v` — shared base,
/// inner layers of copy `v`, and apex `v` — expressed as vertex indices of
/// the plain cone of height `h(v)` over the same base.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ConeDecomposition {
    pub copy_restrictions: Vec<Vec<usize>>,
    /// Independence verdict per restriction, in its own single cone.
    pub copy_independent: Vec<bool>,
    /// Pattern vertices whose apex is in the set.
    pub apex_set: Vec<usize>,
    /// Whether `apex_set` is independent in the pattern graph.
    pub apex_independent: bool,
    /// All copy verdicts and the apex verdict combined; always equal to
    /// `is_independent` on the whole cone graph.
    pub valid: bool,
}

/// Splits `set` per copy and checks independence piece by piece.
pub fn decompose_cone_independent(c: &ConeGraph, set: &[usize]) -> Result<ConeDecomposition> {
    let members: BTreeSet<usize> = set.iter().copied().collect();
    if let Some(&v) = members.iter().find(|&&v| v >= c.graph().vertex_count()) {
        return Err(Error::InvalidParameter(format!(
            "vertex {v} out of range for cone on {} vertices",
            c.graph().vertex_count()
        )));
    }

    let heights = c.heights();
    let mut single_cones: BTreeMap<usize, ConeGraph> = BTreeMap::new();
    for &k in heights {
        single_cones.entry(k).or_insert(cone(c.base(), k)?);
    }

    let nh = c.pattern().vertex_count();
    let mut copy_restrictions: Vec<Vec<usize>> = vec![Vec::new(); nh];
    let mut apex_set = Vec::new();
    for &v in &members {
        match c.label(v) {
            ConeLabel::Base(x) => {
                for (copy, &k) in heights.iter().enumerate() {
                    let single = &single_cones[&k];
                    copy_restrictions[copy].push(single.base_vertex(x).expect("base in range"));
                }
            }
            ConeLabel::Inner { x, layer, copy } => {
                let single = &single_cones[&heights[copy]];
                copy_restrictions[copy]
                    .push(single.inner_vertex(x, layer, 0).expect("inner in range"));
            }
            ConeLabel::Apex(copy) => {
                let single = &single_cones[&heights[copy]];
                copy_restrictions[copy].push(single.apex_vertex(0).expect("apex exists"));
                apex_set.push(copy);
            }
        }
    }
    for r in &mut copy_restrictions {
        r.sort_unstable();
    }

    let copy_independent: Vec<bool> = copy_restrictions
        .iter()
        .enumerate()
        .map(|(copy, r)| is_independent(single_cones[&heights[copy]].graph(), r))
        .collect::<Result<_>>()?;
    let apex_independent = is_independent(c.pattern(), &apex_set)?;
    let valid = apex_independent && copy_independent.iter().all(|&b| b);

    debug_assert_eq!(valid, is_independent(c.graph(), set)?);
    Ok(ConeDecomposition {
        copy_restrictions,
        copy_independent,
        apex_set,
        apex_independent,
        valid,
    })
}
