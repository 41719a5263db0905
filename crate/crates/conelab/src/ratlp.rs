//! Fractional chromatic numbers by exact linear programming.
//!
//! χ_f(G) is the optimum of the covering LP
//!
//! ```text
//!   minimise   Σ_I w_I           over maximal independent sets I
//!   subject to Σ_{I ∋ v} w_I ≥ 1 for every vertex v,   w ≥ 0
//! ```
//!
//! solved here by a revised primal simplex over arbitrary-precision
//! rationals (no floating point anywhere). Restricting columns to *maximal*
//! independent sets is lossless: weight on any independent set can move to a
//! maximal superset without changing feasibility or total.
//!
//! The simplex keeps an explicit basis inverse and starts from an artificial
//! identity basis priced at M = |V| + 1, which any real cover beats, so every
//! optimal basic solution has all artificials at zero. Entering column: most
//! negative reduced cost with lowest-index tie-break, scanned in rotating
//! blocks. Leaving row: lexicographic ratio test (ties broken by comparing
//! basis-inverse rows), which makes the objective vector strictly decrease
//! and therefore rules out cycling under any pricing rule. Everything is
//! deterministic.
//!
//! The dual vector read off the optimal basis is a fractional clique of the
//! same total weight, so every result carries its own optimality proof;
//! `fractional_chromatic` re-verifies both certificates before returning.

use num::bigint::BigInt;
use num::integer::Integer;
use num::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::graph::Graph;
use crate::indep::{maximal_independent_sets, DEFAULT_MIS_CAP};
use crate::rational::{format_rational, Rational};
use crate::{Error, Result};

/// Weighted family of independent sets (a fractional colouring when it
/// covers every vertex with total ≥ 1).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FractionalColouring {
    /// `(set, weight)` with each set ascending; entries sorted by set.
    pub entries: Vec<(Vec<usize>, Rational)>,
}

impl FractionalColouring {
    pub fn total(&self) -> Rational {
        self.entries.iter().map(|(_, w)| w).sum()
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.entries
                .iter()
                .map(|(set, w)| json!({ "set": set, "weight": format_rational(w) }))
                .collect(),
        )
    }
}

/// Weight per vertex (a fractional clique when every independent set weighs
/// at most 1).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FractionalClique {
    pub weights: Vec<Rational>,
}

impl FractionalClique {
    pub fn total(&self) -> Rational {
        self.weights.iter().sum()
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.weights.iter().map(|w| Value::String(format_rational(w))).collect())
    }
}

/// Exact LP optimum with both certificates.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LPResult {
    pub value: Rational,
    pub primal: FractionalColouring,
    pub dual: FractionalClique,
    pub iterations: u64,
    /// Number of maximal independent sets (LP columns).
    pub independent_set_count: usize,
}

impl LPResult {
    pub fn to_json(&self) -> Value {
        json!({
            "value": format_rational(&self.value),
            "iterations": self.iterations,
            "independent_set_count": self.independent_set_count,
            "primal": self.primal.to_json(),
            "dual": self.dual.to_json(),
        })
    }
}

/// χ_f(G) with the default enumeration cap.
pub fn fractional_chromatic(g: &Graph) -> Result<LPResult> {
    fractional_chromatic_with_cap(g, DEFAULT_MIS_CAP)
}

/// χ_f(G), refusing (rather than approximating) if the independent-set
/// family would exceed `cap`.
pub fn fractional_chromatic_with_cap(g: &Graph, cap: usize) -> Result<LPResult> {
    if g.vertex_count() == 0 {
        return Err(Error::InvalidParameter(
            "fractional chromatic number needs at least one vertex".into(),
        ));
    }
    if !g.is_loop_free() {
        return Err(Error::InvalidParameter(
            "fractional chromatic number is undefined on graphs with loops".into(),
        ));
    }
    let family = maximal_independent_sets(g, cap)?;
    if family.truncated {
        return Err(Error::Truncated(format!(
            "more than {cap} maximal independent sets; raise the cap for an exact answer"
        )));
    }
    let result = solve_covering(g.vertex_count(), &family.sets)?;

    // Self-check: both certificates must verify and agree exactly.
    let primal_check = verify_fractional_colouring(g, &result.primal)?;
    assert!(primal_check.valid, "optimal primal failed verification");
    let dual_check = check_clique_against(&result.dual, &family.sets)?;
    assert!(dual_check.valid, "optimal dual failed verification");
    assert_eq!(result.primal.total(), result.value, "primal total != objective");
    assert_eq!(result.dual.total(), result.value, "strong duality violated");
    Ok(result)
}

/// Verdict of checking a fractional colouring against a graph.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ColouringCheck {
    pub valid: bool,
    pub total: Rational,
    /// Least and greatest per-vertex coverage (None on the empty graph).
    pub min_coverage: Option<Rational>,
    pub max_coverage: Option<Rational>,
    pub first_uncovered: Option<usize>,
    /// Index of the first entry with positive weight on a dependent set.
    pub first_dependent_entry: Option<usize>,
    /// Index of the first entry with negative weight.
    pub first_negative_entry: Option<usize>,
}

/// Checks coverage ≥ 1, independence of every positively weighted set, and
/// nonnegativity. Out-of-range vertices are a hard error, not a verdict.
pub fn verify_fractional_colouring(g: &Graph, fc: &FractionalColouring) -> Result<ColouringCheck> {
    let n = g.vertex_count();
    let mut coverage = vec![Rational::zero(); n];
    let mut first_dependent_entry = None;
    let mut first_negative_entry = None;
    for (idx, (set, weight)) in fc.entries.iter().enumerate() {
        let mut members: Vec<usize> = set.clone();
        members.sort_unstable();
        members.dedup();
        if weight.is_negative() && first_negative_entry.is_none() {
            first_negative_entry = Some(idx);
        }
        if weight.is_positive()
            && !crate::indep::is_independent(g, &members)?
            && first_dependent_entry.is_none()
        {
            first_dependent_entry = Some(idx);
        }
        for &v in &members {
            // is_independent above only ran for positive weights; range-check always.
            if v >= n {
                return Err(Error::InvalidParameter(format!(
                    "vertex {v} out of range for graph on {n} vertices"
                )));
            }
            coverage[v] += weight;
        }
    }
    let one = Rational::one();
    let first_uncovered = coverage.iter().position(|c| *c < one);
    let check = ColouringCheck {
        valid: first_uncovered.is_none()
            && first_dependent_entry.is_none()
            && first_negative_entry.is_none(),
        total: fc.total(),
        min_coverage: coverage.iter().min().cloned(),
        max_coverage: coverage.iter().max().cloned(),
        first_uncovered,
        first_dependent_entry,
        first_negative_entry,
    };
    Ok(check)
}

/// Verdict of checking a fractional clique against a graph.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CliqueCheck {
    pub valid: bool,
    pub total: Rational,
    pub first_negative: Option<usize>,
    /// Lexicographically first maximal independent set weighing > 1.
    pub first_violating_set: Option<Vec<usize>>,
    /// Greatest weight of any maximal independent set.
    pub max_set_weight: Option<Rational>,
}

/// Checks nonnegativity and ν(I) ≤ 1 over all maximal independent sets
/// (sufficient for all independent sets, since ν ≥ 0 is checked too).
pub fn verify_fractional_clique(
    g: &Graph,
    fq: &FractionalClique,
    cap: usize,
) -> Result<CliqueCheck> {
    if fq.weights.len() != g.vertex_count() {
        return Err(Error::InvalidParameter(format!(
            "{} weights for a graph on {} vertices",
            fq.weights.len(),
            g.vertex_count()
        )));
    }
    let family = maximal_independent_sets(g, cap)?;
    if family.truncated {
        return Err(Error::Truncated(
            "cannot verify a fractional clique against a truncated family".into(),
        ));
    }
    check_clique_against(fq, &family.sets)
}

fn check_clique_against(fq: &FractionalClique, sets: &[Vec<usize>]) -> Result<CliqueCheck> {
    let first_negative = fq.weights.iter().position(|w| w.is_negative());
    let one = Rational::one();
    let mut first_violating_set = None;
    let mut max_set_weight: Option<Rational> = None;
    for set in sets {
        let value: Rational = set.iter().map(|&v| &fq.weights[v]).sum();
        if value > one && first_violating_set.is_none() {
            first_violating_set = Some(set.clone());
        }
        if max_set_weight.as_ref().is_none_or(|m| value > *m) {
            max_set_weight = Some(value);
        }
    }
    Ok(CliqueCheck {
        valid: first_negative.is_none() && first_violating_set.is_none(),
        total: fq.total(),
        first_negative,
        first_violating_set,
        max_set_weight,
    })
}

/// Hard bound on pivots; hit only by a bug, never by a legal run.
fn iteration_bound(rows: usize, cols: usize) -> u64 {
    4000 + 400 * rows as u64 + cols as u64
}

const PRICING_BLOCK: usize = 4096;

/// Variable layout: `[0, ns)` set columns, `[ns, ns + m)` surplus columns,
/// `[ns + m, ns + 2m)` artificials (never re-enter once out).
struct Simplex<'a> {
    sets: &'a [Vec<usize>],
    m: usize,
    ns: usize,
    /// Artificial cost; any all-real cover costs less, so optima carry none.
    big_m: Rational,
    basis: Vec<usize>,
    in_basis: Vec<bool>,
    binv: Vec<Vec<Rational>>,
    xb: Vec<Rational>,
    iterations: u64,
    /// Rotating start for block pricing.
    scan_from: usize,
}

fn solve_covering(m: usize, sets: &[Vec<usize>]) -> Result<LPResult> {
    let ns = sets.len();
    let mut s = Simplex {
        sets,
        m,
        ns,
        big_m: Rational::from_integer((m as i64 + 1).into()),
        basis: (ns + m..ns + 2 * m).collect(),
        in_basis: {
            let mut f = vec![false; ns + 2 * m];
            f[ns + m..].fill(true);
            f
        },
        binv: (0..m)
            .map(|r| {
                let mut row = vec![Rational::zero(); m];
                row[r] = Rational::one();
                row
            })
            .collect(),
        xb: vec![Rational::one(); m],
        iterations: 0,
        scan_from: 0,
    };
    s.run()?;
    let leftover: Rational = s
        .basis
        .iter()
        .zip(&s.xb)
        .filter(|(&var, _)| var >= ns + m)
        .map(|(_, x)| x)
        .sum();
    assert!(leftover.is_zero(), "covering LP is always feasible");

    let value: Rational = s
        .basis
        .iter()
        .zip(&s.xb)
        .filter(|(&var, _)| var < ns)
        .map(|(_, x)| x)
        .sum();
    let mut entries: Vec<(Vec<usize>, Rational)> = s
        .basis
        .iter()
        .zip(&s.xb)
        .filter(|(&var, x)| var < ns && x.is_positive())
        .map(|(&var, x)| (sets[var].clone(), x.clone()))
        .collect();
    entries.sort();
    // Basic zero-level artificials contribute M·0 to y·b, so y stays a valid
    // optimal dual for the artificial-free problem.
    let dual = s.dual_vector();
    Ok(LPResult {
        value,
        primal: FractionalColouring { entries },
        dual: FractionalClique { weights: dual },
        iterations: s.iterations,
        independent_set_count: ns,
    })
}

impl Simplex<'_> {
    fn cost(&self, var: usize) -> Rational {
        if var < self.ns {
            Rational::one()
        } else if var < self.ns + self.m {
            Rational::zero()
        } else {
            self.big_m.clone()
        }
    }

    /// y = c_B · B⁻¹.
    fn dual_vector(&self) -> Vec<Rational> {
        let mut y = vec![Rational::zero(); self.m];
        for (r, &var) in self.basis.iter().enumerate() {
            let c = self.cost(var);
            if c.is_zero() {
                continue;
            }
            for (yi, b) in y.iter_mut().zip(&self.binv[r]) {
                *yi += &c * b;
            }
        }
        y
    }

    /// Picks the entering variable, or None at optimality: most negative
    /// reduced cost within the first rotating block that contains any
    /// negative, ties to the lowest index. Artificials never enter.
    ///
    /// The scan rewrites y over a common denominator D > 0 so each reduced
    /// cost compares by its integer numerator: D − Σ_{v∈I} n_v for a set
    /// column (cost 1), n_v for a surplus column (cost 0). Integer sums skip
    /// the gcd work rational addition would do per term.
    fn price(&self, y: &[Rational]) -> Option<usize> {
        let denom: BigInt = y.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        let nums: Vec<BigInt> =
            y.iter().map(|v| v.numer() * (&denom / v.denom())).collect();
        let rc_numer = |j: usize| -> BigInt {
            if j < self.ns {
                let mut s = denom.clone();
                for &v in &self.sets[j] {
                    s -= &nums[v];
                }
                s
            } else {
                nums[j - self.ns].clone()
            }
        };
        let cols = self.ns + self.m;
        let mut best: Option<(BigInt, usize)> = None;
        let mut scanned = 0;
        let mut j = self.scan_from % cols;
        while scanned < cols {
            let block_end = scanned + PRICING_BLOCK.min(cols - scanned);
            while scanned < block_end {
                if !self.in_basis[j] {
                    let rc = rc_numer(j);
                    if rc.is_negative()
                        && best.as_ref().is_none_or(|(b, bj)| rc < *b || (rc == *b && j < *bj))
                    {
                        best = Some((rc, j));
                    }
                }
                j = (j + 1) % cols;
                scanned += 1;
            }
            if best.is_some() {
                break;
            }
        }
        best.map(|(_, j)| j)
    }

    /// B⁻¹ · A_j.
    fn direction(&self, var: usize) -> Vec<Rational> {
        let mut d = vec![Rational::zero(); self.m];
        if var < self.ns {
            for &v in &self.sets[var] {
                for (dr, row) in d.iter_mut().zip(&self.binv) {
                    *dr += &row[v];
                }
            }
        } else if var < self.ns + self.m {
            let v = var - self.ns;
            for (dr, row) in d.iter_mut().zip(&self.binv) {
                *dr -= &row[v];
            }
        } else {
            let v = var - self.ns - self.m;
            for (dr, row) in d.iter_mut().zip(&self.binv) {
                *dr += &row[v];
            }
        }
        d
    }

    /// Lexicographic ratio test: minimise xb[r]/d[r] over d[r] > 0, breaking
    /// exact ties by the lexicographic order of B⁻¹ rows scaled by 1/d[r].
    /// Starting from the identity basis this keeps every [xb | B⁻¹] row
    /// lexicographically positive, so no basis ever repeats.
    fn leaving_row(&self, d: &[Rational]) -> Option<usize> {
        let mut best: Option<usize> = None;
        for r in 0..self.m {
            if !d[r].is_positive() {
                continue;
            }
            let Some(b) = best else {
                best = Some(r);
                continue;
            };
            // Compare xb[r]/d[r] with xb[b]/d[b] by cross-multiplication.
            match (&self.xb[r] * &d[b]).cmp(&(&self.xb[b] * &d[r])) {
                std::cmp::Ordering::Less => best = Some(r),
                std::cmp::Ordering::Greater => {}
                std::cmp::Ordering::Equal => {
                    if self.lex_prefers(r, b, d) {
                        best = Some(r);
                    }
                }
            }
        }
        best
    }

    /// True if row `r1`'s scaled basis-inverse row lexicographically
    /// precedes row `r2`'s (both pivots positive).
    fn lex_prefers(&self, r1: usize, r2: usize, d: &[Rational]) -> bool {
        for c in 0..self.m {
            let lhs = &self.binv[r1][c] * &d[r2];
            let rhs = &self.binv[r2][c] * &d[r1];
            match lhs.cmp(&rhs) {
                std::cmp::Ordering::Less => return true,
                std::cmp::Ordering::Greater => return false,
                std::cmp::Ordering::Equal => {}
            }
        }
        unreachable!("basis-inverse rows are linearly independent");
    }

    fn pivot(&mut self, row: usize, var: usize, d: &[Rational]) {
        let theta = &self.xb[row] / &d[row];
        for (r, (x, dr)) in self.xb.iter_mut().zip(d).enumerate() {
            if r != row {
                *x -= &theta * dr;
            }
        }
        self.xb[row] = theta;

        let pivot_val = d[row].clone();
        for b in self.binv[row].iter_mut() {
            *b /= &pivot_val;
        }
        let pivot_row = self.binv[row].clone();
        for (r, (binv_row, dr)) in self.binv.iter_mut().zip(d).enumerate() {
            if r == row || dr.is_zero() {
                continue;
            }
            for (b, p) in binv_row.iter_mut().zip(&pivot_row) {
                *b -= dr * p;
            }
        }

        self.in_basis[self.basis[row]] = false;
        self.basis[row] = var;
        self.in_basis[var] = true;
        self.scan_from = var + 1;
        self.iterations += 1;
    }

    fn run(&mut self) -> Result<()> {
        let bound = iteration_bound(self.m, self.ns);
        loop {
            if self.iterations > bound {
                return Err(Error::CapExceeded(format!(
                    "simplex exceeded its {bound}-pivot safety bound"
                )));
            }
            let y = self.dual_vector();
            let Some(entering) = self.price(&y) else {
                return Ok(());
            };
            let d = self.direction(entering);
            let row = self
                .leaving_row(&d)
                .expect("covering objective is bounded below, so no unbounded ray exists");
            self.pivot(row, entering, &d);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{circulant, complete, cycle, kneser, path_with_loop, Graph};
    use crate::rational::rat;

    fn chif(g: &Graph) -> Rational {
        fractional_chromatic(g).unwrap().value
    }

    /// Independence number by brute force (|V| <= 16).
    fn alpha(g: &Graph) -> usize {
        maximal_independent_sets(g, DEFAULT_MIS_CAP)
            .unwrap()
            .sets
            .iter()
            .map(|s| s.len())
            .max()
            .unwrap()
    }

    #[test]
    fn odd_cycles() {
        assert_eq!(chif(&cycle(5).unwrap()), rat(5, 2));
        assert_eq!(chif(&cycle(7).unwrap()), rat(7, 3));
        assert_eq!(chif(&cycle(9).unwrap()), rat(9, 4));
    }

    #[test]
    fn complete_graphs() {
        for n in 1..=5 {
            assert_eq!(chif(&complete(n).unwrap()), rat(n as i64, 1));
        }
    }

    #[test]
    fn bipartite_and_edgeless() {
        assert_eq!(chif(&cycle(6).unwrap()), rat(2, 1));
        let star = Graph::with_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!(chif(&star), rat(2, 1));
        assert_eq!(chif(&Graph::new(3)), rat(1, 1));
    }

    #[test]
    fn vertex_transitive_ratio_oracle() {
        // For vertex-transitive graphs χ_f = |V| / α; α from enumeration.
        for g in [
            cycle(5).unwrap(),
            cycle(7).unwrap(),
            circulant(7, &[1, 2]).unwrap(),
            kneser(5, 2).unwrap(),
            complete(4).unwrap(),
            cycle(8).unwrap(),
        ] {
            let expect = rat(g.vertex_count() as i64, alpha(&g) as i64);
            assert_eq!(chif(&g), expect);
        }
    }

    #[test]
    fn kneser_value() {
        assert_eq!(chif(&kneser(5, 2).unwrap()), rat(5, 2));
        assert_eq!(chif(&kneser(6, 2).unwrap()), rat(3, 1));
        assert_eq!(chif(&kneser(7, 3).unwrap()), rat(7, 3));
    }

    #[test]
    fn certificates_always_verify_and_agree() {
        for g in [cycle(5).unwrap(), kneser(5, 2).unwrap(), complete(4).unwrap()] {
            let lp = fractional_chromatic(&g).unwrap();
            assert_eq!(lp.primal.total(), lp.value);
            assert_eq!(lp.dual.total(), lp.value);
            assert!(verify_fractional_colouring(&g, &lp.primal).unwrap().valid);
            assert!(verify_fractional_clique(&g, &lp.dual, DEFAULT_MIS_CAP).unwrap().valid);
            assert!(lp.iterations <= iteration_bound(g.vertex_count(), lp.independent_set_count));
        }
    }

    #[test]
    fn deterministic_output() {
        let a = fractional_chromatic(&kneser(5, 2).unwrap()).unwrap();
        let b = fractional_chromatic(&kneser(5, 2).unwrap()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(fractional_chromatic(&Graph::new(0)).is_err());
        assert!(fractional_chromatic(&path_with_loop(2).unwrap()).is_err());
        assert!(matches!(
            fractional_chromatic_with_cap(&cycle(5).unwrap(), 2),
            Err(Error::Truncated(_))
        ));
    }

    #[test]
    fn colouring_verifier_verdicts() {
        let c5 = cycle(5).unwrap();
        let optimal = FractionalColouring {
            entries: vec![
                (vec![0, 2], rat(1, 2)),
                (vec![0, 3], rat(1, 2)),
                (vec![1, 3], rat(1, 2)),
                (vec![1, 4], rat(1, 2)),
                (vec![2, 4], rat(1, 2)),
            ],
        };
        let check = verify_fractional_colouring(&c5, &optimal).unwrap();
        assert!(check.valid);
        assert_eq!(check.total, rat(5, 2));
        assert_eq!(check.min_coverage, Some(rat(1, 1)));
        assert_eq!(check.max_coverage, Some(rat(1, 1)));

        let short = FractionalColouring { entries: vec![(vec![0, 2], rat(1, 1))] };
        let check = verify_fractional_colouring(&c5, &short).unwrap();
        assert!(!check.valid);
        assert_eq!(check.first_uncovered, Some(1));

        let dependent = FractionalColouring { entries: vec![(vec![0, 1, 2, 3, 4], rat(3, 1))] };
        let check = verify_fractional_colouring(&c5, &dependent).unwrap();
        assert!(!check.valid);
        assert_eq!(check.first_dependent_entry, Some(0));

        let negative = FractionalColouring {
            entries: vec![(vec![0, 2], rat(-1, 2)), (vec![0, 1, 2, 3, 4], rat(9, 1))],
        };
        let check = verify_fractional_colouring(&c5, &negative).unwrap();
        assert!(!check.valid);
        assert_eq!(check.first_negative_entry, Some(0));

        let out_of_range = FractionalColouring { entries: vec![(vec![9], rat(1, 1))] };
        assert!(verify_fractional_colouring(&c5, &out_of_range).is_err());
    }

    #[test]
    fn clique_verifier_verdicts() {
        let c5 = cycle(5).unwrap();
        let optimal = FractionalClique { weights: vec![rat(1, 2); 5] };
        let check = verify_fractional_clique(&c5, &optimal, DEFAULT_MIS_CAP).unwrap();
        assert!(check.valid);
        assert_eq!(check.total, rat(5, 2));
        assert_eq!(check.max_set_weight, Some(rat(1, 1)));

        let heavy = FractionalClique { weights: vec![rat(1, 1); 5] };
        let check = verify_fractional_clique(&c5, &heavy, DEFAULT_MIS_CAP).unwrap();
        assert!(!check.valid);
        assert_eq!(check.first_violating_set, Some(vec![0, 2]));

        let negative = FractionalClique {
            weights: vec![rat(-1, 2), rat(0, 1), rat(0, 1), rat(0, 1), rat(0, 1)],
        };
        let check = verify_fractional_clique(&c5, &negative, DEFAULT_MIS_CAP).unwrap();
        assert!(!check.valid);
        assert_eq!(check.first_negative, Some(0));

        let wrong_len = FractionalClique { weights: vec![rat(1, 2); 4] };
        assert!(verify_fractional_clique(&c5, &wrong_len, DEFAULT_MIS_CAP).is_err());
    }

    #[test]
    fn json_shape() {
        let lp = fractional_chromatic(&cycle(5).unwrap()).unwrap();
        let v = lp.to_json();
        assert_eq!(v["value"], "5/2");
        assert!(v["primal"].as_array().unwrap().len() >= 3);
        assert_eq!(v["dual"].as_array().unwrap().len(), 5);
    }
}
