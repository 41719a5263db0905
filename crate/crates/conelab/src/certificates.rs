//! Closed-form cone parameters and explicit optimal certificates.
//!
//! Write `c = chi_f(G)` for the base graph and `h = chi_f(H)` for the pattern
//! graph, and let every copy have the same height `n`. The fractional
//! chromatic number of the generalized cone is then
//!
//! * `c + tau` for even `n` (independent of the pattern), and
//! * `c + h * tau'` for odd `n`,
//!
//! whenever `h <= c`, where `tau = 1 / sum_{k<n} (c-1)^k` and
//! `tau' = 1 / (h * sum_{k<n} (c-1)^k + 1 - h)`. This module evaluates those
//! values exactly, derives the geometric weight sequences behind them, checks
//! the algebraic identities the sequences satisfy, and assembles the matching
//! certificates: a fractional clique reaching the value from below (odd
//! heights), fractional colourings reaching it from above (both parities,
//! Kneser patterns), a searched embedding of an arbitrary pattern into a
//! Kneser graph, and a proper colouring bounding the ordinary chromatic
//! number of arbitrary-height cones.
//!
//! Builders validate their inputs (the supplied cliques and colourings must
//! verify and be optimal) but leave the final check of the assembled
//! certificate to the caller: [`crate::ratlp::verify_fractional_clique`] and
//! [`crate::ratlp::verify_fractional_colouring`] accept the cone graph and
//! the certificate directly.

use std::collections::{BTreeMap, BTreeSet};

use num::ToPrimitive;
use num::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::chromatic::{find_homomorphism, HomSearch, DEFAULT_HOM_NODE_CAP};
use crate::cones::{generalized_cone, ConeGraph, ConeLabel, HomomorphismMap};
use crate::error::Error;
use crate::graph::{kneser, kneser_subsets, Graph};
use crate::indep::DEFAULT_MIS_CAP;
use crate::ratlp::{
    fractional_chromatic, verify_fractional_clique, verify_fractional_colouring,
    FractionalClique, FractionalColouring,
};
use crate::rational::{format_rational, pow, Rational};
use crate::Result;

/// Largest multiplier tried when searching a pattern embedding into a scaled
/// Kneser graph.
pub const DEFAULT_EMBED_SCALE_CAP: usize = 3;

fn rational_of(k: usize) -> Rational {
    Rational::from_integer(k.into())
}

/// `1 + x + ... + x^{n-1}`, exactly.
fn geometric_sum(x: &Rational, n: usize) -> Rational {
    let mut sum = Rational::zero();
    let mut term = Rational::one();
    for _ in 0..n {
        sum += &term;
        term *= x;
    }
    sum
}

fn reduced_pair(x: &Rational) -> Result<(usize, usize)> {
    let s = x.numer().to_usize();
    let t = x.denom().to_usize();
    match (s, t) {
        (Some(s), Some(t)) => Ok((s, t)),
        _ => Err(Error::InvalidParameter(format!(
            "cannot reduce {} to a machine-sized fraction",
            format_rational(x)
        ))),
    }
}

/// The exact weight sequences used by the cone certificates, all derived from
/// `chi_f(G)`, `chi_f(H)` and the uniform height `n`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ConeParams {
    pub n: usize,
    pub chif_g: Rational,
    pub chif_h: Rational,
    /// `1 / sum_{k<n} (chif_G - 1)^k`; the even-height excess.
    pub tau: Rational,
    /// `1 / (chif_H * sum_{k<n} (chif_G - 1)^k + 1 - chif_H)`; the odd-height
    /// excess is `chif_H * tau_prime`.
    pub tau_prime: Rational,
    /// Clique layer weights `alpha_i = tau' * (chif_G - 1)^{n-1-i}`.
    pub alpha: Vec<Rational>,
    /// Even-height colouring weights `sigma_i = tau * (chif_G - 1)^i / t`
    /// with `(s, t)` = [`ConeParams::even_pattern`].
    pub sigma: Vec<Rational>,
    /// Odd-height colouring weights
    /// `sigma'_i = (chif_H / chif_G) * (tau' / t) * (chif_G - 1)^i`
    /// with `(s, t)` = [`ConeParams::odd_pattern`].
    pub sigma_prime: Vec<Rational>,
    /// Odd-height column weights `(index, delta_index)` over even indices
    /// `0, 2, ..., n-1`. `None` when `n` is even, `n = 1`, or `chif_G = 2`
    /// (the closed form divides by `chif_G - 2`). Entries may be negative;
    /// the colouring builder refuses such instances.
    pub delta: Option<Vec<(usize, Rational)>>,
    /// `chif_G` in lowest terms: the Kneser pattern `K(s, t)` of the
    /// even-height colouring.
    pub even_pattern: (usize, usize),
    /// `chif_H` in lowest terms: the Kneser pattern `K(s, t)` of the
    /// odd-height colouring.
    pub odd_pattern: (usize, usize),
}

fn tau_of(chif_g: &Rational, n: usize) -> Rational {
    geometric_sum(&(chif_g - Rational::one()), n).recip()
}

fn tau_prime_of(chif_g: &Rational, chif_h: &Rational, n: usize) -> Rational {
    let series = geometric_sum(&(chif_g - Rational::one()), n);
    (chif_h * series + Rational::one() - chif_h).recip()
}

fn sigma_vec(chif_g: &Rational, tau: &Rational, t: usize, n: usize) -> Vec<Rational> {
    let step = chif_g - Rational::one();
    let unit = tau / rational_of(t);
    (0..n).map(|i| &unit * pow(&step, i)).collect()
}

fn sigma_prime_vec(
    chif_g: &Rational,
    chif_h: &Rational,
    tau_prime: &Rational,
    t: usize,
    n: usize,
) -> Vec<Rational> {
    let step = chif_g - Rational::one();
    let unit = chif_h / chif_g * tau_prime / rational_of(t);
    (0..n).map(|i| &unit * pow(&step, i)).collect()
}

/// `delta_k` for even `k`, given `sigma'_0` and the pattern fraction
/// `chif_H = s / t`. Requires odd `n >= 3` and `chif_G != 2`.
fn delta_vec(
    chif_g: &Rational,
    sigma_prime_0: &Rational,
    s: usize,
    t: usize,
    n: usize,
) -> Vec<(usize, Rational)> {
    let step = chif_g - Rational::one();
    let s_r = rational_of(s);
    let t_r = rational_of(t);
    let chif_h = &s_r / &t_r;
    let two = rational_of(2);
    let bump = sigma_prime_0 * (&t_r * chif_g - &s_r) / (chif_g - &two);
    let mut out = Vec::new();
    for k in (0..n).step_by(2) {
        let value = if k == 0 {
            &s_r * sigma_prime_0 + &bump * (chif_g - &two)
        } else if k == n - 1 {
            (chif_g - &chif_h) / chif_g
                - &bump * (pow(&step, n - 2) - Rational::one())
                - (&s_r - &t_r) * sigma_prime_0
        } else {
            &bump * (pow(&step, k + 1) - pow(&step, k - 1))
        };
        out.push((k, value));
    }
    out
}

/// Evaluates every weight sequence for the given invariants.
///
/// `chif_G >= 2` (the base graph must have an edge) and `chif_H >= 1`;
/// `chif_H <= chif_G` is *not* required here, only by the certificate
/// builders, so parameter reports can describe out-of-scope pairs too.
pub fn cone_parameters(chif_g: &Rational, chif_h: &Rational, n: usize) -> Result<ConeParams> {
    if n == 0 {
        return Err(Error::InvalidParameter("height must be at least 1".into()));
    }
    if *chif_g < rational_of(2) {
        return Err(Error::InvalidParameter(format!(
            "base fractional chromatic number must be at least 2, got {}",
            format_rational(chif_g)
        )));
    }
    if *chif_h < Rational::one() {
        return Err(Error::InvalidParameter(format!(
            "pattern fractional chromatic number must be at least 1, got {}",
            format_rational(chif_h)
        )));
    }
    let even_pattern = reduced_pair(chif_g)?;
    let odd_pattern = reduced_pair(chif_h)?;
    let tau = tau_of(chif_g, n);
    let tau_prime = tau_prime_of(chif_g, chif_h, n);
    let step = chif_g - Rational::one();
    let alpha: Vec<Rational> = (0..n).map(|i| &tau_prime * pow(&step, n - 1 - i)).collect();
    let sigma = sigma_vec(chif_g, &tau, even_pattern.1, n);
    let sigma_prime = sigma_prime_vec(chif_g, chif_h, &tau_prime, odd_pattern.1, n);
    let delta = if n % 2 == 1 && n >= 3 && *chif_g != rational_of(2) {
        Some(delta_vec(chif_g, &sigma_prime[0], odd_pattern.0, odd_pattern.1, n))
    } else {
        None
    };
    Ok(ConeParams {
        n,
        chif_g: chif_g.clone(),
        chif_h: chif_h.clone(),
        tau,
        tau_prime,
        alpha,
        sigma,
        sigma_prime,
        delta,
        even_pattern,
        odd_pattern,
    })
}

impl ConeParams {
    pub fn to_json(&self) -> Value {
        let rats = |v: &[Rational]| -> Value {
            Value::Array(v.iter().map(|x| Value::String(format_rational(x))).collect())
        };
        json!({
            "n": self.n,
            "chif_G": format_rational(&self.chif_g),
            "chif_H": format_rational(&self.chif_h),
            "tau": format_rational(&self.tau),
            "tau_prime": format_rational(&self.tau_prime),
            "alpha": rats(&self.alpha),
            "sigma": rats(&self.sigma),
            "sigma_prime": rats(&self.sigma_prime),
            "delta": self.delta.as_ref().map(|d| -> Value {
                Value::Array(
                    d.iter()
                        .map(|(k, v)| json!({ "index": k, "value": format_rational(v) }))
                        .collect(),
                )
            }),
            "even_pattern": { "s": self.even_pattern.0, "t": self.even_pattern.1 },
            "odd_pattern": { "s": self.odd_pattern.0, "t": self.odd_pattern.1 },
        })
    }
}

/// Parity of the uniform height, which selects the closed form.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Parity {
    Even,
    Odd,
}

/// The closed-form fractional chromatic number of a uniform-height cone.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TheoremValue {
    pub parity: Parity,
    pub value: Rational,
}

impl TheoremValue {
    pub fn to_json(&self) -> Value {
        json!({
            "parity": match self.parity { Parity::Even => "even", Parity::Odd => "odd" },
            "value": format_rational(&self.value),
        })
    }
}

/// `chi_f` of the height-`n` cone over a base with `chif_G`, pattern with
/// `chif_H`: `chif_G + tau` for even `n`, `chif_G + chif_H * tau'` for odd
/// `n`. Requires `1 <= chif_H <= chif_G`; `chif_H > chif_G` is outside the
/// closed form's scope. At `n = 1` the cone is the join and the value is
/// `chif_G + chif_H`.
pub fn theorem_value(chif_g: &Rational, chif_h: &Rational, n: usize) -> Result<TheoremValue> {
    if n == 0 {
        return Err(Error::InvalidParameter("height must be at least 1".into()));
    }
    if *chif_h < Rational::one() {
        return Err(Error::InvalidParameter(format!(
            "pattern fractional chromatic number must be at least 1, got {}",
            format_rational(chif_h)
        )));
    }
    if chif_h > chif_g {
        return Err(Error::OutOfScope(format!(
            "closed form needs chif_H <= chif_G, got {} > {}",
            format_rational(chif_h),
            format_rational(chif_g)
        )));
    }
    if n.is_multiple_of(2) {
        Ok(TheoremValue { parity: Parity::Even, value: chif_g + tau_of(chif_g, n) })
    } else {
        let value = chif_g + chif_h * tau_prime_of(chif_g, chif_h, n);
        Ok(TheoremValue { parity: Parity::Odd, value })
    }
}

/// One named algebraic identity, checked exactly.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub holds: bool,
}

/// Outcome of checking every identity applicable to a parameter set.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IdentityReport {
    pub checks: Vec<IdentityCheck>,
    pub all_hold: bool,
}

impl IdentityReport {
    pub fn to_json(&self) -> Value {
        json!({
            "all_hold": self.all_hold,
            "checks": Value::Array(
                self.checks
                    .iter()
                    .map(|c| json!({ "name": c.name, "holds": c.holds }))
                    .collect(),
            ),
        })
    }
}

fn sum(values: &[Rational]) -> Rational {
    values.iter().fold(Rational::zero(), |acc, v| acc + v)
}

/// Checks the exact identities the weight sequences satisfy: the recurrences
/// that make consecutive layers exchangeable, the normalization sums that cap
/// independent sets at weight 1, and the prefix-exchange equalities that the
/// odd-height colouring's coverage argument rests on. Checks that need parts
/// absent from `p` (the even-height sums for odd `n`, the delta identities
/// when `delta` is `None`) are skipped rather than reported.
pub fn check_parameter_identities(p: &ConeParams) -> IdentityReport {
    let n = p.n;
    let one = Rational::one();
    let c = &p.chif_g;
    let h = &p.chif_h;
    let series = geometric_sum(&(c - &one), n);
    let (s_even, _) = p.even_pattern;
    let (s_odd, t_odd) = p.odd_pattern;
    let s_r = rational_of(s_odd);
    let t_r = rational_of(t_odd);

    let mut checks: Vec<IdentityCheck> = Vec::new();
    let mut push = |name: &'static str, holds: bool| checks.push(IdentityCheck { name, holds });

    push("tau-inverts-geometric-sum", &p.tau * &series == one);
    push(
        "tau-prime-forms-agree",
        (h * (&series - &one) + &one).recip() == p.tau_prime,
    );

    push(
        "alpha-pair-recurrence",
        (0..n - 1).all(|k| &p.alpha[k] + &p.alpha[k + 1] == &p.alpha[k + 1] * c),
    );
    let alpha_head = sum(&p.alpha[..n - 1]);
    push(
        "alpha-sum-over-pattern",
        &alpha_head + &p.alpha[n - 1] / h == one.clone() / h,
    );
    push("alpha-sum-scaled-to-one", h * &alpha_head + &p.alpha[n - 1] == one);

    push(
        "sigma-pair-recurrence",
        (0..n - 1).all(|k| &p.sigma[k] + &p.sigma[k + 1] == &p.sigma[k] * c),
    );
    push(
        "sigma-prime-pair-recurrence",
        (0..n - 1).all(|k| &p.sigma_prime[k] + &p.sigma_prime[k + 1] == &p.sigma_prime[k] * c),
    );

    let tail = sum(&p.sigma_prime[1..]);
    push(
        "sigma-prime-weighted-tail",
        &s_r * &tail == h / c - &t_r * &p.sigma_prime[0],
    );
    push(
        "apex-weight-observation",
        &s_r / &t_r * &p.tau_prime == &t_r * &p.sigma_prime[0] * c,
    );

    if n.is_multiple_of(2) {
        let even_sum: Rational =
            (0..n - 1).step_by(2).fold(Rational::zero(), |acc, i| acc + &p.sigma[i]);
        push("sigma-even-sum-inverts-s", even_sum == rational_of(s_even).recip());
        push("sigma-even-sum-is-total-over-chif", even_sum == sum(&p.sigma) / c);
    }

    if let Some(delta) = &p.delta {
        let delta_total = delta.iter().fold(Rational::zero(), |acc, (_, v)| acc + v);
        push(
            "delta-even-sum",
            delta_total == &t_r * &p.sigma_prime[0] + (c - h) / c,
        );
        push("sigma-delta-unit-sum", &s_r * &tail + &delta_total == one);

        // Partial sums: delta over even indices < limit, sigma' over 1..=limit.
        let delta_below = |limit: usize| -> Rational {
            delta
                .iter()
                .filter(|(k, _)| *k < limit)
                .fold(Rational::zero(), |acc, (_, v)| acc + v)
        };
        push(
            "even-prefix-exchange",
            (2..n).step_by(2).all(|i| {
                let head = sum(&p.sigma_prime[1..i]);
                let full = sum(&p.sigma_prime[1..=i]);
                let d = delta_below(i - 1);
                (&s_r - &t_r) * &head * c + &d * c == &s_r * &full + &d
            }),
        );
        push(
            "odd-prefix-exchange",
            (1..n - 1).step_by(2).all(|i| {
                let with_zero = sum(&p.sigma_prime[..i]);
                let without_zero = sum(&p.sigma_prime[1..i]);
                &t_r * &with_zero * c - &s_r * &without_zero == delta_below(i)
            }),
        );
    }

    let all_hold = checks.iter().all(|c| c.holds);
    IdentityReport { checks, all_hold }
}

fn label_strings(cone: &ConeGraph) -> Value {
    Value::Array(cone.labels().iter().map(|l| Value::String(l.code())).collect())
}

/// A fractional clique on a uniform-height cone together with its weight.
#[derive(Clone, Debug)]
pub struct CliqueCertificate {
    pub cone: ConeGraph,
    pub clique: FractionalClique,
    pub total: Rational,
}

impl CliqueCertificate {
    pub fn to_json(&self) -> Value {
        json!({
            "kind": "fractional-clique",
            "vertices": self.cone.graph().vertex_count(),
            "total": format_rational(&self.total),
            "labels": label_strings(&self.cone),
            "weights": self.clique.to_json(),
        })
    }
}

/// A fractional colouring of a uniform-height cone together with its weight.
#[derive(Clone, Debug)]
pub struct ColouringCertificate {
    pub cone: ConeGraph,
    pub colouring: FractionalColouring,
    pub total: Rational,
}

impl ColouringCertificate {
    pub fn to_json(&self) -> Value {
        json!({
            "kind": "fractional-colouring",
            "vertices": self.cone.graph().vertex_count(),
            "total": format_rational(&self.total),
            "labels": label_strings(&self.cone),
            "entries": self.colouring.to_json(),
        })
    }
}

fn require_odd_height(n: usize) -> Result<()> {
    if n < 3 || n.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!(
            "this construction needs an odd height of at least 3, got {n}"
        )));
    }
    Ok(())
}

fn optimal_clique_weights<'a>(
    g: &Graph,
    clique: &'a FractionalClique,
    chif: &Rational,
    role: &str,
) -> Result<&'a [Rational]> {
    let check = verify_fractional_clique(g, clique, DEFAULT_MIS_CAP)?;
    if !check.valid {
        return Err(Error::Refused(format!("{role} weights are not a fractional clique")));
    }
    if check.total != *chif {
        return Err(Error::Refused(format!(
            "{role} weights total {} but an optimal fractional clique totals {}",
            format_rational(&check.total),
            format_rational(chif)
        )));
    }
    Ok(&clique.weights)
}

fn require_optimal_colouring(g: &Graph, mu: &FractionalColouring, chif: &Rational) -> Result<()> {
    let check = verify_fractional_colouring(g, mu)?;
    if !check.valid {
        return Err(Error::Refused(
            "base weights are not a fractional colouring over independent sets".into(),
        ));
    }
    if check.total != *chif {
        return Err(Error::Refused(format!(
            "base colouring totals {} but an optimal fractional colouring totals {}",
            format_rational(&check.total),
            format_rational(chif)
        )));
    }
    Ok(())
}

/// Builds the fractional clique of weight `chif_G + chif_H * tau'` on the
/// odd-height cone `(G, H, n)`, from optimal fractional cliques `nu` of the
/// base and `eta` of the pattern.
///
/// Layer `i >= 1` of copy `v` carries `alpha_i * nu(x) * eta(v)`; the apexes
/// carry `tau' * eta(v)`; the shared base absorbs every copy's layer-0 mass,
/// `(alpha_0 - (1 - 1/chif_H) * alpha_{n-1}) * nu(x) * chif_H`.
pub fn build_clique_certificate_odd(
    g: &Graph,
    h: &Graph,
    n: usize,
    nu: &FractionalClique,
    eta: &FractionalClique,
) -> Result<CliqueCertificate> {
    require_odd_height(n)?;
    let chif_g = fractional_chromatic(g)?.value;
    let chif_h = fractional_chromatic(h)?.value;
    if chif_h > chif_g {
        return Err(Error::OutOfScope(format!(
            "construction needs chif(H) <= chif(G), got {} > {}",
            format_rational(&chif_h),
            format_rational(&chif_g)
        )));
    }
    let nu = optimal_clique_weights(g, nu, &chif_g, "base clique")?;
    let eta = optimal_clique_weights(h, eta, &chif_h, "pattern clique")?;
    let p = cone_parameters(&chif_g, &chif_h, n)?;
    let cone = generalized_cone(g, h, &vec![n; h.vertex_count()])?;

    let base_coef =
        (&p.alpha[0] - (Rational::one() - chif_h.recip()) * &p.alpha[n - 1]) * &chif_h;
    let weights: Vec<Rational> = cone
        .labels()
        .iter()
        .map(|&label| match label {
            ConeLabel::Base(x) => &base_coef * &nu[x],
            ConeLabel::Inner { x, layer, copy } => &p.alpha[layer] * &nu[x] * &eta[copy],
            ConeLabel::Apex(v) => &p.tau_prime * &eta[v],
        })
        .collect();
    let total = sum(&weights);
    let expected = &chif_g + &chif_h * &p.tau_prime;
    assert_eq!(total, expected, "clique weight must match the closed form");
    Ok(CliqueCertificate { cone, clique: FractionalClique { weights }, total })
}

/// Accumulates `weight` onto the (deduplicated, sorted) `set`.
fn accumulate(map: &mut BTreeMap<Vec<usize>, Rational>, set: BTreeSet<usize>, weight: Rational) {
    if weight.is_zero() {
        return;
    }
    let key: Vec<usize> = set.into_iter().collect();
    map.entry(key).and_modify(|w| *w += &weight).or_insert(weight);
}

/// Pattern vertices (t-subsets of `{1..s}`) grouped by which elements they
/// contain: `members[j]` lists copies whose subset contains `j`, and
/// `others[j]` the rest. Index 0 is unused.
type MembershipTables = (Vec<Vec<usize>>, Vec<Vec<usize>>);

fn kneser_membership(s: usize, t: usize) -> Result<MembershipTables> {
    let subsets = kneser_subsets(s, t)?;
    let mut members = vec![Vec::new(); s + 1];
    let mut others = vec![Vec::new(); s + 1];
    for j in 1..=s {
        for (v, subset) in subsets.iter().enumerate() {
            if subset.contains(&j) {
                members[j].push(v);
            } else {
                others[j].push(v);
            }
        }
    }
    Ok((members, others))
}

struct ConeSets<'a> {
    cone: &'a ConeGraph,
    set: BTreeSet<usize>,
}

impl<'a> ConeSets<'a> {
    fn new(cone: &'a ConeGraph) -> Self {
        ConeSets { cone, set: BTreeSet::new() }
    }

    fn base(&mut self, x: usize) {
        self.set.insert(self.cone.base_vertex(x).expect("base vertex"));
    }

    /// Layers `0..=top` of copy `v`, restricted to base vertices in `xs`
    /// (layer 0 is the shared base).
    fn column(&mut self, xs: &[usize], top: usize, v: usize) {
        for &x in xs {
            self.base(x);
            for layer in 1..=top {
                self.set.insert(self.cone.inner_vertex(x, layer, v).expect("inner vertex"));
            }
        }
    }

    /// Layers `1..=top` of copy `v` over `xs`, base excluded.
    fn inner_column(&mut self, xs: &[usize], top: usize, v: usize) {
        for &x in xs {
            for layer in 1..=top {
                self.set.insert(self.cone.inner_vertex(x, layer, v).expect("inner vertex"));
            }
        }
    }

    /// Every vertex of copy `v` on layers `from, from+2, ...` up to `to`.
    fn layer_stride(&mut self, from: usize, to: usize, v: usize) {
        if from > to {
            return;
        }
        let ng = self.cone.base().vertex_count();
        for layer in (from..=to).step_by(2) {
            for x in 0..ng {
                self.set.insert(self.cone.inner_vertex(x, layer, v).expect("inner vertex"));
            }
        }
    }

    fn apex(&mut self, v: usize) {
        self.set.insert(self.cone.apex_vertex(v).expect("apex vertex"));
    }

    fn take(&mut self) -> BTreeSet<usize> {
        std::mem::take(&mut self.set)
    }
}

/// Builds the fractional colouring of weight `chif_G + tau` on the
/// even-height cone over `g` with pattern `K(s, t)`, where `s / t = chif_G`
/// and `mu` is an optimal fractional colouring of `g`.
///
/// For each even level `k <= n-2`, element `j` of `{1..s}` and support set
/// `I` of `mu`, one independent set of weight `sigma_k * mu(I)` pairs the
/// column `I x {0..k}` with alternating full layers above it: copies
/// containing `j` stop one layer lower and contribute their apex, the others
/// run one layer higher without it. One final set of weight `tau` takes every
/// odd layer of every copy.
pub fn build_colouring_certificate_even(
    g: &Graph,
    s: usize,
    t: usize,
    n: usize,
    mu: &FractionalColouring,
) -> Result<ColouringCertificate> {
    if n < 2 || n % 2 == 1 {
        return Err(Error::InvalidParameter(format!(
            "this construction needs an even height of at least 2, got {n}"
        )));
    }
    let chif_g = fractional_chromatic(g)?.value;
    if chif_g != rational_of(s) / rational_of(t) {
        return Err(Error::Refused(format!(
            "pattern parameters give {s}/{t} but the base has fractional chromatic number {}",
            format_rational(&chif_g)
        )));
    }
    require_optimal_colouring(g, mu, &chif_g)?;
    let pattern = kneser(s, t)?;
    let (members, others) = kneser_membership(s, t)?;
    let cone = generalized_cone(g, &pattern, &vec![n; pattern.vertex_count()])?;
    let tau = tau_of(&chif_g, n);
    let sigma = sigma_vec(&chif_g, &tau, t, n);

    let mut map: BTreeMap<Vec<usize>, Rational> = BTreeMap::new();
    let mut build = ConeSets::new(&cone);
    for k in (0..n - 1).step_by(2) {
        for j in 1..=s {
            for (support, weight) in &mu.entries {
                if weight.is_zero() {
                    continue;
                }
                for &v in &members[j] {
                    build.column(support, k, v);
                    build.layer_stride(k + 2, n - 2, v);
                    build.apex(v);
                }
                for &v in &others[j] {
                    build.column(support, k + 1, v);
                    build.layer_stride(k + 3, n - 1, v);
                }
                accumulate(&mut map, build.take(), &sigma[k] * weight);
            }
        }
    }
    for v in 0..pattern.vertex_count() {
        build.layer_stride(1, n - 1, v);
    }
    accumulate(&mut map, build.take(), tau.clone());

    let entries: Vec<(Vec<usize>, Rational)> = map.into_iter().collect();
    let colouring = FractionalColouring { entries };
    let total = colouring.total();
    assert_eq!(total, &chif_g + &tau, "colouring weight must match the closed form");
    Ok(ColouringCertificate { cone, colouring, total })
}

/// Builds the fractional colouring of weight `chif_G + (s/t) * tau'` on the
/// odd-height cone over `g` with pattern `K(s, t)`, where `s / t <= chif_G`
/// plays the role of `chif_H`, `s >= 2t`, and `mu` is an optimal fractional
/// colouring of `g`.
///
/// Three families cover the cone: per odd level `k` and element `j`, a set of
/// weight `(sigma'_k + sigma'_{k+1}) * mu(I)` staggered like the even-height
/// family but with the roles of the two copy groups exchanged; per even level
/// `k`, a set of weight `delta_k * mu(I)` using all copies uniformly; and per
/// element `j`, a set of weight `tau' / t` of all odd layers plus the apexes
/// of copies containing `j`. Any negative `delta_k` aborts the build with
/// [`Error::NegativeWeight`].
pub fn build_colouring_certificate_odd(
    g: &Graph,
    s: usize,
    t: usize,
    n: usize,
    mu: &FractionalColouring,
) -> Result<ColouringCertificate> {
    require_odd_height(n)?;
    if s < 2 * t {
        return Err(Error::Refused(format!(
            "Kneser pattern needs s >= 2t for its fractional chromatic number to be s/t, \
             got s = {s}, t = {t}"
        )));
    }
    let chif_g = fractional_chromatic(g)?.value;
    let chif_h = rational_of(s) / rational_of(t);
    if chif_h > chif_g {
        return Err(Error::OutOfScope(format!(
            "construction needs s/t <= chif(G), got {} > {}",
            format_rational(&chif_h),
            format_rational(&chif_g)
        )));
    }
    if chif_g == rational_of(2) {
        return Err(Error::Singular(
            "odd-height column weights divide by chif(G) - 2; a bipartite base needs \
             the even-height construction instead"
                .into(),
        ));
    }
    require_optimal_colouring(g, mu, &chif_g)?;
    let tau_prime = tau_prime_of(&chif_g, &chif_h, n);
    let sigma_prime = sigma_prime_vec(&chif_g, &chif_h, &tau_prime, t, n);
    let delta = delta_vec(&chif_g, &sigma_prime[0], s, t, n);
    for (index, value) in &delta {
        if value.is_negative() {
            return Err(Error::NegativeWeight { index: *index, value: format_rational(value) });
        }
    }
    let pattern = kneser(s, t)?;
    let (members, others) = kneser_membership(s, t)?;
    let cone = generalized_cone(g, &pattern, &vec![n; pattern.vertex_count()])?;

    let mut map: BTreeMap<Vec<usize>, Rational> = BTreeMap::new();
    let mut build = ConeSets::new(&cone);
    for k in (1..n - 1).step_by(2) {
        let level_weight = &sigma_prime[k] + &sigma_prime[k + 1];
        for j in 1..=s {
            for (support, weight) in &mu.entries {
                if weight.is_zero() {
                    continue;
                }
                for &v in &others[j] {
                    build.inner_column(support, k + 1, v);
                    build.layer_stride(k + 3, n - 1, v);
                }
                for &v in &members[j] {
                    build.column(support, k, v);
                    build.layer_stride(k + 2, n - 2, v);
                    build.apex(v);
                }
                accumulate(&mut map, build.take(), &level_weight * weight);
            }
        }
    }
    for (k, value) in &delta {
        for (support, weight) in &mu.entries {
            if weight.is_zero() {
                continue;
            }
            for v in 0..pattern.vertex_count() {
                build.column(support, *k, v);
                build.layer_stride(k + 2, n - 1, v);
            }
            accumulate(&mut map, build.take(), value * weight);
        }
    }
    let apex_weight = &tau_prime / rational_of(t);
    for copies in members.iter().skip(1) {
        for v in 0..pattern.vertex_count() {
            build.layer_stride(1, n - 2, v);
        }
        for &v in copies {
            build.apex(v);
        }
        accumulate(&mut map, build.take(), apex_weight.clone());
    }

    let entries: Vec<(Vec<usize>, Rational)> = map.into_iter().collect();
    let colouring = FractionalColouring { entries };
    let total = colouring.total();
    let expected = &chif_g + &chif_h * &tau_prime;
    assert_eq!(total, expected, "colouring weight must match the closed form");
    Ok(ColouringCertificate { cone, colouring, total })
}

/// A verified proper colouring of a generalized cone, witnessing
/// `chi <= colours_used <= bound`.
#[derive(Clone, Debug)]
pub struct UpperColouring {
    pub cone: ConeGraph,
    pub colouring: Vec<usize>,
    pub colours_used: usize,
    /// `chi(G) + chi(H[X]) + 1` where `X` holds the height-1 copies.
    pub bound: usize,
}

impl UpperColouring {
    pub fn to_json(&self) -> Value {
        json!({
            "kind": "proper-colouring",
            "vertices": self.cone.graph().vertex_count(),
            "colours_used": self.colours_used,
            "bound": self.bound,
            "labels": label_strings(&self.cone),
            "colouring": self.colouring,
        })
    }
}

/// Properly colours the cone over `g` with pattern `h` and the given heights,
/// using at most `chi(G) + chi(H[X]) + 1` colours, where `X` is the set of
/// height-1 copies. Requires `chi(H - X) <= chi(G)`.
///
/// Base vertices keep an optimal colouring of `g`. Inside every copy, odd
/// layers share one fresh colour and even layers reuse the last base colour.
/// Height-1 apexes (adjacent to the whole base) take fresh colours from an
/// optimal colouring of `H[X]`; the remaining apexes reuse base colours via
/// an optimal colouring of `H - X`, diverting to the fresh odd-layer colour
/// when an odd height would clash with the last base colour.
pub fn chromatic_upper_colouring(g: &Graph, h: &Graph, heights: &[usize]) -> Result<UpperColouring> {
    let cone = generalized_cone(g, h, heights)?;
    let unit: Vec<usize> = (0..h.vertex_count()).filter(|&v| heights[v] == 1).collect();
    let taller: Vec<usize> = (0..h.vertex_count()).filter(|&v| heights[v] > 1).collect();

    let base = crate::chromatic::chromatic_number(g)?;
    let k = base.chi;
    let on_unit = crate::chromatic::chromatic_number(&h.induced_subgraph(&unit)?)?;
    let on_taller = crate::chromatic::chromatic_number(&h.induced_subgraph(&taller)?)?;
    if on_taller.chi > k {
        return Err(Error::OutOfScope(format!(
            "pattern minus its height-1 copies needs {} colours but the base needs only {k}",
            on_taller.chi
        )));
    }
    let special = k + on_unit.chi;
    let unit_pos: BTreeMap<usize, usize> = unit.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let taller_pos: BTreeMap<usize, usize> =
        taller.iter().enumerate().map(|(i, &v)| (v, i)).collect();

    let colouring: Vec<usize> = cone
        .labels()
        .iter()
        .map(|&label| match label {
            ConeLabel::Base(x) => base.colouring[x],
            ConeLabel::Inner { layer, .. } => {
                if layer % 2 == 1 {
                    special
                } else {
                    k - 1
                }
            }
            ConeLabel::Apex(v) => {
                if let Some(&i) = unit_pos.get(&v) {
                    k + on_unit.colouring[i]
                } else {
                    let colour = on_taller.colouring[taller_pos[&v]];
                    if heights[v] % 2 == 1 && colour == k - 1 {
                        special
                    } else {
                        colour
                    }
                }
            }
        })
        .collect();

    for (u, v) in cone.graph().edges() {
        assert_ne!(colouring[u], colouring[v], "cone colouring must be proper at {u}-{v}");
    }
    let colours_used = colouring.iter().collect::<BTreeSet<_>>().len();
    let bound = k + on_unit.chi + 1;
    assert!(colours_used <= bound, "colour count must stay within the bound");
    Ok(UpperColouring { cone, colouring, colours_used, bound })
}

/// A homomorphism of the pattern into a scaled Kneser graph `K(s, t)`,
/// found by [`embed_into_kneser`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct KneserEmbedding {
    /// The multiplier `m` with `s = s0 * m`, `t = t0 * m`.
    pub scale: usize,
    pub s: usize,
    pub t: usize,
    /// Image of each pattern vertex in [`kneser_subsets`] order.
    pub map: Vec<usize>,
}

impl KneserEmbedding {
    /// The embedding as a checkable homomorphism from `h` into `K(s, t)`.
    pub fn homomorphism(&self, h: &Graph) -> Result<HomomorphismMap> {
        Ok(HomomorphismMap { source: h.clone(), target: kneser(self.s, self.t)?, map: self.map.clone() })
    }
}

/// Searches for a homomorphism `h -> K(s0 * m, t0 * m)`, trying multipliers
/// `m = 1, 2, ..., scale_cap` in order. Exhausting every multiplier without
/// finding one (or hitting the search node cap) is reported as
/// [`Error::CapExceeded`]: larger multipliers could still succeed, so a
/// missing embedding is never claimed.
pub fn embed_into_kneser(
    h: &Graph,
    s0: usize,
    t0: usize,
    scale_cap: usize,
) -> Result<KneserEmbedding> {
    if scale_cap == 0 {
        return Err(Error::InvalidParameter("scale cap must be at least 1".into()));
    }
    for m in 1..=scale_cap {
        let (s, t) = (s0 * m, t0 * m);
        let pattern = kneser(s, t)?;
        match find_homomorphism(h, &pattern, DEFAULT_HOM_NODE_CAP)? {
            HomSearch::Found(map) => return Ok(KneserEmbedding { scale: m, s, t, map }),
            HomSearch::NoneExhausted { .. } => continue,
            HomSearch::CapExceeded { .. } => {
                return Err(Error::CapExceeded(format!(
                    "homomorphism search into K({s}, {t}) hit the node cap"
                )));
            }
        }
    }
    Err(Error::CapExceeded(format!(
        "no homomorphism into K({s0}m, {t0}m) found for any scale m <= {scale_cap}"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete, cycle};
    use crate::rational::rat;

    fn unit_clique(n: usize) -> FractionalClique {
        FractionalClique { weights: vec![Rational::one(); n] }
    }

    fn singleton_colouring(n: usize) -> FractionalColouring {
        FractionalColouring {
            entries: (0..n).map(|v| (vec![v], Rational::one())).collect(),
        }
    }

    /// The five maximum independent pairs of the 5-cycle, each with weight
    /// 1/2: an optimal fractional colouring of total 5/2.
    fn pentagon_colouring() -> FractionalColouring {
        FractionalColouring {
            entries: (0..5).map(|v| (vec![v, (v + 2) % 5], rat(1, 2))).collect(),
        }
    }

    fn pentagon_clique() -> FractionalClique {
        FractionalClique { weights: vec![rat(1, 2); 5] }
    }

    #[test]
    fn parameters_match_hand_computations() {
        let p = cone_parameters(&rat(3, 1), &rat(2, 1), 3).unwrap();
        assert_eq!(p.tau, rat(1, 7));
        assert_eq!(p.tau_prime, rat(1, 13));
        assert_eq!(p.alpha, vec![rat(4, 13), rat(2, 13), rat(1, 13)]);
        assert_eq!(p.sigma_prime, vec![rat(2, 39), rat(4, 39), rat(8, 39)]);
        assert_eq!(p.delta, Some(vec![(0, rat(2, 13)), (2, rat(3, 13))]));
        assert_eq!((p.even_pattern, p.odd_pattern), ((3, 1), (2, 1)));

        let p = cone_parameters(&rat(5, 2), &rat(2, 1), 3).unwrap();
        assert_eq!(p.tau_prime, rat(2, 17));
        assert_eq!(p.delta, Some(vec![(0, rat(4, 17)), (2, rat(1, 17))]));
        assert_eq!(p.even_pattern, (5, 2));

        // Equal base and pattern invariants push the last column weight
        // negative; the parameters still evaluate.
        let p = cone_parameters(&rat(3, 1), &rat(3, 1), 3).unwrap();
        assert_eq!(p.tau_prime, rat(1, 19));
        assert_eq!(p.delta, Some(vec![(0, rat(3, 19)), (2, rat(-2, 19))]));

        // Height 1: the cone is the join, and every sequence collapses.
        let p = cone_parameters(&rat(3, 1), &rat(2, 1), 1).unwrap();
        assert_eq!(p.tau_prime, Rational::one());
        assert_eq!(p.alpha, vec![Rational::one()]);
        assert_eq!(p.delta, None);

        // A bipartite base has no odd-height column weights.
        let p = cone_parameters(&rat(2, 1), &rat(2, 1), 3).unwrap();
        assert_eq!(p.delta, None);

        assert!(matches!(
            cone_parameters(&rat(3, 2), &rat(1, 1), 2),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(
            cone_parameters(&rat(3, 1), &rat(1, 2), 2),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(
            cone_parameters(&rat(3, 1), &rat(2, 1), 0),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn theorem_values_match_examples() {
        let even = theorem_value(&rat(3, 1), &rat(2, 1), 2).unwrap();
        assert_eq!((even.parity, even.value), (Parity::Even, rat(10, 3)));
        let odd = theorem_value(&rat(3, 1), &rat(2, 1), 3).unwrap();
        assert_eq!((odd.parity, odd.value), (Parity::Odd, rat(41, 13)));
        assert_eq!(theorem_value(&rat(3, 1), &rat(3, 1), 3).unwrap().value, rat(60, 19));
        assert_eq!(theorem_value(&rat(5, 2), &rat(2, 1), 2).unwrap().value, rat(29, 10));
        assert_eq!(theorem_value(&rat(5, 2), &rat(2, 1), 3).unwrap().value, rat(93, 34));
        // Height 1 is the join.
        assert_eq!(theorem_value(&rat(3, 1), &rat(2, 1), 1).unwrap().value, rat(5, 1));
        // The even-height value ignores the pattern.
        assert_eq!(
            theorem_value(&rat(3, 1), &rat(1, 1), 4).unwrap().value,
            theorem_value(&rat(3, 1), &rat(3, 1), 4).unwrap().value,
        );

        assert!(matches!(
            theorem_value(&rat(2, 1), &rat(5, 2), 3),
            Err(Error::OutOfScope(_))
        ));
        assert!(matches!(
            theorem_value(&rat(3, 1), &rat(2, 1), 0),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn identities_hold_across_parameter_grid() {
        let gs = [rat(3, 1), rat(5, 2), rat(7, 3), rat(10, 3)];
        let hs = [rat(2, 1), rat(5, 2)];
        for chif_g in &gs {
            for chif_h in &hs {
                if chif_h > chif_g {
                    continue;
                }
                for n in [1, 2, 3, 4, 5, 7] {
                    let p = cone_parameters(chif_g, chif_h, n).unwrap();
                    let report = check_parameter_identities(&p);
                    assert!(
                        report.all_hold,
                        "identity failed for chif_G = {}, chif_H = {}, n = {n}: {:?}",
                        format_rational(chif_g),
                        format_rational(chif_h),
                        report.checks.iter().filter(|c| !c.holds).collect::<Vec<_>>(),
                    );
                }
            }
        }
    }

    #[test]
    fn identity_report_adapts_to_parameters() {
        let names = |p: &ConeParams| -> Vec<&'static str> {
            check_parameter_identities(p).checks.iter().map(|c| c.name).collect()
        };
        let odd = cone_parameters(&rat(3, 1), &rat(2, 1), 3).unwrap();
        assert!(names(&odd).contains(&"sigma-delta-unit-sum"));
        assert!(!names(&odd).contains(&"sigma-even-sum-inverts-s"));
        let even = cone_parameters(&rat(3, 1), &rat(2, 1), 4).unwrap();
        assert!(names(&even).contains(&"sigma-even-sum-inverts-s"));
        assert!(!names(&even).contains(&"sigma-delta-unit-sum"));
        // Identities hold even when a column weight is negative.
        let tight = cone_parameters(&rat(3, 1), &rat(3, 1), 3).unwrap();
        assert!(check_parameter_identities(&tight).all_hold);
    }

    #[test]
    fn clique_certificate_on_triangle() {
        let g = complete(3).unwrap();
        let h = complete(2).unwrap();
        let cert =
            build_clique_certificate_odd(&g, &h, 3, &unit_clique(3), &unit_clique(2)).unwrap();
        assert_eq!(cert.total, rat(41, 13));
        assert_eq!(cert.cone.graph().vertex_count(), 17);
        // Base weight 7/13 each, apex weight 1/13 each.
        let base_id = cert.cone.base_vertex(0).unwrap();
        assert_eq!(cert.clique.weights[base_id], rat(7, 13));
        let apex_id = cert.cone.apex_vertex(1).unwrap();
        assert_eq!(cert.clique.weights[apex_id], rat(1, 13));
        let check =
            verify_fractional_clique(cert.cone.graph(), &cert.clique, DEFAULT_MIS_CAP).unwrap();
        assert!(check.valid);
        assert_eq!(check.total, rat(41, 13));
    }

    #[test]
    fn clique_certificate_on_pentagon() {
        let g = cycle(5).unwrap();
        let h = complete(2).unwrap();
        let cert =
            build_clique_certificate_odd(&g, &h, 3, &pentagon_clique(), &unit_clique(2)).unwrap();
        assert_eq!(cert.total, rat(93, 34));
        let check =
            verify_fractional_clique(cert.cone.graph(), &cert.clique, DEFAULT_MIS_CAP).unwrap();
        assert!(check.valid);
        assert_eq!(check.total, rat(93, 34));
    }

    #[test]
    fn clique_certificate_rejections() {
        let g = cycle(5).unwrap();
        let h = complete(2).unwrap();
        // Weight 1 everywhere is not a fractional clique of the 5-cycle.
        assert!(matches!(
            build_clique_certificate_odd(&g, &h, 3, &unit_clique(5), &unit_clique(2)),
            Err(Error::Refused(_))
        ));
        // Optimality is required, not just feasibility.
        let slack = FractionalClique { weights: vec![rat(1, 4); 5] };
        assert!(matches!(
            build_clique_certificate_odd(&g, &h, 3, &slack, &unit_clique(2)),
            Err(Error::Refused(_))
        ));
        // The pattern may not beat the base.
        assert!(matches!(
            build_clique_certificate_odd(&h, &complete(3).unwrap(), 3, &unit_clique(2), &unit_clique(3)),
            Err(Error::OutOfScope(_))
        ));
        // Even heights use a different construction.
        assert!(matches!(
            build_clique_certificate_odd(&g, &h, 2, &pentagon_clique(), &unit_clique(2)),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn even_colouring_certificate_on_triangle() {
        let g = complete(3).unwrap();
        let cert = build_colouring_certificate_even(&g, 3, 1, 2, &singleton_colouring(3)).unwrap();
        assert_eq!(cert.total, rat(10, 3));
        // Pattern K(3,1) over height 2: base 3, one inner layer 3x3, 3 apexes.
        assert_eq!(cert.cone.graph().vertex_count(), 15);
        let check = verify_fractional_colouring(cert.cone.graph(), &cert.colouring).unwrap();
        assert!(check.valid);
        assert_eq!(check.total, rat(10, 3));
        assert_eq!(check.min_coverage, Some(Rational::one()));
        assert_eq!(check.max_coverage, Some(Rational::one()));
    }

    #[test]
    fn even_colouring_certificate_on_pentagon() {
        let g = cycle(5).unwrap();
        let cert = build_colouring_certificate_even(&g, 5, 2, 2, &pentagon_colouring()).unwrap();
        assert_eq!(cert.total, rat(29, 10));
        // Pattern K(5,2) over height 2: base 5, inner 5x10, 10 apexes.
        assert_eq!(cert.cone.graph().vertex_count(), 65);
        let check = verify_fractional_colouring(cert.cone.graph(), &cert.colouring).unwrap();
        assert!(check.valid);
        assert_eq!(check.total, rat(29, 10));
        assert_eq!(check.min_coverage, Some(Rational::one()));
        assert_eq!(check.max_coverage, Some(Rational::one()));
    }

    #[test]
    fn odd_colouring_certificate_on_triangle() {
        let g = complete(3).unwrap();
        let cert = build_colouring_certificate_odd(&g, 2, 1, 3, &singleton_colouring(3)).unwrap();
        assert_eq!(cert.total, rat(41, 13));
        assert_eq!(cert.cone.graph().vertex_count(), 17);
        let check = verify_fractional_colouring(cert.cone.graph(), &cert.colouring).unwrap();
        assert!(check.valid);
        assert_eq!(check.total, rat(41, 13));
        assert_eq!(check.min_coverage, Some(Rational::one()));
        assert_eq!(check.max_coverage, Some(Rational::one()));
    }

    #[test]
    fn odd_colouring_certificate_on_pentagon() {
        let g = cycle(5).unwrap();
        let cert = build_colouring_certificate_odd(&g, 2, 1, 3, &pentagon_colouring()).unwrap();
        assert_eq!(cert.total, rat(93, 34));
        assert_eq!(cert.cone.graph().vertex_count(), 27);
        let check = verify_fractional_colouring(cert.cone.graph(), &cert.colouring).unwrap();
        assert!(check.valid);
        assert_eq!(check.total, rat(93, 34));
        assert_eq!(check.min_coverage, Some(Rational::one()));
        assert_eq!(check.max_coverage, Some(Rational::one()));
    }

    #[test]
    fn odd_colouring_refuses_negative_column_weight() {
        // Equal base and pattern invariants: delta_2 = -2/19.
        let g = complete(3).unwrap();
        let err = build_colouring_certificate_odd(&g, 3, 1, 3, &singleton_colouring(3));
        match err {
            Err(Error::NegativeWeight { index, value }) => {
                assert_eq!(index, 2);
                assert_eq!(value, "-2/19");
            }
            other => panic!("expected a negative-weight refusal, got {other:?}"),
        }
    }

    #[test]
    fn colouring_certificate_rejections() {
        let g = cycle(5).unwrap();
        let mu = pentagon_colouring();
        // 3/1 is not the 5-cycle's fractional chromatic number.
        assert!(matches!(
            build_colouring_certificate_even(&g, 3, 1, 2, &mu),
            Err(Error::Refused(_))
        ));
        // Suboptimal base colourings are refused even when feasible.
        let heavy = FractionalColouring {
            entries: (0..5).map(|v| (vec![v], Rational::one())).collect(),
        };
        assert!(matches!(
            build_colouring_certificate_even(&g, 5, 2, 2, &heavy),
            Err(Error::Refused(_))
        ));
        // Odd heights: a bipartite base makes the column weights singular.
        let k2 = complete(2).unwrap();
        assert!(matches!(
            build_colouring_certificate_odd(&k2, 2, 1, 3, &singleton_colouring(2)),
            Err(Error::Singular(_))
        ));
        // s < 2t: the Kneser pattern would not have chi_f = s/t.
        assert!(matches!(
            build_colouring_certificate_odd(&g, 3, 2, 3, &mu),
            Err(Error::Refused(_))
        ));
        // Pattern fraction above the base invariant is out of scope.
        let k3 = complete(3).unwrap();
        assert!(matches!(
            build_colouring_certificate_odd(&k3, 7, 2, 3, &singleton_colouring(3)),
            Err(Error::OutOfScope(_))
        ));
        // Parity mismatches.
        assert!(matches!(
            build_colouring_certificate_even(&g, 5, 2, 3, &mu),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(
            build_colouring_certificate_odd(&g, 2, 1, 2, &mu),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn upper_colouring_examples() {
        // Height-2 copies over the 5-cycle: 3 base colours + 1 fresh.
        let up = chromatic_upper_colouring(
            &cycle(5).unwrap(),
            &complete(2).unwrap(),
            &[2, 2],
        )
        .unwrap();
        assert_eq!((up.colours_used, up.bound), (4, 4));

        // Height-1 copies of an edge over a triangle: the join, a 5-clique.
        let join = chromatic_upper_colouring(
            &complete(3).unwrap(),
            &complete(2).unwrap(),
            &[1, 1],
        )
        .unwrap();
        assert_eq!((join.colours_used, join.bound), (5, 6));
        assert_eq!(join.cone.graph().vertex_count(), 5);

        // Mixed heights exercise both apex rules at once.
        let mixed = chromatic_upper_colouring(
            &cycle(5).unwrap(),
            &crate::graph::path_with_loop(3).unwrap(),
            &[1, 3, 2],
        );
        assert!(matches!(mixed, Err(Error::InvalidParameter(_))), "looped patterns are rejected");
        let mixed = chromatic_upper_colouring(
            &cycle(5).unwrap(),
            &cycle(3).unwrap(),
            &[1, 3, 2],
        )
        .unwrap();
        assert!(mixed.colours_used <= mixed.bound);

        // The scheme needs the taller pattern part to fit the base's colours.
        assert!(matches!(
            chromatic_upper_colouring(&complete(2).unwrap(), &complete(3).unwrap(), &[2, 2, 2]),
            Err(Error::OutOfScope(_))
        ));
    }

    #[test]
    fn upper_colouring_is_proper_on_a_grid_of_heights() {
        let g = cycle(5).unwrap();
        let h = complete(2).unwrap();
        for a in 1..=3 {
            for b in 1..=3 {
                let up = chromatic_upper_colouring(&g, &h, &[a, b]).unwrap();
                let exact = crate::chromatic::chromatic_number(up.cone.graph()).unwrap();
                assert!(
                    exact.chi <= up.colours_used,
                    "scheme beat the optimum at heights ({a}, {b})"
                );
            }
        }
    }

    #[test]
    fn embedding_search_finds_and_gives_up() {
        // The 5-cycle embeds into K(5,2) directly.
        let c5 = cycle(5).unwrap();
        let emb = embed_into_kneser(&c5, 5, 2, 3).unwrap();
        assert_eq!((emb.scale, emb.s, emb.t), (1, 5, 2));
        let hm = emb.homomorphism(&c5).unwrap();
        assert!(crate::cones::verify_homomorphism(&hm).unwrap().holds);

        // A triangle never maps into K(2m, m): those are all bipartite.
        assert!(matches!(
            embed_into_kneser(&complete(3).unwrap(), 2, 1, 2),
            Err(Error::CapExceeded(_))
        ));
        assert!(matches!(
            embed_into_kneser(&c5, 5, 2, 0),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn json_shapes() {
        let p = cone_parameters(&rat(3, 1), &rat(2, 1), 3).unwrap();
        let v = p.to_json();
        assert_eq!(v["tau_prime"], "1/13");
        assert_eq!(v["delta"][1]["value"], "3/13");
        assert_eq!(v["even_pattern"]["s"], 3);

        let report = check_parameter_identities(&p).to_json();
        assert_eq!(report["all_hold"], true);
        assert!(report["checks"].as_array().unwrap().len() >= 9);

        let tv = theorem_value(&rat(3, 1), &rat(2, 1), 3).unwrap().to_json();
        assert_eq!(tv["value"], "41/13");
        assert_eq!(tv["parity"], "odd");

        let g = complete(3).unwrap();
        let cert = build_colouring_certificate_odd(&g, 2, 1, 3, &singleton_colouring(3)).unwrap();
        let cj = cert.to_json();
        assert_eq!(cj["kind"], "fractional-colouring");
        assert_eq!(cj["labels"].as_array().unwrap().len(), 17);
        assert_eq!(cj["labels"][0], "B 0");
    }
}
