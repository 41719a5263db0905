//! Command-line surface for the conelab library.
//!
//! Every subcommand prints a terse result to standard output (or, with
//! `--json`, a versioned JSON report) and a one-line human summary to
//! standard error. Reports are deterministic byte-for-byte apart from the
//! top-level `timing_ms` field, which sits outside the verdict block.
//!
//! Exit codes: 0 verified success, 1 verified negative (an invalid
//! certificate, a failed identity, a proven non-existence), 2 indeterminate
//! (a configured cap was hit before the answer was decided), 64 usage or
//! domain errors.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use conelab::certificates::{
    build_clique_certificate_odd, build_colouring_certificate_even,
    build_colouring_certificate_odd, check_parameter_identities, chromatic_upper_colouring,
    cone_parameters, embed_into_kneser, theorem_value, Parity, DEFAULT_EMBED_SCALE_CAP,
};
use conelab::chromatic::{
    chromatic_number_with_bound, find_homomorphism, loop_to_constant_distances, HomSearch,
    DEFAULT_CHI_VERTEX_BOUND, DEFAULT_EXP_SIZE_BOUND, DEFAULT_HOM_NODE_CAP,
};
use conelab::cones::{
    generalized_cone, lift_pattern_homomorphism, parse_graph_or_cone, parse_heights,
    serialize_cone, verify_homomorphism, HomomorphismMap, LoadedGraph,
};
use conelab::graph::{complete, generate, serialize_graph, Graph};
use conelab::indep::{maximal_independent_sets, DEFAULT_MIS_CAP};
use conelab::ratlp::{
    fractional_chromatic_with_cap, verify_fractional_clique, verify_fractional_colouring,
};
use conelab::rational::{format_rational, parse_rational, Rational};
use conelab::Error;

#[derive(Parser)]
#[command(
    name = "conelab",
    version,
    about = "Exact chromatic computations on cones and generalized cones over graphs",
    disable_help_subcommand = true
)]
struct Cli {
    /// Print the full JSON report to standard output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

/// Main graph input: a file in the graph text format (cone files with label
/// lines are accepted and unwrapped) or a named generator.
#[derive(Args, Debug, Default, Clone)]
struct GraphInput {
    /// Read the graph (or cone file) from this path.
    #[arg(long = "file", value_name = "F", conflicts_with = "gen")]
    file: Option<PathBuf>,
    /// Generate a graph: FAMILY PARAMS..., e.g. `cycle 5`, `kneser 5 2`,
    /// `circulant 7 1 2`.
    #[arg(long = "gen", value_name = "ARG", num_args = 1.., conflicts_with = "file")]
    gen: Option<Vec<String>>,
}

/// Pattern graph input (the H of a generalized cone, or the target of a map
/// search).
#[derive(Args, Debug, Default, Clone)]
struct PatternInput {
    /// Read the pattern graph from this path.
    #[arg(long = "H-file", value_name = "F", conflicts_with = "h_gen")]
    h_file: Option<PathBuf>,
    /// Generate the pattern graph: FAMILY PARAMS...
    #[arg(long = "H-gen", value_name = "ARG", num_args = 1.., conflicts_with = "h_file")]
    h_gen: Option<Vec<String>>,
}

impl PatternInput {
    fn as_graph_input(&self) -> GraphInput {
        GraphInput { file: self.h_file.clone(), gen: self.h_gen.clone() }
    }

    fn is_given(&self) -> bool {
        self.h_file.is_some() || self.h_gen.is_some()
    }
}

/// Copy heights: one uniform value or an explicit per-vertex list.
#[derive(Args, Debug, Default, Clone)]
struct HeightsArgs {
    /// Uniform height for every pattern copy.
    #[arg(long = "n", value_name = "N", conflicts_with = "heights")]
    n: Option<usize>,
    /// Per-copy heights `v:k,v:k,...`, one entry per pattern vertex.
    #[arg(long = "h", value_name = "LIST", conflicts_with = "n")]
    heights: Option<String>,
}

impl HeightsArgs {
    fn is_given(&self) -> bool {
        self.n.is_some() || self.heights.is_some()
    }

    fn resolve(&self, pattern_size: usize) -> Result<Vec<usize>, Error> {
        match (self.n, &self.heights) {
            (Some(0), _) => Err(Error::InvalidParameter("height must be at least 1".into())),
            (Some(n), _) => Ok(vec![n; pattern_size]),
            (None, Some(list)) => parse_heights(list, pattern_size),
            (None, None) => {
                Err(Error::InvalidParameter("this command needs --n or --h".into()))
            }
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
enum CertKind {
    /// Fractional clique on an odd-height cone (lower bound).
    CliqueOdd,
    /// Fractional colouring on an even-height cone over a Kneser pattern.
    ColouringEven,
    /// Fractional colouring on an odd-height cone over a Kneser pattern.
    ColouringOdd,
    /// Proper colouring of an arbitrary-height cone (chromatic upper bound).
    Chromatic,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a graph and print (or save) its text form.
    Gen {
        #[command(flatten)]
        input: GraphInput,
        /// Write the graph file here instead of standard output.
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Build a cone or generalized cone and print (or save) its labelled text form.
    Cone {
        #[command(flatten)]
        input: GraphInput,
        #[command(flatten)]
        pattern: PatternInput,
        #[command(flatten)]
        heights: HeightsArgs,
        /// Write the cone file here instead of standard output.
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Exact fractional chromatic number with verified primal and dual certificates.
    Chif {
        #[command(flatten)]
        input: GraphInput,
        #[command(flatten)]
        pattern: PatternInput,
        #[command(flatten)]
        heights: HeightsArgs,
        /// Cap on the number of maximal independent sets enumerated.
        #[arg(long, value_name = "N")]
        cap: Option<usize>,
    },
    /// Exact chromatic number by exhaustive search.
    Chi {
        #[command(flatten)]
        input: GraphInput,
        #[command(flatten)]
        pattern: PatternInput,
        #[command(flatten)]
        heights: HeightsArgs,
        /// Cap on the number of vertices accepted (at most 64).
        #[arg(long, value_name = "N")]
        cap: Option<usize>,
    },
    /// Count (and optionally list) all maximal independent sets.
    Mis {
        #[command(flatten)]
        input: GraphInput,
        #[command(flatten)]
        pattern: PatternInput,
        #[command(flatten)]
        heights: HeightsArgs,
        /// Cap on the number of sets enumerated.
        #[arg(long, value_name = "N")]
        cap: Option<usize>,
        /// Include the sets themselves in the report.
        #[arg(long)]
        list: bool,
    },
    /// Build an explicit certificate on a cone and verify it.
    Certify {
        /// Which certificate to build.
        #[arg(long, value_enum, value_name = "KIND")]
        kind: CertKind,
        #[command(flatten)]
        input: GraphInput,
        #[command(flatten)]
        pattern: PatternInput,
        #[command(flatten)]
        heights: HeightsArgs,
        /// Kneser pattern parameter s (with --t, instead of an explicit pattern graph).
        #[arg(long, value_name = "S", requires = "t", conflicts_with_all = ["h_file", "h_gen"])]
        s: Option<usize>,
        /// Kneser pattern parameter t.
        #[arg(long, value_name = "T", requires = "s")]
        t: Option<usize>,
        /// Largest multiplier tried when embedding a pattern graph into a
        /// scaled Kneser graph.
        #[arg(long, value_name = "M", default_value_t = DEFAULT_EMBED_SCALE_CAP)]
        scale_cap: usize,
        /// Cap on the number of maximal independent sets enumerated by LPs
        /// and the clique verifier.
        #[arg(long, value_name = "N")]
        cap: Option<usize>,
    },
    /// Evaluate the closed-form cone value, optionally cross-checked by LP.
    Theorem {
        /// Fractional chromatic number of the base, as `p/q` or an integer.
        #[arg(long = "chifG", value_name = "Q")]
        chif_g: String,
        /// Fractional chromatic number of the pattern (default 1: a
        /// single-vertex pattern, i.e. a plain cone).
        #[arg(long = "chifH", value_name = "Q", default_value = "1")]
        chif_h: String,
        /// Uniform copy height.
        #[arg(long, value_name = "N")]
        n: usize,
        /// Cross-check by building the cone from --file/--gen (and
        /// --H-file/--H-gen) and solving its LP exactly.
        #[arg(long)]
        check: bool,
        #[command(flatten)]
        input: GraphInput,
        #[command(flatten)]
        pattern: PatternInput,
        /// Cap on the number of maximal independent sets enumerated.
        #[arg(long, value_name = "N")]
        cap: Option<usize>,
    },
    /// Check the exact identities the certificate weight sequences satisfy.
    Identities {
        /// Fractional chromatic number of the base, as `p/q` or an integer.
        #[arg(long = "chifG", value_name = "Q")]
        chif_g: String,
        /// Fractional chromatic number of the pattern.
        #[arg(long = "chifH", value_name = "Q")]
        chif_h: String,
        /// Uniform copy height.
        #[arg(long, value_name = "N")]
        n: usize,
    },
    /// Exponential graph of maps from the main graph into the --H graph:
    /// loop count and walk distances from loops to the constant maps.
    Expgraph {
        #[command(flatten)]
        input: GraphInput,
        #[command(flatten)]
        pattern: PatternInput,
        /// Cap on the number of maps (target^vertices).
        #[arg(long, value_name = "N")]
        cap: Option<usize>,
    },
    /// Search for a homomorphism from the main graph into the --H graph.
    Hom {
        #[command(flatten)]
        input: GraphInput,
        #[command(flatten)]
        pattern: PatternInput,
        /// Cap on the number of search nodes.
        #[arg(long, value_name = "N")]
        cap: Option<u64>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Gen { .. } => "gen",
            Command::Cone { .. } => "cone",
            Command::Chif { .. } => "chif",
            Command::Chi { .. } => "chi",
            Command::Mis { .. } => "mis",
            Command::Certify { .. } => "certify",
            Command::Theorem { .. } => "theorem",
            Command::Identities { .. } => "identities",
            Command::Expgraph { .. } => "expgraph",
            Command::Hom { .. } => "hom",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Outcome {
    Verified,
    Negative,
    Indeterminate,
}

impl Outcome {
    fn exit_code(self) -> u8 {
        match self {
            Outcome::Verified => 0,
            Outcome::Negative => 1,
            Outcome::Indeterminate => 2,
        }
    }
}

struct CommandOutput {
    outcome: Outcome,
    inputs: Value,
    verdict: Value,
    /// Printed verbatim to standard output when --json is off.
    plain: String,
    /// One-line human summary for standard error.
    summary: String,
}

fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

fn graph_descriptor(g: &Graph, source: Value) -> Value {
    json!({
        "source": source,
        "vertices": g.vertex_count(),
        "edges": g.edge_count(),
        "sha256": sha256_hex(serialize_graph(g).as_bytes()),
    })
}

impl GraphInput {
    fn is_given(&self) -> bool {
        self.file.is_some() || self.gen.is_some()
    }

    /// Loads the graph; cone files are unwrapped to their underlying graph.
    fn load(&self) -> Result<(Graph, Value), Error> {
        if let Some(path) = &self.file {
            let text = fs::read_to_string(path)
                .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
            let g = match parse_graph_or_cone(&text)? {
                LoadedGraph::Plain(g) => g,
                LoadedGraph::Cone(c) => c.graph().clone(),
            };
            let desc = graph_descriptor(&g, json!("file"));
            Ok((g, desc))
        } else if let Some(args) = &self.gen {
            let (family, rest) = args.split_first().expect("clap enforces at least one value");
            let params: Vec<usize> = rest
                .iter()
                .map(|p| {
                    p.parse::<usize>().map_err(|_| {
                        Error::InvalidParameter(format!("generator parameter {p:?} is not a number"))
                    })
                })
                .collect::<Result<_, _>>()?;
            let g = generate(family, &params)?;
            let desc = graph_descriptor(&g, json!({ "family": family, "params": params }));
            Ok((g, desc))
        } else {
            Err(Error::InvalidParameter(
                "no graph given: use --file or --gen FAMILY PARAMS...".into(),
            ))
        }
    }
}

/// Loads the pattern graph, defaulting to the one-vertex pattern (a plain
/// cone) when none was given.
fn load_pattern_or_default(pattern: &PatternInput) -> Result<(Graph, Value), Error> {
    if pattern.is_given() {
        pattern.as_graph_input().load()
    } else {
        let g = complete(1)?;
        let desc = graph_descriptor(&g, json!("default-single-vertex"));
        Ok((g, desc))
    }
}

/// Resolves the working graph for chif/chi/mis: the input itself, or the
/// cone built over it when heights were requested.
fn load_working_graph(
    input: &GraphInput,
    pattern: &PatternInput,
    heights: &HeightsArgs,
) -> Result<(Graph, Value), Error> {
    let (g, gdesc) = input.load()?;
    if !heights.is_given() {
        if pattern.is_given() {
            return Err(Error::InvalidParameter(
                "a pattern graph needs heights: add --n or --h".into(),
            ));
        }
        return Ok((g, json!({ "graph": gdesc })));
    }
    let (h, hdesc) = load_pattern_or_default(pattern)?;
    let hv = heights.resolve(h.vertex_count())?;
    let cone = generalized_cone(&g, &h, &hv)?;
    let inputs = json!({ "graph": gdesc, "pattern": hdesc, "heights": hv });
    Ok((cone.graph().clone(), inputs))
}

fn write_or_inline(
    text: &str,
    out: &Option<PathBuf>,
    what: &str,
) -> Result<(String, String), Error> {
    match out {
        Some(path) => {
            fs::write(path, text)
                .map_err(|e| Error::Parse(format!("cannot write {}: {e}", path.display())))?;
            Ok((String::new(), format!("wrote {what} to {}", path.display())))
        }
        None => Ok((text.to_string(), format!("printed {what}"))),
    }
}

fn run_gen(input: GraphInput, out: Option<PathBuf>) -> Result<CommandOutput, Error> {
    let (g, desc) = input.load()?;
    let text = serialize_graph(&g);
    let (plain, wrote) = write_or_inline(&text, &out, "graph")?;
    Ok(CommandOutput {
        outcome: Outcome::Verified,
        inputs: json!({ "graph": desc }),
        verdict: json!({
            "vertices": g.vertex_count(),
            "edges": g.edge_count(),
            "graph": text,
        }),
        plain,
        summary: format!(
            "{wrote}: {} vertices, {} edges",
            g.vertex_count(),
            g.edge_count()
        ),
    })
}

fn run_cone(
    input: GraphInput,
    pattern: PatternInput,
    heights: HeightsArgs,
    out: Option<PathBuf>,
) -> Result<CommandOutput, Error> {
    let (g, gdesc) = input.load()?;
    let (h, hdesc) = load_pattern_or_default(&pattern)?;
    let hv = heights.resolve(h.vertex_count())?;
    let cone = generalized_cone(&g, &h, &hv)?;
    let text = serialize_cone(&cone);
    let (plain, wrote) = write_or_inline(&text, &out, "cone")?;
    Ok(CommandOutput {
        outcome: Outcome::Verified,
        inputs: json!({ "graph": gdesc, "pattern": hdesc, "heights": hv }),
        verdict: json!({
            "vertices": cone.graph().vertex_count(),
            "edges": cone.graph().edge_count(),
            "base_vertices": g.vertex_count(),
            "pattern_vertices": h.vertex_count(),
            "cone": text,
        }),
        plain,
        summary: format!(
            "{wrote}: {} vertices, {} edges over a {}-vertex base",
            cone.graph().vertex_count(),
            cone.graph().edge_count(),
            g.vertex_count()
        ),
    })
}

fn run_chif(
    input: GraphInput,
    pattern: PatternInput,
    heights: HeightsArgs,
    cap: Option<usize>,
) -> Result<CommandOutput, Error> {
    let (g, inputs) = load_working_graph(&input, &pattern, &heights)?;
    let cap = cap.unwrap_or(DEFAULT_MIS_CAP);
    let lp = fractional_chromatic_with_cap(&g, cap)?;
    let primal = verify_fractional_colouring(&g, &lp.primal)?;
    let dual = verify_fractional_clique(&g, &lp.dual, cap)?;
    let strong_duality = primal.total == lp.value && dual.total == lp.value;
    let ok = primal.valid && dual.valid && strong_duality;
    let value = format_rational(&lp.value);
    Ok(CommandOutput {
        outcome: if ok { Outcome::Verified } else { Outcome::Negative },
        inputs,
        verdict: json!({
            "value": value,
            "independent_set_count": lp.independent_set_count,
            "iterations": lp.iterations,
            "primal_valid": primal.valid,
            "dual_valid": dual.valid,
            "strong_duality": strong_duality,
            "primal": lp.primal.to_json(),
            "dual": lp.dual.to_json(),
        }),
        plain: format!("{value}\n"),
        summary: format!(
            "chi_f = {value} on {} vertices ({} maximal independent sets, {} pivots; \
             primal and dual certificates verified)",
            g.vertex_count(),
            lp.independent_set_count,
            lp.iterations
        ),
    })
}

fn run_chi(
    input: GraphInput,
    pattern: PatternInput,
    heights: HeightsArgs,
    cap: Option<usize>,
) -> Result<CommandOutput, Error> {
    let (g, inputs) = load_working_graph(&input, &pattern, &heights)?;
    let bound = cap.unwrap_or(DEFAULT_CHI_VERTEX_BOUND);
    let result = chromatic_number_with_bound(&g, bound)?;
    let proper = g
        .edges()
        .iter()
        .all(|&(u, v)| u == v || result.colouring[u] != result.colouring[v]);
    Ok(CommandOutput {
        outcome: if proper { Outcome::Verified } else { Outcome::Negative },
        inputs,
        verdict: json!({
            "chi": result.chi,
            "nodes_explored": result.nodes_explored,
            "proper": proper,
            "colouring": result.colouring,
        }),
        plain: format!("{}\n", result.chi),
        summary: format!(
            "chi = {} on {} vertices ({} search nodes; exhaustion certified)",
            result.chi,
            g.vertex_count(),
            result.nodes_explored
        ),
    })
}

fn run_mis(
    input: GraphInput,
    pattern: PatternInput,
    heights: HeightsArgs,
    cap: Option<usize>,
    list: bool,
) -> Result<CommandOutput, Error> {
    let (g, inputs) = load_working_graph(&input, &pattern, &heights)?;
    let family = maximal_independent_sets(&g, cap.unwrap_or(DEFAULT_MIS_CAP))?;
    let mut verdict = json!({
        "count": family.sets.len(),
        "truncated": family.truncated,
    });
    if list {
        verdict["sets"] = json!(family.sets);
    }
    let outcome = if family.truncated { Outcome::Indeterminate } else { Outcome::Verified };
    Ok(CommandOutput {
        outcome,
        inputs,
        verdict,
        plain: format!("{}\n", family.sets.len()),
        summary: format!(
            "{} maximal independent sets on {} vertices{}",
            family.sets.len(),
            g.vertex_count(),
            if family.truncated { " (truncated at cap: count is a lower bound)" } else { "" }
        ),
    })
}

fn run_theorem(
    chif_g: String,
    chif_h: String,
    n: usize,
    check: bool,
    input: GraphInput,
    pattern: PatternInput,
    cap: Option<usize>,
) -> Result<CommandOutput, Error> {
    let cg = parse_rational(&chif_g)?;
    let ch = parse_rational(&chif_h)?;
    let tv = theorem_value(&cg, &ch, n)?;
    let parity = match tv.parity {
        Parity::Even => "even",
        Parity::Odd => "odd",
    };
    let value = format_rational(&tv.value);
    let mut inputs = json!({
        "chif_G": format_rational(&cg),
        "chif_H": format_rational(&ch),
        "n": n,
    });
    let mut verdict = json!({ "value": value, "parity": parity, "checked": check });
    let mut outcome = Outcome::Verified;
    let mut summary = format!("closed form ({parity} height): chi_f = {value}");
    if check {
        if !input.is_given() {
            return Err(Error::InvalidParameter(
                "--check needs the graphs: add --file/--gen (and --H-file/--H-gen)".into(),
            ));
        }
        let cap = cap.unwrap_or(DEFAULT_MIS_CAP);
        let (g, gdesc) = input.load()?;
        let (h, hdesc) = load_pattern_or_default(&pattern)?;
        let got_cg = fractional_chromatic_with_cap(&g, cap)?.value;
        if got_cg != cg {
            return Err(Error::Refused(format!(
                "--chifG is {} but the graph has fractional chromatic number {}",
                format_rational(&cg),
                format_rational(&got_cg)
            )));
        }
        let got_ch = fractional_chromatic_with_cap(&h, cap)?.value;
        if got_ch != ch {
            return Err(Error::Refused(format!(
                "--chifH is {} but the pattern has fractional chromatic number {}",
                format_rational(&ch),
                format_rational(&got_ch)
            )));
        }
        let cone = generalized_cone(&g, &h, &vec![n; h.vertex_count()])?;
        let lp = fractional_chromatic_with_cap(cone.graph(), cap)?;
        let matches = lp.value == tv.value;
        inputs["graph"] = gdesc;
        inputs["pattern"] = hdesc;
        verdict["lp_value"] = json!(format_rational(&lp.value));
        verdict["matches"] = json!(matches);
        outcome = if matches { Outcome::Verified } else { Outcome::Negative };
        summary = format!(
            "closed form ({parity} height): chi_f = {value}; LP on the {}-vertex cone gives {} ({})",
            cone.graph().vertex_count(),
            format_rational(&lp.value),
            if matches { "matches" } else { "MISMATCH" }
        );
    }
    Ok(CommandOutput { outcome, inputs, verdict, plain: format!("{value}\n"), summary })
}

fn run_identities(chif_g: String, chif_h: String, n: usize) -> Result<CommandOutput, Error> {
    let cg = parse_rational(&chif_g)?;
    let ch = parse_rational(&chif_h)?;
    let params = cone_parameters(&cg, &ch, n)?;
    let report = check_parameter_identities(&params);
    let failed: Vec<&str> =
        report.checks.iter().filter(|c| !c.holds).map(|c| c.name).collect();
    let plain = if report.all_hold {
        format!("ok ({} identities)\n", report.checks.len())
    } else {
        format!("FAILED: {}\n", failed.join(", "))
    };
    let summary = if report.all_hold {
        format!(
            "all {} identities hold for chif_G = {}, chif_H = {}, n = {n}",
            report.checks.len(),
            format_rational(&cg),
            format_rational(&ch)
        )
    } else {
        format!("{} identities FAILED: {}", failed.len(), failed.join(", "))
    };
    Ok(CommandOutput {
        outcome: if report.all_hold { Outcome::Verified } else { Outcome::Negative },
        inputs: json!({
            "chif_G": format_rational(&cg),
            "chif_H": format_rational(&ch),
            "n": n,
        }),
        verdict: json!({
            "identities": report.to_json(),
            "parameters": params.to_json(),
        }),
        plain,
        summary,
    })
}

fn run_expgraph(
    input: GraphInput,
    pattern: PatternInput,
    cap: Option<usize>,
) -> Result<CommandOutput, Error> {
    if !pattern.is_given() {
        return Err(Error::InvalidParameter(
            "expgraph needs the target graph: add --H-file or --H-gen".into(),
        ));
    }
    let (base, gdesc) = input.load()?;
    let (target, hdesc) = pattern.as_graph_input().load()?;
    let report =
        loop_to_constant_distances(&target, &base, cap.unwrap_or(DEFAULT_EXP_SIZE_BOUND))?;
    let constants: Vec<Value> = (0..target.vertex_count())
        .map(|c| {
            json!({
                "vertex": c,
                "distance": report.constant_distance[c],
                "walk": report.constant_walk[c],
            })
        })
        .collect();
    let distances: Vec<String> = report
        .constant_distance
        .iter()
        .map(|d| d.map_or("-".to_string(), |d| d.to_string()))
        .collect();
    Ok(CommandOutput {
        outcome: Outcome::Verified,
        inputs: json!({ "graph": gdesc, "target": hdesc }),
        verdict: json!({
            "maps": report.map_count,
            "loops": report.loop_count,
            "constants": constants,
        }),
        plain: format!(
            "maps={} loops={} distances={}\n",
            report.map_count,
            report.loop_count,
            distances.join(",")
        ),
        summary: format!(
            "{} maps, {} loops; walk distance to each constant: [{}] \
             (distance d means the height-d cone over the graph maps into the target)",
            report.map_count,
            report.loop_count,
            distances.join(", ")
        ),
    })
}

fn run_hom(
    input: GraphInput,
    pattern: PatternInput,
    cap: Option<u64>,
) -> Result<CommandOutput, Error> {
    if !pattern.is_given() {
        return Err(Error::InvalidParameter(
            "hom needs the target graph: add --H-file or --H-gen".into(),
        ));
    }
    let (source, gdesc) = input.load()?;
    let (target, hdesc) = pattern.as_graph_input().load()?;
    let inputs = json!({ "graph": gdesc, "target": hdesc });
    match find_homomorphism(&source, &target, cap.unwrap_or(DEFAULT_HOM_NODE_CAP))? {
        HomSearch::Found(map) => {
            let hm = HomomorphismMap { source, target, map: map.clone() };
            let check = verify_homomorphism(&hm)?;
            Ok(CommandOutput {
                outcome: if check.holds { Outcome::Verified } else { Outcome::Negative },
                inputs,
                verdict: json!({ "found": true, "verified": check.holds, "map": map }),
                plain: "found\n".into(),
                summary: "homomorphism found and verified".into(),
            })
        }
        HomSearch::NoneExhausted { nodes } => Ok(CommandOutput {
            outcome: Outcome::Negative,
            inputs,
            verdict: json!({ "found": false, "exhausted": true, "nodes": nodes }),
            plain: "none\n".into(),
            summary: format!("no homomorphism exists (search exhausted after {nodes} nodes)"),
        }),
        HomSearch::CapExceeded { nodes } => Ok(CommandOutput {
            outcome: Outcome::Indeterminate,
            inputs,
            verdict: json!({ "found": Value::Null, "exhausted": false, "nodes": nodes }),
            plain: "indeterminate\n".into(),
            summary: format!("node cap hit after {nodes} nodes; existence undecided"),
        }),
    }
}

/// Resolves the Kneser pattern for a colouring certificate: either the
/// explicit `(s, t)` or an embedding of the supplied pattern graph into a
/// scaled Kneser graph whose fraction matches `ratio`.
struct ResolvedPattern {
    s: usize,
    t: usize,
    /// Embedding data when the pattern came from a graph.
    embedding: Option<(Graph, Value, conelab::certificates::KneserEmbedding)>,
}

fn resolve_kneser_pattern(
    s: Option<usize>,
    t: Option<usize>,
    pattern: &PatternInput,
    ratio: &Rational,
    scale_cap: usize,
) -> Result<ResolvedPattern, Error> {
    match (s, t) {
        (Some(s), Some(t)) => {
            if pattern.is_given() {
                return Err(Error::InvalidParameter(
                    "give either --s/--t or a pattern graph, not both".into(),
                ));
            }
            Ok(ResolvedPattern { s, t, embedding: None })
        }
        _ => {
            if !pattern.is_given() {
                return Err(Error::InvalidParameter(
                    "this certificate needs a Kneser pattern: give --s/--t or --H-file/--H-gen"
                        .into(),
                ));
            }
            let (h, hdesc) = pattern.as_graph_input().load()?;
            let (s0, t0) = {
                let s0 = ratio.numer();
                let t0 = ratio.denom();
                (
                    s0.try_into().map_err(|_| {
                        Error::InvalidParameter("pattern fraction numerator too large".into())
                    })?,
                    t0.try_into().map_err(|_| {
                        Error::InvalidParameter("pattern fraction denominator too large".into())
                    })?,
                )
            };
            let emb = embed_into_kneser(&h, s0, t0, scale_cap)?;
            Ok(ResolvedPattern { s: emb.s, t: emb.t, embedding: Some((h, hdesc, emb)) })
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn run_certify(
    kind: CertKind,
    input: GraphInput,
    pattern: PatternInput,
    heights: HeightsArgs,
    s: Option<usize>,
    t: Option<usize>,
    scale_cap: usize,
    cap: Option<usize>,
) -> Result<CommandOutput, Error> {
    let cap = cap.unwrap_or(DEFAULT_MIS_CAP);
    let (g, gdesc) = input.load()?;

    if kind == CertKind::Chromatic {
        let (h, hdesc) = load_pattern_or_default(&pattern)?;
        let hv = heights.resolve(h.vertex_count())?;
        let up = chromatic_upper_colouring(&g, &h, &hv)?;
        return Ok(CommandOutput {
            outcome: Outcome::Verified,
            inputs: json!({ "graph": gdesc, "pattern": hdesc, "heights": hv }),
            verdict: json!({
                "kind": "chromatic",
                "colours_used": up.colours_used,
                "bound": up.bound,
                "valid": true,
                "certificate": up.to_json(),
            }),
            plain: format!("{}\n", up.colours_used),
            summary: format!(
                "proper colouring of the {}-vertex cone with {} colours (bound {}); verified",
                up.cone.graph().vertex_count(),
                up.colours_used,
                up.bound
            ),
        });
    }

    // The fractional certificates need a uniform height.
    let n = match (heights.n, &heights.heights) {
        (Some(n), None) => n,
        _ => {
            return Err(Error::InvalidParameter(
                "fractional certificates need a uniform height: use --n".into(),
            ))
        }
    };
    let lp_g = fractional_chromatic_with_cap(&g, cap)?;
    let chif_g = lp_g.value.clone();

    if kind == CertKind::CliqueOdd {
        if !pattern.is_given() {
            return Err(Error::InvalidParameter(
                "clique-odd needs the pattern graph: add --H-file or --H-gen".into(),
            ));
        }
        let (h, hdesc) = pattern.as_graph_input().load()?;
        let lp_h = fractional_chromatic_with_cap(&h, cap)?;
        let cert = build_clique_certificate_odd(&g, &h, n, &lp_g.dual, &lp_h.dual)?;
        let check = verify_fractional_clique(cert.cone.graph(), &cert.clique, cap)?;
        let tv = theorem_value(&chif_g, &lp_h.value, n)?;
        let matches = cert.total == tv.value;
        let ok = check.valid && matches;
        return Ok(CommandOutput {
            outcome: if ok { Outcome::Verified } else { Outcome::Negative },
            inputs: json!({ "graph": gdesc, "pattern": hdesc, "n": n }),
            verdict: json!({
                "kind": "clique-odd",
                "total": format_rational(&cert.total),
                "theorem_value": format_rational(&tv.value),
                "matches_theorem": matches,
                "valid": check.valid,
                "certificate": cert.to_json(),
            }),
            plain: format!("{}\n", format_rational(&cert.total)),
            summary: format!(
                "fractional clique of weight {} on the {}-vertex cone; verifier: {}",
                format_rational(&cert.total),
                cert.cone.graph().vertex_count(),
                if ok { "valid, matches the closed form" } else { "INVALID" }
            ),
        });
    }

    // Colouring certificates over a Kneser pattern.
    let even = kind == CertKind::ColouringEven;
    let ratio = if even {
        chif_g.clone()
    } else {
        match (s, t) {
            (Some(_), Some(0)) => {
                return Err(Error::InvalidParameter("--t must be at least 1".into()))
            }
            (Some(s), Some(t)) => Rational::new(s.into(), t.into()),
            _ => {
                let (h, _) = pattern.as_graph_input().load()?;
                fractional_chromatic_with_cap(&h, cap)?.value
            }
        }
    };
    let resolved = resolve_kneser_pattern(s, t, &pattern, &ratio, scale_cap)?;
    let cert = if even {
        build_colouring_certificate_even(&g, resolved.s, resolved.t, n, &lp_g.primal)?
    } else {
        build_colouring_certificate_odd(&g, resolved.s, resolved.t, n, &lp_g.primal)?
    };
    let check = verify_fractional_colouring(cert.cone.graph(), &cert.colouring)?;
    let chif_h = if even { chif_g.clone() } else { ratio.clone() };
    let tv = theorem_value(&chif_g, &chif_h, n)?;
    let matches = cert.total == tv.value;
    let ok = check.valid && matches;

    let mut inputs = json!({ "graph": gdesc, "n": n, "s": resolved.s, "t": resolved.t });
    let mut verdict = json!({
        "kind": if even { "colouring-even" } else { "colouring-odd" },
        "total": format_rational(&cert.total),
        "theorem_value": format_rational(&tv.value),
        "matches_theorem": matches,
        "valid": check.valid,
        "coverage_min": check.min_coverage.as_ref().map(format_rational),
        "coverage_max": check.max_coverage.as_ref().map(format_rational),
        "certificate": cert.to_json(),
    });
    let mut lifted_note = String::new();
    if let Some((h, hdesc, emb)) = resolved.embedding {
        let hom = emb.homomorphism(&h)?;
        let lift = lift_pattern_homomorphism(&g, n, &hom)?;
        let lift_check = verify_homomorphism(&lift)?;
        inputs["pattern"] = hdesc;
        verdict["embedding"] = json!({
            "scale": emb.scale,
            "s": emb.s,
            "t": emb.t,
            "map": emb.map,
            "lift_verified": lift_check.holds,
        });
        lifted_note = format!(
            "; pattern embedded into K({}, {}) and the cone map lifted ({})",
            emb.s,
            emb.t,
            if lift_check.holds { "verified" } else { "INVALID" }
        );
        if !lift_check.holds {
            return Ok(CommandOutput {
                outcome: Outcome::Negative,
                inputs,
                verdict,
                plain: format!("{}\n", format_rational(&cert.total)),
                summary: format!("lifted homomorphism failed verification{lifted_note}"),
            });
        }
    }
    Ok(CommandOutput {
        outcome: if ok { Outcome::Verified } else { Outcome::Negative },
        inputs,
        verdict,
        plain: format!("{}\n", format_rational(&cert.total)),
        summary: format!(
            "fractional colouring of weight {} on the {}-vertex cone; verifier: {}{}",
            format_rational(&cert.total),
            cert.cone.graph().vertex_count(),
            if ok { "valid, matches the closed form" } else { "INVALID" },
            lifted_note
        ),
    })
}

fn dispatch(command: Command) -> Result<CommandOutput, Error> {
    match command {
        Command::Gen { input, out } => run_gen(input, out),
        Command::Cone { input, pattern, heights, out } => run_cone(input, pattern, heights, out),
        Command::Chif { input, pattern, heights, cap } => run_chif(input, pattern, heights, cap),
        Command::Chi { input, pattern, heights, cap } => run_chi(input, pattern, heights, cap),
        Command::Mis { input, pattern, heights, cap, list } => {
            run_mis(input, pattern, heights, cap, list)
        }
        Command::Certify { kind, input, pattern, heights, s, t, scale_cap, cap } => {
            run_certify(kind, input, pattern, heights, s, t, scale_cap, cap)
        }
        Command::Theorem { chif_g, chif_h, n, check, input, pattern, cap } => {
            run_theorem(chif_g, chif_h, n, check, input, pattern, cap)
        }
        Command::Identities { chif_g, chif_h, n } => run_identities(chif_g, chif_h, n),
        Command::Expgraph { input, pattern, cap } => run_expgraph(input, pattern, cap),
        Command::Hom { input, pattern, cap } => run_hom(input, pattern, cap),
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Parse(_) => "parse",
        Error::InvalidParameter(_) => "invalid-parameter",
        Error::CapExceeded(_) => "cap-exceeded",
        Error::Truncated(_) => "truncated",
        Error::Singular(_) => "singular",
        Error::OutOfScope(_) => "out-of-scope",
        Error::Refused(_) => "refused",
        Error::NegativeWeight { .. } => "negative-weight",
    }
}

fn error_exit_code(e: &Error) -> u8 {
    match e {
        // The answer is undecided: a resource bound was hit.
        Error::CapExceeded(_) | Error::Truncated(_) => 2,
        // A verified negative: the construction provably fails here.
        Error::NegativeWeight { .. } => 1,
        // Usage and domain errors.
        _ => 64,
    }
}

fn envelope(command: &str, body: Value, timing_ms: u64) -> Value {
    let mut v = json!({
        "schema": 1,
        "tool": "conelab",
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "timing_ms": timing_ms,
    });
    for (key, value) in body.as_object().expect("body is an object") {
        v[key] = value.clone();
    }
    v
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(64),
            };
        }
    };
    let start = Instant::now();
    let name = cli.command.name();
    match dispatch(cli.command) {
        Ok(output) => {
            if cli.json {
                let report = envelope(
                    name,
                    json!({ "inputs": output.inputs, "verdict": output.verdict }),
                    start.elapsed().as_millis() as u64,
                );
                println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
            } else if !output.plain.is_empty() {
                print!("{}", output.plain);
            }
            eprintln!("{}", output.summary);
            ExitCode::from(output.outcome.exit_code())
        }
        Err(err) => {
            if cli.json {
                let report = envelope(
                    name,
                    json!({
                        "error": { "kind": error_kind(&err), "message": err.to_string() },
                    }),
                    start.elapsed().as_millis() as u64,
                );
                println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
            }
            eprintln!("error: {err}");
            ExitCode::from(error_exit_code(&err))
        }
    }
}
