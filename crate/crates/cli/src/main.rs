//! `sumflow`: command-line surface over the flow library.  Every
//! command prints one JSON document on standard output; process exit
//! codes carry the decision: 0 feasible/ok, 1 infeasible or failed
//! verification, 2 usage or parse error, 3 cap exceeded.

mod document;
mod graphfile;

use clap::{Parser, Subcommand};
use serde_json::json;
use sumflow_core::error::Error;
use sumflow_core::flow::{GammaVector, IntervalSpec, LabelSet};
use sumflow_core::graph::Graph;
use sumflow_core::lp::{self, LpOutcome};
use sumflow_core::oracle;
use sumflow_core::rational::{format_rat, parse_rat, rat, Rat};
use sumflow_core::special;
use sumflow_core::tree;
use sumflow_core::{families, flow::FlowResult};

use document::{emit, emit_error, set_to_json, EXIT_CAP, EXIT_INFEASIBLE, EXIT_OK, EXIT_USAGE};

#[derive(Parser)]
#[command(name = "sumflow", about = "exact c-sum and gamma-valued L-flows on undirected graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a gamma-L-flow exists and emit a witness or
    /// certificate.
    Exists {
        graph: String,
        /// `const:<q>` or `file:<path>` with one rational per vertex.
        #[arg(long)]
        gamma: String,
        /// `interval a,b` (bounds may be `-inf`/`inf`, flags `open-low`
        /// `open-high`), `list v1,v2,...`, `nonzero-reals`, or
        /// `nonzero-ints`.
        #[arg(long, num_args = 1..=4, allow_hyphen_values = true)]
        set: Vec<String>,
    },
    /// Range analysis of the unique all-ones flow on a balanced tree.
    TreeRange { graph: String },
    /// Run a named flow construction; the output is re-verified before
    /// printing.
    Construct {
        graph: String,
        /// One of: pm1-regular, 3flow, zero3flow, zeroone, positive,
        /// nowherezero, kfactor, unicyclic, general.
        #[arg(long)]
        method: String,
        /// Restrict `nowherezero` to integer values.
        #[arg(long)]
        integral: bool,
        /// Factor degree for `kfactor`.
        #[arg(long)]
        k: Option<usize>,
    },
    /// Exhaustively enumerate flows over a finite label list.
    Oracle {
        graph: String,
        /// Comma-separated rational labels.
        #[arg(long, allow_hyphen_values = true)]
        list: String,
        /// Common vertex sum.
        #[arg(long, allow_hyphen_values = true)]
        c: String,
        #[arg(long)]
        count_only: bool,
        /// Maximum number of solutions kept in the report.
        #[arg(long, default_value_t = 1000)]
        cap: usize,
    },
    /// Re-verify a previously emitted result document against a graph.
    Verify { graph: String, document: String },
    /// Print a generated graph file on standard output.
    Gen {
        /// One of: cycle, path, star, complete, complete-bipartite,
        /// circulant, tmin, tmax, topt, s1, s2, example2,
        /// unicyclic-extremal.
        #[arg(long)]
        family: String,
        /// Family parameters, e.g. `cycle 5`, `circulant 8 1,2,3`,
        /// `example2 1 1`, `unicyclic-extremal 4 3`.
        params: Vec<String>,
    },
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                emit_error(&e.to_string());
                std::process::exit(EXIT_USAGE);
            }
            // --help and --version print as clap renders them.
            e.exit();
        }
    };
    let code = match run(cli) {
        Ok(code) => code,
        Err(e) => {
            let code = match &e {
                Error::BudgetExceeded => EXIT_CAP,
                _ => EXIT_USAGE,
            };
            emit_error(&e.to_string());
            code
        }
    };
    std::process::exit(code);
}

fn run(cli: Cli) -> Result<i32, Error> {
    match cli.command {
        Command::Exists { graph, gamma, set } => cmd_exists(&graph, &gamma, &set),
        Command::TreeRange { graph } => cmd_tree_range(&graph),
        Command::Construct {
            graph,
            method,
            integral,
            k,
        } => cmd_construct(&graph, &method, integral, k),
        Command::Oracle {
            graph,
            list,
            c,
            count_only,
            cap,
        } => cmd_oracle(&graph, &list, &c, count_only, cap),
        Command::Verify { graph, document } => cmd_verify(&graph, &document),
        Command::Gen { family, params } => cmd_gen(&family, &params),
    }
}

fn load_graph(path: &str) -> Result<Graph, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::BadParameter(format!("cannot read {path}: {e}")))?;
    graphfile::parse(&text)
}

fn parse_gamma(spec: &str, n: usize) -> Result<GammaVector, Error> {
    if let Some(q) = spec.strip_prefix("const:") {
        let v = parse_rat(q)
            .ok_or_else(|| Error::BadParameter(format!("bad rational '{q}' in --gamma")))?;
        return Ok(vec![v; n]);
    }
    if let Some(path) = spec.strip_prefix("file:") {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::BadParameter(format!("cannot read {path}: {e}")))?;
        let values: Option<GammaVector> = text
            .split_whitespace()
            .map(parse_rat)
            .collect();
        let values =
            values.ok_or_else(|| Error::BadParameter("bad rational in gamma file".into()))?;
        if values.len() != n {
            return Err(Error::BadParameter(format!(
                "gamma file has {} values for {n} vertices",
                values.len()
            )));
        }
        return Ok(values);
    }
    Err(Error::BadParameter(
        "--gamma must be const:<q> or file:<path>".into(),
    ))
}

fn parse_set(tokens: &[String]) -> Result<LabelSet, Error> {
    let usage = || {
        Error::BadParameter(
            "--set must be 'interval a,b', 'list v1,v2,...', 'nonzero-reals', or 'nonzero-ints'"
                .into(),
        )
    };
    match tokens.first().map(String::as_str) {
        Some("interval") => {
            let bounds = tokens.get(1).ok_or_else(usage)?;
            let (a, b) = bounds.split_once(',').ok_or_else(usage)?;
            let lo = match a {
                "-inf" => None,
                _ => Some(parse_rat(a).ok_or_else(usage)?),
            };
            let hi = match b {
                "inf" => None,
                _ => Some(parse_rat(b).ok_or_else(usage)?),
            };
            let mut spec = IntervalSpec {
                lo,
                hi,
                open_low: false,
                open_high: false,
            };
            for flag in &tokens[2..] {
                match flag.as_str() {
                    "open-low" => spec.open_low = true,
                    "open-high" => spec.open_high = true,
                    _ => return Err(usage()),
                }
            }
            Ok(LabelSet::Interval(spec))
        }
        Some("list") => {
            let items = tokens.get(1).ok_or_else(usage)?;
            let values: Option<Vec<Rat>> = items.split(',').map(parse_rat).collect();
            Ok(LabelSet::finite(values.ok_or_else(usage)?))
        }
        Some("nonzero-reals") => Ok(LabelSet::NonzeroReals),
        Some("nonzero-ints") => Ok(LabelSet::NonzeroIntegers),
        _ => Err(usage()),
    }
}

fn cmd_exists(graph: &str, gamma_spec: &str, set_tokens: &[String]) -> Result<i32, Error> {
    let g = load_graph(graph)?;
    let gamma = parse_gamma(gamma_spec, g.vertex_count())?;
    let set = parse_set(set_tokens)?;
    let base = json!({
        "command": "exists",
        "gamma": gamma.iter().map(format_rat).collect::<Vec<_>>(),
        "set": set_to_json(&set),
    });
    match &set {
        LabelSet::Interval(spec) => {
            if !spec.is_closed() {
                return Err(Error::BadParameter(
                    "open intervals are not decided; use a construction command".into(),
                ));
            }
            match lp::interval_flow(&g, &gamma, spec)? {
                LpOutcome::Feasible(w) => {
                    emit(base, json!({
                        "decision": "feasible",
                        "flow": document::flow_json(&g, &w),
                        "provenance": "exact interval linear program",
                    }));
                    Ok(EXIT_OK)
                }
                LpOutcome::Infeasible(cert) => {
                    emit(base, json!({
                        "decision": "infeasible",
                        "certificate": document::certificate_json(&cert),
                        "provenance": "exact interval linear program",
                    }));
                    Ok(EXIT_INFEASIBLE)
                }
            }
        }
        LabelSet::Finite(values) => {
            let c = constant_gamma_value(&gamma).ok_or_else(|| {
                Error::BadParameter("finite label sets need a constant gamma".into())
            })?;
            let report =
                oracle::enumerate_finite_flows(&g, values, &c, 1, oracle::ENUMERATION_BUDGET)?;
            match report.solutions.first() {
                Some(w) => {
                    emit(base, json!({
                        "decision": "feasible",
                        "flow": document::flow_json(&g, w),
                        "solution_count": report.count,
                        "provenance": "exhaustive finite-label enumeration",
                    }));
                    Ok(EXIT_OK)
                }
                None => {
                    emit(base, json!({
                        "decision": "infeasible",
                        "solution_count": 0,
                        "provenance": "exhaustive finite-label enumeration",
                    }));
                    Ok(EXIT_INFEASIBLE)
                }
            }
        }
        LabelSet::NonzeroReals | LabelSet::NonzeroIntegers => {
            if constant_gamma_value(&gamma) != Some(rat(1)) {
                return Err(Error::BadParameter(
                    "nonzero sets are decided for gamma = 1 only".into(),
                ));
            }
            let integral = matches!(set, LabelSet::NonzeroIntegers);
            match special::nowhere_zero_one_sum(&g, integral)? {
                Some(result) => {
                    emit(base, json!({
                        "decision": "feasible",
                        "flow": document::flow_json(&g, &result.flow),
                        "provenance": result.provenance,
                    }));
                    Ok(EXIT_OK)
                }
                None => {
                    emit(base, json!({
                        "decision": "infeasible",
                        "provenance": "cut-edge criterion: a cut edge separates balanced sides",
                    }));
                    Ok(EXIT_INFEASIBLE)
                }
            }
        }
        LabelSet::PuncturedInterval(_) => Err(Error::BadParameter(
            "punctured intervals are not decided; use 'construct --method positive'".into(),
        )),
    }
}

fn constant_gamma_value(gamma: &GammaVector) -> Option<Rat> {
    let first = gamma.first()?;
    gamma.iter().all(|v| v == first).then(|| first.clone())
}

fn cmd_tree_range(graph: &str) -> Result<i32, Error> {
    let g = load_graph(graph)?;
    let base = json!({"command": "tree-range"});
    match tree::tree_range_report(&g) {
        Ok(report) => {
            let trace = tree::prune(&g)?;
            emit(base, json!({
                "decision": "feasible",
                "flow": document::flow_json(&g, &report.flow),
                "p1": report.p1,
                "level_sizes": trace.level_sizes(),
                "predicted": [format_rat(&report.predicted.0), format_rat(&report.predicted.1)],
                "achieved": report.achieved.iter().map(format_rat).collect::<Vec<_>>(),
                "provenance": "pruning recursion with level-sum checks",
            }));
            Ok(EXIT_OK)
        }
        Err(Error::BalanceViolated) => {
            emit(base, json!({
                "decision": "infeasible",
                "provenance": "unbalanced tree has no all-ones flow",
            }));
            Ok(EXIT_INFEASIBLE)
        }
        Err(e) => Err(e),
    }
}

fn cmd_construct(graph: &str, method: &str, integral: bool, k: Option<usize>) -> Result<i32, Error> {
    let g = load_graph(graph)?;
    let base = json!({"command": "construct", "method": method});
    let outcome: Option<FlowResult> = match method {
        "pm1-regular" => {
            let r = g.regularity().ok_or(Error::NotRegular)?;
            Some(if r % 2 == 1 {
                special::pm1_flow_odd_regular(&g)?
            } else {
                special::pm1_flow_mod4_regular(&g)?
            })
        }
        "3flow" => Some(special::one_sum_3flow(&g)?),
        "zero3flow" => Some(special::zero_sum_3flow(&g)?),
        "zeroone" => special::one_zero_one_flow(&g)?,
        "positive" => {
            let report = special::one_positive_flow(&g, special::WITNESS_EDGE_CAP)?;
            if report.exists && report.witness.is_none() {
                return Err(Error::BudgetExceeded);
            }
            report.witness
        }
        "nowherezero" => special::nowhere_zero_one_sum(&g, integral)?,
        "kfactor" => {
            let k = k.ok_or_else(|| Error::BadParameter("kfactor needs --k".into()))?;
            special::kfactor_scaled_flow(&g, k)?
        }
        "unicyclic" => {
            return match tree::unicyclic_flow(&g)? {
                Some(report) => {
                    emit(base, json!({
                        "decision": "feasible",
                        "flow": document::flow_json(&g, &report.flow),
                        "case": format!("{:?}", report.case),
                        "interval": [format_rat(&report.interval.0), format_rat(&report.interval.1)],
                        "provenance": "unicyclic case recursion",
                    }));
                    Ok(EXIT_OK)
                }
                None => {
                    emit(base, json!({"decision": "infeasible"}));
                    Ok(EXIT_INFEASIBLE)
                }
            };
        }
        "general" => {
            return match special::general_range_flow(&g)? {
                Some(report) => {
                    emit(base, json!({
                        "decision": "feasible",
                        "flow": document::flow_json(&g, &report.result.flow),
                        "set": set_to_json(&report.result.claimed_label_set),
                        "window": report.window.as_ref().map(|(lo, hi)| {
                            vec![format_rat(lo), format_rat(hi)]
                        }),
                        "within_window": report.within_window,
                        "provenance": report.result.provenance,
                    }));
                    Ok(EXIT_OK)
                }
                None => {
                    emit(base, json!({"decision": "infeasible"}));
                    Ok(EXIT_INFEASIBLE)
                }
            };
        }
        other => {
            return Err(Error::BadParameter(format!("unknown method '{other}'")));
        }
    };
    match outcome {
        Some(result) => {
            emit(base, json!({
                "decision": "feasible",
                "flow": document::flow_json(&g, &result.flow),
                "set": set_to_json(&result.claimed_label_set),
                "provenance": result.provenance,
            }));
            Ok(EXIT_OK)
        }
        None => {
            emit(base, json!({"decision": "infeasible"}));
            Ok(EXIT_INFEASIBLE)
        }
    }
}

fn cmd_oracle(graph: &str, list: &str, c: &str, count_only: bool, cap: usize) -> Result<i32, Error> {
    let g = load_graph(graph)?;
    let labels: Option<Vec<Rat>> = list.split(',').map(parse_rat).collect();
    let labels = labels.ok_or_else(|| Error::BadParameter("bad rational in --list".into()))?;
    let c = parse_rat(c).ok_or_else(|| Error::BadParameter("bad rational in --c".into()))?;
    let kept = if count_only { 0 } else { cap };
    let report = oracle::enumerate_finite_flows(&g, &labels, &c, kept, oracle::ENUMERATION_BUDGET)?;
    let base = json!({
        "command": "oracle",
        "labels": labels.iter().map(format_rat).collect::<Vec<_>>(),
        "c": format_rat(&c),
    });
    let solutions: Vec<_> = report
        .solutions
        .iter()
        .map(|w| document::flow_json(&g, w))
        .collect();
    emit(base, json!({
        "decision": if report.count > 0 { "feasible" } else { "infeasible" },
        "solution_count": report.count,
        "solutions": if count_only { None } else { Some(solutions) },
        "nodes_visited": report.nodes_visited,
        "provenance": "exhaustive finite-label enumeration",
    }));
    Ok(if report.count > 0 { EXIT_OK } else { EXIT_INFEASIBLE })
}

fn cmd_verify(graph: &str, doc_path: &str) -> Result<i32, Error> {
    let g = load_graph(graph)?;
    let text = std::fs::read_to_string(doc_path)
        .map_err(|e| Error::BadParameter(format!("cannot read {doc_path}: {e}")))?;
    let doc: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| Error::BadParameter(format!("bad JSON: {e}")))?;
    match document::verify(&g, &doc) {
        Ok(()) => {
            emit(json!({"command": "verify"}), json!({"decision": "verified"}));
            Ok(EXIT_OK)
        }
        Err(violation) => {
            emit(json!({"command": "verify"}), json!({
                "decision": "rejected",
                "violation": violation,
            }));
            Ok(EXIT_INFEASIBLE)
        }
    }
}

fn cmd_gen(family: &str, params: &[String]) -> Result<i32, Error> {
    let usage = |msg: &str| Error::BadParameter(format!("{family}: {msg}"));
    let int = |i: usize| -> Result<usize, Error> {
        params
            .get(i)
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| usage("missing or bad integer parameter"))
    };
    let g = match family {
        "cycle" => families::cycle(int(0)?)?,
        "path" => families::path(int(0)?)?,
        "star" => families::star(int(0)?)?,
        "complete" => families::complete(int(0)?)?,
        "complete-bipartite" => families::complete_bipartite(int(0)?, int(1)?)?,
        "circulant" => {
            let n = int(0)?;
            let offsets: Option<Vec<usize>> = params
                .get(1)
                .ok_or_else(|| usage("missing offsets"))?
                .split(',')
                .map(|s| s.parse().ok())
                .collect();
            families::circulant(n, &offsets.ok_or_else(|| usage("bad offsets"))?)?
        }
        "tmin" => tree::make_extremal_tree(tree::ExtremalTree::Tmin, int(0)?)?,
        "tmax" => tree::make_extremal_tree(tree::ExtremalTree::Tmax, int(0)?)?,
        "topt" => tree::make_extremal_tree(tree::ExtremalTree::Topt, int(0)?)?,
        "s1" => tree::make_extremal_tree(tree::ExtremalTree::S1, int(0)?)?,
        "s2" => tree::make_extremal_tree(tree::ExtremalTree::S2, int(0)?)?,
        "example2" => families::two_block_obstruction(int(0)?, int(1)?)?,
        "unicyclic-extremal" => {
            let p = int(0)?;
            match int(1)? {
                3 => tree::unicyclic_case3_extremal(p, false)?,
                4 => tree::unicyclic_case4_extremal(p)?,
                _ => return Err(usage("case must be 3 or 4")),
            }
        }
        other => return Err(Error::BadParameter(format!("unknown family '{other}'"))),
    };
    print!("{}", graphfile::render(&g));
    Ok(EXIT_OK)
}

