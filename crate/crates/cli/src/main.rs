//! Batch front end: config ingestion, deterministic runs, JSON/CSV reports.
//!
//! Exit codes: 0 = pass/ok, 1 = malformed config or usage (machine-readable
//! JSON error on stderr), 2 = a checked property failed, 3 = inconclusive.

use clap::{Parser, Subcommand};
use endwalk::atlas::{atlas_preset, classify, AtlasPreset, GeometryTag};
use endwalk::drift::entropy_drift_estimate;
use endwalk::firstreturn::{
    edge_parity_quotient, first_return_walk, trivial_quotient, Perm, QuotientMap,
};
use endwalk::graph::{validate_graph, GraphOfGroups, GraphSpec};
use endwalk::measure::{
    measure_from_spec, moment_report, preset_geometric, preset_uniform, GraphGroup, MeasureSpec,
    StepMeasure, WalkGroup,
};
use endwalk::stab::{stab_intersection_check, StabStructure};
use endwalk::stationarity::{
    stationarity_check, stationarity_self_test, StationarityParams, Verdict,
};
use endwalk::tree::TreeVertex;
use endwalk::walk::{harmonic_estimate, ConvergenceParams, CylinderHistogram};
use serde_json::{json, Value};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

#[derive(Parser)]
#[command(
    name = "endwalk",
    version,
    about = "Graph-manifold group walks and tree-end boundary reports"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check a graph config against every schema invariant.
    Validate {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run many walks and report end-convergence and the cylinder histogram.
    Walk {
        #[arg(long)]
        graph: PathBuf,
        /// preset:uniform, preset:geom, or a measure config file
        #[arg(long)]
        measure: String,
        #[arg(long, default_value_t = 1000)]
        walks: u64,
        #[arg(long, default_value_t = 2000)]
        steps: u32,
        #[arg(long, default_value_t = 5)]
        depth: usize,
        #[arg(long, default_value_t = 200)]
        patience: u32,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Estimate the harmonic measure on depth-d cylinders.
    Harmonic {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        measure: String,
        #[arg(long, default_value_t = 2000)]
        walks: u64,
        #[arg(long, default_value_t = 1500)]
        steps: u32,
        #[arg(long, default_value_t = 3)]
        depth: usize,
        #[arg(long, default_value_t = 150)]
        patience: u32,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Test stationarity of the harmonic estimate on cylinders.
    Stationarity {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        measure: String,
        #[arg(long, default_value_t = 2)]
        depth: usize,
        #[arg(long, default_value_t = 2000)]
        walks: u64,
        #[arg(long, default_value_t = 1200)]
        steps: u32,
        #[arg(long, default_value_t = 150)]
        patience: u32,
        /// Support-truncation budget for infinite-support measures.
        #[arg(long, default_value_t = 0.0)]
        epsilon: f64,
        #[arg(long, default_value_t = 0.99)]
        confidence: f64,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Also corrupt the estimate by ten sigma and require the detector to fail it.
        #[arg(long, default_value_t = false)]
        self_test: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Drift and entropy-rate diagnostics plus the measure's moment report.
    Entropy {
        /// preset:uniform/preset:geom or a measure file (with --graph); preset:z1/z3/f2/nil:n/sol:k,l,m,n (without)
        #[arg(long)]
        measure: String,
        #[arg(long)]
        graph: Option<PathBuf>,
        #[arg(long, default_value_t = 100)]
        steps: u32,
        #[arg(long, default_value_t = 2000)]
        samples: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exhaustive stabilizer-intersection check on a vertex pair.
    StabCheck {
        #[arg(long)]
        graph: PathBuf,
        /// Tree distance of the stock pair to test (2 or 3) when --u/--v are absent.
        #[arg(long, default_value_t = 2)]
        dist: usize,
        #[arg(long, default_value_t = 4)]
        radius: u64,
        /// Explicit vertices in token form (override --dist).
        #[arg(long)]
        u: Option<String>,
        #[arg(long)]
        v: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample the induced first-return measure on a finite-index kernel.
    FirstReturn {
        #[arg(long)]
        measure: String,
        #[arg(long)]
        graph: Option<PathBuf>,
        /// trivial | edge-parity | mod:<m>
        #[arg(long)]
        quotient: String,
        #[arg(long, default_value_t = 10000)]
        returns: u64,
        #[arg(long, default_value_t = 1000000)]
        max_steps: u32,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the boundary descriptor for a geometry class.
    Atlas {
        #[arg(long)]
        tag: Option<String>,
        #[arg(long, default_value_t = false)]
        list: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            let msg = json!({"schema": "endwalk.error.v1", "error": e.to_string()});
            eprintln!("{msg}");
            ExitCode::from(1)
        }
    }
}

fn load_graph(path: &Path) -> endwalk::Result<(GraphSpec, std::sync::Arc<GraphOfGroups>)> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| endwalk::Error::Parse(format!("{}: {e}", path.display())))?;
    let spec = GraphSpec::from_json(&text)?;
    let graph = GraphOfGroups::build(&spec)?;
    Ok((spec, graph))
}

fn load_measure(group: &GraphGroup, name: &str) -> endwalk::Result<StepMeasure<GraphGroup>> {
    match name {
        "preset:uniform" => Ok(preset_uniform(group)),
        "preset:geom" | "preset:geometric" => Ok(preset_geometric(group)),
        path => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| endwalk::Error::Parse(format!("{path}: {e}")))?;
            let spec: MeasureSpec = serde_json::from_str(&text)
                .map_err(|e| endwalk::Error::Parse(format!("measure config: {e}")))?;
            measure_from_spec(group, &spec)
        }
    }
}

fn write_out(out: Option<&Path>, report: &Value, csv: Option<String>) -> endwalk::Result<()> {
    let text = serde_json::to_string_pretty(report).expect("serializable");
    match out {
        Some(path) => {
            std::fs::write(path, text)
                .map_err(|e| endwalk::Error::Parse(format!("{}: {e}", path.display())))?;
            if let Some(csv) = csv {
                let csv_path = path.with_extension("csv");
                std::fs::write(&csv_path, csv)
                    .map_err(|e| endwalk::Error::Parse(format!("{}: {e}", csv_path.display())))?;
            }
        }
        None => println!("{text}"),
    }
    Ok(())
}

fn histogram_json(h: &CylinderHistogram) -> (Value, String) {
    let mut rows = Vec::new();
    let mut csv = String::from("cylinder,count,mass\n");
    for (k, c) in &h.counts {
        let mass = h.mass(k);
        rows.push(json!({"cylinder": k, "count": c, "mass": mass.to_string()}));
        csv.push_str(&format!("\"{}\",{},{}\n", k, c, mass));
    }
    csv.push_str(&format!(
        "\"(undecided)\",{},{}\n",
        h.undecided,
        h.undecided_fraction()
    ));
    (
        json!({
            "walks": h.walks,
            "steps": h.params.steps,
            "depth": h.params.depth,
            "patience": h.params.patience,
            "cylinders": rows,
            "undecided": {
                "count": h.undecided,
                "fraction": h.undecided_fraction().to_string(),
            },
        }),
        csv,
    )
}

fn run(cmd: Cmd) -> endwalk::Result<u8> {
    match cmd {
        Cmd::Validate { graph, out } => {
            let text = std::fs::read_to_string(&graph)
                .map_err(|e| endwalk::Error::Parse(format!("{}: {e}", graph.display())))?;
            let spec = GraphSpec::from_json(&text)?;
            let report = validate_graph(&spec);
            let payload = json!({
                "schema": "endwalk.validate.v1",
                "graph": graph.display().to_string(),
                "ok": report.ok,
                "violations": report.violations,
                "notes": report.notes,
            });
            write_out(out.as_deref(), &payload, None)?;
            Ok(if report.ok { 0 } else { 2 })
        }

        Cmd::Walk {
            graph,
            measure,
            walks,
            steps,
            depth,
            patience,
            seed,
            jobs,
            out,
        } => {
            let (_, g) = load_graph(&graph)?;
            let group = GraphGroup::new(g);
            let m = load_measure(&group, &measure)?;
            let params = ConvergenceParams {
                steps,
                depth,
                patience,
            };
            let h = harmonic_estimate(&group, &m, walks, params, seed, 0, jobs);
            let (hist, csv) = histogram_json(&h);
            let payload = json!({
                "schema": "endwalk.walk.v1",
                "graph": graph.display().to_string(),
                "measure": measure,
                "seed": seed,
                "histogram": hist,
            });
            write_out(out.as_deref(), &payload, Some(csv))?;
            Ok(0)
        }

        Cmd::Harmonic {
            graph,
            measure,
            walks,
            steps,
            depth,
            patience,
            seed,
            jobs,
            out,
        } => {
            let (_, g) = load_graph(&graph)?;
            let group = GraphGroup::new(g);
            let m = load_measure(&group, &measure)?;
            let params = ConvergenceParams {
                steps,
                depth,
                patience,
            };
            let h = harmonic_estimate(&group, &m, walks, params, seed, 0, jobs);
            let (hist, csv) = histogram_json(&h);
            let payload = json!({
                "schema": "endwalk.harmonic.v1",
                "graph": graph.display().to_string(),
                "measure": measure,
                "seed": seed,
                "histogram": hist,
            });
            write_out(out.as_deref(), &payload, Some(csv))?;
            Ok(0)
        }

        Cmd::Stationarity {
            graph,
            measure,
            depth,
            walks,
            steps,
            patience,
            epsilon,
            confidence,
            seed,
            jobs,
            self_test,
            out,
        } => {
            let (_, g) = load_graph(&graph)?;
            let group = GraphGroup::new(g);
            let m = load_measure(&group, &measure)?;
            let params = StationarityParams {
                depth,
                walks,
                steps,
                patience,
                epsilon,
                confidence,
                seed,
                jobs,
                ..Default::default()
            };
            let live = stationarity_check(&group, &m, &params)?;
            let corrupted = if self_test {
                Some(stationarity_self_test(&group, &m, &params)?)
            } else {
                None
            };
            let payload = json!({
                "schema": "endwalk.stationarity.v1",
                "graph": graph.display().to_string(),
                "measure": measure,
                "report": serde_json::to_value(&live).expect("serializable"),
                "self_test": corrupted.as_ref().map(|r| serde_json::to_value(r).expect("serializable")),
            });
            write_out(out.as_deref(), &payload, None)?;
            let self_test_ok = corrupted
                .map(|r| r.verdict == Verdict::Fail)
                .unwrap_or(true);
            Ok(match live.verdict {
                Verdict::Pass if self_test_ok => 0,
                Verdict::Pass => 2, // the detector missed the corruption
                Verdict::Fail => 2,
                Verdict::Inconclusive => 3,
            })
        }

        Cmd::Entropy {
            measure,
            graph,
            steps,
            samples,
            seed,
            jobs,
            out,
        } => {
            let payload = match &graph {
                Some(path) => {
                    let (_, g) = load_graph(path)?;
                    let group = GraphGroup::new(g);
                    let m = load_measure(&group, &measure)?;
                    let drift = entropy_drift_estimate(&group, &m, steps, samples, seed, jobs);
                    let moments = moment_report(&group, &m);
                    json!({
                        "schema": "endwalk.entropy.v1",
                        "graph": path.display().to_string(),
                        "measure": measure,
                        "drift": serde_json::to_value(drift).expect("serializable"),
                        "moments": serde_json::to_value(&moments).expect("serializable"),
                    })
                }
                None => {
                    let name = measure.strip_prefix("preset:").ok_or_else(|| {
                        endwalk::Error::Parse(
                            "without --graph, --measure must be an atlas preset".into(),
                        )
                    })?;
                    let preset = atlas_preset(name)?;
                    let (drift, moments) = match &preset {
                        AtlasPreset::Z(g, m) | AtlasPreset::Z3(g, m) => (
                            entropy_drift_estimate(g, m, steps, samples, seed, jobs),
                            moment_report(g, m),
                        ),
                        AtlasPreset::F2(g, m) => (
                            entropy_drift_estimate(g, m, steps, samples, seed, jobs),
                            moment_report(g, m),
                        ),
                        AtlasPreset::Nil(g, m) => (
                            entropy_drift_estimate(g, m, steps, samples, seed, jobs),
                            moment_report(g, m),
                        ),
                        AtlasPreset::Sol(g, m) => (
                            entropy_drift_estimate(g, m, steps, samples, seed, jobs),
                            moment_report(g, m),
                        ),
                    };
                    json!({
                        "schema": "endwalk.entropy.v1",
                        "preset": preset.name(),
                        "drift": serde_json::to_value(drift).expect("serializable"),
                        "moments": serde_json::to_value(&moments).expect("serializable"),
                    })
                }
            };
            write_out(out.as_deref(), &payload, None)?;
            Ok(0)
        }

        Cmd::StabCheck {
            graph,
            dist,
            radius,
            u,
            v,
            out,
        } => {
            let (_, g) = load_graph(&graph)?;
            let (vu, vv) = match (&u, &v) {
                (Some(us), Some(vs)) => (
                    endwalk::token::parse_vertex(&g, us)?,
                    endwalk::token::parse_vertex(&g, vs)?,
                ),
                (None, None) => stock_pair(&g, dist)?,
                _ => {
                    return Err(endwalk::Error::Parse(
                        "--u and --v must be given together".into(),
                    ))
                }
            };
            let report = stab_intersection_check(&vu, &vv, radius, 5_000_000)?;
            let expected = match report.distance {
                2 => Some("cyclic"),
                d if d >= 3 => Some("trivial"),
                _ => None,
            };
            let got = match &report.structure {
                StabStructure::Trivial => "trivial",
                StabStructure::Cyclic { .. } => "cyclic",
                StabStructure::Other => "other",
            };
            let ok = expected.map_or(true, |e| e == got);
            let payload = json!({
                "schema": "endwalk.stab_check.v1",
                "graph": graph.display().to_string(),
                "report": report.to_json(),
                "expected_structure": expected,
                "ok": ok,
            });
            write_out(out.as_deref(), &payload, None)?;
            Ok(if ok { 0 } else { 2 })
        }

        Cmd::FirstReturn {
            measure,
            graph,
            quotient,
            returns,
            max_steps,
            seed,
            out,
        } => {
            let payload = match &graph {
                Some(path) => {
                    let (_, g) = load_graph(path)?;
                    let group = GraphGroup::new(g);
                    let m = load_measure(&group, &measure)?;
                    let quot = match quotient.as_str() {
                        "trivial" => trivial_quotient(&group, &m),
                        "edge-parity" => edge_parity_quotient(&group, &m)?,
                        other => {
                            return Err(endwalk::Error::Parse(format!(
                                "graph quotients: trivial | edge-parity (got {other:?})"
                            )))
                        }
                    };
                    let samples = first_return_walk(&group, &m, &quot, returns, max_steps, seed)?;
                    first_return_json(&group, &samples, &measure, &quotient)
                }
                None => {
                    let name = measure.strip_prefix("preset:").ok_or_else(|| {
                        endwalk::Error::Parse(
                            "without --graph, --measure must be an atlas preset".into(),
                        )
                    })?;
                    match atlas_preset(name)? {
                        AtlasPreset::Z(g, m) => {
                            let quot = zd_quotient(&g, &m, &quotient)?;
                            let s = first_return_walk(&g, &m, &quot, returns, max_steps, seed)?;
                            first_return_json(&g, &s, &measure, &quotient)
                        }
                        AtlasPreset::Z3(g, m) => {
                            let quot = zd_quotient(&g, &m, &quotient)?;
                            let s = first_return_walk(&g, &m, &quot, returns, max_steps, seed)?;
                            first_return_json(&g, &s, &measure, &quotient)
                        }
                        _ => {
                            return Err(endwalk::Error::Parse(
                                "first-return presets: z1, z3, or a graph measure".into(),
                            ))
                        }
                    }
                }
            };
            write_out(out.as_deref(), &payload, None)?;
            Ok(0)
        }

        Cmd::Atlas { tag, list, out } => {
            let payload = if list || tag.is_none() {
                let all: Vec<Value> = GeometryTag::ALL
                    .iter()
                    .map(|t| serde_json::to_value(classify(*t)).expect("serializable"))
                    .collect();
                json!({"schema": "endwalk.atlas.v1", "descriptors": all})
            } else {
                let t = GeometryTag::from_str(&tag.unwrap())?;
                json!({
                    "schema": "endwalk.atlas.v1",
                    "descriptor": serde_json::to_value(classify(t)).expect("serializable"),
                })
            };
            write_out(out.as_deref(), &payload, None)?;
            Ok(0)
        }
    }
}

/// Quotient presets for Z^d: `mod:<m>` reduces the first coordinate.
fn zd_quotient(
    g: &endwalk::atlas::ZdGroup,
    m: &StepMeasure<endwalk::atlas::ZdGroup>,
    name: &str,
) -> endwalk::Result<QuotientMap<endwalk::atlas::ZdGroup>> {
    if name == "trivial" {
        return Ok(trivial_quotient(g, m));
    }
    let modulus: usize = name
        .strip_prefix("mod:")
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| endwalk::Error::Parse(format!("bad quotient {name:?} (want mod:<m>)")))?;
    QuotientMap::from_fn(g, m, modulus, |v| Perm::shift(v[0], modulus))
}

fn first_return_json<G: WalkGroup>(
    group: &G,
    samples: &[(G::Elem, u32)],
    measure: &str,
    quotient: &str,
) -> Value {
    let mut law: std::collections::BTreeMap<String, u64> = Default::default();
    let mut time_hist: std::collections::BTreeMap<u32, u64> = Default::default();
    for (e, t) in samples {
        *law.entry(group.key(e)).or_insert(0) += 1;
        *time_hist.entry(*t).or_insert(0) += 1;
    }
    let n = samples.len().max(1) as f64;
    let mut rows: Vec<Value> = law
        .iter()
        .map(|(k, c)| json!({"element": k, "count": c, "fraction": *c as f64 / n}))
        .collect();
    rows.sort_by(|a, b| {
        b["count"]
            .as_u64()
            .cmp(&a["count"].as_u64())
            .then(a["element"].as_str().cmp(&b["element"].as_str()))
    });
    rows.truncate(40);
    let times: std::collections::BTreeMap<String, u64> =
        time_hist.into_iter().map(|(k, v)| (k.to_string(), v)).collect();
    json!({
        "schema": "endwalk.first_return.v1",
        "measure": measure,
        "quotient": quotient,
        "returns": samples.len(),
        "induced_law_top": rows,
        "return_times": times,
    })
}

/// Deterministic vertex pairs on which the stabilizer lemmas are checked:
/// distance 2 through the base, distance 3 along a reduced zigzag.
fn stock_pair(
    g: &std::sync::Arc<GraphOfGroups>,
    dist: usize,
) -> endwalk::Result<(TreeVertex, TreeVertex)> {
    use endwalk::block::BlockElement;
    let base = TreeVertex::base(g);
    let d0 = g.out_edges(g.base_vertex())[0];
    let first = base.child(BlockElement::identity(g.surface(g.base_vertex())), d0)?;
    match dist {
        2 => {
            // two distinct neighbors of the base vertex
            let outs = g.out_edges(g.base_vertex());
            let second = if outs.len() > 1 {
                base.child(BlockElement::identity(g.surface(g.base_vertex())), outs[1])?
            } else {
                // same edge, nontrivial coset: shift by a non-slot generator
                let s = g.surface(g.base_vertex());
                let slot_gen = g.gen_out(d0);
                let other = (0..s.rank()).find(|&x| x != slot_gen).expect("rank >= 2");
                base.child(BlockElement::generator(s, other, 1)?, d0)?
            };
            Ok((first, second))
        }
        3 => {
            let far_vertex = g.target(d0);
            let s_far = g.surface(far_vertex);
            // a non-peripheral representative at the far vertex, then return
            let back = d0.reverse();
            let slot_gen = g.gen_out(back);
            let other = (0..s_far.rank())
                .find(|&x| x != slot_gen)
                .expect("rank >= 2");
            let mid = first.child(BlockElement::generator(s_far, other, 1)?, back)?;
            let s0 = g.surface(g.base_vertex());
            let slot0 = g.gen_out(d0);
            let other0 = (0..s0.rank()).find(|&x| x != slot0).expect("rank >= 2");
            let deep = mid.child(BlockElement::generator(s0, other0, 1)?, d0)?;
            Ok((base, deep))
        }
        other => Err(endwalk::Error::Parse(format!(
            "stock pairs exist for --dist 2 or 3 (got {other}); use --u/--v for custom pairs"
        ))),
    }
}
