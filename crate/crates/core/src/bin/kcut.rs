use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use serde_json::json;

use kcut_core::config::{mix_seed, parse_rational};
use kcut_core::contraction::{karger_stein_min_kcut, NormContext};
use kcut_core::extremal::{census_csv, small_cut_census};
use kcut_core::generators::{cycle, planted, random_connected};
use kcut_core::io::{parse_graph, report_json, report_table, write_dimacs, GraphFormat};
use kcut_core::minkcut::enumerate_min_kcuts;
use kcut_core::oracle::{brute_min_kcuts, MAX_PARTITION_VERTICES};
use kcut_core::set_system::{dual_vc_dimension, find_crossing_pair, find_triple, RangeSpace};
use kcut_core::tree_packing::{best_tree_crossing, dedup_trees, greedy_forest_pack, pack_size_for};
use kcut_core::verify::run_suite;
use kcut_core::{KcutError, ScheduleConfig, WeightedGraph};

#[derive(Parser)]
#[command(name = "kcut", version, about = "Enumerate minimum k-cuts and run cut-structure experiments")]
struct Cli {
    /// Structured JSON output instead of a table.
    #[arg(long, global = true)]
    json: bool,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// TOML file with defaults for any flag.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Graph or range-space file; stdin when absent.
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    #[arg(long, global = true)]
    format: Option<GraphFormat>,
    /// Print the parsed graph in DIMACS form to stderr.
    #[arg(long, global = true)]
    echo_graph: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Default)]
struct ScheduleArgs {
    /// γ as a fraction or decimal, e.g. 1/20.
    #[arg(long)]
    gamma: Option<String>,
    #[arg(long)]
    base_k: Option<usize>,
    #[arg(long)]
    trees: Option<usize>,
    #[arg(long)]
    c_z: Option<String>,
    /// Always sample, even when an exact scan would be cheaper.
    #[arg(long)]
    no_cutover: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Optimal weight and every minimum k-cut.
    Enum {
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        schedule: ScheduleArgs,
    },
    /// Small-cut counts per normalized threshold, as CSV.
    Census {
        #[arg(long)]
        k: usize,
        /// Comma-separated thresholds, e.g. 2.95,4,14/3.
        #[arg(long, value_delimiter = ',')]
        betas: Vec<String>,
        /// Upper bound on the optimum (default: one contraction run).
        #[arg(long)]
        opt: Option<u64>,
        #[command(flatten)]
        schedule: ScheduleArgs,
    },
    /// Experiments on a range space given as one bitstring per line.
    Setsys {
        #[command(subcommand)]
        op: SetsysOp,
    },
    /// Greedy tree packing; optionally checks crossings against the oracle.
    Treepack {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        trees: Option<usize>,
        #[arg(long)]
        check_oracle: bool,
    },
    /// Built-in property suite.
    Verify,
    /// Timing table on generated graphs.
    Bench {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long, default_value_t = 3)]
        reps: usize,
        #[command(flatten)]
        schedule: ScheduleArgs,
    },
}

#[derive(Subcommand)]
enum SetsysOp {
    Crossing,
    Triple {
        #[arg(long, default_value_t = 8)]
        min_cells: usize,
        /// Bit mask of Venn cells that may not count.
        #[arg(long, default_value_t = 0)]
        forbidden: u8,
    },
    Dualvc,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Cycle,
    Random,
    Planted,
}

/// Keys mirror the long flags; flags win over the file.
#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
struct FileConfig {
    seed: Option<u64>,
    threads: Option<usize>,
    json: Option<bool>,
    format: Option<String>,
    gamma: Option<toml::Value>,
    c_z: Option<toml::Value>,
    base_k: Option<usize>,
    trees: Option<usize>,
    cap_const: Option<u64>,
    c_rep: Option<f64>,
    c_pack: Option<usize>,
    no_cutover: Option<bool>,
}

enum Failure {
    Violation(String),
    Error(String),
}

impl From<KcutError> for Failure {
    fn from(e: KcutError) -> Self {
        Failure::Error(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

struct Ctx {
    json: bool,
    seed: u64,
    input: Option<PathBuf>,
    format: GraphFormat,
    echo_graph: bool,
    file: FileConfig,
}

fn value_text(v: &toml::Value) -> String {
    match v {
        toml::Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

impl Ctx {
    fn read_input(&self) -> Result<String, Failure> {
        let mut text = String::new();
        match &self.input {
            Some(p) => text = std::fs::read_to_string(p).map_err(|e| Failure::Error(format!("{}: {e}", p.display())))?,
            None => {
                std::io::stdin().read_to_string(&mut text).map_err(|e| Failure::Error(e.to_string()))?;
            }
        }
        Ok(text)
    }

    fn graph(&self) -> Result<WeightedGraph, Failure> {
        let g = parse_graph(&self.read_input()?, self.format)?;
        if self.echo_graph {
            eprint!("{}", write_dimacs(&g));
        }
        Ok(g)
    }

    fn schedule(&self, args: &ScheduleArgs) -> Result<ScheduleConfig, Failure> {
        let f = &self.file;
        let gamma = args.gamma.clone().or(f.gamma.as_ref().map(value_text));
        let mut cfg = match gamma {
            Some(g) => ScheduleConfig::with_gamma(parse_rational(&g)?),
            None => ScheduleConfig::default(),
        };
        if let Some(c) = args.c_z.clone().or(f.c_z.as_ref().map(value_text)) {
            cfg.c_z = parse_rational(&c)?;
        }
        if let Some(b) = args.base_k.or(f.base_k) {
            cfg.base_k = b;
        }
        cfg.trees = args.trees.or(f.trees);
        cfg.cap_const = f.cap_const.unwrap_or(cfg.cap_const);
        cfg.c_rep = f.c_rep.unwrap_or(cfg.c_rep);
        cfg.c_pack = f.c_pack.unwrap_or(cfg.c_pack);
        cfg.exhaustive_cutover = !(args.no_cutover || f.no_cutover.unwrap_or(false));
        cfg.validate()?;
        Ok(cfg)
    }

    fn emit(&self, table: impl FnOnce() -> String, value: impl FnOnce() -> serde_json::Value) {
        if self.json {
            println!("{}", serde_json::to_string_pretty(&value()).expect("json"));
        } else {
            print!("{}", table());
        }
    }
}

fn run_enum(ctx: &Ctx, k: usize, schedule: &ScheduleArgs) -> Outcome {
    let g = ctx.graph()?;
    let cfg = ctx.schedule(schedule)?;
    let report = enumerate_min_kcuts(&g, k, &cfg, ctx.seed)?;
    if ctx.json {
        println!("{}", report_json(&report));
    } else {
        print!("{}", report_table(&report));
    }
    Ok(())
}

fn run_census(ctx: &Ctx, k: usize, betas: &[String], opt: Option<u64>, schedule: &ScheduleArgs) -> Outcome {
    let g = ctx.graph()?;
    let cfg = ctx.schedule(schedule)?;
    if betas.is_empty() {
        return Err(Failure::Error("--betas needs at least one threshold".into()));
    }
    let thresholds = betas.iter().map(|b| parse_rational(b)).collect::<Result<Vec<_>, _>>()?;
    let opt = match opt {
        Some(u) => u,
        None => karger_stein_min_kcut(&g, k, &cfg, mix_seed(ctx.seed, 0))?.0,
    };
    let norm = NormContext::new(opt, k)?;
    let rows = small_cut_census(&g, &norm, &thresholds, &cfg, ctx.seed)?;
    ctx.emit(
        || census_csv(g.vertex_count(), k, &rows),
        || {
            json!({
                "n": g.vertex_count(),
                "k": k,
                "opt_upper": opt,
                "rows": rows.iter().map(|r| json!({
                    "beta": r.beta.to_string(),
                    "count": r.count,
                    "cap": r.cap,
                    "cuts": r.cuts.iter().map(|c| json!({"side": c.set.to_vec(), "weight": c.weight})).collect::<Vec<_>>(),
                })).collect::<Vec<_>>(),
            })
        },
    );
    Ok(())
}

fn run_setsys(ctx: &Ctx, op: &SetsysOp) -> Outcome {
    let rs = RangeSpace::parse(&ctx.read_input()?)?;
    match op {
        SetsysOp::Crossing => {
            let pair = find_crossing_pair(&rs);
            ctx.emit(
                || match pair {
                    Some((a, b)) => format!(
                        "crossing pair: {} {}\n",
                        rs.ranges()[a].to_bitstring(),
                        rs.ranges()[b].to_bitstring()
                    ),
                    None => "no crossing pair\n".into(),
                },
                || json!({ "pair": pair.map(|(a, b)| [a, b]) }),
            );
        }
        SetsysOp::Triple { min_cells, forbidden } => {
            let t = find_triple(&rs, *min_cells, *forbidden)?;
            ctx.emit(
                || match t {
                    Some(t) => t.iter().map(|&i| rs.ranges()[i].to_bitstring() + "\n").collect(),
                    None => format!("no triple with {min_cells} cells\n"),
                },
                || json!({ "triple": t }),
            );
        }
        SetsysOp::Dualvc => {
            let d = dual_vc_dimension(&rs);
            ctx.emit(|| format!("{d}\n"), || json!({ "dual_vc_dimension": d }));
        }
    }
    Ok(())
}

fn run_treepack(ctx: &Ctx, k: usize, trees: Option<usize>, check_oracle: bool) -> Outcome {
    let g = ctx.graph()?;
    if k < 2 {
        return Err(Failure::Error("--k must be at least 2".into()));
    }
    let count = trees.or(ctx.file.trees).unwrap_or_else(|| pack_size_for(k, g.edge_count(), 1));
    let packed = dedup_trees(greedy_forest_pack(&g, count));
    let mut best = None;
    if check_oracle {
        if g.vertex_count() > MAX_PARTITION_VERTICES {
            return Err(Failure::Error(format!("oracle check needs at most {MAX_PARTITION_VERTICES} vertices")));
        }
        let (_, parts) = brute_min_kcuts(&g, k)?;
        best = parts.iter().filter_map(|p| best_tree_crossing(&packed, p)).map(|(_, c)| c).min();
    }
    ctx.emit(
        || {
            let mut out = format!("packed {count}, distinct {}\n", packed.len());
            if let Some(c) = best {
                out += &format!("fewest crossings of an optimal {k}-cut: {c} (limit {})\n", 2 * k - 2);
            }
            out
        },
        || json!({ "packed": count, "distinct": packed.len(), "best_crossing": best, "limit": 2 * k - 2 }),
    );
    match best {
        Some(c) if c > 2 * k - 2 => Err(Failure::Violation(format!("best crossing {c} exceeds {}", 2 * k - 2))),
        _ => Ok(()),
    }
}

fn run_verify(ctx: &Ctx) -> Outcome {
    let results = run_suite(ctx.seed);
    ctx.emit(
        || {
            results
                .iter()
                .map(|r| format!("{} {:<20} {}\n", if r.passed { "PASS" } else { "FAIL" }, r.name, r.detail))
                .collect()
        },
        || serde_json::to_value(&results).expect("json"),
    );
    let failed: Vec<&str> = results.iter().filter(|r| !r.passed).map(|r| r.name).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Violation(format!("failed: {}", failed.join(", "))))
    }
}

fn run_bench(ctx: &Ctx, family: Family, n: usize, k: usize, reps: usize, schedule: &ScheduleArgs) -> Outcome {
    let cfg = ctx.schedule(schedule)?;
    let mut rows = Vec::new();
    for rep in 0..reps.max(1) {
        let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(ctx.seed, rep as u64));
        let g = match family {
            Family::Cycle => cycle(n),
            Family::Random => random_connected(n, 0.3, 10, &mut rng),
            Family::Planted => planted(n, k, &mut rng),
        };
        let start = Instant::now();
        let r = enumerate_min_kcuts(&g, k, &cfg, mix_seed(ctx.seed, rep as u64))?;
        let ms = start.elapsed().as_secs_f64() * 1e3;
        rows.push((g.edge_count(), r.weight, r.partitions.len(), r.trees, ms));
    }
    ctx.emit(
        || {
            let mut out = format!("{:<4} {:<4} {:<6} {:<3} {:<7} {:<7} {:<6} {:>10}\n", "rep", "n", "m", "k", "weight", "cuts", "trees", "ms");
            for (i, (m, w, c, t, ms)) in rows.iter().enumerate() {
                out += &format!("{i:<4} {n:<4} {m:<6} {k:<3} {w:<7} {c:<7} {t:<6} {ms:>10.2}\n");
            }
            out
        },
        || {
            json!(rows
                .iter()
                .map(|(m, w, c, t, ms)| json!({"n": n, "m": m, "k": k, "weight": w, "cuts": c, "trees": t, "ms": ms}))
                .collect::<Vec<_>>())
        },
    );
    Ok(())
}

fn load_file_config(path: Option<&Path>) -> Result<FileConfig, Failure> {
    let Some(path) = path else {
        return Ok(FileConfig::default());
    };
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Error(format!("{}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| Failure::Error(format!("{}: {e}", path.display())))
}

fn run(cli: Cli) -> Outcome {
    let file = load_file_config(cli.config.as_deref())?;
    if let Some(t) = cli.threads.or(file.threads) {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| Failure::Error(e.to_string()))?;
    }
    let format = match (cli.format, &file.format) {
        (Some(f), _) => f,
        (None, Some(s)) => s.parse()?,
        (None, None) => GraphFormat::Auto,
    };
    let ctx = Ctx {
        json: cli.json || file.json.unwrap_or(false),
        seed: cli.seed.or(file.seed).unwrap_or(0),
        input: cli.input,
        format,
        echo_graph: cli.echo_graph,
        file,
    };
    match &cli.command {
        Command::Enum { k, schedule } => run_enum(&ctx, *k, schedule),
        Command::Census { k, betas, opt, schedule } => run_census(&ctx, *k, betas, *opt, schedule),
        Command::Setsys { op } => run_setsys(&ctx, op),
        Command::Treepack { k, trees, check_oracle } => run_treepack(&ctx, *k, *trees, *check_oracle),
        Command::Verify => run_verify(&ctx),
        Command::Bench { family, n, k, reps, schedule } => run_bench(&ctx, *family, *n, *k, *reps, schedule),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Violation(msg)) => {
            eprintln!("violation: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Error(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
