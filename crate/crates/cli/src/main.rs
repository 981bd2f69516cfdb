mod input;
mod report;

use std::collections::BTreeSet;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use eposa_core::gadgets::{build_z_with_gadget, crossed_path_gadget, double_path_gadget};
use eposa_core::io::{encode_graph6, to_dot, to_json};
use eposa_core::planarity::is_planar;
use eposa_core::verify::*;
use eposa_core::*;
use serde_json::json;

use input::{parse_pair, read_instance, Instance, InstanceArgs, Sidecar};
use report::{Outcome, RunReport, Verdict, EXIT_USAGE};

#[derive(Debug, Parser)]
#[command(
    name = "eposa",
    version,
    about = "Generate wall gadgets and run exact linkage/subdivision checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write a generated graph.
    Gen(GenArgs),
    /// Run a check; exit 0 = holds, 1 = fails, 2 = usage, 3 = resource limit.
    Check(CheckArgs),
}

#[derive(Debug, Args)]
struct GenArgs {
    #[command(subcommand)]
    what: GenCommand,
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Output file; stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Also write the instance sidecar here (for `z` it defaults to
    /// `<out>.instance.json`).
    #[arg(long, global = true)]
    sidecar: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Graph6,
    Dot,
    Json,
}

#[derive(Debug, Subcommand)]
enum GenCommand {
    Heinlein {
        #[arg(long)]
        size: usize,
    },
    Wall {
        #[arg(long)]
        rows: usize,
        #[arg(long)]
        cols: usize,
        #[arg(long)]
        prime: bool,
    },
    /// The plain `m x n` grid.
    Grid {
        #[arg(long)]
        rows: usize,
        #[arg(long)]
        cols: usize,
    },
    /// Replace one edge by `k` parallel length-2 paths.
    Multiply {
        #[arg(long, short = 'i')]
        input: PathBuf,
        #[arg(long, value_parser = parse_pair)]
        edge: (usize, usize),
        #[arg(short = 'k')]
        k: usize,
    },
    Z {
        /// A wall sidecar, or a graph file together with `--designation`.
        #[arg(long)]
        pattern: PathBuf,
        /// JSON wall designation for a non-wall pattern.
        #[arg(long)]
        designation: Option<PathBuf>,
        #[arg(long, value_parser = parse_pair)]
        e1: (usize, usize),
        #[arg(long, value_parser = parse_pair)]
        e2: (usize, usize),
        #[arg(short = 'r')]
        r: usize,
        #[arg(long, default_value_t = DEFAULT_MIN_APART)]
        min_apart: usize,
        /// Glue a control gadget instead of the Heinlein wall.
        #[arg(long, value_enum)]
        control: Option<Control>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Control {
    DoublePath,
    CrossedPaths,
}

#[derive(Debug, Args)]
struct CheckArgs {
    #[command(subcommand)]
    what: CheckCommand,
    #[command(flatten)]
    instance: InstanceArgs,
    /// Write the JSON report here (`-` for stdout).
    #[arg(long, global = true)]
    json: Option<PathBuf>,
    #[arg(long, env = "EPOSA_NODE_BUDGET", default_value_t = DEFAULT_NODE_BUDGET, global = true)]
    budget_nodes: u64,
    /// Seed for sampled modes.
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
    /// Worker threads; 1 runs the sequential path.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Report `wall_clock_ms` as 0 so reports are byte-stable.
    #[arg(long, global = true)]
    no_timing: bool,
}

#[derive(Debug, Subcommand)]
enum CheckCommand {
    /// An (a*-b*, c*-d*) linkage exists.
    Linkage,
    /// No two edge-disjoint linkages exist.
    TwoLinkages,
    /// Every deletion of `budget` edges leaves a linkage.
    Robustness {
        #[arg(long)]
        budget: usize,
    },
    /// No `budget` edges of Z meet every subdivision of the pattern.
    NoHittingSet {
        #[arg(long)]
        budget: usize,
        #[arg(long, value_enum, default_value_t = ModeArg::Exhaustive)]
        mode: ModeArg,
        /// Subsets drawn in sampled mode.
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    Pathwidth {
        /// Fail unless the width is at most this.
        #[arg(long)]
        at_most: Option<usize>,
    },
    Treewidth {
        #[arg(long)]
        at_most: Option<usize>,
    },
    /// Apartness of two wall vertices.
    Apart {
        #[arg(long)]
        u: usize,
        #[arg(long)]
        v: usize,
        #[arg(long, default_value_t = 0)]
        at_least: usize,
    },
    /// Pick two edges at proper branch vertices that are `distance`-apart.
    FarPair {
        #[arg(long)]
        distance: usize,
    },
    /// The instance contains a subdivision of the pattern graph.
    Subdivision {
        #[arg(long)]
        pattern: PathBuf,
    },
    /// Enumerate pattern subdivisions in Z and count those whose trace in
    /// the gadget holds a linkage. Reports only, unless `--strict`.
    #[command(name = "lemma5-survey")]
    Survey {
        #[arg(long)]
        strict: bool,
    },
    /// Menger duality between a vertex and a target set.
    Separator {
        #[arg(long)]
        center: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        targets: Vec<usize>,
    },
    ThreeFan {
        #[arg(long)]
        center: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        targets: Vec<usize>,
    },
    /// Vertices sending a 3-fan to the designated wall's branch vertices.
    BranchFans,
    Planarity,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Exhaustive,
    Structural,
    Sampled,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Gen(args) => gen(args).map(|()| 0),
        Command::Check(args) => check(args),
    };
    match code {
        Ok(c) => ExitCode::from(c as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE as u8)
        }
    }
}

fn write_out(path: Option<&PathBuf>, text: &str) -> Result<()> {
    match path {
        Some(p) if p.as_os_str() != "-" => {
            fs::write(p, text).with_context(|| format!("writing {}", p.display()))
        }
        _ => {
            print!("{text}");
            Ok(())
        }
    }
}

fn render(g: &Graph, format: Format) -> String {
    match format {
        Format::Graph6 => format!("{}\n", encode_graph6(g)),
        Format::Dot => to_dot(g, "G"),
        Format::Json => format!("{}\n", to_json(g)),
    }
}

fn gen(args: GenArgs) -> Result<()> {
    let (graph, sidecar) = match args.what {
        GenCommand::Heinlein { size } => {
            let w = heinlein_wall(size)?;
            (w.graph.clone(), Some(Sidecar::Heinlein(w)))
        }
        GenCommand::Wall { rows, cols, prime } => {
            let w = if prime {
                wall_prime(rows, cols)?
            } else {
                elementary_wall(rows, cols)?
            };
            (w.graph.clone(), Some(Sidecar::Wall(w)))
        }
        GenCommand::Grid { rows, cols } => (elementary_grid(rows, cols)?, None),
        GenCommand::Multiply { input, edge, k } => {
            let (inst, _) = read_instance(&input)?;
            (
                multiply_edge(inst.graph(), Edge::new(edge.0, edge.1), k)?,
                None,
            )
        }
        GenCommand::Z {
            pattern,
            designation,
            e1,
            e2,
            r,
            min_apart,
            control,
        } => {
            let (inst, _) = read_instance(&pattern)?;
            let des = match (&inst, designation) {
                (_, Some(p)) => serde_json::from_str::<WallDesignation>(&fs::read_to_string(&p)?)
                    .with_context(|| format!("parsing designation {}", p.display()))?,
                (Instance::Sidecar(Sidecar::Wall(w)), None) => WallDesignation::identity(w.clone()),
                _ => bail!("pattern is not a wall sidecar; pass --designation"),
            };
            let h = inst.graph();
            let z = match control {
                None => build_z(h, &des, e1, e2, r, min_apart)?,
                Some(c) => {
                    let g = match c {
                        Control::DoublePath => double_path_gadget(2),
                        Control::CrossedPaths => crossed_path_gadget(2),
                    };
                    build_z_with_gadget(h, &des, e1, e2, r, min_apart, &g)?
                }
            };
            (z.z.clone(), Some(Sidecar::Z(Box::new(z))))
        }
    };
    write_out(args.out.as_ref(), &render(&graph, args.format))?;
    let sidecar_path = args.sidecar.or_else(|| match (&sidecar, &args.out) {
        (Some(Sidecar::Z(_)), Some(out)) => {
            let mut p = out.clone().into_os_string();
            p.push(".instance.json");
            Some(p.into())
        }
        _ => None,
    });
    if let Some(p) = sidecar_path {
        let s = sidecar.ok_or_else(|| anyhow!("this generator has no sidecar"))?;
        fs::write(&p, serde_json::to_string(&s)? + "\n")
            .with_context(|| format!("writing {}", p.display()))?;
    }
    Ok(())
}

fn check(args: CheckArgs) -> Result<i32> {
    let mut config = SearchConfig::with_budget(args.budget_nodes);
    if let Some(j) = args.jobs {
        if j == 0 {
            bail!("--jobs must be positive");
        }
        // Read by rayon when its global pool starts, which has not happened yet.
        std::env::set_var("RAYON_NUM_THREADS", j.to_string());
        if j == 1 {
            config = config.sequential();
        }
    }
    let (inst, desc) = args.instance.load()?;
    let claim = claim_of(&args.what);
    let start = Instant::now();
    let outcome = run_check(&args.what, &inst, &config, args.seed);
    let elapsed = if args.no_timing {
        0
    } else {
        start.elapsed().as_millis() as u64
    };

    let (verdict, outcome) = match outcome {
        Ok(o) => (
            if o.holds {
                Verdict::Pass
            } else {
                Verdict::Fail
            },
            o,
        ),
        Err(CheckError::Verify(VerifyError::ResourceLimit { budget })) => {
            (Verdict::ResourceLimit, Outcome::new(false).nodes(budget))
        }
        Err(CheckError::Verify(e)) => return Err(e.into()),
        Err(CheckError::Other(e)) => return Err(e),
    };
    let report = RunReport {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        // argv[0] depends on the install location; echo a stable name.
        command: std::iter::once("eposa".to_string())
            .chain(std::env::args().skip(1))
            .collect(),
        claim,
        instance: desc,
        mode: outcome.mode.clone(),
        result: verdict,
        witness: outcome.witness.clone(),
        details: outcome.details.clone(),
        nodes_explored: outcome.nodes_explored,
        wall_clock_ms: elapsed,
    };
    let summary = serde_json::to_value(verdict)?;
    eprintln!(
        "{}: {} ({} nodes)",
        report.claim,
        summary.as_str().unwrap_or_default(),
        report.nodes_explored
    );
    if let Some(p) = &args.json {
        write_out(Some(p), &report.to_json())?;
    }
    Ok(verdict.exit_code())
}

enum CheckError {
    Verify(VerifyError),
    Other(anyhow::Error),
}

impl From<VerifyError> for CheckError {
    fn from(e: VerifyError) -> Self {
        CheckError::Verify(e)
    }
}

impl From<anyhow::Error> for CheckError {
    fn from(e: anyhow::Error) -> Self {
        CheckError::Other(e)
    }
}

fn claim_of(c: &CheckCommand) -> String {
    match c {
        CheckCommand::Linkage => "an (a*-b*, c*-d*) linkage exists".into(),
        CheckCommand::TwoLinkages => "no two edge-disjoint (a*-b*, c*-d*) linkages".into(),
        CheckCommand::Robustness { budget } => {
            format!("a linkage survives every deletion of {budget} edges")
        }
        CheckCommand::NoHittingSet { budget, .. } => {
            format!("no {budget} edges meet every subdivision of the pattern")
        }
        CheckCommand::Pathwidth { at_most } => width_claim("pathwidth", *at_most),
        CheckCommand::Treewidth { at_most } => width_claim("treewidth", *at_most),
        CheckCommand::Apart { u, v, at_least } => format!("{u} and {v} are {at_least}-apart"),
        CheckCommand::FarPair { distance } => {
            format!("two edges at proper branch vertices are {distance}-apart")
        }
        CheckCommand::Subdivision { .. } => {
            "the instance contains a subdivision of the pattern".into()
        }
        CheckCommand::Survey { .. } => {
            "every pattern subdivision holds a linkage in the gadget".into()
        }
        CheckCommand::Separator { center, .. } => {
            format!("min separator from {center} equals max fan")
        }
        CheckCommand::ThreeFan { center, .. } => format!("a 3-fan from {center} exists"),
        CheckCommand::BranchFans => "vertices with a 3-fan to the wall's branch vertices".into(),
        CheckCommand::Planarity => "the instance is planar".into(),
    }
}

fn width_claim(name: &str, at_most: Option<usize>) -> String {
    match at_most {
        Some(w) => format!("{name} at most {w}"),
        None => format!("exact {name}"),
    }
}

fn run_check(
    c: &CheckCommand,
    inst: &Instance,
    config: &SearchConfig,
    seed: u64,
) -> Result<Outcome, CheckError> {
    let g = inst.graph();
    Ok(match c {
        CheckCommand::Linkage => {
            let t = inst.terminals()?;
            let budget = config.budget();
            let l = linkage::find_linkage_budgeted(g, t, &budget)?;
            Outcome::new(l.is_some()).witness(l).nodes(budget.used())
        }
        CheckCommand::TwoLinkages => {
            let t = inst.terminals()?;
            let r = two_edge_disjoint_linkages(g, t, config)?;
            Outcome::new(!r.exists())
                .witness(&r.witness)
                .details(json!({ "linkages_examined": r.linkages_examined }))
                .nodes(r.nodes_explored)
        }
        CheckCommand::Robustness { budget } => {
            let r = match inst.heinlein() {
                Some(w) => hitting_robustness(w, *budget, config)?,
                None => linkage_robustness(g, inst.terminals()?, *budget, config)?,
            };
            Outcome::new(r.holds)
                .witness(&r.witness)
                .details(json!({ "subsets_checked": r.subsets_checked }))
                .nodes(r.nodes_explored)
        }
        CheckCommand::NoHittingSet {
            budget,
            mode,
            samples,
        } => {
            let mode = match mode {
                ModeArg::Exhaustive => HittingMode::Exhaustive,
                ModeArg::Structural => HittingMode::Structural,
                ModeArg::Sampled => HittingMode::Sampled {
                    seed,
                    samples: *samples,
                },
            };
            let r = check_no_hitting_set(inst.z()?, *budget, mode, config)?;
            let name = serde_json::to_value(mode).map_err(anyhow::Error::from)?["mode"]
                .as_str()
                .unwrap_or_default()
                .to_string();
            Outcome::new(r.holds)
                .mode(name)
                .witness(&r.failing_set)
                .nodes(r.nodes_explored)
                .details(&r)
        }
        CheckCommand::Pathwidth { at_most } => {
            let r = pathwidth_exact(g, config)?;
            let valid = r.decomposition.validate(g);
            let holds = valid.is_ok() && at_most.is_none_or(|w| r.width <= w);
            Outcome::new(holds)
                .witness(&r.decomposition)
                .details(json!({ "width": r.width, "ordering": r.ordering, "certificate_valid": valid.is_ok() }))
                .nodes(r.nodes_explored)
        }
        CheckCommand::Treewidth { at_most } => {
            let r = treewidth_exact(g, config)?;
            let valid = r.decomposition.validate(g);
            let holds = valid.is_ok() && at_most.is_none_or(|w| r.width <= w);
            Outcome::new(holds)
                .witness(&r.decomposition)
                .details(json!({ "width": r.width, "ordering": r.ordering, "certificate_valid": valid.is_ok() }))
                .nodes(r.nodes_explored)
        }
        CheckCommand::Apart { u, v, at_least } => {
            let (d, path) = inst
                .wall()?
                .apartness_with_witness(*u, *v)
                .map_err(anyhow::Error::from)?;
            Outcome::new(d >= *at_least)
                .witness(path)
                .details(json!({ "apartness": d }))
        }
        CheckCommand::FarPair { distance } => match inst.wall()?.select_far_edge_pair(*distance) {
            Ok(pair) => Outcome::new(true).witness(pair),
            Err(WallError::NoSuchPair(_)) => Outcome::new(false),
            Err(e) => return Err(anyhow::Error::from(e).into()),
        },
        CheckCommand::Subdivision { pattern } => {
            let (h, _) = read_instance(pattern)?;
            let e = find_subdivision(h.graph(), g, config)?;
            Outcome::new(e.is_some()).witness(e)
        }
        CheckCommand::Survey { strict } => {
            let r = all_subdivisions_contain_linkage(inst.z()?, config)?;
            Outcome::new(!strict || r.all_conform())
                .witness(&r.first_violation)
                .details(json!({
                    "canonical_embeddings": r.canonical_embeddings,
                    "expanded_embeddings": r.expanded_embeddings.to_string(),
                    "conforming": r.conforming,
                    "violating": r.violating,
                    "expanded_conforming": r.expanded_conforming.to_string(),
                    "expanded_violating": r.expanded_violating.to_string(),
                }))
                .nodes(r.nodes_explored)
        }
        CheckCommand::Separator { center, targets } => {
            check_vertices(g, std::iter::once(center).chain(targets))?;
            let fan = max_fan_size(g, *center, targets);
            let sep = min_vertex_separator(g, *center, targets, g.n());
            let holds = sep
                .as_ref()
                .is_some_and(|s| s.len() == fan && s.separates(g));
            Outcome::new(holds)
                .witness(&sep)
                .details(json!({ "max_fan": fan, "fan": max_fan(g, *center, targets, fan) }))
        }
        CheckCommand::ThreeFan { center, targets } => {
            check_vertices(g, std::iter::once(center).chain(targets))?;
            let set: BTreeSet<usize> = targets.iter().copied().collect();
            let f = three_fan(g, *center, &set);
            Outcome::new(f.is_some()).witness(f)
        }
        CheckCommand::BranchFans => {
            let branch: BTreeSet<usize> = match inst {
                Instance::Sidecar(Sidecar::Wall(w)) => {
                    w.proper_branch_vertices().into_iter().collect()
                }
                Instance::Sidecar(Sidecar::Z(z)) => z
                    .designation
                    .wall
                    .proper_branch_vertices()
                    .into_iter()
                    .map(|w| z.m_star.branch[w])
                    .collect(),
                _ => return Err(anyhow!("this check needs a wall or Z instance").into()),
            };
            let b = compute_b_m(g, &branch);
            Outcome::new(true)
                .witness(b)
                .details(json!({ "branch_vertices": branch }))
        }
        CheckCommand::Planarity => Outcome::new(is_planar(g)),
    })
}

fn check_vertices<'a>(g: &Graph, vs: impl IntoIterator<Item = &'a usize>) -> Result<()> {
    for &v in vs {
        if v >= g.n() {
            bail!("vertex {v} is out of range (n = {})", g.n());
        }
    }
    Ok(())
}
