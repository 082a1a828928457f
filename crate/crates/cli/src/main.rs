use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use dtlab::bipartite::{build_gamma0, build_gamma0_star, find_move_sequence, EmbeddedBipartiteGraph, GraphJson, SearchOutcome};
use dtlab::configuration::{psi_coords, Configuration};
use dtlab::orientation::{boundary_measurement_at, special_orientation};
use dtlab::poly::SparsePoly;
use dtlab::tropical::check_dt_criterion_symbolic;
use dtlab::verify::{run_suite, Suite, SuiteConfig, SYMBOLIC_SIZES};
use dtlab::ysystem::{y_period, Denominator, YInit};
use dtlab::Rational;

#[derive(Parser)]
#[command(name = "dtlab", version, about = "Minimal bipartite graphs, cluster coordinates and the DT transformation")]
struct Cli {
    /// RNG seed for randomized suites.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
}

#[derive(Subcommand)]
enum Cmd {
    /// The standard graph for (m, n); DOT output is its face quiver.
    Gamma0 {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        /// Build the mirrored graph instead.
        #[arg(long)]
        star: bool,
    },
    /// Zig-zag strands of a graph.
    Zigzag(GraphSource),
    /// Face quiver of a graph.
    Quiver {
        #[command(flatten)]
        src: GraphSource,
        /// Drop the boundary faces.
        #[arg(long)]
        interior: bool,
    },
    /// Faces with their dominating sets.
    Dominate(GraphSource),
    /// Special perfect orientation.
    Orient {
        #[command(flatten)]
        src: GraphSource,
        /// Base point of the cyclic order (default 1).
        #[arg(long, default_value_t = 1)]
        base: usize,
    },
    /// Boundary measurement matrix.
    Measure {
        #[command(flatten)]
        src: GraphSource,
        /// One variable per face.
        #[arg(long, conflicts_with = "values", required_unless_present = "values")]
        symbolic: bool,
        /// JSON object from face name to rational; boundary faces default to 1.
        #[arg(long)]
        values: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        base: usize,
    },
    /// Face coordinates of a configuration on a graph.
    Psi {
        #[arg(long)]
        config: PathBuf,
        /// Graph JSON; the standard graph when omitted.
        #[arg(long)]
        graph: Option<PathBuf>,
    },
    /// Geometric DT applied `power` times.
    Dt {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = 1)]
        power: usize,
        /// Print the projective frame representative.
        #[arg(long)]
        normalize: bool,
    },
    /// The star involution.
    Star {
        #[arg(long)]
        config: PathBuf,
    },
    /// Run a verification suite.
    Verify(VerifyArgs),
    /// Periods of the Y-system for A_p x A_q.
    Ysystem {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        q: usize,
        #[arg(long, value_enum, default_value_t = InitArg::Parity)]
        init: InitArg,
        #[arg(long, value_enum, default_value_t = FormArg::Inverse)]
        form: FormArg,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 40)]
        max_steps: usize,
    },
    /// Breadth-first search for moves between two graphs.
    MovesSearch {
        /// Start graph; the mirrored graph for (m, n) when omitted.
        #[arg(long)]
        from: Option<PathBuf>,
        /// Target graph; the standard graph for (m, n) when omitted.
        #[arg(long)]
        to: Option<PathBuf>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 20_000)]
        budget: usize,
    },
}

#[derive(Args)]
struct GraphSource {
    /// Graph JSON file.
    #[arg(long, conflicts_with_all = ["m", "n"])]
    graph: Option<PathBuf>,
    /// With --n, use the standard graph.
    #[arg(long, requires = "n")]
    m: Option<usize>,
    #[arg(long, requires = "m")]
    n: Option<usize>,
}

#[derive(Args)]
struct VerifyArgs {
    /// graph, orientation, configuration, dt-periodicity, dt-criterion, lemma1-search, ysystem or all.
    suite: String,
    /// Restrict to a single size (for ysystem, --m and --n are p and q).
    #[arg(long, requires = "n")]
    m: Option<usize>,
    #[arg(long, requires = "m")]
    n: Option<usize>,
    #[arg(long, default_value_t = 20)]
    trials: usize,
    #[arg(long, default_value_t = 20_000)]
    budget: usize,
    #[arg(long)]
    max_steps: Option<usize>,
    #[arg(long, value_enum, default_value_t = InitArg::Parity)]
    init: InitArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum InitArg {
    Full,
    Parity,
}

impl From<InitArg> for YInit {
    fn from(a: InitArg) -> YInit {
        match a {
            InitArg::Full => YInit::Full,
            InitArg::Parity => YInit::Parity,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormArg {
    Inverse,
    Plain,
}

impl From<FormArg> for Denominator {
    fn from(a: FormArg) -> Denominator {
        match a {
            FormArg::Inverse => Denominator::Inverse,
            FormArg::Plain => Denominator::Plain,
        }
    }
}

/// What a command produced: a document and the exit code it implies.
struct Output {
    body: String,
    code: u8,
}

impl Output {
    fn json(v: &impl serde::Serialize, code: u8) -> anyhow::Result<Output> {
        Ok(Output { body: serde_json::to_string_pretty(v)? + "\n", code })
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> anyhow::Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn read_graph(path: &Path) -> anyhow::Result<EmbeddedBipartiteGraph> {
    let j: GraphJson = read_json(path)?;
    Ok(EmbeddedBipartiteGraph::from_json(&j)?)
}

fn read_config(path: &Path) -> anyhow::Result<Configuration> {
    let c: Configuration = read_json(path)?;
    let checked = Configuration::new(c.m, c.n, c.flavor, c.columns)?;
    Ok(checked)
}

impl GraphSource {
    fn load(&self) -> anyhow::Result<EmbeddedBipartiteGraph> {
        match (&self.graph, self.m, self.n) {
            (Some(p), _, _) => read_graph(p),
            (None, Some(m), Some(n)) => Ok(build_gamma0(m, n)?),
            _ => bail!("give --graph or both --m and --n"),
        }
    }
}

fn json_only(format: Format, what: &str) -> anyhow::Result<()> {
    if format == Format::Dot {
        bail!("{what} has no DOT output");
    }
    Ok(())
}

fn run(cli: &Cli) -> anyhow::Result<Output> {
    let format = cli.format;
    match &cli.cmd {
        Cmd::Gamma0 { m, n, star } => {
            let g = if *star { build_gamma0_star(*m, *n)? } else { build_gamma0(*m, *n)? };
            match format {
                Format::Json => Output::json(&g.to_json(), 0),
                Format::Dot => Ok(Output { body: g.analyze()?.quiver(&g)?.to_dot(), code: 0 }),
            }
        }
        Cmd::Zigzag(src) => {
            json_only(format, "zigzag")?;
            let g = src.load()?;
            Output::json(&g.analyze()?.strands, 0)
        }
        Cmd::Quiver { src, interior } => {
            let g = src.load()?;
            let mut s = g.analyze()?.quiver(&g)?;
            if *interior {
                s = s.boundary_removed();
            }
            match format {
                Format::Json => Output::json(&s, 0),
                Format::Dot => Ok(Output { body: s.to_dot(), code: 0 }),
            }
        }
        Cmd::Dominate(src) => {
            json_only(format, "dominate")?;
            let g = src.load()?;
            let an = g.analyze()?;
            Output::json(&json!({ "minimal": an.report, "faces": an.faces }), 0)
        }
        Cmd::Orient { src, base } => {
            json_only(format, "orient")?;
            let g = src.load()?;
            check_base(*base, g.n())?;
            let an = g.analyze()?;
            Output::json(&special_orientation(&g, &an, *base)?, 0)
        }
        Cmd::Measure { src, symbolic, values, base } => {
            json_only(format, "measure")?;
            let g = src.load()?;
            check_base(*base, g.n())?;
            let an = g.analyze()?;
            if *symbolic {
                let vals: BTreeMap<String, SparsePoly> =
                    an.faces.iter().map(|f| (f.name.clone(), SparsePoly::var(&f.name))).collect();
                Output::json(&boundary_measurement_at(&g, &vals, *base)?, 0)
            } else {
                let path = values.as_ref().ok_or_else(|| anyhow!("give --symbolic or --values"))?;
                let given: BTreeMap<String, Rational> = read_json(path)?;
                if let Some(k) = given.keys().find(|k| an.face_by_name(k).is_none()) {
                    bail!("no face named {k}");
                }
                let mut vals = BTreeMap::new();
                for f in &an.faces {
                    let v = match given.get(&f.name) {
                        Some(v) => v.clone(),
                        None if f.boundary => Rational::from_int(1),
                        None => bail!("missing value for interior face {}", f.name),
                    };
                    vals.insert(f.name.clone(), v);
                }
                Output::json(&boundary_measurement_at(&g, &vals, *base)?, 0)
            }
        }
        Cmd::Psi { config, graph } => {
            json_only(format, "psi")?;
            let c = read_config(config)?;
            let g = match graph {
                Some(p) => read_graph(p)?,
                None => build_gamma0(c.m, c.n)?,
            };
            Output::json(&psi_coords(&c, &g)?.values, 0)
        }
        Cmd::Dt { config, power, normalize } => {
            json_only(format, "dt")?;
            let mut c = read_config(config)?;
            for _ in 0..*power {
                c = c.dt()?;
            }
            if *normalize {
                c = c.normalized();
            }
            Output::json(&c, 0)
        }
        Cmd::Star { config } => {
            json_only(format, "star")?;
            Output::json(&read_config(config)?.star()?, 0)
        }
        Cmd::Verify(a) => {
            json_only(format, "verify")?;
            let suite: Suite = a.suite.parse().map_err(|e| anyhow!("{e}"))?;
            let mut cfg = SuiteConfig::new(suite);
            cfg.trials = a.trials;
            cfg.seed = cli.seed;
            cfg.budget = a.budget;
            cfg.max_steps = a.max_steps;
            cfg.init = a.init.into();
            if let (Some(m), Some(n)) = (a.m, a.n) {
                cfg.sizes = Some(vec![(m, n)]);
            }
            let report = run_suite(&cfg)?;
            let code = report.exit_code() as u8;
            let mut v = serde_json::to_value(&report)?;
            if suite == Suite::DtCriterion {
                let sizes = cfg.sizes.clone().unwrap_or_else(|| SYMBOLIC_SIZES.to_vec());
                let degrees = sizes.iter().map(|&(m, n)| check_dt_criterion_symbolic(m, n)).collect::<Result<Vec<_>, _>>()?;
                v["degree_reports"] = serde_json::to_value(degrees)?;
            }
            Output::json(&v, code)
        }
        Cmd::Ysystem { p, q, init, form, trials, max_steps } => {
            json_only(format, "ysystem")?;
            let r = y_period(*p, *q, (*init).into(), (*form).into(), *trials, *max_steps, cli.seed)?;
            let code = if r.pass { 0 } else { 1 };
            Output::json(&r, code)
        }
        Cmd::MovesSearch { from, to, m, n, budget } => {
            json_only(format, "moves-search")?;
            let size = || m.zip(*n).ok_or_else(|| anyhow!("give --m and --n or both graph files"));
            let a = match from {
                Some(p) => read_graph(p)?,
                None => {
                    let (m, n) = size()?;
                    build_gamma0_star(m, n)?
                }
            };
            let b = match to {
                Some(p) => read_graph(p)?,
                None => {
                    let (m, n) = size()?;
                    build_gamma0(m, n)?
                }
            };
            match find_move_sequence(&a, &b, *budget)? {
                SearchOutcome::Found { steps, visited, .. } => {
                    Output::json(&json!({ "found": true, "visited": visited, "steps": steps }), 0)
                }
                SearchOutcome::Exhausted { visited } => {
                    Output::json(&json!({ "found": false, "visited": visited, "steps": Value::Null }), 3)
                }
            }
        }
    }
}

fn check_base(t: usize, n: usize) -> anyhow::Result<()> {
    if !(1..=n).contains(&t) {
        bail!("--base must lie in 1..={n}");
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let out = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let written = match &cli.out {
        Some(p) => fs::write(p, &out.body).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{}", out.body);
            Ok(())
        }
    };
    if let Err(e) = written {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    ExitCode::from(out.code)
}
