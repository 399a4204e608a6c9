use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use hwembed::cohomology::cohomology_dims;
use hwembed::embedding::{decide_strong_solvability, reduction_trace, Verdict};
use hwembed::field::Field;
use hwembed::group::parse_group;
use hwembed::hasse_witt::common_splitting_field;
use hwembed::modrep::{end_dim, simple_modules, GModule};
use hwembed::selftest::run_all;
use hwembed::text::{parse_problem, ProblemFile};
use hwembed::{Error, Result, Settings};

#[derive(Parser)]
#[command(name = "hwembed", version, about = "Decide p-group embedding problems over étale covers of curves")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Seed for every randomized step.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Largest extension degree tried for splitting fields.
    #[arg(long, global = true)]
    field_cap: Option<usize>,
    /// Largest group order the engine will materialize.
    #[arg(long, global = true)]
    group_cap: Option<usize>,
    /// Print only the machine-readable (JSON) report.
    #[arg(long, global = true)]
    machine: bool,
    /// Include the reduction trace and base cases in human reports.
    #[arg(long, global = true)]
    trace: bool,
}

#[derive(Subcommand)]
enum Command {
    /// List the simple modules of a group in characteristic p.
    Simples { group: String, p: u32 },
    /// Cohomology dimensions h0, h1, h2 of a module.
    Cohom {
        group: String,
        p: u32,
        /// `trivial`, `regular`, `sign`, or `simple:i` (index from `simples`).
        module: String,
    },
    /// Decide strong solvability of the embedding problem in a file.
    Decide { file: PathBuf },
    /// Print the reduction trace of the embedding problem in a file.
    Reduce { file: PathBuf },
    /// Run the acceptance battery.
    Selftest,
}

impl Global {
    fn apply(&self, mut s: Settings) -> Settings {
        if let Some(seed) = self.seed {
            s.seed = seed;
        }
        if let Some(c) = self.field_cap {
            s.field_cap = c;
        }
        if let Some(c) = self.group_cap {
            s.group_cap = c;
        }
        s
    }
}

#[derive(Serialize)]
struct SimpleRow {
    index: usize,
    dim: usize,
}

#[derive(Serialize)]
struct RationalRow {
    index: usize,
    dim: usize,
    /// Number of absolutely simple summands over the splitting field.
    deg: usize,
}

#[derive(Serialize)]
struct SimplesReport {
    group: String,
    order: usize,
    p: u32,
    field: String,
    simples: Vec<SimpleRow>,
    rational: Vec<RationalRow>,
}

#[derive(Serialize)]
struct CohomReport {
    group: String,
    p: u32,
    field: String,
    module: String,
    dim: usize,
    h0: usize,
    h1: usize,
    h2: usize,
}

#[derive(Serialize)]
struct TraceReport<'a> {
    seed: u64,
    field: String,
    steps: usize,
    trace: &'a [hwembed::embedding::ReductionStep],
}

fn emit<T: Serialize>(machine: bool, report: &T, human: impl FnOnce(&T) -> String) {
    let text =
        if machine { serde_json::to_string_pretty(report).expect("reports serialize") + "\n" } else { human(report) };
    // a closed pipe downstream is not an error worth reporting
    let _ = io::stdout().lock().write_all(text.as_bytes());
}

fn cmd_simples(g: &Global, group: &str, p: u32) -> Result<()> {
    let settings = g.apply(Settings::default());
    let h = parse_group(group)?;
    let k = common_splitting_field(&[&h], p, &settings)?;
    let fp = Field::prime(p)?;
    let simples = simple_modules(&h, &k, &settings)?;
    let rational = simple_modules(&h, &fp, &settings)?;
    let report = SimplesReport {
        group: h.to_string(),
        order: h.order(),
        p,
        field: k.to_string(),
        simples: simples.iter().enumerate().map(|(index, v)| SimpleRow { index, dim: v.dim() }).collect(),
        rational: rational
            .iter()
            .enumerate()
            .map(|(index, v)| RationalRow { index, dim: v.dim(), deg: end_dim(v) })
            .collect(),
    };
    emit(g.machine, &report, |r| {
        let mut s = format!("group {} of order {}, p = {}, splitting field {}\n", r.group, r.order, r.p, r.field);
        s.push_str("simples over the splitting field:\n");
        for row in &r.simples {
            s.push_str(&format!("  [{}] dim {}\n", row.index, row.dim));
        }
        s.push_str("simples over the prime field:\n");
        for row in &r.rational {
            s.push_str(&format!("  [{}] dim {} deg {}\n", row.index, row.dim, row.deg));
        }
        s
    });
    Ok(())
}

fn cmd_cohom(g: &Global, group: &str, p: u32, module: &str) -> Result<()> {
    let settings = g.apply(Settings::default());
    let h = parse_group(group)?;
    let k = common_splitting_field(&[&h], p, &settings)?;
    let m = match module {
        "trivial" => GModule::trivial(&h, &k),
        "regular" => GModule::regular(&h, &k),
        "sign" => GModule::sign(&h, &k)?,
        other => {
            let index: usize = other
                .strip_prefix("simple:")
                .and_then(|i| i.parse().ok())
                .ok_or_else(|| Error::InvalidInput(format!("unknown module {other:?}")))?;
            let simples = simple_modules(&h, &k, &settings)?;
            if index >= simples.len() {
                return Err(Error::InvalidInput(format!("{h} has {} simples over {k:?}", simples.len())));
            }
            simples.get(index).clone()
        }
    };
    let d = cohomology_dims(&m, &settings)?;
    let report = CohomReport {
        group: h.to_string(),
        p,
        field: k.to_string(),
        module: module.to_string(),
        dim: m.dim(),
        h0: d.h0,
        h1: d.h1,
        h2: d.h2,
    };
    emit(g.machine, &report, |r| {
        format!(
            "{} module of {} over {} (dim {}): h0 = {}, h1 = {}, h2 = {}\n",
            r.module, r.group, r.field, r.dim, r.h0, r.h1, r.h2
        )
    });
    Ok(())
}

fn load(g: &Global, file: &PathBuf) -> Result<ProblemFile> {
    let src = fs::read_to_string(file).map_err(|e| Error::InvalidInput(format!("{}: {e}", file.display())))?;
    let mut pf = parse_problem(&src, &Settings::default())?;
    pf.settings = g.apply(pf.settings);
    Ok(pf)
}

fn human_verdict(v: &Verdict, trace: bool) -> String {
    let mut s =
        format!("{} (field {}, seed {})\n", if v.solvable { "SOLVABLE" } else { "NOT SOLVABLE" }, v.field, v.seed);
    s.push_str("simple  dim  delta  h1(G)  h1(H)  slack\n");
    for e in &v.slack {
        s.push_str(&format!(
            "{:>6}  {:>3}  {:>5}  {:>5}  {:>5}  {:>5}\n",
            e.simple, e.dim, e.delta, e.h1_g, e.h1_h, e.slack
        ));
    }
    if trace {
        s.push_str(&human_trace(&v.trace));
        for b in &v.base_cases {
            s.push_str(&format!(
                "base case at depth {}: |G| = {}, |H| = {}, |P| = {}, {:?} class, divisors {:?}, delta {}, gap {}, \
                 hom {} vs {}: {}\n",
                b.depth,
                b.group_order,
                b.quotient_order,
                b.kernel_order,
                b.class,
                b.divisors,
                b.delta,
                b.h1_gap,
                b.hom_count,
                b.h2_side,
                if b.solvable { "solvable" } else { "not solvable" }
            ));
        }
    }
    for n in &v.notes {
        s.push_str(&format!("note: {n}\n"));
    }
    s
}

fn human_trace(trace: &[hwembed::embedding::ReductionStep]) -> String {
    let mut s = String::new();
    for step in trace {
        s.push_str(&format!(
            "{}{:?}: |G| = {}, |P| = {}, collapsing {}; inequalities {} -> {}\n",
            "  ".repeat(step.depth),
            step.kind,
            step.group_order,
            step.kernel_order,
            step.collapsed_order,
            step.parent_kani,
            step.child_kani
        ));
    }
    s
}

fn cmd_decide(g: &Global, file: &PathBuf) -> Result<bool> {
    let pf = load(g, file)?;
    let verdict = decide_strong_solvability(&pf.problem, &pf.settings)?;
    emit(g.machine, &verdict, |v| human_verdict(v, g.trace));
    Ok(verdict.solvable)
}

fn cmd_reduce(g: &Global, file: &PathBuf) -> Result<()> {
    let pf = load(g, file)?;
    let trace = reduction_trace(&pf.problem, &pf.settings)?;
    let report = TraceReport {
        seed: pf.settings.seed,
        field: pf.problem.working_field(&pf.settings)?.to_string(),
        steps: trace.len(),
        trace: &trace,
    };
    emit(g.machine, &report, |r| {
        let mut s = format!("reduction over {} (seed {}), {} steps\n", r.field, r.seed, r.trace.len());
        s.push_str(&human_trace(r.trace));
        s
    });
    Ok(())
}

fn cmd_selftest(g: &Global) -> bool {
    let reports = run_all(&g.apply(Settings::default()));
    let ok = reports.iter().all(|r| r.passed);
    emit(g.machine, &reports, |rs| {
        let mut s = String::new();
        for r in rs {
            s.push_str(&format!("{r}\n"));
            for f in &r.failures {
                s.push_str(&format!("    {f}\n"));
            }
        }
        s
    });
    ok
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let g = &cli.global;
    let outcome = match &cli.command {
        Command::Simples { group, p } => cmd_simples(g, group, *p).map(|_| true),
        Command::Cohom { group, p, module } => cmd_cohom(g, group, *p, module).map(|_| true),
        Command::Decide { file } => cmd_decide(g, file),
        Command::Reduce { file } => cmd_reduce(g, file).map(|_| true),
        Command::Selftest => Ok(cmd_selftest(g)),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
