use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use orbitquant::homology::{catalogue, chern_character, HomologyReport};
use orbitquant::moyal::{star, PlanckParam, SeriesCoefficients, DEFAULT_ORDER};
use orbitquant::operators::rep::AFFR_GRID;
use orbitquant::operators::{affr_evolution_check, EvolutionReport};
use orbitquant::orbits::{classify_orbit, darboux_chart_branch, verify_darboux_branch, OrbitDescriptor, OrbitFamily};
use orbitquant::verify::{self, CaseStatus, Scope, VerificationRun, VerifyConfig, DEFAULT_SEED, EVOLUTION_L2_TOL, NORM_DRIFT_TOL};
use orbitquant::{AlgebraName, Error, ExactScalar, Execution, ExpPoly, LieAlgebra};

const EXIT_VERIFY_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser, Debug)]
#[command(name = "orbitquant", version, about = "Exact quantization of coadjoint orbits of aff(R), aff(C) and sl(2,R)")]
struct Cli {
    /// Emit JSON on stdout.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for randomized suites.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Worker threads for independent cases (1 = sequential).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Planck parameter, an exact rational such as `1`, `1/2` or `3/4`.
    #[arg(long = "h", global = true, default_value = "1", allow_hyphen_values = true)]
    h: String,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Coadjoint orbit queries.
    Orbit {
        #[command(subcommand)]
        action: OrbitAction,
    },
    /// Moyal ⋆-product of two chart functions.
    Star(StarArgs),
    /// Run verification suites.
    Verify(VerifyArgs),
    /// Evolve ℓ̂_A on a grid and compare with the unitary representation.
    Evolve(EvolveArgs),
    /// K-theory / periodic cyclic homology reports.
    Homology(HomologyArgs),
}

#[derive(Subcommand, Debug)]
enum OrbitAction {
    /// Orbit type of a point of g*.
    Classify {
        #[arg(long)]
        algebra: AlgebraName,
        /// Comma-separated exact coordinates in basis order.
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Check that the Kirillov form is standard in the Darboux chart.
    Darboux(OrbitSel),
}

#[derive(Args, Debug, Clone)]
struct OrbitSel {
    #[arg(long)]
    algebra: AlgebraName,
    /// Family name, with or without the algebra prefix (e.g. `upper`, `affR_upper`).
    #[arg(long)]
    orbit: String,
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<String>,
    /// affC chart branch.
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    branch: i64,
}

#[derive(Args, Debug)]
struct StarArgs {
    #[command(flatten)]
    sel: OrbitSel,
    #[arg(long)]
    f: String,
    #[arg(long)]
    g: String,
    #[arg(long, default_value_t = DEFAULT_ORDER)]
    order: u32,
    /// Use 1/r instead of 1/r! as the series coefficient.
    #[arg(long)]
    reciprocal: bool,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// all | affR | affC | sl2R | commutator | darboux | homomorphism | printed | expm | orbits | homology | evolution | properties
    #[arg(long, default_value = "all")]
    scope: String,
    #[arg(long, default_value_t = DEFAULT_ORDER)]
    order: u32,
    #[arg(long, default_value_t = AFFR_GRID)]
    grid: usize,
    #[arg(long)]
    property_cases: Option<usize>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ReportFormat {
    Json,
    Text,
}

#[derive(Args, Debug)]
struct EvolveArgs {
    #[arg(long)]
    algebra: AlgebraName,
    /// Comma-separated exact coordinates of A.
    #[arg(long = "A", allow_hyphen_values = true)]
    a: String,
    #[arg(long, default_value_t = 1.0)]
    t: f64,
    #[arg(long, default_value_t = AFFR_GRID)]
    grid: usize,
    #[arg(long, value_enum)]
    report: Option<ReportFormat>,
}

#[derive(Args, Debug)]
struct HomologyArgs {
    #[arg(long, required_unless_present = "catalogue")]
    algebra: Option<AlgebraName>,
    #[arg(long, required_unless_present = "catalogue")]
    orbit: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<String>,
    /// Dump the full catalogue.
    #[arg(long, conflicts_with_all = ["algebra", "orbit", "lambda"])]
    catalogue: bool,
}

enum Failure {
    Usage(String),
    Verification,
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Instability { .. } => Failure::Runtime(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

type Outcome = std::result::Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let exec = if cli.jobs == Some(1) { Execution::Sequential } else { Execution::Parallel };
    match exec.with_jobs(cli.jobs, || dispatch(&cli, exec)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(EXIT_VERIFY_FAILED),
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_VERIFY_FAILED)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn dispatch(cli: &Cli, exec: Execution) -> Outcome {
    let h = PlanckParam::new(cli.h.parse::<ExactScalar>()?)?;
    match &cli.command {
        Command::Orbit { action } => cmd_orbit(cli, action),
        Command::Star(a) => cmd_star(cli, a, &h),
        Command::Verify(a) => cmd_verify(cli, a, exec),
        Command::Evolve(a) => cmd_evolve(cli, a, &h),
        Command::Homology(a) => cmd_homology(cli, a),
    }
}

fn envelope(command: &str, result: impl Serialize) -> Value {
    json!({
        "schema_version": verify::SCHEMA_VERSION,
        "command": command,
        "conventions": verify::conventions(),
        "result": result,
    })
}

fn print_json(v: &Value) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn parse_coords(s: &str) -> Result<Vec<ExactScalar>, Error> {
    s.split(',').map(|t| t.trim().parse::<ExactScalar>()).collect()
}

fn resolve_family(algebra: AlgebraName, name: &str) -> Result<OrbitFamily, Error> {
    let prefix = match algebra {
        AlgebraName::AffR => "affR_",
        AlgebraName::AffC => "affC_",
        AlgebraName::Sl2R => "sl2_",
    };
    let family = name
        .parse::<OrbitFamily>()
        .or_else(|_| format!("{prefix}{name}").parse::<OrbitFamily>())
        .or_else(|_| match (algebra, name) {
            (AlgebraName::AffC, "omega" | "generic") => Ok(OrbitFamily::AffCPunctured),
            _ => Err(Error::Usage(format!("unknown orbit `{name}` for {algebra}"))),
        })?;
    if family.algebra() != algebra {
        return Err(Error::Usage(format!("orbit {family} does not belong to {algebra}")));
    }
    Ok(family)
}

fn resolve_orbit(sel: &OrbitSel) -> Result<OrbitDescriptor, Error> {
    let family = resolve_family(sel.algebra, &sel.orbit)?;
    let lambda = sel.lambda.as_deref().map(str::parse::<ExactScalar>).transpose()?;
    OrbitDescriptor::new(family, if family.has_lambda() { lambda } else { None })
}

fn cmd_orbit(cli: &Cli, action: &OrbitAction) -> Outcome {
    match action {
        OrbitAction::Classify { algebra, point } => {
            let g = LieAlgebra::new(*algebra);
            let f = g.dual(parse_coords(point)?)?;
            let d = classify_orbit(&f)?;
            if cli.json {
                print_json(&envelope("orbit classify", &d));
            } else {
                let params: Vec<String> = d.params().into_iter().map(|(k, v)| format!("{k}={v}")).collect();
                println!("{}", format!("{} (dim {}) {}", d.family, d.dim, params.join(" ")).trim_end());
            }
            Ok(())
        }
        OrbitAction::Darboux(sel) => {
            let orbit = resolve_orbit(sel)?;
            let r = verify_darboux_branch(&orbit, sel.branch)?;
            if cli.json {
                print_json(&envelope("orbit darboux", &r));
            } else {
                for p in &r.pairs {
                    println!("ω({}, {}) = {}   {{H_{}, H_{}}} = {}   {}", p.z, p.t, p.kirillov, p.z, p.t, p.standard, if p.pass { "ok" } else { "MISMATCH" });
                }
                println!("{}", if r.pass { "PASS" } else { "FAIL" });
            }
            if r.pass {
                Ok(())
            } else {
                Err(Failure::Verification)
            }
        }
    }
}

fn cmd_star(cli: &Cli, a: &StarArgs, h: &PlanckParam) -> Outcome {
    let orbit = resolve_orbit(&a.sel)?;
    let chart = darboux_chart_branch(&orbit, a.sel.branch)?;
    let f = ExpPoly::parse(&chart.vars, &a.f)?;
    let g = ExpPoly::parse(&chart.vars, &a.g)?;
    let mode = if a.reciprocal { SeriesCoefficients::Reciprocal } else { SeriesCoefficients::Factorial };
    let r = star(&f, &g, &chart.poisson, h, a.order, mode)?;
    let value = r.value.to_expr_string();
    if cli.json {
        print_json(&envelope(
            "star",
            json!({
                "orbit": orbit,
                "branch": a.sel.branch,
                "vars": chart.vars.names(),
                "h": h.value(),
                "order": r.order,
                "coefficients": if a.reciprocal { "reciprocal" } else { "factorial" },
                "f": f.to_expr_string(),
                "g": g.to_expr_string(),
                "value": value,
                "exact": r.exact,
            }),
        ));
    } else {
        println!("{value}");
        if !r.exact {
            eprintln!("note: series truncated at order {}", r.order);
        }
    }
    Ok(())
}

fn cmd_verify(cli: &Cli, a: &VerifyArgs, exec: Execution) -> Outcome {
    let scope: Scope = a.scope.parse()?;
    let mut cfg = VerifyConfig { order: a.order, grid: a.grid, seed: cli.seed, exec, h: cli.h.parse()?, ..VerifyConfig::default() };
    if let Some(n) = a.property_cases {
        cfg.property_cases = n;
    }
    let run = verify::run(scope, &cfg)?;
    if cli.json {
        print_json(&serde_json::to_value(&run).expect("serializable"));
    } else {
        print_run(&run);
    }
    if run.pass {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn print_run(run: &VerificationRun) {
    for s in &run.suites {
        println!(
            "== {} ({} pass, {} fail, {} derived_override)",
            s.suite,
            s.count(CaseStatus::Pass),
            s.count(CaseStatus::Fail),
            s.count(CaseStatus::DerivedOverride)
        );
        for c in &s.cases {
            let status = match c.status {
                CaseStatus::Pass => "pass",
                CaseStatus::Fail => "FAIL",
                CaseStatus::DerivedOverride => "derived_override",
            };
            println!("  {:<16} {:<48} {:.3e}", status, c.id, c.residual);
            if c.status != CaseStatus::Pass {
                for n in &c.notes {
                    println!("      {n}");
                }
            }
        }
    }
    println!("{}", if run.pass { "PASS" } else { "FAIL" });
}

fn cmd_evolve(cli: &Cli, a: &EvolveArgs, h: &PlanckParam) -> Outcome {
    if a.algebra != AlgebraName::AffR {
        return Err(Failure::Usage(format!("grid evolution is available for affR only, not {}", a.algebra)));
    }
    let coords = parse_coords(&a.a)?;
    LieAlgebra::new(a.algebra).element(coords.clone())?;
    let r: EvolutionReport = affr_evolution_check(&coords[0], &coords[1], a.t, a.grid, h)?;
    let pass = r.rel_l2_error <= EVOLUTION_L2_TOL && r.norm_drift_per_unit_time <= NORM_DRIFT_TOL;
    let as_json = cli.json || matches!(a.report, Some(ReportFormat::Json));
    if as_json {
        let mut v = serde_json::to_value(&r).expect("serializable");
        v["tolerances"] = json!({ "rel_l2_error": EVOLUTION_L2_TOL, "norm_drift_per_unit_time": NORM_DRIFT_TOL });
        v["pass"] = json!(pass);
        print_json(&envelope("evolve", v));
    } else {
        println!("generator: {}", r.generator);
        println!("t = {}, grid = {}, steps = {}, dt = {:.3e}", r.t, r.grid, r.steps, r.dt);
        println!("relative L2 error vs representation: {:.3e}", r.rel_l2_error);
        println!("norm drift per unit time: {:.3e}", r.norm_drift_per_unit_time);
        println!("{}", if pass { "PASS" } else { "FAIL" });
    }
    if pass {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn print_homology(r: &HomologyReport) {
    let lam = r.orbit.lambda.as_ref().map(|l| format!("[λ={l}]")).unwrap_or_default();
    println!(
        "{:<28} K = {:<8} PHC = {:<8} chain = {:<8} verdict = {:?}{}",
        format!("{}{lam}", r.orbit.family),
        r.published_k.to_string(),
        r.published_phc.to_string(),
        r.chain_k.to_string(),
        r.chern_verdict,
        if r.chain_matches_published { "" } else { "  (chain mismatch flagged)" }
    );
}

fn cmd_homology(cli: &Cli, a: &HomologyArgs) -> Outcome {
    let reports = if a.catalogue {
        catalogue()
    } else {
        let (algebra, orbit) = (a.algebra.expect("required by clap"), a.orbit.as_deref().expect("required by clap"));
        let sel = OrbitSel { algebra, orbit: orbit.to_string(), lambda: a.lambda.clone(), branch: 0 };
        vec![chern_character(&resolve_orbit(&sel)?)]
    };
    if cli.json {
        if a.catalogue {
            print_json(&envelope("homology", &reports));
        } else {
            print_json(&envelope("homology", &reports[0]));
        }
    } else {
        for r in &reports {
            print_homology(r);
            if !a.catalogue {
                for t in &r.trace {
                    println!("  {t}");
                }
                for n in &r.notes {
                    println!("  note: {n}");
                }
            }
        }
    }
    Ok(())
}
