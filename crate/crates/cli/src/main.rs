use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use nilharm::catalog::sweep_with;
use nilharm::cohomology::cohomology;
use nilharm::exec::Exec;
use nilharm::flexibility::{find_certificate, value_sets_in, varying_degrees, Budget, Cone};
use nilharm::harmonic::harmonic_subspaces;
use nilharm::liespec::{lower_central_series, LieAlgebraSpec};
use nilharm::properties::operator_suite;
use nilharm::scalar::{parse_scalar_list, render_scalar, render_scalar_list};
use nilharm::symplectic::{symplectic_existence_in, Existence};
use nilharm::{Error, Scalar};

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(name = "nilharm", version, about = "Symplectically harmonic cohomology of nilmanifolds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Emit the JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// `default`, `zero`, `B,S,N` or `B,S,N,B',S'`.
    #[arg(long, global = true, default_value = "default")]
    budget: String,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Betti numbers, step length, symplectic existence and the Z² basis.
    Info { spec: String },
    /// Harmonic profile of one symplectic form.
    H {
        spec: String,
        /// Comma separated rationals over the Z² basis printed by `info`.
        #[arg(long, allow_hyphen_values = true)]
        omega: String,
    },
    /// Attained sets of h_3, h_4, h_5 over the sampling budget.
    Valuesets { spec: String },
    /// Searches for a flexibility certificate.
    Flexible {
        spec: String,
        #[arg(long)]
        k: Option<usize>,
    },
    /// Verifies every row of the built-in catalog.
    Catalog,
    /// Operator identities at one symplectic form.
    Starcheck {
        spec: String,
        #[arg(long, allow_hyphen_values = true)]
        omega: String,
    },
}

/// What a command produced: the `results` object, its text rendering, and
/// whether a verification failed.
struct Outcome {
    results: Value,
    text: String,
    failed: bool,
}

#[derive(Serialize)]
struct Inputs {
    spec: Option<String>,
    omega: Option<Vec<String>>,
    budget: Option<String>,
    seed: u64,
}

struct InputError(String);

impl From<Error> for InputError {
    fn from(e: Error) -> Self {
        InputError(e.to_string())
    }
}

impl From<nilharm::ParseError> for InputError {
    fn from(e: nilharm::ParseError) -> Self {
        InputError(e.to_string())
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn parse_spec(text: &str) -> Result<LieAlgebraSpec, InputError> {
    LieAlgebraSpec::parse(text).map_err(|e| InputError(format!("structure `{text}`: {e}")))
}

fn parse_budget(text: &str) -> Result<Budget, InputError> {
    text.parse().map_err(|e: nilharm::ParseError| InputError(e.to_string()))
}

fn render_list<T: ToString>(v: &[T]) -> String {
    v.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

fn symplectic_at(spec: &LieAlgebraSpec, omega: &str) -> Result<(Cone, Vec<Scalar>), InputError> {
    let coords = parse_scalar_list(omega).map_err(|e| InputError(format!("--omega: {e}")))?;
    let cone = Cone::new(spec)?;
    if coords.len() != cone.description.dim() {
        return Err(nilharm::ParseError::CoordinateCount { expected: cone.description.dim(), got: coords.len() }.into());
    }
    if cone.description.pf_at(&coords) == nilharm::scalar::zero() {
        return Err(InputError(format!("--omega {}: form is degenerate (Pfaffian vanishes)", render_scalar_list(&coords))));
    }
    Ok((cone, coords))
}

fn cmd_info(spec: &LieAlgebraSpec) -> Result<Outcome, InputError> {
    let h = cohomology(spec);
    let betti = h.betti_numbers();
    let step = lower_central_series(spec).step_length;
    let (cone, existence) = symplectic_existence_in(&h)?;
    let basis: Vec<String> = cone.z2_basis.iter().map(|f| f.render()).collect();
    let (symplectic, witness) = match &existence {
        Existence::Yes(w) => (true, Some(w.coords.iter().map(render_scalar).collect::<Vec<_>>())),
        Existence::No { .. } => (false, None),
    };
    let moduli = symplectic.then(|| cone.dim());
    let mut text = format!("structure   {}\nbetti       {}\nstep length {step}\n", spec.render(), render_list(&betti));
    if spec.n() == 6 {
        text += &format!("6-s         {}\n", 6 - step);
    }
    text += &format!("symplectic  {}\n", if symplectic { "yes" } else { "no" });
    if let Some(m) = moduli {
        text += &format!("moduli      {m}\n");
    }
    text += &format!("Z2 basis    ({} classes, then exact forms)\n", cone.class_count);
    for (i, b) in basis.iter().enumerate() {
        text += &format!("  {:>2}  {b}\n", i + 1);
    }
    if let Some(w) = &witness {
        text += &format!("witness     {}\n", w.join(","));
    }
    let results = json!({
        "betti": betti,
        "step_length": step,
        "symplectic": symplectic,
        "moduli_dim": moduli,
        "class_count": cone.class_count,
        "z2_basis": basis,
        "witness": witness,
    });
    Ok(Outcome { results, text, failed: false })
}

fn cmd_h(spec: &LieAlgebraSpec, omega: &str) -> Result<Outcome, InputError> {
    let (cone, coords) = symplectic_at(spec, omega)?;
    let sf = cone.symplectic_form(&coords)?;
    let profile = harmonic_subspaces(&cone.cohomology, &sf)?;
    let subspaces: Vec<Vec<Vec<String>>> =
        profile.subspaces.iter().map(|s| s.iter().map(|v| v.iter().map(render_scalar).collect()).collect()).collect();
    let text = format!(
        "omega       {}\nclass       {}\nh           ({})\n",
        sf.omega().render(),
        render_scalar_list(&profile.omega_class),
        render_list(&profile.h)
    );
    let results = json!({
        "omega_form": sf.omega().render(),
        "omega_class": profile.omega_class.iter().map(render_scalar).collect::<Vec<_>>(),
        "h": profile.h,
        "subspaces": subspaces,
    });
    Ok(Outcome { results, text, failed: false })
}

fn cmd_valuesets(spec: &LieAlgebraSpec, budget: Budget, seed: u64) -> Result<Outcome, InputError> {
    let cone = Cone::new(spec)?;
    let r = value_sets_in(&cone, budget, seed, Exec::default());
    let mut text = format!(
        "structure   {}\nbudget      {budget}\nsamples     grid {}/{} symplectic, random {}/{} symplectic\n",
        r.structure, r.grid_symplectic, r.grid_points, r.random_symplectic, r.random_samples
    );
    for set in &r.sets {
        text += &format!("h{}          {{{}}}\n", set.k, render_list(&set.values()));
    }
    for p in &r.profiles {
        text += &format!("  h = ({})  at {}\n", render_list(&p.h), render_list(&p.witness));
    }
    text += &format!("checks      {}\n", if r.checks.passed() { "ok" } else { "FAILED" });
    let failed = !r.checks.passed();
    Ok(Outcome { results: to_value(&r), text, failed })
}

fn cmd_flexible(spec: &LieAlgebraSpec, k: Option<usize>, budget: Budget, seed: u64) -> Result<Outcome, InputError> {
    let cone = Cone::new(spec)?;
    let mut r = value_sets_in(&cone, budget, seed, Exec::default());
    if let Some(k) = k {
        if !(3..=5).contains(&k) {
            return Err(InputError(format!("--k {k}: value sets are tracked for k = 3, 4, 5")));
        }
        r.sets.retain(|s| s.k == k);
    }
    let cert = find_certificate(&cone, &r);
    let text = match &cert {
        Some(c) => format!(
            "flexible    yes (h_{} {} -> {})\nomega_0     {}\nomega_1     {}\npf(t)       {}\nroots on [0,1]: 0 (Sturm)\n",
            c.k,
            c.h_at_0[c.k],
            c.h_at_1[c.k],
            c.omega0.join(","),
            c.omega1.join(","),
            c.pfaffian_on_path.join(",")
        ),
        None => format!("not found (varying degrees: {})\n", render_list(&varying_degrees(&r))),
    };
    let results = json!({ "found": cert.is_some(), "certificate": cert });
    Ok(Outcome { results, text, failed: false })
}

fn cmd_catalog(budget: Budget, seed: u64) -> Outcome {
    let r = sweep_with(budget, seed, Exec::default());
    Outcome { text: r.render_table(), failed: !r.all_passed(), results: to_value(&r) }
}

fn cmd_starcheck(spec: &LieAlgebraSpec, omega: &str, seed: u64) -> Result<Outcome, InputError> {
    let (cone, coords) = symplectic_at(spec, omega)?;
    let sf = cone.symplectic_form(&coords)?;
    let suite = operator_suite(&sf, seed);
    let mut text = format!("omega       {}\n", suite.omega);
    for c in &suite.checks {
        let status = if c.passed { "PASS".to_string() } else { format!("FAIL ({})", c.detail) };
        text += &format!("  {:<22} {status}\n", c.name);
    }
    Ok(Outcome { failed: !suite.passed(), results: to_value(&suite), text })
}

fn run(cli: &Cli) -> Result<(Inputs, Outcome), InputError> {
    let mut inputs = Inputs { spec: None, omega: None, budget: None, seed: cli.seed };
    let outcome = match &cli.command {
        Command::Info { spec } => {
            inputs.spec = Some(spec.clone());
            cmd_info(&parse_spec(spec)?)?
        }
        Command::H { spec, omega } => {
            inputs.spec = Some(spec.clone());
            let out = cmd_h(&parse_spec(spec)?, omega)?;
            inputs.omega = Some(parse_scalar_list(omega)?.iter().map(render_scalar).collect());
            out
        }
        Command::Valuesets { spec } => {
            let budget = parse_budget(&cli.budget)?;
            inputs.spec = Some(spec.clone());
            inputs.budget = Some(budget.to_string());
            cmd_valuesets(&parse_spec(spec)?, budget, cli.seed)?
        }
        Command::Flexible { spec, k } => {
            let budget = parse_budget(&cli.budget)?;
            inputs.spec = Some(spec.clone());
            inputs.budget = Some(budget.to_string());
            cmd_flexible(&parse_spec(spec)?, *k, budget, cli.seed)?
        }
        Command::Catalog => {
            let budget = parse_budget(&cli.budget)?;
            inputs.budget = Some(budget.to_string());
            cmd_catalog(budget, cli.seed)
        }
        Command::Starcheck { spec, omega } => {
            inputs.spec = Some(spec.clone());
            let out = cmd_starcheck(&parse_spec(spec)?, omega, cli.seed)?;
            inputs.omega = Some(parse_scalar_list(omega)?.iter().map(render_scalar).collect());
            out
        }
    };
    Ok((inputs, outcome))
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Info { .. } => "info",
        Command::H { .. } => "h",
        Command::Valuesets { .. } => "valuesets",
        Command::Flexible { .. } => "flexible",
        Command::Catalog => "catalog",
        Command::Starcheck { .. } => "starcheck",
    }
}

#[cfg(feature = "parallel")]
fn with_jobs<R: Send>(jobs: Option<usize>, f: impl FnOnce() -> R + Send) -> R {
    match jobs {
        Some(n) => rayon::ThreadPoolBuilder::new().num_threads(n).build().expect("thread pool").install(f),
        None => f(),
    }
}

#[cfg(not(feature = "parallel"))]
fn with_jobs<R: Send>(_jobs: Option<usize>, f: impl FnOnce() -> R + Send) -> R {
    f()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.jobs == Some(0) {
        eprintln!("error: --jobs must be at least 1");
        return ExitCode::from(2);
    }
    match with_jobs(cli.jobs, || run(&cli)) {
        Err(InputError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Ok((inputs, outcome)) => {
            if cli.json {
                // Through `Value` so keys are sorted and re-rendering a parsed
                // document is byte-identical.
                let doc = json!({
                    "schema_version": SCHEMA_VERSION,
                    "command": command_name(&cli.command),
                    "inputs": to_value(&inputs),
                    "results": outcome.results,
                });
                // A closed pipe (`| head`) is not an error worth reporting.
                let _ = writeln!(io::stdout().lock(), "{}", serde_json::to_string_pretty(&doc).expect("value serializes"));
            } else {
                let _ = write!(io::stdout().lock(), "{}", outcome.text);
            }
            if outcome.failed {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
    }
}
