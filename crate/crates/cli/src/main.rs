//! `actlat`: JSON-in, JSON-out driver for the actlat library.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use actlat::active::{
    counterexample_m2_with_phase, dye_condition_check, reconstruct, MorphismSpec,
};
use actlat::boolean::{
    boolean_algebra, colimit_report, mo_lattice, oml_commeas, pcba_to_oml, proj_of_f, stone_report,
    FiniteOml, FinitePcba,
};
use actlat::lattice::{commeasurable, commutator, join, meet, ortho};
use actlat::symmetry::{factor_det_pm1, sym_member};
use actlat::{AlgebraShape, Element, SeededSampler, ToleranceConfig, C64};
use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(
    name = "actlat",
    version,
    about = "Projection lattices, symmetry groups and active-lattice morphism checks"
)]
struct Cli {
    /// Seed for every sampled check.
    #[arg(long, env = "AL_SEED", default_value_t = 0, global = true)]
    seed: u64,
    /// Samples per randomized check.
    #[arg(long, default_value_t = 500, value_parser = clap::value_parser!(u64).range(1..), global = true)]
    samples: u64,
    #[arg(long, global = true)]
    tol_eq: Option<f64>,
    #[arg(long, global = true)]
    tol_rank: Option<f64>,
    #[arg(long, global = true)]
    tol_verify: Option<f64>,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Lattice operation on projections; prints the resulting element.
    Lattice {
        op: LatticeOp,
        a: PathBuf,
        b: Option<PathBuf>,
    },
    /// Commeasurability report for two projections.
    Commeasurable { a: PathBuf, b: PathBuf },
    /// Factor a unitary with blockwise det² = 1 into symmetries.
    FactorSymmetries { u: PathBuf },
    /// Whether a unitary lies in the symmetry group.
    SymMember { u: PathBuf },
    /// Sampled Dye condition for a morphism spec.
    DyeCheck {
        #[arg(long)]
        morphism: PathBuf,
        #[arg(long)]
        algebra: String,
    },
    /// Rebuild a linear *-homomorphism from a morphism spec and verify it.
    Reconstruct {
        #[arg(long)]
        morphism: PathBuf,
        #[arg(long)]
        algebra: String,
    },
    /// Built-in demonstrations.
    Demo {
        which: Demo,
        /// Unimodular phase `re,im` at which linear extension is probed.
        #[arg(long, default_value = "0,1", allow_hyphen_values = true)]
        zeta: String,
    },
    /// Finite Boolean and piecewise Boolean constructions. `B` is a JSON file or `mo:K` / `bool:N`.
    Boolean { op: BooleanOp, b: String },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum LatticeOp {
    Meet,
    Join,
    Ortho,
    Commutator,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Demo {
    Counterexample,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum BooleanOp {
    Stone,
    Colimit,
    Roundtrip,
}

#[derive(Serialize)]
struct RunConfig {
    seed: u64,
    samples: u64,
    tol: ToleranceConfig,
}

/// A command's printable body and whether its check came out true.
struct Outcome {
    text: String,
    verdict: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(outcome) => {
            if let Err(e) = emit(cli.output.as_deref(), &outcome.text) {
                eprintln!("error: {e:#}");
                return ExitCode::from(2);
            }
            ExitCode::from(if outcome.verdict { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn emit(path: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match path {
        Some(p) => {
            fs::write(p, format!("{text}\n")).with_context(|| format!("writing {}", p.display()))
        }
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn resolve_config(cli: &Cli) -> anyhow::Result<RunConfig> {
    let base = ToleranceConfig::default();
    let tol = ToleranceConfig::new(
        cli.tol_eq.unwrap_or(base.eq_tol),
        cli.tol_rank.unwrap_or(base.rank_tol),
        cli.tol_verify.unwrap_or(base.verify_tol),
    )?;
    Ok(RunConfig {
        seed: cli.seed,
        samples: cli.samples,
        tol,
    })
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn read_element(path: &Path) -> anyhow::Result<Element> {
    Element::from_json(&read(path)?).with_context(|| format!("decoding {}", path.display()))
}

fn parse_shape(text: &str) -> anyhow::Result<AlgebraShape> {
    let inner = text.trim().trim_start_matches('[').trim_end_matches(']');
    let dims = inner
        .split(',')
        .map(|d| {
            d.trim()
                .parse::<usize>()
                .map_err(|_| anyhow!("bad block size `{d}` in `{text}`"))
        })
        .collect::<anyhow::Result<Vec<_>>>()?;
    Ok(AlgebraShape::new(dims)?)
}

fn parse_complex(text: &str) -> anyhow::Result<C64> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    match parts.as_slice() {
        [re, im] => {
            let re: f64 = re
                .parse()
                .map_err(|_| anyhow!("bad real part in `{text}`"))?;
            let im: f64 = im
                .parse()
                .map_err(|_| anyhow!("bad imaginary part in `{text}`"))?;
            Ok(C64::new(re, im))
        }
        _ => bail!("expected `re,im`, got `{text}`"),
    }
}

fn envelope(config: &RunConfig, command: &str, result: Value) -> anyhow::Result<String> {
    let doc = json!({
        "tool": "actlat",
        "version": env!("CARGO_PKG_VERSION"),
        "config": config,
        "command": command,
        "result": result,
    });
    Ok(serde_json::to_string_pretty(&doc)?)
}

fn run(cli: &Cli) -> anyhow::Result<Outcome> {
    let config = resolve_config(cli)?;
    let tol = &config.tol;
    let samples = usize::try_from(config.samples)?;
    let mut sampler = SeededSampler::new(config.seed);
    let (command, result, verdict) = match &cli.command {
        Command::Lattice { op, a, b } => {
            let a = read_element(a)?;
            let second = || -> anyhow::Result<Element> {
                let path = b
                    .as_deref()
                    .ok_or_else(|| anyhow!("this operation needs two projections"))?;
                read_element(path)
            };
            let out = match op {
                LatticeOp::Ortho => ortho(&a, tol)?,
                LatticeOp::Meet => meet(&a, &second()?, tol)?,
                LatticeOp::Join => join(&a, &second()?, tol)?,
                LatticeOp::Commutator => commutator(&a, &second()?, tol)?,
            };
            return Ok(Outcome {
                text: out.to_json(),
                verdict: true,
            });
        }
        Command::Commeasurable { a, b } => {
            let report = commeasurable(&read_element(a)?, &read_element(b)?, tol)?;
            (
                "commeasurable",
                serde_json::to_value(&report)?,
                report.verdict,
            )
        }
        Command::SymMember { u } => {
            let u = read_element(u)?;
            let member = sym_member(&u, tol)?;
            let dets: Vec<[f64; 2]> = u.block_det().iter().map(|d| [d.re, d.im]).collect();
            (
                "sym-member",
                json!({ "member": member, "block_determinants": dets }),
                member,
            )
        }
        Command::FactorSymmetries { u } => {
            let u = read_element(u)?;
            if !sym_member(&u, tol)? {
                eprintln!("not in the symmetry group: some block determinant has det² ≠ 1");
                let dets: Vec<[f64; 2]> = u.block_det().iter().map(|d| [d.re, d.im]).collect();
                (
                    "factor-symmetries",
                    json!({ "member": false, "block_determinants": dets }),
                    false,
                )
            } else {
                let fact = factor_det_pm1(&u, tol)?;
                ("factor-symmetries", serde_json::to_value(&fact)?, true)
            }
        }
        Command::DyeCheck { morphism, algebra } => {
            let f = load_morphism(morphism, algebra, tol)?;
            let report = dye_condition_check(&f, samples, &mut sampler, tol)?;
            let ok = report.max_residual <= tol.verify_tol;
            let mut value = serde_json::to_value(&report)?;
            value["verdict"] = json!(ok);
            ("dye-check", value, ok)
        }
        Command::Reconstruct { morphism, algebra } => {
            let f = load_morphism(morphism, algebra, tol)?;
            let report = reconstruct(&f, samples, &mut sampler, tol);
            (
                "reconstruct",
                serde_json::to_value(&report)?,
                report.verdict,
            )
        }
        Command::Demo {
            which: Demo::Counterexample,
            zeta,
        } => {
            let (_, _, report) =
                counterexample_m2_with_phase(parse_complex(zeta)?, samples, &mut sampler, tol)?;
            let mut value = serde_json::to_value(&report)?;
            value["equivariance_residual"] = json!(report.equivariance.max_residual);
            value["linear_extension_margin"] = json!(report.probe.margin);
            ("demo counterexample", value, report.verdict)
        }
        Command::Boolean { op, b } => {
            let input = load_boolean(b)?;
            let (name, value, ok) = boolean_command(*op, &input)?;
            (name, value, ok)
        }
    };
    Ok(Outcome {
        text: envelope(&config, command, result)?,
        verdict,
    })
}

fn load_morphism(
    path: &Path,
    algebra: &str,
    tol: &ToleranceConfig,
) -> anyhow::Result<actlat::active::MorphismCandidate> {
    let shape = parse_shape(algebra)?;
    let spec = MorphismSpec::from_json(&read(path)?)
        .with_context(|| format!("decoding {}", path.display()))?;
    Ok(spec.build(&shape, tol)?)
}

enum BooleanInput {
    Oml(FiniteOml),
    Pcba(FinitePcba),
}

impl BooleanInput {
    fn pcba(&self) -> anyhow::Result<FinitePcba> {
        match self {
            BooleanInput::Oml(p) => Ok(oml_commeas(p)?),
            BooleanInput::Pcba(b) => Ok(b.clone()),
        }
    }
}

fn load_boolean(arg: &str) -> anyhow::Result<BooleanInput> {
    let count = |s: &str| {
        s.parse::<usize>()
            .map_err(|_| anyhow!("bad count in `{arg}`"))
    };
    if let Some(k) = arg.strip_prefix("mo:") {
        let k = count(k)?;
        if !(1..=30).contains(&k) {
            bail!("mo:K needs 1 ≤ K ≤ 30");
        }
        return Ok(BooleanInput::Oml(mo_lattice(k)));
    }
    if let Some(n) = arg.strip_prefix("bool:") {
        let n = count(n)?;
        if n > 6 {
            bail!("bool:N needs N ≤ 6");
        }
        return Ok(BooleanInput::Oml(boolean_algebra(n).to_oml()?));
    }
    let text = read(Path::new(arg))?;
    let value: Value = serde_json::from_str(&text).with_context(|| format!("decoding {arg}"))?;
    if value.get("commeas").is_some() {
        Ok(BooleanInput::Pcba(FinitePcba::from_json(&text)?))
    } else {
        Ok(BooleanInput::Oml(FiniteOml::from_json(&text)?))
    }
}

fn boolean_command(
    op: BooleanOp,
    input: &BooleanInput,
) -> anyhow::Result<(&'static str, Value, bool)> {
    match op {
        BooleanOp::Stone => {
            let oml = match input {
                BooleanInput::Oml(p) => Ok(p.clone()),
                BooleanInput::Pcba(b) => pcba_to_oml(b),
            };
            let boolean = oml.ok().and_then(|p| p.as_boolean());
            match boolean {
                Some((algebra, _)) => {
                    let report = stone_report(&algebra);
                    let ok = report.isomorphic;
                    Ok((
                        "boolean stone",
                        json!({ "boolean": true, "report": report, "verdict": ok }),
                        ok,
                    ))
                }
                None => Ok((
                    "boolean stone",
                    json!({ "boolean": false, "report": null, "verdict": false }),
                    false,
                )),
            }
        }
        BooleanOp::Colimit => {
            let report = colimit_report(&input.pcba()?)?;
            let ok = report.commutative;
            Ok((
                "boolean colimit",
                json!({ "report": report, "verdict": ok }),
                ok,
            ))
        }
        BooleanOp::Roundtrip => {
            let pcba = input.pcba()?;
            let proj = proj_of_f(&pcba)?;
            let (kalmbach, detail) = match (input, pcba_to_oml(&pcba)) {
                (_, Err(e)) => (false, Some(e.to_string())),
                (BooleanInput::Oml(p), Ok(back)) => (&back == p, None),
                (BooleanInput::Pcba(b), Ok(back)) => (
                    oml_commeas(&back).map(|again| &again == b).unwrap_or(false),
                    None,
                ),
            };
            let ok = proj.isomorphic && kalmbach;
            let value = json!({
                "elements": pcba.size(),
                "blocks": pcba.blocks().len(),
                "projections_of_colimit": proj.projections.len(),
                "proj_of_colimit_isomorphic": proj.isomorphic,
                "forward": proj.forward,
                "kalmbach_round_trip": kalmbach,
                "kalmbach_failure": detail,
                "verdict": ok,
            });
            Ok(("boolean roundtrip", value, ok))
        }
    }
}
