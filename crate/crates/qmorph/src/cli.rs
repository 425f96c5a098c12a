//! Command line interface. Exit codes: 0 pass, 1 verification failure,
//! 2 usage or parse error.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use qmorph_core::braid::{p3_coordinates, BraidWord};
use qmorph_core::quasimorphism::{defect_search, homogenize};
use qmorph_core::word::FreeGroup;
use qmorph_core::group::ball;
use serde_json::{json, Value};

use crate::certificate::{compile_with_override, scl_bounds, verify_text, Config};
use crate::context::{Element, GroupSpec, SpecError};
use crate::extend::{extension_report, ExtendOptions};
use crate::finite::{fragmentation_report, parse_finite};
use crate::output::{emit, render, Format};
use crate::suite;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "qmorph", version, about = "Quasimorphisms, commutator length certificates and braid computations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Group or group pair: free:N, braid:N, pure:N, braid:N/pure,
    /// braid:3/commutator, product:free:N,z[/free].
    #[arg(long, global = true)]
    pub group: Option<String>,
    /// Quasimorphism spec, e.g. "homog(brooks(w=xyXY))".
    #[arg(long, global = true)]
    pub qm: Option<String>,
    /// Free group element (for products: WORD,K).
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub word: Option<String>,
    /// Braid word: "s1 s2^-1" or "1,-2".
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub braid: Option<String>,
    /// Ball radius for searches and sampled evidence.
    #[arg(long, global = true, default_value_t = 2)]
    pub radius: usize,
    /// Maximal number of factors in searches.
    #[arg(long, global = true, default_value_t = 2, value_parser = clap::value_parser!(u32).range(1..))]
    pub cap: u32,
    /// Replaces the certified defect bound; recorded in certificates.
    #[arg(long = "defect-const", global = true)]
    pub defect_const: Option<String>,
    /// Largest power used by decomposition families and homogenization.
    #[arg(long = "n-max", global = true, default_value_t = 32, value_parser = clap::value_parser!(u32).range(1..))]
    pub n_max: u32,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Output file, written atomically; stdout if absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluates a quasimorphism on an element.
    Eval,
    /// Certified lower and upper bounds on (mixed) stable commutator length.
    SclBounds,
    /// Re-verifies a certificate bundle.
    Verify { path: PathBuf },
    /// Runs the reproduction suite.
    VerifyPaper {
        /// Item names or tags; repeatable or comma separated.
        #[arg(long, value_delimiter = ',')]
        only: Vec<String>,
    },
    /// Defect bounds of a quasimorphism: certified upper, searched lower.
    Defect,
    /// Garside normal form of a braid.
    NormalForm,
    /// Coordinates of a pure 3-braid in F2 x Z.
    P3,
    /// Fragmentation norm on a finite group.
    Fragmentation {
        #[arg(long)]
        file: PathBuf,
        /// Generators of H, separated by ';'.
        #[arg(long, default_value = "")]
        subgroup: String,
        #[arg(long)]
        element: Option<String>,
    },
    /// Extends an invariant quasimorphism from the normal subgroup.
    Extend {
        #[arg(long)]
        section: String,
        /// Random subgroup elements for the restriction check.
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Verify(String),
}

impl From<SpecError> for Failure {
    fn from(e: SpecError) -> Self {
        Failure::Usage(e.to_string())
    }
}

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
        }
    };
    match dispatch(&cli) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Verify(msg)) => {
            eprintln!("verification failed: {msg}");
            EXIT_FAIL
        }
    }
}

fn write(c: &Common, value: &Value) -> Result<(), Failure> {
    emit(c.out.as_deref(), &render(value, c.format)).map_err(|e| Failure::Verify(format!("cannot write output: {e}")))
}

/// The group from `--group`, or a default inferred from the element flags.
fn group_spec(c: &Common) -> Result<GroupSpec, Failure> {
    if let Some(g) = &c.group {
        return Ok(GroupSpec::parse(g)?);
    }
    if let Some(b) = &c.braid {
        let w = BraidWord::parse(b, None).map_err(|e| Failure::Usage(format!("--braid: {e}")))?;
        return Ok(GroupSpec::parse(&format!("braid:{}", w.strands()))?);
    }
    Ok(GroupSpec::parse("free:2")?)
}

fn element(c: &Common, spec: &GroupSpec) -> Result<Element, Failure> {
    let text = match (&c.word, &c.braid) {
        (Some(w), None) => w,
        (None, Some(b)) => b,
        (Some(_), Some(_)) => return Err(Failure::Usage(String::from("give only one of --word and --braid"))),
        (None, None) => return Err(Failure::Usage(String::from("an element is required (--word or --braid)"))),
    };
    spec.parse_element(text).map_err(|e| Failure::Usage(format!("element: {e}")))
}

fn required<'a>(v: &'a Option<String>, flag: &str) -> Result<&'a str, Failure> {
    v.as_deref().ok_or_else(|| Failure::Usage(format!("{flag} is required")))
}

fn dispatch(cli: &Cli) -> Result<i32, Failure> {
    let c = &cli.common;
    match &cli.command {
        Command::Eval => {
            let spec = group_spec(c)?;
            let qm = required(&c.qm, "--qm")?;
            let phi = compile_with_override(&spec, qm, c.defect_const.as_deref())?;
            let g = element(c, &spec)?;
            let value = phi.eval(&g).map_err(|e| Failure::Usage(e.to_string()))?;
            let mut out = json!({
                "qm": phi.name,
                "group": spec.text,
                "element": spec.format(&g),
                "value": value.to_string(),
                "homogeneous": phi.homogeneous,
            });
            if !phi.homogeneous {
                let h = homogenize(&spec.ambient, &phi, &g, c.n_max).map_err(|e| Failure::Usage(e.to_string()))?;
                out["homogenized"] = json!({
                    "n": c.n_max,
                    "center": h.center.to_string(),
                    "radius": h.radius.map(|r| r.to_string()),
                });
            }
            if c.format == Format::Human {
                emit(c.out.as_deref(), &format!("{value}\n")).map_err(|e| Failure::Verify(e.to_string()))?;
            } else {
                write(c, &out)?;
            }
            Ok(EXIT_PASS)
        }
        Command::SclBounds => {
            let spec = GroupSpec::parse(required(&c.group, "--group")?)?;
            let target = element(c, &spec)?;
            let config = Config {
                seed: c.seed,
                radius: c.radius,
                cap: c.cap as usize,
                n_max: c.n_max,
                defect_const: c.defect_const.clone(),
            };
            let bundle = scl_bounds(&spec, &target, c.qm.as_deref(), config)?;
            for r in &bundle.refusals {
                eprintln!("refused: {r}");
            }
            let json_text = bundle.to_json();
            let report = verify_text(&json_text);
            if !report.passed() {
                return Err(Failure::Verify(format!(
                    "self-check failed at {}",
                    report.first_failure().map_or("?", |s| s.step.as_str())
                )));
            }
            match c.format {
                Format::Json => emit(c.out.as_deref(), &json_text).map_err(|e| Failure::Verify(e.to_string()))?,
                _ => write(c, &serde_json::to_value(&bundle).expect("serializable"))?,
            }
            Ok(EXIT_PASS)
        }
        Command::Verify { path } => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
            let report = verify_text(&text);
            let passed = report.passed();
            let mut out = serde_json::to_value(&report).expect("serializable");
            out["passed"] = json!(passed);
            if let Some(f) = report.first_failure() {
                out["failed_step"] = json!(f.step);
                eprintln!("failed step {}: {}", f.step, f.detail);
            }
            write(c, &out)?;
            Ok(if passed { EXIT_PASS } else { EXIT_FAIL })
        }
        Command::VerifyPaper { only } => {
            let items = suite::run(only, c.seed).map_err(Failure::Usage)?;
            let out = suite::report_json(&items, c.seed);
            write(c, &out)?;
            Ok(if items.iter().all(|i| i.passed) { EXIT_PASS } else { EXIT_FAIL })
        }
        Command::Defect => {
            let spec = group_spec(c)?;
            let qm = required(&c.qm, "--qm")?;
            let mut phi = compile_with_override(&spec, qm, c.defect_const.as_deref())?;
            let b = ball(&spec.ambient, &spec.subgroup_generators(), c.radius);
            let found = defect_search(&spec.ambient, &mut phi, &b, c.radius).map_err(|e| Failure::Usage(e.to_string()))?;
            let upper = phi.defect_upper.as_ref();
            let out = json!({
                "qm": phi.name,
                "group": spec.text,
                "radius": c.radius,
                "ball_size": b.len(),
                "lower": phi.defect_lower.to_string(),
                "lower_witness": found.map(|w| json!({"g": spec.format(&w.g), "h": spec.format(&w.h)})),
                "upper": upper.map(|d| d.value.to_string()),
                "upper_provenance": upper.map(|d| d.provenance.clone()),
            });
            write(c, &out)?;
            let consistent = upper.is_none_or(|d| phi.defect_lower <= d.value);
            Ok(if consistent { EXIT_PASS } else { EXIT_FAIL })
        }
        Command::NormalForm => {
            let spec = group_spec(c)?;
            let Element::Braid(b) = element(c, &spec)? else {
                return Err(Failure::Usage(String::from("normal-form needs a braid group")));
            };
            let out = json!({
                "group": spec.text,
                "normal_form": b.normal_form_string(),
                "word": b.to_word().compact(),
                "infimum": b.infimum(),
                "canonical_length": b.factors().len(),
                "index_sum": b.index_sum(),
                "pure": b.is_pure(),
                "permutation": b.underlying_permutation().one_line(),
            });
            write(c, &out)?;
            Ok(EXIT_PASS)
        }
        Command::P3 => {
            let spec = match &c.group {
                Some(_) => group_spec(c)?,
                None => GroupSpec::parse("braid:3")?,
            };
            let Element::Braid(b) = element(c, &spec)? else {
                return Err(Failure::Usage(String::from("p3 needs a 3-braid")));
            };
            let coords = p3_coordinates(&b).map_err(|e| Failure::Usage(e.to_string()))?;
            let out = json!({
                "braid": b.to_word().compact(),
                "f2_part": FreeGroup::new(2).format(&coords.f2_part),
                "center_exponent": coords.center_exponent,
            });
            write(c, &out)?;
            Ok(EXIT_PASS)
        }
        Command::Fragmentation { file, subgroup, element } => {
            let text = std::fs::read_to_string(file)
                .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", file.display())))?;
            let g = parse_finite(&text)?;
            let out = fragmentation_report(&g, subgroup, element.as_deref())?;
            write(c, &out)?;
            Ok(EXIT_PASS)
        }
        Command::Extend { section, samples } => {
            let spec = GroupSpec::parse(required(&c.group, "--group")?)?;
            let qm = required(&c.qm, "--qm")?;
            let target = match (&c.word, &c.braid) {
                (None, None) => None,
                _ => Some(element(c, &spec)?),
            };
            let opts = ExtendOptions {
                n_max: c.n_max,
                radius: c.radius,
                samples: *samples,
                seed: c.seed,
                defect_const: c.defect_const.clone(),
            };
            let (passed, out) = extension_report(&spec, qm, section, target.as_ref(), &opts)?;
            write(c, &out)?;
            Ok(if passed { EXIT_PASS } else { EXIT_FAIL })
        }
    }
}
