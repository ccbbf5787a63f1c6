//! Command-line front end. [`run`] parses arguments and returns the exit
//! code with the text for stdout and stderr, so it can be tested in-process.

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::cohomology::{self, IntegralClass, ModPClass};
use crate::construction::{self, RotationData, RotationSpec};
use crate::equivalence::{
    brute_force_witness, canonical_form, decide_equivalent, orbit_representative, orbit_summary,
    EquivalenceMode, FormPair, NormalForm,
};
use crate::error::{Error, Result};
use crate::field::FieldContext;
use crate::restrictions;
use crate::Limits;

#[derive(Parser, Debug)]
#[command(
    name = "kinv",
    version,
    about = "k-invariants of free (Z/p)^2 actions on S^n x S^n"
)]
struct Cli {
    /// Odd prime p.
    #[arg(short = 'p', long = "prime", global = true)]
    prime: Option<u64>,
    #[arg(long, value_enum, default_value_t = Mode::Full, global = true)]
    mode: Mode,
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Largest number of pairs an orbit enumeration may index.
    #[arg(long, global = true)]
    limit_pairs: Option<u64>,
    /// Largest prime for the brute-force oracle.
    #[arg(long, global = true)]
    max_brute_prime: Option<u32>,
    /// Largest degree of zeta^k.
    #[arg(long, global = true)]
    max_zeta_degree: Option<usize>,
    /// Seed for randomized sweeps.
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Full,
    FixedPi1,
    Oriented,
}

impl From<Mode> for EquivalenceMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Full => EquivalenceMode::FULL,
            Mode::FixedPi1 => EquivalenceMode::FIXED_PI1,
            Mode::Oriented => EquivalenceMode::ORIENTED,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classify a pair of forms given as [[q1...],[q2...]].
    Classify {
        #[arg(long)]
        pair: String,
    },
    /// Enumerate orbits of realizable pairs.
    Orbits {
        #[arg(long, default_value_t = 2)]
        degree: usize,
    },
    /// k-invariant of a rotation action {"n":..,"R":[..],"Q":[..]}.
    Kinv {
        #[arg(long)]
        rot: String,
    },
    /// Freeness of a rotation action.
    Free {
        #[arg(long)]
        rot: String,
    },
    /// Class of a product of two lens spaces.
    Lens {
        #[arg(short = 'x', allow_hyphen_values = true)]
        x: i64,
        #[arg(short = 'y', allow_hyphen_values = true)]
        y: i64,
    },
    /// Qd(p) transgression obstruction on S^n x S^n.
    Qd {
        #[arg(short = 'n')]
        n: usize,
    },
    /// Cohomology of Z/p x Z/p in degree k.
    Cohomology {
        #[arg(short = 'k')]
        k: usize,
    },
    /// Compare the canonical-form decision with brute force.
    Oracle {
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Classify { .. } => "classify",
            Command::Orbits { .. } => "orbits",
            Command::Kinv { .. } => "kinv",
            Command::Free { .. } => "free",
            Command::Lens { .. } => "lens",
            Command::Qd { .. } => "qd",
            Command::Cohomology { .. } => "cohomology",
            Command::Oracle { .. } => "oracle",
        }
    }
}

/// Everything a command prints, in a fixed field order.
#[derive(Debug, Serialize)]
pub struct OutputRecord {
    pub command: String,
    pub prime: u32,
    pub mode: String,
    pub inputs: Value,
    pub results: Value,
}

#[derive(Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::ResourceLimit(_) => 4,
        Error::NonRealizable | Error::NotFree(_) | Error::HypothesisViolation(_) => 3,
        _ => 2,
    }
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let (stdout, stderr) = if code == 0 {
                (text, String::new())
            } else {
                (String::new(), text)
            };
            return Outcome {
                code,
                stdout,
                stderr,
            };
        }
    };
    match execute(&cli) {
        Ok((code, record)) => {
            let stdout = match (cli.format, &cli.command) {
                (Format::Csv, Command::Orbits { .. }) => orbits_csv(&record),
                _ => serde_json::to_string_pretty(&record).unwrap() + "\n",
            };
            Outcome {
                code,
                stdout,
                stderr: String::new(),
            }
        }
        Err(e) => Outcome {
            code: exit_code(&e),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

fn limits(cli: &Cli) -> Limits {
    let d = Limits::default();
    Limits {
        max_pairs: cli.limit_pairs.unwrap_or(d.max_pairs),
        max_brute_force_prime: cli.max_brute_prime.unwrap_or(d.max_brute_force_prime),
        max_zeta_degree: cli.max_zeta_degree.unwrap_or(d.max_zeta_degree),
    }
}

fn parse_pair(field: FieldContext, text: &str) -> Result<FormPair> {
    let lists: Vec<Vec<i64>> =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("pair: {e}")))?;
    match lists.as_slice() {
        [a, b] => FormPair::from_coeffs(field, a, b),
        _ => Err(Error::Parse(format!(
            "pair needs two coefficient lists, got {}",
            lists.len()
        ))),
    }
}

fn parse_rotation(field: FieldContext, text: &str) -> Result<RotationData> {
    let spec: RotationSpec =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("rotation data: {e}")))?;
    RotationData::from_spec(field, &spec)
}

fn normal_form_json(nf: &NormalForm) -> Value {
    match nf {
        NormalForm::NonRealizable => json!(null),
        NormalForm::StandardClass(w) => {
            json!({ "w": w.value(), "pair": FormPair::standard(w.context(), w.value()).to_lists() })
        }
    }
}

fn execute(cli: &Cli) -> Result<(i32, OutputRecord)> {
    let p = cli
        .prime
        .ok_or_else(|| Error::Parse("missing required -p/--prime".into()))?;
    let field = FieldContext::new(p)?;
    let mode: EquivalenceMode = cli.mode.into();
    let limits = limits(cli);
    let mut code = 0;
    let (inputs, results) = match &cli.command {
        Command::Classify { pair } => {
            let pr = parse_pair(field, pair)?;
            let inputs = json!({ "pair": pr.to_lists() });
            if !pr.is_realizable() {
                code = 3;
                let why = match pr.q1().common_rational_root(pr.q2())? {
                    Some(pt) => format!("components share the rational zero {:?}", pt.coords()),
                    None => "components are linearly dependent".to_string(),
                };
                (inputs, json!({ "realizable": false, "explanation": why }))
            } else if mode == EquivalenceMode::FULL && pr.degree() == 2 {
                let (nf, witness) = canonical_form(&pr)?;
                let class = match nf {
                    NormalForm::StandardClass(w) => w.fourth_power_class()?.0,
                    NormalForm::NonRealizable => unreachable!(),
                };
                let results = json!({
                    "realizable": true,
                    "normal_form": normal_form_json(&nf),
                    "class_index": class,
                    "class_count": field.fourth_power_class_count(),
                    "witness": witness,
                });
                (inputs, results)
            } else {
                let (rep, witness, size) = orbit_representative(&pr, mode, &limits)?;
                let results = json!({
                    "realizable": true,
                    "representative": rep.to_lists(),
                    "orbit_size": size,
                    "witness": witness,
                });
                (inputs, results)
            }
        }
        Command::Orbits { degree } => {
            let s = orbit_summary(field, *degree, mode, &limits)?;
            let reps: Vec<_> = s.representatives.iter().map(|r| r.to_lists()).collect();
            let results = json!({
                "count": s.count(),
                "representatives": reps,
                "sizes": s.sizes,
                "realizable_pairs": s.realizable_pairs,
            });
            (json!({ "degree": degree }), results)
        }
        Command::Kinv { rot } => {
            let data = parse_rotation(field, rot)?;
            let pair = data.k_invariant()?;
            let mut results = json!({
                "pair": pair.to_lists(),
                "display": pair.to_string(),
                "free": data.is_free(),
                "realizable": pair.is_realizable(),
            });
            if pair.degree() == 2 && p > 3 {
                results["normal_form"] = normal_form_json(&canonical_form(&pair)?.0);
            }
            (json!({ "rot": data.to_spec() }), results)
        }
        Command::Free { rot } => {
            let data = parse_rotation(field, rot)?;
            (
                json!({ "rot": data.to_spec() }),
                json!({ "free": data.is_free() }),
            )
        }
        Command::Lens { x, y } => {
            let (xe, ye) = (field.elem(*x), field.elem(*y));
            let data = construction::lens_product(xe, ye)?;
            let pair = data.k_invariant()?;
            let class = construction::lens_product_class(xe, ye)?;
            let (nf, _) = canonical_form(&pair)?;
            let results = json!({
                "rot": data.to_spec(),
                "pair": pair.to_lists(),
                "free": data.is_free(),
                "class_index": class.0,
                "pipeline_class_index": crate::equivalence::fourth_power_invariant(&pair)?.0,
                "normal_form": normal_form_json(&nf),
            });
            (json!({ "x": xe.value(), "y": ye.value() }), results)
        }
        Command::Qd { n } => {
            let verdict = restrictions::qd_obstruction(field, *n, &limits)?;
            (json!({ "n": n }), serde_json::to_value(verdict).unwrap())
        }
        Command::Cohomology { k } => (json!({ "k": k }), cohomology_report(field, *k)),
        Command::Oracle { samples } => {
            let report = oracle_sweep(field, mode, &limits, *samples, cli.seed)?;
            if report["discrepancies"] != json!(0) || report["witness_failures"] != json!(0) {
                code = 1;
            }
            (json!({ "samples": samples, "seed": cli.seed }), report)
        }
    };
    let record = OutputRecord {
        command: cli.command.name().to_string(),
        prime: field.p(),
        mode: mode.name().to_string(),
        inputs,
        results,
    };
    Ok((code, record))
}

fn cohomology_report(field: FieldContext, k: usize) -> Value {
    let integral: Vec<String> = cohomology::basis_of_degree(k)
        .iter()
        .map(|m| m.to_string())
        .collect();
    let bocksteins: Vec<Value> = ModPClass::basis_of_degree(field, k)
        .iter()
        .map(|e| {
            let beta = e.bockstein_modp();
            let via_integral = e.bockstein_integral().reduce_mod_p();
            json!({
                "class": e.to_string(),
                "bockstein": beta.to_string(),
                "integral_bockstein": e.bockstein_integral().to_string(),
                "consistent": beta == via_integral,
            })
        })
        .collect();
    let c = IntegralClass::c(field);
    json!({
        "cohomology": cohomology::dim_cohomology(k),
        "homology": cohomology::dim_homology(k),
        "integral_basis": integral,
        "mod_p_dimension": k + 1,
        "bocksteins": bocksteins,
        "c_squared_zero": c.multiply(&c).map(|x| x.is_zero()).unwrap_or(false),
    })
}

fn random_realizable(field: FieldContext, rng: &mut ChaCha8Rng) -> FormPair {
    let p = field.p() as i64;
    loop {
        let mut coeffs = [0i64; 6];
        for c in coeffs.iter_mut() {
            *c = rng.gen_range(0..p);
        }
        let pair = FormPair::from_coeffs(field, &coeffs[..3], &coeffs[3..]).unwrap();
        if pair.is_realizable() {
            return pair;
        }
    }
}

/// Decides every representative against every representative and each
/// random sample against every representative, both ways.
fn oracle_sweep(
    field: FieldContext,
    mode: EquivalenceMode,
    limits: &Limits,
    samples: usize,
    seed: u64,
) -> Result<Value> {
    let reps = orbit_summary(field, 2, mode, limits)?.representatives;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sources: Vec<FormPair> = reps.clone();
    sources.extend((0..samples).map(|_| random_realizable(field, &mut rng)));
    let (mut comparisons, mut discrepancies, mut witness_failures) = (0u64, 0u64, 0u64);
    let mut first_discrepancy = Value::Null;
    for src in &sources {
        for rep in &reps {
            let fast = decide_equivalent(src, rep, mode, limits)?;
            let slow = brute_force_witness(src, rep, mode, limits)?;
            comparisons += 1;
            if fast.is_some() != slow.is_some() {
                discrepancies += 1;
                if first_discrepancy.is_null() {
                    first_discrepancy =
                        json!({ "source": src.to_lists(), "target": rep.to_lists() });
                }
            }
            for w in fast.iter().chain(slow.iter()) {
                if !w.verifies(src, rep) || !mode.admits(w) {
                    witness_failures += 1;
                }
            }
        }
    }
    Ok(json!({
        "representatives": reps.len(),
        "comparisons": comparisons,
        "discrepancies": discrepancies,
        "witness_failures": witness_failures,
        "first_discrepancy": first_discrepancy,
    }))
}

fn orbits_csv(record: &OutputRecord) -> String {
    let join = |v: &Value| -> String {
        v.as_array()
            .unwrap()
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    };
    let mut out = String::from("orbit,q1,q2,size\n");
    let reps = record.results["representatives"].as_array().unwrap();
    let sizes = record.results["sizes"].as_array().unwrap();
    for (i, (rep, size)) in reps.iter().zip(sizes).enumerate() {
        out.push_str(&format!("{i},{},{},{size}\n", join(&rep[0]), join(&rep[1])));
    }
    out
}
