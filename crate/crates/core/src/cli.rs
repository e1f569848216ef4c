//! Command-line interface.
//!
//! Every command renders its output to a string so runs can be compared byte
//! for byte; [`run`] never touches stdout. Exit codes: 0 when every test
//! passes, 1 when a test fails, 2 for usage and input errors.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::borel::{self, sample_json, ErdosRenyi, PrefixSampler, PushforwardSampler};
use crate::error::{Error, Result};
use crate::finstruct::{
    automorphism_group, is_highly_homogeneous_finite, labeled_type, parse_structure,
    unlabeled_type, BRUTE_FORCE_BOUND,
};
use crate::lemmas::verify_lemmas;
use crate::measures::{reweight, SampleableMeasure, Weight};
use crate::montecarlo::{stream_rng, with_workers};
use crate::reducts::ReductKind;
use crate::typestats::{
    check_high_homogeneity_sampled, enumerate_types, estimate_frequencies, test_distinguish,
    test_exchangeability, test_uniformity, TestReport, DEFAULT_SIGNIFICANCE,
};

/// Seed used when neither `--seed` nor `EXCHSTRUCT_SEED` is given.
pub const DEFAULT_SEED: u64 = 20_240_917;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Name accepted by `--structure` for `G(N, p)`.
pub const ERDOS_RENYI: &str = "erdos-renyi";

#[derive(Debug, Parser)]
#[command(
    name = "exchstruct",
    version,
    about = "Invariant measures on countable structures"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub global: GlobalArgs,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Integer seed, or `fresh` for an unpredictable one.
    #[arg(long, global = true, env = "EXCHSTRUCT_SEED")]
    pub seed: Option<String>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Monte Carlo worker threads; 0 uses every core. Results do not depend on it.
    #[arg(long, global = true, default_value_t = 0)]
    pub workers: usize,

    #[arg(long, global = true, default_value_t = DEFAULT_SIGNIFICANCE)]
    pub significance: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct SourceArgs {
    /// A built-in Borel structure, or `erdos-renyi`.
    #[arg(long)]
    pub structure: String,

    #[arg(long, default_value = "normal")]
    pub measure: String,

    /// Weight JSON file; the measure is reweighted by it.
    #[arg(long)]
    pub weight: Option<PathBuf>,

    /// Edge probability for `erdos-renyi`.
    #[arg(long, default_value_t = 0.5)]
    pub p: f64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Count labeled types of a reduct on n elements.
    Enumerate {
        #[arg(long)]
        structure: ReductKind,
        #[arg(long)]
        n: usize,
    },
    /// Draw n-element prefixes.
    Sample {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        samples: u64,
    },
    /// Chi-square test that labeled n-types are uniform.
    TestUniqueness {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
    },
    /// Homogeneity test across all injective k-tuples from an n-element prefix.
    TestInvariance {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 20_000)]
        samples: u64,
    },
    /// Whether two weights give distinguishable type frequencies.
    Distinguish {
        #[arg(long)]
        structure: String,
        #[arg(long, default_value = "normal")]
        measure: String,
        #[arg(long)]
        w1: PathBuf,
        #[arg(long)]
        w2: PathBuf,
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long, default_value_t = 10_000)]
        samples: u64,
    },
    /// Sampled check that all k-element substructures of an n-prefix are isomorphic.
    CheckHh {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long, default_value_t = 8)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 100)]
        trials: u64,
    },
    /// Exact checks of the symmetric polynomial identities.
    VerifyLemmas {
        #[arg(long, default_value_t = 4)]
        max_n: usize,
        #[arg(long, default_value_t = 3)]
        max_l: usize,
        #[arg(long, default_value_t = 200)]
        tables: usize,
    },
    /// Types, automorphisms and homogeneity of a structure in text format.
    Inspect {
        /// Path to the structure file.
        input: PathBuf,
    },
}

/// Rendered output and whether every test in it passed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub text: String,
    pub passed: bool,
}

impl Output {
    fn json(value: &Value, passed: bool) -> Self {
        let mut text = serde_json::to_string_pretty(value).expect("json renders");
        text.push('\n');
        Self { text, passed }
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed {
            EXIT_PASS
        } else {
            EXIT_FAIL
        }
    }
}

/// Resolves `--seed`: an integer, `fresh`, or the default.
pub fn resolve_seed(seed: Option<&str>) -> Result<u64> {
    match seed.map(str::trim) {
        None | Some("") => Ok(DEFAULT_SEED),
        Some("fresh") => Ok(rand::rng().random()),
        Some(s) => s
            .parse()
            .map_err(|_| Error::Parse(format!("seed `{s}` is neither an integer nor `fresh`"))),
    }
}

fn read_weight(path: &Path) -> Result<Weight> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    Weight::from_json_str(&text)
}

fn measure(name: &str, weight: Option<&Path>) -> Result<SampleableMeasure> {
    let base = SampleableMeasure::from_name(name)?;
    match weight {
        Some(path) => reweight(&base, &read_weight(path)?),
        None => Ok(base),
    }
}

fn sampler(source: &SourceArgs) -> Result<Box<dyn PrefixSampler>> {
    if source.structure == ERDOS_RENYI {
        return Ok(Box::new(ErdosRenyi::new(source.p)?));
    }
    Ok(Box::new(PushforwardSampler::new(
        borel::builtin(&source.structure)?,
        measure(&source.measure, source.weight.as_deref())?,
    )))
}

fn report_output(report: TestReport, seed: u64) -> Output {
    let passed = report.passed();
    Output::json(&report.with_param("run_seed", seed).to_json(), passed)
}

/// Runs one parsed invocation.
pub fn run(cli: &Cli) -> Result<Output> {
    let g = &cli.global;
    if !(g.significance > 0.0 && g.significance < 1.0) {
        return Err(Error::ProbabilityOutOfRange(g.significance));
    }
    let seed = resolve_seed(g.seed.as_deref())?;
    with_workers(g.workers, || dispatch(&cli.command, g, seed))
}

fn dispatch(command: &Command, g: &GlobalArgs, seed: u64) -> Result<Output> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match command {
        Command::Enumerate { structure, n } => cmd_enumerate(*structure, *n, g.format),
        Command::Sample { source, n, samples } => cmd_sample(source, *n, *samples, seed, g.format),
        Command::TestUniqueness { source, n, samples } => {
            let kind = borel::builtin(&source.structure)
                .ok()
                .and_then(|b| b.reduct_kind())
                .ok_or_else(|| {
                    Error::UnknownStructure(format!(
                        "{} (uniqueness needs one of the five reducts)",
                        source.structure
                    ))
                })?;
            let (expected, _) = enumerate_types(kind, *n)?;
            let table = estimate_frequencies(sampler(source)?.as_ref(), *n, *samples, &mut rng)?;
            let report = test_uniformity(&table, &expected, g.significance)?;
            match g.format {
                Format::Json => Ok(report_output(report, seed)),
                Format::Csv => Ok(Output {
                    text: table.to_csv(),
                    passed: report.passed(),
                }),
            }
        }
        Command::TestInvariance {
            source,
            n,
            k,
            samples,
        } => {
            if *k == 0 || k > n {
                return Err(Error::MalformedTuples(format!(
                    "need 1 <= k <= n, got k = {k}, n = {n}"
                )));
            }
            let tuples: Vec<Vec<usize>> = itertools::Itertools::permutations(0..*n, *k).collect();
            let report = test_exchangeability(
                sampler(source)?.as_ref(),
                &tuples,
                *samples,
                g.significance,
                &mut rng,
            )?;
            Ok(report_output(report, seed))
        }
        Command::Distinguish {
            structure,
            measure: base,
            w1,
            w2,
            n,
            samples,
        } => {
            let report = test_distinguish(
                &borel::builtin(structure)?,
                &SampleableMeasure::from_name(base)?,
                &read_weight(w1)?,
                &read_weight(w2)?,
                *n,
                *samples,
                g.significance,
                &mut rng,
            )?;
            Ok(report_output(report, seed))
        }
        Command::CheckHh {
            source,
            n,
            k,
            trials,
        } => {
            let report = check_high_homogeneity_sampled(
                sampler(source)?.as_ref(),
                *n,
                *k,
                *trials,
                &mut rng,
            )?;
            Ok(report_output(report, seed))
        }
        Command::VerifyLemmas {
            max_n,
            max_l,
            tables,
        } => {
            let report = verify_lemmas(*max_n, *max_l, *tables, seed)?;
            match g.format {
                Format::Json => Ok(Output::json(&report.to_json(), report.passed)),
                Format::Csv => {
                    let mut text = String::from("identity,cases,failures,passed\n");
                    for c in &report.checks {
                        text.push_str(&format!(
                            "{},{},{},{}\n",
                            c.identity, c.cases, c.failures, c.passed
                        ));
                    }
                    Ok(Output {
                        text,
                        passed: report.passed,
                    })
                }
            }
        }
        Command::Inspect { input } => cmd_inspect(input),
    }
}

pub fn cmd_enumerate(kind: ReductKind, n: usize, format: Format) -> Result<Output> {
    let (types, alpha) = enumerate_types(kind, n)?;
    let text = match format {
        Format::Json => {
            let ids: Vec<String> = types.iter().map(|t| t.to_hex()).collect();
            let value = json!({ "structure": kind.name(), "n": n, "alpha": alpha, "types": ids });
            return Ok(Output::json(&value, true));
        }
        Format::Csv => format!("structure,n,alpha\n{},{n},{alpha}\n", kind.name()),
    };
    Ok(Output { text, passed: true })
}

/// Sample `i` is drawn from stream `i` of the seed.
pub fn cmd_sample(
    source: &SourceArgs,
    n: usize,
    samples: u64,
    seed: u64,
    format: Format,
) -> Result<Output> {
    let sampler = sampler(source)?;
    let drawn = (0..samples)
        .map(|i| sampler.sample_prefix(n, &mut stream_rng(seed, i)))
        .collect::<Result<Vec<_>>>()?;
    let text = match format {
        Format::Json => {
            let items: Vec<Value> = drawn
                .iter()
                .map(|m| sample_json(&source.structure, m, seed))
                .collect();
            let value = json!({
                "structure": source.structure,
                "measure": sampler.label(),
                "n": n,
                "seed": seed,
                "samples": items,
            });
            return Ok(Output::json(&value, true));
        }
        Format::Csv => {
            let mut text = String::from("sample,relation,tuple\n");
            for (i, m) in drawn.iter().enumerate() {
                for (r, sym) in m.signature().relations().iter().enumerate() {
                    for t in m.relation(r) {
                        let tuple: Vec<String> = t.iter().map(usize::to_string).collect();
                        text.push_str(&format!("{i},{},{}\n", sym.name, tuple.join(" ")));
                    }
                }
            }
            text
        }
    };
    Ok(Output { text, passed: true })
}

pub fn cmd_inspect(path: &Path) -> Result<Output> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    let m = parse_structure(&text)?;
    let mut value = json!({
        "size": m.size(),
        "signature": m.signature().relations(),
        "tuples": m.tuple_count(),
        "labeled_type": labeled_type(&m).to_hex(),
    });
    if m.size() <= BRUTE_FORCE_BOUND {
        let homogeneous: Vec<usize> = (1..=m.size())
            .filter(|&k| is_highly_homogeneous_finite(&m, k).unwrap_or(false))
            .collect();
        value["unlabeled_type"] = json!(unlabeled_type(&m)?.to_hex());
        value["automorphisms"] = json!(automorphism_group(&m)?.len());
        value["highly_homogeneous_k"] = json!(homogeneous);
    }
    Ok(Output::json(&value, true))
}

/// Parses `args`, runs, writes output, and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                EXIT_USAGE
            } else {
                EXIT_PASS
            };
        }
    };
    match run(&cli) {
        Ok(out) => {
            let written = match &cli.global.out {
                Some(path) => fs::write(path, &out.text),
                None => {
                    use std::io::Write;
                    std::io::stdout().write_all(out.text.as_bytes())
                }
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return EXIT_USAGE;
            }
            out.exit_code()
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}
