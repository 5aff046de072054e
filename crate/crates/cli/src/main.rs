use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use mlogic::alpha::{alpha_formulas, check_conditions, u_valuation, universal_subst, verify_lemma};
use mlogic::formula::{parse, Formula};
use mlogic::ipc::{classical_countermodel, ipc_provable, IpcError};
use mlogic::kpform::{kp_normalize, kp_rank, verify_normal_form, VerifyOptions};
use mlogic::medvedev::{
    dp_countermodel, refute, valid_on, Frame, SearchMode, SearchOptions, Strategy, Valuation,
    ValuationMap, Verdict, DEFAULT_BUDGET,
};
use mlogic::structural::{
    admissibility_witness, check_pmorphism, levin_decomposition, AdmissibilityOptions,
    LevinOptions, PMorphismJson,
};

/// Exit codes.
const ESTABLISHED: u8 = 0;
const REFUTED: u8 = 1;
const INCONCLUSIVE: u8 = 2;
const USAGE: u8 = 3;

/// Largest family for which `alpha` runs the prover on conditions (i)-(ii).
const ALPHA_CONDITION_MAX_N: usize = 16;

#[derive(Parser)]
#[command(name = "mlogic")]
#[command(about = "Medvedev frames, Kreisel-Putnam normal forms and substitution witnesses")]
#[command(version)]
struct Cli {
    /// Seed for every sampled search
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Machine-readable output
    #[arg(long, global = true)]
    json: bool,

    /// Read the formula argument from a file instead
    #[arg(long, global = true)]
    file: Option<PathBuf>,

    /// Valuations sampled per frame where exhaustive search is over budget
    #[arg(long, global = true, default_value_t = 10_000)]
    samples: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Exhaustive,
    Sample,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and print a formula in canonical form
    Parse { formula: Option<String> },
    /// Kreisel-Putnam rank
    Rank { formula: Option<String> },
    /// Normal form ~psi_1 | ... | ~psi_k of a finite-rank formula
    Normalize {
        formula: Option<String>,
        /// Check the equivalence on M_1..M_N; 0 skips the check
        #[arg(long, default_value_t = 2)]
        verify_bound: u32,
    },
    /// Intuitionistic provability
    ProveIpc { formula: Option<String> },
    /// Classical validity, with a countermodel if invalid
    ProveCl { formula: Option<String> },
    /// Validity on the Medvedev frame M_n
    Check {
        formula: Option<String>,
        #[arg(long)]
        n: u32,
        #[arg(long, value_enum, default_value = "exhaustive")]
        mode: Mode,
        /// Samples in sample mode
        #[arg(long, default_value_t = 10_000)]
        count: u64,
    },
    /// Search M_1..M_N for a refuting valuation
    Refute {
        formula: Option<String>,
        #[arg(long)]
        max_n: u32,
    },
    /// The alpha family, the universal valuation and their checks
    Alpha {
        #[arg(long)]
        n: usize,
    },
    /// Universal substitution of a valuation on M_n, applied to a formula
    Subst {
        formula: Option<String>,
        #[arg(long)]
        n: u32,
        /// JSON object mapping atoms to lists of worlds
        #[arg(long)]
        valuation: PathBuf,
    },
    /// Substitution witness against the rule premise / conclusion
    Witness {
        #[arg(long)]
        premise: String,
        #[arg(long)]
        conclusion: String,
        #[arg(long)]
        max_n: u32,
    },
    /// Refutation, substitution, normal form and classical countermodels
    Levin {
        formula: Option<String>,
        #[arg(long)]
        max_n: u32,
    },
    /// Glue refutations of both disjuncts into one of the disjunction
    Dp {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        #[arg(long)]
        max_n: u32,
    },
    /// Check a map between Medvedev frames for the p-morphism conditions
    Pmorphism {
        #[arg(long)]
        check: PathBuf,
    },
}

type CliResult = Result<(u8, String), Box<dyn std::error::Error>>;

struct Ctx {
    seed: u64,
    json: bool,
    file: Option<PathBuf>,
    samples: u64,
}

impl Ctx {
    fn formula(&self, arg: &Option<String>) -> Result<Formula, Box<dyn std::error::Error>> {
        let text = match (arg, &self.file) {
            (Some(t), None) => t.clone(),
            (None, Some(path)) => fs::read_to_string(path)?,
            (Some(_), Some(_)) => return Err("give the formula either inline or with --file, not both".into()),
            (None, None) => return Err("missing formula argument".into()),
        };
        Ok(parse(text.trim())?)
    }

    fn search(&self) -> SearchOptions {
        SearchOptions {
            strategy: Strategy::Auto {
                count: self.samples,
                seed: self.seed,
            },
            budget: DEFAULT_BUDGET,
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("plain data serializes")
}

fn verdict_line(v: &Verdict) -> String {
    match v {
        Verdict::Valid => "valid".into(),
        Verdict::NoCounterexample { samples, seed } => {
            format!("no counterexample in {samples} samples (seed {seed})")
        }
        Verdict::Refuted(w) => format!("refuted at {}", w.world()),
    }
}

fn run(cli: Cli) -> CliResult {
    let ctx = Ctx {
        seed: cli.seed,
        json: cli.json,
        file: cli.file,
        samples: cli.samples,
    };
    match cli.command {
        Command::Parse { formula } => {
            let f = ctx.formula(&formula)?;
            let out = if ctx.json {
                to_json(&json!({
                    "formula": f.to_string(),
                    "atoms": f.atoms(),
                    "size": f.size(),
                    "depth": f.depth(),
                }))
            } else {
                f.to_string()
            };
            Ok((ESTABLISHED, out))
        }
        Command::Rank { formula } => {
            let f = ctx.formula(&formula)?;
            let rank = kp_rank(&f)?.to_string();
            let out = if ctx.json {
                to_json(&json!({"formula": f.to_string(), "rank": rank}))
            } else {
                rank
            };
            Ok((ESTABLISHED, out))
        }
        Command::Normalize {
            formula,
            verify_bound,
        } => {
            let f = ctx.formula(&formula)?;
            let nd = kp_normalize(&f)?;
            let report = match verify_bound {
                0 => None,
                bound => {
                    let opts = VerifyOptions {
                        bound,
                        search: ctx.search(),
                        ..VerifyOptions::default()
                    };
                    Some(verify_normal_form(&f, &nd, &opts)?)
                }
            };
            let code = match &report {
                Some(r) if !r.passed() => REFUTED,
                _ => ESTABLISHED,
            };
            let out = if ctx.json {
                to_json(&json!({
                    "formula": f.to_string(),
                    "rank": nd.len(),
                    "normal_form": nd.to_formula().to_string(),
                    "bodies": nd.bodies.iter().map(|b| b.to_string()).collect::<Vec<_>>(),
                    "verified": report.as_ref().map(|r| r.passed()),
                }))
            } else {
                let mut lines: Vec<String> = nd.bodies.iter().map(|b| b.to_string()).collect();
                if let Some(r) = &report {
                    lines.push(r.to_string());
                }
                lines.join("\n")
            };
            Ok((code, out))
        }
        Command::ProveIpc { formula } => {
            let f = ctx.formula(&formula)?;
            let (code, word) = match ipc_provable(&f) {
                Ok(true) => (ESTABLISHED, "provable"),
                Ok(false) => (REFUTED, "unprovable"),
                Err(IpcError::BudgetExceeded { .. }) => (INCONCLUSIVE, "budget exhausted"),
            };
            let out = if ctx.json {
                to_json(&json!({"formula": f.to_string(), "result": word}))
            } else {
                word.to_string()
            };
            Ok((code, out))
        }
        Command::ProveCl { formula } => {
            let f = ctx.formula(&formula)?;
            let cm = classical_countermodel(&f)?;
            let code = if cm.is_some() { REFUTED } else { ESTABLISHED };
            let out = if ctx.json {
                to_json(&json!({
                    "formula": f.to_string(),
                    "valid": cm.is_none(),
                    "countermodel": cm,
                }))
            } else {
                match cm {
                    None => "valid".to_string(),
                    Some(a) => format!("invalid\ncountermodel: {}", serde_json::to_string(&a)?),
                }
            };
            Ok((code, out))
        }
        Command::Check {
            formula,
            n,
            mode,
            count,
        } => {
            let f = ctx.formula(&formula)?;
            let frame = Frame::new(n)?;
            let mode = match mode {
                Mode::Exhaustive => SearchMode::Exhaustive,
                Mode::Sample => SearchMode::Sample {
                    count,
                    seed: ctx.seed,
                },
            };
            let verdict = valid_on(&frame, &f, mode, DEFAULT_BUDGET)?;
            let code = match verdict {
                Verdict::Valid => ESTABLISHED,
                Verdict::Refuted(_) => REFUTED,
                Verdict::NoCounterexample { .. } => INCONCLUSIVE,
            };
            let out = match (&verdict, ctx.json) {
                (Verdict::Refuted(w), _) => {
                    format!("{}\n{}", verdict_line(&verdict), to_json(&w.to_json()))
                }
                (_, true) => to_json(&json!({"formula": f.to_string(), "n": n, "result": verdict_line(&verdict)})),
                (_, false) => verdict_line(&verdict),
            };
            Ok((code, out))
        }
        Command::Refute { formula, max_n } => {
            let f = ctx.formula(&formula)?;
            match refute(&f, max_n, &ctx.search())? {
                Some(w) => Ok((REFUTED, to_json(&w.to_json()))),
                None => Ok((INCONCLUSIVE, format!("no refutation on M_1..M_{max_n}"))),
            }
        }
        Command::Alpha { n } => alpha(&ctx, n),
        Command::Subst {
            formula,
            n,
            valuation,
        } => {
            let f = ctx.formula(&formula)?;
            let map: ValuationMap = serde_json::from_str(&fs::read_to_string(valuation)?)?;
            let v = Valuation::from_map(Frame::new(n)?, &map)?;
            let sigma = universal_subst(&v)?;
            let image = sigma.apply(&f);
            let lemma = verify_lemma(&v, std::slice::from_ref(&f))?;
            let code = if lemma.passed() { ESTABLISHED } else { REFUTED };
            let out = if ctx.json {
                to_json(&json!({
                    "sigma": mlogic::structural::sigma_json(&sigma),
                    "formula": f.to_string(),
                    "image": image.to_string(),
                    "truth_sets_agree": lemma.passed(),
                }))
            } else {
                let mut lines: Vec<String> = sigma.iter().map(|(a, g)| format!("sigma({a}) = {g}")).collect();
                lines.push(format!("sigma({f}) = {image}"));
                lines.push(format!(
                    "truth sets under v and u_{n}: {}",
                    if lemma.passed() { "agree" } else { "DIFFER" }
                ));
                lines.join("\n")
            };
            Ok((code, out))
        }
        Command::Witness {
            premise,
            conclusion,
            max_n,
        } => {
            let (phi, psi) = (parse(&premise)?, parse(&conclusion)?);
            let opts = AdmissibilityOptions {
                search: ctx.search(),
                validity_search: AdmissibilityOptions::default().validity_search.with_seed(ctx.seed),
                ..AdmissibilityOptions::default()
            };
            match admissibility_witness(&phi, &psi, max_n, &opts)? {
                Some(w) => Ok((REFUTED, to_json(&w.to_json()))),
                None => Ok((INCONCLUSIVE, format!("no witness on M_1..M_{max_n}"))),
            }
        }
        Command::Levin { formula, max_n } => {
            let f = ctx.formula(&formula)?;
            let opts = LevinOptions {
                search: ctx.search(),
                ..LevinOptions::default()
            };
            match levin_decomposition(&f, max_n, &opts)? {
                Some(d) => Ok((REFUTED, to_json(&d.to_json()))),
                None => Ok((INCONCLUSIVE, format!("no refutation on M_1..M_{max_n}"))),
            }
        }
        Command::Dp { left, right, max_n } => {
            let (l, r) = (parse(&left)?, parse(&right)?);
            let opts = ctx.search();
            let wl = refute(&l, max_n, &opts)?;
            let wr = refute(&r, max_n, &opts)?;
            match (wl, wr) {
                (Some(a), Some(b)) => Ok((REFUTED, to_json(&dp_countermodel(&a, &b)?.to_json()))),
                (a, b) => {
                    let missing: Vec<String> = [(a.is_none(), &l), (b.is_none(), &r)]
                        .iter()
                        .filter(|(m, _)| *m)
                        .map(|(_, f)| format!("`{f}`"))
                        .collect();
                    Ok((
                        INCONCLUSIVE,
                        format!("no refutation of {} on M_1..M_{max_n}", missing.join(" and ")),
                    ))
                }
            }
        }
        Command::Pmorphism { check } => {
            let spec: PMorphismJson = serde_json::from_str(&fs::read_to_string(check)?)?;
            let f = spec.build()?;
            let report = check_pmorphism(&f);
            let code = if report.passed() { ESTABLISHED } else { REFUTED };
            let out = if ctx.json {
                to_json(&json!({
                    "map": f.to_json(),
                    "pairs_checked": report.pairs_checked,
                    "violation": report.violation.as_ref().map(|v| v.to_string()),
                }))
            } else {
                let mut lines: Vec<String> = f
                    .source()
                    .worlds()
                    .map(|w| format!("{w} -> {}", f.apply(w)))
                    .collect();
                lines.push(match &report.violation {
                    None => format!("p-morphism: pass ({} pairs checked)", report.pairs_checked),
                    Some(v) => format!("p-morphism: FAIL, {v}"),
                });
                lines.join("\n")
            };
            Ok((code, out))
        }
    }
}

fn alpha(ctx: &Ctx, n: usize) -> CliResult {
    let family = alpha_formulas(n)?;
    let conditions = if n <= ALPHA_CONDITION_MAX_N {
        Some(check_conditions(&family)?)
    } else {
        None
    };
    let u = if n <= mlogic::medvedev::MAX_N as usize {
        Some(u_valuation(n as u32)?)
    } else {
        None
    };
    let passed = conditions.as_ref().is_none_or(|c| c.passed() && c.agree());
    let code = if passed { ESTABLISHED } else { REFUTED };
    let formulas: Vec<String> = family.formulas().iter().map(|f| f.to_string()).collect();
    let out = if ctx.json {
        to_json(&json!({
            "n": n,
            "m": family.m(),
            "formulas": formulas,
            "u": u.as_ref().map(|u| u.valuation().to_map()),
            "conditions": conditions.as_ref().map(|c| c.passed() && c.agree()),
        }))
    } else {
        let mut lines: Vec<String> = formulas
            .iter()
            .enumerate()
            .map(|(i, f)| format!("alpha_{} = {f}", i + 1))
            .collect();
        match &u {
            Some(u) => lines.push(format!("u_{n} = {}", serde_json::to_string(&u.valuation().to_map())?)),
            None => lines.push(format!("u_{n}: frame too large to build")),
        }
        match &conditions {
            Some(c) => lines.push(c.to_string()),
            None => lines.push(format!("conditions (i)-(ii): not checked for n > {ALPHA_CONDITION_MAX_N}")),
        }
        if u.is_some() {
            lines.push("condition (iii): pass".into());
        }
        lines.join("\n")
    };
    Ok((code, out))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("error")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { USAGE } else { ESTABLISHED });
        }
    };
    match run(cli) {
        Ok((code, out)) => {
            println!("{out}");
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(USAGE)
        }
    }
}
