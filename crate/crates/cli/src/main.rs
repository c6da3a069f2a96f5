use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use semiorbit::combinatorics::{b_tree_size, find_common_gap};
use semiorbit::ff_core::{factorize, FieldContext, FieldElement};
use semiorbit::intpoly::{cyclotomic, is_special, IntPolynomial};
use semiorbit::orbits::{orbit, sup_m_over_sequences, GeneratorSet};
use semiorbit::verify::{run_experiment, ExperimentConfig, ExperimentId};
use semiorbit::{Error, ErrorClass, Result};

/// Default directory for reports when no output path is given.
const OUT_DIR_ENV: &str = "SEMIORBIT_OUT_DIR";

#[derive(Parser)]
#[command(name = "semiorbit", version, about = "Orbits, orders and resultants for polynomial semigroups over finite fields")]
struct Cli {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Multiplicative order of an element of F_{p^s} (element given by its index).
    Order { p: u64, s: u32, element: u64 },
    /// The n-th cyclotomic polynomial.
    Cyclotomic { n: u64 },
    /// Resultant of two integer polynomials.
    Resultant { f: String, g: String },
    /// Forward orbit of x under the generators: `orbit P S GEN... X`.
    Orbit {
        p: u64,
        s: u32,
        /// Generators followed by the start point.
        #[arg(num_args = 2.., required = true)]
        args: Vec<String>,
        /// Stop after this many elements.
        #[arg(long, default_value_t = 1 << 20)]
        cap: usize,
        /// List only points reached after at least one step.
        #[arg(long)]
        exclude_start: bool,
    },
    /// Best count of small-order iterates over all sequences: `sup P S GEN... X --t T --n N`.
    Sup {
        p: u64,
        s: u32,
        #[arg(num_args = 2.., required = true)]
        args: Vec<String>,
        #[arg(long)]
        t: u64,
        #[arg(long)]
        n: usize,
    },
    /// Size of the complete k-ary tree of depth h - 1.
    Btree { k: u64, h: u32 },
    /// Frequent small gap in an increasing index list: `gap 1,4,9 N`.
    Gap {
        #[arg(value_delimiter = ',', num_args = 1, required = true)]
        indices: Vec<u64>,
        n: u64,
    },
    /// Whether a polynomial is linearly conjugate to a monomial or Chebyshev polynomial.
    Special { f: String },
    /// Elements of F_{p^s} with multiplicative order at most t.
    Gamma { p: u64, s: u32, t: u64 },
    /// Prime factorization of a positive integer.
    Factor { n: u128 },
    /// Logarithmic height of an integer polynomial.
    Height { f: String },
    /// Runs an experiment from a JSON config and writes its report.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct VerifyArgs {
    experiment: String,
    config: PathBuf,
    /// Report path; `.json` selects JSON, anything else CSV.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    h: Option<u32>,
    #[arg(long)]
    l: Option<usize>,
    #[arg(long)]
    s: Option<u32>,
    #[arg(long)]
    prime_max: Option<u64>,
    #[arg(long)]
    constant: Option<f64>,
    #[arg(long)]
    witness_constant: Option<f64>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    cap: Option<usize>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    n_max: Option<u32>,
    #[arg(long)]
    include_level0: bool,
    #[arg(long)]
    strict_special: bool,
    #[arg(long)]
    h_from_n: bool,
    #[arg(long)]
    resultant_diagnostic: bool,
}

fn parse_poly(text: &str) -> Result<IntPolynomial> {
    text.parse()
}

fn split_system(args: &[String]) -> Result<(GeneratorSet, u64)> {
    let (x, gens) = args.split_last().expect("clap enforces two values");
    let x = x
        .parse::<u64>()
        .map_err(|e| Error::InvalidConfig(format!("start point '{x}': {e}")))?;
    Ok((GeneratorSet::parse(gens)?, x))
}

fn elements_line(v: &[FieldElement]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

fn run(cli: Cli) -> Result<String> {
    let json_out = cli.json;
    let out = match cli.command {
        Command::Order { p, s, element } => {
            let ctx = FieldContext::extension(p, s)?;
            let tau = ctx.mul_order(ctx.element(element)?)?;
            if json_out {
                json!({"p": p, "s": s, "element": element, "order": tau}).to_string()
            } else {
                tau.to_string()
            }
        }
        Command::Cyclotomic { n } => {
            let f = cyclotomic(n)?;
            if json_out {
                json!({"n": n, "polynomial": f.to_string()}).to_string()
            } else {
                f.to_string()
            }
        }
        Command::Resultant { f, g } => {
            let r = parse_poly(&f)?.resultant(&parse_poly(&g)?)?;
            if json_out {
                json!({"resultant": r.to_string()}).to_string()
            } else {
                r.to_string()
            }
        }
        Command::Orbit { p, s, args, cap, exclude_start } => {
            let ctx = FieldContext::extension(p, s)?;
            let (gens, x) = split_system(&args)?;
            let sys = gens.reduce(&ctx)?;
            let rec = orbit(&sys, ctx.element(x)?, cap, !exclude_start);
            if json_out {
                let elements: Vec<_> = rec
                    .elements
                    .iter()
                    .map(|(e, l)| json!({"element": e.index(), "level": l}))
                    .collect();
                json!({"p": p, "s": s, "start": x, "size": rec.size(), "truncated": rec.truncated, "elements": elements})
                    .to_string()
            } else {
                let mut lines = vec![format!("T={}", rec.size())];
                if rec.truncated {
                    lines.push(format!("truncated at cap {cap}"));
                }
                lines.extend(rec.elements.iter().map(|(e, l)| format!("{e} {l}")));
                lines.join("\n")
            }
        }
        Command::Sup { p, s, args, t, n } => {
            let ctx = FieldContext::extension(p, s)?;
            let (gens, x) = split_system(&args)?;
            let best = sup_m_over_sequences(&gens.reduce(&ctx)?, ctx.element(x)?, t, n)?;
            if json_out {
                json!({"value": best.value, "witness": best.witness.letters()}).to_string()
            } else {
                format!("{} {}", best.value, best.witness)
            }
        }
        Command::Btree { k, h } => {
            let b = b_tree_size(k, h)?;
            if json_out {
                json!({"k": k, "h": h, "size": b.to_string()}).to_string()
            } else {
                b.to_string()
            }
        }
        Command::Gap { indices, n } => {
            let g = find_common_gap(&indices, n)?;
            if json_out {
                serde_json::to_string(&g).expect("serializable")
            } else {
                format!("r={} count={} T={} N={}", g.r, g.count, g.t, g.n)
            }
        }
        Command::Special { f } => {
            let c = is_special(&parse_poly(&f)?)?;
            if json_out {
                let witness = c.witness.as_ref().map(|(l, nf)| {
                    json!({"alpha": l.alpha.to_string(), "beta": l.beta.to_string(), "normal_form": nf.to_string()})
                });
                json!({"kind": c.kind.as_str(), "witness": witness}).to_string()
            } else {
                c.kind.as_str().to_string()
            }
        }
        Command::Gamma { p, s, t } => {
            let ctx = FieldContext::extension(p, s)?;
            let mut set = ctx.small_order_set(t)?;
            set.sort_unstable();
            if json_out {
                let v: Vec<u64> = set.iter().map(|e| e.index()).collect();
                json!({"p": p, "s": s, "t": t, "elements": v}).to_string()
            } else {
                elements_line(&set)
            }
        }
        Command::Factor { n } => {
            let f = factorize(n)?;
            if json_out {
                let factors: Vec<_> = f.factors.iter().map(|(p, e)| json!([p.to_string(), e])).collect();
                json!({"value": n.to_string(), "factors": factors}).to_string()
            } else {
                let parts: Vec<String> = f
                    .factors
                    .iter()
                    .map(|&(p, e)| if e == 1 { p.to_string() } else { format!("{p}^{e}") })
                    .collect();
                parts.join(" * ")
            }
        }
        Command::Height { f } => {
            let h = parse_poly(&f)?.height()?;
            if json_out {
                json!({"height": h}).to_string()
            } else {
                semiorbit::verify::fmt_real(h)
            }
        }
        Command::Verify(v) => return verify(v, json_out),
    };
    Ok(out)
}

fn verify(v: VerifyArgs, json_out: bool) -> Result<String> {
    let id: ExperimentId = v.experiment.parse()?;
    let text = std::fs::read_to_string(&v.config)
        .map_err(|e| Error::InvalidConfig(format!("{}: {e}", v.config.display())))?;
    let mut cfg = ExperimentConfig::from_json(&text)?;
    macro_rules! set {
        ($($field:ident),*) => {$(
            if let Some(x) = v.$field {
                cfg.$field = x.into();
            }
        )*};
    }
    set!(n, h, l, prime_max, n_max, samples);
    macro_rules! set_plain {
        ($($field:ident),*) => {$(
            if let Some(x) = v.$field {
                cfg.$field = x;
            }
        )*};
    }
    set_plain!(seed, s, constant, witness_constant, epsilon, cap);
    cfg.include_level0 |= v.include_level0;
    cfg.strict_special |= v.strict_special;
    cfg.h_from_n |= v.h_from_n;
    cfg.resultant_diagnostic |= v.resultant_diagnostic;

    let report = run_experiment(id, &cfg)?;
    let ext = if json_out { "json" } else { "csv" };
    let path = v.out.or_else(|| cfg.output.as_ref().map(PathBuf::from)).or_else(|| {
        std::env::var_os(OUT_DIR_ENV).map(|dir| PathBuf::from(dir).join(format!("{id}.{ext}")))
    });
    match path {
        Some(path) => {
            report.write_to(&path)?;
            Ok(format!("{}\nwritten to {}", report.summary_line(), path.display()))
        }
        None if json_out => Ok(report.to_json().trim_end().to_string()),
        None => Ok(format!("{}{}", report.to_csv(), report.summary_line())),
    }
}

fn exit_code(e: &Error) -> u8 {
    match e.class() {
        ErrorClass::Usage => 2,
        ErrorClass::Precondition => 3,
        ErrorClass::Resource => 4,
        ErrorClass::Internal => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(text) => {
            println!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
