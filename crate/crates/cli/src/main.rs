use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value as Json};

use thetak::arith::{fmt_rational, Prime, Rational};
use thetak::comodule::{invariants, ActionTable, FinComodule};
use thetak::expr::{self, Expr, Func, Value};
use thetak::free::{coaction, ThetaGen};
use thetak::kk::{einvariant, is_numerical, pair, theta, theta_basis_expand, Family, NumFun, ThetaBasis};
use thetak::ko::ko_basis_check;
use thetak::suites::{self, DEFAULT_SEED};
use thetak::{Error, Result};

#[derive(Parser)]
#[command(name = "thetak", version, about = "Exact power operations on the p-complete K-theory cooperation algebra")]
struct Cli {
    /// The prime p.
    #[arg(long, global = true, env = "THETAK_DEFAULT_P", default_value_t = 2)]
    p: u32,
    /// p-adic precision N (work modulo p^N).
    #[arg(long, global = true, default_value_t = 16)]
    precision: u32,
    /// Basis level ℓ (θ₀ … θ_ℓ).
    #[arg(long, global = true, default_value_t = 6)]
    level: u32,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Seed for the randomized suites.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Trials per randomized check.
    #[arg(long, global = true, default_value_t = 200)]
    trials: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a numerical function at a p-adic unit: `eval <expr> at <unit>`.
    Eval {
        expr: String,
        #[arg(value_parser = ["at"], hide_possible_values = true)]
        at: String,
        #[arg(allow_hyphen_values = true)]
        unit: String,
    },
    /// Apply an operation: `apply q|qtilde|chi|coproduct <expr>` or `apply psi <a> <expr>`.
    Apply {
        #[arg(value_enum)]
        op: Op,
        #[arg(num_args = 1..=2, allow_hyphen_values = true, required = true)]
        args: Vec<String>,
    },
    /// The n-th member of the θ-family (or of the Θ-family with --big at p = 2).
    Theta {
        n: u32,
        #[arg(long)]
        big: bool,
    },
    /// Expand a numerical function in the θ-basis (Θ-basis at p = 2) at the given level and precision.
    Expand {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Decide whether a Laurent polynomial is numerical; exits 1 when it is not.
    IsNumerical {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// The e-invariant group Ext^{1,2n}: order and generator.
    Einvariant { n: u32 },
    /// Coaction on K∨₀ of the Thom spectrum S//η, S//ν or S//σ.
    Coaction {
        #[arg(value_enum)]
        spectrum: Spectrum,
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Real K-theory.
    Ko {
        #[command(subcommand)]
        command: KoCommand,
    },
    /// Finite comodules over K∨₀K and their ℤ_p^× actions.
    Comodule {
        #[command(subcommand)]
        command: ComoduleCommand,
    },
    /// Run a reproducibility suite; exits 0 iff every check passes.
    Verify {
        #[arg(value_parser = suites::SUITES)]
        suite: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Op {
    Q,
    Qtilde,
    Chi,
    Coproduct,
    Psi,
}

#[derive(Clone, Copy, ValueEnum)]
enum Spectrum {
    Eta,
    Nu,
    Sigma,
}

#[derive(Subcommand)]
enum KoCommand {
    /// Test candidate Θ-families as bases of KO∨₀KO ⊂ K∨₀K.
    CheckBasis,
}

#[derive(Subcommand)]
enum ComoduleCommand {
    /// Action matrices A(γ) mod p^N for the units γ in [1, p^k).
    ToAction {
        fixture: PathBuf,
        #[arg(long, default_value_t = 3)]
        units_mod: u32,
    },
    /// Invariants of the action of the units in [1, p^k), as generators with their orders.
    Invariants {
        fixture: PathBuf,
        #[arg(long, default_value_t = 3)]
        units_mod: u32,
    },
}

/// A command's result in both output formats.
struct Output {
    text: String,
    json: Json,
    ok: bool,
}

impl Output {
    fn ok(text: String, json: Json) -> Self {
        Output { text, json, ok: true }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let text = match cli.format {
                Format::Text => out.text,
                Format::Json => serde_json::to_string_pretty(&out.json).expect("json"),
            };
            // a closed pipe (`| head`) is not an error
            let _ = writeln!(std::io::stdout(), "{text}");
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            match cli.format {
                Format::Text => eprintln!("error: {e}"),
                Format::Json => println!("{}", json!({ "error": e.to_string() })),
            }
            ExitCode::from(2)
        }
    }
}

fn parse_value(text: &str, p: Prime) -> Result<Value> {
    expr::evaluate(&expr::parse(text)?, p)
}

fn numfun(text: &str, p: Prime) -> Result<NumFun> {
    let value = parse_value(text, p)?;
    let body = value.as_laurent().ok_or_else(|| Error::Invalid(format!("`{text}` is not an element of K∨₀K")))?;
    NumFun::new(p, body)
}

fn rational(text: &str, p: Prime) -> Result<Rational> {
    parse_value(text, p)?
        .as_laurent()
        .and_then(|f| f.as_constant())
        .ok_or_else(|| Error::Invalid(format!("`{text}` is not a rational number")))
}

fn value_output(value: &Value, p: Prime) -> Output {
    Output::ok(value.display(p), value.to_json(p))
}

fn run(cli: &Cli) -> Result<Output> {
    let p = Prime::new(cli.p)?;
    match &cli.command {
        Command::Eval { expr, unit, .. } => {
            let f = numfun(expr, p)?;
            let a = rational(unit, p)?;
            let v = pair(&a, &f)?;
            Ok(Output::ok(fmt_rational(&v), json!({ "p": p.get(), "at": fmt_rational(&a), "value": fmt_rational(&v) })))
        }
        Command::Apply { op, args } => {
            let (arg, body) = match (op, args.as_slice()) {
                (Op::Psi, [a, e]) => (Some(a), e),
                (Op::Psi, _) => return Err(Error::Invalid("usage: apply psi <a> <expr>".into())),
                (_, [e]) => (None, e),
                _ => return Err(Error::Invalid("usage: apply q|qtilde|chi|coproduct <expr>".into())),
            };
            let inner = Box::new(expr::parse(body)?);
            let e = match op {
                Op::Q => Expr::Apply(Func::Q, inner),
                Op::Qtilde => Expr::Apply(Func::Qtilde, inner),
                Op::Chi => Expr::Apply(Func::Chi, inner),
                Op::Coproduct => Expr::Apply(Func::Coproduct, inner),
                Op::Psi => Expr::Psi(rational(arg.expect("psi argument"), p)?, inner),
            };
            Ok(value_output(&expr::evaluate(&e, p)?, p))
        }
        Command::Theta { n, big } => {
            let family = if *big { Family::BigTheta } else { Family::Theta };
            let f = theta(p, *n, family)?;
            let name = format!("{}[{n}]", family.symbol());
            Ok(Output::ok(
                format!("{name} = {f}"),
                json!({ "p": p.get(), "name": name, "text": f.to_string() }),
            ))
        }
        Command::Expand { expr } => {
            let f = numfun(expr, p)?;
            let family = if p.get() == 2 { Family::BigTheta } else { Family::Theta };
            let basis = ThetaBasis::new(p, family, cli.level)?;
            let expansion = theta_basis_expand(&f, &basis, cli.precision)?;
            let text = expansion.to_string();
            Ok(Output::ok(
                format!("{text}  (mod {}^{}, level {})", p.get(), cli.precision, cli.level),
                json!({
                    "p": p.get(), "level": cli.level, "precision": cli.precision,
                    "text": text, "residual_bound": expansion.residual_bound,
                    "coefficients": expansion.coefficients()
                        .map(|(e, _)| json!({ "exponents": e, "value": expansion.coefficient(e).to_string() }))
                        .collect::<Vec<_>>(),
                }),
            ))
        }
        Command::IsNumerical { expr } => {
            let f = parse_value(expr, p)?
                .as_laurent()
                .ok_or_else(|| Error::Invalid(format!("`{expr}` is not a Laurent polynomial in w")))?;
            let report = is_numerical(&f, p);
            let text = match &report.witness {
                None => "numerical".to_string(),
                Some((a, v)) => format!("not numerical: f({}) = {}", fmt_rational(a), fmt_rational(v)),
            };
            let witness = report.witness.as_ref().map(|(a, v)| json!({ "at": fmt_rational(a), "value": fmt_rational(v) }));
            Ok(Output { text, json: json!({ "p": p.get(), "numerical": report.numerical, "witness": witness }), ok: report.numerical })
        }
        Command::Einvariant { n } => {
            let e = einvariant(p, *n, cli.level, cli.precision)?;
            Ok(Output::ok(
                e.to_string(),
                json!({
                    "p": p.get(), "n": n, "order": e.order().to_string(),
                    "generator": e.generator_string(), "laurent": e.generator.to_string(),
                }),
            ))
        }
        Command::Coaction { spectrum, expr } => {
            let name = match spectrum {
                Spectrum::Eta => "eta",
                Spectrum::Nu => "nu",
                Spectrum::Sigma => "sigma",
            };
            let gen = ThetaGen::fixture(name)?;
            let e = parse_value(expr, gen.prime())?
                .as_theta_poly()
                .ok_or_else(|| Error::Invalid(format!("`{expr}` is not an element of a free θ-algebra")))?;
            let psi = coaction(&e, std::slice::from_ref(&gen))?;
            Ok(Output::ok(psi.display(gen.prime()), psi.to_json(gen.prime())))
        }
        Command::Ko { command: KoCommand::CheckBasis } => {
            let report = ko_basis_check(cli.level, cli.precision)?;
            Ok(Output { text: report.to_string(), json: report.to_json(), ok: report.succeeded().is_some() })
        }
        Command::Comodule { command } => {
            let (path, k) = match command {
                ComoduleCommand::ToAction { fixture, units_mod } | ComoduleCommand::Invariants { fixture, units_mod } => {
                    (fixture, *units_mod)
                }
            };
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Invalid(format!("cannot read {}: {e}", path.display())))?;
            let m = FinComodule::from_json(&text)?;
            let modulus = format!("{}^{}", m.prime().get(), m.precision());
            match command {
                ComoduleCommand::ToAction { .. } => {
                    let table = ActionTable::sweep(&m, k)?;
                    let rows: Vec<String> = table.samples.iter().map(|(g, a)| format!("A({g}) = {}", matrix_text(a))).collect();
                    Ok(Output::ok(
                        format!("action mod {modulus}\n{}", rows.join("\n")),
                        json!({
                            "p": m.prime().get(), "N": m.precision(), "rank": m.rank(),
                            "samples": table.samples.iter()
                                .map(|(g, a)| json!({ "gamma": g.to_string(), "matrix": matrix_json(a) }))
                                .collect::<Vec<_>>(),
                        }),
                    ))
                }
                ComoduleCommand::Invariants { .. } => {
                    let gens = invariants(&m, k)?;
                    let lines: Vec<String> = gens
                        .iter()
                        .map(|(v, e)| format!("{} of order {}^{e}", vector_text(v), m.prime().get()))
                        .collect();
                    let text = if lines.is_empty() { "0".to_string() } else { lines.join("\n") };
                    Ok(Output::ok(
                        format!("invariants mod {modulus}\n{text}"),
                        json!({
                            "p": m.prime().get(), "N": m.precision(),
                            "generators": gens.iter()
                                .map(|(v, e)| json!({ "vector": v.iter().map(|x| x.to_string()).collect::<Vec<_>>(), "order_exponent": e }))
                                .collect::<Vec<_>>(),
                        }),
                    ))
                }
            }
        }
        Command::Verify { suite } => {
            let report = suites::run_suite(suite, cli.seed, cli.trials)?;
            Ok(Output { text: report.to_string(), json: report.to_json(), ok: report.passed() })
        }
    }
}

fn vector_text(v: &[num_bigint::BigInt]) -> String {
    format!("({})", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "))
}

fn matrix_text(a: &[Vec<num_bigint::BigInt>]) -> String {
    format!("[{}]", a.iter().map(|row| vector_text(row)).collect::<Vec<_>>().join(", "))
}

fn matrix_json(a: &[Vec<num_bigint::BigInt>]) -> Json {
    json!(a.iter().map(|row| row.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>())
}
