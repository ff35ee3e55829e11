//! Command-line front end: argument model, dispatch and rendering.

use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::expr::{input_context, parse_expression, eval_polynomial, parse_rational};
use crate::files::{load_gluing, resolve_algebra};
use crate::fuzzy::fuzzy_summary;
use crate::glue::GluingInstance;
use crate::liealg::LieAlgebra;
use crate::orbit::{harmonic_decompose, LevelKind, OrbitData, PsiPStar, QuotientStar, Radius};
use crate::poly::{PolyRing, Polynomial};
use crate::report::{CheckReport, Witness};
use crate::star::{check_tangential, MoyalHeisenberg, MoyalR2n, PoissonMatrix, StarProduct, WeylStar};
use crate::suites::{glue_reports, run_suite};
use crate::uea::EnvelopingElement;
use crate::weyl::WeylContext;

#[derive(Parser, Debug)]
#[command(name = "defquant", version, about = "Exact star products on Lie-algebra duals and SU(2) orbits")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Product {
    Weyl,
    MoyalHeis,
    MoyalR2n,
    PsiP,
    Quotient,
    Glued,
}

#[derive(Args, Debug, Clone)]
pub struct AlgebraArgs {
    /// Builtin algebra (su2, heisenberg, sl2) or a path to an algebra file.
    #[arg(long)]
    pub algebra: Option<String>,
    /// Parameters admitted in input expressions, e.g. `--params r,t1`.
    #[arg(long, value_delimiter = ',')]
    pub params: Vec<String>,
}

#[derive(Args, Debug, Clone)]
pub struct OrbitArgs {
    /// Deformed level: plain (c = r^2) or shifted (c = r(r+h)).
    #[arg(long, default_value = "plain")]
    pub level: String,
    /// Numeric orbit radius; symbolic `r` when omitted.
    #[arg(long)]
    pub radius: Option<String>,
}

#[derive(Args, Debug, Clone)]
pub struct ProductArgs {
    #[arg(long, value_enum, default_value_t = Product::Weyl)]
    pub product: Product,
    /// Truncation order in h for the Moyal and glued products.
    #[arg(long)]
    pub order: Option<u32>,
    #[command(flatten)]
    pub orbit: OrbitArgs,
    /// Coordinates for moyal-r2n (even count), default `q,p`.
    #[arg(long, value_delimiter = ',')]
    pub coords: Vec<String>,
    /// Gluing instance file for the glued product.
    #[arg(long)]
    pub glue: Option<PathBuf>,
    /// Chart (1-based) in which the glued product is computed.
    #[arg(long, default_value_t = 1)]
    pub chart: usize,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Kirillov Poisson bracket {f, g}.
    Bracket {
        #[command(flatten)]
        alg: AlgebraArgs,
        f: String,
        g: String,
    },
    /// Star product f * g.
    Star {
        #[command(flatten)]
        alg: AlgebraArgs,
        #[command(flatten)]
        product: ProductArgs,
        f: String,
        g: String,
    },
    /// Symmetrization map into the enveloping algebra.
    Weyl {
        #[command(flatten)]
        alg: AlgebraArgs,
        f: String,
    },
    /// Inverse symmetrization of a word such as `Y X` or `Y*X`.
    Unweyl {
        #[command(flatten)]
        alg: AlgebraArgs,
        #[arg(required = true)]
        word: Vec<String>,
    },
    /// PBW normal form of a word.
    Normalize {
        #[command(flatten)]
        alg: AlgebraArgs,
        #[arg(required = true)]
        word: Vec<String>,
    },
    /// Class of f in the su2 orbit quotient.
    Reduce {
        #[command(flatten)]
        alg: AlgebraArgs,
        #[command(flatten)]
        orbit: OrbitArgs,
        f: String,
    },
    /// Decomposition f = sum p^j H_j with H_j harmonic.
    Harm {
        #[command(flatten)]
        alg: AlgebraArgs,
        f: String,
    },
    /// Checks f * I, I * f in I up to the given h order.
    Tangential {
        #[command(flatten)]
        alg: AlgebraArgs,
        #[command(flatten)]
        product: ProductArgs,
        /// Ideal generator; repeat for several.
        #[arg(long, required = true)]
        ideal: Vec<String>,
        #[arg(long, default_value_t = 3)]
        degree: u32,
        #[arg(long, default_value_t = 3)]
        h_order: u32,
    },
    /// Spin-j representation and its descent to the quotient.
    Fuzzy {
        #[arg(long)]
        spin: String,
        #[arg(long)]
        h: String,
        /// Degree bound for homomorphism pairs.
        #[arg(long, default_value_t = 2)]
        degree: u32,
    },
    /// Gluing identities on a two-chart instance or a file.
    GlueDemo {
        #[arg(long)]
        glue: Option<PathBuf>,
        #[arg(long, default_value_t = 3)]
        order: u32,
        #[arg(long, default_value_t = 3)]
        degree: u32,
    },
    /// Runs a named property suite.
    Check {
        /// semiclassical, poisson, associativity, moyal, restriction, tangency,
        /// orbit, fuzzy, glue, weyl, intertwining.
        suite: String,
        #[arg(long)]
        algebra: Option<String>,
        #[arg(long)]
        degree: Option<u32>,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Pass,
    Fail,
    Error,
}

/// What a command produced; rendered as text or as one JSON object.
#[derive(Clone, Debug, Serialize)]
pub struct Outcome {
    pub command: String,
    pub status: Status,
    pub result: Value,
    pub witnesses: Vec<Witness>,
    #[serde(skip)]
    pub text: String,
    #[serde(skip)]
    pub exit_code: i32,
}

impl Outcome {
    fn value(command: &str, text: String, result: Value) -> Self {
        Outcome {
            command: command.into(),
            status: Status::Ok,
            result,
            witnesses: Vec::new(),
            text,
            exit_code: 0,
        }
    }

    fn checked(command: &str, passed: bool, text: String, result: Value, witnesses: Vec<Witness>) -> Self {
        Outcome {
            command: command.into(),
            status: if passed { Status::Pass } else { Status::Fail },
            result,
            witnesses,
            text,
            exit_code: if passed { 0 } else { 1 },
        }
    }

    pub fn error(command: &str, e: &Error) -> Self {
        Outcome {
            command: command.into(),
            status: Status::Error,
            result: json!({ "message": e.to_string() }),
            witnesses: Vec::new(),
            text: format!("error: {e}"),
            exit_code: exit_code(e),
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.text.clone(),
            Format::Json => serde_json::to_string_pretty(self).expect("serializable outcome"),
        }
    }
}

/// Input problems exit with 2; mathematical failures surfaced as errors with 1.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::DescentFailure(_) | Error::InvariantBreach(_) | Error::NotCentral(_) | Error::Internal(_) => 1,
        _ => 2,
    }
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Bracket { .. } => "bracket",
            Command::Star { .. } => "star",
            Command::Weyl { .. } => "weyl",
            Command::Unweyl { .. } => "unweyl",
            Command::Normalize { .. } => "normalize",
            Command::Reduce { .. } => "reduce",
            Command::Harm { .. } => "harm",
            Command::Tangential { .. } => "tangential",
            Command::Fuzzy { .. } => "fuzzy",
            Command::GlueDemo { .. } => "glue-demo",
            Command::Check { .. } => "check",
        }
    }
}

pub fn run(cli: &Cli) -> Outcome {
    let name = cli.command.name();
    dispatch(&cli.command).unwrap_or_else(|e| Outcome::error(name, &e))
}

fn algebra(args: &AlgebraArgs) -> Result<LieAlgebra> {
    resolve_algebra(args.algebra.as_deref().unwrap_or("su2"))
}

fn parse_in(src: &str, ring: &Arc<PolyRing>, params: &[String]) -> Result<Polynomial> {
    let ctx = input_context(ring, params)?;
    eval_polynomial(&parse_expression(src)?, ring, &|v| ctx.iter().any(|c| c == v))
}

/// Orbit commands always admit `r`.
fn with_radius(params: &[String]) -> Vec<String> {
    let mut out = params.to_vec();
    if !out.iter().any(|p| p == "r") {
        out.push("r".into());
    }
    out
}

fn orbit_data(alg: LieAlgebra, args: &OrbitArgs) -> Result<Arc<OrbitData>> {
    let kind = LevelKind::parse(&args.level)?;
    let radius = match &args.radius {
        Some(v) => Radius::Value(parse_rational(v)?),
        None => Radius::Symbolic,
    };
    Ok(Arc::new(OrbitData::new(Arc::new(WeylContext::new(alg)), kind, radius)?))
}

struct Built {
    product: Arc<dyn StarProduct>,
    params: Vec<String>,
}

fn build_product(alg_args: &AlgebraArgs, args: &ProductArgs) -> Result<Built> {
    let no_algebra = |what: &str| -> Result<()> {
        match &alg_args.algebra {
            Some(a) => Err(Error::Usage(format!("--product {what} does not take --algebra (got `{a}`)"))),
            None => Ok(()),
        }
    };
    let params = alg_args.params.clone();
    Ok(match args.product {
        Product::Weyl => Built {
            product: Arc::new(WeylStar::new(Arc::new(WeylContext::new(algebra(alg_args)?)))),
            params,
        },
        Product::MoyalHeis => {
            if let Some(a) = &alg_args.algebra {
                if a != "heisenberg" {
                    return Err(Error::Usage(format!("moyal-heis lives on heisenberg, not `{a}`")));
                }
            }
            Built {
                product: Arc::new(MoyalHeisenberg::new(args.order)),
                params,
            }
        }
        Product::MoyalR2n => {
            no_algebra("moyal-r2n")?;
            let coords = if args.coords.is_empty() {
                vec!["q".to_string(), "p".to_string()]
            } else {
                args.coords.clone()
            };
            if coords.len() % 2 != 0 {
                return Err(Error::Usage("moyal-r2n needs an even number of coordinates".into()));
            }
            let ring = PolyRing::with_coords(&coords)?;
            Built {
                product: Arc::new(MoyalR2n::new(ring, PoissonMatrix::symplectic(coords.len() / 2), args.order)?),
                params,
            }
        }
        Product::PsiP | Product::Quotient => {
            let orbit = orbit_data(algebra(alg_args)?, &args.orbit)?;
            let product: Arc<dyn StarProduct> = if args.product == Product::PsiP {
                Arc::new(PsiPStar::new(orbit))
            } else {
                Arc::new(QuotientStar::new(orbit))
            };
            Built {
                product,
                params: with_radius(&params),
            }
        }
        Product::Glued => {
            no_algebra("glued")?;
            let order = args.order.unwrap_or(3);
            let inst = match &args.glue {
                Some(path) => load_gluing(path)?,
                None => GluingInstance::two_chart_moyal(order),
            };
            if args.chart == 0 || args.chart > inst.charts() {
                return Err(Error::Usage(format!("chart {} is outside 1..={}", args.chart, inst.charts())));
            }
            Built {
                product: Arc::new(Arc::new(inst).glued(args.chart - 1)?),
                params,
            }
        }
    })
}

/// Word tokens separated by spaces or `*`, each a basis name.
fn parse_word(tokens: &[String], alg: &Arc<LieAlgebra>) -> Result<EnvelopingElement> {
    let uea = crate::uea::Uea::new(alg.clone());
    let mut out = uea.one();
    let mut any = false;
    for t in tokens.iter().flat_map(|t| t.split(|c: char| c.is_whitespace() || c == '*')) {
        if t.is_empty() {
            continue;
        }
        let i = alg
            .basis()
            .iter()
            .position(|b| b == t)
            .ok_or_else(|| Error::UnknownVariable(t.to_string()))?;
        out = uea.mul(&out, &uea.generator(i));
        any = true;
    }
    if !any {
        return Err(Error::Usage("empty word".into()));
    }
    Ok(out)
}

fn report_outcome(command: &str, reports: Vec<CheckReport>) -> Outcome {
    let passed = reports.iter().all(|r| r.passed);
    let text = reports.iter().map(|r| r.to_string()).collect::<Vec<_>>().join("\n");
    let witnesses = reports
        .iter()
        .flat_map(|r| r.witnesses.iter().map(move |w| Witness::new(format!("{}: {}", r.name, w.label), w.detail.clone())))
        .collect();
    let result = serde_json::to_value(&reports).expect("serializable reports");
    Outcome::checked(command, passed, text, result, witnesses)
}

fn dispatch(cmd: &Command) -> Result<Outcome> {
    let name = cmd.name();
    match cmd {
        Command::Bracket { alg, f, g } => {
            let a = algebra(alg)?;
            let f = parse_in(f, a.ring(), &alg.params)?;
            let g = parse_in(g, a.ring(), &alg.params)?;
            let b = a.kirillov_bracket(&f, &g).to_string();
            Ok(Outcome::value(name, b.clone(), json!(b)))
        }
        Command::Star { alg, product, f, g } => {
            let built = build_product(alg, product)?;
            let ring = built.product.ring().clone();
            let f = parse_in(f, &ring, &built.params)?;
            let g = parse_in(g, &ring, &built.params)?;
            let s = built.product.star(&f, &g)?.to_string();
            Ok(Outcome::value(name, s.clone(), json!(s)))
        }
        Command::Weyl { alg, f } => {
            let ctx = WeylContext::new(algebra(alg)?);
            let f = parse_in(f, ctx.ring(), &alg.params)?;
            let w = ctx.weyl_sym(&f).to_string();
            Ok(Outcome::value(name, w.clone(), json!(w)))
        }
        Command::Unweyl { alg, word } => {
            let ctx = WeylContext::new(algebra(alg)?);
            let a = parse_word(word, ctx.algebra())?;
            let f = ctx.weyl_inv(&a).to_string();
            Ok(Outcome::value(name, f.clone(), json!(f)))
        }
        Command::Normalize { alg, word } => {
            let a = Arc::new(algebra(alg)?);
            let n = parse_word(word, &a)?.to_string();
            Ok(Outcome::value(name, n.clone(), json!(n)))
        }
        Command::Reduce { alg, orbit, f } => {
            let data = orbit_data(algebra(alg)?, orbit)?;
            let f = parse_in(f, data.ring(), &with_radius(&alg.params))?;
            let class = data.class_of(&f)?;
            let element = class.to_string();
            let poly = class.to_polynomial().to_string();
            let text = format!("class: {element}\npolynomial: {poly}");
            Ok(Outcome::value(name, text, json!({ "class": element, "polynomial": poly })))
        }
        Command::Harm { alg, f } => {
            let a = algebra(alg)?;
            let f = parse_in(f, a.ring(), &alg.params)?;
            let parts = harmonic_decompose(&f)?;
            let text = parts.iter().map(|(j, g)| format!("p^{j}: {g}")).collect::<Vec<_>>().join("\n");
            let result: Vec<Value> =
                parts.iter().map(|(j, g)| json!({ "power": j, "harmonic": g.to_string() })).collect();
            Ok(Outcome::value(name, text, Value::Array(result)))
        }
        Command::Tangential {
            alg,
            product,
            ideal,
            degree,
            h_order,
        } => {
            let built = build_product(alg, product)?;
            let ring = built.product.ring().clone();
            let params = with_radius(&built.params);
            let params: Vec<String> = params.into_iter().filter(|p| ring.index_of(p).is_some()).collect();
            let gens: Vec<Polynomial> = ideal.iter().map(|g| parse_in(g, &ring, &params)).collect::<Result<_>>()?;
            let report = check_tangential(built.product.as_ref(), &gens, *degree, *h_order)?;
            Ok(report_outcome(name, vec![report]))
        }
        Command::Fuzzy { spin, h, degree } => {
            let (summary, report) = fuzzy_summary(&parse_rational(spin)?, &parse_rational(h)?, *degree)?;
            let value = serde_json::to_value(&summary).expect("serializable summary");
            let mut text = String::new();
            if let Value::Object(map) = &value {
                for (k, v) in map {
                    let v = match v {
                        Value::String(s) => s.clone(),
                        other => other.to_string(),
                    };
                    text.push_str(&format!("{k}: {v}\n"));
                }
            }
            text.push_str(&report.to_string());
            let witnesses = report.witnesses.clone();
            Ok(Outcome::checked(
                name,
                report.passed,
                text,
                json!({ "summary": value, "report": report }),
                witnesses,
            ))
        }
        Command::GlueDemo { glue, order, degree } => {
            let inst = match glue {
                Some(path) => load_gluing(path)?,
                None => GluingInstance::two_chart_moyal(*order),
            };
            let inst = Arc::new(inst.with_test_degree(*degree));
            Ok(report_outcome(name, glue_reports(&inst, *degree)?))
        }
        Command::Check { suite, algebra, degree } => {
            let alg = algebra.as_deref().map(resolve_algebra).transpose()?;
            let report = run_suite(suite, alg.as_ref(), *degree)?;
            let witnesses = report.witnesses();
            let result = serde_json::to_value(&report).expect("serializable suite");
            Ok(Outcome::checked(name, report.passed, report.to_string(), result, witnesses))
        }
    }
}
