//! Command-line front end. Exit codes: 0 success, 1 a check failed, 2 usage
//! or input error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write as _;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::checks::{self, CheckReport};
use crate::commpoly::nowicki_generators;
use crate::constants::{algebra_generators, module_generators, straighten, ModuleGen};
use crate::error::{Error, Result};
use crate::exprio::{self, parse_constgen_product, AlgebraKind, AnyElement};
use crate::grassmann::{grass_derive, grassmann_generators_with, ZRange};
use crate::kernel::{
    kernel_by_degree, module_span_check, span_check, Commutative, Graded, Grassmann, Metabelian, SpanMode,
    SpanReport, UvPolynomial, WreathModule,
};
use crate::metabelian::meta_derive;
use crate::wreath::{embed, is_commutator_image, module_derive, wreath_derive, WreathElement};

#[derive(Debug, Parser, Serialize)]
#[command(name = "nowicki", version, about = "Constants of Weitzenboeck derivations, computed exactly")]
struct Cli {
    #[command(flatten)]
    out: OutputArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args, Serialize)]
struct OutputArgs {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<std::path::PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Algebra {
    Comm,
    Uv,
    Meta,
    Grass,
    Wreath,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum ZIndices {
    /// i <= j <= k <= l
    Printed,
    /// i <= j and k <= l
    Relaxed,
}

impl From<ZIndices> for ZRange {
    fn from(z: ZIndices) -> Self {
        match z {
            ZIndices::Printed => ZRange::Printed,
            ZIndices::Relaxed => ZRange::Relaxed,
        }
    }
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "lowercase")]
enum Command {
    /// Basis of the constants in every component of one total degree.
    Kernel {
        #[arg(long, value_enum)]
        algebra: Algebra,
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u64).range(1..))]
        d: u64,
        #[arg(long)]
        degree: u32,
    },
    /// Run a family of checks.
    Verify {
        #[command(subcommand)]
        what: Verify,
    },
    /// Compare kernels with the span of the generators, component by component.
    Span {
        #[arg(long, value_enum)]
        algebra: Algebra,
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u64).range(1..))]
        d: u64,
        #[arg(long, default_value_t = 5)]
        max_degree: u32,
        /// Metabelian only: certify the whole algebra instead of the commutator ideal.
        #[arg(long)]
        whole: bool,
        /// Grassmann only: index set of z_ijkl.
        #[arg(long, value_enum, default_value_t = ZIndices::Printed)]
        z_range: ZIndices,
    },
    /// Rewrite a product of constant generators in the canonical basis.
    Straighten {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        d: u64,
        /// For example "alpha(1,3)*alpha(2,4)".
        expression: String,
    },
    /// Normal form and derivative of an element.
    Normalize {
        #[arg(long, value_enum)]
        algebra: Algebra,
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u64).range(1..))]
        d: u64,
        expression: String,
    },
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Verify {
    /// Residuals of the relations among constant generators.
    Relations {
        #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u64).range(1..))]
        d: u64,
    },
    /// Every listed generator is a constant (and, for the metabelian and
    /// wreath cases, an image of its preimage).
    Generators {
        #[arg(long, value_enum)]
        algebra: Algebra,
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u64).range(1..))]
        d: u64,
        #[arg(long, value_enum, default_value_t = ZIndices::Printed)]
        z_range: ZIndices,
    },
    /// Homomorphism, injectivity and image criterion of the wreath embedding.
    Embedding {
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u64).range(1..))]
        d: u64,
        #[arg(long, default_value_t = 4)]
        degree: u32,
        #[arg(long, default_value_t = 200)]
        pairs: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Randomized identity suites.
    Identities {
        #[arg(long, default_value_t = 1000)]
        cases: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Canonical basis counts against kernel dimensions in K[U,V].
    Canonical {
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u64).range(1..))]
        d: u64,
        #[arg(long, default_value_t = 5)]
        degree: u32,
    },
    /// Kernels of the evaluations phi_alpha against left ideals.
    Evaluations {
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u64).range(2..))]
        d: u64,
        #[arg(long, default_value_t = 4)]
        degree: u32,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Text and JSON round trips of random elements.
    RoundTrips {
        #[arg(long, default_value_t = 1000)]
        cases: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// All ten checks at their default bounds.
    All {
        #[arg(long, default_value_t = 1000)]
        cases: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

/// Rendered output plus whether every check passed.
struct Outcome {
    text: String,
    results: Value,
    ok: bool,
}

fn kind(a: Algebra) -> AlgebraKind {
    match a {
        Algebra::Comm => AlgebraKind::Comm,
        Algebra::Uv => AlgebraKind::Uv,
        Algebra::Meta => AlgebraKind::Meta,
        Algebra::Grass => AlgebraKind::Grass,
        Algebra::Wreath => AlgebraKind::Wreath,
    }
}

fn rank(d: u64) -> Result<usize> {
    usize::try_from(d).map_err(|_| Error::InvalidArgument(format!("d={d} is too large")))
}

fn kernel_of<A: Graded>(alg: &A, degree: u32, wrap: impl Fn(&A::Elem) -> AnyElement) -> Result<Outcome> {
    let mut text = String::new();
    let mut results = Vec::new();
    let mut total = 0;
    for (c, basis) in kernel_by_degree(alg, degree)? {
        total += basis.len();
        let _ = writeln!(text, "{c} dim {}", basis.len());
        let rendered: Vec<String> = basis.iter().map(|e| alg.render(e)).collect();
        for r in &rendered {
            let _ = writeln!(text, "  {r}");
        }
        results.push(json!({
            "component": c,
            "dimension": basis.len(),
            "basis": rendered,
            "elements": basis.iter().map(|e| exprio::to_json_value(&wrap(e))).collect::<Vec<_>>(),
        }));
    }
    let _ = writeln!(text, "total dimension {total}");
    Ok(Outcome {
        text,
        results: Value::Array(results),
        ok: true,
    })
}

fn cmd_kernel(algebra: Algebra, d: usize, degree: u32) -> Result<Outcome> {
    match algebra {
        Algebra::Comm => kernel_of(&Commutative { d }, degree, |e| AnyElement::Comm(e.clone())),
        Algebra::Uv => kernel_of(&UvPolynomial { d }, degree, |e| AnyElement::Uv(e.clone())),
        Algebra::Meta => kernel_of(&Metabelian::full(d), degree, |e| AnyElement::Meta(e.clone())),
        Algebra::Grass => kernel_of(&Grassmann { d }, degree, |e| AnyElement::Grass(e.clone())),
        Algebra::Wreath => kernel_of(&WreathModule { d }, degree, |e| {
            AnyElement::Wreath(WreathElement::from_module(e.clone()))
        }),
    }
}

fn span_outcome(reports: &[SpanReport]) -> Outcome {
    let mut text = String::new();
    let _ = writeln!(text, "{:<24} {:>6} {:>6}  status", "component", "kernel", "span");
    for r in reports {
        let status = if r.verified() { "ok" } else { "MISSING" };
        let _ = writeln!(
            text,
            "{:<24} {:>6} {:>6}  {status}",
            r.component.to_string(),
            r.kernel_dim,
            r.span_dim
        );
        for w in &r.missing_witnesses {
            let _ = writeln!(text, "    missing: {w}");
        }
    }
    let bad = reports.iter().filter(|r| !r.verified()).count();
    let _ = writeln!(text, "{} components, {bad} with kernel != span", reports.len());
    Outcome {
        text,
        results: serde_json::to_value(reports).expect("reports serialize"),
        ok: bad == 0,
    }
}

fn labeled<E: Clone>(items: impl IntoIterator<Item = (String, E)>) -> Vec<(String, E)> {
    items.into_iter().collect()
}

fn cmd_span(algebra: Algebra, d: usize, max_degree: u32, whole: bool, z: ZIndices) -> Result<Outcome> {
    let reports = match algebra {
        Algebra::Comm => {
            let gens = labeled(nowicki_generators(d).into_iter().map(|g| (g.render(), g)));
            span_check(&Commutative { d }, &gens, max_degree, SpanMode::Products)?
        }
        Algebra::Meta if whole => checks::metabelian_span_reports(d, max_degree)?.1,
        Algebra::Meta => {
            let gens = labeled(crate::constants::IdealGen::all(d).into_iter().map(|g| (g.to_string(), g.element(d))));
            module_span_check(d, &gens, max_degree)?
        }
        Algebra::Grass => {
            let gens = labeled(grassmann_generators_with(d, z.into()).into_iter().map(|(g, e)| (g.to_string(), e)));
            span_check(&Grassmann { d }, &gens, max_degree, SpanMode::Products)?
        }
        Algebra::Uv | Algebra::Wreath => {
            return Err(Error::InvalidArgument(
                "span supports --algebra comm, meta or grass".into(),
            ))
        }
    };
    Ok(span_outcome(&reports))
}

fn check_outcome(reports: Vec<CheckReport>) -> Outcome {
    let mut text = String::new();
    for r in &reports {
        let _ = writeln!(text, "[{}] {} {}", checks::verdict(r.passed), r.id, r.name);
        for l in &r.details {
            let _ = writeln!(text, "    {l}");
        }
    }
    Outcome {
        ok: reports.iter().all(|r| r.passed),
        results: serde_json::to_value(&reports).expect("reports serialize"),
        text,
    }
}

fn generator_lines(algebra: Algebra, d: usize, z: ZIndices) -> Result<Vec<(String, bool, String)>> {
    let mut out = Vec::new();
    match algebra {
        Algebra::Comm => {
            for g in nowicki_generators(d) {
                let dg = g.weitz_derive()?;
                out.push((g.render(), dg.is_zero(), dg.render()));
            }
        }
        Algebra::Uv => {
            for g in crate::constants::ConstGen::all(d) {
                let dg = g.expand(d)?.weitz_derive()?;
                out.push((g.to_string(), dg.is_zero(), dg.render()));
            }
        }
        Algebra::Meta => {
            for g in algebra_generators(d) {
                let dg = meta_derive(&g);
                out.push((g.render(), dg.is_zero(), dg.render()));
            }
            for (g, m, pre) in module_generators(d) {
                let img = embed(&pre)?;
                let ok = img.poly.is_zero() && img.module == m && is_commutator_image(&m);
                out.push((format!("{g} is the image of {}", pre.render()), ok, "-".into()));
            }
        }
        Algebra::Grass => {
            for (g, e) in grassmann_generators_with(d, z.into()) {
                let dg = grass_derive(&e);
                out.push((format!("{g} = {e}"), dg.is_zero(), dg.render()));
            }
        }
        Algebra::Wreath => {
            let mut gens: Vec<ModuleGen> = (1..=d).map(ModuleGen::A).collect();
            for p in 1..=d {
                for q in 1..=d {
                    gens.push(ModuleGen::W(p, q));
                }
            }
            for g in gens {
                let dg = module_derive(&g.expand(d)?);
                out.push((format!("{g} = {}", g.expand(d)?), dg.is_zero(), dg.render()));
            }
            for (g, m, _) in module_generators(d) {
                let dg = module_derive(&m);
                out.push((format!("{g} = {m}"), dg.is_zero(), dg.render()));
            }
        }
    }
    Ok(out)
}

fn cmd_generators(algebra: Algebra, d: usize, z: ZIndices) -> Result<Outcome> {
    let lines = generator_lines(algebra, d, z)?;
    let mut text = String::new();
    for (name, ok, derivative) in &lines {
        let _ = writeln!(text, "[{}] {name}", checks::verdict(*ok));
        if !ok {
            let _ = writeln!(text, "    derivative: {derivative}");
        }
    }
    let bad = lines.iter().filter(|l| !l.1).count();
    let _ = writeln!(text, "{} generators, {bad} failed", lines.len());
    let results = lines
        .iter()
        .map(|(name, ok, derivative)| json!({"generator": name, "passed": ok, "derivative": derivative}))
        .collect();
    Ok(Outcome {
        text,
        results: Value::Array(results),
        ok: bad == 0,
    })
}

fn cmd_straighten(d: usize, expression: &str) -> Result<Outcome> {
    let product = parse_constgen_product(expression, d)?;
    let combo = straighten(&product, d)?;
    let rendered = crate::lincomb::render_terms(combo.iter().map(|(m, c)| (c.clone(), m.to_string())));
    let terms: Vec<Value> = combo
        .iter()
        .map(|(m, c)| json!({"coeff": c.to_string(), "monomial": m.to_string()}))
        .collect();
    Ok(Outcome {
        text: format!("{rendered}\n"),
        results: json!([{"input": expression, "canonical": rendered, "terms": terms}]),
        ok: true,
    })
}

fn cmd_normalize(algebra: Algebra, d: usize, expression: &str) -> Result<Outcome> {
    let e = exprio::parse(expression, kind(algebra), d)?;
    let de = match &e {
        AnyElement::Comm(p) => AnyElement::Comm(p.weitz_derive()?),
        AnyElement::Uv(p) => AnyElement::Uv(p.weitz_derive()?),
        AnyElement::Meta(f) => AnyElement::Meta(meta_derive(f)),
        AnyElement::Grass(f) => AnyElement::Grass(grass_derive(f)),
        AnyElement::Wreath(w) => AnyElement::Wreath(wreath_derive(w)),
    };
    Ok(Outcome {
        text: format!("{}\nderivative: {}\n", e.render(), de.render()),
        results: json!([{
            "element": exprio::to_json_value(&e),
            "text": e.render(),
            "derivative": exprio::to_json_value(&de),
        }]),
        ok: true,
    })
}

fn dispatch(cmd: &Command) -> Result<Outcome> {
    match *cmd {
        Command::Kernel { algebra, d, degree } => cmd_kernel(algebra, rank(d)?, degree),
        Command::Span {
            algebra,
            d,
            max_degree,
            whole,
            z_range,
        } => cmd_span(algebra, rank(d)?, max_degree, whole, z_range),
        Command::Straighten { d, ref expression } => cmd_straighten(rank(d)?, expression),
        Command::Normalize {
            algebra,
            d,
            ref expression,
        } => cmd_normalize(algebra, rank(d)?, expression),
        Command::Verify { ref what } => match *what {
            Verify::Relations { d } => Ok(check_outcome(vec![checks::relations(rank(d)?)?])),
            Verify::Generators { algebra, d, z_range } => cmd_generators(algebra, rank(d)?, z_range),
            Verify::Embedding { d, degree, pairs, seed } => {
                Ok(check_outcome(vec![checks::embedding(rank(d)?, degree, pairs, seed)?]))
            }
            Verify::Identities { cases, seed } => Ok(check_outcome(vec![checks::identities(cases, seed)?])),
            Verify::Canonical { d, degree } => {
                Ok(check_outcome(vec![checks::canonical_basis_check(&[(rank(d)?, degree)])?]))
            }
            Verify::Evaluations { d, degree, seed } => {
                Ok(check_outcome(vec![checks::ideal_lemmas(rank(d)?, degree, seed)?]))
            }
            Verify::RoundTrips { cases, seed } => Ok(check_outcome(vec![checks::round_trips(cases, seed)?])),
            Verify::All { cases, seed } => Ok(check_outcome(checks::all(checks::Config { seed, cases })?)),
        },
    }
}

/// Splits the serialized subcommand into its name and its parameters, e.g.
/// `{"verify":{"what":{"relations":{"d":4}}}}` gives `verify relations` and `{"d":4}`.
fn command_config(cmd: &Command) -> (String, Value) {
    let mut v = serde_json::to_value(cmd).expect("config serializes");
    let mut words = Vec::new();
    loop {
        match v {
            Value::Object(ref mut o) if o.len() == 1 && o.values().all(Value::is_object) => {
                let (k, inner) = o.iter_mut().next().map(|(k, v)| (k.clone(), v.take())).expect("one key");
                if k != "what" {
                    words.push(k);
                }
                v = inner;
            }
            Value::String(s) => {
                words.push(s);
                v = json!({});
            }
            _ => break,
        }
    }
    (words.join(" "), v)
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let outcome = match dispatch(&cli.command) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return if matches!(e, Error::Internal(_)) { 1 } else { 2 };
        }
    };
    let body = match cli.out.format {
        Format::Text => outcome.text,
        Format::Json => {
            let (command, config) = command_config(&cli.command);
            let envelope = json!({
                "command": command,
                "config": config,
                "results": outcome.results,
            });
            format!("{}\n", serde_json::to_string_pretty(&envelope).expect("envelope serializes"))
        }
    };
    let written = match &cli.out.output {
        Some(path) => std::fs::write(path, &body),
        None => std::io::stdout().write_all(body.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write output: {e}");
        return 2;
    }
    if outcome.ok {
        0
    } else {
        1
    }
}
