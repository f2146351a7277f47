mod desc;
mod verify;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use orderlab::expr::parse_element;
use orderlab::factor::{davenport, AbelianGroup, Factorizer};
use orderlab::props::property_report;
use orderlab::pseries::{association_obstruction, hfd_violation_witness, irreducibility_cert_deg1, Deg1Verdict};
use orderlab::{Error, Field};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "order-lab", version, about = "Non-maximal orders in number fields: predicates, factorization, power-series certificates")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone, Copy)]
struct Format {
    /// Canonical JSON (the default)
    #[arg(long, conflicts_with = "table")]
    json: bool,
    /// One `path: value` line per leaf
    #[arg(long)]
    table: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Assoc,
    Irred,
    HfdWitness,
}

#[derive(Subcommand)]
enum Cmd {
    /// Associated, ideal-preserving and locally associated verdicts for an order
    Props {
        field: PathBuf,
        #[arg(long)]
        order: String,
        #[command(flatten)]
        format: Format,
    },
    /// Irreducibility, divisors and length set of an element of an order
    Factor {
        field: PathBuf,
        #[arg(long)]
        order: String,
        #[arg(long)]
        element: String,
        /// Longest factorization searched for the length set
        #[arg(long, default_value_t = 12)]
        bound: u32,
        #[command(flatten)]
        format: Format,
    },
    /// Davenport constant of Z/n1 ⊕ ... ⊕ Z/nk
    Davenport {
        #[arg(required = true)]
        factors: Vec<u64>,
    },
    /// Truncated power-series certificates
    PseriesCert {
        field: PathBuf,
        #[arg(long)]
        order: String,
        /// Coefficients c0; c1; ...
        #[arg(long)]
        series: String,
        #[arg(long, value_enum)]
        mode: Mode,
        /// Truncation degree for assoc (defaults to the series degree)
        #[arg(long)]
        trunc: Option<usize>,
        /// hfd-witness: the cofactor g with f = g·(a+bx)
        #[arg(long)]
        cofactor: Option<String>,
        /// hfd-witness: the linear factor as "a; b"
        #[arg(long)]
        linear: Option<String>,
        /// hfd-witness: the ideal J, "g1, g2 ^e"
        #[arg(long)]
        ideal: Option<String>,
        #[command(flatten)]
        format: Format,
    },
    /// Run every golden computation and compare with the stored values
    VerifyPaper {
        /// Directory holding the field files
        #[arg(long)]
        fields_dir: Option<PathBuf>,
        /// Run only the named case (repeatable)
        #[arg(long)]
        only: Vec<String>,
        /// Golden file overriding the built-in one
        #[arg(long)]
        golden: Option<PathBuf>,
        /// Norm bound of the HFD evidence sweep
        #[arg(long, default_value_t = 1000)]
        bound: u64,
        #[command(flatten)]
        format: Format,
    },
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Unsupported(_) | Error::Guard { .. } | Error::Inconclusive(_) => 2,
        Error::Invariant(_) => 4,
        _ => 3,
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<String>) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                let p = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&p, x, out);
            }
        }
        Value::Array(a) if a.iter().any(|x| x.is_object() || x.is_array()) => {
            for (i, x) in a.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), x, out);
            }
        }
        _ => out.push(format!("{prefix}: {v}")),
    }
}

fn emit(v: &Value, format: Format) {
    if format.table {
        let mut lines = Vec::new();
        flatten("", v, &mut lines);
        for l in lines {
            println!("{l}");
        }
    } else {
        // serde_json maps are BTreeMaps, so keys come out sorted
        println!("{}", serde_json::to_string_pretty(v).expect("json values serialize"));
    }
}

fn props(field: &Path, order: &str, format: Format) -> orderlab::Result<u8> {
    let k = Field::from_path(field)?;
    let r = desc::parse_order(&k, order)?;
    let mut v = property_report(&r)?.to_json();
    v["order"] = json!(order);
    v["field"] = json!(k.label());
    emit(&v, format);
    Ok(0)
}

fn factor(field: &Path, order: &str, element: &str, bound: u32, format: Format) -> orderlab::Result<u8> {
    let k = Field::from_path(field)?;
    let r = desc::parse_order(&k, order)?;
    let x = parse_element(&k, element)?;
    let fz = Factorizer::new(&r)?;
    let irr = fz.is_irreducible(&x)?;
    let divisors = fz.divisors(&x)?;
    let ls = fz.length_set(&x, bound)?;
    let v = json!({
        "field": k.label(),
        "order": order,
        "element": x.to_string(),
        "irreducible": irr.irreducible,
        "split": irr.witness.map(|(d, c)| vec![d.to_string(), c.to_string()]),
        "divisors": divisors.iter().map(|(d, c)| vec![d.to_string(), c.to_string()]).collect::<Vec<_>>(),
        "length_set": ls.to_json(),
    });
    emit(&v, format);
    Ok(if ls.truncated { 2 } else { 0 })
}

#[allow(clippy::too_many_arguments)]
fn pseries_cert(
    field: &Path,
    order: &str,
    series: &str,
    mode: Mode,
    trunc: Option<usize>,
    cofactor: Option<&str>,
    linear: Option<&str>,
    ideal: Option<&str>,
    format: Format,
) -> orderlab::Result<u8> {
    let k = Field::from_path(field)?;
    let r = desc::parse_order(&k, order)?;
    let f = desc::parse_series(&k, series)?;
    let (v, code) = match mode {
        Mode::Assoc => {
            let d = trunc.unwrap_or(f.trunc_degree());
            (association_obstruction(&f, &r, d)?.to_json(), 0)
        }
        Mode::Irred => {
            let cert = irreducibility_cert_deg1(&f, &r)?;
            let code = if cert.verdict == Deg1Verdict::Irreducible { 0 } else { 2 };
            (cert.to_json(), code)
        }
        Mode::HfdWitness => {
            fn need<'a>(o: Option<&'a str>, flag: &str) -> orderlab::Result<&'a str> {
                o.ok_or_else(|| Error::Input(format!("hfd-witness needs --{flag}")))
            }
            let g = desc::parse_series(&k, need(cofactor, "cofactor")?)?;
            let lin = desc::parse_series(&k, need(linear, "linear")?)?;
            if lin.trunc_degree() != 1 {
                return Err(Error::Input("--linear takes exactly two coefficients \"a; b\"".into()));
            }
            let j = desc::parse_ideal(&k, need(ideal, "ideal")?)?;
            let w = hfd_violation_witness(&f, &g, lin.coeff(0), lin.coeff(1), &j, &r)?;
            (w.to_json(), if w.holds() { 0 } else { 1 })
        }
    };
    emit(&v, format);
    Ok(code)
}

fn default_fields_dir() -> PathBuf {
    let local = PathBuf::from("fields");
    if local.join(verify::FIELD_FILES[0]).exists() {
        return local;
    }
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fields")
}

fn verify_paper(
    fields_dir: Option<PathBuf>,
    only: &[String],
    golden: Option<PathBuf>,
    bound: u64,
    format: Format,
) -> orderlab::Result<u8> {
    let golden_text = match golden {
        Some(p) => std::fs::read_to_string(&p).map_err(|e| Error::Input(format!("{}: {e}", p.display())))?,
        None => verify::GOLDEN.to_string(),
    };
    let golden = verify::parse_golden(&golden_text)?;
    let ctx = verify::Ctx::load(&fields_dir.unwrap_or_else(default_fields_dir), bound)?;
    let suite = verify::run(&ctx, &golden, only)?;
    for c in suite.cases.iter().filter(|c| !c.pass) {
        eprintln!("case {} failed", c.name);
        eprintln!("  expected: {}", c.expected);
        eprintln!("  computed: {}", c.computed);
    }
    emit(&suite.to_json(), format);
    let errored: Vec<u8> = suite.cases.iter().filter_map(|c| c.error.as_ref().map(exit_code)).collect();
    Ok(if errored.contains(&4) {
        4
    } else if suite.cases.iter().any(|c| !c.pass && c.error.is_none()) {
        1
    } else {
        errored.into_iter().max().unwrap_or(0)
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let res = match cli.cmd {
        Cmd::Props { field, order, format } => props(&field, &order, format),
        Cmd::Factor { field, order, element, bound, format } => factor(&field, &order, &element, bound, format),
        Cmd::Davenport { factors } => AbelianGroup::new(&factors).and_then(|g| davenport(&g)).map(|d| {
            println!("{d}");
            0
        }),
        Cmd::PseriesCert { field, order, series, mode, trunc, cofactor, linear, ideal, format } => pseries_cert(
            &field,
            &order,
            &series,
            mode,
            trunc,
            cofactor.as_deref(),
            linear.as_deref(),
            ideal.as_deref(),
            format,
        ),
        Cmd::VerifyPaper { fields_dir, only, golden, bound, format } => verify_paper(fields_dir, &only, golden, bound, format),
    };
    match res {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
