//! JSON input files.
//!
//! ```json
//! {
//!   "n": 3, "m": 2,
//!   "parameter_names": ["lambda_1", "lambda_2"],
//!   "L": [[[0,1,0],[-1,0,0],[0,0,0]], [[0,0,1],[0,0,0],[-1,0,0]]],
//!   "mu": [1, "alpha"],
//!   "f": ["linear", "linear"],
//!   "toric": {"d": 2, "degrees": [[1,0,1],[0,1,1]], "L": [[[0,1],[-1,0]]]}
//! }
//! ```
//!
//! Exactly one of `L`, `r` (a single uniparameter matrix) or `sigma` (exponent
//! matrices of `σ = c²`) is required. A `mu` entry is an integer, a `"p/q"`
//! string, `"symbolic"` (the indeterminate `mu_k`), or any other name.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{Map, Value};

use crate::bichar::{default_parameter_names, Bicharacter};
use crate::limit::{Deformation, FChoice};
use crate::poly::{format_rational, Poly, Var};
use crate::toric::GradingData;

/// Parse or validation failure, located by line and field when possible.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InputError {
    pub message: String,
    pub field: Option<String>,
    pub line: Option<usize>,
    pub column: Option<usize>,
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "input error")?;
        if let Some(l) = self.line {
            write!(f, " at line {l}")?;
            if let Some(c) = self.column {
                write!(f, ", column {c}")?;
            }
        }
        if let Some(field) = &self.field {
            write!(f, " in field `{field}`")?;
        }
        write!(f, ": {}", self.message)
    }
}

impl std::error::Error for InputError {}

/// Where the exponent matrices come from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MatrixSource {
    /// `c(ε_i, ε_j) = Π λ_k^{L_k[i][j]}`.
    Exponents(Vec<Vec<Vec<i64>>>),
    /// One parameter `q` with `c(ε_i, ε_j) = q^{r_ij}`.
    Uniparameter(Vec<Vec<i64>>),
    /// Exponent matrices of `σ`.
    Sigma(Vec<Vec<Vec<i64>>>),
}

/// A `mu` entry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MuEntry {
    Rational(BigRational),
    /// The indeterminate `mu_k` itself.
    Symbolic,
    Named(String),
}

impl MuEntry {
    pub fn to_poly(&self, k: usize) -> Poly {
        match self {
            MuEntry::Rational(r) => Poly::constant(r.clone()),
            MuEntry::Symbolic => Poly::var(Var::Mu(k)),
            MuEntry::Named(s) => Poly::var(Var::named(s)),
        }
    }

    pub fn render(&self, k: usize) -> String {
        match self {
            MuEntry::Rational(r) => format_rational(r),
            MuEntry::Symbolic => Var::Mu(k).to_string(),
            MuEntry::Named(s) => s.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ToricSpec {
    pub d: usize,
    pub degrees: Vec<Vec<i64>>,
    pub l: Vec<Vec<Vec<i64>>>,
}

/// Validated contents of an input file.
#[derive(Clone, Debug)]
pub struct InputSpec {
    pub n: usize,
    pub m: usize,
    pub parameter_names: Vec<String>,
    pub source: MatrixSource,
    pub mu: Option<Vec<MuEntry>>,
    pub f: Option<Vec<FChoice>>,
    pub toric: Option<ToricSpec>,
    bichar: Bicharacter,
}

struct Ctx<'a> {
    text: &'a str,
}

impl Ctx<'_> {
    fn err(&self, field: &str, message: impl Into<String>) -> InputError {
        let key = field.rsplit('.').next().unwrap_or(field);
        let key = key.split('[').next().unwrap_or(key);
        let line = self
            .text
            .find(&format!("\"{key}\""))
            .map(|pos| self.text[..pos].matches('\n').count() + 1);
        InputError {
            message: message.into(),
            field: Some(field.to_string()),
            line,
            column: None,
        }
    }

    fn usize_field(&self, obj: &Map<String, Value>, key: &str, path: &str) -> Result<Option<usize>, InputError> {
        match obj.get(key) {
            None => Ok(None),
            Some(v) => v
                .as_u64()
                .map(|x| Some(x as usize))
                .ok_or_else(|| self.err(path, "expected a nonnegative integer")),
        }
    }

    fn int_matrix(&self, v: &Value, path: &str) -> Result<Vec<Vec<i64>>, InputError> {
        let rows = v
            .as_array()
            .ok_or_else(|| self.err(path, "expected a matrix given as a list of rows"))?;
        rows.iter()
            .enumerate()
            .map(|(i, row)| {
                let row = row
                    .as_array()
                    .ok_or_else(|| self.err(&format!("{path}[{i}]"), "expected a list of integers"))?;
                row.iter()
                    .enumerate()
                    .map(|(j, x)| {
                        x.as_i64()
                            .ok_or_else(|| self.err(&format!("{path}[{i}][{j}]"), "expected an integer"))
                    })
                    .collect()
            })
            .collect()
    }

    fn matrix_list(&self, v: &Value, path: &str) -> Result<Vec<Vec<Vec<i64>>>, InputError> {
        let list = v
            .as_array()
            .ok_or_else(|| self.err(path, "expected a list of matrices"))?;
        list.iter()
            .enumerate()
            .map(|(k, m)| self.int_matrix(m, &format!("{path}[{k}]")))
            .collect()
    }
}

/// Rational from a JSON number or a `"p/q"` string.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q == BigInt::from(0) {
                return None;
            }
            Some(BigRational::new(p, q))
        }
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    chars.next().is_some_and(|c| c.is_alphabetic() || c == '_')
        && chars.all(|c| c.is_alphanumeric() || c == '_')
}

const KNOWN_KEYS: [&str; 9] = ["n", "m", "parameter_names", "L", "r", "sigma", "mu", "f", "toric"];

/// Parses and validates an input file.
pub fn parse_spec(text: &str) -> Result<InputSpec, InputError> {
    let ctx = Ctx { text };
    if text.trim().is_empty() {
        return Err(InputError {
            message: "syntax error: empty input".into(),
            field: None,
            line: Some(1),
            column: Some(1),
        });
    }
    let value: Value = serde_json::from_str(text).map_err(|e| InputError {
        message: format!("syntax error: {e}"),
        field: None,
        line: Some(e.line()),
        column: Some(e.column()),
    })?;
    let obj = value.as_object().ok_or_else(|| InputError {
        message: "syntax error: top level must be an object".into(),
        field: None,
        line: Some(1),
        column: Some(1),
    })?;
    if let Some(k) = obj.keys().find(|k| !KNOWN_KEYS.contains(&k.as_str())) {
        return Err(ctx.err(k, format!("unknown field `{k}`")));
    }

    let present: Vec<&str> = ["L", "r", "sigma"].into_iter().filter(|k| obj.contains_key(*k)).collect();
    if present.len() > 1 {
        return Err(ctx.err(
            present[1],
            format!("fields {} are mutually exclusive", present.join(", ")),
        ));
    }
    let source = match present.first() {
        None => return Err(ctx.err("L", "one of `L`, `r` or `sigma` is required")),
        Some(&"L") => MatrixSource::Exponents(ctx.matrix_list(&obj["L"], "L")?),
        Some(&"r") => MatrixSource::Uniparameter(ctx.int_matrix(&obj["r"], "r")?),
        Some(_) => MatrixSource::Sigma(ctx.matrix_list(&obj["sigma"], "sigma")?),
    };

    let inferred_m = match &source {
        MatrixSource::Exponents(l) | MatrixSource::Sigma(l) => l.len(),
        MatrixSource::Uniparameter(_) => 1,
    };
    let inferred_n = match &source {
        MatrixSource::Exponents(l) | MatrixSource::Sigma(l) => l.first().map(Vec::len),
        MatrixSource::Uniparameter(r) => Some(r.len()),
    };
    let n = match (ctx.usize_field(obj, "n", "n")?, inferred_n) {
        (Some(n), _) => n,
        (None, Some(n)) => n,
        (None, None) => return Err(ctx.err("n", "`n` is required when no matrices are given")),
    };
    let m = ctx.usize_field(obj, "m", "m")?.unwrap_or(inferred_m);
    if m != inferred_m {
        return Err(ctx.err("m", format!("m = {m} but {inferred_m} exponent matrices were given")));
    }

    let parameter_names = match obj.get("parameter_names") {
        None => match source {
            MatrixSource::Uniparameter(_) => vec!["q".to_string()],
            _ => default_parameter_names(m),
        },
        Some(v) => {
            let list = v
                .as_array()
                .ok_or_else(|| ctx.err("parameter_names", "expected a list of names"))?;
            let names: Vec<String> = list
                .iter()
                .map(|x| x.as_str().map(str::to_string))
                .collect::<Option<_>>()
                .ok_or_else(|| ctx.err("parameter_names", "names must be strings"))?;
            if names.len() != m {
                return Err(ctx.err("parameter_names", format!("expected {m} names, got {}", names.len())));
            }
            names
        }
    };

    let bichar = match &source {
        MatrixSource::Exponents(l) => Bicharacter::with_names(l.clone(), n, parameter_names.clone()),
        MatrixSource::Uniparameter(r) => {
            if r.len() != n {
                return Err(ctx.err("r", format!("expected an {n}x{n} matrix")));
            }
            Bicharacter::from_uniparameter(r.clone())
                .and_then(|b| Bicharacter::with_names(b.matrices().to_vec(), n, parameter_names.clone()))
        }
        MatrixSource::Sigma(s) => Bicharacter::from_sigma_exponents(s.clone(), n, parameter_names.clone()),
    }
    .map_err(|e| ctx.err(present[0], e.to_string()))?;

    let mu = match obj.get("mu") {
        None => None,
        Some(v) => {
            let list = v.as_array().ok_or_else(|| ctx.err("mu", "expected a list"))?;
            if list.len() != m {
                return Err(ctx.err("mu", format!("expected {m} entries, got {}", list.len())));
            }
            let entries = list
                .iter()
                .enumerate()
                .map(|(k, x)| parse_mu(&ctx, x, k))
                .collect::<Result<Vec<_>, _>>()?;
            Some(entries)
        }
    };

    let f = match obj.get("f") {
        None => None,
        Some(v) => {
            let list = v.as_array().ok_or_else(|| ctx.err("f", "expected a list"))?;
            if list.len() != m {
                return Err(ctx.err("f", format!("expected {m} entries, got {}", list.len())));
            }
            let choices = list
                .iter()
                .enumerate()
                .map(|(k, x)| parse_f(&ctx, x, k))
                .collect::<Result<Vec<_>, _>>()?;
            Some(choices)
        }
    };

    let toric = match obj.get("toric") {
        None => None,
        Some(v) => Some(parse_toric(&ctx, v, m)?),
    };

    let spec = InputSpec {
        n,
        m,
        parameter_names,
        source,
        mu,
        f,
        toric,
        bichar,
    };
    if let Some(t) = &spec.toric {
        spec.grading_from(t).map_err(|e| ctx.err("toric", e.to_string()))?;
    }
    Ok(spec)
}

fn parse_mu(ctx: &Ctx, v: &Value, k: usize) -> Result<MuEntry, InputError> {
    let path = format!("mu[{k}]");
    if let Some(i) = v.as_i64() {
        return Ok(MuEntry::Rational(BigRational::from_integer(i.into())));
    }
    let s = v
        .as_str()
        .ok_or_else(|| ctx.err(&path, "expected an integer, a \"p/q\" string, \"symbolic\" or a name"))?;
    if s == "symbolic" {
        return Ok(MuEntry::Symbolic);
    }
    if let Some(r) = parse_rational(s) {
        return Ok(MuEntry::Rational(r));
    }
    if is_identifier(s) {
        return Ok(MuEntry::Named(s.to_string()));
    }
    Err(ctx.err(&path, format!("cannot read `{s}` as a rational or a symbol name")))
}

fn parse_f(ctx: &Ctx, v: &Value, k: usize) -> Result<FChoice, InputError> {
    let path = format!("f[{k}]");
    match v {
        Value::String(s) if s == "quadratic" => Ok(FChoice::Quadratic),
        Value::String(s) if s == "linear" => Ok(FChoice::Linear),
        Value::Object(o) if o.len() == 1 && o.contains_key("power") => o["power"]
            .as_u64()
            .filter(|&p| p >= 1 && p <= u32::MAX as u64)
            .map(|p| FChoice::Power(p as u32))
            .ok_or_else(|| ctx.err(&path, "power must be a positive integer")),
        _ => Err(ctx.err(&path, "expected \"quadratic\", \"linear\" or {\"power\": p}")),
    }
}

fn parse_toric(ctx: &Ctx, v: &Value, m: usize) -> Result<ToricSpec, InputError> {
    let obj = v.as_object().ok_or_else(|| ctx.err("toric", "expected an object"))?;
    let d = ctx
        .usize_field(obj, "d", "toric.d")?
        .ok_or_else(|| ctx.err("toric.d", "`d` is required"))?;
    let degrees = ctx.int_matrix(
        obj.get("degrees").ok_or_else(|| ctx.err("toric.degrees", "`degrees` is required"))?,
        "toric.degrees",
    )?;
    let l = ctx.matrix_list(
        obj.get("L").ok_or_else(|| ctx.err("toric.L", "`L` is required"))?,
        "toric.L",
    )?;
    if l.len() != m {
        return Err(ctx.err("toric.L", format!("expected {m} grading matrices, got {}", l.len())));
    }
    Ok(ToricSpec { d, degrees, l })
}

impl InputSpec {
    pub fn bicharacter(&self) -> &Bicharacter {
        &self.bichar
    }

    /// `μ` as polynomials; indeterminates `mu_k` when absent.
    pub fn mu_polys(&self) -> Vec<Poly> {
        match &self.mu {
            Some(list) => list.iter().enumerate().map(|(k, e)| e.to_poly(k)).collect(),
            None => (0..self.m).map(|k| Poly::var(Var::Mu(k))).collect(),
        }
    }

    pub fn mu_rendered(&self) -> Vec<String> {
        match &self.mu {
            Some(list) => list.iter().enumerate().map(|(k, e)| e.render(k)).collect(),
            None => (0..self.m).map(|k| Var::Mu(k).to_string()).collect(),
        }
    }

    /// Interpolation data. Defaults: `f = z` for a uniparameter input without
    /// `mu`, quadratic `f_k` otherwise.
    pub fn deformation(&self) -> crate::Result<Deformation> {
        if let (MatrixSource::Uniparameter(_), None, None) = (&self.source, &self.mu, &self.f) {
            return Ok(Deformation::uniparameter());
        }
        let choices = self.f.clone().unwrap_or_else(|| vec![FChoice::Quadratic; self.m]);
        Deformation::new(self.mu_polys(), choices)
    }

    fn grading_from(&self, t: &ToricSpec) -> crate::Result<GradingData> {
        if t.degrees.len() != t.d {
            return Err(crate::Error::DimensionMismatch {
                expected: t.d,
                got: t.degrees.len(),
            });
        }
        let c = Bicharacter::with_names(t.l.clone(), t.d, self.parameter_names.clone())?;
        GradingData::new(t.degrees.clone(), c)
    }

    pub fn grading(&self) -> Option<GradingData> {
        self.toric
            .as_ref()
            .map(|t| self.grading_from(t).expect("validated while parsing"))
    }

    /// Echo of the input, as it was understood.
    pub fn echo(&self) -> Value {
        let mut out = Map::new();
        out.insert("n".into(), self.n.into());
        out.insert("m".into(), self.m.into());
        out.insert("parameter_names".into(), self.parameter_names.clone().into());
        out.insert("L".into(), serde_json::to_value(self.bichar.matrices()).expect("integers serialize"));
        out.insert("mu".into(), self.mu_rendered().into());
        if let Some(f) = &self.f {
            let f: Vec<Value> = f
                .iter()
                .map(|c| match c {
                    FChoice::Quadratic => "quadratic".into(),
                    FChoice::Linear => "linear".into(),
                    FChoice::Power(p) => serde_json::json!({ "power": p }),
                })
                .collect();
            out.insert("f".into(), f.into());
        }
        if let Some(t) = &self.toric {
            out.insert(
                "toric".into(),
                serde_json::json!({ "d": t.d, "degrees": t.degrees, "L": t.l }),
            );
        }
        Value::Object(out)
    }
}
