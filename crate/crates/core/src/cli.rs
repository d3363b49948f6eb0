//! Command-line front end.
//!
//! Every command prints JSON with a fixed key order, except `hasse --dot -`
//! which prints Graphviz text. Exit codes: 0 success, 1 verification
//! failure, 2 input error.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::algebra::PoissonElement;
use crate::bichar::{unit, Bicharacter, Subset};
use crate::input::{parse_rational, parse_spec, InputSpec};
use crate::limit::{poisson_bracket, poisson_matrix, LimitVerifier, PoissonMatrix};
use crate::poly::{format_rational, Poly};
use crate::spectrum::{self, Granularity, DEFAULT_STRATUM_BOUND};
use crate::toric::{self, diagram_commute_check};

/// The worked three-generator example, shipped with the tool.
pub const EXAMPLE3: &str = include_str!("../data/example3.json");

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFICATION: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "qaffine", version, about = "Spectra and semiclassical limits of quantum affine spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Strata, radical lattices and the Poisson matrix.
    Analyze { file: PathBuf },
    /// Semiclassical limit: Poisson matrix and the derivatives of the commutation scalars.
    Limit { file: PathBuf },
    /// Poisson core and symplectic core through a rational point.
    Core {
        file: PathBuf,
        /// Comma-separated coordinates, integers or p/q.
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Inclusion diagram of the strata.
    Hasse {
        file: PathBuf,
        /// Write Graphviz output to this path (`-` for stdout).
        #[arg(long)]
        dot: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = GranularityArg::Primitive)]
        granularity: GranularityArg,
    },
    /// Randomized check of the limit formula and the Poisson axioms.
    Verify {
        file: PathBuf,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        max_degree: i64,
    },
    /// Operations on the `toric` block.
    Toric {
        #[command(subcommand)]
        action: ToricAction,
    },
    /// Full report for the built-in three-generator example.
    Example3,
}

#[derive(Subcommand, Debug)]
enum ToricAction {
    /// Exponent matrices of the pulled-back bicharacter.
    Pullback { file: PathBuf },
    /// Commuting-square check on every monomial up to a total degree.
    Check {
        file: PathBuf,
        #[arg(long, default_value_t = 4)]
        max_degree: i64,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GranularityArg {
    Primitive,
    Torus,
}

impl From<GranularityArg> for Granularity {
    fn from(g: GranularityArg) -> Self {
        match g {
            GranularityArg::Primitive => Granularity::Primitive,
            GranularityArg::Torus => Granularity::TorusInvariant,
        }
    }
}

/// Output text and exit code for one invocation; `args[0]` is the program name.
pub fn run<I, T>(args: I) -> (String, i32)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            return (e.to_string(), code);
        }
    };
    match dispatch(cli.command) {
        Ok((v, code)) => (v, code),
        Err(msg) => (error_json(&msg), EXIT_INPUT),
    }
}

fn error_json(msg: &str) -> String {
    pretty(&json!({ "status": "error", "error": msg }))
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

fn load(path: &PathBuf) -> Result<InputSpec, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    parse_spec(&text).map_err(|e| e.to_string())
}

type Outcome = Result<(String, i32), String>;

fn dispatch(cmd: Command) -> Outcome {
    match cmd {
        Command::Analyze { file } => {
            let spec = load(&file)?;
            Ok((pretty(&analyze(&spec)?), EXIT_OK))
        }
        Command::Limit { file } => {
            let spec = load(&file)?;
            let (v, ok) = limit_report(&spec)?;
            Ok((pretty(&v), if ok { EXIT_OK } else { EXIT_VERIFICATION }))
        }
        Command::Core { file, point } => {
            let spec = load(&file)?;
            Ok((pretty(&core_report(&spec, &point)?), EXIT_OK))
        }
        Command::Hasse { file, dot, granularity } => {
            let spec = load(&file)?;
            hasse(&spec, dot, granularity.into())
        }
        Command::Verify {
            file,
            samples,
            seed,
            max_degree,
        } => {
            let spec = load(&file)?;
            if max_degree < 0 {
                return Err("--max-degree must be nonnegative".into());
            }
            let (v, ok) = verify(&spec, samples, seed, max_degree)?;
            Ok((pretty(&v), if ok { EXIT_OK } else { EXIT_VERIFICATION }))
        }
        Command::Toric { action } => match action {
            ToricAction::Pullback { file } => {
                let spec = load(&file)?;
                let g = spec.grading().ok_or("input has no `toric` block")?;
                let hat = toric::pullback(&g).map_err(|e| e.to_string())?;
                Ok((pretty(&json!({ "pullback": hat.matrices() })), EXIT_OK))
            }
            ToricAction::Check { file, max_degree } => {
                let spec = load(&file)?;
                let (v, ok) = toric_check(&spec, max_degree)?;
                Ok((pretty(&v), if ok { EXIT_OK } else { EXIT_VERIFICATION }))
            }
        },
        Command::Example3 => {
            let v = example3_report()?;
            let ok = v["limit"]["status"] == "pass";
            Ok((pretty(&v), if ok { EXIT_OK } else { EXIT_VERIFICATION }))
        }
    }
}

fn err_str<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn poisson_matrix_json(u: &PoissonMatrix) -> Value {
    u.rows()
        .iter()
        .map(|r| r.iter().map(|p| p.to_string()).collect::<Vec<_>>())
        .collect::<Vec<_>>()
        .into()
}

/// Stratum listing, rank vector, and Poisson matrix.
pub fn analyze(spec: &InputSpec) -> Result<Value, String> {
    let b = spec.bicharacter();
    let strata = spectrum::full_spectrum(b, DEFAULT_STRATUM_BOUND).map_err(err_str)?;
    let records: Vec<Value> = strata
        .iter()
        .map(|r| {
            json!({
                "w": r.w,
                "rank": r.rank,
                "singleton": r.is_singleton,
                "center_monomials": r.center_monomials,
                "family": r.family,
            })
        })
        .collect();
    let ranks: Vec<usize> = strata.iter().map(|r| r.rank).collect();
    let u = poisson_matrix(b, &spec.mu_polys()).map_err(err_str)?;
    Ok(json!({
        "input": spec.echo(),
        "rank_vector": ranks,
        "strata": records,
        "poisson_matrix": poisson_matrix_json(&u),
    }))
}

/// Poisson brackets of generators and `q̃′_ij(1)` checked against them.
pub fn limit_report(spec: &InputSpec) -> Result<(Value, bool), String> {
    let b = spec.bicharacter();
    let def = spec.deformation().map_err(err_str)?;
    let u = poisson_matrix(b, def.mus()).map_err(err_str)?;
    let mut verifier = LimitVerifier::new(b, &def).map_err(err_str)?;
    let n = b.n();
    let mut brackets = Vec::new();
    let mut ok = true;
    for i in 0..n {
        for j in i + 1..n {
            let (ei, ej) = (unit(n, i), unit(n, j));
            let entry = match verifier.verify(&ei, &ej) {
                Ok(rep) => json!({
                    "i": i + 1,
                    "j": j + 1,
                    "derivative_at_one": rep.derivative_at_one.to_string(),
                    "bracket": bracket_text(i, j, u.entry(i, j)),
                }),
                Err(e) => {
                    ok = false;
                    json!({ "i": i + 1, "j": j + 1, "error": e.to_string() })
                }
            };
            brackets.push(entry);
        }
    }
    Ok((
        json!({
            "mu": spec.mu_rendered(),
            "poisson_matrix": poisson_matrix_json(&u),
            "generators": brackets,
            "status": if ok { "pass" } else { "fail" },
        }),
        ok,
    ))
}

fn bracket_text(i: usize, j: usize, c: &Poly) -> String {
    let lhs = format!("{{x{},x{}}}", i + 1, j + 1);
    if c.is_zero() {
        format!("{lhs} = 0")
    } else if c.is_one() {
        format!("{lhs} = x{}*x{}", i + 1, j + 1)
    } else if c.num_terms() == 1 {
        format!("{lhs} = {c}*x{}*x{}", i + 1, j + 1)
    } else {
        format!("{lhs} = ({c})*x{}*x{}", i + 1, j + 1)
    }
}

fn parse_point(text: &str, n: usize) -> Result<Vec<BigRational>, String> {
    let coords: Vec<BigRational> = text
        .split(',')
        .map(|s| parse_rational(s).ok_or_else(|| format!("cannot read coordinate `{}`", s.trim())))
        .collect::<Result<_, _>>()?;
    if coords.len() != n {
        return Err(format!("point has {} coordinates, expected {n}", coords.len()));
    }
    Ok(coords)
}

pub fn core_report(spec: &InputSpec, point: &str) -> Result<Value, String> {
    let b = spec.bicharacter();
    let p = parse_point(point, b.n())?;
    let label = spectrum::poisson_core(b, &p).map_err(err_str)?;
    let core = spectrum::symplectic_core(b, &p).map_err(err_str)?;
    let eqs: Vec<Value> = core
        .equations
        .iter()
        .map(|(a, c)| json!({ "exponent": a, "value": c.to_string() }))
        .collect();
    Ok(json!({
        "point": p.iter().map(format_rational).collect::<Vec<_>>(),
        "w": core.w,
        "poisson_core": label.to_string(),
        "symplectic_core": {
            "kind": core.kind(),
            "dimension": core.dimension(),
            "description": core.description(),
            "equations": eqs,
        },
    }))
}

fn hasse_json(b: &Bicharacter, g: Granularity) -> Result<Value, String> {
    let edges = spectrum::hasse_edges(b, g, DEFAULT_STRATUM_BOUND).map_err(err_str)?;
    let n = b.n();
    let list: Vec<Value> = edges
        .iter()
        .map(|(a, c)| json!([format!("w_{}", a.bitstring(n)), format!("w_{}", c.bitstring(n))]))
        .collect();
    let rule = match g {
        Granularity::Primitive => "binomial-label containment on generic members of each stratum",
        Granularity::TorusInvariant => "inclusion of the sets w",
    };
    Ok(json!({
        "granularity": match g {
            Granularity::Primitive => "primitive",
            Granularity::TorusInvariant => "torus",
        },
        "order_rule": rule,
        "nodes": Subset::all(n).iter().map(|w| format!("w_{}", w.bitstring(n))).collect::<Vec<_>>(),
        "edges": list,
    }))
}

fn hasse(spec: &InputSpec, dot: Option<PathBuf>, g: Granularity) -> Outcome {
    let b = spec.bicharacter();
    match dot {
        Some(path) if path.as_os_str() == "-" => {
            Ok((spectrum::hasse_diagram(b, g).map_err(err_str)?, EXIT_OK))
        }
        Some(path) => {
            let text = spectrum::hasse_diagram(b, g).map_err(err_str)?;
            std::fs::write(&path, text).map_err(|e| format!("cannot write {}: {e}", path.display()))?;
            let mut v = hasse_json(b, g)?;
            v["dot"] = path.display().to_string().into();
            Ok((pretty(&v), EXIT_OK))
        }
        None => Ok((pretty(&hasse_json(b, g)?), EXIT_OK)),
    }
}

fn random_exponent(rng: &mut ChaCha8Rng, n: usize, max: i64) -> Vec<i64> {
    (0..n).map(|_| rng.gen_range(0..=max)).collect()
}

/// Random samples `(s, t, r)`: the limit formula on `(s, t)`, then Jacobi on
/// `(x^s, x^t, x^r)` and Leibniz on `{x^s, x^t x^r}`.
pub fn verify(spec: &InputSpec, samples: usize, seed: u64, max_degree: i64) -> Result<(Value, bool), String> {
    let b = spec.bicharacter();
    let def = spec.deformation().map_err(err_str)?;
    let u = poisson_matrix(b, def.mus()).map_err(err_str)?;
    let mut verifier = LimitVerifier::new(b, &def).map_err(err_str)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = b.n();
    let mut passed = 0;
    let mut failures = Vec::new();
    for _ in 0..samples {
        let s = random_exponent(&mut rng, n, max_degree);
        let t = random_exponent(&mut rng, n, max_degree);
        let r = random_exponent(&mut rng, n, max_degree);
        let outcome = verifier
            .verify(&s, &t)
            .map_err(err_str)
            .and_then(|_| poisson_axioms(&u, &s, &t, &r));
        match outcome {
            Ok(()) => passed += 1,
            Err(e) => failures.push(json!({ "s": s, "t": t, "r": r, "error": e })),
        }
    }
    let ok = failures.is_empty();
    Ok((
        json!({
            "samples": samples,
            "seed": seed,
            "max_degree": max_degree,
            "passed": passed,
            "failed": failures.len(),
            "status": if ok { "pass" } else { "fail" },
            "failures": failures,
        }),
        ok,
    ))
}

/// Jacobi and Leibniz identities on three monomials.
pub fn poisson_axioms(u: &PoissonMatrix, s: &[i64], t: &[i64], r: &[i64]) -> Result<(), String> {
    let mono = |e: &[i64]| PoissonElement::monomial(e.to_vec()).map_err(err_str);
    let (a, b, c) = (mono(s)?, mono(t)?, mono(r)?);
    let br = |x: &PoissonElement, y: &PoissonElement| poisson_bracket(u, x, y).map_err(err_str);
    let add = |x: PoissonElement, y: PoissonElement| x.add(&y).map_err(err_str);
    let mul = |x: &PoissonElement, y: &PoissonElement| x.commutative_product(y).map_err(err_str);
    let jac = add(
        add(br(&a, &br(&b, &c)?)?, br(&b, &br(&c, &a)?)?)?,
        br(&c, &br(&a, &b)?)?,
    )?;
    if !jac.is_zero() {
        return Err(format!("Jacobi sum is {jac}"));
    }
    let lhs = br(&a, &mul(&b, &c)?)?;
    let rhs = add(mul(&br(&a, &b)?, &c)?, mul(&b, &br(&a, &c)?)?)?;
    if lhs != rhs {
        return Err(format!("Leibniz: {lhs} vs {rhs}"));
    }
    Ok(())
}

fn toric_check(spec: &InputSpec, max_degree: i64) -> Result<(Value, bool), String> {
    let g = spec.grading().ok_or("input has no `toric` block")?;
    if !(0..=toric::DIAGRAM_DEGREE_LIMIT).contains(&max_degree) {
        return Err(format!(
            "--max-degree must lie in 0..={}",
            toric::DIAGRAM_DEGREE_LIMIT
        ));
    }
    let mut checked = 0usize;
    let mut failures = Vec::new();
    for s in exponents_up_to(g.n(), max_degree) {
        checked += 1;
        if let Err(e) = diagram_commute_check(&g, &s) {
            failures.push(json!({ "s": s, "error": e.to_string() }));
        }
    }
    let ok = failures.is_empty();
    Ok((
        json!({
            "max_degree": max_degree,
            "checked": checked,
            "failed": failures.len(),
            "status": if ok { "pass" } else { "fail" },
            "failures": failures,
        }),
        ok,
    ))
}

/// All `s ∈ N^n` with `Σ s_i ≤ max`, in lexicographic order.
pub fn exponents_up_to(n: usize, max: i64) -> Vec<Vec<i64>> {
    fn rec(prefix: &mut Vec<i64>, n: usize, left: i64, out: &mut Vec<Vec<i64>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for e in 0..=left {
            prefix.push(e);
            rec(prefix, n, left - e, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), n, max, &mut out);
    out
}

/// Combined report for the shipped example.
pub fn example3_report() -> Result<Value, String> {
    let spec = parse_spec(EXAMPLE3).map_err(|e| e.to_string())?;
    let b = spec.bicharacter();
    let cores: Vec<Value> = ["1,0,0", "0,2,3", "2,3,0", "2,0,3", "1,2,3"]
        .iter()
        .map(|p| core_report(&spec, p))
        .collect::<Result<_, _>>()?;
    let (limit, _) = limit_report(&spec)?;
    Ok(json!({
        "analysis": analyze(&spec)?,
        "limit": limit,
        "cores": cores,
        "hasse": hasse_json(b, Granularity::Primitive)?,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn help_and_bad_args() {
        let (out, code) = run(["qaffine", "--help"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("analyze"));
        let (_, code) = run(["qaffine", "frobnicate"]);
        assert_eq!(code, EXIT_INPUT);
    }

    #[test]
    fn missing_file_is_input_error() {
        let (out, code) = run(["qaffine", "analyze", "/nonexistent/spec.json"]);
        assert_eq!(code, EXIT_INPUT);
        assert!(out.contains("cannot read"));
    }

    #[test]
    fn exponent_enumeration() {
        assert_eq!(exponents_up_to(2, 1), vec![vec![0, 0], vec![0, 1], vec![1, 0]]);
        assert_eq!(exponents_up_to(3, 4).len(), 35);
    }

    #[test]
    fn example3_is_deterministic() {
        let (a, code) = run(["qaffine", "example3"]);
        assert_eq!(code, EXIT_OK);
        assert_eq!(a, run(["qaffine", "example3"]).0);
    }
}
