//! Python bindings. Every call goes through the CLI argument model, so the
//! validation and error contract match the `defquant` binary.

use clap::Parser;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde_json::Value;

use defquant_core::cli::{run as run_cli, Cli, Format, Outcome, Status};

/// Runs one command; clap usage errors come back as exit code 2.
pub fn invoke(args: &[String]) -> Outcome {
    let argv = std::iter::once("defquant".to_string()).chain(args.iter().cloned());
    match Cli::try_parse_from(argv) {
        Ok(cli) => run_cli(&cli),
        Err(e) => Outcome::error("usage", &defquant_core::Error::Usage(e.to_string().trim().to_string())),
    }
}

fn value_of(args: Vec<String>) -> PyResult<Value> {
    let out = invoke(&args);
    match out.status {
        Status::Error => Err(PyValueError::new_err(out.text)),
        _ => Ok(out.result),
    }
}

fn string_of(args: Vec<String>) -> PyResult<String> {
    match value_of(args)? {
        Value::String(s) => Ok(s),
        other => Ok(other.to_string()),
    }
}

fn push_opt(args: &mut Vec<String>, flag: &str, v: Option<String>) {
    if let Some(v) = v {
        args.push(flag.to_string());
        args.push(v);
    }
}

fn algebra_args(args: &mut Vec<String>, algebra: Option<String>, params: Option<Vec<String>>) {
    push_opt(args, "--algebra", algebra);
    if let Some(p) = params.filter(|p| !p.is_empty()) {
        args.push("--params".into());
        args.push(p.join(","));
    }
}

/// Runs CLI arguments and returns `(exit_code, json)`.
#[pyfunction]
fn run(args: Vec<String>) -> (i32, String) {
    let out = invoke(&args);
    (out.exit_code, out.render(Format::Json))
}

#[pyfunction]
#[pyo3(signature = (f, g, algebra=None, params=None))]
fn bracket(f: String, g: String, algebra: Option<String>, params: Option<Vec<String>>) -> PyResult<String> {
    let mut args = vec!["bracket".to_string()];
    algebra_args(&mut args, algebra, params);
    args.extend([f, g]);
    string_of(args)
}

#[pyfunction]
#[pyo3(signature = (f, g, algebra=None, product="weyl".to_string(), order=None, level=None, radius=None, params=None))]
#[allow(clippy::too_many_arguments)]
fn star(
    f: String,
    g: String,
    algebra: Option<String>,
    product: String,
    order: Option<u32>,
    level: Option<String>,
    radius: Option<String>,
    params: Option<Vec<String>>,
) -> PyResult<String> {
    let mut args = vec!["star".to_string(), "--product".into(), product];
    algebra_args(&mut args, algebra, params);
    push_opt(&mut args, "--order", order.map(|o| o.to_string()));
    push_opt(&mut args, "--level", level);
    push_opt(&mut args, "--radius", radius);
    args.extend([f, g]);
    string_of(args)
}

#[pyfunction]
#[pyo3(signature = (f, algebra=None))]
fn weyl(f: String, algebra: Option<String>) -> PyResult<String> {
    let mut args = vec!["weyl".to_string()];
    algebra_args(&mut args, algebra, None);
    args.push(f);
    string_of(args)
}

#[pyfunction]
#[pyo3(signature = (word, algebra=None))]
fn normalize(word: String, algebra: Option<String>) -> PyResult<String> {
    let mut args = vec!["normalize".to_string()];
    algebra_args(&mut args, algebra, None);
    args.push(word);
    string_of(args)
}

/// `[(j, H_j), ...]` with `f = Σ p^j H_j`, highest power first.
#[pyfunction]
fn harm(f: String) -> PyResult<Vec<(u32, String)>> {
    let v = value_of(vec!["harm".into(), f])?;
    let items = v.as_array().cloned().unwrap_or_default();
    Ok(items
        .iter()
        .map(|it| {
            let j = it["power"].as_u64().unwrap_or(0) as u32;
            (j, it["harmonic"].as_str().unwrap_or("").to_string())
        })
        .collect())
}

/// Runs a named suite and returns `(passed, report_text)`.
#[pyfunction]
#[pyo3(signature = (suite, algebra=None, degree=None))]
fn check(suite: String, algebra: Option<String>, degree: Option<u32>) -> PyResult<(bool, String)> {
    let mut args = vec!["check".to_string(), suite];
    push_opt(&mut args, "--algebra", algebra);
    push_opt(&mut args, "--degree", degree.map(|d| d.to_string()));
    let out = invoke(&args);
    match out.status {
        Status::Error => Err(PyValueError::new_err(out.text)),
        s => Ok((s == Status::Pass, out.text)),
    }
}

#[pymodule]
fn defquant(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add_function(wrap_pyfunction!(bracket, m)?)?;
    m.add_function(wrap_pyfunction!(star, m)?)?;
    m.add_function(wrap_pyfunction!(weyl, m)?)?;
    m.add_function(wrap_pyfunction!(normalize, m)?)?;
    m.add_function(wrap_pyfunction!(harm, m)?)?;
    m.add_function(wrap_pyfunction!(check, m)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(s: &[&str]) -> Vec<String> {
        s.iter().map(|x| x.to_string()).collect()
    }

    #[test]
    fn invoke_matches_cli() {
        let out = invoke(&args(&["star", "x", "y"]));
        assert_eq!(out.exit_code, 0);
        assert_eq!(out.result, Value::String("x*y + (1/2)*h*z".into()));
        assert_eq!(invoke(&args(&["star", "--nope"])).exit_code, 2);
        assert_eq!(invoke(&args(&["star", "x", "w"])).exit_code, 2);
    }
}
