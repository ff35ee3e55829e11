//! Line-oriented loaders for user algebras and gluing instances.
//!
//! Algebra files:
//! ```text
//! dim 3
//! basis X Y Z
//! bracket X Y = Z
//! ```
//! Gluing files:
//! ```text
//! coords q p
//! order 3
//! charts 2
//! weight 1 = 1/2 + q
//! weight 2 = 1/2 - q
//! transition 2 1 = exp(h * d/dq*d/dp)
//! ```
//! `#` starts a comment. Unlisted brackets are zero.

use std::collections::BTreeSet;
use std::path::Path;
use std::sync::Arc;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::expr::{eval_operator, eval_polynomial, parse_expression, Expr};
use crate::glue::{FormalOperator, GluingInstance};
use crate::liealg::LieAlgebra;
use crate::poly::{PolyRing, Polynomial, H};
use crate::scalar::Rational;
use crate::star::{MoyalR2n, PoissonMatrix};

fn file_error(path: &str, line: usize, message: impl Into<String>) -> Error {
    Error::File {
        path: path.to_string(),
        line,
        message: message.into(),
    }
}

/// Keeps syntax errors as they are but pins everything else to the line.
fn at_line(path: &str, line: usize) -> impl Fn(Error) -> Error + '_ {
    move |e| match e {
        Error::Syntax { column, message, .. } => file_error(path, line, format!("column {column}: {message}")),
        other => file_error(path, line, other.to_string()),
    }
}

fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then_some((i + 1, l))
    })
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| file_error(&path.display().to_string(), 0, e.to_string()))
}

pub fn load_algebra(path: &Path) -> Result<LieAlgebra> {
    let name = path.file_stem().and_then(|s| s.to_str()).unwrap_or("algebra").to_string();
    parse_algebra(&name, &path.display().to_string(), &read(path)?)
}

/// `name` becomes the algebra name; `path` is only used in messages.
pub fn parse_algebra(name: &str, path: &str, text: &str) -> Result<LieAlgebra> {
    let mut dim: Option<usize> = None;
    let mut basis: Option<Vec<String>> = None;
    let mut brackets: Vec<(usize, String, String, String)> = Vec::new();
    for (no, line) in lines(text) {
        let (head, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        match head {
            "dim" => {
                let n = rest
                    .trim()
                    .parse()
                    .map_err(|_| file_error(path, no, format!("bad dimension `{}`", rest.trim())))?;
                dim = Some(n);
            }
            "basis" => basis = Some(rest.split_whitespace().map(str::to_string).collect()),
            "bracket" => {
                let (lhs, rhs) = rest
                    .split_once('=')
                    .ok_or_else(|| file_error(path, no, "expected `bracket A B = expr`"))?;
                let pair: Vec<&str> = lhs.split_whitespace().collect();
                if pair.len() != 2 {
                    return Err(file_error(path, no, "expected two basis names before `=`"));
                }
                brackets.push((no, pair[0].to_string(), pair[1].to_string(), rhs.to_string()));
            }
            other => return Err(file_error(path, no, format!("unknown directive `{other}`"))),
        }
    }
    let basis = basis.ok_or_else(|| file_error(path, 0, "missing `basis` line"))?;
    if let Some(n) = dim {
        if n != basis.len() {
            return Err(file_error(path, 0, format!("dim {n} but {} basis elements", basis.len())));
        }
    }
    let n = basis.len();
    let ring = PolyRing::with_coords(&basis).map_err(|e| file_error(path, 0, e.to_string()))?;
    let mut consts = vec![Rational::zero(); n * n * n];
    let mut explicit = BTreeSet::new();
    for (no, a, b, rhs) in &brackets {
        let idx = |s: &str| {
            basis
                .iter()
                .position(|x| x == s)
                .ok_or_else(|| file_error(path, *no, format!("unknown basis element `{s}`")))
        };
        let (i, j) = (idx(a)?, idx(b)?);
        let value = eval_polynomial(&parse_expression(rhs).map_err(at_line(path, *no))?, &ring, &|v| {
            basis.iter().any(|x| x == v)
        })
        .map_err(at_line(path, *no))?;
        let mut row = vec![Rational::zero(); n];
        for (m, c) in value.terms() {
            if m.degree() != 1 {
                return Err(file_error(path, *no, "bracket value must be linear in the basis"));
            }
            let k = (0..n).find(|&k| m.exp(k) == 1).expect("degree one");
            row[k] = c.clone();
        }
        if !explicit.insert((i, j)) {
            return Err(file_error(path, *no, format!("bracket {a} {b} given twice")));
        }
        for (k, c) in row.iter().enumerate() {
            consts[(i * n + j) * n + k] = c.clone();
            if !explicit.contains(&(j, i)) {
                consts[(j * n + i) * n + k] = -c.clone();
            }
        }
    }
    let refs: Vec<&str> = basis.iter().map(String::as_str).collect();
    let alg = LieAlgebra::from_structure_constants_unchecked(name, &refs, consts)?;
    alg.validate().map_err(|v| Error::InvalidAlgebra(format!("{path}: {v}")))?;
    Ok(alg)
}

/// Resolves `--algebra`: a builtin name or a file path.
pub fn resolve_algebra(name: &str) -> Result<LieAlgebra> {
    if let Some(alg) = LieAlgebra::builtin(name) {
        return Ok(alg);
    }
    let path = Path::new(name);
    if path.exists() {
        return load_algebra(path);
    }
    Err(Error::Usage(format!("unknown algebra `{name}` (builtins: su2, heisenberg, sl2)")))
}

pub fn load_gluing(path: &Path) -> Result<GluingInstance> {
    parse_gluing(&path.display().to_string(), &read(path)?)
}

/// Chart 1 carries the Moyal product of the standard symplectic form on the
/// listed coordinates, truncated at the instance order.
pub fn parse_gluing(path: &str, text: &str) -> Result<GluingInstance> {
    let mut coords: Option<Vec<String>> = None;
    let mut order: u32 = 3;
    let mut charts: Option<usize> = None;
    let mut weights: Vec<(usize, usize, String)> = Vec::new();
    let mut transitions: Vec<(usize, usize, usize, String)> = Vec::new();
    for (no, line) in lines(text) {
        let (head, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let number = |s: &str| -> Result<usize> {
            s.trim().parse().map_err(|_| file_error(path, no, format!("expected a number, got `{}`", s.trim())))
        };
        match head {
            "coords" => coords = Some(rest.split_whitespace().map(str::to_string).collect()),
            "order" => order = number(rest)? as u32,
            "charts" => charts = Some(number(rest)?),
            "weight" => {
                let (i, rhs) = rest.split_once('=').ok_or_else(|| file_error(path, no, "expected `weight i = expr`"))?;
                weights.push((no, number(i)?, rhs.to_string()));
            }
            "transition" => {
                let (lhs, rhs) = rest
                    .split_once('=')
                    .ok_or_else(|| file_error(path, no, "expected `transition s r = exp(h * D)`"))?;
                let ids: Vec<&str> = lhs.split_whitespace().collect();
                if ids.len() != 2 {
                    return Err(file_error(path, no, "expected two chart numbers"));
                }
                transitions.push((no, number(ids[0])?, number(ids[1])?, rhs.trim().to_string()));
            }
            other => return Err(file_error(path, no, format!("unknown directive `{other}`"))),
        }
    }
    let coords = coords.ok_or_else(|| file_error(path, 0, "missing `coords` line"))?;
    if coords.is_empty() || coords.len() % 2 != 0 {
        return Err(file_error(path, 0, "need an even, nonzero number of coordinates"));
    }
    let m = charts.ok_or_else(|| file_error(path, 0, "missing `charts` line"))?;
    let ring = PolyRing::with_coords(&coords).map_err(|e| file_error(path, 0, e.to_string()))?;
    let chart_index = |no: usize, i: usize| -> Result<usize> {
        if i == 0 || i > m {
            Err(file_error(path, no, format!("chart {i} is outside 1..={m}")))
        } else {
            Ok(i - 1)
        }
    };
    let mut phi: Vec<Option<Polynomial>> = vec![None; m];
    for (no, i, rhs) in &weights {
        let e = parse_expression(rhs).map_err(at_line(path, *no))?;
        let p = eval_polynomial(&e, &ring, &|v| coords.iter().any(|c| c == v)).map_err(at_line(path, *no))?;
        phi[chart_index(*no, *i)?] = Some(p);
    }
    let phi: Vec<Polynomial> = phi
        .into_iter()
        .enumerate()
        .map(|(i, p)| p.ok_or_else(|| file_error(path, 0, format!("missing weight for chart {}", i + 1))))
        .collect::<Result<_>>()?;
    let mut given = Vec::new();
    for (no, s, r, rhs) in &transitions {
        let t = parse_transition(rhs, &ring, order).map_err(at_line(path, *no))?;
        given.push(((chart_index(*no, *s)?, chart_index(*no, *r)?), t));
    }
    let base = MoyalR2n::new(ring.clone(), PoissonMatrix::symplectic(coords.len() / 2), Some(order))?;
    let inst = GluingInstance::new(&ring, order, vec![Polynomial::one(&ring); m], Arc::new(base), given)
        .map_err(|e| file_error(path, 0, e.to_string()))?;
    let mut inst = inst;
    inst.set_weights(phi).map_err(|e| file_error(path, 0, e.to_string()))?;
    inst.check_partition().map_err(|e| file_error(path, 0, e.to_string()))?;
    Ok(inst)
}

/// `identity`, or `exp(h * D)` / `exp(h^e * D)` with `D` a differential operator.
fn parse_transition(src: &str, ring: &Arc<PolyRing>, order: u32) -> Result<FormalOperator> {
    if src == "identity" {
        return Ok(FormalOperator::identity(ring, order));
    }
    let inner = src
        .strip_prefix("exp")
        .map(str::trim_start)
        .and_then(|s| s.strip_prefix('('))
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(|| Error::Usage("transition must be `identity` or `exp(h * D)`".into()))?;
    let mut factors = Vec::new();
    flatten_product(parse_expression(inner)?, &mut factors);
    let shape = || Error::Usage("exponent must have the form `h * D`".into());
    if factors.len() < 2 {
        return Err(shape());
    }
    let power = match &factors[0] {
        Expr::Var(v) if v == H => 1,
        Expr::Pow(base, k) if *k > 0 && matches!(&**base, Expr::Var(v) if v == H) => *k,
        _ => return Err(shape()),
    };
    let op = factors[1..]
        .iter()
        .cloned()
        .reduce(|a, b| Expr::Mul(Box::new(a), Box::new(b)))
        .expect("nonempty");
    let d = eval_operator(&op, ring)?;
    Ok(FormalOperator::exp_h_power(&d, power, order))
}

fn flatten_product(e: Expr, out: &mut Vec<Expr>) {
    match e {
        Expr::Mul(a, b) => {
            flatten_product(*a, out);
            flatten_product(*b, out);
        }
        other => out.push(other),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SU2: &str = "# su(2)\ndim 3\nbasis X Y Z\nbracket X Y = Z\nbracket Y Z = X\nbracket Z X = Y\n";

    #[test]
    fn su2_file_matches_builtin() {
        let alg = parse_algebra("su2", "su2.lie", SU2).unwrap();
        assert_eq!(alg, LieAlgebra::su2());
    }

    #[test]
    fn missing_brackets_give_abelian() {
        let alg = parse_algebra("ab", "ab", "dim 2\nbasis A B\n").unwrap();
        let ring = alg.ring().clone();
        let f = &Polynomial::var(&ring, 0).pow(2) * &Polynomial::var(&ring, 1);
        let g = Polynomial::var(&ring, 1);
        assert!(alg.kirillov_bracket(&f, &g).is_zero());
    }

    #[test]
    fn bad_files() {
        let jacobi = "basis X Y Z\nbracket X Y = Y\nbracket X Z = X\n";
        assert!(matches!(parse_algebra("a", "a", jacobi), Err(Error::InvalidAlgebra(_))));
        let diag = "basis X Y\nbracket X X = Y\n";
        assert!(matches!(parse_algebra("a", "a", diag), Err(Error::InvalidAlgebra(_))));
        let nonlinear = "basis X Y\nbracket X Y = X*Y\n";
        assert!(matches!(parse_algebra("a", "a", nonlinear), Err(Error::File { line: 2, .. })));
        let unknown = "basis X Y\nbracket X W = Y\n";
        assert!(matches!(parse_algebra("a", "a", unknown), Err(Error::File { line: 2, .. })));
        let syntax = "basis X Y\n\nbracket X Y = (X\n";
        assert!(matches!(parse_algebra("a", "a", syntax), Err(Error::File { line: 3, .. })));
    }

    #[test]
    fn two_chart_file_matches_builtin() {
        let text = "coords q p\norder 2\ncharts 2\nweight 1 = 1/2 + q\nweight 2 = 1/2 - q\n\
                    transition 2 1 = exp(h * d/dq*d/dp)\n";
        let inst = parse_gluing("g", text).unwrap();
        let builtin = GluingInstance::two_chart_moyal(2);
        assert_eq!(inst.transition(1, 0).parts(), builtin.transition(1, 0).parts());
        assert_eq!(inst.transition(0, 1).parts(), builtin.transition(0, 1).parts());
        assert!(inst.check_cocycle().passed);
    }

    #[test]
    fn bad_gluing() {
        let text = "coords q p\ncharts 2\nweight 1 = 1/2\nweight 2 = 1/3\ntransition 2 1 = identity\n";
        assert!(parse_gluing("g", text).is_err());
        let text = "coords q p\ncharts 2\nweight 1 = 1/2\nweight 2 = 1/2\ntransition 2 1 = exp(d/dq)\n";
        assert!(matches!(parse_gluing("g", text), Err(Error::File { line: 5, .. })));
    }
}
