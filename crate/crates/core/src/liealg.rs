//! Lie algebras given by structure constants, the Kirillov Poisson bracket on
//! the dual, and the Heisenberg group's (co)adjoint action.

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::poly::{coordinate_monomials, PolyRing, Polynomial};
use crate::report::{CheckReport, Witness};
use crate::scalar::{fmt_rational, qi, Rational};

/// Name of the symbolic orbit-radius parameter carried by every algebra ring.
pub const RADIUS: &str = "r";

/// First violated axiom of a structure-constant tensor (0-based indices).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlgebraViolation {
    Antisymmetry { i: usize, j: usize, k: usize },
    Jacobi { i: usize, j: usize, k: usize, l: usize },
}

impl fmt::Display for AlgebraViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgebraViolation::Antisymmetry { i, j, k } => {
                write!(f, "antisymmetry fails at (i,j,k) = ({}, {}, {})", i + 1, j + 1, k + 1)
            }
            AlgebraViolation::Jacobi { i, j, k, l } => write!(
                f,
                "Jacobi identity fails at (i,j,k,l) = ({}, {}, {}, {})",
                i + 1,
                j + 1,
                k + 1,
                l + 1
            ),
        }
    }
}

#[derive(Clone, Debug)]
pub struct LieAlgebra {
    name: String,
    basis: Vec<String>,
    consts: Vec<Rational>,
    ring: Arc<PolyRing>,
}

impl PartialEq for LieAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.basis == other.basis && self.consts == other.consts
    }
}

impl LieAlgebra {
    /// Builds and validates an algebra from `(i, j, k, c)` entries meaning
    /// `[X_i, X_j] ∋ c·X_k`; the `(j, i)` entries are filled by antisymmetry.
    pub fn from_brackets(
        name: &str,
        basis: &[&str],
        brackets: &[(usize, usize, usize, Rational)],
    ) -> Result<LieAlgebra> {
        let n = basis.len();
        let mut consts = vec![Rational::zero(); n * n * n];
        for (i, j, k, c) in brackets {
            consts[(i * n + j) * n + k] = c.clone();
            consts[(j * n + i) * n + k] = -c.clone();
        }
        let alg = LieAlgebra::from_structure_constants_unchecked(name, basis, consts)?;
        alg.validate().map_err(|v| Error::InvalidAlgebra(v.to_string()))?;
        Ok(alg)
    }

    /// Dense tensor indexed `(i·n + j)·n + k`; only name and ring checks are made.
    pub fn from_structure_constants_unchecked(
        name: &str,
        basis: &[&str],
        consts: Vec<Rational>,
    ) -> Result<LieAlgebra> {
        let n = basis.len();
        if consts.len() != n * n * n {
            return Err(Error::DimensionMismatch(format!(
                "expected {} structure constants, got {}",
                n * n * n,
                consts.len()
            )));
        }
        let coords: Vec<String> = basis.iter().map(|b| b.to_lowercase()).collect();
        for c in &coords {
            if c == RADIUS || c == crate::poly::H || is_aux_name(c) {
                return Err(Error::InvalidAlgebra(format!(
                    "coordinate name `{c}` collides with a reserved variable"
                )));
            }
        }
        let aux: Vec<String> = (1..=n).map(|i| format!("t{i}")).collect();
        let ring = PolyRing::new(&coords, &[RADIUS.to_string()], &aux)?;
        Ok(LieAlgebra {
            name: name.to_string(),
            basis: basis.iter().map(|s| s.to_string()).collect(),
            consts,
            ring,
        })
    }

    /// `su(2)` in the basis `X, Y, Z` with `[X,Y]=Z` and cyclic permutations.
    pub fn su2() -> LieAlgebra {
        LieAlgebra::from_brackets(
            "su2",
            &["X", "Y", "Z"],
            &[(0, 1, 2, qi(1)), (1, 2, 0, qi(1)), (2, 0, 1, qi(1))],
        )
        .expect("su2 is a Lie algebra")
    }

    /// Heisenberg algebra in the basis `Q, P, E'` with `[Q,P]=E'`.
    pub fn heisenberg() -> LieAlgebra {
        LieAlgebra::from_brackets("heisenberg", &["Q", "P", "E'"], &[(0, 1, 2, qi(1))])
            .expect("heisenberg is a Lie algebra")
    }

    /// `sl(2)` in the basis `E, F, K` with `[K,E]=2E`, `[K,F]=-2F`, `[E,F]=K`.
    pub fn sl2() -> LieAlgebra {
        LieAlgebra::from_brackets(
            "sl2",
            &["E", "F", "K"],
            &[(2, 0, 0, qi(2)), (2, 1, 1, qi(-2)), (0, 1, 2, qi(1))],
        )
        .expect("sl2 is a Lie algebra")
    }

    pub fn builtin(name: &str) -> Option<LieAlgebra> {
        match name {
            "su2" | "so3" => Some(LieAlgebra::su2()),
            "heisenberg" => Some(LieAlgebra::heisenberg()),
            "sl2" => Some(LieAlgebra::sl2()),
            _ => None,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[String] {
        &self.basis
    }

    /// Shared ring: coordinates `ξ_i`, the radius `r`, auxiliaries `t_i`, and `h`.
    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    /// Coefficient of `X_k` in `[X_i, X_j]`.
    pub fn c(&self, i: usize, j: usize, k: usize) -> &Rational {
        let n = self.dim();
        &self.consts[(i * n + j) * n + k]
    }

    pub fn structure_constants(&self) -> &[Rational] {
        &self.consts
    }

    pub fn coordinate(&self, i: usize) -> Polynomial {
        Polynomial::var(&self.ring, i)
    }

    pub fn validate(&self) -> std::result::Result<(), AlgebraViolation> {
        let n = self.dim();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if self.c(i, j, k) != &-self.c(j, i, k).clone() {
                        return Err(AlgebraViolation::Antisymmetry { i, j, k });
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let mut s = Rational::zero();
                        for m in 0..n {
                            s += self.c(i, j, m) * self.c(m, k, l);
                            s += self.c(j, k, m) * self.c(m, i, l);
                            s += self.c(k, i, m) * self.c(m, j, l);
                        }
                        if !s.is_zero() {
                            return Err(AlgebraViolation::Jacobi { i, j, k, l });
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// `{f, g} = Σ c_ij^k ξ_k ∂_i f ∂_j g`.
    pub fn kirillov_bracket(&self, f: &Polynomial, g: &Polynomial) -> Polynomial {
        let n = self.dim();
        let df: Vec<Polynomial> = (0..n).map(|i| f.partial(i)).collect();
        let dg: Vec<Polynomial> = (0..n).map(|j| g.partial(j)).collect();
        let mut out = Polynomial::zero(f.ring());
        for i in 0..n {
            if df[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if dg[j].is_zero() {
                    continue;
                }
                let mut lin = Polynomial::zero(f.ring());
                for k in 0..n {
                    let c = self.c(i, j, k);
                    if !c.is_zero() {
                        lin = &lin + &Polynomial::var(f.ring(), k).scale(c);
                    }
                }
                if !lin.is_zero() {
                    out = &out + &(&lin * &(&df[i] * &dg[j]));
                }
            }
        }
        out
    }

    /// Antisymmetry, Leibniz and Jacobi for the Kirillov bracket on all
    /// coordinate monomials up to `degree`.
    pub fn poisson_properties(&self, degree: u32) -> CheckReport {
        let mons = coordinate_monomials(&self.ring, degree);
        let mut report = CheckReport::new(format!("poisson[{}]", self.name));
        let m = mons.len();

        let pairs: Vec<Option<Witness>> = (0..m * m)
            .into_par_iter()
            .map(|ix| {
                let (f, g) = (&mons[ix / m], &mons[ix % m]);
                let fg = self.kirillov_bracket(f, g);
                let gf = self.kirillov_bracket(g, f);
                if !(&fg + &gf).is_zero() {
                    return Some(Witness::new("antisymmetry", format!("f = {f}, g = {g}")));
                }
                None
            })
            .collect();
        report.absorb(pairs, 3);

        let triples: Vec<Option<Witness>> = (0..m * m * m)
            .into_par_iter()
            .map(|ix| {
                let (f, g, k) = (&mons[ix / (m * m)], &mons[(ix / m) % m], &mons[ix % m]);
                let lhs = self.kirillov_bracket(f, &(g * k));
                let rhs = &(&self.kirillov_bracket(f, g) * k) + &(g * &self.kirillov_bracket(f, k));
                if lhs != rhs {
                    return Some(Witness::new("leibniz", format!("f = {f}, g = {g}, k = {k}")));
                }
                let jac = &(&self.kirillov_bracket(f, &self.kirillov_bracket(g, k))
                    + &self.kirillov_bracket(g, &self.kirillov_bracket(k, f)))
                    + &self.kirillov_bracket(k, &self.kirillov_bracket(f, g));
                if !jac.is_zero() {
                    return Some(Witness::new("jacobi", format!("f = {f}, g = {g}, k = {k}")));
                }
                None
            })
            .collect();
        report.absorb(triples, 3);
        report
    }

    /// Matrix of `ad_{X_i}`: entry `(k, j)` is the coefficient of `X_k` in `[X_i, X_j]`.
    pub fn inner_derivation(&self, i: usize) -> Matrix<Rational> {
        let n = self.dim();
        let mut d = Matrix::zeros(n, n);
        for j in 0..n {
            for k in 0..n {
                d[(k, j)] = self.c(i, j, k).clone();
            }
        }
        d
    }

    /// `[u, v]` for coefficient vectors in the basis.
    pub fn bracket_vectors(&self, u: &[Rational], v: &[Rational]) -> Vec<Rational> {
        let n = self.dim();
        let mut out = vec![Rational::zero(); n];
        for i in 0..n {
            if u[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if v[j].is_zero() {
                    continue;
                }
                for (k, o) in out.iter_mut().enumerate() {
                    let c = self.c(i, j, k);
                    if !c.is_zero() {
                        *o += &u[i] * &v[j] * c;
                    }
                }
            }
        }
        out
    }

    /// Checks `D[X_i, X_j] = [D X_i, X_j] + [X_i, D X_j]`; returns the first failing pair.
    pub fn check_derivation(&self, d: &Matrix<Rational>) -> std::result::Result<(), (usize, usize)> {
        let n = self.dim();
        if d.rows() != n || d.cols() != n {
            return Err((0, 0));
        }
        let col = |j: usize| -> Vec<Rational> { (0..n).map(|k| d[(k, j)].clone()).collect() };
        let unit = |i: usize| -> Vec<Rational> {
            (0..n).map(|k| if k == i { Rational::one() } else { Rational::zero() }).collect()
        };
        let apply = |v: &[Rational]| -> Vec<Rational> {
            (0..n)
                .map(|k| (0..n).map(|j| &d[(k, j)] * &v[j]).sum())
                .collect()
        };
        for i in 0..n {
            for j in 0..n {
                let lhs = apply(&self.bracket_vectors(&unit(i), &unit(j)));
                let a = self.bracket_vectors(&col(i), &unit(j));
                let b = self.bracket_vectors(&unit(i), &col(j));
                let rhs: Vec<Rational> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
                if lhs != rhs {
                    return Err((i, j));
                }
            }
        }
        Ok(())
    }

    /// Human-readable list of the non-zero brackets `[A,B] = ...` with `i < j`.
    pub fn bracket_table(&self) -> Vec<String> {
        let n = self.dim();
        let mut lines = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let terms: Vec<(Rational, String)> = (0..n)
                    .filter(|&k| !self.c(i, j, k).is_zero())
                    .map(|k| (self.c(i, j, k).clone(), self.basis[k].clone()))
                    .collect();
                if terms.is_empty() {
                    continue;
                }
                let rhs = crate::poly::format_sum(terms.iter().map(|(c, b)| (c, b.clone())));
                lines.push(format!("[{},{}] = {}", self.basis[i], self.basis[j], rhs));
            }
        }
        lines
    }
}

fn is_aux_name(s: &str) -> bool {
    s.len() > 1 && s.starts_with('t') && s[1..].chars().all(|c| c.is_ascii_digit())
}

/// Element `(a, b, c)` of the Heisenberg group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeisenbergElement {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
}

impl HeisenbergElement {
    pub fn new(a: Rational, b: Rational, c: Rational) -> Self {
        HeisenbergElement { a, b, c }
    }

    pub fn identity() -> Self {
        HeisenbergElement::new(Rational::zero(), Rational::zero(), Rational::zero())
    }

    /// `(a1,b1,c1)·(a2,b2,c2) = (a1+a2, b1+b2, c1+c2+a1·b2)`.
    pub fn compose(&self, other: &Self) -> Self {
        HeisenbergElement::new(
            &self.a + &other.a,
            &self.b + &other.b,
            &self.c + &other.c + &self.a * &other.b,
        )
    }

    pub fn inverse(&self) -> Self {
        HeisenbergElement::new(-self.a.clone(), -self.b.clone(), &self.a * &self.b - &self.c)
    }

    /// `Ad_g` in the ordered basis `{Q, P, E'}`.
    pub fn adjoint(&self) -> Matrix<Rational> {
        Matrix::from_rows(vec![
            vec![qi(1), qi(0), qi(0)],
            vec![qi(0), qi(1), qi(0)],
            vec![-self.b.clone(), self.a.clone(), qi(1)],
        ])
    }

    /// `Ad*_g` on the column `(q, p, e')` of dual coordinates.
    pub fn coadjoint(&self) -> Matrix<Rational> {
        Matrix::from_rows(vec![
            vec![qi(1), qi(0), self.b.clone()],
            vec![qi(0), qi(1), -self.a.clone()],
            vec![qi(0), qi(0), qi(1)],
        ])
    }
}

impl fmt::Display for HeisenbergElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}, {})",
            fmt_rational(&self.a),
            fmt_rational(&self.b),
            fmt_rational(&self.c)
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    // Antisymmetric, but [X,Y]=Z, [X,Z]=X violates Jacobi.
    fn non_jacobi() -> LieAlgebra {
        let n = 3;
        let mut consts = vec![qi(0); 27];
        let mut set = |i: usize, j: usize, k: usize, c: Rational| {
            consts[(i * n + j) * n + k] = c.clone();
            consts[(j * n + i) * n + k] = -c;
        };
        set(0, 1, 2, qi(1));
        set(0, 2, 0, qi(1));
        LieAlgebra::from_structure_constants_unchecked("bad", &["X", "Y", "Z"], consts).unwrap()
    }

    #[test]
    fn builtins_are_valid() {
        assert!(LieAlgebra::su2().validate().is_ok());
        assert!(LieAlgebra::heisenberg().validate().is_ok());
        assert!(LieAlgebra::sl2().validate().is_ok());
    }

    #[test]
    fn symmetric_tensor_is_rejected() {
        let mut consts = vec![qi(0); 8];
        // c_12^1 = 1 = c_21^1
        consts[(0 * 2 + 1) * 2] = qi(1);
        consts[(1 * 2 + 0) * 2] = qi(1);
        let alg = LieAlgebra::from_structure_constants_unchecked("bad", &["A", "B"], consts).unwrap();
        assert_eq!(alg.validate(), Err(AlgebraViolation::Antisymmetry { i: 0, j: 1, k: 0 }));
    }

    #[test]
    fn jacobi_violation_reports_quadruple() {
        let alg = non_jacobi();
        assert!(matches!(alg.validate(), Err(AlgebraViolation::Jacobi { .. })));
    }

    #[test]
    fn kirillov_examples() {
        let h = LieAlgebra::heisenberg();
        let b = h.kirillov_bracket(&h.coordinate(0), &h.coordinate(1));
        assert_eq!(b, h.coordinate(2));
        let s = LieAlgebra::su2();
        assert_eq!(s.kirillov_bracket(&s.coordinate(0), &s.coordinate(1)), s.coordinate(2));
        let f = &(&s.coordinate(0) * &s.coordinate(1)) + &s.coordinate(2).pow(3);
        assert!(s.kirillov_bracket(&f, &f).is_zero());
    }

    #[test]
    fn linear_brackets_reproduce_structure_constants() {
        for alg in [LieAlgebra::su2(), LieAlgebra::heisenberg(), LieAlgebra::sl2()] {
            let n = alg.dim();
            for i in 0..n {
                for j in 0..n {
                    let mut want = Polynomial::zero(alg.ring());
                    for k in 0..n {
                        want = &want + &alg.coordinate(k).scale(alg.c(i, j, k));
                    }
                    assert_eq!(alg.kirillov_bracket(&alg.coordinate(i), &alg.coordinate(j)), want);
                }
            }
        }
    }

    #[test]
    fn su2_casimir_is_poisson_central() {
        let s = LieAlgebra::su2();
        let p = (0..3).fold(Polynomial::zero(s.ring()), |acc, i| &acc + &s.coordinate(i).pow(2));
        for f in coordinate_monomials(s.ring(), 5) {
            assert!(s.kirillov_bracket(&p, &f).is_zero(), "{{p, {f}}} != 0");
        }
    }

    #[test]
    fn poisson_axioms_hold_for_builtins() {
        assert!(LieAlgebra::su2().poisson_properties(3).passed);
        assert!(LieAlgebra::heisenberg().poisson_properties(3).passed);
    }

    #[test]
    fn poisson_check_catches_corrupted_tensor() {
        let bad = non_jacobi();
        let rep = bad.poisson_properties(2);
        assert!(!rep.passed);
        assert_eq!(rep.first_witness().unwrap().label, "jacobi");
    }

    #[test]
    fn heisenberg_coadjoint_matrix() {
        assert_eq!(HeisenbergElement::identity().coadjoint(), Matrix::identity(3));
        let g = HeisenbergElement::new(q(2, 3), qi(-5), qi(7));
        let m = g.coadjoint();
        assert_eq!(m.row(0), &[qi(1), qi(0), qi(-5)]);
        assert_eq!(m.row(1), &[qi(0), qi(1), q(-2, 3)]);
        assert_eq!(m.row(2), &[qi(0), qi(0), qi(1)]);
    }

    #[test]
    fn inner_derivations_are_derivations() {
        for alg in [LieAlgebra::su2(), LieAlgebra::heisenberg(), LieAlgebra::sl2()] {
            for i in 0..alg.dim() {
                assert!(alg.check_derivation(&alg.inner_derivation(i)).is_ok());
            }
        }
        let su2 = LieAlgebra::su2();
        let mut d = Matrix::zeros(3, 3);
        d[(0, 0)] = qi(1);
        assert!(su2.check_derivation(&d).is_err());
    }

    #[test]
    fn reserved_coordinate_names_rejected() {
        let err = LieAlgebra::from_structure_constants_unchecked("bad", &["H", "E"], vec![qi(0); 8]);
        assert!(err.is_err());
    }
}
