//! Spin-`j` representations of `U_h(su2)` over the Gaussian rationals and their
//! descent to the quotients `U_h/(P − c)`: the fuzzy sphere.
//!
//! In the ladder basis `e_{-j}, …, e_j` with `E e_m = e_{m+1}`,
//! `F e_{m+1} = (j−m)(j+m+1) e_m` and `H e_m = m e_m`, the matrices
//! `X = −ih(E+F)/2`, `Y = −h(E−F)/2`, `Z = −ihH` satisfy `[X,Y] = hZ` and cyclic,
//! with every entry in `Q(i)`.

use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::liealg::RADIUS;
use crate::linalg::Matrix;
use crate::orbit::{OrbitData, QuotientElement};
use crate::poly::{PolyRing, Polynomial};
use crate::report::{CheckReport, Witness};
use crate::scalar::{fmt_rational, q, qi, Gaussian, Rational};
use crate::uea::EnvelopingElement;

pub type GMatrix = Matrix<Gaussian>;

#[derive(Clone, Debug, PartialEq)]
pub struct Irrep {
    two_j: u32,
    h: Rational,
    gens: [GMatrix; 3],
}

fn g(x: Rational) -> Gaussian {
    Gaussian::real(x)
}

impl Irrep {
    /// Spin `j` (a non-negative half-integer) at the numeric value `h ≠ 0`.
    pub fn build(j: &Rational, h: &Rational) -> Result<Irrep> {
        let two = j * qi(2);
        if j.is_negative() || !two.is_integer() {
            return Err(Error::NotHalfInteger(fmt_rational(j)));
        }
        if h.is_zero() {
            return Err(Error::Precondition("h must be non-zero".into()));
        }
        let two_j: u32 = two
            .to_integer()
            .try_into()
            .map_err(|_| Error::Precondition(format!("spin {} is too large", fmt_rational(j))))?;
        let n = two_j as usize + 1;
        let m_of = |i: usize| qi(i as i64) - j;
        let mut e = GMatrix::zeros(n, n);
        let mut f = GMatrix::zeros(n, n);
        let mut hh = GMatrix::zeros(n, n);
        for i in 0..n {
            let m = m_of(i);
            hh[(i, i)] = g(m.clone());
            if i + 1 < n {
                e[(i + 1, i)] = Gaussian::one();
                f[(i, i + 1)] = g((j - &m) * (j + &m + qi(1)));
            }
        }
        let minus_ih = Gaussian::new(Rational::zero(), -h.clone());
        let half = g(q(1, 2));
        let x = (&e + &f).scale(&(minus_ih.clone() * half.clone()));
        let y = (&e - &f).scale(&g(-h.clone() * q(1, 2)));
        let z = hh.scale(&minus_ih);
        Ok(Irrep {
            two_j,
            h: h.clone(),
            gens: [x, y, z],
        })
    }

    pub fn spin(&self) -> Rational {
        q(self.two_j as i64, 2)
    }

    pub fn dim(&self) -> usize {
        self.two_j as usize + 1
    }

    pub fn h(&self) -> &Rational {
        &self.h
    }

    /// `ρ(X)`, `ρ(Y)`, `ρ(Z)`.
    pub fn generators(&self) -> &[GMatrix; 3] {
        &self.gens
    }

    /// `ρ(P) = ρ(X)² + ρ(Y)² + ρ(Z)²`.
    pub fn casimir_matrix(&self) -> GMatrix {
        let mut out = GMatrix::zeros(self.dim(), self.dim());
        for m in &self.gens {
            out = &out + &(m * m);
        }
        out
    }

    /// `[ρ(X_i), ρ(X_{i+1})] = h ρ(X_{i+2})` for the three cyclic pairs.
    pub fn check_brackets(&self) -> CheckReport {
        let mut report = CheckReport::new(format!("brackets[j={}]", fmt_rational(&self.spin())));
        let names = ["X", "Y", "Z"];
        for i in 0..3 {
            let (a, b, c) = (&self.gens[i], &self.gens[(i + 1) % 3], &self.gens[(i + 2) % 3]);
            report.checked += 1;
            let lhs = &(a * b) - &(b * a);
            if lhs != c.scale(&g(self.h.clone())) {
                report.fail(Witness::new(
                    "bracket",
                    format!("[{}, {}] != h*{}", names[i], names[(i + 1) % 3], names[(i + 2) % 3]),
                ));
            }
        }
        report
    }

    /// `ρ` applied to a word-by-word expansion; coefficients are evaluated at this
    /// representation's `h` and must then be numeric.
    pub fn represent_element(&self, a: &EnvelopingElement) -> Result<GMatrix> {
        let ring = a.ring().clone();
        let n = self.dim();
        let mut out = GMatrix::zeros(n, n);
        for (w, c) in a.terms() {
            let c = numeric_value(&ring, c, &self.h)?;
            let mut m = GMatrix::identity(n);
            for &l in w.letters() {
                m = &m * &self.gens[l as usize];
            }
            out = &out + &m.scale(&g(c));
        }
        Ok(out)
    }
}

fn numeric_value(ring: &Arc<PolyRing>, c: &Polynomial, h: &Rational) -> Result<Rational> {
    let v = c.evaluate_var(ring.h(), h);
    if v.is_zero() || v.is_constant() {
        Ok(v.constant_term())
    } else {
        Err(Error::Precondition(format!(
            "coefficient {v} is not numeric at h = {}; use a numeric radius or level",
            fmt_rational(h)
        )))
    }
}

/// The scalar `λ` with `ρ(P) = λ·Id`. Errors if `ρ(P)` is not scalar.
pub fn casimir_eigenvalue(rep: &Irrep) -> Result<Gaussian> {
    let p = rep.casimir_matrix();
    p.as_scalar()
        .ok_or_else(|| Error::InvariantBreach(format!("rho(P) is not a scalar matrix:\n{p}")))
}

/// The level `c(h) = λ(h)` of an irrep of spin `j`, as a polynomial in `h`
/// (`λ` is homogeneous of degree two in `h`).
pub fn fuzzy_level(j: &Rational, ring: &Arc<PolyRing>) -> Result<Polynomial> {
    let unit = Irrep::build(j, &Rational::one())?;
    let lambda = casimir_eigenvalue(&unit)?;
    if !lambda.is_real() {
        return Err(Error::InvariantBreach(format!("non-real Casimir eigenvalue {lambda}")));
    }
    Ok(Polynomial::h(ring).pow(2).scale(&lambda.re))
}

/// Roots `r ∈ Q(i)` of `r(r + h) = λ`, if the discriminant is a square there.
pub fn level_radius(lambda: &Gaussian, h: &Rational) -> Option<(Gaussian, Gaussian)> {
    let hg = g(h.clone());
    let disc = hg.clone() * hg.clone() + g(qi(4)) * lambda.clone();
    let s = disc.sqrt()?;
    let half = g(q(1, 2));
    Some((
        (s.clone() - hg.clone()) * half.clone(),
        (Gaussian::zero() - s - hg) * half,
    ))
}

/// `ρ` on a class of `U_h/(P − c)`, defined when `c` evaluated at `ρ`'s `h`
/// equals the Casimir eigenvalue.
pub fn represent(orbit: &OrbitData, a: &QuotientElement, rep: &Irrep) -> Result<GMatrix> {
    check_descent(orbit, rep)?;
    rep.represent_element(a.element())
}

/// Errors with [`Error::DescentFailure`] unless the quotient's level matches `ρ(P)`.
pub fn check_descent(orbit: &OrbitData, rep: &Irrep) -> Result<()> {
    let ring = orbit.ring();
    let lambda = casimir_eigenvalue(rep)?;
    let level = orbit.level().evaluate_var(ring.h(), rep.h());
    let numeric = level.is_zero() || level.is_constant();
    if !numeric {
        let r = ring.index_of(RADIUS).expect("ring carries r");
        let hint = if level.uses_var(r) { " (the radius is symbolic)" } else { "" };
        return Err(Error::DescentFailure(format!("level {level} is not numeric{hint}")));
    }
    let c = g(level.constant_term());
    if c != lambda {
        return Err(Error::DescentFailure(format!(
            "level c = {c} but rho(P) = {lambda} * Id for j = {}, h = {}",
            fmt_rational(&rep.spin()),
            fmt_rational(rep.h())
        )));
    }
    Ok(())
}

/// Rank of the span of `ρ(B₁ monomials up to degree_cap)` inside `N×N` matrices.
pub fn image_dimension(orbit: &OrbitData, rep: &Irrep, degree_cap: u32) -> Result<usize> {
    check_descent(orbit, rep)?;
    let rows: Vec<Vec<Gaussian>> = orbit
        .b1_monomials(degree_cap)
        .iter()
        .map(|f| {
            let m = represent(orbit, &orbit.class_of(f)?, rep)?;
            Ok(m.entries().to_vec())
        })
        .collect::<Result<_>>()?;
    Ok(Matrix::from_rows(rows).rank())
}

/// Everything the fuzzy-sphere check asserts for one `(j, h)`.
#[derive(Clone, Debug, Serialize)]
pub struct FuzzySummary {
    pub spin: String,
    pub h: String,
    pub dim: usize,
    pub eigenvalue: String,
    pub brackets_hold: bool,
    pub annihilates_ideal: bool,
    pub homomorphism_pairs: usize,
    pub homomorphism_holds: bool,
    pub image_dimension: usize,
    /// Roots of `r(r+h) = λ` in `Q(i)`, when they exist.
    pub radius: Option<[String; 2]>,
    /// Roots of `r(r+h) = −λ`, the Hermitian-convention level.
    pub radius_hermitian: Option<[String; 2]>,
}

/// Builds the irrep, the matching quotient, and runs all descent checks with
/// `B₁` pairs up to `pair_degree` and the image up to degree `2j`.
pub fn fuzzy_summary(j: &Rational, h: &Rational, pair_degree: u32) -> Result<(FuzzySummary, CheckReport)> {
    let rep = Irrep::build(j, h)?;
    let ctx = Arc::new(crate::weyl::WeylContext::new(crate::liealg::LieAlgebra::su2()));
    let level = fuzzy_level(j, ctx.ring())?;
    let orbit = OrbitData::with_level(ctx, level)?;
    let lambda = casimir_eigenvalue(&rep)?;
    let mut report = rep.check_brackets();
    report.name = format!("fuzzy[j={},h={}]", fmt_rational(&rep.spin()), fmt_rational(h));

    let ideal = orbit.reduce(&orbit.quantum_generator())?;
    let annihilates = represent(&orbit, &ideal, &rep)?.is_zero()
        && rep.represent_element(&orbit.quantum_generator())?.is_zero();
    report.checked += 1;
    if !annihilates {
        report.fail(Witness::new("descent", "rho(P - c) is not zero"));
    }

    let classes: Vec<QuotientElement> = orbit
        .b1_monomials(pair_degree)
        .iter()
        .map(|f| orbit.class_of(f))
        .collect::<Result<_>>()?;
    let images: Vec<GMatrix> = classes.iter().map(|c| represent(&orbit, c, &rep)).collect::<Result<_>>()?;
    let mut hom_ok = true;
    for (a, ra) in classes.iter().zip(&images) {
        for (b, rb) in classes.iter().zip(&images) {
            report.checked += 1;
            let lhs = represent(&orbit, &orbit.star_ptheta(a, b)?, &rep)?;
            if lhs != ra * rb {
                hom_ok = false;
                report.fail(Witness::new("homomorphism", format!("rho({a} * {b}) != rho({a}) rho({b})")));
            }
        }
    }

    let dim = image_dimension(&orbit, &rep, rep.two_j.max(1))?;
    report.checked += 1;
    if dim != rep.dim() * rep.dim() {
        report.fail(Witness::new(
            "image",
            format!("image dimension {dim}, expected {}", rep.dim() * rep.dim()),
        ));
    }
    let fmt_roots = |r: Option<(Gaussian, Gaussian)>| r.map(|(a, b)| [a.to_string(), b.to_string()]);
    let summary = FuzzySummary {
        spin: fmt_rational(&rep.spin()),
        h: fmt_rational(h),
        dim: rep.dim(),
        eigenvalue: lambda.to_string(),
        brackets_hold: rep.check_brackets().passed,
        annihilates_ideal: annihilates,
        homomorphism_pairs: classes.len() * classes.len(),
        homomorphism_holds: hom_ok,
        image_dimension: dim,
        radius: fmt_roots(level_radius(&lambda, h)),
        radius_hermitian: fmt_roots(level_radius(&-lambda, h)),
    };
    Ok((summary, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::LieAlgebra;
    use crate::weyl::WeylContext;

    fn orbit_for(j: &Rational) -> OrbitData {
        let ctx = Arc::new(WeylContext::new(LieAlgebra::su2()));
        let level = fuzzy_level(j, ctx.ring()).unwrap();
        OrbitData::with_level(ctx, level).unwrap()
    }

    #[test]
    fn spin_half_matrices() {
        let rep = Irrep::build(&q(1, 2), &qi(1)).unwrap();
        assert!(rep.check_brackets().passed);
        assert_eq!(casimir_eigenvalue(&rep).unwrap(), g(q(-3, 4)));
        assert_eq!(rep.generators()[2].to_string(), "1/2*i 0\n0 -1/2*i\n");
    }

    #[test]
    fn trivial_rep() {
        let rep = Irrep::build(&qi(0), &qi(1)).unwrap();
        assert!(rep.generators().iter().all(|m| m.is_zero()));
        assert_eq!(casimir_eigenvalue(&rep).unwrap(), Gaussian::zero());
        assert_eq!(image_dimension(&orbit_for(&qi(0)), &rep, 2).unwrap(), 1);
    }

    #[test]
    fn eigenvalue_scales_with_h_squared() {
        let a = casimir_eigenvalue(&Irrep::build(&qi(1), &qi(1)).unwrap()).unwrap();
        let b = casimir_eigenvalue(&Irrep::build(&qi(1), &qi(2)).unwrap()).unwrap();
        assert_eq!(b, a * g(qi(4)));
    }

    #[test]
    fn rejects_bad_spin() {
        assert!(matches!(Irrep::build(&q(1, 3), &qi(1)), Err(Error::NotHalfInteger(_))));
        assert!(matches!(Irrep::build(&qi(-1), &qi(1)), Err(Error::NotHalfInteger(_))));
    }

    #[test]
    fn descent_needs_matching_level() {
        let rep = Irrep::build(&q(1, 2), &qi(1)).unwrap();
        let wrong = OrbitData::su2(crate::orbit::LevelKind::Shifted);
        let one = wrong.class_of(&Polynomial::one(wrong.ring())).unwrap();
        assert!(matches!(represent(&wrong, &one, &rep), Err(Error::DescentFailure(_))));
        let right = orbit_for(&q(1, 2));
        let one = right.class_of(&Polynomial::one(right.ring())).unwrap();
        assert_eq!(represent(&right, &one, &rep).unwrap(), GMatrix::identity(2));
    }

    #[test]
    fn radius_roots() {
        // j = 0: r(r+h) = 0 has roots 0 and -h.
        let (a, b) = level_radius(&Gaussian::zero(), &qi(1)).unwrap();
        assert_eq!((a, b), (Gaussian::zero(), g(qi(-1))));
        // j = 1/2: r(r+1) = -3/4 needs sqrt(-2).
        assert!(level_radius(&g(q(-3, 4)), &qi(1)).is_none());
        // Hermitian convention: r(r+1) = 3/4 gives r = 1/2.
        assert_eq!(level_radius(&g(q(3, 4)), &qi(1)).unwrap().0, g(q(1, 2)));
    }

    #[test]
    fn spin_one_summary() {
        let (s, rep) = fuzzy_summary(&qi(1), &q(1, 2), 2).unwrap();
        assert!(rep.passed, "{rep}");
        assert_eq!(s.image_dimension, 9);
    }
}
