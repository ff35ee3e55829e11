//! Star products on `g*`: the Weyl-induced product, closed-form Moyal products,
//! and the semiclassical and tangentiality checks shared by every product.
//!
//! Convention: the real parameter `h` stands for `-iℏ`, so the
//! commutator `f⋆g − g⋆f` is `h·{f,g} + O(h²)` with no factors of `i`.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::liealg::LieAlgebra;
use crate::linalg::Matrix;
use crate::poly::{coordinate_monomials, Monomial, PolyRing, Polynomial};
use crate::report::{CheckReport, Witness};
use crate::scalar::{q, qi, Rational};
use crate::weyl::WeylContext;

/// A bilinear product on polynomials over a fixed ring.
pub trait StarProduct: Send + Sync {
    fn name(&self) -> &str;

    fn ring(&self) -> &Arc<PolyRing>;

    fn star(&self, f: &Polynomial, g: &Polynomial) -> Result<Polynomial>;
}

/// `f ⋆_S g = W⁻¹(W(f)·W(g))`.
#[derive(Debug, Clone)]
pub struct WeylStar {
    ctx: Arc<WeylContext>,
}

impl WeylStar {
    pub fn new(ctx: Arc<WeylContext>) -> Self {
        WeylStar { ctx }
    }

    pub fn context(&self) -> &Arc<WeylContext> {
        &self.ctx
    }
}

impl StarProduct for WeylStar {
    fn name(&self) -> &str {
        "weyl_S"
    }

    fn ring(&self) -> &Arc<PolyRing> {
        self.ctx.ring()
    }

    fn star(&self, f: &Polynomial, g: &Polynomial) -> Result<Polynomial> {
        let f = f.remap(self.ring())?;
        let g = g.remap(self.ring())?;
        let uea = self.ctx.uea();
        let prod = uea.mul(&self.ctx.weyl_sym(&f), &self.ctx.weyl_sym(&g));
        Ok(self.ctx.weyl_inv(&prod))
    }
}

/// Constant antisymmetric matrix `P^{ij}` acting on the first `n` coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct PoissonMatrix(Matrix<Rational>);

impl PoissonMatrix {
    pub fn new(m: Matrix<Rational>) -> Result<Self> {
        if m.rows() != m.cols() {
            return Err(Error::DimensionMismatch(format!("{}x{} Poisson matrix", m.rows(), m.cols())));
        }
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                if m[(i, j)] != -m[(j, i)].clone() {
                    return Err(Error::Precondition(format!(
                        "Poisson matrix is not antisymmetric at ({}, {})",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(PoissonMatrix(m))
    }

    /// `[[0, I], [-I, 0]]` on `(q_1..q_n, p_1..p_n)`; for `n = 1` this is `[[0,1],[-1,0]]`.
    pub fn symplectic(n: usize) -> Self {
        let mut m = Matrix::zeros(2 * n, 2 * n);
        for i in 0..n {
            m[(i, n + i)] = qi(1);
            m[(n + i, i)] = qi(-1);
        }
        PoissonMatrix(m)
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn matrix(&self) -> &Matrix<Rational> {
        &self.0
    }

    fn entries(&self) -> Vec<(usize, usize, Rational)> {
        let n = self.dim();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if !self.0[(i, j)].is_zero() {
                    out.push((i, j, self.0[(i, j)].clone()));
                }
            }
        }
        out
    }
}

/// `P^k(f, g)` as a map `(α, β) -> coefficient` meaning `Σ c ∂^α f ∂^β g`.
fn contraction_power(entries: &[(usize, usize, Rational)], nvars: usize, k: u32) -> BTreeMap<(Monomial, Monomial), Rational> {
    let mut cur: BTreeMap<(Monomial, Monomial), Rational> = BTreeMap::new();
    cur.insert((Monomial::one(nvars), Monomial::one(nvars)), Rational::one());
    for _ in 0..k {
        let mut next: BTreeMap<(Monomial, Monomial), Rational> = BTreeMap::new();
        for ((a, b), c) in &cur {
            for (i, j, p) in entries {
                let mut a2 = a.clone();
                a2.set_exp(*i, a.exp(*i) + 1);
                let mut b2 = b.clone();
                b2.set_exp(*j, b.exp(*j) + 1);
                *next.entry((a2, b2)).or_insert_with(Rational::zero) += c * p;
            }
        }
        next.retain(|_, c| !c.is_zero());
        cur = next;
    }
    cur
}

/// `Σ_k (1/k!) weight^k P^k(f, g)`, stopping when the derivatives run out.
fn moyal_series(
    f: &Polynomial,
    g: &Polynomial,
    entries: &[(usize, usize, Rational)],
    weight: &Polynomial,
    order: Option<u32>,
) -> Polynomial {
    let ring = f.ring();
    let nvars = entries.iter().map(|(i, j, _)| i.max(j) + 1).max().unwrap_or(0);
    let max_k = f.coordinate_degree().unwrap_or(0).min(g.coordinate_degree().unwrap_or(0));
    let max_k = order.map_or(max_k, |k| k.min(max_k));
    let mut out = Polynomial::zero(ring);
    let mut w = Polynomial::one(ring);
    let mut fact = Rational::one();
    for k in 0..=max_k {
        if k > 0 {
            w = &w * weight;
            fact *= qi(k as i64);
        }
        let mut term = Polynomial::zero(ring);
        for ((a, b), c) in contraction_power(entries, nvars, k) {
            let av: Vec<u32> = a.exponents().collect();
            let bv: Vec<u32> = b.exponents().collect();
            let df = f.partial_multi(&av);
            if df.is_zero() {
                continue;
            }
            let dg = g.partial_multi(&bv);
            if dg.is_zero() {
                continue;
            }
            term = &term + &(&df * &dg).scale(&c);
        }
        out = &out + &(&term * &w).scale(&fact.recip());
    }
    out
}

/// Closed-form product on the Heisenberg dual:
/// `Σ_k (1/k!) (h e′/2)^k P^k(f, g)` with `P = [[0,1],[-1,0]]` on `(q, p)`.
#[derive(Debug, Clone)]
pub struct MoyalHeisenberg {
    ring: Arc<PolyRing>,
    order: Option<u32>,
}

impl MoyalHeisenberg {
    /// Exact product on the ring of the builtin Heisenberg algebra.
    pub fn new(order: Option<u32>) -> Self {
        MoyalHeisenberg {
            ring: LieAlgebra::heisenberg().ring().clone(),
            order,
        }
    }

    /// Uses a ring whose first three coordinates are `q, p, e′`.
    pub fn on_ring(ring: Arc<PolyRing>, order: Option<u32>) -> Result<Self> {
        if ring.coord_count() != 3 {
            return Err(Error::DimensionMismatch(format!(
                "Heisenberg product needs 3 coordinates, ring has {}",
                ring.coord_count()
            )));
        }
        Ok(MoyalHeisenberg { ring, order })
    }
}

impl StarProduct for MoyalHeisenberg {
    fn name(&self) -> &str {
        "moyal_heis"
    }

    fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    fn star(&self, f: &Polynomial, g: &Polynomial) -> Result<Polynomial> {
        let f = f.remap(&self.ring)?;
        let g = g.remap(&self.ring)?;
        let weight = (&Polynomial::h(&self.ring) * &Polynomial::var(&self.ring, 2)).scale(&q(1, 2));
        let entries = PoissonMatrix::symplectic(1).entries();
        Ok(moyal_series(&f, &g, &entries, &weight, self.order))
    }
}

/// Constant-coefficient Moyal–Weyl product `Σ_k (1/k!) (h/2)^k P^k(f, g)`.
#[derive(Debug, Clone)]
pub struct MoyalR2n {
    ring: Arc<PolyRing>,
    poisson: PoissonMatrix,
    order: Option<u32>,
}

impl MoyalR2n {
    pub fn new(ring: Arc<PolyRing>, poisson: PoissonMatrix, order: Option<u32>) -> Result<Self> {
        if ring.coord_count() != poisson.dim() {
            return Err(Error::DimensionMismatch(format!(
                "{} coordinates for a {}x{} Poisson matrix",
                ring.coord_count(),
                poisson.dim(),
                poisson.dim()
            )));
        }
        Ok(MoyalR2n { ring, poisson, order })
    }

    /// The plane with coordinates `q, p` and `P = [[0,1],[-1,0]]`.
    pub fn plane(order: Option<u32>) -> Self {
        let ring = PolyRing::with_coords(&["q", "p"]).expect("valid ring");
        MoyalR2n::new(ring, PoissonMatrix::symplectic(1), order).expect("matching dimensions")
    }

    pub fn poisson(&self) -> &PoissonMatrix {
        &self.poisson
    }

    pub fn order(&self) -> Option<u32> {
        self.order
    }
}

impl StarProduct for MoyalR2n {
    fn name(&self) -> &str {
        "moyal_r2n"
    }

    fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    fn star(&self, f: &Polynomial, g: &Polynomial) -> Result<Polynomial> {
        let f = f.remap(&self.ring)?;
        let g = g.remap(&self.ring)?;
        let weight = Polynomial::h(&self.ring).scale(&q(1, 2));
        Ok(moyal_series(&f, &g, &self.poisson.entries(), &weight, self.order))
    }
}

/// Wraps a closure as a named product; handy for tests and ad-hoc products.
pub struct FnStar<F> {
    name: String,
    ring: Arc<PolyRing>,
    f: F,
}

impl<F> FnStar<F>
where
    F: Fn(&Polynomial, &Polynomial) -> Result<Polynomial> + Send + Sync,
{
    pub fn new(name: impl Into<String>, ring: Arc<PolyRing>, f: F) -> Self {
        FnStar {
            name: name.into(),
            ring,
            f,
        }
    }
}

impl<F> StarProduct for FnStar<F>
where
    F: Fn(&Polynomial, &Polynomial) -> Result<Polynomial> + Send + Sync,
{
    fn name(&self) -> &str {
        &self.name
    }

    fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    fn star(&self, f: &Polynomial, g: &Polynomial) -> Result<Polynomial> {
        (self.f)(f, g)
    }
}

/// On all pairs of coordinate monomials up to `degree`: `f⋆g|_{h=0} = fg` and
/// `((f⋆g − g⋆f)/h)|_{h=0} = {f, g}`.
pub fn check_semiclassical(s: &dyn StarProduct, alg: &LieAlgebra, degree: u32) -> Result<CheckReport> {
    let ring = alg.ring();
    let monos = coordinate_monomials(ring, degree);
    let pairs: Vec<(&Polynomial, &Polynomial)> = monos.iter().flat_map(|f| monos.iter().map(move |g| (f, g))).collect();
    let outcomes: Vec<Result<Option<Witness>>> = pairs
        .par_iter()
        .map(|(f, g)| {
            let fg = s.star(f, g)?.remap(ring)?;
            let gf = s.star(g, f)?.remap(ring)?;
            let classical = fg.h_coefficient(0);
            let plain = *f * *g;
            if classical != plain {
                return Ok(Some(Witness::new(
                    "classical limit",
                    format!("f = {f}, g = {g}: (f*g)|h=0 = {classical}, expected {plain}"),
                )));
            }
            let first = (&fg - &gf).h_coefficient(1);
            let bracket = alg.kirillov_bracket(f, g);
            if first != bracket {
                return Ok(Some(Witness::new(
                    "bracket",
                    format!("f = {f}, g = {g}: h^1 part of the commutator = {first}, bracket = {bracket}"),
                )));
            }
            Ok(None)
        })
        .collect();
    let mut report = CheckReport::new(format!("semiclassical[{}:{}]", s.name(), alg.name()));
    report.absorb(outcomes.into_iter().collect::<Result<Vec<_>>>()?, 1);
    Ok(report)
}

/// Variable with respect to which `gen` is monic: the last coordinate whose
/// top power in `gen` is a single pure-power term with constant coefficient.
pub fn division_variable(gen: &Polynomial) -> Result<usize> {
    let ring = gen.ring();
    for v in (0..ring.coord_count()).rev() {
        let Some(e) = gen.degree_in_var(v).filter(|&e| e > 0) else {
            continue;
        };
        let top: Vec<(&Monomial, &Rational)> = gen.terms().iter().filter(|(m, _)| m.exp(v) == e).collect();
        if top.len() == 1 && top[0].0.degree() == e {
            return Ok(v);
        }
    }
    Err(Error::Precondition(format!("{gen} has no pure-power leading term in a coordinate")))
}

/// Exact membership test of `r ⋆ f` and `f ⋆ r` in the principal ideal `(r)`
/// for every generator `r` and coordinate monomial `f` up to `degree`, one
/// `h`-order at a time up to `h_order`. The first failure is the witness.
pub fn check_tangential(
    s: &dyn StarProduct,
    generators: &[Polynomial],
    degree: u32,
    h_order: u32,
) -> Result<CheckReport> {
    let ring = s.ring();
    let mut report = CheckReport::new(format!("tangential[{}]", s.name()));
    for gen in generators {
        let gen = gen.remap(ring)?;
        let v = division_variable(&gen)?;
        let monos = coordinate_monomials(ring, degree);
        let outcomes: Vec<Result<Option<Witness>>> = monos
            .par_iter()
            .map(|f| {
                for (side, prod) in [("left", s.star(&gen, f)?), ("right", s.star(f, &gen)?)] {
                    let prod = prod.remap(ring)?;
                    for k in 0..=h_order {
                        let (_, rem) = prod.h_coefficient(k).div_rem_monic(&gen, v)?;
                        if !rem.is_zero() {
                            let expr = if side == "left" {
                                format!("({gen}) * ({f})")
                            } else {
                                format!("({f}) * ({gen})")
                            };
                            return Ok(Some(Witness::new(
                                format!("h^{k}"),
                                format!("{expr}: h^{k} coefficient leaves remainder {rem} modulo {gen}"),
                            )));
                        }
                    }
                }
                Ok(None)
            })
            .collect();
        report.absorb(outcomes.into_iter().collect::<Result<Vec<_>>>()?, 1);
    }
    Ok(report)
}

/// First associativity failure of `s` on triples of the given polynomials, truncated
/// to `h_order` when given.
pub fn check_associativity(s: &dyn StarProduct, basis: &[Polynomial], h_order: Option<u32>) -> Result<CheckReport> {
    let triples: Vec<(&Polynomial, &Polynomial, &Polynomial)> = basis
        .iter()
        .flat_map(|a| basis.iter().flat_map(move |b| basis.iter().map(move |c| (a, b, c))))
        .collect();
    let cut = |p: Polynomial| h_order.map_or(p.clone(), |k| p.truncate_h(k));
    let outcomes: Vec<Result<Option<Witness>>> = triples
        .par_iter()
        .map(|(a, b, c)| {
            let left = cut(s.star(&cut(s.star(a, b)?), c)?);
            let right = cut(s.star(a, &cut(s.star(b, c)?))?);
            if left == right {
                Ok(None)
            } else {
                Ok(Some(Witness::new(
                    "triple",
                    format!("({a}, {b}, {c}): (ab)c = {left}, a(bc) = {right}"),
                )))
            }
        })
        .collect();
    let mut report = CheckReport::new(format!("associativity[{}]", s.name()));
    report.absorb(outcomes.into_iter().collect::<Result<Vec<_>>>()?, 1);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn weyl(alg: LieAlgebra) -> WeylStar {
        WeylStar::new(Arc::new(WeylContext::new(alg)))
    }

    fn v(ring: &Arc<PolyRing>, name: &str) -> Polynomial {
        Polynomial::var_named(ring, name).unwrap()
    }

    #[test]
    fn heisenberg_weyl_star_on_generators() {
        let s = weyl(LieAlgebra::heisenberg());
        let ring = s.ring().clone();
        let (qv, pv) = (v(&ring, "q"), v(&ring, "p"));
        assert_eq!(s.star(&qv, &pv).unwrap().to_string(), "q*p + (1/2)*h*e'");
        assert_eq!(s.star(&pv, &qv).unwrap().to_string(), "q*p - (1/2)*h*e'");
    }

    #[test]
    fn su2_weyl_star_and_unit() {
        let s = weyl(LieAlgebra::su2());
        let ring = s.ring().clone();
        assert_eq!(s.star(&v(&ring, "x"), &v(&ring, "y")).unwrap().to_string(), "x*y + (1/2)*h*z");
        let f = &v(&ring, "x").pow(2) * &v(&ring, "z");
        assert_eq!(s.star(&f, &Polynomial::one(&ring)).unwrap(), f);
        assert_eq!(s.star(&Polynomial::one(&ring), &f).unwrap(), f);
    }

    #[test]
    fn moyal_plane_commutator() {
        let s = MoyalR2n::plane(None);
        let ring = s.ring().clone();
        let (qv, pv) = (v(&ring, "q"), v(&ring, "p"));
        let c = &s.star(&qv, &pv).unwrap() - &s.star(&pv, &qv).unwrap();
        assert_eq!(c, Polynomial::h(&ring));
        // q^2 ⋆ p^2 = q^2p^2 + 2h qp + h^2/2
        let got = s.star(&qv.pow(2), &pv.pow(2)).unwrap();
        assert_eq!(got.to_string(), "q^2*p^2 + 2*h*q*p + (1/2)*h^2");
    }

    #[test]
    fn truncation_drops_high_orders() {
        let s = MoyalR2n::plane(Some(1));
        let ring = s.ring().clone();
        let got = s.star(&v(&ring, "q").pow(2), &v(&ring, "p").pow(2)).unwrap();
        assert_eq!(got.h_degree(), Some(1));
    }

    #[test]
    fn poisson_matrix_must_be_antisymmetric() {
        let m = Matrix::from_rows(vec![vec![qi(0), qi(1)], vec![qi(1), qi(0)]]);
        assert!(PoissonMatrix::new(m).is_err());
    }

    #[test]
    fn corrupted_product_fails_semiclassical() {
        let alg = LieAlgebra::su2();
        let ring = alg.ring().clone();
        let bad = FnStar::new("corrupt", ring.clone(), |f: &Polynomial, g: &Polynomial| {
            let extra = (&f.partial(0) * &g.partial(0)).mul_h_power(1, &qi(1));
            Ok(&(f * g) + &extra)
        });
        let rep = check_semiclassical(&bad, &alg, 2).unwrap();
        assert!(!rep.passed);
        assert_eq!(rep.first_witness().unwrap().label, "bracket");
    }

    #[test]
    fn weyl_star_is_not_tangent_on_su2() {
        let s = weyl(LieAlgebra::su2());
        let ring = s.ring().clone();
        let p = &(&v(&ring, "x").pow(2) + &v(&ring, "y").pow(2)) + &v(&ring, "z").pow(2);
        let gen = &p - &v(&ring, "r").pow(2);
        let rep = check_tangential(&s, &[gen], 2, 3).unwrap();
        assert!(!rep.passed);
        assert_eq!(rep.first_witness().unwrap().label, "h^2");
    }

    #[test]
    fn moyal_heisenberg_is_tangent_to_e_level() {
        let s = MoyalHeisenberg::new(None);
        let ring = s.ring().clone();
        let gen = &v(&ring, "e'") - &Polynomial::one(&ring);
        let rep = check_tangential(&s, &[gen], 3, 3).unwrap();
        assert!(rep.passed, "{rep}");
    }
}
