//! Quantization of the SU(2) coadjoint orbits `x² + y² + z² = r²`.
//!
//! Two routes from polynomials on `su(2)*` into `U_h(su2)`:
//! - `psi_su2`, the basis map: `xᵐyⁿz^q·(p − r²) ↦ XᵐYⁿZ^q·(P − c(h))` and
//!   `xᵐyⁿz^ν ↦ XᵐYⁿZ^ν` for `ν ≤ 1`. Composed with reduction modulo `P − c(h)`
//!   it identifies `U_h/(P − c(h))` with the span of `B₁ = {xᵐyⁿz^ν}`.
//! - `psi_p`, built from the harmonic decomposition `f = Σ (p − r²)^q f_q`:
//!   `f ↦ Σ (P − c(h))^q W(f_q)`. Transporting the product through it gives `⋆_P`,
//!   for which `p` is central and acts by plain multiplication.
//!
//! The product `⋆_PΘ` restricted to the orbit is known not to be differential;
//! that claim is not checked here.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::liealg::{LieAlgebra, RADIUS};
use crate::linalg::Matrix;
use crate::poly::{PolyRing, Polynomial};
use crate::report::{CheckReport, Witness};
use crate::scalar::{qi, Rational};
use crate::star::StarProduct;
use crate::uea::{EnvelopingElement, ReductionPlan, Word};
use crate::weyl::WeylContext;

/// Choice of deformed level `c(h)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LevelKind {
    /// `c(h) = r²`.
    Plain,
    /// `c(h) = r(r + h)`, the value matching irreducible representations.
    Shifted,
    /// An explicitly supplied `c(h)`.
    Custom,
}

impl LevelKind {
    pub fn parse(s: &str) -> Result<LevelKind> {
        match s {
            "plain" => Ok(LevelKind::Plain),
            "shifted" => Ok(LevelKind::Shifted),
            other => Err(Error::Usage(format!("unknown level kind `{other}` (expected plain or shifted)"))),
        }
    }
}

/// The orbit radius: the ring parameter `r`, or a number.
#[derive(Clone, Debug, PartialEq)]
pub enum Radius {
    Symbolic,
    Value(Rational),
}

impl Radius {
    pub fn to_polynomial(&self, ring: &Arc<PolyRing>) -> Polynomial {
        match self {
            Radius::Symbolic => Polynomial::var_named(ring, RADIUS).expect("algebra rings carry r"),
            Radius::Value(v) => Polynomial::constant(ring, v.clone()),
        }
    }
}

/// `c(h)` for the given kind; both satisfy `c(0) = r²`.
pub fn deformed_level(kind: LevelKind, radius: &Radius, ring: &Arc<PolyRing>) -> Polynomial {
    let r = radius.to_polynomial(ring);
    match kind {
        LevelKind::Plain | LevelKind::Custom => r.pow(2),
        LevelKind::Shifted => &r * &(&r + &Polynomial::h(ring)),
    }
}

pub struct OrbitData {
    ctx: Arc<WeylContext>,
    kind: LevelKind,
    radius: Option<Radius>,
    p: Polynomial,
    c0: Polynomial,
    ch: Polynomial,
    casimir: EnvelopingElement,
    plan: ReductionPlan,
}

impl fmt::Debug for OrbitData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "OrbitData(p = {}, c(h) = {})", self.p, self.ch)
    }
}

impl OrbitData {
    /// Orbit data on a Weyl context whose algebra must be `su2`.
    pub fn new(ctx: Arc<WeylContext>, kind: LevelKind, radius: Radius) -> Result<Self> {
        if kind == LevelKind::Custom {
            return Err(Error::Usage("a custom level needs OrbitData::with_level".into()));
        }
        let ring = ctx.ring().clone();
        let c0 = radius.to_polynomial(&ring).pow(2);
        let ch = deformed_level(kind, &radius, &ring);
        OrbitData::build(ctx, kind, Some(radius), c0, ch)
    }

    /// Quotient by `P − level` for a coordinate-free `level(h, r)`; `c⁰` is its value at `h = 0`.
    pub fn with_level(ctx: Arc<WeylContext>, level: Polynomial) -> Result<Self> {
        let ring = ctx.ring().clone();
        let level = level.remap(&ring)?;
        if level.coordinate_degree().unwrap_or(0) > 0 {
            return Err(Error::Precondition(format!("level {level} involves coordinates")));
        }
        let c0 = level.evaluate_var(ring.h(), &Rational::zero());
        OrbitData::build(ctx, LevelKind::Custom, None, c0, level)
    }

    fn build(
        ctx: Arc<WeylContext>,
        kind: LevelKind,
        radius: Option<Radius>,
        c0: Polynomial,
        ch: Polynomial,
    ) -> Result<Self> {
        let alg = ctx.algebra().clone();
        if *alg != LieAlgebra::su2() {
            return Err(Error::Precondition(format!(
                "orbit quantization is implemented for su2 only, got `{}`",
                alg.name()
            )));
        }
        let ring = ctx.ring().clone();
        let mut p = Polynomial::zero(&ring);
        for i in 0..3 {
            p = &p + &Polynomial::var(&ring, i).pow(2);
        }
        if ch.evaluate_var(ring.h(), &Rational::zero()) != c0 {
            return Err(Error::InvariantBreach(format!("c(0) = {} differs from r² = {c0}", ch)));
        }
        for i in 0..3 {
            let b = alg.kirillov_bracket(&p, &Polynomial::var(&ring, i));
            if !b.is_zero() {
                return Err(Error::InvariantBreach(format!("{{p, {}}} = {b}", ring.name(i))));
            }
        }
        let uea = ctx.uea().clone();
        let casimir = uea.sum_of_squares();
        let plan = uea.reduction_plan(&casimir, &ch)?;
        Ok(OrbitData {
            ctx,
            kind,
            radius,
            p,
            c0,
            ch,
            casimir,
            plan,
        })
    }

    /// `su2` with a symbolic radius.
    pub fn su2(kind: LevelKind) -> Self {
        let ctx = Arc::new(WeylContext::new(LieAlgebra::su2()));
        OrbitData::new(ctx, kind, Radius::Symbolic).expect("su2 orbit data")
    }

    pub fn context(&self) -> &Arc<WeylContext> {
        &self.ctx
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        self.ctx.ring()
    }

    pub fn algebra(&self) -> &Arc<LieAlgebra> {
        self.ctx.algebra()
    }

    pub fn kind(&self) -> LevelKind {
        self.kind
    }

    /// `None` for a custom level.
    pub fn radius(&self) -> Option<&Radius> {
        self.radius.as_ref()
    }

    /// `p = x² + y² + z²`.
    pub fn invariant(&self) -> &Polynomial {
        &self.p
    }

    /// `c⁰ = c(0)`, which is `r²` unless the level is custom.
    pub fn classical_level(&self) -> &Polynomial {
        &self.c0
    }

    pub fn level(&self) -> &Polynomial {
        &self.ch
    }

    /// `p − c⁰`, generator of the classical ideal `I₀`.
    pub fn classical_generator(&self) -> Polynomial {
        &self.p - &self.c0
    }

    /// `P = X² + Y² + Z²`.
    pub fn casimir(&self) -> &EnvelopingElement {
        &self.casimir
    }

    /// `P − c(h)`, generator of `I_h`.
    pub fn quantum_generator(&self) -> EnvelopingElement {
        self.casimir.sub(&EnvelopingElement::scalar(self.algebra(), self.ch.clone()))
    }

    /// Splits `f = q·(p − r²) + b` with `b` of degree at most one in `z`.
    pub fn basis_split(&self, f: &Polynomial) -> Result<(Polynomial, Polynomial)> {
        let f = f.remap(self.ring())?;
        f.div_rem_monic(&self.classical_generator(), 2)
    }

    /// The basis map `ψ`.
    pub fn psi_su2(&self, f: &Polynomial) -> Result<EnvelopingElement> {
        let alg = self.algebra();
        let (quot, rest) = self.basis_split(f)?;
        let uea = self.ctx.uea();
        let ideal_part = uea.mul(&EnvelopingElement::from_pbw_polynomial(alg, &quot), &self.quantum_generator());
        Ok(ideal_part.add(&EnvelopingElement::from_pbw_polynomial(alg, &rest)))
    }

    /// Canonical representative modulo `P − c(h)`: no word contains `Z²`.
    pub fn reduce(&self, a: &EnvelopingElement) -> Result<QuotientElement> {
        Ok(QuotientElement(self.ctx.uea().reduce_with(a, &self.plan)?))
    }

    pub fn class_of(&self, f: &Polynomial) -> Result<QuotientElement> {
        self.reduce(&self.psi_su2(f)?)
    }

    /// `a ⋆_PΘ b`.
    pub fn star_ptheta(&self, a: &QuotientElement, b: &QuotientElement) -> Result<QuotientElement> {
        self.reduce(&self.ctx.uea().mul(&a.0, &b.0))
    }

    /// The map `ψ_P`.
    pub fn psi_p(&self, f: &Polynomial) -> Result<EnvelopingElement> {
        let f = f.remap(self.ring())?;
        let uea = self.ctx.uea();
        let alg = self.algebra();
        let parts = harmonic_decompose(&f)?;
        let top = parts.first().map_or(0, |(k, _)| *k);
        let by_power: BTreeMap<u32, Polynomial> = parts.into_iter().collect();
        // p^k = Σ_q C(k,q) (r²)^{k−q} (p − r²)^q
        let ideal = self.quantum_generator();
        let mut out = EnvelopingElement::zero(alg);
        let mut ideal_power = uea.one();
        for qd in 0..=top {
            let mut g = Polynomial::zero(self.ring());
            for (&k, fk) in by_power.range(qd..) {
                let coeff = self.c0.pow(k - qd).scale(&binomial(k, qd));
                g = &g + &(&coeff * fk);
            }
            if !g.is_zero() {
                out = out.add(&uea.mul(&ideal_power, &self.ctx.weyl_sym(&g)));
            }
            ideal_power = uea.mul(&ideal_power, &ideal);
        }
        Ok(out)
    }

    /// `ψ_P⁻¹`, peeling off the longest words with `W⁻¹`.
    pub fn psi_p_inverse(&self, a: &EnvelopingElement) -> Result<Polynomial> {
        let mut residual = self.ctx.uea().pbw_normalize(a);
        let mut f = Polynomial::zero(self.ring());
        let mut last = usize::MAX;
        while let Some(len) = residual.max_word_len() {
            if len >= last {
                return Err(Error::Internal("ψ_P inversion did not shorten the residual".into()));
            }
            last = len;
            let g = self.ctx.weyl_inv(&residual);
            f = &f + &g;
            residual = residual.sub(&self.psi_p(&g)?);
        }
        Ok(f)
    }

    /// `f ⋆_P g = ψ_P⁻¹(ψ_P(f)·ψ_P(g))`.
    pub fn star_p(&self, f: &Polynomial, g: &Polynomial) -> Result<Polynomial> {
        let prod = self.ctx.uea().mul(&self.psi_p(f)?, &self.psi_p(g)?);
        self.psi_p_inverse(&prod)
    }

    /// Reduced `B₁` words `XᵐYⁿZ^ν` with `m + n + ν ≤ degree`, ascending.
    pub fn b1_words(&self, degree: u32) -> Vec<Word> {
        let mut out = Vec::new();
        for total in 0..=degree {
            for nu in 0..=1u32.min(total) {
                for n in 0..=(total - nu) {
                    out.push(Word::pbw(&[total - nu - n, n, nu]));
                }
            }
        }
        out.sort();
        out
    }

    /// `B₁` monomials `xᵐyⁿz^ν` up to `degree` as polynomials.
    pub fn b1_monomials(&self, degree: u32) -> Vec<Polynomial> {
        self.b1_words(degree)
            .into_iter()
            .map(|w| EnvelopingElement::word(self.algebra(), w, Polynomial::one(self.ring())).to_pbw_polynomial())
            .collect()
    }
}

fn binomial(n: u32, k: u32) -> Rational {
    (0..k).fold(Rational::one(), |acc, i| acc * qi((n - i) as i64) / qi((i + 1) as i64))
}

/// A class in `U_h/(P − c(h))` in reduced form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientElement(EnvelopingElement);

impl QuotientElement {
    pub fn element(&self) -> &EnvelopingElement {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// Reads the reduced form back on the `B₁` basis.
    pub fn to_polynomial(&self) -> Polynomial {
        self.0.to_pbw_polynomial()
    }
}

impl fmt::Display for QuotientElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Kostant decomposition `f = Σ_k p^k f_k` with each `f_k` harmonic in the
/// coordinates, as `(k, f_k)` in descending `k`; zero components are omitted.
///
/// Each coordinate-homogeneous part of degree `d` is projected with
/// `H f = Σ_j (−1)^j p^j Δ^j f / (2^j j! Π_{i=1..j} (2d − 2i + 1))`; the
/// remainder `f − H f` is an exact multiple of `p` and is decomposed in turn.
pub fn harmonic_decompose(f: &Polynomial) -> Result<Vec<(u32, Polynomial)>> {
    let ring = f.ring();
    if ring.coord_count() != 3 {
        return Err(Error::Precondition("harmonic decomposition needs three coordinates".into()));
    }
    let mut p = Polynomial::zero(ring);
    for i in 0..3 {
        p = &p + &Polynomial::var(ring, i).pow(2);
    }
    let mut acc: BTreeMap<u32, Polynomial> = BTreeMap::new();
    for (d, part) in f.coordinate_homogeneous_parts() {
        let mut cur = part;
        let mut deg = d;
        let mut k = 0;
        while !cur.is_zero() {
            let harmonic = harmonic_projection(&cur, &p, deg);
            let rest = &cur - &harmonic;
            if !harmonic.is_zero() {
                let slot = acc.entry(k).or_insert_with(|| Polynomial::zero(ring));
                *slot = &*slot + &harmonic;
            }
            if rest.is_zero() {
                break;
            }
            if deg < 2 {
                return Err(Error::Internal(format!("harmonic remainder {rest} in degree {deg}")));
            }
            let (quot, rem) = rest.div_rem_monic(&p, 2)?;
            if !rem.is_zero() {
                return Err(Error::Internal(format!("{rest} is not divisible by p")));
            }
            cur = quot;
            deg -= 2;
            k += 1;
        }
    }
    Ok(acc.into_iter().rev().filter(|(_, c)| !c.is_zero()).collect())
}

fn harmonic_projection(f: &Polynomial, p: &Polynomial, d: u32) -> Polynomial {
    let mut out = f.clone();
    let mut lap = f.clone();
    let mut p_pow = Polynomial::one(f.ring());
    let mut denom = Rational::one();
    for j in 1..=d / 2 {
        lap = lap.laplacian();
        if lap.is_zero() {
            break;
        }
        p_pow = &p_pow * p;
        denom *= qi(2 * j as i64) * qi((2 * d - 2 * j + 1) as i64);
        let sign = if j % 2 == 1 { -Rational::one() } else { Rational::one() };
        out = &out + &(&p_pow * &lap).scale(&(sign / &denom));
    }
    out
}

/// `⋆_P` as a [`StarProduct`].
#[derive(Debug, Clone)]
pub struct PsiPStar {
    orbit: Arc<OrbitData>,
}

impl PsiPStar {
    pub fn new(orbit: Arc<OrbitData>) -> Self {
        PsiPStar { orbit }
    }
}

impl StarProduct for PsiPStar {
    fn name(&self) -> &str {
        "psi_P"
    }

    fn ring(&self) -> &Arc<PolyRing> {
        self.orbit.ring()
    }

    fn star(&self, f: &Polynomial, g: &Polynomial) -> Result<Polynomial> {
        self.orbit.star_p(f, g)
    }
}

/// `⋆_PΘ` read on polynomials: `f ⋆ g` is the `B₁` representative of `ψ(f)·ψ(g)`.
#[derive(Debug, Clone)]
pub struct QuotientStar {
    orbit: Arc<OrbitData>,
}

impl QuotientStar {
    pub fn new(orbit: Arc<OrbitData>) -> Self {
        QuotientStar { orbit }
    }
}

impl StarProduct for QuotientStar {
    fn name(&self) -> &str {
        "quotient"
    }

    fn ring(&self) -> &Arc<PolyRing> {
        self.orbit.ring()
    }

    fn star(&self, f: &Polynomial, g: &Polynomial) -> Result<Polynomial> {
        let a = self.orbit.class_of(f)?;
        let b = self.orbit.class_of(g)?;
        Ok(self.orbit.star_ptheta(&a, &b)?.to_polynomial())
    }
}

/// Associativity of `⋆_PΘ` on all triples of reduced `B₁` words up to `degree`.
pub fn check_quotient_associativity(orbit: &OrbitData, degree: u32) -> Result<CheckReport> {
    let classes: Vec<QuotientElement> = orbit
        .b1_monomials(degree)
        .iter()
        .map(|f| orbit.class_of(f))
        .collect::<Result<_>>()?;
    let n = classes.len();
    // Products of pairs are shared by many triples.
    let pairs: Vec<QuotientElement> = (0..n * n)
        .into_par_iter()
        .map(|k| orbit.star_ptheta(&classes[k / n], &classes[k % n]))
        .collect::<Result<_>>()?;
    let outcomes: Vec<Result<Option<Witness>>> = (0..n * n * n)
        .into_par_iter()
        .map(|k| {
            let (a, b, c) = (k / (n * n), (k / n) % n, k % n);
            let left = orbit.star_ptheta(&pairs[a * n + b], &classes[c])?;
            let right = orbit.star_ptheta(&classes[a], &pairs[b * n + c])?;
            Ok((left != right).then(|| {
                Witness::new(
                    "triple",
                    format!("({}, {}, {}): (ab)c = {left}, a(bc) = {right}", classes[a], classes[b], classes[c]),
                )
            }))
        })
        .collect();
    let mut report = CheckReport::new("associativity[quotient]");
    report.absorb(outcomes.into_iter().collect::<Result<Vec<_>>>()?, 1);
    Ok(report)
}

/// Rank data for the independence of `B₁` modulo `I_h` in filtration degree `D`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndependenceData {
    /// Number of PBW words of length at most `D`.
    pub words: usize,
    /// Rank of `I_h ∩ U_{≤D}`, spanned by `w·(P − c)` for `|w| ≤ D − 2`.
    pub ideal_rank: usize,
    pub b1_count: usize,
    /// Rank of the ideal part together with the `B₁` words.
    pub total_rank: usize,
}

impl IndependenceData {
    /// `B₁` is independent modulo the ideal and, with it, spans `U_{≤D}`.
    pub fn holds(&self) -> bool {
        self.total_rank == self.ideal_rank + self.b1_count && self.total_rank == self.words
    }
}

/// Exact rank test of `B₁` modulo `I_h` after specializing `h` and `r` to the
/// given rationals (`r` is ignored when the radius is numeric).
pub fn b1_independence(orbit: &OrbitData, degree: u32, h: &Rational, r: &Rational) -> Result<IndependenceData> {
    let alg = orbit.algebra();
    let ring = orbit.ring();
    let uea = orbit.context().uea();
    let all_words: Vec<Word> = crate::poly::monomials_up_to(ring, &[0, 1, 2], degree)
        .into_iter()
        .map(|m| Word::pbw(&[m.exp(0), m.exp(1), m.exp(2)]))
        .collect();
    let index: BTreeMap<&Word, usize> = all_words.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let r_index = ring.index_of(RADIUS).expect("ring carries r");
    let specialize = |c: &Polynomial| -> Result<Rational> {
        let v = c.evaluate_var(ring.h(), h).evaluate_var(r_index, r);
        if v.is_constant() || v.is_zero() {
            Ok(v.constant_term())
        } else {
            Err(Error::Precondition(format!("coefficient {v} is not numeric after specialization")))
        }
    };
    let to_row = |e: &EnvelopingElement| -> Result<Vec<Rational>> {
        let mut row = vec![Rational::zero(); all_words.len()];
        for (w, c) in e.terms() {
            let i = index
                .get(w)
                .ok_or_else(|| Error::Internal(format!("word of length {} exceeds the bound", w.len())))?;
            row[*i] = specialize(c)?;
        }
        Ok(row)
    };
    let generator = orbit.quantum_generator();
    let ideal_rows: Vec<Vec<Rational>> = all_words
        .iter()
        .filter(|w| w.len() + 2 <= degree as usize)
        .map(|w| to_row(&uea.mul(&EnvelopingElement::word(alg, w.clone(), Polynomial::one(ring)), &generator)))
        .collect::<Result<_>>()?;
    let b1_rows: Vec<Vec<Rational>> = orbit
        .b1_words(degree)
        .into_iter()
        .map(|w| to_row(&EnvelopingElement::word(alg, w, Polynomial::one(ring))))
        .collect::<Result<_>>()?;
    let ideal_rank = if ideal_rows.is_empty() {
        0
    } else {
        Matrix::from_rows(ideal_rows.clone()).rank()
    };
    let b1_count = b1_rows.len();
    let total_rank = Matrix::from_rows(ideal_rows.into_iter().chain(b1_rows).collect()).rank();
    Ok(IndependenceData {
        words: all_words.len(),
        ideal_rank,
        b1_count,
        total_rank,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    fn v(o: &OrbitData, name: &str) -> Polynomial {
        Polynomial::var_named(o.ring(), name).unwrap()
    }

    #[test]
    fn levels() {
        let o = OrbitData::su2(LevelKind::Shifted);
        assert_eq!(o.level().to_string(), "r^2 + h*r");
        assert_eq!(OrbitData::su2(LevelKind::Plain).level().to_string(), "r^2");
        let ring = o.ring();
        let c = deformed_level(LevelKind::Shifted, &Radius::Value(q(3, 2)), ring);
        assert_eq!(c.evaluate_var(ring.h(), &Rational::zero()), Polynomial::constant(ring, q(9, 4)));
    }

    #[test]
    fn psi_of_generator_reduces_to_zero() {
        for kind in [LevelKind::Plain, LevelKind::Shifted] {
            let o = OrbitData::su2(kind);
            let img = o.psi_su2(&o.classical_generator()).unwrap();
            assert_eq!(img, o.quantum_generator());
            assert!(o.reduce(&img).unwrap().is_zero());
        }
    }

    #[test]
    fn psi_of_z_squared() {
        let o = OrbitData::su2(LevelKind::Plain);
        let img = o.psi_su2(&v(&o, "z").pow(2)).unwrap();
        assert_eq!(img.to_string(), "Z^2");
        assert_eq!(o.psi_su2(&v(&o, "x")).unwrap().to_string(), "X");
    }

    #[test]
    fn harmonic_examples() {
        let o = OrbitData::su2(LevelKind::Plain);
        let x = v(&o, "x");
        let parts = harmonic_decompose(&x.pow(2)).unwrap();
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[0], (1, Polynomial::constant(o.ring(), q(1, 3))));
        assert_eq!(parts[1].1, &x.pow(2) - &o.invariant().scale(&q(1, 3)));
        assert_eq!(
            harmonic_decompose(o.invariant()).unwrap(),
            vec![(1, Polynomial::one(o.ring()))]
        );
        let xy = &x * &v(&o, "y");
        assert_eq!(harmonic_decompose(&xy).unwrap(), vec![(0, xy)]);
    }

    #[test]
    fn p_acts_by_multiplication() {
        for kind in [LevelKind::Plain, LevelKind::Shifted] {
            let o = OrbitData::su2(kind);
            let f = &(&v(&o, "x") * &v(&o, "z")) + &v(&o, "y").pow(2);
            assert_eq!(o.star_p(o.invariant(), &f).unwrap(), o.invariant() * &f);
            assert_eq!(o.star_p(&f, o.invariant()).unwrap(), o.invariant() * &f);
            assert_eq!(o.star_p(&Polynomial::one(o.ring()), &f).unwrap(), f);
        }
    }

    #[test]
    fn star_p_commutator() {
        let o = OrbitData::su2(LevelKind::Plain);
        let (x, y) = (v(&o, "x"), v(&o, "y"));
        let c = &o.star_p(&x, &y).unwrap() - &o.star_p(&y, &x).unwrap();
        assert_eq!(c, &Polynomial::h(o.ring()) * &v(&o, "z"));
    }

    #[test]
    fn b1_is_a_basis_at_degree_four() {
        let o = OrbitData::su2(LevelKind::Shifted);
        let d = b1_independence(&o, 4, &q(3, 7), &q(5, 11)).unwrap();
        assert_eq!(d.words, 35);
        assert!(d.holds(), "{d:?}");
    }

    #[test]
    fn quotient_unit_and_relation() {
        let o = OrbitData::su2(LevelKind::Plain);
        let z = o.class_of(&v(&o, "z")).unwrap();
        let one = o.class_of(&Polynomial::one(o.ring())).unwrap();
        assert_eq!(o.star_ptheta(&one, &z).unwrap(), z);
        assert_eq!(o.star_ptheta(&z, &z).unwrap().to_string(), "-X^2 - Y^2 + r^2");
    }
}
