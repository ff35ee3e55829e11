//! Gluing chart-local star products with a partition of unity, at jet order `K`.
//!
//! Every chart shares one polynomial coordinate space. Chart products after the
//! first are transported from it: `f ⋆_s g = T_s1(T_s1⁻¹f ⋆_1 T_s1⁻¹g)`.
//! With `A_r = φ_r Id + Σ_{s≠r} φ_s T_sr`, the glued product is
//! `A_r(A_r⁻¹f ⋆_r A_r⁻¹g)`, and `A_r T_rt = A_t` makes it chart-independent.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::poly::{coordinate_monomials, format_monomial, monomials_up_to, Monomial, PolyRing, Polynomial};
use crate::report::{CheckReport, Witness};
use crate::scalar::{q, qi, Rational};
use crate::star::{MoyalR2n, StarProduct};

/// `Σ_α c_α(x) ∂^α` with polynomial coefficients; multi-indices run over coordinates.
#[derive(Clone, PartialEq, Eq)]
pub struct DiffOperator {
    ring: Arc<PolyRing>,
    terms: BTreeMap<Vec<u32>, Polynomial>,
}

fn binomial(n: u32, k: u32) -> Rational {
    (0..k).fold(Rational::one(), |acc, i| acc * qi((n - i) as i64) / qi((i + 1) as i64))
}

/// All `γ ≤ α` componentwise.
fn sub_indices(alpha: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for &a in alpha {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..=a).map(move |g| {
                    let mut p = prefix.clone();
                    p.push(g);
                    p
                })
            })
            .collect();
    }
    out
}

impl DiffOperator {
    pub fn zero(ring: &Arc<PolyRing>) -> Self {
        DiffOperator {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(ring: &Arc<PolyRing>) -> Self {
        DiffOperator::multiplication(&Polynomial::one(ring))
    }

    /// Multiplication by `c`.
    pub fn multiplication(c: &Polynomial) -> Self {
        let mut d = DiffOperator::zero(c.ring());
        d.add_term(vec![0; c.ring().coord_count()], c.clone());
        d
    }

    /// `c · ∂^α`.
    pub fn term(alpha: Vec<u32>, c: Polynomial) -> Self {
        let mut d = DiffOperator::zero(c.ring());
        d.add_term(alpha, c);
        d
    }

    /// `∂/∂x_i`.
    pub fn partial(ring: &Arc<PolyRing>, i: usize) -> Self {
        let mut alpha = vec![0; ring.coord_count()];
        alpha[i] = 1;
        DiffOperator::term(alpha, Polynomial::one(ring))
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, Polynomial> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, alpha: Vec<u32>, c: Polynomial) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(alpha.clone()).or_insert_with(|| Polynomial::zero(&self.ring));
        *slot = &*slot + &c;
        if slot.is_zero() {
            self.terms.remove(&alpha);
        }
    }

    pub fn apply(&self, f: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero(f.ring());
        for (alpha, c) in &self.terms {
            let d = f.partial_multi(alpha);
            if !d.is_zero() {
                out = &out + &(c * &d);
            }
        }
        out
    }

    /// `self ∘ other`, by the Leibniz rule.
    pub fn compose(&self, other: &DiffOperator) -> DiffOperator {
        let mut out = DiffOperator::zero(&self.ring);
        for (alpha, a) in &self.terms {
            for gamma in sub_indices(alpha) {
                let weight = alpha.iter().zip(&gamma).fold(Rational::one(), |acc, (&x, &y)| acc * binomial(x, y));
                for (beta, b) in &other.terms {
                    let db = b.partial_multi(&gamma);
                    if db.is_zero() {
                        continue;
                    }
                    let idx: Vec<u32> = alpha.iter().zip(&gamma).zip(beta).map(|((&x, &y), &z)| x - y + z).collect();
                    out.add_term(idx, (a * &db).scale(&weight));
                }
            }
        }
        out
    }

    pub fn add(&self, other: &DiffOperator) -> DiffOperator {
        let mut out = self.clone();
        for (alpha, c) in &other.terms {
            out.add_term(alpha.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &DiffOperator) -> DiffOperator {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> DiffOperator {
        let mut out = DiffOperator::zero(&self.ring);
        for (alpha, x) in &self.terms {
            out.add_term(alpha.clone(), x.scale(c));
        }
        out
    }

    /// Left multiplication by a polynomial.
    pub fn left_mul(&self, c: &Polynomial) -> DiffOperator {
        let mut out = DiffOperator::zero(&self.ring);
        for (alpha, x) in &self.terms {
            out.add_term(alpha.clone(), c * x);
        }
        out
    }
}

impl fmt::Display for DiffOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (alpha, c) in self.terms.iter().rev() {
            let mut d = Vec::new();
            for (i, &a) in alpha.iter().enumerate() {
                match a {
                    0 => {}
                    1 => d.push(format!("d/d{}", self.ring.name(i))),
                    _ => d.push(format!("d/d{}^{a}", self.ring.name(i))),
                }
            }
            let coeff = if c.len() > 1 { format!("({c})") } else { c.to_string() };
            let body = match (coeff.as_str(), d.is_empty()) {
                (_, true) => coeff.clone(),
                ("1", false) => d.join("*"),
                _ => format!("{coeff}*{}", d.join("*")),
            };
            if first {
                write!(f, "{body}")?;
            } else {
                write!(f, " + {body}")?;
            }
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for DiffOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DiffOperator({self})")
    }
}

/// `D_0 + h D_1 + … + h^K D_K`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FormalOperator {
    ring: Arc<PolyRing>,
    parts: Vec<DiffOperator>,
}

impl FormalOperator {
    pub fn new(ring: &Arc<PolyRing>, order: u32, parts: Vec<DiffOperator>) -> Self {
        let mut parts = parts;
        parts.truncate(order as usize + 1);
        parts.resize(order as usize + 1, DiffOperator::zero(ring));
        FormalOperator {
            ring: ring.clone(),
            parts,
        }
    }

    pub fn identity(ring: &Arc<PolyRing>, order: u32) -> Self {
        FormalOperator::new(ring, order, vec![DiffOperator::identity(ring)])
    }

    pub fn zero(ring: &Arc<PolyRing>, order: u32) -> Self {
        FormalOperator::new(ring, order, Vec::new())
    }

    /// `exp(h D) = Σ_k h^k D^k / k!`.
    pub fn exp_h(d: &DiffOperator, order: u32) -> Self {
        FormalOperator::exp_h_power(d, 1, order)
    }

    /// `exp(h^e D)` truncated at `h^order`; `e ≥ 1`.
    pub fn exp_h_power(d: &DiffOperator, e: u32, order: u32) -> Self {
        let ring = d.ring();
        let mut parts = vec![DiffOperator::zero(ring); order as usize + 1];
        parts[0] = DiffOperator::identity(ring);
        let mut power = DiffOperator::identity(ring);
        let mut m = 1;
        while e * m <= order {
            power = power.compose(d).scale(&qi(m as i64).recip());
            parts[(e * m) as usize] = power.clone();
            m += 1;
        }
        FormalOperator::new(ring, order, parts)
    }

    pub fn order(&self) -> u32 {
        self.parts.len() as u32 - 1
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn parts(&self) -> &[DiffOperator] {
        &self.parts
    }

    pub fn is_identity(&self) -> bool {
        *self == FormalOperator::identity(&self.ring, self.order())
    }

    /// `Σ h^k D_k f`, truncated at `h^K`.
    pub fn apply(&self, f: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero(f.ring());
        for (k, d) in self.parts.iter().enumerate() {
            if d.is_zero() {
                continue;
            }
            out = &out + &d.apply(f).mul_h_power(k as u32, &Rational::one());
        }
        out.truncate_h(self.order())
    }

    pub fn compose(&self, other: &FormalOperator) -> FormalOperator {
        let k_max = self.order().min(other.order()) as usize;
        let mut parts = vec![DiffOperator::zero(&self.ring); k_max + 1];
        for i in 0..=k_max {
            for j in 0..=(k_max - i) {
                if self.parts[i].is_zero() || other.parts[j].is_zero() {
                    continue;
                }
                parts[i + j] = parts[i + j].add(&self.parts[i].compose(&other.parts[j]));
            }
        }
        FormalOperator::new(&self.ring, k_max as u32, parts)
    }

    pub fn add(&self, other: &FormalOperator) -> FormalOperator {
        let k = self.order().min(other.order()) as usize;
        let parts = (0..=k).map(|i| self.parts[i].add(&other.parts[i])).collect();
        FormalOperator::new(&self.ring, k as u32, parts)
    }

    pub fn sub(&self, other: &FormalOperator) -> FormalOperator {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> FormalOperator {
        let parts = self.parts.iter().map(|d| d.scale(c)).collect();
        FormalOperator::new(&self.ring, self.order(), parts)
    }

    /// `φ · self`.
    pub fn left_mul(&self, phi: &Polynomial) -> FormalOperator {
        let parts = self.parts.iter().map(|d| d.left_mul(phi)).collect();
        FormalOperator::new(&self.ring, self.order(), parts)
    }

    /// Order-by-order inverse; requires `D_0 = Id`.
    pub fn inverse(&self) -> Result<FormalOperator> {
        let id = FormalOperator::identity(&self.ring, self.order());
        if self.parts[0] != DiffOperator::identity(&self.ring) {
            return Err(Error::Precondition(format!(
                "leading part {} is not the identity",
                self.parts[0]
            )));
        }
        // (Id + N)^{-1} = Σ_m (−N)^m, with N = O(h).
        let minus_n = id.sub(self);
        let mut out = id.clone();
        let mut power = id;
        for _ in 0..self.order() {
            power = power.compose(&minus_n);
            out = out.add(&power);
        }
        Ok(out)
    }
}

impl fmt::Display for FormalOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (k, d) in self.parts.iter().enumerate() {
            if d.is_zero() {
                continue;
            }
            let hk = match k {
                0 => String::new(),
                1 => "h*".into(),
                _ => format!("h^{k}*"),
            };
            parts.push(format!("{hk}[{d}]"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// `T(T⁻¹f ⋆ T⁻¹g)`, truncated at the operator order.
pub struct TransportedStar {
    name: String,
    base: Arc<dyn StarProduct>,
    t: FormalOperator,
    t_inv: FormalOperator,
}

impl TransportedStar {
    pub fn new(name: impl Into<String>, base: Arc<dyn StarProduct>, t: FormalOperator) -> Result<Self> {
        let t_inv = t.inverse()?;
        Ok(TransportedStar {
            name: name.into(),
            base,
            t,
            t_inv,
        })
    }
}

impl StarProduct for TransportedStar {
    fn name(&self) -> &str {
        &self.name
    }

    fn ring(&self) -> &Arc<PolyRing> {
        self.t.ring()
    }

    fn star(&self, f: &Polynomial, g: &Polynomial) -> Result<Polynomial> {
        let f = f.remap(self.ring())?;
        let g = g.remap(self.ring())?;
        let k = self.t.order();
        let inner = self.base.star(&self.t_inv.apply(&f), &self.t_inv.apply(&g))?;
        Ok(self.t.apply(&inner.remap(self.ring())?.truncate_h(k)))
    }
}

/// Charts, weights, transitions `T_sr` (all ordered pairs) and chart products.
pub struct GluingInstance {
    ring: Arc<PolyRing>,
    order: u32,
    weights: Vec<Polynomial>,
    transitions: Vec<Vec<FormalOperator>>,
    products: Vec<Arc<dyn StarProduct>>,
    test_degree: u32,
}

impl fmt::Debug for GluingInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GluingInstance({} charts, K = {})", self.weights.len(), self.order)
    }
}

impl GluingInstance {
    /// `given` holds `((s, r), T_sr)` with 0-based charts. Missing `T_rs` are
    /// inverses of given `T_sr`, `T_rr = Id`, and remaining pairs route through
    /// chart 0. Chart 0 uses `base`; chart `s` transports it through `T_s0`.
    pub fn new(
        ring: &Arc<PolyRing>,
        order: u32,
        weights: Vec<Polynomial>,
        base: Arc<dyn StarProduct>,
        given: Vec<((usize, usize), FormalOperator)>,
    ) -> Result<Self> {
        let m = weights.len();
        if m == 0 {
            return Err(Error::Precondition("a gluing instance needs at least one chart".into()));
        }
        let mut table: Vec<Vec<Option<FormalOperator>>> = vec![vec![None; m]; m];
        for ((s, r), t) in given {
            if s >= m || r >= m {
                return Err(Error::Precondition(format!("transition {} {} names a missing chart", s + 1, r + 1)));
            }
            if t.order() < order {
                return Err(Error::Precondition(format!("transition {} {} has order below {order}", s + 1, r + 1)));
            }
            table[s][r] = Some(FormalOperator::new(ring, order, t.parts().to_vec()));
        }
        for r in 0..m {
            table[r][r].get_or_insert_with(|| FormalOperator::identity(ring, order));
        }
        for s in 0..m {
            for r in 0..m {
                if table[s][r].is_none() {
                    if let Some(t) = table[r][s].clone() {
                        table[s][r] = Some(t.inverse()?);
                    }
                }
            }
        }
        for s in 0..m {
            for r in 0..m {
                if table[s][r].is_none() {
                    match (table[s][0].clone(), table[0][r].clone()) {
                        (Some(a), Some(b)) => table[s][r] = Some(a.compose(&b)),
                        _ => {
                            return Err(Error::Precondition(format!(
                                "no transition between charts {} and {}",
                                s + 1,
                                r + 1
                            )))
                        }
                    }
                }
            }
        }
        let transitions: Vec<Vec<FormalOperator>> =
            table.into_iter().map(|row| row.into_iter().map(|t| t.expect("filled")).collect()).collect();
        let mut products: Vec<Arc<dyn StarProduct>> = vec![base.clone()];
        for s in 1..m {
            let t = transitions[s][0].clone();
            products.push(Arc::new(TransportedStar::new(format!("chart{}", s + 1), base.clone(), t)?));
        }
        Ok(GluingInstance {
            ring: ring.clone(),
            order,
            weights: weights.into_iter().map(|w| w.remap(ring)).collect::<Result<_>>()?,
            transitions,
            products,
            test_degree: 3,
        })
    }

    /// Two charts on the plane with Moyal on chart 1, `T_21 = exp(h ∂_q∂_p)`,
    /// and weights `1/2 + q`, `1/2 − q`.
    pub fn two_chart_moyal(order: u32) -> Self {
        let base = MoyalR2n::plane(Some(order));
        let ring = base.ring().clone();
        let d = DiffOperator::term(vec![1, 1], Polynomial::one(&ring));
        let qv = Polynomial::var(&ring, 0);
        let half = Polynomial::constant(&ring, q(1, 2));
        let weights = vec![&half + &qv, &half - &qv];
        GluingInstance::new(
            &ring,
            order,
            weights,
            Arc::new(base),
            vec![((1, 0), FormalOperator::exp_h(&d, order))],
        )
        .expect("valid two-chart instance")
    }

    /// Same charts and weights with identity transitions.
    pub fn identity_transitions(order: u32) -> Self {
        let base = MoyalR2n::plane(Some(order));
        let ring = base.ring().clone();
        let qv = Polynomial::var(&ring, 0);
        let half = Polynomial::constant(&ring, q(1, 2));
        let id = FormalOperator::identity(&ring, order);
        GluingInstance::new(&ring, order, vec![&half + &qv, &half - &qv], Arc::new(base), vec![((1, 0), id)])
            .expect("valid identity instance")
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn charts(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[Polynomial] {
        &self.weights
    }

    pub fn transition(&self, s: usize, r: usize) -> &FormalOperator {
        &self.transitions[s][r]
    }

    pub fn product(&self, r: usize) -> &Arc<dyn StarProduct> {
        &self.products[r]
    }

    /// Degree bound of the monomial test basis used by the checks.
    pub fn with_test_degree(mut self, d: u32) -> Self {
        self.test_degree = d;
        self
    }

    /// Replaces `T_sr` without touching anything else (for negative tests).
    pub fn override_transition(&mut self, s: usize, r: usize, t: FormalOperator) {
        self.transitions[s][r] = t;
    }

    /// Replaces the weights; nothing else is rebuilt.
    pub fn set_weights(&mut self, weights: Vec<Polynomial>) -> Result<()> {
        if weights.len() != self.charts() {
            return Err(Error::DimensionMismatch(format!(
                "{} weights for {} charts",
                weights.len(),
                self.charts()
            )));
        }
        self.weights = weights.into_iter().map(|w| w.remap(&self.ring)).collect::<Result<_>>()?;
        Ok(())
    }

    pub fn check_partition(&self) -> Result<()> {
        let mut sum = Polynomial::zero(&self.ring);
        for w in &self.weights {
            sum = &sum + w;
        }
        if sum != Polynomial::one(&self.ring) {
            return Err(Error::InvariantBreach(format!("weights sum to {sum}, not 1")));
        }
        Ok(())
    }

    fn test_basis(&self) -> Vec<Polynomial> {
        coordinate_monomials(&self.ring, self.test_degree)
    }

    /// `T_ts ∘ T_sr = T_tr` on the test basis, for every triple.
    pub fn check_cocycle(&self) -> CheckReport {
        let m = self.charts();
        let basis = self.test_basis();
        let mut report = CheckReport::new("cocycle");
        for t in 0..m {
            for s in 0..m {
                for r in 0..m {
                    for f in &basis {
                        report.checked += 1;
                        let lhs = self.transitions[t][s].apply(&self.transitions[s][r].apply(f));
                        let rhs = self.transitions[t][r].apply(f);
                        if lhs != rhs {
                            report.fail(Witness::new(
                                "triple",
                                format!("(t,s,r) = ({},{},{}), f = {f}: T_ts T_sr f = {lhs}, T_tr f = {rhs}", t + 1, s + 1, r + 1),
                            ));
                            return report;
                        }
                    }
                }
            }
        }
        report
    }

    /// `T_sr(f ⋆_r g) = T_sr f ⋆_s T_sr g` on test pairs.
    pub fn check_intertwiner(&self) -> Result<CheckReport> {
        let m = self.charts();
        let basis = self.test_basis();
        let k = self.order;
        let mut cases = Vec::new();
        for s in 0..m {
            for r in 0..m {
                if s == r {
                    continue;
                }
                for f in &basis {
                    for g in &basis {
                        cases.push((s, r, f, g));
                    }
                }
            }
        }
        let outcomes: Vec<Result<Option<Witness>>> = cases
            .par_iter()
            .map(|&(s, r, f, g)| {
                let t = &self.transitions[s][r];
                let lhs = t.apply(&self.products[r].star(f, g)?.truncate_h(k));
                let rhs = self.products[s].star(&t.apply(f), &t.apply(g))?.truncate_h(k);
                Ok((lhs != rhs).then(|| {
                    Witness::new(
                        "pair",
                        format!("(s,r) = ({},{}), f = {f}, g = {g}: T(f*g) = {lhs}, Tf*Tg = {rhs}", s + 1, r + 1),
                    )
                }))
            })
            .collect();
        let mut report = CheckReport::new("intertwiner");
        report.absorb(outcomes.into_iter().collect::<Result<Vec<_>>>()?, 1);
        Ok(report)
    }

    /// `A_r = φ_r Id + Σ_{s≠r} φ_s T_sr`.
    pub fn build_a(&self, r: usize) -> Result<FormalOperator> {
        self.check_partition()?;
        let mut a = FormalOperator::identity(&self.ring, self.order).left_mul(&self.weights[r]);
        for s in 0..self.charts() {
            if s != r {
                a = a.add(&self.transitions[s][r].left_mul(&self.weights[s]));
            }
        }
        Ok(a)
    }

    /// `A_r(A_r⁻¹f ⋆_r A_r⁻¹g)` modulo `h^{K+1}`.
    pub fn glued_star(&self, r: usize, f: &Polynomial, g: &Polynomial) -> Result<Polynomial> {
        let a = self.build_a(r)?;
        let a_inv = a.inverse()?;
        self.glued_with(&a, &a_inv, r, f, g)
    }

    fn glued_with(
        &self,
        a: &FormalOperator,
        a_inv: &FormalOperator,
        r: usize,
        f: &Polynomial,
        g: &Polynomial,
    ) -> Result<Polynomial> {
        let f = f.remap(&self.ring)?;
        let g = g.remap(&self.ring)?;
        let inner = self.products[r].star(&a_inv.apply(&f), &a_inv.apply(&g))?;
        Ok(a.apply(&inner.truncate_h(self.order)))
    }

    /// The glued product computed in chart `r`, as a [`StarProduct`].
    pub fn glued(self: &Arc<Self>, r: usize) -> Result<GluedStar> {
        let a = self.build_a(r)?;
        let a_inv = a.inverse()?;
        Ok(GluedStar {
            instance: self.clone(),
            chart: r,
            a,
            a_inv,
        })
    }

    /// `A_r ∘ T_rt = A_t` on the test basis, for every pair.
    pub fn check_compatibility(&self) -> Result<CheckReport> {
        let m = self.charts();
        let a: Vec<FormalOperator> = (0..m).map(|r| self.build_a(r)).collect::<Result<_>>()?;
        let basis = self.test_basis();
        let mut report = CheckReport::new("compatibility");
        for r in 0..m {
            for t in 0..m {
                for f in &basis {
                    report.checked += 1;
                    let lhs = a[r].apply(&self.transitions[r][t].apply(f));
                    let rhs = a[t].apply(f);
                    if lhs != rhs {
                        report.fail(Witness::new(
                            "pair",
                            format!("(r,t) = ({},{}), f = {f}: A_r T_rt f = {lhs}, A_t f = {rhs}", r + 1, t + 1),
                        ));
                        return Ok(report);
                    }
                }
            }
        }
        Ok(report)
    }

    /// Glued products from every chart agree on test pairs.
    pub fn check_chart_independence(&self) -> Result<CheckReport> {
        let m = self.charts();
        let ops: Vec<(FormalOperator, FormalOperator)> = (0..m)
            .map(|r| {
                let a = self.build_a(r)?;
                let inv = a.inverse()?;
                Ok((a, inv))
            })
            .collect::<Result<_>>()?;
        let basis = self.test_basis();
        let pairs: Vec<(&Polynomial, &Polynomial)> = basis.iter().flat_map(|f| basis.iter().map(move |g| (f, g))).collect();
        let outcomes: Vec<Result<Option<Witness>>> = pairs
            .par_iter()
            .map(|(f, g)| {
                let first = self.glued_with(&ops[0].0, &ops[0].1, 0, f, g)?;
                for (r, (a, inv)) in ops.iter().enumerate().skip(1) {
                    let other = self.glued_with(a, inv, r, f, g)?;
                    if other != first {
                        return Ok(Some(Witness::new(
                            "pair",
                            format!("f = {f}, g = {g}: chart 1 gives {first}, chart {} gives {other}", r + 1),
                        )));
                    }
                }
                Ok(None)
            })
            .collect();
        let mut report = CheckReport::new("chart independence");
        report.absorb(outcomes.into_iter().collect::<Result<Vec<_>>>()?, 1);
        Ok(report)
    }
}

/// The glued product seen from one chart.
pub struct GluedStar {
    instance: Arc<GluingInstance>,
    chart: usize,
    a: FormalOperator,
    a_inv: FormalOperator,
}

impl GluedStar {
    pub fn chart(&self) -> usize {
        self.chart
    }

    pub fn a(&self) -> &FormalOperator {
        &self.a
    }
}

impl StarProduct for GluedStar {
    fn name(&self) -> &str {
        "glued"
    }

    fn ring(&self) -> &Arc<PolyRing> {
        self.instance.ring()
    }

    fn star(&self, f: &Polynomial, g: &Polynomial) -> Result<Polynomial> {
        self.instance.glued_with(&self.a, &self.a_inv, self.chart, f, g)
    }
}

/// Bounds of the ansatz used by [`find_equivalence`].
#[derive(Clone, Copy, Debug)]
pub struct EquivalenceSearch {
    pub order: u32,
    /// Test pairs are coordinate monomials of degree at most this.
    pub test_degree: u32,
    /// Coefficient degree of each `E_k` and of each vector-field correction.
    pub coeff_degree: u32,
}

/// Searches for `E = Id + O(h)` with `E(f ⋆_a g) = Ef ⋆_b Eg` modulo `h^{K+1}`
/// on test pairs.
///
/// `E` is built as a product of factors `(Id + h^k X_k) ∘ exp(h^{k−1} ξ_k)`. At
/// step `k` the current transport of `⋆_a` agrees with `⋆_b` below order `k`; the
/// order-`k` gap is linear in `X_k` and in the vector field `ξ_k` (a derivation, so
/// `exp(h^{k−1}ξ_k)` only moves orders `≥ k`), and both are found by one exact
/// linear solve. `None` means no solution within the ansatz.
pub fn find_equivalence(
    a: &dyn StarProduct,
    b: &dyn StarProduct,
    search: EquivalenceSearch,
) -> Result<Option<FormalOperator>> {
    let ring = a.ring().clone();
    let n = ring.coord_count();
    let k_max = search.order;
    let basis = coordinate_monomials(&ring, search.test_degree);
    let pairs: Vec<(Polynomial, Polynomial)> = basis
        .iter()
        .flat_map(|f| basis.iter().map(move |g| (f.clone(), g.clone())))
        .collect();
    let coords: Vec<usize> = (0..n).collect();
    let coeff_monos = monomials_up_to(&ring, &coords, search.coeff_degree);
    let op_basis: Vec<DiffOperator> = monomials_up_to(&ring, &coords, 2 * search.test_degree)
        .into_iter()
        .flat_map(|alpha| {
            let alpha: Vec<u32> = (0..n).map(|i| alpha.exp(i)).collect();
            coeff_monos
                .iter()
                .map(|m| DiffOperator::term(alpha.clone(), Polynomial::term(&ring, m.clone(), Rational::one())))
                .collect::<Vec<_>>()
        })
        .collect();
    let field_basis: Vec<DiffOperator> = (0..n)
        .flat_map(|i| {
            coeff_monos
                .iter()
                .map(|m| DiffOperator::partial(&ring, i).left_mul(&Polynomial::term(&ring, m.clone(), Rational::one())))
                .collect::<Vec<_>>()
        })
        .collect();
    let b_coeffs: Vec<Polynomial> = pairs
        .par_iter()
        .map(|(f, g)| Ok(b.star(f, g)?.remap(&ring)?.truncate_h(k_max)))
        .collect::<Result<_>>()?;
    // Order-one part of ⋆_a (shared by every transport of it).
    let first_order = |f: &Polynomial, g: &Polynomial| -> Result<Polynomial> {
        Ok(a.star(f, g)?.remap(&ring)?.h_coefficient(1))
    };

    let mut e = FormalOperator::identity(&ring, k_max);
    for k in 1..=k_max {
        let e_inv = e.inverse()?;
        let gap: Vec<Polynomial> = pairs
            .par_iter()
            .zip(&b_coeffs)
            .map(|((f, g), target)| {
                let moved = e.apply(&a.star(&e_inv.apply(f), &e_inv.apply(g))?.remap(&ring)?.truncate_h(k_max));
                Ok((target - &moved).h_coefficient(k))
            })
            .collect::<Result<_>>()?;
        if gap.iter().all(|p| p.is_zero()) {
            continue;
        }
        let mut columns: Vec<Vec<Polynomial>> = op_basis
            .par_iter()
            .map(|x| {
                pairs
                    .iter()
                    .map(|(f, g)| &(&x.apply(&(f * g)) - &(&x.apply(f) * g)) - &(f * &x.apply(g)))
                    .collect()
            })
            .collect();
        if k >= 2 {
            let field_cols: Vec<Vec<Polynomial>> = field_basis
                .par_iter()
                .map(|xi| {
                    pairs
                        .iter()
                        .map(|(f, g)| {
                            let moved = &first_order(&xi.apply(f), g)? + &first_order(f, &xi.apply(g))?;
                            Ok(&xi.apply(&first_order(f, g)?) - &moved)
                        })
                        .collect::<Result<_>>()
                })
                .collect::<Result<_>>()?;
            columns.extend(field_cols);
        }
        let Some(sol) = solve_polynomial_system(&columns, &gap) else {
            return Ok(None);
        };
        let mut x = DiffOperator::zero(&ring);
        for (o, c) in op_basis.iter().zip(&sol) {
            if !c.is_zero() {
                x = x.add(&o.scale(c));
            }
        }
        let mut step = FormalOperator::identity(&ring, k_max);
        let mut parts = step.parts().to_vec();
        parts[k as usize] = x;
        step = FormalOperator::new(&ring, k_max, parts);
        if k >= 2 {
            let mut xi = DiffOperator::zero(&ring);
            for (o, c) in field_basis.iter().zip(&sol[op_basis.len()..]) {
                if !c.is_zero() {
                    xi = xi.add(&o.scale(c));
                }
            }
            step = step.compose(&FormalOperator::exp_h_power(&xi, k - 1, k_max));
        }
        e = step.compose(&e);
    }
    for (f, g) in &pairs {
        let lhs = e.apply(&a.star(f, g)?.remap(&ring)?.truncate_h(k_max));
        let rhs = b.star(&e.apply(f), &e.apply(g))?.remap(&ring)?.truncate_h(k_max);
        if lhs != rhs {
            return Ok(None);
        }
    }
    Ok(Some(e))
}

/// Solves `Σ_u x_u columns[u][i] = rhs[i]` coefficient-wise over rationals.
fn solve_polynomial_system(columns: &[Vec<Polynomial>], rhs: &[Polynomial]) -> Option<Vec<Rational>> {
    let mut keys: BTreeSet<(usize, Monomial)> = BTreeSet::new();
    for (i, r) in rhs.iter().enumerate() {
        keys.extend(r.terms().keys().map(|m| (i, m.clone())));
    }
    for col in columns {
        for (i, p) in col.iter().enumerate() {
            keys.extend(p.terms().keys().map(|m| (i, m.clone())));
        }
    }
    let index: BTreeMap<&(usize, Monomial), usize> = keys.iter().enumerate().map(|(k, key)| (key, k)).collect();
    let mut m: Matrix<Rational> = Matrix::zeros(keys.len(), columns.len());
    let mut b = vec![Rational::zero(); keys.len()];
    for (u, col) in columns.iter().enumerate() {
        for (i, p) in col.iter().enumerate() {
            for (mono, c) in p.terms() {
                m[(index[&(i, mono.clone())], u)] = c.clone();
            }
        }
    }
    for (i, r) in rhs.iter().enumerate() {
        for (mono, c) in r.terms() {
            b[index[&(i, mono.clone())]] = c.clone();
        }
    }
    if keys.is_empty() {
        return Some(vec![Rational::zero(); columns.len()]);
    }
    m.solve(&b)
}

/// Pretty form of a coefficient monomial, for operator listings.
pub fn describe_multi_index(ring: &PolyRing, alpha: &[u32]) -> String {
    let mut m = Monomial::one(ring.nvars());
    for (i, &a) in alpha.iter().enumerate() {
        m.set_exp(i, a);
    }
    format_monomial(ring, &m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plane() -> Arc<PolyRing> {
        MoyalR2n::plane(None).ring().clone()
    }

    #[test]
    fn leibniz_composition() {
        let ring = plane();
        let qv = Polynomial::var(&ring, 0);
        // ∂_q ∘ q = q ∂_q + 1
        let d = DiffOperator::partial(&ring, 0);
        let got = d.compose(&DiffOperator::multiplication(&qv));
        let want = DiffOperator::multiplication(&qv).compose(&d).add(&DiffOperator::identity(&ring));
        assert_eq!(got, want);
    }

    #[test]
    fn exp_and_inverse() {
        let ring = plane();
        let d = DiffOperator::term(vec![1, 1], Polynomial::one(&ring));
        let t = FormalOperator::exp_h(&d, 3);
        let f = &Polynomial::var(&ring, 0).pow(2) * &Polynomial::var(&ring, 1).pow(2);
        // exp(h ∂q∂p) q²p² = q²p² + 4h qp + 2h²
        assert_eq!(t.apply(&f).to_string(), "q^2*p^2 + 4*h*q*p + 2*h^2");
        let back = t.inverse().unwrap().compose(&t);
        assert!(back.is_identity());
        let minus = FormalOperator::exp_h(&d.scale(&qi(-1)), 3);
        assert_eq!(t.inverse().unwrap(), minus);
    }

    #[test]
    fn identity_instance_returns_chart_product() {
        let g = GluingInstance::identity_transitions(3);
        let ring = g.ring().clone();
        let (qv, pv) = (Polynomial::var(&ring, 0), Polynomial::var(&ring, 1));
        assert!(g.build_a(0).unwrap().is_identity());
        let glued = g.glued_star(0, &qv.pow(2), &pv.pow(2)).unwrap();
        assert_eq!(glued, g.product(0).star(&qv.pow(2), &pv.pow(2)).unwrap());
    }

    #[test]
    fn two_chart_checks() {
        let g = GluingInstance::two_chart_moyal(2).with_test_degree(2);
        assert!(g.check_cocycle().passed);
        assert!(g.check_intertwiner().unwrap().passed);
        assert!(g.check_compatibility().unwrap().passed);
        assert!(g.check_chart_independence().unwrap().passed);
    }

    #[test]
    fn a_matches_hand_expansion() {
        let g = GluingInstance::two_chart_moyal(3);
        let ring = g.ring().clone();
        let f = &Polynomial::var(&ring, 0) * &Polynomial::var(&ring, 1);
        // A_1 qp = φ1 qp + φ2 (qp + h)
        let want = &f + &(&g.weights()[1] * &Polynomial::h(&ring));
        assert_eq!(g.build_a(0).unwrap().apply(&f), want);
    }

    #[test]
    fn corrupted_transition_breaks_cocycle() {
        let mut g = GluingInstance::two_chart_moyal(2).with_test_degree(2);
        let ring = g.ring().clone();
        let d = DiffOperator::term(vec![1, 1], Polynomial::one(&ring));
        g.override_transition(1, 0, FormalOperator::exp_h(&d.scale(&qi(2)), 2));
        let rep = g.check_cocycle();
        assert!(!rep.passed);
    }

    #[test]
    fn different_partitions_are_equivalent() {
        let g = Arc::new(GluingInstance::two_chart_moyal(2));
        let ring = g.ring().clone();
        let mut other = GluingInstance::two_chart_moyal(2);
        let pv = Polynomial::var(&ring, 1);
        let third = Polynomial::constant(&ring, q(1, 3));
        other.set_weights(vec![&third + &pv, &(&Polynomial::one(&ring) - &third) - &pv]).unwrap();
        let other = Arc::new(other);
        let a = g.glued(0).unwrap();
        let b = other.glued(0).unwrap();
        let search = EquivalenceSearch {
            order: 2,
            test_degree: 2,
            coeff_degree: 2,
        };
        let e = find_equivalence(&a, &b, search).unwrap();
        assert!(e.is_some());
    }

    #[test]
    fn different_brackets_are_not_equivalent() {
        let a = MoyalR2n::plane(Some(2));
        let twice = crate::star::PoissonMatrix::new(a.poisson().matrix().scale(&qi(2))).unwrap();
        let b = MoyalR2n::new(a.ring().clone(), twice, Some(2)).unwrap();
        let search = EquivalenceSearch {
            order: 2,
            test_degree: 2,
            coeff_degree: 1,
        };
        assert!(find_equivalence(&a, &b, search).unwrap().is_none());
    }

    #[test]
    fn weights_must_sum_to_one() {
        let mut g = GluingInstance::two_chart_moyal(2);
        let ring = g.ring().clone();
        g.set_weights(vec![Polynomial::one(&ring), Polynomial::var(&ring, 0)]).unwrap();
        assert!(matches!(g.build_a(0), Err(Error::InvariantBreach(_))));
        assert!(matches!(g.check_compatibility(), Err(Error::InvariantBreach(_))));
    }
}
