//! Exact commutative polynomials over the rationals.
//!
//! A [`PolyRing`] fixes the variable layout: coordinate variables first, then
//! symbolic parameters (such as the orbit radius `r`), then auxiliary
//! commuting variables (`t1..tn`), and finally the deformation parameter `h`.
//! Monomials are ordered graded-lexicographically over that layout.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::scalar::{fmt_rational, qi, Rational};

pub const H: &str = "h";

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PolyRing {
    names: Vec<String>,
    coords: usize,
    params: usize,
    aux: usize,
}

impl PolyRing {
    pub fn new<S: AsRef<str>>(coords: &[S], params: &[S], aux: &[S]) -> Result<Arc<PolyRing>> {
        let mut names: Vec<String> = Vec::new();
        for n in coords.iter().chain(params).chain(aux) {
            let n = n.as_ref().to_string();
            if n == H {
                return Err(Error::ContextMismatch(
                    "`h` is reserved for the deformation parameter".into(),
                ));
            }
            if names.contains(&n) {
                return Err(Error::ContextMismatch(format!("duplicate variable `{n}`")));
            }
            names.push(n);
        }
        names.push(H.to_string());
        Ok(Arc::new(PolyRing {
            names,
            coords: coords.len(),
            params: params.len(),
            aux: aux.len(),
        }))
    }

    /// Ring with coordinates only (plus `h`).
    pub fn with_coords<S: AsRef<str>>(coords: &[S]) -> Result<Arc<PolyRing>> {
        PolyRing::new(coords, &[], &[])
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn h(&self) -> usize {
        self.names.len() - 1
    }

    pub fn coord_count(&self) -> usize {
        self.coords
    }

    pub fn coord(&self, i: usize) -> usize {
        assert!(i < self.coords, "coordinate index out of range");
        i
    }

    pub fn coord_names(&self) -> &[String] {
        &self.names[..self.coords]
    }

    pub fn param_indices(&self) -> std::ops::Range<usize> {
        self.coords..self.coords + self.params
    }

    pub fn aux_indices(&self) -> std::ops::Range<usize> {
        let s = self.coords + self.params;
        s..s + self.aux
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }
}

/// Exponent vector over a [`PolyRing`] layout.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(SmallVec<[u16; 8]>);

impl Monomial {
    pub fn one(nvars: usize) -> Monomial {
        Monomial(SmallVec::from_elem(0, nvars))
    }

    pub fn from_exponents(exps: &[u32]) -> Monomial {
        Monomial(exps.iter().map(|&e| e as u16).collect())
    }

    pub fn var(nvars: usize, i: usize, e: u32) -> Monomial {
        let mut m = Monomial::one(nvars);
        m.0[i] = e as u16;
        m
    }

    pub fn exp(&self, i: usize) -> u32 {
        self.0[i] as u32
    }

    pub fn set_exp(&mut self, i: usize, e: u32) {
        self.0[i] = e as u16;
    }

    pub fn exponents(&self) -> impl Iterator<Item = u32> + '_ {
        self.0.iter().map(|&e| e as u32)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.exponents().sum()
    }

    pub fn degree_in(&self, vars: std::ops::Range<usize>) -> u32 {
        self.0[vars].iter().map(|&e| e as u32).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        Monomial(other.0.iter().zip(self.0.iter()).map(|(a, b)| a - b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Finite map from monomials to non-zero rational coefficients.
#[derive(Clone)]
pub struct Polynomial {
    ring: Arc<PolyRing>,
    terms: BTreeMap<Monomial, Rational>,
}

fn same_ring(a: &Arc<PolyRing>, b: &Arc<PolyRing>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring) && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

impl Polynomial {
    pub fn zero(ring: &Arc<PolyRing>) -> Polynomial {
        Polynomial {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ring: &Arc<PolyRing>) -> Polynomial {
        Polynomial::constant(ring, Rational::one())
    }

    pub fn constant(ring: &Arc<PolyRing>, c: Rational) -> Polynomial {
        Polynomial::term(ring, Monomial::one(ring.nvars()), c)
    }

    pub fn term(ring: &Arc<PolyRing>, m: Monomial, c: Rational) -> Polynomial {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial {
            ring: ring.clone(),
            terms,
        }
    }

    pub fn var(ring: &Arc<PolyRing>, i: usize) -> Polynomial {
        Polynomial::term(ring, Monomial::var(ring.nvars(), i, 1), Rational::one())
    }

    pub fn var_named(ring: &Arc<PolyRing>, name: &str) -> Result<Polynomial> {
        let i = ring
            .index_of(name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
        Ok(Polynomial::var(ring, i))
    }

    pub fn h(ring: &Arc<PolyRing>) -> Polynomial {
        Polynomial::var(ring, ring.h())
    }

    pub fn from_terms<I>(ring: &Arc<PolyRing>, terms: I) -> Polynomial
    where
        I: IntoIterator<Item = (Monomial, Rational)>,
    {
        let mut p = Polynomial::zero(ring);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Rational> {
        &self.terms
    }

    pub fn into_terms(self) -> BTreeMap<Monomial, Rational> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    pub fn constant_term(&self) -> Rational {
        self.coefficient_of(&Monomial::one(self.ring.nvars()))
    }

    /// Adds `c·m` in place, keeping the map canonical.
    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn check(&self, other: &Polynomial) -> Result<()> {
        if same_ring(&self.ring, &other.ring) {
            Ok(())
        } else {
            Err(Error::ContextMismatch(format!(
                "[{}] vs [{}]",
                self.ring.names().join(","),
                other.ring.names().join(",")
            )))
        }
    }

    pub fn checked_add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check(other)?;
        let mut acc: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let m = m1.mul(m2);
                let c = c1 * c2;
                *acc.entry(m).or_insert_with(Rational::zero) += c;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Ok(Polynomial {
            ring: self.ring.clone(),
            terms: acc,
        })
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    /// `c · m · self`.
    pub fn mul_term(&self, m: &Monomial, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(k, x)| (k.mul(m), x * c)).collect(),
        }
    }

    /// `c · h^k · self`.
    pub fn mul_h_power(&self, k: u32, c: &Rational) -> Polynomial {
        let m = Monomial::var(self.ring.nvars(), self.ring.h(), k);
        self.mul_term(&m, c)
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut out = Polynomial::one(&self.ring);
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    pub fn partial(&self, v: usize) -> Polynomial {
        let mut out = Polynomial::zero(&self.ring);
        for (m, c) in &self.terms {
            let e = m.exp(v);
            if e > 0 {
                let mut m2 = m.clone();
                m2.set_exp(v, e - 1);
                out.add_term(m2, c * qi(e as i64));
            }
        }
        out
    }

    /// `∂^α self` for a multi-index over the first `alpha.len()` variables.
    pub fn partial_multi(&self, alpha: &[u32]) -> Polynomial {
        let mut out = Polynomial::zero(&self.ring);
        'terms: for (m, c) in &self.terms {
            let mut m2 = m.clone();
            let mut factor = Rational::one();
            for (v, &a) in alpha.iter().enumerate() {
                let e = m.exp(v);
                if e < a {
                    continue 'terms;
                }
                for k in 0..a {
                    factor *= qi((e - k) as i64);
                }
                m2.set_exp(v, e - a);
            }
            out.add_term(m2, c * factor);
        }
        out
    }

    pub fn coefficient_of(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn truncate_h(&self, k: u32) -> Polynomial {
        let h = self.ring.h();
        Polynomial {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.exp(h) <= k)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Coefficient of `h^k`, as an `h`-free polynomial.
    pub fn h_coefficient(&self, k: u32) -> Polynomial {
        let h = self.ring.h();
        let mut out = Polynomial::zero(&self.ring);
        for (m, c) in &self.terms {
            if m.exp(h) == k {
                let mut m2 = m.clone();
                m2.set_exp(h, 0);
                out.add_term(m2, c.clone());
            }
        }
        out
    }

    pub fn h_degree(&self) -> Option<u32> {
        let h = self.ring.h();
        self.terms.keys().map(|m| m.exp(h)).max()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    /// Degree in the coordinate variables only.
    pub fn coordinate_degree(&self) -> Option<u32> {
        let n = self.ring.coord_count();
        self.terms.keys().map(|m| m.degree_in(0..n)).max()
    }

    pub fn degree_in_var(&self, v: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.exp(v)).max()
    }

    pub fn uses_var(&self, v: usize) -> bool {
        self.terms.keys().any(|m| m.exp(v) > 0)
    }

    /// Splits by coordinate degree; coefficients may still involve `h` and parameters.
    pub fn coordinate_homogeneous_parts(&self) -> BTreeMap<u32, Polynomial> {
        let n = self.ring.coord_count();
        let mut parts: BTreeMap<u32, Polynomial> = BTreeMap::new();
        for (m, c) in &self.terms {
            parts
                .entry(m.degree_in(0..n))
                .or_insert_with(|| Polynomial::zero(&self.ring))
                .add_term(m.clone(), c.clone());
        }
        parts
    }

    /// Replaces variable `v` by `value`.
    pub fn substitute(&self, v: usize, value: &Polynomial) -> Result<Polynomial> {
        self.check(value)?;
        let mut powers: Vec<Polynomial> = vec![Polynomial::one(&self.ring)];
        let mut out = Polynomial::zero(&self.ring);
        for (m, c) in &self.terms {
            let e = m.exp(v) as usize;
            while powers.len() <= e {
                let next = &powers[powers.len() - 1] * value;
                powers.push(next);
            }
            let mut m2 = m.clone();
            m2.set_exp(v, 0);
            out = &out + &powers[e].mul_term(&m2, c);
        }
        Ok(out)
    }

    pub fn evaluate_var(&self, v: usize, value: &Rational) -> Polynomial {
        let mut out = Polynomial::zero(&self.ring);
        for (m, c) in &self.terms {
            let e = m.exp(v);
            let mut m2 = m.clone();
            m2.set_exp(v, 0);
            let mut f = c.clone();
            for _ in 0..e {
                f *= value;
            }
            out.add_term(m2, f);
        }
        out
    }

    /// Moves the polynomial into another ring, matching variables by name.
    pub fn remap(&self, target: &Arc<PolyRing>) -> Result<Polynomial> {
        if same_ring(&self.ring, target) {
            return Ok(self.clone());
        }
        let mut index = Vec::with_capacity(self.ring.nvars());
        for name in self.ring.names() {
            index.push(target.index_of(name));
        }
        let mut out = Polynomial::zero(target);
        for (m, c) in &self.terms {
            let mut m2 = Monomial::one(target.nvars());
            for (v, e) in m.exponents().enumerate() {
                if e == 0 {
                    continue;
                }
                let t = index[v].ok_or_else(|| Error::UnknownVariable(self.ring.name(v).to_string()))?;
                m2.set_exp(t, e);
            }
            out.add_term(m2, c.clone());
        }
        Ok(out)
    }

    /// Division by a divisor whose highest power of `v` has a constant coefficient.
    /// Returns `(quotient, remainder)` with `deg_v(remainder) < deg_v(divisor)`.
    pub fn div_rem_monic(&self, divisor: &Polynomial, v: usize) -> Result<(Polynomial, Polynomial)> {
        self.check(divisor)?;
        let e = divisor
            .degree_in_var(v)
            .filter(|&e| e > 0)
            .ok_or_else(|| Error::Precondition(format!("divisor {divisor} does not involve {}", self.ring.name(v))))?;
        let mut lead = Polynomial::zero(&self.ring);
        let mut tail = Polynomial::zero(&self.ring);
        for (m, c) in &divisor.terms {
            if m.exp(v) == e {
                lead.add_term(m.clone(), c.clone());
            } else {
                tail.add_term(m.clone(), c.clone());
            }
        }
        if lead.len() != 1 {
            return Err(Error::Precondition(format!(
                "leading part of {divisor} in {} is not a single term",
                self.ring.name(v)
            )));
        }
        let (lead_m, lead_c) = lead.terms.iter().next().map(|(m, c)| (m.clone(), c.clone())).unwrap();
        let lead_is_pure = lead_m.exponents().enumerate().all(|(i, x)| i == v || x == 0);
        if !lead_is_pure {
            return Err(Error::Precondition(format!(
                "leading term of {divisor} is not a pure power of {}",
                self.ring.name(v)
            )));
        }
        let inv = lead_c.recip();
        let mut quot = Polynomial::zero(&self.ring);
        let mut rem = self.clone();
        loop {
            let pick = rem
                .terms
                .iter()
                .filter(|(m, _)| m.exp(v) >= e)
                .max_by(|a, b| a.0.exp(v).cmp(&b.0.exp(v)).then_with(|| a.0.cmp(b.0)))
                .map(|(m, c)| (m.clone(), c.clone()));
            let Some((m, c)) = pick else { break };
            let qm = lead_m.quotient_of(&m);
            let qc = &c * &inv;
            rem.terms.remove(&m);
            let t = tail.mul_term(&qm, &qc);
            rem = &rem - &t;
            quot.add_term(qm, qc);
        }
        Ok((quot, rem))
    }

    /// `Σ ∂²/∂ξ_i²` over coordinate variables.
    pub fn laplacian(&self) -> Polynomial {
        let mut out = Polynomial::zero(&self.ring);
        for i in 0..self.ring.coord_count() {
            out = &out + &self.partial(i).partial(i);
        }
        out
    }

    /// Coordinate-free coefficient factor of each coordinate monomial:
    /// `self = Σ_α x^α · coeff_α(h, params, aux)`.
    pub fn split_coordinates(&self) -> BTreeMap<Monomial, Polynomial> {
        let n = self.ring.coord_count();
        let mut out: BTreeMap<Monomial, Polynomial> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut coord = Monomial::one(self.ring.nvars());
            let mut rest = m.clone();
            for v in 0..n {
                coord.set_exp(v, m.exp(v));
                rest.set_exp(v, 0);
            }
            out.entry(coord)
                .or_insert_with(|| Polynomial::zero(&self.ring))
                .add_term(rest, c.clone());
        }
        out
    }
}

/// All monomials in `vars` of total degree `<= max_degree`, ascending.
pub fn monomials_up_to(ring: &Arc<PolyRing>, vars: &[usize], max_degree: u32) -> Vec<Monomial> {
    let mut out = BTreeSet::new();
    let mut frontier = vec![Monomial::one(ring.nvars())];
    out.insert(frontier[0].clone());
    for _ in 0..max_degree {
        let mut next = Vec::new();
        for m in &frontier {
            for &v in vars {
                let mut m2 = m.clone();
                m2.set_exp(v, m.exp(v) + 1);
                if out.insert(m2.clone()) {
                    next.push(m2);
                }
            }
        }
        frontier = next;
    }
    out.into_iter().collect()
}

/// Coordinate monomials of degree `<= max_degree` as polynomials.
pub fn coordinate_monomials(ring: &Arc<PolyRing>, max_degree: u32) -> Vec<Polynomial> {
    let vars: Vec<usize> = (0..ring.coord_count()).collect();
    monomials_up_to(ring, &vars, max_degree)
        .into_iter()
        .map(|m| Polynomial::term(ring, m, Rational::one()))
        .collect()
}

impl<'a> Add<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &'a Polynomial) -> Polynomial {
        self.checked_add(rhs).expect("polynomial addition")
    }
}

impl<'a> Sub<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &'a Polynomial) -> Polynomial {
        self.checked_sub(rhs).expect("polynomial subtraction")
    }
}

impl<'a> Mul<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &'a Polynomial) -> Polynomial {
        self.checked_mul(rhs).expect("polynomial multiplication")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&-Rational::one())
    }
}

impl Add for Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: Polynomial) -> Polynomial {
        &self + &rhs
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: Polynomial) -> Polynomial {
        &self - &rhs
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Polynomial) -> Polynomial {
        &self * &rhs
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

/// Writes a monomial as `h^a*r*x^2*y`: the deformation parameter first, then
/// the remaining variables in declared order. Empty string for the unit.
pub fn format_monomial(ring: &PolyRing, m: &Monomial) -> String {
    let mut parts = Vec::new();
    let h = ring.h();
    let mut order: Vec<usize> = vec![h];
    order.extend(0..h);
    for v in order {
        match m.exp(v) {
            0 => {}
            1 => parts.push(ring.name(v).to_string()),
            e => parts.push(format!("{}^{}", ring.name(v), e)),
        }
    }
    parts.join("*")
}

/// Formats a signed list of `(coefficient, factor-string)` terms as a sum.
/// An empty factor denotes a constant term.
pub(crate) fn format_sum<'a, I>(terms: I) -> String
where
    I: IntoIterator<Item = (&'a Rational, String)>,
{
    let mut out = String::new();
    for (i, (c, body)) in terms.into_iter().enumerate() {
        let neg = c.is_negative();
        let a = c.abs();
        let coef = if body.is_empty() {
            fmt_rational(&a)
        } else if a.is_one() {
            body.clone()
        } else if a.is_integer() {
            format!("{}*{}", fmt_rational(&a), body)
        } else {
            format!("({})*{}", fmt_rational(&a), body)
        };
        match (i, neg) {
            (0, false) => out.push_str(&coef),
            (0, true) => {
                out.push('-');
                out.push_str(&coef);
            }
            (_, false) => {
                out.push_str(" + ");
                out.push_str(&coef);
            }
            (_, true) => {
                out.push_str(" - ");
                out.push_str(&coef);
            }
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = format_sum(
            self.terms
                .iter()
                .rev()
                .map(|(m, c)| (c, format_monomial(&self.ring, m))),
        );
        f.write_str(&s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    fn ring() -> Arc<PolyRing> {
        PolyRing::with_coords(&["x", "y", "z"]).unwrap()
    }

    fn v(r: &Arc<PolyRing>, n: &str) -> Polynomial {
        Polynomial::var_named(r, n).unwrap()
    }

    #[test]
    fn add_examples() {
        let r = ring();
        let (x, y) = (v(&r, "x"), v(&r, "y"));
        assert!((&x + &(-&x)).is_zero());
        let s = &(&x + &y) + &y;
        assert_eq!(s.to_string(), "x + 2*y");
        let half = Polynomial::constant(&r, q(1, 2));
        let a = &(&(&x * &x) + &half) + &half;
        assert_eq!(a, &(&x * &x) + &Polynomial::one(&r));
    }

    #[test]
    fn mul_examples() {
        let r = ring();
        let (x, y, h) = (v(&r, "x"), v(&r, "y"), Polynomial::h(&r));
        assert_eq!((&x * &y).to_string(), "x*y");
        let prod = &(&x + &h) * &(&x - &h);
        assert_eq!(prod, &(&x * &x) - &(&h * &h));
        assert_eq!(prod.to_string(), "x^2 - h^2");
        let one = Polynomial::one(&r);
        assert_eq!(&one * &prod, prod);
    }

    #[test]
    fn partial_examples() {
        let r = PolyRing::with_coords(&["q", "p"]).unwrap();
        let (qq, p) = (v(&r, "q"), v(&r, "p"));
        let f = &(&qq * &qq) * &p;
        assert_eq!(f.partial(0), (&qq * &p).scale(&qi(2)));
        assert!(qq.partial(1).is_zero());
        let r3 = ring();
        let s = &(&(&v(&r3, "x") * &v(&r3, "x")) + &(&v(&r3, "y") * &v(&r3, "y"))) + &(&v(&r3, "z") * &v(&r3, "z"));
        assert_eq!(s.partial(0), v(&r3, "x").scale(&qi(2)));
    }

    #[test]
    fn coefficient_and_truncation() {
        let r = ring();
        let (x, y, h) = (v(&r, "x"), v(&r, "y"), Polynomial::h(&r));
        let f = &x + &y.scale(&qi(2));
        assert_eq!(f.coefficient_of(&Monomial::var(r.nvars(), 1, 1)), qi(2));
        assert!(Polynomial::zero(&r).coefficient_of(&Monomial::var(r.nvars(), 0, 3)).is_zero());
        let g = &(&x * &x) - &(&h * &h);
        assert_eq!(g.coefficient_of(&Monomial::var(r.nvars(), r.h(), 2)), qi(-1));

        let one = Polynomial::one(&r);
        let s = &(&one + &h) + &(&h * &h);
        assert_eq!(s.truncate_h(1), &one + &h);
        assert_eq!(s.truncate_h(2), s);
        assert!((&x * &h.pow(3)).truncate_h(2).is_zero());
    }

    #[test]
    fn context_mismatch_is_an_error() {
        let a = Polynomial::var(&ring(), 0);
        let b = Polynomial::var(&PolyRing::with_coords(&["q", "p"]).unwrap(), 0);
        assert!(matches!(a.checked_add(&b), Err(Error::ContextMismatch(_))));
        assert!(a.checked_mul(&b).is_err());
    }

    #[test]
    fn division_by_monic_generator() {
        let r = PolyRing::new(&["x", "y", "z"], &["r"], &[]).unwrap();
        let (x, y, z, rr) = (v(&r, "x"), v(&r, "y"), v(&r, "z"), v(&r, "r"));
        let gen = &(&(&(&x * &x) + &(&y * &y)) + &(&z * &z)) - &(&rr * &rr);
        let f = &z.pow(3) + &(&x * &z);
        let (quot, rem) = f.div_rem_monic(&gen, 2).unwrap();
        assert_eq!(&(&quot * &gen) + &rem, f);
        assert!(rem.degree_in_var(2).unwrap() <= 1);
        assert_eq!(quot, z);
    }

    #[test]
    fn substitution_and_remap() {
        let r = PolyRing::with_coords(&["q", "p", "e'"]).unwrap();
        let (qq, p, e) = (v(&r, "q"), v(&r, "p"), v(&r, "e'"));
        let f = &(&qq * &p) + &(&e * &Polynomial::h(&r));
        let g = f.substitute(2, &Polynomial::one(&r)).unwrap();
        let r2 = PolyRing::with_coords(&["q", "p"]).unwrap();
        let g2 = g.remap(&r2).unwrap();
        assert_eq!(g2.to_string(), "q*p + h");
        assert!(f.remap(&r2).is_err());
    }

    #[test]
    fn display_orders_graded_lex() {
        let r = ring();
        let (x, y, z, h) = (v(&r, "x"), v(&r, "y"), v(&r, "z"), Polynomial::h(&r));
        let f = &(&x * &y) + &(&h * &z).scale(&q(1, 2));
        assert_eq!(f.to_string(), "x*y + (1/2)*h*z");
        let g = &(&Polynomial::constant(&r, q(-1, 3)) - &x) + &z.pow(2);
        assert_eq!(g.to_string(), "z^2 - x - 1/3");
        assert_eq!(Polynomial::zero(&r).to_string(), "0");
    }
}
