//! The `h`-scaled universal enveloping algebra `U_h(g)`.
//!
//! Elements are finite sums of generator words with polynomial coefficients
//! (polynomials in `h` and the ring's parameters). Normal form means every
//! word is weakly increasing in the basis order (PBW monomials), obtained by
//! rewriting `X_j X_i -> X_i X_j + h Σ_k c_ji^k X_k` for `j > i`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, RwLock};

use num_traits::{One, Zero};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::liealg::LieAlgebra;
use crate::poly::{format_monomial, format_sum, Monomial, PolyRing, Polynomial};
use crate::scalar::Rational;

/// A sequence of generator indices; the empty word is the unit.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Word(pub SmallVec<[u8; 12]>);

impl Word {
    pub fn empty() -> Word {
        Word(SmallVec::new())
    }

    pub fn from_slice(s: &[u8]) -> Word {
        Word(SmallVec::from_slice(s))
    }

    /// The PBW word `X_1^{e_1} ... X_n^{e_n}`.
    pub fn pbw(exps: &[u32]) -> Word {
        let mut w = SmallVec::new();
        for (i, &e) in exps.iter().enumerate() {
            for _ in 0..e {
                w.push(i as u8);
            }
        }
        Word(w)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn is_sorted(&self) -> bool {
        self.0.windows(2).all(|p| p[0] <= p[1])
    }

    pub fn counts(&self, n: usize) -> Vec<u32> {
        let mut c = vec![0u32; n];
        for &g in &self.0 {
            c[g as usize] += 1;
        }
        c
    }

    pub fn appended(&self, g: u8) -> Word {
        let mut w = self.0.clone();
        w.push(g);
        Word(w)
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut w = self.0.clone();
        w.extend_from_slice(&other.0);
        Word(w)
    }
}

// Graded, then reversed letter order. On PBW words this is the graded-lex
// order of exponent vectors, matching the commutative monomial order.
impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Finite map `Word -> Polynomial` with no zero coefficients.
#[derive(Clone)]
pub struct EnvelopingElement {
    alg: Arc<LieAlgebra>,
    terms: BTreeMap<Word, Polynomial>,
}

impl PartialEq for EnvelopingElement {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl Eq for EnvelopingElement {}

impl fmt::Debug for EnvelopingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "EnvelopingElement({self})")
    }
}

impl EnvelopingElement {
    pub fn zero(alg: &Arc<LieAlgebra>) -> Self {
        EnvelopingElement {
            alg: alg.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(alg: &Arc<LieAlgebra>) -> Self {
        EnvelopingElement::word(alg, Word::empty(), Polynomial::one(alg.ring()))
    }

    pub fn scalar(alg: &Arc<LieAlgebra>, c: Polynomial) -> Self {
        EnvelopingElement::word(alg, Word::empty(), c)
    }

    pub fn generator(alg: &Arc<LieAlgebra>, i: usize) -> Self {
        EnvelopingElement::word(alg, Word::from_slice(&[i as u8]), Polynomial::one(alg.ring()))
    }

    pub fn word(alg: &Arc<LieAlgebra>, w: Word, c: Polynomial) -> Self {
        let mut e = EnvelopingElement::zero(alg);
        e.add_term(w, c);
        e
    }

    /// Reads a commutative polynomial as a PBW-ordered element:
    /// `x^a y^b z^c · coeff ↦ coeff · X^a Y^b Z^c`.
    pub fn from_pbw_polynomial(alg: &Arc<LieAlgebra>, f: &Polynomial) -> Self {
        let n = alg.dim();
        let mut e = EnvelopingElement::zero(alg);
        for (m, coeff) in f.split_coordinates() {
            let exps: Vec<u32> = (0..n).map(|i| m.exp(i)).collect();
            e.add_term(Word::pbw(&exps), coeff);
        }
        e
    }

    /// Inverse of [`from_pbw_polynomial`] on normal-form elements.
    pub fn to_pbw_polynomial(&self) -> Polynomial {
        let ring = self.alg.ring();
        let n = self.alg.dim();
        let mut out = Polynomial::zero(ring);
        for (w, c) in &self.terms {
            let counts = w.counts(n);
            let mut m = Monomial::one(ring.nvars());
            for (i, e) in counts.into_iter().enumerate() {
                m.set_exp(i, e);
            }
            out = &out + &c.mul_term(&m, &Rational::one());
        }
        out
    }

    pub fn algebra(&self) -> &Arc<LieAlgebra> {
        &self.alg
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        self.alg.ring()
    }

    pub fn terms(&self) -> &BTreeMap<Word, Polynomial> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_normal(&self) -> bool {
        self.terms.keys().all(Word::is_sorted)
    }

    pub fn max_word_len(&self) -> Option<usize> {
        self.terms.keys().map(Word::len).max()
    }

    pub fn add_term(&mut self, w: Word, c: Polynomial) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get() + &c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), -c);
        }
        out
    }

    pub fn scale(&self, c: &Polynomial) -> Self {
        let mut out = EnvelopingElement::zero(&self.alg);
        for (w, x) in &self.terms {
            out.add_term(w.clone(), x * c);
        }
        out
    }

    pub fn scale_rational(&self, c: &Rational) -> Self {
        let mut out = EnvelopingElement::zero(&self.alg);
        for (w, x) in &self.terms {
            out.add_term(w.clone(), x.scale(c));
        }
        out
    }

    /// Substitutes `h = 0` in every coefficient.
    pub fn at_h_zero(&self) -> Self {
        let mut out = EnvelopingElement::zero(&self.alg);
        for (w, x) in &self.terms {
            out.add_term(w.clone(), x.h_coefficient(0));
        }
        out
    }

    /// Coefficient-wise map.
    pub fn map_coefficients(&self, f: impl Fn(&Polynomial) -> Polynomial) -> Self {
        let mut out = EnvelopingElement::zero(&self.alg);
        for (w, x) in &self.terms {
            out.add_term(w.clone(), f(x));
        }
        out
    }

    pub fn truncate_h(&self, k: u32) -> Self {
        self.map_coefficients(|c| c.truncate_h(k))
    }
}

fn format_word(alg: &LieAlgebra, w: &Word) -> String {
    let mut parts: Vec<String> = Vec::new();
    let letters = w.letters();
    let mut i = 0;
    while i < letters.len() {
        let g = letters[i];
        let mut j = i;
        while j < letters.len() && letters[j] == g {
            j += 1;
        }
        let name = &alg.basis()[g as usize];
        if j - i == 1 {
            parts.push(name.clone());
        } else {
            parts.push(format!("{}^{}", name, j - i));
        }
        i = j;
    }
    parts.join("*")
}

impl fmt::Display for EnvelopingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let one = Rational::one();
        let ring = self.alg.ring().clone();
        let items: Vec<(Rational, String)> = self
            .terms
            .iter()
            .rev()
            .map(|(w, c)| {
                let word = format_word(&self.alg, w);
                if c.len() == 1 {
                    let (m, x) = c.terms().iter().next().unwrap();
                    let mono = format_monomial(&ring, m);
                    let body = match (mono.is_empty(), word.is_empty()) {
                        (true, _) => word,
                        (false, true) => mono,
                        (false, false) => format!("{mono}*{word}"),
                    };
                    (x.clone(), body)
                } else if word.is_empty() {
                    (one.clone(), format!("({c})"))
                } else {
                    (one.clone(), format!("({c})*{word}"))
                }
            })
            .collect();
        f.write_str(&format_sum(items.iter().map(|(c, b)| (c, b.clone()))))
    }
}

/// Rewrite position used by the naive normalizer.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RewriteStrategy {
    Leftmost,
    Rightmost,
}

type WordExpansion = Arc<Vec<(Word, u32, Rational)>>;

/// Multiplication context for `U_h(g)` with a memo of `word · generator` products.
pub struct Uea {
    alg: Arc<LieAlgebra>,
    memo: RwLock<HashMap<(Word, u8), WordExpansion>>,
}

impl fmt::Debug for Uea {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Uea({})", self.alg.name())
    }
}

/// Result of a centrality test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Centrality {
    Central,
    /// `a·X_i − X_i·a ≠ 0` for the given generator.
    NotCentral { generator: usize, commutator: EnvelopingElement },
}

impl Centrality {
    pub fn is_central(&self) -> bool {
        matches!(self, Centrality::Central)
    }
}

impl Uea {
    pub fn new(alg: Arc<LieAlgebra>) -> Self {
        Uea {
            alg,
            memo: RwLock::new(HashMap::new()),
        }
    }

    pub fn algebra(&self) -> &Arc<LieAlgebra> {
        &self.alg
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        self.alg.ring()
    }

    pub fn generator(&self, i: usize) -> EnvelopingElement {
        EnvelopingElement::generator(&self.alg, i)
    }

    pub fn one(&self) -> EnvelopingElement {
        EnvelopingElement::one(&self.alg)
    }

    /// Normal form of `w · X_g` for a PBW word `w`, as `(word, h-power, coefficient)` triples.
    fn word_times_gen(&self, w: &Word, g: u8) -> WordExpansion {
        if w.0.last().is_none_or(|&j| j <= g) {
            return Arc::new(vec![(w.appended(g), 0, Rational::one())]);
        }
        let key = (w.clone(), g);
        if let Some(hit) = self.memo.read().expect("memo lock").get(&key) {
            return hit.clone();
        }
        let j = *w.0.last().unwrap();
        let u = Word::from_slice(&w.0[..w.len() - 1]);
        let mut acc: BTreeMap<(Word, u32), Rational> = BTreeMap::new();
        // X_j X_g = X_g X_j + h Σ_k c_jg^k X_k
        for (t, k, c) in self.word_times_gen(&u, g).iter() {
            for (t2, k2, c2) in self.word_times_gen(t, j).iter() {
                *acc.entry((t2.clone(), k + k2)).or_insert_with(Rational::zero) += c * c2;
            }
        }
        for k in 0..self.alg.dim() {
            let c = self.alg.c(j as usize, g as usize, k);
            if c.is_zero() {
                continue;
            }
            for (t, kk, cc) in self.word_times_gen(&u, k as u8).iter() {
                *acc.entry((t.clone(), kk + 1)).or_insert_with(Rational::zero) += c * cc;
            }
        }
        let out: WordExpansion = Arc::new(
            acc.into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|((w, k), c)| (w, k, c))
                .collect(),
        );
        self.memo
            .write()
            .expect("memo lock")
            .entry(key)
            .or_insert_with(|| out.clone())
            .clone()
    }

    /// Normal form of `w1 · w2` where `w1` is a PBW word.
    fn pbw_times_word(&self, w1: &Word, w2: &[u8]) -> BTreeMap<(Word, u32), Rational> {
        let mut cur: BTreeMap<(Word, u32), Rational> = BTreeMap::new();
        cur.insert((w1.clone(), 0), Rational::one());
        for &g in w2 {
            let mut next: BTreeMap<(Word, u32), Rational> = BTreeMap::new();
            for ((w, k), c) in &cur {
                for (t, kk, cc) in self.word_times_gen(w, g).iter() {
                    *next.entry((t.clone(), k + kk)).or_insert_with(Rational::zero) += c * cc;
                }
            }
            next.retain(|_, c| !c.is_zero());
            cur = next;
        }
        cur
    }

    fn collect(&self, acc: BTreeMap<Word, Polynomial>) -> EnvelopingElement {
        let mut out = EnvelopingElement::zero(&self.alg);
        for (w, c) in acc {
            out.add_term(w, c);
        }
        out
    }

    /// PBW normal form.
    pub fn pbw_normalize(&self, a: &EnvelopingElement) -> EnvelopingElement {
        if a.is_normal() {
            return a.clone();
        }
        let mut acc: BTreeMap<Word, Polynomial> = BTreeMap::new();
        let empty = Word::empty();
        for (w, coeff) in &a.terms {
            for ((t, k), c) in self.pbw_times_word(&empty, w.letters()) {
                let add = coeff.mul_h_power(k, &c);
                accumulate(&mut acc, t, add);
            }
        }
        self.collect(acc)
    }

    /// Normal form by literal rewriting of one adjacent inversion at a time.
    /// Slow; exists so that the result can be compared across strategies.
    pub fn pbw_normalize_with(&self, a: &EnvelopingElement, strategy: RewriteStrategy) -> EnvelopingElement {
        let ring = self.alg.ring().clone();
        let h = Polynomial::h(&ring);
        let mut cur = a.terms.clone();
        loop {
            let pick = cur.iter().find_map(|(w, c)| {
                let mut inversions = w.0.windows(2).enumerate().filter(|(_, p)| p[0] > p[1]).map(|(i, _)| i);
                let pos = match strategy {
                    RewriteStrategy::Leftmost => inversions.clone().next(),
                    RewriteStrategy::Rightmost => inversions.next_back(),
                };
                pos.map(|p| (w.clone(), c.clone(), p))
            });
            let Some((w, c, p)) = pick else { break };
            cur.remove(&w);
            let (j, i) = (w.0[p], w.0[p + 1]);
            let mut swapped = w.clone();
            swapped.0.swap(p, p + 1);
            accumulate(&mut cur, swapped, c.clone());
            for k in 0..self.alg.dim() {
                let s = self.alg.c(j as usize, i as usize, k);
                if s.is_zero() {
                    continue;
                }
                let mut shorter: SmallVec<[u8; 12]> = SmallVec::new();
                shorter.extend_from_slice(&w.0[..p]);
                shorter.push(k as u8);
                shorter.extend_from_slice(&w.0[p + 2..]);
                accumulate(&mut cur, Word(shorter), (&c * &h).scale(s));
            }
        }
        self.collect(cur)
    }

    /// Product in `U_h`, returned in normal form.
    pub fn mul(&self, a: &EnvelopingElement, b: &EnvelopingElement) -> EnvelopingElement {
        let a = self.pbw_normalize(a);
        let mut acc: BTreeMap<Word, Polynomial> = BTreeMap::new();
        for (w1, c1) in &a.terms {
            for (w2, c2) in &b.terms {
                let coeff = c1 * c2;
                for ((t, k), c) in self.pbw_times_word(w1, w2.letters()) {
                    accumulate(&mut acc, t, coeff.mul_h_power(k, &c));
                }
            }
        }
        self.collect(acc)
    }

    pub fn pow(&self, a: &EnvelopingElement, e: u32) -> EnvelopingElement {
        let mut out = self.one();
        for _ in 0..e {
            out = self.mul(&out, a);
        }
        out
    }

    pub fn commutator(&self, a: &EnvelopingElement, b: &EnvelopingElement) -> EnvelopingElement {
        self.mul(a, b).sub(&self.mul(b, a))
    }

    pub fn is_central(&self, a: &EnvelopingElement) -> Centrality {
        for i in 0..self.alg.dim() {
            let c = self.commutator(a, &self.generator(i));
            if !c.is_zero() {
                return Centrality::NotCentral {
                    generator: i,
                    commutator: c,
                };
            }
        }
        Centrality::Central
    }

    /// `X_1^2 + ... + X_n^2` when that is central (su2), otherwise an error.
    pub fn sum_of_squares(&self) -> EnvelopingElement {
        let mut p = EnvelopingElement::zero(&self.alg);
        for i in 0..self.alg.dim() {
            p.add_term(Word::from_slice(&[i as u8, i as u8]), Polynomial::one(self.ring()));
        }
        p
    }

    /// Canonical representative of `a` modulo the two-sided ideal `(C − c)`.
    ///
    /// `C` must be central with a leading pure power `X_g^e` (longest pure-power
    /// word, highest generator) carrying a constant coefficient. Every PBW word
    /// containing `X_g^e` is rewritten with `X_g^e ≡ (c − tail)/lead` until none remain.
    pub fn ideal_reduce(
        &self,
        a: &EnvelopingElement,
        central: &EnvelopingElement,
        level: &Polynomial,
    ) -> Result<EnvelopingElement> {
        let plan = self.reduction_plan(central, level)?;
        self.reduce_with(a, &plan)
    }

    /// Validates the generator once so repeated reductions can skip the centrality test.
    pub fn reduction_plan(&self, central: &EnvelopingElement, level: &Polynomial) -> Result<ReductionPlan> {
        let central = self.pbw_normalize(central);
        if let Centrality::NotCentral { generator, commutator } = self.is_central(&central) {
            return Err(Error::NotCentral(format!(
                "[{}, {}] = {}",
                central,
                self.alg.basis()[generator],
                commutator
            )));
        }
        let lead = central
            .terms
            .iter()
            .filter(|(w, _)| !w.is_empty() && w.0.iter().all(|&g| g == w.0[0]))
            .max_by(|a, b| a.0.len().cmp(&b.0.len()).then(a.0 .0[0].cmp(&b.0 .0[0])))
            .map(|(w, c)| (w.clone(), c.clone()))
            .ok_or_else(|| Error::Precondition(format!("{central} has no pure-power word")))?;
        if !lead.1.is_constant() {
            return Err(Error::Precondition(format!(
                "leading coefficient {} of {} is not a constant",
                lead.1, central
            )));
        }
        let inv = lead.1.constant_term().recip();
        let mut tail = central.clone();
        tail.terms.remove(&lead.0);
        let replacement = EnvelopingElement::scalar(&self.alg, level.clone())
            .sub(&tail)
            .scale_rational(&inv);
        Ok(ReductionPlan {
            generator: lead.0 .0[0],
            power: lead.0.len() as u32,
            replacement,
        })
    }

    pub fn reduce_with(&self, a: &EnvelopingElement, plan: &ReductionPlan) -> Result<EnvelopingElement> {
        const MAX_STEPS: usize = 1_000_000;
        let g = plan.generator;
        let e = plan.power as usize;
        let mut cur = self.pbw_normalize(a);
        for _ in 0..MAX_STEPS {
            let pick = cur
                .terms
                .iter()
                .rev()
                .find(|(w, _)| w.0.iter().filter(|&&x| x == g).count() >= e)
                .map(|(w, c)| (w.clone(), c.clone()));
            let Some((w, c)) = pick else {
                return Ok(cur);
            };
            cur.terms.remove(&w);
            let first = w.0.iter().position(|&x| x == g).unwrap();
            let m = w.0.iter().filter(|&&x| x == g).count();
            let prefix = Word::from_slice(&w.0[..first + m - e]);
            let suffix = Word::from_slice(&w.0[first + m..]);
            let left = EnvelopingElement::word(&self.alg, prefix, c);
            let right = EnvelopingElement::word(&self.alg, suffix, Polynomial::one(self.ring()));
            let replaced = self.mul(&self.mul(&left, &plan.replacement), &right);
            cur = cur.add(&replaced);
        }
        Err(Error::Internal("ideal reduction did not terminate".into()))
    }
}

/// Rewrite rule `X_g^power ≡ replacement` derived from a central generator.
#[derive(Clone, Debug)]
pub struct ReductionPlan {
    pub generator: u8,
    pub power: u32,
    pub replacement: EnvelopingElement,
}

fn accumulate(acc: &mut BTreeMap<Word, Polynomial>, w: Word, c: Polynomial) {
    if c.is_zero() {
        return;
    }
    match acc.entry(w) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            let s = e.get() + &c;
            if s.is_zero() {
                e.remove();
            } else {
                *e.get_mut() = s;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, qi};

    fn su2() -> Uea {
        Uea::new(Arc::new(LieAlgebra::su2()))
    }

    fn w(u: &Uea, letters: &[u8]) -> EnvelopingElement {
        EnvelopingElement::word(u.algebra(), Word::from_slice(letters), Polynomial::one(u.ring()))
    }

    #[test]
    fn su2_yx() {
        let u = su2();
        let n = u.pbw_normalize(&w(&u, &[1, 0]));
        assert_eq!(n.to_string(), "X*Y - h*Z");
    }

    #[test]
    fn heisenberg_pq() {
        let u = Uea::new(Arc::new(LieAlgebra::heisenberg()));
        let n = u.pbw_normalize(&w(&u, &[1, 0]));
        assert_eq!(n.to_string(), "Q*P - h*E'");
    }

    #[test]
    fn strategies_agree_on_zyx() {
        let u = su2();
        let a = w(&u, &[2, 1, 0]);
        let fast = u.pbw_normalize(&a);
        let left = u.pbw_normalize_with(&a, RewriteStrategy::Leftmost);
        let right = u.pbw_normalize_with(&a, RewriteStrategy::Rightmost);
        assert_eq!(fast, left);
        assert_eq!(fast, right);
        // ZYX = XYZ - h X^2 + h Y^2 - h Z^2 - h^2 ... ; check word support only.
        let words: Vec<String> = fast.terms().keys().map(|w| format_word(u.algebra(), w)).collect();
        for want in ["X*Y*Z", "X^2", "Y^2", "Z^2"] {
            assert!(words.iter().any(|x| x == want), "{want} missing from {fast}");
        }
    }

    #[test]
    fn unit_and_products() {
        let u = su2();
        let x = u.generator(0);
        let y = u.generator(1);
        assert_eq!(u.mul(&u.one(), &x), x);
        assert_eq!(u.mul(&x, &y).to_string(), "X*Y");
        assert_eq!(u.mul(&y, &x).to_string(), "X*Y - h*Z");
        let z = u.generator(2);
        assert_eq!(u.mul(&u.mul(&x, &y), &z), u.mul(&x, &u.mul(&y, &z)));
    }

    #[test]
    fn centrality() {
        let u = su2();
        assert!(u.is_central(&u.sum_of_squares()).is_central());
        match u.is_central(&u.generator(0)) {
            Centrality::NotCentral { generator, commutator } => {
                assert_eq!(generator, 1);
                assert_eq!(commutator.to_string(), "h*Z");
            }
            Centrality::Central => panic!("X is not central"),
        }
        let hz = Uea::new(Arc::new(LieAlgebra::heisenberg()));
        assert!(hz.is_central(&hz.generator(2)).is_central());
    }

    #[test]
    fn reduce_modulo_casimir() {
        let u = su2();
        let ring = u.ring().clone();
        let r = Polynomial::var_named(&ring, "r").unwrap();
        let r2 = &r * &r;
        let p = u.sum_of_squares();
        let z2 = u.ideal_reduce(&w(&u, &[2, 2]), &p, &r2).unwrap();
        assert_eq!(z2.to_string(), "-X^2 - Y^2 + r^2");
        let gen = p.sub(&EnvelopingElement::scalar(u.algebra(), r2.clone()));
        assert!(u.ideal_reduce(&gen, &p, &r2).unwrap().is_zero());
        let z3 = u.ideal_reduce(&w(&u, &[2, 2, 2]), &p, &r2).unwrap();
        assert!(z3.terms().keys().all(|w| w.letters().iter().filter(|&&g| g == 2).count() <= 1));
    }

    #[test]
    fn non_central_generator_rejected() {
        let u = su2();
        let err = u.ideal_reduce(&u.generator(0), &u.generator(0), &Polynomial::zero(u.ring()));
        assert!(matches!(err, Err(Error::NotCentral(_))));
    }

    #[test]
    fn coefficient_display() {
        let u = su2();
        let ring = u.ring().clone();
        let c = &Polynomial::h(&ring) + &Polynomial::constant(&ring, qi(2));
        let e = EnvelopingElement::word(u.algebra(), Word::from_slice(&[0]), c)
            .add(&EnvelopingElement::scalar(u.algebra(), Polynomial::constant(&ring, q(-1, 2))));
        assert_eq!(e.to_string(), "(h + 2)*X - 1/2");
    }
}
