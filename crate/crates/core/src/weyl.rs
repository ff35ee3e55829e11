//! The symmetrization (Weyl) map `W: Pol(g*) -> U_h(g)` and its inverse.
//!
//! `W(x^α)` is read off the powers of the generic element `Ξ = Σ t_i X_i`:
//! `Ξ^p = Σ_{|α|=p} (p!/α!) t^α W(x^α)`, so `W(x^α) = (α!/p!) [t^α] Ξ^p`.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::liealg::LieAlgebra;
use crate::linalg::Matrix;
use crate::poly::{coordinate_monomials, Monomial, PolyRing, Polynomial};
use crate::report::{CheckReport, Witness};
use crate::scalar::{qi, Rational};
use crate::uea::{EnvelopingElement, RewriteStrategy, Uea, Word};

pub struct WeylContext {
    uea: Arc<Uea>,
    powers: RwLock<Vec<EnvelopingElement>>,
    monomials: RwLock<HashMap<Vec<u32>, EnvelopingElement>>,
}

impl std::fmt::Debug for WeylContext {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "WeylContext({})", self.uea.algebra().name())
    }
}

fn factorial(n: u32) -> Rational {
    (1..=n as i64).fold(Rational::one(), |acc, k| acc * qi(k))
}

impl WeylContext {
    pub fn new(alg: LieAlgebra) -> Self {
        WeylContext::from_uea(Arc::new(Uea::new(Arc::new(alg))))
    }

    pub fn from_uea(uea: Arc<Uea>) -> Self {
        let one = uea.one();
        WeylContext {
            uea,
            powers: RwLock::new(vec![one]),
            monomials: RwLock::new(HashMap::new()),
        }
    }

    pub fn uea(&self) -> &Arc<Uea> {
        &self.uea
    }

    pub fn algebra(&self) -> &Arc<LieAlgebra> {
        self.uea.algebra()
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        self.uea.ring()
    }

    /// `Ξ = Σ t_i X_i`.
    pub fn generic_element(&self) -> EnvelopingElement {
        let ring = self.ring().clone();
        let aux: Vec<usize> = ring.aux_indices().collect();
        let mut xi = EnvelopingElement::zero(self.algebra());
        for (i, &t) in aux.iter().enumerate() {
            xi.add_term(Word::from_slice(&[i as u8]), Polynomial::var(&ring, t));
        }
        xi
    }

    /// `Ξ^p` in normal form, cached.
    pub fn generic_power(&self, p: usize) -> EnvelopingElement {
        if let Some(e) = self.powers.read().expect("power cache").get(p) {
            return e.clone();
        }
        let xi = self.generic_element();
        let mut guard = self.powers.write().expect("power cache");
        while guard.len() <= p {
            let next = self.uea.mul(guard.last().unwrap(), &xi);
            guard.push(next);
        }
        guard[p].clone()
    }

    /// `W(x^α)` for a coordinate exponent vector `α`.
    pub fn weyl_monomial(&self, alpha: &[u32]) -> EnvelopingElement {
        if let Some(e) = self.monomials.read().expect("monomial cache").get(alpha) {
            return e.clone();
        }
        let ring = self.ring().clone();
        let aux: Vec<usize> = ring.aux_indices().collect();
        let p: u32 = alpha.iter().sum();
        let power = self.generic_power(p as usize);
        let weight = alpha.iter().fold(Rational::one(), |acc, &a| acc * factorial(a)) / factorial(p);
        let mut out = EnvelopingElement::zero(self.algebra());
        for (w, c) in power.terms() {
            let mut coeff = Polynomial::zero(&ring);
            for (m, x) in c.terms() {
                if aux.iter().zip(alpha).all(|(&t, &a)| m.exp(t) == a) {
                    let mut m2 = m.clone();
                    for &t in &aux {
                        m2.set_exp(t, 0);
                    }
                    coeff.add_term(m2, x * &weight);
                }
            }
            out.add_term(w.clone(), coeff);
        }
        self.monomials
            .write()
            .expect("monomial cache")
            .entry(alpha.to_vec())
            .or_insert(out)
            .clone()
    }

    /// `W(f)`, extended linearly over coefficients in `h` and parameters.
    pub fn weyl_sym(&self, f: &Polynomial) -> EnvelopingElement {
        let n = self.algebra().dim();
        let mut out = EnvelopingElement::zero(self.algebra());
        for (m, coeff) in f.split_coordinates() {
            let alpha: Vec<u32> = (0..n).map(|i| m.exp(i)).collect();
            let w = self.weyl_monomial(&alpha);
            out = out.add(&w.scale(&coeff));
        }
        out
    }

    /// `W^{-1}(a)` by peeling off the longest PBW words: `W(x^α) = X^α + (shorter words)`.
    pub fn weyl_inv(&self, a: &EnvelopingElement) -> Polynomial {
        let ring = self.ring().clone();
        let n = self.algebra().dim();
        let mut rest = self.uea.pbw_normalize(a);
        let mut f = Polynomial::zero(&ring);
        while let Some(len) = rest.max_word_len() {
            let top: Vec<(Word, Polynomial)> = rest
                .terms()
                .iter()
                .filter(|(w, _)| w.len() == len)
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect();
            let mut sub = EnvelopingElement::zero(self.algebra());
            for (w, c) in top {
                let alpha = w.counts(n);
                let mut m = Monomial::one(ring.nvars());
                for (i, &e) in alpha.iter().enumerate() {
                    m.set_exp(i, e);
                }
                f = &f + &c.mul_term(&m, &Rational::one());
                sub = sub.add(&self.weyl_monomial(&alpha).scale(&c));
            }
            rest = rest.sub(&sub);
        }
        f
    }

    /// Checks `W ∘ Ā = Ã ∘ W` on coordinate monomials up to `degree`, where `d`
    /// is a derivation of the Lie algebra (column `j` holds `D X_j`).
    pub fn check_intertwining(&self, d: &Matrix<Rational>, degree: u32) -> Result<CheckReport> {
        let alg = self.algebra();
        if let Err((i, j)) = alg.check_derivation(d) {
            return Err(Error::Precondition(format!(
                "not a derivation: D[{a},{b}] != [D{a},{b}] + [{a},D{b}]",
                a = alg.basis()[i],
                b = alg.basis()[j]
            )));
        }
        let mut report = CheckReport::new(format!("intertwining[{}]", alg.name()));
        for f in coordinate_monomials(self.ring(), degree) {
            report.checked += 1;
            let lhs = self.weyl_sym(&self.derive_polynomial(d, &f));
            let rhs = self.derive_element(d, &self.weyl_sym(&f));
            if lhs != rhs {
                report.fail(Witness::new("monomial", format!("f = {f}: W(Df) = {lhs}, D(Wf) = {rhs}")));
                break;
            }
        }
        Ok(report)
    }

    /// `Ā f = Σ_j (D x_j) ∂_j f` with `D x_j = Σ_i D_ij x_i`.
    pub fn derive_polynomial(&self, d: &Matrix<Rational>, f: &Polynomial) -> Polynomial {
        let ring = self.ring();
        let n = self.algebra().dim();
        let mut out = Polynomial::zero(ring);
        for j in 0..n {
            let df = f.partial(j);
            if df.is_zero() {
                continue;
            }
            let mut image = Polynomial::zero(ring);
            for i in 0..n {
                if !d[(i, j)].is_zero() {
                    image = &image + &Polynomial::var(ring, i).scale(&d[(i, j)]);
                }
            }
            out = &out + &(&image * &df);
        }
        out
    }

    /// `Ã a`: the derivation applied letter by letter, then normalized.
    pub fn derive_element(&self, d: &Matrix<Rational>, a: &EnvelopingElement) -> EnvelopingElement {
        let alg = self.algebra();
        let n = alg.dim();
        let mut out = EnvelopingElement::zero(alg);
        for (w, c) in a.terms() {
            for pos in 0..w.len() {
                let j = w.letters()[pos] as usize;
                for i in 0..n {
                    if d[(i, j)].is_zero() {
                        continue;
                    }
                    let mut letters = w.letters().to_vec();
                    letters[pos] = i as u8;
                    out.add_term(Word::from_slice(&letters), c.scale(&d[(i, j)]));
                }
            }
        }
        self.uea.pbw_normalize(&out)
    }
}

/// `W(x^α)` straight from the definition: the average over all orderings of
/// the word, each normalized by literal rewriting. Factorial cost.
pub fn symmetrize_by_permutations(uea: &Uea, alpha: &[u32]) -> EnvelopingElement {
    let base = Word::pbw(alpha);
    let p = base.len();
    let alg = uea.algebra();
    let ring = uea.ring();
    let mut sum = EnvelopingElement::zero(alg);
    let mut idx: Vec<usize> = (0..p).collect();
    let mut count = 0u64;
    permute(&mut idx, 0, &mut |perm| {
        let letters: Vec<u8> = perm.iter().map(|&i| base.letters()[i]).collect();
        sum.add_term(Word::from_slice(&letters), Polynomial::one(ring));
        count += 1;
    });
    let avg = sum.scale_rational(&(Rational::one() / qi(count as i64)));
    uea.pbw_normalize_with(&avg, RewriteStrategy::Leftmost)
}

fn permute(idx: &mut Vec<usize>, k: usize, visit: &mut dyn FnMut(&[usize])) {
    if k == idx.len() {
        visit(idx);
        return;
    }
    for i in k..idx.len() {
        idx.swap(k, i);
        permute(idx, k + 1, visit);
        idx.swap(k, i);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    #[test]
    fn low_degree_images() {
        let ctx = WeylContext::new(LieAlgebra::su2());
        let ring = ctx.ring().clone();
        let x = Polynomial::var(&ring, 0);
        assert_eq!(ctx.weyl_sym(&x).to_string(), "X");
        assert_eq!(ctx.weyl_sym(&Polynomial::one(&ring)).to_string(), "1");
    }

    #[test]
    fn su2_degree_two_images() {
        let ctx = WeylContext::new(LieAlgebra::su2());
        assert_eq!(ctx.weyl_monomial(&[1, 1, 0]).to_string(), "X*Y - (1/2)*h*Z");
        assert_eq!(ctx.weyl_monomial(&[1, 0, 1]).to_string(), "X*Z + (1/2)*h*Y");
    }

    #[test]
    fn inverse_examples() {
        let su2 = WeylContext::new(LieAlgebra::su2());
        let xy = EnvelopingElement::word(su2.algebra(), Word::from_slice(&[0, 1]), Polynomial::one(su2.ring()));
        assert_eq!(su2.weyl_inv(&xy).to_string(), "x*y + (1/2)*h*z");
        let heis = WeylContext::new(LieAlgebra::heisenberg());
        let qp = EnvelopingElement::word(heis.algebra(), Word::from_slice(&[0, 1]), Polynomial::one(heis.ring()));
        assert_eq!(heis.weyl_inv(&qp).to_string(), "q*p + (1/2)*h*e'");
    }

    #[test]
    fn casimir_is_symmetric() {
        let ctx = WeylContext::new(LieAlgebra::su2());
        let ring = ctx.ring().clone();
        let p = (0..3).fold(Polynomial::zero(&ring), |a, i| &a + &Polynomial::var(&ring, i).pow(2));
        assert_eq!(ctx.weyl_sym(&p), ctx.uea().sum_of_squares());
    }

    #[test]
    fn generating_function_matches_permutation_sum() {
        let ctx = WeylContext::new(LieAlgebra::su2());
        for alpha in [[1u32, 1, 1], [2, 1, 0], [0, 2, 2], [1, 0, 3]] {
            assert_eq!(ctx.weyl_monomial(&alpha), symmetrize_by_permutations(ctx.uea(), &alpha));
        }
    }

    #[test]
    fn intertwining_for_inner_derivations() {
        let ctx = WeylContext::new(LieAlgebra::su2());
        let d = ctx.algebra().inner_derivation(0);
        assert!(ctx.check_intertwining(&d, 3).unwrap().passed);
        let zero = Matrix::zeros(3, 3);
        assert!(ctx.check_intertwining(&zero, 2).unwrap().passed);
        let mut bad = Matrix::zeros(3, 3);
        bad[(0, 0)] = q(1, 1);
        assert!(matches!(ctx.check_intertwining(&bad, 2), Err(Error::Precondition(_))));
    }
}
