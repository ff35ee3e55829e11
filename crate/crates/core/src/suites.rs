//! Named property suites shared by `check` and the acceptance tests.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fuzzy::fuzzy_summary;
use crate::glue::GluingInstance;
use crate::liealg::LieAlgebra;
use crate::orbit::{b1_independence, check_quotient_associativity, LevelKind, OrbitData, PsiPStar};
use crate::poly::{coordinate_monomials, Polynomial};
use crate::report::{CheckReport, Witness};
use crate::scalar::{q, qi};
use crate::star::{check_associativity, check_semiclassical, check_tangential, MoyalHeisenberg, MoyalR2n, StarProduct, WeylStar};
use crate::weyl::{symmetrize_by_permutations, WeylContext};

pub const SUITES: &[&str] = &[
    "semiclassical",
    "poisson",
    "associativity",
    "moyal",
    "restriction",
    "tangency",
    "orbit",
    "fuzzy",
    "glue",
    "weyl",
    "intertwining",
];

#[derive(Clone, Debug, Serialize)]
pub struct SuiteCheck {
    pub report: CheckReport,
    /// Negative checks are expected to find a witness.
    pub expect_pass: bool,
}

impl SuiteCheck {
    pub fn ok(&self) -> bool {
        self.report.passed == self.expect_pass
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub passed: bool,
    pub checks: Vec<SuiteCheck>,
}

impl SuiteReport {
    fn new(suite: &str) -> Self {
        SuiteReport {
            suite: suite.to_string(),
            passed: true,
            checks: Vec::new(),
        }
    }

    fn push(&mut self, report: CheckReport) {
        self.push_expecting(report, true);
    }

    fn push_expecting(&mut self, report: CheckReport, expect_pass: bool) {
        let check = SuiteCheck { report, expect_pass };
        self.passed &= check.ok();
        self.checks.push(check);
    }

    pub fn witnesses(&self) -> Vec<Witness> {
        self.checks
            .iter()
            .flat_map(|c| {
                c.report
                    .witnesses
                    .iter()
                    .map(move |w| Witness::new(format!("{}: {}", c.report.name, w.label), w.detail.clone()))
            })
            .collect()
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            write!(f, "{}", c.report)?;
            if !c.expect_pass {
                write!(f, "\n  (expected FAIL: {})", if c.ok() { "ok" } else { "unexpected PASS" })?;
            }
            writeln!(f)?;
        }
        write!(f, "suite {}: {}", self.suite, if self.passed { "PASS" } else { "FAIL" })
    }
}

/// `algebra` overrides the suite's default algebras; `degree` its bound.
pub fn run_suite(name: &str, algebra: Option<&LieAlgebra>, degree: Option<u32>) -> Result<SuiteReport> {
    let algebras = |defaults: &[fn() -> LieAlgebra]| -> Vec<LieAlgebra> {
        match algebra {
            Some(a) => vec![a.clone()],
            None => defaults.iter().map(|f| f()).collect(),
        }
    };
    let both: &[fn() -> LieAlgebra] = &[LieAlgebra::su2, LieAlgebra::heisenberg];
    let mut out = SuiteReport::new(name);
    match name {
        "semiclassical" => {
            for alg in algebras(both) {
                let star = WeylStar::new(Arc::new(WeylContext::new(alg.clone())));
                out.push(check_semiclassical(&star, &alg, degree.unwrap_or(3))?);
            }
        }
        "poisson" => {
            for alg in algebras(both) {
                out.push(alg.poisson_properties(degree.unwrap_or(3)));
            }
        }
        "associativity" => {
            for alg in algebras(both) {
                let star = WeylStar::new(Arc::new(WeylContext::new(alg.clone())));
                let basis = coordinate_monomials(alg.ring(), degree.unwrap_or(2));
                out.push(check_associativity(&star, &basis, None)?);
            }
        }
        "moyal" => out.push(moyal_agreement(degree.unwrap_or(4))?),
        "restriction" => out.push(moyal_restriction(degree.unwrap_or(4))?),
        "tangency" => {
            let (weyl, psi) = tangency(degree.unwrap_or(3), 3)?;
            out.push_expecting(weyl, false);
            out.push(psi);
        }
        "orbit" => {
            for r in orbit_suite(degree.unwrap_or(3))? {
                out.push(r);
            }
        }
        "fuzzy" => {
            for r in fuzzy_suite(degree.unwrap_or(2))? {
                out.push(r);
            }
        }
        "glue" => {
            for r in glue_suite(3, degree.unwrap_or(3))? {
                out.push(r);
            }
        }
        "weyl" => {
            for alg in algebras(both) {
                let ctx = WeylContext::new(alg);
                out.push(weyl_oracle(&ctx, degree.unwrap_or(4)));
                out.push(weyl_round_trip(&ctx, degree.map_or(5, |d| d + 1)));
            }
        }
        "intertwining" => {
            for alg in algebras(&[LieAlgebra::su2]) {
                out.push(intertwining(&WeylContext::new(alg), degree.unwrap_or(3))?);
            }
        }
        other => {
            return Err(Error::Usage(format!("unknown suite `{other}` (known: {})", SUITES.join(", "))));
        }
    }
    Ok(out)
}

fn pairs(basis: &[Polynomial]) -> Vec<(&Polynomial, &Polynomial)> {
    basis.iter().flat_map(|f| basis.iter().map(move |g| (f, g))).collect()
}

/// Closed-form Moyal product against `⋆_S` on Heisenberg monomial pairs.
pub fn moyal_agreement(degree: u32) -> Result<CheckReport> {
    let alg = LieAlgebra::heisenberg();
    let weyl = WeylStar::new(Arc::new(WeylContext::new(alg.clone())));
    let moyal = MoyalHeisenberg::new(None);
    let basis = coordinate_monomials(alg.ring(), degree);
    let outcomes: Vec<Result<Option<Witness>>> = pairs(&basis)
        .par_iter()
        .map(|(f, g)| {
            let a = moyal.star(f, g)?;
            let b = weyl.star(f, g)?;
            Ok((a != b).then(|| Witness::new("pair", format!("f = {f}, g = {g}: moyal {a}, weyl {b}"))))
        })
        .collect();
    let mut report = CheckReport::new("moyal_heis = star_S");
    report.absorb(outcomes.into_iter().collect::<Result<Vec<_>>>()?, 1);
    Ok(report)
}

/// Heisenberg Moyal at `e′ = 1` against the plane Moyal product on `(q, p)` monomials.
pub fn moyal_restriction(degree: u32) -> Result<CheckReport> {
    let heis = MoyalHeisenberg::new(None);
    let plane = MoyalR2n::plane(None);
    let ring = heis.ring().clone();
    let e = ring.index_of("e'").ok_or_else(|| Error::Internal("no e' coordinate".into()))?;
    let basis: Vec<Polynomial> = coordinate_monomials(plane.ring(), degree);
    let outcomes: Vec<Result<Option<Witness>>> = pairs(&basis)
        .par_iter()
        .map(|(f, g)| {
            let restricted = heis
                .star(&f.remap(&ring)?, &g.remap(&ring)?)?
                .evaluate_var(e, &qi(1))
                .remap(plane.ring())?;
            let direct = plane.star(f, g)?;
            Ok((restricted != direct)
                .then(|| Witness::new("pair", format!("f = {f}, g = {g}: restricted {restricted}, plane {direct}"))))
        })
        .collect();
    let mut report = CheckReport::new("moyal_heis|e'=1 = moyal_r2n");
    report.absorb(outcomes.into_iter().collect::<Result<Vec<_>>>()?, 1);
    Ok(report)
}

/// `(⋆_S, ⋆_P)` tangency reports for `p − r²` on su2.
pub fn tangency(degree: u32, h_order: u32) -> Result<(CheckReport, CheckReport)> {
    let orbit = Arc::new(OrbitData::su2(LevelKind::Plain));
    let gen = orbit.classical_generator();
    let weyl = WeylStar::new(orbit.context().clone());
    let mut a = check_tangential(&weyl, std::slice::from_ref(&gen), degree, h_order)?;
    a.name = format!("tangential[star_S, {gen}]");
    let psi = PsiPStar::new(orbit.clone());
    let mut b = check_tangential(&psi, std::slice::from_ref(&gen), degree, h_order)?;
    b.name = format!("tangential[psi_P, {gen}]");
    Ok((a, b))
}

/// `ψ` and `ψ_P` send `f·(p − c⁰)` into the ideal, for `f` up to degree `degree − 2`.
pub fn psi_ideal(orbit: &OrbitData, degree: u32) -> Result<CheckReport> {
    let gen = orbit.classical_generator();
    let sample: Vec<Polynomial> = coordinate_monomials(orbit.ring(), degree.saturating_sub(2))
        .into_iter()
        .map(|f| &f * &gen)
        .collect();
    let outcomes: Vec<Result<Option<Witness>>> = sample
        .par_iter()
        .map(|g| {
            let a = orbit.reduce(&orbit.psi_su2(g)?)?;
            if !a.is_zero() {
                return Ok(Some(Witness::new("psi", format!("{g} reduces to {a}"))));
            }
            let b = orbit.reduce(&orbit.psi_p(g)?)?;
            Ok((!b.is_zero()).then(|| Witness::new("psi_P", format!("{g} reduces to {b}"))))
        })
        .collect();
    let mut report = CheckReport::new(format!("psi(I_0) in I_h [{:?}]", orbit.kind()));
    report.absorb(outcomes.into_iter().collect::<Result<Vec<_>>>()?, 1);
    Ok(report)
}

/// Ideal sample up to degree 5, `B₁` independence at degree 6 and
/// quotient associativity on triples up to `assoc_degree`, for both levels.
pub fn orbit_suite(assoc_degree: u32) -> Result<Vec<CheckReport>> {
    let mut out = Vec::new();
    for kind in [LevelKind::Plain, LevelKind::Shifted] {
        let orbit = OrbitData::su2(kind);
        out.push(psi_ideal(&orbit, 5)?);
        let mut ind = CheckReport::new(format!("B1 independence [{kind:?}]"));
        for (h, r) in [(qi(1), qi(2)), (q(1, 2), q(3, 2))] {
            let data = b1_independence(&orbit, 6, &h, &r)?;
            ind.checked += 1;
            if !data.holds() {
                ind.fail(Witness::new(
                    "rank",
                    format!(
                        "h = {h}, r = {r}: {} words, ideal rank {}, {} B1 words, total rank {}",
                        data.words, data.ideal_rank, data.b1_count, data.total_rank
                    ),
                ));
            }
        }
        out.push(ind);
        let mut assoc = check_quotient_associativity(&orbit, assoc_degree)?;
        assoc.name = format!("{} [{kind:?}]", assoc.name);
        out.push(assoc);
    }
    Ok(out)
}

pub fn fuzzy_suite(pair_degree: u32) -> Result<Vec<CheckReport>> {
    let mut out = Vec::new();
    for j in [q(1, 2), qi(1), q(3, 2)] {
        for h in [qi(1), q(1, 2)] {
            out.push(fuzzy_summary(&j, &h, pair_degree)?.1);
        }
    }
    Ok(out)
}

/// Two-chart Moyal identities at order `order`, plus the identity-transition instance.
pub fn glue_suite(order: u32, degree: u32) -> Result<Vec<CheckReport>> {
    let inst = Arc::new(GluingInstance::two_chart_moyal(order).with_test_degree(degree));
    let mut out = glue_reports(&inst, degree)?;

    let id = GluingInstance::identity_transitions(order).with_test_degree(degree);
    let basis = coordinate_monomials(id.ring(), degree);
    let outcomes: Vec<Result<Option<Witness>>> = pairs(&basis)
        .par_iter()
        .map(|(f, g)| {
            let glued = id.glued_star(0, f, g)?;
            let chart = id.product(0).star(f, g)?;
            Ok((glued != chart).then(|| Witness::new("pair", format!("f = {f}, g = {g}: {glued} vs {chart}"))))
        })
        .collect();
    let mut report = CheckReport::new("identity transitions give the chart product");
    report.absorb(outcomes.into_iter().collect::<Result<Vec<_>>>()?, 1);
    out.push(report);
    Ok(out)
}

/// Cocycle, intertwiner, compatibility, chart independence and associativity
/// of the glued product modulo `h^{K+1}` on triples up to `degree`.
pub fn glue_reports(inst: &Arc<GluingInstance>, degree: u32) -> Result<Vec<CheckReport>> {
    let mut out = vec![
        inst.check_cocycle(),
        inst.check_intertwiner()?,
        inst.check_compatibility()?,
        inst.check_chart_independence()?,
    ];
    let glued = inst.glued(0)?;
    let basis = coordinate_monomials(inst.ring(), degree);
    let mut assoc = check_associativity(&glued, &basis, Some(inst.order()))?;
    assoc.name = format!("associativity[glued] mod h^{}", inst.order() + 1);
    out.push(assoc);
    Ok(out)
}

/// Generating-function `W` against the permutation average on monomials.
pub fn weyl_oracle(ctx: &WeylContext, degree: u32) -> CheckReport {
    let n = ctx.algebra().dim();
    let monos = crate::poly::monomials_up_to(ctx.ring(), &(0..n).collect::<Vec<_>>(), degree);
    let outcomes: Vec<Option<Witness>> = monos
        .par_iter()
        .map(|m| {
            let alpha: Vec<u32> = (0..n).map(|i| m.exp(i)).collect();
            let fast = ctx.weyl_monomial(&alpha);
            let slow = symmetrize_by_permutations(ctx.uea(), &alpha);
            (fast != slow).then(|| {
                Witness::new(
                    "monomial",
                    format!("{}: generating function {fast}, permutations {slow}", crate::poly::format_monomial(ctx.ring(), m)),
                )
            })
        })
        .collect();
    let mut report = CheckReport::new(format!("weyl oracle[{}]", ctx.algebra().name()));
    report.absorb(outcomes, 1);
    report
}

/// `W⁻¹(W f) = f` on coordinate monomials.
pub fn weyl_round_trip(ctx: &WeylContext, degree: u32) -> CheckReport {
    let basis = coordinate_monomials(ctx.ring(), degree);
    let outcomes: Vec<Option<Witness>> = basis
        .par_iter()
        .map(|f| {
            let back = ctx.weyl_inv(&ctx.weyl_sym(f));
            (&back != f).then(|| Witness::new("monomial", format!("{f} comes back as {back}")))
        })
        .collect();
    let mut report = CheckReport::new(format!("weyl round trip[{}]", ctx.algebra().name()));
    report.absorb(outcomes, 1);
    report
}

/// Intertwining for every inner derivation `ad_{X_i}`.
pub fn intertwining(ctx: &WeylContext, degree: u32) -> Result<CheckReport> {
    let alg = ctx.algebra();
    let mut report = CheckReport::new(format!("intertwining[{}]", alg.name()));
    for i in 0..alg.dim() {
        let r = ctx.check_intertwining(&alg.inner_derivation(i), degree)?;
        report.checked += r.checked;
        for w in r.witnesses {
            report.fail(Witness::new(format!("ad_{}", alg.basis()[i]), w.detail));
        }
    }
    Ok(report)
}

