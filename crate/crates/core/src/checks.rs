//! Identity checks with witnesses, shared by the command line verifier and
//! the acceptance suite.
//!
//! Every check runs over a list of inputs and stops at the first failure,
//! reporting the input and the nonzero residual.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::enveloping::{comult, pairing, sym_fields, words, DiffOp, SymTensor};
use crate::error::Result;
use crate::fedosov::{
    curvature_action, delta, delta_inv, sigma, tau_pbw, truncate_weight, FedosovData,
};
use crate::geometry::{Connection, VectorField};
use crate::graded::{Generator, GradedPoly};
use crate::pbw::{congruent_mod_order, congruent_mod_weight, two_term_pbw, two_term_pbw_inv, PbwContext};
use crate::perturbation::{check_contraction, fedosov_resolution};
use crate::sample::Sampler;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail(String),
    Skip(String),
}

/// Result of one named identity over a number of cases.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub cases: usize,
    pub outcome: Outcome,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.outcome == Outcome::Pass
    }

    pub fn failed(&self) -> bool {
        matches!(self.outcome, Outcome::Fail(_))
    }

    pub fn skip(name: &str, reason: impl Into<String>) -> Self {
        Self {
            name: name.to_string(),
            cases: 0,
            outcome: Outcome::Skip(reason.into()),
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.outcome {
            Outcome::Pass => write!(f, "{} PASS cases={}", self.name, self.cases),
            Outcome::Fail(w) => write!(f, "{} FAIL {}", self.name, w),
            Outcome::Skip(r) => write!(f, "{} SKIP {}", self.name, r),
        }
    }
}

/// Accumulates cases of one identity.
struct Runner {
    name: String,
    cases: usize,
    failure: Option<String>,
}

impl Runner {
    fn new(name: &str) -> Self {
        Self {
            name: name.to_string(),
            cases: 0,
            failure: None,
        }
    }

    /// Records one case; `case` returns `Ok(None)` on success and
    /// `Ok(Some(witness))` on failure.
    fn case(&mut self, case: impl FnOnce() -> Result<Option<String>>) {
        if self.failure.is_some() {
            return;
        }
        self.cases += 1;
        match case() {
            Ok(None) => {}
            Ok(Some(w)) => self.failure = Some(w),
            Err(e) => self.failure = Some(format!("error: {e}")),
        }
    }

    fn finish(self) -> Check {
        Check {
            name: self.name,
            cases: self.cases,
            outcome: match self.failure {
                None => Outcome::Pass,
                Some(w) => Outcome::Fail(w),
            },
        }
    }
}

fn witness_if(ok: bool, w: impl FnOnce() -> String) -> Option<String> {
    if ok {
        None
    } else {
        Some(w())
    }
}

/// `Δ(pbw(S)) = (pbw ⊗ pbw)(Δ(S))`.
pub fn coalgebra_morphism(ctx: &PbwContext, tensors: &[SymTensor]) -> Check {
    let mut r = Runner::new("coalgebra_morphism");
    let chart = ctx.chart().clone();
    for s in tensors {
        r.case(|| {
            let lhs = comult(&ctx.pbw_map(s)?);
            let rhs = comult(s).map_words(
                |l| ctx.pbw_map(&SymTensor::word(&chart, *l)),
                |k| ctx.pbw_map(&SymTensor::word(&chart, *k)),
            )?;
            Ok(witness_if(lhs == rhs, || format!("S={s} lhs={lhs} rhs={rhs}")))
        });
    }
    r.finish()
}

/// `pbw ∘ pbw⁻¹ = id` and `pbw⁻¹ ∘ pbw = id` on every basis word up to
/// `max_weight`.
pub fn pbw_round_trip(ctx: &PbwContext, max_weight: u32) -> Check {
    let mut r = Runner::new("pbw_round_trip");
    let chart = ctx.chart().clone();
    for k in words::basis_words_upto(&chart, max_weight) {
        r.case(|| {
            let s = SymTensor::word(&chart, k);
            let back = ctx.pbw_inv(&ctx.pbw_map(&s)?)?;
            if back != s {
                return Ok(Some(format!("pbw_inv(pbw({s})) = {back}")));
            }
            let d = DiffOp::word(&chart, k);
            let fwd = ctx.pbw_map(&ctx.pbw_inv(&d)?)?;
            Ok(witness_if(fwd == d, || format!("pbw(pbw_inv({d})) = {fwd}")))
        });
    }
    r.finish()
}

/// `gr(pbw(S)) = S` on the top weight component of each tensor.
pub fn principal_symbol(ctx: &PbwContext, tensors: &[SymTensor]) -> Check {
    let mut r = Runner::new("principal_symbol");
    for s in tensors {
        let Some(w) = s.weight() else { continue };
        let top = s.weight_component(w);
        r.case(|| {
            let lead = ctx.pbw_map(&top)?.gr_leading();
            Ok(witness_if(lead == top, || format!("S={top} gr(pbw(S))={lead}")))
        });
    }
    r.finish()
}

/// The two-term expansions of `pbw(X_0 ⊙ ⋯ ⊙ X_n)` and `pbw⁻¹(X_0 ⋯ X_n)`
/// modulo order (weight) `n - 1`.
pub fn two_term_expansions(ctx: &PbwContext, field_lists: &[Vec<VectorField>]) -> Check {
    let mut r = Runner::new("two_term_expansions");
    let conn = ctx.connection();
    if !conn.is_torsion_free() {
        return Check::skip("two_term_expansions", "connection has torsion");
    }
    for fields in field_lists {
        if fields.len() < 2 {
            continue;
        }
        let bound = fields.len() as i64 - 2;
        r.case(|| {
            let s = SymTensor::from_fields(fields)?;
            let got = ctx.pbw_map(&s)?;
            let want = two_term_pbw(conn, fields, ctx.max_weight())?;
            if !congruent_mod_order(&got, &want, bound) {
                return Ok(Some(format!("pbw({s}) = {got}, two-term {want}")));
            }
            let mut prod = DiffOp::identity(ctx.chart());
            for x in fields {
                prod = prod.compose(&x.to_diffop(), ctx.max_weight())?;
            }
            let inv = ctx.pbw_inv(&prod)?;
            let want = two_term_pbw_inv(conn, fields)?;
            Ok(witness_if(congruent_mod_weight(&inv, &want, bound), || {
                format!("pbw_inv({prod}) = {inv}, two-term {want}")
            }))
        });
    }
    r.finish()
}

/// `∇^⚡` is flat on basis words up to `max_weight`, for the given fields.
/// The context must reach weight `max_weight + 2`.
pub fn lightning_flatness(ctx: &PbwContext, fields: &[VectorField], max_weight: u32) -> Check {
    let mut r = Runner::new("lightning_flatness");
    let chart = ctx.chart().clone();
    for k in words::basis_words_upto(&chart, max_weight) {
        let s = SymTensor::word(&chart, k);
        for x in fields {
            for y in fields {
                r.case(|| {
                    let curv = lightning_curvature(ctx, x, y, &s)?;
                    Ok(witness_if(curv.is_zero(), || {
                        format!("X={x} Y={y} S={s} curvature={curv}")
                    }))
                });
            }
        }
    }
    r.finish()
}

fn lightning_curvature(
    ctx: &PbwContext,
    x: &VectorField,
    y: &VectorField,
    s: &SymTensor,
) -> Result<SymTensor> {
    let mut total = SymTensor::zero(ctx.chart());
    for (p, xp) in x.homogeneous_components() {
        for (q, yq) in y.homogeneous_components() {
            let xy = ctx.lightning_nabla(&xp, &ctx.lightning_nabla(&yq, s)?)?;
            let yx = ctx.lightning_nabla(&yq, &ctx.lightning_nabla(&xp, s)?)?;
            let br = ctx.lightning_nabla(&xp.lie_bracket(&yq)?, s)?;
            let yx = if (p * q).rem_euclid(2) == 1 { -&yx } else { yx };
            total = &total + &(&(&xy - &yx) - &br);
        }
    }
    Ok(total)
}

/// `A = -Ξ` coefficientwise up to fiber weight `max_fiber_weight`. The
/// context must reach weight `max_fiber_weight + 1`.
pub fn correction_is_minus_xi(data: &FedosovData, ctx: &PbwContext, max_fiber_weight: u32) -> Check {
    let mut r = Runner::new("correction_is_minus_xi");
    r.case(|| {
        let xi = ctx.xi_form(max_fiber_weight)?;
        let n = data.chart().dim();
        let trimmed: Vec<GradedPoly> = data
            .a()
            .components()
            .iter()
            .map(|c| c.filter(|m| m.fiber_weight(n) <= max_fiber_weight))
            .collect();
        let a = crate::fedosov::FiberVectorField::new(data.chart(), trimmed)?;
        let (ra, rx) = (a.records()?, xi.neg().records()?);
        if ra == rx {
            return Ok(None);
        }
        let diff = ra
            .iter()
            .zip(rx.iter())
            .find(|(p, q)| p != q)
            .map(|(p, q)| format!("A: {p} vs -Xi: {q}"))
            .unwrap_or_else(|| format!("{} A records vs {} -Xi records", ra.len(), rx.len()));
        Ok(Some(diff))
    });
    r.finish()
}

/// `δ⁻¹A = 0` and `δ⁻¹Ξ = 0`.
pub fn normalization(data: &FedosovData, ctx: &PbwContext, max_fiber_weight: u32) -> Check {
    let mut r = Runner::new("normalization");
    r.case(|| {
        let a = data.a().delta_inv();
        Ok(witness_if(a.is_zero(), || format!("delta_inv(A) = {a}")))
    });
    r.case(|| {
        let xi = ctx.xi_form(max_fiber_weight)?.delta_inv();
        Ok(witness_if(xi.is_zero(), || format!("delta_inv(Xi) = {xi}")))
    });
    r.finish()
}

/// `D² = 0` on generators and on the given sections.
pub fn d_squared(data: &FedosovData, sections: &[GradedPoly]) -> Check {
    let mut r = Runner::new("d_squared");
    r.case(|| {
        for (g, res) in data.d_squared_residual()? {
            if !res.is_zero() {
                return Ok(Some(format!("D^2({g}) = {res}")));
            }
        }
        Ok(None)
    });
    for w in sections {
        r.case(|| {
            let res = data.d_apply(&data.d_apply(w)?)?;
            Ok(witness_if(res.is_zero(), || format!("D^2({w}) = {res}")))
        });
    }
    r.finish()
}

/// For functions `f`: both routes to `τ(f)` agree, `σ τ(f) = f` and
/// `D τ(f) = 0`.
pub fn tau_identities(data: &FedosovData, ctx: &PbwContext, functions: &[GradedPoly]) -> Check {
    let mut r = Runner::new("tau_identities");
    let n = data.max_weight();
    for f in functions {
        r.case(|| {
            let a = tau_pbw(ctx, f, n)?;
            let b = data.tau_series(f)?;
            if a != b {
                return Ok(Some(format!("f={f} tau_pbw={a} tau_series={b}")));
            }
            let back = sigma(&a);
            if &back != f {
                return Ok(Some(format!("f={f} sigma(tau(f))={back}")));
            }
            let d = data.d_apply(&a)?;
            Ok(witness_if(d.is_zero(), || format!("f={f} D(tau(f))={d}")))
        });
    }
    r.finish()
}

/// `τ(fg) = τ(f) τ(g)` up to the weight bound.
pub fn tau_multiplicative(data: &FedosovData, pairs: &[(GradedPoly, GradedPoly)]) -> Check {
    let mut r = Runner::new("tau_multiplicative");
    let n = data.max_weight();
    for (f, g) in pairs {
        r.case(|| {
            let lhs = data.tau_series(&f.checked_mul(g)?)?;
            let rhs = truncate_weight(&data.tau_series(f)?.checked_mul(&data.tau_series(g)?)?, n);
            Ok(witness_if(lhs == rhs, || format!("f={f} g={g} tau(fg)={lhs} tau(f)tau(g)={rhs}")))
        });
    }
    r.finish()
}

/// With `Γ = 0`, `τ(f)` is the Taylor expansion `Σ_I (1/I!) ∂^I f · y^I`
/// (ordered with the dual-basis signs on odd coordinates).
pub fn flat_taylor(data: &FedosovData, functions: &[GradedPoly]) -> Check {
    let mut r = Runner::new("flat_taylor");
    if data.connection().entries().next().is_some() {
        return Check::skip("flat_taylor", "connection is not zero");
    }
    for f in functions {
        r.case(|| {
            let got = data.tau_series(f)?;
            let want = taylor(f, data.max_weight());
            Ok(witness_if(got == want, || format!("f={f} tau={got} taylor={want}")))
        });
    }
    r.finish()
}

/// `f(x + y)` up to fiber weight `max_weight`: substitute `x_i ↦ x_i + y_i`.
pub fn taylor(f: &GradedPoly, max_weight: u32) -> GradedPoly {
    let chart = f.chart().clone();
    let n = chart.dim();
    let mut out = GradedPoly::zero(&chart);
    for (m, c) in f.terms() {
        // Expand the canonical product of shifted generators in order.
        let mut t = GradedPoly::constant(&chart, c.clone());
        for i in 0..n {
            let shifted = &GradedPoly::x(&chart, i) + &GradedPoly::y(&chart, i);
            t = &t * &shifted.pow(m.exp(i));
        }
        out += &t;
    }
    out.filter(|m| m.fiber_weight(n) <= max_weight)
}

/// Resolution identities. For sections `η` of form degree `p - 1 ≥ 0`,
/// `ω = Dη` satisfies `ω = -D(h(ω))`; for functions `f`, `h(τ f) = 0`.
/// Then the whole contraction `(σ, τ, h, D)` is checked on `probes`.
pub fn resolution(data: &FedosovData, etas: &[GradedPoly], functions: &[GradedPoly], probes: &[GradedPoly]) -> Check {
    let mut r = Runner::new("resolution");
    let res = fedosov_resolution(data, probes);
    let Ok(res) = res else {
        return Check {
            name: "resolution".into(),
            cases: 0,
            outcome: Outcome::Fail(format!("perturbation failed: {}", res.err().unwrap())),
        };
    };
    for eta in etas {
        r.case(|| {
            let omega = data.d_apply(eta)?;
            if !sigma(&omega).is_zero() {
                return Ok(Some(format!("sigma(D({eta})) != 0")));
            }
            let h = data.homotopy_h(&omega)?;
            let back = -data.d_apply(&h)?;
            Ok(witness_if(back == omega, || format!("omega={omega} -D(h(omega))={back}")))
        });
    }
    for f in functions {
        r.case(|| {
            let t = data.tau_series(f)?;
            let h = data.homotopy_h(&t)?;
            if !h.is_zero() {
                return Ok(Some(format!("h(tau({f})) = {h}")));
            }
            let tt = (res.contraction.tau)(f)?;
            Ok(witness_if(tt == t, || format!("perturbed tau({f}) = {tt}, series {t}")))
        });
    }
    r.case(|| {
        let report = check_contraction(&res.contraction, probes, functions);
        Ok(report
            .results
            .iter()
            .find(|x| !x.passed())
            .map(|x| x.to_string()))
    });
    r.case(|| {
        for f in functions {
            let th = (res.theta)(f)?;
            if !th.is_zero() {
                return Ok(Some(format!("theta({f}) = {th}")));
            }
        }
        for p in probes {
            let a = (res.contraction.sigma)(p)?;
            let b = sigma(p);
            if a != b {
                return Ok(Some(format!("perturbed sigma({p}) = {a}, sigma = {b}")));
            }
            let a = (res.contraction.h)(p)?;
            let b = data.homotopy_h(p)?;
            if a != b {
                return Ok(Some(format!("perturbed h({p}) = {a}, series {b}")));
            }
        }
        Ok(None)
    });
    r.finish()
}

/// `(d^∇)² ω` equals the curvature action on `ω`.
pub fn curvature_consistency(connection: &Connection, sections: &[GradedPoly]) -> Check {
    let mut r = Runner::new("curvature_consistency");
    let dn = crate::fedosov::CovariantDifferential::new(connection);
    for w in sections {
        r.case(|| {
            let lhs = dn.apply(&dn.apply(w));
            let rhs = curvature_action(connection, w)?;
            Ok(witness_if(lhs == rhs, || format!("omega={w} (d^nabla)^2={lhs} curvature={rhs}")))
        });
    }
    r.finish()
}

/// `⟨S, i_X δσ⟩ = (-1)^{|S||X|} ⟨X ⊙ S, σ⟩` for homogeneous `S`, `X` and
/// fiber polynomials `σ`. `i_X δ σ = Σ_i f^i ∂σ/∂y_i` for `X = Σ f^i ∂_i`.
pub fn pairing_identity(triples: &[(SymTensor, VectorField, GradedPoly)]) -> Check {
    let mut r = Runner::new("pairing_identity");
    for (s, x, sig) in triples {
        r.case(|| {
            let contracted = contract_delta(x, sig)?;
            let lhs = pairing(s, &contracted)?;
            let xs = x.to_sym().sym_mul(s)?;
            let mut rhs = pairing(&xs, sig)?;
            let (crate::graded::Degree::Homogeneous(ds), crate::graded::Degree::Homogeneous(dx)) =
                (s.degree_of(), x.degree_of())
            else {
                return Ok(None);
            };
            if (ds * dx).rem_euclid(2) == 1 {
                rhs = -rhs;
            }
            Ok(witness_if(lhs == rhs, || format!("S={s} X={x} sigma={sig} lhs={lhs} rhs={rhs}")))
        });
    }
    r.finish()
}

/// `i_X δ σ`, computed by contracting `dx_i` in `δσ` against `f^i`.
pub fn contract_delta(x: &VectorField, sig: &GradedPoly) -> Result<GradedPoly> {
    let chart = x.chart().clone();
    let d = delta(sig);
    let mut out = GradedPoly::zero(&chart);
    for i in 0..chart.dim() {
        let f = x.component(i);
        if f.is_zero() {
            continue;
        }
        let part = d.partial(Generator::form(i));
        out += &f.checked_mul(&part)?;
    }
    Ok(out)
}

/// The symmetrization of `n` fields has order at most `n` and its class in
/// `U^{≤n} / U^{≤n-1}` is `X_1 ⊙ ⋯ ⊙ X_n`.
pub fn symmetrization_symbol(tensors: &[Vec<VectorField>]) -> Check {
    let mut r = Runner::new("symmetrization_symbol");
    for fields in tensors {
        r.case(|| {
            let n = fields.len() as u32;
            let s = SymTensor::from_fields(fields)?;
            let d = sym_fields(fields)?;
            let symbol: SymTensor = d.weight_component(n).reinterpret();
            let ok = d.order().is_none_or(|o| o <= n) && symbol == s;
            Ok(witness_if(ok, || format!("S={s} sym(S)={d}")))
        });
    }
    r.finish()
}

/// `δδ⁻¹ + δ⁻¹δ = id - iσ`.
pub fn delta_homotopy(sections: &[GradedPoly]) -> Check {
    let mut r = Runner::new("delta_homotopy");
    for w in sections {
        r.case(|| {
            let lhs = &delta(&delta_inv(w)) + &delta_inv(&delta(w));
            let rhs = w - &sigma(w);
            Ok(witness_if(lhs == rhs, || format!("omega={w} lhs={lhs} rhs={rhs}")))
        });
    }
    r.finish()
}

/// Random helpers for the suites.
pub fn random_field_lists(sampler: &mut Sampler, count: usize, max_len: usize) -> Vec<Vec<VectorField>> {
    use rand::Rng;
    (0..count)
        .map(|_| {
            let len = sampler.rng().gen_range(2..=max_len.max(2));
            (0..len).map(|_| sampler.coordinate_field()).collect()
        })
        .collect()
}

/// `y^I` pairs with `⃖∂^I` to a nonzero constant.
pub fn basis_pairing_nonzero(chart: &alloc::sync::Arc<crate::graded::Chart>, max_weight: u32) -> Check {
    let mut r = Runner::new("basis_pairing");
    for k in words::basis_words_upto(chart, max_weight) {
        r.case(|| {
            let v = pairing(&SymTensor::word(chart, k), &crate::pbw::fiber_monomial(chart, &k))?;
            Ok(witness_if(v.is_constant() && !v.is_zero(), || format!("I={k} pairing={v}")))
        });
    }
    r.finish()
}
