//! The homological perturbation lemma for filtered contractions.
//!
//! Orientation: filtrations are ascending weights and a perturbation must
//! strictly raise the weight of every element it does not kill. With this
//! convention all perturbation series terminate on truncated carriers.
//!
//! A contraction of `(N, d_N)` onto `(M, d_M)` is `σ: N → M`, `τ: M → N`
//! and `h: N → N` with `στ = id`, `τσ - id = h d_N + d_N h` and the side
//! conditions `σh = 0`, `hτ = 0`, `hh = 0`.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::fedosov::{self, FedosovData};
use crate::graded::GradedPoly;

/// An element of a filtered graded module.
pub trait Filtered: Clone + PartialEq + fmt::Display {
    fn zero_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    /// Smallest weight of a nonzero component, `None` for zero.
    fn min_weight(&self) -> Option<u32>;
}

impl Filtered for GradedPoly {
    fn zero_like(&self) -> Self {
        GradedPoly::zero(self.chart())
    }

    fn is_zero(&self) -> bool {
        GradedPoly::is_zero(self)
    }

    fn add(&self, other: &Self) -> Self {
        self + other
    }

    fn sub(&self, other: &Self) -> Self {
        self - other
    }

    fn min_weight(&self) -> Option<u32> {
        fedosov::min_weight(self)
    }
}

/// A linear map between filtered modules.
pub type LinearMap<A, B> = Arc<dyn Fn(&A) -> Result<B> + Send + Sync>;

pub fn linear_map<A, B>(f: impl Fn(&A) -> Result<B> + Send + Sync + 'static) -> LinearMap<A, B> {
    Arc::new(f)
}

/// The data `(d_N, d_M, σ, τ, h)` of a contraction.
#[derive(Clone)]
pub struct Contraction<N, M> {
    pub big_d: LinearMap<N, N>,
    pub small_d: LinearMap<M, M>,
    pub sigma: LinearMap<N, M>,
    pub tau: LinearMap<M, N>,
    pub h: LinearMap<N, N>,
}

/// Outcome of one identity check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityResult {
    pub name: String,
    /// `None` on success, otherwise the input and residual that failed.
    pub witness: Option<String>,
}

impl IdentityResult {
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

impl fmt::Display for IdentityResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.witness {
            None => write!(f, "IDENTITY {} PASS", self.name),
            Some(w) => write!(f, "IDENTITY {} FAIL {}", self.name, w),
        }
    }
}

/// All identity results of one contraction check.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ContractionReport {
    pub results: Vec<IdentityResult>,
}

impl ContractionReport {
    pub fn all_passed(&self) -> bool {
        self.results.iter().all(IdentityResult::passed)
    }

    pub fn get(&self, name: &str) -> Option<&IdentityResult> {
        self.results.iter().find(|r| r.name == name)
    }
}

impl fmt::Display for ContractionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.results {
            writeln!(f, "{r}")?;
        }
        Ok(())
    }
}

/// Checks every defining identity of a contraction on sample elements of
/// both complexes: `d_N² = 0`, `d_M² = 0`, `σ` and `τ` chain maps,
/// `στ = id`, `τσ - id = h d_N + d_N h`, `σh = 0`, `hτ = 0`, `hh = 0`.
///
/// Identities are stated on differences, so a map error counts as a
/// failure with the error as witness.
pub fn check_contraction<N: Filtered, M: Filtered>(
    c: &Contraction<N, M>,
    big_samples: &[N],
    small_samples: &[M],
) -> ContractionReport {
    let mut results = Vec::new();
    results.push(identity("big_d_squared", big_samples, |x| {
        (c.big_d)(&(c.big_d)(x)?)
    }));
    results.push(identity("small_d_squared", small_samples, |m| {
        (c.small_d)(&(c.small_d)(m)?)
    }));
    results.push(identity("sigma_chain_map", big_samples, |x| {
        Ok((c.sigma)(&(c.big_d)(x)?)?.sub(&(c.small_d)(&(c.sigma)(x)?)?))
    }));
    results.push(identity("tau_chain_map", small_samples, |m| {
        Ok((c.big_d)(&(c.tau)(m)?)?.sub(&(c.tau)(&(c.small_d)(m)?)?))
    }));
    results.push(identity("sigma_tau", small_samples, |m| {
        Ok((c.sigma)(&(c.tau)(m)?)?.sub(m))
    }));
    results.push(identity("homotopy", big_samples, |x| {
        let lhs = (c.tau)(&(c.sigma)(x)?)?.sub(x);
        let rhs = (c.h)(&(c.big_d)(x)?)?.add(&(c.big_d)(&(c.h)(x)?)?);
        Ok(lhs.sub(&rhs))
    }));
    results.push(identity("sigma_h", big_samples, |x| (c.sigma)(&(c.h)(x)?)));
    results.push(identity("h_tau", small_samples, |m| (c.h)(&(c.tau)(m)?)));
    results.push(identity("h_h", big_samples, |x| (c.h)(&(c.h)(x)?)));
    ContractionReport { results }
}

fn identity<A: Filtered, B: Filtered>(
    name: &str,
    samples: &[A],
    residual: impl Fn(&A) -> Result<B>,
) -> IdentityResult {
    let mut witness = None;
    for x in samples {
        match residual(x) {
            Ok(r) if r.is_zero() => {}
            Ok(r) => {
                witness = Some(format!("input={x} residual={r}"));
                break;
            }
            Err(e) => {
                witness = Some(format!("input={x} error={e}"));
                break;
            }
        }
    }
    IdentityResult {
        name: name.to_string(),
        witness,
    }
}

/// The perturbed contraction of `(N, d_N + ∂)` onto `(M, d_M + ϑ)`:
/// `σ̆ = Σ σ(∂h)^k`, `τ̆ = Σ (h∂)^k τ`, `h̆ = Σ (h∂)^k h` and
/// `ϑ = Σ σ∂(h∂)^k τ`.
#[derive(Clone)]
pub struct Perturbed<N, M> {
    pub contraction: Contraction<N, M>,
    pub theta: LinearMap<M, M>,
}

/// Applies the perturbation lemma.
///
/// `probes` are elements on which `∂` is checked to strictly raise weight;
/// `max_terms` bounds every series. A series that has not reached zero
/// after `max_terms` terms is an internal error.
pub fn perturb_contraction<N, M>(
    c: &Contraction<N, M>,
    perturbation: LinearMap<N, N>,
    probes: &[N],
    max_terms: usize,
) -> Result<Perturbed<N, M>>
where
    N: Filtered + Send + Sync + 'static,
    M: Filtered + Send + Sync + 'static,
{
    for x in probes {
        let px = perturbation(x)?;
        if let (Some(w), Some(pw)) = (x.min_weight(), px.min_weight()) {
            if pw <= w {
                return Err(Error::InvalidArgument(format!(
                    "perturbation does not raise the weight of {x}"
                )));
            }
        }
    }
    let h = c.h.clone();
    let dp = perturbation.clone();
    // Σ_k (h∂)^k applied to an element of N
    let h_series: LinearMap<N, N> = Arc::new(move |x: &N| {
        geometric(x, max_terms, |t| h(&dp(t)?))
    });
    let dp = perturbation.clone();
    let h = c.h.clone();
    // Σ_k (∂h)^k applied to an element of N
    let dh_series: LinearMap<N, N> = Arc::new(move |x: &N| {
        geometric(x, max_terms, |t| dp(&h(t)?))
    });

    let (tau, hs) = (c.tau.clone(), h_series.clone());
    let new_tau: LinearMap<M, N> = Arc::new(move |m| hs(&tau(m)?));
    let (h, hs) = (c.h.clone(), h_series.clone());
    let new_h: LinearMap<N, N> = Arc::new(move |x| hs(&h(x)?));
    let (sigma, ds) = (c.sigma.clone(), dh_series);
    let new_sigma: LinearMap<N, M> = Arc::new(move |x| sigma(&ds(x)?));
    let (sigma, dp, nt) = (c.sigma.clone(), perturbation.clone(), new_tau.clone());
    let theta: LinearMap<M, M> = Arc::new(move |m| sigma(&dp(&nt(m)?)?));
    let (big_d, dp) = (c.big_d.clone(), perturbation);
    let new_big: LinearMap<N, N> = Arc::new(move |x| Ok(big_d(x)?.add(&dp(x)?)));
    let (small_d, th) = (c.small_d.clone(), theta.clone());
    let new_small: LinearMap<M, M> = Arc::new(move |m| Ok(small_d(m)?.add(&th(m)?)));
    Ok(Perturbed {
        contraction: Contraction {
            big_d: new_big,
            small_d: new_small,
            sigma: new_sigma,
            tau: new_tau,
            h: new_h,
        },
        theta,
    })
}

/// `Σ_{k ≥ 0} step^k(x)`, stopping at the first zero term.
fn geometric<N: Filtered>(x: &N, max_terms: usize, step: impl Fn(&N) -> Result<N>) -> Result<N> {
    let mut acc = x.clone();
    let mut term = x.clone();
    for _ in 0..max_terms {
        term = step(&term)?;
        if term.is_zero() {
            return Ok(acc);
        }
        acc = acc.add(&term);
    }
    Err(Error::Internal(
        "perturbation series did not stabilize within the weight bound".into(),
    ))
}

/// The contraction of `(Ω(M, Ŝ T^∨), -δ)` onto functions with zero
/// differential: `σ`, the inclusion `i`, and `h = δ⁻¹`. Results are
/// truncated at the Fedosov weight bound.
pub fn delta_contraction(data: &FedosovData) -> Contraction<GradedPoly, GradedPoly> {
    let n = data.max_weight();
    Contraction {
        big_d: linear_map(move |x: &GradedPoly| {
            Ok(-fedosov::truncate_weight(&fedosov::delta(x), n))
        }),
        small_d: linear_map(|m: &GradedPoly| Ok(GradedPoly::zero(m.chart()))),
        sigma: linear_map(|x: &GradedPoly| Ok(fedosov::sigma(x))),
        tau: linear_map(fedosov::iota),
        h: linear_map(move |x: &GradedPoly| {
            Ok(fedosov::truncate_weight(&fedosov::delta_inv(x), n))
        }),
    }
}

/// The δ-contraction perturbed by `∂ = d^∇ + A`, whose big differential is
/// the Fedosov operator `D`.
pub fn fedosov_resolution(
    data: &FedosovData,
    probes: &[GradedPoly],
) -> Result<Perturbed<GradedPoly, GradedPoly>> {
    let c = delta_contraction(data);
    let d = data.clone();
    let perturbation = linear_map(move |x: &GradedPoly| d.perturbation(x));
    perturb_contraction(&c, perturbation, probes, data.max_weight() as usize + 2)
}
