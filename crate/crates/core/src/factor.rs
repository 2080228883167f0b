//! The factor map `Π : L^p(X) → ℓ^p(ℤ)` and the semiconjugacy
//! `Π ∘ T_f = B_w ∘ Π`.
//!
//! For a step function, `∫_W φ ∘ f^k dμ = Σ_i a_{k,i} μ(B_i)`, so
//!
//! ```text
//! x_k = μ(f^k W)^(1/p) / μ(W) · Σ_i a_{k,i} μ(B_i).
//! ```
//!
//! Each coordinate is a rational multiple of the level radical
//! `μ(f^k W)^(1/p)`, which [`Radical`] keeps symbolic.

use num::complex::Complex64;
use num::traits::Zero;

use crate::error::Result;
use crate::measure::MeasureSystem;
use crate::rational::{self, Rational};
use crate::shift::{derive_weights, lp_norm_seq, Radical, RadicalVector, SeqVector, Side, WeightSequence};
use crate::step::{apply_tf, StepFunction};

/// Exact `Π(φ)` for rational step functions.
pub fn project(sys: &MeasureSystem, phi: &StepFunction<Rational>) -> Result<RadicalVector> {
    let total = sys.mu_wandering();
    let mut out = RadicalVector::zero(Side::Bilateral, sys.p().clone());
    for k in phi.levels() {
        let integral: Rational = (0..sys.cell_count())
            .map(|i| phi.get(k, i) * sys.mu_cell(i))
            .sum();
        if integral.is_zero() {
            continue;
        }
        out.insert(k, Radical::new(integral / total, sys.mu_w(k)?))?;
    }
    Ok(out)
}

/// Float `Π(φ)` for complex step functions.
pub fn project_float(sys: &MeasureSystem, phi: &StepFunction<Complex64>) -> Result<SeqVector> {
    let total = rational::to_f64(sys.mu_wandering());
    let mut entries = Vec::new();
    for k in phi.levels() {
        let integral: Complex64 = (0..sys.cell_count())
            .map(|i| phi.get(k, i) * rational::to_f64(sys.mu_cell(i)))
            .sum();
        let scale = sys.p().root_f64(&sys.mu_w(k)?) / total;
        entries.push((k, integral * scale));
    }
    SeqVector::from_entries(Side::Bilateral, entries)
}

/// Distance between `Π(T_f φ)` and `B_w Π(φ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Defect {
    /// Both sides agree coordinatewise as exact reals.
    pub exact_zero: bool,
    /// `‖Π(T_f φ) − B_w Π(φ)‖_p` in floating point (0 when `exact_zero`).
    pub value: f64,
}

/// Semiconjugacy defect with precomputed weights.
pub fn semiconjugacy_defect_with(
    sys: &MeasureSystem,
    weights: &WeightSequence,
    phi: &StepFunction<Rational>,
) -> Result<Defect> {
    let lhs = project(sys, &apply_tf(phi))?;
    let rhs = weights.apply_backward_exact(&project(sys, phi)?)?;
    if lhs.exact_eq(&rhs) {
        return Ok(Defect {
            exact_zero: true,
            value: 0.0,
        });
    }
    let diff = lhs.to_float().sub(&rhs.to_float())?;
    Ok(Defect {
        exact_zero: false,
        value: lp_norm_seq(&diff, sys.p()),
    })
}

pub fn semiconjugacy_defect(sys: &MeasureSystem, phi: &StepFunction<Rational>) -> Result<Defect> {
    semiconjugacy_defect_with(sys, &derive_weights(sys)?, phi)
}

/// Float-mode defect for complex step functions.
pub fn semiconjugacy_defect_float(sys: &MeasureSystem, phi: &StepFunction<Complex64>) -> Result<f64> {
    let weights = derive_weights(sys)?;
    let lhs = project_float(sys, &apply_tf(phi))?;
    let rhs = weights.apply_backward(&project_float(sys, phi)?)?;
    Ok(lp_norm_seq(&lhs.sub(&rhs)?, sys.p()))
}

/// A preimage under `Π`: every coordinate `x_k` is carried by the first cell
/// of level `k`, `a_{k,0} = x_k μ(W) / (μ(f^k W)^(1/p) μ(B_0))`.
pub fn lift(sys: &MeasureSystem, x: &SeqVector) -> Result<StepFunction<Complex64>> {
    let total = rational::to_f64(sys.mu_wandering());
    let b0 = rational::to_f64(sys.mu_cell(0));
    let mut entries = Vec::with_capacity(x.len());
    for (k, z) in x.iter() {
        let root = sys.p().root_f64(&sys.mu_w(k)?);
        entries.push(((k, 0), z * (total / (root * b0))));
    }
    StepFunction::new(sys, entries)
}

/// Exact preimage of a vector whose coordinates are rational multiples of
/// the level radicals `μ(f^k W)^(1/p)`; `None` when some coordinate is not.
pub fn lift_exact(sys: &MeasureSystem, x: &RadicalVector) -> Result<Option<StepFunction<Rational>>> {
    let total = sys.mu_wandering();
    let b0 = sys.mu_cell(0);
    let mut entries = Vec::new();
    for (k, r) in x.iter() {
        let level = sys.mu_w(k)?;
        // c · r^(1/p) = (c · (r / μ_k)^(1/p)) · μ_k^(1/p); only rational when
        // r / μ_k = 1 up to the exact-equality test.
        let candidate = Radical::new(r.coeff.clone(), level.clone());
        if !candidate.exact_eq(r, sys.p()) {
            return Ok(None);
        }
        entries.push(((k, 0), &r.coeff * total / b0));
    }
    StepFunction::new(sys, entries).map(Some)
}

/// Bound `κ` with `‖Π φ‖_p ≤ κ ‖φ‖_p`: `κ^p = K`, the distortion constant.
///
/// Hölder on each level gives `|Σ_i a_i μ(B_i)|^p ≤ μ(W)^{p-1} Σ_i |a_i|^p μ(B_i)`
/// and bounded distortion gives `μ(B_i) ≤ K μ(W) μ(f^k B_i) / μ(f^k W)`.
pub fn projection_bound_pow(sys: &MeasureSystem) -> Rational {
    sys.distortion_constant()
}
