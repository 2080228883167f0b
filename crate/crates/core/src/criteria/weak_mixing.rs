use num::traits::One;
use rand::Rng;

use super::{hypercyclicity_report, CriterionReport, Verdict, Witness};
use crate::error::{Error, Result};
use crate::measure::MeasureSystem;
use crate::rational::Rational;
use crate::sampling::random_step_function;
use crate::step::{apply_tf, apply_tf_inverse, gs_decay_check, StepFunction};

/// Norm below which a sampled `T_f^{n_k} φ` counts as decayed.
pub const DECAY_THRESHOLD: f64 = 1e-6;

/// Runs the Gethner–Shapiro conditions along `n_k = k`, `k ≤ horizon`, on
/// `χ_W` and `samples` random step functions. Only evaluated when the measure
/// condition holds; otherwise its verdict is inherited.
///
/// A sample whose final norm stays at or above [`DECAY_THRESHOLD`] is an
/// [`Error::InconsistentWitness`]: the criterion promised decay and the
/// horizon did not show it.
pub fn weak_mixing_consistency<R: Rng>(
    sys: &MeasureSystem,
    horizon: u64,
    samples: usize,
    rng: &mut R,
) -> Result<CriterionReport> {
    const ID: &str = "weak_mixing_gs";
    let base = hypercyclicity_report(sys, horizon)?;
    if base.verdict != Verdict::Satisfied {
        return Ok(CriterionReport::new(
            ID,
            base.verdict,
            base.witness,
            format!("skipped: measure condition verdict is {:?}", base.verdict),
        ));
    }
    let horizon = horizon.max(1);
    let schedule: Vec<u64> = (1..=horizon).collect();

    let chi_w = StepFunction::level_indicator(sys, 0, Rational::one());
    let mut worst = 0.0_f64;
    let mut checked = 0usize;
    let mut inverse_exact = true;
    let candidates = std::iter::once(chi_w).chain((0..samples).map(|_| random_step_function(rng, sys, 4)));
    for (idx, phi) in candidates.enumerate() {
        let report = gs_decay_check(sys, &phi, &schedule)?;
        let last = report.final_norm();
        if last.is_nan() || last >= DECAY_THRESHOLD {
            let which = if idx == 0 { "χ_W".to_string() } else { format!("sample {idx}") };
            return Err(Error::InconsistentWitness {
                horizon,
                detail: format!("{which}: norm {last:e} at n = {horizon} is not below {DECAY_THRESHOLD:e}"),
            });
        }
        worst = worst.max(last);
        // (c): T_{f^{-1}} is a right inverse of T_f on step functions.
        inverse_exact &= apply_tf(&apply_tf_inverse(&phi)) == phi;
        checked += 1;
    }
    if !inverse_exact {
        return Err(Error::InconsistentWitness {
            horizon,
            detail: "T_f T_{f^{-1}} φ differs from φ".into(),
        });
    }
    let witness = Witness::new()
        .text("n_k", "k")
        .integer("horizon", horizon as i64)
        .integer("functions_checked", checked as i64)
        .float("max_final_norm", worst)
        .float("threshold", DECAY_THRESHOLD)
        .boolean("right_inverse_exact", inverse_exact);
    Ok(CriterionReport::new(
        ID,
        Verdict::Satisfied,
        Some(witness),
        "‖T_f^n φ‖ and ‖T_{f^{-1}}^n φ‖ fall below the threshold for every checked φ; T_f T_{f^{-1}} = I exactly",
    ))
}
