use num::traits::One;

use super::{CriterionReport, Verdict, Witness};
use crate::error::Result;
use crate::measure::MeasureSystem;
use crate::rational::{format_rational, Rational};
use crate::shift::{Side, WeightSequence};

/// Number of leading schedule terms written into a witness.
const SCHEDULE_PREFIX: i64 = 32;

/// Decides the measure condition for hypercyclicity of `T_f`: some schedule
/// `n_k` with `μ(f^{j-n_k}W)/μ(f^j W) → 0` and `μ(f^j W)/μ(f^{j+n_k}W) → ∞`
/// for every `j`.
///
/// With geometric tails, `μ(f^{j-n}W)` eventually scales like `r_left^n` and
/// `μ(f^{j+n}W)` like `r_right^n`, so the condition holds iff both ratios are
/// below one, and then `n_k = k` works. Window levels are enumerated up to
/// `horizon` to report the attained ratios.
pub fn hypercyclicity_report(sys: &MeasureSystem, horizon: u64) -> Result<CriterionReport> {
    const ID: &str = "hypercyclicity_iii";
    let (k_min, k_max) = sys.window();
    let horizon = horizon.max(1) as i64;
    let Some(tails) = sys.tails() else {
        // Only pairs inside the window are known.
        let mut witness = Witness::new().integer("window_min", k_min).integer("window_max", k_max);
        let reach = horizon.min(k_max - k_min);
        if reach >= 1 {
            let mut worst_left: Option<Rational> = None;
            for j in k_min + reach..=k_max {
                let q = sys.mu_w(j - reach)? / sys.mu_w(j)?;
                worst_left = Some(worst_left.map_or(q.clone(), |w: Rational| w.max(q)));
            }
            if let Some(w) = worst_left {
                witness = witness.integer("n", reach).rational("max_left_ratio", &w);
            }
        }
        return Ok(CriterionReport::new(
            ID,
            Verdict::InconclusiveWindow,
            Some(witness),
            "pure window system: limits over all levels are not determined by finite data",
        ));
    };

    let one = Rational::one();
    let left_ok = tails.left < one;
    let right_ok = tails.right < one;

    // Window enumeration at n = horizon: the worst j for each ratio.
    let mut max_left: Option<Rational> = None;
    let mut min_right: Option<Rational> = None;
    for j in k_min..=k_max {
        let left = sys.mu_w(j - horizon)? / sys.mu_w(j)?;
        let right = sys.mu_w(j)? / sys.mu_w(j + horizon)?;
        max_left = Some(max_left.map_or(left.clone(), |m: Rational| m.max(left)));
        min_right = Some(min_right.map_or(right.clone(), |m: Rational| m.min(right)));
    }
    let schedule: Vec<i64> = (1..=horizon.min(SCHEDULE_PREFIX)).collect();
    let witness = Witness::new()
        .text("n_k", "k")
        .integers("schedule", &schedule)
        .rational("r_left", &tails.left)
        .rational("r_right", &tails.right)
        .integer("horizon", horizon)
        .rational("max_left_ratio_at_horizon", max_left.as_ref().expect("window is nonempty"))
        .rational("min_right_ratio_at_horizon", min_right.as_ref().expect("window is nonempty"));

    if left_ok && right_ok {
        Ok(CriterionReport::new(
            ID,
            Verdict::Satisfied,
            Some(witness),
            format!(
                "μ(f^(j-n)W)/μ(f^jW) ~ C_j·({})^n → 0 and μ(f^jW)/μ(f^(j+n)W) ~ C_j·({})^(-n) → ∞ for every j",
                format_rational(&tails.left),
                format_rational(&tails.right)
            ),
        ))
    } else {
        let mut why = Vec::new();
        if !left_ok {
            why.push(format!(
                "r_left = {} ≥ 1, so μ(f^(j-n)W)/μ(f^jW) stays bounded below along every schedule",
                format_rational(&tails.left)
            ));
        }
        if !right_ok {
            why.push(format!(
                "r_right = {} ≥ 1, so μ(f^jW)/μ(f^(j+n)W) stays bounded along every schedule",
                format_rational(&tails.right)
            ));
        }
        Ok(CriterionReport::new(ID, Verdict::Violated, Some(witness), why.join("; ")))
    }
}

/// Hypercyclicity of a weighted backward shift read off its weights.
///
/// Bilateral: products `∏_{h=j-n+1}^{j} w_h → 0` and `∏_{h=j+1}^{j+n} w_h → ∞`
/// along one schedule. Unilateral: `sup_n ∏_{h=1}^{n} w_h = ∞`. With periodic
/// tails each product is a bounded factor times a power of the period
/// product, which settles both limits.
pub fn shift_product_criterion(w: &WeightSequence, horizon: u64) -> Result<CriterionReport> {
    let one = Rational::one();
    let n = horizon.max(1) as i64;
    match w.side() {
        Side::Bilateral => {
            const ID: &str = "bilateral_shift_products";
            let (Some(left), Some(right)) = (w.left_tail(), w.right_tail()) else {
                return Ok(CriterionReport::new(
                    ID,
                    Verdict::InconclusiveWindow,
                    None,
                    "weights are only known on a finite window",
                ));
            };
            let pl = left.period_product();
            let pr = right.period_product();
            let (back, _) = w.weight_product(1 - n, 0)?;
            let (fwd, _) = w.weight_product(1, n)?;
            let witness = Witness::new()
                .text("n_k", "k")
                .rational("left_period_product_p", &pl)
                .rational("right_period_product_p", &pr)
                .integer("horizon", n)
                .rational("backward_product_p_at_horizon", &back)
                .rational("forward_product_p_at_horizon", &fwd);
            let verdict = if pl < one && pr > one {
                Verdict::Satisfied
            } else {
                Verdict::Violated
            };
            Ok(CriterionReport::new(
                ID,
                verdict,
                Some(witness),
                "products of w^p over a left period and a right period decide both limits",
            ))
        }
        Side::Unilateral => {
            const ID: &str = "unilateral_shift_products";
            let Some(right) = w.right_tail() else {
                return Ok(CriterionReport::new(
                    ID,
                    Verdict::InconclusiveWindow,
                    None,
                    "weights are only known on a finite window",
                ));
            };
            let pr = right.period_product();
            let (fwd, _) = w.weight_product(1, n)?;
            let witness = Witness::new()
                .rational("right_period_product_p", &pr)
                .integer("horizon", n)
                .rational("product_p_at_horizon", &fwd);
            let verdict = if pr > one {
                Verdict::Satisfied
            } else {
                Verdict::Violated
            };
            Ok(CriterionReport::new(ID, verdict, Some(witness), "sup_n w_1⋯w_n = ∞ iff the period product exceeds 1"))
        }
    }
}
