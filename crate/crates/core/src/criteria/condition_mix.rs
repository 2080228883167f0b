use num::traits::One;

use super::{CriterionReport, Verdict, Witness};
use crate::error::Result;
use crate::measure::MeasureSystem;
use crate::rational::{format_rational, powi, Rational};

/// `sup_{n≥1} inf_{k∈ℤ} μ(f^k W)/μ(f^{k+n} W)`, the `p`-th power of the
/// left side of the mixing condition.
#[derive(Clone, Debug, PartialEq)]
pub struct ConditionMix {
    /// `None` when the supremum is infinite.
    pub value: Option<Rational>,
    /// Whether `value` is the supremum itself rather than a lower estimate.
    pub exact: bool,
    /// Length attaining the supremum, if it is attained in the enumeration.
    pub argmax_n: Option<u64>,
    pub report: CriterionReport,
}

const ID: &str = "condition_mix_i";

/// `inf_k μ(f^k W)/μ(f^{k+n} W)` with both geometric tails.
///
/// With `a = r_left` and `b = 1/r_right`, pairs inside one tail give `a^n` or
/// `b^n`. Pairs straddling the whole window give
/// `μ(f^{k_min}W)/μ(f^{k_max}W) · a^x b^y` with `x + y` fixed, extremal at the
/// ends. The remaining pairs touch the window and are finite in number.
fn inf_at(sys: &MeasureSystem, a: &Rational, b: &Rational, n: i64) -> Result<Rational> {
    let (k_min, k_max) = sys.window();
    let mut best = powi(a, n).min(powi(b, n));
    let mut consider = |k: i64| -> Result<()> {
        let q = sys.mu_w(k)? / sys.mu_w(k + n)?;
        if q < best {
            best = q;
        }
        Ok(())
    };
    for k in k_min..=k_max {
        consider(k)?;
    }
    for t in k_min..=k_max {
        if t - n < k_min {
            consider(t - n)?;
        }
    }
    // Straddling pairs: k ∈ [k_max + 1 - n, k_min - 1].
    let (lo, hi) = (k_max + 1 - n, k_min - 1);
    if lo <= hi {
        consider(lo)?;
        consider(hi)?;
    }
    Ok(best)
}

/// Evaluates the supremum exactly when the tails decide it.
///
/// * `min(a, b) < 1`: `inf(n) ≤ min(a, b)^n`, so enumeration stops once that
///   envelope drops below the best value found.
/// * `a, b > 1`: every pair eventually involves a growing tail power, so the
///   supremum is infinite.
/// * `min(a, b) = 1`: past `n = width + 2` the infimum is non-decreasing and
///   tends to the minimum of the `n`-independent terms, which is added as a
///   limit.
///
/// Enumeration beyond `n_max` is not performed; a capped result is marked not
/// exact.
pub fn conditionmix_lhs(sys: &MeasureSystem, n_max: u64) -> Result<ConditionMix> {
    let one = Rational::one();
    let (k_min, k_max) = sys.window();
    let width = k_max - k_min;
    let n_max = n_max.max(1) as i64;

    let Some(tails) = sys.tails() else {
        let mut sup: Option<(Rational, i64)> = None;
        for n in 1..=width.min(n_max) {
            let mut inf: Option<Rational> = None;
            for k in k_min..=k_max - n {
                let q = sys.mu_w(k)? / sys.mu_w(k + n)?;
                inf = Some(inf.map_or(q.clone(), |m: Rational| m.min(q)));
            }
            let inf = inf.expect("range is nonempty");
            if sup.as_ref().is_none_or(|(s, _)| inf > *s) {
                sup = Some((inf, n));
            }
        }
        let mut witness = Witness::new().integer("window_min", k_min).integer("window_max", k_max);
        if let Some((v, n)) = &sup {
            witness = witness.rational("window_sup_inf_p", v).integer("argmax_n", *n);
        }
        return Ok(ConditionMix {
            argmax_n: sup.as_ref().map(|(_, n)| *n as u64),
            value: sup.map(|(v, _)| v),
            exact: false,
            report: CriterionReport::new(
                ID,
                Verdict::InconclusiveWindow,
                Some(witness),
                "pure window: infima over ℤ are not determined; value covers pairs inside the window only",
            ),
        });
    };

    let a = tails.left.clone();
    let b = tails.right.recip();
    let m = a.clone().min(b.clone());
    let base = Witness::new().rational("a", &a).rational("b", &b);

    if a > one && b > one {
        return Ok(ConditionMix {
            value: None,
            exact: true,
            argmax_n: None,
            report: CriterionReport::new(
                ID,
                Verdict::Violated,
                Some(base),
                format!(
                    "a = {} > 1 and b = {} > 1: every infimum grows without bound in n",
                    format_rational(&a),
                    format_rational(&b)
                ),
            ),
        });
    }

    let mut best: Option<(Rational, i64)> = None;
    let mut exact = true;
    let mut n = 1;
    let mut from_limit = false;
    if m < one {
        loop {
            let v = inf_at(sys, &a, &b, n)?;
            if best.as_ref().is_none_or(|(s, _)| v > *s) {
                best = Some((v, n));
            }
            if powi(&m, n + 1) <= best.as_ref().unwrap().0 {
                break;
            }
            if n >= n_max {
                exact = false;
                break;
            }
            n += 1;
        }
    } else {
        let last = (width + 2).min(n_max);
        exact = last == width + 2;
        for n in 1..=last {
            let v = inf_at(sys, &a, &b, n)?;
            if best.as_ref().is_none_or(|(s, _)| v > *s) {
                best = Some((v, n));
            }
        }
        // n-independent terms surviving as n → ∞.
        let mu_lo = sys.mu_w(k_min)?;
        let mu_hi = sys.mu_w(k_max)?;
        let mut lim = one.clone();
        let straddle = &mu_lo / &mu_hi * a.clone().max(b.clone());
        lim = lim.min(straddle);
        for k in k_min..=k_max {
            if b == one {
                lim = lim.min(sys.mu_w(k)? / &mu_hi);
            }
            if a == one {
                lim = lim.min(&mu_lo / sys.mu_w(k)?);
            }
        }
        if exact && lim > best.as_ref().unwrap().0 {
            best = Some((lim, 0));
            from_limit = true;
        }
    }
    let (value, arg) = best.expect("at least one length evaluated");
    let holds = value <= one;
    let mut witness = base.rational("value_p", &value).boolean("exact", exact);
    if from_limit {
        witness = witness.text("attained", "limit n → ∞");
    } else {
        witness = witness.integer("argmax_n", arg);
    }
    let verdict = if holds { Verdict::Satisfied } else { Verdict::Violated };
    Ok(ConditionMix {
        value: Some(value.clone()),
        exact,
        argmax_n: (!from_limit).then_some(arg as u64),
        report: CriterionReport::new(
            ID,
            verdict,
            Some(witness),
            format!("sup_n inf_k ratio^p = {}", format_rational(&value)),
        ),
    })
}
