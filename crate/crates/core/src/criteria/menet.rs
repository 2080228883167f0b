use num::traits::One;

use super::{CriterionReport, Verdict, Witness};
use crate::error::Result;
use crate::rational::{format_rational, Rational};
use crate::shift::WeightSequence;

/// Exact data behind a unilateral product report.
#[derive(Clone, Debug, PartialEq)]
pub struct MenetOutcome {
    pub report: CriterionReport,
    /// `sup_{n≥1} inf_{k≥1} ∏_{ν=1}^{n} w_{ν+k}^p` when it was computed exactly.
    pub value: Option<Rational>,
    /// A uniform upper bound on the same quantity certified by the tail.
    pub bound: Option<Rational>,
}

/// Evaluates `sup_{n≥1} inf_{k≥1} ∏_{ν=1}^{n} w_{ν+k}` in `p`-th powers on the
/// weights restricted to `ℕ`.
///
/// Let `E` be the last non-periodic index, `L` the right period and `π` the
/// product over one period. Products starting past `E` depend only on the
/// phase, and for `n ≥ E` the infimum satisfies `inf(n + L) = π · inf(n)`, so
/// starts in `[2, max(E, 1) + L]` and lengths in `[1, E + L]` are exhaustive.
/// `π > 1` makes the products unbounded; otherwise every tail product is at
/// most the largest partial product of length `≤ L` inside one period.
pub fn menet_unilateral(w: &WeightSequence, n_max: u64, k_max: u64) -> Result<MenetOutcome> {
    const ID: &str = "unilateral_sup_inf_products";
    let w = w.restrict_to_naturals()?;
    let Some(tail) = w.right_tail() else {
        return Ok(MenetOutcome {
            report: CriterionReport::new(ID, Verdict::InconclusiveWindow, None, "no tail rule past the explicit weights"),
            value: None,
            bound: None,
        });
    };
    let one = Rational::one();
    let period = tail.period() as i64;
    let pi = tail.period_product();
    let last = (*w.explicit_range().end()).max(0);
    let tail_start = last + 1;

    if pi > one {
        let witness = Witness::new()
            .rational("period_product_p", &pi)
            .integer("period", period)
            .integer("tail_start", tail_start);
        return Ok(MenetOutcome {
            report: CriterionReport::new(
                ID,
                Verdict::Violated,
                Some(witness),
                format!(
                    "every product of length n·L inside the tail is a bounded multiple of {}^n",
                    format_rational(&pi)
                ),
            ),
            value: None,
            bound: None,
        });
    }

    // Uniform bound: largest partial product over phases and lengths ≤ L.
    let mut bound: Option<Rational> = None;
    for phase in 0..period {
        let mut acc = one.clone();
        for len in 0..period {
            acc *= w.wp(tail_start + (phase + len) % period)?;
            bound = Some(bound.map_or(acc.clone(), |b: Rational| b.max(acc.clone())));
        }
    }
    let bound = bound.expect("period is positive");

    let s_hi = last.max(1) + period;
    let n_hi = last + period;
    let (k_needed, n_needed) = ((s_hi - 1) as u64, n_hi as u64);
    let mut witness = Witness::new()
        .rational("bound", &bound)
        .rational("period_product_p", &pi)
        .integer("period", period)
        .integer("tail_start", tail_start);
    if k_needed > k_max || n_needed > n_max {
        witness = witness.integer("k_needed", k_needed as i64).integer("n_needed", n_needed as i64);
        return Ok(MenetOutcome {
            report: CriterionReport::new(
                ID,
                Verdict::InconclusiveWindow,
                Some(witness),
                "exhaustive ranges exceed the enumeration caps",
            ),
            value: None,
            bound: Some(bound),
        });
    }

    // P(s, n) = ∏_{h=s}^{s+n-1} w_h^p, with s = k + 1.
    let mut sup: Option<(Rational, i64)> = None;
    let mut running: Vec<Rational> = vec![one.clone(); (s_hi - 1) as usize];
    for n in 1..=n_hi {
        let mut inf: Option<Rational> = None;
        for (idx, acc) in running.iter_mut().enumerate() {
            let s = idx as i64 + 2;
            *acc *= w.wp(s + n - 1)?;
            inf = Some(inf.map_or(acc.clone(), |m: Rational| m.min(acc.clone())));
        }
        let inf = inf.expect("at least one start");
        if sup.as_ref().is_none_or(|(b, _)| inf > *b) {
            sup = Some((inf, n));
        }
    }
    let (value, argmax) = sup.expect("at least one length");
    let witness = witness.rational("value", &value).integer("argmax_n", argmax);
    Ok(MenetOutcome {
        report: CriterionReport::new(
            ID,
            Verdict::Satisfied,
            Some(witness),
            format!(
                "period product {} ≤ 1 keeps every tail product below {}",
                format_rational(&pi),
                format_rational(&bound)
            ),
        ),
        value: Some(value),
        bound: Some(bound),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat, Exponent};
    use crate::shift::{Side, TailPattern};

    /// Direct sup-inf over the given ranges.
    fn brute(w: &WeightSequence, n_to: i64, k_to: i64) -> Rational {
        (1..=n_to)
            .map(|n| {
                (1..=k_to)
                    .map(|k| w.weight_product(k + 1, k + n).unwrap().0)
                    .min()
                    .unwrap()
            })
            .max()
            .unwrap()
    }

    #[test]
    fn constant_two_is_unbounded() {
        let w = WeightSequence::constant(Exponent::one(), Side::Unilateral, int(2)).unwrap();
        let out = menet_unilateral(&w, 64, 64).unwrap();
        assert_eq!(out.report.verdict, Verdict::Violated);
    }

    #[test]
    fn constant_one_has_bound_one() {
        let w = WeightSequence::constant(Exponent::one(), Side::Unilateral, int(1)).unwrap();
        let out = menet_unilateral(&w, 64, 64).unwrap();
        assert_eq!(out.report.verdict, Verdict::Satisfied);
        assert_eq!(out.bound, Some(int(1)));
        assert_eq!(out.value, Some(int(1)));
    }

    #[test]
    fn alternating_has_bound_two() {
        let w = WeightSequence::periodic_unilateral(Exponent::one(), vec![int(2), rat(1, 2)]).unwrap();
        let out = menet_unilateral(&w, 64, 64).unwrap();
        assert_eq!(out.report.verdict, Verdict::Satisfied);
        assert_eq!(out.bound, Some(int(2)));
        assert_eq!(out.value, Some(int(1)));
        assert_eq!(out.value.unwrap(), brute(&w, 30, 30));
    }

    #[test]
    fn explicit_prefix_matches_brute_force() {
        let w = WeightSequence::new(
            Exponent::integer(2),
            Side::Unilateral,
            1,
            vec![int(5), rat(1, 7), int(3), rat(1, 2)],
            None,
            Some(TailPattern::new(vec![rat(1, 2), int(3), rat(1, 2)]).unwrap()),
        )
        .unwrap();
        let out = menet_unilateral(&w, 64, 64).unwrap();
        assert_eq!(out.value.unwrap(), brute(&w, 40, 40));
    }

    #[test]
    fn caps_give_inconclusive() {
        let w = WeightSequence::periodic_unilateral(Exponent::one(), vec![int(2), rat(1, 2)]).unwrap();
        let out = menet_unilateral(&w, 1, 1).unwrap();
        assert_eq!(out.report.verdict, Verdict::InconclusiveWindow);
    }
}
