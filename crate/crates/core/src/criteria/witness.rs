use std::collections::BTreeMap;

use num::traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::measure::MeasureSystem;
use crate::rational::{self, Rational};
use crate::step::{apply_tf_power, lp_norm_step, StepFunction};

/// A linear functional on step-function coefficients:
/// `φ ↦ Σ c_{k,i} a_{k,i}`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CoefficientFunctional {
    weights: BTreeMap<(i64, usize), Rational>,
}

impl CoefficientFunctional {
    pub fn new(entries: impl IntoIterator<Item = ((i64, usize), Rational)>) -> Self {
        let mut weights = BTreeMap::new();
        for (key, c) in entries {
            let slot: &mut Rational = weights.entry(key).or_insert_with(Rational::zero);
            *slot += c;
        }
        weights.retain(|_, c: &mut Rational| !c.is_zero());
        CoefficientFunctional { weights }
    }

    pub fn eval(&self, phi: &StepFunction) -> Rational {
        self.weights
            .iter()
            .map(|(&(k, i), c)| c * phi.get(k, i))
            .fold(Rational::zero(), |acc, x| acc + x)
    }

    /// Value on `χ_{f^k W}`.
    fn on_level(&self, k: i64) -> Rational {
        self.weights
            .range((k, 0)..=(k, usize::MAX))
            .fold(Rational::zero(), |acc, (_, c)| acc + c)
    }
}

/// A nonzero `φ` in the common kernel of the functionals with
/// `‖T_f^n φ‖_p^p ≤ bound · ‖φ‖_p^p`.
#[derive(Clone, Debug)]
pub struct QuotientWitness {
    pub phi: StepFunction,
    pub levels: Vec<i64>,
    pub coefficients: Vec<Rational>,
    /// `max_j μ(f^{k_j-n}W)/μ(f^{k_j}W)` over the levels carrying a nonzero
    /// coefficient; at most one by admissibility.
    pub bound: Rational,
    /// `‖T_f^n φ‖_p^p / ‖φ‖_p^p`, exact for integer `p`.
    pub quotient_pow: Option<Rational>,
    pub quotient: f64,
}

/// Builds `φ = Σ_j a_j χ_{f^{k_j}W}` over `m + 1` admissible levels
/// (`μ(f^{k-n}W) ≤ μ(f^k W)`), with `a` a nonzero solution of the `m`
/// homogeneous constraints.
///
/// Levels are taken in increasing order from the bottom of the scan range:
/// `[k_min - m - 1, k_max + n + m + 1]` with tails, `[k_min + n, k_max]`
/// without.
pub fn cofinite_quotient_witness(
    sys: &MeasureSystem,
    n: u64,
    functionals: &[CoefficientFunctional],
) -> Result<QuotientWitness> {
    let m = functionals.len();
    let n = n as i64;
    let (k_min, k_max) = sys.window();
    let (lo, hi) = if sys.tails().is_some() {
        (k_min - m as i64 - 1, k_max + n + m as i64 + 1)
    } else {
        (k_min + n, k_max)
    };
    let one = Rational::one();
    let mut levels = Vec::with_capacity(m + 1);
    let mut ratios = Vec::with_capacity(m + 1);
    for k in lo..=hi {
        let q = sys.mu_w(k - n)? / sys.mu_w(k)?;
        if q <= one {
            levels.push(k);
            ratios.push(q);
            if levels.len() == m + 1 {
                break;
            }
        }
    }
    if levels.len() < m + 1 {
        return Err(Error::NoAdmissibleLevels {
            needed: m + 1,
            found: levels.len(),
        });
    }

    let matrix: Vec<Vec<Rational>> = functionals
        .iter()
        .map(|f| levels.iter().map(|&k| f.on_level(k)).collect())
        .collect();
    let coefficients = null_vector(matrix, m + 1);
    assert!(coefficients.iter().any(|a| !a.is_zero()), "m equations in m + 1 unknowns");

    let entries = levels
        .iter()
        .zip(&coefficients)
        .flat_map(|(&k, a)| (0..sys.cell_count()).map(move |i| ((k, i), a.clone())));
    let phi = StepFunction::new(sys, entries)?;
    assert!(!phi.is_zero());
    for f in functionals {
        assert!(f.eval(&phi).is_zero(), "witness must lie in the subspace");
    }

    let bound = levels
        .iter()
        .zip(&coefficients)
        .zip(&ratios)
        .filter(|((_, a), _)| !a.is_zero())
        .map(|(_, q)| q.clone())
        .max()
        .expect("some coefficient is nonzero");

    let moved = lp_norm_step(sys, &apply_tf_power(&phi, n))?;
    let base = lp_norm_step(sys, &phi)?;
    let quotient_pow = match (&moved.pth_power, &base.pth_power) {
        (Some(t), Some(b)) => Some(t / b),
        _ => None,
    };
    let quotient = match &quotient_pow {
        Some(q) => rational::to_f64(q),
        None => (moved.value / base.value).powf(sys.p().as_f64()),
    };
    Ok(QuotientWitness {
        phi,
        levels,
        coefficients,
        bound,
        quotient_pow,
        quotient,
    })
}

/// Nonzero kernel vector of a `rows × cols` matrix with `rows < cols`: the
/// first free column is set to 1, the other free columns to 0.
fn null_vector(mut a: Vec<Vec<Rational>>, cols: usize) -> Vec<Rational> {
    let mut pivots: Vec<usize> = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(r) = (row..a.len()).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(row, r);
        let inv = a[row][col].recip();
        for x in a[row].iter_mut() {
            *x *= &inv;
        }
        for r in 0..a.len() {
            if r != row && !a[r][col].is_zero() {
                let factor = a[r][col].clone();
                let pivot_row = a[row].clone();
                for (x, y) in a[r].iter_mut().zip(&pivot_row) {
                    *x -= &factor * y;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == a.len() {
            break;
        }
    }
    let free = (0..cols).find(|c| !pivots.contains(c)).expect("more columns than pivots");
    let mut x = vec![Rational::zero(); cols];
    x[free] = Rational::one();
    for (r, &pc) in pivots.iter().enumerate() {
        x[pc] = -a[r][free].clone();
    }
    debug_assert!(x.iter().any(|v| v.abs() > Rational::zero()));
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::Tails;
    use crate::rational::{int, powi, rat, Exponent};

    fn dyadic() -> MeasureSystem {
        MeasureSystem::single_cell(
            Exponent::one(),
            -20,
            20,
            |k| powi(&rat(1, 2), k.abs()),
            Some(Tails::symmetric(rat(1, 2))),
        )
        .unwrap()
    }

    #[test]
    fn single_level_witness() {
        let w = cofinite_quotient_witness(&dyadic(), 1, &[]).unwrap();
        assert_eq!(w.levels.len(), 1);
        assert!(w.levels[0] <= -1);
        assert_eq!(w.quotient_pow, Some(rat(1, 2)));
        assert_eq!(w.bound, rat(1, 2));
    }

    #[test]
    fn sum_zero_functional() {
        let sys = dyadic();
        let (a, b) = (-22, -21);
        let f = CoefficientFunctional::new([((a, 0), int(1)), ((b, 0), int(1))]);
        let w = cofinite_quotient_witness(&sys, 1, std::slice::from_ref(&f)).unwrap();
        assert_eq!(w.levels, vec![a, b]);
        assert_eq!(f.eval(&w.phi), int(0));
        assert_eq!(w.coefficients, vec![int(-1), int(1)]);
        assert!(w.quotient_pow.unwrap() <= int(1));
    }

    #[test]
    fn constant_system_quotient_is_one() {
        let sys = MeasureSystem::single_cell(Exponent::integer(2), -3, 3, |_| int(1), Some(Tails::symmetric(int(1)))).unwrap();
        for m in 0..3usize {
            let fs: Vec<_> = (0..m)
                .map(|r| CoefficientFunctional::new((0..6).map(|j| ((j - 6, 0), int((r as i64 + 2) * j + 1)))))
                .collect();
            let w = cofinite_quotient_witness(&sys, 3, &fs).unwrap();
            assert_eq!(w.quotient_pow, Some(int(1)));
        }
    }

    #[test]
    fn growing_system_has_no_admissible_levels() {
        // μ(f^k W) = 2^{-k}: every shift down doubles the mass.
        let sys = MeasureSystem::single_cell(Exponent::one(), -2, 2, |k| powi(&rat(1, 2), k), Some(Tails::new(int(2), rat(1, 2)))).unwrap();
        let err = cofinite_quotient_witness(&sys, 1, &[]).unwrap_err();
        assert!(matches!(err, Error::NoAdmissibleLevels { needed: 1, found: 0 }));
    }

    #[test]
    fn null_vector_solves_system() {
        let a = vec![vec![int(1), int(2), int(3)], vec![int(2), int(4), int(7)]];
        let x = null_vector(a.clone(), 3);
        for row in &a {
            let s: Rational = row.iter().zip(&x).map(|(p, q)| p * q).sum();
            assert_eq!(s, int(0));
        }
        assert!(x.iter().any(|v| !v.is_zero()));
    }
}
