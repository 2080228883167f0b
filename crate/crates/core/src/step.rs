//! Step functions on the cell model and the composition operator.
//!
//! A step function is constant on whole cells `f^k(B_i)`:
//! `φ = Σ a_{k,i} χ_{f^k(B_i)}`. Since `χ_{f^k(B_i)} ∘ f = χ_{f^{k-1}(B_i)}`,
//! the composition operator `T_f φ = φ ∘ f` moves every coefficient one level
//! down and `T_f^{-1}` moves it one level up.

use std::collections::BTreeMap;
use std::fmt::Debug;
use std::ops::{Add, Mul};

use num::complex::Complex64;
use num::traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::measure::MeasureSystem;
use crate::rational::{self, Exponent, Rational};

/// Scalars a step function may carry: exact rationals or complex floats.
pub trait Coefficient: Clone + Debug + PartialEq + Zero + Add<Output = Self> + Mul<Output = Self> {
    fn modulus(&self) -> f64;

    /// `|a|^p` exactly, when the scalar type and exponent allow it.
    fn exact_abs_pow(&self, p: &Exponent) -> Option<Rational>;
}

impl Coefficient for Rational {
    fn modulus(&self) -> f64 {
        rational::to_f64(&self.abs())
    }

    fn exact_abs_pow(&self, p: &Exponent) -> Option<Rational> {
        p.abs_pow(self)
    }
}

impl Coefficient for Complex64 {
    fn modulus(&self) -> f64 {
        self.norm()
    }

    fn exact_abs_pow(&self, _: &Exponent) -> Option<Rational> {
        None
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StepFunction<T: Coefficient = Rational> {
    cells: usize,
    entries: BTreeMap<(i64, usize), T>,
}

impl<T: Coefficient> StepFunction<T> {
    pub fn zero(sys: &MeasureSystem) -> Self {
        StepFunction {
            cells: sys.cell_count(),
            entries: BTreeMap::new(),
        }
    }

    /// Builds `Σ a_{k,i} χ_{f^k(B_i)}`; repeated keys are summed and zero
    /// coefficients dropped.
    pub fn new(sys: &MeasureSystem, entries: impl IntoIterator<Item = ((i64, usize), T)>) -> Result<Self> {
        let mut out = StepFunction::zero(sys);
        for ((k, cell), a) in entries {
            if cell >= out.cells {
                return Err(Error::InvalidCell { k, cell });
            }
            let slot = out.entries.entry((k, cell)).or_insert_with(T::zero);
            *slot = slot.clone() + a;
        }
        out.entries.retain(|_, a| !a.is_zero());
        Ok(out)
    }

    /// `a · χ_{f^k(W)}`, the same coefficient on every cell of level `k`.
    pub fn level_indicator(sys: &MeasureSystem, k: i64, a: T) -> Self {
        StepFunction::new(sys, (0..sys.cell_count()).map(|i| ((k, i), a.clone())))
            .expect("cells in range")
    }

    pub fn cell_count(&self) -> usize {
        self.cells
    }

    pub fn get(&self, k: i64, cell: usize) -> T {
        self.entries.get(&(k, cell)).cloned().unwrap_or_else(T::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = ((i64, usize), &T)> + '_ {
        self.entries.iter().map(|(&key, a)| (key, a))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Distinct levels carrying a nonzero coefficient, ascending.
    pub fn levels(&self) -> Vec<i64> {
        let mut ks: Vec<i64> = self.entries.keys().map(|&(k, _)| k).collect();
        ks.dedup();
        ks
    }

    pub fn scale(&self, a: &T) -> Self {
        let mut out = self.clone();
        for v in out.entries.values_mut() {
            *v = v.clone() * a.clone();
        }
        out.entries.retain(|_, v| !v.is_zero());
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&key, a) in &other.entries {
            let slot = out.entries.entry(key).or_insert_with(T::zero);
            *slot = slot.clone() + a.clone();
        }
        out.entries.retain(|_, v| !v.is_zero());
        out
    }

    fn shifted(&self, by: i64) -> Self {
        StepFunction {
            cells: self.cells,
            entries: self
                .entries
                .iter()
                .map(|(&(k, i), a)| ((k + by, i), a.clone()))
                .collect(),
        }
    }
}

/// `T_f φ = φ ∘ f`: `a'_{k,i} = a_{k+1,i}`.
pub fn apply_tf<T: Coefficient>(phi: &StepFunction<T>) -> StepFunction<T> {
    phi.shifted(-1)
}

/// `T_f^{-1} φ = φ ∘ f^{-1}`: `a'_{k,i} = a_{k-1,i}`.
pub fn apply_tf_inverse<T: Coefficient>(phi: &StepFunction<T>) -> StepFunction<T> {
    phi.shifted(1)
}

/// `T_f^n` for any `n ∈ ℤ` (negative powers use the inverse).
pub fn apply_tf_power<T: Coefficient>(phi: &StepFunction<T>, n: i64) -> StepFunction<T> {
    phi.shifted(-n)
}

/// An `L^p` norm: exact p-th power when available, float value always.
#[derive(Clone, Debug, PartialEq)]
pub struct Norm {
    pub pth_power: Option<Rational>,
    pub value: f64,
}

/// `‖φ‖_p^p = Σ |a_{k,i}|^p μ(f^k(B_i))`.
pub fn lp_norm_step<T: Coefficient>(sys: &MeasureSystem, phi: &StepFunction<T>) -> Result<Norm> {
    let p = sys.p();
    let mut exact = Some(Rational::zero());
    let mut float_pow = 0.0;
    for ((k, i), a) in phi.iter() {
        let m = sys.mu(k, i)?;
        exact = match (exact, a.exact_abs_pow(p)) {
            (Some(acc), Some(ap)) => Some(acc + ap * &m),
            _ => None,
        };
        float_pow += a.modulus().powf(p.as_f64()) * rational::to_f64(&m);
    }
    let value = match &exact {
        Some(q) => p.root_f64(q),
        None => float_pow.powf(1.0 / p.as_f64()),
    };
    Ok(Norm {
        pth_power: exact,
        value,
    })
}

/// Norms of `T_f^{n_k} φ` and `T_{f^{-1}}^{n_k} φ` along a schedule.
#[derive(Clone, Debug)]
pub struct DecayReport {
    pub schedule: Vec<u64>,
    pub forward: Vec<Norm>,
    pub backward: Vec<Norm>,
    /// Both norm sequences are non-increasing along the schedule.
    pub monotone: bool,
}

impl DecayReport {
    /// Largest of the two norms at the last schedule point.
    pub fn final_norm(&self) -> f64 {
        let f = self.forward.last().map_or(0.0, |n| n.value);
        let b = self.backward.last().map_or(0.0, |n| n.value);
        f.max(b)
    }
}

/// The Gethner–Shapiro decay conditions on one step function:
/// `‖T_f^{n_k} φ‖_p^p = Σ |a_{k,i}|^p μ(f^{k-n_k}(B_i))` and symmetrically for
/// the inverse.
pub fn gs_decay_check<T: Coefficient>(
    sys: &MeasureSystem,
    phi: &StepFunction<T>,
    schedule: &[u64],
) -> Result<DecayReport> {
    if schedule.is_empty() || schedule.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidSchedule);
    }
    let mut forward = Vec::with_capacity(schedule.len());
    let mut backward = Vec::with_capacity(schedule.len());
    for &n in schedule {
        let n = n as i64;
        forward.push(lp_norm_step(sys, &apply_tf_power(phi, n))?);
        backward.push(lp_norm_step(sys, &apply_tf_power(phi, -n))?);
    }
    let non_increasing = |v: &[Norm]| {
        v.windows(2).all(|w| match (&w[0].pth_power, &w[1].pth_power) {
            (Some(a), Some(b)) => b <= a,
            _ => w[1].value <= w[0].value,
        })
    };
    let monotone = non_increasing(&forward) && non_increasing(&backward);
    Ok(DecayReport {
        schedule: schedule.to_vec(),
        forward,
        backward,
        monotone,
    })
}
