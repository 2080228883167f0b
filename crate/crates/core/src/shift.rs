//! `ℓ^p` sequences and weighted backward shifts.
//!
//! Weights are stored as exact p-th powers `wp(k) = w_k^p`. A weight sequence
//! is an explicit block of values plus optional periodic tail rules on each
//! side, which covers both the shifts derived from a [`MeasureSystem`] and
//! hand-built unilateral examples.
//!
//! Two vector types act under the shift. [`SeqVector`] holds complex floats.
//! [`RadicalVector`] holds exact entries `c · r^(1/p)` with rational `c` and
//! `r`; the weights multiply radicands, so identities such as `B_w S = I`
//! hold exactly without extracting roots.

use std::collections::BTreeMap;
use std::ops::RangeInclusive;

use num::complex::Complex64;
use num::traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::MeasureSystem;
use crate::rational::{self, format_rational, powi, Exponent, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// Indexed by `ℤ`.
    Bilateral,
    /// Indexed by `ℕ = {1, 2, ...}`.
    Unilateral,
}

impl Side {
    pub fn admits(self, n: i64) -> bool {
        match self {
            Side::Bilateral => true,
            Side::Unilateral => n >= 1,
        }
    }
}

// ---------------------------------------------------------------------------
// Float vectors

/// Finitely supported complex sequence. Zero coordinates are never stored.
#[derive(Clone, Debug, PartialEq)]
pub struct SeqVector {
    side: Side,
    coeff: BTreeMap<i64, Complex64>,
}

impl SeqVector {
    pub fn zero(side: Side) -> Self {
        SeqVector {
            side,
            coeff: BTreeMap::new(),
        }
    }

    /// Unit vector `e_n`.
    pub fn basis(side: Side, n: i64) -> Result<Self> {
        SeqVector::from_entries(side, [(n, Complex64::new(1.0, 0.0))])
    }

    pub fn from_entries(side: Side, entries: impl IntoIterator<Item = (i64, Complex64)>) -> Result<Self> {
        let mut v = SeqVector::zero(side);
        for (n, z) in entries {
            if !side.admits(n) {
                return Err(Error::UnilateralIndex(n));
            }
            *v.coeff.entry(n).or_default() += z;
        }
        v.coeff.retain(|_, z| *z != Complex64::zero());
        Ok(v)
    }

    pub fn from_real(side: Side, entries: impl IntoIterator<Item = (i64, f64)>) -> Result<Self> {
        SeqVector::from_entries(side, entries.into_iter().map(|(n, x)| (n, Complex64::new(x, 0.0))))
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn get(&self, n: i64) -> Complex64 {
        self.coeff.get(&n).copied().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.coeff.iter().map(|(&n, &z)| (n, z))
    }

    pub fn support(&self) -> impl Iterator<Item = i64> + '_ {
        self.coeff.keys().copied()
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_empty()
    }

    pub fn len(&self) -> usize {
        self.coeff.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeff.is_empty()
    }

    pub fn scale(&self, a: Complex64) -> SeqVector {
        let mut out = self.clone();
        out.coeff.values_mut().for_each(|z| *z *= a);
        out.coeff.retain(|_, z| *z != Complex64::zero());
        out
    }

    pub fn add(&self, other: &SeqVector) -> Result<SeqVector> {
        if self.side != other.side {
            return Err(Error::SideMismatch);
        }
        let mut out = self.clone();
        for (n, z) in other.iter() {
            *out.coeff.entry(n).or_default() += z;
        }
        out.coeff.retain(|_, z| *z != Complex64::zero());
        Ok(out)
    }

    pub fn sub(&self, other: &SeqVector) -> Result<SeqVector> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn to_doc(&self) -> SeqVectorDoc {
        SeqVectorDoc {
            side: self.side,
            entries: self
                .iter()
                .map(|(n, z)| EntryDoc {
                    n,
                    re: z.re,
                    im: z.im,
                })
                .collect(),
        }
    }

    pub fn from_doc(doc: &SeqVectorDoc) -> Result<Self> {
        SeqVector::from_entries(
            doc.side,
            doc.entries.iter().map(|e| (e.n, Complex64::new(e.re, e.im))),
        )
    }
}

/// `(Σ |x_n|^p)^(1/p)`.
pub fn lp_norm_seq(x: &SeqVector, p: &Exponent) -> f64 {
    let pf = p.as_f64();
    if pf == 1.0 {
        return x.iter().map(|(_, z)| z.norm()).sum();
    }
    let s: f64 = x.iter().map(|(_, z)| z.norm().powf(pf)).sum();
    s.powf(1.0 / pf)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeqVectorDoc {
    pub side: Side,
    pub entries: Vec<EntryDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntryDoc {
    pub n: i64,
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

// ---------------------------------------------------------------------------
// Exact vectors

/// The real number `coeff · radicand^(1/p)`, `radicand > 0`.
#[derive(Clone, Debug)]
pub struct Radical {
    pub coeff: Rational,
    pub radicand: Rational,
}

impl Radical {
    pub fn rational(q: Rational) -> Self {
        Radical {
            coeff: q,
            radicand: Rational::one(),
        }
    }

    pub fn new(coeff: Rational, radicand: Rational) -> Self {
        debug_assert!(radicand.is_positive());
        Radical { coeff, radicand }
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    /// Exact equality for exponent `p = a/b`: `c1 r1^(b/a) = c2 r2^(b/a)` iff
    /// the signs agree and `|c1|^a r1^b = |c2|^a r2^b`.
    pub fn exact_eq(&self, other: &Radical, p: &Exponent) -> bool {
        if self.coeff.is_zero() || other.coeff.is_zero() {
            return self.coeff.is_zero() && other.coeff.is_zero();
        }
        if self.coeff.is_positive() != other.coeff.is_positive() {
            return false;
        }
        if self.coeff == other.coeff && self.radicand == other.radicand {
            return true;
        }
        let a = p.numer() as i64;
        let b = p.denom() as i64;
        powi(&self.coeff.abs(), a) * powi(&self.radicand, b)
            == powi(&other.coeff.abs(), a) * powi(&other.radicand, b)
    }

    /// `|x|^p = |c|^p · r`, exact for integer `p`.
    pub fn abs_pow(&self, p: &Exponent) -> Option<Rational> {
        p.abs_pow(&self.coeff).map(|c| c * &self.radicand)
    }

    pub fn to_f64(&self, p: &Exponent) -> f64 {
        rational::to_f64(&self.coeff) * p.root_f64(&self.radicand)
    }

    /// Multiplies by `wp^(1/p)`.
    fn times_root(&self, wp: &Rational) -> Radical {
        Radical {
            coeff: self.coeff.clone(),
            radicand: &self.radicand * wp,
        }
    }
}

/// Finitely supported real sequence with exact radical entries.
#[derive(Clone, Debug)]
pub struct RadicalVector {
    side: Side,
    p: Exponent,
    coeff: BTreeMap<i64, Radical>,
}

impl RadicalVector {
    pub fn zero(side: Side, p: Exponent) -> Self {
        RadicalVector {
            side,
            p,
            coeff: BTreeMap::new(),
        }
    }

    pub fn from_entries(
        side: Side,
        p: Exponent,
        entries: impl IntoIterator<Item = (i64, Radical)>,
    ) -> Result<Self> {
        let mut v = RadicalVector::zero(side, p);
        for (n, r) in entries {
            v.insert(n, r)?;
        }
        Ok(v)
    }

    pub fn from_rationals(
        side: Side,
        p: Exponent,
        entries: impl IntoIterator<Item = (i64, Rational)>,
    ) -> Result<Self> {
        RadicalVector::from_entries(side, p, entries.into_iter().map(|(n, q)| (n, Radical::rational(q))))
    }

    /// Sets coordinate `n`; zero entries are dropped.
    pub fn insert(&mut self, n: i64, r: Radical) -> Result<()> {
        if !self.side.admits(n) {
            return Err(Error::UnilateralIndex(n));
        }
        if r.is_zero() {
            self.coeff.remove(&n);
        } else {
            self.coeff.insert(n, r);
        }
        Ok(())
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn p(&self) -> &Exponent {
        &self.p
    }

    pub fn get(&self, n: i64) -> Option<&Radical> {
        self.coeff.get(&n)
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &Radical)> + '_ {
        self.coeff.iter().map(|(&n, r)| (n, r))
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_empty()
    }

    /// Coordinatewise exact equality.
    pub fn exact_eq(&self, other: &RadicalVector) -> bool {
        self.side == other.side
            && self.p == other.p
            && self.coeff.len() == other.coeff.len()
            && self
                .coeff
                .iter()
                .zip(&other.coeff)
                .all(|((n, a), (m, b))| n == m && a.exact_eq(b, &self.p))
    }

    pub fn to_float(&self) -> SeqVector {
        let entries = self
            .iter()
            .map(|(n, r)| (n, Complex64::new(r.to_f64(&self.p), 0.0)));
        SeqVector::from_entries(self.side, entries).expect("indices already admitted")
    }

    /// Exact `‖x‖_p^p` for integer `p`.
    pub fn norm_pow(&self) -> Option<Rational> {
        self.iter().map(|(_, r)| r.abs_pow(&self.p)).sum()
    }

    pub fn norm(&self) -> f64 {
        lp_norm_seq(&self.to_float(), &self.p)
    }
}

// ---------------------------------------------------------------------------
// Weights

/// Periodic continuation of p-th-power weights beyond the explicit block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TailPattern {
    values: Vec<Rational>,
}

impl TailPattern {
    pub fn new(values: Vec<Rational>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyPattern);
        }
        Ok(TailPattern { values })
    }

    pub fn constant(v: Rational) -> Self {
        TailPattern { values: vec![v] }
    }

    pub fn period(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    /// Product of one full period.
    pub fn period_product(&self) -> Rational {
        self.values.iter().product()
    }
}

/// Weights `w_k` stored as exact p-th powers.
///
/// Explicit values cover `start..start + explicit.len()`. The right pattern
/// continues at `start + len` with phase 0; the left pattern continues at
/// `start - 1` with phase 0, moving leftwards.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightSequence {
    p: Exponent,
    side: Side,
    start: i64,
    explicit: Vec<Rational>,
    left: Option<TailPattern>,
    right: Option<TailPattern>,
    explicit_f64: Vec<f64>,
    left_f64: Vec<f64>,
    right_f64: Vec<f64>,
}

impl WeightSequence {
    pub fn new(
        p: Exponent,
        side: Side,
        start: i64,
        explicit: Vec<Rational>,
        left: Option<TailPattern>,
        right: Option<TailPattern>,
    ) -> Result<Self> {
        let (start, left) = match side {
            Side::Bilateral => (start, left),
            Side::Unilateral => {
                if start < 1 {
                    return Err(Error::UnilateralIndex(start));
                }
                // Indices below 1 do not exist; a left rule fills the gap
                // between 1 and `start` only.
                if start > 1 && left.is_none() {
                    return Err(Error::WeightUndefined(1));
                }
                (start, left)
            }
        };
        for (o, q) in explicit.iter().enumerate() {
            if !q.is_positive() {
                return Err(Error::NonPositiveWeight(start + o as i64));
            }
        }
        for pat in left.iter().chain(right.iter()) {
            if let Some(i) = pat.values.iter().position(|q| !q.is_positive()) {
                let k = if Some(pat) == right.as_ref() {
                    start + explicit.len() as i64 + i as i64
                } else {
                    start - 1 - i as i64
                };
                return Err(Error::NonPositiveWeight(k));
            }
        }
        let root = |v: &[Rational]| v.iter().map(|q| p.root_f64(q)).collect::<Vec<_>>();
        Ok(WeightSequence {
            explicit_f64: root(&explicit),
            left_f64: left.as_ref().map(|t| root(&t.values)).unwrap_or_default(),
            right_f64: right.as_ref().map(|t| root(&t.values)).unwrap_or_default(),
            p,
            side,
            start,
            explicit,
            left,
            right,
        })
    }

    /// `w_k^p = wp` for every admissible `k`.
    pub fn constant(p: Exponent, side: Side, wp: Rational) -> Result<Self> {
        let start = if side == Side::Unilateral { 1 } else { 0 };
        WeightSequence::new(
            p,
            side,
            start,
            vec![],
            Some(TailPattern::constant(wp.clone())),
            Some(TailPattern::constant(wp)),
        )
    }

    /// Unilateral weights repeating `pattern` from index 1.
    pub fn periodic_unilateral(p: Exponent, pattern: Vec<Rational>) -> Result<Self> {
        WeightSequence::new(p, Side::Unilateral, 1, vec![], None, Some(TailPattern::new(pattern)?))
    }

    pub fn p(&self) -> &Exponent {
        &self.p
    }

    pub fn side(&self) -> Side {
        self.side
    }

    /// Range of explicitly stored indices (possibly empty).
    pub fn explicit_range(&self) -> RangeInclusive<i64> {
        self.start..=self.start + self.explicit.len() as i64 - 1
    }

    pub fn explicit_values(&self) -> &[Rational] {
        &self.explicit
    }

    pub fn left_tail(&self) -> Option<&TailPattern> {
        self.left.as_ref()
    }

    pub fn right_tail(&self) -> Option<&TailPattern> {
        self.right.as_ref()
    }

    fn end(&self) -> i64 {
        self.start + self.explicit.len() as i64
    }

    fn locate(&self, k: i64) -> Result<(Slot, usize)> {
        if !self.side.admits(k) {
            return Err(Error::UnilateralIndex(k));
        }
        if k >= self.start && k < self.end() {
            return Ok((Slot::Explicit, (k - self.start) as usize));
        }
        if k >= self.end() {
            let t = self.right.as_ref().ok_or(Error::WeightUndefined(k))?;
            return Ok((Slot::Right, ((k - self.end()) as u64 % t.period() as u64) as usize));
        }
        let t = self.left.as_ref().ok_or(Error::WeightUndefined(k))?;
        Ok((Slot::Left, ((self.start - 1 - k) as u64 % t.period() as u64) as usize))
    }

    /// Exact `w_k^p`.
    pub fn wp(&self, k: i64) -> Result<&Rational> {
        let (slot, i) = self.locate(k)?;
        Ok(match slot {
            Slot::Explicit => &self.explicit[i],
            Slot::Left => &self.left.as_ref().unwrap().values[i],
            Slot::Right => &self.right.as_ref().unwrap().values[i],
        })
    }

    /// `w_k` as a float.
    pub fn w(&self, k: i64) -> Result<f64> {
        let (slot, i) = self.locate(k)?;
        Ok(match slot {
            Slot::Explicit => self.explicit_f64[i],
            Slot::Left => self.left_f64[i],
            Slot::Right => self.right_f64[i],
        })
    }

    /// Largest weight, a bound on `‖B_w‖`.
    pub fn sup_weight(&self) -> f64 {
        self.explicit_f64
            .iter()
            .chain(&self.left_f64)
            .chain(&self.right_f64)
            .fold(0.0, |m, &w| m.max(w))
    }

    /// `∏_{h=from}^{to} w_h^p` exactly, with the float `∏ w_h`. An empty range
    /// (`from > to`) gives 1.
    pub fn weight_product(&self, from: i64, to: i64) -> Result<(Rational, f64)> {
        let mut exact = Rational::one();
        for h in from..=to {
            exact *= self.wp(h)?;
        }
        let value = self.p.root_f64(&exact);
        Ok((exact, value))
    }

    /// Float `∏_{h=from}^{to} w_h`, accumulated in log space for long ranges.
    pub fn weight_product_f64(&self, from: i64, to: i64) -> Result<f64> {
        let mut log = 0.0;
        for h in from..=to {
            log += self.w(h)?.ln();
        }
        Ok(log.exp())
    }

    fn check_side(&self, side: Side) -> Result<()> {
        if side == self.side {
            Ok(())
        } else {
            Err(Error::SideMismatch)
        }
    }

    /// `(B_w x)_n = w_{n+1} x_{n+1}`. On `ℕ` the first coordinate is dropped.
    pub fn apply_backward(&self, x: &SeqVector) -> Result<SeqVector> {
        self.check_side(x.side())?;
        let mut out = Vec::with_capacity(x.len());
        for (n, z) in x.iter() {
            let m = n - 1;
            if self.side.admits(m) {
                out.push((m, z * self.w(n)?));
            }
        }
        SeqVector::from_entries(self.side, out)
    }

    /// Right inverse `S` with `(S x)_n = x_{n-1} / w_n`.
    pub fn apply_forward_inverse(&self, x: &SeqVector) -> Result<SeqVector> {
        self.check_side(x.side())?;
        let mut out = Vec::with_capacity(x.len());
        for (n, z) in x.iter() {
            out.push((n + 1, z / self.w(n + 1)?));
        }
        SeqVector::from_entries(self.side, out)
    }

    /// `B_w^d x` via the product form `(B^d x)_n = (∏_{h=n+1}^{n+d} w_h) x_{n+d}`.
    pub fn backward_power(&self, x: &SeqVector, d: u64) -> Result<SeqVector> {
        self.check_side(x.side())?;
        let d = d as i64;
        let mut out = Vec::with_capacity(x.len());
        for (n, z) in x.iter() {
            let m = n - d;
            if self.side.admits(m) {
                out.push((m, z * self.weight_product_f64(m + 1, n)?));
            }
        }
        SeqVector::from_entries(self.side, out)
    }

    /// `S^d x` via `(S^d x)_n = x_{n-d} / ∏_{h=n-d+1}^{n} w_h`.
    pub fn forward_inverse_power(&self, x: &SeqVector, d: u64) -> Result<SeqVector> {
        self.check_side(x.side())?;
        let d = d as i64;
        let mut out = Vec::with_capacity(x.len());
        for (n, z) in x.iter() {
            out.push((n + d, z / self.weight_product_f64(n + 1, n + d)?));
        }
        SeqVector::from_entries(self.side, out)
    }

    /// Exact `B_w` on radical vectors.
    pub fn apply_backward_exact(&self, x: &RadicalVector) -> Result<RadicalVector> {
        self.check_exact(x)?;
        let mut out = RadicalVector::zero(self.side, self.p.clone());
        for (n, r) in x.iter() {
            if self.side.admits(n - 1) {
                out.insert(n - 1, r.times_root(self.wp(n)?))?;
            }
        }
        Ok(out)
    }

    /// Exact right inverse `S` on radical vectors.
    pub fn apply_forward_inverse_exact(&self, x: &RadicalVector) -> Result<RadicalVector> {
        self.check_exact(x)?;
        let mut out = RadicalVector::zero(self.side, self.p.clone());
        for (n, r) in x.iter() {
            out.insert(n + 1, r.times_root(&self.wp(n + 1)?.recip()))?;
        }
        Ok(out)
    }

    /// Exact `B_w^d` through `weight_product`.
    pub fn backward_power_exact(&self, x: &RadicalVector, d: u64) -> Result<RadicalVector> {
        self.check_exact(x)?;
        let d = d as i64;
        let mut out = RadicalVector::zero(self.side, self.p.clone());
        for (n, r) in x.iter() {
            let m = n - d;
            if self.side.admits(m) {
                let (prod, _) = self.weight_product(m + 1, n)?;
                out.insert(m, r.times_root(&prod))?;
            }
        }
        Ok(out)
    }

    fn check_exact(&self, x: &RadicalVector) -> Result<()> {
        self.check_side(x.side())?;
        if x.p() != &self.p {
            return Err(Error::InvalidArgument(format!(
                "vector exponent {} differs from weight exponent {}",
                x.p(),
                self.p
            )));
        }
        Ok(())
    }

    /// The same weights restricted to `ℕ`, for the unilateral criteria.
    pub fn restrict_to_naturals(&self) -> Result<WeightSequence> {
        if self.side == Side::Unilateral {
            return Ok(self.clone());
        }
        let end = self.end();
        if end <= 1 {
            // Only the right pattern reaches ℕ; re-phase it to start at 1.
            let t = self.right.as_ref().ok_or(Error::WeightUndefined(1))?;
            let shift = (1 - end) as usize % t.period();
            let mut values = t.values.clone();
            values.rotate_left(shift);
            return WeightSequence::new(
                self.p.clone(),
                Side::Unilateral,
                1,
                vec![],
                None,
                Some(TailPattern { values }),
            );
        }
        let from = self.start.max(1);
        let explicit = (from..end).map(|k| self.wp(k).cloned()).collect::<Result<Vec<_>>>()?;
        let left = if from > 1 {
            Some(self.left.clone().ok_or(Error::WeightUndefined(1))?)
        } else {
            None
        };
        WeightSequence::new(
            self.p.clone(),
            Side::Unilateral,
            from,
            explicit,
            left,
            self.right.clone(),
        )
    }

    pub fn to_doc(&self) -> WeightsDoc {
        let explicit = self
            .explicit_range()
            .zip(self.explicit.iter().zip(&self.explicit_f64))
            .map(|(k, (wp, w))| WeightEntryDoc {
                k,
                wp: format_rational(wp),
                w: *w,
            })
            .collect();
        let pat = |t: &Option<TailPattern>| {
            t.as_ref()
                .map(|t| t.values.iter().map(format_rational).collect::<Vec<_>>())
        };
        WeightsDoc {
            p: self.p.clone(),
            side: self.side,
            explicit,
            left_tail: pat(&self.left),
            right_tail: pat(&self.right),
            sup_weight: self.sup_weight(),
        }
    }
}

#[derive(Clone, Copy)]
enum Slot {
    Explicit,
    Left,
    Right,
}

#[derive(Clone, Debug, Serialize)]
pub struct WeightsDoc {
    pub p: Exponent,
    pub side: Side,
    pub explicit: Vec<WeightEntryDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub left_tail: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub right_tail: Option<Vec<String>>,
    pub sup_weight: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct WeightEntryDoc {
    pub k: i64,
    pub wp: String,
    pub w: f64,
}

/// Bilateral weights `w_k^p = μ(f^{k-1}W) / μ(f^k W)` of the shift that is a
/// factor of `T_f`.
///
/// Inside the window the ratios are explicit for `k ∈ (k_min, k_max]`; the
/// tails give the constants `r_left` for `k ≤ k_min` and `1/r_right` for
/// `k > k_max`.
pub fn derive_weights(sys: &MeasureSystem) -> Result<WeightSequence> {
    let (k_min, k_max) = sys.window();
    let explicit = (k_min + 1..=k_max)
        .map(|k| Ok(sys.mu_w(k - 1)? / sys.mu_w(k)?))
        .collect::<Result<Vec<_>>>()?;
    let (left, right) = match sys.tails() {
        Some(t) => (
            Some(TailPattern::constant(t.left.clone())),
            Some(TailPattern::constant(t.right.recip())),
        ),
        None => (None, None),
    };
    WeightSequence::new(sys.p().clone(), Side::Bilateral, k_min + 1, explicit, left, right)
}
