use num::traits::One;

use crate::error::{Error, Result};
use crate::measure::MeasureSystem;
use crate::rational::{format_rational, powi, Rational};

/// Both sides of the block lower bound
/// `μ(f^{j-n_k}W)/μ(f^j W) ≥ C_p^{m_k+1} / c^{n+q}`, `n_k = m_k n + q`.
#[derive(Clone, Debug, PartialEq)]
pub struct TelescopingOutcome {
    pub holds: bool,
    pub left: Rational,
    pub right: Rational,
    pub m_k: u64,
    pub q: u64,
    pub c: Rational,
}

/// Requires `μ(f^k W)/μ(f^{k+n} W) > C_p` for `k ∈ [min(j - n_k, j - n), j - n]`.
///
/// Under that hypothesis the `m_k` full blocks contribute more than
/// `C_p^{m_k}`, the `q` remaining steps at least `c^{-q}`, and a single block
/// ratio is at most `c^n`, so the returned inequality always holds.
pub fn telescoping_bound_check(
    sys: &MeasureSystem,
    n: u64,
    c_p: &Rational,
    j: i64,
    n_k: u64,
) -> Result<TelescopingOutcome> {
    if n == 0 || n_k == 0 {
        return Err(Error::InvalidArgument("n and n_k must be positive".into()));
    }
    if *c_p <= Rational::one() {
        return Err(Error::InvalidArgument(format!("C_p = {} must exceed 1", format_rational(c_p))));
    }
    let (m_k, q) = (n_k / n, n_k % n);
    let (ni, nki) = (n as i64, n_k as i64);
    for k in (j - nki).min(j - ni)..=j - ni {
        let ratio = sys.mu_w(k)? / sys.mu_w(k + ni)?;
        if ratio <= *c_p {
            return Err(Error::HypothesisViolated {
                k,
                ratio: format_rational(&ratio),
                threshold: format_rational(c_p),
            });
        }
    }
    let c = sys.star_constant();
    let left = sys.mu_w(j - nki)? / sys.mu_w(j)?;
    let right = powi(c_p, m_k as i64 + 1) / powi(&c, (n + q) as i64);
    Ok(TelescopingOutcome {
        holds: left >= right,
        left,
        right,
        m_k,
        q,
        c,
    })
}
