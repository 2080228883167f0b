//! Approximate hypercyclic vectors for weighted backward shifts and a finite
//! proxy for orbit density.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::shift::{lp_norm_seq, SeqVector, WeightSequence};

/// Relative agreement required between single-step iteration and the product
/// form at schedule points.
const SPOT_CHECK_TOL: f64 = 1e-9;

#[derive(Clone, Debug)]
pub struct HcApprox {
    pub x: SeqVector,
    /// Strictly increasing; `B_w^{schedule[j]} x ≈ targets[j]`.
    pub schedule: Vec<u64>,
    /// `‖B_w^{m_j} x − y_j‖_p` measured by direct iteration.
    pub defects: Vec<f64>,
}

/// `x = Σ_j S^{m_j} y_j` with `m_j` chosen greedily by doubling the gap.
///
/// `B^{m_j} S^{m_j} = I`, so the error at target `j` is the cross terms
/// `B^{m_j - m_i} y_i` (`i < j`) and `S^{m_i - m_j} y_i` (`i > j`). Every term
/// built from `y_i` is held below `eps / 2^{i+2}` (0-based `i`), so each of
/// the two sums stays below `eps / 2`.
pub fn construct_hc_approx(w: &WeightSequence, targets: &[SeqVector], eps: f64, horizon: u64) -> Result<HcApprox> {
    if eps.is_nan() || eps <= 0.0 {
        return Err(Error::InvalidArgument(format!("eps = {eps} must be positive")));
    }
    let side = w.side();
    if targets.iter().all(SeqVector::is_zero) {
        return Ok(HcApprox {
            x: SeqVector::zero(side),
            schedule: vec![0],
            defects: vec![0.0; targets.len()],
        });
    }
    let p = w.p();
    let norm = |v: &SeqVector| lp_norm_seq(v, p);
    let budget = |i: usize| eps / 2f64.powi(i as i32 + 2);

    let mut schedule: Vec<u64> = Vec::with_capacity(targets.len());
    for (j, y_j) in targets.iter().enumerate() {
        let Some(&prev) = schedule.last() else {
            schedule.push(1);
            continue;
        };
        let mut gap = 1u64;
        loop {
            let m_j = prev + gap;
            if m_j > horizon {
                return Err(Error::HorizonExhausted { target: j, horizon });
            }
            let mut ok = true;
            for (i, y_i) in targets[..j].iter().enumerate() {
                let d = m_j - schedule[i];
                if norm(&w.backward_power(y_i, d)?) > budget(i) || norm(&w.forward_inverse_power(y_j, d)?) > budget(j) {
                    ok = false;
                    break;
                }
            }
            if ok {
                schedule.push(m_j);
                break;
            }
            gap *= 2;
        }
    }

    let mut x = SeqVector::zero(side);
    for (y, &m) in targets.iter().zip(&schedule) {
        x = x.add(&w.forward_inverse_power(y, m)?)?;
    }

    // A-posteriori: iterate B_w one step at a time.
    let mut defects = Vec::with_capacity(targets.len());
    let mut current = x.clone();
    let mut steps = 0u64;
    for (j, (y, &m)) in targets.iter().zip(&schedule).enumerate() {
        while steps < m {
            current = w.apply_backward(&current)?;
            steps += 1;
        }
        let product_form = w.backward_power(&x, m)?;
        let drift = norm(&current.sub(&product_form)?);
        let scale = norm(&product_form).max(1.0);
        if drift > SPOT_CHECK_TOL * scale {
            return Err(Error::VerificationFailed {
                target: j,
                defect: drift,
                eps: SPOT_CHECK_TOL * scale,
            });
        }
        let defect = norm(&current.sub(y)?);
        if defect > eps {
            return Err(Error::VerificationFailed { target: j, defect, eps });
        }
        defects.push(defect);
    }
    Ok(HcApprox { x, schedule, defects })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrbitDensity {
    /// Share of grid points within `eps` of some `B_w^n x`, `n ≤ N`.
    pub fraction: f64,
    /// First `n` reaching each grid point.
    pub first_hits: Vec<Option<u64>>,
    /// `‖B_w^n x‖_p` for `n = 0..=N`.
    pub orbit_norms: Vec<f64>,
}

pub fn orbit_density_report(
    w: &WeightSequence,
    x: &SeqVector,
    grid: &[SeqVector],
    eps: f64,
    n_max: u64,
) -> Result<OrbitDensity> {
    let p = w.p();
    let mut first_hits = vec![None; grid.len()];
    let mut orbit_norms = Vec::with_capacity(n_max as usize + 1);
    let mut current = x.clone();
    for n in 0..=n_max {
        if n > 0 {
            current = w.apply_backward(&current)?;
        }
        orbit_norms.push(lp_norm_seq(&current, p));
        for (hit, g) in first_hits.iter_mut().zip(grid) {
            if hit.is_none() && lp_norm_seq(&current.sub(g)?, p) <= eps {
                *hit = Some(n);
            }
        }
    }
    let fraction = if grid.is_empty() {
        1.0
    } else {
        first_hits.iter().filter(|h| h.is_some()).count() as f64 / grid.len() as f64
    };
    Ok(OrbitDensity {
        fraction,
        first_hits,
        orbit_norms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::{MeasureSystem, Tails};
    use crate::rational::{powi, rat, Exponent};
    use crate::shift::{derive_weights, Side};

    fn dyadic_weights() -> WeightSequence {
        let sys = MeasureSystem::single_cell(
            Exponent::one(),
            -20,
            20,
            |k| powi(&rat(1, 2), k.abs()),
            Some(Tails::symmetric(rat(1, 2))),
        )
        .unwrap();
        derive_weights(&sys).unwrap()
    }

    fn e(n: i64) -> SeqVector {
        SeqVector::basis(Side::Bilateral, n).unwrap()
    }

    #[test]
    fn single_target_is_exact() {
        let w = dyadic_weights();
        let out = construct_hc_approx(&w, &[e(0)], 0.01, 64).unwrap();
        assert_eq!(out.schedule, vec![1]);
        // S e_0 = e_1 / w_1 with w_1 = 2.
        assert_eq!(out.x.get(1).re, 0.5);
        assert_eq!(out.defects, vec![0.0]);
    }

    #[test]
    fn zero_targets() {
        let out = construct_hc_approx(&dyadic_weights(), &[SeqVector::zero(Side::Bilateral)], 0.01, 64).unwrap();
        assert!(out.x.is_zero());
        assert_eq!(out.schedule, vec![0]);
    }

    #[test]
    fn two_targets_within_eps() {
        let w = dyadic_weights();
        let targets = [e(0), e(0).add(&e(1)).unwrap()];
        let out = construct_hc_approx(&w, &targets, 0.01, 64).unwrap();
        assert!(out.schedule.windows(2).all(|s| s[0] < s[1]));
        assert!(out.defects.iter().all(|&d| d <= 0.01));
        let dens = orbit_density_report(&w, &out.x, &targets, 0.01, *out.schedule.last().unwrap()).unwrap();
        assert_eq!(dens.fraction, 1.0);
    }

    #[test]
    fn constant_weights_exhaust_horizon() {
        let w = WeightSequence::constant(Exponent::one(), Side::Bilateral, rat(1, 1)).unwrap();
        let err = construct_hc_approx(&w, &[e(0), e(1)], 0.01, 64).unwrap_err();
        assert!(matches!(err, Error::HorizonExhausted { target: 1, horizon: 64 }));
    }

    #[test]
    fn zeroth_iterate_and_far_point() {
        let w = dyadic_weights();
        let x = e(3);
        assert_eq!(orbit_density_report(&w, &x, std::slice::from_ref(&x), 0.01, 0).unwrap().fraction, 1.0);
        let far = e(3).scale(num::complex::Complex64::new(5.0, 0.0));
        assert_eq!(orbit_density_report(&w, &x, &[far], 0.01, 0).unwrap().fraction, 0.0);
    }
}
