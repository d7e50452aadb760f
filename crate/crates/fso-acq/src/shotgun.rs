//! Randomized (shotgun) acquisition statistics.
//!
//! Each dwell fires the beam at an aim point drawn from a zero-mean circular
//! Gaussian with standard deviation `sigma0` (the firing distribution). A
//! shot can detect the receiver only when its center lands within the beam
//! radius of the receiver, so the per-shot success probability at location
//! (x, y) is `P(hit) * P_D` and the shot count is geometric. Closed forms for
//! the mean and the complementary CDF are paired with independent quadrature
//! routes used to cross-check them.

use crate::error::{Error, Result};
use crate::numerics::{adaptive_simpson, gl_2d, gl_2d_refined, ln_choose, KahanSum};
use crate::region::ScanGeometry;

/// Zero-mean circular Gaussian law generating the shot aim points.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct FiringDistribution {
    /// Standard deviation of each aim-point coordinate (m).
    pub sigma0: f64,
}

impl FiringDistribution {
    pub fn new(sigma0: f64) -> Result<Self> {
        if sigma0 <= 0.0 {
            return Err(Error::domain("firing sigma must be positive"));
        }
        Ok(Self { sigma0 })
    }
}

/// Relative margin above `sigma` below which the mean-time pole is reported
/// as a domain error.
const SIGMA0_POLE_MARGIN: f64 = 1e-9;

/// Probability that one shot lands within `rho` of a receiver at (x, y).
///
/// `exact` integrates the firing Gaussian over the offset disk by polar
/// quadrature; otherwise the density-times-area approximation for
/// `rho << sigma0` is returned. Both are clamped to [0, 1].
pub fn hit_prob(x: f64, y: f64, rho: f64, firing: &FiringDistribution, exact: bool) -> Result<f64> {
    if rho <= 0.0 {
        return Err(Error::domain("beam radius must be positive"));
    }
    let s0sq = firing.sigma0 * firing.sigma0;
    if !exact {
        let p = rho * rho / (2.0 * s0sq) * (-(x * x + y * y) / (2.0 * s0sq)).exp();
        return Ok(p.min(1.0));
    }
    // polar coordinates centered on the receiver: the aim point is
    // (x + s cos t, y + s sin t) with s in [0, rho]
    let d_sq = x * x + y * y;
    let integrand = |s: f64, t: f64| -> f64 {
        let u = x + s * t.cos();
        let v = y + s * t.sin();
        s * (-(u * u + v * v) / (2.0 * s0sq)).exp()
    };
    let norm = 1.0 / (2.0 * std::f64::consts::PI * s0sq);
    // refine the tensor rule until stable; the integrand is analytic so the
    // orders converge fast even when the disk is comparable to sigma0.
    // The raw integral is at most pi rho^2 times the nearest density value,
    // which anchors a relative tolerance.
    let raw_scale = std::f64::consts::PI
        * rho
        * rho
        * (-(d_sq.sqrt() - rho).max(0.0).powi(2) / (2.0 * s0sq)).exp();
    let tol = (1e-12 * raw_scale).max(1e-290);
    let raw = gl_2d_refined(&integrand, 0.0, rho, 0.0, 2.0 * std::f64::consts::PI, tol)?;
    Ok((norm * raw).clamp(0.0, 1.0))
}

/// Closed-form mean acquisition time `2 T_d sigma0^4 / (rho^2 P_D (sigma0^2 - sigma^2))`.
///
/// Diverges as `sigma0` approaches `sigma` from above; below that pole the
/// location density outruns the firing density and the integral is infinite.
pub fn mean_acq_time(firing: &FiringDistribution, geom: &ScanGeometry, p_d: f64) -> Result<f64> {
    check_pd(p_d)?;
    let (s0, s) = (firing.sigma0, geom.sigma);
    if s0 <= s * (1.0 + SIGMA0_POLE_MARGIN) {
        return Err(Error::domain(format!(
            "firing sigma {s0} must exceed the location sigma {s}"
        )));
    }
    let s0sq = s0 * s0;
    let ssq = s * s;
    Ok(2.0 * geom.dwell_time * s0sq * s0sq
        / (geom.beam_radius * geom.beam_radius * p_d * (s0sq - ssq)))
}

/// Mean acquisition time by radial quadrature of `T_d / p_D(x, y)` against
/// the location density; the independent cross-check route for
/// [`mean_acq_time`].
pub fn mean_acq_time_quadrature(
    firing: &FiringDistribution,
    geom: &ScanGeometry,
    p_d: f64,
) -> Result<f64> {
    check_pd(p_d)?;
    let (s0, s) = (firing.sigma0, geom.sigma);
    if s0 <= s * (1.0 + SIGMA0_POLE_MARGIN) {
        return Err(Error::domain(format!(
            "firing sigma {s0} must exceed the location sigma {s}"
        )));
    }
    let s0sq = s0 * s0;
    let ssq = s * s;
    let lead = 2.0 * geom.dwell_time * s0sq / (geom.beam_radius * geom.beam_radius * p_d * ssq);
    // integrand r e^{r^2/2 sigma0^2} e^{-r^2/2 sigma^2}: Gaussian with scale
    // sq = sigma^2 sigma0^2 / (sigma0^2 - sigma^2)
    let sq = ssq * s0sq / (s0sq - ssq);
    let cut = 9.0 * sq.sqrt();
    let f = |r: f64| r * (r * r * (1.0 / (2.0 * s0sq) - 1.0 / (2.0 * ssq))).exp();
    let integral = adaptive_simpson(&f, 0.0, cut, 1e-9 * sq)?;
    Ok(lead * integral)
}

/// Firing spread minimizing the mean acquisition time: sqrt(2) sigma.
pub fn optimal_sigma0_mean(sigma: f64) -> f64 {
    std::f64::consts::SQRT_2 * sigma
}

/// Result of a numeric search over the firing spread.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sigma0Search {
    pub sigma0: f64,
    pub objective: f64,
    /// Set when the objective varied by less than 1e-12 across the bracket,
    /// in which case the returned minimizer is arbitrary within it.
    pub flat: bool,
}

/// Complementary CDF P(T > tau) via the truncated alternating binomial sum.
///
/// The shot index never reaches `n = floor(tau / T_d)` in practice: terms are
/// assembled from log-binomials and the sum is cut off once three consecutive
/// term magnitudes drop below `tol` relative to the running sum.
pub fn ccdf(
    tau: f64,
    firing: &FiringDistribution,
    geom: &ScanGeometry,
    p_d: f64,
    tol: f64,
) -> Result<f64> {
    check_pd(p_d)?;
    if tau < 0.0 {
        return Err(Error::domain("tau must be non-negative"));
    }
    if !(0.0 < tol && tol <= 1e-6) {
        return Err(Error::domain("truncation tolerance must lie in (0, 1e-6]"));
    }
    let n = (tau / geom.dwell_time).floor().max(0.0) as u64;
    if n == 0 {
        return Ok(1.0);
    }
    let s0sq = firing.sigma0 * firing.sigma0;
    let ssq = geom.sigma * geom.sigma;
    let ln_c = (p_d * geom.beam_radius * geom.beam_radius / (2.0 * s0sq)).ln();
    const MAX_TERMS: u64 = 10_000;
    let mut sum = KahanSum::default();
    let mut small_run = 0;
    let mut peak: f64 = 0.0;
    let finish = |sum: f64, peak: f64| -> Result<f64> {
        // the alternating terms peak near e^{n c}; once rounding noise on the
        // peak outweighs the cancelled result the sum is meaningless
        if peak * f64::EPSILON > 1e-9 {
            return Err(Error::convergence(
                "alternating binomial sum lost significance; \
                 use the quadrature route for this regime",
            ));
        }
        Ok(sum.clamp(0.0, 1.0))
    };
    for k in 0..=n.min(MAX_TERMS) {
        let ln_mag = ln_choose(n, k) + k as f64 * ln_c + (s0sq / (s0sq + k as f64 * ssq)).ln();
        let mag = ln_mag.exp();
        peak = peak.max(mag);
        let term = if k % 2 == 0 { mag } else { -mag };
        sum.add(term);
        if mag < tol * sum.value().abs().max(1e-30) {
            small_run += 1;
            if small_run >= 3 {
                return finish(sum.value(), peak);
            }
        } else {
            small_run = 0;
        }
        if k == n {
            return finish(sum.value(), peak);
        }
    }
    Err(Error::convergence(format!(
        "binomial ccdf did not truncate within {MAX_TERMS} terms \
         (rho << sigma0 assumption may not hold)"
    )))
}

/// Complementary CDF by 2-D quadrature of `(1 - p_D(x, y))^n` against the
/// location density; the independent cross-check route for [`ccdf`].
pub fn ccdf_quadrature(
    tau: f64,
    firing: &FiringDistribution,
    geom: &ScanGeometry,
    p_d: f64,
) -> Result<f64> {
    check_pd(p_d)?;
    if tau < 0.0 {
        return Err(Error::domain("tau must be non-negative"));
    }
    let n = (tau / geom.dwell_time).floor().max(0.0);
    if n == 0.0 {
        return Ok(1.0);
    }
    let s0sq = firing.sigma0 * firing.sigma0;
    let ssq = geom.sigma * geom.sigma;
    let c = p_d * geom.beam_radius * geom.beam_radius / (2.0 * s0sq);
    let norm = 1.0 / (2.0 * std::f64::consts::PI * ssq);
    let f = |x: f64, y: f64| -> f64 {
        let survive = n * (-c * (-(x * x + y * y) / (2.0 * s0sq)).exp()).ln_1p();
        norm * (survive - (x * x + y * y) / (2.0 * ssq)).exp()
    };
    let cut = 8.5 * geom.sigma;
    gl_2d_refined(&f, -cut, cut, -cut, cut, 1e-8)
}

/// Firing spread minimizing P(T > tau), found by golden-section search over
/// `sigma0` in (sigma, 10 sigma]. Unlike the mean-time optimum, this one
/// depends on both `tau` and `p_d`.
pub fn optimal_sigma0_ccdf(tau: f64, geom: &ScanGeometry, p_d: f64) -> Result<Sigma0Search> {
    check_pd(p_d)?;
    if tau <= 0.0 {
        return Err(Error::domain("tau must be positive"));
    }
    let lo = geom.sigma * (1.0 + 1e-6);
    let hi = 10.0 * geom.sigma;
    let eval = |s0: f64| -> Result<f64> {
        ccdf(tau, &FiringDistribution { sigma0: s0 }, geom, p_d, 1e-12)
    };
    // golden section over a closure that cannot fail mid-search: capture the
    // first error and replay it afterwards
    let mut failure: Option<Error> = None;
    let (sigma0, objective) = crate::numerics::golden_section_min(
        |s0| match eval(s0) {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                f64::INFINITY
            }
        },
        lo,
        hi,
        1e-4 * geom.sigma,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    let spread = (eval(lo)? - objective)
        .abs()
        .max((eval(hi)? - objective).abs());
    Ok(Sigma0Search {
        sigma0,
        objective,
        flat: spread < 1e-12,
    })
}

fn check_pd(p_d: f64) -> Result<()> {
    if !(0.0 < p_d && p_d <= 1.0) {
        return Err(Error::domain("detection probability must lie in (0, 1]"));
    }
    Ok(())
}

/// Fixed-order polar quadrature of the exact hit probability, shared with the
/// simulator where adaptivity per trial would dominate the runtime.
pub(crate) fn hit_prob_exact_fixed(
    x: f64,
    y: f64,
    rho: f64,
    firing: &FiringDistribution,
    order: usize,
) -> f64 {
    let s0sq = firing.sigma0 * firing.sigma0;
    let integrand = |s: f64, t: f64| -> f64 {
        let u = x + s * t.cos();
        let v = y + s * t.sin();
        s * (-(u * u + v * v) / (2.0 * s0sq)).exp()
    };
    let raw = gl_2d(&integrand, 0.0, rho, 0.0, 2.0 * std::f64::consts::PI, order);
    (raw / (2.0 * std::f64::consts::PI * s0sq)).clamp(0.0, 1.0)
}
