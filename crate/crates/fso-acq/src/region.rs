//! Uncertainty-region geometry and receiver location statistics.
//!
//! The receiver sits somewhere in a disk of radius `region_radius`; its
//! distance from the center is Rayleigh distributed (i.i.d. zero-mean Gaussian
//! coordinates with per-axis standard deviation `sigma`). The transmitter
//! sweeps an Archimedean spiral outward with beam radius `rho`, dwelling
//! `dwell_time` seconds at each step, so covering a disk of radius `r` costs
//! about `dwell_time * r^2 / rho^2` seconds.

use crate::error::{Error, Result};

/// Beam and scan geometry shared by every scheme.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ScanGeometry {
    /// Beam radius (m).
    pub beam_radius: f64,
    /// Dwell time per scan position (s).
    pub dwell_time: f64,
    /// Per-axis standard deviation of the receiver location (m).
    pub sigma: f64,
    /// Radius of the uncertainty region (m).
    pub region_radius: f64,
}

impl ScanGeometry {
    pub fn new(beam_radius: f64, dwell_time: f64, sigma: f64, region_radius: f64) -> Result<Self> {
        if !(beam_radius > 0.0 && beam_radius < region_radius) {
            return Err(Error::domain(
                "beam radius must satisfy 0 < rho < region radius",
            ));
        }
        if dwell_time <= 0.0 {
            return Err(Error::domain("dwell time must be positive"));
        }
        if sigma <= 0.0 {
            return Err(Error::domain("sigma must be positive"));
        }
        Ok(Self {
            beam_radius,
            dwell_time,
            sigma,
            region_radius,
        })
    }

    /// Rate of the exponential law governing the time to reach a
    /// Rayleigh-distributed radius along the spiral: rho^2 / (2 T_d sigma^2).
    pub fn reach_rate(&self) -> f64 {
        self.beam_radius * self.beam_radius / (2.0 * self.dwell_time * self.sigma * self.sigma)
    }

    /// Time to spiral from the center out to `radius`.
    pub fn scan_time(&self, radius: f64) -> Result<f64> {
        if !(0.0..=self.region_radius).contains(&radius) {
            return Err(Error::domain(format!(
                "scan radius {radius} outside [0, {}]",
                self.region_radius
            )));
        }
        Ok(self.dwell_time * radius * radius / (self.beam_radius * self.beam_radius))
    }
}

/// Rayleigh radial location law, optionally renormalized to the region.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct LocationModel {
    pub sigma: f64,
    pub region_radius: f64,
    /// When set, the law is conditioned on the receiver lying inside the
    /// region (the density renormalized over [0, region_radius]).
    pub truncated: bool,
}

impl LocationModel {
    pub fn new(sigma: f64, region_radius: f64, truncated: bool) -> Result<Self> {
        if sigma <= 0.0 || region_radius <= 0.0 {
            return Err(Error::domain("sigma and region radius must be positive"));
        }
        Ok(Self {
            sigma,
            region_radius,
            truncated,
        })
    }

    pub fn truncated(geom: &ScanGeometry) -> Self {
        Self {
            sigma: geom.sigma,
            region_radius: geom.region_radius,
            truncated: true,
        }
    }

    pub fn untruncated(geom: &ScanGeometry) -> Self {
        Self {
            sigma: geom.sigma,
            region_radius: geom.region_radius,
            truncated: false,
        }
    }

    /// Unnormalized Rayleigh CDF 1 - exp(-r^2 / (2 sigma^2)).
    fn raw_cdf(&self, r: f64) -> f64 {
        -(-r * r / (2.0 * self.sigma * self.sigma)).exp_m1()
    }

    /// Probability mass inside the region under the unconditioned law.
    pub fn region_mass(&self) -> f64 {
        self.raw_cdf(self.region_radius)
    }

    /// CDF of the radial location.
    pub fn cdf(&self, r: f64) -> Result<f64> {
        if r < 0.0 {
            return Err(Error::domain("radius must be non-negative"));
        }
        if self.truncated {
            if r >= self.region_radius {
                return Ok(1.0);
            }
            Ok(self.raw_cdf(r) / self.region_mass())
        } else {
            Ok(self.raw_cdf(r))
        }
    }

    /// Density of the radial location.
    pub fn pdf(&self, r: f64) -> Result<f64> {
        if r < 0.0 {
            return Err(Error::domain("radius must be non-negative"));
        }
        let s2 = self.sigma * self.sigma;
        let raw = (r / s2) * (-r * r / (2.0 * s2)).exp();
        if self.truncated {
            if r > self.region_radius {
                return Ok(0.0);
            }
            Ok(raw / self.region_mass())
        } else {
            Ok(raw)
        }
    }
}

/// CDF of the radial location model at radius `r`.
pub fn rayleigh_cdf(r: f64, model: &LocationModel) -> Result<f64> {
    model.cdf(r)
}

/// Ordered subregion radii `r_1 < r_2 < ... < r_N = region_radius`.
///
/// Holds only the radii and their cumulative squares; the time-related
/// quantities depend on a [`ScanGeometry`] and are exposed as methods taking
/// one.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Partition {
    radii: Vec<f64>,
    cum_sq: Vec<f64>,
}

impl Partition {
    pub fn new(radii: Vec<f64>, geom: &ScanGeometry) -> Result<Self> {
        if radii.is_empty() {
            return Err(Error::domain("partition needs at least one radius"));
        }
        let mut prev = 0.0;
        for &r in &radii {
            if !(r > prev) {
                return Err(Error::domain("subregion radii must be strictly increasing"));
            }
            prev = r;
        }
        let last = *radii.last().unwrap();
        if (last - geom.region_radius).abs() > 1e-9 * geom.region_radius {
            return Err(Error::domain(format!(
                "outermost radius {last} must equal the region radius {}",
                geom.region_radius
            )));
        }
        let mut cum_sq = Vec::with_capacity(radii.len());
        let mut acc = 0.0;
        for &r in &radii {
            acc += r * r;
            cum_sq.push(acc);
        }
        Ok(Self { radii, cum_sq })
    }

    /// Evenly spaced radii `i * region_radius / n`.
    pub fn uniform(n: usize, geom: &ScanGeometry) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("partition needs at least one subregion"));
        }
        let radii = (1..=n)
            .map(|i| geom.region_radius * i as f64 / n as f64)
            .collect();
        Self::new(radii, geom)
    }

    pub fn n(&self) -> usize {
        self.radii.len()
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    /// Sum of squared radii through subscan `k` (k = 0 gives 0).
    pub fn cum_sq_radius(&self, k: usize) -> f64 {
        if k == 0 {
            0.0
        } else {
            self.cum_sq[k - 1]
        }
    }

    /// Cumulative time to finish subscans 1..k of one full scan.
    pub fn cum_subscan_time(&self, k: usize, geom: &ScanGeometry) -> f64 {
        geom.dwell_time * self.cum_sq_radius(k) / (geom.beam_radius * geom.beam_radius)
    }

    /// Duration of one full scan (all N subscans).
    pub fn scan_duration(&self, geom: &ScanGeometry) -> f64 {
        self.cum_subscan_time(self.n(), geom)
    }

    /// Normalizer of the truncated reach-time law within subscan `k` (1-based):
    /// 1 - exp(-r_k^2 / (2 sigma^2)).
    pub fn reach_norm(&self, k: usize, geom: &ScanGeometry) -> f64 {
        let r = self.radii[k - 1];
        let a = geom.reach_rate();
        let horizon = geom.dwell_time * r * r / (geom.beam_radius * geom.beam_radius);
        -(-a * horizon).exp_m1()
    }
}

/// One step along the scan spiral, in polar coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpiralWaypoint {
    pub radius: f64,
    pub angle: f64,
}

impl SpiralWaypoint {
    pub fn xy(&self) -> (f64, f64) {
        (
            self.radius * self.angle.cos(),
            self.radius * self.angle.sin(),
        )
    }
}

/// Waypoints of an Archimedean spiral `r = (b / 2 pi) theta` with pitch
/// `b = 2 rho` and arc-length spacing `2 rho`, from the center out to
/// `out_radius`.
///
/// Consecutive beam footprints overlap just enough to leave no radial gap.
pub fn spiral_waypoints(geom: &ScanGeometry, out_radius: f64) -> Result<Vec<SpiralWaypoint>> {
    if out_radius <= 0.0 {
        return Err(Error::domain("spiral outer radius must be positive"));
    }
    if out_radius > geom.region_radius {
        return Err(Error::domain("spiral outer radius exceeds the region"));
    }
    let rho = geom.beam_radius;
    let a = rho / std::f64::consts::PI; // r = a * theta
    let step = 2.0 * rho;
    let mut points = vec![SpiralWaypoint {
        radius: 0.0,
        angle: 0.0,
    }];
    let mut theta: f64 = 0.0;
    loop {
        // advance theta so the arc length grows by `step`: ds = a sqrt(1 + theta^2) dtheta,
        // integrated with one Heun (predictor-corrector) stage.
        let k1 = step / (a * (1.0 + theta * theta).sqrt());
        let t1 = theta + k1;
        let k2 = step / (a * (1.0 + t1 * t1).sqrt());
        theta += 0.5 * (k1 + k2);
        let r = a * theta;
        if r > out_radius {
            break;
        }
        points.push(SpiralWaypoint {
            radius: r,
            angle: theta,
        });
    }
    Ok(points)
}

/// Posterior radial density after `k - 1` failed subscans, evaluated at `r`.
///
/// A receiver in the annulus between `r_{i-1}` and `r_i` has been illuminated
/// by every completed subscan j >= i, so its prior weight is scaled by
/// `(1 - p_d)^(number of illuminations)`; the product is renormalized over
/// [0, region_radius].
pub fn conditional_location_pdf(
    r: f64,
    k: usize,
    partition: &Partition,
    p_d: f64,
    model: &LocationModel,
) -> Result<f64> {
    if k < 1 {
        return Err(Error::domain("subscan index must be at least 1"));
    }
    if !(0.0..=1.0).contains(&p_d) {
        return Err(Error::domain("detection probability must lie in [0, 1]"));
    }
    if r < 0.0 {
        return Err(Error::domain("radius must be non-negative"));
    }
    if r > model.region_radius {
        return Ok(0.0);
    }
    let weight = |radius: f64| -> f64 {
        let ring = ring_index(partition, radius);
        let misses = (k - 1).saturating_sub(ring - 1) as i32; // subscans ring..k-1
        (1.0 - p_d).powi(misses)
    };
    // normalizer: sum of ring masses times their survival weights
    let mut z = 0.0;
    let mut prev_cdf = 0.0;
    for i in 1..=partition.n() {
        let cdf = untruncated_cdf(partition.radii()[i - 1], model);
        z +=
            (cdf - prev_cdf) * weight(0.5 * (partition.radii()[i - 1] + prev_radius(partition, i)));
        prev_cdf = cdf;
    }
    let s2 = model.sigma * model.sigma;
    let prior = (r / s2) * (-r * r / (2.0 * s2)).exp();
    Ok(prior * weight(r) / z)
}

fn prev_radius(partition: &Partition, i: usize) -> f64 {
    if i <= 1 {
        0.0
    } else {
        partition.radii()[i - 2]
    }
}

fn untruncated_cdf(r: f64, model: &LocationModel) -> f64 {
    -(-r * r / (2.0 * model.sigma * model.sigma)).exp_m1()
}

/// 1-based index of the innermost subregion containing `radius`.
fn ring_index(partition: &Partition, radius: f64) -> usize {
    match partition.radii().iter().position(|&edge| radius <= edge) {
        Some(i) => i + 1,
        None => partition.n(),
    }
}

/// Truncated-exponential reach-time density within subscan `k` (1-based),
/// evaluated at elapsed time `x`.
pub fn truncated_exp_pdf(
    x: f64,
    k: usize,
    partition: &Partition,
    geom: &ScanGeometry,
) -> Result<f64> {
    if k < 1 || k > partition.n() {
        return Err(Error::domain("subscan index out of range"));
    }
    if x < 0.0 {
        return Err(Error::domain("time must be non-negative"));
    }
    let r = partition.radii()[k - 1];
    let horizon = geom.dwell_time * r * r / (geom.beam_radius * geom.beam_radius);
    if x > horizon {
        return Ok(0.0);
    }
    let a = geom.reach_rate();
    Ok(a * (-a * x).exp() / partition.reach_norm(k, geom))
}
