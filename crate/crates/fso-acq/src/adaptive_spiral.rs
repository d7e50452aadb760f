//! Closed-form acquisition-time statistics for the adaptive spiral scheme.
//!
//! One full scan sweeps the subregions in order: subscan k spirals from the
//! center out to radius `r_k`, so the inner subregions are revisited before
//! the outer ones are reached. Failed scans repeat the whole schedule. The
//! acquisition time decomposes as `T = W + V'`: `W` counts whole failed scans
//! (geometric with the per-scan failure probability) and `V'` is the time
//! inside the final, successful scan.

use crate::error::{Error, Result};
use crate::region::{LocationModel, Partition, ScanGeometry};

/// Per-subscan detection probabilities and the full-scan failure probability.
#[derive(Debug, Clone, PartialEq)]
pub struct SpiralEventProbs {
    /// P(detected during subscan k), k = 1..N.
    pub per_subscan: Vec<f64>,
    /// P(one full scan fails to locate the receiver).
    pub p_fail: f64,
    /// 1-based indices of annuli carrying (numerically) zero probability mass.
    /// A degenerate ring is harmless for the formulas, so this is a warning,
    /// not an error.
    pub degenerate_rings: Vec<usize>,
}

/// How the subscan event probabilities treat the conditioning on past misses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EventProbMode {
    /// Location prior left unchanged by failed subscans (the low-detection
    /// approximation the closed forms are built on).
    #[default]
    PriorInvariant,
    /// Location prior reweighted by the survival probabilities of past
    /// subscans before each attempt; kept for sensitivity studies.
    Conditioned,
}

/// Subscan event probabilities under the default prior-invariant model.
pub fn event_probs(
    partition: &Partition,
    p_d: f64,
    model: &LocationModel,
) -> Result<SpiralEventProbs> {
    event_probs_with_mode(partition, p_d, model, EventProbMode::PriorInvariant)
}

/// Subscan event probabilities with an explicit conditioning mode.
pub fn event_probs_with_mode(
    partition: &Partition,
    p_d: f64,
    model: &LocationModel,
    mode: EventProbMode,
) -> Result<SpiralEventProbs> {
    if !(0.0 < p_d && p_d <= 1.0) {
        return Err(Error::domain("detection probability must lie in (0, 1]"));
    }
    let n = partition.n();
    // ring masses under the (possibly truncated) location law
    let mut ring_mass = Vec::with_capacity(n);
    let mut degenerate = Vec::new();
    let mut prev = 0.0;
    for (i, &r) in partition.radii().iter().enumerate() {
        let cdf = model.cdf(r)?;
        let q = (cdf - prev).max(0.0);
        if q == 0.0 {
            degenerate.push(i + 1);
        }
        ring_mass.push(q);
        prev = cdf;
    }
    let miss = 1.0 - p_d;
    let per_subscan: Vec<f64> = match mode {
        EventProbMode::PriorInvariant => (1..=n)
            .map(|k| {
                (1..=k)
                    .map(|i| ring_mass[i - 1] * miss.powi((k - i) as i32) * p_d)
                    .sum()
            })
            .collect(),
        EventProbMode::Conditioned => (1..=n)
            .map(|k| {
                // reweight rings by their survival through subscans 1..k-1
                let weights: Vec<f64> = (1..=n)
                    .map(|ring| miss.powi((k.saturating_sub(ring)) as i32))
                    .collect();
                let z: f64 = (1..=n).map(|i| weights[i - 1] * ring_mass[i - 1]).sum();
                (1..=k)
                    .map(|i| {
                        let cond_mass = weights[i - 1] * ring_mass[i - 1] / z;
                        cond_mass * miss.powi((k - i) as i32) * p_d
                    })
                    .sum()
            })
            .collect(),
    };
    // failure probability of one full scan: a receiver in ring i survives its
    // N - i + 1 illuminations
    let p_fail = (1..=n)
        .map(|i| ring_mass[i - 1] * miss.powi((n - i + 1) as i32))
        .sum();
    Ok(SpiralEventProbs {
        per_subscan,
        p_fail,
        degenerate_rings: degenerate,
    })
}

/// Precomputed time statistics of the adaptive spiral scheme.
#[derive(Debug, Clone)]
pub struct SpiralTimeStats {
    per_subscan: Vec<f64>,
    p_fail: f64,
    /// Cumulative subscan completion times beta_0..beta_N.
    cum_time: Vec<f64>,
    /// Reach-time normalizers eta_1..eta_N.
    reach_norm: Vec<f64>,
    reach_rate: f64,
    mean_s: f64,
}

impl SpiralTimeStats {
    pub fn new(
        partition: &Partition,
        probs: &SpiralEventProbs,
        geom: &ScanGeometry,
    ) -> Result<Self> {
        if probs.per_subscan.len() != partition.n() {
            return Err(Error::domain(
                "event probabilities do not match the partition size",
            ));
        }
        if probs.p_fail >= 1.0 {
            return Err(Error::domain(
                "mean acquisition time diverges when every scan fails",
            ));
        }
        let n = partition.n();
        let cum_time: Vec<f64> = (0..=n)
            .map(|k| partition.cum_subscan_time(k, geom))
            .collect();
        let reach_norm: Vec<f64> = (1..=n).map(|k| partition.reach_norm(k, geom)).collect();
        let reach_rate = geom.reach_rate();
        let p = probs.p_fail;

        let mut mean = 0.0;
        for k in 0..n {
            let delta = cum_time[k + 1] - cum_time[k];
            let decay = (-reach_rate * delta).exp();
            let scan_len = cum_time[n];
            let restarts = scan_len * (1.0 - decay) * p / ((1.0 - p) * (1.0 - p));
            let within =
                (cum_time[k] - cum_time[k + 1] * decay + (1.0 - decay) / reach_rate) / (1.0 - p);
            mean += probs.per_subscan[k] / reach_norm[k] * (restarts + within);
        }

        Ok(Self {
            per_subscan: probs.per_subscan.clone(),
            p_fail: p,
            cum_time,
            reach_norm,
            reach_rate,
            mean_s: mean,
        })
    }

    fn n(&self) -> usize {
        self.per_subscan.len()
    }

    /// Mean acquisition time in seconds.
    pub fn mean_s(&self) -> f64 {
        self.mean_s
    }

    /// Duration of one full scan.
    pub fn scan_duration(&self) -> f64 {
        *self.cum_time.last().unwrap()
    }

    /// P(one full scan fails).
    pub fn p_fail(&self) -> f64 {
        self.p_fail
    }

    /// Number of scan terms needed before the remaining geometric tail mass
    /// falls below `tail_tol`.
    pub fn scan_truncation_index(&self, tail_tol: f64) -> usize {
        if self.p_fail <= 0.0 {
            return 0;
        }
        (tail_tol.ln() / self.p_fail.ln()).ceil().max(0.0) as usize
    }

    /// Complementary CDF P(T > tau).
    ///
    /// The three geometric sums of the closed form are evaluated per scan
    /// index in log space: the middle ratio `p e^{alpha beta_N}` routinely
    /// exceeds one, but each combined term `p^i e^{-alpha (tau - i beta_N -
    /// beta_k)}` is bounded, so terms are assembled exponent-first. The sums
    /// have few terms (the scan window is at most one full period wide); the
    /// closed geometric shortcut is reserved for hypothetically longer runs
    /// and cross-checked against the loop in tests.
    pub fn ccdf(&self, tau: f64) -> f64 {
        self.ccdf_impl(tau, 64)
    }

    pub(crate) fn ccdf_impl(&self, tau: f64, loop_limit: i64) -> f64 {
        if tau < 0.0 {
            return 1.0;
        }
        let n = self.n();
        let p = self.p_fail;
        let ln_p = p.ln();
        let scan_len = self.scan_duration();
        let a = self.reach_rate;
        let mut total = 0.0;
        for k in 0..n {
            let beta_k = self.cum_time[k];
            let beta_k1 = self.cum_time[k + 1];
            let delta = beta_k1 - beta_k;
            // scans still entirely ahead of tau
            let m_k = (((tau - beta_k) / scan_len).floor() + 1.0).max(0.0);
            let full = pow_from_ln(ln_p, m_k) / (1.0 - p);
            // scans whose k-th piece straddles tau
            let lo = (((tau - beta_k1) / scan_len).floor() + 1.0).max(0.0) as i64;
            let hi = ((tau - beta_k) / scan_len).floor() as i64;
            let mut partial = 0.0;
            if hi >= lo {
                let count = hi - lo + 1;
                if count <= loop_limit {
                    for i in lo..=hi {
                        let if64 = i as f64;
                        let reach =
                            pow_from_ln(ln_p, if64) * (-a * (tau - if64 * scan_len - beta_k)).exp();
                        let drain = pow_from_ln(ln_p, if64) * (-a * delta).exp();
                        partial += (reach - drain) / self.reach_norm[k];
                    }
                } else {
                    partial = self.partial_geometric(tau, k, lo, hi);
                }
            }
            total += self.per_subscan[k] * (full + partial);
        }
        total.clamp(0.0, 1.0)
    }

    /// Closed geometric form of the straddling-scan sums, factored from the
    /// dominant end so no intermediate overflows.
    fn partial_geometric(&self, tau: f64, k: usize, lo: i64, hi: i64) -> f64 {
        let p = self.p_fail;
        let ln_p = p.ln();
        let a = self.reach_rate;
        let scan_len = self.scan_duration();
        let beta_k = self.cum_time[k];
        let delta = self.cum_time[k + 1] - beta_k;
        let count = hi - lo + 1;
        // sum_i p^i e^{-a (tau - i L - beta_k)} with ratio x = p e^{a L}
        let ln_x = ln_p + a * scan_len;
        let reach = if ln_x <= 0.0 {
            // factor from the first term
            let first =
                pow_from_ln(ln_p, lo as f64) * (-a * (tau - lo as f64 * scan_len - beta_k)).exp();
            first * geometric_series(ln_x.exp(), count)
        } else {
            // factor from the last term
            let last =
                pow_from_ln(ln_p, hi as f64) * (-a * (tau - hi as f64 * scan_len - beta_k)).exp();
            last * geometric_series((-ln_x).exp(), count)
        };
        // sum_i p^i e^{-a delta}: ratio p < 1, factor from the first term
        let drain = pow_from_ln(ln_p, lo as f64) * (-a * delta).exp() * geometric_series(p, count);
        (reach - drain) / self.reach_norm[k]
    }

    /// Piecewise-exponential acquisition-time density.
    pub fn density_t(&self, t: f64) -> f64 {
        if t < 0.0 {
            return 0.0;
        }
        let scan_len = self.scan_duration();
        let scan_idx = (t / scan_len).floor();
        let within = t - scan_idx * scan_len;
        let k = match self
            .cum_time
            .windows(2)
            .position(|w| within >= w[0] && within < w[1])
        {
            Some(k) => k,
            None => return 0.0,
        };
        let weight = pow_from_ln(self.p_fail.ln(), scan_idx);
        weight * self.per_subscan[k] * self.reach_rate / self.reach_norm[k]
            * (-self.reach_rate * (within - self.cum_time[k])).exp()
    }

    /// Continuous part of the single-scan time density (the failure atom is
    /// reported by [`SpiralTimeStats::v_atom`]).
    pub fn density_v(&self, v: f64) -> f64 {
        if v < 0.0 || v >= self.scan_duration() {
            return 0.0;
        }
        let k = match self.cum_time.windows(2).position(|w| v >= w[0] && v < w[1]) {
            Some(k) => k,
            None => return 0.0,
        };
        self.per_subscan[k] * self.reach_rate / self.reach_norm[k]
            * (-self.reach_rate * (v - self.cum_time[k])).exp()
    }

    /// Dirac atom of the single-scan time at the full scan duration: the scan
    /// fails with probability `p_fail`.
    pub fn v_atom(&self) -> (f64, f64) {
        (self.scan_duration(), self.p_fail)
    }

    /// Density of the final-scan time (single-scan law conditioned on success).
    pub fn density_v_prime(&self, v: f64) -> f64 {
        self.density_v(v) / (1.0 - self.p_fail)
    }

    /// Atoms (location, mass) of the whole-failed-scans time `W`, listed until
    /// the remaining mass drops below `tail_tol`.
    pub fn w_atoms(&self, tail_tol: f64) -> Vec<(f64, f64)> {
        let i_max = self.scan_truncation_index(tail_tol);
        let scan_len = self.scan_duration();
        (0..=i_max)
            .map(|i| {
                (
                    i as f64 * scan_len,
                    (1.0 - self.p_fail) * pow_from_ln(self.p_fail.ln(), i as f64),
                )
            })
            .collect()
    }
}

/// Mean acquisition time for a partition, event probabilities, and geometry.
pub fn mean_acq_time(
    partition: &Partition,
    probs: &SpiralEventProbs,
    geom: &ScanGeometry,
) -> Result<f64> {
    Ok(SpiralTimeStats::new(partition, probs, geom)?.mean_s())
}

/// Complementary CDF P(T > tau) of the acquisition time.
pub fn ccdf(
    tau: f64,
    partition: &Partition,
    probs: &SpiralEventProbs,
    geom: &ScanGeometry,
) -> Result<f64> {
    if tau < 0.0 {
        return Err(Error::domain("tau must be non-negative"));
    }
    Ok(SpiralTimeStats::new(partition, probs, geom)?.ccdf(tau))
}

fn geometric_series(ratio: f64, count: i64) -> f64 {
    // 1 + ratio + ... + ratio^(count-1), ratio <= 1 by construction
    if (1.0 - ratio).abs() < 1e-12 {
        return count as f64;
    }
    (1.0 - ratio.powi(count as i32)) / (1.0 - ratio)
}

/// base^i from ln(base), with the 0^0 = 1 convention so a zero failure
/// probability cannot poison exponents with 0 * ln(0) = NaN.
fn pow_from_ln(ln_base: f64, i: f64) -> f64 {
    if i == 0.0 {
        1.0
    } else {
        (i * ln_base).exp()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    fn vii_geom() -> ScanGeometry {
        ScanGeometry::new(0.2, 1e-4, 15.0, 50.0).unwrap()
    }

    /// Direct enumeration oracle over (ring, detecting-subscan) outcomes.
    fn enum_event_probs(partition: &Partition, p_d: f64, model: &LocationModel) -> (Vec<f64>, f64) {
        let n = partition.n();
        let mut prev = 0.0;
        let ring_mass: Vec<f64> = partition
            .radii()
            .iter()
            .map(|&r| {
                let c = model.cdf(r).unwrap();
                let q = c - prev;
                prev = c;
                q
            })
            .collect();
        let mut per = vec![0.0; n];
        let mut fail = 0.0;
        for ring in 1..=n {
            // the receiver in `ring` is illuminated by subscans ring..N
            for det in ring..=n {
                per[det - 1] += ring_mass[ring - 1] * (1.0 - p_d).powi((det - ring) as i32) * p_d;
            }
            fail += ring_mass[ring - 1] * (1.0 - p_d).powi((n - ring + 1) as i32);
        }
        (per, fail)
    }

    #[test]
    fn single_region_reduces_to_bernoulli() {
        let g = vii_geom();
        let m = LocationModel::truncated(&g);
        let p = Partition::uniform(1, &g).unwrap();
        let probs = event_probs(&p, 0.05, &m).unwrap();
        assert!((probs.per_subscan[0] - 0.05).abs() < 1e-15);
        assert!((probs.p_fail - 0.95).abs() < 1e-15);
    }

    #[test]
    fn certain_detection_two_regions() {
        let g = vii_geom();
        let m = LocationModel::truncated(&g);
        let p = Partition::new(vec![25.0, 50.0], &g).unwrap();
        let probs = event_probs(&p, 1.0, &m).unwrap();
        let f1 = m.cdf(25.0).unwrap();
        assert!((probs.per_subscan[0] - f1).abs() < 1e-15);
        assert!((probs.per_subscan[1] - (1.0 - f1)).abs() < 1e-15);
        assert_eq!(probs.p_fail, 0.0);
    }

    #[test]
    fn event_probs_match_enumeration_oracle() {
        let g = vii_geom();
        let m = LocationModel::truncated(&g);
        let p = Partition::uniform(7, &g).unwrap();
        let probs = event_probs(&p, 0.05, &m).unwrap();
        let (want, want_fail) = enum_event_probs(&p, 0.05, &m);
        for (got, want) in probs.per_subscan.iter().zip(&want) {
            assert!((got - want).abs() <= 1e-12, "{got} vs {want}");
        }
        assert!((probs.p_fail - want_fail).abs() <= 1e-12);
    }

    #[test]
    fn normalization_identity_random_partitions() {
        let g = vii_geom();
        let m = LocationModel::truncated(&g);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for _ in 0..100 {
            let n = rng.gen_range(1..=9usize);
            let mut radii: Vec<f64> = (0..n - 1).map(|_| rng.gen_range(0.2..49.8)).collect();
            radii.sort_by(|a, b| a.partial_cmp(b).unwrap());
            radii.dedup_by(|a, b| (*a - *b).abs() < 1e-3);
            radii.push(50.0);
            let p = Partition::new(radii, &g).unwrap();
            let pd = rng.gen_range(0.001..0.999);
            let probs = event_probs(&p, pd, &m).unwrap();
            let total: f64 = probs.per_subscan.iter().sum::<f64>() + probs.p_fail;
            assert!((total - 1.0).abs() < 1e-10, "total = {total}");
        }
    }

    #[test]
    fn untruncated_model_leaks_mass() {
        let g = vii_geom();
        let m = LocationModel::untruncated(&g);
        let p = Partition::uniform(7, &g).unwrap();
        let probs = event_probs(&p, 0.05, &m).unwrap();
        let total: f64 = probs.per_subscan.iter().sum::<f64>() + probs.p_fail;
        assert!(
            total < 1.0 - 1e-4,
            "untruncated total should fall short of 1"
        );
    }

    #[test]
    fn degenerate_ring_warns_without_failing() {
        let g = ScanGeometry::new(0.2, 1e-4, 1.0, 50.0).unwrap(); // sigma = 1 m
        let m = LocationModel::truncated(&g);
        // the outer annulus (20, 50] carries ~e^{-200} mass: numerically zero
        let p = Partition::new(vec![20.0, 50.0], &g).unwrap();
        let probs = event_probs(&p, 0.05, &m).unwrap();
        assert_eq!(probs.degenerate_rings, vec![2]);
    }

    #[test]
    fn mean_matches_reference_value() {
        // N = 7 uniform radii, truncated model, P_D = 0.05: 68.8769 s
        let g = vii_geom();
        let m = LocationModel::truncated(&g);
        let p = Partition::uniform(7, &g).unwrap();
        let probs = event_probs(&p, 0.05, &m).unwrap();
        let mean = mean_acq_time(&p, &probs, &g).unwrap();
        assert!((mean - 68.8769).abs() < 2e-3, "mean = {mean}");
    }

    #[test]
    fn mean_diverges_with_certain_failure() {
        let g = vii_geom();
        let p = Partition::uniform(1, &g).unwrap();
        let probs = SpiralEventProbs {
            per_subscan: vec![0.0],
            p_fail: 1.0,
            degenerate_rings: vec![],
        };
        assert!(SpiralTimeStats::new(&p, &probs, &g).is_err());
    }

    #[test]
    fn ccdf_boundary_values() {
        let g = vii_geom();
        let m = LocationModel::truncated(&g);
        let p = Partition::uniform(7, &g).unwrap();
        let probs = event_probs(&p, 0.05, &m).unwrap();
        let stats = SpiralTimeStats::new(&p, &probs, &g).unwrap();
        assert!((stats.ccdf(0.0) - 1.0).abs() < 1e-12);
        let far = stats.scan_duration() * 1e10;
        assert!(stats.ccdf(far) < 1e-9);
        assert!(ccdf(-1.0, &p, &probs, &g).is_err());
    }

    #[test]
    fn ccdf_non_increasing() {
        let g = vii_geom();
        let m = LocationModel::truncated(&g);
        let p = Partition::uniform(7, &g).unwrap();
        let probs = event_probs(&p, 0.05, &m).unwrap();
        let stats = SpiralTimeStats::new(&p, &probs, &g).unwrap();
        let mut prev = 1.0 + 1e-12;
        for i in 0..600 {
            let tau = i as f64 * 0.5;
            let c = stats.ccdf(tau);
            assert!(c <= prev + 1e-12, "ccdf increased at tau={tau}");
            prev = c;
        }
    }

    #[test]
    fn ccdf_loop_and_geometric_paths_agree() {
        let g = vii_geom();
        let m = LocationModel::truncated(&g);
        let p = Partition::uniform(3, &g).unwrap();
        let probs = event_probs(&p, 0.05, &m).unwrap();
        let stats = SpiralTimeStats::new(&p, &probs, &g).unwrap();
        for i in 0..200 {
            let tau = i as f64 * 0.73;
            let looped = stats.ccdf_impl(tau, i64::MAX);
            let closed = stats.ccdf_impl(tau, 0);
            assert!(
                (looped - closed).abs() < 1e-11,
                "tau={tau}: {looped} vs {closed}"
            );
        }
    }

    #[test]
    fn ccdf_reference_value() {
        let g = vii_geom();
        let m = LocationModel::truncated(&g);
        let p = Partition::uniform(7, &g).unwrap();
        let probs = event_probs(&p, 0.05, &m).unwrap();
        let c = ccdf(80.0, &p, &probs, &g).unwrap();
        assert!((c - 0.308049).abs() < 1e-4, "ccdf(80) = {c}");
    }

    #[test]
    fn mean_equals_integral_of_ccdf() {
        let g = vii_geom();
        let m = LocationModel::truncated(&g);
        let p = Partition::uniform(7, &g).unwrap();
        let probs = event_probs(&p, 0.05, &m).unwrap();
        let stats = SpiralTimeStats::new(&p, &probs, &g).unwrap();
        // integrate the ccdf piecewise over scan periods (Simpson per piece)
        let scan_len = stats.scan_duration();
        let i_max = stats.scan_truncation_index(1e-12);
        let mut integral = 0.0;
        for i in 0..=i_max {
            let a = i as f64 * scan_len;
            let n = 400;
            let h = scan_len / n as f64;
            let mut s = stats.ccdf(a) + stats.ccdf(a + scan_len);
            for j in 1..n {
                let w = if j % 2 == 1 { 4.0 } else { 2.0 };
                s += w * stats.ccdf(a + j as f64 * h);
            }
            integral += s * h / 3.0;
        }
        let rel = (integral - stats.mean_s()).abs() / stats.mean_s();
        assert!(rel < 1e-4, "integral {integral} vs mean {}", stats.mean_s());
    }

    #[test]
    fn density_t_integrates_to_one() {
        let g = vii_geom();
        let m = LocationModel::truncated(&g);
        let p = Partition::uniform(7, &g).unwrap();
        let probs = event_probs(&p, 0.05, &m).unwrap();
        let stats = SpiralTimeStats::new(&p, &probs, &g).unwrap();
        let i_max = stats.scan_truncation_index(1e-14);
        let scan_len = stats.scan_duration();
        // integrate piece by piece: each (scan, subscan) piece is smooth, so
        // nudge the endpoints strictly inside to dodge the piece boundaries
        let mut mass = 0.0;
        for i in 0..=i_max {
            for k in 0..p.n() {
                let a = i as f64 * scan_len + p.cum_subscan_time(k, &g);
                let b = i as f64 * scan_len + p.cum_subscan_time(k + 1, &g);
                let pad = 1e-12 * (b - a);
                let (a, b) = (a + pad, b - pad);
                let n = 200;
                let h = (b - a) / n as f64;
                let mut s = stats.density_t(a) + stats.density_t(b);
                for j in 1..n {
                    let w = if j % 2 == 1 { 4.0 } else { 2.0 };
                    s += w * stats.density_t(a + j as f64 * h);
                }
                mass += s * h / 3.0;
            }
        }
        assert!((mass - 1.0).abs() < 1e-8, "mass = {mass}");
    }

    #[test]
    fn atoms_and_conditional_density() {
        let g = vii_geom();
        let m = LocationModel::truncated(&g);
        let p = Partition::uniform(7, &g).unwrap();
        let probs = event_probs(&p, 0.05, &m).unwrap();
        let stats = SpiralTimeStats::new(&p, &probs, &g).unwrap();
        // failure atom of the single-scan law
        let (loc, mass) = stats.v_atom();
        assert_eq!(loc, stats.scan_duration());
        assert!((mass - probs.p_fail).abs() < 1e-15);
        // leading atom of W sits at zero with mass 1 - p
        let atoms = stats.w_atoms(1e-14);
        assert_eq!(atoms[0].0, 0.0);
        assert!((atoms[0].1 - (1.0 - probs.p_fail)).abs() < 1e-15);
        let total: f64 = atoms.iter().map(|(_, m)| m).sum();
        assert!((total - 1.0).abs() < 1e-12);
        // V' is V | success on the continuous part
        let v = 3.0;
        assert!(
            (stats.density_v_prime(v) - stats.density_v(v) / (1.0 - probs.p_fail)).abs() < 1e-15
        );
        assert_eq!(stats.density_v(stats.scan_duration()), 0.0);
    }

    #[test]
    fn degenerate_partition_collapses_to_single_region() {
        let g = vii_geom();
        let m = LocationModel::truncated(&g);
        let single = Partition::uniform(1, &g).unwrap();
        let probs1 = event_probs(&single, 0.05, &m).unwrap();
        let mean1 = mean_acq_time(&single, &probs1, &g).unwrap();
        // inner radii squeezed against the rim approach the N = 1 scheme
        let squeezed = Partition::new(vec![49.999_999, 50.0], &g).unwrap();
        let probs2 = event_probs(&squeezed, 0.05, &m).unwrap();
        let mean2 = mean_acq_time(&squeezed, &probs2, &g).unwrap();
        // one extra pass over an (almost) duplicate region doubles nothing:
        // continuity pushes the two means together
        assert!(
            (mean1 - mean2).abs() / mean1 < 1e-3,
            "mean1={mean1} mean2={mean2}"
        );
    }

    #[test]
    fn conditioned_mode_stays_close_for_small_pd() {
        let g = vii_geom();
        let m = LocationModel::truncated(&g);
        let p = Partition::uniform(7, &g).unwrap();
        let plain = event_probs(&p, 0.01, &m).unwrap();
        let cond = event_probs_with_mode(&p, 0.01, &m, EventProbMode::Conditioned).unwrap();
        for (a, b) in plain.per_subscan.iter().zip(&cond.per_subscan) {
            assert!((a - b).abs() < 5e-4, "{a} vs {b}");
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn normalization_property(seed in 0u64..10_000, pd in 0.01f64..0.99) {
            let g = vii_geom();
            let m = LocationModel::truncated(&g);
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let n = rng.gen_range(1..=8usize);
            let mut radii: Vec<f64> = (0..n - 1).map(|_| rng.gen_range(0.5..49.5)).collect();
            radii.sort_by(|a, b| a.partial_cmp(b).unwrap());
            radii.dedup_by(|a, b| (*a - *b).abs() < 1e-3);
            radii.push(50.0);
            let p = Partition::new(radii, &g).unwrap();
            let probs = event_probs(&p, pd, &m).unwrap();
            let total: f64 = probs.per_subscan.iter().sum::<f64>() + probs.p_fail;
            prop_assert!((total - 1.0).abs() < 1e-10);
            // and the ccdf stays within [0, 1], non-increasing on a coarse grid
            let stats = SpiralTimeStats::new(&p, &probs, &g).unwrap();
            let mut prev = 1.0 + 1e-9;
            for i in 0..40 {
                let c = stats.ccdf(i as f64 * 7.0);
                prop_assert!((0.0..=1.0).contains(&c));
                prop_assert!(c <= prev + 1e-9);
                prev = c;
            }
        }
    }
}
