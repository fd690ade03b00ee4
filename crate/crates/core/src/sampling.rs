//! Random-variate generation for failure, repair and operator response times.
//!
//! Every sampler draws from a [`RandomStream`], a ChaCha8 generator that can be
//! split into independent substreams keyed by replication and component. All
//! times returned here are in hours.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const HOURS_PER_YEAR: f64 = 8760.0;
pub const MINUTES_PER_HOUR: f64 = 60.0;

/// Failure rate and normal repair-time model for one component class.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentReliability {
    /// Failures per year.
    pub lambda: f64,
    /// Mean repair time, hours.
    pub mu_r: f64,
    /// Repair-time standard deviation, hours.
    pub sigma_r: f64,
}

impl ComponentReliability {
    pub fn new(lambda: f64, mu_r: f64, sigma_r: f64) -> Result<Self> {
        let params = Self {
            lambda,
            mu_r,
            sigma_r,
        };
        params.validate()?;
        Ok(params)
    }

    /// A component that never fails.
    pub fn fully_reliable() -> Self {
        Self {
            lambda: 0.0,
            mu_r: 1.0,
            sigma_r: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda.is_finite() && self.lambda >= 0.0) {
            return Err(Error::Parameter(format!(
                "failure rate must be finite and >= 0, got {}",
                self.lambda
            )));
        }
        if !(self.mu_r.is_finite() && self.mu_r > 0.0) {
            return Err(Error::Parameter(format!(
                "mean repair time must be > 0, got {}",
                self.mu_r
            )));
        }
        if !(self.sigma_r.is_finite() && self.sigma_r >= 0.0 && self.sigma_r < self.mu_r) {
            return Err(Error::Parameter(format!(
                "repair-time std must satisfy 0 <= sigma_r < mu_r, got sigma_r={} mu_r={}",
                self.sigma_r, self.mu_r
            )));
        }
        Ok(())
    }

    pub fn with_lambda(self, lambda: f64) -> Self {
        Self { lambda, ..self }
    }
}

/// Normal model of the operator's response time, in minutes.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RtoParameters {
    pub mu_rto: f64,
    pub sigma_rto: f64,
}

impl RtoParameters {
    pub fn new(mu_rto: f64, sigma_rto: f64) -> Result<Self> {
        let params = Self { mu_rto, sigma_rto };
        params.validate()?;
        Ok(params)
    }

    /// Instantaneous operator.
    pub fn instant() -> Self {
        Self::default()
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.mu_rto.is_finite() && self.mu_rto >= 0.0) {
            return Err(Error::Parameter(format!(
                "mu_rto must be finite and >= 0, got {}",
                self.mu_rto
            )));
        }
        if !(self.sigma_rto.is_finite() && self.sigma_rto >= 0.0) {
            return Err(Error::Parameter(format!(
                "sigma_rto must be finite and >= 0, got {}",
                self.sigma_rto
            )));
        }
        if self.mu_rto == 0.0 && self.sigma_rto != 0.0 {
            return Err(Error::Parameter(format!(
                "sigma_rto must be 0 when mu_rto is 0, got {}",
                self.sigma_rto
            )));
        }
        Ok(())
    }
}

/// What a substream is used for. Part of the substream key, so fault
/// histories never share randomness with operator response times.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StreamPurpose {
    Branch,
    CommSwitch,
    Controller,
    Server,
    OperatorResponse,
}

impl StreamPurpose {
    fn tag(self) -> u64 {
        match self {
            StreamPurpose::Branch => 1,
            StreamPurpose::CommSwitch => 2,
            StreamPurpose::Controller => 3,
            StreamPurpose::Server => 4,
            StreamPurpose::OperatorResponse => 5,
        }
    }
}

/// Seedable uniform source. Equal seeds give bit-identical sequences.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RandomStream {
    rng: ChaCha8Rng,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl RandomStream {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Independent substream for `(replication, purpose, id)` under `root_seed`.
    ///
    /// The key selects a ChaCha stream number, so distinct keys never overlap.
    pub fn substream(root_seed: u64, replication: u64, purpose: StreamPurpose, id: u32) -> Self {
        let key = splitmix64(
            splitmix64(replication) ^ splitmix64((purpose.tag() << 32) | u64::from(id)),
        );
        let mut rng = ChaCha8Rng::seed_from_u64(root_seed);
        rng.set_stream(key);
        Self { rng }
    }

    /// Uniform on (0, 1].
    pub fn uniform_open_closed(&mut self) -> f64 {
        1.0 - self.rng.random::<f64>()
    }

    /// Uniform on [0, 1).
    pub fn uniform_closed_open(&mut self) -> f64 {
        self.rng.random::<f64>()
    }
}

/// Inverse-transform exponential draw: `-ln(u) / lambda`, in the units of
/// `1 / lambda`.
pub fn exponential_from_uniform(lambda: f64, u: f64) -> f64 {
    -u.ln() / lambda
}

/// Box-Muller transform, cosine branch.
pub fn box_muller(u1: f64, u2: f64) -> f64 {
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// Time to failure in hours for a rate given per year.
pub fn sample_time_to_failure(lambda: f64, stream: &mut RandomStream) -> Result<f64> {
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::Parameter(format!(
            "time to failure requires lambda > 0, got {lambda}"
        )));
    }
    let u = stream.uniform_open_closed();
    Ok(exponential_from_uniform(lambda, u) * HOURS_PER_YEAR)
}

pub fn sample_standard_normal(stream: &mut RandomStream) -> f64 {
    let u1 = stream.uniform_open_closed();
    let u2 = stream.uniform_closed_open();
    box_muller(u1, u2)
}

/// Normal repair time in hours, redrawn until strictly positive.
pub fn sample_repair_time(params: &ComponentReliability, stream: &mut RandomStream) -> f64 {
    loop {
        let t = sample_standard_normal(stream) * params.sigma_r + params.mu_r;
        if t > 0.0 {
            return t;
        }
    }
}

/// Operator response time in minutes.
///
/// `mu_rto == 0` returns 0 without touching the stream. Otherwise the normal
/// draw is repeated until nonnegative.
pub fn sample_rto(params: &RtoParameters, stream: &mut RandomStream) -> f64 {
    if params.mu_rto == 0.0 {
        return 0.0;
    }
    loop {
        let t = sample_standard_normal(stream) * params.sigma_rto + params.mu_rto;
        if t >= 0.0 {
            return t;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_inversion_examples() {
        assert_eq!(exponential_from_uniform(0.1, 1.0) * HOURS_PER_YEAR, 0.0);
        let t = exponential_from_uniform(0.1, (-0.1f64).exp()) * HOURS_PER_YEAR;
        assert!((t - 8760.0).abs() < 1e-9, "{t}");
    }

    #[test]
    fn box_muller_examples() {
        assert_eq!(box_muller(1.0, 0.37), 0.0);
        assert!((box_muller((-0.5f64).exp(), 0.0) - 1.0).abs() < 1e-15);
        assert!((box_muller((-0.5f64).exp(), 0.5) + 1.0).abs() < 1e-15);
    }

    #[test]
    fn repair_time_composition() {
        let p = ComponentReliability::new(0.1, 3.0, 0.6).unwrap();
        assert_eq!(0.0 * p.sigma_r + p.mu_r, 3.0);
        assert!((1.0 * p.sigma_r + p.mu_r - 3.6).abs() < 1e-15);
    }

    #[test]
    fn zero_rate_is_rejected() {
        let mut s = RandomStream::new(1);
        assert!(sample_time_to_failure(0.0, &mut s).is_err());
        assert!(sample_time_to_failure(-1.0, &mut s).is_err());
    }

    #[test]
    fn instant_operator_consumes_no_draws() {
        let mut s = RandomStream::new(99);
        let before = s.clone();
        assert_eq!(sample_rto(&RtoParameters::instant(), &mut s), 0.0);
        assert_eq!(s, before);
        sample_rto(&RtoParameters::new(10.0, 2.0).unwrap(), &mut s);
        assert_ne!(s, before);
    }

    #[test]
    fn parameter_invariants() {
        assert!(ComponentReliability::new(-0.1, 3.0, 0.6).is_err());
        assert!(ComponentReliability::new(0.1, 0.0, 0.0).is_err());
        assert!(ComponentReliability::new(0.1, 3.0, 3.0).is_err());
        assert!(ComponentReliability::new(0.0, 3.0, 0.6).is_ok());
        assert!(RtoParameters::new(0.0, 1.0).is_err());
        assert!(RtoParameters::new(-1.0, 0.0).is_err());
        assert!(RtoParameters::new(10.0, 2.0).is_ok());
    }

    #[test]
    fn substreams_are_distinct_and_reproducible() {
        let mut a = RandomStream::substream(7, 0, StreamPurpose::Branch, 3);
        let mut b = RandomStream::substream(7, 0, StreamPurpose::Branch, 3);
        let mut c = RandomStream::substream(7, 0, StreamPurpose::Branch, 4);
        let mut d = RandomStream::substream(7, 1, StreamPurpose::Branch, 3);
        let xa: Vec<f64> = (0..8).map(|_| a.uniform_closed_open()).collect();
        let xb: Vec<f64> = (0..8).map(|_| b.uniform_closed_open()).collect();
        let xc: Vec<f64> = (0..8).map(|_| c.uniform_closed_open()).collect();
        let xd: Vec<f64> = (0..8).map(|_| d.uniform_closed_open()).collect();
        assert_eq!(xa, xb);
        assert_ne!(xa, xc);
        assert_ne!(xa, xd);
    }

    #[test]
    fn uniform_ranges() {
        let mut s = RandomStream::new(3);
        for _ in 0..10_000 {
            let u = s.uniform_open_closed();
            assert!(u > 0.0 && u <= 1.0);
            let v = s.uniform_closed_open();
            assert!((0.0..1.0).contains(&v));
        }
    }
}
