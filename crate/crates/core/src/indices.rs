//! Failure Rate, Availability, SAIDI and SAIFI.

use crate::engine::ReplicationResult;
use crate::error::{Error, Result};
use crate::sampling::HOURS_PER_YEAR;
use crate::topology::ElectricalNetwork;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReliabilityIndices {
    /// System failures per year.
    pub failure_rate: f64,
    /// Fraction of the horizon with every customer supplied.
    pub availability: f64,
    /// `-log10(1 - availability)`; infinite when availability is 1.
    pub nines: f64,
    /// Hours per system customer per year.
    pub saidi: f64,
    /// Interruptions per system customer per year.
    pub saifi: f64,
}

/// `-log10(1 - availability)`, with `f64::INFINITY` for a perfect system.
pub fn number_of_nines(availability: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&availability) {
        return Err(Error::Availability(availability));
    }
    if availability == 1.0 {
        return Ok(f64::INFINITY);
    }
    Ok(-(1.0 - availability).log10())
}

/// Indices of one replication. Load points are branches; `N_i` is the
/// branch's customer count.
pub fn compute_indices(
    result: &ReplicationResult,
    net: &ElectricalNetwork,
    horizon_years: f64,
) -> ReliabilityIndices {
    let horizon_hours = horizon_years * HOURS_PER_YEAR;
    let availability = (1.0 - result.down_hours / horizon_hours).clamp(0.0, 1.0);
    let total_customers = net.total_customers() as f64;
    let (mut duration_sum, mut frequency_sum) = (0.0, 0.0);
    for b in net.branches() {
        if let Some(t) = result.tallies.get(&b.id) {
            let n = f64::from(b.customers);
            duration_sum += t.outage_hours / horizon_years * n;
            frequency_sum += t.interruptions as f64 / horizon_years * n;
        }
    }
    let (saidi, saifi) = if total_customers > 0.0 {
        (duration_sum / total_customers, frequency_sum / total_customers)
    } else {
        (0.0, 0.0)
    };
    ReliabilityIndices {
        failure_rate: result.failure_events as f64 / horizon_years,
        availability,
        nines: number_of_nines(availability).expect("availability clamped to [0, 1]"),
        saidi,
        saifi,
    }
}

/// Sample statistics of one index.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub count: usize,
    pub mean: f64,
    /// Sample standard deviation (n - 1); 0 for a single sample.
    pub std: f64,
    pub min: f64,
    pub max: f64,
    pub p5: f64,
    pub p50: f64,
    pub p95: f64,
}

impl Summary {
    fn of(values: &[f64]) -> Self {
        let n = values.len();
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let mean = values.iter().sum::<f64>() / n as f64;
        let std = if n > 1 {
            (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
        } else {
            0.0
        };
        Self {
            count: n,
            mean,
            std,
            min: sorted[0],
            max: sorted[n - 1],
            p5: percentile(&sorted, 0.05),
            p50: percentile(&sorted, 0.50),
            p95: percentile(&sorted, 0.95),
        }
    }

    /// Standard error of the mean.
    pub fn sem(&self) -> f64 {
        self.std / (self.count as f64).sqrt()
    }
}

/// Linear interpolation between closest ranks.
fn percentile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IndexDistribution {
    pub failure_rate: Summary,
    pub availability: Summary,
    pub saidi: Summary,
    pub saifi: Summary,
}

/// Mean value of each index across replications.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IndexMeans {
    pub failure_rate: f64,
    pub availability: f64,
    /// Nines of the mean availability.
    pub nines: f64,
    pub saidi: f64,
    pub saifi: f64,
}

impl IndexDistribution {
    pub fn samples(&self) -> usize {
        self.saidi.count
    }

    pub fn means(&self) -> IndexMeans {
        IndexMeans {
            failure_rate: self.failure_rate.mean,
            availability: self.availability.mean,
            nines: number_of_nines(self.availability.mean.clamp(0.0, 1.0))
                .expect("clamped availability"),
            saidi: self.saidi.mean,
            saifi: self.saifi.mean,
        }
    }
}

pub fn aggregate(samples: &[ReliabilityIndices]) -> Result<IndexDistribution> {
    if samples.is_empty() {
        return Err(Error::EmptySamples);
    }
    let column = |f: fn(&ReliabilityIndices) -> f64| -> Summary {
        Summary::of(&samples.iter().map(f).collect::<Vec<_>>())
    };
    Ok(IndexDistribution {
        failure_rate: column(|s| s.failure_rate),
        availability: column(|s| s.availability),
        saidi: column(|s| s.saidi),
        saifi: column(|s| s.saifi),
    })
}

/// Relative change of a variant against a baseline, in percent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PercentDifference {
    /// Loss of availability measured on the nines scale:
    /// `100 * (nines_base - nines_variant) / nines_base`.
    pub availability: f64,
    /// `100 * (saidi_variant - saidi_base) / saidi_base`.
    pub saidi: f64,
}

pub fn percent_difference(baseline: &IndexMeans, variant: &IndexMeans) -> Result<PercentDifference> {
    if !(baseline.nines.is_finite() && baseline.nines != 0.0) {
        return Err(Error::ZeroBaseline {
            index: "availability (nines)",
        });
    }
    if !(baseline.saidi.is_finite() && baseline.saidi != 0.0) {
        return Err(Error::ZeroBaseline { index: "SAIDI" });
    }
    Ok(PercentDifference {
        availability: 100.0 * (baseline.nines - variant.nines) / baseline.nines,
        saidi: 100.0 * (variant.saidi - baseline.saidi) / baseline.saidi,
    })
}
