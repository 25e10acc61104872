//! Energy statistics along a trajectory.

use crate::integrators::Trajectory;

/// Mean, standard deviation, and maximum drift `|H(t) - H(0)|` of the
/// energy samples of a trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyStats {
    pub mean: f64,
    pub std: f64,
    pub max_drift: f64,
}

/// Computes [`EnergyStats`] from a sequence of energy samples; requires at
/// least two samples.
pub fn energy_stats_of(energies: &[f64]) -> EnergyStats {
    assert!(energies.len() >= 2, "need at least two energy samples");
    let n = energies.len() as f64;
    let mean = energies.iter().sum::<f64>() / n;
    let var = energies.iter().map(|h| (h - mean).powi(2)).sum::<f64>() / n;
    let h0 = energies[0];
    let max_drift = energies
        .iter()
        .map(|h| (h - h0).abs())
        .fold(0.0, f64::max);
    EnergyStats {
        mean,
        std: var.sqrt(),
        max_drift,
    }
}

pub fn energy_stats(trajectory: &Trajectory) -> EnergyStats {
    energy_stats_of(&trajectory.energies())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_series_has_zero_spread() {
        let stats = energy_stats_of(&[0.75; 10]);
        assert_eq!(stats.mean, 0.75);
        assert_eq!(stats.std, 0.0);
        assert_eq!(stats.max_drift, 0.0);
    }

    #[test]
    fn drift_is_relative_to_the_first_sample() {
        let stats = energy_stats_of(&[1.0, 1.5, 0.8]);
        assert!((stats.max_drift - 0.5).abs() < 1e-15);
    }
}
