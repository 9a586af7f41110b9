//! Gaussian plane-wave excitation.

use serde::{Deserialize, Serialize};

use crate::pml::{c0, eta0};

/// Base-band Gaussian pulse `E0 exp(-(t - t0)^2 / (4 tau^2))` carried by an
/// x-polarized plane wave travelling in +z through vacuum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianPulse {
    /// Peak amplitude `E0` (V/m).
    pub amplitude: f64,
    /// Width parameter `tau` (s).
    pub tau: f64,
    /// Peak time `t0` (s).
    pub t0: f64,
}

impl GaussianPulse {
    /// `E0 = 1 V/m`, `tau = 66.67 ps`, `t0 = 15 tau`.
    pub fn standard() -> Self {
        let tau = 66.67e-12;
        Self {
            amplitude: 1.0,
            tau,
            t0: 15.0 * tau,
        }
    }

    pub fn value(&self, t: f64) -> f64 {
        let s = t - self.t0;
        self.amplitude * (-s * s / (4.0 * self.tau * self.tau)).exp()
    }

    /// Half-width of the interval on which the pulse exceeds `level * E0`.
    pub fn half_width(&self, level: f64) -> f64 {
        2.0 * self.tau * (-level.ln()).sqrt()
    }

    /// Incident `(E, H)` at height `z` and time `t`.
    pub fn incident(&self, z: f64, t: f64) -> ([f64; 3], [f64; 3]) {
        let e = self.value(t - z / c0());
        ([e, 0.0, 0.0], [0.0, e / eta0(), 0.0])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn peak_is_unit_amplitude() {
        let g = GaussianPulse::standard();
        assert_eq!(g.value(g.t0), 1.0);
    }

    #[test]
    fn quiet_start() {
        let g = GaussianPulse::standard();
        let expect = (-56.25f64).exp();
        assert!((g.value(0.0) - expect).abs() < 1e-12 * expect);
        assert!(g.value(0.0) < 5e-25);
    }

    #[test]
    fn half_width_hits_level() {
        let g = GaussianPulse::standard();
        let w = g.half_width(1e-3);
        assert!((g.value(g.t0 + w) - 1e-3).abs() < 1e-15);
        assert!((g.value(g.t0 - w) - 1e-3).abs() < 1e-15);
    }

    #[test]
    fn incident_wave_travels_forward() {
        let g = GaussianPulse::standard();
        let (e, h) = g.incident(0.03, g.t0 + 0.03 / c0());
        assert!((e[0] - 1.0).abs() < 1e-12);
        assert!((h[1] * eta0() - 1.0).abs() < 1e-12);
    }
}
