//! Parton-picture observables: squeeze geometry, width growth and the ratio of
//! the external interaction time to the internal oscillation period.
//!
//! Times are dimensionless scale factors relative to the rest frame.

use std::f64::consts::FRAC_1_SQRT_2;

use serde::{Deserialize, Serialize};

use crate::density::{marginal_std_dev, marginalize, ProbabilityDensity1D};
use crate::error::Result;
use crate::kinematics::{rapidity_from_energy, Rapidity};
use crate::numerics::GridSpec;
use crate::wavefunction::BoostedGroundState;

/// Ellipse traced by the squeezed distribution in the light-cone plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SqueezeGeometry {
    pub eta: Rapidity,
    pub major_axis_scale: f64,
    pub minor_axis_scale: f64,
    /// Unit vector of the major axis in the (z, t) plane.
    pub major_axis_direction: [f64; 2],
    pub minor_axis_direction: [f64; 2],
}

/// Unit vector of the u axis, (1, 1)/√2, in the (z, t) plane.
pub const U_AXIS: [f64; 2] = [FRAC_1_SQRT_2, FRAC_1_SQRT_2];
/// Unit vector of the v axis, (1, −1)/√2, in the (z, t) plane.
pub const V_AXIS: [f64; 2] = [FRAC_1_SQRT_2, -FRAC_1_SQRT_2];

pub fn squeeze_geometry(eta: Rapidity) -> SqueezeGeometry {
    let e = eta.value();
    let (major, minor) = if e >= 0.0 { (U_AXIS, V_AXIS) } else { (V_AXIS, U_AXIS) };
    SqueezeGeometry {
        eta,
        major_axis_scale: e.abs().exp(),
        minor_axis_scale: (-e.abs()).exp(),
        major_axis_direction: major,
        minor_axis_direction: minor,
    }
}

/// Standard deviation of the z marginal, (cosh 2η / 2)^{1/2}.
pub fn spatial_width(eta: Rapidity) -> f64 {
    marginal_std_dev(eta)
}

fn width_grid(eta: Rapidity) -> GridSpec {
    crate::density::default_grid(eta)
}

/// q_z marginal of |φ_η(q_z, q_0)|² by quadrature over q_0.
pub fn momentum_marginal(eta: Rapidity) -> ProbabilityDensity1D {
    let state = BoostedGroundState::new(eta);
    let grid = width_grid(eta);
    // q_0 grid must resolve the conditional width (2 cosh 2η)^{-1/2}
    let sigma = 1.0 / (2.0 * (2.0 * eta.value()).cosh()).sqrt();
    let step = grid.spacing().min(0.5 * sigma);
    let half = grid.max + 12.0 * sigma;
    let q0_grid = GridSpec::symmetric(half, (2.0 * half / step).ceil() as usize + 1)
        .expect("derived grid is valid");
    let values = marginalize(|qz, q0| state.phi(qz, q0).powi(2), &grid, &q0_grid);
    ProbabilityDensity1D { grid, values }
}

/// Standard deviation of the q_z marginal of |φ_η|², by quadrature.
pub fn momentum_width(eta: Rapidity) -> f64 {
    momentum_marginal(eta).std_dev()
}

/// Standard deviation of the z marginal of |ψ_η|², by quadrature.
pub fn spatial_width_numeric(eta: Rapidity) -> Result<f64> {
    Ok(crate::density::marginal_numeric(eta, &width_grid(eta))?.std_dev())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecoherenceReport {
    pub eta: Rapidity,
    /// Oscillation period relative to the rest frame, e^η.
    pub period_dilation: f64,
    /// Interaction time with an external signal, e^{−η}.
    pub interaction_time_scale: f64,
    /// interaction_time_scale / period_dilation = e^{−2η}.
    pub ratio: f64,
    pub beam_energy: Option<f64>,
    pub mass: Option<f64>,
}

pub fn decoherence_report(eta: Rapidity) -> DecoherenceReport {
    let period_dilation = eta.value().exp();
    let interaction_time_scale = (-eta.value()).exp();
    DecoherenceReport {
        eta,
        period_dilation,
        interaction_time_scale,
        ratio: interaction_time_scale / period_dilation,
        beam_energy: None,
        mass: None,
    }
}

/// Decoherence ratio for a beam particle of the given energy and mass (GeV).
pub fn beam_report(energy: f64, mass: f64) -> Result<DecoherenceReport> {
    let eta = rapidity_from_energy(energy, mass)?;
    Ok(DecoherenceReport {
        beam_energy: Some(energy),
        mass: Some(mass),
        ..decoherence_report(eta)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::marginal_numeric;
    use crate::kinematics::{boost_light_cone, LightConeCoords, PROTON_MASS_GEV};
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn eta(x: f64) -> Rapidity {
        Rapidity::new(x).unwrap()
    }

    #[test]
    fn squeeze_examples() {
        let g = squeeze_geometry(eta(0.0));
        assert_eq!((g.major_axis_scale, g.minor_axis_scale), (1.0, 1.0));
        let g = squeeze_geometry(eta(2f64.ln()));
        assert_abs_diff_eq!(g.major_axis_scale, 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(g.minor_axis_scale, 0.5, epsilon = 1e-15);
        assert_eq!(g.major_axis_direction, U_AXIS);
        let g = squeeze_geometry(eta(3.0));
        assert_abs_diff_eq!(g.major_axis_scale * g.minor_axis_scale, 1.0, epsilon = 1e-14);
        let g = squeeze_geometry(eta(-1.0));
        assert_eq!(g.major_axis_direction, V_AXIS);
        assert!(g.major_axis_scale > 1.0);
    }

    #[test]
    fn squeeze_axes_follow_light_cone_boost() {
        for e in [0.3, 1.7] {
            let g = squeeze_geometry(eta(e));
            let u = boost_light_cone(LightConeCoords { u: 1.0, v: 0.0 }, eta(e));
            let v = boost_light_cone(LightConeCoords { u: 0.0, v: 1.0 }, eta(e));
            assert_abs_diff_eq!(g.major_axis_scale, u.u, epsilon = 1e-14);
            assert_abs_diff_eq!(g.minor_axis_scale, v.v, epsilon = 1e-14);
        }
    }

    #[test]
    fn spatial_width_examples() {
        assert_abs_diff_eq!(spatial_width(eta(0.0)), FRAC_1_SQRT_2, epsilon = 1e-15);
        assert_abs_diff_eq!(spatial_width(eta(1.0)), 1.371_531_204_727_7, epsilon = 1e-14);
        assert!(spatial_width(eta(0.5)) < spatial_width(eta(-0.8)));
    }

    #[test]
    fn momentum_width_examples() {
        assert_abs_diff_eq!(momentum_width(eta(0.0)), FRAC_1_SQRT_2, epsilon = 1e-9);
        assert_abs_diff_eq!(momentum_width(eta(2.0)), 3.695_147_685_547_662, epsilon = 1e-6);
        for e in [0.0, 0.5, 1.0, 2.0] {
            assert_relative_eq!(momentum_width(eta(e)) / spatial_width(eta(e)), 1.0, epsilon = 1e-6);
        }
    }

    #[test]
    fn spatial_second_moment_matches_quadrature() {
        for e in [0.0, 1.0, 2.0] {
            let m = marginal_numeric(eta(e), &width_grid(eta(e))).unwrap();
            assert!((m.variance() - spatial_width(eta(e)).powi(2)).abs() < 1e-6);
        }
    }

    #[test]
    fn decoherence_examples() {
        let r = decoherence_report(eta(0.0));
        assert_eq!(r.ratio, 1.0);
        let r = decoherence_report(eta(10f64.ln() / 2.0));
        assert_abs_diff_eq!(r.ratio, 0.1, epsilon = 1e-15);
        let r = decoherence_report(eta(10f64.ln()));
        assert_abs_diff_eq!(r.ratio, 0.01, epsilon = 1e-15);
        let r = decoherence_report(eta(7.561));
        assert_relative_eq!(r.ratio, (-2.0f64 * 7.561).exp(), max_relative = 1e-14);
        assert!((r.ratio - 2.7e-7).abs() < 0.05e-7);
        assert_eq!(r.ratio, r.interaction_time_scale / r.period_dilation);
    }

    #[test]
    fn ratio_decreases_with_rapidity() {
        let mut last = decoherence_report(eta(0.0)).ratio;
        for k in 1..20 {
            let r = decoherence_report(eta(0.25 * k as f64)).ratio;
            assert!(r < last && r < 1.0);
            assert_eq!(decoherence_report(eta(-0.25 * k as f64)).ratio.min(1.0), 1.0);
            last = r;
        }
    }

    #[test]
    fn beam_examples() {
        let r = beam_report(5.0, 5.0).unwrap();
        assert_eq!(r.ratio, 1.0);
        let r = beam_report(900.0, PROTON_MASS_GEV).unwrap();
        assert!(r.ratio > 2.6e-7 && r.ratio < 2.8e-7, "{}", r.ratio);
        assert_eq!(r.beam_energy, Some(900.0));
        assert_eq!(r.mass, Some(PROTON_MASS_GEV));

        let double = beam_report(1800.0, PROTON_MASS_GEV).unwrap();
        assert_relative_eq!(r.ratio / double.ratio, 4.0, max_relative = 1e-6);
        assert!(beam_report(0.5, PROTON_MASS_GEV).is_err());
    }
}
