use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Knobs controlling edge construction for both graphs.
///
/// `d_star` is the affinity at which a signed weight crosses zero;
/// `window_radius` bounds the spatial search box; `max_neighbors` caps the
/// out-degree per node.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeParams {
    pub d_star: f64,
    pub window_radius: usize,
    pub max_neighbors: usize,
}

impl Default for EdgeParams {
    fn default() -> Self {
        EdgeParams {
            d_star: 4.0,
            window_radius: 3,
            max_neighbors: 8,
        }
    }
}

impl EdgeParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.d_star.is_finite() && self.d_star > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "d_star must be finite and positive, got {}",
                self.d_star
            )));
        }
        if self.window_radius < 1 {
            return Err(Error::InvalidParameter(
                "window_radius must be at least 1".into(),
            ));
        }
        if self.max_neighbors < 1 {
            return Err(Error::InvalidParameter(
                "max_neighbors must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// Signed edge weight: a shifted sigmoid of the affinity,
/// `-2 / (1 + exp(-(d - d*))) + 1`, algebraically `-tanh((d - d*) / 2)`.
///
/// Zero at `d = d*`, decreasing in `d`, and held strictly inside (-1, 1)
/// even where the sigmoid saturates in floating point.
pub fn signed_weight(d: f64, params: &EdgeParams) -> f64 {
    let t = d - params.d_star;
    let w = -2.0 / (1.0 + (-t).exp()) + 1.0;
    let cap = 1.0 - f64::EPSILON;
    w.clamp(-cap, cap)
}

/// Positive edge weight `exp(-d')`: 1 at zero affinity, decaying as the
/// affinity grows.
pub fn unsigned_weight(d_prime: f64) -> f64 {
    (-d_prime).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(d_star: f64) -> EdgeParams {
        EdgeParams {
            d_star,
            ..EdgeParams::default()
        }
    }

    #[test]
    fn zero_at_midpoint() {
        assert_eq!(signed_weight(4.0, &params(4.0)), 0.0);
        assert_eq!(signed_weight(0.25, &params(0.25)), 0.0);
    }

    #[test]
    fn known_value_two_past_midpoint() {
        let w = signed_weight(6.0, &params(4.0));
        assert!((w - (-0.761594)).abs() < 1e-6, "got {w}");
        assert!((w - (-(1.0f64).tanh())).abs() <= 1e-12);
    }

    #[test]
    fn matches_tanh_form_across_range() {
        let p = params(4.0);
        for i in 0..=1000 {
            let d = -50.0 + i as f64 * 0.1;
            let want = -((d - p.d_star) / 2.0).tanh();
            let got = signed_weight(d, &p);
            assert!((got - want).abs() <= 1e-12, "d={d}: {got} vs {want}");
        }
    }

    #[test]
    fn saturation_stays_strictly_inside_unit_interval() {
        let p = params(1.0);
        let far_low = signed_weight(-1e6, &p);
        let far_high = signed_weight(1e6, &p);
        assert!(far_low < 1.0 && far_low > 0.99);
        assert!(far_high > -1.0 && far_high < -0.99);
    }

    #[test]
    fn signed_weight_decreasing() {
        let p = params(2.0);
        let mut prev = signed_weight(-10.0, &p);
        for i in 1..=200 {
            let w = signed_weight(-10.0 + i as f64 * 0.1, &p);
            assert!(w < prev);
            prev = w;
        }
    }

    #[test]
    fn unsigned_weight_known_values() {
        assert_eq!(unsigned_weight(0.0), 1.0);
        assert!((unsigned_weight(std::f64::consts::LN_2) - 0.5).abs() <= 1e-15);
        let w = unsigned_weight(10.0);
        assert!((w - 4.5400e-5).abs() / 4.5400e-5 < 1e-4, "got {w}");
    }

    #[test]
    fn unsigned_weight_decreasing_and_positive() {
        let mut prev = unsigned_weight(-1.0);
        for i in 1..=100 {
            let w = unsigned_weight(-1.0 + i as f64 * 0.25);
            assert!(w < prev && w > 0.0);
            prev = w;
        }
    }

    #[test]
    fn params_validation() {
        assert!(EdgeParams::default().validate().is_ok());
        assert!(params(0.0).validate().is_err());
        assert!(params(-1.0).validate().is_err());
        assert!(EdgeParams {
            window_radius: 0,
            ..EdgeParams::default()
        }
        .validate()
        .is_err());
        assert!(EdgeParams {
            max_neighbors: 0,
            ..EdgeParams::default()
        }
        .validate()
        .is_err());
    }
}
