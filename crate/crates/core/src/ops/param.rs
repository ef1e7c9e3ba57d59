use crate::error::{check_range, Result};
#[allow(unused_imports)]
use num_traits::Float;

/// Parameter of one of the three primitive Gaussian transformations.
///
/// The duality relations `xi = sqrt(1 - t) = tanh r` and `g = 1/t = cosh^2 r`
/// link the three parameterizations.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SqueezerParam {
    BeamSplitter { t: f64 },
    TwoModeSqueezer { g: f64 },
    SingleModeSqueezer { r: f64 },
}

impl SqueezerParam {
    pub fn beam_splitter(t: f64) -> Result<Self> {
        check_transmissivity(t)?;
        Ok(Self::BeamSplitter { t })
    }

    pub fn two_mode_squeezer(g: f64) -> Result<Self> {
        check_range("g", g, g >= 1.0, "gain must be at least 1")?;
        Ok(Self::TwoModeSqueezer { g })
    }

    pub fn single_mode_squeezer(r: f64) -> Result<Self> {
        check_range("r", r, true, "squeezing degree must be finite")?;
        Ok(Self::SingleModeSqueezer { r })
    }

    /// The two-mode squeezer dual to this beam splitter under partial time
    /// reversal. Other kinds are returned unchanged.
    pub fn dual(self) -> Self {
        match self {
            Self::BeamSplitter { t } => Self::TwoModeSqueezer { g: 1.0 / t },
            other => other,
        }
    }
}

pub(crate) fn check_transmissivity(t: f64) -> Result<()> {
    check_range("t", t, t > 0.0 && t <= 1.0, "transmissivity must lie in (0, 1]")
}

pub(crate) fn check_xi(xi: f64) -> Result<()> {
    check_range(
        "xi",
        xi,
        (0.0..1.0).contains(&xi),
        "squeezing parameter must lie in [0, 1)",
    )
}

/// `g = 1/t`.
pub fn gain_from_transmissivity(t: f64) -> f64 {
    1.0 / t
}

/// `r = arccosh(sqrt g)`.
pub fn r_from_gain(g: f64) -> f64 {
    g.sqrt().acosh()
}

/// `r = arctanh(sqrt(1 - t))`, the squeezing degree of the dual squeezer.
pub fn r_from_transmissivity(t: f64) -> f64 {
    (1.0 - t).sqrt().atanh()
}

/// `xi = tanh r`.
pub fn xi_from_r(r: f64) -> f64 {
    r.tanh()
}

/// `r = arctanh xi`.
pub fn r_from_xi(xi: f64) -> f64 {
    xi.atanh()
}
