//! Model constants and velocity regimes.

use serde::{Deserialize, Serialize};

use crate::error::{Result, TelegraphError};

/// Relative threshold below which a velocity is treated as zero.
const ZERO_VELOCITY_TOL: f64 = 1e-12;

/// Sign pattern of the two velocities. Selects which closed forms apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum VelocityRegime {
    /// `gamma0 > gamma1 > 0`: the process is non-decreasing.
    BothPositive,
    /// `0 > gamma0 > gamma1`: the process is non-increasing.
    BothNegative,
    /// `gamma0 > 0 > gamma1`.
    OppositeSigns,
}

/// Initial (or current) state of the driving two-state Markov chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum State {
    Zero,
    One,
}

impl State {
    pub fn index(self) -> usize {
        match self {
            State::Zero => 0,
            State::One => 1,
        }
    }

    pub fn other(self) -> State {
        match self {
            State::Zero => State::One,
            State::One => State::Zero,
        }
    }
}

impl TryFrom<u8> for State {
    type Error = TelegraphError;

    fn try_from(value: u8) -> Result<Self> {
        match value {
            0 => Ok(State::Zero),
            1 => Ok(State::One),
            other => Err(TelegraphError::InvalidState(other)),
        }
    }
}

/// Switching rates and velocities of an asymmetric telegraph process.
///
/// Invariants enforced at construction: both rates are positive and finite,
/// `gamma0 > gamma1`, and neither velocity is (numerically) zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct TelegraphParams {
    lambda0: f64,
    lambda1: f64,
    gamma0: f64,
    gamma1: f64,
}

#[derive(Serialize, Deserialize)]
struct RawParams {
    lambda0: f64,
    lambda1: f64,
    gamma0: f64,
    gamma1: f64,
}

impl TryFrom<RawParams> for TelegraphParams {
    type Error = TelegraphError;

    fn try_from(raw: RawParams) -> Result<Self> {
        TelegraphParams::new(raw.lambda0, raw.lambda1, raw.gamma0, raw.gamma1)
    }
}

impl From<TelegraphParams> for RawParams {
    fn from(p: TelegraphParams) -> Self {
        RawParams {
            lambda0: p.lambda0,
            lambda1: p.lambda1,
            gamma0: p.gamma0,
            gamma1: p.gamma1,
        }
    }
}

impl TelegraphParams {
    pub fn new(lambda0: f64, lambda1: f64, gamma0: f64, gamma1: f64) -> Result<Self> {
        let rate_ok = |l: f64| l.is_finite() && l > 0.0;
        if !rate_ok(lambda0) || !rate_ok(lambda1) {
            return Err(TelegraphError::InvalidRate { lambda0, lambda1 });
        }
        if !gamma0.is_finite() || !gamma1.is_finite() || gamma0 <= gamma1 {
            return Err(TelegraphError::VelocityOrder { gamma0, gamma1 });
        }
        let scale = gamma0.abs().max(gamma1.abs()).max(1.0);
        if gamma0.abs() < ZERO_VELOCITY_TOL * scale || gamma1.abs() < ZERO_VELOCITY_TOL * scale {
            return Err(TelegraphError::ZeroVelocity { gamma0, gamma1 });
        }
        Ok(TelegraphParams {
            lambda0,
            lambda1,
            gamma0,
            gamma1,
        })
    }

    /// The symmetric process with unit rates and velocities `+1`, `-1`.
    pub fn symmetric_unit() -> Self {
        TelegraphParams {
            lambda0: 1.0,
            lambda1: 1.0,
            gamma0: 1.0,
            gamma1: -1.0,
        }
    }

    pub fn lambda0(&self) -> f64 {
        self.lambda0
    }

    pub fn lambda1(&self) -> f64 {
        self.lambda1
    }

    pub fn gamma0(&self) -> f64 {
        self.gamma0
    }

    pub fn gamma1(&self) -> f64 {
        self.gamma1
    }

    pub fn rate(&self, state: State) -> f64 {
        match state {
            State::Zero => self.lambda0,
            State::One => self.lambda1,
        }
    }

    pub fn velocity(&self, state: State) -> f64 {
        match state {
            State::Zero => self.gamma0,
            State::One => self.gamma1,
        }
    }

    pub fn regime(&self) -> VelocityRegime {
        classify_regime(self)
    }

    /// Parameters of the mirrored process `-Γ` with the state labels swapped:
    /// `gamma0 -> -gamma1`, `gamma1 -> -gamma0`, `lambda0 <-> lambda1`.
    ///
    /// A law of `Γ` started in state `i` at level `y` equals the law of the
    /// mirrored process started in state `1 - i` at level `-y`.
    pub fn interchanged(&self) -> Self {
        TelegraphParams {
            lambda0: self.lambda1,
            lambda1: self.lambda0,
            gamma0: -self.gamma1,
            gamma1: -self.gamma0,
        }
    }

    /// Stationary mean velocity `(gamma0*lambda1 + gamma1*lambda0)/(lambda0 + lambda1)`.
    pub fn drift(&self) -> f64 {
        (self.gamma0 * self.lambda1 + self.gamma1 * self.lambda0) / (self.lambda0 + self.lambda1)
    }
}

pub fn classify_regime(params: &TelegraphParams) -> VelocityRegime {
    if params.gamma1 > 0.0 {
        VelocityRegime::BothPositive
    } else if params.gamma0 < 0.0 {
        VelocityRegime::BothNegative
    } else {
        VelocityRegime::OppositeSigns
    }
}
