use serde::{Deserialize, Serialize};

use crate::error::StabilizerError;

/// Per-qubit Pauli and loss probabilities for one application of a channel.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Channel {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub loss: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    None,
    X,
    Y,
    Z,
    Loss,
}

impl Channel {
    pub fn new(x: f64, y: f64, z: f64, loss: f64) -> Self {
        Channel { x, y, z, loss }
    }

    pub fn total(&self) -> f64 {
        self.x + self.y + self.z + self.loss
    }

    pub fn is_zero(&self) -> bool {
        self.total() == 0.0
    }

    /// Maps a uniform draw in [0, 1) to a fault.
    pub fn fault(&self, u: f64) -> Fault {
        let mut acc = self.x;
        if u < acc {
            return Fault::X;
        }
        acc += self.y;
        if u < acc {
            return Fault::Y;
        }
        acc += self.z;
        if u < acc {
            return Fault::Z;
        }
        acc += self.loss;
        if u < acc {
            return Fault::Loss;
        }
        Fault::None
    }

    fn check(&self, what: &str) -> Result<(), StabilizerError> {
        let ok = [self.x, self.y, self.z, self.loss].iter().all(|p| (0.0..=1.0).contains(p)) && self.total() <= 1.0;
        if ok {
            Ok(())
        } else {
            Err(StabilizerError::InvalidNoise(format!("{what} probabilities out of range")))
        }
    }
}

/// Where the two channels fire.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Accounting {
    /// Both channels fire once per two-qubit gate layer on every atom still present.
    PerGateLayer,
    /// Once per two-qubit gate layer: the gate channel on CZ participants, ambient on every atom.
    GateParticipants,
    /// Gate channel on CZ participants; ambient on every atom after each rotation or CZ
    /// layer. Echoes count as part of the CZ layer and moves carry no channel.
    #[default]
    GateLayers,
    /// Ambient fires after every non-measurement layer; the gate channel only on CZ participants.
    PerCircuitLayer,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    pub tq_layer: Channel,
    pub ambient_layer: Channel,
    pub init_loss: f64,
    #[serde(default)]
    pub accounting: Accounting,
}

impl NoiseModel {
    pub fn zero() -> Self {
        NoiseModel {
            tq_layer: Channel::default(),
            ambient_layer: Channel::default(),
            init_loss: 0.0,
            accounting: Accounting::default(),
        }
    }

    /// Empirical rates used for the surface and toric code comparisons.
    pub fn empirical() -> Self {
        NoiseModel {
            tq_layer: Channel::new(0.002, 0.002, 0.005, 0.005),
            ambient_layer: Channel::new(0.001, 0.001, 0.004, 0.002),
            init_loss: 0.01,
            accounting: Accounting::default(),
        }
    }

    /// Every rate multiplied by `f`.
    pub fn scaled(&self, f: f64) -> Self {
        let ch = |c: &Channel| Channel::new(c.x * f, c.y * f, c.z * f, c.loss * f);
        NoiseModel { tq_layer: ch(&self.tq_layer), ambient_layer: ch(&self.ambient_layer), init_loss: self.init_loss * f, ..*self }
    }

    pub fn with_accounting(mut self, a: Accounting) -> Self {
        self.accounting = a;
        self
    }

    pub fn is_zero(&self) -> bool {
        self.tq_layer.is_zero() && self.ambient_layer.is_zero() && self.init_loss == 0.0
    }

    pub fn validate(&self) -> Result<(), StabilizerError> {
        self.tq_layer.check("tq_layer")?;
        self.ambient_layer.check("ambient_layer")?;
        if !(0.0..=1.0).contains(&self.init_loss) {
            return Err(StabilizerError::InvalidNoise("init_loss out of range".into()));
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self, StabilizerError> {
        let m: NoiseModel = serde_json::from_str(text)?;
        m.validate()?;
        Ok(m)
    }
}
