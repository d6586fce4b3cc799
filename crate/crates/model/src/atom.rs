use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrapKind {
    /// Fixed tweezer from the spatial light modulator.
    #[serde(alias = "static_slm")]
    Static,
    /// Tweezer at a crossed AOD row/column tone pair.
    #[serde(alias = "mobile_aod")]
    Mobile,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sublattice {
    A,
    B,
}

impl Sublattice {
    pub fn other(self) -> Self {
        match self {
            Sublattice::A => Sublattice::B,
            Sublattice::B => Sublattice::A,
        }
    }
}

/// One atom of the register. Positions are in micrometers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtomRecord {
    pub id: u32,
    pub trap: TrapKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub row: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub col: Option<u32>,
    pub x: f64,
    pub y: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sublattice: Option<Sublattice>,
}

impl AtomRecord {
    pub fn fixed(id: u32, x: f64, y: f64) -> Self {
        AtomRecord { id, trap: TrapKind::Static, row: None, col: None, x, y, sublattice: None }
    }

    pub fn mobile(id: u32, row: u32, col: u32, x: f64, y: f64) -> Self {
        AtomRecord { id, trap: TrapKind::Mobile, row: Some(row), col: Some(col), x, y, sublattice: None }
    }

    pub fn with_sublattice(mut self, s: Sublattice) -> Self {
        self.sublattice = Some(s);
        self
    }

    pub fn position(&self) -> (f64, f64) {
        (self.x, self.y)
    }

    pub fn is_mobile(&self) -> bool {
        self.trap == TrapKind::Mobile
    }
}
