use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Per-gate error probabilities, selected by gate arity.
///
/// After every gate each acted qubit first suffers a bit flip with the
/// bit-flip probability, then is replaced by the maximally mixed state with
/// the depolarizing probability. Two-qubit gates use the `_2q` fields for
/// both of their qubits.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseModel {
    #[serde(default)]
    pub p_bitflip_1q: f64,
    #[serde(default)]
    pub p_bitflip_2q: f64,
    #[serde(default)]
    pub p_depol_1q: f64,
    #[serde(default)]
    pub p_depol_2q: f64,
}

/// Names accepted by [`NoiseModel::preset`].
pub const PRESET_NAMES: [&str; 5] = ["none", "bf", "sq-depol-1", "sq-depol-2", "mixed"];

impl NoiseModel {
    pub fn new(p_bitflip_1q: f64, p_bitflip_2q: f64, p_depol_1q: f64, p_depol_2q: f64) -> Result<Self> {
        let m = Self {
            p_bitflip_1q,
            p_bitflip_2q,
            p_depol_1q,
            p_depol_2q,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn noiseless() -> Self {
        Self::default()
    }

    /// Bit flips after every gate, 10⁻⁵ for both arities.
    pub fn bit_flip() -> Self {
        Self {
            p_bitflip_1q: 1e-5,
            p_bitflip_2q: 1e-5,
            ..Self::default()
        }
    }

    /// Depolarizing single-qubit gates and bit-flipping CNOTs at rate `p`.
    pub fn single_qubit_depolarizing(p: f64) -> Self {
        Self {
            p_depol_1q: p,
            p_bitflip_2q: p,
            ..Self::default()
        }
    }

    /// Single-qubit gates both depolarize and flip at 5·10⁻⁵; CNOTs flip at 5·10⁻⁵.
    pub fn mixed() -> Self {
        Self {
            p_bitflip_1q: 5e-5,
            p_bitflip_2q: 5e-5,
            p_depol_1q: 5e-5,
            p_depol_2q: 0.0,
        }
    }

    pub fn preset(name: &str) -> Option<Self> {
        Some(match name {
            "none" => Self::noiseless(),
            "bf" => Self::bit_flip(),
            "sq-depol-1" => Self::single_qubit_depolarizing(1e-5),
            "sq-depol-2" => Self::single_qubit_depolarizing(5e-5),
            "mixed" => Self::mixed(),
            _ => return None,
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let m: Self = serde_json::from_str(text)?;
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, p) in [
            ("p_bitflip_1q", self.p_bitflip_1q),
            ("p_bitflip_2q", self.p_bitflip_2q),
            ("p_depol_1q", self.p_depol_1q),
            ("p_depol_2q", self.p_depol_2q),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::invalid(format!("{name} = {p} is not a probability")));
            }
        }
        Ok(())
    }

    pub fn is_noiseless(&self) -> bool {
        *self == Self::default()
    }

    /// `(bit-flip, depolarizing)` probabilities for a gate of the given arity.
    pub fn for_arity(&self, arity: usize) -> (f64, f64) {
        if arity >= 2 {
            (self.p_bitflip_2q, self.p_depol_2q)
        } else {
            (self.p_bitflip_1q, self.p_depol_1q)
        }
    }
}
