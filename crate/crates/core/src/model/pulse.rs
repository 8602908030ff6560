use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::system::MolecularSystem;
use crate::error::{Error, Result};

/// A laser pulse written as a finite sine series per cartesian component:
///
/// `E_α(t) = a_{0,α} + Σ_{j=1..M} a_{j,α} sin(jπt/T)`
///
/// The harmonic frequencies `ω_j = jπ/T` are fixed by the duration; only
/// the amplitudes are free. Without the constant `a_0` term the field
/// vanishes at both ends of the pulse.
#[derive(Debug, Clone, PartialEq)]
pub struct PulseParameters {
    duration: f64,
    n_harmonics: usize,
    include_dc: bool,
    /// `amplitudes[α][j]`, `j = 0..=M`; index 0 is the constant term.
    amplitudes: [Vec<f64>; 3],
    amplitude_clamp: Option<f64>,
}

/// One line of the (exact) pulse spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralLine {
    pub axis: usize,
    pub harmonic: usize,
    pub omega: f64,
    pub amplitude: f64,
}

impl PulseParameters {
    pub fn zeros(duration: f64, n_harmonics: usize, include_dc: bool) -> Result<Self> {
        Self::new(
            duration,
            n_harmonics,
            include_dc,
            std::array::from_fn(|_| vec![0.0; n_harmonics + 1]),
            None,
        )
    }

    pub fn new(
        duration: f64,
        n_harmonics: usize,
        include_dc: bool,
        amplitudes: [Vec<f64>; 3],
        amplitude_clamp: Option<f64>,
    ) -> Result<Self> {
        if !(duration.is_finite() && duration > 0.0) {
            return Err(Error::invalid(format!("pulse duration must be > 0, got {duration}")));
        }
        if n_harmonics < 1 {
            return Err(Error::invalid("pulse needs at least one harmonic"));
        }
        if amplitudes.iter().any(|a| a.len() != n_harmonics + 1) {
            return Err(Error::invalid(format!(
                "each amplitude row must have {} entries (dc + {n_harmonics} harmonics)",
                n_harmonics + 1
            )));
        }
        if amplitudes.iter().flatten().any(|a| !a.is_finite()) {
            return Err(Error::invalid("amplitudes must be finite"));
        }
        if !include_dc && amplitudes.iter().any(|a| a[0] != 0.0) {
            return Err(Error::invalid("constant amplitudes must be zero when include_dc is false"));
        }
        if let Some(clamp) = amplitude_clamp {
            if !(clamp.is_finite() && clamp > 0.0) {
                return Err(Error::invalid("amplitude_clamp must be positive"));
            }
            if let Some(a) = amplitudes.iter().flatten().find(|a| a.abs() > clamp) {
                return Err(Error::invalid(format!("amplitude {a} exceeds clamp {clamp}")));
            }
        }
        Ok(Self {
            duration,
            n_harmonics,
            include_dc,
            amplitudes,
            amplitude_clamp,
        })
    }

    /// A single resonant harmonic of equal amplitude on the requested axes,
    /// picking the harmonic whose `ω_j` is closest to `omega`.
    pub fn resonant_guess(
        duration: f64,
        n_harmonics: usize,
        include_dc: bool,
        omega: f64,
        amplitude: f64,
        axes: &[usize],
    ) -> Result<Self> {
        let mut pulse = Self::zeros(duration, n_harmonics, include_dc)?;
        let j = pulse.nearest_harmonic(omega);
        for &axis in axes {
            pulse.amplitudes[axis][j] = amplitude;
        }
        Ok(pulse)
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }

    pub fn n_harmonics(&self) -> usize {
        self.n_harmonics
    }

    pub fn include_dc(&self) -> bool {
        self.include_dc
    }

    pub fn amplitude_clamp(&self) -> Option<f64> {
        self.amplitude_clamp
    }

    pub fn amplitudes(&self) -> &[Vec<f64>; 3] {
        &self.amplitudes
    }

    pub fn amplitude(&self, axis: usize, harmonic: usize) -> f64 {
        self.amplitudes[axis][harmonic]
    }

    pub fn set_amplitude(&mut self, axis: usize, harmonic: usize, value: f64) -> Result<()> {
        if harmonic == 0 && !self.include_dc && value != 0.0 {
            return Err(Error::invalid("pulse has no constant term"));
        }
        if let Some(c) = self.amplitude_clamp {
            if value.abs() > c {
                return Err(Error::invalid(format!("amplitude {value} exceeds clamp {c}")));
            }
        }
        self.amplitudes[axis][harmonic] = value;
        Ok(())
    }

    pub fn with_clamp(mut self, clamp: Option<f64>) -> Result<Self> {
        if let Some(c) = clamp {
            if let Some(a) = self.amplitudes.iter().flatten().find(|a| a.abs() > c) {
                return Err(Error::invalid(format!("amplitude {a} exceeds clamp {c}")));
            }
        }
        self.amplitude_clamp = clamp;
        Ok(self)
    }

    /// `ω_j = jπ/T`
    pub fn omega(&self, harmonic: usize) -> f64 {
        harmonic as f64 * PI / self.duration
    }

    pub fn nearest_harmonic(&self, omega: f64) -> usize {
        let j = (omega * self.duration / PI).round() as usize;
        j.clamp(1, self.n_harmonics)
    }

    /// Field vector at time `t ∈ [0, T]`.
    pub fn field_at(&self, t: f64) -> Result<[f64; 3]> {
        let slack = 1e-9 * self.duration;
        if !(t >= -slack && t <= self.duration + slack) {
            return Err(Error::Domain(format!("t = {t} outside [0, {}]", self.duration)));
        }
        Ok(self.field_unchecked(t))
    }

    pub(crate) fn field_unchecked(&self, t: f64) -> [f64; 3] {
        let mut field = if self.include_dc {
            [self.amplitudes[0][0], self.amplitudes[1][0], self.amplitudes[2][0]]
        } else {
            [0.0; 3]
        };
        let x = PI * t / self.duration;
        for j in 1..=self.n_harmonics {
            let s = (j as f64 * x).sin();
            for (axis, f) in field.iter_mut().enumerate() {
                *f += self.amplitudes[axis][j] * s;
            }
        }
        field
    }

    /// Number of free amplitudes (the constant terms only count with `include_dc`).
    pub fn active_len(&self) -> usize {
        3 * (self.n_harmonics + usize::from(self.include_dc))
    }

    /// Flattened free amplitudes, axis-major.
    pub fn active_vector(&self) -> Vec<f64> {
        let start = usize::from(!self.include_dc);
        self.amplitudes
            .iter()
            .flat_map(|row| row[start..].iter().copied())
            .collect()
    }

    /// Replaces the free amplitudes; inverse of [`Self::active_vector`].
    /// The clamp is not enforced here; callers that need it go through
    /// [`Self::clamp_in_place`].
    pub fn with_active_vector(&self, values: &[f64]) -> Result<Self> {
        if values.len() != self.active_len() {
            return Err(Error::invalid(format!(
                "expected {} amplitudes, got {}",
                self.active_len(),
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("amplitudes must be finite"));
        }
        let mut out = self.clone();
        out.amplitude_clamp = None;
        let start = usize::from(!self.include_dc);
        let width = self.n_harmonics + 1 - start;
        for (axis, chunk) in values.chunks(width).enumerate() {
            out.amplitudes[axis][start..].copy_from_slice(chunk);
        }
        Ok(out)
    }

    /// Full `3×(M+1)` row-major amplitude array.
    pub fn flat_amplitudes(&self) -> Vec<f64> {
        self.amplitudes.iter().flatten().copied().collect()
    }

    pub fn with_flat_amplitudes(&self, flat: &[f64]) -> Result<Self> {
        let m1 = self.n_harmonics + 1;
        if flat.len() != 3 * m1 {
            return Err(Error::invalid(format!("expected {} amplitudes, got {}", 3 * m1, flat.len())));
        }
        Self::new(
            self.duration,
            self.n_harmonics,
            self.include_dc,
            std::array::from_fn(|axis| flat[axis * m1..(axis + 1) * m1].to_vec()),
            self.amplitude_clamp,
        )
    }

    pub fn clamp_in_place(&mut self, clamp: f64) {
        for a in self.amplitudes.iter_mut().flatten() {
            *a = a.clamp(-clamp, clamp);
        }
    }

    /// Exact line spectrum `|a_{j,α}|` at `ω_j`. The constant term appears at
    /// `ω = 0` when present.
    pub fn spectrum(&self) -> Vec<SpectralLine> {
        let start = usize::from(!self.include_dc);
        (0..3)
            .flat_map(|axis| {
                (start..=self.n_harmonics).map(move |j| SpectralLine {
                    axis,
                    harmonic: j,
                    omega: self.omega(j),
                    amplitude: self.amplitudes[axis][j].abs(),
                })
            })
            .collect()
    }

    pub fn to_file(&self) -> PulseFile {
        PulseFile {
            duration: self.duration,
            n_harmonics: self.n_harmonics,
            include_dc: self.include_dc,
            amplitudes: self.amplitudes.to_vec(),
            amplitude_clamp: self.amplitude_clamp,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: PulseFile = serde_json::from_str(text)?;
        file.try_into()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("pulse serializes")
    }
}

/// Smallest harmonic count whose top frequency lies above the highest
/// excitation energy of `system`.
pub fn auto_harmonics(system: &MolecularSystem, duration: f64) -> usize {
    let width = system.spectral_width();
    ((width * duration / PI).floor() as usize + 1).max(1)
}

/// On-disk representation of a [`PulseParameters`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PulseFile {
    pub duration: f64,
    pub n_harmonics: usize,
    pub include_dc: bool,
    /// `3` rows of `M+1` amplitudes (x, y, z).
    pub amplitudes: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amplitude_clamp: Option<f64>,
}

impl TryFrom<PulseFile> for PulseParameters {
    type Error = Error;

    fn try_from(file: PulseFile) -> Result<Self> {
        let m1 = file.n_harmonics + 1;
        let rows: Vec<Vec<f64>> = match file.amplitudes.len() {
            3 => file.amplitudes,
            // a single flat row-major array
            1 if file.amplitudes[0].len() == 3 * m1 => {
                file.amplitudes[0].chunks(m1).map(<[f64]>::to_vec).collect()
            }
            n => return Err(Error::invalid(format!("amplitudes must have 3 rows, got {n}"))),
        };
        let [x, y, z]: [Vec<f64>; 3] = rows.try_into().expect("three rows");
        PulseParameters::new(
            file.duration,
            file.n_harmonics,
            file.include_dc,
            [x, y, z],
            file.amplitude_clamp,
        )
    }
}
