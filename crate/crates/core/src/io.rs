//! JSON interchange formats.
//!
//! Complex numbers are `[re, im]` pairs. POVMs are
//! `{"dim": d, "kets": [[[re, im], ...], ...]}`, states `{"ket": [[re, im], ...]}`,
//! and extensions `{"K": K, "d": d, "basis": [...]}` with the system block in
//! coordinates `0..d` of every basis vector.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::Error;
use crate::linalg::ComplexVector;
use crate::measurement::{PureState, Rank1Povm};
use crate::naimark::NaimarkExtension;

pub type Amplitudes = Vec<[f64; 2]>;

/// Input failures, split by whether the text was unreadable or the content
/// violated a mathematical invariant.
#[derive(Debug, Error)]
pub enum IoError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("parse error: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("invariant violated: {0}")]
    Invalid(#[from] Error),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PovmJson {
    pub dim: usize,
    pub kets: Vec<Amplitudes>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateJson {
    pub ket: Amplitudes,
}

pub const EXTENSION_CONVENTION: &str = "system-block-first";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtensionJson {
    #[serde(rename = "K")]
    pub outcomes: usize,
    pub d: usize,
    pub basis: Vec<Amplitudes>,
    pub ancilla_dim: usize,
    pub convention: String,
    /// `max |⟨m̃_k|m̃_l⟩ − δ_kl|` of the emitted basis.
    pub gram_deviation: f64,
    pub restriction_error: f64,
}

pub fn to_amplitudes(v: &ComplexVector) -> Amplitudes {
    v.entries().iter().map(|z| [z.re, z.im]).collect()
}

pub fn from_amplitudes(a: &[[f64; 2]]) -> Result<ComplexVector, Error> {
    ComplexVector::new(a.iter().map(|&[re, im]| Complex64::new(re, im)).collect())
}

impl PovmJson {
    pub fn from_povm(povm: &Rank1Povm) -> Self {
        Self {
            dim: povm.dim(),
            kets: povm.kets().iter().map(to_amplitudes).collect(),
        }
    }

    pub fn to_povm(&self) -> Result<Rank1Povm, Error> {
        let kets = self
            .kets
            .iter()
            .map(|k| from_amplitudes(k))
            .collect::<Result<Vec<_>, _>>()?;
        if let Some(bad) = kets.iter().find(|k| k.dim() != self.dim) {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: bad.dim(),
            });
        }
        Rank1Povm::new(kets)
    }
}

impl StateJson {
    pub fn from_state(state: &PureState) -> Self {
        Self {
            ket: to_amplitudes(state.ket()),
        }
    }

    pub fn to_state(&self) -> Result<PureState, Error> {
        PureState::new(from_amplitudes(&self.ket)?)
    }
}

impl ExtensionJson {
    pub fn from_extension(ext: &NaimarkExtension, povm: &Rank1Povm) -> Self {
        Self {
            outcomes: ext.outcomes(),
            d: ext.system_dim(),
            basis: ext.basis().iter().map(to_amplitudes).collect(),
            ancilla_dim: ext.ancilla_dim(),
            convention: EXTENSION_CONVENTION.to_owned(),
            gram_deviation: ext.gram_deviation(),
            restriction_error: ext.restriction_error(povm),
        }
    }

    pub fn to_extension(&self) -> Result<NaimarkExtension, Error> {
        let basis = self
            .basis
            .iter()
            .map(|v| from_amplitudes(v))
            .collect::<Result<Vec<_>, _>>()?;
        NaimarkExtension::new(basis, self.d)
    }
}

pub fn parse_povm(text: &str) -> Result<Rank1Povm, IoError> {
    let raw: PovmJson = serde_json::from_str(text)?;
    Ok(raw.to_povm()?)
}

pub fn parse_state(text: &str) -> Result<PureState, IoError> {
    let raw: StateJson = serde_json::from_str(text)?;
    Ok(raw.to_state()?)
}

pub fn read_povm(path: &std::path::Path) -> Result<Rank1Povm, IoError> {
    let text = std::fs::read_to_string(path).map_err(|source| IoError::Read {
        path: path.display().to_string(),
        source,
    })?;
    parse_povm(&text)
}

pub fn povm_to_json(povm: &Rank1Povm) -> String {
    serde_json::to_string_pretty(&PovmJson::from_povm(povm)).expect("serializable")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measurement::random_rank1_povm;
    use crate::naimark::dilate;

    #[test]
    fn povm_json_schema() {
        let text = povm_to_json(&Rank1Povm::pauli_z());
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["dim"], 2);
        assert_eq!(v["kets"][1][1], serde_json::json!([1.0, 0.0]));
        assert_eq!(parse_povm(&text).unwrap(), Rank1Povm::pauli_z());
    }

    #[test]
    fn parse_vs_invariant_errors() {
        assert!(matches!(parse_povm("{not json"), Err(IoError::Parse(_))));
        let incomplete = r#"{"dim": 2, "kets": [[[1,0],[0,0]], [[0,0],[0.5,0]]]}"#;
        assert!(matches!(parse_povm(incomplete), Err(IoError::Invalid(Error::Incomplete(_)))));
        let wrong_dim = r#"{"dim": 3, "kets": [[[1,0],[0,0]], [[0,0],[1,0]]]}"#;
        assert!(matches!(parse_povm(wrong_dim), Err(IoError::Invalid(_))));
    }

    #[test]
    fn state_json() {
        let s = parse_state(r#"{"ket": [[0.6, 0], [0, 0.8]]}"#).unwrap();
        assert_eq!(s.dim(), 2);
        assert!(matches!(parse_state(r#"{"ket": [[1, 0], [1, 0]]}"#), Err(IoError::Invalid(_))));
        assert_eq!(StateJson::from_state(&s).to_state().unwrap(), s);
    }

    #[test]
    fn extension_json_round_trip() {
        let povm = random_rank1_povm(2, 4, 6).unwrap();
        let ext = dilate(&povm).unwrap();
        let json = serde_json::to_value(ExtensionJson::from_extension(&ext, &povm)).unwrap();
        assert_eq!(json["K"], 4);
        assert_eq!(json["d"], 2);
        assert_eq!(json["convention"], EXTENSION_CONVENTION);
        let back: ExtensionJson = serde_json::from_value(json).unwrap();
        assert_eq!(back.to_extension().unwrap(), ext);
    }
}
