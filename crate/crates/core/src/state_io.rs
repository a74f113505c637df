//! JSON encoding of states.
//!
//! ```json
//! {"num_qubits": 2, "entries": [[{"re": 0.5, "im": 0.0}, ...], ...]}
//! {"num_qubits": 2, "amplitudes": [{"re": 0.7071, "im": 0.0}, ...]}
//! ```
//!
//! A bare number is accepted wherever a complex entry is expected.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::C64;
use crate::qstate::{DensityMatrix, PureState};

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(untagged)]
enum Entry {
    Complex { re: f64, #[serde(default)] im: f64 },
    Real(f64),
}

impl From<Entry> for C64 {
    fn from(e: Entry) -> C64 {
        match e {
            Entry::Complex { re, im } => C64::new(re, im),
            Entry::Real(re) => C64::new(re, 0.0),
        }
    }
}

impl From<C64> for Entry {
    fn from(z: C64) -> Entry {
        Entry::Complex { re: z.re, im: z.im }
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StateFile {
    num_qubits: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    entries: Option<Vec<Vec<Entry>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    amplitudes: Option<Vec<Entry>>,
}

/// A state as read from disk.
#[derive(Debug, Clone, PartialEq)]
pub enum StateInput {
    Pure(PureState),
    Mixed(DensityMatrix),
}

impl StateInput {
    pub fn into_density(self) -> DensityMatrix {
        match self {
            StateInput::Pure(s) => s.projector(),
            StateInput::Mixed(rho) => rho,
        }
    }

    pub fn num_qubits(&self) -> usize {
        match self {
            StateInput::Pure(s) => s.num_qubits(),
            StateInput::Mixed(rho) => rho.num_qubits(),
        }
    }
}

/// Parses and validates a JSON state.
pub fn parse_state(json: &str) -> Result<StateInput> {
    let file: StateFile = serde_json::from_str(json).map_err(|e| Error::Parse(e.to_string()))?;
    let dim = 1usize.checked_shl(file.num_qubits as u32).filter(|_| file.num_qubits < 31);
    let state = match (file.entries, file.amplitudes) {
        (Some(rows), None) => {
            let n = rows.len();
            if let Some(bad) = rows.iter().find(|r| r.len() != n) {
                return Err(Error::BadDimension { rows: n, cols: bad.len() });
            }
            let m = DMatrix::from_fn(n, n, |i, j| C64::from(rows[i][j]));
            let rho = DensityMatrix::new(m)?;
            StateInput::Mixed(rho)
        }
        (None, Some(amps)) => {
            let v = DVector::from_iterator(amps.len(), amps.into_iter().map(C64::from));
            StateInput::Pure(PureState::new(v)?)
        }
        _ => return Err(Error::Parse("expected exactly one of \"entries\" or \"amplitudes\"".into())),
    };
    if dim != Some(1 << state.num_qubits()) || state.num_qubits() != file.num_qubits {
        return Err(Error::Parse(format!(
            "num_qubits = {} does not match the data ({} qubits)",
            file.num_qubits,
            state.num_qubits()
        )));
    }
    Ok(state)
}

pub fn density_to_json(rho: &DensityMatrix) -> String {
    let e = rho.entries();
    let rows = (0..rho.dim()).map(|i| (0..rho.dim()).map(|j| Entry::from(e[(i, j)])).collect()).collect();
    let file = StateFile { num_qubits: rho.num_qubits(), entries: Some(rows), amplitudes: None };
    serde_json::to_string(&file).expect("state serializes")
}

pub fn pure_to_json(s: &PureState) -> String {
    let amps = s.amplitudes().iter().map(|z| Entry::from(*z)).collect();
    let file = StateFile { num_qubits: s.num_qubits(), entries: None, amplitudes: Some(amps) };
    serde_json::to_string(&file).expect("state serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs_diff;
    use crate::random::random_pure_state;

    #[test]
    fn round_trip() {
        let s = random_pure_state(2, 4);
        let back = parse_state(&pure_to_json(&s)).unwrap();
        assert_eq!(back, StateInput::Pure(s.clone()));
        let rho = s.projector();
        let StateInput::Mixed(back) = parse_state(&density_to_json(&rho)).unwrap() else { panic!() };
        assert!(max_abs_diff(back.entries(), rho.entries()) == 0.0);
    }

    #[test]
    fn bare_numbers_and_errors() {
        let ok = r#"{"num_qubits": 1, "entries": [[0.5, 0], [0, 0.5]]}"#;
        assert!(parse_state(ok).is_ok());
        let bad_trace = r#"{"num_qubits": 1, "entries": [[0.5, 0], [0, 0.6]]}"#;
        assert_eq!(parse_state(bad_trace).unwrap_err().kind(), "TraceNotOne");
        let wrong_n = r#"{"num_qubits": 2, "entries": [[0.5, 0], [0, 0.5]]}"#;
        assert_eq!(parse_state(wrong_n).unwrap_err().kind(), "Parse");
        let both = r#"{"num_qubits": 1, "entries": [[1, 0], [0, 0]], "amplitudes": [1, 0]}"#;
        assert!(parse_state(both).is_err());
        assert!(parse_state("{").is_err());
    }
}
