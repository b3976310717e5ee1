//! JSON state files: `{"rho": [[[re, im], ...4], ...4]}`, row-major.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, StateCheck};
use crate::qcore::matrix::{ComplexMatrix, C64};
use crate::qcore::state::DensityMatrix;

#[derive(Serialize, Deserialize)]
struct StateFile {
    rho: Vec<Vec<[f64; 2]>>,
}

/// Parses and validates a state file.
pub fn parse_state(text: &str) -> Result<DensityMatrix> {
    let file: StateFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    if file.rho.len() != 4 || file.rho.iter().any(|row| row.len() != 4) {
        let entries: usize = file.rho.iter().map(Vec::len).sum();
        return Err(Error::InvalidState {
            check: StateCheck::Dimension,
            value: entries as f64,
        });
    }
    let data = file
        .rho
        .iter()
        .flatten()
        .map(|&[re, im]| C64::new(re, im))
        .collect();
    DensityMatrix::new(ComplexMatrix::from_vec(4, 4, data)?)
}

/// Serializes with shortest round-trip float formatting, so parsing the
/// output gives back the identical matrix.
pub fn serialize_state(rho: &DensityMatrix) -> String {
    let m = rho.matrix();
    let file = StateFile {
        rho: (0..4)
            .map(|i| (0..4).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
            .collect(),
    };
    serde_json::to_string(&file).expect("finite floats serialize")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn singlet_round_trip_is_exact() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let rho = DensityMatrix::from_pure(&[
            C64::new(0.0, 0.0),
            C64::new(s, 0.0),
            C64::new(-s, 0.0),
            C64::new(0.0, 0.0),
        ])
        .unwrap();
        let back = parse_state(&serialize_state(&rho)).unwrap();
        assert_eq!(back, rho);
    }

    #[test]
    fn malformed_json_is_parse_error() {
        assert!(matches!(
            parse_state("{\"rho\": [1, 2"),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            parse_state("{\"sigma\": []}"),
            Err(Error::Parse(_))
        ));
    }

    #[test]
    fn wrong_shape_is_dimension_error() {
        let text = r#"{"rho": [[[1,0],[0,0]],[[0,0],[0,0]]]}"#;
        assert!(matches!(
            parse_state(text),
            Err(Error::InvalidState {
                check: StateCheck::Dimension,
                ..
            })
        ));
    }

    #[test]
    fn bad_trace_names_the_check() {
        let text = r#"{"rho": [[[0.9,0],[0,0],[0,0],[0,0]],[[0,0],[0,0],[0,0],[0,0]],
                                [[0,0],[0,0],[0,0],[0,0]],[[0,0],[0,0],[0,0],[0,0]]]}"#;
        let err = parse_state(text).unwrap_err();
        assert!(err.to_string().contains("trace"));
    }

    #[test]
    fn negative_eigenvalue_names_psd() {
        let text = r#"{"rho": [[[1.05,0],[0,0],[0,0],[0,0]],[[0,0],[-0.05,0],[0,0],[0,0]],
                                [[0,0],[0,0],[0,0],[0,0]],[[0,0],[0,0],[0,0],[0,0]]]}"#;
        let err = parse_state(text).unwrap_err();
        assert!(err.to_string().contains("psd"));
    }
}
