//! JSON file formats for channels and POVMs.
//!
//! Complex entries are `[re, im]` pairs; matrices are lists of rows.
//!
//! ```json
//! {"dim_in": 2, "dim_out": 2, "kraus": [[[[1, 0], [0, 0]], [[0, 0], [1, 0]]]]}
//! {"dim": 2, "elements": [[[[1, 0], [0, 0]], [[0, 0], [0, 0]]], ...]}
//! ```

use nalgebra::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcore::Hermitian;
use crate::qobjects::{Channel, Measurement};
use crate::scalar::{CMatrix, Scalar};

pub type MatrixJson = Vec<Vec<[f64; 2]>>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelFile {
    pub dim_in: usize,
    pub dim_out: usize,
    pub kraus: Vec<MatrixJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PovmFile {
    pub dim: usize,
    pub elements: Vec<MatrixJson>,
}

fn matrix_to_json<T: Scalar>(m: &CMatrix<T>) -> MatrixJson {
    (0..m.nrows())
        .map(|r| {
            (0..m.ncols())
                .map(|c| [m[(r, c)].re.f64(), m[(r, c)].im.f64()])
                .collect()
        })
        .collect()
}

fn matrix_from_json<T: Scalar>(rows: &MatrixJson, nrows: usize, ncols: usize, what: &str) -> Result<CMatrix<T>> {
    if rows.len() != nrows || rows.iter().any(|r| r.len() != ncols) {
        return Err(Error::Malformed(format!(
            "{what} must be {nrows}x{ncols}"
        )));
    }
    if rows.iter().flatten().flatten().any(|v| !v.is_finite()) {
        return Err(Error::Malformed(format!("{what} has a non-finite entry")));
    }
    Ok(CMatrix::from_fn(nrows, ncols, |r, c| {
        let [re, im] = rows[r][c];
        Complex::new(T::c(re), T::c(im))
    }))
}

impl ChannelFile {
    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("channel file serializes")
    }

    pub fn from_channel<T: Scalar>(ch: &Channel<T>) -> Self {
        Self {
            dim_in: ch.dim_in(),
            dim_out: ch.dim_out(),
            kraus: ch.kraus().iter().map(matrix_to_json).collect(),
        }
    }

    /// Validates shapes against the declared dimensions and builds the
    /// channel, which checks trace preservation.
    pub fn to_channel<T: Scalar>(&self) -> Result<Channel<T>> {
        if self.kraus.is_empty() {
            return Err(Error::Malformed("kraus list is empty".into()));
        }
        let kraus = self
            .kraus
            .iter()
            .enumerate()
            .map(|(k, m)| matrix_from_json(m, self.dim_out, self.dim_in, &format!("kraus[{k}]")))
            .collect::<Result<Vec<_>>>()?;
        Channel::from_kraus(kraus)
    }
}

impl PovmFile {
    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("POVM file serializes")
    }

    pub fn from_measurement<T: Scalar>(m: &Measurement<T>) -> Self {
        Self {
            dim: m.dim(),
            elements: m.elements().iter().map(|e| matrix_to_json(e.matrix())).collect(),
        }
    }

    pub fn to_measurement<T: Scalar>(&self) -> Result<Measurement<T>> {
        let elements = self
            .elements
            .iter()
            .enumerate()
            .map(|(x, m)| {
                let what = format!("elements[{x}]");
                Hermitian::new(matrix_from_json(m, self.dim, self.dim, &what)?)
            })
            .collect::<Result<Vec<_>>>()?;
        Measurement::new(elements)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{named_examples, ExampleChannel};

    #[test]
    fn channel_round_trip() {
        let g = &named_examples::<f64>()[&ExampleChannel::G];
        let text = ChannelFile::from_channel(g).to_json();
        let back: Channel<f64> = ChannelFile::from_json(&text).unwrap().to_channel().unwrap();
        assert!(back.approx_eq(g));
    }

    #[test]
    fn identity_channel_literal() {
        let text = r#"{"dim_in": 2, "dim_out": 2, "kraus": [[[[1, 0], [0, 0]], [[0, 0], [1, 0]]]]}"#;
        let ch: Channel<f64> = ChannelFile::from_json(text).unwrap().to_channel().unwrap();
        assert!(ch.approx_eq(&Channel::identity(2)));
    }

    #[test]
    fn shape_and_tp_errors() {
        let text = r#"{"dim_in": 3, "dim_out": 2, "kraus": [[[[1, 0], [0, 0]], [[0, 0], [1, 0]]]]}"#;
        let file = ChannelFile::from_json(text).unwrap();
        assert!(matches!(file.to_channel::<f64>(), Err(Error::Malformed(_))));
        let text = r#"{"dim_in": 2, "dim_out": 2, "kraus": [[[[1, 0], [0, 0]], [[0, 0], [0, 0]]]]}"#;
        let file = ChannelFile::from_json(text).unwrap();
        assert!(matches!(
            file.to_channel::<f64>(),
            Err(Error::NotTracePreserving { .. })
        ));
        assert!(ChannelFile::from_json("{\"dim_in\": 2").is_err());
    }

    #[test]
    fn povm_round_trip() {
        let m = Measurement::<f64>::basis(3);
        let text = PovmFile::from_measurement(&m).to_json();
        let back: Measurement<f64> = PovmFile::from_json(&text).unwrap().to_measurement().unwrap();
        assert!(back.max_abs_diff(&m) < 1e-15);
    }
}
