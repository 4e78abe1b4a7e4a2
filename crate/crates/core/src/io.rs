//! JSON file formats for matrices, channels and constraint sets.
//!
//! Matrices are flattened row-major into separate real and imaginary arrays.

use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::model::{ConstraintSet, InterferenceConstraint, WiretapChannel};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixRecord {
    pub rows: usize,
    pub cols: usize,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl MatrixRecord {
    pub fn from_matrix(m: &CMatrix) -> Self {
        let (rows, cols) = m.shape();
        let mut re = Vec::with_capacity(rows * cols);
        let mut im = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                re.push(m[(i, j)].re);
                im.push(m[(i, j)].im);
            }
        }
        Self { rows, cols, re, im }
    }

    pub fn to_matrix(&self) -> Result<CMatrix> {
        let n = self.rows * self.cols;
        if self.rows == 0 || self.cols == 0 {
            return Err(Error::Format("matrix dimensions must be positive".into()));
        }
        if self.re.len() != n || self.im.len() != n {
            return Err(Error::Format(format!(
                "{}x{} matrix needs {n} entries, got {} real and {} imaginary",
                self.rows,
                self.cols,
                self.re.len(),
                self.im.len()
            )));
        }
        let m = CMatrix::from_fn(self.rows, self.cols, |i, j| {
            let k = i * self.cols + j;
            Complex64::new(self.re[k], self.im[k])
        });
        if !linalg::is_finite(&m) {
            return Err(Error::NonFinite);
        }
        Ok(m)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelFile {
    pub hb: MatrixRecord,
    pub he: MatrixRecord,
    #[serde(default)]
    pub primaries: Vec<MatrixRecord>,
}

impl ChannelFile {
    pub fn from_channel(ch: &WiretapChannel) -> Self {
        Self {
            hb: MatrixRecord::from_matrix(ch.hb()),
            he: MatrixRecord::from_matrix(ch.he()),
            primaries: ch.primaries().iter().map(MatrixRecord::from_matrix).collect(),
        }
    }

    pub fn to_channel(&self) -> Result<WiretapChannel> {
        let primaries = self.primaries.iter().map(MatrixRecord::to_matrix).collect::<Result<_>>()?;
        WiretapChannel::with_primaries(self.hb.to_matrix()?, self.he.to_matrix()?, primaries)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InterferenceRecord {
    pub w: MatrixRecord,
    pub limit: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstraintsRecord {
    #[serde(default)]
    pub spc: Option<f64>,
    #[serde(default)]
    pub papc: Option<Vec<f64>>,
    #[serde(default)]
    pub ipc: Vec<InterferenceRecord>,
}

impl ConstraintsRecord {
    pub fn from_constraints(c: &ConstraintSet) -> Self {
        Self {
            spc: c.spc(),
            papc: c.papc().map(<[f64]>::to_vec),
            ipc: c
                .ipc()
                .iter()
                .map(|i| InterferenceRecord { w: MatrixRecord::from_matrix(&i.w), limit: i.limit })
                .collect(),
        }
    }

    pub fn to_constraints(&self) -> Result<ConstraintSet> {
        let ipc =
            self.ipc.iter().map(|r| InterferenceConstraint::new(r.w.to_matrix()?, r.limit)).collect::<Result<_>>()?;
        ConstraintSet::new(self.spc, self.papc.clone(), ipc)
    }
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Format(format!("{}: {e}", path.display())))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Error::Format(e.to_string()))?;
    fs::write(path, text + "\n").map_err(|e| Error::Format(format!("{}: {e}", path.display())))
}

pub fn read_channel(path: &Path) -> Result<WiretapChannel> {
    read_json::<ChannelFile>(path)?.to_channel()
}

pub fn write_channel(path: &Path, ch: &WiretapChannel) -> Result<()> {
    write_json(path, &ChannelFile::from_channel(ch))
}
