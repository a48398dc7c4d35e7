//! On-disk matrix format: minimal JSON with explicit (re, im) pairs so the
//! files are unambiguous across languages and round-trip bit-exactly.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use partialmat::block::BlockMat;
use partialmat::dense::ComplexMat;

/// `{"n": 2, "k": 2, "entries": [[re, im], ...]}`, entries row-major of
/// length `(nk)^2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub n: usize,
    pub k: usize,
    pub entries: Vec<[f64; 2]>,
}

impl MatrixFile {
    pub fn from_block(h: &BlockMat) -> Self {
        MatrixFile {
            n: h.n(),
            k: h.k(),
            entries: h.mat().entries().iter().map(|z| [z.re, z.im]).collect(),
        }
    }

    pub fn to_block(&self) -> Result<BlockMat, String> {
        if self.n == 0 || self.k == 0 {
            return Err(format!(
                "n and k must be at least 1, got n={}, k={}",
                self.n, self.k
            ));
        }
        let dim = self.n * self.k;
        if self.entries.len() != dim * dim {
            return Err(format!(
                "expected {} entries for n={}, k={}, got {}",
                dim * dim,
                self.n,
                self.k,
                self.entries.len()
            ));
        }
        let mat = ComplexMat::from_entries(
            dim,
            self.entries
                .iter()
                .map(|&[re, im]| Complex64::new(re, im))
                .collect(),
        )
        .map_err(|e| e.to_string())?;
        BlockMat::new(self.n, self.k, mat).map_err(|e| e.to_string())
    }
}

pub fn read_block(path: &std::path::Path) -> Result<BlockMat, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let file: MatrixFile =
        serde_json::from_str(&text).map_err(|e| format!("cannot parse {}: {e}", path.display()))?;
    file.to_block()
}
