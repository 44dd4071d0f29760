use std::fmt;
use std::ops::{Index, IndexMut};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Complex64 = num_complex::Complex<f64>;

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Dense complex matrix, row-major. The universal carrier for all operators
/// in the library (Hermitians, contractions, unitaries, projections, bases).
///
/// All entries are finite by construction; serialization uses split
/// real/imaginary arrays and rejects malformed payloads on read.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixRepr", into = "MatrixRepr")]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Complex64>,
}

/// Wire format: `{"rows": n, "cols": m, "re": [...], "im": [...]}` row-major.
#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    rows: usize,
    cols: usize,
    re: Vec<f64>,
    im: Vec<f64>,
}

impl TryFrom<MatrixRepr> for ComplexMatrix {
    type Error = Error;

    fn try_from(repr: MatrixRepr) -> Result<Self> {
        let expected = repr.rows.checked_mul(repr.cols).ok_or_else(|| {
            Error::InvalidMatrix(format!("{}x{} overflows", repr.rows, repr.cols))
        })?;
        if repr.re.len() != expected || repr.im.len() != expected {
            return Err(Error::InvalidMatrix(format!(
                "expected {} entries for a {}x{} matrix, got re: {}, im: {}",
                expected,
                repr.rows,
                repr.cols,
                repr.re.len(),
                repr.im.len()
            )));
        }
        let entries = repr
            .re
            .iter()
            .zip(repr.im.iter())
            .map(|(&re, &im)| Complex64::new(re, im))
            .collect();
        ComplexMatrix::new(repr.rows, repr.cols, entries)
    }
}

impl From<ComplexMatrix> for MatrixRepr {
    fn from(m: ComplexMatrix) -> Self {
        MatrixRepr {
            rows: m.rows,
            cols: m.cols,
            re: m.entries.iter().map(|z| z.re).collect(),
            im: m.entries.iter().map(|z| z.im).collect(),
        }
    }
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidMatrix("dimensions must be positive".into()));
        }
        if entries.len() != rows * cols {
            return Err(Error::InvalidMatrix(format!(
                "expected {} entries for {}x{}, got {}",
                rows * cols,
                rows,
                cols,
                entries.len()
            )));
        }
        if let Some(bad) = entries.iter().find(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidMatrix(format!("non-finite entry {bad}")));
        }
        Ok(Self { rows, cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "dimensions must be positive");
        Self { rows, cols, entries: vec![ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Square matrix from real row-major entries.
    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        Self::new(rows, cols, data.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn diag_real(values: &[f64]) -> Self {
        let n = values.len();
        let mut m = Self::zeros(n, n);
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = Complex64::new(v, 0.0);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch in add");
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect();
        Self { rows: self.rows, cols: self.cols, entries }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch in sub");
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect();
        Self { rows: self.rows, cols: self.cols, entries }
    }

    pub fn scale(&self, factor: f64) -> Self {
        let entries = self.entries.iter().map(|z| z * factor).collect();
        Self { rows: self.rows, cols: self.cols, entries }
    }

    pub fn scale_complex(&self, factor: Complex64) -> Self {
        let entries = self.entries.iter().map(|z| z * factor).collect();
        Self { rows: self.rows, cols: self.cols, entries }
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "shape mismatch in matmul");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        assert!(self.is_square(), "trace of non-square matrix");
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    /// Trace of a (numerically) Hermitian matrix.
    pub fn trace_real(&self) -> f64 {
        self.trace().re
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// ‖A − A*‖_F, the Hermitian deviation.
    pub fn hermitian_deviation(&self) -> f64 {
        assert!(self.is_square());
        let mut sum = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                let d = self[(i, j)] - self[(j, i)].conj();
                sum += d.norm_sqr();
            }
        }
        sum.sqrt()
    }

    /// (A + A*)/2 — exact Hermitian projection.
    pub fn hermitian_part(&self) -> Self {
        assert!(self.is_square());
        Self::from_fn(self.rows, self.cols, |i, j| {
            (self[(i, j)] + self[(j, i)].conj()) * 0.5
        })
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn from_columns(rows: usize, cols: &[Vec<Complex64>]) -> Self {
        assert!(!cols.is_empty());
        Self::from_fn(rows, cols.len(), |i, j| cols[j][i])
    }

    /// Copies `block` into `self` with its top-left corner at (row, col).
    pub fn set_block(&mut self, row: usize, col: usize, block: &Self) {
        assert!(row + block.rows <= self.rows && col + block.cols <= self.cols);
        for i in 0..block.rows {
            for j in 0..block.cols {
                self[(row + i, col + j)] = block[(i, j)];
            }
        }
    }

    pub fn block(&self, row: usize, col: usize, rows: usize, cols: usize) -> Self {
        assert!(row + rows <= self.rows && col + cols <= self.cols);
        Self::from_fn(rows, cols, |i, j| self[(row + i, col + j)])
    }

    /// diag(A, B) block matrix.
    pub fn block_diag(a: &Self, b: &Self) -> Self {
        let mut out = Self::zeros(a.rows + b.rows, a.cols + b.cols);
        out.set_block(0, 0, a);
        out.set_block(a.rows, a.cols, b);
        out
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.entries[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.entries[i * self.cols + j]
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:+.4}{:+.4}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// U X U* (conjugation by a square matrix, typically unitary).
pub fn unitary_conj(u: &ComplexMatrix, x: &ComplexMatrix) -> ComplexMatrix {
    u.matmul(x).matmul(&u.adjoint())
}

/// Z* A Z.
pub fn star_conj(z: &ComplexMatrix, a: &ComplexMatrix) -> ComplexMatrix {
    z.adjoint().matmul(a).matmul(z)
}

/// (M + M*)/2.
pub fn re_part(m: &ComplexMatrix) -> ComplexMatrix {
    m.hermitian_part()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constructor_rejects_bad_shapes() {
        assert!(ComplexMatrix::new(2, 2, vec![ZERO; 3]).is_err());
        assert!(ComplexMatrix::new(0, 2, vec![]).is_err());
        let bad = vec![Complex64::new(f64::NAN, 0.0); 4];
        assert!(ComplexMatrix::new(2, 2, bad).is_err());
    }

    #[test]
    fn matmul_and_adjoint() {
        let a = ComplexMatrix::from_real(2, 2, &[1.0, 2.0, 3.0, 4.0]).unwrap();
        let id = ComplexMatrix::identity(2);
        assert_eq!(a.matmul(&id), a);
        let z = ComplexMatrix::new(
            1,
            2,
            vec![Complex64::new(0.0, 1.0), Complex64::new(2.0, -1.0)],
        )
        .unwrap();
        let zs = z.adjoint();
        assert_eq!(zs[(0, 0)], Complex64::new(0.0, -1.0));
        assert_eq!(zs[(1, 0)], Complex64::new(2.0, 1.0));
    }

    #[test]
    fn serde_rejects_mismatched_lengths() {
        let json = r#"{"rows":2,"cols":2,"re":[1.0,0.0,0.0],"im":[0.0,0.0,0.0,0.0]}"#;
        let parsed: std::result::Result<ComplexMatrix, _> = serde_json::from_str(json);
        assert!(parsed.is_err());
    }

    #[test]
    fn serde_round_trip() {
        let a = ComplexMatrix::new(
            2,
            2,
            vec![
                Complex64::new(1.0, 2.0),
                Complex64::new(-0.5, 0.25),
                Complex64::new(-0.5, -0.25),
                Complex64::new(3.0, 0.0),
            ],
        )
        .unwrap();
        let text = serde_json::to_string(&a).unwrap();
        let back: ComplexMatrix = serde_json::from_str(&text).unwrap();
        assert_eq!(a, back);
    }
}
