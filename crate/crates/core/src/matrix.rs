//! Dense matrices over R, C or H acting on row vectors from the right.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::scalar::{Field, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct ScalarMatrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl ScalarMatrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> ScalarMatrix {
        ScalarMatrix { field, rows, cols, data: vec![Scalar::zero(field); rows * cols] }
    }

    pub fn identity(field: Field, n: usize) -> ScalarMatrix {
        let mut m = ScalarMatrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one(field));
        }
        m
    }

    /// Builds a matrix from rows, embedding every entry into `field`.
    pub fn from_rows(field: Field, rows: Vec<Vec<Scalar>>) -> Result<ScalarMatrix> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::DimensionMismatch { expected: c, found: row.len() });
            }
            for s in row {
                data.push(s.embed(field)?);
            }
        }
        Ok(ScalarMatrix { field, rows: r, cols: c, data })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Scalar {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, s: Scalar) {
        self.data[r * self.cols + c] = Scalar::zero(self.field) + s;
    }

    pub fn row(&self, r: usize) -> Vec<Scalar> {
        self.data[r * self.cols..(r + 1) * self.cols].to_vec()
    }

    pub fn mul(&self, o: &ScalarMatrix) -> ScalarMatrix {
        assert_eq!(self.cols, o.rows, "matrix product shapes");
        let field = self.field.max(o.field);
        let mut out = ScalarMatrix::zeros(field, self.rows, o.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..o.cols {
                    let idx = r * o.cols + c;
                    out.data[idx] = out.data[idx] + a * o.get(k, c);
                }
            }
        }
        out
    }

    /// Row vector times matrix.
    pub fn apply_row(&self, z: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(z.len(), self.rows, "row vector length");
        (0..self.cols)
            .map(|c| (0..self.rows).fold(Scalar::zero(self.field), |acc, r| acc + z[r] * self.get(r, c)))
            .collect()
    }

    pub fn conj_transpose(&self) -> ScalarMatrix {
        let mut t = ScalarMatrix::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).conj());
            }
        }
        t
    }

    /// `λ·M`, scalar on the left of every entry.
    pub fn left_scale(&self, s: &Scalar) -> ScalarMatrix {
        ScalarMatrix {
            field: self.field.max(s.field()),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| *s * *x).collect(),
        }
    }

    /// Square block starting at `(start, start)`.
    pub fn block(&self, start: usize, size: usize) -> ScalarMatrix {
        let mut b = ScalarMatrix::zeros(self.field, size, size);
        for r in 0..size {
            for c in 0..size {
                b.set(r, c, self.get(start + r, start + c));
            }
        }
        b
    }

    pub fn max_abs_diff(&self, o: &ScalarMatrix) -> f64 {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "matrix shapes");
        self.data.iter().zip(&o.data).map(|(a, b)| a.max_abs_diff(b)).fold(0.0, f64::max)
    }

    /// Largest entry modulus.
    pub fn max_norm(&self) -> f64 {
        self.data.iter().map(Scalar::norm).fold(0.0, f64::max)
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    /// `|A A* − I|` entrywise maximum.
    pub fn unitarity_residual(&self) -> f64 {
        self.mul(&self.conj_transpose()).max_abs_diff(&ScalarMatrix::identity(self.field, self.rows))
    }
}
