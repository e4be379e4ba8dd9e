use std::fmt;

use super::scalar::{Field, Scalar, ScalarError};

/// Dense square matrix over a cyclotomic field, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    n: usize,
    entries: Vec<Scalar>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.rows()).finish()
    }
}

impl Matrix {
    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Option<Matrix> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return None;
        }
        Some(Matrix { n, entries: rows.into_iter().flatten().collect() })
    }

    pub fn identity(field: Field, n: usize) -> Matrix {
        let mut entries = vec![field.zero(); n * n];
        for i in 0..n {
            entries[i * n + i] = field.one();
        }
        Matrix { n, entries }
    }

    pub fn scalar(s: Scalar) -> Matrix {
        Matrix { n: 1, entries: vec![s] }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.entries[i * self.n + j] = v;
    }

    pub fn rows(&self) -> Vec<Vec<Scalar>> {
        if self.n == 0 {
            return Vec::new();
        }
        self.entries.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let n = self.n;
        let mut entries = self.entries.clone();
        for i in 0..n {
            for j in 0..n {
                entries[j * n + i] = self.entries[i * n + j].clone();
            }
        }
        Matrix { n, entries }
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.n, other.n, "matrix size mismatch");
        let n = self.n;
        let field = self.entries.first().map(|s| s.field());
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = field.expect("nonempty").zero();
                for k in 0..n {
                    acc += &(self.get(i, k) * other.get(k, j));
                }
                entries.push(acc);
            }
        }
        Matrix { n, entries }
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        Matrix { n: self.n, entries: self.entries.iter().map(|x| x * s).collect() }
    }

    pub fn trace(&self, field: Field) -> Scalar {
        let mut acc = field.zero();
        for i in 0..self.n {
            acc += self.get(i, i);
        }
        acc
    }

    pub fn is_identity(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| if i == j { self.get(i, j).is_one() } else { self.get(i, j).is_zero() }))
    }

    /// Gauss–Jordan inverse; `DivisionByZero` when singular.
    pub fn inverse(&self) -> Result<Matrix, ScalarError> {
        let n = self.n;
        if n == 0 {
            return Ok(self.clone());
        }
        let field = self.entries[0].field();
        let mut a = self.rows();
        let mut b = Matrix::identity(field, n).rows();
        for col in 0..n {
            let piv = (col..n).find(|&r| !a[r][col].is_zero()).ok_or(ScalarError::DivisionByZero)?;
            a.swap(col, piv);
            b.swap(col, piv);
            let inv = a[col][col].inv()?;
            for j in 0..n {
                a[col][j] = &a[col][j] * &inv;
                b[col][j] = &b[col][j] * &inv;
            }
            for r in 0..n {
                if r == col || a[r][col].is_zero() {
                    continue;
                }
                let f = a[r][col].clone();
                for j in 0..n {
                    let t = &f * &a[col][j];
                    a[r][j] -= &t;
                    let t = &f * &b[col][j];
                    b[r][j] -= &t;
                }
            }
        }
        Ok(Matrix::from_rows(b).expect("square"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_round_trip() {
        let f = Field::cyclotomic(5).unwrap();
        let m = Matrix::from_rows(vec![vec![f.zeta(1), f.int(2)], vec![f.int(1), f.zeta(3)]]).unwrap();
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).is_identity());
        assert!(inv.mul(&m).is_identity());
        let sing = Matrix::from_rows(vec![vec![f.int(1), f.int(2)], vec![f.int(2), f.int(4)]]).unwrap();
        assert!(sing.inverse().is_err());
    }
}
