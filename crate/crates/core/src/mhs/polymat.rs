use serde::{Deserialize, Serialize};

use crate::linalg::Matrix;
use crate::scalars::{q_to_string, Field, Gauss, Poly, RatFunc, Q};

/// Matrix with entries in 𝒮 = ℚ[x], stored as `Σ_k A_k x^k`.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    coeffs: Vec<Matrix<Q>>,
}

impl PolyMatrix {
    pub fn new(rows: usize, cols: usize, mut coeffs: Vec<Matrix<Q>>) -> Self {
        assert!(coeffs.iter().all(|c| c.rows() == rows && c.cols() == cols), "shape mismatch");
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        PolyMatrix { rows, cols, coeffs }
    }

    pub fn constant(m: Matrix<Q>) -> Self {
        PolyMatrix::new(m.rows(), m.cols(), vec![m])
    }

    pub fn identity(n: usize) -> Self {
        PolyMatrix::constant(Matrix::identity(n))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Coefficient matrices `A_0, A_1, ...`.
    pub fn coeffs(&self) -> &[Matrix<Q>] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Matrix<Q> {
        self.coeffs.get(k).cloned().unwrap_or_else(|| Matrix::zeros(self.rows, self.cols))
    }

    /// Polynomial degree; `None` for the zero matrix.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn entry(&self, i: usize, j: usize) -> Poly<Q> {
        Poly::new(self.coeffs.iter().map(|c| c[(i, j)].clone()).collect())
    }

    pub fn mul_ref(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "dimension mismatch");
        if self.coeffs.is_empty() || o.coeffs.is_empty() {
            return PolyMatrix::new(self.rows, o.cols, vec![]);
        }
        let mut out = vec![Matrix::zeros(self.rows, o.cols); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.mul_ref(b);
            }
        }
        PolyMatrix::new(self.rows, o.cols, out)
    }

    pub fn sub_ref(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        PolyMatrix::new(self.rows, self.cols, (0..n).map(|k| self.coeff(k) - o.coeff(k)).collect())
    }

    pub fn add_ref(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        PolyMatrix::new(self.rows, self.cols, (0..n).map(|k| self.coeff(k) + o.coeff(k)).collect())
    }

    pub fn eval(&self, t: &Q) -> Matrix<Q> {
        self.coeffs
            .iter()
            .rev()
            .fold(Matrix::zeros(self.rows, self.cols), |acc, c| acc.scale(t) + c.clone())
    }

    /// Image of a complex vector: one polynomial per row, over ℚ(i)[x].
    pub fn apply_complex(&self, v: &[Gauss]) -> Vec<Poly<Gauss>> {
        (0..self.rows)
            .map(|i| {
                Poly::new(
                    self.coeffs
                        .iter()
                        .map(|c| {
                            (0..self.cols).fold(Gauss::zero(), |acc, j| {
                                acc.add_ref(&Gauss::real(c[(i, j)].clone()).mul_ref(&v[j]))
                            })
                        })
                        .collect(),
                )
            })
            .collect()
    }

    pub fn to_ratfunc(&self) -> Matrix<RatFunc> {
        Matrix::from_fn(self.rows, self.cols, |i, j| RatFunc::poly(self.entry(i, j)))
    }

    /// Converts back from rational functions; `None` if some entry has a
    /// nonconstant denominator.
    pub fn from_ratfunc(m: &Matrix<RatFunc>) -> Option<Self> {
        let mut deg = 0;
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                if m[(i, j)].den().degree() != Some(0) {
                    return None;
                }
                deg = deg.max(m[(i, j)].num().degree().unwrap_or(0));
            }
        }
        let coeffs = (0..=deg)
            .map(|k| Matrix::from_fn(m.rows(), m.cols(), |i, j| m[(i, j)].num().coeff(k)))
            .collect();
        Some(PolyMatrix::new(m.rows(), m.cols(), coeffs))
    }

    /// Inverse over 𝒮; `None` unless the determinant is a nonzero constant.
    ///
    /// When the constant term `C` is invertible and `C⁻¹φ − I` is nilpotent
    /// the inverse is a finite geometric series; otherwise it is computed over
    /// ℚ(x).
    pub fn inverse(&self) -> Option<Self> {
        if self.rows != self.cols {
            return None;
        }
        if let Some(c0inv) = self.coeff(0).inverse() {
            let c = PolyMatrix::constant(c0inv.clone());
            let m = c.mul_ref(self).sub_ref(&PolyMatrix::identity(self.rows));
            let mut term = PolyMatrix::identity(self.rows);
            let mut sum = term.clone();
            for _ in 0..self.rows {
                term = PolyMatrix::new(self.rows, self.rows, vec![]).sub_ref(&term.mul_ref(&m));
                if term.coeffs.is_empty() {
                    return Some(sum.mul_ref(&c));
                }
                sum = sum.add_ref(&term);
            }
        }
        let inv = self.to_ratfunc().inverse()?;
        PolyMatrix::from_ratfunc(&inv)
    }

    /// `φ ψ = ψ φ = I`.
    pub fn is_inverse_of(&self, o: &Self) -> bool {
        let id = PolyMatrix::identity(self.rows);
        self.mul_ref(o) == id && o.mul_ref(self) == id
    }

    pub fn det(&self) -> RatFunc {
        self.to_ratfunc().det()
    }
}

#[derive(Serialize, Deserialize)]
struct PolyMatrixRepr {
    rows: usize,
    cols: usize,
    /// `coeffs[k][i][j]` is the coefficient of `x^k` in entry `(i, j)`.
    coeffs: Vec<Vec<Vec<String>>>,
}

impl Serialize for PolyMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| (0..self.rows).map(|i| (0..self.cols).map(|j| q_to_string(&c[(i, j)])).collect()).collect())
            .collect();
        PolyMatrixRepr { rows: self.rows, cols: self.cols, coeffs }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for PolyMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = PolyMatrixRepr::deserialize(d)?;
        let mut coeffs = Vec::new();
        for c in r.coeffs {
            let mut rows = Vec::new();
            for row in c {
                let parsed: Result<Vec<Q>, _> = row.iter().map(|s| crate::scalars::q_parse(s)).collect();
                rows.push(parsed.map_err(serde::de::Error::custom)?);
            }
            if rows.len() != r.rows || rows.iter().any(|x| x.len() != r.cols) {
                return Err(serde::de::Error::custom("polynomial matrix shape mismatch"));
            }
            coeffs.push(Matrix::from_rows(rows, r.cols));
        }
        Ok(PolyMatrix::new(r.rows, r.cols, coeffs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::q_int;

    #[test]
    fn unipotent_inverse() {
        let mut n = Matrix::zeros(2, 2);
        n[(1, 0)] = q_int(1);
        let phi = PolyMatrix::new(2, 2, vec![Matrix::identity(2), n]);
        let inv = phi.inverse().unwrap();
        assert_eq!(phi.mul_ref(&inv), PolyMatrix::identity(2));
        assert_eq!(inv.degree(), Some(1));
    }

    #[test]
    fn non_unit_determinant_has_no_inverse() {
        let mut a = Matrix::zeros(1, 1);
        a[(0, 0)] = q_int(1);
        let p = PolyMatrix::new(1, 1, vec![Matrix::zeros(1, 1), a]);
        assert!(p.inverse().is_none());
    }

    #[test]
    fn serde_round_trip() {
        let mut n = Matrix::zeros(2, 2);
        n[(1, 0)] = crate::scalars::q_frac(-1, 3);
        let phi = PolyMatrix::new(2, 2, vec![Matrix::identity(2), n]);
        let s = serde_json::to_string(&phi).unwrap();
        let back: PolyMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(back, phi);
    }
}
