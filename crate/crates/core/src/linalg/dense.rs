use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::scalars::{Field, Gauss, Q};

/// Dense row-major matrix over an exact field.
#[derive(Clone, PartialEq)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Rref<F> {
    pub matrix: Matrix<F>,
    pub pivots: Vec<usize>,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![F::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = F::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> F) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Builds a matrix from rows; all rows must share the length `cols`.
    pub fn from_rows(rows: Vec<Vec<F>>, cols: usize) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend(r);
        }
        Matrix { rows: n, cols, data }
    }

    /// Builds a matrix whose columns are the given vectors of length `rows`.
    pub fn from_cols(cols: &[Vec<F>], rows: usize) -> Self {
        Matrix::from_fn(rows, cols.len(), |i, j| cols[j][i].clone())
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

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<F> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|a| a.is_zero())
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Matrix<G> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn scale(&self, c: &F) -> Self {
        self.map(|a| a.mul_ref(c))
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        assert_eq!(v.len(), self.cols, "dimension mismatch");
        (0..self.rows)
            .map(|i| {
                self.row(i).iter().zip(v).fold(F::zero(), |acc, (a, b)| {
                    if a.is_zero() || b.is_zero() {
                        acc
                    } else {
                        acc.add_ref(&a.mul_ref(b))
                    }
                })
            })
            .collect()
    }

    pub fn mul_ref(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "dimension mismatch");
        let mut out: Matrix<F> = Matrix::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = &o[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] = out[(i, j)].add_ref(&a.mul_ref(b));
                    }
                }
            }
        }
        out
    }

    /// Commutator `AB − BA`.
    pub fn commutator(&self, o: &Self) -> Self {
        self.mul_ref(o) - o.mul_ref(self)
    }

    /// Graded commutator `AB − (−1)^{|A||B|} BA`.
    pub fn graded_commutator(&self, deg_a: i64, o: &Self, deg_b: i64) -> Self {
        if (deg_a * deg_b).rem_euclid(2) == 0 {
            self.commutator(o)
        } else {
            self.mul_ref(o) + o.mul_ref(self)
        }
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Matrix::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])].clone())
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, o: &Self) -> Self {
        let mut m = Matrix::zeros(self.rows + o.rows, self.cols + o.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = self[(i, j)].clone();
            }
        }
        for i in 0..o.rows {
            for j in 0..o.cols {
                m[(self.rows + i, self.cols + j)] = o[(i, j)].clone();
            }
        }
        m
    }

    /// Kronecker product.
    pub fn kron(&self, o: &Self) -> Self {
        Matrix::from_fn(self.rows * o.rows, self.cols * o.cols, |i, j| {
            self[(i / o.rows, j / o.cols)].mul_ref(&o[(i % o.rows, j % o.cols)])
        })
    }

    pub fn hstack(&self, o: &Self) -> Self {
        assert_eq!(self.rows, o.rows, "dimension mismatch");
        Matrix::from_fn(self.rows, self.cols + o.cols, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                o[(i, j - self.cols)].clone()
            }
        })
    }

    pub fn vstack(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.cols, "dimension mismatch");
        Matrix::from_fn(self.rows + o.rows, self.cols, |i, j| {
            if i < self.rows {
                self[(i, j)].clone()
            } else {
                o[(i - self.rows, j)].clone()
            }
        })
    }

    pub fn rref(&self) -> Rref<F> {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m[(r, c)].inv().expect("nonzero pivot");
            for j in c..m.cols {
                m[(r, j)] = m[(r, j)].mul_ref(&inv);
            }
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].clone();
                for j in c..m.cols {
                    if !m[(r, j)].is_zero() {
                        let t = f.mul_ref(&m[(r, j)]);
                        m[(i, j)] = m[(i, j)].sub_ref(&t);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        Rref { matrix: m, pivots }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Basis of the null space, as vectors of length `cols`, in the standard
    /// order given by the free columns of the echelon form.
    pub fn kernel(&self) -> Vec<Vec<F>> {
        let Rref { matrix, pivots } = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![F::zero(); self.cols];
                v[f] = F::one();
                for (r, &p) in pivots.iter().enumerate() {
                    v[p] = -matrix[(r, f)].clone();
                }
                v
            })
            .collect()
    }

    /// Basis of the column space, taken from the pivot columns.
    pub fn image(&self) -> Vec<Vec<F>> {
        self.rref().pivots.iter().map(|&c| self.col(c)).collect()
    }

    /// Some solution of `self · x = b`, or `None` if inconsistent.
    pub fn solve(&self, b: &[F]) -> Option<Vec<F>> {
        assert_eq!(b.len(), self.rows, "dimension mismatch");
        let aug = self.hstack(&Matrix::from_cols(&[b.to_vec()], self.rows));
        let Rref { matrix, pivots } = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![F::zero(); self.cols];
        for (r, &p) in pivots.iter().enumerate() {
            x[p] = matrix[(r, self.cols)].clone();
        }
        Some(x)
    }

    /// Solves `self · X = B` column by column.
    pub fn solve_matrix(&self, b: &Self) -> Option<Self> {
        let cols: Option<Vec<Vec<F>>> = (0..b.cols).map(|j| self.solve(&b.col(j))).collect();
        cols.map(|c| Matrix::from_cols(&c, self.cols))
    }

    pub fn inverse(&self) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let Rref { matrix, pivots } = self.hstack(&Matrix::identity(n)).rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(Matrix::from_fn(n, n, |i, j| matrix[(i, n + j)].clone()))
    }

    pub fn det(&self) -> F {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let mut m = self.clone();
        let mut det = F::one();
        for c in 0..m.cols {
            let Some(p) = (c..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                return F::zero();
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let piv = m[(c, c)].clone();
            det = det.mul_ref(&piv);
            let inv = piv.inv().expect("nonzero pivot");
            for i in c + 1..m.rows {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].mul_ref(&inv);
                for j in c..m.cols {
                    let t = f.mul_ref(&m[(c, j)]);
                    m[(i, j)] = m[(i, j)].sub_ref(&t);
                }
            }
        }
        det
    }

    /// Entries that differ between two equally-shaped matrices.
    pub fn first_difference(&self, o: &Self) -> Option<(usize, usize)> {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "dimension mismatch");
        (0..self.rows)
            .flat_map(|i| (0..self.cols).map(move |j| (i, j)))
            .find(|&(i, j)| self[(i, j)] != o[(i, j)])
    }

    pub fn pow(&self, k: usize) -> Self {
        (0..k).fold(Matrix::identity(self.rows), |acc, _| acc.mul_ref(self))
    }
}

impl Matrix<Q> {
    pub fn complexify(&self) -> Matrix<Gauss> {
        self.map(|a| Gauss::real(a.clone()))
    }
}

impl Matrix<Gauss> {
    pub fn conj(&self) -> Self {
        self.map(|a| a.conj())
    }

    pub fn is_real(&self) -> bool {
        self.data.iter().all(|a| a.is_real())
    }

    pub fn real_part(&self) -> Matrix<Q> {
        self.map(|a| a.re.clone())
    }

    pub fn imag_part(&self) -> Matrix<Q> {
        self.map(|a| a.im.clone())
    }
}

impl<F> std::ops::Index<(usize, usize)> for Matrix<F> {
    type Output = F;
    fn index(&self, (i, j): (usize, usize)) -> &F {
        &self.data[i * self.cols + j]
    }
}

impl<F> std::ops::IndexMut<(usize, usize)> for Matrix<F> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut F {
        &mut self.data[i * self.cols + j]
    }
}

impl<F: Field> Add for Matrix<F> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "dimension mismatch");
        let data = self.data.iter().zip(&o.data).map(|(a, b)| a.add_ref(b)).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }
}

impl<F: Field> Sub for Matrix<F> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "dimension mismatch");
        let data = self.data.iter().zip(&o.data).map(|(a, b)| a.sub_ref(b)).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }
}

impl<F: Field> Neg for Matrix<F> {
    type Output = Self;
    fn neg(self) -> Self {
        self.map(|a| -a.clone())
    }
}

impl<F: Field> Mul for Matrix<F> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        self.mul_ref(&o)
    }
}

impl<F: Field> Mul for &Matrix<F> {
    type Output = Matrix<F>;
    fn mul(self, o: &Matrix<F>) -> Matrix<F> {
        self.mul_ref(o)
    }
}

impl<F: fmt::Debug> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", &self.data[i * self.cols..(i + 1) * self.cols])?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{q_frac, q_int};

    fn qm(rows: &[&[i64]]) -> Matrix<Q> {
        let cols = rows.first().map_or(0, |r| r.len());
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&a| q_int(a)).collect()).collect(), cols)
    }

    #[test]
    fn rank_kernel_image() {
        let m = qm(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(m.rank(), 2);
        let k = m.kernel();
        assert_eq!(k.len(), 1);
        assert!(m.mul_vec(&k[0]).iter().all(|a| Field::is_zero(a)));
        assert_eq!(m.image().len(), 2);
    }

    #[test]
    fn inverse_and_det() {
        let m = qm(&[&[2, 1], &[5, 3]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul_ref(&inv), Matrix::identity(2));
        assert_eq!(m.det(), q_int(1));
        assert!(qm(&[&[1, 2], &[2, 4]]).inverse().is_none());
        let h = Matrix::from_fn(3, 3, |i, j| q_frac(1, (i + j + 1) as i64));
        assert_eq!(h.det(), q_frac(1, 2160));
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let m = qm(&[&[1, 1], &[1, 1]]);
        assert!(m.solve(&[q_int(1), q_int(2)]).is_none());
        let x = m.solve(&[q_int(3), q_int(3)]).unwrap();
        assert_eq!(m.mul_vec(&x), vec![q_int(3), q_int(3)]);
    }

    #[test]
    fn gaussian_rank() {
        // rows (1, i) and (i, -1) are proportional over ℚ(i)
        let i = Gauss::i();
        let one = Gauss::one();
        let m = Matrix::from_rows(vec![vec![one.clone(), i.clone()], vec![i.clone(), -one.clone()]], 2);
        assert_eq!(m.rank(), 1);
    }
}
