#![allow(dead_code)]

use hodge_homotopy::filt::Filtration;
use hodge_homotopy::linalg::{Matrix, Subspace};
use hodge_homotopy::mhs::{MixedStructure, WeightFiltration};
use hodge_homotopy::scalars::{q_frac, q_int, Field, Gauss, Q};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn small_q(r: &mut impl Rng) -> Q {
    q_frac(r.gen_range(-3..=3), r.gen_range(1..=2))
}

pub fn small_int(r: &mut impl Rng) -> Q {
    q_int(r.gen_range(-2..=2))
}

pub fn small_gauss(r: &mut impl Rng) -> Gauss {
    Gauss::new(small_int(r), small_int(r))
}

/// Random invertible rational matrix with small integer entries.
pub fn random_gl(r: &mut impl Rng, n: usize) -> Matrix<Q> {
    loop {
        let m = Matrix::from_fn(n, n, |_, _| small_int(r));
        if m.inverse().is_some() {
            return m;
        }
    }
}

/// Random pure Hodge structure of weight `n` and dimension `dim`, as a basis
/// of `V ⊗ ℂ` (columns) together with the Hodge level of each basis vector.
fn pure_piece(r: &mut impl Rng, n: i64, dim: usize) -> (Matrix<Gauss>, Vec<i64>) {
    let mut cols: Vec<Vec<Gauss>> = Vec::new();
    let mut levels = Vec::new();
    let mut k = 0;
    while k < dim {
        let can_pair = k + 2 <= dim;
        let even = n % 2 == 0;
        if can_pair && (!even || r.gen_bool(0.5)) {
            // (p, q) and (q, p) with p > q.
            let p = n.div_euclid(2) + 1 + r.gen_range(0..2);
            let mut a = vec![Gauss::zero(); dim];
            let mut b = vec![Gauss::zero(); dim];
            a[k] = Gauss::one();
            a[k + 1] = Gauss::i();
            b[k] = Gauss::one();
            b[k + 1] = -Gauss::i();
            cols.push(a);
            cols.push(b);
            levels.push(p);
            levels.push(n - p);
            k += 2;
        } else if even {
            cols.push(hodge_homotopy::linalg::unit(dim, k));
            levels.push(n / 2);
            k += 1;
        } else {
            unreachable!("odd weight pieces have even dimension");
        }
    }
    let basis = Matrix::from_cols(&cols, dim);
    let g = random_gl(r, dim).complexify();
    (g.mul_ref(&basis), levels)
}

/// Random mixed Hodge structure of dimension at most `max_dim` with at most
/// `max_weights` weights, glued by a random unipotent complex map and
/// scrambled by a random rational change of basis.
pub fn random_mhs(r: &mut impl Rng, max_dim: usize, max_weights: usize) -> MixedStructure {
    let nw = r.gen_range(1..=max_weights);
    let mut pool: Vec<i64> = (-3..=3).collect();
    pool.shuffle(r);
    let mut weights: Vec<i64> = pool[..nw].to_vec();
    weights.sort();
    let mut dims = Vec::new();
    let mut budget = max_dim;
    for (idx, &w) in weights.iter().enumerate() {
        let min = if w % 2 == 0 { 1 } else { 2 };
        let reserve: usize = weights[idx + 1..].iter().map(|w| if w % 2 == 0 { 1 } else { 2 }).sum();
        let avail = budget.saturating_sub(reserve);
        if avail < min {
            dims.push(0);
            continue;
        }
        let mut d = r.gen_range(min..=avail.min(min + 2));
        if w % 2 != 0 {
            d -= d % 2;
        }
        dims.push(d);
        budget -= d;
    }
    let pieces: Vec<(i64, usize)> = weights.into_iter().zip(dims).filter(|(_, d)| *d > 0).collect();
    let total: usize = pieces.iter().map(|p| p.1).sum();
    let mut basis = Matrix::zeros(total, total);
    let mut levels = Vec::new();
    let mut wts = Vec::new();
    let mut off = 0;
    for &(n, d) in &pieces {
        let (b, l) = pure_piece(r, n, d);
        for i in 0..d {
            for j in 0..d {
                basis[(off + i, off + j)] = b[(i, j)].clone();
            }
        }
        levels.extend(l);
        wts.extend(std::iter::repeat_n(n, d));
        off += d;
    }
    // Unipotent gluing: entries from weight-c columns to lower-weight rows.
    let glue = Matrix::from_fn(total, total, |i, j| {
        if i == j {
            Gauss::one()
        } else if wts[i] < wts[j] {
            small_gauss(r)
        } else {
            Gauss::zero()
        }
    });
    let hodge = Filtration::from_levels(&levels).transform(&glue.mul_ref(&basis));
    let m = MixedStructure::mhs(WeightFiltration::from_weights(&wts), hodge).expect("valid");
    m.change_basis(&random_gl(r, total)).expect("invertible")
}

/// Random permutation matrix.
pub fn random_permutation(r: &mut impl Rng, n: usize) -> Matrix<Q> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(r);
    Matrix::from_fn(n, n, |i, j| if p[i] == j { Q::one() } else { Q::zero() })
}

pub fn span_g(dim: usize, v: &[Vec<Gauss>]) -> Subspace<Gauss> {
    Subspace::span(dim, v)
}
