//! Test-side oracles, coded independently of the library numerics: plain
//! row-major arrays, a triple-loop product, and a one-sided Jacobi SVD.

#![allow(dead_code)]

pub mod golden;

use std::path::PathBuf;

use ebos::io::read_matrix;
use ebos::{assemble_b, assemble_c, ColPartition, Mat, RowPartition};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Row-major dense matrix used only by the oracles.
#[derive(Clone, Debug)]
pub struct Dense {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl Dense {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Dense { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn from_mat(m: &Mat) -> Self {
        Dense { rows: m.rows(), cols: m.cols(), data: m.to_row_major() }
    }

    pub fn to_mat(&self) -> Mat {
        Mat::from_row_slice(self.rows, self.cols, &self.data).unwrap()
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }

    pub fn t(&self) -> Dense {
        let mut out = Dense::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                *out.at_mut(j, i) = self.at(i, j);
            }
        }
        out
    }

    pub fn mul(&self, other: &Dense) -> Dense {
        assert_eq!(self.cols, other.rows, "oracle product shape");
        let mut out = Dense::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.at(k, j);
                }
            }
        }
        out
    }

    pub fn sub(&self, other: &Dense) -> Dense {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Dense {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn fro(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }
}

/// Singular values and vectors by one-sided Jacobi rotations on the
/// columns of a tall matrix: returns `(U, sigma, V)` with `M = U diag(sigma) Vᵀ`.
fn jacobi_svd_tall(m: &Dense) -> (Dense, Vec<f64>, Dense) {
    let (rows, cols) = (m.rows, m.cols);
    let mut u = m.clone();
    let mut v = Dense::zeros(cols, cols);
    for i in 0..cols {
        *v.at_mut(i, i) = 1.0;
    }
    for _sweep in 0..100 {
        let mut rotated = false;
        for p in 0..cols {
            for q in p + 1..cols {
                let (mut alpha, mut beta, mut gamma) = (0.0, 0.0, 0.0);
                for i in 0..rows {
                    let (x, y) = (u.at(i, p), u.at(i, q));
                    alpha += x * x;
                    beta += y * y;
                    gamma += x * y;
                }
                if gamma.abs() <= 1e-15 * (alpha * beta).sqrt() || gamma == 0.0 {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for i in 0..rows {
                    let (x, y) = (u.at(i, p), u.at(i, q));
                    *u.at_mut(i, p) = c * x - s * y;
                    *u.at_mut(i, q) = s * x + c * y;
                }
                for i in 0..cols {
                    let (x, y) = (v.at(i, p), v.at(i, q));
                    *v.at_mut(i, p) = c * x - s * y;
                    *v.at_mut(i, q) = s * x + c * y;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut sigma = Vec::with_capacity(cols);
    for j in 0..cols {
        let norm = (0..rows).map(|i| u.at(i, j).powi(2)).sum::<f64>().sqrt();
        sigma.push(norm);
        if norm > 0.0 {
            for i in 0..rows {
                *u.at_mut(i, j) /= norm;
            }
        }
    }
    (u, sigma, v)
}

/// Pseudo-inverse through the Jacobi SVD with cutoff
/// `max(rows, cols) * eps * sigma_max`.
pub fn oracle_pinv(m: &Dense) -> Dense {
    oracle_pinv_tol(m, None)
}

/// Pseudo-inverse dropping singular values at or below `tol`
/// (default `max(r, c) * eps * sigma_max`).
pub fn oracle_pinv_tol(m: &Dense, tol: Option<f64>) -> Dense {
    if m.rows < m.cols {
        return oracle_pinv_tol(&m.t(), tol).t();
    }
    let (u, sigma, v) = jacobi_svd_tall(m);
    let smax = sigma.iter().cloned().fold(0.0, f64::max);
    let tol = tol.unwrap_or(m.rows.max(m.cols) as f64 * f64::EPSILON * smax);
    let mut out = Dense::zeros(m.cols, m.rows);
    for (k, &s) in sigma.iter().enumerate() {
        if s <= tol || s == 0.0 {
            continue;
        }
        for i in 0..m.cols {
            let vik = v.at(i, k) / s;
            for j in 0..m.rows {
                out.data[i * m.rows + j] += vik * u.at(j, k);
            }
        }
    }
    out
}

pub fn oracle_singular_values(m: &Dense) -> Vec<f64> {
    let tall = if m.rows < m.cols { m.t() } else { m.clone() };
    let mut s = jacobi_svd_tall(&tall).1;
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Minimum-norm kernel `B† A C†` from oracle pseudo-inverses.
pub fn oracle_x0(a: &Mat, b: &Mat, c: &Mat) -> Dense {
    let (a, b, c) = (Dense::from_mat(a), Dense::from_mat(b), Dense::from_mat(c));
    oracle_pinv(&b).mul(&a).mul(&oracle_pinv(&c))
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Entries uniform on `[-1, 1)`.
pub fn rand_mat(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Mat {
    Mat::from_fn(rows, cols, |_, _| rng.random_range(-1.0..1.0))
}

/// `rows x cols` with rank at most `rank`.
pub fn low_rank(rng: &mut ChaCha8Rng, rows: usize, cols: usize, rank: usize) -> Mat {
    let l = rand_mat(rng, rows, rank);
    let r = rand_mat(rng, rank, cols);
    ebos::matmul(&l, &r).unwrap()
}

pub fn fixture(name: &str) -> Mat {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "fixtures", name].iter().collect();
    read_matrix(path).unwrap()
}

pub fn mat(rows: &[&[f64]]) -> Mat {
    Mat::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
}

/// Rows of integers scaled by `1/den`.
pub fn scaled(rows: &[&[i64]], den: f64) -> Mat {
    Mat::from_rows(
        &rows
            .iter()
            .map(|r| r.iter().map(|&v| v as f64 / den).collect())
            .collect::<Vec<_>>(),
    )
    .unwrap()
}

/// `count` block sizes drawn from `1..=max`.
pub fn rand_sizes(rng: &mut ChaCha8Rng, count: usize, max: usize) -> Vec<usize> {
    (0..count).map(|_| rng.random_range(1..=max)).collect()
}

/// A random instance with a mix of full-rank, low-rank, zero and
/// linearly dependent blocks in both `B` and `C`.
pub struct Instance {
    pub a: Mat,
    pub b: Mat,
    pub c: Mat,
    pub cp: ColPartition,
    pub rp: RowPartition,
}

fn mixed_block(rng: &mut ChaCha8Rng, rows: usize, cols: usize, earlier: &[Mat], by_cols: bool) -> Mat {
    match rng.random_range(0..10) {
        0..=4 => rand_mat(rng, rows, cols),
        5..=6 => {
            let rank = rng.random_range(1..=rows.min(cols));
            low_rank(rng, rows, cols, rank)
        }
        7 => Mat::zeros(rows, cols),
        _ if earlier.is_empty() => rand_mat(rng, rows, cols),
        _ => {
            let src = &earlier[rng.random_range(0..earlier.len())];
            if by_cols {
                // Columns in the span of an earlier block of B.
                let g = rand_mat(rng, src.cols(), cols);
                ebos::matmul(src, &g).unwrap()
            } else {
                let g = rand_mat(rng, rows, src.rows());
                ebos::matmul(&g, src).unwrap()
            }
        }
    }
}

pub fn mixed_instance(seed: u64) -> Instance {
    let mut rng = rng(seed);
    let m = rng.random_range(10..=60);
    let n = rng.random_range(10..=60);
    let p = rng.random_range(1..=4);
    let q = rng.random_range(1..=4);
    let gs = rand_sizes(&mut rng, p, 6);
    let hs = rand_sizes(&mut rng, q, 6);
    let mut b_blocks = Vec::new();
    for &g in &gs {
        let blk = mixed_block(&mut rng, m, g, &b_blocks, true);
        b_blocks.push(blk);
    }
    let mut c_blocks = Vec::new();
    for &h in &hs {
        let blk = mixed_block(&mut rng, h, n, &c_blocks, false);
        c_blocks.push(blk);
    }
    let (b, cp) = assemble_b(&b_blocks).unwrap();
    let (c, rp) = assemble_c(&c_blocks).unwrap();
    let a = rand_mat(&mut rng, m, n);
    Instance { a, b, c, cp, rp }
}

/// Largest Frobenius norm over the off-diagonal blocks of a square matrix
/// partitioned by `sizes` on both sides.
pub fn max_offdiag_block_norm(m: &Mat, sizes: &[usize]) -> f64 {
    let mut offs = vec![0];
    for s in sizes {
        offs.push(offs.last().unwrap() + s);
    }
    let mut worst: f64 = 0.0;
    for i in 0..sizes.len() {
        for j in 0..sizes.len() {
            if i != j {
                let blk = m.submatrix(offs[i], offs[j], sizes[i], sizes[j]);
                worst = worst.max(ebos::frobenius_norm(&blk));
            }
        }
    }
    worst
}
