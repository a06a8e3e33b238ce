//! Solvers for `min ‖A - B X C‖_F`.
//!
//! Every minimizer solves the normal equation `B*B X CC* = B*AC*`, and all of
//! them share the reconstruction `B X C = B B† A C† C`. The solvers here
//! return different members of that solution set:
//!
//! * [`ebos_solve`]: reduce `C` by rows, solve `Y CC* = AC*`, reduce `B` by
//!   columns, solve `B*B X = B*Y`. Only block-sized pseudo-inverses are taken.
//! * [`direct_solve`]: the minimum-norm kernel `B† A C†`.
//! * [`independent_solve`]: `X_ij = B_i† A C_j†`, valid when the blocks of `B`
//!   have orthogonal ranges and the blocks of `C` orthogonal co-ranges.
//!
//! Kernels from different methods generally differ; compare reconstructions.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, Stage};
use crate::linalg::{conj_transpose, frobenius_norm, matmul, pinv, Mat, PinvOptions, Scalar};
use crate::partition::{assemble_b, assemble_c, BlockGrid, ColPartition, RowPartition};
use crate::reduction::{reduce_cols, reduce_rows, ColReduction, RowReduction};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Ebos,
    Direct,
    Independent,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Ebos => "ebos",
            Method::Direct => "direct",
            Method::Independent => "independent",
        })
    }
}

#[derive(Debug, Clone)]
pub struct SolveResult<T: Scalar = f64> {
    /// The kernel, `g x h`.
    pub x_plus: Mat<T>,
    /// Intermediate solution of `Y CC* = AC*`, `m x h`.
    pub y_plus: Mat<T>,
    /// `‖A - B X C‖_F`, evaluated from the inputs.
    pub residual: f64,
    pub method: Method,
}

/// Relative threshold on cross-Grammians accepted by [`independent_solve`].
pub const ORTHOGONALITY_TOL: f64 = 1e-10;

fn check_conformable<T: Scalar>(a: &Mat<T>, b: &Mat<T>, c: &Mat<T>, op: &'static str) -> Result<()> {
    if b.rows() != a.rows() {
        return Err(Error::dims(op, format!("B with {} rows", a.rows()), format!("{} rows", b.rows())));
    }
    if c.cols() != a.cols() {
        return Err(Error::dims(op, format!("C with {} columns", a.cols()), format!("{} columns", c.cols())));
    }
    Ok(())
}

/// `B X C`.
pub fn reconstruct<T: Scalar>(b: &Mat<T>, x: &Mat<T>, c: &Mat<T>) -> Result<Mat<T>> {
    matmul(&matmul(b, x)?, c)
}

/// `‖A - B X C‖_F`.
pub fn residual<T: Scalar>(a: &Mat<T>, b: &Mat<T>, x: &Mat<T>, c: &Mat<T>) -> Result<f64> {
    let approx = reconstruct(b, x, c)?;
    if approx.shape() != a.shape() {
        return Err(Error::dims(
            "residual",
            format!("{}x{}", a.rows(), a.cols()),
            format!("{}x{}", approx.rows(), approx.cols()),
        ));
    }
    Ok(frobenius_norm(&(a - &approx)))
}

/// `Y₊ = A [C^{(q-1)}]† F`, where the pseudo-inverse of the reduced stack is
/// the concatenation of the block pseudo-inverses kept by the reduction, and
/// `F` is applied factor by factor.
pub fn solve_y<T: Scalar>(a: &Mat<T>, rr: &RowReduction<T>) -> Result<Mat<T>> {
    if a.cols() != rr.c_reduced.cols() {
        return Err(Error::dims(
            "solve_y",
            format!("A with {} columns", rr.c_reduced.cols()),
            format!("{} columns", a.cols()),
        ));
    }
    let rp = &rr.partition;
    let mut z0 = Mat::zeros(a.rows(), rp.total());
    for (r, bp) in rr.block_pinvs.iter().enumerate() {
        z0.set_submatrix(0, rp.offset(r), &matmul(a, bp)?);
    }
    rr.right_multiply_f(&z0)
}

/// `X₊ = E [B^{(p-1)}]† Y`, with the reduced pseudo-inverse taken blockwise.
pub fn solve_x<T: Scalar>(cr: &ColReduction<T>, y: &Mat<T>) -> Result<Mat<T>> {
    if y.rows() != cr.b_reduced.rows() {
        return Err(Error::dims(
            "solve_x",
            format!("Y with {} rows", cr.b_reduced.rows()),
            format!("{} rows", y.rows()),
        ));
    }
    let cp = &cr.partition;
    let mut w0 = Mat::zeros(cp.total(), y.cols());
    for (r, bp) in cr.block_pinvs.iter().enumerate() {
        w0.set_submatrix(cp.offset(r), 0, &matmul(bp, y)?);
    }
    cr.left_multiply_e(&w0)
}

/// The full elementary-block pipeline: rows of `C`, then `Y₊`, then columns
/// of `B`, then `X₊`. Errors carry the failing [`Stage`].
pub fn ebos_solve<T: Scalar>(
    a: &Mat<T>,
    b: &Mat<T>,
    c: &Mat<T>,
    cp: &ColPartition,
    rp: &RowPartition,
    opts: &PinvOptions,
) -> Result<SolveResult<T>> {
    check_conformable(a, b, c, "ebos_solve")?;
    cp.check_cols(b, "ebos_solve")?;
    rp.check_rows(c, "ebos_solve")?;

    let rr = reduce_rows(c, rp, opts).map_err(Error::at(Stage::ReduceRows))?;
    let y_plus = solve_y(a, &rr).map_err(Error::at(Stage::SolveY))?;
    let cr = reduce_cols(b, cp, opts).map_err(Error::at(Stage::ReduceCols))?;
    let x_plus = solve_x(&cr, &y_plus).map_err(Error::at(Stage::SolveX))?;
    let residual = residual(a, b, &x_plus, c).map_err(Error::at(Stage::Residual))?;
    Ok(SolveResult {
        x_plus,
        y_plus,
        residual,
        method: Method::Ebos,
    })
}

/// Minimum-norm kernel `X₀ = B† A C†` from full-size pseudo-inverses.
/// `y_plus` holds `Y₀ = A C†`.
pub fn direct_solve<T: Scalar>(
    a: &Mat<T>,
    b: &Mat<T>,
    c: &Mat<T>,
    opts: &PinvOptions,
) -> Result<SolveResult<T>> {
    check_conformable(a, b, c, "direct_solve")?;
    let y0 = matmul(a, &pinv(c, opts)?)?;
    let x0 = matmul(&pinv(b, opts)?, &y0)?;
    let residual = residual(a, b, &x0, c)?;
    Ok(SolveResult {
        x_plus: x0,
        y_plus: y0,
        residual,
        method: Method::Direct,
    })
}

fn check_mutual_orthogonality<T: Scalar>(
    which: &'static str,
    blocks: &[Mat<T>],
    cross: impl Fn(&Mat<T>, &Mat<T>) -> Result<Mat<T>>,
) -> Result<()> {
    for i in 0..blocks.len() {
        for j in i + 1..blocks.len() {
            let norm = frobenius_norm(&cross(&blocks[i], &blocks[j])?);
            let threshold = ORTHOGONALITY_TOL
                * (1.0 + frobenius_norm(&blocks[i]) * frobenius_norm(&blocks[j]));
            if norm > threshold {
                return Err(Error::NotOrthogonal {
                    which,
                    first: i + 1,
                    second: j + 1,
                    norm,
                    threshold,
                });
            }
        }
    }
    Ok(())
}

/// `X_ij = B_i† A C_j†` for mutually orthogonal blocks.
///
/// Fails with [`Error::NotOrthogonal`] naming the first block pair whose
/// cross-Grammian (`B_i* B_j` or `C_i C_j*`) exceeds
/// `ORTHOGONALITY_TOL * (1 + ‖·‖_F ‖·‖_F)`.
pub fn independent_solve<T: Scalar>(
    a: &Mat<T>,
    b_blocks: &[Mat<T>],
    c_blocks: &[Mat<T>],
    opts: &PinvOptions,
) -> Result<BlockGrid<T>> {
    let (b, cp) = assemble_b(b_blocks)?;
    let (c, rp) = assemble_c(c_blocks)?;
    check_conformable(a, &b, &c, "independent_solve")?;
    check_mutual_orthogonality("B", b_blocks, |x, y| matmul(&conj_transpose(x), y))?;
    check_mutual_orthogonality("C", c_blocks, |x, y| matmul(x, &conj_transpose(y)))?;

    let c_pinvs = c_blocks
        .iter()
        .map(|cj| pinv(cj, opts))
        .collect::<Result<Vec<_>>>()?;
    let mut grid = Vec::with_capacity(b_blocks.len());
    for bi in b_blocks {
        let left = matmul(&pinv(bi, opts)?, a)?;
        let row = c_pinvs
            .iter()
            .map(|cjp| matmul(&left, cjp))
            .collect::<Result<Vec<_>>>()?;
        grid.push(row);
    }
    BlockGrid::from_blocks(grid, cp, rp)
}

/// [`independent_solve`] packaged as a [`SolveResult`]; `y_plus` holds `A C†`
/// assembled from the blocks `A C_j†`.
pub fn independent_solve_result<T: Scalar>(
    a: &Mat<T>,
    b_blocks: &[Mat<T>],
    c_blocks: &[Mat<T>],
    opts: &PinvOptions,
) -> Result<SolveResult<T>> {
    let grid = independent_solve(a, b_blocks, c_blocks, opts)?;
    let (b, _) = assemble_b(b_blocks)?;
    let (c, _) = assemble_c(c_blocks)?;
    let y_parts = c_blocks
        .iter()
        .map(|cj| matmul(a, &pinv(cj, opts)?))
        .collect::<Result<Vec<_>>>()?;
    let y_refs: Vec<&Mat<T>> = y_parts.iter().collect();
    let x_plus = grid.assemble();
    let residual = residual(a, &b, &x_plus, &c)?;
    Ok(SolveResult {
        x_plus,
        y_plus: Mat::hstack(&y_refs)?,
        residual,
        method: Method::Independent,
    })
}

/// Dispatches on `method`. The independent route splits `B` and `C` along
/// `cp` and `rp`; the direct route ignores the partitions.
pub fn solve<T: Scalar>(
    method: Method,
    a: &Mat<T>,
    b: &Mat<T>,
    c: &Mat<T>,
    cp: &ColPartition,
    rp: &RowPartition,
    opts: &PinvOptions,
) -> Result<SolveResult<T>> {
    match method {
        Method::Ebos => ebos_solve(a, b, c, cp, rp, opts),
        Method::Direct => direct_solve(a, b, c, opts),
        Method::Independent => {
            cp.check_cols(b, "independent_solve")?;
            rp.check_rows(c, "independent_solve")?;
            let b_blocks: Vec<_> = (0..cp.len()).map(|i| b.col_range(cp.offset(i), cp.size(i))).collect();
            let c_blocks: Vec<_> = (0..rp.len()).map(|j| c.row_range(rp.offset(j), rp.size(j))).collect();
            independent_solve_result(a, &b_blocks, &c_blocks, opts)
        }
    }
}

/// `‖B X₊ C x - A x‖₂` for a column vector `x`.
///
/// When `x` lies in the row space of `C` and `A x` in the range of `B`, the
/// optimal mapping reproduces `A` exactly on `x` and this is zero up to
/// rounding. Outside those conditions it simply measures the gap.
pub fn exactness_check<T: Scalar>(
    a: &Mat<T>,
    b: &Mat<T>,
    c: &Mat<T>,
    result: &SolveResult<T>,
    x_vec: &Mat<T>,
) -> Result<f64> {
    if x_vec.shape() != (a.cols(), 1) {
        return Err(Error::dims(
            "exactness_check",
            format!("{}x1 vector", a.cols()),
            format!("{}x{}", x_vec.rows(), x_vec.cols()),
        ));
    }
    let cx = matmul(c, x_vec)?;
    let mapped = matmul(b, &matmul(&result.x_plus, &cx)?)?;
    Ok(frobenius_norm(&(&mapped - &matmul(a, x_vec)?)))
}
