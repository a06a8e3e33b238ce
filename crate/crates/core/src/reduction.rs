//! Elementary block reductions of `C` (by rows) and `B` (by columns).
//!
//! Row reduction of `C = [C_1; ...; C_q]` runs `q - 1` stages. Stage `r`
//! takes the current pivot block `P = C_r^{(r-1)}` and replaces every block
//! below it by `M (I - P† P)`, recording the multiplier `-M P†` in the
//! elementary factor `F_r`. Afterwards the blocks of `C^{(q-1)} = F C` are
//! mutually orthogonal, so `C^{(q-1)} [C^{(q-1)}]*` is block diagonal and the
//! pseudo-inverse of the whole stack is the concatenation of the block
//! pseudo-inverses. Column reduction of `B = [B_1 | ... | B_p]` is the mirror
//! image with right multiplication by block upper-triangular `E_r`.
//!
//! The projector `I - P† P` is never formed: the update is evaluated as
//! `M + L P` with `L = -M P†`, and `L` is exactly the block that goes into
//! the factor.
//!
//! With the automatic rank tolerance, every block pseudo-inverse uses the
//! cut-off `max(block rule, noise)`, where `noise` is a first-order bound on
//! the rounding error the block has picked up so far. It starts at
//! `k * eps * ‖stack‖_F` with `k = max(rows, cols)` and grows by
//! `k * eps * (‖M‖_F + ‖L‖_F ‖P‖_F) + ‖L‖_F * noise(P)` per update. Blocks
//! that are linearly dependent on earlier ones cancel to that noise level and
//! are then inverted as zero, even behind an ill-conditioned pivot.

use crate::error::{Error, Result};
use crate::linalg::{
    conj_transpose, frobenius_norm, matmul, pinv, pinv_with_floor, Mat, PinvOptions, Scalar,
};
use crate::partition::{ColPartition, RowPartition};

/// Output of [`reduce_rows`].
#[derive(Debug, Clone)]
pub struct RowReduction<T: Scalar = f64> {
    /// `C^{(q-1)} = F C`, `h x n`.
    pub c_reduced: Mat<T>,
    /// `F = F_{q-1} ... F_1`, block unit lower triangular, `h x h`.
    pub f: Mat<T>,
    /// `F_1, ..., F_{q-1}` in stage order.
    pub f_factors: Vec<Mat<T>>,
    /// `D_{C,rr} = C_r^{(r-1)} [C_r^{(r-1)}]*` for `r = 1..q`.
    pub d_blocks: Vec<Mat<T>>,
    /// `D_{C,rr}†`.
    pub d_pinv_blocks: Vec<Mat<T>>,
    /// `[C_r^{(r-1)}]†`, each `n x h_r`.
    pub block_pinvs: Vec<Mat<T>>,
    pub partition: RowPartition,
}

/// Output of [`reduce_cols`].
#[derive(Debug, Clone)]
pub struct ColReduction<T: Scalar = f64> {
    /// `B^{(p-1)} = B E`, `m x g`.
    pub b_reduced: Mat<T>,
    /// `E = E_1 ... E_{p-1}`, block unit upper triangular, `g x g`.
    pub e: Mat<T>,
    pub e_factors: Vec<Mat<T>>,
    /// `D_{B,rr} = [B_r^{(r-1)}]* B_r^{(r-1)}` for `r = 1..p`.
    pub d_blocks: Vec<Mat<T>>,
    pub d_pinv_blocks: Vec<Mat<T>>,
    /// `[B_r^{(r-1)}]†`, each `g_r x m`.
    pub block_pinvs: Vec<Mat<T>>,
    pub partition: ColPartition,
}

/// Outcome of [`block_pinv_condition`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionReport {
    pub holds: bool,
    /// `‖R S R - R‖_F`.
    pub rsr_residual: f64,
    /// Largest entry of `|R S R - R|`.
    pub rsr_max_abs: f64,
    /// `‖R_2 R_1†‖_F`; zero exactly when the row spaces are orthogonal.
    pub range_nullspace_residual: f64,
}

/// Running rounding-error bounds for the blocks of a stack being reduced.
struct NoiseBounds {
    unit: f64,
    per_block: Vec<f64>,
}

impl NoiseBounds {
    fn new<T: Scalar>(m: &Mat<T>, blocks: usize) -> Self {
        let unit = m.rows().max(m.cols()) as f64 * f64::EPSILON;
        NoiseBounds {
            unit,
            per_block: vec![unit * frobenius_norm(m); blocks],
        }
    }

    /// Accounts for `M_i + L_i P` on block `i` with pivot block `pivot`.
    fn update<T: Scalar>(&mut self, i: usize, pivot: usize, m: &Mat<T>, l: &Mat<T>, p: &Mat<T>) {
        let ln = frobenius_norm(l);
        self.per_block[i] +=
            self.unit * (frobenius_norm(m) + ln * frobenius_norm(p)) + ln * self.per_block[pivot];
    }
}

fn block_diag<T: Scalar>(blocks: &[Mat<T>]) -> Mat<T> {
    let n = blocks.iter().map(Mat::rows).sum();
    let mut out = Mat::zeros(n, n);
    let mut off = 0;
    for b in blocks {
        out.set_submatrix(off, off, b);
        off += b.rows();
    }
    out
}

impl<T: Scalar> RowReduction<T> {
    /// `D_C = diag(D_{C,11}, ..., D_{C,qq})`.
    pub fn d_assembled(&self) -> Mat<T> {
        block_diag(&self.d_blocks)
    }

    /// `-C_{r+1,c}^{(r-1)} [C_r^{(r-1)}]†`, the nontrivial block of `F_r`
    /// (zero-based `stage`).
    pub fn multiplier(&self, stage: usize) -> Mat<T> {
        let rp = &self.partition;
        let below = rp.offset(stage + 1);
        self.f_factors[stage].submatrix(below, rp.offset(stage), rp.total() - below, rp.size(stage))
    }

    /// `z F`, applying the elementary factors instead of the dense product.
    ///
    /// Right multiplication by `F_r` only touches column block `r`, which
    /// picks up `z_{below} L_r`.
    pub fn right_multiply_f(&self, z: &Mat<T>) -> Result<Mat<T>> {
        let rp = &self.partition;
        if z.cols() != rp.total() {
            return Err(Error::dims(
                "right_multiply_f",
                format!("{} columns", rp.total()),
                format!("{} columns", z.cols()),
            ));
        }
        let mut out = z.clone();
        // F = F_{q-1} ... F_1, so z F applies F_{q-1} first.
        for stage in (0..self.f_factors.len()).rev() {
            let below = rp.offset(stage + 1);
            let tail = out.col_range(below, rp.total() - below);
            let update = matmul(&tail, &self.multiplier(stage))?;
            let col = out.col_range(rp.offset(stage), rp.size(stage));
            out.set_submatrix(0, rp.offset(stage), &(&col + &update));
        }
        Ok(out)
    }
}

impl<T: Scalar> ColReduction<T> {
    /// `D_B = diag(D_{B,11}, ..., D_{B,pp})`.
    pub fn d_assembled(&self) -> Mat<T> {
        block_diag(&self.d_blocks)
    }

    /// `-[B_r^{(r-1)}]† B_{r+1,c}^{(r-1)}`, the nontrivial block of `E_r`.
    pub fn multiplier(&self, stage: usize) -> Mat<T> {
        let cp = &self.partition;
        let right = cp.offset(stage + 1);
        self.e_factors[stage].submatrix(cp.offset(stage), right, cp.size(stage), cp.total() - right)
    }

    /// `E w` through the elementary factors.
    pub fn left_multiply_e(&self, w: &Mat<T>) -> Result<Mat<T>> {
        let cp = &self.partition;
        if w.rows() != cp.total() {
            return Err(Error::dims(
                "left_multiply_e",
                format!("{} rows", cp.total()),
                format!("{} rows", w.rows()),
            ));
        }
        let mut out = w.clone();
        // E = E_1 ... E_{p-1}, so E w applies E_{p-1} first.
        for stage in (0..self.e_factors.len()).rev() {
            let right = cp.offset(stage + 1);
            let tail = out.row_range(right, cp.total() - right);
            let update = matmul(&self.multiplier(stage), &tail)?;
            let row = out.row_range(cp.offset(stage), cp.size(stage));
            out.set_submatrix(cp.offset(stage), 0, &(&row + &update));
        }
        Ok(out)
    }
}

/// Block row reduction of `c` with respect to `rp`.
pub fn reduce_rows<T: Scalar>(
    c: &Mat<T>,
    rp: &RowPartition,
    opts: &PinvOptions,
) -> Result<RowReduction<T>> {
    rp.check_rows(c, "reduce_rows")?;
    let h = rp.total();
    let q = rp.len();
    let mut noise = NoiseBounds::new(c, q);
    let mut work = c.clone();
    let mut f_factors = Vec::with_capacity(q.saturating_sub(1));
    let mut block_pinvs = Vec::with_capacity(q);

    for stage in 0..q - 1 {
        let pivot = work.row_range(rp.offset(stage), rp.size(stage));
        let pivot_pinv = pinv_with_floor(&pivot, opts, noise.per_block[stage])?;
        let below = rp.offset(stage + 1);
        let tail = work.row_range(below, h - below);
        let multiplier = -&matmul(&tail, &pivot_pinv)?;
        let updated = &tail + &matmul(&multiplier, &pivot)?;
        for i in stage + 1..q {
            let (off, len) = (rp.offset(i) - below, rp.size(i));
            noise.update(i, stage, &tail.row_range(off, len), &multiplier.row_range(off, len), &pivot);
        }
        work.set_submatrix(below, 0, &updated);

        let mut factor = Mat::identity(h);
        factor.set_submatrix(below, rp.offset(stage), &multiplier);
        f_factors.push(factor);
        block_pinvs.push(pivot_pinv);
    }
    let last = work.row_range(rp.offset(q - 1), rp.size(q - 1));
    block_pinvs.push(pinv_with_floor(&last, opts, noise.per_block[q - 1])?);

    let mut d_blocks = Vec::with_capacity(q);
    let mut d_pinv_blocks = Vec::with_capacity(q);
    for (r, bp) in block_pinvs.iter().enumerate() {
        let block = work.row_range(rp.offset(r), rp.size(r));
        d_blocks.push(matmul(&block, &conj_transpose(&block))?);
        // (P P*)† = (P†)* P†
        d_pinv_blocks.push(matmul(&conj_transpose(bp), bp)?);
    }

    let f = accumulate_f_optimized(&f_factors, rp)?;
    Ok(RowReduction {
        c_reduced: work,
        f,
        f_factors,
        d_blocks,
        d_pinv_blocks,
        block_pinvs,
        partition: rp.clone(),
    })
}

/// Block column reduction of `b` with respect to `cp`.
pub fn reduce_cols<T: Scalar>(
    b: &Mat<T>,
    cp: &ColPartition,
    opts: &PinvOptions,
) -> Result<ColReduction<T>> {
    cp.check_cols(b, "reduce_cols")?;
    let g = cp.total();
    let p = cp.len();
    let mut noise = NoiseBounds::new(b, p);
    let mut work = b.clone();
    let mut e_factors = Vec::with_capacity(p.saturating_sub(1));
    let mut block_pinvs = Vec::with_capacity(p);

    for stage in 0..p - 1 {
        let pivot = work.col_range(cp.offset(stage), cp.size(stage));
        let pivot_pinv = pinv_with_floor(&pivot, opts, noise.per_block[stage])?;
        let right = cp.offset(stage + 1);
        let tail = work.col_range(right, g - right);
        let multiplier = -&matmul(&pivot_pinv, &tail)?;
        let updated = &tail + &matmul(&pivot, &multiplier)?;
        for i in stage + 1..p {
            let (off, len) = (cp.offset(i) - right, cp.size(i));
            noise.update(i, stage, &tail.col_range(off, len), &multiplier.col_range(off, len), &pivot);
        }
        work.set_submatrix(0, right, &updated);

        let mut factor = Mat::identity(g);
        factor.set_submatrix(cp.offset(stage), right, &multiplier);
        e_factors.push(factor);
        block_pinvs.push(pivot_pinv);
    }
    let last = work.col_range(cp.offset(p - 1), cp.size(p - 1));
    block_pinvs.push(pinv_with_floor(&last, opts, noise.per_block[p - 1])?);

    let mut d_blocks = Vec::with_capacity(p);
    let mut d_pinv_blocks = Vec::with_capacity(p);
    for (r, bp) in block_pinvs.iter().enumerate() {
        let block = work.col_range(cp.offset(r), cp.size(r));
        d_blocks.push(matmul(&conj_transpose(&block), &block)?);
        // (P* P)† = P† (P†)*
        d_pinv_blocks.push(matmul(bp, &conj_transpose(bp))?);
    }

    let e = accumulate_e_optimized(&e_factors, cp)?;
    Ok(ColReduction {
        b_reduced: work,
        e,
        e_factors,
        d_blocks,
        d_pinv_blocks,
        block_pinvs,
        partition: cp.clone(),
    })
}

fn check_factors<T: Scalar>(factors: &[Mat<T>], blocks: usize, dim: usize) -> Result<()> {
    if factors.len() + 1 != blocks {
        return Err(Error::dims(
            "transform accumulation",
            format!("{} factors", blocks - 1),
            format!("{} factors", factors.len()),
        ));
    }
    if let Some((k, f)) = factors.iter().enumerate().find(|(_, f)| f.shape() != (dim, dim)) {
        return Err(Error::dims(
            "transform accumulation",
            format!("{dim}x{dim} factor"),
            format!("{}x{} at position {}", f.rows(), f.cols(), k + 1),
        ));
    }
    Ok(())
}

/// `F = F_{q-1} ... F_1` exploiting the block structure.
///
/// With `Q_r = F_r Q_{r-1}`, only block rows below the pivot change and only
/// in the leading `r` block columns: `Q_r(r+1:q, 1:r) = [L_r | I] Q_{r-1}(r:q, 1:r)`,
/// where `L_r` is the multiplier block of `F_r`.
pub fn accumulate_f_optimized<T: Scalar>(factors: &[Mat<T>], rp: &RowPartition) -> Result<Mat<T>> {
    let h = rp.total();
    check_factors(factors, rp.len(), h)?;
    let Some(first) = factors.first() else {
        return Ok(Mat::identity(h));
    };
    let mut acc = first.clone();
    for (stage, factor) in factors.iter().enumerate().skip(1) {
        let below = rp.offset(stage + 1);
        let width = below;
        let rest = h - below;
        let multiplier = factor.submatrix(below, rp.offset(stage), rest, rp.size(stage));
        let pivot_rows = acc.submatrix(rp.offset(stage), 0, rp.size(stage), width);
        let tail = acc.submatrix(below, 0, rest, width);
        let updated = &tail + &matmul(&multiplier, &pivot_rows)?;
        acc.set_submatrix(below, 0, &updated);
    }
    Ok(acc)
}

/// `E = E_1 ... E_{p-1}`; the conjugate transpose of the row case.
pub fn accumulate_e_optimized<T: Scalar>(factors: &[Mat<T>], cp: &ColPartition) -> Result<Mat<T>> {
    check_factors(factors, cp.len(), cp.total())?;
    let adjoints: Vec<Mat<T>> = factors.iter().map(conj_transpose).collect();
    let rp = RowPartition::new(cp.sizes().to_vec())?;
    Ok(conj_transpose(&accumulate_f_optimized(&adjoints, &rp)?))
}

/// Tests whether `S = [R_1† | R_2†]` is a generalized inverse of `R = [R_1; R_2]`,
/// i.e. `R S R = R` to within `tol * (1 + ‖R‖_F)`.
pub fn block_pinv_condition<T: Scalar>(r1: &Mat<T>, r2: &Mat<T>, tol: f64) -> Result<ConditionReport> {
    if r1.cols() != r2.cols() {
        return Err(Error::dims(
            "block_pinv_condition",
            format!("{} columns", r1.cols()),
            format!("{} columns", r2.cols()),
        ));
    }
    let opts = PinvOptions::automatic();
    let r = Mat::vstack(&[r1, r2])?;
    let p1 = pinv(r1, &opts)?;
    let p2 = pinv(r2, &opts)?;
    let s = Mat::hstack(&[&p1, &p2])?;
    let defect = &matmul(&matmul(&r, &s)?, &r)? - &r;
    let rsr_residual = frobenius_norm(&defect);
    Ok(ConditionReport {
        holds: rsr_residual <= tol * (1.0 + frobenius_norm(&r)),
        rsr_residual,
        rsr_max_abs: defect.max_abs(),
        range_nullspace_residual: frobenius_norm(&matmul(r2, &p1)?),
    })
}
