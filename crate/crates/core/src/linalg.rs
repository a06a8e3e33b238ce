//! Dense matrices, the Frobenius norm and the SVD-based Moore–Penrose inverse.
//!
//! [`Mat`] wraps a heap-allocated `nalgebra::DMatrix`. The storage layout is
//! column-major internally but never leaks through the public surface: all
//! constructors and exporters speak row-major, which is what the text format
//! and the C ABI use.
//!
//! Every routine is generic over [`Scalar`], implemented for `f64` and
//! `Complex64`. Conjugate transposition reduces to the plain transpose for
//! real scalars.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use nalgebra::{ComplexField, DMatrix};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Field of matrix entries: real or complex double precision.
pub trait Scalar: ComplexField<RealField = f64> + Copy {
    /// Thin SVD `m = U diag(s) V*` with `s` in nonincreasing order, or `None`
    /// if the iteration fails to converge.
    #[doc(hidden)]
    fn thin_svd(m: &DMatrix<Self>) -> Option<ThinSvd<Self>>;

    #[doc(hidden)]
    fn singular_values_of(m: &DMatrix<Self>) -> Option<Vec<f64>>;
}

#[doc(hidden)]
pub struct ThinSvd<T> {
    pub s: Vec<f64>,
    pub u: DMatrix<T>,
    pub v: DMatrix<T>,
}

// Storage and products stay in nalgebra; decompositions go through faer,
// whose SVD stays accurate on rank-deficient input.
macro_rules! faer_scalar {
    ($t:ty, $re:expr) => {
        impl Scalar for $t {
            fn thin_svd(m: &DMatrix<$t>) -> Option<ThinSvd<$t>> {
                let (rows, cols) = m.shape();
                let fm = faer::Mat::<$t>::from_fn(rows, cols, |i, j| m[(i, j)]);
                let svd = fm.thin_svd().ok()?;
                let k = rows.min(cols);
                let (u, v, s) = (svd.U(), svd.V(), svd.S().column_vector());
                Some(ThinSvd {
                    s: (0..k).map(|i| $re(s[i])).collect(),
                    u: DMatrix::from_fn(rows, k, |i, j| u[(i, j)]),
                    v: DMatrix::from_fn(cols, k, |i, j| v[(i, j)]),
                })
            }

            fn singular_values_of(m: &DMatrix<$t>) -> Option<Vec<f64>> {
                let fm = faer::Mat::<$t>::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)]);
                fm.singular_values().ok()
            }
        }
    };
}

faer_scalar!(f64, |x: f64| x);
faer_scalar!(Complex64, |x: Complex64| x.re);

#[derive(Clone, PartialEq)]
pub struct Mat<T: Scalar = f64> {
    data: DMatrix<T>,
}

impl<T: Scalar> Mat<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            data: DMatrix::zeros(rows, cols),
        }
    }

    pub fn identity(n: usize) -> Self {
        Mat {
            data: DMatrix::identity(n, n),
        }
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl FnMut(usize, usize) -> T) -> Self {
        Mat {
            data: DMatrix::from_fn(rows, cols, f),
        }
    }

    /// Builds a matrix from row-major entries, rejecting a length mismatch
    /// and any NaN or infinite value.
    pub fn from_row_slice(rows: usize, cols: usize, entries: &[T]) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::dims(
                "from_row_slice",
                format!("{} entries", rows * cols),
                format!("{} entries", entries.len()),
            ));
        }
        let m = Mat {
            data: DMatrix::from_row_slice(rows, cols, entries),
        };
        m.check_finite()?;
        Ok(m)
    }

    /// Builds a matrix from a list of rows. Ragged input is an error.
    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != cols) {
            return Err(Error::dims(
                "from_rows",
                format!("{cols} entries in every row"),
                format!("{} entries in row {}", r.len(), i + 1),
            ));
        }
        let flat: Vec<T> = rows.iter().flatten().copied().collect();
        Self::from_row_slice(rows.len(), cols, &flat)
    }

    pub fn from_inner(data: DMatrix<T>) -> Self {
        Mat { data }
    }

    pub fn inner(&self) -> &DMatrix<T> {
        &self.data
    }

    pub fn into_inner(self) -> DMatrix<T> {
        self.data
    }

    pub fn rows(&self) -> usize {
        self.data.nrows()
    }

    pub fn cols(&self) -> usize {
        self.data.ncols()
    }

    pub fn shape(&self) -> (usize, usize) {
        self.data.shape()
    }

    /// Entry `(i, j)`, zero-based. Panics when out of range.
    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, value: T) {
        self.data[(i, j)] = value;
    }

    pub fn to_row_major(&self) -> Vec<T> {
        let (r, c) = self.shape();
        let mut out = Vec::with_capacity(r * c);
        for i in 0..r {
            out.extend(self.data.row(i).iter().copied());
        }
        out
    }

    pub fn check_finite(&self) -> Result<()> {
        let rows = self.rows();
        match self.data.iter().position(|x| !x.is_finite()) {
            Some(k) => Err(Error::NonFinite {
                row: k % rows,
                col: k / rows,
            }),
            None => Ok(()),
        }
    }

    /// Copy of the `nrows x ncols` block starting at `(row, col)`.
    pub fn submatrix(&self, row: usize, col: usize, nrows: usize, ncols: usize) -> Self {
        Mat {
            data: self.data.view((row, col), (nrows, ncols)).into_owned(),
        }
    }

    pub fn row_range(&self, start: usize, len: usize) -> Self {
        self.submatrix(start, 0, len, self.cols())
    }

    pub fn col_range(&self, start: usize, len: usize) -> Self {
        self.submatrix(0, start, self.rows(), len)
    }

    /// Overwrites the block at `(row, col)` with `block`.
    pub fn set_submatrix(&mut self, row: usize, col: usize, block: &Mat<T>) {
        self.data
            .view_mut((row, col), block.shape())
            .copy_from(&block.data);
    }

    pub fn scale(&self, factor: T) -> Self {
        Mat {
            data: &self.data * factor,
        }
    }

    /// Largest entry magnitude; zero for an empty matrix.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |acc, x| acc.max(x.modulus()))
    }

    /// Largest entrywise magnitude of `self - other`. Shapes must agree.
    pub fn max_abs_diff(&self, other: &Mat<T>) -> f64 {
        assert_eq!(self.shape(), other.shape(), "max_abs_diff shape mismatch");
        self.data
            .iter()
            .zip(other.data.iter())
            .fold(0.0, |acc, (a, b)| acc.max((*a - *b).modulus()))
    }

    /// Horizontal concatenation `[m_1 | m_2 | ...]`.
    pub fn hstack(blocks: &[&Mat<T>]) -> Result<Self> {
        let first = blocks.first().ok_or(Error::EmptyBlocks("hstack"))?;
        let rows = first.rows();
        if let Some(bad) = blocks.iter().find(|b| b.rows() != rows) {
            return Err(Error::dims(
                "hstack",
                format!("{rows} rows"),
                format!("{} rows", bad.rows()),
            ));
        }
        let cols = blocks.iter().map(|b| b.cols()).sum();
        let mut out = Mat::zeros(rows, cols);
        let mut offset = 0;
        for b in blocks {
            out.set_submatrix(0, offset, b);
            offset += b.cols();
        }
        Ok(out)
    }

    /// Vertical concatenation of `blocks`, top to bottom.
    pub fn vstack(blocks: &[&Mat<T>]) -> Result<Self> {
        let first = blocks.first().ok_or(Error::EmptyBlocks("vstack"))?;
        let cols = first.cols();
        if let Some(bad) = blocks.iter().find(|b| b.cols() != cols) {
            return Err(Error::dims(
                "vstack",
                format!("{cols} columns"),
                format!("{} columns", bad.cols()),
            ));
        }
        let rows = blocks.iter().map(|b| b.rows()).sum();
        let mut out = Mat::zeros(rows, cols);
        let mut offset = 0;
        for b in blocks {
            out.set_submatrix(offset, 0, b);
            offset += b.rows();
        }
        Ok(out)
    }
}

impl Mat<f64> {
    /// Convenience constructor for literals in tests and examples.
    pub fn from_f64_rows<const C: usize>(rows: &[[f64; C]]) -> Result<Self> {
        let flat: Vec<f64> = rows.iter().flatten().copied().collect();
        Self::from_row_slice(rows.len(), C, &flat)
    }
}

impl<T: Scalar> fmt::Debug for Mat<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mat {}x{}", self.rows(), self.cols())?;
        if self.rows() * self.cols() <= 100 {
            write!(f, " {}", self.data)?;
        }
        Ok(())
    }
}

impl<T: Scalar> Add for &Mat<T> {
    type Output = Mat<T>;

    fn add(self, rhs: &Mat<T>) -> Mat<T> {
        Mat {
            data: &self.data + &rhs.data,
        }
    }
}

impl<T: Scalar> Sub for &Mat<T> {
    type Output = Mat<T>;

    fn sub(self, rhs: &Mat<T>) -> Mat<T> {
        Mat {
            data: &self.data - &rhs.data,
        }
    }
}

impl<T: Scalar> Neg for &Mat<T> {
    type Output = Mat<T>;

    fn neg(self) -> Mat<T> {
        Mat {
            data: -&self.data,
        }
    }
}

/// Rank cut-off used by [`pinv`].
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum RankTolerance {
    /// `max(rows, cols) * eps * sigma_max`.
    #[default]
    Automatic,
    /// Singular values at or below this value are treated as zero.
    Absolute(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PinvOptions {
    pub rank_tolerance: RankTolerance,
}

impl PinvOptions {
    pub fn automatic() -> Self {
        Self::default()
    }

    pub fn with_tolerance(tol: f64) -> Result<Self> {
        if !(tol.is_finite() && tol >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "rank tolerance must be a nonnegative finite number, got {tol}"
            )));
        }
        Ok(PinvOptions {
            rank_tolerance: RankTolerance::Absolute(tol),
        })
    }

    /// The numeric cut-off for a `rows x cols` matrix whose largest singular
    /// value is `sigma_max`.
    pub fn resolve(&self, rows: usize, cols: usize, sigma_max: f64) -> f64 {
        match self.rank_tolerance {
            RankTolerance::Automatic => rows.max(cols) as f64 * f64::EPSILON * sigma_max,
            RankTolerance::Absolute(t) => t,
        }
    }
}

/// `m*`: the conjugate transpose.
pub fn conj_transpose<T: Scalar>(m: &Mat<T>) -> Mat<T> {
    Mat {
        data: m.data.adjoint(),
    }
}

/// Matrix product `a * b`.
///
/// Real products go through the `matrixmultiply` kernels that nalgebra
/// selects for `f64`; they run single-threaded with a fixed blocking, so a
/// given build always produces the same bits for the same inputs.
pub fn matmul<T: Scalar>(a: &Mat<T>, b: &Mat<T>) -> Result<Mat<T>> {
    if a.cols() != b.rows() {
        return Err(Error::dims(
            "matmul",
            format!("lhs columns == rhs rows ({})", a.cols()),
            format!("{}x{} * {}x{}", a.rows(), a.cols(), b.rows(), b.cols()),
        ));
    }
    Ok(Mat {
        data: &a.data * &b.data,
    })
}

/// Square root of the sum of squared entry magnitudes.
pub fn frobenius_norm<T: Scalar>(m: &Mat<T>) -> f64 {
    m.data
        .iter()
        .map(|x| x.modulus_squared())
        .sum::<f64>()
        .sqrt()
}

/// Singular values in descending order.
pub fn singular_values<T: Scalar>(m: &Mat<T>) -> Result<Vec<f64>> {
    let (rows, cols) = m.shape();
    if rows == 0 || cols == 0 {
        return Ok(Vec::new());
    }
    let mut s = T::singular_values_of(&m.data).ok_or(Error::SvdFailure { rows, cols })?;
    s.sort_by(|a, b| b.total_cmp(a));
    Ok(s)
}

/// Moore–Penrose inverse from a thin SVD `m = U S V*`, returning `V S⁺ U*`.
///
/// Singular values at or below the resolved tolerance are dropped. Works for
/// any shape; the pseudo-inverse of a zero (or empty) matrix is zero.
pub fn pinv<T: Scalar>(m: &Mat<T>, opts: &PinvOptions) -> Result<Mat<T>> {
    pinv_with_floor(m, opts, 0.0)
}

/// [`pinv`] where an automatic tolerance is raised to at least `floor`.
///
/// The block reductions pass a bound on the rounding error a block has
/// accumulated, so a block that cancels down to noise is treated as zero
/// instead of being inverted at its own (tiny) scale.
pub(crate) fn pinv_with_floor<T: Scalar>(m: &Mat<T>, opts: &PinvOptions, floor: f64) -> Result<Mat<T>> {
    let (rows, cols) = m.shape();
    if rows == 0 || cols == 0 || m.data.iter().all(|x| x.is_zero()) {
        return Ok(Mat::zeros(cols, rows));
    }
    let svd = T::thin_svd(&m.data).ok_or(Error::SvdFailure { rows, cols })?;
    let sigma_max = svd.s.iter().copied().fold(0.0, f64::max);
    let tol = match opts.rank_tolerance {
        RankTolerance::Automatic => opts.resolve(rows, cols, sigma_max).max(floor),
        RankTolerance::Absolute(t) => t,
    };

    let kept: Vec<usize> = (0..svd.s.len()).filter(|&k| svd.s[k] > tol).collect();
    if kept.is_empty() {
        return Ok(Mat::zeros(cols, rows));
    }
    // V S⁺ restricted to the retained triplets, then times U*.
    let mut vs = DMatrix::<T>::zeros(cols, kept.len());
    let mut u_kept = DMatrix::<T>::zeros(rows, kept.len());
    for (j, &k) in kept.iter().enumerate() {
        let inv = T::from_real(svd.s[k].recip());
        for i in 0..cols {
            vs[(i, j)] = svd.v[(i, k)] * inv;
        }
        u_kept.set_column(j, &svd.u.column(k));
    }
    Ok(Mat {
        data: vs * u_kept.adjoint(),
    })
}

/// Checks the four Penrose conditions for the candidate inverse `p` of `m`,
/// each to within `tol * (1 + ‖m‖_F)` in the Frobenius norm.
pub fn penrose_check<T: Scalar>(m: &Mat<T>, p: &Mat<T>, tol: f64) -> Result<bool> {
    if p.shape() != (m.cols(), m.rows()) {
        return Err(Error::dims(
            "penrose_check",
            format!("{}x{}", m.cols(), m.rows()),
            format!("{}x{}", p.rows(), p.cols()),
        ));
    }
    let bound = tol * (1.0 + frobenius_norm(m));
    let mp = matmul(m, p)?;
    let pm = matmul(p, m)?;
    let defects = [
        frobenius_norm(&(&matmul(&mp, m)? - m)),
        frobenius_norm(&(&matmul(&pm, p)? - p)),
        frobenius_norm(&(&conj_transpose(&mp) - &mp)),
        frobenius_norm(&(&conj_transpose(&pm) - &pm)),
    ];
    Ok(defects.iter().all(|&d| d <= bound))
}
