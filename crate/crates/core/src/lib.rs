//! Minimum-norm style solutions of `min ‖A - B X C‖_F` built from elementary
//! block operations on the column blocks of `B` and the row blocks of `C`.
//!
//! Instead of one large pseudo-inverse of `B` and of `C`, each is reduced
//! block by block into mutually orthogonal blocks. The pseudo-inverse of the
//! reduced matrix is then assembled from small per-block pseudo-inverses, and
//! the accumulated elementary factors `E` and `F` carry the result back:
//!
//! ```text
//! X₊ = E [B^{(p-1)}]† A [C^{(q-1)}]† F
//! ```
//!
//! `B X₊ C` equals the optimal reconstruction `B B† A C† C`, so `X₊` is a
//! least-squares solution; it is generally not the minimum-norm one.
//!
//! ```
//! use ebos::{ebos_solve, ColPartition, Mat, PinvOptions, RowPartition};
//!
//! let a = Mat::from_f64_rows(&[[1.0, 2.0], [3.0, 4.0]]).unwrap();
//! let b = Mat::identity(2);
//! let c = Mat::identity(2);
//! let cp = ColPartition::uniform(2, 1).unwrap();
//! let rp = RowPartition::uniform(2, 1).unwrap();
//! let r = ebos_solve(&a, &b, &c, &cp, &rp, &PinvOptions::automatic()).unwrap();
//! assert!(r.x_plus.max_abs_diff(&a) < 1e-12);
//! ```

pub mod bench;
pub mod error;
pub mod flops;
pub mod io;
pub mod linalg;
pub mod partition;
pub mod reduction;
pub mod solver;

pub use error::{Error, Result, Stage};
pub use linalg::{
    conj_transpose, frobenius_norm, matmul, penrose_check, pinv, singular_values, Mat, PinvOptions,
    RankTolerance, Scalar,
};
pub use partition::{assemble_b, assemble_c, split_x, BlockGrid, ColPartition, Partition, RowPartition};
pub use reduction::{
    accumulate_e_optimized, accumulate_f_optimized, block_pinv_condition, reduce_cols, reduce_rows,
    ColReduction, ConditionReport, RowReduction,
};
pub use solver::{
    direct_solve, ebos_solve, exactness_check, independent_solve, independent_solve_result, reconstruct,
    residual, solve, solve_x, solve_y, Method, SolveResult,
};
