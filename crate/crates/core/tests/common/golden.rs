//! Published intermediate and final values of the two worked examples.

use ebos::Mat;

use super::{fixture, mat, scaled};

pub fn ex2_a() -> Mat {
    fixture("ex2_a.txt")
}

pub fn ex2_b() -> Mat {
    fixture("ex2_b.txt")
}

pub fn ex2_c() -> Mat {
    fixture("ex2_c.txt")
}

/// Lower-left `5 x 2` block of `F₁`.
pub fn ex2_f1_block() -> Mat {
    scaled(&[&[-6, -9], &[-4, -6], &[-8, -1], &[-5, -2], &[-8, -1]], 11.0)
}

/// `C^{(1)}`. Rows 1 and 2 are those of `C`.
pub fn ex2_c1() -> Mat {
    let top = scaled(&[&[11, 0, 11, 0, 11, 11, 0, 0], &[0, 11, 0, 11, 11, 0, 0, 0]], 11.0);
    let rest = scaled(
        &[
            &[-6, 2, 5, 2, -4, 5, 0, 0],
            &[-4, 5, -4, -6, 1, 7, 0, 0],
            &[3, -1, -8, -1, 2, 3, 11, 11],
            &[-5, 9, 6, -2, -7, 6, 0, 0],
            &[-8, -1, 3, -1, 2, 3, 0, 0],
        ],
        11.0,
    );
    Mat::vstack(&[&top, &rest]).unwrap()
}

/// Block of `F₂` in rows 6-7, columns 3-5, for row blocks `(2, 3, 2)`.
pub fn ex2_f2_block() -> Mat {
    scaled(&[&[-26, -10, 2], &[-13, -5, 1]], 25.0)
}

/// Rows 6-7 of `C^{(2)}` for row blocks `(2, 3, 2)`; rows 1-5 equal `C^{(1)}`.
pub fn ex2_c2_tail() -> Mat {
    scaled(
        &[&[7, 11, 4, -4, -7, -4, 2, 2], &[-9, -7, 2, -2, 9, -2, 1, 1]],
        25.0,
    )
}

pub fn ex2_y_plus() -> Mat {
    mat(&[
        &[0.0, 1.0, 0.0, -1.0, 1.0, 1.0, 0.0],
        &[1.0, 2.0, -2.0, -1.0, 0.0, 1.0, 1.0],
        &[-1.0, 0.0, 1.0, -1.0, 1.0, 1.0, 0.0],
        &[0.5, -0.5, 0.5, 0.5, 0.5, -0.5, -0.5],
        &[1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        &[-0.5, -0.5, 0.5, 0.5, 0.5, 0.5, -0.5],
        &[-0.5, -0.5, 1.5, -0.5, 0.5, 0.5, -0.5],
        &[1.0, 0.0, 1.0, 0.0, 0.0, 0.0, -2.0],
        &[0.5, 2.5, -2.5, -0.5, 0.5, 1.5, 0.5],
        &[0.0, 1.0, -1.0, -1.0, 1.0, 1.0, 0.0],
        &[-1.0, 1.0, -1.0, 0.0, 1.0, 1.0, 1.0],
        &[0.5, 1.5, -0.5, -1.5, 0.5, 1.5, -0.5],
    ])
}

/// Top-right `2 x 4` block of `E₁`, to 4 decimals.
pub fn ex2_e1_block() -> Mat {
    mat(&[
        &[-0.4737, -0.4737, 0.2632, -0.1579],
        &[-0.1579, -0.1579, -0.5789, -0.0526],
    ])
}

/// `X₊` to 4 decimals.
pub fn ex2_x_plus() -> Mat {
    mat(&[
        &[-0.1987, 0.1009, 0.4826, -0.5599, 0.4527, 0.3691, -0.7823],
        &[0.2934, 0.4700, -0.2839, 0.0647, -0.0016, 0.3123, 0.1073],
        &[0.4621, -0.5284, 0.0205, 0.2981, -0.0804, -0.5726, -0.0300],
        &[-0.0126, -0.0095, 0.1735, 0.0994, -0.0268, 0.3091, -0.1767],
        &[-0.5394, 0.8454, -0.8328, -0.8770, 0.7287, 0.7161, 0.4479],
        &[0.0110, 1.3833, -1.0268, -0.7744, 0.3360, 0.9795, 0.6546],
    ])
}

/// `R = [R₁; R₂]`, two blocks of three rows.
pub fn ex1_r() -> Mat {
    fixture("ex1_r.txt")
}

pub fn ex1_r2_reduced() -> Mat {
    mat(&[
        &[0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        &[0.4, 1.0, 0.0, -0.2, -0.4, 0.2],
        &[1.0, 2.0, 0.0, -1.0, -1.0, 0.0],
    ])
}

pub fn ex1_r1_reduced_pinv() -> Mat {
    mat(&[
        &[0.3, -0.2, 0.1],
        &[0.0, 0.0, 0.0],
        &[0.5, 0.0, -0.5],
        &[0.1, -0.4, -0.3],
        &[0.2, 0.2, 0.4],
        &[-0.1, 0.4, 0.3],
    ])
}

pub fn ex1_r2_reduced_pinv() -> Mat {
    mat(&[
        &[0.0, -0.25, 0.25],
        &[0.0, 1.25, -0.25],
        &[0.0, 0.0, 0.0],
        &[0.0, 2.0, -1.0],
        &[0.0, 0.25, -0.25],
        &[0.0, 1.75, -0.75],
    ])
}
