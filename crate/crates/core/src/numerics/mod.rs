//! Small dense complex linear algebra: SVD with a fixed phase convention,
//! numerical rank, 3x3 eigenvalues, determinant and minor forms of matrix
//! pencils, and projective roots of binary forms.

mod eigen;
mod matrix;
mod poly;
mod svd;
mod tolerance;

pub use eigen::eigenvalues_3x3;
pub use matrix::{CMatrix, C64};
pub(crate) use poly::companion_roots;
pub use poly::{
    binary_form_roots, cubic_form_roots, det_form, minor_forms, monomials, normalize_projective, FormRoots,
    HomogeneousForm, ProjectiveRoot,
};
pub use svd::{
    condition_number, matrix_rank, numerical_rank, singular_values, singular_values_3x3, svd, unitarity_defect,
    SvdResult,
};
pub use tolerance::{TolerancePolicy, TOL_ENV_VAR};
