//! Shared numerical kernels used by the model solvers.

pub mod eigen;
pub mod fit;
pub mod lanczos;
pub mod quadrature;
pub mod special;
pub mod tridiag;

pub use eigen::{eigh_lowest, fix_sign, generalized_lowest, EigenPair, GeneralizedLowest, SymmetricMatrix};
pub use fit::{linear_fit, LinearFit};
pub use lanczos::{lanczos_lowest, lanczos_lowest_with, LanczosOptions};
pub use quadrature::Grid1D;
pub use special::{boys_f0, gaussian_coulomb, gaussian_point_coulomb};
