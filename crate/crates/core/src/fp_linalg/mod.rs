//! Exact arithmetic in `F_p`, 2x2 matrices, and `GL_2`, `PGL_2`, `PSL_2`.

mod enumerate;
mod field;
mod involution;
mod matrix;

use thiserror::Error;

pub use enumerate::{
    centralizer_is_trivial, det_fiber, enumerate_gl2, enumerate_projective, pgl_order, psl_order,
    similarity_witness, ProjectiveGroup,
};
pub use field::{
    is_prime, legendre_class, smallest_nonresidue, sqrt_minus_one, DetClass, Prime, MIN_PRIME,
};
pub use involution::{classify_involution, minus_identity_branch, InvolutionClass};
pub use matrix::{canonical_projective, contragredient_elt, pgl_det_class, standard_v, Gl2Elt, Mat2, Pgl2Elt};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FpError {
    #[error("p = {0} is below the minimum level 7")]
    PrimeTooSmall(u64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("residue is zero mod p")]
    ZeroResidue,
    #[error("matrix is singular")]
    Singular,
    #[error("matrix {0:?} is not in canonical projective form")]
    NotCanonical([u32; 4]),
    #[error("v = {0} is a square mod p; V needs a nonresidue")]
    SquareV(u32),
    #[error("involution precondition `{clause}` fails for {h:?}")]
    InvolutionContract { clause: &'static str, h: [u32; 4] },
}
