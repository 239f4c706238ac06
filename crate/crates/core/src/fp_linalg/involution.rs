//! Classification of elements `h` with `det(h) = -1` and `h^2 = +-I`.

use serde::{Deserialize, Serialize};

use super::field::{sqrt_minus_one, Prime};
use super::matrix::Gl2Elt;
use super::FpError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "class", content = "i")]
pub enum InvolutionClass {
    /// Similar to `diag(1, -1)`.
    DiagOneMinusOne,
    /// Equal to `i * I` with `i^2 = -1`.
    ScalarI(u32),
    /// No element of this shape exists over `F_p`.
    Impossible,
}

/// Classifies `h` with `det(h) = -1` and `h^2 = +-I`.
///
/// If `h^2 = -I` and `h` were not scalar, its minimal polynomial would be
/// `x^2 + 1` and `det(h) = 1`. So that branch always yields a scalar `i * I`,
/// and it is empty when `p = 3 mod 4`.
pub fn classify_involution(h: &Gl2Elt) -> Result<InvolutionClass, FpError> {
    let p = h.prime();
    if h.det() != p.minus_one() {
        return Err(FpError::InvolutionContract {
            clause: "det(h) = -1",
            h: h.mat().entries(),
        });
    }
    match (*h * *h).mat().as_scalar() {
        Some(1) => Ok(InvolutionClass::DiagOneMinusOne),
        Some(c) if c == p.minus_one() => {
            let i = h
                .mat()
                .as_scalar()
                .expect("h^2 = -I with det(h) = -1 forces h to be scalar");
            debug_assert_eq!(p.mul(i, i), p.minus_one());
            Ok(InvolutionClass::ScalarI(i))
        }
        _ => Err(FpError::InvolutionContract {
            clause: "h^2 = +-I",
            h: h.mat().entries(),
        }),
    }
}

/// What the `h^2 = -I` branch looks like over `F_p`.
pub fn minus_identity_branch(p: Prime) -> InvolutionClass {
    match sqrt_minus_one(p) {
        Some(i) => InvolutionClass::ScalarI(i),
        None => InvolutionClass::Impossible,
    }
}
