//! Decides whether the twist `X_rho(p)` of the modular curve `X(p)` by a
//! projective representation `rho : G_F -> PGL_2(F_p)` is defined over `Q`,
//! with all Galois data presented through a fixed finite quotient.

pub mod cohomology;
pub mod corpus;
pub mod descent;
pub mod elliptic;
pub mod fixtures;
pub mod fp_linalg;
pub mod groups;
pub mod io;
pub mod reps;
