//! 2x2 matrices over F_p and the groups GL_2, PGL_2.

use std::fmt;
use std::ops::Mul;

use serde::{Serialize, Serializer};

use super::field::{legendre_class, DetClass, Prime};
use super::FpError;

/// A 2x2 matrix `[[a, b], [c, d]]` with entries reduced mod `p`.
///
/// Entries come first so the derived ordering is the scan order `(a, b, c, d)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat2 {
    e: [u32; 4],
    p: Prime,
}

impl Mat2 {
    pub fn new(p: Prime, entries: [i64; 4]) -> Mat2 {
        Mat2 {
            e: entries.map(|x| p.reduce(x)),
            p,
        }
    }

    pub fn identity(p: Prime) -> Mat2 {
        Mat2::scalar(p, 1)
    }

    pub fn scalar(p: Prime, s: u32) -> Mat2 {
        let s = s % p.get();
        Mat2 { e: [s, 0, 0, s], p }
    }

    pub fn diag(p: Prime, x: i64, y: i64) -> Mat2 {
        Mat2::new(p, [x, 0, 0, y])
    }

    #[inline]
    pub fn entries(&self) -> [u32; 4] {
        self.e
    }

    #[inline]
    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn det(&self) -> u32 {
        let [a, b, c, d] = self.e;
        self.p.sub(self.p.mul(a, d), self.p.mul(b, c))
    }

    pub fn is_invertible(&self) -> bool {
        self.det() != 0
    }

    pub fn transpose(&self) -> Mat2 {
        let [a, b, c, d] = self.e;
        Mat2 { e: [a, c, b, d], p: self.p }
    }

    pub fn scale(&self, s: u32) -> Mat2 {
        Mat2 {
            e: self.e.map(|x| self.p.mul(x, s)),
            p: self.p,
        }
    }

    pub fn mul(&self, rhs: &Mat2) -> Mat2 {
        debug_assert_eq!(self.p, rhs.p, "mixed primes");
        let p = self.p;
        let [a, b, c, d] = self.e;
        let [w, x, y, z] = rhs.e;
        Mat2 {
            e: [
                p.add(p.mul(a, w), p.mul(b, y)),
                p.add(p.mul(a, x), p.mul(b, z)),
                p.add(p.mul(c, w), p.mul(d, y)),
                p.add(p.mul(c, x), p.mul(d, z)),
            ],
            p,
        }
    }

    /// Adjugate; `M * adj(M) = det(M) I`.
    pub fn adjugate(&self) -> Mat2 {
        let [a, b, c, d] = self.e;
        let p = self.p;
        Mat2 {
            e: [d, p.neg(b), p.neg(c), a],
            p,
        }
    }

    pub fn inv(&self) -> Result<Mat2, FpError> {
        let det_inv = self.p.inv(self.det()).ok_or(FpError::Singular)?;
        Ok(self.adjugate().scale(det_inv))
    }

    /// Square-and-multiply. Negative exponents go through the inverse.
    pub fn pow(&self, n: i64) -> Result<Mat2, FpError> {
        let mut base = if n < 0 { self.inv()? } else { *self };
        let mut e = n.unsigned_abs();
        let mut acc = Mat2::identity(self.p);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        Ok(acc)
    }

    /// `Some(c)` when the matrix equals `c * I`.
    pub fn as_scalar(&self) -> Option<u32> {
        let [a, b, c, d] = self.e;
        (b == 0 && c == 0 && a == d).then_some(a)
    }

    /// The unique `s` with `self = s * other`, if any.
    pub fn scalar_ratio(&self, other: &Mat2) -> Option<u32> {
        let pivot = other.e.iter().position(|&x| x != 0)?;
        let s = self
            .p
            .mul(self.e[pivot], self.p.inv(other.e[pivot]).expect("pivot is nonzero"));
        (other.scale(s) == *self).then_some(s)
    }
}

impl fmt::Debug for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.e;
        write!(f, "[[{a},{b}],[{c},{d}]]")
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Serialize for Mat2 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.e.serialize(s)
    }
}

/// An invertible 2x2 matrix.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Gl2Elt(Mat2);

impl Gl2Elt {
    pub fn new(m: Mat2) -> Result<Gl2Elt, FpError> {
        if m.is_invertible() {
            Ok(Gl2Elt(m))
        } else {
            Err(FpError::Singular)
        }
    }

    pub fn from_entries(p: Prime, entries: [i64; 4]) -> Result<Gl2Elt, FpError> {
        Gl2Elt::new(Mat2::new(p, entries))
    }

    pub fn identity(p: Prime) -> Gl2Elt {
        Gl2Elt(Mat2::identity(p))
    }

    /// `s * I` for nonzero `s`.
    pub fn scalar(p: Prime, s: u32) -> Result<Gl2Elt, FpError> {
        Gl2Elt::new(Mat2::scalar(p, s))
    }

    #[inline]
    pub fn mat(&self) -> &Mat2 {
        &self.0
    }

    #[inline]
    pub fn prime(&self) -> Prime {
        self.0.p
    }

    pub fn det(&self) -> u32 {
        self.0.det()
    }

    pub fn inv(&self) -> Gl2Elt {
        Gl2Elt(self.0.inv().expect("GL2 element is invertible"))
    }

    pub fn pow(&self, n: i64) -> Gl2Elt {
        Gl2Elt(self.0.pow(n).expect("GL2 element is invertible"))
    }

    pub fn transpose(&self) -> Gl2Elt {
        Gl2Elt(self.0.transpose())
    }

    pub fn scale(&self, s: u32) -> Result<Gl2Elt, FpError> {
        Gl2Elt::new(self.0.scale(s))
    }

    /// `self * x * self^-1`.
    pub fn conjugate(&self, x: &Gl2Elt) -> Gl2Elt {
        *self * *x * self.inv()
    }

    pub fn projectivize(&self) -> Pgl2Elt {
        canonical_projective(self)
    }
}

impl Mul for Gl2Elt {
    type Output = Gl2Elt;

    fn mul(self, rhs: Gl2Elt) -> Gl2Elt {
        Gl2Elt(self.0.mul(&rhs.0))
    }
}

impl fmt::Debug for Gl2Elt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(&self.0, f)
    }
}

impl fmt::Display for Gl2Elt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(&self.0, f)
    }
}

/// A class in `PGL_2(F_p)`, stored as the representative whose first nonzero
/// entry in scan order is `1`. Equal classes have equal representatives.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Pgl2Elt(Mat2);

/// Divides an invertible matrix by its first nonzero entry.
pub fn canonical_projective(m: &Gl2Elt) -> Pgl2Elt {
    Pgl2Elt(normalize(&m.0))
}

fn normalize(m: &Mat2) -> Mat2 {
    let lead = *m.e.iter().find(|&&x| x != 0).expect("nonzero matrix");
    if lead == 1 {
        *m
    } else {
        m.scale(m.p.inv(lead).expect("nonzero lead"))
    }
}

impl Pgl2Elt {
    /// Canonical class of an arbitrary matrix; errors if singular.
    pub fn from_mat(m: Mat2) -> Result<Pgl2Elt, FpError> {
        let g = Gl2Elt::new(m)?;
        Ok(canonical_projective(&g))
    }

    pub fn from_entries(p: Prime, entries: [i64; 4]) -> Result<Pgl2Elt, FpError> {
        Pgl2Elt::from_mat(Mat2::new(p, entries))
    }

    /// Accepts only entries that are already canonical.
    pub fn from_canonical_entries(p: Prime, entries: [i64; 4]) -> Result<Pgl2Elt, FpError> {
        let m = Mat2::new(p, entries);
        let g = Pgl2Elt::from_mat(m)?;
        if g.0 == m {
            Ok(g)
        } else {
            Err(FpError::NotCanonical(m.entries()))
        }
    }

    pub fn identity(p: Prime) -> Pgl2Elt {
        Pgl2Elt(Mat2::identity(p))
    }

    #[inline]
    pub fn mat(&self) -> &Mat2 {
        &self.0
    }

    #[inline]
    pub fn prime(&self) -> Prime {
        self.0.p
    }

    /// The canonical representative as an element of `GL_2`.
    pub fn representative(&self) -> Gl2Elt {
        Gl2Elt(self.0)
    }

    pub fn is_identity(&self) -> bool {
        self.0 == Mat2::identity(self.0.p)
    }

    pub fn inv(&self) -> Pgl2Elt {
        // The adjugate is a nonzero multiple of the inverse.
        Pgl2Elt(normalize(&self.0.adjugate()))
    }

    pub fn pow(&self, n: i64) -> Pgl2Elt {
        let m = self.0.pow(n).expect("projective class is invertible");
        Pgl2Elt(normalize(&m))
    }

    /// `self * x * self^-1`.
    pub fn conjugate(&self, x: &Pgl2Elt) -> Pgl2Elt {
        *self * *x * self.inv()
    }

    pub fn commutes_with(&self, x: &Pgl2Elt) -> bool {
        *self * *x == *x * *self
    }

    pub fn det_class(&self) -> DetClass {
        pgl_det_class(self)
    }

    pub fn in_psl(&self) -> bool {
        self.det_class() == DetClass::Square
    }

    pub fn transpose(&self) -> Pgl2Elt {
        Pgl2Elt(normalize(&self.0.transpose()))
    }

    pub fn contragredient(&self) -> Pgl2Elt {
        contragredient_elt(self)
    }

    /// Least `k >= 1` with `self^k = 1`.
    pub fn order(&self) -> u64 {
        let mut acc = *self;
        let mut k = 1;
        while !acc.is_identity() {
            acc = acc * *self;
            k += 1;
        }
        k
    }
}

impl Mul for Pgl2Elt {
    type Output = Pgl2Elt;

    fn mul(self, rhs: Pgl2Elt) -> Pgl2Elt {
        Pgl2Elt(normalize(&self.0.mul(&rhs.0)))
    }
}

impl fmt::Debug for Pgl2Elt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(&self.0, f)
    }
}

impl fmt::Display for Pgl2Elt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(&self.0, f)
    }
}

/// Determinant of any representative, read modulo squares.
pub fn pgl_det_class(x: &Pgl2Elt) -> DetClass {
    legendre_class(x.0.det(), x.0.p).expect("invertible")
}

/// Inverse-transpose, re-canonicalized.
pub fn contragredient_elt(x: &Pgl2Elt) -> Pgl2Elt {
    // adj(M)^t is a nonzero multiple of (M^-1)^t.
    Pgl2Elt(normalize(&x.0.adjugate().transpose()))
}

/// `V = [[0, v], [-1, 0]]` for a nonresidue `v`, together with its class.
pub fn standard_v(p: Prime, v: u32) -> Result<(Gl2Elt, Pgl2Elt), FpError> {
    if legendre_class(v, p)? != DetClass::NonSquare {
        return Err(FpError::SquareV(v));
    }
    let m = Gl2Elt::from_entries(p, [0, v as i64, -1, 0])?;
    Ok((m, canonical_projective(&m)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    fn gl(pr: Prime, e: [i64; 4]) -> Gl2Elt {
        Gl2Elt::from_entries(pr, e).unwrap()
    }

    #[test]
    fn arithmetic_examples() {
        let p7 = p(7);
        let u = Mat2::new(p7, [1, 1, 0, 1]);
        assert_eq!(u.mul(&u).entries(), [1, 2, 0, 1]);

        let a = Mat2::new(p7, [0, 3, 6, 0]);
        let a_inv = a.inv().unwrap();
        assert_eq!(a_inv.entries(), [0, 6, 5, 0]);
        assert_eq!(a.mul(&a_inv), Mat2::identity(p7));
        assert_eq!(a.det(), 3);

        assert_eq!(Mat2::new(p7, [1, 2, 2, 4]).inv(), Err(FpError::Singular));
        assert_eq!(a.pow(0).unwrap(), Mat2::identity(p7));
        assert_eq!(u.pow(7).unwrap(), Mat2::identity(p7));
        assert_eq!(u.pow(-1).unwrap().entries(), [1, 6, 0, 1]);
        assert_eq!(a.transpose().entries(), [0, 6, 3, 0]);
    }

    #[test]
    fn pow_agrees_with_repeated_multiplication() {
        let p11 = p(11);
        let m = Mat2::new(p11, [2, 5, 7, 3]);
        let mut acc = Mat2::identity(p11);
        for n in 0..40 {
            assert_eq!(m.pow(n).unwrap(), acc, "n={n}");
            acc = acc.mul(&m);
        }
    }

    #[test]
    fn canonical_examples() {
        let p7 = p(7);
        let c = canonical_projective(&gl(p7, [0, 3, 6, 0]));
        assert_eq!(c.mat().entries(), [0, 1, 2, 0]);
        assert!(canonical_projective(&Gl2Elt::identity(p7)).is_identity());
        assert!(canonical_projective(&gl(p7, [2, 0, 0, 2])).is_identity());
        assert!(Gl2Elt::from_entries(p7, [1, 2, 2, 4]).is_err());
        assert!(Pgl2Elt::from_canonical_entries(p7, [0, 3, 6, 0]).is_err());
        assert!(Pgl2Elt::from_canonical_entries(p7, [0, 1, 2, 0]).is_ok());
    }

    #[test]
    fn det_class_examples() {
        let p7 = p(7);
        let v = Pgl2Elt::from_entries(p7, [0, 1, 2, 0]).unwrap();
        assert_eq!(v.det_class(), DetClass::NonSquare);
        assert_eq!(Pgl2Elt::identity(p7).det_class(), DetClass::Square);
        let d = Pgl2Elt::from_entries(p7, [1, 0, 0, 3]).unwrap();
        assert_eq!(d.det_class(), DetClass::NonSquare);
    }

    #[test]
    fn standard_v_examples() {
        let p7 = p(7);
        let (m, c) = standard_v(p7, 3).unwrap();
        assert_eq!(m.mat().entries(), [0, 3, 6, 0]);
        assert_eq!(c.mat().entries(), [0, 1, 2, 0]);
        assert_eq!((m * m).mat().entries(), [4, 0, 0, 4]);
        assert!((c * c).is_identity());
        assert_eq!(standard_v(p7, 2), Err(FpError::SquareV(2)));

        // Oracle: solve t * [[0,2],[-1,0]] = [[0,1],[x,0]] mod 13 by scanning t.
        let p13 = p(13);
        let t = (1..13u32).find(|t| 2 * t % 13 == 1).unwrap();
        let expected_c = (12 * t) % 13;
        assert_eq!(expected_c, 6);
        let (_, c13) = standard_v(p13, 2).unwrap();
        assert_eq!(c13.mat().entries(), [0, 1, expected_c, 0]);
    }

    #[test]
    fn contragredient_examples() {
        let p7 = p(7);
        assert!(Pgl2Elt::identity(p7).contragredient().is_identity());
        let u = Pgl2Elt::from_entries(p7, [1, 1, 0, 1]).unwrap();
        assert_eq!(u.contragredient().mat().entries(), [1, 0, 6, 1]);
    }

    #[test]
    fn scalar_ratio() {
        let p7 = p(7);
        let a = Mat2::new(p7, [1, 2, 3, 4]);
        assert_eq!(a.scale(5).scalar_ratio(&a), Some(5));
        assert_eq!(Mat2::new(p7, [1, 2, 3, 5]).scalar_ratio(&a), None);
        assert_eq!(Mat2::scalar(p7, 6).as_scalar(), Some(6));
    }
}
