//! Arithmetic in the prime field F_p.

use std::fmt;
use std::ops::Mul;

use serde::{Deserialize, Serialize};

use super::FpError;

/// Smallest prime accepted as a level.
pub const MIN_PRIME: u32 = 7;

/// A prime `p >= 7`.
///
/// Every residue handled by this crate lives in `[0, p)` and products are
/// carried out in `u64`, so any `p < 2^32` is safe.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Prime(u32);

impl Prime {
    pub fn new(p: u64) -> Result<Self, FpError> {
        if p < MIN_PRIME as u64 {
            return Err(FpError::PrimeTooSmall(p));
        }
        if p > u32::MAX as u64 || !is_prime(p) {
            return Err(FpError::NotPrime(p));
        }
        Ok(Prime(p as u32))
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    /// Reduces any integer into `[0, p)`.
    #[inline]
    pub fn reduce(self, x: i64) -> u32 {
        x.rem_euclid(self.0 as i64) as u32
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        ((a as u64 + b as u64) % self.0 as u64) as u32
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        ((a as u64 + self.0 as u64 - b as u64) % self.0 as u64) as u32
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.0 - a
        }
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.0 as u64) as u32
    }

    pub fn pow(self, a: u32, mut e: u64) -> u32 {
        let mut base = a % self.0;
        let mut acc = 1 % self.0;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse via Fermat's little theorem.
    pub fn inv(self, a: u32) -> Option<u32> {
        if a % self.0 == 0 {
            None
        } else {
            Some(self.pow(a, self.0 as u64 - 2))
        }
    }

    /// `-1` as a residue.
    #[inline]
    pub fn minus_one(self) -> u32 {
        self.0 - 1
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<'de> Deserialize<'de> for Prime {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let p = u64::deserialize(d)?;
        Prime::new(p).map_err(serde::de::Error::custom)
    }
}

/// Deterministic trial division; the primes used here are tiny.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Class of a nonzero residue in `F_p^x / (F_p^x)^2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum DetClass {
    Square,
    NonSquare,
}

impl DetClass {
    /// `+1 -> Square`, `-1 -> NonSquare`.
    pub fn from_sign(sign: i8) -> DetClass {
        if sign >= 0 {
            DetClass::Square
        } else {
            DetClass::NonSquare
        }
    }

    pub fn sign(self) -> i8 {
        match self {
            DetClass::Square => 1,
            DetClass::NonSquare => -1,
        }
    }
}

impl Mul for DetClass {
    type Output = DetClass;

    fn mul(self, rhs: DetClass) -> DetClass {
        if self == rhs {
            DetClass::Square
        } else {
            DetClass::NonSquare
        }
    }
}

/// Euler's criterion: `a^((p-1)/2)` is `1` for squares and `-1` otherwise.
pub fn legendre_class(a: u32, p: Prime) -> Result<DetClass, FpError> {
    let a = a % p.get();
    if a == 0 {
        return Err(FpError::ZeroResidue);
    }
    let e = p.pow(a, (p.get() as u64 - 1) / 2);
    Ok(if e == 1 {
        DetClass::Square
    } else {
        DetClass::NonSquare
    })
}

/// Least `v >= 2` that is not a square mod `p`.
pub fn smallest_nonresidue(p: Prime) -> u32 {
    (2..p.get())
        .find(|&v| legendre_class(v, p) == Ok(DetClass::NonSquare))
        .expect("every odd prime has a quadratic nonresidue")
}

/// The smaller square root of `-1`, if there is one.
pub fn sqrt_minus_one(p: Prime) -> Option<u32> {
    let minus_one = p.minus_one();
    (1..p.get()).find(|&i| p.mul(i, i) == minus_one)
}
