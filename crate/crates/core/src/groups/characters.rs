//! Quadratic and F_p-valued characters on finite groups.

use serde::Serialize;
use thiserror::Error;

use super::{FiniteGroup, Subgroup};
use crate::fp_linalg::{legendre_class, DetClass, Prime};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CharViolation {
    #[error("character table has {got} entries, group has {expected}")]
    WrongLength { expected: usize, got: usize },
    #[error("value at {0} is not +1 or -1")]
    NotASign(usize),
    #[error("value at {0} is not a unit mod p")]
    NotAUnit(usize),
    #[error("not multiplicative at ({0}, {1})")]
    NotMultiplicative(usize, usize),
    #[error("character is undefined at {0}")]
    Undefined(usize),
}

/// A character `G -> {+1, -1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct QuadChar {
    values: Vec<i8>,
}

impl QuadChar {
    pub fn new(g: &FiniteGroup, values: Vec<i8>) -> Result<QuadChar, CharViolation> {
        let chi = QuadChar { values };
        verify_character(g, AnyChar::Quad(&chi))?;
        Ok(chi)
    }

    /// Unchecked constructor for deliberately broken inputs in tests.
    pub fn from_values_unchecked(values: Vec<i8>) -> QuadChar {
        QuadChar { values }
    }

    pub fn trivial(g: &FiniteGroup) -> QuadChar {
        QuadChar {
            values: vec![1; g.order()],
        }
    }

    /// The character whose kernel is the index-2 subgroup `k`.
    pub fn from_kernel(g: &FiniteGroup, k: &Subgroup) -> Result<QuadChar, CharViolation> {
        let values = g.elements().map(|x| if k.contains(x) { 1 } else { -1 }).collect();
        QuadChar::new(g, values)
    }

    /// Reads an `F_p`-valued character modulo squares.
    pub fn from_fp_char(g: &FiniteGroup, chi: &FpChar) -> Result<QuadChar, CharViolation> {
        let values = g
            .elements()
            .map(|x| {
                let v = chi.value(x).ok_or(CharViolation::Undefined(x))?;
                legendre_class(v, chi.prime())
                    .map(DetClass::sign)
                    .map_err(|_| CharViolation::NotAUnit(x))
            })
            .collect::<Result<Vec<_>, _>>()?;
        QuadChar::new(g, values)
    }

    #[inline]
    pub fn value(&self, g: usize) -> i8 {
        self.values[g]
    }

    /// The determinant class this character prescribes at `g`.
    #[inline]
    pub fn class(&self, g: usize) -> DetClass {
        DetClass::from_sign(self.values[g])
    }

    pub fn values(&self) -> &[i8] {
        &self.values
    }

    pub fn kernel(&self, g: &FiniteGroup) -> Subgroup {
        let members = g.elements().filter(|&x| self.values[x] == 1).collect();
        Subgroup::from_members(g.order(), members)
    }

    pub fn is_trivial(&self) -> bool {
        self.values.iter().all(|&v| v == 1)
    }

    pub fn is_trivial_on(&self, h: &Subgroup) -> bool {
        h.members().iter().all(|&x| self.values[x] == 1)
    }
}

/// A character on a subgroup with values in `F_p^x`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FpChar {
    p: Prime,
    values: Vec<Option<u32>>,
}

impl Serialize for FpChar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = s.serialize_map(None)?;
        for (x, v) in self.values.iter().enumerate() {
            if let Some(v) = v {
                map.serialize_entry(&x.to_string(), v)?;
            }
        }
        map.end()
    }
}

impl FpChar {
    /// `values[g]` is `None` outside the domain.
    pub fn new(p: Prime, values: Vec<Option<u32>>) -> FpChar {
        FpChar {
            p,
            values: values.into_iter().map(|v| v.map(|x| x % p.get())).collect(),
        }
    }

    pub fn on_whole_group(p: Prime, values: &[u32]) -> FpChar {
        FpChar::new(p, values.iter().map(|&v| Some(v)).collect())
    }

    pub fn trivial_on(p: Prime, n: usize, domain: &Subgroup) -> FpChar {
        FpChar::new(
            p,
            (0..n).map(|x| domain.contains(x).then_some(1)).collect(),
        )
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    #[inline]
    pub fn value(&self, g: usize) -> Option<u32> {
        self.values.get(g).copied().flatten()
    }

    pub fn values(&self) -> &[Option<u32>] {
        &self.values
    }

    pub fn is_trivial(&self) -> bool {
        self.values.iter().flatten().all(|&v| v == 1)
    }
}

#[derive(Debug, Clone, Copy)]
pub enum AnyChar<'a> {
    Quad(&'a QuadChar),
    Fp(&'a FpChar),
}

/// Checks multiplicativity over all pairs of the character's domain.
///
/// A quadratic character must be defined on the whole group; its kernel then
/// automatically has index 1 or 2.
pub fn verify_character(g: &FiniteGroup, chi: AnyChar<'_>) -> Result<(), CharViolation> {
    match chi {
        AnyChar::Quad(q) => {
            if q.values.len() != g.order() {
                return Err(CharViolation::WrongLength {
                    expected: g.order(),
                    got: q.values.len(),
                });
            }
            if let Some(x) = q.values.iter().position(|&v| v != 1 && v != -1) {
                return Err(CharViolation::NotASign(x));
            }
            for a in g.elements() {
                for b in g.elements() {
                    if q.values[g.mul(a, b)] != q.values[a] * q.values[b] {
                        return Err(CharViolation::NotMultiplicative(a, b));
                    }
                }
            }
            debug_assert!({
                let k = q.kernel(g).order();
                k == g.order() || 2 * k == g.order()
            });
            Ok(())
        }
        AnyChar::Fp(c) => {
            if c.values.len() != g.order() {
                return Err(CharViolation::WrongLength {
                    expected: g.order(),
                    got: c.values.len(),
                });
            }
            let domain: Vec<usize> = g.elements().filter(|&x| c.values[x].is_some()).collect();
            for &x in &domain {
                if c.values[x] == Some(0) {
                    return Err(CharViolation::NotAUnit(x));
                }
            }
            for &a in &domain {
                for &b in &domain {
                    let ab = g.mul(a, b);
                    let expected = c.p.mul(c.values[a].unwrap(), c.values[b].unwrap());
                    match c.values[ab] {
                        None => return Err(CharViolation::Undefined(ab)),
                        Some(v) if v != expected => {
                            return Err(CharViolation::NotMultiplicative(a, b))
                        }
                        _ => {}
                    }
                }
            }
            Ok(())
        }
    }
}

/// Every character `G -> {+1,-1}`, trivial one first.
pub fn all_quadratic_chars(g: &FiniteGroup) -> Vec<QuadChar> {
    let gens = g.whole().generators(g);
    let mut out = Vec::new();
    for mask in 0u32..(1 << gens.len()) {
        let mut values = vec![0i8; g.order()];
        values[0] = 1;
        let mut queue = std::collections::VecDeque::from([0usize]);
        let mut ok = true;
        'bfs: while let Some(x) = queue.pop_front() {
            for (i, &s) in gens.iter().enumerate() {
                let sign = if mask >> i & 1 == 1 { -1 } else { 1 };
                let y = g.mul(x, s);
                let v = values[x] * sign;
                if values[y] == 0 {
                    values[y] = v;
                    queue.push_back(y);
                } else if values[y] != v {
                    ok = false;
                    break 'bfs;
                }
            }
        }
        if ok {
            out.push(QuadChar { values });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::library::*;

    #[test]
    fn trivial_and_sign_characters() {
        let c2 = cyclic(2);
        assert!(verify_character(&c2, AnyChar::Quad(&QuadChar::trivial(&c2))).is_ok());
        assert!(QuadChar::new(&c2, vec![1, -1]).is_ok());
        let c3 = cyclic(3);
        assert_eq!(
            QuadChar::new(&c3, vec![1, -1, -1]),
            Err(CharViolation::NotMultiplicative(1, 1))
        );
        let s3 = symmetric3();
        assert_eq!(all_quadratic_chars(&s3).len(), 2);
    }

    #[test]
    fn counts_of_quadratic_characters() {
        assert_eq!(all_quadratic_chars(&cyclic(7)).len(), 1);
        assert_eq!(all_quadratic_chars(&cyclic(4)).len(), 2);
        assert_eq!(all_quadratic_chars(&klein4()).len(), 4);
        assert_eq!(all_quadratic_chars(&elementary_abelian8()).len(), 8);
        assert_eq!(all_quadratic_chars(&quaternion8()).len(), 4);
        for g in small_groups() {
            for chi in all_quadratic_chars(&g) {
                assert!(verify_character(&g, AnyChar::Quad(&chi)).is_ok());
            }
        }
    }

    #[test]
    fn fp_characters() {
        let p = Prime::new(7).unwrap();
        let c2 = cyclic(2);
        let eps = FpChar::on_whole_group(p, &[1, 6]);
        assert!(verify_character(&c2, AnyChar::Fp(&eps)).is_ok());
        let bad = FpChar::on_whole_group(p, &[1, 3]);
        assert_eq!(
            verify_character(&c2, AnyChar::Fp(&bad)),
            Err(CharViolation::NotMultiplicative(1, 1))
        );
        let q = QuadChar::from_fp_char(&c2, &eps).unwrap();
        assert_eq!(q.values(), &[1, -1]);
        // Partially defined on C4, domain <2>.
        let c4 = cyclic(4);
        let h = crate::groups::subgroup_closure(&c4, &[2]).unwrap();
        let chi = FpChar::new(p, vec![Some(1), None, Some(6), None]);
        assert!(verify_character(&c4, AnyChar::Fp(&chi)).is_ok());
        assert!(FpChar::trivial_on(p, 4, &h).is_trivial());
    }
}
