//! Arithmetic in GF(2^m) in the polynomial basis.
//!
//! A field element is a coefficient vector packed into a `u64`: bit `i` is the
//! coefficient of `a^i`. Together with the [`Bits`] layout this means the
//! first character of an input string is the constant term.

use crate::bits::Bits;

/// Largest supported extension degree.
pub const MAX_DEGREE: u32 = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum FieldError {
    #[error("operands belong to different fields (moduli {0:#b} and {1:#b})")]
    ModulusMismatch(u64, u64),
    #[error("degree {0} is outside 1..={MAX_DEGREE}")]
    BadDegree(u32),
    #[error("polynomial {0:#b} is reducible over GF(2)")]
    Reducible(u64),
    #[error("value {value:#b} does not fit in a degree-{degree} field")]
    OutOfRange { value: u64, degree: u32 },
}

/// Degree of a nonzero polynomial.
fn degree_of(p: u64) -> u32 {
    debug_assert!(p != 0);
    63 - p.leading_zeros()
}

/// Remainder of `a` modulo the nonzero polynomial `b`.
fn poly_rem(mut a: u64, b: u64) -> u64 {
    let db = degree_of(b);
    while a != 0 && degree_of(a) >= db {
        a ^= b << (degree_of(a) - db);
    }
    a
}

/// Trial division by every polynomial of degree `1..=deg/2`.
pub fn is_irreducible(poly: u64) -> bool {
    if poly < 2 {
        return false;
    }
    let deg = degree_of(poly);
    for d in 1..=deg / 2 {
        for divisor in (1u64 << d)..(1u64 << (d + 1)) {
            if poly_rem(poly, divisor) == 0 {
                return false;
            }
        }
    }
    true
}

/// A monic irreducible polynomial over GF(2); its top bit is set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Modulus {
    degree: u32,
    poly: u64,
}

impl Modulus {
    pub fn new(poly: u64) -> Result<Self, FieldError> {
        if poly < 2 {
            return Err(FieldError::Reducible(poly));
        }
        let degree = degree_of(poly);
        if degree > MAX_DEGREE {
            return Err(FieldError::BadDegree(degree));
        }
        if !is_irreducible(poly) {
            return Err(FieldError::Reducible(poly));
        }
        Ok(Modulus { degree, poly })
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Integer encoding, bit `i` = coefficient of `a^i`.
    pub fn poly(&self) -> u64 {
        self.poly
    }

    /// Number of field elements, `2^m`.
    pub fn order(&self) -> u64 {
        1u64 << self.degree
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement { value: 0, modulus: *self }
    }

    pub fn one(&self) -> FieldElement {
        FieldElement { value: 1, modulus: *self }
    }

    pub fn element(&self, value: u64) -> Result<FieldElement, FieldError> {
        if value >= self.order() {
            return Err(FieldError::OutOfRange { value, degree: self.degree });
        }
        Ok(FieldElement { value, modulus: *self })
    }

    /// Embeds an `m`-bit string: character `i` becomes the coefficient of `a^i`.
    pub fn embed(&self, bits: Bits) -> Result<FieldElement, FieldError> {
        if bits.len() != self.degree as usize {
            return Err(FieldError::OutOfRange { value: bits.word(), degree: self.degree });
        }
        self.element(bits.word())
    }

    /// Every element, ordered by integer encoding.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.order()).map(move |value| FieldElement { value, modulus: *self })
    }
}

/// The monic irreducible polynomial of degree `m` with the smallest integer
/// encoding.
pub fn find_irreducible(m: u32) -> Result<Modulus, FieldError> {
    if m == 0 || m > MAX_DEGREE {
        return Err(FieldError::BadDegree(m));
    }
    let lo = 1u64 << m;
    let poly = (lo..lo << 1).find(|&p| is_irreducible(p)).expect("an irreducible polynomial exists in every degree");
    Ok(Modulus { degree: m, poly })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElement {
    value: u64,
    modulus: Modulus,
}

impl FieldElement {
    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    /// Back to an `m`-bit string (inverse of [`Modulus::embed`]).
    pub fn to_bits(&self) -> Bits {
        Bits::new(self.modulus.degree as usize, self.value)
    }

    fn same_field(&self, other: &FieldElement) -> Result<(), FieldError> {
        if self.modulus != other.modulus {
            return Err(FieldError::ModulusMismatch(self.modulus.poly, other.modulus.poly));
        }
        Ok(())
    }

    pub fn add(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        self.same_field(other)?;
        Ok(FieldElement { value: self.value ^ other.value, modulus: self.modulus })
    }

    /// Carry-less product reduced modulo the field polynomial.
    pub fn mul(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        self.same_field(other)?;
        let (mut a, mut b) = (self.value, other.value);
        let m = self.modulus.degree;
        let top = 1u64 << m;
        let mut acc = 0u64;
        while b != 0 {
            if b & 1 == 1 {
                acc ^= a;
            }
            b >>= 1;
            a <<= 1;
            if a & top != 0 {
                a ^= self.modulus.poly;
            }
        }
        Ok(FieldElement { value: acc, modulus: self.modulus })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    /// Independent oracle: a degree-m polynomial is reducible iff it is the
    /// carry-less product of two polynomials of positive degree.
    fn reducible_by_products(p: u64) -> bool {
        let m = degree_of(p);
        for da in 1..m {
            let db = m - da;
            for a in (1u64 << da)..(1u64 << (da + 1)) {
                for b in (1u64 << db)..(1u64 << (db + 1)) {
                    let mut prod = 0u64;
                    for i in 0..=db {
                        if (b >> i) & 1 == 1 {
                            prod ^= a << i;
                        }
                    }
                    if prod == p {
                        return true;
                    }
                }
            }
        }
        false
    }

    fn smallest_irreducible_oracle(m: u32) -> u64 {
        ((1u64 << m)..(1u64 << (m + 1))).find(|&p| !reducible_by_products(p)).unwrap()
    }

    #[test]
    fn smallest_irreducibles() {
        assert_eq!(find_irreducible(1).unwrap().poly(), 0b10);
        assert_eq!(find_irreducible(2).unwrap().poly(), 0b111);
        assert_eq!(find_irreducible(3).unwrap().poly(), 0b1011);
        for m in 1..=8 {
            assert_eq!(find_irreducible(m).unwrap().poly(), smallest_irreducible_oracle(m), "m={m}");
        }
    }

    #[test]
    fn only_degree_two_irreducible() {
        let irreducible: Vec<u64> = (4u64..8).filter(|&p| is_irreducible(p)).collect();
        assert_eq!(irreducible, [0b111]);
    }

    #[test]
    fn degree_guards() {
        assert_eq!(find_irreducible(0), Err(FieldError::BadDegree(0)));
        assert_eq!(find_irreducible(33), Err(FieldError::BadDegree(33)));
        assert_eq!(Modulus::new(0b101), Err(FieldError::Reducible(0b101)));
        assert!(find_irreducible(32).is_ok());
    }

    #[test]
    fn small_field_examples() {
        let f = find_irreducible(2).unwrap();
        // bits "01" is the element a, "11" is 1 + a
        let alpha = f.embed(Bits::parse("01").unwrap()).unwrap();
        let alpha_plus_one = f.embed(Bits::parse("11").unwrap()).unwrap();
        assert_eq!(alpha.add(&alpha_plus_one).unwrap().to_bits(), Bits::parse("10").unwrap());
        // a^2 = a + 1 modulo a^2 + a + 1
        assert_eq!(alpha.mul(&alpha).unwrap(), alpha_plus_one);
        for x in f.elements() {
            assert!(x.add(&x).unwrap().is_zero());
            assert_eq!(x.add(&f.zero()).unwrap(), x);
            assert_eq!(f.one().mul(&x).unwrap(), x);
            assert!(x.mul(&f.zero()).unwrap().is_zero());
        }
    }

    #[test]
    fn mismatched_fields_are_rejected() {
        let a = find_irreducible(2).unwrap().one();
        let b = find_irreducible(3).unwrap().one();
        assert!(matches!(a.add(&b), Err(FieldError::ModulusMismatch(..))));
        assert!(matches!(a.mul(&b), Err(FieldError::ModulusMismatch(..))));
    }

    #[test]
    fn multiplication_by_nonzero_is_a_bijection() {
        for m in 1..=4 {
            let f = find_irreducible(m).unwrap();
            for a in f.elements().filter(|a| !a.is_zero()) {
                let mut seen: Vec<u64> = f.elements().map(|b| a.mul(&b).unwrap().value()).collect();
                seen.sort_unstable();
                seen.dedup();
                assert_eq!(seen.len() as u64, f.order());
            }
        }
    }

    #[test]
    fn field_axioms_exhaustive_small() {
        for m in 1..=3 {
            let f = find_irreducible(m).unwrap();
            for a in f.elements() {
                for b in f.elements() {
                    assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
                    for c in f.elements() {
                        let ab_c = a.mul(&b).unwrap().mul(&c).unwrap();
                        let a_bc = a.mul(&b.mul(&c).unwrap()).unwrap();
                        assert_eq!(ab_c, a_bc);
                        let lhs = a.mul(&b.add(&c).unwrap()).unwrap();
                        let rhs = a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap();
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn nonzero_elements_form_a_group() {
        for m in 1..=5 {
            let f = find_irreducible(m).unwrap();
            let nonzero: Vec<_> = f.elements().filter(|e| !e.is_zero()).collect();
            assert_eq!(nonzero.len() as u64, f.order() - 1);
            assert!(nonzero.contains(&f.one()));
            for a in &nonzero {
                for b in &nonzero {
                    assert!(!a.mul(b).unwrap().is_zero());
                }
            }
        }
    }
}
