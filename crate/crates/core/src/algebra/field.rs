//! Binary extension fields GF(2^m) in polynomial basis.

use std::fmt;

use super::AlgebraError;

/// GF(2^m) presented as GF(2)[x] modulo a fixed irreducible polynomial.
///
/// The modulus includes its leading term, so `0b10011` is x⁴ + x + 1.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct GaloisField {
    degree: u32,
    modulus: u32,
}

impl GaloisField {
    pub const MAX_DEGREE: u32 = 15;

    /// The pinned field for `1 <= m <= 4`: x+1, x²+x+1, x³+x+1, x⁴+x+1.
    pub fn standard(m: u32) -> Result<Self, AlgebraError> {
        let modulus = match m {
            1 => 0b11,
            2 => 0b111,
            3 => 0b1011,
            4 => 0b10011,
            _ => return Err(AlgebraError::UnsupportedDegree(m)),
        };
        Ok(Self { degree: m, modulus })
    }

    /// A field with a caller-supplied modulus, checked for irreducibility.
    pub fn with_modulus(modulus: u32) -> Result<Self, AlgebraError> {
        let degree = 31u32.saturating_sub(modulus.leading_zeros());
        if modulus < 2 || degree > Self::MAX_DEGREE || !is_irreducible(modulus) {
            return Err(AlgebraError::Reducible(modulus));
        }
        Ok(Self { degree, modulus })
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn order(&self) -> usize {
        1usize << self.degree
    }

    /// Element with polynomial coefficients given by the bits of `bits`.
    pub fn element(&self, bits: u32) -> Result<FieldElement, AlgebraError> {
        if bits >= 1 << self.degree {
            return Err(AlgebraError::NotReduced {
                value: bits,
                degree: self.degree,
            });
        }
        Ok(FieldElement {
            value: bits as u16,
            field: *self,
        })
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement {
            value: 0,
            field: *self,
        }
    }

    pub fn one(&self) -> FieldElement {
        FieldElement {
            value: 1,
            field: *self,
        }
    }

    /// The generator `x` of the polynomial basis (equals 1 when m = 1).
    pub fn x(&self) -> FieldElement {
        FieldElement {
            value: reduce(0b10, self.modulus, self.degree) as u16,
            field: *self,
        }
    }

    /// All field elements in increasing bit order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.order() as u32).map(move |v| FieldElement {
            value: v as u16,
            field: *self,
        })
    }

    /// Raw product on coefficient words; both inputs must be reduced.
    pub fn mul_raw(&self, a: u32, b: u32) -> u32 {
        reduce(clmul(a, b), self.modulus, self.degree)
    }

    /// Raw trace Σ a^(2^i) for i < m; always 0 or 1.
    pub fn trace_raw(&self, a: u32) -> u32 {
        let mut acc = 0;
        let mut pow = a;
        for _ in 0..self.degree {
            acc ^= pow;
            pow = self.mul_raw(pow, pow);
        }
        debug_assert!(acc <= 1, "trace left the prime field");
        acc
    }
}

/// An element of some [`GaloisField`].
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElement {
    value: u16,
    field: GaloisField,
}

impl FieldElement {
    pub fn bits(&self) -> u32 {
        self.value as u32
    }

    pub fn field(&self) -> GaloisField {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn same_field(&self, other: &FieldElement) -> Result<(), AlgebraError> {
        if self.field != other.field {
            return Err(AlgebraError::IncompatibleFields {
                left: self.field.modulus,
                right: other.field.modulus,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &FieldElement) -> Result<FieldElement, AlgebraError> {
        self.same_field(other)?;
        Ok(FieldElement {
            value: self.value ^ other.value,
            field: self.field,
        })
    }

    pub fn mul(&self, other: &FieldElement) -> Result<FieldElement, AlgebraError> {
        self.same_field(other)?;
        Ok(FieldElement {
            value: self.field.mul_raw(self.bits(), other.bits()) as u16,
            field: self.field,
        })
    }

    pub fn square(&self) -> FieldElement {
        FieldElement {
            value: self.field.mul_raw(self.bits(), self.bits()) as u16,
            field: self.field,
        }
    }

    pub fn pow(&self, mut e: u64) -> FieldElement {
        let mut base = *self;
        let mut acc = self.field.one();
        while e > 0 {
            if e & 1 == 1 {
                acc.value = self.field.mul_raw(acc.bits(), base.bits()) as u16;
            }
            base = base.square();
            e >>= 1;
        }
        acc
    }

    /// Absolute trace to GF(2).
    pub fn trace(&self) -> u8 {
        self.field.trace_raw(self.bits()) as u8
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.value == 0 {
            return f.write_str("0");
        }
        let terms: Vec<String> = (0..16)
            .rev()
            .filter(|i| (self.value >> i) & 1 == 1)
            .map(|i| match i {
                0 => "1".to_string(),
                1 => "x".to_string(),
                _ => format!("x^{i}"),
            })
            .collect();
        f.write_str(&terms.join("+"))
    }
}

/// Carry-less product of two polynomials.
fn clmul(a: u32, b: u32) -> u32 {
    let mut acc = 0u32;
    let mut a = a;
    let mut b = b;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= a;
        }
        a <<= 1;
        b >>= 1;
    }
    acc
}

fn reduce(mut p: u32, modulus: u32, degree: u32) -> u32 {
    while p >= 1 << degree {
        let top = 31 - p.leading_zeros();
        p ^= modulus << (top - degree);
    }
    p
}

fn poly_mod(a: u32, b: u32) -> u32 {
    let db = 31 - b.leading_zeros();
    reduce(a, b, db)
}

fn is_irreducible(p: u32) -> bool {
    let d = 31 - p.leading_zeros();
    if d == 0 {
        return false;
    }
    (2..1u32 << (d / 2 + 1))
        .filter(|q| 31 - q.leading_zeros() <= d / 2)
        .all(|q| poly_mod(p, q) != 0)
}
