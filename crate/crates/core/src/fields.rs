//! Exact arithmetic over GF(2), GF(4) and GF(2^k) for k ≤ 8.
//!
//! GF(4) elements are encoded as `0, 1, 2, 3` for `0, 1, ω, ω²`. In this
//! polynomial basis (ω ↦ `0b10`) addition is XOR of the codes.
//!
//! GF(2^k) uses one fixed irreducible polynomial per degree:
//!
//! | k | modulus                 | hex   |
//! |---|-------------------------|-------|
//! | 1 | x + 1                   | 0x3   |
//! | 2 | x² + x + 1              | 0x7   |
//! | 3 | x³ + x + 1              | 0xb   |
//! | 4 | x⁴ + x + 1              | 0x13  |
//! | 5 | x⁵ + x² + 1             | 0x25  |
//! | 6 | x⁶ + x + 1              | 0x43  |
//! | 7 | x⁷ + x + 1              | 0x83  |
//! | 8 | x⁸ + x⁴ + x³ + x + 1    | 0x11b |

use std::fmt;
use std::ops::{Add, Mul};

use crate::error::{Error, Result};

/// An element of GF(4) = {0, 1, ω, ω²} with ω² = ω + 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct F4Elem(u8);

impl F4Elem {
    pub const ZERO: F4Elem = F4Elem(0);
    pub const ONE: F4Elem = F4Elem(1);
    pub const OMEGA: F4Elem = F4Elem(2);
    pub const OMEGA2: F4Elem = F4Elem(3);

    pub const ALL: [F4Elem; 4] = [Self::ZERO, Self::ONE, Self::OMEGA, Self::OMEGA2];

    pub fn from_code(code: u8) -> Result<Self> {
        if code < 4 {
            Ok(F4Elem(code))
        } else {
            Err(Error::Domain(format!("GF(4) code {code} out of range")))
        }
    }

    #[inline]
    pub fn code(self) -> u8 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Frobenius conjugate x̄ = x².
    #[inline]
    pub fn conj(self) -> Self {
        f4_conj(self)
    }

    #[inline]
    pub fn trace(self) -> u8 {
        f4_trace(self)
    }

    /// x · x̄, which is 1 for every nonzero x.
    #[inline]
    pub fn norm(self) -> F4Elem {
        f4_mul(self, self.conj())
    }
}

impl fmt::Display for F4Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self.0 {
            0 => "0",
            1 => "1",
            2 => "ω",
            _ => "ω²",
        };
        f.write_str(s)
    }
}

impl Add for F4Elem {
    type Output = F4Elem;
    fn add(self, rhs: F4Elem) -> F4Elem {
        f4_add(self, rhs)
    }
}

impl Mul for F4Elem {
    type Output = F4Elem;
    fn mul(self, rhs: F4Elem) -> F4Elem {
        f4_mul(self, rhs)
    }
}

#[inline]
pub fn f4_add(a: F4Elem, b: F4Elem) -> F4Elem {
    F4Elem(a.0 ^ b.0)
}

// Discrete log: 1 = ω⁰, ω = ω¹, ω² = ω².
const F4_LOG: [u8; 4] = [0, 0, 1, 2];
const F4_EXP: [u8; 3] = [1, 2, 3];

#[inline]
pub fn f4_mul(a: F4Elem, b: F4Elem) -> F4Elem {
    if a.0 == 0 || b.0 == 0 {
        return F4Elem::ZERO;
    }
    let e = (F4_LOG[a.0 as usize] + F4_LOG[b.0 as usize]) % 3;
    F4Elem(F4_EXP[e as usize])
}

#[inline]
pub fn f4_conj(a: F4Elem) -> F4Elem {
    f4_mul(a, a)
}

/// Absolute trace a + ā, always 0 or 1.
#[inline]
pub fn f4_trace(a: F4Elem) -> u8 {
    f4_add(a, f4_conj(a)).0
}

/// Irreducible modulus used for GF(2^k), including the leading bit.
pub const fn modulus_for_degree(k: u8) -> Option<u16> {
    match k {
        1 => Some(0x3),
        2 => Some(0x7),
        3 => Some(0xb),
        4 => Some(0x13),
        5 => Some(0x25),
        6 => Some(0x43),
        7 => Some(0x83),
        8 => Some(0x11b),
        _ => None,
    }
}

/// The field GF(2^k).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Gf2k {
    degree: u8,
    modulus: u16,
}

/// An element of some GF(2^k), as its coefficient bits in the polynomial basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct KScalar(u8);

impl KScalar {
    pub const ZERO: KScalar = KScalar(0);
    pub const ONE: KScalar = KScalar(1);

    #[inline]
    pub fn bits(self) -> u8 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KOp {
    Add,
    Mul,
    Inv,
}

impl Gf2k {
    pub fn new(degree: u8) -> Result<Self> {
        let modulus = modulus_for_degree(degree)
            .ok_or_else(|| Error::Domain(format!("unsupported field degree {degree} (need 1..=8)")))?;
        Ok(Gf2k { degree, modulus })
    }

    /// GF(2).
    pub fn prime() -> Self {
        Gf2k { degree: 1, modulus: 0x3 }
    }

    #[inline]
    pub fn degree(&self) -> u8 {
        self.degree
    }

    #[inline]
    pub fn modulus(&self) -> u16 {
        self.modulus
    }

    #[inline]
    pub fn order(&self) -> usize {
        1usize << self.degree
    }

    pub fn elem(&self, bits: u8) -> Result<KScalar> {
        if (bits as usize) < self.order() {
            Ok(KScalar(bits))
        } else {
            Err(Error::Domain(format!("{bits:#x} is not an element of {self}")))
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = KScalar> {
        (0..self.order()).map(|b| KScalar(b as u8))
    }

    #[inline]
    pub fn add(&self, a: KScalar, b: KScalar) -> KScalar {
        KScalar(a.0 ^ b.0)
    }

    /// Shift-and-add multiplication with reduction by the modulus.
    #[inline]
    pub fn mul(&self, a: KScalar, b: KScalar) -> KScalar {
        let mut acc: u16 = 0;
        let mut x = a.0 as u16;
        let mut y = b.0;
        let top = 1u16 << self.degree;
        while y != 0 {
            if y & 1 != 0 {
                acc ^= x;
            }
            y >>= 1;
            x <<= 1;
            if x & top != 0 {
                x ^= self.modulus;
            }
        }
        KScalar(acc as u8)
    }

    pub fn square(&self, a: KScalar) -> KScalar {
        self.mul(a, a)
    }

    pub fn pow(&self, a: KScalar, mut e: u32) -> KScalar {
        let mut base = a;
        let mut acc = KScalar::ONE;
        while e > 0 {
            if e & 1 != 0 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Inverse via a^(2^k - 2).
    pub fn inv(&self, a: KScalar) -> Result<KScalar> {
        if a.is_zero() {
            return Err(Error::Domain("inverse of zero".into()));
        }
        Ok(self.pow(a, (self.order() - 2) as u32))
    }

    /// Multiplicative order of a nonzero element.
    pub fn mult_order(&self, a: KScalar) -> Option<u32> {
        if a.is_zero() {
            return None;
        }
        let mut x = a;
        let mut n = 1;
        while x != KScalar::ONE {
            x = self.mul(x, a);
            n += 1;
        }
        Some(n)
    }
}

impl fmt::Display for Gf2k {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF(2^{})", self.degree)
    }
}

/// Single dispatch over the three scalar operations; `b` is ignored for `Inv`.
pub fn k_arith(field: &Gf2k, a: KScalar, b: KScalar, op: KOp) -> Result<KScalar> {
    let order = field.order();
    if a.0 as usize >= order || b.0 as usize >= order {
        return Err(Error::Domain(format!("operand outside {field}")));
    }
    match op {
        KOp::Add => Ok(field.add(a, b)),
        KOp::Mul => Ok(field.mul(a, b)),
        KOp::Inv => field.inv(a),
    }
}
