//! Evaluation modulo the Mersenne prime `2^61 − 1`.
//!
//! Fingerprints are ring homomorphisms, so unequal fingerprints prove that
//! two values differ. Equal fingerprints only nominate candidates; callers
//! confirm them with exact arithmetic.

use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};

pub const MODULUS: u64 = (1 << 61) - 1;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Fp(u64);

impl Fp {
    pub fn zero() -> Self {
        Fp(0)
    }

    pub fn one() -> Self {
        Fp(1)
    }

    pub fn new(v: u64) -> Self {
        Fp(v % MODULUS)
    }

    pub fn value(self) -> u64 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    pub fn from_bigint(c: &BigInt) -> Self {
        let (sign, digits) = c.to_u64_digits();
        let mut acc = Fp(0);
        let base = Fp::new(1u64 << 32).square();
        for d in digits.iter().rev() {
            acc = acc * base + Fp::new(*d);
        }
        if sign == Sign::Minus {
            -acc
        } else {
            acc
        }
    }

    fn square(self) -> Self {
        self * self
    }

    pub fn pow(self, mut e: u64) -> Self {
        let mut base = self;
        let mut acc = Fp(1);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    /// `self^e` for any integer `e`; `self` must be nonzero when `e < 0`.
    pub fn pow_signed(self, e: i64) -> Self {
        let order = (MODULUS - 1) as i128;
        self.pow((e as i128).rem_euclid(order) as u64)
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(self) -> Option<Self> {
        (!self.is_zero()).then(|| self.pow(MODULUS - 2))
    }
}

impl Add for Fp {
    type Output = Fp;
    fn add(self, rhs: Fp) -> Fp {
        let s = self.0 + rhs.0;
        Fp(if s >= MODULUS { s - MODULUS } else { s })
    }
}

impl Sub for Fp {
    type Output = Fp;
    fn sub(self, rhs: Fp) -> Fp {
        self + (-rhs)
    }
}

impl Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        Fp(if self.0 == 0 { 0 } else { MODULUS - self.0 })
    }
}

impl Mul for Fp {
    type Output = Fp;
    fn mul(self, rhs: Fp) -> Fp {
        let p = self.0 as u128 * rhs.0 as u128;
        let lo = (p as u64) & MODULUS;
        let hi = (p >> 61) as u64;
        Fp::new(lo + hi)
    }
}

/// Pseudo-random nonzero evaluation point for variables `0..nvars`.
///
/// The value for a given index never depends on `nvars`, so fingerprints of
/// the same expression agree across contexts that share a variable prefix.
pub fn point(nvars: usize) -> Vec<Fp> {
    (0..nvars).map(|i| coordinate(i as u64)).collect()
}

fn coordinate(i: u64) -> Fp {
    // splitmix64
    let mut z = i.wrapping_add(0x9E37_79B9_7F4A_7C15).wrapping_mul(0x2545_F491_4F6C_DD1D);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^= z >> 31;
    let v = Fp::new(z);
    if v.is_zero() {
        Fp(2)
    } else {
        v
    }
}
