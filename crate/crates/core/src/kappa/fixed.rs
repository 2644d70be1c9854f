//! Unsigned fixed-point numbers with 64 fractional bits where every
//! operation rounds toward zero, so computed sums of nonnegative terms never
//! exceed the true value.

use super::dyadic::DyadicRational;

pub const FRAC_BITS: u32 = 64;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct Fixed(pub u128);

impl Fixed {
    pub const ZERO: Fixed = Fixed(0);
    pub const ONE: Fixed = Fixed(1u128 << FRAC_BITS);

    pub fn checked_add(self, o: Fixed) -> Option<Fixed> {
        self.0.checked_add(o.0).map(Fixed)
    }

    /// `floor(a * b)`.
    pub fn checked_mul(self, o: Fixed) -> Option<Fixed> {
        let (hi, lo) = widening_mul(self.0, o.0);
        // (hi:lo) >> FRAC_BITS must fit in 128 bits
        if hi >> FRAC_BITS != 0 {
            return None;
        }
        Some(Fixed((hi << (128 - FRAC_BITS)) | (lo >> FRAC_BITS)))
    }

    /// `floor(self * num / den)`.
    pub fn checked_mul_ratio(self, num: u64, den: u64) -> Option<Fixed> {
        let (hi, lo) = widening_mul(self.0, num as u128);
        if hi != 0 {
            return None;
        }
        Some(Fixed(lo / den as u128))
    }

    pub fn to_dyadic(self) -> DyadicRational {
        DyadicRational::from_fixed(self.0, FRAC_BITS)
    }
}

/// Full 256-bit product as (high, low) halves.
fn widening_mul(a: u128, b: u128) -> (u128, u128) {
    const MASK: u128 = u64::MAX as u128;
    let (a1, a0) = (a >> 64, a & MASK);
    let (b1, b0) = (b >> 64, b & MASK);
    let p00 = a0 * b0;
    let p01 = a0 * b1;
    let p10 = a1 * b0;
    let p11 = a1 * b1;
    let mid = (p00 >> 64) + (p01 & MASK) + (p10 & MASK);
    let lo = (p00 & MASK) | (mid << 64);
    let hi = p11 + (p01 >> 64) + (p10 >> 64) + (mid >> 64);
    (hi, lo)
}
