//! Exact rationals with power-of-two denominators.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// `num / 2^exp`, kept canonical: the numerator is odd unless `exp == 0`,
/// and zero is `0 / 2^0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DyadicRational {
    num: BigInt,
    exp: u64,
}

impl DyadicRational {
    pub fn new(num: impl Into<BigInt>, exp: u64) -> Self {
        let mut d = DyadicRational {
            num: num.into(),
            exp,
        };
        d.canonicalize();
        d
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        DyadicRational::new(n, 0)
    }

    /// `2^-e`.
    pub fn pow2_inv(e: u64) -> Self {
        DyadicRational::new(1, e)
    }

    fn canonicalize(&mut self) {
        if self.num.is_zero() {
            self.exp = 0;
            return;
        }
        let tz = self.num.trailing_zeros().unwrap_or(0).min(self.exp);
        if tz > 0 {
            self.num >>= tz;
            self.exp -= tz;
        }
    }

    pub fn numerator(&self) -> &BigInt {
        &self.num
    }

    /// Denominator exponent: the value is `numerator / 2^exponent`.
    pub fn exponent(&self) -> u64 {
        self.exp
    }

    pub fn denominator(&self) -> BigInt {
        BigInt::one() << self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Multiplies by `2^shift` (which may be negative).
    pub fn scale_pow2(&self, shift: i64) -> Self {
        if shift >= 0 {
            let s = shift as u64;
            if s <= self.exp {
                DyadicRational::new(self.num.clone(), self.exp - s)
            } else {
                DyadicRational::new(&self.num << (s - self.exp), 0)
            }
        } else {
            DyadicRational::new(self.num.clone(), self.exp + shift.unsigned_abs())
        }
    }

    pub fn to_rational(&self) -> BigRational {
        BigRational::new(self.num.clone(), self.denominator())
    }

    pub fn to_f64(&self) -> f64 {
        // keep 64 significant bits before converting
        let bits = self.num.bits();
        if bits > 64 {
            let drop = bits - 64;
            let top = (&self.num >> drop).to_f64().unwrap_or(f64::NAN);
            top * 2f64.powi((drop as i64 - self.exp as i64) as i32)
        } else {
            self.num.to_f64().unwrap_or(f64::NAN) * 2f64.powi(-(self.exp as i32))
        }
    }

    /// Decimal expansion with `digits` places, rounded toward negative
    /// infinity.
    pub fn to_decimal_floor(&self, digits: usize) -> String {
        self.decimal(digits, false)
    }

    /// Decimal expansion with `digits` places, rounded toward positive
    /// infinity.
    pub fn to_decimal_ceil(&self, digits: usize) -> String {
        self.decimal(digits, true)
    }

    fn decimal(&self, digits: usize, up: bool) -> String {
        let scaled = &self.num * BigInt::from(10u32).pow(digits as u32);
        let den = self.denominator();
        let q = if up {
            Integer::div_ceil(&scaled, &den)
        } else {
            Integer::div_floor(&scaled, &den)
        };
        let neg = q.is_negative();
        let mag = q.abs().to_string();
        let mag = format!("{mag:0>width$}", width = digits + 1);
        let (int, frac) = mag.split_at(mag.len() - digits);
        let sign = if neg { "-" } else { "" };
        if digits == 0 {
            format!("{sign}{int}")
        } else {
            format!("{sign}{int}.{frac}")
        }
    }

    /// `v / 2^frac_bits` for an unsigned fixed-point value.
    pub fn from_fixed(v: u128, frac_bits: u32) -> Self {
        DyadicRational::new(
            BigInt::from_biguint(Sign::Plus, BigUint::from(v)),
            frac_bits as u64,
        )
    }
}

impl Zero for DyadicRational {
    fn zero() -> Self {
        DyadicRational {
            num: BigInt::zero(),
            exp: 0,
        }
    }

    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for DyadicRational {
    fn one() -> Self {
        DyadicRational::from_int(1)
    }
}

impl Add for &DyadicRational {
    type Output = DyadicRational;

    fn add(self, o: &DyadicRational) -> DyadicRational {
        let e = self.exp.max(o.exp);
        let a = &self.num << (e - self.exp);
        let b = &o.num << (e - o.exp);
        DyadicRational::new(a + b, e)
    }
}

impl Add for DyadicRational {
    type Output = DyadicRational;

    fn add(self, o: DyadicRational) -> DyadicRational {
        &self + &o
    }
}

impl AddAssign<&DyadicRational> for DyadicRational {
    fn add_assign(&mut self, o: &DyadicRational) {
        *self = &*self + o;
    }
}

impl Neg for DyadicRational {
    type Output = DyadicRational;

    fn neg(self) -> DyadicRational {
        DyadicRational {
            num: -self.num,
            exp: self.exp,
        }
    }
}

impl Sub for &DyadicRational {
    type Output = DyadicRational;

    fn sub(self, o: &DyadicRational) -> DyadicRational {
        self + &(-o.clone())
    }
}

impl Sub for DyadicRational {
    type Output = DyadicRational;

    fn sub(self, o: DyadicRational) -> DyadicRational {
        &self - &o
    }
}

impl Mul for &DyadicRational {
    type Output = DyadicRational;

    fn mul(self, o: &DyadicRational) -> DyadicRational {
        DyadicRational::new(&self.num * &o.num, self.exp + o.exp)
    }
}

impl Mul for DyadicRational {
    type Output = DyadicRational;

    fn mul(self, o: DyadicRational) -> DyadicRational {
        &self * &o
    }
}

impl std::iter::Sum for DyadicRational {
    fn sum<I: Iterator<Item = DyadicRational>>(iter: I) -> Self {
        iter.fold(DyadicRational::zero(), |a, b| &a + &b)
    }
}

impl Ord for DyadicRational {
    fn cmp(&self, o: &Self) -> Ordering {
        let e = self.exp.max(o.exp);
        (&self.num << (e - self.exp)).cmp(&(&o.num << (e - o.exp)))
    }
}

impl PartialOrd for DyadicRational {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Display for DyadicRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp == 0 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/2^{}", self.num, self.exp)
        }
    }
}

/// JSON form: numerator and denominator as decimal strings.
#[derive(Serialize, Deserialize)]
struct FractionRecord {
    num: String,
    den: String,
}

impl Serialize for DyadicRational {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        FractionRecord {
            num: self.num.to_string(),
            den: self.denominator().to_string(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for DyadicRational {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = FractionRecord::deserialize(d)?;
        let num: BigInt = r.num.parse().map_err(D::Error::custom)?;
        let den: BigUint = r.den.parse().map_err(D::Error::custom)?;
        let exp = den.trailing_zeros().unwrap_or(0);
        if den.is_zero() || den != BigUint::one() << exp {
            return Err(D::Error::custom(format!("{den} is not a power of two")));
        }
        Ok(DyadicRational::new(num, exp))
    }
}
