//! Exact non-negative dyadic rationals `p / 2^e`.
//!
//! Every measure in the crate is a [`Dyadic`]. Values are kept canonical
//! (numerator odd, or the pair `0/2^0`) so that structural equality is value
//! equality and the textual form is unique.

use num_bigint::BigUint;
use num_traits::{One, Pow, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul};
use std::str::FromStr;

use crate::error::Error;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    num: BigUint,
    exp: u64,
}

impl Dyadic {
    /// Builds `num / 2^exp` and reduces it.
    pub fn new(num: impl Into<BigUint>, exp: u64) -> Self {
        let mut d = Dyadic {
            num: num.into(),
            exp,
        };
        d.normalize();
        d
    }

    pub fn zero() -> Self {
        Dyadic {
            num: BigUint::zero(),
            exp: 0,
        }
    }

    pub fn one() -> Self {
        Dyadic {
            num: BigUint::one(),
            exp: 0,
        }
    }

    /// `2^k` for any integer `k`.
    pub fn pow2(k: i64) -> Self {
        if k >= 0 {
            Dyadic {
                num: BigUint::one() << (k as u64),
                exp: 0,
            }
        } else {
            Dyadic {
                num: BigUint::one(),
                exp: k.unsigned_abs(),
            }
        }
    }

    /// Measure of a single cylinder of the given length: `2^-len`.
    pub fn cylinder(len: usize) -> Self {
        Dyadic::pow2(-(len as i64))
    }

    pub fn numerator(&self) -> &BigUint {
        &self.num
    }

    pub fn exponent(&self) -> u64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.exp == 0 && self.num.is_one()
    }

    fn normalize(&mut self) {
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

    /// Multiplies by `2^k`.
    pub fn mul_pow2(&self, k: i64) -> Self {
        if self.is_zero() {
            return Dyadic::zero();
        }
        if k >= 0 {
            let k = k as u64;
            if k <= self.exp {
                Dyadic::new(self.num.clone(), self.exp - k)
            } else {
                Dyadic::new(&self.num << (k - self.exp), 0)
            }
        } else {
            Dyadic::new(self.num.clone(), self.exp + k.unsigned_abs())
        }
    }

    /// Exact `self - rhs`, or `None` when the result would be negative.
    pub fn checked_sub(&self, rhs: &Dyadic) -> Option<Dyadic> {
        let e = self.exp.max(rhs.exp);
        let a = &self.num << (e - self.exp);
        let b = &rhs.num << (e - rhs.exp);
        if a < b {
            None
        } else {
            Some(Dyadic::new(a - b, e))
        }
    }

    /// `self - rhs`, clamped at zero.
    pub fn saturating_sub(&self, rhs: &Dyadic) -> Dyadic {
        self.checked_sub(rhs).unwrap_or_else(Dyadic::zero)
    }

    /// `|self - rhs|`.
    pub fn abs_diff(&self, rhs: &Dyadic) -> Dyadic {
        match self.checked_sub(rhs) {
            Some(d) => d,
            None => rhs.checked_sub(self).expect("one side is larger"),
        }
    }

    pub fn pow(&self, k: u32) -> Dyadic {
        Dyadic::new(Pow::pow(&self.num, k), self.exp * k as u64)
    }

    /// `1 - self`, or `None` if `self > 1`.
    pub fn complement(&self) -> Option<Dyadic> {
        Dyadic::one().checked_sub(self)
    }

    pub fn to_f64(&self) -> f64 {
        // Scale down wide numerators first so the conversion stays finite.
        let bits = self.num.bits();
        if bits > 1000 {
            let shift = bits - 1000;
            let n = (&self.num >> shift).to_f64().unwrap_or(f64::INFINITY);
            return n * 2f64.powi(shift as i32 - self.exp as i32);
        }
        let n = self.num.to_f64().unwrap_or(f64::INFINITY);
        if self.exp > 1000 {
            n * 2f64.powi(-1000) * 2f64.powi(-((self.exp - 1000) as i32))
        } else {
            n * 2f64.powi(-(self.exp as i32))
        }
    }
}

impl Default for Dyadic {
    fn default() -> Self {
        Dyadic::zero()
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let e = self.exp.max(other.exp);
        let a = &self.num << (e - self.exp);
        let b = &other.num << (e - other.exp);
        a.cmp(&b)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add<&Dyadic> for &Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: &Dyadic) -> Dyadic {
        let e = self.exp.max(rhs.exp);
        let a = &self.num << (e - self.exp);
        let b = &rhs.num << (e - rhs.exp);
        Dyadic::new(a + b, e)
    }
}

impl Add for Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: Dyadic) -> Dyadic {
        &self + &rhs
    }
}

impl Add<&Dyadic> for Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: &Dyadic) -> Dyadic {
        &self + rhs
    }
}

impl AddAssign<&Dyadic> for Dyadic {
    fn add_assign(&mut self, rhs: &Dyadic) {
        *self = &*self + rhs;
    }
}

impl AddAssign for Dyadic {
    fn add_assign(&mut self, rhs: Dyadic) {
        *self = &*self + &rhs;
    }
}

impl Mul<&Dyadic> for &Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: &Dyadic) -> Dyadic {
        Dyadic::new(&self.num * &rhs.num, self.exp + rhs.exp)
    }
}

impl Mul for Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: Dyadic) -> Dyadic {
        &self * &rhs
    }
}

impl Sum for Dyadic {
    fn sum<I: Iterator<Item = Dyadic>>(iter: I) -> Dyadic {
        iter.fold(Dyadic::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Dyadic> for Dyadic {
    fn sum<I: Iterator<Item = &'a Dyadic>>(iter: I) -> Dyadic {
        iter.fold(Dyadic::zero(), |acc, x| acc + x)
    }
}

impl Zero for Dyadic {
    fn zero() -> Self {
        Dyadic::zero()
    }
    fn is_zero(&self) -> bool {
        Dyadic::is_zero(self)
    }
}

impl One for Dyadic {
    fn one() -> Self {
        Dyadic::one()
    }
}

impl From<u64> for Dyadic {
    fn from(n: u64) -> Self {
        Dyadic::new(n, 0)
    }
}

/// Lowest-terms text form `p/2^e`.
impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/2^{}", self.num, self.exp)
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Accepts `p/2^e`, `p/q` with `q` a power of two, or a bare integer `p`.
impl FromStr for Dyadic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || Error::Parse(format!("not a dyadic rational: {s:?}"));
        let s = s.trim();
        let parse_big = |t: &str| BigUint::from_str(t.trim()).map_err(|_| bad());
        match s.split_once('/') {
            None => Ok(Dyadic::new(parse_big(s)?, 0)),
            Some((p, q)) => {
                let num = parse_big(p)?;
                let q = q.trim();
                if let Some(e) = q.strip_prefix("2^") {
                    let e: u64 = e.trim().parse().map_err(|_| bad())?;
                    Ok(Dyadic::new(num, e))
                } else {
                    let den = parse_big(q)?;
                    if den.is_zero() || !(&den & (&den - 1u32)).is_zero() {
                        return Err(bad());
                    }
                    let e = den.trailing_zeros().unwrap_or(0);
                    Ok(Dyadic::new(num, e))
                }
            }
        }
    }
}

impl Serialize for Dyadic {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Dyadic {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        Dyadic::from_str(&s).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn d(s: &str) -> Dyadic {
        s.parse().unwrap()
    }

    #[test]
    fn canonical_form() {
        assert_eq!(Dyadic::new(4u32, 3), d("1/2"));
        assert_eq!(Dyadic::new(0u32, 9).exponent(), 0);
        assert_eq!(d("6/8").to_string(), "3/2^2");
        assert_eq!(Dyadic::one().to_string(), "1/2^0");
        assert_eq!(Dyadic::zero().to_string(), "0/2^0");
    }

    #[test]
    fn parse_forms() {
        assert_eq!(d("3/2^2"), d("3/4"));
        assert_eq!(d("5"), Dyadic::from(5));
        assert!("1/3".parse::<Dyadic>().is_err());
        assert!("x".parse::<Dyadic>().is_err());
        assert!("1/0".parse::<Dyadic>().is_err());
    }

    #[test]
    fn arithmetic() {
        assert_eq!(d("1/2") + d("1/8"), d("5/8"));
        assert_eq!(d("3/4") * d("3/4"), d("9/16"));
        assert_eq!(d("1/2").checked_sub(&d("3/4")), None);
        assert_eq!(d("3/4").checked_sub(&d("1/2")), Some(d("1/4")));
        assert_eq!(Dyadic::pow2(3), Dyadic::from(8));
        assert_eq!(Dyadic::pow2(-3), d("1/8"));
        assert_eq!(d("3/4").pow(3), d("27/64"));
        assert_eq!(d("3/4").mul_pow2(2), Dyadic::from(3));
        assert_eq!(d("3").mul_pow2(-3), d("3/8"));
    }

    #[test]
    fn ordering() {
        assert!(d("1/2") < d("5/8"));
        assert!(d("1") > d("255/256"));
        assert_eq!(d("2/4").cmp(&d("1/2")), Ordering::Equal);
    }

    fn arb_dyadic() -> impl Strategy<Value = Dyadic> {
        (0u64..1_000_000, 0u64..40).prop_map(|(n, e)| Dyadic::new(n, e))
    }

    proptest! {
        #[test]
        fn add_then_sub_round_trips(a in arb_dyadic(), b in arb_dyadic()) {
            let s = &a + &b;
            prop_assert_eq!(s.checked_sub(&b), Some(a.clone()));
            prop_assert!(s >= a);
        }

        #[test]
        fn display_parse_round_trip(a in arb_dyadic()) {
            prop_assert_eq!(a.to_string().parse::<Dyadic>().unwrap(), a);
        }

        #[test]
        fn float_view_matches(a in arb_dyadic()) {
            let f = a.numerator().to_f64().unwrap() / 2f64.powi(a.exponent() as i32);
            prop_assert!((a.to_f64() - f).abs() <= f.abs() * 1e-15);
        }
    }
}
