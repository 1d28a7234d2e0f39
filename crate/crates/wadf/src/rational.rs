//! Exact rational arithmetic helpers for truth degrees.
//!
//! All degree arithmetic in this crate is exact: decimal literals in input
//! files are parsed to rationals without rounding, and canonical rendering
//! recovers the shortest exact decimal (falling back to `n/d` when the
//! denominator is not of the form 2^a·5^b).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rat = BigRational;

/// Builds the rational `n/d`.
pub fn rat(n: i64, d: i64) -> Rat {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_zero() -> Rat {
    BigRational::zero()
}

pub fn rat_one() -> Rat {
    BigRational::one()
}

pub fn rat_half() -> Rat {
    rat(1, 2)
}

/// `1 - x`, the negation on the unit interval.
pub fn complement(x: &Rat) -> Rat {
    rat_one() - x
}

pub fn in_unit(x: &Rat) -> bool {
    !x.is_negative() && *x <= rat_one()
}

/// Parses a nonnegative rational written as a decimal (`0.8`, `1`) or a
/// fraction (`2/3`). Returns `None` on malformed input.
pub fn parse_rat(text: &str) -> Option<Rat> {
    let text = text.trim();
    // A leading sign is rejected outright; "-0.5" would otherwise parse its
    // whole part "-0" as zero and lose the sign.
    if text.is_empty() || text.starts_with(['-', '+']) {
        return None;
    }
    if let Some((num, den)) = text.split_once('/') {
        let num: BigInt = num.trim().parse().ok()?;
        let den: BigInt = den.trim().parse().ok()?;
        if den.is_zero() || num.is_negative() || den.is_negative() {
            return None;
        }
        return Some(BigRational::new(num, den));
    }
    match text.split_once('.') {
        None => {
            let n: BigInt = text.parse().ok()?;
            if n.is_negative() {
                return None;
            }
            Some(BigRational::from_integer(n))
        }
        Some((whole, frac)) => {
            if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
                return None;
            }
            let whole: BigInt = if whole.is_empty() {
                BigInt::zero()
            } else {
                whole.parse().ok()?
            };
            if whole.is_negative() {
                return None;
            }
            let digits: BigInt = frac.parse().ok()?;
            let scale = BigInt::from(10u32).pow(frac.len() as u32);
            Some(BigRational::from_integer(whole) + BigRational::new(digits, scale))
        }
    }
}

/// Renders a rational canonically: the shortest exact decimal when one
/// exists, otherwise `n/d` in lowest terms.
pub fn render_rat(x: &Rat) -> String {
    if x.is_integer() {
        return x.numer().to_string();
    }
    let denom = x.denom();
    // Strip factors of 2 and 5; a finite decimal exists iff nothing remains.
    let mut rest = denom.clone();
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    let mut twos = 0u32;
    let mut fives = 0u32;
    while (&rest % &two).is_zero() {
        rest /= &two;
        twos += 1;
    }
    while (&rest % &five).is_zero() {
        rest /= &five;
        fives += 1;
    }
    if !rest.is_one() {
        return format!("{}/{}", x.numer(), x.denom());
    }
    let places = twos.max(fives);
    let scaled = x.numer() * BigInt::from(10u32).pow(places) / denom;
    let digits = format!("{scaled:0>width$}", width = places as usize + 1);
    let split = digits.len() - places as usize;
    let (whole, frac) = digits.split_at(split);
    let frac = frac.trim_end_matches('0');
    if frac.is_empty() {
        whole.to_string()
    } else {
        format!("{whole}.{frac}")
    }
}
