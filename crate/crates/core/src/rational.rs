// Copyright 2026 The stv-guarantees Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Small helpers around [`BigRational`].

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub fn from_u64(n: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn ratio(num: u64, den: u64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Floor of a non-negative rational as a `u64`.
pub fn floor_u64(r: &BigRational) -> u64 {
    r.floor()
        .to_integer()
        .to_u64()
        .expect("tally out of u64 range")
}

/// Decimal rendering with `digits` significant digits, rounding half up and
/// trimming trailing zeros. `6/25` renders as `0.24`, `1/101` as `0.0099`.
pub fn format_significant(r: &BigRational, digits: usize) -> String {
    let digits = digits.max(1);
    if r.is_zero() {
        return "0".to_string();
    }
    let negative = r.is_negative();
    let r = r.abs();
    // Find the exponent e such that 10^e <= r < 10^(e+1).
    let ten = BigRational::from_integer(BigInt::from(10));
    let mut exp: i64 = 0;
    let mut scaled = r.clone();
    while scaled >= ten {
        scaled /= &ten;
        exp += 1;
    }
    while scaled < BigRational::one() {
        scaled *= &ten;
        exp -= 1;
    }
    // Number of decimal places needed for `digits` significant digits.
    let places = (digits as i64 - 1 - exp).max(0) as u32;
    let factor = BigInt::from(10).pow(places);
    let shifted = &r * BigRational::from_integer(factor.clone());
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let mut rounded = (shifted + half).floor().to_integer();
    // Integers with more digits than requested are rounded at the units place.
    if places == 0 && exp >= digits as i64 {
        let drop = BigInt::from(10).pow((exp + 1 - digits as i64) as u32);
        let (q, rem) = rounded.div_rem(&drop);
        rounded = if rem * 2 >= drop {
            (q + 1) * &drop
        } else {
            q * &drop
        };
    }
    let (int_part, frac_part) = rounded.div_rem(&factor);
    let mut out = String::new();
    if negative {
        out.push('-');
    }
    out.push_str(&int_part.to_string());
    if places > 0 {
        let frac = format!(
            "{:0>width$}",
            frac_part.to_string(),
            width = places as usize
        );
        let frac = frac.trim_end_matches('0');
        if !frac.is_empty() {
            out.push('.');
            out.push_str(frac);
        }
    }
    out
}

/// `num/den` in lowest terms, or just `num` for integers.
pub fn format_fraction(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits_match_table_rendering() {
        assert_eq!(format_significant(&ratio(310, 410), 3), "0.756");
        assert_eq!(format_significant(&ratio(1, 101), 3), "0.0099");
        assert_eq!(format_significant(&ratio(210, 410), 3), "0.512");
        assert_eq!(format_significant(&ratio(111, 511), 3), "0.217");
        assert_eq!(format_significant(&ratio(6, 25), 3), "0.24");
        assert_eq!(format_significant(&ratio(310, 410), 4), "0.7561");
    }

    #[test]
    fn significant_digits_integers() {
        assert_eq!(format_significant(&from_u64(0), 3), "0");
        assert_eq!(format_significant(&from_u64(108), 3), "108");
        assert_eq!(format_significant(&from_u64(12345), 3), "12300");
        assert_eq!(format_significant(&ratio(3, 2), 3), "1.5");
        assert_eq!(format_significant(&ratio(2, 3), 2), "0.67");
    }

    #[test]
    fn fractions() {
        assert_eq!(format_fraction(&ratio(12, 50)), "6/25");
        assert_eq!(format_fraction(&from_u64(7)), "7");
    }
}
