//! Exact rational thresholds.
//!
//! Every threshold involving epsilon, mu or eta is compared exactly; a float
//! never decides which side of a bound a count falls on.

use num_rational::Ratio;

pub type Rational = Ratio<i128>;

pub fn int(x: usize) -> Rational {
    Rational::from_integer(x as i128)
}

pub fn frac(num: i128, den: i128) -> Rational {
    Rational::new(num, den)
}

/// `x >= bound`, for a count `x`.
pub fn at_least(x: usize, bound: Rational) -> bool {
    int(x) >= bound
}

/// `x <= bound`, for a count `x`.
pub fn at_most(x: usize, bound: Rational) -> bool {
    int(x) <= bound
}

/// Largest integer not exceeding `r`, clamped at zero.
pub fn floor_usize(r: Rational) -> usize {
    let f = r.floor().to_integer();
    if f < 0 {
        0
    } else {
        f as usize
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boundaries_are_exact() {
        let third = frac(1, 3);
        assert!(at_least(1, third * int(3)));
        assert!(at_most(1, third * int(3)));
        assert!(!at_least(1, frac(3001, 3000)));
        assert_eq!(floor_usize(frac(7, 2)), 3);
        assert_eq!(floor_usize(frac(-1, 2)), 0);
    }
}
