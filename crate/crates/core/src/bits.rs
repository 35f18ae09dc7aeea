// SPDX-License-Identifier: Apache-2.0

//! Exact integer helpers used by the generators and the closed-form resource
//! formulas. Nothing here touches floating point.

/// Number of ones in the binary expansion of `n`.
pub fn weight(n: u64) -> u32 {
    n.count_ones()
}

/// `⌊log2 n⌋` for `n >= 1`.
pub fn floor_log2(n: u64) -> u32 {
    assert!(n >= 1, "floor_log2 of zero");
    63 - n.leading_zeros()
}

/// `⌈log2 n⌉` for `n >= 1`.
pub fn ceil_log2(n: u64) -> u32 {
    assert!(n >= 1, "ceil_log2 of zero");
    if n == 1 {
        0
    } else {
        floor_log2(n - 1) + 1
    }
}

/// `⌊log2(num / den)⌋` for positive `num` and `den`; negative when `num < den`.
pub fn floor_log2_ratio(num: u64, den: u64) -> i64 {
    assert!(
        num >= 1 && den >= 1,
        "floor_log2_ratio needs positive operands"
    );
    let (num, den) = (num as u128, den as u128);
    if num >= den {
        let mut t = 0i64;
        while den << (t + 1) <= num {
            t += 1;
        }
        t
    } else {
        // smallest s with num * 2^s >= den gives ⌊log2(num/den)⌋ = -s
        let mut s = 0i64;
        while num << s < den {
            s += 1;
        }
        -s
    }
}

/// Sum of `⌊n / 2^i⌋` over `i >= 1`.
pub fn halving_sum(n: u64) -> u64 {
    let mut total = 0;
    let mut q = n >> 1;
    while q > 0 {
        total += q;
        q >>= 1;
    }
    total
}

pub fn is_power_of_two(n: u64) -> bool {
    n != 0 && n & (n - 1) == 0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn logs_at_boundaries() {
        assert_eq!(floor_log2(1), 0);
        assert_eq!(floor_log2(7), 2);
        assert_eq!(floor_log2(8), 3);
        assert_eq!(ceil_log2(1), 0);
        assert_eq!(ceil_log2(2), 1);
        assert_eq!(ceil_log2(7), 3);
        assert_eq!(ceil_log2(8), 3);
        assert_eq!(ceil_log2(9), 4);
    }

    #[test]
    fn ratio_logs() {
        assert_eq!(floor_log2_ratio(10, 3), 1);
        assert_eq!(floor_log2_ratio(12, 3), 2);
        assert_eq!(floor_log2_ratio(11, 3), 1);
        assert_eq!(floor_log2_ratio(3, 3), 0);
        assert_eq!(floor_log2_ratio(2, 3), -1);
        assert_eq!(floor_log2_ratio(1, 3), -2);
        assert_eq!(floor_log2_ratio(4, 3), 0);
    }

    #[test]
    fn ratio_matches_float_away_from_boundaries() {
        for n in 1..2000u64 {
            for d in [1u64, 3] {
                let x = n as f64 / d as f64;
                let f = x.log2().floor() as i64;
                // exact powers of two are where floats get shaky; the integer
                // routine is authoritative there
                if (x.log2() - x.log2().round()).abs() > 1e-9 {
                    assert_eq!(floor_log2_ratio(n, d), f, "n={n} d={d}");
                }
            }
        }
    }

    #[test]
    fn popcount_identity_small() {
        assert_eq!(10 - weight(10) as u64, halving_sum(10));
        assert_eq!(halving_sum(10), 8);
        assert_eq!(1 - weight(1) as u64, halving_sum(1));
    }
}
