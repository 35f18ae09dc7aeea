// SPDX-License-Identifier: Apache-2.0

//! Classical carry-status algebra. Used as an independent oracle for the
//! reversible networks.

/// How a carry crosses a bit interval `[i, j)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CarryStatus {
    Kill,
    Propagate,
    Generate,
}

impl CarryStatus {
    pub const ALL: [CarryStatus; 3] = [
        CarryStatus::Kill,
        CarryStatus::Propagate,
        CarryStatus::Generate,
    ];

    /// Status of the single position with operand bits `a` and `b`.
    pub fn of_bits(a: bool, b: bool) -> Self {
        match (a, b) {
            (false, false) => CarryStatus::Kill,
            (true, true) => CarryStatus::Generate,
            _ => CarryStatus::Propagate,
        }
    }

    /// Merge of the lower interval `self` with the adjacent upper interval.
    pub fn star(self, upper: CarryStatus) -> CarryStatus {
        match upper {
            CarryStatus::Propagate => self,
            other => other,
        }
    }

    /// `(p, g)` encoding; never both set.
    pub fn encode(self) -> (bool, bool) {
        match self {
            CarryStatus::Kill => (false, false),
            CarryStatus::Propagate => (true, false),
            CarryStatus::Generate => (false, true),
        }
    }

    pub fn decode(p: bool, g: bool) -> Option<Self> {
        match (p, g) {
            (false, false) => Some(CarryStatus::Kill),
            (true, false) => Some(CarryStatus::Propagate),
            (false, true) => Some(CarryStatus::Generate),
            (true, true) => None,
        }
    }

    /// Carry leaving the interval given the carry entering it.
    pub fn carry_out(self, carry_in: bool) -> bool {
        match self {
            CarryStatus::Kill => false,
            CarryStatus::Generate => true,
            CarryStatus::Propagate => carry_in,
        }
    }
}

fn bit(x: u64, i: usize) -> bool {
    x >> i & 1 == 1
}

/// Status of `[i, j)` for operands `a`, `b` (bits beyond 63 read as 0).
pub fn interval_status(a: u64, b: u64, i: usize, j: usize) -> CarryStatus {
    assert!(i < j, "empty interval");
    let bitat = |x: u64, k: usize| k < 64 && bit(x, k);
    (i + 1..j).fold(CarryStatus::of_bits(bitat(a, i), bitat(b, i)), |acc, k| {
        acc.star(CarryStatus::of_bits(bitat(a, k), bitat(b, k)))
    })
}

/// `p[i, j]`.
pub fn propagate(a: u64, b: u64, i: usize, j: usize) -> bool {
    interval_status(a, b, i, j).encode().0
}

/// `g[i, j]`.
pub fn generate(a: u64, b: u64, i: usize, j: usize) -> bool {
    interval_status(a, b, i, j).encode().1
}

/// Carries `c_0..=c_n` of `a + b` by the majority recurrence with `c_0 = 0`.
pub fn ripple_carries(a: u64, b: u64, n: usize) -> Vec<bool> {
    let mut c = vec![false; n + 1];
    for i in 0..n {
        let (x, y, z) = (bit(a, i), bit(b, i), c[i]);
        c[i + 1] = (x & y) | (x & z) | (y & z);
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use CarryStatus::*;

    #[test]
    fn table() {
        assert_eq!(Kill.star(Kill), Kill);
        assert_eq!(Kill.star(Propagate), Kill);
        assert_eq!(Kill.star(Generate), Generate);
        assert_eq!(Propagate.star(Kill), Kill);
        assert_eq!(Propagate.star(Propagate), Propagate);
        assert_eq!(Propagate.star(Generate), Generate);
        assert_eq!(Generate.star(Kill), Kill);
        assert_eq!(Generate.star(Propagate), Generate);
        assert_eq!(Generate.star(Generate), Generate);
    }

    #[test]
    fn encoding_round_trips() {
        for s in CarryStatus::ALL {
            let (p, g) = s.encode();
            assert!(!(p && g));
            assert_eq!(CarryStatus::decode(p, g), Some(s));
        }
        assert_eq!(CarryStatus::decode(true, true), None);
    }

    #[test]
    fn generate_from_zero_is_the_carry() {
        let c = ripple_carries(0b1011, 0b0110, 4);
        for j in 1..=4 {
            assert_eq!(generate(0b1011, 0b0110, 0, j), c[j]);
        }
    }
}
