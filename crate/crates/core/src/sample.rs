//! Deterministic pseudo-random sampling.
//!
//! Probabilistic checks (rank at sample points, randomized property suites)
//! must be reproducible, so everything runs off a tiny seeded generator
//! rather than OS entropy. SplitMix64 is enough: we only need a stream of
//! well-mixed 64-bit words.

use crate::scalar::Coefficient;

/// SplitMix64 generator.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    /// Uniform integer in `lo..=hi`.
    pub fn int_in(&mut self, lo: i64, hi: i64) -> i64 {
        debug_assert!(lo <= hi);
        let span = (hi - lo) as u64 + 1;
        lo + (self.next_u64() % span) as i64
    }

    pub fn usize_below(&mut self, n: usize) -> usize {
        (self.next_u64() % n as u64) as usize
    }

    pub fn chance(&mut self, num: u64, den: u64) -> bool {
        self.next_u64() % den < num
    }

    /// Small exact rational with numerator in `-max_num..=max_num` and
    /// denominator in `1..=max_den`.
    pub fn rational<C: Coefficient>(&mut self, max_num: i64, max_den: i64) -> C {
        let n = self.int_in(-max_num, max_num);
        let d = self.int_in(1, max_den);
        C::ratio(n, d)
    }

    /// Nonzero variant of [`rational`](Self::rational).
    pub fn nonzero_rational<C: Coefficient>(&mut self, max_num: i64, max_den: i64) -> C {
        let n = loop {
            let n = self.int_in(-max_num, max_num);
            if n != 0 {
                break n;
            }
        };
        C::ratio(n, self.int_in(1, max_den))
    }

    /// Exact rational point on the unit circle via the tangent half-angle
    /// parametrization: `c = (1-t^2)/(1+t^2)`, `s = 2t/(1+t^2)`.
    pub fn unit_circle<C: Coefficient>(&mut self) -> (C, C) {
        let t: C = self.rational(4, 3);
        let one = C::one();
        let t2 = t.clone() * t.clone();
        let den = one.clone() + t2.clone();
        let c = (one - t2) / den.clone();
        let s = (C::from_int(2) * t) / den;
        (c, s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rat;
    use num_traits::{One, Zero};

    #[test]
    fn deterministic_stream() {
        let mut a = SplitMix64::new(42);
        let mut b = SplitMix64::new(42);
        for _ in 0..100 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }

    #[test]
    fn circle_points_are_on_the_circle() {
        let mut rng = SplitMix64::new(7);
        for _ in 0..50 {
            let (c, s): (Rat, Rat) = rng.unit_circle();
            assert!((c.clone() * c + s.clone() * s - Rat::one()).is_zero());
        }
    }

    #[test]
    fn int_in_respects_bounds() {
        let mut rng = SplitMix64::new(1);
        for _ in 0..200 {
            let v = rng.int_in(-3, 3);
            assert!((-3..=3).contains(&v));
        }
    }
}
