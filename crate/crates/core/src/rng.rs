//! Small deterministic RNG (SplitMix64) for seeded sampling.
//!
//! Hand-rolled so that seeded experiments are bit-reproducible across
//! platforms and independent of external crate version bumps.

use crate::math;

pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1).
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in [lo, hi).
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    /// Uniform point in the closed ball of the given radius in R^3.
    pub fn in_ball(&mut self, radius: f64) -> [f64; 3] {
        let r = radius * math::cbrt(self.next_f64());
        let z = 2.0 * self.next_f64() - 1.0;
        let phi = 2.0 * math::PI * self.next_f64();
        let rho = math::sqrt((1.0 - z * z).max(0.0));
        [r * rho * math::cos(phi), r * rho * math::sin(phi), r * z]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic() {
        let mut a = SplitMix64::new(42);
        let mut b = SplitMix64::new(42);
        for _ in 0..100 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }

    #[test]
    fn ball_points_inside() {
        let mut rng = SplitMix64::new(7);
        for _ in 0..200 {
            let p = rng.in_ball(2.5);
            let n = math::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
            assert!(n <= 2.5 + 1e-12);
        }
    }
}
