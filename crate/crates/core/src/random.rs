//! Seeded generators for fuzzing inputs.
//!
//! Rationals have numerators in `[-9, 9]` and denominators in `{1, 2, 3}`.

use num::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ffpoly::MonicPoly;
use crate::rational::{qf, Q};

pub struct RationalRng {
    inner: ChaCha8Rng,
}

impl RationalRng {
    pub fn new(seed: u64) -> Self {
        RationalRng {
            inner: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn rational(&mut self) -> Q {
        let num = self.inner.gen_range(-9i64..=9);
        let den = self.inner.gen_range(1i64..=3);
        qf(num, den)
    }

    pub fn vector(&mut self, len: usize) -> Vec<Q> {
        (0..len).map(|_| self.rational()).collect()
    }

    /// Monic, with random `a_1..a_d`.
    pub fn poly(&mut self, d: usize) -> MonicPoly {
        let mut a = vec![Q::one()];
        a.extend(self.vector(d));
        MonicPoly::new(a).expect("a_0 = 1 by construction")
    }

    pub fn integer(&mut self, lo: i64, hi: i64) -> i64 {
        self.inner.gen_range(lo..=hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::Signed;

    #[test]
    fn deterministic_and_in_range() {
        let a = RationalRng::new(7).vector(50);
        let b = RationalRng::new(7).vector(50);
        assert_eq!(a, b);
        assert_ne!(a, RationalRng::new(8).vector(50));
        for x in &a {
            // reduced denominators divide 2 or 3
            assert!([1, 2, 3].contains(&x.denom().to_string().parse::<i64>().unwrap()));
            assert!(x.abs() <= qf(9, 1));
        }
        assert_eq!(RationalRng::new(1).poly(4).d(), 4);
    }
}
