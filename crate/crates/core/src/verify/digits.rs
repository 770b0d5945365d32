use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tower::Tower;

/// Digits `a_0, ..., a_{M-1}` of `a = sum a_i p^{n_i}`, with
/// `0 <= a_i < p^{n_{i+1} - n_i}` and at least one nonzero digit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DigitSequence {
    pub p: u64,
    pub digits: Vec<u64>,
    /// `n_0, ..., n_M`.
    pub schedule: Vec<u32>,
}

impl DigitSequence {
    pub fn new(p: u64, digits: Vec<u64>, schedule: Vec<u32>) -> Result<Self> {
        if schedule.len() != digits.len() + 1 {
            return Err(Error::InvalidDigits(format!(
                "{} digits need a schedule of length {}",
                digits.len(),
                digits.len() + 1
            )));
        }
        for (i, &a) in digits.iter().enumerate() {
            let bound = digit_bound(p, &schedule, i)?;
            if a >= bound {
                return Err(Error::InvalidDigits(format!("a_{i} = {a} is not below {bound}")));
            }
        }
        if digits.iter().all(|&a| a == 0) {
            return Err(Error::InvalidDigits("all digits are zero".into()));
        }
        Ok(DigitSequence {
            p,
            digits,
            schedule,
        })
    }

    /// Digits for the schedule of `t`.
    pub fn for_tower(t: &Tower, digits: Vec<u64>) -> Result<Self> {
        Self::new(t.p(), digits, t.spec().exponents())
    }

    /// Uniform digits with `a_0 != 0`.
    ///
    /// A zero leading digit makes every `y_{a,m}` a zero divisor (each
    /// character of order `p` kills `T_{m,j}` for `j >= 1`), so such
    /// sequences are excluded from random sampling.
    pub fn random<R: Rng>(t: &Tower, rng: &mut R) -> Result<Self> {
        let schedule = t.spec().exponents();
        let mut digits = Vec::with_capacity(t.max_level());
        for i in 0..t.max_level() {
            let bound = digit_bound(t.p(), &schedule, i)?;
            let lo = u64::from(i == 0);
            digits.push(rng.gen_range(lo..bound));
        }
        Self::new(t.p(), digits, schedule)
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn leading_digit_is_unit(&self) -> bool {
        self.digits.first().is_some_and(|&a| a != 0)
    }
}

fn digit_bound(p: u64, schedule: &[u32], i: usize) -> Result<u64> {
    let gap = schedule[i + 1]
        .checked_sub(schedule[i])
        .filter(|&g| g > 0)
        .ok_or_else(|| Error::InvalidDigits("schedule not strictly increasing".into()))?;
    p.checked_pow(gap)
        .ok_or_else(|| Error::InvalidDigits("digit bound overflows".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tower::TowerSpec;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn validation() {
        assert!(DigitSequence::new(3, vec![1, 2], vec![0, 1, 2]).is_ok());
        assert!(DigitSequence::new(3, vec![3, 0], vec![0, 1, 2]).is_err());
        assert!(DigitSequence::new(3, vec![0, 0], vec![0, 1, 2]).is_err());
        assert!(DigitSequence::new(2, vec![3], vec![0, 2]).is_ok());
        assert!(DigitSequence::new(2, vec![1], vec![0, 1, 2]).is_err());
    }

    #[test]
    fn random_sequences_are_valid() {
        let t = Tower::build(&TowerSpec::new(3, 1, 3), 128).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let a = DigitSequence::random(&t, &mut rng).unwrap();
            assert_eq!(a.len(), 3);
            assert!(a.leading_digit_is_unit());
        }
    }
}
