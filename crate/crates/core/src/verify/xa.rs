use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Pow;

use super::digits::DigitSequence;
use super::report::{CheckReport, Expectation};
use crate::error::{Error, Result};
use crate::groupring::{BaseRing, GroupRingElement};
use crate::tower::{Tower, TowerElement};

/// `y_{a,m} = sum_{j<m} a_j T_{m,j}`.
pub fn y_element(t: &Tower, a: &DigitSequence, m: usize) -> Result<GroupRingElement> {
    let mut y = GroupRingElement::zero(t.group(m), BaseRing::Int);
    for (j, &aj) in a.digits.iter().enumerate().take(m) {
        if aj != 0 {
            y = y.checked_add(&t.partial_trace(m, j)?.scale(&BigInt::from(aj)))?;
        }
    }
    Ok(y)
}

/// Builds `x_a = (ϖ_m y_{a,m})_m` and checks (a) compatibility, (b)
/// `y_{a,m} - ρ_{m+1}(y_{a,m+1}) = -a_m T_m`, (c) `y_{a,m}` is a non-zero
/// divisor for `m >= 1`, (d) `ε(y_{a,m}) = sum_{j<m} a_j p^{n_j}`.
///
/// With `a_0 = 0` check (c) is expected to fail at every level.
pub fn build_xa(t: &Tower, a: &DigitSequence) -> Result<(TowerElement, CheckReport)> {
    if a.p != t.p() || a.schedule != t.spec().exponents() {
        return Err(Error::InvalidDigits("digit sequence does not match the tower".into()));
    }
    let mm = t.max_level();
    let digits: Vec<String> = a.digits.iter().map(|d| d.to_string()).collect();
    let mut r = CheckReport::new("xa")
        .param("p", t.p())
        .param("d", t.rank())
        .param("M", mm)
        .param("digits", digits.join(","));
    if !a.leading_digit_is_unit() {
        r = r.expecting(Expectation::Fail);
    }
    if a.len() != mm {
        return Err(Error::InvalidDigits(format!("{} digits for {mm} levels", a.len())));
    }
    let ys: Vec<GroupRingElement> = (0..=mm).map(|m| y_element(t, a, m)).collect::<Result<_>>()?;
    let x = TowerElement::from_fn(t, |m| t.varpi(m).gr_mul(&ys[m]))?;

    let mut ca = CheckReport::new("a_compatible");
    let bad = x.first_incompatibility(t)?;
    ca.passed = bad.is_none();
    if let Some(m) = bad {
        ca.set_witness("level", m);
    }
    r.push(ca);

    let mut cb = CheckReport::new("b_connecting_identity");
    for m in 0..mm {
        let lhs = ys[m].checked_sub(&ys[m + 1].push(t.rho(m + 1))?)?;
        let rhs = t.trace(m).scale(&-BigInt::from(a.digits[m]));
        cb.push(CheckReport::leaf(format!("level_{m}"), lhs == rhs));
    }
    r.push(cb);

    let mut cc = CheckReport::new("c_non_zero_divisor");
    for (m, y) in ys.iter().enumerate().skip(1) {
        cc.push(CheckReport::leaf(format!("level_{m}"), y.is_non_zero_divisor()?));
    }
    r.push(cc);

    let mut cd = CheckReport::new("d_augmentation");
    let p = BigInt::from(t.p());
    for (m, y) in ys.iter().enumerate() {
        let expected: BigInt = (0..m)
            .map(|j| BigInt::from(a.digits[j]) * p.clone().pow(t.n(j)))
            .sum();
        let got = y.augmentation();
        cd.push(
            CheckReport::leaf(format!("level_{m}"), got == BigRational::from_integer(expected.clone()))
                .with_witness("value", got.to_integer().to_string()),
        );
    }
    r.push(cd);
    Ok((x, r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tower::TowerSpec;

    fn tower(p: u64, m: usize) -> Tower {
        Tower::build(&TowerSpec::new(p, 1, m), 128).unwrap()
    }

    #[test]
    fn unit_digit_gives_varpi() {
        let t = tower(2, 3);
        let a = DigitSequence::for_tower(&t, vec![1, 0, 0]).unwrap();
        let (x, r) = build_xa(&t, &a).unwrap();
        assert_eq!(x, TowerElement::varpi(&t));
        assert!(r.passed, "{:?}", r.failed_leaves());
    }

    #[test]
    fn augmentation_values() {
        let t = tower(3, 2);
        let a = DigitSequence::for_tower(&t, vec![1, 2]).unwrap();
        assert_eq!(y_element(&t, &a, 2).unwrap().augmentation(), BigRational::from_integer(7.into()));
        let (_, r) = build_xa(&t, &a).unwrap();
        assert!(r.passed);
    }

    #[test]
    fn zero_leading_digit_gives_zero_divisors() {
        let t = tower(3, 2);
        let a = DigitSequence::for_tower(&t, vec![0, 1]).unwrap();
        let y2 = y_element(&t, &a, 2).unwrap();
        assert_eq!(y2.augmentation(), BigRational::from_integer(3.into()));
        // 1 + π + π^2 in Z[C_9] is killed by the characters of order 3
        assert!(!y2.is_non_zero_divisor().unwrap());
        let (_, r) = build_xa(&t, &a).unwrap();
        assert!(!r.passed);
        assert_eq!(r.expect, Expectation::Fail);
        assert!(r.find("a_compatible").unwrap().passed);
        assert!(r.find("b_connecting_identity").unwrap().passed);
        assert!(r.find("d_augmentation").unwrap().passed);
    }
}
