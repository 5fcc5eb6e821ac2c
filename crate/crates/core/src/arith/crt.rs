use crate::error::{Error, Result};
use crate::scalar::IntScalar;

use super::bezout::{gcd_ext, lcm};

/// A conjunction `x ≡ tᵢ (mod nᵢ)` with every modulus at least 2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CongruenceSystem<T> {
    congruences: Vec<(T, T)>,
}

impl<T: IntScalar> CongruenceSystem<T> {
    /// Pairs are `(modulus, residue)`.
    pub fn new(congruences: Vec<(T, T)>) -> Result<Self> {
        let two = T::one() + T::one();
        if let Some((n, _)) = congruences.iter().find(|(n, _)| *n < two) {
            return Err(Error::Modulus {
                pos: 0,
                modulus: n.to_string(),
            });
        }
        Ok(CongruenceSystem { congruences })
    }

    pub fn congruences(&self) -> &[(T, T)] {
        &self.congruences
    }

    pub fn satisfied_by(&self, x: &T) -> bool {
        self.congruences
            .iter()
            .all(|(n, t)| (x.clone() - t.clone()).is_multiple_of(n))
    }
}

/// Merges `x ≡ t0 (n0)` and `x ≡ t1 (n1)` into one congruence modulo the
/// lcm, or `None` when `t0 ≢ t1 (mod gcd)`.
///
/// The combined residue is `a0·(n0/d)·t1 + a1·(n1/d)·t0` where
/// `a0·n0 + a1·n1 = d`, reduced to the least nonnegative representative.
/// Moduli of 1 are accepted and behave as "no constraint".
pub fn merge_pair<T: IntScalar>(n0: &T, t0: &T, n1: &T, t1: &T) -> Option<(T, T)> {
    let b = gcd_ext(n0, n1).expect("moduli are positive");
    let d = b.d;
    if !(t0.clone() - t1.clone()).is_multiple_of(&d) {
        return None;
    }
    let n = lcm(n0, n1);
    let t = b.u * (n0.clone() / d.clone()) * t1.clone() + b.v * (n1.clone() / d) * t0.clone();
    Some((n.clone(), t.mod_floor(&n)))
}

/// Collapses the system into a single congruence `(lcm, t)` by pairwise
/// merging, or `None` when some pair is incompatible.
///
/// An empty system yields `(1, 0)`.
pub fn crt_compatible_merge<T: IntScalar>(sys: &CongruenceSystem<T>) -> Option<(T, T)> {
    let mut acc = (T::one(), T::zero());
    for (n, t) in &sys.congruences {
        acc = merge_pair(&acc.0, &acc.1, n, t)?;
    }
    Some(acc)
}

/// Least nonnegative solution, if the system is solvable.
pub fn crt_solve<T: IntScalar>(sys: &CongruenceSystem<T>) -> Option<T> {
    crt_compatible_merge(sys).map(|(_, t)| t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_integer::Integer;
    use proptest::prelude::*;

    fn sys(pairs: &[(i64, i64)]) -> CongruenceSystem<i64> {
        CongruenceSystem::new(pairs.to_vec()).unwrap()
    }

    fn brute(pairs: &[(i64, i64)]) -> Option<i64> {
        let period = pairs.iter().fold(1, |l, (n, _)| lcm(&l, n));
        (0..period).find(|x| pairs.iter().all(|(n, t)| (x - t).rem_euclid(*n) == 0))
    }

    #[test]
    fn worked_examples() {
        assert_eq!(crt_solve(&sys(&[(4, 1), (6, 5)])), Some(5));
        assert_eq!(brute(&[(4, 1), (6, 5)]), Some(5));
        assert_eq!(crt_solve(&sys(&[(3, 2), (5, 3), (7, 2)])), Some(23));
        assert_eq!(brute(&[(3, 2), (5, 3), (7, 2)]), Some(23));
        assert_eq!(crt_solve(&sys(&[(4, 1), (6, 0)])), None);
        assert_eq!(brute(&[(4, 1), (6, 0)]), None);

        assert_eq!(crt_compatible_merge(&sys(&[(4, 1), (6, 5)])), Some((12, 5)));
        assert_eq!(crt_compatible_merge(&sys(&[(7, -3)])), Some((7, 4)));
    }

    #[test]
    fn rejects_small_moduli() {
        assert!(CongruenceSystem::new(vec![(1i64, 0)]).is_err());
        assert!(CongruenceSystem::new(vec![(-3i64, 0)]).is_err());
    }

    proptest! {
        #[test]
        fn agrees_with_brute_force(pairs in prop::collection::vec((2i64..40, -100i64..100), 1..4)) {
            let s = sys(&pairs);
            let got = crt_solve(&s);
            prop_assert_eq!(got, brute(&pairs));
            if let Some(x) = got {
                prop_assert!(s.satisfied_by(&x));
            }
        }

        #[test]
        fn pairwise_compatibility_decides(pairs in prop::collection::vec((2i64..30, -50i64..50), 1..5)) {
            let compatible = pairs.iter().enumerate().all(|(i, (ni, ti))| {
                pairs[i + 1..].iter().all(|(nj, tj)| (ti - tj).rem_euclid(ni.gcd(nj)) == 0)
            });
            prop_assert_eq!(crt_compatible_merge(&sys(&pairs)).is_some(), compatible);
        }
    }

}
