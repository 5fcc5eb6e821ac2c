use crate::scalar::IntScalar;

use super::bezout::lcm;

/// `gcd(n, lcm(ns)) = lcm(gcd(n₀, n), …, gcd(n_k, n))`, together with the
/// dual `lcm(n, gcd(ns)) = gcd(lcm(n₀, n), …)`.
///
/// Both are consequences of `min` distributing over `max` on prime
/// exponents, so this returns `true` on every input; it exists to be
/// checked. The last element plays the role of `n`; a single-element
/// list compares the element with itself.
pub fn lattice_identities<T: IntScalar>(ns: &[T]) -> bool {
    let Some((n, rest)) = ns.split_last() else {
        return true;
    };
    let rest: &[T] = if rest.is_empty() { std::slice::from_ref(n) } else { rest };

    let l = rest.iter().fold(T::one(), |acc, m| lcm(&acc, m));
    let lhs = n.gcd(&l);
    let rhs = rest.iter().fold(T::one(), |acc, m| lcm(&acc, &m.gcd(n)));

    let g = rest.iter().skip(1).fold(rest[0].clone(), |acc, m| acc.gcd(m));
    let dual_lhs = lcm(n, &g);
    let dual_rhs = rest
        .iter()
        .skip(1)
        .fold(lcm(&rest[0], n), |acc, m| acc.gcd(&lcm(m, n)));

    lhs == rhs && dual_lhs == dual_rhs
}

/// `a ∧ (b₀ ∨ … ∨ b_k) = (a ∧ b₀) ∨ … ∨ (a ∧ b_k)` for `∧ = min`, `∨ = max`.
pub fn max_min_identity<T: Ord + Clone>(a: &T, bs: &[T]) -> bool {
    let Some(top) = bs.iter().max() else {
        return true;
    };
    let lhs = a.min(top).clone();
    let rhs = bs.iter().map(|b| a.min(b)).max().unwrap().clone();
    lhs == rhs
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn examples() {
        // gcd(12, lcm(4,6,9) = 36) = 12 = lcm(4, 6, 3)
        assert!(lattice_identities(&[4i64, 6, 9, 12]));
        assert!(lattice_identities(&[2i64, 3, 5]));
        assert!(lattice_identities(&[7i64]));
        assert!(max_min_identity(&5, &[1, 9, 3]));
    }

    proptest! {
        #[test]
        fn always_true(ns in prop::collection::vec(2i64..5000, 1..6)) {
            prop_assert!(lattice_identities(&ns));
        }

        #[test]
        fn max_min_always_true(a in -100i32..100, bs in prop::collection::vec(-100i32..100, 1..6)) {
            prop_assert!(max_min_identity(&a, &bs));
        }
    }
}
