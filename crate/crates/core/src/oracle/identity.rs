//! Exhaustive grid checks of the definability identities: addition from
//! successor and multiplication (Robinson's identity and a variant over ℤ),
//! ℕ inside ℤ and order in ℚ through Lagrange's four squares, and order
//! from addition in ℕ.

use std::fmt;
use std::str::FromStr;

use num_integer::{Integer, Roots};
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum IdentityId {
    /// `z = x+y ⇔ [z has no predecessor ∧ x = y = z] ∨ [z has one ∧ 𝔰(zx)·𝔰(zy) = 𝔰(zz·𝔰(xy))]` on ℕ.
    RobinsonN,
    /// `z = x+y ⇔ [z = 0 ∧ y = −x] ∨ [z ≠ 0 ∧ 𝔰(zx)·𝔰(zy) = 𝔰(zz·𝔰(xy))]` on ℤ.
    RobinsonZ,
    /// `z = x+y ⇔ [z·𝔰(z) = z ∧ 𝔰(xy) = 𝔰(x)·𝔰(y)] ∨ [z·𝔰(z) ≠ z ∧ 𝔰(zx)·𝔰(zy) = 𝔰(zz·𝔰(xy))]` on ℤ.
    RobinsonVariantZ,
    /// `u ∈ ℕ ⇔ ∃a,b,c,d u = a²+b²+c²+d²` on ℤ.
    FourSquareZ,
    /// Every positive `p/q` is `Σ (aᵢ/q)²` with `pq = Σ aᵢ²`.
    FourSquareQ,
    /// `x < y ⇔ ∃z (z+z ≠ z ∧ x+z = y)` on ℕ.
    OrderDefN,
    /// `x < y ⇔ ∃t,u,v,w (x ≠ y ∧ x+t²+u²+v²+w² = y)` on ℤ.
    OrderDefZ,
}

impl IdentityId {
    pub const ALL: [IdentityId; 7] = [
        IdentityId::RobinsonN,
        IdentityId::RobinsonZ,
        IdentityId::RobinsonVariantZ,
        IdentityId::FourSquareZ,
        IdentityId::FourSquareQ,
        IdentityId::OrderDefN,
        IdentityId::OrderDefZ,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            IdentityId::RobinsonN => "robinson-N",
            IdentityId::RobinsonZ => "robinson-Z",
            IdentityId::RobinsonVariantZ => "robinson-variant-Z",
            IdentityId::FourSquareZ => "four-square-Z",
            IdentityId::FourSquareQ => "four-square-Q",
            IdentityId::OrderDefN => "order-def-N",
            IdentityId::OrderDefZ => "order-def-Z",
        }
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for IdentityId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        IdentityId::ALL
            .into_iter()
            .find(|id| id.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Unsupported(format!("unknown identity `{s}`")))
    }
}

/// `value = Σ rootsᵢ²`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FourSquares {
    #[serde(with = "crate::serde_num::rational")]
    pub value: BigRational,
    pub roots: [String; 4],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub id: String,
    pub range: u64,
    /// Grid points on which both sides were evaluated.
    pub checked: u64,
    /// Grid points where the two sides differ.
    pub exceptions: Vec<String>,
    /// Representations found by the four-square checks.
    pub witnesses: Vec<FourSquares>,
}

impl IdentityReport {
    pub fn holds(&self) -> bool {
        self.exceptions.is_empty()
    }

    /// The representation recorded for `value`, if any.
    pub fn witness(&self, value: &BigRational) -> Option<&FourSquares> {
        self.witnesses.iter().find(|w| &w.value == value)
    }
}

/// Checks the identity on every grid point: `[−range, range]` (or
/// `[0, range]` over ℕ) for each variable, and for `four-square-Q` every
/// reduced `p/q` with `1 ≤ p, q ≤ range`.
pub fn check_identity(id: IdentityId, range: u64) -> IdentityReport {
    let mut rep = IdentityReport {
        id: id.to_string(),
        range,
        checked: 0,
        exceptions: Vec::new(),
        witnesses: Vec::new(),
    };
    let r = range as i128;
    let s = |v: i128| v + 1;
    let robinson = |x: i128, y: i128, z: i128| s(z * x) * s(z * y) == s(z * z * s(x * y));
    match id {
        IdentityId::RobinsonN | IdentityId::RobinsonZ | IdentityId::RobinsonVariantZ => {
            let lo = if id == IdentityId::RobinsonN { 0 } else { -r };
            for x in lo..=r {
                for y in lo..=r {
                    for z in lo..=r {
                        let rhs = match id {
                            // Over ℕ only 0 lacks a predecessor.
                            IdentityId::RobinsonN => {
                                (z == 0 && x == y && y == z) || (z != 0 && robinson(x, y, z))
                            }
                            IdentityId::RobinsonZ => {
                                (z == 0 && y == -x) || (z != 0 && robinson(x, y, z))
                            }
                            _ => {
                                let fixed = z * s(z) == z;
                                (fixed && s(x * y) == s(x) * s(y)) || (!fixed && robinson(x, y, z))
                            }
                        };
                        rep.checked += 1;
                        if (z == x + y) != rhs {
                            rep.exceptions.push(format!("x = {x}, y = {y}, z = {z}"));
                        }
                    }
                }
            }
        }
        IdentityId::FourSquareZ => {
            for u in -r..=r {
                rep.checked += 1;
                // A sum of squares is never negative, so negative u have
                // no representation and the right side is false there.
                let found = (u >= 0).then(|| four_squares(u as u64));
                if (u >= 0) != found.is_some() {
                    rep.exceptions.push(format!("u = {u}"));
                }
                if let Some(sq) = found {
                    rep.witnesses.push(FourSquares {
                        value: BigRational::from_integer(u.into()),
                        roots: sq.map(|a| a.to_string()),
                    });
                }
            }
        }
        IdentityId::FourSquareQ => {
            for q in 1..=range {
                for p in 1..=range {
                    if p.gcd(&q) != 1 {
                        continue;
                    }
                    rep.checked += 1;
                    let sq = four_squares(p * q);
                    let roots = sq.map(|a| BigRational::new(a.into(), q.into()));
                    let value = BigRational::new(p.into(), q.into());
                    let sum = roots.iter().fold(BigRational::zero(), |acc, t| acc + t * t);
                    if sum != value {
                        rep.exceptions.push(format!("{value}"));
                    }
                    rep.witnesses.push(FourSquares {
                        value,
                        roots: roots.map(|t| t.to_string()),
                    });
                }
            }
        }
        IdentityId::OrderDefN => {
            for x in 0..=r {
                for y in 0..=r {
                    rep.checked += 1;
                    let rhs = (0..=2 * r).any(|z| z + z != z && x + z == y);
                    if (x < y) != rhs {
                        rep.exceptions.push(format!("x = {x}, y = {y}"));
                    }
                }
            }
        }
        IdentityId::OrderDefZ => {
            for x in -r..=r {
                for y in -r..=r {
                    rep.checked += 1;
                    let gap = y - x;
                    let rhs = x != y && gap >= 0 && {
                        let [a, b, c, d] = four_squares(gap as u64);
                        let sq = |t: u64| (t * t) as i128;
                        x + sq(a) + sq(b) + sq(c) + sq(d) == y
                    };
                    if (x < y) != rhs {
                        rep.exceptions.push(format!("x = {x}, y = {y}"));
                    }
                }
            }
        }
    }
    rep
}

/// `n = a² + b² + c² + d²` with `a ≥ b ≥ c ≥ d ≥ 0`, taking the
/// lexicographically largest `(a, b, c, d)`. Lagrange guarantees one exists.
pub fn four_squares(n: u64) -> [u64; 4] {
    for a in (0..=n.sqrt()).rev() {
        let ra = n - a * a;
        for b in (0..=ra.sqrt().min(a)).rev() {
            let rb = ra - b * b;
            for c in (0..=rb.sqrt().min(b)).rev() {
                let rc = rb - c * c;
                let d = rc.sqrt();
                if d * d == rc && d <= c {
                    return [a, b, c, d];
                }
            }
        }
    }
    unreachable!("every natural number is a sum of four squares")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn robinson_spot_value() {
        let s = |v: i64| v + 1;
        let (x, y, z) = (3, 4, 7);
        assert_eq!(s(z * x) * s(z * y), 638);
        assert_eq!(s(z * z * s(x * y)), 638);
    }

    #[test]
    fn identities_hold_on_small_grids() {
        for id in IdentityId::ALL {
            let rep = check_identity(id, 8);
            assert!(rep.holds(), "{id}: {:?}", rep.exceptions);
            assert!(rep.checked > 0);
        }
    }

    #[test]
    fn four_square_witnesses() {
        assert_eq!(four_squares(7), [2, 1, 1, 1]);
        let rep = check_identity(IdentityId::FourSquareZ, 20);
        let w = rep.witness(&BigRational::from_integer(7.into())).unwrap();
        assert_eq!(w.roots, ["2", "1", "1", "1"]);
        let rep = check_identity(IdentityId::FourSquareQ, 5);
        let w = rep.witness(&BigRational::new(3.into(), 5.into())).unwrap();
        // 3·5 = 15 = 9 + 4 + 1 + 1
        assert_eq!(w.roots, ["3/5", "2/5", "1/5", "1/5"]);
    }

    #[test]
    fn names_round_trip() {
        for id in IdentityId::ALL {
            assert_eq!(id.as_str().parse::<IdentityId>().unwrap(), id);
        }
        assert!("robinson-Q".parse::<IdentityId>().is_err());
    }
}
