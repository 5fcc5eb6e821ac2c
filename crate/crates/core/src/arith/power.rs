use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};

use super::bezout::gcd_ext;

/// Exponents for merging power predicates: with `n = lcm nᵢ` returns
/// `(n, [eᵢ])`, `eᵢ = cᵢ·n/nᵢ mod n` where `Σ cᵢ·n/nᵢ = 1`, so that for
/// `β = ∏ tᵢ^{eᵢ}`
///
/// `⋀ Ρ_{nᵢ}(y·tᵢ) ⟺ Ρₙ(y·β) ∧ ⋀_{i<j} Ρ_{gcd(nᵢ,nⱼ)}(tᵢ·tⱼ⁻¹)`.
pub fn power_merge_exponents(ns: &[u64]) -> Result<(u64, Vec<i64>)> {
    if ns.is_empty() || ns.contains(&0) {
        return Err(Error::Unsupported("power merge needs positive moduli".into()));
    }
    let n = ns.iter().fold(1u64, |acc, m| acc.lcm(m));
    let shares: Vec<BigInt> = ns.iter().map(|m| BigInt::from(n / m)).collect();
    let mut coeffs = vec![BigInt::one()];
    let mut g = shares[0].clone();
    for s in &shares[1..] {
        let bz = gcd_ext(&g, s)?;
        coeffs.iter_mut().for_each(|c| *c *= &bz.u);
        coeffs.push(bz.v);
        g = bz.d;
    }
    debug_assert!(g.is_one());
    let exps = coeffs
        .iter()
        .zip(&shares)
        .map(|(c, s)| {
            (c * s)
                .mod_floor(&BigInt::from(n))
                .to_i64()
                .ok_or_else(|| Error::Unsupported("exponent overflow".into()))
        })
        .collect::<Result<Vec<i64>>>()?;
    Ok((n, exps))
}
