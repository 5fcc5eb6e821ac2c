//! Exact number theory used by the engines: Bézout coefficients, Chinese
//! remaindering, rational factorization and the n-th power test.

mod bezout;
mod crt;
mod factor;
mod lattice;
mod power;

pub use bezout::{gcd_ext, lcm, BezoutResult};
pub use crt::{crt_compatible_merge, crt_solve, merge_pair, CongruenceSystem};
pub use factor::{factor_rational, is_nth_power, primes_up_to, FactoredRational, PRIME_LIMIT};
pub use lattice::{lattice_identities, max_min_identity};
pub use power::power_merge_exponents;
