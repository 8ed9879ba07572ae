//! Brute-force residue-count oracles for the local density functions
//! h1, h2, h3, and verification against their closed forms.
//!
//! h_i(p^v) counts pairs (alpha, beta) in [0, p^v)^2, not both divisible
//! by p (and with alpha even when p = 2, matching the even-parameter
//! normalization of the pair), such that p^v divides
//!   H1 = (a^2 - b^2 - 2ab)(a^2 - b^2 + 2ab),
//!   H2 = a^2 + b^2,
//!   H3 = ab(b - a)(b + a).

use crate::arith::{euler_phi, jacobi_u64};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_traits::ToPrimitive;

/// All three counts in one pass over the pairs.
pub fn h_oracles(p: u64, v: u32) -> (u64, u64, u64) {
    let q = p.pow(v);
    assert!(q <= 1 << 20, "prime power too large for the brute force");
    if p == 2 {
        return (h12_even_prime(q), h2_even_prime(q), h3_even_prime(q));
    }
    let sq: Vec<u64> = (0..q).map(|x| x * x % q).collect();
    let mut c1 = 0u64;
    let mut c2 = 0u64;
    let mut c3 = 0u64;
    let mut tally = |a: u64, b: u64, weight: u64| {
        if a % p == 0 && b % p == 0 {
            return;
        }
        let sa = sq[a as usize];
        let sb = sq[b as usize];
        let u = (sa + q - sb) % q; // a^2 - b^2
        let w = 2 * a % q * b % q; // 2ab
        // H1 = (u - w)(u + w) = u^2 - w^2
        let h1 = (u * u % q + q - w * w % q) % q;
        if h1 == 0 {
            c1 += weight;
        }
        if (sa + sb) % q == 0 {
            c2 += weight;
        }
        // H3 = ab (b - a)(b + a)
        let h3 = a * b % q * ((b + q - a) % q) % q * ((b + a) % q) % q;
        if h3 == 0 {
            c3 += weight;
        }
    };
    for a in 0..q {
        tally(a, a, 1);
        for b in 0..a {
            // H1, H2 divisibility is symmetric; H3 flips sign only
            tally(a, b, 2);
        }
    }
    (c1, c2, c3)
}

fn h12_even_prime(_q: u64) -> u64 {
    // h1 is only defined at odd primes
    0
}

fn h2_even_prime(_q: u64) -> u64 {
    0
}

/// h3 at p = 2 with the even-alpha normalization.
fn h3_even_prime(q: u64) -> u64 {
    let mut count = 0u64;
    for a in (0..q).step_by(2) {
        for b in (1..q).step_by(2) {
            let h3 = a * b % q * ((b + q - a) % q) % q * ((b + a) % q) % q;
            if h3 == 0 {
                count += 1;
            }
        }
    }
    count
}

pub fn h1_oracle(p: u64, v: u32) -> Result<u64> {
    odd_prime_power(p, v)?;
    Ok(h_oracles(p, v).0)
}

pub fn h2_oracle(p: u64, v: u32) -> Result<u64> {
    odd_prime_power(p, v)?;
    Ok(h_oracles(p, v).1)
}

pub fn h3_oracle(p: u64, v: u32) -> Result<u64> {
    prime_power(p, v)?;
    Ok(h_oracles(p, v).2)
}

fn prime_power(p: u64, v: u32) -> Result<()> {
    if !crate::arith::is_prime_u64(p) || v == 0 {
        return Err(Error::Domain(format!("{p}^{v} is not a prime power")));
    }
    if p.pow(v) > 10_000 {
        return Err(Error::Resource(format!("prime power {p}^{v} above the oracle bound")));
    }
    Ok(())
}

fn odd_prime_power(p: u64, v: u32) -> Result<()> {
    prime_power(p, v)?;
    if p == 2 {
        return Err(Error::Domain("h1 and h2 need an odd prime".into()));
    }
    Ok(())
}

fn phi(p: u64, v: u32) -> u64 {
    euler_phi(&BigInt::from(p.pow(v)))
        .unwrap()
        .to_u64()
        .unwrap()
}

/// Closed form: 4 phi(p^v) when 2 is a square mod p^v, else 0.
pub fn h1_closed(p: u64, v: u32) -> u64 {
    if jacobi_u64(2, p) == 1 {
        4 * phi(p, v)
    } else {
        0
    }
}

/// Closed form: 2 phi(p^v) when -1 is a square mod p^v, else 0.
pub fn h2_closed(p: u64, v: u32) -> u64 {
    if jacobi_u64(-1, p) == 1 {
        2 * phi(p, v)
    } else {
        0
    }
}

/// Closed form: 4 phi(p^v) for odd p, phi(2^v) at p = 2.
pub fn h3_closed(p: u64, v: u32) -> u64 {
    if p == 2 {
        phi(2, v)
    } else {
        4 * phi(p, v)
    }
}

/// Check the oracles against the closed forms for every prime power up
/// to `bound` (capped at 10^4). Errors name the first failing power.
pub fn verify_h_functions(bound: u64) -> Result<usize> {
    if bound > 10_000 {
        return Err(Error::Resource("h-function verification is bounded by 10^4".into()));
    }
    let mut checked = 0usize;
    for p in crate::arith::small_primes(bound) {
        let mut v = 1u32;
        while p.pow(v) <= bound {
            let (h1, h2, h3) = h_oracles(p, v);
            if p != 2 {
                if h1 != h1_closed(p, v) {
                    return Err(Error::Verification(format!(
                        "h1({p}^{v}) = {h1}, closed form {}",
                        h1_closed(p, v)
                    )));
                }
                if h2 != h2_closed(p, v) {
                    return Err(Error::Verification(format!(
                        "h2({p}^{v}) = {h2}, closed form {}",
                        h2_closed(p, v)
                    )));
                }
            }
            if h3 != h3_closed(p, v) {
                return Err(Error::Verification(format!(
                    "h3({p}^{v}) = {h3}, closed form {}",
                    h3_closed(p, v)
                )));
            }
            checked += 1;
            v += 1;
        }
    }
    Ok(checked)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stated_examples() {
        assert_eq!(h1_oracle(7, 1).unwrap(), 24); // 4 phi(7), (2/7) = 1
        assert_eq!(h1_oracle(3, 1).unwrap(), 0); // (2/3) = -1
        assert_eq!(h2_oracle(5, 1).unwrap(), 8); // 2 phi(5)
        assert_eq!(h3_oracle(2, 1).unwrap(), 1); // phi(2)
        assert_eq!(h3_oracle(2, 3).unwrap(), 4); // phi(8)
        assert_eq!(h2_oracle(7, 2).unwrap(), 0); // (-1/7) = -1
        assert_eq!(h1_oracle(7, 2).unwrap(), 4 * 42);
        assert_eq!(h3_oracle(5, 2).unwrap(), 4 * 20);
    }

    #[test]
    fn domain_checks() {
        assert!(h1_oracle(2, 1).is_err());
        assert!(h1_oracle(15, 1).is_err());
        assert!(h3_oracle(3, 9).is_err()); // 3^9 over the bound
    }

    #[test]
    fn verify_small_bound() {
        assert!(verify_h_functions(200).unwrap() > 50);
        assert!(verify_h_functions(20_000).is_err());
    }
}
