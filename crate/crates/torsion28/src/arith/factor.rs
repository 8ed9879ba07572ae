//! Factorization by trial division and Brent's cycle variant of Pollard
//! rho, with deterministic parameters so runs are reproducible.

use super::primes::{is_prime, is_prime_u64, trial_primes};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// A complete prime factorization: sign times a product of prime powers
/// with strictly increasing primes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    sign: i8,
    factors: Vec<(BigInt, u32)>,
}

impl Factorization {
    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn iter(&self) -> impl Iterator<Item = &(BigInt, u32)> {
        self.factors.iter()
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// Exponent of p in the factored value (0 when p does not divide it).
    pub fn exponent(&self, p: &BigInt) -> u32 {
        self.factors
            .iter()
            .find(|(q, _)| q == p)
            .map_or(0, |(_, e)| *e)
    }

    /// Signed product of the prime powers; reconstructs the input.
    pub fn value(&self) -> BigInt {
        let mut v = BigInt::from(self.sign);
        for (p, e) in &self.factors {
            v *= p.pow(*e);
        }
        v
    }

    /// Product of the distinct primes (positive).
    pub fn radical(&self) -> BigInt {
        let mut r = BigInt::one();
        for (p, _) in &self.factors {
            r *= p;
        }
        r
    }

    pub fn primes(&self) -> impl Iterator<Item = &BigInt> {
        self.factors.iter().map(|(p, _)| p)
    }

    /// Merge two factorizations (product of the underlying values).
    pub fn merged(&self, other: &Factorization) -> Factorization {
        let mut map = std::collections::BTreeMap::new();
        for (p, e) in self.factors.iter().chain(other.factors.iter()) {
            *map.entry(p.clone()).or_insert(0u32) += e;
        }
        Factorization {
            sign: self.sign * other.sign,
            factors: map.into_iter().collect(),
        }
    }
}

/// Factor a nonzero integer completely. The sign is recorded separately
/// and the absolute value is factored.
pub fn factorize(n: &BigInt) -> Result<Factorization> {
    if n.is_zero() {
        return Err(Error::Domain("cannot factor zero".into()));
    }
    let sign = if n.is_negative() { -1 } else { 1 };
    let mag = n.abs();
    let factors = if let Some(m) = mag.to_u64() {
        factorize_u64(m)
            .into_iter()
            .map(|(p, e)| (BigInt::from(p), e))
            .collect()
    } else {
        factor_big(mag)
    };
    Ok(Factorization { sign, factors })
}

/// Factor a u64 (1 yields the empty factorization).
pub fn factorize_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    if n <= 1 {
        return out;
    }
    for &p in trial_primes() {
        if p * p > n {
            break;
        }
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
    }
    if n > 1 {
        let mut stack = vec![n];
        let mut found: Vec<u64> = Vec::new();
        while let Some(m) = stack.pop() {
            if is_prime_u64(m) {
                found.push(m);
            } else {
                let d = rho_u64(m);
                stack.push(d);
                stack.push(m / d);
            }
        }
        found.sort_unstable();
        let mut i = 0;
        while i < found.len() {
            let p = found[i];
            let mut e = 0;
            while i < found.len() && found[i] == p {
                e += 1;
                i += 1;
            }
            out.push((p, e));
        }
    }
    out.sort_unstable();
    out
}

/// Brent-variant Pollard rho for composite odd-ish n with deterministic
/// polynomial offsets c = 1, 2, 3, ...
fn rho_u64(n: u64) -> u64 {
    debug_assert!(n > 1 && !is_prime_u64(n));
    if n % 2 == 0 {
        return 2;
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    for c in 1u64..64 {
        let f = |x: u64| (mulmod(x, x) + c) % n;
        let mut x = 2u64;
        let mut y = 2u64;
        let mut d = 1u64;
        let mut count = 0u64;
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = x.abs_diff(y).gcd(&n);
            count += 1;
            if count > 1 << 24 {
                break;
            }
        }
        if d > 1 && d < n {
            return d;
        }
    }
    unreachable!("pollard rho exhausted offsets on {n}")
}

fn factor_big(mut n: BigInt) -> Vec<(BigInt, u32)> {
    debug_assert!(n.is_positive());
    let mut out: Vec<(BigInt, u32)> = Vec::new();
    for &p in trial_primes() {
        if (&n).to_u64().is_some_and(|m| p * p > m) {
            break;
        }
        if (&n % p).is_zero() {
            let mut e = 0;
            while (&n % p).is_zero() {
                n /= p;
                e += 1;
            }
            out.push((BigInt::from(p), e));
        }
    }
    if !n.is_one() {
        let mut stack = vec![n];
        let mut found: Vec<BigInt> = Vec::new();
        while let Some(m) = stack.pop() {
            if let Some(small) = m.to_u64() {
                for (p, e) in factorize_u64(small) {
                    for _ in 0..e {
                        found.push(BigInt::from(p));
                    }
                }
            } else if is_prime(&m) {
                found.push(m);
            } else {
                let d = rho_big(&m);
                stack.push(&m / &d);
                stack.push(d);
            }
        }
        found.sort();
        let mut i = 0;
        while i < found.len() {
            let p = found[i].clone();
            let mut e = 0;
            while i < found.len() && found[i] == p {
                e += 1;
                i += 1;
            }
            out.push((p, e));
        }
    }
    out.sort();
    out
}

fn rho_big(n: &BigInt) -> BigInt {
    if n.is_even() {
        return BigInt::from(2);
    }
    for c in 1u64..64 {
        let cb = BigInt::from(c);
        let f = |x: &BigInt| (x * x + &cb) % n;
        let mut x = BigInt::from(2);
        let mut y = BigInt::from(2);
        loop {
            x = f(&x);
            y = f(&f(&y));
            let d = (&x - &y).abs().gcd(n);
            if d == *n {
                break;
            }
            if !d.is_one() {
                return d;
            }
        }
    }
    unreachable!("pollard rho exhausted offsets")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bi(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn stated_examples() {
        // 30625 = (T^4 - S^4)^2 for (S,T) = (4,3)
        let f = factorize(&bi(30625)).unwrap();
        assert_eq!(
            f.iter().cloned().collect::<Vec<_>>(),
            vec![(bi(5), 4), (bi(7), 2)]
        );
        assert!(factorize(&bi(1)).unwrap().is_empty());
        let f = factorize(&(bi(2).pow(16) * bi(3).pow(8))).unwrap();
        assert_eq!(
            f.iter().cloned().collect::<Vec<_>>(),
            vec![(bi(2), 16), (bi(3), 8)]
        );
        assert!(factorize(&bi(0)).is_err());
    }

    #[test]
    fn negative_input_records_sign() {
        let f = factorize(&bi(-175)).unwrap();
        assert_eq!(f.sign(), -1);
        assert_eq!(f.value(), bi(-175));
        assert_eq!(f.radical(), bi(35));
    }

    #[test]
    fn semiprime_and_big_inputs() {
        // two ~10^6 primes, exercises rho past the trial bound
        let p = 1_000_003u64;
        let q = 1_000_033u64;
        let f = factorize(&BigInt::from(p * q)).unwrap();
        assert_eq!(
            f.iter().cloned().collect::<Vec<_>>(),
            vec![(BigInt::from(p), 1), (BigInt::from(q), 1)]
        );
        // beyond u64: (10^10 + 19)^2 * 3
        let big_p = BigInt::from(10_000_000_019u64);
        let n = &big_p * &big_p * 3;
        let f = factorize(&n).unwrap();
        assert_eq!(f.value(), n);
        assert_eq!(f.exponent(&big_p), 2);
    }

    #[test]
    fn product_reconstructs_value() {
        for n in [-5040i64, -1, 1, 2, 97, 1024, 123456789, 600851475143] {
            let f = factorize(&bi(n)).unwrap();
            assert_eq!(f.value(), bi(n), "n={n}");
            for (p, _) in f.iter() {
                assert!(is_prime(p), "claimed prime {p} of {n}");
            }
            let primes: Vec<_> = f.primes().collect();
            assert!(primes.windows(2).all(|w| w[0] < w[1]));
        }
    }
}
