//! Integer kernel: primality, factorization, symbols, valuations and
//! residue predicates used by every other module.

mod factor;
mod primes;

pub use factor::{factorize, factorize_u64, Factorization};
pub use primes::{is_prime, is_prime_u64, small_primes};

use crate::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Nonnegative gcd; `gcd(0, 0) = 0`.
pub fn gcd(x: &BigInt, y: &BigInt) -> BigInt {
    x.gcd(y)
}

/// Largest e with p^e | n. Errors on n = 0.
pub fn valuation(n: &BigInt, p: &BigInt) -> Result<u32> {
    if n.is_zero() {
        return Err(Error::Domain("valuation of zero is undefined".into()));
    }
    debug_assert!(p.abs() > BigInt::one());
    let mut m = n.abs();
    let mut e = 0u32;
    loop {
        let (q, r) = m.div_rem(p);
        if !r.is_zero() {
            return Ok(e);
        }
        m = q;
        e += 1;
    }
}

/// Valuation for machine-sized operands.
pub fn valuation_u64(mut n: u64, p: u64) -> u32 {
    assert!(n != 0);
    let mut e = 0;
    while n % p == 0 {
        n /= p;
        e += 1;
    }
    e
}

/// Jacobi symbol (a/n) for odd positive n. Does not check primality of n.
pub fn jacobi(a: &BigInt, n: &BigInt) -> Result<i32> {
    if n.is_negative() || n.is_even() {
        return Err(Error::Domain("jacobi symbol needs odd positive modulus".into()));
    }
    let mut a = a.mod_floor(n);
    let mut n = n.clone();
    let mut t = 1i32;
    while !a.is_zero() {
        while a.is_even() {
            a /= 2;
            let r = (&n % 8u8).to_u8().unwrap();
            if r == 3 || r == 5 {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if (&a % 4u8).to_u8().unwrap() == 3 && (&n % 4u8).to_u8().unwrap() == 3 {
            t = -t;
        }
        a = a.mod_floor(&n);
    }
    Ok(if n.is_one() { t } else { 0 })
}

/// Jacobi symbol on machine words; n odd and positive.
pub fn jacobi_u64(a: i64, n: u64) -> i32 {
    debug_assert!(n % 2 == 1);
    let mut a = a.rem_euclid(n as i64) as u64;
    let mut n = n;
    let mut t = 1i32;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if n % 8 == 3 || n % 8 == 5 {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            t = -t;
        }
        a %= n;
    }
    if n == 1 {
        t
    } else {
        0
    }
}

/// Legendre symbol (a/p) for an odd prime p. Errors if p is even or composite.
pub fn legendre(a: &BigInt, p: &BigInt) -> Result<i32> {
    if p.is_even() || !is_prime(p) {
        return Err(Error::Domain(format!("legendre symbol needs an odd prime, got {p}")));
    }
    jacobi(a, p)
}

/// Whether a is a quadratic residue modulo p^v, for odd prime p and
/// gcd(a, p) = 1. For units and odd p this only depends on a mod p.
pub fn is_square_mod(a: &BigInt, p: &BigInt, v: u32) -> Result<bool> {
    if v == 0 {
        return Err(Error::Domain("prime power exponent must be positive".into()));
    }
    if (a % p).is_zero() {
        return Err(Error::Domain("is_square_mod requires gcd(a, p) = 1".into()));
    }
    Ok(legendre(a, p)? == 1)
}

/// Euler totient, computed from the factorization.
pub fn euler_phi(n: &BigInt) -> Result<BigInt> {
    if !n.is_positive() {
        return Err(Error::Domain("euler_phi needs a positive argument".into()));
    }
    let f = factorize(n)?;
    let mut phi = BigInt::one();
    for (p, e) in f.iter() {
        phi *= p - 1;
        phi *= p.pow(e - 1);
    }
    Ok(phi)
}

/// Totients of 0..=n by sieve; phi[0] = 0, phi[1] = 1.
pub fn totient_sieve(n: usize) -> Vec<u64> {
    let mut phi: Vec<u64> = (0..=n as u64).collect();
    for i in 2..=n {
        if phi[i] == i as u64 {
            let mut j = i;
            while j <= n {
                phi[j] -= phi[j] / i as u64;
                j += i;
            }
        }
    }
    phi
}

/// Whether n is a perfect square (n >= 0).
pub fn is_perfect_square(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    if n.is_zero() {
        return true;
    }
    let r = n.sqrt();
    &r * &r == *n
}

/// Squarefree part of n (same sign as n): d with n = d * m^2, d squarefree.
pub fn squarefree_part(n: &BigInt) -> Result<BigInt> {
    if n.is_zero() {
        return Err(Error::Domain("squarefree part of zero is undefined".into()));
    }
    let f = factorize(n)?;
    let mut d = BigInt::from(f.sign());
    for (p, e) in f.iter() {
        if e % 2 == 1 {
            d *= p;
        }
    }
    Ok(d)
}

/// Class of a nonzero rational number x = num/den in Q_q* / squares,
/// encoded as (valuation parity, unit part is a nonresidue) for odd q.
/// For q = 2 use [`two_adic_class`].
pub fn odd_adic_class(num: &BigInt, den: &BigInt, q: u64) -> (bool, bool) {
    debug_assert!(q % 2 == 1 && !num.is_zero() && !den.is_zero());
    let qb = BigInt::from(q);
    let (vn, un) = split_valuation(num, &qb);
    let (vd, ud) = split_valuation(den, &qb);
    let v_par = (vn + vd) % 2 == 1;
    let unit = un * ud; // unit part of the class, up to squares
    let chi = jacobi(&unit, &qb).expect("odd modulus");
    debug_assert!(chi != 0);
    (v_par, chi == -1)
}

/// Class of a nonzero rational in Q_2* / squares, encoded as
/// (valuation parity, unit mod 4 is 3, unit mod 8 in {3, 5}).
/// The last two bits are the quadratic characters chi_4 and chi_8.
pub fn two_adic_class(num: &BigInt, den: &BigInt) -> (bool, bool, bool) {
    debug_assert!(!num.is_zero() && !den.is_zero());
    let two = BigInt::from(2);
    let (vn, un) = split_valuation(num, &two);
    let (vd, ud) = split_valuation(den, &two);
    let u = (un * ud).mod_floor(&BigInt::from(8)).to_u8().unwrap();
    let chi4 = u % 4 == 3;
    let chi8 = u == 3 || u == 5;
    ((vn + vd) % 2 == 1, chi4, chi8)
}

fn split_valuation(n: &BigInt, p: &BigInt) -> (u32, BigInt) {
    let v = valuation(n, p).expect("nonzero");
    (v, n / p.pow(v))
}

/// Whether a nonzero rational is a square in Q_q (q = 2 allowed).
pub fn is_qadic_square(num: &BigInt, den: &BigInt, q: u64) -> bool {
    if q == 2 {
        two_adic_class(num, den) == (false, false, false)
    } else {
        odd_adic_class(num, den, q) == (false, false)
    }
}
