//! Per-prime local invariants specialized to the family: reduction type,
//! Tamagawa numbers, the local Tamagawa-ratio factors, and the root
//! number. The `tate` submodule holds a generic Tate's-algorithm
//! implementation used as an independent cross-check.

pub mod tate;

use crate::arith::{factorize_u64, is_qadic_square, jacobi_u64, valuation_u64};
use crate::family::{model_minimal_integral, Parameter};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::One;

/// Reduction kind at a finite prime. The family has no additive primes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReductionKind {
    Good,
    SplitMultiplicative,
    NonsplitMultiplicative,
}

/// Complete local record at one prime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalInvariants {
    pub p: u64,
    /// Valuation of the minimal discriminant S^8 T^8 (T^4-S^4)^2 / 2^8.
    pub v_delta: u32,
    pub kind: ReductionKind,
    pub c_p: u64,
    /// Local Tamagawa-ratio factor c_p(E')/c_p(E), in {2, 1/2, 1}.
    pub ratio_factor: Rational64,
    /// Local root number: -1 split multiplicative, +1 otherwise.
    pub w_p: i8,
}

/// Finite Tamagawa product, the finite Tamagawa-ratio product, and its
/// exact base-2 logarithm.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TamagawaSummary {
    pub finite_product: BigInt,
    pub ratio: BigRational,
    pub t_log2: i64,
}

/// The bad primes of the family curve: the primes dividing S T (T^4 - S^4).
/// 2 always divides S.
pub fn bad_primes(p: &Parameter) -> Vec<u64> {
    let st = p.st_pair();
    let (s, t) = (st.s(), st.t());
    let mut primes: Vec<u64> = Vec::new();
    for v in [s, t, t.abs_diff(s), t + s, t * t + s * s] {
        if v > 1 {
            primes.extend(factorize_u64(v).into_iter().map(|(q, _)| q));
        }
    }
    primes.sort_unstable();
    primes.dedup();
    primes
}

/// Valuation of the minimal discriminant at q.
pub fn delta_valuation(p: &Parameter, q: u64) -> u32 {
    let st = p.st_pair();
    let (s, t) = (st.s(), st.t());
    if q == 2 {
        return 8 * valuation_u64(s, 2) - 8;
    }
    let v_st = if s % q == 0 {
        valuation_u64(s, q)
    } else if t % q == 0 {
        valuation_u64(t, q)
    } else {
        0
    };
    8 * v_st + 2 * v_t4_minus_s4(s, t, q)
}

/// Valuation of T^4 - S^4 = (T-S)(T+S)(T^2+S^2) at odd q; the three
/// factors are pairwise coprime up to powers of 2.
fn v_t4_minus_s4(s: u64, t: u64, q: u64) -> u32 {
    debug_assert!(q % 2 == 1);
    let mut v = 0;
    let d = t.abs_diff(s);
    if d > 0 && d % q == 0 {
        v += valuation_u64(d, q);
    }
    if (t + s) % q == 0 {
        v += valuation_u64(t + s, q);
    }
    if (t * t + s * s) % q == 0 {
        v += valuation_u64(t * t + s * s, q);
    }
    v
}

/// Tamagawa number c_q of E on the minimal model:
/// v_q(Delta) if q | ST or (q | T^4-S^4 and (-1/q) = 1); 2 if
/// q | T^4-S^4 and (-1/q) = -1; 1 otherwise.
pub fn tamagawa_cp(p: &Parameter, q: u64) -> u64 {
    let st = p.st_pair();
    let (s, t) = (st.s(), st.t());
    if q == 2 || s % q == 0 || t % q == 0 {
        return delta_valuation(p, q) as u64;
    }
    if v_t4_minus_s4(s, t, q) > 0 {
        if jacobi_u64(-1, q) == 1 {
            delta_valuation(p, q) as u64
        } else {
            2
        }
    } else {
        1
    }
}

/// Product of c_q over the bad primes; `include_infinite` multiplies by
/// c_infinity = 2 (the discriminant is positive, so E(R) has two
/// components).
pub fn tamagawa_product(p: &Parameter, include_infinite: bool) -> BigInt {
    let mut prod = BigInt::one();
    for q in bad_primes(p) {
        prod *= BigInt::from(tamagawa_cp(p, q));
    }
    if include_infinite {
        prod *= 2;
    }
    prod
}

/// Local Tamagawa-ratio factor c_q(E')/c_q(E): 2 if q | S^4 - T^4 and
/// (-1/q) = 1; 1/2 if q | ST (in particular at q = 2); 1 otherwise.
pub fn ratio_factor(p: &Parameter, q: u64) -> Rational64 {
    let st = p.st_pair();
    let (s, t) = (st.s(), st.t());
    if q == 2 || s % q == 0 || t % q == 0 {
        return Rational64::new(1, 2);
    }
    if v_t4_minus_s4(s, t, q) > 0 && jacobi_u64(-1, q) == 1 {
        Rational64::from_integer(2)
    } else {
        Rational64::one()
    }
}

/// Product of the finite local ratio factors and its exact log2.
pub fn tamagawa_ratio(p: &Parameter) -> TamagawaSummary {
    let mut ratio = BigRational::one();
    let mut t_log2: i64 = 0;
    for q in bad_primes(p) {
        let f = ratio_factor(p, q);
        ratio *= BigRational::new(BigInt::from(*f.numer()), BigInt::from(*f.denom()));
        if f == Rational64::from_integer(2) {
            t_log2 += 1;
        } else if f == Rational64::new(1, 2) {
            t_log2 -= 1;
        }
    }
    TamagawaSummary {
        finite_product: tamagawa_product(p, false),
        ratio,
        t_log2,
    }
}

/// Whether the (multiplicative) reduction at q is split, decided by the
/// rationality of the node's tangent slopes: split iff -c6 is a square
/// in Q_q. On the minimal model c6 is a q-adic unit at every bad q.
fn is_split(p: &Parameter, q: u64) -> bool {
    let c6 = model_minimal_integral(p).c6();
    is_qadic_square(&-c6, &BigInt::one(), q)
}

/// Full local record at q.
pub fn reduction_type(p: &Parameter, q: u64) -> Result<LocalInvariants> {
    if q < 2 {
        return Err(Error::Domain(format!("{q} is not a prime")));
    }
    let v_delta = delta_valuation(p, q);
    if v_delta == 0 {
        return Ok(LocalInvariants {
            p: q,
            v_delta: 0,
            kind: ReductionKind::Good,
            c_p: 1,
            ratio_factor: Rational64::one(),
            w_p: 1,
        });
    }
    let split = is_split(p, q);
    let kind = if split {
        ReductionKind::SplitMultiplicative
    } else {
        ReductionKind::NonsplitMultiplicative
    };
    let c_p = if split {
        v_delta as u64
    } else if v_delta % 2 == 0 {
        2
    } else {
        1
    };
    Ok(LocalInvariants {
        p: q,
        v_delta,
        kind,
        c_p,
        ratio_factor: ratio_factor(p, q),
        w_p: if split { -1 } else { 1 },
    })
}

/// Global root number w = w_infinity * prod over bad primes of w_q,
/// with w_infinity = -1 and w_q = -1 exactly at split multiplicative
/// primes.
pub fn root_number(p: &Parameter) -> i8 {
    let mut w: i8 = -1;
    for q in bad_primes(p) {
        w *= reduction_type(p, q).expect("prime").w_p;
    }
    w
}
