//! Local solubility of the 2-isogeny descent torsors
//!     C_d : d w^2 = d^2 u^4 + A d u^2 v^2 + B v^4
//! over R and over Q_q.
//!
//! Over Q_q the question is whether F(x) = d^3 x^4 + A d^2 x^2 + B d
//! takes a square value on P^1(Q_q). Small q are decided by a breadth
//! first search over residue classes with exact square certificates;
//! large odd q by reduction mod q, quadratic characters, and the Weil
//! bound, recursing into the finitely many singular residues.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::arith::jacobi_u64;

/// Primes below this bound use the exhaustive lifting search.
const CHAR_METHOD_MIN: u64 = 37;

/// R-points of C_d: always for d > 0 (take v = 0); for d < 0 the
/// quadratic d^2 X^2 + A d X + B must take a nonpositive value at some
/// X >= 0.
pub fn torsor_real_soluble(a: &BigInt, b: &BigInt, d: &BigInt) -> bool {
    if d.is_positive() {
        return true;
    }
    if b.is_negative() {
        return true;
    }
    let ad: BigInt = a * d;
    ad.is_negative() && a * a - 4 * b >= BigInt::zero()
}

/// Q_q-points of C_d.
pub fn torsor_soluble_at(a: &BigInt, b: &BigInt, d: &BigInt, q: u64) -> bool {
    debug_assert!(!d.is_zero() && !b.is_zero());
    let d2 = d * d;
    // affine chart u = x, v = 1
    let f = [b * d, BigInt::zero(), a * &d2, BigInt::zero(), &d2 * d];
    if zq_soluble(&f, q, 0) {
        return true;
    }
    // chart u = 1, v = q t (covers the rest of P^1(Q_q))
    let qb = BigInt::from(q);
    let q2 = &qb * &qb;
    let g = [
        &d2 * d,
        BigInt::zero(),
        a * &d2 * &q2,
        BigInt::zero(),
        b * d * &q2 * &q2,
    ];
    zq_soluble(&g, q, 0)
}

fn eval(f: &[BigInt], x: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    for c in f.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

fn eval_deriv(f: &[BigInt], x: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    for (i, c) in f.iter().enumerate().skip(1).rev() {
        acc = acc * x + c * BigInt::from(i as u64);
    }
    acc
}

fn vq(n: &BigInt, q: u64) -> u32 {
    crate::arith::valuation(n, &BigInt::from(q)).unwrap()
}

/// Is there x in Z_q with f(x) in q^eps * (Q_q)^2 (squares include 0)?
pub fn zq_soluble(f: &[BigInt], q: u64, eps: u8) -> bool {
    if q >= CHAR_METHOD_MIN && q % 2 == 1 {
        zq_soluble_char(f, q, eps, 0)
    } else {
        zq_soluble_search(f, q, eps)
    }
}

/// Exhaustive lifting search. Sound and complete: residue classes are
/// only discarded once the valuation and square class of f on the whole
/// class are certain, and surviving classes eventually trigger either an
/// exact square certificate or a Newton certificate for a root of f.
fn zq_soluble_search(f: &[BigInt], q: u64, eps: u8) -> bool {
    let qb = BigInt::from(q);
    // strip the content q^m: f = q^m f1, and f(x) square-like iff
    // f1(x) lies in q^{(eps+m) mod 2} squares
    let m = f
        .iter()
        .filter(|c| !c.is_zero())
        .map(|c| vq(c, q))
        .min()
        .expect("nonzero polynomial");
    let f: Vec<BigInt> = if m > 0 {
        let qm = qb.pow(m);
        f.iter().map(|c| c / &qm).collect()
    } else {
        f.to_vec()
    };
    let eps = ((eps as u32 + m) % 2) as u8;
    // (residue, level): the class residue + q^level Z_q; a child x at
    // level j+1 is known modulo q^{j+1}
    let mut classes: Vec<(BigInt, u32)> = vec![(BigInt::zero(), 0)];
    let mut level_cap = 0u32;
    while !classes.is_empty() {
        level_cap += 1;
        assert!(level_cap < 400, "lifting search failed to terminate");
        let mut next = Vec::new();
        for (r, j) in classes {
            let step = qb.pow(j);
            for s in 0..q {
                let x = &r + BigInt::from(s) * &step;
                let val = eval(&f, &x);
                if val.is_zero() {
                    return true;
                }
                let e = vq(&val, q);
                let unit = &val / qb.pow(e);
                if e % 2 == eps as u32 && unit_is_square(&unit, q) {
                    return true;
                }
                // Newton: a q-adic root of f exists near x, so f takes
                // the value 0 there.
                let der = eval_deriv(&f, &x);
                if !der.is_zero() && e > 2 * vq(&der, q) {
                    return true;
                }
                // f is fixed mod q^{j+1} on the class; the unit part is
                // known mod q^{j+1-e} (mod 8 needed when q = 2)
                let undecided = if q == 2 {
                    e > j || (e % 2 == eps as u32 && e + 1 >= j)
                } else {
                    e > j
                };
                if undecided {
                    next.push((x, j + 1));
                }
            }
        }
        classes = next;
    }
    false
}

fn unit_is_square(u: &BigInt, q: u64) -> bool {
    if q == 2 {
        u.mod_floor(&BigInt::from(8)).to_u8() == Some(1)
    } else {
        crate::arith::jacobi(u, &BigInt::from(q)).unwrap() == 1
    }
}

/// Character-based decision for odd q >= CHAR_METHOD_MIN.
fn zq_soluble_char(f: &[BigInt], q: u64, eps: u8, depth: u32) -> bool {
    assert!(depth < 220, "character recursion failed to terminate");
    // strip square content q^{2k}
    let m = f
        .iter()
        .filter(|c| !c.is_zero())
        .map(|c| vq(c, q))
        .min()
        .expect("nonzero polynomial");
    let qb = BigInt::from(q);
    let fs: Vec<BigInt> = if m > 0 {
        let qm = qb.pow(m);
        f.iter().map(|c| c / &qm).collect()
    } else {
        f.to_vec()
    };
    let eps = (eps as u32 + m) % 2;
    // reduction mod q is now a nonzero polynomial
    let fbar: Vec<u64> = fs.iter().map(|c| red(c, q)).collect();
    let (c_lead, odd_part_deg, fq_roots) = residue_structure(&fbar, q);
    if eps == 0 {
        if odd_part_deg >= 1 {
            // Weil: some unit value is a nonzero square
            return true;
        }
        // f mod q = c * (square): every smooth value has character chi(c)
        if jacobi_u64(c_lead as i64, q) == 1 {
            return true;
        }
    }
    // dig at the residue roots
    for r in fq_roots {
        let rb = BigInt::from(r);
        let val = eval(&fs, &rb);
        if val.is_zero() {
            return true;
        }
        let der = eval_deriv(&fs, &rb);
        if !der.is_zero() && vq(&val, q) > 2 * vq(&der, q) {
            return true;
        }
        // substitute x = r + q t
        let shifted = shift_scale(&fs, &rb, q);
        if zq_soluble_char(&shifted, q, eps as u8, depth + 1) {
            return true;
        }
    }
    false
}

/// Coefficients of f(r + q t) as a polynomial in t: Taylor shift by r
/// (in-place Horner/Ruffini), then x -> q x scaling.
fn shift_scale(f: &[BigInt], r: &BigInt, q: u64) -> Vec<BigInt> {
    let mut a = f.to_vec();
    let n = a.len();
    for i in 0..n {
        for j in (i..n.saturating_sub(1)).rev() {
            let t = &a[j + 1] * r;
            a[j] += t;
        }
    }
    let qb = BigInt::from(q);
    a.iter()
        .enumerate()
        .map(|(k, c)| c * qb.pow(k as u32))
        .collect()
}

fn red(x: &BigInt, q: u64) -> u64 {
    let m = x.mod_floor(&BigInt::from(q));
    m.to_u64().unwrap()
}

/// Structure of the reduction: leading constant c with fbar = c*u(x)*s(x)^2
/// (u squarefree), the degree of u, and the F_q-roots of fbar.
fn residue_structure(fbar: &[u64], q: u64) -> (u64, usize, Vec<u64>) {
    let f = normalize(fbar, q);
    debug_assert!(!f.is_empty());
    if f.len() == 1 {
        return (f[0], 0, Vec::new());
    }
    // full factorization by root extraction plus a possible irreducible
    // even part; degree <= 4 keeps this elementary
    let mut rest = monic(&f, q);
    let c = f[f.len() - 1];
    let mut mults: Vec<(u64, usize)> = Vec::new();
    let roots = distinct_roots(&rest, q);
    for r in roots {
        let mut m = 0;
        loop {
            let (quot, rem) = divide_linear(&rest, r, q);
            if rem != 0 {
                break;
            }
            rest = quot;
            m += 1;
        }
        mults.push((r, m));
    }
    // `rest` now has no roots in F_q: it is 1, an irreducible quadratic,
    // an irreducible quartic/cubic, or a product/square of irreducible
    // quadratics. Only parity of its multiplicity pattern matters.
    let mut odd_deg = mults.iter().filter(|(_, m)| m % 2 == 1).count();
    if rest.len() > 1 {
        let d = rest.len() - 1;
        if d == 2 || d == 3 {
            odd_deg += d; // single irreducible factor, multiplicity 1
        } else {
            // degree 4 with no roots: square of an irreducible quadratic,
            // product of two distinct ones, or irreducible; a square iff
            // it equals (x^2 + (a3/2-ish) x + c)^2 for the forced choice.
            if let Some(()) = quartic_is_square_of_quadratic(&rest, q) {
                // even multiplicities only
            } else {
                odd_deg += 4; // squarefree beyond the roots we removed
            }
        }
    }
    let root_list = mults.iter().map(|(r, _)| *r).collect();
    (c, odd_deg, root_list)
}

fn quartic_is_square_of_quadratic(g: &[u64], q: u64) -> Option<()> {
    // monic degree-4 g; test g = (x^2 + a x + b)^2
    debug_assert_eq!(g.len(), 5);
    debug_assert_eq!(g[4], 1);
    let inv2 = inv_mod(2 % q, q);
    let a = mulmod(g[3], inv2, q);
    // b from the x^2 coefficient: g2 = a^2 + 2b
    let b = mulmod((g[2] + q - mulmod(a, a, q)) % q, inv2, q);
    let sq = [
        mulmod(b, b, q),
        mulmod(2, mulmod(a, b, q), q),
        (mulmod(a, a, q) + 2 * b) % q,
        mulmod(2, a, q),
        1,
    ];
    if sq.iter().zip(g.iter()).all(|(x, y)| x % q == y % q) {
        Some(())
    } else {
        None
    }
}

fn normalize(f: &[u64], q: u64) -> Vec<u64> {
    let mut f: Vec<u64> = f.iter().map(|&c| c % q).collect();
    while f.last() == Some(&0) {
        f.pop();
    }
    f
}

fn monic(f: &[u64], q: u64) -> Vec<u64> {
    let inv = inv_mod(f[f.len() - 1], q);
    f.iter().map(|&c| mulmod(c, inv, q)).collect()
}

fn divide_linear(f: &[u64], r: u64, q: u64) -> (Vec<u64>, u64) {
    // f(x) / (x - r) by synthetic division
    let mut quot = vec![0u64; f.len() - 1];
    let mut carry = 0u64;
    for i in (0..f.len()).rev() {
        let cur = (f[i] + mulmod(carry, r, q)) % q;
        if i == 0 {
            return (quot, cur);
        }
        quot[i - 1] = cur;
        carry = cur;
    }
    unreachable!()
}

fn distinct_roots(f: &[u64], q: u64) -> Vec<u64> {
    if q <= 4096 {
        let mut out = Vec::new();
        for x in 0..q {
            let mut acc = 0u64;
            for &c in f.iter().rev() {
                acc = (mulmod(acc, x, q) + c) % q;
            }
            if acc == 0 {
                out.push(x);
            }
        }
        return out;
    }
    // gcd(x^q - x, f) then split, degree <= 4
    let fm = monic(&normalize(f, q), q);
    if fm.len() <= 1 {
        return Vec::new();
    }
    if fm.len() == 2 {
        return vec![mulmod(q - fm[0] % q, 1, q) % q];
    }
    let xq = powmod_x(q, &fm, q);
    let lin = poly_gcd(&poly_sub(&xq, &[0, 1], q), &fm, q);
    split_linear_factors(&lin, q)
}

fn split_linear_factors(g: &[u64], q: u64) -> Vec<u64> {
    let g = normalize(g, q);
    match g.len() {
        0 | 1 => Vec::new(),
        2 => vec![mulmod(q - g[0] % q, inv_mod(g[1], q), q) % q],
        _ => {
            for shift in 0..128u64 {
                let half = (q - 1) / 2;
                let mut base = poly_rem(&[shift % q, 1], &g, q);
                let mut acc = vec![1u64];
                let mut e = half;
                while e > 0 {
                    if e & 1 == 1 {
                        acc = poly_rem(&poly_mul(&acc, &base, q), &g, q);
                    }
                    base = poly_rem(&poly_mul(&base, &base, q), &g, q);
                    e >>= 1;
                }
                let h = poly_gcd(&poly_sub(&acc, &[1], q), &g, q);
                if h.len() > 1 && h.len() < g.len() {
                    let quot = poly_div_exact(&g, &h, q);
                    let mut out = split_linear_factors(&h, q);
                    out.extend(split_linear_factors(&quot, q));
                    return out;
                }
            }
            unreachable!("failed to split linear factors")
        }
    }
}

fn poly_mul(a: &[u64], b: &[u64], q: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mulmod(x, y, q)) % q;
        }
    }
    out
}

fn poly_sub(a: &[u64], b: &[u64], q: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut out = vec![0u64; n];
    for i in 0..n {
        let x = a.get(i).copied().unwrap_or(0) % q;
        let y = b.get(i).copied().unwrap_or(0) % q;
        out[i] = (x + q - y) % q;
    }
    normalize(&out, q)
}

fn poly_rem(a: &[u64], b: &[u64], q: u64) -> Vec<u64> {
    let mut r = normalize(a, q);
    let b = normalize(b, q);
    assert!(!b.is_empty(), "division by the zero polynomial");
    let db = b.len() - 1;
    let inv = inv_mod(b[db], q);
    while r.len() > db {
        let dr = r.len() - 1;
        let coef = mulmod(r[dr], inv, q);
        for i in 0..=db {
            let idx = dr - db + i;
            r[idx] = (r[idx] + q - mulmod(coef, b[i], q)) % q;
        }
        r = normalize(&r, q);
        if r.is_empty() {
            break;
        }
    }
    r
}

fn poly_div_exact(a: &[u64], b: &[u64], q: u64) -> Vec<u64> {
    let mut r = normalize(a, q);
    let b = normalize(b, q);
    let db = b.len() - 1;
    let inv = inv_mod(b[db], q);
    let mut quot = vec![0u64; r.len() - db];
    while r.len() > db {
        let dr = r.len() - 1;
        let coef = mulmod(r[dr], inv, q);
        quot[dr - db] = coef;
        for i in 0..=db {
            let idx = dr - db + i;
            r[idx] = (r[idx] + q - mulmod(coef, b[i], q)) % q;
        }
        r = normalize(&r, q);
        if r.is_empty() {
            break;
        }
    }
    quot
}

fn poly_gcd(a: &[u64], b: &[u64], q: u64) -> Vec<u64> {
    let mut a = normalize(a, q);
    let mut b = normalize(b, q);
    while !b.is_empty() {
        let r = poly_rem(&a, &b, q);
        a = b;
        b = r;
    }
    a
}

fn powmod_x(e: u64, f: &[u64], q: u64) -> Vec<u64> {
    let mut base = poly_rem(&[0, 1], f, q);
    let mut acc = vec![1u64];
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_rem(&poly_mul(&acc, &base, q), f, q);
        }
        base = poly_rem(&poly_mul(&base, &base, q), f, q);
        e >>= 1;
    }
    acc
}

fn mulmod(a: u64, b: u64, q: u64) -> u64 {
    ((a as u128 * b as u128) % q as u128) as u64
}

fn inv_mod(a: u64, q: u64) -> u64 {
    let (mut old_r, mut r) = (a as i128, q as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let quot = old_r / r;
        (old_r, r) = (r, old_r - quot * r);
        (old_s, s) = (s, old_s - quot * s);
    }
    debug_assert_eq!(old_r, 1);
    old_s.rem_euclid(q as i128) as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bi(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn trivial_class_always_soluble() {
        // d = 1 has the point (u, v, w) = (1, 0, 1)
        for &(a, b) in &[(337i64, 20736i64), (-674, 30625), (5, -7), (1201, 360000)] {
            for q in [2u64, 3, 5, 7, 11, 13, 41, 101] {
                assert!(torsor_soluble_at(&bi(a), &bi(b), &bi(1), q), "a={a} b={b} q={q}");
            }
            assert!(torsor_real_soluble(&bi(a), &bi(b), &bi(1)));
        }
    }

    #[test]
    fn real_solubility_signs() {
        // w^2 = u^4 + v^4 soluble; -w^2 = u^4 + v^4 not
        assert!(torsor_real_soluble(&bi(0), &bi(1), &bi(1)));
        assert!(!torsor_real_soluble(&bi(0), &bi(1), &bi(-1)));
        // d < 0 with A d < 0 and A^2 >= 4B reaches negative values
        assert!(torsor_real_soluble(&bi(10), &bi(1), &bi(-1)));
        assert!(!torsor_real_soluble(&bi(-10), &bi(1), &bi(-1)));
        assert!(torsor_real_soluble(&bi(-10), &bi(-3), &bi(-1)));
    }

    #[test]
    fn exact_square_values_found() {
        // f(x) = x^4 + 1 at q=3: f(0)=1 square
        let f = [bi(1), bi(0), bi(0), bi(0), bi(1)];
        assert!(zq_soluble(&f, 3, 0));
        // f(x) = 3x^4 + 3: values 3*(x^4+1); v_3 odd for x not div 3,
        // x = 3t gives 3(81t^4+1) ~ v=1: never a square, but eps=1 works
        let f = [bi(3), bi(0), bi(0), bi(0), bi(3)];
        assert!(!zq_soluble(&f, 3, 0));
        assert!(zq_soluble(&f, 3, 1));
    }

    #[test]
    fn char_and_search_agree_on_midsize_primes() {
        // torsors d w^2 = d^2 u^4 + A d u^2 v^2 + B v^4 with q | stuff,
        // compared between the two decision procedures
        let mut cases = Vec::new();
        for q in [41u64, 43, 53, 89, 101, 149] {
            let qi = q as i64;
            for (a, b, d) in [
                (qi, qi * qi, qi),
                (-2 * qi, qi, 2),
                (3, -qi, qi),
                (qi + 4, 4 * qi, -qi),
                (2 * qi, qi * qi * 5, 5 * qi),
                (7, 48, 3), // good reduction at q
                (-qi * qi, 2 * qi, -2),
            ] {
                cases.push((a, b, d, q));
            }
        }
        for (a, b, d, q) in cases {
            let (a, b, d) = (bi(a), bi(b), bi(d));
            let d2 = &d * &d;
            let f = [&b * &d, bi(0), &a * &d2, bi(0), &d2 * &d];
            let fast = zq_soluble_char(&f, q, 0, 0);
            let slow = zq_soluble_search(&f, q, 0);
            assert_eq!(fast, slow, "affine chart a={a} b={b} d={d} q={q}");
        }
    }

    #[test]
    fn lifting_is_monotone_in_precision() {
        // once a class is accepted it stays accepted at deeper levels:
        // certificates are exact, so re-running with a deeper search
        // cannot change an accept into a reject.
        let f = [bi(175), bi(0), bi(-674 * 25), bi(0), bi(125)];
        for q in [2u64, 3, 5, 7] {
            let first = zq_soluble_search(&f, q, 0);
            let again = zq_soluble_search(&f, q, 0);
            assert_eq!(first, again);
        }
    }

    #[test]
    fn known_insoluble_torsor() {
        // for the curve with (S,T)=(4,3): d = 5 fails at q = 2 and 3
        let (ah, bh) = (bi(-674), bi(30625));
        assert!(!torsor_soluble_at(&ah, &bh, &bi(5), 2));
        assert!(!torsor_soluble_at(&ah, &bh, &bi(5), 3));
        assert!(torsor_soluble_at(&ah, &bh, &bi(5), 5));
        assert!(torsor_soluble_at(&ah, &bh, &bi(5), 7));
        // d = 7 fails at 2 and 7, survives 3 and 5
        assert!(!torsor_soluble_at(&ah, &bh, &bi(7), 2));
        assert!(torsor_soluble_at(&ah, &bh, &bi(7), 3));
        assert!(torsor_soluble_at(&ah, &bh, &bi(7), 5));
        assert!(!torsor_soluble_at(&ah, &bh, &bi(7), 7));
    }
}
