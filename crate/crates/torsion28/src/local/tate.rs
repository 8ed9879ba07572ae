//! Tate's algorithm over Q at a single prime, for arbitrary integral
//! Weierstrass models. Computes the Kodaira type, the minimal
//! discriminant valuation, the conductor exponent (via Ogg's formula),
//! the Tamagawa number, and the split/nonsplit flag for multiplicative
//! reduction.
//!
//! This is deliberately independent of the family-specific closed forms
//! in the parent module so the two can cross-check each other.

use crate::arith::jacobi_u64;
use crate::family::CurveModel;
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kodaira {
    I0,
    In(u32),
    II,
    III,
    IV,
    I0Star,
    InStar(u32),
    IVStar,
    IIIStar,
    IIStar,
}

impl Kodaira {
    /// Number of components of the special fiber (for Ogg's formula).
    fn components(self) -> u32 {
        match self {
            Kodaira::I0 => 1,
            Kodaira::In(n) => n,
            Kodaira::II => 1,
            Kodaira::III => 2,
            Kodaira::IV => 3,
            Kodaira::I0Star => 5,
            Kodaira::InStar(n) => 5 + n,
            Kodaira::IVStar => 7,
            Kodaira::IIIStar => 8,
            Kodaira::IIStar => 9,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TateResult {
    pub kodaira: Kodaira,
    /// Valuation of the minimal discriminant.
    pub v_delta: u32,
    pub conductor_exponent: u32,
    /// Tamagawa number c_p.
    pub c: u64,
    /// For multiplicative reduction: whether the node is split.
    pub split: Option<bool>,
    /// Number of u = p rescalings applied (0 when the input was minimal at p).
    pub u_valuation: u32,
}

#[derive(Clone)]
struct Coeffs {
    a1: BigInt,
    a2: BigInt,
    a3: BigInt,
    a4: BigInt,
    a6: BigInt,
}

impl Coeffs {
    fn model(&self) -> CurveModel {
        CurveModel::new(
            self.a1.clone(),
            self.a2.clone(),
            self.a3.clone(),
            self.a4.clone(),
            self.a6.clone(),
        )
    }

    fn translate_x(&mut self, r: &BigInt) {
        self.a6 = &self.a6 + r * &self.a4 + r * r * &self.a2 + r * r * r;
        self.a4 = &self.a4 + 2 * r * &self.a2 + 3 * r * r;
        self.a3 = &self.a3 + r * &self.a1;
        self.a2 = &self.a2 + 3 * r;
    }

    fn translate_sy(&mut self, s: &BigInt) {
        self.a4 = &self.a4 - s * &self.a3;
        self.a2 = &self.a2 - s * &self.a1 - s * s;
        self.a1 = &self.a1 + 2 * s;
    }

    fn translate_ty(&mut self, t: &BigInt) {
        self.a6 = &self.a6 - t * &self.a3 - t * t;
        self.a4 = &self.a4 - t * &self.a1;
        self.a3 = &self.a3 + 2 * t;
    }

    fn rescale_down(&mut self, p: u64) {
        let pb = BigInt::from(p);
        for (a, e) in [
            (&mut self.a1, 1u32),
            (&mut self.a2, 2),
            (&mut self.a3, 3),
            (&mut self.a4, 4),
            (&mut self.a6, 6),
        ] {
            let q = pb.pow(e);
            debug_assert!((&*a % &q).is_zero(), "non-integral rescale");
            *a = &*a / q;
        }
    }
}

fn vp(x: &BigInt, p: u64) -> u32 {
    assert!(!x.is_zero(), "valuation of zero");
    crate::arith::valuation(x, &BigInt::from(p)).unwrap()
}

/// Valuation with zero treated as +infinity (capped).
fn vp_or_inf(x: &BigInt, p: u64) -> u32 {
    if x.is_zero() {
        u32::MAX
    } else {
        vp(x, p)
    }
}

fn red(x: &BigInt, p: u64) -> u64 {
    let m = x % BigInt::from(p);
    let m = if m.is_negative() { m + BigInt::from(p) } else { m };
    m.to_u64().unwrap()
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // extended Euclid; a must be a unit mod p
    let (mut old_r, mut r) = (a as i128, p as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    debug_assert_eq!(old_r, 1, "not invertible");
    old_s.rem_euclid(p as i128) as u64
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

/// Roots of a monic-or-not polynomial (low-to-high coefficients) in F_p.
fn roots_mod_p(coeffs: &[u64], p: u64) -> Vec<u64> {
    let eval = |x: u64| {
        let mut acc = 0u64;
        for &c in coeffs.iter().rev() {
            acc = (mulmod(acc, x, p) + c) % p;
        }
        acc
    };
    if p <= 100_000 {
        return (0..p).filter(|&x| eval(x) == 0).collect();
    }
    // gcd(x^p - x, f) via polynomial arithmetic mod f, then root extraction
    // by splitting; only degree <= 3 is ever needed here.
    let f: Vec<u64> = normalize_poly(coeffs, p);
    if f.len() <= 1 {
        return Vec::new();
    }
    if f.len() == 2 {
        let inv = inv_mod(f[1], p);
        return vec![mulmod(p - f[0] % p, inv, p) % p];
    }
    let xp = poly_powmod_x(p, &f, p);
    let mut g = poly_sub(&xp, &[0, 1], p);
    g = poly_gcd(&g, &f, p);
    poly_roots_by_splitting(&g, p)
}

fn normalize_poly(coeffs: &[u64], p: u64) -> Vec<u64> {
    let mut f: Vec<u64> = coeffs.iter().map(|&c| c % p).collect();
    while f.last() == Some(&0) {
        f.pop();
    }
    f
}

fn poly_rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lead_inv = inv_mod(b[db], p);
    while r.len() > db {
        let dr = r.len() - 1;
        let coef = mulmod(r[dr], lead_inv, p);
        for i in 0..=db {
            let idx = dr - db + i;
            r[idx] = (r[idx] + p - mulmod(coef, b[i], p)) % p;
        }
        while r.last() == Some(&0) {
            r.pop();
        }
        if r.is_empty() {
            break;
        }
    }
    r
}

fn poly_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mulmod(x, y, p)) % p;
        }
    }
    out
}

fn poly_sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut out = vec![0u64; n];
    for i in 0..n {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        out[i] = (x + p - y % p) % p;
    }
    while out.last() == Some(&0) {
        out.pop();
    }
    out
}

fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = normalize_poly(a, p);
    let mut b = normalize_poly(b, p);
    while !b.is_empty() {
        let r = poly_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// x^e mod f over F_p.
fn poly_powmod_x(e: u64, f: &[u64], p: u64) -> Vec<u64> {
    let mut base = poly_rem(&[0, 1], f, p);
    let mut acc = vec![1u64];
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_rem(&poly_mul(&acc, &base, p), f, p);
        }
        base = poly_rem(&poly_mul(&base, &base, p), f, p);
        e >>= 1;
    }
    acc
}

/// Extract the roots of a squarefree product of linear factors.
fn poly_roots_by_splitting(g: &[u64], p: u64) -> Vec<u64> {
    let g = normalize_poly(g, p);
    match g.len() {
        0 | 1 => Vec::new(),
        2 => vec![mulmod(p - g[0] % p, inv_mod(g[1], p), p) % p],
        _ => {
            // split with gcd(g, (x+shift)^((p-1)/2) - 1) over deterministic shifts
            for shift in 0..64u64 {
                let half = (p - 1) / 2;
                let xs = poly_powmod_shifted(half, shift, &g, p);
                let h = poly_gcd(&poly_sub(&xs, &[1], p), &g, p);
                if !h.is_empty() && h.len() > 1 && h.len() < g.len() {
                    let q = poly_quotient(&g, &h, p);
                    let mut out = poly_roots_by_splitting(&h, p);
                    out.extend(poly_roots_by_splitting(&q, p));
                    out.sort_unstable();
                    return out;
                }
            }
            unreachable!("failed to split degree-{} polynomial", g.len() - 1)
        }
    }
}

fn poly_powmod_shifted(e: u64, shift: u64, f: &[u64], p: u64) -> Vec<u64> {
    let mut base = poly_rem(&[shift % p, 1], f, p);
    let mut acc = vec![1u64];
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_rem(&poly_mul(&acc, &base, p), f, p);
        }
        base = poly_rem(&poly_mul(&base, &base, p), f, p);
        e >>= 1;
    }
    acc
}

fn poly_quotient(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lead_inv = inv_mod(b[db], p);
    let mut q = vec![0u64; r.len() - db];
    while r.len() > db {
        let dr = r.len() - 1;
        let coef = mulmod(r[dr], lead_inv, p);
        q[dr - db] = coef;
        for i in 0..=db {
            let idx = dr - db + i;
            r[idx] = (r[idx] + p - mulmod(coef, b[i], p)) % p;
        }
        while r.last() == Some(&0) {
            r.pop();
        }
        if r.is_empty() {
            break;
        }
    }
    q
}

enum QuadRoots {
    Distinct { rational: bool },
    Double { root: u64 },
}

/// Root structure of Y^2 + b Y - c over F_p.
fn quad_y(b: u64, c: u64, p: u64) -> QuadRoots {
    if p == 2 {
        if b % 2 == 1 {
            QuadRoots::Distinct { rational: c % 2 == 0 }
        } else {
            QuadRoots::Double { root: c % 2 }
        }
    } else {
        // disc of Y^2 + bY - c is b^2 + 4c
        let disc = (mulmod(b, b, p) + mulmod(4 % p, c, p)) % p;
        if disc == 0 {
            QuadRoots::Double {
                root: mulmod(p - b % p, inv_mod(2, p), p),
            }
        } else {
            QuadRoots::Distinct {
                rational: jacobi_u64(disc as i64, p) == 1,
            }
        }
    }
}

/// Root structure of a X^2 + b X + c over F_p with a a unit.
fn quad_x(a: u64, b: u64, c: u64, p: u64) -> QuadRoots {
    debug_assert!(a % p != 0);
    if p == 2 {
        if b % 2 == 1 {
            QuadRoots::Distinct { rational: c % 2 == 0 }
        } else {
            QuadRoots::Double { root: c % 2 }
        }
    } else {
        let disc = (mulmod(b, b, p) + p - mulmod(4 % p, mulmod(a, c, p), p)) % p;
        if disc == 0 {
            QuadRoots::Double {
                root: mulmod(p - b % p, inv_mod(mulmod(2, a, p), p), p),
            }
        } else {
            QuadRoots::Distinct {
                rational: jacobi_u64(disc as i64, p) == 1,
            }
        }
    }
}

enum CubicRoots {
    Distinct { rational_count: u32 },
    Double { root: u64 },
    Triple { root: u64 },
}

/// Root structure of monic T^3 + a T^2 + b T + c over F_p.
fn cubic_structure(a: u64, b: u64, c: u64, p: u64) -> CubicRoots {
    // gcd with the derivative detects repeated roots
    let f = [c % p, b % p, a % p, 1u64];
    let fp = [b % p, (2 * (a % p)) % p, 3 % p];
    let g = poly_gcd(&f, &fp, p);
    match g.len() {
        0 | 1 => {
            let roots = roots_mod_p(&f, p);
            CubicRoots::Distinct {
                rational_count: roots.len() as u32,
            }
        }
        2 => CubicRoots::Double {
            root: mulmod(p - g[0] % p, inv_mod(g[1], p), p),
        },
        _ => {
            // triple root: -a/3 for p != 3, search otherwise
            if p != 3 {
                CubicRoots::Triple {
                    root: mulmod(p - a % p, inv_mod(3 % p, p), p),
                }
            } else {
                let f = [c % 3, b % 3, a % 3, 1u64];
                let root = (0..3)
                    .find(|&r| {
                        let e = ((f[0] + f[1] * r + f[2] * r * r + r * r * r) % 3) == 0;
                        let e1 = ((f[1] + 2 * f[2] * r + 3 * r * r) % 3) == 0;
                        e && e1
                    })
                    .expect("triple root mod 3");
                CubicRoots::Triple { root }
            }
        }
    }
}

/// Run Tate's algorithm for `model` at the prime `p`.
pub fn tate(model: &CurveModel, p: u64) -> TateResult {
    assert!(crate::arith::is_prime_u64(p), "{p} is not prime");
    let mut c = Coeffs {
        a1: model.a1.clone(),
        a2: model.a2.clone(),
        a3: model.a3.clone(),
        a4: model.a4.clone(),
        a6: model.a6.clone(),
    };
    let mut u_val = 0u32;
    let pb = BigInt::from(p);
    loop {
        let m = c.model();
        let delta = m.discriminant();
        assert!(!delta.is_zero(), "singular model");
        let n = vp_or_inf(&delta, p);
        if n == 0 {
            return TateResult {
                kodaira: Kodaira::I0,
                v_delta: 0,
                conductor_exponent: 0,
                c: 1,
                split: None,
                u_valuation: u_val,
            };
        }
        // Step 2: multiplicative reduction when c4 is a unit.
        if vp_or_inf(&m.c4(), p) == 0 {
            let split = split_multiplicative(&c, p);
            let tam = if split {
                n as u64
            } else if n % 2 == 0 {
                2
            } else {
                1
            };
            return TateResult {
                kodaira: Kodaira::In(n),
                v_delta: n,
                conductor_exponent: 1,
                c: tam,
                split: Some(split),
                u_valuation: u_val,
            };
        }
        // Additive: move the singular point to the origin.
        move_singular_to_origin(&mut c, p);
        debug_assert!(vp_or_inf(&c.a3, p) >= 1 && vp_or_inf(&c.a4, p) >= 1 && vp_or_inf(&c.a6, p) >= 1);
        let done = |kodaira: Kodaira, tam: u64, u_val: u32| TateResult {
            kodaira,
            v_delta: n,
            conductor_exponent: n + 1 - kodaira.components(),
            c: tam,
            split: None,
            u_valuation: u_val,
        };
        // Step 3
        if vp_or_inf(&c.a6, p) < 2 {
            return done(Kodaira::II, 1, u_val);
        }
        // Step 4
        if vp_or_inf(&c.model().b8(), p) < 3 {
            return done(Kodaira::III, 2, u_val);
        }
        // Step 5
        if vp_or_inf(&c.model().b6(), p) < 3 {
            let b = red(&(&c.a3 / &pb), p);
            let cc = red(&(&c.a6 / (&pb * &pb)), p);
            let tam = match quad_y(b, cc, p) {
                QuadRoots::Distinct { rational: true } => 3,
                _ => 1,
            };
            return done(Kodaira::IV, tam, u_val);
        }
        // Step 6 normalization: p | a1, a2; p^2 | a3, a4; p^3 | a6.
        normalize_for_step6(&mut c, p);
        let a21 = red(&(&c.a2 / &pb), p);
        let a42 = red(&(&c.a4 / (&pb * &pb)), p);
        let a63 = red(&(&c.a6 / (&pb * &pb * &pb)), p);
        match cubic_structure(a21, a42, a63, p) {
            CubicRoots::Distinct { rational_count } => {
                return done(Kodaira::I0Star, 1 + rational_count as u64, u_val);
            }
            CubicRoots::Double { root } => {
                // I_n* loop
                c.translate_x(&(BigInt::from(root) * &pb));
                debug_assert_eq!(vp_or_inf(&c.a2, p), 1);
                let mut ix = 3u32;
                let mut iy = 3u32;
                loop {
                    let my = pb.pow(iy - 1);
                    let mxy = pb.pow(ix + iy - 2);
                    let a3t = red(&(&c.a3 / &my), p);
                    let a6t = red(&(&c.a6 / &mxy), p);
                    match quad_y(a3t, a6t, p) {
                        QuadRoots::Distinct { rational } => {
                            let nn = ix + iy - 5;
                            return done(
                                Kodaira::InStar(nn),
                                if rational { 4 } else { 2 },
                                u_val,
                            );
                        }
                        QuadRoots::Double { root } => {
                            c.translate_ty(&(BigInt::from(root) * &my));
                            iy += 1;
                        }
                    }
                    let mx = pb.pow(ix);
                    let mxy = pb.pow(ix + iy - 2);
                    let a2t = red(&(&c.a2 / &pb), p);
                    let a4t = red(&(&c.a4 / &mx), p);
                    let a6t = red(&(&c.a6 / &mxy), p);
                    match quad_x(a2t, a4t, a6t, p) {
                        QuadRoots::Distinct { rational } => {
                            let nn = ix + iy - 5;
                            return done(
                                Kodaira::InStar(nn),
                                if rational { 4 } else { 2 },
                                u_val,
                            );
                        }
                        QuadRoots::Double { root } => {
                            c.translate_x(&(BigInt::from(root) * pb.pow(ix - 1)));
                            ix += 1;
                        }
                    }
                }
            }
            CubicRoots::Triple { root } => {
                c.translate_x(&(BigInt::from(root) * &pb));
                debug_assert!(vp_or_inf(&c.a2, p) >= 2);
                debug_assert!(vp_or_inf(&c.a4, p) >= 3);
                debug_assert!(vp_or_inf(&c.a6, p) >= 4);
                // Step 8: Y^2 + a_{3,2} Y - a_{6,4}
                let p2 = &pb * &pb;
                let a32 = red(&(&c.a3 / &p2), p);
                let a64 = red(&(&c.a6 / (&p2 * &p2)), p);
                match quad_y(a32, a64, p) {
                    QuadRoots::Distinct { rational } => {
                        return done(Kodaira::IVStar, if rational { 3 } else { 1 }, u_val);
                    }
                    QuadRoots::Double { root } => {
                        c.translate_ty(&(BigInt::from(root) * &p2));
                    }
                }
                // Step 9
                if vp_or_inf(&c.a4, p) < 4 {
                    return done(Kodaira::IIIStar, 2, u_val);
                }
                // Step 10
                if vp_or_inf(&c.a6, p) < 6 {
                    return done(Kodaira::IIStar, 1, u_val);
                }
                // Step 11: not minimal, rescale and restart.
                c.rescale_down(p);
                u_val += 1;
            }
        }
    }
}

/// Split test for multiplicative reduction: tangent slopes at the node
/// are rational over F_p. For odd p this is the quadratic character of
/// x0 - x1 where x0 is the double root and x1 the simple root of the
/// reduced cubic; for p = 2 the tangent cone Y^2 + a1 XY - a2 X^2 at the
/// translated node must factor over F_2.
fn split_multiplicative(c: &Coeffs, p: u64) -> bool {
    let m = c.model();
    if p == 2 {
        // find the singular point over F_2 and translate it to the origin
        let mut cc = c.clone();
        let (r, t) = singular_point_f2(&cc);
        cc.translate_x(&BigInt::from(r));
        cc.translate_ty(&BigInt::from(t));
        let a1_odd = red(&cc.a1, 2) == 1;
        assert!(a1_odd, "node at p = 2 with inseparable tangent cone");
        red(&cc.a2, 2) == 0
    } else {
        // b-form cubic x^3 + (b2/4) x^2 + (b4/2) x + b6/4 mod p
        let inv4 = inv_mod(4 % p, p);
        let inv2 = inv_mod(2 % p, p);
        let cp = mulmod(red(&m.b2(), p), inv4, p);
        let cq = mulmod(red(&m.b4(), p), inv2, p);
        let cr = mulmod(red(&m.b6(), p), inv4, p);
        // double root x0 = (9r - pq) / (2(p^2 - 3q))
        let num = (mulmod(9 % p, cr, p) + p - mulmod(cp, cq, p)) % p;
        let den = mulmod(2, (mulmod(cp, cp, p) + p - mulmod(3 % p, cq, p)) % p, p);
        debug_assert!(den % p != 0, "cusp in multiplicative branch");
        let x0 = mulmod(num, inv_mod(den, p), p);
        // slopes^2 = 3 x0 + b2/4
        let slope_sq = (mulmod(3 % p, x0, p) + cp) % p;
        debug_assert!(slope_sq % p != 0);
        jacobi_u64(slope_sq as i64, p) == 1
    }
}

fn singular_point_f2(c: &Coeffs) -> (u64, u64) {
    for r in 0..2u64 {
        for t in 0..2u64 {
            let mut cc = c.clone();
            cc.translate_x(&BigInt::from(r));
            cc.translate_ty(&BigInt::from(t));
            if red(&cc.a3, 2) == 0 && red(&cc.a4, 2) == 0 && red(&cc.a6, 2) == 0 {
                return (r, t);
            }
        }
    }
    unreachable!("no singular point over F_2")
}

/// Translate so the (unique, additive) singular point reduces to the
/// origin: afterwards p | a3, a4, a6.
fn move_singular_to_origin(c: &mut Coeffs, p: u64) {
    if p >= 5 {
        let b2 = red(&c.model().b2(), p);
        let r = mulmod(p - b2 % p, inv_mod(12 % p, p), p);
        c.translate_x(&BigInt::from(r));
        let t = mulmod(p - red(&c.a3, p), inv_mod(2, p), p);
        c.translate_ty(&BigInt::from(t));
    } else {
        'outer: for r in 0..p {
            for t in 0..p {
                let mut cc = c.clone();
                cc.translate_x(&BigInt::from(r));
                cc.translate_ty(&BigInt::from(t));
                if red(&cc.a3, p) == 0 && red(&cc.a4, p) == 0 && red(&cc.a6, p) == 0 {
                    *c = cc;
                    break 'outer;
                }
            }
        }
    }
    assert!(red(&c.a3, p) == 0 && red(&c.a4, p) == 0 && red(&c.a6, p) == 0);
}

/// Arrange p | a1, a2; p^2 | a3, a4; p^3 | a6 (entry to step 6; the
/// singular point is already at the origin and steps 3-5 have passed).
fn normalize_for_step6(c: &mut Coeffs, p: u64) {
    let pb = BigInt::from(p);
    if p == 2 {
        // a1 is even since the tangent cone is a double line
        assert_eq!(red(&c.a1, 2), 0);
        if red(&c.a2, 2) == 1 {
            c.translate_sy(&BigInt::from(1));
        }
        if red(&(&c.a3 / 2), 2) == 1 {
            c.translate_ty(&BigInt::from(1));
        }
        debug_assert!(vp_or_inf(&c.a3, 2) >= 2);
        if vp_or_inf(&c.a6, 2) == 2 {
            // adjust a6 by t = 2: changes a6 by -4 mod 8
            c.translate_ty(&BigInt::from(2));
        }
    } else {
        let s = mulmod(p - red(&c.a1, p), inv_mod(2, p), p);
        c.translate_sy(&BigInt::from(s));
        // now p | a1, and p | b2 = a1^2 + 4 a2 forces p | a2
        let p2 = &pb * &pb;
        let a3_mod = c.a3.clone() % &p2;
        let a3_mod = if a3_mod.is_negative() { a3_mod + &p2 } else { a3_mod };
        // t with a3 + 2t = 0 mod p^2; (p^2 + 1)/2 inverts 2 mod p^2
        let half = (&p2 + 1u32) / 2u32;
        let t = (-&a3_mod * half) % &p2;
        let t = if t.is_negative() { t + &p2 } else { t };
        c.translate_ty(&t);
    }
    assert!(vp_or_inf(&c.a1, p) >= 1, "step 6: a1");
    assert!(vp_or_inf(&c.a2, p) >= 1, "step 6: a2");
    assert!(vp_or_inf(&c.a3, p) >= 2, "step 6: a3");
    assert!(vp_or_inf(&c.a4, p) >= 2, "step 6: a4");
    assert!(vp_or_inf(&c.a6, p) >= 3, "step 6: a6");
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(a1: i64, a2: i64, a3: i64, a4: i64, a6: i64) -> CurveModel {
        CurveModel::new(
            BigInt::from(a1),
            BigInt::from(a2),
            BigInt::from(a3),
            BigInt::from(a4),
            BigInt::from(a6),
        )
    }

    #[test]
    fn good_reduction() {
        // y^2 = x^3 - x + 1, disc = -16(4(-1)^3+27) = -368 = -16*23
        let m = model(0, 0, 0, -1, 1);
        let r = tate(&m, 5);
        assert_eq!(r.kodaira, Kodaira::I0);
        assert_eq!(r.c, 1);
        assert_eq!(r.conductor_exponent, 0);
    }

    #[test]
    fn multiplicative_types() {
        // y^2 + y = x^3 - x^2 - 10x - 20 has split I_5 at 11 with c = 5
        let m = model(0, -1, 1, -10, -20);
        let r = tate(&m, 11);
        assert_eq!(r.kodaira, Kodaira::In(5));
        assert_eq!(r.split, Some(true));
        assert_eq!(r.c, 5);
        assert_eq!(r.conductor_exponent, 1);
        assert_eq!(r.v_delta, 5);
    }

    #[test]
    fn additive_type_ii() {
        // y^2 = x^3 + p for p >= 5: type II, c = 1, f = 2
        for p in [5u64, 7, 13] {
            let m = model(0, 0, 0, 0, p as i64);
            let r = tate(&m, p);
            assert_eq!(r.kodaira, Kodaira::II, "p={p}");
            assert_eq!(r.c, 1);
            assert_eq!(r.conductor_exponent, 2);
        }
    }

    #[test]
    fn additive_type_iii() {
        // y^2 = x^3 + p x: type III, c = 2, f = 2
        for p in [5u64, 7, 13] {
            let m = model(0, 0, 0, p as i64, 0);
            let r = tate(&m, p);
            assert_eq!(r.kodaira, Kodaira::III, "p={p}");
            assert_eq!(r.c, 2);
            assert_eq!(r.conductor_exponent, 2);
        }
    }

    #[test]
    fn additive_type_iv() {
        // y^2 = x^3 + p^2: type IV; c = 3 iff Y^2 - 1 splits, always 3
        for p in [5u64, 7, 13] {
            let m = model(0, 0, 0, 0, (p * p) as i64);
            let r = tate(&m, p);
            assert_eq!(r.kodaira, Kodaira::IV, "p={p}");
            assert_eq!(r.c, 3, "p={p}");
            assert_eq!(r.conductor_exponent, 2);
        }
    }

    #[test]
    fn additive_type_i0_star() {
        // y^2 = x^3 - p^2 x: P(T) = T^3 - T has three rational roots: c = 4
        for p in [5u64, 7, 13] {
            let m = model(0, 0, 0, -((p * p) as i64), 0);
            let r = tate(&m, p);
            assert_eq!(r.kodaira, Kodaira::I0Star, "p={p}");
            assert_eq!(r.c, 4);
            assert_eq!(r.conductor_exponent, 2);
        }
    }

    #[test]
    fn additive_in_star() {
        // y^2 = x^3 - p^2 x^2 + p^3 x-ish families give I_n*; use
        // y^2 = x^3 + p x^2 + p^3 ... simpler: quadratic twist by p of a
        // multiplicative curve: y^2 = x^3 - p^2 x + p^3 has disc with
        // v = 6 + v(4 - 27) ... instead verify via the p-twist of I1:
        // E: y^2 = x^3 + x^2 + x (disc -16*3... v_5(disc)=0) twisted by 5:
        // y^2 = x^3 + 5 x^2 + 25 x => I_n* with n = v(disc of base)?
        let m = model(0, 5, 0, 25, 0);
        let r = tate(&m, 5);
        // base curve y^2 = x^3+x^2+x has disc = -48, v_5 = 0: good at 5,
        // so the twist has I0*
        assert_eq!(r.kodaira, Kodaira::I0Star);
        // base curve y^2 = x^3 + x^2 - x has disc 16*5: I_1 at 5 =>
        // twist y^2 = x^3 + 5x^2 - 25x has I_1*
        let m = model(0, 5, 0, -25, 0);
        let r = tate(&m, 5);
        assert_eq!(r.kodaira, Kodaira::InStar(1));
        assert_eq!(r.conductor_exponent, 2);
        // c for I_n* is 2 or 4
        assert!(r.c == 2 || r.c == 4);
    }

    #[test]
    fn star_types_at_end_of_chain() {
        // y^2 = x^3 + p^4: IV*, c = 3 iff Y^2 - p^8/p^4... quadratic
        // Y^2 - a6/p^4 = Y^2 - 1: rational: c = 3, f = 2
        for p in [5u64, 7] {
            let m = model(0, 0, 0, 0, (p * p * p * p) as i64);
            let r = tate(&m, p);
            assert_eq!(r.kodaira, Kodaira::IVStar, "p={p}");
            assert_eq!(r.c, 3);
            assert_eq!(r.conductor_exponent, 2);
            // y^2 = x^3 + p^3 x: III*
            let m = model(0, 0, 0, (p * p * p) as i64, 0);
            let r = tate(&m, p);
            assert_eq!(r.kodaira, Kodaira::IIIStar);
            assert_eq!(r.c, 2);
            // y^2 = x^3 + p^5: II*
            let m = model(0, 0, 0, 0, (p * p * p * p * p) as i64);
            let r = tate(&m, p);
            assert_eq!(r.kodaira, Kodaira::IIStar);
            assert_eq!(r.c, 1);
        }
    }

    #[test]
    fn non_minimal_models_rescale() {
        // scaling a good model by u = p gives the same local data with
        // u_valuation = 1
        let base = model(0, 0, 0, -1, 1);
        for p in [5u64, 7] {
            let p2 = BigInt::from(p * p);
            let scaled = CurveModel::new(
                BigInt::zero(),
                BigInt::zero(),
                BigInt::zero(),
                BigInt::from(-1) * p2.pow(2),
                BigInt::from(p).pow(6),
            );
            let r = tate(&scaled, p);
            assert_eq!(r.kodaira, Kodaira::I0, "p={p}");
            assert_eq!(r.u_valuation, 1);
            assert_eq!(r.conductor_exponent, 0);
            let rb = tate(&base, p);
            assert_eq!(rb.u_valuation, 0);
        }
    }

    #[test]
    fn split_vs_nonsplit() {
        // y^2 = x(x+1)(x+q) type curves: node at reducing mod p | q(q-1)...
        // Use E: y^2 = x^3 - x^2 - 2x ... keep it concrete:
        // y^2 = x(x-2)(x-7) = x^3 - 9x^2 + 14x at p = 7: v(disc)?
        // disc = 16*(2*7*(7-2))^2 = 16*4900 = 78400 = 2^6*5^2*7^2; I_2 at 7
        let m = model(0, -9, 0, 14, 0);
        let r = tate(&m, 7);
        assert_eq!(r.kodaira, Kodaira::In(2));
        // tangent slopes^2 = (x0-x1): node at x=0 mod 7: slopes^2 = (0-2)(0-7)/..
        // cross-check against -c6 criterion
        let c6 = m.c6();
        let split_c6 = crate::arith::is_qadic_square(&-c6, &BigInt::from(1), 7);
        assert_eq!(r.split, Some(split_c6));
    }

    #[test]
    fn kodaira_component_counts() {
        assert_eq!(Kodaira::In(7).components(), 7);
        assert_eq!(Kodaira::InStar(2).components(), 7);
        assert_eq!(Kodaira::IIStar.components(), 9);
    }
}
