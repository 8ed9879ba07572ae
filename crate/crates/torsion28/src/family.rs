//! The (2,8)-torsion family: canonical parameters, enumeration, curve
//! models, heights, conductor, torsion, and the 2-isogeny chain.

use crate::arith::{self, factorize_u64, totient_sieve};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeSet;
use std::fmt;

/// Canonical parameter t = a/b of a curve in the family:
/// 0 < a < b, gcd(a, b) = 1, a + b odd.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Parameter {
    a: u64,
    b: u64,
}

impl Parameter {
    /// Height cap keeping all derived machine-word arithmetic overflow-free.
    pub const MAX_HEIGHT: u64 = 1 << 31;

    pub fn new(a: u64, b: u64) -> Result<Self> {
        if !(0 < a && a < b) {
            return Err(Error::Domain(format!("parameter {a}/{b} not in (0,1)")));
        }
        if b > Self::MAX_HEIGHT {
            return Err(Error::Domain(format!("parameter height {b} too large")));
        }
        if a.gcd(&b) != 1 {
            return Err(Error::Domain(format!("parameter {a}/{b} not reduced")));
        }
        if (a + b) % 2 == 0 {
            return Err(Error::Domain(format!(
                "parameter {a}/{b} has numerator and denominator of equal parity"
            )));
        }
        Ok(Parameter { a, b })
    }

    /// Canonical representative of the isomorphism class of t = num/den:
    /// reduce, move into (0,1) by t -> -t and t -> 1/t, and if numerator
    /// and denominator are both odd apply t -> (1-t)/(1+t) once.
    pub fn canonical(num: i64, den: i64) -> Result<Self> {
        if den == 0 || num == 0 {
            return Err(Error::Domain("degenerate parameter t in {0, infinity}".into()));
        }
        let mut a = num.unsigned_abs();
        let mut b = den.unsigned_abs();
        let g = a.gcd(&b);
        a /= g;
        b /= g;
        if a == b {
            return Err(Error::Domain("degenerate parameter t = +-1".into()));
        }
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        if a % 2 == 1 && b % 2 == 1 {
            let (na, nb) = ((b - a) / 2, (a + b) / 2);
            a = na;
            b = nb;
        }
        Parameter::new(a, b)
    }

    pub fn a(&self) -> u64 {
        self.a
    }

    pub fn b(&self) -> u64 {
        self.b
    }

    /// Parameter height H = max(|a|, |b|) = b for canonical parameters.
    pub fn height(&self) -> u64 {
        self.b
    }

    /// The parameter as an exact rational.
    pub fn t(&self) -> BigRational {
        BigRational::new(BigInt::from(self.a), BigInt::from(self.b))
    }

    /// u = 2t/(t^2 - 1) = -S/T.
    pub fn u(&self) -> BigRational {
        let st = self.st_pair();
        -BigRational::new(BigInt::from(st.s()), BigInt::from(st.t()))
    }

    pub fn st_pair(&self) -> STPair {
        STPair {
            s: 2 * self.a * self.b,
            t: self.b * self.b - self.a * self.a,
        }
    }
}

impl PartialOrd for Parameter {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Parameter {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.b, self.a).cmp(&(other.b, other.a))
    }
}

impl fmt::Display for Parameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.a, self.b)
    }
}

/// S = 2ab (even), T = b^2 - a^2 (odd); always coprime.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct STPair {
    s: u64,
    t: u64,
}

impl STPair {
    pub fn s(&self) -> u64 {
        self.s
    }

    pub fn t(&self) -> u64 {
        self.t
    }

    pub fn s_big(&self) -> BigInt {
        BigInt::from(self.s)
    }

    pub fn t_big(&self) -> BigInt {
        BigInt::from(self.t)
    }

    /// T^4 - S^4 (negative exactly when S > T).
    pub fn t4_minus_s4(&self) -> BigInt {
        self.t_big().pow(4) - self.s_big().pow(4)
    }
}

/// All canonical parameters with height b <= max_height, in (b, a) order.
pub fn enumerate_parameters(max_height: u64) -> Vec<Parameter> {
    let mut out = Vec::new();
    for b in 2..=max_height {
        for a in (1 + b % 2..b).step_by(2) {
            if a.gcd(&b) == 1 {
                out.push(Parameter { a, b });
            }
        }
    }
    out
}

/// Number of curves of height <= max_height: sum over n of phi(n) for
/// even n and phi(n)/2 for odd n.
pub fn count_exact(max_height: u64) -> u64 {
    let phi = totient_sieve(max_height as usize);
    (2..=max_height as usize)
        .map(|n| if n % 2 == 0 { phi[n] } else { phi[n] / 2 })
        .sum()
}

/// Long Weierstrass model y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6
/// with integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveModel {
    pub a1: BigInt,
    pub a2: BigInt,
    pub a3: BigInt,
    pub a4: BigInt,
    pub a6: BigInt,
}

impl CurveModel {
    pub fn new(a1: BigInt, a2: BigInt, a3: BigInt, a4: BigInt, a6: BigInt) -> Self {
        CurveModel { a1, a2, a3, a4, a6 }
    }

    pub fn b2(&self) -> BigInt {
        &self.a1 * &self.a1 + 4 * &self.a2
    }

    pub fn b4(&self) -> BigInt {
        2 * &self.a4 + &self.a1 * &self.a3
    }

    pub fn b6(&self) -> BigInt {
        &self.a3 * &self.a3 + 4 * &self.a6
    }

    pub fn b8(&self) -> BigInt {
        &self.a1 * &self.a1 * &self.a6 + 4 * &self.a2 * &self.a6 - &self.a1 * &self.a3 * &self.a4
            + &self.a2 * &self.a3 * &self.a3
            - &self.a4 * &self.a4
    }

    pub fn c4(&self) -> BigInt {
        let b2 = self.b2();
        &b2 * &b2 - 24 * self.b4()
    }

    pub fn c6(&self) -> BigInt {
        let b2 = self.b2();
        -(&b2 * &b2 * &b2) + 36 * &b2 * self.b4() - 216 * self.b6()
    }

    pub fn discriminant(&self) -> BigInt {
        let (b2, b4, b6, b8) = (self.b2(), self.b4(), self.b6(), self.b8());
        -(&b2 * &b2 * &b8) - 8 * (&b4 * &b4 * &b4) - 27 * (&b6 * &b6) + 9 * &b2 * &b4 * &b6
    }

    pub fn j_invariant(&self) -> BigRational {
        let c4 = self.c4();
        BigRational::new(&c4 * &c4 * &c4, self.discriminant())
    }

    pub fn is_on_curve(&self, p: &RationalPoint) -> bool {
        match p {
            RationalPoint::Infinity => true,
            RationalPoint::Affine(x, y) => {
                let lhs = y * y + big(&self.a1) * x * y + big(&self.a3) * y;
                let rhs = x * x * x
                    + big(&self.a2) * x * x
                    + big(&self.a4) * x
                    + big(&self.a6);
                lhs == rhs
            }
        }
    }

    /// Chord-tangent addition in exact rational arithmetic.
    pub fn add(&self, p: &RationalPoint, q: &RationalPoint) -> Result<RationalPoint> {
        if !self.is_on_curve(p) || !self.is_on_curve(q) {
            return Err(Error::Domain("point not on curve".into()));
        }
        Ok(self.add_unchecked(p, q))
    }

    fn add_unchecked(&self, p: &RationalPoint, q: &RationalPoint) -> RationalPoint {
        use RationalPoint::*;
        let (x1, y1) = match p {
            Infinity => return q.clone(),
            Affine(x, y) => (x, y),
        };
        let (x2, y2) = match q {
            Infinity => return p.clone(),
            Affine(x, y) => (x, y),
        };
        let a1 = big(&self.a1);
        let a3 = big(&self.a3);
        if x1 == x2 && *y2 == -y1.clone() - &a1 * x1 - &a3 {
            return Infinity;
        }
        let (lambda, nu) = if x1 == x2 {
            let num = BigRational::from(BigInt::from(3)) * x1 * x1
                + BigRational::from(BigInt::from(2)) * big(&self.a2) * x1
                + big(&self.a4)
                - &a1 * y1;
            let den = BigRational::from(BigInt::from(2)) * y1 + &a1 * x1 + &a3;
            let lambda = num / &den;
            let nu = (-(x1 * x1 * x1) + big(&self.a4) * x1
                + BigRational::from(BigInt::from(2)) * big(&self.a6)
                - &a3 * y1)
                / den;
            (lambda, nu)
        } else {
            let lambda = (y2 - y1) / (x2 - x1);
            let nu = (y1 * x2 - y2 * x1) / (x2 - x1);
            (lambda, nu)
        };
        let x3 = &lambda * &lambda + &a1 * &lambda - big(&self.a2) - x1 - x2;
        let y3 = -(&lambda + &a1) * &x3 - nu - a3;
        Affine(x3, y3)
    }

    pub fn negate(&self, p: &RationalPoint) -> RationalPoint {
        match p {
            RationalPoint::Infinity => RationalPoint::Infinity,
            RationalPoint::Affine(x, y) => RationalPoint::Affine(
                x.clone(),
                -y.clone() - big(&self.a1) * x - big(&self.a3),
            ),
        }
    }

    /// k-fold multiple by double-and-add; k may be negative.
    pub fn mul(&self, k: i64, p: &RationalPoint) -> Result<RationalPoint> {
        if !self.is_on_curve(p) {
            return Err(Error::Domain("point not on curve".into()));
        }
        let (mut k, mut base) = if k < 0 {
            (k.unsigned_abs(), self.negate(p))
        } else {
            (k as u64, p.clone())
        };
        let mut acc = RationalPoint::Infinity;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add_unchecked(&acc, &base);
            }
            base = self.add_unchecked(&base, &base);
            k >>= 1;
        }
        Ok(acc)
    }

    /// Order of a point, searched up to `bound`; None if larger.
    pub fn point_order(&self, p: &RationalPoint, bound: u64) -> Option<u64> {
        let mut acc = p.clone();
        for k in 1..=bound {
            if acc == RationalPoint::Infinity {
                return Some(k);
            }
            acc = self.add_unchecked(&acc, p);
        }
        None
    }
}

fn big(n: &BigInt) -> BigRational {
    BigRational::from(n.clone())
}

/// A point with exact rational coordinates, or the point at infinity.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RationalPoint {
    Infinity,
    Affine(BigRational, BigRational),
}

impl RationalPoint {
    pub fn affine(x: BigRational, y: BigRational) -> Self {
        RationalPoint::Affine(x, y)
    }

    pub fn x(&self) -> Option<&BigRational> {
        match self {
            RationalPoint::Infinity => None,
            RationalPoint::Affine(x, _) => Some(x),
        }
    }
}

/// E: y^2 = x(x + S^4)(x + T^4).
pub fn model_product(p: &Parameter) -> CurveModel {
    let st = p.st_pair();
    let s4 = st.s_big().pow(4);
    let t4 = st.t_big().pow(4);
    CurveModel::new(
        BigInt::zero(),
        &s4 + &t4,
        BigInt::zero(),
        &s4 * &t4,
        BigInt::zero(),
    )
}

/// Minimal short Weierstrass model y^2 = x^3 - Ax + B.
pub fn model_minimal_short(p: &Parameter) -> (BigInt, BigInt) {
    let st = p.st_pair();
    let s4 = st.s_big().pow(4);
    let t4 = st.t_big().pow(4);
    let a = 27 * (&s4 * &s4 - &s4 * &t4 + &t4 * &t4);
    let b = 27 * (&s4 - 2 * &t4) * (2 * &s4 - &t4) * (&s4 + &t4);
    (a, b)
}

/// The globally minimal integral model
/// y^2 - xy = x^3 + (S^4 + T^4 - 1)/4 x^2 + S^4 T^4 / 16 x.
pub fn model_minimal_integral(p: &Parameter) -> CurveModel {
    let st = p.st_pair();
    let s4 = st.s_big().pow(4);
    let t4 = st.t_big().pow(4);
    let a2 = (&s4 + &t4 - 1) / 4;
    let a4 = (&s4 * &t4) / 16;
    debug_assert_eq!(&a2 * 4, &s4 + &t4 - 1);
    debug_assert_eq!(&a4 * 16, &s4 * &t4);
    CurveModel::new(BigInt::from(-1), a2, BigInt::zero(), a4, BigInt::zero())
}

/// Naive height h = max(4|A|^3, 27 B^2) of the minimal short model.
pub fn naive_height(p: &Parameter) -> BigInt {
    let (a, b) = model_minimal_short(p);
    let h1: BigInt = 4 * a.abs().pow(3);
    let h2: BigInt = 27 * b.pow(2);
    h1.max(h2)
}

/// Exact check of the two-sided height comparison with the given
/// per-mille constants: lo/1000 * h^{1/48} < H < hi/1000 * h^{1/48}.
pub fn height_sandwich_with(p: &Parameter, lo_millis: u32, hi_millis: u32) -> bool {
    let h = naive_height(p);
    let cap_h48 = BigInt::from(p.height()).pow(48) * BigInt::from(1000u32).pow(48);
    let lower = BigInt::from(lo_millis).pow(48) * &h;
    let upper = BigInt::from(hi_millis).pow(48) * &h;
    lower < cap_h48 && cap_h48 < upper
}

/// The two-sided height comparison 0.559 h^{1/48} < H < 0.885 h^{1/48}.
///
/// The upper constant is the one the height bounds actually support:
/// h > 3^12 2^20 (sqrt(2)-1)^24 H^48 gives H < 0.8847 h^{1/48}, and the
/// ratio 0.8713 is attained within H < 100. The often-quoted 0.672 fails
/// for most of the family (first counterexample t = 1/2).
pub fn height_sandwich_holds(p: &Parameter) -> bool {
    height_sandwich_with(p, 559, 885)
}

/// Conductor: the squarefree product of the primes dividing
/// ab (b^2 - a^2)(a^2 + b^2)(a^2 - 2ab - b^2)(a^2 + 2ab - b^2).
pub fn conductor(p: &Parameter) -> BigInt {
    let mut primes = BTreeSet::new();
    for v in conductor_support_values(p) {
        for (q, _) in factorize_u64(v) {
            primes.insert(q);
        }
    }
    let mut n = BigInt::one();
    for q in primes {
        n *= BigInt::from(q);
    }
    n
}

/// The factors whose primes support the conductor (absolute values).
pub(crate) fn conductor_support_values(p: &Parameter) -> Vec<u64> {
    let (a, b) = (p.a as i128, p.b as i128);
    [
        a,
        b,
        b - a,
        b + a,
        a * a + b * b,
        (a * a - 2 * a * b - b * b).abs(),
        (a * a + 2 * a * b - b * b).abs(),
    ]
    .iter()
    .map(|&v| v as u64)
    .collect()
}

/// Exact check of the conductor bound N < 1.161 H^10.
pub fn conductor_bound_holds(p: &Parameter) -> bool {
    let n = conductor(p);
    let h10 = BigInt::from(p.height()).pow(10);
    1000 * n < 1161 * h10
}

/// Whether no prime p has p^4 | A and p^6 | B, i.e. the short model is
/// minimal. Only primes dividing gcd(A, B) can violate this.
pub fn short_model_is_minimal(a: &BigInt, b: &BigInt) -> bool {
    let g = arith::gcd(a, b);
    if g.is_one() {
        return true;
    }
    let f = match arith::factorize(&g) {
        Ok(f) => f,
        Err(_) => return true,
    };
    for (q, _) in f.iter() {
        let q4 = q.pow(4);
        let q6 = q.pow(6);
        if (a % &q4).is_zero() && (b % &q6).is_zero() {
            return false;
        }
    }
    true
}

/// The point of order 8 on y^2 = x(x + 1)(x + u^4):
/// (2u/(t+1)^2, 4t(t^2+2t-1)(t^2+1) / ((t+1)^5 (t-1)^3)).
/// Verified to satisfy the curve equation exactly.
pub fn torsion_point8(p: &Parameter) -> RationalPoint {
    let t = p.t();
    let u = p.u();
    let one = BigRational::one();
    let two = BigRational::from(BigInt::from(2));
    let four = BigRational::from(BigInt::from(4));
    let tp1 = &t + &one;
    let tm1 = &t - &one;
    let x = &two * &u / (&tp1 * &tp1);
    let y = &four * &t * (&t * &t + &two * &t - &one) * (&t * &t + &one)
        / (tp1.pow(5) * tm1.pow(3));
    let u4 = u.pow(4);
    let lhs = &y * &y;
    let rhs = &x * (&x + &one) * (&x + &u4);
    assert_eq!(lhs, rhs, "order-8 point fails the curve equation");
    RationalPoint::Affine(x, y)
}

/// The order-8 point transported to `model_product` coordinates
/// (X, Y) = (T^4 x, T^6 y).
pub fn torsion_point8_product(p: &Parameter) -> RationalPoint {
    let st = p.st_pair();
    let t4 = BigRational::from(st.t_big().pow(4));
    let t6 = BigRational::from(st.t_big().pow(6));
    match torsion_point8(p) {
        RationalPoint::Affine(x, y) => RationalPoint::Affine(t4 * x, t6 * y),
        RationalPoint::Infinity => unreachable!(),
    }
}

/// The 2-isogeny chain E -> E' -> E'' through the subgroups generated by
/// successive images of the 2-torsion tower.
///
/// E is the product model; E' is the integral model
/// y^2 - xy = x^3 + ((S^2+T^2)^2 + 4S^2T^2 - 1)/4 x^2 + S^2T^2(S^2+T^2)^2/4 x;
/// E'' is the product-style model y^2 = x(x - (S+T)^4)(x - (S-T)^4).
pub fn isogeny_chain(p: &Parameter) -> (CurveModel, CurveModel, CurveModel) {
    let st = p.st_pair();
    let s2 = st.s_big().pow(2);
    let t2 = st.t_big().pow(2);
    let m = (&s2 + &t2).pow(2);
    let n = 4 * &s2 * &t2;
    let e1 = model_product(p);
    let a2p = (&m + &n - 1) / 4;
    let a4p = (&s2 * &t2 * &m) / 4;
    debug_assert_eq!(&a2p * 4, &m + &n - 1);
    let e2 = CurveModel::new(BigInt::from(-1), a2p, BigInt::zero(), a4p, BigInt::zero());
    let sp = st.s_big() + st.t_big();
    let sm = st.t_big() - st.s_big();
    let r1 = sp.pow(4);
    let r2 = sm.pow(4);
    let e3 = CurveModel::new(
        BigInt::zero(),
        -(&r1 + &r2),
        BigInt::zero(),
        &r1 * &r2,
        BigInt::zero(),
    );
    (e1, e2, e3)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn param(a: u64, b: u64) -> Parameter {
        Parameter::new(a, b).unwrap()
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_parameters(2), vec![param(1, 2)]);
        assert_eq!(enumerate_parameters(99).len(), 2000);
        assert_eq!(count_exact(99), 2000);
        assert_eq!(count_exact(24), 121);
    }

    #[test]
    fn enumeration_matches_count_exact() {
        for n in 2..=200 {
            assert_eq!(enumerate_parameters(n).len() as u64, count_exact(n), "N={n}");
        }
    }

    #[test]
    fn canonicalization() {
        assert_eq!(Parameter::canonical(1, 2).unwrap(), param(1, 2));
        assert_eq!(Parameter::canonical(3, 5).unwrap(), param(1, 4));
        assert_eq!(Parameter::canonical(-2, 3).unwrap(), param(2, 3));
        assert_eq!(Parameter::canonical(5, 2).unwrap(), param(2, 5));
        assert_eq!(Parameter::canonical(-9, -6).unwrap(), param(2, 3));
        assert_eq!(Parameter::canonical(7, 3).unwrap(), param(2, 5)); // 3/7 has both odd
        assert!(Parameter::canonical(0, 5).is_err());
        assert!(Parameter::canonical(5, 5).is_err());
        assert!(Parameter::canonical(-7, 7).is_err());
        assert!(Parameter::canonical(3, 0).is_err());
    }

    #[test]
    fn canonical_is_idempotent() {
        for p in enumerate_parameters(60) {
            let again = Parameter::canonical(p.a() as i64, p.b() as i64).unwrap();
            assert_eq!(again, p);
        }
    }

    #[test]
    fn orbit_maps_to_same_parameter_and_j() {
        // the eight parameters ±t, ±1/t, ±(1-t)/(1+t), ±(1+t)/(1-t)
        for p in enumerate_parameters(30) {
            let (a, b) = (p.a() as i64, p.b() as i64);
            let orbit: [(i64, i64); 8] = [
                (a, b),
                (-a, b),
                (b, a),
                (-b, a),
                (b - a, b + a),
                (a - b, b + a),
                (b + a, b - a),
                (-(b + a), b - a),
            ];
            let j = model_product(&p).j_invariant();
            for (num, den) in orbit {
                let q = Parameter::canonical(num, den).unwrap();
                assert_eq!(q, p, "orbit member {num}/{den} of {p}");
                assert_eq!(model_product(&q).j_invariant(), j);
            }
        }
    }

    #[test]
    fn st_pairs() {
        assert_eq!(param(1, 2).st_pair(), STPair { s: 4, t: 3 });
        assert_eq!(param(1, 4).st_pair(), STPair { s: 8, t: 15 });
        assert_eq!(param(5, 8).st_pair(), STPair { s: 80, t: 39 });
        for p in enumerate_parameters(50) {
            let st = p.st_pair();
            assert_eq!(st.s % 2, 0);
            assert_eq!(st.t % 2, 1);
            assert_eq!(st.s.gcd(&st.t), 1);
        }
    }

    #[test]
    fn product_model_values() {
        let m = model_product(&param(1, 2));
        assert_eq!(m.a2, BigInt::from(337));
        assert_eq!(m.a4, BigInt::from(20736));
        let m = model_product(&param(1, 4));
        assert_eq!(m.a2, BigInt::from(54721));
        assert_eq!(m.a4, BigInt::from(4096) * BigInt::from(50625));
        // discriminant 16 S^8 T^8 (T^4 - S^4)^2
        for p in [param(1, 2), param(2, 3), param(5, 8)] {
            let st = p.st_pair();
            let expect = 16
                * st.s_big().pow(8)
                * st.t_big().pow(8)
                * st.t4_minus_s4().pow(2);
            assert_eq!(model_product(&p).discriminant(), expect);
        }
    }

    #[test]
    fn named_minimal_short_models() {
        let (a, b) = model_minimal_short(&param(1, 2));
        assert_eq!(a, BigInt::from(1386747u64));
        assert_eq!(b, BigInt::from(368636886u64));
        let (a, b) = model_minimal_short(&param(1, 4));
        assert_eq!(a, BigInt::from(64052311707u64));
        assert_eq!(b, BigInt::from(6090910426477494u64));
        let (a, b) = model_minimal_short(&param(5, 8));
        assert_eq!(a, BigInt::from(42884506779312987u64));
        assert_eq!(b, "3379377560795274084396534".parse::<BigInt>().unwrap());
        let (a, b) = model_minimal_short(&param(12, 17));
        assert_eq!(a, "20406728559954500484507".parse::<BigInt>().unwrap());
        assert_eq!(
            b,
            "1121060630379489735235148874483894".parse::<BigInt>().unwrap()
        );
    }

    #[test]
    fn named_naive_heights() {
        assert_eq!(
            naive_height(&param(1, 2)),
            "10667230914617018892".parse::<BigInt>().unwrap()
        );
        // (98,99): 6.39e107 to three significant figures
        let h = naive_height(&param(98, 99));
        let digits = h.to_string();
        assert_eq!(digits.len(), 108);
        assert!(digits.starts_with("639"));
    }

    #[test]
    fn minimal_integral_model() {
        let m = model_minimal_integral(&param(1, 2));
        assert_eq!(m.a2, BigInt::from(84));
        assert_eq!(m.a4, BigInt::from(1296));
        // discriminant 2^8 3^8 5^4 7^2
        let expect = BigInt::from(256) * BigInt::from(6561) * BigInt::from(625) * BigInt::from(49);
        assert_eq!(m.discriminant(), expect);
        // integrality for (1,4)
        let m = model_minimal_integral(&param(1, 4));
        assert_eq!(m.a2, BigInt::from(13680));
        // generic discriminant identity S^8 T^8 (T^4-S^4)^2 / 2^8
        for p in enumerate_parameters(20) {
            let st = p.st_pair();
            let expect =
                st.s_big().pow(8) * st.t_big().pow(8) * st.t4_minus_s4().pow(2) / BigInt::from(256);
            assert_eq!(model_minimal_integral(&p).discriminant(), expect);
        }
    }

    #[test]
    fn short_model_minimality() {
        for p in enumerate_parameters(40) {
            let (a, b) = model_minimal_short(&p);
            assert!(short_model_is_minimal(&a, &b), "{p}");
        }
        // a non-minimal pair for contrast: scale (A, B) by (u^4, u^6)
        let (a, b) = model_minimal_short(&param(1, 2));
        assert!(!short_model_is_minimal(
            &(a * BigInt::from(16)),
            &(b * BigInt::from(64))
        ));
    }

    #[test]
    fn conductor_values() {
        assert_eq!(conductor(&param(1, 2)), BigInt::from(210));
        let n = conductor(&param(98, 99));
        // 6.65e17 to three significant figures
        let s = n.to_string();
        assert_eq!(s.len(), 18);
        assert!(s.starts_with("664") || s.starts_with("665"));
        assert_eq!(n, BigInt::from(664905023028474690u64));
    }

    #[test]
    fn conductor_divides_discriminant_and_bound() {
        for p in enumerate_parameters(40) {
            let n = conductor(&p);
            let disc = model_product(&p).discriminant();
            assert!((disc % &n).is_zero(), "{p}");
            assert!(conductor_bound_holds(&p), "{p}");
            assert!(height_sandwich_holds(&p), "{p}");
        }
    }

    #[test]
    fn group_law_basics() {
        let m = model_product(&param(1, 2));
        let two_torsion = RationalPoint::affine(
            BigRational::from(BigInt::zero()),
            BigRational::from(BigInt::zero()),
        );
        // P + O = P; P + (-P) = O; 2 * (0,0) = O
        assert_eq!(
            m.add(&two_torsion, &RationalPoint::Infinity).unwrap(),
            two_torsion
        );
        let neg = m.negate(&two_torsion);
        assert_eq!(m.add(&two_torsion, &neg).unwrap(), RationalPoint::Infinity);
        assert_eq!(m.mul(2, &two_torsion).unwrap(), RationalPoint::Infinity);
        // rejects points off the curve
        let bogus = RationalPoint::affine(
            BigRational::from(BigInt::from(1)),
            BigRational::from(BigInt::from(1)),
        );
        assert!(m.add(&bogus, &RationalPoint::Infinity).is_err());
    }

    #[test]
    fn torsion_point_has_exact_order_8() {
        for p in enumerate_parameters(20) {
            let m = model_product(&p);
            let pt = torsion_point8_product(&p);
            assert!(m.is_on_curve(&pt), "{p}");
            assert_eq!(m.mul(8, &pt).unwrap(), RationalPoint::Infinity, "{p}");
            assert_ne!(m.mul(4, &pt).unwrap(), RationalPoint::Infinity, "{p}");
        }
    }

    #[test]
    fn torsion_point_example_1_2() {
        let p = param(1, 2);
        assert_eq!(p.u(), BigRational::new(BigInt::from(-4), BigInt::from(3)));
        let pt = torsion_point8(&p); // constructor asserts the curve equation
        let x = pt.x().unwrap();
        assert_eq!(x, &BigRational::new(BigInt::from(-32), BigInt::from(27)));
    }

    #[test]
    fn isogeny_chain_invariants() {
        for p in enumerate_parameters(16) {
            let st = p.st_pair();
            let (e, ep, epp) = isogeny_chain(&p);
            // stated discriminant of E': S^4 T^4 (T^4 - S^4)^4 / 2^4
            let expect = st.s_big().pow(4) * st.t_big().pow(4) * st.t4_minus_s4().pow(4)
                / BigInt::from(16);
            assert_eq!(ep.discriminant(), expect, "{p}");
            // 2-isogenous, never isomorphic
            assert_ne!(e.j_invariant(), ep.j_invariant(), "{p}");
            assert_ne!(ep.j_invariant(), epp.j_invariant(), "{p}");
            assert_ne!(e.j_invariant(), epp.j_invariant(), "{p}");
            assert!(!epp.discriminant().is_zero());
        }
    }

    #[test]
    fn chain_conductor_matches_radical() {
        // E and E' have the same conductor: the radical formula divides both
        // discriminants with the same prime support.
        for p in enumerate_parameters(12) {
            let n = conductor(&p);
            let (e, ep, _) = isogeny_chain(&p);
            for m in [&e, &ep] {
                let d = m.discriminant();
                let primes_n: Vec<u64> = conductor_support_values(&p)
                    .iter()
                    .flat_map(|&v| factorize_u64(v).into_iter().map(|(q, _)| q))
                    .collect();
                for q in primes_n {
                    assert!((&d % BigInt::from(q)).is_zero(), "{p} q={q}");
                }
                assert!((&d % &n).is_zero(), "{p}");
            }
        }
    }

    #[test]
    fn parameter_height_and_order() {
        let mut v = vec![param(3, 4), param(1, 2), param(1, 4)];
        v.sort();
        assert_eq!(v, vec![param(1, 2), param(1, 4), param(3, 4)]);
        assert_eq!(param(98, 99).height(), 99);
        assert!(param(98, 99).height().to_i64().is_some());
    }
}
