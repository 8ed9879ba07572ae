//! Square-class bookkeeping over F_2: global classes supported on a
//! fixed prime list, their images in the local class groups
//! Q_q*/(Q_q*)^2, and kernel computations for Selmer groups.

use crate::arith::{jacobi_u64, valuation_u64};
use num_bigint::BigInt;
use num_traits::One;

/// Basis of a group of squarefree classes: bit 0 is the sign, bit i+1
/// the i-th prime.
#[derive(Debug, Clone)]
pub(crate) struct ClassBasis {
    pub primes: Vec<u64>,
}

impl ClassBasis {
    pub fn new(mut primes: Vec<u64>) -> Self {
        primes.sort_unstable();
        primes.dedup();
        ClassBasis { primes }
    }

    pub fn dim(&self) -> usize {
        self.primes.len() + 1
    }

    pub fn decode(&self, mask: u64) -> BigInt {
        let mut v = if mask & 1 == 1 {
            BigInt::from(-1)
        } else {
            BigInt::one()
        };
        for (i, &p) in self.primes.iter().enumerate() {
            if mask >> (i + 1) & 1 == 1 {
                v *= BigInt::from(p);
            }
        }
        v
    }

    /// Encode a nonzero integer's square class, if supported on the basis.
    /// Returns None when a non-square cofactor remains.
    pub fn encode(&self, value: &BigInt) -> Option<u64> {
        use num_traits::Signed;
        let mut mask = if value.is_negative() { 1u64 } else { 0 };
        let mut rest = value.abs();
        for (i, &p) in self.primes.iter().enumerate() {
            let pb = BigInt::from(p);
            let v = crate::arith::valuation(&rest, &pb).unwrap();
            if v % 2 == 1 {
                mask |= 1 << (i + 1);
            }
            rest /= pb.pow(v);
        }
        if crate::arith::is_perfect_square(&rest) {
            Some(mask)
        } else {
            None
        }
    }
}

/// Local coordinates of the class of a basis generator at a place.
/// Odd q: 2 bits (valuation parity, unit nonresidue). q = 2: 3 bits
/// (valuation parity, chi_4, chi_8). Infinity: 1 bit (sign).
pub(crate) fn generator_local_coords(gen: Gen, place: Place) -> u8 {
    match place {
        Place::Infinity => match gen {
            Gen::MinusOne => 1,
            Gen::Prime(_) => 0,
        },
        Place::Two => match gen {
            Gen::MinusOne => 0b010,
            Gen::Prime(2) => 0b001,
            Gen::Prime(p) => {
                let chi4 = (p % 4 == 3) as u8;
                let chi8 = (p % 8 == 3 || p % 8 == 5) as u8;
                (chi4 << 1) | (chi8 << 2)
            }
        },
        Place::Odd(q) => match gen {
            Gen::MinusOne => ((jacobi_u64(-1, q) == -1) as u8) << 1,
            Gen::Prime(p) if p == q => 0b01,
            Gen::Prime(p) => {
                let v = valuation_u64(p, q);
                let unit = p / q.pow(v);
                let nonres = (jacobi_u64(unit as i64, q) == -1) as u8;
                (((v % 2) as u8) | (nonres << 1)) & 0b11
            }
        },
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Gen {
    MinusOne,
    Prime(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Place {
    Infinity,
    Two,
    Odd(u64),
}

impl Place {
    pub fn local_bits(&self) -> u8 {
        match self {
            Place::Infinity => 1,
            Place::Two => 3,
            Place::Odd(_) => 2,
        }
    }

    /// Small integer representatives of all local square classes, indexed
    /// by their coordinate bits.
    pub fn class_representatives(&self) -> Vec<BigInt> {
        match self {
            Place::Infinity => vec![BigInt::one(), BigInt::from(-1)],
            Place::Two => {
                // bits (v, chi4, chi8): units 1, 3, 5, 7 then doubled
                let unit_for = |bits: u8| -> i64 {
                    match bits {
                        0b00 => 1,
                        0b01 => 7, // chi4 = 1, chi8 = 0
                        0b10 => 5, // chi4 = 0, chi8 = 1
                        _ => 3,    // both
                    }
                };
                (0u8..8)
                    .map(|h| {
                        let v = h & 1;
                        let unit = unit_for((h >> 1) & 0b11);
                        BigInt::from(if v == 1 { 2 * unit } else { unit })
                    })
                    .collect()
            }
            Place::Odd(q) => {
                let u = least_nonresidue(*q);
                (0u8..4)
                    .map(|h| {
                        let mut val = BigInt::one();
                        if h & 1 == 1 {
                            val *= BigInt::from(*q);
                        }
                        if h >> 1 & 1 == 1 {
                            val *= BigInt::from(u);
                        }
                        val
                    })
                    .collect()
            }
        }
    }
}

pub(crate) fn least_nonresidue(q: u64) -> u64 {
    debug_assert!(q % 2 == 1);
    (2..).find(|&u| jacobi_u64(u as i64, q) == -1).unwrap()
}

/// F_2 kernel of a set of linear forms on a `dim`-bit space.
/// Rows are bitmasks; v is in the kernel iff parity(v & row) = 0 for
/// every row. Returns a basis of the kernel.
pub(crate) fn f2_kernel(rows: &[u64], dim: usize) -> Vec<u64> {
    // Gaussian elimination on the rows to find pivot columns
    let mut echelon: Vec<u64> = Vec::new();
    for &r in rows {
        let mut r = r & mask_of(dim);
        for &e in &echelon {
            let pivot = lowest_bit(e);
            if r & pivot != 0 {
                r ^= e;
            }
        }
        if r != 0 {
            echelon.push(r);
            echelon.sort_by_key(|&e| lowest_bit(e));
        }
    }
    // back-substitute so each pivot appears in exactly one row
    let rows = {
        let mut rows = echelon.clone();
        for i in 0..rows.len() {
            let pivot = lowest_bit(rows[i]);
            for j in 0..rows.len() {
                if i != j && rows[j] & pivot != 0 {
                    rows[j] ^= rows[i];
                }
            }
        }
        rows
    };
    let pivots: Vec<u64> = rows.iter().map(|&r| lowest_bit(r)).collect();
    let mut basis = Vec::new();
    for col in 0..dim {
        let bit = 1u64 << col;
        if pivots.contains(&bit) {
            continue;
        }
        // free column: set it, solve for pivot columns
        let mut v = bit;
        for r in &rows {
            if r & bit != 0 {
                v |= lowest_bit(*r);
            }
        }
        basis.push(v);
    }
    debug_assert!(basis
        .iter()
        .all(|&v| rows.iter().all(|&r| (v & r).count_ones() % 2 == 0)));
    basis
}

fn mask_of(dim: usize) -> u64 {
    if dim >= 64 {
        u64::MAX
    } else {
        (1u64 << dim) - 1
    }
}

fn lowest_bit(x: u64) -> u64 {
    x & x.wrapping_neg()
}

/// All elements spanned by a basis of masks. Panics beyond 2^20 elements.
pub(crate) fn span_elements(basis: &[u64]) -> Vec<u64> {
    assert!(basis.len() <= 20, "span too large to enumerate");
    let mut out = vec![0u64];
    for &b in basis {
        let half: Vec<u64> = out.iter().map(|&v| v ^ b).collect();
        out.extend(half);
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Dual vectors (as bitmasks over `bits`) annihilating every vector of
/// `subspace`.
pub(crate) fn annihilator(subspace: &[u8], bits: u8) -> Vec<u8> {
    let mut out = Vec::new();
    for c in 1u8..(1 << bits) {
        if subspace
            .iter()
            .all(|&v| (v & c).count_ones() % 2 == 0)
        {
            out.push(c);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn place_tag(p: Place) -> u64 {
        match p {
            Place::Infinity => 0,
            Place::Two => 2,
            Place::Odd(q) => q,
        }
    }

    #[test]
    fn kernel_of_empty_is_everything() {
        let basis = f2_kernel(&[], 3);
        assert_eq!(span_elements(&basis).len(), 8);
    }

    #[test]
    fn kernel_respects_rows() {
        // rows x0+x1, x2 over 4 bits: kernel {0, 0b0011, 0b1000, 0b1011}
        let basis = f2_kernel(&[0b0011, 0b0100], 4);
        let all = span_elements(&basis);
        assert_eq!(all.len(), 4);
        for v in all {
            assert_eq!((v & 0b0011u64).count_ones() % 2, 0);
            assert_eq!((v & 0b0100u64).count_ones() % 2, 0);
        }
    }

    #[test]
    fn encode_decode_roundtrip() {
        let basis = ClassBasis::new(vec![2, 3, 7]);
        for mask in 0..16u64 {
            let value = basis.decode(mask);
            assert_eq!(basis.encode(&value), Some(mask));
            // times a square: same class
            assert_eq!(basis.encode(&(&value * 25)), Some(mask));
        }
        assert_eq!(basis.encode(&BigInt::from(5)), None);
        assert_eq!(basis.encode(&BigInt::from(-18)), Some(0b011));
        assert_eq!(basis.encode(&BigInt::from(-25)), Some(1));
    }

    #[test]
    fn annihilator_dims() {
        // subspace spanned by 0b011 in 3 bits: annihilator has 3 nonzero
        // vectors c with <c, 0b011> = 0: 0b100, 0b011, 0b111
        let ann = annihilator(&[0b011], 3);
        assert_eq!(ann.len(), 3);
        // full space: only 0 annihilates, list is empty
        let ann = annihilator(&[0b001, 0b010, 0b100], 3);
        assert!(ann.is_empty());
    }

    #[test]
    fn local_coords_of_representatives() {
        for place in [Place::Two, Place::Odd(3), Place::Odd(5), Place::Odd(13), Place::Odd(41)] {
            let reps = place.class_representatives();
            // representatives must be pairwise inequivalent: their
            // pairwise ratios are non-squares locally
            for (i, a) in reps.iter().enumerate() {
                for (j, b) in reps.iter().enumerate() {
                    if i != j {
                        let prod = a * b; // ratio up to squares
                        let q = place_tag(place);
                        assert!(
                            !crate::arith::is_qadic_square(&prod, &BigInt::one(), q),
                            "{place:?}: reps {a} and {b} collide"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn generator_coords_match_representatives() {
        // encoding a representative through generator_local_coords as a
        // one-prime basis must give back its index bits
        for q in [3u64, 5, 11, 17] {
            let place = Place::Odd(q);
            let u = least_nonresidue(q);
            assert_eq!(generator_local_coords(Gen::Prime(q), place), 0b01);
            assert_eq!(
                generator_local_coords(Gen::Prime(u), place) & 0b10,
                0b10
            );
        }
        assert_eq!(generator_local_coords(Gen::Prime(2), Place::Two), 0b001);
        assert_eq!(generator_local_coords(Gen::MinusOne, Place::Two), 0b010);
        // 7 = -1 mod squares in Q_2
        assert_eq!(generator_local_coords(Gen::Prime(7), Place::Two), 0b010);
        assert_eq!(generator_local_coords(Gen::MinusOne, Place::Infinity), 1);
    }
}
