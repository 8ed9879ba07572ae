//! Aggregation of per-curve data into the family's distribution tables
//! and running-average series, the divisor-density checks, and the
//! brute-force oracles for the local density formulas.

mod model;
mod oracles;

pub use model::{analytic_moments, simulate_model, ModelMoments, ModelSample};
pub use oracles::{
    h1_closed, h1_oracle, h2_closed, h2_oracle, h3_closed, h3_oracle, h_oracles,
    verify_h_functions,
};

use crate::arith::jacobi_u64;
use crate::family::Parameter;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use std::collections::BTreeMap;

/// The per-curve quantities the statistics consume.
#[derive(Debug, Clone)]
pub struct CurveStat {
    pub height: u64,
    pub rank_lower: u32,
    pub rank_upper: u32,
    /// Settled rank (unconditional, or closed by the parity refinement).
    pub rank: Option<u32>,
    pub sel2_dim: Option<u32>,
    pub tamagawa_finite: BigInt,
    pub t_log2: i64,
    pub root_number: i8,
}

/// An integer-bucketed distribution with exact totals and averages.
#[derive(Debug, Clone)]
pub struct DistributionTable {
    pub buckets: BTreeMap<i64, u64>,
    pub unknown: u64,
    pub total: u64,
    /// Lower and upper average (equal when every entry is known).
    pub mean_lower: BigRational,
    pub mean_upper: BigRational,
    /// Sample variance of the bucket values (when all entries are known).
    pub variance: Option<BigRational>,
}

impl DistributionTable {
    pub fn counts_sum_to_total(&self) -> bool {
        self.buckets.values().sum::<u64>() + self.unknown == self.total
    }
}

fn ratio(num: BigInt, den: u64) -> BigRational {
    BigRational::new(num, BigInt::from(den))
}

/// Rank distribution: buckets are the settled ranks, plus an unknown
/// bucket; averages accumulate the bounds of every curve.
pub fn rank_table(records: &[CurveStat]) -> DistributionTable {
    let mut buckets = BTreeMap::new();
    let mut unknown = 0u64;
    let mut lower_sum = BigInt::zero();
    let mut upper_sum = BigInt::zero();
    for r in records {
        match r.rank {
            Some(rank) => *buckets.entry(rank as i64).or_insert(0) += 1,
            None => unknown += 1,
        }
        lower_sum += BigInt::from(r.rank_lower);
        upper_sum += BigInt::from(r.rank_upper);
    }
    let total = records.len() as u64;
    DistributionTable {
        buckets,
        unknown,
        total,
        mean_lower: ratio(lower_sum, total),
        mean_upper: ratio(upper_sum, total),
        variance: None,
    }
}

/// 2-Selmer rank distribution with the average group size 2^dim.
/// Curves without a computed dimension land in the unknown bucket.
pub fn selmer_table(records: &[CurveStat]) -> DistributionTable {
    let mut buckets = BTreeMap::new();
    let mut unknown = 0u64;
    let mut size_sum = BigInt::zero();
    let mut known = 0u64;
    for r in records {
        match r.sel2_dim {
            Some(d) => {
                *buckets.entry(d as i64).or_insert(0) += 1;
                size_sum += BigInt::from(2u64).pow(d);
                known += 1;
            }
            None => unknown += 1,
        }
    }
    let mean = if known > 0 {
        ratio(size_sum, known)
    } else {
        BigRational::zero()
    };
    DistributionTable {
        buckets,
        unknown,
        total: records.len() as u64,
        mean_lower: mean.clone(),
        mean_upper: mean,
        variance: None,
    }
}

/// Root number distribution with average in [-1, 1].
pub fn root_number_table(records: &[CurveStat]) -> DistributionTable {
    let mut buckets = BTreeMap::new();
    let mut sum = BigInt::zero();
    for r in records {
        *buckets.entry(r.root_number as i64).or_insert(0) += 1;
        sum += BigInt::from(r.root_number);
    }
    let total = records.len() as u64;
    DistributionTable {
        buckets,
        unknown: 0,
        total,
        mean_lower: ratio(sum.clone(), total),
        mean_upper: ratio(sum, total),
        variance: None,
    }
}

/// Histogram of the logarithmic Tamagawa ratio with exact mean and
/// variance.
pub fn t_distribution(records: &[CurveStat]) -> DistributionTable {
    let mut buckets = BTreeMap::new();
    let mut sum = BigInt::zero();
    let mut sum_sq = BigInt::zero();
    for r in records {
        *buckets.entry(r.t_log2).or_insert(0) += 1;
        sum += BigInt::from(r.t_log2);
        sum_sq += BigInt::from(r.t_log2 * r.t_log2);
    }
    let total = records.len() as u64;
    let mean = ratio(sum, total);
    let variance = ratio(sum_sq, total) - &mean * &mean;
    DistributionTable {
        buckets,
        unknown: 0,
        total,
        mean_lower: mean.clone(),
        mean_upper: mean,
        variance: Some(variance),
    }
}

/// Exact average of the finite Tamagawa product.
pub fn average_tamagawa(records: &[CurveStat]) -> BigRational {
    let sum: BigInt = records.iter().map(|r| r.tamagawa_finite.clone()).sum();
    ratio(sum, records.len() as u64)
}

/// A point of a cumulative running-average series.
#[derive(Debug, Clone)]
pub struct SeriesPoint {
    pub height: u64,
    pub value: BigRational,
    pub lower: Option<BigRational>,
    pub upper: Option<BigRational>,
}

/// Which invariant a series averages.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesKind {
    /// Settled-rank average with lower/upper bound band.
    Rank,
    /// Average size of the 2-Selmer group.
    SelmerSize,
    /// Average finite Tamagawa product.
    TamagawaFinite,
    /// Average Tamagawa product including the real component factor 2.
    TamagawaWithInfinity,
    /// Average root number.
    RootNumber,
}

/// Cumulative averages after each height cohort. Records must be sorted
/// by height.
pub fn average_series(records: &[CurveStat], kind: SeriesKind) -> Vec<SeriesPoint> {
    assert!(
        records.windows(2).all(|w| w[0].height <= w[1].height),
        "records must be sorted by height"
    );
    let mut out = Vec::new();
    let mut n = 0u64;
    let mut sum = BigInt::zero();
    let mut lower_sum = BigInt::zero();
    let mut upper_sum = BigInt::zero();
    let mut known = 0u64;
    let mut i = 0;
    while i < records.len() {
        let h = records[i].height;
        while i < records.len() && records[i].height == h {
            let r = &records[i];
            n += 1;
            match kind {
                SeriesKind::Rank => {
                    lower_sum += BigInt::from(r.rank_lower);
                    upper_sum += BigInt::from(r.rank_upper);
                    if let Some(rank) = r.rank {
                        sum += BigInt::from(rank);
                        known += 1;
                    }
                }
                SeriesKind::SelmerSize => {
                    if let Some(d) = r.sel2_dim {
                        sum += BigInt::from(2u64).pow(d);
                        known += 1;
                    }
                }
                SeriesKind::TamagawaFinite => {
                    sum += &r.tamagawa_finite;
                    known += 1;
                }
                SeriesKind::TamagawaWithInfinity => {
                    sum += 2 * &r.tamagawa_finite;
                    known += 1;
                }
                SeriesKind::RootNumber => {
                    sum += BigInt::from(r.root_number);
                    known += 1;
                }
            }
            i += 1;
        }
        let value = if known > 0 {
            ratio(sum.clone(), known)
        } else {
            BigRational::zero()
        };
        let (lower, upper) = if kind == SeriesKind::Rank {
            (
                Some(ratio(lower_sum.clone(), n)),
                Some(ratio(upper_sum.clone(), n)),
            )
        } else {
            (None, None)
        };
        out.push(SeriesPoint {
            height: h,
            value,
            lower,
            upper,
        });
    }
    out
}

/// The divisor-density polynomials of the normal-limit model:
/// H1 = (a^2-b^2-2ab)(a^2-b^2+2ab)(a^2+b^2), H2 = ab(b-a)(b+a).
pub fn density_h1(p: &Parameter) -> BigInt {
    let a = BigInt::from(p.a());
    let b = BigInt::from(p.b());
    let s = &a * &a - &b * &b;
    let c: BigInt = 2 * &a * &b;
    (&s - &c) * (&s + &c) * (&a * &a + &b * &b)
}

pub fn density_h2(p: &Parameter) -> BigInt {
    let a = BigInt::from(p.a());
    let b = BigInt::from(p.b());
    (&a * &b) * (&b - &a) * (&b + &a)
}

/// The exact per-curve identity: t_log2 equals f(H1) - g(H2), where f
/// counts the prime divisors with (-1/p) = 1 and g counts all prime
/// divisors including 2.
pub fn t_log2_from_divisor_counts(p: &Parameter) -> i64 {
    let h1 = density_h1(p);
    let h2 = density_h2(p);
    let f = crate::arith::factorize(&h1)
        .unwrap()
        .primes()
        .filter(|q| {
            let q = q.to_u64().unwrap();
            q % 2 == 1 && jacobi_u64(-1, q) == 1
        })
        .count() as i64;
    let g = crate::arith::factorize(&h2).unwrap().len() as i64;
    f - g
}

/// Empirical versus predicted divisibility density at an odd prime q.
#[derive(Debug, Clone)]
pub struct DensityCheck {
    pub q: u64,
    pub sample_size: u64,
    /// Fraction of the sample with q | H1 and (-1/q) = 1 (the weighted
    /// indicator of the density formula), and its prediction.
    pub h1_empirical: BigRational,
    pub h1_predicted: BigRational,
    /// Fraction with q | H2 and its prediction 4/(q+1).
    pub h2_empirical: BigRational,
    pub h2_predicted: BigRational,
}

impl DensityCheck {
    /// Both empirical values within `sigmas` binomial standard errors.
    pub fn within_standard_errors(&self, sigmas: f64) -> bool {
        let n = self.sample_size as f64;
        let ok = |emp: &BigRational, pred: &BigRational| {
            let e = emp.to_f64().unwrap();
            let p = pred.to_f64().unwrap();
            let se = (p * (1.0 - p) / n).sqrt();
            (e - p).abs() <= sigmas * se.max(f64::EPSILON)
        };
        ok(&self.h1_empirical, &self.h1_predicted) && ok(&self.h2_empirical, &self.h2_predicted)
    }
}

pub fn local_density(q: u64, sample: &[Parameter]) -> crate::Result<DensityCheck> {
    if q < 3 || !crate::arith::is_prime_u64(q) {
        return Err(crate::Error::Domain(format!("{q} is not an odd prime")));
    }
    if sample.is_empty() {
        return Err(crate::Error::Domain("empty sample".into()));
    }
    let qb = BigInt::from(q);
    let minus_one_square = jacobi_u64(-1, q) == 1;
    let mut c1 = 0u64;
    let mut c2 = 0u64;
    for p in sample {
        if minus_one_square && (density_h1(p) % &qb).is_zero() {
            c1 += 1;
        }
        if (density_h2(p) % &qb).is_zero() {
            c2 += 1;
        }
    }
    let n = sample.len() as u64;
    let h1_predicted = if !minus_one_square {
        BigRational::zero()
    } else if jacobi_u64(2, q) == 1 {
        BigRational::new(BigInt::from(6), BigInt::from(q + 1))
    } else {
        BigRational::new(BigInt::from(2), BigInt::from(q + 1))
    };
    Ok(DensityCheck {
        q,
        sample_size: n,
        h1_empirical: ratio(BigInt::from(c1), n),
        h1_predicted,
        h2_empirical: ratio(BigInt::from(c2), n),
        h2_predicted: BigRational::new(BigInt::from(4), BigInt::from(q + 1)),
    })
}

/// Render an exact rational with six decimal places (round half away
/// from zero), as used in all table output.
pub fn six_decimals(x: &BigRational) -> String {
    let scaled = x * BigRational::from(BigInt::from(1_000_000));
    let rounded = scaled.round().to_integer();
    let sign = if rounded.is_negative() { "-" } else { "" };
    let abs = rounded.abs();
    let int = &abs / 1_000_000;
    let frac = &abs % 1_000_000;
    format!("{sign}{int}.{frac:06}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::enumerate_parameters;
    use crate::local::tamagawa_ratio;

    fn stat_for(p: &Parameter) -> CurveStat {
        let summary = tamagawa_ratio(p);
        CurveStat {
            height: p.height(),
            rank_lower: 0,
            rank_upper: 0,
            rank: Some(0),
            sel2_dim: Some(2),
            tamagawa_finite: summary.finite_product,
            t_log2: summary.t_log2,
            root_number: crate::local::root_number(p),
        }
    }

    #[test]
    fn t_identity_against_divisor_counts() {
        for p in enumerate_parameters(40) {
            assert_eq!(
                tamagawa_ratio(&p).t_log2,
                t_log2_from_divisor_counts(&p),
                "{p}"
            );
        }
    }

    #[test]
    fn t_distribution_of_1_2() {
        let p = Parameter::new(1, 2).unwrap();
        let table = t_distribution(&[stat_for(&p)]);
        assert_eq!(table.buckets.get(&-1), Some(&1));
        assert_eq!(table.mean_lower, BigRational::from(BigInt::from(-1)));
        assert!(table.counts_sum_to_total());
    }

    #[test]
    fn mean_and_variance_are_exact() {
        let params: Vec<_> = enumerate_parameters(30);
        let stats: Vec<_> = params.iter().map(stat_for).collect();
        let table = t_distribution(&stats);
        let n = BigInt::from(table.total);
        let sum: BigInt = table
            .buckets
            .iter()
            .map(|(v, c)| BigInt::from(*v) * BigInt::from(*c))
            .sum();
        assert_eq!(table.mean_lower, BigRational::new(sum, n));
        assert!(table.variance.is_some());
    }

    #[test]
    fn density_predictions() {
        let sample = enumerate_parameters(60);
        let d5 = local_density(5, &sample).unwrap();
        assert_eq!(
            d5.h2_predicted,
            BigRational::new(BigInt::from(2), BigInt::from(3))
        );
        let d17 = local_density(17, &sample).unwrap();
        assert_eq!(
            d17.h1_predicted,
            BigRational::new(BigInt::from(1), BigInt::from(3))
        );
        let d3 = local_density(3, &sample).unwrap();
        assert!(d3.h1_predicted.is_zero());
        assert!(d3.h1_empirical.is_zero());
        // q = 3 divides H2 with the full density 4/(3+1) = 1
        assert_eq!(d3.h2_predicted, BigRational::from(BigInt::from(1)));
        assert!(local_density(4, &sample).is_err());
        assert!(local_density(5, &[]).is_err());
    }

    #[test]
    fn densities_match_at_modest_heights() {
        let sample = enumerate_parameters(150);
        for q in [3, 5, 7, 11, 13, 17] {
            let d = local_density(q, &sample).unwrap();
            assert!(d.within_standard_errors(3.5), "q={q}: {d:?}");
        }
    }

    #[test]
    fn rank_table_buckets_and_band() {
        let mut stats: Vec<CurveStat> = Vec::new();
        for (i, p) in enumerate_parameters(12).iter().enumerate() {
            let mut s = stat_for(p);
            s.rank = if i % 3 == 0 { None } else { Some((i % 2) as u32) };
            s.rank_lower = 0;
            s.rank_upper = if s.rank.is_some() { i as u32 % 2 } else { 1 };
            stats.push(s);
        }
        let t = rank_table(&stats);
        assert!(t.counts_sum_to_total());
        assert!(t.unknown > 0);
        assert!(t.mean_lower <= t.mean_upper);
    }

    #[test]
    fn series_are_cumulative_and_sorted() {
        let params = enumerate_parameters(20);
        let stats: Vec<_> = params.iter().map(stat_for).collect();
        let series = average_series(&stats, SeriesKind::TamagawaFinite);
        assert!(series.windows(2).all(|w| w[0].height < w[1].height));
        let avg = average_tamagawa(&stats);
        assert_eq!(series.last().unwrap().value, avg);
        let rk = average_series(&stats, SeriesKind::Rank);
        assert!(rk.iter().all(|p| p.lower.is_some() && p.upper.is_some()));
    }

    #[test]
    fn six_decimal_rendering() {
        assert_eq!(
            six_decimals(&BigRational::new(BigInt::from(-48), BigInt::from(2000))),
            "-0.024000"
        );
        assert_eq!(
            six_decimals(&BigRational::new(BigInt::from(13728), BigInt::from(1000))),
            "13.728000"
        );
        assert_eq!(
            six_decimals(&BigRational::new(BigInt::from(1), BigInt::from(3))),
            "0.333333"
        );
    }
}
