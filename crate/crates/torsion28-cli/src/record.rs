//! The per-curve dataset row and its computation.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use torsion28::descent::{analyze_curve, DescentConfig};
use torsion28::family::{
    conductor, model_minimal_integral, model_minimal_short, naive_height, Parameter,
};
use torsion28::local::{bad_primes, reduction_type, tamagawa_ratio, ReductionKind};
use torsion28::stats::CurveStat;

/// Reduction data at one bad prime.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct LocalRecord {
    pub p: u64,
    pub v_delta: u32,
    /// "good" | "split" | "nonsplit"
    pub kind: String,
    pub c_p: u64,
    /// log2 of the local Tamagawa-ratio factor (-1, 0 or 1).
    pub ratio_log2: i8,
    pub w_p: i8,
}

/// One JSONL row. Big integers are decimal strings so downstream tools
/// never lose precision. Field order is fixed and the serialization is
/// byte-stable.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct CurveRecord {
    pub a: u64,
    pub b: u64,
    #[serde(rename = "S")]
    pub s: u64,
    #[serde(rename = "T")]
    pub t: u64,
    pub height: u64,
    pub naive_height: String,
    pub conductor: String,
    /// Minimal short Weierstrass model y^2 = x^3 - A x + B.
    #[serde(rename = "A")]
    pub min_a: String,
    #[serde(rename = "B")]
    pub min_b: String,
    /// Factorization of the minimal discriminant as [prime, exponent] pairs.
    pub disc_factors: Vec<(u64, u32)>,
    pub local: Vec<LocalRecord>,
    pub tamagawa_product_finite: String,
    pub tamagawa_product_with_infinity: String,
    pub t_log2: i64,
    pub root_number: i8,
    pub sel_phi_e: Option<u32>,
    pub sel_phihat_ep: Option<u32>,
    pub sel_phi_ep: Option<u32>,
    pub sel_phihat_epp: Option<u32>,
    pub sel2_e: Option<u32>,
    pub sel2_ep: Option<u32>,
    pub sel2_epp: Option<u32>,
    pub rank_lower: u32,
    /// Absent when descent was disabled for the run.
    pub rank_upper: Option<u32>,
    pub rank: Option<u32>,
    pub parity_conditional: bool,
}

/// How much descent work the pipeline performs per curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SelmerMode {
    Off,
    Isogeny,
    Full,
}

impl std::str::FromStr for SelmerMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "off" => Ok(SelmerMode::Off),
            "isogeny" => Ok(SelmerMode::Isogeny),
            "full" => Ok(SelmerMode::Full),
            other => Err(format!("unknown selmer mode {other:?}")),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ComputeConfig {
    pub selmer: SelmerMode,
    pub point_search_bound: u64,
}

impl Default for ComputeConfig {
    fn default() -> Self {
        ComputeConfig {
            selmer: SelmerMode::Isogeny,
            point_search_bound: 576,
        }
    }
}

pub fn compute_record(p: &Parameter, cfg: &ComputeConfig) -> CurveRecord {
    let st = p.st_pair();
    let (min_a, min_b) = model_minimal_short(p);
    let disc = model_minimal_integral(p).discriminant();
    let disc_factors: Vec<(u64, u32)> = torsion28::arith::factorize(&disc)
        .expect("nonzero discriminant")
        .iter()
        .map(|(q, e)| (to_u64(q), *e))
        .collect();
    let local: Vec<LocalRecord> = bad_primes(p)
        .into_iter()
        .map(|q| {
            let inv = reduction_type(p, q).expect("prime");
            LocalRecord {
                p: q,
                v_delta: inv.v_delta,
                kind: match inv.kind {
                    ReductionKind::Good => "good",
                    ReductionKind::SplitMultiplicative => "split",
                    ReductionKind::NonsplitMultiplicative => "nonsplit",
                }
                .to_string(),
                c_p: inv.c_p,
                ratio_log2: if inv.ratio_factor == num_rational::Rational64::new(1, 2) {
                    -1
                } else if inv.ratio_factor == num_rational::Rational64::from_integer(2) {
                    1
                } else {
                    0
                },
                w_p: inv.w_p,
            }
        })
        .collect();
    let summary = tamagawa_ratio(p);
    let with_inf: BigInt = &summary.finite_product * 2;

    let mut rec = CurveRecord {
        a: p.a(),
        b: p.b(),
        s: st.s(),
        t: st.t(),
        height: p.height(),
        naive_height: naive_height(p).to_string(),
        conductor: conductor(p).to_string(),
        min_a: min_a.to_string(),
        min_b: min_b.to_string(),
        disc_factors,
        local,
        tamagawa_product_finite: summary.finite_product.to_string(),
        tamagawa_product_with_infinity: with_inf.to_string(),
        t_log2: summary.t_log2,
        root_number: torsion28::local::root_number(p),
        sel_phi_e: None,
        sel_phihat_ep: None,
        sel_phi_ep: None,
        sel_phihat_epp: None,
        sel2_e: None,
        sel2_ep: None,
        sel2_epp: None,
        rank_lower: 0,
        rank_upper: None,
        rank: None,
        parity_conditional: false,
    };

    if cfg.selmer != SelmerMode::Off {
        let dcfg = DescentConfig {
            torsor_uv_bound: (cfg.point_search_bound as f64).sqrt().ceil() as u32,
            curve_x_bound: 0,
            compute_sel2: cfg.selmer == SelmerMode::Full,
        };
        let analysis = analyze_curve(p, &dcfg);
        rec.sel_phi_e = Some(analysis.descents.pair1.sel_phi.dim());
        rec.sel_phihat_ep = Some(analysis.descents.pair1.sel_phi_hat.dim());
        rec.sel_phi_ep = Some(analysis.descents.pair2.sel_phi.dim());
        rec.sel_phihat_epp = Some(analysis.descents.pair2.sel_phi_hat.dim());
        if let Some(dims) = analysis.sel2_dims {
            rec.sel2_e = Some(dims[0]);
            rec.sel2_ep = Some(dims[1]);
            rec.sel2_epp = Some(dims[2]);
        }
        rec.rank_lower = analysis.bounds.lower;
        rec.rank_upper = Some(analysis.bounds.upper);
        if let Some((rank, conditional)) = analysis.bounds.settled() {
            rec.rank = Some(rank);
            rec.parity_conditional = conditional;
        }
    }
    rec
}

fn to_u64(q: &BigInt) -> u64 {
    use num_traits::ToPrimitive;
    q.to_u64().expect("prime fits in 64 bits")
}

impl CurveRecord {
    pub fn to_stat(&self) -> CurveStat {
        CurveStat {
            height: self.height,
            rank_lower: self.rank_lower,
            rank_upper: self.rank_upper.unwrap_or(self.rank_lower),
            rank: self.rank,
            sel2_dim: self.sel2_e,
            tamagawa_finite: self
                .tamagawa_product_finite
                .parse()
                .expect("decimal integer"),
            t_log2: self.t_log2,
            root_number: self.root_number,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn record_for_1_2() {
        let p = Parameter::new(1, 2).unwrap();
        let rec = compute_record(&p, &ComputeConfig::default());
        assert_eq!(rec.tamagawa_product_finite, "512");
        assert_eq!(rec.tamagawa_product_with_infinity, "1024");
        assert_eq!(rec.t_log2, -1);
        assert_eq!(rec.root_number, 1);
        assert_eq!(rec.min_a, "1386747");
        assert_eq!(rec.min_b, "368636886");
        assert_eq!(rec.conductor, "210");
        assert_eq!(rec.naive_height, "10667230914617018892");
        assert_eq!(rec.disc_factors, vec![(2, 8), (3, 8), (5, 4), (7, 2)]);
        assert_eq!(rec.rank, Some(0));
        assert!(!rec.parity_conditional);
    }

    #[test]
    fn serialization_roundtrip_and_stability() {
        let p = Parameter::new(2, 3).unwrap();
        let rec = compute_record(&p, &ComputeConfig::default());
        let line = serde_json::to_string(&rec).unwrap();
        let back: CurveRecord = serde_json::from_str(&line).unwrap();
        assert_eq!(rec, back);
        // byte-stable
        assert_eq!(line, serde_json::to_string(&back).unwrap());
        // big integers as strings
        assert!(line.contains("\"naive_height\":\""));
    }
}
