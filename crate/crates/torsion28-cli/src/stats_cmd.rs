//! CSV emission of the distribution tables and running-average series.

use crate::record::CurveRecord;
use anyhow::{bail, Result};
use num_rational::BigRational;
use num_traits::ToPrimitive;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use torsion28::stats::{
    average_series, rank_table, root_number_table, selmer_table, six_decimals, t_distribution,
    CurveStat, DistributionTable, SeriesKind,
};

/// Check that the dataset covers each cutoff completely, then write one
/// CSV per table and per series into `out_dir`. Returns the files written.
pub fn run_stats(records: &[CurveRecord], cutoffs: &[u64], out_dir: &Path) -> Result<Vec<String>> {
    if records.is_empty() {
        bail!("empty dataset");
    }
    let mut by_height: BTreeMap<u64, u64> = BTreeMap::new();
    for r in records {
        *by_height.entry(r.height).or_insert(0) += 1;
    }
    for &cut in cutoffs {
        let mut missing = Vec::new();
        for h in 2..=cut {
            let expected = torsion28::family::count_exact(h) - torsion28::family::count_exact(h - 1);
            if expected > 0 && by_height.get(&h).copied().unwrap_or(0) != expected {
                missing.push(h);
            }
        }
        if !missing.is_empty() {
            bail!(
                "dataset incomplete for cutoff {cut}: missing heights {:?}{}",
                &missing[..missing.len().min(10)],
                if missing.len() > 10 { " ..." } else { "" }
            );
        }
    }
    if records.iter().any(|r| r.rank_upper.is_none()) {
        bail!("dataset was computed with descent disabled; rank tables are unavailable");
    }

    let mut stats: Vec<CurveStat> = records.iter().map(|r| r.to_stat()).collect();
    stats.sort_by_key(|s| s.height);

    std::fs::create_dir_all(out_dir)?;
    let mut files = Vec::new();
    let mut write = |name: &str, content: String| -> Result<()> {
        let path = out_dir.join(name);
        std::fs::write(&path, content)?;
        files.push(name.to_string());
        Ok(())
    };

    // per-cutoff tables
    let mut rank_csv = String::from("cutoff,bucket,count,share\n");
    let mut selmer_csv = String::from("cutoff,dim,count,share\n");
    let mut root_csv = String::from("cutoff,root_number,count,share\n");
    let mut tdist_csv = String::from("cutoff,t_log2,count,share\n");
    let mut summary_csv = String::from(
        "cutoff,total,avg_rank_lower,avg_rank_lower_dec,avg_rank_upper,avg_rank_upper_dec,\
         avg_sel2_size,avg_sel2_size_dec,avg_root_number,avg_root_number_dec,\
         avg_tamagawa_finite,avg_tamagawa_finite_dec,t_mean,t_mean_dec,t_variance,t_variance_dec\n",
    );
    for &cut in cutoffs {
        let slice: Vec<CurveStat> = stats.iter().filter(|s| s.height <= cut).cloned().collect();
        let rt = rank_table(&slice);
        push_table(&mut rank_csv, cut, &rt, true);
        let st = selmer_table(&slice);
        push_table(&mut selmer_csv, cut, &st, false);
        let wt = root_number_table(&slice);
        push_table(&mut root_csv, cut, &wt, false);
        let tt = t_distribution(&slice);
        push_table(&mut tdist_csv, cut, &tt, false);
        let avg_t = torsion28::stats::average_tamagawa(&slice);
        writeln!(
            summary_csv,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            cut,
            slice.len(),
            rt.mean_lower,
            six_decimals(&rt.mean_lower),
            rt.mean_upper,
            six_decimals(&rt.mean_upper),
            st.mean_lower,
            six_decimals(&st.mean_lower),
            wt.mean_lower,
            six_decimals(&wt.mean_lower),
            avg_t,
            six_decimals(&avg_t),
            tt.mean_lower,
            six_decimals(&tt.mean_lower),
            tt.variance.clone().unwrap(),
            six_decimals(&tt.variance.unwrap()),
        )?;
    }
    write("rank_table.csv", rank_csv)?;
    write("selmer_table.csv", selmer_csv)?;
    write("root_number_table.csv", root_csv)?;
    write("t_distribution.csv", tdist_csv)?;
    write("summary.csv", summary_csv)?;

    // cumulative series
    let series = [
        ("series_rank.csv", SeriesKind::Rank),
        ("series_selmer_size.csv", SeriesKind::SelmerSize),
        ("series_tamagawa_finite.csv", SeriesKind::TamagawaFinite),
        (
            "series_tamagawa_with_infinity.csv",
            SeriesKind::TamagawaWithInfinity,
        ),
        ("series_root_number.csv", SeriesKind::RootNumber),
    ];
    for (name, kind) in series {
        let pts = average_series(&stats, kind);
        let mut csv = if kind == SeriesKind::Rank {
            String::from("height,value,value_dec,lower,lower_dec,upper,upper_dec\n")
        } else {
            String::from("height,value,value_dec,log10_value\n")
        };
        for pt in pts {
            if kind == SeriesKind::Rank {
                let lo = pt.lower.unwrap();
                let hi = pt.upper.unwrap();
                writeln!(
                    csv,
                    "{},{},{},{},{},{},{}",
                    pt.height,
                    pt.value,
                    six_decimals(&pt.value),
                    lo,
                    six_decimals(&lo),
                    hi,
                    six_decimals(&hi)
                )?;
            } else {
                let log10 = pt
                    .value
                    .to_f64()
                    .filter(|v| *v > 0.0)
                    .map(|v| format!("{:.6}", v.log10()))
                    .unwrap_or_default();
                writeln!(
                    csv,
                    "{},{},{},{}",
                    pt.height,
                    pt.value,
                    six_decimals(&pt.value),
                    log10
                )?;
            }
        }
        write(name, csv)?;
    }
    Ok(files)
}

fn push_table(csv: &mut String, cutoff: u64, table: &DistributionTable, with_unknown: bool) {
    for (bucket, count) in &table.buckets {
        let share = BigRational::new((*count).into(), table.total.into());
        writeln!(csv, "{cutoff},{bucket},{count},{}", six_decimals(&share)).unwrap();
    }
    if with_unknown {
        let share = BigRational::new(table.unknown.into(), table.total.into());
        writeln!(
            csv,
            "{cutoff},unknown,{},{}",
            table.unknown,
            six_decimals(&share)
        )
        .unwrap();
    }
}
