//! CSV and text reporting for experiment results. Every CSV starts with
//! `#`-prefixed comment lines recording the fully resolved configuration, so
//! output files are self-describing and reproducible from their own header.

use std::io::{self, Write};

use crate::complexity::ComplexityReport;
use crate::experiments::{ExperimentConfig, MismatchComparison, RankSweep, RunAlgorithm};
use crate::metrics::SinrCurve;

/// Format with `digits` significant digits in plain decimal notation.
pub fn format_significant(value: f64, digits: usize) -> String {
    if !value.is_finite() {
        return value.to_string();
    }
    if value == 0.0 {
        return format!("{:.*}", digits.saturating_sub(1), 0.0);
    }
    let magnitude = value.abs().log10().floor() as i32;
    let decimals = (digits as i32 - 1 - magnitude).max(0) as usize;
    format!("{value:.decimals$}")
}

fn write_config_header<W: Write>(out: &mut W, config: &ExperimentConfig) -> io::Result<()> {
    for line in config.to_key_values().lines() {
        writeln!(out, "# {line}")?;
    }
    Ok(())
}

/// One column per algorithm, one row per snapshot.
pub fn write_sinr_csv<W: Write>(
    out: &mut W,
    config: &ExperimentConfig,
    curves: &[(RunAlgorithm, SinrCurve)],
) -> io::Result<()> {
    write_config_header(out, config)?;
    let labels: Vec<&str> = curves.iter().map(|(alg, _)| alg.label()).collect();
    writeln!(out, "snapshot,{}", labels.join(","))?;
    let n = curves.first().map_or(0, |(_, c)| c.sinr_db.len());
    for i in 0..n {
        let mut row = (i + 1).to_string();
        for (_, curve) in curves {
            row.push(',');
            row.push_str(&format_significant(curve.sinr_db[i], 6));
        }
        writeln!(out, "{row}")?;
    }
    Ok(())
}

/// One row per rank with the final-snapshot SINR per algorithm.
pub fn write_rank_csv<W: Write>(
    out: &mut W,
    config: &ExperimentConfig,
    sweep: &RankSweep,
) -> io::Result<()> {
    write_config_header(out, config)?;
    let labels: Vec<&str> = sweep.algorithms.iter().map(|a| a.label()).collect();
    writeln!(out, "rank,{}", labels.join(","))?;
    for (rank, row) in sweep.ranks.iter().zip(&sweep.final_sinr_db) {
        let mut line = rank.to_string();
        for value in row {
            line.push(',');
            line.push_str(&format_significant(*value, 6));
        }
        writeln!(out, "{line}")?;
    }
    Ok(())
}

/// Paired ideal/mismatched columns per algorithm, one row per snapshot.
pub fn write_mismatch_csv<W: Write>(
    out: &mut W,
    config: &ExperimentConfig,
    comparison: &MismatchComparison,
) -> io::Result<()> {
    write_config_header(out, config)?;
    let mut labels = Vec::new();
    for (alg, _) in &comparison.ideal {
        labels.push(format!("{}_ideal", alg.label()));
    }
    for (alg, _) in &comparison.mismatched {
        labels.push(format!("{}_mismatched", alg.label()));
    }
    writeln!(out, "snapshot,{}", labels.join(","))?;
    let n = comparison
        .ideal
        .first()
        .map_or(0, |(_, c)| c.sinr_db.len());
    for i in 0..n {
        let mut row = (i + 1).to_string();
        for (_, curve) in comparison.ideal.iter().chain(&comparison.mismatched) {
            row.push(',');
            row.push_str(&format_significant(curve.sinr_db[i], 6));
        }
        writeln!(out, "{row}")?;
    }
    Ok(())
}

/// One row per algorithm family.
pub fn write_complexity_csv<W: Write>(
    out: &mut W,
    config: &ExperimentConfig,
    reports: &[ComplexityReport],
) -> io::Result<()> {
    write_config_header(out, config)?;
    writeln!(out, "algorithm,additions,multiplications")?;
    for report in reports {
        writeln!(
            out,
            "{},{},{}",
            report.algorithm, report.additions, report.multiplications
        )?;
    }
    Ok(())
}

/// Aligned text rendition of the complexity table.
pub fn complexity_text_table(reports: &[ComplexityReport]) -> String {
    let name_width = reports
        .iter()
        .map(|r| r.algorithm.label().len())
        .max()
        .unwrap_or(0)
        .max("Algorithm".len());
    let mut out = String::new();
    out.push_str(&format!(
        "{:<name_width$}  {:>12}  {:>15}\n",
        "Algorithm", "Additions", "Multiplications"
    ));
    for report in reports {
        out.push_str(&format!(
            "{:<name_width$}  {:>12}  {:>15}\n",
            report.algorithm.label(),
            report.additions,
            report.multiplications
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::{
        run_complexity_table, run_sinr_vs_snapshots, ExperimentConfig, RankSpec,
    };

    fn small_config() -> ExperimentConfig {
        ExperimentConfig {
            num_sensors: 8,
            num_sources: 2,
            rank: RankSpec::Single(2),
            num_snapshots: 10,
            num_runs: 1,
            algorithms: vec![RunAlgorithm::JioCcm],
            ..ExperimentConfig::default()
        }
    }

    #[test]
    fn significant_digit_formatting() {
        assert_eq!(format_significant(25.051499, 6), "25.0515");
        assert_eq!(format_significant(-0.00123456, 6), "-0.00123456");
        assert_eq!(format_significant(123456.7, 6), "123457");
        assert_eq!(format_significant(0.0, 6), "0.00000");
        assert_eq!(format_significant(-100.0, 6), "-100.000");
    }

    #[test]
    fn sinr_csv_shape_matches_contract() {
        // Single algorithm, K = 1, N = 10: ten data rows, two columns.
        let config = small_config();
        let curves = run_sinr_vs_snapshots(&config).unwrap();
        let mut buffer = Vec::new();
        write_sinr_csv(&mut buffer, &config, &curves).unwrap();
        let text = String::from_utf8(buffer).unwrap();
        let data_rows: Vec<&str> = text
            .lines()
            .filter(|l| !l.starts_with('#') && !l.starts_with("snapshot"))
            .collect();
        assert_eq!(data_rows.len(), 10);
        for row in data_rows {
            assert_eq!(row.split(',').count(), 2);
        }
        // Self-describing header records the config.
        assert!(text.lines().any(|l| l == "# seed = 1"));
        assert!(text.lines().any(|l| l == "# m = 8"));
    }

    #[test]
    fn complexity_csv_has_nine_data_rows() {
        let config = small_config();
        let reports = run_complexity_table(&config).unwrap();
        let mut buffer = Vec::new();
        write_complexity_csv(&mut buffer, &config, &reports).unwrap();
        let text = String::from_utf8(buffer).unwrap();
        let data_rows = text
            .lines()
            .filter(|l| !l.starts_with('#') && !l.starts_with("algorithm"))
            .count();
        assert_eq!(data_rows, 9);
    }

    #[test]
    fn csv_output_is_deterministic() {
        let config = small_config();
        let mut first = Vec::new();
        write_sinr_csv(
            &mut first,
            &config,
            &run_sinr_vs_snapshots(&config).unwrap(),
        )
        .unwrap();
        let mut second = Vec::new();
        write_sinr_csv(
            &mut second,
            &config,
            &run_sinr_vs_snapshots(&config).unwrap(),
        )
        .unwrap();
        assert_eq!(first, second);
    }

    #[test]
    fn text_table_lists_all_algorithms_aligned() {
        let config = small_config();
        let reports = run_complexity_table(&config).unwrap();
        let table = complexity_text_table(&reports);
        assert_eq!(table.lines().count(), 10);
        assert!(table.contains("JIO-CCM-GS"));
    }
}
