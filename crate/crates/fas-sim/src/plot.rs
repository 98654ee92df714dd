//! Self-contained gnuplot scripts from a result table: outage curves on a
//! log-scale y axis, sum-rate curves on a linear one, one series per
//! scheme label. Data rides along in `$datablock` sections so the script
//! has no external inputs.

use std::fmt::Write as _;

use crate::error::{Result, SimError};
use crate::table::{Metric, ResultTable};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotKind {
    /// Network outage probability vs SNR, log-scale y.
    Outage,
    /// Average sum rate vs SNR, linear y.
    SumRate,
}

impl PlotKind {
    fn metric(&self) -> Metric {
        match self {
            PlotKind::Outage => Metric::NetworkOutage,
            PlotKind::SumRate => Metric::AvgSumRate,
        }
    }

    fn y_label(&self) -> &'static str {
        match self {
            PlotKind::Outage => "Network outage probability",
            PlotKind::SumRate => "Average sum rate (bit/s/Hz)",
        }
    }

    fn log_y(&self) -> bool {
        matches!(self, PlotKind::Outage)
    }
}

fn quote(s: &str) -> String {
    format!("'{}'", s.replace('\'', "''"))
}

/// Render the gnuplot script; the script itself writes `<stem>.png`.
///
/// Series order is sorted by scheme label; each series' points are in
/// ascending SNR. Rows carry value and CI bounds as columns 2..4.
pub fn plot_script(table: &ResultTable, kind: PlotKind, output_stem: &str) -> Result<String> {
    if output_stem.is_empty() {
        return Err(SimError::Table("plot output stem must not be empty".into()));
    }
    let metric = kind.metric();
    let labels: Vec<String> = table
        .scheme_labels()
        .into_iter()
        .filter(|l| table.rows.iter().any(|r| r.scheme_label == *l && r.metric == metric))
        .collect();
    if labels.is_empty() {
        return Err(SimError::Table(format!("no `{metric}` rows to plot")));
    }

    let mut script = String::new();
    writeln!(script, "set terminal pngcairo size 960,640").unwrap();
    writeln!(script, "set output {}", quote(&format!("{output_stem}.png"))).unwrap();
    writeln!(script, "set xlabel 'SNR (dB)'").unwrap();
    writeln!(script, "set ylabel {}", quote(kind.y_label())).unwrap();
    if kind.log_y() {
        writeln!(script, "set logscale y").unwrap();
        writeln!(script, "set format y '10^{{%L}}'").unwrap();
    }
    writeln!(script, "set grid").unwrap();
    writeln!(script, "set key bottom left").unwrap();
    writeln!(script).unwrap();

    for (i, label) in labels.iter().enumerate() {
        let mut rows: Vec<_> = table
            .rows
            .iter()
            .filter(|r| r.scheme_label == *label && r.metric == metric)
            .collect();
        rows.sort_by(|a, b| a.snr_db.total_cmp(&b.snr_db));
        writeln!(script, "$series{i} << EOD").unwrap();
        for r in rows {
            writeln!(script, "{} {:.8e} {:.8e} {:.8e}", r.snr_db, r.value, r.ci_low, r.ci_high)
                .unwrap();
        }
        writeln!(script, "EOD").unwrap();
    }

    writeln!(script).unwrap();
    let series: Vec<String> = labels
        .iter()
        .enumerate()
        .map(|(i, label)| {
            format!("$series{i} using 1:2 with linespoints title {}", quote(label))
        })
        .collect();
    writeln!(script, "plot {}", series.join(", \\\n     ")).unwrap();
    Ok(script)
}
