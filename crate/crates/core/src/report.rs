//! Rendering comparison results as text tables, CSV and JSON.
//!
//! CSV and JSON carry the same numbers at full round-trip precision. The
//! text table is for humans: means get six decimals and p-values below
//! `1e-16` print as `<1e-16`.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::hypothesis::{Outcome, TestResult, WelchResult, COMBINED_LABEL};
use crate::regions::RegionKind;

/// Smallest p-value shown as a number in text tables.
pub const P_DISPLAY_FLOOR: f64 = 1e-16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Table,
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "table" => Ok(OutputFormat::Table),
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(domain(format!("unknown format `{other}` (expected table, csv or json)"))),
        }
    }
}

/// Everything a comparison run produced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub n_samples: usize,
    pub markers: Vec<String>,
    /// Marker rows ignored because their sample had no scores.
    pub dropped_marker_rows: usize,
    pub results: Vec<TestResult>,
}

impl Report {
    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Table => self.to_table(),
            OutputFormat::Csv => self.to_csv(),
            OutputFormat::Json => self.to_json(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("kind,k,marker,mean_a,mean_b,var_a,var_b,n_a,n_b,t,df,p,verdict\n");
        for r in &self.results {
            let rows = r
                .per_marker
                .iter()
                .map(|m| (m.marker.as_str(), &m.result, m.verdict))
                .chain(std::iter::once((COMBINED_LABEL, &r.combined, r.verdict)));
            for (name, w, v) in rows {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{},{},{},{},{},{},{}",
                    r.kind.short_name(),
                    r.k,
                    csv_field(name),
                    fmt_num(w.mean_a),
                    fmt_num(w.mean_b),
                    fmt_num(w.var_a),
                    fmt_num(w.var_b),
                    w.n_a,
                    w.n_b,
                    fmt_opt(w.t),
                    fmt_opt(w.df),
                    fmt_opt(w.p),
                    v
                );
            }
        }
        out
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "Samples: {}   Markers: {}   Dropped marker rows: {}",
            self.n_samples,
            self.markers.len(),
            self.dropped_marker_rows
        );
        out.push('\n');

        let summary: Vec<[String; 5]> = self
            .results
            .iter()
            .map(|r| {
                [
                    format!("{} Test, {}", r.kind, r.k),
                    format!("{:.6}", r.combined.mean_a),
                    format!("{:.6}", r.combined.mean_b),
                    fmt_p_display(r.combined.p),
                    r.verdict.to_string(),
                ]
            })
            .collect();
        push_table(
            &mut out,
            ["Test", "Avg CMS A", "Avg CMS B", "p-value", "Result"],
            &summary,
        );
        out.push_str("A = reference model (up-movers for Movers), B = test model (down-movers for Movers)\n");

        for r in &self.results {
            let _ = write!(out, "\n{} Test (K={})\n", r.kind, r.k);
            let (ha, hb) = column_names(r.kind);
            let rows: Vec<[String; 5]> = r
                .per_marker
                .iter()
                .map(|m| (m.marker.as_str(), &m.result, m.verdict))
                .chain(std::iter::once((COMBINED_LABEL, &r.combined, r.verdict)))
                .map(|(name, w, v)| detail_row(name, w, v))
                .collect();
            push_table(&mut out, ["Marker", ha, hb, "p-value", "Result"], &rows);
        }
        out
    }
}

fn column_names(kind: RegionKind) -> (&'static str, &'static str) {
    match kind {
        RegionKind::Movers => ("Avg Up-Movers", "Avg Down-Movers"),
        _ => ("Avg Reference", "Avg Test"),
    }
}

fn detail_row(name: &str, w: &WelchResult, v: Outcome) -> [String; 5] {
    [
        name.to_owned(),
        format!("{:.6}", w.mean_a),
        format!("{:.6}", w.mean_b),
        fmt_p_display(w.p),
        v.to_string(),
    ]
}

fn push_table(out: &mut String, header: [&str; 5], rows: &[[String; 5]]) {
    let mut widths = header.map(str::len);
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let line = |out: &mut String, cells: [&str; 5]| {
        let _ = writeln!(
            out,
            "{:<w0$} | {:>w1$} | {:>w2$} | {:>w3$} | {:^w4$}",
            cells[0],
            cells[1],
            cells[2],
            cells[3],
            cells[4],
            w0 = widths[0],
            w1 = widths[1],
            w2 = widths[2],
            w3 = widths[3],
            w4 = widths[4],
        );
    };
    line(out, header);
    let total = widths.iter().sum::<usize>() + 3 * 4;
    out.push_str(&"-".repeat(total));
    out.push('\n');
    for row in rows {
        line(out, [&row[0], &row[1], &row[2], &row[3], &row[4]]);
    }
}

/// p-value for text tables.
pub fn fmt_p_display(p: Option<f64>) -> String {
    match p {
        None => "NaN".into(),
        Some(p) if p < P_DISPLAY_FLOOR => "<1e-16".into(),
        Some(p) if p >= 1e-3 => format!("{p:.6}"),
        Some(p) => format!("{p:.2e}"),
    }
}

/// Shortest representation that parses back to the same `f64`.
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        "NaN".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else if x == 0.0 || (1e-5..1e16).contains(&x.abs()) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map_or_else(|| "NaN".into(), fmt_num)
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_owned()
    }
}

/// Serde adapter for `Option<f64>`: `None` is `null`, infinities are the
/// strings `"inf"` / `"-inf"`.
pub(crate) mod opt_float {
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            None => s.serialize_none(),
            Some(x) if x.is_finite() => s.serialize_f64(*x),
            Some(x) if x.is_nan() => s.serialize_none(),
            Some(x) => s.serialize_str(if *x > 0.0 { "inf" } else { "-inf" }),
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(f64),
        Str(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<f64>, D::Error> {
        match Option::<Repr>::deserialize(d)? {
            None => Ok(None),
            Some(Repr::Num(x)) => Ok(Some(x)),
            Some(Repr::Str(s)) => match s.as_str() {
                "inf" => Ok(Some(f64::INFINITY)),
                "-inf" => Ok(Some(f64::NEG_INFINITY)),
                other => Err(D::Error::custom(format!("invalid number `{other}`"))),
            },
        }
    }
}
