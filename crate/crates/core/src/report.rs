//! Prevalence statistics over classified rows.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::classify::{ClassifiedRow, Label};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorpusReport {
    pub total: u64,
    pub erc20_count: u64,
    pub administrated_count: u64,
    pub frac_erc20: f64,
    pub frac_admin_of_all: f64,
    pub frac_admin_of_erc20: f64,
}

/// Published full-corpus figures, reproduced as printed. The percentages are
/// not recomputed from the counts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReferenceFigures {
    pub total: u64,
    pub erc20_count: u64,
    pub administrated_count: u64,
    pub pct_erc20: &'static str,
    pub pct_admin_of_all: &'static str,
    pub pct_admin_of_erc20: &'static str,
}

pub const REFERENCE: ReferenceFigures = ReferenceFigures {
    total: 84_062,
    erc20_count: 54_626,
    administrated_count: 39_034,
    pct_erc20: "64.6%",
    pct_admin_of_all: "57.96%",
    pct_admin_of_erc20: "89.76%",
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Json,
}

/// A report plus the ids of rows predicted administrated without f1, which
/// were counted as other.
#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub report: CorpusReport,
    pub demoted: Vec<String>,
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

impl CorpusReport {
    pub fn from_counts(total: u64, erc20_count: u64, administrated_count: u64) -> Self {
        CorpusReport {
            total,
            erc20_count,
            administrated_count,
            frac_erc20: ratio(erc20_count, total),
            frac_admin_of_all: ratio(administrated_count, total),
            frac_admin_of_erc20: ratio(administrated_count, erc20_count),
        }
    }
}

pub fn summarize(rows: &[ClassifiedRow]) -> Summary {
    let mut erc20 = 0;
    let mut admin = 0;
    let mut demoted = Vec::new();
    for row in rows {
        if row.f1 {
            erc20 += 1;
        }
        if row.label == Label::AdministratedErc20 {
            if row.f1 {
                admin += 1;
            } else {
                demoted.push(row.id.clone());
            }
        }
    }
    Summary {
        report: CorpusReport::from_counts(rows.len() as u64, erc20, admin),
        demoted,
    }
}

#[derive(Serialize)]
struct Document<'a> {
    #[serde(flatten)]
    report: &'a CorpusReport,
    published_reference: ReferenceFigures,
}

fn percent(num: u64, den: u64) -> String {
    if den == 0 {
        "0.00% (n/a)".to_owned()
    } else {
        format!("{:.2}%", 100.0 * ratio(num, den))
    }
}

pub fn render(report: &CorpusReport, format: Format) -> String {
    match format {
        Format::Json => {
            let doc = Document {
                report,
                published_reference: REFERENCE,
            };
            let mut out = serde_json::to_string_pretty(&doc).expect("report serializes");
            out.push('\n');
            out
        }
        Format::Text => render_text(report),
    }
}

fn render_text(r: &CorpusReport) -> String {
    let other = r.total - r.erc20_count;
    let ungoverned = r.erc20_count - r.administrated_count;
    let rest = r.total - r.administrated_count;
    let mut out = String::new();
    let _ = writeln!(out, "contracts analysed: {}", r.total);
    let _ = writeln!(out);
    let _ = writeln!(out, "ERC20 vs other");
    let _ = writeln!(out, "  erc20           {:>8}  {}", r.erc20_count, percent(r.erc20_count, r.total));
    let _ = writeln!(out, "  other           {:>8}  {}", other, percent(other, r.total));
    let _ = writeln!(out);
    let _ = writeln!(out, "administrated vs ungoverned ERC20");
    let _ = writeln!(
        out,
        "  administrated   {:>8}  {}",
        r.administrated_count,
        percent(r.administrated_count, r.erc20_count)
    );
    let _ = writeln!(out, "  ungoverned      {:>8}  {}", ungoverned, percent(ungoverned, r.erc20_count));
    let _ = writeln!(out);
    let _ = writeln!(out, "administrated ERC20 vs all contracts");
    let _ = writeln!(
        out,
        "  administrated   {:>8}  {}",
        r.administrated_count,
        percent(r.administrated_count, r.total)
    );
    let _ = writeln!(out, "  rest            {:>8}  {}", rest, percent(rest, r.total));
    let _ = writeln!(out);
    let _ = writeln!(out, "published reference (full Ethereum corpus)");
    let _ = writeln!(out, "  contracts       {:>8}", REFERENCE.total);
    let _ = writeln!(out, "  erc20           {:>8}  {}", REFERENCE.erc20_count, REFERENCE.pct_erc20);
    let _ = writeln!(
        out,
        "  administrated   {:>8}  {} of all, {} of ERC20",
        REFERENCE.administrated_count, REFERENCE.pct_admin_of_all, REFERENCE.pct_admin_of_erc20
    );
    out
}

/// Reads back a JSON report. The reference block is ignored.
pub fn parse_json(text: &str) -> Result<CorpusReport, serde_json::Error> {
    serde_json::from_str(text)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(id: &str, label: Label, f1: bool) -> ClassifiedRow {
        ClassifiedRow {
            id: id.into(),
            label,
            f1,
        }
    }

    #[test]
    fn empty_is_all_zero() {
        let s = summarize(&[]);
        assert_eq!(s.report, CorpusReport::from_counts(0, 0, 0));
        assert_eq!(s.report.frac_admin_of_erc20, 0.0);
        let text = render(&s.report, Format::Text);
        assert!(text.contains("n/a"));
        assert!(!text.contains("NaN") && !text.contains("inf"));
    }

    #[test]
    fn positive_without_f1_is_demoted() {
        let rows = [
            row("a", Label::AdministratedErc20, true),
            row("b", Label::AdministratedErc20, false),
            row("c", Label::Other, true),
            row("d", Label::Other, false),
        ];
        let s = summarize(&rows);
        assert_eq!((s.report.total, s.report.erc20_count, s.report.administrated_count), (4, 2, 1));
        assert_eq!(s.demoted, ["b"]);
    }

    #[test]
    fn json_round_trip() {
        let r = CorpusReport::from_counts(7, 3, 2);
        let json = render(&r, Format::Json);
        assert_eq!(parse_json(&json).unwrap(), r);
        let value: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(value["published_reference"]["total"], 84_062);
        assert_eq!(value["published_reference"]["pct_admin_of_erc20"], "89.76%");
    }

    #[test]
    fn text_breakdown() {
        let text = render(&CorpusReport::from_counts(200, 130, 117), Format::Text);
        assert!(text.contains("65.00%"));
        assert!(text.contains("90.00%"));
        assert!(text.contains("58.50%"));
        for figure in ["64.6%", "57.96%", "89.76%", "84062", "54626", "39034"] {
            assert!(text.contains(figure), "{figure}");
        }
    }
}
