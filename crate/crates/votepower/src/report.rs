//! Decimal rendering of exact rationals and the machine-facing report
//! documents the CLI emits as tables, CSV, or JSON.
//!
//! Values stay exact until the last moment: documents carry numerator and
//! denominator strings alongside the rendering, so every output format can
//! be parsed back to the in-memory rationals without loss.

use num::{BigInt, BigRational, One, Signed, Zero};
use serde::{Deserialize, Serialize};

/// Round-half-away-from-zero decimal rendering at `precision` places.
/// "-0.00" never appears; a rounded-to-zero value drops its sign.
pub fn render_rational(x: &BigRational, precision: u32) -> String {
    let negative = x.is_negative();
    let scale = num::pow(BigInt::from(10), precision as usize);
    let scaled_num = x.numer().abs() * &scale;
    let denom = x.denom().abs();
    let mut q = &scaled_num / &denom;
    let r = &scaled_num % &denom;
    if (&r << 1) >= denom {
        q += BigInt::one();
    }
    let digits = q.to_string();
    let body = if precision == 0 {
        digits
    } else {
        let p = precision as usize;
        let padded = format!("{digits:0>width$}", width = p + 1);
        let split = padded.len() - p;
        format!("{}.{}", &padded[..split], &padded[split..])
    };
    if negative && !q.is_zero() {
        format!("-{body}")
    } else {
        body
    }
}

/// The exact rational a rendering stands for: x rounded to `precision`
/// decimal places, half away from zero.
pub fn rounded_at(x: &BigRational, precision: u32) -> BigRational {
    let scale = num::pow(BigInt::from(10), precision as usize);
    let scaled_num = x.numer().abs() * &scale;
    let denom = x.denom().abs();
    let mut q = &scaled_num / &denom;
    let r = &scaled_num % &denom;
    if (&r << 1) >= denom {
        q += BigInt::one();
    }
    if x.is_negative() {
        q = -q;
    }
    BigRational::new(q, scale)
}

/// Parse a plain decimal literal ("0.09", "1", "-0.5", "84.8") exactly.
pub fn parse_decimal(s: &str) -> Option<BigRational> {
    let s = s.trim();
    let (sign, rest) = match s.strip_prefix('-') {
        Some(r) => (-1, r),
        None => (1, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int_part, frac_part) = match rest.split_once('.') {
        Some((i, f)) => (i, f),
        None => (rest, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().all(|c| c.is_ascii_digit())
        || !frac_part.chars().all(|c| c.is_ascii_digit())
    {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let numer: BigInt = if digits.is_empty() {
        BigInt::zero()
    } else {
        digits.parse().ok()?
    };
    let denom = num::pow(BigInt::from(10), frac_part.len());
    Some(BigRational::new(BigInt::from(sign) * numer, denom))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DocParty {
    pub name: String,
    pub weight: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DocEntry {
    pub party: String,
    pub numerator: String,
    pub denominator: String,
    pub rendered: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub golden: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DocIndex {
    pub index: String,
    pub entries: Vec<DocEntry>,
    /// Party names grouped by exact value, best group first; ties share a group.
    pub ranking: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub golden_mismatches: Option<usize>,
}

/// One `compute` or `scenario` run. Field order is the serialization order;
/// identical inputs and flags serialize byte for byte.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub source: String,
    pub quota: u64,
    pub total_weight: u64,
    pub parties: Vec<DocParty>,
    pub engine: String,
    pub precision: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub version: Option<String>,
    pub indices: Vec<DocIndex>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DocSeat {
    pub party: String,
    pub share_numerator: String,
    pub share_denominator: String,
    pub share_percent: String,
    pub qualifying: bool,
    pub proportional: u64,
    pub bonus: u64,
    pub total: u64,
    pub winner: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApportionDocument {
    pub source: String,
    pub threshold: String,
    pub total_seats: u64,
    pub proportional_seats: u64,
    pub bonus_seats: u64,
    pub winner: String,
    pub entries: Vec<DocSeat>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub induced_game: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub version: Option<String>,
}

impl ReportDocument {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record([
            "party",
            "index",
            "numerator",
            "denominator",
            "rendered",
            "golden",
            "delta",
        ])
        .expect("csv header");
        for block in &self.indices {
            for e in &block.entries {
                w.write_record([
                    e.party.as_str(),
                    block.index.as_str(),
                    e.numerator.as_str(),
                    e.denominator.as_str(),
                    e.rendered.as_str(),
                    e.golden.as_deref().unwrap_or(""),
                    e.delta.as_deref().unwrap_or(""),
                ])
                .expect("csv row");
            }
        }
        String::from_utf8(w.into_inner().expect("csv flush")).expect("csv utf8")
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("source: {}\n", self.source));
        out.push_str(&format!(
            "game: quota {} of total weight {}\n",
            self.quota, self.total_weight
        ));
        let parties: Vec<String> = self
            .parties
            .iter()
            .map(|p| format!("{}({})", p.name, p.weight))
            .collect();
        out.push_str(&format!("parties: {}\n", parties.join(" ")));
        out.push_str(&format!(
            "engine: {}  precision: {}\n",
            self.engine, self.precision
        ));
        if let Some(v) = &self.version {
            out.push_str(&format!("version: {v}\n"));
        }
        for block in &self.indices {
            out.push('\n');
            out.push_str(&format!("[{}]\n", block.index));
            let has_golden = block.entries.iter().any(|e| e.golden.is_some());
            let mut rows: Vec<Vec<String>> = Vec::new();
            if has_golden {
                rows.push(vec![
                    "party".into(),
                    "value".into(),
                    "exact".into(),
                    "golden".into(),
                    "delta".into(),
                ]);
            } else {
                rows.push(vec!["party".into(), "value".into(), "exact".into()]);
            }
            for e in &block.entries {
                let exact = if e.denominator == "1" {
                    e.numerator.clone()
                } else {
                    format!("{}/{}", e.numerator, e.denominator)
                };
                let mut row = vec![e.party.clone(), e.rendered.clone(), exact];
                if has_golden {
                    row.push(e.golden.clone().unwrap_or_default());
                    row.push(e.delta.clone().unwrap_or_default());
                }
                rows.push(row);
            }
            out.push_str(&pad_rows(&rows));
            let ranking: Vec<String> = block.ranking.iter().map(|g| g.join(" = ")).collect();
            out.push_str(&format!("ranking: {}\n", ranking.join(" > ")));
            if let Some(m) = block.golden_mismatches {
                if m > 0 {
                    out.push_str(&format!("golden mismatches: {m}\n"));
                }
            }
        }
        out
    }
}

impl ApportionDocument {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record([
            "party",
            "share_numerator",
            "share_denominator",
            "share_percent",
            "qualifying",
            "proportional",
            "bonus",
            "total",
            "winner",
        ])
        .expect("csv header");
        for e in &self.entries {
            w.write_record([
                e.party.as_str(),
                e.share_numerator.as_str(),
                e.share_denominator.as_str(),
                e.share_percent.as_str(),
                if e.qualifying { "true" } else { "false" },
                &e.proportional.to_string(),
                &e.bonus.to_string(),
                &e.total.to_string(),
                if e.winner { "true" } else { "false" },
            ])
            .expect("csv row");
        }
        String::from_utf8(w.into_inner().expect("csv flush")).expect("csv utf8")
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("source: {}\n", self.source));
        out.push_str(&format!(
            "rule: {} proportional + {} bonus = {} seats, threshold {}\n",
            self.proportional_seats, self.bonus_seats, self.total_seats, self.threshold
        ));
        if let Some(v) = &self.version {
            out.push_str(&format!("version: {v}\n"));
        }
        out.push('\n');
        let mut rows: Vec<Vec<String>> = vec![vec![
            "party".into(),
            "share%".into(),
            "qualifies".into(),
            "proportional".into(),
            "bonus".into(),
            "total".into(),
        ]];
        for e in &self.entries {
            rows.push(vec![
                e.party.clone(),
                e.share_percent.clone(),
                if e.qualifying {
                    "yes".into()
                } else {
                    "no".into()
                },
                e.proportional.to_string(),
                e.bonus.to_string(),
                e.total.to_string(),
            ]);
        }
        out.push_str(&pad_rows(&rows));
        out.push_str(&format!("winner: {}\n", self.winner));
        if let Some(g) = &self.induced_game {
            out.push_str("\ninduced game file:\n");
            out.push_str(g);
        }
        out
    }
}

fn pad_rows(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(|r| r.len()).max().unwrap_or(0);
    let mut widths = vec![0usize; cols];
    for row in rows {
        for (c, cell) in row.iter().enumerate() {
            widths[c] = widths[c].max(cell.len());
        }
    }
    let mut out = String::new();
    for row in rows {
        let mut line = String::new();
        for (c, cell) in row.iter().enumerate() {
            if c > 0 {
                line.push_str("  ");
            }
            line.push_str(&format!("{cell:<width$}", width = widths[c]));
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}
