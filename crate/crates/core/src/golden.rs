//! Published binding-energy tables and quoted percentage errors, embedded
//! verbatim so comparisons run without external files.

use std::fmt;

use crate::error::{Error, Result};

/// Screening parameters of the three column pairs, in table order.
pub const SCREENINGS: [f64; 3] = [0.01, 0.005, 0.001];

const TABLE_1: &str = include_str!("../data/table1.tsv");
const TABLE_2: &str = include_str!("../data/table2.tsv");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TableId {
    /// Semirelativistic spectrum.
    Ss,
    /// Schrödinger spectrum.
    Nr,
}

impl TableId {
    pub fn number(self) -> u32 {
        match self {
            TableId::Ss => 1,
            TableId::Nr => 2,
        }
    }

    pub fn from_number(k: u32) -> Result<Self> {
        match k {
            1 => Ok(TableId::Ss),
            2 => Ok(TableId::Nr),
            _ => Err(Error::InvalidParameter(format!("no table {k}; expected 1 or 2"))),
        }
    }

    fn source(self) -> &'static str {
        match self {
            TableId::Ss => TABLE_1,
            TableId::Nr => TABLE_2,
        }
    }
}

impl fmt::Display for TableId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "table {}", self.number())
    }
}

/// A printed binding energy together with its original spelling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Printed {
    pub value: f64,
    pub text: &'static str,
}

impl Printed {
    fn parse(text: &'static str) -> Result<Self> {
        let value = text
            .parse()
            .map_err(|_| Error::Numerical(format!("bad golden entry {text:?}")))?;
        Ok(Self { value, text })
    }

    /// Half a unit in the last printed digit.
    pub fn half_ulp(&self) -> f64 {
        let decimals = self.text.split('.').nth(1).map_or(0, str::len);
        0.5 * 10f64.powi(-(decimals as i32))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GoldenEntry {
    pub n: u32,
    pub l: u32,
    pub a: f64,
    pub approx: Printed,
    pub numeric: Printed,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GoldenTable {
    pub id: TableId,
    /// Row-major: each `(n, l)` row contributes one entry per screening value.
    pub entries: Vec<GoldenEntry>,
}

impl GoldenTable {
    pub fn get(&self, n: u32, l: u32, a: f64) -> Option<&GoldenEntry> {
        self.entries.iter().find(|e| e.n == n && e.l == l && e.a == a)
    }

    /// Distinct `(n, l)` rows in printed order.
    pub fn states(&self) -> Vec<(u32, u32)> {
        let mut out: Vec<(u32, u32)> = Vec::new();
        for e in &self.entries {
            if !out.contains(&(e.n, e.l)) {
                out.push((e.n, e.l));
            }
        }
        out
    }
}

/// Parses an embedded table. Rows whose `n` cell is blank continue the
/// previous `n`; header lines are skipped.
pub fn golden_table(id: TableId) -> Result<GoldenTable> {
    let mut entries = Vec::new();
    let mut current_n = None;
    for line in id.source().lines() {
        let cells: Vec<&'static str> = line.split('\t').map(str::trim).collect();
        if cells.len() < 8 || cells[1].parse::<u32>().is_err() {
            continue;
        }
        if !cells[0].is_empty() {
            current_n = Some(
                cells[0]
                    .parse::<u32>()
                    .map_err(|_| Error::Numerical(format!("bad n in {line:?}")))?,
            );
        }
        let n = current_n.ok_or_else(|| Error::Numerical("row without n".into()))?;
        let l = cells[1].parse::<u32>().expect("checked above");
        for (k, &a) in SCREENINGS.iter().enumerate() {
            entries.push(GoldenEntry {
                n,
                l,
                a,
                approx: Printed::parse(cells[2 + 2 * k])?,
                numeric: Printed::parse(cells[3 + 2 * k])?,
            });
        }
    }
    Ok(GoldenTable { id, entries })
}

/// `100 |E_approx - E_num| / |E_num|`.
pub fn percentage_error(approx: f64, numeric: f64) -> f64 {
    100.0 * (approx - numeric).abs() / numeric.abs()
}

/// Range of percentage errors consistent with the printed digits of both
/// entries.
pub fn percentage_error_interval(entry: &GoldenEntry) -> (f64, f64) {
    let (ha, hn) = (entry.approx.half_ulp(), entry.numeric.half_ulp());
    let mut lo = f64::INFINITY;
    let mut hi = 0.0f64;
    for sa in [-1.0, 1.0] {
        for sn in [-1.0, 1.0] {
            let p = percentage_error(entry.approx.value + sa * ha, entry.numeric.value + sn * hn);
            lo = lo.min(p);
            hi = hi.max(p);
        }
    }
    let (a0, n0) = (entry.approx.value, entry.numeric.value);
    if (a0 - n0).abs() <= ha + hn {
        lo = 0.0;
    }
    (lo, hi)
}

/// A percentage error quoted in the discussion of the semirelativistic table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuotedPercentage {
    pub n: u32,
    pub l: u32,
    pub a: f64,
    pub percent: f64,
}

const fn quoted(n: u32, l: u32, a: f64, percent: f64) -> QuotedPercentage {
    QuotedPercentage { n, l, a, percent }
}

pub const QUOTED_PERCENTAGES: [QuotedPercentage; 12] = [
    quoted(1, 0, 0.001, 0.0454),
    quoted(2, 0, 0.001, 3.403),
    quoted(2, 1, 0.001, 0.866),
    quoted(3, 0, 0.001, 6.478),
    quoted(3, 1, 0.001, 0.936),
    quoted(3, 2, 0.001, 1.292),
    quoted(1, 0, 0.01, 0.269),
    quoted(2, 0, 0.01, 3.598),
    quoted(2, 1, 0.01, 1.238),
    quoted(3, 0, 0.01, 7.206),
    quoted(3, 1, 0.01, 0.596),
    quoted(3, 2, 0.01, 0.150),
];
