//! Annual count series, fixed-width year buckets and the small descriptive
//! statistics shared by the cohort tables.

use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Per-year counts over a contiguous, inclusive range of calendar years.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct YearSeries {
    first_year: i32,
    counts: Vec<u64>,
}

impl YearSeries {
    pub fn zeros(years: RangeInclusive<i32>) -> Self {
        let len = if years.is_empty() {
            0
        } else {
            (years.end() - years.start() + 1) as usize
        };
        YearSeries {
            first_year: *years.start(),
            counts: vec![0; len],
        }
    }

    pub fn from_counts(first_year: i32, counts: Vec<u64>) -> Self {
        YearSeries { first_year, counts }
    }

    pub fn first_year(&self) -> i32 {
        self.first_year
    }

    /// Last covered year; `first_year - 1` for an empty series.
    pub fn last_year(&self) -> i32 {
        self.first_year + self.counts.len() as i32 - 1
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn years(&self) -> RangeInclusive<i32> {
        self.first_year..=self.last_year()
    }

    /// Count for `year`, zero outside the covered range.
    pub fn get(&self, year: i32) -> u64 {
        self.slot(year).map_or(0, |i| self.counts[i])
    }

    pub fn increment(&mut self, year: i32) -> bool {
        match self.slot(year) {
            Some(i) => {
                self.counts[i] += 1;
                true
            }
            None => false,
        }
    }

    pub fn set(&mut self, year: i32, count: u64) {
        if let Some(i) = self.slot(year) {
            self.counts[i] = count;
        }
    }

    fn slot(&self, year: i32) -> Option<usize> {
        let offset = year.checked_sub(self.first_year)?;
        if offset < 0 || offset as usize >= self.counts.len() {
            None
        } else {
            Some(offset as usize)
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (i32, u64)> + '_ {
        self.counts
            .iter()
            .enumerate()
            .map(move |(i, &c)| (self.first_year + i as i32, c))
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Sum over an inclusive window; years outside the series count as zero.
    pub fn window_sum(&self, from: i32, to: i32) -> u64 {
        (from..=to).map(|y| self.get(y)).sum()
    }

    /// Two-column `year,count` CSV with a header line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("year,count\n");
        for (year, count) in self.iter() {
            out.push_str(&format!("{year},{count}\n"));
        }
        out
    }

    /// Parses the output of [`YearSeries::to_csv`]. Years must be contiguous.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut rows = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || (lineno == 0 && line.starts_with("year")) {
                continue;
            }
            let malformed = |message: &str| Error::Malformed {
                path: "<series>".into(),
                line: lineno + 1,
                message: message.to_string(),
            };
            let (y, c) = line.split_once(',').ok_or_else(|| malformed("expected year,count"))?;
            let year: i32 = y.trim().parse().map_err(|_| malformed("bad year"))?;
            let count: u64 = c.trim().parse().map_err(|_| malformed("bad count"))?;
            rows.push((year, count));
        }
        rows.sort_unstable();
        let Some(&(first, _)) = rows.first() else {
            return Ok(YearSeries::from_counts(0, Vec::new()));
        };
        let mut series = YearSeries::zeros(first..=rows.last().unwrap().0);
        for (year, count) in rows {
            series.set(year, count);
        }
        Ok(series)
    }
}

/// Left-closed, fixed-width year buckets anchored at the range start
/// (1980-1982, 1983-1985, ...). The last bucket may be shorter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bucketing {
    pub start: i32,
    pub end: i32,
    pub width: u32,
}

impl Bucketing {
    pub fn new(years: RangeInclusive<i32>, width: u32) -> Result<Self> {
        if years.is_empty() {
            return Err(Error::EmptyYearRange(*years.start(), *years.end()));
        }
        if width == 0 {
            return Err(Error::InvalidParams("bucket width must be at least 1".into()));
        }
        Ok(Bucketing {
            start: *years.start(),
            end: *years.end(),
            width,
        })
    }

    pub fn len(&self) -> usize {
        ((self.end - self.start) as u32 / self.width + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn index_of(&self, year: i32) -> Option<usize> {
        if year < self.start || year > self.end {
            return None;
        }
        Some(((year - self.start) as u32 / self.width) as usize)
    }

    pub fn bounds(&self, index: usize) -> (i32, i32) {
        let lo = self.start + (index as u32 * self.width) as i32;
        let hi = (lo + self.width as i32 - 1).min(self.end);
        (lo, hi)
    }

    pub fn label(&self, index: usize) -> String {
        let (lo, hi) = self.bounds(index);
        if lo == hi {
            lo.to_string()
        } else {
            format!("{lo}-{hi}")
        }
    }

    pub fn labels(&self) -> Vec<String> {
        (0..self.len()).map(|i| self.label(i)).collect()
    }
}

pub fn mean(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        None
    } else {
        Some(values.iter().sum::<f64>() / values.len() as f64)
    }
}

/// Sample standard deviation (n - 1 denominator); `None` below two values.
pub fn sample_sd(values: &[f64]) -> Option<f64> {
    if values.len() < 2 {
        return None;
    }
    let m = mean(values)?;
    let ss: f64 = values.iter().map(|v| (v - m) * (v - m)).sum();
    Some((ss / (values.len() - 1) as f64).sqrt())
}

/// Pearson product-moment correlation.
///
/// Fails on mismatched lengths, fewer than three points or zero variance in
/// either input rather than returning a misleading zero.
pub fn pearson(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() {
        return Err(Error::InvalidParams(format!(
            "correlation inputs differ in length ({} vs {})",
            xs.len(),
            ys.len()
        )));
    }
    if xs.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "correlation needs at least 3 pairs, got {}",
            xs.len()
        )));
    }
    let mx = mean(xs).unwrap();
    let my = mean(ys).unwrap();
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        let dx = x - mx;
        let dy = y - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::Degenerate("zero variance in correlation input".into()));
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn buckets_anchor_at_range_start() {
        let b = Bucketing::new(1980..=1994, 3).unwrap();
        assert_eq!(b.len(), 5);
        assert_eq!(
            b.labels(),
            ["1980-1982", "1983-1985", "1986-1988", "1989-1991", "1992-1994"]
        );
        assert_eq!(b.index_of(1985), Some(1));
        assert_eq!(b.index_of(1995), None);
        let partial = Bucketing::new(1980..=1984, 3).unwrap();
        assert_eq!(partial.label(1), "1983-1984");
    }

    #[test]
    fn sample_sd_of_two_values() {
        let sd = sample_sd(&[0.6, 0.8]).unwrap();
        assert!((sd - 0.02f64.sqrt()).abs() < 1e-12);
        assert_eq!(sample_sd(&[1.0]), None);
    }

    #[test]
    fn pearson_small_cases() {
        // (1,2,3) vs (3,1,2): dx=(-1,0,1), dy=(1,-1,0); sxy=-1, sxx=2, syy=2 -> -0.5
        assert!((pearson(&[1.0, 2.0, 3.0], &[3.0, 1.0, 2.0]).unwrap() + 0.5).abs() < 1e-15);
        assert!(matches!(
            pearson(&[1.0, 2.0, 3.0], &[4.0, 4.0, 4.0]),
            Err(Error::Degenerate(_))
        ));
        assert!(pearson(&[1.0, 2.0], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn series_csv_roundtrip() {
        let s = YearSeries::from_counts(1991, vec![1, 0, 4]);
        assert_eq!(YearSeries::from_csv(&s.to_csv()).unwrap(), s);
        assert_eq!(s.window_sum(1990, 1992), 1);
    }
}
