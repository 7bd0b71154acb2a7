//! Reference sets and inverted citation percentiles.
//!
//! A paper's reference set is every paper sharing its subject category and
//! publication year, the paper itself included. The inverted percentile is
//! `100 - 100 * (share of the set cited at most as often as the paper)`, so
//! the most cited paper scores 0 and top-10% papers score below 10.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// Reference sets smaller than this are flagged in reports.
pub const SMALL_REFERENCE_SET: usize = 20;

const YEAR_RANGE: std::ops::RangeInclusive<i32> = 1900..=2100;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PublicationRecord {
    pub paper_id: String,
    pub pub_year: i32,
    pub subject: String,
    pub citations: u64,
}

impl PublicationRecord {
    pub fn new(paper_id: impl Into<String>, pub_year: i32, subject: impl Into<String>, citations: u64) -> Self {
        Self { paper_id: paper_id.into(), pub_year, subject: subject.into(), citations }
    }

    pub fn key(&self) -> ReferenceKey {
        ReferenceKey { subject: self.subject.clone(), pub_year: self.pub_year }
    }

    pub fn validate(&self) -> Result<()> {
        if self.paper_id.is_empty() {
            return Err(Error::Validation("paper_id is empty".into()));
        }
        if self.subject.is_empty() {
            return Err(Error::Validation(format!("paper {} has an empty subject", self.paper_id)));
        }
        if !YEAR_RANGE.contains(&self.pub_year) {
            return Err(Error::Validation(format!(
                "paper {} has publication year {} outside 1900-2100",
                self.paper_id, self.pub_year
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ReferenceKey {
    pub subject: String,
    pub pub_year: i32,
}

impl std::fmt::Display for ReferenceKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}", self.subject, self.pub_year)
    }
}

/// Citation counts of one reference set, kept sorted. Never empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReferenceSet {
    key: ReferenceKey,
    counts: Vec<u64>,
}

impl ReferenceSet {
    pub fn new(key: ReferenceKey, mut counts: Vec<u64>) -> Result<Self> {
        if counts.is_empty() {
            return Err(domain(format!("reference set {key} is empty")));
        }
        counts.sort_unstable();
        Ok(Self { key, counts })
    }

    pub fn key(&self) -> &ReferenceKey {
        &self.key
    }

    pub fn citation_counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn size(&self) -> usize {
        self.counts.len()
    }

    fn at_or_below(&self, citations: u64) -> usize {
        self.counts.partition_point(|&c| c <= citations)
    }
}

/// Partitions records by (subject, year).
pub fn build_reference_sets(records: &[PublicationRecord]) -> Result<BTreeMap<ReferenceKey, ReferenceSet>> {
    if records.is_empty() {
        return Err(Error::EmptyDataset);
    }
    check_unique_ids(records)?;
    let mut grouped: BTreeMap<ReferenceKey, Vec<u64>> = BTreeMap::new();
    for r in records {
        grouped.entry(r.key()).or_default().push(r.citations);
    }
    grouped
        .into_iter()
        .map(|(key, counts)| Ok((key.clone(), ReferenceSet::new(key, counts)?)))
        .collect()
}

fn check_unique_ids(records: &[PublicationRecord]) -> Result<()> {
    let mut seen = BTreeSet::new();
    let mut dupes = BTreeSet::new();
    for r in records {
        if !seen.insert(r.paper_id.as_str()) {
            dupes.insert(r.paper_id.clone());
        }
    }
    if dupes.is_empty() {
        Ok(())
    } else {
        Err(Error::DuplicateIds(dupes.into_iter().collect()))
    }
}

/// Inverted percentile of a paper with `citations` within `set`.
pub fn inverted_percentile(citations: u64, set: &ReferenceSet) -> f64 {
    let n = set.size();
    let above = n - set.at_or_below(citations);
    100.0 * above as f64 / n as f64
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PercentileScore {
    pub paper_id: String,
    pub inverted_percentile: f64,
    pub reference_key: ReferenceKey,
}

/// Scores plus the reference sets too small for fine-grained percentiles.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoredDataset {
    /// Sorted by `paper_id`.
    pub scores: Vec<PercentileScore>,
    pub small_sets: Vec<(ReferenceKey, usize)>,
}

/// Builds reference sets and scores every record against its own set.
pub fn score_records(records: &[PublicationRecord]) -> Result<ScoredDataset> {
    let sets = build_reference_sets(records)?;
    let mut scores: Vec<PercentileScore> = records
        .iter()
        .map(|r| {
            let key = r.key();
            let set = &sets[&key];
            PercentileScore {
                paper_id: r.paper_id.clone(),
                inverted_percentile: inverted_percentile(r.citations, set),
                reference_key: key,
            }
        })
        .collect();
    scores.sort_by(|a, b| a.paper_id.cmp(&b.paper_id));
    let small_sets = sets
        .values()
        .filter(|s| s.size() < SMALL_REFERENCE_SET)
        .map(|s| (s.key().clone(), s.size()))
        .collect();
    Ok(ScoredDataset { scores, small_sets })
}

/// Standard deviation `(high - low) / √12` of a continuous uniform variable.
pub fn uniform_population_sd(low: f64, high: f64) -> Result<f64> {
    if !(low.is_finite() && high.is_finite()) {
        return Err(domain("uniform bounds must be finite"));
    }
    if high < low {
        return Err(domain(format!("upper bound {high} is below lower bound {low}")));
    }
    Ok((high - low) / 12f64.sqrt())
}

/// Share of scores strictly below `threshold` (10 gives the top-10% share).
pub fn top_share(scores: &[PercentileScore], threshold: f64) -> Result<f64> {
    if scores.is_empty() {
        return Err(Error::EmptyDataset);
    }
    if !(threshold > 0.0 && threshold <= 100.0) {
        return Err(domain(format!("threshold must lie in (0, 100], got {threshold}")));
    }
    let hits = scores.iter().filter(|s| s.inverted_percentile < threshold).count();
    Ok(hits as f64 / scores.len() as f64)
}
