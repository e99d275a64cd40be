//! Incident-record ingestion and timing statistics. Reads directories of
//! VERIS-style JSON documents (one incident per file), keeps the incidents
//! matching a set of action categories, normalizes the free-form timeline
//! durations to days, and reduces them to summary statistics and fixed-width
//! histograms. Ingestion is total over messy data: malformed documents are
//! counted and skipped, never fatal.

use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::collections::BTreeSet;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use thiserror::Error;

/// The seven top-level action categories an incident can carry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ActionCategory {
    Malware,
    Hacking,
    Social,
    Misuse,
    Physical,
    Error,
    Environmental,
}

impl ActionCategory {
    pub const ALL: [ActionCategory; 7] = [
        ActionCategory::Malware,
        ActionCategory::Hacking,
        ActionCategory::Social,
        ActionCategory::Misuse,
        ActionCategory::Physical,
        ActionCategory::Error,
        ActionCategory::Environmental,
    ];

    fn key(self) -> &'static str {
        match self {
            ActionCategory::Malware => "malware",
            ActionCategory::Hacking => "hacking",
            ActionCategory::Social => "social",
            ActionCategory::Misuse => "misuse",
            ActionCategory::Physical => "physical",
            ActionCategory::Error => "error",
            ActionCategory::Environmental => "environmental",
        }
    }
}

impl fmt::Display for ActionCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

impl FromStr for ActionCategory {
    type Err = VerisError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let needle = s.trim().to_ascii_lowercase();
        ActionCategory::ALL
            .into_iter()
            .find(|c| c.key() == needle)
            .ok_or(VerisError::UnknownAction { name: s.to_owned() })
    }
}

/// The four duration-bearing timeline sub-fields of an incident.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TimelineField {
    Compromise,
    Exfiltration,
    Discovery,
    Containment,
}

impl TimelineField {
    pub const ALL: [TimelineField; 4] = [
        TimelineField::Compromise,
        TimelineField::Exfiltration,
        TimelineField::Discovery,
        TimelineField::Containment,
    ];

    fn key(self) -> &'static str {
        match self {
            TimelineField::Compromise => "compromise",
            TimelineField::Exfiltration => "exfiltration",
            TimelineField::Discovery => "discovery",
            TimelineField::Containment => "containment",
        }
    }
}

impl fmt::Display for TimelineField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

impl FromStr for TimelineField {
    type Err = VerisError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let needle = s.trim().to_ascii_lowercase();
        TimelineField::ALL
            .into_iter()
            .find(|c| c.key() == needle)
            .ok_or(VerisError::UnknownField { name: s.to_owned() })
    }
}

/// A timeline entry exactly as it appeared in the source document: a unit
/// string and an optional numeric value (records often state only the unit).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawTiming {
    pub unit: Option<String>,
    pub value: Option<f64>,
}

/// One incident, reduced to the fields the statistics need.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IncidentRecord {
    pub incident_id: String,
    pub incident_year: i32,
    pub actions: BTreeSet<ActionCategory>,
    pub compromise: Option<RawTiming>,
    pub exfiltration: Option<RawTiming>,
    pub discovery: Option<RawTiming>,
    pub containment: Option<RawTiming>,
}

impl IncidentRecord {
    /// The raw timeline entry for `field`, if the document carried one.
    pub fn timing(&self, field: TimelineField) -> Option<&RawTiming> {
        match field {
            TimelineField::Compromise => self.compromise.as_ref(),
            TimelineField::Exfiltration => self.exfiltration.as_ref(),
            TimelineField::Discovery => self.discovery.as_ref(),
            TimelineField::Containment => self.containment.as_ref(),
        }
    }
}

/// Documents dropped during parsing, by reason.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkipReport {
    pub malformed_json: usize,
    pub missing_year: usize,
    pub no_action: usize,
}

impl SkipReport {
    pub fn total(&self) -> usize {
        self.malformed_json + self.missing_year + self.no_action
    }
}

/// Result of scanning a directory: the retained records plus the skip
/// tallies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParsedIncidents {
    pub records: Vec<IncidentRecord>,
    pub skipped: SkipReport,
}

/// Errors surfaced by this module; everything else is handled by skipping.
#[derive(Debug, Error)]
pub enum VerisError {
    #[error("cannot read incident directory {path}: {source}")]
    SourceUnreadable {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(
        "unrecognized action category {name:?} (expected one of malware, hacking, \
         social, misuse, physical, error, environmental)"
    )]
    UnknownAction { name: String },
    #[error(
        "unrecognized timeline field {name:?} (expected one of compromise, \
         exfiltration, discovery, containment)"
    )]
    UnknownField { name: String },
}

fn raw_timing(doc: &Value, name: &str) -> Option<RawTiming> {
    let obj = doc.get("timeline")?.get(name)?.as_object()?;
    Some(RawTiming {
        unit: obj.get("unit").and_then(Value::as_str).map(str::to_owned),
        value: obj.get("value").and_then(Value::as_f64),
    })
}

fn record_from_document(doc: &Value, fallback_id: &str) -> Result<IncidentRecord, &'static str> {
    let year = doc
        .get("timeline")
        .and_then(|t| t.get("incident"))
        .and_then(|i| i.get("year"))
        .and_then(Value::as_i64)
        .and_then(|y| i32::try_from(y).ok())
        .ok_or("missing mandatory incident year")?;
    let mut actions = BTreeSet::new();
    if let Some(map) = doc.get("action").and_then(Value::as_object) {
        for category in ActionCategory::ALL {
            if map.contains_key(category.key()) {
                actions.insert(category);
            }
        }
    }
    if actions.is_empty() {
        return Err("no recognized action category");
    }
    let incident_id = doc
        .get("incident_id")
        .and_then(Value::as_str)
        .unwrap_or(fallback_id)
        .to_owned();
    Ok(IncidentRecord {
        incident_id,
        incident_year: year,
        actions,
        compromise: raw_timing(doc, "compromise"),
        exfiltration: raw_timing(doc, "exfiltration"),
        discovery: raw_timing(doc, "discovery"),
        containment: raw_timing(doc, "containment"),
    })
}

/// Reads every `*.json` document under `dir` (sorted by file name, so output
/// order is stable) and extracts incident records.
///
/// Unreadable or malformed documents, documents missing the mandatory
/// incident year, and documents with no recognized action category are
/// skipped with a logged warning and tallied in the report. Only an
/// unreadable directory is a hard error.
pub fn parse_incidents(dir: &Path) -> Result<ParsedIncidents, VerisError> {
    let unreadable = |source| VerisError::SourceUnreadable {
        path: dir.to_owned(),
        source,
    };
    let mut paths: Vec<PathBuf> = Vec::new();
    for entry in fs::read_dir(dir).map_err(unreadable)? {
        let path = entry.map_err(unreadable)?.path();
        let is_json = path
            .extension()
            .and_then(|e| e.to_str())
            .is_some_and(|e| e.eq_ignore_ascii_case("json"));
        if is_json {
            paths.push(path);
        }
    }
    paths.sort();

    let mut records = Vec::new();
    let mut skipped = SkipReport::default();
    for path in paths {
        let text = match fs::read_to_string(&path) {
            Ok(text) => text,
            Err(err) => {
                log::warn!("skipping {}: unreadable ({err})", path.display());
                skipped.malformed_json += 1;
                continue;
            }
        };
        let doc: Value = match serde_json::from_str(&text) {
            Ok(doc @ Value::Object(_)) => doc,
            Ok(_) => {
                log::warn!("skipping {}: document is not a JSON object", path.display());
                skipped.malformed_json += 1;
                continue;
            }
            Err(err) => {
                log::warn!("skipping {}: malformed JSON ({err})", path.display());
                skipped.malformed_json += 1;
                continue;
            }
        };
        let fallback_id = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        match record_from_document(&doc, &fallback_id) {
            Ok(record) => records.push(record),
            Err(reason) => {
                log::warn!("skipping {}: {reason}", path.display());
                if reason.contains("year") {
                    skipped.missing_year += 1;
                } else {
                    skipped.no_action += 1;
                }
            }
        }
    }
    Ok(ParsedIncidents { records, skipped })
}

/// Keeps the records whose action set intersects `wanted`, deduplicated by
/// incident id (first occurrence wins) so multi-category incidents count
/// once.
pub fn filter_by_actions(
    records: &[IncidentRecord],
    wanted: &BTreeSet<ActionCategory>,
) -> Vec<IncidentRecord> {
    let mut seen = BTreeSet::new();
    records
        .iter()
        .filter(|r| r.actions.iter().any(|a| wanted.contains(a)))
        .filter(|r| seen.insert(r.incident_id.clone()))
        .cloned()
        .collect()
}

/// The malicious-incident filter: keeps records with a malware or hacking
/// action, deduplicated by incident id.
pub fn filter_malicious(records: &[IncidentRecord]) -> Vec<IncidentRecord> {
    let wanted = BTreeSet::from([ActionCategory::Malware, ActionCategory::Hacking]);
    filter_by_actions(records, &wanted)
}

/// Days per source unit. The defaults use the flat 30-day month / 365-day
/// year convention; [`ConversionTable::calendar_mean`] swaps in mean
/// calendar lengths for sensitivity checks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConversionTable {
    pub seconds: f64,
    pub minutes: f64,
    pub hours: f64,
    pub days: f64,
    pub weeks: f64,
    pub months: f64,
    pub years: f64,
}

impl ConversionTable {
    pub fn standard() -> Self {
        ConversionTable {
            seconds: 1.0 / 86400.0,
            minutes: 1.0 / 1440.0,
            hours: 1.0 / 24.0,
            days: 1.0,
            weeks: 7.0,
            months: 30.0,
            years: 365.0,
        }
    }

    /// Mean calendar month (30.44 days) and Julian year (365.25 days).
    pub fn calendar_mean() -> Self {
        ConversionTable {
            months: 30.44,
            years: 365.25,
            ..ConversionTable::standard()
        }
    }
}

impl Default for ConversionTable {
    fn default() -> Self {
        ConversionTable::standard()
    }
}

/// Knobs for [`extract_durations`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExtractOptions {
    pub conversion: ConversionTable,
    /// Containment durations above this many days are excluded as outliers;
    /// `None` disables the cap. The default (nine years) drops the one
    /// famous decade-long containment entry while keeping everything
    /// plausible.
    pub containment_cap_days: Option<f64>,
}

impl Default for ExtractOptions {
    fn default() -> Self {
        ExtractOptions {
            conversion: ConversionTable::standard(),
            containment_cap_days: Some(9.0 * 365.0),
        }
    }
}

/// One usable duration, normalized to days, with the raw fields it came
/// from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DurationSample {
    pub field: TimelineField,
    pub days: f64,
    pub unit_raw: String,
    pub value_raw: f64,
}

/// Entries dropped by [`extract_durations`], by reason. The tallies plus the
/// sample count always add back up to the input record count.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExclusionCounts {
    /// The record carries no entry for the requested field.
    pub field_absent: usize,
    /// Unit is NA, Unknown, or Never.
    pub unknown_unit: usize,
    /// Unit is usable but no numeric value was given.
    pub unit_only: usize,
    /// Unit string missing or not in the conversion table.
    pub unrecognized_unit: usize,
    /// Value present but zero, negative, or not finite.
    pub non_positive_value: usize,
    /// Containment duration above the configured cap.
    pub outlier_cap: usize,
}

impl ExclusionCounts {
    pub fn total(&self) -> usize {
        self.field_absent
            + self.unknown_unit
            + self.unit_only
            + self.unrecognized_unit
            + self.non_positive_value
            + self.outlier_cap
    }
}

enum UnitClass {
    Known(f64),
    UnknownLike,
    Unrecognized,
}

fn classify_unit(table: &ConversionTable, unit: Option<&str>) -> UnitClass {
    let Some(raw) = unit else {
        return UnitClass::Unrecognized;
    };
    match raw.trim().to_ascii_lowercase().as_str() {
        "second" | "seconds" => UnitClass::Known(table.seconds),
        "minute" | "minutes" => UnitClass::Known(table.minutes),
        "hour" | "hours" => UnitClass::Known(table.hours),
        "day" | "days" => UnitClass::Known(table.days),
        "week" | "weeks" => UnitClass::Known(table.weeks),
        "month" | "months" => UnitClass::Known(table.months),
        "year" | "years" => UnitClass::Known(table.years),
        "na" | "unknown" | "never" => UnitClass::UnknownLike,
        _ => UnitClass::Unrecognized,
    }
}

/// Converts every usable `field` entry in `records` to days and tallies the
/// rest by exclusion reason.
pub fn extract_durations(
    records: &[IncidentRecord],
    field: TimelineField,
    options: &ExtractOptions,
) -> (Vec<DurationSample>, ExclusionCounts) {
    let mut samples = Vec::new();
    let mut excluded = ExclusionCounts::default();
    for record in records {
        let Some(raw) = record.timing(field) else {
            excluded.field_absent += 1;
            continue;
        };
        let factor = match classify_unit(&options.conversion, raw.unit.as_deref()) {
            UnitClass::Known(factor) => factor,
            UnitClass::UnknownLike => {
                excluded.unknown_unit += 1;
                continue;
            }
            UnitClass::Unrecognized => {
                excluded.unrecognized_unit += 1;
                continue;
            }
        };
        let Some(value) = raw.value else {
            excluded.unit_only += 1;
            continue;
        };
        let days = value * factor;
        if !days.is_finite() || days <= 0.0 {
            excluded.non_positive_value += 1;
            continue;
        }
        if field == TimelineField::Containment {
            if let Some(cap) = options.containment_cap_days {
                if days > cap {
                    excluded.outlier_cap += 1;
                    continue;
                }
            }
        }
        samples.push(DurationSample {
            field,
            days,
            unit_raw: raw.unit.clone().unwrap_or_default(),
            value_raw: value,
        });
    }
    (samples, excluded)
}

/// One fixed-width histogram bin covering `[bin_start_days,
/// bin_start_days + bin_width_days)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HistogramBin {
    pub bin_start_days: f64,
    pub bin_width_days: f64,
    pub count: usize,
    pub cumulative_fraction: f64,
}

/// Summary statistics over a duration sample set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimingStats {
    pub n: usize,
    pub mean_days: f64,
    pub min_days: f64,
    pub max_days: f64,
    pub histogram: Vec<HistogramBin>,
}

/// Errors from [`timing_stats`].
#[derive(Debug, Clone, PartialEq, Error)]
pub enum StatsError {
    #[error("cannot summarize an empty sample set")]
    EmptySampleSet,
    #[error("bin width must be positive and finite, got {width}")]
    NonPositiveBinWidth { width: f64 },
}

/// Reduces samples to mean/min/max and a fixed-width histogram anchored at
/// zero, with bins contiguous through the maximum sample.
///
/// Samples are sorted before accumulating, so any permutation of the same
/// set yields bitwise-identical statistics.
pub fn timing_stats(
    samples: &[DurationSample],
    bin_width_days: f64,
) -> Result<TimingStats, StatsError> {
    if samples.is_empty() {
        return Err(StatsError::EmptySampleSet);
    }
    if !bin_width_days.is_finite() || bin_width_days <= 0.0 {
        return Err(StatsError::NonPositiveBinWidth {
            width: bin_width_days,
        });
    }
    let mut days: Vec<f64> = samples.iter().map(|s| s.days).collect();
    days.sort_by(f64::total_cmp);
    let n = days.len();
    let mean = days.iter().sum::<f64>() / n as f64;
    let min = days[0];
    let max = days[n - 1];

    let bin_of = |x: f64| ((x / bin_width_days).floor().max(0.0)) as usize;
    let bin_count = bin_of(max) + 1;
    let mut counts = vec![0usize; bin_count];
    for &x in &days {
        counts[bin_of(x)] += 1;
    }
    let mut histogram = Vec::with_capacity(bin_count);
    let mut running = 0usize;
    for (k, &count) in counts.iter().enumerate() {
        running += count;
        histogram.push(HistogramBin {
            bin_start_days: k as f64 * bin_width_days,
            bin_width_days,
            count,
            cumulative_fraction: running as f64 / n as f64,
        });
    }
    Ok(TimingStats {
        n,
        mean_days: mean,
        min_days: min,
        max_days: max,
        histogram,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::io::Write as _;

    fn record(id: &str, actions: &[ActionCategory]) -> IncidentRecord {
        IncidentRecord {
            incident_id: id.to_owned(),
            incident_year: 2014,
            actions: actions.iter().copied().collect(),
            compromise: None,
            exfiltration: None,
            discovery: None,
            containment: None,
        }
    }

    fn with_discovery(
        mut rec: IncidentRecord,
        unit: Option<&str>,
        value: Option<f64>,
    ) -> IncidentRecord {
        rec.discovery = Some(RawTiming {
            unit: unit.map(str::to_owned),
            value,
        });
        rec
    }

    #[test]
    fn conversion_table_matches_the_documented_defaults() {
        let t = ConversionTable::standard();
        assert_eq!(t.days, 1.0);
        assert_eq!(t.weeks, 7.0);
        assert_eq!(t.months, 30.0);
        assert_eq!(t.years, 365.0);
        assert_eq!(t.hours, 1.0 / 24.0);
        let c = ConversionTable::calendar_mean();
        assert_eq!(c.months, 30.44);
        assert_eq!(c.years, 365.25);
        assert_eq!(c.weeks, 7.0);
    }

    #[test]
    fn two_months_convert_to_sixty_days() {
        let recs = vec![with_discovery(
            record("a", &[ActionCategory::Hacking]),
            Some("Months"),
            Some(2.0),
        )];
        let (samples, excluded) =
            extract_durations(&recs, TimelineField::Discovery, &ExtractOptions::default());
        assert_eq!(samples.len(), 1);
        assert_eq!(samples[0].days, 60.0);
        assert_eq!(excluded.total(), 0);
    }

    #[test]
    fn exclusion_reasons_are_distinguished() {
        let recs = vec![
            record("absent", &[ActionCategory::Hacking]),
            with_discovery(
                record("unk", &[ActionCategory::Hacking]),
                Some(" NA "),
                Some(3.0),
            ),
            with_discovery(
                record("unk2", &[ActionCategory::Hacking]),
                Some("Unknown"),
                None,
            ),
            with_discovery(
                record("unit_only", &[ActionCategory::Hacking]),
                Some("Hours"),
                None,
            ),
            with_discovery(
                record("weird", &[ActionCategory::Hacking]),
                Some("fortnights"),
                Some(2.0),
            ),
            with_discovery(
                record("nounit", &[ActionCategory::Hacking]),
                None,
                Some(2.0),
            ),
            with_discovery(
                record("zero", &[ActionCategory::Hacking]),
                Some("Days"),
                Some(0.0),
            ),
            with_discovery(
                record("neg", &[ActionCategory::Hacking]),
                Some("Days"),
                Some(-4.0),
            ),
            with_discovery(
                record("ok", &[ActionCategory::Hacking]),
                Some("weeks"),
                Some(2.0),
            ),
        ];
        let (samples, excluded) =
            extract_durations(&recs, TimelineField::Discovery, &ExtractOptions::default());
        assert_eq!(samples.len(), 1);
        assert_eq!(samples[0].days, 14.0);
        assert_eq!(excluded.field_absent, 1);
        assert_eq!(excluded.unknown_unit, 2);
        assert_eq!(excluded.unit_only, 1);
        assert_eq!(excluded.unrecognized_unit, 2);
        assert_eq!(excluded.non_positive_value, 2);
        assert_eq!(excluded.outlier_cap, 0);
        assert_eq!(recs.len(), samples.len() + excluded.total());
    }

    #[test]
    fn containment_cap_applies_only_to_containment() {
        let mut long_containment = record("cap", &[ActionCategory::Hacking]);
        long_containment.containment = Some(RawTiming {
            unit: Some("Years".to_owned()),
            value: Some(10.0),
        });
        let mut long_discovery = record("nocap", &[ActionCategory::Hacking]);
        long_discovery.discovery = Some(RawTiming {
            unit: Some("Years".to_owned()),
            value: Some(10.0),
        });
        let recs = vec![long_containment, long_discovery];
        let opts = ExtractOptions::default();
        let (c_samples, c_excluded) = extract_durations(&recs, TimelineField::Containment, &opts);
        assert!(c_samples.is_empty());
        assert_eq!(c_excluded.outlier_cap, 1);
        assert_eq!(c_excluded.field_absent, 1);
        let (d_samples, d_excluded) = extract_durations(&recs, TimelineField::Discovery, &opts);
        assert_eq!(d_samples.len(), 1);
        assert_eq!(d_samples[0].days, 3650.0);
        assert_eq!(d_excluded.outlier_cap, 0);
        let uncapped = ExtractOptions {
            containment_cap_days: None,
            ..ExtractOptions::default()
        };
        let (c2, _) = extract_durations(&recs, TimelineField::Containment, &uncapped);
        assert_eq!(c2.len(), 1);
    }

    #[test]
    fn malicious_filter_intersects_and_dedups() {
        let recs = vec![
            record("a", &[ActionCategory::Malware, ActionCategory::Hacking]),
            record("a", &[ActionCategory::Hacking]),
            record("b", &[ActionCategory::Error]),
            record("c", &[ActionCategory::Hacking, ActionCategory::Social]),
        ];
        let kept = filter_malicious(&recs);
        assert_eq!(kept.len(), 2);
        assert_eq!(kept[0].incident_id, "a");
        assert_eq!(kept[1].incident_id, "c");
        let wanted = BTreeSet::from([ActionCategory::Error]);
        let errors = filter_by_actions(&recs, &wanted);
        assert_eq!(errors.len(), 1);
        assert_eq!(errors[0].incident_id, "b");
    }

    #[test]
    fn stats_match_hand_arithmetic() {
        let samples: Vec<DurationSample> = [10.0, 20.0, 60.0]
            .iter()
            .map(|&days| DurationSample {
                field: TimelineField::Discovery,
                days,
                unit_raw: "Days".to_owned(),
                value_raw: days,
            })
            .collect();
        let stats = timing_stats(&samples, 60.0).unwrap();
        assert_eq!(stats.n, 3);
        assert_eq!(stats.mean_days, 30.0);
        assert_eq!(stats.min_days, 10.0);
        assert_eq!(stats.max_days, 60.0);
        assert_eq!(stats.histogram.len(), 2);
        assert_eq!(stats.histogram[0].count, 2);
        assert!((stats.histogram[0].cumulative_fraction - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(stats.histogram[1].count, 1);
        assert_eq!(stats.histogram[1].cumulative_fraction, 1.0);
    }

    #[test]
    fn stats_errors() {
        assert!(matches!(
            timing_stats(&[], 60.0),
            Err(StatsError::EmptySampleSet)
        ));
        let samples = vec![DurationSample {
            field: TimelineField::Discovery,
            days: 1.0,
            unit_raw: "Days".to_owned(),
            value_raw: 1.0,
        }];
        assert!(matches!(
            timing_stats(&samples, 0.0),
            Err(StatsError::NonPositiveBinWidth { .. })
        ));
    }

    #[test]
    fn category_and_field_names_round_trip() {
        for c in ActionCategory::ALL {
            assert_eq!(c.to_string().parse::<ActionCategory>().unwrap(), c);
        }
        for f in TimelineField::ALL {
            assert_eq!(f.to_string().parse::<TimelineField>().unwrap(), f);
        }
        assert_eq!(
            " Hacking ".parse::<ActionCategory>().unwrap(),
            ActionCategory::Hacking
        );
        assert!("sabotage".parse::<ActionCategory>().is_err());
        assert!("breach".parse::<TimelineField>().is_err());
    }

    #[test]
    fn parser_is_total_over_messy_directories() {
        let dir = tempfile::tempdir().unwrap();
        let write = |name: &str, body: &str| {
            let mut f = fs::File::create(dir.path().join(name)).unwrap();
            f.write_all(body.as_bytes()).unwrap();
        };
        write(
            "good.json",
            r#"{
                "incident_id": "inc-1",
                "action": {"hacking": {"variety": ["SQLi"]}},
                "timeline": {
                    "incident": {"year": 2014},
                    "discovery": {"unit": "Days", "value": 10}
                }
            }"#,
        );
        write(
            "unit_only.json",
            r#"{
                "action": {"malware": {}},
                "timeline": {"incident": {"year": 2013}, "discovery": {"unit": "Hours"}}
            }"#,
        );
        write("broken.json", "{ not json");
        write(
            "no_year.json",
            r#"{"action": {"hacking": {}}, "timeline": {"discovery": {"unit": "Days", "value": 1}}}"#,
        );
        write(
            "no_action.json",
            r#"{"timeline": {"incident": {"year": 2012}}}"#,
        );
        write("notes.txt", "not an incident");

        let parsed = parse_incidents(dir.path()).unwrap();
        assert_eq!(parsed.records.len(), 2);
        assert_eq!(parsed.skipped.malformed_json, 1);
        assert_eq!(parsed.skipped.missing_year, 1);
        assert_eq!(parsed.skipped.no_action, 1);

        let good = &parsed.records[0];
        assert_eq!(good.incident_id, "inc-1");
        assert_eq!(good.incident_year, 2014);
        assert!(good.actions.contains(&ActionCategory::Hacking));
        assert_eq!(
            good.discovery,
            Some(RawTiming {
                unit: Some("Days".to_owned()),
                value: Some(10.0)
            })
        );
        // No incident_id in the document: the file stem stands in.
        assert_eq!(parsed.records[1].incident_id, "unit_only");
        assert_eq!(parsed.records[1].discovery.as_ref().unwrap().value, None);
    }

    #[test]
    fn unreadable_directory_is_a_hard_error() {
        let missing = Path::new("/nonexistent/veris-fixtures");
        assert!(matches!(
            parse_incidents(missing),
            Err(VerisError::SourceUnreadable { .. })
        ));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn stats_are_permutation_invariant(
            days in prop::collection::vec(0.01f64..5000.0, 1..40),
            rotation in 0usize..40,
        ) {
            let build = |values: &[f64]| -> Vec<DurationSample> {
                values
                    .iter()
                    .map(|&d| DurationSample {
                        field: TimelineField::Discovery,
                        days: d,
                        unit_raw: "Days".to_owned(),
                        value_raw: d,
                    })
                    .collect()
            };
            let baseline = timing_stats(&build(&days), 10.0).unwrap();
            let mut reversed = days.clone();
            reversed.reverse();
            prop_assert_eq!(&timing_stats(&build(&reversed), 10.0).unwrap(), &baseline);
            let mut rotated = days.clone();
            rotated.rotate_left(rotation % days.len().max(1));
            prop_assert_eq!(&timing_stats(&build(&rotated), 10.0).unwrap(), &baseline);
        }

        #[test]
        fn histogram_mass_and_cumulative_shape(
            days in prop::collection::vec(0.01f64..3000.0, 1..60),
            width in 1.0f64..200.0,
        ) {
            let samples: Vec<DurationSample> = days
                .iter()
                .map(|&d| DurationSample {
                    field: TimelineField::Containment,
                    days: d,
                    unit_raw: "Days".to_owned(),
                    value_raw: d,
                })
                .collect();
            let stats = timing_stats(&samples, width).unwrap();
            let total: usize = stats.histogram.iter().map(|b| b.count).sum();
            prop_assert_eq!(total, stats.n);
            let mut prev = 0.0;
            for bin in &stats.histogram {
                prop_assert!(bin.cumulative_fraction >= prev);
                prev = bin.cumulative_fraction;
            }
            prop_assert_eq!(stats.histogram.last().unwrap().cumulative_fraction, 1.0);
            prop_assert!(stats.min_days <= stats.mean_days && stats.mean_days <= stats.max_days);
        }
    }
}
