//! Trajectory file ingestion, the track filters applied before testing, and
//! report/map emission.
//!
//! # Trajectory file format (`spt-traj v1`)
//!
//! Plain text, one observation per row. Lines starting with `#` are
//! comments; two carry metadata:
//!
//! ```text
//! # dt=0.1        lag in seconds; when present, column 2 is a frame index
//! # scale=0.16    multiply coordinates by this factor on load (optional)
//! ```
//!
//! Data rows hold `track_id, frame_or_time, x, y[, truth]`, separated by
//! commas or whitespace. Without a `dt` header the second column is absolute
//! time in seconds and the lag is inferred per track. The optional fifth
//! column carries a ground-truth tag (`h0`, `h1`, `h2`) for labelled
//! simulation corpora. Floats are written with the shortest representation
//! that round-trips, so write-then-read reproduces positions bit-exactly.
//!
//! Rows of one track must have strictly increasing frames with a uniform
//! gap (relative tolerance 1e-9); offending tracks are skipped with a
//! reason, not fatal errors. A malformed row is a fatal parse error carrying
//! its line number.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::trajectory::Trajectory;
use crate::{Hypothesis, MotionClass};

/// One parsed data row.
#[derive(Clone, Debug, PartialEq)]
pub struct RawRecord {
    pub line: usize,
    pub track_id: String,
    pub frame: f64,
    pub x: f64,
    pub y: f64,
    pub truth: Option<Hypothesis>,
}

/// A parsed trajectory file: rows plus header metadata.
#[derive(Clone, Debug, Default)]
pub struct TrajectoryFile {
    pub path: PathBuf,
    /// Lag from the `# dt=` header, if present.
    pub dt: Option<f64>,
    /// Coordinate scale from the `# scale=` header, if present.
    pub scale: Option<f64>,
    pub records: Vec<RawRecord>,
}

impl TrajectoryFile {
    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref().to_path_buf();
        let text = fs::read_to_string(&path)?;
        Self::parse(path, &text)
    }

    fn parse(path: PathBuf, text: &str) -> Result<Self> {
        let mut file = TrajectoryFile {
            path: path.clone(),
            ..Default::default()
        };
        let perr = |line: usize, reason: String| Error::Parse {
            path: path.display().to_string(),
            line,
            reason,
        };
        for (idx, raw_line) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw_line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(comment) = line.strip_prefix('#') {
                let comment = comment.trim();
                for (key, slot) in [("dt=", &mut file.dt), ("scale=", &mut file.scale)] {
                    if let Some(v) = comment.strip_prefix(key) {
                        let parsed: f64 = v.trim().parse().map_err(|_| {
                            perr(line_no, format!("cannot parse `{v}` after `{key}`"))
                        })?;
                        if !(parsed > 0.0 && parsed.is_finite()) {
                            return Err(perr(
                                line_no,
                                format!("{key} value must be positive and finite"),
                            ));
                        }
                        *slot = Some(parsed);
                    }
                }
                continue;
            }
            let fields: Vec<&str> = if line.contains(',') {
                line.split(',').map(str::trim).collect()
            } else {
                line.split_whitespace().collect()
            };
            if fields.len() != 4 && fields.len() != 5 {
                return Err(perr(
                    line_no,
                    format!("expected 4 or 5 fields, found {}", fields.len()),
                ));
            }
            let num = |s: &str, what: &str| -> Result<f64> {
                let v: f64 = s
                    .parse()
                    .map_err(|_| perr(line_no, format!("cannot parse {what} `{s}`")))?;
                if !v.is_finite() {
                    return Err(perr(line_no, format!("{what} must be finite, got `{s}`")));
                }
                Ok(v)
            };
            let truth = match fields.get(4) {
                None => None,
                Some(tag) => Some(Hypothesis::parse(tag).ok_or_else(|| {
                    perr(line_no, format!("unknown truth tag `{tag}` (use h0/h1/h2)"))
                })?),
            };
            file.records.push(RawRecord {
                line: line_no,
                track_id: fields[0].to_string(),
                frame: num(fields[1], "frame")?,
                x: num(fields[2], "x")?,
                y: num(fields[3], "y")?,
                truth,
            });
        }
        Ok(file)
    }
}

/// A track excluded from analysis, with the reason.
#[derive(Clone, Debug, PartialEq)]
pub struct SkippedTrack {
    pub track_id: String,
    pub reason: String,
}

/// Result of grouping a file into trajectories.
#[derive(Clone, Debug, Default)]
pub struct LoadOutcome {
    pub trajectories: Vec<Trajectory>,
    /// Ground-truth tags for tracks that carried them.
    pub truth: HashMap<String, Hypothesis>,
    pub skipped: Vec<SkippedTrack>,
}

/// Group rows by track id (first-appearance order), sort each track by
/// frame, enforce uniform sampling, and apply header scaling.
pub fn load_trajectories(file: &TrajectoryFile) -> LoadOutcome {
    let scale = file.scale.unwrap_or(1.0);
    let mut order: Vec<&str> = Vec::new();
    let mut groups: HashMap<&str, Vec<&RawRecord>> = HashMap::new();
    for rec in &file.records {
        groups
            .entry(rec.track_id.as_str())
            .or_insert_with(|| {
                order.push(rec.track_id.as_str());
                Vec::new()
            })
            .push(rec);
    }

    let mut out = LoadOutcome::default();
    'tracks: for id in order {
        let mut rows = groups.remove(id).expect("grouped above");
        rows.sort_by(|a, b| a.frame.total_cmp(&b.frame));
        let mut skip = |reason: String| {
            out.skipped.push(SkippedTrack {
                track_id: id.to_string(),
                reason,
            });
        };
        if rows.len() < 2 {
            skip("fewer than 2 observations".into());
            continue;
        }
        let first_gap = rows[1].frame - rows[0].frame;
        if first_gap <= 0.0 {
            skip(format!("duplicate frame {}", rows[0].frame));
            continue;
        }
        for w in rows.windows(2) {
            let gap = w[1].frame - w[0].frame;
            if gap <= 0.0 {
                skip(format!("duplicate frame {}", w[0].frame));
                continue 'tracks;
            }
            if (gap - first_gap).abs() > 1e-9 * first_gap.abs().max(gap.abs()) {
                skip(format!(
                    "nonuniform lag: gap {gap} differs from first gap {first_gap}"
                ));
                continue 'tracks;
            }
        }
        // With a dt header the frame column is an index; otherwise it is
        // time in seconds.
        let (dt, t0) = match file.dt {
            Some(d) => (first_gap * d, rows[0].frame * d),
            None => (first_gap, rows[0].frame),
        };
        let positions: Vec<[f64; 2]> = rows.iter().map(|r| [r.x * scale, r.y * scale]).collect();
        match Trajectory::new(id, t0, dt, positions) {
            Ok(traj) => {
                if let Some(tag) = rows.iter().find_map(|r| r.truth) {
                    out.truth.insert(id.to_string(), tag);
                }
                out.trajectories.push(traj);
            }
            Err(e) => skip(e.to_string()),
        }
    }
    out
}

/// Track admission rules applied before testing.
///
/// A "stop" is a consecutive pair of bit-identical positions; a track is
/// kept only if it stops fewer than `floor(len / 10)` times, where `len` is
/// its number of observations.
#[derive(Clone, Copy, Debug)]
pub struct FilterPolicy {
    pub min_distinct_positions: usize,
    pub min_length: Option<usize>,
    pub max_length: Option<usize>,
}

impl Default for FilterPolicy {
    fn default() -> Self {
        Self {
            min_distinct_positions: 20,
            min_length: None,
            max_length: None,
        }
    }
}

/// Split tracks into kept and skipped (with reasons) under `policy`.
/// Filtering is idempotent: the kept set passes the same policy unchanged.
pub fn apply_filters(
    trajectories: Vec<Trajectory>,
    policy: &FilterPolicy,
) -> (Vec<Trajectory>, Vec<SkippedTrack>) {
    let mut kept = Vec::new();
    let mut skipped = Vec::new();
    for traj in trajectories {
        let len = traj.positions().len();
        let distinct: usize = {
            let mut seen = HashSet::with_capacity(len);
            for p in traj.positions() {
                seen.insert((p[0].to_bits(), p[1].to_bits()));
            }
            seen.len()
        };
        let stops = traj
            .positions()
            .windows(2)
            .filter(|w| w[0][0].to_bits() == w[1][0].to_bits() && w[0][1].to_bits() == w[1][1].to_bits())
            .count();
        let stop_cap = len / 10;
        let reason = if policy.min_length.is_some_and(|lo| len < lo) {
            Some(format!("length {len} below minimum"))
        } else if policy.max_length.is_some_and(|hi| len > hi) {
            Some(format!("length {len} above maximum"))
        } else if distinct < policy.min_distinct_positions {
            Some(format!(
                "only {distinct} distinct positions (need {})",
                policy.min_distinct_positions
            ))
        } else if stops >= stop_cap {
            Some(format!("{stops} stops (must be fewer than {stop_cap})"))
        } else {
            None
        };
        match reason {
            Some(reason) => skipped.push(SkippedTrack {
                track_id: traj.track_id().to_string(),
                reason,
            }),
            None => kept.push(traj),
        }
    }
    (kept, skipped)
}

/// Write trajectories in the `spt-traj v1` format. All tracks must share
/// one lag; an optional truth map adds the fifth column.
pub fn write_trajectories(
    path: impl AsRef<Path>,
    trajectories: &[Trajectory],
    truth: Option<&HashMap<String, Hypothesis>>,
) -> Result<()> {
    let mut dt = None;
    for t in trajectories {
        match dt {
            None => dt = Some(t.dt()),
            Some(d) if d == t.dt() => {}
            Some(d) => {
                return Err(Error::InvalidParameter(format!(
                    "tracks mix lags {d} and {}; write them to separate files",
                    t.dt()
                )))
            }
        }
    }
    let mut out = BufWriter::new(fs::File::create(path)?);
    writeln!(out, "# format=spt-traj v1")?;
    if let Some(d) = dt {
        writeln!(out, "# dt={d}")?;
    }
    writeln!(out, "# columns=track_id,frame,x,y{}", if truth.is_some() { ",truth" } else { "" })?;
    for t in trajectories {
        let tag = truth.and_then(|m| m.get(t.track_id()));
        for (i, p) in t.positions().iter().enumerate() {
            match tag {
                Some(h) => writeln!(out, "{},{},{},{},{}", t.track_id(), i, p[0], p[1], h.tag())?,
                None => writeln!(out, "{},{},{},{}", t.track_id(), i, p[0], p[1])?,
            }
        }
    }
    out.flush()?;
    Ok(())
}

/// One classified track in a report.
#[derive(Clone, Debug, PartialEq)]
pub struct ReportEntry {
    pub track_id: String,
    pub n_increments: usize,
    pub t_stat: Option<f64>,
    pub p_sub: Option<f64>,
    pub p_sup: Option<f64>,
    pub p_two_sided: Option<f64>,
    /// MSD log-log slope, when the MSD baseline produced one.
    pub beta_hat: Option<f64>,
    pub label: MotionClass,
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(String::new, |x| x.to_string())
}

/// Versioned delimited report, one row per track. An empty result set
/// yields a header-only file.
pub fn write_report_delimited(path: impl AsRef<Path>, entries: &[ReportEntry]) -> Result<()> {
    let mut out = BufWriter::new(fs::File::create(path)?);
    writeln!(out, "# format=spt-report v1")?;
    writeln!(out, "track_id,n,t_stat,p_sub,p_sup,p_two_sided,beta_hat,label")?;
    for e in entries {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            e.track_id,
            e.n_increments,
            opt(e.t_stat),
            opt(e.p_sub),
            opt(e.p_sup),
            opt(e.p_two_sided),
            opt(e.beta_hat),
            e.label.name()
        )?;
    }
    out.flush()?;
    Ok(())
}

/// Class shares in percent, one decimal, summing to 100 up to rounding.
pub fn summary_percentages(entries: &[ReportEntry]) -> Vec<(MotionClass, usize, f64)> {
    let classes = [
        MotionClass::Brownian,
        MotionClass::Subdiffusion,
        MotionClass::Superdiffusion,
        MotionClass::NotMoving,
    ];
    let total = entries.len().max(1);
    classes
        .iter()
        .map(|&c| {
            let count = entries.iter().filter(|e| e.label == c).count();
            (c, count, 100.0 * count as f64 / total as f64)
        })
        .collect()
}

/// Human-readable summary table.
pub fn write_summary_text(
    path: impl AsRef<Path>,
    title: &str,
    entries: &[ReportEntry],
) -> Result<()> {
    let mut text = String::new();
    let _ = writeln!(text, "{title}");
    let _ = writeln!(text, "tracks analysed: {}", entries.len());
    for (class, count, pct) in summary_percentages(entries) {
        let _ = writeln!(text, "{:>15}: {:>5}  {:5.1}%", class.name(), count, pct);
    }
    fs::write(path, text)?;
    Ok(())
}

/// Fixed map colors: free diffusion blue, superdiffusion red, subdiffusion
/// green, immobile cyan.
pub fn class_color(class: MotionClass) -> &'static str {
    match class {
        MotionClass::Brownian => "blue",
        MotionClass::Superdiffusion => "red",
        MotionClass::Subdiffusion => "green",
        MotionClass::NotMoving => "cyan",
    }
}

/// Draw every track as a polyline in its class color (SVG).
pub fn write_classification_map(
    path: impl AsRef<Path>,
    items: &[(&Trajectory, MotionClass)],
) -> Result<()> {
    let (mut xmin, mut xmax) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut ymin, mut ymax) = (f64::INFINITY, f64::NEG_INFINITY);
    for (t, _) in items {
        for p in t.positions() {
            xmin = xmin.min(p[0]);
            xmax = xmax.max(p[0]);
            ymin = ymin.min(p[1]);
            ymax = ymax.max(p[1]);
        }
    }
    if items.is_empty() {
        (xmin, xmax, ymin, ymax) = (0.0, 1.0, 0.0, 1.0);
    }
    let pad = 0.05 * ((xmax - xmin).max(ymax - ymin)).max(1e-12);
    let (x0, y0) = (xmin - pad, ymin - pad);
    let (w, h) = (xmax - xmin + 2.0 * pad, ymax - ymin + 2.0 * pad);
    let stroke = 0.002 * w.max(h);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{x0} {y0} {w} {h}" width="800" height="{:.0}">"#,
        800.0 * h / w
    );
    let _ = writeln!(svg, r#"<rect x="{x0}" y="{y0}" width="{w}" height="{h}" fill="white"/>"#);
    for (t, class) in items {
        let mut points = String::new();
        for p in t.positions() {
            let _ = write!(points, "{},{} ", p[0], p[1]);
        }
        let _ = writeln!(
            svg,
            r#"<polyline points="{}" fill="none" stroke="{}" stroke-width="{stroke}"><title>{}</title></polyline>"#,
            points.trim_end(),
            class_color(*class),
            t.track_id()
        );
    }
    let _ = writeln!(svg, "</svg>");
    fs::write(path, svg)?;
    Ok(())
}
