//! Collection-level three-decision testing with false-discovery-rate control.
//!
//! Step 1 runs the Benjamini-Hochberg step-up rule on the two-sided p-values
//! (optionally with the estimated true-null count in place of `m`); step 2
//! splits the rejected set by the smaller one-tailed p-value into a
//! subdiffusion set `R1` and a superdiffusion set `R2`.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::Hypothesis;

/// Per-trajectory p-values feeding the multiple test.
#[derive(Clone, Debug, PartialEq)]
pub struct PValueRecord {
    pub track_id: String,
    /// Two-sided p-value: `min(1, 2 min(p_sub, p_sup))`.
    pub p: f64,
    pub p_sub: f64,
    pub p_sup: f64,
}

/// Result of the step-up rule alone.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BhOutcome {
    /// Number of rejected hypotheses (`k*`).
    pub k_star: usize,
    /// The largest rejected p-value, `None` when nothing is rejected.
    pub threshold: Option<f64>,
}

fn check_pvals(pvals: &[f64]) -> Result<()> {
    if pvals.iter().any(|p| !(0.0..=1.0).contains(p)) {
        return Err(Error::InvalidParameter(
            "p-values must lie in [0,1]".into(),
        ));
    }
    Ok(())
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "alpha must lie in (0,1), got {alpha}"
        )));
    }
    Ok(())
}

/// Benjamini-Hochberg step-up: the largest `k` with `p_(k) <= k alpha / m`.
///
/// An empty input yields zero rejections, not an error.
pub fn bh_threshold(pvals: &[f64], alpha: f64) -> Result<BhOutcome> {
    check_alpha(alpha)?;
    check_pvals(pvals)?;
    Ok(step_up(pvals, alpha, pvals.len()))
}

/// Step-up at thresholds `k alpha / m_eff` (the adaptive rule substitutes
/// `m_eff = m0_hat`).
fn step_up(pvals: &[f64], alpha: f64, m_eff: usize) -> BhOutcome {
    let m = pvals.len();
    if m == 0 {
        return BhOutcome {
            k_star: 0,
            threshold: None,
        };
    }
    let mut sorted: Vec<f64> = pvals.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    let denom = m_eff.max(1) as f64;
    let mut k_star = 0;
    for (i, &p) in sorted.iter().enumerate() {
        if p <= (i + 1) as f64 * alpha / denom {
            k_star = i + 1;
        }
    }
    BhOutcome {
        k_star,
        threshold: (k_star > 0).then(|| sorted[k_star - 1]),
    }
}

/// Estimate of the number of true null hypotheses (lowest-slope rule).
///
/// With the p-values sorted ascending, compute slopes
/// `S_i = (1 - p_(i)) / (m + 1 - i)`; at the first `i >= 2` with
/// `S_i < S_{i-1}`, return `min(m, ceil(1/S_i + 1))`. If the slopes never
/// decrease, return `m`. The estimate is deliberately upward biased, which
/// keeps the adaptive procedure's FDR near its target.
pub fn estimate_m0(pvals: &[f64]) -> Result<usize> {
    let m = pvals.len();
    if m == 0 {
        return Err(Error::InvalidParameter(
            "m0 estimation needs at least one p-value".into(),
        ));
    }
    check_pvals(pvals)?;
    let mut sorted: Vec<f64> = pvals.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    let mut prev = (1.0 - sorted[0]) / m as f64;
    for i in 2..=m {
        let slope = (1.0 - sorted[i - 1]) / (m + 1 - i) as f64;
        if slope < prev {
            let est = 1.0 / slope + 1.0;
            if !est.is_finite() || est >= m as f64 {
                return Ok(m);
            }
            return Ok((est.ceil() as usize).max(1));
        }
        prev = slope;
    }
    Ok(m)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BhMode {
    Standard,
    /// Replace `m` by the lowest-slope estimate of the true-null count.
    Adaptive,
}

/// Directional multiple-test report.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiTestReport {
    pub alpha: f64,
    pub mode: BhMode,
    pub m: usize,
    /// Estimated true-null count (adaptive mode only).
    pub m0_hat: Option<usize>,
    /// Largest rejected two-sided p-value.
    pub threshold_p: Option<f64>,
    /// Rejections toward subdiffusion (`p_sub < p_sup`).
    pub rejected_sub: Vec<String>,
    /// Rejections toward superdiffusion (`p_sub > p_sup`).
    pub rejected_sup: Vec<String>,
    pub accepted: Vec<String>,
}

/// Step-up on the two-sided p-values, then split the rejections by tail.
///
/// A rejected record with `p_sub == p_sup` cannot occur (such a record has
/// two-sided p-value 1); it is reported as an internal consistency error.
pub fn procedure1(
    records: &[PValueRecord],
    alpha: f64,
    mode: BhMode,
) -> Result<MultiTestReport> {
    if records.is_empty() {
        return Err(Error::InvalidParameter(
            "multiple test needs at least one record".into(),
        ));
    }
    check_alpha(alpha)?;
    let pvals: Vec<f64> = records.iter().map(|r| r.p).collect();
    check_pvals(&pvals)?;
    let m = records.len();
    let (m0_hat, m_eff) = match mode {
        BhMode::Standard => (None, m),
        BhMode::Adaptive => {
            let est = estimate_m0(&pvals)?;
            (Some(est), est)
        }
    };
    let outcome = step_up(&pvals, alpha, m_eff);

    // Sort ids by (p, track_id) so reports are deterministic under ties.
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| {
        records[a]
            .p
            .total_cmp(&records[b].p)
            .then_with(|| records[a].track_id.cmp(&records[b].track_id))
    });

    let mut rejected_sub = Vec::new();
    let mut rejected_sup = Vec::new();
    let mut accepted = Vec::new();
    for (rank, &idx) in order.iter().enumerate() {
        let r = &records[idx];
        if rank < outcome.k_star {
            if r.p_sub < r.p_sup {
                rejected_sub.push(r.track_id.clone());
            } else if r.p_sub > r.p_sup {
                rejected_sup.push(r.track_id.clone());
            } else {
                return Err(Error::Internal(format!(
                    "rejected record `{}` has p_sub == p_sup == {}",
                    r.track_id, r.p_sub
                )));
            }
        } else {
            accepted.push(r.track_id.clone());
        }
    }
    Ok(MultiTestReport {
        alpha,
        mode,
        m,
        m0_hat,
        threshold_p: outcome.threshold,
        rejected_sub,
        rejected_sup,
        accepted,
    })
}

/// The nine outcome counts of a directional multiple test against known
/// ground truth.
///
/// Rows are the truth (null, sub, sup), columns the decision
/// (accept, sub, sup):
///
/// ```text
///        accept  sub   sup
/// null     u     v1    v2
/// sub      t1    s1    s3
/// sup      t2    s4    s2
/// ```
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ErrorCounts {
    pub u: usize,
    pub v1: usize,
    pub v2: usize,
    pub t1: usize,
    pub s1: usize,
    pub s3: usize,
    pub t2: usize,
    pub s4: usize,
    pub s2: usize,
}

impl ErrorCounts {
    pub fn m(&self) -> usize {
        self.m0() + self.m1() + self.m2()
    }

    pub fn m0(&self) -> usize {
        self.u + self.v1 + self.v2
    }

    pub fn m1(&self) -> usize {
        self.t1 + self.s1 + self.s3
    }

    pub fn m2(&self) -> usize {
        self.t2 + self.s4 + self.s2
    }

    /// Total rejections `R = R1 + R2`.
    pub fn r(&self) -> usize {
        self.v1 + self.v2 + self.s1 + self.s3 + self.s4 + self.s2
    }

    /// False discoveries (type I).
    pub fn v(&self) -> usize {
        self.v1 + self.v2
    }

    /// Directional errors (type III).
    pub fn s_directional(&self) -> usize {
        self.s3 + self.s4
    }

    /// Realized false discovery proportion `V / max(R, 1)`.
    pub fn fdr_realized(&self) -> f64 {
        self.v() as f64 / self.r().max(1) as f64
    }

    /// Realized mixed-directional proportion `(V + S) / max(R, 1)`.
    pub fn mdfdr_realized(&self) -> f64 {
        (self.v() + self.s_directional()) as f64 / self.r().max(1) as f64
    }

    /// Fraction of true subdiffusion trajectories declared subdiffusive.
    pub fn avg_power_sub(&self) -> f64 {
        self.s1 as f64 / self.m1().max(1) as f64
    }

    /// Fraction of true superdiffusion trajectories declared superdiffusive.
    pub fn avg_power_sup(&self) -> f64 {
        self.s2 as f64 / self.m2().max(1) as f64
    }
}

/// Tally a report against ground truth. Every id in the report must appear
/// in `truth`.
pub fn score_against_truth(
    report: &MultiTestReport,
    truth: &HashMap<String, Hypothesis>,
) -> Result<ErrorCounts> {
    let mut c = ErrorCounts::default();
    let lookup = |id: &String| {
        truth.get(id).copied().ok_or_else(|| {
            Error::InvalidParameter(format!("track `{id}` is missing from the truth map"))
        })
    };
    for id in &report.accepted {
        match lookup(id)? {
            Hypothesis::Null => c.u += 1,
            Hypothesis::Sub => c.t1 += 1,
            Hypothesis::Sup => c.t2 += 1,
        }
    }
    for id in &report.rejected_sub {
        match lookup(id)? {
            Hypothesis::Null => c.v1 += 1,
            Hypothesis::Sub => c.s1 += 1,
            Hypothesis::Sup => c.s4 += 1,
        }
    }
    for id in &report.rejected_sup {
        match lookup(id)? {
            Hypothesis::Null => c.v2 += 1,
            Hypothesis::Sub => c.s3 += 1,
            Hypothesis::Sup => c.s2 += 1,
        }
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(id: &str, p_sub: f64, p_sup: f64) -> PValueRecord {
        PValueRecord {
            track_id: id.to_string(),
            p: (2.0 * p_sub.min(p_sup)).min(1.0),
            p_sub,
            p_sup,
        }
    }

    #[test]
    fn bh_hand_example() {
        // thresholds at alpha = 0.05, m = 4: 0.0125, 0.025, 0.0375, 0.05
        let out = bh_threshold(&[0.01, 0.02, 0.04, 0.2], 0.05).unwrap();
        assert_eq!(out.k_star, 2);
        assert_eq!(out.threshold, Some(0.02));
    }

    #[test]
    fn bh_all_ones_rejects_nothing() {
        let out = bh_threshold(&[1.0; 6], 0.05).unwrap();
        assert_eq!(out.k_star, 0);
        assert_eq!(out.threshold, None);
    }

    #[test]
    fn bh_single_pvalue() {
        let out = bh_threshold(&[0.04], 0.05).unwrap();
        assert_eq!(out.k_star, 1);
        let out = bh_threshold(&[0.06], 0.05).unwrap();
        assert_eq!(out.k_star, 0);
    }

    #[test]
    fn bh_empty_is_empty() {
        let out = bh_threshold(&[], 0.05).unwrap();
        assert_eq!(out.k_star, 0);
    }

    #[test]
    fn bh_rejects_bad_inputs() {
        assert!(bh_threshold(&[0.5], 0.0).is_err());
        assert!(bh_threshold(&[0.5], 1.0).is_err());
        assert!(bh_threshold(&[-0.1], 0.05).is_err());
        assert!(bh_threshold(&[1.1], 0.05).is_err());
    }

    #[test]
    fn m0_all_ones_sees_only_nulls() {
        assert_eq!(estimate_m0(&[1.0; 5]).unwrap(), 5);
    }

    #[test]
    fn m0_hand_example_four() {
        // slopes: 0.24975, 0.3327, 0.4985, 0.1 -> first decrease at i=4,
        // ceil(1/0.1 + 1) = 11, capped at m = 4
        assert_eq!(estimate_m0(&[0.001, 0.002, 0.003, 0.9]).unwrap(), 4);
    }

    #[test]
    fn m0_hand_example_eight() {
        // slopes rise through the low block, first decrease at i=5 where
        // S_5 = 0.5/4 = 0.125; ceil(1/0.125 + 1) = 9, capped at m = 8
        let p = [1e-6, 1e-6, 1e-6, 1e-6, 0.5, 0.6, 0.7, 0.8];
        assert_eq!(estimate_m0(&p).unwrap(), 8);
    }

    #[test]
    fn m0_can_drop_below_m() {
        // late decrease with a moderate slope gives an estimate below m
        let p = [0.001, 0.002, 0.003, 0.004, 0.005, 0.3, 0.31, 0.32];
        let m0 = estimate_m0(&p).unwrap();
        assert_eq!(m0, 6);
    }

    #[test]
    fn procedure1_splits_directionally() {
        let records = vec![
            rec("sub1", 0.001, 0.999),
            rec("sup1", 0.998, 0.002),
            rec("null1", 0.4, 0.6),
        ];
        let rep = procedure1(&records, 0.05, BhMode::Standard).unwrap();
        assert_eq!(rep.rejected_sub, vec!["sub1".to_string()]);
        assert_eq!(rep.rejected_sup, vec!["sup1".to_string()]);
        assert_eq!(rep.accepted, vec!["null1".to_string()]);
        assert_eq!(rep.threshold_p, Some(0.004));
    }

    #[test]
    fn adaptive_rejects_superset_of_standard() {
        let records: Vec<PValueRecord> = (0..40)
            .map(|i| {
                if i < 25 {
                    rec(&format!("a{i:02}"), 0.0005 * (i + 1) as f64, 0.99)
                } else {
                    let p_sub = 0.25 + 0.01 * (i - 25) as f64;
                    rec(&format!("b{i:02}"), p_sub, 1.0 - p_sub)
                }
            })
            .collect();
        let std = procedure1(&records, 0.05, BhMode::Standard).unwrap();
        let ada = procedure1(&records, 0.05, BhMode::Adaptive).unwrap();
        assert!(ada.m0_hat.unwrap() < 40);
        let std_r = std.rejected_sub.len() + std.rejected_sup.len();
        let ada_r = ada.rejected_sub.len() + ada.rejected_sup.len();
        assert!(ada_r >= std_r);
        for id in &std.rejected_sub {
            assert!(ada.rejected_sub.contains(id));
        }
    }

    #[test]
    fn score_perfect_classification() {
        let records = vec![rec("s", 0.001, 0.999), rec("p", 0.999, 0.001), rec("n", 0.5, 0.5)];
        let rep = procedure1(&records, 0.05, BhMode::Standard).unwrap();
        let truth: HashMap<String, Hypothesis> = [
            ("s".to_string(), Hypothesis::Sub),
            ("p".to_string(), Hypothesis::Sup),
            ("n".to_string(), Hypothesis::Null),
        ]
        .into_iter()
        .collect();
        let c = score_against_truth(&rep, &truth).unwrap();
        assert_eq!((c.v(), c.s_directional(), c.t1 + c.t2), (0, 0, 0));
        assert_eq!(c.avg_power_sub(), 1.0);
        assert_eq!(c.avg_power_sup(), 1.0);
        assert_eq!(c.m(), 3);
    }

    #[test]
    fn score_everything_accepted_uses_max_guard() {
        let records = vec![rec("a", 0.5, 0.5), rec("b", 0.6, 0.4)];
        let rep = procedure1(&records, 0.05, BhMode::Standard).unwrap();
        let truth: HashMap<String, Hypothesis> = [
            ("a".to_string(), Hypothesis::Null),
            ("b".to_string(), Hypothesis::Sub),
        ]
        .into_iter()
        .collect();
        let c = score_against_truth(&rep, &truth).unwrap();
        assert_eq!(c.r(), 0);
        assert_eq!(c.fdr_realized(), 0.0);
        assert_eq!(c.mdfdr_realized(), 0.0);
    }

    #[test]
    fn score_rejects_unknown_id() {
        let records = vec![rec("a", 0.5, 0.5)];
        let rep = procedure1(&records, 0.05, BhMode::Standard).unwrap();
        let truth = HashMap::new();
        assert!(score_against_truth(&rep, &truth).is_err());
    }

    #[test]
    fn table_row_sums_match_composition() {
        let records = vec![
            rec("x1", 0.001, 0.999),
            rec("x2", 0.9, 0.1),
            rec("x3", 0.2, 0.8),
            rec("x4", 0.997, 0.003),
        ];
        let rep = procedure1(&records, 0.2, BhMode::Standard).unwrap();
        let truth: HashMap<String, Hypothesis> = [
            ("x1".to_string(), Hypothesis::Sub),
            ("x2".to_string(), Hypothesis::Null),
            ("x3".to_string(), Hypothesis::Null),
            ("x4".to_string(), Hypothesis::Sup),
        ]
        .into_iter()
        .collect();
        let c = score_against_truth(&rep, &truth).unwrap();
        assert_eq!(c.m0(), 2);
        assert_eq!(c.m1(), 1);
        assert_eq!(c.m2(), 1);
        assert_eq!(c.m(), 4);
    }
}
