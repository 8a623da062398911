use std::fmt;

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::algorithms::Algorithm;
use crate::error::{Error, Result};
use crate::metrics::MetricReport;
use crate::objectives::Problem;

/// Largest combined sample size for which the exact rank-sum distribution
/// is enumerated.
pub const EXACT_RANK_SUM_LIMIT: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Gd,
    Hv,
    Nop,
}

impl Metric {
    pub const ALL: [Metric; 3] = [Metric::Gd, Metric::Hv, Metric::Nop];

    pub fn name(self) -> &'static str {
        match self {
            Metric::Gd => "GD",
            Metric::Hv => "HV",
            Metric::Nop => "NoP",
        }
    }

    pub fn higher_is_better(self) -> bool {
        !matches!(self, Metric::Gd)
    }

    pub fn of(self, report: &MetricReport) -> f64 {
        match self {
            Metric::Gd => report.gd,
            Metric::Hv => report.hv,
            Metric::Nop => report.nop as f64,
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Tier {
    #[serde(rename = "none")]
    None,
    #[serde(rename = "p<=0.05")]
    P05,
    #[serde(rename = "p<=0.001")]
    P001,
}

impl Tier {
    pub fn of(p: f64) -> Tier {
        if p <= 0.001 {
            Tier::P001
        } else if p <= 0.05 {
            Tier::P05
        } else {
            Tier::None
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Tier::None => "none",
            Tier::P05 => "p<=0.05",
            Tier::P001 => "p<=0.001",
        }
    }
}

/// Two-sided Mann-Whitney U test. Exact over all rank assignments (with
/// midranks for ties) when the samples hold at most
/// [`EXACT_RANK_SUM_LIMIT`] values together; otherwise the normal
/// approximation with tie and continuity corrections.
pub fn rank_sum_test(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::Empty("rank-sum sample"));
    }
    if a.iter().chain(b).any(|v| v.is_nan()) {
        return Err(Error::invalid("sample", "contains NaN"));
    }
    let (na, nb) = (a.len(), b.len());
    let n = na + nb;
    let mut pooled: Vec<(f64, bool)> = a
        .iter()
        .map(|&v| (v, true))
        .chain(b.iter().map(|&v| (v, false)))
        .collect();
    pooled.sort_by(|x, y| x.0.total_cmp(&y.0));

    // Doubled midranks keep every rank integral.
    let mut ranks2 = vec![0u64; n];
    let mut tie_term = 0.0;
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && pooled[j + 1].0 == pooled[i].0 {
            j += 1;
        }
        let t = (j - i + 1) as f64;
        tie_term += t * t * t - t;
        for r in ranks2.iter_mut().take(j + 1).skip(i) {
            *r = (i + j + 2) as u64;
        }
        i = j + 1;
    }
    let observed: u64 = (0..n).filter(|&k| pooled[k].1).map(|k| ranks2[k]).sum();

    let p = if n <= EXACT_RANK_SUM_LIMIT {
        exact_p(&ranks2, na, observed)
    } else {
        let (na, nb, nf) = (na as f64, nb as f64, n as f64);
        let u = observed as f64 / 2.0 - na * (na + 1.0) / 2.0;
        let mean = na * nb / 2.0;
        let var = na * nb / 12.0 * ((nf + 1.0) - tie_term / (nf * (nf - 1.0)));
        if var <= 0.0 {
            1.0
        } else {
            let z = ((u - mean).abs() - 0.5).max(0.0) / var.sqrt();
            let normal = Normal::standard();
            2.0 * (1.0 - normal.cdf(z))
        }
    };
    Ok(p.clamp(0.0, 1.0))
}

fn exact_p(ranks2: &[u64], na: usize, observed: u64) -> f64 {
    let total: u64 = ranks2.iter().sum();
    // counts[k][s]: subsets of size k whose doubled ranks sum to s.
    let mut counts = vec![vec![0f64; total as usize + 1]; na + 1];
    counts[0][0] = 1.0;
    for &r in ranks2 {
        for k in (1..=na).rev() {
            let (lo, hi) = counts.split_at_mut(k);
            for s in (r as usize..=total as usize).rev() {
                hi[0][s] += lo[k - 1][s - r as usize];
            }
        }
    }
    let dist = &counts[na];
    let all: f64 = dist.iter().sum();
    // Twice the expected rank sum, so the comparison stays in integers.
    let center2 = na as u64 * total * 2 / ranks2.len() as u64;
    let deviation = (2 * observed).abs_diff(center2);
    let extreme: f64 = dist
        .iter()
        .enumerate()
        .filter(|&(s, _)| (2 * s as u64).abs_diff(center2) >= deviation)
        .map(|(_, &c)| c)
        .sum();
    extreme / all
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub mean: f64,
    /// Sample standard deviation; 0 for a single value.
    pub sd: f64,
    /// Lower median for even counts.
    pub median: f64,
}

impl Summary {
    pub fn of(values: &[f64]) -> Result<Summary> {
        if values.is_empty() {
            return Err(Error::Empty("summary sample"));
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let sd = if values.len() > 1 {
            (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
        } else {
            0.0
        };
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        Ok(Summary {
            mean,
            sd,
            median: sorted[(sorted.len() - 1) / 2],
        })
    }
}

/// Metric samples of one `(algorithm, problem)` cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellSamples {
    pub algorithm: Algorithm,
    pub problem: Problem,
    pub runs: Vec<MetricReport>,
}

impl CellSamples {
    pub fn values(&self, metric: Metric) -> Vec<f64> {
        self.runs.iter().map(|r| metric.of(r)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellSummary {
    pub algorithm: Algorithm,
    pub problem: Problem,
    pub runs: usize,
    pub gd: Summary,
    pub hv: Summary,
    pub nop: Summary,
}

impl CellSummary {
    pub fn get(&self, metric: Metric) -> &Summary {
        match metric {
            Metric::Gd => &self.gd,
            Metric::Hv => &self.hv,
            Metric::Nop => &self.nop,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairwiseTest {
    pub problem: Problem,
    pub metric: Metric,
    pub a: Algorithm,
    pub b: Algorithm,
    pub p_value: f64,
    pub tier: Tier,
}

/// How a cell is marked in the aggregate table: the best mean in a row wins
/// at the weakest tier it holds against every other algorithm; cells not
/// distinguishable from the best at p <= 0.05 tie with it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mark {
    None,
    Tie,
    Win,
    StrongWin,
}

impl Mark {
    pub fn label(self) -> &'static str {
        match self {
            Mark::None => "",
            Mark::Tie => "tie",
            Mark::Win => "win p<=0.05",
            Mark::StrongWin => "win p<=0.001",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableCell {
    pub algorithm: Algorithm,
    pub mean: f64,
    pub sd: f64,
    pub mark: Mark,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub problem: Problem,
    pub metric: Metric,
    pub cells: Vec<TableCell>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatsReport {
    pub algorithms: Vec<Algorithm>,
    pub problems: Vec<Problem>,
    pub cells: Vec<CellSummary>,
    pub pairwise: Vec<PairwiseTest>,
    pub table: Vec<TableRow>,
}

impl StatsReport {
    /// Summaries, all pairwise tests and the marked table. Cells follow
    /// problem-major order with algorithms in first-seen order.
    pub fn from_samples(samples: &[CellSamples]) -> Result<StatsReport> {
        let mut algorithms: Vec<Algorithm> = Vec::new();
        let mut problems: Vec<Problem> = Vec::new();
        for s in samples {
            if !algorithms.contains(&s.algorithm) {
                algorithms.push(s.algorithm);
            }
            if !problems.contains(&s.problem) {
                problems.push(s.problem);
            }
        }
        let find = |a: Algorithm, p: Problem| {
            samples
                .iter()
                .find(|s| s.algorithm == a && s.problem == p && !s.runs.is_empty())
        };

        let mut cells = Vec::new();
        let mut pairwise = Vec::new();
        let mut table = Vec::new();
        for &problem in &problems {
            for &algorithm in &algorithms {
                if let Some(s) = find(algorithm, problem) {
                    cells.push(CellSummary {
                        algorithm,
                        problem,
                        runs: s.runs.len(),
                        gd: Summary::of(&s.values(Metric::Gd))?,
                        hv: Summary::of(&s.values(Metric::Hv))?,
                        nop: Summary::of(&s.values(Metric::Nop))?,
                    });
                }
            }
            let present: Vec<&CellSamples> = algorithms
                .iter()
                .filter_map(|&a| find(a, problem))
                .collect();
            for metric in Metric::ALL {
                let mut tests = Vec::new();
                for (i, x) in present.iter().enumerate() {
                    for y in &present[i + 1..] {
                        let p = rank_sum_test(&x.values(metric), &y.values(metric))?;
                        tests.push(PairwiseTest {
                            problem,
                            metric,
                            a: x.algorithm,
                            b: y.algorithm,
                            p_value: p,
                            tier: Tier::of(p),
                        });
                    }
                }
                let row = table_row(problem, metric, &cells, &tests);
                pairwise.extend(tests);
                if !row.cells.is_empty() {
                    table.push(row);
                }
            }
        }
        Ok(StatsReport {
            algorithms,
            problems,
            cells,
            pairwise,
            table,
        })
    }

    pub fn cell(&self, algorithm: Algorithm, problem: Problem) -> Option<&CellSummary> {
        self.cells
            .iter()
            .find(|c| c.algorithm == algorithm && c.problem == problem)
    }

    pub fn p_value(
        &self,
        problem: Problem,
        metric: Metric,
        a: Algorithm,
        b: Algorithm,
    ) -> Option<f64> {
        self.pairwise
            .iter()
            .find(|t| {
                t.problem == problem
                    && t.metric == metric
                    && ((t.a == a && t.b == b) || (t.a == b && t.b == a))
            })
            .map(|t| t.p_value)
    }
}

fn table_row(
    problem: Problem,
    metric: Metric,
    cells: &[CellSummary],
    tests: &[PairwiseTest],
) -> TableRow {
    let row: Vec<&CellSummary> = cells.iter().filter(|c| c.problem == problem).collect();
    let better = |x: f64, y: f64| {
        if metric.higher_is_better() {
            x > y
        } else {
            x < y
        }
    };
    let mut best: Option<&CellSummary> = None;
    for c in &row {
        if best.is_none_or(|b| better(c.get(metric).mean, b.get(metric).mean)) {
            best = Some(c);
        }
    }
    let p_between = |a: Algorithm, b: Algorithm| {
        tests
            .iter()
            .find(|t| (t.a == a && t.b == b) || (t.a == b && t.b == a))
            .map_or(1.0, |t| t.p_value)
    };
    let cells = row
        .iter()
        .map(|c| {
            let mark = match best {
                Some(b) if b.algorithm == c.algorithm && row.len() > 1 => {
                    let weakest = row
                        .iter()
                        .filter(|o| o.algorithm != b.algorithm)
                        .map(|o| Tier::of(p_between(b.algorithm, o.algorithm)))
                        .min()
                        .unwrap_or(Tier::None);
                    match weakest {
                        Tier::P001 => Mark::StrongWin,
                        Tier::P05 => Mark::Win,
                        Tier::None => Mark::Tie,
                    }
                }
                Some(b) if b.algorithm != c.algorithm => {
                    if p_between(b.algorithm, c.algorithm) > 0.05 {
                        Mark::Tie
                    } else {
                        Mark::None
                    }
                }
                _ => Mark::None,
            };
            TableCell {
                algorithm: c.algorithm,
                mean: c.get(metric).mean,
                sd: c.get(metric).sd,
                mark,
            }
        })
        .collect();
    TableRow {
        problem,
        metric,
        cells,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn seq(lo: i32, hi: i32) -> Vec<f64> {
        (lo..=hi).map(f64::from).collect()
    }

    #[test]
    fn separated_samples_are_significant() {
        let p = rank_sum_test(&seq(1, 10), &seq(11, 20)).unwrap();
        // Exact two-sided tail: 2 / C(20, 10).
        assert!((p - 2.0 / 184_756.0).abs() < 1e-15);
        assert!(p < 0.001);
    }

    #[test]
    fn identical_and_constant_samples_give_one() {
        let a = seq(1, 10);
        assert!((rank_sum_test(&a, &a).unwrap() - 1.0).abs() < 1e-12);
        let big = seq(1, 30);
        assert!(rank_sum_test(&big, &big).unwrap() > 0.99);
        assert_eq!(rank_sum_test(&[2.0; 15], &[2.0; 15]).unwrap(), 1.0);
        assert_eq!(rank_sum_test(&[2.0; 3], &[2.0; 4]).unwrap(), 1.0);
    }

    #[test]
    fn small_exact_values() {
        // {1} vs {2}: both orderings equally likely.
        assert_eq!(rank_sum_test(&[1.0], &[2.0]).unwrap(), 1.0);
        // {1,2} vs {3,4,5}: 1 of C(5,2) = 10 assignments per tail.
        assert!((rank_sum_test(&[1.0, 2.0], &[3.0, 4.0, 5.0]).unwrap() - 0.2).abs() < 1e-12);
    }

    #[test]
    fn normal_approximation_matches_known_value() {
        // U = 0 with 15 vs 15: z = (112.5 - 0.5) / sqrt(581.25).
        let p = rank_sum_test(&seq(1, 15), &seq(16, 30)).unwrap();
        let z: f64 = 112.0 / 581.25f64.sqrt();
        let expected = 2.0 * (1.0 - Normal::standard().cdf(z));
        assert!((p - expected).abs() < 1e-12);
        assert!(p < 1e-5);
    }

    #[test]
    fn empty_sample_is_an_error() {
        assert!(rank_sum_test(&[], &[1.0]).is_err());
        assert!(rank_sum_test(&[1.0], &[]).is_err());
        assert!(rank_sum_test(&[f64::NAN], &[1.0]).is_err());
    }

    #[test]
    fn summary_uses_sample_sd_and_lower_median() {
        let s = Summary::of(&[4.0, 1.0, 3.0, 2.0]).unwrap();
        assert_eq!(s.mean, 2.5);
        assert_eq!(s.median, 2.0);
        assert!((s.sd - (5.0f64 / 3.0).sqrt()).abs() < 1e-12);
        assert_eq!(Summary::of(&[7.0]).unwrap().sd, 0.0);
        assert!(Summary::of(&[]).is_err());
    }

    #[test]
    fn tiers_follow_thresholds() {
        assert_eq!(Tier::of(0.001), Tier::P001);
        assert_eq!(Tier::of(0.0011), Tier::P05);
        assert_eq!(Tier::of(0.05), Tier::P05);
        assert_eq!(Tier::of(0.051), Tier::None);
    }

    fn cell(algorithm: Algorithm, gd: &[f64]) -> CellSamples {
        CellSamples {
            algorithm,
            problem: Problem::Zdt1,
            runs: gd
                .iter()
                .map(|&g| MetricReport {
                    hv: 1.0 - g,
                    gd: g,
                    nop: 10,
                })
                .collect(),
        }
    }

    #[test]
    fn report_marks_clear_winner() {
        let good: Vec<f64> = (0..12).map(|i| 0.001 * i as f64).collect();
        let bad: Vec<f64> = (0..12).map(|i| 1.0 + i as f64).collect();
        let report = StatsReport::from_samples(&[
            cell(Algorithm::Mbonvpso, &good),
            cell(Algorithm::Mbpso, &bad),
        ])
        .unwrap();
        assert_eq!(report.cells.len(), 2);
        assert_eq!(report.pairwise.len(), 3);
        let gd_row = report
            .table
            .iter()
            .find(|r| r.metric == Metric::Gd)
            .unwrap();
        assert_eq!(gd_row.cells[0].mark, Mark::StrongWin);
        assert_eq!(gd_row.cells[1].mark, Mark::None);
        let nop_row = report
            .table
            .iter()
            .find(|r| r.metric == Metric::Nop)
            .unwrap();
        assert_eq!(nop_row.cells[0].mark, Mark::Tie);
        assert_eq!(nop_row.cells[1].mark, Mark::Tie);
        let p = report
            .p_value(
                Problem::Zdt1,
                Metric::Gd,
                Algorithm::Mbpso,
                Algorithm::Mbonvpso,
            )
            .unwrap();
        assert!(p <= 0.001);
    }

    #[test]
    fn report_round_trips_through_json() {
        let report = StatsReport::from_samples(&[
            cell(Algorithm::Mbnvpso, &[0.1, 0.2, 0.3]),
            cell(Algorithm::Msbpso, &[0.15, 0.25, 0.35]),
        ])
        .unwrap();
        let text = serde_json::to_string(&report).unwrap();
        let back: StatsReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back, report);
    }

    proptest! {
        #[test]
        fn p_value_in_unit_interval_and_symmetric(
            a in prop::collection::vec(0u8..6, 1..14),
            b in prop::collection::vec(0u8..6, 1..14),
        ) {
            let a: Vec<f64> = a.into_iter().map(f64::from).collect();
            let b: Vec<f64> = b.into_iter().map(f64::from).collect();
            let p = rank_sum_test(&a, &b).unwrap();
            prop_assert!((0.0..=1.0).contains(&p));
            let q = rank_sum_test(&b, &a).unwrap();
            prop_assert!((p - q).abs() < 1e-12);
        }
    }
}
