//! Seeded parallel experiments, line-delimited trial records and summary tables.
//!
//! Trial `i` of a batch draws its seeds from `(master seed, i, attempt)`, so
//! the record set does not depend on the worker count or completion order.
//! For the process experiments an attempt whose largest torsion group is
//! trivial is kept as a record and the slot is retried with the next attempt.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::groups::{
    aut_order, cl_distribution, cl_normalizer, expected_phases, lambda_k_distribution, tv_distance, AbelianGroup,
    GroupDistribution, PGroup,
};
use crate::homology::{is_prime, top_homology};
use crate::lmprocess::{
    burst_analysis, c_d, c_d_solve, c_value, lt_search_at, m_star, sample_trace, torsion_at, BurstRecord, LTResult,
    ProcessTrace, DEFAULT_Q0, DEFAULT_WINDOW,
};
use crate::qtrees::{kalai_sum, sample_tree_with, DEFAULT_STEP_CAP};
use crate::shadow::{default_threshold, hitting_time_experiment, HittingReport, DEFAULT_SCAN_RADIUS};
use crate::simplicial::binomial;

/// Environment variable overriding the worker count.
pub const WORKERS_ENV: &str = "TORSION_WORKERS";
/// Attempts per slot before a process trial gives up on finding torsion.
pub const MAX_ATTEMPTS: u32 = 1000;
/// Primes for the total-variation table.
pub const TV_PRIMES: [u64; 9] = [2, 3, 5, 7, 11, 13, 17, 19, 23];
/// Order bound for the truncated `λ_k` distributions.
pub const LAMBDA_ORDER_BOUND: u64 = 10_000;
/// Residual mass left out of the truncated Cohen–Lenstra distributions.
pub const CL_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    LtBurst,
    Qtree,
    Hitting,
    Enumerate,
    Constants,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub n: usize,
    pub d: usize,
    /// Nontrivial results wanted (process kinds) or samples (qtree).
    pub trials: usize,
    pub window_radius: usize,
    pub q0: u64,
    pub seed: u64,
    pub workers: Option<usize>,
    pub out: Option<PathBuf>,
    /// Giant-shadow threshold; `n^{(d+2)/2}` when absent.
    pub shadow_threshold: Option<f64>,
    pub scan_radius: usize,
    pub step_cap: u64,
    /// Threshold constant override for `m*`.
    pub c: Option<f64>,
}

impl ExperimentConfig {
    pub fn new(kind: ExperimentKind, n: usize, d: usize) -> Self {
        ExperimentConfig {
            kind,
            n,
            d,
            trials: 1,
            window_radius: DEFAULT_WINDOW,
            q0: DEFAULT_Q0,
            seed: 0,
            workers: None,
            out: None,
            shadow_threshold: None,
            scan_radius: DEFAULT_SCAN_RADIUS,
            step_cap: DEFAULT_STEP_CAP,
            c: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.d == 0 || self.trials == 0 || self.window_radius == 0 || self.scan_radius == 0 {
            return Err(invalid("n, d, trials and radii must be positive"));
        }
        if self.workers == Some(0) {
            return Err(invalid("worker count must be positive"));
        }
        if !is_prime(self.q0) {
            return Err(invalid(format!("q0 = {} is not prime", self.q0)));
        }
        if let Some(t) = self.shadow_threshold {
            if !(t > 0.0) {
                return Err(invalid("shadow threshold must be positive"));
            }
        }
        if let Some(c) = self.c {
            if !(c > 0.0) {
                return Err(invalid("threshold constant must be positive"));
            }
        }
        match self.kind {
            ExperimentKind::LtBurst | ExperimentKind::Hitting if self.n <= self.d + 1 => {
                Err(invalid(format!("need n > d + 1, got n = {}, d = {}", self.n, self.d)))
            }
            ExperimentKind::Qtree | ExperimentKind::Enumerate if self.d != 2 => {
                Err(invalid("Q-acyclic sampling and enumeration are two-dimensional"))
            }
            ExperimentKind::Qtree if self.n < 5 => Err(invalid("the chain needs n >= 5")),
            _ => Ok(()),
        }
    }

    pub fn threshold(&self) -> f64 {
        self.shadow_threshold
            .unwrap_or_else(|| default_threshold(self.n, self.d))
    }

    fn center(&self) -> Result<usize> {
        match self.c {
            Some(c) => crate::lmprocess::m_star_with(self.n, self.d, c),
            None => m_star(self.n, self.d),
        }
    }
}

/// Worker count: environment override, then the flag, then available parallelism.
pub fn resolve_workers(flag: Option<usize>) -> usize {
    std::env::var(WORKERS_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .filter(|&w: &usize| w > 0)
        .or(flag)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |p| p.get()))
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Seed of attempt `attempt` of trial `index`.
pub fn trial_seed(master: u64, index: u64, attempt: u32) -> u64 {
    splitmix64(splitmix64(master ^ splitmix64(index)) ^ attempt as u64)
}

/// Torsion burst of one process trial.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BurstOutput {
    pub m0: usize,
    pub c_value: f64,
    pub subcritical: Vec<AbelianGroup>,
    pub supercritical: Vec<AbelianGroup>,
    pub duration: usize,
    pub phases: usize,
    pub unimodal: bool,
}

impl From<(&BurstRecord, usize, usize)> for BurstOutput {
    fn from((b, n, d): (&BurstRecord, usize, usize)) -> Self {
        BurstOutput {
            m0: b.m0,
            c_value: c_value(n, b.m0 as f64, d),
            subcritical: b.subcritical.clone(),
            supercritical: b.supercritical.clone(),
            duration: b.duration,
            phases: b.phases,
            unimodal: b.unimodal,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum TrialOutput {
    LtBurst {
        lt: AbelianGroup,
        /// Invariant factors as decimal strings.
        lt_factors: Vec<String>,
        log_order: f64,
        trivial: bool,
        burst: Option<BurstOutput>,
    },
    Qtree {
        faces: usize,
        t0: u64,
        steps: u64,
        accepted: u64,
        h1: AbelianGroup,
        betti1: usize,
        betti2: usize,
    },
    Hitting {
        lt: AbelianGroup,
        trivial: bool,
        report: Option<HittingReport>,
    },
    Enumerate {
        trees: usize,
        /// `sum |H_1|^2`.
        weighted: String,
        expected: String,
        /// `(|H_1|, count)` pairs.
        by_order: Vec<(String, usize)>,
    },
    Constants {
        c_d: Vec<(usize, f64)>,
        cl_normalizers: Vec<(u64, f64)>,
        expected_phases: f64,
    },
    Failed {
        error: String,
        message: String,
    },
}

impl TrialOutput {
    /// Whether this attempt should be replaced by another one.
    fn is_trivial(&self) -> bool {
        matches!(
            self,
            TrialOutput::LtBurst { trivial: true, .. } | TrialOutput::Hitting { trivial: true, .. }
        )
    }
}

/// One line of an experiment's output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub kind: ExperimentKind,
    pub n: usize,
    pub d: usize,
    pub index: u64,
    pub attempt: u32,
    pub seed: u64,
    pub window_radius: usize,
    pub q0: u64,
    pub output: TrialOutput,
    /// Not covered by the reproducibility guarantee.
    pub wall_ms: u64,
}

impl TrialRecord {
    /// The record with its wall time cleared.
    pub fn canonical(&self) -> Self {
        TrialRecord {
            wall_ms: 0,
            ..self.clone()
        }
    }
}

fn failed(e: Error) -> TrialOutput {
    TrialOutput::Failed {
        error: e.kind().to_string(),
        message: e.to_string(),
    }
}

/// Trace long enough for the window and the tail of a burst at its edge.
fn trace_for(cfg: &ExperimentConfig, seed: u64, center: usize) -> Result<ProcessTrace> {
    let total = binomial(cfg.n, cfg.d + 1);
    let len = (center + 3 * cfg.window_radius.max(cfg.scan_radius)).min(total);
    sample_trace(cfg.n, cfg.d, len, seed)
}

/// Torsion from the last trivial step before `m0` to the first one after it.
pub fn burst_of(trace: &ProcessTrace, lt: &LTResult) -> Result<BurstRecord> {
    let m0 = lt.m0.ok_or_else(|| invalid("no burst in a trivial result"))?;
    let mut below = Vec::new();
    let mut m = m0;
    loop {
        if m == 0 {
            return Err(invalid("torsion persists down to the empty complex"));
        }
        m -= 1;
        let g = torsion_at(trace, m);
        let stop = g.is_trivial();
        below.push(g);
        if stop {
            break;
        }
    }
    let base = m;
    let mut seq: Vec<AbelianGroup> = below.into_iter().rev().collect();
    seq.push(lt.group.clone());
    let mut m = m0;
    loop {
        m += 1;
        if m > trace.len() {
            return Err(invalid("trace ends before the burst does"));
        }
        let g = torsion_at(trace, m);
        let stop = g.is_trivial();
        seq.push(g);
        if stop {
            break;
        }
    }
    burst_analysis(&seq, base, &lt.group, m0)
}

fn lt_trial(cfg: &ExperimentConfig, seed: u64) -> Result<TrialOutput> {
    let center = cfg.center()?;
    let trace = trace_for(cfg, seed, center)?;
    let lt = lt_search_at(&trace, center, cfg.window_radius, cfg.q0)?;
    let burst = if lt.trivial {
        None
    } else {
        Some(BurstOutput::from((&burst_of(&trace, &lt)?, cfg.n, cfg.d)))
    };
    Ok(TrialOutput::LtBurst {
        lt_factors: lt.group.invariant_factors().iter().map(|f| f.to_string()).collect(),
        log_order: lt.group.log_order(),
        trivial: lt.trivial,
        lt: lt.group,
        burst,
    })
}

fn hitting_trial(cfg: &ExperimentConfig, seed: u64) -> Result<TrialOutput> {
    let center = cfg.center()?;
    let trace = trace_for(cfg, seed, center)?;
    let lt = lt_search_at(&trace, center, cfg.window_radius, cfg.q0)?;
    let report = if lt.trivial {
        None
    } else {
        Some(hitting_time_experiment(
            &trace,
            &lt,
            cfg.threshold(),
            cfg.scan_radius,
            cfg.q0,
        )?)
    };
    Ok(TrialOutput::Hitting {
        trivial: lt.trivial,
        lt: lt.group,
        report,
    })
}

fn qtree_trial(cfg: &ExperimentConfig, seed: u64) -> Result<TrialOutput> {
    let s = sample_tree_with(cfg.n, seed, cfg.step_cap)?;
    let h = top_homology(&s.tree.to_state());
    Ok(TrialOutput::Qtree {
        faces: s.tree.faces().len(),
        t0: s.t0,
        steps: s.steps,
        accepted: s.accepted,
        h1: h.lower.torsion,
        betti1: h.lower.betti,
        betti2: h.top.betti,
    })
}

fn enumerate_output(n: usize) -> Result<TrialOutput> {
    let k = kalai_sum(n)?;
    Ok(TrialOutput::Enumerate {
        trees: k.trees,
        weighted: k.weighted.to_string(),
        expected: k.expected.to_string(),
        by_order: k.by_order.iter().map(|(o, c)| (o.to_string(), *c)).collect(),
    })
}

fn constants_output() -> Result<TrialOutput> {
    let mut cl = Vec::new();
    for q in TV_PRIMES {
        cl.push((q, cl_normalizer(q)?));
    }
    Ok(TrialOutput::Constants {
        c_d: (2..=5).map(|d| (d, c_d_solve(d))).collect(),
        cl_normalizers: cl,
        expected_phases: expected_phases(),
    })
}

fn run_attempt(cfg: &ExperimentConfig, index: u64, attempt: u32) -> TrialRecord {
    let seed = trial_seed(cfg.seed, index, attempt);
    let start = Instant::now();
    let output = match cfg.kind {
        ExperimentKind::LtBurst => lt_trial(cfg, seed),
        ExperimentKind::Hitting => hitting_trial(cfg, seed),
        ExperimentKind::Qtree => qtree_trial(cfg, seed),
        ExperimentKind::Enumerate => enumerate_output(cfg.n),
        ExperimentKind::Constants => constants_output(),
    }
    .unwrap_or_else(failed);
    TrialRecord {
        kind: cfg.kind,
        n: cfg.n,
        d: cfg.d,
        index,
        attempt,
        seed,
        window_radius: cfg.window_radius,
        q0: cfg.q0,
        output,
        wall_ms: start.elapsed().as_millis() as u64,
    }
}

fn run_slot(cfg: &ExperimentConfig, index: u64) -> Vec<TrialRecord> {
    let mut out = Vec::new();
    for attempt in 0..MAX_ATTEMPTS {
        let r = run_attempt(cfg, index, attempt);
        let again = r.output.is_trivial();
        out.push(r);
        if !again {
            break;
        }
    }
    out
}

/// Runs every trial of `cfg`, records in `(index, attempt)` order.
///
/// Single-shot kinds produce one record. Per-trial failures are recorded and
/// do not stop the batch.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<TrialRecord>> {
    cfg.validate()?;
    let slots = match cfg.kind {
        ExperimentKind::Enumerate | ExperimentKind::Constants => 1,
        _ => cfg.trials as u64,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(resolve_workers(cfg.workers))
        .build()
        .map_err(|e| invalid(format!("thread pool: {e}")))?;
    let records: Vec<TrialRecord> = pool.install(|| {
        (0..slots)
            .into_par_iter()
            .map(|i| run_slot(cfg, i))
            .collect::<Vec<_>>()
            .into_iter()
            .flatten()
            .collect()
    });
    if let Some(path) = &cfg.out {
        write_records(path, &records)?;
    }
    Ok(records)
}

pub fn write_records(path: &Path, records: &[TrialRecord]) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    for r in records {
        serde_json::to_writer(&mut w, r)?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_records(path: &Path) -> Result<Vec<TrialRecord>> {
    let mut out = Vec::new();
    for line in BufReader::new(File::open(path)?).lines() {
        let line = line?;
        if !line.trim().is_empty() {
            out.push(serde_json::from_str(&line)?);
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeanSd {
    pub mean: f64,
    pub sd: f64,
    pub count: usize,
}

impl MeanSd {
    /// Sample mean and standard deviation (`n - 1` denominator).
    pub fn of(xs: &[f64]) -> Option<Self> {
        if xs.is_empty() {
            return None;
        }
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let sd = if xs.len() > 1 {
            (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
        } else {
            0.0
        };
        Some(MeanSd {
            mean,
            sd,
            count: xs.len(),
        })
    }
}

/// Observed and predicted `count(trivial) / count(G)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatioRow {
    pub group: String,
    pub count: u64,
    pub observed: Option<f64>,
    pub predicted: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SylowTable {
    pub q: u64,
    pub rows: Vec<RatioRow>,
    pub tv: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LambdaTable {
    pub k: u32,
    /// `"sub"` or `"super"`.
    pub side: String,
    /// Trials in which the `k`-th group is defined.
    pub defined: usize,
    pub rows: Vec<RatioRow>,
    pub tv: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HittingSummary {
    pub trials: usize,
    pub coincide: usize,
    pub shadow_at_burst: usize,
    pub giant_at_burst: usize,
    pub rate: f64,
    pub threshold: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub kind: ExperimentKind,
    pub n: usize,
    pub d: usize,
    pub records: usize,
    pub failures: usize,
    pub nontrivial: usize,
    pub trivial: usize,
    pub trivial_rate: Option<f64>,
    pub log_order: Option<MeanSd>,
    pub face_count: Option<MeanSd>,
    pub c_value: Option<MeanSd>,
    pub duration: Option<MeanSd>,
    pub phases: Option<MeanSd>,
    pub sylow: Vec<SylowTable>,
    /// Sylow total-variation distance for every prime in [`TV_PRIMES`].
    pub tv: Vec<(u64, f64)>,
    pub lambda: Vec<LambdaTable>,
    pub hitting: Option<HittingSummary>,
}

fn sylow_table(groups: &[&AbelianGroup], q: u64, rows: usize) -> Result<SylowTable> {
    let mut counts: BTreeMap<PGroup, u64> = BTreeMap::new();
    for g in groups {
        *counts.entry(g.sylow(q)?).or_default() += 1;
    }
    let trivial = PGroup::trivial(q)?;
    let t = counts.get(&trivial).copied().unwrap_or(0);
    let mut by_count: Vec<_> = counts.iter().filter(|(g, _)| **g != trivial).collect();
    by_count.sort_by(|a, b| b.1.cmp(a.1).then(a.0.cmp(b.0)));
    let rows = by_count
        .into_iter()
        .take(rows)
        .map(|(g, &c)| RatioRow {
            group: g.to_abelian().to_string(),
            count: c,
            observed: (t > 0).then(|| t as f64 / c as f64),
            predicted: num_traits::ToPrimitive::to_f64(&g.aut_order()).unwrap_or(f64::INFINITY),
        })
        .collect();
    let tv = tv_distance(&GroupDistribution::empirical(&counts)?, &cl_distribution(q, CL_TOLERANCE)?);
    Ok(SylowTable { q, rows, tv })
}

/// `G_{-k}` (or `G_{+k}`) when defined: the `k`-th recorded group, or trivial
/// right after the last one.
fn kth_group(groups: &[AbelianGroup], k: usize) -> Option<AbelianGroup> {
    match groups.len().cmp(&(k - 1)) {
        std::cmp::Ordering::Less => None,
        std::cmp::Ordering::Equal => Some(AbelianGroup::trivial()),
        std::cmp::Ordering::Greater => Some(groups[k - 1].clone()),
    }
}

fn lambda_table(bursts: &[&BurstOutput], k: u32, sub: bool, rows: usize) -> Result<Option<LambdaTable>> {
    let mut counts: BTreeMap<AbelianGroup, u64> = BTreeMap::new();
    for b in bursts {
        let side = if sub { &b.subcritical } else { &b.supercritical };
        if let Some(g) = kth_group(side, k as usize) {
            *counts.entry(g).or_default() += 1;
        }
    }
    if counts.is_empty() {
        return Ok(None);
    }
    let defined = counts.values().sum::<u64>() as usize;
    let trivial = AbelianGroup::trivial();
    let t = counts.get(&trivial).copied().unwrap_or(0);
    let mut by_count: Vec<_> = counts.iter().filter(|(g, _)| **g != trivial).collect();
    by_count.sort_by(|a, b| b.1.cmp(a.1).then(a.0.cmp(b.0)));
    let mut out = Vec::new();
    for (g, &c) in by_count.into_iter().take(rows) {
        let aut = num_traits::ToPrimitive::to_f64(&aut_order(g)?).unwrap_or(f64::INFINITY);
        out.push(RatioRow {
            group: g.to_string(),
            count: c,
            observed: (t > 0).then(|| t as f64 / c as f64),
            predicted: g.log_order().mul_add(k as f64, aut.ln()).exp(),
        });
    }
    let observed: Vec<AbelianGroup> = counts.keys().cloned().collect();
    let conj = lambda_k_distribution(k, LAMBDA_ORDER_BOUND, &observed)?;
    let tv = tv_distance(&GroupDistribution::empirical(&counts)?, &conj);
    Ok(Some(LambdaTable {
        k,
        side: if sub { "sub" } else { "super" }.to_string(),
        defined,
        rows: out,
        tv,
    }))
}

/// Rows kept in each ratio table.
pub const TABLE_ROWS: usize = 8;

/// Statistics over a batch of records of one kind.
pub fn summarize(records: &[TrialRecord]) -> Result<Summary> {
    let first = records.first().ok_or_else(|| invalid("no records to summarize"))?;
    if records.iter().any(|r| r.kind != first.kind || r.n != first.n || r.d != first.d) {
        return Err(invalid("records mix experiment kinds or parameters"));
    }
    let mut s = Summary {
        kind: first.kind,
        n: first.n,
        d: first.d,
        records: records.len(),
        failures: 0,
        nontrivial: 0,
        trivial: 0,
        trivial_rate: None,
        log_order: None,
        face_count: None,
        c_value: None,
        duration: None,
        phases: None,
        sylow: Vec::new(),
        tv: Vec::new(),
        lambda: Vec::new(),
        hitting: None,
    };
    let mut groups: Vec<&AbelianGroup> = Vec::new();
    let mut bursts: Vec<&BurstOutput> = Vec::new();
    let mut hits: Vec<&HittingReport> = Vec::new();
    let mut threshold = None;
    for r in records {
        match &r.output {
            TrialOutput::Failed { .. } => s.failures += 1,
            TrialOutput::LtBurst { trivial: true, .. } | TrialOutput::Hitting { trivial: true, .. } => s.trivial += 1,
            TrialOutput::LtBurst { lt, burst, .. } => {
                s.nontrivial += 1;
                groups.push(lt);
                bursts.extend(burst.as_ref());
            }
            TrialOutput::Hitting { lt, report, .. } => {
                s.nontrivial += 1;
                groups.push(lt);
                if let Some(h) = report {
                    threshold = Some(h.threshold);
                    hits.push(h);
                }
            }
            TrialOutput::Qtree { h1, .. } => {
                if h1.is_trivial() {
                    s.trivial += 1;
                } else {
                    s.nontrivial += 1;
                }
                groups.push(h1);
            }
            TrialOutput::Enumerate { .. } | TrialOutput::Constants { .. } => {}
        }
    }
    if s.trivial + s.nontrivial > 0 {
        s.trivial_rate = Some(s.trivial as f64 / (s.trivial + s.nontrivial) as f64);
    }
    let stat = |f: &dyn Fn(&BurstOutput) -> f64| MeanSd::of(&bursts.iter().map(|b| f(b)).collect::<Vec<_>>());
    s.log_order = MeanSd::of(&groups.iter().map(|g| g.log_order()).collect::<Vec<_>>());
    s.face_count = stat(&|b| b.m0 as f64);
    s.c_value = stat(&|b| b.c_value);
    s.duration = stat(&|b| b.duration as f64);
    s.phases = stat(&|b| b.phases as f64);
    if !groups.is_empty() {
        for q in TV_PRIMES {
            let t = sylow_table(&groups, q, TABLE_ROWS)?;
            s.tv.push((q, t.tv));
            if q <= 5 {
                s.sylow.push(t);
            }
        }
    }
    for k in 1..=3 {
        for sub in [true, false] {
            s.lambda.extend(lambda_table(&bursts, k, sub, TABLE_ROWS)?);
        }
    }
    if !hits.is_empty() {
        let at = |m: Option<usize>, h: &HittingReport| m.is_some() && m == h.m_burst;
        let coincide = hits.iter().filter(|h| h.coincide).count();
        s.hitting = Some(HittingSummary {
            trials: hits.len(),
            coincide,
            shadow_at_burst: hits.iter().filter(|h| at(h.m_shadow, h)).count(),
            giant_at_burst: hits.iter().filter(|h| at(h.m_giant, h)).count(),
            rate: coincide as f64 / hits.len() as f64,
            threshold,
        });
    }
    Ok(s)
}

fn csv_writer(dir: &Path, name: &str) -> Result<csv::Writer<File>> {
    csv::Writer::from_path(dir.join(name)).map_err(csv_err)
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map_or(String::new(), |v| format!("{v:.6}"))
}

/// Writes `sylow_ratios.csv`, `lambda_ratios.csv`, `statistics.csv` and
/// `tv_distance.csv` into `dir`.
pub fn write_tables(summary: &Summary, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let mut w = csv_writer(dir, "sylow_ratios.csv")?;
    w.write_record(["sylow_prime", "group", "count", "observed_trivial_ratio", "cohen_lenstra_ratio"])
        .map_err(csv_err)?;
    for t in &summary.sylow {
        for r in &t.rows {
            w.write_record([
                t.q.to_string(),
                r.group.clone(),
                r.count.to_string(),
                fmt_opt(r.observed),
                format!("{:.6}", r.predicted),
            ])
            .map_err(csv_err)?;
        }
    }
    w.flush()?;
    let mut w = csv_writer(dir, "lambda_ratios.csv")?;
    w.write_record(["k", "side", "defined", "group", "count", "observed_trivial_ratio", "lambda_k_ratio", "tv"])
        .map_err(csv_err)?;
    for t in &summary.lambda {
        for r in &t.rows {
            w.write_record([
                t.k.to_string(),
                t.side.clone(),
                t.defined.to_string(),
                r.group.clone(),
                r.count.to_string(),
                fmt_opt(r.observed),
                format!("{:.6}", r.predicted),
                format!("{:.6}", t.tv),
            ])
            .map_err(csv_err)?;
        }
    }
    w.flush()?;
    let mut w = csv_writer(dir, "statistics.csv")?;
    w.write_record(["n", "statistic", "mean", "sd", "count"]).map_err(csv_err)?;
    let stats = [
        ("log_order_lt", summary.log_order),
        ("faces_at_lt", summary.face_count),
        ("c_value", summary.c_value),
        ("duration", summary.duration),
        ("phases", summary.phases),
    ];
    for (name, m) in stats {
        if let Some(m) = m {
            w.write_record([
                summary.n.to_string(),
                name.to_string(),
                format!("{:.6}", m.mean),
                format!("{:.6}", m.sd),
                m.count.to_string(),
            ])
            .map_err(csv_err)?;
        }
    }
    if let Some(r) = summary.trivial_rate {
        w.write_record([
            summary.n.to_string(),
            "trivial_rate".to_string(),
            format!("{r:.6}"),
            String::new(),
            (summary.trivial + summary.nontrivial).to_string(),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    let mut w = csv_writer(dir, "tv_distance.csv")?;
    w.write_record(["n", "sylow_prime", "tv_distance"]).map_err(csv_err)?;
    for (q, tv) in &summary.tv {
        w.write_record([summary.n.to_string(), q.to_string(), format!("{tv:.6}")])
            .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

/// Threshold constants used by `m*`, for reports.
pub fn configured_constants() -> Result<Vec<(usize, f64)>> {
    (2..=5).map(|d| c_d(d).map(|c| (d, c))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeds_are_spread() {
        let mut seen = std::collections::HashSet::new();
        for i in 0..100 {
            for a in 0..10 {
                assert!(seen.insert(trial_seed(7, i, a)));
            }
        }
        assert_ne!(trial_seed(0, 0, 0), trial_seed(1, 0, 0));
    }

    #[test]
    fn mean_sd() {
        let m = MeanSd::of(&[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert!((m.mean - 2.5).abs() < 1e-12);
        assert!((m.sd - (5.0f64 / 3.0).sqrt()).abs() < 1e-12);
        assert!(MeanSd::of(&[]).is_none());
        assert_eq!(MeanSd::of(&[3.0]).unwrap().sd, 0.0);
    }

    #[test]
    fn kth_groups() {
        let g = AbelianGroup::cyclic(2);
        let h = AbelianGroup::cyclic(4);
        let seq = vec![h.clone(), g.clone()];
        assert_eq!(kth_group(&seq, 1), Some(h));
        assert_eq!(kth_group(&seq, 2), Some(g));
        assert_eq!(kth_group(&seq, 3), Some(AbelianGroup::trivial()));
        assert_eq!(kth_group(&seq, 4), None);
        assert_eq!(kth_group(&[], 1), Some(AbelianGroup::trivial()));
    }

    #[test]
    fn config_validation() {
        let mut c = ExperimentConfig::new(ExperimentKind::LtBurst, 12, 2);
        assert!(c.validate().is_ok());
        c.q0 = 10;
        assert!(c.validate().is_err());
        let c = ExperimentConfig::new(ExperimentKind::Qtree, 6, 3);
        assert!(c.validate().is_err());
        let mut c = ExperimentConfig::new(ExperimentKind::Hitting, 3, 2);
        assert!(c.validate().is_err());
        c.n = 10;
        c.trials = 0;
        assert!(c.validate().is_err());
    }

    #[test]
    fn summarize_rejects_empty() {
        assert!(summarize(&[]).is_err());
    }
}
