//! Multi-objective parameter search: Pareto non-dominated sorting, a
//! tree-structured Parzen estimator suggesting new assignments from the
//! density ratio between good and remaining trials, and k-means
//! distillation of the resulting front into a few representatives.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bookshelf::RunConfig;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ParamValue {
    Real(f64),
    Int(i64),
    Cat(String),
}

impl ParamValue {
    /// Rendering accepted by `RunConfig::set`.
    pub fn render(&self) -> String {
        match self {
            ParamValue::Real(v) => format!("{v}"),
            ParamValue::Int(v) => format!("{v}"),
            ParamValue::Cat(v) => v.clone(),
        }
    }
}

pub type Assignment = BTreeMap<String, ParamValue>;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum ParamKind {
    Real { lo: f64, hi: f64, log: bool },
    Int { lo: i64, hi: i64 },
    Categorical { choices: Vec<String> },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ParamDesc {
    pub name: String,
    pub kind: ParamKind,
    pub default: ParamValue,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ParamSpace {
    pub params: Vec<ParamDesc>,
}

fn real(name: &str, lo: f64, hi: f64, log: bool, default: f64) -> ParamDesc {
    ParamDesc {
        name: name.into(),
        kind: ParamKind::Real { lo, hi, log },
        default: ParamValue::Real(default),
    }
}

fn int(name: &str, lo: i64, hi: i64, default: i64) -> ParamDesc {
    ParamDesc {
        name: name.into(),
        kind: ParamKind::Int { lo, hi },
        default: ParamValue::Int(default),
    }
}

fn cat(name: &str, choices: &[&str], default: &str) -> ParamDesc {
    ParamDesc {
        name: name.into(),
        kind: ParamKind::Categorical {
            choices: choices.iter().map(|s| s.to_string()).collect(),
        },
        default: ParamValue::Cat(default.into()),
    }
}

impl ParamSpace {
    pub fn validate(&self) -> Result<()> {
        let mut seen = std::collections::BTreeSet::new();
        for p in &self.params {
            if !seen.insert(&p.name) {
                return Err(Error::Config(format!("duplicate parameter '{}'", p.name)));
            }
            match &p.kind {
                ParamKind::Real { lo, hi, .. } => {
                    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                        return Err(Error::Config(format!("bad bounds for '{}'", p.name)));
                    }
                }
                ParamKind::Int { lo, hi } => {
                    if lo > hi {
                        return Err(Error::Config(format!("bad bounds for '{}'", p.name)));
                    }
                }
                ParamKind::Categorical { choices } => {
                    if choices.is_empty() {
                        return Err(Error::Config(format!("no choices for '{}'", p.name)));
                    }
                }
            }
        }
        Ok(())
    }

    /// Assignment holding every parameter's default.
    pub fn defaults(&self) -> Assignment {
        self.params
            .iter()
            .map(|p| (p.name.clone(), p.default.clone()))
            .collect()
    }

    pub fn uniform_sample(&self, rng: &mut ChaCha8Rng) -> Assignment {
        self.params
            .iter()
            .map(|p| {
                let v = match &p.kind {
                    ParamKind::Real { lo, hi, log } => {
                        if *log {
                            ParamValue::Real(
                                (rng.gen_range(lo.ln()..hi.ln())).exp().clamp(*lo, *hi),
                            )
                        } else {
                            ParamValue::Real(rng.gen_range(*lo..*hi))
                        }
                    }
                    ParamKind::Int { lo, hi } => ParamValue::Int(rng.gen_range(*lo..=*hi)),
                    ParamKind::Categorical { choices } => {
                        ParamValue::Cat(choices[rng.gen_range(0..choices.len())].clone())
                    }
                };
                (p.name.clone(), v)
            })
            .collect()
    }

    pub fn contains(&self, a: &Assignment) -> bool {
        self.params.iter().all(|p| match (a.get(&p.name), &p.kind) {
            (Some(ParamValue::Real(v)), ParamKind::Real { lo, hi, .. }) => *v >= *lo && *v <= *hi,
            (Some(ParamValue::Int(v)), ParamKind::Int { lo, hi }) => *v >= *lo && *v <= *hi,
            (Some(ParamValue::Cat(v)), ParamKind::Categorical { choices }) => choices.contains(v),
            _ => false,
        })
    }

    /// The full placement tuning space: spectral-initialization,
    /// refinement, schedule, and placer knobs, with defaults matching
    /// `RunConfig::default`.
    pub fn placement_space() -> ParamSpace {
        ParamSpace {
            params: vec![
                real("low_filter_sigma", 0.5, 16.0, true, 4.0),
                real("mid_filter_sigma", 0.5, 16.0, true, 4.0),
                real("high_filter_sigma", 0.5, 16.0, true, 2.0),
                int("low_filter_k", 1, 6, 4),
                int("mid_filter_k", 1, 6, 2),
                int("high_filter_k", 1, 6, 2),
                real("low_filter_effect", 0.1, 0.8, false, 0.5),
                real("mid_filter_effect", 0.05, 0.5, false, 0.3),
                int("refine_iteration", 0, 8, 3),
                int("refine_num_bin_xy", 4, 64, 16),
                real("detection_ratio", 0.02, 0.3, false, 0.1),
                real("bin_capacity", 0.5, 1.0, false, 0.9),
                cat(
                    "schedule_model",
                    &["gaussian", "exp", "linear", "sigmoid"],
                    "exp",
                ),
                int("schedule_iteration", 50, 400, 150),
                real("sigma_factor", 0.01, 0.5, true, 0.05),
                real("k_factor", 0.5, 8.0, true, 2.0),
                real("density_weight", 1e-4, 1.0, true, 1e-2),
                real("gamma", 1.0, 16.0, true, 4.0),
                real("GP_learning_rate", 1e-3, 0.1, true, 0.01),
                cat("GP_wirelength", &["WA", "LSE"], "WA"),
                real("RePlAce_ref_hpwl", 1e4, 1e6, true, 3.5e5),
                real("RePlAce_LOWER_PCOF", 0.9, 0.99, false, 0.95),
                real("RePlAce_UPPER_PCOF", 1.01, 1.1, false, 1.05),
            ],
        }
    }
}

/// Applies an assignment onto a run configuration via the config's own
/// key parser, so tuned keys and file keys stay in sync.
pub fn apply_assignment(cfg: &mut RunConfig, a: &Assignment) -> Result<()> {
    for (k, v) in a {
        cfg.set(k, &v.render())?;
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum TrialStatus {
    Ok,
    Failed(String),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Trial {
    pub assignment: Assignment,
    /// objective vector, lower is better on every axis
    pub objectives: Vec<f64>,
    pub status: TrialStatus,
}

fn dominates(a: &[f64], b: &[f64]) -> bool {
    let mut strict = false;
    for (x, y) in a.iter().zip(b) {
        if x > y {
            return false;
        }
        if x < y {
            strict = true;
        }
    }
    strict
}

/// Non-dominated sorting: rank 0 is the Pareto front, rank 1 the front
/// after removing rank 0, and so on.
pub fn pareto_rank(objectives: &[Vec<f64>]) -> Vec<usize> {
    let n = objectives.len();
    let mut rank = vec![usize::MAX; n];
    let mut assigned = 0;
    let mut level = 0;
    while assigned < n {
        let mut this_level = Vec::new();
        for i in 0..n {
            if rank[i] != usize::MAX {
                continue;
            }
            let dominated = (0..n).any(|j| {
                j != i && rank[j] == usize::MAX && dominates(&objectives[j], &objectives[i])
            });
            if !dominated {
                this_level.push(i);
            }
        }
        for &i in &this_level {
            rank[i] = level;
        }
        assigned += this_level.len();
        level += 1;
    }
    rank
}

/// Crowding distance within one set of objective vectors (NSGA-II
/// style); boundary points get infinity.
fn crowding(objectives: &[Vec<f64>], members: &[usize]) -> Vec<f64> {
    let m = members.len();
    let mut dist = vec![0.0f64; m];
    if m == 0 {
        return dist;
    }
    let dims = objectives[members[0]].len();
    for d in 0..dims {
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by(|&a, &b| {
            objectives[members[a]][d]
                .partial_cmp(&objectives[members[b]][d])
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        let lo = objectives[members[order[0]]][d];
        let hi = objectives[members[order[m - 1]]][d];
        dist[order[0]] = f64::INFINITY;
        dist[order[m - 1]] = f64::INFINITY;
        if hi > lo {
            for w in 1..m.saturating_sub(1) {
                let prev = objectives[members[order[w - 1]]][d];
                let next = objectives[members[order[w + 1]]][d];
                dist[order[w]] += (next - prev) / (hi - lo);
            }
        }
    }
    dist
}

/// Splits successful-trial indices into the favored set L (best
/// `gamma_q` fraction by Pareto rank, ties broken by crowding) and the
/// rest G. |L| = max(1, ceil(gamma_q * n)).
pub fn split_history(objectives: &[Vec<f64>], gamma_q: f64) -> (Vec<usize>, Vec<usize>) {
    let n = objectives.len();
    if n == 0 {
        return (Vec::new(), Vec::new());
    }
    let ranks = pareto_rank(objectives);
    let mut order: Vec<usize> = (0..n).collect();
    // crowding per rank level for the tie-break
    let mut crowd = vec![0.0f64; n];
    let max_rank = ranks.iter().copied().max().unwrap_or(0);
    for level in 0..=max_rank {
        let members: Vec<usize> = (0..n).filter(|&i| ranks[i] == level).collect();
        for (slot, &i) in members.iter().enumerate() {
            crowd[i] = crowding(objectives, &members)[slot];
        }
    }
    order.sort_by(|&a, &b| {
        ranks[a].cmp(&ranks[b]).then(
            crowd[b]
                .partial_cmp(&crowd[a])
                .unwrap_or(std::cmp::Ordering::Equal),
        )
    });
    let n_l = ((gamma_q * n as f64).ceil() as usize).max(1).min(n);
    let l = order[..n_l].to_vec();
    let g = order[n_l..].to_vec();
    (l, g)
}

/// One-dimensional Gaussian kernel density over a parameter's
/// transformed range, with per-kernel adaptive bandwidths: each
/// kernel's width is the larger of the gaps to its sorted neighbors,
/// clamped to [1% of the range, the range]. Dense clusters therefore
/// register as sharp density spikes while kernels at the edge of a
/// cluster stay wide enough to propose points in the adjacent gap; a
/// single global bandwidth does neither once the sample is multimodal.
struct Kde {
    points: Vec<f64>,
    bandwidths: Vec<f64>,
    lo: f64,
    hi: f64,
}

impl Kde {
    fn fit(points: Vec<f64>, lo: f64, hi: f64) -> Kde {
        let range = hi - lo;
        let floor = 0.01 * range;
        let mut order: Vec<usize> = (0..points.len()).collect();
        order.sort_by(|&a, &b| points[a].partial_cmp(&points[b]).unwrap_or(std::cmp::Ordering::Equal));
        let mut bandwidths = vec![floor; points.len()];
        for (slot, &i) in order.iter().enumerate() {
            let left = if slot > 0 {
                points[i] - points[order[slot - 1]]
            } else {
                0.0
            };
            let right = if slot + 1 < order.len() {
                points[order[slot + 1]] - points[i]
            } else {
                0.0
            };
            bandwidths[i] = left.max(right).clamp(floor, range);
        }
        Kde {
            points,
            bandwidths,
            lo,
            hi,
        }
    }

    /// Mixture of the point kernels and one uniform pseudo-kernel over
    /// the range (weight 1/(n+1)). The uniform component keeps the
    /// density bounded away from zero, so unexplored regions score
    /// near zero in the likelihood ratio instead of minus infinity and
    /// the search keeps filling holes.
    fn density(&self, x: f64) -> f64 {
        let uniform = 1.0 / (self.hi - self.lo);
        if self.points.is_empty() {
            return uniform;
        }
        let n = self.points.len() as f64;
        let root_2pi = (2.0 * std::f64::consts::PI).sqrt();
        let kernels = self
            .points
            .iter()
            .zip(&self.bandwidths)
            .map(|(p, h)| (-0.5 * ((x - p) / h).powi(2)).exp() / (root_2pi * h))
            .sum::<f64>();
        (kernels + uniform) / (n + 1.0)
    }

    /// Draws a candidate. A fixed fraction of draws is uniform over the
    /// range: the likelihood-ratio score already ranks candidates, but
    /// gaps between kernel clusters are proposed with near-zero
    /// probability unless some candidates ignore the kernels entirely.
    fn sample(&self, rng: &mut ChaCha8Rng) -> f64 {
        let explore = (1.0 / (self.points.len() + 1) as f64).max(0.25);
        if rng.gen::<f64>() < explore {
            return rng.gen_range(self.lo..self.hi);
        }
        let pick = rng.gen_range(0..self.points.len());
        let center = self.points[pick];
        // Box-Muller normal draw
        let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
        let u2: f64 = rng.gen::<f64>();
        let z = (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos();
        (center + self.bandwidths[pick] * z).clamp(self.lo, self.hi)

    }
}

fn transform(kind: &ParamKind, v: &ParamValue) -> f64 {
    match (kind, v) {
        (ParamKind::Real { log: true, .. }, ParamValue::Real(x)) => x.ln(),
        (ParamKind::Real { .. }, ParamValue::Real(x)) => *x,
        (ParamKind::Int { .. }, ParamValue::Int(x)) => *x as f64,
        _ => f64::NAN,
    }
}

fn numeric_range(kind: &ParamKind) -> (f64, f64) {
    match kind {
        ParamKind::Real { lo, hi, log: true } => (lo.ln(), hi.ln()),
        ParamKind::Real { lo, hi, log: false } => (*lo, *hi),
        ParamKind::Int { lo, hi } => (*lo as f64, *hi as f64),
        ParamKind::Categorical { .. } => (0.0, 1.0),
    }
}

fn untransform(kind: &ParamKind, x: f64) -> ParamValue {
    match kind {
        ParamKind::Real { lo, hi, log: true } => ParamValue::Real(x.exp().clamp(*lo, *hi)),
        ParamKind::Real { lo, hi, log: false } => ParamValue::Real(x.clamp(*lo, *hi)),
        ParamKind::Int { lo, hi } => ParamValue::Int((x.round() as i64).clamp(*lo, *hi)),
        ParamKind::Categorical { .. } => unreachable!("categoricals use frequency sampling"),
    }
}

/// Smoothed categorical frequencies over the given trials.
fn cat_probs(choices: &[String], values: &[&ParamValue]) -> Vec<f64> {
    let mut counts = vec![1.0f64; choices.len()];
    for v in values {
        if let ParamValue::Cat(s) = v {
            if let Some(idx) = choices.iter().position(|c| c == s) {
                counts[idx] += 1.0;
            }
        }
    }
    let total: f64 = counts.iter().sum();
    counts.iter().map(|c| c / total).collect()
}

/// Proposes the next assignment: candidates are drawn from the favored
/// set's per-parameter density estimate and scored by the likelihood
/// ratio against the remaining trials' estimate.
pub fn motpe_suggest(
    history: &[Trial],
    space: &ParamSpace,
    gamma_q: f64,
    n_cand: usize,
    rng: &mut ChaCha8Rng,
) -> Assignment {
    let ok: Vec<&Trial> = history
        .iter()
        .filter(|t| t.status == TrialStatus::Ok)
        .collect();
    if ok.is_empty() {
        return space.uniform_sample(rng);
    }
    let objectives: Vec<Vec<f64>> = ok.iter().map(|t| t.objectives.clone()).collect();
    let (l_idx, g_idx) = split_history(&objectives, gamma_q);

    enum ParamModel {
        Numeric { l: Kde, g: Kde },
        Cat { l: Vec<f64>, g: Vec<f64> },
    }
    let models: Vec<ParamModel> = space
        .params
        .iter()
        .map(|p| match &p.kind {
            ParamKind::Categorical { choices } => {
                let vals = |idx: &[usize]| -> Vec<&ParamValue> {
                    idx.iter()
                        .filter_map(|&i| ok[i].assignment.get(&p.name))
                        .collect()
                };
                ParamModel::Cat {
                    l: cat_probs(choices, &vals(&l_idx)),
                    g: cat_probs(choices, &vals(&g_idx)),
                }
            }
            kind => {
                let (lo, hi) = numeric_range(kind);
                let pts = |idx: &[usize]| -> Vec<f64> {
                    idx.iter()
                        .filter_map(|&i| ok[i].assignment.get(&p.name))
                        .map(|v| transform(kind, v))
                        .filter(|x| x.is_finite())
                        .collect()
                };
                ParamModel::Numeric {
                    l: Kde::fit(pts(&l_idx), lo, hi),
                    g: Kde::fit(pts(&g_idx), lo, hi),
                }
            }
        })
        .collect();

    let mut best: Option<(f64, Assignment)> = None;
    for _ in 0..n_cand.max(1) {
        let mut a = Assignment::new();
        let mut score = 0.0;
        for (p, model) in space.params.iter().zip(&models) {
            match model {
                ParamModel::Numeric { l, g } => {
                    let x = l.sample(rng);
                    score += (l.density(x).max(1e-300)).ln() - (g.density(x).max(1e-300)).ln();
                    a.insert(p.name.clone(), untransform(&p.kind, x));
                }
                ParamModel::Cat { l, g } => {
                    let choices = match &p.kind {
                        ParamKind::Categorical { choices } => choices,
                        _ => unreachable!(),
                    };
                    // draw from L's smoothed frequencies
                    let r: f64 = rng.gen();
                    let mut acc = 0.0;
                    let mut pick = choices.len() - 1;
                    for (i, pr) in l.iter().enumerate() {
                        acc += pr;
                        if r < acc {
                            pick = i;
                            break;
                        }
                    }
                    score += l[pick].ln() - g[pick].ln();
                    a.insert(p.name.clone(), ParamValue::Cat(choices[pick].clone()));
                }
            }
        }
        if best.as_ref().map_or(true, |(s, _)| score > *s) {
            best = Some((score, a));
        }
    }
    best.unwrap().1
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TunerConfig {
    pub gamma_q: f64,
    pub n_cand: usize,
    /// trials drawn uniformly before density-ratio proposals take over;
    /// without this startup phase the estimators are fit on a single
    /// tight cluster and the search cannot leave it
    pub n_startup: usize,
    pub seed: u64,
}

impl Default for TunerConfig {
    fn default() -> Self {
        TunerConfig {
            gamma_q: 0.25,
            n_cand: 24,
            n_startup: 10,
            seed: 1,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TunerOutcome {
    pub trials: Vec<Trial>,
    /// indices into `trials` forming the rank-0 front
    pub front: Vec<usize>,
}

/// Runs the search: the first trial evaluates the space defaults (warm
/// start), the next `n_startup - 1` sample uniformly, and the rest come
/// from the density-ratio proposals. Failed evaluations are recorded
/// and excluded from the estimators.
pub fn run_tuner<F>(
    space: &ParamSpace,
    budget: usize,
    cfg: &TunerConfig,
    mut evaluate: F,
) -> Result<TunerOutcome>
where
    F: FnMut(&Assignment) -> Result<Vec<f64>>,
{
    space.validate()?;
    if budget == 0 {
        return Err(Error::Config("tuner budget must be >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut trials: Vec<Trial> = Vec::with_capacity(budget);
    for t in 0..budget {
        let assignment = if t == 0 {
            space.defaults()
        } else if t < cfg.n_startup {
            space.uniform_sample(&mut rng)
        } else {
            motpe_suggest(&trials, space, cfg.gamma_q, cfg.n_cand, &mut rng)
        };
        let trial = match evaluate(&assignment) {
            Ok(objectives) => {
                if objectives.iter().any(|o| !o.is_finite()) {
                    Trial {
                        assignment,
                        objectives,
                        status: TrialStatus::Failed("non-finite objective".into()),
                    }
                } else {
                    Trial {
                        assignment,
                        objectives,
                        status: TrialStatus::Ok,
                    }
                }
            }
            Err(e) => Trial {
                assignment,
                objectives: Vec::new(),
                status: TrialStatus::Failed(e.to_string()),
            },
        };
        trials.push(trial);
    }
    let ok_idx: Vec<usize> = (0..trials.len())
        .filter(|&i| trials[i].status == TrialStatus::Ok)
        .collect();
    let objectives: Vec<Vec<f64>> = ok_idx.iter().map(|&i| trials[i].objectives.clone()).collect();
    let ranks = pareto_rank(&objectives);
    let front = ok_idx
        .iter()
        .zip(&ranks)
        .filter(|(_, &r)| r == 0)
        .map(|(&i, _)| i)
        .collect();
    Ok(TunerOutcome { trials, front })
}

/// k-means (fixed seed, 50 restarts) over min-max normalized objective
/// vectors; returns, per cluster, the index of the front member nearest
/// its centroid. k >= |front| returns everything.
pub fn distill(objectives: &[Vec<f64>], k: usize, seed: u64) -> Vec<usize> {
    let n = objectives.len();
    if n == 0 {
        return Vec::new();
    }
    if k >= n {
        return (0..n).collect();
    }
    let dims = objectives[0].len();
    // min-max normalize
    let mut norm = vec![vec![0.0f64; dims]; n];
    for d in 0..dims {
        let lo = objectives.iter().map(|o| o[d]).fold(f64::INFINITY, f64::min);
        let hi = objectives
            .iter()
            .map(|o| o[d])
            .fold(f64::NEG_INFINITY, f64::max);
        let span = if hi > lo { hi - lo } else { 1.0 };
        for i in 0..n {
            norm[i][d] = (objectives[i][d] - lo) / span;
        }
    }
    let dist2 = |a: &[f64], b: &[f64]| -> f64 {
        a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
    };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<(f64, Vec<usize>)> = None;
    for _ in 0..50 {
        // random distinct initial centroids
        let mut centers: Vec<Vec<f64>> = Vec::with_capacity(k);
        let mut chosen = std::collections::BTreeSet::new();
        while chosen.len() < k {
            chosen.insert(rng.gen_range(0..n));
        }
        for &i in &chosen {
            centers.push(norm[i].clone());
        }
        let mut labels = vec![0usize; n];
        for _ in 0..100 {
            let mut moved = false;
            for i in 0..n {
                let nearest = (0..k)
                    .min_by(|&a, &b| {
                        dist2(&norm[i], &centers[a])
                            .partial_cmp(&dist2(&norm[i], &centers[b]))
                            .unwrap_or(std::cmp::Ordering::Equal)
                    })
                    .unwrap();
                if labels[i] != nearest {
                    labels[i] = nearest;
                    moved = true;
                }
            }
            for c in 0..k {
                let members: Vec<usize> = (0..n).filter(|&i| labels[i] == c).collect();
                if members.is_empty() {
                    continue;
                }
                for d in 0..dims {
                    centers[c][d] =
                        members.iter().map(|&i| norm[i][d]).sum::<f64>() / members.len() as f64;
                }
            }
            if !moved {
                break;
            }
        }
        let inertia: f64 = (0..n).map(|i| dist2(&norm[i], &centers[labels[i]])).sum();
        if best.as_ref().map_or(true, |(b, _)| inertia < *b) {
            // representative per non-empty cluster: nearest member
            let mut reps = Vec::new();
            for c in 0..k {
                let members: Vec<usize> = (0..n).filter(|&i| labels[i] == c).collect();
                if let Some(&r) = members.iter().min_by(|&&a, &&b| {
                    dist2(&norm[a], &centers[c])
                        .partial_cmp(&dist2(&norm[b], &centers[c]))
                        .unwrap_or(std::cmp::Ordering::Equal)
                }) {
                    reps.push(r);
                }
            }
            reps.sort_unstable();
            best = Some((inertia, reps));
        }
    }
    best.unwrap().1
}

/// 2D hypervolume dominated by a minimization front relative to a
/// reference corner (both objectives below the reference contribute).
pub fn hypervolume_2d(points: &[(f64, f64)], reference: (f64, f64)) -> f64 {
    let mut pts: Vec<(f64, f64)> = points
        .iter()
        .copied()
        .filter(|&(a, b)| a < reference.0 && b < reference.1)
        .collect();
    pts.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal));
    let mut volume = 0.0;
    let mut best_b = reference.1;
    for &(a, b) in &pts {
        if b < best_b {
            volume += (reference.0 - a) * (best_b - b);
            best_b = b;
        }
    }
    volume
}
