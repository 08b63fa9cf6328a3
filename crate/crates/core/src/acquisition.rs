//! Acquisition scores and their maximization.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use statrs::distribution::{Continuous, ContinuousCDF, Normal};

use crate::error::{Error, Result};
use crate::gp::PosteriorGp;
use crate::Point;

pub const DEFAULT_PI_THRESHOLD: f64 = 0.1;
pub const DEFAULT_UCB_ZETA: f64 = 1.8;

/// Stand-in for an infinite PI score when the predictive spread is zero.
pub const PI_LIMIT: f64 = 1e300;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum AcquisitionKind {
    /// Standardized improvement over `best_y + threshold`.
    Pi { threshold: f64 },
    Ei,
    Ucb { zeta: f64 },
}

impl Default for AcquisitionKind {
    fn default() -> Self {
        AcquisitionKind::Pi { threshold: DEFAULT_PI_THRESHOLD }
    }
}

impl AcquisitionKind {
    pub fn validate(&self) -> Result<()> {
        match *self {
            AcquisitionKind::Pi { threshold } if !(threshold >= 0.0) => {
                Err(Error::validation("PI threshold must be non-negative"))
            }
            AcquisitionKind::Ucb { zeta } if !(zeta >= 0.0) => Err(Error::validation("UCB coefficient must be non-negative")),
            _ => Ok(()),
        }
    }
}

impl FromStr for AcquisitionKind {
    type Err = Error;

    /// `pi`, `pi:0.1`, `ei`, `ucb`, `ucb:1.8`.
    fn from_str(s: &str) -> Result<Self> {
        let (name, arg) = match s.split_once(':') {
            Some((n, a)) => (n, Some(a)),
            None => (s, None),
        };
        let number = |default: f64| -> Result<f64> {
            arg.map_or(Ok(default), |a| a.trim().parse().map_err(|_| Error::input(format!("bad number in acquisition `{s}`"))))
        };
        let kind = match name.trim() {
            "pi" => AcquisitionKind::Pi { threshold: number(DEFAULT_PI_THRESHOLD)? },
            "ei" if arg.is_none() => AcquisitionKind::Ei,
            "ucb" => AcquisitionKind::Ucb { zeta: number(DEFAULT_UCB_ZETA)? },
            _ => return Err(Error::input(format!("unknown acquisition `{s}` (expected pi[:t], ei, ucb[:zeta])"))),
        };
        kind.validate()?;
        Ok(kind)
    }
}

impl fmt::Display for AcquisitionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AcquisitionKind::Pi { threshold } => write!(f, "pi:{threshold}"),
            AcquisitionKind::Ei => write!(f, "ei"),
            AcquisitionKind::Ucb { zeta } => write!(f, "ucb:{zeta}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Maximizer {
    CandidateSet,
    BoxSearch { n_random: usize, n_local_steps: usize },
}

impl Maximizer {
    pub const DEFAULT_BOX: Maximizer = Maximizer::BoxSearch { n_random: 1000, n_local_steps: 100 };
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AcquisitionSpec {
    pub kind: AcquisitionKind,
    pub maximizer: Maximizer,
}

impl AcquisitionSpec {
    pub fn candidates(kind: AcquisitionKind) -> Self {
        Self { kind, maximizer: Maximizer::CandidateSet }
    }

    pub fn box_search(kind: AcquisitionKind) -> Self {
        Self { kind, maximizer: Maximizer::DEFAULT_BOX }
    }
}

fn std_normal() -> Normal {
    Normal::new(0.0, 1.0).expect("unit normal")
}

/// Scores one point from its predictive mean and standard deviation.
pub fn score(kind: &AcquisitionKind, mu_hat: f64, sigma_hat: f64, best_y: f64) -> Result<f64> {
    if !(sigma_hat >= 0.0) {
        return Err(Error::input(format!("predictive standard deviation must be non-negative, got {sigma_hat}")));
    }
    Ok(match *kind {
        AcquisitionKind::Pi { threshold } => {
            let gap = mu_hat - (best_y + threshold);
            if sigma_hat > 0.0 {
                gap / sigma_hat
            } else if gap > 0.0 {
                PI_LIMIT
            } else if gap < 0.0 {
                -PI_LIMIT
            } else {
                0.0
            }
        }
        AcquisitionKind::Ei => {
            if sigma_hat > 0.0 {
                let z = (mu_hat - best_y) / sigma_hat;
                let n = std_normal();
                sigma_hat * (z * n.cdf(z) + n.pdf(z))
            } else {
                (mu_hat - best_y).max(0.0)
            }
        }
        AcquisitionKind::Ucb { zeta } => mu_hat + zeta * sigma_hat,
    })
}

/// Score for a point when nothing has been observed yet.
///
/// PI and EI have no incumbent, so the prior mean ranks candidates (EI's limit
/// as the incumbent goes to minus infinity, up to a constant). UCB is unaffected.
pub fn score_without_data(kind: &AcquisitionKind, mu_hat: f64, sigma_hat: f64) -> Result<f64> {
    match kind {
        AcquisitionKind::Ucb { .. } => score(kind, mu_hat, sigma_hat, 0.0),
        _ => {
            if !(sigma_hat >= 0.0) {
                return Err(Error::input("predictive standard deviation must be non-negative"));
            }
            Ok(mu_hat)
        }
    }
}

/// The GP-UCB coefficient that carries the regret guarantee for `N` training tasks.
pub fn gp_ucb_zeta(n: usize, t: usize, delta: f64) -> Result<f64> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::domain(format!("need 0 < delta < 1, got {delta}")));
    }
    if t < 1 {
        return Err(Error::domain("need t >= 1"));
    }
    if n <= t + 1 {
        return Err(Error::domain(format!("need N > t + 1, got N = {n}, t = {t}")));
    }
    let (nf, tf) = (n as f64, t as f64);
    let l6 = (6.0 / delta).ln();
    let b = l6 / (nf - tf);
    if !(2.0 * b.sqrt() < 1.0) {
        return Err(Error::domain(format!("need 2 sqrt(b) < 1 with b = log(6/delta)/(N - t) = {b}")));
    }
    let inner = 6.0 * nf * (nf - 3.0 + tf + 2.0 * (tf * l6).sqrt() + 2.0 * l6) / (delta * nf * (nf - tf - 1.0));
    let num = inner.sqrt() + (2.0 * nf * (3.0 / delta).ln()).sqrt();
    let den = ((nf - 1.0) * (1.0 - 2.0 * b.sqrt())).sqrt();
    Ok(num / den)
}

/// Where the acquisition is maximized.
#[derive(Debug, Clone, Copy)]
pub enum Domain<'a> {
    Candidates(&'a [Point]),
    UnitBox(usize),
}

/// The maximizer's choice.
#[derive(Debug, Clone, PartialEq)]
pub struct Choice {
    pub x: Point,
    pub value: f64,
    /// Candidate index when the domain is a candidate list.
    pub index: Option<usize>,
}

/// Scores a batch of points under `posterior`, using `sqrt(k_D(x) + noise)` as the spread.
pub fn score_points(kind: &AcquisitionKind, posterior: &PosteriorGp<'_>, xs: &[Point]) -> Result<Vec<f64>> {
    let (mu, var) = posterior.predict_diag(xs)?;
    let noise = posterior.prior().noise_variance();
    let best = posterior.best_y();
    mu.iter()
        .zip(&var)
        .map(|(&m, &v)| {
            let s = (v + noise).max(0.0).sqrt();
            match best {
                Some(b) => score(kind, m, s, b),
                None => score_without_data(kind, m, s),
            }
        })
        .collect()
}

/// First index of the largest score. NaN scores never win.
fn argmax(scores: &[f64]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, &s) in scores.iter().enumerate() {
        if s.is_nan() {
            continue;
        }
        if best.is_none_or(|b| s > scores[b]) {
            best = Some(i);
        }
    }
    best
}

/// Maximizes the acquisition over `domain`.
///
/// Candidate lists are scored exhaustively with no de-duplication; ties go to the
/// lowest index. Box search draws `n_random` uniform points, then refines the best
/// coordinate-wise for `n_local_steps` rounds.
pub fn maximize(spec: &AcquisitionSpec, posterior: &PosteriorGp<'_>, domain: Domain<'_>, seed: u64) -> Result<Choice> {
    spec.kind.validate()?;
    match domain {
        Domain::Candidates(cands) => {
            if cands.is_empty() {
                return Err(Error::input("candidate set is empty"));
            }
            let scores = score_points(&spec.kind, posterior, cands)?;
            let i = argmax(&scores).ok_or_else(|| Error::Numerical {
                context: "every acquisition score is NaN".into(),
                attempted: vec![],
            })?;
            Ok(Choice { x: cands[i].clone(), value: scores[i], index: Some(i) })
        }
        Domain::UnitBox(d) => {
            let (n_random, n_local) = match spec.maximizer {
                Maximizer::BoxSearch { n_random, n_local_steps } => (n_random, n_local_steps),
                Maximizer::CandidateSet => match Maximizer::DEFAULT_BOX {
                    Maximizer::BoxSearch { n_random, n_local_steps } => (n_random, n_local_steps),
                    Maximizer::CandidateSet => unreachable!(),
                },
            };
            if n_random == 0 {
                return Err(Error::input("box search needs at least one random sample"));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let pts: Vec<Point> = (0..n_random).map(|_| (0..d).map(|_| rng.random::<f64>()).collect()).collect();
            let scores = score_points(&spec.kind, posterior, &pts)?;
            let i = argmax(&scores)
                .ok_or_else(|| Error::Numerical { context: "every acquisition score is NaN".into(), attempted: vec![] })?;
            let (x, value) = refine(&spec.kind, posterior, pts[i].clone(), scores[i], n_local)?;
            Ok(Choice { x, value, index: None })
        }
    }
}

/// Coordinate search: each round tries `+-step` along every axis and halves the
/// step when nothing improves.
fn refine(kind: &AcquisitionKind, posterior: &PosteriorGp<'_>, mut x: Point, mut fx: f64, rounds: usize) -> Result<(Point, f64)> {
    let mut step = 0.05;
    for _ in 0..rounds {
        let mut trials = Vec::with_capacity(2 * x.len());
        for q in 0..x.len() {
            for dir in [-1.0, 1.0] {
                let mut y = x.clone();
                y[q] = (y[q] + dir * step).clamp(0.0, 1.0);
                trials.push(y);
            }
        }
        let scores = score_points(kind, posterior, &trials)?;
        match argmax(&scores) {
            Some(i) if scores[i] > fx => {
                x = trials.swap_remove(i);
                fx = scores[i];
            }
            _ => step *= 0.5,
        }
    }
    Ok((x, fx))
}
