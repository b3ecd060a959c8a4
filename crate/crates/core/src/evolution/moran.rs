use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::{Game, PlayerSide};
use crate::scalar::Payoff;

/// Parameters of the two-population imitation process.
///
/// Randomness comes from ChaCha8 seeded with `seed` via
/// `SeedableRng::seed_from_u64`, so a config reproduces its chain exactly.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MoranConfig {
    pub n_row: u64,
    pub n_col: u64,
    /// Selection strength: fitness is `exp(delta * payoff)`.
    pub delta: f64,
    /// Probability that an updating agent picks a uniformly random strategy
    /// instead of imitating.
    pub mutation: f64,
    pub steps: u64,
    pub burn_in: u64,
    pub seed: u64,
    /// Number of batches for the batch-means standard errors.
    pub batches: usize,
}

impl Default for MoranConfig {
    fn default() -> Self {
        MoranConfig {
            n_row: 40,
            n_col: 40,
            delta: 0.01,
            mutation: 0.05,
            steps: 10_000_000,
            burn_in: 100_000,
            seed: 0,
            batches: 100,
        }
    }
}

impl MoranConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidArgument(msg.to_string()));
        if self.n_row < 2 || self.n_col < 2 {
            return bad("population sizes must be at least 2");
        }
        if !(0.0..=1.0).contains(&self.mutation) {
            return bad("mutation probability must lie in [0, 1]");
        }
        if !self.delta.is_finite() || self.delta < 0.0 {
            return bad("selection strength must be finite and >= 0");
        }
        if self.burn_in >= self.steps {
            return bad("burn-in must be shorter than the run");
        }
        if self.batches < 2 || ((self.steps - self.burn_in) as u128) < self.batches as u128 {
            return bad("need at least 2 batches and one sample per batch");
        }
        Ok(())
    }

    pub fn population(&self, side: PlayerSide) -> u64 {
        match side {
            PlayerSide::Row => self.n_row,
            PlayerSide::Column => self.n_col,
        }
    }
}

/// Time-averaged strategy frequencies after burn-in.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MoranEstimate {
    pub row_abundance: Vec<f64>,
    pub col_abundance: Vec<f64>,
    /// Batch-means standard errors, per strategy.
    pub row_std_error: Vec<f64>,
    pub col_std_error: Vec<f64>,
    /// Number of averaged states (`steps - burn_in`).
    pub samples: u64,
}

impl MoranEstimate {
    pub fn abundance(&self, side: PlayerSide) -> &[f64] {
        match side {
            PlayerSide::Row => &self.row_abundance,
            PlayerSide::Column => &self.col_abundance,
        }
    }

    pub fn std_error(&self, side: PlayerSide) -> &[f64] {
        match side {
            PlayerSide::Row => &self.row_std_error,
            PlayerSide::Column => &self.col_std_error,
        }
    }

    /// JSON summary: per-population abundance and standard error.
    pub fn summary_json(&self) -> serde_json::Value {
        serde_json::json!({
            "row": { "abundance": self.row_abundance, "std_error": self.row_std_error },
            "col": { "abundance": self.col_abundance, "std_error": self.col_std_error },
            "samples": self.samples,
        })
    }
}

/// Strategy counts of both populations after `step` updates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Snapshot {
    pub step: u64,
    pub row_counts: Vec<u64>,
    pub col_counts: Vec<u64>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Trajectory {
    pub snapshots: Vec<Snapshot>,
}

impl Trajectory {
    /// CSV `step,strategy,population,count` with 1-based strategy indices.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("step,strategy,population,count\n");
        for s in &self.snapshots {
            for (pop, counts) in [("row", &s.row_counts), ("col", &s.col_counts)] {
                for (k, c) in counts.iter().enumerate() {
                    out.push_str(&format!("{},{},{},{}\n", s.step, k + 1, pop, c));
                }
            }
        }
        out
    }
}

/// One population's counts and cached imitation weights.
struct Population {
    counts: Vec<u64>,
    size: u64,
    payoffs: Vec<f64>,
    weights: Vec<f64>,
    stale: bool,
}

impl Population {
    fn new(strategies: usize, size: u64) -> Self {
        let mut counts = vec![0; strategies];
        for k in 0..size {
            counts[(k % strategies as u64) as usize] += 1;
        }
        Population {
            counts,
            size,
            payoffs: vec![0.0; strategies],
            weights: vec![0.0; strategies],
            stale: true,
        }
    }

    fn strategy_of(&self, member: u64) -> usize {
        let mut acc = 0;
        for (k, &c) in self.counts.iter().enumerate() {
            acc += c;
            if member < acc {
                return k;
            }
        }
        unreachable!("member index below population size")
    }

    /// Refreshes `N_i exp(delta (u_i - max u))`, where `u_i` is strategy
    /// `i`'s mean payoff against the opposing population.
    fn refresh(&mut self, payoff: &[f64], opponent: &[u64], opponent_size: u64, delta: f64) {
        let k = self.counts.len();
        let n = opponent.len();
        let inv = 1.0 / opponent_size as f64;
        for i in 0..k {
            self.payoffs[i] = (0..n).map(|j| payoff[i * n + j] * opponent[j] as f64).sum::<f64>() * inv;
        }
        let top = self.payoffs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        for i in 0..k {
            self.weights[i] = self.counts[i] as f64 * (delta * (self.payoffs[i] - top)).exp();
        }
        self.stale = false;
    }
}

/// Runs the chain and returns time-averaged abundances.
pub fn moran_simulate<T: Payoff>(g: &Game<T>, cfg: &MoranConfig) -> Result<MoranEstimate> {
    run_chain(g, cfg, None).map(|(e, _)| e)
}

/// Like [`moran_simulate`], also recording the counts every `thinning`
/// steps (and at step 0).
pub fn moran_simulate_recorded<T: Payoff>(g: &Game<T>, cfg: &MoranConfig, thinning: u64) -> Result<(MoranEstimate, Trajectory)> {
    if thinning == 0 {
        return Err(Error::InvalidArgument("thinning interval must be positive".into()));
    }
    run_chain(g, cfg, Some(thinning))
}

fn run_chain<T: Payoff>(g: &Game<T>, cfg: &MoranConfig, thinning: Option<u64>) -> Result<(MoranEstimate, Trajectory)> {
    cfg.validate()?;
    let (m, n) = (g.rows(), g.cols());
    let to_f64 = |x: &T| x.to_f64().ok_or_else(|| Error::InvalidArgument("payoff not representable as f64".into()));
    // Row payoffs indexed [i][j]; column payoffs transposed to [j][i].
    let a: Vec<f64> = g.row_payoffs().iter().map(to_f64).collect::<Result<_>>()?;
    let mut bt = vec![0.0; m * n];
    for i in 0..m {
        for j in 0..n {
            bt[j * m + i] = to_f64(&g.b(i, j))?;
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut row = Population::new(m, cfg.n_row);
    let mut col = Population::new(n, cfg.n_col);
    let total = cfg.n_row + cfg.n_col;

    let samples = cfg.steps - cfg.burn_in;
    let batches = cfg.batches as u64;
    let boundary = |b: u64| cfg.burn_in + ((b as u128 * samples as u128) / batches as u128) as u64;
    let mut batch_sums = vec![vec![0u64; m + n]; cfg.batches];
    let mut batch = 0usize;
    let mut next_boundary = boundary(1);

    let mut trajectory = Trajectory::default();
    if thinning.is_some() {
        trajectory.snapshots.push(Snapshot { step: 0, row_counts: row.counts.clone(), col_counts: col.counts.clone() });
    }

    for step in 0..cfg.steps {
        let pick = rng.random_range(0..total);
        let (pop, other, payoff, member) = if pick < cfg.n_row {
            (&mut row, &col, &a, pick)
        } else {
            (&mut col, &row, &bt, pick - cfg.n_row)
        };
        let current = pop.strategy_of(member);
        let k = pop.counts.len();
        let next = if rng.random::<f64>() < cfg.mutation {
            rng.random_range(0..k)
        } else {
            if pop.stale {
                pop.refresh(payoff, &other.counts, other.size, cfg.delta);
            }
            let total_weight: f64 = pop.weights.iter().sum();
            let mut r = rng.random::<f64>() * total_weight;
            let mut chosen = k - 1;
            for (s, &w) in pop.weights.iter().enumerate() {
                if r < w {
                    chosen = s;
                    break;
                }
                r -= w;
            }
            chosen
        };
        if next != current {
            pop.counts[current] -= 1;
            pop.counts[next] += 1;
            row.stale = true;
            col.stale = true;
        }

        if step >= cfg.burn_in {
            if step >= next_boundary {
                batch += 1;
                next_boundary = boundary(batch as u64 + 1);
            }
            let sums = &mut batch_sums[batch];
            for (s, &c) in sums.iter_mut().zip(row.counts.iter().chain(&col.counts)) {
                *s += c;
            }
        }
        if let Some(t) = thinning {
            if (step + 1) % t == 0 {
                trajectory.snapshots.push(Snapshot {
                    step: step + 1,
                    row_counts: row.counts.clone(),
                    col_counts: col.counts.clone(),
                });
            }
        }
    }

    let lens: Vec<u64> = (0..batches).map(|b| boundary(b + 1) - boundary(b)).collect();
    let summarize = |offset: usize, len: usize, size: u64| {
        let mut abundance = Vec::with_capacity(len);
        let mut std_error = Vec::with_capacity(len);
        for s in offset..offset + len {
            let total: u64 = batch_sums.iter().map(|b| b[s]).sum();
            let mean = total as f64 / (samples as f64 * size as f64);
            let means: Vec<f64> = batch_sums
                .iter()
                .zip(&lens)
                .map(|(b, &l)| b[s] as f64 / (l as f64 * size as f64))
                .collect();
            let bm = means.iter().sum::<f64>() / means.len() as f64;
            let var = means.iter().map(|x| (x - bm).powi(2)).sum::<f64>() / (means.len() - 1) as f64;
            abundance.push(mean);
            std_error.push((var / means.len() as f64).sqrt());
        }
        (abundance, std_error)
    };
    let (row_abundance, row_std_error) = summarize(0, m, cfg.n_row);
    let (col_abundance, col_std_error) = summarize(m, n, cfg.n_col);
    Ok((
        MoranEstimate { row_abundance, col_abundance, row_std_error, col_std_error, samples },
        trajectory,
    ))
}
