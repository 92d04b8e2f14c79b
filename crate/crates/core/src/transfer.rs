//! Reward transfer matrices.
//!
//! Entry `(i, j)` is the share of player `i`'s game reward that is sent to
//! player `j` (row gives, column receives), so the post-transfer reward of
//! player `i` is `sum_j t[j][i] * r[j]`.

use std::fmt;

use crate::error::{Error, Result};
use crate::game::{self, ActionProfile, DominanceReport, NormalFormGame};

/// Entries this far outside `[0, 1]` are clamped rather than rejected.
pub const CLAMP_TOL: f64 = 1e-12;

/// Row sums may exceed one by at most this much.
pub const ROW_SUM_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct TransferMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl TransferMatrix {
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(Error::invalid(format!(
                "transfer matrix row {} has {} entries, expected {n}",
                i + 1,
                r.len()
            )));
        }
        TransferMatrix::from_flat(n, rows.iter().flatten().copied().collect())
    }

    pub fn from_flat(n: usize, entries: Vec<f64>) -> Result<Self> {
        TransferMatrix::from_flat_with_clamp(n, entries, CLAMP_TOL)
    }

    /// Like [`from_flat`](Self::from_flat) but with a caller-chosen clamp margin,
    /// for matrices read back from a solver with its own feasibility tolerance.
    pub fn from_flat_with_clamp(n: usize, mut entries: Vec<f64>, clamp: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("empty transfer matrix"));
        }
        if entries.len() != n * n {
            return Err(Error::invalid(format!(
                "transfer matrix has {} entries, expected {}",
                entries.len(),
                n * n
            )));
        }
        for (k, t) in entries.iter_mut().enumerate() {
            if !t.is_finite() || *t < -clamp || *t > 1.0 + clamp {
                return Err(Error::invalid(format!(
                    "transfer share t[{}][{}] = {t} outside [0, 1]",
                    k / n + 1,
                    k % n + 1
                )));
            }
            *t = t.clamp(0.0, 1.0);
        }
        let m = TransferMatrix { n, entries };
        for i in 0..n {
            let s = m.row_sum(i);
            if s > 1.0 + ROW_SUM_TOL.max(clamp * n as f64) {
                return Err(Error::invalid(format!(
                    "row {} of transfer matrix sums to {s} > 1",
                    i + 1
                )));
            }
        }
        Ok(m)
    }

    pub fn identity(n: usize) -> Self {
        let mut entries = vec![0.0; n * n];
        for i in 0..n {
            entries[i * n + i] = 1.0;
        }
        TransferMatrix { n, entries }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, from: usize, to: usize) -> f64 {
        self.entries[from * self.n + to]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn flat(&self) -> &[f64] {
        &self.entries
    }

    pub fn row_sum(&self, i: usize) -> f64 {
        self.row(i).iter().sum()
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    pub fn min_diagonal(&self) -> f64 {
        self.diagonal().into_iter().fold(f64::INFINITY, f64::min)
    }

    pub fn is_conserving(&self, tol: f64) -> bool {
        (0..self.n).all(|i| (self.row_sum(i) - 1.0).abs() <= tol)
    }

    pub fn max_abs_diff(&self, other: &TransferMatrix) -> Option<f64> {
        (self.n == other.n).then(|| {
            self.entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max)
        })
    }
}

impl fmt::Display for TransferMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            let cells: Vec<String> = self.row(i).iter().map(|t| format!("{t:8.5}")).collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

/// Keep `s` of your own reward and split the rest equally over the co-players.
pub fn exchange_matrix(n: usize, s: f64) -> Result<TransferMatrix> {
    if n < 2 {
        return Err(Error::invalid(format!("reward exchange needs n >= 2, got {n}")));
    }
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::invalid(format!("exchange level {s} outside [0, 1]")));
    }
    let off = (1.0 - s) / (n - 1) as f64;
    let mut entries = vec![off; n * n];
    for i in 0..n {
        entries[i * n + i] = s;
    }
    Ok(TransferMatrix { n, entries })
}

pub fn post_transfer_rewards(rewards: &[f64], t: &TransferMatrix) -> Result<Vec<f64>> {
    if rewards.len() != t.n {
        return Err(Error::invalid(format!(
            "{} rewards for a {}x{} transfer matrix",
            rewards.len(),
            t.n,
            t.n
        )));
    }
    Ok(transfer_unchecked(rewards, t))
}

fn transfer_unchecked(rewards: &[f64], t: &TransferMatrix) -> Vec<f64> {
    let n = t.n;
    let mut out = vec![0.0; n];
    for (j, &r) in rewards.iter().enumerate() {
        if r == 0.0 {
            continue;
        }
        for (o, share) in out.iter_mut().zip(t.row(j)) {
            *o += share * r;
        }
    }
    out
}

pub fn apply_transfers(game: &NormalFormGame, t: &TransferMatrix) -> Result<NormalFormGame> {
    let n = game.players();
    if t.n != n {
        return Err(Error::invalid(format!(
            "{}x{} transfer matrix for a {n}-player game",
            t.n, t.n
        )));
    }
    let payoffs: Vec<f64> = game
        .flat_payoffs()
        .chunks_exact(n)
        .flat_map(|r| transfer_unchecked(r, t))
        .collect();
    let out = NormalFormGame::from_flat(n, payoffs)?;
    match game.labels() {
        Some(l) => out.with_labels(l.to_vec()),
        None => Ok(out),
    }
}

/// Applies `t` and checks whether `target` is dominant in the transformed game.
pub fn verify_resolution(
    game: &NormalFormGame,
    t: &TransferMatrix,
    target: ActionProfile,
    tolerance: f64,
) -> Result<DominanceReport> {
    game.check_profile(target)?;
    let optima = game::social_optima(game, tolerance);
    if !optima.contains(&target) {
        log::warn!("target {target} is not a social welfare optimum of the game");
    }
    let transformed = apply_transfers(game, t)?;
    game::check_dominance(&transformed, target, tolerance)
}

/// True iff transfers leave every profile's total welfare unchanged.
pub fn conservation_check(game: &NormalFormGame, t: &TransferMatrix, tolerance: f64) -> Result<bool> {
    if !t.is_conserving(ROW_SUM_TOL) {
        return Err(Error::invalid(
            "conservation check needs rows summing to one; use the excess report instead",
        ));
    }
    let transformed = apply_transfers(game, t)?;
    Ok(game
        .profiles()
        .all(|p| (game.welfare(p) - transformed.welfare(p)).abs() <= tolerance))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExcessReport {
    pub slack: Vec<f64>,
    pub total: f64,
}

pub fn excess_report(t: &TransferMatrix) -> ExcessReport {
    let slack: Vec<f64> = (0..t.n).map(|i| 1.0 - t.row_sum(i)).collect();
    let total = slack.iter().sum();
    ExcessReport { slack, total }
}
