//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use dilemma_core::game::{classify_dilemma, DilemmaKind, NormalFormGame};
use dilemma_core::transfer::TransferMatrix;
use rand::Rng;

/// Post-transfer reward of `player` at `profile`, computed from scratch.
pub fn transferred(game: &NormalFormGame, t: &TransferMatrix, profile: usize, player: usize) -> f64 {
    let n = game.players();
    let p = game.profile(profile).unwrap();
    (0..n).map(|j| t.get(j, player) * game.reward(p, j)).sum()
}

/// Largest gain any player gets by leaving `target` against any co-player
/// choice, enumerating all `2^n` profiles.
pub fn worst_deviation_gain(game: &NormalFormGame, t: &TransferMatrix, target: usize) -> f64 {
    let n = game.players();
    let mut worst = f64::NEG_INFINITY;
    for profile in 0..1usize << n {
        for player in 0..n {
            let on_target = (profile >> player & 1) == (target >> player & 1);
            if !on_target {
                continue;
            }
            let dev = profile ^ (1 << player);
            worst = worst.max(transferred(game, t, dev, player) - transferred(game, t, profile, player));
        }
    }
    worst
}

/// Exchange matrix built without the library.
pub fn exchange(n: usize, s: f64) -> TransferMatrix {
    let off = (1.0 - s) / (n - 1) as f64;
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { s } else { off }).collect())
        .collect();
    TransferMatrix::from_rows(&rows).unwrap()
}

/// Bisection for the largest exchange level that keeps all-C weakly dominant.
pub fn bisect_symmetric_level(game: &NormalFormGame, tol: f64) -> f64 {
    let n = game.players();
    let ok = |s: f64| worst_deviation_gain(game, &exchange(n, s), 0) <= 1e-12;
    if ok(1.0) {
        return 1.0;
    }
    let (mut lo, mut hi) = (1.0 / n as f64, 1.0);
    assert!(ok(lo), "mean-welfare exchange must resolve a dilemma");
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if ok(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// A random public-goods style game: cooperating pays others, defecting pays
/// oneself, plus noise. Callers filter with `classify_dilemma`.
pub fn random_candidate<R: Rng>(rng: &mut R, n: usize) -> NormalFormGame {
    let benefit: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..n).map(|_| rng.gen_range(0.2..2.0)).collect())
        .collect();
    let temptation: Vec<f64> = (0..n).map(|_| rng.gen_range(0.1..1.0)).collect();
    NormalFormGame::from_fn(n, |p| {
        (0..n)
            .map(|i| {
                let mut r: f64 = (0..n)
                    .filter(|&j| j != i && p.bits() >> j & 1 == 0)
                    .map(|j| benefit[j][i])
                    .sum();
                if p.bits() >> i & 1 == 1 {
                    r += temptation[i];
                }
                r + rng.gen_range(-0.05..0.05)
            })
            .collect()
    })
    .unwrap()
}

pub fn random_strict_dilemma<R: Rng>(rng: &mut R, n: usize) -> NormalFormGame {
    loop {
        let g = random_candidate(rng, n);
        if classify_dilemma(&g).kind == DilemmaKind::Strict {
            return g;
        }
    }
}
