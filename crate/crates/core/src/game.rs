//! Binary-action normal-form games, welfare, and dilemma classification.
//!
//! Profiles are bit-encoded: bit `k` of the index holds the action of the
//! player stored at position `k` (player `k + 1` in all user-facing output),
//! with 0 = cooperate and 1 = defect. The payoff table is stored in index
//! order, `n` rewards per profile.

use std::fmt;

use crate::error::{Error, Result};

/// Default margin for the strict inequalities in the dilemma definition.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Largest player count for which a full payoff table may be built.
pub const MAX_PLAYERS: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Action {
    C,
    D,
}

impl Action {
    pub fn from_bit(bit: usize) -> Self {
        if bit & 1 == 0 {
            Action::C
        } else {
            Action::D
        }
    }

    pub fn bit(self) -> usize {
        match self {
            Action::C => 0,
            Action::D => 1,
        }
    }

    pub fn other(self) -> Self {
        match self {
            Action::C => Action::D,
            Action::D => Action::C,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Action::C => 'C',
            Action::D => 'D',
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'C' => Some(Action::C),
            'D' => Some(Action::D),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ActionProfile {
    bits: usize,
    n: usize,
}

impl ActionProfile {
    pub fn new(bits: usize, n: usize) -> Result<Self> {
        if n == 0 || n > MAX_PLAYERS {
            return Err(Error::invalid(format!(
                "player count {n} outside 1..={MAX_PLAYERS}"
            )));
        }
        if bits >> n != 0 {
            return Err(Error::invalid(format!(
                "profile index {bits} does not fit {n} players"
            )));
        }
        Ok(ActionProfile { bits, n })
    }

    pub fn all(action: Action, n: usize) -> Self {
        let bits = match action {
            Action::C => 0,
            Action::D => (1usize << n) - 1,
        };
        ActionProfile { bits, n }
    }

    pub fn from_actions(actions: &[Action]) -> Result<Self> {
        let bits = actions
            .iter()
            .enumerate()
            .fold(0usize, |acc, (k, a)| acc | (a.bit() << k));
        ActionProfile::new(bits, actions.len())
    }

    pub fn bits(self) -> usize {
        self.bits
    }

    pub fn players(self) -> usize {
        self.n
    }

    pub fn action(self, player: usize) -> Action {
        Action::from_bit(self.bits >> player)
    }

    pub fn actions(self) -> Vec<Action> {
        (0..self.n).map(|k| self.action(k)).collect()
    }

    pub fn with_action(self, player: usize, action: Action) -> Self {
        let bits = (self.bits & !(1 << player)) | (action.bit() << player);
        ActionProfile { bits, n: self.n }
    }

    pub fn flip(self, player: usize) -> Self {
        ActionProfile {
            bits: self.bits ^ (1 << player),
            n: self.n,
        }
    }

    pub fn coplayers(self, player: usize) -> CoPlayerProfile {
        CoPlayerProfile {
            player,
            bits: self.bits & !(1 << player),
            n: self.n,
        }
    }

    pub fn count(self, action: Action) -> usize {
        let defectors = self.bits.count_ones() as usize;
        match action {
            Action::C => self.n - defectors,
            Action::D => defectors,
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let actions = s
            .chars()
            .map(|c| {
                Action::from_char(c)
                    .ok_or_else(|| Error::invalid(format!("invalid action '{c}' in profile \"{s}\"")))
            })
            .collect::<Result<Vec<_>>>()?;
        ActionProfile::from_actions(&actions)
    }
}

impl fmt::Display for ActionProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for k in 0..self.n {
            write!(f, "{}", self.action(k).as_char())?;
        }
        Ok(())
    }
}

/// The actions of everyone except `player`.
///
/// Stored as a full profile index with the player's own bit cleared, so
/// `with_action` is a single OR.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoPlayerProfile {
    player: usize,
    bits: usize,
    n: usize,
}

impl CoPlayerProfile {
    pub fn player(self) -> usize {
        self.player
    }

    pub fn with_action(self, action: Action) -> ActionProfile {
        ActionProfile {
            bits: self.bits | (action.bit() << self.player),
            n: self.n,
        }
    }

    /// All `2^(n-1)` co-player profiles of `player`, in ascending bit order.
    pub fn enumerate(player: usize, n: usize) -> impl Iterator<Item = CoPlayerProfile> {
        let low_mask = (1usize << player) - 1;
        (0..1usize << (n - 1)).map(move |k| {
            let bits = (k & low_mask) | ((k & !low_mask) << 1);
            CoPlayerProfile { player, bits, n }
        })
    }

    /// Parses the `n - 1` character form used in result files.
    pub fn parse(player: usize, n: usize, s: &str) -> Result<Self> {
        if player >= n || s.chars().count() != n - 1 {
            return Err(Error::invalid(format!(
                "co-player string \"{s}\" does not fit player {} of {n}",
                player + 1
            )));
        }
        let mut bits = 0;
        for (k, c) in s.chars().enumerate() {
            let a = Action::from_char(c)
                .ok_or_else(|| Error::invalid(format!("invalid action '{c}' in \"{s}\"")))?;
            let slot = if k < player { k } else { k + 1 };
            bits |= a.bit() << slot;
        }
        Ok(CoPlayerProfile { player, bits, n })
    }
}

impl fmt::Display for CoPlayerProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for k in (0..self.n).filter(|&k| k != self.player) {
            write!(f, "{}", Action::from_bit(self.bits >> k).as_char())?;
        }
        Ok(())
    }
}

/// A welfare metric over one profile's reward vector.
pub trait WelfareMetric {
    fn welfare(&self, rewards: &[f64]) -> f64;
}

/// Unweighted sum of rewards.
#[derive(Debug, Clone, Copy, Default)]
pub struct Utilitarian;

impl WelfareMetric for Utilitarian {
    fn welfare(&self, rewards: &[f64]) -> f64 {
        rewards.iter().sum()
    }
}

pub fn utilitarian_welfare(rewards: &[f64]) -> Result<f64> {
    if rewards.is_empty() {
        return Err(Error::invalid("welfare of an empty reward vector"));
    }
    if rewards.iter().any(|r| !r.is_finite()) {
        return Err(Error::invalid("welfare of a non-finite reward"));
    }
    Ok(Utilitarian.welfare(rewards))
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormalFormGame {
    n: usize,
    payoffs: Vec<f64>,
    labels: Option<Vec<String>>,
}

impl NormalFormGame {
    /// Builds a game from a flat table of `2^n * n` rewards in profile index order.
    pub fn from_flat(n: usize, payoffs: Vec<f64>) -> Result<Self> {
        if n < 2 {
            return Err(Error::invalid(format!("a game needs at least 2 players, got {n}")));
        }
        if n > MAX_PLAYERS {
            return Err(Error::invalid(format!(
                "{n} players exceeds the supported maximum of {MAX_PLAYERS}"
            )));
        }
        let expected = (1usize << n) * n;
        if payoffs.len() != expected {
            return Err(Error::invalid(format!(
                "payoff table has {} values, expected {expected}",
                payoffs.len()
            )));
        }
        if let Some(pos) = payoffs.iter().position(|v| !v.is_finite()) {
            return Err(Error::invalid(format!(
                "non-finite payoff at profile {}",
                ActionProfile { bits: pos / n, n }
            )));
        }
        Ok(NormalFormGame {
            n,
            payoffs,
            labels: None,
        })
    }

    pub fn from_rows(n: usize, rows: Vec<Vec<f64>>) -> Result<Self> {
        if (2..=MAX_PLAYERS).contains(&n) && rows.len() != 1 << n {
            return Err(Error::invalid(format!(
                "payoff table has {} profiles, expected {}",
                rows.len(),
                1usize << n
            )));
        }
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(Error::invalid(format!(
                "profile {i} has {} rewards, expected {n}",
                r.len()
            )));
        }
        NormalFormGame::from_flat(n, rows.into_iter().flatten().collect())
    }

    /// Builds a game by evaluating `f` on every profile.
    pub fn from_fn<F>(n: usize, mut f: F) -> Result<Self>
    where
        F: FnMut(ActionProfile) -> Vec<f64>,
    {
        if !(2..=MAX_PLAYERS).contains(&n) {
            return NormalFormGame::from_flat(n, Vec::new());
        }
        let mut payoffs = Vec::with_capacity((1 << n) * n);
        for bits in 0..1usize << n {
            let r = f(ActionProfile { bits, n });
            if r.len() != n {
                return Err(Error::invalid(format!(
                    "generator returned {} rewards for {n} players",
                    r.len()
                )));
            }
            payoffs.extend(r);
        }
        NormalFormGame::from_flat(n, payoffs)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n {
            return Err(Error::invalid(format!(
                "{} labels for {} players",
                labels.len(),
                self.n
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn players(&self) -> usize {
        self.n
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn num_profiles(&self) -> usize {
        1 << self.n
    }

    pub fn profiles(&self) -> impl Iterator<Item = ActionProfile> {
        let n = self.n;
        (0..1usize << n).map(move |bits| ActionProfile { bits, n })
    }

    pub fn rewards(&self, profile: ActionProfile) -> &[f64] {
        debug_assert_eq!(profile.n, self.n);
        let start = profile.bits * self.n;
        &self.payoffs[start..start + self.n]
    }

    pub fn reward(&self, profile: ActionProfile, player: usize) -> f64 {
        self.payoffs[profile.bits * self.n + player]
    }

    pub fn welfare(&self, profile: ActionProfile) -> f64 {
        Utilitarian.welfare(self.rewards(profile))
    }

    pub fn flat_payoffs(&self) -> &[f64] {
        &self.payoffs
    }

    pub fn profile(&self, bits: usize) -> Result<ActionProfile> {
        ActionProfile::new(bits, self.n)
    }

    /// Returns `a * R + b` for every reward.
    pub fn affine(&self, a: f64, b: f64) -> NormalFormGame {
        NormalFormGame {
            n: self.n,
            payoffs: self.payoffs.iter().map(|r| a * r + b).collect(),
            labels: self.labels.clone(),
        }
    }

    pub(crate) fn check_profile(&self, profile: ActionProfile) -> Result<()> {
        if profile.n != self.n {
            return Err(Error::invalid(format!(
                "profile {profile} has {} players, game has {}",
                profile.n, self.n
            )));
        }
        Ok(())
    }

    /// Max absolute difference between two games' payoffs, or `None` if shapes differ.
    pub fn max_abs_diff(&self, other: &NormalFormGame) -> Option<f64> {
        if self.n != other.n {
            return None;
        }
        Some(
            self.payoffs
                .iter()
                .zip(&other.payoffs)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DilemmaKind {
    Strict,
    Partial,
    NotDilemma,
}

impl fmt::Display for DilemmaKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            DilemmaKind::Strict => "Strict",
            DilemmaKind::Partial => "Partial",
            DilemmaKind::NotDilemma => "NotDilemma",
        };
        f.write_str(s)
    }
}

/// A concrete reason a game fails the dilemma definition.
#[derive(Debug, Clone, PartialEq)]
pub enum DilemmaWitness {
    /// Condition (i): defecting does not lower welfare against these co-players.
    WelfareNotIncreasing {
        player: usize,
        coplayers: CoPlayerProfile,
        /// `SW(C) - SW(D)`, which should be positive.
        margin: f64,
    },
    /// Condition (ii), partial form: the player never prefers defection.
    NoDefectionIncentive { player: usize },
    /// Condition (iii): the player does not prefer all-C over all-D.
    MutualCooperationNotPreferred { player: usize, margin: f64 },
}

impl DilemmaWitness {
    pub fn condition(&self) -> &'static str {
        match self {
            DilemmaWitness::WelfareNotIncreasing { .. } => "i",
            DilemmaWitness::NoDefectionIncentive { .. } => "ii",
            DilemmaWitness::MutualCooperationNotPreferred { .. } => "iii",
        }
    }

    pub fn player(&self) -> usize {
        match *self {
            DilemmaWitness::WelfareNotIncreasing { player, .. }
            | DilemmaWitness::NoDefectionIncentive { player }
            | DilemmaWitness::MutualCooperationNotPreferred { player, .. } => player,
        }
    }
}

impl fmt::Display for DilemmaWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DilemmaWitness::WelfareNotIncreasing {
                player,
                coplayers,
                margin,
            } => write!(
                f,
                "condition i: player {} cooperating against co-players {coplayers} changes welfare by {margin}",
                player + 1
            ),
            DilemmaWitness::NoDefectionIncentive { player } => write!(
                f,
                "condition ii: player {} never gains by defecting",
                player + 1
            ),
            DilemmaWitness::MutualCooperationNotPreferred { player, margin } => write!(
                f,
                "condition iii: player {} gains {margin} from all-C over all-D",
                player + 1
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DilemmaClassification {
    pub kind: DilemmaKind,
    pub witnesses: Vec<DilemmaWitness>,
}

impl DilemmaClassification {
    pub fn is_dilemma(&self) -> bool {
        self.kind != DilemmaKind::NotDilemma
    }

    /// Distinct violated conditions, in order i, ii, iii.
    pub fn violated_conditions(&self) -> Vec<&'static str> {
        let mut out: Vec<&'static str> = Vec::new();
        for c in ["i", "ii", "iii"] {
            if self.witnesses.iter().any(|w| w.condition() == c) {
                out.push(c);
            }
        }
        out
    }
}

impl fmt::Display for DilemmaClassification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind)?;
        if self.kind == DilemmaKind::NotDilemma {
            let conds = self.violated_conditions();
            let label = if conds.len() == 1 { "condition" } else { "conditions" };
            write!(f, " ({label} {} violated)", conds.join(", "))?;
        }
        Ok(())
    }
}

pub fn classify_dilemma(game: &NormalFormGame) -> DilemmaClassification {
    classify_dilemma_with(game, &Utilitarian, DEFAULT_TOL)
}

pub fn classify_dilemma_with(
    game: &NormalFormGame,
    metric: &dyn WelfareMetric,
    tol: f64,
) -> DilemmaClassification {
    let n = game.players();
    let mut witnesses = Vec::new();
    let mut always_defects = true;

    for player in 0..n {
        let mut sometimes_defects = false;
        for co in CoPlayerProfile::enumerate(player, n) {
            let coop = co.with_action(Action::C);
            let defect = co.with_action(Action::D);
            let margin = metric.welfare(game.rewards(coop)) - metric.welfare(game.rewards(defect));
            if margin <= tol {
                witnesses.push(DilemmaWitness::WelfareNotIncreasing {
                    player,
                    coplayers: co,
                    margin,
                });
            }
            if game.reward(defect, player) - game.reward(coop, player) > tol {
                sometimes_defects = true;
            } else {
                always_defects = false;
            }
        }
        if !sometimes_defects {
            witnesses.push(DilemmaWitness::NoDefectionIncentive { player });
        }
    }

    let all_c = ActionProfile::all(Action::C, n);
    let all_d = ActionProfile::all(Action::D, n);
    for player in 0..n {
        let margin = game.reward(all_c, player) - game.reward(all_d, player);
        if margin <= tol {
            witnesses.push(DilemmaWitness::MutualCooperationNotPreferred { player, margin });
        }
    }

    let kind = if !witnesses.is_empty() {
        DilemmaKind::NotDilemma
    } else if always_defects {
        DilemmaKind::Strict
    } else {
        DilemmaKind::Partial
    };
    DilemmaClassification { kind, witnesses }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DominanceViolation {
    pub player: usize,
    pub coplayers: CoPlayerProfile,
    /// Payoff of the alternative action minus payoff of the target action.
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DominanceReport {
    pub target: ActionProfile,
    pub strictly_dominant: bool,
    pub weakly_dominant: bool,
    /// Every (player, co-player) pair where the target action is not strictly
    /// better; ties within tolerance are included.
    pub violations: Vec<DominanceViolation>,
    pub tolerance: f64,
}

impl DominanceReport {
    /// Pairs where deviating strictly pays, i.e. failed weak-dominance constraints.
    pub fn weak_violations(&self) -> impl Iterator<Item = &DominanceViolation> {
        let tol = self.tolerance;
        self.violations.iter().filter(move |v| v.gap > tol)
    }

    pub fn max_gap(&self) -> Option<f64> {
        self.violations.iter().map(|v| v.gap).reduce(f64::max)
    }
}

pub fn check_dominance(
    game: &NormalFormGame,
    target: ActionProfile,
    tolerance: f64,
) -> Result<DominanceReport> {
    game.check_profile(target)?;
    let n = game.players();
    let mut violations = Vec::new();
    for player in 0..n {
        let own = target.action(player);
        for co in CoPlayerProfile::enumerate(player, n) {
            let gap = game.reward(co.with_action(own.other()), player)
                - game.reward(co.with_action(own), player);
            if gap >= -tolerance {
                violations.push(DominanceViolation {
                    player,
                    coplayers: co,
                    gap,
                });
            }
        }
    }
    let weakly_dominant = violations.iter().all(|v| v.gap <= tolerance);
    Ok(DominanceReport {
        target,
        strictly_dominant: violations.is_empty(),
        weakly_dominant,
        violations,
        tolerance,
    })
}

/// Pure profiles where no unilateral deviation gains more than `tolerance`.
pub fn pure_nash_equilibria(game: &NormalFormGame, tolerance: f64) -> Vec<ActionProfile> {
    let n = game.players();
    game.profiles()
        .filter(|&p| {
            (0..n).all(|i| game.reward(p.flip(i), i) - game.reward(p, i) <= tolerance)
        })
        .collect()
}

/// Profiles whose utilitarian welfare is within `tolerance` of the maximum.
pub fn social_optima(game: &NormalFormGame, tolerance: f64) -> Vec<ActionProfile> {
    let best = game
        .profiles()
        .map(|p| game.welfare(p))
        .fold(f64::NEG_INFINITY, f64::max);
    game.profiles()
        .filter(|&p| game.welfare(p) >= best - tolerance)
        .collect()
}
