//! Parameterized multi-player dilemmas and their closed-form self-interest levels.
//!
//! A graphical dilemma plays a two-player base game along every edge of a
//! weighted directed graph; each player collects the weighted base payoffs of
//! its inbound edges, using one action for all of its games.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::game::{Action, NormalFormGame, MAX_PLAYERS};
use crate::transfer::{exchange_matrix, TransferMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BaseGame {
    PrisonersDilemma,
    Chicken,
    StagHunt,
}

impl fmt::Display for BaseGame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BaseGame::PrisonersDilemma => "pd",
            BaseGame::Chicken => "chicken",
            BaseGame::StagHunt => "stag-hunt",
        })
    }
}

impl FromStr for BaseGame {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "pd" | "prisoners-dilemma" => Ok(BaseGame::PrisonersDilemma),
            "chicken" => Ok(BaseGame::Chicken),
            "stag-hunt" | "staghunt" | "sh" => Ok(BaseGame::StagHunt),
            _ => Err(Error::invalid(format!("unknown base game \"{s}\""))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BaseGameParams {
    kind: BaseGame,
    c: f64,
    d: f64,
}

impl BaseGameParams {
    pub fn new(kind: BaseGame, c: f64, d: f64) -> Result<Self> {
        if !c.is_finite() || !d.is_finite() {
            return Err(Error::invalid("base game parameters must be finite"));
        }
        if d <= 0.0 {
            return Err(Error::invalid(format!("{kind} requires d > 0 (d = {d})")));
        }
        match kind {
            BaseGame::PrisonersDilemma if c <= d => Err(Error::invalid(format!(
                "{kind} requires c > d (c = {c}, d = {d})"
            ))),
            BaseGame::Chicken | BaseGame::StagHunt if c <= 2.0 * d => Err(Error::invalid(
                format!("{kind} requires c > 2d (c = {c}, d = {d})"),
            )),
            _ => Ok(BaseGameParams { kind, c, d }),
        }
    }

    pub fn kind(&self) -> BaseGame {
        self.kind
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn d(&self) -> f64 {
        self.d
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GraphKind {
    Cyclical,
    Symmetrical,
    Circular,
    Tycoon,
}

impl fmt::Display for GraphKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GraphKind::Cyclical => "cyclical",
            GraphKind::Symmetrical => "symmetrical",
            GraphKind::Circular => "circular",
            GraphKind::Tycoon => "tycoon",
        })
    }
}

impl FromStr for GraphKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "cyclical" => Ok(GraphKind::Cyclical),
            "symmetrical" => Ok(GraphKind::Symmetrical),
            "circular" => Ok(GraphKind::Circular),
            "tycoon" => Ok(GraphKind::Tycoon),
            _ => Err(Error::invalid(format!("unknown graph \"{s}\""))),
        }
    }
}

pub const ALL_GRAPHS: [GraphKind; 4] = [
    GraphKind::Cyclical,
    GraphKind::Symmetrical,
    GraphKind::Circular,
    GraphKind::Tycoon,
];

pub const ALL_BASES: [BaseGame; 3] = [BaseGame::PrisonersDilemma, BaseGame::Chicken, BaseGame::StagHunt];

pub fn base_payoff(params: BaseGameParams, own: Action, opp: Action) -> f64 {
    let from_opp = if opp == Action::C { params.c } else { 0.0 };
    let bonus = match params.kind {
        BaseGame::PrisonersDilemma => own == Action::D,
        BaseGame::Chicken => own != opp,
        BaseGame::StagHunt => own == opp,
    };
    from_opp + if bonus { params.d } else { 0.0 }
}

/// `w[i][j]`: weight player `i` puts on its base game against player `j`.
fn edge_weights(graph: GraphKind, n: usize) -> Vec<Vec<f64>> {
    let mut w = vec![vec![0.0; n]; n];
    for (i, row) in w.iter_mut().enumerate() {
        match graph {
            GraphKind::Cyclical => row[(i + 1) % n] = 1.0,
            GraphKind::Symmetrical => {
                for (j, v) in row.iter_mut().enumerate() {
                    if j != i {
                        *v = 1.0 / (n - 1) as f64;
                    }
                }
            }
            GraphKind::Circular => {
                for (j, v) in row.iter_mut().enumerate() {
                    if j != i {
                        let gap = i.abs_diff(j);
                        *v = 0.5f64.powi(gap.min(n - gap) as i32);
                    }
                }
            }
            GraphKind::Tycoon => {
                if i == 0 {
                    row.iter_mut().skip(1).for_each(|v| *v = 1.0);
                } else {
                    row[0] = 1.0;
                }
            }
        }
    }
    w
}

pub fn build_graphical(graph: GraphKind, params: BaseGameParams, n: usize) -> Result<NormalFormGame> {
    if n < 2 {
        return Err(Error::invalid(format!("graphical dilemmas need n >= 2, got {n}")));
    }
    if n > MAX_PLAYERS {
        return Err(Error::invalid(format!("n = {n} exceeds {MAX_PLAYERS} players")));
    }
    if graph == GraphKind::Tycoon && n == 2 {
        log::warn!("a two-player tycoon graph is just the base game");
    }
    let w = edge_weights(graph, n);
    NormalFormGame::from_fn(n, |p| {
        (0..n)
            .map(|i| {
                let own = p.action(i);
                w[i].iter()
                    .enumerate()
                    .filter(|(_, &wij)| wij != 0.0)
                    .map(|(j, &wij)| wij * base_payoff(params, own, p.action(j)))
                    .sum()
            })
            .collect()
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FunctionalParams {
    n: usize,
    c: f64,
}

impl FunctionalParams {
    pub fn new(n: usize, c: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::invalid(format!("functional dilemma requires n >= 2 (n = {n})")));
        }
        if !(c.is_finite() && c > 0.0) {
            return Err(Error::invalid(format!("functional dilemma requires c > 0 (c = {c})")));
        }
        Ok(FunctionalParams { n, c })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    /// Total welfare with `cooperators` players cooperating.
    pub fn welfare(&self, cooperators: usize) -> f64 {
        let k = cooperators as f64;
        -(self.c / self.n as f64) * k * k + 2.0 * self.c * k
    }
}

/// Welfare is split in proportion to player weight; player `k` (1-based)
/// weighs `k`, doubled when defecting.
pub fn build_functional(params: FunctionalParams) -> Result<NormalFormGame> {
    let n = params.n;
    if n > MAX_PLAYERS {
        return Err(Error::invalid(format!("n = {n} exceeds {MAX_PLAYERS} players")));
    }
    NormalFormGame::from_fn(n, |p| {
        let sw = params.welfare(p.count(Action::C));
        let weights: Vec<f64> = (0..n)
            .map(|i| {
                let base = (i + 1) as f64;
                match p.action(i) {
                    Action::C => base,
                    Action::D => 2.0 * base,
                }
            })
            .collect();
        let total: f64 = weights.iter().sum();
        weights.iter().map(|w| sw * w / total).collect()
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LevelMode {
    Symmetric,
    General,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyticLevel {
    pub value: f64,
    /// The value is the `n -> infinity` limit, a lower bound at finite `n`.
    pub is_limit: bool,
}

fn symmetric_closed_form(params: BaseGameParams, n: usize) -> f64 {
    let (c, d, n) = (params.c, params.d, n as f64);
    match params.kind {
        BaseGame::PrisonersDilemma => c / (c + d * (n - 1.0)),
        BaseGame::Chicken | BaseGame::StagHunt => (c - d) / (c + d * (n - 2.0)),
    }
}

pub fn analytic_level(graph: GraphKind, params: BaseGameParams, n: usize, mode: LevelMode) -> AnalyticLevel {
    let (c, d) = (params.c, params.d);
    let pd = params.kind == BaseGame::PrisonersDilemma;
    let exact = |value| AnalyticLevel { value, is_limit: false };
    match (mode, graph) {
        (LevelMode::Symmetric, _) | (LevelMode::General, GraphKind::Symmetrical | GraphKind::Tycoon) => {
            exact(symmetric_closed_form(params, n))
        }
        (LevelMode::General, GraphKind::Cyclical) => exact(if pd { c / (c + d) } else { (c - d) / c }),
        (LevelMode::General, GraphKind::Circular) => AnalyticLevel {
            value: if pd { c / (c + 4.0 * d) } else { (c - d) / (c + 3.0 * d) },
            is_limit: true,
        },
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnalyticMatrix {
    pub matrix: TransferMatrix,
    /// Only valid as `n -> infinity` (Circular).
    pub is_limit: bool,
}

pub fn analytic_matrix(graph: GraphKind, params: BaseGameParams, n: usize) -> Result<AnalyticMatrix> {
    if n < 2 {
        return Err(Error::NotAvailable(format!("no closed-form matrix for n = {n}")));
    }
    let (c, d) = (params.c, params.d);
    let pd = params.kind == BaseGame::PrisonersDilemma;
    match graph {
        GraphKind::Cyclical => {
            // each player pays the co-player whose cooperation it depends on
            let (keep, give) = if pd { (c, d) } else { (c - d, d) };
            let total = keep + give;
            let mut t = vec![0.0; n * n];
            for i in 0..n {
                t[i * n + i] = keep / total;
                t[i * n + (i + 1) % n] = give / total;
            }
            Ok(AnalyticMatrix {
                matrix: TransferMatrix::from_flat(n, t)?,
                is_limit: false,
            })
        }
        GraphKind::Symmetrical | GraphKind::Tycoon => Ok(AnalyticMatrix {
            matrix: exchange_matrix(n, symmetric_closed_form(params, n))?,
            is_limit: false,
        }),
        GraphKind::Circular => {
            if n < 3 {
                return Err(Error::NotAvailable("circular limit matrix needs n >= 3".into()));
            }
            let keep = if pd { c } else { c - d };
            let total = keep + 4.0 * d;
            let mut t = vec![0.0; n * n];
            for i in 0..n {
                t[i * n + i] = keep / total;
                t[i * n + (i + 1) % n] += 2.0 * d / total;
                t[i * n + (i + n - 1) % n] += 2.0 * d / total;
            }
            Ok(AnalyticMatrix {
                matrix: TransferMatrix::from_flat(n, t)?,
                is_limit: true,
            })
        }
    }
}

/// The Tycoon transfer pattern with the least total transfer: the tycoon
/// pays every other player, each other player pays only the tycoon and keeps
/// the remainder unallocated.
pub fn tycoon_minimal_transfers(params: BaseGameParams, n: usize) -> Result<TransferMatrix> {
    if n < 2 {
        return Err(Error::invalid(format!("tycoon needs n >= 2, got {n}")));
    }
    let (c, d) = (params.c, params.d);
    let keep = if params.kind == BaseGame::PrisonersDilemma { c } else { c - d };
    let total = keep + d * (n - 1) as f64;
    let mut t = vec![0.0; n * n];
    t[0] = keep / total;
    for j in 1..n {
        t[j] = d / total;
        t[j * n] = d / total;
        t[j * n + j] = keep / total;
    }
    TransferMatrix::from_flat(n, t)
}
