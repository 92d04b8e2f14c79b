//! Named example games with hand-entered payoff tables.

use crate::game::{ActionProfile, NormalFormGame};

/// Builds a game from `(profile string, rewards)` pairs covering every profile.
pub fn from_table(n: usize, entries: &[(&str, &[f64])]) -> NormalFormGame {
    let mut rows = vec![Vec::new(); 1 << n];
    for (key, rewards) in entries {
        let p = ActionProfile::parse(key).expect("valid profile key");
        assert_eq!(p.players(), n, "key {key} has wrong length");
        rows[p.bits()] = rewards.to_vec();
    }
    NormalFormGame::from_rows(n, rows).expect("complete example table")
}

pub fn prisoners_dilemma() -> NormalFormGame {
    from_table(
        2,
        &[
            ("CC", &[3.0, 3.0]),
            ("CD", &[0.0, 4.0]),
            ("DC", &[4.0, 0.0]),
            ("DD", &[1.0, 1.0]),
        ],
    )
}

pub fn chicken() -> NormalFormGame {
    from_table(
        2,
        &[
            ("CC", &[3.0, 3.0]),
            ("CD", &[1.0, 4.0]),
            ("DC", &[4.0, 1.0]),
            ("DD", &[0.0, 0.0]),
        ],
    )
}

pub fn stag_hunt() -> NormalFormGame {
    from_table(
        2,
        &[
            ("CC", &[4.0, 4.0]),
            ("CD", &[0.0, 3.0]),
            ("DC", &[3.0, 0.0]),
            ("DD", &[1.0, 1.0]),
        ],
    )
}

/// Three-player PD where a cooperator splits 3 between both co-players.
pub fn symmetrical_3pd() -> NormalFormGame {
    from_table(
        3,
        &[
            ("CCC", &[3.0, 3.0, 3.0]),
            ("CDC", &[1.5, 4.0, 1.5]),
            ("DCC", &[4.0, 1.5, 1.5]),
            ("DDC", &[2.5, 2.5, 0.0]),
            ("CCD", &[1.5, 1.5, 4.0]),
            ("CDD", &[0.0, 2.5, 2.5]),
            ("DCD", &[2.5, 0.0, 2.5]),
            ("DDD", &[1.0, 1.0, 1.0]),
        ],
    )
}

/// Three-player PD where player `k` cooperating gives 3 to player `k + 1 (mod 3)`.
pub fn cyclical_3pd() -> NormalFormGame {
    from_table(
        3,
        &[
            ("CCC", &[3.0, 3.0, 3.0]),
            ("CDC", &[3.0, 4.0, 0.0]),
            ("DCC", &[4.0, 0.0, 3.0]),
            ("DDC", &[4.0, 1.0, 0.0]),
            ("CCD", &[0.0, 3.0, 4.0]),
            ("CDD", &[0.0, 4.0, 1.0]),
            ("DCD", &[1.0, 0.0, 4.0]),
            ("DDD", &[1.0, 1.0, 1.0]),
        ],
    )
}

/// Symmetrical-3PD minus a three-player pure coordination game.
pub fn too_many_cooks() -> NormalFormGame {
    from_table(
        3,
        &[
            ("CCC", &[2.0, 2.0, 2.0]),
            ("CDC", &[1.5, 4.0, 1.5]),
            ("DCC", &[4.0, 1.5, 1.5]),
            ("DDC", &[2.5, 2.5, 0.0]),
            ("CCD", &[1.5, 1.5, 4.0]),
            ("CDD", &[0.0, 2.5, 2.5]),
            ("DCD", &[2.5, 0.0, 2.5]),
            ("DDD", &[0.0, 0.0, 0.0]),
        ],
    )
}

/// PD with player 1's rewards tripled and `epsilon` taken off their unilateral defection.
pub fn scaled_pd(epsilon: f64) -> NormalFormGame {
    from_table(
        2,
        &[
            ("CC", &[9.0, 3.0]),
            ("CD", &[0.0, 4.0]),
            ("DC", &[12.0 - epsilon, 0.0]),
            ("DD", &[3.0, 1.0]),
        ],
    )
}

/// A three-player dilemma with no payoff structure.
pub fn arbitrary_dilemma() -> NormalFormGame {
    from_table(
        3,
        &[
            ("CCC", &[9.0, 6.0, 7.0]),
            ("CDC", &[2.0, 9.0, 7.0]),
            ("DCC", &[8.0, 4.0, 8.0]),
            ("DDC", &[3.0, 2.0, 1.0]),
            ("CCD", &[1.0, 6.0, 12.0]),
            ("CDD", &[0.0, 5.0, 2.0]),
            ("DCD", &[8.0, 2.0, 8.0]),
            ("DDD", &[1.0, 2.0, 0.0]),
        ],
    )
}

/// Looks up an example by its CLI name.
pub fn by_name(name: &str, epsilon: f64) -> Option<NormalFormGame> {
    let game = match name {
        "pd" | "prisoners-dilemma" => prisoners_dilemma(),
        "chicken" => chicken(),
        "stag-hunt" => stag_hunt(),
        "symmetrical-3pd" => symmetrical_3pd(),
        "cyclical-3pd" => cyclical_3pd(),
        "too-many-cooks" => too_many_cooks(),
        "scaled-pd" => scaled_pd(epsilon),
        "arbitrary" => arbitrary_dilemma(),
        _ => return None,
    };
    Some(game)
}

pub const NAMES: &[&str] = &[
    "pd",
    "chicken",
    "stag-hunt",
    "symmetrical-3pd",
    "cyclical-3pd",
    "too-many-cooks",
    "scaled-pd",
    "arbitrary",
];
