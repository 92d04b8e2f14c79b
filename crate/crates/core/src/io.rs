//! JSON formats for games, transfer matrices and solve results.
//!
//! Writers are canonical: profile keys sorted, numbers printed with 17
//! significant digits, so regenerating a file gives identical bytes.

use std::fmt::{self, Write as _};

use serde::de::{Deserializer, MapAccess, Visitor};
use serde::Deserialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::game::{ActionProfile, CoPlayerProfile, NormalFormGame, MAX_PLAYERS};
use crate::self_interest::SelfInterestResult;
use crate::transfer::TransferMatrix;

/// Formats `v` like C's `%.17g`.
pub fn format_number(v: f64) -> String {
    if v == 0.0 {
        return if v.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{:.16e}", v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..17).contains(&exp) {
        let decimals = (16 - exp).max(0) as usize;
        trim_fraction(format!("{:.*}", decimals, v))
    } else {
        let m = trim_fraction(mantissa.to_string());
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    }
}

fn trim_fraction(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

fn write_array(out: &mut String, values: &[f64]) {
    out.push('[');
    for (k, v) in values.iter().enumerate() {
        if k > 0 {
            out.push_str(", ");
        }
        out.push_str(&format_number(*v));
    }
    out.push(']');
}

/// Payoff entries in file order, kept as a list so duplicate keys are visible.
struct Entries(Vec<(String, Value)>);

impl<'de> Deserialize<'de> for Entries {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = Entries;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an object of profile keys")
            }
            fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> std::result::Result<Entries, A::Error> {
                let mut out = Vec::new();
                while let Some((k, v)) = map.next_entry::<String, Value>()? {
                    out.push((k, v));
                }
                Ok(Entries(out))
            }
        }
        d.deserialize_map(V)
    }
}

#[derive(Deserialize)]
struct GameFile {
    players: Value,
    payoffs: Entries,
    #[serde(default)]
    labels: Option<Vec<String>>,
}

fn number_array(v: &Value, what: &str, len: usize) -> Result<Vec<f64>> {
    let arr = v
        .as_array()
        .ok_or_else(|| Error::invalid(format!("{what} must be an array")))?;
    if arr.len() != len {
        return Err(Error::invalid(format!("{what} has {} values, expected {len}", arr.len())));
    }
    arr.iter()
        .map(|x| {
            x.as_f64()
                .filter(|f| f.is_finite())
                .ok_or_else(|| Error::invalid(format!("{what} contains non-numeric value {x}")))
        })
        .collect()
}

pub fn parse_game(text: &str) -> Result<NormalFormGame> {
    let file: GameFile =
        serde_json::from_str(text).map_err(|e| Error::invalid(format!("malformed game JSON: {e}")))?;
    let n = file
        .players
        .as_u64()
        .filter(|&n| n >= 2 && n as usize <= MAX_PLAYERS)
        .ok_or_else(|| {
            Error::invalid(format!("\"players\" must be an integer in 2..={MAX_PLAYERS}, got {}", file.players))
        })? as usize;

    let mut rows: Vec<Option<Vec<f64>>> = vec![None; 1 << n];
    for (key, value) in &file.payoffs.0 {
        if key.chars().count() != n {
            return Err(Error::invalid(format!("profile key \"{key}\" does not have {n} actions")));
        }
        let p = ActionProfile::parse(key).map_err(|_| Error::invalid(format!("invalid profile key \"{key}\"")))?;
        let slot = &mut rows[p.bits()];
        if slot.is_some() {
            return Err(Error::invalid(format!("duplicate profile key \"{key}\"")));
        }
        *slot = Some(number_array(value, &format!("payoffs for \"{key}\""), n)?);
    }
    let mut complete = Vec::with_capacity(1 << n);
    for (bits, row) in rows.into_iter().enumerate() {
        match row {
            Some(r) => complete.push(r),
            None => {
                let p = ActionProfile::new(bits, n)?;
                return Err(Error::invalid(format!("missing profile key \"{p}\"")));
            }
        }
    }
    let game = NormalFormGame::from_rows(n, complete)?;
    match file.labels {
        Some(labels) => game.with_labels(labels),
        None => Ok(game),
    }
}

/// Canonical game JSON.
pub fn write_game(game: &NormalFormGame) -> String {
    let n = game.players();
    let mut keyed: Vec<(String, ActionProfile)> = game.profiles().map(|p| (p.to_string(), p)).collect();
    keyed.sort();
    let mut out = String::new();
    let _ = write!(out, "{{\n  \"players\": {n},\n");
    if let Some(labels) = game.labels() {
        let l = serde_json::to_string(labels).expect("strings serialize");
        let _ = writeln!(out, "  \"labels\": {l},");
    }
    out.push_str("  \"payoffs\": {\n");
    for (k, (key, p)) in keyed.iter().enumerate() {
        let _ = write!(out, "    \"{key}\": ");
        write_array(&mut out, game.rewards(*p));
        out.push_str(if k + 1 < keyed.len() { ",\n" } else { "\n" });
    }
    out.push_str("  }\n}\n");
    out
}

fn matrix_from_value(v: &Value) -> Result<TransferMatrix> {
    let rows = v
        .as_array()
        .ok_or_else(|| Error::invalid("transfer matrix must be an array of rows"))?;
    let n = rows.len();
    let rows: Vec<Vec<f64>> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| number_array(r, &format!("transfer matrix row {}", i + 1), n))
        .collect::<Result<_>>()?;
    TransferMatrix::from_rows(&rows)
}

pub fn parse_matrix(text: &str) -> Result<TransferMatrix> {
    let v: Value =
        serde_json::from_str(text).map_err(|e| Error::invalid(format!("malformed matrix JSON: {e}")))?;
    matrix_from_value(&v)
}

fn write_matrix_rows(out: &mut String, t: &TransferMatrix, indent: &str) {
    out.push_str("[\n");
    for i in 0..t.size() {
        out.push_str(indent);
        out.push_str("  ");
        write_array(out, t.row(i));
        out.push_str(if i + 1 < t.size() { ",\n" } else { "\n" });
    }
    out.push_str(indent);
    out.push(']');
}

pub fn write_matrix(t: &TransferMatrix) -> String {
    let mut out = String::new();
    write_matrix_rows(&mut out, t, "");
    out.push('\n');
    out
}

pub fn write_result(r: &SelfInterestResult) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{{");
    let _ = writeln!(out, "  \"mode\": \"{}\",", r.mode);
    let _ = writeln!(out, "  \"level\": {},", format_number(r.level));
    let _ = writeln!(out, "  \"target\": \"{}\",", r.target);
    out.push_str("  \"matrix\": ");
    write_matrix_rows(&mut out, &r.matrix, "  ");
    out.push_str(",\n  \"binding\": [");
    for (k, b) in r.binding.iter().enumerate() {
        if k > 0 {
            out.push(',');
        }
        let _ = write!(out, "\n    {{\"player\": {}, \"coplayers\": \"{b}\"}}", b.player() + 1);
    }
    out.push_str(if r.binding.is_empty() { "],\n" } else { "\n  ],\n" });
    out.push_str("  \"excess\": ");
    write_array(&mut out, &r.excess.slack);
    out.push_str(",\n  \"status\": \"optimal\"\n}\n");
    out
}

/// The parts of a result file needed to re-check it.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultFile {
    pub level: f64,
    pub target: ActionProfile,
    pub matrix: TransferMatrix,
    pub binding: Vec<CoPlayerProfile>,
}

pub fn parse_result(text: &str) -> Result<ResultFile> {
    let v: Value =
        serde_json::from_str(text).map_err(|e| Error::invalid(format!("malformed result JSON: {e}")))?;
    let field = |k: &str| v.get(k).ok_or_else(|| Error::invalid(format!("result is missing \"{k}\"")));
    let matrix = matrix_from_value(field("matrix")?)?;
    let n = matrix.size();
    let target_str = field("target")?
        .as_str()
        .ok_or_else(|| Error::invalid("\"target\" must be a profile string"))?;
    let target = ActionProfile::parse(target_str)?;
    if target.players() != n {
        return Err(Error::invalid(format!("target \"{target_str}\" does not match a {n}-player matrix")));
    }
    let level = field("level")?
        .as_f64()
        .ok_or_else(|| Error::invalid("\"level\" must be a number"))?;
    let mut binding = Vec::new();
    if let Some(list) = v.get("binding").and_then(Value::as_array) {
        for b in list {
            let player = b.get("player").and_then(Value::as_u64).unwrap_or(0) as usize;
            let co = b.get("coplayers").and_then(Value::as_str).unwrap_or("");
            if player == 0 {
                return Err(Error::invalid("binding entry needs a 1-based \"player\""));
            }
            binding.push(CoPlayerProfile::parse(player - 1, n, co)?);
        }
    }
    Ok(ResultFile { level, target, matrix, binding })
}

/// Accepts either a bare matrix or a result file, for commands that only need a matrix.
pub fn parse_matrix_or_result(text: &str) -> Result<(TransferMatrix, Option<ActionProfile>)> {
    let v: Value =
        serde_json::from_str(text).map_err(|e| Error::invalid(format!("malformed matrix JSON: {e}")))?;
    if v.is_object() {
        let r = parse_result(text)?;
        Ok((r.matrix, Some(r.target)))
    } else {
        Ok((matrix_from_value(&v)?, None))
    }
}
