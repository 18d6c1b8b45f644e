//! Plain-text angle checkpoints.
//!
//! ```text
//! N=16 M=2 side=L seed=7
//! 1.2345678901234567e0
//! ...
//! ```
//! `M` and `side` are `-` for full-circuit angles. One angle per line, flat
//! `theta0, theta1` order per gate.

use crate::dmera::Side;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct Checkpoint {
    pub num_qubits: usize,
    pub m: Option<usize>,
    pub side: Option<Side>,
    pub seed: u64,
    pub angles: Vec<f64>,
}

impl Checkpoint {
    pub fn to_text(&self) -> String {
        let m = self.m.map_or("-".to_string(), |m| m.to_string());
        let side = self.side.map_or("-", |s| s.label());
        let mut out = format!("N={} M={m} side={side} seed={}\n", self.num_qubits, self.seed);
        for a in &self.angles {
            out.push_str(&format!("{a:.16e}\n"));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or(Error::Parse { line: 1, msg: "empty checkpoint".into() })?;
        let herr = |msg: String| Error::Parse { line: 1, msg };
        let mut fields = std::collections::HashMap::new();
        for tok in header.split_whitespace() {
            let (k, v) = tok.split_once('=').ok_or_else(|| herr(format!("bad header field `{tok}`")))?;
            fields.insert(k, v);
        }
        let get = |k: &str| fields.get(k).copied().ok_or_else(|| herr(format!("missing `{k}`")));
        let num_qubits = get("N")?.parse().map_err(|_| herr("bad N".into()))?;
        let seed = get("seed")?.parse().map_err(|_| herr("bad seed".into()))?;
        let m = match get("M")? {
            "-" => None,
            v => Some(v.parse().map_err(|_| herr("bad M".into()))?),
        };
        let side = match get("side")? {
            "-" => None,
            v => Some(v.parse().map_err(|_| herr("bad side".into()))?),
        };
        let mut angles = Vec::new();
        for (i, line) in lines {
            let t = line.trim();
            if t.is_empty() {
                continue;
            }
            angles.push(t.parse().map_err(|_| Error::Parse { line: i + 1, msg: format!("bad angle `{t}`") })?);
        }
        Ok(Self { num_qubits, m, side, seed, angles })
    }
}
