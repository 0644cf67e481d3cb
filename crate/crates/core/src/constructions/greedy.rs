//! Strongly saturated groups: elements `g_i ∈ St_i` without fixed points on
//! level `i + 1`, and the greedy product that pushes the fixed-point density
//! of a conjugator below a threshold.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::kelements::construct_k_family;
use super::search::{find_word, Budget};
use crate::error::{Error, Result};
use crate::quotient::QuotientGroup;
use crate::selfsim::{Presentation, Word};
use crate::tree::Portrait;

/// A word for `g_i ∈ St_i` acting without fixed points on level `i + 1`,
/// checked at depth `i + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrongWitness {
    pub level: usize,
    pub word: Word,
}

/// Witnesses by level, plus the levels where none was found.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct StrongWitnesses {
    pub witnesses: BTreeMap<usize, StrongWitness>,
    pub gaps: Vec<usize>,
}

impl StrongWitnesses {
    pub fn get(&self, level: usize) -> Option<&Word> {
        self.witnesses.get(&level).map(|w| &w.word)
    }
}

pub fn is_strong_witness(g: &Portrait, level: usize) -> Result<bool> {
    Ok(g.stabilizer_depth() >= level && g.fixed_count(level + 1)? == 0)
}

/// Looks for witnesses on levels `0..=max_level`.
///
/// Binary groups use the `K_i` elements. Otherwise a word search runs at
/// depth `i + 1`, falling back to the quotient `G / St_{i+1}` when it fits
/// under both `cap` and the search frontier. Levels with no witness are listed in `gaps` rather than
/// failing the whole call.
pub fn find_strong_witnesses(p: &Presentation, max_level: usize, budget: Budget, cap: usize) -> Result<StrongWitnesses> {
    let mut out = StrongWitnesses::default();
    let mut k_family = None;
    if p.signature().is_binary() {
        // a failure here only means fewer levels are covered
        let mut n = max_level;
        loop {
            if let Ok(f) = construct_k_family(p, n, budget) {
                k_family = Some(f);
                break;
            }
            if n == 0 {
                break;
            }
            n -= 1;
        }
    }
    for i in 0..=max_level {
        if let Some(w) = k_family.as_ref().and_then(|f| f.get(i)) {
            out.witnesses.insert(i, StrongWitness { level: i, word: w.clone() });
            continue;
        }
        let (found, _) = find_word(p, i + 1, budget, |g| is_strong_witness(g, i).unwrap_or(false))?;
        let word = match found {
            Some((w, _)) => Some(w),
            None => match QuotientGroup::build(p, i + 1, cap.min(budget.max_frontier)) {
                Ok(q) => (0..q.order())
                    .find(|&id| q.stabilizer_depth(id) >= i && is_strong_witness(&q.portrait(id), i).unwrap_or(false))
                    .map(|id| q.rep_word(id)),
                Err(Error::CapExceeded { .. }) => None,
                Err(e) => return Err(e),
            },
        };
        match word {
            Some(word) => {
                out.witnesses.insert(i, StrongWitness { level: i, word });
            }
            None => out.gaps.push(i),
        }
    }
    Ok(out)
}

/// Smallest `r ≥ 1` with `2^-r < s`.
pub fn greedy_rounds(s: f64) -> Result<usize> {
    if !(s > 0.0 && s <= 1.0) {
        return Err(Error::Precondition(format!("density threshold must lie in (0, 1], got {s}")));
    }
    let mut r = 1;
    while 0.5f64.powi(r as i32) >= s {
        r += 1;
    }
    Ok(r)
}

/// Does `t` fix at least `s · l(j)` vertices on every level `j ≤ max_level`?
pub fn check_assumption(t: &Portrait, s: f64, max_level: usize) -> Result<bool> {
    if max_level > t.depth() {
        return Err(Error::OutOfDepth {
            level: max_level,
            depth: t.depth(),
        });
    }
    for j in 0..=max_level {
        let size = t.signature().level_size(j) as f64;
        if (t.fixed_count(j)? as f64) < s * size {
            return Ok(false);
        }
    }
    Ok(true)
}

/// One greedy round.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GreedyStep {
    /// The witness level `m + i` considered in this round.
    pub level: usize,
    pub epsilon: bool,
    /// Size of the candidate set: vertices on level `m + i + 1` below a
    /// fixed vertex of the current product.
    pub candidates: usize,
    /// Fixed points on level `m + i + 1` after the round.
    pub surviving: usize,
    pub level_size: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GreedyTrace {
    pub m: usize,
    pub s: f64,
    pub r: usize,
    pub steps: Vec<GreedyStep>,
    /// `t` fixes at least `s · l(j)` vertices on every level `j ≤ m + r`.
    /// Without it the product still thins out fixed points but separates
    /// nothing.
    pub assumption_holds: bool,
    pub final_fixed: usize,
    pub final_level_size: usize,
}

impl GreedyTrace {
    /// The halving bounds: at most `l(m+i+1) / 2^i` candidates and
    /// `l(m+i+1) / 2^(i+1)` survivors in round `i`.
    pub fn bounds_hold(&self) -> bool {
        self.steps.iter().enumerate().all(|(i, st)| {
            st.candidates << i <= st.level_size && st.surviving << (i + 1) <= st.level_size
        })
    }

    /// `ĝ t` fixes fewer than `s · l(m+r)` vertices on level `m + r` while
    /// `t` fixes at least that many.
    pub fn separates(&self) -> bool {
        self.assumption_holds && (self.final_fixed as f64) < self.s * self.final_level_size as f64
    }
}

/// The greedy product `ĝ = g_{m+r-1}^{ε_{r-1}} ⋯ g_m^{ε_0} ∈ St_m`.
///
/// Round `i` multiplies by `g_{m+i}` exactly when the current product fixes
/// at least half of its candidate vertices on level `m + i + 1`; since
/// `g_{m+i}` moves every one of them, at most half survive either way.
pub fn construct_ghat(
    p: &Presentation,
    t: &Portrait,
    m: usize,
    s: f64,
    witnesses: &StrongWitnesses,
) -> Result<(Word, GreedyTrace)> {
    let r = greedy_rounds(s)?;
    let depth = m + r;
    if t.depth() < depth {
        return Err(Error::OutOfDepth {
            level: depth,
            depth: t.depth(),
        });
    }
    if t.signature() != p.signature() {
        return Err(Error::SignatureMismatch {
            left: t.signature().to_string(),
            right: p.signature().to_string(),
        });
    }
    let t = t.truncate(depth)?;
    let sig = p.signature();
    let mut word = Word::empty();
    let mut current = t.clone();
    let mut steps = Vec::with_capacity(r);
    for i in 0..r {
        let level = m + i;
        let below = level + 1;
        let w = witnesses
            .get(level)
            .ok_or_else(|| Error::NotFound {
                stage: "greedy product",
                detail: format!("no fixed-point-free St_{level} witness on level {below}"),
            })?;
        let g = p.eval(w, depth)?;
        if !is_strong_witness(&g, level)? {
            return Err(Error::invalid("strong witness", format!("{w} on level {level}")));
        }
        let candidates = current.fixed_count(level)? * sig.arity(level);
        let fixed = current.fixed_count(below)?;
        let epsilon = 2 * fixed >= candidates && candidates > 0;
        if epsilon {
            current = g.compose(&current)?;
            word = w.concat(&word);
        }
        steps.push(GreedyStep {
            level,
            epsilon,
            candidates,
            surviving: current.fixed_count(below)?,
            level_size: sig.level_size(below),
        });
    }
    let trace = GreedyTrace {
        m,
        s,
        r,
        steps,
        assumption_holds: check_assumption(&t, s, depth)?,
        final_fixed: current.fixed_count(depth)?,
        final_level_size: sig.level_size(depth),
    };
    Ok((word, trace))
}
