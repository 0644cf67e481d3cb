use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::selfsim::{Letter, Presentation, Word};
use crate::tree::Portrait;

/// Bounds for the breadth-first word searches.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    pub max_word_len: usize,
    /// Total number of distinct elements visited.
    pub max_frontier: usize,
}

impl Default for Budget {
    fn default() -> Budget {
        Budget {
            max_word_len: 12,
            max_frontier: 100_000,
        }
    }
}

/// Outcome of a search that ran to completion or exhaustion.
#[derive(Clone, Debug)]
pub struct SearchStats {
    pub visited: usize,
    pub reached_len: usize,
    /// Every element of the ball was visited without hitting a budget.
    pub complete: bool,
}

/// Generator letters and their portraits at `depth`; inverses are omitted
/// for generators that are involutions at that depth.
pub(crate) fn letter_portraits(p: &Presentation, depth: usize) -> Result<Vec<(Letter, Portrait)>> {
    let mut out = Vec::new();
    for name in p.generator_names() {
        let g = p.eval(&Word::symbol(name.as_str()), depth)?;
        let involution = g.compose(&g)?.is_identity();
        let inv = g.inverse();
        out.push((Letter::new(name.as_str(), false), g));
        if !involution {
            out.push((Letter::new(name.as_str(), true), inv));
        }
    }
    Ok(out)
}

/// Breadth-first enumeration of group elements by word length, deduplicated
/// by their depth-`depth` portraits. Calls `visit` on each new element in
/// order; stops early when `visit` returns `true`.
pub fn bfs_words(
    p: &Presentation,
    depth: usize,
    budget: Budget,
    mut visit: impl FnMut(&Word, &Portrait) -> Result<bool>,
) -> Result<(Option<(Word, Portrait)>, SearchStats)> {
    let letters = letter_portraits(p, depth)?;
    let id = Portrait::identity(p.signature(), depth);
    let mut seen: HashSet<Box<[u8]>> = HashSet::from([id.key().into()]);
    let mut stats = SearchStats {
        visited: 1,
        reached_len: 0,
        complete: false,
    };
    if visit(&Word::empty(), &id)? {
        return Ok((Some((Word::empty(), id)), stats));
    }
    let mut layer = vec![(Vec::<Letter>::new(), id)];
    for len in 1..=budget.max_word_len {
        let mut next = Vec::new();
        for (word, g) in &layer {
            for (letter, lp) in &letters {
                let h = lp.compose(g)?;
                if !seen.insert(h.key().into()) {
                    continue;
                }
                let mut w = Vec::with_capacity(word.len() + 1);
                w.push(letter.clone());
                w.extend_from_slice(word);
                stats.visited += 1;
                stats.reached_len = len;
                let as_word = Word::from_letters(w.clone());
                if visit(&as_word, &h)? {
                    return Ok((Some((as_word, h)), stats));
                }
                if stats.visited >= budget.max_frontier {
                    return Ok((None, stats));
                }
                next.push((w, h));
            }
        }
        if next.is_empty() {
            stats.complete = true;
            return Ok((None, stats));
        }
        layer = next;
    }
    Ok((None, stats))
}

/// First element (in BFS order) satisfying `pred`.
pub fn find_word(
    p: &Presentation,
    depth: usize,
    budget: Budget,
    mut pred: impl FnMut(&Portrait) -> bool,
) -> Result<(Option<(Word, Portrait)>, SearchStats)> {
    bfs_words(p, depth, budget, |_, g| Ok(pred(g)))
}

/// All distinct elements (at `depth`) reachable within the budget that
/// satisfy `keep`.
pub fn collect_words(
    p: &Presentation,
    depth: usize,
    budget: Budget,
    mut keep: impl FnMut(&Portrait) -> bool,
) -> Result<(Vec<(Word, Portrait)>, SearchStats)> {
    let mut out = Vec::new();
    let (_, stats) = bfs_words(p, depth, budget, |w, g| {
        if keep(g) {
            out.push((w.clone(), g.clone()));
        }
        Ok(false)
    })?;
    Ok((out, stats))
}
