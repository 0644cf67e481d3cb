//! Path stabilizers: an `α ∈ G` such that `α t` fixes a chosen path.

use serde::{Deserialize, Serialize};

use super::search::{find_word, Budget};
use crate::error::{Error, Result};
use crate::selfsim::{Presentation, Word};
use crate::tree::{Portrait, Vertex};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathStabilizer {
    /// `β_{n-1} ⋯ β_0`.
    pub word: Word,
    /// `β_i ∈ St_i`, empty where `t` already fixed `v_{i+1}`.
    pub factors: Vec<Word>,
}

/// Builds `α = β_{n-1} ⋯ β_0` with `β_i ∈ St_i` so that `α t` fixes every
/// vertex on the path from the root to `end`. Each `β_i` moves the current
/// image of `v_{i+1}` back to `v_{i+1}` inside the children of `v_i`, which
/// the later factors leave alone.
pub fn construct_alpha(p: &Presentation, t: &Portrait, end: &Vertex, budget: Budget) -> Result<PathStabilizer> {
    let n = end.level();
    if n == 0 {
        return Err(Error::Precondition("the path to stabilize is empty".into()));
    }
    end.check(p.signature())?;
    if t.depth() < n {
        return Err(Error::OutOfDepth { level: n, depth: t.depth() });
    }
    let t = t.truncate(n)?;
    let mut word = Word::empty();
    let mut current = t.clone();
    let mut factors = Vec::with_capacity(n);
    for i in 0..n {
        let target = Vertex::new(end.path()[..=i].to_vec());
        let image = current.truncate(i + 1)?.apply(&target)?;
        if image == target {
            factors.push(Word::empty());
            continue;
        }
        let (found, stats) = find_word(p, i + 1, budget, |g| {
            g.stabilizer_depth() >= i && g.apply(&image).map(|v| v == target).unwrap_or(false)
        })?;
        let Some((beta, _)) = found else {
            return Err(Error::NotFound {
                stage: "path stabilizer",
                detail: format!(
                    "level {i}: no element of St_{i} maps {image} to {target} ({} words up to length {})",
                    stats.visited, stats.reached_len
                ),
            });
        };
        current = p.eval(&beta, n)?.compose(&current)?;
        word = beta.concat(&word);
        factors.push(beta);
    }
    Ok(PathStabilizer { word, factors })
}

/// The path of length `len` that greedily follows the smallest child fixed
/// by `t`, or child 0 where `t` fixes none. Paths chosen this way often need
/// no correction at all.
pub fn preferred_path(t: &Portrait, len: usize) -> Result<Vertex> {
    let mut v = Vertex::root();
    for j in 0..len {
        let k = t.signature().arity(j);
        let mut next = v.child(0);
        if j < t.depth() && t.apply(&v)? == v {
            if let Some(c) = (0..k).find(|&c| t.label_at(&v).map(|l| l.apply(c) == c).unwrap_or(false)) {
                next = v.child(c);
            }
        }
        v = next;
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::selfsim::{grigorchuk, gupta_sidki};

    fn check(p: &Presentation, t: &str, end: &str) -> PathStabilizer {
        let end: Vertex = end.parse().unwrap();
        let tp = p.eval_isometry(&t.parse().unwrap(), end.level()).unwrap();
        let alpha = construct_alpha(p, &tp, &end, Budget::default()).unwrap();
        let fixed = p.eval(&alpha.word, end.level()).unwrap().compose(&tp).unwrap();
        let mut v = end.clone();
        loop {
            assert_eq!(fixed.apply(&v).unwrap(), v);
            match v.parent() {
                Some(u) => v = u,
                None => break,
            }
        }
        for (i, b) in alpha.factors.iter().enumerate() {
            assert!(p.eval(b, end.level()).unwrap().stabilizer_depth() >= i);
        }
        alpha
    }

    #[test]
    fn already_fixed_path_needs_nothing() {
        let alpha = check(&grigorchuk(), "b", "111");
        assert!(alpha.word.is_empty());
    }

    #[test]
    fn corrections_on_both_trees() {
        let alpha = check(&grigorchuk(), "a", "00");
        assert_eq!(alpha.factors[0].to_string(), "a");
        check(&gupta_sidki(), "x", "00");
        check(&gupta_sidki(), "t1", "000");
    }

    #[test]
    fn empty_path_is_rejected() {
        let p = grigorchuk();
        let t = Portrait::identity(p.signature(), 2);
        assert!(matches!(
            construct_alpha(&p, &t, &Vertex::root(), Budget::default()),
            Err(Error::Precondition(_))
        ));
    }
}
