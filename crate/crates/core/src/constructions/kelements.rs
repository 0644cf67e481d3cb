//! The sets `K_n ⊂ St_n` of a group on the binary tree: elements that swap
//! every sibling pair on level `n + 1`.

use super::search::{find_word, Budget};
use crate::error::{Error, Result};
use crate::selfsim::{Presentation, Word};
use crate::tree::Portrait;

fn require_binary(p: &Presentation) -> Result<()> {
    if p.signature().is_binary() {
        Ok(())
    } else {
        Err(Error::Unsupported("K_n elements exist on binary trees only".into()))
    }
}

/// Words `k_0, .., k_n` with `k_j ∈ K_j`.
///
/// `k_0` is the first word (in BFS order) switching the root. For `j ≥ 1`
/// the search finds some `e ∈ St_j` with a switch on label level `j`, then
/// symmetrizes it: while two sibling blocks below some level-`i` vertex
/// differ, `e ← e · k_i e k_i⁻¹` makes every such pair of blocks equal (and
/// switching where they differed). Once the whole level is one block, `e`
/// switches everything.
pub fn construct_k_family(p: &Presentation, n: usize, budget: Budget) -> Result<Vec<Word>> {
    require_binary(p)?;
    let mut family: Vec<Word> = Vec::with_capacity(n + 1);
    for j in 0..=n {
        let depth = j + 1;
        let (found, stats) = find_word(p, depth, budget, |g| {
            g.stabilizer_depth() >= j && g.nontrivial_label_count(j).unwrap_or(0) > 0
        })?;
        let Some((mut e, mut ep)) = found else {
            return Err(Error::NotFound {
                stage: "K_n construction",
                detail: format!(
                    "level {j}: no element of St_{j} switching on level {} among {} words of length <= {} (reached {})",
                    j + 1,
                    stats.visited,
                    budget.max_word_len,
                    stats.reached_len
                ),
            });
        };
        for i in (0..j).rev() {
            if !blocks_constant(&ep, j, i)? {
                let k = p.eval(&family[i], depth)?;
                let conj = k.conjugate(&ep)?;
                ep = ep.compose(&conj)?;
                e = e.concat(&family[i].conjugating(&e));
            }
        }
        debug_assert!(ep.is_in_k(j)?);
        family.push(e);
    }
    Ok(family)
}

pub fn construct_k(p: &Presentation, n: usize, budget: Budget) -> Result<Word> {
    Ok(construct_k_family(p, n, budget)?.pop().expect("family is non-empty"))
}

/// Are the level-`level` labels constant on the level-`level` descendants of
/// every level-`i` vertex?
fn blocks_constant(g: &Portrait, level: usize, i: usize) -> Result<bool> {
    let block = 1usize << (level - i);
    let labels: Vec<bool> = (0..g.signature().level_size(level))
        .map(|v| g.label(level, v)[0] == 1)
        .collect();
    Ok(labels.chunks(block).all(|c| c.iter().all(|&x| x == c[0])))
}

/// The separation condition for `K_m` elements on a binary tree.
///
/// Counting only level-`m` vertices fixed by `t` (there are `F`), let `x`
/// be the number carrying a switch. Conjugation by any tree automorphism
/// preserves `x`, and multiplying by a `K_m` element turns it into `F - x`,
/// so `2x ≠ F` rules out twisted conjugacy into `St_{m+1}`. When
/// `t ∈ St_m` this is the familiar "switch count differs from half the
/// level".
pub fn switch_condition(t: &Portrait, m: usize) -> Result<bool> {
    let (fixed, switched) = fixed_switch_counts(t, m)?;
    Ok(2 * switched != fixed)
}

/// `(F, x)` as in [`switch_condition`].
pub fn fixed_switch_counts(t: &Portrait, m: usize) -> Result<(usize, usize)> {
    if !t.signature().is_binary() {
        return Err(Error::Unsupported("switch counts are defined on binary trees only".into()));
    }
    if m >= t.depth() {
        return Err(Error::OutOfDepth {
            level: m,
            depth: t.depth(),
        });
    }
    let images = t.level_images(m)?;
    let mut fixed = 0;
    let mut switched = 0;
    for (v, &tv) in images.iter().enumerate() {
        if v == tv {
            fixed += 1;
            if t.label(m, v)[0] == 1 {
                switched += 1;
            }
        }
    }
    Ok((fixed, switched))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::selfsim::{grigorchuk, gupta_sidki};

    #[test]
    fn grigorchuk_k_elements() {
        let p = grigorchuk();
        let family = construct_k_family(&p, 3, Budget::default()).unwrap();
        assert_eq!(family[0].to_string(), "a");
        let bab = p.eval(&"b*a*b*a".parse().unwrap(), 6).unwrap();
        assert_eq!(p.eval(&family[1], 6).unwrap(), bab);
        for (n, w) in family.iter().enumerate() {
            assert!(p.eval(w, n + 1).unwrap().is_in_k(n).unwrap(), "K_{n}: {w}");
        }
    }

    #[test]
    fn non_binary_is_rejected() {
        assert!(matches!(
            construct_k(&gupta_sidki(), 1, Budget::default()),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn switch_condition_boundaries() {
        let p = grigorchuk();
        let id = Portrait::identity(p.signature(), 4);
        assert!((1..4).all(|m| switch_condition(&id, m).unwrap()));
        // b has one of two level-1 labels switched
        let b = p.eval(&"b".parse().unwrap(), 4).unwrap();
        assert!(!switch_condition(&b, 1).unwrap());
    }
}
