//! Local action groups `H(v)`, rigid witnesses and the weak branch index.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::search::{collect_words, find_word, Budget};
use crate::error::{Error, Result};
use crate::selfsim::{Presentation, Word};
use crate::tree::{normal_subgroups_of_symmetric, Perm, PermGroup, Portrait, Vertex};

/// `H(v)`: the permutations of `v`'s children induced by `St_{|v|}`,
/// approximated from the elements found within a word budget. A larger
/// budget can only enlarge it.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LocalNormality {
    pub vertex: Vertex,
    pub budget: Budget,
    pub degree: usize,
    /// Distinct labels at `v`, sorted.
    pub generators: Vec<Perm>,
    pub order: usize,
    pub transitive: bool,
    pub normal_in_sym: bool,
    /// Degree 4 admits the transitive normal subgroup `V_4`, so the
    /// transitivity of normal closures is not guaranteed there.
    pub degree_four: bool,
    pub stabilizer_elements: usize,
}

impl LocalNormality {
    pub fn holds(&self) -> bool {
        self.transitive && self.normal_in_sym && !self.degree_four
    }

    pub fn group(&self) -> PermGroup {
        PermGroup::generate(self.degree, &self.generators).expect("labels share the degree")
    }
}

pub fn check_local_normality(p: &Presentation, v: &Vertex, budget: Budget) -> Result<LocalNormality> {
    v.check(p.signature())?;
    let m = v.level();
    let degree = p.signature().arity(m);
    let (elements, _) = collect_words(p, m + 1, budget, |g| g.stabilizer_depth() >= m)?;
    let mut labels: Vec<Perm> = elements
        .iter()
        .map(|(_, g)| g.label_at(v))
        .collect::<Result<Vec<_>>>()?;
    labels.sort();
    labels.dedup();
    let group = PermGroup::generate(degree, &labels)?;
    Ok(LocalNormality {
        vertex: v.clone(),
        budget,
        degree,
        order: group.order(),
        transitive: group.is_transitive(),
        normal_in_sym: group.is_normal_in_sym(),
        degree_four: degree == 4,
        stabilizer_elements: elements.len(),
        generators: labels,
    })
}

/// Normal subgroups of `Sym(k)` checked against the dichotomy: a transitive
/// one is `Sym(k)` or `Alt(k)`, and the normal closure of each nontrivial
/// element of it is transitive.
#[derive(Clone, Debug)]
pub struct SymmetricScan {
    pub k: usize,
    pub normal_orders: Vec<usize>,
    pub transitive_orders: Vec<usize>,
    /// Transitive normal subgroups other than `Sym(k)` and `Alt(k)`.
    pub exceptions: Vec<PermGroup>,
    pub closures_transitive: bool,
}

impl SymmetricScan {
    pub fn dichotomy_holds(&self) -> bool {
        self.exceptions.is_empty()
    }
}

pub fn scan_symmetric(k: usize) -> Result<SymmetricScan> {
    let normal = normal_subgroups_of_symmetric(k);
    let full = PermGroup::symmetric(k).order();
    let mut out = SymmetricScan {
        k,
        normal_orders: normal.iter().map(PermGroup::order).collect(),
        transitive_orders: Vec::new(),
        exceptions: Vec::new(),
        closures_transitive: true,
    };
    for h in normal.into_iter().filter(|h| h.is_transitive()) {
        out.transitive_orders.push(h.order());
        if h.order() != full && 2 * h.order() != full {
            out.exceptions.push(h.clone());
        }
        for g in h.elements().filter(|g| !g.is_identity()) {
            if !h.normal_closure(g)?.is_transitive() {
                out.closures_transitive = false;
            }
        }
    }
    Ok(out)
}

/// An element acting only inside the subtree at `vertex`, as far as
/// `verified_depth` can tell.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RigidWitness {
    pub vertex: Vertex,
    pub word: Word,
    pub verified_depth: usize,
}

impl RigidWitness {
    /// First level of `T_v` (1 = the children of `v`) the witness moves.
    pub fn relative_level(&self, p: &Presentation) -> Result<usize> {
        let g = p.eval(&self.word, self.verified_depth)?;
        g.rigid_level_at(&self.vertex)?.ok_or_else(|| {
            Error::invalid(
                "rigid witness",
                format!("{} does not act rigidly at {} to depth {}", self.word, self.vertex, self.verified_depth),
            )
        })
    }
}

/// Searches for a rigid witness at `v`, checked `extra` levels below it.
pub fn find_rigid_witness(p: &Presentation, v: &Vertex, extra: usize, budget: Budget) -> Result<Option<RigidWitness>> {
    v.check(p.signature())?;
    let depth = v.level() + extra.max(1);
    let (found, _) = find_word(p, depth, budget, |g| matches!(g.rigid_level_at(v), Ok(Some(_))))?;
    Ok(found.map(|(word, _)| RigidWitness {
        vertex: v.clone(),
        word,
        verified_depth: depth,
    }))
}

/// Orbits of `G` on level `m`, from the generators' level permutations.
pub fn level_orbits(p: &Presentation, m: usize) -> Result<Vec<Vec<Vertex>>> {
    let sig = p.signature();
    let size = sig.level_size(m);
    let perms = p
        .generator_names()
        .iter()
        .map(|s| p.eval(&Word::symbol(s.as_str()), m)?.level_images(m))
        .collect::<Result<Vec<_>>>()?;
    let mut orbit_of = vec![usize::MAX; size];
    let mut orbits = Vec::new();
    for start in 0..size {
        if orbit_of[start] != usize::MAX {
            continue;
        }
        let id = orbits.len();
        orbit_of[start] = id;
        let mut members = vec![start];
        let mut i = 0;
        while i < members.len() {
            let x = members[i];
            for perm in &perms {
                let y = perm[x];
                if orbit_of[y] == usize::MAX {
                    orbit_of[y] = id;
                    members.push(y);
                }
            }
            i += 1;
        }
        members.sort_unstable();
        orbits.push(members.into_iter().map(|x| Vertex::from_index(sig, m, x)).collect());
    }
    Ok(orbits)
}

/// `WBI(m)` from the given witnesses: the worst orbit's best witness.
/// Deeper-acting witnesses overstate it, which only delays separation.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WbiReport {
    pub level: usize,
    pub value: usize,
    /// Best relative level per orbit, in orbit order.
    pub per_orbit: Vec<usize>,
}

pub fn compute_wbi(
    p: &Presentation,
    m: usize,
    witnesses: &[RigidWitness],
    orbits: &[Vec<Vertex>],
) -> Result<WbiReport> {
    let mut per_orbit = Vec::with_capacity(orbits.len());
    for orbit in orbits {
        let mut best: Option<usize> = None;
        for w in witnesses.iter().filter(|w| w.vertex.level() == m && orbit.contains(&w.vertex)) {
            let r = w.relative_level(p)?;
            best = Some(best.map_or(r, |b| b.min(r)));
        }
        per_orbit.push(best.ok_or(Error::MissingWitness { level: m })?);
    }
    let value = per_orbit.iter().copied().max().ok_or(Error::MissingWitness { level: m })?;
    Ok(WbiReport {
        level: m,
        value,
        per_orbit,
    })
}

/// Measured `WBI` for levels `0..=max_level`, one witness per orbit found by
/// search. Levels without witnesses inherit the deepest measured value,
/// which presumes the group looks alike below every vertex; such levels are
/// listed in `transported`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WbiTable {
    pub values: BTreeMap<usize, usize>,
    pub witnesses: Vec<RigidWitness>,
    pub transported: Vec<usize>,
}

impl WbiTable {
    pub fn get(&self, m: usize) -> Option<usize> {
        self.values.get(&m).copied()
    }
}

/// `WBI(m)` from one searched witness per orbit; `None` when some orbit
/// has no witness within the budget.
pub fn measure_wbi(
    p: &Presentation,
    m: usize,
    extra: usize,
    budget: Budget,
) -> Result<Option<(WbiReport, Vec<RigidWitness>)>> {
    let orbits = level_orbits(p, m)?;
    let mut ws = Vec::new();
    for orbit in &orbits {
        match find_rigid_witness(p, &orbit[0], extra, budget)? {
            Some(w) => ws.push(w),
            None => return Ok(None),
        }
    }
    Ok(Some((compute_wbi(p, m, &ws, &orbits)?, ws)))
}

impl WbiTable {
    pub fn empty() -> WbiTable {
        WbiTable {
            values: BTreeMap::new(),
            witnesses: Vec::new(),
            transported: Vec::new(),
        }
    }

    /// Fills in levels up to `m` and returns `WBI(m)`.
    pub fn extend_to(&mut self, p: &Presentation, m: usize, extra: usize, budget: Budget) -> Result<usize> {
        let from = self.values.keys().next_back().map_or(0, |&l| l + 1);
        for level in from..=m {
            match measure_wbi(p, level, extra, budget)? {
                Some((report, ws)) => {
                    self.values.insert(level, report.value);
                    self.witnesses.extend(ws);
                }
                None => {
                    let last = self
                        .values
                        .iter()
                        .rev()
                        .find(|(l, _)| !self.transported.contains(l))
                        .map(|(_, &v)| v)
                        .ok_or(Error::MissingWitness { level })?;
                    self.values.insert(level, last);
                    self.transported.push(level);
                }
            }
        }
        Ok(self.values[&m])
    }
}

pub fn wbi_table(p: &Presentation, max_level: usize, extra: usize, budget: Budget) -> Result<WbiTable> {
    let mut table = WbiTable::empty();
    table.extend_to(p, max_level, extra, budget)?;
    Ok(table)
}

/// First level in `(m, max_level]` on which `g t` and `t` have different
/// cycle types. Any tree automorphism `h` gives `h g t h⁻¹` the cycle type
/// of `g t`, so the twisted class of `g` then avoids that level's
/// stabilizer.
pub fn separation_level(g: &Portrait, t: &Portrait, m: usize, max_level: usize) -> Result<Option<usize>> {
    let gt = g.compose(t)?;
    for n in m + 1..=max_level.min(t.depth()) {
        if gt.cycle_type(n)? != t.cycle_type(n)? {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

/// Outcome of one step.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LocalStep {
    pub word: Word,
    pub m: usize,
    /// Avoidance level: the first level on which the cycle types separate.
    pub n: usize,
    pub wbi: usize,
    /// `m + WBI(m)`, the level the inductive argument guarantees when `H`
    /// is normal and the conjugator acts locally inside it.
    pub window: usize,
    /// The vertex `v_0` fixed by `t`.
    pub vertex: Vertex,
    /// Some element of `St_m` makes the label at `v_0` fixed-point free,
    /// which is the first move of the inductive argument. It fails when
    /// `t`'s label at `v_0` lies outside `H(v_0)`.
    pub local_move: bool,
}

/// Finds `ĝ ∈ St_m` whose twisted class avoids a stabilizer as shallow as
/// possible: candidates are the elements of `St_m` within the budget (BFS
/// order), scored by [`separation_level`] up to `max(horizon, m + WBI(m))`.
/// The first candidate with the smallest level wins.
pub fn locally_normal_step(
    p: &Presentation,
    t: &Portrait,
    m: usize,
    wbi: usize,
    horizon: usize,
    budget: Budget,
) -> Result<LocalStep> {
    if wbi == 0 {
        return Err(Error::Precondition("a weak branch index is at least 1".into()));
    }
    let horizon = horizon.max(m + wbi);
    if t.depth() < horizon {
        return Err(Error::OutOfDepth {
            level: horizon,
            depth: t.depth(),
        });
    }
    let t = t.truncate(horizon)?;
    let Some(vertex) = Vertex::level_iter(p.signature(), m).find(|v| t.apply(v).map(|u| u == *v).unwrap_or(false))
    else {
        return Err(Error::Precondition(format!("the conjugator fixes no vertex on level {m}")));
    };
    let window = m + wbi;
    let tl = t.label_at(&vertex)?;
    let mut local_move = false;
    let mut best: Option<(Word, usize)> = None;
    let (_, stats) = super::search::bfs_words(p, horizon, budget, |w, g| {
        if w.is_empty() || g.stabilizer_depth() < m {
            return Ok(false);
        }
        if g.label_at(&vertex)?.then_after(&tl).fixed_points() == 0 {
            local_move = true;
        }
        if let Some(n) = separation_level(g, &t, m, horizon)? {
            if best.as_ref().is_none_or(|(_, b)| n < *b) {
                best = Some((w.clone(), n));
            }
            return Ok(n == m + 1);
        }
        Ok(false)
    })?;
    let (word, n) = best.ok_or_else(|| Error::NotFound {
        stage: "locally normal step",
        detail: format!(
            "level {m}: no element of St_{m} separates by level {horizon} ({} elements, words up to length {})",
            stats.visited, stats.reached_len
        ),
    })?;
    Ok(LocalStep {
        word,
        m,
        n,
        wbi,
        window,
        vertex,
        local_move,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::selfsim::{grigorchuk, gupta_sidki};

    #[test]
    fn symmetric_dichotomy() {
        for k in [2, 3, 5] {
            let scan = scan_symmetric(k).unwrap();
            assert!(scan.dichotomy_holds() && scan.closures_transitive, "k = {k}");
        }
        let scan = scan_symmetric(4).unwrap();
        assert_eq!(scan.exceptions.len(), 1);
        assert_eq!(scan.exceptions[0].order(), 4);
    }

    #[test]
    fn gupta_sidki_local_groups_are_alternating() {
        let p = gupta_sidki();
        let budget = Budget {
            max_word_len: 8,
            ..Budget::default()
        };
        for m in 0..=2 {
            for v in Vertex::level_iter(p.signature(), m) {
                let r = check_local_normality(&p, &v, budget).unwrap();
                assert!(r.holds(), "{v}");
                assert_eq!(r.order, 3, "{v}");
            }
        }
    }

    #[test]
    fn grigorchuk_wbi() {
        let p = grigorchuk();
        let v: Vertex = "1".parse().unwrap();
        let w = RigidWitness {
            vertex: v.clone(),
            word: "d".parse().unwrap(),
            verified_depth: 5,
        };
        let orbits = level_orbits(&p, 1).unwrap();
        assert_eq!(orbits.len(), 1);
        assert_eq!(compute_wbi(&p, 1, std::slice::from_ref(&w), &orbits).unwrap().value, 2);
        assert!(matches!(
            compute_wbi(&p, 2, &[w], &level_orbits(&p, 2).unwrap()),
            Err(Error::MissingWitness { level: 2 })
        ));
    }

    #[test]
    fn step_needs_a_fixed_vertex() {
        let p = gupta_sidki();
        let t = p.eval(&"x".parse().unwrap(), 3).unwrap();
        assert!(matches!(
            locally_normal_step(&p, &t, 1, 1, 3, Budget::default()),
            Err(Error::Precondition(_))
        ));
    }
}
