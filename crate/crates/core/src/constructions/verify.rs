//! Independent re-verification of certificates.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::certificate::{Certificate, Separation, CERTIFICATE_SCHEMA};
use crate::error::{Error, Result};
use crate::quotient::{induce, twisted_classes, QuotientGroup};
use crate::selfsim::{AutomorphismSpec, Presentation};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum Verdict {
    Sound,
    Unsound { reason: String },
    /// Every recomputed invariant holds, but entries avoiding levels deeper
    /// than `depth` were not cross-checked in the quotient.
    PartiallyVerified { depth: usize, unchecked: Vec<usize> },
}

impl Verdict {
    pub fn is_sound(&self) -> bool {
        matches!(self, Verdict::Sound)
    }

    pub fn is_unsound(&self) -> bool {
        matches!(self, Verdict::Unsound { .. })
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Sound => f.write_str("sound"),
            Verdict::Unsound { reason } => write!(f, "unsound: {reason}"),
            Verdict::PartiallyVerified { depth, unchecked } => {
                write!(f, "partially verified at depth {depth} (entries {unchecked:?} unchecked)")
            }
        }
    }
}

fn unsound(reason: impl Into<String>) -> Result<Verdict> {
    Ok(Verdict::Unsound { reason: reason.into() })
}

/// Re-derives every entry from its words, then cross-checks the entries
/// whose avoidance level fits in `G / St_depth`: stabilizer membership,
/// class avoidance and pairwise distinct classes.
///
/// Words that do not evaluate (unknown symbols, normalizer symbols in
/// group words) make the certificate unsound. Only resource limits, such as
/// the quotient exceeding `cap`, are reported as errors.
pub fn verify_certificate(p: &Presentation, c: &Certificate, depth: usize, cap: usize) -> Result<Verdict> {
    if c.schema != CERTIFICATE_SCHEMA {
        return unsound(format!("unknown schema {}", c.schema));
    }
    if c.presentation_hash != p.hash() {
        return unsound("certificate was issued for a different presentation");
    }
    if c.claimed_bound != c.entries.len() {
        return unsound(format!("claims {} with {} entries", c.claimed_bound, c.entries.len()));
    }
    if c.entries.is_empty() {
        return Ok(Verdict::Sound);
    }
    match symbolic_checks(p, c) {
        Ok(Some(reason)) => return unsound(reason),
        Ok(None) => {}
        Err(e @ (Error::CapExceeded { .. } | Error::Io(_))) => return Err(e),
        Err(e) => return unsound(e.to_string()),
    }
    if depth == 0 {
        return Ok(Verdict::PartiallyVerified {
            depth,
            unchecked: (0..c.entries.len()).collect(),
        });
    }
    let q = QuotientGroup::build(p, depth, cap)?;
    match quotient_checks(p, c, &q) {
        Ok(v) => Ok(v),
        Err(e @ (Error::CapExceeded { .. } | Error::Io(_))) => Err(e),
        Err(e) => unsound(e.to_string()),
    }
}

fn symbolic_checks(p: &Presentation, c: &Certificate) -> Result<Option<String>> {
    let top = c
        .entries
        .iter()
        .map(|e| e.n.max(e.separation.level()))
        .max()
        .unwrap_or(0)
        .max(1);
    p.check_group_word(&c.twist)?;
    p.check_isometry_word(&c.conjugator)?;
    // the conjugator must realize the spec on the levels in use
    match &c.spec {
        AutomorphismSpec::ConjugationBy { conjugator } => {
            if *conjugator != c.conjugator {
                return Ok(Some(format!("conjugator {} differs from the spec's {conjugator}", c.conjugator)));
            }
        }
        AutomorphismSpec::GeneratorImages { images } => {
            let t = p.eval_isometry(&c.conjugator, top)?;
            for (s, img) in images {
                let lhs = t.conjugate(&p.eval(&crate::selfsim::Word::symbol(s.as_str()), top)?)?;
                if lhs != p.eval(img, top)? {
                    return Ok(Some(format!(
                        "conjugation by {} does not send {s} to {img} at depth {top}",
                        c.conjugator
                    )));
                }
            }
        }
    }
    let t = p.eval_isometry(&c.effective_conjugator(), top)?;
    let mut prev_n = 0;
    for (i, e) in c.entries.iter().enumerate() {
        let name = format!("entry {i} ({})", e.word);
        p.check_group_word(&e.word)?;
        if i > 0 && e.m < prev_n {
            return Ok(Some(format!("{name}: level {} is above the previous avoidance level {prev_n}", e.m)));
        }
        prev_n = e.n;
        let level = e.separation.level();
        if level <= e.m || level > e.n {
            return Ok(Some(format!(
                "{name}: separation level {level} outside ({}, {}]",
                e.m, e.n
            )));
        }
        let g = p.eval(&e.word, top)?;
        if g.stabilizer_depth() < e.m {
            return Ok(Some(format!("{name}: not in St_{}", e.m)));
        }
        match &e.separation {
            Separation::CycleType {
                level,
                element,
                conjugator,
            } => {
                let got_element = g.compose(&t)?.cycle_type(*level)?;
                let got_conjugator = t.cycle_type(*level)?;
                if got_element != *element || got_conjugator != *conjugator {
                    return Ok(Some(format!("{name}: recorded cycle types do not match on level {level}")));
                }
                if got_element == got_conjugator {
                    return Ok(Some(format!("{name}: cycle types agree on level {level}")));
                }
            }
            Separation::LevelSign { level } => {
                if g.level_sign(*level)? != -1 {
                    return Ok(Some(format!("{name}: even on level {level}")));
                }
            }
        }
    }
    Ok(None)
}

fn quotient_checks(p: &Presentation, c: &Certificate, q: &QuotientGroup) -> Result<Verdict> {
    let d = q.depth();
    let conj = AutomorphismSpec::conjugation(c.effective_conjugator());
    let phi = induce(p, q, &conj)?;
    // the twisted spec and the stored conjugator agree on the quotient
    let direct = induce(p, q, &c.spec)?.twisted_by(q, q.word_id(&c.twist)?);
    if direct.images() != phi.images() {
        return unsound(format!("twisted spec and conjugator induce different maps on G/St_{d}"));
    }
    let classes = twisted_classes(q, &phi);
    let mut unchecked = Vec::new();
    let mut seen = Vec::new();
    for (i, e) in c.entries.iter().enumerate() {
        let id = q.word_id(&e.word)?;
        if q.stabilizer_depth(id) < e.m.min(d) {
            return unsound(format!("entry {i} ({}): image not in St_{} of G/St_{d}", e.word, e.m));
        }
        if e.n > d {
            unchecked.push(i);
            continue;
        }
        let class = classes.class_of(id);
        if classes.class_meets_stabilizer(q, class, e.n)? {
            return unsound(format!("entry {i} ({}): twisted class meets St_{} in G/St_{d}", e.word, e.n));
        }
        if let Some(j) = seen.iter().position(|&(_, cl)| cl == class) {
            return unsound(format!("entries {} and {i} share a twisted class in G/St_{d}", seen[j].0));
        }
        seen.push((i, class));
    }
    if unchecked.is_empty() {
        Ok(Verdict::Sound)
    } else {
        Ok(Verdict::PartiallyVerified { depth: d, unchecked })
    }
}
