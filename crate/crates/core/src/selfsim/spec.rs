use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{Presentation, Word};
use crate::error::{Error, Result};

/// An automorphism of a self-similar group.
///
/// Every automorphism of the groups in scope is conjugation by a tree
/// isometry normalizing the group, so `ConjugationBy` is the general form;
/// `GeneratorImages` states an automorphism by where it sends generators and
/// is checked for consistency when induced on a quotient.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum AutomorphismSpec {
    /// `q ↦ t q t⁻¹`; the word may use normalizer elements.
    ConjugationBy { conjugator: Word },
    GeneratorImages { images: BTreeMap<String, Word> },
}

impl AutomorphismSpec {
    pub fn identity() -> AutomorphismSpec {
        AutomorphismSpec::ConjugationBy {
            conjugator: Word::empty(),
        }
    }

    pub fn conjugation(t: Word) -> AutomorphismSpec {
        AutomorphismSpec::ConjugationBy { conjugator: t }
    }

    pub fn images<S: Into<String>>(pairs: impl IntoIterator<Item = (S, Word)>) -> AutomorphismSpec {
        AutomorphismSpec::GeneratorImages {
            images: pairs.into_iter().map(|(s, w)| (s.into(), w)).collect(),
        }
    }

    /// Parses `identity`, `conj:<word>`, `images:s->w;s->w`, `tau1`..`tau3`
    /// or `family:<n>` (conjugation by the built-in `f<n>`), and checks the
    /// result against `p`.
    pub fn parse(text: &str, p: &Presentation) -> Result<AutomorphismSpec> {
        let text = text.trim();
        let spec = if text == "identity" || text == "id" {
            AutomorphismSpec::identity()
        } else if let Some(rest) = text.strip_prefix("conj:") {
            AutomorphismSpec::conjugation(rest.parse()?)
        } else if let Some(rest) = text.strip_prefix("family:") {
            let n: usize = rest
                .trim()
                .parse()
                .map_err(|_| Error::invalid("spec", format!("`{rest}` is not a level")))?;
            AutomorphismSpec::conjugation(Word::symbol(format!("f{n}")))
        } else if let Some(rest) = text.strip_prefix("images:") {
            let mut images = BTreeMap::new();
            for part in rest.split(';').filter(|s| !s.trim().is_empty()) {
                let (s, w) = part
                    .split_once("->")
                    .ok_or_else(|| Error::invalid("spec", format!("`{part}` is not `symbol->word`")))?;
                images.insert(s.trim().to_string(), w.parse()?);
            }
            AutomorphismSpec::GeneratorImages { images }
        } else if let Some(i) = text.strip_prefix("tau") {
            let i: u8 = i
                .parse()
                .map_err(|_| Error::invalid("spec", format!("unknown spec `{text}`")))?;
            spec_tau(i)?
        } else {
            return Err(Error::invalid(
                "spec",
                format!("unknown spec `{text}` (expected identity, conj:W, images:..., tauN or family:N)"),
            ));
        };
        spec.validate(p)?;
        Ok(spec)
    }

    pub fn validate(&self, p: &Presentation) -> Result<()> {
        match self {
            AutomorphismSpec::ConjugationBy { conjugator } => p.check_isometry_word(conjugator),
            AutomorphismSpec::GeneratorImages { images } => {
                for name in p.generator_names() {
                    if !images.contains_key(&name) {
                        return Err(Error::invalid("spec", format!("no image given for generator `{name}`")));
                    }
                }
                for (s, w) in images {
                    if p.symbol_kind(s) != Some(super::SymbolKind::Generator) {
                        return Err(Error::invalid("spec", format!("`{s}` is not a generator")));
                    }
                    p.check_group_word(w)?;
                }
                Ok(())
            }
        }
    }

    pub fn is_identity(&self) -> bool {
        match self {
            AutomorphismSpec::ConjugationBy { conjugator } => conjugator.is_empty(),
            AutomorphismSpec::GeneratorImages { images } => images
                .iter()
                .all(|(s, w)| w.letters().len() == 1 && w.letters()[0].symbol == *s && !w.letters()[0].inverse),
        }
    }

    /// `τ_g ∘ self`, where `τ_g(q) = g q g⁻¹`.
    pub fn twisted(&self, g: &Word) -> AutomorphismSpec {
        match self {
            AutomorphismSpec::ConjugationBy { conjugator } => AutomorphismSpec::conjugation(g.concat(conjugator)),
            AutomorphismSpec::GeneratorImages { images } => AutomorphismSpec::GeneratorImages {
                images: images.iter().map(|(s, w)| (s.clone(), g.conjugating(w))).collect(),
            },
        }
    }

    /// `self ∘ inner`.
    pub fn after(&self, inner: &AutomorphismSpec) -> Result<AutomorphismSpec> {
        use AutomorphismSpec::*;
        match (self, inner) {
            (ConjugationBy { conjugator: t }, ConjugationBy { conjugator: u }) => Ok(AutomorphismSpec::conjugation(t.concat(u))),
            (GeneratorImages { .. }, GeneratorImages { images }) => Ok(GeneratorImages {
                images: images
                    .iter()
                    .map(|(s, w)| Ok((s.clone(), self.apply(w)?)))
                    .collect::<Result<_>>()?,
            }),
            (ConjugationBy { conjugator: t }, GeneratorImages { images }) if t.is_empty() => Ok(GeneratorImages {
                images: images.clone(),
            }),
            _ => Err(Error::Unsupported(
                "composing a conjugation spec with a generator-image spec".into(),
            )),
        }
    }

    /// Image of `w` as a word. For `ConjugationBy` this is `t * w * t^-1` and
    /// may contain normalizer symbols.
    pub fn apply(&self, w: &Word) -> Result<Word> {
        match self {
            AutomorphismSpec::ConjugationBy { conjugator } => Ok(conjugator.conjugating(w)),
            AutomorphismSpec::GeneratorImages { images } => {
                let mut out = Word::empty();
                for l in w.letters() {
                    let img = images
                        .get(&l.symbol)
                        .ok_or_else(|| Error::UnknownSymbol(l.symbol.clone()))?;
                    out = out.concat(&if l.inverse { img.inverse() } else { img.clone() });
                }
                Ok(out)
            }
        }
    }

    /// Depth-`depth` portrait of the image of `w`.
    pub fn eval_image(&self, p: &Presentation, w: &Word, depth: usize) -> Result<crate::Portrait> {
        match self {
            AutomorphismSpec::ConjugationBy { conjugator } => {
                let t = p.eval_isometry(conjugator, depth)?;
                t.conjugate(&p.eval(w, depth)?)
            }
            AutomorphismSpec::GeneratorImages { .. } => p.eval(&self.apply(w)?, depth),
        }
    }

    /// A conjugating isometry word realizing this spec at `depth`: for
    /// `ConjugationBy` the stored conjugator, otherwise the first word of
    /// length `<= max_len` over all declared symbols whose conjugation action
    /// matches every generator image at that depth.
    pub fn find_conjugator(&self, p: &Presentation, depth: usize, max_len: usize) -> Result<Option<Word>> {
        let images = match self {
            AutomorphismSpec::ConjugationBy { conjugator } => return Ok(Some(conjugator.clone())),
            AutomorphismSpec::GeneratorImages { images } => images,
        };
        let targets = images
            .iter()
            .map(|(s, w)| Ok((p.eval(&Word::symbol(s.as_str()), depth)?, p.eval(w, depth)?)))
            .collect::<Result<Vec<_>>>()?;
        let letters: Vec<Word> = p
            .generators()
            .iter()
            .chain(p.normalizers())
            .flat_map(|r| [Word::symbol(r.name.as_str()), Word::symbol(r.name.as_str()).inverse()])
            .collect();
        let mut layer = vec![Word::empty()];
        for _ in 0..=max_len {
            for t in &layer {
                let tp = p.eval_isometry(t, depth)?;
                let mut ok = true;
                for (s, img) in &targets {
                    if tp.conjugate(s)? != *img {
                        ok = false;
                        break;
                    }
                }
                if ok {
                    return Ok(Some(t.clone()));
                }
            }
            layer = layer
                .iter()
                .flat_map(|t| letters.iter().map(move |l| t.concat(l)))
                .filter(|w| !w.is_empty())
                .collect();
            layer.dedup();
        }
        Ok(None)
    }
}

/// The outer automorphisms `τ_1, τ_2, τ_3 = τ_2 ∘ τ_1` of the Gupta–Sidki
/// group, on generators `x` and `g` (= γ).
pub fn spec_tau(i: u8) -> Result<AutomorphismSpec> {
    let x = Word::symbol("x");
    let g = Word::symbol("g");
    let (ix, ig) = match i {
        1 => (x.inverse(), g.clone()),
        2 => (x.clone(), g.inverse()),
        3 => (x.inverse(), g.inverse()),
        _ => return Err(Error::invalid("spec", format!("tau{i}: only tau1, tau2, tau3 exist"))),
    };
    Ok(AutomorphismSpec::images([("x", ix), ("g", ig)]))
}

impl fmt::Display for AutomorphismSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AutomorphismSpec::ConjugationBy { conjugator } if conjugator.is_empty() => f.write_str("identity"),
            AutomorphismSpec::ConjugationBy { conjugator } => write!(f, "conj:{conjugator}"),
            AutomorphismSpec::GeneratorImages { images } => {
                let parts: Vec<String> = images.iter().map(|(s, w)| format!("{s}->{w}")).collect();
                write!(f, "images:{}", parts.join(";"))
            }
        }
    }
}
