use rayon::prelude::*;

use super::QuotientGroup;
use crate::error::{Error, Result};
use crate::selfsim::{AutomorphismSpec, Presentation, Word};

/// An automorphism acting on the element ids of a quotient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InducedAutomorphism {
    image: Vec<u32>,
    /// Human-readable origin (spec text plus any twist applied).
    pub source: String,
    /// Number of `(generator, element)` products checked for
    /// multiplicativity when the map was built.
    pub checked_pairs: usize,
}

impl InducedAutomorphism {
    pub fn identity(q: &QuotientGroup) -> InducedAutomorphism {
        InducedAutomorphism {
            image: (0..q.order() as u32).collect(),
            source: "identity".into(),
            checked_pairs: 0,
        }
    }

    pub fn apply(&self, id: usize) -> usize {
        self.image[id] as usize
    }

    pub fn images(&self) -> &[u32] {
        &self.image
    }

    /// `τ_g ∘ self`: `q ↦ g φ(q) g⁻¹`.
    pub fn twisted_by(&self, q: &QuotientGroup, g: usize) -> InducedAutomorphism {
        let gi = q.inv(g);
        let image = (0..q.order())
            .into_par_iter()
            .map(|x| q.mul(q.mul(g, self.apply(x)), gi) as u32)
            .collect();
        InducedAutomorphism {
            image,
            source: format!("twist[{}]∘{}", q.rep_word(g), self.source),
            checked_pairs: self.checked_pairs,
        }
    }

    pub fn fixed_points(&self) -> usize {
        self.image.iter().enumerate().filter(|(i, &x)| *i == x as usize).count()
    }
}

/// Induces `spec` on `q`.
///
/// Conjugation specs must map every element back into the quotient
/// ([`Error::NotNormalized`] otherwise). Generator-image specs are extended
/// along the BFS tree and then checked to be multiplicative on every
/// `(letter, element)` pair and bijective ([`Error::NotWellDefined`]).
pub fn induce(p: &Presentation, q: &QuotientGroup, spec: &AutomorphismSpec) -> Result<InducedAutomorphism> {
    if p.hash() != q.presentation_hash() {
        return Err(Error::Precondition("quotient was built from a different presentation".into()));
    }
    spec.validate(p)?;
    let depth = q.depth();
    let image: Vec<u32> = match spec {
        AutomorphismSpec::ConjugationBy { conjugator } => {
            let t = p.eval_isometry(conjugator, depth)?;
            let t_inv = t.inverse();
            (0..q.order())
                .into_par_iter()
                .map(|x| {
                    let img = t.compose(&q.portrait(x))?.compose(&t_inv)?;
                    q.id_of(&img).map(|i| i as u32).ok_or_else(|| Error::NotNormalized {
                        depth,
                        detail: format!("conjugating `{}` by `{conjugator}` leaves the group", q.rep_word(x)),
                    })
                })
                .collect::<Result<_>>()?
        }
        AutomorphismSpec::GeneratorImages { .. } => {
            let letter_images = q
                .letters()
                .iter()
                .map(|l| {
                    let w = Word::from_letters(vec![l.clone()]);
                    let img = p.eval(&spec.apply(&w)?, depth)?;
                    q.id_of(&img).ok_or_else(|| Error::NotWellDefined {
                        depth,
                        detail: format!("image of `{w}` is not in the quotient"),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let mut image = vec![0u32; q.order()];
            for id in 1..q.order() {
                let (par, l) = q.parent_record(id);
                image[id] = q.mul(letter_images[l as usize], image[par as usize] as usize) as u32;
            }
            // multiplicativity on letter · element determines a homomorphism
            (0..q.order()).into_par_iter().try_for_each(|x| {
                for (l, &li) in letter_images.iter().enumerate() {
                    let lhs = image[q.left_mul_letter(l, x)] as usize;
                    let rhs = q.mul(li, image[x] as usize);
                    if lhs != rhs {
                        return Err(Error::NotWellDefined {
                            depth,
                            detail: format!(
                                "φ({}·{}) ≠ φ({})·φ({})",
                                q.letters()[l].symbol,
                                q.rep_word(x),
                                q.letters()[l].symbol,
                                q.rep_word(x)
                            ),
                        });
                    }
                }
                Ok(())
            })?;
            image
        }
    };
    let mut seen = vec![false; q.order()];
    for &x in &image {
        if std::mem::replace(&mut seen[x as usize], true) {
            return Err(Error::NotWellDefined {
                depth,
                detail: "induced map is not injective".into(),
            });
        }
    }
    let checked_pairs = match spec {
        AutomorphismSpec::GeneratorImages { .. } => q.order() * q.letters().len(),
        AutomorphismSpec::ConjugationBy { .. } => 0,
    };
    Ok(InducedAutomorphism {
        image,
        source: spec.to_string(),
        checked_pairs,
    })
}
