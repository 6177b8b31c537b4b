//! Free-group words, presentations with meridian data, and Fox calculus.

use std::collections::hash_map::DefaultHasher;
use std::collections::BTreeMap;
use std::fmt;
use std::hash::{Hash, Hasher};

use thiserror::Error;

use crate::algebra::{LaurentPoly, PolyMatrix, QMatrix};
use crate::error::RepError;
use crate::reps::MatrixRep;

/// One letter `x_gen^exp` with `exp = ±1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub gen: usize,
    pub exp: i8,
}

/// A word in the free group on the generators; the empty word is the identity.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FreeWord {
    letters: Vec<Letter>,
}

impl FreeWord {
    pub fn identity() -> Self {
        FreeWord::default()
    }

    /// Panics on an exponent other than ±1.
    pub fn from_letters(letters: Vec<(usize, i8)>) -> Self {
        FreeWord {
            letters: letters
                .into_iter()
                .map(|(gen, exp)| {
                    assert!(exp == 1 || exp == -1, "letter exponent must be ±1");
                    Letter { gen, exp }
                })
                .collect(),
        }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn exponent_sum(&self) -> i64 {
        self.letters.iter().map(|l| l.exp as i64).sum()
    }

    pub fn prefix(&self, len: usize) -> FreeWord {
        FreeWord { letters: self.letters[..len].to_vec() }
    }

    pub fn concat(&self, other: &FreeWord) -> FreeWord {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        FreeWord { letters }
    }

    pub fn inverse(&self) -> FreeWord {
        FreeWord {
            letters: self.letters.iter().rev().map(|l| Letter { gen: l.gen, exp: -l.exp }).collect(),
        }
    }

    /// Cancels adjacent `x x^-1` pairs.
    pub fn reduced(&self) -> FreeWord {
        let mut out: Vec<Letter> = Vec::with_capacity(self.letters.len());
        for &l in &self.letters {
            match out.last() {
                Some(prev) if prev.gen == l.gen && prev.exp == -l.exp => {
                    out.pop();
                }
                _ => out.push(l),
            }
        }
        FreeWord { letters: out }
    }

    pub fn max_generator(&self) -> Option<usize> {
        self.letters.iter().map(|l| l.gen).max()
    }
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            if l.exp == 1 {
                write!(f, "x{}", l.gen + 1)?;
            } else {
                write!(f, "x{}^-1", l.gen + 1)?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PresentationError {
    #[error("word uses generator {found} but the presentation has {generators}")]
    UnknownGenerator { found: usize, generators: usize },
    #[error("relator {0} has nonzero exponent sum")]
    NonzeroExponentSum(usize),
    #[error("component labelling is not onto 0..{0}")]
    Components(usize),
}

/// A group presentation whose generators are meridians. The map to `<t>`
/// sends every generator to `t`, so every relator has exponent sum zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupPresentation {
    generators: usize,
    relators: Vec<FreeWord>,
    component_of_generator: Vec<usize>,
    components: usize,
}

impl GroupPresentation {
    pub fn new(
        generators: usize,
        relators: Vec<FreeWord>,
        component_of_generator: Vec<usize>,
        components: usize,
    ) -> Result<Self, PresentationError> {
        for (i, r) in relators.iter().enumerate() {
            if let Some(g) = r.max_generator() {
                if g >= generators {
                    return Err(PresentationError::UnknownGenerator { found: g, generators });
                }
            }
            if r.exponent_sum() != 0 {
                return Err(PresentationError::NonzeroExponentSum(i));
            }
        }
        let mut seen = vec![false; components];
        for &c in &component_of_generator {
            if c >= components {
                return Err(PresentationError::Components(components));
            }
            seen[c] = true;
        }
        if component_of_generator.len() != generators || seen.iter().any(|s| !s) {
            return Err(PresentationError::Components(components));
        }
        Ok(GroupPresentation { generators, relators, component_of_generator, components })
    }

    pub fn generator_count(&self) -> usize {
        self.generators
    }

    pub fn relators(&self) -> &[FreeWord] {
        &self.relators
    }

    pub fn component_of_generator(&self, g: usize) -> usize {
        self.component_of_generator[g]
    }

    pub fn component_count(&self) -> usize {
        self.components
    }

    /// Same group presentation with relator `index` removed.
    pub fn without_relator(&self, index: usize) -> GroupPresentation {
        let mut out = self.clone();
        out.relators.remove(index);
        out
    }

    /// Power of `t` that `w` maps to.
    pub fn phi(&self, w: &FreeWord) -> Result<i64, PresentationError> {
        self.check_word(w)?;
        Ok(w.exponent_sum())
    }

    pub fn check_word(&self, w: &FreeWord) -> Result<(), PresentationError> {
        match w.max_generator() {
            Some(g) if g >= self.generators => {
                Err(PresentationError::UnknownGenerator { found: g, generators: self.generators })
            }
            _ => Ok(()),
        }
    }

    /// Stable identity used to tie representations to their presentation.
    pub fn fingerprint(&self) -> u64 {
        let mut h = DefaultHasher::new();
        self.generators.hash(&mut h);
        self.relators.hash(&mut h);
        h.finish()
    }
}

/// One summand `coeff * prefix` of a Fox derivative; `t_power` is the image
/// of `prefix` under the map to `<t>`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoxTerm {
    pub coeff: i8,
    pub prefix: FreeWord,
    pub t_power: i64,
}

/// A Fox derivative as a formal sum of prefixes of the differentiated word.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FoxDerivative {
    pub terms: Vec<FoxTerm>,
}

impl FoxDerivative {
    /// The element of the integral group ring of the free group: reduced
    /// prefixes with collected coefficients, zero coefficients dropped.
    pub fn canonical(&self) -> BTreeMap<FreeWord, i64> {
        let mut out: BTreeMap<FreeWord, i64> = BTreeMap::new();
        for term in &self.terms {
            *out.entry(term.prefix.reduced()).or_default() += term.coeff as i64;
        }
        out.retain(|_, c| *c != 0);
        out
    }
}

/// `∂w/∂x_j` by the Fox rules: an occurrence `x_j` at position `i`
/// contributes `+w[..i]`, an occurrence `x_j^-1` contributes `-w[..=i]`.
pub fn fox_derivative(w: &FreeWord, j: usize) -> FoxDerivative {
    let mut terms = Vec::new();
    let mut power = 0i64;
    for (i, l) in w.letters.iter().enumerate() {
        if l.gen == j {
            if l.exp == 1 {
                terms.push(FoxTerm { coeff: 1, prefix: w.prefix(i), t_power: power });
            } else {
                terms.push(FoxTerm { coeff: -1, prefix: w.prefix(i + 1), t_power: power - 1 });
            }
        }
        power += l.exp as i64;
    }
    FoxDerivative { terms }
}

/// Image of `w` under the rational part of a representation (no `t`).
pub fn evaluate_word_rational(rep: &MatrixRep, w: &FreeWord) -> Result<QMatrix, RepError> {
    let mut acc = QMatrix::identity(rep.k());
    for l in &w.letters {
        let m = rep.letter(l.gen, l.exp).ok_or(RepError::MissingGenerator(l.gen))?;
        acc = &acc * m;
    }
    Ok(acc)
}

/// Image of `w` under `α ⊗ φ`: `α(w) * t^{φ(w)}`.
pub fn evaluate_word(rep: &MatrixRep, w: &FreeWord) -> Result<PolyMatrix, RepError> {
    Ok(evaluate_word_rational(rep, w)?.to_poly(w.exponent_sum()))
}

/// All Fox derivatives of a presentation, computed once and evaluated under
/// as many representations as needed.
#[derive(Clone, Debug)]
pub struct FoxMatrix {
    generators: usize,
    relators: Vec<FreeWord>,
    /// `derivatives[i][j] = ∂r_i/∂x_j`
    derivatives: Vec<Vec<FoxDerivative>>,
}

impl FoxMatrix {
    pub fn new(p: &GroupPresentation) -> Self {
        let derivatives = p
            .relators()
            .iter()
            .map(|r| (0..p.generator_count()).map(|j| fox_derivative(r, j)).collect())
            .collect();
        FoxMatrix { generators: p.generator_count(), relators: p.relators().to_vec(), derivatives }
    }

    pub fn derivative(&self, relator: usize, generator: usize) -> &FoxDerivative {
        &self.derivatives[relator][generator]
    }

    /// Block matrix of size `(k * relators) x (k * generators)` whose block
    /// `(i, j)` is `(α ⊗ φ)(∂r_i/∂x_j)`. Assumes `rep` was validated.
    pub fn evaluate(&self, rep: &MatrixRep) -> Result<PolyMatrix, RepError> {
        let k = rep.k();
        let mut out = PolyMatrix::zeros(k * self.relators.len(), k * self.generators);
        for (i, r) in self.relators.iter().enumerate() {
            // Every term's prefix is a prefix of r, so one pass of partial
            // products serves all of them.
            let mut prefixes = Vec::with_capacity(r.len() + 1);
            prefixes.push(QMatrix::identity(k));
            for l in r.letters() {
                let m = rep.letter(l.gen, l.exp).ok_or(RepError::MissingGenerator(l.gen))?;
                let next = prefixes.last().unwrap() * m;
                prefixes.push(next);
            }
            for (j, d) in self.derivatives[i].iter().enumerate() {
                for term in &d.terms {
                    let m = &prefixes[term.prefix.len()];
                    for a in 0..k {
                        for b in 0..k {
                            let c = &m[(a, b)];
                            if num_traits::Zero::is_zero(c) {
                                continue;
                            }
                            let mut c = c.clone();
                            if term.coeff < 0 {
                                c = -c;
                            }
                            out[(i * k + a, j * k + b)] += &LaurentPoly::monomial(c, term.t_power);
                        }
                    }
                }
            }
        }
        Ok(out)
    }
}

/// Validates `rep` against `p` and evaluates the Fox matrix.
pub fn evaluate_fox_matrix(rep: &MatrixRep, p: &GroupPresentation) -> Result<PolyMatrix, RepError> {
    rep.validate(p)?;
    FoxMatrix::new(p).evaluate(rep)
}
