use std::fmt;

use crate::error::{Error, Result};
use crate::isometries::{validate, GroupElement};

/// Labeled generators of a finitely generated subgroup of SU(2,1).
#[derive(Debug, Clone)]
pub struct GroupPresentation {
    generators: Vec<(String, GroupElement)>,
}

impl GroupPresentation {
    /// Validates every generator at `eps` and checks that labels are unique.
    pub fn new(generators: Vec<(String, GroupElement)>, eps: f64) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::InvalidPresentation("no generators".into()));
        }
        for (i, (label, g)) in generators.iter().enumerate() {
            if generators[..i].iter().any(|(l, _)| l == label) {
                return Err(Error::InvalidPresentation(format!("duplicate label {label:?}")));
            }
            validate(*g.matrix(), eps).map_err(|e| Error::InvalidGenerator {
                label: label.clone(),
                source: Box::new(e),
            })?;
        }
        Ok(Self { generators })
    }

    pub fn generators(&self) -> &[(String, GroupElement)] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn label(&self, index: usize) -> &str {
        &self.generators[index].0
    }

    pub fn element(&self, index: usize) -> &GroupElement {
        &self.generators[index].1
    }

    pub fn elements(&self) -> impl Iterator<Item = &GroupElement> {
        self.generators.iter().map(|(_, g)| g)
    }

    /// The presentation with every generator replaced by `Q⁻¹·g·Q`.
    pub fn conjugated(&self, q: &GroupElement) -> GroupPresentation {
        GroupPresentation {
            generators: self
                .generators
                .iter()
                .map(|(l, g)| (l.clone(), g.conjugate(q)))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    fn cancels(&self, other: &Letter) -> bool {
        self.generator == other.generator && self.inverse != other.inverse
    }
}

/// A reduced word in the generators.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn new(letters: Vec<Letter>) -> Self {
        let mut reduced: Vec<Letter> = Vec::with_capacity(letters.len());
        for l in letters {
            if reduced.last().is_some_and(|last| last.cancels(&l)) {
                reduced.pop();
            } else {
                reduced.push(l);
            }
        }
        Word(reduced)
    }

    pub fn generator(index: usize) -> Self {
        Word(vec![Letter {
            generator: index,
            inverse: false,
        }])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Ordered product of the generator powers, multiplied out from scratch.
    pub fn evaluate(&self, presentation: &GroupPresentation) -> GroupElement {
        self.0.iter().fold(GroupElement::identity(), |acc, l| {
            let g = presentation.element(l.generator);
            if l.inverse {
                acc * g.inverse()
            } else {
                &acc * g
            }
        })
    }

    pub fn display<'a>(&'a self, presentation: &'a GroupPresentation) -> WordDisplay<'a> {
        WordDisplay { word: self, presentation }
    }

    /// Parses `A*B^-1*A` against the presentation's labels.
    pub fn parse(s: &str, presentation: &GroupPresentation) -> Result<Word> {
        let mut letters = Vec::new();
        for token in s.split('*').map(str::trim).filter(|t| !t.is_empty()) {
            let (label, inverse) = match token.strip_suffix("^-1") {
                Some(l) => (l, true),
                None => (token, false),
            };
            let generator = presentation
                .generators()
                .iter()
                .position(|(l, _)| l == label)
                .ok_or_else(|| Error::InvalidPresentation(format!("unknown generator {label:?}")))?;
            letters.push(Letter { generator, inverse });
        }
        Ok(Word::new(letters))
    }
}

pub struct WordDisplay<'a> {
    word: &'a Word,
    presentation: &'a GroupPresentation,
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return f.write_str("1");
        }
        for (i, l) in self.word.0.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            f.write_str(self.presentation.label(l.generator))?;
            if l.inverse {
                f.write_str("^-1")?;
            }
        }
        Ok(())
    }
}

/// All nonempty reduced words of length at most `radius` with their values,
/// in length-lexicographic order. Letters are ordered `g1, g1⁻¹, g2, g2⁻¹, …`.
pub fn word_ball(presentation: &GroupPresentation, radius: usize) -> Vec<(Word, GroupElement)> {
    let alphabet: Vec<(Letter, GroupElement)> = (0..presentation.len())
        .flat_map(|i| {
            let g = *presentation.element(i);
            [
                (Letter { generator: i, inverse: false }, g),
                (Letter { generator: i, inverse: true }, g.inverse()),
            ]
        })
        .collect();

    let mut out: Vec<(Word, GroupElement)> = Vec::new();
    let mut level: Vec<(Word, GroupElement)> = vec![(Word::default(), GroupElement::identity())];
    for _ in 0..radius {
        let mut next = Vec::with_capacity(level.len() * alphabet.len());
        for (word, value) in &level {
            for (letter, g) in &alphabet {
                if word.0.last().is_some_and(|last| last.cancels(letter)) {
                    continue;
                }
                let mut letters = word.0.clone();
                letters.push(*letter);
                next.push((Word(letters), value * g));
            }
        }
        out.extend(next.iter().cloned());
        level = next;
    }
    out
}

/// `2n·(2n-1)^{k-1}` summed over `k = 1..=radius`.
pub fn word_ball_size(generators: usize, radius: usize) -> usize {
    let n = 2 * generators;
    (1..=radius).map(|k| n * (n - 1).pow(k as u32 - 1)).sum()
}
