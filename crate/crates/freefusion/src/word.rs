//! Words over a fusion alphabet, with the extensions of `*` and `∘` to the
//! free monoid.
//!
//! The involution extends by reversing and starring letterwise; the fusion
//! extends by fusing the last letter of the left word with the first letter
//! of the right one. Fusion involving an empty word is undefined (this is the
//! convention that makes the product rule reproduce the expected
//! decompositions).

use std::cmp::Ordering;
use std::fmt;

use crate::datum::{DatumError, FusionDatum, Letter};

/// A finite sequence of letters; the empty word names the unit simple.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub(crate) fn from_letters(letters: Vec<Letter>) -> Self {
        Word(letters)
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

    pub fn concat(&self, other: &Word) -> Word {
        Word(self.0.iter().chain(other.0.iter()).copied().collect())
    }
}

// Canonical total order: length first, then lexicographic by letter id.
impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}", l.id())?;
        }
        write!(f, "]")
    }
}

impl FusionDatum {
    /// Builds a word from letter ids, canonicalizing and validating each.
    pub fn word<I: IntoIterator<Item = i64>>(&self, ids: I) -> Result<Word, DatumError> {
        let letters: Result<Vec<Letter>, _> = ids.into_iter().map(|id| self.letter(id)).collect();
        Ok(Word(letters?))
    }

    pub fn word_valid(&self, w: &Word) -> bool {
        w.0.iter().all(|&l| self.letter_valid(l))
    }

    /// `w* `: reverse and star letterwise. An involution on words.
    pub fn word_dual(&self, w: &Word) -> Word {
        Word(w.0.iter().rev().map(|&l| self.involve(l)).collect())
    }

    /// `v ∘ w`: replace the boundary pair by its fusion, when defined.
    ///
    /// Returns `None` when either word is empty or the boundary letters do
    /// not fuse.
    pub fn word_fusion(&self, v: &Word, w: &Word) -> Option<Word> {
        let (&last, &first) = (v.0.last()?, w.0.first()?);
        let fused = self.fuse(last, first)?;
        let mut out = Vec::with_capacity(v.len() + w.len() - 1);
        out.extend_from_slice(&v.0[..v.len() - 1]);
        out.push(fused);
        out.extend_from_slice(&w.0[1..]);
        Some(Word(out))
    }

    /// Renders a word with this datum's letter names, e.g. `[a a*]`.
    pub fn format_word(&self, w: &Word) -> String {
        let inner: Vec<String> = w.0.iter().map(|&l| self.letter_name(l)).collect();
        format!("[{}]", inner.join(" "))
    }

    /// All words of length at most `max_len`, in canonical order.
    ///
    /// `range` restricts letter ids and is required when the alphabet is
    /// infinite.
    pub fn words_up_to(
        &self,
        max_len: usize,
        range: Option<&std::ops::RangeInclusive<i64>>,
    ) -> Option<Vec<Word>> {
        let letters = match (self.letters(), range) {
            (Some(ls), _) => ls,
            (None, Some(r)) => self.letters_within(r.clone()),
            (None, None) => return None,
        };
        let mut out = vec![Word::empty()];
        let mut layer = vec![Word::empty()];
        for _ in 0..max_len {
            let mut next = Vec::with_capacity(layer.len() * letters.len());
            for w in &layer {
                for &l in &letters {
                    let mut v = w.0.clone();
                    v.push(l);
                    next.push(Word(v));
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        Some(out)
    }
}
