//! Braid words, closure topology, and the bundled knot census.
//!
//! Words use the text form `"n: g1 g2 ..."`: strand count, a colon, then
//! signed generator letters (`g > 0` is a positive crossing of strands
//! `g, g+1`). The empty word is allowed; `"1:"` is the unknot.

use std::fmt;
use std::path::Path;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BraidError {
    #[error("braid text must start with `<strands>:`")]
    MissingStrandCount,
    #[error("invalid strand count `{0}`")]
    BadStrandCount(String),
    #[error("letter {index}: `{token}` is not an integer")]
    BadLetter { index: usize, token: String },
    #[error("letter {index}: generator 0 is not allowed")]
    ZeroLetter { index: usize },
    #[error("letter {index}: generator {letter} out of range for {strands} strands")]
    LetterOutOfRange { index: usize, letter: i32, strands: usize },
    #[error("closure has {components} components, expected a knot")]
    NotAKnot { components: usize },
    #[error("knot table entry `{name}`: {reason}")]
    BadEntry { name: String, reason: String },
    #[error("reading knot table: {0}")]
    Io(#[from] std::io::Error),
    #[error("parsing knot table: {0}")]
    Json(#[from] serde_json::Error),
}

/// A braid word: strand count plus signed generator letters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BraidWord {
    strands: usize,
    letters: Vec<i32>,
}

impl BraidWord {
    pub fn new(strands: usize, letters: Vec<i32>) -> Result<Self, BraidError> {
        if strands < 1 {
            return Err(BraidError::BadStrandCount(strands.to_string()));
        }
        for (index, &g) in letters.iter().enumerate() {
            if g == 0 {
                return Err(BraidError::ZeroLetter { index });
            }
            if g.unsigned_abs() as usize >= strands {
                return Err(BraidError::LetterOutOfRange { index, letter: g, strands });
            }
        }
        Ok(BraidWord { strands, letters })
    }

    /// Parse `"n: g1 g2 ..."`.
    pub fn parse(text: &str) -> Result<Self, BraidError> {
        let (head, tail) = text.split_once(':').ok_or(BraidError::MissingStrandCount)?;
        let strands: usize = head
            .trim()
            .parse()
            .map_err(|_| BraidError::BadStrandCount(head.trim().to_string()))?;
        if strands < 1 {
            return Err(BraidError::BadStrandCount(head.trim().to_string()));
        }
        let mut letters = Vec::new();
        for (index, token) in tail.split_whitespace().enumerate() {
            let g: i32 = token
                .parse()
                .map_err(|_| BraidError::BadLetter { index, token: token.to_string() })?;
            letters.push(g);
        }
        BraidWord::new(strands, letters)
    }

    #[inline]
    pub fn strands(&self) -> usize {
        self.strands
    }

    #[inline]
    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    /// Sum of the letter signs.
    pub fn writhe(&self) -> i64 {
        self.letters.iter().map(|&g| g.signum() as i64).sum()
    }

    /// Underlying permutation of the closure: position `p` at the braid's
    /// bottom connects to `perm[p]` at the top.
    pub fn permutation(&self) -> Vec<usize> {
        let mut perm: Vec<usize> = (0..self.strands).collect();
        for &g in &self.letters {
            let a = g.unsigned_abs() as usize - 1;
            perm.swap(a, a + 1);
        }
        perm
    }

    /// Number of link components of the braid closure.
    pub fn closure_components(&self) -> usize {
        let perm = self.permutation();
        let mut seen = vec![false; self.strands];
        let mut cycles = 0;
        for start in 0..self.strands {
            if seen[start] {
                continue;
            }
            cycles += 1;
            let mut at = start;
            while !seen[at] {
                seen[at] = true;
                at = perm[at];
            }
        }
        cycles
    }

    pub fn is_knot(&self) -> bool {
        self.closure_components() == 1
    }

    /// Markov-I move: conjugate by the generator `g` (same closure).
    pub fn conjugate(&self, g: i32) -> Result<Self, BraidError> {
        let mut letters = Vec::with_capacity(self.letters.len() + 2);
        letters.push(g);
        letters.extend_from_slice(&self.letters);
        letters.push(-g);
        BraidWord::new(self.strands, letters)
    }

    /// Markov-II move: add a strand and a final `sigma_n^{+-1}` (same closure).
    pub fn stabilize(&self, positive: bool) -> Self {
        let mut letters = self.letters.clone();
        let g = self.strands as i32;
        letters.push(if positive { g } else { -g });
        BraidWord { strands: self.strands + 1, letters }
    }

    /// Connected sum of two knot closures: the second word is shifted past
    /// the first word's strands.
    pub fn connect_sum(&self, other: &BraidWord) -> Result<Self, BraidError> {
        for word in [self, other] {
            let components = word.closure_components();
            if components != 1 {
                return Err(BraidError::NotAKnot { components });
            }
        }
        let shift = (self.strands - 1) as i32;
        let mut letters = self.letters.clone();
        letters.extend(other.letters.iter().map(|&g| if g > 0 { g + shift } else { g - shift }));
        BraidWord::new(self.strands + other.strands - 1, letters)
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.strands)?;
        for g in &self.letters {
            write!(f, " {g}")?;
        }
        Ok(())
    }
}

impl std::str::FromStr for BraidWord {
    type Err = BraidError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        BraidWord::parse(s)
    }
}

/// One census entry: a named knot with its braid word and shipped reference
/// data (never computed here; the `source` string records provenance).
#[derive(Clone, Debug)]
pub struct KnotEntry {
    pub name: String,
    pub word: BraidWord,
    pub reference_volume: Option<f64>,
    pub reference_determinant: Option<i64>,
    pub source: String,
}

#[derive(Deserialize, Serialize)]
struct RawEntry {
    name: String,
    strands: usize,
    word: Vec<i32>,
    reference_volume: Option<f64>,
    reference_determinant: Option<i64>,
    source: String,
}

fn entries_from_json(text: &str) -> Result<Vec<KnotEntry>, BraidError> {
    let raw: Vec<RawEntry> = serde_json::from_str(text)?;
    let mut out = Vec::with_capacity(raw.len());
    for r in raw {
        let word = BraidWord::new(r.strands, r.word).map_err(|e| BraidError::BadEntry {
            name: r.name.clone(),
            reason: e.to_string(),
        })?;
        if !word.is_knot() {
            return Err(BraidError::BadEntry {
                name: r.name,
                reason: format!(
                    "closure has {} components, knot entries must have 1",
                    word.closure_components()
                ),
            });
        }
        out.push(KnotEntry {
            name: r.name,
            word,
            reference_volume: r.reference_volume,
            reference_determinant: r.reference_determinant,
            source: r.source,
        });
    }
    Ok(out)
}

/// Load a knot table from a JSON file.
pub fn load_knot_table(path: impl AsRef<Path>) -> Result<Vec<KnotEntry>, BraidError> {
    entries_from_json(&std::fs::read_to_string(path)?)
}

const BUNDLED_TABLE: &str = include_str!("../data/knots.json");

/// The compiled-in census (unknot, 3_1, 4_1, 5_2, 6_1, granny).
pub fn bundled_knot_table() -> &'static [KnotEntry] {
    static TABLE: OnceLock<Vec<KnotEntry>> = OnceLock::new();
    TABLE.get_or_init(|| entries_from_json(BUNDLED_TABLE).expect("bundled table is valid"))
}

/// Look up an entry by name in a table.
pub fn find_knot<'a>(table: &'a [KnotEntry], name: &str) -> Option<&'a KnotEntry> {
    table.iter().find(|e| e.name == name)
}
