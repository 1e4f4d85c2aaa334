use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::vertex::Vertex;
use crate::word::Word;

/// Tree arity `m` and generator count `s` of the group `G = B_s(O_m)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawParams")]
pub struct GroupParams {
    m: usize,
    s: usize,
}

#[derive(Deserialize)]
struct RawParams {
    m: usize,
    s: usize,
}

impl TryFrom<RawParams> for GroupParams {
    type Error = Error;

    fn try_from(raw: RawParams) -> Result<Self> {
        GroupParams::new(raw.m, raw.s)
    }
}

impl GroupParams {
    pub fn new(m: usize, s: usize) -> Result<Self> {
        if m < 2 || s < 2 {
            return Err(Error::InvalidParams { m, s });
        }
        if m > 36 {
            return Err(Error::Parse(format!(
                "arity {m} has no digit-string vertex encoding (max 36)"
            )));
        }
        Ok(GroupParams { m, s })
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn s(&self) -> usize {
        self.s
    }

    pub fn check_word(&self, w: &Word) -> Result<()> {
        match w.max_index() {
            Some(i) if i >= self.s => Err(Error::ParameterMismatch(format!(
                "letter index {i} out of range for s={}",
                self.s
            ))),
            _ => Ok(()),
        }
    }

    pub fn check_vertex(&self, u: &Vertex) -> Result<()> {
        u.check(self.m)
    }

    /// The single-letter words `a_0, …, a_{s-1}`.
    pub fn generators(&self) -> Vec<Word> {
        (0..self.s).map(Word::generator).collect()
    }
}

/// Resource caps and search policy; none of these affect correctness.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    /// Maximum number of vertices tabulated by a level permutation.
    pub level_cap: usize,
    /// Maximum number of vertices labelled by a portrait.
    pub portrait_cap: usize,
    /// Maximum number of elements in a Cayley ball.
    pub ball_cap: usize,
    /// Level whose permutation buckets ball candidates before exact comparison.
    pub prefilter_depth: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            level_cap: 1_000_000,
            portrait_cap: 1_000_000,
            ball_cap: 250_000,
            prefilter_depth: 4,
        }
    }
}

/// The on-disk word format `{"m": .., "s": .., "word": [[index, exponent], ..]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordRecord {
    pub m: usize,
    pub s: usize,
    pub word: Word,
}

impl WordRecord {
    pub fn new(params: GroupParams, word: Word) -> Self {
        WordRecord {
            m: params.m,
            s: params.s,
            word,
        }
    }

    pub fn params(&self) -> Result<GroupParams> {
        GroupParams::new(self.m, self.s)
    }

    /// Parses a record and checks the word against its own parameters.
    pub fn from_json(text: &str) -> Result<Self> {
        let rec: WordRecord =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("word record: {e}")))?;
        rec.params()?.check_word(&rec.word)?;
        Ok(rec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("word records always serialize")
    }
}
