//! Vertices of the m-adic tree, addressed by paths over `{0, …, m-1}`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A vertex given by its path from the root; the empty path is the root.
///
/// Serialized as a digit string such as `"021"` (digits beyond 9 use `a`–`z`).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vertex {
    path: Vec<u32>,
}

impl Vertex {
    pub fn root() -> Self {
        Vertex::default()
    }

    pub fn new(path: Vec<u32>) -> Self {
        Vertex { path }
    }

    /// `x x ⋯ x` with `n` entries.
    pub fn repeated(x: u32, n: usize) -> Self {
        Vertex { path: vec![x; n] }
    }

    /// The rightmost vertex `(m-1)⋯(m-1)` of the given level.
    pub fn rightmost(m: usize, level: usize) -> Self {
        Vertex::repeated(m as u32 - 1, level)
    }

    pub fn path(&self) -> &[u32] {
        &self.path
    }

    pub fn level(&self) -> usize {
        self.path.len()
    }

    pub fn is_root(&self) -> bool {
        self.path.is_empty()
    }

    pub fn child(&self, x: u32) -> Vertex {
        let mut path = self.path.clone();
        path.push(x);
        Vertex { path }
    }

    pub fn concat(&self, other: &Vertex) -> Vertex {
        let mut path = self.path.clone();
        path.extend_from_slice(&other.path);
        Vertex { path }
    }

    pub fn check(&self, m: usize) -> Result<()> {
        match self.path.iter().find(|&&x| x as usize >= m) {
            Some(x) => Err(Error::ParameterMismatch(format!(
                "vertex {self} has entry {x} outside 0..{m}"
            ))),
            None => Ok(()),
        }
    }

    /// Position of this vertex among the `m^n` vertices of its level, first entry most
    /// significant.
    pub fn rank(&self, m: usize) -> usize {
        self.path.iter().fold(0, |acc, &x| acc * m + x as usize)
    }

    pub fn from_rank(mut rank: usize, m: usize, level: usize) -> Vertex {
        let mut path = vec![0; level];
        for slot in path.iter_mut().rev() {
            *slot = (rank % m) as u32;
            rank /= m;
        }
        Vertex { path }
    }

    /// All `m^level` vertices of a level in rank order.
    pub fn level_iter(m: usize, level: usize) -> impl Iterator<Item = Vertex> {
        let count = m.pow(level as u32);
        (0..count).map(move |r| Vertex::from_rank(r, m, level))
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &x in &self.path {
            let c = char::from_digit(x, 36).unwrap_or('?');
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for Vertex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let path = s
            .trim()
            .chars()
            .map(|c| {
                c.to_digit(36)
                    .ok_or_else(|| Error::Parse(format!("bad vertex digit `{c}` in `{s}`")))
            })
            .collect::<Result<Vec<u32>>>()?;
        Ok(Vertex { path })
    }
}

impl Serialize for Vertex {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Vertex {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
