//! Seeded commutator noise: products of basic commutators `[x, y] = x⁻¹y⁻¹xy` of short
//! generator words. Every output lies in `G'`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::group::GroupParams;
use crate::word::{Letter, Word};

/// Shape of generated noise.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NoiseSpec {
    pub max_commutators: usize,
    pub max_factor_len: usize,
}

impl Default for NoiseSpec {
    fn default() -> Self {
        NoiseSpec {
            max_commutators: 3,
            max_factor_len: 3,
        }
    }
}

/// Deterministic noise source for one parameter pair.
pub struct NoiseGen {
    params: GroupParams,
    spec: NoiseSpec,
    rng: ChaCha8Rng,
}

impl NoiseGen {
    pub fn new(params: GroupParams, seed: u64) -> Self {
        Self::with_spec(params, seed, NoiseSpec::default())
    }

    pub fn with_spec(params: GroupParams, seed: u64, spec: NoiseSpec) -> Self {
        NoiseGen {
            params,
            spec,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// A freely reduced word of length `1..=max_len`.
    pub fn word(&mut self, max_len: usize) -> Word {
        let letters = Letter::all(self.params.s());
        let len = self.rng.gen_range(1..=max_len.max(1));
        let mut w = Word::identity();
        while w.len() < len {
            let l = letters[self.rng.gen_range(0..letters.len())];
            if w.last().is_some_and(|x| x.is_inverse_of(l)) {
                continue;
            }
            w.push(l);
        }
        w
    }

    pub fn commutator(&mut self) -> Word {
        let x = self.word(self.spec.max_factor_len);
        let y = self.word(self.spec.max_factor_len);
        Word::commutator(&x, &y)
    }

    /// A product of `1..=max_commutators` commutators.
    pub fn noise(&mut self) -> Word {
        let k = self.rng.gen_range(1..=self.spec.max_commutators.max(1));
        self.product(k)
    }

    /// A product of exactly `k` commutators (the identity for `k = 0`).
    pub fn product(&mut self, k: usize) -> Word {
        (0..k).fold(Word::identity(), |acc, _| acc.compose(&self.commutator()))
    }
}
