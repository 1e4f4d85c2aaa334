//! The generating family `a_0, …, a_{s-1}` and finite-level checks of its defining
//! recursion, fractality and spherical transitivity.

use serde::{Deserialize, Serialize};

use crate::calculus::LevelAction;
use crate::error::{Error, Result};
use crate::group::{GroupParams, Limits};
use crate::vertex::Vertex;
use crate::word::Word;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorFamily {
    pub params: GroupParams,
    /// `generators[i]` is the single letter `a_i`.
    pub generators: Vec<Word>,
}

impl GeneratorFamily {
    pub fn new(params: GroupParams) -> Self {
        GeneratorFamily {
            params,
            generators: params.generators(),
        }
    }

    pub fn generator(&self, i: usize) -> &Word {
        &self.generators[i]
    }
}

/// Checks `a_0 = (1,…,1,a_{s-1})σ` and `a_i = (1,…,1,a_{i-1})` against the decomposition.
pub fn verify_generator_recursions(params: GroupParams) -> bool {
    let (m, s) = (params.m(), params.s());
    let expected = |i: usize| -> (Vec<Word>, usize) {
        let mut sections = vec![Word::identity(); m];
        sections[m - 1] = Word::generator((i + s - 1) % s);
        (sections, usize::from(i == 0))
    };
    let family = GeneratorFamily::new(params);
    let general = (0..s).all(|i| {
        let d = params.decompose_raw(family.generator(i));
        let (sections, root) = expected(i);
        d.sections == sections && d.root_exponent == root
    });
    if !general {
        return false;
    }
    if (m, s) == (2, 2) {
        // classical Basilica: a = a_1 = (1, b), b = a_0 = (1, a)σ
        let a = family.generator(1);
        let b = family.generator(0);
        let da = params.decompose_raw(a);
        let db = params.decompose_raw(b);
        return da.sections == vec![Word::identity(), b.clone()]
            && da.root_exponent == 0
            && db.sections == vec![Word::identity(), a.clone()]
            && db.root_exponent == 1;
    }
    true
}

/// A first-level stabilising word whose section at the last child `m-1` equals `a_i`:
/// `a_{i+1}` for `i < s-1`, and `a_0^m` for `i = s-1`.
pub fn fractality_witness(params: GroupParams, i: usize) -> Result<Word> {
    let (m, s) = (params.m(), params.s());
    if i >= s {
        return Err(Error::Precondition(format!(
            "generator index {i} out of range for s={s}"
        )));
    }
    let h = if i + 1 < s {
        Word::generator(i + 1)
    } else {
        Word::generator(0).pow(m as i64)
    };
    let target = Word::generator(i);
    let sec = params.section_raw(&h, &Vertex::new(vec![m as u32 - 1]));
    if params.root_exponent_raw(&h) != 0 || !params.equal_raw(&sec, &target) {
        return Err(Error::Certification(format!(
            "fractality witness {h} does not project to {target}"
        )));
    }
    Ok(h)
}

/// True iff the group acts transitively on level `n`, via the orbit of `0…0` under the
/// letter permutations.
pub fn check_spherical_transitivity(params: GroupParams, n: usize) -> Result<bool> {
    check_spherical_transitivity_capped(params, n, Limits::default().level_cap)
}

pub fn check_spherical_transitivity_capped(
    params: GroupParams,
    n: usize,
    cap: usize,
) -> Result<bool> {
    let action = LevelAction::new(params, n, cap)?;
    let size = params.m().pow(n as u32);
    let tables: Vec<&[u32]> = crate::word::Letter::all(params.s())
        .into_iter()
        .map(|l| action.letter(l).images())
        .collect();
    let mut seen = vec![false; size];
    let mut stack = vec![0usize];
    seen[0] = true;
    let mut count = 1;
    while let Some(x) = stack.pop() {
        for t in &tables {
            let y = t[x] as usize;
            if !seen[y] {
                seen[y] = true;
                count += 1;
                stack.push(y);
            }
        }
    }
    Ok(count == size)
}
