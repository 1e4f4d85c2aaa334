//! Finite verification suites over the projection calculus and the generating family.
//! Each returns a [`LemmaReport`]; a suite passes when it has no violations.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::family::{check_spherical_transitivity_capped, fractality_witness, verify_generator_recursions};
use crate::geodesics::LemmaReport;
use crate::group::{GroupParams, Limits};
use crate::noise::NoiseGen;
use crate::projections::{
    cyclic_alignment, normalize_to_permuted_product, rightmost_projection, shifted_congruence_check,
    verify_witness, Budget, PermutedProduct,
};
use crate::word::{Letter, Word};

pub const SHIFTED_CONGRUENCE: &str = "shifted_congruence";
pub const RIGHTMOST_PROJECTION: &str = "rightmost_projection";
pub const CYCLIC_ALIGNMENT: &str = "cyclic_alignment";
pub const NORMALIZATION: &str = "normalization";
pub const SPHERICAL_TRANSITIVITY: &str = "spherical_transitivity";
pub const GENERATOR_RECURSIONS: &str = "generator_recursions";
pub const FRACTALITY: &str = "fractality";

/// `count` seeded inputs `P·z` with `P` a random permuted product and `z` a product of
/// at most three short commutators.
pub fn noisy_products(params: GroupParams, count: usize, seed: u64) -> Vec<Word> {
    let all = PermutedProduct::all(params.s());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut noise = NoiseGen::new(params, seed.wrapping_add(1));
    (0..count)
        .map(|_| all[rng.gen_range(0..all.len())].word().compose(&noise.noise()))
        .collect()
}

/// Shifted congruence of all level-`j` sections, for every input and `1 ≤ j ≤ max_j`.
pub fn congruence_suite(params: GroupParams, inputs: &[Word], max_j: usize) -> Result<LemmaReport> {
    let mut rep = LemmaReport::new(SHIFTED_CONGRUENCE);
    for w in inputs {
        for j in 1..=max_j {
            let ok = shifted_congruence_check(params, w, j)?;
            rep.check(ok, w, || format!("a section at level {j} has the wrong abelianization"));
        }
    }
    Ok(rep)
}

/// Every permuted product projects to its shift by `j mod s`, for `0 ≤ j ≤ 2s+1`, and
/// returns exactly the input word at `j = s`.
pub fn projection_suite(params: GroupParams) -> Result<LemmaReport> {
    let s = params.s();
    let mut rep = LemmaReport::new(RIGHTMOST_PROJECTION);
    for prod in PermutedProduct::all(s) {
        let w = prod.word();
        for j in 0..=2 * s + 1 {
            let got = rightmost_projection(params, &w, j)?;
            let want = w.shifted(j % s, s);
            let ok = params.equal(&got, &want)? && (j != s || got == w);
            rep.check(ok, &w, || format!("level {j} gave {got}, expected {want}"));
        }
    }
    Ok(rep)
}

/// Alignment of every all-positive product to every target index.
///
/// The returned word must be a rotation ending with `a_target`, at a level divisible by
/// `s`, and equal to the section of the matching power at the returned vertex.
pub fn alignment_suite(params: GroupParams) -> Result<LemmaReport> {
    let s = params.s();
    let mut rep = LemmaReport::new(CYCLIC_ALIGNMENT);
    for prod in PermutedProduct::with_signs(&vec![1; s]) {
        let w = prod.word();
        for target in 0..s {
            let a = cyclic_alignment(params, &prod, target)?;
            let rotation = (0..s).any(|k| w.rotate_left(k) == a.word);
            let sec = params.power_section_raw(&w, &a.vertex);
            let ok = rotation
                && a.word.last() == Some(Letter::pos(target as u32))
                && a.vertex.level() % s == 0
                && a.vertex.level() == a.power_exponent
                && params.equal(&sec, &a.word)?;
            rep.check(ok, &w, || {
                format!("target {target}: vertex {} word {} not certified", a.vertex, a.word)
            });
        }
    }
    Ok(rep)
}

/// Normalization witnesses for each input, each re-verified independently.
pub fn normalization_suite(params: GroupParams, inputs: &[Word], budget: Budget) -> Result<LemmaReport> {
    let mut rep = LemmaReport::new(NORMALIZATION);
    for w in inputs {
        match normalize_to_permuted_product(params, w, budget) {
            Ok(wit) => {
                let ok = verify_witness(params, w, &wit);
                rep.check(ok, w, || format!("witness at {} fails re-verification", wit.vertex));
            }
            Err(e) if e.is_resource() || matches!(e, crate::Error::NotFound(_)) => {
                rep.check(false, w, || e.to_string());
            }
            Err(e) => return Err(e),
        }
    }
    Ok(rep)
}

/// Transitivity on every level `1..=max_n`.
pub fn transitivity_suite(params: GroupParams, max_n: usize, limits: &Limits) -> Result<LemmaReport> {
    let mut rep = LemmaReport::new(SPHERICAL_TRANSITIVITY);
    for n in 1..=max_n {
        let ok = check_spherical_transitivity_capped(params, n, limits.level_cap)?;
        rep.check(ok, &Word::identity(), || format!("not transitive on level {n}"));
    }
    Ok(rep)
}

/// Generator recursions, then one fractality witness per generator.
pub fn recursion_suite(params: GroupParams) -> Result<Vec<LemmaReport>> {
    let mut rec = LemmaReport::new(GENERATOR_RECURSIONS);
    rec.check(verify_generator_recursions(params), &Word::identity(), || {
        "a generator decomposition differs from its defining recursion".into()
    });
    let mut frac = LemmaReport::new(FRACTALITY);
    for i in 0..params.s() {
        let res = fractality_witness(params, i);
        let w = res.as_ref().cloned().unwrap_or_else(|_| Word::generator(i));
        frac.check(res.is_ok(), &w, || format!("no certified witness for a_{i}"));
    }
    Ok(vec![rec, frac])
}
