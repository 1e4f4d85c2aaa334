//! Projections of powers along the tree: `m`-th power sections, the rightmost-path
//! projection of `m^j`-th powers, congruences of sections modulo `G'`, cyclic
//! alignment and the search for permuted-product sections.
//!
//! "Shift by `r`" always means the index map `a_i ↦ a_{i-r mod s}`.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geodesics::gcd;
use crate::group::{GroupParams, Limits};
use crate::vertex::Vertex;
use crate::word::{Letter, Word};

/// The word `a_{π(s-1)}^{ε_{π(s-1)}} ⋯ a_{π(0)}^{ε_{π(0)}}`.
///
/// `signs` is indexed by generator: `signs[i]` is the exponent carried by `a_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PermutedProduct {
    pub pi: Vec<usize>,
    pub signs: Vec<i8>,
}

impl PermutedProduct {
    pub fn new(pi: Vec<usize>, signs: Vec<i8>) -> Result<Self> {
        let s = pi.len();
        let mut seen = vec![false; s];
        for &x in &pi {
            if x >= s || std::mem::replace(&mut seen[x], true) {
                return Err(Error::Precondition(format!("{pi:?} is not a permutation")));
            }
        }
        if signs.len() != s || signs.iter().any(|&e| e != 1 && e != -1) {
            return Err(Error::Precondition(format!(
                "signs {signs:?} must be {s} values in {{1, -1}}"
            )));
        }
        Ok(PermutedProduct { pi, signs })
    }

    pub fn s(&self) -> usize {
        self.pi.len()
    }

    pub fn word(&self) -> Word {
        Word::from_letters(self.pi.iter().rev().map(|&i| Letter {
            index: i as u32,
            exponent: self.signs[i],
        }))
    }

    /// Reads a word that uses every index in `0..s` exactly once.
    pub fn from_word(w: &Word, s: usize) -> Option<Self> {
        if w.len() != s {
            return None;
        }
        let mut signs = vec![0i8; s];
        let mut pi = vec![0usize; s];
        for (pos, l) in w.letters().iter().enumerate() {
            let i = l.idx();
            if i >= s || signs[i] != 0 {
                return None;
            }
            signs[i] = l.exponent;
            pi[s - 1 - pos] = i;
        }
        Some(PermutedProduct { pi, signs })
    }

    /// `a_i ↦ a_{i-r}` applied to the word.
    pub fn shifted(&self, r: usize) -> Self {
        let s = self.s();
        let sh = |i: usize| (i + s - r % s) % s;
        let pi = self.pi.iter().map(|&i| sh(i)).collect();
        let mut signs = vec![0i8; s];
        for i in 0..s {
            signs[sh(i)] = self.signs[i];
        }
        PermutedProduct { pi, signs }
    }

    /// The cyclic rotation of the word that ends with `a_j^{±1}`.
    pub fn rotation_ending_with(&self, j: usize) -> Word {
        let w = self.word();
        let pos = w
            .letters()
            .iter()
            .position(|l| l.idx() == j)
            .expect("every index occurs once");
        w.rotate_left(pos + 1)
    }

    /// All `s!` products carrying the given signs, in lexicographic order of `π`.
    pub fn with_signs(signs: &[i8]) -> Vec<PermutedProduct> {
        permutations(signs.len())
            .into_iter()
            .map(|pi| PermutedProduct {
                pi,
                signs: signs.to_vec(),
            })
            .collect()
    }

    /// All `s! · 2^s` permuted products.
    pub fn all(s: usize) -> Vec<PermutedProduct> {
        let mut out = Vec::new();
        for mask in 0..(1u32 << s) {
            let signs: Vec<i8> = (0..s)
                .map(|i| if mask >> i & 1 == 1 { -1 } else { 1 })
                .collect();
            out.extend(PermutedProduct::with_signs(&signs));
        }
        out
    }
}

/// Permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for x in 0..used.len() {
            if !used[x] {
                used[x] = true;
                cur.push(x);
                go(cur, used, out);
                cur.pop();
                used[x] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

fn coprime_or_zero(params: GroupParams, w: &Word) -> Result<usize> {
    let i = params.root_exponent_raw(w);
    if i != 0 && gcd(i, params.m()) != 1 {
        return Err(Error::Precondition(format!(
            "power-section formula requires gcd(i,m)=1 (root exponent {i}, m={})",
            params.m()
        )));
    }
    Ok(i)
}

/// Sections `α_0, …, α_{m-1}` of `w^m`, with `α_k = g_k g_{k+i} ⋯ g_{k+(m-1)i}` for
/// `σ_w = σ^i`. Requires `gcd(i, m) = 1` or `i = 0` (then `α_k = g_k^m`).
pub fn power_sections(params: GroupParams, w: &Word) -> Result<Vec<Word>> {
    params.check_word(w)?;
    coprime_or_zero(params, w)?;
    let out = params.mth_power_sections(w);
    let check = params.decompose_raw(&params.pow_m(w));
    if !out.iter().zip(&check.sections).all(|(a, b)| params.equal_raw(a, b)) {
        return Err(Error::Certification(format!(
            "power sections of {w} disagree with the decomposition of its m-th power"
        )));
    }
    Ok(out)
}

/// `φ_{v_j}(w^{m^j})` for the rightmost vertex `v_j = (m-1)⋯(m-1)` of level `j`.
///
/// Since `w^m` fixes the first level, this is `j` iterations of
/// `f ↦ section of f^m at m-1`.
pub fn rightmost_projection(params: GroupParams, w: &Word, j: usize) -> Result<Word> {
    params.check_word(w)?;
    coprime_or_zero(params, w)?;
    Ok(rightmost_projection_raw(params, w, j))
}

pub(crate) fn rightmost_projection_raw(params: GroupParams, w: &Word, j: usize) -> Word {
    let last = params.m() - 1;
    let mut cur = w.clone();
    for _ in 0..j {
        if cur.is_empty() {
            break;
        }
        cur = params.section_child(&params.pow_m(&cur), last);
    }
    cur
}

/// Follows the rightmost path `j` steps, taking `f ↦ φ_{m-1}(f)` when `f` fixes the first
/// level and `f ↦ φ_{m-1}(f^m)` otherwise. Membership in `H_{v_n}` passes to `H_{v_{n+1}}`.
pub fn project_along_rightmost(params: GroupParams, w: &Word, j: usize) -> Result<Word> {
    params.check_word(w)?;
    Ok(project_along_rightmost_raw(params, w, j))
}

pub(crate) fn project_along_rightmost_raw(params: GroupParams, w: &Word, j: usize) -> Word {
    let last = params.m() - 1;
    let mut cur = w.clone();
    for _ in 0..j {
        if cur.is_empty() {
            break;
        }
        cur = if params.root_exponent_raw(&cur) == 0 {
            params.section_child(&cur, last)
        } else {
            params.section_child(&params.pow_m(&cur), last)
        };
    }
    cur
}

impl GroupParams {
    pub(crate) fn pow_m(&self, w: &Word) -> Word {
        w.pow(self.m() as i64)
    }
}

/// Checks that every section of `w^{m^j}` at level `j` is congruent modulo `G'` to the
/// shift of `w`'s sign pattern by `j mod s`.
pub fn shifted_congruence_check(params: GroupParams, w: &Word, j: usize) -> Result<bool> {
    params.check_word(w)?;
    let v = params.abelianize_raw(w);
    if !v.is_sign_vector() {
        return Err(Error::Precondition(format!(
            "abelianization must be a sign vector, got {v}"
        )));
    }
    let count = (params.m() as u128).checked_pow(j as u32).unwrap_or(u128::MAX);
    let cap = Limits::default().level_cap;
    if count > cap as u128 {
        return Err(Error::cap("level vertices", count.min(usize::MAX as u128) as usize, cap));
    }
    let expected = v.rotated(j % params.s());
    let mut layer = vec![w.clone()];
    for _ in 0..j {
        layer = layer
            .iter()
            .flat_map(|f| params.mth_power_sections(f))
            .collect();
    }
    Ok(layer.iter().all(|f| params.abelianize_raw(f) == expected))
}

/// A cyclic rotation of a permuted product found as a section of a power.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Alignment {
    pub vertex: Vertex,
    /// The rotation; equals the section of `g^{m^{power_exponent}}` at `vertex`.
    pub word: Word,
    pub power_exponent: usize,
}

/// Finds a vertex `u` of level `s·n` (`n ≥ 1`) where the section of `g^{m^{|u|}}` is the
/// rotation of `prod` ending with `a_target`.
///
/// Tries the vertex `(m-1)^j (m-2) (m-1)^{s-j-1}` first, then every vertex of level `s`
/// and `2s` in lexicographic order. Each candidate is certified by the word problem.
pub fn cyclic_alignment(
    params: GroupParams,
    prod: &PermutedProduct,
    target: usize,
) -> Result<Alignment> {
    let (m, s) = (params.m(), params.s());
    if prod.s() != s {
        return Err(Error::ParameterMismatch(format!(
            "permuted product has {} letters, expected {s}",
            prod.s()
        )));
    }
    if target >= s {
        return Err(Error::Precondition(format!("target index {target} out of range")));
    }
    if prod.signs[target] != 1 {
        return Err(Error::Precondition(format!(
            "a_{target} carries exponent -1; alignment needs +1"
        )));
    }
    let g = prod.word();
    let want = prod.rotation_ending_with(target);

    let mut proof_path = vec![m as u32 - 1; target];
    proof_path.push(m as u32 - 2);
    proof_path.extend(std::iter::repeat_n(m as u32 - 1, s - target - 1));
    let first = Vertex::new(proof_path);

    let candidates = std::iter::once(first.clone())
        .chain(Vertex::level_iter(m, s).filter(move |u| *u != first))
        .chain(Vertex::level_iter(m, 2 * s));
    for u in candidates {
        let sec = params.power_section_raw(&g, &u);
        if params.equal_raw(&sec, &want) {
            return Ok(Alignment {
                power_exponent: u.level(),
                vertex: u,
                word: want,
            });
        }
    }
    Err(Error::NotFound(format!(
        "no aligned rotation of {g} ending with a_{target} up to level {}",
        2 * s
    )))
}

/// Search limits for [`normalize_to_permuted_product`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    /// Deepest vertex level explored.
    pub max_level: usize,
    /// Maximum number of exact equality tests.
    pub max_tests: usize,
}

impl Budget {
    pub fn for_params(params: GroupParams) -> Self {
        Budget {
            max_level: 3 * params.s(),
            max_tests: 100_000,
        }
    }
}

/// A vertex `u` of level divisible by `s` and the power `g' = g^{m^{power_exponent}}`
/// whose section at `u` is a permuted product.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalizationWitness {
    pub vertex: Vertex,
    pub power_exponent: usize,
    #[serde(flatten)]
    pub result: PermutedProduct,
    pub certificate_word: Word,
}

#[derive(PartialEq, Eq, PartialOrd, Ord)]
struct SearchNode {
    len: usize,
    level: usize,
    vertex: Vertex,
    word: Word,
}

/// Searches the tree of sections `f ↦ (f^m)_k` for a permuted product.
///
/// Nodes are expanded shortest word first. A node at level `ℓ` whose element equals a
/// permuted product `P` yields a witness at `u (m-1)^k` with `k = -ℓ mod s`, the result
/// being `P` shifted by `k`. The witness is re-verified from scratch before returning.
pub fn normalize_to_permuted_product(
    params: GroupParams,
    w: &Word,
    budget: Budget,
) -> Result<NormalizationWitness> {
    params.check_word(w)?;
    let s = params.s();
    let v = params.abelianize_raw(w);
    if !v.is_sign_vector() {
        return Err(Error::Precondition(format!(
            "abelianization must be a sign vector, got {v}"
        )));
    }

    let mut tests = 0usize;
    let mut visited: HashSet<Word> = HashSet::new();
    let mut heap = BinaryHeap::new();
    heap.push(Reverse(SearchNode {
        len: w.len(),
        level: 0,
        vertex: Vertex::root(),
        word: w.clone(),
    }));

    while let Some(Reverse(node)) = heap.pop() {
        if !visited.insert(node.word.clone()) {
            continue;
        }
        let signs: Vec<i8> = params
            .abelianize_raw(&node.word)
            .0
            .iter()
            .map(|&x| x as i8)
            .collect();
        for cand in PermutedProduct::with_signs(&signs) {
            if tests >= budget.max_tests {
                return Err(Error::BudgetExhausted(format!(
                    "{tests} equality tests without a permuted product"
                )));
            }
            tests += 1;
            if !params.equal_raw(&node.word, &cand.word()) {
                continue;
            }
            let k = (s - node.level % s) % s;
            let vertex = node
                .vertex
                .concat(&Vertex::rightmost(params.m(), k));
            let power_exponent = vertex.level();
            let witness = NormalizationWitness {
                certificate_word: w.pow((params.m() as i64).pow(power_exponent as u32)),
                vertex,
                power_exponent,
                result: cand.shifted(k),
            };
            if !verify_witness(params, w, &witness) {
                return Err(Error::Certification(format!(
                    "witness at {} fails re-verification",
                    witness.vertex
                )));
            }
            return Ok(witness);
        }
        if node.level < budget.max_level {
            for (x, child) in params.mth_power_sections(&node.word).into_iter().enumerate() {
                if !visited.contains(&child) {
                    heap.push(Reverse(SearchNode {
                        len: child.len(),
                        level: node.level + 1,
                        vertex: node.vertex.child(x as u32),
                        word: child,
                    }));
                }
            }
        }
    }
    Err(Error::BudgetExhausted(format!(
        "no permuted product within level {}",
        budget.max_level
    )))
}

/// Re-checks a witness independently of the search that produced it.
pub fn verify_witness(params: GroupParams, input: &Word, witness: &NormalizationWitness) -> bool {
    let s = params.s();
    let u = &witness.vertex;
    if !u.level().is_multiple_of(s) || u.level() != witness.power_exponent || u.check(params.m()).is_err() {
        return false;
    }
    if witness.result.s() != s {
        return false;
    }
    let Some(power) = (params.m() as i64).checked_pow(witness.power_exponent as u32) else {
        return false;
    };
    if witness.certificate_word != input.pow(power) {
        return false;
    }
    params.act_raw(&witness.certificate_word, u) == *u
        && params.equal_raw(
            &params.section_raw(&witness.certificate_word, u),
            &witness.result.word(),
        )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(m: usize, s: usize) -> GroupParams {
        GroupParams::new(m, s).unwrap()
    }

    fn w(x: &[(usize, i8)]) -> Word {
        Word::from_pairs(x).unwrap()
    }

    #[test]
    fn permuted_product_word_layout() {
        let pp = PermutedProduct::new(vec![0, 1, 2], vec![1, -1, 1]).unwrap();
        assert_eq!(pp.word(), w(&[(2, 1), (1, -1), (0, 1)]));
        assert_eq!(PermutedProduct::from_word(&pp.word(), 3), Some(pp.clone()));
        assert_eq!(pp.shifted(1).word(), w(&[(1, 1), (0, -1), (2, 1)]));
        assert_eq!(pp.rotation_ending_with(2), w(&[(1, -1), (0, 1), (2, 1)]));
        assert_eq!(PermutedProduct::all(3).len(), 48);
        assert!(PermutedProduct::new(vec![0, 0], vec![1, 1]).is_err());
    }

    #[test]
    fn power_section_examples() {
        let g = p(2, 2);
        assert_eq!(power_sections(g, &w(&[(0, 1)])).unwrap(), vec![w(&[(1, 1)]); 2]);
        let a = power_sections(g, &w(&[(1, 1), (0, 1)])).unwrap();
        assert_eq!(a, vec![w(&[(0, 1), (1, 1)]); 2]);
        let four = p(4, 2);
        assert!(matches!(
            power_sections(four, &w(&[(0, 1), (0, 1)])),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn rightmost_projection_examples() {
        let g = p(2, 2);
        let x = w(&[(1, 1), (0, 1)]);
        assert_eq!(rightmost_projection(g, &x, 1).unwrap(), w(&[(0, 1), (1, 1)]));
        assert_eq!(rightmost_projection(g, &x, 2).unwrap(), x);
        let y = w(&[(1, 1), (0, -1)]);
        assert_eq!(rightmost_projection(g, &y, 1).unwrap(), w(&[(0, 1), (1, -1)]));
        assert_eq!(rightmost_projection(g, &y, 0).unwrap(), y);
    }

    #[test]
    fn shifted_congruence_examples() {
        let g = p(2, 2);
        assert!(shifted_congruence_check(g, &w(&[(1, 1), (0, 1)]), 1).unwrap());
        let c = w(&[(0, -1), (1, -1), (0, 1), (1, 1)]);
        let x = w(&[(1, 1), (0, 1)]).compose(&c);
        assert!(shifted_congruence_check(g, &x, 2).unwrap());
        assert!(matches!(
            shifted_congruence_check(g, &w(&[(1, 1), (0, 1), (0, 1)]), 1),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn alignment_examples() {
        let g = p(2, 2);
        let prod = PermutedProduct::new(vec![0, 1], vec![1, 1]).unwrap();
        let a0 = cyclic_alignment(g, &prod, 0).unwrap();
        assert_eq!(a0.vertex.to_string(), "01");
        assert_eq!(a0.word, w(&[(1, 1), (0, 1)]));
        let a1 = cyclic_alignment(g, &prod, 1).unwrap();
        assert_eq!(a1.vertex.to_string(), "10");
        assert_eq!(a1.word, w(&[(0, 1), (1, 1)]));
        let neg = PermutedProduct::new(vec![0, 1], vec![1, -1]).unwrap();
        assert!(matches!(cyclic_alignment(g, &neg, 1), Err(Error::Precondition(_))));
    }

    #[test]
    fn normalization_examples() {
        let g = p(2, 2);
        let x = w(&[(1, 1), (0, 1)]);
        let wit = normalize_to_permuted_product(g, &x, Budget::for_params(g)).unwrap();
        assert!(wit.vertex.is_root());
        assert_eq!(wit.result.pi, vec![0, 1]);

        let c = w(&[(0, -1), (1, -1), (0, 1), (1, 1)]);
        let y = x.compose(&c);
        let wit = normalize_to_permuted_product(g, &y, Budget::for_params(g)).unwrap();
        assert!(verify_witness(g, &y, &wit));
        assert_eq!(wit.vertex.level() % 2, 0);

        assert!(matches!(
            normalize_to_permuted_product(g, &w(&[(0, 1), (1, 1), (0, 1)]), Budget::for_params(g)),
            Err(Error::Precondition(_))
        ));
    }
}
