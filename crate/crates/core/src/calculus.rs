//! Wreath recursion for `G = B_s(O_m)`.
//!
//! Elements are words; everything else is computed on demand from the one-level
//! decomposition `g = (g_0, …, g_{m-1}) σ^e` with
//!
//! ```text
//! a_0 = (1, …, 1, a_{s-1}) σ        a_i = (1, …, 1, a_{i-1})   (1 ≤ i < s)
//! ```
//!
//! and the product rule `(x g)_k = x_k g_{k + e_x}`: words act on vertices letter by
//! letter from left to right.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{GroupParams, Limits};
use crate::vertex::Vertex;
use crate::word::{Letter, Word};

/// `g = (g_0, …, g_{m-1}) σ^{root_exponent}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WreathDecomposition {
    pub sections: Vec<Word>,
    pub root_exponent: usize,
}

/// Exponent sums of `a_0, …, a_{s-1}`: the image in `G/G' ≅ Z^s`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AbelianizationVector(pub Vec<i64>);

impl AbelianizationVector {
    pub fn zero(s: usize) -> Self {
        AbelianizationVector(vec![0; s])
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    /// True when every coordinate is `+1` or `-1`.
    pub fn is_sign_vector(&self) -> bool {
        self.0.iter().all(|&x| x == 1 || x == -1)
    }

    /// Coordinate `i` of the result is coordinate `(i + r) mod s` of `self`.
    pub fn rotated(&self, r: usize) -> Self {
        let s = self.0.len();
        AbelianizationVector((0..s).map(|i| self.0[(i + r) % s]).collect())
    }
}

impl Add for &AbelianizationVector {
    type Output = AbelianizationVector;

    fn add(self, rhs: Self) -> AbelianizationVector {
        AbelianizationVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &AbelianizationVector {
    type Output = AbelianizationVector;

    fn sub(self, rhs: Self) -> AbelianizationVector {
        AbelianizationVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &AbelianizationVector {
    type Output = AbelianizationVector;

    fn neg(self) -> AbelianizationVector {
        AbelianizationVector(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Display for AbelianizationVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, x) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// The action on the `m^n` vertices of level `n`, indexed by [`Vertex::rank`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LevelPermutation {
    m: usize,
    n: usize,
    images: Vec<u32>,
}

impl LevelPermutation {
    pub fn identity(m: usize, n: usize) -> Self {
        LevelPermutation {
            m,
            n,
            images: (0..m.pow(n as u32) as u32).collect(),
        }
    }

    pub fn level(&self) -> usize {
        self.n
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn image(&self, u: &Vertex) -> Vertex {
        Vertex::from_rank(self.images[u.rank(self.m)] as usize, self.m, self.n)
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(k, &x)| k as u32 == x)
    }

    /// The permutation "first `self`, then `other`".
    pub fn then(&self, other: &LevelPermutation) -> LevelPermutation {
        LevelPermutation {
            m: self.m,
            n: self.n,
            images: self
                .images
                .iter()
                .map(|&x| other.images[x as usize])
                .collect(),
        }
    }

    pub fn inverse(&self) -> LevelPermutation {
        let mut images = vec![0; self.images.len()];
        for (k, &x) in self.images.iter().enumerate() {
            images[x as usize] = k as u32;
        }
        LevelPermutation {
            m: self.m,
            n: self.n,
            images,
        }
    }

    pub fn is_bijection(&self) -> bool {
        let mut seen = vec![false; self.images.len()];
        for &x in &self.images {
            if x as usize >= seen.len() || seen[x as usize] {
                return false;
            }
            seen[x as usize] = true;
        }
        true
    }

    /// `(source, image)` vertex pairs in rank order.
    pub fn table(&self) -> Vec<(Vertex, Vertex)> {
        self.images
            .iter()
            .enumerate()
            .map(|(k, &x)| {
                (
                    Vertex::from_rank(k, self.m, self.n),
                    Vertex::from_rank(x as usize, self.m, self.n),
                )
            })
            .collect()
    }
}

/// Precomputed level-`n` permutations of the `2s` letters.
#[derive(Clone, Debug)]
pub struct LevelAction {
    params: GroupParams,
    n: usize,
    letters: Vec<LevelPermutation>,
}

impl LevelAction {
    pub fn new(params: GroupParams, n: usize, cap: usize) -> Result<Self> {
        let count = checked_level_size(params.m(), n, cap)?;
        let letters = Letter::all(params.s())
            .into_iter()
            .map(|l| {
                let w = Word::letter(l);
                let images = (0..count)
                    .map(|r| {
                        let u = Vertex::from_rank(r, params.m(), n);
                        params.act_raw(&w, &u).rank(params.m()) as u32
                    })
                    .collect();
                LevelPermutation {
                    m: params.m(),
                    n,
                    images,
                }
            })
            .collect();
        Ok(LevelAction { params, n, letters })
    }

    pub fn level(&self) -> usize {
        self.n
    }

    pub fn letter(&self, l: Letter) -> &LevelPermutation {
        &self.letters[2 * l.idx() + usize::from(l.exponent < 0)]
    }

    pub fn of_word(&self, w: &Word) -> LevelPermutation {
        let mut images: Vec<u32> = (0..self.params.m().pow(self.n as u32) as u32).collect();
        for &l in w.letters() {
            let t = &self.letter(l).images;
            for x in images.iter_mut() {
                *x = t[*x as usize];
            }
        }
        LevelPermutation {
            m: self.params.m(),
            n: self.n,
            images,
        }
    }
}

fn checked_level_size(m: usize, n: usize, cap: usize) -> Result<usize> {
    let size = (m as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if size > cap as u128 {
        return Err(Error::cap(
            "level vertices",
            size.min(usize::MAX as u128) as usize,
            cap,
        ));
    }
    Ok(size as usize)
}

/// Root-permutation exponents of the sections at every vertex above `depth`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Portrait {
    pub depth: usize,
    /// `(vertex, exponent)` in breadth-first order.
    pub labels: Vec<(Vertex, usize)>,
}

impl Portrait {
    pub fn label(&self, u: &Vertex) -> Option<usize> {
        self.labels.iter().find(|(v, _)| v == u).map(|&(_, e)| e)
    }

    /// Graphviz rendering with vertex labels `path:exponent` (`ε` for the root path).
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph portrait {\n  node [shape=box];\n");
        let name = |v: &Vertex| format!("v{v}");
        for (v, e) in &self.labels {
            let path = if v.is_root() { "ε".to_string() } else { v.to_string() };
            out.push_str(&format!("  {} [label=\"{path}:{e}\"];\n", name(v)));
        }
        for (v, _) in &self.labels {
            if let Some((&last, parent)) = v.path().split_last() {
                let parent = Vertex::new(parent.to_vec());
                out.push_str(&format!(
                    "  {} -> {} [label=\"{last}\"];\n",
                    name(&parent),
                    name(v)
                ));
            }
        }
        out.push_str("}\n");
        out
    }
}

/// Root shift, position and letter of the single nontrivial section of a letter.
#[derive(Clone, Copy, Debug)]
struct LetterAction {
    shift: usize,
    position: usize,
    section: Letter,
}

impl GroupParams {
    fn letter_action(&self, l: Letter) -> LetterAction {
        let (m, s) = (self.m(), self.s());
        let positive = if l.index == 0 {
            LetterAction {
                shift: 1,
                position: m - 1,
                section: Letter::pos(s as u32 - 1),
            }
        } else {
            LetterAction {
                shift: 0,
                position: m - 1,
                section: Letter::pos(l.index - 1),
            }
        };
        if l.exponent > 0 {
            return positive;
        }
        // g = (g_k) σ^e  ⇒  g^{-1} = (h_j) σ^{-e} with h_j = g_{j-e}^{-1}
        LetterAction {
            shift: (m - positive.shift) % m,
            position: (positive.position + positive.shift) % m,
            section: positive.section.inverse(),
        }
    }

    pub(crate) fn decompose_raw(&self, w: &Word) -> WreathDecomposition {
        let m = self.m();
        let mut sections = vec![Word::identity(); m];
        let mut e = 0;
        for &l in w.letters() {
            let act = self.letter_action(l);
            sections[(act.position + m - e) % m].push(act.section);
            e = (e + act.shift) % m;
        }
        WreathDecomposition {
            sections,
            root_exponent: e,
        }
    }

    pub(crate) fn section_child(&self, w: &Word, x: usize) -> Word {
        let m = self.m();
        let mut out = Word::identity();
        let mut e = 0;
        for &l in w.letters() {
            let act = self.letter_action(l);
            if (act.position + m - e) % m == x {
                out.push(act.section);
            }
            e = (e + act.shift) % m;
        }
        out
    }

    pub(crate) fn section_raw(&self, w: &Word, u: &Vertex) -> Word {
        let mut cur = w.clone();
        for &x in u.path() {
            if cur.is_empty() {
                break;
            }
            cur = self.section_child(&cur, x as usize);
        }
        cur
    }

    pub(crate) fn act_raw(&self, w: &Word, u: &Vertex) -> Vertex {
        let m = self.m();
        let mut cur = w.clone();
        let mut out = Vec::with_capacity(u.level());
        for &x in u.path() {
            let e = self.root_exponent_raw(&cur);
            out.push(((x as usize + e) % m) as u32);
            cur = self.section_child(&cur, x as usize);
        }
        Vertex::new(out)
    }

    pub(crate) fn root_exponent_raw(&self, w: &Word) -> usize {
        let m = self.m() as i64;
        w.exponent_sum(0).rem_euclid(m) as usize
    }

    /// Sections of `w^m`: `α_k = g_k g_{k+i} ⋯ g_{k+(m-1)i}` where `σ_w = σ^i`.
    pub(crate) fn mth_power_sections(&self, w: &Word) -> Vec<Word> {
        let m = self.m();
        let d = self.decompose_raw(w);
        let i = d.root_exponent;
        (0..m)
            .map(|k| {
                let mut a = Word::identity();
                for t in 0..m {
                    a.extend_reduced(&d.sections[(k + t * i) % m]);
                }
                a
            })
            .collect()
    }

    /// Section of `w^{m^{|u|}}` at `u`, computed one level at a time.
    pub(crate) fn power_section_raw(&self, w: &Word, u: &Vertex) -> Word {
        let mut cur = w.clone();
        for &x in u.path() {
            if cur.is_empty() {
                break;
            }
            cur = self.mth_power_sections(&cur).swap_remove(x as usize);
        }
        cur
    }

    /// One-level decomposition of `w` with freely reduced sections.
    pub fn decompose(&self, w: &Word) -> Result<WreathDecomposition> {
        self.check_word(w)?;
        Ok(self.decompose_raw(w))
    }

    /// The section `w_u`, defined by `w(uv) = w(u) w_u(v)`.
    pub fn section(&self, w: &Word, u: &Vertex) -> Result<Word> {
        self.check_word(w)?;
        self.check_vertex(u)?;
        Ok(self.section_raw(w, u))
    }

    /// The image of `u` under `w`.
    pub fn act(&self, w: &Word, u: &Vertex) -> Result<Vertex> {
        self.check_word(w)?;
        self.check_vertex(u)?;
        Ok(self.act_raw(w, u))
    }

    /// The exponent `e` with `σ_w = σ^e`.
    pub fn root_exponent(&self, w: &Word) -> Result<usize> {
        self.check_word(w)?;
        Ok(self.root_exponent_raw(w))
    }

    pub fn abelianize(&self, w: &Word) -> Result<AbelianizationVector> {
        self.check_word(w)?;
        Ok(self.abelianize_raw(w))
    }

    pub(crate) fn abelianize_raw(&self, w: &Word) -> AbelianizationVector {
        let mut v = vec![0i64; self.s()];
        for l in w.letters() {
            v[l.idx()] += l.exponent as i64;
        }
        AbelianizationVector(v)
    }

    fn abelianization_is_zero(&self, w: &Word, scratch: &mut [i64]) -> bool {
        scratch.iter_mut().for_each(|x| *x = 0);
        for l in w.letters() {
            scratch[l.idx()] += l.exponent as i64;
        }
        scratch.iter().all(|&x| x == 0)
    }

    /// Decides whether `w` represents the identity.
    ///
    /// Walks the closure of `w` under first-level sections, keyed by reduced word. The
    /// element is trivial iff every word in the closure has zero abelianization (which
    /// forces a trivial root permutation). Section words never outgrow their parent, so
    /// the closure is finite.
    pub fn is_identity(&self, w: &Word) -> Result<bool> {
        self.check_word(w)?;
        Ok(self.is_identity_raw(w))
    }

    pub(crate) fn is_identity_raw(&self, w: &Word) -> bool {
        if w.is_empty() {
            return true;
        }
        let mut scratch = vec![0i64; self.s()];
        if !self.abelianization_is_zero(w, &mut scratch) {
            return false;
        }
        let mut visited: HashSet<Word> = HashSet::new();
        let mut stack = vec![w.clone()];
        while let Some(cur) = stack.pop() {
            if cur.is_empty() || visited.contains(&cur) {
                continue;
            }
            if !self.abelianization_is_zero(&cur, &mut scratch) {
                return false;
            }
            let d = self.decompose_raw(&cur);
            debug_assert_eq!(d.root_exponent, 0);
            visited.insert(cur);
            for sec in d.sections {
                if !sec.is_empty() && !visited.contains(&sec) {
                    stack.push(sec);
                }
            }
        }
        true
    }

    /// Element equality, decided as `is_identity(w1 · w2^{-1})`.
    pub fn equal(&self, w1: &Word, w2: &Word) -> Result<bool> {
        self.check_word(w1)?;
        self.check_word(w2)?;
        Ok(self.equal_raw(w1, w2))
    }

    pub(crate) fn equal_raw(&self, w1: &Word, w2: &Word) -> bool {
        w1 == w2 || self.is_identity_raw(&w1.compose(&w2.invert()))
    }

    /// A vertex `u` of minimal level whose section has a nontrivial root permutation;
    /// `w` then moves some vertex of level `|u| + 1`. `None` iff `w` is the identity.
    pub fn nontriviality_witness(&self, w: &Word) -> Result<Option<Vertex>> {
        self.check_word(w)?;
        let mut visited: HashSet<Word> = HashSet::new();
        let mut queue = VecDeque::from([(w.clone(), Vertex::root())]);
        while let Some((cur, u)) = queue.pop_front() {
            if cur.is_empty() || !visited.insert(cur.clone()) {
                continue;
            }
            let d = self.decompose_raw(&cur);
            if d.root_exponent != 0 {
                return Ok(Some(u));
            }
            for (x, sec) in d.sections.into_iter().enumerate() {
                if !sec.is_empty() {
                    queue.push_back((sec, u.child(x as u32)));
                }
            }
        }
        Ok(None)
    }

    /// The action of `w` on level `n`, with the default vertex cap.
    pub fn level_permutation(&self, w: &Word, n: usize) -> Result<LevelPermutation> {
        self.level_permutation_capped(w, n, Limits::default().level_cap)
    }

    pub fn level_permutation_capped(
        &self,
        w: &Word,
        n: usize,
        cap: usize,
    ) -> Result<LevelPermutation> {
        self.check_word(w)?;
        if n == 0 {
            return Err(Error::Precondition("level must be at least 1".into()));
        }
        Ok(LevelAction::new(*self, n, cap)?.of_word(w))
    }

    /// Root exponents of the sections at every vertex of level `< depth`.
    pub fn portrait(&self, w: &Word, depth: usize) -> Result<Portrait> {
        self.portrait_capped(w, depth, Limits::default().portrait_cap)
    }

    pub fn portrait_capped(&self, w: &Word, depth: usize, cap: usize) -> Result<Portrait> {
        self.check_word(w)?;
        if depth == 0 {
            return Err(Error::Precondition("portrait depth must be at least 1".into()));
        }
        let m = self.m() as u128;
        let nodes = (0..depth as u32)
            .try_fold(0u128, |acc, k| m.checked_pow(k).and_then(|p| acc.checked_add(p)))
            .unwrap_or(u128::MAX);
        if nodes > cap as u128 {
            return Err(Error::cap(
                "portrait vertices",
                nodes.min(usize::MAX as u128) as usize,
                cap,
            ));
        }
        let mut labels = Vec::with_capacity(nodes as usize);
        let mut layer = vec![(Vertex::root(), w.clone())];
        for level in 0..depth {
            let mut next = Vec::new();
            for (u, sec) in layer {
                let d = self.decompose_raw(&sec);
                labels.push((u.clone(), d.root_exponent));
                if level + 1 < depth {
                    for (x, child) in d.sections.into_iter().enumerate() {
                        next.push((u.child(x as u32), child));
                    }
                }
            }
            layer = next;
        }
        Ok(Portrait { depth, labels })
    }
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

    fn v(x: &str) -> Vertex {
        x.parse().unwrap()
    }

    #[test]
    fn decompose_examples() {
        let d = p(3, 2).decompose(&w(&[(0, 1)])).unwrap();
        assert_eq!(d.sections, vec![Word::identity(), Word::identity(), w(&[(1, 1)])]);
        assert_eq!(d.root_exponent, 1);

        let d = p(3, 2).decompose(&w(&[(1, 1)])).unwrap();
        assert_eq!(d.sections, vec![Word::identity(), Word::identity(), w(&[(0, 1)])]);
        assert_eq!(d.root_exponent, 0);

        let d = p(2, 2).decompose(&w(&[(0, -1)])).unwrap();
        assert_eq!(d.sections, vec![w(&[(1, -1)]), Word::identity()]);
        assert_eq!(d.root_exponent, 1);

        let d = p(2, 2).decompose(&w(&[(1, 1), (0, 1)])).unwrap();
        assert_eq!(d.sections, vec![Word::identity(), w(&[(0, 1), (1, 1)])]);
        assert_eq!(d.root_exponent, 1);
    }

    #[test]
    fn inverse_letter_solves_one_level_equation() {
        // a_0 · a_0^{-1} decomposes to the identity at one level
        for (m, s) in [(2, 2), (3, 2), (2, 3), (4, 3)] {
            let g = p(m, s);
            for l in Letter::all(s) {
                let x = Word::letter(l);
                let d = g.decompose_raw(&Word::from_letters([l, l.inverse()]));
                assert!(d.sections.iter().all(Word::is_empty));
                assert_eq!(d.root_exponent, 0);
                let dx = g.decompose_raw(&x);
                let di = g.decompose_raw(&x.invert());
                assert_eq!((dx.root_exponent + di.root_exponent) % m, 0);
            }
        }
    }

    #[test]
    fn parameter_mismatch() {
        assert!(matches!(
            p(2, 2).decompose(&w(&[(2, 1)])),
            Err(Error::ParameterMismatch(_))
        ));
        assert!(matches!(
            p(2, 2).section(&w(&[(0, 1)]), &v("2")),
            Err(Error::ParameterMismatch(_))
        ));
        assert!(p(2, 2).act(&w(&[(0, 1)]), &v("02")).is_err());
    }

    #[test]
    fn section_examples() {
        let g = p(2, 2);
        assert_eq!(g.section(&w(&[(1, 1)]), &v("1")).unwrap(), w(&[(0, 1)]));
        assert!(g.section(&w(&[(0, 1)]), &v("0")).unwrap().is_empty());
        assert_eq!(g.section(&w(&[(0, 1)]), &v("11")).unwrap(), w(&[(0, 1)]));
    }

    #[test]
    fn act_examples() {
        let g = p(2, 2);
        assert_eq!(g.act(&w(&[(0, 1)]), &v("0")).unwrap(), v("1"));
        for x in ["00", "01"] {
            assert_eq!(g.act(&w(&[(1, 1)]), &v(x)).unwrap(), v(x));
        }
        assert_eq!(p(3, 2).act(&w(&[(0, 1)]), &v("22")).unwrap(), v("02"));
    }

    #[test]
    fn root_exponent_examples() {
        assert_eq!(p(3, 2).root_exponent(&w(&[(1, 1), (0, 1)])).unwrap(), 1);
        assert_eq!(p(2, 2).root_exponent(&w(&[(0, 1), (1, 1), (0, 1)])).unwrap(), 0);
        assert_eq!(p(3, 2).root_exponent(&w(&[(0, -1)])).unwrap(), 2);
    }

    #[test]
    fn abelianize_examples() {
        assert_eq!(p(2, 2).abelianize(&w(&[(0, 1)])).unwrap().0, vec![1, 0]);
        let c = w(&[(0, -1), (1, -1), (0, 1), (1, 1)]);
        assert!(p(2, 2).abelianize(&c).unwrap().is_zero());
        assert_eq!(
            p(2, 3).abelianize(&w(&[(2, 1), (1, 1), (0, -1)])).unwrap().0,
            vec![-1, 1, 1]
        );
    }

    #[test]
    fn word_problem_examples() {
        let g = p(2, 2);
        assert!(g.is_identity(&Word::identity()).unwrap());
        assert!(g.is_identity(&w(&[(0, 1), (0, -1)])).unwrap());
        let c = w(&[(0, -1), (1, -1), (0, 1), (1, 1)]);
        let d = g.decompose(&c).unwrap();
        assert_eq!(d.sections[0], w(&[(1, -1), (0, -1), (1, 1)]));
        assert_eq!(d.sections[1], w(&[(0, 1)]));
        assert!(!g.is_identity(&c).unwrap());
        assert_eq!(g.nontriviality_witness(&c).unwrap(), Some(v("0")));
        assert!(!g.level_permutation(&c, 2).unwrap().is_identity());
        assert!(!g.is_identity(&w(&[(0, 1), (0, 1), (1, -1)])).unwrap());
    }

    #[test]
    fn torsion_free_spot_check() {
        for (m, s) in [(2, 2), (3, 2), (2, 3)] {
            let g = p(m, s);
            for i in 0..s {
                for k in 1..=12 {
                    assert!(!g.is_identity(&Word::generator(i).pow(k)).unwrap());
                }
            }
        }
    }

    #[test]
    fn level_permutation_examples() {
        let g = p(2, 2);
        assert!(g.level_permutation(&Word::identity(), 3).unwrap().is_identity());
        let t = g.level_permutation(&w(&[(0, 1)]), 1).unwrap();
        assert_eq!(t.images(), &[1, 0]);
        let t = g.level_permutation(&w(&[(1, 1)]), 2).unwrap();
        assert_eq!(t.image(&v("00")), v("00"));
        assert_eq!(t.image(&v("01")), v("01"));
        assert_eq!(t.image(&v("10")), v("11"));
        assert_eq!(t.image(&v("11")), v("10"));
        assert!(g.level_permutation(&w(&[(0, 1)]), 0).is_err());
        assert!(matches!(
            g.level_permutation_capped(&w(&[(0, 1)]), 21, 1 << 20),
            Err(Error::ResourceCap { .. })
        ));
    }

    #[test]
    fn portrait_examples() {
        let g = p(2, 2);
        let pt = g.portrait(&Word::identity(), 2).unwrap();
        assert_eq!(pt.labels.len(), 3);
        assert!(pt.labels.iter().all(|&(_, e)| e == 0));

        let pt = g.portrait(&w(&[(0, 1)]), 2).unwrap();
        assert_eq!(pt.label(&Vertex::root()), Some(1));
        assert_eq!(pt.label(&v("0")), Some(0));
        assert_eq!(pt.label(&v("1")), Some(0));

        let pt = g.portrait(&w(&[(1, 1)]), 3).unwrap();
        assert_eq!(pt.labels.len(), 7);
        assert_eq!(pt.label(&Vertex::root()), Some(0));
        assert_eq!(pt.label(&v("0")), Some(0));
        assert_eq!(pt.label(&v("1")), Some(1));
        for x in ["00", "01", "10", "11"] {
            assert_eq!(pt.label(&v(x)), Some(0));
        }
        let dot = pt.to_dot();
        assert!(dot.contains("label=\"1:1\""));
        assert!(dot.contains("label=\"ε:0\""));

        assert!(matches!(
            g.portrait_capped(&w(&[(0, 1)]), 12, 1000),
            Err(Error::ResourceCap { .. })
        ));
    }

    #[test]
    fn power_sections_match_decomposition_of_power() {
        let g = p(3, 2);
        let x = w(&[(1, 1), (0, 1), (1, -1)]);
        let direct = g.decompose_raw(&x.pow(3));
        assert_eq!(direct.root_exponent, 0);
        for (a, b) in g.mth_power_sections(&x).iter().zip(&direct.sections) {
            assert!(g.equal_raw(a, b));
        }
    }
}
