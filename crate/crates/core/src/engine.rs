//! Generator isolation for subgroups seeded with `g ≡ a_{s-1}⋯a_0` and
//! `h_j ≡ a_{s-1}⋯a_j^{-1}⋯a_0` modulo `G'`.
//!
//! Membership is never tested. The engine keeps a ledger of words known to lie in the
//! section subgroup `H_U` at the current vertex, and every move that changes the ledger
//! is checked with exact element equalities before it is admitted. The same checking
//! code drives [`replay`].
//!
//! The run has two phases. First every seed is normalized to a permuted product and the
//! whole ledger descends to the witness vertex; then `g` is aligned to end with `a_0`.
//! After alignment the ledger lives along the rightmost path below the aligned vertex,
//! and parts are split pairwise until only the `s` generators remain.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::GroupParams;
use crate::projections::{
    cyclic_alignment, normalize_to_permuted_product, project_along_rightmost_raw, Budget,
    PermutedProduct,
};
use crate::vertex::Vertex;
use crate::word::{Letter, Word};

/// A nonempty word with pairwise distinct generator indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Word", into = "Word")]
pub struct Part(Word);

impl Part {
    pub fn new(word: Word) -> Result<Self> {
        if !is_part_word(&word) {
            return Err(Error::Precondition(format!(
                "{word} is not a part (nonempty, distinct indices)"
            )));
        }
        Ok(Part(word))
    }

    pub fn word(&self) -> &Word {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_singleton(&self) -> bool {
        self.0.len() == 1
    }
}

impl TryFrom<Word> for Part {
    type Error = Error;

    fn try_from(w: Word) -> Result<Self> {
        Part::new(w)
    }
}

impl From<Part> for Word {
    fn from(p: Part) -> Word {
        p.0
    }
}

impl fmt::Display for Part {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

fn is_part_word(w: &Word) -> bool {
    let mut seen = Vec::new();
    for l in w.letters() {
        if seen.contains(&l.idx()) {
            return false;
        }
        seen.push(l.idx());
    }
    !w.is_empty()
}

fn same_mod_inverse(a: &Word, b: &Word) -> bool {
    a == b || *a == b.invert()
}

/// Singletons are stored with exponent `+1`.
fn canonical_part(w: Word) -> Word {
    if w.len() == 1 && w.letters()[0].exponent < 0 {
        w.invert()
    } else {
        w
    }
}

/// Seeds `g = a_{s-1}⋯a_0·z_0` and `h_j = a_{s-1}⋯a_j^{-1}⋯a_0·z_{j+1}`.
///
/// `noise` holds one word per seed; each must have zero abelianization.
pub fn make_prodense_seeds(params: GroupParams, noise: &[Word]) -> Result<Vec<Word>> {
    let s = params.s();
    if noise.len() != s + 1 {
        return Err(Error::Precondition(format!(
            "expected {} noise words, got {}",
            s + 1,
            noise.len()
        )));
    }
    for z in noise {
        params.check_word(z)?;
        let v = params.abelianize_raw(z);
        if !v.is_zero() {
            return Err(Error::Precondition(format!(
                "noise word {z} has abelianization {v}, expected zero"
            )));
        }
    }
    let product = |neg: Option<usize>| {
        Word::from_letters((0..s).rev().map(|i| Letter {
            index: i as u32,
            exponent: if Some(i) == neg { -1 } else { 1 },
        }))
    };
    let mut out = vec![product(None).compose(&noise[0])];
    for j in 0..s {
        out.push(product(Some(j)).compose(&noise[j + 1]));
    }
    Ok(out)
}

/// Which splitting configuration a move uses, after shifting the pivot to index 0.
///
/// `I`: `α = α̃a_0`, `β = β̃a_0^{-1}β̂`, product `βα`.
/// `II`: `α = a_0α̃`, `β = β̂a_0^{-1}β̃`, product `αβ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Situation {
    #[serde(rename = "i")]
    I,
    #[serde(rename = "ii")]
    II,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MoveKind {
    #[serde(rename = "seed-normalization")]
    SeedNormalization,
    #[serde(rename = "cyclic-alignment")]
    CyclicAlignment,
    #[serde(rename = "split-i")]
    SplitI,
    #[serde(rename = "split-ii")]
    SplitII,
    #[serde(rename = "interior-isolation")]
    InteriorIsolation,
    #[serde(rename = "endpoint-analysis")]
    EndpointAnalysis,
}

impl fmt::Display for MoveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).expect("unit variant");
        f.write_str(s.as_str().expect("string tag"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "kebab-case")]
pub enum MoveDetail {
    /// Every ledger word `f` is replaced by the section of `f^{m^{|vertex|}}` at `vertex`.
    Descend {
        vertex: Vertex,
        normalized_slot: Option<usize>,
    },
    Split {
        situation: Situation,
        pivot: usize,
        alpha_oriented: Word,
        beta_oriented: Word,
    },
    /// A reserved seed joins the working parts.
    Activate { slot: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Move {
    pub kind: MoveKind,
    /// Rightmost-path level below the aligned vertex when the move starts.
    pub level: usize,
    pub inputs: Vec<Word>,
    pub outputs: Vec<Word>,
    pub detail: MoveDetail,
    pub verified: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// The shape of the aligned `g` and `h_0`: `d` is the position of `a_0^{-1}` in `h_0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseInfo {
    pub d: usize,
    pub case: u8,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subcase: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q_branch: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Outcome {
    Complete,
    Failed { reason: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transcript {
    pub m: usize,
    pub s: usize,
    pub seeds: Vec<Word>,
    pub budget: EngineBudget,
    /// Absolute vertex below which the splitting phase runs.
    pub aligned_vertex: Option<Vertex>,
    pub case: Option<CaseInfo>,
    pub moves: Vec<Move>,
    pub final_parts: Vec<Word>,
    pub outcome: Outcome,
}

impl Transcript {
    pub fn params(&self) -> Result<GroupParams> {
        GroupParams::new(self.m, self.s)
    }

    pub fn is_complete(&self) -> bool {
        self.outcome == Outcome::Complete
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("transcripts always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("transcript: {e}")))
    }

    /// One line per move.
    pub fn to_log(&self) -> String {
        let mut out = format!("# m={} s={} seeds={}\n", self.m, self.s, self.seeds.len());
        if let Some(c) = &self.case {
            out += &format!(
                "# case {} d={}{}{}{}\n",
                c.case,
                c.d,
                c.r.map(|r| format!(" r={r}")).unwrap_or_default(),
                c.subcase
                    .as_ref()
                    .map(|x| format!(" subcase={x}"))
                    .unwrap_or_default(),
                c.q_branch
                    .as_ref()
                    .map(|x| format!(" {x}"))
                    .unwrap_or_default()
            );
        }
        for (i, mv) in self.moves.iter().enumerate() {
            let words = |ws: &[Word]| {
                ws.iter()
                    .map(|w| w.to_string())
                    .collect::<Vec<_>>()
                    .join(", ")
            };
            let where_ = match &mv.detail {
                MoveDetail::Descend { vertex, .. } => format!("vertex {vertex:?}", vertex = vertex.to_string()),
                MoveDetail::Split {
                    situation, pivot, ..
                } => format!("({situation:?}) pivot a_{pivot}"),
                MoveDetail::Activate { slot } => format!("slot {slot}"),
            };
            out += &format!(
                "{i:>3} {:<18} level {:>3} {where_}: [{}] -> [{}] {}{}\n",
                mv.kind.to_string(),
                mv.level,
                words(&mv.inputs),
                words(&mv.outputs),
                if mv.verified { "ok" } else { "UNVERIFIED" },
                mv.note.as_ref().map(|n| format!(" ({n})")).unwrap_or_default()
            );
        }
        out += &format!(
            "parts: [{}]\noutcome: {}\n",
            self.final_parts
                .iter()
                .map(|w| w.to_string())
                .collect::<Vec<_>>()
                .join(", "),
            match &self.outcome {
                Outcome::Complete => "complete".to_string(),
                Outcome::Failed { reason } => format!("failed: {reason}"),
            }
        );
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EngineBudget {
    pub normalization: Budget,
    /// Maximum number of split moves.
    pub max_rounds: usize,
}

impl EngineBudget {
    pub fn for_params(params: GroupParams) -> Self {
        EngineBudget {
            normalization: Budget::for_params(params),
            max_rounds: params.s() * (params.s() + 1),
        }
    }
}

/// Certified parts along the rightmost path below the aligned vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitState {
    pub params: GroupParams,
    pub level: usize,
    pub parts: Vec<Part>,
    /// For each part, the indices of the moves that produced it.
    pub provenance: Vec<Vec<usize>>,
    /// For each part, the seed slot it descends from (`0` is `g`, `j+1` is `h_j`).
    pub families: Vec<usize>,
    /// Seeds certified at the current level but not yet among the parts.
    pub reserve: BTreeMap<usize, Word>,
}

impl SplitState {
    /// A state with the given parts at level 0 and no reserve.
    pub fn new(params: GroupParams, parts: Vec<Part>) -> Result<Self> {
        for p in &parts {
            params.check_word(p.word())?;
        }
        let n = parts.len();
        Ok(SplitState {
            params,
            level: 0,
            families: (0..n).collect(),
            provenance: vec![Vec::new(); n],
            parts,
            reserve: BTreeMap::new(),
        })
    }

    fn find(&self, w: &Word) -> Option<usize> {
        self.parts.iter().position(|p| same_mod_inverse(p.word(), w))
    }

    pub fn is_isolated(&self) -> bool {
        let s = self.params.s();
        self.parts.len() == s
            && (0..s).all(|i| self.parts.iter().any(|p| *p.word() == Word::generator(i)))
    }

    fn ledger_words(&self) -> impl Iterator<Item = &Word> {
        self.parts
            .iter()
            .map(|p| p.word())
            .chain(self.reserve.values())
    }
}

/// Cuts `beta` at its `pivot^{-1}` letter: `(i)` gives `(β̃, a_p^{-1}β̂)` from
/// `β = β̃a_p^{-1}β̂`; `(ii)` gives `(β̃, β̂a_p^{-1})` from `β = β̂a_p^{-1}β̃`.
fn split_shape(
    situation: Situation,
    pivot: usize,
    alpha: &Word,
    beta: &Word,
) -> std::result::Result<(Word, Word), String> {
    if !is_part_word(alpha) || !is_part_word(beta) {
        return Err(format!("{alpha} or {beta} is not a part"));
    }
    let p_pos = Letter {
        index: pivot as u32,
        exponent: 1,
    };
    let alpha_ok = match situation {
        Situation::I => alpha.last() == Some(p_pos),
        Situation::II => alpha.first() == Some(p_pos),
    };
    if !alpha_ok {
        return Err(format!(
            "alpha {alpha} does not have a_{pivot} at the {} end",
            if situation == Situation::I { "right" } else { "left" }
        ));
    }
    let pos = beta
        .letters()
        .iter()
        .position(|l| *l == p_pos.inverse())
        .ok_or_else(|| format!("beta {beta} lacks a_{pivot}^-1"))?;
    let left = Word::from_letters(beta.letters()[..pos].iter().copied());
    let right = Word::from_letters(beta.letters()[pos + 1..].iter().copied());
    let inv = Word::letter(p_pos.inverse());
    let (tilde, rest) = match situation {
        Situation::I => (left, inv.compose(&right)),
        Situation::II => (right, left.compose(&inv)),
    };
    if tilde.is_empty() {
        return Err(format!("splitting {beta} at a_{pivot}^-1 leaves an empty piece"));
    }
    Ok((tilde, rest))
}

/// Checks one split and returns the two new parts, certified at `level + s`.
///
/// Both parts are first projected `pivot` steps along the rightmost path so the pivot
/// has index 0. The product's section at `m-1` is compared with the shifted `β̃`, which
/// is then projected the remaining `s - pivot - 1` steps back to its own indices. The
/// second piece is `β̃^{-1}β` or `ββ̃^{-1}` at level `level + s`.
fn certify_split(
    params: GroupParams,
    situation: Situation,
    pivot: usize,
    alpha: &Word,
    beta: &Word,
) -> std::result::Result<(Word, Word), String> {
    let s = params.s();
    if pivot >= s {
        return Err(format!("pivot a_{pivot} out of range"));
    }
    let (tilde, rest) = split_shape(situation, pivot, alpha, beta)?;
    let project = |w: &Word, j: usize| project_along_rightmost_raw(params, w, j);
    let eq = |a: &Word, b: &Word| params.equal_raw(a, b);

    let alpha_p = alpha.shifted(pivot, s);
    let beta_p = beta.shifted(pivot, s);
    if !eq(&project(alpha, pivot), &alpha_p) || !eq(&project(beta, pivot), &beta_p) {
        return Err(format!("projection by {pivot} does not shift {alpha} and {beta}"));
    }
    let product = match situation {
        Situation::I => beta_p.compose(&alpha_p),
        Situation::II => alpha_p.compose(&beta_p),
    };
    if params.root_exponent_raw(&product) != 0 {
        return Err(format!("product {product} moves the first level"));
    }
    let shifted_tilde = tilde.shifted(pivot + 1, s);
    let sec = params.section_child(&product, params.m() - 1);
    if !eq(&sec, &shifted_tilde) {
        return Err(format!("section of {product} at the last child is not {shifted_tilde}"));
    }
    if !eq(&project(&shifted_tilde, s - pivot - 1), &tilde) {
        return Err(format!("{shifted_tilde} does not project back to {tilde}"));
    }
    if !eq(&project(beta, s), beta) {
        return Err(format!("{beta} is not stable along the rightmost path"));
    }
    let derived = match situation {
        Situation::I => tilde.invert().compose(beta),
        Situation::II => beta.compose(&tilde.invert()),
    };
    if derived != rest {
        return Err(format!("remaining piece {derived} differs from {rest}"));
    }
    Ok((tilde, rest))
}

/// Applies situation `(i)` or `(ii)` to `alpha` and `beta`, as oriented.
///
/// The pivot is read off `alpha`: its last letter for `(i)`, its first for `(ii)`.
/// Returns the new state at level `level + s`, with `beta` replaced by its two pieces.
pub fn split_step(
    state: &SplitState,
    situation: Situation,
    alpha: &Part,
    beta: &Part,
) -> Result<(SplitState, Move)> {
    if state.find(alpha.word()).is_none() || state.find(beta.word()).is_none() {
        return Err(Error::Precondition(
            "alpha and beta must both be certified parts".into(),
        ));
    }
    let end = match situation {
        Situation::I => alpha.word().last(),
        Situation::II => alpha.word().first(),
    }
    .expect("parts are nonempty");
    let mv = build_split_move(state, situation, end.idx(), alpha.word(), beta.word(), None)
        .map_err(Error::Precondition)?;
    let mut next = state.clone();
    apply_split(&mut next, &mv, usize::MAX).map_err(Error::Certification)?;
    let mut mv = mv;
    mv.verified = true;
    Ok((next, mv))
}

fn build_split_move(
    state: &SplitState,
    situation: Situation,
    pivot: usize,
    alpha_o: &Word,
    beta_o: &Word,
    note: Option<String>,
) -> std::result::Result<Move, String> {
    let (tilde, rest) = split_shape(situation, pivot, alpha_o, beta_o)?;
    let ai = state.find(alpha_o).ok_or("alpha is not a part")?;
    let bi = state.find(beta_o).ok_or("beta is not a part")?;
    let interior = beta_o.first().map(|l| l.idx()) != Some(pivot)
        && beta_o.last().map(|l| l.idx()) != Some(pivot);
    let kind = if alpha_o.len() == 1 && interior {
        MoveKind::InteriorIsolation
    } else if situation == Situation::I {
        MoveKind::SplitI
    } else {
        MoveKind::SplitII
    };
    Ok(Move {
        kind,
        level: state.level,
        inputs: vec![
            state.parts[ai].word().clone(),
            state.parts[bi].word().clone(),
        ],
        outputs: vec![tilde, rest],
        detail: MoveDetail::Split {
            situation,
            pivot,
            alpha_oriented: alpha_o.clone(),
            beta_oriented: beta_o.clone(),
        },
        verified: false,
        note,
    })
}

fn apply_split(state: &mut SplitState, mv: &Move, index: usize) -> std::result::Result<(), String> {
    let params = state.params;
    let MoveDetail::Split {
        situation,
        pivot,
        alpha_oriented,
        beta_oriented,
    } = &mv.detail
    else {
        return Err("not a split".into());
    };
    let kind_ok = match mv.kind {
        MoveKind::SplitI => *situation == Situation::I,
        MoveKind::SplitII => *situation == Situation::II,
        MoveKind::InteriorIsolation => alpha_oriented.len() == 1,
        _ => false,
    };
    if !kind_ok {
        return Err(format!("move kind {} does not match its split", mv.kind));
    }
    if mv.level != state.level {
        return Err(format!("move claims level {}, ledger is at {}", mv.level, state.level));
    }
    let [alpha, beta] = mv.inputs.as_slice() else {
        return Err("a split takes two inputs".into());
    };
    let ai = state
        .parts
        .iter()
        .position(|p| p.word() == alpha)
        .ok_or_else(|| format!("{alpha} is not a certified part"))?;
    let bi = state
        .parts
        .iter()
        .position(|p| p.word() == beta)
        .ok_or_else(|| format!("{beta} is not a certified part"))?;
    if ai == bi {
        return Err("alpha and beta coincide".into());
    }
    if !same_mod_inverse(alpha_oriented, alpha) || !same_mod_inverse(beta_oriented, beta) {
        return Err("oriented words are not the inputs or their inverses".into());
    }
    let (tilde, rest) = certify_split(params, *situation, *pivot, alpha_oriented, beta_oriented)?;
    if mv.outputs != [tilde.clone(), rest.clone()] {
        return Err(format!("claimed outputs differ from {tilde}, {rest}"));
    }
    for w in state.ledger_words() {
        if !params.equal_raw(&project_along_rightmost_raw(params, w, params.s()), w) {
            return Err(format!("{w} does not re-certify {} levels down", params.s()));
        }
    }
    let family = state.families[bi];
    let mut prov = state.provenance[bi].clone();
    prov.push(index);
    state.parts.remove(bi);
    state.families.remove(bi);
    state.provenance.remove(bi);
    for w in [tilde, rest] {
        let w = canonical_part(w);
        if state.find(&w).is_none() {
            state.parts.push(Part(w));
            state.families.push(family);
            state.provenance.push(prov.clone());
        }
    }
    state.level += params.s();
    Ok(())
}

/// Ledger replayed move by move; shared by the engine and [`replay`].
struct Machine {
    params: GroupParams,
    vertex: Vertex,
    slots: Vec<Word>,
    split: Option<SplitState>,
}

impl Machine {
    fn new(params: GroupParams, seeds: &[Word]) -> Result<Self> {
        let s = params.s();
        if seeds.len() != s + 1 {
            return Err(Error::Precondition(format!(
                "expected {} seeds, got {}",
                s + 1,
                seeds.len()
            )));
        }
        for (k, w) in seeds.iter().enumerate() {
            params.check_word(w)?;
            let v = params.abelianize_raw(w);
            let ok = (0..s).all(|i| v.0[i] == if k == i + 1 { -1 } else { 1 });
            if !ok {
                return Err(Error::Precondition(format!(
                    "seed {k} has abelianization {v}, not the expected sign pattern"
                )));
            }
        }
        Ok(Machine {
            params,
            vertex: Vertex::root(),
            slots: seeds.to_vec(),
            split: None,
        })
    }

    fn apply(&mut self, mv: &Move, index: usize) -> std::result::Result<(), String> {
        match &mv.detail {
            MoveDetail::Descend {
                vertex,
                normalized_slot,
            } => self.apply_descend(mv, vertex, *normalized_slot),
            MoveDetail::Activate { slot } => {
                let state = self.split.as_mut().ok_or("activation before alignment")?;
                if mv.kind != MoveKind::EndpointAnalysis || mv.level != state.level {
                    return Err("activation must be an endpoint-analysis move at the ledger level".into());
                }
                let w = state
                    .reserve
                    .get(slot)
                    .ok_or_else(|| format!("slot {slot} is not in reserve"))?;
                if mv.inputs != [w.clone()] || mv.outputs != mv.inputs {
                    return Err(format!("activation of slot {slot} names the wrong word"));
                }
                let w = state.reserve.remove(slot).expect("checked");
                if state.find(&w).is_none() {
                    state.parts.push(Part(canonical_part(w)));
                    state.families.push(*slot);
                    state.provenance.push(vec![index]);
                }
                Ok(())
            }
            MoveDetail::Split { .. } => {
                let state = self.split.as_mut().ok_or("split before alignment")?;
                apply_split(state, mv, index)
            }
        }
    }

    fn apply_descend(
        &mut self,
        mv: &Move,
        u: &Vertex,
        normalized: Option<usize>,
    ) -> std::result::Result<(), String> {
        let params = self.params;
        let s = params.s();
        if self.split.is_some() {
            return Err("descent after alignment".into());
        }
        u.check(params.m()).map_err(|e| e.to_string())?;
        if !u.level().is_multiple_of(s) || mv.level != 0 {
            return Err(format!("descent vertex {u} is not at a level divisible by s"));
        }
        if mv.inputs != self.slots || mv.outputs.len() != self.slots.len() {
            return Err("descent inputs are not the current ledger".into());
        }
        for (old, new) in self.slots.iter().zip(&mv.outputs) {
            if !params.equal_raw(&params.power_section_raw(old, u), new) {
                return Err(format!("section of the power of {old} at {u} is not {new}"));
            }
        }
        match (mv.kind, normalized) {
            (MoveKind::SeedNormalization, Some(k)) if k < self.slots.len() => {
                if PermutedProduct::from_word(&mv.outputs[k], s).is_none() {
                    return Err(format!("{} is not a permuted product", mv.outputs[k]));
                }
            }
            (MoveKind::CyclicAlignment, None) => {
                if mv.outputs.iter().any(|w| PermutedProduct::from_word(w, s).is_none()) {
                    return Err("aligned ledger contains a non-product".into());
                }
                if mv.outputs[0].last() != Some(Letter::pos(0)) {
                    return Err(format!("aligned g = {} does not end with a_0", mv.outputs[0]));
                }
            }
            _ => return Err(format!("{} cannot be a descent", mv.kind)),
        }
        self.vertex = self.vertex.concat(u);
        self.slots = mv.outputs.clone();
        if mv.kind == MoveKind::CyclicAlignment {
            let mut state = SplitState::new(
                params,
                vec![Part(self.slots[0].clone()), Part(self.slots[1].clone())],
            )
            .map_err(|e| e.to_string())?;
            state.families = vec![0, 1];
            state.reserve = (2..self.slots.len())
                .map(|k| (k, self.slots[k].clone()))
                .collect();
            self.split = Some(state);
        }
        Ok(())
    }
}

/// Replaces each descended product by the rotation it equals, when there is one.
fn descend_all(
    params: GroupParams,
    slots: &[Word],
    u: &Vertex,
    fixed: (usize, &Word),
) -> Vec<Word> {
    let s = params.s();
    slots
        .iter()
        .enumerate()
        .map(|(k, w)| {
            if k == fixed.0 {
                return fixed.1.clone();
            }
            let sec = params.power_section_raw(w, u);
            if PermutedProduct::from_word(w, s).is_none() || PermutedProduct::from_word(&sec, s).is_some() {
                return sec;
            }
            (0..s)
                .map(|r| w.rotate_left(r))
                .find(|rot| params.equal_raw(rot, &sec))
                .unwrap_or(sec)
        })
        .collect()
}

fn case_info(g: &Word, h0: &Word) -> CaseInfo {
    let s = g.len();
    let gi: Vec<usize> = g.letters().iter().map(|l| l.idx()).collect();
    let hj: Vec<usize> = h0.letters().iter().map(|l| l.idx()).collect();
    let d = hj.iter().position(|&i| i == 0).expect("h_0 contains a_0") + 1;
    if d == 1 {
        return CaseInfo {
            d,
            case: 2,
            r: None,
            subcase: None,
            q_branch: None,
        };
    }
    if d == s {
        return CaseInfo {
            d,
            case: 3,
            r: None,
            subcase: None,
            q_branch: None,
        };
    }
    let j = hj[d - 2];
    let r = gi.iter().position(|&i| i == j).expect("g uses every index") + 1;
    let subcase = if r == 1 {
        "b"
    } else if r == s - 1 {
        "c"
    } else {
        "a"
    };
    let q_branch = (subcase == "a").then(|| {
        let q = hj.iter().position(|&i| i == gi[0]).expect("h_0 uses every index") + 1;
        format!(
            "{} {}",
            if q == 1 { "q=1" } else { "q>1" },
            if q + 1 < d { "left-of-pivot" } else { "right-of-pivot" }
        )
    });
    CaseInfo {
        d,
        case: 1,
        r: Some(r),
        subcase: Some(subcase.to_string()),
        q_branch,
    }
}

/// A split the planner proposes: `(situation, pivot, alpha, beta)` with `alpha`, `beta`
/// already oriented, plus the priority class it was drawn from.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct PlannedSplit {
    pub class: u8,
    pub pivot: usize,
    pub beta_len: usize,
    pub alpha_index: usize,
    pub beta_index: usize,
    pub situation: Situation,
    pub alpha: Word,
    pub beta: Word,
}

/// Picks the next split among `parts` (each tagged with its seed slot).
///
/// Class 0 pairs a part of `g` with a part of `h_0`, class 1 uses an isolated generator,
/// class 2 is everything else. Ties go to the smallest pivot, then the shortest `beta`.
pub fn plan_next(parts: &[(Word, usize)]) -> Option<PlannedSplit> {
    let mut best: Option<PlannedSplit> = None;
    for (ai, (alpha, fa)) in parts.iter().enumerate() {
        let ends = [alpha.first(), alpha.last()];
        for end in ends.into_iter().flatten() {
            let p = end.idx();
            let orient_i = if alpha.last() == Some(Letter::pos(p as u32)) {
                Some(alpha.clone())
            } else if alpha.first() == Some(Letter::neg(p as u32)) {
                Some(alpha.invert())
            } else {
                None
            };
            let orient_ii = if alpha.first() == Some(Letter::pos(p as u32)) {
                Some(alpha.clone())
            } else if alpha.last() == Some(Letter::neg(p as u32)) {
                Some(alpha.invert())
            } else {
                None
            };
            for (bi, (beta, fb)) in parts.iter().enumerate() {
                if bi == ai || beta.len() < 2 {
                    continue;
                }
                let class = if alpha.len() == 1 {
                    1
                } else if (*fa).min(*fb) == 0 && (*fa).max(*fb) == 1 {
                    0
                } else {
                    2
                };
                for beta_o in [beta.clone(), beta.invert()] {
                    for (situation, alpha_o) in [(Situation::I, &orient_i), (Situation::II, &orient_ii)] {
                        let Some(alpha_o) = alpha_o else { continue };
                        if split_shape(situation, p, alpha_o, &beta_o).is_err() {
                            continue;
                        }
                        let cand = PlannedSplit {
                            class,
                            pivot: p,
                            beta_len: beta.len(),
                            alpha_index: ai,
                            beta_index: bi,
                            situation,
                            alpha: alpha_o.clone(),
                            beta: beta_o.clone(),
                        };
                        if best.as_ref().is_none_or(|b| cand < *b) {
                            best = Some(cand);
                        }
                    }
                }
            }
        }
    }
    best
}

/// The reserved seed to activate when no split applies: `h_e` for the smallest left
/// endpoint `a_e` of a part of length at least two, else the smallest reserved slot.
pub fn next_activation(parts: &[Word], reserve: &[usize]) -> Option<usize> {
    let mut ends: Vec<usize> = parts
        .iter()
        .filter(|w| w.len() >= 2)
        .filter_map(|w| w.first().map(|l| l.idx() + 1))
        .collect();
    ends.sort_unstable();
    ends.into_iter()
        .find(|k| reserve.contains(k))
        .or_else(|| reserve.iter().min().copied())
}

/// Runs the full isolation pipeline on `g, h_0, …, h_{s-1}`.
///
/// Returns a transcript in which every admitted move has been verified. Running out of
/// budget is reported in the transcript's outcome rather than as an error.
pub fn isolate_generators(
    params: GroupParams,
    seeds: &[Word],
    budget: EngineBudget,
) -> Result<Transcript> {
    let s = params.s();
    let mut machine = Machine::new(params, seeds)?;
    let mut transcript = Transcript {
        m: params.m(),
        s,
        seeds: seeds.to_vec(),
        budget,
        aligned_vertex: None,
        case: None,
        moves: Vec::new(),
        final_parts: Vec::new(),
        outcome: Outcome::Failed {
            reason: "not started".into(),
        },
    };
    let fail = |mut t: Transcript, machine: &Machine, reason: String| {
        t.final_parts = match &machine.split {
            Some(st) => st.parts.iter().map(|p| p.word().clone()).collect(),
            None => machine.slots.clone(),
        };
        t.outcome = Outcome::Failed { reason };
        Ok(t)
    };
    let commit = |t: &mut Transcript, machine: &mut Machine, mut mv: Move| -> Result<()> {
        let index = t.moves.len();
        machine.apply(&mv, index).map_err(Error::Certification)?;
        mv.verified = true;
        t.moves.push(mv);
        Ok(())
    };

    // Normalize every seed in turn; later passes only repair slots that lost their shape.
    let mut pending: Vec<usize> = (0..=s).collect();
    let mut passes = 0;
    while let Some(k) = pending.first().copied() {
        pending.remove(0);
        let w = machine.slots[k].clone();
        let witness = match normalize_to_permuted_product(params, &w, budget.normalization) {
            Ok(x) => x,
            Err(e) if e.is_resource() || matches!(e, Error::BudgetExhausted(_) | Error::NotFound(_)) => {
                return fail(transcript, &machine, format!("normalizing slot {k}: {e}"));
            }
            Err(e) => return Err(e),
        };
        let prod = witness.result.word();
        let outputs = descend_all(params, &machine.slots, &witness.vertex, (k, &prod));
        let mv = Move {
            kind: MoveKind::SeedNormalization,
            level: 0,
            inputs: machine.slots.clone(),
            outputs,
            detail: MoveDetail::Descend {
                vertex: witness.vertex.clone(),
                normalized_slot: Some(k),
            },
            verified: false,
            note: Some(format!("slot {k}, power m^{}", witness.power_exponent)),
        };
        commit(&mut transcript, &mut machine, mv)?;
        if pending.is_empty() {
            passes += 1;
            pending = (0..=s)
                .filter(|&i| PermutedProduct::from_word(&machine.slots[i], s).is_none())
                .collect();
            if passes > s + 1 && !pending.is_empty() {
                return fail(transcript, &machine, "seeds keep losing their product shape".into());
            }
        }
    }

    let g = PermutedProduct::from_word(&machine.slots[0], s).expect("normalized");
    let alignment = match cyclic_alignment(params, &g, 0) {
        Ok(a) => a,
        Err(e) => return fail(transcript, &machine, format!("aligning g: {e}")),
    };
    let outputs = descend_all(params, &machine.slots, &alignment.vertex, (0, &alignment.word));
    if outputs.iter().any(|w| PermutedProduct::from_word(w, s).is_none()) {
        return fail(
            transcript,
            &machine,
            "a seed is not a rotation of its product after alignment".into(),
        );
    }
    let mv = Move {
        kind: MoveKind::CyclicAlignment,
        level: 0,
        inputs: machine.slots.clone(),
        outputs,
        detail: MoveDetail::Descend {
            vertex: alignment.vertex.clone(),
            normalized_slot: None,
        },
        verified: false,
        note: Some(format!("power m^{}", alignment.power_exponent)),
    };
    commit(&mut transcript, &mut machine, mv)?;
    transcript.aligned_vertex = Some(machine.vertex.clone());
    transcript.case = Some(case_info(&machine.slots[0], &machine.slots[1]));

    let mut rounds = 0;
    loop {
        let state = machine.split.as_ref().expect("aligned");
        if state.parts.iter().all(|p| p.is_singleton()) && state.is_isolated() {
            break;
        }
        let tagged: Vec<(Word, usize)> = state
            .parts
            .iter()
            .zip(&state.families)
            .map(|(p, &f)| (p.word().clone(), f))
            .collect();
        if let Some(plan) = plan_next(&tagged) {
            if rounds == budget.max_rounds {
                return fail(transcript, &machine, format!("round cap {rounds} reached"));
            }
            let note = match plan.class {
                0 => "g against h_0",
                1 => "isolated generator",
                _ => "endpoint analysis",
            };
            let mv = build_split_move(
                state,
                plan.situation,
                plan.pivot,
                &plan.alpha,
                &plan.beta,
                Some(note.to_string()),
            )
            .map_err(Error::Certification)?;
            commit(&mut transcript, &mut machine, mv)?;
            rounds += 1;
            continue;
        }
        let words: Vec<Word> = state.parts.iter().map(|p| p.word().clone()).collect();
        let reserve: Vec<usize> = state.reserve.keys().copied().collect();
        let Some(slot) = next_activation(&words, &reserve) else {
            return fail(transcript, &machine, "no split applies and no seed is left".into());
        };
        let w = state.reserve[&slot].clone();
        let mv = Move {
            kind: MoveKind::EndpointAnalysis,
            level: state.level,
            inputs: vec![w.clone()],
            outputs: vec![w],
            detail: MoveDetail::Activate { slot },
            verified: false,
            note: Some(format!("bring in h_{}", slot - 1)),
        };
        commit(&mut transcript, &mut machine, mv)?;
    }

    let state = machine.split.as_ref().expect("aligned");
    let mut parts: Vec<Word> = state.parts.iter().map(|p| p.word().clone()).collect();
    parts.sort();
    transcript.final_parts = parts;
    transcript.outcome = Outcome::Complete;
    Ok(transcript)
}

/// Result of re-checking a transcript.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReplayReport {
    pub moves_checked: usize,
    pub failures: Vec<String>,
    pub complete: bool,
}

impl ReplayReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Re-verifies every move of a transcript from its seeds.
///
/// Fails on the first move whose equalities do not hold, on final parts that differ from
/// the replayed ledger, and on a claimed completion that did not isolate every generator.
pub fn replay(transcript: &Transcript) -> Result<ReplayReport> {
    let params = transcript.params()?;
    let mut machine = Machine::new(params, &transcript.seeds)?;
    let mut report = ReplayReport {
        moves_checked: 0,
        failures: Vec::new(),
        complete: false,
    };
    for (i, mv) in transcript.moves.iter().enumerate() {
        if let Err(e) = machine.apply(mv, i) {
            report.failures.push(format!("move {i} ({}): {e}", mv.kind));
            return Ok(report);
        }
        if !mv.verified {
            report.failures.push(format!("move {i} is marked unverified"));
        }
        report.moves_checked += 1;
    }
    if let Some(v) = &transcript.aligned_vertex {
        if machine.split.is_some() && *v != machine.vertex {
            report
                .failures
                .push(format!("aligned vertex {v} differs from replayed {}", machine.vertex));
        }
    }
    let mut parts: Vec<Word> = match &machine.split {
        Some(st) => st.parts.iter().map(|p| p.word().clone()).collect(),
        None => machine.slots.clone(),
    };
    let mut claimed = transcript.final_parts.clone();
    parts.sort();
    claimed.sort();
    if parts != claimed {
        report.failures.push("final parts differ from the replayed ledger".into());
    }
    report.complete = machine.split.as_ref().is_some_and(|st| st.is_isolated());
    if transcript.is_complete() && !report.complete {
        report
            .failures
            .push("transcript claims completion but generators are not isolated".into());
    }
    Ok(report)
}
