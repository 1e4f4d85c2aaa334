//! Exact word length over `S = {a_i^{±1}}` by breadth-first enumeration of Cayley balls,
//! and exhaustive checks of the length-reduction inequalities for sections.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::calculus::LevelAction;
use crate::error::{Error, Result};
use crate::group::{GroupParams, Limits};
use crate::word::{Letter, Word};

/// One group element of a ball with its canonical geodesic word.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BallElement {
    pub word: Word,
    pub length: usize,
}

type BucketKey = (Vec<i64>, Vec<u32>);

/// All elements of length at most `radius`, one geodesic representative each.
///
/// Representatives are pairwise distinct as group elements; the stored length is the BFS
/// depth at which the element first appeared.
#[derive(Clone, Debug)]
pub struct CayleyBall {
    params: GroupParams,
    radius: usize,
    elements: Vec<BallElement>,
    action: LevelAction,
    buckets: HashMap<BucketKey, Vec<usize>>,
}

impl CayleyBall {
    pub fn params(&self) -> GroupParams {
        self.params
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn elements(&self) -> &[BallElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    fn key(&self, w: &Word) -> BucketKey {
        (
            self.params.abelianize_raw(w).0,
            self.action.of_word(w).images().to_vec(),
        )
    }

    /// Index of the ball element equal to `w`, if `|w| ≤ radius`.
    pub fn lookup(&self, w: &Word) -> Option<usize> {
        let key = self.key(w);
        self.lookup_keyed(w, &key)
    }

    fn lookup_keyed(&self, w: &Word, key: &BucketKey) -> Option<usize> {
        self.buckets.get(key).and_then(|bucket| {
            bucket
                .iter()
                .copied()
                .find(|&k| self.params.equal_raw(w, &self.elements[k].word))
        })
    }

    /// Geodesic length of `w` if it is at most the radius.
    pub fn length_of(&self, w: &Word) -> Option<usize> {
        self.lookup(w).map(|k| self.elements[k].length)
    }

    /// Number of elements at each distance `0..=radius`.
    pub fn sphere_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.radius + 1];
        for e in &self.elements {
            sizes[e.length] += 1;
        }
        sizes
    }
}

pub fn enumerate_ball(params: GroupParams, radius: usize) -> Result<CayleyBall> {
    enumerate_ball_with(params, radius, &Limits::default())
}

/// Breadth-first closure of the identity under right multiplication by the `2s` letters.
/// Candidates are bucketed by abelianization and level-`prefilter_depth` permutation and
/// confirmed new or old by the exact word problem.
pub fn enumerate_ball_with(
    params: GroupParams,
    radius: usize,
    limits: &Limits,
) -> Result<CayleyBall> {
    let action = LevelAction::new(params, limits.prefilter_depth.max(1), limits.level_cap)?;
    let mut ball = CayleyBall {
        params,
        radius,
        elements: Vec::new(),
        action,
        buckets: HashMap::new(),
    };
    let root = Word::identity();
    let key = ball.key(&root);
    ball.buckets.entry(key).or_default().push(0);
    ball.elements.push(BallElement {
        word: root,
        length: 0,
    });

    let letters = Letter::all(params.s());
    let mut frontier = 0..1;
    for depth in 0..radius {
        let start = ball.elements.len();
        for k in frontier.clone() {
            let base = ball.elements[k].word.clone();
            for &l in &letters {
                let mut cand = base.clone();
                cand.push(l);
                if cand.len() <= depth {
                    continue;
                }
                let key = ball.key(&cand);
                if ball.lookup_keyed(&cand, &key).is_some() {
                    continue;
                }
                if ball.elements.len() >= limits.ball_cap {
                    return Err(Error::ResourceCap {
                        resource: "ball elements",
                        requested: ball.elements.len() + 1,
                        limit: limits.ball_cap,
                        detail: format!(
                            " (radius {depth} complete with {start} elements)"
                        ),
                    });
                }
                let idx = ball.elements.len();
                ball.buckets.entry(key).or_default().push(idx);
                ball.elements.push(BallElement {
                    word: cand,
                    length: depth + 1,
                });
            }
        }
        frontier = start..ball.elements.len();
    }
    Ok(ball)
}

/// `|g|` for the element of `w` when it is at most `radius_cap`, else `None`.
pub fn geodesic_length(params: GroupParams, w: &Word, radius_cap: usize) -> Result<Option<usize>> {
    params.check_word(w)?;
    let ball = enumerate_ball(params, radius_cap)?;
    Ok(ball.length_of(w))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub element: Word,
    pub detail: String,
}

/// Outcome of one inequality checked over a ball.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaReport {
    pub lemma: String,
    pub instances_checked: usize,
    pub violations: Vec<Violation>,
    pub unverified: usize,
}

impl LemmaReport {
    pub fn new(lemma: &str) -> Self {
        LemmaReport {
            lemma: lemma.to_string(),
            instances_checked: 0,
            violations: Vec::new(),
            unverified: 0,
        }
    }

    fn merge(mut self, other: LemmaReport) -> Self {
        self.instances_checked += other.instances_checked;
        self.violations.extend(other.violations);
        self.unverified += other.unverified;
        self
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    /// Counts one instance and records a violation when `ok` is false.
    pub fn check(&mut self, ok: bool, element: &Word, detail: impl FnOnce() -> String) {
        self.instances_checked += 1;
        if !ok {
            self.violations.push(Violation {
                element: element.clone(),
                detail: detail(),
            });
        }
    }
}

/// Report names, in output order.
pub const SECTION_LENGTH_SUM: &str = "section_length_sum";
pub const POWER_SECTION_LENGTH: &str = "power_section_length";
pub const CONJUGATE_PAIR_DROP: &str = "conjugate_pair_drop";
pub const BFS_CONSISTENCY: &str = "bfs_consistency";

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct LengthLemmaOptions {
    /// Check the conjugate-pair drop over every geodesic word, not just the stored ones.
    /// Only allowed for radius at most 4.
    pub all_geodesics: bool,
}

/// True when some `a_0` occurs strictly before some `a_0^{-1}`.
pub fn has_conjugate_pair(w: &Word) -> bool {
    let mut seen_positive = false;
    for l in w.letters() {
        if l.index == 0 {
            if l.exponent > 0 {
                seen_positive = true;
            } else if seen_positive {
                return true;
            }
        }
    }
    false
}

pub fn verify_length_lemmas(params: GroupParams, radius: usize) -> Result<Vec<LemmaReport>> {
    let ball = enumerate_ball(params, radius)?;
    verify_length_lemmas_on(&ball, LengthLemmaOptions::default())
}

/// Checks over every ball element `g = (g_0,…,g_{m-1})σ^i`:
///
/// * `Σ|g_k| ≤ |g|`;
/// * when `gcd(i, m) = 1`, each section `α_k` of `g^m` has `|α_k| ≤ Σ|g_k| ≤ |g|`;
/// * when the stored geodesic has `a_0` before `a_0^{-1}`, `Σ|g_k| ≤ |g| - 2`;
/// * neighbours in the Cayley graph differ in stored length by at most one.
///
/// Section lengths are looked up in the same ball. A section missing from it has length
/// above the radius, hence above `|g|`, which is itself a violation.
pub fn verify_length_lemmas_on(
    ball: &CayleyBall,
    opts: LengthLemmaOptions,
) -> Result<Vec<LemmaReport>> {
    if opts.all_geodesics && ball.radius() > 4 {
        return Err(Error::Precondition(
            "exhaustive geodesic enumeration is limited to radius 4".into(),
        ));
    }
    let params = ball.params();
    let m = params.m();
    let letters = Letter::all(params.s());

    let per_element: Vec<(Option<usize>, [LemmaReport; 4])> = ball
        .elements()
        .par_iter()
        .map(|e| {
            let mut sum_report = LemmaReport::new(SECTION_LENGTH_SUM);
            let mut power_report = LemmaReport::new(POWER_SECTION_LENGTH);
            let mut drop_report = LemmaReport::new(CONJUGATE_PAIR_DROP);
            let mut bfs_report = LemmaReport::new(BFS_CONSISTENCY);

            let d = params.decompose_raw(&e.word);
            let lengths: Option<Vec<usize>> =
                d.sections.iter().map(|x| ball.length_of(x)).collect();
            let sum = lengths.as_ref().map(|v| v.iter().sum::<usize>());

            sum_report.instances_checked += 1;
            match sum {
                Some(total) if total <= e.length => {}
                Some(total) => sum_report.violations.push(Violation {
                    element: e.word.clone(),
                    detail: format!("sum of section lengths {total} > {}", e.length),
                }),
                None => sum_report.violations.push(Violation {
                    element: e.word.clone(),
                    detail: format!("a section is longer than the radius {}", ball.radius()),
                }),
            }

            let i = d.root_exponent;
            if i != 0 && gcd(i, m) == 1 {
                power_report.instances_checked += 1;
                for (k, alpha) in params.mth_power_sections(&e.word).iter().enumerate() {
                    let ok = match (ball.length_of(alpha), sum) {
                        (Some(a), Some(total)) => a <= total && total <= e.length,
                        _ => false,
                    };
                    if !ok {
                        power_report.violations.push(Violation {
                            element: e.word.clone(),
                            detail: format!("power section {k} = {alpha} too long"),
                        });
                    }
                }
            }

            if !opts.all_geodesics && has_conjugate_pair(&e.word) {
                drop_report.instances_checked += 1;
                if !matches!(sum, Some(total) if total + 2 <= e.length) {
                    drop_report.violations.push(Violation {
                        element: e.word.clone(),
                        detail: format!("section sum {sum:?} does not drop by 2 from {}", e.length),
                    });
                }
            }

            for &l in &letters {
                let mut n = e.word.clone();
                n.push(l);
                bfs_report.instances_checked += 1;
                let ok = match ball.length_of(&n) {
                    Some(len) => len.abs_diff(e.length) <= 1,
                    None => e.length == ball.radius(),
                };
                if !ok {
                    bfs_report.violations.push(Violation {
                        element: e.word.clone(),
                        detail: format!("neighbour via {l} breaks BFS layering"),
                    });
                }
            }
            (sum, [sum_report, power_report, drop_report, bfs_report])
        })
        .collect();

    let mut reports = [
        LemmaReport::new(SECTION_LENGTH_SUM),
        LemmaReport::new(POWER_SECTION_LENGTH),
        LemmaReport::new(CONJUGATE_PAIR_DROP),
        LemmaReport::new(BFS_CONSISTENCY),
    ];
    let mut sums = Vec::with_capacity(per_element.len());
    for (sum, parts) in per_element {
        sums.push(sum);
        for (acc, part) in reports.iter_mut().zip(parts) {
            *acc = std::mem::replace(acc, LemmaReport::new("")).merge(part);
        }
    }

    if opts.all_geodesics {
        let drop = all_geodesic_drop(ball, &sums);
        reports[2] = drop;
    }
    Ok(reports.into_iter().collect())
}

fn all_geodesic_drop(ball: &CayleyBall, sums: &[Option<usize>]) -> LemmaReport {
    let letters = Letter::all(ball.params().s());
    let mut report = LemmaReport::new(CONJUGATE_PAIR_DROP);
    let mut layer = vec![Word::identity()];
    for len in 1..=ball.radius() {
        let mut next = Vec::new();
        for w in &layer {
            for &l in &letters {
                let mut x = w.clone();
                x.push(l);
                if x.len() == len {
                    next.push(x);
                }
            }
        }
        for w in &next {
            if !has_conjugate_pair(w) {
                continue;
            }
            let Some(k) = ball.lookup(w) else { continue };
            if ball.elements()[k].length != len {
                continue;
            }
            report.instances_checked += 1;
            if !matches!(sums[k], Some(total) if total + 2 <= len) {
                report.violations.push(Violation {
                    element: w.clone(),
                    detail: format!("section sum {:?} does not drop by 2 from {len}", sums[k]),
                });
            }
        }
        layer = next;
    }
    report
}

pub(crate) fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
