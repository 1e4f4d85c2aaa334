//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and exits nonzero if
//! any criterion fails or overruns its time limit.

mod common;

use std::collections::{HashMap, HashSet};
use std::io::Write;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use madic::engine::{isolate_generators, make_prodense_seeds, replay, EngineBudget};
use madic::family::{check_spherical_transitivity, fractality_witness, verify_generator_recursions};
use madic::geodesics::{enumerate_ball, verify_length_lemmas, LemmaReport};
use madic::noise::NoiseGen;
use madic::projections::{
    cyclic_alignment, normalize_to_permuted_product, verify_witness, Budget, PermutedProduct,
};
use madic::suites::{alignment_suite, congruence_suite, noisy_products, projection_suite};
use madic::{GroupParams, Vertex, Word};

type Outcome = Result<String, String>;
type Criterion = (&'static str, u64, fn() -> Outcome);

const SMALL: [(usize, usize); 3] = [(2, 2), (3, 2), (2, 3)];
const ENGINE: [(usize, usize); 4] = [(2, 2), (2, 3), (3, 2), (3, 3)];

fn gp(m: usize, s: usize) -> GroupParams {
    GroupParams::new(m, s).unwrap()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok { Ok(()) } else { Err(msg()) }
}

fn reports_clean(reports: &[LemmaReport]) -> Result<usize, String> {
    let mut n = 0;
    for r in reports {
        if let Some(v) = r.violations.first() {
            return Err(format!("{}: {} violations, first {} ({})", r.lemma, r.violations.len(), v.element, v.detail));
        }
        n += r.instances_checked;
    }
    Ok(n)
}

fn generator_recursions() -> Outcome {
    let mut count = 0;
    for m in 2..=5 {
        for s in 2..=5 {
            ensure(verify_generator_recursions(gp(m, s)), || format!("recursion fails for ({m},{s})"))?;
            count += 1;
        }
    }
    // a = a_1 = (1, b), b = a_0 = (1, a)σ
    let p = gp(2, 2);
    let (a, b) = (Word::generator(1), Word::generator(0));
    let (da, db) = (p.decompose(&a).unwrap(), p.decompose(&b).unwrap());
    ensure(
        da.sections == [Word::identity(), b.clone()] && da.root_exponent == 0
            && db.sections == [Word::identity(), a.clone()] && db.root_exponent == 1,
        || "classical pair not reproduced".into(),
    )?;
    Ok(format!("{count} parameter pairs plus the classical pair"))
}

fn commutator_sections() -> Outcome {
    let mut total = 0;
    for (m, s) in SMALL {
        let p = gp(m, s);
        let mut gen = NoiseGen::new(p, 2024 + m as u64 * 10 + s as u64);
        for _ in 0..500 {
            let z = gen.noise();
            let d = p.decompose(&z).unwrap();
            let prod = d.sections.iter().fold(Word::identity(), |acc, x| acc.compose(x));
            ensure(p.abelianize(&prod).unwrap().is_zero(), || format!("({m},{s}) input {z}"))?;
            total += 1;
        }
    }
    Ok(format!("{total} inputs"))
}

fn length_suites() -> Outcome {
    let mut total = 0;
    let mut drops = 0;
    for (m, s, r) in [(2, 2, 6), (3, 2, 5), (2, 3, 5)] {
        let reports = verify_length_lemmas(gp(m, s), r).map_err(|e| e.to_string())?;
        total += reports_clean(&reports).map_err(|e| format!("({m},{s}) {e}"))?;
        drops += reports
            .iter()
            .filter(|x| x.lemma == madic::geodesics::CONJUGATE_PAIR_DROP)
            .map(|x| x.instances_checked)
            .sum::<usize>();
    }
    ensure(drops > 0, || "no stored geodesic exhibits the drop pattern".into())?;
    Ok(format!("{total} instances, {drops} strict-drop instances"))
}

fn projections() -> Outcome {
    let mut total = 0;
    for (m, s) in SMALL {
        total += reports_clean(&[projection_suite(gp(m, s)).map_err(|e| e.to_string())?])?;
    }
    Ok(format!("{total} instances"))
}

fn congruence() -> Outcome {
    let mut total = 0;
    for (m, s) in SMALL {
        let p = gp(m, s);
        let inputs = noisy_products(p, 200, 7 + m as u64 * 10 + s as u64);
        total += reports_clean(&[congruence_suite(p, &inputs, s + 1).map_err(|e| e.to_string())?])?;
    }
    Ok(format!("{total} instances"))
}

fn alignment() -> Outcome {
    let mut total = 0;
    for (m, s) in SMALL {
        total += reports_clean(&[alignment_suite(gp(m, s)).map_err(|e| e.to_string())?])?;
    }
    // g = a_1 a_0 on the binary tree: "01" carries a rotation ending a_0, "10" one ending a_1
    let p = gp(2, 2);
    let g = Word::from_pairs(&[(1, 1), (0, 1)]).unwrap();
    let prod = PermutedProduct::from_word(&g, 2).unwrap();
    let g4 = g.pow(4);
    for (target, vertex, want) in [(0, "01", [(1, 1), (0, 1)]), (1, "10", [(0, 1), (1, 1)])] {
        let a = cyclic_alignment(p, &prod, target).map_err(|e| e.to_string())?;
        let want = Word::from_pairs(&want).unwrap();
        ensure(a.vertex.to_string() == vertex && a.word == want, || {
            format!("target {target}: got {} at {}, expected {want} at {vertex}", a.word, a.vertex)
        })?;
        let u: Vertex = vertex.parse().unwrap();
        ensure(p.equal(&p.section(&g4, &u).unwrap(), &want).unwrap(), || format!("{vertex} section differs"))?;
        oracle_section_check(&g4, &[u.path()[0], u.path()[1]], &want)?;
        total += 1;
    }
    Ok(format!("{total} instances"))
}

/// Checks with the reference action that `w` fixes `u` and acts below it like `section`.
fn oracle_section_check(w: &Word, u: &[u32], section: &Word) -> Result<(), String> {
    let depth = 6;
    for tail in common::level_vertices(2, depth) {
        let mut v = u.to_vec();
        v.extend(&tail);
        let img = common::act_word(2, 2, w, &v);
        let mut want = u.to_vec();
        want.extend(common::act_word(2, 2, section, &tail));
        ensure(img == want, || format!("reference action disagrees below {u:?}"))?;
    }
    Ok(())
}

fn normalization() -> Outcome {
    let mut total = 0;
    let mut slowest = Duration::ZERO;
    for (m, s) in SMALL {
        let p = gp(m, s);
        for w in noisy_products(p, 20, 31 + m as u64 * 10 + s as u64) {
            let t = Instant::now();
            let wit = normalize_to_permuted_product(p, &w, Budget::for_params(p))
                .map_err(|e| format!("({m},{s}) {w}: {e}"))?;
            let dt = t.elapsed();
            ensure(verify_witness(p, &w, &wit), || format!("({m},{s}) {w}: witness rejected"))?;
            ensure(dt < Duration::from_secs(30), || format!("({m},{s}) {w}: took {dt:?}"))?;
            slowest = slowest.max(dt);
            total += 1;
        }
    }
    Ok(format!("{total} witnesses, slowest {slowest:?}"))
}

fn engine() -> Outcome {
    let mut runs = 0;
    for (m, s) in ENGINE {
        let p = gp(m, s);
        let mut gen = NoiseGen::new(p, 99 + m as u64 * 10 + s as u64);
        let noisy: Vec<Word> = (0..=s).map(|_| gen.commutator()).collect();
        for (label, noise) in [("empty", vec![Word::identity(); s + 1]), ("commutator", noisy)] {
            let t = Instant::now();
            let seeds = make_prodense_seeds(p, &noise).map_err(|e| e.to_string())?;
            let tr = isolate_generators(p, &seeds, EngineBudget::for_params(p))
                .map_err(|e| format!("({m},{s}) {label}: {e}"))?;
            let dt = t.elapsed();
            ensure(tr.is_complete() && tr.final_parts == p.generators(), || {
                format!("({m},{s}) {label}: incomplete\n{}", tr.to_log())
            })?;
            ensure(tr.moves.iter().all(|mv| mv.verified), || format!("({m},{s}) {label}: unverified move"))?;
            let round_trip = madic::engine::Transcript::from_json(&tr.to_json()).map_err(|e| e.to_string())?;
            let r = replay(&round_trip).map_err(|e| e.to_string())?;
            ensure(r.passed() && r.complete, || format!("({m},{s}) {label}: replay failures {:?}", r.failures))?;
            ensure(dt < Duration::from_secs(60), || format!("({m},{s}) {label}: took {dt:?}"))?;
            runs += 1;
        }
    }
    Ok(format!("{runs} runs replayed"))
}

fn word_problem() -> Outcome {
    let p = gp(2, 2);
    let ball = enumerate_ball(p, 5).map_err(|e| e.to_string())?;
    let reps: Vec<&Word> = ball.elements().iter().map(|e| &e.word).collect();
    let tables: Vec<Vec<u32>> = reps
        .iter()
        .map(|w| p.level_permutation(w, 8).unwrap().images().to_vec())
        .collect();
    let mut pairs = 0;
    for i in 0..reps.len() {
        ensure(tables[i] == common::word_table(2, 2, reps[i], 8), || format!("table of {}", reps[i]))?;
        let inv = reps[i].invert();
        for j in i + 1..reps.len() {
            ensure(!p.is_identity(&inv.compose(reps[j])).unwrap(), || {
                format!("false merge of {} and {}", reps[i], reps[j])
            })?;
            ensure(tables[i] != tables[j], || format!("level 8 does not separate {} and {}", reps[i], reps[j]))?;
            pairs += 1;
        }
    }
    let by_table: HashMap<&[u32], usize> = tables.iter().enumerate().map(|(k, t)| (t.as_slice(), k)).collect();
    let mut words = vec![Word::identity()];
    let mut frontier = vec![Word::identity()];
    for _ in 0..5 {
        let mut next = Vec::new();
        for w in &frontier {
            for l in madic::Letter::all(2) {
                if w.last().is_some_and(|x| x.is_inverse_of(l)) {
                    continue;
                }
                let mut v = w.clone();
                v.push(l);
                next.push(v);
            }
        }
        words.extend(next.iter().cloned());
        frontier = next;
    }
    let mut hit = HashSet::new();
    for w in &words {
        let t = p.level_permutation(w, 8).unwrap();
        let k = *by_table.get(t.images()).ok_or_else(|| format!("false split: {w} is not in the ball"))?;
        ensure(p.equal(w, reps[k]).unwrap(), || format!("{w} and {} share a table but differ", reps[k]))?;
        ensure(ball.lookup(w) == Some(k), || format!("ball lookup disagrees on {w}"))?;
        hit.insert(k);
    }
    ensure(hit.len() == reps.len(), || "some representative is reached by no word".into())?;
    Ok(format!("{} elements, {pairs} pairs, {} words", reps.len(), words.len()))
}

fn transitivity_and_fractality() -> Outcome {
    let mut total = 0;
    for (m, s) in ENGINE {
        let p = gp(m, s);
        for n in 1..=4 {
            ensure(check_spherical_transitivity(p, n).unwrap(), || format!("({m},{s}) level {n}"))?;
            total += 1;
        }
        for i in 0..s {
            let h = fractality_witness(p, i).map_err(|e| format!("({m},{s}) a_{i}: {e}"))?;
            let last = Vertex::new(vec![m as u32 - 1]);
            ensure(
                p.root_exponent(&h).unwrap() == 0
                    && p.equal(&p.section(&h, &last).unwrap(), &Word::generator(i)).unwrap(),
                || format!("({m},{s}) witness {h} for a_{i}"),
            )?;
            total += 1;
        }
    }
    Ok(format!("{total} checks"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("generator recursions", 1, generator_recursions),
        ("commutator sections abelianize to zero", 10, commutator_sections),
        ("section length inequalities on Cayley balls", 300, length_suites),
        ("rightmost projection of permuted products", 60, projections),
        ("shifted congruence of sections", 120, congruence),
        ("cyclic alignment", 60, alignment),
        ("normalization to permuted products", 3 * 20 * 30, normalization),
        ("generator isolation engine", 8 * 60, engine),
        ("word problem on the radius-5 ball", 120, word_problem),
        ("transitivity and fractality", 30, transitivity_and_fractality),
    ];
    let mut failed = 0;
    let mut out = std::io::stdout();
    for (k, (name, limit, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let res = run();
        let dt = t.elapsed();
        let line = match res {
            Ok(detail) if dt <= Duration::from_secs(*limit) => {
                format!("PASS {:>2} {name}: {detail} in {dt:.2?}", k + 1)
            }
            Ok(detail) => {
                failed += 1;
                format!("FAIL {:>2} {name}: {detail}, but took {dt:.2?} (limit {limit}s)", k + 1)
            }
            Err(e) => {
                failed += 1;
                format!("FAIL {:>2} {name}: {e}", k + 1)
            }
        };
        writeln!(out, "{line}").unwrap();
        out.flush().unwrap();
    }
    writeln!(out, "{} of {} criteria passed", criteria.len() - failed, criteria.len()).unwrap();
    if failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
