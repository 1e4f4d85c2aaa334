//! Independent reference implementation of the tree action, written directly from the
//! generator recursion and sharing no code with the library.
#![allow(dead_code)]

use madic::{Letter, Word};

/// Image of the vertex `path` under one letter.
pub fn act_letter(m: usize, s: usize, l: Letter, path: &[u32]) -> Vec<u32> {
    let mut out = path.to_vec();
    let mut idx = l.index as usize;
    let inverse = l.exponent < 0;
    let m = m as u32;
    for k in 0..out.len() {
        let x = out[k];
        if idx == 0 {
            // a_0 = (1,…,1,a_{s-1})σ: x ↦ x+1, descending with a_{s-1} below m-1.
            // a_0^{-1} maps y ↦ y-1 and descends with a_{s-1}^{-1} below the image m-1.
            let y = if inverse { (x + m - 1) % m } else { (x + 1) % m };
            out[k] = y;
            let pivot = if inverse { y } else { x };
            if pivot != m - 1 {
                return out;
            }
            idx = s - 1;
        } else {
            if x != m - 1 {
                return out;
            }
            idx -= 1;
        }
    }
    out
}

pub fn act_word(m: usize, s: usize, w: &Word, path: &[u32]) -> Vec<u32> {
    w.letters()
        .iter()
        .fold(path.to_vec(), |p, &l| act_letter(m, s, l, &p))
}

/// All vertices of a level, big-endian lexicographic.
pub fn level_vertices(m: usize, n: usize) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..m as u32).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    out
}

pub fn rank(m: usize, p: &[u32]) -> usize {
    p.iter().fold(0, |acc, &x| acc * m + x as usize)
}

/// Permutation table of a letter on level `n`.
pub fn letter_table(m: usize, s: usize, l: Letter, n: usize) -> Vec<u32> {
    level_vertices(m, n)
        .iter()
        .map(|p| rank(m, &act_letter(m, s, l, p)) as u32)
        .collect()
}

/// Permutation table of a word on level `n`, built letter by letter from left to right.
pub fn word_table(m: usize, s: usize, w: &Word, n: usize) -> Vec<u32> {
    let size = m.pow(n as u32);
    let mut t: Vec<u32> = (0..size as u32).collect();
    for &l in w.letters() {
        let lt = letter_table(m, s, l, n);
        t = t.iter().map(|&x| lt[x as usize]).collect();
    }
    t
}

/// Exponent sums.
pub fn exponent_sums(s: usize, w: &Word) -> Vec<i64> {
    let mut v = vec![0i64; s];
    for l in w.letters() {
        v[l.index as usize] += l.exponent as i64;
    }
    v
}

/// Minimal word length of every element whose level-`n` permutation is reached within
/// `radius`, by breadth-first search over permutation tables. Returns the sphere sizes.
pub fn sphere_sizes_by_permutation(m: usize, s: usize, n: usize, radius: usize) -> Vec<usize> {
    use std::collections::HashSet;
    let letters = Letter::all(s);
    let tables: Vec<Vec<u32>> = letters.iter().map(|&l| letter_table(m, s, l, n)).collect();
    let id: Vec<u32> = (0..m.pow(n as u32) as u32).collect();
    let mut seen: HashSet<Vec<u32>> = HashSet::from([id.clone()]);
    let mut frontier = vec![id];
    let mut sizes = vec![1];
    for _ in 0..radius {
        let mut next = Vec::new();
        for t in &frontier {
            for lt in &tables {
                let u: Vec<u32> = t.iter().map(|&x| lt[x as usize]).collect();
                if seen.insert(u.clone()) {
                    next.push(u);
                }
            }
        }
        sizes.push(next.len());
        frontier = next;
    }
    sizes
}
