//! Independent reference implementations shared by the integration tests.
//! None of them go through the Smith form, the backtracking search or the
//! production Fox calculus.

#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::PathBuf;

use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use twistkit::corpus::{self, CorpusEntry};
use twistkit::fox::Letter;
use twistkit::invariants::InvariantReport;
use twistkit::{FreeWord, GroupPresentation, LaurentPoly, LinkDiagram, PolyMatrix, Rational};

pub fn corpus_dir() -> PathBuf {
    corpus::default_dir()
}

pub fn entry(name: &str) -> CorpusEntry {
    corpus::load(&corpus_dir(), name).unwrap()
}

pub fn all_entries() -> Vec<CorpusEntry> {
    corpus::load_all(&corpus_dir()).unwrap()
}

pub fn poly(s: &str) -> LaurentPoly {
    s.parse().unwrap()
}

/// `(k, Δ_0, Δ_1, Δ̃, rank)`: everything in a report except the descriptor.
pub fn invariants_of(r: &InvariantReport) -> (usize, LaurentPoly, LaurentPoly, LaurentPoly, usize) {
    (r.k, r.delta0.clone(), r.delta1.clone(), r.torsion_delta.clone(), r.rank)
}

/// Applies a relabelling of arc labels to PD text.
pub fn relabel(pd: &str, map: &[u64]) -> String {
    pd.lines()
        .map(|line| {
            let line = line.split('#').next().unwrap().trim();
            match line.strip_prefix("X ") {
                Some(rest) => {
                    let labels: Vec<String> =
                        rest.split_whitespace().map(|l| map[l.parse::<usize>().unwrap() - 1].to_string()).collect();
                    format!("X {}\n", labels.join(" "))
                }
                None if line.is_empty() => String::new(),
                None => format!("{line}\n"),
            }
        })
        .collect()
}

// ---------------------------------------------------------------- permutations

fn perms(n: usize) -> Vec<Vec<usize>> {
    fn go(cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        let n = used.len();
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for v in 0..n {
            if !used[v] {
                used[v] = true;
                cur.push(v);
                go(cur, used, out);
                cur.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

fn apply_word(images: &[Vec<usize>], w: &FreeWord, n: usize) -> Vec<usize> {
    // evaluate point by point: (x1 x2)(i) = x1(x2(i))
    (0..n)
        .map(|mut i| {
            for l in w.letters().iter().rev() {
                let img = &images[l.gen];
                i = if l.exp > 0 { img[i] } else { img.iter().position(|&v| v == i).unwrap() };
            }
            i
        })
        .collect()
}

fn generates_symmetric_group(images: &[Vec<usize>], n: usize) -> bool {
    let order: usize = (1..=n).product();
    let mut group: Vec<Vec<usize>> = vec![(0..n).collect()];
    let mut i = 0;
    while i < group.len() {
        for g in images {
            let next: Vec<usize> = group[i].iter().map(|&x| g[x]).collect();
            if !group.contains(&next) {
                group.push(next);
            }
        }
        i += 1;
    }
    group.len() == order
}

/// `(homomorphisms, surjective ones)` to `S_n` by trying every tuple of
/// images; optionally only transpositions as images.
pub fn brute_force_hom_count(p: &GroupPresentation, n: usize, transpositions_only: bool) -> (usize, usize) {
    let candidates: Vec<Vec<usize>> = perms(n)
        .into_iter()
        .filter(|s| !transpositions_only || s.iter().enumerate().filter(|(i, v)| i != *v).count() == 2)
        .collect();
    let g = p.generator_count();
    let mut idx = vec![0usize; g];
    let (mut total, mut surjective) = (0, 0);
    loop {
        let images: Vec<Vec<usize>> = idx.iter().map(|&i| candidates[i].clone()).collect();
        let id: Vec<usize> = (0..n).collect();
        if p.relators().iter().all(|r| apply_word(&images, r, n) == id) {
            total += 1;
            if generates_symmetric_group(&images, n) {
                surjective += 1;
            }
        }
        // odometer
        let mut pos = 0;
        loop {
            if pos == g {
                return (total, surjective);
            }
            idx[pos] += 1;
            if idx[pos] < candidates.len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

pub fn cycle_type(p: &[usize]) -> Vec<usize> {
    let mut seen = vec![false; p.len()];
    let mut lens = Vec::new();
    for s in 0..p.len() {
        let mut len = 0;
        let mut i = s;
        while !seen[i] {
            seen[i] = true;
            i = p[i];
            len += 1;
        }
        if len > 0 {
            lens.push(len);
        }
    }
    lens.sort_unstable();
    lens
}

// ------------------------------------------------------------ fraction field

/// Rank over `Q(t)` by fraction-free Gaussian elimination: row operations
/// `row_i <- pivot * row_i - a_i * row_pivot` never leave the Laurent ring.
pub fn fraction_field_rank(a: &PolyMatrix) -> usize {
    let mut m: Vec<Vec<LaurentPoly>> =
        (0..a.rows()).map(|i| (0..a.cols()).map(|j| a[(i, j)].clone()).collect()).collect();
    let (rows, cols) = (a.rows(), a.cols());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !m[r][c].is_zero()) else { continue };
        m.swap(rank, p);
        for r in rank + 1..rows {
            if m[r][c].is_zero() {
                continue;
            }
            let (piv, f) = (m[rank][c].clone(), m[r][c].clone());
            for j in c..cols {
                m[r][j] = &(&piv * &m[r][j]) - &(&f * &m[rank][j]);
            }
            // keep entries small by dividing out the row's common factor
            let g = m[r][c..].iter().filter(|x| !x.is_zero()).fold(LaurentPoly::zero(), |g, x| {
                if g.is_zero() {
                    x.normalize_unit()
                } else {
                    g.gcd(x)
                }
            });
            if !g.is_zero() && !g.is_one() {
                for j in c..cols {
                    m[r][j] = m[r][j].div_exact(&g).unwrap();
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Determinant by cofactor expansion along the first row.
pub fn cofactor_determinant(m: &[Vec<LaurentPoly>]) -> LaurentPoly {
    let n = m.len();
    if n == 0 {
        return LaurentPoly::one();
    }
    let mut acc = LaurentPoly::zero();
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<LaurentPoly>> =
            m[1..].iter().map(|row| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, v)| v.clone()).collect()).collect();
        let term = &m[0][j] * &cofactor_determinant(&minor);
        if j % 2 == 0 {
            acc += &term;
        } else {
            acc -= &term;
        }
    }
    acc
}

/// Classical Alexander polynomial of a knot diagram from the textbook
/// crossing rows (`1 - t` on the over-arc, `t` and `-1` on the under-arcs),
/// as a first minor of the Alexander matrix.
pub fn hand_alexander(d: &LinkDiagram) -> LaurentPoly {
    let arcs = d.wirtinger_arcs();
    let gen_of = |label: u64| arcs.iter().position(|a| a.contains(&label)).unwrap();
    let g = arcs.len();
    let t = LaurentPoly::t();
    let one = LaurentPoly::one();
    let mut rows = Vec::new();
    for c in d.crossings() {
        let mut row = vec![LaurentPoly::zero(); g];
        let (o, i, j) = (gen_of(c.over()), gen_of(c.under_in()), gen_of(c.under_out()));
        let (t_at, minus_at) = if c.sign > 0 { (i, j) } else { (j, i) };
        row[o] += &(&one - &t);
        row[t_at] += &t;
        row[minus_at] -= &one;
        rows.push(row);
    }
    if g <= 1 {
        return LaurentPoly::one();
    }
    let minor: Vec<Vec<LaurentPoly>> = rows[..g - 1].iter().map(|r| r[..g - 1].to_vec()).collect();
    cofactor_determinant(&minor).normalize_unit()
}

// -------------------------------------------------------------- Fox calculus

/// Element of the integral group ring of a free group.
pub type GroupRing = BTreeMap<FreeWord, i64>;

fn ring_add(a: &mut GroupRing, b: &GroupRing, scale: i64) {
    for (w, c) in b {
        *a.entry(w.clone()).or_default() += scale * c;
    }
    a.retain(|_, c| *c != 0);
}

fn left_multiply(u: &FreeWord, b: &GroupRing) -> GroupRing {
    let mut out = GroupRing::new();
    for (w, c) in b {
        *out.entry(u.concat(w).reduced()).or_default() += c;
    }
    out.retain(|_, c| *c != 0);
    out
}

/// Fox derivative by recursion on `w = u v`: `∂(uv) = ∂u + u ∂v`.
pub fn recursive_fox(w: &FreeWord, j: usize) -> GroupRing {
    let letters = w.letters();
    match letters.len() {
        0 => GroupRing::new(),
        1 => {
            let Letter { gen, exp } = letters[0];
            let mut out = GroupRing::new();
            if gen == j {
                if exp > 0 {
                    out.insert(FreeWord::identity(), 1);
                } else {
                    out.insert(w.clone(), -1);
                }
            }
            out
        }
        n => {
            let mid = n / 2;
            let u = w.prefix(mid);
            let v = FreeWord::from_letters(letters[mid..].iter().map(|l| (l.gen, l.exp)).collect());
            let mut out = recursive_fox(&u, j);
            ring_add(&mut out, &left_multiply(&u.reduced(), &recursive_fox(&v, j)), 1);
            out
        }
    }
}

// ------------------------------------------------------------------ random

pub fn random_rational(rng: &mut ChaCha8Rng, bound: i64) -> Rational {
    let num = rng.gen_range(-bound..=bound);
    let den = rng.gen_range(1..=bound);
    Rational::new(num.into(), den.into())
}

/// Random Laurent polynomial of breadth at most `max_breadth`, zero with
/// probability about `zero_prob`.
pub fn random_poly(rng: &mut ChaCha8Rng, max_breadth: usize, zero_prob: f64, integral: bool) -> LaurentPoly {
    if rng.gen_bool(zero_prob) {
        return LaurentPoly::zero();
    }
    let len = rng.gen_range(1..=max_breadth + 1);
    let min_exp = rng.gen_range(-1..=1);
    let coeffs = (0..len)
        .map(|_| if integral { Rational::from_integer(rng.gen_range(-3i64..=3).into()) } else { random_rational(rng, 10) })
        .collect();
    LaurentPoly::new(min_exp, coeffs)
}

/// Random matrix up to `max_dim` square; some are built as products so that
/// rank deficiency and nontrivial divisors are common.
pub fn random_matrix(rng: &mut ChaCha8Rng, max_dim: usize, max_breadth: usize) -> PolyMatrix {
    let rows = rng.gen_range(1..=max_dim);
    let cols = rng.gen_range(1..=max_dim);
    let integral = rng.gen_bool(0.7);
    if rng.gen_bool(0.3) {
        // low rank: product of thin factors with breadth split between them
        let inner = rng.gen_range(1..=rows.min(cols));
        let b1 = max_breadth / 2;
        let b2 = max_breadth - b1;
        let a = PolyMatrix::from_vec(rows, inner, (0..rows * inner).map(|_| random_poly(rng, b1, 0.3, true)).collect());
        let b = PolyMatrix::from_vec(inner, cols, (0..inner * cols).map(|_| random_poly(rng, b2, 0.3, true)).collect());
        return &a * &b;
    }
    PolyMatrix::from_vec(rows, cols, (0..rows * cols).map(|_| random_poly(rng, max_breadth, 0.35, integral)).collect())
}

/// Random reduced word of length up to `max_len` on `g` generators.
pub fn random_word(rng: &mut ChaCha8Rng, g: usize, max_len: usize) -> FreeWord {
    let len = rng.gen_range(0..=max_len);
    FreeWord::from_letters((0..len).map(|_| (rng.gen_range(0..g), if rng.gen_bool(0.5) { 1 } else { -1 })).collect())
}
