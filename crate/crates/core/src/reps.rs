//! Representations of link groups into `GL(k, Q)`: trivial ones, permutation
//! representations found by backtracking over homomorphisms to `S_n`,
//! conjugates and block sums.

use std::collections::HashSet;
use std::fmt::Write as _;

use crate::algebra::{parse_rational, QMatrix};
use crate::error::RepError;
use crate::fox::{evaluate_word_rational, GroupPresentation};

/// Images of the generators of a presentation as invertible rational
/// matrices, already checked against the relators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixRep {
    k: usize,
    images: Vec<QMatrix>,
    inverses: Vec<QMatrix>,
    descriptor: String,
    presentation: u64,
}

impl MatrixRep {
    /// Every generator to the `k x k` identity.
    pub fn trivial(p: &GroupPresentation, k: usize) -> Self {
        assert!(k > 0, "representation dimension must be positive");
        let id = QMatrix::identity(k);
        MatrixRep {
            k,
            images: vec![id.clone(); p.generator_count()],
            inverses: vec![id; p.generator_count()],
            descriptor: if k == 1 { "trivial".to_string() } else { format!("trivial(k={k})") },
            presentation: p.fingerprint(),
        }
    }

    /// Builds and validates a representation of `p`.
    pub fn for_presentation(
        p: &GroupPresentation,
        images: Vec<QMatrix>,
        descriptor: impl Into<String>,
    ) -> Result<Self, RepError> {
        if images.len() != p.generator_count() {
            return Err(RepError::MissingGenerator(images.len().min(p.generator_count())));
        }
        let k = images.first().map_or(1, QMatrix::rows);
        let mut inverses = Vec::with_capacity(images.len());
        for (g, m) in images.iter().enumerate() {
            if m.rows() != k || m.cols() != k {
                return Err(RepError::WrongSize { generator: g, expected: k, found: m.rows().max(m.cols()) });
            }
            inverses.push(m.inverse().map_err(|_| RepError::NotInvertible(g))?);
        }
        let rep = MatrixRep { k, images, inverses, descriptor: descriptor.into(), presentation: p.fingerprint() };
        rep.validate(p)?;
        Ok(rep)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn images(&self) -> &[QMatrix] {
        &self.images
    }

    pub fn descriptor(&self) -> &str {
        &self.descriptor
    }

    pub fn with_descriptor(mut self, descriptor: impl Into<String>) -> Self {
        self.descriptor = descriptor.into();
        self
    }

    /// `α(x_gen)^exp`.
    pub fn letter(&self, gen: usize, exp: i8) -> Option<&QMatrix> {
        if exp > 0 {
            self.images.get(gen)
        } else {
            self.inverses.get(gen)
        }
    }

    /// Checks that every relator of `p` maps to the identity.
    pub fn validate(&self, p: &GroupPresentation) -> Result<(), RepError> {
        if self.images.len() < p.generator_count() {
            return Err(RepError::MissingGenerator(self.images.len()));
        }
        for (i, r) in p.relators().iter().enumerate() {
            if !evaluate_word_rational(self, r)?.is_identity() {
                return Err(RepError::RelatorFailed(i));
            }
        }
        Ok(())
    }
}

/// `α ⊕ β`: block-diagonal images.
pub fn diagonal_sum(a: &MatrixRep, b: &MatrixRep) -> Result<MatrixRep, RepError> {
    if a.presentation != b.presentation || a.images.len() != b.images.len() {
        return Err(RepError::PresentationMismatch);
    }
    Ok(MatrixRep {
        k: a.k + b.k,
        images: a.images.iter().zip(&b.images).map(|(x, y)| x.direct_sum(y)).collect(),
        inverses: a.inverses.iter().zip(&b.inverses).map(|(x, y)| x.direct_sum(y)).collect(),
        descriptor: format!("{} + {}", a.descriptor, b.descriptor),
        presentation: a.presentation,
    })
}

/// `x -> g α(x) g^-1`.
pub fn conjugate(a: &MatrixRep, g: &QMatrix) -> Result<MatrixRep, RepError> {
    if g.rows() != a.k || g.cols() != a.k {
        return Err(RepError::BadConjugator);
    }
    let g_inv = g.inverse().map_err(|_| RepError::BadConjugator)?;
    let conj = |m: &QMatrix| &(g * m) * &g_inv;
    Ok(MatrixRep {
        k: a.k,
        images: a.images.iter().map(conj).collect(),
        inverses: a.inverses.iter().map(conj).collect(),
        descriptor: format!("conj({})", a.descriptor),
        presentation: a.presentation,
    })
}

/// Permutation of `{0..n}` stored as its image list.
pub type Perm = Vec<usize>;

fn compose(a: &[usize], b: &[usize]) -> Perm {
    // (a ∘ b)(i) = a(b(i)), matching the product of permutation matrices
    b.iter().map(|&i| a[i]).collect()
}

fn invert(a: &[usize]) -> Perm {
    let mut out = vec![0; a.len()];
    for (i, &j) in a.iter().enumerate() {
        out[j] = i;
    }
    out
}

fn identity_perm(n: usize) -> Perm {
    (0..n).collect()
}

fn is_transposition(p: &[usize]) -> bool {
    p.iter().enumerate().filter(|(i, &j)| *i != j).count() == 2
}

/// All permutations of `0..n` in lexicographic order.
pub fn all_perms(n: usize) -> Vec<Perm> {
    let mut out = Vec::new();
    let mut cur = identity_perm(n);
    loop {
        out.push(cur.clone());
        // next permutation
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else { break };
        let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).unwrap();
        cur.swap(i, j);
        cur[i + 1..].reverse();
    }
    out
}

/// A homomorphism from the presentation's group to `S_n`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PermAssignment {
    pub n: usize,
    /// 0-based image lists, one per generator.
    pub images: Vec<Perm>,
}

impl PermAssignment {
    /// Whether the images generate all of `S_n`.
    pub fn is_surjective(&self) -> bool {
        let target: usize = (1..=self.n).product();
        if self.n <= 1 {
            return true;
        }
        let gens: Vec<&Perm> = self.images.iter().filter(|p| **p != identity_perm(self.n)).collect();
        let mut seen: HashSet<Perm> = HashSet::new();
        let mut frontier = vec![identity_perm(self.n)];
        seen.insert(identity_perm(self.n));
        while let Some(x) = frontier.pop() {
            for g in &gens {
                let y = compose(&x, g);
                if seen.insert(y.clone()) {
                    if seen.len() == target {
                        return true;
                    }
                    frontier.push(y);
                }
            }
        }
        seen.len() == target
    }

    /// Lexicographically least image tuple among all simultaneous conjugates.
    pub fn conjugacy_canonical(&self) -> PermAssignment {
        let mut best = self.images.clone();
        for s in all_perms(self.n) {
            let s_inv = invert(&s);
            let conj: Vec<Perm> = self.images.iter().map(|x| compose(&compose(&s, x), &s_inv)).collect();
            if conj < best {
                best = conj;
            }
        }
        PermAssignment { n: self.n, images: best }
    }

    /// `perm(n=3): [2 1 3] [1 3 2] ...` with 1-based images.
    pub fn descriptor(&self) -> String {
        let mut s = format!("perm(n={}):", self.n);
        for img in &self.images {
            let parts: Vec<String> = img.iter().map(|i| (i + 1).to_string()).collect();
            let _ = write!(s, " [{}]", parts.join(" "));
        }
        s
    }
}

/// Each generator to its permutation matrix.
pub fn perm_to_matrix(p: &GroupPresentation, rho: &PermAssignment) -> Result<MatrixRep, RepError> {
    let images = rho.images.iter().map(|perm| QMatrix::permutation(perm)).collect();
    MatrixRep::for_presentation(p, images, rho.descriptor())
}

#[derive(Clone, Debug)]
pub struct SearchOptions {
    pub degree: usize,
    pub surjective_only: bool,
    /// Restrict generator images to transpositions.
    pub transpositions_only: bool,
    pub distinct_up_to_conjugacy: bool,
    /// Stop after this many homomorphisms.
    pub limit: Option<usize>,
    /// Stop after this many branch assignments.
    pub max_nodes: Option<u64>,
}

impl SearchOptions {
    pub fn new(degree: usize) -> Self {
        SearchOptions {
            degree,
            surjective_only: false,
            transpositions_only: false,
            distinct_up_to_conjugacy: false,
            limit: None,
            max_nodes: None,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Enumeration {
    /// Sorted lexicographically by image lists.
    pub assignments: Vec<PermAssignment>,
    pub surjective_count: usize,
    /// The result limit was hit.
    pub truncated: bool,
    /// The node budget ran out before the search finished.
    pub budget_exhausted: bool,
    pub nodes: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Step {
    Branch(usize),
    /// The generator occurs once in the relator and all other letters are known.
    Derive { gen: usize, relator: usize, pos: usize },
}

/// Order of generator assignments: branch on the generator whose value forces
/// the most others, then close under single-unknown relators.
#[derive(Clone, Debug)]
struct SearchPlan {
    steps: Vec<Step>,
    /// Relators to check once the step has run.
    checks: Vec<Vec<usize>>,
}

impl SearchPlan {
    fn new(p: &GroupPresentation) -> Self {
        let g = p.generator_count();
        let relators = p.relators();
        let single_unknown = |known: &[bool], r: usize| -> Option<(usize, usize)> {
            let letters = relators[r].letters();
            let mut unknown = letters.iter().enumerate().filter(|(_, l)| !known[l.gen]);
            let (pos, l) = unknown.next()?;
            if unknown.next().is_some() {
                return None;
            }
            Some((l.gen, pos))
        };
        let close = |known: &mut Vec<bool>, steps: Option<&mut Vec<Step>>| -> usize {
            let mut added = Vec::new();
            loop {
                let mut progress = false;
                for r in 0..relators.len() {
                    if let Some((gen, pos)) = single_unknown(known, r) {
                        known[gen] = true;
                        added.push(Step::Derive { gen, relator: r, pos });
                        progress = true;
                    }
                }
                if !progress {
                    break;
                }
            }
            let n = added.len();
            if let Some(steps) = steps {
                steps.extend(added);
            }
            n
        };

        let mut known = vec![false; g];
        let mut steps = Vec::new();
        while known.iter().any(|k| !k) {
            let best = (0..g)
                .filter(|&x| !known[x])
                .max_by_key(|&x| {
                    let mut trial = known.clone();
                    trial[x] = true;
                    (close(&mut trial, None), std::cmp::Reverse(x))
                })
                .unwrap();
            known[best] = true;
            steps.push(Step::Branch(best));
            close(&mut known, Some(&mut steps));
        }

        // A relator is checked right after the step that makes all its
        // generators known, unless that step derived it from this relator.
        let mut known = vec![false; g];
        let mut done = vec![false; relators.len()];
        let mut checks = Vec::with_capacity(steps.len());
        for step in &steps {
            let (gen, source) = match *step {
                Step::Branch(gen) => (gen, None),
                Step::Derive { gen, relator, .. } => (gen, Some(relator)),
            };
            known[gen] = true;
            let mut now = Vec::new();
            for (r, word) in relators.iter().enumerate() {
                if done[r] || !word.letters().iter().all(|l| known[l.gen]) {
                    continue;
                }
                done[r] = true;
                if Some(r) != source && !word.is_empty() {
                    now.push(r);
                }
            }
            checks.push(now);
        }
        SearchPlan { steps, checks }
    }
}

struct Search<'a> {
    p: &'a GroupPresentation,
    plan: SearchPlan,
    candidates: Vec<Perm>,
    opts: &'a SearchOptions,
    images: Vec<Perm>,
    found: Vec<PermAssignment>,
    nodes: u64,
    truncated: bool,
    exhausted: bool,
}

impl Search<'_> {
    fn word_value(&self, r: usize, range: std::ops::Range<usize>) -> Perm {
        let letters = &self.p.relators()[r].letters()[range];
        let mut acc = identity_perm(self.opts.degree);
        for l in letters {
            let img = &self.images[l.gen];
            acc = if l.exp > 0 { compose(&acc, img) } else { compose(&acc, &invert(img)) };
        }
        acc
    }

    fn relator_holds(&self, r: usize) -> bool {
        let len = self.p.relators()[r].len();
        self.word_value(r, 0..len).iter().enumerate().all(|(i, &j)| i == j)
    }

    fn stopped(&self) -> bool {
        self.truncated || self.exhausted
    }

    fn run(&mut self, step: usize) {
        if self.stopped() {
            return;
        }
        if step == self.plan.steps.len() {
            let a = PermAssignment { n: self.opts.degree, images: self.images.clone() };
            if self.opts.distinct_up_to_conjugacy && a.conjugacy_canonical() != a {
                return;
            }
            if self.opts.surjective_only && !a.is_surjective() {
                return;
            }
            if self.opts.limit.is_some_and(|lim| self.found.len() >= lim) {
                self.truncated = true;
                return;
            }
            self.found.push(a);
            return;
        }
        match self.plan.steps[step] {
            Step::Branch(gen) => {
                for ci in 0..self.candidates.len() {
                    if self.opts.max_nodes.is_some_and(|max| self.nodes >= max) {
                        self.exhausted = true;
                        return;
                    }
                    self.nodes += 1;
                    self.images[gen] = self.candidates[ci].clone();
                    if self.plan.checks[step].iter().all(|&r| self.relator_holds(r)) {
                        self.run(step + 1);
                    }
                    if self.stopped() {
                        return;
                    }
                }
            }
            Step::Derive { gen, relator, pos } => {
                // r = A x^e B = 1  =>  x^e = (B A)^-1
                let len = self.p.relators()[relator].len();
                let exp = self.p.relators()[relator].letters()[pos].exp;
                let a = self.word_value(relator, 0..pos);
                let b = self.word_value(relator, pos + 1..len);
                let ba = compose(&b, &a);
                let x = if exp > 0 { invert(&ba) } else { ba };
                if self.opts.transpositions_only && !is_transposition(&x) {
                    return;
                }
                self.images[gen] = x;
                if self.plan.checks[step].iter().all(|&r| self.relator_holds(r)) {
                    self.run(step + 1);
                }
            }
        }
    }
}

/// All homomorphisms from the group of `p` to `S_n` (subject to the options),
/// sorted lexicographically by image lists.
pub fn enumerate_perm_reps(p: &GroupPresentation, opts: &SearchOptions) -> Enumeration {
    let n = opts.degree;
    assert!(n >= 1, "symmetric group degree must be positive");
    let candidates: Vec<Perm> = all_perms(n)
        .into_iter()
        .filter(|c| !opts.transpositions_only || is_transposition(c))
        .collect();
    let mut search = Search {
        p,
        plan: SearchPlan::new(p),
        candidates,
        opts,
        images: vec![identity_perm(n); p.generator_count()],
        found: Vec::new(),
        nodes: 0,
        truncated: false,
        exhausted: false,
    };
    search.run(0);
    let mut assignments = search.found;
    assignments.sort();
    let surjective_count = assignments.iter().filter(|a| a.is_surjective()).count();
    Enumeration {
        assignments,
        surjective_count,
        truncated: search.truncated,
        budget_exhausted: search.exhausted,
        nodes: search.nodes,
    }
}

/// The trivial one-dimensional representation followed by every permutation
/// representation of degree `2..=max_degree`.
#[derive(Clone, Debug)]
pub struct RepFamily {
    pub reps: Vec<MatrixRep>,
    /// Some degree's search ran out of nodes; the family is incomplete.
    pub budget_exhausted: bool,
}

pub fn perm_family(p: &GroupPresentation, max_degree: usize, max_nodes: Option<u64>) -> RepFamily {
    perm_family_with(p, max_degree, max_nodes, false)
}

pub fn perm_family_with(
    p: &GroupPresentation,
    max_degree: usize,
    max_nodes: Option<u64>,
    distinct_up_to_conjugacy: bool,
) -> RepFamily {
    let mut reps = vec![MatrixRep::trivial(p, 1)];
    let mut budget_exhausted = false;
    for n in 2..=max_degree {
        let mut opts = SearchOptions::new(n);
        opts.max_nodes = max_nodes;
        opts.distinct_up_to_conjugacy = distinct_up_to_conjugacy;
        let e = enumerate_perm_reps(p, &opts);
        budget_exhausted |= e.budget_exhausted;
        for a in &e.assignments {
            reps.push(perm_to_matrix(p, a).expect("enumerated assignments are homomorphisms"));
        }
    }
    RepFamily { reps, budget_exhausted }
}

/// Writes `k <k>` followed by one row-major line of rationals per generator.
pub fn write_rep_file(rep: &MatrixRep) -> String {
    let mut out = format!("k {}\n", rep.k());
    for m in rep.images() {
        let parts: Vec<String> = m.entries().iter().map(ToString::to_string).collect();
        out.push_str(&parts.join(" "));
        out.push('\n');
    }
    out
}

/// Reads the format produced by [`write_rep_file`]; blank lines and `#`
/// comments are ignored. The result is validated against `p`.
pub fn read_rep_file(text: &str, p: &GroupPresentation) -> Result<MatrixRep, RepError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let fmt_err = |line: usize, msg: &str| RepError::Format { line, msg: msg.to_string() };
    let (hline, header) = lines.next().ok_or_else(|| fmt_err(0, "empty file"))?;
    let k = match header.split_whitespace().collect::<Vec<_>>().as_slice() {
        ["k", n] => n.parse::<usize>().ok().filter(|&k| k > 0).ok_or_else(|| fmt_err(hline, "bad dimension"))?,
        _ => return Err(fmt_err(hline, "expected `k <dimension>`")),
    };
    let mut images = Vec::new();
    for (line, content) in lines {
        let entries = content
            .split_whitespace()
            .map(|tok| parse_rational(tok).map_err(|_| fmt_err(line, &format!("bad rational `{tok}`"))))
            .collect::<Result<Vec<_>, _>>()?;
        if entries.len() != k * k {
            return Err(fmt_err(line, &format!("expected {} entries, found {}", k * k, entries.len())));
        }
        images.push(QMatrix::from_vec(k, k, entries));
    }
    if images.len() != p.generator_count() {
        return Err(fmt_err(
            0,
            &format!("expected {} generator images, found {}", p.generator_count(), images.len()),
        ));
    }
    MatrixRep::for_presentation(p, images, "file")
}
