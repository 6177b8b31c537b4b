//! Smith normal form over the Laurent ring and the module computations
//! built on it: kernels, coordinates in a kernel basis, and the rank and
//! elementary divisors of a finitely presented module.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::laurent::{LaurentPoly, Rational};
use super::matrix::PolyMatrix;
use crate::error::AlgebraError;

/// `A = U * D * V` with `U`, `V` invertible over the Laurent ring and `D`
/// diagonal with `d_1 | d_2 | ... | d_r` followed by zeros.
#[derive(Clone, Debug)]
pub struct SmithForm {
    /// Nonzero diagonal entries, unit-normalized.
    pub diagonal: Vec<LaurentPoly>,
    pub d: PolyMatrix,
    pub u: PolyMatrix,
    pub v: PolyMatrix,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.diagonal.len()
    }
}

/// Working state of a reduction `P * A * Q = D`. The transforms and their
/// inverses are only maintained when requested.
struct Reduction {
    a: PolyMatrix,
    p: Option<PolyMatrix>,
    p_inv: Option<PolyMatrix>,
    q: Option<PolyMatrix>,
    q_inv: Option<PolyMatrix>,
    rank: usize,
}

impl Reduction {
    fn new(a: &PolyMatrix, left: bool, right: bool) -> Self {
        let (m, n) = (a.rows(), a.cols());
        Reduction {
            a: a.clone(),
            p: left.then(|| PolyMatrix::identity(m)),
            p_inv: left.then(|| PolyMatrix::identity(m)),
            q: right.then(|| PolyMatrix::identity(n)),
            q_inv: right.then(|| PolyMatrix::identity(n)),
            rank: 0,
        }
    }

    fn tracks_transforms(&self) -> bool {
        self.p.is_some() || self.q.is_some()
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.a.swap_rows(i, j);
        if let Some(p) = self.p.as_mut() {
            p.swap_rows(i, j);
        }
        if let Some(pi) = self.p_inv.as_mut() {
            pi.swap_cols(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.a.swap_cols(i, j);
        if let Some(q) = self.q.as_mut() {
            q.swap_cols(i, j);
        }
        if let Some(qi) = self.q_inv.as_mut() {
            qi.swap_rows(i, j);
        }
    }

    /// `row[dst] += c * row[src]`
    fn add_row(&mut self, dst: usize, src: usize, c: &LaurentPoly) {
        self.a.add_row_multiple(dst, src, c);
        if let Some(p) = self.p.as_mut() {
            p.add_row_multiple(dst, src, c);
        }
        if let Some(pi) = self.p_inv.as_mut() {
            pi.add_col_multiple(src, dst, &-c);
        }
    }

    /// `col[dst] += c * col[src]`
    fn add_col(&mut self, dst: usize, src: usize, c: &LaurentPoly) {
        self.a.add_col_multiple(dst, src, c);
        if let Some(q) = self.q.as_mut() {
            q.add_col_multiple(dst, src, c);
        }
        if let Some(qi) = self.q_inv.as_mut() {
            qi.add_row_multiple(src, dst, &-c);
        }
    }

    fn scale_row_by_unit(&mut self, row: usize, unit: &LaurentPoly) {
        let inv = unit.unit_inverse().expect("scaling by a non-unit");
        self.a.scale_row(row, unit);
        if let Some(p) = self.p.as_mut() {
            p.scale_row(row, unit);
        }
        if let Some(pi) = self.p_inv.as_mut() {
            pi.scale_col(row, &inv);
        }
    }

    fn scale_col_by_unit(&mut self, col: usize, unit: &LaurentPoly) {
        let inv = unit.unit_inverse().expect("scaling by a non-unit");
        self.a.scale_col(col, unit);
        if let Some(q) = self.q.as_mut() {
            q.scale_col(col, unit);
        }
        if let Some(qi) = self.q_inv.as_mut() {
            qi.scale_row(col, &inv);
        }
    }

    /// Rational constants are units, so rows and columns can be rescaled to
    /// coprime integer coefficients; this keeps the Euclidean steps from
    /// blowing up the coefficients.
    fn make_row_primitive(&mut self, row: usize) {
        let cols = self.a.cols();
        if let Some(c) = content((0..cols).map(|j| &self.a[(row, j)])) {
            if !c.is_one() {
                self.scale_row_by_unit(row, &LaurentPoly::constant(c.recip()));
            }
        }
    }

    fn make_col_primitive(&mut self, col: usize) {
        let rows = self.a.rows();
        if let Some(c) = content((0..rows).map(|i| &self.a[(i, col)])) {
            if !c.is_one() {
                self.scale_col_by_unit(col, &LaurentPoly::constant(c.recip()));
            }
        }
    }

    /// Best pivot (minimal breadth, then height) in the trailing block.
    fn best_in_block(&self, r: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in r..self.a.rows() {
            for j in r..self.a.cols() {
                let e = &self.a[(i, j)];
                if e.is_zero() {
                    continue;
                }
                let better = match best {
                    None => true,
                    Some(b) => e.pivot_cmp(&self.a[b]).is_lt(),
                };
                if better {
                    best = Some((i, j));
                    if e.breadth() == Some(0) && e.height() <= 2 {
                        return best;
                    }
                }
            }
        }
        best
    }

    /// Best pivot among column `r` and row `r` at or after the diagonal.
    fn best_in_cross(&self, r: usize) -> (usize, usize) {
        let mut best = (r, r);
        for i in r..self.a.rows() {
            if self.a[(i, r)].pivot_cmp(&self.a[best]).is_lt() {
                best = (i, r);
            }
        }
        for j in r..self.a.cols() {
            if self.a[(r, j)].pivot_cmp(&self.a[best]).is_lt() {
                best = (r, j);
            }
        }
        best
    }

    fn run(&mut self, enforce_divisibility: bool) -> Result<(), AlgebraError> {
        let (m, n) = (self.a.rows(), self.a.cols());
        let mut r = 0;
        while r < m.min(n) {
            let Some((pi, pj)) = self.best_in_block(r) else { break };
            self.swap_rows(r, pi);
            self.swap_cols(r, pj);
            loop {
                let mut dirty = false;
                let pivot = self.a[(r, r)].clone();
                for i in r + 1..m {
                    if self.a[(i, r)].is_zero() {
                        continue;
                    }
                    let (q, rem) = self.a[(i, r)].div_rem(&pivot)?;
                    self.add_row(i, r, &-q);
                    self.make_row_primitive(i);
                    dirty |= !rem.is_zero();
                }
                for j in r + 1..n {
                    if self.a[(r, j)].is_zero() {
                        continue;
                    }
                    let (q, rem) = self.a[(r, j)].div_rem(&pivot)?;
                    self.add_col(j, r, &-q);
                    self.make_col_primitive(j);
                    dirty |= !rem.is_zero();
                }
                if dirty {
                    let (bi, bj) = self.best_in_cross(r);
                    self.swap_rows(r, bi);
                    self.swap_cols(r, bj);
                    continue;
                }
                if enforce_divisibility && !pivot.is_unit() {
                    let offender = (r + 1..m)
                        .find(|&i| (r + 1..n).any(|j| !pivot.divides(&self.a[(i, j)])));
                    if let Some(i) = offender {
                        self.add_row(r, i, &LaurentPoly::one());
                        continue;
                    }
                }
                break;
            }
            let unit = self.a[(r, r)].unit_part();
            if !unit.is_one() {
                let inv = unit.unit_inverse().unwrap();
                self.scale_row_by_unit(r, &inv);
            }
            r += 1;
        }
        self.rank = r;
        Ok(())
    }

    fn diagonal(&self) -> Vec<LaurentPoly> {
        (0..self.rank).map(|i| self.a[(i, i)].clone()).collect()
    }
}

/// Positive `c` such that the entries divided by `c` have coprime integer
/// coefficients; `None` if all entries vanish.
fn content<'a>(entries: impl Iterator<Item = &'a LaurentPoly>) -> Option<Rational> {
    let mut num = BigInt::zero();
    let mut den = BigInt::one();
    for p in entries {
        for c in p.coeffs().iter().filter(|c| !c.is_zero()) {
            num = num.gcd(c.numer());
            den = den.lcm(c.denom());
        }
    }
    (!num.is_zero()).then(|| Rational::new(num, den))
}

/// Turns a list of nonzero diagonal entries into a divisibility chain by
/// repeatedly replacing pairs with (gcd, lcm). Preserves the product and the
/// isomorphism type of the quotient module.
fn divisibility_chain(mut diag: Vec<LaurentPoly>) -> Vec<LaurentPoly> {
    for i in 0..diag.len() {
        for j in i + 1..diag.len() {
            if diag[i].divides(&diag[j]) {
                continue;
            }
            let g = diag[i].gcd(&diag[j]);
            let l = (&diag[i] * &diag[j]).div_exact(&g).expect("gcd divides product");
            diag[i] = g;
            diag[j] = l.normalize_unit();
        }
    }
    diag
}

/// Full Smith normal form with both transforms.
pub fn smith_normal_form(a: &PolyMatrix) -> SmithForm {
    let mut red = Reduction::new(a, true, true);
    red.run(true).expect("pivots are nonzero");
    let diagonal = red.diagonal();
    SmithForm {
        d: PolyMatrix::diagonal(a.rows(), a.cols(), &diagonal),
        diagonal,
        u: red.p_inv.take().unwrap(),
        v: red.q_inv.take().unwrap(),
    }
}

/// Nonzero invariant factors only, in divisibility order, unit-normalized.
pub fn invariant_factors(a: &PolyMatrix) -> Vec<LaurentPoly> {
    let mut red = Reduction::new(a, false, false);
    red.run(false).expect("pivots are nonzero");
    debug_assert!(!red.tracks_transforms());
    divisibility_chain(red.diagonal())
}

/// Rank over the Laurent ring (equivalently over its fraction field).
pub fn rank(a: &PolyMatrix) -> usize {
    let mut red = Reduction::new(a, false, false);
    red.run(false).expect("pivots are nonzero");
    red.rank
}

/// A free basis of `ker A` together with the left inverse that reads off
/// coordinates of kernel vectors in that basis.
#[derive(Clone, Debug)]
pub struct Kernel {
    pub basis: PolyMatrix,
    coords: PolyMatrix,
    image_rank: usize,
    complement: PolyMatrix,
}

impl Kernel {
    pub fn of(a: &PolyMatrix) -> Self {
        let n = a.cols();
        let mut red = Reduction::new(a, false, true);
        red.run(false).expect("pivots are nonzero");
        let r = red.rank;
        let q = red.q.take().unwrap();
        let q_inv = red.q_inv.take().unwrap();
        let free: Vec<usize> = (r..n).collect();
        Kernel {
            basis: q.select_columns(&free),
            coords: q_inv.submatrix(r..n, 0..n),
            image_rank: r,
            complement: q_inv.submatrix(0..r, 0..n),
        }
    }

    pub fn dimension(&self) -> usize {
        self.basis.cols()
    }

    /// Coordinates `M` with `basis * M = b`; fails if some column of `b`
    /// is not in the kernel.
    pub fn coordinates(&self, b: &PolyMatrix) -> Result<PolyMatrix, AlgebraError> {
        let outside = self.complement.checked_mul(b)?;
        if let Some(col) = (0..b.cols()).find(|&j| (0..self.image_rank).any(|i| !outside[(i, j)].is_zero())) {
            return Err(AlgebraError::NotInSpan { column: col });
        }
        let m = self.coords.checked_mul(b)?;
        if &self.basis.checked_mul(&m)? != b {
            return Err(AlgebraError::NotInSpan { column: 0 });
        }
        Ok(m)
    }
}

/// Columns forming a free basis of `ker A` (possibly none).
pub fn kernel_basis(a: &PolyMatrix) -> PolyMatrix {
    Kernel::of(a).basis
}

/// Solves `K * M = B` exactly for `K` of full column rank.
pub fn express_in_basis(k: &PolyMatrix, b: &PolyMatrix) -> Result<PolyMatrix, AlgebraError> {
    if k.rows() != b.rows() {
        return Err(AlgebraError::Dimension(format!(
            "basis has {} rows, target has {}",
            k.rows(),
            b.rows()
        )));
    }
    let n = k.cols();
    let mut red = Reduction::new(k, true, true);
    red.run(false)?;
    if red.rank < n {
        return Err(AlgebraError::Dimension("basis is not of full column rank".into()));
    }
    // P K Q = D  =>  D (Q^-1 M) = P B
    let pb = red.p.as_ref().unwrap().checked_mul(b)?;
    let mut z = PolyMatrix::zeros(n, b.cols());
    for j in 0..b.cols() {
        for i in 0..pb.rows() {
            let y = &pb[(i, j)];
            if i < n {
                z[(i, j)] = y.div_exact(&red.a[(i, i)]).ok_or(AlgebraError::NotInSpan { column: j })?;
            } else if !y.is_zero() {
                return Err(AlgebraError::NotInSpan { column: j });
            }
        }
    }
    let m = red.q.as_ref().unwrap().checked_mul(&z)?;
    if &k.checked_mul(&m)? != b {
        return Err(AlgebraError::NotInSpan { column: 0 });
    }
    Ok(m)
}

/// Rank and elementary divisors of the module `Λ^a / im M`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleInvariants {
    pub rank: usize,
    /// Non-unit elementary divisors, unit-normalized, in divisibility order.
    pub divisors: Vec<LaurentPoly>,
}

impl ModuleInvariants {
    /// Order of the torsion submodule.
    pub fn torsion_order(&self) -> LaurentPoly {
        self.divisors.iter().fold(LaurentPoly::one(), |acc, d| &acc * d).normalize_unit()
    }

    /// Order of the module: zero when the module has positive rank.
    pub fn order(&self) -> LaurentPoly {
        if self.rank > 0 {
            LaurentPoly::zero()
        } else {
            self.torsion_order()
        }
    }
}

/// `m` presents `Λ^{m.rows()} / im m`.
pub fn module_invariants(m: &PolyMatrix) -> ModuleInvariants {
    let factors = invariant_factors(m);
    ModuleInvariants {
        rank: m.rows() - factors.len(),
        divisors: factors.into_iter().filter(|d| !d.is_unit()).collect(),
    }
}

/// Normalized `gcd` of all `size x size` minors; used as a cross-check of the
/// invariant factors (`d_1 * ... * d_size` up to units).
pub fn minors_gcd(a: &PolyMatrix, size: usize) -> Result<LaurentPoly, AlgebraError> {
    if size == 0 {
        return Ok(LaurentPoly::one());
    }
    let rows: Vec<Vec<usize>> = combinations(a.rows(), size);
    let cols: Vec<Vec<usize>> = combinations(a.cols(), size);
    let mut g = LaurentPoly::zero();
    for rs in &rows {
        for cs in &cols {
            let mut sub = PolyMatrix::zeros(size, size);
            for (oi, &i) in rs.iter().enumerate() {
                for (oj, &j) in cs.iter().enumerate() {
                    sub[(oi, oj)] = a[(i, j)].clone();
                }
            }
            let det = sub.determinant()?;
            g = if g.is_zero() { det.normalize_unit() } else { g.gcd(&det) };
        }
    }
    Ok(g)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}
