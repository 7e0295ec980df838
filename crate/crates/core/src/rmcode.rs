//! Matrix and vector rank-metric codes.
//!
//! A matrix code is an F_q-subspace of n x m matrices, stored through its
//! canonical flattened row space so equal codes compare equal. The subcode
//! C(U) of codewords with column space inside U is computed by linear algebra
//! (an annihilator system over the k coefficients), never by codeword
//! enumeration; enumeration is reserved for distributions and distances and
//! is budget-guarded.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::json;

use crate::error::{Error, Result};
use crate::gf::{poly_irreducible_over, ExtBasis, Field};
use crate::linalg::Mat;
use crate::subspace::{gaussian_binom, lattice, Subspace};
use crate::{par, Rational};

/// F_q-linear rank-metric code in F_q^{n x m}.
#[derive(Clone, PartialEq, Eq)]
pub struct MatrixCode {
    n: usize,
    m: usize,
    field: Field,
    /// Canonical basis: the unflattened rows of the RREF of the flattened
    /// generators.
    basis: Vec<Mat>,
    flat: Subspace,
}

/// Codeword counts by rank, exact.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankDistribution {
    pub counts: Vec<BigUint>,
}

impl RankDistribution {
    pub fn total(&self) -> BigUint {
        self.counts.iter().sum()
    }

    pub fn min_positive_rank(&self) -> Option<usize> {
        (1..self.counts.len()).find(|&i| !self.counts[i].is_zero())
    }
}

/// Right idealizer R(C) = {B : CB <= C} with subfield containment flags.
#[derive(Clone, Debug)]
pub struct RightIdealizer {
    pub basis: Vec<Mat>,
    /// For each divisor e > 1 of m: does R(C) contain a field of order q^e?
    pub subfield_flags: std::collections::BTreeMap<u32, bool>,
}

impl RightIdealizer {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Right GF(q^m)-linearity is containment of the full-degree subfield.
    pub fn is_extension_linear(&self, m: u32) -> bool {
        *self.subfield_flags.get(&m).unwrap_or(&false)
    }
}

/// One MacWilliams identity instance, both sides exact.
#[derive(Clone, Debug)]
pub struct MacWilliamsCheck {
    pub r: usize,
    pub lhs: BigUint,
    pub rhs: BigRational,
    pub equal: bool,
}

impl MatrixCode {
    pub fn from_generators(field: &Field, n: usize, m: usize, gens: &[Mat]) -> Result<MatrixCode> {
        for g in gens {
            if g.rows() != n || g.cols() != m || g.field() != field {
                return Err(Error::ShapeMismatch(format!(
                    "generator {}x{} over GF({}), expected {}x{} over GF({})",
                    g.rows(),
                    g.cols(),
                    g.field().q(),
                    n,
                    m,
                    field.q()
                )));
            }
        }
        let rows: Vec<Vec<u16>> = gens.iter().map(|g| g.flatten()).collect();
        let flat = if rows.is_empty() {
            Subspace::zero(field, n * m)
        } else {
            Subspace::from_rows(field, n * m, &rows)
        };
        Ok(Self::from_flat(flat, n, m))
    }

    /// Reinterpret a canonical subspace of F_q^{nm} as a code.
    pub fn from_flat(flat: Subspace, n: usize, m: usize) -> MatrixCode {
        assert_eq!(flat.ambient(), n * m);
        let field = flat.field().clone();
        let basis = (0..flat.dim())
            .map(|i| Mat::from_flat(&field, n, m, flat.basis().row(i)).unwrap())
            .collect();
        MatrixCode {
            n,
            m,
            field,
            basis,
            flat,
        }
    }

    pub fn zero(field: &Field, n: usize, m: usize) -> MatrixCode {
        Self::from_flat(Subspace::zero(field, n * m), n, m)
    }

    pub fn full(field: &Field, n: usize, m: usize) -> MatrixCode {
        Self::from_flat(Subspace::full(field, n * m), n, m)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.flat.dim()
    }

    #[inline]
    pub fn field(&self) -> &Field {
        &self.field
    }

    #[inline]
    pub fn basis(&self) -> &[Mat] {
        &self.basis
    }

    #[inline]
    pub fn flat(&self) -> &Subspace {
        &self.flat
    }

    pub fn contains(&self, mat: &Mat) -> bool {
        self.flat.contains(&mat.flatten())
    }

    /// Number of codewords as a big integer.
    pub fn size(&self) -> BigUint {
        BigUint::from(self.field.q()).pow(self.dim() as u32)
    }

    pub fn transposed(&self) -> MatrixCode {
        let gens: Vec<Mat> = self.basis.iter().map(|b| b.transpose()).collect();
        MatrixCode::from_generators(&self.field, self.m, self.n, &gens).unwrap()
    }

    /// C(U): codewords whose column space lies in U, by solving the
    /// annihilator system H M = 0 with H spanning U^perp.
    pub fn subcode(&self, u: &Subspace) -> Result<MatrixCode> {
        if u.ambient() != self.n {
            return Err(Error::AmbientMismatch(u.ambient(), self.n));
        }
        let k = self.dim();
        if k == 0 {
            return Ok(self.clone());
        }
        let h = u.orth();
        if h.dim() == 0 {
            return Ok(self.clone());
        }
        let f = &self.field;
        // rows: one equation per (row of H) x (column index); cols: k coeffs
        let mut sys = Mat::zero(f, h.dim() * self.m, k);
        for (i, b) in self.basis.iter().enumerate() {
            let hb = h.basis().mul(b)?;
            for r in 0..h.dim() {
                for c in 0..self.m {
                    sys.set(r * self.m + c, i, hb.get(r, c));
                }
            }
        }
        let coeffs = sys.kernel();
        let gens: Vec<Mat> = (0..coeffs.rows())
            .map(|r| {
                let mut acc = Mat::zero(f, self.n, self.m);
                for (i, b) in self.basis.iter().enumerate() {
                    let c = coeffs.get(r, i);
                    if c != 0 {
                        acc = acc.add(&b.scale(c)).unwrap();
                    }
                }
                acc
            })
            .collect();
        MatrixCode::from_generators(f, self.n, self.m, &gens)
    }

    /// q-polymatroid rank of U: (k - dim C(U^perp)) / m, exact.
    pub fn rho(&self, u: &Subspace) -> Result<Rational> {
        let sub = self.subcode(&u.orth())?;
        Ok(Rational::new(
            (self.dim() - sub.dim()) as i64,
            self.m as i64,
        ))
    }

    fn enumeration_budget(&self, budget: u64) -> Result<()> {
        let size = self.size();
        if size > BigUint::from(budget) {
            return Err(Error::BudgetExceeded(format!(
                "code has {size} words, budget {budget}"
            )));
        }
        Ok(())
    }

    /// All codewords, zero first, deterministic coefficient order.
    pub fn codewords(&self) -> Vec<Mat> {
        let q = self.field.q() as u64;
        let k = self.dim();
        let total = q.pow(k as u32);
        let mut out = Vec::with_capacity(total as usize);
        let f = &self.field;
        let mut coeffs = vec![0u16; k];
        loop {
            let mut flatv = vec![0u16; self.n * self.m];
            for (i, &c) in coeffs.iter().enumerate() {
                if c != 0 {
                    let row = self.flat.basis().row(i);
                    for (x, &y) in flatv.iter_mut().zip(row) {
                        *x = f.add(*x, f.mul(c, y));
                    }
                }
            }
            out.push(Mat::from_flat(f, self.n, self.m, &flatv).unwrap());
            let mut i = 0;
            while i < k {
                coeffs[i] += 1;
                if (coeffs[i] as u64) < q {
                    break;
                }
                coeffs[i] = 0;
                i += 1;
            }
            if i == k {
                break;
            }
        }
        out
    }

    /// Exact counts of codewords by rank. Enumerates the code; the q = 2 path
    /// walks a Gray code per coefficient-prefix chunk and the chunks merge by
    /// addition, so the census is worker-count independent.
    pub fn rank_distribution(&self, budget: u64) -> Result<RankDistribution> {
        self.enumeration_budget(budget)?;
        let nranks = self.n.min(self.m) + 1;
        let counts_u64 = if self.field.q() == 2 && self.n * self.m <= 64 && self.n <= 16 {
            self.rank_counts_gray()
        } else {
            let mut counts = vec![0u64; nranks];
            for w in self.codewords() {
                counts[w.rank()] += 1;
            }
            counts
        };
        Ok(RankDistribution {
            counts: counts_u64.into_iter().map(BigUint::from).collect(),
        })
    }

    /// Gray-code enumeration over GF(2): flattened words as u64 rows.
    fn rank_counts_gray(&self) -> Vec<u64> {
        let k = self.dim();
        let n = self.n;
        let m = self.m;
        let nranks = n.min(m) + 1;
        let basis_bits: Vec<u64> = (0..k)
            .map(|i| {
                self.flat
                    .basis()
                    .row(i)
                    .iter()
                    .fold(0u64, |acc, &v| (acc << 1) | v as u64)
            })
            .collect();
        let total: u64 = 1u64 << k;
        let chunks = chunk_ranges(total, 64);
        let row_mask = if m == 64 { u64::MAX } else { (1u64 << m) - 1 };
        let rank_of = move |word: u64| -> usize {
            let mut rows = [0u64; 16];
            for (j, slot) in rows.iter_mut().enumerate().take(n) {
                *slot = (word >> (m * (n - 1 - j))) & row_mask;
            }
            bit_rank(&mut rows[..n])
        };
        par::run(
            chunks,
            move |(a, b)| {
                let mut counts = vec![0u64; nranks];
                let gray = |i: u64| i ^ (i >> 1);
                let mut word = 0u64;
                let g = gray(a);
                for (i, &bb) in basis_bits.iter().enumerate() {
                    if (g >> i) & 1 == 1 {
                        word ^= bb;
                    }
                }
                counts[rank_of(word)] += 1;
                for i in a + 1..b {
                    let flip = i.trailing_zeros() as usize;
                    word ^= basis_bits[flip];
                    counts[rank_of(word)] += 1;
                }
                counts
            },
            move || vec![0u64; nranks],
            |mut x, y| {
                for (a, b) in x.iter_mut().zip(y) {
                    *a += b;
                }
                x
            },
        )
    }

    /// Minimum rank of a nonzero codeword.
    pub fn min_distance(&self, budget: u64) -> Result<usize> {
        if self.dim() == 0 {
            return Err(Error::EmptyCode);
        }
        let dist = self.rank_distribution(budget)?;
        let d = dist.min_positive_rank().expect("nonzero code");
        // Singleton bound sanity: k <= max(n,m) (min(n,m) - d + 1)
        debug_assert!(
            self.dim() <= self.n.max(self.m) * (self.n.min(self.m) - d + 1),
            "Singleton bound violated; enumeration is buggy"
        );
        Ok(d)
    }

    /// Trace-form dual: under Tr(M N^T), which flattens to the standard inner
    /// product on F_q^{nm}.
    pub fn dual(&self) -> MatrixCode {
        MatrixCode::from_flat(self.flat.orth(), self.n, self.m)
    }

    /// Evaluate both sides of the rank-metric MacWilliams identity at shift r.
    /// The dual distribution is brute-forced, so this doubles as an
    /// independent cross-check of the transcribed identity.
    pub fn macwilliams_check(&self, r: usize, budget: u64) -> Result<MacWilliamsCheck> {
        let nmin = self.n.min(self.m);
        let nmax = self.n.max(self.m);
        if r > nmin {
            return Err(Error::BadParams(format!("r = {r} > min(n,m) = {nmin}")));
        }
        let a = self.rank_distribution(budget)?;
        let b = self.dual().rank_distribution(budget)?;
        let q = BigUint::from(self.field.q());
        let t = self.dim() as i64;

        let mut lhs = BigUint::zero();
        for i in 0..=nmin {
            lhs += q.pow(((nmin - i) * r) as u32) * &a.counts[i];
        }

        let qb = BigInt::from(self.field.q());
        let qpow = |e: i64| -> BigRational {
            if e >= 0 {
                BigRational::from_integer(qb.pow(e as u32))
            } else {
                BigRational::new(BigInt::one(), qb.pow((-e) as u32))
            }
        };
        let mut rhs = BigRational::zero();
        for j in 0..=r {
            let mut inner = BigRational::zero();
            for nu in j..=r {
                let mut term = qpow(t - nmax as i64 * nu as i64);
                term *= BigRational::from_integer(BigInt::from(gaussian_binom(
                    nmin - j,
                    nu - j,
                    self.field.q(),
                )));
                term *= BigRational::from_integer(BigInt::from(gaussian_binom(
                    r,
                    nu,
                    self.field.q(),
                )));
                for s in 0..nu {
                    term *= BigRational::from_integer(qb.pow(nu as u32) - qb.pow(s as u32));
                }
                inner += term;
            }
            rhs += BigRational::from_integer(BigInt::from(b.counts[j].clone())) * inner;
        }
        let lhs_rat = BigRational::from_integer(BigInt::from(lhs.clone()));
        Ok(MacWilliamsCheck {
            r,
            lhs,
            equal: lhs_rat == rhs,
            rhs,
        })
    }

    /// Row restriction / shortening with respect to an invertible A and a
    /// proper nonempty index set I (0-based). Column mode goes through the
    /// transposed code.
    pub fn restrict_shorten(
        &self,
        a: &Mat,
        idx: &[usize],
        mode: RestrictMode,
        axis: Axis,
    ) -> Result<MatrixCode> {
        match axis {
            Axis::Rows => self.restrict_shorten_rows(a, idx, mode),
            Axis::Cols => Ok(self
                .transposed()
                .restrict_shorten_rows(a, idx, mode)?
                .transposed()),
        }
    }

    fn restrict_shorten_rows(
        &self,
        a: &Mat,
        idx: &[usize],
        mode: RestrictMode,
    ) -> Result<MatrixCode> {
        let side = self.n;
        if a.rows() != side || a.cols() != side {
            return Err(Error::ShapeMismatch(format!("A must be {side}x{side}")));
        }
        if !a.is_invertible() {
            return Err(Error::NotInvertible);
        }
        let mut sorted = idx.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.is_empty()
            || sorted.len() >= side
            || sorted.len() != idx.len()
            || *sorted.last().unwrap() >= side
        {
            return Err(Error::BadIndexSet);
        }
        let f = &self.field;
        let source: Vec<Mat> = match mode {
            RestrictMode::Restrict => self.basis.clone(),
            RestrictMode::Shorten => {
                // keep codewords with (AM) zero outside I, i.e. colsp(M) <= A^{-1} V_I
                let a_inv = a.inverse()?;
                let vi_rows: Vec<Vec<u16>> = sorted
                    .iter()
                    .map(|&i| {
                        let mut v = vec![0u16; side];
                        v[i] = 1;
                        v
                    })
                    .collect();
                let vi = Subspace::from_rows(f, side, &vi_rows);
                // column-vector action: A^{-1} V_I = rowspace(V_I A^{-T})
                let u = vi.apply(&a_inv.transpose())?;
                self.subcode(&u)?.basis
            }
        };
        let gens: Vec<Mat> = source
            .iter()
            .map(|mat| Ok(a.mul(mat)?.select_rows(&sorted)))
            .collect::<Result<_>>()?;
        MatrixCode::from_generators(f, sorted.len(), self.m, &gens)
    }

    /// The right idealizer with subfield flags for every divisor e > 1 of m.
    pub fn right_idealizer(&self) -> Result<RightIdealizer> {
        let f = &self.field;
        let m = self.m;
        let k = self.dim();
        let algebra_basis: Vec<Mat> = if k == 0 {
            // zero code: every B works
            (0..m * m)
                .map(|i| {
                    let mut b = Mat::zero(f, m, m);
                    b.set(i / m, i % m, 1);
                    b
                })
                .collect()
        } else {
            // constraints: flatten(M_i B) lies in the flat row space
            let ann = self.flat.orth();
            let mut sys = Mat::zero(f, k * ann.dim(), m * m);
            for (i, mat) in self.basis.iter().enumerate() {
                for hr in 0..ann.dim() {
                    let h = ann.basis().row(hr);
                    // coefficient of B[s][c] in <h, flatten(M_i B)>:
                    //   sum_r h[r*m + c] * M_i[r][s]
                    for s in 0..m {
                        for c in 0..m {
                            let mut acc = 0u16;
                            for rrow in 0..self.n {
                                acc = f.add(acc, f.mul(h[rrow * m + c], mat.get(rrow, s)));
                            }
                            sys.set(i * ann.dim() + hr, s * m + c, acc);
                        }
                    }
                }
            }
            let sol = sys.kernel();
            (0..sol.rows())
                .map(|r| Mat::from_flat(f, m, m, sol.row(r)).unwrap())
                .collect()
        };

        let mut flags = std::collections::BTreeMap::new();
        let divisors: Vec<u32> = (2..=m as u32).filter(|e| (m as u32).is_multiple_of(*e)).collect();
        if !divisors.is_empty() {
            let dim = algebra_basis.len() as u32;
            let size = BigUint::from(f.q()).pow(dim);
            if size > BigUint::from(1u64 << 20) {
                return Err(Error::IdealizerTooLarge(1 << 20));
            }
            for &e in &divisors {
                flags.insert(e, contains_subfield(f, &algebra_basis, e as usize));
            }
        }
        Ok(RightIdealizer {
            basis: algebra_basis,
            subfield_flags: flags,
        })
    }

    /// Almost affinity: every subcode dimension divisible by the block size.
    /// Returns the first violating subspace in lattice order, if any.
    pub fn is_almost_affine(
        &self,
        m_block: usize,
        budget: u64,
    ) -> Result<(bool, Option<Subspace>)> {
        let lat_size: BigUint = (0..=self.n)
            .map(|d| gaussian_binom(self.n, d, self.field.q()))
            .sum();
        if lat_size > BigUint::from(budget) {
            return Err(Error::BudgetExceeded(format!(
                "lattice has {lat_size} subspaces, budget {budget}"
            )));
        }
        for u in lattice(&self.field, self.n) {
            let d = self.subcode(&u)?.dim();
            if d % m_block != 0 {
                return Ok((false, Some(u)));
            }
        }
        Ok((true, None))
    }

    /// Text form: header `q n m k`, then k blocks of n digit lines separated
    /// by blank lines.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {} {} {}\n", self.field.q(), self.n, self.m, self.dim());
        for (i, b) in self.basis.iter().enumerate() {
            if i > 0 {
                s.push('\n');
            }
            s.push_str(&b.to_text());
            s.push('\n');
        }
        s
    }

    pub fn parse(text: &str) -> Result<MatrixCode> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty code file".into()))?;
        let nums: Vec<usize> = header
            .split_whitespace()
            .map(|t| {
                t.parse()
                    .map_err(|_| Error::Parse(format!("bad header {header:?}")))
            })
            .collect::<Result<_>>()?;
        let [q, n, m, k] = nums[..] else {
            return Err(Error::Parse("header must be `q n m k`".into()));
        };
        let field = Field::of_order(q as u32)?;
        let mut gens = Vec::with_capacity(k);
        let mut block: Vec<&str> = Vec::new();
        for line in lines.chain(std::iter::once("")) {
            if line.trim().is_empty() {
                if !block.is_empty() {
                    let mat = Mat::parse_rows(&field, &block)?;
                    if mat.rows() != n || mat.cols() != m {
                        return Err(Error::Parse(format!(
                            "block is {}x{}, expected {n}x{m}",
                            mat.rows(),
                            mat.cols()
                        )));
                    }
                    gens.push(mat);
                    block.clear();
                }
            } else {
                block.push(line);
            }
        }
        if gens.len() != k {
            return Err(Error::Parse(format!(
                "expected {k} generator blocks, found {}",
                gens.len()
            )));
        }
        MatrixCode::from_generators(&field, n, m, &gens)
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "q": self.field.q(),
            "n": self.n,
            "m": self.m,
            "k": self.dim(),
            "basis": self.basis.iter().map(|b| {
                (0..b.rows()).map(|i| b.row(i).to_vec()).collect::<Vec<_>>()
            }).collect::<Vec<_>>(),
        })
    }
}

impl std::fmt::Debug for MatrixCode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "MatrixCode[{}x{}, k={}, q={}]",
            self.n,
            self.m,
            self.dim(),
            self.field.q()
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RestrictMode {
    Restrict,
    Shorten,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    Rows,
    Cols,
}

/// Does the unital algebra spanned by `basis` contain a field with q^e
/// elements? Criterion: an element whose minimal polynomial over GF(q) is
/// irreducible of degree e.
fn contains_subfield(f: &Field, basis: &[Mat], e: usize) -> bool {
    if basis.is_empty() {
        return false;
    }
    let m = basis[0].rows();
    let q = f.q() as u64;
    let dim = basis.len();
    let mut coeffs = vec![0u16; dim];
    loop {
        let mut x = Mat::zero(f, m, m);
        for (i, &c) in coeffs.iter().enumerate() {
            if c != 0 {
                x = x.add(&basis[i].scale(c)).unwrap();
            }
        }
        if !x.is_zero() {
            if let Some(mp) = min_poly(f, &x) {
                if mp.len() == e + 1 && poly_irreducible_over(&mp, f) {
                    return true;
                }
            }
        }
        let mut i = 0;
        while i < dim {
            coeffs[i] += 1;
            if (coeffs[i] as u64) < q {
                break;
            }
            coeffs[i] = 0;
            i += 1;
        }
        if i == dim {
            break;
        }
    }
    false
}

/// Minimal polynomial of a square matrix, monic, coefficients ascending.
/// None only for the 0 x 0 matrix.
pub fn min_poly(f: &Field, x: &Mat) -> Option<Vec<u16>> {
    let m = x.rows();
    if m == 0 {
        return None;
    }
    let mut powers: Vec<Mat> = vec![Mat::identity(f, m)];
    loop {
        let rows: Vec<Vec<u16>> = powers.iter().map(|p| p.flatten()).collect();
        let span = Mat::from_rows(f, &rows);
        let next = powers.last().unwrap().mul(x).unwrap();
        if let Some(sol) = solve_linear_combination(f, &span, &next.flatten()) {
            let d = powers.len();
            let mut mp: Vec<u16> = sol.iter().map(|&c| f.neg(c)).collect();
            mp.push(1);
            debug_assert_eq!(mp.len(), d + 1);
            return Some(mp);
        }
        powers.push(next);
    }
}

/// Coefficients c with c * rows(span) = target, if consistent.
fn solve_linear_combination(f: &Field, span: &Mat, target: &[u16]) -> Option<Vec<u16>> {
    let k = span.rows();
    let cols = span.cols();
    let mut aug = Mat::zero(f, cols, k + 1);
    for i in 0..k {
        for j in 0..cols {
            aug.set(j, i, span.get(i, j));
        }
    }
    for (j, &t) in target.iter().enumerate() {
        aug.set(j, k, t);
    }
    let (rank, pivots) = aug.rref_in_place();
    if pivots.contains(&k) {
        return None; // inconsistent
    }
    let mut sol = vec![0u16; k];
    for (row, &pc) in pivots.iter().enumerate().take(rank) {
        sol[pc] = aug.get(row, k);
    }
    Some(sol)
}

/// Contiguous enumeration ranges covering [0, total), at most `max_chunks`.
pub(crate) fn chunk_ranges(total: u64, max_chunks: u64) -> Vec<(u64, u64)> {
    if total == 0 {
        return Vec::new();
    }
    let nchunks = max_chunks.min(total).max(1);
    let step = total.div_ceil(nchunks);
    (0..nchunks)
        .map(|i| (i * step, ((i + 1) * step).min(total)))
        .filter(|(a, b)| a < b)
        .collect()
}

/// Rank of GF(2) row vectors packed in u64 words; destroys the slice.
pub(crate) fn bit_rank(rows: &mut [u64]) -> usize {
    let mut rank = 0;
    for i in 0..rows.len() {
        if rows[i] == 0 {
            continue;
        }
        let pivot_bit = 63 - rows[i].leading_zeros() as usize;
        let pr = rows[i];
        for (j, row) in rows.iter_mut().enumerate() {
            if j != i && (*row >> pivot_bit) & 1 == 1 {
                *row ^= pr;
            }
        }
        rank += 1;
    }
    rank
}

/// F_{q^m}-linear vector rank-metric code given by a full-rank generator
/// matrix over the extension field.
#[derive(Clone)]
pub struct VectorCode {
    pub base: Field,
    pub ext: Field,
    pub n: usize,
    pub gen: Mat,
}

impl VectorCode {
    pub fn new(base: &Field, ext: &Field, gen: Mat) -> Result<VectorCode> {
        if base.p() != ext.p() || !ext.degree().is_multiple_of(base.degree()) {
            return Err(Error::NotASubfield(base.q(), ext.q()));
        }
        if gen.field() != ext {
            return Err(Error::FieldMismatch(gen.field().q(), ext.q()));
        }
        if gen.rank() != gen.rows() {
            return Err(Error::ShapeMismatch(
                "generator matrix must have full row rank".into(),
            ));
        }
        Ok(VectorCode {
            base: base.clone(),
            ext: ext.clone(),
            n: gen.cols(),
            gen,
        })
    }

    pub fn k(&self) -> usize {
        self.gen.rows()
    }

    pub fn block_len(&self) -> usize {
        (self.ext.degree() / self.base.degree()) as usize
    }

    /// Expand to the matrix code { Gamma(x) : x in C }; its q-matroid does not
    /// depend on the basis choice.
    pub fn expand(&self, basis: &ExtBasis) -> Result<MatrixCode> {
        if basis.emb.big != self.ext || basis.emb.small != self.base {
            return Err(Error::NotABasis);
        }
        let m = self.block_len();
        let mut gens = Vec::with_capacity(self.k() * m);
        for i in 0..self.k() {
            for &g in &basis.gamma {
                // expand g * row_i coordinatewise into an n x m matrix
                let mut mat = Mat::zero(&self.base, self.n, m);
                for j in 0..self.n {
                    let coord = self.ext.mul(g, self.gen.get(i, j));
                    for (l, &c) in basis.expand(coord).iter().enumerate() {
                        mat.set(j, l, c);
                    }
                }
                gens.push(mat);
            }
        }
        MatrixCode::from_generators(&self.base, self.n, m, &gens)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> Field {
        Field::gf(2, 1).unwrap()
    }

    fn worked_example() -> MatrixCode {
        // 3x2 over F2 with basis M1, M2, M3
        let f = f2();
        let m1 = Mat::from_rows(&f, &[vec![1, 0], vec![0, 0], vec![0, 0]]);
        let m2 = Mat::from_rows(&f, &[vec![0, 0], vec![1, 0], vec![0, 1]]);
        let m3 = Mat::from_rows(&f, &[vec![0, 1], vec![0, 0], vec![1, 0]]);
        MatrixCode::from_generators(&f, 3, 2, &[m1, m2, m3]).unwrap()
    }

    #[test]
    fn code_make_examples() {
        let f = f2();
        let zero = MatrixCode::from_generators(&f, 2, 2, &[Mat::zero(&f, 2, 2)]).unwrap();
        assert_eq!(zero.dim(), 0);
        let id = MatrixCode::from_generators(&f, 3, 3, &[Mat::identity(&f, 3)]).unwrap();
        assert_eq!(id.dim(), 1);
        assert_eq!(worked_example().dim(), 3);
    }

    #[test]
    fn subcode_examples() {
        let f = f2();
        let c = worked_example();
        let full = Subspace::full(&f, 3);
        assert_eq!(c.subcode(&full).unwrap(), c);
        let zero = Subspace::zero(&f, 3);
        assert_eq!(c.subcode(&zero).unwrap().dim(), 0);
        let e3 = Subspace::from_rows(&f, 3, &[vec![0, 0, 1]]);
        assert_eq!(c.subcode(&e3).unwrap().dim(), 0);
        let e12 = Subspace::from_rows(&f, 3, &[vec![1, 0, 0], vec![0, 1, 0]]);
        assert_eq!(c.subcode(&e12).unwrap().dim(), 1);
        // oracle: brute-force over all 8 codewords
        let brute = c
            .codewords()
            .into_iter()
            .filter(|w| {
                (0..2).all(|col| {
                    let colv: Vec<u16> = (0..3).map(|r| w.get(r, col)).collect();
                    e12.contains(&colv)
                })
            })
            .count();
        assert_eq!(brute, 2); // dim 1
    }

    #[test]
    fn rho_examples() {
        let f = f2();
        let c = worked_example();
        assert_eq!(c.rho(&Subspace::zero(&f, 3)).unwrap(), Rational::new(0, 1));
        let e12 = Subspace::from_rows(&f, 3, &[vec![1, 0, 0], vec![0, 1, 0]]);
        assert_eq!(c.rho(&e12).unwrap(), Rational::new(3, 2));
    }

    #[test]
    fn min_distance_examples() {
        let f = f2();
        let id = MatrixCode::from_generators(&f, 3, 3, &[Mat::identity(&f, 3)]).unwrap();
        assert_eq!(id.min_distance(1 << 24).unwrap(), 3);
        let mut e11 = Mat::zero(&f, 2, 2);
        e11.set(0, 0, 1);
        let ce11 = MatrixCode::from_generators(&f, 2, 2, &[e11]).unwrap();
        assert_eq!(ce11.min_distance(1 << 24).unwrap(), 1);
        assert!(MatrixCode::zero(&f, 2, 2).min_distance(1 << 24).is_err());
    }

    #[test]
    fn distribution_and_gray_path_agree() {
        let f3 = Field::gf(3, 1).unwrap();
        let g = Mat::from_rows(&f3, &[vec![1, 2], vec![0, 1]]);
        let c3 = MatrixCode::from_generators(&f3, 2, 2, &[g]).unwrap();
        let d3 = c3.rank_distribution(1 << 20).unwrap();
        assert_eq!(d3.total(), BigUint::from(3u32));

        let c = worked_example();
        let dist = c.rank_distribution(1 << 20).unwrap();
        let mut counts = vec![0u64; 3];
        for w in c.codewords() {
            counts[w.rank()] += 1;
        }
        let expect: Vec<BigUint> = counts.into_iter().map(BigUint::from).collect();
        assert_eq!(dist.counts, expect);
    }

    #[test]
    fn dual_examples() {
        let f = f2();
        let zero = MatrixCode::zero(&f, 2, 2);
        assert_eq!(zero.dual(), MatrixCode::full(&f, 2, 2));
        assert_eq!(MatrixCode::full(&f, 2, 2).dual().dim(), 0);
        let mut e11 = Mat::zero(&f, 2, 2);
        e11.set(0, 0, 1);
        let c = MatrixCode::from_generators(&f, 2, 2, &[e11]).unwrap();
        let d = c.dual();
        assert_eq!(d.dim(), 3);
        for w in d.codewords() {
            assert_eq!(w.get(0, 0), 0);
        }
        assert_eq!(d.dual(), c);
    }

    #[test]
    fn macwilliams_e11() {
        let f = f2();
        let mut e11 = Mat::zero(&f, 2, 2);
        e11.set(0, 0, 1);
        let c = MatrixCode::from_generators(&f, 2, 2, &[e11]).unwrap();
        // dual distribution derived by enumeration: (1, 5, 2)
        let dd = c.dual().rank_distribution(1 << 20).unwrap();
        assert_eq!(
            dd.counts,
            vec![BigUint::from(1u32), BigUint::from(5u32), BigUint::from(2u32)]
        );
        for r in 0..=2 {
            let chk = c.macwilliams_check(r, 1 << 20).unwrap();
            assert!(chk.equal, "r = {r}: {} != {}", chk.lhs, chk.rhs);
        }
    }

    #[test]
    fn restrict_shorten_worked_example() {
        let f = f2();
        let c = worked_example();
        let a = Mat::identity(&f, 3);
        let pi = c
            .restrict_shorten(&a, &[0, 1], RestrictMode::Restrict, Axis::Rows)
            .unwrap();
        assert_eq!(pi.dim(), 3);
        let sigma = c
            .restrict_shorten(&a, &[0, 1], RestrictMode::Shorten, Axis::Rows)
            .unwrap();
        // codewords with zero last row: {0, M1}; restriction keeps dim 1
        assert_eq!(sigma.dim(), 1);
        // first-isomorphism dimension identity:
        // dim Pi_r + dim C(A^{-1} V_{bar I}) = dim C
        let vbar = Subspace::from_rows(&f, 3, &[vec![0, 0, 1]]);
        let kernel_dim = c.subcode(&vbar).unwrap().dim();
        assert_eq!(pi.dim() + kernel_dim, c.dim());
        assert!(c
            .restrict_shorten(&a, &[], RestrictMode::Restrict, Axis::Rows)
            .is_err());
        assert!(c
            .restrict_shorten(&a, &[0, 1, 2], RestrictMode::Restrict, Axis::Rows)
            .is_err());
    }

    #[test]
    fn right_idealizer_examples() {
        let f = f2();
        let full = MatrixCode::full(&f, 2, 2);
        let r = full.right_idealizer().unwrap();
        assert_eq!(r.dim(), 4);
        assert_eq!(r.subfield_flags.get(&2), Some(&true));

        let mut e11 = Mat::zero(&f, 2, 2);
        e11.set(0, 0, 1);
        let c = MatrixCode::from_generators(&f, 2, 2, &[e11]).unwrap();
        let r = c.right_idealizer().unwrap();
        // lower-triangular-with-free-corner algebra: B12 = 0
        assert_eq!(r.dim(), 3);
        for b in &r.basis {
            assert_eq!(b.get(0, 1), 0);
        }
        assert_eq!(r.subfield_flags.get(&2), Some(&false));
    }

    #[test]
    fn expand_vector_code_worked_example() {
        let f2 = f2();
        let f4 = Field::gf(2, 2).unwrap();
        // g1 = (1,0,0), g2 = (0,1,gamma), g3 = (gamma,0,1) over F4, gamma = 2
        let gen = Mat::from_rows(&f4, &[vec![1, 0, 0], vec![0, 1, 2], vec![2, 0, 1]]);
        let vc = VectorCode::new(&f2, &f4, gen).unwrap();
        let basis = ExtBasis::new(&f2, &f4, &[1, 2]).unwrap();
        let c = vc.expand(&basis).unwrap();
        assert_eq!(c.dim(), 6);
        let m1 = Mat::from_rows(&f2, &[vec![1, 0], vec![0, 0], vec![0, 0]]);
        let m2 = Mat::from_rows(&f2, &[vec![0, 0], vec![1, 0], vec![0, 1]]);
        let m3 = Mat::from_rows(&f2, &[vec![0, 1], vec![0, 0], vec![1, 0]]);
        assert!(c.contains(&m1) && c.contains(&m2) && c.contains(&m3));
        let empty = Mat::zero(&f4, 0, 3);
        let vc0 = VectorCode::new(&f2, &f4, empty).unwrap();
        assert_eq!(vc0.expand(&basis).unwrap().dim(), 0);
    }

    #[test]
    fn almost_affine_examples() {
        let f = f2();
        let f4 = Field::gf(2, 2).unwrap();
        let gen = Mat::from_rows(&f4, &[vec![1, 0, 0], vec![0, 1, 2], vec![2, 0, 1]]);
        let vc = VectorCode::new(&f, &f4, gen).unwrap();
        let basis = ExtBasis::new(&f, &f4, &[1, 2]).unwrap();
        let c = vc.expand(&basis).unwrap();
        let (ok, w) = c.is_almost_affine(2, 1 << 20).unwrap();
        assert!(ok, "expanded F4-linear code must be 2-almost affine");
        assert!(w.is_none());

        let mut e11 = Mat::zero(&f, 2, 2);
        e11.set(0, 0, 1);
        let ce11 = MatrixCode::from_generators(&f, 2, 2, &[e11]).unwrap();
        let (ok, w) = ce11.is_almost_affine(2, 1 << 20).unwrap();
        assert!(!ok);
        let w = w.unwrap();
        assert_eq!(ce11.subcode(&w).unwrap().dim() % 2, 1);
    }

    #[test]
    fn text_roundtrip() {
        let c = worked_example();
        let t = c.to_text();
        assert!(t.starts_with("2 3 2 3\n"));
        let back = MatrixCode::parse(&t).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn min_poly_examples() {
        let f = f2();
        let id = Mat::identity(&f, 2);
        assert_eq!(min_poly(&f, &id).unwrap(), vec![1, 1]); // x + 1
        let mut x = Mat::zero(&f, 2, 2);
        x.set(0, 1, 1);
        x.set(1, 0, 1);
        x.set(1, 1, 1);
        // X^2 = X + I: minimal polynomial x^2 + x + 1
        assert_eq!(min_poly(&f, &x).unwrap(), vec![1, 1, 1]);
    }
}
