//! 3-tensors over GF(q): axis multiplications, slice spaces, generator
//! tensors, the tensor form of the code rank function, the extended additive
//! Hamming-metric code and projectivization of q-polymatroids.

use std::sync::Arc;

use dashmap::DashMap;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::error::{Error, Result};
use crate::gf::Field;
use crate::linalg::Mat;
use crate::qmatroid::QMatroid;
use crate::rmcode::MatrixCode;
use crate::subspace::{projective_points, Subspace};
use crate::{par, Rational};

/// Element of F_q^{k x n x m}, entries indexed (i, j, l) row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct Tensor3 {
    k: usize,
    n: usize,
    m: usize,
    field: Field,
    entries: Vec<u16>,
}

impl Tensor3 {
    pub fn zero(field: &Field, k: usize, n: usize, m: usize) -> Tensor3 {
        Tensor3 {
            k,
            n,
            m,
            field: field.clone(),
            entries: vec![0; k * n * m],
        }
    }

    /// Build from first-axis slices (each n x m).
    pub fn from_slices(field: &Field, slices: &[Mat]) -> Result<Tensor3> {
        if slices.is_empty() {
            return Err(Error::ShapeMismatch("no slices".into()));
        }
        let n = slices[0].rows();
        let m = slices[0].cols();
        let mut t = Tensor3::zero(field, slices.len(), n, m);
        for (i, s) in slices.iter().enumerate() {
            if s.rows() != n || s.cols() != m || s.field() != field {
                return Err(Error::ShapeMismatch("ragged slices".into()));
            }
            for j in 0..n {
                for l in 0..m {
                    t.set(i, j, l, s.get(j, l));
                }
            }
        }
        Ok(t)
    }

    #[inline]
    pub fn dims(&self) -> (usize, usize, usize) {
        (self.k, self.n, self.m)
    }

    #[inline]
    pub fn field(&self) -> &Field {
        &self.field
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, l: usize) -> u16 {
        self.entries[(i * self.n + j) * self.m + l]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, l: usize, v: u16) {
        self.entries[(i * self.n + j) * self.m + l] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&v| v == 0)
    }

    fn axis_len(&self, axis: usize) -> usize {
        match axis {
            1 => self.k,
            2 => self.n,
            3 => self.m,
            _ => panic!("axis must be 1, 2 or 3"),
        }
    }

    /// Coordinate slice along an axis: axis 1 gives n x m, axis 2 gives
    /// k x m, axis 3 gives k x n.
    pub fn slice(&self, axis: usize, index: usize) -> Mat {
        match axis {
            1 => Mat::from_fn(&self.field, self.n, self.m, |j, l| self.get(index, j, l)),
            2 => Mat::from_fn(&self.field, self.k, self.m, |i, l| self.get(i, index, l)),
            3 => Mat::from_fn(&self.field, self.k, self.n, |i, j| self.get(i, j, index)),
            _ => panic!("axis must be 1, 2 or 3"),
        }
    }

    /// Axis contraction with a matrix whose column count matches the axis
    /// length; the axis length becomes the row count of `a`.
    pub fn axis_mul(&self, a: &Mat, axis: usize) -> Result<Tensor3> {
        let len = self.axis_len(axis);
        if a.cols() != len || a.field() != &self.field {
            return Err(Error::ShapeMismatch(format!(
                "axis {axis} has length {len}, matrix is {}x{}",
                a.rows(),
                a.cols()
            )));
        }
        let s = a.rows();
        let f = &self.field;
        let (k, n, m) = (self.k, self.n, self.m);
        let mut out = match axis {
            1 => Tensor3::zero(f, s, n, m),
            2 => Tensor3::zero(f, k, s, m),
            _ => Tensor3::zero(f, k, n, s),
        };
        match axis {
            1 => {
                for t in 0..s {
                    for i in 0..k {
                        let c = a.get(t, i);
                        if c == 0 {
                            continue;
                        }
                        for j in 0..n {
                            for l in 0..m {
                                let cur = out.get(t, j, l);
                                out.set(t, j, l, f.add(cur, f.mul(c, self.get(i, j, l))));
                            }
                        }
                    }
                }
            }
            2 => {
                for t in 0..s {
                    for j in 0..n {
                        let c = a.get(t, j);
                        if c == 0 {
                            continue;
                        }
                        for i in 0..k {
                            for l in 0..m {
                                let cur = out.get(i, t, l);
                                out.set(i, t, l, f.add(cur, f.mul(c, self.get(i, j, l))));
                            }
                        }
                    }
                }
            }
            _ => {
                for t in 0..s {
                    for l in 0..m {
                        let c = a.get(t, l);
                        if c == 0 {
                            continue;
                        }
                        for i in 0..k {
                            for j in 0..n {
                                let cur = out.get(i, j, t);
                                out.set(i, j, t, f.add(cur, f.mul(c, self.get(i, j, l))));
                            }
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// Single-row contraction, returned as a matrix.
    pub fn axis_mul_vec(&self, v: &[u16], axis: usize) -> Result<Mat> {
        let a = Mat::row_vec(&self.field, v);
        let t = self.axis_mul(&a, axis)?;
        Ok(t.slice(axis, 0))
    }

    /// Span of the coordinate slices along an axis: canonical basis and its
    /// dimension.
    pub fn slice_space(&self, axis: usize) -> (Vec<Mat>, usize) {
        let len = self.axis_len(axis);
        let (rows, cols) = match axis {
            1 => (self.n, self.m),
            2 => (self.k, self.m),
            _ => (self.k, self.n),
        };
        let flat_rows: Vec<Vec<u16>> = (0..len).map(|i| self.slice(axis, i).flatten()).collect();
        let sub = Subspace::from_rows(&self.field, rows * cols, &flat_rows);
        let d = sub.dim();
        let basis = (0..d)
            .map(|i| Mat::from_flat(&self.field, rows, cols, sub.basis().row(i)).unwrap())
            .collect();
        (basis, d)
    }

    pub fn slice_dim(&self, axis: usize) -> usize {
        self.slice_space(axis).1
    }

    pub fn is_nondegenerate(&self, axis: usize) -> bool {
        self.slice_dim(axis) == self.axis_len(axis)
    }

    /// Generator tensor of a code: slices are the canonical basis matrices.
    pub fn generator_of(code: &MatrixCode) -> Result<Tensor3> {
        if code.dim() == 0 {
            return Err(Error::EmptyCode);
        }
        Tensor3::from_slices(code.field(), code.basis())
    }

    /// The code spanned by the first slice space.
    pub fn code(&self) -> MatrixCode {
        let slices: Vec<Mat> = (0..self.k).map(|i| self.slice(1, i)).collect();
        MatrixCode::from_generators(&self.field, self.n, self.m, &slices).unwrap()
    }

    /// Deterministic standardizing matrix for U: an invertible A with
    /// U^perp = A^{-1} V_{bar I}, I = {1..dim U}. Built by completing the
    /// RREF basis of U^perp with standard vectors, completion first.
    pub fn standardizing_matrix(field: &Field, u: &Subspace) -> Result<Mat> {
        let n = u.ambient();
        let uperp = u.orth();
        let mut rows: Vec<Vec<u16>> = Vec::with_capacity(n);
        let mut span = uperp.clone();
        for i in 0..n {
            if span.dim() == n {
                break;
            }
            let mut e = vec![0u16; n];
            e[i] = 1;
            if !span.contains(&e) {
                rows.push(e.clone());
                let mut gens: Vec<Vec<u16>> = (0..span.dim())
                    .map(|r| span.basis().row_to_vec(r))
                    .collect();
                gens.push(e);
                span = Subspace::from_rows(field, n, &gens);
            }
        }
        for i in 0..uperp.dim() {
            rows.push(uperp.basis().row_to_vec(i));
        }
        let p = Mat::from_rows(field, &rows);
        p.transpose().inverse()
    }

    /// Validity of a candidate A for the rank formula at U.
    pub fn is_standardizing(field: &Field, u: &Subspace, a: &Mat) -> bool {
        let n = u.ambient();
        if a.rows() != n || a.cols() != n || !a.is_invertible() {
            return false;
        }
        let uu = u.dim();
        let uperp = u.orth();
        // A U^perp = V_bar I as column spaces: row bases transform by A^T
        let img = match uperp.apply(&a.transpose()) {
            Ok(s) => s,
            Err(_) => return false,
        };
        let vbar_rows: Vec<Vec<u16>> = (uu..n)
            .map(|i| {
                let mut v = vec![0u16; n];
                v[i] = 1;
                v
            })
            .collect();
        img == Subspace::from_rows(field, n, &vbar_rows)
    }

    /// Tensor rank function: dim ss_1(m_2(A_I, T)) / m with I = {1..dim U}
    /// and A standardizing for U.
    pub fn rho(&self, u: &Subspace) -> Result<Rational> {
        let a = Self::standardizing_matrix(&self.field, u)?;
        self.rho_with(u, &a)
    }

    /// Same, with a caller-chosen standardizing matrix (the value does not
    /// depend on the choice).
    pub fn rho_with(&self, u: &Subspace, a: &Mat) -> Result<Rational> {
        if u.ambient() != self.n {
            return Err(Error::AmbientMismatch(u.ambient(), self.n));
        }
        if !Self::is_standardizing(&self.field, u, a) {
            return Err(Error::BadParams(
                "matrix does not move U^perp to the tail coordinates".into(),
            ));
        }
        let uu = u.dim();
        if uu == 0 {
            return Ok(Rational::zero());
        }
        let a_i = a.select_rows(&(0..uu).collect::<Vec<_>>());
        let contracted = self.axis_mul(&a_i, 2)?;
        Ok(Rational::new(contracted.slice_dim(1) as i64, self.m as i64))
    }

    /// A random standardizing matrix for U, for the independence-of-choice
    /// property.
    pub fn random_standardizing_matrix(
        field: &Field,
        u: &Subspace,
        rng: &mut ChaCha20Rng,
    ) -> Result<Mat> {
        let n = u.ambient();
        let uperp = u.orth();
        let d = uperp.dim();
        loop {
            let mut rows: Vec<Vec<u16>> = (0..n - d)
                .map(|_| {
                    (0..n)
                        .map(|_| rng.gen_range(0..field.q()) as u16)
                        .collect()
                })
                .collect();
            for i in 0..d {
                rows.push(uperp.basis().row_to_vec(i));
            }
            let p = Mat::from_rows(field, &rows);
            if p.is_invertible() {
                return p.transpose().inverse();
            }
        }
    }

    /// Generator matrix of the extended additive Hamming-metric code:
    /// blocks m_2(u_i, T) over the canonical projective representatives.
    pub fn ah_generator(&self, budget: u64) -> Result<Mat> {
        let q = self.field.q() as u64;
        if q.checked_pow(self.n as u32).filter(|&t| t <= budget).is_none() {
            return Err(Error::BudgetExceeded(format!(
                "q^n = {}^{} exceeds budget {budget}",
                q, self.n
            )));
        }
        let points = projective_points(&self.field, self.n);
        let mut blocks: Vec<(usize, Mat)> = par::run(
            points.into_iter().enumerate().collect(),
            |(i, p)| vec![(i, self.axis_mul_vec(&p, 2).expect("point length n"))],
            Vec::new,
            |mut x, mut y| {
                x.append(&mut y);
                x
            },
        );
        blocks.sort_by_key(|(i, _)| *i);
        let mut g = blocks[0].1.clone();
        for (_, b) in blocks.iter().skip(1) {
            g = g.hstack(b)?;
        }
        Ok(g)
    }

    /// Text form: header `q k n m`, then k blocks of n lines of m digits.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {} {} {}\n", self.field.q(), self.k, self.n, self.m);
        for i in 0..self.k {
            if i > 0 {
                s.push('\n');
            }
            s.push_str(&self.slice(1, i).to_text());
            s.push('\n');
        }
        s
    }

    pub fn parse(text: &str) -> Result<Tensor3> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty tensor file".into()))?;
        let nums: Vec<usize> = header
            .split_whitespace()
            .map(|t| {
                t.parse()
                    .map_err(|_| Error::Parse(format!("bad header {header:?}")))
            })
            .collect::<Result<_>>()?;
        let [q, k, n, m] = nums[..] else {
            return Err(Error::Parse("header must be `q k n m`".into()));
        };
        let field = Field::of_order(q as u32)?;
        let mut slices = Vec::with_capacity(k);
        let mut block: Vec<&str> = Vec::new();
        for line in lines.chain(std::iter::once("")) {
            if line.trim().is_empty() {
                if !block.is_empty() {
                    let mat = Mat::parse_rows(&field, &block)?;
                    if mat.rows() != n || mat.cols() != m {
                        return Err(Error::Parse("slice shape mismatch".into()));
                    }
                    slices.push(mat);
                    block.clear();
                }
            } else {
                block.push(line);
            }
        }
        if slices.len() != k {
            return Err(Error::Parse(format!(
                "expected {k} slices, found {}",
                slices.len()
            )));
        }
        Tensor3::from_slices(&field, &slices)
    }
}

impl std::fmt::Debug for Tensor3 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "Tensor3[{}x{}x{}, q={}]",
            self.k,
            self.n,
            self.m,
            self.field.q()
        )
    }
}

type SetOracle = dyn Fn(u32) -> Rational + Send + Sync;

/// Polymatroid on a ground set [N] given by a rank oracle over subsets
/// (bitmask encoded), exact rational values.
#[derive(Clone)]
pub struct Polymatroid {
    ground: usize,
    name: String,
    oracle: Arc<SetOracle>,
    memo: Arc<DashMap<u32, Rational>>,
}

impl Polymatroid {
    pub fn from_oracle(
        name: impl Into<String>,
        ground: usize,
        oracle: impl Fn(u32) -> Rational + Send + Sync + 'static,
    ) -> Polymatroid {
        assert!(ground <= 31);
        Polymatroid {
            ground,
            name: name.into(),
            oracle: Arc::new(oracle),
            memo: Arc::new(DashMap::new()),
        }
    }

    #[inline]
    pub fn ground_size(&self) -> usize {
        self.ground
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn rank(&self, mask: u32) -> Rational {
        debug_assert_eq!(mask >> self.ground, 0);
        if let Some(r) = self.memo.get(&mask) {
            return *r;
        }
        let r = (self.oracle)(mask);
        self.memo.insert(mask, r);
        r
    }

    /// Projectivization of a q-polymatroid: ground set = projective points in
    /// canonical order, rank of a set = rank of the span of its points.
    pub fn projectivize(qm: &QMatroid) -> Polymatroid {
        let field = qm.field().clone();
        let n = qm.n();
        let points = projective_points(&field, n);
        let ground = points.len();
        let name = format!("Proj({})", qm.name());
        let qm = qm.clone();
        Polymatroid::from_oracle(name, ground, move |mask| {
            let rows: Vec<Vec<u16>> = (0..ground)
                .filter(|i| (mask >> i) & 1 == 1)
                .map(|i| points[i].clone())
                .collect();
            let span = Subspace::from_rows(&field, n, &rows);
            qm.rank(&span)
        })
    }

    /// Polymatroid induced by a block code generator with block width m:
    /// rank of V = dim of the projection onto the blocks in V, divided by m.
    pub fn from_block_generator(g: &Mat, m: usize) -> Result<Polymatroid> {
        if !g.cols().is_multiple_of(m) {
            return Err(Error::ShapeMismatch(format!(
                "{} columns not divisible by block width {m}",
                g.cols()
            )));
        }
        let ground = g.cols() / m;
        let name = format!("AH[{}x{} blocks of {m}]", g.rows(), ground);
        let g = g.clone();
        Ok(Polymatroid::from_oracle(name, ground, move |mask| {
            let cols: Vec<usize> = (0..ground)
                .filter(|i| (mask >> i) & 1 == 1)
                .flat_map(|i| (i * m..(i + 1) * m).collect::<Vec<_>>())
                .collect();
            if cols.is_empty() {
                return Rational::zero();
            }
            Rational::new(g.select_cols(&cols).rank() as i64, m as i64)
        }))
    }

    /// Rank equality under a point bijection. Exhaustive over all 2^N subsets
    /// for N <= 20, otherwise a seeded sample.
    pub fn compare(
        &self,
        other: &Polymatroid,
        psi: &[usize],
        scope: CompareScope,
    ) -> Result<CompareVerdict> {
        if self.ground != other.ground {
            return Err(Error::GroundMismatch(self.ground, other.ground));
        }
        if psi.len() != self.ground {
            return Err(Error::GroundMismatch(psi.len(), self.ground));
        }
        let mut seen = vec![false; self.ground];
        for &p in psi {
            if p >= self.ground || seen[p] {
                return Err(Error::BadParams("psi is not a bijection".into()));
            }
            seen[p] = true;
        }
        let map_mask = |mask: u32| -> u32 {
            let mut out = 0u32;
            for (i, &p) in psi.iter().enumerate() {
                if (mask >> i) & 1 == 1 {
                    out |= 1 << p;
                }
            }
            out
        };
        match scope {
            CompareScope::Exhaustive => {
                if self.ground > 20 {
                    return Err(Error::BudgetExceeded(format!(
                        "2^{} subsets; use sampling",
                        self.ground
                    )));
                }
                for mask in 0..(1u32 << self.ground) {
                    if self.rank(mask) != other.rank(map_mask(mask)) {
                        return Ok(CompareVerdict::Mismatch { mask });
                    }
                }
                Ok(CompareVerdict::Equal {
                    subsets_checked: 1u64 << self.ground,
                })
            }
            CompareScope::Sampled { seed, count } => {
                let mut rng = ChaCha20Rng::seed_from_u64(seed);
                let full: u64 = 1u64 << self.ground;
                for _ in 0..count {
                    let mask = (rng.gen_range(0..full)) as u32;
                    if self.rank(mask) != other.rank(map_mask(mask)) {
                        return Ok(CompareVerdict::Mismatch { mask });
                    }
                }
                Ok(CompareVerdict::Equal {
                    subsets_checked: count as u64,
                })
            }
        }
    }

    /// Integer ranks everywhere (checked over all subsets; ground <= 20).
    pub fn is_integral(&self) -> Result<bool> {
        if self.ground > 20 {
            return Err(Error::BudgetExceeded("ground set too large".into()));
        }
        Ok((0..(1u32 << self.ground)).all(|m| self.rank(m).denom().is_one()))
    }
}

impl std::fmt::Debug for Polymatroid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Polymatroid({}, N={})", self.name, self.ground)
    }
}

#[derive(Clone, Copy, Debug)]
pub enum CompareScope {
    Exhaustive,
    Sampled { seed: u64, count: usize },
}

#[derive(Clone, Debug)]
pub enum CompareVerdict {
    Equal { subsets_checked: u64 },
    Mismatch { mask: u32 },
}

impl CompareVerdict {
    pub fn equal(&self) -> bool {
        matches!(self, CompareVerdict::Equal { .. })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn f2() -> Field {
        Field::gf(2, 1).unwrap()
    }

    fn worked_example_code() -> MatrixCode {
        let f = f2();
        let m1 = Mat::from_rows(&f, &[vec![1, 0], vec![0, 0], vec![0, 0]]);
        let m2 = Mat::from_rows(&f, &[vec![0, 0], vec![1, 0], vec![0, 1]]);
        let m3 = Mat::from_rows(&f, &[vec![0, 1], vec![0, 0], vec![1, 0]]);
        MatrixCode::from_generators(&f, 3, 2, &[m1, m2, m3]).unwrap()
    }

    #[test]
    fn axis_mul_identity_and_zero() {
        let f = f2();
        let c = worked_example_code();
        let t = Tensor3::generator_of(&c).unwrap();
        let id = Mat::identity(&f, 3);
        assert_eq!(t.axis_mul(&id, 1).unwrap(), t);
        assert_eq!(t.axis_mul(&id, 2).unwrap(), t);
        let z = Mat::zero(&f, 3, 3);
        assert!(t.axis_mul(&z, 1).unwrap().is_zero());
        // with this explicit slice order, m1(e1, T) is the first slice and
        // m2(e1, T) stacks the first rows of the slices
        let m1 = Mat::from_rows(&f, &[vec![1, 0], vec![0, 0], vec![0, 0]]);
        let m2 = Mat::from_rows(&f, &[vec![0, 0], vec![1, 0], vec![0, 1]]);
        let m3 = Mat::from_rows(&f, &[vec![0, 1], vec![0, 0], vec![1, 0]]);
        let tp = Tensor3::from_slices(&f, &[m1.clone(), m2, m3]).unwrap();
        assert_eq!(tp.axis_mul_vec(&[1, 0, 0], 1).unwrap(), m1);
        assert_eq!(
            tp.axis_mul_vec(&[1, 0, 0], 2).unwrap(),
            Mat::from_rows(&f, &[vec![1, 0], vec![0, 0], vec![0, 1]])
        );
    }

    #[test]
    fn slice_spaces() {
        let f = f2();
        let z = Tensor3::zero(&f, 2, 3, 2);
        assert_eq!(z.slice_dim(1), 0);
        assert_eq!(z.slice_dim(2), 0);
        assert_eq!(z.slice_dim(3), 0);
        let c = worked_example_code();
        let t = Tensor3::generator_of(&c).unwrap();
        assert_eq!(t.slice_dim(1), 3);
        // a generator tensor of a nondegenerate code is 2- and 3-nondegenerate
        assert!(t.is_nondegenerate(2));
        assert!(t.is_nondegenerate(3));
    }

    #[test]
    fn slice_dims_match_support_sums() {
        // dim_2 = dim sum of column spaces, dim_3 = dim sum of row spaces
        let f = f2();
        let c = worked_example_code();
        let t = Tensor3::generator_of(&c).unwrap();
        let mut col_rows: Vec<Vec<u16>> = Vec::new();
        let mut row_rows: Vec<Vec<u16>> = Vec::new();
        for w in c.codewords() {
            for j in 0..w.cols() {
                col_rows.push((0..w.rows()).map(|i| w.get(i, j)).collect());
            }
            for i in 0..w.rows() {
                row_rows.push(w.row_to_vec(i));
            }
        }
        let colsum = Subspace::from_rows(&f, 3, &col_rows);
        let rowsum = Subspace::from_rows(&f, 2, &row_rows);
        assert_eq!(t.slice_dim(2), colsum.dim());
        assert_eq!(t.slice_dim(3), rowsum.dim());
    }

    #[test]
    fn generator_code_roundtrip() {
        let c = worked_example_code();
        let t = Tensor3::generator_of(&c).unwrap();
        assert_eq!(t.code(), c);
        assert!(Tensor3::generator_of(&MatrixCode::zero(&f2(), 2, 2)).is_err());
    }

    #[test]
    fn rho_worked_example() {
        let f = f2();
        let c = worked_example_code();
        let t = Tensor3::generator_of(&c).unwrap();
        let e12 = Subspace::from_rows(&f, 3, &[vec![1, 0, 0], vec![0, 1, 0]]);
        assert_eq!(t.rho(&e12).unwrap(), Rational::new(3, 2));
        assert_eq!(t.rho(&Subspace::zero(&f, 3)).unwrap(), Rational::zero());
        let full = Subspace::full(&f, 3);
        assert_eq!(t.rho(&full).unwrap(), Rational::new(3, 2));
    }

    #[test]
    fn rho_matches_code_rank_function() {
        let f = f2();
        let c = worked_example_code();
        let t = Tensor3::generator_of(&c).unwrap();
        for u in crate::subspace::lattice(&f, 3) {
            assert_eq!(t.rho(&u).unwrap(), c.rho(&u).unwrap(), "at {u:?}");
        }
    }

    #[test]
    fn rho_independent_of_standardizing_choice() {
        let f = f2();
        let c = worked_example_code();
        let t = Tensor3::generator_of(&c).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(42);
        for u in crate::subspace::lattice(&f, 3) {
            let expect = t.rho(&u).unwrap();
            for _ in 0..10 {
                let a = Tensor3::random_standardizing_matrix(&f, &u, &mut rng).unwrap();
                assert_eq!(t.rho_with(&u, &a).unwrap(), expect);
            }
        }
        // the identity does not standardize U = <e3> (U^perp = <e1,e2>
        // must land on the tail coordinates)
        let bad = Mat::identity(&f, 3);
        let e3 = Subspace::from_rows(&f, 3, &[vec![0, 0, 1]]);
        assert!(t.rho_with(&e3, &bad).is_err());
    }

    #[test]
    fn ah_generator_worked_example() {
        let f = f2();
        let c = worked_example_code();
        let t = Tensor3::generator_of(&c).unwrap();
        let g = t.ah_generator(1 << 20).unwrap();
        assert_eq!(g.rows(), 3);
        assert_eq!(g.cols(), 14); // N = 7 points, m = 2
        // n = 1: a single block
        let single = Tensor3::from_slices(&f, &[Mat::from_rows(&f, &[vec![1, 0]])]).unwrap();
        assert_eq!(single.ah_generator(1 << 20).unwrap().cols(), 2);
    }

    #[test]
    fn projectivization_matches_ah_polymatroid() {
        let f = f2();
        let c = worked_example_code();
        let t = Tensor3::generator_of(&c).unwrap();
        let qm = QMatroid::from_matrix_code(&c);
        let proj = Polymatroid::projectivize(&qm);
        let ah = Polymatroid::from_block_generator(&t.ah_generator(1 << 20).unwrap(), 2).unwrap();
        let psi: Vec<usize> = (0..7).collect();
        let verdict = proj.compare(&ah, &psi, CompareScope::Exhaustive).unwrap();
        assert!(verdict.equal());
        let pts = projective_points(&f, 3);
        let i1 = pts.iter().position(|p| p == &vec![1, 0, 0]).unwrap();
        let i2 = pts.iter().position(|p| p == &vec![0, 1, 0]).unwrap();
        let mask = (1 << i1) | (1 << i2);
        assert_eq!(proj.rank(mask), Rational::new(3, 2));
        assert_eq!(ah.rank(mask), Rational::new(3, 2));
    }

    #[test]
    fn zero_qmatroid_projectivizes_to_zero() {
        let f = f2();
        let z = QMatroid::uniform(0, 3, &f).unwrap();
        let p = Polymatroid::projectivize(&z);
        for mask in 0..(1u32 << 7) {
            assert_eq!(p.rank(mask), Rational::zero());
        }
        assert!(p.is_integral().unwrap());
    }

    #[test]
    fn compare_detects_mismatch() {
        let a = Polymatroid::from_oracle("a", 3, |m| Rational::from_integer(m.count_ones() as i64));
        let b = Polymatroid::from_oracle("b", 3, |m| {
            Rational::from_integer(m.count_ones().min(2) as i64)
        });
        let psi = vec![0, 1, 2];
        assert!(!a.compare(&b, &psi, CompareScope::Exhaustive).unwrap().equal());
        let c = Polymatroid::from_oracle("c", 2, |_| Rational::one());
        assert!(a.compare(&c, &psi, CompareScope::Exhaustive).is_err());
    }

    #[test]
    fn tensor_text_roundtrip() {
        let c = worked_example_code();
        let t = Tensor3::generator_of(&c).unwrap();
        let text = t.to_text();
        assert!(text.starts_with("2 3 3 2\n"));
        let back = Tensor3::parse(&text).unwrap();
        assert_eq!(back, t);
    }
}
