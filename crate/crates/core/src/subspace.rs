//! Subspaces of GF(q)^n in canonical (RREF) form, subspace enumeration by
//! pivot profile, Gaussian binomials and GL(n,q) iteration.
//!
//! Canonical form means two values compare equal exactly when they span the
//! same set of vectors, which is what the q-matroid memoization keys on.

use std::hash::{Hash, Hasher};

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};
use crate::gf::Field;
use crate::linalg::Mat;

/// A subspace of GF(q)^n, stored as an RREF basis with no zero rows.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Subspace {
    ambient: usize,
    basis: Mat,
}

impl Subspace {
    /// Canonical subspace spanned by the rows of `generators`.
    pub fn from_generators(generators: &Mat) -> Subspace {
        let (r, rank) = generators.rref();
        let basis = if rank == 0 {
            Mat::zero(generators.field(), 0, generators.cols())
        } else {
            let rows: Vec<Vec<u16>> = (0..rank).map(|i| r.row_to_vec(i)).collect();
            Mat::from_rows(generators.field(), &rows)
        };
        Subspace {
            ambient: generators.cols(),
            basis,
        }
    }

    pub fn from_rows(field: &Field, ambient: usize, rows: &[Vec<u16>]) -> Subspace {
        if rows.is_empty() {
            return Subspace::zero(field, ambient);
        }
        Subspace::from_generators(&Mat::from_rows(field, rows))
    }

    pub fn zero(field: &Field, ambient: usize) -> Subspace {
        Subspace {
            ambient,
            basis: Mat::zero(field, 0, ambient),
        }
    }

    pub fn full(field: &Field, ambient: usize) -> Subspace {
        Subspace {
            ambient,
            basis: Mat::identity(field, ambient),
        }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    #[inline]
    pub fn ambient(&self) -> usize {
        self.ambient
    }

    #[inline]
    pub fn field(&self) -> &Field {
        self.basis.field()
    }

    #[inline]
    pub fn basis(&self) -> &Mat {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn contains(&self, v: &[u16]) -> bool {
        // reduce v against the RREF basis
        let f = self.field();
        let mut v = v.to_vec();
        for i in 0..self.dim() {
            let lead = (0..self.ambient)
                .find(|&j| self.basis.get(i, j) != 0)
                .expect("no zero rows");
            let c = v[lead];
            if c != 0 {
                for (j, slot) in v.iter_mut().enumerate() {
                    *slot = f.sub(*slot, f.mul(c, self.basis.get(i, j)));
                }
            }
        }
        v.iter().all(|&x| x == 0)
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.ambient == other.ambient
            && self.dim() <= other.dim()
            && (0..self.dim()).all(|i| other.contains(self.basis.row(i)))
    }

    /// Orthogonal complement with respect to the standard inner product.
    pub fn orth(&self) -> Subspace {
        if self.dim() == 0 {
            return Subspace::full(self.field(), self.ambient);
        }
        Subspace::from_generators(&self.basis.kernel())
    }

    /// Sum and intersection, via the Zassenhaus block trick.
    pub fn sum_intersect(&self, other: &Subspace) -> Result<(Subspace, Subspace)> {
        if self.ambient != other.ambient {
            return Err(Error::AmbientMismatch(self.ambient, other.ambient));
        }
        let f = self.field();
        let n = self.ambient;
        let d1 = self.dim();
        let d2 = other.dim();
        if d1 == 0 {
            return Ok((other.clone(), Subspace::zero(f, n)));
        }
        if d2 == 0 {
            return Ok((self.clone(), Subspace::zero(f, n)));
        }
        let mut block = Mat::zero(f, d1 + d2, 2 * n);
        for i in 0..d1 {
            for j in 0..n {
                let v = self.basis.get(i, j);
                block.set(i, j, v);
                block.set(i, n + j, v);
            }
        }
        for i in 0..d2 {
            for j in 0..n {
                block.set(d1 + i, j, other.basis.get(i, j));
            }
        }
        let (r, rank) = block.rref();
        let mut sum_rows = Vec::new();
        let mut int_rows = Vec::new();
        for i in 0..rank {
            let left = (0..n).map(|j| r.get(i, j)).collect::<Vec<_>>();
            if left.iter().any(|&x| x != 0) {
                sum_rows.push(left);
            } else {
                int_rows.push((0..n).map(|j| r.get(i, n + j)).collect::<Vec<_>>());
            }
        }
        Ok((
            Subspace::from_rows(f, n, &sum_rows),
            Subspace::from_rows(f, n, &int_rows),
        ))
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        Ok(self.sum_intersect(other)?.0)
    }

    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        Ok(self.sum_intersect(other)?.1)
    }

    /// All q^dim vectors of the subspace, zero first, in coefficient order.
    pub fn vectors(&self) -> Vec<Vec<u16>> {
        let f = self.field();
        let q = f.q() as u64;
        let d = self.dim();
        let total = q.pow(d as u32);
        let mut out = Vec::with_capacity(total as usize);
        let mut coeffs = vec![0u16; d];
        loop {
            let mut v = vec![0u16; self.ambient];
            for (i, &c) in coeffs.iter().enumerate() {
                if c != 0 {
                    for (j, slot) in v.iter_mut().enumerate() {
                        *slot = f.add(*slot, f.mul(c, self.basis.get(i, j)));
                    }
                }
            }
            out.push(v);
            let mut i = 0;
            while i < d {
                coeffs[i] += 1;
                if (coeffs[i] as u64) < q {
                    break;
                }
                coeffs[i] = 0;
                i += 1;
            }
            if i == d {
                break;
            }
        }
        out
    }

    /// Image under an invertible map given as row-vector action v -> v * a.
    pub fn apply(&self, a: &Mat) -> Result<Subspace> {
        if self.dim() == 0 {
            return Ok(self.clone());
        }
        Ok(Subspace::from_generators(&self.basis.mul(a)?))
    }

    /// One basis row per line, digits in [0, q).
    pub fn to_text(&self) -> String {
        self.basis.to_text()
    }
}

impl Hash for Subspace {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.ambient.hash(state);
        self.basis.hash(state);
    }
}

impl std::fmt::Debug for Subspace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "<{}>",
            if self.dim() == 0 {
                "0".to_string()
            } else {
                self.to_text().replace('\n', ", ")
            }
        )
    }
}

/// Gaussian binomial coefficient, exact.
pub fn gaussian_binom(n: usize, k: usize, q: u32) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    let q = BigUint::from(q);
    let mut acc = BigUint::one();
    for i in 1..=k {
        // multiply by (q^(n-k+i) - 1) / (q^i - 1); partial products stay integral
        let num = q.pow((n - k + i) as u32) - 1u32;
        let den = q.pow(i as u32) - 1u32;
        acc = acc * num / den;
    }
    acc
}

/// Pivot-column profile of a d-dimensional RREF basis in GF(q)^n.
///
/// Each profile is an independent enumeration chunk, which is what the
/// parallel searches partition over.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PivotProfile {
    pub n: usize,
    pub pivots: Vec<usize>,
}

impl PivotProfile {
    /// Free coordinate slots (row, col), row-major order.
    pub fn free_positions(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (i, &p) in self.pivots.iter().enumerate() {
            for j in p + 1..self.n {
                if !self.pivots.contains(&j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn count(&self, q: u32) -> u64 {
        (q as u64).pow(self.free_positions().len() as u32)
    }

    /// The subspace at a given odometer index, free entries decoded most
    /// significant first.
    pub fn subspace_at(&self, field: &Field, index: u64) -> Subspace {
        let d = self.pivots.len();
        let free = self.free_positions();
        let q = field.q() as u64;
        let mut basis = Mat::zero(field, d, self.n);
        for (i, &p) in self.pivots.iter().enumerate() {
            basis.set(i, p, 1);
        }
        let mut idx = index;
        for &(i, j) in free.iter().rev() {
            basis.set(i, j, (idx % q) as u16);
            idx /= q;
        }
        Subspace {
            ambient: self.n,
            basis,
        }
    }
}

/// All pivot profiles for dimension d in GF(q)^n, lexicographic.
pub fn pivot_profiles(n: usize, d: usize) -> Vec<PivotProfile> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..d).collect();
    if d > n {
        return out;
    }
    loop {
        out.push(PivotProfile {
            n,
            pivots: cur.clone(),
        });
        if d == 0 {
            break;
        }
        // next combination
        let mut i = d;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < n - (d - i) {
                cur[i] += 1;
                for j in i + 1..d {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
    }
    out
}

/// Deterministic stream of all d-dimensional subspaces of GF(q)^n, ordered by
/// pivot profile then free-entry values.
pub fn enum_subspaces(field: &Field, n: usize, d: usize) -> impl Iterator<Item = Subspace> {
    let field = field.clone();
    pivot_profiles(n, d).into_iter().flat_map(move |prof| {
        let field = field.clone();
        let total = prof.count(field.q());
        (0..total).map(move |i| prof.subspace_at(&field, i))
    })
}

/// The full lattice of GF(q)^n, dimensions ascending.
pub fn lattice(field: &Field, n: usize) -> Vec<Subspace> {
    (0..=n)
        .flat_map(|d| enum_subspaces(field, n, d).collect::<Vec<_>>())
        .collect()
}

pub fn gl_order(n: usize, q: u32) -> BigUint {
    let qn = BigUint::from(q).pow(n as u32);
    let mut acc = BigUint::one();
    for i in 0..n {
        acc *= &qn - BigUint::from(q).pow(i as u32);
    }
    acc
}

/// Every invertible n x n matrix over GF(q), in row-encoding order.
pub fn gl_enum(field: &Field, n: usize, budget: u64) -> Result<Vec<Mat>> {
    let order = gl_order(n, field.q());
    if order > BigUint::from(budget) {
        return Err(Error::BudgetExceeded(format!(
            "|GL({n},{})| = {order} > budget {budget}",
            field.q()
        )));
    }
    let q = field.q() as u64;
    let total_vecs = q.pow(n as u32);
    let decode = |mut idx: u64| -> Vec<u16> {
        let mut v = vec![0u16; n];
        for slot in v.iter_mut().rev() {
            *slot = (idx % q) as u16;
            idx /= q;
        }
        v
    };
    let mut out = Vec::new();
    // depth-first over row choices in increasing encoding keeps the stream
    // order deterministic
    fn rec(
        field: &Field,
        n: usize,
        total_vecs: u64,
        decode: &dyn Fn(u64) -> Vec<u16>,
        rows: &mut Vec<Vec<u16>>,
        span: &Subspace,
        out: &mut Vec<Mat>,
    ) {
        if rows.len() == n {
            out.push(Mat::from_rows(field, rows));
            return;
        }
        for idx in 1..total_vecs {
            let v = decode(idx);
            if span.contains(&v) {
                continue;
            }
            let mut gens: Vec<Vec<u16>> = rows.clone();
            gens.push(v.clone());
            let new_span = Subspace::from_rows(field, n, &gens);
            rows.push(v);
            rec(field, n, total_vecs, decode, rows, &new_span, out);
            rows.pop();
        }
    }
    let mut rows = Vec::new();
    let span = Subspace::zero(field, n);
    rec(field, n, total_vecs, &decode, &mut rows, &span, &mut out);
    Ok(out)
}

/// All vectors of GF(q)^n in lexicographic order (first coordinate most
/// significant), starting from zero.
pub fn all_vectors(field: &Field, n: usize) -> impl Iterator<Item = Vec<u16>> {
    let q = field.q() as u64;
    let total = q.pow(n as u32);
    (0..total).map(move |mut idx| {
        let mut v = vec![0u16; n];
        for slot in v.iter_mut().rev() {
            *slot = (idx % q) as u16;
            idx /= q;
        }
        v
    })
}

/// Canonical projective point representatives: first nonzero coordinate 1,
/// in lexicographic vector order.
pub fn projective_points(field: &Field, n: usize) -> Vec<Vec<u16>> {
    all_vectors(field, n)
        .filter(|v| {
            v.iter()
                .find(|&&x| x != 0)
                .is_some_and(|&first| first == 1)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> Field {
        Field::gf(2, 1).unwrap()
    }

    #[test]
    fn canonical_forms() {
        let f = f2();
        let s = Subspace::from_rows(&f, 2, &[vec![1, 1], vec![0, 1]]);
        assert_eq!(s.dim(), 2);
        assert_eq!(s, Subspace::full(&f, 2));
        let dup = Subspace::from_rows(&f, 3, &[vec![1, 1, 0], vec![1, 1, 0]]);
        assert_eq!(dup.dim(), 1);
        assert_eq!(dup.to_text(), "110");
        assert_eq!(Subspace::from_rows(&f, 3, &[vec![0, 0, 0]]).dim(), 0);
    }

    #[test]
    fn orth_examples() {
        let f = f2();
        let zero = Subspace::zero(&f, 4);
        assert_eq!(zero.orth(), Subspace::full(&f, 4));
        assert_eq!(Subspace::full(&f, 4).orth(), zero);
        let u = Subspace::from_rows(&f, 4, &[vec![1, 0, 0, 0], vec![0, 1, 0, 0]]);
        let expect = Subspace::from_rows(&f, 4, &[vec![0, 0, 1, 0], vec![0, 0, 0, 1]]);
        assert_eq!(u.orth(), expect);
    }

    #[test]
    fn double_complement_all_of_f2_4() {
        let f = f2();
        let lat = lattice(&f, 4);
        assert_eq!(lat.len(), 67);
        for u in &lat {
            assert_eq!(&u.orth().orth(), u);
            assert_eq!(u.orth().dim(), 4 - u.dim());
        }
    }

    #[test]
    fn sum_intersect_dimension_formula() {
        let f = f2();
        let lat = lattice(&f, 4);
        for u in &lat {
            for v in &lat {
                let (s, i) = u.sum_intersect(v).unwrap();
                assert_eq!(s.dim() + i.dim(), u.dim() + v.dim());
                assert!(i.is_subspace_of(u) && i.is_subspace_of(v));
                assert!(u.is_subspace_of(&s) && v.is_subspace_of(&s));
            }
        }
    }

    #[test]
    fn intersect_example() {
        let f = f2();
        let u = Subspace::from_rows(&f, 3, &[vec![1, 0, 0], vec![0, 1, 0]]);
        let v = Subspace::from_rows(&f, 3, &[vec![0, 1, 0], vec![0, 0, 1]]);
        let (s, i) = u.sum_intersect(&v).unwrap();
        assert_eq!(s, Subspace::full(&f, 3));
        assert_eq!(i, Subspace::from_rows(&f, 3, &[vec![0, 1, 0]]));
    }

    #[test]
    fn gaussian_binom_values() {
        assert_eq!(gaussian_binom(4, 2, 2), BigUint::from(35u32));
        assert_eq!(gaussian_binom(9, 2, 2), BigUint::from(43435u32));
        assert_eq!(gaussian_binom(8, 4, 2), BigUint::from(200787u32));
        assert_eq!(gaussian_binom(6, 2, 2), BigUint::from(651u32));
        assert_eq!(gaussian_binom(5, 0, 3), BigUint::one());
        let total: BigUint = (0..=4u32).map(|d| gaussian_binom(4, d as usize, 2)).sum();
        assert_eq!(total, BigUint::from(67u32));
    }

    #[test]
    fn enumeration_counts_and_distinct() {
        let f = f2();
        for n in 1..=6usize {
            for d in 0..=n {
                let subs: Vec<Subspace> = enum_subspaces(&f, n, d).collect();
                let expect = gaussian_binom(n, d, 2);
                assert_eq!(BigUint::from(subs.len()), expect, "n={n} d={d}");
                let set: std::collections::HashSet<_> = subs.iter().cloned().collect();
                assert_eq!(set.len(), subs.len());
                for s in &subs {
                    assert_eq!(s.dim(), d);
                    // canonical: re-canonicalizing is the identity
                    assert_eq!(&Subspace::from_generators(s.basis()), s);
                }
            }
        }
    }

    #[test]
    fn enumeration_gf3() {
        let f3 = Field::gf(3, 1).unwrap();
        let subs: Vec<Subspace> = enum_subspaces(&f3, 3, 1).collect();
        assert_eq!(subs.len(), 13); // (3^3-1)/(3-1)
    }

    #[test]
    fn gl_counts() {
        let f = f2();
        assert_eq!(gl_enum(&f, 1, 10).unwrap().len(), 1);
        assert_eq!(gl_enum(&f, 2, 100).unwrap().len(), 6);
        let gl3 = gl_enum(&f, 3, 1 << 20).unwrap();
        assert_eq!(gl3.len(), 168);
        assert!(gl3.iter().all(|m| m.is_invertible()));
        assert!(gl_enum(&f, 4, 100).is_err());
    }

    #[test]
    fn projective_points_count() {
        let f = f2();
        let pts = projective_points(&f, 3);
        assert_eq!(pts.len(), 7);
        let f3 = Field::gf(3, 1).unwrap();
        assert_eq!(projective_points(&f3, 3).len(), 13);
        // first nonzero coordinate is 1
        for p in projective_points(&f3, 3) {
            assert_eq!(*p.iter().find(|&&x| x != 0).unwrap(), 1);
        }
    }
}
