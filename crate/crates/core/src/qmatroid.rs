//! q-matroids and q-polymatroids as memoizing rank oracles, the named
//! constructions (uniform, paving, almost uniform, non-Pappus, rank one),
//! duality, derived objects, induced classical matroids and isomorphism
//! search over GL(n, q).

use std::collections::BTreeMap;
use std::sync::Arc;

use dashmap::DashMap;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde_json::json;

use crate::error::{Error, Result};
use crate::gf::{ExtBasis, Field};
use crate::linalg::Mat;
use crate::rmcode::{MatrixCode, VectorCode};
use crate::subspace::{gaussian_binom, gl_enum, lattice, Subspace};
use crate::{par, Rational};

type Oracle = dyn Fn(&Subspace) -> Rational + Send + Sync;

/// A q-polymatroid given by its rank oracle; a q-matroid when every rank it
/// takes is an integer. Evaluations are memoized on the canonical subspace.
#[derive(Clone)]
pub struct QMatroid {
    n: usize,
    field: Field,
    name: String,
    oracle: Arc<Oracle>,
    memo: Arc<DashMap<Subspace, Rational>>,
}

impl QMatroid {
    pub fn from_oracle(
        name: impl Into<String>,
        field: &Field,
        n: usize,
        oracle: impl Fn(&Subspace) -> Rational + Send + Sync + 'static,
    ) -> QMatroid {
        QMatroid {
            n,
            field: field.clone(),
            name: name.into(),
            oracle: Arc::new(oracle),
            memo: Arc::new(DashMap::new()),
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn rank(&self, u: &Subspace) -> Rational {
        assert_eq!(u.ambient(), self.n, "ambient mismatch");
        if let Some(r) = self.memo.get(u) {
            return *r;
        }
        let r = (self.oracle)(u);
        self.memo.insert(u.clone(), r);
        r
    }

    pub fn rank_int(&self, u: &Subspace) -> Result<i64> {
        let r = self.rank(u);
        if r.denom().is_one() {
            Ok(*r.numer())
        } else {
            Err(Error::NotAMatroid)
        }
    }

    /// Rank of the whole space.
    pub fn total_rank(&self) -> Rational {
        self.rank(&Subspace::full(&self.field, self.n))
    }

    // ---- constructions ----

    /// Uniform q-matroid: rank min(k, dim).
    pub fn uniform(k: usize, n: usize, field: &Field) -> Result<QMatroid> {
        if k > n {
            return Err(Error::BadRank(k, n));
        }
        Ok(QMatroid::from_oracle(
            format!("U_{{{k},{n}}}({})", field.q()),
            field,
            n,
            move |u| Rational::from_integer(k.min(u.dim()) as i64),
        ))
    }

    /// Paving q-matroid induced by a family of k-dim subspaces with pairwise
    /// intersections of dimension at most k-2.
    pub fn paving(family: &[Subspace], k: usize, n: usize, field: &Field) -> Result<QMatroid> {
        if k == 0 || k > n.saturating_sub(1) {
            return Err(Error::BadRank(k, n));
        }
        for s in family {
            if s.ambient() != n || s.field() != field {
                return Err(Error::BadFamily("wrong ambient space".into()));
            }
            if s.dim() != k {
                return Err(Error::BadFamily(format!(
                    "member of dimension {} in a rank-{k} family",
                    s.dim()
                )));
            }
        }
        for (i, v) in family.iter().enumerate() {
            for w in family.iter().skip(i + 1) {
                if v == w {
                    return Err(Error::BadFamily("repeated member".into()));
                }
                let int_dim = v.intersect(w)?.dim();
                if int_dim + 2 > k {
                    return Err(Error::BadFamily(format!(
                        "members intersect in dimension {int_dim} > k-2"
                    )));
                }
            }
        }
        let fam: Vec<Subspace> = family.to_vec();
        Ok(QMatroid::from_oracle(
            format!("M_S(|S|={}, k={k}, n={n})", fam.len()),
            field,
            n,
            move |u| {
                if fam.contains(u) {
                    Rational::from_integer(k as i64 - 1)
                } else {
                    Rational::from_integer(k.min(u.dim()) as i64)
                }
            },
        ))
    }

    /// Almost uniform: uniform with one designated basis removed.
    pub fn almost_uniform(k: usize, n: usize, field: &Field, x: &Subspace) -> Result<QMatroid> {
        let mut qm = Self::paving(std::slice::from_ref(x), k, n, field)?;
        qm.name = format!("AU_{{{k},{n}}}({}, X)", field.q());
        Ok(qm)
    }

    /// The non-Pappus q-matroid on F_q^9.
    pub fn non_pappus(field: &Field) -> QMatroid {
        let family = non_pappus_family(field);
        let mut qm = Self::paving(&family, 3, 9, field).expect("fixed family is valid");
        qm.name = format!("NP({})", field.q());
        qm
    }

    /// Rank-one q-matroid with loop space spanned by the first t coordinates.
    pub fn rank_one(n: usize, t: usize, field: &Field) -> Result<QMatroid> {
        if t + 1 > n {
            return Err(Error::BadLoopDim(t, n));
        }
        let rows: Vec<Vec<u16>> = (0..t)
            .map(|i| {
                let mut v = vec![0u16; n];
                v[i] = 1;
                v
            })
            .collect();
        let loops = Subspace::from_rows(field, n, &rows);
        Ok(QMatroid::from_oracle(
            format!("R1(n={n}, t={t}, q={})", field.q()),
            field,
            n,
            move |u| {
                if u.is_subspace_of(&loops) {
                    Rational::zero()
                } else {
                    Rational::one()
                }
            },
        ))
    }

    /// M[C] for a matrix rank-metric code.
    pub fn from_matrix_code(code: &MatrixCode) -> QMatroid {
        let c = code.clone();
        QMatroid::from_oracle(
            format!("M[{:?}]", code),
            code.field(),
            code.n(),
            move |u| c.rho(u).expect("ambient checked"),
        )
    }

    /// M[C] for a vector rank-metric code; independent of the expansion basis.
    pub fn from_vector_code(code: &VectorCode) -> Result<QMatroid> {
        let basis = ExtBasis::polynomial(&code.base, &code.ext)?;
        let expanded = code.expand(&basis)?;
        let mut qm = Self::from_matrix_code(&expanded);
        qm.name = format!("M[vector {}x{} over GF({})]", code.k(), code.n, code.ext.q());
        Ok(qm)
    }

    /// Dual q-polymatroid: rank* V = dim V + rank(V^perp) - rank(E).
    pub fn dual(&self) -> QMatroid {
        let parent = self.clone();
        let total = self.total_rank();
        QMatroid::from_oracle(
            format!("({})*", self.name),
            &self.field,
            self.n,
            move |u| Rational::from_integer(u.dim() as i64) + parent.rank(&u.orth()) - total,
        )
    }

    // ---- checks and derived objects ----

    /// Check (R1) boundedness, (R2) monotonicity, (R3) submodularity.
    pub fn check_axioms(&self, scope: CheckScope, budget: u64) -> Result<AxiomVerdict> {
        match scope {
            CheckScope::Exhaustive => {
                let size: num_bigint::BigUint = (0..=self.n)
                    .map(|d| gaussian_binom(self.n, d, self.field.q()))
                    .sum();
                if size > num_bigint::BigUint::from(budget) {
                    return Err(Error::BudgetExceeded(format!(
                        "lattice has {size} subspaces"
                    )));
                }
                let lat = lattice(&self.field, self.n);
                let mut pairs = 0u64;
                for a in &lat {
                    if let Some(v) = self.r1_violation(a) {
                        return Ok(v);
                    }
                }
                for a in &lat {
                    for b in &lat {
                        pairs += 1;
                        if let Some(v) = self.pair_violation(a, b)? {
                            return Ok(v);
                        }
                    }
                }
                Ok(AxiomVerdict::Pass {
                    pairs_checked: pairs,
                })
            }
            CheckScope::Sampled { seed, count } => {
                let mut rng = ChaCha20Rng::seed_from_u64(seed);
                let mut pairs = 0u64;
                for _ in 0..count {
                    let a = random_subspace(&mut rng, &self.field, self.n);
                    let b = random_subspace(&mut rng, &self.field, self.n);
                    if let Some(v) = self.r1_violation(&a) {
                        return Ok(v);
                    }
                    if let Some(v) = self.r1_violation(&b) {
                        return Ok(v);
                    }
                    pairs += 1;
                    if let Some(v) = self.pair_violation(&a, &b)? {
                        return Ok(v);
                    }
                }
                Ok(AxiomVerdict::Pass {
                    pairs_checked: pairs,
                })
            }
        }
    }

    fn r1_violation(&self, a: &Subspace) -> Option<AxiomVerdict> {
        let r = self.rank(a);
        if r.is_negative() || r > Rational::from_integer(a.dim() as i64) {
            return Some(AxiomVerdict::Fail {
                axiom: Axiom::R1,
                a: a.clone(),
                b: None,
            });
        }
        None
    }

    fn pair_violation(&self, a: &Subspace, b: &Subspace) -> Result<Option<AxiomVerdict>> {
        if a.is_subspace_of(b) && self.rank(a) > self.rank(b) {
            return Ok(Some(AxiomVerdict::Fail {
                axiom: Axiom::R2,
                a: a.clone(),
                b: Some(b.clone()),
            }));
        }
        let (sum, inter) = a.sum_intersect(b)?;
        if self.rank(&inter) + self.rank(&sum) > self.rank(a) + self.rank(b) {
            return Ok(Some(AxiomVerdict::Fail {
                axiom: Axiom::R3,
                a: a.clone(),
                b: Some(b.clone()),
            }));
        }
        Ok(None)
    }

    /// True when every rank over the full lattice is an integer.
    pub fn is_integral(&self, budget: u64) -> Result<bool> {
        let size: num_bigint::BigUint = (0..=self.n)
            .map(|d| gaussian_binom(self.n, d, self.field.q()))
            .sum();
        if size > num_bigint::BigUint::from(budget) {
            return Err(Error::BudgetExceeded("lattice too large".into()));
        }
        Ok(lattice(&self.field, self.n)
            .iter()
            .all(|u| self.rank(u).denom().is_one()))
    }

    /// Independents, bases, circuits, flats or hyperplanes over the full
    /// lattice, in enumeration order.
    pub fn objects(&self, kind: ObjectKind, budget: u64) -> Result<Vec<Subspace>> {
        if !self.is_integral(budget)? {
            return Err(Error::NotAMatroid);
        }
        let lat = lattice(&self.field, self.n);
        let rank_of = |u: &Subspace| -> i64 { *self.rank(u).numer() };
        let independent = |u: &Subspace| rank_of(u) == u.dim() as i64;
        Ok(match kind {
            ObjectKind::Independents => lat.into_iter().filter(|u| independent(u)).collect(),
            ObjectKind::Bases => {
                let total = *self.total_rank().numer();
                lat.into_iter()
                    .filter(|u| u.dim() as i64 == total && independent(u))
                    .collect()
            }
            ObjectKind::Circuits => {
                let dependents: Vec<Subspace> =
                    lat.iter().filter(|u| !independent(u)).cloned().collect();
                dependents
                    .iter()
                    .filter(|c| {
                        lat.iter()
                            .filter(|d| d.dim() < c.dim() && d.is_subspace_of(c))
                            .all(independent)
                    })
                    .cloned()
                    .collect()
            }
            ObjectKind::Flats => lat
                .iter()
                .filter(|x| self.is_flat(x, &lat))
                .cloned()
                .collect(),
            ObjectKind::Hyperplanes => {
                let flats: Vec<Subspace> = lat
                    .iter()
                    .filter(|x| self.is_flat(x, &lat))
                    .cloned()
                    .collect();
                flats
                    .iter()
                    .filter(|h| h.dim() < self.n)
                    .filter(|h| {
                        !flats
                            .iter()
                            .any(|g| g.dim() < self.n && h.is_subspace_of(g) && g != *h)
                    })
                    .cloned()
                    .collect()
            }
        })
    }

    fn is_flat(&self, x: &Subspace, lat: &[Subspace]) -> bool {
        let rx = self.rank(x);
        lat.iter()
            .filter(|v| v.dim() == 1 && !v.is_subspace_of(x))
            .all(|v| {
                let xv = x.sum(v).expect("same ambient");
                self.rank(&xv) > rx
            })
    }

    /// Classical matroid induced by restricting to spans of subsets of a
    /// basis of the ground space.
    pub fn induced_matroid(&self, basis: &Mat) -> Result<ClassicalMatroid> {
        if basis.rows() != self.n || basis.cols() != self.n || !basis.is_invertible() {
            return Err(Error::NotABasis);
        }
        if self.n > 20 {
            return Err(Error::BudgetExceeded("ground set too large".into()));
        }
        let n = self.n;
        let mut ranks = vec![0u32; 1 << n];
        for mask in 0..(1u32 << n) {
            let rows: Vec<Vec<u16>> = (0..n)
                .filter(|i| (mask >> i) & 1 == 1)
                .map(|i| basis.row_to_vec(i))
                .collect();
            let span = Subspace::from_rows(&self.field, n, &rows);
            let r = self.rank(&span);
            if !r.denom().is_one() {
                return Err(Error::NotAMatroid);
            }
            ranks[mask as usize] = *r.numer() as u32;
        }
        let m = ClassicalMatroid { n, ranks };
        if !m.is_valid() {
            return Err(Error::NotAMatroid);
        }
        Ok(m)
    }

    /// GL-invariant signature: per dimension, the sorted multiset of ranks.
    pub fn signature(&self, budget: u64) -> Result<Vec<Vec<Rational>>> {
        let size: num_bigint::BigUint = (0..=self.n)
            .map(|d| gaussian_binom(self.n, d, self.field.q()))
            .sum();
        if size > num_bigint::BigUint::from(budget) {
            return Err(Error::BudgetExceeded("lattice too large".into()));
        }
        let mut sig = vec![Vec::new(); self.n + 1];
        for u in lattice(&self.field, self.n) {
            let d = u.dim();
            sig[d].push(self.rank(&u));
        }
        for layer in &mut sig {
            layer.sort();
        }
        Ok(sig)
    }

    /// Search GL(n, q) for an isomorphism alpha with
    /// rank_other(V alpha) = rank_self(V) for all V; least witness in stream
    /// order. Rank-histogram pruning runs first.
    pub fn isomorphic(&self, other: &QMatroid, budget: u64) -> Result<Option<Mat>> {
        if self.n != other.n {
            return Err(Error::AmbientMismatch(self.n, other.n));
        }
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field.q(), other.field.q()));
        }
        if self.signature(budget)? != other.signature(budget)? {
            return Ok(None);
        }
        let lat = lattice(&self.field, self.n);
        let self_ranks: Vec<Rational> = lat.iter().map(|u| self.rank(u)).collect();
        let group = gl_enum(&self.field, self.n, budget)?;
        let other = other.clone();
        let witness = par::find_first(group, move |alpha| {
            let ok = lat.iter().zip(&self_ranks).all(|(u, &r)| {
                let img = u.apply(&alpha).expect("square matrix");
                other.rank(&img) == r
            });
            if ok {
                Some(alpha)
            } else {
                None
            }
        });
        Ok(witness)
    }

    /// Scaling-equivalence predicate: rank_other(V alpha) = a * rank_self(V)
    /// for all V in the lattice. The pair (alpha, a) is supplied, not
    /// searched; the isomorphism search covers only a = 1.
    pub fn is_scaling_of(
        &self,
        other: &QMatroid,
        alpha: &Mat,
        a: Rational,
        budget: u64,
    ) -> Result<bool> {
        if self.n != other.n {
            return Err(Error::AmbientMismatch(self.n, other.n));
        }
        if !alpha.is_invertible() {
            return Err(Error::NotInvertible);
        }
        let size: num_bigint::BigUint = (0..=self.n)
            .map(|d| gaussian_binom(self.n, d, self.field.q()))
            .sum();
        if size > num_bigint::BigUint::from(budget) {
            return Err(Error::BudgetExceeded("lattice too large".into()));
        }
        Ok(lattice(&self.field, self.n).iter().all(|u| {
            let img = u.apply(alpha).expect("square");
            other.rank(&img) == a * self.rank(u)
        }))
    }

    /// Full-lattice JSON dump: canonical basis text and exact rank per
    /// subspace.
    pub fn dump(&self, budget: u64) -> Result<serde_json::Value> {
        let size: num_bigint::BigUint = (0..=self.n)
            .map(|d| gaussian_binom(self.n, d, self.field.q()))
            .sum();
        if size > num_bigint::BigUint::from(budget) {
            return Err(Error::BudgetExceeded("lattice too large".into()));
        }
        let entries: Vec<serde_json::Value> = lattice(&self.field, self.n)
            .iter()
            .map(|u| {
                let r = self.rank(u);
                json!({
                    "dim": u.dim(),
                    "basis": u.to_text(),
                    "rank": [*r.numer(), *r.denom()],
                })
            })
            .collect();
        Ok(json!({
            "name": self.name,
            "q": self.field.q(),
            "n": self.n,
            "lattice": entries,
        }))
    }
}

impl std::fmt::Debug for QMatroid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "QMatroid({}, n={}, q={})", self.name, self.n, self.field.q())
    }
}

/// The eight fixed 3-dimensional coordinate subspaces of the non-Pappus
/// configuration, as canonical subspaces of F_q^9.
pub fn non_pappus_family(field: &Field) -> Vec<Subspace> {
    // 1-based coordinate triples 123, 168, 157, 247, 269, 348, 359, 456
    const TRIPLES: [[usize; 3]; 8] = [
        [0, 1, 2],
        [0, 5, 7],
        [0, 4, 6],
        [1, 3, 6],
        [1, 5, 8],
        [2, 3, 7],
        [2, 4, 8],
        [3, 4, 5],
    ];
    TRIPLES
        .iter()
        .map(|t| {
            let rows: Vec<Vec<u16>> = t
                .iter()
                .map(|&i| {
                    let mut v = vec![0u16; 9];
                    v[i] = 1;
                    v
                })
                .collect();
            Subspace::from_rows(field, 9, &rows)
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ObjectKind {
    Independents,
    Bases,
    Circuits,
    Flats,
    Hyperplanes,
}

#[derive(Clone, Copy, Debug)]
pub enum CheckScope {
    Exhaustive,
    Sampled { seed: u64, count: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axiom {
    R1,
    R2,
    R3,
}

#[derive(Clone, Debug)]
pub enum AxiomVerdict {
    Pass { pairs_checked: u64 },
    Fail {
        axiom: Axiom,
        a: Subspace,
        b: Option<Subspace>,
    },
}

impl AxiomVerdict {
    pub fn passed(&self) -> bool {
        matches!(self, AxiomVerdict::Pass { .. })
    }
}

pub(crate) fn random_subspace(rng: &mut ChaCha20Rng, field: &Field, n: usize) -> Subspace {
    let d = rng.gen_range(0..=n);
    let rows: Vec<Vec<u16>> = (0..d)
        .map(|_| {
            (0..n)
                .map(|_| rng.gen_range(0..field.q()) as u16)
                .collect()
        })
        .collect();
    Subspace::from_rows(field, n, &rows)
}

/// Classical matroid on [n] with a dense rank table over all 2^n subsets.
#[derive(Clone, PartialEq, Eq)]
pub struct ClassicalMatroid {
    pub n: usize,
    pub ranks: Vec<u32>,
}

impl ClassicalMatroid {
    pub fn from_oracle(n: usize, f: impl Fn(u32) -> u32) -> ClassicalMatroid {
        let ranks = (0..(1u32 << n)).map(f).collect();
        ClassicalMatroid { n, ranks }
    }

    #[inline]
    pub fn rank(&self, mask: u32) -> u32 {
        self.ranks[mask as usize]
    }

    pub fn total_rank(&self) -> u32 {
        self.ranks[(1usize << self.n) - 1]
    }

    /// Normalization, unit increase, monotonicity and submodularity.
    pub fn is_valid(&self) -> bool {
        let full = 1u32 << self.n;
        if self.ranks[0] != 0 {
            return false;
        }
        for a in 0..full {
            let ra = self.rank(a);
            for x in 0..self.n {
                let ax = a | (1 << x);
                if ax != a {
                    let rax = self.rank(ax);
                    if rax < ra || rax > ra + 1 {
                        return false;
                    }
                }
            }
        }
        for a in 0..full {
            for b in 0..full {
                if self.rank(a & b) + self.rank(a | b) > self.rank(a) + self.rank(b) {
                    return false;
                }
            }
        }
        true
    }

    pub fn uniform(k: u32, n: usize) -> ClassicalMatroid {
        ClassicalMatroid::from_oracle(n, |mask| k.min(mask.count_ones()))
    }

    /// The rank-3 non-Pappus matroid on 9 points (lines of the configuration).
    pub fn non_pappus() -> ClassicalMatroid {
        const LINES: [u32; 8] = [
            0b000000111, // {1,2,3}
            0b010100001, // {1,6,8}
            0b001010001, // {1,5,7}
            0b001001010, // {2,4,7}
            0b100100010, // {2,6,9}
            0b010001100, // {3,4,8}
            0b100010100, // {3,5,9}
            0b000111000, // {4,5,6}
        ];
        ClassicalMatroid::from_oracle(9, |mask| {
            let pc = mask.count_ones();
            if pc <= 2 {
                pc
            } else if LINES.contains(&mask) {
                2
            } else {
                3
            }
        })
    }

    /// Triples of the stated rank, ascending masks.
    pub fn triples_of_rank(&self, r: u32) -> Vec<u32> {
        (0..(1u32 << self.n))
            .filter(|m| m.count_ones() == 3 && self.rank(*m) == r)
            .collect()
    }

    pub fn rank_counts(&self) -> BTreeMap<u32, usize> {
        let mut out = BTreeMap::new();
        for &r in &self.ranks {
            *out.entry(r).or_insert(0) += 1;
        }
        out
    }
}

impl std::fmt::Debug for ClassicalMatroid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "ClassicalMatroid(n={}, rank={})", self.n, self.total_rank())
    }
}
