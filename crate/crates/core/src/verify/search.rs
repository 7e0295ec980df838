//! Exhaustive census of k'-dimensional subcodes of F_q^{n x m}: the
//! almost-affinity filter, optional target-rank-function matching, and right
//! idealizer flags on survivors.
//!
//! Candidates are partitioned by pivot profile of the flattened row space;
//! each profile is an independent chunk with a fixed global index range, so
//! the merged census is identical for any worker count and the chunk list
//! doubles as a checkpoint unit. The GF(2) path keeps whole candidate rows in
//! machine words and eliminates with XOR; other fields go through the generic
//! matrix path.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Mutex;
use std::time::Instant;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use serde_json::json;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::gf::Field;
use crate::linalg::Mat;
use crate::qmatroid::QMatroid;
use crate::rmcode::{bit_rank, MatrixCode};
use crate::subspace::{gaussian_binom, lattice, pivot_profiles, PivotProfile, Subspace};
use crate::verify::{Status, Verdict};
use crate::{par, Rational};

/// Search request: all k'-dimensional codes in F_q^{n x m}.
#[derive(Clone)]
pub struct SearchParams {
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub q: u32,
    /// Candidate-count budget; the search refuses to start beyond it.
    pub budget: u64,
    /// Optional target rank function: keep only codes inducing it.
    pub target: Option<TargetSpec>,
    /// Chunk-level progress file for resumable runs.
    pub checkpoint: Option<PathBuf>,
    /// Wall-clock cap; chunks not started before it are skipped and the
    /// census comes back truncated (resume from the checkpoint).
    pub time_cap: Option<std::time::Duration>,
    /// Run chunks on the calling thread even when the parallel feature is on.
    pub force_sequential: bool,
}

/// A target q-matroid plus a stable label for certificates.
#[derive(Clone)]
pub struct TargetSpec {
    pub label: String,
    pub qm: QMatroid,
}

impl SearchParams {
    pub fn new(n: usize, m: usize, k: usize, q: u32) -> SearchParams {
        SearchParams {
            n,
            m,
            k,
            q,
            budget: 100_000_000,
            target: None,
            checkpoint: None,
            time_cap: None,
            force_sequential: false,
        }
    }

    pub fn with_target(mut self, label: impl Into<String>, qm: QMatroid) -> SearchParams {
        self.target = Some(TargetSpec {
            label: label.into(),
            qm,
        });
        self
    }

    pub fn with_budget(mut self, budget: u64) -> SearchParams {
        self.budget = budget;
        self
    }

    pub fn with_checkpoint(mut self, path: impl Into<PathBuf>) -> SearchParams {
        self.checkpoint = Some(path.into());
        self
    }

    pub fn with_time_cap(mut self, cap: std::time::Duration) -> SearchParams {
        self.time_cap = Some(cap);
        self
    }

    pub fn sequential(mut self) -> SearchParams {
        self.force_sequential = true;
        self
    }

    fn digest(&self) -> String {
        let mut h = Sha256::new();
        h.update(format!(
            "v1|n={}|m={}|k={}|q={}|target={}",
            self.n,
            self.m,
            self.k,
            self.q,
            self.target.as_ref().map_or("none", |t| &t.label)
        ));
        format!("{:x}", h.finalize())
    }
}

/// A code that passed every filter.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct Survivor {
    /// Global index in enumeration order.
    pub index: u64,
    /// Canonical code text (`q n m k` header plus generator blocks).
    pub code: String,
    /// Right-idealizer subfield flags, divisor degree -> contained.
    pub subfield_flags: BTreeMap<u32, bool>,
}

/// Filter-stage counts and the survivor list.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq, Default)]
pub struct Census {
    pub total: u64,
    pub almost_affine: u64,
    /// Candidates matching the target rank function (only with a target).
    pub target_matched: Option<u64>,
    pub survivors: Vec<Survivor>,
    /// Set when a time cap cut the sweep short; counts cover only the
    /// completed chunks.
    #[serde(default)]
    pub truncated: bool,
}

impl Census {
    fn merge(mut self, other: Census) -> Census {
        self.truncated |= other.truncated;
        self.total += other.total;
        self.almost_affine += other.almost_affine;
        self.target_matched = match (self.target_matched, other.target_matched) {
            (Some(a), Some(b)) => Some(a + b),
            (a, b) => a.or(b),
        };
        self.survivors.extend(other.survivors);
        self
    }

    /// Do all survivors carry the full-degree subfield flag?
    pub fn all_extension_linear(&self, m: u32) -> bool {
        self.survivors
            .iter()
            .all(|s| *s.subfield_flags.get(&m).unwrap_or(&false))
    }

    /// Count survivors whose q-matroid equals the given target on the full
    /// lattice. Lets one sweep answer several per-class questions.
    pub fn count_matching(&self, target: &QMatroid) -> Result<u64> {
        let lat = lattice(target.field(), target.n());
        let mut count = 0u64;
        for s in &self.survivors {
            let code = MatrixCode::parse(&s.code)?;
            if lat
                .iter()
                .all(|u| code.rho(u).expect("same ambient") == target.rank(u))
            {
                count += 1;
            }
        }
        Ok(count)
    }

    /// SHA-256 over the canonical survivor texts in index order.
    pub fn survivors_digest(&self) -> String {
        let mut h = Sha256::new();
        for s in &self.survivors {
            h.update(s.code.as_bytes());
            h.update([0u8]);
        }
        format!("{:x}", h.finalize())
    }
}

#[derive(Serialize, Deserialize)]
struct Checkpoint {
    version: u32,
    params_digest: String,
    completed: BTreeMap<usize, Census>,
}

impl Checkpoint {
    fn load(path: &Path, digest: &str) -> Option<BTreeMap<usize, Census>> {
        let text = std::fs::read_to_string(path).ok()?;
        let ck: Checkpoint = serde_json::from_str(&text).ok()?;
        (ck.version == 1 && ck.params_digest == digest).then_some(ck.completed)
    }

    fn store(path: &Path, digest: &str, completed: &BTreeMap<usize, Census>) -> Result<()> {
        let ck = Checkpoint {
            version: 1,
            params_digest: digest.to_string(),
            completed: completed.clone(),
        };
        let tmp = path.with_extension("tmp");
        std::fs::write(&tmp, serde_json::to_string(&ck).expect("serializable"))?;
        std::fs::rename(&tmp, path)?;
        Ok(())
    }
}

/// Enumerate every k'-dimensional subcode, filter by almost affinity and the
/// optional target, and compute right-idealizer subfield flags for survivors.
pub fn divisible_code_search(params: &SearchParams) -> Result<Census> {
    let field = Field::of_order(params.q)?;
    let nm = params.n * params.m;
    if params.k > nm {
        return Err(Error::BadParams(format!(
            "k = {} exceeds nm = {nm}",
            params.k
        )));
    }
    let total = gaussian_binom(nm, params.k, params.q);
    if total > BigUint::from(params.budget) {
        return Err(Error::BudgetExceeded(format!(
            "{total} candidates, budget {}",
            params.budget
        )));
    }
    if let Some(t) = &params.target {
        if t.qm.n() != params.n || t.qm.field() != &field {
            return Err(Error::AmbientMismatch(t.qm.n(), params.n));
        }
    }

    // profile chunks with global index offsets
    let profiles = pivot_profiles(nm, params.k);
    let mut offsets = Vec::with_capacity(profiles.len());
    let mut acc = 0u64;
    for p in &profiles {
        offsets.push(acc);
        acc += p.count(params.q);
    }
    debug_assert_eq!(BigUint::from(acc), total);

    let digest = params.digest();
    let completed: BTreeMap<usize, Census> = params
        .checkpoint
        .as_deref()
        .and_then(|p| Checkpoint::load(p, &digest))
        .unwrap_or_default();
    let ckpt_state = Mutex::new(completed.clone());
    let deadline = params.time_cap.map(|cap| Instant::now() + cap);

    let lat: Vec<Subspace> = lattice(&field, params.n);
    let target_table: Option<Vec<Rational>> = params
        .target
        .as_ref()
        .map(|t| lat.iter().map(|u| t.qm.rank(u)).collect());

    let use_bits = params.q == 2 && nm <= 64 && params.k <= 64;
    let engine = BitEngine::prepare(&field, params, &lat, use_bits);

    let work: Vec<(usize, PivotProfile, u64)> = profiles
        .into_iter()
        .enumerate()
        .filter(|(i, _)| !completed.contains_key(i))
        .map(|(i, p)| {
            let off = offsets[i];
            (i, p, off)
        })
        .collect();

    let truncated = std::sync::atomic::AtomicBool::new(false);
    let worker = |(pi, profile, offset): (usize, PivotProfile, u64)| {
        if deadline.is_some_and(|d| Instant::now() >= d) {
            truncated.store(true, std::sync::atomic::Ordering::Relaxed);
            return BTreeMap::new();
        }
        let census = if let Some(engine) = &engine {
            engine.run_profile(&profile, offset, target_table.as_deref())
        } else {
            run_profile_generic(
                &field,
                params,
                &lat,
                target_table.as_deref(),
                &profile,
                offset,
            )
        };
        if let Some(path) = &params.checkpoint {
            let mut state = ckpt_state.lock().unwrap();
            state.insert(pi, census.clone());
            // best effort: a failed write only costs resumability
            let _ = Checkpoint::store(path, &digest, &state);
        }
        let mut out = BTreeMap::new();
        out.insert(pi, census);
        out
    };
    let merge = |mut a: BTreeMap<usize, Census>, b: BTreeMap<usize, Census>| {
        a.extend(b);
        a
    };
    let fresh: BTreeMap<usize, Census> = if params.force_sequential {
        par::run_seq(work, worker, BTreeMap::new, merge)
    } else {
        par::run(work, worker, BTreeMap::new, merge)
    };

    let mut all = completed;
    all.extend(fresh);
    let mut census = all
        .into_values()
        .fold(Census::default(), |acc, c| acc.merge(c));
    if params.target.is_some() && census.target_matched.is_none() {
        census.target_matched = Some(0);
    }
    census.truncated |= truncated.load(std::sync::atomic::Ordering::Relaxed);
    census.survivors.sort_by_key(|s| s.index);
    Ok(census)
}

/// Wrap a census in a Verdict; `expect_none` states the claim "no survivor
/// matches" (exhaustive nonexistence).
pub fn census_verdict(params: &SearchParams, census: &Census, started: Instant) -> Verdict {
    let claim = match &params.target {
        Some(t) => format!(
            "exhaustive search for {} x {} codes of dimension {} over GF({}) inducing {}",
            params.n, params.m, params.k, params.q, t.label
        ),
        None => format!(
            "census of almost affine {} x {} codes of dimension {} over GF({})",
            params.n, params.m, params.k, params.q
        ),
    };
    let cert = json!({
        "kind": "divisible_census",
        "n": params.n,
        "m": params.m,
        "k": params.k,
        "q": params.q,
        "target": params.target.as_ref().map(|t| t.label.clone()),
        "total": census.total,
        "almost_affine": census.almost_affine,
        "target_matched": census.target_matched,
        "survivor_count": census.survivors.len(),
        "truncated": census.truncated,
        "survivors_digest": census.survivors_digest(),
        "survivors_sample": census.survivors.iter().take(8).map(|s| json!({
            "index": s.index,
            "code": s.code,
            "subfield_flags": s.subfield_flags,
        })).collect::<Vec<_>>(),
    });
    let status = if census.truncated {
        Status::Inconclusive
    } else {
        Status::Confirmed
    };
    let mut v = Verdict::new(claim, status, cert);
    v.stats.wall_ms = started.elapsed().as_millis();
    v.stats.candidates = census.total;
    v.stats.workers = par::workers();
    v
}

// ---- GF(2) fast path ----

struct BitEngine {
    n: usize,
    m: usize,
    k: usize,
    /// Per lattice subspace: annihilator rows (n-bit masks) of U, its dim,
    /// and the lattice index of U^perp.
    lat_ann: Vec<(Vec<u32>, usize)>,
    perp_idx: Vec<usize>,
}

impl BitEngine {
    fn prepare(
        field: &Field,
        params: &SearchParams,
        lat: &[Subspace],
        enabled: bool,
    ) -> Option<BitEngine> {
        if !enabled {
            return None;
        }
        let n = params.n;
        let to_mask = |row: &[u16]| -> u32 {
            row.iter().fold(0u32, |acc, &v| (acc << 1) | v as u32)
        };
        let lat_ann: Vec<(Vec<u32>, usize)> = lat
            .iter()
            .map(|u| {
                let perp = u.orth();
                let rows = (0..perp.dim())
                    .map(|i| to_mask(perp.basis().row(i)))
                    .collect();
                (rows, u.dim())
            })
            .collect();
        let index_of: std::collections::HashMap<&Subspace, usize> =
            lat.iter().enumerate().map(|(i, u)| (u, i)).collect();
        let perp_idx: Vec<usize> = lat.iter().map(|u| index_of[&u.orth()]).collect();
        let _ = field;
        Some(BitEngine {
            n,
            m: params.m,
            k: params.k,
            lat_ann,
            perp_idx,
        })
    }

    /// dim C(U) for the candidate given by k flattened rows.
    #[inline]
    fn subcode_dim(&self, rows: &[u64], lat_index: usize) -> usize {
        let (ann, _) = &self.lat_ann[lat_index];
        let m = self.m;
        let n = self.n;
        let row_mask = if m == 64 { u64::MAX } else { (1u64 << m) - 1 };
        let mut eqs = [0u64; 64];
        let mut neq = 0;
        for &h in ann {
            // h . B_i = xor of the rows of B_i picked by h, an m-bit value
            let mut vals = [0u64; 64];
            for (i, &b) in rows.iter().enumerate() {
                let mut acc = 0u64;
                for j in 0..n {
                    if (h >> (n - 1 - j)) & 1 == 1 {
                        acc ^= (b >> (m * (n - 1 - j))) & row_mask;
                    }
                }
                vals[i] = acc;
            }
            for c in 0..m {
                let mut eq = 0u64;
                for (i, &v) in vals.iter().enumerate().take(rows.len()) {
                    eq |= ((v >> (m - 1 - c)) & 1) << i;
                }
                if eq != 0 {
                    eqs[neq] = eq;
                    neq += 1;
                }
            }
        }
        self.k - bit_rank(&mut eqs[..neq])
    }

    fn almost_affine(&self, rows: &[u64]) -> bool {
        if !self.k.is_multiple_of(self.m) {
            return false;
        }
        for (idx, (_, udim)) in self.lat_ann.iter().enumerate() {
            if *udim == 0 || *udim == self.n {
                continue;
            }
            if !self.subcode_dim(rows, idx).is_multiple_of(self.m) {
                return false;
            }
        }
        true
    }

    fn matches_target(&self, rows: &[u64], table: &[Rational]) -> bool {
        for (idx, r) in table.iter().enumerate() {
            let pidx = self.perp_idx[idx];
            let sub = self.subcode_dim(rows, pidx);
            // (k - dim C(U^perp)) / m == r
            if Rational::new((self.k - sub) as i64, self.m as i64) != *r {
                return false;
            }
        }
        true
    }

    fn code_of(&self, rows: &[u64], field: &Field) -> MatrixCode {
        let nm = self.n * self.m;
        let gens: Vec<Mat> = rows
            .iter()
            .map(|&r| {
                let flat: Vec<u16> = (0..nm).map(|j| ((r >> (nm - 1 - j)) & 1) as u16).collect();
                Mat::from_flat(field, self.n, self.m, &flat).unwrap()
            })
            .collect();
        MatrixCode::from_generators(field, self.n, self.m, &gens).unwrap()
    }

    fn run_profile(
        &self,
        profile: &PivotProfile,
        offset: u64,
        target: Option<&[Rational]>,
    ) -> Census {
        let field = Field::gf(2, 1).expect("GF(2)");
        let nm = self.n * self.m;
        let free = profile.free_positions();
        let count = profile.count(2);
        let mut census = Census {
            target_matched: target.map(|_| 0),
            ..Census::default()
        };
        // base rows: pivots set
        let base: Vec<u64> = profile
            .pivots
            .iter()
            .map(|&p| 1u64 << (nm - 1 - p))
            .collect();
        let mut rows = base.clone();
        for idx in 0..count {
            // decode free entries, most significant first
            rows.copy_from_slice(&base);
            let mut v = idx;
            for &(i, j) in free.iter().rev() {
                if v & 1 == 1 {
                    rows[i] |= 1u64 << (nm - 1 - j);
                }
                v >>= 1;
            }
            census.total += 1;
            if !self.almost_affine(&rows) {
                continue;
            }
            census.almost_affine += 1;
            if let Some(table) = target {
                if !self.matches_target(&rows, table) {
                    continue;
                }
                *census.target_matched.as_mut().unwrap() += 1;
            }
            let code = self.code_of(&rows, &field);
            let flags = code
                .right_idealizer()
                .map(|r| r.subfield_flags)
                .unwrap_or_default();
            census.survivors.push(Survivor {
                index: offset + idx,
                code: code.to_text(),
                subfield_flags: flags,
            });
        }
        census
    }
}

/// Generic-field fallback, same census semantics.
fn run_profile_generic(
    field: &Field,
    params: &SearchParams,
    lat: &[Subspace],
    target: Option<&[Rational]>,
    profile: &PivotProfile,
    offset: u64,
) -> Census {
    let count = profile.count(params.q);
    let mut census = Census {
        target_matched: target.map(|_| 0),
        ..Census::default()
    };
    for idx in 0..count {
        census.total += 1;
        let flat = profile.subspace_at(field, idx);
        let code = MatrixCode::from_flat(flat, params.n, params.m);
        let aa = lat
            .iter()
            .all(|u| code.subcode(u).expect("ambient").dim().is_multiple_of(params.m));
        if !aa {
            continue;
        }
        census.almost_affine += 1;
        if let Some(table) = target {
            let matched = lat
                .iter()
                .zip(table)
                .all(|(u, r)| code.rho(u).expect("ambient") == *r);
            if !matched {
                continue;
            }
            *census.target_matched.as_mut().unwrap() += 1;
        }
        let flags = code
            .right_idealizer()
            .map(|r| r.subfield_flags)
            .unwrap_or_default();
        census.survivors.push(Survivor {
            index: offset + idx,
            code: code.to_text(),
            subfield_flags: flags,
        });
    }
    census
}

/// Re-check a census certificate: totals against the Gaussian binomial and
/// every recorded sample survivor against its filters.
pub fn revalidate_census(cert: &serde_json::Value) -> Result<bool> {
    let n = cert["n"].as_u64().ok_or_else(bad_cert)? as usize;
    let m = cert["m"].as_u64().ok_or_else(bad_cert)? as usize;
    let k = cert["k"].as_u64().ok_or_else(bad_cert)? as usize;
    let q = cert["q"].as_u64().ok_or_else(bad_cert)? as u32;
    let total = cert["total"].as_u64().ok_or_else(bad_cert)?;
    if BigUint::from(total) != gaussian_binom(n * m, k, q) {
        return Ok(false);
    }
    for s in cert["survivors_sample"].as_array().ok_or_else(bad_cert)? {
        let code = MatrixCode::parse(s["code"].as_str().ok_or_else(bad_cert)?)?;
        if code.n() != n || code.m() != m || code.dim() != k {
            return Ok(false);
        }
        let (aa, _) = code.is_almost_affine(m, 1 << 24)?;
        if !aa {
            return Ok(false);
        }
        let flags = code.right_idealizer()?.subfield_flags;
        let recorded: BTreeMap<String, bool> =
            serde_json::from_value(s["subfield_flags"].clone()).map_err(|_| bad_cert())?;
        for (e, v) in recorded {
            let e: u32 = e.parse().map_err(|_| bad_cert())?;
            if flags.get(&e) != Some(&v) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn bad_cert() -> Error {
    Error::Parse("malformed census certificate".into())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tiny_census_2222() {
        // all 2-dim codes in F_2^{2x2}: 35 candidates, 5 almost affine
        // (exactly the F_4-lines), 2 matching U_{1,2}(2)
        let f = Field::gf(2, 1).unwrap();
        let params = SearchParams::new(2, 2, 2, 2);
        let census = divisible_code_search(&params).unwrap();
        assert_eq!(census.total, 35);
        assert_eq!(census.almost_affine, 5);
        assert_eq!(census.survivors.len(), 5);
        assert!(census.all_extension_linear(2));

        let target = QMatroid::uniform(1, 2, &f).unwrap();
        let matched = census.count_matching(&target).unwrap();
        assert_eq!(matched, 2);
        // the same count through the inline target filter
        let params_t =
            SearchParams::new(2, 2, 2, 2).with_target("U_{1,2}(2)", target);
        let census_t = divisible_code_search(&params_t).unwrap();
        assert_eq!(census_t.target_matched, Some(2));
        assert_eq!(census_t.survivors.len(), 2);
    }

    #[test]
    fn generic_path_agrees_with_bit_path() {
        let params = SearchParams::new(2, 2, 2, 2);
        let field = Field::gf(2, 1).unwrap();
        let lat = lattice(&field, 2);
        let profiles = pivot_profiles(4, 2);
        let mut offsets = Vec::new();
        let mut acc = 0u64;
        for p in &profiles {
            offsets.push(acc);
            acc += p.count(2);
        }
        let engine = BitEngine::prepare(&field, &params, &lat, true).unwrap();
        for (i, p) in profiles.iter().enumerate() {
            let fast = engine.run_profile(p, offsets[i], None);
            let slow = run_profile_generic(&field, &params, &lat, None, p, offsets[i]);
            assert_eq!(fast, slow, "profile {i}");
        }
    }

    #[test]
    fn uniform_target_in_f3() {
        // generic path: 1-dim codes in F_3^{2x1} representing U_{1,2}(3)
        // are the 1-dim flat subspaces without zero columns... just check
        // determinism and totals here
        let params = SearchParams::new(2, 1, 1, 3);
        let census = divisible_code_search(&params).unwrap();
        assert_eq!(census.total, 4); // gaussian_binom(2,1,3)
        assert_eq!(census.almost_affine, 4); // m = 1 divides everything
    }

    #[test]
    fn checkpoint_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("search.ckpt");
        let params = SearchParams::new(2, 2, 2, 2).with_checkpoint(&path);
        let census1 = divisible_code_search(&params).unwrap();
        assert!(path.exists());
        // resume: everything already done, result identical
        let census2 = divisible_code_search(&params).unwrap();
        assert_eq!(census1, census2);
        // incompatible params are ignored
        let params3 = SearchParams::new(3, 2, 2, 2).with_checkpoint(&path);
        let census3 = divisible_code_search(&params3).unwrap();
        assert_eq!(census3.total, 651);
    }

    #[test]
    fn sequential_matches_parallel() {
        let census_par = divisible_code_search(&SearchParams::new(3, 2, 2, 2)).unwrap();
        let census_seq =
            divisible_code_search(&SearchParams::new(3, 2, 2, 2).sequential()).unwrap();
        assert_eq!(census_par, census_seq);
    }

    #[test]
    fn budget_guard() {
        let params = SearchParams::new(4, 2, 4, 2).with_budget(1000);
        assert!(matches!(
            divisible_code_search(&params),
            Err(Error::BudgetExceeded(_))
        ));
    }

    #[test]
    fn census_verdict_revalidates() {
        let params = SearchParams::new(2, 2, 2, 2);
        let census = divisible_code_search(&params).unwrap();
        let v = census_verdict(&params, &census, Instant::now());
        assert!(revalidate_census(&v.certificate).unwrap());
    }
}
