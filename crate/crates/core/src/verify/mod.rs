//! Executable forms of the non-representability arguments: each checker
//! replays a proof pipeline step by step, records every forced quantity in a
//! structured certificate, and (where the candidate space is small enough)
//! closes the same claim by exhaustive search. Certificates are data: they
//! re-validate from scratch without trusting the process that produced them.

pub mod nonpappus;
pub mod search;

use std::time::Instant;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{Error, Result};
use crate::gf::{ExtBasis, Field};
use crate::linalg::Mat;
use crate::qmatroid::QMatroid;
use crate::rmcode::VectorCode;
use crate::subspace::{enum_subspaces, gaussian_binom, lattice, Subspace};

pub use nonpappus::{
    nonpappus_distribution, nonpappus_distribution_verdict, nonpappus_exclusion, SUPPORTED_Q,
};
pub use search::{census_verdict, divisible_code_search, Census, SearchParams, Survivor};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Confirmed,
    Refuted,
    Inconclusive,
}

impl Status {
    pub fn exit_code(&self) -> i32 {
        match self {
            Status::Confirmed => 0,
            Status::Refuted => 1,
            Status::Inconclusive => 2,
        }
    }
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct RunStats {
    pub wall_ms: u128,
    pub candidates: u64,
    pub workers: usize,
}

/// Outcome of one checker: claim, status, machine-checkable certificate.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Verdict {
    pub claim: String,
    pub status: Status,
    pub certificate: serde_json::Value,
    pub stats: RunStats,
}

impl Verdict {
    pub fn new(claim: impl Into<String>, status: Status, certificate: serde_json::Value) -> Verdict {
        Verdict {
            claim: claim.into(),
            status,
            certificate,
            stats: RunStats {
                workers: crate::par::workers(),
                ..RunStats::default()
            },
        }
    }

    pub fn with_timing(mut self, started: Instant) -> Verdict {
        self.stats.wall_ms = started.elapsed().as_millis();
        self
    }
}

/// The ten isomorphism classes of rank-two q-matroids on F_2^4, keyed by
/// (position, number of bases), with the extension degrees m <= 4 admitting
/// an extension-field representation. Known classification data, shipped as
/// a fixture.
#[derive(Clone, Copy, Debug)]
pub struct RankTwoClass {
    pub class_index: u32,
    pub bases: u32,
    pub ext_rep_m: &'static [u32],
    pub note: &'static str,
}

pub const RANK_TWO_CLASSES: [RankTwoClass; 10] = [
    RankTwoClass { class_index: 1, bases: 16, ext_rep_m: &[1, 2, 3, 4], note: "" },
    RankTwoClass { class_index: 2, bases: 24, ext_rep_m: &[2, 3, 4], note: "" },
    RankTwoClass { class_index: 3, bases: 28, ext_rep_m: &[3, 4], note: "non-paving" },
    RankTwoClass { class_index: 4, bases: 28, ext_rep_m: &[3, 4], note: "paving" },
    RankTwoClass { class_index: 5, bases: 30, ext_rep_m: &[2, 4], note: "" },
    RankTwoClass { class_index: 6, bases: 31, ext_rep_m: &[], note: "" },
    RankTwoClass { class_index: 7, bases: 32, ext_rep_m: &[3, 4], note: "" },
    RankTwoClass { class_index: 8, bases: 33, ext_rep_m: &[4], note: "" },
    RankTwoClass { class_index: 9, bases: 34, ext_rep_m: &[4], note: "almost uniform" },
    RankTwoClass { class_index: 10, bases: 35, ext_rep_m: &[4], note: "uniform" },
];

pub fn rank_two_class(class_index: u32) -> Option<&'static RankTwoClass> {
    RANK_TWO_CLASSES.iter().find(|r| r.class_index == class_index)
}

/// No representation of the uniform q-matroid U_{k,n}(q) by n x m matrix
/// codes exists for m < n: forced dimension km, forced distance n-k+1, then
/// a Singleton contradiction. Small parameter sets are additionally closed
/// by exhaustive search over all km-dimensional candidate codes.
pub fn uniform_obstruction(
    k: usize,
    n: usize,
    q: u32,
    m: usize,
    search_budget: u64,
) -> Result<Verdict> {
    if k == 0 || k >= n {
        return Err(Error::BadParams(format!("need 0 < k < n, got k={k} n={n}")));
    }
    if m == 0 || m >= n {
        return Err(Error::BadParams(format!(
            "the obstruction concerns m < n, got m={m} n={n}"
        )));
    }
    let started = Instant::now();
    let field = Field::of_order(q)?;
    let claim = format!("U_{{{k},{n}}}({q}) has no {n} x {m} matrix-code representation");
    let k_prime = k * m;
    let d_forced = n - k + 1;
    let mut cert = json!({
        "kind": "uniform_obstruction",
        "k": k, "n": n, "q": q, "m": m,
        "k_prime": k_prime,
        "d_forced": d_forced,
    });
    let obj = cert.as_object_mut().unwrap();
    let analytic_ok = if k == 1 {
        // d = n exceeds the rank bound min(n, m) = m
        obj.insert("step".into(), json!("distance exceeds matrix rank bound"));
        obj.insert("max_rank".into(), json!(m));
        d_forced > m
    } else {
        let lhs = (k * m) as i64;
        let rhs = n as i64 * (m as i64 - n as i64 + k as i64);
        obj.insert("step".into(), json!("Singleton bound"));
        obj.insert("singleton_lhs".into(), json!(lhs));
        obj.insert("singleton_rhs".into(), json!(rhs));
        lhs > rhs
    };
    obj.insert("contradiction".into(), json!(analytic_ok));

    let candidates = gaussian_binom(n * m, k_prime, q);
    let mut exhaustive_ok = true;
    if candidates <= BigUint::from(search_budget) {
        let target = QMatroid::uniform(k, n, &field)?;
        let params = SearchParams::new(n, m, k_prime, q)
            .with_budget(search_budget)
            .with_target(format!("U_{{{k},{n}}}({q})"), target);
        let census = divisible_code_search(&params)?;
        exhaustive_ok = census.target_matched == Some(0);
        obj.insert(
            "exhaustive".into(),
            json!({
                "candidates": census.total,
                "matching_survivors": census.target_matched,
            }),
        );
    } else {
        obj.insert("exhaustive".into(), serde_json::Value::Null);
    }

    let status = if analytic_ok && exhaustive_ok {
        Status::Confirmed
    } else {
        Status::Refuted
    };
    Ok(Verdict::new(claim, status, cert).with_timing(started))
}

/// Parameter forcing for almost uniform q-matroids: any matrix-code
/// representation of AU_{k,n}(q, X) with m < n must have m = n-1 and
/// parameters [n x (n-1), k(n-1), n-k]. The punctured-code reduction is
/// replayed by running the uniform obstruction on n-1 for every m < n-1.
pub fn almost_uniform_params(k: usize, n: usize, q: u32) -> Result<Verdict> {
    if k == 0 || k + 1 >= n {
        return Err(Error::BadParams(format!(
            "need 0 < k < n-1, got k={k} n={n}"
        )));
    }
    let started = Instant::now();
    let claim = format!(
        "a matrix-code representation of AU_{{{k},{n}}}({q}, X) with m < {n} is forced to \
         [{n} x {}, {}, {}]",
        n - 1,
        k * (n - 1),
        n - k
    );
    let d_forced = n - k;
    let mut excluded = Vec::new();
    let mut all_ok = true;
    for m in 1..n - 1 {
        // puncturing at e with X not inside e^perp restricts to the uniform
        // q-matroid of rank k on an (n-1)-dimensional space
        let v = uniform_obstruction(k, n - 1, q, m, 0)?;
        all_ok &= v.status == Status::Confirmed;
        excluded.push(json!({
            "m": m,
            "status": v.status,
            "certificate": v.certificate,
        }));
    }
    let cert = json!({
        "kind": "almost_uniform_params",
        "k": k, "n": n, "q": q,
        "d_forced": d_forced,
        "punctured_uniform_excluded": excluded,
        "forced_m": n - 1,
        "forced_params": {
            "rows": n,
            "cols": n - 1,
            "dim": k * (n - 1),
            "distance": n - k,
        },
    });
    let status = if all_ok {
        Status::Confirmed
    } else {
        Status::Refuted
    };
    Ok(Verdict::new(claim, status, cert).with_timing(started))
}

/// Rank-one q-matroids are never purely multilinear: the forced distance
/// n - t rules out 1 < m < n-t, an explicit extension-field code realizes
/// every m >= n-t, and small middle cases close by exhaustive search.
pub fn rank1_exclusion(n: usize, t: usize, q: u32, search_budget: u64) -> Result<Verdict> {
    if t == 0 || t + 1 >= n {
        return Err(Error::BadParams(format!(
            "need 0 < t < n-1, got t={t} n={n}"
        )));
    }
    let started = Instant::now();
    let field = Field::of_order(q)?;
    let e = n - t;
    let claim = format!(
        "the rank-one q-matroid on F_{q}^{n} with loop space of dimension {t} \
         is not purely m-multilinear for any m > 1"
    );
    let d_forced = e;
    // analytic: a representing code has k' = m and distance n - t; a matrix
    // in F_q^{n x m} has rank at most m, so 1 < m < n - t is impossible
    let excluded: Vec<usize> = (2..e).collect();

    // witness for m = n - t: the extension-field code with generator
    // (0,...,0, 1, a, a^2, ..., a^{e-1})
    let ext = Field::of_order(q.pow(e as u32))?;
    let alpha = ext.primitive();
    let mut gen_row = vec![0u16; n];
    for (i, slot) in gen_row.iter_mut().enumerate().skip(t) {
        *slot = ext.pow(alpha, (i - t) as u64);
    }
    let gen = Mat::from_rows(&ext, &[gen_row.clone()]);
    let vc = VectorCode::new(&field, &ext, gen)?;
    let basis = ExtBasis::polynomial(&field, &ext)?;
    let expanded = vc.expand(&basis)?;
    let target = QMatroid::rank_one(n, t, &field)?;
    let lat_size: BigUint = (0..=n).map(|d| gaussian_binom(n, d, q)).sum();
    let witness_checked = lat_size <= BigUint::from(100_000u64);
    let witness_matches = if witness_checked {
        lattice(&field, n)
            .iter()
            .all(|u| expanded.rho(u).expect("ambient") == target.rank(u))
    } else {
        true
    };

    // exhaustive nonexistence for the excluded block sizes within budget
    let mut searches = Vec::new();
    let mut searches_ok = true;
    for m in excluded.iter().copied() {
        let candidates = gaussian_binom(n * m, m, q);
        if candidates <= BigUint::from(search_budget) {
            let params = SearchParams::new(n, m, m, q)
                .with_budget(search_budget)
                .with_target(format!("rank-one(n={n}, t={t}, q={q})"), target.clone());
            let census = divisible_code_search(&params)?;
            searches_ok &= census.target_matched == Some(0);
            searches.push(json!({
                "m": m,
                "candidates": census.total,
                "matching_survivors": census.target_matched,
            }));
        }
    }

    let cert = json!({
        "kind": "rank1_exclusion",
        "n": n, "t": t, "q": q,
        "k_prime": "m",
        "d_forced": d_forced,
        "excluded_m": excluded,
        "witness_generator": gen_row,
        "witness_field_order": ext.q(),
        "witness_lattice_checked": witness_checked,
        "witness_matches": witness_matches,
        "searches": searches,
    });
    let status = if witness_matches && searches_ok {
        Status::Confirmed
    } else {
        Status::Refuted
    };
    Ok(Verdict::new(claim, status, cert).with_timing(started))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ContradictionClass {
    /// Almost uniform class: forced distribution (1, 0, 7, 84), sum 92 != 64.
    Class9_34,
    /// Spread paving class: forced distribution (1, 0, 35, 0), sum 36 != 64.
    Class5_30,
}

impl ContradictionClass {
    pub fn parse(s: &str) -> Option<ContradictionClass> {
        match s.replace(['(', ')', ' '], "").as_str() {
            "9,34" | "9-34" => Some(ContradictionClass::Class9_34),
            "5,30" | "5-30" => Some(ContradictionClass::Class5_30),
            _ => None,
        }
    }
}

/// Greedy 2-spread of F_2^4 in subspace enumeration order: five pairwise
/// disjoint 2-dimensional subspaces covering all 15 nonzero vectors.
pub fn greedy_spread(field: &Field) -> Vec<Subspace> {
    let mut spread: Vec<Subspace> = Vec::new();
    for cand in enum_subspaces(field, 4, 2) {
        if spread
            .iter()
            .all(|s| s.intersect(&cand).expect("ambient 4").dim() == 0)
        {
            spread.push(cand);
            if spread.len() == 5 {
                break;
            }
        }
    }
    spread
}

/// Counting contradiction for the hypothetical F_2-[4x3, 6, 2] representing
/// codes of the classes (9,34) and (5,30): the rank distribution forced by
/// the rank function overshoots or undershoots |C| = 64. Every intermediate
/// count is derived from explicit subspace computations.
pub fn counting_contradiction(class: ContradictionClass, q: u32) -> Result<Verdict> {
    if q != 2 {
        return Err(Error::UnsupportedQ(q));
    }
    let started = Instant::now();
    let field = Field::gf(2, 1)?;
    let m = 3usize;
    let k_prime = 6usize;
    let code_size = 1u64 << k_prime;
    let ones: Vec<Subspace> = enum_subspaces(&field, 4, 1).collect();
    match class {
        ContradictionClass::Class9_34 => {
            let x = Subspace::from_rows(&field, 4, &[vec![1, 0, 0, 0, ], vec![0, 1, 0, 0]]);
            let in_x: Vec<&Subspace> = ones.iter().filter(|u| u.is_subspace_of(&x)).collect();
            let off_x: Vec<&Subspace> = ones.iter().filter(|u| !u.is_subspace_of(&x)).collect();
            // pairwise: C(U^perp) and C(V^perp) can only share rank <= 2
            // words, whose column space would be X^perp inside U^perp
            let mut pairwise_ok = true;
            for (i, u) in off_x.iter().enumerate() {
                for v in off_x.iter().skip(i + 1) {
                    let int_dim = u.orth().intersect(&v.orth())?.dim();
                    pairwise_ok &= int_dim == 2;
                }
            }
            let mut xperp_ok = true;
            for u in &off_x {
                xperp_ok &= !x.orth().is_subspace_of(&u.orth());
            }
            // forced: dim C(X^perp) = 3 so A_2 = 2^3 - 1; each U off X gives
            // dim C(U^perp) = 3 of pure rank-3 words, pairwise trivial
            let a2 = (1u64 << m) - 1;
            let a3 = off_x.len() as u64 * ((1u64 << m) - 1);
            let total = 1 + a2 + a3;
            let contradiction = pairwise_ok && xperp_ok && total != code_size;
            let cert = json!({
                "kind": "counting_contradiction",
                "class": "9,34",
                "q": q,
                "code_params": {"rows": 4, "cols": 3, "dim": k_prime, "distance": 2},
                "x": x.to_text(),
                "ones_in_x": in_x.len(),
                "ones_off_x": off_x.len(),
                "perp_pairwise_dim2": pairwise_ok,
                "xperp_not_inside_offx_perps": xperp_ok,
                "forced_distribution": [1, 0, a2, a3],
                "forced_sum": total,
                "code_size": code_size,
                "contradiction": contradiction,
            });
            let status = if contradiction {
                Status::Confirmed
            } else {
                Status::Refuted
            };
            Ok(Verdict::new(
                "isomorphism class (9,34) on F_2^4 is not 3-multilinear".to_string(),
                status,
                cert,
            )
            .with_timing(started))
        }
        ContradictionClass::Class5_30 => {
            let spread = greedy_spread(&field);
            let spread_ok = spread.len() == 5;
            let mut pairwise_disjoint = true;
            for (i, s) in spread.iter().enumerate() {
                for s2 in spread.iter().skip(i + 1) {
                    pairwise_disjoint &= s.intersect(s2)?.dim() == 0;
                }
            }
            // the five members cover each 1-dim subspace exactly once
            let mut unique_cover = true;
            for u in &ones {
                let owners = spread
                    .iter()
                    .filter(|s| u.is_subspace_of(s))
                    .count();
                unique_cover &= owners == 1;
            }
            let cover_count = spread.len() as u64 * ((1u64 << 2) - 1); // 5 * 3 points
            let point_count = ones.len() as u64;
            // perps of distinct members intersect trivially
            let mut perp_trivial = true;
            for (i, s) in spread.iter().enumerate() {
                for s2 in spread.iter().skip(i + 1) {
                    perp_trivial &= s.orth().intersect(&s2.orth())?.dim() == 0;
                }
            }
            let a2 = spread.len() as u64 * ((1u64 << m) - 1);
            let a3 = 0u64;
            let total = 1 + a2 + a3;
            let contradiction = spread_ok
                && pairwise_disjoint
                && unique_cover
                && perp_trivial
                && cover_count == point_count
                && total != code_size;
            let cert = json!({
                "kind": "counting_contradiction",
                "class": "5,30",
                "q": q,
                "code_params": {"rows": 4, "cols": 3, "dim": k_prime, "distance": 2},
                "spread": spread.iter().map(|s| s.to_text()).collect::<Vec<_>>(),
                "pairwise_disjoint": pairwise_disjoint,
                "unique_cover": unique_cover,
                "covered_points": cover_count,
                "total_points": point_count,
                "perp_pairwise_trivial": perp_trivial,
                "forced_distribution": [1, 0, a2, a3],
                "forced_sum": total,
                "code_size": code_size,
                "contradiction": contradiction,
            });
            let status = if contradiction {
                Status::Confirmed
            } else {
                Status::Refuted
            };
            Ok(Verdict::new(
                "isomorphism class (5,30) on F_2^4 is not 3-multilinear".to_string(),
                status,
                cert,
            )
            .with_timing(started))
        }
    }
}

/// First four members of the canonical greedy spread, as the disjoint
/// quadruple for the class (6,31) argument.
pub fn canonical_disjoint_quadruple(field: &Field) -> Vec<Subspace> {
    greedy_spread(field).into_iter().take(4).collect()
}

/// The spread argument for class (6,31): the perps of four pairwise disjoint
/// 2-spaces complete uniquely to a 2-spread, and the fifth projection map is
/// the sum of the third and fourth, which forces dim C(S5^perp) >= m for any
/// representing code and contradicts the rank function at S5.
pub fn spread_argument(quad: &[Subspace], m: usize) -> Result<Verdict> {
    if quad.len() != 4 {
        return Err(Error::BadParams(format!(
            "need exactly 4 subspaces, got {}",
            quad.len()
        )));
    }
    let started = Instant::now();
    let field = quad[0].field().clone();
    if field.q() != 2 {
        return Err(Error::UnsupportedQ(field.q()));
    }
    for s in quad {
        if s.ambient() != 4 || s.dim() != 2 {
            return Err(Error::BadParams(
                "members must be 2-dimensional subspaces of F_2^4".into(),
            ));
        }
    }
    for (i, s) in quad.iter().enumerate() {
        for s2 in quad.iter().skip(i + 1) {
            if s.intersect(s2)?.dim() != 0 {
                return Err(Error::NotDisjoint);
            }
        }
    }
    let perps: Vec<Subspace> = quad.iter().map(|s| s.orth()).collect();
    let mut perp_disjoint = true;
    for (i, p) in perps.iter().enumerate() {
        for p2 in perps.iter().skip(i + 1) {
            perp_disjoint &= p.intersect(p2)?.dim() == 0;
        }
    }
    // leftover nonzero vectors of F_2^4
    let nonzero = |v: &Vec<u16>| v.iter().any(|&x| x != 0);
    let all_vecs: Vec<Vec<u16>> = crate::subspace::all_vectors(&field, 4)
        .filter(nonzero)
        .collect();
    let covered: std::collections::HashSet<Vec<u16>> = perps
        .iter()
        .flat_map(|p| p.vectors().into_iter().filter(|v| nonzero(v)))
        .collect();
    let leftover: Vec<Vec<u16>> = all_vecs
        .iter()
        .filter(|v| !covered.contains(*v))
        .cloned()
        .collect();
    let leftover_count = leftover.len();
    // closure under addition: xor of any two distinct leftover vectors is the
    // third, so together with zero they form a 2-dimensional subspace
    let p5 = Subspace::from_rows(&field, 4, &leftover);
    let completion_ok = leftover_count == 3 && p5.dim() == 2 && {
        let vecs: std::collections::HashSet<Vec<u16>> =
            p5.vectors().into_iter().filter(|v| nonzero(v)).collect();
        vecs == leftover.iter().cloned().collect()
    };
    let s5 = p5.orth();
    let s5_new = quad.iter().all(|s| *s != s5);

    // projections with respect to E = P1 + P2: alpha_j(x) is the unique
    // y in P2 with x + y in P_j
    let p1v: Vec<Vec<u16>> = perps[0].vectors().into_iter().filter(|v| nonzero(v)).collect();
    let add = |a: &[u16], b: &[u16]| -> Vec<u16> {
        a.iter().zip(b).map(|(&x, &y)| field.add(x, y)).collect()
    };
    let alpha = |pj: &Subspace| -> Option<std::collections::BTreeMap<Vec<u16>, Vec<u16>>> {
        let mut map = std::collections::BTreeMap::new();
        for v in pj.vectors().into_iter().filter(|v| nonzero(v)) {
            // decompose v = x + y, x in P1, y in P2
            let mut found = None;
            for x in &p1v {
                let y = add(&v, x);
                if perps[1].contains(&y) && nonzero(&y) {
                    found = Some((x.clone(), y));
                    break;
                }
            }
            let (x, y) = found?;
            if map.insert(x, y).is_some() {
                return None; // not injective
            }
        }
        (map.len() == p1v.len()).then_some(map)
    };
    let a3 = alpha(&perps[2]);
    let a4 = alpha(&perps[3]);
    let a5 = alpha(&p5);
    let maps_ok = a3.is_some() && a4.is_some() && a5.is_some();
    let pointwise = if let (Some(a3), Some(a4), Some(a5)) = (&a3, &a4, &a5) {
        p1v.iter()
            .all(|x| add(&a3[x], &a4[x]) == a5[x])
    } else {
        false
    };

    let fmt_map = |m: &Option<std::collections::BTreeMap<Vec<u16>, Vec<u16>>>| {
        m.as_ref().map(|m| {
            m.iter()
                .map(|(x, y)| {
                    format!(
                        "{} -> {}",
                        x.iter().map(|d| d.to_string()).collect::<String>(),
                        y.iter().map(|d| d.to_string()).collect::<String>()
                    )
                })
                .collect::<Vec<_>>()
        })
    };
    let ok = perp_disjoint && completion_ok && s5_new && maps_ok && pointwise;
    let cert = json!({
        "kind": "spread_argument",
        "m": m,
        "family": quad.iter().map(|s| s.to_text()).collect::<Vec<_>>(),
        "perps": perps.iter().map(|s| s.to_text()).collect::<Vec<_>>(),
        "perps_pairwise_disjoint": perp_disjoint,
        "leftover_count": leftover_count,
        "completion": p5.to_text(),
        "completion_unique": completion_ok,
        "s5": s5.to_text(),
        "s5_outside_family": s5_new,
        "alpha3": fmt_map(&a3),
        "alpha4": fmt_map(&a4),
        "alpha5": fmt_map(&a5),
        "alpha5_equals_alpha3_plus_alpha4": pointwise,
        "conclusion": format!(
            "any representing code C satisfies dim C(S5^perp) >= {m}, while the \
             rank function forces dim C(S5^perp) = 0"
        ),
    });
    let status = if ok { Status::Confirmed } else { Status::Refuted };
    Ok(Verdict::new(
        "isomorphism class (6,31) on F_2^4 is not m-multilinear for any m > 1",
        status,
        cert,
    )
    .with_timing(started))
}

/// Per-class checker for the rank-two classes on F_2^4 in the range
/// 1 < m < 4. A shared census of the 4 x 2 sweep closes every m = 2 case;
/// class-specific arguments or Table 1 fixture data close m = 3.
pub fn class_checker(class_index: u32, q: u32, census: Option<&Census>) -> Result<Verdict> {
    if q != 2 {
        return Err(Error::UnsupportedQ(q));
    }
    let row = rank_two_class(class_index)
        .ok_or_else(|| Error::BadParams(format!("no class {class_index}")))?;
    let started = Instant::now();
    let claim = format!(
        "isomorphism class ({}, {}) on F_2^4 is not purely m-multilinear for 1 < m < 4",
        row.class_index, row.bases
    );
    let mut pieces = Vec::new();
    let mut all_ok = true;

    // m = 2: either the class is F_4-representable (not pure by definition),
    // or the shared census shows every 2-almost-affine 4 x 2 code is right
    // F_4-linear, hence every 2-multilinear class is F_4-representable
    if row.ext_rep_m.contains(&2) {
        pieces.push(json!({
            "m": 2,
            "method": "known-extension-representable",
            "ok": true,
        }));
    } else if let Some(census) = census {
        let ok = census.all_extension_linear(2) && census.total == 200787;
        all_ok &= ok;
        pieces.push(json!({
            "m": 2,
            "method": "census-all-right-F4-linear",
            "census_total": census.total,
            "census_almost_affine": census.almost_affine,
            "ok": ok,
        }));
    } else {
        all_ok = false;
        pieces.push(json!({
            "m": 2,
            "method": "census-missing",
            "ok": false,
        }));
    }

    // m = 3
    match class_index {
        1 | 2 | 3 | 4 | 7 => {
            let ok = row.ext_rep_m.contains(&3);
            all_ok &= ok;
            pieces.push(json!({
                "m": 3,
                "method": "known-extension-representable",
                "ok": ok,
            }));
        }
        5 => {
            let v = counting_contradiction(ContradictionClass::Class5_30, q)?;
            all_ok &= v.status == Status::Confirmed;
            pieces.push(json!({
                "m": 3,
                "method": "counting-contradiction",
                "status": v.status,
                "certificate": v.certificate,
            }));
        }
        6 => {
            let field = Field::gf(2, 1)?;
            let quad = canonical_disjoint_quadruple(&field);
            let v = spread_argument(&quad, 3)?;
            all_ok &= v.status == Status::Confirmed;
            pieces.push(json!({
                "m": "all m > 1",
                "method": "spread-argument",
                "status": v.status,
                "certificate": v.certificate,
            }));
        }
        8 => {
            // prior verification in the literature; recorded, not re-derived
            pieces.push(json!({
                "m": 3,
                "method": "cited-prior-verification",
                "ok": true,
            }));
        }
        9 => {
            let forced = almost_uniform_params(2, 4, q)?;
            let v = counting_contradiction(ContradictionClass::Class9_34, q)?;
            let ok = forced.status == Status::Confirmed && v.status == Status::Confirmed;
            all_ok &= ok;
            pieces.push(json!({
                "m": 3,
                "method": "parameter-forcing + counting-contradiction",
                "forcing": forced.certificate,
                "status": v.status,
                "certificate": v.certificate,
            }));
        }
        10 => {
            let v = uniform_obstruction(2, 4, q, 3, 0)?;
            all_ok &= v.status == Status::Confirmed;
            pieces.push(json!({
                "m": "all m < 4",
                "method": "uniform-theorem",
                "status": v.status,
                "certificate": v.certificate,
            }));
        }
        _ => unreachable!("class indices are 1..=10"),
    }

    let cert = json!({
        "kind": "class_check",
        "class": row.class_index,
        "bases": row.bases,
        "known_ext_rep_m": row.ext_rep_m,
        "pieces": pieces,
    });
    let status = if all_ok {
        Status::Confirmed
    } else {
        Status::Inconclusive
    };
    Ok(Verdict::new(claim, status, cert).with_timing(started))
}

/// The multilinearity classification for ground spaces F_2^3 (all m > 1) and
/// F_2^4 (1 < m < 4): aggregates the uniform theorem, rank-one theorem,
/// counting contradictions, the spread argument and the census into one
/// report, noting which classes rest on analytic certificates, exhaustive
/// search, or cited fixture data.
pub fn classification_report(n: usize, q: u32, census: Option<&Census>) -> Result<Verdict> {
    if q != 2 || !(n == 3 || n == 4) {
        return Err(Error::BadParams(format!(
            "classification covers n in {{3,4}} over GF(2), got n={n} q={q}"
        )));
    }
    let started = Instant::now();
    let mut entries = Vec::new();
    let mut all_ok = true;
    let m_desc = if n == 3 { "all m > 1" } else { "1 < m < 4" };

    // rank 0: representable by the zero vector code over every extension
    entries.push(json!({
        "rank": 0,
        "class": "U_{0,n}",
        "method": "extension-representable for every m",
        "ok": true,
    }));

    // rank 1 classes, by loop-space dimension t
    for t in 0..n - 1 {
        if t == 0 {
            // uniform U_{1,n}: analytic for all m < n, search where feasible
            let mut ok = true;
            let mut ms = Vec::new();
            for m in 2..n {
                let budget = if n * m <= 8 { 100_000 } else { 0 };
                let v = uniform_obstruction(1, n, q, m, budget)?;
                ok &= v.status == Status::Confirmed;
                ms.push(json!({"m": m, "status": v.status}));
            }
            all_ok &= ok;
            entries.push(json!({
                "rank": 1,
                "class": format!("U_{{1,{n}}}"),
                "method": "uniform-theorem (m >= n is extension-representable)",
                "cases": ms,
                "ok": ok,
            }));
        } else {
            let v = rank1_exclusion(n, t, q, 100_000)?;
            let ok = v.status == Status::Confirmed;
            all_ok &= ok;
            entries.push(json!({
                "rank": 1,
                "class": format!("rank-one, loop dim {t}"),
                "method": "rank-one-theorem",
                "status": v.status,
                "ok": ok,
            }));
        }
    }
    // t = n-1 is representable over the base field itself
    entries.push(json!({
        "rank": 1,
        "class": format!("rank-one, loop dim {}", n - 1),
        "method": "base-field representable, extension-representable for every m",
        "ok": true,
    }));

    if n == 4 {
        for row in &RANK_TWO_CLASSES {
            let v = class_checker(row.class_index, q, census)?;
            let ok = v.status == Status::Confirmed;
            all_ok &= ok;
            entries.push(json!({
                "rank": 2,
                "class": format!("({}, {})", row.class_index, row.bases),
                "status": v.status,
                "pieces": v.certificate["pieces"],
                "ok": ok,
            }));
        }
    }

    // higher ranks by duality
    for k in (n / 2 + 1)..=n {
        entries.push(json!({
            "rank": k,
            "class": format!("all rank-{k} q-matroids"),
            "method": format!("duality with rank {}", n - k),
            "ok": true,
        }));
    }

    let cert = json!({
        "kind": "classification",
        "n": n,
        "q": q,
        "m_range": m_desc,
        "entries": entries,
        "census": census.map(|c| json!({
            "total": c.total,
            "almost_affine": c.almost_affine,
            "all_right_f4_linear": c.all_extension_linear(2),
        })),
    });
    let status = if all_ok {
        Status::Confirmed
    } else {
        Status::Inconclusive
    };
    Ok(Verdict::new(
        format!("no q-matroid on F_2^{n} is purely m-multilinear for {m_desc}"),
        status,
        cert,
    )
    .with_timing(started))
}

/// Re-run the checker recorded in a certificate and compare the forced
/// quantities; censuses re-check their recorded survivors instead of
/// re-enumerating.
pub fn revalidate(verdict: &Verdict) -> Result<bool> {
    let cert = &verdict.certificate;
    let kind = cert["kind"].as_str().unwrap_or_default();
    let get = |k: &str| -> Result<u64> {
        cert[k]
            .as_u64()
            .ok_or_else(|| Error::Parse(format!("certificate missing {k}")))
    };
    let strip_volatile = |mut v: serde_json::Value| -> serde_json::Value {
        if let Some(o) = v.as_object_mut() {
            o.remove("exhaustive");
            o.remove("searches");
        }
        v
    };
    match kind {
        "uniform_obstruction" => {
            let v = uniform_obstruction(
                get("k")? as usize,
                get("n")? as usize,
                get("q")? as u32,
                get("m")? as usize,
                0,
            )?;
            Ok(v.status == verdict.status
                && strip_volatile(v.certificate) == strip_volatile(cert.clone()))
        }
        "almost_uniform_params" => {
            let v = almost_uniform_params(get("k")? as usize, get("n")? as usize, get("q")? as u32)?;
            Ok(v.status == verdict.status && v.certificate == *cert)
        }
        "rank1_exclusion" => {
            let v = rank1_exclusion(get("n")? as usize, get("t")? as usize, get("q")? as u32, 0)?;
            Ok(v.status == verdict.status
                && strip_volatile(v.certificate) == strip_volatile(cert.clone()))
        }
        "nonpappus_exclusion" => {
            let v = nonpappus_exclusion(get("q")? as u32, get("m")? as usize)?;
            Ok(v.status == verdict.status && v.certificate == *cert)
        }
        "nonpappus_distribution" => {
            let v = nonpappus_distribution_verdict(get("q")? as u32, get("m")? as usize)?;
            Ok(v.certificate == *cert)
        }
        "counting_contradiction" => {
            let class = ContradictionClass::parse(cert["class"].as_str().unwrap_or_default())
                .ok_or_else(|| Error::Parse("unknown contradiction class".into()))?;
            let v = counting_contradiction(class, get("q")? as u32)?;
            Ok(v.status == verdict.status && v.certificate == *cert)
        }
        "spread_argument" => {
            let field = Field::gf(2, 1)?;
            let quad: Vec<Subspace> = cert["family"]
                .as_array()
                .ok_or_else(|| Error::Parse("missing family".into()))?
                .iter()
                .map(|t| {
                    let rows: Vec<&str> = t.as_str().unwrap_or_default().lines().collect();
                    Ok(Subspace::from_generators(&Mat::parse_rows(&field, &rows)?))
                })
                .collect::<Result<_>>()?;
            let v = spread_argument(&quad, get("m")? as usize)?;
            Ok(v.status == verdict.status && v.certificate == *cert)
        }
        "divisible_census" => search::revalidate_census(cert),
        "classification" | "class_check" => {
            // aggregate kinds: accept when the recorded pieces are internally
            // consistent (every piece marked ok under a confirmed status)
            Ok(verdict.status != Status::Confirmed
                || cert["entries"]
                    .as_array()
                    .or_else(|| cert["pieces"].as_array())
                    .map(|a| {
                        a.iter().all(|e| {
                            e["ok"].as_bool().unwrap_or(true)
                                && e["status"].as_str().is_none_or(|s| s == "confirmed")
                        })
                    })
                    .unwrap_or(false))
        }
        _ => Err(Error::Parse(format!("unknown certificate kind {kind:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_obstruction_examples() {
        // k = 1, n = 3, m = 2: distance n = 3 > m, plus exhaustive over 651
        let v = uniform_obstruction(1, 3, 2, 2, 100_000).unwrap();
        assert_eq!(v.status, Status::Confirmed);
        assert_eq!(v.certificate["exhaustive"]["candidates"], 651);
        assert_eq!(v.certificate["exhaustive"]["matching_survivors"], 0);

        // (k,n) = (2,4), m = 3: Singleton 6 <= 4 fails
        let v = uniform_obstruction(2, 4, 2, 3, 0).unwrap();
        assert_eq!(v.status, Status::Confirmed);
        assert_eq!(v.certificate["singleton_lhs"], 6);
        assert_eq!(v.certificate["singleton_rhs"], 4);

        assert!(uniform_obstruction(0, 3, 2, 2, 0).is_err());
        assert!(uniform_obstruction(1, 3, 2, 3, 0).is_err()); // m >= n
    }

    #[test]
    fn uniform_obstruction_all_small_params() {
        for n in 2..=6usize {
            for k in 1..n {
                for m in 1..n {
                    let v = uniform_obstruction(k, n, 2, m, 0).unwrap();
                    assert_eq!(v.status, Status::Confirmed, "k={k} n={n} m={m}");
                }
            }
        }
    }

    #[test]
    fn almost_uniform_forcing() {
        let v = almost_uniform_params(2, 4, 2).unwrap();
        assert_eq!(v.status, Status::Confirmed);
        assert_eq!(v.certificate["forced_params"]["cols"], 3);
        assert_eq!(v.certificate["forced_params"]["dim"], 6);
        assert_eq!(v.certificate["forced_params"]["distance"], 2);
        let v = almost_uniform_params(1, 3, 2).unwrap();
        assert_eq!(v.certificate["forced_params"]["dim"], 2);
        let v = almost_uniform_params(2, 5, 2).unwrap();
        assert_eq!(v.certificate["forced_params"]["dim"], 8);
        assert_eq!(v.certificate["forced_params"]["distance"], 3);
        assert!(almost_uniform_params(3, 4, 2).is_err());
    }

    #[test]
    fn counting_contradictions() {
        let v = counting_contradiction(ContradictionClass::Class9_34, 2).unwrap();
        assert_eq!(v.status, Status::Confirmed);
        assert_eq!(v.certificate["forced_sum"], 92);
        assert_eq!(v.certificate["ones_in_x"], 3);
        assert_eq!(v.certificate["ones_off_x"], 12);

        let v = counting_contradiction(ContradictionClass::Class5_30, 2).unwrap();
        assert_eq!(v.status, Status::Confirmed);
        assert_eq!(v.certificate["forced_sum"], 36);
        assert_eq!(v.certificate["covered_points"], 15);
    }

    #[test]
    fn spread_argument_works() {
        let field = Field::gf(2, 1).unwrap();
        let quad = canonical_disjoint_quadruple(&field);
        assert_eq!(quad.len(), 4);
        let v = spread_argument(&quad, 2).unwrap();
        assert_eq!(v.status, Status::Confirmed);
        assert_eq!(v.certificate["leftover_count"], 3);
        assert_eq!(v.certificate["alpha5_equals_alpha3_plus_alpha4"], true);

        // overlapping members rejected
        let s1 = Subspace::from_rows(&field, 4, &[vec![1, 0, 0, 0], vec![0, 1, 0, 0]]);
        let s2 = Subspace::from_rows(&field, 4, &[vec![1, 0, 0, 0], vec![0, 0, 1, 0]]);
        let bad = vec![s1.clone(), s2, quad[2].clone(), quad[3].clone()];
        assert!(matches!(spread_argument(&bad, 2), Err(Error::NotDisjoint)));
    }

    #[test]
    fn rank1_exclusion_small() {
        // (3,1): excluded range empty, witness over GF(4)
        let v = rank1_exclusion(3, 1, 2, 0).unwrap();
        assert_eq!(v.status, Status::Confirmed);
        assert_eq!(v.certificate["witness_matches"], true);
        assert!(rank1_exclusion(4, 3, 2, 0).is_err());
        assert!(rank1_exclusion(4, 0, 2, 0).is_err());
    }

    #[test]
    fn revalidation_roundtrip() {
        let v = uniform_obstruction(2, 4, 2, 3, 0).unwrap();
        assert!(revalidate(&v).unwrap());
        let v = almost_uniform_params(2, 4, 2).unwrap();
        assert!(revalidate(&v).unwrap());
        let v = nonpappus_exclusion(2, 8).unwrap();
        assert!(revalidate(&v).unwrap());
        let v = counting_contradiction(ContradictionClass::Class9_34, 2).unwrap();
        assert!(revalidate(&v).unwrap());
        let field = Field::gf(2, 1).unwrap();
        let v = spread_argument(&canonical_disjoint_quadruple(&field), 2).unwrap();
        assert!(revalidate(&v).unwrap());
        // a tampered certificate fails
        let mut bad = counting_contradiction(ContradictionClass::Class9_34, 2).unwrap();
        bad.certificate["forced_sum"] = json!(64);
        assert!(!revalidate(&bad).unwrap());
    }
}
