//! Non-representability of the non-Pappus q-matroid: the block-size
//! obstruction for m <= 8 and the forced rank distribution for m >= 9.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::json;

use crate::error::{Error, Result};
use crate::rmcode::RankDistribution;
use crate::subspace::gaussian_binom;
use crate::verify::{Status, Verdict};

/// Prime powers the divisibility obstruction is checked for.
pub const SUPPORTED_Q: [u32; 10] = [2, 3, 4, 5, 7, 8, 9, 11, 13, 16];

/// Coefficients of P, ascending degree:
/// P(x) = x^10 + x^9 + 2x^8 + 2x^7 + 3x^6 + 3x^5 + 3x^4 + 2x^3 + 2x^2 + x - 7.
pub const P_COEFFS: [i64; 11] = [-7, 1, 2, 2, 3, 3, 3, 2, 2, 1, 1];

pub fn p_eval(q: u32) -> BigInt {
    let qb = BigInt::from(q);
    let mut acc = BigInt::zero();
    for &c in P_COEFFS.iter().rev() {
        acc = acc * &qb + BigInt::from(c);
    }
    acc
}

/// P(q) = -7 (mod q) as polynomials: every term except the constant carries
/// a positive power of x.
pub fn p_constant_term_check() -> bool {
    P_COEFFS[0] == -7 && P_COEFFS[1..].iter().all(|&c| c >= 0)
}

fn biguint(b: &BigInt) -> BigUint {
    b.to_biguint().expect("nonnegative")
}

/// Replays the exclusion argument for a single (q, m) with m <= 8:
/// forced dimension 3m and distance 6, the Singleton contradiction for
/// m in {6, 7}, and the MacWilliams divisibility obstruction for m = 8.
pub fn nonpappus_exclusion(q: u32, m: usize) -> Result<Verdict> {
    if !SUPPORTED_Q.contains(&q) {
        return Err(Error::UnsupportedQ(q));
    }
    if m == 0 || m > 8 {
        return Err(Error::BadParams(format!("m = {m} not in 1..=8")));
    }
    let claim = format!("non-Pappus q-matroid over GF({q}) is not {m}-multilinear");
    let k_prime = 3 * m;
    let d_forced = 6usize;
    let mut cert = json!({
        "kind": "nonpappus_exclusion",
        "q": q,
        "m": m,
        "k_prime": k_prime,
        "d_forced": d_forced,
    });
    let obj = cert.as_object_mut().unwrap();

    if m <= 5 {
        // a 9 x m matrix has rank at most m < 6
        obj.insert("step".into(), json!("distance exceeds matrix rank bound"));
        obj.insert("max_rank".into(), json!(m));
        obj.insert("contradiction".into(), json!(d_forced > m));
        let status = if d_forced > m {
            Status::Confirmed
        } else {
            Status::Refuted
        };
        return Ok(Verdict::new(claim, status, cert));
    }

    if m == 6 || m == 7 {
        // Singleton: 3m <= max(9,m) (min(9,m) - 6 + 1) = 9 (m - 5)
        let lhs = 3 * m;
        let rhs = 9 * (m - 5);
        obj.insert("step".into(), json!("Singleton bound"));
        obj.insert("singleton_lhs".into(), json!(lhs));
        obj.insert("singleton_rhs".into(), json!(rhs));
        obj.insert("contradiction".into(), json!(lhs > rhs));
        let status = if lhs > rhs {
            Status::Confirmed
        } else {
            Status::Refuted
        };
        return Ok(Verdict::new(claim, status, cert));
    }

    // m = 8: forced rank distribution, then the shift-1 MacWilliams identity
    let qb = BigInt::from(q);
    let q8m1 = qb.pow(8) - 1; // q^8 - 1
    let a6: BigInt = BigInt::from(8) * &q8m1;
    let binom92 = BigInt::from(gaussian_binom(9, 2, q));
    let binom31 = BigInt::from(gaussian_binom(3, 1, q));
    let seven_spaces = &binom92 - BigInt::from(8) * &binom31;
    let a7: BigInt = &q8m1 * &seven_spaces;
    let a8: BigInt = qb.pow(24) - 1 - &a6 - &a7;
    // LHS of the identity at r = 1: sum over i of q^{8-i} A_i
    let lhs = {
        let mut acc = BigInt::zero();
        let dist: [(usize, BigInt); 4] = [
            (0, BigInt::one()),
            (6, a6.clone()),
            (7, a7.clone()),
            (8, a8.clone()),
        ];
        for (i, a) in dist {
            acc += qb.pow((8 - i) as u32) * a;
        }
        acc
    };
    // RHS = q^24 + q^15 (q^8 - 1) + q^15 (q - 1) A_1(C-dual):
    // solve for the forced A_1 of the dual code
    let denom = qb.pow(15) * (&qb - 1);
    let a1_dual = BigRational::new(&lhs - qb.pow(24) - qb.pow(15) * &q8m1, denom);
    // closed form (q^8 - 1) P(q) / q^13
    let p = p_eval(q);
    let a1_closed = BigRational::new(&q8m1 * &p, qb.pow(13));
    let forms_agree = a1_dual == a1_closed;
    // intermediate simplification from the proof:
    // q^15 (q-1) A_1 = (q^8-1)(8(q^2-1) + 1 + (q-1)(binom92 - 8 binom31) - q^15)
    //              = (q^8-1) q^2 (q-1) P(q)
    let mid = &q8m1
        * (BigInt::from(8) * (qb.pow(2) - 1) + 1 + (&qb - 1) * &seven_spaces - qb.pow(15));
    let mid_factored = &q8m1 * qb.pow(2) * (&qb - 1) * &p;
    let mid_agrees = mid == mid_factored;

    // divisibility obstruction: gcd(q^8-1, q) = 1, so q^13 must divide P(q)
    let (obstruction, obstruction_note) = if q != 7 {
        let rem = ((&p % &qb) + &qb) % &qb;
        (
            !rem.is_zero(),
            format!("P({q}) = {rem} (mod {q}), nonzero since P = -7 (mod q) and q does not divide 7"),
        )
    } else {
        let rem = ((&p % BigInt::from(343)) + BigInt::from(343)) % BigInt::from(343);
        (rem == BigInt::from(98), format!("P(7) = {rem} (mod 343)"))
    };
    let non_integral = !a1_dual.denom().is_one();

    obj.insert("step".into(), json!("MacWilliams shift-1 obstruction"));
    obj.insert("A6".into(), json!(a6.to_string()));
    obj.insert("A7".into(), json!(a7.to_string()));
    obj.insert("A8".into(), json!(a8.to_string()));
    obj.insert("P_q".into(), json!(p.to_string()));
    obj.insert(
        "A1_dual".into(),
        json!(format!("{}/{}", a1_dual.numer(), a1_dual.denom())),
    );
    obj.insert("identity_forms_agree".into(), json!(forms_agree));
    obj.insert("simplification_agrees".into(), json!(mid_agrees));
    obj.insert("divisibility_obstruction".into(), json!(obstruction));
    obj.insert("obstruction_note".into(), json!(obstruction_note));
    obj.insert("A1_dual_non_integral".into(), json!(non_integral));
    obj.insert(
        "symbolic_constant_term".into(),
        json!(p_constant_term_check()),
    );
    obj.insert("contradiction".into(), json!(non_integral));

    let status = if forms_agree && mid_agrees && obstruction && non_integral {
        Status::Confirmed
    } else {
        Status::Refuted
    };
    Ok(Verdict::new(claim, status, cert))
}

/// The forced rank distribution of a hypothetical representing
/// F_q-[9 x m, 3m, 6] code, for m >= 9. Exact big integers; the counts are
/// checked nonnegative and summing to q^{3m}.
pub fn nonpappus_distribution(q: u32, m: usize) -> Result<RankDistribution> {
    if m < 9 {
        return Err(Error::BadM(m));
    }
    let qb = BigInt::from(q);
    let qm1 = qb.pow(m as u32) - 1; // q^m - 1
    let a6: BigInt = BigInt::from(8) * &qm1;
    let a7: BigInt = &qm1 * (BigInt::from(gaussian_binom(9, 2, q)) - BigInt::from(8) * BigInt::from(gaussian_binom(3, 1, q)));
    let a8: BigInt = BigInt::from(gaussian_binom(9, 1, q)) * (qb.pow(2 * m as u32) - 1)
        - BigInt::from(gaussian_binom(3, 1, q)) * &a6
        - (&qb + 1) * &a7;
    let a9: BigInt = qb.pow(3 * m as u32) - 1 - &a6 - &a7 - &a8;
    for (name, v) in [("A8", &a8), ("A9", &a9)] {
        if v.is_negative() {
            return Err(Error::BadParams(format!("{name} negative: {v}")));
        }
    }
    let mut counts = vec![BigUint::zero(); 10];
    counts[0] = BigUint::one();
    counts[6] = biguint(&a6);
    counts[7] = biguint(&a7);
    counts[8] = biguint(&a8);
    counts[9] = biguint(&a9);
    let dist = RankDistribution { counts };
    let total = dist.total();
    let expect = BigUint::from(q).pow(3 * m as u32);
    if total != expect {
        return Err(Error::BadParams(format!(
            "distribution sums to {total}, expected q^{{3m}} = {expect}"
        )));
    }
    Ok(dist)
}

/// Verdict wrapper around [`nonpappus_distribution`].
pub fn nonpappus_distribution_verdict(q: u32, m: usize) -> Result<Verdict> {
    let claim =
        format!("forced rank distribution of a 9 x {m} representing code over GF({q}), m >= 9");
    let dist = nonpappus_distribution(q, m)?;
    let cert = json!({
        "kind": "nonpappus_distribution",
        "q": q,
        "m": m,
        "counts": dist.counts.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        "sum": dist.total().to_string(),
        "expected_sum": BigUint::from(q).pow(3 * m as u32).to_string(),
    });
    Ok(Verdict::new(claim, Status::Confirmed, cert))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p_values() {
        assert_eq!(p_eval(2), BigInt::from(2659));
        assert_eq!(p_eval(7) % BigInt::from(343), BigInt::from(98));
        assert!(p_constant_term_check());
    }

    #[test]
    fn exclusion_small_m() {
        let v = nonpappus_exclusion(2, 3).unwrap();
        assert_eq!(v.status, Status::Confirmed);
        let v = nonpappus_exclusion(2, 6).unwrap();
        assert_eq!(v.status, Status::Confirmed);
        assert_eq!(v.certificate["singleton_lhs"], 18);
        assert_eq!(v.certificate["singleton_rhs"], 9);
        let v = nonpappus_exclusion(2, 7).unwrap();
        assert_eq!(v.certificate["singleton_lhs"], 21);
        assert_eq!(v.certificate["singleton_rhs"], 18);
    }

    #[test]
    fn exclusion_m8_values() {
        let v = nonpappus_exclusion(2, 8).unwrap();
        assert_eq!(v.status, Status::Confirmed);
        assert_eq!(v.certificate["A6"], "2040"); // 8 (2^8 - 1)
        assert_eq!(v.certificate["A7"], (255u64 * 43379).to_string());
        assert_eq!(v.certificate["P_q"], "2659");
        let v7 = nonpappus_exclusion(7, 8).unwrap();
        assert_eq!(v7.status, Status::Confirmed);
        assert!(v7.certificate["obstruction_note"]
            .as_str()
            .unwrap()
            .contains("98"));
    }

    #[test]
    fn exclusion_all_supported() {
        for q in SUPPORTED_Q {
            for m in 2..=8 {
                let v = nonpappus_exclusion(q, m).unwrap();
                assert_eq!(v.status, Status::Confirmed, "q={q} m={m}");
            }
        }
        assert!(nonpappus_exclusion(6, 3).is_err());
        assert!(nonpappus_exclusion(2, 9).is_err());
    }

    #[test]
    fn distribution_values() {
        let d = nonpappus_distribution(2, 9).unwrap();
        assert_eq!(d.counts[6], BigUint::from(4088u32));
        assert_eq!(d.counts[7], BigUint::from(22166669u64));
        assert_eq!(d.counts[8], BigUint::from(67426450u64));
        assert_eq!(d.counts[9], BigUint::from(44620520u64));
        assert!(nonpappus_distribution(2, 8).is_err());
        for q in [2u32, 3] {
            for m in 9..=12 {
                let d = nonpappus_distribution(q, m).unwrap();
                assert_eq!(d.total(), BigUint::from(q).pow(3 * m as u32));
            }
        }
    }
}
