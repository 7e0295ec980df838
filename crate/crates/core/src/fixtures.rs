//! Embedded reference matrices with pinned checksums, plus the combined
//! self-check behind `fixtures check`.
//!
//! Digit rows are transcribed once and guarded by SHA-256 so any drift in the
//! sources is caught before it can contaminate a search result.

use sha2::{Digest, Sha256};

use crate::classical::BlockCode;
use crate::error::{Error, Result};
use crate::gf::Field;
use crate::linalg::Mat;
use crate::qmatroid::ClassicalMatroid;
use crate::rmcode::MatrixCode;

/// 6 x 18 generator over GF(3) of the 2-multilinear non-Pappus block code
/// (9 blocks of width 2).
pub const NON_PAPPUS_F3_ROWS: [&str; 6] = [
    "101000100010101000",
    "010100010001010100",
    "000000101021011010",
    "000000020120120201",
    "001010010001001110",
    "000101210021001001",
];

pub const NON_PAPPUS_F3_SHA256: &str =
    "9dd80d53de91b09129c7d3931875cdfd510ea3cd81920fe05670fe5a6ba666ad";

/// 4 x 8 generator over GF(2) of the 2-multilinear representation of U_{2,4}
/// (4 blocks of width 2).
pub const U24_F2_ROWS: [&str; 4] = ["10001010", "01000101", "00101001", "00010111"];

pub const U24_F2_SHA256: &str =
    "40bbee0ea234a2b223863d68f31c2e38018b13b87d53f76af1c8fe71482829dc";

fn sha256_of(rows: &[&str]) -> String {
    let mut h = Sha256::new();
    h.update(rows.join("\n").as_bytes());
    format!("{:x}", h.finalize())
}

pub fn checksums_ok() -> bool {
    sha256_of(&NON_PAPPUS_F3_ROWS) == NON_PAPPUS_F3_SHA256
        && sha256_of(&U24_F2_ROWS) == U24_F2_SHA256
}

/// The non-Pappus block code over GF(3), block width 2.
pub fn non_pappus_f3_block_code() -> BlockCode {
    let f3 = Field::gf(3, 1).expect("GF(3)");
    let gen = Mat::parse_rows(&f3, &NON_PAPPUS_F3_ROWS).expect("fixture digits");
    BlockCode::new(&f3, 2, gen).expect("fixture shape")
}

/// The U_{2,4} block code over GF(2), block width 2.
pub fn u24_f2_block_code() -> BlockCode {
    let f2 = Field::gf(2, 1).expect("GF(2)");
    let gen = Mat::parse_rows(&f2, &U24_F2_ROWS).expect("fixture digits");
    BlockCode::new(&f2, 2, gen).expect("fixture shape")
}

/// The same generator read as a matrix rank-metric code in F_2^{4x2}: each
/// row becomes a 4x2 matrix whose j-th row is the j-th width-2 block.
pub fn u24_f2_matrix_code() -> MatrixCode {
    let f2 = Field::gf(2, 1).expect("GF(2)");
    let gens: Vec<Mat> = U24_F2_ROWS
        .iter()
        .map(|row| {
            let digits: Vec<u16> = row.bytes().map(|b| (b - b'0') as u16).collect();
            Mat::from_flat(&f2, 4, 2, &digits).expect("8 digits")
        })
        .collect();
    MatrixCode::from_generators(&f2, 4, 2, &gens).expect("fixture shape")
}

/// Result of the full fixture self-check.
#[derive(Clone, Debug)]
pub struct FixtureReport {
    pub checksums_ok: bool,
    pub non_pappus_almost_affine: bool,
    pub non_pappus_matroid_matches: bool,
    pub non_pappus_line_count: usize,
    pub u24_block_almost_affine: bool,
    pub u24_block_matroid_is_u24: bool,
    pub u24_matrix_code_dim: usize,
    pub u24_matrix_almost_affine: bool,
    pub u24_right_idealizer_f4: bool,
}

impl FixtureReport {
    pub fn all_ok(&self) -> bool {
        self.checksums_ok
            && self.non_pappus_almost_affine
            && self.non_pappus_matroid_matches
            && self.non_pappus_line_count == 8
            && self.u24_block_almost_affine
            && self.u24_block_matroid_is_u24
            && self.u24_matrix_code_dim == 4
            && self.u24_matrix_almost_affine
            && self.u24_right_idealizer_f4
    }
}

/// Run every fixture check.
pub fn check_fixtures() -> Result<FixtureReport> {
    let checksums = checksums_ok();
    if !checksums {
        return Err(Error::Parse("fixture checksum mismatch".into()));
    }

    let np = non_pappus_f3_block_code();
    let np_res = np.matroid()?;
    let np_matches = np_res
        .matroid
        .as_ref()
        .is_some_and(|m| *m == ClassicalMatroid::non_pappus());
    let np_lines = np_res
        .matroid
        .as_ref()
        .map_or(0, |m| m.triples_of_rank(2).len());

    let u24b = u24_f2_block_code();
    let u24_res = u24b.matroid()?;
    let u24_is_u24 = u24_res
        .matroid
        .as_ref()
        .is_some_and(|m| *m == ClassicalMatroid::uniform(2, 4));

    let u24m = u24_f2_matrix_code();
    let (u24_aa, _) = u24m.is_almost_affine(2, 1 << 20)?;
    let ideal = u24m.right_idealizer()?;

    Ok(FixtureReport {
        checksums_ok: checksums,
        non_pappus_almost_affine: np_res.almost_affine,
        non_pappus_matroid_matches: np_matches,
        non_pappus_line_count: np_lines,
        u24_block_almost_affine: u24_res.almost_affine,
        u24_block_matroid_is_u24: u24_is_u24,
        u24_matrix_code_dim: u24m.dim(),
        u24_matrix_almost_affine: u24_aa,
        u24_right_idealizer_f4: ideal.is_extension_linear(2),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmatroid::{ObjectKind, QMatroid};
    use crate::Rational;
    use num_bigint::BigUint;

    #[test]
    fn checksums_pinned() {
        assert!(checksums_ok());
    }

    #[test]
    fn full_report_passes() {
        let report = check_fixtures().unwrap();
        assert!(report.all_ok(), "{report:?}");
    }

    #[test]
    fn u24_matrix_code_details() {
        // values derived by brute-force enumeration of the 16 codewords
        let c = u24_f2_matrix_code();
        assert_eq!(c.dim(), 4);
        let dist = c.rank_distribution(1 << 20).unwrap();
        assert_eq!(
            dist.counts,
            vec![
                BigUint::from(1u32),
                BigUint::from(3u32),
                BigUint::from(12u32)
            ]
        );
        assert_eq!(c.min_distance(1 << 20).unwrap(), 1);
        // the right idealizer is exactly a copy of F_4
        let ideal = c.right_idealizer().unwrap();
        assert_eq!(ideal.dim(), 2);
        assert!(ideal.is_extension_linear(2));
    }

    #[test]
    fn u24_matrix_code_qmatroid_is_not_uniform() {
        // its q-matroid is integral with one loop and 24 bases, so it is not
        // U_{2,4}(2); derived by exhaustive evaluation over the 67 subspaces
        let c = u24_f2_matrix_code();
        let qm = QMatroid::from_matrix_code(&c);
        assert!(qm.is_integral(1 << 20).unwrap());
        assert_eq!(qm.total_rank(), Rational::from_integer(2));
        let f = c.field().clone();
        let loops: Vec<_> = crate::subspace::enum_subspaces(&f, 4, 1)
            .filter(|u| qm.rank(u) == Rational::from_integer(0))
            .collect();
        assert_eq!(loops.len(), 1);
        assert_eq!(loops[0].to_text(), "1110");
        assert_eq!(qm.objects(ObjectKind::Bases, 1 << 20).unwrap().len(), 24);
        // rho of a non-loop line is 1
        let e1 = crate::subspace::Subspace::from_rows(&f, 4, &[vec![1, 0, 0, 0]]);
        assert_eq!(qm.rank(&e1), Rational::from_integer(1));
    }

    #[test]
    fn non_pappus_block_projection_examples() {
        let c = non_pappus_f3_block_code();
        assert_eq!(c.projection_dim(0), 0);
        // blocks {1,2,3} (the first line) project to dimension 4 = 2 * rank 2
        assert_eq!(c.projection_dim(0b111), 4);
        assert_eq!(c.dim(), 6);
    }

    #[test]
    fn u24_block_projection_examples() {
        let c = u24_f2_block_code();
        assert_eq!(c.projection_dim(1 << 1), 2); // second block alone
    }
}
