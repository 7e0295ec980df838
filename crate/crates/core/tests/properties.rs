//! Property tests for the structural invariants that hold on random inputs.

use proptest::prelude::*;

use qmatroids::gf::{ExtBasis, Field};
use qmatroids::linalg::Mat;
use qmatroids::qmatroid::{CheckScope, QMatroid};
use qmatroids::rmcode::{Axis, MatrixCode, RestrictMode, VectorCode};
use qmatroids::subspace::Subspace;

fn mat_strategy(q: u32, rows: usize, cols: usize) -> impl Strategy<Value = Mat> {
    prop::collection::vec(0..q as u16, rows * cols).prop_map(move |data| {
        let field = Field::of_order(q).unwrap();
        Mat::from_flat(&field, rows, cols, &data).unwrap()
    })
}

fn code_strategy(q: u32, n: usize, m: usize, kmax: usize) -> impl Strategy<Value = MatrixCode> {
    prop::collection::vec(mat_strategy(q, n, m), 1..=kmax).prop_map(move |gens| {
        let field = Field::of_order(q).unwrap();
        MatrixCode::from_generators(&field, n, m, &gens).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn subspace_dimension_formula(a in mat_strategy(2, 3, 4), b in mat_strategy(2, 3, 4)) {
        let u = Subspace::from_generators(&a);
        let v = Subspace::from_generators(&b);
        let (s, i) = u.sum_intersect(&v).unwrap();
        prop_assert_eq!(s.dim() + i.dim(), u.dim() + v.dim());
        prop_assert_eq!(&u.orth().orth(), &u);
        prop_assert_eq!(u.orth().dim(), 4 - u.dim());
    }

    #[test]
    fn dual_code_dimension_and_involution(c in code_strategy(3, 3, 4, 5)) {
        let d = c.dual();
        prop_assert_eq!(c.dim() + d.dim(), 12);
        prop_assert_eq!(&d.dual(), &c);
    }

    #[test]
    fn singleton_bound_holds(c in code_strategy(2, 4, 3, 6)) {
        if c.dim() > 0 {
            let d = c.min_distance(1 << 24).unwrap();
            prop_assert!(c.dim() <= 4 * (3 - d + 1));
        }
    }

    #[test]
    fn code_rank_function_is_a_q_polymatroid(c in code_strategy(2, 4, 2, 5)) {
        // monotone and submodular over the full lattice of F_2^4
        let qm = QMatroid::from_matrix_code(&c);
        prop_assert!(qm.check_axioms(CheckScope::Exhaustive, 1 << 20).unwrap().passed());
    }

    #[test]
    fn restriction_dimension_identity(
        c in code_strategy(2, 4, 2, 5),
        a_raw in mat_strategy(2, 4, 4),
        mask in 1u32..15,
    ) {
        // dim Pi_r(C, A, I) + dim C(A^{-1} V_{bar I}) = dim C
        prop_assume!(a_raw.is_invertible());
        let field = c.field().clone();
        let idx: Vec<usize> = (0..4).filter(|i| (mask >> i) & 1 == 1).collect();
        prop_assume!(!idx.is_empty() && idx.len() < 4);
        let pi = c.restrict_shorten(&a_raw, &idx, RestrictMode::Restrict, Axis::Rows).unwrap();
        let complement: Vec<usize> = (0..4).filter(|i| (mask >> i) & 1 == 0).collect();
        let vbar_rows: Vec<Vec<u16>> = complement.iter().map(|&i| {
            let mut v = vec![0u16; 4];
            v[i] = 1;
            v
        }).collect();
        let vbar = Subspace::from_rows(&field, 4, &vbar_rows);
        let u = vbar.apply(&a_raw.inverse().unwrap().transpose()).unwrap();
        let kernel_dim = c.subcode(&u).unwrap().dim();
        prop_assert_eq!(pi.dim() + kernel_dim, c.dim());
    }

    #[test]
    fn paving_rejects_close_families(seed in any::<u64>()) {
        // two distinct 2-dim subspaces meeting in dimension 1 violate the
        // intersection condition for k = 2
        use rand::{Rng, SeedableRng};
        let field = Field::gf(2, 1).unwrap();
        let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(seed);
        let line: Vec<u16> = loop {
            let v: Vec<u16> = (0..4).map(|_| rng.gen_range(0..2)).collect();
            if v.iter().any(|&x| x != 0) {
                break v;
            }
        };
        let mut others = Vec::new();
        for _ in 0..64 {
            let w: Vec<u16> = (0..4).map(|_| rng.gen_range(0..2)).collect();
            let s = Subspace::from_rows(&field, 4, &[line.clone(), w.clone()]);
            if s.dim() == 2 {
                others.push(s);
            }
            if others.len() == 2 {
                break;
            }
        }
        if others.len() == 2 && others[0] != others[1] {
            prop_assert!(QMatroid::paving(&others, 2, 4, &field).is_err());
        }
    }

    #[test]
    fn expanded_matroid_independent_of_basis(gamma_pick in 0usize..3) {
        // expand the same F4-linear code in different bases of GF(4)/GF(2);
        // the induced rank function does not change
        let f2 = Field::gf(2, 1).unwrap();
        let f4 = Field::gf(2, 2).unwrap();
        let gen = Mat::from_rows(&f4, &[vec![1, 0, 2], vec![0, 1, 3]]);
        let vc = VectorCode::new(&f2, &f4, gen).unwrap();
        // all three bases of GF(4) over GF(2) containing distinct elements
        let bases = [[1u16, 2], [1, 3], [2, 3]];
        let reference = vc.expand(&ExtBasis::new(&f2, &f4, &[1, 2]).unwrap()).unwrap();
        let other = vc
            .expand(&ExtBasis::new(&f2, &f4, &bases[gamma_pick]).unwrap())
            .unwrap();
        for u in qmatroids::subspace::lattice(&f2, 3) {
            prop_assert_eq!(reference.rho(&u).unwrap(), other.rho(&u).unwrap());
        }
    }

    #[test]
    fn tensor_rank_matches_code_rank_n4(c in code_strategy(2, 4, 2, 5)) {
        prop_assume!(c.dim() > 0);
        use qmatroids::tensor::Tensor3;
        let t = Tensor3::generator_of(&c).unwrap();
        for u in qmatroids::subspace::lattice(c.field(), 4) {
            prop_assert_eq!(t.rho(&u).unwrap(), c.rho(&u).unwrap());
        }
    }

    #[test]
    fn projectivization_sampled_n4(c in code_strategy(2, 4, 2, 5), seed in any::<u64>()) {
        prop_assume!(c.dim() > 0);
        use qmatroids::qmatroid::QMatroid;
        use qmatroids::tensor::{CompareScope, Polymatroid, Tensor3};
        let t = Tensor3::generator_of(&c).unwrap();
        let proj = Polymatroid::projectivize(&QMatroid::from_matrix_code(&c));
        let ah = Polymatroid::from_block_generator(&t.ah_generator(1 << 20).unwrap(), 2).unwrap();
        let psi: Vec<usize> = (0..15).collect();
        let verdict = proj
            .compare(&ah, &psi, CompareScope::Sampled { seed, count: 200 })
            .unwrap();
        prop_assert!(verdict.equal());
    }

    #[test]
    fn code_text_roundtrip(c in code_strategy(3, 3, 2, 4)) {
        let parsed = MatrixCode::parse(&c.to_text()).unwrap();
        prop_assert_eq!(&parsed, &c);
    }
}
