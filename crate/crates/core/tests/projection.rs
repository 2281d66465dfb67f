mod oracles;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vpcme_core::{
    fit_projection, scaling_coefficient, scatter_matrices, Matrix, MultiLabelDataset, PairConstraintSets,
};

struct Problem {
    rows: Vec<Vec<f64>>,
    ds: MultiLabelDataset,
    sets: PairConstraintSets,
}

fn random_problem(k: usize, rng: &mut ChaCha8Rng) -> Problem {
    let n = rng.random_range(3..20);
    let rows: Vec<Vec<f64>> = (0..n).map(|_| (0..k).map(|_| rng.random_range(-3.0..3.0)).collect()).collect();
    let ds = MultiLabelDataset::with_default_names(Matrix::from_rows(&rows).unwrap(), vec![false; 2 * n], 2).unwrap();
    let pair = |rng: &mut ChaCha8Rng| loop {
        let (i, j) = (rng.random_range(0..n), rng.random_range(0..n));
        if i != j {
            return (i, j);
        }
    };
    let n_must = rng.random_range(0..12);
    let must = (0..n_must).map(|_| pair(rng)).collect();
    let n_cannot = rng.random_range(0..12);
    let cannot = (0..n_cannot).map(|_| pair(rng)).collect();
    Problem { rows, ds, sets: PairConstraintSets { must, cannot, attempts: 0 } }
}

fn columns(w: &Matrix) -> Vec<Vec<f64>> {
    (0..w.cols()).map(|c| w.column(c)).collect()
}

#[test]
fn trace_identity_and_orthonormality() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let k = rng.random_range(1..9);
        let p = random_problem(k, &mut rng);
        let model = fit_projection(&p.ds, &p.sets).unwrap();
        let wtw = model.w.transpose().matmul(&model.w).unwrap();
        assert!(wtw.sub_scaled(1.0, &Matrix::identity(model.reduced_dim)).unwrap().max_abs() < 1e-8);
        let j = oracles::objective(&p.rows, &p.sets.must, &p.sets.cannot, &columns(&model.w));
        assert!((j - model.objective).abs() < 1e-7, "J {j} vs {}", model.objective);
        assert!((1..=k).contains(&model.reduced_dim));
        let negatives = model.eigenvalues.iter().filter(|&&v| v < 0.0).count();
        assert!(negatives == 0 || (negatives == 1 && model.reduced_dim == 1));
    }
}

#[test]
fn scatter_and_scale_match_pairwise_definitions() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..50 {
        let k = rng.random_range(1..6);
        let p = random_problem(k, &mut rng);
        let r = scaling_coefficient(&p.ds, &p.sets).unwrap();
        assert!((r - oracles::scaling_r(&p.rows, &p.sets.must, &p.sets.cannot)).abs() <= 1e-12 * r.abs().max(1.0));
        let sp = scatter_matrices(&p.ds, &p.sets).unwrap();
        assert!(sp.s_cannot.asymmetry() <= 1e-10 && sp.s_must.asymmetry() <= 1e-10);
        // uᵀ S u is the projected mean squared distance / 2, for any unit u
        for _ in 0..5 {
            let u = oracles::random_unit_vector(k, &mut rng);
            let quad = |s: &Matrix| {
                let su = s.matmul(&Matrix::from_row_major(k, 1, u.clone()).unwrap()).unwrap();
                (0..k).map(|i| u[i] * su[(i, 0)]).sum::<f64>()
            };
            let pure_cannot = oracles::objective(&p.rows, &[], &p.sets.cannot, std::slice::from_ref(&u));
            assert!((quad(&sp.s_cannot) - pure_cannot).abs() < 1e-10);
            assert!(quad(&sp.s_must) >= -1e-12);
        }
    }
}

#[test]
fn single_direction_is_optimal() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let mut checked = 0;
    while checked < 50 {
        let p = random_problem(4, &mut rng);
        let model = fit_projection(&p.ds, &p.sets).unwrap();
        if model.reduced_dim != 1 {
            continue;
        }
        checked += 1;
        for _ in 0..1000 {
            let u = oracles::random_unit_vector(4, &mut rng);
            let ju = oracles::objective(&p.rows, &p.sets.must, &p.sets.cannot, &[u]);
            assert!(model.objective >= ju - 1e-10, "J(W) {} < J(u) {ju}", model.objective);
        }
    }
}

#[test]
fn translation_invariance() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..30 {
        let k = rng.random_range(1..6);
        let p = random_problem(k, &mut rng);
        let shift: Vec<f64> = (0..k).map(|_| rng.random_range(-10.0..10.0)).collect();
        let moved: Vec<Vec<f64>> = p.rows.iter().map(|r| r.iter().zip(&shift).map(|(a, b)| a + b).collect()).collect();
        let ds2 =
            MultiLabelDataset::with_default_names(Matrix::from_rows(&moved).unwrap(), vec![false; 2 * moved.len()], 2)
                .unwrap();
        let (a, b) = (scatter_matrices(&p.ds, &p.sets).unwrap(), scatter_matrices(&ds2, &p.sets).unwrap());
        assert!(a.s_cannot.sub_scaled(1.0, &b.s_cannot).unwrap().max_abs() < 1e-9);
        assert!(a.s_must.sub_scaled(1.0, &b.s_must).unwrap().max_abs() < 1e-9);
        let (ra, rb) = (scaling_coefficient(&p.ds, &p.sets).unwrap(), scaling_coefficient(&ds2, &p.sets).unwrap());
        assert!((ra - rb).abs() <= 1e-9 * ra.max(1.0));
        let (ma, mb) = (fit_projection(&p.ds, &p.sets).unwrap(), fit_projection(&ds2, &p.sets).unwrap());
        assert_eq!(ma.reduced_dim, mb.reduced_dim);
        assert!((ma.objective - mb.objective).abs() < 1e-8);
        // bases of repeated eigenvalues are arbitrary; the spanned subspace is not
        let pa = ma.w.matmul(&ma.w.transpose()).unwrap();
        let pb = mb.w.matmul(&mb.w.transpose()).unwrap();
        assert!(pa.sub_scaled(1.0, &pb).unwrap().max_abs() < 1e-6);
    }
}
