use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vpcme_core::ensemble::MultiLabelClassifier;
use vpcme_core::{predict_ensemble, train_vpcme, Matrix, MultiLabelDataset, VpcmeConfig, VpcmeTrainer};

/// Three labels driven by linear combinations of five features, with some label noise.
fn synthetic(n: usize, seed: u64) -> MultiLabelDataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut feats = Vec::with_capacity(n * 5);
    let mut labels = Vec::with_capacity(n * 3);
    for _ in 0..n {
        let x: Vec<f64> = (0..5).map(|_| rng.random_range(-1.0..1.0)).collect();
        let raw = [x[0] + 0.5 * x[1] > 0.0, x[1] - x[2] > 0.1, x[0] + x[3] > 0.3];
        feats.extend_from_slice(&x);
        labels.extend(raw.iter().map(|&b| b ^ rng.random_bool(0.1)));
    }
    MultiLabelDataset::with_default_names(Matrix::from_row_major(n, 5, feats).unwrap(), labels, 3).unwrap()
}

fn cfg(size: usize, boosting: bool) -> VpcmeConfig {
    VpcmeConfig { ensemble_size: size, seed: 17, boosting_enabled: boosting, k_neighbors: 5, ..Default::default() }
}

#[test]
fn training_is_deterministic() {
    let ds = synthetic(80, 1);
    let a = train_vpcme(&ds, &cfg(4, true)).unwrap();
    let b = train_vpcme(&ds, &cfg(4, true)).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.members.len(), 4);
    assert_eq!(a.training_log.len(), 4);
    for m in &a.members {
        assert_eq!(m.classifier.dim(), m.projection.reduced_dim);
    }
    for i in 0..10 {
        let x = ds.instance(i);
        assert_eq!(predict_ensemble(&a, x).unwrap(), predict_ensemble(&b, x).unwrap());
    }
}

#[test]
fn weights_stay_normalized_and_misclassified_grow() {
    let ds = synthetic(60, 2);
    let mut trainer = VpcmeTrainer::new(&ds, cfg(6, true)).unwrap();
    while !trainer.is_done() {
        let before = trainer.weights().to_vec();
        let miss = trainer.step().unwrap();
        let after = trainer.weights();
        assert!((after.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        assert!(after.iter().all(|&w| w >= 0.0));
        if miss.iter().any(|&m| m) && miss.iter().any(|&m| !m) {
            for i in 0..ds.instance_count() {
                for j in 0..ds.instance_count() {
                    if miss[i] && !miss[j] && before[i] == before[j] {
                        assert!(after[i] > after[j]);
                    }
                }
            }
        }
    }
}

#[test]
fn bagging_weights_stay_uniform() {
    let ds = synthetic(40, 3);
    let mut trainer = VpcmeTrainer::new(&ds, cfg(5, false)).unwrap();
    let uniform = trainer.weights().to_vec();
    assert!(uniform.iter().all(|&w| w == 1.0 / 40.0));
    while !trainer.is_done() {
        trainer.step().unwrap();
        assert_eq!(trainer.weights(), uniform.as_slice());
    }
}

#[test]
fn ensemble_of_one_is_its_member() {
    let ds = synthetic(50, 4);
    let model = train_vpcme(&ds, &cfg(1, true)).unwrap();
    let member = &model.members[0];
    for i in 0..ds.instance_count() {
        let x = ds.instance(i);
        let whole = predict_ensemble(&model, x).unwrap();
        assert_eq!(whole, member.predict(x).unwrap());
        let z = member.projection.transform(x).unwrap();
        assert_eq!(whole.scores, member.classifier.posterior_scores(&z).unwrap());
    }
}

#[test]
fn member_error_rates_logged() {
    let ds = synthetic(60, 5);
    let model = train_vpcme(&ds, &cfg(3, true)).unwrap();
    for entry in &model.training_log {
        assert!((0.0..=1.0).contains(&entry.error_rate));
        assert!(entry.must_pairs <= 60 && entry.cannot_pairs <= 60);
        assert!(entry.reduced_dim >= 1 && entry.reduced_dim <= 5);
    }
}

#[test]
fn degenerate_thresholds_train() {
    let ds = synthetic(40, 6);
    for theta in [0.0, 1.0] {
        let model = train_vpcme(&ds, &VpcmeConfig { theta, ..cfg(2, true) }).unwrap();
        assert_eq!(model.members.len(), 2);
        if theta == 0.0 {
            assert!(model.training_log.iter().all(|e| e.cannot_pairs == 0));
        }
    }
}

#[test]
fn too_few_instances_rejected() {
    let ds = synthetic(5, 7);
    assert!(train_vpcme(&ds, &cfg(1, true)).is_err());
    let model = train_vpcme(&ds, &VpcmeConfig { k_neighbors: 4, ..cfg(1, true) }).unwrap();
    assert!(predict_ensemble(&model, &[0.0; 4]).is_err());
}
