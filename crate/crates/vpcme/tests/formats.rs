use proptest::prelude::*;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vpcme::harness::{train_method, Method};
use vpcme::io::parse_csv;
use vpcme::model_file::ModelFile;
use vpcme::{synth, write_csv};
use vpcme_core::{Matrix, MultiLabelDataset, Standardizer, VpcmeConfig};

proptest! {
    #[test]
    fn csv_round_trip_is_exact(
        n in 1usize..12,
        k in 1usize..5,
        r in 2usize..5,
        seed in any::<u64>(),
    ) {
        // arbitrary bit patterns reach subnormals, huge exponents and long mantissas
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let feats: Vec<f64> = (0..n * k)
            .map(|_| Some(f64::from_bits(rng.next_u64())).filter(|v| v.is_finite()).unwrap_or(0.5))
            .collect();
        let labels: Vec<bool> = (0..n * r).map(|i| (seed >> (i % 64)) & 1 == 1).collect();
        let ds = MultiLabelDataset::with_default_names(Matrix::from_row_major(n, k, feats).unwrap(), labels, r).unwrap();
        let mut buf = Vec::new();
        write_csv(&ds, &mut buf).unwrap();
        let back = parse_csv(buf.as_slice(), r).unwrap();
        prop_assert_eq!(back, ds);
    }
}

#[test]
fn saved_models_predict_bit_identically() {
    let ds = synth::linear_labels(90, 4, 0.1);
    let probe = synth::linear_labels(25, 99, 0.1);
    let dir = tempfile::tempdir().unwrap();
    let cfg = VpcmeConfig { ensemble_size: 4, k_neighbors: 5, seed: 3, ..VpcmeConfig::default() };
    for method in Method::ALL {
        for zscore in [false, true] {
            let z = zscore.then(|| Standardizer::fit(ds.features()));
            let train = match &z {
                Some(z) => ds.with_features(z.apply(ds.features()).unwrap()).unwrap(),
                None => ds.clone(),
            };
            let model = train_method(&train, method, &cfg).unwrap();
            let file = ModelFile::new(method, cfg, ds.label_names().to_vec(), z, model);
            let path = dir.path().join("m.json");
            file.save(&path).unwrap();
            let loaded = ModelFile::load(&path).unwrap();
            assert_eq!(loaded, file);
            for i in 0..probe.instance_count() {
                let (a, b) = (file.predict(probe.instance(i)).unwrap(), loaded.predict(probe.instance(i)).unwrap());
                assert_eq!(a.labels, b.labels);
                assert!(a.scores.iter().zip(&b.scores).all(|(x, y)| x.to_bits() == y.to_bits()));
            }
        }
    }
}

#[test]
fn foreign_json_is_not_a_model() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("x.json");
    std::fs::write(&path, "{\"format\": \"other\"}").unwrap();
    assert!(ModelFile::load(&path).is_err());
}
