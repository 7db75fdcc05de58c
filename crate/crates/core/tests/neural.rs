use chaoscrypt::error::Error;
use chaoscrypt::neural::{
    load_model, save_model, train_model, BlstmModel, TrainConfig, MODEL_MAGIC,
};

fn quick() -> TrainConfig {
    TrainConfig {
        hidden_size: 5,
        window: 6,
        epochs: 2,
        learning_rate: 0.01,
        init_seed: 42,
    }
}

#[test]
fn training_is_bit_reproducible() {
    let a = save_model(&train_model(1.804, 0.3, quick()).unwrap());
    let b = save_model(&train_model(1.804, 0.3, quick()).unwrap());
    assert_eq!(a, b);
    let other_seed = save_model(
        &train_model(
            1.804,
            0.3,
            TrainConfig {
                init_seed: 43,
                ..quick()
            },
        )
        .unwrap(),
    );
    assert_ne!(a, other_seed);
}

#[test]
fn metadata_records_training() {
    let m = train_model(1.804, 0.3, quick()).unwrap();
    let meta = m.meta();
    assert_eq!((meta.epochs, meta.init_seed), (2, 42));
    assert_eq!(
        (meta.train_param, meta.train_x0, meta.learning_rate),
        (1.804, 0.3, 0.01)
    );
    assert!(meta.final_loss.unwrap().is_finite());
    assert!(meta.holdout_mse.unwrap().is_finite());
}

#[test]
fn file_roundtrip_through_disk() {
    let model = train_model(1.804, 0.3, quick()).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.tdlm");
    std::fs::write(&path, model.to_bytes()).unwrap();
    let back = BlstmModel::load(&path).unwrap();
    assert_eq!(save_model(&back), save_model(&model));
    assert_eq!(back.meta(), model.meta());
    assert_eq!(&save_model(&back)[..4], MODEL_MAGIC);
}

#[test]
fn loaded_model_predicts_identically() {
    let model = train_model(1.804, 0.3, quick()).unwrap();
    let back = load_model(&save_model(&model)).unwrap();
    let seed = [0.1, -0.2, 0.3, -0.4, 0.5, -0.6];
    assert_eq!(
        model.predict(&seed, 50).unwrap(),
        back.predict(&seed, 50).unwrap()
    );
}

#[test]
fn bad_learning_rate_is_reported() {
    let cfg = TrainConfig {
        learning_rate: 1e4,
        epochs: 3,
        ..quick()
    };
    assert!(matches!(
        train_model(1.804, 0.3, cfg),
        Err(Error::NonFiniteLoss { .. })
    ));
}

#[test]
fn degenerate_training_orbit() {
    assert!(matches!(
        train_model(1.804, 0.0, quick()),
        Err(Error::DegenerateState { .. })
    ));
}

#[test]
fn predictions_are_clamped() {
    let model = BlstmModel::initialize(4, 3, 7).unwrap();
    let out = model.predict(&[50.0, -50.0, 50.0], 100).unwrap();
    assert!(out.iter().all(|v| (-1.0..=1.0).contains(v)));
}
