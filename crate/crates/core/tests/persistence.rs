//! Persistence round trips for every model family, and corruption handling.

mod common;

use common::random_instance;
use tabmed_core::model::persist::{load_model, save_model};
use tabmed_core::model::{train, Hyperparams, ModelKind};
use tabmed_core::Error;

fn small_hyper() -> Hyperparams {
    let mut hp = Hyperparams::default();
    hp.forest.n_trees = 8;
    hp.forest.seed = 19;
    hp.gbt.n_rounds = 8;
    hp.mlp.epochs = 6;
    hp.mlp.hidden = 5;
    hp.mlp.seed = 19;
    hp.bayes.categorical_features = vec![2];
    hp
}

#[test]
fn every_kind_round_trips_bit_identical_scores() {
    let train_set = random_instance(120, 4, 71);
    let probe = random_instance(100, 4, 72);
    let hp = small_hyper();
    for kind in ModelKind::all() {
        let model = train(kind, &train_set, &hp).unwrap();
        let bytes = save_model(&model);
        let loaded = load_model(&bytes).unwrap();
        let before = model.predict_scores(&probe.features).unwrap();
        let after = loaded.predict_scores(&probe.features).unwrap();
        assert_eq!(before, after, "{} scores changed across save/load", kind.as_str());
        assert_eq!(loaded, model, "{} params changed across save/load", kind.as_str());
    }
}

#[test]
fn corrupted_artifacts_fail_with_designated_errors() {
    let train_set = random_instance(60, 3, 81);
    let model = train(ModelKind::Gbt, &train_set, &small_hyper()).unwrap();
    let bytes = save_model(&model);

    // Flip one body byte: checksum error.
    let mut flipped = bytes.clone();
    let idx = flipped.len() * 2 / 3;
    flipped[idx] = flipped[idx].wrapping_add(1);
    assert!(matches!(load_model(&flipped), Err(Error::ArtifactChecksum)));

    // Cut the tail: either the checksum or the sentinel check trips first,
    // but it is always a load error rather than a panic.
    let cut = &bytes[..bytes.len() - 7];
    assert!(load_model(cut).is_err());

    // Future version tag: version error.
    let text = String::from_utf8(bytes.clone()).unwrap();
    let future = text.replacen("tabmed-model 1", "tabmed-model 2", 1);
    assert!(matches!(
        load_model(future.as_bytes()),
        Err(Error::ArtifactVersion(v)) if v == "2"
    ));

    // Arbitrary junk: an error, never a crash.
    assert!(load_model(b"not an artifact at all").is_err());
    assert!(load_model(&[0xff, 0xfe, 0x00, 0x9f]).is_err());
}

#[test]
fn artifact_is_versioned_self_describing_text() {
    let train_set = random_instance(40, 3, 91);
    let model = train(ModelKind::Lr, &train_set, &small_hyper()).unwrap();
    let bytes = save_model(&model);
    let text = std::str::from_utf8(&bytes).expect("artifact is text");
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("tabmed-model 1"));
    assert!(lines.next().unwrap().starts_with("sha256 "));
    assert_eq!(lines.next(), Some("kind lr"));
    assert_eq!(text.lines().last(), Some("end"));
}
