mod common;

use clickbait_core::corpus::{make_folds, split_corpus, TruthClass};
use clickbait_core::eval::{cross_validate, CvConfig, LabeledMatrix};
use clickbait_core::features::{extract_features, extract_matrix, FeatureSchema, Group};
use clickbait_core::learn::{fit_model, Model, ModelConfig, ModelKind, TrainedModel};
use clickbait_core::select::{rank_features, select_top_k};
use clickbait_core::textkit::{Lexicons, TaggerHandle};

use common::*;

fn fixture_data() -> LabeledMatrix {
    let corpus = fixture_corpus();
    LabeledMatrix::extract(&corpus, &FeatureSchema::bundled(), &Lexicons::bundled(), &TaggerHandle::default())
        .unwrap()
}

fn small(kind: ModelKind) -> ModelConfig {
    let mut c = ModelConfig::new(kind);
    c.forest.n_trees = 20;
    c
}

#[test]
fn fixture_loads_in_file_order() {
    let corpus = fixture_corpus();
    assert_eq!(corpus.len(), 20);
    let clickbait = corpus.truths().filter(|t| t.truth_class == TruthClass::Clickbait).count();
    assert_eq!(clickbait, 10);
    assert!(corpus.ids().next().unwrap().starts_with("8000"));
}

#[test]
fn token_golden_file() {
    check_golden("tokens.golden.tsv", &tokens_golden_text(&fixture_corpus())).unwrap();
}

#[test]
fn feature_golden_file() {
    check_golden("features.golden.csv", &features_golden_csv(&fixture_corpus())).unwrap();
}

#[test]
fn extraction_is_order_preserving_and_repeatable() {
    let corpus = fixture_corpus();
    let schema = FeatureSchema::bundled();
    let (lex, tagger) = (Lexicons::bundled(), TaggerHandle::default());
    let m = extract_matrix(corpus.instances(), &schema, &lex, &tagger);
    assert_eq!(m.n_rows(), 20);
    assert_eq!(m.n_cols(), 180);
    for (inst, row) in corpus.instances().zip(&m.rows) {
        assert_eq!(&extract_features(inst, &schema, &lex, &tagger).values, row);
    }
    assert_eq!(m, extract_matrix(corpus.instances(), &schema, &lex, &tagger));
    assert!(m.rows.iter().flatten().all(|v| v.is_finite()));
}

#[test]
fn worked_headline_features() {
    let corpus = fixture_corpus();
    let schema = FeatureSchema::bundled();
    let first = corpus.instances().next().unwrap();
    assert_eq!(first.post_text, "10 things Apple will never tell you about iPhone");
    let v = extract_features(first, &schema, &Lexicons::bundled(), &TaggerHandle::default());
    let get = |name: &str| v.values[schema.index_of(name).unwrap()];
    assert_eq!(get("Number of tokens"), 9.0);
    assert_eq!(get("Whether the post start with number"), 1.0);
    assert_eq!(get("Whether exist NUMBER NP VB"), 1.0);
    assert_eq!(get("Whether exist NUMBER NP THAT"), 0.0);
}

#[test]
fn ranking_and_selection_on_fixture() {
    let data = fixture_data();
    let ranking = rank_features(&data.matrix, &data.classes()).unwrap();
    assert_eq!(ranking.len(), 180);
    assert!(ranking.entries.iter().all(|e| e.score.is_finite() && e.score >= 0.0));
    assert!(ranking.entries.windows(2).all(|w| w[0].score >= w[1].score));
    let sub = select_top_k(&ranking, &FeatureSchema::bundled(), 60).unwrap();
    assert_eq!(sub.len(), 60);
}

#[test]
fn every_model_kind_cross_validates() {
    let data = fixture_data();
    let corpus = fixture_corpus();
    let folds = make_folds(&corpus, 10, 42).unwrap();
    for kind in ModelKind::ALL {
        let mut config = CvConfig::new(small(kind));
        config.top_k = Some(20);
        let r = cross_validate(&data, &folds, &config).unwrap();
        assert_eq!(r.folds.len(), 10);
        assert!(r.folds.iter().all(|f| f.n_test == 2 && f.features.len() == 20));
        assert!(r.predictions.iter().all(|p| (0.0..=1.0).contains(p)));
        let m = r.mean;
        assert!(m.mse >= 0.0 && (0.0..=1.0).contains(&m.accuracy) && (0.0..=1.0).contains(&m.f1));
        let e = &r.errors;
        assert!((0.0..=1.0).contains(&e.fraction_ambiguous));
        if let Some((q1, med, q3)) = e.quartiles {
            assert!(q1 <= med && med <= q3);
        }
        assert_eq!(r, cross_validate(&data, &folds, &config).unwrap(), "{kind} not deterministic");
    }
}

#[test]
fn relation_group_ablation_runs() {
    let data = fixture_data();
    let folds = make_folds(&fixture_corpus(), 5, 42).unwrap();
    let mut config = CvConfig::new(small(ModelKind::ForestRegression));
    config.columns = Some(FeatureSchema::bundled().group_indices(Group::Relation));
    let r = cross_validate(&data, &folds, &config).unwrap();
    assert!(r.folds.iter().all(|f| f.features.len() == 3));
}

#[test]
fn trained_model_round_trips_through_file() {
    let corpus = fixture_corpus();
    let (train, test) = split_corpus(&corpus, 0.7, 42).unwrap();
    assert_eq!((train.len(), test.len()), (14, 6));
    let schema = FeatureSchema::bundled();
    let (lex, tagger) = (Lexicons::bundled(), TaggerHandle::default());
    let m = extract_matrix(train.instances(), &schema, &lex, &tagger);
    let classes: Vec<bool> = train.truths().map(|t| t.truth_class.is_clickbait()).collect();
    let means: Vec<f64> = train.truths().map(|t| t.mean_score).collect();
    let idx = rank_features(&m, &classes).unwrap().top_k_indices(60).unwrap();
    let x = m.select_columns(&idx);
    let config = small(ModelKind::ForestRegression);
    let trained = TrainedModel {
        config,
        schema_checksum: schema.checksum(),
        features: x.names.clone(),
        model: fit_model(&config, &x.rows, &means, &classes).unwrap(),
    };
    let bytes = trained.to_bytes().unwrap();
    let back = TrainedModel::read(&bytes[..]).unwrap();
    assert_eq!(back, trained);
    assert_eq!(back.features.len(), 60);
    let cols = back.columns_in(&schema).unwrap();
    let sub = schema.subset(&cols);
    for inst in test.instances() {
        let v = extract_features(inst, &sub, &lex, &tagger);
        let s = back.model.predict_score(&v.values).unwrap();
        assert!((0.0..=1.0).contains(&s));
        assert_eq!(s, trained.model.predict_score(&v.values).unwrap());
    }
    assert!(matches!(back.model, Model::Forest(_)));
}
