//! Shared fixtures for the benchmarks.

use std::path::PathBuf;

use craut_core::model::CRModel;

pub fn load_model(name: &str) -> CRModel {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../models").join(format!("{name}.json"));
    let text = std::fs::read_to_string(path).expect("model file");
    CRModel::parse(&text).expect("valid model")
}

pub fn model_text(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../models").join(format!("{name}.json"));
    std::fs::read_to_string(path).expect("model file")
}
