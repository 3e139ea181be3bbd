use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use wsaic::harness::ExperimentConfig;

fn repo_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn referenced_configs() -> BTreeSet<PathBuf> {
    let root = repo_root();
    let mut out = BTreeSet::new();
    for doc in ["REPRODUCING.md", "README.md"] {
        let text = std::fs::read_to_string(root.join(doc)).unwrap();
        for word in text.split(|c: char| c.is_whitespace() || "`|(),".contains(c)) {
            if word.ends_with(".toml") && !word.contains('<') {
                let p = if word.starts_with("configs/") {
                    root.join(word)
                } else {
                    // bare names in the sweep listing share the first entry's directory
                    root.join("configs/sweep").join(word)
                };
                out.insert(p);
            }
        }
    }
    out
}

#[test]
fn every_documented_config_parses_and_resolves() {
    let configs = referenced_configs();
    assert!(configs.len() >= 10, "{configs:?}");
    for path in configs {
        let cfg = ExperimentConfig::load(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        cfg.output_dir().unwrap();
        let experiments = cfg.resolve().unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert!(!experiments.is_empty());
    }
}

#[test]
fn every_config_file_is_documented() {
    let documented = referenced_configs();
    let mut stack = vec![repo_root().join("configs")];
    while let Some(dir) = stack.pop() {
        for e in std::fs::read_dir(dir).unwrap().flatten() {
            let p = e.path();
            if p.is_dir() {
                stack.push(p);
            } else if p.extension().is_some_and(|x| x == "toml") {
                assert!(documented.contains(&p), "{} is not documented", p.display());
            }
        }
    }
}
