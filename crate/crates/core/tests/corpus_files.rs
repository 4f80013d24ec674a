//! The JSON files under `corpus/` are byte-exact serializations of the built-in
//! webs and programs. Run with `WEBCALC_BLESS=1` to regenerate them.

use std::fs;
use std::path::PathBuf;

use webcalc::ckmoracle::{intro_web_program, running_example_program, Program};
use webcalc::corpus;
use webcalc::stranding::{base_stranding, Stranding};
use webcalc::tableauweb::{web_from_tableau, StandardTableau};
use webcalc::webgraph::WebGraph;

fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus")
}

fn expected_files() -> Vec<(String, String)> {
    let mut files: Vec<(String, String)> = corpus::bundled()
        .into_iter()
        .map(|(name, g)| (format!("{name}.json"), g.to_json_string()))
        .collect();
    let tableau = StandardTableau::from_word_str(4, "12132344").unwrap();
    let (intro, _) = web_from_tableau(&tableau).unwrap();
    files.push(("tableau_12132344.json".into(), tableau.to_json_string()));
    files.push(("intro_web.json".into(), intro.to_json_string()));
    files.push((
        "running_example_program.json".into(),
        running_example_program().to_json_string(),
    ));
    files.push((
        "intro_program.json".into(),
        intro_web_program().to_json_string(),
    ));
    files.push((
        "running_example_stranding.json".into(),
        base_stranding(&corpus::running_example())
            .unwrap()
            .to_json_string(),
    ));
    files
}

#[test]
fn corpus_files_match_builders() {
    let dir = corpus_dir();
    let bless = std::env::var_os("WEBCALC_BLESS").is_some();
    if bless {
        fs::create_dir_all(&dir).unwrap();
    }
    for (name, text) in expected_files() {
        let path = dir.join(&name);
        if bless {
            fs::write(&path, &text).unwrap();
        }
        let on_disk = fs::read_to_string(&path).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(on_disk, text, "{name} differs from its builder");
    }
}

#[test]
fn corpus_files_roundtrip() {
    for (name, _) in expected_files() {
        let text = fs::read_to_string(corpus_dir().join(&name)).unwrap();
        let again = if name.ends_with("program.json") {
            Program::from_json_str(&text).unwrap().to_json_string()
        } else if name.starts_with("tableau_") {
            StandardTableau::from_json_str(&text)
                .unwrap()
                .to_json_string()
        } else if name.ends_with("stranding.json") {
            Stranding::from_json_str(&text).unwrap().to_json_string()
        } else {
            WebGraph::from_json_str(&text).unwrap().to_json_string()
        };
        assert_eq!(again, text, "{name} does not roundtrip");
    }
}
