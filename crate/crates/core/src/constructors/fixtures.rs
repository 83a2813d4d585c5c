//! Bundled labeled-tree fixtures, optionally overridden by a directory.

use std::path::{Path, PathBuf};

use crate::trees::{build_caterpillar, CaterpillarSpec, LabeledTree, TreeDocument};

use super::ConstructError;

macro_rules! bundled {
    ($($name:literal),* $(,)?) => {
        &[$(($name, include_str!(concat!("../../fixtures/", $name, ".json")))),*]
    };
}

const BUNDLED: &[(&str, &str)] = bundled![
    "figure1",
    "T[1]",
    "T[5,3,3,3,3,3]",
    "T[3,5,3,3,3,3]",
    "T[3,3,5,3,3,3]",
    "T[3,3,3,3,3,3,3]",
    "T[3,3,3,2,2,2,2,2,2,3]",
    "T[3,2,2,2,2,2,2,2,2,2,2,2,2]",
    "T[2,2,2,2,2,2,2,2,2,2,2,2,2,2]",
];

/// Where fixture documents are read from.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Fixtures {
    dir: Option<PathBuf>,
}

impl Fixtures {
    /// Base caterpillars stored as fixtures, in canonical spec form.
    pub const BASE_SPECS: [&'static str; 8] = [
        "T[1]",
        "T[5,3,3,3,3,3]",
        "T[3,5,3,3,3,3]",
        "T[3,3,5,3,3,3]",
        "T[3,3,3,3,3,3,3]",
        "T[3,3,3,2,2,2,2,2,2,3]",
        "T[3,2,2,2,2,2,2,2,2,2,2,2,2]",
        "T[2,2,2,2,2,2,2,2,2,2,2,2,2,2]",
    ];

    /// Files compiled into the library.
    pub fn bundled() -> Self {
        Fixtures { dir: None }
    }

    /// Reads `<dir>/<name>.json` instead of the bundled copies.
    pub fn from_dir(dir: impl Into<PathBuf>) -> Self {
        Fixtures {
            dir: Some(dir.into()),
        }
    }

    /// `SETSEQ_FIXTURES` if set, else the bundled files.
    pub fn from_env() -> Self {
        match std::env::var_os("SETSEQ_FIXTURES") {
            Some(dir) => Fixtures::from_dir(dir),
            None => Fixtures::bundled(),
        }
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    fn text(&self, name: &str) -> Result<String, ConstructError> {
        match &self.dir {
            Some(dir) => std::fs::read_to_string(dir.join(format!("{name}.json")))
                .map_err(|_| ConstructError::MissingFixture(name.to_string())),
            None => BUNDLED
                .iter()
                .find(|(n, _)| *n == name)
                .map(|(_, t)| t.to_string())
                .ok_or_else(|| ConstructError::MissingFixture(name.to_string())),
        }
    }

    fn load(&self, name: &str) -> Result<LabeledTree, ConstructError> {
        let bad = |reason: String| ConstructError::BadFixture {
            spec: name.to_string(),
            reason,
        };
        let lt = TreeDocument::from_json(&self.text(name)?)
            .and_then(|d| d.labeled())
            .map_err(|e| bad(e.to_string()))?;
        if !lt.verify().valid {
            return Err(bad("labeling does not verify".into()));
        }
        Ok(lt)
    }

    /// The labeled base caterpillar, numbered as `build_caterpillar` does.
    pub fn base(&self, spec: &CaterpillarSpec) -> Result<LabeledTree, ConstructError> {
        let name = spec.to_string();
        let lt = self.load(&name)?;
        if lt.tree != build_caterpillar(spec) {
            return Err(ConstructError::BadFixture {
                spec: name,
                reason: "tree differs from the caterpillar numbering".into(),
            });
        }
        Ok(lt)
    }

    /// The 8-vertex labeled tree used to illustrate pendant induction.
    pub fn figure1(&self) -> Result<LabeledTree, ConstructError> {
        self.load("figure1")
    }
}
