use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::expr::ExprNode;
use super::lower::lower;
use super::parser::parse_tree;
use super::CatalogError;
use crate::poly::Polynomial;
use crate::rings::{Ring, RingKind};

/// Environment variable naming a corpus directory that replaces the built-in one.
pub const CORPUS_ENV: &str = "BIHV_CORPUS";

macro_rules! embedded {
    ($($name:literal),* $(,)?) => {
        &[$((concat!("identities/", $name, ".poly"),
             include_str!(concat!("../../corpus/identities/", $name, ".poly")))),*]
    };
}

const MANIFEST: &str = include_str!("../../corpus/manifest.toml");
const FILES: &[(&str, &str)] = embedded![
    "P0", "chen-n2", "chen-n2-derived", "same-lm",
    "const-solutions-1", "const-solutions-2", "const-solutions-3",
    "Lm20", "Lm30", "Lm3", "Lm2", "taup3",
    "part1", "part2", "part3", "part4", "taup4",
    "taup0-a", "taup0-b", "taup0-c",
    "dtau", "cos-te-si", "sin-te-si", "q-elim", "q-limit",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Proportional,
    Divides,
    Equal,
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mode::Proportional => "proportional",
            Mode::Divides => "divides",
            Mode::Equal => "equal",
        })
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Manifest {
    identity: Vec<ManifestEntry>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ManifestEntry {
    name: String,
    files: Vec<String>,
    rings: Vec<String>,
    mode: Mode,
}

/// One corpus file: its path relative to the corpus root, raw text and tree.
#[derive(Clone, Debug)]
pub struct Source {
    pub file: String,
    pub text: String,
    pub tree: ExprNode,
}

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: String,
    pub rings: Vec<RingKind>,
    pub mode: Mode,
    pub sources: Vec<Source>,
}

impl CorpusEntry {
    /// Expected polynomials, one per file, evaluated over `ring`.
    pub fn expected(&self, ring: &Ring) -> Result<Vec<Polynomial>, CatalogError> {
        self.sources
            .iter()
            .map(|s| {
                lower(&s.tree, ring).map_err(|e| CatalogError::InFile {
                    file: s.file.clone(),
                    source: Box::new(e),
                })
            })
            .collect()
    }
}

/// Parsed corpus. Immutable once loaded.
#[derive(Clone, Debug)]
pub struct Corpus {
    origin: String,
    entries: BTreeMap<String, CorpusEntry>,
    order: Vec<String>,
}

impl Corpus {
    /// The corpus compiled into the library.
    pub fn builtin() -> Corpus {
        Corpus::from_sources("built-in", MANIFEST, |f| {
            FILES
                .iter()
                .find(|(name, _)| *name == f)
                .map(|(_, text)| text.to_string())
                .ok_or_else(|| CatalogError::Corpus(format!("missing embedded file {f}")))
        })
        .expect("built-in corpus is valid")
    }

    /// Loads `dir/manifest.toml` and the files it lists.
    pub fn load(dir: &Path) -> Result<Corpus, CatalogError> {
        let manifest = fs::read_to_string(dir.join("manifest.toml"))
            .map_err(|e| CatalogError::Corpus(format!("{}: {e}", dir.join("manifest.toml").display())))?;
        Corpus::from_sources(&dir.display().to_string(), &manifest, |f| {
            fs::read_to_string(dir.join(f)).map_err(|e| CatalogError::Corpus(format!("{f}: {e}")))
        })
    }

    /// `BIHV_CORPUS` when set, else the built-in corpus.
    pub fn from_env() -> Result<Corpus, CatalogError> {
        match std::env::var_os(CORPUS_ENV) {
            Some(dir) => Corpus::load(Path::new(&dir)),
            None => Ok(Corpus::builtin()),
        }
    }

    fn from_sources(
        origin: &str,
        manifest: &str,
        read: impl Fn(&str) -> Result<String, CatalogError>,
    ) -> Result<Corpus, CatalogError> {
        let m: Manifest =
            toml::from_str(manifest).map_err(|e| CatalogError::Corpus(format!("manifest: {e}")))?;
        let mut entries = BTreeMap::new();
        let mut order = Vec::new();
        for e in m.identity {
            if e.files.is_empty() || e.rings.is_empty() {
                return Err(CatalogError::Corpus(format!("{}: needs files and rings", e.name)));
            }
            let rings = e
                .rings
                .iter()
                .map(|r| r.parse::<RingKind>())
                .collect::<Result<Vec<_>, _>>()?;
            let mut sources = Vec::new();
            for f in &e.files {
                let text = read(f)?;
                let tree = parse_tree(&text).map_err(|err| CatalogError::InFile {
                    file: f.clone(),
                    source: Box::new(err),
                })?;
                sources.push(Source {
                    file: f.clone(),
                    text,
                    tree,
                });
            }
            if entries.contains_key(&e.name) {
                return Err(CatalogError::Corpus(format!("duplicate identity {}", e.name)));
            }
            order.push(e.name.clone());
            entries.insert(
                e.name.clone(),
                CorpusEntry {
                    name: e.name,
                    rings,
                    mode: e.mode,
                    sources,
                },
            );
        }
        Ok(Corpus {
            origin: origin.to_string(),
            entries,
            order,
        })
    }

    pub fn origin(&self) -> &str {
        &self.origin
    }

    /// Identity names in manifest order.
    pub fn names(&self) -> &[String] {
        &self.order
    }

    pub fn entry(&self, name: &str) -> Result<&CorpusEntry, CatalogError> {
        self.entries
            .get(name)
            .ok_or_else(|| CatalogError::UnknownIdentity(name.to_string()))
    }

    /// The single expected polynomial of `name` over `ring`.
    pub fn expected_one(&self, name: &str, ring: &Ring) -> Result<Polynomial, CatalogError> {
        let mut v = self.entry(name)?.expected(ring)?;
        if v.len() != 1 {
            return Err(CatalogError::Corpus(format!("{name} holds {} polynomials, expected one", v.len())));
        }
        Ok(v.pop().unwrap())
    }
}
