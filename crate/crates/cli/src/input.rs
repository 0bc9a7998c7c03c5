//! Reading input files, resolving references and recording digests.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use fitype_core::cat::{validate_category, validate_functor, FinCat, FinFunctor, RawCategory};
use fitype_core::format::{CatRef, RawFunctor};
use fitype_core::gen;
use fitype_core::group::{GroupHom, GroupTable, RawGroup};

#[derive(Debug, Clone, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

/// Every file read while running one command, in reading order.
#[derive(Default)]
pub struct Inputs {
    pub digests: Vec<InputDigest>,
}

impl Inputs {
    pub fn read(&mut self, path: &Path) -> Result<Vec<u8>> {
        let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
        self.digests.push(InputDigest {
            path: path.display().to_string(),
            sha256: hex::encode(Sha256::digest(&bytes)),
        });
        Ok(bytes)
    }

    pub fn json<T: DeserializeOwned>(&mut self, path: &Path) -> Result<T> {
        let bytes = self.read(path)?;
        serde_json::from_slice(&bytes).with_context(|| format!("parsing {}", path.display()))
    }

    pub fn value(&mut self, path: &Path) -> Result<serde_json::Value> {
        self.json(path)
    }

    fn cat_ref(&mut self, r: &CatRef, dir: &Path) -> Result<Arc<FinCat>> {
        let raw = match r {
            CatRef::Inline(raw) => raw.clone(),
            CatRef::Path(p) => self.json::<RawCategory>(&dir.join(p))?,
        };
        Ok(Arc::new(validate_category(&raw)?))
    }

    pub fn functor(&mut self, path: &Path) -> Result<FinFunctor> {
        let raw: RawFunctor = self.json(path)?;
        let dir = parent(path);
        let source = self.cat_ref(&raw.source, &dir).context("functor source")?;
        let target = self.cat_ref(&raw.target, &dir).context("functor target")?;
        Ok(validate_functor(source, target, &raw.on_objects, &raw.on_morphisms)?)
    }

    /// A category given by built-in name or by path.
    pub fn category(&mut self, arg: &str) -> Result<FinCat> {
        match builtin_category(arg)? {
            Some(c) => Ok(c),
            None => Ok(validate_category(&self.json::<RawCategory>(Path::new(arg))?)?),
        }
    }

    /// A group given by built-in name, by path, or inline.
    pub fn group(&mut self, r: &GroupRef, dir: &Path) -> Result<GroupTable> {
        match r {
            GroupRef::Inline(raw) => Ok(GroupTable::from_raw(raw)?),
            GroupRef::Named(arg) => match builtin_group(arg) {
                Some(g) => Ok(g),
                None => Ok(GroupTable::from_raw(&self.json::<RawGroup>(&dir.join(arg))?)?),
            },
        }
    }

    pub fn group_hom(&mut self, path: &Path) -> Result<GroupHom> {
        let raw: RawGroupHom = self.json(path)?;
        let dir = parent(path);
        let source = Arc::new(self.group(&raw.source, &dir)?);
        let target = Arc::new(self.group(&raw.target, &dir)?);
        Ok(GroupHom::from_names(source, target, &raw.map)?)
    }
}

fn parent(path: &Path) -> PathBuf {
    path.parent().map(Path::to_path_buf).unwrap_or_default()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupRef {
    Named(String),
    Inline(RawGroup),
}

/// Homomorphism file: groups by built-in name, path or inline, and the
/// element map by identifier.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RawGroupHom {
    pub source: GroupRef,
    pub target: GroupRef,
    pub map: BTreeMap<String, String>,
}

/// `trivial`, `klein`, `Z<n>` and `S<n>`.
pub fn builtin_group(arg: &str) -> Option<GroupTable> {
    let num = |s: &str| s.parse::<usize>().ok().filter(|&n| n >= 1);
    match arg {
        "trivial" => Some(GroupTable::trivial()),
        "klein" => Some(GroupTable::klein()),
        _ => {
            if let Some(n) = arg.strip_prefix('Z').and_then(num) {
                Some(GroupTable::cyclic(n))
            } else {
                arg.strip_prefix('S')
                    .and_then(num)
                    .filter(|&n| n <= 5)
                    .map(GroupTable::symmetric)
            }
        }
    }
}

pub const BUILTIN_CATEGORIES: &str =
    "fi:N, discrete:N, codiscrete:N, group:G, terminal, square, preorder-iso, idempotent, parallel";

/// Categories named in [`BUILTIN_CATEGORIES`]; `None` for anything else.
pub fn builtin_category(arg: &str) -> Result<Option<FinCat>> {
    let n = |s: &str| s.parse::<usize>().map_err(|_| anyhow!("bad size in `{arg}`"));
    let c = match arg.split_once(':') {
        Some(("fi", k)) => gen::fi_truncated(n(k)?),
        Some(("discrete", k)) => gen::discrete(n(k)?),
        Some(("codiscrete", k)) => gen::codiscrete(n(k)?),
        Some(("group", g)) => builtin_group(g)
            .ok_or_else(|| anyhow!("unknown group `{g}`"))?
            .as_category(),
        _ => match arg {
            "terminal" => gen::terminal(),
            "square" => gen::square_poset(),
            "preorder-iso" => gen::preorder_with_iso(),
            "idempotent" => gen::idempotent_monoid(),
            "parallel" => gen::two_parallel_arrows(),
            _ => return Ok(None),
        },
    };
    Ok(Some(c))
}

/// Parse a comma-separated list of `len` element identifiers of `g`.
pub fn parse_elements(g: &GroupTable, list: &str, len: usize) -> Result<Vec<usize>> {
    let out: Result<Vec<usize>> = list
        .split(',')
        .map(|s| g.element(s.trim()).ok_or_else(|| anyhow!("unknown element `{s}`")))
        .collect();
    let out = out?;
    if out.len() != len {
        bail!("expected {len} elements, got {}", out.len());
    }
    Ok(out)
}
