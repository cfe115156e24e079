use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::Serialize;
use sha2::{Digest, Sha256};

use cubetool_core::complex::{CubeComplex, CubicalMap, MapDescription};

use crate::CliError;

/// Reads input files and remembers their digests.
#[derive(Default)]
pub struct Inputs {
    pub digests: BTreeMap<String, String>,
    complexes: BTreeMap<PathBuf, Arc<CubeComplex>>,
}

impl Inputs {
    pub fn read(&mut self, path: &Path) -> Result<String, CliError> {
        let bytes = std::fs::read(path).map_err(|e| CliError::Io(path.display().to_string(), e))?;
        self.digests
            .insert(path.display().to_string(), hex::encode(Sha256::digest(&bytes)));
        String::from_utf8(bytes).map_err(|_| CliError::Parse(path.display().to_string(), "not UTF-8".into()))
    }

    pub fn json<T: serde::de::DeserializeOwned>(&mut self, path: &Path) -> Result<T, CliError> {
        let text = self.read(path)?;
        serde_json::from_str(&text).map_err(|e| CliError::Parse(path.display().to_string(), e.to_string()))
    }

    pub fn complex(&mut self, path: &Path) -> Result<Arc<CubeComplex>, CliError> {
        if let Some(x) = self.complexes.get(path) {
            return Ok(x.clone());
        }
        let text = self.read(path)?;
        let x = Arc::new(
            CubeComplex::from_json(&text).map_err(|e| CliError::Parse(path.display().to_string(), e.to_string()))?,
        );
        self.complexes.insert(path.to_path_buf(), x.clone());
        Ok(x)
    }

    /// A map file; its domain and codomain are read from `{name}.json`
    /// next to it.
    pub fn map(&mut self, path: &Path) -> Result<CubicalMap, CliError> {
        let desc: MapDescription = self.json(path)?;
        let dir = path.parent().unwrap_or(Path::new("."));
        let domain = self.complex(&dir.join(format!("{}.json", desc.domain)))?;
        let codomain = self.complex(&dir.join(format!("{}.json", desc.codomain)))?;
        CubicalMap::from_description(&desc, domain, codomain)
            .map_err(|e| CliError::Parse(path.display().to_string(), e.to_string()))
    }
}

pub fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|e| CliError::Io(path.display().to_string(), e))
}

pub fn pretty<T: Serialize>(x: &T) -> String {
    serde_json::to_string_pretty(x).expect("serializable") + "\n"
}
