//! JSON matrix and channel formats, plus seeded generator specs.
//!
//! Matrix format (row-major, complex entries as `[re, im]` pairs):
//!
//! ```json
//! { "dim": 2, "entries": [[[0.7, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.3, 0.0]]] }
//! ```
//!
//! Channel format: `{ "dim": d, "kraus": [matrix, ...], "tags": ["cptp", ...] }`.
//! Loaders re-validate every type invariant, and claimed channel tags are
//! re-derived from the Kraus family before they are accepted.
//!
//! Wherever a state file is expected, a generator spec is accepted instead:
//! `ginibre:d=4,rank=4,seed=7` (random state) or `maxmixed:d=4`.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::channels::{ChannelTag, KrausChannel};
use crate::error::{Error, Result};
use crate::linalg::{CMatrix, HermitianMatrix};
use crate::states::{random_density, DensityMatrix, UnitaryMatrix};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MatrixJson {
    pub dim: usize,
    pub entries: Vec<Vec<[f64; 2]>>,
}

impl MatrixJson {
    pub fn from_cmatrix(m: &CMatrix) -> Self {
        let dim = m.nrows();
        let entries = (0..dim)
            .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
            .collect();
        Self { dim, entries }
    }

    pub fn to_cmatrix(&self) -> Result<CMatrix> {
        if self.dim == 0 {
            return Err(Error::Config("field 'dim' must be positive".into()));
        }
        if self.entries.len() != self.dim {
            return Err(Error::Config(format!(
                "field 'entries' has {} rows, expected dim = {}",
                self.entries.len(),
                self.dim
            )));
        }
        for (i, row) in self.entries.iter().enumerate() {
            if row.len() != self.dim {
                return Err(Error::Config(format!(
                    "field 'entries' row {i} has {} columns, expected dim = {}",
                    row.len(),
                    self.dim
                )));
            }
        }
        Ok(CMatrix::from_fn(self.dim, self.dim, |i, j| {
            Complex64::new(self.entries[i][j][0], self.entries[i][j][1])
        }))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ChannelJson {
    pub dim: usize,
    pub kraus: Vec<MatrixJson>,
    #[serde(default)]
    pub tags: Vec<ChannelTag>,
}

fn parse_json<T: serde::de::DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Config(format!("malformed JSON: {e}")))
}

pub fn density_to_json(rho: &DensityMatrix) -> MatrixJson {
    MatrixJson::from_cmatrix(rho.matrix())
}

pub fn density_from_json(json: &MatrixJson) -> Result<DensityMatrix> {
    let m = json.to_cmatrix()?;
    DensityMatrix::from_matrix(HermitianMatrix::new(m)?)
}

pub fn unitary_to_json(u: &UnitaryMatrix) -> MatrixJson {
    MatrixJson::from_cmatrix(u.matrix())
}

pub fn save_density(rho: &DensityMatrix, path: &Path) -> Result<()> {
    let text = serde_json::to_string_pretty(&density_to_json(rho))
        .map_err(|e| Error::Config(format!("serialization failed: {e}")))?;
    std::fs::write(path, text)?;
    Ok(())
}

pub fn load_density_file(path: &Path) -> Result<DensityMatrix> {
    let text = std::fs::read_to_string(path)?;
    density_from_json(&parse_json(&text)?)
}

pub fn channel_to_json(channel: &KrausChannel) -> ChannelJson {
    ChannelJson {
        dim: channel.dim(),
        kraus: channel
            .kraus_operators()
            .iter()
            .map(MatrixJson::from_cmatrix)
            .collect(),
        tags: channel.tags().iter().copied().collect(),
    }
}

/// Rebuilds a channel, verifying trace preservation and every claimed tag.
pub fn channel_from_json(json: &ChannelJson) -> Result<KrausChannel> {
    let kraus: Vec<CMatrix> = json
        .kraus
        .iter()
        .enumerate()
        .map(|(i, m)| {
            if m.dim != json.dim {
                return Err(Error::Config(format!(
                    "field 'kraus' entry {i} has dim {}, expected {}",
                    m.dim, json.dim
                )));
            }
            m.to_cmatrix()
        })
        .collect::<Result<_>>()?;
    let mut channel = KrausChannel::new(kraus)?;
    for &tag in &json.tags {
        if !channel.verify_tag(tag) {
            return Err(Error::Config(format!(
                "claimed tag '{tag}' does not hold for the Kraus family"
            )));
        }
        channel.insert_tag(tag);
    }
    Ok(channel)
}

pub fn save_channel(channel: &KrausChannel, path: &Path) -> Result<()> {
    let text = serde_json::to_string_pretty(&channel_to_json(channel))
        .map_err(|e| Error::Config(format!("serialization failed: {e}")))?;
    std::fs::write(path, text)?;
    Ok(())
}

pub fn load_channel_file(path: &Path) -> Result<KrausChannel> {
    let text = std::fs::read_to_string(path)?;
    channel_from_json(&parse_json(&text)?)
}

/// Key-value tail of a generator spec, e.g. `d=4,rank=2,seed=7`.
fn parse_spec_fields(spec: &str, body: &str) -> Result<Vec<(String, u64)>> {
    body.split(',')
        .filter(|part| !part.is_empty())
        .map(|part| {
            let (key, value) = part.split_once('=').ok_or_else(|| {
                Error::Config(format!("generator spec '{spec}': expected key=value, got '{part}'"))
            })?;
            let value: u64 = value.parse().map_err(|_| {
                Error::Config(format!("generator spec '{spec}': field '{key}' is not an integer"))
            })?;
            Ok((key.to_string(), value))
        })
        .collect()
}

fn lookup(fields: &[(String, u64)], key: &str) -> Option<u64> {
    fields.iter().find(|(k, _)| k == key).map(|(_, v)| *v)
}

/// Loads a state from a file path or generates one from a spec
/// (`ginibre:d=..,rank=..,seed=..` or `maxmixed:d=..`). A spec without an
/// explicit seed uses `default_seed`.
pub fn load_state_source(source: &str, default_seed: u64) -> Result<DensityMatrix> {
    if let Some(body) = source.strip_prefix("ginibre:") {
        let fields = parse_spec_fields(source, body)?;
        let d = lookup(&fields, "d")
            .ok_or_else(|| Error::Config(format!("generator spec '{source}': missing field 'd'")))?
            as usize;
        let rank = lookup(&fields, "rank").map(|r| r as usize).unwrap_or(d);
        let seed = lookup(&fields, "seed").unwrap_or(default_seed);
        return random_density(d, rank, seed);
    }
    if let Some(body) = source.strip_prefix("maxmixed:") {
        let fields = parse_spec_fields(source, body)?;
        let d = lookup(&fields, "d")
            .ok_or_else(|| Error::Config(format!("generator spec '{source}': missing field 'd'")))?
            as usize;
        if d == 0 {
            return Err(Error::Config(format!("generator spec '{source}': d must be positive")));
        }
        return Ok(DensityMatrix::maximally_mixed(d));
    }
    load_density_file(Path::new(source))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{mixed_unitary, pinching, replacement};
    use crate::states::haar_unitary;

    #[test]
    fn density_round_trip_is_bit_exact() {
        let rho = random_density(3, 3, 123).unwrap();
        let json = density_to_json(&rho);
        let text = serde_json::to_string(&json).unwrap();
        let parsed: MatrixJson = serde_json::from_str(&text).unwrap();
        let back = density_from_json(&parsed).unwrap();
        assert_eq!(rho.matrix(), back.matrix());
    }

    #[test]
    fn density_file_round_trip() {
        let dir = std::env::temp_dir().join("azfid-io-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("state.json");
        let rho = random_density(4, 2, 9).unwrap();
        save_density(&rho, &path).unwrap();
        let back = load_density_file(&path).unwrap();
        assert_eq!(rho.matrix(), back.matrix());
        std::fs::remove_file(&path).unwrap();
    }

    #[test]
    fn invalid_matrices_are_rejected_with_field_names() {
        let bad = MatrixJson {
            dim: 2,
            entries: vec![vec![[1.0, 0.0]]],
        };
        let err = density_from_json(&bad).unwrap_err();
        assert!(err.to_string().contains("entries"));

        // parses but is not a state
        let not_state = MatrixJson {
            dim: 2,
            entries: vec![
                vec![[1.0, 0.0], [0.0, 0.0]],
                vec![[0.0, 0.0], [1.0, 0.0]],
            ],
        };
        assert!(density_from_json(&not_state).is_err());

        assert!(parse_json::<MatrixJson>("{not json").is_err());
    }

    #[test]
    fn channel_round_trip_and_tag_verification() {
        let basis = haar_unitary(3, 7);
        let channel = pinching(&basis);
        let json = channel_to_json(&channel);
        let back = channel_from_json(&json).unwrap();
        assert_eq!(back.tags(), channel.tags());

        // claiming an unsupported tag is rejected
        let tau = random_density(3, 3, 8).unwrap();
        let mut json = channel_to_json(&replacement(&tau));
        json.tags.push(ChannelTag::Unital);
        assert!(channel_from_json(&json).is_err());

        let u = haar_unitary(2, 9);
        let mix = mixed_unitary(&[0.3, 0.7], &[u.clone(), haar_unitary(2, 10)]).unwrap();
        let back = channel_from_json(&channel_to_json(&mix)).unwrap();
        assert!(back.tags().contains(&ChannelTag::MixedUnitary));
    }

    #[test]
    fn generator_specs() {
        let a = load_state_source("ginibre:d=4,rank=4,seed=7", 0).unwrap();
        let b = load_state_source("ginibre:d=4,seed=7", 0).unwrap();
        assert_eq!(a.matrix(), b.matrix());

        // falls back to the default seed
        let c = load_state_source("ginibre:d=4", 7).unwrap();
        assert_eq!(a.matrix(), c.matrix());

        let mixed = load_state_source("maxmixed:d=3", 0).unwrap();
        assert!((mixed.lambda_max() - 1.0 / 3.0).abs() < 1e-12);

        assert!(load_state_source("ginibre:rank=2", 0).is_err());
        assert!(load_state_source("ginibre:d=abc", 0).is_err());
        assert!(load_state_source("no-such-file.json", 0).is_err());
    }
}
