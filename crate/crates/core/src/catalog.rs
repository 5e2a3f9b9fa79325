//! Append-only catalog of verified constructions.
//!
//! One JSON record per line. Each record carries a SHA-256 checksum of its
//! own canonical JSON (keys sorted, `checksum` omitted), and loading a catalog
//! replays every record's provenance to confirm the stored invariants.

use std::collections::BTreeSet;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::calculus::{
    botany_family_member, botany_seed, compose_recipe, replay, surgery_pipeline, CalculusError,
    ExponentConvention, FamilyRecipe, ManifoldState, Registry, Step,
};
use crate::geography::{betti_from_char, char_from_es, theorem1_point, BettiPair, GeographyError, GroupTag};
use crate::group::AbelianInvariants;

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("catalog line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("catalog line {line}: checksum mismatch (stored {stored}, computed {computed})")]
    Checksum {
        line: usize,
        stored: String,
        computed: String,
    },
    #[error("catalog line {line}: replay disagrees on {field}: stored {stored}, replayed {replayed}")]
    Mismatch {
        line: usize,
        field: &'static str,
        stored: String,
        replayed: String,
    },
    #[error("catalog line {line}: {source}")]
    Replay {
        line: usize,
        #[source]
        source: CalculusError,
    },
    #[error(transparent)]
    Calculus(#[from] CalculusError),
    #[error(transparent)]
    Geography(#[from] GeographyError),
    #[error("witness for {recipe} over {group} has group {found}")]
    WrongGroup {
        recipe: FamilyRecipe,
        group: GroupTag,
        found: String,
    },
}

/// Abelian invariants in serializable form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupRecord {
    pub free_rank: usize,
    pub torsion: Vec<u64>,
    pub certified: bool,
}

impl GroupRecord {
    fn of_state(state: &ManifoldState) -> Self {
        let inv = state.invariants();
        GroupRecord {
            free_rank: inv.free_rank,
            torsion: inv.torsion_u64().unwrap_or_default(),
            certified: state.is_certified_abelian(),
        }
    }

    pub fn invariants(&self) -> AbelianInvariants {
        AbelianInvariants::from_cyclic_orders(self.free_rank, &self.torsion)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurgeryParams {
    pub p: Option<u32>,
    pub q: Option<u32>,
    /// Index of the botany family member.
    pub botany_n: Option<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Flags {
    pub symplectic: bool,
    pub minimal: bool,
    pub irreducible: bool,
    pub spin: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub c: i64,
    pub chi: i64,
    pub e: i64,
    pub sigma: i64,
    pub betti: BettiPair,
    pub group: GroupTag,
    pub pi1: GroupRecord,
    pub recipe: FamilyRecipe,
    pub surgery: SurgeryParams,
    pub flags: Flags,
    pub provenance: Vec<Step>,
    #[serde(default)]
    pub checksum: String,
}

impl CatalogEntry {
    /// Hex SHA-256 of the canonical JSON without the checksum field.
    pub fn compute_checksum(&self) -> String {
        let mut value = serde_json::to_value(self).expect("entry serializes");
        if let Some(map) = value.as_object_mut() {
            map.remove("checksum");
        }
        // serde_json's default map is ordered, so this is canonical.
        let bytes = serde_json::to_vec(&value).expect("value serializes");
        hex::encode(Sha256::digest(&bytes))
    }

    fn sealed(mut self) -> Self {
        self.checksum = self.compute_checksum();
        self
    }

    fn from_state(
        state: &ManifoldState,
        recipe: FamilyRecipe,
        group: GroupTag,
        surgery: SurgeryParams,
    ) -> Result<Self, CatalogError> {
        let cn = char_from_es(state.e, state.sigma)?;
        Ok(CatalogEntry {
            c: cn.c1sq,
            chi: cn.chi_h,
            e: state.e,
            sigma: state.sigma,
            betti: betti_from_char(&cn, group.b1())?,
            group,
            pi1: GroupRecord::of_state(state),
            recipe,
            surgery,
            flags: Flags {
                symplectic: state.symplectic,
                minimal: state.minimal,
                irreducible: state.minimal,
                spin: state.spin,
            },
            provenance: state.provenance.clone(),
            checksum: String::new(),
        }
        .sealed())
    }
}

/// Builds a witness for a geography point. `Z⊕Z` is the composed triple
/// itself, `Z⊕Z_p` and `Z_q⊕Z_p` come from one and two surgeries (with
/// `q = p`), and `Z_p⊕Z_p` is the symplectic botany member `n = 1`.
pub fn witness(
    registry: &Registry,
    recipe: &FamilyRecipe,
    group: GroupTag,
    p: u32,
    convention: ExponentConvention,
) -> Result<CatalogEntry, CatalogError> {
    let t = compose_recipe(registry, recipe)?;
    let pi = i64::from(p);
    let (state, surgery, expected) = match group {
        GroupTag::ZxZ => (
            ManifoldState::from(&t),
            SurgeryParams::default(),
            AbelianInvariants::from_cyclic_orders(2, &[]),
        ),
        GroupTag::ZxZp => (
            surgery_pipeline(&t, pi, pi)?.0,
            SurgeryParams {
                p: Some(p),
                ..Default::default()
            },
            AbelianInvariants::from_cyclic_orders(1, &[u64::from(p)]),
        ),
        GroupTag::ZqxZp => (
            surgery_pipeline(&t, pi, pi)?.1,
            SurgeryParams {
                p: Some(p),
                q: Some(p),
                botany_n: None,
            },
            AbelianInvariants::from_cyclic_orders(0, &[u64::from(p), u64::from(p)]),
        ),
        GroupTag::ZpxZp => (
            botany_family_member(&botany_seed(&t, pi)?, 1, p, convention)?,
            SurgeryParams {
                p: Some(p),
                q: None,
                botany_n: Some(1),
            },
            AbelianInvariants::from_cyclic_orders(0, &[u64::from(p), u64::from(p)]),
        ),
    };
    if !state.is_certified_abelian() || state.invariants() != expected {
        return Err(CatalogError::WrongGroup {
            recipe: *recipe,
            group,
            found: state.invariants().to_string(),
        });
    }
    CatalogEntry::from_state(&state, *recipe, group, surgery)
}

/// Checks the checksum, then replays the provenance and compares every
/// derived field.
pub fn verify_entry(registry: &Registry, entry: &CatalogEntry, line: usize) -> Result<(), CatalogError> {
    let computed = entry.compute_checksum();
    if computed != entry.checksum {
        return Err(CatalogError::Checksum {
            line,
            stored: entry.checksum.clone(),
            computed,
        });
    }
    let state = replay(registry, &entry.provenance)
        .map_err(|source| CatalogError::Replay { line, source })?
        .into_state();
    let again = CatalogEntry::from_state(&state, entry.recipe, entry.group, entry.surgery)?;
    let mismatch = |field: &'static str, stored: String, replayed: String| CatalogError::Mismatch {
        line,
        field,
        stored,
        replayed,
    };
    if (again.e, again.sigma) != (entry.e, entry.sigma) {
        return Err(mismatch(
            "(e, sigma)",
            format!("({}, {})", entry.e, entry.sigma),
            format!("({}, {})", again.e, again.sigma),
        ));
    }
    if (again.c, again.chi) != (entry.c, entry.chi) || theorem1_point(&entry.recipe) != (entry.c, entry.chi) {
        return Err(mismatch(
            "(c, chi)",
            format!("({}, {})", entry.c, entry.chi),
            format!("({}, {})", again.c, again.chi),
        ));
    }
    if again.betti != entry.betti {
        return Err(mismatch("betti", format!("{:?}", entry.betti), format!("{:?}", again.betti)));
    }
    if again.pi1 != entry.pi1 {
        return Err(mismatch("pi1", format!("{:?}", entry.pi1), format!("{:?}", again.pi1)));
    }
    if again.flags != entry.flags {
        return Err(mismatch("flags", format!("{:?}", entry.flags), format!("{:?}", again.flags)));
    }
    Ok(())
}

/// A catalog file and its verified records.
#[derive(Debug)]
pub struct Catalog {
    path: PathBuf,
    entries: Vec<CatalogEntry>,
    checksums: BTreeSet<String>,
}

impl Catalog {
    /// Loads and verifies every record. A missing file is an empty catalog.
    pub fn open(path: &Path, registry: &Registry) -> Result<Catalog, CatalogError> {
        let mut catalog = Catalog {
            path: path.to_path_buf(),
            entries: Vec::new(),
            checksums: BTreeSet::new(),
        };
        let file = match File::open(path) {
            Ok(f) => f,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(catalog),
            Err(source) => {
                return Err(CatalogError::Io {
                    path: path.to_path_buf(),
                    source,
                })
            }
        };
        for (i, line) in BufReader::new(file).lines().enumerate() {
            let line_no = i + 1;
            let line = line.map_err(|source| CatalogError::Io {
                path: path.to_path_buf(),
                source,
            })?;
            if line.trim().is_empty() {
                continue;
            }
            let entry: CatalogEntry = serde_json::from_str(&line).map_err(|e| CatalogError::Parse {
                line: line_no,
                message: e.to_string(),
            })?;
            verify_entry(registry, &entry, line_no)?;
            catalog.checksums.insert(entry.checksum.clone());
            catalog.entries.push(entry);
        }
        Ok(catalog)
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn entries(&self) -> &[CatalogEntry] {
        &self.entries
    }

    pub fn contains(&self, entry: &CatalogEntry) -> bool {
        self.checksums.contains(&entry.checksum)
    }

    /// Appends the entries not already present; returns how many were
    /// written.
    pub fn append(&mut self, entries: impl IntoIterator<Item = CatalogEntry>) -> Result<usize, CatalogError> {
        let io = |source| CatalogError::Io {
            path: self.path.clone(),
            source,
        };
        let mut buf = Vec::new();
        let mut fresh = Vec::new();
        for mut entry in entries {
            if entry.checksum.is_empty() {
                entry = entry.sealed();
            }
            if self.checksums.insert(entry.checksum.clone()) {
                serde_json::to_writer(&mut buf, &entry).expect("entry serializes");
                buf.push(b'\n');
                fresh.push(entry);
            }
        }
        if fresh.is_empty() {
            return Ok(0);
        }
        let mut file = OpenOptions::new().create(true).append(true).open(&self.path).map_err(io)?;
        file.write_all(&buf).map_err(io)?;
        file.flush().map_err(io)?;
        let n = fresh.len();
        self.entries.extend(fresh);
        Ok(n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(group: GroupTag) -> CatalogEntry {
        let r = FamilyRecipe::new(7, 1, Some(1), None).unwrap();
        witness(&Registry::builtin(), &r, group, 3, ExponentConvention::KillXp).unwrap()
    }

    #[test]
    fn witnesses_verify() {
        let reg = Registry::builtin();
        for g in GroupTag::ALL {
            let e = sample(g);
            assert_eq!((e.c, e.chi), (12, 2), "{g}");
            verify_entry(&reg, &e, 1).unwrap();
        }
        let zz = sample(GroupTag::ZxZ);
        assert_eq!((zz.betti.b1, zz.betti.b2_plus, zz.betti.b2_minus), (2, 5, 9));
    }

    #[test]
    fn tampering_is_detected() {
        let reg = Registry::builtin();
        let mut e = sample(GroupTag::ZpxZp);
        e.flags.symplectic = false;
        assert!(matches!(verify_entry(&reg, &e, 4), Err(CatalogError::Checksum { line: 4, .. })));
        let e = CatalogEntry { c: 99, ..sample(GroupTag::ZxZp) }.sealed();
        assert!(matches!(verify_entry(&reg, &e, 1), Err(CatalogError::Mismatch { .. })));
    }

    #[test]
    fn checksum_ignores_its_own_field() {
        let e = sample(GroupTag::ZxZ);
        let mut f = e.clone();
        f.checksum = "junk".into();
        assert_eq!(e.compute_checksum(), f.compute_checksum());
    }
}
