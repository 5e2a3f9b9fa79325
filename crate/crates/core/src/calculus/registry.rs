use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::replay::Step;
use super::triple::{validate_triple, TelescopingTriple, TorusData, TorusId};
use super::CalculusError;
use crate::group::{GeneratorSymbol, Presentation, Word};

const DEFAULT_REGISTRY: &str = include_str!("../../registry/blocks.json");

/// One of the five building blocks; `B` carries its genus parameter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum BlockName {
    A,
    B(u32),
    C,
    D,
    F,
}

impl BlockName {
    /// Registry key (`B` for every genus).
    pub fn key(&self) -> &'static str {
        match self {
            BlockName::A => "A",
            BlockName::B(_) => "B",
            BlockName::C => "C",
            BlockName::D => "D",
            BlockName::F => "F",
        }
    }

    pub fn genus(&self) -> Option<u32> {
        match self {
            BlockName::B(g) => Some(*g),
            _ => None,
        }
    }
}

impl fmt::Display for BlockName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BlockName::B(g) => write!(f, "B_{g}"),
            other => f.write_str(other.key()),
        }
    }
}

impl FromStr for BlockName {
    type Err = CalculusError;

    /// Accepts `A`, `C`, `D`, `F`, and `B_g` / `B(g)` / `Bg`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        match s {
            "A" => return Ok(BlockName::A),
            "C" => return Ok(BlockName::C),
            "D" => return Ok(BlockName::D),
            "F" => return Ok(BlockName::F),
            _ => {}
        }
        if let Some(rest) = s.strip_prefix('B') {
            let digits = rest
                .trim_start_matches('_')
                .trim_start_matches('(')
                .trim_end_matches(')');
            if let Ok(g) = digits.parse() {
                return Ok(BlockName::B(g));
            }
        }
        Err(CalculusError::UnknownBlock(s.to_string()))
    }
}

impl TryFrom<String> for BlockName {
    type Error = CalculusError;

    fn try_from(value: String) -> Result<Self, Self::Error> {
        value.parse()
    }
}

impl From<BlockName> for String {
    fn from(value: BlockName) -> Self {
        value.to_string()
    }
}

/// On-disk registry layout.
///
/// ```json
/// { "blocks": [ { "name": "A", "e": 5, "sigma": -1,
///                 "generators": ["b1", "c"], "relators": ["[b1,c]"],
///                 "tori": { "T1": { "meridian": "1", "pushoff_m": "c", "pushoff_l": "1" },
///                           "T2": { "meridian": "1", "pushoff_m": "c", "pushoff_l": "b1" } },
///                 "flags": { "minimal": true, "spin": false, "h2_independent": true } } ] }
/// ```
///
/// Genus-parametric blocks add `e_per_genus` / `sigma_per_genus`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegistryFile {
    pub blocks: Vec<BlockEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockEntry {
    pub name: String,
    pub e: i64,
    pub sigma: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e_per_genus: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma_per_genus: Option<i64>,
    pub generators: Vec<String>,
    pub relators: Vec<String>,
    pub tori: ToriEntry,
    pub flags: FlagsEntry,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToriEntry {
    #[serde(rename = "T1")]
    pub t1: TorusEntry,
    #[serde(rename = "T2")]
    pub t2: TorusEntry,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TorusEntry {
    pub meridian: String,
    pub pushoff_m: String,
    pub pushoff_l: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlagsEntry {
    pub minimal: bool,
    pub spin: bool,
    pub h2_independent: bool,
}

impl BlockEntry {
    fn is_parametric(&self) -> bool {
        self.e_per_genus.is_some() || self.sigma_per_genus.is_some()
    }

    fn error(&self, message: impl Into<String>) -> CalculusError {
        CalculusError::RegistryEntry {
            block: self.name.clone(),
            message: message.into(),
        }
    }

    fn presentation(&self) -> Result<Presentation, CalculusError> {
        let generators = self
            .generators
            .iter()
            .map(|g| GeneratorSymbol::new(g.as_str()))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| self.error(e.to_string()))?;
        let relators = self
            .relators
            .iter()
            .map(|r| Word::parse(r, &generators))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| self.error(e.to_string()))?;
        Presentation::new(generators, relators).map_err(|e| self.error(e.to_string()))
    }

    fn torus(&self, p: &Presentation, id: TorusId, entry: &TorusEntry) -> Result<TorusData, CalculusError> {
        let parse = |text: &str| p.word(text).map_err(|e| self.error(format!("{id}: {e}")));
        Ok(TorusData {
            id,
            meridian: parse(&entry.meridian)?,
            pushoff_m: parse(&entry.pushoff_m)?,
            pushoff_l: parse(&entry.pushoff_l)?,
        })
    }

    /// Instantiates the entry as a triple without validating it.
    pub fn instantiate(&self, name: BlockName) -> Result<TelescopingTriple, CalculusError> {
        let g = i64::from(name.genus().unwrap_or(0));
        match (self.is_parametric(), name.genus()) {
            (true, None) => return Err(self.error("genus parameter required")),
            (false, Some(_)) => return Err(self.error("block takes no genus parameter")),
            _ => {}
        }
        let p = self.presentation()?;
        let t1 = self.torus(&p, TorusId::T1, &self.tori.t1)?;
        let t2 = self.torus(&p, TorusId::T2, &self.tori.t2)?;
        let e = g
            .checked_mul(self.e_per_genus.unwrap_or(0))
            .and_then(|x| x.checked_add(self.e))
            .ok_or(CalculusError::Overflow("block Euler characteristic"))?;
        let sigma = g
            .checked_mul(self.sigma_per_genus.unwrap_or(0))
            .and_then(|x| x.checked_add(self.sigma))
            .ok_or(CalculusError::Overflow("block signature"))?;
        Ok(TelescopingTriple {
            name: name.to_string(),
            e,
            sigma,
            complement_pi1: p,
            t1,
            t2,
            minimal: self.flags.minimal,
            h2_independent: self.flags.h2_independent,
            spin: self.flags.spin,
            provenance: vec![Step::Block { name }],
        })
    }
}

/// The block registry, keyed by block name.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Registry {
    blocks: BTreeMap<String, BlockEntry>,
}

impl Registry {
    /// The registry shipped with the crate.
    pub fn builtin() -> Registry {
        Registry::from_json(DEFAULT_REGISTRY).expect("built-in registry is valid")
    }

    pub fn from_json(text: &str) -> Result<Registry, CalculusError> {
        let file: RegistryFile = serde_json::from_str(text).map_err(|e| CalculusError::RegistryParse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        Registry::from_file(file)
    }

    pub fn from_file(file: RegistryFile) -> Result<Registry, CalculusError> {
        if file.blocks.is_empty() {
            return Err(CalculusError::RegistryParse {
                line: 1,
                column: 1,
                message: "registry contains no blocks".to_string(),
            });
        }
        let mut blocks = BTreeMap::new();
        for entry in file.blocks {
            entry.presentation()?;
            if blocks.contains_key(&entry.name) {
                return Err(entry.error("duplicate block name"));
            }
            blocks.insert(entry.name.clone(), entry);
        }
        Ok(Registry { blocks })
    }

    pub fn load(path: &Path) -> Result<Registry, CalculusError> {
        let text = std::fs::read_to_string(path).map_err(|e| CalculusError::RegistryParse {
            line: 0,
            column: 0,
            message: format!("{}: {e}", path.display()),
        })?;
        Registry::from_json(&text)
    }

    pub fn entries(&self) -> impl Iterator<Item = &BlockEntry> {
        self.blocks.values()
    }

    pub fn entry(&self, key: &str) -> Option<&BlockEntry> {
        self.blocks.get(key)
    }

    /// Instantiates and validates a block.
    pub fn load_block(&self, name: BlockName) -> Result<TelescopingTriple, CalculusError> {
        let entry = self
            .blocks
            .get(name.key())
            .ok_or_else(|| CalculusError::UnknownBlock(name.to_string()))?;
        let triple = entry.instantiate(name)?;
        let report = validate_triple(&triple);
        if !report.all_passed() {
            return Err(CalculusError::InvalidTriple {
                block: name.to_string(),
                failures: report
                    .failures()
                    .iter()
                    .map(|c| format!("{}: {}", c.name, c.detail))
                    .collect::<Vec<_>>()
                    .join("; "),
            });
        }
        Ok(triple)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::triple::{CHECK_MERIDIANS, CHECK_T1_SUMMAND, CHECK_T2_GENERATES};

    #[test]
    fn builtin_blocks_have_expected_numbers() {
        let r = Registry::builtin();
        let a = r.load_block(BlockName::A).unwrap();
        assert_eq!((a.e, a.sigma), (5, -1));
        let b2 = r.load_block(BlockName::B(2)).unwrap();
        assert_eq!((b2.e, b2.sigma), (14, -2));
        let c = r.load_block(BlockName::C).unwrap();
        assert_eq!((c.e, c.sigma), (7, -3));
        let d = r.load_block(BlockName::D).unwrap();
        assert_eq!((d.e, d.sigma), (8, -4));
        let f = r.load_block(BlockName::F).unwrap();
        assert_eq!((f.e, f.sigma), (10, -6));
        assert!([&a, &b2, &c, &d, &f].iter().all(|t| t.minimal && !t.spin));
    }

    #[test]
    fn block_a_pushoffs() {
        let a = Registry::builtin().load_block(BlockName::A).unwrap();
        let report = validate_triple(&a);
        assert!(report.all_passed(), "{report}");
        let p = &a.complement_pi1;
        assert_eq!(a.t1.pushoff_m, p.word("c").unwrap());
        assert_eq!(a.t2.pushoff_m, p.word("c").unwrap());
        assert_eq!(a.t2.pushoff_l, p.word("b1").unwrap());
    }

    #[test]
    fn block_c_pushoffs() {
        let c = Registry::builtin().load_block(BlockName::C).unwrap();
        let report = validate_triple(&c);
        assert!(report.all_passed(), "{report}");
        let p = &c.complement_pi1;
        assert_eq!(c.t2.pushoff_m, p.word("alpha4").unwrap());
        assert_eq!(c.t2.pushoff_l, p.word("alpha2").unwrap());
    }

    fn xy_entry(meridian: &str) -> BlockEntry {
        BlockEntry {
            name: "X".to_string(),
            e: 4,
            sigma: 0,
            e_per_genus: None,
            sigma_per_genus: None,
            generators: vec!["x".into(), "y".into()],
            relators: vec!["[x,y]".into()],
            tori: ToriEntry {
                t1: TorusEntry {
                    meridian: meridian.into(),
                    pushoff_m: "x".into(),
                    pushoff_l: "1".into(),
                },
                t2: TorusEntry {
                    meridian: "1".into(),
                    pushoff_m: "x".into(),
                    pushoff_l: "y".into(),
                },
            },
            flags: FlagsEntry {
                minimal: true,
                spin: false,
                h2_independent: true,
            },
        }
    }

    #[test]
    fn nontrivial_meridian_fails_validation() {
        let t = xy_entry("x").instantiate(BlockName::A).unwrap();
        let report = validate_triple(&t);
        assert!(!report.check(CHECK_MERIDIANS).unwrap().passed);
        assert!(report.check(CHECK_T1_SUMMAND).unwrap().passed);
        assert!(report.check(CHECK_T2_GENERATES).unwrap().passed);

        let mut file = RegistryFile {
            blocks: vec![xy_entry("x")],
        };
        file.blocks[0].name = "A".into();
        let r = Registry::from_file(file).unwrap();
        assert!(matches!(
            r.load_block(BlockName::A),
            Err(CalculusError::InvalidTriple { .. })
        ));
    }

    #[test]
    fn singular_t2_fails_validation() {
        let mut entry = xy_entry("1");
        entry.tori.t2.pushoff_l = "x^2".into();
        let t = entry.instantiate(BlockName::A).unwrap();
        assert!(!validate_triple(&t).check(CHECK_T2_GENERATES).unwrap().passed);
    }

    #[test]
    fn parse_diagnostics() {
        assert!(matches!(
            Registry::from_json(""),
            Err(CalculusError::RegistryParse { line: 1, .. })
        ));
        assert!(Registry::from_json("{\"blocks\": []}").is_err());
        let err = Registry::from_json("{\n  \"blocks\": [\n    {\"name\": 3}\n  ]\n}").unwrap_err();
        assert!(matches!(err, CalculusError::RegistryParse { line: 3, .. }), "{err}");
    }

    #[test]
    fn unknown_and_misparameterized_blocks() {
        let r = Registry::from_file(RegistryFile {
            blocks: vec![xy_entry("1")],
        })
        .unwrap();
        assert!(matches!(r.load_block(BlockName::C), Err(CalculusError::UnknownBlock(_))));
        let builtin = Registry::builtin();
        assert!(builtin.entry("B").unwrap().instantiate(BlockName::A).is_err());
        assert!(builtin.entry("A").unwrap().instantiate(BlockName::B(1)).is_err());
    }

    #[test]
    fn block_names_parse() {
        assert_eq!("B_3".parse::<BlockName>().unwrap(), BlockName::B(3));
        assert_eq!("B(0)".parse::<BlockName>().unwrap(), BlockName::B(0));
        assert_eq!("F".parse::<BlockName>().unwrap(), BlockName::F);
        assert!("Q".parse::<BlockName>().is_err());
    }
}
