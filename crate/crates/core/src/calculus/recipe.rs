use std::fmt;

use serde::{Deserialize, Serialize};

use super::registry::{BlockName, Registry};
use super::sum::telescoping_sum;
use super::triple::TelescopingTriple;
use super::CalculusError;

pub const FAMILY_COUNT: u8 = 15;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BlockKind {
    A,
    B,
    C,
    D,
    F,
}

impl BlockKind {
    fn instantiate(self, g: Option<u32>) -> BlockName {
        match self {
            BlockKind::A => BlockName::A,
            BlockKind::B => BlockName::B(g.unwrap_or(0)),
            BlockKind::C => BlockName::C,
            BlockKind::D => BlockName::D,
            BlockKind::F => BlockName::F,
        }
    }
}

/// Blocks summed by each family: `n` copies of the first, then `m` copies
/// of the second.
const FAMILY_BLOCKS: [(BlockKind, Option<BlockKind>); FAMILY_COUNT as usize] = {
    use BlockKind::*;
    [
        (A, None),
        (C, None),
        (D, None),
        (F, None),
        (B, None),
        (A, Some(B)),
        (A, Some(C)),
        (A, Some(D)),
        (A, Some(F)),
        (B, Some(C)),
        (B, Some(D)),
        (B, Some(F)),
        (C, Some(D)),
        (C, Some(F)),
        (D, Some(F)),
    ]
};

/// One member of the fifteen families: family index `k`, multiplicities
/// `n` (and `m` for the two-block families), genus `g` when a `B_g` block
/// is involved.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawRecipe", into = "RawRecipe")]
pub struct FamilyRecipe {
    k: u8,
    n: u32,
    m: Option<u32>,
    g: Option<u32>,
}

#[derive(Serialize, Deserialize)]
struct RawRecipe {
    k: u8,
    n: u32,
    m: Option<u32>,
    g: Option<u32>,
}

impl TryFrom<RawRecipe> for FamilyRecipe {
    type Error = CalculusError;

    fn try_from(r: RawRecipe) -> Result<Self, Self::Error> {
        FamilyRecipe::new(r.k, r.n, r.m, r.g)
    }
}

impl From<FamilyRecipe> for RawRecipe {
    fn from(r: FamilyRecipe) -> Self {
        RawRecipe {
            k: r.k,
            n: r.n,
            m: r.m,
            g: r.g,
        }
    }
}

impl FamilyRecipe {
    pub fn new(k: u8, n: u32, m: Option<u32>, g: Option<u32>) -> Result<Self, CalculusError> {
        if !(1..=FAMILY_COUNT).contains(&k) {
            return Err(CalculusError::InvalidRecipe(format!("family index {k} not in 1..=15")));
        }
        if n == 0 {
            return Err(CalculusError::InvalidRecipe("n must be at least 1".into()));
        }
        let r = FamilyRecipe { k, n, m, g };
        match (r.is_two_block(), m) {
            (true, None) => return Err(CalculusError::InvalidRecipe(format!("family {k} needs m"))),
            (true, Some(0)) => return Err(CalculusError::InvalidRecipe("m must be at least 1".into())),
            (false, Some(_)) => {
                return Err(CalculusError::InvalidRecipe(format!("family {k} takes no m")))
            }
            _ => {}
        }
        match (r.uses_genus(), g) {
            (true, None) => Err(CalculusError::InvalidRecipe(format!("family {k} needs g"))),
            (false, Some(_)) => Err(CalculusError::InvalidRecipe(format!("family {k} takes no g"))),
            _ => Ok(r),
        }
    }

    /// Builds a recipe, silently dropping parameters the family does not
    /// take. Handy for sweeping bounds uniformly.
    pub fn lenient(k: u8, n: u32, m: u32, g: u32) -> Result<Self, CalculusError> {
        let (first, second) = FAMILY_BLOCKS
            .get(usize::from(k).wrapping_sub(1))
            .copied()
            .ok_or_else(|| CalculusError::InvalidRecipe(format!("family index {k} not in 1..=15")))?;
        let uses_b = first == BlockKind::B || second == Some(BlockKind::B);
        FamilyRecipe::new(k, n, second.map(|_| m), uses_b.then_some(g))
    }

    /// Every recipe of every family within the bounds, in (k, n, m, g) order.
    pub fn all_within(n_max: u32, m_max: u32, g_max: u32) -> Vec<FamilyRecipe> {
        let mut out = Vec::new();
        for k in 1..=FAMILY_COUNT {
            let probe = FamilyRecipe::lenient(k, 1, 1, 0).expect("valid family");
            let ms: Vec<Option<u32>> = if probe.is_two_block() {
                (1..=m_max).map(Some).collect()
            } else {
                vec![None]
            };
            let gs: Vec<Option<u32>> = if probe.uses_genus() {
                (0..=g_max).map(Some).collect()
            } else {
                vec![None]
            };
            for n in 1..=n_max {
                for &m in &ms {
                    for &g in &gs {
                        out.push(FamilyRecipe { k, n, m, g });
                    }
                }
            }
        }
        out
    }

    pub fn k(&self) -> u8 {
        self.k
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn m(&self) -> Option<u32> {
        self.m
    }

    pub fn g(&self) -> Option<u32> {
        self.g
    }

    fn blocks_pair(&self) -> (BlockKind, Option<BlockKind>) {
        FAMILY_BLOCKS[usize::from(self.k) - 1]
    }

    pub fn is_two_block(&self) -> bool {
        self.blocks_pair().1.is_some()
    }

    pub fn uses_genus(&self) -> bool {
        let (a, b) = self.blocks_pair();
        a == BlockKind::B || b == Some(BlockKind::B)
    }

    /// `n + m`, with `m` counted as zero when absent.
    pub fn size(&self) -> u32 {
        self.n + self.m.unwrap_or(0)
    }

    /// The summands in fold order.
    pub fn blocks(&self) -> Vec<BlockName> {
        let (first, second) = self.blocks_pair();
        let mut out = vec![first.instantiate(self.g); self.n as usize];
        if let (Some(second), Some(m)) = (second, self.m) {
            out.extend(std::iter::repeat_n(second.instantiate(self.g), m as usize));
        }
        out
    }

    /// Family name in the usual notation, e.g. `A_n#m(B_g)`.
    pub fn family_label(&self) -> &'static str {
        const LABELS: [&str; FAMILY_COUNT as usize] = [
            "A_n",
            "C_n",
            "D_n",
            "F_n",
            "#n(B_g)",
            "A_n#m(B_g)",
            "A_n#C_m",
            "A_n#D_m",
            "A_n#F_m",
            "#n(B_g)#C_m",
            "#n(B_g)#D_m",
            "#n(B_g)#F_m",
            "C_n#D_m",
            "C_n#F_m",
            "D_n#F_m",
        ];
        LABELS[usize::from(self.k) - 1]
    }
}

impl fmt::Display for FamilyRecipe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "k={} n={}", self.k, self.n)?;
        if let Some(m) = self.m {
            write!(f, " m={m}")?;
        }
        if let Some(g) = self.g {
            write!(f, " g={g}")?;
        }
        Ok(())
    }
}

/// Left fold of [`telescoping_sum`] over the recipe's blocks.
pub fn compose_recipe(registry: &Registry, r: &FamilyRecipe) -> Result<TelescopingTriple, CalculusError> {
    let mut blocks = r.blocks().into_iter();
    let first = blocks.next().expect("n >= 1");
    let mut acc = registry.load_block(first)?;
    let mut cache: Option<(_, TelescopingTriple)> = None;
    for name in blocks {
        let next = match &cache {
            Some((cached, triple)) if *cached == name => triple.clone(),
            _ => {
                let t = registry.load_block(name)?;
                cache = Some((name, t.clone()));
                t
            }
        };
        acc = telescoping_sum(&acc, &next)?;
    }
    acc.name = format!("{} [{}]", r.family_label(), r);
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parameter_applicability() {
        assert!(FamilyRecipe::new(1, 3, None, None).is_ok());
        assert!(FamilyRecipe::new(1, 3, Some(1), None).is_err());
        assert!(FamilyRecipe::new(1, 3, None, Some(0)).is_err());
        assert!(FamilyRecipe::new(5, 1, None, None).is_err());
        assert!(FamilyRecipe::new(6, 1, Some(1), None).is_err());
        assert!(FamilyRecipe::new(7, 1, None, None).is_err());
        assert!(FamilyRecipe::new(16, 1, None, None).is_err());
        assert!(FamilyRecipe::new(0, 1, None, None).is_err());
        assert!(FamilyRecipe::new(2, 0, None, None).is_err());
        assert!(FamilyRecipe::new(13, 1, Some(0), None).is_err());
    }

    #[test]
    fn recipe_counts() {
        let all = FamilyRecipe::all_within(2, 2, 1);
        // single: 4 families * 2 + family 5 * 2 * 2; two-block: 6 * 4 + 4 * 4 * 2
        assert_eq!(all.len(), 8 + 4 + 24 + 32);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn compose_single_block_families() {
        let reg = Registry::builtin();
        let t = compose_recipe(&reg, &FamilyRecipe::new(1, 3, None, None).unwrap()).unwrap();
        assert_eq!((t.e, t.sigma), (15, -3));
        let t = compose_recipe(&reg, &FamilyRecipe::new(5, 2, None, Some(1)).unwrap()).unwrap();
        assert_eq!((t.e, t.sigma), (20, -4));
        let t = compose_recipe(&reg, &FamilyRecipe::new(15, 1, Some(1), None).unwrap()).unwrap();
        assert_eq!((t.e, t.sigma), (18, -10));
    }

    #[test]
    fn serde_rejects_invalid_recipe() {
        let ok: FamilyRecipe = serde_json::from_str(r#"{"k":6,"n":1,"m":2,"g":0}"#).unwrap();
        assert_eq!(ok, FamilyRecipe::new(6, 1, Some(2), Some(0)).unwrap());
        assert!(serde_json::from_str::<FamilyRecipe>(r#"{"k":1,"n":1,"m":2,"g":null}"#).is_err());
    }
}
