//! The 49 semantic measures: abstraction level, polysemy, seven intrinsic
//! information content formulas, five path-based similarities and five
//! IC-based similarity families instantiated with every IC formula.

mod ic;
mod similarity;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use ic::{ic_value, IcContext, IcInputs};
pub use similarity::{path_similarity, ic_similarity, SimilarityDetail};

use crate::error::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum IcFormula {
    Blanchard,
    Meng,
    Sanchez,
    SanchezBatet,
    Seco,
    Yuan,
    Zhou,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum PathFormula {
    AlMubaidNguyen,
    LeacockChodorow,
    Li,
    Rada,
    WuPalmer,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum IcSimFormula {
    JiangConrath,
    Lin,
    Meng,
    Resnik,
    Zhou,
}

impl IcFormula {
    pub const ALL: [IcFormula; 7] = [
        IcFormula::Blanchard,
        IcFormula::Meng,
        IcFormula::Sanchez,
        IcFormula::SanchezBatet,
        IcFormula::Seco,
        IcFormula::Yuan,
        IcFormula::Zhou,
    ];

    pub fn slug(self) -> &'static str {
        match self {
            IcFormula::Blanchard => "blanchard",
            IcFormula::Meng => "meng",
            IcFormula::Sanchez => "sanchez",
            IcFormula::SanchezBatet => "sanchez-batet",
            IcFormula::Seco => "seco",
            IcFormula::Yuan => "yuan",
            IcFormula::Zhou => "zhou",
        }
    }

    /// Bounded to [0, 1] by construction.
    pub fn is_normalized(self) -> bool {
        matches!(self, IcFormula::Blanchard | IcFormula::Sanchez | IcFormula::SanchezBatet | IcFormula::Seco)
    }
}

impl PathFormula {
    pub const ALL: [PathFormula; 5] = [
        PathFormula::AlMubaidNguyen,
        PathFormula::LeacockChodorow,
        PathFormula::Li,
        PathFormula::Rada,
        PathFormula::WuPalmer,
    ];

    pub fn slug(self) -> &'static str {
        match self {
            PathFormula::AlMubaidNguyen => "al-mubaid-nguyen",
            PathFormula::LeacockChodorow => "leacock-chodorow",
            PathFormula::Li => "li",
            PathFormula::Rada => "rada",
            PathFormula::WuPalmer => "wu-palmer",
        }
    }
}

impl IcSimFormula {
    pub const ALL: [IcSimFormula; 5] = [
        IcSimFormula::JiangConrath,
        IcSimFormula::Lin,
        IcSimFormula::Meng,
        IcSimFormula::Resnik,
        IcSimFormula::Zhou,
    ];

    pub fn slug(self) -> &'static str {
        match self {
            IcSimFormula::JiangConrath => "jiang-conrath",
            IcSimFormula::Lin => "lin",
            IcSimFormula::Meng => "meng",
            IcSimFormula::Resnik => "resnik",
            IcSimFormula::Zhou => "zhou",
        }
    }

    /// Combines path length with information content.
    pub fn is_hybrid(self) -> bool {
        matches!(self, IcSimFormula::Meng | IcSimFormula::Zhou)
    }
}

/// Identifier of one of the 49 measures.
///
/// Textual form: `abstraction`, `polysemy`, `ic:<ic>`, `<path>` and
/// `<ic-sim>:<ic>`, e.g. `ic:seco`, `wu-palmer`, `lin:sanchez-batet`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MeasureId {
    Abstraction,
    Polysemy,
    Ic(IcFormula),
    Path(PathFormula),
    IcSim(IcSimFormula, IcFormula),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MeasureFamily {
    Abstraction,
    Polysemy,
    InformationContent,
    PathSimilarity,
    IcSimilarity,
    HybridSimilarity,
}

impl MeasureId {
    /// All 49 measures in catalog order.
    pub fn all() -> Vec<MeasureId> {
        let mut out = vec![MeasureId::Abstraction, MeasureId::Polysemy];
        out.extend(IcFormula::ALL.map(MeasureId::Ic));
        out.extend(PathFormula::ALL.map(MeasureId::Path));
        for sim in IcSimFormula::ALL {
            out.extend(IcFormula::ALL.map(|ic| MeasureId::IcSim(sim, ic)));
        }
        out
    }

    /// The 40 two-argument measures.
    pub fn similarities() -> Vec<MeasureId> {
        Self::all().into_iter().filter(|m| m.is_similarity()).collect()
    }

    pub fn is_similarity(self) -> bool {
        matches!(self, MeasureId::Path(_) | MeasureId::IcSim(..))
    }

    pub fn family(self) -> MeasureFamily {
        match self {
            MeasureId::Abstraction => MeasureFamily::Abstraction,
            MeasureId::Polysemy => MeasureFamily::Polysemy,
            MeasureId::Ic(_) => MeasureFamily::InformationContent,
            MeasureId::Path(_) => MeasureFamily::PathSimilarity,
            MeasureId::IcSim(s, _) if s.is_hybrid() => MeasureFamily::HybridSimilarity,
            MeasureId::IcSim(..) => MeasureFamily::IcSimilarity,
        }
    }

    pub fn ic_formula(self) -> Option<IcFormula> {
        match self {
            MeasureId::Ic(ic) | MeasureId::IcSim(_, ic) => Some(ic),
            _ => None,
        }
    }

    /// Whether values are guaranteed to lie in [0, 1].
    pub fn is_normalized(self) -> bool {
        match self {
            MeasureId::Abstraction | MeasureId::Path(_) => true,
            MeasureId::Ic(ic) => ic.is_normalized(),
            MeasureId::Polysemy | MeasureId::IcSim(..) => false,
        }
    }

    pub fn note(self) -> Option<&'static str> {
        match self {
            MeasureId::IcSim(IcSimFormula::Zhou, _) => {
                Some("as printed, zero-distance pairs with equal IC score 0.5 rather than 1")
            }
            MeasureId::Ic(IcFormula::Meng | IcFormula::Yuan) => Some("not bounded above by construction"),
            _ => None,
        }
    }
}

impl fmt::Display for MeasureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeasureId::Abstraction => f.write_str("abstraction"),
            MeasureId::Polysemy => f.write_str("polysemy"),
            MeasureId::Ic(ic) => write!(f, "ic:{}", ic.slug()),
            MeasureId::Path(p) => f.write_str(p.slug()),
            MeasureId::IcSim(s, ic) => write!(f, "{}:{}", s.slug(), ic.slug()),
        }
    }
}

impl FromStr for MeasureId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let key = s.trim().to_ascii_lowercase().replace(['_', ' ', '–'], "-");
        let ic = |name: &str| IcFormula::ALL.into_iter().find(|f| f.slug() == name);
        let found = match key.split_once(':') {
            None => match key.as_str() {
                "abstraction" => Some(MeasureId::Abstraction),
                "polysemy" => Some(MeasureId::Polysemy),
                other => PathFormula::ALL.into_iter().find(|p| p.slug() == other).map(MeasureId::Path),
            },
            Some(("ic", name)) => ic(name).map(MeasureId::Ic),
            Some((sim, name)) => IcSimFormula::ALL
                .into_iter()
                .find(|f| f.slug() == sim)
                .zip(ic(name))
                .map(|(s, i)| MeasureId::IcSim(s, i)),
        };
        found.ok_or_else(|| Error::UnknownMeasure(s.to_string()))
    }
}

impl Serialize for MeasureId {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for MeasureId {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Parses a comma-separated measure list; `all`, `similarity` and `ic`
/// expand to the corresponding groups.
pub fn parse_measure_list(spec: &str) -> Result<Vec<MeasureId>, Error> {
    let mut out = Vec::new();
    for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        match item {
            "all" => out.extend(MeasureId::all()),
            "similarity" => out.extend(MeasureId::similarities()),
            "ic" => out.extend(IcFormula::ALL.map(MeasureId::Ic)),
            other => out.push(other.parse()?),
        }
    }
    let mut seen = std::collections::HashSet::new();
    out.retain(|m| seen.insert(*m));
    Ok(out)
}

/// One row of the machine-readable measure listing.
#[derive(Clone, Debug, Serialize)]
pub struct CatalogEntry {
    pub id: MeasureId,
    pub family: MeasureFamily,
    pub ic_formula: Option<&'static str>,
    pub normalized: bool,
    pub arity: u8,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<&'static str>,
}

pub fn catalog() -> Vec<CatalogEntry> {
    MeasureId::all()
        .into_iter()
        .map(|id| CatalogEntry {
            id,
            family: id.family(),
            ic_formula: id.ic_formula().map(IcFormula::slug),
            normalized: id.is_normalized(),
            arity: if id.is_similarity() { 2 } else { 1 },
            note: id.note(),
        })
        .collect()
}
