//! The JSON file format for diagrams and instances.
//!
//! ```json
//! {
//!   "components": [["D", 4], ["D", 4]],
//!   "generators": ["(0 4)(1 5)(2 6)(3 7)"],
//!   "mu": [0],
//!   "cover": { "over": [0, 0, 1, 1], "conjugation": [1, 0, 3, 2] },
//!   "phi": []
//! }
//! ```
//!
//! Nodes are numbered globally, component after component, each component
//! in Bourbaki order from 0. `cover` and `phi` are optional and only used by
//! the Deligne construction.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::deldyn::DeligneDynkinDiagram;
use crate::error::{Error, Result};
use crate::gaction::{ComponentMap, EquivariantDiagram};
use crate::hodge::{PartialCMType, QuadraticCover};
use crate::localglobal::{Instance, Verdict};
use crate::perm::{Perm, PermGroup};
use crate::rootsys::{DynkinDiagram, Family, SimpleType};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverBlock {
    pub over: Vec<usize>,
    pub conjugation: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagramFile {
    pub components: Vec<(String, usize)>,
    #[serde(default)]
    pub generators: Vec<String>,
    #[serde(default)]
    pub mu: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cover: Option<CoverBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<Vec<usize>>,
}

/// 1-based line of the first occurrence of `needle` at or after `from`.
fn line_of(text: &str, needle: &str, from: usize) -> usize {
    text.lines()
        .enumerate()
        .skip(from.saturating_sub(1))
        .find(|(_, l)| l.contains(needle))
        .map(|(i, _)| i + 1)
        .unwrap_or(from.max(1))
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn json_err(e: serde_json::Error) -> Error {
    parse_err(e.line().max(1), e.to_string())
}

impl DiagramFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(json_err)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data")
    }

    /// Describes `d` in file form. Generators are written as given.
    pub fn from_diagram(d: &DeligneDynkinDiagram) -> Self {
        let diagram = d.base().diagram();
        DiagramFile {
            components: diagram
                .components()
                .iter()
                .map(|c| {
                    let t = c.kind.simple_type();
                    (format!("{:?}", t.family), t.rank)
                })
                .collect(),
            generators: d
                .base()
                .group()
                .generators()
                .iter()
                .map(|g| g.to_cycle_string())
                .collect(),
            mu: d.mu().iter().copied().collect(),
            cover: None,
            phi: None,
        }
    }

    pub fn with_deligne_choices(mut self, cover: &QuadraticCover, phi: &PartialCMType) -> Self {
        self.cover = Some(CoverBlock {
            over: cover.over.clone(),
            conjugation: cover.conjugation.clone(),
        });
        self.phi = Some(phi.phi.iter().copied().collect());
        self
    }

    /// Builds and validates the diagram. `text` is the source the file was
    /// read from, used to anchor messages to lines; pass `""` if there is
    /// none.
    pub fn diagram(&self, text: &str) -> Result<DeligneDynkinDiagram> {
        let comp_line = line_of(text, "\"components\"", 1);
        let mut types = Vec::with_capacity(self.components.len());
        for (tag, rank) in &self.components {
            let family: Family = tag.parse().map_err(|e: Error| parse_err(comp_line, e.to_string()))?;
            types.push(SimpleType::new(family, *rank).map_err(|e| parse_err(comp_line, e.to_string()))?);
        }
        if types.is_empty() {
            return Err(parse_err(comp_line, "a diagram needs at least one component"));
        }
        let diagram = DynkinDiagram::build(&types);
        let n = diagram.node_count();
        let gen_line = line_of(text, "\"generators\"", 1);
        let mut gens = Vec::with_capacity(self.generators.len());
        for g in &self.generators {
            let line = line_of(text, &format!("\"{g}\""), gen_line);
            gens.push(Perm::from_cycles(g, n).map_err(|e| parse_err(line, e.to_string()))?);
        }
        let group = PermGroup::new(n, gens).map_err(|e| parse_err(gen_line, e.to_string()))?;
        let base = EquivariantDiagram::new(diagram, group).map_err(|e| parse_err(gen_line, e.to_string()))?;
        let mu: BTreeSet<usize> = self.mu.iter().copied().collect();
        if mu.len() != self.mu.len() {
            return Err(parse_err(line_of(text, "\"mu\"", 1), "mu lists a node twice"));
        }
        let d = DeligneDynkinDiagram::new(base, mu);
        d.validate()
            .map_err(|v| parse_err(line_of(text, "\"mu\"", 1), v.to_string()))?;
        Ok(d)
    }

    /// The cover from the file, or the split cover.
    pub fn cover(&self, d: &DeligneDynkinDiagram, text: &str) -> Result<QuadraticCover> {
        let comps = d.base().diagram().components().len();
        match &self.cover {
            None => Ok(QuadraticCover::split(comps)),
            Some(c) => QuadraticCover::new(comps, c.over.clone(), c.conjugation.clone())
                .map_err(|e| parse_err(line_of(text, "\"cover\"", 1), e.to_string())),
        }
    }

    /// The partial CM type from the file; without one, the first valid
    /// choice.
    pub fn phi(&self, d: &DeligneDynkinDiagram, cover: &QuadraticCover, text: &str) -> Result<PartialCMType> {
        match &self.phi {
            None => PartialCMType::all(d, cover)?
                .into_iter()
                .next()
                .ok_or_else(|| Error::input("no valid partial CM type")),
            Some(p) => PartialCMType::new(d, cover, p.iter().copied().collect())
                .map_err(|e| parse_err(line_of(text, "\"phi\"", 1), e.to_string())),
        }
    }
}

/// Parses and validates in one step.
pub fn read_diagram(text: &str) -> Result<(DiagramFile, DeligneDynkinDiagram)> {
    let file = DiagramFile::from_json(text)?;
    let d = file.diagram(text)?;
    Ok((file, d))
}

/// A replayable instance, as dumped by the campaign.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub label: String,
    pub d1: DiagramFile,
    pub d2: DiagramFile,
    pub f: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Verdict>,
}

impl InstanceFile {
    pub fn from_instance(inst: &Instance, verdict: Option<Verdict>) -> Self {
        InstanceFile {
            label: inst.label.clone(),
            d1: DiagramFile::from_diagram(&inst.d1),
            d2: DiagramFile::from_diagram(&inst.d2),
            f: inst.f.images().to_vec(),
            verdict,
        }
    }

    pub fn instance(&self) -> Result<Instance> {
        let d1 = self.d1.diagram("")?;
        let d2 = self.d2.diagram("")?;
        Instance::new(self.label.clone(), d1, d2, ComponentMap::new(self.f.clone())?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(json_err)
    }
}
