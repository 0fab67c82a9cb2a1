//! JSON report envelope shared by every CLI command.

use serde::{Deserialize, Serialize};

use crate::census::{Census, CountingCertificate, RandomWitness, SylowCoverBound};
use crate::classify::{Concealment, ModerationReport, Stage};
use crate::error::Result;
use crate::perm::Permutation;
use crate::pointset::PointSet;
use crate::sylow::{all_sylows, frattini_center_element, is_elementary_abelian, sylow_count};
use crate::verify::VerificationReport;
use crate::zoo::GroupInstance;
use crate::PermGroup;

pub const TOOL_NAME: &str = "pmoderate";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupSummary {
    pub label: String,
    pub degree: usize,
    pub order: u128,
    pub transitive: bool,
    pub primitive: bool,
}

impl GroupSummary {
    pub fn of(inst: &GroupInstance) -> Result<Self> {
        Ok(GroupSummary {
            label: inst.label.clone(),
            degree: inst.group.degree(),
            order: inst.group.order()?,
            transitive: inst.group.is_transitive(),
            primitive: inst.group.is_primitive(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SylowClassMember {
    pub generators: Vec<Permutation>,
    pub orbit_sizes: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SylowSummary {
    pub p: u64,
    pub sylow_order: u128,
    pub count: u128,
    pub normalizer_index: u128,
    pub generators: Vec<Permutation>,
    /// Sorted ascending.
    pub orbit_sizes: Vec<usize>,
    pub elementary_abelian: bool,
    /// Least element of order p in the centre of the Frattini subgroup.
    pub frattini_center: Option<Permutation>,
    pub conjugates: Option<Vec<SylowClassMember>>,
}

fn sorted_orbit_sizes(g: &PermGroup) -> Vec<usize> {
    let mut sizes: Vec<usize> = g.orbits().iter().map(Vec::len).collect();
    sizes.sort_unstable();
    sizes
}

impl SylowSummary {
    pub fn compute(g: &PermGroup, p: u64, list_conjugates: bool) -> Result<Self> {
        let data = if list_conjugates { all_sylows(g, p)? } else { sylow_count(g, p)? };
        let rep = &data.representative;
        let elementary_abelian = is_elementary_abelian(rep, p)?;
        let frattini_center = if elementary_abelian { None } else { frattini_center_element(rep, p).ok() };
        let conjugates = data.conjugates.as_ref().map(|all| {
            all.iter()
                .map(|s| SylowClassMember { generators: s.generators().to_vec(), orbit_sizes: sorted_orbit_sizes(s) })
                .collect()
        });
        Ok(SylowSummary {
            p,
            sylow_order: rep.order()?,
            count: data.count,
            normalizer_index: data.normalizer_index,
            generators: rep.generators().to_vec(),
            orbit_sizes: sorted_orbit_sizes(rep),
            elementary_abelian,
            frattini_center,
            conjugates,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificatePayload {
    pub certificate: CountingCertificate,
    pub cover_bound: SylowCoverBound,
    /// Present when the verdict is true.
    pub random_witness: Option<RandomWitness>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateCheck {
    pub stage: Stage,
    pub subset: PointSet,
    pub stab_p_part: u128,
    pub is_witness: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessPayload {
    pub p: u64,
    pub group_p_part: u128,
    pub candidates: Vec<CandidateCheck>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "data", rename_all = "snake_case")]
pub enum Payload {
    Classification(ModerationReport),
    Concealment(Concealment),
    Census(Census),
    Sylow(SylowSummary),
    Certificate(CertificatePayload),
    Witness(WitnessPayload),
    Verification(VerificationReport),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Timing {
    pub elapsed_micros: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub command: String,
    /// The group specification as given, or null for commands without one.
    pub input: serde_json::Value,
    pub group: Option<GroupSummary>,
    pub payload: Payload,
    pub timing: Timing,
}

impl Report {
    pub fn new(command: &str, input: serde_json::Value, group: Option<GroupSummary>, payload: Payload, elapsed: std::time::Duration) -> Self {
        Report {
            tool: TOOL_NAME.into(),
            version: TOOL_VERSION.into(),
            command: command.into(),
            input,
            group,
            payload,
            timing: Timing { elapsed_micros: elapsed.as_micros() as u64 },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::census::{census, prop31_certificate, sylow_cover_bound};
    use crate::classify::{classify_moderation, is_p_concealed, SearchOptions, Strategy};
    use crate::zoo::named_group;
    use std::time::Duration;

    fn round_trip(payload: Payload) {
        let inst = named_group("Sym(4)").unwrap();
        let input = serde_json::json!({ "named": "Sym(4)" });
        let report = Report::new("test", input, Some(GroupSummary::of(&inst).unwrap()), payload, Duration::from_micros(7));
        let json = serde_json::to_string_pretty(&report).unwrap();
        assert_eq!(serde_json::from_str::<Report>(&json).unwrap(), report, "{json}");
    }

    #[test]
    fn every_payload_round_trips() {
        let inst = named_group("Sym(4)").unwrap();
        let g = &inst.group;
        for strategy in [Strategy::Exhaustive, Strategy::Constructive] {
            round_trip(Payload::Classification(classify_moderation(&inst, 2, strategy, SearchOptions::default()).unwrap()));
        }
        let d6 = named_group("D6").unwrap();
        round_trip(Payload::Classification(
            classify_moderation(&d6, 2, Strategy::Exhaustive, SearchOptions::default()).unwrap(),
        ));
        round_trip(Payload::Concealment(is_p_concealed(g, 2).unwrap()));
        round_trip(Payload::Census(census(g, 2).unwrap()));
        round_trip(Payload::Sylow(SylowSummary::compute(g, 2, true).unwrap()));
        round_trip(Payload::Certificate(CertificatePayload {
            certificate: prop31_certificate(g, 2).unwrap(),
            cover_bound: sylow_cover_bound(g, 2).unwrap(),
            random_witness: None,
        }));
        round_trip(Payload::Witness(WitnessPayload {
            p: 2,
            group_p_part: 8,
            candidates: vec![CandidateCheck {
                stage: Stage::DiagonalPair,
                subset: PointSet::from_points(4, [0, 3]).unwrap(),
                stab_p_part: 4,
                is_witness: true,
            }],
        }));
    }

    #[test]
    fn witness_subsets_serialize_as_sorted_arrays() {
        let inst = named_group("Product(D6,D6)").unwrap();
        let r = classify_moderation(&inst, 2, Strategy::Constructive, SearchOptions::default()).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["status"]["MODERATE"]["witness"]["points"], serde_json::json!([0, 4]));
    }

    #[test]
    fn sylow_summary_of_j() {
        let j = named_group("J").unwrap().group;
        let s = SylowSummary::compute(&j, 3, true).unwrap();
        assert_eq!(s.count, 28);
        assert_eq!(s.orbit_sizes, vec![1, 1, 3, 3]);
        let conj = s.conjugates.unwrap();
        assert_eq!(conj.len(), 28);
        assert!(conj.iter().all(|c| c.orbit_sizes == vec![1, 1, 3, 3]));
    }
}
