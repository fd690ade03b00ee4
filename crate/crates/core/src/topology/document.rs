//! TOML network files.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Branch, Controller, CyberNetwork, ElectricalNetwork, NetworkIssue, RingNode, TieSwitch};
use crate::error::{Error, Result};

pub const NETWORK_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkDocument {
    pub version: u32,
    pub name: String,
    pub feeders: Vec<u32>,
    pub buses: Vec<u32>,
    pub branches: Vec<Branch>,
    #[serde(default)]
    pub ties: Vec<TieSwitch>,
    pub cyber: CyberDocument,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CyberDocument {
    pub ring: Vec<RingNode>,
    pub controllers: Vec<Controller>,
}

/// Validated electrical and cyber layers.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkModel {
    pub electrical: ElectricalNetwork,
    pub cyber: CyberNetwork,
}

impl NetworkModel {
    /// Validates a document, collecting every issue instead of stopping at
    /// the first.
    pub fn from_document(doc: NetworkDocument) -> Result<Self> {
        let mut issues = Vec::new();
        if doc.version != NETWORK_FORMAT_VERSION {
            issues.push(NetworkIssue::Schema(format!(
                "unsupported network format version {} (expected {NETWORK_FORMAT_VERSION})",
                doc.version
            )));
        }
        let electrical = ElectricalNetwork::build(
            doc.name,
            doc.feeders,
            doc.buses,
            doc.branches,
            doc.ties,
            &mut issues,
        );
        let cyber = electrical.as_ref().and_then(|net| {
            CyberNetwork::build(doc.cyber.ring, doc.cyber.controllers, net, &mut issues)
        });
        match (electrical, cyber) {
            (Some(electrical), Some(cyber)) if issues.is_empty() => {
                Ok(Self { electrical, cyber })
            }
            _ => Err(Error::Network(issues)),
        }
    }

    pub fn to_document(&self) -> NetworkDocument {
        let e = &self.electrical;
        NetworkDocument {
            version: NETWORK_FORMAT_VERSION,
            name: e.name().to_string(),
            feeders: e.feeders().to_vec(),
            buses: e.buses().to_vec(),
            branches: e.branches().to_vec(),
            ties: e.ties().to_vec(),
            cyber: CyberDocument {
                ring: self.cyber.ring().to_vec(),
                controllers: self.cyber.controllers().to_vec(),
            },
        }
    }
}

pub fn parse_network(text: &str) -> Result<NetworkModel> {
    let doc: NetworkDocument = toml::from_str(text)
        .map_err(|e| Error::Network(vec![NetworkIssue::Schema(e.to_string())]))?;
    NetworkModel::from_document(doc)
}

pub fn load_network(path: &Path) -> Result<NetworkModel> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_network(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
version = 1
name = "two-branch line"
feeders = [0]
buses = [1, 2]

[[branches]]
id = 1
from = 0
to = 1
customers = 4
sectionalizer = 11

[[branches]]
id = 2
from = 1
to = 2
customers = 2
sectionalizer = 12
lambda = 0.0

[cyber]
ring = [{ server = 1 }, { switch = 1 }, { switch = 2 }]
controllers = [
  { id = 1, branch = 1, comm_switch = 1 },
  { id = 2, branch = 2, comm_switch = 2 },
]
"#;

    #[test]
    fn minimal_line_parses() {
        let model = parse_network(MINIMAL).unwrap();
        assert_eq!(model.electrical.branches().len(), 2);
        assert_eq!(model.electrical.total_customers(), 6);
        assert_eq!(model.electrical.branch(2).unwrap().lambda, Some(0.0));
        assert_eq!(model.cyber.servers().collect::<Vec<_>>(), vec![1]);
    }

    #[test]
    fn document_round_trip() {
        let model = parse_network(MINIMAL).unwrap();
        let text = toml::to_string(&model.to_document()).unwrap();
        assert_eq!(parse_network(&text).unwrap(), model);
    }

    #[test]
    fn unknown_field_is_a_schema_error() {
        let text = MINIMAL.replace("customers = 4", "customers = 4\ncolour = \"red\"");
        let err = parse_network(&text).unwrap_err();
        assert!(err.to_string().contains("schema"), "{err}");
    }

    #[test]
    fn controller_with_unknown_branch_is_named() {
        let text = MINIMAL.replace("{ id = 2, branch = 2,", "{ id = 2, branch = 9,");
        let err = parse_network(&text).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("controller 2 references unknown branch 9"), "{msg}");
        assert!(msg.contains("branch 2 has no controller"), "{msg}");
    }

    #[test]
    fn wrong_version_rejected() {
        let text = MINIMAL.replace("version = 1", "version = 7");
        assert!(parse_network(&text).is_err());
    }
}
