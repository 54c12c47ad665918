//! Cover-list documents.
//!
//! Text form: one relation per item, items separated by newlines or commas.
//! `a < b < c` is shorthand for two items. An optional `elements:` header
//! declares the full element set (needed for isolated points); once it is
//! present every name in a relation must have been declared. `#` starts a
//! comment.
//!
//! ```text
//! elements: a, b, c, d
//! a < b
//! a < c, b < d
//! ```

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::Poset;
use crate::error::{Error, Result};

/// Structured equivalent of the text form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetDocument {
    pub elements: Vec<String>,
    #[serde(default)]
    pub relations: Vec<(String, String)>,
}

fn valid_name(name: &str) -> bool {
    !name.is_empty() && !name.chars().any(|c| c.is_whitespace() || c == ',' || c == '<' || c == '#')
}

struct Names {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    declared: bool,
}

impl Names {
    fn declare(&mut self, name: &str, line: usize) -> Result<()> {
        if !valid_name(name) {
            return Err(Error::Parse {
                line,
                message: format!("invalid element name `{name}`"),
            });
        }
        if self.index.contains_key(name) {
            return Err(Error::DuplicateElement(name.to_string()));
        }
        self.index.insert(name.to_string(), self.labels.len());
        self.labels.push(name.to_string());
        Ok(())
    }

    fn resolve(&mut self, name: &str, line: usize) -> Result<usize> {
        if let Some(&i) = self.index.get(name) {
            return Ok(i);
        }
        if self.declared {
            return Err(Error::UnknownElement(name.to_string()));
        }
        self.declare(name, line)?;
        Ok(self.labels.len() - 1)
    }
}

/// Parses the text cover-list format.
pub fn parse_poset(text: &str) -> Result<Poset> {
    let mut names = Names {
        labels: Vec::new(),
        index: HashMap::new(),
        declared: false,
    };
    let mut relations = Vec::new();
    let mut seen_relation = false;

    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let content = raw.split('#').next().unwrap().trim();
        if content.is_empty() {
            continue;
        }
        if let Some(rest) = content.strip_prefix("elements:") {
            if seen_relation {
                return Err(Error::Parse {
                    line,
                    message: "`elements:` header must precede the relations".into(),
                });
            }
            names.declared = true;
            for name in rest.split(|c: char| c == ',' || c.is_whitespace()) {
                if !name.is_empty() {
                    names.declare(name, line)?;
                }
            }
            continue;
        }
        for item in content.split(',') {
            let item = item.trim();
            if item.is_empty() {
                continue;
            }
            let parts: Vec<&str> = item.split('<').map(str::trim).collect();
            if parts.len() < 2 {
                return Err(Error::Parse {
                    line,
                    message: format!("expected `x < y`, found `{item}`"),
                });
            }
            let mut prev = None;
            for part in parts {
                if !valid_name(part) {
                    return Err(Error::Parse {
                        line,
                        message: format!("invalid element name `{part}`"),
                    });
                }
                let idx = names.resolve(part, line)?;
                if let Some(p) = prev {
                    relations.push((p, idx));
                }
                prev = Some(idx);
            }
            seen_relation = true;
        }
    }
    Poset::from_relations(names.labels, &relations)
}

/// Parses the JSON form of [`PosetDocument`].
pub fn parse_poset_json(text: &str) -> Result<Poset> {
    let doc: PosetDocument = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        message: e.to_string(),
    })?;
    doc.to_poset()
}

impl PosetDocument {
    pub fn to_poset(&self) -> Result<Poset> {
        let mut names = Names {
            labels: Vec::new(),
            index: HashMap::new(),
            declared: true,
        };
        for e in &self.elements {
            names.declare(e, 0)?;
        }
        let relations = self
            .relations
            .iter()
            .map(|(a, b)| Ok((names.resolve(a, 0)?, names.resolve(b, 0)?)))
            .collect::<Result<Vec<_>>>()?;
        Poset::from_relations(names.labels, &relations)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_two_chain() {
        let p = parse_poset("a<b").unwrap();
        assert_eq!(p.labels(), &["a", "b"]);
        assert_eq!(p.covers(), &[(0, 1)]);
    }

    #[test]
    fn redundant_pair_is_reduced() {
        let p = parse_poset("a<b, b<c, a<c").unwrap();
        assert_eq!(p.len(), 3);
        assert_eq!(p.covers(), &[(0, 1), (1, 2)]);
    }

    #[test]
    fn antisymmetry_violation() {
        assert!(matches!(parse_poset("a<b, b<a"), Err(Error::Cycle(_))));
    }

    #[test]
    fn header_declares_isolated_points_and_catches_dangling_names() {
        let p = parse_poset("elements: x, y, z\n# comment\nx < y\n").unwrap();
        assert_eq!(p.len(), 3);
        assert_eq!(p.covers(), &[(0, 1)]);
        assert!(matches!(
            parse_poset("elements: x,y\nx < w"),
            Err(Error::UnknownElement(n)) if n == "w"
        ));
        assert!(matches!(
            parse_poset("elements: x,x"),
            Err(Error::DuplicateElement(_))
        ));
    }

    #[test]
    fn chains_and_syntax_errors() {
        let p = parse_poset("a < b < c").unwrap();
        assert!(p.is_chain());
        assert!(matches!(parse_poset("a b"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_poset("a <"), Err(Error::Parse { .. })));
    }

    #[test]
    fn text_and_json_round_trip() {
        let p = parse_poset("elements: 1,2,3,4\n1<3\n2<3\n3<4\n1<4").unwrap();
        let q = parse_poset(&p.to_text()).unwrap();
        assert_eq!(p.labels(), q.labels());
        assert_eq!(p.covers(), q.covers());
        let json = serde_json::to_string(&p.to_document()).unwrap();
        let r = parse_poset_json(&json).unwrap();
        assert_eq!(p.covers(), r.covers());
        assert!(matches!(
            parse_poset_json(r#"{"elements":["a"],"relations":[["a","b"]]}"#),
            Err(Error::UnknownElement(_))
        ));
    }
}
