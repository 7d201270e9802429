//! JSON documents. Every file is an object with a `"kind"` field naming
//! one of the document kinds below; the remaining fields are the body.

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::fingen::{FinGenMap, FinGenSSet};
use crate::simplex::Simplex;
use crate::site::presheaf::{SPMapDoc, SPresheafDoc, SetPresheafMapDoc};
use crate::site::Site;
use crate::smap::{SMap, SMapDoc};
use crate::truncated::TruncatedSSet;

/// A map between presentations, given by generator images.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentationMap {
    pub source: FinGenSSet,
    pub target: FinGenSSet,
    pub images: Vec<Simplex>,
}

impl PresentationMap {
    pub fn map(&self) -> Result<FinGenMap> {
        FinGenMap::new(&self.source, &self.target, self.images.clone())
    }

    /// Truncation of source, target and map at `bound`.
    pub fn to_smap(&self, bound: usize) -> Result<SMap> {
        Ok(self.map()?.to_smap(&self.source, &self.target, bound))
    }
}

/// A loaded and validated document. Presheaf documents are validated
/// against a site when resolved.
#[derive(Debug, Clone)]
pub enum Document {
    Presentation(FinGenSSet),
    SSet(TruncatedSSet),
    PresentationMap(PresentationMap),
    Map(SMap),
    Site(Site),
    Presheaf(SPresheafDoc),
    PresheafMap(SPMapDoc),
    SetPresheafMap(SetPresheafMapDoc),
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::Presentation(_) => "presentation",
            Document::SSet(_) => "sset",
            Document::PresentationMap(_) => "presentation-map",
            Document::Map(_) => "map",
            Document::Site(_) => "site",
            Document::Presheaf(_) => "presheaf",
            Document::PresheafMap(_) => "presheaf-map",
            Document::SetPresheafMap(_) => "set-presheaf-map",
        }
    }
}

fn pointer(path: &serde_path_to_error::Path) -> String {
    use serde_path_to_error::Segment;
    let mut out = String::new();
    for seg in path.iter() {
        out.push('/');
        match seg {
            Segment::Seq { index } => out.push_str(&index.to_string()),
            Segment::Map { key } => out.push_str(&key.replace('~', "~0").replace('/', "~1")),
            Segment::Enum { variant } => out.push_str(variant),
            Segment::Unknown => out.push('?'),
        }
    }
    out
}

fn body<T: DeserializeOwned>(value: Value) -> Result<T> {
    serde_path_to_error::deserialize(value).map_err(|e| Error::Schema {
        pointer: pointer(e.path()),
        message: e.inner().to_string(),
    })
}

pub fn parse(text: &str) -> Result<Document> {
    let mut value: Value = serde_json::from_str(text)?;
    let kind = match value.as_object_mut().map(|o| o.remove("kind")) {
        Some(Some(Value::String(k))) => k,
        _ => {
            return Err(Error::Schema { pointer: "/kind".into(), message: "missing string field `kind`".into() });
        }
    };
    Ok(match kind.as_str() {
        "presentation" => Document::Presentation(body(value)?),
        "sset" => Document::SSet(body(value)?),
        "presentation-map" => {
            let m: PresentationMap = body(value)?;
            m.map()?;
            Document::PresentationMap(m)
        }
        "map" => Document::Map(body::<SMapDoc>(value)?.try_into()?),
        "site" => Document::Site(body(value)?),
        "presheaf" => Document::Presheaf(body(value)?),
        "presheaf-map" => Document::PresheafMap(body(value)?),
        "set-presheaf-map" => Document::SetPresheafMap(body(value)?),
        other => {
            return Err(Error::Schema { pointer: "/kind".into(), message: format!("unknown document kind `{other}`") });
        }
    })
}

pub fn to_value(doc: &Document) -> Value {
    let mut value = match doc {
        Document::Presentation(x) => serde_json::to_value(x),
        Document::SSet(x) => serde_json::to_value(x),
        Document::PresentationMap(x) => serde_json::to_value(x),
        Document::Map(x) => serde_json::to_value(SMapDoc::from(x)),
        Document::Site(x) => serde_json::to_value(x),
        Document::Presheaf(x) => serde_json::to_value(x),
        Document::PresheafMap(x) => serde_json::to_value(x),
        Document::SetPresheafMap(x) => serde_json::to_value(x),
    }
    .expect("documents serialize");
    value.as_object_mut().unwrap().insert("kind".into(), Value::String(doc.kind().into()));
    value
}

pub fn to_string(doc: &Document) -> String {
    let mut s = serde_json::to_string_pretty(&to_value(doc)).expect("documents serialize");
    s.push('\n');
    s
}

pub fn load(path: impl AsRef<Path>) -> Result<Document> {
    parse(&fs::read_to_string(path)?)
}

pub fn save(path: impl AsRef<Path>, doc: &Document) -> Result<()> {
    fs::write(path, to_string(doc))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{delta, horn};

    #[test]
    fn round_trip() {
        let docs = vec![
            Document::Presentation(horn(2, 1).unwrap()),
            Document::SSet(delta(1).truncate(2)),
            Document::PresentationMap(PresentationMap {
                source: delta(0),
                target: delta(1),
                images: vec![Simplex::nondegenerate(0, 1)],
            }),
        ];
        for d in docs {
            let text = to_string(&d);
            let back = parse(&text).unwrap();
            assert_eq!(to_string(&back), text);
        }
    }

    #[test]
    fn schema_errors_carry_a_pointer() {
        let text = to_string(&Document::SSet(delta(1).truncate(1)));
        let mut v: Value = serde_json::from_str(&text).unwrap();
        v["cells"][1][0] = Value::from(7);
        match parse(&v.to_string()) {
            Err(Error::Schema { pointer, .. }) => assert_eq!(pointer, "/cells/1/0"),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse(r#"{"kind":"nope"}"#), Err(Error::Schema { .. })));
    }

    #[test]
    fn corrupted_faces_name_the_identity() {
        let text = to_string(&Document::SSet(delta(1).truncate(2)));
        let mut v: Value = serde_json::from_str(&text).unwrap();
        let e = v["cells"][1].as_array().unwrap().iter().position(|n| n == "[0,1]").unwrap();
        let (a, b) = (v["d"]["1"][0][e].clone(), v["d"]["1"][1][e].clone());
        v["d"]["1"][0][e] = b;
        v["d"]["1"][1][e] = a;
        let err = parse(&v.to_string()).unwrap_err().to_string();
        assert!(err.contains("d_i"), "{err}");
    }
}
