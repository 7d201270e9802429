//! Command reports. The JSON form is canonical; the text form is
//! rendered from it.

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::kan::Verdict;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    /// The arguments the command was invoked with.
    pub command: Vec<String>,
    /// SHA-256 over the input files, in argument order.
    pub inputs_digest: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Verdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ex_stages: Option<usize>,
    pub result: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
}

impl Report {
    /// 0 for pass, inconclusive or no verdict, 1 for fail.
    pub fn exit_code(&self) -> i32 {
        match self.verdict {
            Some(Verdict::Fail) => 1,
            _ => 0,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn to_text(&self) -> String {
        render_text(&serde_json::to_value(self).expect("reports serialize"))
    }
}

/// Each input is hashed with its length as an 8-byte prefix so that
/// splitting the same bytes differently changes the digest.
pub fn digest_inputs<'a>(inputs: impl IntoIterator<Item = &'a [u8]>) -> String {
    let mut h = Sha256::new();
    for bytes in inputs {
        h.update((bytes.len() as u64).to_le_bytes());
        h.update(bytes);
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

/// One `path: value` line per scalar leaf.
pub fn render_text(v: &Value) -> String {
    let mut out = String::new();
    leaves(v, "", &mut out);
    out
}

fn leaves(v: &Value, path: &str, out: &mut String) {
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                let p = if path.is_empty() { k.clone() } else { format!("{path}.{k}") };
                leaves(x, &p, out);
            }
        }
        Value::Array(xs) if xs.iter().all(|x| !x.is_object() && !x.is_array()) => {
            let items: Vec<String> = xs.iter().map(scalar).collect();
            out.push_str(&format!("{path}: [{}]\n", items.join(", ")));
        }
        Value::Array(xs) => {
            for (i, x) in xs.iter().enumerate() {
                leaves(x, &format!("{path}[{i}]"), out);
            }
        }
        _ => out.push_str(&format!("{path}: {}\n", scalar(v))),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_depends_on_split() {
        assert_ne!(digest_inputs([b"ab".as_slice()]), digest_inputs([b"a".as_slice(), b"b".as_slice()]));
        assert_eq!(digest_inputs([b"ab".as_slice()]).len(), 64);
    }

    #[test]
    fn text_lists_leaves() {
        let v = serde_json::json!({"verdict": "fail", "w": [{"n": 2}], "c": [1, 2]});
        assert_eq!(render_text(&v), "c: [1, 2]\nverdict: fail\nw[0].n: 2\n");
    }
}
