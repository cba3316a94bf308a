//! Line-oriented diagram files.
//!
//! ```text
//! dim 5
//! vertices 6
//! edge 1 2 3
//! edge 2 3 4
//! edge 3 4 inf
//! edge 4 5 w 1/2 + 1/2*sqrt(6)
//! ```
//!
//! Pairs without an `edge` line get label 2. `#` starts a comment.

use std::collections::BTreeMap;

use super::{CoxeterDiagram, Label};
use crate::error::{Error, Result};
use crate::mqfield::{cos_pi_over, parse_element, Embedding};

/// Parses and validates a diagram; `name` becomes its identifier in reports.
pub fn parse_diagram_named(text: &str, name: &str) -> Result<CoxeterDiagram> {
    let mut n = None;
    let mut r = None;
    let mut edges: BTreeMap<(usize, usize), Label> = BTreeMap::new();
    let mut seen = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let perr = |msg: String| Error::Parse { line, msg };
        let mut words = content.split_whitespace();
        let keyword = words.next().expect("non-empty line");
        match keyword {
            "dim" => n = Some(single_number(words, "dim").map_err(perr)?),
            "vertices" => r = Some(single_number(words, "vertices").map_err(perr)?),
            "edge" => {
                let r = r.ok_or_else(|| perr("`edge` before `vertices`".into()))?;
                let i = vertex(words.next(), r).map_err(perr)?;
                let j = vertex(words.next(), r).map_err(perr)?;
                if i == j {
                    return Err(perr(format!("loop at vertex {}", i + 1)));
                }
                let key = (i.min(j), i.max(j));
                if seen.insert(key, line).is_some() {
                    return Err(Error::DuplicateEdge {
                        line,
                        i: key.0 + 1,
                        j: key.1 + 1,
                    });
                }
                let rest: Vec<&str> = words.collect();
                if let Some(label) = parse_label(&rest, line)? {
                    edges.insert(key, label);
                }
            }
            other => return Err(perr(format!("unknown keyword `{other}`"))),
        }
    }
    let n = n.ok_or(Error::Parse {
        line: 0,
        msg: "missing `dim`".into(),
    })?;
    let r = r.ok_or(Error::Parse {
        line: 0,
        msg: "missing `vertices`".into(),
    })?;
    if n < 2 || r < n + 1 {
        return Err(Error::Parse {
            line: 0,
            msg: format!("need dim ≥ 2 and at least dim + 1 vertices, got dim {n}, {r} vertices"),
        });
    }
    let d = CoxeterDiagram {
        name: name.to_string(),
        n,
        vertices: r,
        edges,
    };
    if !d.is_connected() {
        return Err(Error::Disconnected);
    }
    Ok(d)
}

fn single_number<'a>(mut words: impl Iterator<Item = &'a str>, what: &str) -> std::result::Result<usize, String> {
    let v = words
        .next()
        .ok_or_else(|| format!("`{what}` needs a value"))?
        .parse::<usize>()
        .map_err(|e| format!("`{what}`: {e}"))?;
    if words.next().is_some() {
        return Err(format!("trailing input after `{what}`"));
    }
    Ok(v)
}

fn vertex(word: Option<&str>, r: usize) -> std::result::Result<usize, String> {
    let w = word.ok_or("`edge` needs two vertices and a label")?;
    let v: usize = w.parse().map_err(|_| format!("bad vertex `{w}`"))?;
    if v == 0 || v > r {
        return Err(format!("vertex {v} out of range 1..={r}"));
    }
    Ok(v - 1)
}

/// `None` for label 2 (no edge).
fn parse_label(rest: &[&str], line: usize) -> Result<Option<Label>> {
    let perr = |msg: String| Error::Parse { line, msg };
    match rest {
        [] => Err(perr("missing edge label".into())),
        ["inf"] | ["∞"] => Ok(Some(Label::Infinite)),
        ["w", lit @ ..] if !lit.is_empty() => {
            let w = parse_element(&lit.join(" "))?;
            let id = Embedding::identity(w.tower().rank());
            let one = crate::FieldElement::one(w.tower());
            if w == one {
                return Err(perr("weight 1 means parallel hyperplanes; use `inf`".into()));
            }
            if (&w - &one).sign_at(&id) < 0 {
                return Err(perr(format!("weight {w} must exceed 1")));
            }
            Ok(Some(Label::Weight(w)))
        }
        [m] => {
            let m: u64 = m.parse().map_err(|_| perr(format!("bad label `{m}`")))?;
            if m < 2 {
                return Err(perr(format!("label {m} below 2")));
            }
            if m == 2 {
                return Ok(None);
            }
            if cos_pi_over(m).is_none() {
                return Err(Error::UnsupportedLabel {
                    line,
                    msg: format!("non-multiquadratic cosine for m = {m}"),
                });
            }
            Ok(Some(Label::Finite(m)))
        }
        _ => Err(perr(format!("cannot read label `{}`", rest.join(" ")))),
    }
}
