use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{ARQuiver, ArError, RepCoord};
use crate::quiver::{DynkinQuiver, HeightFunction};
use crate::root_system::{CartanDatum, DiagramType};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonVertex {
    pub level: usize,
    pub p: i32,
    pub coeffs: Vec<i32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<[i32; 2]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArJson {
    #[serde(rename = "type")]
    pub diagram_type: DiagramType,
    pub rank: usize,
    pub vertices: Vec<JsonVertex>,
    pub arrows: Vec<[usize; 2]>,
    pub m: Vec<usize>,
    pub xi: Vec<i32>,
}

impl ARQuiver {
    pub fn to_json_value(&self) -> ArJson {
        let datum = self.datum();
        ArJson {
            diagram_type: datum.diagram_type(),
            rank: datum.rank(),
            vertices: (0..self.len())
                .map(|v| JsonVertex {
                    level: self.coords()[v].level,
                    p: self.coords()[v].p,
                    coeffs: self.roots()[v].coeffs().to_vec(),
                    eps: datum.epsilon_form(&self.roots()[v]).ok().map(|e| [e.a as i32, e.b]),
                })
                .collect(),
            arrows: self.arrows().iter().map(|&(s, t)| [s, t]).collect(),
            m: self.m_values().to_vec(),
            xi: self.xi().values().to_vec(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("plain data serializes")
    }

    /// Rebuilds from the height function in the document and checks that
    /// every recorded vertex, arrow and `m` value matches.
    pub fn from_json(text: &str) -> Result<ARQuiver, ArError> {
        let doc: ArJson = serde_json::from_str(text).map_err(|e| ArError::Json(e.to_string()))?;
        let datum = CartanDatum::new(doc.diagram_type, doc.rank)?;
        let xi = HeightFunction::new(doc.xi.clone());
        if doc.xi.len() != doc.rank {
            return Err(ArError::Json("xi has the wrong length".into()));
        }
        let quiver = DynkinQuiver::from_heights(&datum, &xi)?;
        let ar = ARQuiver::build(&quiver, &xi)?;
        if ar.to_json_value() != doc {
            return Err(ArError::Json("document disagrees with the quiver it describes".into()));
        }
        Ok(ar)
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph AR {\n  rankdir=LR;\n  node [shape=plaintext];\n");
        let mut by_col: BTreeMap<i32, Vec<usize>> = BTreeMap::new();
        for v in 0..self.len() {
            by_col.entry(self.coords()[v].p).or_default().push(v);
        }
        for v in 0..self.len() {
            let c = self.coords()[v];
            let _ = writeln!(out, "  v{v} [label=\"{} @({},{})\"];", self.label(v), c.level, c.p);
        }
        for (p, vs) in &by_col {
            let names: Vec<String> = vs.iter().map(|v| format!("v{v}")).collect();
            let _ = writeln!(out, "  {{ rank=same; /* p={p} */ {}; }}", names.join("; "));
        }
        for &(s, t) in self.arrows() {
            let _ = writeln!(out, "  v{s} -> v{t};");
        }
        out.push_str("}\n");
        out
    }

    /// Levels as rows, columns as `p`, with `/` and `\` between adjacent rows.
    pub fn to_ascii(&self) -> String {
        let n = self.rank();
        let (pmin, pmax) = (
            self.coords().iter().map(|c| c.p).min().unwrap_or(0),
            self.coords().iter().map(|c| c.p).max().unwrap_or(0),
        );
        let width = (0..self.len()).map(|v| self.label(v).chars().count()).max().unwrap_or(1) + 1;
        let half = width.div_ceil(2);
        let cols = ((pmax - pmin) as usize + 1) * half + width;
        let x_of = |p: i32| (p - pmin) as usize * half;
        let mut out = String::new();
        let mut header = vec![' '; cols + 8];
        for p in pmin..=pmax {
            if (p - pmin) % 2 == 0 {
                for (k, ch) in p.to_string().chars().enumerate() {
                    if x_of(p) + k < header.len() {
                        header[x_of(p) + k] = ch;
                    }
                }
            }
        }
        let _ = writeln!(out, "(i,p)  {}", header.iter().collect::<String>().trim_end());
        let row_order: Vec<usize> = (1..=n).collect();
        for (r, &level) in row_order.iter().enumerate() {
            let mut line = vec![' '; cols];
            for v in self.vertices_at_level(level) {
                let x = x_of(self.coords()[v].p);
                for (k, ch) in self.label(v).chars().enumerate() {
                    line[x + k] = ch;
                }
            }
            let _ = writeln!(out, "{:>5}  {}", level, line.iter().collect::<String>().trim_end());
            if let Some(&below) = row_order.get(r + 1) {
                let mut conn = vec![' '; cols];
                for &(s, t) in self.arrows() {
                    let (cs, ct) = (self.coords()[s], self.coords()[t]);
                    let pair = (cs.level.min(ct.level), cs.level.max(ct.level));
                    let joins = pair == (level, below) || (below == n && pair == (n - 2, n) && self.datum().is_type_d());
                    if !joins {
                        continue;
                    }
                    let x = x_of(cs.p) + half;
                    let down = ct.level > cs.level;
                    if x < conn.len() {
                        conn[x] = if down { '\\' } else { '/' };
                    }
                }
                let _ = writeln!(out, "       {}", conn.iter().collect::<String>().trim_end());
            }
        }
        out
    }
}

impl RepCoord {
    pub fn parse(s: &str) -> Option<RepCoord> {
        let t = s.trim().strip_prefix('(')?.strip_suffix(')')?;
        let (a, b) = t.split_once(',')?;
        Some(RepCoord::new(a.trim().parse().ok()?, b.trim().parse().ok()?))
    }
}

#[cfg(test)]
mod tests {
    use super::super::tests::example1;
    use super::*;

    #[test]
    fn json_round_trip() {
        let ar = example1();
        let text = ar.to_json();
        let back = ARQuiver::from_json(&text).unwrap();
        assert_eq!(back, ar);
        let mut doc: ArJson = serde_json::from_str(&text).unwrap();
        doc.vertices[0].p += 2;
        assert!(ARQuiver::from_json(&serde_json::to_string(&doc).unwrap()).is_err());
    }

    #[test]
    fn dot_has_every_vertex() {
        let ar = example1();
        let dot = ar.to_dot();
        assert!(dot.starts_with("digraph"));
        assert!(dot.contains("<3,-4> @(3,0)"));
        assert_eq!(dot.matches(" -> ").count(), ar.arrows().len());
    }

    #[test]
    fn ascii_rows() {
        let ar = example1();
        let art = ar.to_ascii();
        let row3 = art.lines().find(|l| l.trim_start().starts_with("3 ")).unwrap();
        assert!(row3.trim_end().ends_with("<3,-4>"));
    }
}
