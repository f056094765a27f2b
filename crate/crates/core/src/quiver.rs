use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::root_system::{CartanDatum, PositiveRoot};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuiverError {
    #[error("arrow {0}>{1} is not an edge of the diagram")]
    NotAnEdge(usize, usize),
    #[error("edge {0}-{1} is oriented more than once")]
    DuplicateEdge(usize, usize),
    #[error("edge {0}-{1} has no orientation")]
    MissingEdge(usize, usize),
    #[error("cannot parse {0:?}")]
    Parse(String),
    #[error("vertex {0} is out of range")]
    BadVertex(usize),
    #[error("orientation mask {0} has bits beyond the edge count")]
    BadMask(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum VertexClass {
    Source,
    Sink,
    LeftIntermediate,
    RightIntermediate,
    Other,
}

/// An orientation of a Dynkin diagram. Arrows are stored one per edge, in the
/// datum's edge order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DynkinQuiver {
    datum: CartanDatum,
    arrows: Vec<(usize, usize)>,
}

impl DynkinQuiver {
    /// Bit `e` of `mask` set means edge `e` (in sorted edge order) points from
    /// its larger endpoint to its smaller one.
    pub fn from_mask(datum: &CartanDatum, mask: u64) -> Result<Self, QuiverError> {
        let m = datum.edges().len();
        if m < 64 && mask >> m != 0 {
            return Err(QuiverError::BadMask(mask));
        }
        let arrows = datum
            .edges()
            .iter()
            .enumerate()
            .map(|(e, &(a, b))| if (mask >> e) & 1 == 1 { (b, a) } else { (a, b) })
            .collect();
        Ok(DynkinQuiver { datum: datum.clone(), arrows })
    }

    pub fn from_arrows(datum: &CartanDatum, arrows: &[(usize, usize)]) -> Result<Self, QuiverError> {
        let mut slots: Vec<Option<(usize, usize)>> = vec![None; datum.edges().len()];
        for &(s, t) in arrows {
            let e = (s.min(t), s.max(t));
            let idx = datum.edges().iter().position(|&x| x == e).ok_or(QuiverError::NotAnEdge(s, t))?;
            if slots[idx].is_some() {
                return Err(QuiverError::DuplicateEdge(e.0, e.1));
            }
            slots[idx] = Some((s, t));
        }
        let arrows = slots
            .into_iter()
            .zip(datum.edges())
            .map(|(a, &(x, y))| a.ok_or(QuiverError::MissingEdge(x, y)))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(DynkinQuiver { datum: datum.clone(), arrows })
    }

    /// Parses `"2>1,3>2,2>4"`.
    pub fn parse(datum: &CartanDatum, spec: &str) -> Result<Self, QuiverError> {
        let mut arrows = Vec::new();
        for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (s, t) = part.split_once('>').ok_or_else(|| QuiverError::Parse(part.to_string()))?;
            let s: usize = s.trim().parse().map_err(|_| QuiverError::Parse(part.to_string()))?;
            let t: usize = t.trim().parse().map_err(|_| QuiverError::Parse(part.to_string()))?;
            arrows.push((s, t));
        }
        Self::from_arrows(datum, &arrows)
    }

    /// Orientation determined by a height function.
    pub fn from_heights(datum: &CartanDatum, xi: &HeightFunction) -> Result<Self, QuiverError> {
        let mut arrows = Vec::new();
        for &(a, b) in datum.edges() {
            match xi.get(a) - xi.get(b) {
                1 => arrows.push((a, b)),
                -1 => arrows.push((b, a)),
                _ => return Err(QuiverError::Parse(format!("heights at {a},{b} differ by other than 1"))),
            }
        }
        Ok(DynkinQuiver { datum: datum.clone(), arrows })
    }

    pub fn datum(&self) -> &CartanDatum {
        &self.datum
    }

    pub fn rank(&self) -> usize {
        self.datum.rank()
    }

    pub fn arrows(&self) -> &[(usize, usize)] {
        &self.arrows
    }

    pub fn mask(&self) -> u64 {
        self.arrows
            .iter()
            .enumerate()
            .map(|(e, &(s, t))| u64::from(s > t) << e)
            .sum()
    }

    /// All `2^(edges)` orientations in mask order.
    pub fn all_orientations(datum: &CartanDatum) -> Vec<DynkinQuiver> {
        let m = datum.edges().len();
        (0..1u64 << m).map(|mask| Self::from_mask(datum, mask).expect("mask in range")).collect()
    }

    pub fn has_arrow(&self, s: usize, t: usize) -> bool {
        self.arrows.contains(&(s, t))
    }

    pub fn classify_vertex(&self, i: usize) -> VertexClass {
        let outs: Vec<usize> = self.arrows.iter().filter(|a| a.0 == i).map(|a| a.1).collect();
        let ins: Vec<usize> = self.arrows.iter().filter(|a| a.1 == i).map(|a| a.0).collect();
        if ins.is_empty() {
            return VertexClass::Source;
        }
        if outs.is_empty() {
            return VertexClass::Sink;
        }
        let n = self.rank();
        let lower = |v: &usize| *v < i;
        if self.datum.is_type_d() && i + 2 == n {
            // Trident vertex: neighbors n-3, n-1, n.
            if outs == [n - 3] {
                return VertexClass::RightIntermediate;
            }
            if ins == [n - 3] {
                return VertexClass::LeftIntermediate;
            }
            return VertexClass::Other;
        }
        if outs.iter().all(lower) && ins.iter().all(|v| !lower(v)) {
            VertexClass::RightIntermediate
        } else if ins.iter().all(lower) && outs.iter().all(|v| !lower(v)) {
            VertexClass::LeftIntermediate
        } else {
            VertexClass::Other
        }
    }

    pub fn is_source(&self, i: usize) -> bool {
        self.classify_vertex(i) == VertexClass::Source
    }

    pub fn is_sink(&self, i: usize) -> bool {
        self.classify_vertex(i) == VertexClass::Sink
    }

    pub fn reflect(&self, i: usize) -> DynkinQuiver {
        let arrows = self
            .arrows
            .iter()
            .map(|&(s, t)| if s == i || t == i { (t, s) } else { (s, t) })
            .collect();
        DynkinQuiver { datum: self.datum.clone(), arrows }
    }

    pub fn is_adapted(&self, word: &[usize]) -> bool {
        let mut q = self.clone();
        for &i in word {
            if !(1..=self.rank()).contains(&i) || !q.is_source(i) {
                return false;
            }
            q = q.reflect(i);
        }
        true
    }

    /// Source-peeling Coxeter word, always taking the smallest available source.
    pub fn coxeter_word(&self) -> Vec<usize> {
        let mut q = self.clone();
        let mut used = vec![false; self.rank() + 1];
        let mut word = Vec::with_capacity(self.rank());
        while word.len() < self.rank() {
            let i = self
                .datum
                .vertices()
                .find(|&i| !used[i] && q.is_source(i))
                .expect("a quiver on a tree always has an unused source");
            used[i] = true;
            word.push(i);
            q = q.reflect(i);
        }
        word
    }

    /// Vertices `j` with a path `j ~> i` (`reverse == false`) or `i ~> j`.
    fn reachable(&self, i: usize, reverse: bool) -> BTreeSet<usize> {
        let mut set = BTreeSet::from([i]);
        let mut stack = vec![i];
        while let Some(v) = stack.pop() {
            for &(s, t) in &self.arrows {
                let (from, to) = if reverse { (s, t) } else { (t, s) };
                if from == v && set.insert(to) {
                    stack.push(to);
                }
            }
        }
        set
    }

    pub fn eta(&self, i: usize) -> PositiveRoot {
        self.indicator(&self.reachable(i, false))
    }

    pub fn zeta(&self, i: usize) -> PositiveRoot {
        self.indicator(&self.reachable(i, true))
    }

    pub fn eta_zeta(&self, i: usize) -> (PositiveRoot, PositiveRoot) {
        (self.eta(i), self.zeta(i))
    }

    fn indicator(&self, set: &BTreeSet<usize>) -> PositiveRoot {
        let coeffs = self.datum.vertices().map(|j| i32::from(set.contains(&j))).collect();
        self.datum.root(coeffs).expect("connected vertex sets of a Dynkin tree are roots")
    }

    pub fn height_function(&self, anchor: usize, value: i32) -> Result<HeightFunction, QuiverError> {
        if !(1..=self.rank()).contains(&anchor) {
            return Err(QuiverError::BadVertex(anchor));
        }
        let n = self.rank();
        let mut xi: Vec<Option<i32>> = vec![None; n + 1];
        xi[anchor] = Some(value);
        let mut changed = true;
        while changed {
            changed = false;
            for &(s, t) in &self.arrows {
                match (xi[s], xi[t]) {
                    (Some(a), None) => {
                        xi[t] = Some(a - 1);
                        changed = true;
                    }
                    (None, Some(b)) => {
                        xi[s] = Some(b + 1);
                        changed = true;
                    }
                    _ => {}
                }
            }
        }
        Ok(HeightFunction { xi: xi[1..].iter().map(|v| v.expect("diagram is connected")).collect() })
    }

    /// Default anchor: vertex n at height 0.
    pub fn default_heights(&self) -> HeightFunction {
        self.height_function(self.rank(), 0).expect("vertex n exists")
    }

    /// Spec string such as `2>1,3>2,2>4`.
    pub fn arrow_string(&self) -> String {
        self.arrows.iter().map(|(s, t)| format!("{s}>{t}")).collect::<Vec<_>>().join(",")
    }
}

impl fmt::Display for DynkinQuiver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{} [{}]", self.datum.diagram_type(), self.rank(), self.arrow_string())
    }
}

/// Heights `xi_1..xi_n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HeightFunction {
    xi: Vec<i32>,
}

impl HeightFunction {
    pub fn new(xi: Vec<i32>) -> Self {
        HeightFunction { xi }
    }

    pub fn get(&self, i: usize) -> i32 {
        self.xi[i - 1]
    }

    pub fn values(&self) -> &[i32] {
        &self.xi
    }

    pub fn shifted(&self, c: i32) -> Self {
        HeightFunction { xi: self.xi.iter().map(|x| x + c).collect() }
    }

    pub fn respects(&self, q: &DynkinQuiver) -> bool {
        self.xi.len() == q.rank() && q.arrows().iter().all(|&(s, t)| self.get(t) == self.get(s) - 1)
    }
}

/// Parses `"3=0"`.
pub fn parse_anchor(s: &str) -> Result<(usize, i32), QuiverError> {
    let bad = || QuiverError::Parse(s.to_string());
    let (v, x) = s.split_once('=').ok_or_else(bad)?;
    Ok((v.trim().parse().map_err(|_| bad())?, x.trim().parse().map_err(|_| bad())?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example1() -> DynkinQuiver {
        DynkinQuiver::parse(&CartanDatum::d(4).unwrap(), "2>1,3>2,2>4").unwrap()
    }

    #[test]
    fn classification_example1() {
        let q = example1();
        assert_eq!(q.classify_vertex(3), VertexClass::Source);
        assert_eq!(q.classify_vertex(1), VertexClass::Sink);
        assert_eq!(q.classify_vertex(4), VertexClass::Sink);
        assert_eq!(q.classify_vertex(2), VertexClass::Other);
    }

    #[test]
    fn classification_linear() {
        let dt = CartanDatum::d(6).unwrap();
        let q = DynkinQuiver::parse(&dt, "2>1,3>2,4>3,5>4,6>4").unwrap();
        assert_eq!(q.classify_vertex(2), VertexClass::RightIntermediate);
        assert_eq!(q.classify_vertex(3), VertexClass::RightIntermediate);
        assert_eq!(q.classify_vertex(4), VertexClass::RightIntermediate);
        let q = DynkinQuiver::parse(&dt, "1>2,2>3,3>4,4>5,4>6").unwrap();
        for b in 2..=4 {
            assert_eq!(q.classify_vertex(b), VertexClass::LeftIntermediate);
        }
        for n in 4..=6 {
            let dt = CartanDatum::d(n).unwrap();
            for q in DynkinQuiver::all_orientations(&dt) {
                for leaf in [1, n - 1, n] {
                    assert!(matches!(q.classify_vertex(leaf), VertexClass::Source | VertexClass::Sink));
                }
            }
        }
    }

    #[test]
    fn reflection() {
        let q = example1();
        let r = q.reflect(3);
        let mut arrows = r.arrows().to_vec();
        arrows.sort();
        assert_eq!(arrows, vec![(2, 1), (2, 3), (2, 4)]);
        for i in 1..=4 {
            assert_eq!(q.reflect(i).reflect(i), q);
        }
    }

    #[test]
    fn coxeter_and_adaptedness() {
        let q = example1();
        assert_eq!(q.coxeter_word(), vec![3, 2, 1, 4]);
        assert!(q.is_adapted(&[3, 2]));
        assert!(!q.is_adapted(&[2]));
        assert!(q.is_adapted(&[]));
        let dt = CartanDatum::d(5).unwrap();
        let lin = DynkinQuiver::parse(&dt, "1>2,2>3,3>4,3>5").unwrap();
        assert_eq!(lin.coxeter_word(), vec![1, 2, 3, 4, 5]);
        let word = [1, 2, 3, 1, 2, 4, 1, 2, 3, 1, 2, 4];
        for q in DynkinQuiver::all_orientations(&CartanDatum::d(4).unwrap()) {
            assert!(!q.is_adapted(&word));
            assert!(q.is_adapted(&q.coxeter_word()));
        }
    }

    #[test]
    fn eta_zeta_example1() {
        let q = example1();
        let dt = q.datum().clone();
        assert_eq!(q.eta(1).coeffs(), &[1, 1, 1, 0]);
        assert_eq!(dt.format_root(&q.eta(1)), "<1,-4>");
        assert_eq!(q.eta(3), dt.simple(3));
        assert_eq!(dt.format_root(&q.eta(4)), "<2,3>");
        assert_eq!(q.zeta(3).coeffs(), &[1, 1, 1, 1]);
    }

    #[test]
    fn heights() {
        let q = example1();
        let xi = q.height_function(3, 0).unwrap();
        assert_eq!(xi.values(), &[-2, -1, 0, -2]);
        assert!(xi.respects(&q));
        assert_eq!(q.height_function(3, 5).unwrap(), xi.shifted(5));
        assert_eq!(DynkinQuiver::from_heights(q.datum(), &xi).unwrap(), q);
        assert_eq!(parse_anchor("3=0").unwrap(), (3, 0));
    }

    #[test]
    fn parse_errors() {
        let dt = CartanDatum::d(4).unwrap();
        assert!(matches!(DynkinQuiver::parse(&dt, "2>1,3>2"), Err(QuiverError::MissingEdge(2, 4))));
        assert!(matches!(DynkinQuiver::parse(&dt, "2>1,1>2,3>2,2>4"), Err(QuiverError::DuplicateEdge(1, 2))));
        assert!(matches!(DynkinQuiver::parse(&dt, "1>3,2>1,3>2,2>4"), Err(QuiverError::NotAnEdge(1, 3))));
        assert!(DynkinQuiver::parse(&dt, "2-1").is_err());
    }

    #[test]
    fn orientation_invariants() {
        for n in 4..=7 {
            let dt = CartanDatum::d(n).unwrap();
            for q in DynkinQuiver::all_orientations(&dt) {
                assert_eq!(DynkinQuiver::from_mask(&dt, q.mask()).unwrap(), q);
                assert!(dt.vertices().any(|i| q.is_source(i)));
                assert!(dt.vertices().any(|i| q.is_sink(i)));
                let xi = q.default_heights();
                assert!((xi.get(n - 1) - xi.get(n)).abs() == 0 || (xi.get(n - 1) - xi.get(n)).abs() == 2);
                for i in dt.vertices() {
                    assert_eq!(q.eta(i).multiplicity(), 1);
                    assert_eq!(q.zeta(i).multiplicity(), 1);
                }
            }
        }
    }
}
