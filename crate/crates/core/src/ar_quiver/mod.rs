mod export;
mod paths;

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::quiver::{DynkinQuiver, HeightFunction, QuiverError};
use crate::root_system::{CartanDatum, EpsilonForm, PositiveRoot, RootError, SignedRoot};

pub use export::{ArJson, JsonVertex};
pub use paths::{PathKind, SectionalPath, SigmaKappa, Swing};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArError {
    #[error("invariant {check} violated at {coord}: {detail}")]
    Invariant { check: &'static str, coord: RepCoord, detail: String },
    #[error("built {got} vertices, expected {expected}")]
    VertexCount { got: usize, expected: usize },
    #[error("height function does not respect the quiver")]
    BadHeights,
    #[error("operation requires a type D quiver")]
    NotTypeD,
    #[error("{0} is not a vertex")]
    NoVertex(RepCoord),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error(transparent)]
    Root(#[from] RootError),
    #[error(transparent)]
    Quiver(#[from] QuiverError),
    #[error("json: {0}")]
    Json(String),
}

/// A vertex `(i, p)` of the repetition quiver: level `i`, column `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RepCoord {
    pub level: usize,
    pub p: i32,
}

impl RepCoord {
    pub fn new(level: usize, p: i32) -> Self {
        RepCoord { level, p }
    }
}

impl fmt::Display for RepCoord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.level, self.p)
    }
}

/// Fixed-size bitset over vertex indices.
#[derive(Debug, Clone, PartialEq, Eq)]
struct BitSet(Vec<u64>);

impl BitSet {
    fn new(len: usize) -> Self {
        BitSet(vec![0; len.div_ceil(64)])
    }
    fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn contains(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }
}

/// The AR quiver of a Dynkin quiver, realised inside the repetition quiver.
/// Vertices are indexed in `(p, level)` order.
#[derive(Debug, Clone)]
pub struct ARQuiver {
    quiver: DynkinQuiver,
    xi: HeightFunction,
    tau: Vec<usize>,
    m: Vec<usize>,
    roots: Vec<PositiveRoot>,
    coords: Vec<RepCoord>,
    by_root: HashMap<PositiveRoot, usize>,
    by_coord: HashMap<RepCoord, usize>,
    arrows: Vec<(usize, usize)>,
    succ: Vec<Vec<usize>>,
    pred: Vec<Vec<usize>>,
    reach: Vec<BitSet>,
}

impl PartialEq for ARQuiver {
    fn eq(&self, other: &Self) -> bool {
        self.quiver == other.quiver
            && self.xi == other.xi
            && self.m == other.m
            && self.roots == other.roots
            && self.coords == other.coords
            && self.arrows == other.arrows
    }
}

impl ARQuiver {
    /// Builds the AR quiver with the default height function (`xi_n = 0`).
    pub fn from_quiver(quiver: &DynkinQuiver) -> Result<Self, ArError> {
        Self::build(quiver, &quiver.default_heights())
    }

    /// Seeds `(i, xi_i)` with `eta_i` and walks left by the Coxeter element
    /// while the image stays positive.
    pub fn build(quiver: &DynkinQuiver, xi: &HeightFunction) -> Result<Self, ArError> {
        if !xi.respects(quiver) {
            return Err(ArError::BadHeights);
        }
        let datum = quiver.datum();
        let n = datum.rank();
        let total = datum.num_positive_roots();
        let tau = quiver.coxeter_word();
        let mut m = vec![0; n];
        let mut cells: Vec<(RepCoord, PositiveRoot)> = Vec::with_capacity(total);
        for i in datum.vertices() {
            let mut beta = quiver.eta(i);
            let mut p = xi.get(i);
            loop {
                cells.push((RepCoord::new(i, p), beta.clone()));
                if cells.len() > total {
                    return Err(ArError::VertexCount { got: cells.len(), expected: total });
                }
                let next = datum.apply_word(&tau, &SignedRoot::positive(beta.clone()));
                if !next.is_positive() {
                    break;
                }
                beta = next.into_root();
                p -= 2;
                m[i - 1] += 1;
            }
        }
        if cells.len() != total {
            return Err(ArError::VertexCount { got: cells.len(), expected: total });
        }
        cells.sort_by_key(|(c, _)| (c.p, c.level));
        let coords: Vec<RepCoord> = cells.iter().map(|c| c.0).collect();
        let roots: Vec<PositiveRoot> = cells.into_iter().map(|c| c.1).collect();
        let mut by_root = HashMap::with_capacity(total);
        for (k, r) in roots.iter().enumerate() {
            if by_root.insert(r.clone(), k).is_some() {
                return Err(ArError::Invariant {
                    check: "bijection",
                    coord: coords[k],
                    detail: format!("root {r} appears twice"),
                });
            }
        }
        let by_coord = coords.iter().enumerate().map(|(k, c)| (*c, k)).collect::<HashMap<_, _>>();
        let mut arrows = Vec::new();
        for (k, c) in coords.iter().enumerate() {
            for j in datum.neighbors(c.level) {
                if let Some(&t) = by_coord.get(&RepCoord::new(j, c.p + 1)) {
                    arrows.push((k, t));
                }
            }
        }
        arrows.sort();
        let mut ar = ARQuiver {
            quiver: quiver.clone(),
            xi: xi.clone(),
            tau,
            m,
            roots,
            coords,
            by_root,
            by_coord,
            arrows,
            succ: Vec::new(),
            pred: Vec::new(),
            reach: Vec::new(),
        };
        ar.index_arrows();
        ar.validate()?;
        Ok(ar)
    }

    fn index_arrows(&mut self) {
        let nv = self.roots.len();
        self.succ = vec![Vec::new(); nv];
        self.pred = vec![Vec::new(); nv];
        for &(s, t) in &self.arrows {
            self.succ[s].push(t);
            self.pred[t].push(s);
        }
        self.reach = (0..nv)
            .map(|v| {
                let mut set = BitSet::new(nv);
                let mut stack = self.succ[v].clone();
                while let Some(w) = stack.pop() {
                    if !set.contains(w) {
                        set.insert(w);
                        stack.extend(self.succ[w].iter().copied());
                    }
                }
                set
            })
            .collect();
    }

    /// Copy with the `k`-th arrow reversed; used to test that the checks
    /// detect corrupted quivers.
    #[doc(hidden)]
    pub fn with_flipped_arrow(&self, k: usize) -> ARQuiver {
        let mut copy = self.clone();
        let (s, t) = copy.arrows[k];
        copy.arrows[k] = (t, s);
        copy.index_arrows();
        copy
    }

    /// Vertex range, Nakayama relation, arrow rule and mesh additivity.
    pub fn validate(&self) -> Result<(), ArError> {
        self.check_vertex_range()?;
        self.check_nakayama()?;
        self.check_arrow_rule()?;
        self.check_mesh()
    }

    pub fn check_vertex_range(&self) -> Result<(), ArError> {
        let datum = self.datum();
        let mut count = 0;
        for i in datum.vertices() {
            let top = self.xi.get(i);
            let bottom = top - 2 * self.m[i - 1] as i32;
            for p in (bottom..=top).step_by(2) {
                let c = RepCoord::new(i, p);
                if !self.by_coord.contains_key(&c) {
                    return Err(ArError::Invariant { check: "vertex_range", coord: c, detail: "missing vertex".into() });
                }
                count += 1;
            }
        }
        if count != self.roots.len() {
            return Err(ArError::VertexCount { got: self.roots.len(), expected: count });
        }
        Ok(())
    }

    pub fn check_nakayama(&self) -> Result<(), ArError> {
        let datum = self.datum();
        let h = datum.coxeter_number() as i32;
        for i in datum.vertices() {
            let s = datum.star(i);
            let lhs = self.xi.get(s) - 2 * self.m[s - 1] as i32;
            let rhs = self.xi.get(i) - h + 2;
            if lhs != rhs {
                return Err(ArError::Invariant {
                    check: "nakayama",
                    coord: RepCoord::new(s, lhs),
                    detail: format!("leftmost column {lhs} at level {s}, expected {rhs}"),
                });
            }
        }
        Ok(())
    }

    pub fn check_arrow_rule(&self) -> Result<(), ArError> {
        let datum = self.datum();
        let mut expected = Vec::new();
        for (k, c) in self.coords.iter().enumerate() {
            for j in datum.neighbors(c.level) {
                if let Some(&t) = self.by_coord.get(&RepCoord::new(j, c.p + 1)) {
                    expected.push((k, t));
                }
            }
        }
        expected.sort();
        let mut actual = self.arrows.clone();
        actual.sort();
        if let Some(k) = (0..expected.len().max(actual.len())).find(|&k| expected.get(k) != actual.get(k)) {
            let bad = actual.get(k).or(expected.get(k)).copied().unwrap_or((0, 0));
            return Err(ArError::Invariant {
                check: "arrow_rule",
                coord: self.coords[bad.0],
                detail: format!("arrow set differs near {} -> {}", self.coords[bad.0], self.coords[bad.1]),
            });
        }
        Ok(())
    }

    /// `beta + tau(beta)` equals the sum of the arrow sources into `beta`
    /// whenever `tau(beta)` is positive.
    pub fn check_mesh(&self) -> Result<(), ArError> {
        let datum = self.datum();
        for (k, c) in self.coords.iter().enumerate() {
            let beta = &self.roots[k];
            let t = datum.apply_word(&self.tau, &SignedRoot::positive(beta.clone()));
            let left = self.by_coord.get(&RepCoord::new(c.level, c.p - 2)).copied();
            let fail = |detail: String| ArError::Invariant { check: "mesh_additivity", coord: *c, detail };
            match (t.is_positive(), left) {
                (true, Some(l)) => {
                    if self.roots[l] != *t.root() {
                        return Err(fail(format!("tau image {} not at {}", t.root(), self.coords[l])));
                    }
                    let lhs = beta.add(t.root());
                    let mut rhs = vec![0; datum.rank()];
                    for &s in &self.pred[k] {
                        for (x, y) in rhs.iter_mut().zip(self.roots[s].coeffs()) {
                            *x += y;
                        }
                    }
                    if lhs != rhs {
                        return Err(fail(format!("{lhs:?} != sum of sources {rhs:?}")));
                    }
                }
                (false, None) => {}
                _ => return Err(fail("tau positivity disagrees with the column range".into())),
            }
        }
        Ok(())
    }

    pub fn quiver(&self) -> &DynkinQuiver {
        &self.quiver
    }

    pub fn datum(&self) -> &CartanDatum {
        self.quiver.datum()
    }

    pub fn rank(&self) -> usize {
        self.quiver.rank()
    }

    pub fn xi(&self) -> &HeightFunction {
        &self.xi
    }

    /// The Coxeter word used for the recursion.
    pub fn tau_word(&self) -> &[usize] {
        &self.tau
    }

    pub fn m(&self, i: usize) -> usize {
        self.m[i - 1]
    }

    pub fn m_values(&self) -> &[usize] {
        &self.m
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn roots(&self) -> &[PositiveRoot] {
        &self.roots
    }

    pub fn coords(&self) -> &[RepCoord] {
        &self.coords
    }

    pub fn arrows(&self) -> &[(usize, usize)] {
        &self.arrows
    }

    pub fn successors(&self, v: usize) -> &[usize] {
        &self.succ[v]
    }

    pub fn predecessors(&self, v: usize) -> &[usize] {
        &self.pred[v]
    }

    pub fn index_of_root(&self, r: &PositiveRoot) -> Option<usize> {
        self.by_root.get(r).copied()
    }

    pub fn index_of_coord(&self, c: RepCoord) -> Option<usize> {
        self.by_coord.get(&c).copied()
    }

    pub fn phi(&self, r: &PositiveRoot) -> Option<RepCoord> {
        self.index_of_root(r).map(|k| self.coords[k])
    }

    pub fn root_at(&self, c: RepCoord) -> Option<&PositiveRoot> {
        self.index_of_coord(c).map(|k| &self.roots[k])
    }

    pub fn eps(&self, v: usize) -> EpsilonForm {
        self.datum().epsilon_form(&self.roots[v]).expect("type D root")
    }

    pub fn label(&self, v: usize) -> String {
        self.datum().format_root(&self.roots[v])
    }

    /// Path `from ~> to` of positive length.
    pub fn reaches(&self, from: usize, to: usize) -> bool {
        self.reach[from].contains(to)
    }

    /// `alpha <_Q beta`: a path from `beta` to `alpha`.
    pub fn prec(&self, alpha: &PositiveRoot, beta: &PositiveRoot) -> bool {
        match (self.index_of_root(alpha), self.index_of_root(beta)) {
            (Some(a), Some(b)) => self.reaches(b, a),
            _ => false,
        }
    }

    pub fn vertices_at_level(&self, level: usize) -> Vec<usize> {
        (0..self.len()).filter(|&v| self.coords[v].level == level).collect()
    }

    pub fn require_type_d(&self) -> Result<(), ArError> {
        if self.datum().is_type_d() {
            Ok(())
        } else {
            Err(ArError::NotTypeD)
        }
    }

    pub fn simple_root_coords(&self) -> Vec<RepCoord> {
        self.datum().vertices().map(|k| self.phi(&self.datum().simple(k)).expect("simple roots are vertices")).collect()
    }

    /// The spin index carried by the level `n-1`/`n` forks: `n` when
    /// `xi_{n-1} = xi_n`, else `n-1`.
    pub fn t(&self) -> Result<usize, ArError> {
        self.require_type_d()?;
        let n = self.rank();
        Ok(if self.xi.get(n - 1) == self.xi.get(n) { n } else { n - 1 })
    }

    /// The other spin index.
    pub fn t_prime(&self) -> Result<usize, ArError> {
        let n = self.rank();
        Ok(2 * n - 1 - self.t()?)
    }

    /// The roots at `(n-1, p)` and `(n, p)` and the index `a` with sum `2 e_a`.
    pub fn level_pair_sum(&self, p: i32) -> Result<Option<LevelPair>, ArError> {
        self.require_type_d()?;
        let n = self.rank();
        let (Some(u), Some(l)) = (self.index_of_coord(RepCoord::new(n - 1, p)), self.index_of_coord(RepCoord::new(n, p)))
        else {
            return Ok(None);
        };
        let (eu, el) = (self.eps(u), self.eps(l));
        let a = if eu.a == el.a && eu.b == -el.b { Some(eu.a) } else { None };
        Ok(Some(LevelPair { column: p, upper: self.roots[u].clone(), lower: self.roots[l].clone(), a }))
    }

    /// Apex of the triangle spanned by two vertices at levels `n-1`/`n`.
    pub fn triangle_apex(&self, a: RepCoord, b: RepCoord) -> Result<RepCoord, ArError> {
        self.require_type_d()?;
        let n = self.rank();
        for c in [a, b] {
            if c.level + 1 < n {
                return Err(ArError::Precondition(format!("{c} is not at level n-1 or n")));
            }
            self.index_of_coord(c).ok_or(ArError::NoVertex(c))?;
        }
        let gap = (a.p - b.p).abs();
        if gap == 0 || gap % 2 != 0 {
            return Err(ArError::Precondition(format!("column gap {gap} is not a positive even number")));
        }
        let k = gap / 2;
        let same = i32::from(a.level != b.level);
        if (same - (k - 1)).rem_euclid(2) != 0 {
            return Err(ArError::Precondition(format!("parity: levels {} and {} with k = {k}", a.level, b.level)));
        }
        if k as usize > n - 2 {
            return Err(ArError::Precondition(format!("k = {k} exceeds n-2")));
        }
        Ok(RepCoord::new(n - 1 - k as usize, (a.p + b.p) / 2))
    }

    pub fn longest_root_coord(&self) -> Result<RepCoord, ArError> {
        self.require_type_d()?;
        let n = self.rank() as i32;
        let x1 = self.xi.get(1);
        let p = if self.quiver.is_source(1) { x1 - n + 1 } else { x1 - n + 3 };
        Ok(RepCoord::new(self.rank() - 2, p))
    }

    /// `(i, j)`: the extreme columns of height-at-least-2 roots at levels
    /// `n-1` and `n`.
    pub fn nfree_bounds(&self) -> Result<(i32, i32), ArError> {
        self.require_type_d()?;
        let n = self.rank();
        let cols: Vec<i32> = (0..self.len())
            .filter(|&v| self.coords[v].level + 1 >= n && self.roots[v].height() >= 2)
            .map(|v| self.coords[v].p)
            .collect();
        let i = *cols.iter().max().ok_or(ArError::Precondition("no high roots at the spin levels".into()))?;
        let j = *cols.iter().min().expect("non-empty");
        Ok((i, j))
    }

    /// The region of multiplicity-non-free roots: `1 < l < n-1` and
    /// `j + (n-1-l) <= p <= i - (n-1-l)`.
    pub fn in_nfree_region(&self, c: RepCoord) -> Result<bool, ArError> {
        let (i, j) = self.nfree_bounds()?;
        let n = self.rank();
        if c.level <= 1 || c.level + 1 >= n {
            return Ok(false);
        }
        let off = (n - 1 - c.level) as i32;
        Ok(self.index_of_coord(c).is_some() && j + off <= c.p && c.p <= i - off)
    }

    /// The weaker column bound `j - (n-1-l) <= p <= i - (n-1-l)`.
    pub fn in_nfree_outer_bound(&self, c: RepCoord) -> Result<bool, ArError> {
        let (i, j) = self.nfree_bounds()?;
        let n = self.rank();
        if c.level <= 1 || c.level + 1 >= n {
            return Ok(false);
        }
        let off = (n - 1 - c.level) as i32;
        Ok(j - off <= c.p && c.p <= i - off)
    }

    /// Expected coordinate of `alpha_k` from the quiver shape alone, when the
    /// shape determines it.
    pub fn predicted_simple_coord(&self, k: usize) -> Option<RepCoord> {
        use crate::quiver::VertexClass::*;
        let n = self.rank() as i32;
        let ki = k as i32;
        let q = &self.quiver;
        let datum = self.datum();
        match q.classify_vertex(k) {
            Source => Some(RepCoord::new(k, self.xi.get(k))),
            Sink => {
                let s = datum.star(k);
                Some(RepCoord::new(s, self.xi.get(s) - 2 * self.m(s) as i32))
            }
            LeftIntermediate => Some(RepCoord::new(1, self.xi.get(k) - ki + 1)),
            RightIntermediate => Some(RepCoord::new(1, self.xi.get(k) - 2 * n + ki + 3)),
            Other if datum.is_type_d() && k + 2 == self.rank() => {
                let nn = self.rank();
                let spins = [nn - 1, nn];
                if q.has_arrow(nn - 3, k) {
                    // n-3 -> n-2, b -> n-2, n-2 -> a
                    let a = *spins.iter().find(|&&x| q.has_arrow(k, x))?;
                    Some(RepCoord::new(datum.star(a), self.xi.get(k) - 2 * n + 5))
                } else {
                    // n-2 -> n-3, a -> n-2, n-2 -> b
                    let a = *spins.iter().find(|&&x| q.has_arrow(x, k))?;
                    Some(RepCoord::new(a, self.xi.get(k) - 1))
                }
            }
            Other => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelPair {
    pub column: i32,
    pub upper: PositiveRoot,
    pub lower: PositiveRoot,
    /// `Some(a)` when the two roots are `<a, t>` and `<a, -t>`.
    pub a: Option<usize>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::root_system::EpsilonForm;

    pub(crate) fn example1() -> ARQuiver {
        let dt = CartanDatum::d(4).unwrap();
        let q = DynkinQuiver::parse(&dt, "2>1,3>2,2>4").unwrap();
        let xi = q.height_function(3, 0).unwrap();
        ARQuiver::build(&q, &xi).unwrap()
    }

    #[test]
    fn example1_grid() {
        let ar = example1();
        let expected = [
            ((1, -6), (1, -2)),
            ((1, -4), (2, 4)),
            ((1, -2), (1, -4)),
            ((2, -5), (1, 4)),
            ((2, -3), (1, 2)),
            ((2, -1), (2, -4)),
            ((3, -4), (1, 3)),
            ((3, -2), (2, -3)),
            ((3, 0), (3, -4)),
            ((4, -6), (3, 4)),
            ((4, -4), (1, -3)),
            ((4, -2), (2, 3)),
        ];
        assert_eq!(ar.len(), 12);
        for ((i, p), (a, b)) in expected {
            let r = ar.root_at(RepCoord::new(i, p)).unwrap();
            assert_eq!(ar.datum().epsilon_form(r).unwrap(), EpsilonForm::new(a, b), "at ({i},{p})");
        }
        assert_eq!(ar.m_values(), &[2, 2, 2, 2]);
    }

    #[test]
    fn d5_m_values() {
        let dt = CartanDatum::d(5).unwrap();
        for q in DynkinQuiver::all_orientations(&dt) {
            let ar = ARQuiver::from_quiver(&q).unwrap();
            let xi = ar.xi();
            let expected = if xi.get(5) == xi.get(4) + 2 {
                (2, 4)
            } else if xi.get(4) == xi.get(5) + 2 {
                (4, 2)
            } else {
                (3, 3)
            };
            assert_eq!((ar.m(4), ar.m(5)), expected);
            for i in 1..=3 {
                assert_eq!(ar.m(i), 3);
            }
        }
    }

    #[test]
    fn example1_queries() {
        let ar = example1();
        let dt = ar.datum().clone();
        let r = |a, b| dt.from_epsilon(EpsilonForm::new(a, b)).unwrap();
        assert_eq!(ar.phi(&dt.simple(3)), Some(RepCoord::new(3, 0)));
        assert_eq!(ar.phi(&dt.simple(1)), Some(RepCoord::new(1, -6)));
        assert!(ar.prec(&r(2, -3), &r(1, 3)));
        assert!(!ar.prec(&r(1, 3), &r(2, -3)));
        assert!(!ar.prec(&r(1, 3), &r(1, 3)));
        let pair = ar.level_pair_sum(-4).unwrap().unwrap();
        assert_eq!(pair.a, Some(1));
        assert_eq!(ar.t().unwrap(), 3);
        assert!(ar.level_pair_sum(0).unwrap().is_none());
        let apex = ar.triangle_apex(RepCoord::new(3, -4), RepCoord::new(3, -2)).unwrap();
        assert_eq!(apex, RepCoord::new(2, -3));
        assert!(ar.triangle_apex(RepCoord::new(3, -4), RepCoord::new(4, -2)).is_err());
        let apex = ar.triangle_apex(RepCoord::new(4, -6), RepCoord::new(3, -2)).unwrap();
        assert_eq!(ar.root_at(apex).unwrap(), &dt.from_epsilon(EpsilonForm::new(2, 4)).unwrap());
        assert_eq!(ar.longest_root_coord().unwrap(), RepCoord::new(2, -3));
        assert_eq!(ar.nfree_bounds().unwrap(), (-2, -4));
        assert!(ar.in_nfree_region(RepCoord::new(2, -3)).unwrap());
        assert!(!ar.in_nfree_region(RepCoord::new(2, -5)).unwrap());
        assert_eq!(ar.predicted_simple_coord(2), Some(RepCoord::new(3, -2)));
    }

    #[test]
    fn shift_invariance() {
        let ar = example1();
        let shifted = ARQuiver::build(ar.quiver(), &ar.xi().shifted(4)).unwrap();
        for (v, r) in ar.roots().iter().enumerate() {
            let c = ar.coords()[v];
            assert_eq!(shifted.phi(r), Some(RepCoord::new(c.level, c.p + 4)));
        }
        assert_eq!(shifted.m_values(), ar.m_values());
    }

    #[test]
    fn flipped_arrow_fails_mesh() {
        let ar = example1();
        for k in 0..ar.arrows().len() {
            let bad = ar.with_flipped_arrow(k);
            let (s, t) = ar.arrows()[k];
            match bad.check_mesh() {
                Err(ArError::Invariant { check, coord, .. }) => {
                    assert_eq!(check, "mesh_additivity");
                    assert!(coord == ar.coords()[s] || coord == ar.coords()[t]);
                }
                Err(other) => panic!("unexpected {other}"),
                Ok(()) => assert!(bad.check_arrow_rule().is_err()),
            }
            assert!(bad.validate().is_err());
        }
    }

    #[test]
    fn type_a_builds() {
        for n in 1..=6 {
            let dt = CartanDatum::a(n).unwrap();
            for q in DynkinQuiver::all_orientations(&dt) {
                let ar = ARQuiver::from_quiver(&q).unwrap();
                assert_eq!(ar.len(), n * (n + 1) / 2);
                assert!(ar.t().is_err());
            }
        }
    }

    #[test]
    fn bad_heights_rejected() {
        let ar = example1();
        let bad = HeightFunction::new(vec![0, 0, 0, 0]);
        assert_eq!(ARQuiver::build(ar.quiver(), &bad).unwrap_err(), ArError::BadHeights);
    }

    proptest::proptest! {
        #[test]
        fn shifting_heights_translates_columns(n in 4usize..=7, mask in 0u64..64, shift in -5i32..=5) {
            let dt = CartanDatum::d(n).unwrap();
            let q = DynkinQuiver::from_mask(&dt, mask % (1 << (n - 1))).unwrap();
            let base = q.height_function(n, 0).unwrap();
            let moved = q.height_function(n, 2 * shift).unwrap();
            let (a, b) = (ARQuiver::build(&q, &base).unwrap(), ARQuiver::build(&q, &moved).unwrap());
            proptest::prop_assert_eq!(a.len(), dt.positive_roots().len());
            for (v, r) in a.roots().iter().enumerate() {
                let c = a.coords()[v];
                proptest::prop_assert_eq!(b.root_at(RepCoord::new(c.level, c.p + 2 * shift)), Some(r));
            }
        }
    }
}
