use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RootError {
    #[error("rank {rank} is below the minimum {min} for type {ty}")]
    RankTooSmall { ty: DiagramType, rank: usize, min: usize },
    #[error("vertex {0} is out of range")]
    BadVertex(usize),
    #[error("{0:?} is not a positive root")]
    NotARoot(Vec<i32>),
    #[error("coefficient vector has length {got}, expected {expected}")]
    WrongLength { got: usize, expected: usize },
    #[error("epsilon forms are only defined for type D")]
    NotTypeD,
    #[error("invalid epsilon form <{a},{b}>")]
    BadEpsilon { a: usize, b: i32 },
    #[error("cannot parse root {0:?}")]
    Parse(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum DiagramType {
    A,
    D,
}

impl fmt::Display for DiagramType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DiagramType::A => write!(f, "A"),
            DiagramType::D => write!(f, "D"),
        }
    }
}

impl std::str::FromStr for DiagramType {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "A" | "a" => Ok(DiagramType::A),
            "D" | "d" => Ok(DiagramType::D),
            other => Err(format!("unknown diagram type {other:?}")),
        }
    }
}

/// A Dynkin diagram of type A_n or D_n with vertices `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CartanDatum {
    ty: DiagramType,
    rank: usize,
    edges: Vec<(usize, usize)>,
    dist: Vec<Vec<usize>>,
}

impl CartanDatum {
    pub fn new(ty: DiagramType, rank: usize) -> Result<Self, RootError> {
        let min = match ty {
            DiagramType::A => 1,
            DiagramType::D => 4,
        };
        if rank < min {
            return Err(RootError::RankTooSmall { ty, rank, min });
        }
        let mut edges: Vec<(usize, usize)> = match ty {
            DiagramType::A => (1..rank).map(|i| (i, i + 1)).collect(),
            DiagramType::D => {
                let mut e: Vec<_> = (1..rank - 1).map(|i| (i, i + 1)).collect();
                e.push((rank - 2, rank));
                e
            }
        };
        edges.sort();
        let mut dist = vec![vec![usize::MAX; rank + 1]; rank + 1];
        for s in 1..=rank {
            dist[s][s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                for &(a, b) in &edges {
                    let w = if a == v {
                        b
                    } else if b == v {
                        a
                    } else {
                        continue;
                    };
                    if dist[s][w] == usize::MAX {
                        dist[s][w] = dist[s][v] + 1;
                        queue.push_back(w);
                    }
                }
            }
        }
        Ok(CartanDatum { ty, rank, edges, dist })
    }

    pub fn d(rank: usize) -> Result<Self, RootError> {
        Self::new(DiagramType::D, rank)
    }

    pub fn a(rank: usize) -> Result<Self, RootError> {
        Self::new(DiagramType::A, rank)
    }

    pub fn diagram_type(&self) -> DiagramType {
        self.ty
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_type_d(&self) -> bool {
        self.ty == DiagramType::D
    }

    /// Diagram edges `(i, j)` with `i < j`, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn vertices(&self) -> std::ops::RangeInclusive<usize> {
        1..=self.rank
    }

    pub fn check_vertex(&self, i: usize) -> Result<(), RootError> {
        if (1..=self.rank).contains(&i) {
            Ok(())
        } else {
            Err(RootError::BadVertex(i))
        }
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        let e = (i.min(j), i.max(j));
        self.edges.binary_search(&e).is_ok()
    }

    pub fn neighbors(&self, i: usize) -> Vec<usize> {
        self.vertices().filter(|&j| self.adjacent(i, j)).collect()
    }

    pub fn distance(&self, i: usize, j: usize) -> usize {
        self.dist[i][j]
    }

    pub fn cartan(&self, i: usize, j: usize) -> i32 {
        if i == j {
            2
        } else if self.adjacent(i, j) {
            -1
        } else {
            0
        }
    }

    pub fn coxeter_number(&self) -> usize {
        match self.ty {
            DiagramType::A => self.rank + 1,
            DiagramType::D => 2 * self.rank - 2,
        }
    }

    pub fn num_positive_roots(&self) -> usize {
        let n = self.rank;
        match self.ty {
            DiagramType::A => n * (n + 1) / 2,
            DiagramType::D => n * (n - 1),
        }
    }

    /// The involution `i -> i*` with `w0(alpha_i) = -alpha_{i*}`.
    pub fn star(&self, i: usize) -> usize {
        let n = self.rank;
        match self.ty {
            DiagramType::A => n + 1 - i,
            DiagramType::D => {
                if i + 2 <= n || n % 2 == 0 {
                    i
                } else {
                    2 * n - 1 - i
                }
            }
        }
    }

    pub fn simple(&self, i: usize) -> PositiveRoot {
        let mut c = vec![0; self.rank];
        c[i - 1] = 1;
        PositiveRoot { coeffs: c }
    }

    pub fn is_positive_root(&self, coeffs: &[i32]) -> bool {
        if coeffs.len() != self.rank || coeffs.iter().any(|&c| c < 0) {
            return false;
        }
        if self.ty == DiagramType::D {
            return eps_vector(coeffs).is_some_and(|x| eps_from_vector(&x).is_some());
        }
        // Type A roots are the intervals of ones.
        let support: Vec<usize> = (0..self.rank).filter(|&k| coeffs[k] != 0).collect();
        match (support.first(), support.last()) {
            (Some(&lo), Some(&hi)) => (lo..=hi).all(|k| coeffs[k] == 1),
            _ => false,
        }
    }

    pub fn root(&self, coeffs: Vec<i32>) -> Result<PositiveRoot, RootError> {
        if coeffs.len() != self.rank {
            return Err(RootError::WrongLength { got: coeffs.len(), expected: self.rank });
        }
        if !self.is_positive_root(&coeffs) {
            return Err(RootError::NotARoot(coeffs));
        }
        Ok(PositiveRoot { coeffs })
    }

    /// Positive roots by closure of the simple roots under simple reflections,
    /// sorted by height and then coefficients.
    pub fn positive_roots(&self) -> Vec<PositiveRoot> {
        let mut seen: BTreeSet<Vec<i32>> = BTreeSet::new();
        let mut queue: VecDeque<Vec<i32>> = VecDeque::new();
        for i in self.vertices() {
            let s = self.simple(i).coeffs;
            seen.insert(s.clone());
            queue.push_back(s);
        }
        while let Some(v) = queue.pop_front() {
            for i in self.vertices() {
                let w = self.reflect_vec(i, &v);
                if w.iter().all(|&c| c >= 0) && seen.insert(w.clone()) {
                    queue.push_back(w);
                }
            }
        }
        let mut out: Vec<PositiveRoot> = seen.into_iter().map(|coeffs| PositiveRoot { coeffs }).collect();
        out.sort_by(|a, b| a.height().cmp(&b.height()).then_with(|| a.coeffs.cmp(&b.coeffs)));
        out
    }

    /// Symmetric bilinear form on the root lattice.
    pub fn pairing(&self, a: &[i32], b: &[i32]) -> i32 {
        let mut s = 0;
        for i in 0..self.rank {
            if a[i] == 0 {
                continue;
            }
            for j in 0..self.rank {
                s += a[i] * b[j] * self.cartan(i + 1, j + 1);
            }
        }
        s
    }

    fn reflect_vec(&self, i: usize, v: &[i32]) -> Vec<i32> {
        let c: i32 = (0..self.rank).map(|j| v[j] * self.cartan(j + 1, i)).sum();
        let mut w = v.to_vec();
        w[i - 1] -= c;
        w
    }

    pub fn reflect(&self, i: usize, root: &SignedRoot) -> SignedRoot {
        let v = root.to_vector();
        SignedRoot::from_vector(self.reflect_vec(i, &v))
            .expect("simple reflections preserve the root system")
    }

    /// Apply `s_{w_1} ... s_{w_r}`; the last letter acts first.
    pub fn apply_word(&self, word: &[usize], root: &SignedRoot) -> SignedRoot {
        let mut v = root.to_vector();
        for &i in word.iter().rev() {
            v = self.reflect_vec(i, &v);
        }
        SignedRoot::from_vector(v).expect("the Weyl group preserves the root system")
    }

    /// The roots `beta_z = s_{i_1} ... s_{i_{z-1}} alpha_{i_z}` of a word.
    pub fn word_roots(&self, word: &[usize]) -> Vec<SignedRoot> {
        (0..word.len())
            .map(|z| self.apply_word(&word[..z], &SignedRoot::positive(self.simple(word[z]))))
            .collect()
    }

    pub fn is_reduced(&self, word: &[usize]) -> bool {
        word.iter().all(|&i| (1..=self.rank).contains(&i))
            && self.word_roots(word).iter().all(|r| r.is_positive())
    }

    pub fn epsilon_form(&self, root: &PositiveRoot) -> Result<EpsilonForm, RootError> {
        if self.ty != DiagramType::D {
            return Err(RootError::NotTypeD);
        }
        eps_vector(&root.coeffs)
            .and_then(|x| eps_from_vector(&x))
            .ok_or_else(|| RootError::NotARoot(root.coeffs.clone()))
    }

    pub fn from_epsilon(&self, e: EpsilonForm) -> Result<PositiveRoot, RootError> {
        if self.ty != DiagramType::D {
            return Err(RootError::NotTypeD);
        }
        let n = self.rank;
        let b = e.b.unsigned_abs() as usize;
        if e.a == 0 || e.a >= b || b > n {
            return Err(RootError::BadEpsilon { a: e.a, b: e.b });
        }
        let mut x = vec![0i32; n + 1];
        x[e.a] = 1;
        x[b] = e.b.signum();
        // c_k = x_1 + ... + x_k for k <= n-2; the last two from the spin pair.
        let mut c = vec![0i32; n + 1];
        for k in 1..=n - 2 {
            c[k] = c[k - 1] + x[k];
        }
        let top = x[n - 1] + c[n - 2];
        c[n] = (top + x[n]) / 2;
        c[n - 1] = (top - x[n]) / 2;
        self.root(c[1..].to_vec())
    }

    pub fn root_stats(&self, root: &PositiveRoot, k: i32) -> RootStats {
        RootStats {
            height: root.height(),
            support_geq: root.support_geq(k),
            multiplicity: root.multiplicity(),
        }
    }

    pub fn parse_root(&self, s: &str) -> Result<PositiveRoot, RootError> {
        parse_root(self, s)
    }

    pub fn format_root(&self, root: &PositiveRoot) -> String {
        match self.epsilon_form(root) {
            Ok(e) => e.to_string(),
            Err(_) => format!("{:?}", root.coeffs),
        }
    }
}

/// Epsilon coordinates `x_1..x_n` (index 0 unused) of a type-D coefficient vector.
fn eps_vector(c: &[i32]) -> Option<Vec<i32>> {
    let n = c.len();
    if n < 4 {
        return None;
    }
    let cc = |k: usize| if k == 0 { 0 } else { c[k - 1] };
    let mut x = vec![0i32; n + 1];
    for k in 1..=n - 2 {
        x[k] = cc(k) - cc(k - 1);
    }
    x[n - 1] = cc(n - 1) + cc(n) - cc(n - 2);
    x[n] = cc(n) - cc(n - 1);
    Some(x)
}

fn eps_from_vector(x: &[i32]) -> Option<EpsilonForm> {
    let nz: Vec<usize> = (1..x.len()).filter(|&k| x[k] != 0).collect();
    match nz.as_slice() {
        &[a, b] if x[a] == 1 && x[b].abs() == 1 => Some(EpsilonForm { a, b: x[b] * b as i32 }),
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PositiveRoot {
    coeffs: Vec<i32>,
}

impl PositiveRoot {
    pub fn coeffs(&self) -> &[i32] {
        &self.coeffs
    }

    pub fn rank(&self) -> usize {
        self.coeffs.len()
    }

    pub fn height(&self) -> i32 {
        self.coeffs.iter().sum()
    }

    pub fn multiplicity(&self) -> i32 {
        self.coeffs.iter().copied().max().unwrap_or(0)
    }

    /// Vertices `i` with coefficient at least `k`.
    pub fn support_geq(&self, k: i32) -> Vec<usize> {
        (0..self.coeffs.len()).filter(|&i| self.coeffs[i] >= k).map(|i| i + 1).collect()
    }

    pub fn is_simple(&self) -> bool {
        self.height() == 1
    }

    /// Coefficientwise difference, if it is non-negative.
    pub fn checked_sub(&self, other: &PositiveRoot) -> Option<Vec<i32>> {
        let v: Vec<i32> = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        v.iter().all(|&c| c >= 0).then_some(v)
    }

    pub fn add(&self, other: &PositiveRoot) -> Vec<i32> {
        self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect()
    }
}

impl fmt::Display for PositiveRoot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, c) in self.coeffs.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

/// A root of the full root system: `sign * root`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SignedRoot {
    positive: bool,
    root: PositiveRoot,
}

impl SignedRoot {
    pub fn positive(root: PositiveRoot) -> Self {
        SignedRoot { positive: true, root }
    }

    pub fn negative(root: PositiveRoot) -> Self {
        SignedRoot { positive: false, root }
    }

    pub fn is_positive(&self) -> bool {
        self.positive
    }

    pub fn root(&self) -> &PositiveRoot {
        &self.root
    }

    pub fn into_root(self) -> PositiveRoot {
        self.root
    }

    pub fn negate(&self) -> Self {
        SignedRoot { positive: !self.positive, root: self.root.clone() }
    }

    fn to_vector(&self) -> Vec<i32> {
        let s = if self.positive { 1 } else { -1 };
        self.root.coeffs.iter().map(|c| s * c).collect()
    }

    fn from_vector(v: Vec<i32>) -> Option<Self> {
        if v.iter().all(|&c| c >= 0) && v.iter().any(|&c| c > 0) {
            Some(SignedRoot::positive(PositiveRoot { coeffs: v }))
        } else if v.iter().all(|&c| c <= 0) && v.iter().any(|&c| c < 0) {
            Some(SignedRoot::negative(PositiveRoot { coeffs: v.iter().map(|c| -c).collect() }))
        } else {
            None
        }
    }
}

/// `<a, b>` stands for `e_a + sign(b) e_|b|`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EpsilonForm {
    pub a: usize,
    pub b: i32,
}

impl EpsilonForm {
    pub fn new(a: usize, b: i32) -> Self {
        EpsilonForm { a, b }
    }

    /// Signed summands `+a` and `b` as signed indices.
    pub fn summands(&self) -> [i32; 2] {
        [self.a as i32, self.b]
    }

    pub fn has_summand(&self, signed: i32) -> bool {
        self.summands().contains(&signed)
    }
}

impl fmt::Display for EpsilonForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{},{}>", self.a, self.b)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RootStats {
    pub height: i32,
    pub support_geq: Vec<usize>,
    pub multiplicity: i32,
}

/// Accepts `[1,2,1,1]`, `e1+e2`, `e1-e3` or `<1,-4>`.
pub fn parse_root(datum: &CartanDatum, s: &str) -> Result<PositiveRoot, RootError> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || RootError::Parse(s.to_string());
    if let Some(inner) = t.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
        let coeffs = inner
            .split(',')
            .map(|x| x.parse::<i32>().map_err(|_| bad()))
            .collect::<Result<Vec<_>, _>>()?;
        return datum.root(coeffs);
    }
    if let Some(inner) = t.strip_prefix('<').and_then(|r| r.strip_suffix('>')) {
        let (a, b) = inner.split_once(',').ok_or_else(bad)?;
        let a: usize = a.parse().map_err(|_| bad())?;
        let b: i32 = b.parse().map_err(|_| bad())?;
        return datum.from_epsilon(EpsilonForm::new(a, b));
    }
    if let Some(rest) = t.strip_prefix('e') {
        let pos = rest.find(['+', '-']).ok_or_else(bad)?;
        let a: usize = rest[..pos].parse().map_err(|_| bad())?;
        let sign = if &rest[pos..pos + 1] == "+" { 1 } else { -1 };
        let b: i32 = rest[pos + 1..].strip_prefix('e').ok_or_else(bad)?.parse().map_err(|_| bad())?;
        return datum.from_epsilon(EpsilonForm::new(a, sign * b));
    }
    Err(bad())
}
