use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::sync::OnceLock;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ar_quiver::{ARQuiver, PathKind, RepCoord};
use crate::orders::{
    all_readings, canonical_reading, classify_all, commutation_class, oracle_minimality, ConvexOrder, PairVerdict,
    Strategy, Verdict,
};
use crate::qaffine::{
    denom_d1, dorey_d1, dorey_d2, double_zero_set, double_zero_set_from_denominators, multiplicity_theorem_check,
    pair_to_triple, same_path_commuting_check, star_triple, zero_multiplicity, DoreyCase, Family, HomTriple, SpectralParam,
};
use crate::quiver::DynkinQuiver;
use crate::root_system::{CartanDatum, EpsilonForm, PositiveRoot};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Structure,
    Orders,
    Qaffine,
}

impl Suite {
    pub const ALL: [Suite; 3] = [Suite::Structure, Suite::Orders, Suite::Qaffine];
}

impl std::str::FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "structure" => Ok(Suite::Structure),
            "orders" => Ok(Suite::Orders),
            "qaffine" => Ok(Suite::Qaffine),
            other => Err(format!("unknown suite {other:?}")),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Structure => "structure",
            Suite::Orders => "orders",
            Suite::Qaffine => "qaffine",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

/// Outcome of one check on one scope.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub check_id: String,
    pub n: usize,
    /// Orientation bitmask; absent for checks that do not depend on a quiver.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mask: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub orientation: Option<String>,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub records: Vec<CheckRecord>,
}

impl VerifyReport {
    pub fn all_pass(&self) -> bool {
        self.records.iter().all(|r| r.status != Status::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.records.iter().filter(|r| r.status == Status::Fail)
    }

    pub fn count(&self, status: Status) -> usize {
        self.records.iter().filter(|r| r.status == status).count()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.records).expect("plain data serializes")
    }
}

pub enum Outcome {
    Pass,
    Fail(String),
    Skip,
}

type Res = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Res {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Per-orientation data shared between checks.
pub struct Ctx {
    pub ar: ARQuiver,
    verdicts: OnceLock<Result<Vec<PairVerdict>, String>>,
}

impl Ctx {
    pub fn new(ar: ARQuiver) -> Self {
        Ctx { ar, verdicts: OnceLock::new() }
    }

    pub fn verdicts(&self) -> Result<&[PairVerdict], String> {
        self.verdicts
            .get_or_init(|| {
                let mut out = Vec::new();
                for g in self.ar.roots().iter().filter(|g| !g.is_simple()) {
                    out.extend(classify_all(&self.ar, g).map_err(|e| e.to_string())?);
                }
                Ok(out)
            })
            .as_ref()
            .map(|v| v.as_slice())
            .map_err(|e| e.clone())
    }

    fn fmt(&self, r: &PositiveRoot) -> String {
        let c = self.ar.phi(r).expect("vertex");
        format!("{}{}", self.ar.datum().format_root(r), c)
    }
}

pub type QuiverCheck = fn(&Ctx) -> Outcome;
pub type RankCheck = fn(usize) -> Outcome;

#[derive(Clone, Copy)]
pub enum CheckFn {
    /// Runs once per orientation.
    Quiver(QuiverCheck),
    /// Runs once per rank.
    Rank(RankCheck),
}

#[derive(Clone, Copy)]
pub struct CheckInfo {
    pub id: &'static str,
    pub suite: Suite,
    pub about: &'static str,
    pub run: CheckFn,
}

fn wrap(r: Res) -> Outcome {
    match r {
        Ok(()) => Outcome::Pass,
        Err(e) => Outcome::Fail(e),
    }
}

macro_rules! quiver_check {
    ($name:ident, $body:expr) => {
        fn $name(c: &Ctx) -> Outcome {
            let f: fn(&Ctx) -> Res = $body;
            wrap(f(c))
        }
    };
}

pub fn check_catalog() -> Vec<CheckInfo> {
    use CheckFn::*;
    use Suite::*;
    vec![
        CheckInfo { id: "vertex_range", suite: Structure, about: "vertex columns lie in [xi_i - 2 m_i, xi_i] with matching parity", run: Quiver(vertex_range) },
        CheckInfo { id: "nakayama", suite: Structure, about: "left end of each level is the Nakayama image of the right end", run: Quiver(nakayama) },
        CheckInfo { id: "mesh_additivity", suite: Structure, about: "mesh relations on dimension vectors and the arrow rule", run: Quiver(mesh) },
        CheckInfo { id: "simple_root_coords", suite: Structure, about: "position of each simple root from the shape of the quiver", run: Quiver(simple_coords) },
        CheckInfo { id: "arrow_pairing", suite: Structure, about: "(alpha, beta) = 1 along every arrow", run: Quiver(arrow_pairing) },
        CheckInfo { id: "range_lemma", suite: Structure, about: "(i, xi_j - d(i,j)) and (i, xi_j - 2m_j + d(i,j)) are vertices", run: Quiver(range_lemma) },
        CheckInfo { id: "m_values", suite: Structure, about: "m_i = n-2 below the fork; spin values by parity", run: Quiver(m_values) },
        CheckInfo { id: "level_pair_sums", suite: Structure, about: "fork pairs are <a,t> and <a,-t>", run: Quiver(level_pairs) },
        CheckInfo { id: "triangle", suite: Structure, about: "apex of two spin-level roots carries their sum", run: Quiver(triangle) },
        CheckInfo { id: "swing_shapes", suite: Structure, about: "n-2 swings, each the full set of e_a roots, of type a or b", run: Quiver(swing_shapes) },
        CheckInfo { id: "maximal_paths", suite: Structure, about: "maximal paths through the fork share a summand e_k", run: Quiver(maximal_paths) },
        CheckInfo { id: "shallow_paths", suite: Structure, about: "shallow maximal paths touch level 1 and share -e_k", run: Quiver(shallow_paths) },
        CheckInfo { id: "sigma_kappa", suite: Structure, about: "reverse unimodal sigma chain and the kappa sums", run: Quiver(sigma_kappa) },
        CheckInfo { id: "longest_root", suite: Structure, about: "position of e_1 + e_2", run: Quiver(longest_root) },
        CheckInfo { id: "nfree_region", suite: Structure, about: "multiplicity non-free roots fill the predicted triangle", run: Quiver(nfree_region) },
        CheckInfo { id: "canonical_convex", suite: Orders, about: "U1/U2/L1/L2 readings give convex orders", run: Quiver(canonical_convex) },
        CheckInfo { id: "compatibility", suite: Orders, about: "readings respect the AR order and are adapted to Q", run: Quiver(compatibility) },
        CheckInfo { id: "readings_commutation_class", suite: Orders, about: "readings are exactly the commutation class (n = 4)", run: Quiver(readings_class) },
        CheckInfo { id: "pair_counts", suite: Orders, about: "#minimal = |Supp>=1| - 1 and #non-minimal = |Supp>=2|", run: Quiver(pair_counts) },
        CheckInfo { id: "nonfree_count", suite: Orders, about: "e_a + e_b (b <= n-2) has n-b-1 non-minimal pairs", run: Quiver(nonfree_count) },
        CheckInfo { id: "oracle_agreement", suite: Orders, about: "classifier agrees with exhaustive readings (n = 4)", run: Quiver(oracle_agreement) },
        CheckInfo { id: "non_adapted_remark", suite: Orders, about: "a reduced word outside every adapted class with a never-minimal pair", run: Rank(non_adapted) },
        CheckInfo { id: "double_zero_correspondence", suite: Qaffine, about: "double zeros of D1 at rank n+1 equal those of D2 at rank n", run: Rank(double_zero_corr) },
        CheckInfo { id: "dorey_ii_double_zero", suite: Qaffine, about: "Dorey case (ii) triples are double zeros", run: Rank(dorey_ii_in_double_zero) },
        CheckInfo { id: "dorey_d1_coverage", suite: Qaffine, about: "every pair triple satisfies the untwisted rule", run: Quiver(dorey_d1_coverage) },
        CheckInfo { id: "star_transport", suite: Qaffine, about: "star images of minimal pairs satisfy the twisted rule", run: Quiver(star_transport) },
        CheckInfo { id: "surj_free_multiplicity", suite: Qaffine, about: "denominator zero order 1 for minimal, 2 for non-minimal pairs", run: Quiver(surj_free) },
        CheckInfo { id: "sectional_commuting", suite: Qaffine, about: "no denominator zero between roots on a sectional path", run: Quiver(sectional_commuting) },
    ]
}

quiver_check!(vertex_range, |c| c.ar.check_vertex_range().map_err(|e| e.to_string()));
quiver_check!(nakayama, |c| c.ar.check_nakayama().map_err(|e| e.to_string()));
quiver_check!(mesh, |c| {
    c.ar.check_arrow_rule().map_err(|e| e.to_string())?;
    c.ar.check_mesh().map_err(|e| e.to_string())
});

quiver_check!(simple_coords, |c| {
    let ar = &c.ar;
    for k in ar.datum().vertices() {
        let actual = ar.phi(&ar.datum().simple(k)).expect("simple roots are vertices");
        let want = ar.predicted_simple_coord(k).ok_or_else(|| format!("no prediction for alpha_{k}"))?;
        ensure(want == actual, || format!("alpha_{k} at {actual}, predicted {want}"))?;
    }
    Ok(())
});

quiver_check!(arrow_pairing, |c| {
    let ar = &c.ar;
    for &(s, t) in ar.arrows() {
        let v = ar.datum().pairing(ar.roots()[t].coeffs(), ar.roots()[s].coeffs());
        ensure(v == 1, || format!("arrow {} -> {} has pairing {v}", ar.coords()[s], ar.coords()[t]))?;
    }
    Ok(())
});

quiver_check!(range_lemma, |c| {
    let ar = &c.ar;
    let d = ar.datum();
    for i in d.vertices() {
        for j in d.vertices() {
            let dij = d.distance(i, j) as i32;
            let xj = ar.xi().get(j);
            for p in [xj - dij, xj - 2 * ar.m(j) as i32 + dij] {
                let at = RepCoord::new(i, p);
                ensure(ar.index_of_coord(at).is_some(), || format!("{at} missing (i={i}, j={j})"))?;
            }
        }
    }
    Ok(())
});

quiver_check!(m_values, |c| {
    let ar = &c.ar;
    let n = ar.rank();
    for i in 1..=n - 2 {
        ensure(ar.m(i) == n - 2, || format!("m_{i} = {}", ar.m(i)))?;
    }
    let (a, b) = (ar.xi().get(n - 1), ar.xi().get(n));
    let want = if n % 2 == 1 && b == a + 2 {
        (n - 3, n - 1)
    } else if n % 2 == 1 && a == b + 2 {
        (n - 1, n - 3)
    } else {
        (n - 2, n - 2)
    };
    ensure((ar.m(n - 1), ar.m(n)) == want, || format!("(m_n-1, m_n) = ({}, {}), want {want:?}", ar.m(n - 1), ar.m(n)))
});

quiver_check!(level_pairs, |c| {
    let ar = &c.ar;
    let n = ar.rank();
    let t = ar.t().map_err(|e| e.to_string())? as i32;
    for v in ar.vertices_at_level(n - 1) {
        let p = ar.coords()[v].p;
        let Some(lp) = ar.level_pair_sum(p).map_err(|e| e.to_string())? else { continue };
        let a = lp.a.ok_or_else(|| format!("column {p}: fork roots do not sum to 2e_a"))?;
        ensure(a < n, || format!("column {p}: a = {a}"))?;
        let d = ar.datum();
        let got: BTreeSet<PositiveRoot> = [lp.upper, lp.lower].into();
        let want: BTreeSet<PositiveRoot> = [EpsilonForm::new(a, t), EpsilonForm::new(a, -t)]
            .into_iter()
            .map(|e| d.from_epsilon(e).map_err(|e| e.to_string()))
            .collect::<Result<_, _>>()?;
        ensure(got == want, || format!("column {p}: fork is not <{a},+-{t}>"))?;
    }
    Ok(())
});

quiver_check!(triangle, |c| {
    let ar = &c.ar;
    let n = ar.rank();
    let d = ar.datum();
    let spin: Vec<usize> = (0..ar.len()).filter(|&v| ar.coords()[v].level + 1 >= n).collect();
    for &x in &spin {
        for &y in &spin {
            let (a, b) = (ar.coords()[x], ar.coords()[y]);
            if a.p >= b.p {
                continue;
            }
            let Ok(apex) = ar.triangle_apex(a, b) else { continue };
            let sum = ar.roots()[x].add(&ar.roots()[y]);
            let at = ar.root_at(apex).ok_or_else(|| format!("apex {apex} of {a},{b} is not a vertex"))?;
            ensure(d.is_positive_root(&sum) && at.coeffs() == sum.as_slice(), || {
                format!("apex {apex} of {a},{b} does not carry the sum")
            })?;
        }
    }
    Ok(())
});

fn roots_with_summand(ar: &ARQuiver, signed: i32) -> BTreeSet<RepCoord> {
    (0..ar.len()).filter(|&v| ar.eps(v).has_summand(signed)).map(|v| ar.coords()[v]).collect()
}

quiver_check!(swing_shapes, |c| {
    let ar = &c.ar;
    let n = ar.rank();
    let swings = ar.swings().map_err(|e| e.to_string())?;
    let idx: BTreeSet<usize> = swings.iter().map(|s| s.a).collect();
    ensure(swings.len() == n - 2 && idx == (1..=n - 2).collect(), || format!("swing indices {idx:?}"))?;
    for s in &swings {
        let a = s.a;
        let coords: BTreeSet<RepCoord> = s.coords().into_iter().collect();
        let want = roots_with_summand(ar, a as i32);
        ensure(coords == want && coords.len() == 2 * n - a - 1, || format!("{a}-swing does not hold exactly the e_{a} roots"))?;
        let simple = ar.phi(&ar.datum().simple(a)).expect("vertex");
        ensure(coords.contains(&simple), || format!("{a}-swing misses alpha_{a}"))?;
        let (s0, n1) = (s.s_part.first().level, s.n_part.last().level);
        let type_a = s0 == a && n1 == 1;
        let type_b = s0 == 1 && n1 == a;
        ensure(type_a || type_b, || format!("{a}-swing runs from level {s0} to level {n1}"))?;
    }
    let col = |a: usize| swings.iter().find(|s| s.a == a).map(|s| s.column()).expect("present");
    ensure((col(1) - col(2)).abs() == 2, || format!("1- and 2-swings at columns {} and {}", col(1), col(2)))
});

fn path_summands(ar: &ARQuiver, coords: &[RepCoord]) -> BTreeSet<i32> {
    let mut common: Option<BTreeSet<i32>> = None;
    for &c in coords {
        let e = ar.eps(ar.index_of_coord(c).expect("vertex"));
        let s: BTreeSet<i32> = e.summands().into_iter().collect();
        common = Some(match common {
            None => s,
            Some(x) => x.intersection(&s).copied().collect(),
        });
    }
    common.unwrap_or_default()
}

quiver_check!(maximal_paths, |c| {
    let ar = &c.ar;
    let n = ar.rank();
    let q = ar.quiver();
    let spins_sources = q.is_source(n - 1) && q.is_source(n);
    let spins_sinks = q.is_sink(n - 1) && q.is_sink(n);
    for p in ar.sectional_paths() {
        let end = match p.kind {
            PathKind::S => p.last(),
            PathKind::N => p.first(),
        };
        let fork = end.level + 1 >= n
            && ar.index_of_coord(RepCoord::new(n - 1, end.p)).is_some()
            && ar.index_of_coord(RepCoord::new(n, end.p)).is_some();
        if !fork {
            continue;
        }
        let delta = match p.kind {
            PathKind::S => usize::from(spins_sources),
            PathKind::N => usize::from(spins_sinks),
        };
        let common = path_summands(ar, &p.coords);
        ensure(common.iter().any(|&k| k > 0 && k as usize <= n - 2 + delta), || {
            format!("{:?}-path from {} to {} shares {common:?}", p.kind, p.first(), p.last())
        })?;
    }
    Ok(())
});

quiver_check!(shallow_paths, |c| {
    let ar = &c.ar;
    let n = ar.rank();
    let q = ar.quiver();
    let delta = usize::from((q.is_source(n - 1) && q.is_source(n)) || (q.is_sink(n - 1) && q.is_sink(n)));
    for p in ar.sectional_paths().into_iter().filter(|p| p.shallow) {
        let end = match p.kind {
            PathKind::S => p.first(),
            PathKind::N => p.last(),
        };
        ensure(end.level == 1, || format!("shallow {:?}-path {}..{} misses level 1", p.kind, p.first(), p.last()))?;
        let common = path_summands(ar, &p.coords);
        ensure(common.iter().any(|&k| k < 0 && (-k) as usize <= n - 2 + delta), || {
            format!("shallow {:?}-path {}..{} shares {common:?}", p.kind, p.first(), p.last())
        })?;
    }
    Ok(())
});

/// The vertices reachable from `c` by steps of one kind in both directions.
fn line_through(ar: &ARQuiver, kind: PathKind, c: RepCoord) -> Vec<RepCoord> {
    ar.sectional_paths()
        .into_iter()
        .filter(|p| p.kind == kind && p.coords.contains(&c))
        .flat_map(|p| p.coords)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect()
}

quiver_check!(sigma_kappa, |c| {
    let ar = &c.ar;
    let n = ar.rank();
    let d = ar.datum();
    let sk = ar.sigma_kappa().map_err(|e| e.to_string())?;
    ensure(sk.sigma.len() == n - 2, || format!("|sigma| = {}", sk.sigma.len()))?;
    let idx: Vec<usize> = sk.sigma.iter().map(|s| s.1.ok_or_else(|| format!("{} is in no swing", s.0))).collect::<Result<_, _>>()?;
    let l = idx.iter().position(|&i| i == 1).ok_or("no 1-swing in sigma")?;
    ensure(idx[..=l].windows(2).all(|w| w[0] > w[1]) && idx[l..].windows(2).all(|w| w[0] < w[1]), || {
        format!("sigma swing indices {idx:?} are not reverse unimodal")
    })?;
    let swings = ar.swings().map_err(|e| e.to_string())?;
    for (k, &a) in idx.iter().enumerate() {
        if k == l {
            continue;
        }
        let s = swings.iter().find(|s| s.a == a).expect("swing");
        let (sl, nl) = (s.s_length(n), s.n_length(n));
        let ok = if k < l { nl < sl } else { sl < nl };
        ensure(ok, || format!("{a}-swing at sigma position {}: S-part {sl}, N-part {nl}", k + 1))?;
    }

    ensure(sk.kappa.len() == n - 1, || format!("|kappa| = {}", sk.kappa.len()))?;
    let tp = ar.t_prime().map_err(|e| e.to_string())? as i32;
    let abs: Vec<i32> = sk.kappa.iter().map(|k| k.1.abs()).collect();
    let mut sorted = abs.clone();
    sorted.sort();
    let mut want: Vec<i32> = (2..=n as i32 - 2).chain([tp, tp]).collect();
    want.sort();
    ensure(sorted == want, || format!("kappa indices {abs:?}"))?;
    let ll = abs.windows(2).position(|w| w[0] == tp && w[1] == tp).ok_or_else(|| format!("kappa indices {abs:?} have no t' plateau"))?;
    ensure(abs[..=ll].windows(2).all(|w| w[0] < w[1]) && abs[ll + 1..].windows(2).all(|w| w[0] > w[1]), || {
        format!("kappa indices {abs:?} are not unimodal")
    })?;
    for (s, &(coord, j)) in sk.kappa.iter().enumerate() {
        let kind = if s <= ll { PathKind::S } else { PathKind::N };
        let line = line_through(ar, kind, coord);
        let common = path_summands(ar, if line.is_empty() { std::slice::from_ref(&coord) } else { &line });
        ensure(common.contains(&j), || format!("{kind:?}-path through kappa_{} at {coord} does not share {j}", s + 1))?;
    }
    let roots: Vec<&PositiveRoot> = sk.kappa.iter().map(|k| ar.root_at(k.0).expect("vertex")).collect();
    let sum = |rs: &[&PositiveRoot]| {
        let mut v = vec![0; n];
        for r in rs {
            for (x, y) in v.iter_mut().zip(r.coeffs()) {
                *x += y;
            }
        }
        v
    };
    let eps = |a: usize, b: i32| d.from_epsilon(EpsilonForm::new(a, b)).map(|r| r.coeffs().to_vec()).map_err(|e| e.to_string());
    let two_e1: Vec<i32> = eps(1, 2)?.iter().zip(eps(1, -2)?).map(|(x, y)| x + y).collect();
    ensure(sum(&roots) == two_e1, || "kappa does not sum to 2e_1".into())?;
    let halves: BTreeSet<Vec<i32>> = [sum(&roots[..=ll]), sum(&roots[ll + 1..])].into();
    ensure(halves == [eps(1, tp)?, eps(1, -tp)?].into(), || "kappa halves are not e_1 +- e_t'".into())?;
    let longest = eps(1, 2)?;
    let head = if ar.quiver().is_sink(1) { sum(&roots[..n - 2]) } else { sum(&roots[1..]) };
    ensure(head == longest, || "e_1 + e_2 is not the expected run of kappa".into())
});

quiver_check!(longest_root, |c| {
    let ar = &c.ar;
    let d = ar.datum();
    let want = ar.longest_root_coord().map_err(|e| e.to_string())?;
    let at = ar.phi(&d.from_epsilon(EpsilonForm::new(1, 2)).map_err(|e| e.to_string())?).expect("vertex");
    ensure(at == want, || format!("e_1 + e_2 at {at}, predicted {want}"))
});

quiver_check!(nfree_region, |c| {
    let ar = &c.ar;
    let n = ar.rank();
    let (i, j) = ar.nfree_bounds().map_err(|e| e.to_string())?;
    ensure(i - j == 2 * (n as i32 - 3), || format!("i - j = {}", i - j))?;
    for v in 0..ar.len() {
        let c = ar.coords()[v];
        let nonfree = ar.roots()[v].multiplicity() >= 2;
        let inside = ar.in_nfree_region(c).map_err(|e| e.to_string())?;
        ensure(inside == nonfree, || format!("{c}: region {inside}, multiplicity non-free {nonfree}"))?;
        if nonfree {
            ensure(ar.in_nfree_outer_bound(c).map_err(|e| e.to_string())?, || format!("{c} outside the column bound"))?;
        }
    }
    for p in ar.sectional_paths() {
        for &a in &p.coords {
            for &b in &p.coords {
                let (ra, rb) = (ar.root_at(a).expect("vertex"), ar.root_at(b).expect("vertex"));
                if ra.multiplicity() == 1 && a.level + 1 < n && rb.multiplicity() >= 2 {
                    ensure(a.level < b.level, || format!("free {a} above non-free {b} on one path"))?;
                }
            }
        }
    }
    let swings = ar.swings().map_err(|e| e.to_string())?;
    for v in (0..ar.len()).filter(|&v| ar.roots()[v].multiplicity() >= 2) {
        let e = ar.eps(v);
        let b = e.b as usize;
        let s = swings.iter().find(|s| s.a == b).ok_or_else(|| format!("no {b}-swing"))?;
        let c = ar.coords()[v];
        let (sl, nl) = (s.s_length(n), s.n_length(n));
        let in_s = s.s_part.coords.contains(&c);
        let in_n = s.n_part.coords.contains(&c);
        ensure((in_s && sl >= nl) || (in_n && nl >= sl), || format!("{e} at {c} is not in the longer part of the {b}-swing"))?;
    }
    Ok(())
});

fn strategy_orders(ar: &ARQuiver) -> Result<Vec<(Strategy, ConvexOrder)>, String> {
    Strategy::ALL
        .into_iter()
        .map(|s| canonical_reading(ar, s).map(|o| (s, o)).map_err(|e| format!("{s}: {e}")))
        .collect()
}

quiver_check!(canonical_convex, |c| {
    for (s, o) in strategy_orders(&c.ar)? {
        o.check_convex(c.ar.datum()).map_err(|e| format!("{s}: {e}"))?;
    }
    Ok(())
});

quiver_check!(compatibility, |c| {
    let ar = &c.ar;
    for (s, o) in strategy_orders(ar)? {
        ensure(ar.quiver().is_adapted(o.word()), || format!("{s} word is not adapted"))?;
        for a in ar.roots() {
            for b in ar.roots() {
                if ar.prec(a, b) {
                    ensure(o.position(a) < o.position(b), || format!("{s}: {} should precede {}", c.fmt(a), c.fmt(b)))?;
                }
            }
        }
    }
    Ok(())
});

fn readings_class(c: &Ctx) -> Outcome {
    if c.ar.rank() != 4 {
        return Outcome::Skip;
    }
    wrap((|| {
        let ar = &c.ar;
        let mut words = BTreeSet::new();
        for r in all_readings(ar) {
            crate::orders::reading_order(ar, &r).map_err(|e| e.to_string())?;
            words.insert(r.iter().map(|&v| ar.coords()[v].level).collect::<Vec<_>>());
        }
        let u1 = canonical_reading(ar, Strategy::U1).map_err(|e| e.to_string())?;
        let class = commutation_class(ar.datum(), u1.word());
        ensure(class == words, || format!("{} readings, commutation class of size {}", words.len(), class.len()))
    })())
}

quiver_check!(pair_counts, |c| {
    let vs = c.verdicts()?;
    for g in c.ar.roots().iter().filter(|g| !g.is_simple()) {
        let of_g: Vec<&PairVerdict> = vs.iter().filter(|v| &v.gamma == g).collect();
        let min = of_g.iter().filter(|v| v.verdict == Verdict::Minimal).count();
        let non = of_g.len() - min;
        let (s1, s2) = (g.support_geq(1).len(), g.support_geq(2).len());
        ensure(min == s1 - 1 && non == s2, || format!("{}: {min} minimal, {non} non-minimal; supports {s1}, {s2}", c.fmt(g)))?;
        ensure(of_g.len() as i32 == g.height() - 1, || format!("{}: {} pairs", c.fmt(g), of_g.len()))?;
    }
    Ok(())
});

quiver_check!(nonfree_count, |c| {
    let vs = c.verdicts()?;
    let n = c.ar.rank();
    for g in c.ar.roots().iter().filter(|g| g.multiplicity() >= 2) {
        let e = c.ar.datum().epsilon_form(g).map_err(|e| e.to_string())?;
        let non = vs.iter().filter(|v| &v.gamma == g && v.verdict == Verdict::NonMinimal).count();
        ensure(e.b > 0 && non == n - e.b as usize - 1, || format!("{}: {non} non-minimal pairs", c.fmt(g)))?;
    }
    Ok(())
});

fn oracle_agreement(c: &Ctx) -> Outcome {
    if c.ar.rank() != 4 {
        return Outcome::Skip;
    }
    wrap((|| {
        let ar = &c.ar;
        let oracle = oracle_minimality(ar);
        for v in c.verdicts()? {
            let (a, b, g) = (ar.index_of_root(&v.alpha), ar.index_of_root(&v.beta), ar.index_of_root(&v.gamma));
            let (a, b, g) = (a.expect("vertex"), b.expect("vertex"), g.expect("vertex"));
            let minimal = oracle[&(g, a.min(b), a.max(b))];
            ensure(minimal == (v.verdict == Verdict::Minimal), || {
                format!("{} = {} + {}: classifier {:?}, oracle minimal {minimal}", c.fmt(&v.gamma), c.fmt(&v.alpha), c.fmt(&v.beta), v.verdict)
            })?;
        }
        Ok(())
    })())
}

/// The fixed D4 word that is reduced but adapted to no orientation.
pub const NON_ADAPTED_WORD: [usize; 12] = [1, 2, 3, 1, 2, 4, 1, 2, 3, 1, 2, 4];

pub fn non_adapted_check() -> Res {
    let d4 = CartanDatum::d(4).map_err(|e| e.to_string())?;
    let w = NON_ADAPTED_WORD;
    ensure(d4.is_reduced(&w), || "word is not reduced".into())?;
    let order = ConvexOrder::from_word(&d4, &w).map_err(|e| e.to_string())?;
    let class = commutation_class(&d4, &w);
    for q in DynkinQuiver::all_orientations(&d4) {
        ensure(!class.iter().any(|x| q.is_adapted(x)), || format!("adapted to {}", q.arrow_string()))?;
    }
    let a23 = d4.root(vec![0, 1, 1, 0]).map_err(|e| e.to_string())?;
    let a4 = d4.simple(4);
    let g = d4.root(vec![0, 1, 1, 1]).map_err(|e| e.to_string())?;
    let chain = [a23.clone(), d4.simple(3), g.clone(), d4.root(vec![0, 1, 0, 1]).map_err(|e| e.to_string())?, a4.clone()];
    ensure(chain.windows(2).all(|p| order.position(&p[0]) < order.position(&p[1])), || "unexpected order of roots".into())?;
    for x in &class {
        let o = ConvexOrder::from_word(&d4, x).map_err(|e| e.to_string())?;
        ensure(!o.minimal_wrt(&d4, (&a23, &a4), &g), || format!("pair is minimal in {x:?}"))?;
    }
    Ok(())
}

fn non_adapted(n: usize) -> Outcome {
    if n != 4 {
        return Outcome::Skip;
    }
    wrap(non_adapted_check())
}

fn double_zero_corr(n: usize) -> Outcome {
    wrap((|| {
        let d1 = double_zero_set(Family::D1, n);
        let d1_direct = double_zero_set_from_denominators(Family::D1, n).map_err(|e| e.to_string())?;
        ensure(d1 == d1_direct, || format!("D1 rank {n}: formula and denominators disagree"))?;
        let d2 = double_zero_set(Family::D2, n - 1);
        let d2_direct = double_zero_set_from_denominators(Family::D2, n - 1).map_err(|e| e.to_string())?;
        ensure(d2 == d2_direct, || format!("D2 rank {}: formula and denominators disagree", n - 1))?;
        ensure(d1 == d2, || format!("D1 rank {n} and D2 rank {} differ", n - 1))
    })())
}

/// Triples `(i, j, i + j)` admitted by Dorey case (ii) at rank `n`.
pub fn dorey_ii_triples(n: usize) -> Vec<(usize, usize, usize, i32)> {
    let mut out = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            let Some(k) = (2 * n - 2).checked_sub(i + j) else { continue };
            if i + j < n || k == 0 || i.max(j).max(k) + 2 > n {
                continue;
            }
            let t = HomTriple::from_minus_q((i, -(j as i32)), (j, i as i32), (k, 0));
            if dorey_d1(n, &t).map(|v| v.case == Some(DoreyCase::II)).unwrap_or(false) {
                out.push((i, j, k, (i + j) as i32));
            }
        }
    }
    out
}

fn dorey_ii_in_double_zero(n: usize) -> Outcome {
    wrap((|| {
        let set = double_zero_set(Family::D1, n);
        let triples = dorey_ii_triples(n);
        ensure(!triples.is_empty(), || "no case (ii) triples".into())?;
        for (i, j, k, s) in triples {
            ensure(set.contains(&(i, j, s)), || format!("({i},{j},{k}) with s = {s} is not a double zero"))?;
            let d = denom_d1(n, i, j).map_err(|e| e.to_string())?;
            ensure(zero_multiplicity(&d, SpectralParam::mq(s)) == 2, || format!("d_{i},{j} at (-q)^{s}"))?;
        }
        Ok(())
    })())
}

quiver_check!(dorey_d1_coverage, |c| {
    let n = c.ar.rank();
    for v in c.verdicts()? {
        let t = pair_to_triple(&c.ar, &v.gamma, (&v.alpha, &v.beta)).map_err(|e| e.to_string())?;
        let verdict = dorey_d1(n, &t).map_err(|e| e.to_string())?;
        ensure(verdict.is_yes(), || format!("{} = {} + {}: triple {t} fails", c.fmt(&v.gamma), c.fmt(&v.alpha), c.fmt(&v.beta)))?;
        if v.verdict == Verdict::NonMinimal {
            ensure(verdict.case == Some(DoreyCase::II), || format!("non-minimal {t} matched case {:?}", verdict.case))?;
        }
    }
    Ok(())
});

quiver_check!(star_transport, |c| {
    let n = c.ar.rank() - 1;
    for v in c.verdicts()?.iter().filter(|v| v.verdict == Verdict::Minimal) {
        let t = pair_to_triple(&c.ar, &v.gamma, (&v.alpha, &v.beta)).map_err(|e| e.to_string())?;
        let st = star_triple(n, &t).map_err(|e| e.to_string())?;
        let verdict = dorey_d2(n, &st).map_err(|e| e.to_string())?;
        ensure(verdict.is_yes(), || format!("{} = {} + {}: star image {st} fails", c.fmt(&v.gamma), c.fmt(&v.alpha), c.fmt(&v.beta)))?;
    }
    Ok(())
});

quiver_check!(surj_free, |c| {
    for v in c.verdicts()? {
        let ok = multiplicity_theorem_check(&c.ar, (&v.alpha, &v.beta), v.verdict).map_err(|e| e.to_string())?;
        ensure(ok, || format!("{} = {} + {} ({:?})", c.fmt(&v.gamma), c.fmt(&v.alpha), c.fmt(&v.beta), v.verdict))?;
    }
    Ok(())
});

quiver_check!(sectional_commuting, |c| {
    let ar = &c.ar;
    let n = ar.rank();
    let mut pairs: HashSet<(RepCoord, RepCoord)> = HashSet::new();
    for p in ar.sectional_paths() {
        for (x, &a) in p.coords.iter().enumerate() {
            for &b in &p.coords[x + 1..] {
                pairs.insert((a, b));
            }
        }
    }
    for v in ar.vertices_at_level(n - 1) {
        let a = ar.coords()[v];
        let b = RepCoord::new(n, a.p);
        if ar.index_of_coord(b).is_some() {
            pairs.insert((a, b));
        }
    }
    let mut pairs: Vec<_> = pairs.into_iter().collect();
    pairs.sort();
    for (a, b) in pairs {
        let ok = same_path_commuting_check(ar, a, b).map_err(|e| e.to_string())?;
        ensure(ok, || format!("{a} and {b} on one sectional path hit a denominator zero"))?;
    }
    // all roots with summand -e_a, pairwise
    for a in 1..=n - 2 {
        let set: Vec<RepCoord> = roots_with_summand(ar, -(a as i32)).into_iter().collect();
        ensure(set.len() == a - 1, || format!("{} roots with summand -e_{a}", set.len()))?;
        for (x, &u) in set.iter().enumerate() {
            for &w in &set[x + 1..] {
                let d = denom_d1(n, u.level, w.level).map_err(|e| e.to_string())?;
                let dp = u.p - w.p;
                ensure(
                    zero_multiplicity(&d, SpectralParam::mq(dp)) == 0 && zero_multiplicity(&d, SpectralParam::mq(-dp)) == 0,
                    || format!("-e_{a} roots at {u} and {w} hit a denominator zero"),
                )?;
            }
        }
    }
    Ok(())
});

#[derive(Debug, Clone)]
pub struct SuiteOptions {
    pub rank_min: usize,
    pub rank_max: usize,
    pub suites: BTreeSet<Suite>,
    /// Worker threads; 0 uses the rayon default.
    pub jobs: usize,
    pub timing: bool,
    /// Restrict to these check ids when non-empty.
    pub only: BTreeSet<String>,
}

impl SuiteOptions {
    pub fn new(rank_max: usize, suites: impl IntoIterator<Item = Suite>) -> Self {
        SuiteOptions { rank_min: 4, rank_max, suites: suites.into_iter().collect(), jobs: 0, timing: false, only: BTreeSet::new() }
    }
}

fn selected(opts: &SuiteOptions) -> Vec<(usize, CheckInfo)> {
    check_catalog()
        .into_iter()
        .enumerate()
        .filter(|(_, c)| opts.suites.contains(&c.suite) && (opts.only.is_empty() || opts.only.contains(c.id)))
        .collect()
}

fn record(check: &CheckInfo, n: usize, q: Option<&DynkinQuiver>, outcome: Outcome, elapsed: Option<f64>) -> CheckRecord {
    let (status, counterexample) = match outcome {
        Outcome::Pass => (Status::Pass, None),
        Outcome::Skip => (Status::Skip, None),
        Outcome::Fail(e) => (Status::Fail, Some(e)),
    };
    CheckRecord {
        check_id: check.id.to_string(),
        n,
        mask: q.map(|q| q.mask()),
        orientation: q.map(|q| q.arrow_string()),
        status,
        counterexample,
        elapsed_ms: elapsed,
    }
}

fn timed<T>(on: bool, f: impl FnOnce() -> T) -> (T, Option<f64>) {
    let start = Instant::now();
    let out = f();
    (out, on.then(|| start.elapsed().as_secs_f64() * 1e3))
}

/// Runs every selected check over all orientations of `D_n` for each rank
/// in range. Records are ordered by `(n, mask, catalog position)`.
pub fn run_suite(opts: &SuiteOptions) -> VerifyReport {
    let checks = selected(opts);
    let mut units: Vec<(usize, Option<u64>)> = Vec::new();
    for n in opts.rank_min.max(4)..=opts.rank_max {
        units.push((n, None));
        for m in 0..(1u64 << (n - 1)) {
            units.push((n, Some(m)));
        }
    }
    let work = || -> Vec<(usize, Option<u64>, usize, CheckRecord)> {
        units
            .par_iter()
            .flat_map_iter(|&(n, mask)| {
                let mut out = Vec::new();
                let datum = CartanDatum::d(n).expect("n >= 4");
                match mask {
                    None => {
                        for (pos, c) in &checks {
                            if let CheckFn::Rank(f) = c.run {
                                let (o, t) = timed(opts.timing, || f(n));
                                out.push((n, None, *pos, record(c, n, None, o, t)));
                            }
                        }
                    }
                    Some(m) => {
                        let q = DynkinQuiver::from_mask(&datum, m).expect("mask in range");
                        let built = ARQuiver::from_quiver(&q);
                        let ctx = built.map(Ctx::new);
                        for (pos, c) in &checks {
                            let CheckFn::Quiver(f) = c.run else { continue };
                            let (o, t) = match &ctx {
                                Ok(ctx) => timed(opts.timing, || f(ctx)),
                                Err(e) => (Outcome::Fail(format!("build failed: {e}")), None),
                            };
                            out.push((n, Some(m), *pos, record(c, n, Some(&q), o, t)));
                        }
                    }
                }
                out
            })
            .collect()
    };
    let mut rows = if opts.jobs > 0 {
        match rayon::ThreadPoolBuilder::new().num_threads(opts.jobs).build() {
            Ok(pool) => pool.install(work),
            Err(_) => work(),
        }
    } else {
        work()
    };
    rows.sort_by_key(|r| (r.0, r.1.map_or(0, |m| m + 1), r.2));
    VerifyReport { records: rows.into_iter().map(|r| r.3).collect() }
}

/// Flips one arrow of a built AR quiver and expects the mesh check to reject
/// it, naming a coordinate.
pub fn fault_injection_self_test(ar: &ARQuiver) -> Result<String, String> {
    if ar.arrows().is_empty() {
        return Err("no arrows to flip".into());
    }
    let broken = ar.with_flipped_arrow(0);
    let outcome = mesh(&Ctx::new(broken));
    match outcome {
        Outcome::Fail(msg) if msg.contains('(') => Ok(msg),
        Outcome::Fail(msg) => Err(format!("failure without a coordinate: {msg}")),
        _ => Err("flipped arrow went unnoticed".into()),
    }
}
