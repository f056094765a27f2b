use serde::Serialize;

use super::{ARQuiver, ArError, RepCoord};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum PathKind {
    S,
    N,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SectionalPath {
    pub kind: PathKind,
    pub coords: Vec<RepCoord>,
    pub maximal: bool,
    pub shallow: bool,
}

impl SectionalPath {
    pub fn first(&self) -> RepCoord {
        self.coords[0]
    }

    pub fn last(&self) -> RepCoord {
        *self.coords.last().expect("paths are non-empty")
    }
}

/// An S-part into the fork at levels `n-1`/`n`, followed by an N-part out.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Swing {
    pub s_part: SectionalPath,
    pub fork: (RepCoord, RepCoord),
    pub n_part: SectionalPath,
    pub a: usize,
}

impl Swing {
    pub fn coords(&self) -> Vec<RepCoord> {
        let mut out = self.s_part.coords.clone();
        out.push(self.fork.0);
        out.push(self.fork.1);
        out.extend(self.n_part.coords.iter().copied());
        out
    }

    pub fn column(&self) -> i32 {
        self.fork.0.p
    }

    pub fn s_length(&self, n: usize) -> usize {
        n - 2 - self.s_part.first().level
    }

    pub fn n_length(&self, n: usize) -> usize {
        n - 2 - self.n_part.last().level
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SigmaKappa {
    /// Level `n-1` roots other than the two spin simple roots, by decreasing
    /// column, with the index of the swing containing each.
    pub sigma: Vec<(RepCoord, Option<usize>)>,
    /// Level 1 roots by decreasing column, with their signed second index.
    pub kappa: Vec<(RepCoord, i32)>,
}

impl ARQuiver {
    fn at(&self, level: usize, p: i32) -> Option<RepCoord> {
        let c = RepCoord::new(level, p);
        self.index_of_coord(c).map(|_| c)
    }

    fn spin_aware(&self) -> bool {
        self.datum().is_type_d()
    }

    fn step_succ(&self, kind: PathKind, c: RepCoord) -> Vec<RepCoord> {
        let n = self.rank();
        let (i, p) = (c.level, c.p);
        let cands: Vec<(usize, i32)> = match (kind, self.spin_aware()) {
            (PathKind::S, true) if i + 2 < n => vec![(i + 1, p + 1)],
            (PathKind::S, true) if i + 2 == n => vec![(n - 1, p + 1), (n, p + 1)],
            (PathKind::S, true) => vec![],
            (PathKind::N, true) if (2..n).contains(&i) => vec![(i - 1, p + 1)],
            (PathKind::N, true) if i == n => vec![(n - 2, p + 1)],
            (PathKind::N, true) => vec![],
            (PathKind::S, false) if i < n => vec![(i + 1, p + 1)],
            (PathKind::N, false) if i > 1 => vec![(i - 1, p + 1)],
            _ => vec![],
        };
        cands.into_iter().filter_map(|(l, q)| self.at(l, q)).collect()
    }

    fn step_pred(&self, kind: PathKind, c: RepCoord) -> Vec<RepCoord> {
        let n = self.rank();
        let (i, p) = (c.level, c.p);
        let cands: Vec<(usize, i32)> = match (kind, self.spin_aware()) {
            (PathKind::S, true) if (2..n).contains(&i) => vec![(i - 1, p - 1)],
            (PathKind::S, true) if i == n => vec![(n - 2, p - 1)],
            (PathKind::S, true) => vec![],
            (PathKind::N, true) if i + 2 < n => vec![(i + 1, p - 1)],
            (PathKind::N, true) if i + 2 == n => vec![(n - 1, p - 1), (n, p - 1)],
            (PathKind::N, true) => vec![],
            (PathKind::S, false) if i > 1 => vec![(i - 1, p - 1)],
            (PathKind::N, false) if i < n => vec![(i + 1, p - 1)],
            _ => vec![],
        };
        cands.into_iter().filter_map(|(l, q)| self.at(l, q)).collect()
    }

    /// All maximal S- and N-sectional paths with at least one arrow. A path
    /// through the fork at levels `n-1`/`n` appears once per branch.
    pub fn sectional_paths(&self) -> Vec<SectionalPath> {
        let n = self.rank();
        let mut out = Vec::new();
        for kind in [PathKind::S, PathKind::N] {
            for &start in self.coords() {
                if !self.step_pred(kind, start).is_empty() || self.step_succ(kind, start).is_empty() {
                    continue;
                }
                let mut stack = vec![vec![start]];
                while let Some(path) = stack.pop() {
                    let next = self.step_succ(kind, *path.last().expect("non-empty"));
                    if next.is_empty() {
                        let shallow = self.spin_aware()
                            && match kind {
                                PathKind::S => path.last().expect("non-empty").level + 1 < n,
                                PathKind::N => path[0].level + 1 < n,
                            };
                        out.push(SectionalPath { kind, coords: path, maximal: true, shallow });
                        continue;
                    }
                    for w in next.into_iter().rev() {
                        let mut longer = path.clone();
                        longer.push(w);
                        stack.push(longer);
                    }
                }
            }
        }
        out.sort_by(|a, b| (a.kind as u8, &a.coords).cmp(&(b.kind as u8, &b.coords)));
        out
    }

    /// Maximal swings, by decreasing fork column.
    pub fn swings(&self) -> Result<Vec<Swing>, ArError> {
        self.require_type_d()?;
        let n = self.rank();
        let mut cols: Vec<i32> = self.vertices_at_level(n - 1).iter().map(|&v| self.coords()[v].p).collect();
        cols.sort_by(|a, b| b.cmp(a));
        let mut out = Vec::new();
        for u in cols {
            let (Some(upper), Some(lower)) = (self.at(n - 1, u), self.at(n, u)) else { continue };
            let (Some(s_end), Some(n_start)) = (self.at(n - 2, u - 1), self.at(n - 2, u + 1)) else { continue };
            let mut s_coords = vec![s_end];
            while let Some(&prev) = self.step_pred(PathKind::S, s_coords[0]).first() {
                s_coords.insert(0, prev);
            }
            let mut n_coords = vec![n_start];
            while let Some(&next) = self.step_succ(PathKind::N, *n_coords.last().expect("non-empty")).first() {
                n_coords.push(next);
            }
            let a = self.level_pair_sum(u)?.and_then(|lp| lp.a).ok_or_else(|| ArError::Invariant {
                check: "swing",
                coord: upper,
                detail: "fork roots do not sum to 2e_a".into(),
            })?;
            out.push(Swing {
                s_part: SectionalPath { kind: PathKind::S, coords: s_coords, maximal: false, shallow: false },
                fork: (upper, lower),
                n_part: SectionalPath { kind: PathKind::N, coords: n_coords, maximal: false, shallow: false },
                a,
            });
        }
        Ok(out)
    }

    pub fn sigma_kappa(&self) -> Result<SigmaKappa, ArError> {
        self.require_type_d()?;
        let n = self.rank();
        let datum = self.datum();
        let swings = self.swings()?;
        let skip = [datum.simple(n - 1), datum.simple(n)];
        let mut sigma: Vec<(RepCoord, Option<usize>)> = self
            .vertices_at_level(n - 1)
            .into_iter()
            .filter(|&v| !skip.contains(&self.roots()[v]))
            .map(|v| {
                let c = self.coords()[v];
                (c, swings.iter().find(|s| s.fork.0 == c).map(|s| s.a))
            })
            .collect();
        sigma.sort_by(|a, b| b.0.p.cmp(&a.0.p));
        let mut kappa: Vec<(RepCoord, i32)> =
            self.vertices_at_level(1).into_iter().map(|v| (self.coords()[v], self.eps(v).b)).collect();
        kappa.sort_by(|a, b| b.0.p.cmp(&a.0.p));
        Ok(SigmaKappa { sigma, kappa })
    }

    /// Whether two distinct vertices lie on one sectional path, counting the
    /// two fork vertices of a column as joined.
    pub fn on_common_sectional_path(&self, a: RepCoord, b: RepCoord) -> bool {
        if a == b {
            return false;
        }
        let n = self.rank();
        if self.spin_aware() && a.p == b.p && a.level + 1 >= n && b.level + 1 >= n {
            return true;
        }
        self.sectional_paths().iter().any(|p| p.coords.contains(&a) && p.coords.contains(&b))
    }
}

#[cfg(test)]
mod tests {
    use super::super::tests::example1;
    use super::*;
    use crate::root_system::EpsilonForm;

    #[test]
    fn example1_swings() {
        let ar = example1();
        let swings = ar.swings().unwrap();
        assert_eq!(swings.len(), 2);
        assert_eq!(swings[0].a, 2);
        assert_eq!(swings[1].a, 1);
        let one: Vec<EpsilonForm> = swings[1]
            .coords()
            .iter()
            .map(|&c| ar.eps(ar.index_of_coord(c).unwrap()))
            .collect();
        assert_eq!(one.len(), 6);
        assert!(one.iter().all(|e| e.a == 1));
    }

    #[test]
    fn example1_paths() {
        let ar = example1();
        let paths = ar.sectional_paths();
        assert!(paths.iter().all(|p| !p.shallow));
        let minus4: Vec<RepCoord> = [(1, -2), (2, -1), (3, 0)].iter().map(|&(l, p)| RepCoord::new(l, p)).collect();
        assert!(paths.iter().any(|p| p.kind == PathKind::S && p.coords == minus4));
        assert!(ar.on_common_sectional_path(RepCoord::new(3, -4), RepCoord::new(1, -2)));
        assert!(!ar.on_common_sectional_path(RepCoord::new(1, -6), RepCoord::new(1, -2)));
    }

    #[test]
    fn example1_sigma_kappa() {
        let ar = example1();
        let sk = ar.sigma_kappa().unwrap();
        assert_eq!(sk.sigma, vec![(RepCoord::new(3, -2), Some(2)), (RepCoord::new(3, -4), Some(1))]);
        let js: Vec<i32> = sk.kappa.iter().map(|k| k.1).collect();
        assert_eq!(js, vec![-4, 4, -2]);
    }
}
