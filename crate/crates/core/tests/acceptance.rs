use std::collections::HashSet;
use std::io::Write;
use std::time::{Duration, Instant};

use arq_core::orders::{canonical_reading, classify_all, commutation_class, oracle_classify, ConvexOrder, Strategy, Verdict};
use arq_core::qaffine::{
    double_zero_set, dorey_d1, dorey_d2, multiplicity_theorem_check, pair_to_triple, same_path_commuting_check, star_triple, Family,
};
use arq_core::verify::{dorey_ii_triples, run_suite, Status, Suite, SuiteOptions, NON_ADAPTED_WORD};
use arq_core::{ARQuiver, CartanDatum, DynkinQuiver, EpsilonForm, RepCoord};

type Res = Result<(), String>;

fn line(s: String) {
    let _ = writeln!(std::io::stderr(), "{s}");
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Res {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn example1() -> ARQuiver {
    let d = CartanDatum::d(4).unwrap();
    let q = DynkinQuiver::parse(&d, "2>1,3>2,2>4").unwrap();
    ARQuiver::build(&q, &q.height_function(3, 0).unwrap()).unwrap()
}

fn quivers(n: usize) -> Vec<ARQuiver> {
    let d = CartanDatum::d(n).unwrap();
    DynkinQuiver::all_orientations(&d).iter().map(|q| ARQuiver::from_quiver(q).unwrap()).collect()
}

fn all_quivers(lo: usize, hi: usize) -> Vec<ARQuiver> {
    (lo..=hi).flat_map(quivers).collect()
}

fn tag(ar: &ARQuiver) -> String {
    format!("D{} {}", ar.rank(), ar.quiver().arrow_string())
}

fn c1_example_grid() -> Res {
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
    ensure(ar.len() == 12, || format!("{} vertices", ar.len()))?;
    for ((i, p), (a, b)) in expected {
        let r = ar.root_at(RepCoord::new(i, p)).ok_or_else(|| format!("no vertex at ({i},{p})"))?;
        let e = ar.datum().epsilon_form(r).map_err(|e| e.to_string())?;
        ensure(e == EpsilonForm::new(a, b), || format!("({i},{p}) carries {e}"))?;
    }
    Ok(())
}

fn c2_canonical_orders() -> Res {
    let ar = example1();
    let expect = [
        (Strategy::U1, "<3,-4> <2,-4> <1,-4> <2,3> <2,-3> <1,2> <2,4> <1,-3> <1,3> <1,4> <1,-2> <3,4>"),
        (Strategy::U2, "<3,-4> <2,-4> <1,-4> <2,-3> <2,3> <1,2> <2,4> <1,3> <1,-3> <1,4> <1,-2> <3,4>"),
        (Strategy::L1, "<3,-4> <2,-4> <2,-3> <2,3> <1,-4> <1,2> <1,-3> <1,3> <2,4> <1,4> <3,4> <1,-2>"),
        (Strategy::L2, "<3,-4> <2,-4> <2,3> <2,-3> <1,-4> <1,2> <1,3> <1,-3> <2,4> <1,4> <3,4> <1,-2>"),
    ];
    for (s, want) in expect {
        let o = canonical_reading(&ar, s).map_err(|e| e.to_string())?;
        let got = o.roots().iter().map(|r| ar.datum().format_root(r)).collect::<Vec<_>>().join(" ");
        ensure(got == want, || format!("{s}: {got}"))?;
    }
    Ok(())
}

fn c3_structure() -> Res {
    let report = run_suite(&SuiteOptions::new(7, [Suite::Structure]));
    let builds: HashSet<(usize, Option<u64>)> = report.records.iter().map(|r| (r.n, r.mask)).collect();
    ensure(builds.len() == 120, || format!("{} builds", builds.len()))?;
    ensure(report.count(Status::Skip) == 0, || "skipped structure checks".into())?;
    let first = report.failures().next().map(|r| {
        format!("{} n={} {:?}: {}", r.check_id, r.n, r.orientation, r.counterexample.clone().unwrap_or_default())
    });
    first.map_or(Ok(()), Err)
}

fn c4_pair_counts() -> Res {
    for ar in all_quivers(4, 6) {
        let n = ar.rank();
        for g in ar.roots().iter().filter(|g| !g.is_simple()) {
            let vs = classify_all(&ar, g).map_err(|e| e.to_string())?;
            let min = vs.iter().filter(|v| v.verdict == Verdict::Minimal).count();
            let non = vs.len() - min;
            let (s1, s2) = (g.support_geq(1).len(), g.support_geq(2).len());
            let label = ar.datum().format_root(g);
            ensure(min == s1 - 1 && non == s2, || format!("{}: {label} has {min} minimal, {non} non-minimal", tag(&ar)))?;
            let e = ar.datum().epsilon_form(g).map_err(|e| e.to_string())?;
            if e.b > 0 && e.b as usize <= n - 2 {
                ensure(non == n - e.b as usize - 1, || format!("{}: {label} has {non} non-minimal", tag(&ar)))?;
            }
        }
    }
    Ok(())
}

fn c5_oracle() -> Res {
    for ar in quivers(4) {
        for g in ar.roots().iter().filter(|g| !g.is_simple()) {
            for v in classify_all(&ar, g).map_err(|e| e.to_string())? {
                let o = oracle_classify(&ar, g, (&v.alpha, &v.beta)).map_err(|e| e.to_string())?;
                ensure(o.verdict == v.verdict, || {
                    let f = |r| ar.datum().format_root(r);
                    format!("{}: {} = {} + {}", tag(&ar), f(g), f(&v.alpha), f(&v.beta))
                })?;
            }
        }
    }
    Ok(())
}

fn c6_multiplicity() -> Res {
    for ar in all_quivers(4, 6) {
        for g in ar.roots().iter().filter(|g| !g.is_simple()) {
            for v in classify_all(&ar, g).map_err(|e| e.to_string())? {
                let ok = multiplicity_theorem_check(&ar, (&v.alpha, &v.beta), v.verdict).map_err(|e| e.to_string())?;
                ensure(ok, || format!("{}: pair of {} ({:?})", tag(&ar), ar.datum().format_root(g), v.verdict))?;
            }
        }
    }
    Ok(())
}

fn c7_dorey() -> Res {
    for ar in all_quivers(4, 6) {
        let n = ar.rank();
        for g in ar.roots().iter().filter(|g| !g.is_simple()) {
            for v in classify_all(&ar, g).map_err(|e| e.to_string())? {
                let t = pair_to_triple(&ar, g, (&v.alpha, &v.beta)).map_err(|e| e.to_string())?;
                let d1 = dorey_d1(n, &t).map_err(|e| e.to_string())?;
                ensure(d1.is_yes(), || format!("{}: untwisted rule rejects {t}", tag(&ar)))?;
                if v.verdict == Verdict::Minimal {
                    let st = star_triple(n - 1, &t).map_err(|e| e.to_string())?;
                    let d2 = dorey_d2(n - 1, &st).map_err(|e| e.to_string())?;
                    ensure(d2.is_yes(), || format!("{}: twisted rule rejects {st} (from {t})", tag(&ar)))?;
                }
            }
        }
    }
    Ok(())
}

fn c8_double_zeros() -> Res {
    for n in 3..=8 {
        let (d1, d2) = (double_zero_set(Family::D1, n + 1), double_zero_set(Family::D2, n));
        ensure(d1 == d2, || format!("D1 rank {} vs D2 rank {n}", n + 1))?;
    }
    for n in 4..=9 {
        let set = double_zero_set(Family::D1, n);
        for (i, j, k, s) in dorey_ii_triples(n) {
            ensure(set.contains(&(i, j, s)), || format!("rank {n}: ({i},{j},{k}) s={s}"))?;
        }
    }
    Ok(())
}

fn c9_non_adapted() -> Res {
    let d4 = CartanDatum::d(4).unwrap();
    let w = NON_ADAPTED_WORD;
    ensure(d4.is_reduced(&w), || "not reduced".into())?;
    let class = commutation_class(&d4, &w);
    for q in DynkinQuiver::all_orientations(&d4) {
        ensure(!class.iter().any(|x| q.is_adapted(x)), || format!("adapted to {}", q.arrow_string()))?;
    }
    let alpha = d4.root(vec![0, 1, 1, 0]).map_err(|e| e.to_string())?;
    let beta = d4.simple(4);
    let gamma = d4.root(vec![0, 1, 1, 1]).map_err(|e| e.to_string())?;
    for x in &class {
        let o = ConvexOrder::from_word(&d4, x).map_err(|e| e.to_string())?;
        ensure(!o.minimal_wrt(&d4, (&alpha, &beta), &gamma), || format!("minimal in {x:?}"))?;
    }
    Ok(())
}

fn c10_sectional() -> Res {
    let mut checked = 0usize;
    for ar in all_quivers(4, 6) {
        let mut pairs = HashSet::new();
        for p in ar.sectional_paths() {
            for (x, &a) in p.coords.iter().enumerate() {
                for &b in &p.coords[x + 1..] {
                    pairs.insert((a, b));
                }
            }
        }
        for (a, b) in pairs {
            let ok = same_path_commuting_check(&ar, a, b).map_err(|e| e.to_string())?;
            ensure(ok, || format!("{}: {a} and {b}", tag(&ar)))?;
            checked += 1;
        }
    }
    ensure(checked > 0, || "no pairs".into())
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Res, Duration); 10] = [
        ("1 example grid", c1_example_grid, Duration::from_millis(1)),
        ("2 canonical orders", c2_canonical_orders, Duration::from_millis(1)),
        ("3 structure suite n<=7", c3_structure, Duration::from_secs(10)),
        ("4 pair counts n<=6", c4_pair_counts, Duration::from_secs(30)),
        ("5 oracle equivalence D4", c5_oracle, Duration::from_secs(60)),
        ("6 denominator multiplicity n<=6", c6_multiplicity, Duration::from_secs(10)),
        ("7 Dorey coverage n<=6", c7_dorey, Duration::from_secs(30)),
        ("8 twisted/untwisted double zeros", c8_double_zeros, Duration::from_secs(5)),
        ("9 non-adapted word", c9_non_adapted, Duration::from_secs(10)),
        ("10 sectional commutation n<=6", c10_sectional, Duration::from_secs(10)),
    ];
    let mut failed = Vec::new();
    for (name, f, budget) in criteria {
        let t = Instant::now();
        let res = f();
        let dt = t.elapsed();
        let res = res.and_then(|_| ensure(dt <= budget, || format!("took {dt:?}, budget {budget:?}")));
        match &res {
            Ok(()) => line(format!("PASS  {name}  ({dt:.2?})")),
            Err(e) => {
                line(format!("FAIL  {name}  ({dt:.2?}): {e}"));
                failed.push(name);
            }
        }
    }
    assert!(failed.is_empty(), "failed: {failed:?}");
}
