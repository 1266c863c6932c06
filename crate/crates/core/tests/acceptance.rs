//! Acceptance criteria, one PASS/FAIL line each, with wall-clock limits.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::*;
use mfsing_core::koszul::{
    act_point, identity_cone_with_contraction, pull_push_comparison, rhom_trivial_dims, trivial_module, u_cone_check,
};
use mfsing_core::mf::{box_product, hom_cohomology_dims, hom_diff, GradedHom, HomComplex};
use mfsing_core::orlov::{contraction_witness, fold_monoidality_check, search_equivalence, stable_dims_match, stabilize, EquivalenceSearch};
use mfsing_core::poly::parse_poly;
use mfsing_core::sing::{is_perfect, mf_perfectness, milnor_number, point_case_report, thom_sebastiani_check, u_torsion_order_point};
use mfsing_core::{Dim, Field, KoszulModule, Limits, RingCtx, StableDims};

type Check = std::result::Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond { Ok(()) } else { Err(msg()) }
}

fn err(e: mfsing_core::Error) -> String {
    e.to_string()
}

fn mf_validation_and_hom_calculus() -> Check {
    let corpus = mf_corpus();
    ensure(corpus.len() >= 20, || format!("corpus has {} factorizations", corpus.len()))?;
    for e in &corpus {
        e.validate().map_err(err)?;
        let id = GradedHom::identity(e);
        let two_f = id.scale_poly(&(e.potential() + e.potential()));
        ensure(hom_diff(&GradedHom::delta(e)).map_err(err)? == two_f, || format!("d(δ) ≠ 2f·Id on {:?}", e.d0()))?;
    }
    let mut pairs = 0;
    for e in &corpus {
        for f in corpus.iter().filter(|f| f.ctx() == e.ctx() && f.potential() == e.potential()) {
            let hc = HomComplex::new(e, f).map_err(err)?;
            ensure(hc.d_odd.mul(&hc.d_even).map_err(err)?.is_zero(), || "d² ≠ 0 from even".into())?;
            ensure(hc.d_even.mul(&hc.d_odd).map_err(err)?.is_zero(), || "d² ≠ 0 from odd".into())?;
            pairs += 1;
        }
    }
    Ok(format!("{} factorizations, {pairs} Hom complexes", corpus.len()))
}

fn point_case_au_pattern() -> Check {
    let triv = rhom_trivial_dims(&trivial_module(Field::Rational), 5).map_err(err)?;
    for (&n, &d) in &triv {
        let want = usize::from((0..=10).contains(&n) && n % 2 == 0);
        ensure(d == want, || format!("trivial: degree {n} has dimension {d}, expected {want}"))?;
    }
    let k = point_corpus(Field::Rational).into_iter().find(|(n, _)| n == "K").unwrap().1;
    let kd = rhom_trivial_dims(&k, 5).map_err(err)?;
    for (&n, &d) in &kd {
        ensure(d == usize::from(n == -1), || format!("K: degree {n} has dimension {d}"))?;
    }
    Ok(format!("window [{}, {}]", triv.keys().next().unwrap(), triv.keys().last().unwrap()))
}

fn cone_of_u() -> Check {
    let mut names = Vec::new();
    for (name, m) in point_corpus(Field::Rational).into_iter().filter(|(n, _)| n != "T_3") {
        let r = u_cone_check(&m, 5).map_err(err)?;
        ensure(r.agrees(), || format!("{name}: cone {:?} vs pull-push {:?}", r.cone, r.pull_push))?;
        names.push(format!("{name} on [{}, {}]", r.window.0, r.window.1));
    }
    Ok(names.join(", "))
}

fn convolution_identities() -> Check {
    let mut corpus: Vec<(String, KoszulModule)> = point_corpus(Field::Rational);
    corpus.extend(module_corpus("x"));
    let triv = trivial_module(Field::Rational);
    for (name, m) in &corpus {
        ensure(act_point(&triv, m).map_err(err)? == *m, || format!("{name}: unit action is not the identity"))?;
        if let Some(deg) = pull_push_comparison(m).map_err(err)? {
            return Err(format!("{name}: K-action and pull-push differ at degree {deg}"));
        }
    }
    Ok(format!("{} modules", corpus.len()))
}

fn orlov_monoidality() -> Check {
    let xs = module_corpus("x");
    let ys = module_corpus("y");
    let points = point_corpus(Field::Rational);
    let mut pairs: Vec<(&String, &KoszulModule, &String, &KoszulModule)> = Vec::new();
    for (a, m) in &xs {
        for (b, n) in &ys {
            pairs.push((a, m, b, n));
        }
    }
    for (a, m) in &points {
        for (b, n) in xs.iter().take(2).chain(points.iter()) {
            pairs.push((a, m, b, n));
        }
    }
    for (a, m, b, n) in &pairs {
        ensure(fold_monoidality_check(m, n).map_err(err)?, || format!("fold({a} ⊠ {b}) ≠ fold({a}) ⊠ fold({b})"))?;
    }
    Ok(format!("{} pairs", pairs.len()))
}

fn contraction_certificates() -> Check {
    let mut corpus = module_corpus("x");
    corpus.extend(point_corpus(Field::Rational));
    let mut worst = 0i64;
    for (name, m) in &corpus {
        let (c, k) = identity_cone_with_contraction(m).map_err(err)?;
        let cert = contraction_witness(&c, &k).map_err(|e| format!("{name}: {e}"))?;
        let bound = (c.width() as i64 + 1) / 2 + 1;
        ensure(cert.nilpotence as i64 <= bound, || format!("{name}: nilpotence {} > {bound}", cert.nilpotence))?;
        worst = worst.max(cert.nilpotence as i64 - bound);
    }
    Ok(format!("{} cones, max nilpotence minus bound {worst}", corpus.len()))
}

fn stabilization_inverse() -> Check {
    let limits = Limits::default();
    let p = Field::prime(101).unwrap();
    for n in 2..=6u32 {
        let target = monomial_mf("x", n, 1);
        let l = target.lg().clone();
        let s = stabilize(&l, &mat(l.ctx(), &[&["x", "1"], &["0", "1"]]), None, &limits).map_err(err)?;
        ensure(stable_dims_match(&s.mf, &target, &limits).map_err(err)?, || format!("n = {n}: stable dims differ over Q"))?;

        let lp = lg_over(p, &format!("x^{n}"), &["x"]);
        let sp = stabilize(&lp, &mat(lp.ctx(), &[&["x", "1"], &["0", "1"]]), None, &limits).map_err(err)?;
        let tp = mfsing_core::mf::new_mf(&lp, mat(lp.ctx(), &[&["x"]]), mat(lp.ctx(), &[&[&format!("x^{}", n - 1)]])).map_err(err)?;
        match search_equivalence(&sp.mf, &tp, &limits).map_err(err)? {
            EquivalenceSearch::Found { .. } => {}
            EquivalenceSearch::Exhausted => return Err(format!("n = {n}: no inverse pair over F_101")),
        }
    }
    Ok("n = 2..6".into())
}

fn perfectness_dichotomy() -> Check {
    let limits = Limits::default();
    let mut free: Vec<(String, KoszulModule)> = (2..=4).map(|n| (format!("K(x^{n})"), k_alg("x", n))).collect();
    free.push(("K(x^2 + y^2)".into(), mfsing_core::koszul::koszul_algebra(&lg("x^2 + y^2", &["x", "y"]))));
    let points = point_corpus(Field::Rational);
    free.extend(points.iter().filter(|(n, _)| n.starts_with('K') || n.starts_with('T')).cloned());
    for (name, m) in &free {
        ensure(is_perfect(m, &limits).map_err(err)?.is_perfect(), || format!("{name} should be perfect"))?;
    }
    let mut residues = 0;
    for n in 2..=6u32 {
        let l = lg(&format!("x^{n}"), &["x"]);
        let s = stabilize(&l, &mat(l.ctx(), &[&["x"]]), None, &limits).map_err(err)?;
        ensure(!mf_perfectness(&s.mf, &limits).map_err(err)?.is_perfect(), || format!("k over x^{n} should not be perfect"))?;
        residues += 1;
    }
    let xy = lg("x*y", &["x", "y"]);
    let s = stabilize(&xy, &mat(xy.ctx(), &[&["x", "y"]]), None, &limits).map_err(err)?;
    ensure(!mf_perfectness(&s.mf, &limits).map_err(err)?.is_perfect(), || "k over xy should not be perfect".into())?;
    residues += 1;
    for (name, m) in &points {
        let perfect = is_perfect(m, &limits).map_err(err)?.is_perfect();
        let order = u_torsion_order_point(m, 8).map_err(err)?;
        ensure(order.is_some() == perfect, || format!("{name}: torsion order {order:?} but perfect = {perfect}"))?;
    }
    Ok(format!("{} free, {residues} residue representatives, {} point-case modules", free.len(), points.len()))
}

fn point_case_shadow() -> Check {
    for field in [Field::Rational, Field::prime(101).unwrap()] {
        let r = point_case_report(field, 5, &Limits::default()).map_err(err)?;
        ensure(r.stable_dims == StableDims::finite(1, 0), || format!("{field:?}: stable End {}", r.stable_dims))?;
        ensure(r.is_consistent(), || format!("{field:?}: inconsistent report"))?;
    }
    Ok("Q and F_101".into())
}

fn vanishing_cycles_shadow() -> Check {
    let limits = Limits::default();
    let mut cases: Vec<(String, Vec<&str>, Dim)> =
        (2..=6).map(|n| (format!("x^{n}"), vec!["x"], Dim::Finite(n - 1))).collect();
    cases.push(("x^2 + y^2".into(), vec!["x", "y"], Dim::Finite(1)));
    cases.push(("x^3 + y^2".into(), vec!["x", "y"], Dim::Finite(2)));
    cases.push(("x*y".into(), vec!["x", "y"], Dim::Finite(1)));
    cases.push(("x^2*y".into(), vec!["x", "y"], Dim::Infinite));
    for (f, vars, want) in &cases {
        let p = parse_poly(f, &RingCtx::rational(vars)).unwrap();
        let mu = milnor_number(&p, &limits).map_err(err)?;
        let brute = milnor_oracle(&p, 12).map_or(Dim::Infinite, |d| Dim::Finite(d as u64));
        ensure(mu == *want && brute == *want, || format!("μ({f}) = {mu}, brute force {brute}, expected {want}"))?;
    }
    for (f, g) in [("x^2", "y^2"), ("x^3", "y^2"), ("x^3", "y^3")] {
        let fp = parse_poly(f, &RingCtx::rational(&["x"])).unwrap();
        let gp = parse_poly(g, &RingCtx::rational(&["y"])).unwrap();
        let e = monomial_mf("x", fp.total_degree().unwrap(), 1);
        let h = monomial_mf("y", gp.total_degree().unwrap(), 1);
        let r = thom_sebastiani_check(&fp, &gp, Some((&e, &h)), &limits).map_err(err)?;
        ensure(r.passes(), || format!("({f}, {g}): {r:?}"))?;
    }
    let eh = box_product(&monomial_mf("x", 2, 1), &monomial_mf("y", 2, 1)).map_err(err)?;
    let direct = hom_cohomology_dims(&eh, &eh, &limits).map_err(err)?;
    ensure(direct == StableDims::finite(2, 2), || format!("End((x|x) ⊠ (y|y)) = {direct}"))?;
    Ok(format!("{} potentials, 3 Thom–Sebastiani pairs", cases.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, u64, fn() -> Check); 10] = [
        ("MF validation and Hom calculus", 5, mf_validation_and_hom_calculus),
        ("point-case A[u] pattern", 1, point_case_au_pattern),
        ("cone of u", 2, cone_of_u),
        ("convolution identities", 2, convolution_identities),
        ("fold monoidality", 5, orlov_monoidality),
        ("contraction certificates", 2, contraction_certificates),
        ("stabilization inverse", 30, stabilization_inverse),
        ("perfectness dichotomy", 10, perfectness_dichotomy),
        ("point-case singularity category", 1, point_case_shadow),
        ("Milnor numbers and Thom–Sebastiani", 10, vanishing_cycles_shadow),
    ];
    let mut failed = 0;
    for (i, (title, secs, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let limit = Duration::from_secs(*secs);
        let (status, detail) = match outcome {
            Ok(d) if elapsed <= limit => ("PASS", d),
            Ok(d) => ("FAIL", format!("{d}; over time limit")),
            Err(e) => ("FAIL", e),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!("criterion {:>2} {status} [{title}] {} ms (limit {secs} s): {detail}", i + 1, elapsed.as_millis());
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
