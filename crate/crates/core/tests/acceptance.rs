//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the lines are always printed.

mod common;

use std::time::{Duration, Instant};

use affsel::instances::{hahn_banach, olsen, random_weights, HahnBanachSpec};
use affsel::lp::{lp_solve, verify_certificate, verify_farkas, LpStatus};
use affsel::multifunction::{
    audit_convexity, audit_intersection, sample_graph, Sample, SampledMultifunction,
};
use affsel::polytope::{combine, AffineMap, VPolytope};
use affsel::rational::{int, rat, vec_of, Rational};
use affsel::selection::{
    global_selection, global_selection_lp, local_selection, sandwich, sandwich_lp,
    verify_selection, SelectionStatus,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Check = Result<(), String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Check {
    let spent = start.elapsed();
    ensure(spent < limit, || format!("took {spent:?}, limit {limit:?}"))
}

fn olsen_global() -> Check {
    let start = Instant::now();
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut doc = Vec::new();
    let code = affsel::cli::run(
        ["affsel", "example", "olsen"],
        &mut std::io::empty(),
        &mut doc,
        &mut err,
    );
    ensure(code == 0, || format!("example olsen exited {code}"))?;
    let code = affsel::cli::run(
        ["affsel", "select-global"],
        &mut doc.as_slice(),
        &mut out,
        &mut err,
    );
    ensure(code == 0, || format!("select-global exited {code}"))?;
    let json: serde_json::Value = serde_json::from_slice(&out).map_err(|e| e.to_string())?;
    ensure(json["status"] == "none_exists", || {
        format!("status {}", json["status"])
    })?;
    ensure(json["certificate"]["verified"] == true, || {
        "CLI certificate not verified".into()
    })?;

    let g = olsen();
    let outcome = lp_solve(&global_selection_lp(&g)).map_err(|e| e.to_string())?;
    ensure(outcome.status == LpStatus::Infeasible, || {
        format!("LP status {:?}", outcome.status)
    })?;
    ensure(
        verify_certificate(&global_selection_lp(&g), &outcome) == Ok(true),
        || "verify_certificate rejected the certificate".into(),
    )?;
    within(start, Duration::from_secs(1))
}

fn olsen_local() -> Check {
    let start = Instant::now();
    let g = olsen();
    let local = local_selection(&g, &vec_of(&[0, 0])).map_err(|e| e.to_string())?;
    let expected_simplex = vec![
        vec![rat(1, 2), int(0)],
        vec![int(0), rat(1, 2)],
        vec![rat(-1, 2), rat(-1, 2)],
    ];
    ensure(
        local.simplex.vertices() == expected_simplex.as_slice(),
        || format!("simplex {:?}", local.simplex.vertices()),
    )?;
    let expected_map = AffineMap::new(vec![vec![rat(-2, 3), rat(1, 3)]], vec![rat(1, 3)]).unwrap();
    ensure(local.map == expected_map, || format!("map {:?}", local.map))?;
    ensure(
        local.verification.trials == 100 && local.verification.failures == 0,
        || {
            format!(
                "{} of {} checks failed",
                local.verification.failures, local.verification.trials
            )
        },
    )?;

    let corners = g.domain().into_vertices();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for i in 0..50 {
        let w = random_weights(corners.len(), &rat(1, 16), &mut rng);
        let x = combine(&w, &corners);
        let sel = local_selection(&g, &x).map_err(|e| format!("point {i}: {e}"))?;
        ensure(sel.verification.passed(), || {
            format!("point {i}: verification failed")
        })?;
    }
    within(start, Duration::from_secs(5))
}

fn lemma_suite() -> Check {
    let start = Instant::now();
    for seed in 0..100 {
        let g = common::simplex_domain_instance(seed);
        let outcome = global_selection(&g).map_err(|e| format!("seed {seed}: {e}"))?;
        ensure(outcome.status == SelectionStatus::Found, || {
            format!("seed {seed}: none_exists")
        })?;
        let map = outcome.map.as_ref().unwrap();
        let report = verify_selection(&g, map, 100, seed).map_err(|e| e.to_string())?;
        ensure(report.failures == 0, || {
            format!("seed {seed}: {} failures", report.failures)
        })?;
    }
    within(start, Duration::from_secs(60))
}

fn theorem_suite() -> Check {
    let start = Instant::now();
    for seed in 0..100 {
        let (g, x0) = common::full_dimensional_instance(seed);
        let local = local_selection(&g, &x0).map_err(|e| format!("seed {seed}: {e}"))?;
        ensure(local.verification.failures == 0, || {
            format!("seed {seed}: {} failures", local.verification.failures)
        })?;
    }
    within(start, Duration::from_secs(60))
}

fn intersection_necessity() -> Check {
    for seed in 0..100 {
        let g = common::simplex_domain_instance(seed);
        if !global_selection(&g).map_err(|e| e.to_string())?.found() {
            continue;
        }
        let sampled =
            sample_graph(&g, &common::simplex_sample_points(&g)).map_err(|e| e.to_string())?;
        let audit = audit_intersection(&sampled);
        ensure(audit.passed, || {
            format!("seed {seed}: {:?}", audit.violations.first())
        })?;
    }
    let point = |x: Rational, y: i64| Sample {
        point: vec![x],
        value: VPolytope::point(vec![int(y)]),
    };
    let broken = SampledMultifunction::new(
        1,
        1,
        vec![point(int(0), 0), point(int(1), 1), point(rat(1, 2), 0)],
    )
    .map_err(|e| e.to_string())?;
    for (name, audit) in [
        ("convexity", audit_convexity(&broken)),
        ("intersection", audit_intersection(&broken)),
    ] {
        ensure(!audit.passed, || {
            format!("{name} audit passed the broken instance")
        })?;
        let v = &audit.violations[0];
        ensure(v.t == rat(1, 2) && v.witness == vec![rat(1, 2)], || {
            format!("{name} witness {:?} at t = {}", v.witness, v.t)
        })?;
    }
    Ok(())
}

fn lp_oracle() -> Check {
    let start = Instant::now();
    for seed in 0..500 {
        let lp = common::random_lp(seed);
        let expected = common::brute_force(&lp);
        let got = lp_solve(&lp).map_err(|e| format!("seed {seed}: {e}"))?;
        ensure(got.status == expected.status, || {
            format!(
                "seed {seed}: status {:?}, oracle {:?}",
                got.status, expected.status
            )
        })?;
        if expected.status == LpStatus::Feasible && expected.optimum.is_some() {
            ensure(got.optimum == expected.optimum, || {
                format!(
                    "seed {seed}: optimum {:?}, oracle {:?}",
                    got.optimum, expected.optimum
                )
            })?;
        }
        if got.status == LpStatus::Infeasible {
            let cert = got
                .farkas
                .as_ref()
                .ok_or_else(|| format!("seed {seed}: no certificate"))?;
            ensure(verify_farkas(&lp, cert) == Ok(true), || {
                format!("seed {seed}: bad certificate")
            })?;
        }
        ensure(verify_certificate(&lp, &got) == Ok(true), || {
            format!("seed {seed}: outcome not verified")
        })?;
    }
    within(start, Duration::from_secs(120))
}

fn extension_audit() -> Check {
    let start = Instant::now();
    let sampled = hahn_banach(&HahnBanachSpec::diagonal_sup_norm()).map_err(|e| e.to_string())?;
    let hull = |pts: &[[i64; 2]]| -> Vec<Vec<Rational>> { pts.iter().map(|p| vec_of(p)).collect() };
    let expect = [
        (int(-1), hull(&[[0, -1], [-1, 0]])),
        (int(0), hull(&[[0, 0]])),
        (int(1), hull(&[[1, 0], [0, 1]])),
    ];
    for (f, verts) in &expect {
        let sample = sampled
            .samples()
            .iter()
            .find(|s| s.point == vec![f.clone()])
            .ok_or_else(|| format!("no sample at {f}"))?;
        let mut got = sample.value.vertices().to_vec();
        let mut want = verts.clone();
        got.sort();
        want.sort();
        ensure(got == want, || format!("F({f}) = {got:?}"))?;
    }
    let audit = audit_convexity(&sampled);
    ensure(!audit.passed, || "convexity audit passed".into())?;
    ensure(
        audit
            .violations
            .iter()
            .any(|v| v.t == rat(1, 2) && v.witness == vec![rat(1, 2), rat(-1, 2)]),
        || format!("violations {:?}", audit.violations),
    )?;
    within(start, Duration::from_secs(1))
}

fn sandwich_instances() -> Check {
    let lower = vec![
        (vec_of(&[-1]), int(1)),
        (vec_of(&[0]), int(0)),
        (vec_of(&[1]), int(1)),
    ];
    let upper = vec![
        (vec_of(&[-1]), int(1)),
        (vec_of(&[0]), int(2)),
        (vec_of(&[1]), int(1)),
    ];
    let out = sandwich(&lower, &upper).map_err(|e| e.to_string())?;
    ensure(
        out.map == Some(AffineMap::constant(1, vec_of(&[1]))),
        || format!("map {:?}", out.map),
    )?;

    let lower = vec![(vec_of(&[0]), int(1))];
    let upper = vec![(vec_of(&[0]), int(0))];
    let out = sandwich(&lower, &upper).map_err(|e| e.to_string())?;
    ensure(out.status == SelectionStatus::NoneExists, || {
        "contradiction accepted".into()
    })?;
    let lp = sandwich_lp(&lower, &upper).map_err(|e| e.to_string())?;
    let cert = out.certificate.as_ref().ok_or("no certificate")?;
    ensure(verify_farkas(&lp, cert) == Ok(true), || {
        "certificate not verified".into()
    })
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("1 olsen has no global affine selection", olsen_global),
        ("2 olsen local selection at the origin", olsen_local),
        (
            "3 simplex-domain instances have global selections",
            lemma_suite,
        ),
        (
            "4 full-dimensional instances have local selections",
            theorem_suite,
        ),
        (
            "5 intersection condition is necessary",
            intersection_necessity,
        ),
        ("6 simplex matches the enumeration oracle", lp_oracle),
        ("7 extension multifunction fails convexity", extension_audit),
        ("8 sandwich fits and contradiction", sandwich_instances),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        match check() {
            Ok(()) => println!("PASS  {name} ({:.2?})", start.elapsed()),
            Err(why) => {
                failed += 1;
                println!("FAIL  {name}: {why}");
            }
        }
    }
    println!("{} of 8 criteria passed", 8 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
