//! Acceptance suite: one test (and one PASS/FAIL line) per criterion.
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use std::path::PathBuf;
use std::sync::OnceLock;

use meridian_kit::curve::circle_curve;
use meridian_kit::domain::{component_gap, make_domain, make_separation, Comp};
use meridian_kit::experiments::{build_thm14_domain, run_thm12, run_thm14, ExperimentReport};
use meridian_kit::geom::{pt, Pt};
use meridian_kit::meridians::find_meridian;
use meridian_kit::metric::{
    annulus_core_length, boundary_bounds_check, ClosedForm, NodeKind, SolveParams,
};
use meridian_kit::net::separating_curve;
use meridian_kit::shorten::{shorten, ShortenParams, ShortenStatus};
use meridian_kit::topology::{self, separates};
use meridian_kit::{cache, DomainConfig};

fn verdict(criterion: &str, ok: bool, detail: &str) {
    println!(
        "criterion {criterion}: {} -- {detail}",
        if ok { "PASS" } else { "FAIL" }
    );
    assert!(ok, "criterion {criterion} failed: {detail}");
}

fn shared_cache() -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("acceptance-cache");
    std::fs::create_dir_all(&dir).expect("cache dir");
    dir
}

fn thm14_report() -> &'static ExperimentReport {
    static REPORT: OnceLock<ExperimentReport> = OnceLock::new();
    REPORT.get_or_init(|| {
        run_thm14(
            &SolveParams::default(),
            &ShortenParams::default(),
            Some(&shared_cache()),
        )
        .expect("thm14 experiment runs")
    })
}

fn assertion_ok(rep: &ExperimentReport, name: &str) -> bool {
    rep.assertions
        .iter()
        .any(|a| a.name == name && a.pass)
}

#[test]
fn criterion_1_annulus_oracle() {
    let mut detail = String::new();
    let mut ok = true;
    for r_in in [1.0 / 9.0, 0.25, 0.5] {
        let domain = make_domain(vec![Comp::disk(Pt::ZERO, r_in), Comp::cap(1.0)]).unwrap();
        let field =
            cache::solve_or_load(&domain, &SolveParams::default(), Some(&shared_cache())).unwrap();
        let sep = make_separation(&domain, &[0]).unwrap();
        let rep = find_meridian(&domain, &field, &sep, &ShortenParams::default()).unwrap();
        let expect = annulus_core_length(r_in, 1.0);
        let dev = (rep.length - expect).abs() / expect;
        detail.push_str(&format!("r={r_in:.4}: {:.4} vs {expect:.4} ({:.2}%); ", rep.length, 100.0 * dev));
        ok &= dev < 0.02;
    }
    verdict("1 (annulus oracle)", ok, &detail);
}

#[test]
fn criterion_2_punctured_disk_collapse() {
    let domain = make_domain(vec![Comp::point(Pt::ZERO), Comp::cap(1.0)]).unwrap();
    let field =
        cache::solve_or_load(&domain, &SolveParams::default(), Some(&shared_cache())).unwrap();
    let seed = circle_curve(Pt::ZERO, 0.3, 64);
    let res = shorten(&domain, &field, &seed, &ShortenParams::default()).unwrap();
    let collapsed = matches!(res.status, ShortenStatus::PunctureCollapse(0));
    verdict(
        "2 (punctured-disk collapse)",
        collapsed && res.length < 0.05,
        &format!("status {:?}, terminal length {:.4}", res.status, res.length),
    );
}

#[test]
fn criterion_3_randomized_net_suite() {
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(20260824);
    let mut done = 0;
    let mut failures = 0;
    while done < 200 {
        let n: usize = rng.gen_range(2..=5);
        let mut comps: Vec<Comp> = Vec::new();
        'place: for _ in 0..n {
            for _ in 0..50 {
                let c = pt(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
                let r = rng.gen_range(0.05..0.4);
                let cand = match rng.gen_range(0..10) {
                    0..=2 => Comp::point(c),
                    3..=4 => Comp::polygon(vec![
                        c + pt(-r, -r),
                        c + pt(r, -r),
                        c + pt(r, r),
                        c + pt(-r, r),
                    ]),
                    _ => Comp::disk(c, r),
                };
                if comps.iter().all(|o| component_gap(o, &cand) > 0.15) {
                    comps.push(cand);
                    continue 'place;
                }
            }
        }
        comps.push(Comp::cap(4.0));
        let Ok(d) = make_domain(comps) else { continue };
        let nb = d.bounded_indices().len();
        if nb == 0 {
            continue;
        }
        let k = rng.gen_range(1..=nb);
        let mut e: Vec<usize> = (0..nb).collect();
        e.shuffle(&mut rng);
        e.truncate(k);
        let Ok(sep) = make_separation(&d, &e) else {
            continue;
        };
        done += 1;
        match separating_curve(&d, &sep) {
            Ok(c) => {
                if !topology::self_intersections(&c).is_simple()
                    || !separates(&c, &d, &sep).unwrap_or(false)
                    || c.clearance(&d) <= 0.0
                {
                    failures += 1;
                }
            }
            Err(_) => failures += 1,
        }
    }
    verdict(
        "3 (randomized net suite)",
        failures == 0,
        &format!("{done} domains, {failures} failures"),
    );
}

#[test]
fn criterion_4_solver_vs_closed_forms() {
    let cases: Vec<(&str, Vec<Comp>, ClosedForm)> = vec![
        (
            "disk",
            vec![Comp::cap(1.0)],
            ClosedForm::Disk {
                center: Pt::ZERO,
                radius: 1.0,
            },
        ),
        (
            "punctured disk",
            vec![Comp::point(Pt::ZERO), Comp::cap(1.0)],
            ClosedForm::PuncturedDisk {
                center: Pt::ZERO,
                radius: 1.0,
            },
        ),
        (
            "annulus",
            vec![Comp::disk(Pt::ZERO, 0.25), Comp::cap(1.0)],
            ClosedForm::Annulus {
                center: Pt::ZERO,
                r_in: 0.25,
                r_out: 1.0,
            },
        ),
    ];
    let mut ok = true;
    let mut detail = String::new();
    for (name, comps, form) in cases {
        let domain = make_domain(comps).unwrap();
        let field =
            cache::solve_or_load(&domain, &SolveParams::default(), Some(&shared_cache())).unwrap();
        let mut worst: f64 = 0.0;
        for j in 0..field.ny {
            for i in 0..field.nx {
                if field.mask[j * field.nx + i] == NodeKind::Outside {
                    continue;
                }
                let z = field.node(i, j);
                if domain.boundary_dist(z) <= 5.0 * field.h {
                    continue;
                }
                let Some(exact) = form.density(z) else { continue };
                let Ok(solved) = field.density_at(&domain, z) else {
                    continue;
                };
                worst = worst.max((solved - exact).abs() / exact);
            }
        }
        let (checked, bounds_ok) = boundary_bounds_check(&field, &domain, 20.0, 0.1);
        detail.push_str(&format!(
            "{name}: max dev {:.3}%, bounds {bounds_ok}/{checked}; ",
            100.0 * worst
        ));
        ok &= worst < 0.02 && checked > 0 && bounds_ok == checked;
    }
    verdict("4 (solver vs closed forms)", ok, &detail);
}

#[test]
fn criterion_5_twin_meridians() {
    let rep = thm14_report();
    let ok = assertion_ok(rep, "two_meridians")
        && assertion_ok(rep, "mirror_pair")
        && assertion_ok(rep, "not_t_invariant")
        && assertion_ok(rep, "winding_obstruction")
        && assertion_ok(rep, "principal_unique");
    verdict(
        "5 (two T-related meridians, principal unique)",
        ok,
        &summarize(rep, &["two_meridians", "mirror_pair", "not_t_invariant", "winding_obstruction", "principal_unique"]),
    );
}

#[test]
fn criterion_6_short_nonsimple_geodesic() {
    let rep = run_thm12(
        0.02,
        &SolveParams::default(),
        &ShortenParams::default(),
        Some(&shared_cache()),
    )
    .expect("thm12 experiment runs at eps 0.02");
    let ok = rep.passed;
    verdict(
        "6 (non-simple shortest separating geodesic, eps 0.02)",
        ok,
        &summarize(
            &rep,
            &["shorter_than_meridian", "non_simple", "separates_facewise_only", "inversion_pair"],
        ),
    );
}

#[test]
fn criterion_7_seven_simple_classes() {
    let rep = thm14_report();
    let ok = assertion_ok(rep, "class_count")
        && assertion_ok(rep, "all_simple")
        && assertion_ok(rep, "classes_distinct")
        && assertion_ok(rep, "principal_nesting");
    verdict(
        "7 (seven simple distinct classes, principal nesting)",
        ok,
        &summarize(rep, &["class_count", "all_simple", "classes_distinct", "principal_nesting"]),
    );
}

#[test]
fn criterion_8_deterministic_reports() {
    let domain = build_thm14_domain();
    let config = DomainConfig::from_domain(&domain);
    let tmp = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("acceptance-determinism");
    std::fs::create_dir_all(&tmp).unwrap();
    let domain_file = tmp.join("thm14.json");
    std::fs::write(&domain_file, serde_json::to_string(&config).unwrap()).unwrap();

    let bin = env!("CARGO_BIN_EXE_meridian-kit");
    let mut reports = Vec::new();
    for (run, jobs) in [("a", "4"), ("b", "2")] {
        let out = tmp.join(run);
        let status = std::process::Command::new(bin)
            .arg("meridians")
            .arg(&domain_file)
            .args(["--random-seed", "7", "--jobs", jobs])
            .arg("--cache")
            .arg(shared_cache())
            .arg("--out")
            .arg(&out)
            .stdout(std::process::Stdio::null())
            .status()
            .expect("meridians run");
        assert!(status.success(), "meridians run {run} failed");
        reports.push(std::fs::read(out.join("meridians_report.json")).unwrap());
    }
    verdict(
        "8 (byte-identical reports)",
        reports[0] == reports[1],
        &format!("{} bytes each", reports[0].len()),
    );
}

fn summarize(rep: &ExperimentReport, names: &[&str]) -> String {
    let mut s = String::new();
    for a in &rep.assertions {
        if names.contains(&a.name.as_str()) {
            s.push_str(&format!(
                "{}={} (margin {:+.4}); ",
                a.name,
                if a.pass { "ok" } else { "FAIL" },
                a.margin
            ));
        }
    }
    s
}
