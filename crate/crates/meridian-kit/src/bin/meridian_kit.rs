//! Command-line driver: solve densities, scan meridian classes, run the
//! counterexample experiments. Exit codes: 0 ok, 1 usage/parse error,
//! 2 numerical failure, 3 assertion failure.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use meridian_kit::domain::{Domain, DomainConfig};
use meridian_kit::meridians::{enumerate_separations, find_meridian, MeridianError};
use meridian_kit::metric::{boundary_bounds_check, SolveParams};
use meridian_kit::report::{self, DensitySummary, MeridianRow, MeridianScan};
use meridian_kit::shorten::ShortenParams;
use meridian_kit::svg::SvgPlot;
use meridian_kit::topology::curves_cross;
use meridian_kit::{cache, experiments};

#[derive(Parser)]
#[command(name = "meridian-kit", version, about = "Hyperbolic densities and meridians of finitely connected plane domains")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CommonOpts {
    /// Grid spacing; default is min(window/256, min_gap/10).
    #[arg(long)]
    grid_h: Option<f64>,
    /// Relative residual target for the density solve.
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    /// Iteration cap for the curve-shortening flow.
    #[arg(long, default_value_t = 20000)]
    max_iter: usize,
    /// Hyperbolic length below which a puncture loop counts as collapsed.
    #[arg(long, default_value_t = 0.05)]
    collapse_threshold: f64,
    /// Seed budget for multi-start searches.
    #[arg(long, default_value_t = 24)]
    seeds: usize,
    /// Worker threads for the class scan; output order is independent of it.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Density cache directory; defaults to $MERIDIAN_KIT_CACHE_DIR.
    #[arg(long)]
    cache: Option<PathBuf>,
    /// Output directory for reports and plots.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Also write SVG plots.
    #[arg(long)]
    svg: bool,
    /// Seed for randomized search heuristics; fixed seed means bit-identical
    /// output. The default pipeline is deterministic and ignores it.
    #[arg(long, default_value_t = 0)]
    random_seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the hyperbolic density of a domain and report the residual.
    Density {
        /// Domain config JSON: {"components": [...]}.
        domain: PathBuf,
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Scan all separation classes of a domain for meridians.
    Meridians {
        domain: PathBuf,
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Run a named verification experiment (thm12, thm14).
    Experiment {
        name: String,
        /// Puncture offset for thm12.
        #[arg(long, default_value_t = 0.02)]
        eps: f64,
        #[command(flatten)]
        opts: CommonOpts,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // help/version requests are not errors
            use clap::error::ErrorKind::*;
            let _ = e.print();
            return match e.kind() {
                DisplayHelp | DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    let code = match cli.command {
        Command::Density { domain, opts } => cmd_density(&domain, &opts),
        Command::Meridians { domain, opts } => cmd_meridians(&domain, &opts),
        Command::Experiment { name, eps, opts } => cmd_experiment(&name, eps, &opts),
    };
    ExitCode::from(code)
}

fn solve_params(opts: &CommonOpts) -> SolveParams {
    SolveParams {
        grid_h: opts.grid_h,
        tol: opts.tol,
        ..SolveParams::default()
    }
}

fn shorten_params(opts: &CommonOpts) -> ShortenParams {
    ShortenParams {
        max_iter: opts.max_iter,
        collapse_threshold: opts.collapse_threshold,
        ..ShortenParams::default()
    }
}

fn cache_dir(opts: &CommonOpts) -> Option<PathBuf> {
    opts.cache
        .clone()
        .or_else(|| std::env::var_os(cache::CACHE_DIR_ENV).map(PathBuf::from))
}

fn load_domain(path: &Path) -> Result<Domain, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let config: DomainConfig = serde_json::from_str(&text)
        .map_err(|e| format!("malformed domain config {}: {e}", path.display()))?;
    config
        .into_domain()
        .map_err(|e| format!("invalid domain {}: {e}", path.display()))
}

fn write_out(dir: &Path, name: &str, content: &str) -> Result<PathBuf, String> {
    std::fs::create_dir_all(dir).map_err(|e| format!("cannot create {}: {e}", dir.display()))?;
    let path = dir.join(name);
    std::fs::write(&path, content).map_err(|e| format!("cannot write {}: {e}", path.display()))?;
    Ok(path)
}

fn cmd_density(domain_path: &Path, opts: &CommonOpts) -> u8 {
    let domain = match load_domain(domain_path) {
        Ok(d) => d,
        Err(e) => {
            eprintln!("error: {e}");
            return 1;
        }
    };
    let sp = solve_params(opts);
    let dir = cache_dir(opts);
    let cached = dir
        .as_deref()
        .and_then(|d| cache::load(d, &domain, &sp))
        .is_some();
    let field = match cache::solve_or_load(&domain, &sp, dir.as_deref()) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: density solve failed: {e}");
            return 2;
        }
    };
    // near-boundary sanity bound; K = 20 is an engineering choice, not a
    // constant taken from theory
    let (checked, ok) = boundary_bounds_check(&field, &domain, 20.0, 0.1);
    let summary = DensitySummary {
        domain: DomainConfig::from_domain(&domain),
        window: field.window,
        h: field.h,
        nx: field.nx,
        ny: field.ny,
        residual: field.residual,
        patches: field.patches.len(),
        boundary_nodes_checked: checked,
        boundary_nodes_ok: ok,
        from_cache: cached,
    };
    println!(
        "density: {}x{} grid, h={:.6}, residual={:.3e}{}",
        field.nx,
        field.ny,
        field.h,
        field.residual,
        if cached { " (from cache)" } else { "" }
    );
    println!(
        "near-boundary bound (K=20, engineering choice): {ok}/{checked} nodes within bounds"
    );
    let rendered = report::render("density_summary", &summary);
    match write_out(&opts.out, "density_report.json", &rendered) {
        Ok(p) => println!("report: {}", p.display()),
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    }
    if opts.svg {
        let mut plot = SvgPlot::new(field.window * 1.05);
        plot.add_heatmap(&field);
        plot.add_domain(&domain);
        match write_out(&opts.out, "density_heatmap.svg", &plot.finish()) {
            Ok(p) => println!("heatmap: {}", p.display()),
            Err(e) => {
                eprintln!("error: {e}");
                return 2;
            }
        }
    }
    0
}

fn cmd_meridians(domain_path: &Path, opts: &CommonOpts) -> u8 {
    let domain = match load_domain(domain_path) {
        Ok(d) => d,
        Err(e) => {
            eprintln!("error: {e}");
            return 1;
        }
    };
    let seps = enumerate_separations(&domain);
    if seps.is_empty() {
        let scan = MeridianScan {
            domain: DomainConfig::from_domain(&domain),
            rows: vec![],
            notice: Some("simply connected domain: no meridians exist".into()),
        };
        print!("{}", report::meridian_table(&scan));
        let rendered = report::render("meridian_scan", &scan);
        if let Err(e) = write_out(&opts.out, "meridians_report.json", &rendered) {
            eprintln!("error: {e}");
            return 2;
        }
        return 0;
    }

    let sp = solve_params(opts);
    let field = match cache::solve_or_load(&domain, &sp, cache_dir(opts).as_deref()) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: density solve failed: {e}");
            return 2;
        }
    };
    let shp = shorten_params(opts);

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.jobs.max(1))
        .build()
        .expect("thread pool");
    // indexed collect keeps the output order independent of --jobs
    let results: Vec<Result<_, MeridianError>> = pool.install(|| {
        use rayon::prelude::*;
        seps.par_iter()
            .map(|sep| find_meridian(&domain, &field, sep, &shp))
            .collect()
    });

    let mut reports = Vec::new();
    let mut skipped = Vec::new();
    for (sep, res) in seps.iter().zip(results) {
        match res {
            Ok(r) => reports.push(r),
            Err(MeridianError::Degenerate { .. }) => {
                // punctures admit arbitrarily short loops: no meridian
                skipped.push(sep.e_indices.clone());
            }
            Err(e) => {
                eprintln!("error: class {:?} failed: {e}", sep.e_indices);
                return 2;
            }
        }
    }

    let principal_curves: Vec<_> = reports
        .iter()
        .filter(|r| r.principal)
        .map(|r| r.curve.clone())
        .collect();
    let rows: Vec<MeridianRow> = reports
        .iter()
        .map(|r| {
            let nesting_ok = !r.principal
                || principal_curves
                    .iter()
                    .filter(|c| !std::ptr::eq(*c as *const _, &r.curve as *const _))
                    .all(|c| c.alignment_distance(&r.curve) < 1e-12 || !curves_cross(c, &r.curve));
            MeridianRow {
                class: r.separation.e_indices.clone(),
                length: r.length,
                simple: r.simple,
                principal: r.principal,
                unique_evidence: r.unique_evidence,
                nesting_ok,
            }
        })
        .collect();
    let notice = if skipped.is_empty() {
        None
    } else {
        Some(format!(
            "classes with no geodesic (puncture collapse): {skipped:?}"
        ))
    };
    let scan = MeridianScan {
        domain: DomainConfig::from_domain(&domain),
        rows,
        notice,
    };
    print!("{}", report::meridian_table(&scan));
    let rendered = report::render("meridian_scan", &scan);
    if let Err(e) = write_out(&opts.out, "meridians_report.json", &rendered) {
        eprintln!("error: {e}");
        return 2;
    }
    if opts.svg {
        let mut plot = SvgPlot::new(field.window * 1.05);
        plot.add_domain(&domain);
        for (i, r) in reports.iter().enumerate() {
            plot.add_curve(
                &r.curve,
                &format!("class {:?} length={:.4}", r.separation.e_indices, r.length),
                i,
            );
        }
        if let Err(e) = write_out(&opts.out, "meridians_overlay.svg", &plot.finish()) {
            eprintln!("error: {e}");
            return 2;
        }
    }
    0
}

fn cmd_experiment(name: &str, eps: f64, opts: &CommonOpts) -> u8 {
    let sp = solve_params(opts);
    let shp = shorten_params(opts);
    let dir = cache_dir(opts);
    let result = match name {
        "thm12" => experiments::run_thm12(eps, &sp, &shp, dir.as_deref()),
        "thm14" => experiments::run_thm14(&sp, &shp, dir.as_deref()),
        other => {
            eprintln!("error: unknown experiment '{other}' (expected thm12 or thm14)");
            return 1;
        }
    };
    let rep = match result {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: experiment {name} failed: {e}");
            return 2;
        }
    };
    for a in &rep.assertions {
        println!(
            "[{}] {}: margin {:+.4} (tolerance {:.4}) -- {}",
            if a.pass { "PASS" } else { "FAIL" },
            a.name,
            a.margin,
            a.tolerance,
            a.description
        );
    }
    let rendered = report::render("experiment", &rep);
    match write_out(&opts.out, &format!("experiment_{name}.json"), &rendered) {
        Ok(p) => println!("report: {}", p.display()),
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    }
    if opts.svg {
        let window = rep
            .domain
            .components
            .iter()
            .filter_map(|c| match c {
                meridian_kit::domain::Comp::UnboundedCap { radius } => Some(*radius),
                _ => None,
            })
            .next()
            .unwrap_or(1.0);
        let domain = rep.domain.clone().into_domain().expect("report domain");
        let mut plot = SvgPlot::new(window * 1.05);
        plot.add_domain(&domain);
        for (i, c) in rep.curves.iter().enumerate() {
            plot.add_curve(&c.curve, &format!("{} length={:.4}", c.label, c.length), i);
        }
        if let Err(e) = write_out(&opts.out, &format!("experiment_{name}.svg"), &plot.finish()) {
            eprintln!("error: {e}");
            return 2;
        }
    }
    if rep.passed {
        0
    } else {
        eprintln!("assertion failure in experiment {name}; margins above");
        3
    }
}
