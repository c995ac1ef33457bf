//! The shortest closed geodesic separating three nearby punctures from the
//! rest of the boundary is non-simple and strictly shorter than the
//! meridian; its image under z -> (1+eps)^2 / z is a second minimizer.
//! Pass eps on the command line (default 0.1; smaller is slower).

use meridian_kit::experiments::run_thm12;
use meridian_kit::metric::SolveParams;
use meridian_kit::shorten::ShortenParams;

fn main() {
    let eps: f64 = std::env::args()
        .nth(1)
        .map(|s| s.parse().expect("eps must be a number"))
        .unwrap_or(0.1);
    let rep = run_thm12(eps, &SolveParams::default(), &ShortenParams::default(), None).unwrap();
    for c in rep.curves.iter().take(3) {
        println!(
            "{:<16} length {:>9.4} simple {:<5} windings {:?}",
            c.label, c.length, c.simple, c.windings.0
        );
    }
    println!();
    for a in &rep.assertions {
        println!(
            "[{}] {} (margin {:+.4}): {}",
            if a.pass { "ok" } else { "FAIL" },
            a.name,
            a.margin,
            a.description
        );
    }
}
