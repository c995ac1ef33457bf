//! A separation class with two distinct meridians, exchanged by the
//! symmetry z -> -z: two small disks at +-3.5i against a central disk and
//! the outer boundary. Takes a few minutes.

use meridian_kit::experiments::run_thm14;
use meridian_kit::metric::SolveParams;
use meridian_kit::shorten::ShortenParams;

fn main() {
    let rep = run_thm14(&SolveParams::default(), &ShortenParams::default(), None).unwrap();
    for c in &rep.curves {
        println!(
            "{:<24} length {:>9.4} simple {:<5} windings {:?}",
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
