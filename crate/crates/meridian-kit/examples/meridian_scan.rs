//! Scan every separation class of a 3-connected domain for its meridian:
//! the shortest simple closed geodesic separating E from F.

use meridian_kit::domain::{make_domain, Comp};
use meridian_kit::geom::pt;
use meridian_kit::meridians::{enumerate_separations, find_meridian};
use meridian_kit::metric::{solve_density, SolveParams};
use meridian_kit::shorten::ShortenParams;

fn main() {
    let domain = make_domain(vec![
        Comp::disk(pt(-1.0, 0.0), 0.3),
        Comp::disk(pt(1.0, 0.0), 0.3),
        Comp::cap(3.0),
    ])
    .unwrap();
    let field = solve_density(&domain, &SolveParams::default()).unwrap();

    println!("{:>10} {:>10} {:>7} {:>10} {:>9}", "class", "length", "simple", "principal", "evidence");
    for sep in enumerate_separations(&domain) {
        let rep = find_meridian(&domain, &field, &sep, &ShortenParams::default()).unwrap();
        println!(
            "{:>10} {:>10.4} {:>7} {:>10} {:>9}",
            format!("{:?}", sep.e_indices),
            rep.length,
            rep.simple,
            rep.principal,
            rep.unique_evidence
        );
    }
}
