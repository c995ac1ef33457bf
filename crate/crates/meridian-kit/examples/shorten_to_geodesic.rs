//! Curve shortening in the hyperbolic metric: a circle in an annulus flows
//! to the core geodesic, while a loop around a puncture collapses.

use meridian_kit::curve::circle_curve;
use meridian_kit::domain::{make_domain, Comp};
use meridian_kit::geom::Pt;
use meridian_kit::metric::{annulus_core_length, solve_density, SolveParams};
use meridian_kit::shorten::{shorten, ShortenParams};

fn main() {
    let annulus = make_domain(vec![Comp::disk(Pt::ZERO, 0.25), Comp::cap(1.0)]).unwrap();
    let field = solve_density(&annulus, &SolveParams::default()).unwrap();
    let seed = circle_curve(Pt::ZERO, 0.7, 64);
    let res = shorten(&annulus, &field, &seed, &ShortenParams::default()).unwrap();
    println!(
        "annulus: {:?} at length {:.4} (core geodesic {:.4}), residual {:.1e}",
        res.status,
        res.length,
        annulus_core_length(0.25, 1.0),
        res.residual
    );

    let punctured = make_domain(vec![Comp::point(Pt::ZERO), Comp::cap(1.0)]).unwrap();
    let field = solve_density(&punctured, &SolveParams::default()).unwrap();
    let seed = circle_curve(Pt::ZERO, 0.3, 64);
    let res = shorten(&punctured, &field, &seed, &ShortenParams::default()).unwrap();
    println!(
        "punctured disk: {:?} at length {:.4} -- no geodesic in this class",
        res.status, res.length
    );
}
