//! Render a density heatmap and a geodesic overlay for an annulus to
//! annulus.svg in the working directory.

use meridian_kit::curve::circle_curve;
use meridian_kit::domain::{make_domain, Comp};
use meridian_kit::geom::Pt;
use meridian_kit::metric::{solve_density, SolveParams};
use meridian_kit::shorten::{shorten, ShortenParams};
use meridian_kit::svg::SvgPlot;

fn main() {
    let domain = make_domain(vec![Comp::disk(Pt::ZERO, 0.25), Comp::cap(1.0)]).unwrap();
    let field = solve_density(&domain, &SolveParams::default()).unwrap();
    let seed = circle_curve(Pt::ZERO, 0.7, 64);
    let res = shorten(&domain, &field, &seed, &ShortenParams::default()).unwrap();

    let mut plot = SvgPlot::new(field.window * 1.05);
    plot.add_heatmap(&field);
    plot.add_domain(&domain);
    plot.add_curve(&res.curve, &format!("core geodesic length={:.4}", res.length), 0);
    std::fs::write("annulus.svg", plot.finish()).unwrap();
    println!("wrote annulus.svg");
}
