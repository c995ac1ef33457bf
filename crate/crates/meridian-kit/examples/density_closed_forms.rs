//! Solve the hyperbolic density of a round annulus and compare it with the
//! closed-form metric along a radius.

use meridian_kit::domain::{make_domain, Comp};
use meridian_kit::geom::{pt, Pt};
use meridian_kit::metric::{solve_density, ClosedForm, SolveParams};

fn main() {
    let r_in = 0.25;
    let domain = make_domain(vec![Comp::disk(Pt::ZERO, r_in), Comp::cap(1.0)]).unwrap();
    let field = solve_density(&domain, &SolveParams::default()).unwrap();
    println!(
        "solved {}x{} grid, h = {:.5}, residual = {:.2e}",
        field.nx, field.ny, field.h, field.residual
    );

    let form = ClosedForm::Annulus {
        center: Pt::ZERO,
        r_in,
        r_out: 1.0,
    };
    println!("{:>8} {:>12} {:>12} {:>9}", "rho", "solved", "exact", "rel err");
    for k in 1..10 {
        let rho = r_in + (1.0 - r_in) * k as f64 / 10.0;
        let z = pt(rho, 0.0);
        let solved = field.density_at(&domain, z).unwrap();
        let exact = form.density(z).unwrap();
        println!(
            "{rho:>8.3} {solved:>12.5} {exact:>12.5} {:>8.3}%",
            100.0 * (solved - exact).abs() / exact
        );
    }
}
