//! Enumerate the separation classes of a 4-connected domain and build a
//! simple separating curve for each from the grid net.

use meridian_kit::domain::{make_domain, Comp};
use meridian_kit::geom::pt;
use meridian_kit::meridians::enumerate_separations;
use meridian_kit::net::separating_curve;
use meridian_kit::topology::{homology_class, self_intersections};

fn main() {
    let domain = make_domain(vec![
        Comp::disk(pt(-1.0, 0.0), 0.3),
        Comp::disk(pt(1.0, 0.0), 0.3),
        Comp::point(pt(0.0, 1.2)),
        Comp::cap(3.0),
    ])
    .unwrap();

    for sep in enumerate_separations(&domain) {
        let curve = separating_curve(&domain, &sep).unwrap();
        let class = homology_class(&curve, &domain).unwrap();
        println!(
            "E = {:?}: {} vertices, windings {:?}, simple = {}, clearance = {:.4}",
            sep.e_indices,
            curve.len(),
            class.0,
            self_intersections(&curve).is_simple(),
            curve.clearance(&domain)
        );
    }
}
