//! Constructive production of a single simple closed lattice curve in the
//! domain separating the two sides of a separation.
//!
//! A net of squares covers the E side; the boundary of the union of the
//! squares meeting E is a cycle winding once about E and not at all about F.
//! The cycle decomposes into disjoint simple rectilinear curves, which are
//! then merged into one simple curve by lattice corridors (and channels for
//! holes) on the half-refined lattice.

use crate::curve::PolyCurve;
use crate::domain::{gap_distance, Domain, Separation};
use crate::geom::{pt, Pt};
use std::collections::{HashMap, HashSet, VecDeque};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum NetError {
    #[error("no lattice arc connects the remaining curves; retry with a finer net")]
    NoPath,
    #[error("malformed lattice cycle: {0}")]
    MalformedCycle(String),
}

type Cell = (i64, i64);
type Vertex = (i64, i64);

/// A multiset of directed lattice edges at integer endpoints scaled by the
/// cell size. After cancellation each undirected edge appears at most once.
#[derive(Debug, Clone)]
pub struct LatticeCycle {
    pub cell: f64,
    pub edges: Vec<(Vertex, Vertex)>,
}

impl LatticeCycle {
    pub fn to_point(&self, v: Vertex) -> Pt {
        pt(v.0 as f64 * self.cell, v.1 as f64 * self.cell)
    }

    /// Exact winding number of the cycle about `z` (sum of signed ray
    /// crossings over the directed edges, half-open rule).
    pub fn winding(&self, z: Pt) -> i64 {
        let mut w = 0i64;
        for &(a, b) in &self.edges {
            let (pa, pb) = (self.to_point(a), self.to_point(b));
            if pa.y <= z.y {
                if pb.y > z.y && (pb - pa).cross(z - pa) > 0.0 {
                    w += 1;
                }
            } else if pb.y <= z.y && (pb - pa).cross(z - pa) < 0.0 {
                w -= 1;
            }
        }
        w
    }

    /// Degree check from the construction: at every lattice vertex the
    /// in-degree equals the out-degree and only two or four edges meet.
    pub fn degrees_ok(&self) -> bool {
        let mut deg: HashMap<Vertex, (i32, i32)> = HashMap::new();
        for &(a, b) in &self.edges {
            deg.entry(a).or_default().1 += 1;
            deg.entry(b).or_default().0 += 1;
        }
        deg.values()
            .all(|&(i, o)| i == o && (i == 1 || i == 2))
    }
}

fn cell_square(cell: Cell, s: f64) -> (f64, f64) {
    (cell.0 as f64 * s, cell.1 as f64 * s)
}

/// Sum the CCW boundaries of the given cells, cancelling shared edges.
fn boundary_edges(cells: &HashSet<Cell>) -> Vec<(Vertex, Vertex)> {
    let mut edges = Vec::new();
    let mut order: Vec<Cell> = cells.iter().copied().collect();
    order.sort_unstable();
    for (i, j) in order {
        if !cells.contains(&(i, j - 1)) {
            edges.push(((i, j), (i + 1, j)));
        }
        if !cells.contains(&(i + 1, j)) {
            edges.push(((i + 1, j), (i + 1, j + 1)));
        }
        if !cells.contains(&(i, j + 1)) {
            edges.push(((i + 1, j + 1), (i, j + 1)));
        }
        if !cells.contains(&(i - 1, j)) {
            edges.push(((i, j + 1), (i, j)));
        }
    }
    edges
}

/// Cells (at spacing `s`) meeting the E side of the separation.
fn cells_meeting_e(domain: &Domain, sep: &Separation, s: f64) -> HashSet<Cell> {
    let mut cells = HashSet::new();
    for &ei in &sep.e_indices {
        let comp = &domain.components()[ei];
        // bounding box via distance probing around the representative
        let (lo, hi) = component_bbox(comp);
        let i0 = ((lo.x) / s).floor() as i64 - 1;
        let i1 = ((hi.x) / s).ceil() as i64 + 1;
        let j0 = ((lo.y) / s).floor() as i64 - 1;
        let j1 = ((hi.y) / s).ceil() as i64 + 1;
        for i in i0..=i1 {
            for j in j0..=j1 {
                let (x0, y0) = cell_square((i, j), s);
                if comp.dist_square(x0, y0, s) == 0.0 {
                    cells.insert((i, j));
                }
            }
        }
    }
    cells
}

fn component_bbox(comp: &crate::domain::ComplementComponent) -> (Pt, Pt) {
    use crate::domain::ComplementComponent as C;
    match comp {
        C::Disk { center, radius } => (
            pt(center.x - radius, center.y - radius),
            pt(center.x + radius, center.y + radius),
        ),
        C::Point { location } => (*location, *location),
        C::Polygon { vertices } => {
            let mut lo = pt(f64::INFINITY, f64::INFINITY);
            let mut hi = pt(f64::NEG_INFINITY, f64::NEG_INFINITY);
            for v in vertices {
                lo = pt(lo.x.min(v.x), lo.y.min(v.y));
                hi = pt(hi.x.max(v.x), hi.y.max(v.y));
            }
            (lo, hi)
        }
        C::UnboundedCap { radius } => (pt(-radius, -radius), pt(*radius, *radius)),
    }
}

/// The square-net cycle of the separation: boundary of the union of all
/// net cells meeting E, shared edges cancelled. Cell size is half the gap.
pub fn square_net_cycle(domain: &Domain, sep: &Separation) -> LatticeCycle {
    let d = gap_distance(domain, sep);
    square_net_cycle_with(domain, sep, d / 2.0)
}

/// As [`square_net_cycle`] with an explicit cell size.
pub fn square_net_cycle_with(domain: &Domain, sep: &Separation, s: f64) -> LatticeCycle {
    let cells = cells_meeting_e(domain, sep, s);
    LatticeCycle {
        cell: s,
        edges: boundary_edges(&cells),
    }
}

/// Partition the cycle edges into edge-disjoint, pairwise non-crossing
/// simple closed rectilinear curves. At four-edge vertices the strands turn
/// left (toward the interior), which keeps them from crossing.
pub fn decompose_cycle(cycle: &LatticeCycle) -> Result<Vec<PolyCurve>, NetError> {
    if !cycle.degrees_ok() {
        return Err(NetError::MalformedCycle(
            "in/out degrees unbalanced or a vertex meets more than four edges".into(),
        ));
    }
    let mut out_edges: HashMap<Vertex, Vec<Vertex>> = HashMap::new();
    for &(a, b) in &cycle.edges {
        out_edges.entry(a).or_default().push(b);
    }
    let mut used: HashSet<(Vertex, Vertex)> = HashSet::new();
    let mut curves = Vec::new();
    for &(start, first) in &cycle.edges {
        if used.contains(&(start, first)) {
            continue;
        }
        let mut path = vec![start];
        let mut prev = start;
        let mut cur = first;
        used.insert((start, first));
        while cur != start {
            path.push(cur);
            let dir = (cur.0 - prev.0, cur.1 - prev.1);
            // candidate directions: left, straight, right (never reverse)
            let left = (-dir.1, dir.0);
            let right = (dir.1, -dir.0);
            let nexts = out_edges.get(&cur).ok_or_else(|| {
                NetError::MalformedCycle("dangling vertex".into())
            })?;
            let mut chosen = None;
            for cand_dir in [left, dir, right] {
                let cand = (cur.0 + cand_dir.0, cur.1 + cand_dir.1);
                if nexts.contains(&cand) && !used.contains(&(cur, cand)) {
                    chosen = Some(cand);
                    break;
                }
            }
            let nxt = chosen.ok_or_else(|| {
                NetError::MalformedCycle("walk stuck before closing".into())
            })?;
            used.insert((cur, nxt));
            prev = cur;
            cur = nxt;
        }
        let verts: Vec<Pt> = path.iter().map(|&v| cycle.to_point(v)).collect();
        curves.push(PolyCurve::new(verts).simplified(1e-12 * cycle.cell.max(1.0)));
    }
    Ok(curves)
}

/// Internal region state for the merge: a set of half-lattice cells.
struct Region<'a> {
    t: f64,
    cells: HashSet<Cell>,
    domain: &'a Domain,
    sep: &'a Separation,
    margin: f64,
    bounds: (i64, i64, i64, i64),
    barrier: Option<(Pt, Pt)>,
    addable_cache: HashMap<Cell, bool>,
    removable_cache: HashMap<Cell, bool>,
}

impl<'a> Region<'a> {
    fn addable(&mut self, c: Cell) -> bool {
        let (i0, i1, j0, j1) = self.bounds;
        if c.0 < i0 || c.0 > i1 || c.1 < j0 || c.1 > j1 {
            return false;
        }
        let (t, margin) = (self.t, self.margin);
        let (domain, sep) = (self.domain, self.sep);
        let barrier = self.barrier;
        *self.addable_cache.entry(c).or_insert_with(|| {
            let (x0, y0) = cell_square(c, t);
            if let Some((a, b)) = barrier {
                let center = pt(x0 + t / 2.0, y0 + t / 2.0);
                if crate::geom::dist_point_segment(center, a, b) <= margin + t {
                    return false;
                }
            }
            sep.f_indices
                .iter()
                .all(|&fi| domain.components()[fi].dist_square(x0, y0, t) > margin)
        })
    }

    fn removable(&mut self, c: Cell) -> bool {
        let (t, margin) = (self.t, self.margin);
        let (domain, sep) = (self.domain, self.sep);
        *self.removable_cache.entry(c).or_insert_with(|| {
            let (x0, y0) = cell_square(c, t);
            sep.e_indices
                .iter()
                .all(|&ei| domain.components()[ei].dist_square(x0, y0, t) > margin)
        })
    }

    fn components(&self) -> Vec<Vec<Cell>> {
        let mut seen: HashSet<Cell> = HashSet::new();
        let mut comps = Vec::new();
        let mut order: Vec<Cell> = self.cells.iter().copied().collect();
        order.sort_unstable();
        for &start in &order {
            if seen.contains(&start) {
                continue;
            }
            let mut comp = Vec::new();
            let mut queue = VecDeque::from([start]);
            seen.insert(start);
            while let Some(c) = queue.pop_front() {
                comp.push(c);
                for n in neighbors(c) {
                    if self.cells.contains(&n) && seen.insert(n) {
                        queue.push_back(n);
                    }
                }
            }
            comps.push(comp);
        }
        comps
    }

    /// BFS from the first component through addable free cells until a cell
    /// adjacent to another component is found; add the connecting corridor.
    fn connect_components(&mut self, comps: &[Vec<Cell>]) -> Result<(), NetError> {
        let first: HashSet<Cell> = comps[0].iter().copied().collect();
        let mut frontier: VecDeque<Cell> = VecDeque::new();
        let mut parent: HashMap<Cell, Cell> = HashMap::new();
        for &c in &comps[0] {
            frontier.push_back(c);
        }
        let mut seen: HashSet<Cell> = first.clone();
        while let Some(c) = frontier.pop_front() {
            for n in neighbors(c) {
                if seen.contains(&n) {
                    continue;
                }
                if self.cells.contains(&n) && !first.contains(&n) {
                    // reached another component; add the corridor
                    let mut cur = c;
                    while !first.contains(&cur) {
                        self.cells.insert(cur);
                        cur = parent[&cur];
                    }
                    return Ok(());
                }
                if !self.cells.contains(&n) && self.addable(n) {
                    seen.insert(n);
                    parent.insert(n, c);
                    frontier.push_back(n);
                }
            }
        }
        Err(NetError::NoPath)
    }

    /// Hole cells: free cells in the inflated bounding box not connected to
    /// the outside.
    fn holes(&self) -> Vec<Vec<Cell>> {
        if self.cells.is_empty() {
            return Vec::new();
        }
        let (mut i0, mut i1, mut j0, mut j1) = (i64::MAX, i64::MIN, i64::MAX, i64::MIN);
        for &(i, j) in &self.cells {
            i0 = i0.min(i);
            i1 = i1.max(i);
            j0 = j0.min(j);
            j1 = j1.max(j);
        }
        i0 -= 1;
        i1 += 1;
        j0 -= 1;
        j1 += 1;
        let inside_box = |c: Cell| c.0 >= i0 && c.0 <= i1 && c.1 >= j0 && c.1 <= j1;
        // flood the outside from the box border
        let mut outside: HashSet<Cell> = HashSet::new();
        let mut queue = VecDeque::from([(i0, j0)]);
        outside.insert((i0, j0));
        while let Some(c) = queue.pop_front() {
            for n in neighbors(c) {
                if inside_box(n) && !self.cells.contains(&n) && outside.insert(n) {
                    queue.push_back(n);
                }
            }
        }
        // remaining free cells are holes; group them
        let mut seen: HashSet<Cell> = HashSet::new();
        let mut holes = Vec::new();
        let mut order: Vec<Cell> = Vec::new();
        for i in i0..=i1 {
            for j in j0..=j1 {
                order.push((i, j));
            }
        }
        for c in order {
            if self.cells.contains(&c) || outside.contains(&c) || seen.contains(&c) {
                continue;
            }
            let mut hole = Vec::new();
            let mut queue = VecDeque::from([c]);
            seen.insert(c);
            while let Some(h) = queue.pop_front() {
                hole.push(h);
                for n in neighbors(h) {
                    if inside_box(n)
                        && !self.cells.contains(&n)
                        && !outside.contains(&n)
                        && seen.insert(n)
                    {
                        queue.push_back(n);
                    }
                }
            }
            holes.push(hole);
        }
        holes
    }

    /// Carve a channel of removable cells from a hole to the outside.
    fn open_hole(&mut self, hole: &[Cell]) -> Result<(), NetError> {
        let hole_set: HashSet<Cell> = hole.iter().copied().collect();
        let mut frontier: VecDeque<Cell> = hole.iter().copied().collect();
        let mut seen: HashSet<Cell> = hole_set.clone();
        let mut parent: HashMap<Cell, Cell> = HashMap::new();
        while let Some(c) = frontier.pop_front() {
            for n in neighbors(c) {
                if seen.contains(&n) {
                    continue;
                }
                if !self.cells.contains(&n) && !hole_set.contains(&n) {
                    // n is free and not in this hole: it is outside (or in
                    // another hole, which still reduces the hole count)
                    let mut cur = c;
                    while !hole_set.contains(&cur) {
                        self.cells.remove(&cur);
                        cur = parent[&cur];
                    }
                    return Ok(());
                }
                if self.cells.contains(&n) && self.removable(n) {
                    seen.insert(n);
                    parent.insert(n, c);
                    frontier.push_back(n);
                }
            }
        }
        Err(NetError::NoPath)
    }

    /// Resolve diagonal self-touches of the region so that the boundary is a
    /// single curve without pinch vertices.
    fn resolve_pinches(&mut self) -> Result<bool, NetError> {
        let mut cells: Vec<Cell> = self.cells.iter().copied().collect();
        cells.sort_unstable();
        let mut changed = false;
        for (i, j) in cells {
            for (di, dj) in [(1i64, 1i64), (1, -1)] {
                let diag = (i + di, j + dj);
                let a = (i + di, j);
                let b = (i, j + dj);
                if self.cells.contains(&diag)
                    && !self.cells.contains(&a)
                    && !self.cells.contains(&b)
                {
                    if self.addable(a) {
                        self.cells.insert(a);
                    } else if self.addable(b) {
                        self.cells.insert(b);
                    } else if self.removable((i, j)) {
                        self.cells.remove(&(i, j));
                    } else if self.removable(diag) {
                        self.cells.remove(&diag);
                    } else {
                        return Err(NetError::NoPath);
                    }
                    changed = true;
                }
            }
        }
        Ok(changed)
    }
}

fn neighbors(c: Cell) -> [Cell; 4] {
    [
        (c.0 + 1, c.1),
        (c.0 - 1, c.1),
        (c.0, c.1 + 1),
        (c.0, c.1 - 1),
    ]
}

/// Merge the decomposed curves into one simple closed rectilinear curve in
/// the domain separating E and F, by corridor and channel construction on
/// the lattice of spacing `s / 2`.
pub fn merge_to_single(
    curves: &[PolyCurve],
    domain: &Domain,
    sep: &Separation,
    s: f64,
) -> Result<PolyCurve, NetError> {
    merge_to_single_with_barrier(curves, domain, sep, s, None)
}

/// As [`merge_to_single`], with an optional segment that corridors must not
/// cross. A barrier forces the merge to route around the other side of an
/// obstacle, which produces separating curves in other isotopy classes.
pub fn merge_to_single_with_barrier(
    curves: &[PolyCurve],
    domain: &Domain,
    sep: &Separation,
    s: f64,
    barrier: Option<(Pt, Pt)>,
) -> Result<PolyCurve, NetError> {
    let t = s / 2.0;
    let margin = s / 4.0;

    // region covered by the input curves, on the refined lattice
    let mut cells: HashSet<Cell> = HashSet::new();
    let mut bbox = (i64::MAX, i64::MIN, i64::MAX, i64::MIN);
    for c in curves {
        for v in c.vertices() {
            let i = (v.x / t).round() as i64;
            let j = (v.y / t).round() as i64;
            bbox.0 = bbox.0.min(i - 2);
            bbox.1 = bbox.1.max(i + 2);
            bbox.2 = bbox.2.min(j - 2);
            bbox.3 = bbox.3.max(j + 2);
        }
    }
    if bbox.0 > bbox.1 {
        return Err(NetError::MalformedCycle("no input curves".into()));
    }
    // winding of each candidate cell center over the sum of the curves
    for j in bbox.2..=bbox.3 {
        let cy = (j as f64 + 0.5) * t;
        // collect signed x-crossings of the horizontal line y = cy
        let mut crossings: Vec<(f64, i64)> = Vec::new();
        for c in curves {
            for (a, b) in c.segments() {
                if (a.y <= cy) != (b.y <= cy) {
                    let x = a.x + (b.x - a.x) * (cy - a.y) / (b.y - a.y);
                    let sign = if b.y > a.y { 1 } else { -1 };
                    crossings.push((x, sign));
                }
            }
        }
        crossings.sort_by(|p, q| p.0.partial_cmp(&q.0).unwrap());
        // winding at x = total of signs of crossings to the right
        let total: i64 = crossings.iter().map(|&(_, s)| s).sum();
        let mut left_sum = 0i64;
        let mut k = 0usize;
        for i in bbox.0..=bbox.1 {
            let cx = (i as f64 + 0.5) * t;
            while k < crossings.len() && crossings[k].0 < cx {
                left_sum += crossings[k].1;
                k += 1;
            }
            if total - left_sum != 0 {
                cells.insert((i, j));
            }
        }
    }

    // grow by the margin around E so the boundary keeps its clearance
    for &ei in &sep.e_indices {
        let comp = &domain.components()[ei];
        let (lo, hi) = component_bbox(comp);
        let i0 = ((lo.x - margin) / t).floor() as i64 - 1;
        let i1 = ((hi.x + margin) / t).ceil() as i64 + 1;
        let j0 = ((lo.y - margin) / t).floor() as i64 - 1;
        let j1 = ((hi.y + margin) / t).ceil() as i64 + 1;
        for i in i0..=i1 {
            for j in j0..=j1 {
                let (x0, y0) = cell_square((i, j), t);
                if comp.dist_square(x0, y0, t) <= margin {
                    cells.insert((i, j));
                }
            }
        }
    }

    // working bounds: the window disk when a cap exists, else the inflated bbox
    let bounds = match domain.cap_radius() {
        Some(r) => {
            let n = (r / t).ceil() as i64 + 2;
            (-n, n, -n, n)
        }
        None => (bbox.0 - 64, bbox.1 + 64, bbox.2 - 64, bbox.3 + 64),
    };

    let mut region = Region {
        t,
        cells,
        domain,
        sep,
        margin,
        bounds,
        barrier,
        addable_cache: HashMap::new(),
        removable_cache: HashMap::new(),
    };

    for _ in 0..200 {
        let comps = region.components();
        if comps.is_empty() {
            return Err(NetError::MalformedCycle("empty region".into()));
        }
        if comps.len() > 1 {
            region.connect_components(&comps)?;
            continue;
        }
        let holes = region.holes();
        if let Some(hole) = holes.first() {
            region.open_hole(hole)?;
            continue;
        }
        if region.resolve_pinches()? {
            continue;
        }
        // region is connected, hole-free and pinch-free: trace the boundary
        return trace_single_boundary(&region.cells, t);
    }
    Err(NetError::NoPath)
}

fn trace_single_boundary(cells: &HashSet<Cell>, t: f64) -> Result<PolyCurve, NetError> {
    let edges = boundary_edges(cells);
    let mut out_edge: HashMap<Vertex, Vertex> = HashMap::new();
    for &(a, b) in &edges {
        if out_edge.insert(a, b).is_some() {
            return Err(NetError::MalformedCycle(
                "pinch vertex left in merged region".into(),
            ));
        }
    }
    let &(start, _) = edges.first().ok_or(NetError::MalformedCycle("no edges".into()))?;
    let mut path = vec![start];
    let mut cur = out_edge[&start];
    while cur != start {
        path.push(cur);
        cur = *out_edge
            .get(&cur)
            .ok_or_else(|| NetError::MalformedCycle("open boundary".into()))?;
    }
    if path.len() != edges.len() {
        return Err(NetError::MalformedCycle(
            "boundary is not a single closed curve".into(),
        ));
    }
    let verts: Vec<Pt> = path
        .iter()
        .map(|&(i, j)| pt(i as f64 * t, j as f64 * t))
        .collect();
    Ok(PolyCurve::new(verts).simplified(1e-12 * t.max(1.0)))
}

/// Full pipeline: build the net cycle, decompose, merge, halving the cell
/// size on failure.
pub fn separating_curve(domain: &Domain, sep: &Separation) -> Result<PolyCurve, NetError> {
    separating_curve_with_barrier(domain, sep, None)
}

/// As [`separating_curve`] with a corridor barrier (see
/// [`merge_to_single_with_barrier`]).
pub fn separating_curve_with_barrier(
    domain: &Domain,
    sep: &Separation,
    barrier: Option<(Pt, Pt)>,
) -> Result<PolyCurve, NetError> {
    let d = gap_distance(domain, sep);
    let mut s = d / 2.0;
    let mut last = NetError::NoPath;
    for _ in 0..6 {
        let cycle = square_net_cycle_with(domain, sep, s);
        match decompose_cycle(&cycle)
            .and_then(|curves| merge_to_single_with_barrier(&curves, domain, sep, s, barrier))
        {
            Ok(c) => return Ok(c),
            Err(e) => {
                last = e;
                s /= 2.0;
            }
        }
    }
    Err(last)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{make_domain, make_separation, Comp};
    use crate::topology::{self, homology_class, winding_number, HomologyClass};

    fn annulus() -> (Domain, Separation) {
        let d = make_domain(vec![Comp::disk(Pt::ZERO, 0.25), Comp::cap(1.0)]).unwrap();
        let sep = make_separation(&d, &[0]).unwrap();
        (d, sep)
    }

    #[test]
    fn single_point_net_is_one_cell_block() {
        let d = make_domain(vec![
            Comp::point(Pt::ZERO),
            Comp::point(pt(1.0, 1.0)),
            Comp::point(pt(-1.0, 1.0)),
        ])
        .unwrap();
        // probe the cycle around the origin (field-level separation, since a
        // single-point side is not a valid hyperbolic separation)
        let sep0 = crate::domain::Separation {
            e_indices: vec![0],
            f_indices: vec![1, 2],
        };
        let cycle = square_net_cycle_with(&d, &sep0, 0.5);
        // origin on a lattice corner: a 2x2 block of cells
        assert_eq!(cycle.edges.len(), 8);
        assert_eq!(cycle.winding(Pt::ZERO), 1);
        assert_eq!(cycle.winding(pt(1.0, 1.0)), 0);
    }

    #[test]
    fn annulus_net_cycle_windings() {
        let (d, sep) = annulus();
        let cycle = square_net_cycle(&d, &sep);
        assert!(cycle.degrees_ok());
        assert_eq!(cycle.winding(Pt::ZERO), 1);
        assert_eq!(cycle.winding(pt(0.9, 0.0)), 0);
        let curves = decompose_cycle(&cycle).unwrap();
        for c in &curves {
            assert!(topology::self_intersections(c).is_simple());
        }
    }

    #[test]
    fn two_separated_blocks_decompose_into_two_rectangles() {
        let cycle = LatticeCycle {
            cell: 1.0,
            edges: {
                let mut cells = HashSet::new();
                cells.insert((0, 0));
                cells.insert((5, 0));
                boundary_edges(&cells)
            },
        };
        let curves = decompose_cycle(&cycle).unwrap();
        assert_eq!(curves.len(), 2);
    }

    #[test]
    fn pinch_vertex_decomposes_without_crossing() {
        let mut cells = HashSet::new();
        cells.insert((0, 0));
        cells.insert((1, 1));
        let cycle = LatticeCycle {
            cell: 1.0,
            edges: boundary_edges(&cells),
        };
        assert!(cycle.degrees_ok());
        let curves = decompose_cycle(&cycle).unwrap();
        assert_eq!(curves.len(), 2);
        for c in &curves {
            assert!(topology::self_intersections(c).is_simple());
        }
    }

    #[test]
    fn merge_single_curve_annulus() {
        let (d, sep) = annulus();
        let c = separating_curve(&d, &sep).unwrap();
        assert!(topology::self_intersections(&c).is_simple());
        assert!(c.clearance(&d) > 0.0);
        assert_eq!(winding_number(&c, Pt::ZERO).unwrap(), 1);
        assert!(topology::separates_by_parity(&c, &d, &sep).unwrap());
    }

    #[test]
    fn merge_two_squares_around_points() {
        // two points of E far apart, F = a cap
        let d = make_domain(vec![
            Comp::point(pt(-1.0, 0.0)),
            Comp::point(pt(1.0, 0.0)),
            Comp::cap(3.0),
        ])
        .unwrap();
        let sep = make_separation(&d, &[0, 1]).unwrap();
        let c = separating_curve(&d, &sep).unwrap();
        assert!(topology::self_intersections(&c).is_simple());
        assert_eq!(winding_number(&c, pt(-1.0, 0.0)).unwrap(), 1);
        assert_eq!(winding_number(&c, pt(1.0, 0.0)).unwrap(), 1);
        assert!(topology::separates(&c, &d, &sep).unwrap());
    }

    #[test]
    fn merge_thm14_homology() {
        let d = make_domain(vec![
            Comp::disk(pt(0.0, 3.5), 0.5),
            Comp::disk(pt(0.0, -3.5), 0.5),
            Comp::disk(Pt::ZERO, 2.0),
            Comp::cap(5.0),
        ])
        .unwrap();
        let sep = make_separation(&d, &[0, 1]).unwrap();
        let c = separating_curve(&d, &sep).unwrap();
        assert!(topology::self_intersections(&c).is_simple());
        assert_eq!(
            homology_class(&c, &d).unwrap(),
            HomologyClass(vec![1, 1, 0])
        );
        assert!(topology::separates(&c, &d, &sep).unwrap());
        // clearance margin from the construction
        let dgap = gap_distance(&d, &sep);
        assert!(c.clearance(&d) >= dgap / 2.0 / 4.0 - 1e-9);
    }

    #[test]
    fn random_domains_produce_simple_separating_curves() {
        use rand::prelude::*;
        use rand_chacha::ChaCha8Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut done = 0;
        while done < 20 {
            let n: usize = rng.gen_range(2..=4);
            let mut comps: Vec<Comp> = Vec::new();
            'place: for _ in 0..n {
                for _ in 0..50 {
                    let c = pt(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
                    let r = rng.gen_range(0.05..0.4);
                    let cand = if rng.gen_bool(0.3) {
                        Comp::point(c)
                    } else {
                        Comp::disk(c, r)
                    };
                    if comps
                        .iter()
                        .all(|o| crate::domain::component_gap(o, &cand) > 0.15)
                    {
                        comps.push(cand);
                        continue 'place;
                    }
                }
            }
            comps.push(Comp::cap(4.0));
            let Ok(d) = make_domain(comps) else { continue };
            let nb = d.bounded_indices().len();
            let k = rng.gen_range(1..=nb);
            let mut e: Vec<usize> = (0..nb).collect();
            e.shuffle(&mut rng);
            e.truncate(k);
            let Ok(sep) = make_separation(&d, &e) else {
                continue;
            };
            let c = separating_curve(&d, &sep).unwrap();
            assert!(topology::self_intersections(&c).is_simple());
            assert!(topology::separates(&c, &d, &sep).unwrap());
            assert!(c.clearance(&d) > 0.0);
            done += 1;
        }
    }

    #[test]
    fn single_curve_passes_through_merge_unchanged_in_class() {
        let (d, sep) = annulus();
        let cycle = square_net_cycle(&d, &sep);
        let curves = decompose_cycle(&cycle).unwrap();
        assert_eq!(curves.len(), 1);
        let merged = merge_to_single(&curves, &d, &sep, cycle.cell).unwrap();
        assert_eq!(
            homology_class(&merged, &d).unwrap(),
            homology_class(&curves[0], &d).unwrap()
        );
    }
}
