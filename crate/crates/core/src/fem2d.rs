//! Neumann eigenvalues of the Laplacian on convex polygons with linear
//! triangular elements.
//!
//! Thin domains are handled by an affine change of variables: the polygon is
//! turned so its diameter lies along the x-axis and stretched in y to unit
//! aspect, and the stretch is moved into the coefficients of the operator
//! (`−∂ₓₓ − c²∂ᵧᵧ`). Large `c` punishes any spurious y-gradient, so those
//! problems are meshed in columns: nodes sit on vertical sections and every
//! triangle has two nodes on a common vertical, which represents functions of
//! `x` alone without y-gradient error.

use crate::eigen::{smallest_generalized, EigenOptions};
use crate::error::{Error, Result};
use crate::geometry::{align_to_diameter, diameter, ConvexPolygon, Vec2};
use crate::sparse::SparseSymmetric;
use crate::sturm::EigenResult;
use spade::{DelaunayTriangulation, HasPosition, Point2, Triangulation};
use std::collections::HashMap;

/// Default cap on the number of mesh nodes.
pub const DEFAULT_NODE_CAP: usize = 500_000;

/// Width-to-diameter ratio below which [`neumann_eigs_thin`] applies.
pub const THIN_ASPECT: f64 = 0.2;

/// Conforming triangulation; triangles are counter-clockwise.
#[derive(Debug, Clone)]
pub struct TriMesh {
    pub nodes: Vec<Vec2>,
    pub triangles: Vec<[usize; 3]>,
    /// Whether each node lies on the boundary.
    pub boundary: Vec<bool>,
}

fn signed_area(a: &Vec2, b: &Vec2, c: &Vec2) -> f64 {
    0.5 * ((b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x))
}

fn edge_key(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

fn triangle_angles(a: &Vec2, b: &Vec2, c: &Vec2) -> [f64; 3] {
    let angle = |p: &Vec2, q: &Vec2, r: &Vec2| {
        let (u, v) = (q - p, r - p);
        (u.x * v.y - u.y * v.x).abs().atan2(u.dot(&v))
    };
    [angle(a, b, c), angle(b, c, a), angle(c, a, b)]
}

impl TriMesh {
    /// Builds a mesh and derives boundary flags from the edge topology.
    pub fn new(nodes: Vec<Vec2>, triangles: Vec<[usize; 3]>) -> Result<Self> {
        let mut mesh = TriMesh { boundary: vec![false; nodes.len()], nodes, triangles };
        for t in &mut mesh.triangles {
            if t.iter().any(|&i| i >= mesh.nodes.len()) {
                return Err(Error::Mesh("triangle references a missing node".into()));
            }
            if signed_area(&mesh.nodes[t[0]], &mesh.nodes[t[1]], &mesh.nodes[t[2]]) < 0.0 {
                t.swap(1, 2);
            }
        }
        for (a, b) in mesh.boundary_edges()? {
            mesh.boundary[a] = true;
            mesh.boundary[b] = true;
        }
        Ok(mesh)
    }

    pub fn n_nodes(&self) -> usize {
        self.nodes.len()
    }

    fn edge_counts(&self) -> HashMap<(usize, usize), usize> {
        let mut counts = HashMap::with_capacity(3 * self.triangles.len());
        for t in &self.triangles {
            for i in 0..3 {
                *counts.entry(edge_key(t[i], t[(i + 1) % 3])).or_insert(0) += 1;
            }
        }
        counts
    }

    /// Edges used by exactly one triangle; errors if an edge is shared by
    /// more than two.
    pub fn boundary_edges(&self) -> Result<Vec<(usize, usize)>> {
        let mut out = Vec::new();
        for (e, c) in self.edge_counts() {
            match c {
                1 => out.push(e),
                2 => {}
                _ => return Err(Error::Mesh(format!("edge {e:?} is shared by {c} triangles"))),
            }
        }
        out.sort_unstable();
        Ok(out)
    }

    pub fn triangle_area(&self, t: usize) -> f64 {
        let [a, b, c] = self.triangles[t];
        signed_area(&self.nodes[a], &self.nodes[b], &self.nodes[c])
    }

    pub fn area(&self) -> f64 {
        (0..self.triangles.len()).map(|t| self.triangle_area(t)).sum()
    }

    pub fn max_edge(&self) -> f64 {
        self.edge_counts().keys().map(|&(a, b)| (self.nodes[a] - self.nodes[b]).norm()).fold(0.0, f64::max)
    }

    /// Smallest interior angle over all triangles, in radians.
    pub fn min_angle(&self) -> f64 {
        self.triangles
            .iter()
            .flat_map(|t| triangle_angles(&self.nodes[t[0]], &self.nodes[t[1]], &self.nodes[t[2]]))
            .fold(f64::INFINITY, f64::min)
    }

    /// Checks orientation and the edge-manifold property.
    pub fn validate(&self) -> Result<()> {
        for t in 0..self.triangles.len() {
            if !(self.triangle_area(t) > 0.0) {
                return Err(Error::DegenerateTriangle { index: t, area: self.triangle_area(t) });
            }
        }
        self.boundary_edges().map(|_| ())
    }

    /// Red refinement: every triangle is split into four through its edge
    /// midpoints. The discrete spaces are nested.
    pub fn refined(&self) -> TriMesh {
        let mut nodes = self.nodes.clone();
        let mut boundary = self.boundary.clone();
        let boundary_edges: std::collections::HashSet<(usize, usize)> =
            self.edge_counts().into_iter().filter(|&(_, c)| c == 1).map(|(e, _)| e).collect();
        let mut midpoint: HashMap<(usize, usize), usize> = HashMap::new();
        let mut mid = |a: usize, b: usize, nodes: &mut Vec<Vec2>, boundary: &mut Vec<bool>| {
            let key = edge_key(a, b);
            *midpoint.entry(key).or_insert_with(|| {
                nodes.push(0.5 * (nodes[a] + nodes[b]));
                boundary.push(boundary_edges.contains(&key));
                nodes.len() - 1
            })
        };
        let mut triangles = Vec::with_capacity(4 * self.triangles.len());
        for &[a, b, c] in &self.triangles {
            let ab = mid(a, b, &mut nodes, &mut boundary);
            let bc = mid(b, c, &mut nodes, &mut boundary);
            let ca = mid(c, a, &mut nodes, &mut boundary);
            triangles.extend([[a, ab, ca], [ab, b, bc], [ca, bc, c], [ab, bc, ca]]);
        }
        TriMesh { nodes, triangles, boundary }
    }
}

struct Site {
    position: Point2<f64>,
    id: usize,
}

impl HasPosition for Site {
    type Scalar = f64;

    fn position(&self) -> Point2<f64> {
        self.position
    }
}

/// Mesh of a convex polygon with edges no longer than `h_target`.
pub fn mesh_polygon(poly: &ConvexPolygon, h_target: f64) -> Result<TriMesh> {
    mesh_polygon_capped(poly, h_target, DEFAULT_NODE_CAP)
}

/// [`mesh_polygon`] with an explicit node budget.
pub fn mesh_polygon_capped(poly: &ConvexPolygon, h_target: f64, node_cap: usize) -> Result<TriMesh> {
    let d = diameter(poly).length;
    if !(h_target > 0.0 && h_target <= 0.25 * d) {
        return Err(Error::Domain(format!("mesh size must lie in (0, D/4] = (0, {}], got {h_target}", 0.25 * d)));
    }
    // the lattice spacing is shrunk until the Delaunay mesh meets the edge bound
    let mut spacing = 0.6 * h_target;
    for _ in 0..8 {
        let estimate = 1.2 * poly.area() / (0.5 * 3f64.sqrt() * spacing * spacing);
        if estimate > node_cap as f64 {
            break;
        }
        let mesh = triangulate(poly, spacing)?;
        if mesh.n_nodes() > node_cap {
            break;
        }
        let mesh = smooth(mesh, h_target, 5);
        if mesh.max_edge() <= h_target {
            mesh.validate()?;
            return Ok(mesh);
        }
        spacing *= 0.85;
    }
    Err(Error::Mesh(format!("refinement budget of {node_cap} nodes exceeded at h = {h_target}")))
}

fn triangulate(poly: &ConvexPolygon, s: f64) -> Result<TriMesh> {
    let mut points: Vec<Vec2> = Vec::new();
    for (a, b) in poly.edges() {
        let n = ((b - a).norm() / s).ceil().max(1.0) as usize;
        for i in 0..n {
            let t = i as f64 / n as f64;
            points.push(a + (b - a) * t);
        }
    }
    let n_boundary = points.len();
    let (x0, x1) = poly.x_range();
    let (y0, y1) = poly.y_range();
    let dy = 0.5 * 3f64.sqrt() * s;
    let rows = ((y1 - y0) / dy).ceil() as usize + 1;
    let cols = ((x1 - x0) / s).ceil() as usize + 2;
    for j in 0..rows {
        let y = y0 + j as f64 * dy;
        let shift = if j % 2 == 0 { 0.0 } else { 0.5 * s };
        for i in 0..cols {
            let p = Vec2::new(x0 + shift + i as f64 * s, y);
            if poly.inner_distance(&p) >= 0.45 * s {
                points.push(p);
            }
        }
    }
    let sites: Vec<Site> =
        points.iter().enumerate().map(|(id, p)| Site { position: Point2::new(p.x, p.y), id }).collect();
    let dt = DelaunayTriangulation::<Site>::bulk_load_stable(sites)
        .map_err(|e| Error::Mesh(format!("Delaunay triangulation failed: {e:?}")))?;
    if dt.num_vertices() != points.len() {
        return Err(Error::Mesh("duplicate mesh points".into()));
    }
    let sliver = 1e-10 * s * s;
    let triangles: Vec<[usize; 3]> = dt
        .inner_faces()
        .map(|f| {
            let v = f.vertices();
            [v[0].data().id, v[1].data().id, v[2].data().id]
        })
        .filter(|t| signed_area(&points[t[0]], &points[t[1]], &points[t[2]]).abs() > sliver)
        .collect();
    let mesh = TriMesh::new(points, triangles)?;
    if mesh.boundary.iter().take(n_boundary).any(|&b| !b) {
        return Err(Error::Mesh("a boundary point was swallowed by the triangulation".into()));
    }
    Ok(mesh)
}

/// Constrained Laplacian smoothing of interior nodes: a move is kept only if
/// it does not shrink the smallest angle around the node or stretch an edge
/// past `h_max`.
fn smooth(mut mesh: TriMesh, h_max: f64, passes: usize) -> TriMesh {
    let n = mesh.n_nodes();
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut neighbours: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (ti, t) in mesh.triangles.iter().enumerate() {
        for i in 0..3 {
            incident[t[i]].push(ti);
            for j in 0..3 {
                if i != j && !neighbours[t[i]].contains(&t[j]) {
                    neighbours[t[i]].push(t[j]);
                }
            }
        }
    }
    let local_quality = |mesh: &TriMesh, tris: &[usize]| -> (f64, f64) {
        let mut min_angle = f64::INFINITY;
        let mut max_edge = 0.0_f64;
        for &ti in tris {
            let [a, b, c] = mesh.triangles[ti];
            let (pa, pb, pc) = (mesh.nodes[a], mesh.nodes[b], mesh.nodes[c]);
            if signed_area(&pa, &pb, &pc) <= 0.0 {
                return (f64::NEG_INFINITY, f64::INFINITY);
            }
            min_angle = triangle_angles(&pa, &pb, &pc).into_iter().fold(min_angle, f64::min);
            max_edge = max_edge.max((pa - pb).norm()).max((pb - pc).norm()).max((pc - pa).norm());
        }
        (min_angle, max_edge)
    };
    for _ in 0..passes {
        for v in 0..n {
            if mesh.boundary[v] || neighbours[v].is_empty() {
                continue;
            }
            let old = mesh.nodes[v];
            let (angle_before, _) = local_quality(&mesh, &incident[v]);
            let centre = neighbours[v].iter().map(|&u| mesh.nodes[u]).sum::<Vec2>() / neighbours[v].len() as f64;
            mesh.nodes[v] = centre;
            let (angle_after, edge_after) = local_quality(&mesh, &incident[v]);
            if angle_after < angle_before || edge_after > h_max {
                mesh.nodes[v] = old;
            }
        }
    }
    mesh
}

/// Column mesh of a polygon: vertical sections at every vertex abscissa and
/// at a uniform subdivision of spacing at most `h_target` in between, each
/// section split evenly into pieces no longer than `h_target`. Adjacent
/// columns are stitched by advancing along both in step.
pub fn column_mesh(poly: &ConvexPolygon, h_target: f64) -> Result<TriMesh> {
    let d = diameter(poly).length;
    if !(h_target > 0.0 && h_target <= 0.25 * d) {
        return Err(Error::Domain(format!("mesh size must lie in (0, D/4] = (0, {}], got {h_target}", 0.25 * d)));
    }
    let mut xs: Vec<f64> = poly.vertices().iter().map(|p| p.x).collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup_by(|a, b| (*a - *b).abs() <= 1e-14 * d);
    let mut columns_x = vec![xs[0]];
    for pair in xs.windows(2) {
        let n = ((pair[1] - pair[0]) / h_target).ceil().max(1.0) as usize;
        for i in 1..=n {
            columns_x.push(if i == n { pair[1] } else { pair[0] + (pair[1] - pair[0]) * i as f64 / n as f64 });
        }
    }
    let estimate: f64 = columns_x.len() as f64 * (poly.y_range().1 - poly.y_range().0) / h_target;
    if estimate > DEFAULT_NODE_CAP as f64 {
        return Err(Error::Mesh(format!("refinement budget of {DEFAULT_NODE_CAP} nodes exceeded at h = {h_target}")));
    }
    let mut nodes: Vec<Vec2> = Vec::new();
    let mut columns: Vec<Vec<usize>> = Vec::with_capacity(columns_x.len());
    for &x in &columns_x {
        let (lo, hi) = poly.vertical_section(x).ok_or_else(|| Error::Mesh(format!("empty section at x = {x}")))?;
        let len = hi - lo;
        let m = if len <= 1e-12 * d { 0 } else { (len / h_target).ceil() as usize };
        let start = nodes.len();
        if m == 0 {
            nodes.push(Vec2::new(x, 0.5 * (lo + hi)));
        } else {
            for j in 0..=m {
                nodes.push(Vec2::new(x, if j == m { hi } else { lo + len * j as f64 / m as f64 }));
            }
        }
        columns.push((start..nodes.len()).collect());
    }
    let level = |nodes: &[Vec2], col: &[usize], i: usize| -> f64 {
        if col.len() == 1 {
            return 0.5;
        }
        let (lo, hi) = (nodes[col[0]].y, nodes[col[col.len() - 1]].y);
        (nodes[col[i]].y - lo) / (hi - lo)
    };
    let mut triangles = Vec::new();
    for pair in columns.windows(2) {
        let (left, right) = (&pair[0], &pair[1]);
        let (mut i, mut j) = (0usize, 0usize);
        while i + 1 < left.len() || j + 1 < right.len() {
            let advance_left = if i + 1 == left.len() {
                false
            } else if j + 1 == right.len() {
                true
            } else {
                level(&nodes, left, i + 1) <= level(&nodes, right, j + 1)
            };
            if advance_left {
                triangles.push([left[i], right[j], left[i + 1]]);
                i += 1;
            } else {
                triangles.push([left[i], right[j], right[j + 1]]);
                j += 1;
            }
        }
    }
    let mesh = TriMesh::new(nodes, triangles)?;
    mesh.validate()?;
    Ok(mesh)
}

/// Stiffness and mass matrices for `∫ sx uₓvₓ + sy u_y v_y` and `∫ u v`.
pub fn assemble(mesh: &TriMesh, anisotropy: (f64, f64)) -> Result<(SparseSymmetric, SparseSymmetric)> {
    let (sx, sy) = anisotropy;
    if !(sx > 0.0 && sy > 0.0 && sx.is_finite() && sy.is_finite()) {
        return Err(Error::Domain(format!("anisotropy must be positive, got ({sx}, {sy})")));
    }
    let h = mesh.max_edge();
    let mut kt = Vec::with_capacity(6 * mesh.triangles.len());
    let mut mt = Vec::with_capacity(6 * mesh.triangles.len());
    for (ti, t) in mesh.triangles.iter().enumerate() {
        let p = [mesh.nodes[t[0]], mesh.nodes[t[1]], mesh.nodes[t[2]]];
        let area = signed_area(&p[0], &p[1], &p[2]);
        if !(area >= 1e-14 * h * h) {
            return Err(Error::DegenerateTriangle { index: ti, area });
        }
        let grad: [Vec2; 3] = std::array::from_fn(|i| {
            let (b, c) = (p[(i + 1) % 3], p[(i + 2) % 3]);
            Vec2::new(b.y - c.y, c.x - b.x) / (2.0 * area)
        });
        for i in 0..3 {
            for j in i..3 {
                let k = area * (sx * grad[i].x * grad[j].x + sy * grad[i].y * grad[j].y);
                let m = area / 12.0 * if i == j { 2.0 } else { 1.0 };
                let (a, b) = (t[i].min(t[j]), t[i].max(t[j]));
                kt.push((a, b, k));
                mt.push((a, b, m));
            }
        }
    }
    let n = mesh.n_nodes();
    Ok((SparseSymmetric::from_triplets(n, kt), SparseSymmetric::from_triplets(n, mt)))
}

/// First `k + 1` eigenvalues on an existing mesh with the given anisotropy.
pub fn mesh_eigs(mesh: &TriMesh, k: usize, anisotropy: (f64, f64)) -> Result<EigenResult> {
    if k == 0 {
        return Err(Error::Domain("k must be positive".into()));
    }
    let (kmat, mmat) = assemble(mesh, anisotropy)?;
    let pairs = smallest_generalized(&kmat, &mmat, k + 1, &EigenOptions::default())?;
    Ok(EigenResult {
        values: pairs.values,
        vectors: pairs.vectors,
        mesh_size: mesh.max_edge(),
        residuals: pairs.residuals,
        n_dof: mesh.n_nodes(),
    })
}

/// First `k + 1` Neumann eigenvalues (`μ_0 = 0` included) of the polygon.
pub fn neumann_eigs(poly: &ConvexPolygon, k: usize, h_target: f64) -> Result<EigenResult> {
    let mesh = mesh_polygon(poly, h_target)?;
    mesh_eigs(&mesh, k, (1.0, 1.0))
}

/// A polygon carried to unit aspect, with the factor `c` that turns the
/// Laplacian into `−∂ₓₓ − c²∂ᵧᵧ` on it.
#[derive(Debug, Clone)]
pub struct Rescaled {
    pub polygon: ConvexPolygon,
    pub stretch: f64,
    pub diameter: f64,
    /// Extent across the diameter.
    pub width: f64,
}

/// Turns the diameter onto the x-axis and stretches y by `D / w`.
pub fn rescale_to_unit_aspect(poly: &ConvexPolygon) -> Result<Rescaled> {
    let aligned = align_to_diameter(poly, false)?;
    let (y0, y1) = aligned.y_range();
    let width = y1 - y0;
    let d = diameter(poly).length;
    let stretch = d / width;
    Ok(Rescaled { polygon: aligned.stretched_y(stretch)?, stretch, diameter: d, width })
}

/// Eigenvalues through the unit-aspect rescaling, without the thinness
/// guard. `h_target` is the mesh size of the rescaled polygon, i.e. measured
/// along the diameter.
pub fn neumann_eigs_rescaled(poly: &ConvexPolygon, k: usize, h_target: f64) -> Result<EigenResult> {
    let r = rescale_to_unit_aspect(poly)?;
    let mesh = column_mesh(&r.polygon, h_target)?;
    mesh_eigs(&mesh, k, (1.0, r.stretch * r.stretch))
}

/// Eigenvalues of a thin polygon (width below [`THIN_ASPECT`] times the
/// diameter) through the unit-aspect rescaling.
pub fn neumann_eigs_thin(poly: &ConvexPolygon, k: usize, h_target: f64) -> Result<EigenResult> {
    let r = rescale_to_unit_aspect(poly)?;
    let aspect = r.width / r.diameter;
    if aspect >= THIN_ASPECT {
        return Err(Error::NotThin { aspect, threshold: THIN_ASPECT });
    }
    let mesh = column_mesh(&r.polygon, h_target)?;
    mesh_eigs(&mesh, k, (1.0, r.stretch * r.stretch))
}

/// Richardson-extrapolated eigenvalues from a mesh and its red refinement,
/// using the `h²` rate of linear elements. Returns the fine-mesh result and
/// the extrapolated values.
pub fn extrapolated_eigs(mesh: &TriMesh, k: usize, anisotropy: (f64, f64)) -> Result<(EigenResult, Vec<f64>)> {
    let coarse = mesh_eigs(mesh, k, anisotropy)?;
    let fine = mesh_eigs(&mesh.refined(), k, anisotropy)?;
    let extrapolated = coarse.values.iter().zip(&fine.values).map(|(c, f)| f + (f - c) / 3.0).collect();
    Ok((fine, extrapolated))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::make_triangle;
    use std::f64::consts::PI;

    #[test]
    fn reference_element_stiffness() {
        let mesh = TriMesh::new(
            vec![Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0)],
            vec![[0, 1, 2]],
        )
        .unwrap();
        let (k, m) = assemble(&mesh, (1.0, 1.0)).unwrap();
        let expected = [[2.0, -1.0, -1.0], [-1.0, 1.0, 0.0], [-1.0, 0.0, 1.0]];
        for i in 0..3 {
            for j in 0..3 {
                assert!((k.get(i, j) - 0.5 * expected[i][j]).abs() < 1e-15);
            }
        }
        assert!((m.total_sum() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn square_mesh_covers_and_conforms() {
        let sq = ConvexPolygon::rectangle(1.0, 1.0).unwrap();
        let mesh = mesh_polygon(&sq, 0.35).unwrap();
        assert!((mesh.area() - 1.0).abs() < 1e-12);
        let mesh = mesh_polygon(&sq, 0.1).unwrap();
        assert!((mesh.area() - 1.0).abs() < 1e-12);
        assert!(mesh.max_edge() <= 0.1);
        assert!(mesh.min_angle() >= 20f64.to_radians(), "{}", mesh.min_angle().to_degrees());
        for (i, p) in mesh.nodes.iter().enumerate() {
            if mesh.boundary[i] {
                assert!(sq.inner_distance(p).abs() < 1e-12);
            } else {
                assert!(sq.inner_distance(p) > 1e-3);
            }
        }
    }

    #[test]
    fn triangle_mesh_area() {
        let t = make_triangle(2.0 * PI / 3.0, 1.0).unwrap();
        let mesh = mesh_polygon(&t, 0.05).unwrap();
        let exact = 0.5 * 3f64.sqrt() * 0.5;
        assert!((mesh.area() - exact).abs() < 1e-10 * exact);
    }

    #[test]
    fn mesh_rejects_coarse_target_and_budget() {
        let sq = ConvexPolygon::rectangle(1.0, 1.0).unwrap();
        assert!(mesh_polygon(&sq, 0.5 * 2f64.sqrt()).is_err());
        assert!(matches!(mesh_polygon_capped(&sq, 0.01, 1000), Err(Error::Mesh(_))));
    }

    #[test]
    fn stiffness_kernel_and_mass_partition() {
        let t = make_triangle(0.6 * PI, 1.0).unwrap();
        let mesh = mesh_polygon(&t, 0.05).unwrap();
        let (k, m) = assemble(&mesh, (1.0, 3.0)).unwrap();
        assert!(k.is_symmetric() && m.is_symmetric());
        let diag_max = k.diagonal().into_iter().fold(0.0, f64::max);
        assert!(k.row_sums().iter().all(|r| r.abs() < 1e-12 * diag_max));
        assert!((m.total_sum() - t.area()).abs() < 1e-10 * t.area());
    }

    #[test]
    fn refinement_is_conforming() {
        let t = make_triangle(0.6 * PI, 1.0).unwrap();
        let mesh = mesh_polygon(&t, 0.2).unwrap();
        let fine = mesh.refined();
        fine.validate().unwrap();
        assert_eq!(fine.triangles.len(), 4 * mesh.triangles.len());
        assert!((fine.area() - mesh.area()).abs() < 1e-14);
        for (i, p) in fine.nodes.iter().enumerate() {
            assert_eq!(fine.boundary[i], t.inner_distance(p).abs() < 1e-12, "node {i}");
        }
    }

    #[test]
    fn rectangle_eigenvalues() {
        let r = ConvexPolygon::rectangle(1.0, 0.6).unwrap();
        let res = neumann_eigs(&r, 3, 0.04).unwrap();
        assert!(res.values[0].abs() < 1e-8);
        let exact = [PI * PI, (PI / 0.6).powi(2), PI * PI + (PI / 0.6).powi(2)];
        for (j, e) in exact.iter().enumerate() {
            let v = res.values[j + 1];
            assert!(v >= *e && v < e * 1.01, "mode {}: {v} vs {e}", j + 1);
        }
    }

    #[test]
    fn column_mesh_is_conforming_and_exact_on_sections() {
        let t = make_triangle(0.9 * PI, 1.0).unwrap();
        let r = rescale_to_unit_aspect(&t).unwrap();
        let mesh = column_mesh(&r.polygon, 0.05).unwrap();
        assert!((mesh.area() - r.polygon.area()).abs() < 1e-12 * r.polygon.area());
        let fine = mesh.refined();
        for m in [&mesh, &fine] {
            for tri in &m.triangles {
                let x = tri.map(|i| m.nodes[i].x);
                assert!(x[0] == x[1] || x[1] == x[2] || x[0] == x[2]);
            }
        }
    }

    #[test]
    fn thin_guard() {
        let r = ConvexPolygon::rectangle(1.0, 0.5).unwrap();
        assert!(matches!(neumann_eigs_thin(&r, 1, 0.05), Err(Error::NotThin { .. })));
        let r = ConvexPolygon::rectangle(1.0, 0.01).unwrap();
        let res = neumann_eigs_thin(&r, 1, 0.05).unwrap();
        assert!((res.values[1] - PI * PI).abs() < 5e-3 * PI * PI, "{}", res.values[1]);
    }
}
