//! Neumann eigenvalues of polygons with P1 finite elements.

use kroger_stability::fem2d::{extrapolated_eigs, mesh_polygon, neumann_eigs};
use kroger_stability::geometry::ConvexPolygon;
use kroger_stability::specfun::bessel_prime_zero;
use std::f64::consts::PI;

fn main() -> kroger_stability::Result<()> {
    let square = ConvexPolygon::rectangle(1.0, 1.0)?;
    let res = neumann_eigs(&square, 3, 0.03)?;
    println!("square, {} dofs: {:?}", res.n_dof, res.values);
    println!("exact:            [0, {:.6}, {:.6}, {:.6}]", PI * PI, PI * PI, 2.0 * PI * PI);

    let disk = ConvexPolygon::regular(256, 1.0)?;
    let mesh = mesh_polygon(&disk, 0.05)?;
    let (fine, extrapolated) = extrapolated_eigs(&mesh, 1, (1.0, 1.0))?;
    let exact = bessel_prime_zero(1.0, 1)?.powi(2);
    println!(
        "disk: mu_1 = {:.6} on {} dofs, extrapolated {:.6}, exact (j'_11)^2 = {exact:.6}",
        fine.values[1], fine.n_dof, extrapolated[1]
    );
    println!("mesh: {} triangles, min angle {:.1} deg", mesh.triangles.len(), mesh.min_angle().to_degrees());
    Ok(())
}
