//! Bertrand surface over helix(1,1), checked row by row, written as OBJ.

use bertrand::bertrand::{detect_bertrand, BertrandKind, BranchId};
use bertrand::frenet::frenet_apparatus;
use bertrand::surface::{bertrand_surface, to_mesh, verify_rows, SurfaceParams};
use bertrand::{build_curve, CurveSpec};

fn main() {
    let helix = build_curve(&CurveSpec::helix(1.0, 1.0)).unwrap();
    let fit = detect_bertrand(
        &frenet_apparatus(&helix).unwrap(),
        BertrandKind::Bertrand,
        1e-8,
    )
    .unwrap();
    let grid = bertrand_surface(
        &helix,
        &fit,
        &SurfaceParams::new(BranchId::OnePlus, 10, 100),
    )
    .unwrap();
    println!("theta = {:.6}, offset = {:.6}", grid.theta, grid.lambda);

    let rows = verify_rows(&helix, &grid).unwrap();
    for (i, r) in rows.iter().enumerate() {
        let (u, w) = grid.coefficients[i];
        println!(
            "t = {:+.4}  (u, w) = ({:+.4}, {:+.4})  mate {}",
            grid.t_values[i], u, w, r.accepted
        );
    }

    let mesh = to_mesh(&grid).unwrap();
    let path = std::env::temp_dir().join("bertrand_surface.obj");
    std::fs::write(&path, mesh.to_obj()).unwrap();
    println!(
        "{} vertices, {} triangles -> {}",
        mesh.vertices.len(),
        mesh.triangles.len(),
        path.display()
    );
}
