// temp debug: find where parallel and sequential assemblies differ
use kslab::geometry::make_wedge;
use kslab::mesh::{assemble_ks, assemble_ks_sequential, build_mesh, MeshParams};

fn main() {
    let b = make_wedge(1.0).unwrap();
    let params = MeshParams { panels_per_arc: 4, order: 6, grading_levels: 10, grading_ratio: 0.5 };
    let mesh = build_mesh(&b, &params).unwrap();
    let a = assemble_ks(&mesh).unwrap();
    let s = assemble_ks_sequential(&mesh).unwrap();
    let n = a.n();
    let mut worst = 0.0f64;
    let mut at = (0, 0);
    let mut count = 0;
    for j in 0..n {
        for i in 0..n {
            let d = (a.mat[(i, j)] - s.mat[(i, j)]).norm();
            if d > 0.0 { count += 1; }
            if d > worst { worst = d; at = (i, j); }
        }
    }
    println!("n={n} differing={count} worst={worst:.3e} at {at:?}");
    println!("par  = {:?}", a.mat[at]);
    println!("seq  = {:?}", s.mat[at]);
    let nodes = mesh.nodes();
    println!("node i: t={:.17e} arc={}", nodes[at.0].t, nodes[at.0].arc);
    println!("node j: t={:.17e} arc={}", nodes[at.1].t, nodes[at.1].arc);
    // count NaNs
    let nans = a.mat.data().iter().filter(|z| z.re.is_nan() || z.im.is_nan()).count();
    println!("NaNs in parallel: {nans}");
    let nans = s.mat.data().iter().filter(|z| z.re.is_nan() || z.im.is_nan()).count();
    println!("NaNs in sequential: {nans}");
}
