//! refine 3D mesh at fixed eps for the cap steady state
use nalgebra::DVector;
use shellvisc::cases::make_case;
use shellvisc::material::memory_constants;
use shellvisc::shell2d::{self, ShellModel};
use shellvisc::solver3d::{assemble_3d, l2_error_split, thickness_average, Mesh3d};
use shellvisc::sym::SymMatrix;

#[test]
#[ignore]
fn probe_cap_mesh_refinement() {
    let case = make_case("elliptic_cap").unwrap();
    let mc = memory_constants(&case.material).unwrap();
    let rect = case.chart.rect();
    let body = case.body_load;
    let space = case.space(ShellModel::Membrane, 24, 24).unwrap();
    let sys = shell2d::assemble(&case.chart, &case.material, &space, 1.0, None).unwrap();
    let p = case.limit_load_vector(&space).unwrap();
    let steady_mat = SymMatrix::lincomb(&[(1.0, &sys.m_a), (-1.0 / mc.decay, &sys.m_c)]);
    let xi = steady_mat.factorize().unwrap().solve(&p);

    let eps = 0.05;
    for (n3d, orders) in [((8,8,2),(2,2,2)), ((12,12,2),(2,2,2)), ((8,8,4),(2,2,2)), ((8,8,2),(2,2,3))] {
        let mesh = Mesh3d::new(rect, n3d, orders, case.clamped);
        let sys3 = assemble_3d(&case.chart, &case.material, &mesh, eps, 4).unwrap();
        let l = sys3.assemble_load(0, &move |y,_| body.eval(&rect,y), &|_| [0.0;3], &|_| [0.0;3]).unwrap();
        let u: DVector<f64> = sys3.m_a.factorize().unwrap().solve(&l);
        let avg = thickness_average(&mesh, &sys3.expand(&u));
        let (num, den) = l2_error_split(&mesh, &avg, &space, &xi);
        let dt: f64 = den.iter().sum();
        println!("mesh {:?} orders {:?}: err_total {:.4e} comp3 {:.3e}", n3d, orders,
            (num.iter().sum::<f64>()/dt).sqrt(), (num[2]/dt).sqrt());
    }
}
