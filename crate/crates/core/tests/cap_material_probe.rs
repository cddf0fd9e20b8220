//! Material sensitivity of the cap steady-state gap (development aid).
use nalgebra::DVector;
use shellvisc::cases::make_case;
use shellvisc::material::{memory_constants, MaterialParams};
use shellvisc::shell2d::{self, ShellModel};
use shellvisc::solver3d::{assemble_3d, l2_error_split, thickness_average, Mesh3d};
use shellvisc::sym::SymMatrix;

#[test]
#[ignore]
fn probe_cap_material() {
    let case = make_case("elliptic_cap").unwrap();
    let rect = case.chart.rect();
    let body = case.body_load;
    for (la, mu) in [(0.01, 1.0), (1.0, 1.0), (10.0, 1.0), (1.0, 3.0)] {
        let m = MaterialParams::new(la, mu, 1.0, 1.0).unwrap();
        let mc = memory_constants(&m).unwrap();
        let space = case.space(ShellModel::Membrane, 16, 16).unwrap();
        let sys = shell2d::assemble(&case.chart, &m, &space, 1.0, None).unwrap();
        let p = case.limit_load_vector(&space).unwrap();
        let steady = SymMatrix::lincomb(&[(1.0, &sys.m_a), (-1.0 / mc.decay, &sys.m_c)]);
        let xi = steady.factorize().unwrap().solve(&p);
        print!("lambda {la:<5} mu {mu}: ");
        for &eps in &[0.2, 0.1, 0.05] {
            let mesh = Mesh3d::new(rect, case.n3d, case.orders3d, case.clamped);
            let sys3 = assemble_3d(&case.chart, &m, &mesh, eps, 3).unwrap();
            let l = sys3.assemble_load(0, &move |y,_| body.eval(&rect,y), &|_| [0.0;3], &|_| [0.0;3]).unwrap();
            let u: DVector<f64> = sys3.m_a.factorize().unwrap().solve(&l);
            let avg = thickness_average(&mesh, &sys3.expand(&u));
            let (num, den) = l2_error_split(&mesh, &avg, &space, &xi);
            let dt: f64 = den.iter().sum();
            print!(" {:.3e}", (num.iter().sum::<f64>() / dt).sqrt());
        }
        println!();
    }
}
