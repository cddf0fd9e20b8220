//! Load-profile sensitivity of the cap steady-state gap (development aid).
use nalgebra::DVector;
use shellvisc::cases::make_case;
use shellvisc::geometry::{Chart, Rect};
use shellvisc::material::memory_constants;
use shellvisc::shell2d::{self, FunctionSpace2d};
use shellvisc::solver3d::{assemble_3d, l2_error_split, thickness_average, Mesh3d};
use shellvisc::sym::SymMatrix;
use shellvisc::geometry::EdgeSet;

fn run(rect: Rect, load: impl Fn([f64;2]) -> f64 + Copy) {
    let case = make_case("elliptic_cap").unwrap();
    let chart = Chart::Paraboloid { rect };
    let m = case.material;
    let mc = memory_constants(&m).unwrap();
    let space = FunctionSpace2d::membrane(rect, EdgeSet::all(), 16, 16, 2, true).unwrap();
    let sys = shell2d::assemble(&chart, &m, &space, 1.0, None).unwrap();
    let p = shell2d::assemble_load(&space, &chart, &|y| [0.0, 0.0, 2.0 * load(y)], None).unwrap();
    let steady = SymMatrix::lincomb(&[(1.0, &sys.m_a), (-1.0 / mc.decay, &sys.m_c)]);
    let xi = steady.factorize().unwrap().solve(&p);
    for &eps in &[0.2, 0.1, 0.05] {
        let mesh = Mesh3d::new(rect, case.n3d, case.orders3d, case.clamped);
        let sys3 = assemble_3d(&chart, &m, &mesh, eps, 3).unwrap();
        let l = sys3.assemble_load(0, &move |y,_| [0.0, 0.0, load(y)], &|_| [0.0;3], &|_| [0.0;3]).unwrap();
        let u: DVector<f64> = sys3.m_a.factorize().unwrap().solve(&l);
        let avg = thickness_average(&mesh, &sys3.expand(&u));
        let (num, den) = l2_error_split(&mesh, &avg, &space, &xi);
        let dt: f64 = den.iter().sum();
        print!(" {:.3e}", (num.iter().sum::<f64>() / dt).sqrt());
    }
    println!();
}

#[test]
#[ignore]
fn probe_cap_loads() {
    let r1 = Rect::new(-0.5, 0.5, -0.5, 0.5);
    let r2 = Rect::new(-0.75, 0.75, -0.75, 0.75);
    print!("sq-bump  r1:");
    run(r1, |y| {
        let s = y[0] + 0.5; let r = y[1] + 0.5;
        let b = 16.0 * s * (1.0 - s) * r * (1.0 - r); b * b
    });
    print!("bump     r1:");
    run(r1, |y| {
        let s = y[0] + 0.5; let r = y[1] + 0.5;
        16.0 * s * (1.0 - s) * r * (1.0 - r)
    });
    print!("const    r1:");
    run(r1, |_| 1.0);
    print!("bump     r2:");
    run(r2, |y| {
        let s = (y[0] + 0.75) / 1.5; let r = (y[1] + 0.75) / 1.5;
        16.0 * s * (1.0 - s) * r * (1.0 - r)
    });
}
