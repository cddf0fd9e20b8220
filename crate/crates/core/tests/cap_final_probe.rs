//! Final configuration probe for the cap study (development aid).
use nalgebra::DVector;
use shellvisc::cases::make_case;
use shellvisc::geometry::EdgeSet;
use shellvisc::material::memory_constants;
use shellvisc::shell2d::{self, FunctionSpace2d};
use shellvisc::solver3d::{assemble_3d, l2_error_split, thickness_average, Mesh3d};
use shellvisc::sym::SymMatrix;

fn run(n3d: (usize, usize, usize), load: impl Fn([f64;2]) -> f64 + Copy, label: &str) {
    let case = make_case("elliptic_cap").unwrap();
    let rect = case.chart.rect();
    let m = case.material;
    let mc = memory_constants(&m).unwrap();
    let space = FunctionSpace2d::membrane(rect, EdgeSet::all(), 16, 16, 2, true).unwrap();
    let sys = shell2d::assemble(&case.chart, &m, &space, 1.0, None).unwrap();
    let p = shell2d::assemble_load(&space, &case.chart, &|y| [0.0, 0.0, 2.0 * load(y)], None).unwrap();
    let steady = SymMatrix::lincomb(&[(1.0, &sys.m_a), (-1.0 / mc.decay, &sys.m_c)]);
    let xi = steady.factorize().unwrap().solve(&p);
    print!("{label} n3d {:?}:", n3d);
    for &eps in &[0.2, 0.1, 0.05] {
        let mesh = Mesh3d::new(rect, n3d, (2, 2, 2), case.clamped);
        let sys3 = assemble_3d(&case.chart, &m, &mesh, eps, 3).unwrap();
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
fn probe_cap_final() {
    let sqbump = |y: [f64; 2]| {
        let s = y[0] + 0.5; let r = y[1] + 0.5;
        let b = 16.0 * s * (1.0 - s) * r * (1.0 - r);
        b * b
    };
    // compact bump supported on the middle half of the rectangle
    let compact = |y: [f64; 2]| {
        let half = 0.25;
        if y[0].abs() >= half || y[1].abs() >= half { return 0.0; }
        let s = (y[0] / half) * (y[0] / half);
        let r = (y[1] / half) * (y[1] / half);
        ((1.0 - s) * (1.0 - r)).powi(2)
    };
    run((8, 8, 2), sqbump, "sq-bump ");
    run((16, 16, 2), sqbump, "sq-bump ");
    run((16, 16, 2), compact, "compact ");
    run((12, 12, 2), compact, "compact ");
}
