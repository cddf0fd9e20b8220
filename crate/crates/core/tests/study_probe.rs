//! Probe of the thin-limit study (development aid; the acceptance suite
//! pins the real thresholds).

use shellvisc::cases::{asymptotic_study, make_case};

#[test]
#[ignore]
fn probe_study_errors() {
    for name in ["flat_plate", "elliptic_cap", "clamped_cylinder"] {
        let case = make_case(name).unwrap();
        let t = asymptotic_study(&case, &[0.2, 0.1, 0.05], 20).unwrap();
        println!("case {name} (model {:?}):", t.model);
        for r in &t.rows {
            println!(
                "  eps {:.3}: total {:.4e}  comp [{:.3e} {:.3e} {:.3e}]  dofs {}",
                r.eps, r.err_total, r.err_comp[0], r.err_comp[1], r.err_comp[2], r.n_dofs_3d
            );
        }
    }
}
