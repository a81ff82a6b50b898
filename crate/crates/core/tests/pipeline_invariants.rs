use cfoi_irid::{irid_fcoi, CfoiParams, IridRequest};

fn request(l: f64, m: f64, w: f64) -> IridRequest {
    IridRequest::new(CfoiParams::new(l, m, w).unwrap(), 2.0, 0.01, 100.0, 5)
}

#[test]
fn impulse_invariance_contract() {
    for l in [0.5, 1.0, 1.5] {
        for m in [-0.2, -0.4] {
            for w in [0.5, 1.0] {
                let res = irid_fcoi(&request(l, m, w)).unwrap();
                let err = res.metrics.discrete.impulse_rel_l2;
                assert!(err <= 0.05, "λ={l} μ={m} ω_gc={w}: rel L2 {err}");
            }
        }
    }
}

#[test]
fn identical_requests_give_identical_results() {
    let req = request(1.5, -0.4, 1.0);
    assert_eq!(irid_fcoi(&req).unwrap(), irid_fcoi(&req).unwrap());
}

#[test]
fn frequency_grid_is_increasing_and_in_band() {
    let mut req = request(1.0, -0.2, 1.0);
    req.wmax = 1e5;
    let res = irid_fcoi(&req).unwrap();
    let w = res.f_ref.grid().omegas();
    assert!(w.windows(2).all(|p| p[0] < p[1]));
    assert_eq!(w[0], req.wmin);
    assert!(*w.last().unwrap() <= req.effective_wmax());
    assert!(*w.last().unwrap() < req.wmax);
}

#[test]
fn validation_failures_are_flagged() {
    let mut req = request(1.5, -0.4, 1.0);
    req.samples = 100;
    assert!(irid_fcoi(&req).unwrap_err().is_validation());
}
