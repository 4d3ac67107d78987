use overlay_crn::meijer::{meijer_g, meijer_g_contour, MeijerGSpec};
use statrs::function::gamma::gamma;

mod common;
use common::bessel_k0;

const XS: [f64; 5] = [0.1, 0.5, 1.0, 2.0, 5.0];

fn identities() -> Vec<(&'static str, MeijerGSpec, fn(f64) -> f64)> {
    vec![
        ("exp", MeijerGSpec::new(1, 0, vec![], vec![0.0]).unwrap(), |x| (-x).exp()),
        ("x/(1+x)", MeijerGSpec::new(1, 1, vec![1.0], vec![1.0]).unwrap(), |x| x / (1.0 + x)),
        ("2K0", MeijerGSpec::new(2, 0, vec![], vec![0.0, 0.0]).unwrap(), |x| {
            2.0 * bessel_k0(2.0 * x.sqrt())
        }),
    ]
}

#[test]
fn identity_suite() {
    for (name, spec, oracle) in identities() {
        for x in XS {
            let want = oracle(x);
            for (path, got) in [("dispatch", meijer_g(&spec, x)), ("contour", meijer_g_contour(&spec, x))] {
                let got = got.unwrap();
                assert!(((got - want) / want).abs() < 1e-7, "{name} via {path} at {x}: {got} vs {want}");
            }
        }
    }
}

#[test]
fn mellin_transform_of_exponential_kernel() {
    let spec = MeijerGSpec::new(1, 0, vec![], vec![0.0]).unwrap();
    // ∫ x^s G(x) du on x = e^u; the contour refuses x much beyond 20, where
    // the remaining tail is below 1e-7
    let us: Vec<f64> = (0..=2150).map(|i| -40.0 + 0.02 * i as f64).collect();
    let g: Vec<f64> = us.iter().map(|u| meijer_g_contour(&spec, u.exp()).unwrap()).collect();
    for s in [0.5, 1.0, 2.0] {
        let h = us[1] - us[0];
        let f: Vec<f64> = us.iter().zip(&g).map(|(u, g)| (s * u).exp() * g).collect();
        let integral = h * (f.iter().sum::<f64>() - 0.5 * (f[0] + f[f.len() - 1]));
        assert!((integral - gamma(s)).abs() < 1e-6, "s={s}: {integral}");
    }
}

#[test]
fn shifted_parameters_follow_power_rule() {
    // x^c G(x | a; b) = G(x | a + c; b + c)
    let base = MeijerGSpec::new(1, 1, vec![0.3], vec![-0.2]).unwrap();
    let shifted = MeijerGSpec::new(1, 1, vec![1.05], vec![0.55]).unwrap();
    for x in XS {
        let lhs = x.powf(0.75) * meijer_g(&base, x).unwrap();
        let rhs = meijer_g_contour(&shifted, x).unwrap();
        assert!(((lhs - rhs) / rhs).abs() < 1e-7, "{x}: {lhs} vs {rhs}");
    }
}
