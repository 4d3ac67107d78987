mod common;

use common::*;
use overlay_crn::analysis::{outage_su_closed_form, pdf_cascaded_power};
use overlay_crn::fading::{
    sample_cascaded_power, sample_kappa_mu_power, sample_mrc_power_sum, CascadeSpec, KappaMuSpec,
};
use overlay_crn::geometry::{
    generate_hppp_window, kth_nearest_distance, sample_kth_pathloss, GeometrySpec,
};
use overlay_crn::harness::preset_params;
use overlay_crn::meijer::SeriesBudget;
use overlay_crn::simulate::{estimate_outage, McConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use statrs::distribution::{ContinuousCDF, Gamma};
use statrs::function::gamma::ln_gamma;

const N: usize = 100_000;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[test]
fn rayleigh_power_is_exponential() {
    let spec = KappaMuSpec::unit(0.0, 1.0).unwrap();
    let mut r = rng(11);
    let mut xs: Vec<f64> = (0..N).map(|_| sample_kappa_mu_power(&spec, &mut r)).collect();
    let d = ks_statistic(&mut xs, |x| 1.0 - (-x).exp());
    assert!(d < ks_critical(N), "D = {d}");
}

/// κ-μ power density with unit mean, written out from the Bessel-I form.
fn kappa_mu_pdf(x: f64, kappa: f64, mu: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    let z = 2.0 * mu * (kappa * (1.0 + kappa) * x).sqrt();
    let nu = mu - 1.0;
    // I_ν(z) by its power series
    let mut bessel_i = 0.0;
    for m in 0..200 {
        let term = (2.0 * m as f64 + nu) * (z / 2.0).ln() - ln_gamma(m as f64 + 1.0) - ln_gamma(m as f64 + nu + 1.0);
        bessel_i += term.exp();
        if m > 10 && term < -40.0 {
            break;
        }
    }
    let pre = mu * (1.0 + kappa).powf((mu + 1.0) / 2.0) / (kappa.powf((mu - 1.0) / 2.0) * (mu * kappa).exp());
    pre * x.powf((mu - 1.0) / 2.0) * (-mu * (1.0 + kappa) * x).exp() * bessel_i
}

#[test]
fn general_kappa_mu_matches_integrated_density() {
    let (kappa, mu) = (2.0, 1.5);
    let xs: Vec<f64> = (0..=40_000).map(|i| i as f64 * 2.5e-4).collect();
    let pdf: Vec<f64> = xs.iter().map(|&x| kappa_mu_pdf(x, kappa, mu)).collect();
    let cdf = cumulative_trapezoid(&xs, &pdf);
    assert!((cdf.last().unwrap() - 1.0).abs() < 1e-5, "mass {}", cdf.last().unwrap());

    let spec = KappaMuSpec::unit(kappa, mu).unwrap();
    let mut r = rng(12);
    let mut draws: Vec<f64> = (0..N).map(|_| sample_kappa_mu_power(&spec, &mut r)).collect();
    let d = ks_statistic(&mut draws, |x| interpolate(&xs, &cdf, x));
    assert!(d < ks_critical(N), "D = {d}");
}

#[test]
fn unit_mean_for_several_laws() {
    for (kappa, mu) in [(0.0, 1.0), (1.0, 1.0), (2.0, 1.5), (5.0, 0.7)] {
        let spec = KappaMuSpec::unit(kappa, mu).unwrap();
        let mut r = rng(13);
        let xs: Vec<f64> = (0..1_000_000).map(|_| sample_kappa_mu_power(&spec, &mut r)).collect();
        let (mean, var) = mean_and_variance(&xs);
        let se = (var / xs.len() as f64).sqrt();
        assert!((mean - 1.0).abs() < 4.0 * se, "κ={kappa} μ={mu}: {mean}");
        let expected_var = (1.0 + 2.0 * kappa) / (mu * (1.0 + kappa).powi(2));
        assert!((var - expected_var).abs() < 0.02 * expected_var, "κ={kappa} μ={mu}: {var}");
    }
}

#[test]
fn cascade_mean_is_product_of_stage_means() {
    let spec = CascadeSpec::uniform(3, 1.0, 2.0).unwrap();
    let mut r = rng(14);
    let xs: Vec<f64> = (0..1_000_000).map(|_| sample_cascaded_power(&spec, &mut r)).collect();
    let (mean, var) = mean_and_variance(&xs);
    assert!((mean - 1.0).abs() < 4.0 * (var / xs.len() as f64).sqrt(), "{mean}");
}

#[test]
fn cascade_sampler_matches_series_density() {
    let spec = CascadeSpec::uniform(2, 1.0, 1.0).unwrap();
    let budget = SeriesBudget::default();
    // integrate on x = e^u to resolve the logarithmic peak at the origin
    let us: Vec<f64> = (0..=601).map(|i| -25.0 + 0.05 * i as f64).collect();
    let xs: Vec<f64> = us.iter().map(|u| u.exp()).collect();
    let g: Vec<f64> = xs
        .iter()
        .map(|&x| x * pdf_cascaded_power(x, &spec, &budget).unwrap())
        .collect();
    let cdf = cumulative_trapezoid(&us, &g);
    assert!((cdf.last().unwrap() - 1.0).abs() < 1e-6);

    let mut r = rng(15);
    let mut draws: Vec<f64> = (0..N).map(|_| sample_cascaded_power(&spec, &mut r)).collect();
    let d = ks_statistic(&mut draws, |x| interpolate(&xs, &cdf, x));
    assert!(d < ks_critical(N), "D = {d}");
}

/// Rician power (κ = 1, μ = 1, unit mean) from its complex-Gaussian form.
fn rician_power(k_factor: f64, r: &mut ChaCha8Rng) -> f64 {
    let los = (k_factor / (1.0 + k_factor)).sqrt();
    let sigma = (0.5 / (1.0 + k_factor)).sqrt();
    let i: f64 = StandardNormal.sample(r);
    let q: f64 = StandardNormal.sample(r);
    (los + sigma * i).powi(2) + (sigma * q).powi(2)
}

#[test]
fn mrc_sum_variance_matches_independent_sampler() {
    let branches = 3;
    let n = 2_000_000;
    let spec = KappaMuSpec::unit(1.0, 1.0).unwrap();
    let mut r = rng(16);
    let ours: Vec<f64> = (0..n).map(|_| sample_mrc_power_sum(&spec, branches, &mut r)).collect();
    let mut r = rng(17);
    let oracle: Vec<f64> = (0..n)
        .map(|_| (0..branches).map(|_| rician_power(1.0, &mut r)).sum())
        .collect();
    let var_se = |xs: &[f64]| {
        let (m, v) = mean_and_variance(xs);
        let m4 = xs.iter().map(|x| (x - m).powi(4)).sum::<f64>() / xs.len() as f64;
        (v, ((m4 - v * v) / xs.len() as f64).sqrt())
    };
    let (v1, s1) = var_se(&ours);
    let (v2, s2) = var_se(&oracle);
    assert!((v1 - v2).abs() < 4.0 * s1.hypot(s2), "{v1} vs {v2}");
    assert!((v1 - 2.25).abs() < 4.0 * s1, "{v1}");
}

fn window_oracle(k: usize, phi: f64, samples: usize, seed: u64) -> Vec<f64> {
    let side = 20.0 / phi.sqrt();
    let mut r = rng(seed);
    let mut out = Vec::with_capacity(samples);
    while out.len() < samples {
        let pts = generate_hppp_window(phi, side, &mut r);
        if let Some(d) = kth_nearest_distance(&pts, k) {
            out.push(d * d);
        }
    }
    out
}

#[test]
fn kth_pathloss_matches_window_oracle() {
    let phi = 0.5;
    for k in 1..=4u32 {
        let spec = GeometrySpec::new(phi, 2, 2.0, k).unwrap();
        let mut r = rng(20 + k as u64);
        let mut ours: Vec<f64> = (0..N).map(|_| sample_kth_pathloss(&spec, &mut r)).collect();
        let mut oracle = window_oracle(k as usize, phi, N, 30 + k as u64);
        let d = ks_two_sample(&mut ours, &mut oracle);
        assert!(d < ks_critical_two(N, N), "k={k}: D = {d}");

        // and against the Gamma(k, πφ) law directly
        let law = Gamma::new(k as f64, std::f64::consts::PI * phi).unwrap();
        let d = ks_statistic(&mut ours, |x| law.cdf(x));
        assert!(d < ks_critical(N), "k={k}: D = {d}");
    }
}

#[test]
fn non_unit_delta_sampler_matches_transformed_gamma() {
    // δ = 2 (U = 2, α = 1): d^α = Y^{1/2} with Y ~ Gamma(k, πφ)
    let spec = GeometrySpec::new(1.0, 2, 1.0, 2).unwrap();
    let law = Gamma::new(2.0, std::f64::consts::PI).unwrap();
    let mut r = rng(40);
    let mut xs: Vec<f64> = (0..N).map(|_| sample_kth_pathloss(&spec, &mut r)).collect();
    let d = ks_statistic(&mut xs, |x| law.cdf(x * x));
    assert!(d < ks_critical(N), "D = {d}");
}

/// The SU closed form treats the MRC sum of cascaded gains as a single
/// cascade with pooled parameters. That is exact for one branch or one
/// stage; with both above one it is slightly optimistic.
#[test]
fn su_mrc_cascade_law_gap() {
    let budget = SeriesBudget::default();
    let mc = McConfig {
        trials: 200_000,
        seed: 5,
        ..McConfig::default()
    };
    for (l_s, n_s, exact) in [(1, 2, true), (2, 1, true), (2, 2, false), (3, 2, false)] {
        let mut ps = preset_params("fig4").unwrap();
        ps.l_s = l_s;
        ps.n_s = n_s;
        ps.p_t_db = Some(5.0);
        let p = ps.to_system().unwrap();
        let closed = outage_su_closed_form(&p, &budget).unwrap().value;
        let est = estimate_outage(&p, &mc).unwrap();
        let gap = est.op_s_hat - closed;
        if exact {
            assert!(gap.abs() < 4.0 * est.se_s, "L_S={l_s} n_s={n_s}: gap {gap}");
        } else {
            assert!(gap > 4.0 * est.se_s && gap < 0.02, "L_S={l_s} n_s={n_s}: gap {gap}");
        }
    }
}
