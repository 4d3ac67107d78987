//! Draws κ-μ, cascaded and MRC power gains and compares sample moments with
//! their closed forms.

use overlay_crn::fading::{
    cdf_exp_mrc, sample_cascaded_power, sample_exp_mrc, sample_kappa_mu_power,
    sample_mrc_power_sum, CascadeSpec, ExpMrcSpec, KappaMuSpec,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn moments(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var)
}

fn main() -> overlay_crn::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let n = 200_000;

    println!("single stage (unit mean):");
    for (kappa, mu) in [(0.0, 1.0), (1.0, 1.0), (2.0, 1.5), (5.0, 0.75)] {
        let spec = KappaMuSpec::unit(kappa, mu)?;
        let xs: Vec<f64> = (0..n).map(|_| sample_kappa_mu_power(&spec, &mut rng)).collect();
        let (mean, var) = moments(&xs);
        println!(
            "  κ={kappa:<4} μ={mu:<5} mean {mean:.4}  var {var:.4} (exact {:.4})",
            spec.variance()
        );
    }

    println!("cascades of κ=1, μ=1 stages:");
    for stages in 1..=4 {
        let spec = CascadeSpec::uniform(stages, 1.0, 1.0)?;
        let xs: Vec<f64> = (0..n).map(|_| sample_cascaded_power(&spec, &mut rng)).collect();
        let (mean, var) = moments(&xs);
        println!("  n={stages} mean {mean:.4} (exact {:.4})  var {var:.3}", spec.mean());
    }

    println!("MRC over 3 branches of a 2-stage cascade:");
    let cascade = CascadeSpec::uniform(2, 1.0, 1.0)?;
    let xs: Vec<f64> = (0..n).map(|_| sample_mrc_power_sum(&cascade, 3, &mut rng)).collect();
    println!("  mean {:.4} (exact 3)", moments(&xs).0);

    println!("Erlang MRC at the relay (λ = 0.5, L_R = 2):");
    let relay = ExpMrcSpec::new(0.5, 2)?;
    let xs: Vec<f64> = (0..n).map(|_| sample_exp_mrc(&relay, &mut rng)).collect();
    for x in [1.0, 4.0, 10.0] {
        let empirical = xs.iter().filter(|&&v| v <= x).count() as f64 / n as f64;
        println!("  P(G ≤ {x:>4}) empirical {empirical:.4}  exact {:.4}", cdf_exp_mrc(x, &relay)?);
    }
    Ok(())
}
