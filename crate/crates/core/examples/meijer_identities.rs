//! Evaluates Meijer-G functions with known elementary reductions, the
//! scaled evaluator for values outside f64 range, and a nested series.

use overlay_crn::meijer::{
    bessel_k, meijer_g, meijer_g_contour, meijer_g_scaled, truncated_nested_sum, MeijerGSpec,
    SeriesBudget,
};

fn main() -> overlay_crn::Result<()> {
    let exp = MeijerGSpec::new(1, 0, vec![], vec![0.0])?;
    let ratio = MeijerGSpec::new(1, 1, vec![1.0], vec![1.0])?;
    let bessel = MeijerGSpec::new(2, 0, vec![], vec![0.0, 0.0])?;

    println!("{:>5} {:>24} {:>24} {:>24}", "x", "G(x|-;0) vs e^-x", "G(x|1;1) vs x/(1+x)", "G(x|-;0,0) vs 2K0");
    for x in [0.1, 0.5, 1.0, 2.0, 5.0] {
        println!(
            "{x:>5} {:>11.3e} {:>11.3e}  {:>11.3e} {:>11.3e}  {:>11.3e} {:>11.3e}",
            meijer_g_contour(&exp, x)?,
            (-x).exp(),
            meijer_g_contour(&ratio, x)?,
            x / (1.0 + x),
            meijer_g_contour(&bessel, x)?,
            2.0 * bessel_k(0.0, 2.0 * x.sqrt()),
        );
    }

    // G^{1,1}_{1,1}(x | 1-ν; 0) = Γ(ν)(1+x)^{-ν}; Γ(180) alone overflows f64
    let big = MeijerGSpec::new(1, 1, vec![1.0 - 180.0], vec![0.0])?;
    let (mantissa, ln_scale) = meijer_g_scaled(&big, 0.3)?;
    println!(
        "ln G = {:.6} (exact {:.6}); plain evaluation finite: {}",
        mantissa.ln() + ln_scale,
        overlay_crn::special::ln_gamma(180.0) - 180.0 * 1.3f64.ln(),
        meijer_g(&big, 0.3).is_ok_and(|v| v.is_finite()),
    );

    // e^{1+2} as a depth-2 diagonal series
    let sum = truncated_nested_sum(
        |idx| {
            let f = |n: usize| (1..=n).map(|i| i as f64).product::<f64>();
            Ok(2f64.powi(idx[1] as i32) / (f(idx[0]) * f(idx[1])))
        },
        2,
        &SeriesBudget::default(),
    )?;
    println!(
        "nested series: {:.10} vs e^3 = {:.10} ({} shells, converged {})",
        sum.value,
        3f64.exp(),
        sum.shells_used,
        sum.converged
    );
    Ok(())
}
