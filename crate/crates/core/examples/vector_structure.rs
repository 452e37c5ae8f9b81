//! Arithmetic structure of vectors: compressibility, LCD brackets and
//! small-ball probabilities.
//!
//!     cargo run --release --example vector_structure

use nalgebra::{Complex, DVector};
use rmt_lab::ensembles::AtomDistribution;
use rmt_lab::structure::{
    compressibility, complexify, lcd_complex, lcd_real, levy_exact, levy_mc, real_imag_correlation,
    structure_report, LcdQuery, ReportOptions,
};

fn main() -> rmt_lab::Result<()> {
    let n = 8;
    let flat = DVector::from_element(n, 1.0 / (n as f64).sqrt());
    let spike = DVector::from_fn(n, |i, _| if i == 0 { 1.0 } else { 0.0 });

    for (name, v) in [("flat", &flat), ("spike", &spike)] {
        let c = compressibility(&complexify(v), 0.25, 0.3)?;
        println!("{name:>5}: compressible = {}, tail = {:.3}", c.compressible, c.tail_norm);
    }

    let q = LcdQuery::with_l(2.0, n);
    let b = lcd_real(&flat, &q)?;
    println!(
        "LCD of the flat vector with L = 2: in [{:.6}, {:?}]",
        b.lower, b.witness
    );

    let h = std::f64::consts::FRAC_1_SQRT_2;
    let z = DVector::from_vec(vec![Complex::new(h, 0.0), Complex::new(0.0, h)]);
    println!("d((1, i)/sqrt 2) = {:.6}", real_imag_correlation(&z)?);
    let plane = lcd_complex(&z, &LcdQuery::with_l(2.0, 2))?;
    println!("complex LCD bracket: [{:.6}, {:?}]", plane.lower, plane.witness);

    let signs = AtomDistribution::rademacher();
    let exact = levy_exact(&complexify(&flat), 0.1, &signs)?;
    let mc = levy_mc(&complexify(&flat), 0.1, &signs, 20_000, 1)?;
    println!(
        "small-ball at t = 0.1: exact {} ({:?}), Monte Carlo {:.4} +- {:.4}",
        exact.value,
        exact.exact.as_ref().map(|r| r.to_string()),
        mc.value,
        mc.half_width
    );

    let report = structure_report(
        &complexify(&flat),
        &ReportOptions {
            atom: Some(signs),
            levy_radii: vec![0.05, 0.5],
            ..Default::default()
        },
    )?;
    println!("report hash {}..., LCD lower {:.4}", &report.vector_hash[..12], report.lcd.lower);
    Ok(())
}
