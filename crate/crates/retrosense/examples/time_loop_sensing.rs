//! Sensing a field whose axis is unknown. Fixed single-qubit probes average
//! a QFI of 2/3; a shared singlet lifts that to 1 whether the axis is
//! revealed late (hindsight) or never (agnostic), and a qubit/antiqubit pair
//! seeing U and U-dagger reaches 4. A dephasing strength can be read out the
//! same axis-free way.
//!
//!     cargo run --example time_loop_sensing

use retrosense::sampling::{random_direction, rng_from_seed};
use retrosense::timeloop::{
    agnostic, agnostic_dephasing, hindsight, naive_average_fi, positronium, FieldSpec,
};

fn main() -> retrosense::Result<()> {
    let alpha = std::f64::consts::FRAC_PI_3;
    println!(
        "fixed-probe baseline: average QFI = {:.9} (ceiling 2/3)",
        naive_average_fi(alpha)?
    );

    let mut rng = rng_from_seed(11);
    println!("\nsinglet protocols at alpha = pi/3, three random axes:");
    println!(
        "{:>28} {:>12} {:>12} {:>10}",
        "axis", "survival", "FI", "ceiling"
    );
    for _ in 0..3 {
        let n = random_direction(&mut rng);
        let field = FieldSpec::new(n, alpha)?;
        let axis = format!("[{:+.2} {:+.2} {:+.2}]", n[0], n[1], n[2]);
        let h = hindsight(&field)?;
        println!(
            "{axis:>28} {:>12} {:>12.8} {:>10} (hindsight)",
            "-", h.fi, h.theoretical_max
        );
        let a = agnostic(&field)?;
        println!(
            "{axis:>28} {:>12.8} {:>12.8} {:>10} (agnostic)",
            a.outcomes[0].1, a.fi, a.theoretical_max
        );
        let p = positronium(&field)?;
        println!(
            "{axis:>28} {:>12.8} {:>12.8} {:>10} (positronium)",
            p.outcomes[0].1, p.fi, p.theoretical_max
        );
    }
    println!("(identical numbers for every axis: the singlet sees only the strength)");

    println!("\naxis-free dephasing estimation, survival = 1 - s/2:");
    for s in [0.2, 0.5, 0.8] {
        let n = random_direction(&mut rng);
        let r = agnostic_dephasing(s, n)?;
        println!(
            "  s = {s:.1}: survival {:.6}, FI {:.6} (analytic 1/(s(2-s)) = {:.6})",
            r.outcomes[0].1,
            r.fi,
            1.0 / (s * (2.0 - s))
        );
    }
    Ok(())
}
