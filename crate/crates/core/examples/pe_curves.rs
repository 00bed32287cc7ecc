//! A single stage: the two best-response curves and their crossing as the
//! frustration weights grow.
//!
//! Run with `cargo run --example pe_curves`.

use iobt_psygame::equilibrium::{
    curve_alpha_of_beta, curve_alpha_of_beta_soldier, solve_stage_ne, solve_stage_pe, StagePayoffs,
};

fn main() -> iobt_psygame::Result<()> {
    // Rows: soldier connect/skip. Columns: attacker jam/idle.
    let p = StagePayoffs::new([[0.2, 0.9], [0.6, 0.4]], [[0.8, 0.1], [0.2, 0.5]]);
    assert!(p.is_regular());
    let ne = solve_stage_ne(&p)?;
    println!(
        "NE: connect {:.4} jam {:.4}",
        ne.soldier_mix.p_first, ne.attacker_mix.p_first
    );
    for w in [0.0, 0.25, 0.5, 1.0] {
        let pe = solve_stage_pe(&p, w, w)?;
        println!(
            "omega {w:.2}: connect {:.4} jam {:.4} ({} bisection steps)",
            pe.soldier_mix.p_first, pe.attacker_mix.p_first, pe.diagnostics.bisection_iterations
        );
    }
    println!("\nbeta   alpha_A(beta)  alpha_S(beta)   at omega = 0.5");
    for i in 0..=10 {
        let beta = i as f64 / 10.0;
        let a = curve_alpha_of_beta(&p, 0.5, beta)?;
        let s = curve_alpha_of_beta_soldier(&p, 0.5, beta).map_or(f64::NAN, |x| x);
        println!("{beta:.1}    {a:>12.4}  {s:>13.4}");
    }
    Ok(())
}
