//! Success probabilities and retransmission delays for the default devices.
//!
//! Run with `cargo run --example channel`.

use iobt_psygame::channel::{success_probability, success_probability_quadrature, DeviceDelays};
use iobt_psygame::experiment::ExperimentSpec;

fn main() -> iobt_psygame::Result<()> {
    let spec = ExperimentSpec::parse("")?;
    let fading = &spec.game.fading;
    println!("device  d_s(m)  d_a(m)  q_free   q_jammed  quad_err   free(ms)  jammed(ms)");
    for (i, link) in spec.game.links.iter().enumerate() {
        let free = success_probability(link, fading, false);
        let jammed = success_probability(link, fading, true);
        let quad = success_probability_quadrature(link, fading, true)?;
        let d = DeviceDelays::for_link(link, fading)?;
        println!(
            "{:>6}  {:>6.1}  {:>6.1}  {:.5}  {:.5}   {:.1e}    {:>7.2}   {:>8.2}",
            i + 1,
            link.soldier_distance_m,
            link.jammer_distance_m,
            free,
            jammed,
            (quad - jammed).abs(),
            d.unjammed_s * 1e3,
            d.jammed_s * 1e3
        );
    }
    Ok(())
}
