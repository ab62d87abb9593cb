//! Remove background noise with the distance to measure, then decide.

use manifold_interior::dtm::{denoise_and_decide, denoise_and_decide_with, validate_schedule, ScheduleExponents};
use manifold_interior::geometry::RingSpec;
use manifold_interior::peeling::BoundaryMethod;
use manifold_interior::sampling::{sample_mixture, MixtureModel, NoiseBox, Origin, Seed};

fn main() -> manifold_interior::Result<()> {
    let n = 100;
    let schedule = ScheduleExponents::default().with_y(0.8);
    let report = validate_schedule(&schedule);
    for c in &report.conditions {
        println!("condition {}: {:.3} ({})", c.label, c.value, if c.pass { "ok" } else { "violated" });
    }

    let ring = RingSpec::centered(0.1);
    let model = MixtureModel::new(ring, NoiseBox::square(1.5), schedule.alpha_n(n))?;
    let sample = sample_mixture(n, &model, Seed::new(3));
    println!("{} of {n} points are noise (alpha_n = {:.4})", sample.noise_count(), model.alpha_n);

    let out = denoise_and_decide(&sample.cloud, &schedule, 2.5, &BoundaryMethod::Exact2d)?;
    let removed_noise = out.removed.iter().filter(|&&i| sample.labels[i] == Origin::Noise).count();
    println!(
        "m_n = {:.3}, delta_n = {:.3}: kept {}, removed {} ({} of them noise)",
        out.m_n,
        out.delta_n,
        out.kept.len(),
        out.removed.len(),
        removed_noise
    );
    println!("decision: {}", describe(out.decision.nonempty_interior()));

    // At this sample size the schedule threshold keeps everything; a hand-picked one does not.
    let out = denoise_and_decide_with(&sample.cloud, out.m_n, 0.7, 2.5, &BoundaryMethod::Exact2d)?;
    let noise_left = out.kept.iter().filter(|&&i| sample.labels[i] == Origin::Noise).count();
    println!(
        "delta = 0.7: kept {} ({} noise), decision: {}",
        out.kept.len(),
        noise_left,
        describe(out.decision.nonempty_interior())
    );
    Ok(())
}

fn describe(d: Option<bool>) -> &'static str {
    match d {
        Some(true) => "nonempty interior",
        Some(false) => "empty interior",
        None => "too few points left",
    }
}
