use demcal::dem::*;
use demcal::rigs::*;

fn main() {
    let count: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(2000);
    let rig = ReposeRig { particle_count: count, ..ReposeRig::desk_scale() };
    let dist = SizeDistribution::salt_default();
    let mats = RigMaterials::salt_steel(
        0.275,
        ContactParams::new(0.544, 0.85, 0.23).unwrap(),
        ContactParams::new(0.421, 0.71, 0.368).unwrap(),
    ).unwrap();
    let h = 2.0;
    let dt = stable_timestep(&[mats.table.material(mats.grain)], dist.min_radius(h), 0.25).unwrap();
    let cfg = SimConfig { timestep: dt, duration: 20.0,
        grid_cell: (3.0*dist.min_radius(h)).max(2.0*dist.max_radius(h)),
        rng_seed: 11, snapshot_interval: 100.0, deterministic: false };
    println!("dt={dt:.3e} grid={:.4}", cfg.grid_cell);
    let t0 = std::time::Instant::now();
    match run_repose(&rig, &dist, h, &mats, &cfg, None) {
        Ok(run) => println!("count={count} angle={:.2} sectors={:?} measured={} gen={} t_sim={:.2} overlap={:.4} wall={:?}",
            run.result.angle_deg,
            run.result.sector_angles_deg.iter().map(|a| format!("{:.1}", a)).collect::<Vec<_>>(),
            run.measured, run.generated, run.sim_time, run.max_overlap_frac, t0.elapsed()),
        Err(e) => println!("count={count} error: {e}"),
    }
}
