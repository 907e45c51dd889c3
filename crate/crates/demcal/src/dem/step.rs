use rayon::prelude::*;

use super::contact::{
    effective_pair, effective_wall_pair, hertz_normal_force, mindlin_tangential_force,
    rolling_resistance_torque,
};
use super::grid::Grid;
use super::{ContactKey, DemError, SimConfig, Vec3, World};

struct ContactForce {
    i: usize,
    /// Particle index for pair contacts, wall index for wall contacts.
    j: usize,
    wall: bool,
    force_i: Vec3,
    torque_i: Vec3,
    torque_j: Vec3,
    key: ContactKey,
    history: Vec3,
    overlap_frac: f64,
}

impl World {
    /// Advance the world by one timestep.
    ///
    /// Forces are assembled from every particle-particle and particle-wall
    /// contact (Hertz normal, Mindlin tangential, rolling resistance) plus
    /// gravity; semi-implicit Euler updates velocities then positions, and
    /// explicit Euler updates angular velocities. Contact history is advected
    /// with the contact frame and dropped for separated pairs.
    pub fn step(mut self, config: &SimConfig) -> Result<World, DemError> {
        let dt = config.timestep;
        config.validate(2.0 * self.max_radius())?;

        let grid = Grid::build(&self.particles, &self.domain, config.grid_cell)?;
        let pairs = grid.candidate_pairs(&self.particles);

        // Parallel force evaluation only pays off for big worlds; per-pair
        // results are folded in canonical order either way, so the two paths
        // are bit-identical.
        let parallel = !config.deterministic && self.particles.len() >= 256;

        let pair_forces: Vec<ContactForce> = if parallel {
            pairs
                .par_iter()
                .filter_map(|&(a, b)| self.pair_contact(a as usize, b as usize, dt))
                .collect()
        } else {
            pairs
                .iter()
                .filter_map(|&(a, b)| self.pair_contact(a as usize, b as usize, dt))
                .collect()
        };

        let wall_forces: Vec<ContactForce> = if parallel {
            (0..self.particles.len())
                .into_par_iter()
                .flat_map_iter(|i| self.wall_contacts(i, dt))
                .collect()
        } else {
            (0..self.particles.len())
                .flat_map(|i| self.wall_contacts(i, dt))
                .collect()
        };

        let n = self.particles.len();
        let mut force = vec![Vec3::zeros(); n];
        let mut torque = vec![Vec3::zeros(); n];
        let mut history = std::collections::HashMap::with_capacity(pair_forces.len() + wall_forces.len());
        let mut max_overlap_frac = self.stats.max_overlap_frac;
        let mut active = 0usize;

        for c in pair_forces.iter().chain(wall_forces.iter()) {
            force[c.i] += c.force_i;
            torque[c.i] += c.torque_i;
            if !c.wall {
                force[c.j] -= c.force_i;
                torque[c.j] += c.torque_j;
            }
            history.insert(c.key, c.history);
            max_overlap_frac = max_overlap_frac.max(c.overlap_frac);
            active += 1;
        }

        let inv_mass: Vec<(f64, f64)> = self
            .particles
            .iter()
            .map(|p| (1.0 / p.mass(&self.table), 1.0 / p.inertia(&self.table)))
            .collect();
        let gravity = self.gravity;
        for (idx, p) in self.particles.iter_mut().enumerate() {
            let (inv_m, inv_i) = inv_mass[idx];
            p.velocity += dt * (force[idx] * inv_m + gravity);
            p.position += dt * p.velocity;
            p.angular_velocity += dt * torque[idx] * inv_i;
        }

        self.contact_history = history;
        self.time += dt;
        self.stats.max_overlap_frac = max_overlap_frac;
        self.stats.active_contacts = active;
        Ok(self)
    }

    fn pair_contact(&self, a: usize, b: usize, dt: f64) -> Option<ContactForce> {
        let pi = &self.particles[a];
        let pj = &self.particles[b];
        let sep = pi.position - pj.position;
        let dist = sep.norm();
        let overlap = pi.radius + pj.radius - dist;
        if overlap <= 0.0 || dist < 1e-14 {
            return None;
        }
        let normal = sep / dist;
        let contact_point = pj.position + (pj.radius - 0.5 * overlap) * normal;

        let params = self.table.pair(pi.material, pj.material);
        let pair = effective_pair(
            self.table.material(pi.material),
            self.table.material(pj.material),
            pi.radius,
            pj.radius,
            &params,
        )
        .expect("world contains validated materials");

        let arm_i = contact_point - pi.position;
        let arm_j = contact_point - pj.position;
        let v_rel = (pi.velocity + pi.angular_velocity.cross(&arm_i))
            - (pj.velocity + pj.angular_velocity.cross(&arm_j));
        let v_n = v_rel.dot(&normal);
        let v_t = v_rel - v_n * normal;

        let key = ContactKey::ParticleParticle(pi.id.min(pj.id), pi.id.max(pj.id));
        let old = self.contact_history.get(&key).copied().unwrap_or_else(Vec3::zeros);
        // Advect: keep the spring in the current tangent plane, then stretch.
        let projected = old - old.dot(&normal) * normal;
        let stretched = projected + v_t * dt;

        let f_n = hertz_normal_force(overlap, v_n, &pair);
        let (f_t, history) = mindlin_tangential_force(stretched, v_t, overlap, &pair, &params, f_n);
        let force_i = f_n * normal + f_t;

        let rolling = rolling_resistance_torque(
            pi.angular_velocity - pj.angular_velocity,
            f_n,
            &pair,
            &params,
        );

        Some(ContactForce {
            i: a,
            j: b,
            wall: false,
            force_i,
            torque_i: arm_i.cross(&force_i) + rolling,
            torque_j: arm_j.cross(&(-force_i)) - rolling,
            key,
            history,
            overlap_frac: overlap / pi.radius.min(pj.radius),
        })
    }

    fn wall_contacts(&self, idx: usize, dt: f64) -> Vec<ContactForce> {
        let p = &self.particles[idx];
        let mut out = Vec::new();
        for (w_idx, wall) in self.walls.iter().enumerate() {
            let Some(wc) = wall.contact(p.position, p.radius, self.time) else {
                continue;
            };
            let params = self.table.pair(p.material, wall.material);
            let pair = effective_wall_pair(
                self.table.material(p.material),
                self.table.material(wall.material),
                p.radius,
                &params,
            )
            .expect("world contains validated materials");

            let arm = wc.point - p.position;
            let wall_omega = wall
                .motion
                .as_ref()
                .filter(|m| self.time >= m.t_start)
                .map_or_else(Vec3::zeros, |m| m.rate * m.axis_dir.normalize());
            let v_rel = p.velocity + p.angular_velocity.cross(&arm) - wc.velocity;
            let v_n = v_rel.dot(&wc.normal);
            let v_t = v_rel - v_n * wc.normal;

            let key = ContactKey::ParticleWall(p.id, w_idx as u32);
            let old = self.contact_history.get(&key).copied().unwrap_or_else(Vec3::zeros);
            let projected = old - old.dot(&wc.normal) * wc.normal;
            let stretched = projected + v_t * dt;

            let f_n = hertz_normal_force(wc.overlap, v_n, &pair);
            let (f_t, history) =
                mindlin_tangential_force(stretched, v_t, wc.overlap, &pair, &params, f_n);
            let force_i = f_n * wc.normal + f_t;
            let rolling =
                rolling_resistance_torque(p.angular_velocity - wall_omega, f_n, &pair, &params);

            out.push(ContactForce {
                i: idx,
                j: w_idx,
                wall: true,
                force_i,
                torque_i: arm.cross(&force_i) + rolling,
                torque_j: Vec3::zeros(),
                key,
                history,
                overlap_frac: wc.overlap / p.radius,
            });
        }
        out
    }

    /// Elastic energy currently stored in Hertz springs (diagnostic; O(N^2)).
    pub fn elastic_energy(&self) -> f64 {
        let mut e = 0.0;
        for a in 0..self.particles.len() {
            for b in a + 1..self.particles.len() {
                let pi = &self.particles[a];
                let pj = &self.particles[b];
                let overlap = pi.radius + pj.radius - (pi.position - pj.position).norm();
                if overlap > 0.0 {
                    let params = self.table.pair(pi.material, pj.material);
                    let pair = effective_pair(
                        self.table.material(pi.material),
                        self.table.material(pj.material),
                        pi.radius,
                        pj.radius,
                        &params,
                    )
                    .unwrap();
                    e += 8.0 / 15.0 * pair.e_star * pair.r_star.sqrt() * overlap.powf(2.5);
                }
            }
            let p = &self.particles[a];
            for wall in &self.walls {
                if let Some(wc) = wall.contact(p.position, p.radius, self.time) {
                    let params = self.table.pair(p.material, wall.material);
                    let pair = effective_wall_pair(
                        self.table.material(p.material),
                        self.table.material(wall.material),
                        p.radius,
                        &params,
                    )
                    .unwrap();
                    e += 8.0 / 15.0 * pair.e_star * pair.r_star.sqrt() * wc.overlap.powf(2.5);
                }
            }
        }
        e
    }
}
