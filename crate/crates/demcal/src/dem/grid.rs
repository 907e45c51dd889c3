use super::{Aabb, DemError, Particle, Vec3};

/// Sparse uniform grid over the simulation domain, stored as particle
/// indices sorted by cell key. Memory and per-step cost scale with the
/// particle count, not the domain volume. Cell edge must be at least the
/// largest particle diameter so a 27-cell neighborhood covers every
/// possible overlap.
#[derive(Debug)]
pub struct Grid {
    /// (cell coordinates, particle index), sorted.
    entries: Vec<((i32, i32, i32), u32)>,
    /// (cell coordinates, start, end) runs into `entries`, sorted by cell.
    runs: Vec<((i32, i32, i32), usize, usize)>,
}

impl Grid {
    pub fn build(particles: &[Particle], domain: &Aabb, cell: f64) -> Result<Self, DemError> {
        let mut entries = Vec::with_capacity(particles.len());
        for (i, p) in particles.iter().enumerate() {
            if !domain.contains(p.position) {
                return Err(DemError::DomainOverflow {
                    id: p.id,
                    x: p.position.x,
                    y: p.position.y,
                    z: p.position.z,
                });
            }
            entries.push((cell_coords(p.position, domain.min, cell), i as u32));
        }
        entries.sort_unstable();

        let mut runs = Vec::new();
        let mut start = 0;
        while start < entries.len() {
            let key = entries[start].0;
            let mut end = start + 1;
            while end < entries.len() && entries[end].0 == key {
                end += 1;
            }
            runs.push((key, start, end));
            start = end;
        }
        Ok(Self { entries, runs })
    }

    /// Candidate particle index pairs (i < j), sorted canonically, from the
    /// half-neighborhood sweep (13 forward cells plus intra-cell pairs) over
    /// the occupied cells only.
    pub fn candidate_pairs(&self, particles: &[Particle]) -> Vec<(u32, u32)> {
        let mut pairs = Vec::new();
        for &(key, start, end) in &self.runs {
            let cell_a = &self.entries[start..end];
            // Intra-cell pairs.
            for (ai, &(_, a)) in cell_a.iter().enumerate() {
                for &(_, b) in &cell_a[ai + 1..] {
                    push_if_close(&mut pairs, particles, a, b);
                }
            }
            // Forward half of the 27-neighborhood.
            for &(dx, dy, dz) in FORWARD_NEIGHBORS {
                let nk = (key.0 + dx, key.1 + dy, key.2 + dz);
                let Ok(r) = self.runs.binary_search_by(|probe| probe.0.cmp(&nk)) else {
                    continue;
                };
                let (_, ns, ne) = self.runs[r];
                for &(_, a) in cell_a {
                    for &(_, b) in &self.entries[ns..ne] {
                        push_if_close(&mut pairs, particles, a, b);
                    }
                }
            }
        }
        pairs.sort_unstable();
        pairs
    }
}

fn push_if_close(pairs: &mut Vec<(u32, u32)>, particles: &[Particle], a: u32, b: u32) {
    let pa = &particles[a as usize];
    let pb = &particles[b as usize];
    let reach = pa.radius + pb.radius;
    if (pa.position - pb.position).norm_squared() < reach * reach {
        pairs.push(if a < b { (a, b) } else { (b, a) });
    }
}

fn cell_coords(p: Vec3, origin: Vec3, cell: f64) -> (i32, i32, i32) {
    (
        ((p.x - origin.x) / cell).floor() as i32,
        ((p.y - origin.y) / cell).floor() as i32,
        ((p.z - origin.z) / cell).floor() as i32,
    )
}

/// 13 of the 26 neighbor offsets; together with intra-cell pairs this visits
/// every unordered cell pair exactly once.
const FORWARD_NEIGHBORS: &[(i32, i32, i32)] = &[
    (1, 0, 0),
    (-1, 1, 0),
    (0, 1, 0),
    (1, 1, 0),
    (-1, -1, 1),
    (0, -1, 1),
    (1, -1, 1),
    (-1, 0, 1),
    (0, 0, 1),
    (1, 0, 1),
    (-1, 1, 1),
    (0, 1, 1),
    (1, 1, 1),
];
