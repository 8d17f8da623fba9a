//! Spatial sampling: the planar MBS PPP on a disk, the Poisson line process
//! of roads, 1-D PPPs of SBSs and vehicles on each road, and the Palm
//! construction that places the typical vehicle at the origin on a road
//! through the origin.
//!
//! All statistics are read at the origin, which is maximally distant from
//! the region boundary, so no guard band is applied.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};

use crate::channel::NetworkConfig;

/// A road: a line parameterized by the signed perpendicular distance `rho`
/// from the origin and the normal angle `theta` in [0, π).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Line {
    pub rho: f64,
    pub theta: f64,
}

impl Line {
    /// Half-length of the chord the line cuts out of the disk of radius `r`
    /// (zero when the line misses the disk).
    pub fn chord_half_length(&self, r: f64) -> f64 {
        let d = r * r - self.rho * self.rho;
        if d <= 0.0 {
            0.0
        } else {
            d.sqrt()
        }
    }

    /// Planar position of the point at signed `offset` along the line,
    /// measured from the foot of the perpendicular.
    pub fn to_plane(&self, offset: f64) -> [f64; 2] {
        let (sin, cos) = self.theta.sin_cos();
        [
            self.rho * cos - offset * sin,
            self.rho * sin + offset * cos,
        ]
    }
}

/// Reproducible random source: identical (seed, stream_id) pairs yield
/// identical realizations, and distinct stream ids are independent, so
/// drops can run concurrently.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RngStream {
    pub seed: u64,
    pub stream_id: u64,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        Self { seed, stream_id }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_id);
        rng
    }
}

/// One sampled drop of the network. The typical vehicle sits at the origin
/// of the typical road (offset 0) and is not listed among `vehicle_offsets`,
/// so every listed vehicle is a potential interferer.
#[derive(Clone, Debug)]
pub struct NetworkRealization {
    pub mbs_points: Vec<[f64; 2]>,
    pub roads: Vec<Line>,
    /// Per-road SBS offsets along the line, same indexing as `roads`.
    pub sbs_offsets: Vec<Vec<f64>>,
    /// Per-road vehicle offsets along the line, same indexing as `roads`.
    pub vehicle_offsets: Vec<Vec<f64>>,
    pub typical_road_index: usize,
    pub region_radius: f64,
}

impl NetworkRealization {
    pub fn typical_road(&self) -> &Line {
        &self.roads[self.typical_road_index]
    }

    pub fn typical_sbs_offsets(&self) -> &[f64] {
        &self.sbs_offsets[self.typical_road_index]
    }

    pub fn typical_vehicle_offsets(&self) -> &[f64] {
        &self.vehicle_offsets[self.typical_road_index]
    }
}

fn poisson_count<R: Rng + ?Sized>(mean: f64, rng: &mut R) -> usize {
    if mean <= 0.0 {
        return 0;
    }
    Poisson::new(mean).expect("positive mean").sample(rng) as usize
}

/// Planar PPP of the given density on the disk of radius `r`.
pub fn sample_mbs<R: Rng + ?Sized>(density: f64, r: f64, rng: &mut R) -> Vec<[f64; 2]> {
    let n = poisson_count(density * std::f64::consts::PI * r * r, rng);
    (0..n)
        .map(|_| {
            let radius = r * rng.random::<f64>().sqrt();
            let phi = rng.random::<f64>() * 2.0 * std::f64::consts::PI;
            [radius * phi.cos(), radius * phi.sin()]
        })
        .collect()
}

/// Line process with intensity `density` over the strip
/// (ρ, θ) ∈ (-r, r) × [0, π), mean count 2π·density·r. With
/// `include_typical` an extra line through the origin (ρ = 0, θ uniform) is
/// appended; its index is returned.
pub fn sample_roads<R: Rng + ?Sized>(
    density: f64,
    r: f64,
    rng: &mut R,
    include_typical: bool,
) -> (Vec<Line>, Option<usize>) {
    let n = poisson_count(2.0 * std::f64::consts::PI * density * r, rng);
    let mut roads: Vec<Line> = (0..n)
        .map(|_| Line {
            rho: rng.random_range(-r..r),
            theta: rng.random_range(0.0..std::f64::consts::PI),
        })
        .collect();
    let typical = if include_typical {
        roads.push(Line {
            rho: 0.0,
            theta: rng.random_range(0.0..std::f64::consts::PI),
        });
        Some(roads.len() - 1)
    } else {
        None
    };
    (roads, typical)
}

/// 1-D PPP on the chord of `line` inside the disk of radius `r`; offsets
/// are measured from the foot of the perpendicular.
pub fn sample_points_on_line<R: Rng + ?Sized>(
    line: &Line,
    density: f64,
    r: f64,
    rng: &mut R,
) -> Vec<f64> {
    let half = line.chord_half_length(r);
    if half <= 0.0 {
        return Vec::new();
    }
    let n = poisson_count(density * 2.0 * half, rng);
    (0..n).map(|_| rng.random_range(-half..half)).collect()
}

/// Samples a full drop: MBS field, road set (typical road included), and
/// SBS/vehicle processes on every road.
pub fn build_realization(cfg: &NetworkConfig, stream: &RngStream) -> NetworkRealization {
    let mut rng = stream.rng();
    build_realization_with(cfg, &mut rng)
}

pub(crate) fn build_realization_with<R: Rng + ?Sized>(
    cfg: &NetworkConfig,
    rng: &mut R,
) -> NetworkRealization {
    let r = cfg.region_radius_km;
    let mbs_points = sample_mbs(cfg.lambda_m, r, rng);
    let (roads, typical) = sample_roads(cfg.lambda_l, r, rng, true);
    let typical_road_index = typical.expect("typical road requested");
    let mut sbs_offsets = Vec::with_capacity(roads.len());
    let mut vehicle_offsets = Vec::with_capacity(roads.len());
    for line in &roads {
        sbs_offsets.push(sample_points_on_line(line, cfg.lambda_s, r, rng));
        vehicle_offsets.push(sample_points_on_line(line, cfg.lambda_v, r, rng));
    }
    NetworkRealization {
        mbs_points,
        roads,
        sbs_offsets,
        vehicle_offsets,
        typical_road_index,
        region_radius: r,
    }
}
