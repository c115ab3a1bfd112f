//! Random uplink multi-cell deployments.
//!
//! BSs sit at the centres of a square grid of cells covering a square area.
//! One UE per cell is dropped uniformly over the whole area, links get
//! COST231-Hata path loss, log-normal shadowing and Rayleigh fading, and each
//! UE joins the BS with the strongest channel. Drops where two UEs pick the
//! same BS are discarded and redrawn.

use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, Normal};

use crate::error::{Error, Result};
use crate::network::{InterferenceNetwork, PowerModel};

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioParams {
    /// Edge of the square area, m.
    pub area_edge: f64,
    /// Number of cells (and UEs); a perfect square.
    pub n_cells: usize,
    pub carrier_freq_mhz: f64,
    pub bs_height: f64,
    pub ue_height: f64,
    pub shadowing_sigma_db: f64,
    pub noise_density_dbm_hz: f64,
    pub noise_figure_db: f64,
    pub bandwidth: f64,
    pub pa_efficiency: f64,
    /// Static circuit power, W.
    pub p_static: f64,
    /// If set, `p_static` is charged once per UE instead of once in total.
    pub static_power_per_ue: bool,
    /// Distances below this are clamped, m.
    pub min_distance: f64,
    pub max_attempts: usize,
}

impl Default for ScenarioParams {
    fn default() -> Self {
        Self {
            area_edge: 1000.0,
            n_cells: 4,
            carrier_freq_mhz: 1900.0,
            bs_height: 30.0,
            ue_height: 1.5,
            shadowing_sigma_db: 8.0,
            noise_density_dbm_hz: -174.0,
            noise_figure_db: 3.0,
            bandwidth: 180e3,
            pa_efficiency: 0.25,
            p_static: 0.4,
            static_power_per_ue: false,
            min_distance: 10.0,
            max_attempts: 100_000,
        }
    }
}

impl ScenarioParams {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("area_edge", self.area_edge),
            ("carrier_freq_mhz", self.carrier_freq_mhz),
            ("bs_height", self.bs_height),
            ("ue_height", self.ue_height),
            ("shadowing_sigma_db", self.shadowing_sigma_db),
            ("bandwidth", self.bandwidth),
            ("pa_efficiency", self.pa_efficiency),
            ("p_static", self.p_static),
            ("min_distance", self.min_distance),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Config(format!("{name} must be positive, got {v}")));
            }
        }
        if self.grid_side().is_none() {
            return Err(Error::Config(format!(
                "n_cells = {} is not a positive perfect square",
                self.n_cells
            )));
        }
        if self.max_attempts == 0 {
            return Err(Error::Config("max_attempts must be positive".into()));
        }
        Ok(())
    }

    fn grid_side(&self) -> Option<usize> {
        let side = (self.n_cells as f64).sqrt().round() as usize;
        (side > 0 && side * side == self.n_cells).then_some(side)
    }

    /// Thermal noise plus noise figure over the bandwidth, W.
    pub fn noise_power(&self) -> f64 {
        10f64.powf((self.noise_density_dbm_hz + self.noise_figure_db) / 10.0 - 3.0) * self.bandwidth
    }

    pub fn power_model(&self) -> Result<PowerModel> {
        let total = if self.static_power_per_ue {
            self.p_static * self.n_cells as f64
        } else {
            self.p_static
        };
        PowerModel::uniform(self.n_cells, self.pa_efficiency, total)
    }

    /// Log-normal shadowing sample, dB.
    pub fn shadowing_db<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        Normal::new(0.0, self.shadowing_sigma_db)
            .expect("validated sigma")
            .sample(rng)
    }

    /// Rayleigh fading power gain `|h|^2`, exponential with unit mean.
    pub fn fading_power<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        Exp1.sample(rng)
    }
}

/// COST231-Hata urban path loss (medium city) in dB for a distance in km.
pub fn pathloss_db(d_km: f64, params: &ScenarioParams) -> Result<f64> {
    if !(d_km >= 0.0 && d_km.is_finite()) {
        return Err(Error::Precondition(format!("distance {d_km} km must be nonnegative")));
    }
    let d = d_km.max(params.min_distance / 1000.0);
    if d <= 0.0 {
        return Err(Error::Precondition("distance must be positive after clamping".into()));
    }
    let lf = params.carrier_freq_mhz.log10();
    let lhb = params.bs_height.log10();
    let a_hm = (1.1 * lf - 0.7) * params.ue_height - (1.56 * lf - 0.8);
    Ok(46.3 + 33.9 * lf - 13.82 * lhb - a_hm + (44.9 - 6.55 * lhb) * d.log10())
}

#[derive(Debug, Clone, PartialEq)]
pub struct Deployment {
    pub bs_positions: Vec<[f64; 2]>,
    pub ue_positions: Vec<[f64; 2]>,
    /// `association[u]` is the BS serving UE `u`.
    pub association: Vec<usize>,
    /// `gains[u][b]`: linear power gain from UE `u` to BS `b`.
    pub gains: Vec<Vec<f64>>,
    /// Drops discarded before this one was accepted.
    pub rejected: usize,
}

/// Independent generator for realization `index` under `master_seed`.
///
/// Every index gets its own ChaCha stream, so realizations can be produced in
/// any order or in parallel.
pub fn realization_rng(master_seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(index);
    rng
}

pub fn generate(seed: u64, params: &ScenarioParams) -> Result<(Deployment, InterferenceNetwork)> {
    generate_with(&mut realization_rng(seed, 0), params)
}

pub fn generate_indexed(
    master_seed: u64,
    index: u64,
    params: &ScenarioParams,
) -> Result<(Deployment, InterferenceNetwork)> {
    generate_with(&mut realization_rng(master_seed, index), params)
}

pub fn generate_with<R: Rng + ?Sized>(
    rng: &mut R,
    params: &ScenarioParams,
) -> Result<(Deployment, InterferenceNetwork)> {
    params.validate()?;
    let side = params.grid_side().expect("validated");
    let cell = params.area_edge / side as f64;
    let bs_positions: Vec<[f64; 2]> = (0..params.n_cells)
        .map(|b| {
            [
                (b % side) as f64 * cell + cell / 2.0,
                (b / side) as f64 * cell + cell / 2.0,
            ]
        })
        .collect();
    let n = params.n_cells;

    for rejected in 0..params.max_attempts {
        let ue_positions: Vec<[f64; 2]> = (0..n)
            .map(|_| {
                [
                    rng.random::<f64>() * params.area_edge,
                    rng.random::<f64>() * params.area_edge,
                ]
            })
            .collect();

        let mut gains = vec![vec![0.0; n]; n];
        for (u, ue) in ue_positions.iter().enumerate() {
            for (b, bs) in bs_positions.iter().enumerate() {
                let d_km = ((ue[0] - bs[0]).powi(2) + (ue[1] - bs[1]).powi(2)).sqrt() / 1000.0;
                let loss = pathloss_db(d_km, params)? + params.shadowing_db(rng);
                gains[u][b] = 10f64.powf(-loss / 10.0) * params.fading_power(rng);
            }
        }

        let association: Vec<usize> = gains
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .max_by(|a, b| a.1.total_cmp(b.1))
                    .map(|(b, _)| b)
                    .expect("at least one BS")
            })
            .collect();

        let mut taken = vec![false; n];
        let bijective = association.iter().all(|&b| !std::mem::replace(&mut taken[b], true));
        if !bijective {
            continue;
        }

        let alpha = (0..n).map(|i| gains[i][association[i]]).collect();
        let beta = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { 0.0 } else { gains[j][association[i]] })
                    .collect()
            })
            .collect();
        let sigma2 = vec![params.noise_power(); n];
        let net = InterferenceNetwork::new(alpha, beta, sigma2, params.bandwidth)?;
        return Ok((
            Deployment {
                bs_positions,
                ue_positions,
                association,
                gains,
                rejected,
            },
            net,
        ));
    }
    Err(Error::GenerationFailed {
        attempts: params.max_attempts,
    })
}

/// Writes `count` realizations as `net_<seed>_<index>.txt` into `dir`.
pub fn export_batch(seed: u64, count: u64, params: &ScenarioParams, dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    (0..count)
        .map(|index| {
            let (_, net) = generate_indexed(seed, index, params)?;
            let path = dir.join(format!("net_{seed}_{index}.txt"));
            std::fs::write(&path, net.to_text())?;
            Ok(path)
        })
        .collect()
}
