//! Fixed instances shared by the solver benchmarks.

use htee_core::harness::{dbm_to_watt, InstanceConfig};
use htee_core::scenario::generate_indexed;
use htee_core::{InterferenceNetwork, PowerModel, ScenarioParams};

pub struct Fixture {
    pub net: InterferenceNetwork,
    pub pm: PowerModel,
    pub p_max: Vec<f64>,
    pub cfg: InstanceConfig,
}

/// Realization `index` of the default scenario at a common budget of `p_dbm`.
pub fn fixture(index: u64, p_dbm: f64) -> Fixture {
    let params = ScenarioParams::default();
    let (_, net) = generate_indexed(7, index, &params).expect("default scenario generates");
    let pm = params.power_model().expect("default power model");
    let p_max = vec![dbm_to_watt(p_dbm); net.users()];
    Fixture {
        net,
        pm,
        p_max,
        cfg: InstanceConfig::default(),
    }
}
