//! Fixtures shared by the criterion benches.

use rand::SeedableRng;
use swipt_core::model::generate_instance;
use swipt_core::numerics::sample_complex_gaussian;
use swipt_core::rng::StreamRng;
use swipt_core::{Beamformer, ChannelInstance, CircuitPowerSystem, ComplexMatrix};

/// Rayleigh channel with `N_t = 5`, four beacon antennas and `p_c = 0.2·n_r`.
pub fn fixture(n_r: usize, seed: u64) -> (ChannelInstance, CircuitPowerSystem) {
    let ch = generate_instance(&mut StreamRng::seed_from_u64(seed), 5, n_r, 4, &Beamformer::Mrt)
        .expect("valid dimensions");
    let sys = CircuitPowerSystem::new(ch.harvest_weights(), 0.2 * n_r as f64).expect("valid threshold");
    (ch, sys)
}

/// Full-rank `n × n` Gram matrix.
pub fn gram(n: usize, seed: u64) -> ComplexMatrix {
    sample_complex_gaussian(&mut StreamRng::seed_from_u64(seed), n, n).row_gram()
}
