use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::ClpSolution;
use crate::instances::{MakespanInstance, Schedule};
use crate::rational::sample_index;

/// Per-machine generator: the run seed selects the key, the machine id the
/// ChaCha stream, so machines draw independently of iteration order.
pub(crate) fn machine_rng(seed: u64, machine: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(machine as u64);
    rng
}

/// Every machine samples one configuration by weight; each sampled job goes
/// to the first machine (by id) that sampled it.
pub fn alg2_round(clp: &ClpSolution, inst: &MakespanInstance, seed: u64) -> Schedule {
    debug_assert_eq!(clp.machines(), inst.machines());
    let mut schedule = Schedule::new();
    for machine in 0..clp.machines() {
        let configs = clp.configurations(machine);
        if configs.is_empty() {
            continue;
        }
        let weights: Vec<BigRational> = configs.iter().map(|(_, w)| w.clone()).collect();
        let pick = sample_index(&mut machine_rng(seed, machine), &weights);
        for &job in &configs[pick].0 {
            if !schedule.contains_job(job) {
                schedule.assign(machine, job).expect("checked above");
            }
        }
    }
    schedule
}
