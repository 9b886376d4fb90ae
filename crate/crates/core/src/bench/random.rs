use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::BenchError;
use crate::circuit::{Circuit, Gate};
use crate::placement::Mapping;

/// Random circuit of `t` timesteps, each holding `floor(d * floor(n/2))`
/// CNOTs on a uniformly random set of disjoint pairs.
///
/// Each timestep after the first is resampled until one of its pairs shares
/// a qubit with the previous timestep; that pair is emitted first so greedy
/// slicing recovers exactly `t` timesteps.
pub fn gen_random_circuit(n: usize, d: f64, t: usize, seed: u64) -> Result<Circuit, BenchError> {
    if n < 2 {
        return Err(BenchError::TooFewQubits(n));
    }
    let per_step = (d * (n / 2) as f64 + 1e-9).floor() as usize;
    if per_step == 0 || per_step > n / 2 || d.is_nan() {
        return Err(BenchError::InfeasibleDensity {
            density: d.to_string(),
            qubits: n,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut circuit = Circuit::new(n);
    let mut qubits: Vec<usize> = (0..n).collect();
    let mut previous = vec![false; n];
    for step in 0..t {
        let pairs = loop {
            qubits.shuffle(&mut rng);
            let mut pairs: Vec<(usize, usize)> = qubits
                .chunks_exact(2)
                .take(per_step)
                .map(|c| (c[0], c[1]))
                .collect();
            if step == 0 {
                break pairs;
            }
            if let Some(i) = pairs.iter().position(|&(a, b)| previous[a] || previous[b]) {
                pairs[..=i].rotate_right(1);
                break pairs;
            }
        };
        previous.fill(false);
        for (a, b) in pairs {
            previous[a] = true;
            previous[b] = true;
            circuit.push(Gate::cx(a, b));
        }
    }
    Ok(circuit)
}

/// Uniformly random placement of `num_qubits` qubits on distinct nodes.
pub fn random_mapping(num_qubits: usize, num_nodes: usize, seed: u64) -> Mapping {
    assert!(num_qubits <= num_nodes);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut nodes: Vec<usize> = (0..num_nodes).collect();
    nodes.shuffle(&mut rng);
    Mapping::from_pairs(
        num_qubits,
        num_nodes,
        nodes.into_iter().take(num_qubits).enumerate(),
    )
    .unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::slice_timesteps;

    #[test]
    fn full_density_pairs_every_qubit() {
        let c = gen_random_circuit(4, 1.0, 1, 3).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c.active_qubits(), vec![0, 1, 2, 3]);
    }

    #[test]
    fn slicing_recovers_the_timesteps() {
        for &(n, d) in &[(64, 1.0), (9, 1.0), (10, 0.5), (12, 0.67), (4, 0.5)] {
            for seed in 0..20 {
                let c = gen_random_circuit(n, d, 10, seed).unwrap();
                let slices = slice_timesteps(&c);
                let per_step = (d * (n / 2) as f64 + 1e-9).floor() as usize;
                assert_eq!(slices.len(), 10, "n={n} d={d} seed={seed}");
                assert!(slices.iter().all(|s| s.len() == per_step));
            }
        }
        assert_eq!(gen_random_circuit(64, 1.0, 10, 0).unwrap().len(), 320);
    }

    #[test]
    fn infeasible_density_is_rejected() {
        assert!(gen_random_circuit(4, 0.3, 1, 0).is_err());
        assert!(gen_random_circuit(1, 1.0, 1, 0).is_err());
        assert!(gen_random_circuit(4, 1.5, 1, 0).is_err());
    }

    #[test]
    fn same_seed_same_circuit() {
        assert_eq!(
            gen_random_circuit(16, 1.0, 5, 9).unwrap(),
            gen_random_circuit(16, 1.0, 5, 9).unwrap()
        );
        assert_ne!(
            gen_random_circuit(16, 1.0, 5, 9).unwrap(),
            gen_random_circuit(16, 1.0, 5, 10).unwrap()
        );
    }

    #[test]
    fn random_mapping_is_a_bijection() {
        let m = random_mapping(5, 8, 1);
        assert!(m.is_complete() && m.is_consistent());
    }
}
