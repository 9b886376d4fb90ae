/// Compare-exchange rounds of odd-even transposition sort on a ring of `n`
/// positions. Each comparator `(i, j)` has `i < j` and leaves the smaller
/// value at `i`.
///
/// Rounds alternate between the edges `(0,1), (2,3), ...` and
/// `(1,2), (3,4), ...`; for even `n` the second kind also includes the wrap
/// edge `(0, n-1)`, and `n - 1` rounds sort any input. For odd `n` the wrap
/// edge would collide with `(0,1)` and `(n-2, n-1)`, so the schedule is the
/// plain line version and needs `n` rounds.
pub fn odd_even_sort_schedule(n: usize) -> Vec<Vec<(usize, usize)>> {
    assert!(n >= 2, "sorting needs at least two positions");
    let rounds = if n.is_multiple_of(2) { n - 1 } else { n };
    (0..rounds)
        .map(|r| {
            if r % 2 == 0 {
                (0..n - 1).step_by(2).map(|i| (i, i + 1)).collect()
            } else {
                let mut round: Vec<_> = (1..n - 1).step_by(2).map(|i| (i, i + 1)).collect();
                if n.is_multiple_of(2) && n > 2 {
                    round.push((0, n - 1));
                }
                round
            }
        })
        .collect()
}

/// Runs `schedule` as a comparator network over `values`.
pub fn apply_schedule<T: Ord>(schedule: &[Vec<(usize, usize)>], values: &mut [T]) {
    for round in schedule {
        for &(i, j) in round {
            if values[i] > values[j] {
                values.swap(i, j);
            }
        }
    }
}

/// Extra timesteps the sorting baseline spends on a single-timestep circuit:
/// one swap layer per round.
pub fn sort_baseline_overhead(n: usize) -> usize {
    odd_even_sort_schedule(n).len()
}
