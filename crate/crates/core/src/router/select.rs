use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::distance::DistanceVector;
use super::RoutingConfig;
use crate::architecture::Architecture;
use crate::circuit::Timestep;
use crate::placement::Mapping;

/// A skeleton edge `(min, max)` whose two nodes exchange contents.
pub type Swap = (usize, usize);

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SwapChoice {
    /// One swap that shrinks the frontier's diameter.
    Single(Swap),
    /// Two disjoint swaps applied together, tried when no single swap helps.
    Pair(Swap, Swap),
    /// Swaps walking one qubit of the most distant frontier pair along a
    /// shortest path until it neighbours its partner.
    Path(Vec<Swap>),
}

impl SwapChoice {
    pub fn swaps(&self) -> Vec<Swap> {
        match self {
            SwapChoice::Single(s) => vec![*s],
            SwapChoice::Pair(a, b) => vec![*a, *b],
            SwapChoice::Path(p) => p.clone(),
        }
    }

    pub fn is_fallback(&self) -> bool {
        !matches!(self, SwapChoice::Single(_))
    }
}

fn edge(a: usize, b: usize) -> Swap {
    (a.min(b), a.max(b))
}

/// Skeleton edges touching a node that holds a qubit of a pair in `s` that
/// is not yet adjacent. Sorted, without duplicates.
pub fn candidate_swaps(s: &Timestep, m: &Mapping, arch: &Architecture) -> Vec<Swap> {
    let mut out = Vec::new();
    for &(a, b) in &s.pairs {
        let (Some(x), Some(y)) = (m.node(a), m.node(b)) else {
            continue;
        };
        if arch.distance(x, y) < 2 {
            continue;
        }
        for p in [x, y] {
            out.extend(arch.neighbors(p).iter().map(|&v| edge(p, v)));
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Per-slice data for scoring candidate swaps incrementally: only the pairs
/// containing a moved qubit change distance.
struct SliceScore {
    pairs: Vec<(usize, usize)>,
    pair_of: Vec<Option<usize>>,
    base: DistanceVector,
}

impl SliceScore {
    fn new(s: &Timestep, m: &Mapping, arch: &Architecture) -> Self {
        let mut pair_of = vec![None; m.num_qubits()];
        let mut base = DistanceVector::with_capacity(arch.diameter());
        for (i, &(a, b)) in s.pairs.iter().enumerate() {
            pair_of[a] = Some(i);
            pair_of[b] = Some(i);
            if let (Some(x), Some(y)) = (m.node(a), m.node(b)) {
                base.add(arch.distance(x, y));
            }
        }
        SliceScore {
            pairs: s.pairs.clone(),
            pair_of,
            base,
        }
    }

    /// Calls `f(before, after)` with the old and new distance of every pair
    /// that `moves` changes.
    fn changes(
        &self,
        moves: &Moves,
        m: &Mapping,
        arch: &Architecture,
        mut f: impl FnMut(usize, usize),
    ) {
        let moves = moves.as_slice();
        let mut touched = [usize::MAX; 4];
        let mut n_touched = 0;
        for &(q, _) in moves {
            if let Some(i) = self.pair_of[q] {
                if !touched[..n_touched].contains(&i) {
                    touched[n_touched] = i;
                    n_touched += 1;
                }
            }
        }
        let after = |q: usize| {
            moves
                .iter()
                .find(|&&(x, _)| x == q)
                .map(|&(_, n)| n)
                .or_else(|| m.node(q))
        };
        for &i in &touched[..n_touched] {
            let (a, b) = self.pairs[i];
            let (Some(x), Some(y)) = (m.node(a), m.node(b)) else {
                continue;
            };
            let (x2, y2) = (after(a).unwrap(), after(b).unwrap());
            f(arch.distance(x, y), arch.distance(x2, y2));
        }
    }

    /// Distance vector after the qubits in `moves` relocate.
    fn score(&self, moves: &Moves, m: &Mapping, arch: &Architecture) -> DistanceVector {
        let mut v = self.base.clone();
        self.changes(moves, m, arch, |before, after| {
            v.remove(before);
            v.add(after);
        });
        v
    }

    /// Whether `moves` strictly shrinks the diameter key, computed from the
    /// changed pairs alone: no pair may grow past the current maximum, and
    /// fewer pairs may sit at it afterwards.
    fn shrinks_diameter(&self, moves: &Moves, m: &Mapping, arch: &Architecture) -> bool {
        let Some(top) = self.base.max_distance() else {
            return false;
        };
        let (mut left, mut arrived, mut grew) = (0, 0, false);
        self.changes(moves, m, arch, |before, after| {
            left += usize::from(before == top);
            arrived += usize::from(after == top);
            grew |= after > top;
        });
        !grew && arrived < left
    }
}

/// Qubit relocations caused by at most two disjoint swaps.
struct Moves {
    buf: [(usize, usize); 4],
    len: usize,
}

impl Moves {
    fn as_slice(&self) -> &[(usize, usize)] {
        &self.buf[..self.len]
    }
}

fn moves_of(swaps: &[Swap], m: &Mapping) -> Moves {
    let mut moves = Moves {
        buf: [(0, 0); 4],
        len: 0,
    };
    for &(a, b) in swaps {
        for (from, to) in [(a, b), (b, a)] {
            if let Some(q) = m.qubit(from) {
                moves.buf[moves.len] = (q, to);
                moves.len += 1;
            }
        }
    }
    moves
}

/// Disjoint pairs of pertinent swaps that shrink the diameter key, when no
/// single swap does.
///
/// Swaps that move qubits of different pairs act independently, so their
/// effects add up; as neither helps alone (each lets a pair grow past the
/// maximum or fails to lower the count at it), neither does their sum. Only
/// pairs where the second swap moves the partner of a qubit the first one
/// moves need to be scored.
fn admitted_pairs(
    first: &SliceScore,
    pertinent: &[Swap],
    m: &Mapping,
    arch: &Architecture,
) -> Vec<Vec<Swap>> {
    let mut pool = Vec::new();
    for &s in pertinent {
        for moved in [m.qubit(s.0), m.qubit(s.1)].into_iter().flatten() {
            let Some(i) = first.pair_of[moved] else {
                continue;
            };
            let (a, b) = first.pairs[i];
            let Some(y) = m.node(if a == moved { b } else { a }) else {
                continue;
            };
            for &v in arch.neighbors(y) {
                let t = edge(y, v);
                let disjoint = s.0 != t.0 && s.0 != t.1 && s.1 != t.0 && s.1 != t.1;
                if s < t && disjoint && pertinent.binary_search(&t).is_ok() {
                    let pair = [s, t];
                    if first.shrinks_diameter(&moves_of(&pair, m), m, arch) {
                        pool.push(pair.to_vec());
                    }
                }
            }
        }
    }
    pool.sort_unstable();
    pool.dedup();
    pool
}

pub(crate) struct Selector<'a> {
    arch: &'a Architecture,
    cfg: &'a RoutingConfig,
    rng: Option<ChaCha8Rng>,
}

impl<'a> Selector<'a> {
    pub(crate) fn new(arch: &'a Architecture, cfg: &'a RoutingConfig) -> Self {
        let rng = (cfg.seed != 0).then(|| ChaCha8Rng::seed_from_u64(cfg.seed));
        Selector { arch, cfg, rng }
    }

    /// Picks the swaps to insert for the frontier `slices[0]`, consulting
    /// later slices to break ties. `node_time` holds, per node, the layer of
    /// the last two-qubit operation on it. When given, swaps that can start
    /// earliest are preferred, before the lookahead ranking if
    /// `earliest_first` is set and after it otherwise.
    pub(crate) fn select(
        &mut self,
        slices: &[Timestep],
        m: &Mapping,
        node_time: Option<&[usize]>,
    ) -> SwapChoice {
        let arch = self.arch;
        let front = &slices[0];
        let first = SliceScore::new(front, m, arch);
        let pertinent = candidate_swaps(front, m, arch);
        assert!(!pertinent.is_empty(), "no unresolved pair in the frontier");

        let admitted = |swaps: &[Swap]| first.shrinks_diameter(&moves_of(swaps, m), m, arch);

        let mut pool: Vec<Vec<Swap>> = pertinent
            .iter()
            .map(|&s| vec![s])
            .filter(|s| admitted(s))
            .collect();
        if pool.is_empty() && self.cfg.allow_pair_swaps {
            pool = admitted_pairs(&first, &pertinent, m, arch);
        }
        if pool.is_empty() {
            return SwapChoice::Path(self.brute_force(front, m));
        }

        let start = |s: &Vec<Swap>, time: &[usize]| {
            s.iter().map(|&(a, b)| time[a].max(time[b])).max().unwrap()
        };
        if let (Some(time), true) = (node_time, self.cfg.earliest_first) {
            let earliest = pool.iter().map(|s| start(s, time)).min().unwrap();
            pool.retain(|s| start(s, time) == earliest);
        }
        for (k, slice) in slices.iter().take(self.cfg.lookahead + 1).enumerate() {
            if pool.len() == 1 {
                break;
            }
            let scorer = if k == 0 {
                None
            } else {
                Some(SliceScore::new(slice, m, arch))
            };
            let scorer = scorer.as_ref().unwrap_or(&first);
            let scores: Vec<DistanceVector> = pool
                .iter()
                .map(|s| scorer.score(&moves_of(s, m), m, arch))
                .collect();
            let best = scores.iter().min().unwrap().clone();
            pool = pool
                .into_iter()
                .zip(scores)
                .filter(|(_, v)| *v == best)
                .map(|(s, _)| s)
                .collect();
        }

        if let Some(time) = node_time {
            let earliest = pool.iter().map(|s| start(s, time)).min().unwrap();
            pool.retain(|s| start(s, time) == earliest);
        }

        let chosen = match self.rng.as_mut() {
            Some(rng) => pool.choose(rng).unwrap().clone(),
            None => pool.into_iter().min().unwrap(),
        };
        match chosen[..] {
            [s] => SwapChoice::Single(s),
            [s, t] => SwapChoice::Pair(s, t),
            _ => unreachable!(),
        }
    }

    fn brute_force(&self, front: &Timestep, m: &Mapping) -> Vec<Swap> {
        let arch = self.arch;
        let (x, y) = front
            .pairs
            .iter()
            .filter_map(|&(a, b)| Some((m.node(a)?, m.node(b)?)))
            .max_by_key(|&(x, y)| (arch.distance(x, y), std::cmp::Reverse((x, y))))
            .expect("frontier has a mapped pair");
        let path = arch.shortest_path(x, y);
        path.windows(2)
            .take(path.len() - 2)
            .map(|w| edge(w[0], w[1]))
            .collect()
    }
}

/// Chooses the swap (or fallback swaps) for the frontier `slices[0]`, using
/// the following slices as lookahead.
pub fn select_swap(
    slices: &[Timestep],
    m: &Mapping,
    arch: &Architecture,
    cfg: &RoutingConfig,
) -> SwapChoice {
    Selector::new(arch, cfg).select(slices, m, None)
}
