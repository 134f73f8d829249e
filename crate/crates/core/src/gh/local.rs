//! Seeded local search for GH upper bounds.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::bounds::lower_distortion;
use super::correspondence::Correspondence;
use super::GhResult;
use crate::space::FiniteMetricSpace;

pub const DEFAULT_RESTARTS: usize = 32;

const MAX_SWEEPS: usize = 10_000;

/// Largest distortion, then how many pairs of pairs attain it.
type Score = (f64, usize);

#[derive(Debug, Clone, Copy)]
enum Move {
    Add(usize, usize),
    Remove(usize, usize),
    /// Replace `(i, j)` by `(i2, j2)` sharing one coordinate.
    Swap((usize, usize), (usize, usize)),
}

struct State {
    member: Vec<bool>,
    row_count: Vec<usize>,
    col_count: Vec<usize>,
    m: usize,
}

impl State {
    fn new(n: usize, m: usize, pairs: &[(usize, usize)]) -> Self {
        let mut s = Self {
            member: vec![false; n * m],
            row_count: vec![0; n],
            col_count: vec![0; m],
            m,
        };
        for &p in pairs {
            s.set(p, true);
        }
        s
    }

    fn has(&self, (i, j): (usize, usize)) -> bool {
        self.member[i * self.m + j]
    }

    fn set(&mut self, (i, j): (usize, usize), on: bool) {
        let slot = &mut self.member[i * self.m + j];
        if *slot == on {
            return;
        }
        *slot = on;
        if on {
            self.row_count[i] += 1;
            self.col_count[j] += 1;
        } else {
            self.row_count[i] -= 1;
            self.col_count[j] -= 1;
        }
    }

    fn pairs(&self) -> Vec<(usize, usize)> {
        let m = self.m;
        self.member
            .iter()
            .enumerate()
            .filter(|(_, &on)| on)
            .map(|(k, _)| (k / m, k % m))
            .collect()
    }

    fn removable(&self, (i, j): (usize, usize)) -> bool {
        self.has((i, j)) && self.row_count[i] > 1 && self.col_count[j] > 1
    }

    fn apply(&mut self, mv: Move) {
        match mv {
            Move::Add(i, j) => self.set((i, j), true),
            Move::Remove(i, j) => self.set((i, j), false),
            Move::Swap(old, new) => {
                self.set(old, false);
                self.set(new, true);
            }
        }
    }

    fn undo(&mut self, mv: Move) {
        match mv {
            Move::Add(i, j) => self.set((i, j), false),
            Move::Remove(i, j) => self.set((i, j), true),
            Move::Swap(old, new) => {
                self.set(new, false);
                self.set(old, true);
            }
        }
    }
}

/// `(distortion, number of pair-of-pairs attaining it)`, compared lexicographically.
fn score(pairs: &[(usize, usize)], x: &FiniteMetricSpace, y: &FiniteMetricSpace) -> Score {
    let mut worst = 0.0_f64;
    let mut count = 0usize;
    for (k, &(a, b)) in pairs.iter().enumerate() {
        for &(u, v) in &pairs[k + 1..] {
            let gap = (x.d(a, u) - y.d(b, v)).abs();
            if gap > worst {
                worst = gap;
                count = 1;
            } else if gap == worst {
                count += 1;
            }
        }
    }
    (worst, count)
}

fn better(a: Score, b: Score) -> bool {
    a.0 < b.0 || (a.0 == b.0 && a.1 < b.1)
}

fn moves(state: &State, n: usize, m: usize) -> Vec<Move> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..m {
            if !state.has((i, j)) {
                out.push(Move::Add(i, j));
                continue;
            }
            if state.removable((i, j)) {
                out.push(Move::Remove(i, j));
            }
            if state.col_count[j] > 1 {
                for j2 in (0..m).filter(|&j2| !state.has((i, j2))) {
                    out.push(Move::Swap((i, j), (i, j2)));
                }
            }
            if state.row_count[i] > 1 {
                for i2 in (0..n).filter(|&i2| !state.has((i2, j))) {
                    out.push(Move::Swap((i, j), (i2, j)));
                }
            }
        }
    }
    out
}

fn descend(
    start: &[(usize, usize)],
    x: &FiniteMetricSpace,
    y: &FiniteMetricSpace,
    rng: &mut ChaCha8Rng,
) -> (Score, Vec<(usize, usize)>) {
    let (n, m) = (x.len(), y.len());
    let mut state = State::new(n, m, start);
    let mut current = score(&state.pairs(), x, y);
    for _ in 0..MAX_SWEEPS {
        let mut candidates = moves(&state, n, m);
        candidates.shuffle(rng);
        let mut improved = false;
        for mv in candidates {
            state.apply(mv);
            let s = score(&state.pairs(), x, y);
            if better(s, current) {
                current = s;
                improved = true;
                break;
            }
            state.undo(mv);
        }
        if !improved {
            break;
        }
    }
    (current, state.pairs())
}

/// Upper bound on `GH(X, Y)` from restarted first-improvement local search
/// over correspondences (moves: add a pair, remove a removable pair, swap a
/// pair for one sharing a coordinate).
///
/// Only strictly improving moves are taken, scored by distortion and then
/// by how many pairs of pairs attain it. Restart 0 starts from the diagonal
/// when both spaces have the same size; the others from random unions of a
/// map `X → Y` and a map `Y → X`. Deterministic given `seed`.
/// `exact` is set only when the upper bound meets [`super::gh_lower`].
pub fn gh_upper_local(
    x: &FiniteMetricSpace,
    y: &FiniteMetricSpace,
    restarts: usize,
    seed: u64,
) -> GhResult {
    let (n, m) = (x.len(), y.len());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<(Score, Vec<(usize, usize)>)> = None;
    for restart in 0..restarts.max(1) {
        let start: Vec<(usize, usize)> = if restart == 0 && n == m {
            (0..n).map(|i| (i, i)).collect()
        } else {
            let mut pairs: Vec<(usize, usize)> = (0..n).map(|i| (i, rng.gen_range(0..m))).collect();
            pairs.extend((0..m).map(|j| (rng.gen_range(0..n), j)));
            pairs
        };
        let found = descend(&start, x, y, &mut rng);
        let replace = match &best {
            None => true,
            Some((s, pairs)) => better(found.0, *s) || (found.0 .0 == s.0 && found.1 < *pairs),
        };
        if replace {
            best = Some(found);
        }
    }
    let ((dis, _), pairs) = best.expect("at least one restart");
    let lower = 0.5 * lower_distortion(x, y);
    let upper = 0.5 * dis;
    GhResult {
        lower,
        upper,
        exact: upper <= lower,
        witness: Correspondence::new(pairs, n, m).expect("local search keeps projections onto"),
    }
}
