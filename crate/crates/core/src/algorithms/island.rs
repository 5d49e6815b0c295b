use super::{Recorder, RunOptions, RunOutcome};
use crate::controllers::{migration_interval_update, MigrationEvent, MigrationScheme};
use crate::error::{invalid, Result};
use crate::genome::BitString;
use crate::operators::standard_bit_flips;
use crate::problems::{BitProblem, Evaluator};
use crate::rng::RandomSource;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Topology {
    /// Island `i` sends to `i+1 mod λ`.
    Ring,
    /// Rows × columns with the most square factorization of λ, 4-neighbourhood.
    Grid,
    /// The grid with wrap-around.
    Torus,
    Complete,
}

impl Topology {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "ring" => Ok(Topology::Ring),
            "grid" => Ok(Topology::Grid),
            "torus" => Ok(Topology::Torus),
            "complete" => Ok(Topology::Complete),
            _ => invalid(format!("unknown topology {name:?}")),
        }
    }

    /// Out-neighbours of every island, sorted and without self-loops.
    pub fn neighbours(self, lambda: usize) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = vec![Vec::new(); lambda];
        match self {
            Topology::Ring => {
                for (i, nb) in out.iter_mut().enumerate() {
                    nb.push((i + 1) % lambda);
                }
            }
            Topology::Complete => {
                for (i, nb) in out.iter_mut().enumerate() {
                    nb.extend((0..lambda).filter(|&j| j != i));
                }
            }
            Topology::Grid | Topology::Torus => {
                let rows = (1..=lambda).filter(|r| r * r <= lambda && lambda % r == 0).max().unwrap_or(1);
                let cols = lambda / rows;
                let wrap = self == Topology::Torus;
                for r in 0..rows {
                    for c in 0..cols {
                        let nb = &mut out[r * cols + c];
                        let mut push = |rr: Option<usize>, cc: Option<usize>| {
                            if let (Some(rr), Some(cc)) = (rr, cc) {
                                nb.push(rr * cols + cc);
                            }
                        };
                        let step = |v: usize, d: isize, len: usize| -> Option<usize> {
                            let w = v as isize + d;
                            if (0..len as isize).contains(&w) {
                                Some(w as usize)
                            } else if wrap {
                                Some(w.rem_euclid(len as isize) as usize)
                            } else {
                                None
                            }
                        };
                        push(step(r, -1, rows), Some(c));
                        push(step(r, 1, rows), Some(c));
                        push(Some(r), step(c, -1, cols));
                        push(Some(r), step(c, 1, cols));
                    }
                }
            }
        }
        for (i, nb) in out.iter_mut().enumerate() {
            nb.retain(|&j| j != i);
            nb.sort_unstable();
            nb.dedup();
        }
        out
    }
}

struct Island {
    x: BitString,
    f: f64,
    tau: u64,
    counter: u64,
    success: bool,
}

/// Parallel (1+1) EA on λ islands with per-island migration intervals,
/// simulated in synchronous generations.
///
/// All islands broadcast once right after initialization. Afterwards an
/// island broadcasts its current individual at the end of its interval and,
/// under [`MigrationScheme::DoubleReset`], also right after an improvement
/// (which resets its interval to 1). An interval during which the island
/// improved or accepted a strictly better migrant counts as successful.
/// `communication_effort` counts individuals sent; `generations` is the
/// parallel time.
pub fn run_island_model<P: BitProblem + ?Sized>(
    problem: &P,
    lambda: usize,
    topology: Topology,
    scheme: MigrationScheme,
    opts: &RunOptions,
    rng: &mut RandomSource,
) -> Result<RunOutcome> {
    let n = problem.dimension();
    opts.validate(n)?;
    if lambda < 2 {
        return invalid(format!("need at least 2 islands, got {lambda}"));
    }
    let neighbours = topology.neighbours(lambda);
    let dir = problem.direction();
    let mut ev = Evaluator::new(problem);
    let mut rec = Recorder::new(dir, opts);
    let mut islands = Vec::with_capacity(lambda);
    for i in 0..lambda {
        let x = match (&opts.start, i) {
            (Some(s), _) => s.clone(),
            _ => BitString::random(n, rng),
        };
        let f = ev.eval(&x);
        rec.observe(f, ev.count(), problem.is_optimal(f));
        islands.push(Island {
            x,
            f,
            tau: 1,
            counter: 0,
            success: false,
        });
    }
    let mut effort = 0u64;
    let everyone = vec![true; lambda];
    migrate(&mut islands, &neighbours, &everyone, &mut effort, dir);
    for isl in &mut islands {
        isl.success = false;
    }
    let mut send = vec![false; lambda];
    let mut gen = 0;
    while !rec.success() && ev.count() < opts.budget {
        gen += 1;
        let mut reset = vec![false; lambda];
        for ((isl, out), reset) in islands.iter_mut().zip(send.iter_mut()).zip(reset.iter_mut()) {
            let flips = standard_bit_flips(n, 1.0 / n as f64, rng);
            let fy = ev.eval_flipped(&isl.x, isl.f, &flips);
            rec.observe(fy, ev.count(), problem.is_optimal(fy));
            let improved = dir.better(fy, isl.f);
            if dir.at_least_as_good(fy, isl.f) {
                isl.x.flip_all(&flips);
                isl.f = fy;
            }
            isl.counter += 1;
            isl.success |= improved;
            *reset = improved && scheme == MigrationScheme::DoubleReset;
            *out = *reset || isl.counter >= isl.tau;
        }
        migrate(&mut islands, &neighbours, &send, &mut effort, dir);
        // intervals end after delivery so that migrants count toward the interval they arrive in
        for ((isl, &out), &reset) in islands.iter_mut().zip(&send).zip(&reset) {
            if reset {
                isl.tau = 1;
            } else if out {
                let event = if isl.success {
                    MigrationEvent::ImprovedOrReceived
                } else {
                    MigrationEvent::Stagnant
                };
                isl.tau = migration_interval_update(isl.tau, event, scheme);
            } else {
                continue;
            }
            isl.counter = 0;
            isl.success = false;
        }
        if rec.wants_params(gen) {
            let taus = islands.iter().map(|i| i.tau as f64);
            rec.param(gen, "tau_min", taus.clone().fold(f64::INFINITY, f64::min));
            rec.param(gen, "tau_max", taus.fold(0.0, f64::max));
            rec.param(gen, "communication_effort", effort as f64);
        }
    }
    let mut out = rec.finish(ev.count(), gen, rng);
    out.communication_effort = Some(effort);
    Ok(out)
}

/// Delivers the current individuals of all senders; each island keeps the
/// first best strictly better migrant.
fn migrate(
    islands: &mut [Island],
    neighbours: &[Vec<usize>],
    send: &[bool],
    effort: &mut u64,
    dir: crate::problems::Direction,
) {
    let mut incoming: Vec<Option<usize>> = vec![None; islands.len()];
    for (i, nb) in neighbours.iter().enumerate() {
        if !send[i] {
            continue;
        }
        *effort += nb.len() as u64;
        for &j in nb {
            let cur = incoming[j].map_or(islands[j].f, |k| islands[k].f);
            if dir.better(islands[i].f, cur) {
                incoming[j] = Some(i);
            }
        }
    }
    // senders' individuals are read before any replacement
    let snapshot: Vec<(usize, BitString, f64)> = incoming
        .iter()
        .enumerate()
        .filter_map(|(j, s)| s.map(|i| (j, islands[i].x.clone(), islands[i].f)))
        .collect();
    for (j, x, f) in snapshot {
        islands[j].x = x;
        islands[j].f = f;
        islands[j].success = true;
    }
}
