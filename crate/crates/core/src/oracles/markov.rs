use nalgebra::{DMatrix, DVector};

use super::{OracleMethod, OracleValue};
use crate::error::{invalid, Error, Result};
use crate::genome::BitString;
use crate::operators::FlipOperator;
use crate::problems::BitProblem;

/// Mutation distribution of a (1+1)-type algorithm: given the parent and its
/// fitness, the possible flip sets with their probabilities.
pub type Kernel<'a> = dyn Fn(&BitString, f64) -> Vec<(Vec<usize>, f64)> + 'a;

/// Standard bit mutation with rate `p` on `n` bits, enumerated over all masks.
pub fn standard_bit_kernel(n: usize, p: f64) -> impl Fn(&BitString, f64) -> Vec<(Vec<usize>, f64)> {
    let outcomes: Vec<(Vec<usize>, f64)> = (0..1usize << n)
        .map(|mask| {
            let flips: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
            let k = flips.len() as i32;
            (flips, p.powi(k) * (1.0 - p).powi(n as i32 - k))
        })
        .collect();
    move |_, _| outcomes.clone()
}

/// A fixed flip operator.
pub fn flip_kernel(n: usize, op: FlipOperator) -> impl Fn(&BitString, f64) -> Vec<(Vec<usize>, f64)> {
    let outcomes = op.outcomes(n);
    move |_, _| outcomes.clone()
}

/// Operator `ops[j]` chosen with probability `weights[j]`.
pub fn mixture_kernel(
    n: usize,
    ops: &[FlipOperator],
    weights: &[f64],
) -> impl Fn(&BitString, f64) -> Vec<(Vec<usize>, f64)> {
    let mut outcomes = Vec::new();
    for (op, &w) in ops.iter().zip(weights) {
        if w > 0.0 {
            outcomes.extend(op.outcomes(n).into_iter().map(|(f, p)| (f, p * w)));
        }
    }
    move |_, _| outcomes.clone()
}

/// Expected optimization time of an elitist (1+1)-type algorithm from a
/// uniformly random start, obtained by solving `(I - Q) t = 1` over the
/// non-optimal states. The initial evaluation is not counted.
///
/// Fails with [`Error::NonAbsorbing`] if some state cannot reach an optimum.
pub fn brute_force_hitting_time<P: BitProblem + ?Sized>(problem: &P, kernel: &Kernel<'_>) -> Result<OracleValue> {
    let n = problem.dimension();
    if n == 0 || n > 12 {
        return invalid(format!("state space 2^{n} is not enumerable here"));
    }
    let states = 1usize << n;
    let dir = problem.direction();
    let fitness: Vec<f64> = (0..states).map(|s| problem.evaluate(&BitString::from_index(s, n))).collect();
    let optimal: Vec<bool> = fitness.iter().map(|&f| problem.is_optimal(f)).collect();
    let mut index = vec![usize::MAX; states];
    let mut transient = Vec::new();
    for s in 0..states {
        if !optimal[s] {
            index[s] = transient.len();
            transient.push(s);
        }
    }
    let m = transient.len();
    let mut q = DMatrix::<f64>::zeros(m, m);
    let mut reaches_optimum = vec![Vec::new(); states];
    let mut edges: Vec<Vec<usize>> = vec![Vec::new(); m];
    for (row, &s) in transient.iter().enumerate() {
        let x = BitString::from_index(s, n);
        let mut total = 0.0;
        for (flips, p) in kernel(&x, fitness[s]) {
            total += p;
            if p == 0.0 {
                continue;
            }
            let t = flips.iter().fold(s, |acc, &i| acc ^ (1 << i));
            let next = if dir.at_least_as_good(fitness[t], fitness[s]) { t } else { s };
            if optimal[next] {
                reaches_optimum[s].push(next);
            } else {
                q[(row, index[next])] += p;
                edges[row].push(index[next]);
            }
        }
        if (total - 1.0).abs() > 1e-12 {
            return invalid(format!("kernel row of state {s} sums to {total}"));
        }
    }
    // backwards reachability from the optimum
    let mut reverse: Vec<Vec<usize>> = vec![Vec::new(); m];
    for (a, out) in edges.iter().enumerate() {
        for &b in out {
            reverse[b].push(a);
        }
    }
    let mut ok = vec![false; m];
    let mut stack: Vec<usize> = (0..m).filter(|&r| !reaches_optimum[transient[r]].is_empty()).collect();
    for &r in &stack {
        ok[r] = true;
    }
    while let Some(b) = stack.pop() {
        for &a in &reverse[b] {
            if !ok[a] {
                ok[a] = true;
                stack.push(a);
            }
        }
    }
    if let Some(bad) = ok.iter().position(|&v| !v) {
        return Err(Error::NonAbsorbing(format!(
            "state {} never reaches an optimum",
            BitString::from_index(transient[bad], n)
        )));
    }
    let a = DMatrix::<f64>::identity(m, m) - q;
    let t = a
        .lu()
        .solve(&DVector::from_element(m, 1.0))
        .ok_or_else(|| Error::NonAbsorbing("singular system".into()))?;
    Ok(OracleValue::new(t.sum() / states as f64, OracleMethod::LinearSolve))
}
