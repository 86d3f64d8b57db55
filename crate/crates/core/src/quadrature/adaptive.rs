use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::scalar::Real;

use super::kronrod::gk21;
use super::{QuadError, QuadratureResult};

#[derive(Debug, Clone, Copy)]
struct Panel<T> {
    a: T,
    b: T,
    value: T,
    error: T,
}

struct Worst<T> {
    error: T,
    index: usize,
}

impl<T: Real> PartialEq for Worst<T> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl<T: Real> Eq for Worst<T> {}

impl<T: Real> PartialOrd for Worst<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<T: Real> Ord for Worst<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .partial_cmp(&other.error)
            .unwrap_or(Ordering::Equal)
            .then_with(|| other.index.cmp(&self.index))
    }
}

/// Splits [a, b] at the registered points inside it, then caps every piece at
/// `max_width` by uniform subdivision.
pub(crate) fn panel_plan<T: Real>(a: T, b: T, breakpoints: &[T], max_width: Option<T>) -> Vec<(T, T)> {
    let mut cuts: Vec<T> = breakpoints.iter().copied().filter(|&x| x > a && x < b).collect();
    cuts.sort_by(|x, y| x.partial_cmp(y).unwrap_or(Ordering::Equal));
    cuts.dedup();

    let mut edges = Vec::with_capacity(cuts.len() + 2);
    edges.push(a);
    edges.extend(cuts);
    edges.push(b);

    let mut plan = Vec::new();
    for w in edges.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let pieces = match max_width {
            Some(width) if width > T::zero() => {
                let n = ((hi - lo) / width).ceil();
                n.to_usize().unwrap_or(usize::MAX).max(1)
            }
            _ => 1,
        };
        let pieces = pieces.min(1 << 24);
        let step = (hi - lo) / T::from_usize_exact(pieces);
        for i in 0..pieces {
            let x0 = if i == 0 { lo } else { lo + step * T::from_usize_exact(i) };
            let x1 = if i + 1 == pieces { hi } else { lo + step * T::from_usize_exact(i + 1) };
            plan.push((x0, x1));
        }
    }
    plan
}

/// Globally adaptive bisection: always refine the panel with the largest error.
pub(crate) fn adapt<T: Real, F: Fn(T) -> T>(
    f: &F,
    plan: &[(T, T)],
    abs_tol: T,
    rel_tol: T,
    max_panels: usize,
) -> Result<QuadratureResult<T>, QuadError> {
    let over_budget = plan.len() > max_panels;
    let plan = if over_budget { &plan[..max_panels] } else { plan };

    let mut panels: Vec<Panel<T>> = Vec::with_capacity(plan.len().max(16));
    let mut heap = BinaryHeap::with_capacity(plan.len());
    let mut value = T::zero();
    let mut error = T::zero();
    for &(a, b) in plan {
        let est = gk21(f, a, b)?;
        heap.push(Worst { error: est.error, index: panels.len() });
        panels.push(Panel { a, b, value: est.value, error: est.error });
        value += est.value;
        error += est.error;
    }

    let two = T::lit(2.0);
    let mut converged = !over_budget;
    while converged {
        if error <= abs_tol.max(rel_tol * value.abs()) {
            break;
        }
        if panels.len() >= max_panels {
            converged = false;
            break;
        }
        let Some(worst) = heap.pop() else { break };
        let p = panels[worst.index];
        let mid = (p.a + p.b) / two;
        if !(mid > p.a && mid < p.b) {
            converged = false;
            break;
        }
        let left = gk21(f, p.a, mid)?;
        let right = gk21(f, mid, p.b)?;
        value += left.value + right.value - p.value;
        error += left.error + right.error - p.error;

        panels[worst.index] = Panel { a: p.a, b: mid, value: left.value, error: left.error };
        heap.push(Worst { error: left.error, index: worst.index });
        heap.push(Worst { error: right.error, index: panels.len() });
        panels.push(Panel { a: mid, b: p.b, value: right.value, error: right.error });
    }

    let value = panels.iter().fold(T::zero(), |acc, p| acc + p.value);
    let error_estimate = panels.iter().fold(T::zero(), |acc, p| acc + p.error);
    let converged = converged && error_estimate <= abs_tol.max(rel_tol * value.abs());
    Ok(QuadratureResult { value, error_estimate, panels_used: panels.len(), converged })
}

/// Wynn's epsilon extrapolation of a sequence of partial sums.
///
/// Returns the newest even-column estimate and the spread between the last
/// two estimates as an error indicator.
pub(crate) fn wynn_epsilon<T: Real>(sums: &[T]) -> (T, T) {
    let n = sums.len();
    let last = sums[n - 1];
    if n < 3 {
        let spread = if n == 2 { (sums[1] - sums[0]).abs() } else { T::infinity() };
        return (last, spread);
    }
    let mut prev = vec![T::zero(); n + 1];
    let mut cur = sums.to_vec();
    let mut estimates = vec![last];
    for k in 1..n {
        let mut next = Vec::with_capacity(cur.len() - 1);
        for j in 0..cur.len() - 1 {
            let diff = cur[j + 1] - cur[j];
            if diff.abs() <= T::epsilon() * cur[j + 1].abs().max(T::min_positive_value()) {
                let best = *estimates.last().unwrap();
                return (best, spread_of(&estimates));
            }
            next.push(prev[j + 1] + T::one() / diff);
        }
        prev = cur;
        cur = next;
        if k % 2 == 0 {
            match cur.last() {
                Some(&v) if v.is_finite() => estimates.push(v),
                _ => break,
            }
        }
        if cur.len() < 2 {
            break;
        }
    }
    (*estimates.last().unwrap(), spread_of(&estimates))
}

fn spread_of<T: Real>(estimates: &[T]) -> T {
    match estimates {
        [.., a, b] => (*b - *a).abs(),
        _ => T::infinity(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plan_respects_breakpoints_and_width() {
        let plan = panel_plan(0.0, 10.0, &[3.0, 3.0, -1.0, 12.0], Some(1.0));
        assert!(plan.iter().all(|(a, b)| b - a <= 1.0 + 1e-15));
        assert!(plan.iter().all(|(a, b)| !(*a < 3.0 && *b > 3.0)));
        assert_eq!(plan.first().unwrap().0, 0.0);
        assert_eq!(plan.last().unwrap().1, 10.0);
        for w in plan.windows(2) {
            assert_eq!(w[0].1, w[1].0);
        }
    }

    #[test]
    fn wynn_accelerates_alternating_series() {
        // ln 2 = 1 - 1/2 + 1/3 - ...
        let mut s = 0.0;
        let sums: Vec<f64> = (1..=20)
            .map(|k| {
                s += if k % 2 == 1 { 1.0 } else { -1.0 } / k as f64;
                s
            })
            .collect();
        let (est, spread) = wynn_epsilon(&sums);
        assert!((est - 2f64.ln()).abs() < 1e-12, "{est}");
        assert!(spread < 1e-9);
    }
}
