//! Spin-echo refocusing schedules.
//!
//! A schedule chops a delay into m equal intervals and assigns each spin a
//! +-1 sign row describing whether it is flipped during each interval. Rows
//! that sum to zero refocus that spin's offset; two spins with orthogonal
//! rows accumulate no net coupling; two spins sharing a row keep their
//! coupling at full strength. Rows come from the Sylvester Hadamard matrix
//! (skipping the all-ones row), assigned by greedy coloring of the
//! "must-differ" graph so uncoupled spins can share rows. pi pulses are
//! emitted at sign flips, plus closure pulses so the net spin-flip part is
//! the identity up to a global phase.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::spin_model::{coupling_graph, SpinSystem};

use super::PulseEvent;

/// Hard cap on the Hadamard order searched for.
const MAX_ORDER: usize = 1 << 12;

/// Equal-interval sign schedule for one refocused delay.
#[derive(Debug, Clone)]
pub struct RefocusingSchedule {
    pub interval_s: f64,
    /// rows[spin][interval] in {-1, +1}; every row starts at +1.
    pub rows: Vec<Vec<i8>>,
    pub retained_pair: Option<(usize, usize)>,
}

impl RefocusingSchedule {
    pub fn n_intervals(&self) -> usize {
        self.rows[0].len()
    }

    pub fn total_time_s(&self) -> f64 {
        self.interval_s * self.n_intervals() as f64
    }

    /// Spins pulsed at boundary `a` (before interval `a`; boundary
    /// n_intervals is the closure at the end of the delay).
    pub fn pulses_at(&self, boundary: usize) -> Vec<usize> {
        self.rows
            .iter()
            .enumerate()
            .filter_map(|(spin, row)| {
                let before = if boundary == 0 { 1 } else { row[boundary - 1] };
                let after = if boundary == row.len() { 1 } else { row[boundary] };
                (before != after).then_some(spin)
            })
            .collect()
    }

    /// Total number of single-spin pi pulses, closure included.
    pub fn pi_pulse_count(&self) -> usize {
        (0..=self.n_intervals()).map(|b| self.pulses_at(b).len()).sum()
    }

    /// Expand into delay and hard-pulse events.
    pub fn to_events(&self) -> Vec<PulseEvent> {
        let mut events = Vec::new();
        for a in 0..self.n_intervals() {
            let targets = self.pulses_at(a);
            if !targets.is_empty() {
                events.push(PulseEvent::HardPulse {
                    targets,
                    angle: PI,
                    phase: 0.0,
                });
            }
            events.push(PulseEvent::Delay {
                duration_s: self.interval_s,
            });
        }
        let closure = self.pulses_at(self.n_intervals());
        if !closure.is_empty() {
            events.push(PulseEvent::HardPulse {
                targets: closure,
                angle: PI,
                phase: 0.0,
            });
        }
        events
    }
}

/// Sylvester Hadamard row r of order m: entries (-1)^popcount(r & a).
fn hadamard_row(r: usize, m: usize) -> Vec<i8> {
    (0..m)
        .map(|a| if (r & a).count_ones() % 2 == 0 { 1 } else { -1 })
        .collect()
}

/// Greedy coloring of the must-differ graph. `adj[v]` lists vertices whose
/// rows must differ from v's.
fn greedy_coloring(adj: &[Vec<usize>]) -> Vec<usize> {
    let n = adj.len();
    let mut color = vec![usize::MAX; n];
    for v in 0..n {
        let taken: Vec<usize> = adj[v]
            .iter()
            .filter_map(|&w| (color[w] != usize::MAX).then_some(color[w]))
            .collect();
        color[v] = (0..).find(|c| !taken.contains(c)).unwrap();
    }
    color
}

/// Build a refocusing schedule for the system over `total_time`. With a
/// retained pair, that pair's coupling runs at full strength for the whole
/// delay; everything else (all offsets, all other couplings) refocuses.
pub fn refocusing_schedule(
    system: &SpinSystem,
    retained_pair: Option<(usize, usize)>,
    total_time_s: f64,
) -> Result<RefocusingSchedule> {
    let n = system.n_spins();
    if !(total_time_s > 0.0) {
        return Err(Error::Compile(format!(
            "refocusing total time must be > 0, got {total_time_s}"
        )));
    }
    if let Some((i, k)) = retained_pair {
        if i >= n || k >= n || i == k {
            return Err(Error::Compile(format!("bad retained pair ({i},{k})")));
        }
    }
    let graph = coupling_graph(system, 0.0);

    // Contract the retained pair into one vertex: both spins share a row,
    // and must differ from every spin coupled to either of them.
    let rep = |v: usize| match retained_pair {
        Some((i, k)) if v == k => i,
        _ => v,
    };
    let mut adj = vec![Vec::new(); n];
    for (i, k) in graph.edges() {
        let (a, b) = (rep(i), rep(k));
        if a != b {
            if !adj[a].contains(&b) {
                adj[a].push(b);
                adj[b].push(a);
            }
        }
    }
    let mut color = greedy_coloring(&adj);
    if let Some((i, k)) = retained_pair {
        // k was contracted into i above; share the row.
        color[k] = color[i];
    }

    let n_colors = color.iter().max().unwrap() + 1;
    // Row 0 of the Hadamard matrix is all ones (no offset refocusing), so
    // colors map to rows 1..=n_colors and the order must exceed n_colors.
    let m = (n_colors + 1).next_power_of_two();
    if m > MAX_ORDER {
        return Err(Error::Compile(format!(
            "refocusing needs Hadamard order {m}, above the cap {MAX_ORDER}"
        )));
    }
    let rows = color.iter().map(|&c| hadamard_row(c + 1, m)).collect();
    Ok(RefocusingSchedule {
        interval_s: total_time_s / m as f64,
        rows,
        retained_pair,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin_model::{CouplingTable, Nucleus, Spin, SpinSystem};
    use approx::assert_relative_eq;

    fn system(n: usize, edges: &[(usize, usize)]) -> SpinSystem {
        let spins: Vec<Spin> = (0..n)
            .map(|i| Spin::new(Nucleus::h1(), 200.0 * i as f64))
            .collect();
        let mut c = CouplingTable::new(n);
        for &(i, k) in edges {
            c.set_j(i, k, 5.0).unwrap();
        }
        SpinSystem::new(spins, c, 11.74).unwrap()
    }

    fn check_invariants(s: &RefocusingSchedule, sys: &SpinSystem) {
        let m = s.n_intervals();
        let retained = s.retained_pair.map(|(i, k)| (i.min(k), i.max(k)));
        for row in &s.rows {
            assert_eq!(row.iter().map(|&v| v as i64).sum::<i64>(), 0);
        }
        for i in 0..sys.n_spins() {
            for k in (i + 1)..sys.n_spins() {
                let dot: i64 = (0..m).map(|a| (s.rows[i][a] * s.rows[k][a]) as i64).sum();
                if retained == Some((i, k)) {
                    assert_eq!(dot, m as i64);
                } else if sys.couplings.effective(i, k) != 0.0 {
                    assert_eq!(dot, 0);
                }
            }
        }
        // Closure: every spin sees an even pulse count.
        for spin in 0..sys.n_spins() {
            let count = (0..=m).filter(|&b| s.pulses_at(b).contains(&spin)).count();
            assert_eq!(count % 2, 0);
        }
    }

    #[test]
    fn single_spin_echo() {
        let sys = system(1, &[]);
        let s = refocusing_schedule(&sys, None, 0.02).unwrap();
        assert_eq!(s.n_intervals(), 2);
        assert_relative_eq!(s.interval_s, 0.01);
        // Mid pulse plus closure pulse.
        assert_eq!(s.pi_pulse_count(), 2);
        check_invariants(&s, &sys);
    }

    #[test]
    fn three_spins_retaining_a_pair() {
        let sys = system(3, &[(0, 1), (1, 2), (0, 2)]);
        let s = refocusing_schedule(&sys, Some((0, 1)), 0.1).unwrap();
        assert_eq!(s.n_intervals(), 4);
        assert_eq!(s.rows[0], s.rows[1]);
        assert_ne!(s.rows[0], s.rows[2]);
        check_invariants(&s, &sys);
        assert_relative_eq!(s.total_time_s(), 0.1);
    }

    #[test]
    fn uncoupled_spins_share_rows() {
        // Star graph: leaves are mutually uncoupled and can share one row.
        let sys = system(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]);
        let s = refocusing_schedule(&sys, None, 0.1).unwrap();
        assert_eq!(s.n_intervals(), 4);
        assert_eq!(s.rows[1], s.rows[2]);
        check_invariants(&s, &sys);

        // The complete graph on 5 needs more intervals.
        let full = system(
            5,
            &[
                (0, 1),
                (0, 2),
                (0, 3),
                (0, 4),
                (1, 2),
                (1, 3),
                (1, 4),
                (2, 3),
                (2, 4),
                (3, 4),
            ],
        );
        let sf = refocusing_schedule(&full, None, 0.1).unwrap();
        assert!(sf.n_intervals() > s.n_intervals());
        assert!(sf.pi_pulse_count() > s.pi_pulse_count());
        check_invariants(&sf, &full);
    }

    #[test]
    fn complete_graph_pulse_count_quadratic() {
        for n in 2..=8usize {
            let edges: Vec<(usize, usize)> = (0..n)
                .flat_map(|i| ((i + 1)..n).map(move |k| (i, k)))
                .collect();
            let sys = system(n, &edges);
            let s = refocusing_schedule(&sys, None, 0.1).unwrap();
            check_invariants(&s, &sys);
            assert!(
                s.pi_pulse_count() <= 3 * n * n,
                "n={n}: {} pulses",
                s.pi_pulse_count()
            );
        }
    }

    #[test]
    fn event_expansion_sums_to_total_time() {
        let sys = system(3, &[(0, 1), (1, 2)]);
        let s = refocusing_schedule(&sys, Some((1, 2)), 0.07).unwrap();
        let events = s.to_events();
        let mut total = 0.0;
        let mut pulses = 0;
        for e in &events {
            match e {
                PulseEvent::Delay { duration_s } => total += duration_s,
                PulseEvent::HardPulse { targets, angle, .. } => {
                    assert_relative_eq!(*angle, PI);
                    pulses += targets.len();
                }
                _ => panic!("unexpected event"),
            }
        }
        assert_relative_eq!(total, 0.07, max_relative = 1e-12);
        assert_eq!(pulses, s.pi_pulse_count());
    }

    #[test]
    fn rejects_bad_input() {
        let sys = system(2, &[(0, 1)]);
        assert!(refocusing_schedule(&sys, None, 0.0).is_err());
        assert!(refocusing_schedule(&sys, Some((0, 0)), 0.1).is_err());
        assert!(refocusing_schedule(&sys, Some((0, 5)), 0.1).is_err());
    }
}
