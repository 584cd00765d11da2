//! Instance characterization: maximum average affectance and the constants
//! that size the randomized and deterministic schedules.

use serde::Serialize;

use crate::affectance::Instance;
use crate::error::{Error, Result};

/// Margin added above `max_w Ā_w / |F_w|` (and above 1) when choosing `c`.
pub const C_EPSILON: f64 = 1e-6;

/// Derived constants for one instance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Characterization {
    /// Maximum average affectance per receiver.
    pub abar_w: Vec<f64>,
    /// `max_w abar_w`.
    pub abar: f64,
    /// Smallest admissible `c`: `max(1 + ε, max_w Ā_w/|F_w| + ε)`.
    pub c_min: f64,
    /// The `c` in use (caller-supplied or `c_min`).
    pub c: f64,
    /// `1 + 1/(2c)`.
    pub b: f64,
    /// Per-receiver failure probability bound for one phase.
    pub d: f64,
    /// Slots per phase, `⌈2 log_{1/d} n⌉` (at least 1).
    pub m: usize,
    /// `max{⌈log_b(2Ā)⌉, 0}`: index of the last probability level.
    pub levels: usize,
    /// `levels + 1`.
    pub phases: usize,
}

impl Characterization {
    /// Length of the randomized schedule, `phases · m`.
    pub fn slot_bound(&self) -> usize {
        self.phases * self.m
    }
}

/// `Ā_w`: the largest subset-average of per-link total affectance over
/// nonempty `F ⊆ F_w`.
///
/// An average never exceeds its largest term, so the maximum is attained at a
/// singleton and equals the largest per-link total.
pub fn max_avg_affectance_w(inst: &Instance, w: usize) -> Result<f64> {
    let topo = inst.topology();
    if w >= topo.n() {
        return Err(Error::IndexOutOfRange { index: w + 1, n: topo.n() });
    }
    let ids = topo.link_ids(w);
    if ids.is_empty() {
        return Err(Error::IsolatedReceiver { receiver: w + 1 });
    }
    Ok(ids.map(|id| inst.link_load(id)).fold(0.0, f64::max))
}

/// `b = 1 + 1/(2c)`.
pub fn base_for(c: f64) -> f64 {
    1.0 + 1.0 / (2.0 * c)
}

/// The larger of the two per-receiver failure bounds: `1/(2b)` for receivers
/// with `Ā_w ≤ 1/(2b)` and `1/2 + (1 − 1/(2b))·e^{−(b−1)/b}` otherwise.
pub fn failure_constant(b: f64) -> f64 {
    let low = 1.0 / (2.0 * b);
    let high = 0.5 + (1.0 - 1.0 / (2.0 * b)) * (-(b - 1.0) / b).exp();
    low.max(high)
}

/// `⌈2 log_{1/d} n⌉`, floored at 1.
pub fn multiplicity(n: usize, d: f64) -> usize {
    let m = (2.0 * (n as f64).ln() / (1.0 / d).ln()).ceil();
    (m as usize).max(1)
}

/// Smallest integer `k ≥ 0` with `b^k ≥ x`, i.e. `max{⌈log_b x⌉, 0}`.
///
/// The float estimate is corrected against `powi` so that bucket boundaries
/// and level counts agree exactly.
pub fn ceil_log(x: f64, b: f64) -> usize {
    if x.is_nan() || x <= 1.0 {
        return 0;
    }
    let mut k = (x.ln() / b.ln()).ceil().max(0.0) as i32;
    while k > 0 && b.powi(k - 1) >= x {
        k -= 1;
    }
    while b.powi(k) < x {
        k += 1;
    }
    k as usize
}

/// Level count used when `Ā` is unknown: `max{⌈log_b(2(n−1))⌉, 0}`.
pub fn fallback_levels(n: usize, b: f64) -> usize {
    ceil_log(2.0 * n.saturating_sub(1) as f64, b)
}

/// Computes `Ā_w`, `Ā`, `c`, `b`, `d`, `m` and the phase count.
///
/// With `c = None` the tightest admissible `c_min` is used. A supplied `c`
/// must exceed 1 and satisfy `Ā_w ≤ c·|F_w|` for every receiver.
pub fn characterize(inst: &Instance, c: Option<f64>) -> Result<Characterization> {
    let topo = inst.topology();
    let n = topo.n();
    let abar_w = (0..n)
        .map(|w| max_avg_affectance_w(inst, w))
        .collect::<Result<Vec<_>>>()?;
    let abar = abar_w.iter().copied().fold(0.0, f64::max);
    let ratio = (0..n)
        .map(|w| abar_w[w] / topo.neighbors(w).len() as f64)
        .fold(0.0, f64::max);
    let c_min = (ratio + C_EPSILON).max(1.0 + C_EPSILON);

    let c = match c {
        None => c_min,
        Some(c) => {
            if !c.is_finite() || c <= 1.0 {
                return Err(Error::InvalidParameter(format!("c must be a finite value > 1, got {c}")));
            }
            for (w, &a) in abar_w.iter().enumerate() {
                let bound = c * topo.neighbors(w).len() as f64;
                if a > bound {
                    return Err(Error::ConstraintViolated { receiver: w + 1, abar_w: a, bound });
                }
            }
            c
        }
    };
    let b = base_for(c);
    let d = failure_constant(b);
    let levels = ceil_log(2.0 * abar, b);
    Ok(Characterization {
        abar_w,
        abar,
        c_min,
        c,
        b,
        d,
        m: multiplicity(n, d),
        levels,
        phases: levels + 1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::affectance::{encode_radio_network, AffectanceMatrix, LayerTopology};

    fn two_links_into_one(load1: f64, load2: f64) -> Instance {
        // receiver 0 hears 0 and 1; transmitter 2 supplies the load on each link
        let topo = LayerTopology::new(3, [(0, 0), (1, 0), (2, 1), (2, 2)]).unwrap();
        let m = AffectanceMatrix::new(&topo, [(2, (0, 0), load1), (2, (1, 0), load2)]).unwrap();
        Instance::new(topo, m)
    }

    #[test]
    fn abar_w_is_largest_link_load() {
        let inst = two_links_into_one(0.3, 0.7);
        assert_eq!(max_avg_affectance_w(&inst, 0).unwrap(), 0.7);
        assert_eq!(max_avg_affectance_w(&inst, 1).unwrap(), 0.0);
        assert!(max_avg_affectance_w(&inst, 3).is_err());
    }

    #[test]
    fn radio_network_star_has_abar_degree_minus_one() {
        let star = encode_radio_network(3, &vec![vec![0, 1, 2]; 3]).unwrap();
        let ch = characterize(&star, None).unwrap();
        assert_eq!(ch.abar, 2.0);
        assert_eq!(ch.abar_w, vec![2.0; 3]);
    }

    #[test]
    fn constants_for_c_two() {
        let b = base_for(2.0);
        assert_eq!(b, 1.25);
        let d = failure_constant(b);
        let expected = 0.5 + 0.6 * (-0.2f64).exp();
        assert!((d - expected).abs() < 1e-15);
        assert!((d - 0.99124).abs() < 1e-5);
        // the monotone inequality from which d < 1 follows
        let lhs = 2.0 * b - b * ((b - 1.0) / b).exp();
        assert!((lhs - 0.9732).abs() < 1e-4 && lhs < 1.0);
    }

    #[test]
    fn phase_count_examples() {
        // Ā = 4, c = 2: ⌈ln 8 / ln 1.25⌉ = ⌈9.32⌉ = 10
        assert_eq!(ceil_log(8.0, 1.25), 10);
        assert_eq!(fallback_levels(42, 1.25), 20);
        assert_eq!(ceil_log(1.0, 1.25), 0);
        assert_eq!(ceil_log(0.0, 1.25), 0);
        assert_eq!(ceil_log(1.25f64.powi(3), 1.25), 3);
        assert_eq!(fallback_levels(1, 1.25), 0);
    }

    #[test]
    fn c_given_and_validated() {
        let star = encode_radio_network(3, &vec![vec![0, 1, 2]; 3]).unwrap();
        let ch = characterize(&star, Some(2.0)).unwrap();
        assert_eq!(ch.b, 1.25);
        // Ā = 2: ⌈ln 4 / ln 1.25⌉ = ⌈6.21⌉ = 7
        assert_eq!(ch.levels, 7);
        assert_eq!(ch.phases, 8);
        assert!(matches!(characterize(&star, Some(1.0)), Err(Error::InvalidParameter(_))));

        // Ā_0 = 0.7 with |F_0| = 2 passes; a heavier single-link receiver fails
        let topo = LayerTopology::new(3, [(0, 0), (1, 1), (2, 2)]).unwrap();
        let heavy: Vec<_> = [1, 2].iter().map(|&u| (u, (0, 0), 1.0)).collect();
        let m = AffectanceMatrix::new(&topo, heavy).unwrap();
        let inst = Instance::new(topo, m);
        match characterize(&inst, Some(1.5)) {
            Err(Error::ConstraintViolated { receiver, .. }) => assert_eq!(receiver, 1),
            other => panic!("expected constraint error, got {other:?}"),
        }
        let tight = characterize(&inst, None).unwrap();
        assert!((tight.c_min - (2.0 + C_EPSILON)).abs() < 1e-12);
    }

    #[test]
    fn zero_matrix_gives_single_phase() {
        let topo = LayerTopology::new(2, [(0, 0), (1, 1)]).unwrap();
        let inst = Instance::new(topo.clone(), AffectanceMatrix::zeros(&topo));
        let ch = characterize(&inst, None).unwrap();
        assert_eq!(ch.abar, 0.0);
        assert_eq!(ch.phases, 1);
        assert_eq!(ch.c, 1.0 + C_EPSILON);
    }

    #[test]
    fn constants_stay_in_range_over_c_grid() {
        for k in 1..=1000 {
            let c = 1.0 + k as f64 * 0.099;
            let b = base_for(c);
            let d = failure_constant(b);
            assert!(b > 1.0 && b < 1.5, "b = {b} for c = {c}");
            assert!(d > 0.0 && d < 1.0, "d = {d} for c = {c}");
        }
    }
}
