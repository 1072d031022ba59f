//! Rate schedules r(n), eps(n), the sufficient conditions for detection, and
//! the probability bounds used to prove them.

use serde::Serialize;
use statrs::function::gamma::ln_gamma;

use crate::density::SmoothnessOrders;
use crate::error::{Error, Result};

/// Condition values this close to zero are treated as exactly zero.
pub const BOUNDARY_SNAP: f64 = 1e-12;

fn snap(v: f64) -> f64 {
    if v.abs() <= BOUNDARY_SNAP {
        0.0
    } else {
        v
    }
}

fn invalid(msg: String) -> Error {
    Error::InvalidParameter(msg)
}

/// r(n) = M_r n^-eta and eps(n) = M_eps n^-psi in ambient dimension `dim`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RateSchedule {
    pub dim: usize,
    pub eta: f64,
    pub psi: f64,
    pub xi: Option<f64>,
    pub m_r: f64,
    pub m_eps: f64,
}

impl RateSchedule {
    pub fn new(dim: usize, eta: f64, psi: f64, xi: Option<f64>, m_r: f64, m_eps: f64) -> Result<Self> {
        if dim == 0 {
            return Err(invalid("dimension must be at least 1".into()));
        }
        let d = dim as f64;
        if !(eta > 0.0 && eta < 1.0 / d) {
            return Err(invalid(format!("eta = {eta} must lie in (0, 1/{dim})")));
        }
        if !(psi > 0.0 && psi <= eta) {
            return Err(invalid(format!("psi = {psi} must lie in (0, eta = {eta}]")));
        }
        if let Some(xi) = xi {
            let cap = (1.0 - 2.0 * eta * d) / 2.0;
            if !(xi > 0.0 && xi < cap - BOUNDARY_SNAP) {
                return Err(invalid(format!("xi = {xi} must lie in (0, {cap})")));
            }
        }
        if !(m_r > 0.0 && m_eps > 0.0 && m_r.is_finite() && m_eps.is_finite()) {
            return Err(invalid(format!(
                "multipliers must be positive, got M_r = {m_r}, M_eps = {m_eps}"
            )));
        }
        Ok(RateSchedule {
            dim,
            eta,
            psi,
            xi,
            m_r,
            m_eps,
        })
    }

    pub fn radius(&self, n: u64) -> f64 {
        self.m_r * (n as f64).powf(-self.eta)
    }

    pub fn eps(&self, n: u64) -> f64 {
        self.m_eps * (n as f64).powf(-self.psi)
    }

    fn valid_at(&self, n: u64) -> bool {
        let (r, e) = (self.radius(n), self.eps(n));
        2.0 * r <= e && e < 1.0
    }

    /// Smallest n at which 2 r(n) <= eps(n) < 1, if any.
    pub fn min_valid_n(&self) -> Option<u64> {
        // both inequalities are monotone in n because psi <= eta
        let top = 1u64 << 62;
        if !self.valid_at(top) {
            return None;
        }
        let (mut lo, mut hi) = (0u64, top);
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if mid >= 1 && self.valid_at(mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Some(hi)
    }
}

/// (r(n), eps(n)), checking 2 r <= eps < 1.
pub fn schedule_values(s: &RateSchedule, n: u64) -> Result<(f64, f64)> {
    if n == 0 {
        return Err(invalid("n must be at least 1".into()));
    }
    let (r, eps) = (s.radius(n), s.eps(n));
    let violated = if 2.0 * r > eps {
        Some(format!("2 r(n) <= eps(n) fails: 2 * {r} > {eps}"))
    } else if eps >= 1.0 {
        Some(format!("eps(n) < 1 fails: eps = {eps}"))
    } else {
        None
    };
    match violated {
        Some(violated) => Err(Error::ScheduleInfeasible {
            n,
            violated,
            min_valid_n: s.min_valid_n(),
        }),
        None => Ok((r, eps)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComponentInput {
    pub d0: usize,
    pub upper: f64,
    pub lower: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionInputs {
    pub d: usize,
    pub components: Vec<ComponentInput>,
    pub eta: f64,
    pub psi: f64,
    pub xi: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionReport {
    #[serde(rename = "condition_A_value")]
    pub condition_a_value: f64,
    #[serde(rename = "condition_A_holds")]
    pub condition_a_holds: bool,
    #[serde(rename = "condition_B_value")]
    pub condition_b_value: f64,
    #[serde(rename = "condition_B_holds")]
    pub condition_b_holds: bool,
    /// 1-based component attaining the minimum of the A expressions.
    #[serde(rename = "binding_component_A")]
    pub binding_a: usize,
    /// 1-based component attaining the maximum of the B expressions.
    #[serde(rename = "binding_component_B")]
    pub binding_b: usize,
    /// 1 - 2 eta d - 2 xi, reported when xi is known.
    pub xi_condition_value: Option<f64>,
    pub xi_condition_holds: Option<bool>,
    pub inputs: ConditionInputs,
}

/// Conditions A and B for a single zero-set component.
pub fn check_theorem1(d: usize, d0: usize, orders: &SmoothnessOrders, s: &RateSchedule) -> Result<ConditionReport> {
    check_corollary1(d, &[(d0, *orders)], s)
}

/// Conditions A (minimum over components) and B (maximum over components).
pub fn check_corollary1(
    d: usize,
    components: &[(usize, SmoothnessOrders)],
    s: &RateSchedule,
) -> Result<ConditionReport> {
    if components.is_empty() {
        return Err(invalid("need at least one component".into()));
    }
    if let Some((d0, _)) = components.iter().find(|(d0, _)| *d0 >= d) {
        return Err(invalid(format!(
            "component dimension {d0} is not below the ambient dimension {d}"
        )));
    }
    let df = d as f64;
    let (eta, psi) = (s.eta, s.psi);
    let a_of = |o: &SmoothnessOrders| snap(1.0 - 2.0 * eta * df - 2.0 * o.upper * psi);
    let b_of = |d0: usize, o: &SmoothnessOrders| snap(1.0 + d0 as f64 * eta - o.lower * eta - df * eta);
    let mut binding_a = 0;
    let mut binding_b = 0;
    for (k, (d0, o)) in components.iter().enumerate() {
        if a_of(o) < a_of(&components[binding_a].1) {
            binding_a = k;
        }
        let (bd0, bo) = &components[binding_b];
        if b_of(*d0, o) > b_of(*bd0, bo) {
            binding_b = k;
        }
    }
    let a = a_of(&components[binding_a].1);
    let b = b_of(components[binding_b].0, &components[binding_b].1);
    let xi_value = s.xi.map(|xi| snap(1.0 - 2.0 * eta * df - 2.0 * xi));
    Ok(ConditionReport {
        condition_a_value: a,
        condition_a_holds: a > 0.0,
        condition_b_value: b,
        condition_b_holds: b < 0.0,
        binding_a: binding_a + 1,
        binding_b: binding_b + 1,
        xi_condition_value: xi_value,
        xi_condition_holds: xi_value.map(|v| v > 0.0),
        inputs: ConditionInputs {
            d,
            components: components
                .iter()
                .map(|(d0, o)| ComponentInput {
                    d0: *d0,
                    upper: o.upper,
                    lower: o.lower,
                })
                .collect(),
            eta,
            psi,
            xi: s.xi,
        },
    })
}

/// Volume of a d-dimensional Euclidean ball of radius r.
pub fn ball_volume(d: usize, r: f64) -> f64 {
    let h = d as f64 / 2.0;
    (h * std::f64::consts::PI.ln() - ln_gamma(h + 1.0) + d as f64 * r.ln()).exp()
}

/// max(0, 1 - 2 exp(-2 gamma^2 n)).
pub fn hoeffding_bound(n: u64, gamma: f64) -> Result<f64> {
    if !(gamma > 0.0) {
        return Err(invalid(format!("gamma must be positive, got {gamma}")));
    }
    Ok((1.0 - 2.0 * (-2.0 * gamma * gamma * n as f64).exp()).max(0.0))
}

/// U_f V_d(r) (2r)^lower, an upper bound on the mass of a ball meeting S0.
pub fn inside_ball_mass_upper(orders: &SmoothnessOrders, d: usize, r: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(invalid(format!("radius must be positive, got {r}")));
    }
    Ok((orders.u_f * ball_volume(d, r) * (2.0 * r).powf(orders.lower)).min(1.0))
}

/// V_d(r) min(L_f (eps - r)^upper, m_f), halved per axis when the ball may
/// stick out of the support.
pub fn outside_ball_mass_lower(
    orders: &SmoothnessOrders,
    d: usize,
    r: f64,
    eps: f64,
    m_f: f64,
    boundary: bool,
) -> Result<f64> {
    if !(r > 0.0) {
        return Err(invalid(format!("radius must be positive, got {r}")));
    }
    if !(eps > r) {
        return Err(invalid(format!("eps = {eps} must exceed r = {r}")));
    }
    if !(m_f > 0.0) {
        return Err(invalid(format!("m_f must be positive, got {m_f}")));
    }
    let floor = (orders.l_f * (eps - r).powf(orders.upper)).min(m_f);
    let scale = if boundary { 0.5f64.powi(d as i32) } else { 1.0 };
    Ok((scale * ball_volume(d, r) * floor).clamp(0.0, 1.0))
}

/// max(0, 1 - 2 exp(-p^2 n / 2)), valid once n p >= 1.
pub fn outside_nonempty_prob_bound(p_ball: f64, n: u64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p_ball) {
        return Err(invalid(format!("ball probability {p_ball} outside [0, 1]")));
    }
    if (n as f64) * p_ball < 1.0 {
        return Err(invalid(format!(
            "sample size requirement n * p >= 1 fails: {n} * {p_ball} < 1"
        )));
    }
    Ok((1.0 - 2.0 * (-0.5 * p_ball * p_ball * n as f64).exp()).max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fig5(m_r: f64, m_eps: f64) -> RateSchedule {
        RateSchedule::new(2, 0.21, 0.01, None, m_r, m_eps).unwrap()
    }

    #[test]
    fn schedule_values_match_direct_powers() {
        let s = fig5(0.4, 0.4);
        let (r, e) = schedule_values(&s, 10_000).unwrap();
        assert!((r - 0.05781759082983711).abs() < 1e-15);
        assert!((e - 0.3648043357423639).abs() < 1e-15);
        assert_eq!(schedule_values(&fig5(0.1, 0.4), 1).unwrap(), (0.1, 0.4));
        assert!(schedule_values(&s, 1).is_err());
        assert!(schedule_values(&s, 0).is_err());
    }

    #[test]
    fn infeasible_schedule_names_threshold() {
        let s = fig5(0.4, 0.1);
        match schedule_values(&s, 100) {
            Err(Error::ScheduleInfeasible {
                violated,
                min_valid_n: Some(n0),
                ..
            }) => {
                assert!(violated.contains("2 r(n) <= eps(n)"));
                assert!(schedule_values(&s, n0).is_ok());
                assert!(schedule_values(&s, n0 - 1).is_err());
            }
            other => panic!("unexpected {other:?}"),
        }
        let s = RateSchedule::new(2, 0.21, 0.01, None, 0.01, 1.5).unwrap();
        assert!(matches!(schedule_values(&s, 10), Err(Error::ScheduleInfeasible { .. })));
    }

    #[test]
    fn schedule_hypotheses() {
        assert!(RateSchedule::new(2, 0.5, 0.01, None, 1.0, 1.0).is_err());
        assert!(RateSchedule::new(2, 0.21, 0.3, None, 1.0, 1.0).is_err());
        assert!(RateSchedule::new(2, 0.21, 0.01, Some(0.08), 1.0, 1.0).is_err());
        assert!(RateSchedule::new(2, 0.21, 0.01, Some(0.07), 1.0, 1.0).is_ok());
    }

    #[test]
    fn reference_parameters_pass_both_conditions() {
        let o = SmoothnessOrders::exponents(4.0, 4.0).unwrap();
        let rep = check_theorem1(2, 1, &o, &fig5(0.4, 0.4)).unwrap();
        assert!((rep.condition_a_value - 0.08).abs() < 1e-12 && rep.condition_a_holds);
        assert!((rep.condition_b_value + 0.05).abs() < 1e-12 && rep.condition_b_holds);
    }

    #[test]
    fn boundary_fails_strictly() {
        let o = SmoothnessOrders::exponents(4.0, 4.0).unwrap();
        let psi = (1.0 - 2.0 * 0.21 * 2.0) / 8.0;
        let s = RateSchedule::new(2, 0.21, psi, None, 0.4, 0.4).unwrap();
        let rep = check_theorem1(2, 1, &o, &s).unwrap();
        assert_eq!(rep.condition_a_value, 0.0);
        assert!(!rep.condition_a_holds);
        let rough = SmoothnessOrders::exponents(4.0, 0.1).unwrap();
        let rep = check_theorem1(2, 1, &rough, &fig5(0.4, 0.4)).unwrap();
        assert!((rep.condition_b_value - 0.769).abs() < 1e-12 && !rep.condition_b_holds);
        assert!(check_theorem1(2, 2, &o, &fig5(0.4, 0.4)).is_err());
    }

    #[test]
    fn corollary_binding_components() {
        let s = fig5(0.4, 0.4);
        let o4 = SmoothnessOrders::exponents(4.0, 4.0).unwrap();
        let o8 = SmoothnessOrders::exponents(8.0, 4.0).unwrap();
        let one = check_corollary1(2, &[(1, o4)], &s).unwrap();
        assert_eq!(one, check_theorem1(2, 1, &o4, &s).unwrap());
        let rep = check_corollary1(2, &[(1, o4), (1, o8)], &s).unwrap();
        assert_eq!(rep.condition_a_value, 0.0);
        assert!(!rep.condition_a_holds);
        assert_eq!(rep.binding_a, 2);
        let rep = check_corollary1(2, &[(0, o4), (1, o4)], &s).unwrap();
        assert_eq!(rep.binding_b, 2);
        assert!(check_corollary1(2, &[], &s).is_err());
    }

    #[test]
    fn report_serializes_with_condition_names() {
        let o = SmoothnessOrders::exponents(4.0, 4.0).unwrap();
        let rep = check_theorem1(2, 1, &o, &fig5(0.4, 0.4)).unwrap();
        let json = serde_json::to_value(&rep).unwrap();
        assert_eq!(json["condition_A_holds"], true);
        assert_eq!(json["condition_B_holds"], true);
    }

    #[test]
    fn volumes() {
        assert!((ball_volume(2, 0.1) - std::f64::consts::PI * 0.01).abs() < 1e-15);
        assert!((ball_volume(1, 0.5) - 1.0).abs() < 1e-14);
        assert!((ball_volume(3, 1.0) - 4.0 * std::f64::consts::PI / 3.0).abs() < 1e-13);
    }

    #[test]
    fn hoeffding() {
        assert!((hoeffding_bound(100, 0.1).unwrap() - 0.7293294335267746).abs() < 1e-15);
        assert_eq!(hoeffding_bound(1, 0.1).unwrap(), 0.0);
        assert!((hoeffding_bound(1_000_000, 0.5).unwrap() - 1.0).abs() < 1e-15);
        assert!(hoeffding_bound(1, 0.0).is_err());
    }

    #[test]
    fn mass_bounds() {
        let o = SmoothnessOrders::new(4.0, 4.0, 2.0, 3.0).unwrap();
        let r = 0.01;
        let a = inside_ball_mass_upper(&o, 2, r).unwrap();
        let b = inside_ball_mass_upper(&SmoothnessOrders { u_f: 6.0, ..o }, 2, r).unwrap();
        assert!((b / a - 2.0).abs() < 1e-12);
        let half = inside_ball_mass_upper(&o, 2, r / 2.0).unwrap();
        assert!((a / half - 2f64.powi(6)).abs() < 1e-9);

        let o1 = SmoothnessOrders::new(2.0, 2.0, 1.5, 1.5).unwrap();
        let full = outside_ball_mass_lower(&o1, 1, 0.05, 0.2, 1.0, false).unwrap();
        let edge = outside_ball_mass_lower(&o1, 1, 0.05, 0.2, 1.0, true).unwrap();
        assert_eq!(edge * 2.0, full);
        let m1 = outside_ball_mass_lower(&o1, 1, 0.05, 0.2, 1e-6, false).unwrap();
        let m2 = outside_ball_mass_lower(&o1, 1, 0.05, 0.2, 2e-6, false).unwrap();
        assert!((m2 / m1 - 2.0).abs() < 1e-12);
        assert!(outside_ball_mass_lower(&o1, 1, 0.2, 0.2, 1.0, false).is_err());
    }

    #[test]
    fn nonempty_bound() {
        assert!((outside_nonempty_prob_bound(0.01, 1_000_000).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(outside_nonempty_prob_bound(0.1, 100).unwrap(), 0.0);
        assert!(outside_nonempty_prob_bound(0.001, 100).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn conditions_are_affine(eta in 0.001f64..0.49, frac in 0.001f64..1.0, upper in 0.1f64..10.0, lower_frac in 0.01f64..1.0) {
            let psi = eta * frac;
            let lower = upper * lower_frac;
            let s = RateSchedule::new(2, eta, psi, None, 0.4, 0.4).unwrap();
            let o = SmoothnessOrders::exponents(upper, lower).unwrap();
            let rep = check_theorem1(2, 1, &o, &s).unwrap();
            let a = 1.0 - 4.0 * eta - 2.0 * upper * psi;
            let b = 1.0 + eta - lower * eta - 2.0 * eta;
            prop_assert!((rep.condition_a_value - a).abs() <= 1e-12);
            prop_assert!((rep.condition_b_value - b).abs() <= 1e-12);
            prop_assert_eq!(rep.condition_a_holds, rep.condition_a_value > 0.0);
            prop_assert_eq!(rep.condition_b_holds, rep.condition_b_value < 0.0);
        }

        #[test]
        fn hoeffding_is_monotone(n in 1u64..100_000, dn in 0u64..1000, g in 0.001f64..1.0, dg in 0.0f64..0.5) {
            let base = hoeffding_bound(n, g).unwrap();
            prop_assert!(hoeffding_bound(n + dn, g).unwrap() >= base);
            prop_assert!(hoeffding_bound(n, g + dg).unwrap() >= base);
        }
    }
}
