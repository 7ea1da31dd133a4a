//! Joint laws of the running extremum, the time it is attained and the
//! terminal position.
//!
//! For velocities of opposite signs the law of `(ζ, extremum, Γ(t))` splits
//! into three parts:
//!
//! * `ζ = 0`: the extremum is the starting level and the path is a meander,
//! * `ζ = t`: the path ends at its extremum, i.e. it first reaches `Γ(t)` at `t`,
//! * `0 < ζ < t`: the path first reaches the level `y` at time `s`, reverses,
//!   and then follows a meander above (below) `y` for the remaining time.
//!
//! The third part is a density in `(s, y, x)` plus lower-dimensional sheets
//! where one of its factors is atomic (see [`RegularComponent`]). A switch at
//! the extremum happens at rate `lambda` while the level is crossed at speed
//! `|gamma|`, so the regular part carries the factor `lambda/|gamma|` of the
//! arrival state.

use serde::{Deserialize, Serialize};

use crate::density::position_law;
use crate::error::{Result, TelegraphError};
use crate::first_passage::{summed_density_unchecked as passage_density, switch_density_unchecked as passage_switch};
use crate::kinematics::Kinematics;
use crate::law::{Atom, MixedLaw, Support};
use crate::meander::{
    meander_atom, meander_law, summed_density_opposite as meander_density,
    switch_density_unchecked as meander_switch, MeanderSign,
};
use crate::params::{State, TelegraphParams, VelocityRegime};
use crate::quadrature::{integrate, Tolerance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ExtremumKind {
    Min,
    Max,
}

/// A point of the joint law: extremum time `s`, extremum value `y`, terminal
/// position `x` and optionally the switch count.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JointExtremumPoint {
    pub s: f64,
    pub y: f64,
    pub x: f64,
    pub n: Option<u32>,
}

impl JointExtremumPoint {
    /// Checks the ordering constraints a realisation must satisfy.
    pub fn is_consistent(&self, kind: ExtremumKind, t: f64) -> bool {
        let ordered = match kind {
            ExtremumKind::Min => self.y <= 0.0 && self.y <= self.x,
            ExtremumKind::Max => self.y >= 0.0 && self.y >= self.x,
        };
        let in_time = (0.0..=t).contains(&self.s);
        let start_ok = self.s != 0.0 || self.y == 0.0;
        let end_ok = self.s != t || self.y == self.x;
        ordered && in_time && start_ok && end_ok
    }
}

/// A single term of a joint law: an atom in `x` or a density value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Contribution {
    Atom(Atom),
    Density(f64),
}

impl Contribution {
    pub fn density(&self) -> f64 {
        match self {
            Contribution::Density(d) => *d,
            Contribution::Atom(_) => 0.0,
        }
    }
}

fn require_opposite(params: &TelegraphParams) -> Result<()> {
    match params.regime() {
        VelocityRegime::OppositeSigns => Ok(()),
        other => Err(TelegraphError::RegimeMismatch(other)),
    }
}

fn check_time(t: f64) -> Result<()> {
    if t.is_finite() && t > 0.0 {
        Ok(())
    } else {
        Err(TelegraphError::NonPositive {
            what: "time",
            value: t,
        })
    }
}

/// Kind-dependent geometry: which state arrives at the extremum and which
/// meander follows it.
#[derive(Debug, Clone, Copy)]
struct Geometry {
    /// State in which the extremum is approached.
    arrival: State,
    /// Meander followed after reversing at the extremum.
    meander: MeanderSign,
    /// Meander that makes `ζ = 0` possible and the initial state it needs.
    start_meander: (State, MeanderSign),
}

fn geometry(kind: ExtremumKind) -> Geometry {
    match kind {
        ExtremumKind::Min => Geometry {
            arrival: State::One,
            meander: MeanderSign::Positive,
            start_meander: (State::Zero, MeanderSign::Positive),
        },
        ExtremumKind::Max => Geometry {
            arrival: State::Zero,
            meander: MeanderSign::Negative,
            start_meander: (State::One, MeanderSign::Negative),
        },
    }
}

fn extremum_side(kind: ExtremumKind, x: f64) -> bool {
    match kind {
        ExtremumKind::Min => x < 0.0,
        ExtremumKind::Max => x > 0.0,
    }
}

/// `{ζ = 0, extremum = 0, Γ(t) ∈ dx, N(t) = n}`: the meander term.
pub fn extremum_zeta_zero_component(
    params: &TelegraphParams,
    state: State,
    kind: ExtremumKind,
    t: f64,
    x: f64,
    n: u32,
) -> Result<Contribution> {
    require_opposite(params)?;
    check_time(t)?;
    let (needed, sign) = geometry(kind).start_meander;
    if state != needed {
        return Ok(Contribution::Density(0.0));
    }
    if n == 0 {
        return Ok(Contribution::Atom(meander_atom(params, sign, t)?));
    }
    Ok(Contribution::Density(meander_switch(params, sign, t, x, n)))
}

/// `{ζ = t, extremum = Γ(t) ∈ dx, N(t) = n}`: the path first reaches `x` at `t`.
/// The passage density in time is converted to a density in space by the
/// arrival speed.
pub fn extremum_zeta_t_component(
    params: &TelegraphParams,
    state: State,
    kind: ExtremumKind,
    t: f64,
    x: f64,
    n: u32,
) -> Result<Contribution> {
    require_opposite(params)?;
    check_time(t)?;
    let arrival = geometry(kind).arrival;
    if n == 0 {
        return Ok(if state == arrival {
            Contribution::Atom(Atom {
                location: params.velocity(state) * t,
                mass: (-params.rate(state) * t).exp(),
            })
        } else {
            Contribution::Density(0.0)
        });
    }
    if !extremum_side(kind, x) {
        return Ok(Contribution::Density(0.0));
    }
    let speed = params.velocity(arrival).abs();
    Ok(Contribution::Density(passage_switch(params, state, t, x, n) / speed))
}

/// The `ζ = t` law summed over switch counts, in closed form.
fn end_law(params: &TelegraphParams, state: State, kind: ExtremumKind, t: f64) -> MixedLaw {
    let p = *params;
    let (l0, l1) = (p.lambda0(), p.lambda1());
    let (g0, g1) = (p.gamma0(), p.gamma1());
    let atoms = if state == geometry(kind).arrival {
        vec![Atom {
            location: p.velocity(state) * t,
            mass: (-p.rate(state) * t).exp(),
        }]
    } else {
        Vec::new()
    };
    let support = match kind {
        ExtremumKind::Min => Support::new(g1 * t, 0.0),
        ExtremumKind::Max => Support::new(0.0, g0 * t),
    };
    MixedLaw::new(atoms, support, move |x| {
        let k = Kinematics::at(&p, t, x);
        let s = k.scaled_series();
        match (kind, state) {
            (ExtremumKind::Min, State::Zero) => {
                l0 / k.xi1 * (-x * s.i0_theta + g0 * k.xi0 * s.i1_theta) / -g1
            }
            (ExtremumKind::Min, State::One) => -l0 * l1 * x * s.i1_theta / -g1,
            (ExtremumKind::Max, State::Zero) => l0 * l1 * x * s.i1_theta / g0,
            (ExtremumKind::Max, State::One) => {
                l1 / k.xi0 * (x * s.i0_theta - g1 * k.xi1 * s.i1_theta) / g0
            }
        }
    })
}

/// Pairs `(passage switches, meander switches)` contributing to the regular
/// part with `n` switches in total; the reversal at the extremum is the
/// remaining switch.
fn count_pairs(state: State, kind: ExtremumKind, n: u32) -> Vec<(u32, u32)> {
    if n == 0 {
        return Vec::new();
    }
    match (state, kind) {
        // passage in an odd number of switches, then the meander
        (State::Zero, ExtremumKind::Min) | (State::One, ExtremumKind::Max) => {
            (1..=n / 2).map(|k| (2 * k - 1, n - 2 * k)).collect()
        }
        // passage in an even number of switches (possibly none)
        (State::One, ExtremumKind::Min) | (State::Zero, ExtremumKind::Max) => {
            (0..=(n - 1) / 2).map(|k| (2 * k, n - 2 * k - 1)).collect()
        }
    }
}

/// Density in `(s, y, x)` of `{ζ ∈ ds, extremum ∈ dy, Γ(t) ∈ dx, N(t) = n}`
/// for `0 < s < t`, excluding the atomic sheets. Zero outside its support.
#[allow(clippy::too_many_arguments)]
pub fn extremum_regular_density(
    params: &TelegraphParams,
    state: State,
    kind: ExtremumKind,
    t: f64,
    s: f64,
    y: f64,
    x: f64,
    n: u32,
) -> Result<f64> {
    require_opposite(params)?;
    check_time(t)?;
    Ok(RegularComponent::new(*params, state, kind, t).volume(s, y, x, Some(n)))
}

/// The `0 < ζ < t` part of the joint law.
///
/// Besides the density [`volume`](Self::volume) in `(s, y, x)` it carries up to
/// three singular sheets:
///
/// * [`meander_atom_sheet`](Self::meander_atom_sheet): no switch after the
///   reversal, `x = y + v (t - s)` with `v` the post-reversal velocity;
///   density in `(s, y)`.
/// * [`passage_atom_sheet`](Self::passage_atom_sheet): no switch before the
///   extremum, `y = gamma_i s`; density in `(s, x)`.
/// * [`curve`](Self::curve): both, density in `s`.
///
/// Every method takes `n = None` for the law summed over switch counts.
#[derive(Debug, Clone, Copy)]
pub struct RegularComponent {
    params: TelegraphParams,
    state: State,
    kind: ExtremumKind,
    t: f64,
}

impl RegularComponent {
    fn new(params: TelegraphParams, state: State, kind: ExtremumKind, t: f64) -> Self {
        RegularComponent {
            params,
            state,
            kind,
            t,
        }
    }

    fn geometry(&self) -> Geometry {
        geometry(self.kind)
    }

    /// `lambda/|gamma|` of the arrival state.
    fn reversal_factor(&self) -> f64 {
        let arrival = self.geometry().arrival;
        self.params.rate(arrival) / self.params.velocity(arrival).abs()
    }

    fn post_velocity(&self) -> f64 {
        self.params.velocity(self.geometry().arrival.other())
    }

    fn post_rate(&self) -> f64 {
        self.params.rate(self.geometry().arrival.other())
    }

    /// Whether paths from this state can reach the extremum without switching.
    pub fn has_passage_atom(&self) -> bool {
        self.state == self.geometry().arrival
    }

    fn passage(&self, s: f64, y: f64, j: Option<u32>) -> f64 {
        if s <= 0.0 || !extremum_side(self.kind, y) {
            return 0.0;
        }
        match j {
            None => passage_density(&self.params, self.state, s, y),
            Some(j) => passage_switch(&self.params, self.state, s, y, j),
        }
    }

    fn meander(&self, tau: f64, u: f64, m: Option<u32>) -> f64 {
        if tau <= 0.0 {
            return 0.0;
        }
        let sign = self.geometry().meander;
        match m {
            None => meander_density(&self.params, sign, tau, u),
            Some(m) => meander_switch(&self.params, sign, tau, u, m),
        }
    }

    fn in_time(&self, s: f64) -> bool {
        s > 0.0 && s < self.t
    }

    pub fn volume(&self, s: f64, y: f64, x: f64, n: Option<u32>) -> f64 {
        if !self.in_time(s) {
            return 0.0;
        }
        let tau = self.t - s;
        let c = self.reversal_factor();
        match n {
            None => c * self.passage(s, y, None) * self.meander(tau, x - y, None),
            Some(n) => count_pairs(self.state, self.kind, n)
                .into_iter()
                .filter(|&(j, m)| j >= 1 && m >= 1)
                .map(|(j, m)| c * self.passage(s, y, Some(j)) * self.meander(tau, x - y, Some(m)))
                .sum(),
        }
    }

    pub fn meander_atom_sheet(&self, s: f64, y: f64, n: Option<u32>) -> f64 {
        if !self.in_time(s) {
            return 0.0;
        }
        let survive = (-self.post_rate() * (self.t - s)).exp();
        let c = self.reversal_factor();
        match n {
            None => c * self.passage(s, y, None) * survive,
            Some(n) => count_pairs(self.state, self.kind, n)
                .into_iter()
                .filter(|&(j, m)| j >= 1 && m == 0)
                .map(|(j, _)| c * self.passage(s, y, Some(j)) * survive)
                .sum(),
        }
    }

    /// The sheet location `x = y + v (t - s)`.
    pub fn meander_atom_position(&self, s: f64, y: f64) -> f64 {
        y + self.post_velocity() * (self.t - s)
    }

    pub fn passage_atom_sheet(&self, s: f64, x: f64, n: Option<u32>) -> f64 {
        if !self.has_passage_atom() || !self.in_time(s) {
            return 0.0;
        }
        let p = &self.params;
        let y = p.velocity(self.state) * s;
        let weight = p.rate(self.state) * (-p.rate(self.state) * s).exp();
        let tau = self.t - s;
        match n {
            None => weight * self.meander(tau, x - y, None),
            Some(n) => count_pairs(self.state, self.kind, n)
                .into_iter()
                .filter(|&(j, m)| j == 0 && m >= 1)
                .map(|(_, m)| weight * self.meander(tau, x - y, Some(m)))
                .sum(),
        }
    }

    pub fn curve(&self, s: f64, n: Option<u32>) -> f64 {
        if !self.has_passage_atom() || !self.in_time(s) || n.is_some_and(|n| n != 1) {
            return 0.0;
        }
        let p = &self.params;
        p.rate(self.state) * (-p.rate(self.state) * s - self.post_rate() * (self.t - s)).exp()
    }

    /// Range of extremum levels reachable by time `s`.
    fn level_range(&self, s: f64) -> (f64, f64) {
        match self.kind {
            ExtremumKind::Min => (self.params.gamma1() * s, 0.0),
            ExtremumKind::Max => (0.0, self.params.gamma0() * s),
        }
    }

    /// Levels `y` at time `s` compatible with terminal position `x`.
    fn level_range_given_x(&self, s: f64, x: f64) -> Option<(f64, f64)> {
        let (lo, hi) = self.level_range(s);
        let tau = self.t - s;
        let (g0, g1) = (self.params.gamma0(), self.params.gamma1());
        let (lo, hi) = match self.kind {
            // 0 < x - y < gamma0 tau
            ExtremumKind::Min => (lo.max(x - g0 * tau), hi.min(x)),
            // gamma1 tau < x - y < 0
            ExtremumKind::Max => (lo.max(x), hi.min(x - g1 * tau)),
        };
        (lo < hi).then_some((lo, hi))
    }

    fn meander_total(&self, tau: f64, tol: &Tolerance) -> f64 {
        if tau <= 0.0 {
            return 0.0;
        }
        meander_law(&self.params, self.geometry().meander, tau).map_or(0.0, |l| l.total_mass(tol))
    }

    /// Density of `(ζ, extremum)` at `(s, y)` with `Γ(t)` integrated out.
    /// The path after the extremum only has to stay on one side of it.
    pub fn time_level_density(&self, s: f64, y: f64, tol: &Tolerance) -> f64 {
        if !self.in_time(s) {
            return 0.0;
        }
        let f = self.passage(s, y, None);
        if f == 0.0 {
            return 0.0;
        }
        self.reversal_factor() * f * self.meander_total(self.t - s, tol)
    }

    /// Density in `s` of the line `y = gamma_i s` carried by paths that reach
    /// the extremum without switching, `Γ(t)` integrated out.
    pub fn passage_line_density(&self, s: f64, tol: &Tolerance) -> f64 {
        if !self.has_passage_atom() || !self.in_time(s) {
            return 0.0;
        }
        let rate = self.params.rate(self.state);
        rate * (-rate * s).exp() * self.meander_total(self.t - s, tol)
    }

    /// Total probability of `{0 < ζ < t}`.
    pub fn mass(&self, tol: &Tolerance) -> f64 {
        let inner = Tolerance::absolute(tol.abs * 1e-2).with_rel(1e-12);
        let c = self.reversal_factor();
        let integrand = |s: f64| {
            let tau = self.t - s;
            if tau <= 0.0 || s <= 0.0 {
                return 0.0;
            }
            let meander = self.meander_total(tau, &inner);
            let (lo, hi) = self.level_range(s);
            let levels = integrate(|y| self.passage(s, y, None), lo, hi, &inner).value;
            let mut weight = c * levels;
            if self.has_passage_atom() {
                let p = &self.params;
                weight += p.rate(self.state) * (-p.rate(self.state) * s).exp();
            }
            weight * meander
        };
        integrate(integrand, 0.0, self.t, tol).value
    }

    /// Density in `x` of the regular part, integrating out `(s, y)`.
    pub fn x_marginal(&self, x: f64, n: Option<u32>, tol: &Tolerance) -> f64 {
        let inner = Tolerance::absolute(tol.abs * 1e-2).with_rel(1e-12);
        let t = self.t;
        let volume = integrate(
            |s| match self.level_range_given_x(s, x) {
                Some((lo, hi)) => integrate(|y| self.volume(s, y, x, n), lo, hi, &inner).value,
                None => 0.0,
            },
            0.0,
            t,
            tol,
        )
        .value;
        let v = self.post_velocity();
        let sheet = integrate(|s| self.meander_atom_sheet(s, x - v * (t - s), n), 0.0, t, tol).value;
        let mut total = volume + sheet;
        if self.has_passage_atom() {
            total += integrate(|s| self.passage_atom_sheet(s, x, n), 0.0, t, tol).value;
            // x = gamma_i s + v (t - s)
            let vi = self.params.velocity(self.state);
            let s_star = (x - v * t) / (vi - v);
            total += self.curve(s_star, n) / (vi - v).abs();
        }
        total
    }
}

/// Masses of the three parts of a joint extremum law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComponentMasses {
    pub zeta_zero: f64,
    pub zeta_t: f64,
    pub regular: f64,
}

impl ComponentMasses {
    pub fn total(&self) -> f64 {
        self.zeta_zero + self.zeta_t + self.regular
    }
}

/// Joint law of `(ζ, extremum, Γ(t))` for one initial state and extremum kind.
#[derive(Debug, Clone)]
pub struct ExtremumJointLaw {
    pub kind: ExtremumKind,
    pub state: State,
    pub t: f64,
    /// Law of `Γ(t)` on `{ζ = 0}` (extremum equal to the start level).
    pub zeta_zero: MixedLaw,
    /// Law of `Γ(t)` on `{ζ = t}` (extremum equal to `Γ(t)`).
    pub zeta_t: MixedLaw,
    /// `None` when the velocities share a sign and the law is degenerate.
    pub regular: Option<RegularComponent>,
}

pub fn extremum_joint_law(params: &TelegraphParams, state: State, kind: ExtremumKind, t: f64) -> Result<ExtremumJointLaw> {
    check_time(t)?;
    let (zeta_zero, zeta_t, regular) = match (params.regime(), kind) {
        // monotone paths: the extremum sits at one end
        (VelocityRegime::BothPositive, ExtremumKind::Min) | (VelocityRegime::BothNegative, ExtremumKind::Max) => {
            (position_law(params, state, t)?, MixedLaw::empty(), None)
        }
        (VelocityRegime::BothPositive, ExtremumKind::Max) | (VelocityRegime::BothNegative, ExtremumKind::Min) => {
            (MixedLaw::empty(), position_law(params, state, t)?, None)
        }
        (VelocityRegime::OppositeSigns, _) => {
            let (needed, sign) = geometry(kind).start_meander;
            let start = if state == needed {
                meander_law(params, sign, t)?
            } else {
                MixedLaw::empty()
            };
            (
                start,
                end_law(params, state, kind, t),
                Some(RegularComponent::new(*params, state, kind, t)),
            )
        }
    };
    Ok(ExtremumJointLaw {
        kind,
        state,
        t,
        zeta_zero,
        zeta_t,
        regular,
    })
}

impl ExtremumJointLaw {
    pub fn component_masses(&self, tol: &Tolerance) -> ComponentMasses {
        ComponentMasses {
            zeta_zero: self.zeta_zero.total_mass(tol),
            zeta_t: self.zeta_t.total_mass(tol),
            regular: self.regular.map_or(0.0, |r| r.mass(tol)),
        }
    }

    /// Density in `x` of the continuous part of the terminal-position
    /// marginal, summed over the three components. Supports are open, so at
    /// `x = 0`, where components meet, the value is not the limit of its
    /// neighbours.
    pub fn x_marginal_density(&self, x: f64, tol: &Tolerance) -> f64 {
        self.zeta_zero.density(x)
            + self.zeta_t.density(x)
            + self.regular.map_or(0.0, |r| r.x_marginal(x, None, tol))
    }

    /// Atoms of the terminal-position marginal.
    pub fn x_marginal_atoms(&self) -> Vec<Atom> {
        self.zeta_zero
            .atoms()
            .iter()
            .chain(self.zeta_t.atoms())
            .copied()
            .collect()
    }
}
