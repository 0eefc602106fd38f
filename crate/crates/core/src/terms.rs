//! Exact expansion of the coincidence-rate integrals into `(1 ± e^{iφ})`
//! branch products, stationary-term selection and kernel classification.
//!
//! Every factor of the form `(1 ± e^{i(Σ cᵥ ωᵥ τ + m_α α + m_β β)})`
//! contributes either its unit branch (`'1'`) or its exponential branch
//! (`'e'`). A term is the product of one branch per factor times the
//! detection-time phase; its total exponent is an integer linear form in the
//! frequency variables (in units of `τ`) plus integer multiples of `α` and
//! `β`. A term survives when that linear form is identically zero.
//!
//! Coefficients are kept in the normalization of the raw expansion: the
//! `1/2` of every interferometer factor is dropped, which puts Franson rates
//! at twice the values of [`crate::rates::franson_rates`]
//! (see [`FRANSON_EXPANSION_FACTOR`]).

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::quadrature::JIntegrals;

/// Expansion-normalized Franson rates are this many times the physical ones.
pub const FRANSON_EXPANSION_FACTOR: f64 = 2.0;

/// Integration variables. The tilde variables only appear in four-photon
/// terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Var {
    A,
    B,
    APrime,
    BPrime,
    ATilde,
    BTilde,
}

impl Var {
    pub const ALL: [Var; 6] = [
        Var::A,
        Var::B,
        Var::APrime,
        Var::BPrime,
        Var::ATilde,
        Var::BTilde,
    ];

    fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Var::A => "ω_a",
            Var::B => "ω_b",
            Var::APrime => "ω_a'",
            Var::BPrime => "ω_b'",
            Var::ATilde => "ω̃_a",
            Var::BTilde => "ω̃_b",
        }
    }
}

/// Exact integer linear form `Σ cᵥ ωᵥ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize)]
pub struct LinearForm([i8; 6]);

impl LinearForm {
    pub fn zero() -> Self {
        LinearForm([0; 6])
    }

    pub fn from_terms(terms: &[(Var, i8)]) -> Self {
        let mut f = LinearForm::zero();
        for &(v, c) in terms {
            f.0[v.index()] += c;
        }
        f
    }

    pub fn coefficient(&self, v: Var) -> i8 {
        self.0[v.index()]
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn add(&self, other: &LinearForm) -> Self {
        let mut out = *self;
        for k in 0..6 {
            out.0[k] += other.0[k];
        }
        out
    }

    pub fn scale(&self, s: i8) -> Self {
        let mut out = *self;
        for c in out.0.iter_mut() {
            *c *= s;
        }
        out
    }

    pub fn negate(&self) -> Self {
        self.scale(-1)
    }

    /// First variable with a nonzero coefficient, if any.
    pub fn witness(&self) -> Option<Var> {
        Var::ALL.into_iter().find(|&v| self.coefficient(v) != 0)
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for v in Var::ALL {
            let c = self.coefficient(v);
            if c == 0 {
                continue;
            }
            let sign = if c < 0 {
                "-"
            } else if first {
                ""
            } else {
                "+"
            };
            let mag = c.unsigned_abs();
            if mag == 1 {
                write!(f, "{sign}{}", v.name())?;
            } else {
                write!(f, "{sign}{mag}{}", v.name())?;
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Branch {
    Unit,
    Exp,
}

impl Branch {
    fn symbol(self) -> char {
        match self {
            Branch::Unit => '1',
            Branch::Exp => 'e',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum RateKind {
    R2,
    R41,
    R42,
    R43,
}

impl RateKind {
    pub const ALL: [RateKind; 4] = [RateKind::R2, RateKind::R41, RateKind::R42, RateKind::R43];

    pub fn intensity_power(self) -> i32 {
        match self {
            RateKind::R2 => 1,
            _ => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            RateKind::R2 => "R2",
            RateKind::R41 => "R41",
            RateKind::R42 => "R42",
            RateKind::R43 => "R43",
        }
    }
}

impl std::str::FromStr for RateKind {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_uppercase().replace(['_', ','], "").as_str() {
            "R2" => Ok(RateKind::R2),
            "R41" => Ok(RateKind::R41),
            "R42" => Ok(RateKind::R42),
            "R43" => Ok(RateKind::R43),
            other => Err(format!("unknown rate kind `{other}` (R2, R41, R42, R43)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum SetupKind {
    Calibration,
    Franson,
}

impl std::str::FromStr for SetupKind {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "calibration" => Ok(SetupKind::Calibration),
            "franson" => Ok(SetupKind::Franson),
            other => Err(format!("unknown setup `{other}` (calibration, franson)")),
        }
    }
}

/// One `(1 ± e^{i(...)})` factor.
#[derive(Debug, Clone, Copy)]
struct Factor {
    form: LinearForm,
    alpha: i8,
    beta: i8,
    minus: bool,
}

impl Factor {
    fn pump(terms: &[(Var, i8)]) -> Self {
        Factor {
            form: LinearForm::from_terms(terms),
            alpha: 0,
            beta: 0,
            minus: false,
        }
    }

    fn evolution(v: Var, conj: bool) -> Self {
        let s = if conj { -1 } else { 1 };
        let (alpha, beta) = match v {
            Var::A | Var::APrime => (s, 0),
            _ => (0, s),
        };
        Factor {
            form: LinearForm::from_terms(&[(v, s)]),
            alpha,
            beta,
            minus: true,
        }
    }
}

/// `g` or `g*` evaluated at two variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GFactor {
    pub conj: bool,
    pub a_arg: Var,
    pub b_arg: Var,
}

const fn gf(conj: bool, a_arg: Var, b_arg: Var) -> GFactor {
    GFactor { conj, a_arg, b_arg }
}

/// Pump-envelope factors of each rate kind, in the order their branch
/// symbols appear in labels.
fn pump_factors(kind: RateKind) -> Vec<Factor> {
    use Var::*;
    match kind {
        RateKind::R2 => vec![
            Factor::pump(&[(A, 1), (B, 1)]),
            Factor::pump(&[(APrime, -1), (BPrime, -1)]),
        ],
        // R2 times the norm ∫|G(ω̃_a, ω̃_b)|² of the undetected pair.
        RateKind::R41 => vec![
            Factor::pump(&[(A, 1), (B, 1)]),
            Factor::pump(&[(APrime, -1), (BPrime, -1)]),
            Factor::pump(&[(ATilde, 1), (BTilde, 1)]),
            Factor::pump(&[(ATilde, -1), (BTilde, -1)]),
        ],
        RateKind::R42 => vec![
            Factor::pump(&[(ATilde, -1), (BTilde, -1)]),
            Factor::pump(&[(APrime, -1), (BPrime, -1)]),
            Factor::pump(&[(ATilde, 1), (B, 1)]),
            Factor::pump(&[(A, 1), (BTilde, 1)]),
        ],
        RateKind::R43 => vec![
            Factor::pump(&[(ATilde, -1), (BPrime, -1)]),
            Factor::pump(&[(APrime, -1), (BTilde, -1)]),
            Factor::pump(&[(ATilde, 1), (B, 1)]),
            Factor::pump(&[(A, 1), (BTilde, 1)]),
        ],
    }
}

/// The joint-amplitude factors of each rate kind.
pub fn g_factors(kind: RateKind) -> Vec<GFactor> {
    use Var::*;
    match kind {
        RateKind::R2 => vec![gf(false, A, B), gf(true, APrime, BPrime)],
        RateKind::R41 => vec![
            gf(false, A, B),
            gf(true, APrime, BPrime),
            gf(false, ATilde, BTilde),
            gf(true, ATilde, BTilde),
        ],
        RateKind::R42 => vec![
            gf(true, ATilde, BTilde),
            gf(true, APrime, BPrime),
            gf(false, ATilde, B),
            gf(false, A, BTilde),
        ],
        RateKind::R43 => vec![
            gf(true, ATilde, BPrime),
            gf(true, APrime, BTilde),
            gf(false, ATilde, B),
            gf(false, A, BTilde),
        ],
    }
}

fn evolution_factors(setup: SetupKind) -> Vec<Factor> {
    match setup {
        SetupKind::Calibration => Vec::new(),
        SetupKind::Franson => vec![
            Factor::evolution(Var::A, false),
            Factor::evolution(Var::B, false),
            Factor::evolution(Var::APrime, true),
            Factor::evolution(Var::BPrime, true),
        ],
    }
}

/// `−T_A (ω_a − ω_a') − T_B (ω_b − ω_b')` with times in units of `τ`.
fn detection_form(t_a: i8, t_b: i8) -> LinearForm {
    LinearForm::from_terms(&[
        (Var::A, -t_a),
        (Var::APrime, t_a),
        (Var::B, -t_b),
        (Var::BPrime, t_b),
    ])
}

/// One term of the expansion.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Term {
    pub kind: RateKind,
    pub setup: SetupKind,
    pub pump: Vec<Branch>,
    pub evolution: Vec<Branch>,
    /// Total exponent, in units of `τ`.
    pub coeffs: LinearForm,
    pub alpha_units: i8,
    pub beta_units: i8,
    pub sign: i8,
}

impl Term {
    /// `"<pump branches>|<evolution branches>"`, or only the pump branches
    /// when nothing evolves.
    pub fn label(&self) -> String {
        let pump: String = self.pump.iter().map(|b| b.symbol()).collect();
        if self.evolution.is_empty() {
            pump
        } else {
            let evo: String = self.evolution.iter().map(|b| b.symbol()).collect();
            format!("{pump}|{evo}")
        }
    }

    pub fn is_stationary(&self) -> bool {
        self.coeffs.is_zero()
    }

    /// Complex conjugate: exponent and phases flip, the sign is unchanged.
    pub fn conjugate(&self) -> Term {
        Term {
            coeffs: self.coeffs.negate(),
            alpha_units: -self.alpha_units,
            beta_units: -self.beta_units,
            ..self.clone()
        }
    }
}

fn check_time_bin(t: i32) -> Result<i8> {
    if (0..=2).contains(&t) {
        Ok(t as i8)
    } else {
        Err(Error::InvalidTimeBin(t))
    }
}

/// Every branch product of the rate integral `kind` for `setup`, detected
/// at `(t_a τ, t_b τ)`.
pub fn enumerate_terms(kind: RateKind, setup: SetupKind, t_a: i32, t_b: i32) -> Result<Vec<Term>> {
    let t_a = check_time_bin(t_a)?;
    let t_b = check_time_bin(t_b)?;
    let pump = pump_factors(kind);
    let evo = evolution_factors(setup);
    let det = detection_form(t_a, t_b);
    let n = pump.len() + evo.len();
    let mut out = Vec::with_capacity(1 << n);
    for mask in 0u32..(1 << n) {
        // The first factor is the most significant bit so the output is
        // ordered like the labels.
        let chosen = |k: usize| mask >> (n - 1 - k) & 1 == 1;
        let mut coeffs = det;
        let mut alpha_units = 0;
        let mut beta_units = 0;
        let mut sign = 1i8;
        let mut branches = Vec::with_capacity(n);
        for (k, f) in pump.iter().chain(&evo).enumerate() {
            if chosen(k) {
                coeffs = coeffs.add(&f.form);
                alpha_units += f.alpha;
                beta_units += f.beta;
                if f.minus {
                    sign = -sign;
                }
                branches.push(Branch::Exp);
            } else {
                branches.push(Branch::Unit);
            }
        }
        let evolution = branches.split_off(pump.len());
        out.push(Term {
            kind,
            setup,
            pump: branches,
            evolution,
            coeffs,
            alpha_units,
            beta_units,
            sign,
        });
    }
    Ok(out)
}

/// One factor of a factorized kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum JFactor {
    J,
    JA,
    JB,
    JAB,
}

impl JFactor {
    fn symbol(self) -> &'static str {
        match self {
            JFactor::J => "J",
            JFactor::JA => "J_A",
            JFactor::JB => "J_B",
            JFactor::JAB => "J_AB",
        }
    }

    fn value(self, j: &JIntegrals) -> f64 {
        match self {
            JFactor::J => j.j,
            JFactor::JA => j.j_a,
            JFactor::JB => j.j_b,
            JFactor::JAB => j.j_ab,
        }
    }
}

/// Which integral a survivor turns into once `ω_a' = ω_a` and `ω_b' = ω_b`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum KernelClass {
    /// Product of independent `|g|²` integrals.
    Product(Vec<JFactor>),
    /// `∫ F_A F_B g*(x,y) g*(x',y') g(x,y') g(x',y)`, one half of `J_4`
    /// for the `+ c.c.` symmetrized integral.
    Exchange,
    Unclassified,
}

impl fmt::Display for KernelClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KernelClass::Product(fs) => {
                let s: Vec<&str> = fs.iter().map(|x| x.symbol()).collect();
                write!(f, "{}", s.join("·"))
            }
            KernelClass::Exchange => write!(f, "J4"),
            KernelClass::Unclassified => write!(f, "?"),
        }
    }
}

impl KernelClass {
    /// Value of the kernel integral. For [`KernelClass::Exchange`] this is
    /// the real part, `J_4 / 2`.
    pub fn value(&self, j: &JIntegrals) -> Option<f64> {
        match self {
            KernelClass::Product(fs) => Some(fs.iter().map(|f| f.value(j)).product()),
            KernelClass::Exchange => Some(0.5 * j.j4),
            KernelClass::Unclassified => None,
        }
    }
}

/// Detector-limit identification `ω_a' → ω_a`, `ω_b' → ω_b`.
fn merge(v: Var) -> Var {
    match v {
        Var::APrime => Var::A,
        Var::BPrime => Var::B,
        other => other,
    }
}

/// Classify the kernel of `factors` after the detector-limit
/// identification. Filters weight `ω_a` (`F_A`) and `ω_b` (`F_B`).
pub fn classify_kernel(factors: &[GFactor]) -> KernelClass {
    let merged: Vec<GFactor> = factors
        .iter()
        .map(|g| gf(g.conj, merge(g.a_arg), merge(g.b_arg)))
        .collect();

    if let Some(pairs) = pair_moduli(&merged) {
        // Each variable must belong to exactly one |g|² for the kernel to
        // factorize.
        let mut seen = Vec::new();
        for &(x, y) in &pairs {
            for v in [x, y] {
                if seen.contains(&v) {
                    return KernelClass::Unclassified;
                }
                seen.push(v);
            }
        }
        let mut fs: Vec<JFactor> = pairs
            .iter()
            .map(|&(x, y)| match (x == Var::A, y == Var::B) {
                (true, true) => JFactor::JAB,
                (true, false) => JFactor::JA,
                (false, true) => JFactor::JB,
                (false, false) => JFactor::J,
            })
            .collect();
        fs.sort();
        return KernelClass::Product(fs);
    }

    // Crossed pattern: g*(x,y) g*(x',y') g(x,y') g(x',y) with (x,y) the
    // filtered pair.
    if merged.len() == 4 {
        let conj: Vec<&GFactor> = merged.iter().filter(|g| g.conj).collect();
        let plain: Vec<&GFactor> = merged.iter().filter(|g| !g.conj).collect();
        if conj.len() == 2 && plain.len() == 2 {
            if let Some(filtered) = conj.iter().find(|g| g.a_arg == Var::A && g.b_arg == Var::B) {
                let other = conj.iter().find(|g| !std::ptr::eq(**g, *filtered)).unwrap();
                let (x, y, xp, yp) = (filtered.a_arg, filtered.b_arg, other.a_arg, other.b_arg);
                let distinct = xp != x && yp != y;
                let has = |a: Var, b: Var| plain.iter().any(|g| g.a_arg == a && g.b_arg == b);
                if distinct && has(x, yp) && has(xp, y) {
                    return KernelClass::Exchange;
                }
            }
        }
    }
    KernelClass::Unclassified
}

/// Pair every `g*` with a `g` of identical arguments.
fn pair_moduli(factors: &[GFactor]) -> Option<Vec<(Var, Var)>> {
    let mut plain: Vec<(Var, Var)> = factors
        .iter()
        .filter(|g| !g.conj)
        .map(|g| (g.a_arg, g.b_arg))
        .collect();
    let mut pairs = Vec::new();
    for g in factors.iter().filter(|g| g.conj) {
        let pos = plain.iter().position(|&p| p == (g.a_arg, g.b_arg))?;
        pairs.push(plain.swap_remove(pos));
    }
    plain.is_empty().then_some(pairs)
}

/// `c0 + c1 cos(α+β)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrigCoefficient {
    pub c0: f64,
    pub c1: f64,
}

impl TrigCoefficient {
    pub fn eval(&self, phase_sum: f64) -> f64 {
        self.c0 + self.c1 * phase_sum.cos()
    }
}

impl fmt::Display for TrigCoefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.c0 == 0.0, self.c1 == 0.0) {
            (true, true) => write!(f, "0"),
            (false, true) => write!(f, "{}", self.c0),
            (true, false) => write!(f, "{}·cos(α+β)", self.c1),
            (false, false) => write!(f, "{} + {}·cos(α+β)", self.c0, self.c1),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Survivor {
    pub label: String,
    pub alpha_units: i8,
    pub beta_units: i8,
    pub sign: i8,
    pub kernel: KernelClass,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SurvivorReport {
    pub kind: RateKind,
    pub setup: SetupKind,
    pub total_terms: usize,
    pub survivors: Vec<Survivor>,
    pub trig_coefficient: TrigCoefficient,
}

impl SurvivorReport {
    pub fn labels(&self) -> Vec<&str> {
        self.survivors.iter().map(|s| s.label.as_str()).collect()
    }

    /// Human-readable table.
    pub fn to_table(&self) -> String {
        let mut s = format!(
            "{} {:?}: {} / {} survive, trig = {}\n",
            self.kind.name(),
            self.setup,
            self.survivors.len(),
            self.total_terms,
            self.trig_coefficient
        );
        s.push_str(&format!(
            "{:<12} {:>6} {:>6} {:>5}  {}\n",
            "label", "alpha", "beta", "sign", "kernel"
        ));
        for sv in &self.survivors {
            s.push_str(&format!(
                "{:<12} {:>6} {:>6} {:>5}  {}\n",
                sv.label, sv.alpha_units, sv.beta_units, sv.sign, sv.kernel
            ));
        }
        s
    }
}

/// Keep the terms whose exponent vanishes identically, assemble their
/// phase dependence and classify their kernels.
pub fn select_stationary(terms: &[Term]) -> Result<SurvivorReport> {
    let Some(first) = terms.first() else {
        return Err(Error::invalid("terms", "empty term list"));
    };
    let (kind, setup) = (first.kind, first.setup);
    let kernel = classify_kernel(&g_factors(kind));
    let survivors: Vec<Survivor> = terms
        .iter()
        .filter(|t| t.is_stationary())
        .map(|t| Survivor {
            label: t.label(),
            alpha_units: t.alpha_units,
            beta_units: t.beta_units,
            sign: t.sign,
            kernel: kernel.clone(),
        })
        .collect();

    // Sum sign · e^{i m (α+β)} grouped by m.
    let mut by_harmonic = std::collections::BTreeMap::<i8, i64>::new();
    for s in &survivors {
        if s.alpha_units != s.beta_units {
            return Err(Error::NonRealCoefficient(format!(
                "survivor {} depends on α and β separately ({}α {:+}β)",
                s.label, s.alpha_units, s.beta_units
            )));
        }
        *by_harmonic.entry(s.alpha_units).or_default() += s.sign as i64;
    }
    let get = |m: i8| by_harmonic.get(&m).copied().unwrap_or(0);
    for (&m, &c) in &by_harmonic {
        if m.abs() > 1 {
            return Err(Error::NonRealCoefficient(format!("harmonic {m} present")));
        }
        if get(-m) != c {
            return Err(Error::NonRealCoefficient(format!(
                "e^{{i{m}(α+β)}} has weight {c} but its conjugate has {}",
                get(-m)
            )));
        }
    }
    Ok(SurvivorReport {
        kind,
        setup,
        total_terms: terms.len(),
        survivors,
        trig_coefficient: TrigCoefficient {
            c0: get(0) as f64,
            c1: 2.0 * get(1) as f64,
        },
    })
}

/// Convenience: enumerate and select in one step.
pub fn survivor_report(
    kind: RateKind,
    setup: SetupKind,
    t_a: i32,
    t_b: i32,
) -> Result<SurvivorReport> {
    select_stationary(&enumerate_terms(kind, setup, t_a, t_b)?)
}

/// Closed-form value of a rate part at `α+β = phase_sum`, in expansion
/// normalization. For `R42` this returns `R42 + c.c.`.
pub fn reconstruct_rate(
    report: &SurvivorReport,
    j: &JIntegrals,
    intensity: f64,
    phase_sum: f64,
) -> Result<f64> {
    if report.survivors.is_empty() {
        return Ok(0.0);
    }
    let mut kernel = None;
    for s in &report.survivors {
        match s.kernel.value(j) {
            Some(v) => kernel = Some(v),
            None => {
                return Err(Error::UnclassifiedKernel {
                    label: s.label.clone(),
                })
            }
        }
    }
    let kernel = kernel.unwrap();
    let cc = if report.kind == RateKind::R42 {
        2.0
    } else {
        1.0
    };
    Ok(cc
        * report.trig_coefficient.eval(phase_sum)
        * kernel
        * intensity.powi(report.kind.intensity_power()))
}

/// Reference survivor counts: `(kind, setup, t_a, t_b, total, survivors, labels)`.
pub type Fixture = (
    RateKind,
    SetupKind,
    i32,
    i32,
    usize,
    usize,
    &'static [&'static str],
);

/// Survivor counts (and, where listed, labels) every expansion must
/// reproduce.
pub const FIXTURES: &[Fixture] = &[
    (RateKind::R2, SetupKind::Calibration, 0, 0, 4, 1, &["11"]),
    (RateKind::R2, SetupKind::Calibration, 1, 0, 4, 0, &[]),
    (RateKind::R41, SetupKind::Calibration, 1, 0, 16, 0, &[]),
    (RateKind::R42, SetupKind::Calibration, 1, 0, 16, 0, &[]),
    (
        RateKind::R43,
        SetupKind::Calibration,
        1,
        0,
        16,
        1,
        &["1e1e"],
    ),
    (
        RateKind::R2,
        SetupKind::Franson,
        1,
        1,
        64,
        4,
        &["ee|1111", "11|eeee", "1e|ee11", "e1|11ee"],
    ),
    (RateKind::R41, SetupKind::Franson, 1, 1, 256, 8, &[]),
    (
        RateKind::R42,
        SetupKind::Franson,
        1,
        1,
        256,
        4,
        &["1111|eeee", "eeee|1111", "1e11|ee11", "e1ee|11ee"],
    ),
    (RateKind::R43, SetupKind::Franson, 1, 1, 256, 4, &[]),
];

/// Compare a report against the fixture for its case, if there is one.
/// Returns a description of every mismatch.
pub fn check_fixture(report: &SurvivorReport, t_a: i32, t_b: i32) -> Option<Vec<String>> {
    let fx = FIXTURES
        .iter()
        .find(|f| f.0 == report.kind && f.1 == report.setup && f.2 == t_a && f.3 == t_b)?;
    let mut problems = Vec::new();
    if report.total_terms != fx.4 {
        problems.push(format!(
            "expected {} terms, got {}",
            fx.4, report.total_terms
        ));
    }
    if report.survivors.len() != fx.5 {
        problems.push(format!(
            "expected {} survivors, got {}",
            fx.5,
            report.survivors.len()
        ));
    }
    if !fx.6.is_empty() {
        let mut want: Vec<&str> = fx.6.to_vec();
        let mut got = report.labels();
        want.sort_unstable();
        got.sort_unstable();
        if want != got {
            problems.push(format!("expected labels {want:?}, got {got:?}"));
        }
    }
    Some(problems)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn labels(r: &SurvivorReport) -> BTreeSet<String> {
        r.survivors.iter().map(|s| s.label.clone()).collect()
    }

    fn set(xs: &[&str]) -> BTreeSet<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn term_counts() {
        let count = |k, s, a, b| enumerate_terms(k, s, a, b).unwrap().len();
        assert_eq!(count(RateKind::R2, SetupKind::Franson, 1, 1), 64);
        assert_eq!(count(RateKind::R2, SetupKind::Calibration, 0, 0), 4);
        assert_eq!(count(RateKind::R42, SetupKind::Franson, 1, 1), 256);
        assert_eq!(count(RateKind::R43, SetupKind::Calibration, 1, 0), 16);
    }

    #[test]
    fn invalid_time_bins() {
        assert_eq!(
            enumerate_terms(RateKind::R2, SetupKind::Franson, 3, 1).unwrap_err(),
            Error::InvalidTimeBin(3)
        );
        assert!(enumerate_terms(RateKind::R2, SetupKind::Franson, 0, -1).is_err());
    }

    #[test]
    fn r2_franson_survivors() {
        let r = survivor_report(RateKind::R2, SetupKind::Franson, 1, 1).unwrap();
        assert_eq!(
            labels(&r),
            set(&["ee|1111", "11|eeee", "1e|ee11", "e1|11ee"])
        );
        assert_eq!(r.trig_coefficient, TrigCoefficient { c0: 2.0, c1: 2.0 });
        assert!(r
            .survivors
            .iter()
            .all(|s| s.kernel == KernelClass::Product(vec![JFactor::JAB])));
        let phases: BTreeSet<(String, i8)> = r
            .survivors
            .iter()
            .map(|s| (s.label.clone(), s.alpha_units))
            .collect();
        assert!(phases.contains(&("1e|ee11".to_string(), 1)));
        assert!(phases.contains(&("e1|11ee".to_string(), -1)));
    }

    #[test]
    fn calibration_survivors() {
        let r = survivor_report(RateKind::R2, SetupKind::Calibration, 1, 0).unwrap();
        assert!(r.survivors.is_empty());
        let r = survivor_report(RateKind::R43, SetupKind::Calibration, 1, 0).unwrap();
        assert_eq!(labels(&r), set(&["1e1e"]));
        assert_eq!(
            r.survivors[0].kernel,
            KernelClass::Product(vec![JFactor::JA, JFactor::JB])
        );
        let r = survivor_report(RateKind::R2, SetupKind::Calibration, 0, 0).unwrap();
        assert_eq!(labels(&r), set(&["11"]));
    }

    #[test]
    fn r42_and_r43_franson() {
        let r = survivor_report(RateKind::R42, SetupKind::Franson, 1, 1).unwrap();
        assert_eq!(
            labels(&r),
            set(&["1111|eeee", "eeee|1111", "1e11|ee11", "e1ee|11ee"])
        );
        assert_eq!(r.survivors[0].kernel, KernelClass::Exchange);
        assert_eq!(r.trig_coefficient, TrigCoefficient { c0: 2.0, c1: 2.0 });
        let r = survivor_report(RateKind::R43, SetupKind::Franson, 1, 1).unwrap();
        assert_eq!(r.survivors.len(), 4);
        assert_eq!(r.trig_coefficient, TrigCoefficient { c0: 4.0, c1: 0.0 });
        assert_eq!(
            labels(&r),
            set(&["1111|eeee", "eeee|1111", "1e1e|1e1e", "e1e1|e1e1"])
        );
    }

    #[test]
    fn r41_kernel_and_identity() {
        let r = survivor_report(RateKind::R41, SetupKind::Franson, 1, 1).unwrap();
        assert_eq!(r.survivors.len(), 8);
        assert_eq!(
            r.survivors[0].kernel,
            KernelClass::Product(vec![JFactor::J, JFactor::JAB])
        );
        let j = JIntegrals::from_values(2.0, 1.5, 1.7, 1.3, 0.9);
        let r2 = survivor_report(RateKind::R2, SetupKind::Franson, 1, 1).unwrap();
        let (i, phi) = (0.02, 0.4);
        let lhs = reconstruct_rate(&r, &j, i, phi).unwrap();
        let rhs = 2.0 * i * j.j * reconstruct_rate(&r2, &j, i, phi).unwrap();
        assert!((lhs - rhs).abs() <= 1e-15 * rhs);
    }

    #[test]
    fn every_non_survivor_has_witness() {
        for kind in RateKind::ALL {
            for setup in [SetupKind::Calibration, SetupKind::Franson] {
                for (ta, tb) in [(0, 0), (1, 0), (1, 1), (2, 1)] {
                    for t in enumerate_terms(kind, setup, ta, tb).unwrap() {
                        assert_eq!(t.is_stationary(), t.coeffs.witness().is_none());
                        assert!(t.coeffs.0.iter().all(|c| (-2..=2).contains(c)));
                    }
                }
            }
        }
    }

    #[test]
    fn conjugate_negates() {
        let t = &enumerate_terms(RateKind::R2, SetupKind::Franson, 1, 1).unwrap()[7];
        let c = t.conjugate();
        assert_eq!(c.coeffs, t.coeffs.negate());
        assert_eq!(c.alpha_units, -t.alpha_units);
        assert_eq!(c.sign, t.sign);
        assert_eq!(c.conjugate(), *t);
    }

    #[test]
    fn classify_rejects_unknown_patterns() {
        use Var::*;
        let odd = [gf(false, A, B), gf(true, A, BTilde)];
        assert_eq!(classify_kernel(&odd), KernelClass::Unclassified);
        let report = SurvivorReport {
            kind: RateKind::R2,
            setup: SetupKind::Franson,
            total_terms: 1,
            survivors: vec![Survivor {
                label: "x".into(),
                alpha_units: 0,
                beta_units: 0,
                sign: 1,
                kernel: KernelClass::Unclassified,
            }],
            trig_coefficient: TrigCoefficient { c0: 1.0, c1: 0.0 },
        };
        let j = JIntegrals::from_values(1.0, 1.0, 1.0, 1.0, 1.0);
        assert!(matches!(
            reconstruct_rate(&report, &j, 0.1, 0.0),
            Err(Error::UnclassifiedKernel { .. })
        ));
    }

    #[test]
    fn zero_survivors_reconstruct_to_zero() {
        let r = survivor_report(RateKind::R42, SetupKind::Calibration, 1, 0).unwrap();
        let j = JIntegrals::from_values(1.0, 2.0, 3.0, 4.0, 5.0);
        assert_eq!(reconstruct_rate(&r, &j, 0.3, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn fixtures_all_hold() {
        for fx in FIXTURES {
            let r = survivor_report(fx.0, fx.1, fx.2, fx.3).unwrap();
            let problems = check_fixture(&r, fx.2, fx.3).unwrap();
            assert!(
                problems.is_empty(),
                "{:?}: {problems:?}",
                (fx.0, fx.1, fx.2, fx.3)
            );
        }
    }
}
