//! Parametrized input-state families, their parameter densities, local
//! transforms and closed-form CNOT results.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_8, PI};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qmat::{kron, validate_density, DensityMatrix, Mat2, Mat4, I, ONE};
use crate::sun::{b_gate, su2_from_angles, Su2Angles};

/// A point of a family's parameter domain. One-parameter families use `x`
/// only and keep `y = 0`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn line(x: f64) -> Self {
        Self { x, y: 0.0 }
    }

    pub const fn plane(x: f64, y: f64) -> Self {
        Self { x, y }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum Domain {
    Interval { lower: f64, upper: f64 },
    UnitDisk,
}

impl Domain {
    pub fn contains(&self, p: Point) -> bool {
        match *self {
            Domain::Interval { lower, upper } => p.x >= lower && p.x <= upper && p.y == 0.0,
            Domain::UnitDisk => p.x.is_finite() && p.y.is_finite() && p.x * p.x + p.y * p.y <= 1.0 + 1e-12,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StateFamily {
    Werner,
    RotatedWerner,
    OneStep,
    PhiMix,
    Maz,
    Qr,
}

impl StateFamily {
    pub const ALL: [StateFamily; 6] = [
        Self::Werner,
        Self::RotatedWerner,
        Self::OneStep,
        Self::PhiMix,
        Self::Maz,
        Self::Qr,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Self::Werner => "werner",
            Self::RotatedWerner => "rotated-werner",
            Self::OneStep => "one-step",
            Self::PhiMix => "phi-mix",
            Self::Maz => "maz",
            Self::Qr => "qr",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            Self::Qr => 2,
            _ => 1,
        }
    }

    pub fn domain(self) -> Domain {
        match self {
            Self::Qr => Domain::UnitDisk,
            _ => Domain::Interval { lower: 0.0, upper: 1.0 },
        }
    }

    /// The density used when none is given.
    pub fn default_pdf(self) -> PdfSpec {
        match self {
            Self::Werner | Self::RotatedWerner => PdfSpec::Uniform { lower: 0.5, upper: 1.0 },
            Self::Qr => PdfSpec::UniformDisk,
            _ => PdfSpec::Uniform { lower: 0.0, upper: 1.0 },
        }
    }

    pub fn build(self, p: Point) -> Result<DensityMatrix<4>> {
        if !self.domain().contains(p) {
            let (what, value) = if p.y != 0.0 && self.arity() == 1 { ("y", p.y) } else { ("x", p.x) };
            return Err(Error::Domain {
                family: self.id().into(),
                what: what.into(),
                value,
            });
        }
        validate_density(self.matrix(p))
    }

    fn matrix(self, p: Point) -> Mat4 {
        let x = p.x;
        match self {
            Self::Werner => {
                let rest = (1.0 - x) / 3.0;
                psi_minus().scale_real(x) + (psi_plus() + phi_minus() + phi_plus()).scale_real(rest)
            }
            Self::RotatedWerner => Mat4::from_real([
                [1.0 + 2.0 * x, 0.0, 0.0, 1.0 - 4.0 * x],
                [0.0, 2.0 - 2.0 * x, 0.0, 0.0],
                [0.0, 0.0, 2.0 - 2.0 * x, 0.0],
                [1.0 - 4.0 * x, 0.0, 0.0, 1.0 + 2.0 * x],
            ])
            .scale_real(1.0 / 6.0),
            Self::OneStep => Mat4::from_real([
                [x / 2.0, 0.0, 0.0, -x / 2.0],
                [0.0, 0.0, 0.0, 0.0],
                [0.0, 0.0, 1.0 - x, 0.0],
                [-x / 2.0, 0.0, 0.0, x / 2.0],
            ]),
            Self::PhiMix => phi_plus().scale_real(x) + phi_minus().scale_real(1.0 - x),
            Self::Maz => {
                // |Υ⟩ = (|Ψ⁺⟩ + i|Φ⁻⟩)/√2
                let h = 0.5 * ONE;
                let upsilon = [I * h, h, h, -I * h];
                psi_minus().scale_real(x) + Mat4::outer(&upsilon).scale_real(1.0 - x)
            }
            Self::Qr => {
                let iy = I * p.y;
                let (a, b) = (ONE * (1.0 - x), ONE * (1.0 + x));
                Mat4::from_rows([[a, iy, -iy, -a], [-iy, b, -b, iy], [iy, -b, b, -iy], [-a, -iy, iy, a]])
                    .scale_real(0.25)
            }
        }
    }

    /// Closed-form concurrence of `build(p)`.
    pub fn known_concurrence(self, p: Point) -> Option<f64> {
        let x = p.x;
        Some(match self {
            Self::Werner | Self::RotatedWerner => (2.0 * x - 1.0).max(0.0),
            Self::OneStep | Self::Maz => x,
            Self::PhiMix => (1.0 - 2.0 * x).abs(),
            Self::Qr => x.hypot(p.y),
        })
    }
}

impl fmt::Display for StateFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for StateFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let id = match s {
            "example1" => "rotated-werner",
            "example2" => "one-step",
            "example3" => "phi-mix",
            other => other,
        };
        Self::ALL
            .into_iter()
            .find(|f| f.id() == id)
            .ok_or_else(|| Error::UnknownId {
                kind: "family",
                id: s.into(),
            })
    }
}

fn bell(v: [f64; 4]) -> Mat4 {
    Mat4::outer(&v.map(|a| ONE * (a * FRAC_1_SQRT_2)))
}

pub fn psi_minus() -> Mat4 {
    bell([0.0, 1.0, -1.0, 0.0])
}

pub fn psi_plus() -> Mat4 {
    bell([0.0, 1.0, 1.0, 0.0])
}

pub fn phi_minus() -> Mat4 {
    bell([1.0, 0.0, 0.0, -1.0])
}

pub fn phi_plus() -> Mat4 {
    bell([1.0, 0.0, 0.0, 1.0])
}

/// Probability density over a family's parameters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum PdfSpec {
    /// Constant on (lower, upper].
    Uniform { lower: f64, upper: f64 },
    /// p(x) = 2x on [0, 1].
    Linear2x,
    /// p(x) = 2(1 − x) on [0, 1].
    Linear2OneMinusX,
    /// p(x) = 6x(1 − x) on [0, 1].
    Quadratic6x1mx,
    /// p(x, y) = 1/π on the unit disk.
    UniformDisk,
}

impl PdfSpec {
    pub fn arity(&self) -> usize {
        match self {
            Self::UniformDisk => 2,
            _ => 1,
        }
    }

    pub fn support(&self) -> Domain {
        match *self {
            Self::Uniform { lower, upper } => Domain::Interval { lower, upper },
            Self::UniformDisk => Domain::UnitDisk,
            _ => Domain::Interval { lower: 0.0, upper: 1.0 },
        }
    }

    pub fn density(&self, p: Point) -> f64 {
        let x = p.x;
        match *self {
            Self::Uniform { lower, upper } if x >= lower && x <= upper => 1.0 / (upper - lower),
            Self::Linear2x if (0.0..=1.0).contains(&x) => 2.0 * x,
            Self::Linear2OneMinusX if (0.0..=1.0).contains(&x) => 2.0 * (1.0 - x),
            Self::Quadratic6x1mx if (0.0..=1.0).contains(&x) => 6.0 * x * (1.0 - x),
            Self::UniformDisk if x * x + p.y * p.y <= 1.0 => 1.0 / PI,
            _ => 0.0,
        }
    }

    /// Maps a point of the unit square to the support by inverse CDF
    /// (polar coordinates for the disk). `v` is ignored in one dimension.
    pub fn transform(&self, u: f64, v: f64) -> Point {
        match *self {
            Self::Uniform { lower, upper } => Point::line(upper - (upper - lower) * u),
            Self::Linear2x => Point::line(u.sqrt()),
            Self::Linear2OneMinusX => Point::line(1.0 - (1.0 - u).sqrt()),
            // root of 3x² − 2x³ = u in [0, 1]
            Self::Quadratic6x1mx => Point::line(0.5 - ((1.0 - 2.0 * u).asin() / 3.0).sin()),
            Self::UniformDisk => {
                let (r, phi) = (u.sqrt(), 2.0 * PI * v);
                Point::plane(r * phi.cos(), r * phi.sin())
            }
        }
    }

    /// Whether the support fits in `family`'s domain.
    pub fn fits(&self, family: StateFamily) -> bool {
        match (self.support(), family.domain()) {
            (Domain::UnitDisk, Domain::UnitDisk) => true,
            (Domain::Interval { lower, upper }, Domain::Interval { lower: l, upper: u }) => lower >= l && upper <= u,
            _ => false,
        }
    }

    pub fn id(&self) -> String {
        match *self {
            Self::Uniform { lower, upper } => format!("uniform({lower},{upper}]"),
            Self::Linear2x => "2x".into(),
            Self::Linear2OneMinusX => "2(1-x)".into(),
            Self::Quadratic6x1mx => "6x(1-x)".into(),
            Self::UniformDisk => "disk".into(),
        }
    }
}

impl fmt::Display for PdfSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id())
    }
}

impl FromStr for PdfSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let unknown = || Error::UnknownId {
            kind: "pdf",
            id: s.into(),
        };
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        match compact.as_str() {
            "uniform" => return Ok(Self::Uniform { lower: 0.0, upper: 1.0 }),
            "2x" => return Ok(Self::Linear2x),
            "2(1-x)" => return Ok(Self::Linear2OneMinusX),
            "6x(1-x)" => return Ok(Self::Quadratic6x1mx),
            "disk" => return Ok(Self::UniformDisk),
            _ => {}
        }
        let inner = compact
            .strip_prefix("uniform(")
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(unknown)?;
        let (a, b) = inner.split_once(',').ok_or_else(unknown)?;
        let lower: f64 = a.parse().map_err(|_| unknown())?;
        let upper: f64 = b.parse().map_err(|_| unknown())?;
        if !(lower.is_finite() && upper.is_finite() && lower < upper) {
            return Err(Error::Config(format!("uniform interval ({lower},{upper}] is empty")));
        }
        Ok(Self::Uniform { lower, upper })
    }
}

impl TryFrom<String> for PdfSpec {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<PdfSpec> for String {
    fn from(p: PdfSpec) -> String {
        p.id()
    }
}

fn conjugate(l: &Mat4, rho: &DensityMatrix<4>) -> Result<DensityMatrix<4>> {
    validate_density((*l * *rho.matrix() * l.dagger()).hermitian_part())
}

/// b†⊗b with b = (I + iσ_x)/√2.
pub fn local_b_pair() -> Mat4 {
    let b = b_gate();
    kron(&b.dagger(), &b)
}

/// Applies b† at A and b at B.
pub fn local_b_transform(rho: &DensityMatrix<4>) -> Result<DensityMatrix<4>> {
    conjugate(&local_b_pair(), rho)
}

#[derive(Clone, Debug, PartialEq)]
pub struct StateDependentTransform {
    /// The single-qubit U; U† acts at A and U at B.
    pub u: Mat2,
    /// U†⊗U.
    pub pair: Mat4,
    pub state: DensityMatrix<4>,
}

/// Local rotation that brings qr(x, y) to
/// ((1+c)/2)|Ψ⁻⟩⟨Ψ⁻| + ((1−c)/2)|Φ⁻⟩⟨Φ⁻| with c = √(x²+y²).
/// Only the quadrant x, y ≥ 0 is supported.
pub fn state_dep_transform(x: f64, y: f64) -> Result<StateDependentTransform> {
    for (what, value) in [("x", x), ("y", y)] {
        if !(value >= 0.0) {
            return Err(Error::Domain {
                family: "qr (first quadrant)".into(),
                what: what.into(),
                value,
            });
        }
    }
    let c = x.hypot(y);
    let theta = if c == 0.0 {
        0.0
    } else {
        (0.5 + ((x + c) / (8.0 * c)).sqrt()).sqrt().min(1.0).acos()
    };
    // U = cos θ·I − i sin θ·σ_x
    let (cs, sn) = (theta.cos(), theta.sin());
    let u = Mat2::from_rows([[ONE * cs, -I * sn], [-I * sn, ONE * cs]]);
    let pair = kron(&u.dagger(), &u);
    let state = conjugate(&pair, &StateFamily::Qr.build(Point::plane(x, y))?)?;
    Ok(StateDependentTransform { u, pair, state })
}

/// The SU(2)⊗SU(2) dressing that turns CNOT on qr(x, y) into a protocol
/// whose output concurrence is 2|y|/(1+y²).
pub fn qr_dressing() -> Mat4 {
    let a = Su2Angles::new(0.0, FRAC_PI_8, 0.75 * PI).expect("angles in range");
    let b = Su2Angles::new(0.0, 3.0 * FRAC_PI_8, 0.75 * PI).expect("angles in range");
    kron(&su2_from_angles(&a), &su2_from_angles(&b))
}

pub fn apply_qr_dressing(rho: &DensityMatrix<4>) -> Result<DensityMatrix<4>> {
    conjugate(&qr_dressing(), rho)
}

/// Closed-form CNOT recurrence result.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CnotOracle {
    pub concurrence: f64,
    /// Success probability of each iteration.
    pub probabilities: Vec<f64>,
}

/// Output concurrence and success probabilities of `iterations` CNOT rounds
/// from closed forms. Where every branch is separable the branches tie and
/// the probability is 1.
pub fn cnot_oracle(family: StateFamily, p: Point, iterations: usize) -> Result<CnotOracle> {
    let unsupported = || Error::UnsupportedOracle {
        family: family.id().into(),
        iterations,
    };
    if !family.domain().contains(p) {
        return Err(Error::Domain {
            family: family.id().into(),
            what: "x".into(),
            value: p.x,
        });
    }
    let x = p.x;
    let one = |c: f64, prob: f64| {
        if c > 0.0 {
            CnotOracle {
                concurrence: c,
                probabilities: vec![prob],
            }
        } else {
            CnotOracle {
                concurrence: 0.0,
                probabilities: vec![1.0],
            }
        }
    };
    let x2 = x * x;
    match (family, iterations) {
        (StateFamily::RotatedWerner, 1) => {
            let d = 5.0 - 4.0 * x + 8.0 * x2;
            Ok(one(3.0 * (4.0 * x2 - 1.0) / d, d / 9.0))
        }
        // At x = 1 the 11 outcome is a second Bell branch and the tie sums to 1.
        (StateFamily::OneStep, 1) if x == 1.0 => Ok(one(1.0, 1.0)),
        (StateFamily::OneStep, 1) => Ok(one(if x > 0.0 { 1.0 } else { 0.0 }, x2 / 2.0)),
        (StateFamily::PhiMix, 1) => Ok(CnotOracle {
            concurrence: (1.0 - 2.0 * x).powi(2),
            probabilities: vec![1.0],
        }),
        (StateFamily::Maz, 1) => Ok(one(2.0 * x * (2.0 * x - 1.0) / (1.0 + x2), (1.0 + x2) / 2.0)),
        (StateFamily::Qr, 1) => Ok(one(2.0 * x.abs() / (1.0 + x2), (1.0 + x2) / 2.0)),
        (StateFamily::Qr, 2) if x == 0.0 => Ok(CnotOracle {
            concurrence: 0.0,
            probabilities: vec![1.0, 1.0],
        }),
        (StateFamily::Qr, 2) => {
            let q = 1.0 + 6.0 * x2 + x2 * x2;
            Ok(CnotOracle {
                concurrence: 4.0 * x.abs() * (1.0 + x2) / q,
                probabilities: vec![(1.0 + x2) / 2.0, q / (2.0 * (1.0 + x2).powi(2))],
            })
        }
        _ => Err(unsupported()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entanglement::concurrence;
    use crate::protocol::{purification_step, BranchPolicy};
    use crate::sun::cnot;

    fn conc(rho: &DensityMatrix<4>) -> f64 {
        concurrence(rho).unwrap().value()
    }

    fn grid(n: usize, lo: f64, hi: f64) -> impl Iterator<Item = f64> {
        (0..n).map(move |i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
    }

    fn disk_grid(n: usize) -> Vec<Point> {
        let mut pts = Vec::new();
        for x in grid(n, -1.0, 1.0) {
            for y in grid(n, -1.0, 1.0) {
                if x * x + y * y <= 1.0 {
                    pts.push(Point::plane(x, y));
                }
            }
        }
        pts
    }

    #[test]
    fn werner_special_points() {
        let w = |x| *StateFamily::Werner.build(Point::line(x)).unwrap().matrix();
        assert!((w(1.0) - psi_minus()).max_abs() < 1e-15);
        assert!((w(0.25) - Mat4::identity().scale_real(0.25)).max_abs() < 1e-15);
        assert!((conc(&StateFamily::Werner.build(Point::line(0.7)).unwrap()) - 0.4).abs() < 1e-12);
    }

    #[test]
    fn one_step_endpoints() {
        let f = |x| *StateFamily::OneStep.build(Point::line(x)).unwrap().matrix();
        assert!((f(1.0) - phi_minus()).max_abs() < 1e-15);
        let mut ket10 = Mat4::zeros();
        ket10[(2, 2)] = ONE;
        assert_eq!(f(0.0), ket10);
    }

    #[test]
    fn maz_at_one_is_singlet() {
        let m = StateFamily::Maz.build(Point::line(1.0)).unwrap();
        assert!((*m.matrix() - psi_minus()).max_abs() < 1e-15);
    }

    #[test]
    fn known_concurrences_match_simulation() {
        for fam in StateFamily::ALL {
            let pts: Vec<Point> = match fam.domain() {
                Domain::UnitDisk => disk_grid(12),
                Domain::Interval { .. } => grid(100, 0.0, 1.0).map(Point::line).collect(),
            };
            for p in pts {
                let rho = fam.build(p).unwrap();
                let k = fam.known_concurrence(p).unwrap();
                assert!((conc(&rho) - k).abs() <= 1e-9, "{fam} at {p:?}");
            }
        }
    }

    #[test]
    fn out_of_domain_is_rejected() {
        assert!(matches!(StateFamily::Werner.build(Point::line(1.5)), Err(Error::Domain { .. })));
        assert!(StateFamily::Qr.build(Point::plane(0.8, 0.8)).is_err());
    }

    #[test]
    fn family_ids_roundtrip() {
        for fam in StateFamily::ALL {
            assert_eq!(fam.id().parse::<StateFamily>().unwrap(), fam);
            let json = serde_json::to_string(&fam).unwrap();
            assert_eq!(json, format!("\"{}\"", fam.id()));
        }
        assert_eq!("example2".parse::<StateFamily>().unwrap(), StateFamily::OneStep);
        assert!(matches!("bogus".parse::<StateFamily>(), Err(Error::UnknownId { .. })));
    }

    #[test]
    fn pdf_ids_roundtrip() {
        for id in ["uniform(0.5,1]", "2x", "2(1-x)", "6x(1-x)", "disk"] {
            let p: PdfSpec = id.parse().unwrap();
            assert_eq!(p.id(), id);
        }
        assert_eq!("uniform".parse::<PdfSpec>().unwrap(), PdfSpec::Uniform { lower: 0.0, upper: 1.0 });
        assert!("uniform(1,0.5]".parse::<PdfSpec>().is_err());
        assert!("gauss".parse::<PdfSpec>().is_err());
    }

    #[test]
    fn inverse_cdfs_invert_the_cdf() {
        let cdfs: [(PdfSpec, fn(f64) -> f64); 4] = [
            (PdfSpec::Uniform { lower: 0.5, upper: 1.0 }, |x| 2.0 * (x - 0.5)),
            (PdfSpec::Linear2x, |x| x * x),
            (PdfSpec::Linear2OneMinusX, |x| 2.0 * x - x * x),
            (PdfSpec::Quadratic6x1mx, |x| 3.0 * x * x - 2.0 * x * x * x),
        ];
        for (pdf, cdf) in cdfs {
            for u in grid(101, 0.0, 0.999) {
                let x = pdf.transform(u, 0.0).x;
                // uniform runs from the top of the interval down
                let expect = if matches!(pdf, PdfSpec::Uniform { .. }) { 1.0 - u } else { u };
                assert!((cdf(x) - expect).abs() < 1e-12, "{pdf} u={u}");
            }
        }
        for (u, v) in [(0.3, 0.1), (0.99, 0.7)] {
            let p = PdfSpec::UniformDisk.transform(u, v);
            assert!((p.x * p.x + p.y * p.y - u).abs() < 1e-12);
        }
    }

    #[test]
    fn b_transform_identities() {
        for x in [0.0, 0.3, 0.9] {
            let w = local_b_transform(&StateFamily::Werner.build(Point::line(x)).unwrap()).unwrap();
            let r = StateFamily::RotatedWerner.build(Point::line(x)).unwrap();
            assert!((*w.matrix() - *r.matrix()).max_abs() < 1e-12);
            let m = local_b_transform(&StateFamily::Maz.build(Point::line(x)).unwrap()).unwrap();
            let o = StateFamily::OneStep.build(Point::line(x)).unwrap();
            assert!((*m.matrix() - *o.matrix()).max_abs() < 1e-12);
        }
    }

    #[test]
    fn state_dependent_transform_reaches_bell_mixture() {
        for (x, y) in [(1.0, 0.0), (0.3, 0.4), (0.5, 0.5), (0.0, 0.7), (0.1, 0.8), (0.0, 0.0)] {
            let t = state_dep_transform(x, y).unwrap();
            let c = f64::hypot(x, y);
            let target = psi_minus().scale_real((1.0 + c) / 2.0) + phi_minus().scale_real((1.0 - c) / 2.0);
            assert!((*t.state.matrix() - target).max_abs() < 1e-10, "({x},{y})");
            if c > 0.0 {
                let out = purification_step(&t.state, &cnot(), BranchPolicy::PerStateMax).unwrap();
                assert!((out.selected_concurrence - 2.0 * c / (1.0 + c * c)).abs() < 1e-10);
                assert!((out.success_probability - (1.0 + c * c) / 2.0).abs() < 1e-10);
            }
        }
        assert!(state_dep_transform(-0.1, 0.2).is_err());
    }

    #[test]
    fn dressing_swaps_the_roles_of_x_and_y() {
        for (x, y) in [(0.3, 0.5), (0.1, 0.9), (0.6, 0.2), (-0.4, -0.3)] {
            let rho = apply_qr_dressing(&StateFamily::Qr.build(Point::plane(x, y)).unwrap()).unwrap();
            let out = purification_step(&rho, &cnot(), BranchPolicy::PerStateMax).unwrap();
            let yy: f64 = y * y;
            assert!((out.selected_concurrence - 2.0 * y.abs() / (1.0 + yy)).abs() < 1e-10);
            assert!((out.success_probability - (1.0 + yy) / 2.0).abs() < 1e-10);
        }
    }

    #[test]
    fn oracle_examples() {
        let o = cnot_oracle(StateFamily::Qr, Point::plane(1.0, 0.0), 2).unwrap();
        assert!((o.concurrence - 1.0).abs() < 1e-15);
        assert!((o.probabilities[1] - 1.0).abs() < 1e-15);
        assert_eq!(cnot_oracle(StateFamily::RotatedWerner, Point::line(0.5), 1).unwrap().concurrence, 0.0);
        assert_eq!(cnot_oracle(StateFamily::Maz, Point::line(0.5), 1).unwrap().concurrence, 0.0);
        assert!(matches!(
            cnot_oracle(StateFamily::Werner, Point::line(0.7), 1),
            Err(Error::UnsupportedOracle { .. })
        ));
        assert!(cnot_oracle(StateFamily::Maz, Point::line(0.7), 2).is_err());
    }
}
