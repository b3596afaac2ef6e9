//! Gell-Mann generators and Euler-angle charts of SU(4) and SU(2).

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use serde::{Deserialize, Serialize};

use crate::dual::DualMatrix;
use crate::error::{Error, Result};
use crate::qmat::{Mat2, Mat4, C64, I, ONE, ZERO};

/// Number of Euler angles of SU(4).
pub const ANGLE_COUNT: usize = 15;

/// Generator index of each factor e^{iσ_g α_k} in the Euler product.
pub const EULER_GENERATORS: [usize; ANGLE_COUNT] = [3, 2, 3, 5, 3, 10, 3, 2, 3, 5, 3, 2, 3, 8, 15];

/// Gell-Mann type generator σ_i of SU(4), 1 ≤ i ≤ 15 (σ_0 is the identity).
pub fn gellmann(i: usize) -> Result<Mat4> {
    let sym = |p: usize, q: usize| {
        let mut m = Mat4::zeros();
        m[(p, q)] = ONE;
        m[(q, p)] = ONE;
        m
    };
    let anti = |p: usize, q: usize| {
        let mut m = Mat4::zeros();
        m[(p, q)] = -I;
        m[(q, p)] = I;
        m
    };
    let s3 = 1.0 / 3f64.sqrt();
    let s6 = 1.0 / 6f64.sqrt();
    Ok(match i {
        0 => Mat4::identity(),
        1 => sym(0, 1),
        2 => anti(0, 1),
        3 => Mat4::from_real([[1.0, 0.0, 0.0, 0.0], [0.0, -1.0, 0.0, 0.0], [0.0; 4], [0.0; 4]]),
        4 => sym(0, 2),
        5 => anti(0, 2),
        6 => sym(1, 2),
        7 => anti(1, 2),
        8 => Mat4::diagonal([ONE * s3, ONE * s3, ONE * (-2.0 * s3), ZERO]),
        9 => sym(0, 3),
        10 => anti(0, 3),
        11 => sym(1, 3),
        12 => anti(1, 3),
        13 => sym(2, 3),
        14 => anti(2, 3),
        15 => Mat4::diagonal([ONE * s6, ONE * s6, ONE * s6, ONE * (-3.0 * s6)]),
        _ => return Err(Error::GellMannIndex(i)),
    })
}

/// e^{iασ_i} in closed form, for the generators used by the Euler chart.
pub fn exp_generator(i: usize, alpha: f64) -> Result<Mat4> {
    match i {
        2 | 3 | 5 | 10 => {
            // σ³ = σ, so e^{iασ} = I + (cos α − 1)σ² + i sin α σ
            let sigma = gellmann(i)?;
            let sq = sigma * sigma;
            Ok(Mat4::identity() + sq.scale_real(alpha.cos() - 1.0) + sigma.scale(I * alpha.sin()))
        }
        8 | 15 => {
            let sigma = gellmann(i)?;
            Ok(Mat4::from_fn(|r, c| {
                if r == c {
                    (I * (alpha * sigma[(r, r)].re)).exp()
                } else {
                    ZERO
                }
            }))
        }
        _ => Err(Error::UnsupportedGenerator(i)),
    }
}

/// Lower and upper bound of every Euler angle.
pub fn angle_bounds() -> [(f64, f64); ANGLE_COUNT] {
    std::array::from_fn(|k| match k {
        13 => (0.0, PI / 3f64.sqrt()),
        14 => (0.0, PI / 6f64.sqrt()),
        k if k % 2 == 0 => (0.0, PI),
        _ => (0.0, FRAC_PI_2),
    })
}

/// Euler angles of an SU(4) element, guaranteed to lie in the chart's box.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct GateAngles([f64; ANGLE_COUNT]);

impl GateAngles {
    pub fn new(alpha: [f64; ANGLE_COUNT]) -> Result<Self> {
        for (k, ((lower, upper), &value)) in angle_bounds().iter().zip(alpha.iter()).enumerate() {
            if !(value >= *lower && value <= *upper) {
                return Err(Error::AngleOutOfBounds {
                    component: k + 1,
                    value,
                    lower: *lower,
                    upper: *upper,
                });
            }
        }
        Ok(Self(alpha))
    }

    /// All angles zero: the identity gate.
    pub fn identity() -> Self {
        Self([0.0; ANGLE_COUNT])
    }

    pub fn as_array(&self) -> &[f64; ANGLE_COUNT] {
        &self.0
    }

    /// Component α_k with the 1-based numbering of the chart.
    pub fn component(&self, k: usize) -> f64 {
        self.0[k - 1]
    }
}

impl TryFrom<Vec<f64>> for GateAngles {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        let arr: [f64; ANGLE_COUNT] = v
            .try_into()
            .map_err(|v: Vec<f64>| Error::Config(format!("expected {ANGLE_COUNT} angles, got {}", v.len())))?;
        Self::new(arr)
    }
}

impl From<GateAngles> for Vec<f64> {
    fn from(a: GateAngles) -> Self {
        a.0.to_vec()
    }
}

/// Euler-chart angles of e^{−i3π/4}·CNOT.
pub fn cnot_angles() -> GateAngles {
    let mut a = [0.0; ANGLE_COUNT];
    a[2] = FRAC_PI_4;
    a[4] = FRAC_PI_4;
    a[6] = FRAC_PI_4;
    a[3] = FRAC_PI_2;
    a[5] = FRAC_PI_2;
    a[9] = FRAC_PI_2;
    GateAngles(a)
}

/// CNOT with the first qubit as control, as a U(4) matrix.
///
/// Relation to the chart: `cnot() = e^{i3π/4} · su4_from_angles(&cnot_angles())`.
pub fn cnot() -> Mat4 {
    Mat4::from_real([
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
        [0.0, 0.0, 1.0, 0.0],
    ])
}

pub fn su4_from_angles(a: &GateAngles) -> Mat4 {
    euler_product(&a.0)
}

/// The ordered Euler product for an arbitrary angle vector (no bounds check).
pub(crate) fn euler_product(alpha: &[f64; ANGLE_COUNT]) -> Mat4 {
    EULER_GENERATORS
        .iter()
        .zip(alpha)
        .fold(Mat4::identity(), |acc, (&g, &x)| acc * exp_generator(g, x).expect("chart generator"))
}

/// Euler product together with its 15 partial derivatives ∂U/∂α_k.
pub(crate) fn euler_product_dual(alpha: &[f64; ANGLE_COUNT]) -> DualMatrix<4> {
    let mut acc = DualMatrix::constant(Mat4::identity(), ANGLE_COUNT);
    for (k, (&g, &x)) in EULER_GENERATORS.iter().zip(alpha).enumerate() {
        let e = exp_generator(g, x).expect("chart generator");
        let de = gellmann(g).expect("chart generator").scale(I) * e;
        acc = acc.mul(&DualMatrix::seeded(e, k, de, ANGLE_COUNT));
    }
    acc
}

/// Euler angles of SU(2): U = e^{iσ_z α₁} e^{iσ_y α₂} e^{iσ_z α₃}.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Su2Angles {
    alpha: [f64; 3],
}

impl Su2Angles {
    pub fn new(a1: f64, a2: f64, a3: f64) -> Result<Self> {
        let bounds = [(0.0, PI), (0.0, FRAC_PI_2), (0.0, 2.0 * PI)];
        for (k, (&v, (lo, hi))) in [a1, a2, a3].iter().zip(bounds).enumerate() {
            if !(v >= lo && v <= hi) {
                return Err(Error::AngleOutOfBounds {
                    component: k + 1,
                    value: v,
                    lower: lo,
                    upper: hi,
                });
            }
        }
        Ok(Self { alpha: [a1, a2, a3] })
    }

    pub fn as_array(&self) -> [f64; 3] {
        self.alpha
    }
}

pub fn su2_from_angles(a: &Su2Angles) -> Mat2 {
    let [a1, a2, a3] = a.alpha;
    let rz = |t: f64| Mat2::diagonal([(I * t).exp(), (-I * t).exp()]);
    // e^{iσ_y t} = cos t·I + i sin t·σ_y = [[cos, sin], [−sin, cos]]
    let ry = |t: f64| Mat2::from_real([[t.cos(), t.sin()], [-t.sin(), t.cos()]]);
    rz(a1) * ry(a2) * rz(a3)
}

/// b = (I + iσ_x)/√2.
pub fn b_gate() -> Mat2 {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    Mat2::from_rows([[C64::new(s, 0.0), C64::new(0.0, s)], [C64::new(0.0, s), C64::new(s, 0.0)]])
}
