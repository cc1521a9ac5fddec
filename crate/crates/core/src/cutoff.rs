//! C⁸ cutoff functions: the axial window 𝒳 used for periodization and the
//! radial window 𝒴_ε used to localize singular parts.

/// Coefficients of the normalized transition profile
/// p(s) = ∫₀ˢ u⁸(1−u)⁸ du / B(9, 9), expanded in powers s^(9+m).
const PROFILE_COEFFS: [f64; 9] = profile_coeffs();

/// 1 / B(9, 9) = 17! / (8!)².
const INV_BETA_9_9: f64 = 218_790.0;

const fn profile_coeffs() -> [f64; 9] {
    // C(8, m) (-1)^m / (9 + m), scaled by 1/B(9,9)
    let binom = [1.0, 8.0, 28.0, 56.0, 70.0, 56.0, 28.0, 8.0, 1.0];
    let mut out = [0.0; 9];
    let mut m = 0;
    while m < 9 {
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        out[m] = sign * binom[m] * INV_BETA_9_9 / (9.0 + m as f64);
        m += 1;
    }
    out
}

/// Monotone C⁸ step from 0 at s = 0 to 1 at s = 1.
#[derive(Clone, Copy, Debug, Default)]
pub struct SmoothStep;

impl SmoothStep {
    /// p(s), clamped outside [0, 1].
    pub fn value(s: f64) -> f64 {
        if s <= 0.0 {
            0.0
        } else if s >= 1.0 {
            1.0
        } else if s > 0.5 {
            1.0 - Self::raw(1.0 - s)
        } else {
            Self::raw(s)
        }
    }

    fn raw(s: f64) -> f64 {
        let mut acc = 0.0;
        for &c in PROFILE_COEFFS.iter().rev() {
            acc = acc * s + c;
        }
        acc * s.powi(9)
    }

    /// p′(s).
    pub fn d1(s: f64) -> f64 {
        if s <= 0.0 || s >= 1.0 {
            return 0.0;
        }
        let u = s * (1.0 - s);
        INV_BETA_9_9 * u.powi(8)
    }

    /// p″(s).
    pub fn d2(s: f64) -> f64 {
        if s <= 0.0 || s >= 1.0 {
            return 0.0;
        }
        let u = s * (1.0 - s);
        INV_BETA_9_9 * 8.0 * u.powi(7) * (1.0 - 2.0 * s)
    }

    pub fn eval(s: f64, order: u8) -> f64 {
        match order {
            0 => Self::value(s),
            1 => Self::d1(s),
            2 => Self::d2(s),
            _ => panic!("cutoff derivatives are provided through order 2"),
        }
    }
}

/// 𝒳(t): equal to 1 for |t| ≤ c and to 0 for |t| ≥ (c + c̃)/2. Even in t.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AxialCutoff {
    c: f64,
    width: f64,
}

impl AxialCutoff {
    pub fn new(c: f64, c_tilde: f64) -> Self {
        Self {
            c,
            width: 0.5 * (c_tilde - c),
        }
    }

    /// Outer edge (c + c̃)/2 of the support.
    pub fn support_end(&self) -> f64 {
        self.c + self.width
    }

    pub fn inner_edge(&self) -> f64 {
        self.c
    }

    pub fn eval(&self, t: f64, order: u8) -> f64 {
        let s = (t.abs() - self.c) / self.width;
        match order {
            0 => 1.0 - SmoothStep::value(s),
            1 => -t.signum() * SmoothStep::d1(s) / self.width,
            2 => -SmoothStep::d2(s) / (self.width * self.width),
            _ => panic!("cutoff derivatives are provided through order 2"),
        }
    }
}

/// 𝒴_ε(t) for t ≥ 0: equal to 1 on [0, ε] and to 0 on [2ε, ∞).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RadialCutoff {
    eps: f64,
}

impl RadialCutoff {
    pub fn new(eps: f64) -> Self {
        Self { eps }
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn support_end(&self) -> f64 {
        2.0 * self.eps
    }

    pub fn eval(&self, t: f64, order: u8) -> f64 {
        let s = (t - self.eps) / self.eps;
        match order {
            0 => 1.0 - SmoothStep::value(s),
            1 => -SmoothStep::d1(s) / self.eps,
            2 => -SmoothStep::d2(s) / (self.eps * self.eps),
            _ => panic!("cutoff derivatives are provided through order 2"),
        }
    }

    /// (𝒴, 𝒴′, 𝒴″) at t.
    #[inline]
    pub fn eval_all(&self, t: f64) -> (f64, f64, f64) {
        let s = (t - self.eps) / self.eps;
        if s <= 0.0 {
            return (1.0, 0.0, 0.0);
        }
        if s >= 1.0 {
            return (0.0, 0.0, 0.0);
        }
        (
            1.0 - SmoothStep::value(s),
            -SmoothStep::d1(s) / self.eps,
            -SmoothStep::d2(s) / (self.eps * self.eps),
        )
    }
}
