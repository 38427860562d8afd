//! Synthesis of the GMHBT high-pass kernel.
//!
//! The kernel is found by sampling a composite desired response on a
//! first-quadrant frequency lattice, assembling a zero-phase cosine basis
//! over the unique coefficients of an 8-fold symmetric kernel, and solving
//! the weighted least-squares problem subject to a DC-gain equality
//! constraint.

mod kernel;
mod solver;

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

pub use kernel::{assemble_kernel, orbit, unique_indices, Kernel2D, REFERENCE_COEFFS_N5};
pub use solver::{
    solve_constrained, solve_constrained_detailed, solve_lsq, LsqSystem, Mat, Solution,
    MAX_CONDITION_ESTIMATE,
};

/// Knee constant of the desired high-pass response; places the -3 dB point
/// at the cutoff radius.
pub const DENOM_RIPPLE: f64 = 0.4142;

#[derive(Debug, Error)]
pub enum DesignError {
    #[error("invalid design parameters: {0}")]
    InvalidSpec(String),
    #[error("composite target response is identically zero")]
    DegenerateTarget,
    #[error("system is rank deficient (condition estimate {0:.3e})")]
    RankDeficient(f64),
    #[error("equality constraints are mutually inconsistent")]
    InfeasibleConstraint,
    #[error("coefficient vector has length {got}, expected {expected}")]
    LengthMismatch { got: usize, expected: usize },
    #[error("malformed kernel file: {0}")]
    MalformedKernel(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Which denominator the desired high-pass response uses.
///
/// The [`DenomForm::Butterworth`] form raises the squared radius to the
/// response order in the denominator as well, which keeps the knee at the
/// cutoff for every order; [`DenomForm::Literal`] keeps the radius term at
/// the first power. The two agree at order 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DenomForm {
    #[default]
    Butterworth,
    Literal,
}

impl fmt::Display for DenomForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DenomForm::Butterworth => "butterworth",
            DenomForm::Literal => "literal",
        })
    }
}

impl FromStr for DenomForm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "butterworth" => Ok(DenomForm::Butterworth),
            "literal" => Ok(DenomForm::Literal),
            other => Err(format!(
                "unknown denominator form {other:?}; expected \"butterworth\" or \"literal\""
            )),
        }
    }
}

/// All parameters of one kernel design.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignSpec {
    /// Odd kernel side length.
    pub size: usize,
    /// Slope parameter of the odd profile; the zero-crossing slope magnitude
    /// is half this value.
    pub sigma_w: f64,
    /// Half-width of the square region of support.
    pub support_w: f64,
    /// Standard deviation of the isotropic Gaussian envelope.
    pub sigma_g: f64,
    /// Cutoff radius in radians, inside `(0, pi)`.
    pub omega_c: f64,
    /// Order of the desired-response knee.
    pub response_order: u32,
    /// Denominator form of the desired response.
    pub denom_form: DenomForm,
    /// Lattice point counts along each frequency axis.
    pub grid_m: usize,
    pub grid_k: usize,
    /// Weights applied to pass-band and stop-band lattice points. The
    /// transition annulus between them carries zero weight.
    pub weight_pass: f64,
    pub weight_stop: f64,
    /// Required sum of all kernel coefficients. Zero keeps the response of
    /// constant images identically zero.
    pub dc_gain: f64,
}

impl DesignSpec {
    /// Default design for a given odd kernel size: support matching the
    /// kernel extent, envelope deviation of half the support, cutoff at
    /// `pi/4`, order-2 knee, a 33x33 lattice, and unit band weights.
    pub fn for_size(size: usize) -> Self {
        let support_w = (size.saturating_sub(1) / 2) as f64;
        Self {
            size,
            sigma_w: 0.7,
            support_w,
            sigma_g: (support_w / 2.0).max(f64::MIN_POSITIVE),
            omega_c: PI / 4.0,
            response_order: 2,
            denom_form: DenomForm::Butterworth,
            grid_m: 33,
            grid_k: 33,
            weight_pass: 1.0,
            weight_stop: 1.0,
            dc_gain: 0.0,
        }
    }

    /// Same design at a different kernel size; the support half-width and
    /// envelope deviation are rederived from the new size, every other
    /// parameter is kept.
    pub fn resized(&self, size: usize) -> Self {
        let support_w = (size.saturating_sub(1) / 2) as f64;
        Self {
            size,
            support_w,
            sigma_g: (support_w / 2.0).max(f64::MIN_POSITIVE),
            ..self.clone()
        }
    }

    /// Half-width of the kernel support in taps.
    pub fn half(&self) -> usize {
        (self.size.saturating_sub(1)) / 2
    }

    /// Number of unique coefficients under 8-fold symmetry.
    pub fn unknown_count(&self) -> usize {
        let half = self.half();
        (half + 1) * (half + 2) / 2
    }

    pub fn validate(&self) -> Result<(), DesignError> {
        let fail = |msg: String| Err(DesignError::InvalidSpec(msg));
        if self.size.is_multiple_of(2) || self.size < 3 {
            return fail(format!("size must be odd and at least 3, got {}", self.size));
        }
        for (name, value) in [
            ("sigma_w", self.sigma_w),
            ("support_w", self.support_w),
            ("sigma_g", self.sigma_g),
            ("weight_pass", self.weight_pass),
            ("weight_stop", self.weight_stop),
        ] {
            if !(value.is_finite() && value > 0.0) {
                return fail(format!("{name} must be a positive finite number, got {value}"));
            }
        }
        if !(self.omega_c.is_finite() && self.omega_c > 0.0 && self.omega_c < PI) {
            return fail(format!("omega_c must lie in (0, pi), got {}", self.omega_c));
        }
        if self.response_order < 1 {
            return fail("response_order must be at least 1".into());
        }
        if self.grid_m < self.size || self.grid_k < self.size {
            return fail(format!(
                "grid counts {}x{} must each be at least the kernel size {}",
                self.grid_m, self.grid_k, self.size
            ));
        }
        if self.grid_m * self.grid_k < self.unknown_count() {
            return fail("frequency grid smaller than the number of unknowns".into());
        }
        if !self.dc_gain.is_finite() {
            return fail("dc_gain must be finite".into());
        }
        Ok(())
    }
}

/// Band label of one lattice point relative to the cutoff annulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Band {
    Pass,
    Stop,
    Transition,
}

/// Frequency lattice over the first quadrant `[0, pi]^2`.
#[derive(Debug, Clone)]
pub struct FrequencyGrid {
    pub points: Vec<(f64, f64)>,
    pub bands: Vec<Band>,
}

impl FrequencyGrid {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Spatial profile: an isotropic Gaussian envelope times an odd sigmoid in
/// `x1 + x2`, zero outside the square support of half-width `support_w`.
///
/// The sigmoid `(1 - e^u) / (1 + e^u)` is evaluated as `-tanh(u / 2)`, its
/// overflow-free equivalent, so the function is total on finite inputs.
pub fn gmhbt_sample(x1: f64, x2: f64, spec: &DesignSpec) -> f64 {
    if x1.abs() > spec.support_w || x2.abs() > spec.support_w {
        return 0.0;
    }
    let envelope = (-(x1 * x1 + x2 * x2) / (2.0 * spec.sigma_g * spec.sigma_g)).exp();
    let u = spec.sigma_w * (x1 + x2);
    -envelope * (0.5 * u).tanh()
}

/// Desired isotropic high-pass response at one frequency point.
pub fn desired_hp_response(omega1: f64, omega2: f64, spec: &DesignSpec) -> f64 {
    let r = omega1 * omega1 + omega2 * omega2;
    let order = spec.response_order as i32;
    let numerator = r.powi(order);
    let knee = DENOM_RIPPLE * spec.omega_c.powi(2 * order);
    match spec.denom_form {
        DenomForm::Butterworth => numerator / (knee + numerator),
        DenomForm::Literal => numerator / (knee + r),
    }
}

/// Magnitude of the discrete-space Fourier transform of the windowed
/// profile, sampled at each lattice point. The sum runs over the integer
/// lattice points of the support square.
pub fn gmhbt_frequency_response(spec: &DesignSpec, grid: &FrequencyGrid) -> Vec<f64> {
    let reach = spec.support_w.ceil() as i64;
    let mut samples = Vec::new();
    for a in -reach..=reach {
        for b in -reach..=reach {
            samples.push((a as f64, b as f64, gmhbt_sample(a as f64, b as f64, spec)));
        }
    }
    grid.points
        .iter()
        .map(|&(w1, w2)| {
            let mut re = 0.0;
            let mut im = 0.0;
            for &(a, b, v) in &samples {
                let phase = w1 * a + w2 * b;
                re += v * phase.cos();
                im -= v * phase.sin();
            }
            re.hypot(im)
        })
        .collect()
}

/// The design target `D'`: the desired high-pass response multiplied by the
/// profile's frequency-response magnitude, rescaled so the maximum over the
/// lattice is exactly 1.
pub fn composite_target(spec: &DesignSpec, grid: &FrequencyGrid) -> Result<Vec<f64>, DesignError> {
    let magnitude = gmhbt_frequency_response(spec, grid);
    let mut target: Vec<f64> = grid
        .points
        .iter()
        .zip(&magnitude)
        .map(|(&(w1, w2), &g)| desired_hp_response(w1, w2, spec) * g)
        .collect();
    let max = target.iter().fold(0.0f64, |m, &v| m.max(v));
    if max <= 0.0 {
        return Err(DesignError::DegenerateTarget);
    }
    for v in &mut target {
        *v /= max;
    }
    Ok(target)
}

/// Uniform lattice over `[0, pi]^2` (first quadrant only; the basis is
/// fully symmetric). Points with radius below `0.9 * omega_c` are labeled
/// stop, above `1.1 * omega_c` pass, and transition in between.
pub fn build_grid(spec: &DesignSpec) -> FrequencyGrid {
    assert!(
        spec.grid_m >= 2 && spec.grid_k >= 2,
        "grid needs at least 2 points per axis"
    );
    let count = spec.grid_m * spec.grid_k;
    let mut points = Vec::with_capacity(count);
    let mut bands = Vec::with_capacity(count);
    for m in 0..spec.grid_m {
        let w1 = PI * m as f64 / (spec.grid_m - 1) as f64;
        for n in 0..spec.grid_k {
            let w2 = PI * n as f64 / (spec.grid_k - 1) as f64;
            let radius = w1.hypot(w2);
            let band = if radius < 0.9 * spec.omega_c {
                Band::Stop
            } else if radius > 1.1 * spec.omega_c {
                Band::Pass
            } else {
                Band::Transition
            };
            points.push((w1, w2));
            bands.push(band);
        }
    }
    FrequencyGrid { points, bands }
}

/// Assembles the zero-phase cosine basis and the band weights.
///
/// Column `p` holds, at each lattice point, the sum of
/// `cos(w1 * a + w2 * b)` over the distinct symmetry images `(a, b)` of the
/// p-th unique coefficient, so `A * g` is the exact real frequency response
/// of the symmetric kernel. The returned system has an empty target and no
/// constraints.
pub fn build_basis_matrix(spec: &DesignSpec, grid: &FrequencyGrid) -> LsqSystem {
    let uniq = unique_indices(spec.half());
    let orbits: Vec<Vec<(isize, isize)>> = uniq.iter().map(|&(i, j)| orbit(i, j)).collect();
    let mut basis = Mat::zeros(grid.len(), uniq.len());
    for (r, &(w1, w2)) in grid.points.iter().enumerate() {
        for (p, images) in orbits.iter().enumerate() {
            let value: f64 = images
                .iter()
                .map(|&(a, b)| (w1 * a as f64 + w2 * b as f64).cos())
                .sum();
            basis.set(r, p, value);
        }
    }
    let weights = grid
        .bands
        .iter()
        .map(|band| match band {
            Band::Pass => spec.weight_pass,
            Band::Stop => spec.weight_stop,
            Band::Transition => 0.0,
        })
        .collect();
    LsqSystem::unconstrained(basis, weights, Vec::new())
}

/// A designed kernel together with solver diagnostics.
#[derive(Debug, Clone)]
pub struct DesignOutcome {
    pub kernel: Kernel2D,
    /// Number of unique coefficients solved for.
    pub unknown_count: usize,
    /// Diagonal-ratio condition estimate of the factorized system.
    pub condition_estimate: f64,
}

/// Runs the full design pipeline: lattice, composite target, cosine basis,
/// DC-gain constraint, constrained solve, kernel assembly.
pub fn design_gmhbt_hp(spec: &DesignSpec) -> Result<Kernel2D, DesignError> {
    Ok(design_gmhbt_hp_detailed(spec)?.kernel)
}

/// [`design_gmhbt_hp`] plus solver diagnostics.
pub fn design_gmhbt_hp_detailed(spec: &DesignSpec) -> Result<DesignOutcome, DesignError> {
    spec.validate()?;
    let grid = build_grid(spec);
    let target = composite_target(spec, &grid)?;
    let mut sys = build_basis_matrix(spec, &grid);
    sys.target = target;
    // The kernel sum expressed on unique coefficients: each one counts with
    // its orbit multiplicity.
    let dc_row: Vec<f64> = unique_indices(spec.half())
        .iter()
        .map(|&(i, j)| orbit(i, j).len() as f64)
        .collect();
    sys.push_constraint(dc_row, spec.dc_gain);
    let solved = solve_constrained_detailed(&sys)?;
    let kernel = assemble_kernel(&solved.coefficients, spec.size)?;
    Ok(DesignOutcome {
        unknown_count: solved.coefficients.len(),
        condition_estimate: solved.condition_estimate,
        kernel,
    })
}
