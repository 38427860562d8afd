//! Odd-sized square FIR kernels and their on-disk text format.

use std::collections::BTreeSet;
use std::fs;
use std::io::{self, BufRead, Write};
use std::path::Path;

use super::DesignError;

/// A real impulse response on an odd square support.
///
/// Coefficients are stored row-major; the signed offsets `(di, dj)` used by
/// [`Kernel2D::at`] run over `[-half, half]` with the center at `(0, 0)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Kernel2D {
    size: usize,
    coeffs: Vec<f64>,
}

impl Kernel2D {
    pub fn new(size: usize, coeffs: Vec<f64>) -> Result<Self, DesignError> {
        if size.is_multiple_of(2) || size == 0 {
            return Err(DesignError::InvalidSpec(format!(
                "kernel size must be odd, got {size}"
            )));
        }
        if coeffs.len() != size * size {
            return Err(DesignError::LengthMismatch {
                got: coeffs.len(),
                expected: size * size,
            });
        }
        if coeffs.iter().any(|v| !v.is_finite()) {
            return Err(DesignError::InvalidSpec(
                "kernel coefficients must be finite".into(),
            ));
        }
        Ok(Self { size, coeffs })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Half-width of the support, `(size - 1) / 2`.
    pub fn half(&self) -> usize {
        (self.size - 1) / 2
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Coefficient at signed offsets from the center; `di` selects the row.
    #[inline]
    pub fn at(&self, di: isize, dj: isize) -> f64 {
        let half = self.half() as isize;
        debug_assert!(di.abs() <= half && dj.abs() <= half);
        self.coeffs[((di + half) as usize) * self.size + (dj + half) as usize]
    }

    /// Sum of all coefficients (the DC gain of the zero-phase response).
    pub fn sum(&self) -> f64 {
        self.coeffs.iter().sum()
    }

    /// Writes the text form: a `<rows> <cols>` line, then one line per row of
    /// space-separated coefficients with 17 significant digits so that
    /// reading the file back reproduces every value exactly.
    pub fn write_text(&self, out: &mut impl Write) -> io::Result<()> {
        writeln!(out, "{} {}", self.size, self.size)?;
        for row in self.coeffs.chunks(self.size) {
            let line: Vec<String> = row.iter().map(|v| format!("{v:.16e}")).collect();
            writeln!(out, "{}", line.join(" "))?;
        }
        Ok(())
    }

    /// Parses the text form produced by [`Kernel2D::write_text`].
    pub fn read_text(input: impl BufRead) -> Result<Self, DesignError> {
        let mut tokens = Vec::new();
        for line in input.lines() {
            tokens.extend(line?.split_whitespace().map(str::to_owned));
        }
        let mut it = tokens.iter();
        let rows: usize = it
            .next()
            .ok_or_else(|| DesignError::MalformedKernel("empty kernel file".into()))?
            .parse()
            .map_err(|_| DesignError::MalformedKernel("bad row count".into()))?;
        let cols: usize = it
            .next()
            .ok_or_else(|| DesignError::MalformedKernel("missing column count".into()))?
            .parse()
            .map_err(|_| DesignError::MalformedKernel("bad column count".into()))?;
        if rows != cols {
            return Err(DesignError::MalformedKernel(format!(
                "kernel must be square, got {rows}x{cols}"
            )));
        }
        let mut coeffs = Vec::with_capacity(rows * cols);
        for tok in it {
            let v: f64 = tok
                .parse()
                .map_err(|_| DesignError::MalformedKernel(format!("bad coefficient {tok:?}")))?;
            coeffs.push(v);
        }
        if coeffs.len() != rows * cols {
            return Err(DesignError::MalformedKernel(format!(
                "expected {} coefficients, found {}",
                rows * cols,
                coeffs.len()
            )));
        }
        Self::new(rows, coeffs)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), DesignError> {
        let mut buf = Vec::new();
        self.write_text(&mut buf)?;
        fs::write(path, buf)?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, DesignError> {
        let bytes = fs::read(path)?;
        Self::read_text(io::Cursor::new(bytes))
    }
}

/// Unique coefficient positions `(i, j)` with `0 <= j <= i <= half`, in the
/// order the solver expects. The count is `(half + 1)(half + 2) / 2`.
pub fn unique_indices(half: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity((half + 1) * (half + 2) / 2);
    for i in 0..=half {
        for j in 0..=i {
            out.push((i, j));
        }
    }
    out
}

/// Distinct images of `(i, j)` under the 8-fold symmetry group
/// (sign flips on either axis plus the diagonal swap).
pub fn orbit(i: usize, j: usize) -> Vec<(isize, isize)> {
    let mut set = BTreeSet::new();
    for (a, b) in [(i as isize, j as isize), (j as isize, i as isize)] {
        for sa in [1isize, -1] {
            for sb in [1isize, -1] {
                set.insert((sa * a, sb * b));
            }
        }
    }
    set.into_iter().collect()
}

/// Position of `(i, j)` (with `i >= j`) inside [`unique_indices`].
#[inline]
pub(crate) fn unique_position(i: usize, j: usize) -> usize {
    i * (i + 1) / 2 + j
}

/// Expands the unique-coefficient vector of an 8-fold symmetric kernel to
/// the full matrix. Symmetric entries are bitwise copies of one another.
pub fn assemble_kernel(g: &[f64], size: usize) -> Result<Kernel2D, DesignError> {
    if size.is_multiple_of(2) || size == 0 {
        return Err(DesignError::InvalidSpec(format!(
            "kernel size must be odd, got {size}"
        )));
    }
    let half = (size - 1) / 2;
    let expected = (half + 1) * (half + 2) / 2;
    if g.len() != expected {
        return Err(DesignError::LengthMismatch {
            got: g.len(),
            expected,
        });
    }
    let mut coeffs = vec![0.0; size * size];
    for r in 0..size {
        for c in 0..size {
            let i = (r as isize - half as isize).unsigned_abs();
            let j = (c as isize - half as isize).unsigned_abs();
            coeffs[r * size + c] = g[unique_position(i.max(j), i.min(j))];
        }
    }
    Kernel2D::new(size, coeffs)
}

/// Frozen 5x5 reference coefficient set. The design tests assert only the
/// pattern it exhibits (equal corners, 8-fold symmetry, zero center), not
/// numeric agreement with freshly designed kernels.
pub const REFERENCE_COEFFS_N5: [[f64; 5]; 5] = [
    [0.8854, 0.7818, 0.6044, 0.7818, 0.8854],
    [0.7818, 0.6044, 0.3364, 0.6044, 0.7818],
    [0.6044, 0.3364, 0.0, 0.3364, 0.6044],
    [0.7818, 0.6044, 0.3364, 0.6044, 0.7818],
    [0.8854, 0.7818, 0.6044, 0.7818, 0.8854],
];
