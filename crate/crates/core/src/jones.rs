//! Two-level polarization algebra in the Jones representation.
//!
//! States are complex 2-vectors in the `{|H>, |V>}` basis, optical elements
//! are complex 2x2 matrices. Everything is generic over [`Real`] so the same
//! code runs in `f64` for the production pipeline and in double-double for
//! the cross-check of the post-selected spectra.
//!
//! Post-selection convention: [`postselection_state`] returns
//! `(e^{+i phi}|H> - e^{-i phi}|V>)/sqrt(2)`. With the pre-selection
//! `(|H>+|V>)/sqrt(2)` and the coupling `exp(-i theta A)`, `A = diag(1, -1)`,
//! the transition probability is `sin^2(theta + phi)` and the weak value is
//! `i cot(phi)`. The quarter-wave-plate construction with the opposite sign of
//! `phi` is kept as [`postselection_state_unflipped`] and [`qwp_postselection`].

use std::ops::Mul;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Magnitude of `<post|pre>` at or below which a weak value is reported as undefined.
pub const OVERLAP_UNDERFLOW: f64 = 1e-300;

/// Entrywise tolerance used to set [`OpticalElement::is_unitary`] and to
/// accept a [`SystemOperator`] as Hermitian.
pub const UNITARY_TOLERANCE: f64 = 1e-12;

fn tolerance<T: Real>() -> T {
    T::lit(UNITARY_TOLERANCE).max(T::epsilon() * T::lit(64.0))
}

fn c<T: Real>(re: f64, im: f64) -> Complex<T> {
    Complex::new(T::lit(re), T::lit(im))
}

/// Fully polarized state `h|H> + v|V>`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PolarizationState<T> {
    h: Complex<T>,
    v: Complex<T>,
}

impl<T: Real> PolarizationState<T> {
    /// Builds a state from its components; the norm must be nonzero.
    pub fn new(h: Complex<T>, v: Complex<T>) -> Result<Self> {
        let s = PolarizationState { h, v };
        if s.norm_sqr() > T::zero() {
            Ok(s)
        } else {
            Err(Error::ZeroNormState)
        }
    }

    pub fn horizontal() -> Self {
        PolarizationState {
            h: c(1.0, 0.0),
            v: c(0.0, 0.0),
        }
    }

    pub fn vertical() -> Self {
        PolarizationState {
            h: c(0.0, 0.0),
            v: c(1.0, 0.0),
        }
    }

    pub fn h(&self) -> Complex<T> {
        self.h
    }

    pub fn v(&self) -> Complex<T> {
        self.v
    }

    pub fn norm_sqr(&self) -> T {
        self.h.norm_sqr() + self.v.norm_sqr()
    }

    pub fn norm(&self) -> T {
        self.norm_sqr().sqrt()
    }

    pub fn normalized(&self) -> Self {
        let n = self.norm();
        PolarizationState {
            h: self.h / n,
            v: self.v / n,
        }
    }

    /// `<self|ket>`.
    pub fn inner(&self, ket: &Self) -> Complex<T> {
        self.h.conj() * ket.h + self.v.conj() * ket.v
    }

    /// Converts to another scalar type through `f64`.
    pub fn cast<U: Real>(&self) -> PolarizationState<U> {
        let cv = |z: Complex<T>| Complex::new(U::lit(z.re.to_f64_lossy()), U::lit(z.im.to_f64_lossy()));
        PolarizationState {
            h: cv(self.h),
            v: cv(self.v),
        }
    }
}

/// Complex 2x2 matrix acting on polarization states.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OpticalElement<T> {
    entries: [[Complex<T>; 2]; 2],
    unitary: bool,
}

impl<T: Real> OpticalElement<T> {
    /// Wraps a matrix; the unitary flag is set when `M^dagger M = I` entrywise
    /// within [`UNITARY_TOLERANCE`].
    pub fn new(entries: [[Complex<T>; 2]; 2]) -> Self {
        let mut e = OpticalElement {
            entries,
            unitary: false,
        };
        e.unitary = e.unitarity_deviation() <= tolerance::<T>();
        e
    }

    pub fn identity() -> Self {
        OpticalElement {
            entries: [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]],
            unitary: true,
        }
    }

    /// Quarter-wave plate with its fast axis at -45 degrees: `(1, -i; -i, 1)/sqrt(2)`.
    pub fn quarter_wave_plate() -> Self {
        let s = T::FRAC_1_SQRT_2();
        let one = Complex::new(s, T::zero());
        let mi = Complex::new(T::zero(), -s);
        OpticalElement {
            entries: [[one, mi], [mi, one]],
            unitary: true,
        }
    }

    pub fn entries(&self) -> &[[Complex<T>; 2]; 2] {
        &self.entries
    }

    pub fn is_unitary(&self) -> bool {
        self.unitary
    }

    pub fn adjoint(&self) -> Self {
        let m = &self.entries;
        OpticalElement {
            entries: [[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]],
            unitary: self.unitary,
        }
    }

    /// `max |(M^dagger M - I)_ij|`.
    pub fn unitarity_deviation(&self) -> T {
        let p = mat_mul(&self.adjoint().entries, &self.entries);
        let mut worst = T::zero();
        for (i, row) in p.iter().enumerate() {
            for (j, z) in row.iter().enumerate() {
                let target = if i == j { T::one() } else { T::zero() };
                worst = worst.max((*z - Complex::new(target, T::zero())).norm());
            }
        }
        worst
    }

    /// `M |s>`; not renormalized.
    pub fn apply(&self, s: &PolarizationState<T>) -> PolarizationState<T> {
        let m = &self.entries;
        PolarizationState {
            h: m[0][0] * s.h + m[0][1] * s.v,
            v: m[1][0] * s.h + m[1][1] * s.v,
        }
    }
}

impl<T: Real> Mul for OpticalElement<T> {
    type Output = OpticalElement<T>;

    fn mul(self, rhs: Self) -> Self {
        let entries = mat_mul(&self.entries, &rhs.entries);
        if self.unitary && rhs.unitary {
            OpticalElement { entries, unitary: true }
        } else {
            OpticalElement::new(entries)
        }
    }
}

fn mat_mul<T: Real>(a: &[[Complex<T>; 2]; 2], b: &[[Complex<T>; 2]; 2]) -> [[Complex<T>; 2]; 2] {
    [
        [
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
        ],
        [
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        ],
    ]
}

/// Hermitian observable on the polarization qubit.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SystemOperator<T> {
    entries: [[Complex<T>; 2]; 2],
}

impl<T: Real> SystemOperator<T> {
    pub fn new(entries: [[Complex<T>; 2]; 2]) -> Result<Self> {
        let dev = [
            (entries[0][0] - entries[0][0].conj()).norm(),
            (entries[1][1] - entries[1][1].conj()).norm(),
            (entries[0][1] - entries[1][0].conj()).norm(),
        ]
        .into_iter()
        .fold(T::zero(), T::max);
        if dev <= tolerance::<T>() {
            Ok(SystemOperator { entries })
        } else {
            Err(Error::NotHermitian(dev.to_f64_lossy()))
        }
    }

    /// `|H><H| - |V><V|`, the which-path observable of the interferometer.
    pub fn which_path() -> Self {
        SystemOperator {
            entries: [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-1.0, 0.0)]],
        }
    }

    pub fn entries(&self) -> &[[Complex<T>; 2]; 2] {
        &self.entries
    }

    pub fn is_diagonal(&self) -> bool {
        self.entries[0][1] == Complex::new(T::zero(), T::zero())
            && self.entries[1][0] == Complex::new(T::zero(), T::zero())
    }

    pub fn apply(&self, s: &PolarizationState<T>) -> PolarizationState<T> {
        OpticalElement {
            entries: self.entries,
            unitary: false,
        }
        .apply(s)
    }
}

/// Weak value `<post|A|pre> / <post|pre>`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WeakValue<T>(pub Complex<T>);

impl<T: Real> WeakValue<T> {
    pub fn value(&self) -> Complex<T> {
        self.0
    }
}

/// `(|H> + |V>)/sqrt(2)`, the state behind a polarizer at 45 degrees.
pub fn preselection_state<T: Real>() -> PolarizationState<T> {
    let s = Complex::new(T::FRAC_1_SQRT_2(), T::zero());
    PolarizationState { h: s, v: s }
}

/// `(e^{i phi}|H> - e^{-i phi}|V>)/sqrt(2)`; see the module docs for the sign.
pub fn postselection_state<T: Real>(phi: T) -> PolarizationState<T> {
    postselection_state_unflipped(-phi)
}

/// `(e^{-i phi}|H> - e^{i phi}|V>)/sqrt(2)`, the closed form of the
/// quarter-wave-plate plus polarizer post-selection at angle `phi`.
pub fn postselection_state_unflipped<T: Real>(phi: T) -> PolarizationState<T> {
    let s = T::FRAC_1_SQRT_2();
    PolarizationState {
        h: Complex::from_polar(s, -phi),
        v: -Complex::from_polar(s, phi),
    }
}

/// Quarter-wave plate applied to a linear polarizer state at `phi - pi/4`.
///
/// Equals [`postselection_state_unflipped`] up to the global phase `e^{i pi/4}`.
pub fn qwp_postselection<T: Real>(phi: T) -> PolarizationState<T> {
    let a = phi - T::FRAC_PI_4();
    let linear = PolarizationState {
        h: Complex::new(a.cos(), T::zero()),
        v: Complex::new(a.sin(), T::zero()),
    };
    OpticalElement::quarter_wave_plate().apply(&linear)
}

pub fn weak_value<T: Real>(
    op: &SystemOperator<T>,
    pre: &PolarizationState<T>,
    post: &PolarizationState<T>,
) -> Result<WeakValue<T>> {
    let overlap = post.inner(pre);
    let mag = overlap.norm();
    if mag <= T::lit(OVERLAP_UNDERFLOW) {
        return Err(Error::NearOrthogonalPostselection {
            overlap: mag.to_f64_lossy(),
            threshold: OVERLAP_UNDERFLOW,
        });
    }
    Ok(WeakValue(post.inner(&op.apply(pre)) / overlap))
}

/// `exp(-i * total_phase * A)`.
///
/// Diagonal operators are exponentiated entrywise; the general Hermitian
/// case uses `A = a0 I + n.sigma`, for which
/// `exp(-i t A) = e^{-i t a0} (cos(t|n|) I - i sin(t|n|) n.sigma/|n|)`.
pub fn coupling_unitary<T: Real>(op: &SystemOperator<T>, total_phase: T) -> OpticalElement<T> {
    let m = op.entries();
    let i = Complex::<T>::i();
    if op.is_diagonal() {
        let zero = Complex::new(T::zero(), T::zero());
        return OpticalElement {
            entries: [
                [(-i * total_phase * m[0][0].re).exp(), zero],
                [zero, (-i * total_phase * m[1][1].re).exp()],
            ],
            unitary: true,
        };
    }
    let half = T::lit(0.5);
    let a0 = (m[0][0].re + m[1][1].re) * half;
    let nz = (m[0][0].re - m[1][1].re) * half;
    let nx = m[0][1].re;
    let ny = -m[0][1].im;
    let r = (nx * nx + ny * ny + nz * nz).sqrt();
    let global = (-i * total_phase * a0).exp();
    let (s, co) = (total_phase * r).sin_cos();
    let (ux, uy, uz) = (nx / r, ny / r, nz / r);
    // n.sigma / |n| = (uz, ux - i uy; ux + i uy, -uz)
    let cos_c = Complex::new(co, T::zero());
    let ms = -i * s;
    let entries = [
        [global * (cos_c + ms * uz), global * ms * Complex::new(ux, -uy)],
        [global * ms * Complex::new(ux, uy), global * (cos_c - ms * uz)],
    ];
    OpticalElement { entries, unitary: true }
}

/// `<post| element |pre>`.
pub fn transition_amplitude<T: Real>(
    post: &PolarizationState<T>,
    element: &OpticalElement<T>,
    pre: &PolarizationState<T>,
) -> Complex<T> {
    post.inner(&element.apply(pre))
}
