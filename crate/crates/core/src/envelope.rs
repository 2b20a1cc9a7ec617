//! Effective-mass envelope functions for electrons and holes confined in a
//! cuboidal dot with abrupt finite walls.
//!
//! The confinement potential is separable: each axis sees a 1-D square well
//! (0 inside, `depth` outside), and an optional electric field adds a linear
//! potential along x. Each 1-D problem is expanded in the sine eigenfunctions
//! of a hard-wall box that encloses the well and is diagonalized.
//!
//! Sign convention: an electron in a field F (kV/cm) feels +0.1·F·x meV and a
//! hole feels −0.1·F·x meV, with x in nm measured from the dot center.

use std::f64::consts::PI;

use thiserror::Error;

use crate::linalg::{eigh, LinalgError, Matrix};
use crate::units::{FIELD_ENERGY_PER_NM, HBAR2_OVER_2M0};

/// Largest basis the adaptive box is allowed to grow to.
pub const MAX_BASIS: usize = 2048;

/// Required number of barrier decay lengths between each well wall and the box wall.
const DECAY_LENGTHS: f64 = 8.0;

/// Kinetic cutoff of the basis must exceed this multiple of the potential range in the box.
const CUTOFF_FACTOR: f64 = 8.0;

/// Upper limit on the box length in units of the well width.
const MAX_BOX_RATIO: f64 = 400.0;

/// Beyond this many well widths of box, the density of basis functions per
/// width is no longer increased; the kinetic cutoff alone sets the size.
const RESOLUTION_SPAN: f64 = 12.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EnvelopeError {
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),
    #[error("invalid particle parameters: {0}")]
    InvalidParticle(String),
    #[error("invalid basis: {0}")]
    InvalidBasis(String),
    #[error("basis resolution exceeded: {required} functions needed, at most {max} allowed")]
    Resolution { required: usize, max: usize },
    #[error("{particle} ground state is unbound (energy {energy:.4} meV >= threshold {threshold:.4} meV)")]
    Unbound { particle: Particle, energy: f64, threshold: f64 },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Particle {
    Electron,
    Hole,
}

impl Particle {
    /// Sign of the field potential for this carrier.
    fn field_sign(self) -> f64 {
        match self {
            Particle::Electron => 1.0,
            Particle::Hole => -1.0,
        }
    }
}

impl std::fmt::Display for Particle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Particle::Electron => f.write_str("electron"),
            Particle::Hole => f.write_str("hole"),
        }
    }
}

/// Band parameters for one carrier type.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParticleSpec {
    /// Effective mass in units of m₀.
    pub mass: f64,
    /// Barrier height outside the dot, meV.
    pub depth: f64,
}

impl ParticleSpec {
    pub const fn new(mass: f64, depth: f64) -> Self {
        Self { mass, depth }
    }

    pub const fn default_electron() -> Self {
        Self::new(0.06, 500.0)
    }

    pub const fn default_hole() -> Self {
        Self::new(0.6, 500.0)
    }

    fn validate(&self) -> Result<(), EnvelopeError> {
        if !(self.mass > 0.0 && self.mass.is_finite()) {
            return Err(EnvelopeError::InvalidParticle(format!("mass must be positive, got {}", self.mass)));
        }
        if !(self.depth > 0.0 && self.depth.is_finite()) {
            return Err(EnvelopeError::InvalidParticle(format!("depth must be positive, got {}", self.depth)));
        }
        Ok(())
    }
}

/// A cuboidal dot. The field, when present, points along the first edge (x).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DotSpec {
    /// Edge lengths (x, y, z) in nm.
    pub size: [f64; 3],
    pub electron: ParticleSpec,
    pub hole: ParticleSpec,
    /// Bulk gap added to the confinement energies, meV.
    pub gap_energy: f64,
}

impl DotSpec {
    pub fn new(size: [f64; 3]) -> Self {
        Self {
            size,
            electron: ParticleSpec::default_electron(),
            hole: ParticleSpec::default_hole(),
            gap_energy: 0.0,
        }
    }

    pub fn cube(a: f64) -> Self {
        Self::new([a, a, a])
    }

    /// Flat cuboid with base `a` × `b` and height `h`; the field axis runs along `a`.
    pub fn flat(a: f64, b: f64, h: f64) -> Self {
        Self::new([a, b, h])
    }

    pub fn with_particles(mut self, electron: ParticleSpec, hole: ParticleSpec) -> Self {
        self.electron = electron;
        self.hole = hole;
        self
    }

    pub fn with_depths(mut self, depth: f64) -> Self {
        self.electron.depth = depth;
        self.hole.depth = depth;
        self
    }

    pub fn with_gap(mut self, gap_energy: f64) -> Self {
        self.gap_energy = gap_energy;
        self
    }

    pub fn particle(&self, which: Particle) -> ParticleSpec {
        match which {
            Particle::Electron => self.electron,
            Particle::Hole => self.hole,
        }
    }

    pub fn validate(&self) -> Result<(), EnvelopeError> {
        for (axis, &l) in ["x", "y", "z"].iter().zip(&self.size) {
            if !(l > 0.0 && l.is_finite()) {
                return Err(EnvelopeError::InvalidGeometry(format!("edge {axis} must be positive, got {l}")));
            }
        }
        if !self.gap_energy.is_finite() {
            return Err(EnvelopeError::InvalidGeometry("gap energy must be finite".into()));
        }
        self.electron.validate()?;
        self.hole.validate()
    }
}

/// Size of the hard-wall sine basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisSpec {
    /// Minimum number of sine functions per axis.
    pub n_basis: usize,
    /// Minimum ratio of box length to well width.
    pub box_factor: f64,
}

impl Default for BasisSpec {
    fn default() -> Self {
        Self { n_basis: 64, box_factor: 3.0 }
    }
}

impl BasisSpec {
    pub fn validate(&self) -> Result<(), EnvelopeError> {
        if self.n_basis < 8 {
            return Err(EnvelopeError::InvalidBasis(format!("n_basis must be >= 8, got {}", self.n_basis)));
        }
        if !(self.box_factor >= 1.5 && self.box_factor.is_finite()) {
            return Err(EnvelopeError::InvalidBasis(format!(
                "box_factor must be >= 1.5, got {}",
                self.box_factor
            )));
        }
        Ok(())
    }
}

/// Full spectrum of a 1-D well in a hard-wall sine basis.
#[derive(Debug, Clone)]
pub struct AxisSpectrum {
    /// Eigenenergies in meV, ascending, measured from the well bottom at the center.
    pub energies: Vec<f64>,
    /// Expansion coefficients of each eigenstate in the box basis.
    pub vectors: Vec<Vec<f64>>,
    /// Length of the enclosing hard-wall box, nm.
    pub box_length: f64,
    pub well_width: f64,
    /// Lowest barrier top adjacent to the well, meV.
    pub barrier: f64,
    /// Lowest potential inside the well, meV.
    pub floor: f64,
}

impl AxisSpectrum {
    pub fn ground_energy(&self) -> f64 {
        self.energies[0]
    }

    pub fn n_basis(&self) -> usize {
        self.vectors[0].len()
    }

    /// ⟨x⟩ of eigenstate `k`, nm from the well center.
    pub fn position(&self, k: usize) -> f64 {
        let c = &self.vectors[k];
        let n = c.len();
        let mut acc = 0.0;
        for i in 0..n {
            for j in (i + 1..n).step_by(2) {
                acc += 2.0 * c[i] * c[j] * position_element(i + 1, j + 1, self.box_length);
            }
        }
        acc
    }

    /// Below the barrier top and above the well floor. A ground state under
    /// the floor has slid out of the well down the field ramp.
    pub fn is_bound(&self) -> bool {
        let e = self.ground_energy();
        e < self.barrier && e > self.floor
    }

    /// ∫ ψ_a ψ_b dx between the ground states of two spectra sharing a well center.
    pub fn ground_overlap(&self, other: &AxisSpectrum) -> f64 {
        basis_overlap(&self.vectors[0], self.box_length, &other.vectors[0], other.box_length)
    }
}

/// ⟨m|x|n⟩ for box sine functions on [−B/2, B/2] (1-based indices).
fn position_element(m: usize, n: usize, b: f64) -> f64 {
    if m == n || (m + n) % 2 == 0 {
        return 0.0;
    }
    let (m, n) = (m as f64, n as f64);
    -8.0 * b * m * n / (PI * PI * (m * m - n * n).powi(2))
}

/// ∫ over the box of φ_m φ_n restricted to the well region [u1, u2] (u from the box's left wall).
fn well_overlap_matrix(n: usize, b: f64, width: f64) -> Vec<f64> {
    let u1 = 0.5 * (b - width);
    let u2 = 0.5 * (b + width);
    let k: Vec<f64> = (1..=n).map(|i| i as f64 * PI / b).collect();
    let mut s = vec![0.0; n * n];
    for i in 0..n {
        let ki = k[i];
        s[i * n + i] = ((u2 - u1) - ((2.0 * ki * u2).sin() - (2.0 * ki * u1).sin()) / (2.0 * ki)) / b;
        for j in 0..i {
            let a = ki - k[j];
            let c = ki + k[j];
            let v = (((a * u2).sin() - (a * u1).sin()) / a - ((c * u2).sin() - (c * u1).sin()) / c) / b;
            s[i * n + j] = v;
            s[j * n + i] = v;
        }
    }
    s
}

/// Inner product of two functions expanded in sine bases of (possibly different)
/// boxes centered at the same point.
fn basis_overlap(ca: &[f64], ba: f64, cb: &[f64], bb: f64) -> f64 {
    let half = 0.5 * ba.min(bb);
    let norm = 2.0 / (ba * bb).sqrt();
    // ∫_{−h}^{h} cos(αx + β) dx = 2 cos β · sin(αh)/α
    let sinc_int = |alpha: f64| if alpha.abs() * half < 1e-8 { half } else { (alpha * half).sin() / alpha };
    let mut acc = 0.0;
    for (m, &x) in ca.iter().enumerate() {
        if x == 0.0 {
            continue;
        }
        let km = (m + 1) as f64 * PI / ba;
        let pm = (m + 1) as f64 * PI / 2.0;
        for (n, &y) in cb.iter().enumerate() {
            let qn = (n + 1) as f64 * PI / bb;
            let pn = (n + 1) as f64 * PI / 2.0;
            let integral = (pm - pn).cos() * sinc_int(km - qn) - (pm + pn).cos() * sinc_int(km + qn);
            acc += x * y * norm * integral;
        }
    }
    acc
}

fn required_basis(n_min: usize, box_len: f64, width: f64, basis: &BasisSpec, v_range: f64, mass: f64) -> usize {
    let per_width = basis.n_basis as f64 / basis.box_factor;
    let by_resolution = (per_width * (box_len / width).min(RESOLUTION_SPAN)).ceil() as usize;
    let by_cutoff = (box_len / PI * (CUTOFF_FACTOR * v_range * mass / HBAR2_OVER_2M0).sqrt()).ceil() as usize;
    n_min.max(by_resolution).max(by_cutoff)
}

fn diagonalize_axis(mass: f64, depth: f64, width: f64, slope: f64, n: usize, box_len: f64) -> Result<(Vec<f64>, Vec<Vec<f64>>), EnvelopeError> {
    let s = well_overlap_matrix(n, box_len, width);
    let element = |i: usize, j: usize| {
        if i == j {
            let k = (i + 1) as f64 * PI / box_len;
            HBAR2_OVER_2M0 / mass * k * k + depth * (1.0 - s[i * n + i])
        } else {
            -depth * s[i * n + j] + slope * position_element(i + 1, j + 1, box_len)
        }
    };
    // Without a field the well is symmetric about the box center and the even
    // and odd sine functions decouple; two half-size problems are far cheaper.
    let sectors: Vec<Vec<usize>> = if slope == 0.0 {
        vec![(0..n).step_by(2).collect(), (1..n).step_by(2).collect()]
    } else {
        vec![(0..n).collect()]
    };
    let mut states: Vec<(f64, Vec<f64>)> = Vec::with_capacity(n);
    for idx in sectors.iter().filter(|v| !v.is_empty()) {
        let m = idx.len();
        let mut h = Matrix::zeros(m);
        for a in 0..m {
            for b in 0..=a {
                let v = element(idx[a], idx[b]);
                h[(a, b)] = v;
                h[(b, a)] = v;
            }
        }
        let eig = eigh(&h)?;
        for (e, v) in eig.values.into_iter().zip(eig.vectors) {
            let mut full = vec![0.0; n];
            for (&i, x) in idx.iter().zip(v) {
                full[i] = x;
            }
            states.push((e, full));
        }
    }
    states.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(states.into_iter().unzip())
}

/// Solves one axis of the separable confinement problem.
///
/// `field` is in kV/cm and enters as the potential energy +0.1·field·x meV;
/// pass a negated field for a positively charged carrier. The box is grown
/// beyond `box_factor`·`width` when the ground state's barrier penetration
/// requires it, and the basis grows with it to keep the resolution fixed.
pub fn solve_axis(mass: f64, depth: f64, width: f64, field: f64, basis: &BasisSpec) -> Result<AxisSpectrum, EnvelopeError> {
    if !(width > 0.0 && width.is_finite()) {
        return Err(EnvelopeError::InvalidGeometry(format!("well width must be positive, got {width}")));
    }
    ParticleSpec::new(mass, depth).validate()?;
    basis.validate()?;
    if !field.is_finite() {
        return Err(EnvelopeError::InvalidGeometry("field must be finite".into()));
    }

    let slope = FIELD_ENERGY_PER_NM * field;
    let barrier = depth - slope.abs() * width / 2.0;
    let floor = -slope.abs() * width / 2.0;
    let max_box = MAX_BOX_RATIO * width;
    let mut box_len = basis.box_factor * width;

    for _ in 0..16 {
        let v_range = depth + slope.abs() * box_len / 2.0;
        let n = required_basis(basis.n_basis, box_len, width, basis, v_range, mass);
        if n > MAX_BASIS {
            return Err(EnvelopeError::Resolution { required: n, max: MAX_BASIS });
        }
        let (energies, vectors) = diagonalize_axis(mass, depth, width, slope, n, box_len)?;
        let e0 = energies[0];
        let gap = barrier - e0;

        let wanted = if gap <= 0.0 {
            // Not below the barrier in this box: either unbound, or the box is
            // too tight to hold a weakly bound tail.
            (2.0 * box_len).min(max_box)
        } else {
            let kappa = (gap * mass / HBAR2_OVER_2M0).sqrt();
            let mut margin = DECAY_LENGTHS / kappa;
            if slope != 0.0 {
                // Stop short of the classical turning point on the downhill side.
                margin = margin.min(gap / slope.abs());
            }
            // A tight box overestimates the energy and hence the tail, so grow
            // at most twofold per pass and re-estimate.
            (width + 2.0 * margin).min(2.0 * box_len).min(max_box)
        };
        if wanted <= box_len * (1.0 + 1e-9) {
            return Ok(AxisSpectrum { energies, vectors, box_length: box_len, well_width: width, barrier, floor });
        }
        if gap <= 0.0 {
            let v_next = depth + slope.abs() * wanted / 2.0;
            if required_basis(basis.n_basis, wanted, width, basis, v_next, mass) > MAX_BASIS {
                // Still above the barrier in the largest affordable box.
                return Ok(AxisSpectrum { energies, vectors, box_length: box_len, well_width: width, barrier, floor });
            }
        }
        box_len = wanted;
    }
    unreachable!("box length is capped and strictly increasing")
}

/// Ground-state envelope Ω(r) = ξx(x)·ξy(y)·ξz(z) of one carrier in one dot.
#[derive(Debug, Clone)]
pub struct EnvelopeState {
    pub particle: Particle,
    /// Per-axis spectra (x, y, z).
    pub axes: [AxisSpectrum; 3],
    /// Per-axis ground energies, meV.
    pub axis_energies: [f64; 3],
    /// ⟨x⟩, ⟨y⟩, ⟨z⟩ relative to the dot center, nm.
    pub position: [f64; 3],
    pub bound: [bool; 3],
}

impl EnvelopeState {
    /// Total confinement energy, meV.
    pub fn energy(&self) -> f64 {
        self.axis_energies.iter().sum()
    }

    /// Ground-state coefficient vector along `axis` (0 = x).
    pub fn coefficients(&self, axis: usize) -> &[f64] {
        &self.axes[axis].vectors[0]
    }
}

/// Solves the ground state of `which` carrier; the field (kV/cm) acts along x.
///
/// Fails with [`EnvelopeError::Unbound`] if any axis ground state lies above
/// its barrier, or if the total energy reaches the lowest barrier top of the
/// cuboid (the continuum threshold of the three-dimensional dot).
pub fn solve_particle(dot: &DotSpec, which: Particle, field: f64, basis: &BasisSpec) -> Result<EnvelopeState, EnvelopeError> {
    dot.validate()?;
    let p = dot.particle(which);
    let fx = which.field_sign() * field;
    let x = solve_axis(p.mass, p.depth, dot.size[0], fx, basis)?;
    let y = if fx == 0.0 && dot.size[1] == dot.size[0] {
        x.clone()
    } else {
        solve_axis(p.mass, p.depth, dot.size[1], 0.0, basis)?
    };
    let z = if dot.size[2] == dot.size[1] {
        y.clone()
    } else if fx == 0.0 && dot.size[2] == dot.size[0] {
        x.clone()
    } else {
        solve_axis(p.mass, p.depth, dot.size[2], 0.0, basis)?
    };
    let axes = [x, y, z];
    let axis_energies = [axes[0].ground_energy(), axes[1].ground_energy(), axes[2].ground_energy()];
    let bound = [axes[0].is_bound(), axes[1].is_bound(), axes[2].is_bound()];
    let total: f64 = axis_energies.iter().sum();
    let threshold = axes[0].barrier;
    if bound.iter().any(|b| !b) || total >= threshold {
        return Err(EnvelopeError::Unbound { particle: which, energy: total, threshold });
    }
    let position = [axes[0].position(0), axes[1].position(0), axes[2].position(0)];
    Ok(EnvelopeState { particle: which, axes, axis_energies, position, bound })
}

/// Electron and hole ground states of one dot at one field.
#[derive(Debug, Clone)]
pub struct ExcitonSolution {
    pub electron: EnvelopeState,
    pub hole: EnvelopeState,
    pub gap_energy: f64,
}

impl ExcitonSolution {
    pub fn dipole(&self) -> [f64; 3] {
        let (e, h) = (&self.electron.position, &self.hole.position);
        [e[0] - h[0], e[1] - h[1], e[2] - h[2]]
    }

    pub fn overlap(&self) -> f64 {
        (0..3)
            .map(|a| self.electron.axes[a].ground_overlap(&self.hole.axes[a]))
            .product::<f64>()
            .abs()
    }

    pub fn energy(&self) -> f64 {
        self.gap_energy + self.electron.energy() + self.hole.energy()
    }
}

pub fn solve_exciton(dot: &DotSpec, field: f64, basis: &BasisSpec) -> Result<ExcitonSolution, EnvelopeError> {
    Ok(ExcitonSolution {
        electron: solve_particle(dot, Particle::Electron, field, basis)?,
        hole: solve_particle(dot, Particle::Hole, field, basis)?,
        gap_energy: dot.gap_energy,
    })
}

/// Exciton dipole e(⟨r⟩ₑ − ⟨r⟩ₕ) in e·nm.
pub fn exciton_dipole(dot: &DotSpec, field: f64, basis: &BasisSpec) -> Result<[f64; 3], EnvelopeError> {
    Ok(solve_exciton(dot, field, basis)?.dipole())
}

/// Electron–hole envelope overlap ∫ φₑ φₕ d³r.
pub fn eh_overlap(dot: &DotSpec, field: f64, basis: &BasisSpec) -> Result<f64, EnvelopeError> {
    Ok(solve_exciton(dot, field, basis)?.overlap())
}

/// Exciton creation energy: gap plus electron and hole confinement energies, meV.
pub fn exciton_energy(dot: &DotSpec, field: f64, basis: &BasisSpec) -> Result<f64, EnvelopeError> {
    Ok(solve_exciton(dot, field, basis)?.energy())
}

/// Splitting Δ₀ = ω_I − ω_II of the single-exciton creation energies, meV.
pub fn delta0(dot_i: &DotSpec, dot_ii: &DotSpec, field: f64, basis: &BasisSpec) -> Result<f64, EnvelopeError> {
    Ok(exciton_energy(dot_i, field, basis)? - exciton_energy(dot_ii, field, basis)?)
}
