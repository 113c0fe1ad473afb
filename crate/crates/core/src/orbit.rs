//! Physical trajectories reconstructed from the branch, figure export and
//! an independent (non-rigorous) ODE cross-check.
//!
//! Body `j` sits at `U_j(t) = U(t + 4πj/3)` in the rotating frame, with
//! `U = L_√a u`. The inertial positions are `q_j(t) = e^{-Ω J̄ t} U_j(t)`.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::io;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use ode_solvers::{Dop853, SVector, System};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{Field, State};
use crate::series::FourierSlice;

/// Tolerance for a slightly negative `a(Ω)` produced by rounding.
pub const SCALE_TOL: f64 = 1e-12;
/// Pairwise distance below which the oracle reports a collision.
pub const COLLISION_DIST: f64 = 1e-8;

#[derive(Debug, Error)]
pub enum OrbitError {
    #[error("Ω = {0} outside [0, 1]")]
    OmegaOutOfRange(f64),
    #[error("a(Ω) = {0:e} is negative; no real reconstruction")]
    NegativeScale(f64),
    #[error("need at least 2 samples, got {0}")]
    TooFewSamples(usize),
    #[error("bodies {i} and {j} within {dist:e} at t = {t}")]
    CloseEncounter { i: usize, j: usize, t: f64, dist: f64 },
    #[error("integration failed: {0}")]
    Integration(String),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, OrbitError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Frame {
    Rotating,
    Inertial,
}

impl Frame {
    pub fn name(self) -> &'static str {
        match self {
            Frame::Rotating => "rotating",
            Frame::Inertial => "inertial",
        }
    }
}

impl FromStr for Frame {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "rotating" => Ok(Frame::Rotating),
            "inertial" => Ok(Frame::Inertial),
            _ => Err(format!("unknown frame `{s}` (rotating or inertial)")),
        }
    }
}

pub type Vec3 = [f64; 3];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub t: f64,
    pub q: [Vec3; 3],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub frame: Frame,
    pub omega: f64,
    pub samples: Vec<Sample>,
}

/// The branch frozen at one parameter value.
#[derive(Clone, Debug)]
pub struct OrbitSlice {
    pub omega: f64,
    /// `√a(Ω)`; zero at the planar triangle.
    pub scale: f64,
    u: [FourierSlice<f64>; 3],
    du: [FourierSlice<f64>; 3],
}

impl OrbitSlice {
    pub fn new(x: &State<f64>, omega: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&omega) {
            return Err(OrbitError::OmegaOutOfRange(omega));
        }
        let vals = x.eval(omega);
        let a = vals[0];
        if a < -SCALE_TOL {
            return Err(OrbitError::NegativeScale(a));
        }
        let sl = x.layout().to_slices(&vals);
        let u = [0, 1, 2].map(|i| sl.field(Field::U(i)).clone());
        let du = [0, 1, 2].map(|i| u[i].diff_t());
        Ok(Self {
            omega,
            scale: a.max(0.0).sqrt(),
            u,
            du,
        })
    }

    fn lift(&self, s: &[FourierSlice<f64>; 3], t: f64) -> Vec3 {
        [s[0].eval(t), s[1].eval(t), self.scale * s[2].eval(t)]
    }

    /// `U(t)` in the rotating frame.
    pub fn u(&self, t: f64) -> Vec3 {
        self.lift(&self.u, t)
    }

    /// `U̇(t)` in the rotating frame.
    pub fn u_dot(&self, t: f64) -> Vec3 {
        self.lift(&self.du, t)
    }

    /// Rotating-frame positions `S^j U(t)`, `j = 1, 2, 3`.
    pub fn rotating(&self, t: f64) -> [Vec3; 3] {
        [1, 2, 3].map(|j| self.u(t + 4.0 * PI * j as f64 / 3.0))
    }

    /// Positions in the requested frame.
    pub fn positions(&self, t: f64, frame: Frame) -> [Vec3; 3] {
        let q = self.rotating(t);
        match frame {
            Frame::Rotating => q,
            Frame::Inertial => q.map(|p| rotate(p, -self.omega * t)),
        }
    }

    /// Inertial positions and velocities.
    pub fn inertial_state(&self, t: f64) -> ([Vec3; 3], [Vec3; 3]) {
        let mut q = [[0.0; 3]; 3];
        let mut p = [[0.0; 3]; 3];
        for j in 0..3 {
            let s = t + 4.0 * PI * (j + 1) as f64 / 3.0;
            let (u, du) = (self.u(s), self.u_dot(s));
            // d/dt e^{-ΩJ̄t} U = e^{-ΩJ̄t} (U̇ - Ω J̄ U).
            let v = [du[0] + self.omega * u[1], du[1] - self.omega * u[0], du[2]];
            q[j] = rotate(u, -self.omega * t);
            p[j] = rotate(v, -self.omega * t);
        }
        (q, p)
    }
}

/// `e^{θ J̄} p`: rotation by `θ` in the horizontal plane.
pub fn rotate(p: Vec3, theta: f64) -> Vec3 {
    let (s, c) = theta.sin_cos();
    [c * p[0] - s * p[1], s * p[0] + c * p[1], p[2]]
}

fn cross(a: Vec3, b: Vec3) -> Vec3 {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn dist(a: Vec3, b: Vec3) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
}

fn norm(a: Vec3) -> f64 {
    dist(a, [0.0; 3])
}

pub fn reconstruct_positions(x: &State<f64>, omega: f64, t: f64, frame: Frame) -> Result<[Vec3; 3]> {
    Ok(OrbitSlice::new(x, omega)?.positions(t, frame))
}

/// Sample times `2πi/(n-1)`, both ends included.
pub fn sample_times(n: usize) -> Vec<f64> {
    let mut t: Vec<f64> = (0..n).map(|i| 2.0 * PI * i as f64 / (n - 1) as f64).collect();
    t[n - 1] = 2.0 * PI;
    t
}

pub fn sample_orbit(x: &State<f64>, omega: f64, frame: Frame, n: usize) -> Result<Trajectory> {
    if n < 2 {
        return Err(OrbitError::TooFewSamples(n));
    }
    let o = OrbitSlice::new(x, omega)?;
    let samples = sample_times(n)
        .into_iter()
        .map(|t| Sample {
            t,
            q: o.positions(t, frame),
        })
        .collect();
    Ok(Trajectory { frame, omega, samples })
}

/// Samples several parameter values in parallel, in input order.
pub fn sample_many(x: &State<f64>, omegas: &[f64], frame: Frame, n: usize) -> Result<Vec<Trajectory>> {
    omegas.par_iter().map(|&om| sample_orbit(x, om, frame, n)).collect()
}

impl Trajectory {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("frame,omega,t");
        for j in 1..=3 {
            for c in ["x", "y", "z"] {
                let _ = write!(s, ",q{j}{c}");
            }
        }
        s.push('\n');
        for smp in &self.samples {
            let _ = write!(s, "{},{:.16e},{:.16e}", self.frame.name(), self.omega, smp.t);
            for p in &smp.q {
                for v in p {
                    let _ = write!(s, ",{v:.16e}");
                }
            }
            s.push('\n');
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub omega: f64,
    pub file: String,
    pub samples: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub frame: Frame,
    pub entries: Vec<ManifestEntry>,
}

/// Writes one CSV per trajectory and `manifest.json` into `dir`.
pub fn export(dir: &Path, frame: Frame, trajs: &[Trajectory]) -> Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let mut entries = Vec::with_capacity(trajs.len());
    for (i, tr) in trajs.iter().enumerate() {
        let file = format!("orbit_{i:03}_{}.csv", frame.name());
        write_atomic(&dir.join(&file), tr.to_csv().as_bytes())?;
        entries.push(ManifestEntry {
            omega: tr.omega,
            file,
            samples: tr.samples.len(),
        });
    }
    let path = dir.join("manifest.json");
    let m = Manifest { frame, entries };
    write_atomic(&path, serde_json::to_string_pretty(&m)?.as_bytes())?;
    Ok(path)
}

/// Writes through a temporary sibling so no partial file is left behind.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> io::Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".part");
    let tmp = PathBuf::from(tmp);
    std::fs::write(&tmp, bytes)?;
    std::fs::rename(&tmp, path).inspect_err(|_| {
        let _ = std::fs::remove_file(&tmp);
    })
}

type Y18 = SVector<f64, 18>;

/// The full three-body problem in the rotating frame, unit masses.
struct Rotating3Body {
    omega: f64,
}

fn body(y: &Y18, j: usize) -> Vec3 {
    [y[3 * j], y[3 * j + 1], y[3 * j + 2]]
}

impl System<f64, Y18> for Rotating3Body {
    fn system(&self, _t: f64, y: &Y18, dy: &mut Y18) {
        let om = self.omega;
        let q = [body(y, 0), body(y, 1), body(y, 2)];
        for j in 0..3 {
            let v = [y[9 + 3 * j], y[10 + 3 * j], y[11 + 3 * j]];
            // Ü = 2ΩJ̄U̇ + Ω²ĪU - Σ (U_j - U_i)/|U_j - U_i|³.
            let mut acc = [2.0 * om * -v[1] + om * om * q[j][0], 2.0 * om * v[0] + om * om * q[j][1], 0.0];
            for i in 0..3 {
                if i != j {
                    let d = dist(q[j], q[i]);
                    let d3 = d * d * d;
                    for c in 0..3 {
                        acc[c] -= (q[j][c] - q[i][c]) / d3;
                    }
                }
            }
            for c in 0..3 {
                dy[3 * j + c] = v[c];
                dy[9 + 3 * j + c] = acc[c];
            }
        }
    }
}

/// Integrates the rotating-frame three-body equations over one period
/// from the branch data at `Ω` and returns the largest position deviation
/// from the spectral orbit.
pub fn ode_oracle(x: &State<f64>, omega: f64, rtol: f64) -> Result<f64> {
    let o = OrbitSlice::new(x, omega)?;
    let mut y0 = Y18::zeros();
    for j in 0..3 {
        let s = 4.0 * PI * (j + 1) as f64 / 3.0;
        let (u, du) = (o.u(s), o.u_dot(s));
        for c in 0..3 {
            y0[3 * j + c] = u[c];
            y0[9 + 3 * j + c] = du[c];
        }
    }
    let sys = Rotating3Body { omega };
    let period = 2.0 * PI;
    let mut solver = Dop853::new(sys, 0.0, period, period / 256.0, y0, rtol, rtol * 1e-2);
    solver.integrate().map_err(|e| OrbitError::Integration(format!("{e:?}")))?;
    let (ts, ys) = (solver.x_out(), solver.y_out());
    let mut dev: f64 = 0.0;
    for (t, y) in ts.iter().zip(ys) {
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            let d = dist(body(y, i), body(y, j));
            if d < COLLISION_DIST {
                return Err(OrbitError::CloseEncounter { i: i + 1, j: j + 1, t: *t, dist: d });
            }
        }
        let q = o.rotating(*t);
        for (j, qj) in q.iter().enumerate() {
            dev = dev.max(dist(*qj, body(y, j)));
        }
    }
    match ts.last() {
        Some(&t) if (t - period).abs() <= 1e-9 * period => Ok(dev),
        _ => Err(OrbitError::Integration("stopped before one period".into())),
    }
}

/// Largest `|Σ_j q_j(t)|` over the trajectory.
pub fn center_of_mass_defect(tr: &Trajectory) -> f64 {
    tr.samples
        .iter()
        .map(|s| {
            let c = [0, 1, 2].map(|c| s.q[0][c] + s.q[1][c] + s.q[2][c]);
            norm(c)
        })
        .fold(0.0, f64::max)
}

/// Total angular momentum `Σ_j q_j × q̇_j` in the inertial frame.
pub fn angular_momentum(o: &OrbitSlice, t: f64) -> Vec3 {
    let (q, p) = o.inertial_state(t);
    let mut l = [0.0; 3];
    for j in 0..3 {
        let c = cross(q[j], p[j]);
        for i in 0..3 {
            l[i] += c[i];
        }
    }
    l
}

/// Largest `|q_1(t) - q_3(t + 4π/3)|` in the rotating frame.
pub fn choreography_defect(o: &OrbitSlice, times: &[f64]) -> f64 {
    times
        .iter()
        .map(|&t| dist(o.rotating(t)[0], o.rotating(t + 4.0 * PI / 3.0)[2]))
        .fold(0.0, f64::max)
}

/// Largest defect of the two figure-eight symmetries of
/// `q̂(t) = (U_z, U_y)(t + π/2)`:
/// `q̂(t+π) = (-q̂₁, q̂₂)(t)` and `q̂(π-t) = (q̂₁, -q̂₂)(t)`.
pub fn eight_symmetry_defect(o: &OrbitSlice, times: &[f64]) -> f64 {
    let hat = |t: f64| {
        let u = o.u(t + PI / 2.0);
        [u[2], u[1]]
    };
    let mut d: f64 = 0.0;
    for &t in times {
        let (h, hp, hr) = (hat(t), hat(t + PI), hat(PI - t));
        d = d.max((hp[0] + h[0]).abs()).max((hp[1] - h[1]).abs());
        d = d.max((hr[0] - h[0]).abs()).max((hr[1] + h[1]).abs());
    }
    d
}
