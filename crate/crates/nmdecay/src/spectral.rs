//! Green's function analytics for the infinite-environment limit:
//! self-energies, local densities of states, resonance poles of the
//! analytically continued propagator, golden-rule decay rates, and the
//! exchange symmetrization of the bridged geometry.

use crate::eig::ColMat;
use crate::lattice::{CaseId, HamiltonianMatrix, SiteLabel, SystemSpec};
use crate::{Direction, Error, Result};
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

/// How a system site sees the environment chain: head of a semi-infinite
/// chain, or lateral attachment to one site of an infinite chain.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BathKind {
    Surface,
    Bulk,
}

/// Retarded self-energy of a single site coupled with hopping `v0` to a
/// uniform chain of hopping `v`, evaluated at real energy `eps` inside the
/// band. The bulk value is twice the surface one.
pub fn self_energy(eps: f64, v0: f64, v: f64, kind: BathKind) -> Result<Complex64> {
    if v <= 0.0 || v0 < 0.0 {
        return Err(Error::InvalidSpec("need v > 0 and v0 >= 0".into()));
    }
    if eps.abs() > 2.0 * v {
        return Err(Error::OutOfBand {
            eps,
            lo: -2.0 * v,
            hi: 2.0 * v,
        });
    }
    let s = (v * v - 0.25 * eps * eps).max(0.0).sqrt();
    let surface = Complex64::new(0.5 * eps, -s) * (v0 * v0 / (v * v));
    Ok(match kind {
        BathKind::Surface => surface,
        BathKind::Bulk => 2.0 * surface,
    })
}

/// Local density of states at the head site of a semi-infinite chain
/// (semicircle). Zero outside the band, including the edges.
pub fn ldos_surface(eps: f64, v: f64) -> f64 {
    assert!(v > 0.0);
    if eps.abs() >= 2.0 * v {
        return 0.0;
    }
    (v * v - 0.25 * eps * eps).sqrt() / (PI * v * v)
}

/// Local density of states at a bulk site of an infinite chain. Diverges as
/// an inverse square root at the band edges, which is reported as an error.
pub fn ldos_bulk(eps: f64, v: f64) -> Result<f64> {
    assert!(v > 0.0);
    if eps.abs() > 2.0 * v {
        return Ok(0.0);
    }
    if eps.abs() == 2.0 * v {
        return Err(Error::SingularLdos { eps });
    }
    Ok(1.0 / (2.0 * PI * (v * v - 0.25 * eps * eps).sqrt()))
}

/// Surface self-energy of a semi-infinite uniform chain (site energy
/// `e_env`, hopping `v`), with the branch that continues the retarded
/// in-band values into the lower half plane, where the resonance poles live.
fn sigma_chain(z: Complex64, v: f64, e_env: f64) -> Complex64 {
    let y = z - e_env;
    0.5 * y - Complex64::i() * (Complex64::new(v * v, 0.0) - 0.25 * y * y).sqrt()
}

/// Case-resolved analytic parameters. FiveSite has no closed-form site-A
/// propagator and is rejected here.
#[derive(Clone, Copy, Debug)]
struct Analytic {
    case_id: CaseId,
    v_ab: f64,
    v0: f64,
    v: f64,
    e_a: f64,
    e_b: f64,
    e_env: f64,
}

impl Analytic {
    fn new(case_id: CaseId, v_ab: f64, v0: f64, v: f64) -> Result<Analytic> {
        let spec = SystemSpec {
            case_id,
            v_ab,
            v0,
            v,
            e_a: 0.0,
            e_b: 0.0,
            e_env: 0.0,
            n_env: 1,
            v_s: 1.0,
        };
        Analytic::from_spec(&spec)
    }

    fn from_spec(spec: &SystemSpec) -> Result<Analytic> {
        spec.validate()?;
        if spec.case_id == CaseId::FiveSite {
            return Err(Error::Unsupported(
                "no closed-form site-A propagator for FiveSite".into(),
            ));
        }
        if spec.v0 == 0.0 {
            return Err(Error::InvalidSpec(
                "v0 must be positive for Green's function analytics".into(),
            ));
        }
        if spec.case_id == CaseId::VI && spec.e_a != spec.e_b {
            return Err(Error::Unsupported(
                "case VI analytics require e_a == e_b (exchange symmetry)".into(),
            ));
        }
        Ok(Analytic {
            case_id: spec.case_id,
            v_ab: spec.v_ab,
            v0: spec.v0,
            v: spec.v,
            e_a: spec.e_a,
            e_b: spec.e_b,
            e_env: spec.e_env,
        })
    }

    /// System parameters with the backward sign flip applied.
    fn signed(&self, dir: Direction) -> (f64, f64, f64) {
        let d = match dir {
            Direction::Forward => 1.0,
            Direction::Backward => -1.0,
        };
        (d * self.e_a, d * self.e_b, d * self.v_ab)
    }

    fn g_surface(&self, z: Complex64) -> Complex64 {
        sigma_chain(z, self.v, self.e_env) / (self.v * self.v)
    }

    fn g_bulk(&self, z: Complex64) -> Complex64 {
        let y = z - self.e_env;
        1.0 / (y - 2.0 * sigma_chain(z, self.v, self.e_env))
    }

    /// Denominator of one exchange sector of the bridged geometry;
    /// `s = +1` selects the antisymmetric sector (first block of the
    /// symmetrized form), `s = -1` the symmetric one.
    fn vi_denominator(&self, z: Complex64, s: f64, dir: Direction) -> Complex64 {
        let d = match dir {
            Direction::Forward => 1.0,
            Direction::Backward => -1.0,
        };
        let head = self.e_env + s * self.v;
        z - d * (self.e_a + s * self.v_ab)
            - self.v0 * self.v0 / (z - head - sigma_chain(z, self.v, self.e_env))
    }

    /// Retarded propagator at site A, analytically continued through the
    /// band cut into the lower half plane.
    fn g_aa(&self, z: Complex64, dir: Direction) -> Complex64 {
        let (ea, eb, vab) = self.signed(dir);
        let w0 = self.v0 * self.v0;
        match self.case_id {
            CaseId::I => 1.0 / (z - ea - w0 * self.g_surface(z)),
            CaseId::II => 1.0 / (z - ea - w0 * self.g_bulk(z)),
            CaseId::III => 1.0 / (z - ea - vab * vab / (z - eb - w0 * self.g_surface(z))),
            CaseId::IV => 1.0 / (z - ea - vab * vab / (z - eb - w0 * self.g_bulk(z))),
            CaseId::V => {
                let s = w0 * self.g_bulk(z);
                1.0 / (z - ea - s - vab * vab / (z - eb - s))
            }
            CaseId::VI => {
                0.5 * (1.0 / self.vi_denominator(z, 1.0, dir)
                    + 1.0 / self.vi_denominator(z, -1.0, dir))
            }
            CaseId::FiveSite => unreachable!(),
        }
    }

    /// Function whose zero is the resonance pole with non-negative real
    /// part, plus a leading-order seed for the root search.
    fn pole_problem(&self, dir: Direction) -> (impl Fn(Complex64) -> Complex64 + '_, Complex64) {
        let (ea, eb, vab) = self.signed(dir);
        let w0 = self.v0 * self.v0;
        let v = self.v;
        let case = self.case_id;
        let band = (4.0 * v * v - vab * vab).max(0.0).sqrt();
        let (re, gamma) = match case {
            CaseId::I => (ea, w0 / v),
            CaseId::II => (ea, 0.5 * w0 / v),
            CaseId::III => (vab, 0.25 * w0 * band / (v * v)),
            CaseId::IV => (vab, 0.5 * w0 / band),
            CaseId::V => (vab, w0 / band),
            CaseId::VI => {
                let denom = match dir {
                    Direction::Forward => 2.0 * v - self.v_ab,
                    Direction::Backward => 2.0 * v + self.v_ab,
                };
                (self.v_ab, 0.5 * w0 * band / (v * denom))
            }
            CaseId::FiveSite => unreachable!(),
        };
        let this = *self;
        let f = move |z: Complex64| -> Complex64 {
            match case {
                CaseId::I => z - ea - w0 * this.g_surface(z),
                CaseId::II => z - ea - w0 * this.g_bulk(z),
                CaseId::III => z - ea - vab * vab / (z - eb - w0 * this.g_surface(z)),
                CaseId::IV => z - ea - vab * vab / (z - eb - w0 * this.g_bulk(z)),
                CaseId::V => {
                    let s = w0 * this.g_bulk(z);
                    z - ea - s - vab * vab / (z - eb - s)
                }
                // The sector holding the pole at Re z = +v_ab: antisymmetric
                // when evolving forward, symmetric when evolving backward.
                CaseId::VI => match dir {
                    Direction::Forward => this.vi_denominator(z, 1.0, dir),
                    Direction::Backward => this.vi_denominator(z, -1.0, dir),
                },
                CaseId::FiveSite => unreachable!(),
            }
        };
        (f, Complex64::new(re, -gamma))
    }
}

/// Newton refinement of an analytic root. The derivative is taken by a
/// central difference, which is exact for analytic functions up to O(h^2).
fn refine_root<F: Fn(Complex64) -> Complex64>(
    f: F,
    seed: Complex64,
    scale: f64,
) -> Result<Complex64> {
    let tol = 1e-12 * scale;
    let h = Complex64::new(1e-7 * scale, 0.0);
    let mut z = seed;
    for _ in 0..200 {
        let fz = f(z);
        let df = (f(z + h) - f(z - h)) / (2.0 * h);
        if df.norm() == 0.0 {
            break;
        }
        let step = fz / df;
        z -= step;
        if step.norm() <= tol {
            return Ok(z);
        }
    }
    Err(Error::NoConvergence(format!(
        "pole search stalled near {z} (seed {seed})"
    )))
}

/// Resonance pole of the site-A propagator.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct PolePrediction {
    pub case_id: CaseId,
    pub direction: Direction,
    /// Real part of the pole (shifted resonance energy).
    pub delta0: f64,
    /// Half width: amplitudes decay as exp(-gamma0 t).
    pub gamma0: f64,
    /// Probability decay rate 2 gamma0, in inverse time.
    pub rate: f64,
    /// Pole order; simple poles throughout the weak-coupling regime.
    pub order: u8,
}

fn check_resonance_in_band(case_id: CaseId, v_ab: f64, v: f64) -> Result<()> {
    let needs_dimer = !matches!(case_id, CaseId::I | CaseId::II);
    if needs_dimer && v_ab >= 2.0 * v {
        return Err(Error::InvalidSpec(format!(
            "v_ab = {v_ab} puts the resonance outside the band (need v_ab < 2v = {})",
            2.0 * v
        )));
    }
    Ok(())
}

/// Locates the exact resonance pole of the analytically continued site-A
/// propagator with `Re z >= 0`, starting from its leading-order position.
pub fn gf_poles(
    case_id: CaseId,
    v_ab: f64,
    v0: f64,
    v: f64,
    direction: Direction,
) -> Result<PolePrediction> {
    let an = Analytic::new(case_id, v_ab, v0, v)?;
    check_resonance_in_band(case_id, v_ab, v)?;
    let (f, seed) = an.pole_problem(direction);
    let z = refine_root(&f, seed, v)?;
    let gamma0 = -z.im;
    if gamma0 <= 0.0 {
        return Err(Error::NoConvergence(format!(
            "pole converged to the wrong half plane: {z}"
        )));
    }
    Ok(PolePrediction {
        case_id,
        direction,
        delta0: z.re,
        gamma0,
        rate: 2.0 * gamma0,
        order: 1,
    })
}

/// Pole-equation value at `z`: the function whose lower-half-plane zero
/// `gf_poles` refines. Lets callers measure the residual at a located pole.
pub fn pole_equation(
    case_id: CaseId,
    v_ab: f64,
    v0: f64,
    v: f64,
    direction: Direction,
    z: Complex64,
) -> Result<Complex64> {
    let an = Analytic::new(case_id, v_ab, v0, v)?;
    check_resonance_in_band(case_id, v_ab, v)?;
    let (f, _) = an.pole_problem(direction);
    Ok(f(z))
}

/// Leading-order pole decay rate in normalized units of `v0^2 / v`
/// (self-consistent golden rule: the level width is evaluated at the exact
/// unperturbed resonance energy instead of a flat band).
pub fn scfgr_rate(case_id: CaseId, v_ab: f64, v0: f64, v: f64, direction: Direction) -> Result<f64> {
    Analytic::new(case_id, v_ab, v0, v)?;
    check_resonance_in_band(case_id, v_ab, v)?;
    let band = (4.0 * v * v - v_ab * v_ab).sqrt();
    Ok(match case_id {
        CaseId::I => 2.0,
        CaseId::II => 1.0,
        CaseId::III => 0.5 * band / v,
        CaseId::IV => v / band,
        CaseId::V => 2.0 * v / band,
        CaseId::VI => match direction {
            Direction::Forward => band / (2.0 * v - v_ab),
            Direction::Backward => band / (2.0 * v + v_ab),
        },
        CaseId::FiveSite => {
            return Err(Error::Unsupported(
                "no closed-form pole rate for FiveSite".into(),
            ))
        }
    })
}

/// Golden-rule rate in the wide-band approximation, normalized to
/// `v0^2 / v`: `2 pi v0^2 N(0) * mult` with the band-center density of the
/// attached chain and the per-case channel multiplicity.
pub fn wba_rate(case_id: CaseId, v0: f64, v: f64) -> Result<f64> {
    if v <= 0.0 || v0 <= 0.0 || v0 > 0.5 * v {
        return Err(Error::InvalidSpec(
            "need v > 0 and 0 < v0 <= 0.5 v".into(),
        ));
    }
    let (kind, mult) = match case_id {
        CaseId::I => (BathKind::Surface, 1.0),
        CaseId::II => (BathKind::Bulk, 1.0),
        CaseId::III => (BathKind::Surface, 0.5),
        CaseId::IV => (BathKind::Bulk, 0.5),
        CaseId::V => (BathKind::Bulk, 1.0),
        CaseId::VI => (BathKind::Surface, 0.5),
        CaseId::FiveSite => (BathKind::Bulk, 1.0),
    };
    let n0 = match kind {
        BathKind::Surface => ldos_surface(0.0, v),
        BathKind::Bulk => ldos_bulk(0.0, v)?,
    };
    Ok(2.0 * PI * n0 * v * mult)
}

/// Predicted echo decay rate: the mean of the forward and backward pole
/// rates. For private environments (only one system site touches the bath)
/// both directions coincide and the echo decays at the survival rate.
pub fn le_rate_prediction(case_id: CaseId, v_ab: f64, v0: f64, v: f64) -> Result<f64> {
    let f = scfgr_rate(case_id, v_ab, v0, v, Direction::Forward)?;
    let b = scfgr_rate(case_id, v_ab, v0, v, Direction::Backward)?;
    Ok(0.5 * (f + b))
}

/// Local density of states at site A of the dressed system, from the
/// analytic propagator. Vanishes outside (and at the edges of) the band for
/// any positive coupling.
pub fn ldos_site_a(eps: f64, spec: &SystemSpec) -> Result<f64> {
    let an = Analytic::from_spec(spec)?;
    if (eps - an.e_env).abs() >= 2.0 * an.v {
        return Ok(0.0);
    }
    let g = an.g_aa(Complex64::new(eps, 0.0), Direction::Forward);
    let n = -g.im / PI;
    debug_assert!(n > -1e-10);
    Ok(n.max(0.0))
}

// 16-point Gauss-Legendre rule on [-1, 1]: positive abscissae and weights.
const GL16_X: [f64; 8] = [
    0.0950125098376374,
    0.2816035507792589,
    0.4580167776572274,
    0.6178762444026438,
    0.7554044083550030,
    0.8656312023878318,
    0.9445750230732326,
    0.9894009349916499,
];
const GL16_W: [f64; 8] = [
    0.1894506104550685,
    0.1826034150449236,
    0.1691565193950025,
    0.1495959888165767,
    0.1246289712555339,
    0.0951585116824928,
    0.0622535239386479,
    0.0271524594117541,
];

fn gl16<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut acc = 0.0;
    for i in 0..8 {
        acc += GL16_W[i] * (f(mid - half * GL16_X[i]) + f(mid + half * GL16_X[i]));
    }
    acc * half
}

fn emit_panel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, out: &mut Vec<(f64, f64)>) {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    for i in 0..8 {
        for t in [mid - half * GL16_X[i], mid + half * GL16_X[i]] {
            out.push((t, GL16_W[i] * half * f(t)));
        }
    }
}

fn adapt_panel<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    whole: f64,
    depth: usize,
    out: &mut Vec<(f64, f64)>,
) {
    let mid = 0.5 * (a + b);
    let left = gl16(f, a, mid);
    let right = gl16(f, mid, b);
    let err = (left + right - whole).abs();
    if depth >= 44 || err <= 1e-13 {
        emit_panel(f, a, mid, out);
        emit_panel(f, mid, b, out);
        return;
    }
    adapt_panel(f, a, mid, left, depth + 1, out);
    adapt_panel(f, mid, b, right, depth + 1, out);
}

/// Quadrature nodes `(eps_k, w_k)` for band integrals of the site-A density
/// of states, so that `sum_k w_k g(eps_k) ~ int N_A(eps) g(eps) deps` stays
/// accurate for oscillatory `g` up to frequency `t_max`.
///
/// Uses the substitution `eps = e_env + 2v sin(theta)`, which removes the
/// band-edge singularities exactly, with a base panel count tied to the
/// largest phase and adaptive bisection into the resonance peaks.
pub(crate) fn band_nodes(spec: &SystemSpec, t_max: f64) -> Result<Vec<(f64, f64)>> {
    let an = Analytic::from_spec(spec)?;
    check_resonance_in_band(spec.case_id, spec.v_ab, spec.v)?;
    let two_v = 2.0 * an.v;
    let f = |theta: f64| -> f64 {
        let eps = an.e_env + two_v * theta.sin();
        let g = an.g_aa(Complex64::new(eps, 0.0), Direction::Forward);
        (-g.im / PI).max(0.0) * two_v * theta.cos()
    };
    // Phase per panel stays below ~4 rad at the longest time.
    let m = ((PI * an.v * t_max / 2.0).ceil() as usize).max(48);
    let mut nodes = Vec::new();
    for i in 0..m {
        let a = -0.5 * PI + PI * (i as f64) / (m as f64);
        let b = -0.5 * PI + PI * ((i + 1) as f64) / (m as f64);
        let whole = gl16(&f, a, b);
        adapt_panel(&f, a, b, whole, 0, &mut nodes);
    }
    // Map back to energies.
    let nodes: Vec<(f64, f64)> = nodes
        .into_iter()
        .map(|(theta, w)| (an.e_env + two_v * theta.sin(), w))
        .collect();
    // Lateral attachments push a small discrete weight (order v0^4 / v^4)
    // outside the band, so the in-band mass legitimately falls short of 1 by
    // that much; only larger gaps indicate an actual quadrature failure.
    let mass: f64 = nodes.iter().map(|&(_, w)| w).sum();
    if (mass - 1.0).abs() > 1e-3 {
        return Err(Error::Numerical(format!(
            "band quadrature lost probability mass: integral = {mass}"
        )));
    }
    Ok(nodes)
}

fn vi_read_params(h: &HamiltonianMatrix) -> Result<(usize, f64, f64, f64, f64, f64)> {
    let a = h
        .index_of(SiteLabel::A)
        .ok_or_else(|| Error::Unsupported("matrix has no site A".into()))?;
    let b = h
        .index_of(SiteLabel::B)
        .ok_or_else(|| Error::Unsupported("matrix has no site B".into()))?;
    let mut n_max = 0i32;
    for &l in h.site_labels() {
        match l {
            SiteLabel::A | SiteLabel::B => {}
            SiteLabel::Env { chain: 0, n } if n != 0 => n_max = n_max.max(n.abs()),
            _ => {
                return Err(Error::Unsupported(
                    "not a bridged-geometry matrix: unexpected site label".into(),
                ))
            }
        }
    }
    let n = n_max as usize;
    if h.dim() != 2 * n + 2 {
        return Err(Error::Unsupported(
            "not a bridged-geometry matrix: wrong site count".into(),
        ));
    }
    let idx = |m: i32| -> Result<usize> {
        h.index_of(SiteLabel::Env { chain: 0, n: m })
            .ok_or_else(|| Error::Unsupported("missing environment site".into()))
    };
    let scale = h.max_abs().max(1.0);
    let tol = 1e-12 * scale;
    let e_a = h.get(a, a);
    if (e_a - h.get(b, b)).abs() > tol {
        return Err(Error::Unsupported(
            "exchange symmetry broken: e_a != e_b".into(),
        ));
    }
    let v_ab = -h.get(a, b);
    let v0 = -h.get(a, idx(-1)?);
    if (v0 + h.get(b, idx(1)?)).abs() > tol {
        return Err(Error::Unsupported(
            "exchange symmetry broken: unequal couplings".into(),
        ));
    }
    let v = -h.get(idx(-1)?, idx(1)?);
    let e_env = h.get(idx(1)?, idx(1)?);
    // The whole matrix must commute with the exchange permutation.
    for i in 0..h.dim() {
        for j in 0..h.dim() {
            let (pi, pj) = (exchange_image(h, i), exchange_image(h, j));
            if (h.get(i, j) - h.get(pi, pj)).abs() > tol {
                return Err(Error::Unsupported(
                    "exchange symmetry broken: matrix does not commute with A<->B, n<->-n".into(),
                ));
            }
        }
    }
    Ok((n, e_a, e_env, v_ab, v0, v))
}

fn exchange_image(h: &HamiltonianMatrix, i: usize) -> usize {
    let image = match h.site_labels()[i] {
        SiteLabel::A => SiteLabel::B,
        SiteLabel::B => SiteLabel::A,
        SiteLabel::Env { chain, n } => SiteLabel::Env { chain, n: -n },
        SiteLabel::Sys { k } => SiteLabel::Sys { k },
    };
    h.index_of(image).unwrap()
}

fn vi_block(n: usize, e: f64, e_env: f64, v_ab: f64, v0: f64, v: f64, s: f64) -> HamiltonianMatrix {
    let mut labels = vec![SiteLabel::Sys { k: 0 }];
    labels.extend((1..=n as i32).map(|k| SiteLabel::Env { chain: 0, n: k }));
    let mut h = HamiltonianMatrix::zeros(labels);
    h.set_sym(0, 0, e + s * v_ab);
    if n >= 1 {
        h.set_sym(1, 1, e_env + s * v);
        h.set_sym(0, 1, -v0);
    }
    for k in 2..=n {
        h.set_sym(k, k, e_env);
        h.set_sym(k - 1, k, -v);
    }
    h
}

/// Splits the exchange-symmetric bridged geometry into its two decoupled
/// semi-infinite sectors. The first block carries diagonal
/// `(e + v_ab, e_env + v, e_env, ...)`, the second `(e - v_ab, e_env - v,
/// e_env, ...)`; both have hops `(-v0, -v, -v, ...)`. The initial state
/// `|A>` puts weight 1/2 into each block.
pub fn symmetrize_public(
    h: &HamiltonianMatrix,
) -> Result<(HamiltonianMatrix, HamiltonianMatrix)> {
    let (n, e, e_env, v_ab, v0, v) = vi_read_params(h)?;
    Ok((
        vi_block(n, e, e_env, v_ab, v0, v, 1.0),
        vi_block(n, e, e_env, v_ab, v0, v, -1.0),
    ))
}

/// Orthogonal change of basis that block-diagonalizes an exchange-symmetric
/// bridged-geometry matrix. Columns are ordered as the first block's sites
/// followed by the second block's sites, matching `symmetrize_public`.
pub fn symmetrize_transform(h: &HamiltonianMatrix) -> Result<ColMat> {
    let (n, ..) = vi_read_params(h)?;
    let dim = 2 * n + 2;
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let mut u = ColMat::zeros(dim, dim);
    let a = h.index_of(SiteLabel::A).unwrap();
    let b = h.index_of(SiteLabel::B).unwrap();
    let idx = |m: i32| h.index_of(SiteLabel::Env { chain: 0, n: m }).unwrap();
    // Antisymmetric sector.
    u.set(a, 0, r);
    u.set(b, 0, -r);
    for k in 1..=n {
        u.set(idx(-(k as i32)), k, r);
        u.set(idx(k as i32), k, -r);
    }
    // Symmetric sector.
    u.set(a, n + 1, r);
    u.set(b, n + 1, r);
    for k in 1..=n {
        u.set(idx(-(k as i32)), n + 1 + k, r);
        u.set(idx(k as i32), n + 1 + k, r);
    }
    Ok(u)
}
