//! Time evolution by exact spectral decomposition. Finite lattices are
//! folded onto tridiagonal chains wherever the topology allows, so the
//! eigenproblem stays O(n^2) in memory and the propagation itself is a sum
//! of phasors per eigenmode; no time stepping, no Trotter error.

use crate::eig::{eigh_dense, eigh_tridiagonal, matmul_nt, ColMat};
use crate::lattice::{
    backward_hamiltonian, build_hamiltonian, CaseId, HamiltonianMatrix, SiteLabel, SystemSpec,
};
use crate::spectral::band_nodes;
use crate::{Direction, Error, Result};
use num_complex::Complex64;
use std::io::Write;

/// Eigendecomposition of a real symmetric Hamiltonian.
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    /// Orthonormal eigenvectors, one per column.
    pub eigenvectors: ColMat,
}

/// Diagonalizes, picking the tridiagonal solver when the site ordering
/// already exposes the band structure.
pub fn diagonalize(h: &HamiltonianMatrix) -> Result<Spectrum> {
    let n = h.dim();
    let (w, z) = if h.is_tridiagonal() {
        let diag: Vec<f64> = (0..n).map(|i| h.get(i, i)).collect();
        let off: Vec<f64> = (0..n.saturating_sub(1)).map(|i| h.get(i, i + 1)).collect();
        eigh_tridiagonal(&diag, &off)?
    } else {
        eigh_dense(&h.to_colmat())?
    };
    Ok(Spectrum {
        eigenvalues: w,
        eigenvectors: z,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesKind {
    Sp,
    Le,
}

impl std::fmt::Display for SeriesKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SeriesKind::Sp => "SP",
            SeriesKind::Le => "LE",
        })
    }
}

/// A sampled probability decay curve, `p[j]` at `t[j]`, with `p[0] = 1`.
#[derive(Clone, Debug)]
pub struct TimeSeries {
    pub t: Vec<f64>,
    pub p: Vec<f64>,
    pub kind: SeriesKind,
}

impl TimeSeries {
    /// Writes the curve as CSV with a one-line comment header identifying
    /// the model, then a `t,p` column header.
    pub fn write_csv<W: Write>(&self, w: &mut W, case_id: CaseId, v0: f64, v: f64) -> Result<()> {
        writeln!(w, "# case={case_id} v0={v0} v={v} kind={}", self.kind)?;
        writeln!(w, "t,p")?;
        for (t, p) in self.t.iter().zip(&self.p) {
            writeln!(w, "{t:.14e},{p:.14e}")?;
        }
        Ok(())
    }
}

/// Uniform sampling grid 0, dt, 2 dt, ..., with the last point at t_max
/// (up to rounding of t_max / dt).
pub fn time_grid(t_max: f64, dt: f64) -> Result<Vec<f64>> {
    if !(t_max.is_finite() && dt.is_finite()) || dt <= 0.0 || t_max < dt {
        return Err(Error::InvalidSpec(format!(
            "bad time grid: t_max = {t_max}, dt = {dt}"
        )));
    }
    let n = (t_max / dt).round() as usize;
    Ok((0..=n).map(|j| j as f64 * dt).collect())
}

/// Tridiagonal representation carrying the full dynamics of the source
/// site, produced by folding out symmetry-decoupled environment modes.
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct ChainRep {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
    pub src: usize,
}

/// Smallest exact representation of a model's dynamics. `Pair` blocks each
/// carry half the initial weight.
pub(crate) enum Reduced {
    Chain(ChainRep),
    Pair(ChainRep, ChainRep),
    Dense { h: HamiltonianMatrix, src: usize },
}

fn reduced_eq(a: &Reduced, b: &Reduced) -> bool {
    match (a, b) {
        (Reduced::Chain(x), Reduced::Chain(y)) => x == y,
        (Reduced::Pair(x1, x2), Reduced::Pair(y1, y2)) => x1 == y1 && x2 == y2,
        _ => false,
    }
}

/// Folds the model onto its reduced representation.
///
/// A site coupled to one bulk-chain site only talks to the even combination
/// of the two half chains, which is again a semi-infinite chain whose first
/// hop is scaled by sqrt(2). The bridged geometry splits into its exchange
/// sectors. Everything else stays dense.
pub(crate) fn reduce(spec: &SystemSpec, dir: Direction) -> Result<Reduced> {
    spec.validate()?;
    let d = match dir {
        Direction::Forward => 1.0,
        Direction::Backward => -1.0,
    };
    let n = spec.n_env;
    let (v0, v, vab) = (spec.v0, spec.v, spec.v_ab);
    let (ea, eb, ee) = (spec.e_a, spec.e_b, spec.e_env);
    let sq2 = std::f64::consts::SQRT_2;
    let rep = match spec.case_id {
        CaseId::I => {
            let mut diag = vec![d * ea];
            diag.extend(std::iter::repeat(ee).take(n));
            let mut off = vec![-v0];
            off.extend(std::iter::repeat(-v).take(n - 1));
            Reduced::Chain(ChainRep { diag, off, src: 0 })
        }
        CaseId::II => {
            let mut diag = vec![d * ea];
            diag.extend(std::iter::repeat(ee).take(n + 1));
            let mut off = vec![-v0, -sq2 * v];
            off.extend(std::iter::repeat(-v).take(n - 1));
            Reduced::Chain(ChainRep { diag, off, src: 0 })
        }
        CaseId::III => {
            let mut diag = vec![d * ea, d * eb];
            diag.extend(std::iter::repeat(ee).take(n));
            let mut off = vec![-d * vab, -v0];
            off.extend(std::iter::repeat(-v).take(n - 1));
            Reduced::Chain(ChainRep { diag, off, src: 0 })
        }
        CaseId::IV => {
            let mut diag = vec![d * ea, d * eb];
            diag.extend(std::iter::repeat(ee).take(n + 1));
            let mut off = vec![-d * vab, -v0, -sq2 * v];
            off.extend(std::iter::repeat(-v).take(n - 1));
            Reduced::Chain(ChainRep { diag, off, src: 0 })
        }
        CaseId::V => {
            // One line: folded chain A, dimer, folded chain B.
            let mut diag = vec![ee; n + 1];
            diag.push(d * ea);
            diag.push(d * eb);
            diag.extend(std::iter::repeat(ee).take(n + 1));
            let mut off = vec![-v; n - 1];
            off.extend([-sq2 * v, -v0, -d * vab, -v0, -sq2 * v]);
            off.extend(std::iter::repeat(-v).take(n - 1));
            Reduced::Chain(ChainRep {
                diag,
                off,
                src: n + 1,
            })
        }
        CaseId::VI if spec.e_a == spec.e_b => {
            let sector = |s: f64| -> ChainRep {
                let mut diag = vec![d * (ea + s * vab), ee + s * v];
                diag.extend(std::iter::repeat(ee).take(n - 1));
                let mut off = vec![-v0];
                off.extend(std::iter::repeat(-v).take(n - 1));
                ChainRep { diag, off, src: 0 }
            };
            Reduced::Pair(sector(1.0), sector(-1.0))
        }
        CaseId::VI | CaseId::FiveSite => {
            let h = match dir {
                Direction::Forward => build_hamiltonian(spec)?,
                Direction::Backward => backward_hamiltonian(spec)?,
            };
            let src_label = match spec.case_id {
                CaseId::FiveSite => SiteLabel::Sys { k: 2 },
                _ => SiteLabel::A,
            };
            let src = h.index_of(src_label).unwrap();
            Reduced::Dense { h, src }
        }
    };
    Ok(rep)
}

fn chain_spectrum(c: &ChainRep) -> Result<Spectrum> {
    let (w, z) = eigh_tridiagonal(&c.diag, &c.off)?;
    Ok(Spectrum {
        eigenvalues: w,
        eigenvectors: z,
    })
}

/// amp(t_j) = sum_k w_k exp(-i lambda_k t_j), accumulated into `out`.
fn accumulate_phasors(eigs: &[f64], weights: &[f64], ts: &[f64], out: &mut [Complex64]) {
    for (&lk, &wk) in eigs.iter().zip(weights) {
        if wk == 0.0 {
            continue;
        }
        for (j, &t) in ts.iter().enumerate() {
            out[j] += wk * Complex64::from_polar(1.0, -lk * t);
        }
    }
}

fn source_weights(s: &Spectrum, src: usize) -> Vec<f64> {
    (0..s.eigenvalues.len())
        .map(|k| {
            let a = s.eigenvectors.get(src, k);
            a * a
        })
        .collect()
}

pub(crate) fn sp_amplitude_dense(
    h: &HamiltonianMatrix,
    src: usize,
    ts: &[f64],
) -> Result<Vec<Complex64>> {
    let s = diagonalize(h)?;
    let w = source_weights(&s, src);
    let mut amp = vec![Complex64::new(0.0, 0.0); ts.len()];
    accumulate_phasors(&s.eigenvalues, &w, ts, &mut amp);
    Ok(amp)
}

fn spectral_amplitude(rep: &Reduced, ts: &[f64]) -> Result<Vec<Complex64>> {
    let mut amp = vec![Complex64::new(0.0, 0.0); ts.len()];
    match rep {
        Reduced::Chain(c) => {
            let s = chain_spectrum(c)?;
            accumulate_phasors(&s.eigenvalues, &source_weights(&s, c.src), ts, &mut amp);
        }
        Reduced::Pair(c1, c2) => {
            for c in [c1, c2] {
                let s = chain_spectrum(c)?;
                let w: Vec<f64> = source_weights(&s, c.src).iter().map(|x| 0.5 * x).collect();
                accumulate_phasors(&s.eigenvalues, &w, ts, &mut amp);
            }
        }
        Reduced::Dense { h, src } => return sp_amplitude_dense(h, *src, ts),
    }
    Ok(amp)
}

/// Half-time phase matrices (nt x n, one eigenvalue per column):
/// `cos[j,l] = u_l cos(lambda_l t_j / 2)`, `sin[j,l] = -u_l sin(...)`, i.e.
/// the real and imaginary parts of u_l exp(-i lambda_l t_j / 2).
fn half_phase_blocks(eigs: &[f64], u: &[f64], ts: &[f64]) -> (ColMat, ColMat) {
    let n = eigs.len();
    let nt = ts.len();
    let mut pc = ColMat::zeros(nt, n);
    let mut ps = ColMat::zeros(nt, n);
    for l in 0..n {
        let ccol = &mut pc.data_mut()[l * nt..(l + 1) * nt];
        for (j, &t) in ts.iter().enumerate() {
            ccol[j] = u[l] * (0.5 * eigs[l] * t).cos();
        }
        let scol = &mut ps.data_mut()[l * nt..(l + 1) * nt];
        for (j, &t) in ts.iter().enumerate() {
            scol[j] = -u[l] * (0.5 * eigs[l] * t).sin();
        }
    }
    (pc, ps)
}

/// Echo amplitude `<src| U_b(t/2) U_f(t/2) |src>` with both half evolutions
/// running forward in time, the second one under the sign-reversed system.
/// Assembled from four real matrix products.
fn echo_from_spectra(
    sf: &Spectrum,
    src_f: usize,
    sb: &Spectrum,
    src_b: usize,
    ts: &[f64],
) -> Vec<Complex64> {
    let n = sf.eigenvalues.len();
    assert_eq!(n, sb.eigenvalues.len());
    let nt = ts.len();

    let uf = sf.eigenvectors.row(src_f);
    let (pc, ps) = half_phase_blocks(&sf.eigenvalues, &uf, ts);
    let psi_c = matmul_nt(&sf.eigenvectors, &pc);
    let psi_s = matmul_nt(&sf.eigenvectors, &ps);
    drop(pc);
    drop(ps);

    let ub = sb.eigenvectors.row(src_b);
    let (qc, qs) = half_phase_blocks(&sb.eigenvalues, &ub, ts);
    let chi_c = matmul_nt(&sb.eigenvectors, &qc);
    let chi_s = matmul_nt(&sb.eigenvectors, &qs);
    drop(qc);
    drop(qs);

    // amp_j = sum_i chi[i,j] psi[i,j]; a plain product, both factors are
    // matrix elements of complex symmetric propagators.
    let mut amp = vec![Complex64::new(0.0, 0.0); nt];
    for j in 0..nt {
        let (cc, cs) = (chi_c.column(j), chi_s.column(j));
        let (fc, fs) = (psi_c.column(j), psi_s.column(j));
        let mut re = 0.0;
        let mut im = 0.0;
        for i in 0..n {
            re += cc[i] * fc[i] - cs[i] * fs[i];
            im += cc[i] * fs[i] + cs[i] * fc[i];
        }
        amp[j] = Complex64::new(re, im);
    }
    amp
}

fn echo_chain(f: &ChainRep, b: &ChainRep, ts: &[f64]) -> Result<Vec<Complex64>> {
    let sf = chain_spectrum(f)?;
    let sb = chain_spectrum(b)?;
    Ok(echo_from_spectra(&sf, f.src, &sb, b.src, ts))
}

pub(crate) fn echo_amplitude_dense(
    hf: &HamiltonianMatrix,
    src_f: usize,
    hb: &HamiltonianMatrix,
    src_b: usize,
    ts: &[f64],
) -> Result<Vec<Complex64>> {
    let sf = diagonalize(hf)?;
    let sb = diagonalize(hb)?;
    Ok(echo_from_spectra(&sf, src_f, &sb, src_b, ts))
}

fn echo_amplitude(spec: &SystemSpec, ts: &[f64]) -> Result<Vec<Complex64>> {
    let rf = reduce(spec, Direction::Forward)?;
    let rb = reduce(spec, Direction::Backward)?;
    // When the sign reversal leaves the Hamiltonian unchanged the two half
    // evolutions compose into plain evolution for the full time.
    if reduced_eq(&rf, &rb) {
        return spectral_amplitude(&rf, ts);
    }
    match (&rf, &rb) {
        (Reduced::Chain(f), Reduced::Chain(b)) => echo_chain(f, b, ts),
        (Reduced::Pair(f1, f2), Reduced::Pair(b1, b2)) => {
            let a1 = echo_chain(f1, b1, ts)?;
            let a2 = echo_chain(f2, b2, ts)?;
            Ok(a1
                .iter()
                .zip(&a2)
                .map(|(x, y)| 0.5 * (x + y))
                .collect())
        }
        (
            Reduced::Dense { h: hf, src },
            Reduced::Dense { h: hb, src: src_b },
        ) => echo_amplitude_dense(hf, *src, hb, *src_b, ts),
        _ => Err(Error::Numerical(
            "forward and backward reductions disagree in shape".into(),
        )),
    }
}

/// Probability of still finding the excitation in its initial state after
/// evolving for t.
pub fn survival_probability(spec: &SystemSpec, t_max: f64, dt: f64) -> Result<TimeSeries> {
    let ts = time_grid(t_max, dt)?;
    let rep = reduce(spec, Direction::Forward)?;
    let amp = spectral_amplitude(&rep, &ts)?;
    Ok(TimeSeries {
        p: amp.iter().map(|a| a.norm_sqr()).collect(),
        t: ts,
        kind: SeriesKind::Sp,
    })
}

/// Echo under imperfect time reversal: forward evolution for t/2, then the
/// system Hamiltonian is sign-reversed while environment and coupling stay
/// untouched, and the evolution continues for another t/2.
pub fn loschmidt_echo(spec: &SystemSpec, t_max: f64, dt: f64) -> Result<TimeSeries> {
    let ts = time_grid(t_max, dt)?;
    let amp = echo_amplitude(spec, &ts)?;
    Ok(TimeSeries {
        p: amp.iter().map(|a| a.norm_sqr()).collect(),
        t: ts,
        kind: SeriesKind::Le,
    })
}

/// Survival probability reconstructed from the analytic local density of
/// states by quadrature over the band, bypassing the lattice entirely.
/// Agrees with `survival_probability` while the finite lattice is below its
/// reflection horizon.
pub fn sp_from_ldos(spec: &SystemSpec, t_max: f64, dt: f64) -> Result<TimeSeries> {
    let ts = time_grid(t_max, dt)?;
    let nodes = band_nodes(spec, t_max)?;
    let mut amp = vec![Complex64::new(0.0, 0.0); ts.len()];
    let (eigs, weights): (Vec<f64>, Vec<f64>) = nodes.into_iter().unzip();
    accumulate_phasors(&eigs, &weights, &ts, &mut amp);
    Ok(TimeSeries {
        p: amp.iter().map(|a| a.norm_sqr()).collect(),
        t: ts,
        kind: SeriesKind::Sp,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn grid(t_max: f64, dt: f64) -> Vec<f64> {
        time_grid(t_max, dt).unwrap()
    }

    #[test]
    fn uniform_open_chain_spectrum() {
        // Hopping -v on an open chain: eigenvalues -2v cos(k pi / (N + 1)).
        let n = 40;
        let c = ChainRep {
            diag: vec![0.0; n],
            off: vec![-1.0; n - 1],
            src: 0,
        };
        let s = chain_spectrum(&c).unwrap();
        let mut want: Vec<f64> = (1..=n)
            .map(|k| -2.0 * (k as f64 * PI / (n as f64 + 1.0)).cos())
            .collect();
        want.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (x, y) in s.eigenvalues.iter().zip(&want) {
            assert_abs_diff_eq!(x, y, epsilon = 1e-12);
        }
    }

    #[test]
    fn eigenvector_residuals() {
        let spec = SystemSpec::new(CaseId::FiveSite, 0.1, 1.0, 8);
        let h = build_hamiltonian(&spec).unwrap();
        let s = diagonalize(&h).unwrap();
        let dim = h.dim();
        let scale = h.max_abs();
        for k in [0, dim / 2, dim - 1] {
            let v = s.eigenvectors.column(k);
            let mut sup = 0.0f64;
            for i in 0..dim {
                let mut hv = 0.0;
                for j in 0..dim {
                    hv += h.get(i, j) * v[j];
                }
                sup = sup.max((hv - s.eigenvalues[k] * v[i]).abs());
            }
            assert!(sup <= 1e-10 * scale, "residual {sup} for eigenpair {k}");
        }
    }

    #[test]
    fn survival_starts_at_one_and_stays_bounded() {
        for case in CaseId::ALL {
            let spec = SystemSpec::new(case, 0.1, 1.0, 30);
            let sp = survival_probability(&spec, 8.0, 0.1).unwrap();
            assert_abs_diff_eq!(sp.p[0], 1.0, epsilon = 1e-12);
            for &p in &sp.p {
                assert!(p >= 0.0 && p <= 1.0 + 1e-10);
            }
        }
    }

    #[test]
    fn decoupled_dimer_rabi_oscillation() {
        // v0 = 0 leaves the dimer isolated: P(t) = cos^2(v_ab t).
        let mut spec = SystemSpec::new(CaseId::III, 0.0, 1.0, 12);
        spec.v_ab = 0.7;
        let sp = survival_probability(&spec, 9.0, 0.03).unwrap();
        for (t, p) in sp.t.iter().zip(&sp.p) {
            let want = (0.7 * t).cos().powi(2);
            assert_abs_diff_eq!(p, &want, epsilon = 1e-12);
        }
    }

    #[test]
    fn decoupled_echo_is_perfect() {
        // With v0 = 0 the reversal is exact and the echo never decays,
        // which pins down the sign conventions of the echo engine.
        let mut spec = SystemSpec::new(CaseId::III, 0.0, 1.0, 12);
        spec.v_ab = 0.7;
        spec.e_a = 0.3;
        spec.e_b = -0.2;
        let le = loschmidt_echo(&spec, 9.0, 0.09).unwrap();
        for &p in &le.p {
            assert_abs_diff_eq!(p, 1.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn echo_equals_survival_for_single_site_system() {
        // With e_a = 0 the sign reversal is the identity on the system, so
        // the two half evolutions compose into the full one; both cases
        // take the shortcut path and the series agree exactly.
        for case in [CaseId::I, CaseId::II] {
            let spec = SystemSpec::new(case, 0.15, 1.0, 60);
            let sp = survival_probability(&spec, 15.0, 0.05).unwrap();
            let le = loschmidt_echo(&spec, 15.0, 0.05).unwrap();
            assert_eq!(le.kind, SeriesKind::Le);
            assert_eq!(sp.p, le.p);
        }
    }

    #[test]
    fn folded_representations_match_dense() {
        // The chain and sector foldings must reproduce the dense dynamics
        // to rounding, reflections included.
        for case in [CaseId::III, CaseId::IV, CaseId::V, CaseId::VI] {
            let spec = SystemSpec::new(case, 0.2, 1.0, 24);
            let ts = grid(6.0, 0.1);

            let folded = spectral_amplitude(&reduce(&spec, Direction::Forward).unwrap(), &ts)
                .unwrap();
            let hf = build_hamiltonian(&spec).unwrap();
            let src = hf.index_of(SiteLabel::A).unwrap();
            let dense = sp_amplitude_dense(&hf, src, &ts).unwrap();
            for (a, b) in folded.iter().zip(&dense) {
                assert!((a - b).norm() <= 1e-12, "{case}: SP {a} vs {b}");
            }

            let le_folded = echo_amplitude(&spec, &ts).unwrap();
            let hb = backward_hamiltonian(&spec).unwrap();
            let le_dense = echo_amplitude_dense(&hf, src, &hb, src, &ts).unwrap();
            for (a, b) in le_folded.iter().zip(&le_dense) {
                assert!((a - b).norm() <= 1e-12, "{case}: LE {a} vs {b}");
            }
        }
    }

    #[test]
    fn horizon_guard_holds() {
        // Doubling an already sufficient environment must not change the
        // curve: reflections stay beyond the sampled window.
        let spec_a = SystemSpec::new(CaseId::I, 0.1, 1.0, 120);
        let spec_b = SystemSpec::new(CaseId::I, 0.1, 1.0, 240);
        let a = survival_probability(&spec_a, 40.0, 0.1).unwrap();
        let b = survival_probability(&spec_b, 40.0, 0.1).unwrap();
        let sup = a
            .p
            .iter()
            .zip(&b.p)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0f64, f64::max);
        assert!(sup < 1e-8, "reflection leak {sup}");
    }

    #[test]
    fn quadrature_curve_matches_lattice() {
        // The in-band quadrature misses the bound-state weight of the
        // lateral attachment (2.5e-5 on P at this coupling), which bounds
        // how tightly the curves can agree.
        let spec = SystemSpec::new(CaseId::II, 0.1, 1.0, 150);
        let analytic = sp_from_ldos(&spec, 25.0, 0.05).unwrap();
        assert_abs_diff_eq!(analytic.p[0], 1.0, epsilon = 1e-4);
        let lattice = survival_probability(&spec, 25.0, 0.05).unwrap();
        let sup = analytic
            .p
            .iter()
            .zip(&lattice.p)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0f64, f64::max);
        assert!(sup <= 1e-3, "analytic vs lattice sup deviation {sup}");
        // Short-time decay is quadratic: the drop below P(0) scales by 4
        // when t doubles. Measured against p[0] so the constant part of the
        // missing bound-state weight cancels.
        let d1 = analytic.p[0] - analytic.p[2];
        let d2 = analytic.p[0] - analytic.p[4];
        assert!((d2 / d1 - 4.0).abs() < 0.2, "ratio {}", d2 / d1);
    }

    #[test]
    fn csv_format_is_stable() {
        let series = TimeSeries {
            t: vec![0.0, 0.05],
            p: vec![1.0, 0.99],
            kind: SeriesKind::Sp,
        };
        let mut buf = Vec::new();
        series.write_csv(&mut buf, CaseId::II, 0.1, 1.0).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "# case=II v0=0.1 v=1 kind=SP\nt,p\n\
             0.00000000000000e0,1.00000000000000e0\n\
             5.00000000000000e-2,9.90000000000000e-1\n"
        );
    }

    #[test]
    fn time_grid_validation() {
        assert!(time_grid(0.0, 0.05).is_err());
        assert!(time_grid(10.0, 0.0).is_err());
        assert!(time_grid(10.0, -1.0).is_err());
        let g = time_grid(40.0, 0.05).unwrap();
        assert_eq!(g.len(), 801);
        assert_abs_diff_eq!(g[800], 40.0, epsilon = 1e-12);
    }
}
