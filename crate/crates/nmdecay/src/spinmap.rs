//! Many-body cross-check: an XY spin chain carrying a single flipped spin
//! must reproduce single-particle lattice dynamics exactly. The many-body
//! side works in the full 2^m space through bit algebra and shares no
//! construction code with the tight-binding side, so agreement validates
//! the mapping rather than restating it.

use crate::dynamics::{diagonalize, time_grid, SeriesKind, TimeSeries};
use crate::lattice::{HamiltonianMatrix, SiteLabel};
use crate::{Error, Result};
use num_complex::Complex64;

/// Full many-body state vectors up to this many spins fit comfortably in
/// memory; the check does not need more.
pub const MAX_SPINS: usize = 14;

/// An XY chain: site splittings `omega`, exchange couplings `j` (one per
/// bond), and the sites between which the transition probability is
/// tracked.
#[derive(Clone, Debug)]
pub struct SpinChainSpec {
    pub omega: Vec<f64>,
    pub j: Vec<f64>,
    pub i_site: usize,
    pub f_site: usize,
}

impl SpinChainSpec {
    pub fn sites(&self) -> usize {
        self.omega.len()
    }

    pub fn validate(&self) -> Result<()> {
        let m = self.sites();
        if m < 2 || m > MAX_SPINS {
            return Err(Error::InvalidSpec(format!(
                "spin chain needs 2..={MAX_SPINS} sites, got {m}"
            )));
        }
        if self.j.len() + 1 != m {
            return Err(Error::InvalidSpec(format!(
                "{} sites need {} couplings, got {}",
                m,
                m - 1,
                self.j.len()
            )));
        }
        if self.i_site >= m || self.f_site >= m {
            return Err(Error::InvalidSpec(
                "tracked sites lie outside the chain".into(),
            ));
        }
        if !self.omega.iter().chain(&self.j).all(|x| x.is_finite()) {
            return Err(Error::InvalidSpec("non-finite spin parameters".into()));
        }
        Ok(())
    }
}

/// Applies H = sum_n omega_n S^z_n - sum_n (j_n / 2)(S^+_n S^-_{n+1} + h.c.)
/// to a full many-body state (basis index bit n = spin n up).
pub fn apply_xy(spec: &SpinChainSpec, state: &[Complex64]) -> Vec<Complex64> {
    let m = spec.sites();
    let dim = 1usize << m;
    assert_eq!(state.len(), dim);
    let mut out = vec![Complex64::new(0.0, 0.0); dim];
    for (b, &amp) in state.iter().enumerate() {
        if amp == Complex64::new(0.0, 0.0) {
            continue;
        }
        let mut diag = 0.0;
        for (n, &w) in spec.omega.iter().enumerate() {
            diag += if b >> n & 1 == 1 { 0.5 * w } else { -0.5 * w };
        }
        out[b] += diag * amp;
        for (n, &jn) in spec.j.iter().enumerate() {
            let pair = b >> n & 3;
            if pair == 1 || pair == 2 {
                out[b ^ (3 << n)] += -0.5 * jn * amp;
            }
        }
    }
    out
}

/// Transition probability P(t) = |<f| exp(-iHt) |i>|^2 between single-flip
/// states over the all-down background, computed from the many-body
/// Hamiltonian: the sector matrix is read off by applying the full H to
/// each basis state.
pub fn spin_correlation(spec: &SpinChainSpec, t_max: f64, dt: f64) -> Result<TimeSeries> {
    spec.validate()?;
    let m = spec.sites();
    let dim = 1usize << m;
    let mut sector = HamiltonianMatrix::zeros(
        (0..m).map(|k| SiteLabel::Sys { k: k as u8 }).collect(),
    );
    for k in 0..m {
        let mut basis = vec![Complex64::new(0.0, 0.0); dim];
        basis[1 << k] = Complex64::new(1.0, 0.0);
        let image = apply_xy(spec, &basis);
        for (b, &amp) in image.iter().enumerate() {
            if amp == Complex64::new(0.0, 0.0) {
                continue;
            }
            // The XY interaction conserves the number of up spins; anything
            // outside the one-flip sector means the bit algebra broke.
            if b.count_ones() != 1 {
                return Err(Error::Numerical(format!(
                    "one-flip sector leaked into basis state {b:#b}"
                )));
            }
            sector.set_sym(b.trailing_zeros() as usize, k, amp.re);
        }
    }
    let ts = time_grid(t_max, dt)?;
    let s = diagonalize(&sector)?;
    let p = transition_series(&s.eigenvalues, &s.eigenvectors.row(spec.f_site), &s.eigenvectors.row(spec.i_site), &ts);
    Ok(TimeSeries {
        t: ts,
        p,
        kind: SeriesKind::Sp,
    })
}

fn transition_series(eigs: &[f64], vf: &[f64], vi: &[f64], ts: &[f64]) -> Vec<f64> {
    ts.iter()
        .map(|&t| {
            let mut amp = Complex64::new(0.0, 0.0);
            for (l, &e) in eigs.iter().enumerate() {
                amp += vf[l] * vi[l] * Complex64::from_polar(1.0, -e * t);
            }
            amp.norm_sqr()
        })
        .collect()
}

/// The single-particle image of the chain: site energies `omega`, hoppings
/// `-j/2`. The constant -sum(omega)/2 background of the all-down state is
/// dropped; it only contributes a global phase.
pub fn jwt_hamiltonian(spec: &SpinChainSpec) -> Result<HamiltonianMatrix> {
    spec.validate()?;
    let m = spec.sites();
    let mut h = HamiltonianMatrix::zeros(
        (0..m).map(|k| SiteLabel::Sys { k: k as u8 }).collect(),
    );
    for (k, &w) in spec.omega.iter().enumerate() {
        h.set_sym(k, k, w);
    }
    for (n, &jn) in spec.j.iter().enumerate() {
        h.set_sym(n, n + 1, -0.5 * jn);
    }
    Ok(h)
}

/// Transition probability from the single-particle image, for comparison
/// against `spin_correlation`.
pub fn single_particle_correlation(
    spec: &SpinChainSpec,
    t_max: f64,
    dt: f64,
) -> Result<TimeSeries> {
    let h = jwt_hamiltonian(spec)?;
    let s = diagonalize(&h)?;
    let ts = time_grid(t_max, dt)?;
    let p = transition_series(
        &s.eigenvalues,
        &s.eigenvectors.row(spec.f_site),
        &s.eigenvectors.row(spec.i_site),
        &ts,
    );
    Ok(TimeSeries {
        t: ts,
        p,
        kind: SeriesKind::Sp,
    })
}

/// Largest pointwise gap between the many-body and single-particle
/// transition probabilities.
pub fn mapping_deviation(spec: &SpinChainSpec, t_max: f64, dt: f64) -> Result<f64> {
    let many = spin_correlation(spec, t_max, dt)?;
    let single = single_particle_correlation(spec, t_max, dt)?;
    Ok(many
        .p
        .iter()
        .zip(&single.p)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn uniform(m: usize, omega: f64, j: f64, i: usize, f: usize) -> SpinChainSpec {
        SpinChainSpec {
            omega: vec![omega; m],
            j: vec![j; m - 1],
            i_site: i,
            f_site: f,
        }
    }

    #[test]
    fn two_spins_rabi() {
        // J = 2 gives hopping 1: P_{0->1} = sin^2 t, P_{0->0} = cos^2 t.
        let spec = uniform(2, 0.0, 2.0, 0, 1);
        let s = spin_correlation(&spec, 6.0, 0.05).unwrap();
        for (t, p) in s.t.iter().zip(&s.p) {
            assert_abs_diff_eq!(*p, t.sin().powi(2), epsilon = 1e-12);
        }
        let stay = uniform(2, 0.0, 2.0, 0, 0);
        let s = spin_correlation(&stay, 6.0, 0.05).unwrap();
        for (t, p) in s.t.iter().zip(&s.p) {
            assert_abs_diff_eq!(*p, t.cos().powi(2), epsilon = 1e-12);
        }
    }

    #[test]
    fn single_particle_image_entries() {
        let spec = SpinChainSpec {
            omega: vec![0.3, -0.1, 0.4],
            j: vec![0.8, 1.2],
            i_site: 0,
            f_site: 2,
        };
        let h = jwt_hamiltonian(&spec).unwrap();
        assert_eq!(h.dim(), 3);
        assert!(h.is_tridiagonal());
        assert_eq!(h.get(0, 0), 0.3);
        assert_eq!(h.get(1, 1), -0.1);
        assert_eq!(h.get(0, 1), -0.4);
        assert_eq!(h.get(1, 2), -0.6);
        assert_eq!(h.get(0, 2), 0.0);
    }

    #[test]
    fn mapping_agrees_for_ordered_and_disordered_chains() {
        let cases = [
            uniform(8, 0.3, 0.8, 0, 7),
            uniform(8, 0.0, 1.0, 3, 3),
            SpinChainSpec {
                omega: vec![0.1, -0.4, 0.25, 0.0, 0.9, -0.2, 0.35, 0.05],
                j: vec![0.6, 1.1, 0.4, 0.95, 0.7, 1.3, 0.5],
                i_site: 2,
                f_site: 5,
            },
        ];
        for spec in cases {
            let dev = mapping_deviation(&spec, 12.0, 0.1).unwrap();
            assert!(dev <= 1e-10, "deviation {dev}");
        }
    }

    #[test]
    fn splitting_background_is_a_global_phase() {
        let a = uniform(6, 0.0, 0.9, 1, 4);
        let mut b = a.clone();
        for w in &mut b.omega {
            *w += 2.7;
        }
        let sa = spin_correlation(&a, 8.0, 0.1).unwrap();
        let sb = spin_correlation(&b, 8.0, 0.1).unwrap();
        for (x, y) in sa.p.iter().zip(&sb.p) {
            assert_abs_diff_eq!(x, y, epsilon = 1e-12);
        }
    }

    #[test]
    fn sector_is_exactly_closed() {
        let spec = uniform(5, 0.4, 1.1, 0, 4);
        let dim = 1usize << 5;
        let mut state = vec![Complex64::new(0.0, 0.0); dim];
        // A superposition over the one-flip sector.
        for k in 0..5 {
            state[1 << k] = Complex64::new(0.3 + 0.1 * k as f64, -0.05 * k as f64);
        }
        let image = apply_xy(&spec, &state);
        for (b, amp) in image.iter().enumerate() {
            if b.count_ones() != 1 {
                assert_eq!(*amp, Complex64::new(0.0, 0.0), "leak at {b:#b}");
            }
        }
    }

    #[test]
    fn oversized_chain_is_rejected() {
        let spec = uniform(15, 0.0, 1.0, 0, 1);
        assert!(matches!(
            spin_correlation(&spec, 1.0, 0.1),
            Err(Error::InvalidSpec(_))
        ));
        let bad_sites = SpinChainSpec {
            omega: vec![0.0; 4],
            j: vec![1.0; 3],
            i_site: 4,
            f_site: 0,
        };
        assert!(bad_sites.validate().is_err());
    }
}
