//! Tight-binding model construction.
//!
//! A two-site system (A, B) or a five-site chain is attached through a weak
//! hopping `v0` to one of several one-dimensional environment geometries.
//! Hoppings enter with an explicit minus sign: a bond of strength `t`
//! contributes `H[i][j] = H[j][i] = -t`.

use crate::eig::ColMat;
use crate::{Error, Result};
use serde::Serialize;

/// Model topology.
///
/// * `I`   bare site A heading a semi-infinite chain
/// * `II`  bare site A attached laterally to an infinite chain
/// * `III` dimer A-B, B heading a semi-infinite chain
/// * `IV`  dimer A-B, B attached laterally to an infinite chain
/// * `V`   dimer A-B, A and B each laterally attached to separate infinite
///   chains
/// * `VI`  dimer A-B bridging an infinite chain: A couples to site -1 and B
///   to site +1 of a chain with no site 0
/// * `FiveSite` open five-site chain, every site coupled to a distinct
///   consecutive site of one infinite chain
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum CaseId {
    I,
    II,
    III,
    IV,
    V,
    VI,
    FiveSite,
}

impl CaseId {
    pub const ALL: [CaseId; 7] = [
        CaseId::I,
        CaseId::II,
        CaseId::III,
        CaseId::IV,
        CaseId::V,
        CaseId::VI,
        CaseId::FiveSite,
    ];

    /// True for the geometries where both system sites touch the
    /// environment, so forward and backward effective Hamiltonians differ in
    /// more than a gauge.
    pub fn is_public(&self) -> bool {
        matches!(self, CaseId::V | CaseId::VI | CaseId::FiveSite)
    }
}

impl std::fmt::Display for CaseId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            CaseId::I => "I",
            CaseId::II => "II",
            CaseId::III => "III",
            CaseId::IV => "IV",
            CaseId::V => "V",
            CaseId::VI => "VI",
            CaseId::FiveSite => "FiveSite",
        };
        write!(f, "{s}")
    }
}

impl std::str::FromStr for CaseId {
    type Err = Error;

    fn from_str(s: &str) -> Result<CaseId> {
        match s.trim().to_ascii_lowercase().as_str() {
            "i" => Ok(CaseId::I),
            "ii" => Ok(CaseId::II),
            "iii" => Ok(CaseId::III),
            "iv" => Ok(CaseId::IV),
            "v" => Ok(CaseId::V),
            "vi" => Ok(CaseId::VI),
            "fivesite" | "five-site" => Ok(CaseId::FiveSite),
            other => Err(Error::InvalidSpec(format!(
                "unknown case '{other}' (expected I, II, III, IV, V, VI or FiveSite)"
            ))),
        }
    }
}

/// Role of one lattice site.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SiteLabel {
    A,
    B,
    /// Environment site `n` of chain `chain`.
    Env { chain: u8, n: i32 },
    /// Site `k` of the five-site system chain.
    Sys { k: u8 },
}

impl SiteLabel {
    pub fn is_system(&self) -> bool {
        matches!(self, SiteLabel::A | SiteLabel::B | SiteLabel::Sys { .. })
    }
}

/// Full model parameters. Energies default to zero, `v_ab` and `v_s` to one.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SystemSpec {
    pub case_id: CaseId,
    /// Intra-system hopping between A and B.
    pub v_ab: f64,
    /// System-environment hopping.
    pub v0: f64,
    /// Intra-environment hopping; the band spans `[e_env - 2v, e_env + 2v]`.
    pub v: f64,
    pub e_a: f64,
    pub e_b: f64,
    pub e_env: f64,
    /// Environment sites per semi-infinite branch.
    pub n_env: usize,
    /// Hopping of the five-site system chain (FiveSite only).
    pub v_s: f64,
}

impl SystemSpec {
    pub fn new(case_id: CaseId, v0: f64, v: f64, n_env: usize) -> SystemSpec {
        SystemSpec {
            case_id,
            v_ab: 1.0,
            v0,
            v,
            e_a: 0.0,
            e_b: 0.0,
            e_env: 0.0,
            n_env,
            v_s: 1.0,
        }
    }

    /// Smallest environment length that keeps the traveling front, moving at
    /// group velocity `2v`, away from the open ends over `[0, t_max]` with a
    /// 1.5x safety margin.
    pub fn min_n_env(v: f64, t_max: f64) -> usize {
        (1.5 * 2.0 * v * t_max).ceil() as usize
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("v_ab", self.v_ab),
            ("v0", self.v0),
            ("v", self.v),
            ("e_a", self.e_a),
            ("e_b", self.e_b),
            ("e_env", self.e_env),
            ("v_s", self.v_s),
        ];
        for (name, x) in fields {
            if !x.is_finite() {
                return Err(Error::InvalidSpec(format!("{name} must be finite")));
            }
        }
        if self.v <= 0.0 {
            return Err(Error::InvalidSpec("v must be positive".into()));
        }
        if self.v0 < 0.0 {
            return Err(Error::InvalidSpec("v0 must be non-negative".into()));
        }
        if self.v0 > 0.5 * self.v {
            return Err(Error::InvalidSpec(format!(
                "v0 = {} exceeds the weak-coupling bound 0.5 v = {}",
                self.v0,
                0.5 * self.v
            )));
        }
        match self.case_id {
            CaseId::I | CaseId::II => {}
            CaseId::FiveSite => {
                if self.v_s <= 0.0 {
                    return Err(Error::InvalidSpec("v_s must be positive".into()));
                }
            }
            _ => {
                if self.v_ab <= 0.0 {
                    return Err(Error::InvalidSpec("v_ab must be positive".into()));
                }
            }
        }
        if self.n_env < 1 {
            return Err(Error::InvalidSpec("n_env must be at least 1".into()));
        }
        Ok(())
    }

    /// Errors out when `n_env` cannot keep end reflections away from the
    /// system over `[0, t_max]`.
    pub fn check_horizon(&self, t_max: f64) -> Result<()> {
        let need = SystemSpec::min_n_env(self.v, t_max);
        if self.n_env < need {
            return Err(Error::InvalidSpec(format!(
                "n_env = {} is too small for t_max = {}: end reflections reach \
                 the system; need n_env >= {}",
                self.n_env, t_max, need
            )));
        }
        Ok(())
    }
}

/// Dense real symmetric Hamiltonian with per-site role labels.
#[derive(Clone, Debug)]
pub struct HamiltonianMatrix {
    dim: usize,
    entries: Vec<f64>,
    site_labels: Vec<SiteLabel>,
}

impl HamiltonianMatrix {
    pub fn zeros(site_labels: Vec<SiteLabel>) -> HamiltonianMatrix {
        let dim = site_labels.len();
        HamiltonianMatrix {
            dim,
            entries: vec![0.0; dim * dim],
            site_labels,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn site_labels(&self) -> &[SiteLabel] {
        &self.site_labels
    }

    pub fn index_of(&self, label: SiteLabel) -> Option<usize> {
        self.site_labels.iter().position(|&l| l == label)
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.dim + j]
    }

    pub fn set_sym(&mut self, i: usize, j: usize, x: f64) {
        self.entries[i * self.dim + j] = x;
        self.entries[j * self.dim + i] = x;
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().fold(0.0f64, |m, x| m.max(x.abs()))
    }

    pub fn is_tridiagonal(&self) -> bool {
        for i in 0..self.dim {
            for j in i + 2..self.dim {
                if self.get(i, j) != 0.0 {
                    return false;
                }
            }
        }
        true
    }

    /// Column-major copy; the matrix is symmetric, so no transposition is
    /// involved.
    pub fn to_colmat(&self) -> ColMat {
        ColMat::from_vec(self.dim, self.dim, self.entries.clone())
    }
}

fn chain_labels(chain: u8, lo: i32, hi: i32, skip_zero: bool) -> Vec<SiteLabel> {
    (lo..=hi)
        .filter(|&n| !(skip_zero && n == 0))
        .map(|n| SiteLabel::Env { chain, n })
        .collect()
}

/// Adds `-v` bonds between environment sites of `chain` whose indices `n`
/// are adjacent in the sorted site list (site 0 may be absent, in which case
/// -1 and +1 are adjacent).
fn wire_chain(h: &mut HamiltonianMatrix, chain: u8, v: f64, e_env: f64) {
    let mut members: Vec<(i32, usize)> = h
        .site_labels()
        .iter()
        .enumerate()
        .filter_map(|(i, &l)| match l {
            SiteLabel::Env { chain: c, n } if c == chain => Some((n, i)),
            _ => None,
        })
        .collect();
    members.sort_unstable();
    for &(_, i) in &members {
        h.set_sym(i, i, e_env);
    }
    for w in members.windows(2) {
        h.set_sym(w[0].1, w[1].1, -v);
    }
}

/// Builds the forward Hamiltonian for `spec`.
pub fn build_hamiltonian(spec: &SystemSpec) -> Result<HamiltonianMatrix> {
    spec.validate()?;
    let n = spec.n_env as i32;
    let (v0, v, vab) = (spec.v0, spec.v, spec.v_ab);

    let mut h = match spec.case_id {
        CaseId::I => {
            let mut labels = vec![SiteLabel::A];
            labels.extend(chain_labels(0, 1, n, false));
            let mut h = HamiltonianMatrix::zeros(labels);
            wire_chain(&mut h, 0, v, spec.e_env);
            let first = h.index_of(SiteLabel::Env { chain: 0, n: 1 }).unwrap();
            h.set_sym(0, first, -v0);
            h
        }
        CaseId::II => {
            let mut labels = vec![SiteLabel::A];
            labels.extend(chain_labels(0, -n, n, false));
            let mut h = HamiltonianMatrix::zeros(labels);
            wire_chain(&mut h, 0, v, spec.e_env);
            let mid = h.index_of(SiteLabel::Env { chain: 0, n: 0 }).unwrap();
            h.set_sym(0, mid, -v0);
            h
        }
        CaseId::III => {
            let mut labels = vec![SiteLabel::A, SiteLabel::B];
            labels.extend(chain_labels(0, 1, n, false));
            let mut h = HamiltonianMatrix::zeros(labels);
            wire_chain(&mut h, 0, v, spec.e_env);
            h.set_sym(0, 1, -vab);
            let first = h.index_of(SiteLabel::Env { chain: 0, n: 1 }).unwrap();
            h.set_sym(1, first, -v0);
            h
        }
        CaseId::IV => {
            let mut labels = vec![SiteLabel::A, SiteLabel::B];
            labels.extend(chain_labels(0, -n, n, false));
            let mut h = HamiltonianMatrix::zeros(labels);
            wire_chain(&mut h, 0, v, spec.e_env);
            h.set_sym(0, 1, -vab);
            let mid = h.index_of(SiteLabel::Env { chain: 0, n: 0 }).unwrap();
            h.set_sym(1, mid, -v0);
            h
        }
        CaseId::V => {
            let mut labels = vec![SiteLabel::A, SiteLabel::B];
            labels.extend(chain_labels(0, -n, n, false));
            labels.extend(chain_labels(1, -n, n, false));
            let mut h = HamiltonianMatrix::zeros(labels);
            wire_chain(&mut h, 0, v, spec.e_env);
            wire_chain(&mut h, 1, v, spec.e_env);
            h.set_sym(0, 1, -vab);
            let mid_a = h.index_of(SiteLabel::Env { chain: 0, n: 0 }).unwrap();
            let mid_b = h.index_of(SiteLabel::Env { chain: 1, n: 0 }).unwrap();
            h.set_sym(0, mid_a, -v0);
            h.set_sym(1, mid_b, -v0);
            h
        }
        CaseId::VI => {
            let mut labels = vec![SiteLabel::A, SiteLabel::B];
            labels.extend(chain_labels(0, -n, n, true));
            let mut h = HamiltonianMatrix::zeros(labels);
            wire_chain(&mut h, 0, v, spec.e_env);
            h.set_sym(0, 1, -vab);
            let left = h.index_of(SiteLabel::Env { chain: 0, n: -1 }).unwrap();
            let right = h.index_of(SiteLabel::Env { chain: 0, n: 1 }).unwrap();
            h.set_sym(0, left, -v0);
            h.set_sym(1, right, -v0);
            h
        }
        CaseId::FiveSite => {
            let mut labels: Vec<SiteLabel> = (0..5).map(|k| SiteLabel::Sys { k }).collect();
            labels.extend(chain_labels(0, -n, n, false));
            let mut h = HamiltonianMatrix::zeros(labels);
            wire_chain(&mut h, 0, v, spec.e_env);
            for k in 0..4usize {
                h.set_sym(k, k + 1, -spec.v_s);
            }
            for k in 0..5i32 {
                let env = h
                    .index_of(SiteLabel::Env { chain: 0, n: k - 2 })
                    .ok_or_else(|| {
                        Error::InvalidSpec("n_env must be at least 2 for FiveSite".into())
                    })?;
                h.set_sym(k as usize, env, -v0);
            }
            h
        }
    };

    if let Some(i) = h.index_of(SiteLabel::A) {
        h.set_sym(i, i, spec.e_a);
    }
    if let Some(i) = h.index_of(SiteLabel::B) {
        h.set_sym(i, i, spec.e_b);
    }
    Ok(h)
}

/// Builds the backward effective Hamiltonian: the system block (site
/// energies of A and B, the A-B bond, and for FiveSite the whole five-site
/// chain block) changes sign, while the environment and the `v0` couplings
/// are left untouched.
pub fn backward_hamiltonian(spec: &SystemSpec) -> Result<HamiltonianMatrix> {
    let mut h = build_hamiltonian(spec)?;
    let system: Vec<usize> = h
        .site_labels()
        .iter()
        .enumerate()
        .filter_map(|(i, l)| l.is_system().then_some(i))
        .collect();
    for &i in &system {
        for &j in &system {
            if i <= j {
                let x = h.get(i, j);
                if x != 0.0 {
                    h.set_sym(i, j, -x);
                }
            }
        }
    }
    Ok(h)
}
