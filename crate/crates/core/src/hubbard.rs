//! Exact diagonalization of the open one-dimensional Hubbard chain in a
//! parabolic trap:
//!
//! ```text
//! H = -t Σ_{i,σ} (c†_{i+1σ} c_{iσ} + h.c.) + U Σ_i n_{i↑} n_{i↓} + Σ_i v_i n_i
//! v_i = ω (i - (L+1)/2)²,  i = 1..L
//! ```
//!
//! States live in a fixed `(n_up, n_down)` sector. Basis states are pairs of
//! occupation bitmasks (bit `i` = site `i`), ordered lexicographically by
//! `(up, down)`; all up operators are ordered before all down operators.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metric::{DensityDomain, DensityProfile, ManyBodyState, OverlapValue};
use crate::numerics::{eigh_lowest, lanczos_lowest, EigenPair, SymmetricMatrix};

/// Largest chain handled by the `u32` bitmask representation.
pub const MAX_SITES: usize = 24;

fn default_sites() -> usize {
    8
}

fn default_hopping() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HubbardParams {
    #[serde(default = "default_sites")]
    pub sites: usize,
    pub n_up: usize,
    pub n_down: usize,
    /// Hopping amplitude, the energy unit.
    #[serde(default = "default_hopping")]
    pub t: f64,
    /// On-site interaction.
    pub u: f64,
    /// Trap strength.
    pub omega: f64,
}

impl HubbardParams {
    pub fn new(sites: usize, n_up: usize, n_down: usize, u: f64, omega: f64) -> Self {
        HubbardParams {
            sites,
            n_up,
            n_down,
            t: 1.0,
            u,
            omega,
        }
    }

    pub fn particle_count(&self) -> usize {
        self.n_up + self.n_down
    }

    pub fn validate(&self) -> Result<()> {
        if self.sites < 2 || self.sites > MAX_SITES {
            return Err(Error::invalid(format!("chain length {} outside 2..={MAX_SITES}", self.sites)));
        }
        if self.n_up > self.sites || self.n_down > self.sites {
            return Err(Error::invalid(format!(
                "occupation ({}, {}) exceeds {} sites",
                self.n_up, self.n_down, self.sites
            )));
        }
        if self.particle_count() == 0 {
            return Err(Error::invalid("Hubbard sector needs at least one particle"));
        }
        if !(self.t >= 0.0) || !self.t.is_finite() {
            return Err(Error::invalid("hopping must be finite and non-negative"));
        }
        if !self.u.is_finite() {
            return Err(Error::invalid("interaction must be finite"));
        }
        if !(self.omega >= 0.0) || !self.omega.is_finite() {
            return Err(Error::invalid("trap strength must be finite and non-negative"));
        }
        Ok(())
    }

    pub fn same_sector(&self, other: &HubbardParams) -> bool {
        self.sites == other.sites && self.n_up == other.n_up && self.n_down == other.n_down
    }

    /// Trap potential `v_i` for sites `i = 1..L` (index 0-based here).
    pub fn trap_potential(&self) -> Vec<f64> {
        let center = (self.sites as f64 + 1.0) / 2.0;
        (1..=self.sites)
            .map(|i| self.omega * (i as f64 - center).powi(2))
            .collect()
    }
}

/// Occupation-number basis of one `(n_up, n_down)` sector.
#[derive(Debug, Clone, PartialEq)]
pub struct FockBasis {
    sites: usize,
    up: Vec<u32>,
    down: Vec<u32>,
}

fn masks_with_popcount(sites: usize, count: usize) -> Vec<u32> {
    (0u32..(1u32 << sites)).filter(|m| m.count_ones() as usize == count).collect()
}

pub fn enumerate_basis(sites: usize, n_up: usize, n_down: usize) -> Result<FockBasis> {
    if sites == 0 || sites > MAX_SITES {
        return Err(Error::invalid(format!("chain length {sites} outside 1..={MAX_SITES}")));
    }
    if n_up > sites || n_down > sites {
        return Err(Error::invalid(format!("occupation ({n_up}, {n_down}) exceeds {sites} sites")));
    }
    Ok(FockBasis {
        sites,
        up: masks_with_popcount(sites, n_up),
        down: masks_with_popcount(sites, n_down),
    })
}

impl FockBasis {
    pub fn dimension(&self) -> usize {
        self.up.len() * self.down.len()
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    /// `(up mask, down mask)` of basis state `index`.
    pub fn state(&self, index: usize) -> (u32, u32) {
        let nd = self.down.len();
        (self.up[index / nd], self.down[index % nd])
    }

    pub fn index_of(&self, up: u32, down: u32) -> Option<usize> {
        let iu = self.up.binary_search(&up).ok()?;
        let id = self.down.binary_search(&down).ok()?;
        Some(iu * self.down.len() + id)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.up.iter().flat_map(move |&u| self.down.iter().map(move |&d| (u, d)))
    }
}

/// Fermionic sign of moving a particle between sites `i` and `j`: the parity
/// of the occupied sites strictly between them.
fn hop_sign(mask: u32, i: usize, j: usize) -> f64 {
    let (lo, hi) = (i.min(j), i.max(j));
    let between = ((1u32 << hi) - 1) & !((1u32 << (lo + 1)) - 1);
    if (mask & between).count_ones().is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// Nearest-neighbour moves of one spin species: `(target mask index, sign)`.
fn hops(masks: &[u32], sites: usize) -> Vec<Vec<(usize, f64)>> {
    masks
        .iter()
        .map(|&m| {
            let mut out = Vec::new();
            for i in 0..sites - 1 {
                let (a, b) = (1u32 << i, 1u32 << (i + 1));
                if (m & a != 0) != (m & b != 0) {
                    let target = m ^ a ^ b;
                    let sign = hop_sign(m, i, i + 1);
                    let idx = masks.binary_search(&target).expect("hop stays in sector");
                    out.push((idx, sign));
                }
            }
            out
        })
        .collect()
}

/// Sparse symmetric Hamiltonian of one sector.
#[derive(Debug, Clone)]
pub struct HubbardHamiltonian {
    diag: Vec<f64>,
    /// Off-diagonal entries per row, `(column, value)`.
    rows: Vec<Vec<(u32, f64)>>,
}

impl HubbardHamiltonian {
    pub fn dimension(&self) -> usize {
        self.diag.len()
    }

    /// `out = H x`
    pub fn apply(&self, x: &[f64], out: &mut [f64]) {
        for (i, (d, row)) in self.diag.iter().zip(&self.rows).enumerate() {
            let mut acc = d * x[i];
            for &(j, v) in row {
                acc += v * x[j as usize];
            }
            out[i] = acc;
        }
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        if i == j {
            return self.diag[i];
        }
        self.rows[i].iter().filter(|(c, _)| *c as usize == j).map(|(_, v)| v).sum()
    }

    pub fn to_dense(&self) -> Result<SymmetricMatrix> {
        let n = self.dimension();
        let mut m = nalgebra::DMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = self.diag[i];
            for &(j, v) in &self.rows[i] {
                m[(i, j as usize)] += v;
            }
        }
        SymmetricMatrix::dense(m)
    }
}

pub fn build_hamiltonian(params: &HubbardParams) -> Result<(FockBasis, HubbardHamiltonian)> {
    params.validate()?;
    let basis = enumerate_basis(params.sites, params.n_up, params.n_down)?;
    let v = params.trap_potential();
    let up_hops = hops(&basis.up, params.sites);
    let down_hops = hops(&basis.down, params.sites);
    let nd = basis.down.len();
    let dim = basis.dimension();
    let mut diag = Vec::with_capacity(dim);
    let mut rows = Vec::with_capacity(dim);
    for (iu, &up) in basis.up.iter().enumerate() {
        for (id, &down) in basis.down.iter().enumerate() {
            let double = (up & down).count_ones() as f64;
            let trap: f64 = (0..params.sites)
                .map(|s| v[s] * (((up >> s) & 1) + ((down >> s) & 1)) as f64)
                .sum();
            diag.push(params.u * double + trap);
            let mut row = Vec::new();
            if params.t != 0.0 {
                for &(ju, sign) in &up_hops[iu] {
                    row.push(((ju * nd + id) as u32, -params.t * sign));
                }
                for &(jd, sign) in &down_hops[id] {
                    row.push(((iu * nd + jd) as u32, -params.t * sign));
                }
            }
            row.sort_by_key(|e| e.0);
            rows.push(row);
        }
    }
    Ok((basis, HubbardHamiltonian { diag, rows }))
}

/// Eigensolver selection for the Hubbard sectors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct HubbardSolver {
    /// Sectors up to this dimension are diagonalized densely.
    pub dense_limit: usize,
    /// Seed of the Lanczos start vectors.
    pub seed: u64,
}

impl Default for HubbardSolver {
    fn default() -> Self {
        HubbardSolver {
            dense_limit: 400,
            seed: 0x5eed,
        }
    }
}

/// Relative gap below which the ground state counts as degenerate.
pub const DEGENERACY_TOLERANCE: f64 = 1e-10;
const MAX_MANIFOLD: usize = 32;

#[derive(Debug, Clone)]
pub struct LatticeGroundState {
    pub params: HubbardParams,
    pub energy: f64,
    basis: FockBasis,
    coefficients: Vec<f64>,
    /// Orthonormal basis of the degenerate ground manifold (the chosen
    /// representative first). Holds one vector when non-degenerate.
    manifold: Vec<Vec<f64>>,
}

impl LatticeGroundState {
    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn basis(&self) -> &FockBasis {
        &self.basis
    }

    pub fn is_degenerate(&self) -> bool {
        self.manifold.len() > 1
    }

    pub fn degeneracy(&self) -> usize {
        self.manifold.len()
    }
}

impl HubbardSolver {
    pub fn lowest(&self, h: &HubbardHamiltonian, k: usize) -> Result<Vec<EigenPair>> {
        let dim = h.dimension();
        if dim <= self.dense_limit {
            eigh_lowest(&h.to_dense()?, k)
        } else {
            lanczos_lowest(|x, out| h.apply(x, out), dim, k, self.seed)
        }
    }

    pub fn ground_state(&self, params: &HubbardParams) -> Result<LatticeGroundState> {
        let (basis, h) = build_hamiltonian(params)?;
        let dim = basis.dimension();
        let mut k = if dim <= self.dense_limit { dim.min(MAX_MANIFOLD + 1) } else { dim.min(2) };
        loop {
            let pairs = self.lowest(&h, k)?;
            let e0 = pairs[0].value;
            let tol = DEGENERACY_TOLERANCE * e0.abs().max(1.0);
            let degenerate = pairs.iter().take_while(|p| p.value - e0 < tol).count();
            if degenerate < pairs.len() || k == dim || k > MAX_MANIFOLD {
                let manifold: Vec<Vec<f64>> = pairs.into_iter().take(degenerate).map(|p| p.vector).collect();
                return Ok(LatticeGroundState {
                    params: params.clone(),
                    energy: e0,
                    basis,
                    coefficients: manifold[0].clone(),
                    manifold,
                });
            }
            k = (2 * k).min(dim).min(MAX_MANIFOLD + 1);
        }
    }
}

pub fn ground_state(params: &HubbardParams) -> Result<LatticeGroundState> {
    HubbardSolver::default().ground_state(params)
}

/// Site occupations `⟨n_i↑ + n_i↓⟩`. A degenerate ground manifold is
/// represented by its equal-weight average, which does not depend on the
/// basis chosen inside the manifold.
pub fn site_density(gs: &LatticeGroundState) -> Result<DensityProfile> {
    let sites = gs.basis.sites;
    let mut rho = vec![0.0; sites];
    let weight = 1.0 / gs.manifold.len() as f64;
    for vector in &gs.manifold {
        for (c, (up, down)) in vector.iter().zip(gs.basis.iter()) {
            let p = weight * c * c;
            for (s, r) in rho.iter_mut().enumerate() {
                let occ = ((up >> s) & 1) + ((down >> s) & 1);
                if occ != 0 {
                    *r += p * occ as f64;
                }
            }
        }
    }
    DensityProfile::new(gs.params.particle_count(), DensityDomain::Lattice { sites }, rho)
}

pub fn lattice_overlap(a: &LatticeGroundState, b: &LatticeGroundState) -> Result<OverlapValue> {
    if !a.params.same_sector(&b.params) {
        return Err(Error::DomainMismatch(format!(
            "Hubbard sectors differ: L={} ({},{}) vs L={} ({},{})",
            a.params.sites, a.params.n_up, a.params.n_down, b.params.sites, b.params.n_up, b.params.n_down
        )));
    }
    let dot: f64 = a.coefficients.iter().zip(&b.coefficients).map(|(x, y)| x * y).sum();
    let na: f64 = a.coefficients.iter().map(|x| x * x).sum();
    let nb: f64 = b.coefficients.iter().map(|x| x * x).sum();
    OverlapValue::from_real(dot / (na * nb).sqrt())
}

impl ManyBodyState for LatticeGroundState {
    fn particle_count(&self) -> usize {
        self.params.particle_count()
    }

    fn overlap(&self, other: &Self) -> Result<OverlapValue> {
        lattice_overlap(self, other)
    }
}
