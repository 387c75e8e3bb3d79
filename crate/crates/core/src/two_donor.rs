//! Two exchange-coupled donors: the 16-state electron–nuclear Hamiltonian,
//! its block structure, the m+M = −1 anticrossing sector and adiabatic
//! label tracking through the singlet/triplet crossing.
//!
//! Product basis `|M_a, M_b, m_a, m_b⟩` is ordered lexicographically with
//! −½ before +½, so the index is `8[M_a=+½] + 4[M_b=+½] + 2[m_a=+½] + [m_b=+½]`.
//! Coupled states `|S,M; I,m⟩` are reached with the standard spin-½ ⊗ ½
//! tables: triplet |1,1⟩ = ↑↑, |1,0⟩ = (↑↓ + ↓↑)/√2, |1,−1⟩ = ↓↓ and singlet
//! |0,0⟩ = (↑↓ − ↓↑)/√2, the first arrow belonging to donor a.

use std::fmt;

use serde::Serialize;

use crate::constants::PhysicalConstants;
use crate::error::{Error, Result};
use crate::numerics::{dot, eig_sym, eigvals_sym, EigenSystem, SymmetricMatrix};
use crate::parallel::{map_slice, ExecMode};

/// Energies in MHz, field in T.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TwoDonorConfig {
    pub b: f64,
    /// Exchange constant; J > 0 gives a singlet ground state at B = 0.
    pub j: f64,
    pub a_a: f64,
    pub a_b: f64,
    pub g_n: f64,
}

impl TwoDonorConfig {
    pub fn symmetric(b: f64, j: f64, a: f64, g_n: f64) -> Self {
        TwoDonorConfig { b, j, a_a: a, a_b: a, g_n }
    }

    /// Donors a and b interchanged.
    pub fn swapped(self) -> Self {
        TwoDonorConfig { a_a: self.a_b, a_b: self.a_a, ..self }
    }

    pub fn with_exchange(self, j: f64) -> Self {
        TwoDonorConfig { j, ..self }
    }

    fn require_equal_hyperfine(&self) -> Result<f64> {
        if self.a_a == self.a_b {
            Ok(self.a_a)
        } else {
            Err(Error::InvalidInput(format!(
                "closed form needs A_a = A_b, got {} and {}",
                self.a_a, self.a_b
            )))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct ProductState {
    /// true = +½
    pub e_a: bool,
    pub e_b: bool,
    pub n_a: bool,
    pub n_b: bool,
}

fn half(up: bool) -> f64 {
    if up {
        0.5
    } else {
        -0.5
    }
}

impl ProductState {
    pub fn from_index(i: usize) -> Self {
        ProductState {
            e_a: i & 8 != 0,
            e_b: i & 4 != 0,
            n_a: i & 2 != 0,
            n_b: i & 1 != 0,
        }
    }

    pub fn index(&self) -> usize {
        (self.e_a as usize) << 3 | (self.e_b as usize) << 2 | (self.n_a as usize) << 1 | self.n_b as usize
    }

    /// (M_a, M_b, m_a, m_b)
    pub fn projections(&self) -> (f64, f64, f64, f64) {
        (half(self.e_a), half(self.e_b), half(self.n_a), half(self.n_b))
    }

    /// m + M, an integer in −2..=2.
    pub fn total_projection(&self) -> i32 {
        [self.e_a, self.e_b, self.n_a, self.n_b]
            .iter()
            .map(|&u| if u { 1 } else { -1 })
            .sum::<i32>()
            / 2
    }
}

pub fn product_basis() -> Vec<ProductState> {
    (0..16).map(ProductState::from_index).collect()
}

pub const TWO_DONOR_DIM: usize = 16;

/// Ĥ = 2μ_B B (S_za + S_zb) + J S_a·S_b − g_N μ_N B (I_za + I_zb) + A_a I_a·S_a + A_b I_b·S_b.
pub fn two_donor_hamiltonian(consts: &PhysicalConstants, cfg: &TwoDonorConfig) -> SymmetricMatrix {
    let ez = consts.electron_zeeman(cfg.b);
    let nz = consts.nuclear_zeeman(cfg.g_n, cfg.b);
    let mut h = SymmetricMatrix::zeros(TWO_DONOR_DIM);
    for i in 0..TWO_DONOR_DIM {
        let s = ProductState::from_index(i);
        let (ma, mb, na, nb) = s.projections();
        h.set(
            i,
            i,
            ez * (ma + mb) + cfg.j * ma * mb - nz * (na + nb) + cfg.a_a * ma * na + cfg.a_b * mb * nb,
        );
        // flip-flop terms (X+Y- + X-Y+)/2, each pair visited once from its lower index
        let mut flip = |t: ProductState, coupling: f64| {
            let k = t.index();
            if k > i {
                h.set(i, k, coupling / 2.0);
            }
        };
        if s.e_a != s.e_b {
            flip(ProductState { e_a: s.e_b, e_b: s.e_a, ..s }, cfg.j);
        }
        if s.e_a != s.n_a {
            flip(ProductState { e_a: s.n_a, n_a: s.e_a, ..s }, cfg.a_a);
        }
        if s.e_b != s.n_b {
            flip(ProductState { e_b: s.n_b, n_b: s.e_b, ..s }, cfg.a_b);
        }
    }
    h
}

/// `|S,M; I,m⟩`: electron pair (S, M), nuclear pair (I, m).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct CoupledBasisState {
    pub s: u8,
    pub m_e: i8,
    pub i: u8,
    pub m_n: i8,
}

const PAIR_STATES: [(u8, i8); 4] = [(1, 1), (1, 0), (1, -1), (0, 0)];

fn pair_amplitudes(total: u8, proj: i8) -> Vec<((bool, bool), f64)> {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    match (total, proj) {
        (1, 1) => vec![((true, true), 1.0)],
        (1, 0) => vec![((true, false), r), ((false, true), r)],
        (1, -1) => vec![((false, false), 1.0)],
        (0, 0) => vec![((true, false), r), ((false, true), -r)],
        _ => unreachable!("invalid spin-½ pair state ({total}, {proj})"),
    }
}

impl CoupledBasisState {
    pub const fn new(s: u8, m_e: i8, i: u8, m_n: i8) -> Self {
        CoupledBasisState { s, m_e, i, m_n }
    }

    /// All 16 labels, electron pair outer, in (1,1), (1,0), (1,−1), (0,0) order.
    pub fn all() -> Vec<CoupledBasisState> {
        PAIR_STATES
            .iter()
            .flat_map(|&(s, m_e)| PAIR_STATES.iter().map(move |&(i, m_n)| CoupledBasisState { s, m_e, i, m_n }))
            .collect()
    }

    pub fn total_projection(&self) -> i32 {
        (self.m_e + self.m_n) as i32
    }

    /// Components in the product basis.
    pub fn vector(&self) -> Vec<f64> {
        let mut v = vec![0.0; TWO_DONOR_DIM];
        for ((e_a, e_b), ce) in pair_amplitudes(self.s, self.m_e) {
            for ((n_a, n_b), cn) in pair_amplitudes(self.i, self.m_n) {
                v[ProductState { e_a, e_b, n_a, n_b }.index()] += ce * cn;
            }
        }
        v
    }
}

impl fmt::Display for CoupledBasisState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|{},{};{},{}>", self.s, self.m_e, self.i, self.m_n)
    }
}

/// Matrix of `h` (16×16, product basis) in the span of the given coupled states.
pub fn coupled_matrix(h: &SymmetricMatrix, states: &[CoupledBasisState]) -> SymmetricMatrix {
    let cols: Vec<Vec<f64>> = states.iter().map(|s| s.vector()).collect();
    h.project(&cols)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Block {
    /// m + M
    pub projection: i32,
    /// Product-basis indices in this sector, ascending.
    pub indices: Vec<usize>,
    pub matrix: SymmetricMatrix,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockDecomposition {
    /// Ordered by projection −2..=2.
    pub blocks: Vec<Block>,
}

impl BlockDecomposition {
    pub fn dims(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.indices.len()).collect()
    }

    pub fn block(&self, projection: i32) -> Option<&Block> {
        self.blocks.iter().find(|b| b.projection == projection)
    }

    /// Union of block spectra, ascending.
    pub fn spectrum(&self) -> Result<Vec<f64>> {
        let mut all = Vec::with_capacity(TWO_DONOR_DIM);
        for b in &self.blocks {
            all.extend(eigvals_sym(&b.matrix)?);
        }
        all.sort_by(f64::total_cmp);
        Ok(all)
    }
}

pub const CROSS_SECTOR_TOL: f64 = 1e-12;

/// Splits a product-basis 16×16 Hamiltonian into its five m + M sectors.
pub fn block_decompose(h: &SymmetricMatrix) -> Result<BlockDecomposition> {
    if h.dim() != TWO_DONOR_DIM {
        return Err(Error::InvalidInput(format!("expected 16x16, got {}x{}", h.dim(), h.dim())));
    }
    let labels = product_basis();
    for r in 0..TWO_DONOR_DIM {
        for c in r + 1..TWO_DONOR_DIM {
            let (pr, pc) = (labels[r].total_projection(), labels[c].total_projection());
            if pr != pc && h.get(r, c).abs() > CROSS_SECTOR_TOL {
                return Err(Error::Structure { row: r, col: c, value: h.get(r, c), sector_row: pr, sector_col: pc });
            }
        }
    }
    let blocks = (-2..=2)
        .map(|p| {
            let indices: Vec<usize> = (0..TWO_DONOR_DIM).filter(|&i| labels[i].total_projection() == p).collect();
            let matrix = h.submatrix(&indices);
            Block { projection: p, indices, matrix }
        })
        .collect();
    Ok(BlockDecomposition { blocks })
}

/// E₀(S, M) = J[S(S+1)/2 − 3/4] + 2μ_B B M, in MHz.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UnperturbedLevels {
    pub singlet: f64,
    /// M = −1, 0, +1
    pub triplet: [f64; 3],
}

impl UnperturbedLevels {
    pub fn get(&self, s: u8, m: i8) -> Option<f64> {
        match (s, m) {
            (0, 0) => Some(self.singlet),
            (1, -1..=1) => Some(self.triplet[(m + 1) as usize]),
            _ => None,
        }
    }
}

pub fn unperturbed_levels(consts: &PhysicalConstants, b: f64, j: f64) -> UnperturbedLevels {
    let ez = consts.electron_zeeman(b);
    UnperturbedLevels {
        singlet: -0.75 * j,
        triplet: [0.25 * j - ez, 0.25 * j, 0.25 * j + ez],
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Regime {
    /// J < 2μ_B B: |1,−1⟩ is the electronic ground state.
    TripletGround,
    /// J > 2μ_B B: the singlet is lowest.
    SingletGround,
}

impl Regime {
    pub fn of(consts: &PhysicalConstants, cfg: &TwoDonorConfig) -> Regime {
        if cfg.j < consts.electron_zeeman(cfg.b) {
            Regime::TripletGround
        } else {
            Regime::SingletGround
        }
    }
}

/// First-order hyperfine corrections to the ground electronic level.
pub fn first_order_splittings(
    consts: &PhysicalConstants,
    cfg: &TwoDonorConfig,
    regime: Regime,
) -> Result<[(CoupledBasisState, f64); 4]> {
    if Regime::of(consts, cfg) != regime {
        return Err(Error::InvalidInput(format!("{regime:?} requested but configuration is {:?}", Regime::of(consts, cfg))));
    }
    let nz = consts.nuclear_zeeman(cfg.g_n, cfg.b);
    let s = CoupledBasisState::new;
    Ok(match regime {
        Regime::TripletGround => {
            let shift = nz + (cfg.a_a + cfg.a_b) / 4.0;
            [
                (s(1, -1, 1, -1), shift),
                (s(1, -1, 0, 0), 0.0),
                (s(1, -1, 1, 0), 0.0),
                (s(1, -1, 1, 1), -shift),
            ]
        }
        Regime::SingletGround => [
            (s(0, 0, 1, -1), nz),
            (s(0, 0, 0, 0), 0.0),
            (s(0, 0, 1, 0), 0.0),
            (s(0, 0, 1, 1), -nz),
        ],
    })
}

/// Non-secular hyperfine matrix elements linking the singlet and |1,−1⟩ manifolds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NonsecularElements {
    /// ⟨0,0;0,0|ΔĤ|1,−1;1,1⟩ = −(A_a + A_b)/4
    pub s00_t11: f64,
    /// ⟨0,0;1,−1|ΔĤ|1,−1;1,0⟩ = (A_a − A_b)/4
    pub s1m1_t10: f64,
    /// ⟨0,0;1,−1|ΔĤ|1,−1;0,0⟩ = (A_a + A_b)/4
    pub s1m1_t00: f64,
    /// ⟨0,0;1,0|ΔĤ|1,−1;1,1⟩ = (A_a − A_b)/4
    pub s10_t11: f64,
}

impl NonsecularElements {
    pub fn as_array(&self) -> [f64; 4] {
        [self.s00_t11, self.s1m1_t10, self.s1m1_t00, self.s10_t11]
    }

    /// (bra, ket) labels in `as_array` order.
    pub fn labels() -> [(CoupledBasisState, CoupledBasisState); 4] {
        let s = CoupledBasisState::new;
        [
            (s(0, 0, 0, 0), s(1, -1, 1, 1)),
            (s(0, 0, 1, -1), s(1, -1, 1, 0)),
            (s(0, 0, 1, -1), s(1, -1, 0, 0)),
            (s(0, 0, 1, 0), s(1, -1, 1, 1)),
        ]
    }
}

pub fn nonsecular_elements(cfg: &TwoDonorConfig) -> NonsecularElements {
    let sum = (cfg.a_a + cfg.a_b) / 4.0;
    let diff = (cfg.a_a - cfg.a_b) / 4.0;
    NonsecularElements { s00_t11: -sum, s1m1_t10: diff, s1m1_t00: sum, s10_t11: diff }
}

/// Basis of the reduced anticrossing matrix (all with m + M = −1).
pub const REDUCED_BASIS: [CoupledBasisState; 4] = [
    CoupledBasisState::new(1, -1, 0, 0),
    CoupledBasisState::new(1, -1, 1, 0),
    CoupledBasisState::new(1, 0, 1, -1),
    CoupledBasisState::new(0, 0, 1, -1),
];

/// The published 4×4 reduced Hamiltonian, entry for entry.
///
/// Its (A_a − A_b)/4 entries at (1,2), (1,3), (2,4) carry the opposite sign to
/// the exact projection; see [`projected_reduced_hamiltonian`].
pub fn reduced_hamiltonian(consts: &PhysicalConstants, cfg: &TwoDonorConfig) -> SymmetricMatrix {
    let ez = consts.electron_zeeman(cfg.b);
    let nz = consts.nuclear_zeeman(cfg.g_n, cfg.b);
    let q = cfg.j / 4.0;
    let d = (cfg.a_a - cfg.a_b) / 4.0;
    let s = (cfg.a_a + cfg.a_b) / 4.0;
    let rows = [
        [q - ez, d, -d, s],
        [d, q - ez, s, -d],
        [-d, s, nz + q, -d],
        [s, -d, -d, nz - 3.0 * q],
    ];
    SymmetricMatrix::from_upper(4, |i, j| rows[i][j])
}

/// Exact m + M = −1 sector of the full Hamiltonian in [`REDUCED_BASIS`].
pub fn projected_reduced_hamiltonian(consts: &PhysicalConstants, cfg: &TwoDonorConfig) -> SymmetricMatrix {
    coupled_matrix(&two_donor_hamiltonian(consts, cfg), &REDUCED_BASIS)
}

/// projected − published; identically zero when A_a = A_b.
pub fn reduced_projection_discrepancy(consts: &PhysicalConstants, cfg: &TwoDonorConfig) -> SymmetricMatrix {
    let p = projected_reduced_hamiltonian(consts, cfg);
    let r = reduced_hamiltonian(consts, cfg);
    SymmetricMatrix::from_upper(4, |i, j| p.get(i, j) - r.get(i, j))
}

/// Closed-form eigenvalues of the reduced matrix for A_a = A_b.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClosedFormEigs {
    /// Symmetric pair, from |1,−1;1,0⟩ and |1,0;1,−1⟩.
    pub sym_plus: f64,
    pub sym_minus: f64,
    /// Antisymmetric pair, from |1,−1;0,0⟩ and |0,0;1,−1⟩.
    pub anti_plus: f64,
    pub anti_minus: f64,
}

impl ClosedFormEigs {
    pub fn ascending(&self) -> [f64; 4] {
        let mut v = [self.sym_plus, self.sym_minus, self.anti_plus, self.anti_minus];
        v.sort_by(f64::total_cmp);
        v
    }
}

pub fn closed_form_eigs(consts: &PhysicalConstants, cfg: &TwoDonorConfig) -> Result<ClosedFormEigs> {
    let a = cfg.require_equal_hyperfine()?;
    let half_ez = consts.electron_zeeman(cfg.b) / 2.0; // μ_B B
    let half_nz = consts.nuclear_zeeman(cfg.g_n, cfg.b) / 2.0;
    let half_a = a / 2.0;
    let q = cfg.j / 4.0;
    let rs = (half_ez + half_nz).hypot(half_a);
    let ra = (half_ez + half_nz - cfg.j / 2.0).hypot(half_a);
    Ok(ClosedFormEigs {
        sym_plus: half_nz + q - half_ez + rs,
        sym_minus: half_nz + q - half_ez - rs,
        anti_plus: half_nz - q - half_ez + ra,
        anti_minus: half_nz - q - half_ez - ra,
    })
}

/// Residual of the quartic characteristic equation at `e`, relative to the
/// larger of its two squared terms.
pub fn quartic_residual(consts: &PhysicalConstants, cfg: &TwoDonorConfig, e: f64) -> Result<f64> {
    let a = cfg.require_equal_hyperfine()?;
    let ez = consts.electron_zeeman(cfg.b);
    let nz = consts.nuclear_zeeman(cfg.g_n, cfg.b);
    let p = cfg.j / 4.0 - ez - e;
    let first = (p * (nz - cfg.j / 4.0 - e) - a * a / 4.0).powi(2);
    let second = (p * cfg.j / 2.0).powi(2);
    let scale = first.max(second);
    Ok(if scale == 0.0 { 0.0 } else { (first - second).abs() / scale })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum NuJVariant {
    /// E₋ˢ − E₋ᵃ from the closed forms.
    #[default]
    Exact,
    /// (A/2)²/(2μ_B B − J) − (A/2)²/(2μ_B B), for J ≪ 2μ_B B.
    WeakExchange,
    /// A/2, at the crossing.
    AtCrossing,
    /// J − 2μ_B B, for J ≫ 2μ_B B.
    StrongExchange,
}

/// Indirect nuclear coupling ν_J in MHz (A_a = A_b).
pub fn nu_j(consts: &PhysicalConstants, cfg: &TwoDonorConfig, variant: NuJVariant) -> Result<f64> {
    let a = cfg.require_equal_hyperfine()?;
    let ez = consts.electron_zeeman(cfg.b);
    let half_a2 = (a / 2.0).powi(2);
    Ok(match variant {
        NuJVariant::Exact => {
            // E₋ˢ − E₋ᵃ = J/2 − √(s² + a²) + √(t² + a²) with s = μ_B B + g_Nμ_N B/2, t = s − J/2;
            // the large terms are cancelled analytically
            let s = ez / 2.0 + consts.nuclear_zeeman(cfg.g_n, cfg.b) / 2.0;
            let t = s - cfg.j / 2.0;
            let tail = |x: f64| half_a2 / (x.hypot(a / 2.0) + x.abs());
            let linear = cfg.j / 2.0 - s.abs() + t.abs();
            linear - tail(s) + tail(t)
        }
        NuJVariant::WeakExchange => half_a2 / (ez - cfg.j) - half_a2 / ez,
        NuJVariant::AtCrossing => a / 2.0,
        NuJVariant::StrongExchange => cfg.j - ez,
    })
}

/// J at which the antisymmetric pair is closest: 2μ_B B + g_N μ_N B.
pub fn anticrossing_exchange(consts: &PhysicalConstants, b: f64, g_n: f64) -> f64 {
    consts.electron_zeeman(b) + consts.nuclear_zeeman(g_n, b)
}

/// J sweep at fixed field and hyperfine constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrackPath {
    pub b: f64,
    pub a_a: f64,
    pub a_b: f64,
    pub g_n: f64,
    pub j_lo: f64,
    pub j_hi: f64,
    pub points: usize,
}

impl TrackPath {
    pub fn config(&self, j: f64) -> TwoDonorConfig {
        TwoDonorConfig { b: self.b, j, a_a: self.a_a, a_b: self.a_b, g_n: self.g_n }
    }
}

pub const MIN_TRACK_POINTS: usize = 1000;
pub const STEP_OVERLAP_MIN: f64 = 0.6;
/// Half-width of the refined window around the crossing, relative.
pub const REFINE_HALF_WIDTH: f64 = 0.05;

fn spaced(lo: f64, hi: f64, n: usize, log: bool) -> Vec<f64> {
    if n < 2 {
        return vec![lo, hi];
    }
    (0..n)
        .map(|k| {
            let f = k as f64 / (n - 1) as f64;
            if log && lo > 0.0 {
                (lo.ln() + f * (hi.ln() - lo.ln())).exp()
            } else {
                lo + f * (hi - lo)
            }
        })
        .collect()
}

/// Exchange grid: log-spaced outside ±5% of the anticrossing centre, uniform inside.
pub fn track_grid(consts: &PhysicalConstants, path: &TrackPath) -> Result<Vec<f64>> {
    if !(path.j_lo < path.j_hi) || !path.j_lo.is_finite() || !path.j_hi.is_finite() {
        return Err(Error::InvalidInput(format!("need j_lo < j_hi, got [{}, {}]", path.j_lo, path.j_hi)));
    }
    if path.points < MIN_TRACK_POINTS {
        return Err(Error::InvalidInput(format!("tracking needs at least {MIN_TRACK_POINTS} points, got {}", path.points)));
    }
    let jc = anticrossing_exchange(consts, path.b, path.g_n);
    let w_lo = (jc * (1.0 - REFINE_HALF_WIDTH)).max(path.j_lo);
    let w_hi = (jc * (1.0 + REFINE_HALF_WIDTH)).min(path.j_hi);
    let mut grid = if w_lo < w_hi {
        let fine = path.points / 2;
        let outer = path.points - fine;
        let below = if path.j_lo < w_lo { outer / 2 } else { 0 };
        let above = if w_hi < path.j_hi { outer - below } else { 0 };
        let mut g = Vec::with_capacity(path.points + 2);
        if below > 0 {
            g.extend(spaced(path.j_lo, w_lo, below + 1, true));
        }
        g.extend(spaced(w_lo, w_hi, fine + (outer - below - above), false));
        if above > 0 {
            g.extend(spaced(w_hi, path.j_hi, above + 1, true));
        }
        g
    } else {
        spaced(path.j_lo, path.j_hi, path.points, true)
    };
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    Ok(grid)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrackOutcome {
    pub initial: CoupledBasisState,
    /// |⟨initial|v(J_lo)⟩|
    pub initial_overlap: f64,
    pub final_label: CoupledBasisState,
    /// |⟨final_label|v(J_hi)⟩|
    pub final_overlap: f64,
    pub initial_energy: f64,
    pub final_energy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrackResult {
    pub grid: Vec<f64>,
    /// One entry per [`REDUCED_BASIS`] state.
    pub outcomes: Vec<TrackOutcome>,
    pub min_step_overlap: f64,
    /// Whether 2μ_B B lies strictly inside the sweep.
    pub crosses: bool,
}

impl TrackResult {
    pub fn outcome_for(&self, initial: CoupledBasisState) -> Option<&TrackOutcome> {
        self.outcomes.iter().find(|o| o.initial == initial)
    }
}

fn dominant(v: &[f64]) -> (usize, f64) {
    v.iter()
        .enumerate()
        .map(|(i, x)| (i, x.abs()))
        .fold((0, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best })
}

pub fn adiabatic_track(consts: &PhysicalConstants, path: &TrackPath) -> Result<TrackResult> {
    adiabatic_track_with(consts, path, ExecMode::default())
}

/// Follows each reduced-matrix eigenvector along the J grid by maximal overlap
/// between neighbouring points and reports the dominant label at each end.
pub fn adiabatic_track_with(consts: &PhysicalConstants, path: &TrackPath, mode: ExecMode) -> Result<TrackResult> {
    let grid = track_grid(consts, path)?;
    let systems: Vec<Result<EigenSystem>> =
        map_slice(&grid, mode, |&j| eig_sym(&projected_reduced_hamiltonian(consts, &path.config(j))));
    let systems: Vec<EigenSystem> = systems.into_iter().collect::<Result<_>>()?;

    let n = REDUCED_BASIS.len();
    let first = &systems[0];
    // tracked[k]: eigen index currently carrying initial label k
    let mut tracked: Vec<usize> = Vec::with_capacity(n);
    let mut vectors: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut initial_overlap = Vec::with_capacity(n);
    for k in 0..n {
        let (idx, ov) = (0..n)
            .map(|e| (e, first.vectors[e][k].abs()))
            .fold((0, -1.0), |b, c| if c.1 > b.1 { c } else { b });
        if tracked.contains(&idx) {
            return Err(Error::GridTooCoarse { j: grid[0], overlap: ov, threshold: STEP_OVERLAP_MIN });
        }
        tracked.push(idx);
        vectors.push(first.vectors[idx].clone());
        initial_overlap.push(ov);
    }

    let mut min_step = 1.0f64;
    for (step, sys) in systems.iter().enumerate().skip(1) {
        let mut taken = vec![false; n];
        for k in 0..n {
            let (best, ov) = (0..n)
                .map(|e| (e, dot(&vectors[k], &sys.vectors[e])))
                .fold((0, 0.0), |b, c| if c.1.abs() > f64::abs(b.1) { c } else { b });
            if ov.abs() < STEP_OVERLAP_MIN || taken[best] {
                return Err(Error::GridTooCoarse { j: grid[step], overlap: ov.abs(), threshold: STEP_OVERLAP_MIN });
            }
            taken[best] = true;
            min_step = min_step.min(ov.abs());
            tracked[k] = best;
            let sign = ov.signum();
            vectors[k] = sys.vectors[best].iter().map(|x| sign * x).collect();
        }
    }

    let last = systems.last().expect("grid is non-empty");
    let outcomes = (0..n)
        .map(|k| {
            let (label, ov) = dominant(&vectors[k]);
            TrackOutcome {
                initial: REDUCED_BASIS[k],
                initial_overlap: initial_overlap[k],
                final_label: REDUCED_BASIS[label],
                final_overlap: ov,
                initial_energy: first.values[first.vectors.iter().position(|v| dominant(v).0 == k).unwrap_or(k)],
                final_energy: last.values[tracked[k]],
            }
        })
        .collect();

    let jc = consts.electron_zeeman(path.b);
    Ok(TrackResult {
        crosses: path.j_lo < jc && jc < path.j_hi,
        grid,
        outcomes,
        min_step_overlap: min_step,
    })
}
