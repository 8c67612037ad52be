//! The qubit-subspace operator basis.
//!
//! For levels `i < j` (1-based throughout the public API):
//!
//! * `A_ij = |i⟩⟨j| + |j⟩⟨i|`
//! * `B_ij = -i|i⟩⟨j| + i|j⟩⟨i|`
//! * `O_k  = |k⟩⟨k|`
//! * `C_ij = -i/2 [A_ij, B_ij]`, which works out to `O_i - O_j`.
//!
//! `{O_k, A_ij, B_ij}` is orthogonal under `Tr(X† Y)` and spans all d×d
//! matrices. The three `C_ij` of a qutrit are linearly dependent
//! (`C_12 - C_13 + C_23 = 0`).

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{anticommutator, commutator, eigenvalues_hermitian, trace_inner, ComplexMatrix};

/// Largest supported dimension.
pub const MAX_DIM: usize = 8;

/// A pair of levels `i < j`, 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PairIndex {
    i: usize,
    j: usize,
}

impl PairIndex {
    pub const P12: PairIndex = PairIndex { i: 1, j: 2 };
    pub const P13: PairIndex = PairIndex { i: 1, j: 3 };
    pub const P23: PairIndex = PairIndex { i: 2, j: 3 };

    /// Qutrit pairs in storage order.
    pub const QUTRIT: [PairIndex; 3] = [Self::P12, Self::P13, Self::P23];

    /// `(j, i)` with `j < i` is read as `(i, j)`.
    pub fn new(i: usize, j: usize, d: usize) -> Result<Self> {
        let (lo, hi) = if i <= j { (i, j) } else { (j, i) };
        if lo == hi || lo == 0 || hi > d {
            return Err(Error::InvalidPair { i, j, d });
        }
        Ok(Self { i: lo, j: hi })
    }

    pub fn i(self) -> usize {
        self.i
    }

    pub fn j(self) -> usize {
        self.j
    }

    /// 0-based `(i, j)`.
    pub fn zero_based(self) -> (usize, usize) {
        (self.i - 1, self.j - 1)
    }

    /// The remaining level `k` of a qutrit pair.
    pub fn complement(self) -> usize {
        6 - self.i - self.j
    }

    /// Position of this pair in lexicographic order for dimension `d`.
    pub fn position(self, d: usize) -> usize {
        let (i, j) = self.zero_based();
        i * (2 * d - i - 1) / 2 + (j - i - 1)
    }

    /// All pairs of `1..=d` in lexicographic order.
    pub fn all(d: usize) -> Vec<PairIndex> {
        let mut out = Vec::with_capacity(d * d.saturating_sub(1) / 2);
        for i in 1..=d {
            for j in (i + 1)..=d {
                out.push(PairIndex { i, j });
            }
        }
        out
    }
}

impl fmt::Display for PairIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.i, self.j)
    }
}

/// One basis element (or derived `C` operator).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Generator {
    A(PairIndex),
    B(PairIndex),
    C(PairIndex),
    /// Projector on a single level, 1-based.
    O(usize),
}

impl Generator {
    pub fn pair(self) -> Option<PairIndex> {
        match self {
            Generator::A(p) | Generator::B(p) | Generator::C(p) => Some(p),
            Generator::O(_) => None,
        }
    }

    pub fn kind(self) -> char {
        match self {
            Generator::A(_) => 'A',
            Generator::B(_) => 'B',
            Generator::C(_) => 'C',
            Generator::O(_) => 'O',
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::O(k) => write!(f, "O{k}"),
            g => write!(f, "{}{}", g.kind(), g.pair().expect("pair generator")),
        }
    }
}

impl FromStr for Generator {
    type Err = Error;

    /// Accepts `A12`, `b13`, `C_23`, `O1`; reversed pairs such as `A21` are normalized.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidGenerator(s.to_string());
        let mut chars = s.trim().chars();
        let kind = chars.next().ok_or_else(bad)?.to_ascii_uppercase();
        let digits: Vec<usize> = chars
            .filter(|c| *c != '_')
            .map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(bad))
            .collect::<Result<_>>()?;
        match (kind, digits.as_slice()) {
            ('O', [k]) if (1..=MAX_DIM).contains(k) => Ok(Generator::O(*k)),
            ('A' | 'B' | 'C', [i, j]) => {
                let p = PairIndex::new(*i, *j, MAX_DIM).map_err(|_| bad())?;
                Ok(match kind {
                    'A' => Generator::A(p),
                    'B' => Generator::B(p),
                    _ => Generator::C(p),
                })
            }
            _ => Err(bad()),
        }
    }
}

fn check_pair(p: PairIndex, d: usize) -> Result<()> {
    if p.j > d {
        return Err(Error::InvalidPair { i: p.i, j: p.j, d });
    }
    Ok(())
}

/// The d×d matrix of a basis operator.
pub fn basis_operator(g: Generator, d: usize) -> Result<ComplexMatrix> {
    if !(1..=MAX_DIM).contains(&d) {
        return Err(Error::UnsupportedDimension(d));
    }
    let mut m = ComplexMatrix::zeros(d);
    match g {
        Generator::O(k) => {
            if k == 0 || k > d {
                return Err(Error::IndexOutOfRange { index: k, dim: d });
            }
            m[(k - 1, k - 1)] = Complex64::new(1.0, 0.0);
        }
        Generator::A(p) => {
            check_pair(p, d)?;
            let (i, j) = p.zero_based();
            m[(i, j)] = Complex64::new(1.0, 0.0);
            m[(j, i)] = Complex64::new(1.0, 0.0);
        }
        Generator::B(p) => {
            check_pair(p, d)?;
            let (i, j) = p.zero_based();
            m[(i, j)] = Complex64::new(0.0, -1.0);
            m[(j, i)] = Complex64::new(0.0, 1.0);
        }
        Generator::C(p) => {
            let a = basis_operator(Generator::A(p), d)?;
            let b = basis_operator(Generator::B(p), d)?;
            m = commutator(&a, &b).scale(Complex64::new(0.0, -0.5));
        }
    }
    Ok(m)
}

/// The nine qutrit dynamical generators in the row/column order of the
/// commutator table: `A12 B12 C12 A13 B13 C13 A23 B23 C23`.
pub const TABLE_ORDER: [Generator; 9] = [
    Generator::A(PairIndex::P12),
    Generator::B(PairIndex::P12),
    Generator::C(PairIndex::P12),
    Generator::A(PairIndex::P13),
    Generator::B(PairIndex::P13),
    Generator::C(PairIndex::P13),
    Generator::A(PairIndex::P23),
    Generator::B(PairIndex::P23),
    Generator::C(PairIndex::P23),
];

/// Reference transcription of the published commutator table; row `G`,
/// column `H` holds `[G, H]`.
pub const REFERENCE_TABLE: [[&str; 9]; 9] = [
    ["0", "2iC12", "-2iB12", "iB23", "-iA23", "-iB12", "iB13", "-iA13", "iB12"],
    ["-2iC12", "0", "2iA12", "iA23", "iB23", "iA12", "-iA13", "-iB13", "-iA12"],
    ["2iB12", "-2iA12", "0", "iB13", "-iA13", "0", "-iB23", "iA23", "0"],
    ["-iB23", "-iA23", "-iB13", "0", "2iC13", "-2iB13", "iB12", "iA12", "-iB13"],
    ["iA23", "-iB23", "iA13", "-2iC13", "0", "2iA13", "-iA12", "iB12", "iA13"],
    ["iB12", "-iA12", "0", "2iB13", "-2iA13", "0", "iB23", "-iA23", "0"],
    ["-iB13", "iA13", "iB23", "-iB12", "iA12", "-iB23", "0", "2iC23", "-2iB23"],
    ["iA13", "iB13", "-iA23", "-iA12", "-iB12", "iA23", "-2iC23", "0", "2iA23"],
    ["-iB12", "iA12", "0", "iB13", "-iA13", "0", "2iB23", "-2iA23", "0"],
];

/// `coefficient · op`, or zero when `op` is `None`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TableEntry {
    pub coefficient: Complex64,
    pub op: Option<Generator>,
}

impl TableEntry {
    pub const ZERO: TableEntry = TableEntry {
        coefficient: Complex64::new(0.0, 0.0),
        op: None,
    };

    pub fn matrix(&self, d: usize) -> Result<ComplexMatrix> {
        match self.op {
            None => Ok(ComplexMatrix::zeros(d)),
            Some(g) => Ok(basis_operator(g, d)?.scale(self.coefficient)),
        }
    }
}

impl fmt::Display for TableEntry {
    /// Purely imaginary integer coefficients print as `2i`, `-i`; anything
    /// else falls back to `(re+imi)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let Some(op) = self.op else {
            return write!(f, "0");
        };
        let c = self.coefficient;
        let im = c.im.round();
        if c.re.abs() < 1e-12 && (c.im - im).abs() < 1e-12 && im != 0.0 {
            let prefix = match im as i64 {
                1 => "i".to_string(),
                -1 => "-i".to_string(),
                n => format!("{n}i"),
            };
            write!(f, "{prefix}{op}")
        } else {
            write!(f, "({}{:+}i){op}", c.re, c.im)
        }
    }
}

impl FromStr for TableEntry {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "0" {
            return Ok(Self::ZERO);
        }
        let bad = || Error::Parse(format!("table entry {s:?}"));
        let split = s.find('i').ok_or_else(bad)?;
        let (coef, op) = s.split_at(split + 1);
        let magnitude = match &coef[..coef.len() - 1] {
            "" => 1.0,
            "-" => -1.0,
            other => other.parse::<f64>().map_err(|_| bad())?,
        };
        Ok(TableEntry {
            coefficient: Complex64::new(0.0, magnitude),
            op: Some(op.parse()?),
        })
    }
}

/// Expresses `m` as a multiple of a single table generator, if possible.
fn as_single_generator(m: &ComplexMatrix, tol: f64) -> Option<TableEntry> {
    if m.max_abs() <= tol {
        return Some(TableEntry::ZERO);
    }
    for g in TABLE_ORDER {
        let k = basis_operator(g, 3).ok()?;
        let norm = trace_inner(&k, &k).ok()?;
        let coefficient = trace_inner(&k, m).ok()? / norm;
        if coefficient.norm() > tol && m.max_abs_diff(&k.scale(coefficient)) <= tol {
            return Some(TableEntry {
                coefficient,
                op: Some(g),
            });
        }
    }
    None
}

/// Computes `[G, H]` for every ordered pair of the nine generators (rows and
/// columns in [`TABLE_ORDER`]) and expresses each as `coefficient · generator`.
pub fn commutator_table() -> [[TableEntry; 9]; 9] {
    let mats: Vec<ComplexMatrix> = TABLE_ORDER
        .iter()
        .map(|&g| basis_operator(g, 3).expect("qutrit generator"))
        .collect();
    let mut table = [[TableEntry::ZERO; 9]; 9];
    for (r, g) in mats.iter().enumerate() {
        for (c, h) in mats.iter().enumerate() {
            table[r][c] = as_single_generator(&commutator(g, h), 1e-12)
                .expect("qutrit commutators close on single generators");
        }
    }
    table
}

/// Parsed [`REFERENCE_TABLE`].
pub fn reference_table() -> [[TableEntry; 9]; 9] {
    let mut table = [[TableEntry::ZERO; 9]; 9];
    for (r, row) in REFERENCE_TABLE.iter().enumerate() {
        for (c, cell) in row.iter().enumerate() {
            table[r][c] = cell.parse().expect("reference table is well formed");
        }
    }
    table
}

/// Renders a table as an aligned text grid with row and column headers.
pub fn format_table(table: &[[TableEntry; 9]; 9]) -> String {
    let width = 8;
    let mut out = format!("{:>width$} ||", "");
    for g in TABLE_ORDER {
        out.push_str(&format!("{:>width$}", g.to_string()));
    }
    out.push('\n');
    out.push_str(&"=".repeat(width + 3 + 9 * width));
    out.push('\n');
    for (r, row) in table.iter().enumerate() {
        out.push_str(&format!("{:>width$} ||", TABLE_ORDER[r].to_string()));
        for e in row {
            out.push_str(&format!("{:>width$}", e.to_string()));
        }
        out.push('\n');
    }
    out
}

/// Ordered triple `(X, Y, Z)` with `[X,Y] = m·iZ`, `[Y,Z] = m·iX`, `[Z,X] = m·iY`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CyclicTriple {
    pub ops: [Generator; 3],
    pub multiplier: f64,
}

impl CyclicTriple {
    /// Largest elementwise residual over the three cyclic commutators.
    pub fn residual(&self) -> f64 {
        let m: Vec<ComplexMatrix> = self
            .ops
            .iter()
            .map(|&g| basis_operator(g, 3).expect("qutrit generator"))
            .collect();
        let k = Complex64::new(0.0, self.multiplier);
        (0..3)
            .map(|n| {
                let (x, y, z) = (&m[n], &m[(n + 1) % 3], &m[(n + 2) % 3]);
                commutator(x, y).max_abs_diff(&z.scale(k))
            })
            .fold(0.0, f64::max)
    }
}

/// The three `{A_ij, B_ij, C_ij}` triples (multiplier 2) followed by the four
/// triples built from `A`/`B` of different pairs (multiplier 1).
pub fn cyclic_triples() -> Vec<CyclicTriple> {
    use Generator::{A, B, C};
    let (p12, p13, p23) = (PairIndex::P12, PairIndex::P13, PairIndex::P23);
    let mut out: Vec<CyclicTriple> = PairIndex::QUTRIT
        .iter()
        .map(|&p| CyclicTriple {
            ops: [A(p), B(p), C(p)],
            multiplier: 2.0,
        })
        .collect();
    for ops in [
        [A(p12), A(p13), B(p23)],
        [A(p12), A(p23), B(p13)],
        [A(p13), A(p23), B(p12)],
        [B(p12), B(p13), B(p23)],
    ] {
        out.push(CyclicTriple {
            ops,
            multiplier: 1.0,
        });
    }
    out
}

/// Spin-1 matrices written in the basis of their zero-eigenvalue vectors.
#[derive(Debug, Clone)]
pub struct Spin1 {
    pub sx: ComplexMatrix,
    pub sy: ComplexMatrix,
    pub sz: ComplexMatrix,
}

/// Generators realizing `S_x`, `S_y`, `S_z`.
pub const SPIN1_GENERATORS: [Generator; 3] = [
    Generator::A(PairIndex::P23),
    Generator::B(PairIndex::P12),
    Generator::A(PairIndex::P13),
];

pub fn spin1_matrices() -> Spin1 {
    let [sx, sy, sz] = SPIN1_GENERATORS.map(|g| basis_operator(g, 3).expect("qutrit generator"));
    Spin1 { sx, sy, sz }
}

/// One named algebraic identity and its elementwise residual.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityCheck {
    pub name: String,
    pub residual: f64,
}

impl IdentityCheck {
    fn new(name: impl Into<String>, lhs: &ComplexMatrix, rhs: &ComplexMatrix) -> Self {
        Self {
            name: name.into(),
            residual: lhs.max_abs_diff(rhs),
        }
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.residual <= tol
    }
}

fn q(g: Generator) -> ComplexMatrix {
    basis_operator(g, 3).expect("qutrit generator")
}

/// Anticommutator identities, `A² = B² = C² = I - O_k`, and the
/// countertwisting forms `{S_i,S_j} = S_{i+j}² - S_{i-j}²`, `C_ij = S_j² - S_i²`.
pub fn countertwisting_identities() -> Vec<IdentityCheck> {
    use Generator::{A, B, C, O};
    let (p12, p13, p23) = (PairIndex::P12, PairIndex::P13, PairIndex::P23);
    let id = ComplexMatrix::identity(3);
    let mut out = vec![
        IdentityCheck::new("{B12,A13} = -B23", &anticommutator(&q(B(p12)), &q(A(p13))), &q(B(p23)).scale_real(-1.0)),
        IdentityCheck::new("{B12,A23} = B13", &anticommutator(&q(B(p12)), &q(A(p23))), &q(B(p13))),
        IdentityCheck::new("{A13,A23} = A12", &anticommutator(&q(A(p13)), &q(A(p23))), &q(A(p12))),
    ];
    for p in PairIndex::QUTRIT {
        let rhs = &id - &q(O(p.complement()));
        for g in [A(p), B(p), C(p)] {
            let m = q(g);
            out.push(IdentityCheck::new(format!("{g}^2 = I - O{}", p.complement()), &(&m * &m), &rhs));
        }
    }

    let s = spin1_matrices();
    let spins = [("Sx", &s.sx), ("Sy", &s.sy), ("Sz", &s.sz)];
    let r = std::f64::consts::FRAC_1_SQRT_2;
    for a in 0..3 {
        for b in (a + 1)..3 {
            let (na, sa) = spins[a];
            let (nb, sb) = spins[b];
            let plus = (sa + sb).scale_real(r);
            let minus = (sa - sb).scale_real(r);
            out.push(IdentityCheck::new(
                format!("{{{na},{nb}}} = S+^2 - S-^2"),
                &anticommutator(sa, sb),
                &(&(&plus * &plus) - &(&minus * &minus)),
            ));
        }
    }
    // O_k projects on the zero eigenvector of the spin matrix whose generator
    // avoids level k: Sx=A23 ↔ level 1, Sz=A13 ↔ level 2, Sy=B12 ↔ level 3.
    let by_level = [&s.sx, &s.sz, &s.sy];
    for p in PairIndex::QUTRIT {
        let (i, j) = p.zero_based();
        let sq_i = by_level[i] * by_level[i];
        let sq_j = by_level[j] * by_level[j];
        out.push(IdentityCheck::new(format!("C{p} = S(j)^2 - S(i)^2"), &q(C(p)), &(&sq_j - &sq_i)));
    }
    out
}

/// Spin-1 commutation relations `[S_i,S_j] = iε_ijk S_k` and
/// `Sx² + Sy² + Sz² = 2I`.
pub fn spin1_identities() -> Vec<IdentityCheck> {
    let s = spin1_matrices();
    let i = Complex64::new(0.0, 1.0);
    let sum_sq = &(&(&s.sx * &s.sx) + &(&s.sy * &s.sy)) + &(&s.sz * &s.sz);
    vec![
        IdentityCheck::new("[Sx,Sy] = iSz", &commutator(&s.sx, &s.sy), &s.sz.scale(i)),
        IdentityCheck::new("[Sy,Sz] = iSx", &commutator(&s.sy, &s.sz), &s.sx.scale(i)),
        IdentityCheck::new("[Sz,Sx] = iSy", &commutator(&s.sz, &s.sx), &s.sy.scale(i)),
        IdentityCheck::new("Sx^2+Sy^2+Sz^2 = 2I", &sum_sq, &ComplexMatrix::identity(3).scale_real(2.0)),
    ]
}

/// Largest deviation of the spin-1 spectra from `{-1, 0, 1}`.
pub fn spin1_spectrum_residual() -> f64 {
    let s = spin1_matrices();
    [&s.sx, &s.sy, &s.sz]
        .iter()
        .map(|m| {
            let ev = eigenvalues_hermitian(m).expect("Hermitian spin matrix");
            ev.iter()
                .zip([-1.0, 0.0, 1.0])
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max)
        })
        .fold(0.0, f64::max)
}

/// Table 1 entries recomputed and compared with the reference transcription,
/// one check per ordered pair (81).
pub fn table_identities() -> Vec<IdentityCheck> {
    let reference = reference_table();
    let mut out = Vec::with_capacity(81);
    for (r, g) in TABLE_ORDER.iter().enumerate() {
        for (c, h) in TABLE_ORDER.iter().enumerate() {
            let lhs = commutator(&q(*g), &q(*h));
            let rhs = reference[r][c].matrix(3).expect("qutrit generator");
            out.push(IdentityCheck::new(format!("[{g},{h}] = {}", reference[r][c]), &lhs, &rhs));
        }
    }
    out
}

/// `C_12 - C_13 + C_23 = 0`.
pub fn linear_dependence_identity() -> IdentityCheck {
    use Generator::C;
    let sum = &(&q(C(PairIndex::P12)) - &q(C(PairIndex::P13))) + &q(C(PairIndex::P23));
    IdentityCheck::new("C12 - C13 + C23 = 0", &sum, &ComplexMatrix::zeros(3))
}

/// Basis ordering for dimension `d`: `O_1..O_d`, then every `A_ij`, then every
/// `B_ij`, pairs lexicographic.
pub fn qudit_basis(d: usize) -> Result<Vec<Generator>> {
    if !(2..=MAX_DIM).contains(&d) {
        return Err(Error::UnsupportedDimension(d));
    }
    let pairs = PairIndex::all(d);
    let mut out: Vec<Generator> = (1..=d).map(Generator::O).collect();
    out.extend(pairs.iter().map(|&p| Generator::A(p)));
    out.extend(pairs.iter().map(|&p| Generator::B(p)));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn pair_normalization() {
        assert_eq!(PairIndex::new(2, 1, 3).unwrap(), PairIndex::P12);
        assert!(PairIndex::new(1, 1, 3).is_err());
        assert!(PairIndex::new(1, 4, 3).is_err());
        assert!(PairIndex::new(0, 2, 3).is_err());
        assert_eq!(PairIndex::P13.complement(), 2);
        for d in 2..=MAX_DIM {
            for (n, p) in PairIndex::all(d).into_iter().enumerate() {
                assert_eq!(p.position(d), n);
            }
        }
    }

    #[test]
    fn generator_parsing() {
        assert_eq!("A12".parse::<Generator>().unwrap(), Generator::A(PairIndex::P12));
        assert_eq!("b31".parse::<Generator>().unwrap(), Generator::B(PairIndex::P13));
        assert_eq!("C_23".parse::<Generator>().unwrap(), Generator::C(PairIndex::P23));
        assert_eq!("O2".parse::<Generator>().unwrap(), Generator::O(2));
        for bad in ["", "X12", "A1", "A11", "O0", "A1x"] {
            assert!(bad.parse::<Generator>().is_err(), "{bad}");
        }
        for g in TABLE_ORDER {
            assert_eq!(g.to_string().parse::<Generator>().unwrap(), g);
        }
    }

    #[test]
    fn basis_operator_examples() {
        let o1 = basis_operator(Generator::O(1), 3).unwrap();
        assert_eq!(o1, ComplexMatrix::from_real_diagonal(&[1.0, 0.0, 0.0]));

        // -i/2 [A12, B12], multiplied out by hand
        let c12 = basis_operator(Generator::C(PairIndex::P12), 3).unwrap();
        assert!(c12.max_abs_diff(&ComplexMatrix::from_real_diagonal(&[1.0, -1.0, 0.0])) < 1e-15);

        let b13 = basis_operator(Generator::B(PairIndex::P13), 3).unwrap();
        let mut expected = ComplexMatrix::zeros(3);
        expected[(0, 2)] = c(0.0, -1.0);
        expected[(2, 0)] = c(0.0, 1.0);
        assert_eq!(b13, expected);

        assert!(basis_operator(Generator::O(4), 3).is_err());
        assert!(basis_operator(Generator::A(PairIndex::new(1, 4, 4).unwrap()), 3).is_err());
    }

    #[test]
    fn c_equals_projector_difference() {
        for d in 2..=5 {
            for p in PairIndex::all(d) {
                let cij = basis_operator(Generator::C(p), d).unwrap();
                let diff = &basis_operator(Generator::O(p.i()), d).unwrap()
                    - &basis_operator(Generator::O(p.j()), d).unwrap();
                assert!(cij.max_abs_diff(&diff) < 1e-15);
            }
        }
    }

    #[test]
    fn basis_orthogonality_and_norms() {
        for d in [3, 4] {
            let basis: Vec<ComplexMatrix> =
                qudit_basis(d).unwrap().into_iter().map(|g| basis_operator(g, d).unwrap()).collect();
            assert_eq!(basis.len(), d * d);
            let gens = qudit_basis(d).unwrap();
            for (x, gx) in basis.iter().zip(&gens) {
                for (y, gy) in basis.iter().zip(&gens) {
                    let ip = trace_inner(x, y).unwrap();
                    let expected = match (gx == gy, gx) {
                        (false, _) => 0.0,
                        (true, Generator::O(_)) => 1.0,
                        (true, _) => 2.0,
                    };
                    assert!((ip - c(expected, 0.0)).norm() <= 1e-12, "{gx} {gy}");
                }
            }
        }
    }

    #[test]
    fn tracelessness() {
        for g in TABLE_ORDER {
            assert_eq!(basis_operator(g, 3).unwrap().trace(), c(0.0, 0.0));
        }
    }

    #[test]
    fn linear_dependence() {
        assert_eq!(linear_dependence_identity().residual, 0.0);
    }

    #[test]
    fn table_examples() {
        let t = commutator_table();
        assert_eq!(t[0][1].to_string(), "2iC12");
        assert_eq!(t[2][5].to_string(), "0");
        assert_eq!(t[0][3].to_string(), "iB23");
        assert!((t[0][1].coefficient - c(0.0, 2.0)).norm() < 1e-12);
    }

    #[test]
    fn computed_table_matches_reference() {
        let computed = commutator_table();
        let reference = reference_table();
        for r in 0..9 {
            for col in 0..9 {
                assert_eq!(computed[r][col].op, reference[r][col].op, "({r},{col})");
                assert!((computed[r][col].coefficient - reference[r][col].coefficient).norm() < 1e-12);
                assert_eq!(computed[r][col].to_string(), REFERENCE_TABLE[r][col]);
            }
        }
        let checks = table_identities();
        assert_eq!(checks.len(), 81);
        assert!(checks.iter().all(|c| c.passes(1e-12)));
    }

    #[test]
    fn table_rendering() {
        let text = format_table(&commutator_table());
        assert_eq!(text.lines().count(), 11);
        assert!(text.lines().nth(2).unwrap().contains("2iC12"));
    }

    #[test]
    fn cyclic_triple_list() {
        let triples = cyclic_triples();
        assert_eq!(triples.len(), 7);
        assert_eq!(triples.iter().filter(|t| t.multiplier == 2.0).count(), 3);
        for t in &triples {
            assert!(t.residual() <= 1e-12, "{:?}", t.ops);
        }
        let first = triples[0];
        assert_eq!(first.ops.map(|g| g.to_string()), ["A12", "B12", "C12"]);
        let last = triples[6];
        assert_eq!(last.ops.map(|g| g.to_string()), ["B12", "B13", "B23"]);
    }

    #[test]
    fn a13_a23_commutator_is_not_a12() {
        use Generator::A;
        let lhs = commutator(&q(A(PairIndex::P13)), &q(A(PairIndex::P23)));
        let wrong = q(A(PairIndex::P12)).scale(c(0.0, 1.0));
        assert!(lhs.max_abs_diff(&wrong) > 0.5);
        let bad = CyclicTriple {
            ops: [A(PairIndex::P13), A(PairIndex::P23), A(PairIndex::P12)],
            multiplier: 1.0,
        };
        assert!(bad.residual() > 0.5);
    }

    #[test]
    fn spin1() {
        for chk in spin1_identities() {
            assert!(chk.passes(1e-12), "{}: {}", chk.name, chk.residual);
        }
        assert!(spin1_spectrum_residual() < 1e-12);
    }

    #[test]
    fn countertwisting() {
        let checks = countertwisting_identities();
        assert_eq!(checks.len(), 3 + 9 + 3 + 3);
        for chk in checks {
            assert!(chk.passes(1e-12), "{}: {}", chk.name, chk.residual);
        }
    }

    #[test]
    fn qudit_basis_layout() {
        let names: Vec<String> = qudit_basis(3).unwrap().iter().map(|g| g.to_string()).collect();
        assert_eq!(names, ["O1", "O2", "O3", "A12", "A13", "A23", "B12", "B13", "B23"]);
        assert_eq!(qudit_basis(5).unwrap().len(), 25);
        assert!(qudit_basis(1).is_err());
        assert!(qudit_basis(9).is_err());
    }
}
