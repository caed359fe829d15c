//! The Lie algebra so(8) in the basis `G_{i,j}`, `0 <= i < j <= 7`.
//!
//! `G_{i,j}` sends `ej ↦ ei`, `ei ↦ -ej` and kills every other basis vector,
//! so as a matrix it has `+1` at `(i, j)` and `-1` at `(j, i)`. An element
//! `Σ c_{ij} G_{i,j}` is the antisymmetric matrix with `c_{ij}` above the
//! diagonal.
//!
//! The 28 generators split into seven quadruples
//! `(G_{0,i}, G_{i+1,i+3}, G_{i+2,i+6}, G_{i+4,i+5})`, `i = 1..7`, indices
//! reduced into `{1..7}`. Seven slots come out with the larger index first and
//! are stored as `-G_{min,max}`:
//!
//! ```text
//! i=2: -G_{1,4}   i=3: -G_{2,5}, -G_{1,7}   i=4: -G_{3,6}
//! i=5: -G_{1,6}, -G_{4,7}   i=6: -G_{2,7}
//! ```

use std::fmt;
use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{Rational, SquareMatrix, Vector};
use crate::octonion::mod7;

pub const DIM: usize = 28;

/// Default coefficient bound for random sampling.
pub const DEFAULT_BOUND: i64 = 9;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Generator {
    i: usize,
    j: usize,
}

impl Generator {
    pub fn new(i: usize, j: usize) -> Result<Self> {
        if i < j && j <= 7 {
            Ok(Generator { i, j })
        } else {
            Err(Error::InvalidGenerator { i, j })
        }
    }

    pub fn i(self) -> usize {
        self.i
    }

    pub fn j(self) -> usize {
        self.j
    }

    /// Position in the lexicographic order `(0,1), (0,2), ..., (6,7)`.
    pub fn index(self) -> usize {
        let before: usize = (0..self.i).map(|a| 7 - a).sum();
        before + (self.j - self.i - 1)
    }

    pub fn from_index(n: usize) -> Self {
        generators()[n]
    }

    pub fn matrix(self) -> SquareMatrix {
        let mut m = SquareMatrix::zero(8);
        m.set(self.i, self.j, Rational::one());
        m.set(self.j, self.i, Rational::from(-1));
        m
    }
}

impl fmt::Debug for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "G_{{{},{}}}", self.i, self.j)
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "G_{},{}", self.i, self.j)
    }
}

impl Serialize for Generator {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// The 28 generators in lexicographic order.
pub fn generators() -> &'static [Generator; DIM] {
    static GENS: OnceLock<[Generator; DIM]> = OnceLock::new();
    GENS.get_or_init(|| {
        let all: Vec<Generator> = (0..8)
            .flat_map(|i| (i + 1..8).map(move |j| Generator { i, j }))
            .collect();
        all.try_into().expect("28 generators")
    })
}

/// Matrix of `G_{i,j}`; fails unless `0 <= i < j <= 7`.
pub fn generator_matrix(i: usize, j: usize) -> Result<SquareMatrix> {
    Ok(Generator::new(i, j)?.matrix())
}

/// `±G_{i,j}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct SignedGenerator {
    pub generator: Generator,
    pub negative: bool,
}

impl SignedGenerator {
    /// Normalizes the raw pair `(a, b)`: `G_{b,a} = -G_{a,b}`.
    pub fn from_pair(a: usize, b: usize) -> Result<Self> {
        if a < b {
            Ok(SignedGenerator {
                generator: Generator::new(a, b)?,
                negative: false,
            })
        } else {
            Ok(SignedGenerator {
                generator: Generator::new(b, a)?,
                negative: true,
            })
        }
    }

    pub fn sign(self) -> Rational {
        if self.negative {
            Rational::from(-1)
        } else {
            Rational::one()
        }
    }
}

impl fmt::Debug for SignedGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negative {
            f.write_str("-")?;
        }
        write!(f, "{:?}", self.generator)
    }
}

impl fmt::Display for SignedGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = if self.negative { "-" } else { "+" };
        write!(f, "{s}{}", self.generator)
    }
}

impl Serialize for SignedGenerator {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// One of the seven 4-dimensional blocks, slots in stored order.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct Quadruple {
    pub label: usize,
    pub slots: [SignedGenerator; 4],
}

impl Quadruple {
    fn build(i: usize) -> Result<Self> {
        let pairs = [
            (0, i),
            (mod7(i + 1), mod7(i + 3)),
            (mod7(i + 2), mod7(i + 6)),
            (mod7(i + 4), mod7(i + 5)),
        ];
        let slots = [
            SignedGenerator::from_pair(pairs[0].0, pairs[0].1)?,
            SignedGenerator::from_pair(pairs[1].0, pairs[1].1)?,
            SignedGenerator::from_pair(pairs[2].0, pairs[2].1)?,
            SignedGenerator::from_pair(pairs[3].0, pairs[3].1)?,
        ];
        Ok(Quadruple { label: i, slots })
    }
}

fn build_quadruples() -> [Quadruple; 7] {
    let quads: [Quadruple; 7] =
        std::array::from_fn(|n| Quadruple::build(n + 1).expect("quadruple indices in range"));
    let mut seen = [false; DIM];
    for q in &quads {
        for s in q.slots {
            let k = s.generator.index();
            assert!(
                !seen[k],
                "generator {:?} appears in two quadruples",
                s.generator
            );
            seen[k] = true;
        }
    }
    assert!(
        seen.iter().all(|&b| b),
        "quadruples do not cover all 28 generators"
    );
    quads
}

/// The seven quadruples for `i = 1..7`; built once and checked to partition
/// the generator set.
pub fn quadruples() -> &'static [Quadruple; 7] {
    static QUADS: OnceLock<[Quadruple; 7]> = OnceLock::new();
    QUADS.get_or_init(build_quadruples)
}

/// True iff the quadruples hit every generator exactly once.
pub fn quadruples_partition_generators(quads: &[Quadruple]) -> bool {
    let mut count = [0usize; DIM];
    for q in quads {
        for s in q.slots {
            count[s.generator.index()] += 1;
        }
    }
    count.iter().all(|&c| c == 1)
}

/// An element of so(8), held both as its 28 coefficients and as the 8×8
/// antisymmetric matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct So8Element {
    coeffs: Vector,
    matrix: SquareMatrix,
}

impl So8Element {
    pub fn zero() -> Self {
        So8Element {
            coeffs: vec![Rational::zero(); DIM],
            matrix: SquareMatrix::zero(8),
        }
    }

    pub fn from_coeffs(coeffs: Vector) -> Result<Self> {
        if coeffs.len() != DIM {
            return Err(Error::Malformed(format!(
                "expected {DIM} coefficients, got {}",
                coeffs.len()
            )));
        }
        let mut matrix = SquareMatrix::zero(8);
        for (g, c) in generators().iter().zip(&coeffs) {
            matrix.set(g.i, g.j, c.clone());
            matrix.set(g.j, g.i, -c);
        }
        Ok(So8Element { coeffs, matrix })
    }

    pub fn from_i64_coeffs(coeffs: &[i64]) -> Result<Self> {
        Self::from_coeffs(coeffs.iter().map(|&c| Rational::from(c)).collect())
    }

    /// Fails with [`Error::NotAntisymmetric`] naming the first bad entry.
    pub fn from_matrix(matrix: SquareMatrix) -> Result<Self> {
        if matrix.dim() != 8 {
            return Err(Error::DimensionMismatch {
                left: 8,
                right: matrix.dim(),
            });
        }
        if let Some((row, col)) = matrix.first_antisymmetry_violation() {
            return Err(Error::NotAntisymmetric {
                row,
                col,
                value: matrix.get(row, col).to_string(),
                mirror: matrix.get(col, row).to_string(),
            });
        }
        let coeffs = generators()
            .iter()
            .map(|g| matrix.get(g.i, g.j).clone())
            .collect();
        Ok(So8Element { coeffs, matrix })
    }

    pub fn generator(g: Generator) -> Self {
        let mut coeffs = vec![Rational::zero(); DIM];
        coeffs[g.index()] = Rational::one();
        Self::from_coeffs(coeffs).expect("28 coefficients")
    }

    pub fn basis(n: usize) -> Self {
        Self::generator(Generator::from_index(n))
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, g: Generator) -> &Rational {
        &self.coeffs[g.index()]
    }

    pub fn matrix(&self) -> &SquareMatrix {
        &self.matrix
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Rational::is_zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_coeffs(
            self.coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        )
        .expect("28 coefficients")
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::from_coeffs(
            self.coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        )
        .expect("28 coefficients")
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|a| a * c).collect()).expect("28 coefficients")
    }

    /// Linear combination `Σ cₖ bₖ`.
    pub fn combination(basis: &[So8Element], coeffs: &[Rational]) -> Self {
        let mut acc = vec![Rational::zero(); DIM];
        for (b, c) in basis.iter().zip(coeffs) {
            if c.is_zero() {
                continue;
            }
            for (slot, x) in acc.iter_mut().zip(&b.coeffs) {
                if !x.is_zero() {
                    *slot += c * x;
                }
            }
        }
        Self::from_coeffs(acc).expect("28 coefficients")
    }

    /// Conjugates by an invertible 8×8 matrix: `a · x · a⁻¹`, given `a` and
    /// its inverse. Fails if the result is not antisymmetric.
    pub fn conjugate_by(&self, a: &SquareMatrix, a_inv: &SquareMatrix) -> Result<Self> {
        let m = a.mat_mul(&self.matrix)?.mat_mul(a_inv)?;
        Self::from_matrix(m)
    }

    pub fn document(&self) -> So8Document {
        So8Document {
            coeffs: Some(self.coeffs.clone()),
            matrix: Some(self.matrix.rows()),
        }
    }
}

impl fmt::Debug for So8Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = generators()
            .iter()
            .zip(&self.coeffs)
            .filter(|(_, c)| !c.is_zero())
            .map(|(g, c)| format!("{c}*{g:?}"))
            .collect();
        if terms.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&terms.join(" + "))
        }
    }
}

/// `[x, y] = xy - yx`.
pub fn bracket(x: &So8Element, y: &So8Element) -> So8Element {
    let xy = x.matrix() * y.matrix();
    let yx = y.matrix() * x.matrix();
    So8Element::from_matrix(&xy - &yx)
        .expect("commutator of antisymmetric matrices is antisymmetric")
}

/// JSON form: `{"coeffs": [...28...]}` and/or `{"matrix": [[...8x8...]]}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct So8Document {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coeffs: Option<Vec<Rational>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<Rational>>>,
}

impl TryFrom<So8Document> for So8Element {
    type Error = Error;

    fn try_from(doc: So8Document) -> Result<Self> {
        let from_coeffs = doc.coeffs.map(So8Element::from_coeffs).transpose()?;
        let from_matrix = match doc.matrix {
            Some(rows) => {
                let m =
                    SquareMatrix::from_rows(rows).map_err(|e| Error::Malformed(e.to_string()))?;
                if m.dim() != 8 {
                    return Err(Error::Malformed(format!(
                        "matrix must be 8x8, got {0}x{0}",
                        m.dim()
                    )));
                }
                Some(So8Element::from_matrix(m)?)
            }
            None => None,
        };
        match (from_coeffs, from_matrix) {
            (Some(a), Some(b)) => {
                if let Some(g) = generators().iter().find(|g| a.coeff(**g) != b.coeff(**g)) {
                    return Err(Error::EncodingMismatch {
                        i: g.i,
                        j: g.j,
                        coeff: a.coeff(*g).to_string(),
                        entry: b.coeff(*g).to_string(),
                    });
                }
                Ok(a)
            }
            (Some(a), None) | (None, Some(a)) => Ok(a),
            (None, None) => Err(Error::Malformed("need \"coeffs\" or \"matrix\"".into())),
        }
    }
}

impl So8Element {
    /// Parses the JSON document form.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: So8Document =
            serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
        doc.try_into()
    }
}

/// Deterministic stream of pseudorandom elements with integer coefficients
/// uniform in `[-bound, bound]`.
#[derive(Clone, Debug)]
pub struct Sampler {
    rng: ChaCha8Rng,
    bound: i64,
}

impl Sampler {
    pub fn new(seed: u64, bound: i64) -> Result<Self> {
        if bound < 1 {
            return Err(Error::ZeroBound);
        }
        Ok(Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
            bound,
        })
    }

    pub fn next_integer(&mut self) -> Rational {
        Rational::from(self.rng.gen_range(-self.bound..=self.bound))
    }

    pub fn next_element(&mut self) -> So8Element {
        let coeffs = (0..DIM).map(|_| self.next_integer()).collect();
        So8Element::from_coeffs(coeffs).expect("28 coefficients")
    }

    /// Random integer combination of `basis`.
    pub fn next_combination(&mut self, basis: &[So8Element]) -> So8Element {
        let cs: Vec<Rational> = basis.iter().map(|_| self.next_integer()).collect();
        So8Element::combination(basis, &cs)
    }

    /// Uniform index in `0..n`.
    pub fn next_below(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    /// Random signed permutation matrix of the given determinant sign.
    pub fn next_signed_permutation(&mut self, negative_det: bool) -> SquareMatrix {
        let mut perm: Vec<usize> = (0..8).collect();
        for i in (1..8).rev() {
            let j = self.next_below(i + 1);
            perm.swap(i, j);
        }
        let mut signs: Vec<bool> = (0..8).map(|_| self.next_below(2) == 1).collect();
        let m = |perm: &[usize], signs: &[bool]| {
            let mut m = SquareMatrix::zero(8);
            for (col, &row) in perm.iter().enumerate() {
                m.set(
                    row,
                    col,
                    if signs[col] {
                        Rational::from(-1)
                    } else {
                        Rational::one()
                    },
                );
            }
            m
        };
        let candidate = m(&perm, &signs);
        if candidate.determinant().is_negative() != negative_det {
            signs[0] = !signs[0];
        }
        m(&perm, &signs)
    }

    /// Nonzero rational in `[-bound, bound]` with denominator up to 4.
    pub fn next_nonzero_rational(&mut self) -> Rational {
        loop {
            let n = self.rng.gen_range(-self.bound..=self.bound);
            let d = self.rng.gen_range(1..=4);
            if n != 0 {
                return Rational::new(n, d);
            }
        }
    }
}

/// The first element drawn by `Sampler::new(seed, bound)`.
pub fn random_element(seed: u64, bound: i64) -> Result<So8Element> {
    Ok(Sampler::new(seed, bound)?.next_element())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{is_zero_vector, unit_vector};

    fn g(i: usize, j: usize) -> Generator {
        Generator::new(i, j).unwrap()
    }

    fn apply(m: &SquareMatrix, k: usize) -> Vector {
        m.mul_vec(&unit_vector(8, k)).unwrap()
    }

    #[test]
    fn generator_action() {
        let g01 = generator_matrix(0, 1).unwrap();
        assert_eq!(apply(&g01, 1), unit_vector(8, 0));
        assert_eq!(
            apply(&g01, 0),
            unit_vector(8, 1)
                .into_iter()
                .map(|x| -x)
                .collect::<Vec<_>>()
        );
        let g25 = generator_matrix(2, 5).unwrap();
        assert!(is_zero_vector(&apply(&g25, 3)));
    }

    #[test]
    fn invalid_generators_rejected() {
        assert_eq!(
            generator_matrix(1, 1),
            Err(Error::InvalidGenerator { i: 1, j: 1 })
        );
        assert!(generator_matrix(3, 2).is_err());
        assert!(generator_matrix(0, 8).is_err());
    }

    #[test]
    fn generator_indexing() {
        assert_eq!(generators().len(), 28);
        for (n, gen) in generators().iter().enumerate() {
            assert_eq!(gen.index(), n);
            assert_eq!(Generator::from_index(n), *gen);
        }
        assert_eq!(g(6, 7).index(), 27);
    }

    #[test]
    fn generator_matrices_square_to_two_minus_ones() {
        for gen in generators() {
            let m = gen.matrix();
            assert!(m.is_antisymmetric());
            let sq = m.pow(2);
            let mut expected = SquareMatrix::zero(8);
            expected.set(gen.i(), gen.i(), Rational::from(-1));
            expected.set(gen.j(), gen.j(), Rational::from(-1));
            assert_eq!(sq, expected);
        }
    }

    #[test]
    fn bracket_of_g01_g12() {
        // G01 has +1 at (0,1); G12 has +1 at (1,2). The product G01·G12 has
        // +1 at (0,2); G12·G01 has +1 at (2,0). Hence [G01, G12] = G02.
        let x = So8Element::generator(g(0, 1));
        let y = So8Element::generator(g(1, 2));
        assert_eq!(bracket(&x, &y), So8Element::generator(g(0, 2)));
        assert!(bracket(&x, &x).is_zero());
    }

    #[test]
    fn bracket_antisymmetric_on_basis() {
        for a in 0..DIM {
            for b in 0..DIM {
                let (x, y) = (So8Element::basis(a), So8Element::basis(b));
                assert_eq!(bracket(&x, &y), bracket(&y, &x).scale(&Rational::from(-1)));
            }
        }
    }

    #[test]
    fn jacobi() {
        let mut s = Sampler::new(21, DEFAULT_BOUND).unwrap();
        for _ in 0..20 {
            let (x, y, z) = (s.next_element(), s.next_element(), s.next_element());
            let sum = bracket(&x, &bracket(&y, &z))
                .add(&bracket(&y, &bracket(&z, &x)))
                .add(&bracket(&z, &bracket(&x, &y)));
            assert!(sum.is_zero());
        }
    }

    #[test]
    fn coeff_matrix_roundtrip() {
        for n in 0..DIM {
            let x = So8Element::basis(n);
            assert_eq!(So8Element::from_matrix(x.matrix().clone()).unwrap(), x);
        }
        let mut s = Sampler::new(22, DEFAULT_BOUND).unwrap();
        for _ in 0..50 {
            let x = s.next_element();
            assert!(x.matrix().is_antisymmetric());
            let back = So8Element::from_matrix(x.matrix().clone()).unwrap();
            assert_eq!(back.coeffs(), x.coeffs());
        }
    }

    #[test]
    fn quadruple_examples() {
        let q = quadruples();
        let plain = |gs: [(usize, usize); 4]| {
            gs.map(|(i, j)| SignedGenerator {
                generator: g(i, j),
                negative: false,
            })
        };
        assert_eq!(q[0].slots, plain([(0, 1), (2, 4), (3, 7), (5, 6)]));
        assert_eq!(q[6].slots, plain([(0, 7), (1, 3), (2, 6), (4, 5)]));
        assert!(quadruples_partition_generators(q));
    }

    #[test]
    fn quadruple_sign_flips() {
        let flipped: Vec<(usize, Generator)> = quadruples()
            .iter()
            .flat_map(|q| {
                q.slots
                    .iter()
                    .filter(|s| s.negative)
                    .map(move |s| (q.label, s.generator))
            })
            .collect();
        assert_eq!(
            flipped,
            vec![
                (2, g(1, 4)),
                (3, g(2, 5)),
                (3, g(1, 7)),
                (4, g(3, 6)),
                (5, g(1, 6)),
                (5, g(4, 7)),
                (6, g(2, 7)),
            ]
        );
    }

    #[test]
    fn sampling_is_deterministic() {
        let a = random_element(5, DEFAULT_BOUND).unwrap();
        let b = random_element(5, DEFAULT_BOUND).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, random_element(6, DEFAULT_BOUND).unwrap());
        assert_eq!(random_element(5, 0), Err(Error::ZeroBound));
        let small = random_element(5, 1).unwrap();
        let allowed = [Rational::from(-1), Rational::zero(), Rational::one()];
        assert!(small.coeffs().iter().all(|c| allowed.contains(c)));
        assert!(small.matrix().is_antisymmetric());
    }

    #[test]
    fn document_parsing() {
        let x = random_element(1, 3).unwrap();
        let json = serde_json::to_string(&x.document()).unwrap();
        assert_eq!(So8Element::from_json(&json).unwrap(), x);

        let coeffs_only = serde_json::to_string(&So8Document {
            coeffs: Some(x.coeffs().to_vec()),
            matrix: None,
        })
        .unwrap();
        assert_eq!(So8Element::from_json(&coeffs_only).unwrap(), x);

        let mut rows = x.matrix().rows();
        rows[0][1] = &rows[0][1] + &Rational::one();
        let bad = serde_json::to_string(&So8Document {
            coeffs: None,
            matrix: Some(rows.clone()),
        })
        .unwrap();
        assert!(matches!(
            So8Element::from_json(&bad),
            Err(Error::NotAntisymmetric { row: 0, col: 1, .. })
        ));

        rows[1][0] = -&rows[0][1];
        let mismatch = serde_json::to_string(&So8Document {
            coeffs: Some(x.coeffs().to_vec()),
            matrix: Some(rows),
        })
        .unwrap();
        assert!(matches!(
            So8Element::from_json(&mismatch),
            Err(Error::EncodingMismatch { i: 0, j: 1, .. })
        ));

        assert!(matches!(
            So8Element::from_json("{}"),
            Err(Error::Malformed(_))
        ));
        assert!(matches!(
            So8Element::from_json("not json"),
            Err(Error::Malformed(_))
        ));
        assert!(matches!(
            So8Element::from_json(r#"{"coeffs": ["1"]}"#),
            Err(Error::Malformed(_))
        ));
        assert!(matches!(
            So8Element::from_json(r#"{"matrix": [["0"]]}"#),
            Err(Error::Malformed(_))
        ));
    }
}
