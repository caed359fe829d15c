//! The octonions with Fano-plane multiplication.
//!
//! Basis `e0 = 1, e1, ..., e7`. The seven oriented lines are
//! `(i, i+1, i+3)` for `i = 1..7`, indices reduced into `{1, ..., 7}`:
//!
//! ```text
//! (1,2,4) (2,3,5) (3,4,6) (4,5,7) (5,6,1) (6,7,2) (7,1,3)
//! ```
//!
//! A line `(a, b, c)` means `ea·eb = ec` together with its cyclic shifts
//! `eb·ec = ea`, `ec·ea = eb`; reversing the order flips the sign. With this
//! orientation `e5·e2 = e3` and `(e1, e2, e4)` is an ordered line, and the map
//! `ei ↦ e(2i)` permutes the lines, so it is an automorphism.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::OnceLock;

use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::exact::{Rational, SquareMatrix};

/// Reduces an index into `{1, ..., 7}` modulo 7 (residue 0 is written 7).
pub fn mod7(k: usize) -> usize {
    match k % 7 {
        0 => 7,
        r => r,
    }
}

/// Ordered collinear triple `(i, j, k)` with `ei·ej = ek`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct FanoTriple(pub usize, pub usize, pub usize);

impl FanoTriple {
    pub fn cyclic_shifts(self) -> [FanoTriple; 3] {
        let FanoTriple(a, b, c) = self;
        [
            FanoTriple(a, b, c),
            FanoTriple(b, c, a),
            FanoTriple(c, a, b),
        ]
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 == i || self.1 == i || self.2 == i
    }
}

/// The 7 oriented lines of the Fano plane.
pub fn fano_lines() -> [FanoTriple; 7] {
    std::array::from_fn(|n| {
        let i = n + 1;
        FanoTriple(i, mod7(i + 1), mod7(i + 3))
    })
}

/// The three lines through `ei`, in the patterns
/// `(ei, ei+1, ei+3)`, `(ei, ei+2, ei+6)`, `(ei, ei+4, ei+5)`.
pub fn lines_through(i: usize) -> [FanoTriple; 3] {
    [
        FanoTriple(i, mod7(i + 1), mod7(i + 3)),
        FanoTriple(i, mod7(i + 2), mod7(i + 6)),
        FanoTriple(i, mod7(i + 4), mod7(i + 5)),
    ]
}

/// `eμ·eν = sign · e_index`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SignedBasis {
    pub negative: bool,
    pub index: usize,
}

impl fmt::Display for SignedBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = if self.negative { '-' } else { '+' };
        write!(f, "{s}e{}", self.index)
    }
}

impl Serialize for SignedBasis {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Full 8×8 multiplication table of basis elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureTable([[SignedBasis; 8]; 8]);

impl StructureTable {
    pub fn product(&self, mu: usize, nu: usize) -> SignedBasis {
        self.0[mu][nu]
    }

    pub fn rows(&self) -> &[[SignedBasis; 8]; 8] {
        &self.0
    }
}

impl Serialize for StructureTable {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(8))?;
        for row in &self.0 {
            seq.serialize_element(row)?;
        }
        seq.end()
    }
}

fn build_table() -> StructureTable {
    let mut table: [[Option<SignedBasis>; 8]; 8] = [[None; 8]; 8];
    let mut put = |a: usize, b: usize, v: SignedBasis| {
        if let Some(prev) = table[a][b] {
            assert_eq!(prev, v, "conflicting octonion products for e{a}·e{b}");
        }
        table[a][b] = Some(v);
    };
    for mu in 0..8 {
        put(
            0,
            mu,
            SignedBasis {
                negative: false,
                index: mu,
            },
        );
        put(
            mu,
            0,
            SignedBasis {
                negative: false,
                index: mu,
            },
        );
    }
    for i in 1..8 {
        put(
            i,
            i,
            SignedBasis {
                negative: true,
                index: 0,
            },
        );
    }
    for line in fano_lines() {
        for FanoTriple(a, b, c) in line.cyclic_shifts() {
            put(
                a,
                b,
                SignedBasis {
                    negative: false,
                    index: c,
                },
            );
            put(
                b,
                a,
                SignedBasis {
                    negative: true,
                    index: c,
                },
            );
        }
    }
    let table = StructureTable(std::array::from_fn(|a| {
        std::array::from_fn(|b| table[a][b].unwrap_or_else(|| panic!("e{a}·e{b} undefined")))
    }));
    self_check(&table);
    table
}

fn self_check(table: &StructureTable) {
    assert_eq!(
        table.product(5, 2),
        SignedBasis {
            negative: false,
            index: 3
        },
        "anchor product e5·e2 = e3 violated"
    );
    for i in 1..8 {
        for j in 1..8 {
            if i != j {
                let (x, y) = (table.product(i, j), table.product(j, i));
                assert!(
                    x.index == y.index && x.negative != y.negative,
                    "e{i}, e{j} do not anticommute"
                );
            }
        }
    }
}

/// The multiplication table, built and self-checked once.
pub fn structure_constants() -> &'static StructureTable {
    static TABLE: OnceLock<StructureTable> = OnceLock::new();
    TABLE.get_or_init(build_table)
}

/// An octonion `Σ aμ eμ` with exact coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Octonion {
    coeffs: [Rational; 8],
}

impl Octonion {
    pub fn new(coeffs: [Rational; 8]) -> Self {
        Octonion { coeffs }
    }

    pub fn from_i64(coeffs: [i64; 8]) -> Self {
        Octonion {
            coeffs: coeffs.map(Rational::from),
        }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::basis(0)
    }

    pub fn basis(mu: usize) -> Self {
        let mut o = Self::zero();
        o.coeffs[mu] = Rational::one();
        o
    }

    pub fn coeffs(&self) -> &[Rational; 8] {
        &self.coeffs
    }

    pub fn coeff(&self, mu: usize) -> &Rational {
        &self.coeffs[mu]
    }

    pub fn real_part(&self) -> &Rational {
        &self.coeffs[0]
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Octonion {
            coeffs: std::array::from_fn(|i| &self.coeffs[i] * c),
        }
    }

    pub fn multiply(&self, other: &Octonion) -> Octonion {
        let table = structure_constants();
        let mut out = Octonion::zero();
        for (mu, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (nu, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let SignedBasis { negative, index } = table.product(mu, nu);
                let term = a * b;
                if negative {
                    out.coeffs[index] -= term;
                } else {
                    out.coeffs[index] += term;
                }
            }
        }
        out
    }

    pub fn conjugate(&self) -> Octonion {
        Octonion {
            coeffs: std::array::from_fn(|i| {
                if i == 0 {
                    self.coeffs[0].clone()
                } else {
                    -&self.coeffs[i]
                }
            }),
        }
    }

    /// `Σ aμ bμ`.
    pub fn inner_product(&self, other: &Octonion) -> Rational {
        crate::exact::dot(&self.coeffs, &other.coeffs)
    }

    /// `Re(x · conj(y))`; agrees with [`Octonion::inner_product`].
    pub fn inner_product_via_product(&self, other: &Octonion) -> Rational {
        self.multiply(&other.conjugate()).real_part().clone()
    }

    pub fn norm_squared(&self) -> Rational {
        self.inner_product(self)
    }

    /// The order-3 automorphism `e0 ↦ e0`, `ei ↦ e(2i mod 7)`.
    pub fn rotate(&self) -> Octonion {
        let mut out = Octonion::zero();
        out.coeffs[0] = self.coeffs[0].clone();
        for i in 1..8 {
            out.coeffs[mod7(2 * i)] = self.coeffs[i].clone();
        }
        out
    }

    /// Applies an 8×8 matrix (columns are images of `eμ`).
    pub fn apply(m: &SquareMatrix, x: &Octonion) -> Octonion {
        let v = m.mul_vec(&x.coeffs).expect("8x8 matrix");
        Octonion {
            coeffs: v.try_into().expect("length 8"),
        }
    }
}

/// Matrix of [`Octonion::rotate`] in the basis `e0..e7`.
pub fn rotation_matrix() -> SquareMatrix {
    let mut m = SquareMatrix::zero(8);
    m.set(0, 0, Rational::one());
    for i in 1..8 {
        m.set(mod7(2 * i), i, Rational::one());
    }
    m
}

/// True iff `m(eμ·eν) = m(eμ)·m(eν)` for all 64 basis pairs, which suffices
/// by bilinearity.
pub fn is_algebra_automorphism(m: &SquareMatrix) -> bool {
    if m.dim() != 8 {
        return false;
    }
    let images: Vec<Octonion> = (0..8)
        .map(|mu| Octonion::apply(m, &Octonion::basis(mu)))
        .collect();
    (0..8).all(|mu| {
        (0..8).all(|nu| {
            let lhs = Octonion::apply(m, &Octonion::basis(mu).multiply(&Octonion::basis(nu)));
            lhs == images[mu].multiply(&images[nu])
        })
    })
}

/// True iff `(m eμ, m eν) = δμν` for all basis pairs.
pub fn preserves_inner_product(m: &SquareMatrix) -> bool {
    m.dim() == 8 && &m.transpose() * m == SquareMatrix::identity(8)
}

/// True iff `span{e0, ea, eb, ec}` is closed under multiplication.
pub fn spans_subalgebra(t: FanoTriple) -> bool {
    let idx = [0, t.0, t.1, t.2];
    let table = structure_constants();
    idx.iter().all(|&a| {
        idx.iter()
            .all(|&b| idx.contains(&table.product(a, b).index))
    })
}

impl Add for &Octonion {
    type Output = Octonion;
    fn add(self, rhs: &Octonion) -> Octonion {
        Octonion {
            coeffs: std::array::from_fn(|i| &self.coeffs[i] + &rhs.coeffs[i]),
        }
    }
}

impl Sub for &Octonion {
    type Output = Octonion;
    fn sub(self, rhs: &Octonion) -> Octonion {
        Octonion {
            coeffs: std::array::from_fn(|i| &self.coeffs[i] - &rhs.coeffs[i]),
        }
    }
}

impl Neg for &Octonion {
    type Output = Octonion;
    fn neg(self) -> Octonion {
        Octonion {
            coeffs: std::array::from_fn(|i| -&self.coeffs[i]),
        }
    }
}

impl Mul for &Octonion {
    type Output = Octonion;
    fn mul(self, rhs: &Octonion) -> Octonion {
        self.multiply(rhs)
    }
}

impl fmt::Debug for Octonion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(ToString::to_string).collect();
        write!(f, "Octonion[{}]", parts.join(", "))
    }
}

impl Serialize for Octonion {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.coeffs.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Octonion {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let v = Vec::<Rational>::deserialize(deserializer)?;
        let len = v.len();
        let coeffs: [Rational; 8] = v
            .try_into()
            .map_err(|_| serde::de::Error::invalid_length(len, &"8 coefficients"))?;
        Ok(Octonion { coeffs })
    }
}
