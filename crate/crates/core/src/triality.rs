//! The order-3 triality automorphism σ of so(8), the order-2 outer
//! involution, and their fixed subalgebras.
//!
//! σ acts on each quadruple of [`crate::so8::quadruples`] by the block
//!
//! ```text
//!        | -1 -1 -1 -1 |
//!  1/2 · |  1  1 -1 -1 |
//!        |  1 -1  1 -1 |
//!        |  1 -1 -1  1 |
//! ```
//!
//! applied to the coefficient 4-vector taken in the quadruple's stored slot
//! order, with slot signs folded in. All applications go through the
//! assembled 28×28 matrix.

use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{is_zero_vector, null_space, rref, Rational, SquareMatrix, Vector};
use crate::so8::{bracket, generators, quadruples, Sampler, So8Element, DEFAULT_BOUND, DIM};

/// Seeds of the elements whose centralizers determine the rank.
pub const RANK_SEEDS: [u64; 5] = [1, 2, 3, 4, 5];

/// The 4×4 block acting on each quadruple.
pub fn standard_block() -> SquareMatrix {
    SquareMatrix::from_i64_rows(
        &[
            &[-1, -1, -1, -1],
            &[1, 1, -1, -1],
            &[1, -1, 1, -1],
            &[1, -1, -1, 1],
        ],
        &Rational::new(1, 2),
    )
    .expect("4x4")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrialityMap {
    block: SquareMatrix,
    full: SquareMatrix,
}

impl TrialityMap {
    /// Assembles the 28×28 action of an arbitrary 4×4 block.
    pub fn from_block(block: SquareMatrix) -> Result<Self> {
        if block.dim() != 4 {
            return Err(Error::DimensionMismatch {
                left: 4,
                right: block.dim(),
            });
        }
        let mut full = SquareMatrix::zero(DIM);
        for quad in quadruples() {
            for (r, sr) in quad.slots.iter().enumerate() {
                for (c, sc) in quad.slots.iter().enumerate() {
                    let v = &(block.get(r, c) * &sr.sign()) * &sc.sign();
                    full.set(sr.generator.index(), sc.generator.index(), v);
                }
            }
        }
        Ok(TrialityMap { block, full })
    }

    pub fn standard() -> &'static TrialityMap {
        static MAP: OnceLock<TrialityMap> = OnceLock::new();
        MAP.get_or_init(|| TrialityMap::from_block(standard_block()).expect("4x4 block"))
    }

    pub fn block(&self) -> &SquareMatrix {
        &self.block
    }

    pub fn full(&self) -> &SquareMatrix {
        &self.full
    }

    pub fn apply(&self, x: &So8Element) -> So8Element {
        let v = self.full.mul_vec(x.coeffs()).expect("28 coefficients");
        So8Element::from_coeffs(v).expect("28 coefficients")
    }

    pub fn apply_power(&self, x: &So8Element, power: u32) -> So8Element {
        let v = self
            .full
            .pow(power)
            .mul_vec(x.coeffs())
            .expect("28 coefficients");
        So8Element::from_coeffs(v).expect("28 coefficients")
    }
}

/// σ(x) for the standard map.
pub fn sigma(x: &So8Element) -> So8Element {
    TrialityMap::standard().apply(x)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PairOrigin {
    Basis { left: usize, right: usize },
    Random { sample: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BracketViolation {
    pub origin: PairOrigin,
    pub x: Vec<Rational>,
    pub y: Vec<Rational>,
    pub lhs: Vec<Rational>,
    pub rhs: Vec<Rational>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct BracketReport {
    pub basis_pairs: usize,
    pub random_pairs: usize,
    pub violations: Vec<BracketViolation>,
}

impl BracketReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks `σ[x,y] = [σx, σy]` on every pair of basis generators and on
/// `samples` random pairs drawn from `seed`.
pub fn verify_bracket_preservation(
    map: &TrialityMap,
    samples: usize,
    seed: u64,
    bound: i64,
) -> Result<BracketReport> {
    let mut report = BracketReport::default();
    let check = |x: &So8Element, y: &So8Element, origin: PairOrigin, report: &mut BracketReport| {
        let lhs = map.apply(&bracket(x, y));
        let rhs = bracket(&map.apply(x), &map.apply(y));
        if lhs != rhs {
            report.violations.push(BracketViolation {
                origin,
                x: x.coeffs().to_vec(),
                y: y.coeffs().to_vec(),
                lhs: lhs.coeffs().to_vec(),
                rhs: rhs.coeffs().to_vec(),
            });
        }
    };
    for a in 0..DIM {
        for b in 0..DIM {
            check(
                &So8Element::basis(a),
                &So8Element::basis(b),
                PairOrigin::Basis { left: a, right: b },
                &mut report,
            );
            report.basis_pairs += 1;
        }
    }
    let mut sampler = Sampler::new(seed, bound)?;
    for sample in 0..samples {
        let x = sampler.next_element();
        let y = sampler.next_element();
        check(&x, &y, PairOrigin::Random { sample }, &mut report);
        report.random_pairs += 1;
    }
    Ok(report)
}

/// A Lie subalgebra of so(8) spanned by `basis`, kept in reduced row echelon
/// form so that coordinates are read off at the pivot generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedSubalgebra {
    pub tag: SubalgebraTag,
    basis: Vec<So8Element>,
    pivots: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SubalgebraTag {
    G2,
    So7,
    Span,
}

impl FixedSubalgebra {
    /// Span of `vectors`; fails unless closed under the bracket.
    pub fn from_spanning(vectors: &[So8Element], tag: SubalgebraTag) -> Result<Self> {
        let rows: Vec<Vector> = vectors.iter().map(|v| v.coeffs().to_vec()).collect();
        let reduced = rref(&rows, DIM);
        let basis = reduced
            .rows
            .into_iter()
            .map(|r| So8Element::from_coeffs(r).expect("28 coefficients"))
            .collect();
        let s = FixedSubalgebra {
            tag,
            basis,
            pivots: reduced.pivots,
        };
        s.check_closure()?;
        Ok(s)
    }

    /// Fixed locus `ker(auto - I)` of a linear map on the 28 coefficients.
    pub fn fixed_locus(automorphism: &SquareMatrix, tag: SubalgebraTag) -> Result<Self> {
        let shifted = automorphism.checked_sub(&SquareMatrix::identity(DIM))?;
        let kernel: Vec<So8Element> = null_space(&shifted.rows(), DIM)
            .into_iter()
            .map(|v| So8Element::from_coeffs(v).expect("28 coefficients"))
            .collect();
        Self::from_spanning(&kernel, tag)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[So8Element] {
        &self.basis
    }

    /// Coordinates of `x` in the basis, or `None` if `x` is outside the span.
    pub fn coordinates(&self, x: &So8Element) -> Option<Vector> {
        let coords: Vector = self.pivots.iter().map(|&p| x.coeffs()[p].clone()).collect();
        let rebuilt = So8Element::combination(&self.basis, &coords);
        (rebuilt == *x).then_some(coords)
    }

    pub fn contains(&self, x: &So8Element) -> bool {
        self.coordinates(x).is_some()
    }

    fn check_closure(&self) -> Result<()> {
        for (a, x) in self.basis.iter().enumerate() {
            for (b, y) in self.basis.iter().enumerate().skip(a + 1) {
                if !self.contains(&bracket(x, y)) {
                    return Err(Error::Consistency(format!(
                        "subalgebra not closed: bracket of basis elements {a} and {b} leaves the span"
                    )));
                }
            }
        }
        Ok(())
    }

    /// `ad(b)` for every basis element `b`, in the subalgebra's own basis.
    pub fn adjoint_matrices(&self) -> Vec<SquareMatrix> {
        let n = self.dim();
        self.basis
            .iter()
            .map(|x| {
                let mut ad = SquareMatrix::zero(n);
                for (j, y) in self.basis.iter().enumerate() {
                    let c = self
                        .coordinates(&bracket(x, y))
                        .expect("closed under bracket");
                    for (k, v) in c.into_iter().enumerate() {
                        ad.set(k, j, v);
                    }
                }
                ad
            })
            .collect()
    }

    /// Gram matrix of `κ(x, y) = Tr(ad x · ad y)`.
    pub fn killing_form(&self) -> SquareMatrix {
        let ads = self.adjoint_matrices();
        let n = self.dim();
        SquareMatrix::from_fn(n, |i, j| trace_of_product(&ads[i], &ads[j]))
    }

    /// `dim` of the centralizer of `x` inside the subalgebra.
    pub fn centralizer_dim(&self, x: &So8Element) -> Result<usize> {
        let coords = self
            .coordinates(x)
            .ok_or_else(|| Error::Consistency("element outside the subalgebra".into()))?;
        let ads = self.adjoint_matrices();
        let n = self.dim();
        let ad_x = SquareMatrix::from_fn(n, |r, c| {
            ads.iter()
                .zip(&coords)
                .filter(|(_, k)| !k.is_zero())
                .map(|(ad, k)| ad.get(r, c) * k)
                .sum()
        });
        Ok(n - ad_x.rank())
    }
}

fn trace_of_product(a: &SquareMatrix, b: &SquareMatrix) -> Rational {
    let n = a.dim();
    let mut acc = Rational::zero();
    for i in 0..n {
        for k in 0..n {
            let x = a.get(i, k);
            let y = b.get(k, i);
            if !x.is_zero() && !y.is_zero() {
                acc += x * y;
            }
        }
    }
    acc
}

/// Fixed subalgebra of a triality map; must be 14-dimensional and closed.
pub fn fixed_subalgebra(map: &TrialityMap) -> Result<FixedSubalgebra> {
    let s = FixedSubalgebra::fixed_locus(map.full(), SubalgebraTag::G2)?;
    if s.dim() != 14 {
        return Err(Error::Consistency(format!(
            "fixed subalgebra has dimension {}, expected 14",
            s.dim()
        )));
    }
    Ok(s)
}

/// `diag(1, 1, 1, 1, 1, 1, 1, -1)`, a det −1 element of O(8).
pub fn involution_conjugator() -> SquareMatrix {
    let mut d = vec![Rational::one(); 8];
    d[7] = Rational::from(-1);
    SquareMatrix::diagonal(&d)
}

/// Conjugation by [`involution_conjugator`]; it is its own inverse.
pub fn outer_involution(x: &So8Element) -> So8Element {
    let a = involution_conjugator();
    x.conjugate_by(&a, &a)
        .expect("conjugation by an orthogonal matrix")
}

/// The outer involution as a 28×28 matrix on coefficients.
pub fn outer_involution_matrix() -> SquareMatrix {
    let mut m = SquareMatrix::zero(DIM);
    for (n, g) in generators().iter().enumerate() {
        let s = if g.j() == 7 {
            Rational::from(-1)
        } else {
            Rational::one()
        };
        m.set(n, n, s);
    }
    m
}

/// Fixed locus of the outer involution; must be 21-dimensional and closed.
pub fn so7_fixed_subalgebra() -> Result<FixedSubalgebra> {
    let s = FixedSubalgebra::fixed_locus(&outer_involution_matrix(), SubalgebraTag::So7)?;
    if s.dim() != 21 {
        return Err(Error::Consistency(format!(
            "so(7) fixed locus has dimension {}, expected 21",
            s.dim()
        )));
    }
    Ok(s)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StructureReport {
    pub dim: usize,
    pub killing_nondegenerate: bool,
    pub rank: usize,
}

/// Dimension, Killing-form nondegeneracy, and rank (minimum centralizer
/// dimension over random elements drawn with [`RANK_SEEDS`]).
pub fn identify_fixed_algebra(s: &FixedSubalgebra) -> StructureReport {
    let killing_nondegenerate = s.dim() > 0 && !s.killing_form().determinant().is_zero();
    let rank = RANK_SEEDS
        .iter()
        .map(|&seed| {
            let mut sampler = Sampler::new(seed, DEFAULT_BOUND).expect("positive bound");
            let x = sampler.next_combination(s.basis());
            s.centralizer_dim(&x)
                .expect("combination of basis lies in the span")
        })
        .min()
        .unwrap_or(0);
    StructureReport {
        dim: s.dim(),
        killing_nondegenerate,
        rank,
    }
}

/// Common fixed points of σ and the outer involution.
pub fn common_fixed_locus(map: &TrialityMap) -> Result<FixedSubalgebra> {
    let id = SquareMatrix::identity(DIM);
    let mut rows = map.full().checked_sub(&id)?.rows();
    rows.extend(outer_involution_matrix().checked_sub(&id)?.rows());
    let kernel: Vec<So8Element> = null_space(&rows, DIM)
        .into_iter()
        .filter(|v| !is_zero_vector(v))
        .map(|v| So8Element::from_coeffs(v).expect("28 coefficients"))
        .collect();
    FixedSubalgebra::from_spanning(&kernel, SubalgebraTag::Span)
}
