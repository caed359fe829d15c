//! Invariant polynomials of so(8) and their behaviour under triality.
//!
//! The basis is `p1 = Tr M²`, `p2 = Tr M⁴`, `p3 = Tr M⁶`, `pf = Pf M`.
//!
//! Sign conventions. A real antisymmetric `M` is orthogonally conjugate to
//! the block model `B(λ1..λ4) = diag([[0, λi], [-λi, 0]])`, whose
//! eigenvalues are `±iλi`. Hence
//!
//! ```text
//! det(M - ηI) = Π (η² + λi²) = η⁸ + e1 η⁶ + e2 η⁴ + e3 η² + e4
//! Tr M^(2k)   = 2 (-1)^k Σ λi^(2k)
//! ```
//!
//! [`SpectralCoefficients`] always holds these `ej = ej(λ1², ..., λ4²)` of
//! the block model. Formulas written in terms of the actual eigenvalues
//! `±ηi` (which are `±iλi` here) are used verbatim for the g₂ invariants
//! `c1 = Σ ηi²` and `c3 = (η1 η2 η3)²`; on real matrices these come out as
//! `c1 = -e1` and `c3 = -e3`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{rref, solve_affine, AffineSolution, Rational, SquareMatrix, Vector};
use crate::so8::So8Element;
use crate::triality::sigma;

/// `(Tr M², Tr M⁴, Tr M⁶, Pf M)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub struct InvariantVector {
    pub p1: Rational,
    pub p2: Rational,
    pub p3: Rational,
    pub pf: Rational,
}

impl InvariantVector {
    pub fn new(p1: Rational, p2: Rational, p3: Rational, pf: Rational) -> Self {
        InvariantVector { p1, p2, p3, pf }
    }

    pub fn is_zero(&self) -> bool {
        self.p1.is_zero() && self.p2.is_zero() && self.p3.is_zero() && self.pf.is_zero()
    }

    /// Values of the degree-6 basis `(p1³, p1·p2, p1·pf, p3)`.
    pub fn degree6(&self) -> Degree6Vector {
        Degree6Vector([
            self.p1.pow(3),
            &self.p1 * &self.p2,
            &self.p1 * &self.pf,
            self.p3.clone(),
        ])
    }
}

/// Coordinates over the ordered basis `(Tr(M²)³, Tr(M²)Tr(M⁴), Tr(M²)Pf(M), Tr(M⁶))`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Degree6Vector(pub [Rational; 4]);

/// Elementary symmetric functions `e1..e4` of `(λ1², ..., λ4²)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SpectralCoefficients {
    pub e1: Rational,
    pub e2: Rational,
    pub e3: Rational,
    pub e4: Rational,
}

/// `Tr(M^k)` for even `k >= 2`. Odd powers of an antisymmetric matrix are
/// traceless and are rejected.
pub fn tr_power(m: &So8Element, k: u32) -> Result<Rational> {
    if k == 0 || k % 2 == 1 {
        return Err(Error::OddTracePower(k));
    }
    Ok(m.matrix().pow(k).trace())
}

/// Pfaffian of an even-dimensional antisymmetric matrix as the signed sum
/// over perfect matchings, expanded along the lowest remaining index.
pub fn pfaffian_of_matrix(a: &SquareMatrix) -> Rational {
    fn expand(a: &SquareMatrix, idx: &[usize]) -> Rational {
        let Some((&first, rest)) = idx.split_first() else {
            return Rational::one();
        };
        let mut acc = Rational::zero();
        for (k, &partner) in rest.iter().enumerate() {
            let entry = a.get(first, partner);
            if entry.is_zero() {
                continue;
            }
            let remaining: Vec<usize> = rest.iter().copied().filter(|&x| x != partner).collect();
            let term = entry * &expand(a, &remaining);
            if k % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        acc
    }
    if a.dim() % 2 == 1 {
        return Rational::zero();
    }
    let idx: Vec<usize> = (0..a.dim()).collect();
    expand(a, &idx)
}

/// Pf via the 105 perfect matchings of 8 points.
pub fn pfaffian_matchings(m: &So8Element) -> Rational {
    pfaffian_of_matrix(m.matrix())
}

/// Calls `visit(perm, odd)` for every permutation of `items`, generated by
/// Heap's algorithm; `odd` is the parity relative to the starting order.
fn for_each_permutation(items: &mut [usize], mut visit: impl FnMut(&[usize], bool)) {
    let n = items.len();
    let mut c = vec![0usize; n];
    let mut odd = false;
    visit(items, odd);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                items.swap(0, i);
            } else {
                items.swap(c[i], i);
            }
            odd = !odd;
            visit(items, odd);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

fn pairing_product(a: &SquareMatrix, p: &[usize]) -> Option<Rational> {
    let mut acc = Rational::one();
    for pair in p.chunks(2) {
        let e = a.get(pair[0], pair[1]);
        if e.is_zero() {
            return None;
        }
        acc *= e;
    }
    Some(acc)
}

/// `D·A` as machine integers, with `D` the lcm of the denominators of `A`,
/// or `None` if some scaled entry exceeds `i64`.
fn integer_scaled(a: &SquareMatrix) -> Option<(Vec<Vec<i64>>, Rational)> {
    let mut d = num_bigint::BigInt::from(1);
    for row in a.rows() {
        for x in row {
            d = num_integer::Integer::lcm(&d, x.denom());
        }
    }
    let d = Rational::from(num_rational::BigRational::from_integer(d));
    let rows = a
        .rows()
        .into_iter()
        .map(|row| {
            row.iter()
                .map(|x| i64::try_from((x * &d).numer()).ok())
                .collect::<Option<Vec<_>>>()
        })
        .collect::<Option<Vec<_>>>()?;
    Some((rows, d))
}

/// `Σ sgn(η) Π A[η(2k)][η(2k+1)]` over the permutations of `letters`
/// placed after the fixed prefix `prefix`.
fn signed_pairing_sum(a: &SquareMatrix, prefix: &[usize], letters: &mut [usize]) -> Rational {
    let n = prefix.len() + letters.len();
    let mut full = vec![0usize; n];
    full[..prefix.len()].copy_from_slice(prefix);
    if let Some((rows, d)) = integer_scaled(a) {
        // Exact in i128 unless a partial sum overflows.
        let mut acc: Option<i128> = Some(0);
        for_each_permutation(&mut letters.to_vec(), |p, odd| {
            let Some(total) = acc else { return };
            full[prefix.len()..].copy_from_slice(p);
            let mut t: Option<i128> = Some(1);
            for pair in full.chunks(2) {
                t = t.and_then(|t| t.checked_mul(rows[pair[0]][pair[1]] as i128));
            }
            acc = t.and_then(|t| {
                if odd {
                    total.checked_sub(t)
                } else {
                    total.checked_add(t)
                }
            });
        });
        if let Some(total) = acc {
            let total = Rational::from(num_rational::BigRational::from_integer(total.into()));
            return &total / &d.pow((n / 2) as u32);
        }
    }
    let mut acc = Rational::zero();
    for_each_permutation(letters, |p, odd| {
        full[prefix.len()..].copy_from_slice(p);
        if let Some(t) = pairing_product(a, &full) {
            if odd {
                acc -= t;
            } else {
                acc += t;
            }
        }
    });
    acc
}

/// `1/(4!·2⁴) · Σ_{η∈S8} sgn(η) M_{η0 η1} M_{η2 η3} M_{η4 η5} M_{η6 η7}`,
/// evaluated term by term (40320 terms).
pub fn pfaffian_permutation_sum(m: &So8Element) -> Rational {
    let mut letters: Vec<usize> = (0..8).collect();
    &signed_pairing_sum(m.matrix(), &[], &mut letters) / &Rational::from(24 * 16)
}

/// `1/(6·8) · Σ_{η∈S7} sgn(η) M_{0 η1} M_{η2 η3} M_{η4 η5} M_{η6 η7}` with
/// `η` permuting `{1..7}` (5040 terms).
pub fn pfaffian_fixed_zero_sum(m: &So8Element) -> Rational {
    let mut letters: Vec<usize> = (1..8).collect();
    &signed_pairing_sum(m.matrix(), &[0], &mut letters) / &Rational::from(6 * 8)
}

pub fn invariant_vector(m: &So8Element) -> InvariantVector {
    let sq = m.matrix().pow(2);
    let fourth = &sq * &sq;
    let sixth = &fourth * &sq;
    InvariantVector {
        p1: sq.trace(),
        p2: fourth.trace(),
        p3: sixth.trace(),
        pf: pfaffian_matchings(m),
    }
}

/// `ej` read off `det(M - ηI)`: the coefficients of `η⁶, η⁴, η², η⁰`.
pub fn spectral_coefficients(m: &So8Element) -> SpectralCoefficients {
    let cp = m.matrix().char_poly();
    SpectralCoefficients {
        e1: cp.coeff(6),
        e2: cp.coeff(4),
        e3: cp.coeff(2),
        e4: cp.coeff(0),
    }
}

/// Newton's identities from the power sums `qk = Σ λi^(2k) = (-1)^k pk / 2`:
/// `e1 = q1`, `e2 = (q1² - q2)/2`, `e3 = (q1³ - 3 q1 q2 + 2 q3)/6`, `e4 = pf²`.
pub fn newton_coefficients(v: &InvariantVector) -> SpectralCoefficients {
    let half = Rational::new(1, 2);
    let q1 = -(&v.p1 * &half);
    let q2 = &v.p2 * &half;
    let q3 = -(&v.p3 * &half);
    let e1 = q1.clone();
    let e2 = &(&q1.pow(2) - &q2) * &half;
    let e3 = &(&(&q1.pow(3) - &(&(&Rational::from(3) * &q1) * &q2)) + &(&Rational::from(2) * &q3))
        / &Rational::from(6);
    let e4 = v.pf.pow(2);
    SpectralCoefficients { e1, e2, e3, e4 }
}

/// Invariants of `σ(M)` in terms of those of `M`:
///
/// ```text
/// p1 ↦ p1
/// p2 ↦ 3/8 p1² - 1/2 p2 - 12 pf
/// pf ↦ -1/64 p1² + 1/16 p2 - 1/2 pf
/// p3 ↦ 15/64 p1³ - 15/16 p1 p2 - 15/2 p1 pf + p3
/// ```
pub fn sigma_transform_invariants(v: &InvariantVector) -> InvariantVector {
    let InvariantVector { p1, p2, p3, pf } = v;
    let p1sq = p1.pow(2);
    let new_p2 = &(&(&Rational::new(3, 8) * &p1sq) - &(&Rational::new(1, 2) * p2))
        - &(&Rational::from(12) * pf);
    let new_pf = &(&(&Rational::new(-1, 64) * &p1sq) + &(&Rational::new(1, 16) * p2))
        - &(&Rational::new(1, 2) * pf);
    let new_p3 = &(&(&(&Rational::new(15, 64) * &p1.pow(3))
        - &(&(&Rational::new(15, 16) * p1) * p2))
        - &(&(&Rational::new(15, 2) * p1) * pf))
        + p3;
    InvariantVector {
        p1: p1.clone(),
        p2: new_p2,
        p3: new_p3,
        pf: new_pf,
    }
}

/// The matrix acting on [`Degree6Vector`] coordinates.
pub fn t_base() -> SquareMatrix {
    let r = |n, d| Rational::new(n, d);
    SquareMatrix::from_rows(vec![
        vec![r(1, 1), r(0, 1), r(0, 1), r(0, 1)],
        vec![r(3, 8), r(-1, 2), r(-12, 1), r(0, 1)],
        vec![r(-1, 64), r(1, 16), r(-1, 2), r(0, 1)],
        vec![r(15, 64), r(-15, 16), r(-15, 2), r(1, 1)],
    ])
    .expect("4x4")
}

pub fn t_matrix(power: u32) -> SquareMatrix {
    t_base().pow(power)
}

impl Degree6Vector {
    pub fn transformed(&self, t: &SquareMatrix) -> Degree6Vector {
        let v = t.mul_vec(&self.0).expect("4 coordinates");
        Degree6Vector(v.try_into().expect("4 coordinates"))
    }

    /// `Σ ck · basisk` for a coefficient vector `c`.
    pub fn evaluate(&self, coefficients: &[Rational]) -> Rational {
        crate::exact::dot(&self.0, coefficients)
    }
}

/// `Tr(M²)³`.
pub fn cubic_trace_functional() -> Vector {
    [1, 0, 0, 0].map(Rational::from).to_vec()
}

/// `5 Tr(M²)Tr(M⁴) - 8 Tr(M⁶)`.
pub fn mixed_trace_functional() -> Vector {
    [0, 5, 0, -8].map(Rational::from).to_vec()
}

/// σ-invariant degree-6 functionals: the kernel of `Tᵗ - I`. Must be
/// 2-dimensional and contain [`cubic_trace_functional`] and
/// [`mixed_trace_functional`].
pub fn fixed_degree6_space() -> Result<Vec<Vector>> {
    let shifted = t_base()
        .transpose()
        .checked_sub(&SquareMatrix::identity(4))?;
    let kernel = shifted.kernel_basis();
    if kernel.len() != 2 {
        return Err(Error::Consistency(format!(
            "σ-invariant degree-6 space has dimension {}, expected 2",
            kernel.len()
        )));
    }
    for v in [cubic_trace_functional(), mixed_trace_functional()] {
        let mut rows = kernel.clone();
        rows.push(v.clone());
        if rref(&rows, 4).pivots.len() != 2 {
            return Err(Error::Consistency(format!("{v:?} is not σ-invariant")));
        }
    }
    Ok(kernel)
}

/// Degree-2 and degree-6 invariants of g₂ restricted from so(8).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct G2Invariants {
    pub c1: Rational,
    pub c3: Rational,
}

/// `c1 = p1/2`.
pub fn c1_from_invariants(v: &InvariantVector) -> Rational {
    &v.p1 * &Rational::new(1, 2)
}

/// `c3 = p1³/48 - p1 p2/8 + p3/6`, the Newton-identity expression for
/// `e3(η1², η2², η3²)`; one representative of a family that agrees on the
/// g₂ locus.
pub fn c3_from_invariants(v: &InvariantVector) -> Rational {
    let [a, b, c] = C3_COEFFICIENTS.map(|(n, d)| Rational::new(n, d));
    &(&(&a * &v.p1.pow(3)) + &(&(&b * &v.p1) * &v.p2)) + &(&c * &v.p3)
}

/// Coefficients of `(p1³, p1·p2, p3)` in [`c3_from_invariants`].
pub const C3_COEFFICIENTS: [(i64, i64); 3] = [(1, 48), (-1, 8), (1, 6)];

/// `(c1, c3)` of an element fixed by σ.
pub fn g2_restriction(m: &So8Element) -> Result<G2Invariants> {
    if sigma(m) != *m {
        return Err(Error::NotFixedBySigma);
    }
    let v = invariant_vector(m);
    Ok(G2Invariants {
        c1: c1_from_invariants(&v),
        c3: c3_from_invariants(&v),
    })
}

/// Eigenvalue model of g₂ ⊂ so(8): eigenvalues `0, 0, ±η1, ±η2, ±η3` with
/// `η1 + η2 + η3 = 0`, taken literally (so `pk = 2 Σ ηi^(2k)`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EtaModel {
    pub eta: [Rational; 3],
}

impl EtaModel {
    pub fn new(eta1: Rational, eta2: Rational) -> Self {
        let eta3 = -(&eta1 + &eta2);
        EtaModel {
            eta: [eta1, eta2, eta3],
        }
    }

    fn power_sum(&self, k: u32) -> Rational {
        self.eta.iter().map(|x| x.pow(k)).sum()
    }

    pub fn invariants(&self) -> InvariantVector {
        let two = Rational::from(2);
        InvariantVector {
            p1: &two * &self.power_sum(2),
            p2: &two * &self.power_sum(4),
            p3: &two * &self.power_sum(6),
            pf: Rational::zero(),
        }
    }

    pub fn c1(&self) -> Rational {
        self.power_sum(2)
    }

    pub fn c3(&self) -> Rational {
        self.eta.iter().cloned().product::<Rational>().pow(2)
    }
}

/// All `(α, β, γ)` with `c3 = α p1³ + β p1 p2 + γ p3` on the given model
/// points, or `None` if no such triple exists.
pub fn solve_c3_coefficients(points: &[EtaModel]) -> Option<AffineSolution> {
    let rows: Vec<Vector> = points
        .iter()
        .map(|pt| {
            let v = pt.invariants();
            vec![v.p1.pow(3), &v.p1 * &v.p2, v.p3]
        })
        .collect();
    let rhs: Vec<Rational> = points.iter().map(EtaModel::c3).collect();
    solve_affine(&rows, &rhs, 3)
}

/// True iff `coefficients` lies in `solution`.
pub fn in_affine_solution(solution: &AffineSolution, coefficients: &[Rational]) -> bool {
    let diff: Vector = coefficients
        .iter()
        .zip(&solution.particular)
        .map(|(a, b)| a - b)
        .collect();
    let mut rows = solution.directions.clone();
    let base_rank = rref(&rows, diff.len()).pivots.len();
    rows.push(diff);
    rref(&rows, solution.particular.len()).pivots.len() == base_rank
}

/// Coefficients of `det(M - ηI)` at `η⁴` and `η²` as printed in the
/// literature this toolkit checks, alongside the ones derived from Newton's
/// identities. Both printed forms disagree with the derived ones.
pub mod printed {
    use super::*;

    /// `1/4 p1² + 1/8 p2`.
    pub fn eta4_coefficient(v: &InvariantVector) -> Rational {
        &(&Rational::new(1, 4) * &v.p1.pow(2)) + &(&Rational::new(1, 8) * &v.p2)
    }

    /// `1/48 p1³ - 6 p1 p2 + 8 p3`.
    pub fn eta2_coefficient(v: &InvariantVector) -> Rational {
        &(&(&Rational::new(1, 48) * &v.p1.pow(3)) - &(&(&Rational::from(6) * &v.p1) * &v.p2))
            + &(&Rational::from(8) * &v.p3)
    }

    /// `1/16 p1³ - 5 p1 p2 + 8 p3`.
    pub fn c3(v: &InvariantVector) -> Rational {
        let [a, b, c] = C3_COEFFICIENTS.map(|(n, d)| Rational::new(n, d));
        &(&(&a * &v.p1.pow(3)) + &(&(&b * &v.p1) * &v.p2)) + &(&c * &v.p3)
    }

    /// Coefficients of `(p1³, p1·p2, p3)` in [`c3`].
    pub const C3_COEFFICIENTS: [(i64, i64); 3] = [(1, 16), (-5, 1), (8, 1)];

    /// `Tr M⁴ = 1/2 (Tr M²)²` on g₂.
    pub fn g2_quartic(v: &InvariantVector) -> Rational {
        &Rational::new(1, 2) * &v.p1.pow(2)
    }
}

/// Coefficients of `det(M - ηI)` derived from Newton's identities.
pub mod derived {
    use super::*;

    /// `1/8 p1² - 1/4 p2`.
    pub fn eta4_coefficient(v: &InvariantVector) -> Rational {
        &(&Rational::new(1, 8) * &v.p1.pow(2)) - &(&Rational::new(1, 4) * &v.p2)
    }

    /// `-1/48 p1³ + 1/8 p1 p2 - 1/6 p3`.
    pub fn eta2_coefficient(v: &InvariantVector) -> Rational {
        -c3_from_invariants(v)
    }

    /// `Tr M⁴ = 1/4 (Tr M²)²` on g₂.
    pub fn g2_quartic(v: &InvariantVector) -> Rational {
        &Rational::new(1, 4) * &v.p1.pow(2)
    }
}

/// Canonical block model `diag([[0, λi], [-λi, 0]])`.
pub fn block_model(lambda: &[Rational; 4]) -> So8Element {
    let mut m = SquareMatrix::zero(8);
    for (k, l) in lambda.iter().enumerate() {
        m.set(2 * k, 2 * k + 1, l.clone());
        m.set(2 * k + 1, 2 * k, -l);
    }
    So8Element::from_matrix(m).expect("block model is antisymmetric")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Locus {
    So8,
    So7,
    G2,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EigenstructureStatus {
    Generic,
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EigenstructureReport {
    pub locus: Locus,
    pub status: EigenstructureStatus,
    /// `(identity, holds)` for each coefficient identity checked.
    pub checks: Vec<(String, bool)>,
}

/// Coefficient-level consequences of the eigenvalue pattern of each locus:
/// so(7) has two zero eigenvalues (`e4 = 0`, `pf = 0`); g₂ additionally has
/// its nonzero eigenvalues in a triple summing to zero (`e2 = e1²/4`,
/// `p2 = p1²/4`).
pub fn eigenstructure_check(m: &So8Element, locus: Locus) -> EigenstructureReport {
    if locus == Locus::So8 {
        return EigenstructureReport {
            locus,
            status: EigenstructureStatus::Generic,
            checks: Vec::new(),
        };
    }
    let v = invariant_vector(m);
    let e = spectral_coefficients(m);
    let quarter = Rational::new(1, 4);
    let mut checks = vec![
        ("pf = 0".to_string(), v.pf.is_zero()),
        ("e4 = 0".to_string(), e.e4.is_zero()),
    ];
    if locus == Locus::G2 {
        checks.push(("e2 = e1^2/4".to_string(), e.e2 == &quarter * &e.e1.pow(2)));
        checks.push(("p2 = p1^2/4".to_string(), v.p2 == &quarter * &v.p1.pow(2)));
    }
    let status = if checks.iter().all(|(_, ok)| *ok) {
        EigenstructureStatus::Pass
    } else {
        EigenstructureStatus::Fail
    };
    EigenstructureReport {
        locus,
        status,
        checks,
    }
}
