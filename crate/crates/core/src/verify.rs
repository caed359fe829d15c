//! The verification suites behind `triality verify`.
//!
//! Every check is exact. Random samples come from [`Sampler`] streams seeded
//! from the configured seed, one stream per check, so a report depends only
//! on the configuration.

use std::fmt;
use std::str::FromStr;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exact::{q, Rational, SquareMatrix};
use crate::invariants::{
    block_model, c1_from_invariants, c3_from_invariants, cubic_trace_functional, derived,
    eigenstructure_check, fixed_degree6_space, in_affine_solution, invariant_vector,
    mixed_trace_functional, newton_coefficients, pfaffian_fixed_zero_sum, pfaffian_matchings,
    pfaffian_permutation_sum, printed, sigma_transform_invariants, solve_c3_coefficients,
    spectral_coefficients, t_matrix, EigenstructureStatus, EtaModel, InvariantVector, Locus,
    C3_COEFFICIENTS,
};
use crate::octonion::{
    is_algebra_automorphism, preserves_inner_product, rotation_matrix, structure_constants,
    Octonion, SignedBasis,
};
use crate::report::{CheckEntry, Report, Status};
use crate::so8::{
    bracket, quadruples, quadruples_partition_generators, Generator, Sampler, So8Element,
    DEFAULT_BOUND, DIM,
};
use crate::triality::{
    identify_fixed_algebra, so7_fixed_subalgebra, verify_bracket_preservation, FixedSubalgebra,
    SubalgebraTag, TrialityMap,
};

/// Cap on samples for the checks that are expensive per element.
pub const HEAVY_SAMPLE_CAP: usize = 50;
/// Number of λ-tuples for the block-model Pfaffian check.
pub const BLOCK_MODEL_TUPLES: usize = 10;
/// Number of η-model points for the g₂ degree-6 invariant.
pub const ETA_POINTS: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Suite {
    Octonion,
    So8,
    Triality,
    Invariants,
}

impl Suite {
    pub const ALL: [Suite; 4] = [
        Suite::Octonion,
        Suite::So8,
        Suite::Triality,
        Suite::Invariants,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Octonion => "octonion",
            Suite::So8 => "so8",
            Suite::Triality => "triality",
            Suite::Invariants => "invariants",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| {
                Error::Malformed(format!(
                    "unknown suite {s:?}; expected one of octonion, so8, triality, invariants"
                ))
            })
    }
}

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub samples: usize,
    pub seed: u64,
    pub bound: i64,
    /// `None` runs every suite.
    pub suite: Option<Suite>,
    pub map: TrialityMap,
    /// True when `map` was built from a user-supplied block.
    pub custom_block: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            samples: 100,
            seed: 42,
            bound: DEFAULT_BOUND,
            suite: None,
            map: TrialityMap::standard().clone(),
            custom_block: false,
        }
    }
}

impl VerifyConfig {
    fn describe(&self) -> Value {
        let block = if self.custom_block {
            serde_json::to_value(self.map.block()).expect("matrix serializes")
        } else {
            Value::String("standard".into())
        };
        json!({
            "samples": self.samples,
            "seed": self.seed,
            "bound": self.bound,
            "suite": self.suite.map_or("all", Suite::name),
            "block": block,
        })
    }

    fn sampler(&self, salt: u64) -> Sampler {
        let seed = self.seed.wrapping_mul(1_000_003).wrapping_add(salt);
        Sampler::new(seed, self.bound).expect("bound validated")
    }

    fn heavy_samples(&self) -> usize {
        self.samples.min(HEAVY_SAMPLE_CAP)
    }
}

/// Runs the selected suites in the fixed order octonion, so8, triality,
/// invariants.
pub fn run_verify(cfg: &VerifyConfig) -> Result<Report> {
    if cfg.samples == 0 {
        return Err(Error::Malformed("samples must be at least 1".into()));
    }
    if cfg.bound < 1 {
        return Err(Error::ZeroBound);
    }
    let mut checks = Vec::new();
    for suite in Suite::ALL {
        if cfg.suite.is_some_and(|s| s != suite) {
            continue;
        }
        match suite {
            Suite::Octonion => octonion_suite(cfg, &mut checks),
            Suite::So8 => so8_suite(cfg, &mut checks),
            Suite::Triality => triality_suite(cfg, &mut checks),
            Suite::Invariants => invariants_suite(cfg, &mut checks),
        }
    }
    Ok(Report {
        config: cfg.describe(),
        checks,
    })
}

fn coeffs(x: &[Rational]) -> Value {
    serde_json::to_value(x).expect("rationals serialize")
}

fn text<T: fmt::Display>(x: T) -> Value {
    Value::String(x.to_string())
}

fn invariants_json(v: &InvariantVector) -> Value {
    serde_json::to_value(v).expect("invariants serialize")
}

/// First failing sample, if any.
fn first_failure(n: usize, mut f: impl FnMut(usize) -> Option<Value>) -> Option<Value> {
    (0..n).find_map(|k| {
        f(k).map(|mut v| {
            v["sample"] = json!(k);
            v
        })
    })
}

fn random_octonion(s: &mut Sampler) -> Octonion {
    Octonion::new(std::array::from_fn(|_| s.next_integer()))
}

fn octonion_suite(cfg: &VerifyConfig, out: &mut Vec<CheckEntry>) {
    let table = structure_constants();
    let minus_one = SignedBasis {
        negative: true,
        index: 0,
    };

    let bad = (1..8)
        .find(|&i| table.product(i, i) != minus_one)
        .map(|i| json!({"product": format!("e{i}*e{i}"), "value": text(table.product(i, i))}))
        .or_else(|| {
            (0..8)
                .find(|&i| {
                    let id = SignedBasis {
                        negative: false,
                        index: i,
                    };
                    table.product(0, i) != id || table.product(i, 0) != id
                })
                .map(|i| json!({"unit": "e0", "basis": i}))
        });
    out.push(
        CheckEntry::new(
            "octonion_unit_squares",
            "e0 is the unit and ei*ei = -e0 for i = 1..7",
            64,
        )
        .with_outcome(bad),
    );

    let mut bad = None;
    'outer: for i in 1..8 {
        for j in 1..8 {
            if i == j {
                continue;
            }
            let (a, b) = (table.product(i, j), table.product(j, i));
            if a.index != b.index || a.negative == b.negative {
                bad = Some(json!({"left": i, "right": j, "ij": text(a), "ji": text(b)}));
                break 'outer;
            }
        }
    }
    out.push(
        CheckEntry::new(
            "octonion_anticommutativity",
            "ei*ej = -ej*ei for distinct imaginary units",
            42,
        )
        .with_outcome(bad),
    );

    let anchor = table.product(5, 2);
    let bad = (anchor
        != SignedBasis {
            negative: false,
            index: 3,
        })
    .then(|| json!({"e5*e2": text(anchor)}));
    out.push(CheckEntry::new("octonion_anchor", "e5*e2 = e3", 1).with_outcome(bad));

    let r = rotation_matrix();
    let bad = (!is_algebra_automorphism(&r) || !preserves_inner_product(&r))
        .then(|| json!({"map": "ei -> e(2i mod 7)"}));
    out.push(
        CheckEntry::new(
            "octonion_rotation_automorphism",
            "ei -> e(2i mod 7) preserves the product and the inner product",
            64,
        )
        .with_outcome(bad),
    );

    let mut s = cfg.sampler(1);
    let bad = first_failure(cfg.samples, |_| {
        let x = random_octonion(&mut s);
        let y = random_octonion(&mut s);
        let xx = &x * &x;
        let left = &x * &(&x * &y) == &xx * &y;
        let right = &(&y * &x) * &x == &y * &xx;
        (!(left && right)).then(|| json!({"x": coeffs(x.coeffs()), "y": coeffs(y.coeffs())}))
    });
    out.push(
        CheckEntry::new(
            "octonion_alternativity",
            "x(xy) = (xx)y and (yx)x = y(xx)",
            cfg.samples,
        )
        .with_outcome(bad),
    );

    let mut s = cfg.sampler(2);
    let bad = first_failure(cfg.samples, |_| {
        let x = random_octonion(&mut s);
        let y = random_octonion(&mut s);
        let lhs = (&x * &y).norm_squared();
        let rhs = &x.norm_squared() * &y.norm_squared();
        (lhs != rhs).then(|| json!({"x": coeffs(x.coeffs()), "y": coeffs(y.coeffs()), "lhs": text(lhs), "rhs": text(rhs)}))
    });
    out.push(
        CheckEntry::new(
            "octonion_norm_composition",
            "|xy|^2 = |x|^2 |y|^2",
            cfg.samples,
        )
        .with_outcome(bad),
    );
}

fn so8_suite(cfg: &VerifyConfig, out: &mut Vec<CheckEntry>) {
    let quads = quadruples();
    let first = quads[0].slots.map(|s| s.to_string());
    let bad = if !quadruples_partition_generators(quads) {
        Some(json!({"reason": "quadruples do not partition the generators"}))
    } else if first != ["+G_0,1", "+G_2,4", "+G_3,7", "+G_5,6"] {
        Some(json!({"first_quadruple": first}))
    } else {
        None
    };
    out.push(
        CheckEntry::new(
            "so8_quadruple_partition",
            "the seven quadruples partition the 28 generators",
            DIM,
        )
        .with_outcome(bad),
    );

    let g = |i, j| So8Element::generator(Generator::new(i, j).expect("valid pair"));
    let mut bad = None;
    for n in 0..DIM {
        let x = So8Element::basis(n);
        let round = So8Element::from_matrix(x.matrix().clone());
        if round.as_ref() != Ok(&x) {
            bad = Some(json!({"generator": Generator::from_index(n).to_string()}));
            break;
        }
    }
    let commutator = bracket(&g(0, 1), &g(1, 2));
    if bad.is_none() && commutator != g(0, 2) {
        bad = Some(json!({"[G_0,1, G_1,2]": coeffs(commutator.coeffs())}));
    }
    out.push(
        CheckEntry::new(
            "so8_generators",
            "generators round-trip through matrices and [G_0,1, G_1,2] = G_0,2",
            DIM,
        )
        .with_outcome(bad),
    );

    let mut s = cfg.sampler(3);
    let bad = first_failure(cfg.samples, |_| {
        let (x, y, z) = (s.next_element(), s.next_element(), s.next_element());
        let sum = bracket(&x, &bracket(&y, &z))
            .add(&bracket(&y, &bracket(&z, &x)))
            .add(&bracket(&z, &bracket(&x, &y)));
        (!sum.is_zero()).then(
            || json!({"x": coeffs(x.coeffs()), "y": coeffs(y.coeffs()), "z": coeffs(z.coeffs())}),
        )
    });
    out.push(
        CheckEntry::new(
            "so8_jacobi",
            "[x,[y,z]] + [y,[z,x]] + [z,[x,y]] = 0",
            cfg.samples,
        )
        .with_outcome(bad),
    );

    let mut s = cfg.sampler(4);
    let bad = first_failure(cfg.samples, |_| {
        let x = s.next_element();
        let doc = serde_json::to_string(&x.document()).expect("document serializes");
        (So8Element::from_json(&doc).as_ref() != Ok(&x)).then(|| json!({"document": doc}))
    });
    out.push(
        CheckEntry::new(
            "so8_encoding_round_trip",
            "coefficient and matrix encodings agree and round-trip",
            cfg.samples,
        )
        .with_outcome(bad),
    );
}

fn structure_failure(
    s: Result<FixedSubalgebra>,
    dim: usize,
    rank: usize,
) -> (Option<FixedSubalgebra>, Option<Value>) {
    match s {
        Err(e) => (None, Some(json!({"error": e.to_string()}))),
        Ok(s) => {
            let r = identify_fixed_algebra(&s);
            let ok = r.dim == dim && r.killing_nondegenerate && r.rank == rank;
            let bad = (!ok).then(|| serde_json::to_value(&r).expect("report serializes"));
            (Some(s), bad)
        }
    }
}

fn g2_of(map: &TrialityMap) -> Result<FixedSubalgebra> {
    FixedSubalgebra::fixed_locus(map.full(), SubalgebraTag::G2)
}

fn triality_suite(cfg: &VerifyConfig, out: &mut Vec<CheckEntry>) {
    let block = cfg.map.block();
    let bad = if block * block != block.transpose() {
        Some(json!({"identity": "M^2 = M^T", "block": block}))
    } else if block.pow(3) != SquareMatrix::identity(4) {
        Some(json!({"identity": "M^3 = I", "block": block}))
    } else {
        None
    };
    out.push(
        CheckEntry::new(
            "triality_block_identities",
            "the 4x4 block M satisfies M^2 = M^T and M^3 = I",
            2,
        )
        .with_outcome(bad),
    );

    let bad = (0..DIM).find_map(|n| {
        let x = So8Element::basis(n);
        let y = cfg.map.apply(&cfg.map.apply(&cfg.map.apply(&x)));
        (y != x).then(|| json!({"generator": Generator::from_index(n).to_string(), "image": coeffs(y.coeffs())}))
    });
    out.push(
        CheckEntry::new(
            "triality_order_three",
            "sigma^3 fixes every basis generator",
            DIM,
        )
        .with_outcome(bad),
    );

    let entry = CheckEntry::new(
        "triality_bracket_preservation",
        "sigma[x,y] = [sigma x, sigma y] on all basis pairs and on random pairs",
        DIM * DIM + cfg.samples,
    );
    let entry = match verify_bracket_preservation(&cfg.map, cfg.samples, cfg.seed, cfg.bound) {
        Ok(r) => {
            let bad = r.violations.first().map(|v| {
                let mut c = serde_json::to_value(v).expect("violation serializes");
                c["violations"] = json!(r.violations.len());
                c
            });
            entry.with_outcome(bad)
        }
        Err(e) => entry.with_outcome(Some(json!({"error": e.to_string()}))),
    };
    out.push(entry);

    let (g2, bad) = structure_failure(g2_of(&cfg.map), 14, 2);
    out.push(
        CheckEntry::new(
            "g2_fixed_subalgebra",
            "fixed points of sigma: dim 14, closed, nondegenerate Killing form, rank 2",
            1,
        )
        .with_outcome(bad),
    );

    let (_, bad) = structure_failure(so7_fixed_subalgebra(), 21, 3);
    out.push(
        CheckEntry::new(
            "so7_fixed_subalgebra",
            "fixed points of the outer involution: dim 21, nondegenerate Killing form, rank 3",
            1,
        )
        .with_outcome(bad),
    );

    let square = cfg.map.full().pow(2);
    let bad = match (
        g2,
        FixedSubalgebra::fixed_locus(&square, SubalgebraTag::Span),
    ) {
        (Some(a), Ok(b)) if a.basis() == b.basis() => None,
        (Some(_), Ok(b)) => Some(json!({"sigma_squared_fixed_dim": b.dim()})),
        (None, _) => Some(json!({"error": "fixed subalgebra of sigma unavailable"})),
        (_, Err(e)) => Some(json!({"error": e.to_string()})),
    };
    out.push(
        CheckEntry::new(
            "sigma_squared_fixed_locus",
            "sigma^2 has the same fixed points as sigma",
            1,
        )
        .with_outcome(bad),
    );
}

/// Status of a published-versus-derived comparison: fails if the derived
/// expression is wrong anywhere, or if no witness against the published one
/// turned up.
fn discrepancy(
    mut entry: CheckEntry,
    printed_expression: &str,
    derived_expression: &str,
    derived_failure: Option<Value>,
    witness: Option<Value>,
) -> CheckEntry {
    entry.printed_expression = Some(printed_expression.into());
    entry.derived_expression = Some(derived_expression.into());
    if derived_failure.is_some() {
        return entry.with_outcome(derived_failure);
    }
    match witness {
        Some(w) => {
            entry.status = Status::DiscrepancyConfirmed;
            entry.witness = Some(w);
            entry
        }
        None => entry.with_outcome(Some(
            json!({"reason": "the printed expression agreed on every sample"}),
        )),
    }
}

fn int_lambda(l: [i64; 4]) -> [Rational; 4] {
    l.map(Rational::from)
}

fn invariants_suite(cfg: &VerifyConfig, out: &mut Vec<CheckEntry>) {
    let mut s = cfg.sampler(5);
    let bad = first_failure(cfg.samples, |_| {
        let m = s.next_element();
        let v = invariant_vector(&m);
        let actual = invariant_vector(&cfg.map.apply(&m));
        let expected = sigma_transform_invariants(&v);
        (actual != expected).then(|| {
            json!({
                "element": coeffs(m.coeffs()),
                "expected": invariants_json(&expected),
                "actual": invariants_json(&actual),
            })
        })
    });
    out.push(
        CheckEntry::new(
            "invariant_transform_law",
            "(Tr M^2, Tr M^4, Tr M^6, Pf M) of sigma(M) match the closed-form transformation",
            cfg.samples,
        )
        .with_outcome(bad),
    );

    let bad = (t_matrix(3) != SquareMatrix::identity(4)).then(|| json!({"T^3": t_matrix(3)}));
    out.push(
        CheckEntry::new(
            "t_matrix_order_three",
            "T^3 = I on the degree-6 invariants",
            1,
        )
        .with_outcome(bad),
    );

    let r = |n, d| q(n, d);
    let displayed = SquareMatrix::from_rows(vec![
        vec![r(1, 1), r(0, 1), r(0, 1), r(0, 1)],
        vec![r(3, 8), r(-1, 2), r(12, 1), r(0, 1)],
        vec![r(1, 64), r(-1, 16), r(-1, 2), r(0, 1)],
        vec![r(15, 64), r(-15, 16), r(15, 2), r(1, 1)],
    ])
    .expect("4x4");
    let t2 = t_matrix(2);
    let bad = (t2 != displayed).then(|| json!({"expected": displayed, "actual": t2}));
    out.push(
        CheckEntry::new(
            "t_matrix_square",
            "T^2 matches the tabulated matrix entrywise",
            16,
        )
        .with_outcome(bad),
    );

    let bad = match fixed_degree6_space() {
        Ok(_) => None,
        Err(e) => Some(json!({"error": e.to_string()})),
    };
    let mut entry = CheckEntry::new(
        "degree6_invariant_space",
        "ker(T^t - I) is 2-dimensional and contains (1,0,0,0) and (0,5,0,-8)",
        1,
    )
    .with_outcome(bad);
    entry.derived_expression = Some(format!(
        "span{{{:?}, {:?}}}",
        cubic_trace_functional()
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>(),
        mixed_trace_functional()
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
    ));
    out.push(entry);

    let heavy = cfg.heavy_samples();
    let mut s = cfg.sampler(6);
    let bad = first_failure(heavy, |_| {
        let m = s.next_element();
        let a = pfaffian_matchings(&m);
        let b = pfaffian_fixed_zero_sum(&m);
        let c = pfaffian_permutation_sum(&m);
        let det = m.matrix().determinant();
        (a != b || a != c || a.pow(2) != det).then(|| {
            json!({
                "element": coeffs(m.coeffs()),
                "matchings": text(&a),
                "s7_sum": text(&b),
                "s8_sum": text(&c),
                "det": text(&det),
            })
        })
    });
    out.push(
        CheckEntry::new(
            "pfaffian_algorithms",
            "matching, S7 and S8 Pfaffian sums agree and Pf^2 = det",
            heavy,
        )
        .with_outcome(bad),
    );

    let mut s = cfg.sampler(7);
    let bad = first_failure(BLOCK_MODEL_TUPLES, |_| {
        let l: [Rational; 4] = std::array::from_fn(|_| s.next_nonzero_rational());
        let expected: Rational = l.iter().cloned().product();
        let actual = pfaffian_matchings(&block_model(&l));
        (actual != expected).then(
            || json!({"lambda": coeffs(&l), "expected": text(&expected), "actual": text(&actual)}),
        )
    });
    out.push(
        CheckEntry::new(
            "pfaffian_block_model",
            "Pf of the block model equals l1*l2*l3*l4",
            BLOCK_MODEL_TUPLES,
        )
        .with_outcome(bad),
    );

    let mut s = cfg.sampler(8);
    let elements: Vec<So8Element> = (0..cfg.samples).map(|_| s.next_element()).collect();
    let data: Vec<_> = elements
        .iter()
        .map(|m| (invariant_vector(m), spectral_coefficients(m)))
        .collect();
    let bad = first_failure(cfg.samples, |k| {
        let (v, e) = &data[k];
        let n = newton_coefficients(v);
        (&n != e).then(|| {
            json!({
                "element": coeffs(elements[k].coeffs()),
                "newton": serde_json::to_value(&n).expect("serializes"),
                "char_poly": serde_json::to_value(e).expect("serializes"),
            })
        })
    });
    out.push(
        CheckEntry::new(
            "newton_identities",
            "characteristic polynomial coefficients equal the Newton-identity expressions in the trace invariants",
            cfg.samples,
        )
        .with_outcome(bad),
    );

    // Published char-poly coefficients against the derived ones. The block
    // model with λ = (1,2,3,4) goes first as a witness candidate.
    let witness_source = block_model(&int_lambda([1, 2, 3, 4]));
    let candidates: Vec<(Value, InvariantVector, Rational, Rational)> =
        std::iter::once(&witness_source)
            .chain(elements.iter())
            .map(|m| {
                let v = invariant_vector(m);
                let e = spectral_coefficients(m);
                (coeffs(m.coeffs()), v, e.e2, e.e3)
            })
            .collect();

    for (id, statement, printed_f, derived_f, printed_s, derived_s, pick) in [
        (
            "printed_eta4_coefficient",
            "eta^4 coefficient of det(M - eta I) in terms of p1 = Tr M^2, p2 = Tr M^4",
            printed::eta4_coefficient as fn(&InvariantVector) -> Rational,
            derived::eta4_coefficient as fn(&InvariantVector) -> Rational,
            "1/4 p1^2 + 1/8 p2",
            "1/8 p1^2 - 1/4 p2",
            2usize,
        ),
        (
            "printed_eta2_coefficient",
            "eta^2 coefficient of det(M - eta I) in terms of p1, p2, p3 = Tr M^6",
            printed::eta2_coefficient,
            derived::eta2_coefficient,
            "1/48 p1^3 - 6 p1 p2 + 8 p3",
            "-1/48 p1^3 + 1/8 p1 p2 - 1/6 p3",
            3usize,
        ),
    ] {
        let actual = |c: &(Value, InvariantVector, Rational, Rational)| {
            if pick == 2 {
                c.2.clone()
            } else {
                c.3.clone()
            }
        };
        let derived_failure = candidates.iter().find_map(|c| {
            let d = derived_f(&c.1);
            (d != actual(c))
                .then(|| json!({"element": c.0, "derived": text(&d), "actual": text(actual(c))}))
        });
        let witness = candidates.iter().find_map(|c| {
            let p = printed_f(&c.1);
            (p != actual(c)).then(|| {
                json!({
                    "element": c.0,
                    "invariants": invariants_json(&c.1),
                    "printed": text(&p),
                    "derived": text(derived_f(&c.1)),
                    "actual": text(actual(c)),
                })
            })
        });
        out.push(discrepancy(
            CheckEntry::new(id, statement, candidates.len()),
            printed_s,
            derived_s,
            derived_failure,
            witness,
        ));
    }

    g2_checks(cfg, out);

    let entry = CheckEntry::new(
        "so7_eigenstructure",
        "pf = 0 and e4 = 0 on the so(7) locus",
        heavy,
    );
    let entry = match so7_fixed_subalgebra() {
        Err(e) => entry.with_outcome(Some(json!({"error": e.to_string()}))),
        Ok(so7) => {
            let mut s = cfg.sampler(10);
            let bad = first_failure(heavy, |_| {
                let m = s.next_combination(so7.basis());
                let r = eigenstructure_check(&m, Locus::So7);
                (r.status != EigenstructureStatus::Pass).then(|| {
                    json!({"element": coeffs(m.coeffs()), "checks": serde_json::to_value(&r.checks).expect("serializes")})
                })
            });
            entry.with_outcome(bad)
        }
    };
    out.push(entry);
}

fn g2_checks(cfg: &VerifyConfig, out: &mut Vec<CheckEntry>) {
    let heavy = cfg.heavy_samples();
    let quarter = Rational::new(1, 4);

    let entry = CheckEntry::new(
        "g2_restriction",
        "on the g2 locus: pf = 0, p2 = p1^2/4, e2 = e1^2/4, c1 = p1/2 = -e1, c3 = -e3",
        heavy,
    );
    let entry = match g2_of(&cfg.map) {
        Err(e) => entry.with_outcome(Some(json!({"error": e.to_string()}))),
        Ok(g2) => {
            let mut s = cfg.sampler(9);
            let bad = first_failure(heavy, |_| {
                let m = s.next_combination(g2.basis());
                let v = invariant_vector(&m);
                let e = spectral_coefficients(&m);
                let c1 = c1_from_invariants(&v);
                let failed: Vec<&str> = [
                    ("fixed by sigma", cfg.map.apply(&m) == m),
                    ("pf = 0", v.pf.is_zero()),
                    ("p2 = p1^2/4", v.p2 == &quarter * &v.p1.pow(2)),
                    ("e2 = e1^2/4", e.e2 == &quarter * &e.e1.pow(2)),
                    ("c1 = p1/2 = -e1", c1 == -&e.e1),
                    ("c3 = -e3", c3_from_invariants(&v) == -&e.e3),
                    (
                        "eigenstructure",
                        eigenstructure_check(&m, Locus::G2).status == EigenstructureStatus::Pass,
                    ),
                ]
                .into_iter()
                .filter(|(_, ok)| !ok)
                .map(|(name, _)| name)
                .collect();
                (!failed.is_empty())
                    .then(|| json!({"element": coeffs(m.coeffs()), "failed": failed}))
            });
            entry.with_outcome(bad)
        }
    };
    out.push(entry);

    let mut s = cfg.sampler(11);
    let mut points = vec![EtaModel::new(q(1, 1), q(1, 1))];
    points.extend(
        (1..ETA_POINTS)
            .map(|_| EtaModel::new(s.next_nonzero_rational(), s.next_nonzero_rational())),
    );
    let bad = points
        .iter()
        .find_map(|pt| {
            let v = pt.invariants();
            let (got, want) = (c3_from_invariants(&v), pt.c3());
            (got != want)
                .then(|| json!({"eta": coeffs(&pt.eta), "c3": text(got), "model": text(want)}))
        })
        .or_else(|| {
            let c = c3_from_invariants(&points[0].invariants());
            (c != q(4, 1)).then(|| json!({"eta": ["1", "1", "-2"], "c3": text(c)}))
        });
    let solution = solve_c3_coefficients(&points);
    let newton = C3_COEFFICIENTS.map(|(n, d)| q(n, d));
    let bad = bad.or_else(|| match &solution {
        None => Some(json!({"reason": "no (a, b, c) fits the model points"})),
        Some(sol) if sol.directions.len() != 1 => {
            Some(json!({"solution_family_dim": sol.directions.len()}))
        }
        Some(sol) if !in_affine_solution(sol, &newton) => {
            Some(json!({"reason": "Newton representative outside the solution family"}))
        }
        Some(_) => None,
    });
    let mut entry = CheckEntry::new(
        "g2_c3_representative",
        "c3 = a p1^3 + b p1 p2 + c p3 reproduces (eta1 eta2 eta3)^2 on the eta model; solutions form a line",
        points.len(),
    )
    .with_outcome(bad);
    entry.derived_expression = Some("1/48 p1^3 - 1/8 p1 p2 + 1/6 p3".into());
    out.push(entry);

    let printed_c = printed::C3_COEFFICIENTS.map(|(n, d)| q(n, d));
    let derived_failure = match &solution {
        Some(sol) if in_affine_solution(sol, &newton) => None,
        _ => Some(json!({"reason": "derived representative does not fit the eta model"})),
    };
    let witness = points.iter().find_map(|pt| {
        let v = pt.invariants();
        let p = printed::c3(&v);
        (p != pt.c3()).then(|| {
            json!({
                "eta": coeffs(&pt.eta),
                "invariants": invariants_json(&v),
                "printed": text(&p),
                "derived": text(c3_from_invariants(&v)),
                "actual": text(pt.c3()),
                "printed_in_solution_family": solution.as_ref().is_some_and(|s| in_affine_solution(s, &printed_c)),
            })
        })
    });
    out.push(discrepancy(
        CheckEntry::new(
            "printed_g2_c3",
            "degree-6 g2 invariant c3 in terms of p1, p2, p3",
            points.len(),
        ),
        "1/16 p1^3 - 5 p1 p2 + 8 p3",
        "1/48 p1^3 - 1/8 p1 p2 + 1/6 p3",
        derived_failure,
        witness,
    ));

    let derived_failure = points.iter().find_map(|pt| {
        let v = pt.invariants();
        (v.p2 != derived::g2_quartic(&v))
            .then(|| json!({"eta": coeffs(&pt.eta), "p2": text(&v.p2)}))
    });
    let witness = points.iter().find_map(|pt| {
        let v = pt.invariants();
        let p = printed::g2_quartic(&v);
        (p != v.p2).then(|| {
            json!({
                "eta": coeffs(&pt.eta),
                "p1": text(&v.p1),
                "printed": text(&p),
                "derived": text(derived::g2_quartic(&v)),
                "actual": text(&v.p2),
            })
        })
    });
    out.push(discrepancy(
        CheckEntry::new(
            "printed_g2_quartic",
            "Tr M^4 as a multiple of (Tr M^2)^2 on the g2 locus",
            points.len(),
        ),
        "p2 = 1/2 p1^2",
        "p2 = 1/4 p1^2",
        derived_failure,
        witness,
    ));
}
