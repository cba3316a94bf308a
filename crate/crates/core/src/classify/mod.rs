//! The classification pipeline: arithmeticity ladder, descent of the ambient form to a
//! subfield, search for an admissible model and the subordinated forms.

mod report;

use std::collections::BTreeSet;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::arith::primes_of_rational;
use crate::coxeter::{ambient_form_with, gram_matrix, low_height_chain, trace_field, CoxeterDiagram, GramData};
use crate::error::{Error, Result};
use crate::localarith::is_hyperbolic;
use crate::mqfield::{FieldElement, FieldTower};
use crate::par::{self, Execution};
use crate::qspace::{globally_isometric, is_admissible, transfer, transfer_generator, Matrix, QuadraticForm};

pub use report::{
    ClassificationReport, DiagonalJson, FieldJson, ModelJson, SubordinatedJson, TransferJson, Verdict,
    TSV_HEADER,
};

/// Default bound `A` on the model parameter.
pub const DEFAULT_BOUND: u64 = 30;

/// Knobs for [`classify_with`].
#[derive(Clone, Debug)]
pub struct ClassifyOptions {
    /// Integers `1..=bound` are scanned after the determinant-guided candidates.
    pub bound: u64,
    pub exec: Execution,
    /// Base vertex for the path products.
    pub base: usize,
    /// Vertex order for the greedy choice of the full-rank minor; `None` picks a low-height chain.
    pub order: Option<Vec<usize>>,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        Self {
            bound: DEFAULT_BOUND,
            exec: Execution::default(),
            base: 0,
            order: None,
        }
    }
}

/// Outcome of the arithmeticity ladder.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ladder {
    pub quasi_arithmetic: bool,
    pub arithmetic: bool,
    pub witnesses: Vec<String>,
}

/// Vinberg's criterion: quasi-arithmetic iff `f` is admissible over the trace field;
/// arithmetic iff moreover the cyclic products of `2G` are algebraic integers.
pub fn arithmeticity_ladder(g: &GramData, trace: &FieldTower, f: &QuadraticForm) -> Ladder {
    let mut witnesses = Vec::new();
    for sigma in trace.embeddings() {
        if sigma.is_identity() {
            continue;
        }
        let (p, q) = f.signature(&sigma);
        if p != 0 && q != 0 {
            witnesses.push(format!("signature ({p},{q}) at embedding {:?}", sigma.signs));
        }
    }
    let quasi = witnesses.is_empty() && is_admissible(f, g.n).unwrap_or(false);
    let two = FieldElement::from_int(&g.tower, 2);
    let mut integral = true;
    for i in 0..g.size() {
        for j in i + 1..g.size() {
            let a = g.entry(i, j);
            if a.is_zero() {
                continue;
            }
            let b = (&two * a).square();
            if !b.is_algebraic_integer() {
                integral = false;
                witnesses.push(format!("4a²({},{}) = {b} is not integral", i + 1, j + 1));
            }
        }
    }
    for cycle in g.simple_cycles() {
        let b = &two.pow(cycle.len() as u32) * &g.cyclic_product(&cycle);
        if !b.is_algebraic_integer() {
            integral = false;
            let path: Vec<String> = cycle.iter().map(|v| (v + 1).to_string()).collect();
            witnesses.push(format!("cycle {} gives {b}, not integral", path.join("-")));
        }
    }
    Ladder {
        quasi_arithmetic: quasi,
        arithmetic: quasi && integral,
        witnesses,
    }
}

/// One row of the transfer table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransferRow {
    pub subfield: FieldTower,
    /// `K = F(√generator)`.
    pub generator: u64,
    pub hyperbolic: bool,
}

/// Candidate field of definition and the transfer table it came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Descent {
    pub k: FieldTower,
    pub transfers: Vec<TransferRow>,
    pub diagnostic: Option<String>,
}

/// `k` is the meet of the index-2 subfields `F` with `s_F(f)` hyperbolic, accepted only if
/// every index-2 subfield containing `k` has hyperbolic transfer; otherwise `k = K`.
pub fn descend_field(f: &QuadraticForm, exec: Execution) -> Result<Descent> {
    let big = f.tower();
    let subfields = big.subfields_index2();
    let rows: Vec<Result<TransferRow>> = par::map(exec, &subfields, |sub| {
        let t = transfer(f, sub)?;
        Ok(TransferRow {
            subfield: sub.clone(),
            generator: transfer_generator(big, sub)?,
            hyperbolic: is_hyperbolic(&t),
        })
    });
    let transfers = rows.into_iter().collect::<Result<Vec<_>>>()?;
    let k = transfers
        .iter()
        .filter(|r| r.hyperbolic)
        .fold(big.clone(), |acc, r| acc.intersect(&r.subfield));
    let failing: Vec<String> = transfers
        .iter()
        .filter(|r| !r.hyperbolic && r.subfield.contains_tower(&k))
        .map(|r| r.subfield.to_string())
        .collect();
    if failing.is_empty() {
        return Ok(Descent {
            k,
            transfers,
            diagnostic: None,
        });
    }
    Ok(Descent {
        k: big.clone(),
        diagnostic: Some(format!(
            "meet {k} rejected: transfer to {} not hyperbolic",
            failing.join(", ")
        )),
        transfers,
    })
}

/// An admissible `g_a = ⟨−1, 1, …, 1, a⟩` over `k` with `(g_a)_K ≅ λ f`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Model {
    pub a: u64,
    /// The similitude factor `λ`.
    pub scale: FieldElement,
    pub g: QuadraticForm,
}

/// Squarefree positive `a` with `−a / det(f)` a square in `K`, by increasing size.
///
/// Such `a` are built from primes of `N(det f)`, primes ramified in `K` and 2; the list is
/// empty when that prime set is too large to enumerate.
pub fn determinant_candidates(f: &QuadraticForm) -> Vec<u64> {
    let tower = f.tower();
    let det = f.determinant();
    let mut primes: BTreeSet<u64> = BTreeSet::from([2]);
    match primes_of_rational(&det.norm()) {
        Some(ps) => primes.extend(ps),
        None => return Vec::new(),
    }
    for &d in tower.radicands() {
        primes.extend(primes_of_rational(&BigRational::from_integer(BigInt::from(d))).unwrap_or_default());
    }
    let primes: Vec<u64> = primes.into_iter().collect();
    if primes.len() > 16 {
        return Vec::new();
    }
    let mut out = Vec::new();
    for mask in 0u32..(1 << primes.len()) {
        let a = primes
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .try_fold(1u64, |acc, (_, &p)| acc.checked_mul(p));
        let Some(a) = a else { continue };
        let ratio = FieldElement::from_int(tower, -(a as i64))
            .checked_div(&det)
            .expect("regular form");
        if ratio.is_square() {
            out.push(a);
        }
    }
    out.sort_unstable();
    out
}

/// Brute-force search for an admissible `g_a` over `k` with `(g_a)_K ≅ f`.
pub fn find_admissible_model(
    f: &QuadraticForm,
    k: &FieldTower,
    n: usize,
    bound: u64,
) -> Result<Option<Model>> {
    let one = FieldElement::one(f.tower());
    find_admissible_model_scaled(f, k, n, bound, &[one])
}

/// As [`find_admissible_model`], matching `g_a` against `λ f` for each `λ` in `scales`.
///
/// Candidates are the determinant-guided values followed by `1..=bound`; the first
/// `(a, λ)` in that order wins.
pub fn find_admissible_model_scaled(
    f: &QuadraticForm,
    k: &FieldTower,
    n: usize,
    bound: u64,
    scales: &[FieldElement],
) -> Result<Option<Model>> {
    let big = f.tower();
    if !big.contains_tower(k) {
        return Err(Error::NotInField {
            found: k.to_string(),
            target: big.to_string(),
        });
    }
    let scaled: Vec<QuadraticForm> = scales
        .iter()
        .map(|l| f.scaled(l))
        .collect::<Result<_>>()?;
    let mut candidates: Vec<u64> = Vec::new();
    for g in &scaled {
        candidates.extend(determinant_candidates(g));
    }
    candidates.sort_unstable();
    candidates.dedup();
    candidates.extend(1..=bound);
    let mut tried = BTreeSet::new();
    for a in candidates {
        if !tried.insert(a) {
            continue;
        }
        let a_el = FieldElement::from_int(k, a as i64);
        let g = QuadraticForm::standard_with_last(k, n, &a_el)?;
        if !is_admissible(&g, n)? {
            continue;
        }
        let g_big = g.extend_to(big)?;
        for (lambda, target) in scales.iter().zip(&scaled) {
            // a quick determinant filter before the local invariants
            let ratio = g_big
                .determinant()
                .checked_div(&target.determinant())
                .expect("regular forms");
            if ratio.is_square() && globally_isometric(target, &g_big) {
                return Ok(Some(Model {
                    a,
                    scale: lambda.clone(),
                    g,
                }));
            }
        }
    }
    Ok(None)
}

/// Representatives of the subgroup of `K^×/K^×²` generated by the squared Gram entries.
///
/// Changing base vertex or minor rescales the ambient form by an element of this group,
/// so scanning it makes the verdict independent of those choices.
pub fn similarity_scales(g: &GramData, trace: &FieldTower) -> Vec<FieldElement> {
    let mut group = vec![FieldElement::one(trace)];
    for i in 0..g.size() {
        for j in i + 1..g.size() {
            let a = g.entry(i, j);
            if a.is_zero() {
                continue;
            }
            let s = a.square().coerce(trace).expect("squared entries lie in the trace field");
            let known = group
                .iter()
                .any(|l| s.checked_div(l).expect("nonzero").is_square());
            if !known {
                let more: Vec<FieldElement> = group.iter().map(|l| l * &s).collect();
                group.extend(more);
            }
        }
    }
    group
}

/// The `2^r` forms `⟨−1, 1, …, 1, a α_i²⟩` for the standard basis `α_i` of `K/k`.
pub fn subordinated_forms(g: &QuadraticForm, big: &FieldTower, n: usize) -> Result<Vec<QuadraticForm>> {
    if !is_admissible(g, n)? {
        return Err(Error::NotAdmissible);
    }
    let k = g.tower();
    let basis = relative_basis(big, k);
    let last = g.diagonal().last().expect("rank n + 1").clone();
    let mut out = Vec::with_capacity(1 << basis.len());
    for mask in 0usize..(1 << basis.len()) {
        let alpha_sq: i64 = basis
            .iter()
            .enumerate()
            .filter(|(j, _)| mask >> j & 1 == 1)
            .map(|(_, &d)| d as i64)
            .product();
        let mut diag = g.diagonal().to_vec();
        *diag.last_mut().expect("rank n + 1") = &last * &FieldElement::from_int(k, alpha_sq);
        let fi = QuadraticForm::new(k, diag)?;
        debug_assert!(is_admissible(&fi, n).unwrap_or(false));
        out.push(fi);
    }
    Ok(out)
}

/// Radicands `a_1, …, a_r` of `big` with `big = k(√a_1, …, √a_r)`, chosen greedily.
pub fn relative_basis(big: &FieldTower, k: &FieldTower) -> Vec<u64> {
    let mut current = k.clone();
    let mut basis = Vec::new();
    for &d in big.radicands() {
        if current.locate_sqrt(d).is_none() {
            basis.push(d);
            current = current.join(&FieldTower::from_group_generators([d]));
        }
    }
    basis
}

/// Exact data for the matrix `B = (σ_j(α_i)/α_i)` of a multiquadratic extension.
#[derive(Clone, Debug)]
pub struct BasisDet {
    /// `det B`, a rational number.
    pub det_b: FieldElement,
    /// `det(σ_j(α_i))`.
    pub det_embedding: FieldElement,
    /// `∏ α_i`.
    pub alpha_product: FieldElement,
    /// `det(σ_j(α_i))²`, the discriminant of the trace form.
    pub trace_discriminant: FieldElement,
    pub nonzero: bool,
    /// `det B = det(σ_j(α_i)) · ∏ α_i^{-1}`.
    pub identity_holds: bool,
}

/// Builds `B` over `Gal(K/k)` and checks `det B ≠ 0` and the product identity exactly.
pub fn basis_det_check(big: &FieldTower, k: &FieldTower) -> BasisDet {
    let basis = relative_basis(big, k);
    let r = basis.len();
    let alphas: Vec<FieldElement> = (0usize..(1 << r))
        .map(|mask| {
            basis
                .iter()
                .enumerate()
                .filter(|(j, _)| mask >> j & 1 == 1)
                .fold(FieldElement::one(big), |acc, (_, &d)| {
                    &acc * &FieldElement::sqrt_of(big, d).expect("basis radicand lies in K")
                })
        })
        .collect();
    // Gal(K/k): embeddings fixing every radicand of k
    let galois: Vec<_> = big
        .embeddings()
        .into_iter()
        .filter(|s| {
            k.radicands().iter().all(|&d| {
                let mask = big.locate_sqrt(d).expect("k ⊆ K");
                s.sign_of_mask(mask) > 0
            })
        })
        .collect();
    assert_eq!(galois.len(), alphas.len(), "|Gal(K/k)| = [K:k]");
    let conj: Vec<Vec<FieldElement>> = alphas
        .iter()
        .map(|a| galois.iter().map(|s| a.conjugate(s)).collect())
        .collect();
    let b_rows: Vec<Vec<FieldElement>> = conj
        .iter()
        .zip(&alphas)
        .map(|(row, a)| row.iter().map(|x| x.checked_div(a).expect("α_i ≠ 0")).collect())
        .collect();
    let det_b = Matrix::new(big, b_rows).expect("square").determinant();
    let det_embedding = Matrix::new(big, conj).expect("square").determinant();
    let alpha_product = alphas.iter().fold(FieldElement::one(big), |acc, a| &acc * a);
    let rhs = det_embedding
        .checked_div(&alpha_product)
        .expect("α_i ≠ 0");
    BasisDet {
        nonzero: !det_b.is_zero(),
        identity_holds: det_b == rhs,
        trace_discriminant: det_embedding.square(),
        det_b,
        det_embedding,
        alpha_product,
    }
}

/// Full pipeline with default options.
pub fn classify(d: &CoxeterDiagram) -> Result<ClassificationReport> {
    classify_with(d, &ClassifyOptions::default())
}

pub fn classify_with(d: &CoxeterDiagram, opts: &ClassifyOptions) -> Result<ClassificationReport> {
    let start = Instant::now();
    let gram = gram_matrix(d)?;
    let big = trace_field(&gram);
    let order: Vec<usize> = opts
        .order
        .clone()
        .or_else(|| low_height_chain(&gram))
        .unwrap_or_else(|| (0..d.vertices).collect());
    let ambient = ambient_form_with(&gram, &big, opts.base, &order)?;
    let f = ambient.form;
    let ladder = arithmeticity_ladder(&gram, &big, &f);
    let mut witnesses = ladder.witnesses.clone();

    // descent and model search, trying similitude factors until a rational model appears
    let mut best: Option<Descent> = None;
    let mut model: Option<Model> = None;
    for lambda in similarity_scales(&gram, &big) {
        let scaled = f.scaled(&lambda)?;
        let descent = descend_field(&scaled, opts.exec)?;
        if let Some(diag) = &descent.diagnostic {
            witnesses.push(format!("λ = {lambda}: {diag}"));
        }
        let found = if descent.k.is_rational() {
            find_admissible_model_scaled(&f, &FieldTower::rational(), d.n, opts.bound, &[lambda])?
        } else {
            None
        };
        if found.is_some() || best.as_ref().map_or(true, |b| descent.k.degree() < b.k.degree()) {
            best = Some(descent);
        }
        if found.is_some() {
            model = found;
            break;
        }
    }
    let descent = best.expect("the trivial scale is always tried");
    let k = descent.k.clone();
    if !k.is_rational() && k != big {
        witnesses.push(format!(
            "descent field {k} is not Q; models ⟨−1,1,…,1,a⟩ are never admissible over it"
        ));
    }

    let verdict = if ladder.arithmetic {
        Verdict::Arithmetic
    } else if ladder.quasi_arithmetic {
        Verdict::QuasiArithmetic
    } else if model.is_some() {
        Verdict::PseudoArithmeticFirstType
    } else {
        Verdict::Undetermined
    };
    let subordinated = match &model {
        Some(m) => subordinated_forms(&m.g, &big, d.n)?,
        None => Vec::new(),
    };
    Ok(report::build(
        d,
        &big,
        &f,
        opts.base,
        verdict,
        &ladder,
        &descent,
        model.as_ref(),
        &subordinated,
        witnesses,
        start.elapsed().as_millis() as u64,
    ))
}

/// Classifies many diagram texts, one task per diagram, in input order.
pub fn classify_batch(
    inputs: &[(String, String)],
    opts: &ClassifyOptions,
) -> Vec<Result<ClassificationReport>> {
    par::map(opts.exec, inputs, |(name, text)| {
        let d = crate::coxeter::parse_diagram_named(text, name)?;
        classify_with(&d, opts)
    })
}

#[cfg(test)]
mod tests;
