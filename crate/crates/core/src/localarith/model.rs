use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::arith::{legendre, padic_sqrt, truncate_padic, val_rat};
use crate::mqfield::tower::canonical_basis;
use crate::mqfield::{FieldElement, FieldTower};

/// Completion data for a multiquadratic field at a rational prime `p`.
///
/// The completion `K_P` is modelled by an exact subfield `E = Q(√b₁,…,√b_s)` of `K` whose
/// generators are independent in `Q_p^×/Q_p^×²`, so that `E ⊗ Q_p` is a field. The remaining
/// square classes of `K` are `p`-adic squares; a choice of sign for each of their roots
/// picks one of the `g` primes above `p`.
pub struct LocalFieldModel {
    p: u64,
    tower: FieldTower,
    local: FieldTower,
    e: i64,
    f: i64,
    kernel: Vec<u64>,
    /// For every mask `I` of `K`: `α_I = ρ · α^E_J · ∏_{j∈C} √c_j` as `(J, C, ρ)`.
    basis_map: Vec<(usize, usize, BigRational)>,
    unramified_bits: usize,
    ramified_bits: usize,
    top: Level,
    residues: Vec<FieldElement>,
    /// Hilbert pairing on the standard square-class basis (dyadic only), built on first use.
    pairing: OnceLock<Vec<u32>>,
}

/// One step of the tower `Q_p ⊂ E₁ ⊂ … ⊂ E_p`.
#[derive(Clone)]
struct Level {
    pi: FieldElement,
    pi_inv: FieldElement,
    /// absolute ramification index of this level
    e: i64,
    /// `v_top = scale · v_level`
    scale: i64,
}

/// Square class of a positive integer in `Q_p^×/Q_p^×²`, as a bit vector.
pub fn square_class(m: u64, p: u64) -> u8 {
    let mut v = 0u32;
    let mut u = m;
    while u % p == 0 {
        u /= p;
        v += 1;
    }
    let vb = (v % 2) as u8;
    if p == 2 {
        let r = u % 8;
        vb | (((r % 4 == 3) as u8) << 1) | ((matches!(r, 3 | 5) as u8) << 2)
    } else {
        vb | (((legendre(&BigInt::from(u), p) == -1) as u8) << 1)
    }
}

fn unramified_class(p: u64) -> u8 {
    if p == 2 {
        0b100
    } else {
        0b10
    }
}

impl LocalFieldModel {
    pub fn new(tower: &FieldTower, p: u64) -> Self {
        let mut group: Vec<u64> = tower.group().iter().copied().filter(|&m| m > 1).collect();
        group.sort_unstable();
        let unram = unramified_class(p);
        let mut span = vec![0u8];
        let mut gens = Vec::new();
        let add = |m: u64, span: &mut Vec<u8>, gens: &mut Vec<u64>| {
            let c = square_class(m, p);
            if span.contains(&c) {
                return;
            }
            let ext: Vec<u8> = span.iter().map(|x| x ^ c).collect();
            span.extend(ext);
            gens.push(m);
        };
        if let Some(&m) = group.iter().find(|&&m| square_class(m, p) == unram) {
            add(m, &mut span, &mut gens);
        }
        for &m in &group {
            add(m, &mut span, &mut gens);
        }
        let f = if span.contains(&unram) { 2 } else { 1 };
        let e = span.len() as i64 / f;
        let unramified_bits = if f == 2 { 1 } else { 0 };
        let ramified_bits = ((1usize << gens.len()) - 1) & !unramified_bits;
        let kernel_group: Vec<u64> = tower
            .group()
            .iter()
            .copied()
            .filter(|&m| square_class(m, p) == 0)
            .collect();
        let kernel = canonical_basis(&kernel_group);
        let local = FieldTower::from_basis(gens.clone());

        let mut basis_map = vec![None; tower.degree()];
        let roots_b: Vec<FieldElement> = gens
            .iter()
            .map(|&b| FieldElement::sqrt_of(tower, b).expect("generator in K"))
            .collect();
        let roots_c: Vec<FieldElement> = kernel
            .iter()
            .map(|&c| FieldElement::sqrt_of(tower, c).expect("kernel element in K"))
            .collect();
        for j in 0..1usize << gens.len() {
            for c in 0..1usize << kernel.len() {
                let mut y = FieldElement::one(tower);
                for (i, r) in roots_b.iter().enumerate() {
                    if j >> i & 1 == 1 {
                        y = &y * r;
                    }
                }
                for (i, r) in roots_c.iter().enumerate() {
                    if c >> i & 1 == 1 {
                        y = &y * r;
                    }
                }
                let (mask, coeff) = y
                    .coeffs()
                    .iter()
                    .enumerate()
                    .find(|(_, q)| !q.is_zero())
                    .expect("nonzero product");
                basis_map[mask] = Some((j, c, coeff.recip()));
            }
        }
        let basis_map = basis_map
            .into_iter()
            .map(|x| x.expect("basis map covers K"))
            .collect();

        let mut model = LocalFieldModel {
            p,
            tower: tower.clone(),
            local: local.clone(),
            e,
            f,
            kernel,
            basis_map,
            unramified_bits,
            ramified_bits,
            top: Level {
                pi: FieldElement::from_int(&local, p as i64),
                pi_inv: FieldElement::from_rational(&local, BigRational::new(1.into(), p.into())),
                e: 1,
                scale: e,
            },
            residues: vec![FieldElement::zero(&local), FieldElement::one(&local)],
            pairing: OnceLock::new(),
        };
        if p == 2 {
            model.build_dyadic_levels(&gens);
        } else if ramified_bits != 0 {
            let bit = ramified_bits.trailing_zeros() as usize;
            let pi = FieldElement::basis(&local, 1 << bit);
            model.top = Level {
                pi_inv: pi.inverse().expect("nonzero"),
                pi,
                e: 2,
                scale: 1,
            };
        }
        model
    }

    fn build_dyadic_levels(&mut self, gens: &[u64]) {
        let local = self.local.clone();
        for (i, &b) in gens.iter().enumerate() {
            if i == 0 && self.f == 2 {
                // ω = (1 + √b)/2 with b ≡ 5 mod 8 generates F_4
                let omega = (&FieldElement::one(&local) + &FieldElement::basis(&local, 1))
                    .scale(&BigRational::new(1.into(), 2.into()));
                let one_omega = &omega + &FieldElement::one(&local);
                self.residues.push(omega);
                self.residues.push(one_omega);
                continue;
            }
            let lvl = self.top.clone();
            let root = FieldElement::basis(&local, 1 << i);
            let b_el = FieldElement::from_int(&local, b as i64);
            let t = self.level_val(&lvl, &b_el);
            let pi = if t % 2 == 1 {
                &root * &lvl.pi_inv.pow(((t - 1) / 2) as u32)
            } else {
                let u = &b_el * &lvl.pi_inv.pow(t as u32);
                let root_u = &root * &lvl.pi_inv.pow((t / 2) as u32);
                let (d, w) = self.defect(&lvl, &u);
                let d = d.expect("ramified generator is not a local square");
                assert!(d % 2 == 1, "generator {b} should give a ramified step");
                &(&root_u - &w) * &lvl.pi_inv.pow(((d - 1) / 2) as u32)
            };
            self.top = Level {
                pi_inv: pi.inverse().expect("nonzero uniformizer"),
                pi,
                e: 2 * lvl.e,
                scale: lvl.scale / 2,
            };
            debug_assert_eq!(self.level_val(&self.top, &self.top.pi), 1);
        }
        debug_assert_eq!(self.top.e, self.e);
        debug_assert_eq!(self.top.scale, 1);
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn tower(&self) -> &FieldTower {
        &self.tower
    }

    /// The subfield `E` whose completion is `K_P`.
    pub fn local_tower(&self) -> &FieldTower {
        &self.local
    }

    pub fn ramification(&self) -> i64 {
        self.e
    }

    pub fn residue_degree(&self) -> i64 {
        self.f
    }

    /// Number of primes of `K` above `p`.
    pub fn prime_count(&self) -> usize {
        1 << self.kernel.len()
    }

    /// Generators of the `p`-adic square kernel; their root signs index the primes above `p`.
    pub fn kernel(&self) -> &[u64] {
        &self.kernel
    }

    pub fn uniformizer(&self) -> &FieldElement {
        &self.top.pi
    }

    /// Normalized valuation `v_P(x)` for `x ∈ E`, from `v_p(N_{E/Q}(x)) = f·v_P(x)`.
    pub fn valuation(&self, x: &FieldElement) -> i64 {
        assert!(!x.is_zero(), "valuation of zero");
        let v = val_rat(&x.norm(), self.p);
        debug_assert_eq!(v % self.f, 0);
        v / self.f
    }

    fn level_val(&self, lvl: &Level, x: &FieldElement) -> i64 {
        let v = self.valuation(x);
        debug_assert_eq!(v % lvl.scale, 0);
        v / lvl.scale
    }

    /// Image of `x ∈ K` in `E`, for the prime selected by `signs`.
    ///
    /// Kernel roots are `p`-adic and approximated by rationals; the precision doubles until
    /// the error is below `v(x) + 2e + 1`, which fixes the square class and valuation.
    pub fn embed(&self, x: &FieldElement, signs: &[i8]) -> FieldElement {
        let x = x.coerce(&self.tower).expect("element of the model's field");
        assert!(!x.is_zero(), "embedding zero");
        if self.kernel.is_empty() {
            return self.image(&x, &[]);
        }
        let min_v = x
            .coeffs()
            .iter()
            .zip(&self.basis_map)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, (_, _, rho))| val_rat(&(c * rho), self.p))
            .min()
            .expect("nonzero element");
        let mut prec = 32i64;
        loop {
            let roots: Vec<BigRational> = self
                .kernel
                .iter()
                .zip(signs)
                .map(|(&c, &s)| {
                    let r = padic_sqrt(&BigRational::from_integer(c.into()), self.p, prec)
                        .expect("kernel element is a p-adic square");
                    if s < 0 {
                        -r
                    } else {
                        r
                    }
                })
                .collect();
            let img = self.image(&x, &roots);
            if !img.is_zero() {
                let v = self.valuation(&img);
                if self.e * (min_v + prec) >= v + 2 * self.e + 1 {
                    return img;
                }
            }
            prec *= 2;
        }
    }

    fn image(&self, x: &FieldElement, roots: &[BigRational]) -> FieldElement {
        let mut coeffs = vec![BigRational::zero(); self.local.degree()];
        for (c, (j, cmask, rho)) in x.coeffs().iter().zip(&self.basis_map) {
            if c.is_zero() {
                continue;
            }
            let mut term = c * rho;
            for (i, r) in roots.iter().enumerate() {
                if cmask >> i & 1 == 1 {
                    term *= r;
                }
            }
            coeffs[*j] += term;
        }
        FieldElement::from_coeffs(&self.local, coeffs)
    }

    fn residue_sqrt(&self, lvl: &Level, c: &FieldElement) -> FieldElement {
        self.residues
            .iter()
            .find(|r| {
                let d = c - &r.square();
                d.is_zero() || self.level_val(lvl, &d) >= 1
            })
            .cloned()
            .expect("residue field of characteristic 2 is perfect")
    }

    /// Quadratic defect of a unit `u` at a dyadic level: `None` when `u` is a square, otherwise
    /// the exponent `d` (odd `< 2e`, or `2e`) together with the approximate root `w`,
    /// `v(u − w²) = d`.
    fn defect(&self, lvl: &Level, u: &FieldElement) -> (Option<i64>, FieldElement) {
        let two_e = 2 * lvl.e;
        let mut w = self.residue_sqrt(lvl, u);
        loop {
            let diff = u - &w.square();
            if diff.is_zero() {
                return (None, w);
            }
            let k = self.level_val(lvl, &diff);
            if k > two_e {
                return (None, w);
            }
            if k % 2 == 1 {
                return (Some(k), w);
            }
            if k < two_e {
                let c = &diff * &lvl.pi_inv.pow(k as u32);
                let s = self.residue_sqrt(lvl, &c);
                w = &w + &(&s * &lvl.pi.pow((k / 2) as u32));
                continue;
            }
            // u = w²(1 + 4c′): a square iff y + y² ≡ c′ has a residue solution
            let four_w2 = w.square().scale(&BigRational::from_integer(4.into()));
            let c2 = diff.checked_div(&four_w2).expect("unit");
            let y = self.residues.iter().find(|y| {
                let d = &c2 - &(*y + &y.square());
                d.is_zero() || self.level_val(lvl, &d) >= 1
            });
            match y {
                Some(y) => {
                    let two_y = y.scale(&BigRational::from_integer(2.into()));
                    w = &w * &(&FieldElement::one(&self.local) + &two_y);
                }
                None => return (Some(two_e), w),
            }
        }
    }

    /// `x / π^{2⌊v(x)/2⌋}` and the parity of `v(x)`.
    fn strip_even(&self, x: &FieldElement) -> (FieldElement, i64) {
        let v = self.valuation(x);
        let half = v.div_euclid(2);
        let y = if half >= 0 {
            x * &self.top.pi_inv.pow(half as u32 * 2)
        } else {
            x * &self.top.pi.pow((-half) as u32 * 2)
        };
        (y, v.rem_euclid(2))
    }

    /// Square test in the completion for `x ∈ E^×`.
    pub fn is_square(&self, x: &FieldElement) -> bool {
        let (y, parity) = self.strip_even(x);
        if parity == 1 {
            return false;
        }
        if self.p == 2 {
            self.defect(&self.top, &y).0.is_none()
        } else {
            self.odd_unit_is_square(&y)
        }
    }

    /// Quadratic defect exponent of a unit at the top level (`None` for squares).
    pub fn unit_defect(&self, u: &FieldElement) -> Option<i64> {
        assert_eq!(self.p, 2);
        self.defect(&self.top, u).0
    }

    /// A unit `c` is a square iff its residue is; the residue is read off the unramified part.
    fn odd_unit_is_square(&self, c: &FieldElement) -> bool {
        let c0 = if self.ramified_bits != 0 {
            (c + &c.conjugate_mask(self.ramified_bits)).scale(&BigRational::new(1.into(), 2.into()))
        } else {
            c.clone()
        };
        let n = if self.unramified_bits != 0 {
            &c0 * &c0.conjugate_mask(self.unramified_bits)
        } else {
            c0
        };
        let n = n.to_rational().expect("norm to Q_p");
        legendre(&(n.numer() * n.denom()), self.p) == 1
    }

    /// Hilbert symbol `(a, b)` in the completion, for `a, b ∈ E^×`.
    pub fn hilbert(&self, a: &FieldElement, b: &FieldElement) -> i8 {
        let (a, alpha) = self.strip_even(a);
        let (b, beta) = self.strip_even(b);
        if self.p != 2 {
            // tame symbol: residue of (−1)^{αβ} a^β / b^α
            let mut c = FieldElement::one(&self.local);
            if alpha * beta == 1 {
                c = -c;
            }
            if beta == 1 {
                c = &c * &a;
            }
            if alpha == 1 {
                c = c.checked_div(&b).expect("nonzero");
            }
            return if self.odd_unit_is_square(&c) { 1 } else { -1 };
        }
        self.pair(self.class_coordinates(&a), self.class_coordinates(&b))
    }

    /// Dyadic Hilbert symbol by direct search for a solution of `a x² + b y² = z²`.
    ///
    /// Exponential in the residue degree and ramification; kept as an independent check of
    /// the coordinate route on small completions.
    pub fn hilbert_by_search(&self, a: &FieldElement, b: &FieldElement) -> i8 {
        assert_eq!(self.p, 2);
        let (a, _) = self.strip_even(a);
        let (b, _) = self.strip_even(b);
        let minus_ab = -(&a * &b);
        if self.is_square(&a) || self.is_square(&b) || self.is_square(&minus_ab) {
            return 1;
        }
        let zero = FieldElement::zero(&self.local);
        // a·x² + b·y² = z²: either a + b t² (t ∈ O) or a t² + b (t ∈ πO) is a square
        if self.disc_has_square(&b, &a, &zero, 0) || self.disc_has_square(&a, &b, &zero, 1) {
            1
        } else {
            -1
        }
    }

    /// Dimension `[E_P:Q_2] + 2` of `E_P^×/E_P^×²`.
    pub fn class_rank(&self) -> usize {
        (self.e * self.f) as usize + 2
    }

    /// Standard basis of `E_P^×/E_P^×²`: `π`, then `1 + η_j π^i` for odd `i < 2e` and an
    /// `F_2`-basis `η_j` of the residue field, then the unramified class `1 + 4ρ`.
    pub fn class_basis(&self) -> Vec<FieldElement> {
        assert_eq!(self.p, 2);
        let one = FieldElement::one(&self.local);
        let mut basis = vec![self.top.pi.clone()];
        for i in (1..2 * self.e).step_by(2) {
            for eta in self.residue_basis() {
                basis.push(&one + &(eta * &self.top.pi.pow(i as u32)));
            }
        }
        let rho = if self.f == 2 { &self.residues[2] } else { &one };
        basis.push(&one + &rho.scale(&BigRational::from_integer(4.into())));
        basis
    }

    fn residue_basis(&self) -> &[FieldElement] {
        &self.residues[1..1 + self.f as usize]
    }

    fn class_index(&self, d: i64, j: usize) -> usize {
        1 + (d as usize / 2) * self.f as usize + j
    }

    /// Coordinates of the square class of `x ∈ E^×` in [`Self::class_basis`].
    ///
    /// The unit part is reduced by the basis element matching the leading term of `u/w² − 1`,
    /// which strictly raises the quadratic defect, until it reaches `2e` or `∞`.
    pub fn class_coordinates(&self, x: &FieldElement) -> u32 {
        assert_eq!(self.p, 2);
        let v = self.valuation(x);
        let mut bits = v.rem_euclid(2) as u32;
        let mut u = if v >= 0 {
            x * &self.top.pi_inv.pow(v as u32)
        } else {
            x * &self.top.pi.pow((-v) as u32)
        };
        let two_e = 2 * self.e;
        let mut basis: Option<Vec<FieldElement>> = None;
        loop {
            u = self.truncate(&u);
            let (d, w) = self.defect(&self.top, &u);
            let d = match d {
                None => return bits,
                Some(d) if d == two_e => return bits | 1 << (self.class_rank() - 1),
                Some(d) => d,
            };
            let w2 = w.square();
            let lead = (&u - &w2)
                .checked_div(&(&w2 * &self.top.pi.pow(d as u32)))
                .expect("nonzero");
            let etas = self.residue_basis();
            let combo = (1usize..1 << etas.len())
                .find(|c| {
                    let mut r = lead.clone();
                    for (j, eta) in etas.iter().enumerate() {
                        if c >> j & 1 == 1 {
                            r = &r - eta;
                        }
                    }
                    r.is_zero() || self.valuation(&r) >= 1
                })
                .expect("leading coefficient is a unit");
            let basis = basis.get_or_insert_with(|| self.class_basis());
            for j in 0..etas.len() {
                if combo >> j & 1 == 1 {
                    let idx = self.class_index(d, j);
                    bits ^= 1 << idx;
                    u = u.checked_div(&basis[idx]).expect("unit");
                }
            }
        }
    }

    /// `(−1)^{c_aᵀ M c_b}` for the pairing matrix `M` on the standard basis.
    fn pair(&self, ca: u32, cb: u32) -> i8 {
        let rows = self.pairing.get_or_init(|| self.build_pairing());
        let parity = rows
            .iter()
            .enumerate()
            .filter(|(i, _)| ca >> i & 1 == 1)
            .fold(0u32, |acc, (_, h)| acc ^ (h & cb).count_ones() & 1);
        if parity == 1 {
            -1
        } else {
            1
        }
    }

    /// Row `i` is the functional `b ↦ (β_i, b)`, whose kernel is the norm group of
    /// `L = E_P(√β_i)`. For unramified `L` that is the even-valuation classes. Otherwise it is
    /// spanned by the norms of a uniformizer `Π` and of `1 + η_j Π^i`, `1 ≤ i ≤ 4e`, which
    /// generate `L^×` modulo `U_L^{(4e+1)} ⊂ L^×²`.
    fn build_pairing(&self) -> Vec<u32> {
        let basis = self.class_basis();
        let dim = basis.len();
        let one = FieldElement::one(&self.local);
        let zero = FieldElement::zero(&self.local);
        let rows: Vec<u32> = basis
            .iter()
            .map(|beta| {
                let Some(big_pi) = self.quadratic_uniformizer(beta) else {
                    return 1;
                };
                let norm = |z: &(FieldElement, FieldElement)| &z.0.square() - &(beta * &z.1.square());
                let mut span: Vec<u32> = Vec::new();
                insert_reduced(&mut span, self.class_coordinates(&norm(&big_pi)));
                let mut power = (one.clone(), zero.clone());
                'levels: for _ in 1..=4 * self.e {
                    power = self.truncate_pair(&pair_mul(beta, &power, &big_pi));
                    for eta in self.residue_basis() {
                        let z = (&one + &(eta * &power.0), eta * &power.1);
                        insert_reduced(&mut span, self.class_coordinates(&norm(&z)));
                        if span.len() + 1 == dim {
                            break 'levels;
                        }
                    }
                }
                assert_eq!(span.len() + 1, dim, "norm group of a quadratic extension has index two");
                (1u32..1 << dim)
                    .find(|h| span.iter().all(|s| (h & s).count_ones() % 2 == 0))
                    .expect("annihilator of a hyperplane")
            })
            .collect();
        for i in 0..dim {
            for j in 0..dim {
                debug_assert_eq!(rows[i] >> j & 1, rows[j] >> i & 1, "pairing is symmetric");
            }
        }
        rows
    }

    /// A uniformizer `x + y√β` of `E_P(√β)` as `(x, y)`, or `None` when the extension is
    /// unramified.
    fn quadratic_uniformizer(&self, beta: &FieldElement) -> Option<(FieldElement, FieldElement)> {
        if self.valuation(beta) % 2 != 0 {
            return Some((FieldElement::zero(&self.local), FieldElement::one(&self.local)));
        }
        match self.defect(&self.top, beta) {
            (Some(d), w) if d < 2 * self.e => {
                let scale = self.top.pi_inv.pow(((d - 1) / 2) as u32);
                Some((-(&w * &scale), scale))
            }
            _ => None,
        }
    }

    /// Coefficientwise 2-adic truncation at absolute precision 3. The error lies in
    /// `π^{3e} O`, so the square class of a unit (or of `1 + z` with `z` integral) is kept.
    fn truncate(&self, x: &FieldElement) -> FieldElement {
        let coeffs = x.coeffs().iter().map(|c| truncate_padic(c, 2, 3)).collect();
        FieldElement::from_coeffs(&self.local, coeffs)
    }

    fn truncate_pair(&self, z: &(FieldElement, FieldElement)) -> (FieldElement, FieldElement) {
        (self.truncate(&z.0), self.truncate(&z.1))
    }

    /// Does `A x² + B` take a square value for some `x ∈ x0 + π^ν O`?
    ///
    /// Requires `−AB` to be a nonsquare, so the polynomial has no root.
    fn disc_has_square(&self, a: &FieldElement, b: &FieldElement, x0: &FieldElement, nu: i64) -> bool {
        let g0 = &(a * &x0.square()) + b;
        if self.is_square(&g0) {
            return true;
        }
        let lambda = self.valuation(&g0);
        let e = self.e;
        let va = self.valuation(a);
        let mut m = va + 2 * nu;
        if !x0.is_zero() {
            m = m.min(va + e + self.valuation(x0) + nu);
        }
        if m >= lambda + 2 * e + 1 {
            return false;
        }
        if lambda < m {
            if lambda % 2 == 1 {
                return false;
            }
            let u0 = &g0 * &self.top.pi_inv.pow(lambda as u32);
            let d = self.unit_defect(&u0).expect("g(x0) is not a square");
            if m - lambda > d {
                return false;
            }
        }
        let step = self.top.pi.pow(nu as u32);
        self.residues.iter().any(|r| {
            let x = x0 + &(r * &step);
            self.disc_has_square(a, b, &x, nu + 1)
        })
    }
}

/// Product in `E(√β)` of elements written `x + y√β`.
fn pair_mul(
    beta: &FieldElement,
    a: &(FieldElement, FieldElement),
    b: &(FieldElement, FieldElement),
) -> (FieldElement, FieldElement) {
    (
        &(&a.0 * &b.0) + &(&(beta * &a.1) * &b.1),
        &(&a.0 * &b.1) + &(&a.1 * &b.0),
    )
}

/// Adds `v` to an `F_2` row-echelon list if it is independent of it.
fn insert_reduced(span: &mut Vec<u32>, mut v: u32) {
    for &s in span.iter() {
        let pivot = 1 << (31 - s.leading_zeros());
        if v & pivot != 0 {
            v ^= s;
        }
    }
    if v != 0 {
        span.push(v);
        span.sort_unstable_by(|a, b| b.cmp(a));
    }
}

impl std::fmt::Debug for LocalFieldModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("LocalFieldModel")
            .field("p", &self.p)
            .field("tower", &self.tower)
            .field("local", &self.local)
            .field("e", &self.e)
            .field("f", &self.f)
            .field("kernel", &self.kernel)
            .field("uniformizer", &self.top.pi)
            .finish()
    }
}
