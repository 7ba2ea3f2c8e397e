//! Seeded random instances for the randomized suites.

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::chern_weil::{GaugeTransform, LieValuedForm, PolyMatrix, Representation};
use crate::equivariant::WeilModelElement;
use crate::error::{Error, Result};
use crate::forms::{ChartForm, PolyMap};
use crate::liealg::{AlgebraVector, LieAlgebra};
use crate::linalg::{identity, inverse, mat_mul, Matrix};
use crate::poly::{Mono, Poly};
use crate::rational::{frac, q, Q};
use crate::weil::{WeilElement, WeilMonomial};

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A nonzero rational `a/b` with `|a| ≤ 3`, `b ∈ {1, 2}`.
pub fn small_q<R: Rng>(rng: &mut R) -> Q {
    let mut a = 0i64;
    while a == 0 {
        a = rng.gen_range(-3..=3);
    }
    frac(a, rng.gen_range(1..=2))
}

fn small_int<R: Rng>(rng: &mut R) -> Q {
    q(rng.gen_range(-2..=2))
}

/// Exponent vector of total degree exactly `d`.
pub fn random_mono<R: Rng>(rng: &mut R, m: usize, d: u32) -> Mono {
    let mut e = vec![0u32; m];
    if m > 0 {
        for _ in 0..d {
            e[rng.gen_range(0..m)] += 1;
        }
    }
    Mono(e)
}

pub fn random_poly<R: Rng>(rng: &mut R, m: usize, max_deg: u32, max_terms: usize) -> Poly {
    let count = rng.gen_range(1..=max_terms.max(1));
    let mut p = Poly::zero(m);
    for _ in 0..count {
        let d = if m == 0 { 0 } else { rng.gen_range(0..=max_deg) };
        p.add_term(random_mono(rng, m, d), small_q(rng));
    }
    p
}

pub fn random_one_form<R: Rng>(rng: &mut R, m: usize, max_deg: u32, max_terms: usize) -> ChartForm {
    let count = rng.gen_range(0..=max_terms);
    let mut f = ChartForm::zero(m);
    for _ in 0..count {
        let d = rng.gen_range(0..=max_deg);
        let p = Poly::monomial(random_mono(rng, m, d), small_q(rng));
        f = f.add(&ChartForm::basic(p, &[rng.gen_range(0..m)]));
    }
    f
}

/// A homogeneous form of degree `k` with a few terms.
pub fn random_form<R: Rng>(rng: &mut R, m: usize, k: usize, max_deg: u32, max_terms: usize) -> ChartForm {
    let count = rng.gen_range(0..=max_terms);
    let mut f = ChartForm::zero(m);
    if k > m {
        return f;
    }
    let idx: Vec<usize> = (0..m).collect();
    for _ in 0..count {
        let mut chosen: Vec<usize> = idx.choose_multiple(rng, k).copied().collect();
        chosen.sort_unstable();
        let d = rng.gen_range(0..=max_deg);
        let p = Poly::monomial(random_mono(rng, m, d), small_q(rng));
        f = f.add(&ChartForm::basic(p, &chosen));
    }
    f
}

/// A connection whose components each have at most two terms.
pub fn random_connection<R: Rng>(rng: &mut R, l: &LieAlgebra, m: usize, max_deg: u32) -> LieValuedForm {
    let comps = (0..l.dim()).map(|_| random_one_form(rng, m, max_deg, 2)).collect();
    LieValuedForm::new(l.clone(), comps).expect("shapes agree")
}

pub fn random_polymap<R: Rng>(rng: &mut R, source: usize, target: usize, max_deg: u32) -> PolyMap {
    let comps = (0..target).map(|_| random_poly(rng, source, max_deg, 2)).collect();
    PolyMap::new(source, comps).expect("shapes agree")
}

pub fn random_vector<R: Rng>(rng: &mut R, n: usize) -> AlgebraVector {
    AlgebraVector((0..n).map(|_| small_int(rng)).collect())
}

/// A homogeneous Weil element of total degree `d`, or zero if none exists.
pub fn random_weil_element<R: Rng>(rng: &mut R, n: usize, d: usize, max_terms: usize) -> WeilElement {
    let ps: Vec<usize> = (0..=n.min(d)).filter(|p| (d - p) % 2 == 0).collect();
    let mut out = WeilElement::zero(n);
    if ps.is_empty() {
        return out;
    }
    let idx: Vec<usize> = (0..n).collect();
    for _ in 0..rng.gen_range(1..=max_terms.max(1)) {
        let p = *ps.choose(rng).expect("nonempty");
        let ext = idx.choose_multiple(rng, p).fold(0u32, |acc, &i| acc | 1 << i);
        let mut sym = vec![0u32; n];
        for _ in 0..(d - p) / 2 {
            sym[rng.gen_range(0..n)] += 1;
        }
        out.add_term(WeilMonomial { ext, sym }, small_q(rng));
    }
    out
}

/// A constant element of the group generated by the built-in representation.
pub fn random_constant_gauge<R: Rng>(rng: &mut R, rep: &Representation, chart_dim: usize) -> Result<GaugeTransform> {
    let l = rep.algebra();
    let name = l.name().unwrap_or("");
    let r = rep.size();
    let g: Matrix = if name.starts_with("abelian") {
        let mut g = identity(r);
        for b in 1..r {
            g[0][b] = small_q(rng);
        }
        g
    } else {
        match name {
            // Cayley transform (I − K)(I + K)⁻¹ of an antisymmetric K
            "su2" | "so3" => {
                let (a, b, c) = (small_int(rng), small_int(rng), small_int(rng));
                let z = Q::zero();
                let k = vec![
                    vec![z.clone(), a.clone(), b.clone()],
                    vec![-a, z.clone(), c.clone()],
                    vec![-b, -c, z],
                ];
                let id = identity(3);
                let minus: Matrix = id.iter().zip(&k).map(|(r, s)| r.iter().zip(s).map(|(x, y)| x - y).collect()).collect();
                let plus: Matrix = id.iter().zip(&k).map(|(r, s)| r.iter().zip(s).map(|(x, y)| x + y).collect()).collect();
                mat_mul(&minus, &inverse(&plus).expect("I + K is invertible"))
            }
            "sl2" => loop {
                let g: Matrix = (0..2).map(|_| (0..2).map(|_| small_int(rng)).collect()).collect();
                if &g[0][0] * &g[1][1] != &g[0][1] * &g[1][0] {
                    break g;
                }
            },
            "heisenberg3" => {
                let mut u = identity(3);
                u[0][1] = small_q(rng);
                u[1][2] = small_q(rng);
                u[0][2] = small_q(rng);
                u
            }
            _ => return Err(Error::Precondition(format!("no gauge sampler for {name:?}"))),
        }
    };
    GaugeTransform::constant(rep.clone(), g, chart_dim)
}

/// A nonconstant unipotent gauge; compact algebras have none.
pub fn random_unipotent_gauge<R: Rng>(rng: &mut R, rep: &Representation, chart_dim: usize, max_deg: u32) -> Result<GaugeTransform> {
    let l = rep.algebra();
    let name = l.name().unwrap_or("");
    let r = rep.size();
    let one = Poly::one(chart_dim);
    let mut g: PolyMatrix =
        (0..r).map(|a| (0..r).map(|b| if a == b { one.clone() } else { Poly::zero(chart_dim) }).collect()).collect();
    let entries: Vec<(usize, usize)> = if name.starts_with("abelian") {
        (1..r).map(|b| (0, b)).collect()
    } else {
        match name {
            "sl2" => vec![(0, 1)],
            "heisenberg3" => vec![(0, 1), (1, 2), (0, 2)],
            "su2" | "so3" => {
                return Err(Error::Precondition("a compact group has no nontrivial unipotent elements".into()))
            }
            _ => return Err(Error::Precondition(format!("no gauge sampler for {name:?}"))),
        }
    };
    for (a, b) in entries {
        g[a][b] = random_poly(rng, chart_dim, max_deg, 2);
    }
    if chart_dim > 0 && r > 1 && g.iter().flatten().all(Poly::is_constant) {
        g[0][r - 1] = g[0][r - 1].add(&Poly::var(chart_dim, 0));
    }
    GaugeTransform::unipotent(rep.clone(), g)
}

/// A homogeneous element of total degree `d` of the Weil model of `ℝ^m` and an `n`-dimensional algebra.
pub fn random_model_element<R: Rng>(rng: &mut R, m: usize, n: usize, d: usize, max_deg: u32, max_terms: usize) -> WeilModelElement {
    let mut out = WeilModelElement::zero(m, n);
    for k in 0..=m.min(d) {
        if rng.gen_bool(0.5) {
            let omega = random_form(rng, m, k, max_deg, max_terms);
            let a = random_weil_element(rng, n, d - k, max_terms);
            out = out.add(&WeilModelElement::tensor(&omega, &a));
        }
    }
    out
}
