//! Connections on trivial bundles over charts, curvature, Chern-Weil forms
//! and gauge transformations.
//!
//! Gauge transformations act through a faithful matrix representation of
//! the algebra: `A·g = g⁻¹dg + g⁻¹Ag` is formed in matrices and read back
//! through a fixed left inverse of the representation.

use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::forms::{ChartForm, PolyMap};
use crate::invariants::SymElement;
use crate::liealg::{algebra_from_json, AlgebraVector, LieAlgebra};
use crate::linalg::{determinant, identity, inverse, mat_mul, Echelon, Matrix};
use crate::poly::Poly;
use crate::rational::{q, Q};
use crate::weil::WeilElement;

pub type PolyMatrix = Vec<Vec<Poly>>;
pub type FormMatrix = Vec<Vec<ChartForm>>;

/// A `g`-valued form `Σ_i A^i ⊗ e_i` on a chart.
#[derive(Clone, PartialEq, Eq)]
pub struct LieValuedForm {
    algebra: LieAlgebra,
    components: Vec<ChartForm>,
}

impl LieValuedForm {
    pub fn new(algebra: LieAlgebra, components: Vec<ChartForm>) -> Result<Self> {
        if components.len() != algebra.dim() {
            return Err(Error::DimensionMismatch { expected: algebra.dim(), got: components.len() });
        }
        if let Some(first) = components.first() {
            for c in &components[1..] {
                if c.dim() != first.dim() {
                    return Err(Error::DimensionMismatch { expected: first.dim(), got: c.dim() });
                }
            }
        }
        Ok(LieValuedForm { algebra, components })
    }

    pub fn zero(algebra: LieAlgebra, chart_dim: usize) -> Self {
        let components = vec![ChartForm::zero(chart_dim); algebra.dim()];
        LieValuedForm { algebra, components }
    }

    pub fn algebra(&self) -> &LieAlgebra {
        &self.algebra
    }

    pub fn components(&self) -> &[ChartForm] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &ChartForm {
        &self.components[i]
    }

    pub fn chart_dim(&self) -> usize {
        self.components.first().map_or(0, ChartForm::dim)
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(ChartForm::is_zero)
    }

    /// Whether every component is homogeneous of form degree `k`.
    pub fn is_homogeneous_of(&self, k: usize) -> bool {
        self.components.iter().all(|c| c.is_homogeneous_of(k))
    }

    pub fn add(&self, other: &LieValuedForm) -> Result<LieValuedForm> {
        self.check(other)?;
        let components = self.components.iter().zip(&other.components).map(|(a, b)| a.add(b)).collect();
        Ok(LieValuedForm { algebra: self.algebra.clone(), components })
    }

    pub fn d(&self) -> LieValuedForm {
        LieValuedForm { algebra: self.algebra.clone(), components: self.components.iter().map(ChartForm::d).collect() }
    }

    /// `[A, B]^k = Σ_{i,j} f^k_{ij} A^i ∧ B^j`.
    pub fn bracket(&self, other: &LieValuedForm) -> Result<LieValuedForm> {
        self.check(other)?;
        let n = self.algebra.dim();
        let mut components = vec![ChartForm::zero(self.chart_dim()); n];
        for i in 0..n {
            for j in 0..n {
                if (0..n).all(|k| self.algebra.f(i, j, k).is_zero()) {
                    continue;
                }
                let w = self.components[i].wedge(&other.components[j])?;
                if w.is_zero() {
                    continue;
                }
                for (k, comp) in components.iter_mut().enumerate() {
                    let c = self.algebra.f(i, j, k);
                    if !c.is_zero() {
                        *comp = comp.add(&w.scale(c));
                    }
                }
            }
        }
        Ok(LieValuedForm { algebra: self.algebra.clone(), components })
    }

    pub fn pullback(&self, phi: &PolyMap) -> Result<LieValuedForm> {
        let components = self.components.iter().map(|c| c.pullback(phi)).collect::<Result<Vec<_>>>()?;
        Ok(LieValuedForm { algebra: self.algebra.clone(), components })
    }

    fn check(&self, other: &LieValuedForm) -> Result<()> {
        if !self.algebra.same_structure(&other.algebra) {
            return Err(Error::InvalidAlgebra("forms take values in different algebras".into()));
        }
        if self.chart_dim() != other.chart_dim() {
            return Err(Error::DimensionMismatch { expected: self.chart_dim(), got: other.chart_dim() });
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "algebra": serde_json::to_value(&self.algebra).expect("algebra serializes"),
            "chart_dim": self.chart_dim(),
            "components": self.components.iter().map(ChartForm::to_json).collect::<Vec<_>>(),
        })
    }

    /// Reads `{ "algebra": name | {...}, "chart_dim": m, "components": [...] }`.
    pub fn from_json(v: &Value) -> Result<LieValuedForm> {
        let algebra = algebra_from_json(v.get("algebra").ok_or_else(|| Error::Parse("missing \"algebra\"".into()))?)?;
        Self::from_json_with(algebra, v)
    }

    /// As [`from_json`](Self::from_json) with the algebra fixed by the caller.
    pub fn from_json_with(algebra: LieAlgebra, v: &Value) -> Result<LieValuedForm> {
        let comps = v
            .get("components")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("missing \"components\"".into()))?;
        let components = comps.iter().map(ChartForm::from_json).collect::<Result<Vec<_>>>()?;
        if let Some(m) = v.get("chart_dim").and_then(Value::as_u64) {
            if let Some(c) = components.iter().find(|c| c.dim() != m as usize) {
                return Err(Error::DimensionMismatch { expected: m as usize, got: c.dim() });
            }
            if components.is_empty() {
                return Ok(LieValuedForm::zero(algebra, m as usize));
            }
        }
        LieValuedForm::new(algebra, components)
    }
}

impl fmt::Debug for LieValuedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .components
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| format!("[{c}] e{}", i + 1))
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// `F = dA + ½[A, A]`.
pub fn curvature(a: &LieValuedForm) -> Result<LieValuedForm> {
    if !a.is_homogeneous_of(1) {
        return Err(Error::DegreeMismatch("a connection must be a 1-form".into()));
    }
    let l = &a.algebra;
    let n = l.dim();
    let mut components: Vec<ChartForm> = a.components.iter().map(ChartForm::d).collect();
    // ½ Σ_{i,j} f^k_{ij} A^i∧A^j = Σ_{i<j} f^k_{ij} A^i∧A^j on 1-forms.
    for i in 0..n {
        for j in i + 1..n {
            if (0..n).all(|k| l.f(i, j, k).is_zero()) {
                continue;
            }
            let w = a.components[i].wedge(&a.components[j])?;
            if w.is_zero() {
                continue;
            }
            for (k, comp) in components.iter_mut().enumerate() {
                let c = l.f(i, j, k);
                if !c.is_zero() {
                    *comp = comp.add(&w.scale(c));
                }
            }
        }
    }
    Ok(LieValuedForm { algebra: l.clone(), components })
}

fn factorial(k: usize) -> Q {
    (1..=k).fold(Q::one(), |acc, i| acc * q(i as i64))
}

/// Distinct orderings of the multiset with multiplicities `counts`.
fn multiset_words(counts: &mut [u32], prefix: &mut Vec<usize>, len: usize, out: &mut Vec<Vec<usize>>) {
    if prefix.len() == len {
        out.push(prefix.clone());
        return;
    }
    for i in 0..counts.len() {
        if counts[i] > 0 {
            counts[i] -= 1;
            prefix.push(i);
            multiset_words(counts, prefix, len, out);
            prefix.pop();
            counts[i] += 1;
        }
    }
}

/// `P̃(B_1, …, B_k)` for the symmetric `k`-linear form with `P̃(ξ,…,ξ) = P(ξ)`,
/// evaluated on `g`-valued forms of even degree.
pub fn polarize(p: &SymElement, args: &[&LieValuedForm]) -> Result<ChartForm> {
    let k = args.len();
    let first = args.first().ok_or_else(|| Error::Precondition("polarization needs at least one argument".into()))?;
    let m = first.chart_dim();
    for b in args {
        first.check(b)?;
        if b.algebra.dim() != p.dim() {
            return Err(Error::DimensionMismatch { expected: p.dim(), got: b.algebra.dim() });
        }
        if b.components.iter().any(|c| c.parts().any(|(mask, _)| mask.count_ones() % 2 == 1)) {
            return Err(Error::DegreeMismatch("polarization arguments must be even forms".into()));
        }
    }
    let kf = factorial(k);
    let mut out = ChartForm::zero(m);
    for (mono, c) in p.as_weil().terms() {
        if mono.sym_degree() != k {
            return Err(Error::NotHomogeneous(format!("symmetric degree {} in a degree-{k} polarization", mono.sym_degree())));
        }
        let weight = mono.sym.iter().fold(c.clone(), |acc, &e| acc * factorial(e as usize)) / &kf;
        let mut words = Vec::new();
        multiset_words(&mut mono.sym.clone(), &mut Vec::new(), k, &mut words);
        for w in words {
            let mut form = ChartForm::constant(m, weight.clone());
            for (t, &i) in w.iter().enumerate() {
                form = form.wedge(&args[t].components[i])?;
                if form.is_zero() {
                    break;
                }
            }
            out = out.add(&form);
        }
    }
    Ok(out)
}

/// The Chern-Weil form `P(F_A)`.
pub fn cw_form(p: &SymElement, a: &LieValuedForm) -> Result<ChartForm> {
    if p.dim() != a.algebra.dim() {
        return Err(Error::DimensionMismatch { expected: a.algebra.dim(), got: p.dim() });
    }
    let m = a.chart_dim();
    if p.as_weil().is_zero() {
        return Ok(ChartForm::zero(m));
    }
    let k = p.degree().ok_or_else(|| Error::NotHomogeneous("invariant polynomial has mixed degrees".into()))?;
    let f = curvature(a)?;
    if k == 0 {
        return Ok(ChartForm::constant(m, p.as_weil().coefficient(&crate::weil::WeilMonomial::one(p.dim()))));
    }
    let args = vec![&f; k];
    polarize(p, &args)
}

/// The algebra map `λ^i ↦ A^i`, `λ̃^i ↦ dA^i` from the Weil algebra to forms.
pub fn universal_substitution(w: &WeilElement, a: &LieValuedForm) -> Result<ChartForm> {
    if w.dim() != a.algebra.dim() {
        return Err(Error::DimensionMismatch { expected: a.algebra.dim(), got: w.dim() });
    }
    if !a.is_homogeneous_of(1) {
        return Err(Error::DegreeMismatch("a connection must be a 1-form".into()));
    }
    let m = a.chart_dim();
    let da: Vec<ChartForm> = a.components.iter().map(ChartForm::d).collect();
    let mut out = ChartForm::zero(m);
    for (mono, c) in w.terms() {
        let mut form = ChartForm::constant(m, c.clone());
        for i in mono.ext_indices() {
            form = form.wedge(&a.components[i])?;
        }
        for (i, &e) in mono.sym.iter().enumerate() {
            for _ in 0..e {
                form = form.wedge(&da[i])?;
            }
        }
        out = out.add(&form);
    }
    Ok(out)
}

/// A faithful matrix representation `e_i ↦ X_i` with `[X_i, X_j] = Σ f^k_{ij} X_k`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Representation {
    algebra: LieAlgebra,
    size: usize,
    generators: Vec<Matrix>,
    // Entries where the generators are independent, and the inverse there.
    selected: Vec<(usize, usize)>,
    solve: Matrix,
}

fn commutator(a: &Matrix, b: &Matrix) -> Matrix {
    let ab = mat_mul(a, b);
    let ba = mat_mul(b, a);
    ab.iter().zip(&ba).map(|(r, s)| r.iter().zip(s).map(|(x, y)| x - y).collect()).collect()
}

fn unit(size: usize, a: usize, b: usize) -> Matrix {
    let mut m = vec![vec![Q::zero(); size]; size];
    m[a][b] = Q::one();
    m
}

impl Representation {
    pub fn new(algebra: LieAlgebra, generators: Vec<Matrix>) -> Result<Self> {
        let n = algebra.dim();
        if generators.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: generators.len() });
        }
        let size = generators.first().map_or(0, Vec::len);
        if generators.iter().any(|g| g.len() != size || g.iter().any(|r| r.len() != size)) {
            return Err(Error::InvalidGauge("representation matrices must be square of one size".into()));
        }
        for i in 0..n {
            for j in i + 1..n {
                let lhs = commutator(&generators[i], &generators[j]);
                let mut rhs = vec![vec![Q::zero(); size]; size];
                for (k, g) in generators.iter().enumerate() {
                    let c = algebra.f(i, j, k);
                    if c.is_zero() {
                        continue;
                    }
                    for (r, row) in rhs.iter_mut().enumerate() {
                        for (s, x) in row.iter_mut().enumerate() {
                            *x += c * &g[r][s];
                        }
                    }
                }
                if lhs != rhs {
                    return Err(Error::InvalidGauge(format!(
                        "representation violates the bracket [e{}, e{}]",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        let mut ech = Echelon::new(n);
        let mut selected = Vec::new();
        'outer: for a in 0..size {
            for b in 0..size {
                let row: Vec<(usize, Q)> = (0..n)
                    .filter(|&i| !generators[i][a][b].is_zero())
                    .map(|i| (i, generators[i][a][b].clone()))
                    .collect();
                if ech.insert(&row) {
                    selected.push((a, b));
                    if selected.len() == n {
                        break 'outer;
                    }
                }
            }
        }
        if selected.len() != n {
            return Err(Error::InvalidGauge("representation is not faithful".into()));
        }
        let sub: Matrix = selected.iter().map(|&(a, b)| (0..n).map(|i| generators[i][a][b].clone()).collect()).collect();
        let solve = inverse(&sub).ok_or(Error::Singular)?;
        Ok(Representation { algebra, size, generators, selected, solve })
    }

    /// Rational matrix representations of the built-in algebras.
    pub fn builtin(algebra: &LieAlgebra) -> Result<Self> {
        let n = algebra.dim();
        let name = algebra.name().unwrap_or("");
        let gens: Vec<Matrix> = if name.starts_with("abelian") {
            (0..n).map(|i| unit(n + 1, 0, i + 1)).collect()
        } else {
            match name {
                // (L_i)_{jk} = −ε_{ijk}
                "su2" | "so3" => (0..3)
                    .map(|i| {
                        let mut m = vec![vec![Q::zero(); 3]; 3];
                        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
                        m[j][k] = q(-1);
                        m[k][j] = q(1);
                        m
                    })
                    .collect(),
                "sl2" => vec![vec![vec![q(1), q(0)], vec![q(0), q(-1)]], unit(2, 0, 1), unit(2, 1, 0)],
                "heisenberg3" => vec![unit(3, 0, 1), unit(3, 1, 2), unit(3, 0, 2)],
                _ => {
                    return Err(Error::Precondition(format!(
                        "no built-in representation for {}",
                        algebra.name().unwrap_or("an unnamed algebra")
                    )))
                }
            }
        };
        Representation::new(algebra.clone(), gens)
    }

    pub fn algebra(&self) -> &LieAlgebra {
        &self.algebra
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn generators(&self) -> &[Matrix] {
        &self.generators
    }

    pub fn matrix_of(&self, v: &AlgebraVector) -> Matrix {
        let mut m = vec![vec![Q::zero(); self.size]; self.size];
        for (c, g) in v.0.iter().zip(&self.generators) {
            if c.is_zero() {
                continue;
            }
            for (r, row) in m.iter_mut().enumerate() {
                for (s, x) in row.iter_mut().enumerate() {
                    *x += c * &g[r][s];
                }
            }
        }
        m
    }

    /// The vector `ξ` with `ρ(ξ) = m`.
    pub fn vector_of(&self, m: &Matrix) -> Result<AlgebraVector> {
        let n = self.algebra.dim();
        let v = AlgebraVector(
            (0..n)
                .map(|i| self.selected.iter().enumerate().fold(Q::zero(), |acc, (s, &(a, b))| acc + &self.solve[i][s] * &m[a][b]))
                .collect(),
        );
        if self.matrix_of(&v) != *m {
            return Err(Error::NotInRepresentation);
        }
        Ok(v)
    }

    pub fn form_matrix(&self, a: &LieValuedForm) -> FormMatrix {
        let m = a.chart_dim();
        let mut out = vec![vec![ChartForm::zero(m); self.size]; self.size];
        for (comp, g) in a.components.iter().zip(&self.generators) {
            if comp.is_zero() {
                continue;
            }
            for (r, row) in out.iter_mut().enumerate() {
                for (s, x) in row.iter_mut().enumerate() {
                    if !g[r][s].is_zero() {
                        *x = x.add(&comp.scale(&g[r][s]));
                    }
                }
            }
        }
        out
    }

    /// Reads a matrix of forms back as a `g`-valued form.
    pub fn decompose(&self, mat: &FormMatrix, chart_dim: usize) -> Result<LieValuedForm> {
        let n = self.algebra.dim();
        let components: Vec<ChartForm> = (0..n)
            .map(|i| {
                self.selected.iter().enumerate().fold(ChartForm::zero(chart_dim), |acc, (s, &(a, b))| {
                    if self.solve[i][s].is_zero() {
                        acc
                    } else {
                        acc.add(&mat[a][b].scale(&self.solve[i][s]))
                    }
                })
            })
            .collect();
        let out = LieValuedForm { algebra: self.algebra.clone(), components };
        if self.form_matrix(&out) != *mat {
            return Err(Error::NotInRepresentation);
        }
        Ok(out)
    }
}

fn poly_mul(a: &PolyMatrix, b: &PolyMatrix) -> PolyMatrix {
    let r = a.len();
    (0..r)
        .map(|i| {
            (0..b[0].len())
                .map(|j| (0..b.len()).fold(Poly::zero(a[i][0].nvars()), |acc, k| acc.add(&a[i][k].mul(&b[k][j]))))
                .collect()
        })
        .collect()
}

fn poly_form_mul(a: &PolyMatrix, b: &FormMatrix, m: usize) -> FormMatrix {
    (0..a.len())
        .map(|i| {
            (0..b[0].len())
                .map(|j| {
                    (0..b.len()).fold(ChartForm::zero(m), |acc, k| {
                        if a[i][k].is_zero() || b[k][j].is_zero() {
                            acc
                        } else {
                            acc.add(&b[k][j].mul_function(&a[i][k]))
                        }
                    })
                })
                .collect()
        })
        .collect()
}

fn form_poly_mul(a: &FormMatrix, b: &PolyMatrix, m: usize) -> FormMatrix {
    (0..a.len())
        .map(|i| {
            (0..b[0].len())
                .map(|j| {
                    (0..b.len()).fold(ChartForm::zero(m), |acc, k| {
                        if a[i][k].is_zero() || b[k][j].is_zero() {
                            acc
                        } else {
                            acc.add(&a[i][k].mul_function(&b[k][j]))
                        }
                    })
                })
                .collect()
        })
        .collect()
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GaugeKind {
    Constant,
    Unipotent,
}

/// A map `g: ℝ^m → G` given through a representation, with its exact inverse.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GaugeTransform {
    kind: GaugeKind,
    rep: Representation,
    chart_dim: usize,
    matrix: PolyMatrix,
    inverse: PolyMatrix,
}

impl GaugeTransform {
    /// A constant group element; it must normalize the represented algebra.
    pub fn constant(rep: Representation, g: Matrix, chart_dim: usize) -> Result<Self> {
        let r = rep.size;
        if g.len() != r || g.iter().any(|row| row.len() != r) {
            return Err(Error::DimensionMismatch { expected: r, got: g.len() });
        }
        if determinant(&g).is_zero() {
            return Err(Error::Singular);
        }
        let ginv = inverse(&g).ok_or(Error::Singular)?;
        for x in &rep.generators {
            if rep.vector_of(&mat_mul(&mat_mul(&ginv, x), &g)).is_err() {
                return Err(Error::InvalidGauge("constant matrix does not normalize the represented algebra".into()));
            }
        }
        let lift = |m: &Matrix| -> PolyMatrix { m.iter().map(|row| row.iter().map(|c| Poly::constant(chart_dim, c.clone())).collect()).collect() };
        Ok(GaugeTransform { kind: GaugeKind::Constant, chart_dim, matrix: lift(&g), inverse: lift(&ginv), rep })
    }

    /// `I + N` with `N` strictly upper triangular; the inverse is `Σ_k (−N)^k`.
    pub fn unipotent(rep: Representation, g: PolyMatrix) -> Result<Self> {
        let r = rep.size;
        if g.len() != r || g.iter().any(|row| row.len() != r) {
            return Err(Error::DimensionMismatch { expected: r, got: g.len() });
        }
        let chart_dim = g.first().and_then(|row| row.first()).map_or(0, Poly::nvars);
        if g.iter().flatten().any(|p| p.nvars() != chart_dim) {
            return Err(Error::InvalidGauge("entries live on different charts".into()));
        }
        let mut neg_n = vec![vec![Poly::zero(chart_dim); r]; r];
        for a in 0..r {
            for b in 0..r {
                let e = &g[a][b];
                if a == b {
                    if *e != Poly::one(chart_dim) {
                        return Err(Error::InvalidGauge("unipotent matrix needs unit diagonal".into()));
                    }
                } else if a > b {
                    if !e.is_zero() {
                        return Err(Error::InvalidGauge("unipotent matrix must be upper triangular".into()));
                    }
                } else {
                    neg_n[a][b] = e.neg();
                }
            }
        }
        let id: PolyMatrix =
            (0..r).map(|a| (0..r).map(|b| if a == b { Poly::one(chart_dim) } else { Poly::zero(chart_dim) }).collect()).collect();
        let mut inv = id.clone();
        let mut power = id;
        for _ in 1..r {
            power = poly_mul(&power, &neg_n);
            for a in 0..r {
                for b in 0..r {
                    inv[a][b] = inv[a][b].add(&power[a][b]);
                }
            }
        }
        let out = GaugeTransform { kind: GaugeKind::Unipotent, rep, chart_dim, matrix: g, inverse: inv };
        out.maurer_cartan_form().map_err(|_| Error::InvalidGauge("g⁻¹dg leaves the represented algebra".into()))?;
        for i in 0..out.rep.algebra.dim() {
            let x = LieValuedForm {
                algebra: out.rep.algebra.clone(),
                components: (0..out.rep.algebra.dim())
                    .map(|j| ChartForm::constant(chart_dim, if i == j { Q::one() } else { Q::zero() }))
                    .collect(),
            };
            out.adjoint_inverse(&x).map_err(|_| Error::InvalidGauge("conjugation leaves the represented algebra".into()))?;
        }
        Ok(out)
    }

    pub fn identity(rep: Representation, chart_dim: usize) -> Self {
        let r = rep.size;
        GaugeTransform::constant(rep, identity(r), chart_dim).expect("identity is a gauge")
    }

    pub fn kind(&self) -> GaugeKind {
        self.kind
    }

    pub fn representation(&self) -> &Representation {
        &self.rep
    }

    pub fn chart_dim(&self) -> usize {
        self.chart_dim
    }

    pub fn matrix(&self) -> &PolyMatrix {
        &self.matrix
    }

    pub fn inverse(&self) -> &PolyMatrix {
        &self.inverse
    }

    /// `g⁻¹dg` as a matrix of 1-forms.
    pub fn maurer_cartan(&self) -> FormMatrix {
        let dg: FormMatrix = self.matrix.iter().map(|row| row.iter().map(|p| ChartForm::function(p.clone()).d()).collect()).collect();
        poly_form_mul(&self.inverse, &dg, self.chart_dim)
    }

    /// `g⁻¹dg` read back in `g`.
    pub fn maurer_cartan_form(&self) -> Result<LieValuedForm> {
        self.rep.decompose(&self.maurer_cartan(), self.chart_dim)
    }

    /// `Ad_{g⁻¹} B = g⁻¹ B g`.
    pub fn adjoint_inverse(&self, b: &LieValuedForm) -> Result<LieValuedForm> {
        self.compatible(b)?;
        let bm = self.rep.form_matrix(b);
        let conj = form_poly_mul(&poly_form_mul(&self.inverse, &bm, self.chart_dim), &self.matrix, self.chart_dim);
        self.rep.decompose(&conj, self.chart_dim)
    }

    fn compatible(&self, a: &LieValuedForm) -> Result<()> {
        if !self.rep.algebra.same_structure(&a.algebra) {
            return Err(Error::InvalidGauge("representation belongs to a different algebra".into()));
        }
        if a.chart_dim() != self.chart_dim {
            return Err(Error::DimensionMismatch { expected: self.chart_dim, got: a.chart_dim() });
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        let mat = |m: &PolyMatrix| -> Vec<Vec<String>> { m.iter().map(|row| row.iter().map(|p| p.to_string()).collect()).collect() };
        json!({ "kind": self.kind, "chart_dim": self.chart_dim, "matrix": mat(&self.matrix), "inverse": mat(&self.inverse) })
    }
}

/// `A·g = g⁻¹dg + g⁻¹Ag`.
pub fn gauge_transform(a: &LieValuedForm, g: &GaugeTransform) -> Result<LieValuedForm> {
    g.compatible(a)?;
    let am = g.rep.form_matrix(a);
    let conj = form_poly_mul(&poly_form_mul(&g.inverse, &am, g.chart_dim), &g.matrix, g.chart_dim);
    let mc = g.maurer_cartan();
    let total: FormMatrix = conj.iter().zip(&mc).map(|(r, s)| r.iter().zip(s).map(|(x, y)| x.add(y)).collect()).collect();
    g.rep.decompose(&total, g.chart_dim)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::invariant_basis;
    use crate::weil::{curvature_generator, WeilMonomial};

    fn x(m: usize, i: usize) -> Poly {
        Poly::var(m, i)
    }

    fn one_form(m: usize, terms: &[(Poly, usize)]) -> ChartForm {
        terms.iter().fold(ChartForm::zero(m), |acc, (p, i)| acc.add(&ChartForm::basic(p.clone(), &[*i])))
    }

    fn casimir() -> SymElement {
        SymElement::sum_of_squares(3)
    }

    #[test]
    fn abelian_curvature_is_da() {
        let l = LieAlgebra::builtin("abelian(1)").unwrap();
        let a = LieValuedForm::new(l, vec![one_form(2, &[(x(2, 0), 1)])]).unwrap();
        let f = curvature(&a).unwrap();
        assert_eq!(f.component(0), &ChartForm::basic(Poly::one(2), &[0, 1]));
        let z = LieValuedForm::zero(LieAlgebra::builtin("su2").unwrap(), 3);
        assert!(curvature(&z).unwrap().is_zero());
    }

    #[test]
    fn su2_curvature_example() {
        let l = LieAlgebra::builtin("su2").unwrap();
        let a = LieValuedForm::new(
            l,
            vec![one_form(3, &[(x(3, 0), 1)]), one_form(3, &[(x(3, 1), 2)]), ChartForm::zero(3)],
        )
        .unwrap();
        let f = curvature(&a).unwrap();
        let one = Poly::one(3);
        assert_eq!(f.component(0), &ChartForm::basic(one.clone(), &[0, 1]));
        assert_eq!(f.component(1), &ChartForm::basic(one, &[1, 2]));
        assert_eq!(f.component(2), &ChartForm::basic(x(3, 0).mul(&x(3, 1)), &[1, 2]));
        // dA + ½[A, A] with the full double sum
        let half = a.bracket(&a).unwrap();
        let oracle: Vec<ChartForm> =
            a.d().components.iter().zip(half.components()).map(|(d, b)| d.add(&b.scale(&crate::rational::frac(1, 2)))).collect();
        assert_eq!(f.components(), &oracle[..]);
    }

    #[test]
    fn curvature_rejects_non_one_forms() {
        let l = LieAlgebra::builtin("abelian(1)").unwrap();
        let a = LieValuedForm::new(l, vec![ChartForm::function(x(2, 0))]).unwrap();
        assert!(matches!(curvature(&a), Err(Error::DegreeMismatch(_))));
    }

    #[test]
    fn cw_examples() {
        let a1 = LieAlgebra::builtin("abelian(1)").unwrap();
        let lin = SymElement::new(WeilElement::lambda_tilde(1, 0)).unwrap();
        let a = LieValuedForm::new(a1.clone(), vec![one_form(2, &[(x(2, 0), 1)])]).unwrap();
        assert_eq!(cw_form(&lin, &a).unwrap(), ChartForm::basic(Poly::one(2), &[0, 1]));

        let sq = SymElement::sum_of_squares(1);
        let a = LieValuedForm::new(a1, vec![one_form(4, &[(x(4, 0), 1), (x(4, 2), 3)])]).unwrap();
        assert_eq!(cw_form(&sq, &a).unwrap(), ChartForm::basic(Poly::constant(4, q(2)), &[0, 1, 2, 3]));

        let su2 = LieAlgebra::builtin("su2").unwrap();
        let a = LieValuedForm::new(
            su2,
            vec![one_form(4, &[(x(4, 0), 1), (x(4, 2), 3)]), one_form(4, &[(x(4, 1), 2)]), ChartForm::zero(4)],
        )
        .unwrap();
        let got = cw_form(&casimir(), &a).unwrap();
        assert_eq!(got, ChartForm::basic(Poly::constant(4, q(2)), &[0, 1, 2, 3]));
        let f = curvature(&a).unwrap();
        let direct = (0..3).fold(ChartForm::zero(4), |acc, i| acc.add(&f.component(i).wedge(f.component(i)).unwrap()));
        assert_eq!(got, direct);
    }

    #[test]
    fn cw_rejects_inhomogeneous_polynomials() {
        let l = LieAlgebra::builtin("abelian(1)").unwrap();
        let p = SymElement::new(WeilElement::lambda_tilde(1, 0).add(&WeilElement::one(1))).unwrap();
        let a = LieValuedForm::zero(l, 2);
        assert!(matches!(cw_form(&p, &a), Err(Error::NotHomogeneous(_))));
    }

    #[test]
    fn polarization_is_symmetric_and_multilinear() {
        let l = LieAlgebra::builtin("su2").unwrap();
        let p = SymElement::new(WeilElement::monomial(WeilMonomial { ext: 0, sym: vec![1, 1, 0] }, q(1))).unwrap();
        let b = LieValuedForm::new(
            l.clone(),
            vec![ChartForm::basic(x(4, 0), &[0, 1]), ChartForm::zero(4), ChartForm::basic(Poly::one(4), &[2, 3])],
        )
        .unwrap();
        let c = LieValuedForm::new(
            l,
            vec![ChartForm::zero(4), ChartForm::basic(Poly::one(4), &[2, 3]), ChartForm::basic(x(4, 1), &[0, 1])],
        )
        .unwrap();
        let bc = polarize(&p, &[&b, &c]).unwrap();
        assert_eq!(bc, polarize(&p, &[&c, &b]).unwrap());
        // P = λ̃¹λ̃², so P̃(B, C) = ½(B¹∧C² + B²∧C¹).
        let oracle = b.component(0).wedge(c.component(1)).unwrap().add(&b.component(1).wedge(c.component(0)).unwrap());
        assert_eq!(bc, oracle.scale(&crate::rational::frac(1, 2)));
    }

    #[test]
    fn weil_bridge_on_a_fixed_connection() {
        let l = LieAlgebra::builtin("su2").unwrap();
        let a = LieValuedForm::new(
            l.clone(),
            vec![
                one_form(3, &[(x(3, 0).mul(&x(3, 1)), 2)]),
                one_form(3, &[(x(3, 2), 0), (Poly::one(3), 1)]),
                one_form(3, &[(x(3, 1), 0)]),
            ],
        )
        .unwrap();
        let f = curvature(&a).unwrap();
        for i in 0..3 {
            let omega = curvature_generator(&l, i).unwrap();
            assert_eq!(&universal_substitution(&omega, &a).unwrap(), f.component(i));
        }
        let p = invariant_basis(&l, 2).unwrap().remove(0);
        let via_weil = universal_substitution(&crate::invariants::to_weil_basic(&l, &p).unwrap(), &a).unwrap();
        assert_eq!(via_weil, cw_form(&p, &a).unwrap());
    }

    #[test]
    fn builtin_representations_validate() {
        for name in ["abelian(1)", "abelian(3)", "su2", "so3", "sl2", "heisenberg3"] {
            let l = LieAlgebra::builtin(name).unwrap();
            let rep = Representation::builtin(&l).unwrap();
            for i in 0..l.dim() {
                let v = AlgebraVector::basis(l.dim(), i);
                assert_eq!(rep.vector_of(&rep.matrix_of(&v)).unwrap(), v);
            }
        }
        let l = LieAlgebra::builtin("su2").unwrap();
        let bad = vec![unit(2, 0, 1), unit(2, 1, 0), identity(2)];
        assert!(Representation::new(l, bad).is_err());
    }

    #[test]
    fn additive_gauge_adds_an_exact_form() {
        let l = LieAlgebra::builtin("abelian(1)").unwrap();
        let rep = Representation::builtin(&l).unwrap();
        let phi = x(2, 0).mul(&x(2, 1));
        let g = GaugeTransform::unipotent(rep, vec![vec![Poly::one(2), phi.clone()], vec![Poly::zero(2), Poly::one(2)]])
            .unwrap();
        let a = LieValuedForm::new(l, vec![one_form(2, &[(x(2, 0).pow(2), 0)])]).unwrap();
        let got = gauge_transform(&a, &g).unwrap();
        let expected = a.component(0).add(&one_form(2, &[(x(2, 1), 0), (x(2, 0), 1)]));
        assert_eq!(got.component(0), &expected);
    }

    #[test]
    fn unipotent_maurer_cartan_matrix() {
        let l = LieAlgebra::builtin("abelian(1)").unwrap();
        let rep = Representation::builtin(&l).unwrap();
        let g = GaugeTransform::unipotent(rep, vec![vec![Poly::one(2), x(2, 0)], vec![Poly::zero(2), Poly::one(2)]])
            .unwrap();
        let mc = g.maurer_cartan();
        assert_eq!(mc[0][1], ChartForm::dx(2, 0));
        assert!(mc[0][0].is_zero() && mc[1][0].is_zero() && mc[1][1].is_zero());
        let a = LieValuedForm::zero(l, 2);
        assert_eq!(gauge_transform(&a, &g).unwrap().component(0), &ChartForm::dx(2, 0));
    }

    #[test]
    fn constant_gauge_is_adjoint_action() {
        let l = LieAlgebra::builtin("su2").unwrap();
        let rep = Representation::builtin(&l).unwrap();
        // rotation by a quarter turn about e3
        let r = vec![vec![q(0), q(-1), q(0)], vec![q(1), q(0), q(0)], vec![q(0), q(0), q(1)]];
        let g = GaugeTransform::constant(rep, r, 3).unwrap();
        let a = LieValuedForm::new(
            l,
            vec![one_form(3, &[(x(3, 0), 1)]), ChartForm::zero(3), one_form(3, &[(x(3, 1), 2)])],
        )
        .unwrap();
        let got = gauge_transform(&a, &g).unwrap();
        assert_eq!(got, g.adjoint_inverse(&a).unwrap());
        assert!(got.component(0).is_zero());
        assert_eq!(got.component(1), &a.component(0).scale(&q(-1)));
        assert_eq!(got.component(2), a.component(2));
        assert_eq!(cw_form(&casimir(), &got).unwrap(), cw_form(&casimir(), &a).unwrap());
    }

    #[test]
    fn gauge_errors() {
        let l = LieAlgebra::builtin("sl2").unwrap();
        let rep = Representation::builtin(&l).unwrap();
        assert_eq!(
            GaugeTransform::constant(rep.clone(), vec![vec![q(1), q(2)], vec![q(2), q(4)]], 2),
            Err(Error::Singular)
        );
        let lower = vec![vec![Poly::one(2), Poly::zero(2)], vec![x(2, 0), Poly::one(2)]];
        assert!(matches!(GaugeTransform::unipotent(rep, lower), Err(Error::InvalidGauge(_))));
        let su2 = LieAlgebra::builtin("su2").unwrap();
        let srep = Representation::builtin(&su2).unwrap();
        let shear = vec![vec![q(1), q(1), q(0)], vec![q(0), q(1), q(0)], vec![q(0), q(0), q(1)]];
        assert!(matches!(GaugeTransform::constant(srep, shear, 2), Err(Error::InvalidGauge(_))));
    }

    #[test]
    fn connection_json_round_trip() {
        let v = serde_json::json!({
            "algebra": "su2",
            "chart_dim": 3,
            "components": [
                {"dim": 3, "terms": [{"dx": [2], "mono": [1, 0, 0], "c": "1"}]},
                {"dim": 3, "terms": []},
                {"dim": 3, "terms": [{"dx": [3], "mono": [0, 1, 0], "c": "-1/2"}]}
            ]
        });
        let a = LieValuedForm::from_json(&v).unwrap();
        assert_eq!(LieValuedForm::from_json(&a.to_json()).unwrap(), a);
        assert_eq!(a.chart_dim(), 3);
    }
}
