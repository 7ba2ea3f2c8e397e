//! Finite-dimensional real Lie algebras given by structure constants.
//!
//! The table stores `[e_i, e_j] = Σ_k f^k_{ij} e_k`, indexed `(i, j, k)`,
//! all indices zero-based in memory and one-based on the wire.

use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::rational::{parse_q, q, serde_q, Q};

#[derive(Clone, PartialEq, Eq)]
pub struct LieAlgebra {
    dim: usize,
    structure: Vec<Q>,
    name: Option<String>,
}

/// A vector `ξ ∈ g` in the basis `{e_i}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AlgebraVector(pub Vec<Q>);

impl AlgebraVector {
    pub fn zero(n: usize) -> Self {
        AlgebraVector(vec![Q::zero(); n])
    }

    pub fn basis(n: usize, i: usize) -> Self {
        let mut v = Self::zero(n);
        v.0[i] = q(1);
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, c: &Q) -> Self {
        AlgebraVector(self.0.iter().map(|x| x * c).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        AlgebraVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

/// First identity that fails in [`LieAlgebra::validate`]; indices one-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Antisymmetry { i: usize, j: usize, k: usize },
    Jacobi { i: usize, j: usize, k: usize, l: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Antisymmetry { i, j, k } => {
                write!(f, "antisymmetry fails at ({i},{j},{k})")
            }
            Violation::Jacobi { i, j, k, l } => {
                write!(f, "Jacobi identity fails at ({i},{j},{k},{l})")
            }
        }
    }
}

impl LieAlgebra {
    /// Builds an algebra from a full `n³` table without validating it.
    pub fn from_table(dim: usize, structure: Vec<Q>, name: Option<String>) -> Result<Self> {
        if structure.len() != dim * dim * dim {
            return Err(Error::DimensionMismatch { expected: dim * dim * dim, got: structure.len() });
        }
        Ok(LieAlgebra { dim, structure, name })
    }

    /// Builds an algebra from brackets `[e_i, e_j] = Σ c e_k` with `i < j`,
    /// filling in the antisymmetric partner. Zero-based indices.
    pub fn from_brackets(dim: usize, brackets: &[(usize, usize, usize, Q)], name: Option<&str>) -> Result<Self> {
        let mut structure = vec![Q::zero(); dim * dim * dim];
        for (i, j, k, c) in brackets {
            for &idx in [i, j, k] {
                if idx >= dim {
                    return Err(Error::IndexOutOfRange { index: idx + 1, dim });
                }
            }
            if i >= j {
                return Err(Error::InvalidAlgebra(format!(
                    "bracket entries must have i < j, got ({}, {})",
                    i + 1,
                    j + 1
                )));
            }
            structure[(i * dim + j) * dim + k] += c;
            structure[(j * dim + i) * dim + k] -= c;
        }
        Ok(LieAlgebra { dim, structure, name: name.map(str::to_string) })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    /// `f^k_{ij}`.
    pub fn f(&self, i: usize, j: usize, k: usize) -> &Q {
        &self.structure[(i * self.dim + j) * self.dim + k]
    }

    /// Equality of structure constants, ignoring the name.
    pub fn same_structure(&self, other: &LieAlgebra) -> bool {
        self.dim == other.dim && self.structure == other.structure
    }

    pub fn is_abelian(&self) -> bool {
        self.structure.iter().all(Zero::is_zero)
    }

    pub fn validate(&self) -> std::result::Result<(), Violation> {
        let n = self.dim;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if *self.f(i, j, k) != -self.f(j, i, k) {
                        return Err(Violation::Antisymmetry { i: i + 1, j: j + 1, k: k + 1 });
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let mut s = Q::zero();
                        for m in 0..n {
                            s += self.f(i, j, m) * self.f(m, k, l)
                                + self.f(j, k, m) * self.f(m, i, l)
                                + self.f(k, i, m) * self.f(m, j, l);
                        }
                        if !s.is_zero() {
                            return Err(Violation::Jacobi { i: i + 1, j: j + 1, k: k + 1, l: l + 1 });
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn check(&self, xi: &AlgebraVector) -> Result<()> {
        if xi.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: xi.dim() });
        }
        Ok(())
    }

    pub fn bracket(&self, xi: &AlgebraVector, eta: &AlgebraVector) -> Result<AlgebraVector> {
        self.check(xi)?;
        self.check(eta)?;
        let n = self.dim;
        let mut out = AlgebraVector::zero(n);
        for i in (0..n).filter(|&i| !xi.0[i].is_zero()) {
            for j in (0..n).filter(|&j| !eta.0[j].is_zero()) {
                let c = &xi.0[i] * &eta.0[j];
                for k in 0..n {
                    let fk = self.f(i, j, k);
                    if !fk.is_zero() {
                        out.0[k] += &c * fk;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Matrix of `ad_ξ = [ξ, ·]` acting on coordinates: `M[k][j] = Σ_i ξ^i f^k_{ij}`.
    pub fn adjoint(&self, xi: &AlgebraVector) -> Result<Matrix> {
        self.check(xi)?;
        let n = self.dim;
        let mut m = vec![vec![Q::zero(); n]; n];
        for (k, row) in m.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                for i in 0..n {
                    if !xi.0[i].is_zero() {
                        *cell += &xi.0[i] * self.f(i, j, k);
                    }
                }
            }
        }
        Ok(m)
    }

    /// Infinitesimal coadjoint action on `g*` with `(ad*_ξ λ)(η) = −λ([ξ, η])`.
    ///
    /// Column `j` holds the dual-basis coordinates of `ad*_ξ λ^j`, so
    /// `M[k][j] = −Σ_i ξ^i f^j_{ik}`.
    pub fn coadjoint(&self, xi: &AlgebraVector) -> Result<Matrix> {
        let ad = self.adjoint(xi)?;
        let n = self.dim;
        Ok((0..n).map(|k| (0..n).map(|j| -ad[j][k].clone()).collect()).collect())
    }

    pub fn builtin(name: &str) -> Result<Self> {
        let key: String = name.trim().to_ascii_lowercase().chars().filter(|c| !c.is_whitespace()).collect();
        let alg = if let Some(n) = parse_abelian(&key) {
            if n == 0 {
                return Err(Error::UnknownAlgebra(name.to_string()));
            }
            LieAlgebra::from_brackets(n, &[], Some(&format!("abelian({n})")))?
        } else {
            match key.as_str() {
                "su2" | "so3" => {
                    let label = if key == "su2" { "su2" } else { "so3" };
                    LieAlgebra::from_brackets(
                        3,
                        &[(0, 1, 2, q(1)), (1, 2, 0, q(1)), (0, 2, 1, q(-1))],
                        Some(label),
                    )?
                }
                // basis (h, e, f)
                "sl2" => LieAlgebra::from_brackets(
                    3,
                    &[(0, 1, 1, q(2)), (0, 2, 2, q(-2)), (1, 2, 0, q(1))],
                    Some("sl2"),
                )?,
                "heisenberg3" | "heisenberg" => {
                    LieAlgebra::from_brackets(3, &[(0, 1, 2, q(1))], Some("heisenberg3"))?
                }
                _ => return Err(Error::UnknownAlgebra(name.to_string())),
            }
        };
        alg.validate().map_err(|v| Error::InvalidAlgebra(v.to_string()))?;
        Ok(alg)
    }

    pub fn builtin_names() -> &'static [&'static str] {
        &["abelian(n)", "su2", "so3", "sl2", "heisenberg3"]
    }

    /// The non-zero brackets with `i < j`, zero-based.
    pub fn brackets(&self) -> Vec<(usize, usize, usize, Q)> {
        let n = self.dim;
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for k in 0..n {
                    let c = self.f(i, j, k);
                    if !c.is_zero() {
                        out.push((i, j, k, c.clone()));
                    }
                }
            }
        }
        out
    }

    /// Killing form `B(e_i, e_j) = tr(ad_{e_i} ad_{e_j})`.
    pub fn killing_form(&self) -> Matrix {
        let n = self.dim;
        let ads: Vec<Matrix> = (0..n)
            .map(|i| self.adjoint(&AlgebraVector::basis(n, i)).expect("basis vector"))
            .collect();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let p = crate::linalg::mat_mul(&ads[i], &ads[j]);
                        (0..n).fold(Q::zero(), |acc, t| acc + &p[t][t])
                    })
                    .collect()
            })
            .collect()
    }
}

fn parse_abelian(key: &str) -> Option<usize> {
    let rest = key.strip_prefix("abelian")?;
    let digits = rest.strip_prefix('(').and_then(|r| r.strip_suffix(')')).unwrap_or(rest);
    digits.parse().ok()
}

impl fmt::Debug for LieAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LieAlgebra")
            .field("name", &self.name)
            .field("dim", &self.dim)
            .field("brackets", &self.brackets().len())
            .finish()
    }
}

#[derive(Serialize, Deserialize)]
struct BracketJson {
    i: usize,
    j: usize,
    k: usize,
    #[serde(with = "serde_q")]
    c: Q,
}

#[derive(Serialize, Deserialize)]
struct LieAlgebraJson {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    name: Option<String>,
    dim: usize,
    #[serde(default)]
    brackets: Vec<BracketJson>,
}

impl Serialize for LieAlgebra {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        LieAlgebraJson {
            name: self.name.clone(),
            dim: self.dim,
            brackets: self
                .brackets()
                .into_iter()
                .map(|(i, j, k, c)| BracketJson { i: i + 1, j: j + 1, k: k + 1, c })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for LieAlgebra {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = LieAlgebraJson::deserialize(d)?;
        let mut entries = Vec::with_capacity(raw.brackets.len());
        for b in raw.brackets {
            if b.i == 0 || b.j == 0 || b.k == 0 {
                return Err(D::Error::custom("bracket indices are one-based"));
            }
            entries.push((b.i - 1, b.j - 1, b.k - 1, b.c));
        }
        let alg = LieAlgebra::from_brackets(raw.dim, &entries, raw.name.as_deref()).map_err(D::Error::custom)?;
        alg.validate().map_err(D::Error::custom)?;
        Ok(alg)
    }
}

/// Reads an algebra either from a built-in name or from its JSON form.
pub fn parse_algebra(spec: &str) -> Result<LieAlgebra> {
    let t = spec.trim();
    if t.starts_with('{') {
        serde_json::from_str(t).map_err(|e| Error::Parse(e.to_string()))
    } else {
        LieAlgebra::builtin(t)
    }
}

/// Reads an algebra from a JSON string (built-in name) or object.
pub fn algebra_from_json(v: &serde_json::Value) -> Result<LieAlgebra> {
    match v {
        serde_json::Value::String(s) => LieAlgebra::builtin(s),
        other => serde_json::from_value(other.clone()).map_err(|e| Error::Parse(e.to_string())),
    }
}

/// Parses one rational coordinate list like `["1", "-1/2", "0"]`.
pub fn parse_vector(items: &[&str]) -> Result<AlgebraVector> {
    items.iter().map(|s| parse_q(s)).collect::<Result<Vec<_>>>().map(AlgebraVector)
}
