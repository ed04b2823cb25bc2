//! Braiding matrices, generalized Dynkin diagrams and the character tests
//! that decide which relations may be deformed.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::freealg::{bicharacter, MultiDegree};
use crate::scalars::{FieldElem, FieldRef};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BraidingError {
    #[error("braiding matrix is not square")]
    NotSquare,
    #[error("entry q({i},{j}) is zero")]
    ZeroEntry { i: usize, j: usize },
    #[error("entry q({i},{j}) is not a root of unity")]
    NotRootOfUnity { i: usize, j: usize },
    #[error("entry q({i},{j}) lies in Q(z_{found}), expected Q(z_{expected})")]
    WrongField {
        i: usize,
        j: usize,
        found: u32,
        expected: u32,
    },
    #[error("the zero degree has no character")]
    ZeroDegree,
    #[error("degree has length {found}, expected {expected}")]
    DimensionMismatch { found: usize, expected: usize },
    #[error("no root-vector degrees declared")]
    MissingRootData,
}

/// `q = (q_ij)`, indices zero-based.
#[derive(Clone, PartialEq, Eq)]
pub struct BraidingMatrix {
    field: FieldRef,
    theta: usize,
    entries: Vec<FieldElem>,
}

impl BraidingMatrix {
    pub fn new(field: &FieldRef, rows: Vec<Vec<FieldElem>>) -> Result<Self, BraidingError> {
        let theta = rows.len();
        if rows.iter().any(|r| r.len() != theta) {
            return Err(BraidingError::NotSquare);
        }
        let mut entries = Vec::with_capacity(theta * theta);
        for (i, row) in rows.into_iter().enumerate() {
            for (j, e) in row.into_iter().enumerate() {
                if e.field().order() != field.order() {
                    return Err(BraidingError::WrongField {
                        i,
                        j,
                        found: e.field().order(),
                        expected: field.order(),
                    });
                }
                match e.multiplicative_order() {
                    Err(_) => return Err(BraidingError::ZeroEntry { i, j }),
                    Ok(None) => return Err(BraidingError::NotRootOfUnity { i, j }),
                    Ok(Some(_)) => entries.push(e),
                }
            }
        }
        Ok(BraidingMatrix {
            field: field.clone(),
            theta,
            entries,
        })
    }

    /// Matrix with entries `z^k[i][j]`.
    pub fn from_exponents(field: &FieldRef, exps: &[Vec<i64>]) -> Result<Self, BraidingError> {
        let rows = exps
            .iter()
            .map(|r| r.iter().map(|&k| FieldElem::root(field, k)).collect())
            .collect();
        Self::new(field, rows)
    }

    pub fn field(&self) -> &FieldRef {
        &self.field
    }

    pub fn theta(&self) -> usize {
        self.theta
    }

    pub fn get(&self, i: usize, j: usize) -> &FieldElem {
        &self.entries[i * self.theta + j]
    }

    /// `q_ij^e`.
    pub fn power(&self, i: usize, j: usize, e: i64) -> FieldElem {
        self.get(i, j)
            .pow(e)
            .expect("braiding entries are nonzero")
    }

    /// `q~_ij = q_ij q_ji`.
    pub fn q_tilde(&self, i: usize, j: usize) -> FieldElem {
        self.get(i, j) * self.get(j, i)
    }

    pub fn rows(&self) -> Vec<Vec<FieldElem>> {
        (0..self.theta)
            .map(|i| (0..self.theta).map(|j| self.get(i, j).clone()).collect())
            .collect()
    }

    /// The matrix `(q_{sigma(i) sigma(j)})`.
    pub fn permuted(&self, sigma: &[usize]) -> BraidingMatrix {
        let n = self.theta;
        let entries = (0..n * n)
            .map(|k| self.get(sigma[k / n], sigma[k % n]).clone())
            .collect();
        BraidingMatrix {
            field: self.field.clone(),
            theta: n,
            entries,
        }
    }

    /// Principal minor on the given indices, in the given order.
    pub fn minor(&self, keep: &[usize]) -> BraidingMatrix {
        let n = keep.len();
        let entries = (0..n * n)
            .map(|k| self.get(keep[k / n], keep[k % n]).clone())
            .collect();
        BraidingMatrix {
            field: self.field.clone(),
            theta: n,
            entries,
        }
    }

    pub(crate) fn set(&mut self, i: usize, j: usize, v: FieldElem) {
        let n = self.theta;
        self.entries[i * n + j] = v;
    }
}

impl fmt::Debug for BraidingMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.theta {
            if i > 0 {
                f.write_str("; ")?;
            }
            for j in 0..self.theta {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        f.write_str("]")
    }
}

/// Vertex and edge labels of the generalized Dynkin diagram.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DynkinDiagram {
    pub vertices: Vec<FieldElem>,
    /// `(i, j) -> q~_ij` for `i < j` with `q~_ij != 1`.
    pub edges: BTreeMap<(usize, usize), FieldElem>,
    /// Connected components, each sorted, ordered by least vertex.
    pub components: Vec<Vec<usize>>,
}

impl DynkinDiagram {
    pub fn component_of(&self, i: usize) -> usize {
        self.components
            .iter()
            .position(|c| c.contains(&i))
            .expect("every vertex lies in a component")
    }

    pub fn connected(&self, i: usize, j: usize) -> bool {
        self.component_of(i) == self.component_of(j)
    }

    pub fn is_edge(&self, i: usize, j: usize) -> bool {
        self.edges.contains_key(&(i.min(j), i.max(j)))
    }
}

pub fn diagram(q: &BraidingMatrix) -> DynkinDiagram {
    let n = q.theta();
    let vertices = (0..n).map(|i| q.get(i, i).clone()).collect();
    let mut edges = BTreeMap::new();
    for i in 0..n {
        for j in i + 1..n {
            let t = q.q_tilde(i, j);
            if !t.is_one() {
                edges.insert((i, j), t);
            }
        }
    }
    // union-find over the edge list
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for &(i, j) in edges.keys() {
        let (a, b) = (find(&mut parent, i), find(&mut parent, j));
        if a != b {
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut by_root: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for v in 0..n {
        let r = find(&mut parent, v);
        by_root.entry(r).or_default().push(v);
    }
    DynkinDiagram {
        vertices,
        edges,
        components: by_root.into_values().collect(),
    }
}

fn check_len(q: &BraidingMatrix, alpha: &MultiDegree) -> Result<(), BraidingError> {
    if alpha.theta() != q.theta() {
        return Err(BraidingError::DimensionMismatch {
            found: alpha.theta(),
            expected: q.theta(),
        });
    }
    Ok(())
}

/// `chi_alpha(g_j) = prod_i q_ji^(alpha_i)`.
pub fn chi_eval(q: &BraidingMatrix, alpha: &MultiDegree, j: usize) -> FieldElem {
    let mut acc = FieldElem::one(q.field());
    for (i, &a) in alpha.0.iter().enumerate() {
        if a != 0 {
            acc = &acc * &q.power(j, i, a as i64);
        }
    }
    acc
}

/// Whether `chi_alpha` is trivial on every `g_j`.
pub fn is_admissible(q: &BraidingMatrix, alpha: &MultiDegree) -> Result<bool, BraidingError> {
    check_len(q, alpha)?;
    if alpha.is_zero() {
        return Err(BraidingError::ZeroDegree);
    }
    Ok((0..q.theta()).all(|j| chi_eval(q, alpha, j).is_one()))
}

/// Pairs `i < j` in different components with `chi_i chi_j = eps`.
pub fn linkable_pairs(q: &BraidingMatrix) -> BTreeSet<(usize, usize)> {
    let d = diagram(q);
    let n = q.theta();
    let mut out = BTreeSet::new();
    for i in 0..n {
        for j in i + 1..n {
            if d.connected(i, j) {
                continue;
            }
            let mut a = MultiDegree::zero(n);
            a.0[i] = 1;
            a.0[j] = 1;
            if (0..n).all(|k| chi_eval(q, &a, k).is_one()) {
                out.insert((i, j));
            }
        }
    }
    out
}

/// Order of `chi(beta, beta)` for each declared root-vector degree.
pub fn cartan_roots_orders(
    q: &BraidingMatrix,
    roots: Option<&[MultiDegree]>,
) -> Result<BTreeMap<MultiDegree, u32>, BraidingError> {
    let roots = match roots {
        Some(r) if !r.is_empty() => r,
        _ => return Err(BraidingError::MissingRootData),
    };
    let mut out = BTreeMap::new();
    for beta in roots {
        check_len(q, beta)?;
        let c = bicharacter(q, beta, beta);
        let ord = c
            .multiplicative_order()
            .expect("characters of roots of unity are nonzero")
            .expect("products of roots of unity are roots of unity");
        out.insert(beta.clone(), ord);
    }
    Ok(out)
}

impl fmt::Display for DynkinDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.vertices.iter().enumerate() {
            writeln!(f, "vertex {} : {}", i + 1, v)?;
        }
        for ((i, j), t) in &self.edges {
            writeln!(f, "edge {} - {} : {}", i + 1, j + 1, t)?;
        }
        for (k, c) in self.components.iter().enumerate() {
            write!(f, "component {} :", k + 1)?;
            for v in c {
                write!(f, " {}", v + 1)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Unit vector helper for callers building degrees by hand.
pub fn unit_degree(theta: usize, i: usize) -> MultiDegree {
    let mut d = vec![0; theta];
    d[i] = 1;
    MultiDegree(d)
}
