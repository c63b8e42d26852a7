//! Finite oriented simplicial complexes of dimension at most two.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// `σ_dim(index)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SimplexId {
    pub dim: usize,
    pub index: usize,
}

impl SimplexId {
    pub fn new(dim: usize, index: usize) -> Self {
        SimplexId { dim, index }
    }
}

/// A 2-simplex given by its three boundary branches with orientation signs.
pub type Face = [(usize, i8); 3];

/// Nodes, branches `(tail, head)` with `∂ = head - tail`, and faces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Complex {
    node_labels: Vec<String>,
    branches: Vec<(usize, usize)>,
    branch_labels: Vec<String>,
    faces: Vec<Face>,
    face_labels: Vec<String>,
}

#[derive(Debug, Clone, Default)]
pub struct ComplexBuilder {
    nodes: Vec<String>,
    branches: Vec<(String, String, String)>,
    faces: Vec<(String, FaceSpec)>,
}

#[derive(Debug, Clone)]
enum FaceSpec {
    Edges([(String, i8); 3]),
    Vertices([String; 3]),
}

impl ComplexBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn node(mut self, label: impl Into<String>) -> Self {
        self.nodes.push(label.into());
        self
    }

    pub fn nodes<I, L>(mut self, labels: I) -> Self
    where
        I: IntoIterator<Item = L>,
        L: Into<String>,
    {
        self.nodes.extend(labels.into_iter().map(Into::into));
        self
    }

    pub fn branch(mut self, label: impl Into<String>, tail: impl Into<String>, head: impl Into<String>) -> Self {
        self.branches.push((label.into(), tail.into(), head.into()));
        self
    }

    /// Branch labelled by concatenating its end labels.
    pub fn edge(self, tail: &str, head: &str) -> Self {
        let label = format!("{tail}{head}");
        self.branch(label, tail, head)
    }

    /// Face from three signed branch labels.
    pub fn face(mut self, label: impl Into<String>, edges: [(&str, i8); 3]) -> Self {
        let edges = edges.map(|(l, s)| (l.to_string(), s));
        self.faces.push((label.into(), FaceSpec::Edges(edges)));
        self
    }

    /// Face `a → b → c → a`; the branches joining them are looked up and signed.
    pub fn face_through(mut self, a: &str, b: &str, c: &str) -> Self {
        let label = format!("{a}{b}{c}");
        self.faces.push((label, FaceSpec::Vertices([a.to_string(), b.to_string(), c.to_string()])));
        self
    }

    pub fn build(self) -> Result<Complex> {
        let mut node_index = BTreeMap::new();
        for (i, l) in self.nodes.iter().enumerate() {
            if node_index.insert(l.clone(), i).is_some() {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        let mut branch_index = BTreeMap::new();
        let mut branches = Vec::with_capacity(self.branches.len());
        let mut branch_labels = Vec::with_capacity(self.branches.len());
        for (label, tail, head) in self.branches {
            let t = *node_index.get(&tail).ok_or_else(|| Error::UnknownLabel(tail.clone()))?;
            let h = *node_index.get(&head).ok_or_else(|| Error::UnknownLabel(head.clone()))?;
            if t == h {
                return Err(Error::SelfLoopBranch(label));
            }
            if branch_index.insert(label.clone(), branches.len()).is_some() {
                return Err(Error::DuplicateLabel(label));
            }
            branches.push((t, h));
            branch_labels.push(label);
        }
        let mut faces = Vec::with_capacity(self.faces.len());
        let mut face_labels = Vec::with_capacity(self.faces.len());
        let mut seen_faces = BTreeMap::new();
        for (label, spec) in self.faces {
            let face = match spec {
                FaceSpec::Edges(edges) => {
                    let mut out = [(0usize, 1i8); 3];
                    for (slot, (l, s)) in out.iter_mut().zip(edges) {
                        let b = *branch_index.get(&l).ok_or_else(|| Error::UnknownLabel(l.clone()))?;
                        *slot = (b, if s < 0 { -1 } else { 1 });
                    }
                    out
                }
                FaceSpec::Vertices(vs) => {
                    let mut idx = [0usize; 3];
                    for (slot, v) in idx.iter_mut().zip(&vs) {
                        *slot = *node_index.get(v).ok_or_else(|| Error::UnknownLabel(v.clone()))?;
                    }
                    let mut out = [(0usize, 1i8); 3];
                    for k in 0..3 {
                        let (a, b) = (idx[k], idx[(k + 1) % 3]);
                        out[k] = branches
                            .iter()
                            .position(|&e| e == (a, b))
                            .map(|p| (p, 1))
                            .or_else(|| branches.iter().position(|&e| e == (b, a)).map(|p| (p, -1)))
                            .ok_or_else(|| Error::MissingBranch(vs[k].clone(), vs[(k + 1) % 3].clone()))?;
                    }
                    out
                }
            };
            if !closes(&branches, &face) {
                return Err(Error::NonClosingFace(label));
            }
            if seen_faces.insert(label.clone(), ()).is_some() {
                return Err(Error::DuplicateLabel(label));
            }
            faces.push(face);
            face_labels.push(label);
        }
        let complex = Complex { node_labels: self.nodes, branches, branch_labels, faces, face_labels };
        debug_assert!(complex.boundary_squared_vanishes());
        Ok(complex)
    }
}

fn closes(branches: &[(usize, usize)], face: &Face) -> bool {
    let mut net: BTreeMap<usize, i64> = BTreeMap::new();
    for &(b, s) in face {
        let (t, h) = branches[b];
        *net.entry(h).or_default() += s as i64;
        *net.entry(t).or_default() -= s as i64;
    }
    let distinct = face[0].0 != face[1].0 && face[1].0 != face[2].0 && face[0].0 != face[2].0;
    distinct && net.values().all(|&v| v == 0)
}

/// Indices introduced by [`Complex::cone`]: the apex node and, per original node,
/// the new branch `i → apex`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeMap {
    pub apex: usize,
    pub spokes: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PathKind {
    Path { start: usize, end: usize },
    Loop,
    NotAPath,
}

impl Complex {
    pub fn builder() -> ComplexBuilder {
        ComplexBuilder::new()
    }

    /// Nodes plus branches labelled by concatenated end labels.
    pub fn from_edges(nodes: &[&str], edges: &[(&str, &str)]) -> Result<Complex> {
        edges.iter().fold(ComplexBuilder::new().nodes(nodes.iter().copied()), |b, (t, h)| b.edge(t, h)).build()
    }

    pub fn r(&self, dim: usize) -> usize {
        match dim {
            0 => self.node_labels.len(),
            1 => self.branches.len(),
            2 => self.faces.len(),
            _ => 0,
        }
    }

    pub fn counts(&self) -> [usize; 3] {
        [self.r(0), self.r(1), self.r(2)]
    }

    /// Highest dimension with a simplex (0 for an empty complex).
    pub fn dimension(&self) -> usize {
        if !self.faces.is_empty() {
            2
        } else if !self.branches.is_empty() {
            1
        } else {
            0
        }
    }

    pub fn branches(&self) -> &[(usize, usize)] {
        &self.branches
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn tail(&self, branch: usize) -> usize {
        self.branches[branch].0
    }

    pub fn head(&self, branch: usize) -> usize {
        self.branches[branch].1
    }

    pub fn label(&self, id: SimplexId) -> &str {
        match id.dim {
            0 => &self.node_labels[id.index],
            1 => &self.branch_labels[id.index],
            _ => &self.face_labels[id.index],
        }
    }

    pub fn labels(&self, dim: usize) -> &[String] {
        match dim {
            0 => &self.node_labels,
            1 => &self.branch_labels,
            _ => &self.face_labels,
        }
    }

    pub fn index_of(&self, dim: usize, label: &str) -> Result<usize> {
        self.labels(dim).iter().position(|l| l == label).ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn node(&self, label: &str) -> Result<usize> {
        self.index_of(0, label)
    }

    pub fn branch(&self, label: &str) -> Result<usize> {
        self.index_of(1, label)
    }

    /// Signed faces `(index, ±1)` of the boundary of `σ_dim(index)`.
    pub fn boundary_of(&self, dim: usize, index: usize) -> Vec<(usize, i8)> {
        match dim {
            1 => {
                let (t, h) = self.branches[index];
                vec![(h, 1), (t, -1)]
            }
            2 => self.faces[index].to_vec(),
            _ => Vec::new(),
        }
    }

    /// `r_1 × r_0` matrix with `-1` at the tail and `+1` at the head of each branch.
    pub fn incidence_1(&self) -> Matrix<i64> {
        let mut m = Matrix::filled(self.r(1), self.r(0), 0i64);
        for (a, &(t, h)) in self.branches.iter().enumerate() {
            m.set(a, t, -1);
            m.set(a, h, 1);
        }
        m
    }

    /// `r_2 × r_1` matrix of oriented face boundaries.
    pub fn incidence_2(&self) -> Matrix<i64> {
        let mut m = Matrix::filled(self.r(2), self.r(1), 0i64);
        for (f, face) in self.faces.iter().enumerate() {
            for &(b, s) in face {
                m.set(f, b, s as i64);
            }
        }
        m
    }

    /// Incidence matrix `∂_k` (rows are `k`-simplexes).
    pub fn incidence(&self, k: usize) -> Matrix<i64> {
        match k {
            1 => self.incidence_1(),
            2 => self.incidence_2(),
            _ => Matrix::filled(self.r(k), self.r(k.saturating_sub(1)), 0),
        }
    }

    pub fn boundary_squared_vanishes(&self) -> bool {
        let a2 = self.incidence_2();
        let a1 = self.incidence_1();
        (0..a2.rows()).all(|f| {
            (0..a1.cols()).all(|i| (0..a1.rows()).map(|b| a2.get(f, b) * a1.get(b, i)).sum::<i64>() == 0)
        })
    }

    /// `base`, primed until it differs from every node label.
    pub fn fresh_node_label(&self, base: &str) -> String {
        let mut label = String::from(base);
        while self.node_labels.contains(&label) {
            label.push('\'');
        }
        label
    }

    /// Joins every node to a new apex node by a branch `i → apex`.
    pub fn cone(&self, apex_label: &str) -> Result<(Complex, ConeMap)> {
        if self.node_labels.iter().any(|l| l == apex_label) {
            return Err(Error::DuplicateLabel(apex_label.to_string()));
        }
        let mut out = self.clone();
        let apex = out.node_labels.len();
        out.node_labels.push(apex_label.to_string());
        let mut spokes = Vec::with_capacity(apex);
        for i in 0..apex {
            let mut label = format!("{}{}", self.node_labels[i], apex_label);
            while out.branch_labels.contains(&label) {
                label.push('\'');
            }
            spokes.push(out.branches.len());
            out.branches.push((i, apex));
            out.branch_labels.push(label);
        }
        Ok((out, ConeMap { apex, spokes }))
    }

    /// Node classes of the relation "joined by a path", each sorted, ordered by least member.
    pub fn path_components(&self) -> Vec<Vec<usize>> {
        let mut uf = UnionFind::new(self.r(0));
        for &(t, h) in &self.branches {
            uf.union(t, h);
        }
        uf.classes()
    }

    /// Component index of every node, numbered as in [`Complex::path_components`].
    pub fn component_of(&self) -> Vec<usize> {
        let mut out = vec![0; self.r(0)];
        for (k, class) in self.path_components().iter().enumerate() {
            for &i in class {
                out[i] = k;
            }
        }
        out
    }

    /// Classifies a 1-chain whose coefficients are `±1` (a `-1` traverses the branch backwards).
    pub fn classify_path(&self, coeffs: &[(usize, i64)]) -> Result<PathKind> {
        if coeffs.is_empty() {
            return Err(Error::EmptyChain);
        }
        let mut used = BTreeMap::new();
        for &(b, c) in coeffs {
            if b >= self.r(1) {
                return Err(Error::InvalidSimplex { dim: 1, index: b });
            }
            *used.entry(b).or_insert(0i64) += c;
        }
        used.retain(|_, c| *c != 0);
        if used.is_empty() {
            return Err(Error::EmptyChain);
        }
        if used.values().any(|c| c.abs() != 1) {
            return Ok(PathKind::NotAPath);
        }
        let mut net: BTreeMap<usize, i64> = BTreeMap::new();
        let mut degree: BTreeMap<usize, usize> = BTreeMap::new();
        let mut uf = UnionFind::new(self.r(0));
        for (&b, &c) in &used {
            let (t, h) = self.branches[b];
            *net.entry(h).or_default() += c;
            *net.entry(t).or_default() -= c;
            *degree.entry(t).or_default() += 1;
            *degree.entry(h).or_default() += 1;
            uf.union(t, h);
        }
        let touched: Vec<usize> = degree.keys().copied().collect();
        let root = uf.find(touched[0]);
        if touched.iter().any(|&v| uf.find(v) != root) {
            return Ok(PathKind::NotAPath);
        }
        net.retain(|_, v| *v != 0);
        if net.is_empty() {
            if degree.values().all(|&d| d == 2) {
                return Ok(PathKind::Loop);
            }
            return Ok(PathKind::NotAPath);
        }
        if net.len() == 2 {
            let mut start = None;
            let mut end = None;
            for (&v, &c) in &net {
                match c {
                    1 => end = Some(v),
                    -1 => start = Some(v),
                    _ => {}
                }
            }
            if let (Some(start), Some(end)) = (start, end) {
                return Ok(PathKind::Path { start, end });
            }
        }
        Ok(PathKind::NotAPath)
    }
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false when already joined.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }

    fn classes(&mut self) -> Vec<Vec<usize>> {
        let mut by_root: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for i in 0..self.parent.len() {
            let r = self.find(i);
            by_root.entry(r).or_default().push(i);
        }
        by_root.into_values().collect()
    }
}

/// The triangle `A, B, C` with branches `AB, AC, BC`.
pub fn circle() -> Complex {
    Complex::from_edges(&["A", "B", "C"], &[("A", "B"), ("A", "C"), ("B", "C")]).expect("valid fixture")
}

/// The triangulated disc on `A, B, C, D` with faces `ABD, BCD, ADC`.
pub fn disc() -> Complex {
    Complex::builder()
        .nodes(["A", "B", "C", "D"])
        .edge("A", "B")
        .edge("A", "C")
        .edge("A", "D")
        .edge("B", "C")
        .edge("B", "D")
        .edge("C", "D")
        .face_through("A", "B", "D")
        .face_through("B", "C", "D")
        .face_through("A", "D", "C")
        .build()
        .expect("valid fixture")
}
