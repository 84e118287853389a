//! Finite-dimensional right modules as quiver representations, with the
//! homological toolkit: Hom spaces, radical/socle/Loewy structure, submodules
//! and quotients, projective covers and injective envelopes, syzygies, the
//! Nakayama functor, and trace/reject submodules.
//!
//! Row convention throughout: an arrow a: u -> v acts by a matrix of shape
//! dims[u] x dims[v], applied on the right of row vectors, so the action of a
//! path is the ordinary matrix product of its arrow matrices in path order.

pub use crate::algebra::VertexId;
use crate::algebra::{BasicAlgebra, PathMono, SparseVec};
use crate::error::{Error, Result};
use crate::field::{Fp, Mat, Subspace};
use crate::rng::DetRng;
use std::sync::Arc;

#[derive(Clone)]
pub struct Rep {
    algebra: Arc<BasicAlgebra>,
    dims: Vec<usize>,
    action: Vec<Mat>,
}

impl PartialEq for Rep {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.algebra, &other.algebra)
            && self.dims == other.dims
            && self.action == other.action
    }
}

impl std::fmt::Debug for Rep {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Rep{:?}", self.dims)
    }
}

pub fn same_algebra(a: &Rep, b: &Rep) -> bool {
    Arc::ptr_eq(&a.algebra, &b.algebra)
}

impl Rep {
    pub fn new(algebra: Arc<BasicAlgebra>, dims: Vec<usize>, action: Vec<Mat>) -> Result<Rep> {
        let rep = Rep {
            algebra,
            dims,
            action,
        };
        rep.validate()?;
        Ok(rep)
    }

    pub fn zero(algebra: Arc<BasicAlgebra>) -> Rep {
        let n = algebra.n_vertices();
        let field = algebra.field();
        let action = algebra
            .presentation
            .arrows
            .iter()
            .map(|_| Mat::zeros(field, 0, 0))
            .collect();
        Rep {
            algebra,
            dims: vec![0; n],
            action,
        }
    }

    fn validate(&self) -> Result<()> {
        let pres = &self.algebra.presentation;
        if self.dims.len() != pres.vertices.len() || self.action.len() != pres.arrows.len() {
            return Err(Error::DimensionMismatch(
                "representation shape does not match the quiver".into(),
            ));
        }
        for (aid, arrow) in pres.arrows.iter().enumerate() {
            let m = &self.action[aid];
            if m.rows() != self.dims[arrow.from] || m.cols() != self.dims[arrow.to] {
                return Err(Error::DimensionMismatch(format!(
                    "matrix for arrow '{}' has shape {}x{}, expected {}x{}",
                    arrow.name,
                    m.rows(),
                    m.cols(),
                    self.dims[arrow.from],
                    self.dims[arrow.to]
                )));
            }
        }
        for (ri, rel) in pres.relations.iter().enumerate() {
            let mut acc: Option<Mat> = None;
            for term in rel {
                let mono = self.word_action_endpoints(&term.path);
                let scaled = mono.scale(term.coeff);
                acc = Some(match acc {
                    None => scaled,
                    Some(a) => a.add(&scaled),
                });
            }
            if let Some(a) = acc {
                if !a.is_zero() {
                    return Err(Error::MalformedRelation {
                        index: ri,
                        reason: "representation does not satisfy this relation".into(),
                    });
                }
            }
        }
        Ok(())
    }

    fn word_action_endpoints(&self, word: &[usize]) -> Mat {
        let pres = &self.algebra.presentation;
        let src = pres.arrows[word[0]].from;
        let mut acc = Mat::identity(self.field(), self.dims[src]);
        for &aid in word {
            acc = acc.mul(&self.action[aid]);
        }
        acc
    }

    pub fn algebra(&self) -> &Arc<BasicAlgebra> {
        &self.algebra
    }

    pub fn field(&self) -> Fp {
        self.algebra.field()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim_total(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.dim_total() == 0
    }

    pub fn arrow_action(&self, aid: usize) -> &Mat {
        &self.action[aid]
    }

    /// Action matrix of a basis path (identity for a trivial path).
    pub fn path_action(&self, path: &PathMono) -> Mat {
        let mut acc = Mat::identity(self.field(), self.dims[path.source]);
        for &aid in &path.arrows {
            acc = acc.mul(&self.action[aid]);
        }
        acc
    }

    /// Direct sum with inclusion and projection maps for each summand.
    pub fn direct_sum(parts: &[Rep]) -> (Rep, Vec<ModMap>, Vec<ModMap>) {
        assert!(!parts.is_empty());
        let algebra = parts[0].algebra.clone();
        let field = algebra.field();
        let n = algebra.n_vertices();
        let dims: Vec<usize> = (0..n)
            .map(|v| parts.iter().map(|p| p.dims[v]).sum())
            .collect();
        let mut offsets = vec![vec![0usize; n]; parts.len()];
        for v in 0..n {
            let mut off = 0;
            for (k, part) in parts.iter().enumerate() {
                offsets[k][v] = off;
                off += part.dims[v];
            }
        }
        let mut action = Vec::new();
        for (aid, arrow) in algebra.presentation.arrows.iter().enumerate() {
            let mut m = Mat::zeros(field, dims[arrow.from], dims[arrow.to]);
            for (k, part) in parts.iter().enumerate() {
                m.set_block(
                    offsets[k][arrow.from],
                    offsets[k][arrow.to],
                    &part.action[aid],
                );
            }
            action.push(m);
        }
        let sum = Rep {
            algebra,
            dims,
            action,
        };
        let mut incls = Vec::new();
        let mut projs = Vec::new();
        for (k, part) in parts.iter().enumerate() {
            let mut iblocks = Vec::new();
            let mut pblocks = Vec::new();
            for v in 0..n {
                let mut inc = Mat::zeros(field, part.dims[v], sum.dims[v]);
                let mut prj = Mat::zeros(field, sum.dims[v], part.dims[v]);
                for r in 0..part.dims[v] {
                    inc.set(r, offsets[k][v] + r, 1);
                    prj.set(offsets[k][v] + r, r, 1);
                }
                iblocks.push(inc);
                pblocks.push(prj);
            }
            incls.push(ModMap::new_unchecked(part.clone(), sum.clone(), iblocks));
            projs.push(ModMap::new_unchecked(sum.clone(), part.clone(), pblocks));
        }
        (sum, incls, projs)
    }
}

/// Module map, stored as one matrix block per vertex.
#[derive(Clone, PartialEq)]
pub struct ModMap {
    pub source: Rep,
    pub target: Rep,
    pub blocks: Vec<Mat>,
}

impl std::fmt::Debug for ModMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "ModMap{:?}->{:?}", self.source.dims, self.target.dims)
    }
}

impl ModMap {
    pub fn new(source: Rep, target: Rep, blocks: Vec<Mat>) -> Result<ModMap> {
        let m = ModMap::new_unchecked(source, target, blocks);
        if !m.intertwines() {
            return Err(Error::DimensionMismatch(
                "blocks do not commute with the arrow actions".into(),
            ));
        }
        Ok(m)
    }

    pub fn new_unchecked(source: Rep, target: Rep, blocks: Vec<Mat>) -> ModMap {
        debug_assert!(same_algebra(&source, &target));
        debug_assert_eq!(blocks.len(), source.dims.len());
        for (v, b) in blocks.iter().enumerate() {
            debug_assert_eq!((b.rows(), b.cols()), (source.dims[v], target.dims[v]));
        }
        ModMap {
            source,
            target,
            blocks,
        }
    }

    pub fn zero(source: Rep, target: Rep) -> ModMap {
        let field = source.field();
        let blocks = (0..source.dims.len())
            .map(|v| Mat::zeros(field, source.dims[v], target.dims[v]))
            .collect();
        ModMap::new_unchecked(source, target, blocks)
    }

    pub fn identity(m: &Rep) -> ModMap {
        let field = m.field();
        let blocks = m.dims.iter().map(|&d| Mat::identity(field, d)).collect();
        ModMap::new_unchecked(m.clone(), m.clone(), blocks)
    }

    pub fn intertwines(&self) -> bool {
        let pres = &self.source.algebra.presentation;
        for (aid, arrow) in pres.arrows.iter().enumerate() {
            let lhs = self.blocks[arrow.from].mul(self.target.arrow_action(aid));
            let rhs = self.source.arrow_action(aid).mul(&self.blocks[arrow.to]);
            if lhs != rhs {
                return false;
            }
        }
        true
    }

    /// Composite "self then g".
    pub fn then(&self, g: &ModMap) -> ModMap {
        debug_assert_eq!(self.target.dims, g.source.dims);
        let blocks = self
            .blocks
            .iter()
            .zip(g.blocks.iter())
            .map(|(a, b)| a.mul(b))
            .collect();
        ModMap::new_unchecked(self.source.clone(), g.target.clone(), blocks)
    }

    pub fn add(&self, other: &ModMap) -> ModMap {
        let blocks = self
            .blocks
            .iter()
            .zip(other.blocks.iter())
            .map(|(a, b)| a.add(b))
            .collect();
        ModMap::new_unchecked(self.source.clone(), self.target.clone(), blocks)
    }

    pub fn sub(&self, other: &ModMap) -> ModMap {
        let blocks = self
            .blocks
            .iter()
            .zip(other.blocks.iter())
            .map(|(a, b)| a.sub(b))
            .collect();
        ModMap::new_unchecked(self.source.clone(), self.target.clone(), blocks)
    }

    pub fn scale(&self, c: u32) -> ModMap {
        let blocks = self.blocks.iter().map(|b| b.scale(c)).collect();
        ModMap::new_unchecked(self.source.clone(), self.target.clone(), blocks)
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().all(|b| b.is_zero())
    }

    pub fn is_injective(&self) -> bool {
        self.blocks.iter().all(|b| b.rank() == b.rows())
    }

    pub fn is_surjective(&self) -> bool {
        self.blocks.iter().all(|b| b.rank() == b.cols())
    }

    pub fn is_isomorphism(&self) -> bool {
        self.source.dims == self.target.dims && self.is_injective()
    }

    pub fn inverse(&self) -> Option<ModMap> {
        if !self.is_isomorphism() {
            return None;
        }
        let blocks: Option<Vec<Mat>> = self.blocks.iter().map(|b| b.inverse()).collect();
        Some(ModMap::new_unchecked(
            self.target.clone(),
            self.source.clone(),
            blocks?,
        ))
    }

    /// Flatten all blocks into one coordinate vector (for Hom-space algebra).
    pub fn flatten(&self) -> Vec<u32> {
        let mut out = Vec::new();
        for b in &self.blocks {
            for i in 0..b.rows() {
                out.extend_from_slice(b.row(i));
            }
        }
        out
    }

    pub fn unflatten(source: &Rep, target: &Rep, data: &[u32]) -> ModMap {
        let field = source.field();
        let mut blocks = Vec::new();
        let mut at = 0;
        for v in 0..source.dims.len() {
            let (r, c) = (source.dims[v], target.dims[v]);
            let mut m = Mat::zeros(field, r, c);
            for i in 0..r {
                for j in 0..c {
                    m.set(i, j, data[at]);
                    at += 1;
                }
            }
            blocks.push(m);
        }
        ModMap::new_unchecked(source.clone(), target.clone(), blocks)
    }
}

/// A submodule together with its (injective) inclusion into the parent.
#[derive(Debug, Clone)]
pub struct SubmoduleWitness {
    pub parent: Rep,
    pub sub: Rep,
    pub inclusion: ModMap,
}

// ---------------------------------------------------------------------------
// Hom spaces
// ---------------------------------------------------------------------------

/// Basis of Hom(M, N), computed from the intertwining linear system.
pub fn hom_basis(m: &Rep, n: &Rep) -> Result<Vec<ModMap>> {
    if !same_algebra(m, n) {
        return Err(Error::AlgebraMismatch);
    }
    let field = m.field();
    let nv = m.dims.len();
    let mut offsets = vec![0usize; nv + 1];
    for v in 0..nv {
        offsets[v + 1] = offsets[v] + m.dims[v] * n.dims[v];
    }
    let unknowns = offsets[nv];
    if unknowns == 0 {
        return Ok(Vec::new());
    }
    let pres = &m.algebra.presentation;
    let mut rows: Vec<Vec<i64>> = Vec::new();
    for (aid, arrow) in pres.arrows.iter().enumerate() {
        let (u, w) = (arrow.from, arrow.to);
        let a = m.arrow_action(aid); // dims m[u] x m[w]
        let b = n.arrow_action(aid); // dims n[u] x n[w]
                                     // equation (i, l): sum_j f_u[i,j] b[j,l] - sum_k a[i,k] f_w[k,l] = 0
        for i in 0..m.dims[u] {
            for l in 0..n.dims[w] {
                let mut row = vec![0i64; unknowns];
                for j in 0..n.dims[u] {
                    row[offsets[u] + i * n.dims[u] + j] += b.get(j, l) as i64;
                }
                for k in 0..m.dims[w] {
                    let idx = offsets[w] + k * n.dims[w] + l;
                    row[idx] -= a.get(i, k) as i64;
                }
                if row.iter().any(|&x| x != 0) {
                    rows.push(row);
                }
            }
        }
    }
    let kernel = if rows.is_empty() {
        Subspace::full(field, unknowns)
    } else {
        Mat::from_rows(field, &rows).kernel_basis()
    };
    let mut out = Vec::new();
    for i in 0..kernel.dim() {
        out.push(ModMap::unflatten(m, n, kernel.basis().row(i)));
    }
    Ok(out)
}

/// Express a map in coordinates over a Hom basis, if it lies in the span.
pub fn hom_coords(basis: &[ModMap], f: &ModMap) -> Option<Vec<u32>> {
    if basis.is_empty() {
        return if f.is_zero() { Some(Vec::new()) } else { None };
    }
    let field = f.source.field();
    let rows: Vec<Vec<i64>> = basis
        .iter()
        .map(|b| b.flatten().iter().map(|&x| x as i64).collect())
        .collect();
    let space = Subspace::from_generators(field, rows[0].len(), &Mat::from_rows(field, &rows));
    let flat = f.flatten();
    // coordinates over the RREF basis, then convert to the original basis by
    // solving a small triangular system
    let gens = Mat::from_rows(field, &rows);
    let _ = space;
    let target = flat;
    // solve x * gens = target, i.e. gens^T x = target^T
    gens.transpose().solve(&target)
}

// ---------------------------------------------------------------------------
// Structure: radical, socle, top, Loewy layers
// ---------------------------------------------------------------------------

/// Per-vertex subspaces spanned by all arrow images (the radical).
pub fn radical_subspaces(m: &Rep) -> Vec<Subspace> {
    let field = m.field();
    let n = m.dims.len();
    let mut spaces: Vec<Subspace> = (0..n).map(|v| Subspace::zero(field, m.dims[v])).collect();
    for (aid, arrow) in m.algebra.presentation.arrows.iter().enumerate() {
        let img = image_rows(m.arrow_action(aid));
        spaces[arrow.to] = spaces[arrow.to].sum(&img).unwrap();
    }
    spaces
}

fn image_rows(mat: &Mat) -> Subspace {
    Subspace::from_generators(mat.field(), mat.cols(), &mat.clone())
}

/// Per-vertex joint kernels of all arrow actions (the socle).
pub fn socle_subspaces(m: &Rep) -> Vec<Subspace> {
    let field = m.field();
    let n = m.dims.len();
    let mut spaces: Vec<Subspace> = (0..n).map(|v| Subspace::full(field, m.dims[v])).collect();
    for (aid, arrow) in m.algebra.presentation.arrows.iter().enumerate() {
        let ker = m.arrow_action(aid).left_kernel_basis();
        spaces[arrow.from] = spaces[arrow.from].intersect(&ker).unwrap();
    }
    spaces
}

pub struct Structure {
    pub radical: SubmoduleWitness,
    pub socle: SubmoduleWitness,
    pub top: Rep,
    /// Loewy layers of the radical filtration, as per-vertex multiplicities.
    pub loewy_layers: Vec<Vec<usize>>,
}

pub fn structural(m: &Rep) -> Structure {
    let rad = sub_from_subspaces(m, radical_subspaces(m)).expect("radical is a submodule");
    let soc = sub_from_subspaces(m, socle_subspaces(m)).expect("socle is a submodule");
    let (top, _) = quotient(m, &rad).expect("quotient by radical");
    let loewy_layers = loewy_layers(m);
    Structure {
        radical: rad,
        socle: soc,
        top,
        loewy_layers,
    }
}

/// Dimensions of the radical filtration quotients, top layer first.
pub fn loewy_layers(m: &Rep) -> Vec<Vec<usize>> {
    let n = m.dims.len();
    let mut layers = Vec::new();
    let mut current: Vec<Subspace> = (0..n)
        .map(|v| Subspace::full(m.field(), m.dims[v]))
        .collect();
    loop {
        if current.iter().all(|s| s.dim() == 0) {
            break;
        }
        // next = sum of arrow images of current
        let mut next: Vec<Subspace> = (0..n)
            .map(|v| Subspace::zero(m.field(), m.dims[v]))
            .collect();
        for (aid, arrow) in m.algebra.presentation.arrows.iter().enumerate() {
            let src = &current[arrow.from];
            if src.dim() == 0 {
                continue;
            }
            let img = src.basis().mul(m.arrow_action(aid));
            let sp = Subspace::from_generators(m.field(), m.dims[arrow.to], &img);
            next[arrow.to] = next[arrow.to].sum(&sp).unwrap();
        }
        let layer: Vec<usize> = (0..n).map(|v| current[v].dim() - next[v].dim()).collect();
        layers.push(layer);
        current = next;
    }
    layers
}

// ---------------------------------------------------------------------------
// Submodules and quotients
// ---------------------------------------------------------------------------

/// Assemble a submodule from per-vertex subspaces, verifying closure under
/// the arrow actions.
pub fn sub_from_subspaces(m: &Rep, spaces: Vec<Subspace>) -> Result<SubmoduleWitness> {
    let field = m.field();
    let dims: Vec<usize> = spaces.iter().map(|s| s.dim()).collect();
    let mut action = Vec::new();
    for (aid, arrow) in m.algebra.presentation.arrows.iter().enumerate() {
        let (u, v) = (arrow.from, arrow.to);
        let mut block = Mat::zeros(field, dims[u], dims[v]);
        if dims[u] > 0 {
            let moved = spaces[u].basis().mul(m.arrow_action(aid));
            for r in 0..dims[u] {
                let coords = spaces[v].coords(moved.row(r)).ok_or_else(|| {
                    Error::DimensionMismatch("subspaces are not closed under the action".into())
                })?;
                for (c, &x) in coords.iter().enumerate() {
                    block.set(r, c, x);
                }
            }
        }
        action.push(block);
    }
    let sub = Rep {
        algebra: m.algebra.clone(),
        dims,
        action,
    };
    let blocks: Vec<Mat> = spaces.iter().map(|s| s.basis().clone()).collect();
    let inclusion = ModMap::new_unchecked(sub.clone(), m.clone(), blocks);
    debug_assert!(inclusion.intertwines());
    Ok(SubmoduleWitness {
        parent: m.clone(),
        sub,
        inclusion,
    })
}

/// Smallest subrepresentation containing the given vectors.
pub fn submodule_generated(m: &Rep, generators: &[(VertexId, Vec<u32>)]) -> SubmoduleWitness {
    let field = m.field();
    let n = m.dims.len();
    let mut spaces: Vec<Subspace> = (0..n).map(|v| Subspace::zero(field, m.dims[v])).collect();
    let mut work: Vec<(VertexId, Vec<u32>)> = Vec::new();
    for (v, vecdata) in generators {
        assert_eq!(vecdata.len(), m.dims[*v], "generator has wrong length");
        if !spaces[*v].contains_vec(vecdata) {
            spaces[*v] = spaces[*v]
                .sum(&Subspace::from_generators(
                    field,
                    m.dims[*v],
                    &Mat::from_rows(field, &[vecdata.iter().map(|&x| x as i64).collect()]),
                ))
                .unwrap();
            work.push((*v, vecdata.clone()));
        }
    }
    while let Some((v, vecdata)) = work.pop() {
        for (aid, arrow) in m.algebra.presentation.arrows.iter().enumerate() {
            if arrow.from != v {
                continue;
            }
            let moved = m.arrow_action(aid).apply_row(&vecdata);
            if moved.iter().all(|&x| x == 0) || spaces[arrow.to].contains_vec(&moved) {
                continue;
            }
            spaces[arrow.to] = spaces[arrow.to]
                .sum(&Subspace::from_generators(
                    field,
                    m.dims[arrow.to],
                    &Mat::from_rows(field, &[moved.iter().map(|&x| x as i64).collect()]),
                ))
                .unwrap();
            work.push((arrow.to, moved));
        }
    }
    sub_from_subspaces(m, spaces).expect("closure by construction")
}

/// Quotient by a submodule, with the projection map.
pub fn quotient(m: &Rep, witness: &SubmoduleWitness) -> Result<(Rep, ModMap)> {
    if witness.parent != *m {
        return Err(Error::WitnessMismatch);
    }
    let field = m.field();
    let n = m.dims.len();
    let spaces: Vec<Subspace> = (0..n)
        .map(|v| Subspace::from_generators(field, m.dims[v], &witness.inclusion.blocks[v].clone()))
        .collect();
    let comps: Vec<Vec<usize>> = spaces.iter().map(|s| s.complement_coords()).collect();
    let dims: Vec<usize> = comps.iter().map(|c| c.len()).collect();
    // projection blocks: standard basis vector -> its reduced coset coordinates
    let mut proj_blocks = Vec::new();
    for v in 0..n {
        let mut pb = Mat::zeros(field, m.dims[v], dims[v]);
        for i in 0..m.dims[v] {
            let mut e = vec![0u32; m.dims[v]];
            e[i] = 1;
            let red = spaces[v].reduce_vec(&e);
            for (c, &coord) in comps[v].iter().enumerate() {
                pb.set(i, c, red[coord]);
            }
        }
        proj_blocks.push(pb);
    }
    let mut action = Vec::new();
    for (aid, arrow) in m.algebra.presentation.arrows.iter().enumerate() {
        let (u, v) = (arrow.from, arrow.to);
        let mut block = Mat::zeros(field, dims[u], dims[v]);
        for (r, &cu) in comps[u].iter().enumerate() {
            // coset representative e_cu, pushed along the arrow, then projected
            let mut e = vec![0u32; m.dims[u]];
            e[cu] = 1;
            let moved = m.arrow_action(aid).apply_row(&e);
            let red = spaces[v].reduce_vec(&moved);
            for (c, &coord) in comps[v].iter().enumerate() {
                block.set(r, c, red[coord]);
            }
        }
        action.push(block);
    }
    let q = Rep {
        algebra: m.algebra.clone(),
        dims,
        action,
    };
    let proj = ModMap::new_unchecked(m.clone(), q.clone(), proj_blocks);
    debug_assert!(proj.intertwines());
    debug_assert!(witness.inclusion.then(&proj).is_zero());
    Ok((q, proj))
}

/// Kernel of a module map, as a submodule of the source.
pub fn kernel_witness(f: &ModMap) -> SubmoduleWitness {
    let spaces: Vec<Subspace> = f.blocks.iter().map(|b| b.left_kernel_basis()).collect();
    sub_from_subspaces(&f.source, spaces).expect("kernel is a submodule")
}

/// Image of a module map, as a submodule of the target.
pub fn image_witness(f: &ModMap) -> SubmoduleWitness {
    let spaces: Vec<Subspace> = f
        .blocks
        .iter()
        .map(|b| Subspace::from_generators(b.field(), b.cols(), &b.clone()))
        .collect();
    sub_from_subspaces(&f.target, spaces).expect("image is a submodule")
}

// ---------------------------------------------------------------------------
// Projectives, injectives, covers, envelopes
// ---------------------------------------------------------------------------

/// The indecomposable projective e_i * Lambda as a representation.
pub fn projective(alg: &Arc<BasicAlgebra>, i: VertexId) -> Rep {
    let field = alg.field();
    let n = alg.n_vertices();
    let dims: Vec<usize> = (0..n).map(|v| alg.paths_between(i, v).len()).collect();
    let mut action = Vec::new();
    for (aid, arrow) in alg.presentation.arrows.iter().enumerate() {
        let (u, v) = (arrow.from, arrow.to);
        let rows_idx = alg.paths_between(i, u);
        let cols_idx = alg.paths_between(i, v);
        let mut block = Mat::zeros(field, rows_idx.len(), cols_idx.len());
        for (r, &bpath) in rows_idx.iter().enumerate() {
            let prod = alg.mult_basis(bpath, alg.arrow_basis[aid]);
            for &(k, c) in prod {
                let col = cols_idx
                    .iter()
                    .position(|&x| x == k)
                    .expect("path lands in target");
                block.set(r, col, c);
            }
        }
        action.push(block);
    }
    Rep {
        algebra: alg.clone(),
        dims,
        action,
    }
}

/// The indecomposable injective D(Lambda * e_i) as a right module.
pub fn injective(alg: &Arc<BasicAlgebra>, i: VertexId) -> Rep {
    let field = alg.field();
    let n = alg.n_vertices();
    // vertex-w space: dual of the span of paths w -> i
    let dims: Vec<usize> = (0..n).map(|w| alg.paths_between(w, i).len()).collect();
    let mut action = Vec::new();
    for (aid, arrow) in alg.presentation.arrows.iter().enumerate() {
        let (w, w2) = (arrow.from, arrow.to);
        let rows_idx = alg.paths_between(w, i); // dual basis indexing the source space
        let cols_idx = alg.paths_between(w2, i);
        let mut block = Mat::zeros(field, rows_idx.len(), cols_idx.len());
        // (xi_p . a)(q) = xi_p(a q): matrix entry [p][q] = coeff of p in a * q
        for (cq, &q) in cols_idx.iter().enumerate() {
            let prod = alg.mult_basis(alg.arrow_basis[aid], q);
            for &(k, c) in prod {
                if let Some(rp) = rows_idx.iter().position(|&x| x == k) {
                    block.set(rp, cq, c);
                }
            }
        }
        action.push(block);
    }
    Rep {
        algebra: alg.clone(),
        dims,
        action,
    }
}

/// The regular module as the direct sum of the indecomposable projectives.
pub fn regular(alg: &Arc<BasicAlgebra>) -> Rep {
    let parts: Vec<Rep> = (0..alg.n_vertices()).map(|i| projective(alg, i)).collect();
    Rep::direct_sum(&parts).0
}

/// Simple module at a vertex.
pub fn simple(alg: &Arc<BasicAlgebra>, i: VertexId) -> Rep {
    let field = alg.field();
    let n = alg.n_vertices();
    let dims: Vec<usize> = (0..n).map(|v| usize::from(v == i)).collect();
    let action = alg
        .presentation
        .arrows
        .iter()
        .map(|a| Mat::zeros(field, dims[a.from], dims[a.to]))
        .collect();
    Rep {
        algebra: alg.clone(),
        dims,
        action,
    }
}

/// Direct sum of projectives with the given per-vertex multiplicities.
pub fn projective_sum(alg: &Arc<BasicAlgebra>, mults: &[usize]) -> (Rep, Vec<(VertexId, usize)>) {
    let mut parts = Vec::new();
    let mut layout = Vec::new();
    for (v, &m) in mults.iter().enumerate() {
        for c in 0..m {
            parts.push(projective(alg, v));
            layout.push((v, c));
        }
    }
    if parts.is_empty() {
        return (Rep::zero(alg.clone()), layout);
    }
    (Rep::direct_sum(&parts).0, layout)
}

pub struct CoverData {
    pub cover: Rep,
    /// summands of the cover, as (vertex, copy) in layout order
    pub layout: Vec<(VertexId, usize)>,
    pub epi: ModMap,
    pub kernel: SubmoduleWitness,
}

/// Projective cover P(M) -> M with its kernel (the syzygy).
pub fn projective_cover(m: &Rep) -> CoverData {
    let alg = m.algebra.clone();
    let field = m.field();
    let n = m.dims.len();
    let rads = radical_subspaces(m);
    // lifts of a basis of the top, per vertex
    let mut lift_vecs: Vec<Vec<Vec<u32>>> = Vec::new();
    let mut mults = vec![0usize; n];
    for v in 0..n {
        let comp = rads[v].complement_coords();
        mults[v] = comp.len();
        let mut lifts = Vec::new();
        for &c in &comp {
            let mut e = vec![0u32; m.dims[v]];
            e[c] = 1;
            lifts.push(e);
        }
        lift_vecs.push(lifts);
    }
    let (cover, layout) = projective_sum(&alg, &mults);
    // epi blocks: for summand (v, copy) with lift x, a basis path p: v -> w of
    // P_v maps to x * action(p) in M_w.
    let mut blocks: Vec<Mat> = (0..n)
        .map(|w| Mat::zeros(field, cover.dims[w], m.dims[w]))
        .collect();
    let mut offsets = vec![0usize; n];
    for &(v, copy) in &layout {
        let lift = &lift_vecs[v][copy];
        for w in 0..n {
            for (r, &bpath) in alg.paths_between(v, w).iter().enumerate() {
                let pm = alg.basis[bpath].clone();
                let row = m.path_action(&pm).apply_row(lift);
                for (c, &x) in row.iter().enumerate() {
                    blocks[w].set(offsets[w] + r, c, x);
                }
            }
        }
        for w in 0..n {
            offsets[w] += alg.paths_between(v, w).len();
        }
    }
    let epi = ModMap::new_unchecked(cover.clone(), m.clone(), blocks);
    debug_assert!(epi.intertwines());
    assert!(epi.is_surjective(), "projective cover must be onto");
    let kernel = kernel_witness(&epi);
    CoverData {
        cover,
        layout,
        epi,
        kernel,
    }
}

pub struct EnvelopeData {
    pub envelope: Rep,
    pub layout: Vec<(VertexId, usize)>,
    pub mono: ModMap,
}

/// Injective envelope M -> I(soc M).
pub fn injective_envelope(m: &Rep) -> EnvelopeData {
    let alg = m.algebra.clone();
    let field = m.field();
    let n = m.dims.len();
    let socs = socle_subspaces(m);
    let mut mults = vec![0usize; n];
    // functionals on M_v dual to a basis of the socle
    let mut functionals: Vec<Vec<Vec<u32>>> = Vec::new();
    for v in 0..n {
        let s = socs[v].dim();
        mults[v] = s;
        let mut funs = Vec::new();
        if s > 0 {
            // solve B * Xi = I_s column by column
            let b = socs[v].basis().clone();
            for c in 0..s {
                let mut e = vec![0u32; s];
                e[c] = 1;
                let col = b.solve(&e).expect("socle basis has full row rank");
                funs.push(col);
            }
        }
        functionals.push(funs);
    }
    let mut parts = Vec::new();
    let mut layout = Vec::new();
    for (v, &mult) in mults.iter().enumerate() {
        for c in 0..mult {
            parts.push(injective(&alg, v));
            layout.push((v, c));
        }
    }
    let envelope = if parts.is_empty() {
        Rep::zero(alg.clone())
    } else {
        Rep::direct_sum(&parts).0
    };
    // mono blocks: vertex w, summand (v, copy r) with functional xi:
    // entry [(i), (path p: w -> v)] = xi(e_i * action(p))
    let mut blocks: Vec<Mat> = (0..n)
        .map(|w| Mat::zeros(field, m.dims[w], envelope.dims[w]))
        .collect();
    let mut offsets = vec![0usize; n];
    for &(v, copy) in &layout {
        let xi = &functionals[v][copy];
        for w in 0..n {
            let paths = alg.paths_between(w, v);
            for (pc, &bpath) in paths.iter().enumerate() {
                let pm = alg.basis[bpath].clone();
                let act = m.path_action(&pm); // dims[w] x dims[v]
                for i in 0..m.dims[w] {
                    // xi applied to row i of act
                    let mut acc = 0u64;
                    for (j, &x) in xi.iter().enumerate() {
                        acc = (acc + act.get(i, j) as u64 * x as u64) % field.modulus() as u64;
                    }
                    blocks[w].set(i, offsets[w] + pc, acc as u32);
                }
            }
        }
        for w in 0..n {
            offsets[w] += alg.paths_between(w, v).len();
        }
    }
    let mono = ModMap::new_unchecked(m.clone(), envelope.clone(), blocks);
    debug_assert!(mono.intertwines());
    assert!(mono.is_injective(), "envelope embedding must be one-to-one");
    EnvelopeData {
        envelope,
        layout,
        mono,
    }
}

/// Syzygy: kernel of the projective cover. Minimal by construction.
pub fn syzygy(m: &Rep) -> Rep {
    projective_cover(m).kernel.sub
}

/// Cosyzygy: cokernel of the injective envelope. Requires a self-injective
/// algebra for stable-category semantics.
pub fn cosyzygy(m: &Rep) -> Result<Rep> {
    if nakayama_permutation(&m.algebra.clone()).is_none() {
        return Err(Error::NotSelfInjective {
            vertex: "(cosyzygy requested)".into(),
        });
    }
    let env = injective_envelope(m);
    let img = image_witness(&env.mono);
    let (q, _) = quotient(&env.envelope, &img)?;
    Ok(q)
}

// ---------------------------------------------------------------------------
// Nakayama functor
// ---------------------------------------------------------------------------

/// Extract the element matrix of a map between sums of projectives:
/// entry (k, l) lies in e_{v_l} Lambda e_{v_k} for source summand k at vertex
/// v_k and target summand l at vertex v_l.
pub fn projective_map_elements(
    f: &ModMap,
    src_layout: &[(VertexId, usize)],
    tgt_layout: &[(VertexId, usize)],
) -> Vec<Vec<SparseVec>> {
    let alg = f.source.algebra();
    let n = alg.n_vertices();
    // offsets of target summands at each vertex
    let mut tgt_offsets: Vec<Vec<usize>> = vec![Vec::new(); n];
    {
        let mut at = vec![0usize; n];
        for &(v, _) in tgt_layout {
            for w in 0..n {
                tgt_offsets[w].push(at[w]);
                at[w] += alg.paths_between(v, w).len();
            }
        }
    }
    let mut src_off = vec![0usize; n];
    let mut out = Vec::new();
    for &(vk, _) in src_layout {
        // generator of this summand: trivial path e_vk inside paths(vk, vk)
        let gen_pos = alg
            .paths_between(vk, vk)
            .iter()
            .position(|&b| b == alg.idempotents[vk])
            .expect("trivial path present");
        let row = f.blocks[vk].row(src_off[vk] + gen_pos).to_vec();
        let mut elems = Vec::new();
        for (l, &(vl, _)) in tgt_layout.iter().enumerate() {
            let paths = alg.paths_between(vl, vk);
            let off = tgt_offsets[vk][l];
            let mut sv: SparseVec = Vec::new();
            for (pi, &b) in paths.iter().enumerate() {
                let c = row[off + pi];
                if c != 0 {
                    sv.push((b, c));
                }
            }
            elems.push(sv);
        }
        out.push(elems);
        for w in 0..n {
            src_off[w] += alg.paths_between(vk, w).len();
        }
    }
    out
}

/// Apply the Nakayama functor to a map between sums of projectives, given by
/// its element matrix: the result is the map between the matching sums of
/// injectives whose blocks are the duals of right multiplication.
pub fn nakayama_of_projective_map(
    alg: &Arc<BasicAlgebra>,
    elems: &[Vec<SparseVec>],
    src_layout: &[(VertexId, usize)],
    tgt_layout: &[(VertexId, usize)],
) -> ModMap {
    let inj_parts_src: Vec<Rep> = src_layout.iter().map(|&(v, _)| injective(alg, v)).collect();
    let inj_parts_tgt: Vec<Rep> = tgt_layout.iter().map(|&(v, _)| injective(alg, v)).collect();
    let n_src = if inj_parts_src.is_empty() {
        Rep::zero(alg.clone())
    } else {
        Rep::direct_sum(&inj_parts_src).0
    };
    let n_tgt = if inj_parts_tgt.is_empty() {
        Rep::zero(alg.clone())
    } else {
        Rep::direct_sum(&inj_parts_tgt).0
    };
    let field = alg.field();
    let nv = alg.n_vertices();
    let mut blocks: Vec<Mat> = (0..nv)
        .map(|w| Mat::zeros(field, n_src.dims[w], n_tgt.dims[w]))
        .collect();
    let mut soff = vec![0usize; nv];
    for (k, &(a, _)) in src_layout.iter().enumerate() {
        let mut toff = vec![0usize; nv];
        for (l, &(b, _)) in tgt_layout.iter().enumerate() {
            let x = &elems[k][l]; // element of e_b Lambda e_a
            for w in 0..nv {
                let rows_paths = alg.paths_between(w, a); // I_a at w
                let cols_paths = alg.paths_between(w, b); // I_b at w
                                                          // dual of right multiplication: entry [y][z] = coeff of y in z * x
                for (zc, &z) in cols_paths.iter().enumerate() {
                    for &(xb, xc) in x {
                        for &(yb, yc) in alg.mult_basis(z, xb) {
                            if let Some(yr) = rows_paths.iter().position(|&t| t == yb) {
                                let cur = blocks[w].get(soff[w] + yr, toff[w] + zc);
                                blocks[w].set(
                                    soff[w] + yr,
                                    toff[w] + zc,
                                    field.add(cur, field.mul(xc, yc)),
                                );
                            }
                        }
                    }
                }
            }
            for w in 0..nv {
                toff[w] += alg.paths_between(w, b).len();
            }
        }
        for w in 0..nv {
            soff[w] += alg.paths_between(w, a).len();
        }
    }
    let nd = ModMap::new_unchecked(n_src, n_tgt, blocks);
    debug_assert!(nd.intertwines());
    nd
}

/// Nakayama functor N = D Hom(-, Lambda), computed from a minimal projective
/// presentation. Sends P_i to I_i; not minimalized.
pub fn nakayama(m: &Rep) -> Rep {
    let alg = m.algebra.clone();
    if m.is_zero() {
        return Rep::zero(alg);
    }
    let c0 = projective_cover(m);
    let c1 = projective_cover(&c0.kernel.sub);
    let d = c1.epi.then(&c0.kernel.inclusion); // P1 -> P0
    let elems = projective_map_elements(&d, &c1.layout, &c0.layout);
    let nd = nakayama_of_projective_map(&alg, &elems, &c1.layout, &c0.layout);
    let n_tgt = nd.target.clone();
    let img = image_witness(&nd);
    let (q, _) = quotient(&n_tgt, &img).expect("cokernel");
    q
}

/// The Nakayama permutation, if the algebra is self-injective: sigma with
/// P_i isomorphic to I_{sigma(i)}. Cached on first computation.
pub fn nakayama_permutation(alg: &Arc<BasicAlgebra>) -> Option<Vec<usize>> {
    alg.si_cache
        .get_or_init(|| nakayama_permutation_uncached(alg))
        .clone()
}

fn nakayama_permutation_uncached(alg: &Arc<BasicAlgebra>) -> Option<Vec<usize>> {
    // soc(P_i) simple and the assignment i -> vertex of soc(P_i) bijective,
    // with an isomorphism P_i = I_{sigma(i)} verified by the general machinery.
    let n = alg.n_vertices();
    let mut sigma = Vec::with_capacity(n);
    for i in 0..n {
        let p = projective(alg, i);
        let socs = socle_subspaces(&p);
        let nonzero: Vec<usize> = (0..n).filter(|&v| socs[v].dim() > 0).collect();
        if nonzero.len() != 1 || socs[nonzero[0]].dim() != 1 {
            return None;
        }
        let j = nonzero[0];
        let inj = injective(alg, j);
        if crate::endo::is_isomorphic(&p, &inj, &mut DetRng::new(0)).is_none() {
            return None;
        }
        sigma.push(j);
    }
    let mut seen = vec![false; n];
    for &j in &sigma {
        if seen[j] {
            return None;
        }
        seen[j] = true;
    }
    Some(sigma)
}

pub struct NakayamaData {
    pub permutation: Vec<usize>,
    pub witnesses: Vec<ModMap>,
}

/// Certify self-injectivity: produce the Nakayama permutation together with
/// explicit isomorphisms P_i -> I_{sigma(i)}.
pub fn self_injective_check(alg: &Arc<BasicAlgebra>) -> Result<NakayamaData> {
    let n = alg.n_vertices();
    let mut sigma = Vec::with_capacity(n);
    let mut witnesses = Vec::with_capacity(n);
    for i in 0..n {
        let p = projective(alg, i);
        let mut found = None;
        for j in 0..n {
            let inj = injective(alg, j);
            if p.dims() != inj.dims() {
                continue;
            }
            if let Some(w) = crate::endo::is_isomorphic(&p, &inj, &mut DetRng::new(0)) {
                found = Some((j, w));
                break;
            }
        }
        let Some((j, w)) = found else {
            return Err(Error::NotSelfInjective {
                vertex: alg.vertex_name(i).to_string(),
            });
        };
        sigma.push(j);
        witnesses.push(w);
    }
    let mut seen = vec![false; n];
    for &j in &sigma {
        if seen[j] {
            return Err(Error::NotSelfInjective {
                vertex: "(permutation not bijective)".into(),
            });
        }
        seen[j] = true;
    }
    Ok(NakayamaData {
        permutation: sigma,
        witnesses,
    })
}

// ---------------------------------------------------------------------------
// Trace and reject submodules
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceSide {
    /// Largest submodule whose top has no composition factor in the vertex set.
    Trace,
    /// Smallest submodule R with soc(M/R) avoiding the vertex set.
    Reject,
}

pub fn trace_reject(m: &Rep, vertex_set: &[VertexId], side: TraceSide) -> SubmoduleWitness {
    match side {
        TraceSide::Trace => {
            let mut gens = Vec::new();
            for v in 0..m.dims.len() {
                if vertex_set.contains(&v) {
                    continue;
                }
                for i in 0..m.dims[v] {
                    let mut e = vec![0u32; m.dims[v]];
                    e[i] = 1;
                    gens.push((v, e));
                }
            }
            submodule_generated(m, &gens)
        }
        TraceSide::Reject => {
            let field = m.field();
            let n = m.dims.len();
            let mut spaces: Vec<Subspace> =
                (0..n).map(|v| Subspace::full(field, m.dims[v])).collect();
            for &v in vertex_set {
                let inj = injective(m.algebra(), v);
                for f in hom_basis(m, &inj).expect("same algebra") {
                    for w in 0..n {
                        let ker = f.blocks[w].left_kernel_basis();
                        spaces[w] = spaces[w].intersect(&ker).unwrap();
                    }
                }
            }
            sub_from_subspaces(m, spaces).expect("intersection of kernels is a submodule")
        }
    }
}

// ---------------------------------------------------------------------------
// Seeded random modules (quotients of projective sums)
// ---------------------------------------------------------------------------

/// Random module over the algebra: a quotient of a small random projective
/// sum by a random generated submodule of its radical. Valid by construction.
pub fn random_module(alg: &Arc<BasicAlgebra>, rng: &mut DetRng, max_copies: u64) -> Rep {
    let n = alg.n_vertices();
    let mut mults = vec![0usize; n];
    loop {
        for m in mults.iter_mut() {
            *m = rng.below(max_copies + 1) as usize;
        }
        if mults.iter().any(|&m| m > 0) {
            break;
        }
    }
    let (p, _) = projective_sum(alg, &mults);
    let rads = radical_subspaces(&p);
    let ngens = rng.below(4) as usize;
    let mut gens = Vec::new();
    for _ in 0..ngens {
        let v = rng.below(n as u64) as usize;
        if rads[v].dim() == 0 {
            continue;
        }
        let coeffs: Vec<u32> = (0..rads[v].dim())
            .map(|_| rng.element(p.field().modulus() as u64) as u32)
            .collect();
        let vecdata = rads[v].basis().apply_row(&coeffs);
        gens.push((v, vecdata));
    }
    if gens.is_empty() {
        return p;
    }
    let w = submodule_generated(&p, &gens);
    quotient(&p, &w).expect("witness built here").0
}
