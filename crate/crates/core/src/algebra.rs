//! Basic algebras presented by a quiver with admissible relations.
//!
//! Paths compose left to right (`p` then `q` is written `pq`), and right
//! modules are acted on along arrows: `M e_i -> M e_j` for an arrow `i -> j`.
//! The multiplication basis is computed by length-graded linear elimination
//! against the ideal closure (relations multiplied by paths on both sides),
//! which is exact for admissible ideals at this scale; a full noncommutative
//! Groebner engine is deliberately not attempted.

use crate::error::{Error, Result};
use crate::field::{Fp, Mat};
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

pub type VertexId = usize;
pub type ArrowId = usize;

#[derive(Debug, Clone)]
pub struct Arrow {
    pub name: String,
    pub from: VertexId,
    pub to: VertexId,
}

/// One summand of a relation: coefficient times a composable arrow sequence.
#[derive(Debug, Clone)]
pub struct RelationTerm {
    pub coeff: u32,
    pub path: Vec<ArrowId>,
}

#[derive(Debug, Clone)]
pub struct QuiverPresentation {
    pub field: Fp,
    pub vertices: Vec<String>,
    pub arrows: Vec<Arrow>,
    pub relations: Vec<Vec<RelationTerm>>,
}

impl QuiverPresentation {
    pub fn vertex_index(&self, name: &str) -> Option<VertexId> {
        self.vertices.iter().position(|v| v == name)
    }

    pub fn arrow_index(&self, name: &str) -> Option<ArrowId> {
        self.arrows.iter().position(|a| a.name == name)
    }

    fn path_endpoints(&self, path: &[ArrowId]) -> Result<(VertexId, VertexId)> {
        let first = *path
            .first()
            .ok_or_else(|| Error::BadPresentation("empty path in relation".into()))?;
        let mut at = self.arrows[first].from;
        let source = at;
        for &a in path {
            let arrow = self
                .arrows
                .get(a)
                .ok_or_else(|| Error::BadPresentation(format!("arrow id {a} out of range")))?;
            if arrow.from != at {
                return Err(Error::BadPresentation(format!(
                    "path is not composable at arrow '{}'",
                    arrow.name
                )));
            }
            at = arrow.to;
        }
        Ok((source, at))
    }

    pub fn validate(&self) -> Result<()> {
        let mut names = std::collections::HashSet::new();
        for v in &self.vertices {
            if !names.insert(v.clone()) {
                return Err(Error::BadPresentation(format!("duplicate vertex '{v}'")));
            }
        }
        let mut anames = std::collections::HashSet::new();
        for a in &self.arrows {
            if !anames.insert(a.name.clone()) {
                return Err(Error::BadPresentation(format!(
                    "duplicate arrow '{}'",
                    a.name
                )));
            }
            if a.from >= self.vertices.len() || a.to >= self.vertices.len() {
                return Err(Error::BadPresentation(format!(
                    "arrow '{}' has undeclared endpoint",
                    a.name
                )));
            }
        }
        for (ri, rel) in self.relations.iter().enumerate() {
            let terms: Vec<&RelationTerm> = rel
                .iter()
                .filter(|t| t.coeff % self.field.modulus() != 0)
                .collect();
            if terms.is_empty() {
                return Err(Error::MalformedRelation {
                    index: ri,
                    reason: "no nonzero terms".into(),
                });
            }
            let mut endpoints = None;
            for t in terms {
                if t.path.len() < 2 {
                    return Err(Error::MalformedRelation {
                        index: ri,
                        reason: "path of length < 2".into(),
                    });
                }
                let ep = self.path_endpoints(&t.path)?;
                match endpoints {
                    None => endpoints = Some(ep),
                    Some(prev) if prev != ep => {
                        return Err(Error::InconsistentRelation { index: ri });
                    }
                    _ => {}
                }
            }
        }
        Ok(())
    }
}

/// A basis path: either a trivial path at a vertex or a composable arrow word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathMono {
    pub source: VertexId,
    pub target: VertexId,
    pub arrows: Vec<ArrowId>,
}

impl PathMono {
    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.arrows.is_empty()
    }
}

/// A linear combination of basis elements, kept sparse and sorted by index.
pub type SparseVec = Vec<(usize, u32)>;

/// A basic finite-dimensional algebra kQ/I with a monomial basis and
/// multiplication table.
pub struct BasicAlgebra {
    pub presentation: QuiverPresentation,
    pub basis: Vec<PathMono>,
    /// Index of the trivial path e_i for each vertex (always 0..n_vertices).
    pub idempotents: Vec<usize>,
    /// Index in `basis` of each arrow.
    pub arrow_basis: Vec<usize>,
    /// mult[i][j] = basis_i * basis_j as a sparse combination.
    mult: Vec<Vec<SparseVec>>,
    /// basis indices grouped by (source, target).
    by_pair: Vec<Vec<Vec<usize>>>,
    /// All paths of length >= nil_degree vanish.
    pub nil_degree: usize,
    /// Cached Nakayama permutation (None once computed and not self-injective).
    pub(crate) si_cache: std::sync::OnceLock<Option<Vec<usize>>>,
}

impl fmt::Debug for BasicAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "BasicAlgebra(dim {}, {} vertices, {} arrows)",
            self.dim(),
            self.presentation.vertices.len(),
            self.presentation.arrows.len()
        )
    }
}

impl BasicAlgebra {
    pub fn field(&self) -> Fp {
        self.presentation.field
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn n_vertices(&self) -> usize {
        self.presentation.vertices.len()
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.presentation.vertices[v]
    }

    /// Basis indices of paths from `i` to `j`.
    pub fn paths_between(&self, i: VertexId, j: VertexId) -> &[usize] {
        &self.by_pair[i][j]
    }

    /// Product of two basis elements.
    pub fn mult_basis(&self, i: usize, j: usize) -> &SparseVec {
        &self.mult[i][j]
    }

    /// Product of two sparse combinations.
    pub fn mult(&self, a: &SparseVec, b: &SparseVec) -> SparseVec {
        let p = self.field();
        let mut acc: HashMap<usize, u32> = HashMap::new();
        for &(i, ca) in a {
            for &(j, cb) in b {
                let c = p.mul(ca, cb);
                if c == 0 {
                    continue;
                }
                for &(k, ck) in &self.mult[i][j] {
                    let e = acc.entry(k).or_insert(0);
                    *e = p.add(*e, p.mul(c, ck));
                }
            }
        }
        let mut out: SparseVec = acc.into_iter().filter(|&(_, c)| c != 0).collect();
        out.sort_unstable();
        out
    }

    /// Unit element 1 = sum of all vertex idempotents.
    pub fn unit(&self) -> SparseVec {
        self.idempotents.iter().map(|&i| (i, 1)).collect()
    }

    /// Cartan matrix with entry (i, j) = dim Hom(P_j, P_i) = dim P_i e_j,
    /// the number of basis paths from i to j.
    pub fn cartan_matrix(&self) -> Vec<Vec<u64>> {
        let n = self.n_vertices();
        (0..n)
            .map(|i| (0..n).map(|j| self.by_pair[i][j].len() as u64).collect())
            .collect()
    }

    /// Exhaustively check associativity on basis triples. Cheap at desk scale
    /// and a strong guard on the elimination step.
    pub fn verify_associativity(&self) -> bool {
        let d = self.dim();
        for i in 0..d {
            for j in 0..d {
                if self.basis[i].target != self.basis[j].source {
                    continue;
                }
                let ij = self.mult[i][j].clone();
                for k in 0..d {
                    if self.basis[j].target != self.basis[k].source {
                        continue;
                    }
                    let left = self.mult(&ij, &vec![(k, 1)]);
                    let right = self.mult(&vec![(i, 1)], &self.mult[j][k]);
                    if left != right {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// Paths of the free category on the quiver, enumerated by length.
struct PathTable {
    /// paths[idx] = arrow word; includes trivial paths as empty words tagged by source.
    paths: Vec<PathMono>,
    by_len: Vec<Vec<usize>>,
    index: HashMap<(VertexId, Vec<ArrowId>), usize>,
}

fn enumerate_paths(pres: &QuiverPresentation, max_len: usize, guard: usize) -> Result<PathTable> {
    let mut paths = Vec::new();
    let mut by_len: Vec<Vec<usize>> = Vec::new();
    let mut index = HashMap::new();
    let mut level: Vec<usize> = Vec::new();
    for v in 0..pres.vertices.len() {
        let id = paths.len();
        paths.push(PathMono {
            source: v,
            target: v,
            arrows: Vec::new(),
        });
        index.insert((v, Vec::new()), id);
        level.push(id);
    }
    by_len.push(level);
    for len in 1..=max_len {
        let mut level = Vec::new();
        for &pid in &by_len[len - 1] {
            let tgt = paths[pid].target;
            let src = paths[pid].source;
            for (aid, arrow) in pres.arrows.iter().enumerate() {
                if arrow.from != tgt {
                    continue;
                }
                let mut word = paths[pid].arrows.clone();
                word.push(aid);
                let id = paths.len();
                index.insert((src, word.clone()), id);
                paths.push(PathMono {
                    source: src,
                    target: arrow.to,
                    arrows: word,
                });
                level.push(id);
                if paths.len() > guard {
                    return Err(Error::InvalidInput(format!(
                        "path enumeration exceeded {guard} paths before the ideal closed; \
                         raise max_path_len only for genuinely admissible presentations"
                    )));
                }
            }
        }
        if level.is_empty() {
            by_len.push(level);
            break; // acyclic quiver: no longer paths exist
        }
        by_len.push(level);
    }
    Ok(PathTable {
        paths,
        by_len,
        index,
    })
}

/// Build the algebra, certifying that all paths of length `nil_degree` and
/// beyond vanish modulo the relation ideal.
pub fn build_algebra(pres: &QuiverPresentation, max_path_len: usize) -> Result<Arc<BasicAlgebra>> {
    pres.validate()?;
    let max_path_len = max_path_len.max(2);
    let spread: usize = pres
        .relations
        .iter()
        .map(|rel| {
            let lens: Vec<usize> = rel.iter().map(|t| t.path.len()).collect();
            lens.iter().max().unwrap_or(&0) - lens.iter().min().unwrap_or(&0)
        })
        .max()
        .unwrap_or(0);
    let max_rel_len = pres
        .relations
        .iter()
        .flat_map(|rel| rel.iter().map(|t| t.path.len()))
        .max()
        .unwrap_or(2);

    let mut schedule: Vec<usize> = vec![
        (max_rel_len + 3).min(max_path_len),
        (max_rel_len + 6).min(max_path_len),
        (2 * max_rel_len + 8).min(max_path_len),
        max_path_len,
    ];
    schedule.dedup();

    let mut last_err = Error::NotAdmissible {
        max_len: max_path_len,
    };
    for cap in schedule {
        match try_build(pres, cap, spread) {
            Ok(alg) => return Ok(Arc::new(alg)),
            Err(e @ Error::NotAdmissible { .. }) => last_err = e,
            Err(e) => return Err(e),
        }
    }
    Err(last_err)
}

fn try_build(pres: &QuiverPresentation, cap: usize, spread: usize) -> Result<BasicAlgebra> {
    let fp = pres.field;
    let table = enumerate_paths(pres, cap, 200_000)?;
    let npaths = table.paths.len();

    // Columns ordered longest-first so pivots land on long paths and the
    // surviving basis prefers short ones.
    let mut col_order: Vec<usize> = (0..npaths).collect();
    col_order.sort_by_key(|&id| (std::cmp::Reverse(table.paths[id].len()), id));
    let mut col_of_path = vec![0usize; npaths];
    for (c, &id) in col_order.iter().enumerate() {
        col_of_path[id] = c;
    }

    // Ideal closure rows: p * relation * q with every component representable.
    let mut rows: Vec<Vec<i64>> = Vec::new();
    for rel in &pres.relations {
        let terms: Vec<&RelationTerm> =
            rel.iter().filter(|t| t.coeff % fp.modulus() != 0).collect();
        let (rs, rt) = pres.path_endpoints(&terms[0].path)?;
        let rmax = terms.iter().map(|t| t.path.len()).max().unwrap();
        for left in table.paths.iter() {
            if left.target != rs || left.len() + rmax > cap {
                continue;
            }
            for right in table.paths.iter() {
                if right.source != rt || left.len() + rmax + right.len() > cap {
                    continue;
                }
                let mut row = vec![0i64; npaths];
                for t in &terms {
                    let mut word = left.arrows.clone();
                    word.extend_from_slice(&t.path);
                    word.extend_from_slice(&right.arrows);
                    let pid = *table
                        .index
                        .get(&(left.source, word))
                        .expect("composable product must be enumerated");
                    row[col_of_path[pid]] =
                        fp.add(fp.reduce(row[col_of_path[pid]]), t.coeff % fp.modulus()) as i64;
                }
                if row.iter().any(|&x| x != 0) {
                    rows.push(row);
                }
            }
        }
    }

    let gen_mat = Mat::from_rows(fp, &rows);
    let rref = if rows.is_empty() {
        Mat::zeros(fp, 0, npaths).rref()
    } else {
        gen_mat.rref()
    };

    // reduces_to_zero[path] = e_path lies in the ideal span.
    let mut pivot_row_of_col: HashMap<usize, usize> = HashMap::new();
    for (ri, &pc) in rref.pivots.iter().enumerate() {
        pivot_row_of_col.insert(pc, ri);
    }
    let is_pivot = |pid: usize| pivot_row_of_col.contains_key(&col_of_path[pid]);
    let reduces_to_zero = |pid: usize| -> bool {
        match pivot_row_of_col.get(&col_of_path[pid]) {
            None => false,
            Some(&ri) => (0..npaths).all(|c| c == col_of_path[pid] || rref.mat.get(ri, c) == 0),
        }
    };

    // Certify: some N with N + spread <= cap and every path of length in
    // [N, cap] reducing to zero (vacuous where no paths of that length exist).
    let longest_present = table.by_len.len() - 1;
    let mut nil_degree = None;
    'outer: for n in 1..=cap.saturating_sub(spread) {
        for len in n..=longest_present {
            if table.by_len.get(len).is_none() {
                break;
            }
            for &pid in &table.by_len[len] {
                if !reduces_to_zero(pid) {
                    continue 'outer;
                }
            }
        }
        nil_degree = Some(n);
        break;
    }
    let Some(nil_degree) = nil_degree else {
        return Err(Error::NotAdmissible { max_len: cap });
    };

    // Basis: non-pivot paths (necessarily of length < nil_degree), trivial
    // paths first, then by length and enumeration order.
    let mut basis_ids: Vec<usize> = (0..npaths).filter(|&pid| !is_pivot(pid)).collect();
    basis_ids.sort_by_key(|&pid| (table.paths[pid].len(), pid));
    for (k, &pid) in basis_ids.iter().take(pres.vertices.len()).enumerate() {
        debug_assert!(table.paths[pid].is_trivial() && table.paths[pid].source == k);
    }
    let basis_pos: HashMap<usize, usize> = basis_ids
        .iter()
        .enumerate()
        .map(|(pos, &pid)| (pid, pos))
        .collect();

    // Express any enumerated path in the basis.
    let reduce_path = |pid: usize| -> SparseVec {
        if let Some(&pos) = basis_pos.get(&pid) {
            return vec![(pos, 1)];
        }
        let ri = pivot_row_of_col[&col_of_path[pid]];
        let mut out: SparseVec = Vec::new();
        for (pos, &bid) in basis_ids.iter().enumerate() {
            let c = rref.mat.get(ri, col_of_path[bid]);
            if c != 0 {
                out.push((pos, fp.neg(c)));
            }
        }
        out.sort_unstable();
        out
    };

    let basis: Vec<PathMono> = basis_ids
        .iter()
        .map(|&pid| table.paths[pid].clone())
        .collect();
    let dim = basis.len();

    let mut arrow_basis = Vec::with_capacity(pres.arrows.len());
    for (aid, arrow) in pres.arrows.iter().enumerate() {
        let pid = table.index[&(arrow.from, vec![aid])];
        let pos = basis_pos.get(&pid).copied().ok_or_else(|| {
            Error::BadPresentation(format!(
                "arrow '{}' is reducible; the ideal is not admissible",
                arrow.name
            ))
        })?;
        arrow_basis.push(pos);
    }

    // Multiplication table by concatenate-and-reduce.
    let mut mult = vec![vec![SparseVec::new(); dim]; dim];
    for i in 0..dim {
        for j in 0..dim {
            if basis[i].target != basis[j].source {
                continue;
            }
            let total = basis[i].len() + basis[j].len();
            if total >= nil_degree {
                continue;
            }
            let mut word = basis[i].arrows.clone();
            word.extend_from_slice(&basis[j].arrows);
            let pid = table.index[&(basis[i].source, word)];
            mult[i][j] = reduce_path(pid);
        }
    }

    let n = pres.vertices.len();
    let mut by_pair = vec![vec![Vec::new(); n]; n];
    for (pos, b) in basis.iter().enumerate() {
        by_pair[b.source][b.target].push(pos);
    }

    let alg = BasicAlgebra {
        presentation: pres.clone(),
        idempotents: (0..n).collect(),
        arrow_basis,
        basis,
        mult,
        by_pair,
        nil_degree,
        si_cache: std::sync::OnceLock::new(),
    };
    debug_assert!(alg.verify_associativity());
    Ok(alg)
}
