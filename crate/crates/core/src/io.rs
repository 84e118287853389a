//! JSON document formats and the built-in fixture algebras.
//!
//! One document = one object. Unknown keys are rejected. Integer entries are
//! reduced mod p on load and module docs are re-validated against the
//! relations of their algebra.

use crate::algebra::{build_algebra, Arrow, BasicAlgebra, QuiverPresentation, RelationTerm};
use crate::error::{Error, Result};
use crate::field::{Fp, Mat};
use crate::rep::{self, Rep};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::sync::Arc;

pub const DEFAULT_MAX_PATH_LEN: usize = 30;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldDoc {
    pub char: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrowDoc {
    pub name: String,
    pub from: String,
    pub to: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelationTermDoc {
    pub coeff: i64,
    pub path: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraDoc {
    pub field: FieldDoc,
    pub vertices: Vec<String>,
    pub arrows: Vec<ArrowDoc>,
    pub relations: Vec<Vec<RelationTermDoc>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_path_len: Option<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleDoc {
    pub algebra: String,
    /// vertex name -> dimension (absent vertices are zero)
    pub dims: BTreeMap<String, usize>,
    /// arrow name -> row-major matrix, shape dims[from] x dims[to]
    pub matrices: BTreeMap<String, Vec<Vec<i64>>>,
}

impl AlgebraDoc {
    pub fn to_presentation(&self) -> Result<QuiverPresentation> {
        let field = Fp::new(self.field.char)?;
        let vertices = self.vertices.clone();
        let vidx = |name: &str| -> Result<usize> {
            vertices
                .iter()
                .position(|v| v == name)
                .ok_or_else(|| Error::BadPresentation(format!("unknown vertex '{name}'")))
        };
        let mut arrows = Vec::new();
        for a in &self.arrows {
            arrows.push(Arrow {
                name: a.name.clone(),
                from: vidx(&a.from)?,
                to: vidx(&a.to)?,
            });
        }
        let aidx = |name: &str| -> Result<usize> {
            arrows
                .iter()
                .position(|a| a.name == name)
                .ok_or_else(|| Error::BadPresentation(format!("unknown arrow '{name}'")))
        };
        let mut relations = Vec::new();
        for rel in &self.relations {
            let mut terms = Vec::new();
            for t in rel {
                let path: Result<Vec<usize>> = t.path.iter().map(|s| aidx(s)).collect();
                terms.push(RelationTerm {
                    coeff: field.reduce(t.coeff),
                    path: path?,
                });
            }
            relations.push(terms);
        }
        let pres = QuiverPresentation {
            field,
            vertices,
            arrows,
            relations,
        };
        pres.validate()?;
        Ok(pres)
    }

    pub fn build(&self) -> Result<Arc<BasicAlgebra>> {
        let pres = self.to_presentation()?;
        build_algebra(&pres, self.max_path_len.unwrap_or(DEFAULT_MAX_PATH_LEN))
    }
}

pub fn algebra_to_doc(alg: &BasicAlgebra, max_path_len: Option<usize>) -> AlgebraDoc {
    let pres = &alg.presentation;
    AlgebraDoc {
        field: FieldDoc {
            char: pres.field.modulus() as u64,
        },
        vertices: pres.vertices.clone(),
        arrows: pres
            .arrows
            .iter()
            .map(|a| ArrowDoc {
                name: a.name.clone(),
                from: pres.vertices[a.from].clone(),
                to: pres.vertices[a.to].clone(),
            })
            .collect(),
        relations: pres
            .relations
            .iter()
            .map(|rel| {
                rel.iter()
                    .map(|t| RelationTermDoc {
                        coeff: t.coeff as i64,
                        path: t
                            .path
                            .iter()
                            .map(|&a| pres.arrows[a].name.clone())
                            .collect(),
                    })
                    .collect()
            })
            .collect(),
        max_path_len,
    }
}

pub fn rep_to_doc(rep: &Rep, algebra_id: &str) -> ModuleDoc {
    let alg = rep.algebra();
    let pres = &alg.presentation;
    let mut dims = BTreeMap::new();
    for (v, &d) in rep.dims().iter().enumerate() {
        if d > 0 {
            dims.insert(pres.vertices[v].clone(), d);
        }
    }
    let mut matrices = BTreeMap::new();
    for (aid, arrow) in pres.arrows.iter().enumerate() {
        let m = rep.arrow_action(aid);
        if m.rows() == 0 || m.cols() == 0 || m.is_zero() {
            continue;
        }
        let rows: Vec<Vec<i64>> = (0..m.rows())
            .map(|i| m.row(i).iter().map(|&x| x as i64).collect())
            .collect();
        matrices.insert(arrow.name.clone(), rows);
    }
    ModuleDoc {
        algebra: algebra_id.to_string(),
        dims,
        matrices,
    }
}

pub fn doc_to_rep(doc: &ModuleDoc, alg: &Arc<BasicAlgebra>) -> Result<Rep> {
    let pres = &alg.presentation;
    let field = alg.field();
    let mut dims = vec![0usize; pres.vertices.len()];
    for (name, &d) in &doc.dims {
        let v = pres
            .vertices
            .iter()
            .position(|x| x == name)
            .ok_or_else(|| Error::InvalidInput(format!("unknown vertex '{name}' in module doc")))?;
        dims[v] = d;
    }
    let mut action = Vec::new();
    for arrow in &pres.arrows {
        let (r, c) = (dims[arrow.from], dims[arrow.to]);
        let m = match doc.matrices.get(&arrow.name) {
            None => Mat::zeros(field, r, c),
            Some(rows) => {
                if rows.len() != r || rows.iter().any(|row| row.len() != c) {
                    return Err(Error::DimensionMismatch(format!(
                        "matrix for arrow '{}' must be {}x{}",
                        arrow.name, r, c
                    )));
                }
                Mat::from_rows(field, rows)
            }
        };
        action.push(m);
    }
    for name in doc.matrices.keys() {
        if !pres.arrows.iter().any(|a| &a.name == name) {
            return Err(Error::InvalidInput(format!(
                "unknown arrow '{name}' in module doc"
            )));
        }
    }
    Rep::new(alg.clone(), dims, action)
}

// ---------------------------------------------------------------------------
// Two-term complexes and SMS member files
// ---------------------------------------------------------------------------

/// Serialized two-term complex: summand vertex names per degree (in summand
/// order) plus the differential blocks of the module realization, one
/// row-major matrix per vertex.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexDoc {
    pub algebra: String,
    pub deg0: Vec<String>,
    pub deg1: Vec<String>,
    pub differential: BTreeMap<String, Vec<Vec<i64>>>,
}

pub fn complex_to_doc(t: &crate::tilt::TwoTermComplex, algebra_id: &str) -> ComplexDoc {
    let alg = t.algebra();
    let pres = &alg.presentation;
    let (_, _, d) = t.realize();
    let mut differential = BTreeMap::new();
    for (v, block) in d.blocks.iter().enumerate() {
        if block.rows() == 0 || block.cols() == 0 {
            continue;
        }
        let rows: Vec<Vec<i64>> = (0..block.rows())
            .map(|i| block.row(i).iter().map(|&x| x as i64).collect())
            .collect();
        differential.insert(pres.vertices[v].clone(), rows);
    }
    ComplexDoc {
        algebra: algebra_id.to_string(),
        deg0: t.deg0.iter().map(|&v| pres.vertices[v].clone()).collect(),
        deg1: t.deg1.iter().map(|&v| pres.vertices[v].clone()).collect(),
        differential,
    }
}

pub fn doc_to_complex(
    doc: &ComplexDoc,
    alg: &Arc<BasicAlgebra>,
) -> Result<crate::tilt::TwoTermComplex> {
    let pres = &alg.presentation;
    let vidx = |name: &str| -> Result<usize> {
        pres.vertices
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::InvalidInput(format!("unknown vertex '{name}' in complex doc")))
    };
    let deg0: Vec<usize> = doc.deg0.iter().map(|n| vidx(n)).collect::<Result<_>>()?;
    let deg1: Vec<usize> = doc.deg1.iter().map(|n| vidx(n)).collect::<Result<_>>()?;
    let m0 = crate::tilt::sum_in_order(alg, &deg0);
    let m1 = crate::tilt::sum_in_order(alg, &deg1);
    let field = alg.field();
    let mut blocks = Vec::new();
    for v in 0..pres.vertices.len() {
        let (r, c) = (m0.dims()[v], m1.dims()[v]);
        let block = match doc.differential.get(&pres.vertices[v]) {
            None => Mat::zeros(field, r, c),
            Some(rows) => {
                if rows.len() != r || rows.iter().any(|row| row.len() != c) {
                    return Err(Error::DimensionMismatch(format!(
                        "differential block at vertex '{}' must be {}x{}",
                        pres.vertices[v], r, c
                    )));
                }
                Mat::from_rows(field, rows)
            }
        };
        blocks.push(block);
    }
    let d = crate::rep::ModMap::new(m0, m1, blocks)?;
    let entries = crate::rep::projective_map_elements(
        &d,
        &crate::tilt::layout_pairs(&deg0),
        &crate::tilt::layout_pairs(&deg1),
    );
    Ok(crate::tilt::TwoTermComplex::new(
        alg.clone(),
        deg0,
        deg1,
        entries,
    ))
}

/// A named module for SMS member files.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NamedModuleDoc {
    pub name: String,
    pub module: ModuleDoc,
}

/// SMS member file: a list of named modules over one algebra.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SmsDoc {
    pub members: Vec<NamedModuleDoc>,
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

/// Command report: deterministic for fixed inputs and seed, except for the
/// optional timing field (omit it when comparing reports byte for byte).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportDoc {
    pub command: String,
    pub seed: u64,
    pub algebra: String,
    pub verdicts: serde_json::Value,
    pub certificates: serde_json::Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
}

// ---------------------------------------------------------------------------
// Built-in fixtures
// ---------------------------------------------------------------------------

pub struct Fixture {
    pub name: String,
    pub algebra: Arc<BasicAlgebra>,
    pub doc: AlgebraDoc,
    pub modules: Vec<(String, Rep)>,
}

impl Fixture {
    pub fn module(&self, name: &str) -> Option<&Rep> {
        self.modules.iter().find(|(n, _)| n == name).map(|(_, m)| m)
    }

    pub fn module_names(&self) -> Vec<&str> {
        self.modules.iter().map(|(n, _)| n.as_str()).collect()
    }
}

pub mod fixtures {
    use super::*;

    pub fn by_name(name: &str) -> Result<Fixture> {
        match name {
            "example3" => example3(3),
            "example4" => example4(),
            "example5" => example5(),
            other => Err(Error::InvalidInput(format!(
                "unknown builtin algebra '{other}' (available: example3, example4, example5)"
            ))),
        }
    }

    /// Nakayama algebra on one 3-cycle with all length-3 paths zero.
    /// The characteristic is structurally irrelevant; 3 is the default.
    pub fn example3(p: u64) -> Result<Fixture> {
        let doc = AlgebraDoc {
            field: FieldDoc { char: p },
            vertices: vec!["1".into(), "2".into(), "3".into()],
            arrows: vec![
                ArrowDoc {
                    name: "a1".into(),
                    from: "1".into(),
                    to: "2".into(),
                },
                ArrowDoc {
                    name: "a2".into(),
                    from: "2".into(),
                    to: "3".into(),
                },
                ArrowDoc {
                    name: "a3".into(),
                    from: "3".into(),
                    to: "1".into(),
                },
            ],
            relations: vec![
                vec![RelationTermDoc {
                    coeff: 1,
                    path: vec!["a1".into(), "a2".into(), "a3".into()],
                }],
                vec![RelationTermDoc {
                    coeff: 1,
                    path: vec!["a2".into(), "a3".into(), "a1".into()],
                }],
                vec![RelationTermDoc {
                    coeff: 1,
                    path: vec!["a3".into(), "a1".into(), "a2".into()],
                }],
            ],
            max_path_len: None,
        };
        let algebra = doc.build()?;
        if algebra.dim() != 9 {
            return Err(Error::InvalidInput(format!(
                "example3 fixture built with dim {} instead of 9",
                algebra.dim()
            )));
        }
        let mut modules = Vec::new();
        for i in 0..3 {
            modules.push((format!("S{}", i + 1), rep::simple(&algebra, i)));
        }
        for i in 0..3 {
            modules.push((format!("P{}", i + 1), rep::projective(&algebra, i)));
        }
        Ok(Fixture {
            name: "example3".into(),
            algebra,
            doc,
            modules,
        })
    }

    /// Group algebra of the dihedral group of order 8 in characteristic 2,
    /// presented as k<a,b>/(a^2, b^2, (ab)^2 + (ba)^2), together with the
    /// 3-dimensional endo-trivial module L.
    pub fn example4() -> Result<Fixture> {
        let doc = AlgebraDoc {
            field: FieldDoc { char: 2 },
            vertices: vec!["v".into()],
            arrows: vec![
                ArrowDoc {
                    name: "a".into(),
                    from: "v".into(),
                    to: "v".into(),
                },
                ArrowDoc {
                    name: "b".into(),
                    from: "v".into(),
                    to: "v".into(),
                },
            ],
            relations: vec![
                vec![RelationTermDoc {
                    coeff: 1,
                    path: vec!["a".into(), "a".into()],
                }],
                vec![RelationTermDoc {
                    coeff: 1,
                    path: vec!["b".into(), "b".into()],
                }],
                vec![
                    RelationTermDoc {
                        coeff: 1,
                        path: vec!["a".into(), "b".into(), "a".into(), "b".into()],
                    },
                    RelationTermDoc {
                        coeff: 1,
                        path: vec!["b".into(), "a".into(), "b".into(), "a".into()],
                    },
                ],
            ],
            max_path_len: None,
        };
        let algebra = doc.build()?;
        if algebra.dim() != 8 {
            return Err(Error::InvalidInput(format!(
                "example4 fixture built with dim {} instead of 8",
                algebra.dim()
            )));
        }
        // L = kG / (a kG + bab kG): basis images of 1, b, ba
        let l_doc = ModuleDoc {
            algebra: "example4".into(),
            dims: [("v".to_string(), 3)].into_iter().collect(),
            matrices: [
                (
                    "a".to_string(),
                    vec![vec![0, 0, 0], vec![0, 0, 1], vec![0, 0, 0]],
                ),
                (
                    "b".to_string(),
                    vec![vec![0, 1, 0], vec![0, 0, 0], vec![0, 0, 0]],
                ),
            ]
            .into_iter()
            .collect(),
        };
        let l = doc_to_rep(&l_doc, &algebra)?;
        let modules = vec![
            ("S".to_string(), rep::simple(&algebra, 0)),
            ("L".to_string(), l),
            ("P".to_string(), rep::projective(&algebra, 0)),
        ];
        Ok(Fixture {
            name: "example4".into(),
            algebra,
            doc,
            modules,
        })
    }

    /// The principal block of the normalizer of a Sylow 3-subgroup of A_6 in
    /// characteristic 3: square quiver on vertices k, 1, 2, 3 with clockwise
    /// arrows u and counterclockwise arrows v, relations u^3 = v^3 = 0 and
    /// uv = vu componentwise. The printed projective graphs and the Cartan
    /// matrix are re-verified every time the fixture is built.
    pub fn example5() -> Result<Fixture> {
        let verts = ["k", "1", "2", "3"];
        let mut arrows = Vec::new();
        // u_j: j -> j-1 (mod 4), v_j: j -> j+1 (mod 4)
        for j in 0..4usize {
            arrows.push(ArrowDoc {
                name: format!("u{}", verts[j]),
                from: verts[j].into(),
                to: verts[(j + 3) % 4].into(),
            });
        }
        for j in 0..4usize {
            arrows.push(ArrowDoc {
                name: format!("v{}", verts[j]),
                from: verts[j].into(),
                to: verts[(j + 1) % 4].into(),
            });
        }
        let u = |j: usize| format!("u{}", verts[j % 4]);
        let v = |j: usize| format!("v{}", verts[j % 4]);
        let mut relations = Vec::new();
        for j in 0..4usize {
            relations.push(vec![RelationTermDoc {
                coeff: 1,
                path: vec![u(j), u(j + 3), u(j + 2)],
            }]);
        }
        for j in 0..4usize {
            relations.push(vec![RelationTermDoc {
                coeff: 1,
                path: vec![v(j), v(j + 1), v(j + 2)],
            }]);
        }
        for j in 0..4usize {
            relations.push(vec![
                RelationTermDoc {
                    coeff: 1,
                    path: vec![u(j), v(j + 3)],
                },
                RelationTermDoc {
                    coeff: -1,
                    path: vec![v(j), u(j + 1)],
                },
            ]);
        }
        let doc = AlgebraDoc {
            field: FieldDoc { char: 3 },
            vertices: verts.iter().map(|s| s.to_string()).collect(),
            arrows,
            relations,
            max_path_len: None,
        };
        let algebra = doc.build()?;
        certify_example5(&algebra)?;

        let mut modules = Vec::new();
        for (i, name) in verts.iter().enumerate() {
            modules.push((format!("S{name}"), rep::simple(&algebra, i)));
        }
        for (i, name) in verts.iter().enumerate() {
            modules.push((format!("P{name}"), rep::projective(&algebra, i)));
        }
        // Z_0 = trivial (simple at k)
        modules.push(("Z0".to_string(), rep::simple(&algebra, 0)));
        // Z_1 = uniserial 1 / k / 3 along u1 then uk
        let z1 = ModuleDoc {
            algebra: "example5".into(),
            dims: [
                ("1".to_string(), 1),
                ("k".to_string(), 1),
                ("3".to_string(), 1),
            ]
            .into_iter()
            .collect(),
            matrices: [
                ("u1".to_string(), vec![vec![1]]),
                ("uk".to_string(), vec![vec![1]]),
            ]
            .into_iter()
            .collect(),
        };
        modules.push(("Z1".to_string(), doc_to_rep(&z1, &algebra)?));
        // Z_2 = 2 / (1 3) / 2
        let z2 = ModuleDoc {
            algebra: "example5".into(),
            dims: [
                ("2".to_string(), 2),
                ("1".to_string(), 1),
                ("3".to_string(), 1),
            ]
            .into_iter()
            .collect(),
            matrices: [
                // basis of the vertex-2 space: (top, socle)
                ("u2".to_string(), vec![vec![1], vec![0]]),
                ("v2".to_string(), vec![vec![1], vec![0]]),
                ("v1".to_string(), vec![vec![0, 1]]),
                ("u3".to_string(), vec![vec![0, 1]]),
            ]
            .into_iter()
            .collect(),
        };
        modules.push(("Z2".to_string(), doc_to_rep(&z2, &algebra)?));
        // Z_3 = uniserial 3 / k / 1 along v3 then vk
        let z3 = ModuleDoc {
            algebra: "example5".into(),
            dims: [
                ("3".to_string(), 1),
                ("k".to_string(), 1),
                ("1".to_string(), 1),
            ]
            .into_iter()
            .collect(),
            matrices: [
                ("v3".to_string(), vec![vec![1]]),
                ("vk".to_string(), vec![vec![1]]),
            ]
            .into_iter()
            .collect(),
        };
        modules.push(("Z3".to_string(), doc_to_rep(&z3, &algebra)?));

        certify_example5_modules(&modules)?;
        Ok(Fixture {
            name: "example5".into(),
            algebra,
            doc,
            modules,
        })
    }

    /// The printed data for example5: total dimension 36, all-9 Cartan rows,
    /// and the five-layer projective graphs.
    fn certify_example5(alg: &Arc<BasicAlgebra>) -> Result<()> {
        let fail = |what: &str| {
            Err(Error::InvalidInput(format!(
                "example5 fixture deviates from the printed data: {what}"
            )))
        };
        if alg.dim() != 36 {
            return fail("dimension is not 36");
        }
        let cartan = alg.cartan_matrix();
        for i in 0..4 {
            for j in 0..4 {
                // diagonal 3, every other entry 2 (rows sum to 9)
                let expected = if i == j { 3 } else { 2 };
                if cartan[i][j] != expected {
                    return fail("Cartan matrix mismatch");
                }
            }
        }
        for i in 0..4 {
            let p = rep::projective(alg, i);
            let layers = rep::loewy_layers(&p);
            // layers: [i], [i-1, i+1], [i, i+2, i+2], [i-1, i+1], [i]
            let mut expect = vec![vec![0usize; 4]; 5];
            expect[0][i] = 1;
            expect[1][(i + 3) % 4] = 1;
            expect[1][(i + 1) % 4] = 1;
            expect[2][i] = 1;
            expect[2][(i + 2) % 4] = 2;
            expect[3][(i + 3) % 4] = 1;
            expect[3][(i + 1) % 4] = 1;
            expect[4][i] = 1;
            if layers != expect {
                return fail("projective Loewy graph mismatch");
            }
        }
        Ok(())
    }

    fn certify_example5_modules(modules: &[(String, Rep)]) -> Result<()> {
        let get = |name: &str| -> &Rep { &modules.iter().find(|(n, _)| n == name).unwrap().1 };
        let fail = |what: &str| {
            Err(Error::InvalidInput(format!(
                "example5 fixture deviates from the printed data: {what}"
            )))
        };
        // Z_1: layers 1 / k / 3; Z_3: layers 3 / k / 1; Z_2: 2 / (1 3) / 2
        let z1 = rep::loewy_layers(get("Z1"));
        if z1 != vec![vec![0, 1, 0, 0], vec![1, 0, 0, 0], vec![0, 0, 0, 1]] {
            return fail("Z1 graph mismatch");
        }
        let z3 = rep::loewy_layers(get("Z3"));
        if z3 != vec![vec![0, 0, 0, 1], vec![1, 0, 0, 0], vec![0, 1, 0, 0]] {
            return fail("Z3 graph mismatch");
        }
        let z2 = rep::loewy_layers(get("Z2"));
        if z2 != vec![vec![0, 0, 1, 0], vec![0, 1, 0, 1], vec![0, 0, 1, 0]] {
            return fail("Z2 graph mismatch");
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_build() {
        let fx3 = fixtures::example3(3).unwrap();
        assert_eq!(fx3.algebra.dim(), 9);
        let fx4 = fixtures::example4().unwrap();
        assert_eq!(fx4.algebra.dim(), 8);
        let fx5 = fixtures::example5().unwrap();
        assert_eq!(fx5.algebra.dim(), 36);
        assert_eq!(fx5.module("Z2").unwrap().dim_total(), 4);
    }

    #[test]
    fn algebra_doc_roundtrip() {
        let fx = fixtures::example3(5).unwrap();
        let json = serde_json::to_string(&fx.doc).unwrap();
        let parsed: AlgebraDoc = serde_json::from_str(&json).unwrap();
        let rebuilt = parsed.build().unwrap();
        assert_eq!(rebuilt.dim(), fx.algebra.dim());
        assert_eq!(serde_json::to_string(&parsed).unwrap(), json);
    }

    #[test]
    fn module_doc_roundtrip() {
        let fx = fixtures::example5().unwrap();
        let z2 = fx.module("Z2").unwrap();
        let doc = rep_to_doc(z2, "example5");
        let json = serde_json::to_string(&doc).unwrap();
        let parsed: ModuleDoc = serde_json::from_str(&json).unwrap();
        let rebuilt = doc_to_rep(&parsed, &fx.algebra).unwrap();
        assert_eq!(&rebuilt, z2);
    }

    #[test]
    fn unknown_keys_rejected() {
        let bad =
            r#"{"field":{"char":3},"vertices":["1"],"arrows":[],"relations":[],"surprise":1}"#;
        assert!(serde_json::from_str::<AlgebraDoc>(bad).is_err());
        let bad_field =
            r#"{"field":{"char":3,"degree":2},"vertices":["1"],"arrows":[],"relations":[]}"#;
        assert!(serde_json::from_str::<AlgebraDoc>(bad_field).is_err());
    }

    #[test]
    fn module_doc_validates_relations() {
        let fx = fixtures::example3(3).unwrap();
        // a fake "module" violating the composability/relation structure:
        // putting identity on every arrow of the 3-cycle makes the length-3
        // relation act as identity, not zero
        let doc = ModuleDoc {
            algebra: "example3".into(),
            dims: [("1".into(), 1), ("2".into(), 1), ("3".into(), 1)]
                .into_iter()
                .collect(),
            matrices: [
                ("a1".to_string(), vec![vec![1]]),
                ("a2".to_string(), vec![vec![1]]),
                ("a3".to_string(), vec![vec![1]]),
            ]
            .into_iter()
            .collect(),
        };
        assert!(doc_to_rep(&doc, &fx.algebra).is_err());
    }

    #[test]
    fn complex_doc_roundtrip() {
        let fx = fixtures::example5().unwrap();
        let mut rng = crate::rng::DetRng::new(0);
        let t = crate::tilt::build_okuyama(&fx.algebra, &[0, 1, 3], &mut rng).unwrap();
        let doc = complex_to_doc(&t, "example5");
        let json = serde_json::to_string(&doc).unwrap();
        let parsed: ComplexDoc = serde_json::from_str(&json).unwrap();
        let back = doc_to_complex(&parsed, &fx.algebra).unwrap();
        assert_eq!(back.deg0, t.deg0);
        assert_eq!(back.deg1, t.deg1);
        assert_eq!(back.diff.entries, t.diff.entries);
    }

    #[test]
    fn report_doc_roundtrip() {
        let report = ReportDoc {
            command: "sms verify".into(),
            seed: 5,
            algebra: "example3".into(),
            verdicts: serde_json::json!({"sms": true}),
            certificates: serde_json::json!({"members": []}),
            timing_ms: None,
        };
        let json = serde_json::to_string(&report).unwrap();
        let parsed: ReportDoc = serde_json::from_str(&json).unwrap();
        assert_eq!(serde_json::to_string(&parsed).unwrap(), json);
    }

    #[test]
    fn integers_reduced_mod_p() {
        let fx = fixtures::example3(3).unwrap();
        let doc = ModuleDoc {
            algebra: "example3".into(),
            dims: [("1".into(), 1)].into_iter().collect(),
            matrices: [("a1".to_string(), vec![vec![3]])].into_iter().collect(),
        };
        // 3 = 0 mod 3, and the a1 matrix must be 1x0 anyway -> shape error
        assert!(doc_to_rep(&doc, &fx.algebra).is_err());
        let doc2 = ModuleDoc {
            algebra: "example3".into(),
            dims: [("1".into(), 1), ("2".into(), 1)].into_iter().collect(),
            matrices: [("a1".to_string(), vec![vec![-2]])].into_iter().collect(),
        };
        let rep = doc_to_rep(&doc2, &fx.algebra).unwrap();
        assert_eq!(rep.arrow_action(0).get(0, 0), 1);
    }
}
