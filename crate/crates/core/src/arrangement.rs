//! Exact hyperplane-arrangement overlay inside a bounding box, and the pulling
//! triangulation that turns its cells into a simplicial complex.
//!
//! Every refinement in the crate goes through here: the caller supplies a set
//! of hyperplanes such that each function of interest is constant on every
//! (relatively open) cell of the arrangement, plus an oracle evaluating those
//! functions at a point. Cells are obtained by splitting the box one
//! hyperplane at a time; lower-dimensional cells are the faces of the
//! chambers. Each cell carrying a nonzero value is triangulated by coning
//! from its lexicographically smallest vertex over the triangulations of the
//! facets that avoid it, which keeps shared faces consistent.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_traits::Zero;

use crate::complex::SimplicialComplex;
use crate::linalg;
use crate::polytope::Hyperplane;
use crate::scalar::{self, ExactScalar, Point};

#[derive(Clone, Debug)]
struct Cell {
    verts: Vec<usize>,
    dim: usize,
    facets: Vec<usize>,
}

#[derive(Clone, Debug)]
struct Chamber {
    constraints: Vec<(usize, Ordering)>,
    verts: Vec<usize>,
}

pub(crate) struct Overlay {
    dim: usize,
    vertices: Vec<Point>,
    cells: Vec<Cell>,
}

struct VertexPool {
    points: Vec<Point>,
    index: HashMap<Point, usize>,
}

impl VertexPool {
    fn intern(&mut self, p: Point) -> usize {
        if let Some(&i) = self.index.get(&p) {
            return i;
        }
        let i = self.points.len();
        self.index.insert(p.clone(), i);
        self.points.push(p);
        i
    }
}

impl Overlay {
    /// `lo`/`hi` must strictly contain the supports of all functions that will
    /// be evaluated on the result.
    pub fn build(dim: usize, hyperplanes: impl IntoIterator<Item = Hyperplane>, lo: &[ExactScalar], hi: &[ExactScalar]) -> Self {
        assert!((1..=3).contains(&dim), "overlay dimension must be 1..=3");
        let mut planes: Vec<Hyperplane> = Vec::new();
        for j in 0..dim {
            for bound in [&lo[j], &hi[j]] {
                let mut normal = vec![ExactScalar::zero(); dim];
                normal[j] = ExactScalar::from_integer(1.into());
                planes.push(Hyperplane::new(normal, bound.clone()).unwrap());
            }
        }
        let box_count = planes.len();
        let mut extra: BTreeSet<Hyperplane> = hyperplanes.into_iter().collect();
        for p in &planes {
            extra.remove(p);
        }
        planes.extend(extra);

        let mut pool = VertexPool {
            points: Vec::new(),
            index: HashMap::new(),
        };
        let corners: Vec<usize> = (0..1usize << dim)
            .map(|mask| {
                let p: Point = (0..dim)
                    .map(|j| if mask >> j & 1 == 1 { hi[j].clone() } else { lo[j].clone() })
                    .collect();
                pool.intern(p)
            })
            .collect();
        let constraints = (0..dim)
            .flat_map(|j| [(2 * j, Ordering::Greater), (2 * j + 1, Ordering::Less)])
            .collect();
        let mut chambers = vec![Chamber {
            constraints,
            verts: corners,
        }];

        for h in box_count..planes.len() {
            let mut next = Vec::with_capacity(chambers.len() * 2);
            for ch in chambers {
                match split(&ch, h, &planes, &mut pool, dim) {
                    Some((a, b)) => {
                        next.push(a);
                        next.push(b);
                    }
                    None => next.push(ch),
                }
            }
            chambers = next;
        }

        // renumber vertices lexicographically so that the minimal id is the pulling apex
        let mut order: Vec<usize> = (0..pool.points.len()).collect();
        order.sort_by(|&a, &b| pool.points[a].cmp(&pool.points[b]));
        let mut remap = vec![0; order.len()];
        for (new, &old) in order.iter().enumerate() {
            remap[old] = new;
        }
        let vertices: Vec<Point> = order.iter().map(|&old| pool.points[old].clone()).collect();
        for ch in &mut chambers {
            for v in &mut ch.verts {
                *v = remap[*v];
            }
            ch.verts.sort_unstable();
        }

        let mut cells: Vec<Cell> = Vec::new();
        let mut cell_index: HashMap<Vec<usize>, usize> = HashMap::new();
        for ch in &chambers {
            let faces = chamber_faces(ch, &planes, &vertices);
            let ids: Vec<usize> = faces
                .iter()
                .map(|f| {
                    *cell_index.entry(f.clone()).or_insert_with(|| {
                        let pts: Vec<&Point> = f.iter().map(|&v| &vertices[v]).collect();
                        cells.push(Cell {
                            verts: f.clone(),
                            dim: linalg::affine_dim(&pts).unwrap(),
                            facets: Vec::new(),
                        });
                        cells.len() - 1
                    })
                })
                .collect();
            for (a, &ia) in faces.iter().zip(&ids) {
                for (b, &ib) in faces.iter().zip(&ids) {
                    if cells[ib].dim + 1 == cells[ia].dim
                        && b.iter().all(|v| a.binary_search(v).is_ok())
                        && !cells[ia].facets.contains(&ib)
                    {
                        cells[ia].facets.push(ib);
                    }
                }
            }
        }
        Self {
            dim,
            vertices,
            cells,
        }
    }

    /// One relative-interior point per cell (vertex average).
    pub fn samples(&self) -> Vec<Point> {
        self.cells
            .iter()
            .map(|c| {
                let pts: Vec<&Point> = c.verts.iter().map(|&v| &self.vertices[v]).collect();
                scalar::centroid(&pts)
            })
            .collect()
    }

    /// A second relative-interior point per cell, distinct from [`Self::samples`]
    /// whenever the cell is not a point.
    #[cfg(debug_assertions)]
    pub fn alternate_samples(&self) -> Vec<Point> {
        let three = ExactScalar::from_integer(3.into());
        let four = ExactScalar::from_integer(4.into());
        self.samples()
            .into_iter()
            .zip(&self.cells)
            .map(|(c, cell)| {
                let v = &self.vertices[cell.verts[0]];
                c.iter().zip(v).map(|(a, b)| (a * &three + b) / &four).collect()
            })
            .collect()
    }

    /// Triangulates every cell on which some function is nonzero. `values[f][c]`
    /// is the value of function `f` on cell `c`. Returns one complex and one weight
    /// map (simplex id to weight, zeros omitted) per function.
    pub fn triangulate(&self, values: &[Vec<i64>]) -> (SimplicialComplex, Vec<BTreeMap<usize, i64>>) {
        let mut memo: HashMap<usize, Vec<Vec<usize>>> = HashMap::new();
        let mut all: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut open_of: Vec<(usize, Vec<Vec<usize>>)> = Vec::new();
        for c in 0..self.cells.len() {
            if values.iter().all(|v| v[c] == 0) {
                continue;
            }
            let closed = self.closed_triangulation(c, &mut memo);
            let open: Vec<Vec<usize>> = closed
                .iter()
                .filter(|s| {
                    !self.cells[c]
                        .facets
                        .iter()
                        .any(|&g| s.iter().all(|v| self.cells[g].verts.binary_search(v).is_ok()))
                })
                .cloned()
                .collect();
            all.extend(closed);
            open_of.push((c, open));
        }
        // compact the vertex set
        let used: BTreeSet<usize> = all.iter().flatten().copied().collect();
        let remap: HashMap<usize, usize> = used.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let vertices: Vec<Point> = used.iter().map(|&v| self.vertices[v].clone()).collect();
        let simplices: Vec<Vec<usize>> = all
            .iter()
            .map(|s| s.iter().map(|v| remap[v]).collect())
            .collect();
        let complex = SimplicialComplex::new_unchecked(self.dim, vertices, simplices);
        let ids: HashMap<&[usize], usize> = complex
            .simplices()
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_slice(), i))
            .collect();
        let mut weights = vec![BTreeMap::new(); values.len()];
        for (c, open) in &open_of {
            for s in open {
                let key: Vec<usize> = s.iter().map(|v| remap[v]).collect();
                let id = ids[key.as_slice()];
                for (f, vals) in values.iter().enumerate() {
                    if vals[*c] != 0 {
                        weights[f].insert(id, vals[*c]);
                    }
                }
            }
        }
        (complex, weights)
    }

    fn closed_triangulation(&self, c: usize, memo: &mut HashMap<usize, Vec<Vec<usize>>>) -> Vec<Vec<usize>> {
        if let Some(t) = memo.get(&c) {
            return t.clone();
        }
        let cell = &self.cells[c];
        let result = if cell.dim == 0 {
            vec![cell.verts.clone()]
        } else {
            let apex = cell.verts[0];
            let mut out: BTreeSet<Vec<usize>> = BTreeSet::new();
            for &g in &cell.facets.clone() {
                let tri = self.closed_triangulation(g, memo);
                let avoids = self.cells[g].verts.binary_search(&apex).is_err();
                for s in tri {
                    if avoids {
                        let mut cone = s.clone();
                        cone.push(apex);
                        cone.sort_unstable();
                        out.insert(cone);
                    }
                    out.insert(s);
                }
            }
            out.insert(vec![apex]);
            out.into_iter().collect()
        };
        memo.insert(c, result.clone());
        result
    }
}

fn tight_sets(ch: &Chamber, planes: &[Hyperplane], vertices: &[Point]) -> Vec<Vec<usize>> {
    ch.verts
        .iter()
        .map(|&v| {
            (0..ch.constraints.len())
                .filter(|&k| planes[ch.constraints[k].0].eval(&vertices[v]).is_zero())
                .collect()
        })
        .collect()
}

fn split(ch: &Chamber, h: usize, planes: &[Hyperplane], pool: &mut VertexPool, dim: usize) -> Option<(Chamber, Chamber)> {
    let vals: Vec<ExactScalar> = ch.verts.iter().map(|&v| planes[h].eval(&pool.points[v])).collect();
    let zero = ExactScalar::zero();
    let has_pos = vals.iter().any(|x| *x > zero);
    let has_neg = vals.iter().any(|x| *x < zero);
    if !(has_pos && has_neg) {
        return None;
    }
    let tight = tight_sets(ch, planes, &pool.points);
    let mut pos: Vec<usize> = Vec::new();
    let mut neg: Vec<usize> = Vec::new();
    for (i, &v) in ch.verts.iter().enumerate() {
        if vals[i] >= zero {
            pos.push(v);
        }
        if vals[i] <= zero {
            neg.push(v);
        }
    }
    for i in 0..ch.verts.len() {
        if vals[i] <= zero {
            continue;
        }
        for j in 0..ch.verts.len() {
            if vals[j] >= zero {
                continue;
            }
            let common: Vec<Point> = tight[i]
                .iter()
                .filter(|k| tight[j].contains(k))
                .map(|&k| planes[ch.constraints[k].0].normal.clone())
                .collect();
            if linalg::rank(&common) + 1 != dim {
                continue;
            }
            let u = &pool.points[ch.verts[i]];
            let w = &pool.points[ch.verts[j]];
            let t = &vals[i] / (&vals[i] - &vals[j]);
            let p = scalar::add(u, &scalar::scale(&scalar::sub(w, u), &t));
            let id = pool.intern(p);
            pos.push(id);
            neg.push(id);
        }
    }
    pos.sort_unstable();
    pos.dedup();
    neg.sort_unstable();
    neg.dedup();
    let mut pc = ch.constraints.clone();
    pc.push((h, Ordering::Greater));
    let mut nc = ch.constraints.clone();
    nc.push((h, Ordering::Less));
    Some((
        Chamber {
            constraints: pc,
            verts: pos,
        },
        Chamber {
            constraints: nc,
            verts: neg,
        },
    ))
}

/// All nonempty faces of a chamber (including itself) as sorted vertex-id lists.
fn chamber_faces(ch: &Chamber, planes: &[Hyperplane], vertices: &[Point]) -> Vec<Vec<usize>> {
    let tight = tight_sets(ch, planes, vertices);
    let mut faces: BTreeSet<Vec<usize>> = BTreeSet::new();
    for k in 0..ch.constraints.len() {
        let f: Vec<usize> = ch
            .verts
            .iter()
            .zip(&tight)
            .filter(|(_, t)| t.contains(&k))
            .map(|(&v, _)| v)
            .collect();
        if !f.is_empty() {
            faces.insert(f);
        }
    }
    let mut frontier: Vec<Vec<usize>> = faces.iter().cloned().collect();
    while !frontier.is_empty() {
        let mut fresh = Vec::new();
        let current: Vec<Vec<usize>> = faces.iter().cloned().collect();
        for a in &frontier {
            for b in &current {
                let inter: Vec<usize> = a.iter().filter(|v| b.binary_search(v).is_ok()).copied().collect();
                if !inter.is_empty() && !faces.contains(&inter) {
                    faces.insert(inter.clone());
                    fresh.push(inter);
                }
            }
        }
        frontier = fresh;
    }
    faces.insert(ch.verts.clone());
    faces.into_iter().collect()
}
