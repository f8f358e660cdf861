//! Shared oracles and randomized generators for the integration suites.
//!
//! Everything here is deliberately independent of the library's own
//! elimination paths: simplicial models are built from raw facet lists,
//! ranks and determinants come from fraction-free elimination, and random
//! pages are grown boundary-first with kernel-sampled attaching maps so
//! validity is by construction rather than by rejection.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use varbook::abgroup::FgAbelianGroup;
use varbook::chainkit::{ChainComplex, ChainMap};
use varbook::openbook::{formula_path_eligible, Monodromy, PageData};
use varbook::zlinalg::{kernel_basis, IntMatrix};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn group(free: usize, torsion: &[u64]) -> FgAbelianGroup {
    FgAbelianGroup::from_parts(free, torsion.iter().map(|&t| BigInt::from(t)).collect()).unwrap()
}

pub mod simplicial {
    use super::*;
    use std::collections::{BTreeMap, BTreeSet};

    /// Ordered simplicial chain complex from a facet list. Vertices are
    /// arbitrary integers; each simplex is oriented by increasing vertex
    /// order and the boundary uses alternating signs on vertex deletion.
    pub fn complex_from_facets(facets: &[Vec<i64>]) -> ChainComplex {
        assert!(!facets.is_empty(), "need at least one facet");
        let mut by_dim: Vec<BTreeSet<Vec<i64>>> = Vec::new();
        for facet in facets {
            let mut sorted = facet.clone();
            sorted.sort_unstable();
            sorted.dedup();
            assert_eq!(sorted.len(), facet.len(), "facet has repeated vertices");
            let n = sorted.len();
            for mask in 1u32..(1 << n) {
                let subset: Vec<i64> = (0..n)
                    .filter(|i| mask & (1 << i) != 0)
                    .map(|i| sorted[i])
                    .collect();
                let d = subset.len() - 1;
                if by_dim.len() <= d {
                    by_dim.resize(d + 1, BTreeSet::new());
                }
                by_dim[d].insert(subset);
            }
        }
        let index: Vec<BTreeMap<&Vec<i64>, usize>> = by_dim
            .iter()
            .map(|set| set.iter().enumerate().map(|(i, s)| (s, i)).collect())
            .collect();
        let ranks: Vec<usize> = by_dim.iter().map(|set| set.len()).collect();
        let boundaries: Vec<IntMatrix> = (1..ranks.len())
            .map(|k| {
                let mut b = IntMatrix::zero(ranks[k - 1], ranks[k]);
                for (j, simplex) in by_dim[k].iter().enumerate() {
                    for drop in 0..simplex.len() {
                        let face: Vec<i64> = simplex
                            .iter()
                            .enumerate()
                            .filter(|(i, _)| *i != drop)
                            .map(|(_, &v)| v)
                            .collect();
                        let r = index[k - 1][&face];
                        let sign = if drop % 2 == 0 { 1 } else { -1 };
                        b[(r, j)] = BigInt::from(sign);
                    }
                }
                b
            })
            .collect();
        ChainComplex::new(ranks, boundaries).expect("facet closure is a complex")
    }

    /// S^n as the boundary of the standard (n+1)-simplex.
    pub fn simplex_sphere(n: usize) -> ChainComplex {
        let vertices: Vec<i64> = (0..=(n as i64 + 1)).collect();
        let facets: Vec<Vec<i64>> = subsets_of_size(&vertices, n + 1);
        complex_from_facets(&facets)
    }

    /// S^n as the boundary of the (n+1)-dimensional cross polytope,
    /// vertices ±1, …, ±(n+1).
    pub fn cross_polytope_sphere(n: usize) -> ChainComplex {
        complex_from_facets(&cross_polytope_facets(n))
    }

    fn cross_polytope_facets(n: usize) -> Vec<Vec<i64>> {
        let d = n + 1;
        (0..(1u32 << d))
            .map(|mask| {
                (0..d)
                    .map(|i| {
                        let v = i as i64 + 1;
                        if mask & (1 << i) != 0 {
                            -v
                        } else {
                            v
                        }
                    })
                    .collect()
            })
            .collect()
    }

    fn subsets_of_size(items: &[i64], k: usize) -> Vec<Vec<i64>> {
        let mut out = Vec::new();
        let mut pick = Vec::new();
        fn rec(items: &[i64], k: usize, start: usize, pick: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
            if pick.len() == k {
                out.push(pick.clone());
                return;
            }
            for i in start..items.len() {
                pick.push(items[i]);
                rec(items, k, i + 1, pick, out);
                pick.pop();
            }
        }
        rec(items, k, 0, &mut pick, &mut out);
        out
    }

    fn permutations(items: &[i64]) -> Vec<Vec<i64>> {
        if items.len() <= 1 {
            return vec![items.to_vec()];
        }
        let mut out = Vec::new();
        for (i, &head) in items.iter().enumerate() {
            let rest: Vec<i64> = items
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, &v)| v)
                .collect();
            for mut tail in permutations(&rest) {
                let mut p = vec![head];
                p.append(&mut tail);
                out.push(p);
            }
        }
        out
    }

    /// RP^n as the antipodal quotient of the barycentric subdivision of the
    /// cross-polytope sphere. The subdivision makes the antipodal map a
    /// free simplicial automorphism, so the orbit complex is again
    /// simplicial. Practical for n ≤ 3.
    pub fn projective_space(n: usize) -> ChainComplex {
        let facets = cross_polytope_facets(n);
        // vertices of the subdivision are the simplices of the sphere
        let mut rep_of: BTreeMap<Vec<i64>, Vec<i64>> = BTreeMap::new();
        let mut quotient_facets: BTreeSet<Vec<i64>> = BTreeSet::new();
        let mut rep_ids: BTreeMap<Vec<i64>, i64> = BTreeMap::new();
        let id_of = |simplex: &Vec<i64>,
                         rep_of: &mut BTreeMap<Vec<i64>, Vec<i64>>,
                         rep_ids: &mut BTreeMap<Vec<i64>, i64>| {
            let rep = rep_of
                .entry(simplex.clone())
                .or_insert_with(|| {
                    let mut anti: Vec<i64> = simplex.iter().map(|&v| -v).collect();
                    anti.sort_unstable();
                    simplex.clone().min(anti)
                })
                .clone();
            let next = rep_ids.len() as i64;
            *rep_ids.entry(rep).or_insert(next)
        };
        for facet in &facets {
            for perm in permutations(facet) {
                let mut chain: Vec<i64> = Vec::with_capacity(facet.len());
                for k in 1..=perm.len() {
                    let mut prefix: Vec<i64> = perm[..k].to_vec();
                    prefix.sort_unstable();
                    chain.push(id_of(&prefix, &mut rep_of, &mut rep_ids));
                }
                chain.sort_unstable();
                assert!(
                    chain.windows(2).all(|w| w[0] != w[1]),
                    "antipodal action must be free on the subdivision"
                );
                quotient_facets.insert(chain);
            }
        }
        let expected = factorial(n + 1) * (1usize << (n + 1)) / 2;
        assert_eq!(quotient_facets.len(), expected, "orbit count of facets");
        let facet_list: Vec<Vec<i64>> = quotient_facets.into_iter().collect();
        complex_from_facets(&facet_list)
    }

    fn factorial(k: usize) -> usize {
        (1..=k).product::<usize>().max(1)
    }

    /// The classical six-vertex triangulation of the projective plane,
    /// antipodal quotient of the icosahedron.
    pub fn rp2_six_vertex() -> ChainComplex {
        let facets: Vec<Vec<i64>> = [
            [1, 2, 4],
            [1, 2, 5],
            [1, 3, 4],
            [1, 3, 6],
            [1, 5, 6],
            [2, 3, 5],
            [2, 3, 6],
            [2, 4, 6],
            [3, 4, 5],
            [4, 5, 6],
        ]
        .iter()
        .map(|f| f.to_vec())
        .collect();
        complex_from_facets(&facets)
    }

    /// Torus from an n×n grid with wraparound in both directions, each
    /// square split into two triangles. Needs n ≥ 3 to stay simplicial.
    pub fn torus_grid(n: i64) -> ChainComplex {
        grid_surface(n, false)
    }

    /// Klein bottle from the same grid, one direction glued with a flip.
    pub fn klein_grid(n: i64) -> ChainComplex {
        grid_surface(n, true)
    }

    fn grid_surface(n: i64, flip: bool) -> ChainComplex {
        assert!(n >= 3);
        let canon = |i: i64, j: i64| -> i64 {
            let wraps = i.div_euclid(n);
            let i2 = i.rem_euclid(n);
            let j2 = if flip && wraps % 2 != 0 {
                (-j).rem_euclid(n)
            } else {
                j.rem_euclid(n)
            };
            i2 * n + j2
        };
        let mut facets = Vec::new();
        for i in 0..n {
            for j in 0..n {
                facets.push(vec![canon(i, j), canon(i + 1, j), canon(i + 1, j + 1)]);
                facets.push(vec![canon(i, j), canon(i + 1, j + 1), canon(i, j + 1)]);
            }
        }
        complex_from_facets(&facets)
    }
}

pub mod oracle {
    use super::*;

    /// Rank and (for square input) determinant by Bareiss fraction-free
    /// elimination with full pivoting: a path through none of the library's
    /// Smith machinery.
    pub fn bareiss(a: &IntMatrix) -> (usize, Option<BigInt>) {
        let rows = a.rows();
        let cols = a.cols();
        let mut m: Vec<Vec<BigInt>> = (0..rows)
            .map(|i| (0..cols).map(|j| a[(i, j)].clone()).collect())
            .collect();
        let mut prev = BigInt::one();
        let mut sign = BigInt::one();
        let mut rank = 0;
        let steps = rows.min(cols);
        for k in 0..steps {
            let pivot = (k..rows)
                .flat_map(|i| (k..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !m[i][j].is_zero());
            let Some((pi, pj)) = pivot else { break };
            if pi != k {
                m.swap(pi, k);
                sign = -sign;
            }
            if pj != k {
                for row in m.iter_mut() {
                    row.swap(pj, k);
                }
                sign = -sign;
            }
            for i in (k + 1)..rows {
                for j in (k + 1)..cols {
                    let num = &m[k][k] * &m[i][j] - &m[i][k] * &m[k][j];
                    assert!((&num % &prev).is_zero(), "fraction-free step must divide");
                    m[i][j] = num / &prev;
                }
                m[i][k] = BigInt::zero();
            }
            prev = m[k][k].clone();
            rank += 1;
        }
        let det = if rows == cols {
            Some(if rank < rows {
                BigInt::zero()
            } else {
                sign * m[rows - 1][rows - 1].clone()
            })
        } else {
            None
        };
        (rank, det)
    }

    /// Cohomology in degree i predicted from integral homology by the
    /// universal coefficient splitting: the free part of H_i plus the
    /// torsion of H_{i-1}.
    pub fn uct_cohomology(homology: &[FgAbelianGroup], i: usize) -> FgAbelianGroup {
        let free = homology.get(i).map_or(0, |h| h.free_rank());
        let torsion = if i == 0 {
            Vec::new()
        } else {
            homology
                .get(i - 1)
                .map_or(Vec::new(), |h| h.torsion().to_vec())
        };
        FgAbelianGroup::from_parts(free, torsion).unwrap()
    }
}

pub mod fixtures {
    use super::*;

    /// Core-circle model of the annulus: vertices v0, v1, a loop b at v1
    /// and an interior arc c from v0 to v1.
    pub fn annulus_spine() -> PageData {
        let complex = ChainComplex::new(
            vec![2, 2],
            vec![IntMatrix::from_rows(&[vec![0, -1], vec![0, 1]])],
        )
        .unwrap();
        PageData::new(complex, vec![vec![0, 1], vec![0]], 1, true).unwrap()
    }

    /// n-fold twist on the spine model: the arc picks up n copies of the
    /// loop, everything else stays put.
    pub fn spine_twist(page: &PageData, n: i64) -> Monodromy {
        Monodromy::from_components(
            page,
            vec![
                IntMatrix::identity(2),
                IntMatrix::from_rows(&[vec![1, n], vec![0, 1]]),
            ],
        )
        .unwrap()
    }

    /// Honest cell structure of the annulus: two boundary circles
    /// {v0, e0}, {v1, e1}, an interior arc c and one square face F with
    /// ∂F = e1 − e0.
    pub fn annulus_full() -> PageData {
        let complex = ChainComplex::new(
            vec![2, 3, 1],
            vec![
                IntMatrix::from_rows(&[vec![0, 0, -1], vec![0, 0, 1]]),
                IntMatrix::from_rows(&[vec![-1], vec![1], vec![0]]),
            ],
        )
        .unwrap();
        PageData::new(complex, vec![vec![0, 1], vec![0, 1], vec![]], 1, false).unwrap()
    }

    /// n-fold twist on the full model: the arc picks up n copies of the
    /// second boundary circle.
    pub fn full_twist(page: &PageData, n: i64) -> Monodromy {
        Monodromy::from_components(
            page,
            vec![
                IntMatrix::identity(2),
                IntMatrix::from_rows(&[vec![1, 0, n], vec![0, 1, 0], vec![0, 0, 1]]),
                IntMatrix::identity(1),
            ],
        )
        .unwrap()
    }

    /// Seven-dimensional open book whose middle homology is Z/2, the
    /// middle homology of the real projective 7-space: one collapsed
    /// binding vertex, a single 3-handle z, monodromy z ↦ 3z.
    pub fn two_torsion_seven_book() -> (PageData, Monodromy) {
        let complex = ChainComplex::new(
            vec![1, 0, 0, 1],
            vec![
                IntMatrix::zero(1, 0),
                IntMatrix::zero(0, 0),
                IntMatrix::zero(0, 1),
            ],
        )
        .unwrap();
        let page = PageData::new(
            complex,
            vec![vec![0], vec![], vec![], vec![]],
            3,
            true,
        )
        .unwrap();
        let f = Monodromy::from_components(
            &page,
            vec![
                IntMatrix::identity(1),
                IntMatrix::zero(0, 0),
                IntMatrix::zero(0, 0),
                IntMatrix::from_rows(&[vec![3]]),
            ],
        )
        .unwrap();
        (page, f)
    }
}

pub mod gen {
    use super::*;

    pub fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, bound: i64) -> IntMatrix {
        IntMatrix::from_fn(rows, cols, |_, _| BigInt::from(rng.gen_range(-bound..=bound)))
    }

    /// Product of random elementary row operations on the identity.
    pub fn random_unimodular(rng: &mut ChaCha8Rng, n: usize) -> IntMatrix {
        let mut m = IntMatrix::identity(n);
        if n < 2 {
            return m;
        }
        for _ in 0..(3 * n) {
            let i = rng.gen_range(0..n);
            let mut j = rng.gen_range(0..n);
            while j == i {
                j = rng.gen_range(0..n);
            }
            match rng.gen_range(0..3) {
                0 => {
                    let k = BigInt::from(*[-2, -1, 1, 2].get(rng.gen_range(0..4)).unwrap());
                    for c in 0..n {
                        let add = &k * &m[(j, c)];
                        m[(i, c)] += add;
                    }
                }
                1 => {
                    for c in 0..n {
                        let x = m[(i, c)].clone();
                        m[(i, c)] = m[(j, c)].clone();
                        m[(j, c)] = x;
                    }
                }
                _ => {
                    for c in 0..n {
                        m[(i, c)] = -m[(i, c)].clone();
                    }
                }
            }
        }
        m
    }

    /// Random element of the kernel of `boundary`, the zero vector when the
    /// kernel is trivial or every draw comes up zero.
    fn kernel_sample(rng: &mut ChaCha8Rng, boundary: &IntMatrix) -> Vec<BigInt> {
        let basis = kernel_basis(boundary);
        let mut v = vec![BigInt::zero(); basis.rows()];
        for c in 0..basis.cols() {
            let w = BigInt::from(rng.gen_range(-2i64..=2));
            if w.is_zero() {
                continue;
            }
            for r in 0..basis.rows() {
                let add = &w * &basis[(r, c)];
                v[r] += add;
            }
        }
        v
    }

    /// Attaching maps for 1-cells live in the kernel of this row, keeping
    /// the class of a point well defined.
    fn augmentation(vertices: usize) -> IntMatrix {
        IntMatrix::from_fn(1, vertices, |_, _| BigInt::one())
    }

    fn column_append(b: &mut IntMatrix, col: &[BigInt]) {
        let rows = b.rows();
        let cols = b.cols();
        assert_eq!(col.len(), rows);
        let mut next = IntMatrix::zero(rows, cols + 1);
        for i in 0..rows {
            for j in 0..cols {
                next[(i, j)] = b[(i, j)].clone();
            }
            next[(i, cols)] = col[i].clone();
        }
        *b = next;
    }

    /// Random chain complex grown degree by degree with kernel-sampled
    /// boundary columns, so every boundary of a boundary cancels.
    pub fn random_complex(rng: &mut ChaCha8Rng, max_top: usize, max_rank: usize) -> ChainComplex {
        let top = rng.gen_range(0..=max_top);
        let mut ranks = vec![rng.gen_range(1..=max_rank)];
        let mut boundaries: Vec<IntMatrix> = Vec::new();
        for i in 1..=top {
            let count = rng.gen_range(0..=max_rank);
            let prev = if i == 1 {
                IntMatrix::zero(0, ranks[0])
            } else {
                boundaries[i - 2].clone()
            };
            let mut d = IntMatrix::zero(ranks[i - 1], 0);
            for _ in 0..count {
                let col = kernel_sample(rng, &prev);
                column_append(&mut d, &col);
            }
            ranks.push(count);
            boundaries.push(d);
        }
        ChainComplex::new(ranks, boundaries).expect("sampled columns are cycles")
    }

    /// Page whose interior cells sit only in degree q over a connected
    /// boundary complex, so the relative homology is concentrated in the
    /// middle degree and the variation-cokernel route applies.
    pub fn eligible_page(rng: &mut ChaCha8Rng, q: usize) -> PageData {
        assert!(q >= 1);
        let b0 = rng.gen_range(1..=3usize);
        let mut ranks = vec![b0];
        let mut boundaries: Vec<IntMatrix> = Vec::new();
        let mut sub: Vec<Vec<usize>> = vec![(0..b0).collect()];
        if q >= 2 {
            // spanning edges keep the boundary, hence the page, connected
            let extra = rng.gen_range(0..=1usize);
            let e1 = (b0 - 1) + extra;
            let mut d1 = IntMatrix::zero(b0, 0);
            for k in 1..b0 {
                let mut col = vec![BigInt::zero(); b0];
                col[0] = BigInt::from(-1);
                col[k] = BigInt::one();
                column_append(&mut d1, &col);
            }
            for _ in 0..extra {
                let col = kernel_sample(rng, &augmentation(b0));
                column_append(&mut d1, &col);
            }
            ranks.push(e1);
            boundaries.push(d1);
            sub.push((0..e1).collect());
            for i in 2..q {
                let count = rng.gen_range(0..=1usize);
                let mut d = IntMatrix::zero(ranks[i - 1], 0);
                for _ in 0..count {
                    let col = kernel_sample(rng, &boundaries[i - 2]);
                    column_append(&mut d, &col);
                }
                ranks.push(count);
                boundaries.push(d);
                sub.push((0..count).collect());
            }
        }
        let t = rng.gen_range(1..=3usize);
        let prev = if q == 1 {
            augmentation(b0)
        } else {
            boundaries[q - 2].clone()
        };
        let mut dq = IntMatrix::zero(ranks[q - 1], 0);
        if q == 1 {
            // interior spanning edges make a one-dimensional page connected
            for k in 1..b0 {
                let mut col = vec![BigInt::zero(); b0];
                col[0] = BigInt::from(-1);
                col[k] = BigInt::one();
                column_append(&mut dq, &col);
            }
        }
        for _ in 0..t {
            let col = kernel_sample(rng, &prev);
            column_append(&mut dq, &col);
        }
        ranks.push(dq.cols());
        boundaries.push(dq);
        sub.push(Vec::new());
        let complex = ChainComplex::new(ranks, boundaries).expect("sampled columns are cycles");
        let page = PageData::new(complex, sub, q, true).expect("eligible page construction");
        assert!(formula_path_eligible(&page).unwrap());
        page
    }

    /// General page: boundary cells first in every degree up to 2q−1,
    /// interior cells in any degree below 2q, attaching maps
    /// kernel-sampled, the whole thing capped at `max_cells`. Top-degree
    /// cells are left out: a random top cell almost never closes the
    /// glued model up to a fundamental class.
    pub fn full_page(rng: &mut ChaCha8Rng, q: usize, max_cells: usize) -> PageData {
        assert!(q >= 1);
        let mut budget = max_cells as i64;
        let b0 = rng.gen_range(1..=2usize);
        let e0 = rng.gen_range(0..=1usize);
        let v = b0 + e0;
        budget -= v as i64;
        let spanning = v - 1;

        // boundary complex first
        let mut b_ranks = vec![b0];
        let mut b_boundaries: Vec<IntMatrix> = Vec::new();
        for i in 1..(2 * q) {
            let cap = if i <= 1 { 2 } else { 1 };
            let cap = cap.min((budget - spanning as i64).max(0)) as usize;
            let count = if cap == 0 { 0 } else { rng.gen_range(0..=cap) };
            budget -= count as i64;
            let prev = if i == 1 {
                augmentation(b_ranks[0])
            } else {
                b_boundaries[i - 2].clone()
            };
            let mut d = IntMatrix::zero(b_ranks[i - 1], 0);
            for _ in 0..count {
                let col = kernel_sample(rng, &prev);
                column_append(&mut d, &col);
            }
            b_ranks.push(count);
            b_boundaries.push(d);
        }

        // ambient complex, boundary cells as a prefix in each degree
        let mut ranks = vec![v];
        let mut boundaries: Vec<IntMatrix> = Vec::new();
        let mut sub: Vec<Vec<usize>> = vec![(0..b0).collect()];
        for i in 1..=(2 * q) {
            let b_count = if i < 2 * q { b_ranks[i] } else { 0 };
            let span_here = if i == 1 { spanning } else { 0 };
            let cap = if i == 2 * q {
                0
            } else {
                1i64.min(budget.max(0)) as usize
            };
            let extra = if cap == 0 { 0 } else { rng.gen_range(0..=cap) };
            budget -= extra as i64;
            let prev = if i == 1 {
                augmentation(ranks[0])
            } else {
                boundaries[i - 2].clone()
            };
            let mut d = IntMatrix::zero(ranks[i - 1], 0);
            for c in 0..b_count {
                let mut col = vec![BigInt::zero(); ranks[i - 1]];
                let b_col_rows = if i == 1 { b_ranks[0] } else { b_ranks[i - 1] };
                for r in 0..b_col_rows {
                    col[r] = b_boundaries[i - 1][(r, c)].clone();
                }
                column_append(&mut d, &col);
            }
            for k in 0..span_here {
                let mut col = vec![BigInt::zero(); ranks[0]];
                col[0] = BigInt::from(-1);
                col[k + 1] = BigInt::one();
                column_append(&mut d, &col);
            }
            for _ in 0..extra {
                let col = kernel_sample(rng, &prev);
                column_append(&mut d, &col);
            }
            ranks.push(d.cols());
            boundaries.push(d);
            sub.push((0..b_count).collect());
        }
        let complex = ChainComplex::new(ranks, boundaries).expect("sampled columns are cycles");
        PageData::new(complex, sub, q, false).expect("general page construction")
    }

    /// Degree-raising maps h_i: C_i → C_{i+1} vanishing on boundary cells,
    /// the raw material for boundary-supported chain homotopies.
    pub fn boundary_supported_homotopy(
        rng: &mut ChaCha8Rng,
        page: &PageData,
        bound: i64,
    ) -> Vec<IntMatrix> {
        let c = page.complex();
        let n = c.ranks().len();
        (0..n)
            .map(|i| {
                let marked = &page.boundary().sub_indices()[i];
                IntMatrix::from_fn(c.rank(i + 1), c.rank(i), |_, j| {
                    if marked.contains(&j) {
                        BigInt::zero()
                    } else {
                        BigInt::from(rng.gen_range(-bound..=bound))
                    }
                })
            })
            .collect()
    }

    /// f + ∂h + h∂: a monodromy chain homotopic to f through homotopies
    /// vanishing on the boundary, so it fixes the boundary cellwise too.
    pub fn perturb(page: &PageData, f: &Monodromy, h: &[IntMatrix]) -> Monodromy {
        let c = page.complex();
        let n = c.ranks().len();
        let comps: Vec<IntMatrix> = (0..n)
            .map(|i| {
                let mut m = f.component(i);
                let dh = c.boundary(i + 1).try_mul(&h[i]).unwrap();
                m = m.try_add(&dh).unwrap();
                if i > 0 {
                    let hd = h[i - 1].try_mul(&c.boundary(i)).unwrap();
                    m = m.try_add(&hd).unwrap();
                }
                m
            })
            .collect();
        Monodromy::from_components(page, comps).expect("perturbation is a chain map fixing the boundary")
    }

    /// Monodromy sending one interior cell t to itself plus a cycle z with
    /// no t-component, the algebraic shadow of a twist. Needs a degree
    /// where no higher cell attaches across t; top degrees always qualify.
    pub fn random_twist(rng: &mut ChaCha8Rng, page: &PageData) -> Option<Monodromy> {
        let c = page.complex();
        let n = c.ranks().len();
        let mut candidates = Vec::new();
        for i in 1..n {
            let above = c.boundary(i + 1);
            for &t in &page.boundary().complement_indices(i) {
                let row_clear = (0..above.cols()).all(|j| above[(t, j)].is_zero());
                if row_clear {
                    candidates.push((i, t));
                }
            }
        }
        if candidates.is_empty() {
            return None;
        }
        let (i, t) = candidates[rng.gen_range(0..candidates.len())];
        let basis = kernel_basis(&c.boundary(i));
        let usable: Vec<usize> = (0..basis.cols())
            .filter(|&j| basis[(t, j)].is_zero())
            .collect();
        if usable.is_empty() {
            return None;
        }
        let mut z = vec![BigInt::zero(); c.rank(i)];
        for &j in &usable {
            let w = BigInt::from(rng.gen_range(-2i64..=2));
            if w.is_zero() {
                continue;
            }
            for r in 0..basis.rows() {
                let add = &w * &basis[(r, j)];
                z[r] += add;
            }
        }
        if z.iter().all(|x| x.is_zero()) {
            for r in 0..basis.rows() {
                z[r] = basis[(r, usable[0])].clone();
            }
        }
        let comps: Vec<IntMatrix> = (0..n)
            .map(|d| {
                let mut m = IntMatrix::identity(c.rank(d));
                if d == i {
                    for r in 0..c.rank(d) {
                        m[(r, t)] += &z[r];
                    }
                }
                m
            })
            .collect();
        Some(Monodromy::from_components(page, comps).expect("twist is a chain map fixing the boundary"))
    }

    /// Random boundary-fixing monodromy: a few twists composed with a
    /// boundary-supported homotopy perturbation of the identity.
    pub fn random_monodromy(rng: &mut ChaCha8Rng, page: &PageData, with_twists: bool) -> Monodromy {
        let mut f = Monodromy::identity(page);
        if with_twists {
            for _ in 0..rng.gen_range(0..=2) {
                if let Some(tw) = random_twist(rng, page) {
                    let composed = tw.map().compose(f.map()).unwrap();
                    f = Monodromy::new(page, composed).unwrap();
                }
            }
        }
        if rng.gen_bool(0.7) {
            let h = boundary_supported_homotopy(rng, page, 1);
            f = perturb(page, &f, &h);
        }
        f
    }

    /// Identity components as a chain map, handy as a composition seed.
    pub fn identity_map(page: &PageData) -> ChainMap {
        ChainMap::identity(page.complex())
    }
}
