//! Library checkers against independent brute-force recomputations.

use std::sync::Arc;

use gamma_core::grading::graded_semigroup_ring;
use gamma_core::ring::{check_axioms, direct_product, matrix_gamma_ring, opposite, polynomial_ring, AXIOMS};
use gamma_core::{Budget, FiniteAbelianGroup, FiniteSemigroup, GammaRing};
use proptest::prelude::*;

/// Violated identities, recomputed from plain integer tables.
fn violated_laws(ring: &GammaRing) -> Vec<&'static str> {
    let n = ring.order();
    let g = ring.gamma().order();
    let add: Vec<Vec<usize>> = (0..n).map(|x| (0..n).map(|y| ring.carrier().add(x, y)).collect()).collect();
    let gadd: Vec<Vec<usize>> = (0..g).map(|a| (0..g).map(|b| ring.gamma().add(a, b)).collect()).collect();
    let mut p = vec![vec![vec![0usize; n]; g]; n];
    for x in 0..n {
        for a in 0..g {
            for y in 0..n {
                p[x][a][y] = ring.product(x, a, y);
            }
        }
    }
    let mut bad = [false; 4];
    for x in 0..n {
        for y in 0..n {
            for a in 0..g {
                for b in 0..g {
                    for z in 0..n {
                        bad[0] |= p[add[x][y]][a][z] != add[p[x][a][z]][p[y][a][z]];
                        bad[1] |= p[x][gadd[a][b]][z] != add[p[x][a][z]][p[x][b][z]];
                        bad[2] |= p[x][a][add[y][z]] != add[p[x][a][y]][p[x][a][z]];
                        bad[3] |= p[p[x][a][y]][b][z] != p[x][a][p[y][b][z]];
                    }
                }
            }
        }
    }
    AXIOMS.iter().zip(bad).filter(|(_, b)| *b).map(|(l, _)| *l).collect()
}

fn agree(ring: &GammaRing) {
    let verdict = check_axioms(ring, &Budget::default()).unwrap();
    let laws = violated_laws(ring);
    match verdict.witness() {
        None => assert!(laws.is_empty(), "checker passed, oracle found {laws:?}"),
        Some(w) => assert_eq!(Some(&w.law.as_str()), laws.first(), "first failing law differs"),
    }
}

fn cyclic(n: u32) -> Arc<FiniteAbelianGroup> {
    Arc::new(FiniteAbelianGroup::cyclic(&[n]).unwrap())
}

#[test]
fn corpus_rings_agree_with_oracle() {
    let budget = Budget::default();
    let z2 = GammaRing::modular(2).unwrap();
    let z4 = GammaRing::modular(4).unwrap();
    let rc2 = graded_semigroup_ring(&z2, &Arc::new(FiniteSemigroup::cyclic(2)), &budget).unwrap();
    let rc4 = graded_semigroup_ring(&z2, &Arc::new(FiniteSemigroup::cyclic(4)), &budget).unwrap();
    let corpus = vec![
        z2.clone(),
        z4.clone(),
        matrix_gamma_ring(2, 1, 2, &budget).unwrap(),
        rc2.ring().clone(),
        rc4.ring().clone(),
        direct_product(&[z2.clone(), rc2.ring().clone()]).unwrap(),
        direct_product(&[z4.clone(), z4.clone()]).unwrap(),
        opposite(&matrix_gamma_ring(2, 1, 2, &budget).unwrap()),
        polynomial_ring(&z2, 3, &budget).unwrap().ring().clone(),
    ];
    for ring in &corpus {
        assert!(violated_laws(ring).is_empty());
        agree(ring);
    }
}

#[test]
fn two_element_magmas() {
    // all 16 operations on {a, b}; associativity decided directly
    let mut accepted = 0;
    let mut associative = 0;
    for code in 0..16usize {
        let table: Vec<Vec<usize>> = (0..2).map(|i| (0..2).map(|j| (code >> (2 * i + j)) & 1).collect()).collect();
        let assoc = (0..2).all(|x| {
            (0..2).all(|y| (0..2).all(|z| table[table[x][y]][z] == table[x][table[y][z]]))
        });
        associative += assoc as usize;
        let labels = vec!["a".to_string(), "b".to_string()];
        let built = FiniteSemigroup::from_table(labels, table).is_ok();
        assert_eq!(built, assoc, "operation {code}");
        accepted += built as usize;
    }
    assert_eq!(accepted, associative);
}

#[test]
fn three_element_magmas() {
    let mut agreed = 0;
    for code in 0..3usize.pow(9) {
        let mut c = code;
        let mut table = vec![vec![0; 3]; 3];
        for row in table.iter_mut() {
            for cell in row.iter_mut() {
                *cell = c % 3;
                c /= 3;
            }
        }
        let assoc = (0..3).all(|x| {
            (0..3).all(|y| (0..3).all(|z| table[table[x][y]][z] == table[x][table[y][z]]))
        });
        let labels = vec!["a".to_string(), "b".to_string(), "c".to_string()];
        assert_eq!(FiniteSemigroup::from_table(labels, table).is_ok(), assoc);
        agreed += 1;
    }
    assert_eq!(agreed, 19683);
}

fn table_ring(n: u32, g: u32, values: &[usize]) -> GammaRing {
    let (nn, gg) = (n as usize, g as usize);
    GammaRing::from_fn(cyclic(n), cyclic(g), |x, a, y| values[(x * gg + a) * nn + y] % nn).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn random_tables_agree(n in 2u32..4, g in 1u32..3, seed in proptest::collection::vec(0usize..4, 18..=18)) {
        let entries = (n * n * g) as usize;
        let values: Vec<usize> = seed.iter().cycle().take(entries).copied().collect();
        agree(&table_ring(n, g, &values));
    }

    #[test]
    fn scaled_products_agree(n in 2u32..7, c in 0u32..7) {
        let z = cyclic(n);
        let ring = GammaRing::from_fn(z.clone(), z, |x, a, y| (c as usize * x * a * y) % n as usize).unwrap();
        agree(&ring);
    }

    #[test]
    fn one_flip_agrees(n in 2u32..5, x in 0usize..5, a in 0usize..5, y in 0usize..5, v in 0usize..5) {
        let base = GammaRing::modular(n).unwrap();
        let m = n as usize;
        let (x, a, y, v) = (x % m, a % m, y % m, v % m);
        let flipped = GammaRing::from_fn(base.carrier().clone(), base.gamma().clone(), |p, q, r| {
            if (p, q, r) == (x, a, y) { v } else { base.product(p, q, r) }
        })
        .unwrap();
        agree(&flipped);
    }
}
