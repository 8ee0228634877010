use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::algebra::LieAlgebra;
use crate::linalg::Matrix;
use crate::riemannian::MetricLieAlgebra;

/// Seeded random solvable metric Lie algebra `R^a ⋉ n` in float scalars.
///
/// `n` is abelian or Heisenberg and `R^a` acts by commuting derivations
/// (diagonal, or a single triangular one). The result is rewritten in a
/// random basis and carries a random inner product, so neither the basis
/// nor the metric is adapted to the structure.
pub fn random_solvable(seed: u64) -> MetricLieAlgebra<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coef = |rng: &mut ChaCha8Rng| (rng.random_range(-20..=20) as f64) / 10.0;
    let variant = rng.random_range(0..3u8);
    // (number of abelian generators, nilradical dim, derivations on the nilradical)
    let (a, k, heis, ders): (usize, usize, bool, Vec<Matrix<f64>>) = match variant {
        0 => {
            let a = rng.random_range(1..=2);
            let k = rng.random_range(2..=4);
            let ders = (0..a)
                .map(|_| Matrix::diagonal(&(0..k).map(|_| coef(&mut rng)).collect::<Vec<_>>()))
                .collect();
            (a, k, false, ders)
        }
        1 => {
            let k = rng.random_range(2..=4);
            let d = Matrix::from_fn(k, k, |i, j| if i <= j { coef(&mut rng) } else { 0.0 });
            (1, k, false, vec![d])
        }
        _ => {
            // Derivation of heis(3): any upper-triangular M on span{N1, N2},
            // arbitrary N3 components, and D N3 = tr(M) N3.
            let m = [coef(&mut rng), coef(&mut rng), coef(&mut rng)];
            let (p, q) = (coef(&mut rng), coef(&mut rng));
            let d = Matrix::from_rows(vec![
                vec![m[0], m[1], 0.0],
                vec![0.0, m[2], 0.0],
                vec![p, q, m[0] + m[2]],
            ]);
            (1, 3, true, vec![d])
        }
    };
    let dim = a + k;
    let mut labels: Vec<String> = (1..=a).map(|i| format!("A{i}")).collect();
    labels.extend((1..=k).map(|i| format!("N{i}")));
    let mut b = LieAlgebra::builder("base", labels.clone());
    for (s, d) in ders.iter().enumerate() {
        for j in 0..k {
            let terms: Vec<(usize, f64)> = (0..k).map(|i| (a + i, d[(i, j)])).filter(|t| t.1 != 0.0).collect();
            b.add(s, a + j, &terms);
        }
    }
    if heis {
        b.add(a, a + 1, &[(a + 2, 1.0)]);
    }
    let base = b.build().expect("valid table");

    let p = loop {
        let p = Matrix::from_fn(dim, dim, |i, j| {
            let g: f64 = StandardNormal.sample(&mut rng);
            if i == j {
                1.0 + 0.3 * g
            } else {
                0.3 * g
            }
        });
        if p.determinant().abs() > 0.1 {
            break p;
        }
    };
    let p_inv = p.inverse().expect("determinant bounded away from zero");
    let mut nb = LieAlgebra::builder(
        format!("random-solvable({seed})"),
        (0..dim).map(|i| format!("e{i}")).collect(),
    );
    for i in 0..dim {
        for j in i + 1..dim {
            let br = base.bracket(&p.column(i), &p.column(j)).expect("dimensions agree");
            let coords = p_inv.mul_vec(&br);
            let terms: Vec<(usize, f64)> = coords.into_iter().enumerate().filter(|t| t.1 != 0.0).collect();
            nb.add(i, j, &terms);
        }
    }
    let q = Matrix::from_fn(dim, dim, |_, _| StandardNormal.sample(&mut rng));
    let gram = q.transpose().mul(&q).add(&Matrix::identity(dim).scale(&0.5));
    let gram = gram.add(&gram.transpose()).scale(&0.5);
    MetricLieAlgebra::new(nb.build().expect("valid table"), gram).expect("Jacobi holds up to rounding")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_algebras_are_solvable_and_reproducible() {
        for seed in 0..10 {
            let m = random_solvable(seed);
            assert!(m.alg().series_analysis().is_solvable);
            assert_eq!(m, random_solvable(seed));
        }
    }
}
