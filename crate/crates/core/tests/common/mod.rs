//! Shared corpus and brute-force oracles for integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::sync::Arc;

use mfsing_core::koszul::{koszul_algebra, residue_representative, shift, telescope, trivial_module};
use mfsing_core::mf::{box_product, new_mf};
use mfsing_core::poly::{parse_poly, Scalar};
use mfsing_core::{Field, KoszulModule, LGPair, MatrixFactorization, Poly, PolyMatrix, RingCtx};
use num_traits::{One, Zero};

pub fn lg(f: &str, vars: &[&str]) -> LGPair {
    let ctx = RingCtx::rational(vars);
    LGPair::new(parse_poly(f, &ctx).unwrap())
}

pub fn lg_over(field: Field, f: &str, vars: &[&str]) -> LGPair {
    let ctx = RingCtx::new(field, vars, Default::default()).unwrap();
    LGPair::new(parse_poly(f, &ctx).unwrap())
}

pub fn mat(ctx: &Arc<RingCtx>, rows: &[&[&str]]) -> PolyMatrix {
    PolyMatrix::from_strs(ctx, rows).unwrap()
}

pub fn mf(lg: &LGPair, d0: &[&[&str]], d1: &[&[&str]]) -> MatrixFactorization {
    new_mf(lg, mat(lg.ctx(), d0), mat(lg.ctx(), d1)).unwrap()
}

fn power(var: &str, e: u32) -> String {
    format!("{var}^{e}")
}

/// `(v^a | v^(n-a))` over `(Q[v], v^n)`.
pub fn monomial_mf(var: &str, n: u32, a: u32) -> MatrixFactorization {
    let l = lg(&power(var, n), &[var]);
    mf(&l, &[&[&power(var, a)]], &[&[&power(var, n - a)]])
}

/// Factorizations over `x^n` for `n = 2..=6` and over `x^2 + y^2`.
pub fn mf_corpus() -> Vec<MatrixFactorization> {
    let mut out = Vec::new();
    for n in 2..=6 {
        for a in 0..=n {
            out.push(monomial_mf("x", n, a));
        }
    }
    let q = lg("x^2 + y^2", &["x", "y"]);
    out.push(mf(&q, &[&["x", "y"], &["-y", "x"]], &[&["x", "-y"], &["y", "x"]]));
    out.push(mf(&q, &[&["x", "-y"], &["y", "x"]], &[&["x", "y"], &["-y", "x"]]));
    out.push(mf(&q, &[&["1"]], &[&["x^2 + y^2"]]));
    out.push(box_product(&monomial_mf("x", 2, 1), &monomial_mf("y", 2, 1)).unwrap());
    out
}

/// The k-representative `B --v--> B`, `h = v^(n-1)` over `(Q[v], v^n)`.
pub fn k_rep(var: &str, n: u32) -> KoszulModule {
    let l = lg(&power(var, n), &[var]);
    let v = Poly::var(l.ctx(), var).unwrap();
    residue_representative(&l, &v, &v.pow(n - 1)).unwrap()
}

pub fn k_alg(var: &str, n: u32) -> KoszulModule {
    koszul_algebra(&lg(&power(var, n), &[var]))
}

pub fn point_corpus(field: Field) -> Vec<(String, KoszulModule)> {
    let point = RingCtx::point(field);
    let triv = trivial_module(field);
    vec![
        ("trivial".into(), triv.clone()),
        ("trivial[1]".into(), shift(&triv)),
        ("K".into(), koszul_algebra(&LGPair::zero(&point))),
        ("T_2".into(), telescope(field, 2).unwrap()),
        ("T_3".into(), telescope(field, 3).unwrap()),
    ]
}

/// Modules over one-variable potentials in `var`.
pub fn module_corpus(var: &str) -> Vec<(String, KoszulModule)> {
    let mut out = Vec::new();
    for n in 2..=4 {
        out.push((format!("K({var}^{n})"), k_alg(var, n)));
        out.push((format!("k over {var}^{n}"), k_rep(var, n)));
    }
    let l = lg(&power(var, 4), &[var]);
    let v = Poly::var(l.ctx(), var).unwrap();
    out.push((format!("{var}^2 rep over {var}^4"), residue_representative(&l, &v.pow(2), &v.pow(2)).unwrap()));
    out.push((format!("k over {var}^2 shifted"), shift(&k_rep(var, 2))));
    out
}

type Q = Scalar;

fn rank(mut rows: Vec<Vec<Q>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        let inv = Q::one() / rows[r][c].clone();
        let pivot: Vec<Q> = rows[r].iter().map(|x| x * &inv).collect();
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let k = rows[i][c].clone();
                for j in c..cols {
                    let v = &rows[i][j] - &k * &pivot[j];
                    rows[i][j] = v;
                }
            }
        }
        rows[r] = pivot;
        r += 1;
    }
    r
}

/// Rank of a constant matrix over `Q`.
pub fn dense_rank(m: &PolyMatrix) -> usize {
    let rows = (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| m.get(i, j).constant_value().expect("constant entries")).collect())
        .collect();
    rank(rows)
}

fn monomials_below(nvars: usize, k: u32) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..nvars {
        out = out
            .into_iter()
            .flat_map(|m: Vec<u32>| {
                let used: u32 = m.iter().sum();
                (0..k.saturating_sub(used)).map(move |e| {
                    let mut n = m.clone();
                    n.push(e);
                    n
                })
            })
            .collect();
    }
    out.into_iter().filter(|m| m.iter().sum::<u32>() < k).collect()
}

/// `dim_Q B / (J + m^k)` by linear algebra on monomials of degree `< k`.
pub fn truncated_quotient_dim(gens: &[Poly], nvars: usize, k: u32) -> usize {
    let monos = monomials_below(nvars, k);
    let index: BTreeMap<&Vec<u32>, usize> = monos.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut rows = Vec::new();
    for g in gens {
        for m in &monos {
            let mut row = vec![Q::zero(); monos.len()];
            for (t, c) in g.terms() {
                let prod: Vec<u32> = t.iter().zip(m).map(|(a, b)| a + b).collect();
                if let Some(&i) = index.get(&prod) {
                    row[i] = &row[i] + c;
                }
            }
            if row.iter().any(|x| !x.is_zero()) {
                rows.push(row);
            }
        }
    }
    monos.len() - rank(rows)
}

/// Local Jacobian-ring dimension at the origin by increasing truncation.
/// `None` when the truncated dimensions keep growing up to `max_k`.
pub fn milnor_oracle(f: &Poly, max_k: u32) -> Option<usize> {
    let n = f.ctx().nvars();
    let partials: Vec<Poly> = (0..n).map(|i| f.derivative(i)).collect();
    let mut prev = None;
    for k in 1..=max_k {
        let d = truncated_quotient_dim(&partials, n, k);
        if prev == Some(d) {
            return Some(d);
        }
        prev = Some(d);
    }
    None
}

/// Cohomology of the underlying complex of a point-case module.
pub fn underlying_cohomology(m: &KoszulModule) -> BTreeMap<i64, usize> {
    m.degrees()
        .map(|i| {
            let out = dense_rank(&m.d_at(i));
            let inc = dense_rank(&m.d_at(i - 1));
            (i, m.rank(i) - out - inc)
        })
        .collect()
}

/// Stable Hom dimension between `(x^a | x^(n-a))` and `(x^c | x^(n-c))`,
/// the stable Hom of `R/x^a` and `R/x^c` over `R = Q[x]/(x^n)`.
pub fn monomial_hom_dim(n: u32, a: u32, c: u32) -> u64 {
    a.min(c).min(n - a).min(n - c) as u64
}
