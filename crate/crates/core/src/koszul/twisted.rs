//! Free graded `A[u]`-modules with `deg u = 2`, and the twisted functor
//! sending a `K(A, 0)`-module `(E, d, h)` to `(E ⊗ A[u], d + u·h)`.
//!
//! A module is stored by its generators and the `A[u]`-linear differential
//! on them. Level `n` has basis `u^k g` with `deg g + 2k = n`, `k ≥ 0`,
//! ordered by `k` and then by generator. Every level is finite and
//! computed exactly; the window `N` only fixes the range `[-2N, 2N]` that
//! reports cover.

use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::koszul::convolve::{convolve_ext, pull_push, ConvolutionLabels};
use crate::koszul::KoszulModule;
use crate::poly::dense::cohomology_dim;
use crate::poly::{DenseMatrix, Field, Scalar};

/// Provenance of a generator: the `(degree, index)` of each tensor factor.
pub type GenLabel = Vec<(i64, usize)>;

#[derive(Debug, Clone, PartialEq)]
pub struct AuModule {
    field: Field,
    degrees: Vec<i64>,
    labels: Vec<GenLabel>,
    /// `(from, to, p, c)`: `D(g_from)` contains `c · u^p · g_to`.
    terms: Vec<(usize, usize, u32, Scalar)>,
    window: i64,
}

impl AuModule {
    pub fn field(&self) -> Field {
        self.field
    }

    pub fn window(&self) -> i64 {
        self.window
    }

    /// The reported degree range `[-2N, 2N]`.
    pub fn safe_window(&self) -> (i64, i64) {
        (-2 * self.window, 2 * self.window)
    }

    pub fn generator_degrees(&self) -> &[i64] {
        &self.degrees
    }

    /// Basis of level `n` as `(k, generator)`.
    pub fn basis(&self, n: i64) -> Vec<(u32, usize)> {
        let mut out: Vec<(u32, usize)> = self
            .degrees
            .iter()
            .enumerate()
            .filter(|(_, &d)| d <= n && (n - d).rem_euclid(2) == 0)
            .map(|(g, &d)| (((n - d) / 2) as u32, g))
            .collect();
        out.sort();
        out
    }

    pub fn rank(&self, n: i64) -> usize {
        self.basis(n).len()
    }

    fn index(&self, n: i64) -> HashMap<(u32, usize), usize> {
        self.basis(n).into_iter().enumerate().map(|(i, b)| (b, i)).collect()
    }

    /// `D: level n -> level n+1`.
    pub fn diff(&self, n: i64) -> DenseMatrix {
        let src = self.basis(n);
        let tgt = self.index(n + 1);
        let f = self.field;
        let mut m = DenseMatrix::zeros(f, tgt.len(), src.len());
        for (col, &(k, g)) in src.iter().enumerate() {
            for (from, to, p, c) in &self.terms {
                if *from == g {
                    let row = tgt[&(k + p, *to)];
                    let v = f.add(m.get(row, col), c);
                    m.set(row, col, v);
                }
            }
        }
        m
    }

    /// `u^p: level n -> level n + 2p`.
    pub fn u_power(&self, n: i64, p: u32) -> DenseMatrix {
        let src = self.basis(n);
        let tgt = self.index(n + 2 * p as i64);
        let mut m = DenseMatrix::zeros(self.field, tgt.len(), src.len());
        for (col, &(k, g)) in src.iter().enumerate() {
            m.set(tgt[&(k + p, g)], col, self.field.one());
        }
        m
    }

    /// `u: level n -> level n + 2`.
    pub fn u_action(&self, n: i64) -> DenseMatrix {
        self.u_power(n, 1)
    }

    pub fn cohomology_dim(&self, n: i64) -> usize {
        cohomology_dim(&self.diff(n - 1), &self.diff(n))
    }

    /// Checks `D² = 0` and `Du = uD` on levels of the safe window.
    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = self.safe_window();
        for n in lo..=hi {
            if !self.diff(n + 1).mul(&self.diff(n))?.is_zero() {
                return Err(Error::Internal(format!("D*D != 0 at level {n}")));
            }
            if self.diff(n + 2).mul(&self.u_action(n))? != self.u_action(n + 1).mul(&self.diff(n))? {
                return Err(Error::Internal(format!("u does not commute with D at level {n}")));
            }
        }
        Ok(())
    }

    /// Generators reordered by label, terms reindexed accordingly.
    fn canonical(&self) -> AuModule {
        let mut order: Vec<usize> = (0..self.degrees.len()).collect();
        order.sort_by(|&a, &b| self.labels[a].cmp(&self.labels[b]));
        let mut pos = vec![0; order.len()];
        for (new, &old) in order.iter().enumerate() {
            pos[old] = new;
        }
        let mut terms: Vec<_> = self.terms.iter().map(|(a, b, p, c)| (pos[*a], pos[*b], *p, c.clone())).collect();
        terms.sort_by(|x, y| (x.0, x.1, x.2).cmp(&(y.0, y.1, y.2)));
        AuModule {
            field: self.field,
            degrees: order.iter().map(|&o| self.degrees[o]).collect(),
            labels: order.iter().map(|&o| self.labels[o].clone()).collect(),
            terms,
            window: self.window,
        }
    }

    /// Least `n ≤ max_n` with `u^n` null-homotopic through an `A[u]`-linear
    /// homotopy, found by exact linear algebra on generators.
    pub fn u_torsion_order(&self, max_n: u32) -> Result<Option<u32>> {
        for n in 0..=max_n {
            if self.u_power_null_homotopic(n)? {
                return Ok(Some(n));
            }
        }
        Ok(None)
    }

    /// Solves `D s + s D = u^n` for `s` of degree `2n - 1`, `s` determined
    /// by its values on generators.
    fn u_power_null_homotopic(&self, n: u32) -> Result<bool> {
        let f = self.field;
        let shift = 2 * n as i64;
        let gens = self.degrees.len();
        let col_sizes: Vec<usize> = self.degrees.iter().map(|&d| self.rank(d + shift - 1)).collect();
        let row_sizes: Vec<usize> = self.degrees.iter().map(|&d| self.rank(d + shift)).collect();
        let col_off: Vec<usize> = prefix(&col_sizes);
        let row_off: Vec<usize> = prefix(&row_sizes);
        let mut a = DenseMatrix::zeros(f, row_off[gens], col_off[gens]);
        let mut b = vec![Scalar::zero(); row_off[gens]];
        for g in 0..gens {
            let d = self.degrees[g];
            add_block(&mut a, row_off[g], col_off[g], &self.diff(d + shift - 1), &f.one());
            for (from, to, p, c) in &self.terms {
                if *from == g {
                    let up = self.u_power(self.degrees[*to] + shift - 1, *p);
                    add_block(&mut a, row_off[g], col_off[*to], &up, c);
                }
            }
            let target = self.index(d + shift)[&(n, g)];
            b[row_off[g] + target] = f.one();
        }
        Ok(a.solve(&b)?.is_some())
    }
}

fn prefix(sizes: &[usize]) -> Vec<usize> {
    let mut out = vec![0];
    for s in sizes {
        out.push(out.last().unwrap() + s);
    }
    out
}

fn add_block(a: &mut DenseMatrix, r0: usize, c0: usize, blk: &DenseMatrix, scale: &Scalar) {
    let f = a.field();
    for i in 0..blk.rows() {
        for j in 0..blk.cols() {
            let v = blk.get(i, j);
            if !v.is_zero() {
                let cur = f.add(a.get(r0 + i, c0 + j), &f.mul(v, scale));
                a.set(r0 + i, c0 + j, cur);
            }
        }
    }
}

fn check_point(m: &KoszulModule) -> Result<()> {
    if m.ctx().nvars() != 0 || !m.potential().is_zero() {
        return Err(Error::NotPointCase(format!("module lives over {}", m.lg())));
    }
    Ok(())
}

fn build(m: &KoszulModule, window: i64, label: impl Fn(i64, usize) -> GenLabel) -> Result<AuModule> {
    check_point(m)?;
    let field = m.ctx().field();
    let mut degrees = Vec::new();
    let mut labels = Vec::new();
    let mut first: HashMap<i64, usize> = HashMap::new();
    for i in m.degrees() {
        first.insert(i, degrees.len());
        for j in 0..m.rank(i) {
            degrees.push(i);
            labels.push(label(i, j));
        }
    }
    let mut terms = Vec::new();
    for i in m.degrees() {
        for j in 0..m.rank(i) {
            let g = first[&i] + j;
            for (map, step, p) in [(m.d_at(i), 1i64, 0u32), (m.h_at(i), -1, 1)] {
                for r in 0..map.rows() {
                    let c = map.get(r, j).constant_value().expect("point-case entries are constants");
                    if !c.is_zero() {
                        terms.push((g, first[&(i + step)] + r, p, c));
                    }
                }
            }
        }
    }
    Ok(AuModule { field, degrees, labels, terms, window })
}

/// `(E ⊗ A[u], d + u·h)` for a module over `(field, 0)`.
pub fn twisted_e(m: &KoszulModule, window: i64) -> Result<AuModule> {
    check_point(m)?;
    if (m.width() as i64) > window {
        return Err(Error::WindowTooSmall(format!("window {window} is narrower than the module width {}", m.width())));
    }
    if m.width() > 0 && (m.lo() < -2 * window || m.hi() > 2 * window) {
        return Err(Error::WindowTooSmall(format!(
            "module degrees [{}, {}] leave the window [{}, {}]",
            m.lo(),
            m.hi(),
            -2 * window,
            2 * window
        )));
    }
    build(m, window, |i, j| vec![(i, j)])
}

/// Cohomology dimensions of `twisted_e(M)` over `[-2N, 2N]`.
pub fn rhom_trivial_dims(m: &KoszulModule, window: i64) -> Result<BTreeMap<i64, usize>> {
    let x = twisted_e(m, window)?;
    let (lo, hi) = x.safe_window();
    Ok((lo..=hi).map(|n| (n, x.cohomology_dim(n))).collect())
}

/// Tensor product over `A[u]`, generators `g ⊗ g'` with `g` major and
/// `D(g ⊗ g') = Dg ⊗ g' + (-1)^deg(g) g ⊗ Dg'`.
pub fn au_tensor(x: &AuModule, y: &AuModule) -> Result<AuModule> {
    if x.field != y.field {
        return Err(Error::ContextMismatch(format!("fields {} and {}", x.field, y.field)));
    }
    let f = x.field;
    let ny = y.degrees.len();
    let mut degrees = Vec::new();
    let mut labels = Vec::new();
    for (a, la) in x.degrees.iter().zip(&x.labels) {
        for (b, lb) in y.degrees.iter().zip(&y.labels) {
            degrees.push(a + b);
            labels.push(la.iter().chain(lb).cloned().collect());
        }
    }
    let mut terms = Vec::new();
    for g in 0..x.degrees.len() {
        for h in 0..ny {
            for (from, to, p, c) in &x.terms {
                if *from == g {
                    terms.push((g * ny + h, to * ny + h, *p, c.clone()));
                }
            }
            let odd = x.degrees[g].rem_euclid(2) == 1;
            for (from, to, p, c) in &y.terms {
                if *from == h {
                    let c = if odd { f.neg(c) } else { c.clone() };
                    terms.push((g * ny + h, g * ny + to, *p, c));
                }
            }
        }
    }
    Ok(AuModule { field: f, degrees, labels, terms, window: x.window.min(y.window) })
}

/// Compares `twisted_e(M ⊠ N)` with `twisted_e(M) ⊗ twisted_e(N)` level by
/// level after sorting generators by provenance. Returns the first level
/// whose differential or `u`-action differs.
pub fn twisted_monoidality_check(m: &KoszulModule, n: &KoszulModule, window: i64) -> Result<Option<i64>> {
    let conv = convolve_ext(m, n)?;
    let lab = ConvolutionLabels::new(m, n);
    let left = build(&conv, window, |deg, idx| {
        let (a, i, b, j) = lab.labels(deg)[idx];
        vec![(a, i), (b, j)]
    })?
    .canonical();
    let right = au_tensor(&build(m, window, |i, j| vec![(i, j)])?, &build(n, window, |i, j| vec![(i, j)])?)?.canonical();
    if left.degrees != right.degrees || left.labels != right.labels {
        return Ok(Some(-2 * window));
    }
    for lvl in -2 * window..=2 * window {
        if left.diff(lvl) != right.diff(lvl) || left.u_action(lvl) != right.u_action(lvl) {
            return Ok(Some(lvl));
        }
    }
    Ok(None)
}

/// Per-degree cohomology of the cone of `u` on `twisted_e(M)` and of
/// `twisted_e(pull_push(M))[-1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UConeReport {
    pub window: (i64, i64),
    pub cone: BTreeMap<i64, usize>,
    pub pull_push: BTreeMap<i64, usize>,
}

impl UConeReport {
    pub fn agrees(&self) -> bool {
        self.cone == self.pull_push
    }
}

pub fn u_cone_check(m: &KoszulModule, window: i64) -> Result<UConeReport> {
    let x = twisted_e(m, window)?;
    let y = build(&pull_push(m)?, window, |i, j| vec![(i, j)])?;
    let (lo, hi) = x.safe_window();
    let f = x.field;
    // cone level n = X^n ⊕ X^(n-1), D = [[D_n, u_(n-1)], [0, -D_(n-1)]]
    let cone_diff = |n: i64| -> DenseMatrix {
        let (a, b) = (x.rank(n), x.rank(n - 1));
        let (c, d) = (x.rank(n + 1), x.rank(n));
        let mut out = DenseMatrix::zeros(f, c + d, a + b);
        add_block(&mut out, 0, 0, &x.diff(n), &f.one());
        add_block(&mut out, 0, a, &x.u_action(n - 1), &f.one());
        add_block(&mut out, c, a, &x.diff(n - 1), &f.from_int(-1));
        out
    };
    let cone = (lo..=hi).map(|n| (n, cohomology_dim(&cone_diff(n - 1), &cone_diff(n)))).collect();
    let pp = (lo..=hi).map(|n| (n, y.cohomology_dim(n - 1))).collect();
    Ok(UConeReport { window: (lo, hi), cone, pull_push: pp })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::koszul::{koszul_algebra, shift, trivial_module};

    #[test]
    fn au_pattern_of_trivial() {
        let dims = rhom_trivial_dims(&trivial_module(Field::Rational), 5).unwrap();
        for (n, d) in dims {
            assert_eq!(d, usize::from((0..=10).contains(&n) && n % 2 == 0), "degree {n}");
        }
    }

    #[test]
    fn koszul_algebra_is_shifted_field() {
        let k = koszul_algebra(trivial_module(Field::Rational).lg());
        let dims = rhom_trivial_dims(&k, 5).unwrap();
        for (n, d) in dims {
            assert_eq!(d, usize::from(n == -1), "degree {n}");
        }
        let x = twisted_e(&k, 5).unwrap();
        x.validate().unwrap();
        assert_eq!(x.u_torsion_order(5).unwrap(), Some(1));
    }

    #[test]
    fn trivial_is_not_torsion() {
        let t = trivial_module(Field::Rational);
        assert_eq!(twisted_e(&t, 5).unwrap().u_torsion_order(5).unwrap(), None);
        let dims = rhom_trivial_dims(&shift(&t), 5).unwrap();
        assert_eq!(dims[&-1], 1);
        assert_eq!(dims[&0], 0);
    }

    #[test]
    fn window_too_small() {
        let k = koszul_algebra(trivial_module(Field::Rational).lg());
        assert!(matches!(twisted_e(&k, 1), Err(Error::WindowTooSmall(_))));
    }
}
