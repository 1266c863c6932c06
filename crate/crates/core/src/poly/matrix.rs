use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::poly::field::Scalar;
use crate::poly::parse::parse_poly;
use crate::poly::polynomial::Poly;
use crate::poly::ring::RingCtx;

/// Dense row-major matrix of polynomials over one ring. Empty shapes
/// (zero rows or columns) are legal and keep their ring.
#[derive(Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    ctx: Arc<RingCtx>,
    rows: usize,
    cols: usize,
    entries: Vec<Poly>,
}

impl PolyMatrix {
    pub fn zeros(ctx: &Arc<RingCtx>, rows: usize, cols: usize) -> PolyMatrix {
        PolyMatrix { ctx: ctx.clone(), rows, cols, entries: vec![Poly::zero(ctx); rows * cols] }
    }

    pub fn identity(ctx: &Arc<RingCtx>, n: usize) -> PolyMatrix {
        PolyMatrix::scalar(ctx, n, &Poly::one(ctx))
    }

    /// `p · Id_n`.
    pub fn scalar(ctx: &Arc<RingCtx>, n: usize, p: &Poly) -> PolyMatrix {
        let mut m = PolyMatrix::zeros(ctx, n, n);
        for i in 0..n {
            m.set(i, i, p.clone());
        }
        m
    }

    pub fn from_rows(ctx: &Arc<RingCtx>, rows: Vec<Vec<Poly>>, cols: usize) -> Result<PolyMatrix> {
        let nrows = rows.len();
        let mut entries = Vec::with_capacity(nrows * cols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(Error::Shape(format!("row {i} has {} entries, expected {cols}", row.len())));
            }
            for p in row {
                if p.ctx() != ctx {
                    return Err(Error::ContextMismatch(format!("entry in {} but matrix over {}", p.ctx(), ctx)));
                }
                entries.push(p);
            }
        }
        Ok(PolyMatrix { ctx: ctx.clone(), rows: nrows, cols, entries })
    }

    /// Builds from columns, each of length `rows`.
    pub fn from_cols(ctx: &Arc<RingCtx>, rows: usize, cols: &[Vec<Poly>]) -> Result<PolyMatrix> {
        let mut m = PolyMatrix::zeros(ctx, rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            if c.len() != rows {
                return Err(Error::Shape(format!("column {j} has {} entries, expected {rows}", c.len())));
            }
            for (i, p) in c.iter().enumerate() {
                m.set(i, j, p.clone());
            }
        }
        Ok(m)
    }

    /// Parses a matrix given as rows of expression strings.
    pub fn parse<S: AsRef<str>>(ctx: &Arc<RingCtx>, rows: &[Vec<S>], cols: usize) -> Result<PolyMatrix> {
        let parsed = rows
            .iter()
            .map(|r| r.iter().map(|s| parse_poly(s.as_ref(), ctx)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        PolyMatrix::from_rows(ctx, parsed, cols)
    }

    /// Convenience for tests and examples: rows of expression strings with
    /// the column count taken from the first row.
    pub fn from_strs(ctx: &Arc<RingCtx>, rows: &[&[&str]]) -> Result<PolyMatrix> {
        let cols = rows.first().map(|r| r.len()).unwrap_or(0);
        let rows: Vec<Vec<&str>> = rows.iter().map(|r| r.to_vec()).collect();
        PolyMatrix::parse(ctx, &rows, cols)
    }

    pub fn ctx(&self) -> &Arc<RingCtx> {
        &self.ctx
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> &Poly {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Poly) {
        debug_assert!(p.ctx() == &self.ctx);
        self.entries[i * self.cols + j] = p;
    }

    pub fn entries(&self) -> &[Poly] {
        &self.entries
    }

    pub fn column(&self, j: usize) -> Vec<Poly> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Poly>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn row(&self, i: usize) -> &[Poly] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Poly::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn mul(&self, rhs: &PolyMatrix) -> Result<PolyMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        if self.ctx != rhs.ctx {
            return Err(Error::ContextMismatch(format!("{} vs {}", self.ctx, rhs.ctx)));
        }
        let mut out = PolyMatrix::zeros(&self.ctx, self.rows, rhs.cols);
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let mut acc = Poly::zero(&self.ctx);
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    let b = rhs.get(k, j);
                    if a.is_zero() || b.is_zero() {
                        continue;
                    }
                    acc = &acc + &(a * b);
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Poly]) -> Result<Vec<Poly>> {
        if v.len() != self.cols {
            return Err(Error::Shape(format!("vector of length {} for {} columns", v.len(), self.cols)));
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = Poly::zero(&self.ctx);
                for (k, x) in v.iter().enumerate() {
                    let a = self.get(i, k);
                    if !a.is_zero() && !x.is_zero() {
                        acc = &acc + &(a * x);
                    }
                }
                acc
            })
            .collect())
    }

    fn zip(&self, rhs: &PolyMatrix, sub: bool) -> Result<PolyMatrix> {
        if self.shape() != rhs.shape() {
            return Err(Error::Shape(format!(
                "cannot combine {}x{} with {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        if self.ctx != rhs.ctx {
            return Err(Error::ContextMismatch(format!("{} vs {}", self.ctx, rhs.ctx)));
        }
        let entries = self
            .entries
            .iter()
            .zip(&rhs.entries)
            .map(|(a, b)| if sub { a - b } else { a + b })
            .collect();
        Ok(PolyMatrix { ctx: self.ctx.clone(), rows: self.rows, cols: self.cols, entries })
    }

    pub fn add(&self, rhs: &PolyMatrix) -> Result<PolyMatrix> {
        self.zip(rhs, false)
    }

    pub fn sub(&self, rhs: &PolyMatrix) -> Result<PolyMatrix> {
        self.zip(rhs, true)
    }

    pub fn neg(&self) -> PolyMatrix {
        self.map(|p| -p)
    }

    pub fn scale(&self, c: &Scalar) -> PolyMatrix {
        self.map(|p| p.scale(c))
    }

    pub fn scale_poly(&self, q: &Poly) -> PolyMatrix {
        self.map(|p| p * q)
    }

    pub fn map(&self, f: impl Fn(&Poly) -> Poly) -> PolyMatrix {
        PolyMatrix {
            ctx: self.ctx.clone(),
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    /// Entrywise map into another ring.
    pub fn try_map_into(&self, ctx: &Arc<RingCtx>, f: impl Fn(&Poly) -> Result<Poly>) -> Result<PolyMatrix> {
        let entries = self.entries.iter().map(f).collect::<Result<Vec<_>>>()?;
        Ok(PolyMatrix { ctx: ctx.clone(), rows: self.rows, cols: self.cols, entries })
    }

    pub fn embed(&self, target: &Arc<RingCtx>, offset: usize) -> PolyMatrix {
        PolyMatrix {
            ctx: target.clone(),
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|p| p.embed(target, offset)).collect(),
        }
    }

    pub fn transpose(&self) -> PolyMatrix {
        let mut out = PolyMatrix::zeros(&self.ctx, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    /// Kronecker product `self ⊗ rhs`; index `(i, k)` of the product is `i * rhs.rows + k`.
    pub fn kron(&self, rhs: &PolyMatrix) -> Result<PolyMatrix> {
        if self.ctx != rhs.ctx {
            return Err(Error::ContextMismatch(format!("{} vs {}", self.ctx, rhs.ctx)));
        }
        let mut out = PolyMatrix::zeros(&self.ctx, self.rows * rhs.rows, self.cols * rhs.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..rhs.rows {
                    for l in 0..rhs.cols {
                        let b = rhs.get(k, l);
                        if !b.is_zero() {
                            out.set(i * rhs.rows + k, j * rhs.cols + l, a * b);
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// Assembles a block matrix. `row_sizes`/`col_sizes` fix the shape even
    /// when a whole block row or column is missing.
    pub fn from_blocks(
        ctx: &Arc<RingCtx>,
        row_sizes: &[usize],
        col_sizes: &[usize],
        blocks: &[Vec<Option<&PolyMatrix>>],
    ) -> Result<PolyMatrix> {
        let rows: usize = row_sizes.iter().sum();
        let cols: usize = col_sizes.iter().sum();
        let mut out = PolyMatrix::zeros(ctx, rows, cols);
        let mut r0 = 0;
        for (bi, &rs) in row_sizes.iter().enumerate() {
            let mut c0 = 0;
            for (bj, &cs) in col_sizes.iter().enumerate() {
                if let Some(Some(b)) = blocks.get(bi).and_then(|r| r.get(bj)) {
                    if b.shape() != (rs, cs) {
                        return Err(Error::Shape(format!(
                            "block ({bi},{bj}) is {}x{}, expected {rs}x{cs}",
                            b.rows, b.cols
                        )));
                    }
                    out.set_block(r0, c0, b);
                }
                c0 += cs;
            }
            r0 += rs;
        }
        Ok(out)
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &PolyMatrix) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self.set(r0 + i, c0 + j, b.get(i, j).clone());
            }
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> PolyMatrix {
        let mut out = PolyMatrix::zeros(&self.ctx, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                out.set(i, j, self.get(r0 + i, c0 + j).clone());
            }
        }
        out
    }

    /// `out[i][j] = self[row_perm[i]][col_perm[j]]`.
    pub fn permute(&self, row_perm: &[usize], col_perm: &[usize]) -> PolyMatrix {
        let mut out = PolyMatrix::zeros(&self.ctx, row_perm.len(), col_perm.len());
        for (i, &ri) in row_perm.iter().enumerate() {
            for (j, &cj) in col_perm.iter().enumerate() {
                out.set(i, j, self.get(ri, cj).clone());
            }
        }
        out
    }

    /// First entry where `self` and `rhs` differ, with the difference.
    pub fn first_difference(&self, rhs: &PolyMatrix) -> Option<(usize, usize, Poly)> {
        for i in 0..self.rows {
            for j in 0..self.cols {
                let d = self.get(i, j) - rhs.get(i, j);
                if !d.is_zero() {
                    return Some((i, j, d));
                }
            }
        }
        None
    }

    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (0..self.rows).map(|i| self.row(i).iter().map(|p| p.to_string()).collect()).collect()
    }
}

impl fmt::Debug for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PolyMatrix {}x{} {:?}", self.rows, self.cols, self.to_strings())
    }
}

impl fmt::Display for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self.to_strings().iter().map(|r| format!("[{}]", r.join(", "))).collect();
        write!(f, "[{}]", rows.join(", "))
    }
}
