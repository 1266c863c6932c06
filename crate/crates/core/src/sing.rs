//! Singularity-category reports: stable Homs, perfectness, u-torsion in the
//! point case, and the Milnor number oracle.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::koszul::{rhom_trivial_dims, trivial_module, twisted_e, KoszulModule};
use crate::mf::{box_product, hom_cohomology_dims, is_null_homotopic, GradedHom, HomComplex, LGPair, MatrixFactorization, StableDims};
use crate::orlov::fold;
use crate::poly::{groebner_module, quotient_k_dim, Dim, Field, Limits, Poly, PolyMatrix};

fn same_pair(m: &KoszulModule, n: &KoszulModule) -> Result<()> {
    if m.ctx() != n.ctx() || m.potential() != n.potential() {
        return Err(Error::ContextMismatch(format!("{} vs {}", m.lg(), n.lg())));
    }
    Ok(())
}

/// Stable Hom dimensions, computed on the folded factorizations.
pub fn stable_hom_dims(m: &KoszulModule, n: &KoszulModule, limits: &Limits) -> Result<StableDims> {
    same_pair(m, n)?;
    hom_cohomology_dims(&fold(m)?, &fold(n)?, limits)
}

/// Whether a module vanishes in the singularity category.
#[derive(Debug, Clone)]
pub enum Perfectness {
    /// Odd `s` on the fold with `d(s) = id`.
    Perfect(GradedHom),
    /// Nonzero normal form of `id` modulo the boundaries of the End complex.
    NotPerfect { residue: Vec<Poly> },
}

impl Perfectness {
    pub fn is_perfect(&self) -> bool {
        matches!(self, Perfectness::Perfect(_))
    }
}

/// Decides contractibility of `fold(M)`.
pub fn is_perfect(m: &KoszulModule, limits: &Limits) -> Result<Perfectness> {
    mf_perfectness(&fold(m)?, limits)
}

/// Decides contractibility of a factorization.
pub fn mf_perfectness(e: &MatrixFactorization, limits: &Limits) -> Result<Perfectness> {
    let id = GradedHom::identity(e);
    if let Some(s) = is_null_homotopic(&id, limits)? {
        return Ok(Perfectness::Perfect(s));
    }
    let hc = HomComplex::new(e, e)?;
    let gb = groebner_module(&hc.d_odd.columns(), hc.d_odd.rows(), e.ctx(), limits)?;
    let residue = gb.normal_form(&hc.vectorize(&id))?;
    if residue.iter().all(Poly::is_zero) {
        return Err(Error::Internal("identity reduces to zero but has no null-homotopy".into()));
    }
    Ok(Perfectness::NotPerfect { residue })
}

/// Least `n ≤ window` with `u^n` null-homotopic on `twisted_E(M)`.
/// `None` means no such `n` was found, including when the window is too
/// small for the module.
pub fn u_torsion_order_point(m: &KoszulModule, window: i64) -> Result<Option<u32>> {
    let x = match twisted_e(m, window) {
        Ok(x) => x,
        Err(Error::WindowTooSmall(_)) => return Ok(None),
        Err(e) => return Err(e),
    };
    x.u_torsion_order(window.max(0) as u32)
}

/// `μ(f)`: field dimension of `B / (∂f/∂x_1, …, ∂f/∂x_n)`.
///
/// Over `F_p` this needs `p` larger than every exponent of `f`.
pub fn milnor_number(f: &Poly, limits: &Limits) -> Result<Dim> {
    let ctx = f.ctx();
    let p = ctx.field().characteristic();
    let deg = f.max_exponent();
    if p != 0 && p <= deg {
        return Err(Error::CharacteristicTooSmall { characteristic: p, degree: deg });
    }
    let partials: Vec<Poly> = (0..ctx.nvars()).map(|i| f.derivative(i)).collect();
    let n = partials.len();
    quotient_k_dim(&PolyMatrix::from_rows(ctx, vec![partials], n)?, limits)
}

/// Stable-End Künneth comparison for a pair of factorizations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KunnethCheck {
    pub expected: StableDims,
    pub direct: StableDims,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThomSebastiani {
    pub mu_f: u64,
    pub mu_g: u64,
    pub mu_sum: Dim,
    pub kunneth: Option<KunnethCheck>,
}

impl ThomSebastiani {
    pub fn multiplicative(&self) -> bool {
        self.mu_sum == Dim::Finite(self.mu_f * self.mu_g)
    }

    pub fn passes(&self) -> bool {
        self.multiplicative() && self.kunneth.as_ref().is_none_or(|k| k.expected == k.direct)
    }
}

/// Checks `μ(f ⊞ g) = μ(f)·μ(g)` and, for supplied factorizations of `f`
/// and `g`, that `End(E ⊠ F)` has the Künneth dimensions.
pub fn thom_sebastiani_check(
    f: &Poly,
    g: &Poly,
    mfs: Option<(&MatrixFactorization, &MatrixFactorization)>,
    limits: &Limits,
) -> Result<ThomSebastiani> {
    let sum = LGPair::new(f.clone()).boxplus(&LGPair::new(g.clone()))?;
    let isolated = |p: &Poly| -> Result<u64> {
        match milnor_number(p, limits)? {
            Dim::Finite(n) => Ok(n),
            Dim::Infinite => Err(Error::NonIsolated(Dim::Infinite)),
        }
    };
    let mu_f = isolated(f)?;
    let mu_g = isolated(g)?;
    let mu_sum = milnor_number(sum.potential(), limits)?;
    let kunneth = match mfs {
        None => None,
        Some((e, h)) => {
            if e.potential() != f || h.potential() != g {
                return Err(Error::ContextMismatch("factorizations do not match the potentials".into()));
            }
            let expected = hom_cohomology_dims(e, e, limits)?.kunneth(&hom_cohomology_dims(h, h, limits)?);
            let eh = box_product(e, h)?;
            Some(KunnethCheck { expected, direct: hom_cohomology_dims(&eh, &eh, limits)? })
        }
    };
    Ok(ThomSebastiani { mu_f, mu_g, mu_sum, kunneth })
}

/// Computed singularity-category data for one module.
#[derive(Debug, Clone)]
pub struct SingReport {
    pub stable_dims: StableDims,
    pub perfectness: Perfectness,
    pub u_torsion: Option<u32>,
    pub rhom_dims: Option<BTreeMap<i64, usize>>,
    pub notes: Vec<String>,
}

impl SingReport {
    /// Perfect modules have zero stable End; in the point case a torsion
    /// order is found exactly for perfect modules.
    pub fn is_consistent(&self) -> bool {
        let perfect = self.perfectness.is_perfect();
        (!perfect || self.stable_dims.is_zero()) && (self.rhom_dims.is_none() || self.u_torsion.is_some() == perfect)
    }
}

/// Stable End, perfectness, and, in the point case, the u-torsion order and
/// `RHom` dimensions within `window`.
pub fn sing_report(m: &KoszulModule, window: i64, limits: &Limits) -> Result<SingReport> {
    let stable_dims = stable_hom_dims(m, m, limits)?;
    let perfectness = is_perfect(m, limits)?;
    let mut notes = vec![format!(
        "limits: {} S-pairs, basis {}, search {}",
        limits.max_spairs, limits.max_basis, limits.max_search
    )];
    let point = m.ctx().nvars() == 0 && m.potential().is_zero();
    let (u_torsion, rhom_dims) = if point {
        notes.push(format!("window N = {window}, levels [-{}, {}]", 2 * window, 2 * window));
        let order = u_torsion_order_point(m, window)?;
        if order.is_none() {
            notes.push(format!("no u-torsion order up to {window}"));
        }
        let dims = match rhom_trivial_dims(m, window) {
            Ok(d) => Some(d),
            Err(Error::WindowTooSmall(msg)) => {
                notes.push(format!("window too small: {msg}"));
                None
            }
            Err(e) => return Err(e),
        };
        (order, dims)
    } else {
        notes.push("u-torsion is only computed over the point with zero potential".into());
        (None, None)
    };
    Ok(SingReport { stable_dims, perfectness, u_torsion, rhom_dims, notes })
}

/// The report for the trivial module over `(field, 0)`.
pub fn point_case_report(field: Field, window: i64, limits: &Limits) -> Result<SingReport> {
    sing_report(&trivial_module(field), window, limits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::koszul::{koszul_algebra, residue_representative, telescope};
    use crate::mf::new_mf;
    use crate::poly::{parse_poly, RingCtx};

    fn poly(s: &str, vars: &[&str]) -> Poly {
        parse_poly(s, &RingCtx::rational(vars)).unwrap()
    }

    #[test]
    fn milnor_examples() {
        let l = Limits::default();
        for n in 2..=6 {
            assert_eq!(milnor_number(&poly(&format!("x^{n}"), &["x"]), &l).unwrap(), Dim::Finite(n - 1));
        }
        assert_eq!(milnor_number(&poly("x^3 + y^2", &["x", "y"]), &l).unwrap(), Dim::Finite(2));
        assert_eq!(milnor_number(&poly("x^2*y", &["x", "y"]), &l).unwrap(), Dim::Infinite);
        let ctx = RingCtx::new(Field::prime(3).unwrap(), &["x"], Default::default()).unwrap();
        assert!(matches!(
            milnor_number(&parse_poly("x^3", &ctx).unwrap(), &l),
            Err(Error::CharacteristicTooSmall { characteristic: 3, degree: 3 })
        ));
    }

    #[test]
    fn perfectness_examples() {
        let l = Limits::default();
        let lg = LGPair::new(poly("x^2", &["x"]));
        assert!(is_perfect(&koszul_algebra(&lg), &l).unwrap().is_perfect());
        let x = Poly::var(lg.ctx(), "x").unwrap();
        assert!(!is_perfect(&residue_representative(&lg, &x, &x).unwrap(), &l).unwrap().is_perfect());
        assert!(!is_perfect(&trivial_module(Field::Rational), &l).unwrap().is_perfect());
    }

    #[test]
    fn torsion_orders_in_point_case() {
        let point = RingCtx::point(Field::Rational);
        assert_eq!(u_torsion_order_point(&koszul_algebra(&LGPair::zero(&point)), 5).unwrap(), Some(1));
        assert_eq!(u_torsion_order_point(&trivial_module(Field::Rational), 5).unwrap(), None);
        let t2 = u_torsion_order_point(&telescope(Field::Rational, 2).unwrap(), 5).unwrap();
        assert!(matches!(t2, Some(n) if n <= 2));
        let t3 = telescope(Field::Rational, 3).unwrap();
        assert_eq!(u_torsion_order_point(&t3, 5).unwrap(), None, "width 6 needs a larger window");
        assert!(matches!(u_torsion_order_point(&t3, 8).unwrap(), Some(n) if n <= 3));
    }

    #[test]
    fn point_report() {
        for field in [Field::Rational, Field::prime(101).unwrap()] {
            let r = point_case_report(field, 5, &Limits::default()).unwrap();
            assert_eq!(r.stable_dims, StableDims::finite(1, 0));
            assert!(r.u_torsion.is_none() && r.is_consistent());
        }
    }

    #[test]
    fn thom_sebastiani_examples() {
        let l = Limits::default();
        let f = poly("x^2", &["x"]);
        let g = poly("y^2", &["y"]);
        let e = new_mf(&LGPair::new(f.clone()), PolyMatrix::from_strs(f.ctx(), &[&["x"]]).unwrap(), PolyMatrix::from_strs(f.ctx(), &[&["x"]]).unwrap()).unwrap();
        let h = new_mf(&LGPair::new(g.clone()), PolyMatrix::from_strs(g.ctx(), &[&["y"]]).unwrap(), PolyMatrix::from_strs(g.ctx(), &[&["y"]]).unwrap()).unwrap();
        let r = thom_sebastiani_check(&f, &g, Some((&e, &h)), &l).unwrap();
        assert!(r.passes());
        assert_eq!(r.kunneth.unwrap().direct, StableDims::finite(2, 2));
        let bad = poly("x^2*y", &["x", "y"]);
        assert!(matches!(thom_sebastiani_check(&bad, &poly("z^2", &["z"]), None, &l), Err(Error::NonIsolated(_))));
    }
}
