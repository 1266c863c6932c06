use crate::error::{Error, Result};
use crate::koszul::KoszulModule;
use crate::mf::LGPair;
use crate::poly::{Field, PolyMatrix, RingCtx};

/// The free `K(field, 0)`-module `T_n` of rank `n`, in degrees `[-2n+1, 0]`.
///
/// Each degree has rank one. The exterior summands are the pairs of
/// degrees `{-2j, -2j-1}`, with `h` the identity from the even degree to
/// the odd one below; `d` is the identity from each even degree `-2j`
/// (for `j ≥ 1`) up to `-2j+1`, linking consecutive summands. Its underlying
/// complex has cohomology only in degrees `0` and `-2n+1`, and `T_1` is
/// the Koszul algebra.
pub fn telescope(field: Field, n: usize) -> Result<KoszulModule> {
    if n < 1 {
        return Err(Error::Shape("telescope needs n >= 1".into()));
    }
    let ctx = RingCtx::point(field);
    let lg = LGPair::zero(&ctx);
    let lo = -(2 * n as i64) + 1;
    let one = PolyMatrix::identity(&ctx, 1);
    let zero = PolyMatrix::zeros(&ctx, 1, 1);
    let even = |i: i64| i.rem_euclid(2) == 0;
    KoszulModule::from_fns(
        &lg,
        lo,
        vec![1; 2 * n],
        |i| Ok(if even(i) { one.clone() } else { zero.clone() }),
        |i| Ok(if even(i) { one.clone() } else { zero.clone() }),
    )
}
