//! Invariant homomorphisms on the kernels of `G_{n+k} → Gₙ`, and the
//! direct-limit calculator.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::{normal_closure, Perm};
use crate::quotients::{frattini_quotient_dim, LayeredAction};

/// Largest `n + k` accepted by [`invariant_hom_dim`].
pub const MAX_INFLATION_LEVEL: usize = 6;

fn log2_order(g: &crate::perm::PermGroup) -> u64 {
    g.log2_order().expect("2-group")
}

/// `dim Hom(Ker, F₂)^{Gₙ}` for `Ker = Ker(G_{n+k} → Gₙ)`, i.e. `dim Ker / Ker²[Ker, G_{n+k}]`.
pub fn invariant_hom_dim(n: usize, k: usize) -> Result<u64> {
    if n < 3 || k < 1 {
        return Err(Error::Invalid(format!("need n >= 3 and k >= 1, got ({n}, {k})")));
    }
    if n + k > MAX_INFLATION_LEVEL {
        return Err(Error::Resource(format!("n + k = {} exceeds {MAX_INFLATION_LEVEL}", n + k)));
    }
    let act = LayeredAction::new(n, n + k);
    let g = act.group()?;
    let depth = act.prefix().len();
    let ker = g.stabilizer_generators(depth);
    let ker_log2 = log2_order(&crate::perm::PermGroup::new(act.degree(), ker.clone())?);
    let mut sub: Vec<Perm> = ker.iter().map(|x| x.compose(x)).collect();
    for x in &ker {
        for y in &act.gens {
            sub.push(Perm::commutator(x, y));
        }
    }
    let n_sub = normal_closure(act.degree(), &act.gens, &sub, &[])?;
    Ok(ker_log2 - log2_order(&n_sub))
}

/// `d(St(3))` for the image of the level-3 stabilizer in `G_level`.
pub fn st3_rank_bound(level: usize) -> Result<u64> {
    if !(3..=MAX_INFLATION_LEVEL + 2).contains(&level) {
        return Err(Error::LevelOutOfRange { level, range: format!("3..={}", MAX_INFLATION_LEVEL + 2) });
    }
    let act = LayeredAction::new(3, level);
    let g = act.group()?;
    let st3 = g.stabilizer_generators(act.prefix().len());
    frattini_quotient_dim(act.degree(), &st3)
}

/// A direct system of elementary abelian 2-groups, by dimension.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LimitSystem {
    /// `dims[i]` is the dimension at index `offset + i`.
    pub dims: Vec<u64>,
    pub kernel_bound: u64,
    pub offset: usize,
}

impl LimitSystem {
    pub fn new(dims: Vec<u64>, kernel_bound: u64, offset: usize) -> Result<Self> {
        if dims.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::Invalid("dimensions must be non-decreasing".into()));
        }
        Ok(LimitSystem { dims, kernel_bound, offset })
    }

    /// `2n + 1` for `n = from..=to`.
    pub fn h2_dims(from: usize, to: usize, kernel_bound: u64) -> Self {
        LimitSystem { dims: (from..=to).map(|n| 2 * n as u64 + 1).collect(), kernel_bound, offset: from }
    }
}

/// Least index `i` with `dims[i] > N·M`.
pub fn limit_bound(sys: &LimitSystem, m: u64) -> Result<usize> {
    let target = sys.kernel_bound.checked_mul(m).ok_or_else(|| Error::Resource("N·M overflows".into()))?;
    let i = sys.dims.partition_point(|&d| d <= target);
    if i == sys.dims.len() {
        return Err(Error::Exhausted);
    }
    Ok(sys.offset + i)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formula_system() {
        let sys = LimitSystem::h2_dims(3, 100, 5);
        assert_eq!(limit_bound(&sys, 10), Ok(25));
        assert_eq!(limit_bound(&LimitSystem::h2_dims(3, 100, 0), 1_000), Ok(3));
        assert_eq!(limit_bound(&LimitSystem::h2_dims(3, 10, 5), 10), Err(Error::Exhausted));
        assert!(LimitSystem::new(vec![3, 2], 1, 0).is_err());
    }

    #[test]
    fn small_grid() {
        assert_eq!(invariant_hom_dim(3, 1).unwrap(), invariant_hom_dim(3, 1).unwrap());
        assert!(invariant_hom_dim(3, 4).unwrap_err().is_resource());
        assert!(invariant_hom_dim(2, 1).is_err());
    }
}
