//! Weighted cycles, balancing and intersection with combinatorially principal
//! functions.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::affine::AffineStructure;
use crate::complex::{ConeComplex, ConeId, PLFunction};
use crate::error::{Error, Result};
use crate::rational::{common_denominator, Q};

/// A dimension-`k` weight on the `k`-cones of a complex. Missing keys are 0.
#[derive(Debug, Clone)]
pub struct TropicalCycle {
    pub complex: Arc<ConeComplex>,
    pub dim: usize,
    weights: BTreeMap<ConeId, Q>,
}

impl PartialEq for TropicalCycle {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim
            && self.weights == other.weights
            && (Arc::ptr_eq(&self.complex, &other.complex) || *self.complex == *other.complex)
    }
}

impl TropicalCycle {
    pub fn new(
        complex: Arc<ConeComplex>,
        dim: usize,
        weights: BTreeMap<ConeId, Q>,
    ) -> Result<Self> {
        for c in weights.keys() {
            complex.check(*c)?;
            if complex.cone(*c).dim() != dim {
                return Err(Error::DomainMismatch(format!(
                    "cone {} does not have dimension {}",
                    complex.cone(*c).id,
                    dim
                )));
            }
        }
        let weights = weights.into_iter().filter(|(_, w)| !w.is_zero()).collect();
        Ok(TropicalCycle {
            complex,
            dim,
            weights,
        })
    }

    pub fn zero(complex: Arc<ConeComplex>, dim: usize) -> Self {
        TropicalCycle {
            complex,
            dim,
            weights: BTreeMap::new(),
        }
    }

    /// Weight 1 on every top-dimensional cone.
    pub fn fundamental_class(complex: Arc<ConeComplex>) -> Result<Self> {
        if !complex.is_pure() {
            return Err(Error::NotPure);
        }
        let d = complex.dim();
        let weights = complex
            .cones_of_dim(d)
            .into_iter()
            .map(|c| (c, Q::one()))
            .collect();
        Self::new(complex, d, weights)
    }

    pub fn weight(&self, c: ConeId) -> Q {
        self.weights.get(&c).cloned().unwrap_or_else(Q::zero)
    }

    /// Nonzero weights.
    pub fn weights(&self) -> &BTreeMap<ConeId, Q> {
        &self.weights
    }

    /// Sum of all weights; the degree of a 0-cycle.
    pub fn total(&self) -> Q {
        self.weights.values().sum()
    }

    pub fn scale(&self, s: &Q) -> Self {
        TropicalCycle {
            complex: self.complex.clone(),
            dim: self.dim,
            weights: self
                .weights
                .iter()
                .map(|(c, w)| (*c, w * s))
                .filter(|(_, w)| !w.is_zero())
                .collect(),
        }
    }

    pub fn add(&self, other: &TropicalCycle) -> Result<Self> {
        if self.dim != other.dim || *self.complex != *other.complex {
            return Err(Error::DomainMismatch(
                "adding cycles on different complexes".into(),
            ));
        }
        let mut w = self.weights.clone();
        for (c, v) in &other.weights {
            *w.entry(*c).or_insert_with(Q::zero) += v;
        }
        Self::new(self.complex.clone(), self.dim, w)
    }

    /// `(k-1)`-cones that are faces of a cone with nonzero weight.
    fn boundary_faces(&self) -> Vec<ConeId> {
        if self.dim == 0 {
            return Vec::new();
        }
        let mut out = BTreeSet::new();
        for c in self.weights.keys() {
            for f in self.complex.faces(*c) {
                if self.complex.cone(f).dim() + 1 == self.dim {
                    out.insert(f);
                }
            }
        }
        out.into_iter().collect()
    }

    /// Checks `Σ_ρ χ(u_{ρ/τ})·c(ρ) = 0` for a basis of the affine functions
    /// vanishing on each codimension-one cone `τ`.
    pub fn is_balanced(&self, a: &AffineStructure) -> Result<Balance> {
        let taus = self.boundary_faces();
        let found: Vec<Option<Unbalanced>> = taus
            .par_iter()
            .map(|&tau| -> Result<Option<Unbalanced>> {
                for chi in a.vanishing_basis(tau)? {
                    let p = self.pairing(&chi, tau)?;
                    if !p.is_zero() {
                        return Ok(Some(Unbalanced {
                            tau,
                            function: chi,
                            pairing: p,
                        }));
                    }
                }
                Ok(None)
            })
            .collect::<Result<_>>()?;
        Ok(Balance {
            witness: found.into_iter().flatten().next(),
        })
    }

    /// `Σ_{ρ ⊃ τ} f(u_{ρ/τ})·c(ρ)` over cones one dimension above `tau`.
    fn pairing(&self, f: &PLFunction, tau: ConeId) -> Result<Q> {
        let mut s = Q::zero();
        for (rho, extra) in self.complex.upper_neighbors(tau)? {
            let w = self.weight(rho);
            if !w.is_zero() {
                s += f.slope(extra) * w;
            }
        }
        Ok(s)
    }
}

#[derive(Debug, Clone)]
pub struct Unbalanced {
    pub tau: ConeId,
    pub function: PLFunction,
    pub pairing: Q,
}

#[derive(Debug, Clone)]
pub struct Balance {
    pub witness: Option<Unbalanced>,
}

impl Balance {
    pub fn is_balanced(&self) -> bool {
        self.witness.is_none()
    }
}

static AUDIT: AtomicBool = AtomicBool::new(cfg!(test));
static AUDITED: AtomicUsize = AtomicUsize::new(0);

/// Process-wide switch: when on, every product built by [`intersect`] is
/// checked for balancing and an unbalanced one is returned as an error.
pub fn set_audit(on: bool) {
    AUDIT.store(on, Ordering::SeqCst);
}

/// Number of products checked since the audit was first enabled.
pub fn audited_products() -> usize {
    AUDITED.load(Ordering::SeqCst)
}

/// `f · c`: weight at each `(k-1)`-cone `τ` is `−Σ_ρ (f − χ)(u_{ρ/τ})·c(ρ)`
/// with `χ` affine at `τ` and equal to `f` on `τ`. Fractional slopes are
/// handled by clearing denominators first.
pub fn intersect(a: &AffineStructure, f: &PLFunction, c: &TropicalCycle) -> Result<TropicalCycle> {
    if c.dim == 0 {
        return Err(Error::DomainMismatch("cannot intersect a 0-cycle".into()));
    }
    let d: BigInt = common_denominator(f.slopes().values());
    let dq = Q::from_integer(d);
    let fd = f.scale(&dq);
    let taus = c.boundary_faces();
    let weights: Vec<(ConeId, Q)> = taus
        .par_iter()
        .map(|&tau| -> Result<(ConeId, Q)> {
            let chi = a.is_cp_at(&fd, tau)?.ok_or_else(|| {
                Error::NotCombinatoriallyPrincipal(c.complex.cone(tau).id.clone())
            })?;
            let diff = fd.sub(&chi);
            let w = -c.pairing(&diff, tau)? / &dq;
            Ok((tau, w))
        })
        .collect::<Result<_>>()?;
    let product = TropicalCycle::new(c.complex.clone(), c.dim - 1, weights.into_iter().collect())?;
    if AUDIT.load(Ordering::SeqCst) {
        AUDITED.fetch_add(1, Ordering::SeqCst);
        if let Some(u) = product.is_balanced(a)?.witness {
            return Err(Error::UnbalancedProduct(c.complex.cone(u.tau).id.clone()));
        }
    }
    Ok(product)
}
