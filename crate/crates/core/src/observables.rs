//! Observables as spectral families of orthogonal projectors.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::numerics::{eigh, orthonormalize, CMatrix, SubspaceBasis, Tolerance};
use crate::scalar::Real;

/// One spectral component: eigenvalue, projector and an orthonormal basis
/// of its eigenspace.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome<T> {
    value: T,
    projector: CMatrix<T>,
    basis: SubspaceBasis<T>,
}

impl<T: Real> Outcome<T> {
    pub fn value(&self) -> T {
        self.value
    }

    pub fn projector(&self) -> &CMatrix<T> {
        &self.projector
    }

    pub fn eigenspace(&self) -> &SubspaceBasis<T> {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.rank()
    }
}

/// Hermitian observable `Â = Σ α E(α)` with outcomes in ascending order.
#[derive(Debug, Clone, PartialEq)]
pub struct Observable<T> {
    dim: usize,
    outcomes: Vec<Outcome<T>>,
}

impl<T: Real> Observable<T> {
    /// Spectral decomposition of a Hermitian matrix; numerically equal
    /// eigenvalues are merged into one outcome.
    pub fn from_matrix(h: &CMatrix<T>, tol: &Tolerance<T>) -> Result<Self> {
        let e = eigh(h, tol)?;
        let dim = h.rows();
        let groups = e
            .clusters()
            .into_iter()
            .map(|(value, members)| {
                let vectors: Vec<_> = members.iter().map(|&k| e.vector(k)).collect();
                (value, SubspaceBasis::span(dim, &vectors, tol))
            })
            .map(|(v, b)| b.map(|b| (v, b)))
            .collect::<Result<Vec<_>>>()?;
        let obs = Self::from_bases(dim, groups, tol)?;
        let deviation = (&obs.matrix() - h).max_abs();
        if deviation > tol.threshold(h.max_abs()) * T::lit(10.0) {
            return Err(Error::InvalidObservable(format!(
                "spectral reconstruction deviates by {deviation}"
            )));
        }
        Ok(obs)
    }

    /// Builds an observable from eigenvalues and generating vectors of the
    /// matching eigenspaces. Vectors inside a group are orthonormalized;
    /// groups must be mutually orthogonal and jointly span the space.
    pub fn from_eigenspaces(outcomes: &[(T, Vec<Vec<Complex<T>>>)], tol: &Tolerance<T>) -> Result<Self> {
        let dim = outcomes
            .iter()
            .flat_map(|(_, vs)| vs.first())
            .map(Vec::len)
            .next()
            .ok_or(Error::NoOutcomes)?;
        let mut groups = Vec::with_capacity(outcomes.len());
        for (value, vectors) in outcomes {
            if !value.is_finite() {
                return Err(Error::NonFinite);
            }
            let basis = SubspaceBasis::span(dim, vectors, tol)?;
            if basis.is_empty() {
                return Err(Error::EmptyEigenspace(f(*value)));
            }
            groups.push((*value, basis));
        }
        Self::from_bases(dim, groups, tol)
    }

    /// Observable `Σ α P_α` from already orthonormal eigenspace bases.
    pub fn from_bases(dim: usize, mut groups: Vec<(T, SubspaceBasis<T>)>, tol: &Tolerance<T>) -> Result<Self> {
        if groups.is_empty() {
            return Err(Error::NoOutcomes);
        }
        groups.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        for w in groups.windows(2) {
            if values_match(w[0].0, w[1].0) {
                return Err(Error::DuplicateOutcome(f(w[0].0)));
            }
        }
        for (_, b) in &groups {
            b.check_dims_with(dim)?;
        }
        for i in 0..groups.len() {
            for j in i + 1..groups.len() {
                let overlap = groups[i]
                    .1
                    .vectors()
                    .iter()
                    .flat_map(|u| {
                        groups[j]
                            .1
                            .vectors()
                            .iter()
                            .map(move |v| crate::numerics::vector::inner(u, v).norm())
                    })
                    .fold(T::zero(), T::max);
                if overlap > tol.unit() {
                    return Err(Error::OverlappingEigenspaces {
                        first: f(groups[i].0),
                        second: f(groups[j].0),
                    });
                }
            }
        }
        let rank: usize = groups.iter().map(|(_, b)| b.rank()).sum();
        if rank != dim {
            return Err(Error::IncompleteSpan { rank, dim });
        }
        let outcomes = groups
            .into_iter()
            .map(|(value, basis)| Outcome {
                value,
                projector: basis.projector(),
                basis,
            })
            .collect();
        let obs = Self { dim, outcomes };
        obs.check_invariants(tol)?;
        Ok(obs)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn outcomes(&self) -> &[Outcome<T>] {
        &self.outcomes
    }

    pub fn values(&self) -> Vec<T> {
        self.outcomes.iter().map(|o| o.value).collect()
    }

    /// Position of the outcome matching `value`.
    pub fn index_of(&self, value: T) -> Option<usize> {
        self.outcomes.iter().position(|o| values_match(o.value, value))
    }

    pub fn outcome(&self, value: T) -> Result<&Outcome<T>> {
        self.index_of(value)
            .map(|i| &self.outcomes[i])
            .ok_or(Error::UnknownOutcome(f(value)))
    }

    pub fn projector(&self, value: T) -> Result<&CMatrix<T>> {
        Ok(&self.outcome(value)?.projector)
    }

    pub fn eigenspace(&self, value: T) -> Result<&SubspaceBasis<T>> {
        Ok(&self.outcome(value)?.basis)
    }

    /// `Σ α E(α)`
    pub fn matrix(&self) -> CMatrix<T> {
        let mut m = CMatrix::zeros(self.dim, self.dim);
        for o in &self.outcomes {
            m = &m + &o.projector.scaled_real(o.value);
        }
        m
    }

    /// Outcomes are exactly `{-1, +1}`.
    pub fn is_dichotomous(&self) -> bool {
        self.outcomes.len() == 2
            && values_match(self.outcomes[0].value, -T::one())
            && values_match(self.outcomes[1].value, T::one())
    }

    pub fn ensure_dichotomous(&self) -> Result<()> {
        if self.is_dichotomous() {
            Ok(())
        } else {
            Err(Error::NotDichotomous)
        }
    }

    pub fn ensure_dim(&self, dim: usize) -> Result<()> {
        if self.dim != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: self.dim,
            });
        }
        Ok(())
    }

    /// Verifies Hermiticity, idempotence, mutual orthogonality and the
    /// resolution of the identity, entrywise within `tol`.
    pub fn check_invariants(&self, tol: &Tolerance<T>) -> Result<()> {
        let bound = tol.unit();
        let mut sum = CMatrix::zeros(self.dim, self.dim);
        for (i, o) in self.outcomes.iter().enumerate() {
            let p = &o.projector;
            if p.hermitian_deviation() > bound {
                return Err(Error::InvalidObservable(format!("E({}) is not Hermitian", o.value)));
            }
            if (&p.matmul(p) - p).max_abs() > bound {
                return Err(Error::InvalidObservable(format!("E({}) is not idempotent", o.value)));
            }
            for q in &self.outcomes[i + 1..] {
                if p.matmul(&q.projector).max_abs() > bound {
                    return Err(Error::InvalidObservable(format!("E({}) E({}) ≠ 0", o.value, q.value)));
                }
            }
            sum = &sum + p;
        }
        if (&sum - &CMatrix::identity(self.dim)).max_abs() > bound {
            return Err(Error::InvalidObservable("Σ E(α) ≠ I".into()));
        }
        Ok(())
    }

    /// `‖ÂB̂ - B̂Â‖_max` within tolerance.
    pub fn commutes(&self, other: &Self, tol: &Tolerance<T>) -> Result<bool> {
        Ok(self.commutator_norm(other)? <= self.commutator_threshold(other, tol))
    }

    pub fn commutator_norm(&self, other: &Self) -> Result<T> {
        other.ensure_dim(self.dim)?;
        Ok(self.matrix().commutator(&other.matrix()).max_abs())
    }

    fn commutator_threshold(&self, other: &Self, tol: &Tolerance<T>) -> T {
        let scale = self.matrix().max_abs() * other.matrix().max_abs();
        tol.threshold(scale)
    }

    pub fn ensure_commutes(&self, other: &Self, tol: &Tolerance<T>) -> Result<()> {
        let dev = self.commutator_norm(other)?;
        if dev > self.commutator_threshold(other, tol) {
            return Err(Error::NotCommuting { deviation: f(dev) });
        }
        Ok(())
    }

    /// Places this observable at `slot` of a tensor product with local
    /// dimensions `dims`: `E(α) ↦ I ⊗ … ⊗ E(α) ⊗ … ⊗ I`.
    pub fn lift_local(&self, slot: usize, dims: &[usize]) -> Result<Self> {
        if slot >= dims.len() {
            return Err(Error::SlotOutOfRange {
                slot,
                factors: dims.len(),
            });
        }
        self.ensure_dim(dims[slot])?;
        let left: usize = dims[..slot].iter().product();
        let right: usize = dims[slot + 1..].iter().product();
        let dim = left * self.dim * right;
        let il = CMatrix::<T>::identity(left);
        let ir = CMatrix::<T>::identity(right);
        let outcomes = self
            .outcomes
            .iter()
            .map(|o| {
                let projector = il.kron(&o.projector).kron(&ir);
                let mut vectors = Vec::with_capacity(left * o.rank() * right);
                for l in 0..left {
                    for b in o.basis.vectors() {
                        for r in 0..right {
                            let mut v = vec![Complex::new(T::zero(), T::zero()); dim];
                            for (k, c) in b.iter().enumerate() {
                                v[(l * self.dim + k) * right + r] = *c;
                            }
                            vectors.push(v);
                        }
                    }
                }
                Outcome {
                    value: o.value,
                    projector,
                    basis: SubspaceBasis::from_parts_unchecked(dim, vectors),
                }
            })
            .collect();
        Ok(Self { dim, outcomes })
    }

    /// `Â_U = U Â U^†`; projectors become `U E(α) U^†`.
    pub fn conjugate(&self, u: &CMatrix<T>, tol: &Tolerance<T>) -> Result<Self> {
        u.ensure_unitary(tol)?;
        if u.rows() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: u.rows(),
            });
        }
        let ud = u.adjoint();
        let outcomes = self
            .outcomes
            .iter()
            .map(|o| {
                let basis = o.basis.transformed(u);
                Outcome {
                    value: o.value,
                    projector: u.matmul(&o.projector).matmul(&ud),
                    basis: SubspaceBasis::from_parts_unchecked(
                        self.dim,
                        orthonormalize(self.dim, basis.vectors(), tol),
                    ),
                }
            })
            .collect();
        Ok(Self {
            dim: self.dim,
            outcomes,
        })
    }
}

/// Two eigenvalues denote the same outcome.
pub fn values_match<T: Real>(a: T, b: T) -> bool {
    (a - b).abs() <= T::cluster_rel() * T::one().max(a.abs()).max(b.abs())
}

fn f<T: Real>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// A value pair `(α, β)`: `A` measured first, then `B`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValuePair<T> {
    pub alpha: T,
    pub beta: T,
}

impl<T> ValuePair<T> {
    pub fn new(alpha: T, beta: T) -> Self {
        Self { alpha, beta }
    }
}

/// Set Γ of value pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaSet<T> {
    pairs: Vec<ValuePair<T>>,
}

impl<T: Real> GammaSet<T> {
    pub fn new(pairs: Vec<ValuePair<T>>) -> Result<Self> {
        for (i, p) in pairs.iter().enumerate() {
            if pairs[..i]
                .iter()
                .any(|q| values_match(p.alpha, q.alpha) && values_match(p.beta, q.beta))
            {
                return Err(Error::DuplicatePair(f(p.alpha), f(p.beta)));
            }
        }
        Ok(Self { pairs })
    }

    pub fn from_tuples(pairs: &[(T, T)]) -> Result<Self> {
        Self::new(pairs.iter().map(|&(a, b)| ValuePair::new(a, b)).collect())
    }

    pub fn pairs(&self) -> &[ValuePair<T>] {
        &self.pairs
    }

    /// Every outcome of `a` and of `b` appears in exactly one pair.
    pub fn is_complete(&self, a: &Observable<T>, b: &Observable<T>) -> bool {
        let once = |obs: &Observable<T>, pick: fn(&ValuePair<T>) -> T| {
            obs.values()
                .iter()
                .all(|&v| self.pairs.iter().filter(|p| values_match(pick(p), v)).count() == 1)
                && self.pairs.iter().all(|p| obs.index_of(pick(p)).is_some())
        };
        once(a, |p| p.alpha) && once(b, |p| p.beta)
    }

    /// Checks that every pair refers to existing outcomes.
    pub fn validate(&self, a: &Observable<T>, b: &Observable<T>) -> Result<()> {
        for p in &self.pairs {
            a.outcome(p.alpha)?;
            b.outcome(p.beta)?;
        }
        Ok(())
    }
}
