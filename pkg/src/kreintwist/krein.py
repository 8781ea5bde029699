"""Krein products, twisted adjoints, K-unitaries and the twisted calculus.

The inner twist is always conjugation by a Hermitian unitary involution K,
so the twisted adjoint is ``O -> K O^dagger K`` and the indefinite pairing
``<psi, phi>_K = <psi, K phi>``.  Orthochronous spin-group elements are
sampled as products of an even number of unit vectors with an even number
of negative-norm factors; they are the canonical nontrivial K-unitaries.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .clifford import CliffordRep, metric_pairing, represent
from .linalg import (
    AntilinearOp,
    Residual,
    ShapeError,
    adjoint,
    as_cmat,
    residual_norm,
)

__all__ = [
    "NotKUnitaryError",
    "RandomDegenerateError",
    "KreinSpace",
    "TwistedTripleData",
    "SpinElement",
    "k_product",
    "k_adjoint",
    "is_k_unitary",
    "sample_spin_plus",
    "twisted_commutator",
    "twisted_one_form",
    "twisted_first_order_residual",
    "fluctuate",
    "gauge_transform",
    "canonical_twisted_triple",
]


class NotKUnitaryError(ValueError):
    """Operator fails U (K U^dagger K) = 1 within tolerance."""


class RandomDegenerateError(RuntimeError):
    """Sampler could not draw a well-conditioned unit vector."""


@dataclass(frozen=True)
class KreinSpace:
    """Finite-dimensional space with indefinite pairing <.,K.>."""

    dim: int
    K: np.ndarray

    def __post_init__(self):
        k = as_cmat(self.K)
        if k.shape != (self.dim, self.dim):
            raise ShapeError("K must be dim x dim")
        eye = np.eye(self.dim)
        if residual_norm(k, adjoint(k)) > 1e-12 or residual_norm(k @ k, eye) > 1e-12:
            raise ValueError("K must be a Hermitian unitary involution")
        object.__setattr__(self, "K", k)


def k_product(space: KreinSpace, psi, phi) -> complex:
    """<psi, phi>_K = <psi, K phi>, conjugate-linear in the first slot."""
    psi = np.asarray(psi, dtype=np.complex128).ravel()
    phi = np.asarray(phi, dtype=np.complex128).ravel()
    if psi.shape[0] != space.dim or phi.shape[0] != space.dim:
        raise ShapeError("vector length must equal the space dimension")
    return complex(np.vdot(psi, space.K @ phi))


def k_adjoint(space: KreinSpace, o) -> np.ndarray:
    """Twisted adjoint O^+ = K O^dagger K."""
    o = as_cmat(o)
    if o.shape != (space.dim, space.dim):
        raise ShapeError("operator must be dim x dim")
    return space.K @ adjoint(o) @ space.K


def is_k_unitary(space: KreinSpace, u, tol: float = 1e-10) -> tuple[bool, Residual]:
    """Check U O^+ = O^+ U = 1 for O^+ the twisted adjoint."""
    u = as_cmat(u)
    plus = k_adjoint(space, u)
    eye = np.eye(space.dim)
    r = max(residual_norm(u @ plus, eye), residual_norm(plus @ u, eye))
    return r <= tol, Residual(r, tol)


@dataclass(frozen=True)
class SpinElement:
    """Even product of unit vectors with an even number of negative norms."""

    factors: tuple  # coefficient vectors, each with g(v,v) = +-1
    matrix: np.ndarray


def _draw_unit_vector(
    rep: CliffordRep,
    rng: np.random.Generator,
    want_negative: Optional[bool] = None,
    attempts: int = 100,
) -> tuple[np.ndarray, int]:
    """Draw v with g(v,v) = +-1 after scaling, rejecting degenerate draws.

    Besides the hard |g(v,v)| < 1e-8 degeneracy bound, draws are rejected
    when |v|^2 > 3 |g(v,v)| so normalized boost factors stay mild and
    residuals of six-factor products remain far below 1e-11.
    """
    for _ in range(attempts):
        v = rng.normal(size=rep.n_gen)
        q = float(np.real(metric_pairing(rep, v, v)))
        if abs(q) < 1e-8:
            continue
        if want_negative is not None and (q < 0) != want_negative:
            continue
        if float(v @ v) > 3.0 * abs(q):
            continue
        return v / np.sqrt(abs(q)), (1 if q > 0 else -1)
    raise RandomDegenerateError(
        "no admissible unit vector found in 100 attempts"
    )


def sample_spin_plus(
    rep: CliffordRep,
    count: int,
    seed: int,
    max_pairs: int = 3,
) -> list[SpinElement]:
    """Deterministic sample of orthochronous spin-group elements.

    Each element is a product of 2k unit vectors (k cycling through
    1..max_pairs) with an even number of negative-norm factors, so that
    x^-1 = K x^dagger K holds.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    rng = np.random.default_rng(seed)
    has_negative = rep.sig.q > 0
    out = []
    for j in range(count):
        k = (j % max_pairs) + 1
        factors = []
        norms = []
        for _ in range(2 * k):
            v, s = _draw_unit_vector(rep, rng)
            factors.append(v)
            norms.append(s)
        if sum(1 for s in norms if s < 0) % 2 == 1:
            # redraw the last factor with the parity-fixing norm sign
            want_neg = norms[-1] > 0
            if want_neg and not has_negative:
                raise RandomDegenerateError("cannot fix norm parity in this signature")
            v, s = _draw_unit_vector(rep, rng, want_negative=want_neg)
            factors[-1] = v
            norms[-1] = s
        mat = np.eye(rep.dim, dtype=np.complex128)
        for v in factors:
            mat = mat @ represent(rep, v)
        out.append(SpinElement(factors=tuple(factors), matrix=mat))
    return out


def twisted_commutator(d, a, K) -> np.ndarray:
    """[D, a]_rho = D a - (K a K) D."""
    d = as_cmat(d)
    a = as_cmat(a)
    K = as_cmat(K)
    return d @ a - K @ a @ K @ d


def twisted_one_form(pairs: Sequence[tuple], d, K) -> np.ndarray:
    """sum_i a_i [D, b_i]_rho (zero matrix for an empty list)."""
    d = as_cmat(d)
    out = np.zeros_like(d)
    for a, b in pairs:
        out = out + as_cmat(a) @ twisted_commutator(d, b, K)
    return out


def opposite_action(b, j: AntilinearOp) -> np.ndarray:
    """b^o = J b^dagger J^-1."""
    return j.sandwich(adjoint(as_cmat(b)))


def twisted_first_order_residual(
    d, a, b, j: AntilinearOp, K, tol: float = 1e-12
) -> Residual:
    """Norm of [[D, a]_rho, b^o]_{rho^o}.

    The opposite twist acts by rho^o(b^o) = (rho^-1(b))^o = J (K b K)^dagger J^-1.
    """
    K = as_cmat(K)
    x = twisted_commutator(d, a, K)
    b_op = opposite_action(b, j)
    rho_b_op = j.sandwich(adjoint(K @ as_cmat(b) @ K))
    return Residual(residual_norm(x @ b_op - rho_b_op @ x), tol)


def fluctuate(d, a_rho, j: AntilinearOp, eps1: int) -> np.ndarray:
    """Twisted fluctuation D + A_rho + eps1 J A_rho J^-1."""
    d = as_cmat(d)
    a_rho = as_cmat(a_rho)
    return d + a_rho + eps1 * j.sandwich(a_rho)


def gauge_transform(
    d,
    u_k,
    j: AntilinearOp,
    K,
    tol: float = 1e-9,
    selfadjoint_tol: float = 1e-11,
) -> np.ndarray:
    """Ad(u_K) D Ad(u_K)^dagger with Ad(u_K) = u_K (J u_K J^-1).

    Requires u_K to be K-unitary; the output is checked to stay
    self-adjoint, which is the point of fluctuating with K-unitaries.
    """
    d = as_cmat(d)
    u_k = as_cmat(u_k)
    K = as_cmat(K)
    space = KreinSpace(d.shape[0], K)
    ok, res = is_k_unitary(space, u_k, tol)
    if not ok:
        raise NotKUnitaryError(f"gauge element is not K-unitary ({res.value:.3e})")
    ad = u_k @ j.sandwich(u_k)
    out = ad @ d @ adjoint(ad)
    if residual_norm(out, adjoint(out)) > selfadjoint_tol:
        raise ValueError("gauge transform failed to preserve self-adjointness")
    return out


@dataclass(frozen=True)
class TwistedTripleData:
    """Finite-dimensional twisted triple data (A, H, D, J, Gamma, K).

    The algebra is extensional: a generator list closed under adjoints.
    D is self-adjoint and all real-structure signs are unit signs, which
    is validated at construction.
    """

    algebra_gens: tuple
    D: np.ndarray
    J: AntilinearOp
    Gamma: np.ndarray
    K: np.ndarray

    def __post_init__(self):
        from .linalg import sign_of_pair  # local to avoid import clutter

        d = as_cmat(self.D)
        if residual_norm(d, adjoint(d)) > 1e-12:
            raise ValueError("twisted Dirac matrix must be self-adjoint")
        object.__setattr__(self, "D", d)
        object.__setattr__(self, "Gamma", as_cmat(self.Gamma))
        object.__setattr__(self, "K", as_cmat(self.K))
        object.__setattr__(self, "algebra_gens", tuple(as_cmat(a) for a in self.algebra_gens))
        # real-structure relations must carry definite unit signs
        sign_of_pair(self.J.square(), np.eye(d.shape[0]))
        sign_of_pair(self.J.mat @ np.conj(d), d @ self.J.mat)
        sign_of_pair(self.J.mat @ np.conj(self.Gamma), self.Gamma @ self.J.mat)

    @property
    def dim(self) -> int:
        return self.D.shape[0]

    def space(self) -> KreinSpace:
        return KreinSpace(self.dim, self.K)


def canonical_twisted_triple(rep, ops, d) -> TwistedTripleData:
    """Wrap a representation-level Dirac matrix into twisted triple data.

    The algebra generators model the commutative symbol algebra (scalars),
    which is where the twist acts trivially.
    """
    eye = np.eye(rep.dim, dtype=np.complex128)
    gens = (eye, (0.3 - 0.2j) * eye)
    return TwistedTripleData(
        algebra_gens=gens,
        D=d,
        J=ops.J,
        Gamma=ops.Gamma,
        K=ops.K,
    )
