"""The involutive operator morphism between twisted and Krein-side triples.

The morphism sends D to D^K = K D, keeps the algebra, J and Gamma fixed,
and replaces the Hilbert pairing by the K-product.  Everything checked
here is an exact matrix identity; residuals only measure roundoff.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .clifford import CliffordRep, StructuralOps, metric_pairing, reflect, represent
from .krein import (
    KreinSpace,
    NotKUnitaryError,
    TwistedTripleData,
    is_k_unitary,
    k_adjoint,
    opposite_action,
    twisted_commutator,
)
from .linalg import (
    AntilinearOp,
    Residual,
    adjoint,
    as_cmat,
    commutator,
    op_norm,
    residual_norm,
)

__all__ = [
    "PseudoTripleData",
    "MorphismPair",
    "apply_k_morphism",
    "invert_k_morphism",
    "selfadjoint_equivalence_check",
    "commutator_correspondence_check",
    "first_order_correspondence_check",
    "fluctuation_correspondence_check",
    "twisted_clifford_check",
    "generalized_clifford_check",
    "trace_metric_morph_check",
    "symbol_norm_probe",
]


@dataclass(frozen=True)
class PseudoTripleData:
    """Krein-side triple data with a K-self-adjoint Dirac matrix."""

    algebra_gens: tuple
    Dk: np.ndarray
    space: KreinSpace
    J: AntilinearOp
    Gamma: np.ndarray

    def __post_init__(self):
        dk = as_cmat(self.Dk)
        if residual_norm(dk, k_adjoint(self.space, dk)) > 1e-11:
            raise ValueError("Dirac matrix must be K-self-adjoint")
        object.__setattr__(self, "Dk", dk)


@dataclass(frozen=True)
class MorphismPair:
    twisted: TwistedTripleData
    pseudo: PseudoTripleData

    def __post_init__(self):
        if residual_norm(self.pseudo.Dk, self.twisted.K @ self.twisted.D) > 1e-13:
            raise ValueError("pair is not related by Dk = K D")


def apply_k_morphism(t: TwistedTripleData) -> PseudoTripleData:
    """D -> K D; algebra, J and Gamma carried over unchanged."""
    return PseudoTripleData(
        algebra_gens=t.algebra_gens,
        Dk=t.K @ t.D,
        space=t.space(),
        J=t.J,
        Gamma=t.Gamma,
    )


def invert_k_morphism(p: PseudoTripleData) -> TwistedTripleData:
    """Inverse direction D = K D^K (the morphism is an involution)."""
    return TwistedTripleData(
        algebra_gens=p.algebra_gens,
        D=p.space.K @ p.Dk,
        J=p.J,
        Gamma=p.Gamma,
        K=p.space.K,
    )


def selfadjoint_equivalence_check(pair: MorphismPair, tol: float = 1e-12) -> tuple[Residual, float]:
    """Self-adjointness of D and K-self-adjointness of D^K agree.

    Returns the max of the two residuals plus the gap between them; the
    gap vanishes because K is unitary.
    """
    r1 = residual_norm(pair.twisted.D, adjoint(pair.twisted.D))
    dk = pair.pseudo.Dk
    r2 = residual_norm(dk, k_adjoint(pair.pseudo.space, dk))
    return Residual(max(r1, r2), tol), abs(r1 - r2)


def commutator_correspondence_check(pair: MorphismPair, a, tol: float = 1e-12) -> Residual:
    """K [D, a]_rho = [D^K, a]."""
    a = as_cmat(a)
    lhs = pair.twisted.K @ twisted_commutator(pair.twisted.D, a, pair.twisted.K)
    rhs = commutator(pair.pseudo.Dk, a)
    return Residual(residual_norm(lhs, rhs), tol)


def first_order_correspondence_check(pair: MorphismPair, a, b, tol: float = 1e-12) -> Residual:
    """[[D, a]_rho, b^o]_{rho^o} = K [[D^K, a], b^o] for any a, b."""
    t = pair.twisted
    K = t.K
    x = twisted_commutator(t.D, as_cmat(a), K)
    b_op = opposite_action(b, t.J)
    rho_b_op = t.J.sandwich(adjoint(K @ as_cmat(b) @ K))
    lhs = x @ b_op - rho_b_op @ x
    rhs = K @ commutator(commutator(pair.pseudo.Dk, as_cmat(a)), b_op)
    return Residual(residual_norm(lhs, rhs), tol)


def fluctuation_correspondence_check(pair: MorphismPair, u_k, tol: float = 1e-10) -> Residual:
    """U_K D^K U_K^+ = K (V_K D V_K^dagger) with V_K = rho(U_K).

    Also folds in the identity rho(U_K) = rho(u_K) J rho(u_K) J^-1, so both
    constructions of the twisted-side conjugator are compared.
    """
    t = pair.twisted
    K = t.K
    space = pair.pseudo.space
    ok, res = is_k_unitary(space, u_k, 1e-9)
    if not ok:
        raise NotKUnitaryError(f"fluctuation element is not K-unitary ({res.value:.3e})")
    u_k = as_cmat(u_k)
    big_u = u_k @ t.J.sandwich(u_k)
    v_k = K @ big_u @ K
    lhs = big_u @ pair.pseudo.Dk @ k_adjoint(space, big_u)
    rhs = K @ (v_k @ t.D @ adjoint(v_k))
    r = residual_norm(lhs, rhs)
    rho_u = K @ u_k @ K
    r = max(r, residual_norm(v_k, rho_u @ t.J.sandwich(rho_u)))
    return Residual(r, tol)


def twisted_clifford_check(
    rep: CliffordRep, ops: StructuralOps, u, v, tol: float = 1e-11
) -> Residual:
    """rho(ct(u) ct(v)) + ct(v) ct(u) = 2 g(u, rv) with ct = K c.

    This is the twisted Clifford relation of the image representation.
    """
    cu = ops.K @ represent(rep, u)
    cv = ops.K @ represent(rep, v)
    lhs = ops.K @ (cu @ cv) @ ops.K + cv @ cu
    target = 2.0 * metric_pairing(rep, u, reflect(rep, v)) * np.eye(rep.dim)
    return Residual(residual_norm(lhs, target), tol)


def generalized_clifford_check(rep: CliffordRep, ops: StructuralOps, tol: float = 1e-11) -> Residual:
    """gt^a gt^b + s_ab gt^b gt^a = 2 delta^ab with s_ab = g_a g_b, gt = K gamma."""
    eye = np.eye(rep.dim)
    worst = 0.0
    gt = [ops.K @ g for g in rep.gammas]
    for a in range(rep.n_gen):
        for b in range(rep.n_gen):
            s_ab = rep.signs[a] * rep.signs[b]
            target = 2.0 * eye if a == b else np.zeros_like(eye)
            worst = max(worst, residual_norm(gt[a] @ gt[b] + s_ab * gt[b] @ gt[a], target))
    return Residual(worst, tol)


def trace_metric_morph_check(
    rep: CliffordRep,
    ops: StructuralOps,
    pairs: int = 100,
    seed: int = 11,
    tol: float = 1e-11,
) -> Residual:
    """Normalized traces reproduce g on the plain side, g(r., .) on the twisted one."""
    rng = np.random.default_rng(seed)
    dim = rep.dim
    worst = 0.0
    for _ in range(pairs):
        u = rng.normal(size=rep.n_gen)
        v = rng.normal(size=rep.n_gen)
        plain = np.trace(represent(rep, u) @ represent(rep, v)) / dim
        worst = max(worst, abs(plain - metric_pairing(rep, u, v)))
        cu = ops.K @ represent(rep, u)
        cv = ops.K @ represent(rep, v)
        twisted = np.trace(cu @ cv) / dim
        worst = max(worst, abs(twisted - metric_pairing(rep, reflect(rep, u), v)))
    return Residual(worst, tol)


def symbol_norm_probe(rep: CliffordRep, ops: StructuralOps, k) -> dict:
    """Compare |K c(k)| with the reflected-metric length of k.

    Both values are reported; `match` asserts equality only when it is an
    identity (k supported in a single definiteness block).  For mixed
    directions the operator c(rk) c(k) is not scalar and the probe records
    the discrepancy instead of asserting.
    """
    k = np.asarray(k, dtype=float).ravel()
    norm = op_norm(ops.K @ represent(rep, k))
    g_r = float(np.real(metric_pairing(rep, k, reflect(rep, k))))
    g_r_norm = float(np.sqrt(max(g_r, 0.0)))
    plus_weight = float(np.sum(np.abs(k[rep.signs > 0]) ** 2))
    minus_weight = float(np.sum(np.abs(k[rep.signs < 0]) ** 2))
    pure_block = min(plus_weight, minus_weight) < 1e-14
    return {
        "norm": norm,
        "gR_norm": g_r_norm,
        "match": abs(norm - g_r_norm) <= 1e-10,
        "pure_block": pure_block,
    }
