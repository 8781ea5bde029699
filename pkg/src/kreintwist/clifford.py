"""Gamma-matrix representations for arbitrary even signatures.

Conventions used throughout the package:

* Basis order: the first ``p`` directions square to +1, the remaining ``q``
  to -1; ``signs[a]`` is that metric sign ``g_a``.
* Euclidean building blocks follow the sigma-string construction
  ``hat_gamma[2k]   = s3^(k) (x) s1 (x) 1^(m-k-1)`` and
  ``hat_gamma[2k+1] = s3^(k) (x) s2 (x) 1^(m-k-1)`` (0-based), which are
  Hermitian, unitary and pairwise anticommuting.
* Signature gammas: ``gamma_a = hat_gamma_a`` on plus directions and
  ``i * hat_gamma_a`` on minus ones, so every gamma is unitary and
  ``gamma_a^dagger = g_a gamma_a``.  Conjugation by the twist operator K
  is then forced to act as the parity ``gamma_a -> g_a gamma_a``.
* K is the phase-normalized product of the plus gammas when p is odd,
  of the minus gammas otherwise (the parity of the product length decides
  which one conjugates correctly); Gamma is the normalized product of all
  gammas; Chat solves ``Chat hat_g Chat^-1 = -conj(hat_g)`` and is taken
  from the sigma-string closed form (imaginary-type gammas for odd m,
  real-type for even m), then verified numerically.
* Phase normalization: multiply by i^k with the smallest k in {0,..,3}
  making the product Hermitian, then by +-1 so the first nonzero diagonal
  entry scanned from (0,0) has nonnegative real part.  Hermitian + unitary
  forces the square to be the identity.

All sign parameters (eps, eps', eps_0..eps_3 and their Krein-side
counterparts) are measured from the constructed operators, never assumed.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .linalg import (
    AntilinearOp,
    Residual,
    ShapeError,
    adjoint,
    anticommutator,
    as_cmat,
    residual_norm,
    sign_of_pair,
)

__all__ = [
    "Signature",
    "CliffordRep",
    "StructuralOps",
    "SignTable",
    "ConstructionError",
    "SIGMA1",
    "SIGMA2",
    "SIGMA3",
    "build_gammas",
    "represent",
    "gamma_product",
    "phase_normalize",
    "build_structural",
    "verify_structural",
    "measure_sign",
    "antilinear_sign",
    "sign_table",
    "canonical_dirac_pair",
    "all_signatures",
]

SIGMA1 = np.array([[0, 1], [1, 0]], dtype=np.complex128)
SIGMA2 = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
SIGMA3 = np.array([[1, 0], [0, -1]], dtype=np.complex128)

BUILD_TOL = 1e-12


class ConstructionError(RuntimeError):
    """An operator construction failed its defining relation."""


@dataclass(frozen=True)
class Signature:
    """Metric signature (p pluses, q minuses), total dimension even."""

    p: int
    q: int

    def __post_init__(self):
        if self.p < 0 or self.q < 0:
            raise ValueError("signature counts must be nonnegative")
        n = self.p + self.q
        if n < 2 or n % 2 != 0:
            raise ValueError(
                f"only even total dimensions >= 2 are supported, got {n}"
            )

    @property
    def dim(self) -> int:
        return self.p + self.q

    @property
    def m(self) -> int:
        return self.dim // 2

    @property
    def signs(self) -> np.ndarray:
        return np.array([1.0] * self.p + [-1.0] * self.q)

    def __str__(self) -> str:
        return f"({self.p},{self.q})"


def all_signatures(dims: Sequence[int] = (2, 4, 6)) -> list[Signature]:
    """Every signature with total dimension in ``dims``."""
    out = []
    for n in dims:
        for p in range(n, -1, -1):
            out.append(Signature(p, n - p))
    return out


def _euclidean_gammas(m: int) -> list[np.ndarray]:
    """2m Hermitian unitary anticommuting matrices of size 2^m (sigma strings)."""
    gammas = []
    for k in range(m):
        for sig in (SIGMA1, SIGMA2):
            factors = [SIGMA3] * k + [sig] + [np.eye(2, dtype=np.complex128)] * (m - k - 1)
            g = factors[0]
            for f in factors[1:]:
                g = np.kron(g, f)
            gammas.append(g)
    return gammas


@dataclass(frozen=True)
class CliffordRep:
    """Irreducible representation of the even Clifford algebra for ``sig``."""

    sig: Signature
    m: int
    gammas: tuple
    signs: np.ndarray
    hat_gammas: tuple  # Euclidean (Wick-rotated) companions, all Hermitian

    @property
    def dim(self) -> int:
        return 2 ** self.m

    @property
    def n_gen(self) -> int:
        return 2 * self.m


def build_gammas(sig: Signature) -> CliffordRep:
    """Construct 2m unitary gammas with {g_a, g_b} = 2 g_a delta_ab.

    Plus directions reuse the Euclidean sigma strings; minus directions are
    their i-multiples, which makes gamma_a^dagger = g_a gamma_a automatic.
    """
    hats = _euclidean_gammas(sig.m)
    signs = sig.signs
    gammas = [h if s > 0 else 1j * h for h, s in zip(hats, signs)]
    rep = CliffordRep(
        sig=sig,
        m=sig.m,
        gammas=tuple(gammas),
        signs=signs,
        hat_gammas=tuple(hats),
    )
    _check_clifford_relations(rep)
    return rep


def _check_clifford_relations(rep: CliffordRep, tol: float = BUILD_TOL) -> None:
    eye = np.eye(rep.dim)
    worst = 0.0
    for a, b in itertools.product(range(rep.n_gen), repeat=2):
        target = 2.0 * rep.signs[a] * eye if a == b else np.zeros_like(eye)
        worst = max(worst, residual_norm(anticommutator(rep.gammas[a], rep.gammas[b]), target))
    for g in rep.gammas:
        worst = max(worst, residual_norm(g @ adjoint(g), eye))
    if worst > tol:
        raise ConstructionError(f"Clifford relations violated, residual {worst:.3e}")


def represent(rep: CliffordRep, v) -> np.ndarray:
    """c(v) = sum_a v^a gamma_a, linear in the coefficient vector."""
    v = np.asarray(v, dtype=np.complex128).ravel()
    if v.shape[0] != rep.n_gen:
        raise ShapeError(f"coefficient vector must have length {rep.n_gen}, got {v.shape[0]}")
    out = np.zeros((rep.dim, rep.dim), dtype=np.complex128)
    for coeff, g in zip(v, rep.gammas):
        out += coeff * g
    return out


def metric_pairing(rep: CliffordRep, u, v) -> complex:
    """g(u, v) = sum_a g_a u^a v^a (bilinear, orthonormal basis)."""
    u = np.asarray(u, dtype=np.complex128).ravel()
    v = np.asarray(v, dtype=np.complex128).ravel()
    return complex(np.sum(rep.signs * u * v))


def reflect(rep: CliffordRep, v) -> np.ndarray:
    """Apply the spacelike reflection r (flip minus-direction components)."""
    v = np.asarray(v, dtype=np.complex128).ravel()
    return rep.signs * v


def gamma_product(rep: CliffordRep, indices: Sequence[int], euclidean: bool = False) -> np.ndarray:
    """Ordered product of gammas (identity for the empty set)."""
    src = rep.hat_gammas if euclidean else rep.gammas
    out = np.eye(rep.dim, dtype=np.complex128)
    for a in indices:
        out = out @ src[a]
    return out


def phase_normalize(p: np.ndarray, tol: float = BUILD_TOL) -> np.ndarray:
    """Multiply by i^k (smallest k) to reach Hermiticity, then fix the sign.

    The sign is chosen so the first diagonal entry with nonvanishing real
    part, scanned from (0,0), is positive.  Raises ConstructionError when no
    phase works (cannot happen for gamma products in even dimension).
    """
    for k in range(4):
        cand = (1j ** k) * p
        if residual_norm(cand, adjoint(cand)) <= tol:
            d = np.real(np.diag(cand))
            for x in d:
                if abs(x) > tol:
                    if x < 0:
                        cand = -cand
                    break
            return cand
    raise ConstructionError("no unit phase makes the product Hermitian")


@dataclass(frozen=True)
class StructuralOps:
    """Implementers of the twist, grading and charge conjugations.

    K conjugates gammas by their metric sign, Gamma flips every gamma,
    Chat is the Euclidean charge conjugation, C = K @ Chat the signature
    one; J and Jhat are the antilinear operators C o cc and Chat o cc.
    """

    K: np.ndarray
    Gamma: np.ndarray
    C: np.ndarray
    Chat: np.ndarray
    J: AntilinearOp
    Jhat: AntilinearOp


def _euclidean_charge_conjugation(rep: CliffordRep) -> np.ndarray:
    """Closed-form Chat with Chat hat_g Chat^-1 = -conj(hat_g).

    For odd m the product of the imaginary-type (sigma2 slot) gammas works,
    for even m the product of the real-type ones; verified before use.
    """
    if rep.m % 2 == 1:
        idx = list(range(1, rep.n_gen, 2))
    else:
        idx = list(range(0, rep.n_gen, 2))
    chat = gamma_product(rep, idx, euclidean=True)
    worst = max(
        residual_norm(chat @ h @ np.linalg.inv(chat), -np.conj(h))
        for h in rep.hat_gammas
    )
    if worst > BUILD_TOL:
        raise ConstructionError(
            f"charge conjugation closed form failed its defining relation ({worst:.3e})"
        )
    return chat


def build_structural(rep: CliffordRep) -> StructuralOps:
    """Build K, Gamma, Chat, C = K Chat and the antilinear J, Jhat."""
    plus = [a for a in range(rep.n_gen) if rep.signs[a] > 0]
    minus = [a for a in range(rep.n_gen) if rep.signs[a] < 0]
    k_indices = plus if len(plus) % 2 == 1 else minus
    K = phase_normalize(gamma_product(rep, k_indices))
    Gamma = phase_normalize(gamma_product(rep, range(rep.n_gen)))
    eye = np.eye(rep.dim)
    for name, op in (("K", K), ("Gamma", Gamma)):
        if residual_norm(op @ op, eye) > BUILD_TOL or residual_norm(op, adjoint(op)) > BUILD_TOL:
            raise ConstructionError(f"{name} is not a Hermitian involution")
    Chat = _euclidean_charge_conjugation(rep)
    C = K @ Chat
    return StructuralOps(
        K=K,
        Gamma=Gamma,
        C=C,
        Chat=Chat,
        J=AntilinearOp(C),
        Jhat=AntilinearOp(Chat),
    )


def verify_structural(rep: CliffordRep, ops: StructuralOps, tol: float = BUILD_TOL) -> dict:
    """Residuals for every defining relation of the structural operators.

    Keys: twist_parity, grading_flip, charge_conjugation, c_equals_k_chat,
    kappa_factorization, automorphism_commutation.
    """
    eye = np.eye(rep.dim)
    k_inv = ops.K  # Hermitian involution
    g_inv = ops.Gamma
    c_inv = np.linalg.inv(ops.C)
    chat_inv = np.linalg.inv(ops.Chat)

    r_twist = max(
        residual_norm(ops.K @ g @ k_inv, rep.signs[a] * g)
        for a, g in enumerate(rep.gammas)
    )
    r_grading = max(
        residual_norm(ops.Gamma @ g @ g_inv, -g) for g in rep.gammas
    )
    r_charge = max(
        residual_norm(ops.C @ g @ c_inv, -np.conj(g)) for g in rep.gammas
    )
    r_ck = residual_norm(ops.C, ops.K @ ops.Chat)

    # kappa = kappahat o rho on generators, including the conjugated branch.
    r_kappa = 0.0
    for g in rep.gammas:
        for x in (g, np.conj(g)):
            lhs = ops.C @ x @ c_inv
            rhs = ops.Chat @ (ops.K @ x @ k_inv) @ chat_inv
            r_kappa = max(r_kappa, residual_norm(lhs, rhs))

    # rho, chi, kappa pairwise commute as automorphisms on generators.
    def rho(x):
        return ops.K @ x @ k_inv

    def chi(x):
        return ops.Gamma @ x @ g_inv

    def kap(x):
        return ops.C @ x @ c_inv

    r_comm = 0.0
    for g in rep.gammas:
        r_comm = max(r_comm, residual_norm(rho(chi(g)), chi(rho(g))))
        r_comm = max(r_comm, residual_norm(rho(kap(g)), kap(rho(g))))
        r_comm = max(r_comm, residual_norm(kap(chi(g)), chi(kap(g))))

    return {
        "twist_parity": Residual(r_twist, tol),
        "grading_flip": Residual(r_grading, tol),
        "charge_conjugation": Residual(r_charge, tol),
        "c_equals_k_chat": Residual(r_ck, tol),
        "kappa_factorization": Residual(r_kappa, tol),
        "automorphism_commutation": Residual(r_comm, tol),
    }


def antilinear_sign(op: np.ndarray, j: AntilinearOp, tol: float = BUILD_TOL) -> int:
    """Measured s with (op o J) = s (J o op) for a linear op and antilinear J."""
    return sign_of_pair(op @ j.mat, j.mat @ np.conj(op), tol)


def measure_sign(x: np.ndarray, y: np.ndarray, tol: float = BUILD_TOL) -> int:
    """Measured s with X Y = s Y X."""
    return sign_of_pair(x @ y, y @ x, tol)


@dataclass(frozen=True)
class SignTable:
    """Measured unit signs of a twisted / Krein-side operator family.

    eps, eps_prime come from K J = eps J K and K Gamma = eps' Gamma K;
    eps0..eps3 are the twisted-side real-structure signs, the K-suffixed
    ones their Krein-side counterparts.  Entries are None when no Dirac
    operator was supplied.
    """

    eps: int
    eps_prime: int
    eps0: int
    eps2: int
    eps0K: int
    eps2K: int
    eps1: Optional[int] = None
    eps3: Optional[int] = None
    eps1K: Optional[int] = None
    eps3K: Optional[int] = None

    def pseudo_row(self) -> tuple:
        return (self.eps0K, self.eps1K, self.eps2K, self.eps3K)

    def twisted_row(self) -> tuple:
        return (self.eps0, self.eps1, self.eps2, self.eps3)


def sign_table(
    rep: CliffordRep,
    ops: StructuralOps,
    d: Optional[np.ndarray] = None,
    tol: float = BUILD_TOL,
) -> SignTable:
    """Measure every unit sign and assert the twisted/Krein cross-relations.

    ``d`` is the self-adjoint twisted-side Dirac matrix; the Krein side uses
    K d.  Omitting it skips the eps1/eps3 rows.
    """
    eps = antilinear_sign(ops.K, ops.J, tol)
    eps_prime = measure_sign(ops.K, ops.Gamma, tol)
    eps0 = sign_of_pair(ops.J.square(), np.eye(rep.dim), tol)
    eps2 = antilinear_sign(ops.Gamma, ops.J, tol)

    eps1 = eps3 = eps1K = eps3K = None
    if d is not None:
        d = as_cmat(d)
        if residual_norm(d, adjoint(d)) > 1e-10:
            raise ValueError("sign table needs a self-adjoint Dirac matrix")
        dk = ops.K @ d
        # J D = eps1 D J reads C conj(D) = eps1 D C on matrices.
        eps1 = sign_of_pair(ops.C @ np.conj(d), d @ ops.C, tol)
        eps1K = sign_of_pair(ops.C @ np.conj(dk), dk @ ops.C, tol)
        eps3 = measure_sign(d, ops.Gamma, tol)
        eps3K = measure_sign(dk, ops.Gamma, tol)
        if eps1K != eps * eps1:
            raise ConstructionError("cross-relation eps1K = eps * eps1 violated")
        if eps3 != eps_prime * eps3K:
            raise ConstructionError("cross-relation eps3 = eps' * eps3K violated")

    return SignTable(
        eps=eps,
        eps_prime=eps_prime,
        eps0=eps0,
        eps2=eps2,
        eps0K=eps0,   # same J on both sides
        eps2K=eps2,   # same J and Gamma on both sides
        eps1=eps1,
        eps3=eps3,
        eps1K=eps1K,
        eps3K=eps3K,
    )


def canonical_dirac_pair(
    rep: CliffordRep,
    rng: Optional[np.random.Generator] = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Deterministic test Dirac pair (D twisted-Hermitian, DK = K D Krein-self-adjoint).

    DK is taken odd so it anticommutes with the grading: a real grade-1
    combination in total dimension 2, an imaginary grade-3 combination in
    dimension >= 4.  The latter carries the extra conjugation/transposition
    sign of a first-order derivative slot, so its real-structure signs match
    the function-space Dirac operator (in particular the (1,3) table lands
    on (1, 1, -1, -1)).
    """
    n = rep.n_gen
    if n == 2:
        coeffs = rng.normal(size=2) if rng is not None else np.array([1.0, 0.7])
        dk = coeffs[0] * rep.gammas[0] + coeffs[1] * rep.gammas[1]
    else:
        triples = list(itertools.combinations(range(n), 3))
        if rng is not None:
            weights = rng.normal(size=len(triples))
        else:
            weights = np.array([1.0 / (j + 2.0) for j in range(len(triples))])
        dk = np.zeros((rep.dim, rep.dim), dtype=np.complex128)
        for w, (a, b, c) in zip(weights, triples):
            dk += 1j * w * (rep.gammas[a] @ rep.gammas[b] @ rep.gammas[c])
    plus = [a for a in range(n) if rep.signs[a] > 0]
    minus = [a for a in range(n) if rep.signs[a] < 0]
    k_indices = plus if len(plus) % 2 == 1 else minus
    K = phase_normalize(gamma_product(rep, k_indices))
    d = K @ dk
    if residual_norm(d, adjoint(d)) > 1e-11:
        raise ConstructionError("canonical Dirac matrix failed to be Hermitian")
    return d, dk
