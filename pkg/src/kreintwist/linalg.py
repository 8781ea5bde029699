"""Dense complex linear algebra shared by every verification module.

Matrices are plain ``numpy.ndarray`` (complex128, row-major).  Antilinear
maps ``psi -> M conj(psi)`` get a tiny wrapper so compositions and
conjugations stay one-liners.  Everything here is pure and immutable.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "ShapeError",
    "NotASignError",
    "as_cmat",
    "adjoint",
    "kron",
    "op_norm",
    "residual_norm",
    "commutator",
    "anticommutator",
    "AntilinearOp",
    "Residual",
    "sign_of_pair",
]


class ShapeError(ValueError):
    """Operands have incompatible or disallowed shapes."""


class NotASignError(ValueError):
    """An operator pair neither commutes nor anticommutes within tolerance."""


def as_cmat(a) -> np.ndarray:
    """Coerce to a finite complex128 matrix."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2:
        raise ShapeError(f"expected a matrix, got ndim={m.ndim}")
    if not (np.all(np.isfinite(m.real)) and np.all(np.isfinite(m.imag))):
        raise ValueError("matrix contains NaN/Inf entries")
    return m


def adjoint(a) -> np.ndarray:
    """Conjugate transpose."""
    return np.conj(np.asarray(a)).T


def kron(a, b) -> np.ndarray:
    """Kronecker product, kron(A,B) @ kron(C,D) = kron(AC, BD)."""
    return np.kron(np.asarray(a, dtype=np.complex128), np.asarray(b, dtype=np.complex128))


def op_norm(a) -> float:
    """Largest singular value of a square matrix."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ShapeError(f"op_norm needs a square matrix, got shape {m.shape}")
    if m.shape[0] == 0:
        return 0.0
    return float(np.linalg.svd(m, compute_uv=False)[0])


def residual_norm(a, b=None) -> float:
    """Operator norm of A - B (of A itself when B is omitted)."""
    m = np.asarray(a, dtype=np.complex128)
    if b is not None:
        m = m - np.asarray(b, dtype=np.complex128)
    return op_norm(m)


def commutator(a, b) -> np.ndarray:
    return a @ b - b @ a


def anticommutator(a, b) -> np.ndarray:
    return a @ b + b @ a


@dataclass(frozen=True)
class Residual:
    """A measured operator-norm deviation against a tolerance."""

    value: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.value <= self.tolerance

    def __str__(self) -> str:  # pragma: no cover - cosmetic
        tag = "ok" if self.passed else "FAIL"
        return f"{self.value:.3e} <= {self.tolerance:.1e} [{tag}]"


@dataclass(frozen=True)
class AntilinearOp:
    """Antilinear operator psi -> mat @ conj(psi).

    Compositions of two antilinear operators are linear with matrix
    ``A.mat @ conj(B.mat)``; sandwiching a linear operator gives
    ``J A J^-1 = mat @ conj(A) @ inv(mat)``.
    """

    mat: np.ndarray

    def __post_init__(self):
        m = as_cmat(self.mat)
        if m.shape[0] != m.shape[1]:
            raise ShapeError("antilinear operators must be square")
        object.__setattr__(self, "mat", m)

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    def __call__(self, psi) -> np.ndarray:
        return self.mat @ np.conj(np.asarray(psi, dtype=np.complex128))

    def compose(self, other: "AntilinearOp") -> np.ndarray:
        """Linear matrix of self o other."""
        return self.mat @ np.conj(other.mat)

    def square(self) -> np.ndarray:
        """Linear matrix of J o J, i.e. mat @ conj(mat)."""
        return self.compose(self)

    def inverse(self) -> "AntilinearOp":
        return AntilinearOp(np.conj(np.linalg.inv(self.mat)))

    def sandwich(self, a) -> np.ndarray:
        """J A J^-1 as a linear operator: mat @ conj(A) @ inv(mat)."""
        m = as_cmat(a)
        if abs(np.linalg.det(self.mat)) < 1e-14:
            raise ValueError("singular antilinear matrix cannot be inverted")
        return self.mat @ np.conj(m) @ np.linalg.inv(self.mat)


def antilinear_conjugate(j: AntilinearOp, a) -> np.ndarray:
    """The linear operator J A J^-1."""
    return j.sandwich(a)


def sign_of_pair(x, y, tol: float = 1e-12) -> int:
    """Return s in {+1,-1} with X = s Y, or raise NotASignError.

    Prefers +1 in the degenerate case X = Y = 0.
    """
    x = np.asarray(x, dtype=np.complex128)
    y = np.asarray(y, dtype=np.complex128)
    if residual_norm(x, y) <= tol:
        return +1
    if residual_norm(x, -y) <= tol:
        return -1
    raise NotASignError(
        f"no unit sign relates the operators: |X-Y|={residual_norm(x, y):.3e}, "
        f"|X+Y|={residual_norm(x, -y):.3e}"
    )
