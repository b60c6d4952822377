"""Dense complex matrix types and the handful of spectral operations everything
else is built on: Hermitian eigendecomposition, spectral norm, Loewner order
comparison, integer matrix powers, trace, and the Hermitian dilation.

Conventions: complex128 throughout; eigenvalues are always reported in
descending order; the spectral norm of a rectangular matrix is computed from
the Gram matrix of the smaller dimension.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_HERMITIAN_DEFECT_REL = 1e-12


def _coerce_array(data) -> np.ndarray:
    a = np.asarray(getattr(data, "array", data), dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
        raise ValueError(f"expected a 2-d matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a.real)) or not np.all(np.isfinite(a.imag)):
        raise ValueError("matrix entries must be finite")
    return a


def frobenius(M) -> float:
    return float(np.linalg.norm(_coerce_array(M), ord="fro"))


class RectMatrix:
    """Immutable d1 x d2 complex matrix."""

    __slots__ = ("array",)

    def __init__(self, data):
        a = _coerce_array(data).copy()
        a.setflags(write=False)
        object.__setattr__(self, "array", a)

    def __setattr__(self, name, value):
        raise AttributeError("RectMatrix is immutable")

    @property
    def d1(self) -> int:
        return self.array.shape[0]

    @property
    def d2(self) -> int:
        return self.array.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.array.shape

    def __repr__(self) -> str:
        return f"RectMatrix(shape={self.array.shape})"


class HermitianMatrix:
    """Immutable Hermitian matrix.

    The constructor symmetrizes its input to (M + M*)/2 and records the
    pre-symmetrization defect ||M - sym(M)||_F.  Inputs whose defect exceeds
    1e-12 * max(1, ||M||_F) are rejected: every downstream fact assumes exact
    Hermitian structure, so near-misses are treated as caller bugs rather than
    silently projected.
    """

    __slots__ = ("array", "defect")

    def __init__(self, data):
        a = _coerce_array(data)
        if a.shape[0] != a.shape[1]:
            raise ValueError(f"Hermitian matrix must be square, got {a.shape}")
        sym = (a + a.conj().T) / 2.0
        defect = float(np.linalg.norm(a - sym, ord="fro"))
        limit = _HERMITIAN_DEFECT_REL * max(1.0, float(np.linalg.norm(a, ord="fro")))
        if defect > limit:
            raise ValueError(
                f"input is not Hermitian: defect {defect:.3e} exceeds {limit:.3e}"
            )
        sym.setflags(write=False)
        object.__setattr__(self, "array", sym)
        object.__setattr__(self, "defect", defect)

    def __setattr__(self, name, value):
        raise AttributeError("HermitianMatrix is immutable")

    @property
    def dim(self) -> int:
        return self.array.shape[0]

    @property
    def shape(self) -> tuple[int, int]:
        return self.array.shape

    def __repr__(self) -> str:
        return f"HermitianMatrix(dim={self.dim}, defect={self.defect:.2e})"


@dataclass(frozen=True)
class EigDecomposition:
    """Eigenvalues in descending order; basis columns are the eigenvectors."""

    eigenvalues: np.ndarray
    basis: np.ndarray

    @property
    def lambda_max(self) -> float:
        return float(self.eigenvalues[0])

    @property
    def lambda_min(self) -> float:
        return float(self.eigenvalues[-1])

    def reconstruct(self) -> np.ndarray:
        return (self.basis * self.eigenvalues) @ self.basis.conj().T


def as_rect(M) -> RectMatrix:
    return M if isinstance(M, RectMatrix) else RectMatrix(M)


def as_hermitian(M) -> HermitianMatrix:
    return M if isinstance(M, HermitianMatrix) else HermitianMatrix(M)


def eig_hermitian(H) -> EigDecomposition:
    """Full eigendecomposition of a Hermitian matrix, eigenvalues descending."""
    H = as_hermitian(H)
    w, V = np.linalg.eigh(H.array)
    order = slice(None, None, -1)
    return EigDecomposition(
        eigenvalues=np.ascontiguousarray(w[order]),
        basis=np.ascontiguousarray(V[:, order]),
    )


def spectral_norm(M) -> float:
    """Largest singular value, via the Gram matrix of the smaller dimension."""
    A = _coerce_array(M)
    if A.shape[0] <= A.shape[1]:
        gram = A @ A.conj().T
    else:
        gram = A.conj().T @ A
    gram = (gram + gram.conj().T) / 2.0
    top = float(np.linalg.eigvalsh(gram)[-1])
    return float(np.sqrt(max(top, 0.0)))


def loewner_leq(A, H, tol: float = 0.0) -> bool:
    """True iff A is below H in the Loewner order: lambda_min(H - A) >= -tol."""
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    A = as_hermitian(A)
    H = as_hermitian(H)
    if A.dim != H.dim:
        raise ValueError(f"dimension mismatch: {A.dim} vs {H.dim}")
    smallest = float(np.linalg.eigvalsh(H.array - A.array)[0])
    return smallest >= -tol


def matrix_power(H, r: int) -> HermitianMatrix:
    """H^r by repeated multiplication; H^0 is the identity."""
    H = as_hermitian(H)
    if not isinstance(r, (int, np.integer)) or r < 0:
        raise ValueError("exponent must be a nonnegative integer")
    out = np.eye(H.dim, dtype=np.complex128)
    for _ in range(int(r)):
        out = out @ H.array
    return HermitianMatrix(out)


def trace(M) -> complex:
    """Sum of diagonal entries of a square matrix.

    The imaginary part is exactly zero for HermitianMatrix inputs because
    symmetrization makes the diagonal real.
    """
    A = _coerce_array(M)
    if A.shape[0] != A.shape[1]:
        raise ValueError(f"trace needs a square matrix, got {A.shape}")
    return complex(np.trace(A))


def dilation(B) -> HermitianMatrix:
    """Hermitian dilation [[0, B], [B*, 0]]; norm-preserving embedding."""
    B = as_rect(B)
    d1, d2 = B.shape
    out = np.zeros((d1 + d2, d1 + d2), dtype=np.complex128)
    out[:d1, d1:] = B.array
    out[d1:, :d1] = B.array.conj().T
    return HermitianMatrix(out)
