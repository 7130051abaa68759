"""Dense real symmetric matrices, a Jacobi eigensolver and functional calculus."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Callable, Iterable, Union

import numpy as np
from numba import njit

SYM_TOL = 1e-12
EIG_TOL = 1e-10
PSD_TOL = 1e-10
MAX_DIM = 64
JACOBI_SWEEPS = 30
JACOBI_REL_OFF = 1e-14


class PerspecError(Exception):
    """Base class for library errors."""


class DomainViolation(PerspecError, ValueError):
    """Input lies outside the domain of an operation."""


class NonConvergence(PerspecError, RuntimeError):
    """Iterative eigensolver ran out of sweeps."""


class SupportViolation(PerspecError, ValueError):
    """Support containment required by a singular construction fails."""


class DimensionMismatch(PerspecError, ValueError):
    """Operands have different sizes."""


class SymMatrix:
    """Immutable dense real symmetric matrix.

    The input is symmetrized to ``(M + M.T) / 2`` after checking that it is
    finite, square, at most ``MAX_DIM`` wide and symmetric up to ``sym_tol``
    relative to its largest entry.
    """

    __slots__ = ("_a", "_spec")

    def __init__(self, data, sym_tol: float = SYM_TOL):
        a = np.array(data, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
            raise DomainViolation(f"expected a square matrix, got shape {a.shape}")
        if a.shape[0] > MAX_DIM:
            raise DomainViolation(f"dimension {a.shape[0]} exceeds cap {MAX_DIM}")
        if not np.all(np.isfinite(a)):
            raise DomainViolation("matrix has non-finite entries")
        scale = np.max(np.abs(a))
        if np.max(np.abs(a - a.T)) > sym_tol * scale:
            raise DomainViolation("matrix is not symmetric")
        a = 0.5 * (a + a.T)
        a.setflags(write=False)
        object.__setattr__(self, "_a", a)

    def __setattr__(self, name, value):
        raise AttributeError("SymMatrix is immutable")

    @property
    def a(self) -> np.ndarray:
        """Read-only ndarray view of the entries."""
        return self._a

    @property
    def n(self) -> int:
        return self._a.shape[0]

    def __array__(self, dtype=None, copy=None):
        return self._a if dtype is None else self._a.astype(dtype)

    def __repr__(self):
        return f"SymMatrix(n={self.n}, {np.array2string(self._a, precision=4)})"

    def __eq__(self, other):
        return isinstance(other, SymMatrix) and np.array_equal(self._a, other._a)

    def __hash__(self):
        return hash(self._a.tobytes())

    def __add__(self, other):
        return SymMatrix(self._a + as_array(other))

    def __sub__(self, other):
        return SymMatrix(self._a - as_array(other))

    def __mul__(self, c: float):
        return SymMatrix(self._a * float(c))

    __rmul__ = __mul__

    def __neg__(self):
        return SymMatrix(-self._a)

    def to_dict(self) -> dict:
        return {"n": self.n, "data": self._a.tolist()}

    @classmethod
    def from_dict(cls, obj: dict) -> "SymMatrix":
        try:
            n = int(obj["n"])
            data = obj["data"]
        except (KeyError, TypeError, ValueError) as exc:
            raise DomainViolation(f"malformed matrix object: {exc}") from exc
        m = cls(data)
        if m.n != n:
            raise DomainViolation(f"declared n={n} but data is {m.n}x{m.n}")
        return m

    @classmethod
    def identity(cls, n: int) -> "SymMatrix":
        return cls(np.eye(n))

    @classmethod
    def diag(cls, values: Iterable[float]) -> "SymMatrix":
        return cls(np.diag(np.asarray(list(values), dtype=float)))


MatrixLike = Union[SymMatrix, np.ndarray]


def as_array(m) -> np.ndarray:
    if isinstance(m, SymMatrix):
        return m.a
    return np.asarray(m, dtype=float)


def as_sym(m) -> SymMatrix:
    return m if isinstance(m, SymMatrix) else SymMatrix(m)


def _sym(a: np.ndarray) -> SymMatrix:
    """Wrap an internally produced array, re-symmetrizing without checks."""
    a = 0.5 * (a + a.T)
    out = SymMatrix.__new__(SymMatrix)
    if not np.all(np.isfinite(a)):
        raise DomainViolation("result has non-finite entries")
    a.setflags(write=False)
    object.__setattr__(out, "_a", a)
    return out


def read_matrices(text: str) -> list[SymMatrix]:
    """Parse one matrix object or a list of them from JSON text."""
    obj = json.loads(text)
    if isinstance(obj, dict):
        obj = [obj]
    return [SymMatrix.from_dict(o) for o in obj]


def write_matrices(mats: Iterable[SymMatrix]) -> str:
    return json.dumps([m.to_dict() for m in mats])


# ---------------------------------------------------------------------------
# eigensolver


@njit(cache=True)
def _jacobi(a, max_sweeps, rel_off):
    n = a.shape[0]
    a = a.copy()
    v = np.eye(n)
    fro = np.sqrt(np.sum(a * a))
    target = rel_off * fro
    for sweep in range(max_sweeps + 1):
        off = 0.0
        for i in range(n):
            for j in range(n):
                if i != j:
                    off += a[i, j] * a[i, j]
        if np.sqrt(off) <= target:
            return a, v, sweep
        if sweep == max_sweeps:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                app = a[p, p]
                aqq = a[q, q]
                theta = (aqq - app) / (2.0 * apq)
                if theta >= 0.0:
                    t = 1.0 / (theta + np.sqrt(1.0 + theta * theta))
                else:
                    t = -1.0 / (-theta + np.sqrt(1.0 + theta * theta))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                for k in range(n):
                    akp = a[k, p]
                    akq = a[k, q]
                    a[k, p] = c * akp - s * akq
                    a[k, q] = s * akp + c * akq
                for k in range(n):
                    apk = a[p, k]
                    aqk = a[q, k]
                    a[p, k] = c * apk - s * aqk
                    a[q, k] = s * apk + c * aqk
                a[p, q] = 0.0
                a[q, p] = 0.0
                for k in range(n):
                    vkp = v[k, p]
                    vkq = v[k, q]
                    v[k, p] = c * vkp - s * vkq
                    v[k, q] = s * vkp + c * vkq
    return a, v, -1


@njit(cache=True)
def _sorted_eig(a, max_sweeps, rel_off):
    d, v, sweeps = _jacobi(a, max_sweeps, rel_off)
    w = np.diag(d).copy()
    # stable sort keeps the original index order among ties
    order = np.argsort(-w, kind="mergesort")
    return w[order], np.ascontiguousarray(v[:, order]), sweeps


@dataclass(frozen=True)
class Spectral:
    """Eigenvalues in descending order and orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    sweeps: int = 0

    def reconstruct(self) -> np.ndarray:
        q = self.eigenvectors
        return (q * self.eigenvalues) @ q.T


def eigh(m: MatrixLike) -> Spectral:
    """Cyclic Jacobi eigendecomposition with a fixed sweep budget.

    Raises
    ------
    NonConvergence
        If the off-diagonal mass is still above ``1e-14 * ||M||_F`` after
        ``JACOBI_SWEEPS`` sweeps.
    """
    sm = as_sym(m)
    cached = getattr(sm, "_spec", None)
    if cached is not None:
        return cached
    a = np.ascontiguousarray(sm.a, dtype=np.float64)
    w, v, sweeps = _sorted_eig(a, JACOBI_SWEEPS, JACOBI_REL_OFF)
    if sweeps < 0:
        raise NonConvergence(f"Jacobi did not converge in {JACOBI_SWEEPS} sweeps")
    w.setflags(write=False)
    v.setflags(write=False)
    out = Spectral(w, v, sweeps)
    # SymMatrix is immutable, so its decomposition can be kept with it
    object.__setattr__(sm, "_spec", out)
    return out


# ---------------------------------------------------------------------------
# spectral helpers


def psd_threshold(w: np.ndarray) -> float:
    return PSD_TOL * max(1.0, float(np.max(w)) if w.size else 1.0)


def _clean_spectrum(w: np.ndarray, domain: str) -> np.ndarray:
    """Apply the zero/clamp rules for a given function domain."""
    if domain == "real":
        return w
    thr = psd_threshold(w)
    if np.any(w < -thr):
        raise DomainViolation(f"eigenvalue {w.min():.3e} is negative beyond tolerance")
    w = np.where(np.abs(w) <= thr, 0.0, w)
    if domain == "positive" and np.any(w <= 0):
        raise DomainViolation("matrix is singular but the function needs a positive spectrum")
    return w


def _domain_of(f) -> str:
    return getattr(f, "domain", "real")


def _call(f, x: np.ndarray) -> np.ndarray:
    ev = getattr(f, "eval", None)
    return np.asarray(ev(x) if ev is not None else f(x), dtype=float)


def apply_fn(f: Callable, m: MatrixLike, spec: Spectral | None = None) -> SymMatrix:
    """Return ``Q f(L) Q^T`` for ``M = Q L Q^T``.

    ``f`` is either a plain vectorized callable (domain the whole real line)
    or an object with ``eval`` and ``domain`` in {"real", "positive",
    "nonneg"}, e.g. a catalog function.
    """
    s = spec if spec is not None else eigh(m)
    w = _clean_spectrum(np.asarray(s.eigenvalues, dtype=float), _domain_of(f))
    fw = _call(f, w)
    if not np.all(np.isfinite(fw)):
        raise DomainViolation("function is not finite on the spectrum")
    q = s.eigenvectors
    return _sym((q * fw) @ q.T)


class _PowerFn:
    def __init__(self, p: float):
        self.p = float(p)
        self.domain = "positive" if self.p < 0 else "nonneg"

    def eval(self, w):
        w = np.asarray(w, dtype=float)
        if self.p == 0:
            return np.where(w > 0, 1.0, 0.0)
        out = np.zeros_like(w)
        pos = w > 0
        out[pos] = w[pos] ** self.p
        return out


def mat_pow(m: MatrixLike, p: float, spec: Spectral | None = None) -> SymMatrix:
    """Fractional power of a PSD matrix (PD when ``p < 0``).

    ``mat_pow(M, 0)`` is the support projection of ``M``.
    """
    if p == 1 and spec is None:
        return _psd_checked(m)
    return apply_fn(_PowerFn(p), m, spec)


def _psd_checked(m) -> SymMatrix:
    m = as_sym(m)
    _clean_spectrum(eigh(m).eigenvalues, "nonneg")
    return m


def op_norm(m: MatrixLike) -> float:
    """Largest absolute eigenvalue."""
    w = eigh(m).eigenvalues
    return float(max(abs(w[0]), abs(w[-1])))


def lambda_min(m: MatrixLike) -> float:
    return float(eigh(m).eigenvalues[-1])


def lambda_max(m: MatrixLike) -> float:
    return float(eigh(m).eigenvalues[0])


def congruence(b: MatrixLike, x: MatrixLike) -> SymMatrix:
    """``B^{1/2} X B^{1/2}`` for PSD ``B``."""
    r = mat_pow(b, 0.5).a
    return _sym(r @ as_array(x) @ r)


def support_projection(m: MatrixLike) -> SymMatrix:
    return mat_pow(m, 0.0)


def rank(m: MatrixLike) -> int:
    w = eigh(m).eigenvalues
    return int(np.sum(w > psd_threshold(w)))


@dataclass(frozen=True)
class PsdClass:
    classification: str
    lambda_min: float
    rank: int


def classify_psd(m: MatrixLike) -> PsdClass:
    w = eigh(m).eigenvalues
    thr = psd_threshold(w)
    r = int(np.sum(w > thr))
    if w[-1] < -thr:
        kind = "indefinite"
    elif r == len(w):
        kind = "PD"
    else:
        kind = "PSD-singular"
    return PsdClass(kind, float(w[-1]), r)


def inv(m: MatrixLike) -> SymMatrix:
    return mat_pow(m, -1.0)


def matmul_sym(x: MatrixLike, y: MatrixLike, z: MatrixLike | None = None) -> SymMatrix:
    """Product ``X Y X`` (when ``z`` is None) or ``X Y Z``, re-symmetrized."""
    xa = as_array(x)
    za = xa if z is None else as_array(z)
    return _sym(xa @ as_array(y) @ za)
