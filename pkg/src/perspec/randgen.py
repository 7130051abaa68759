"""Seeded test-matrix generation from a splitmix64 counter stream.

Every draw is a pure function of ``(master_seed, trial_index, label,
counter)``, so trials can be regenerated independently and in any order.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np

from .matcore import MAX_DIM, DomainViolation, SymMatrix, _sym

COND_CAP = 1e6

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_MASK = (1 << 64) - 1

STRUCTURES = ("generic-PD", "PSD-with-rank", "ordered-pair", "commuting-pair", "near-identity")


def _mix(z: np.ndarray) -> np.ndarray:
    """splitmix64 finalizer on a uint64 array."""
    z = (z ^ (z >> np.uint64(30))) * _M1
    z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


def _mix_int(x: int) -> int:
    """Scalar splitmix64 finalizer, bit-identical to :func:`_mix`."""
    z = x & _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


@lru_cache(maxsize=4096)
def _label_code(label: str) -> int:
    h = 0
    for ch in label.encode():
        h = _mix_int((h * 31 + ch) & _MASK)
    return h


class Stream:
    """Counter-based generator of uniforms and normals for one trial."""

    def __init__(self, master_seed: int, trial_index: int = 0, label: str = ""):
        k = _mix_int(master_seed & _MASK)
        k = _mix_int(k ^ ((trial_index * 0xD1B54A32D192ED03) & _MASK))
        self._key = np.uint64(_mix_int(k ^ _label_code(label)))
        self._counter = 0

    def raw(self, size: int) -> np.ndarray:
        idx = np.arange(self._counter + 1, self._counter + size + 1, dtype=np.uint64)
        self._counter += size
        return _mix(self._key + idx * _GOLDEN)

    def uniform(self, size: int, low: float = 0.0, high: float = 1.0) -> np.ndarray:
        """Uniforms in (0, 1] scaled to (low, high]."""
        u = ((self.raw(size) >> np.uint64(11)).astype(np.float64) + 1.0) * 2.0**-53
        return low + (high - low) * u

    def normal(self, size: int) -> np.ndarray:
        """Standard normals by Box-Muller."""
        m = (size + 1) // 2
        u1 = self.uniform(m)
        u2 = self.uniform(m)
        r = np.sqrt(-2.0 * np.log(u1))
        z = np.concatenate([r * np.cos(2 * np.pi * u2), r * np.sin(2 * np.pi * u2)])
        return z[:size]

    def log_uniform(self, low: float, high: float, size: int = 1) -> np.ndarray:
        return np.exp(self.uniform(size, np.log(low), np.log(high)))


@dataclass(frozen=True)
class TrialSpec:
    master_seed: int
    trial_index: int = 0
    dim: int = 4
    cond_target: float = 10.0
    structure: str = "generic-PD"
    rank: int | None = None

    def __post_init__(self):
        if not 1 <= self.dim <= MAX_DIM:
            raise DomainViolation(f"dim must be in [1, {MAX_DIM}]")
        if self.cond_target < 1:
            raise DomainViolation("cond_target must be >= 1")
        if self.structure not in STRUCTURES:
            raise DomainViolation(f"unknown structure {self.structure!r}")

    @property
    def cond(self) -> float:
        return min(float(self.cond_target), COND_CAP)

    def stream(self, label: str) -> Stream:
        return Stream(self.master_seed, self.trial_index, label)

    def child(self, **kw) -> "TrialSpec":
        return replace(self, **kw)


def orthogonal(stream: Stream, n: int) -> np.ndarray:
    """Orthogonal matrix from the QR factors of a Gaussian draw."""
    g = stream.normal(n * n).reshape(n, n)
    q, r = np.linalg.qr(g)
    sgn = np.where(np.diag(r) < 0, -1.0, 1.0)
    return q * sgn


def spd_spectrum(spec: TrialSpec, label: str = "spd", size: int | None = None) -> np.ndarray:
    """Log-uniform eigenvalues whose extreme ratio is exactly the condition target."""
    n = spec.dim if size is None else size
    s = spec.stream(label + ":spec")
    scale = float(s.log_uniform(0.5, 2.0)[0])
    u = s.uniform(n)
    if n >= 2:
        u[0], u[1] = 1.0, 0.0
    else:
        u[0] = 0.5
    lam = scale * spec.cond ** (u - 0.5)
    return np.sort(lam)[::-1]


def rand_spd(spec: TrialSpec, label: str = "spd") -> SymMatrix:
    """Positive definite ``Q diag(lam) Q^T`` with condition number near the target."""
    lam = spd_spectrum(spec, label)
    q = orthogonal(spec.stream(label + ":q"), spec.dim)
    return _sym((q * lam) @ q.T)


def rand_psd_rank(spec: TrialSpec, r: int, label: str = "psd") -> SymMatrix:
    """PSD matrix of exact rank ``r`` built from ``r`` outer products."""
    if not 1 <= r <= spec.dim:
        raise DomainViolation("rank must be in [1, dim]")
    lam = spd_spectrum(spec, label, size=r)
    q = orthogonal(spec.stream(label + ":q"), spec.dim)[:, :r]
    return _sym((q * lam) @ q.T)


def rand_symmetric(spec: TrialSpec, label: str = "sym", scale: float = 1.0) -> SymMatrix:
    g = spec.stream(label).normal(spec.dim * spec.dim).reshape(spec.dim, spec.dim)
    return _sym(scale * (g + g.T) / 2.0)


def rand_ordered_pair(spec: TrialSpec, label: str = "pair") -> tuple[SymMatrix, SymMatrix, SymMatrix]:
    """Pair ``(A, B, W)`` with ``A = B^{1/2} W B^{1/2}`` and ``W`` supported in ``s(B)``.

    ``B`` has rank ``spec.rank`` (full when None) and ``W`` is PSD, so
    ``A <= ||W|| B`` holds by construction.
    """
    n = spec.dim
    r = n if spec.rank is None else spec.rank
    q = orthogonal(spec.stream(label + ":q"), n)
    lam_b = spd_spectrum(spec, label + ":b", size=r)
    qb = q[:, :r]
    b = (qb * lam_b) @ qb.T
    root = (qb * np.sqrt(lam_b)) @ qb.T
    # W lives on range(B): compress a random PSD matrix of the reduced size
    ws = rand_spd(TrialSpec(spec.master_seed, spec.trial_index, r, spec.cond), label + ":w")
    w = qb @ ws.a @ qb.T
    a = root @ w @ root
    return _sym(a), _sym(b), _sym(w)


def rand_commuting_pair(spec: TrialSpec, label: str = "comm") -> tuple[SymMatrix, SymMatrix]:
    q = orthogonal(spec.stream(label + ":q"), spec.dim)
    la = spd_spectrum(spec, label + ":a")
    lb = spd_spectrum(spec, label + ":b")
    return _sym((q * la) @ q.T), _sym((q * lb) @ q.T)


def rand_near_identity(spec: TrialSpec, label: str = "near", size: float = 1e-2) -> SymMatrix:
    e = rand_symmetric(spec, label, scale=size)
    return _sym(np.eye(spec.dim) + e.a)


def rand_pair(spec: TrialSpec, label: str = "pair") -> tuple[SymMatrix, SymMatrix]:
    """Two matrices following ``spec.structure``."""
    st = spec.structure
    if st == "generic-PD":
        return rand_spd(spec, label + ":A"), rand_spd(spec, label + ":B")
    if st == "PSD-with-rank":
        r = spec.rank or spec.dim
        return rand_psd_rank(spec, r, label + ":A"), rand_psd_rank(spec, r, label + ":B")
    if st == "ordered-pair":
        a, b, _ = rand_ordered_pair(spec, label)
        return a, b
    if st == "commuting-pair":
        return rand_commuting_pair(spec, label)
    return rand_near_identity(spec, label + ":A"), rand_near_identity(spec, label + ":B")
