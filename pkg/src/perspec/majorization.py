"""Eigenvalue-product orderings between PSD matrices."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .matcore import DimensionMismatch, _clean_spectrum, as_sym, eigh

LOG_TOL = 1e-8


@dataclass(frozen=True)
class MajorizationVerdict:
    """Outcome of a prefix-product comparison.

    ``margins[k-1]`` is the slack at prefix length ``k`` (non-negative when
    the inequality holds exactly) and ``tol[k-1]`` the allowance used.
    """

    relation: str
    holds: bool
    margins: tuple
    worst_k: int
    tol: tuple

    @property
    def worst_margin(self) -> float:
        return float(self.margins[self.worst_k - 1])

    def __bool__(self):
        return self.holds


def _spectra(a, b):
    a, b = as_sym(a), as_sym(b)
    if a.n != b.n:
        raise DimensionMismatch(f"sizes {a.n} and {b.n} differ")
    la = _clean_spectrum(np.asarray(eigh(a).eigenvalues, dtype=float), "nonneg")
    lb = _clean_spectrum(np.asarray(eigh(b).eigenvalues, dtype=float), "nonneg")
    return la, lb


def _logs(w):
    with np.errstate(divide="ignore"):
        return np.log(w)


def _log_tol(la, lb) -> np.ndarray:
    logs = np.concatenate([_logs(la), _logs(lb)])
    finite = logs[np.isfinite(logs)]
    big = float(np.max(np.abs(finite))) if finite.size else 0.0
    k = np.arange(1, len(la) + 1)
    return LOG_TOL * k * (1.0 + big)


def _slack(upper: np.ndarray, lower: np.ndarray) -> np.ndarray:
    """upper - lower with the conventions -inf <= anything and -inf == -inf."""
    out = np.empty_like(upper)
    for i, (u, l) in enumerate(zip(upper, lower)):
        if l == -np.inf:
            out[i] = 0.0 if u == -np.inf else np.inf
        else:
            out[i] = u - l
    return out


def _verdict(name, margins, tol) -> MajorizationVerdict:
    rel = margins + tol
    worst = int(np.argmin(np.where(np.isnan(rel), -np.inf, rel))) + 1
    holds = bool(np.all(margins >= -tol))
    return MajorizationVerdict(name, holds, tuple(float(m) for m in margins), worst,
                               tuple(float(t) for t in tol))


def weak_log_majorize(a, b) -> MajorizationVerdict:
    """``A <_wlog B``: prefix products of descending eigenvalues of A are no larger."""
    la, lb = _spectra(a, b)
    sa = np.cumsum(_logs(la))
    sb = np.cumsum(_logs(lb))
    return _verdict("wlog", _slack(sb, sa), _log_tol(la, lb))


def log_majorize(a, b) -> MajorizationVerdict:
    """``A <_log B``: weak log-majorization plus equal determinants."""
    la, lb = _spectra(a, b)
    tol = _log_tol(la, lb)
    weak = weak_log_majorize(a, b)
    da = float(np.sum(_logs(la)))
    db = float(np.sum(_logs(lb)))
    det_gap = 0.0 if da == db else abs(da - db)
    if det_gap <= tol[-1]:
        return MajorizationVerdict("log", weak.holds, weak.margins, weak.worst_k, weak.tol)
    margins = list(weak.margins)
    margins[-1] = min(margins[-1], -det_gap)
    return MajorizationVerdict("log", False, tuple(margins), len(la), weak.tol)


def log_supermajorize(a, b) -> MajorizationVerdict:
    """``A <^wlog B``: products of the k smallest eigenvalues of A are no smaller."""
    la, lb = _spectra(a, b)
    sa = np.cumsum(_logs(la[::-1]))
    sb = np.cumsum(_logs(lb[::-1]))
    return _verdict("superwlog", _slack(sa, sb), _log_tol(la, lb))


def weak_majorize(a, b) -> MajorizationVerdict:
    """``A <_w B``: prefix sums of descending eigenvalues of A are no larger."""
    la, lb = _spectra(a, b)
    margins = np.cumsum(lb) - np.cumsum(la)
    k = np.arange(1, len(la) + 1)
    big = max(1.0, float(np.max(np.abs(np.concatenate([la, lb])))))
    return _verdict("w", margins, LOG_TOL * k * big)
