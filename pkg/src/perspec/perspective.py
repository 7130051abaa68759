"""Operator perspectives, operator means and their singular extensions."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .funclib import Power, ScalarFn, Transpose
from .matcore import (
    DomainViolation,
    NonConvergence,
    SupportViolation,
    SymMatrix,
    _clean_spectrum,
    _sym,
    apply_fn,
    as_array,
    as_sym,
    eigh,
    inv,
    mat_pow,
    op_norm,
    psd_threshold,
)

REL_TOL = 1e-8
SUPPORT_TOL = 1e-9


class _Log:
    domain = "positive"

    @staticmethod
    def eval(w):
        return np.log(w)


class _Exp:
    domain = "real"

    @staticmethod
    def eval(w):
        return np.exp(w)


LOG = _Log()
EXP = _Exp()


def _roots(b, what: str = "B"):
    """Return ``(B^{1/2}, B^{-1/2})`` from one eigendecomposition of a PD matrix."""
    s = eigh(b)
    try:
        w = _clean_spectrum(np.asarray(s.eigenvalues), "positive")
    except DomainViolation as exc:
        raise DomainViolation(f"{what} must be positive definite: {exc}") from None
    q = s.eigenvectors
    rw = np.sqrt(w)
    return (q * rw) @ q.T, (q / rw) @ q.T


def perspective(f: ScalarFn, a, b, guard: bool = True) -> SymMatrix:
    """``B^{1/2} f(B^{-1/2} A B^{-1/2}) B^{1/2}`` for PD ``B``.

    ``A`` may be singular PSD when ``f`` has a finite value at 0. With
    ``guard`` on, a PD ``A`` whose congruence falls under the zero threshold
    raises NonConvergence instead of being silently truncated.
    """
    a = as_sym(a)
    root, iroot = _roots(b)
    c = _sym(iroot @ a.a @ iroot)
    spec = eigh(c)
    w = np.asarray(spec.eigenvalues)
    if guard and w[-1] <= psd_threshold(w) and _is_pd(a):
        # a PD pair whose congruence looks singular has outrun the zero threshold
        raise NonConvergence("B^-1/2 A B^-1/2 is too ill-conditioned for the zero-eigenvalue threshold")
    fc = apply_fn(f, c, spec)
    return _sym(root @ fc.a @ root)


def mean_sigma(h: ScalarFn, a, b) -> SymMatrix:
    """Operator mean ``A^{1/2} h(A^{-1/2} B A^{-1/2}) A^{1/2}``."""
    return perspective(h, b, a)


def weighted_geo(alpha: float, a, b) -> SymMatrix:
    """Weighted geometric mean ``A #_alpha B``."""
    return perspective(Power(alpha), b, a)


def transpose_identity_check(f: ScalarFn, a, b) -> float:
    """Residual of swapping arguments against the transposed function."""
    lhs = perspective(Transpose(f), a, b)
    rhs = perspective(f, b, a)
    return op_norm(lhs - rhs)


def adjoint_identity_check(f: ScalarFn, a, b) -> float:
    """Residual of the adjoint function against inverting all arguments."""
    from .funclib import Adjoint

    lhs = perspective(Adjoint(f), a, b)
    rhs = inv(perspective(f, inv(a), inv(b)))
    return op_norm(lhs - rhs)


def kantorovich(xi: float, p: float) -> float:
    """Generalized Kantorovich constant K(xi, p)."""
    xi = float(xi)
    p = float(p)
    if xi < 1:
        raise DomainViolation("xi must be >= 1")
    if xi == 1 or p == 1 or p == 0:
        return 1.0
    xp = xi**p
    first = (xp - xi) / ((p - 1) * (xi - 1))
    second = ((p - 1) / p * (xp - 1) / (xp - xi)) ** p
    return float(first * second)


def loewner_margin(x, y) -> float:
    """Normalized ``lambda_min(Y - X)``; ``X <= Y`` holds when it is >= -tol."""
    x, y = as_sym(x), as_sym(y)
    scale = max(1.0, op_norm(x), op_norm(y))
    return float(eigh(y - x).eigenvalues[-1]) / scale


def loewner_le(x, y, tol: float = REL_TOL) -> bool:
    return loewner_margin(x, y) >= -tol


# ---------------------------------------------------------------------------
# singular extensions


def _support_basis(m) -> tuple[np.ndarray, np.ndarray]:
    s = eigh(m)
    w = _clean_spectrum(np.asarray(s.eigenvalues), "nonneg")
    keep = w > 0
    return s.eigenvectors[:, keep], w[keep]


def outside_mass(a, b) -> float:
    """``||(I - s(B)) A (I - s(B))||`` relative to ``||A||``."""
    a = as_sym(a)
    qs, _ = _support_basis(b)
    comp = np.eye(a.n) - qs @ qs.T
    na = op_norm(a)
    if na == 0:
        return 0.0
    return op_norm(_sym(comp @ a.a @ comp)) / na


def support_contained(a, b, tol: float = SUPPORT_TOL) -> bool:
    """Whether ``s(A) <= s(B)``."""
    return outside_mass(a, b) <= tol


def d_ratio(a, b) -> SymMatrix:
    """The PSD ``W`` supported in ``s(B)`` with ``A = B^{1/2} W B^{1/2}``.

    Raises
    ------
    SupportViolation
        If ``A`` has mass outside the support of ``B``.
    """
    a = as_sym(a)
    _clean_spectrum(np.asarray(eigh(a).eigenvalues), "nonneg")
    if outside_mass(a, b) > SUPPORT_TOL:
        raise SupportViolation("support of A is not contained in support of B")
    qs, w = _support_basis(b)
    half = qs / np.sqrt(w)
    inner = half.T @ a.a @ half
    return _sym(qs @ inner @ qs.T)


def perspective_singular(f: ScalarFn, a, b) -> SymMatrix:
    """Closed-form limit of ``P_f(A + eps I, B + eps I)`` as eps -> 0.

    Uses ``B^{1/2} f(D(A/B)) B^{1/2}`` when f(0+) is finite and
    ``s(A) <= s(B)``, and the mirrored form with the transpose of f when the
    slope of f at infinity is finite and ``s(B) <= s(A)``.
    """
    a, b = as_sym(a), as_sym(b)
    finite_zero = f.value_at_zero is not None
    finite_slope = f.slope_at_inf is not None
    if not (finite_zero or finite_slope):
        if _is_pd(a) and _is_pd(b):
            return perspective(f, a, b)
        raise DomainViolation(f"{f} has neither a finite value at 0 nor a finite slope at infinity")
    if finite_zero and support_contained(a, b):
        return _sym_root_sandwich(b, apply_fn(f, d_ratio(a, b)))
    if finite_slope and support_contained(b, a):
        return _sym_root_sandwich(a, apply_fn(Transpose(f), d_ratio(b, a)))
    raise SupportViolation("supports are not ordered in the direction the function allows")


def _is_pd(m: SymMatrix) -> bool:
    w = eigh(m).eigenvalues
    return bool(w[-1] > psd_threshold(w))


def _sym_root_sandwich(b, x) -> SymMatrix:
    r = mat_pow(b, 0.5).a
    return _sym(r @ as_array(x) @ r)


@dataclass
class LimitReport:
    """Iterates of a regularized sequence and its convergence verdict."""

    eps: list
    values: list
    diffs: list
    cauchy: bool
    diverged: bool
    final: SymMatrix | None
    scale: float = 1.0
    meta: dict = field(default_factory=dict)


def analyze_sequence(values, eps=None, shrink: float = 1.5, grow_steps: int = 3,
                     floor: float = 1e-9, tail: int = 5) -> LimitReport:
    """Cauchy / divergence verdict for a sequence of matrices.

    The sequence counts as Cauchy when each of the last ``tail`` differences
    either shrank by at least ``shrink`` or sits below ``floor * scale``.
    It counts as divergent when differences grow for ``grow_steps``
    consecutive steps.
    """
    arrs = [as_array(v) for v in values]
    diffs = [op_norm(_sym(arrs[k] - arrs[k - 1])) for k in range(1, len(arrs))]
    scale = max(1.0, max(float(np.max(np.abs(x))) for x in arrs[-1:]))
    run = 0
    diverged = False
    for k in range(1, len(diffs)):
        run = run + 1 if diffs[k] > diffs[k - 1] and diffs[k] > floor * scale else 0
        if run >= grow_steps:
            diverged = True
            break
    ok = []
    for k in range(1, len(diffs)):
        ok.append(diffs[k] <= floor * scale or (diffs[k] > 0 and diffs[k - 1] / diffs[k] >= shrink))
    cauchy = (not diverged) and len(ok) >= tail and all(ok[-tail:])
    final = values[-1] if values else None
    return LimitReport(list(eps or []), list(values), diffs, cauchy, diverged, final, scale)


def eps_limit(f: ScalarFn, a, b, eps0: float = 1e-2, halvings: int = 20) -> LimitReport:
    """Evaluate ``P_f(A + eps I, B + eps I)`` for ``eps = eps0 2^{-k}``."""
    a, b = as_sym(a), as_sym(b)
    eye = np.eye(a.n)
    eps, values = [], []
    for k in range(halvings + 1):
        e = eps0 * 2.0**-k
        try:
            values.append(perspective(f, _sym(a.a + e * eye), _sym(b.a + e * eye), guard=False))
        except DomainViolation:
            break
        eps.append(e)
    if len(values) < halvings + 1:
        # overflow or loss of definiteness is itself a blow-up signal
        rep = analyze_sequence(values, eps) if len(values) > 1 else LimitReport(eps, values, [], False, True, None)
        rep.diverged = True
        rep.cauchy = False
        return rep
    return analyze_sequence(values, eps)


def log_euclidean(alpha: float, a, b) -> SymMatrix:
    """``exp(alpha log A + (1 - alpha) log B)``."""
    la = apply_fn(LOG, a)
    lb = apply_fn(LOG, b)
    return apply_fn(EXP, _sym(alpha * la.a + (1 - alpha) * lb.a))


def log_on_support(m) -> np.ndarray:
    """Matrix log on the support, zero on the kernel."""
    qs, w = _support_basis(m)
    return (qs * np.log(w)) @ qs.T


def support_meet(a, b) -> np.ndarray:
    """Orthonormal basis for the range of ``s(A) ^ s(B)``."""
    pa = mat_pow(a, 0.0).a
    pb = mat_pow(b, 0.0).a
    s = eigh(_sym(pa + pb))
    w = np.asarray(s.eigenvalues)
    keep = np.abs(w - 2.0) <= psd_threshold(w) * 2.0 + 1e-9
    return s.eigenvectors[:, keep]


def dotted_exp(alpha: float, beta: float, a, b, strict: bool = False) -> SymMatrix:
    """``P0 exp(alpha P0 log A P0 + beta P0 log B P0)`` on ``P0 = s(A) ^ s(B)``.

    Valid for ``alpha, beta > 0``, or for ``s(A) <= s(B)`` with ``beta < 0``
    and ``alpha + beta > 0``. An empty meet gives the zero matrix, or
    SupportViolation when ``strict``.
    """
    a, b = as_sym(a), as_sym(b)
    if not (alpha > 0 and beta > 0):
        if not (beta < 0 and alpha + beta > 0 and support_contained(a, b)):
            raise DomainViolation("weights outside the two admissible regimes")
    v = support_meet(a, b)
    if v.shape[1] == 0:
        if strict:
            raise SupportViolation("supports have trivial intersection")
        return _sym(np.zeros((a.n, a.n)))
    x = alpha * (v.T @ log_on_support(a) @ v) + beta * (v.T @ log_on_support(b) @ v)
    x = 0.5 * (x + x.T)
    ex = apply_fn(EXP, _sym(x)).a
    return _sym(v @ ex @ v.T)


def regularized_log_sum_exp(alpha: float, beta: float, a, b, eps: float | None = None,
                            log_eps: float | None = None) -> SymMatrix:
    """``exp(alpha log(A + eps s(A)^perp) + beta log(B + eps s(B)^perp))``.

    ``log(A + eps s(A)^perp)`` is formed as the support log plus
    ``log(eps)`` on the kernel, which is exact and lets ``log_eps`` go far
    below the smallest double (e.g. ``-1e7``) for a sharp limit.
    """
    if (eps is None) == (log_eps is None):
        raise DomainViolation("pass exactly one of eps and log_eps")
    if log_eps is None:
        if not eps > 0:
            raise DomainViolation("eps must be positive")
        log_eps = math.log(eps)
    a, b = as_sym(a), as_sym(b)
    eye = np.eye(a.n)
    la = log_on_support(a) + log_eps * (eye - mat_pow(a, 0.0).a)
    lb = log_on_support(b) + log_eps * (eye - mat_pow(b, 0.0).a)
    return apply_fn(EXP, _sym(alpha * la + beta * lb))
