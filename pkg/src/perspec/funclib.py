"""Catalog of positive scalar functions on (0, inf) and their transforms.

Each catalog entry is an immutable descriptor with a vectorized ``eval``,
asymptotic metadata (value at 0+, growth at infinity) and a compact text
form that round-trips through :func:`parse_fn`.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple

import numpy as np

from .matcore import DomainViolation, PerspecError, SymMatrix, apply_fn, lambda_min, _sym
from .randgen import Stream, orthogonal

REL_TOL = 1e-9
LOGMEAN_TAYLOR_BAND = 1e-4
INVERSE_MAX_DOUBLINGS = 200
INVERSE_MAX_STEPS = 400


class InverseNotBracketed(PerspecError, ValueError):
    """Target value of a numeric inverse could not be bracketed."""


class FnParseError(PerspecError, ValueError):
    """Malformed function descriptor text."""


class Limits(NamedTuple):
    """Boundary behaviour: f(0+), f(inf), lim f(t)/t at inf, lim f(t)/t at 0+.

    ``nan`` marks a limit the descriptor algebra cannot decide.
    """

    zero: float
    inf: float
    slope_inf: float
    slope_zero: float


_INF = math.inf
_NAN = math.nan


def _recip(x: float) -> float:
    if math.isnan(x):
        return _NAN
    if x == 0:
        return _INF
    if math.isinf(x):
        return 0.0
    return 1.0 / x


def _mul(x: float, y: float) -> float:
    if math.isnan(x) or math.isnan(y):
        return _NAN
    if (x == 0 and math.isinf(y)) or (y == 0 and math.isinf(x)):
        return _NAN
    return x * y


def _pow(x: float, p: float) -> float:
    if math.isnan(x):
        return _NAN
    if math.isinf(x):
        return _INF if p > 0 else 0.0
    if x == 0:
        return 0.0 if p > 0 else _INF
    return x**p


def _fmt(x: float) -> str:
    x = float(x)
    if x.is_integer() and abs(x) < 1e15:
        return str(int(x))
    return repr(x)


def _power_sum_limits(atoms) -> Limits:
    """Limits of sum_i w_i t^{a_i} with w_i > 0."""
    exps = [a for a, _ in atoms]
    w_at = lambda e: sum(w for a, w in atoms if a == e)
    zero = _INF if min(exps) < 0 else w_at(0.0)
    inf = _INF if max(exps) > 0 else (w_at(0.0) if max(exps) == 0 else 0.0)
    slope_inf = _INF if max(exps) > 1 else w_at(1.0)
    slope_zero = _INF if min(exps) < 1 else w_at(1.0)
    return Limits(zero, inf, slope_inf, slope_zero)


class ScalarFn:
    """Base class for catalog functions."""

    def _f(self, t: np.ndarray) -> np.ndarray:  # pragma: no cover - abstract
        raise NotImplementedError

    def _limits(self) -> Limits:  # pragma: no cover - abstract
        raise NotImplementedError

    @cached_property
    def limits(self) -> Limits:
        return self._limits()

    @property
    def value_at_zero(self) -> float | None:
        """f(0+) when it is finite, else None."""
        z = self.limits.zero
        return None if (math.isnan(z) or math.isinf(z)) else float(z)

    @property
    def slope_at_inf(self) -> float | None:
        """lim f(t)/t as t -> inf when finite, else None."""
        s = self.limits.slope_inf
        return None if (math.isnan(s) or math.isinf(s)) else float(s)

    @property
    def domain(self) -> str:
        return "positive" if self.value_at_zero is None else "nonneg"

    def eval(self, t):
        arr = np.asarray(t, dtype=float)
        scalar = arr.ndim == 0
        arr = np.atleast_1d(arr)
        if np.any(arr < 0) or np.any(np.isnan(arr)):
            raise DomainViolation(f"{self} evaluated at a negative argument")
        zero = arr == 0
        if np.any(zero):
            v0 = self.value_at_zero
            if v0 is None:
                raise DomainViolation(f"{self} has no finite value at 0")
            out = np.full(arr.shape, v0)
            if np.any(~zero):
                out[~zero] = self._f(arr[~zero])
        else:
            out = np.asarray(self._f(arr), dtype=float)
        return float(out[0]) if scalar else out

    __call__ = eval

    @cached_property
    def deriv_at_one(self) -> float:
        return deriv_at_one(self)

    @property
    def normalized(self) -> bool:
        return abs(self.eval(1.0) - 1.0) <= 1e-12

    def __str__(self) -> str:
        return self.text()

    def text(self) -> str:  # pragma: no cover - abstract
        raise NotImplementedError


@dataclass(frozen=True, eq=True)
class Power(ScalarFn):
    """t^alpha"""

    alpha: float

    def _f(self, t):
        return t**self.alpha

    def _limits(self):
        return _power_sum_limits([(float(self.alpha), 1.0)])

    def text(self):
        return f"pow({_fmt(self.alpha)})"


@dataclass(frozen=True, eq=True)
class WeightedArith(ScalarFn):
    """(1 - w) + w t"""

    w: float

    def __post_init__(self):
        if not 0 <= self.w <= 1:
            raise DomainViolation("weight must lie in [0, 1]")

    def _f(self, t):
        return (1 - self.w) + self.w * t

    def _limits(self):
        atoms = [(a, w) for a, w in ((0.0, 1 - self.w), (1.0, self.w)) if w > 0]
        return _power_sum_limits(atoms)

    def text(self):
        return f"warith({_fmt(self.w)})"


@dataclass(frozen=True, eq=True)
class WeightedHarm(ScalarFn):
    """((1 - w) + w / t)^{-1}"""

    w: float

    def __post_init__(self):
        if not 0 <= self.w <= 1:
            raise DomainViolation("weight must lie in [0, 1]")

    def _f(self, t):
        return t / ((1 - self.w) * t + self.w)

    def _limits(self):
        w = self.w
        return Limits(
            0.0 if w > 0 else 1.0,
            _recip(1 - w),
            0.0 if w < 1 else 1.0,
            _recip(w),
        )

    def text(self):
        return f"wharm({_fmt(self.w)})"


@dataclass(frozen=True, eq=True)
class Geodesic(ScalarFn):
    """sum_i w_i t^{a_i} with a_i in [0, 1] and weights summing to one."""

    atoms: tuple

    def __post_init__(self):
        atoms = tuple((float(a), float(w)) for a, w in self.atoms)
        if not atoms:
            raise DomainViolation("geodesic needs at least one atom")
        if any(not 0 <= a <= 1 for a, _ in atoms) or any(w <= 0 for _, w in atoms):
            raise DomainViolation("geodesic atoms need exponents in [0,1] and positive weights")
        if abs(sum(w for _, w in atoms) - 1) > 1e-12:
            raise DomainViolation("geodesic weights must sum to 1")
        object.__setattr__(self, "atoms", atoms)

    def _f(self, t):
        return sum(w * t**a for a, w in self.atoms)

    def _limits(self):
        return _power_sum_limits(self.atoms)

    def text(self):
        return "geodesic(" + ",".join(f"{_fmt(a)}:{_fmt(w)}" for a, w in self.atoms) + ")"


@dataclass(frozen=True, eq=True)
class LogMean(ScalarFn):
    """(t - 1) / log t, equal to 1 at t = 1."""

    def _f(self, t):
        d = t - 1.0
        near = np.abs(d) < LOGMEAN_TAYLOR_BAND
        out = np.empty_like(t)
        out[near] = 1.0 + d[near] / 2.0 - d[near] ** 2 / 12.0
        far = ~near
        out[far] = d[far] / np.log(t[far])
        return out

    def _limits(self):
        return Limits(0.0, _INF, 0.0, _INF)

    def text(self):
        return "logmean"


@dataclass(frozen=True, eq=True)
class HalfSum(ScalarFn):
    """(t^alpha + t^{1-alpha}) / 2"""

    alpha: float

    def _f(self, t):
        return 0.5 * (t**self.alpha + t ** (1 - self.alpha))

    def _limits(self):
        a = float(self.alpha)
        if a == 0.5:
            return _power_sum_limits([(0.5, 1.0)])
        return _power_sum_limits([(a, 0.5), (1 - a, 0.5)])

    def text(self):
        return f"halfsum({_fmt(self.alpha)})"


@dataclass(frozen=True, eq=True)
class Transpose(ScalarFn):
    """t f(1/t)"""

    inner: ScalarFn

    def _f(self, t):
        return t * self.inner._f(1.0 / t)

    def _limits(self):
        z, i, si, s0 = self.inner.limits
        return Limits(si, s0, z, i)

    def text(self):
        return f"transpose({self.inner.text()})"


@dataclass(frozen=True, eq=True)
class Adjoint(ScalarFn):
    """1 / f(1/t)"""

    inner: ScalarFn

    def _f(self, t):
        return 1.0 / self.inner._f(1.0 / t)

    def _limits(self):
        z, i, si, s0 = self.inner.limits
        return Limits(_recip(i), _recip(z), _recip(s0), _recip(si))

    def text(self):
        return f"adjoint({self.inner.text()})"


@dataclass(frozen=True, eq=True)
class Dual(ScalarFn):
    """t / f(t)"""

    inner: ScalarFn

    def _f(self, t):
        return t / self.inner._f(t)

    def _limits(self):
        z, i, si, s0 = self.inner.limits
        return Limits(_recip(s0), _recip(si), _recip(i), _recip(z))

    def text(self):
        return f"dual({self.inner.text()})"


def _first(*vals: float) -> float:
    for v in vals:
        if not math.isnan(v):
            return v
    return _NAN


def _tpow_limit_zero(n: int) -> float:
    return 0.0 if n > 0 else (1.0 if n == 0 else _INF)


def _tpow_limit_inf(n: int) -> float:
    return _INF if n > 0 else (1.0 if n == 0 else 0.0)


@dataclass(frozen=True, eq=True)
class TPowTimes(ScalarFn):
    """t^n f(t) for an integer n (negative n divides by a power of t)."""

    n: int
    inner: ScalarFn

    def __post_init__(self):
        if int(self.n) != self.n:
            raise DomainViolation("tpow exponent must be an integer")
        object.__setattr__(self, "n", int(self.n))

    def _f(self, t):
        return t**self.n * self.inner._f(t)

    def _limits(self):
        z, i, si, s0 = self.inner.limits
        n = self.n
        # t^n f = t^(n+1) (f/t): the second factorization decides some 0*inf cases
        return Limits(
            _first(_mul(_tpow_limit_zero(n), z), _mul(_tpow_limit_zero(n + 1), s0)),
            _first(_mul(_tpow_limit_inf(n), i), _mul(_tpow_limit_inf(n + 1), si)),
            _first(_mul(_tpow_limit_inf(n - 1), i), _mul(_tpow_limit_inf(n), si)),
            _first(_mul(_tpow_limit_zero(n - 1), z), _mul(_tpow_limit_zero(n), s0)),
        )

    def text(self):
        return f"tpow({self.n},{self.inner.text()})"


@dataclass(frozen=True, eq=True)
class Subst(ScalarFn):
    """f(t^{1/p})^p"""

    p: float
    inner: ScalarFn

    def __post_init__(self):
        if not self.p > 0:
            raise DomainViolation("subst exponent must be positive")

    def _f(self, t):
        return self.inner._f(t ** (1.0 / self.p)) ** self.p

    def _limits(self):
        return Limits(*(_pow(x, self.p) for x in self.inner.limits))

    def text(self):
        return f"subst({_fmt(self.p)},{self.inner.text()})"


@dataclass(frozen=True, eq=True)
class Affine(ScalarFn):
    """a + b t - f(t)"""

    a: float
    b: float
    inner: ScalarFn

    def _f(self, t):
        return self.a + self.b * t - self.inner._f(t)

    def _limits(self):
        z, i, si, s0 = self.inner.limits
        zero = self.a - z
        slope_inf = self.b - si if not math.isnan(si) else _NAN
        inf = _INF if slope_inf > 0 else _NAN
        if math.isnan(zero):
            slope_zero = _NAN
        elif zero > 0:
            slope_zero = _INF
        else:
            slope_zero = _NAN
        return Limits(zero, inf, slope_inf, slope_zero)

    def text(self):
        return f"affine({_fmt(self.a)},{_fmt(self.b)},{self.inner.text()})"


@dataclass(frozen=True, eq=True)
class NumericInverse(ScalarFn):
    """Inverse function of t -> t^n f(t), computed by bisection."""

    n: int
    inner: ScalarFn

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 0:
            raise DomainViolation("ninv needs an integer n >= 0")
        object.__setattr__(self, "n", int(self.n))

    def _f(self, t):
        return inverse_monotone(self.n, self.inner, t)

    def _limits(self):
        fwd = TPowTimes(self.n, self.inner).limits
        return Limits(
            0.0 if fwd.zero == 0 else _NAN,
            _INF if math.isinf(fwd.inf) else _NAN,
            _recip(fwd.slope_inf),
            _recip(fwd.slope_zero),
        )

    def text(self):
        return f"ninv({self.n},{self.inner.text()})"


# ---------------------------------------------------------------------------
# transforms


def transpose(f: ScalarFn) -> ScalarFn:
    return Transpose(f)


def adjoint(f: ScalarFn) -> ScalarFn:
    return Adjoint(f)


def dual(f: ScalarFn) -> ScalarFn:
    return Dual(f)


def times_t(f: ScalarFn, n: int = 1) -> ScalarFn:
    """t^n f, folding powers where possible."""
    if isinstance(f, Power):
        return Power(f.alpha + n)
    if isinstance(f, TPowTimes):
        m = f.n + n
        return f.inner if m == 0 else TPowTimes(m, f.inner)
    return TPowTimes(n, f)


def divide_by_t(f: ScalarFn) -> ScalarFn:
    """The function g with f = t g."""
    return times_t(f, -1)


def reciprocal(f: ScalarFn) -> ScalarFn:
    """1/f, written as the adjoint of f(1/t)."""
    return Adjoint(compose_inverse_arg(f))


def compose_inverse_arg(f: ScalarFn) -> ScalarFn:
    """f(1/t), written as the transpose of f divided by t."""
    return divide_by_t(Transpose(f))


# ---------------------------------------------------------------------------
# scalar numerics


def deriv_at_one(f, h: float = 1e-5) -> float:
    """Central difference at t = 1 with one Richardson step."""
    ev = f.eval if hasattr(f, "eval") else f
    d1 = (ev(1.0 + h) - ev(1.0 - h)) / (2 * h)
    h2 = h / 2
    d2 = (ev(1.0 + h2) - ev(1.0 - h2)) / (2 * h2)
    return float((4 * d2 - d1) / 3)


def inverse_monotone(n: int, h: ScalarFn, y):
    """Solve t^n h(t) = y for increasing t -> t^n h(t).

    Brackets start at ``[y^(1/(n+1))/2, 2 y^(1/(n+1))]`` and are widened by
    doubling, then Illinois false-position steps run until the residual is
    at most ``1e-13 * y`` or the bracket cannot be split further.

    Raises
    ------
    InverseNotBracketed
        If some target is not bracketed after 200 doublings.
    """
    y_arr = np.asarray(y, dtype=float)
    scalar = y_arr.ndim == 0
    y_arr = np.atleast_1d(y_arr)
    if np.any(y_arr <= 0):
        raise DomainViolation("inverse target must be positive")
    g = lambda t: t**n * h.eval(t)
    root = y_arr ** (1.0 / (n + 1))
    lo = root / 2
    hi = root * 2
    for _ in range(INVERSE_MAX_DOUBLINGS):
        bad_lo = g(lo) > y_arr
        bad_hi = g(hi) < y_arr
        if not (np.any(bad_lo) or np.any(bad_hi)):
            break
        lo = np.where(bad_lo, lo / 2, lo)
        hi = np.where(bad_hi, hi * 2, hi)
    else:
        if np.any(g(lo) > y_arr) or np.any(g(hi) < y_arr):
            raise InverseNotBracketed(f"could not bracket {y} for ninv({n},{h})")
    tol = 1e-13 * y_arr
    # Illinois false position: keeps the bracket, converges superlinearly
    flo = g(lo) - y_arr
    fhi = g(hi) - y_arr
    side = np.zeros_like(y_arr)
    x = 0.5 * (lo + hi)
    for _ in range(INVERSE_MAX_STEPS):
        den = fhi - flo
        x = np.where(den > 0, hi - fhi * (hi - lo) / np.where(den > 0, den, 1.0), 0.5 * (lo + hi))
        x = np.where((x <= lo) | (x >= hi), 0.5 * (lo + hi), x)
        fx = g(x) - y_arr
        done = (np.abs(fx) <= tol) | (x <= lo) | (x >= hi)
        if np.all(done):
            break
        up = ~done & (fx > 0)
        dn = ~done & (fx <= 0)
        flo = np.where(up & (side > 0), flo / 2, flo)
        fhi = np.where(dn & (side < 0), fhi / 2, fhi)
        hi = np.where(up, x, hi)
        fhi = np.where(up, fx, fhi)
        lo = np.where(dn, x, lo)
        flo = np.where(dn, fx, flo)
        side = np.where(up, 1.0, np.where(dn, -1.0, side))
    return float(x[0]) if scalar else x


# ---------------------------------------------------------------------------
# classification on a probe grid


@dataclass(frozen=True)
class ProbeGrid:
    log_t: tuple = tuple(np.arange(-24, 25) * 0.25)
    p_values: tuple = (1.1, 1.5, 2.0, 3.0, 5.0)
    rel_tol: float = REL_TOL
    matrix_trials: int = 40
    seed: int = 2024

    @property
    def t(self) -> np.ndarray:
        return np.exp(np.asarray(self.log_t))


@dataclass
class FlagResult:
    holds: bool
    witness: dict | None = None

    @property
    def label(self) -> str:
        return "holds-on-sample" if self.holds else "fails-with-witness"


@dataclass
class FnClassReport:
    fn: str
    pmi: FlagResult
    pmd: FlagResult
    geom_convex: FlagResult
    om_plus: FlagResult
    omd_plus: FlagResult
    oc_plus_zero: FlagResult
    grid: dict = field(default_factory=dict)

    def flags(self) -> dict:
        return {
            "pmi": self.pmi.label,
            "pmd": self.pmd.label,
            "geomConvex": self.geom_convex.label,
            "omPlusSampled": self.om_plus.label,
            "omdPlusSampled": self.omd_plus.label,
            "ocPlusZeroSampled": self.oc_plus_zero.label,
        }


def _power_monotone(f: ScalarFn, grid: ProbeGrid, increasing: bool) -> FlagResult:
    t = grid.t
    for p in grid.p_values:
        for q in (p, 1.0 / p):
            lhs = f.eval(t**q)
            rhs = f.eval(t) ** q
            # pmi: f(t^q) >= f(t)^q for q >= 1 and <= for q <= 1
            sign = 1.0 if (q >= 1) == increasing else -1.0
            gap = sign * (lhs - rhs)
            bad = gap < -grid.rel_tol * np.maximum(np.abs(lhs), np.abs(rhs))
            if np.any(bad):
                i = int(np.argmax(bad))
                return FlagResult(False, {"t": float(t[i]), "p": float(q),
                                          "f(t^p)": float(lhs[i]), "f(t)^p": float(rhs[i])})
    return FlagResult(True)


def _geom_convex(f: ScalarFn, grid: ProbeGrid) -> FlagResult:
    x = np.asarray(grid.log_t)
    lf = np.log(f.eval(np.exp(x)))
    mid = 2 * lf[1:-1]
    side = lf[:-2] + lf[2:]
    bad = mid > side + grid.rel_tol * (1 + np.abs(lf[1:-1]))
    if np.any(bad):
        i = int(np.argmax(bad)) + 1
        return FlagResult(False, {"t": float(np.exp(x[i])), "step": float(x[1] - x[0])})
    return FlagResult(True)


def _ordered_pairs(grid: ProbeGrid):
    """Random 0 < A <= B pairs in dimensions 2 and 3."""
    out = []
    for k in range(grid.matrix_trials):
        n = 2 + (k % 2)
        s = Stream(grid.seed, k, "classify")
        q = orthogonal(s, n)
        la = s.log_uniform(1e-2, 1e2, n)
        a = (q * la) @ q.T
        g = s.normal(n * n).reshape(n, n)
        d = g @ g.T * float(s.log_uniform(1e-2, 1e1)[0])
        out.append((_sym(a), _sym(a + d)))
    return out


def _op_order(x: SymMatrix, y: SymMatrix, tol: float) -> float:
    """Normalized margin of x <= y (negative means violated)."""
    scale = max(1.0, float(np.max(np.abs(x.a))), float(np.max(np.abs(y.a))))
    return lambda_min(y - x) / scale


def _matrix_flag(f: ScalarFn, grid: ProbeGrid, kind: str, tol: float = 1e-8) -> FlagResult:
    if kind == "ocz" and f.value_at_zero != 0.0:
        return FlagResult(False, {"reason": "f(0+) is not 0", "f(0+)": f.limits.zero})
    for a, b in _ordered_pairs(grid):
        fa, fb = apply_fn(f, a), apply_fn(f, b)
        if kind == "om":
            m = _op_order(fa, fb, tol)
        elif kind == "omd":
            m = _op_order(fb, fa, tol)
        else:
            mid = apply_fn(f, _sym(0.5 * (a.a + b.a)))
            m = _op_order(mid, _sym(0.5 * (fa.a + fb.a)), tol)
        if m < -tol:
            return FlagResult(False, {"A": a.to_dict(), "B": b.to_dict(), "margin": m})
    return FlagResult(True)


def classify(f: ScalarFn, grid: ProbeGrid | None = None) -> FnClassReport:
    """Sampled pmi/pmd, geometric convexity and operator monotonicity flags."""
    grid = grid or ProbeGrid()
    return FnClassReport(
        fn=f.text(),
        pmi=_power_monotone(f, grid, True),
        pmd=_power_monotone(f, grid, False),
        geom_convex=_geom_convex(f, grid),
        om_plus=_matrix_flag(f, grid, "om"),
        omd_plus=_matrix_flag(f, grid, "omd"),
        oc_plus_zero=_matrix_flag(f, grid, "ocz"),
        grid={"log_t": [grid.log_t[0], grid.log_t[-1], len(grid.log_t)],
              "p": list(grid.p_values), "rel_tol": grid.rel_tol},
    )


def is_pmi(f: ScalarFn, grid: ProbeGrid | None = None) -> bool:
    return _power_monotone(f, grid or ProbeGrid(), True).holds


def is_pmd(f: ScalarFn, grid: ProbeGrid | None = None) -> bool:
    return _power_monotone(f, grid or ProbeGrid(), False).holds


# ---------------------------------------------------------------------------
# descriptor text grammar

GRAMMAR = """\
fn     := head | head '(' args ')'
heads  := pow(a) | warith(w) | wharm(w) | geodesic(a:w, ...) | logmean
        | halfsum(a) | transpose(fn) | adjoint(fn) | dual(fn)
        | tpow(n, fn) | subst(p, fn) | affine(a, b, fn) | ninv(n, fn)
numbers may be written as decimals or fractions like 1/2"""

_TOKEN = re.compile(r"\s*(?:(?P<num>[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?(?:/\d+(?:\.\d*)?)?)|(?P<name>[A-Za-z_]+)|(?P<sym>[(),:]))")


def _tokenize(text: str):
    pos, out = 0, []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise FnParseError(f"unexpected character at {pos}: {text[pos:]!r}")
        kind = m.lastgroup
        out.append((kind, m.group(kind)))
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    return out


class _Parser:
    def __init__(self, text):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self, kind=None, value=None):
        tok = self.peek()
        if tok[0] is None or (kind and tok[0] != kind) or (value and tok[1] != value):
            raise FnParseError(f"expected {value or kind}, got {tok[1]!r}")
        self.i += 1
        return tok[1]

    def number(self) -> float:
        s = self.take("num")
        if "/" in s:
            a, b = s.split("/")
            return float(a) / float(b)
        return float(s)

    def fn(self) -> ScalarFn:
        head = self.take("name").lower()
        if head == "logmean":
            if self.peek() == ("sym", "("):
                self.take("sym", "(")
                self.take("sym", ")")
            return LogMean()
        self.take("sym", "(")
        if head in ("pow", "power"):
            out = Power(self.number())
        elif head == "warith":
            out = WeightedArith(self.number())
        elif head == "wharm":
            out = WeightedHarm(self.number())
        elif head == "halfsum":
            out = HalfSum(self.number())
        elif head == "geodesic":
            atoms = []
            while True:
                a = self.number()
                self.take("sym", ":")
                atoms.append((a, self.number()))
                if self.peek() != ("sym", ","):
                    break
                self.take("sym", ",")
            out = Geodesic(tuple(atoms))
        elif head in ("transpose", "adjoint", "dual"):
            inner = self.fn()
            out = {"transpose": Transpose, "adjoint": Adjoint, "dual": Dual}[head](inner)
        elif head in ("tpow", "ninv"):
            n = self.number()
            self.take("sym", ",")
            inner = self.fn()
            out = (TPowTimes if head == "tpow" else NumericInverse)(int(n), inner)
        elif head == "subst":
            p = self.number()
            self.take("sym", ",")
            out = Subst(p, self.fn())
        elif head == "affine":
            a = self.number()
            self.take("sym", ",")
            b = self.number()
            self.take("sym", ",")
            out = Affine(a, b, self.fn())
        else:
            raise FnParseError(f"unknown function head {head!r}")
        self.take("sym", ")")
        return out


def parse_fn(text: str) -> ScalarFn:
    """Parse descriptor text such as ``tpow(2, geodesic(0:0.5,1:0.5))``."""
    p = _Parser(text)
    try:
        out = p.fn()
    except DomainViolation as exc:
        raise FnParseError(str(exc)) from exc
    if p.i != len(p.toks):
        raise FnParseError(f"trailing input in {text!r}")
    return out


def catalog() -> dict[str, ScalarFn]:
    """Named representatives used by the suites."""
    return {
        "pow(0.5)": Power(0.5),
        "pow(0.3)": Power(0.3),
        "pow(2)": Power(2.0),
        "pow(-0.5)": Power(-0.5),
        "warith(0.5)": WeightedArith(0.5),
        "warith(0.3)": WeightedArith(0.3),
        "wharm(0.5)": WeightedHarm(0.5),
        "geodesic": Geodesic(((0.0, 0.25), (0.5, 0.5), (1.0, 0.25))),
        "logmean": LogMean(),
        "halfsum(0.3)": HalfSum(0.3),
        "transpose(logmean)": Transpose(LogMean()),
        "adjoint(warith(0.5))": Adjoint(WeightedArith(0.5)),
        "dual(logmean)": Dual(LogMean()),
        "tpow(1,pow(0.5))": TPowTimes(1, Power(0.5)),
        "tpow(2,warith(0.5))": TPowTimes(2, WeightedArith(0.5)),
        "subst(0.5,logmean)": Subst(0.5, LogMean()),
        "ninv(1,pow(1))": NumericInverse(1, Power(1.0)),
    }
