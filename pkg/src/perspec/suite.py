"""Randomized inequality checks, exponent-region scans and a 2x2 counterexample search.

Every check draws its matrices from :mod:`perspec.randgen`, so a run is a
pure function of its :class:`SuiteConfig`. Each trial returns a relative
violation (0 when the inequality holds exactly); a check fails when the
largest violation exceeds its tolerance, and the worst trial is stored as a
self-contained witness that :func:`replay_witness` can re-evaluate.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np

from .funclib import (
    InverseNotBracketed,
    Power,
    ProbeGrid,
    ScalarFn,
    TPowTimes,
    Transpose,
    classify,
    compose_inverse_arg,
    divide_by_t,
    inverse_monotone,
    is_pmd,
    is_pmi,
    parse_fn,
    reciprocal,
    times_t,
)
from .majorization import LOG_TOL, log_majorize, log_supermajorize, weak_log_majorize
from .matcore import (
    DomainViolation,
    NonConvergence,
    PerspecError,
    SupportViolation,
    SymMatrix,
    _sym,
    apply_fn,
    as_array,
    eigh,
    lambda_max,
    lambda_min,
    mat_pow,
    op_norm,
)
from .perspective import (
    LOG,
    analyze_sequence,
    d_ratio,
    dotted_exp,
    eps_limit,
    kantorovich,
    log_euclidean,
    loewner_margin,
    mean_sigma,
    perspective,
    perspective_singular,
    weighted_geo,
)
from .randgen import (
    COND_CAP,
    Stream,
    TrialSpec,
    _label_code,
    _mix_int,
    rand_ordered_pair,
    rand_psd_rank,
    rand_spd,
)

DEFAULT_TOL = 1e-8
LIMIT_TOL = 1e-5
# derived matrices (powers, congruences) must keep their spectra inside the
# zero-eigenvalue threshold; the per-trial condition cap is set from this range
DYN_RANGE = 1e9
CERT_MARGIN = 1e-8
_NUMERIC = (DomainViolation, NonConvergence, InverseNotBracketed, FloatingPointError, OverflowError)


class UnknownCheckId(PerspecError, KeyError):
    """Check id not present in the registry."""


class _Skip(Exception):
    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


@dataclass(frozen=True)
class SuiteConfig:
    trials: int = 200
    dim_min: int = 2
    dim_max: int = 6
    cond_max: float = 1e3
    seed: int = 0
    tol: float = DEFAULT_TOL
    fn: str | None = None
    p: tuple | None = None
    threads: int | None = None

    def __post_init__(self):
        if self.trials < 1:
            raise DomainViolation("trials must be >= 1")
        if not 1 <= self.dim_min <= self.dim_max <= 64:
            raise DomainViolation("need 1 <= dim_min <= dim_max <= 64")
        if self.cond_max < 1:
            raise DomainViolation("cond_max must be >= 1")
        if self.tol <= 0:
            raise DomainViolation("tol must be positive")
        if self.p is not None and any(float(p) <= 0 for p in self.p):
            raise DomainViolation("p values must be positive")

    def to_dict(self) -> dict:
        d = asdict(self)
        d.pop("threads")
        d["p"] = None if self.p is None else [float(p) for p in self.p]
        return d


@dataclass
class CheckOutcome:
    check_id: str
    status: str
    trials: int
    max_rel_violation: float
    witness: dict | None
    tolerance_used: float
    reason: str | None = None
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "checkId": self.check_id,
            "status": self.status,
            "trials": self.trials,
            "maxRelViolation": _clean_float(self.max_rel_violation),
            "toleranceUsed": self.tolerance_used,
            "reason": self.reason,
            "witness": self.witness,
            "details": _encode(self.details),
        }


@dataclass(frozen=True)
class Check:
    check_id: str
    summary: str
    domain: str
    suites: tuple
    cases: Callable | None = None
    make: Callable | None = None
    evaluate: Callable | None = None
    runner: Callable | None = None
    tol: float | None = None


REGISTRY: dict[str, Check] = {}


def _register(check_id, summary, domain, suites, **kw):
    REGISTRY[check_id] = Check(check_id, summary, domain, tuple(suites), **kw)


# ---------------------------------------------------------------------------
# small helpers


def _clean_float(x):
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return x


def _encode(v):
    if isinstance(v, SymMatrix):
        return v.to_dict()
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        return _clean_float(v)
    if isinstance(v, np.ndarray):
        return [_encode(x) for x in v.tolist()]
    if isinstance(v, (list, tuple)):
        return [_encode(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _encode(x) for k, x in v.items()}
    return v


def _decode_inputs(d: dict) -> dict:
    out = {}
    for k, v in d.items():
        if isinstance(v, dict) and "data" in v:
            out[k] = SymMatrix.from_dict(v)
        elif isinstance(v, list) and v and isinstance(v[0], dict):
            out[k] = [SymMatrix.from_dict(x) for x in v]
        else:
            out[k] = v
    return out


@lru_cache(maxsize=256)
def _fn(text: str) -> ScalarFn:
    return parse_fn(text)


def _txt(s: str) -> str:
    """Canonical descriptor text."""
    return _fn(s).text()


def _alpha(f: ScalarFn) -> float:
    """f'(1), exact for powers and t^n times a power."""
    if isinstance(f, Power):
        return float(f.alpha)
    if isinstance(f, TPowTimes):
        return f.n + _alpha(f.inner)
    return float(f.deriv_at_one)


def _eye(n: int, s: float = 1.0) -> SymMatrix:
    return _sym(s * np.eye(n))


def _eigs(m) -> np.ndarray:
    return np.asarray(eigh(m).eigenvalues, dtype=float)


def _cond(m) -> float:
    w = _eigs(m)
    return float(w[0] / w[-1])


def _whiten(b, a) -> SymMatrix:
    """``B^{-1/2} A B^{-1/2}``."""
    ib = mat_pow(b, -0.5).a
    return _sym(ib @ as_array(a) @ ib)


def _pw(m, p: float) -> SymMatrix:
    return mat_pow(m, p)


def _P(f: ScalarFn, a, b) -> SymMatrix:
    """Perspective, falling back to the singular closed form."""
    try:
        return perspective(f, a, b)
    except DomainViolation:
        return perspective_singular(f, a, b)


def _ratio(h: ScalarFn, w: np.ndarray, p: float) -> np.ndarray:
    """Eigenvalues of h(C^p) / h(C)^p from the eigenvalues of C."""
    w = np.asarray(w, dtype=float)
    return np.asarray(h.eval(w**p), dtype=float) / np.asarray(h.eval(w), dtype=float) ** p


def _v_le(x, y) -> float:
    """Normalized violation of ``X <= Y``."""
    return max(0.0, -loewner_margin(x, y))


def _excess(lhs: float, rhs: float) -> float:
    """Relative violation of the scalar inequality ``lhs <= rhs``."""
    den = max(abs(lhs), abs(rhs), 1e-300)
    return max(0.0, (lhs - rhs) / den)


def _v_maj(verdict) -> float:
    """Prefix-slack deficit rescaled so that the verdict tolerance maps to LOG_TOL."""
    worst = 0.0
    for m, t in zip(verdict.margins, verdict.tol):
        if m < 0:
            worst = max(worst, -m * LOG_TOL / t)
    return worst


def _rate(m, scale: float) -> float:
    return op_norm(m) / max(1.0, scale)


# ---------------------------------------------------------------------------
# trial machinery


def _master(seed: int, check_id: str) -> int:
    return _mix_int((int(seed) & ((1 << 64) - 1)) ^ _label_code(check_id))


def _trial_spec(cfg: SuiteConfig, check_id: str, ci: int, t: int, case: dict) -> TrialSpec:
    idx = t + 100000 * ci
    master = _master(cfg.seed, check_id)
    if "cond" in case:
        cap = min(float(case["cond"]), COND_CAP)
    else:
        amp = max(1.0, float(case.get("amp", 1.0)))
        cap = min(cfg.cond_max, COND_CAP, DYN_RANGE ** (1.0 / (2.0 * amp)))
    cap = max(cap, 1.0)
    if t % 8 == 7:
        cond = cap
    else:
        cond = float(Stream(master, idx, "cond").log_uniform(1.0, cap)[0])
    span = cfg.dim_max - cfg.dim_min + 1
    n = max(cfg.dim_min + t % span, int(case.get("min_dim", 1)))
    if "dim" in case:
        n = int(case["dim"])
    return TrialSpec(master, idx, n, cond)


def _threads(cfg: SuiteConfig) -> int:
    if cfg.threads is not None:
        return max(1, int(cfg.threads))
    env = os.environ.get("PERSPEC_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise DomainViolation(f"PERSPEC_THREADS must be an integer, got {env!r}") from None
    return os.cpu_count() or 1


def _pmap(fn, items, cfg: SuiteConfig) -> list:
    items = list(items)
    k = _threads(cfg)
    if k <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=k) as ex:
        return list(ex.map(fn, items))


def _one_trial(check: Check, cfg: SuiteConfig, ci: int, case: dict, t: int):
    spec = _trial_spec(cfg, check.check_id, ci, t, case)
    try:
        inputs = check.make(spec, case)
        v, info = check.evaluate(case, inputs)
    except _NUMERIC as exc:
        return None, f"{type(exc).__name__}: {exc}", spec
    return (float(v), inputs, info), None, spec


def _witness(check_id: str, case: dict, inputs: dict, v: float, cfg: SuiteConfig,
             spec: TrialSpec | None, tol: float, info: dict | None = None) -> dict:
    w = {
        "check": check_id,
        "case": _encode(case),
        "inputs": _encode(inputs),
        "violation": _clean_float(v),
        "seed": int(cfg.seed),
        "tolerance": tol,
    }
    if spec is not None:
        w["trial"] = int(spec.trial_index)
        w["dim"] = int(spec.dim)
        w["cond"] = float(spec.cond)
    if info:
        w["info"] = _encode(info)
    return w


def _loop(check: Check, cfg: SuiteConfig, cases: list[dict], tol: float) -> dict:
    """Run every case for ``cfg.trials`` trials and aggregate."""
    worst, witness, total, skips = 0.0, None, 0, 0
    per_case = []
    for ci, case in enumerate(cases):
        ntr = int(case.get("trials", cfg.trials))
        res = _pmap(lambda t: _one_trial(check, cfg, ci, case, t), range(ntr), cfg)
        cw, cskip, maxinfo, first_err = 0.0, 0, {}, None
        for out, err, spec in res:
            if out is None:
                cskip += 1
                first_err = first_err or err
                continue
            v, inputs, info = out
            total += 1
            for k, x in info.items():
                if isinstance(x, (float, int)) and not isinstance(x, bool):
                    maxinfo[k] = max(maxinfo.get(k, -math.inf), float(x))
            cw = max(cw, v)
            if v > worst:
                worst = v
                if v > tol:
                    witness = _witness(check.check_id, case, inputs, v, cfg, spec, tol, info)
        skips += cskip
        entry = {"case": case, "trials": ntr - cskip, "maxRelViolation": cw}
        if maxinfo:
            entry["max"] = maxinfo
        if cskip:
            entry["numericSkips"] = cskip
            entry["firstSkipReason"] = first_err
        per_case.append(entry)
    return {"worst": worst, "witness": witness, "trials": total, "skips": skips, "cases": per_case}


def _outcome_from_loop(check_id: str, agg: dict, tol: float, extra: dict | None = None) -> CheckOutcome:
    details = {"cases": agg["cases"]}
    if agg["skips"]:
        details["numericSkips"] = agg["skips"]
    if extra:
        details.update(extra)
    if agg["trials"] == 0:
        return CheckOutcome(check_id, "skipped", 0, 0.0, None, tol,
                            "numeric: every trial left the representable range", details)
    status = "fail" if agg["worst"] > tol else "pass"
    return CheckOutcome(check_id, status, agg["trials"], agg["worst"],
                        agg["witness"] if status == "fail" else None, tol, None, details)


def _standard_runner(check: Check, cfg: SuiteConfig) -> CheckOutcome:
    tol = check.tol if check.tol is not None else cfg.tol
    try:
        cases = check.cases(cfg)
    except _Skip as s:
        return CheckOutcome(check.check_id, "skipped", 0, 0.0, None, tol, s.reason)
    agg = _loop(check, cfg, cases, tol)
    return _outcome_from_loop(check.check_id, agg, tol)


def run_check(check_id: str, cfg: SuiteConfig | None = None) -> CheckOutcome:
    """Execute one registry check."""
    cfg = cfg or SuiteConfig()
    if check_id not in REGISTRY:
        raise UnknownCheckId(check_id)
    check = REGISTRY[check_id]
    if check.runner is not None:
        return check.runner(check, cfg)
    return _standard_runner(check, cfg)


def replay_witness(w: dict) -> dict:
    """Re-evaluate a stored witness; returns the violation and both sides."""
    try:
        check = REGISTRY[w["check"]]
        case = dict(w["case"])
        inputs = _decode_inputs(w["inputs"])
    except (KeyError, TypeError, ValueError) as exc:
        raise DomainViolation(f"malformed witness: {exc}") from exc
    if check.evaluate is None:
        raise DomainViolation(f"check {w['check']} has no replayable evaluator")
    try:
        v, info = check.evaluate(case, inputs)
    except (KeyError, TypeError, AttributeError, IndexError) as exc:
        raise DomainViolation(f"malformed witness: {exc!r}") from exc
    return {"check": w["check"], "violation": float(v), "info": info,
            "tolerance": float(w.get("tolerance", DEFAULT_TOL)),
            "recorded": w.get("violation")}


# ---------------------------------------------------------------------------
# input generators


def _gen_pd2(spec: TrialSpec, case: dict) -> dict:
    a = rand_spd(spec, "A")
    b = rand_spd(spec, "B")
    amp = max(1.0, float(case.get("amp", 1.0)))
    rel = float(spec.stream("rel").log_uniform(0.1, 10.0)[0]) ** (1.0 / amp)
    return {"A": a * rel, "B": b}


def _gen_ordered(spec: TrialSpec, case: dict) -> dict:
    """PSD pair with ``s(A) <= s(B)`` (swapped when ``case['mirror']``)."""
    n = spec.dim
    drop = 1 + (spec.trial_index % 2)
    r = max(1, n - drop)
    a, b, _ = rand_ordered_pair(spec.child(rank=r), "ord")
    if case.get("mirror"):
        a, b = b, a
    return {"A": a, "B": b}


def _gen_one(spec: TrialSpec, case: dict) -> dict:
    return {"C": rand_spd(spec, "C")}


# ---------------------------------------------------------------------------
# case builders and premise checks


def _fns(cfg: SuiteConfig, default, require: Callable | None = None) -> list[str]:
    if cfg.fn is None:
        return [_txt(s) for s in default]
    try:
        f = _fn(cfg.fn)
    except PerspecError as exc:
        raise _Skip(f"precondition: cannot parse {cfg.fn!r}: {exc}") from None
    if require is not None:
        why = require(f)
        if why:
            raise _Skip(f"precondition: {why}")
    return [f.text()]


def _ps(cfg: SuiteConfig, default, ok: Callable = lambda p: p > 0, what: str = "p > 0") -> list[float]:
    ps = [float(p) for p in (cfg.p if cfg.p is not None else default)]
    keep = [p for p in ps if ok(p)]
    if not keep:
        raise _Skip(f"precondition: no p in {what}")
    return keep


def _kind(f: ScalarFn) -> str | None:
    if is_pmi(f):
        return "pmi"
    if is_pmd(f):
        return "pmd"
    return None


def _need_kind(f):
    return None if _kind(f) else f"{f.text()} is neither pmi nor pmd on the probe grid"


def _need_pmi(f):
    return None if is_pmi(f) else f"{f.text()} is not pmi on the probe grid"


def _need_om(f):
    r = classify(f)
    if not r.om_plus.holds:
        return f"{f.text()} is not operator monotone on the sample"
    return None if f.normalized else f"{f.text()} is not normalized at 1"


def _need_omd_or_ocz(f):
    r = classify(f)
    if r.omd_plus.holds or r.oc_plus_zero.holds:
        return None
    return f"{f.text()} is neither operator monotone decreasing nor operator convex with f(0+)=0"


def _cls(f: ScalarFn) -> str:
    """'omd' for decreasing functions, 'oc' for operator convex ones with f(0+)=0."""
    return "oc" if f.value_at_zero == 0.0 else "omd"


def _kind_of(text: str) -> str:
    k = _kind(_fn(text))
    return k or "none"


OM_PMI = ["pow(1/2)", "warith(1/2)", "logmean", "halfsum(0.3)"]
OM_PMD = ["pow(1/2)", "wharm(1/2)", "adjoint(logmean)"]
MEANS_ALL = ["pow(1/2)", "warith(1/2)", "wharm(1/2)", "logmean", "halfsum(0.3)"]


def _g_of(h: str) -> str:
    return compose_inverse_arg(_fn(h)).text()


def _f_of(h: str, n: int = 1) -> str:
    return times_t(_fn(h), n).text()


G_PMI = ["pow(-1/2)", _g_of("warith(1/2)"), _g_of("logmean")]
G_PMD = ["pow(-1/2)", _g_of("wharm(1/2)")]
F_PMI = [_f_of("warith(1/2)"), _f_of("logmean"), "pow(1.5)"]
F_PMD = [_f_of("wharm(1/2)"), "pow(1.5)"]
GF_ALL = list(dict.fromkeys([_txt(s) for s in G_PMI + G_PMD + F_PMI + F_PMD]))

P_LOW = [round(0.1 * k, 1) for k in range(1, 11)]
# default grid for the (0, 1] checks in a suite run; --p widens it
P_LOW_DEFAULT = [0.25, 0.5, 0.75, 1.0]
P_HIGH = [1.0, 2.0, 4.0, 8.0]


def _combos(fns, ps, **extra) -> list[dict]:
    out = []
    for f in fns:
        for p in ps:
            d = {"fn": f, "p": float(p), "amp": max(1.0, float(p))}
            d.update(extra)
            out.append(d)
    return out


# ---------------------------------------------------------------------------
# Ando-Hiai norm forms


def _ev_ah(case: dict, m: dict):
    f = _fn(case["fn"])
    p = float(case["p"])
    a, b = m["A"], m["B"]
    P = _P(f, a, b)
    Pp = _P(f, _pw(a, p), _pw(b, p))
    if case.get("mode", "AH") == "AH":
        rhs = op_norm(P) ** p
        lhs = op_norm(Pp)
        return _excess(lhs, rhs), {"lhs": lhs, "rhs": rhs}
    low = lambda_min(P) ** p
    lowp = lambda_min(Pp)
    v = max(0.0, (low - lowp) / max(low, op_norm(Pp), 1e-300))
    return v, {"lhs": low, "rhs": lowp}


def _cases_ah(cfg):
    if cfg.fn is not None:
        f = _fns(cfg, [])[0]
        return _combos([f], _ps(cfg, [0.5, 1.0, 2.0]), mode="AH")
    rows = [
        ("pow(1/2)", [1.0, 1.5, 2.0, 3.0, 4.0]),
        ("pow(-1/2)", [0.25, 0.5, 0.75, 1.0]),
        ("pow(2)", [0.25, 0.5, 1.0]),
        ("wharm(1/2)", [1.0, 2.0, 4.0]),
        (_f_of("warith(1/2)"), [0.25, 0.5, 1.0]),
        (_g_of("warith(1/2)"), [0.25, 0.5, 1.0]),
    ]
    out = []
    for f, ps in rows:
        if cfg.p is not None:
            ps = [float(p) for p in cfg.p if any(abs(p - q) < 1e-12 for q in ps)]
        out += _combos([_txt(f)], ps, mode="AH")
    if not out:
        raise _Skip("precondition: no requested p lies in a guaranteed region of the default functions")
    return out


def _cases_ah2(cfg):
    if cfg.fn is not None:
        f = _fns(cfg, [])[0]
        return _combos([f], _ps(cfg, [0.5, 1.0, 2.0]), mode="AH2")
    rows = [
        ("warith(1/2)", [1.0, 2.0, 4.0]),
        ("logmean", [1.0, 2.0]),
        ("pow(1/2)", [1.0, 2.0, 4.0]),
        (reciprocal(_fn("warith(1/2)")).text(), [0.25, 0.5, 1.0]),
    ]
    out = []
    for f, ps in rows:
        if cfg.p is not None:
            ps = [float(p) for p in cfg.p if any(abs(p - q) < 1e-12 for q in ps)]
        out += _combos([_txt(f)], ps, mode="AH2")
    if not out:
        raise _Skip("precondition: no requested p lies in a guaranteed region of the default functions")
    return out


_register("AH-NORM", "norm form ||P_f(A^p,B^p)|| <= ||P_f(A,B)||^p of the Ando-Hiai implication",
          "f > 0 on (0,inf); p > 0", ("core", "perspectives"),
          cases=_cases_ah, make=_gen_pd2, evaluate=_ev_ah)
_register("AH2-NORM", "mirrored form lambda_min(P_f(A^p,B^p)) >= lambda_min(P_f(A,B))^p",
          "f > 0 on (0,inf); p > 0", ("core", "perspectives"),
          cases=_cases_ah2, make=_gen_pd2, evaluate=_ev_ah)


# ---------------------------------------------------------------------------
# two-sided bounds for operator means


def _mean_pair(h, a, b, p):
    M = mean_sigma(h, a, b)
    Mp = mean_sigma(h, _pw(a, p), _pw(b, p))
    return M, Mp


def _gap(x, y) -> float:
    return op_norm(_sym(as_array(x) - as_array(y))) / max(1.0, op_norm(x), op_norm(y))


def _ev_thm32(case, m):
    h = _fn(case["fn"])
    p = float(case["p"])
    a, b = m["A"], m["B"]
    M, Mp = _mean_pair(h, a, b, p)
    r = _ratio(h, _eigs(_whiten(a, b)), p)
    form = int(case["form"])
    if form == 71:
        bound = M * (r.min() * lambda_min(M) ** (p - 1))
        v = _v_le(bound, Mp)
    elif form == 72:
        bound = M * (r.max() * op_norm(M) ** (p - 1))
        v = _v_le(Mp, bound)
    elif form == 73:
        bound = M * (r.max() * lambda_min(M) ** (p - 1))
        v = _v_le(Mp, bound)
    else:
        bound = M * (r.min() * op_norm(M) ** (p - 1))
        v = _v_le(bound, Mp)
    return v, {"gap": _gap(Mp, bound)}


def _cases_thm32(form):
    hi = form in (71, 72)

    def cases(cfg):
        fns = _fns(cfg, MEANS_ALL, _need_om)
        if hi:
            ps = _ps(cfg, [1.0, 1.3, 1.7, 2.0], lambda p: 1 <= p <= 2, "[1, 2]")
        else:
            ps = _ps(cfg, [0.3, 0.6, 0.9, 1.0], lambda p: 0 < p <= 1, "(0, 1]")
        return _combos(fns, ps, form=form)

    return cases


for _form, _txt_desc, _dom in [
    (71, "A^p s B^p >= lambda_min(R) lambda_min(M)^(p-1) M with R = h(C^p)/h(C)^p", "h in OM_+^1; 1 <= p <= 2"),
    (72, "A^p s B^p <= ||R|| ||M||^(p-1) M", "h in OM_+^1; 1 <= p <= 2"),
    (73, "A^p s B^p <= ||R|| lambda_min(M)^(p-1) M", "h in OM_+^1; 0 < p <= 1"),
    (74, "A^p s B^p >= lambda_min(R) ||M||^(p-1) M", "h in OM_+^1; 0 < p <= 1"),
]:
    _register(f"THM32-{_form}", _txt_desc + ", C = A^-1/2 B A^-1/2, M = A s B", _dom,
              ("core", "means"), cases=_cases_thm32(_form), make=_gen_pd2, evaluate=_ev_thm32)


def _ev_cor33(case, m):
    h = _fn(case["fn"])
    p = float(case["p"])
    M, Mp = _mean_pair(h, m["A"], m["B"], p)
    form = int(case["form"])
    if form in (75, 76):
        bound = M * (lambda_min(M) ** (p - 1))
    else:
        bound = M * (op_norm(M) ** (p - 1))
    if form in (75, 78):
        v = _v_le(bound, Mp)
    else:
        v = _v_le(Mp, bound)
    return v, {"gap": _gap(Mp, bound)}


def _cases_cor33(form):
    pmi = form in (75, 76)
    hi = form in (75, 77)

    def cases(cfg):
        need = (lambda f: _need_om(f) or _need_pmi(f)) if pmi else \
            (lambda f: _need_om(f) or (None if is_pmd(f) else f"{f.text()} is not pmd on the probe grid"))
        fns = _fns(cfg, OM_PMI if pmi else OM_PMD, need)
        if hi:
            ps = _ps(cfg, [1.0, 1.5, 2.0, 2.5, 3.0, 4.0, 8.0], lambda p: p >= 1, "[1, inf)")
        else:
            ps = _ps(cfg, P_LOW_DEFAULT, lambda p: 0 < p <= 1, "(0, 1]")
        return _combos(fns, ps, form=form)

    return cases


for _form, _txt_desc, _dom in [
    (75, "pmi h: A^p s B^p >= lambda_min(M)^(p-1) M", "h pmi in OM_+^1; p >= 1"),
    (76, "pmi h: A^p s B^p <= lambda_min(M)^(p-1) M", "h pmi in OM_+^1; 0 < p <= 1"),
    (77, "pmd h: A^p s B^p <= ||M||^(p-1) M", "h pmd in OM_+^1; p >= 1"),
    (78, "pmd h: A^p s B^p >= ||M||^(p-1) M", "h pmd in OM_+^1; 0 < p <= 1"),
]:
    _register(f"COR33-{_form}", _txt_desc, _dom, ("core", "means"),
              cases=_cases_cor33(_form), make=_gen_pd2, evaluate=_ev_cor33)


def _ev_prop34(case, m):
    h = _fn(case["fn"])
    p = float(case["p"])
    a, b = m["A"], m["B"]
    M, Mp = _mean_pair(h, a, b, p)
    x = _whiten(_pw(a, p), _pw(b, p))
    w = _eigs(x) ** (1.0 / p)  # eigenvalues of C_p
    r = _ratio(h, w, p)
    lower = M * (r.min() * lambda_min(M) ** (p - 1))
    upper = M * (r.max() * op_norm(M) ** (p - 1))
    return max(_v_le(lower, Mp), _v_le(Mp, upper)), {"gap_lower": _gap(Mp, lower)}


def _cases_prop34(cfg):
    fns = _fns(cfg, MEANS_ALL, _need_om)
    return _combos(fns, _ps(cfg, [1.0, 1.5, 2.0, 3.0, 4.0], lambda p: p >= 1, "[1, inf)"))


_register("PROP34", "two-sided bounds for all p >= 1 with the ratio evaluated at C_p = (A^-p/2 B^p A^-p/2)^(1/p)",
          "h in OM_+^1; p >= 1", ("core", "means"),
          cases=_cases_prop34, make=_gen_pd2, evaluate=_ev_prop34)


# ---------------------------------------------------------------------------
# scalar necessary condition


def _gen_scalar_pair(spec, case):
    f = _fn(case["fn"])
    t = float(spec.stream("t").log_uniform(1e-3, 1e3)[0])
    ft = float(f.eval(t))
    n = spec.dim
    return {"A": _eye(n, t / ft), "B": _eye(n, 1.0 / ft), "t": t}


def _ev_prop35(case, m):
    f = _fn(case["fn"])
    p = float(case["p"])
    t = float(m["t"])
    P = _P(f, m["A"], m["B"])
    Pp = _P(f, _pw(m["A"], p), _pw(m["B"], p))
    scalar = float(f.eval(t**p)) / float(f.eval(t)) ** p
    top = lambda_max(Pp)
    unit_gap = op_norm(_sym(P.a - np.eye(P.n)))
    return _excess(top, 1.0), {"ratio": scalar, "unit_gap": unit_gap, "matrix_vs_scalar": abs(top - scalar) / max(1.0, scalar)}


def _cases_prop35(cfg):
    if cfg.fn is not None:
        return _combos(_fns(cfg, []), _ps(cfg, [0.5, 2.0]))
    rows = [("pow(2)", 0.5), ("pow(-1/2)", 0.5), ("wharm(1/2)", 2.0), ("pow(1/2)", 2.0),
            (_f_of("warith(1/2)"), 0.5), (_g_of("warith(1/2)"), 0.75)]
    return [{"fn": _txt(f), "p": p, "amp": max(1.0, p)} for f, p in rows]


_register("PROP35", "AH at p forces f(t^p) <= f(t)^p: scalar witness A = t/f(t) I, B = I/f(t) with P_f(A,B) = I",
          "(f, p) with p in the exponent region of f", ("core", "perspectives"),
          cases=_cases_prop35, make=_gen_scalar_pair, evaluate=_ev_prop35)


# ---------------------------------------------------------------------------
# cross implications for pmi / pmd h


def _thm37_forms(h: str, kind: str, ps_hi, ps_lo) -> list[dict]:
    f = _fn(h)
    fwd, back = ("AH2", "AH") if kind == "pmi" else ("AH", "AH2")
    rows = [
        ("ii", f.text(), fwd, ps_hi),
        ("iii", reciprocal(f).text(), fwd, ps_lo),
        ("iv", compose_inverse_arg(f).text(), back, ps_lo),
        ("v", times_t(f).text(), back, ps_lo),
    ]
    out = []
    for form, fn, mode, ps in rows:
        for p in ps:
            out.append({"fn": fn, "p": float(p), "mode": mode, "form": form, "base": f.text(),
                        "kind": kind, "amp": max(1.0, float(p))})
    return out


def _cases_thm37(cfg):
    hs = _fns(cfg, ["warith(1/2)", "logmean", "wharm(1/2)"], lambda f: _need_om(f) or _need_kind(f))
    ps_hi = _ps(cfg, P_HIGH, lambda p: p >= 1, "[1, inf)") if cfg.p is None or any(p >= 1 for p in cfg.p) else []
    ps_lo = [p for p in (cfg.p if cfg.p is not None else P_LOW_DEFAULT) if 0 < p <= 1]
    if not ps_hi and not ps_lo:
        raise _Skip("precondition: no usable p")
    out = []
    for h in hs:
        out += _thm37_forms(h, _kind_of(h), ps_hi, ps_lo)
    return out


_register("THM37-EQUIV", "for pmi h: P_h AH2 on [1,inf); P_{1/h} AH2, P_{h(1/t)} AH and P_{th} AH on (0,1] (AH and AH2 swap for pmd h)",
          "h pmi or pmd in OM_+^1", ("core", "perspectives"),
          cases=_cases_thm37, make=_gen_pd2, evaluate=_ev_ah)


def _cases_cor38(cfg):
    if cfg.fn is not None:
        f = _fn(_fns(cfg, [], lambda f: _need_kind(f) or _need_omd_or_ocz(f))[0])
        mode = "AH" if _kind(f) == "pmi" else "AH2"
        return _combos([f.text()], _ps(cfg, P_LOW_DEFAULT, lambda p: 0 < p <= 1, "(0, 1]"), mode=mode)
    ps = _ps(cfg, P_LOW_DEFAULT, lambda p: 0 < p <= 1, "(0, 1]")
    out = []
    for f in G_PMI + F_PMI:
        out += _combos([_txt(f)], ps, mode="AH")
    for f in G_PMD + F_PMD:
        out += _combos([_txt(f)], ps, mode="AH2")
    return out


_register("COR38", "pmi g in OMD_+^1 or pmi f in OC_+^1 with f(0+)=0 satisfy AH on (0,1]; pmd ones satisfy AH2",
          "p in (0, 1]", ("core", "perspectives"),
          cases=_cases_cor38, make=_gen_pd2, evaluate=_ev_ah)


# ---------------------------------------------------------------------------
# conditional bounds (rescaled so the premise is tight)


def _scaled_pp(f, a, b, c, p):
    return _P(f, _pw(a * c, p), _pw(b * c, p))


def _ev_prop39(case, m):
    g = _fn(case["fn"])
    p = float(case["p"])
    a, b = m["A"], m["B"]
    P = _P(g, a, b)
    r = _ratio(g, _eigs(_whiten(b, a)), p)
    n = a.n
    up = _scaled_pp(g, a, b, 1.0 / op_norm(P), p)
    lo = _scaled_pp(g, a, b, 1.0 / lambda_min(P), p)
    v = max(_v_le(up, _eye(n, r.max())), _v_le(_eye(n, r.min()), lo))
    gap = max(abs(lambda_max(up) - r.max()), abs(lambda_min(lo) - r.min())) / max(1.0, r.max())
    return v, {"gap": gap}


def _cases_prop39(cfg):
    fns = _fns(cfg, GF_ALL, _need_omd_or_ocz)
    return _combos(fns, _ps(cfg, [0.5, 0.75, 1.0], lambda p: 0.5 <= p <= 1, "[1/2, 1]"))


_register("PROP39", "P <= I gives P(A^p,B^p) <= ||R|| I and P >= I gives P(A^p,B^p) >= lambda_min(R) I with R from C = B^-1/2 A B^-1/2",
          "g in OMD_+^1 or f in OC_+^1 with f(0+)=0; 1/2 <= p <= 1", ("core", "perspectives"),
          cases=_cases_prop39, make=_gen_pd2, evaluate=_ev_prop39)


def _ev_prop310(case, m):
    f = _fn(case["fn"])
    p = float(case["p"])
    a, b = m["A"], m["B"]
    n = a.n
    xi = _cond(a) if case["cls"] == "oc" else _cond(b)
    K = kantorovich(xi, 2 * p - 1)
    P = _P(f, a, b)
    if case.get("ratio", True):
        r = _ratio(f, _eigs(_whiten(b, a)), p)
        rmax, rmin = float(r.max()), float(r.min())
    else:
        rmax = rmin = 1.0
    sides = case.get("sides", "both")
    v, info = 0.0, {}
    if sides in ("both", "le"):
        c = 1.0 / op_norm(P)
        Pn = P * c
        pref = K * rmax * lambda_min(Pn) ** (1 - p)
        v = max(v, _v_le(_scaled_pp(f, a, b, c, p), _eye(n, pref)))
        info["prefactor_le"] = pref
    if sides in ("both", "ge"):
        c = 1.0 / lambda_min(P)
        Pn = P * c
        pref = rmin / K * op_norm(Pn) ** (1 - p)
        v = max(v, _v_le(_eye(n, pref), _scaled_pp(f, a, b, c, p)))
        info["prefactor_ge"] = pref
    if p == 1:
        info["gap"] = max(abs(x - 1.0) for x in info.values())
    info["xi"] = xi
    return v, info


def _cases_prop310(cfg):
    fns = _fns(cfg, GF_ALL, _need_omd_or_ocz)
    out = []
    for f in fns:
        out += _combos([f], _ps(cfg, [1.0, 1.5, 2.0], lambda p: 1 <= p <= 2, "[1, 2]"),
                       cls=_cls(_fn(f)), ratio=True)
    for c in out:
        c["amp"] = 2 * c["p"]
    return out


def _cases_cor311(cfg):
    if cfg.fn is not None:
        f = _fn(_fns(cfg, [], lambda f: _need_kind(f) or _need_omd_or_ocz(f))[0])
        rows = [(f.text(), "le" if _kind(f) == "pmd" else "ge")]
    else:
        rows = [(_txt(f), "ge") for f in G_PMI + F_PMI] + [(_txt(f), "le") for f in G_PMD + F_PMD]
    out = []
    for f, side in rows:
        out += _combos([f], _ps(cfg, [1.0, 1.5, 2.0], lambda p: 1 <= p <= 2, "[1, 2]"),
                       cls=_cls(_fn(f)), ratio=False, sides=side)
    for c in out:
        c["amp"] = 2 * c["p"]
    return out


_register("PROP310", "P <= I gives P(A^p,B^p) <= K(xi,2p-1) ||R|| lambda_min(P)^(1-p) I (and the mirrored lower bound), xi = cond(A) or cond(B)",
          "f in OC_+^1 with f(0+)=0 or g in OMD_+^1; 1 <= p <= 2", ("core", "perspectives"),
          cases=_cases_prop310, make=_gen_pd2, evaluate=_ev_prop310)
_register("COR311", "pmd: P <= I gives P(A^p,B^p) <= K lambda_min(P)^(1-p) I; pmi: P >= I gives P(A^p,B^p) >= K^-1 ||P||^(1-p) I",
          "pmi or pmd f in OC_+^1 with f(0+)=0 or g in OMD_+^1; 1 <= p <= 2", ("core", "perspectives"),
          cases=_cases_cor311, make=_gen_pd2, evaluate=_ev_prop310)


def _ev_fmps(case, m):
    alpha = float(case["alpha"])
    p = float(case["p"])
    a, b = m["A"], m["B"]
    f = Power(alpha)
    wa, wb = _eigs(a), _eigs(b)
    xi = max(wa[0], wb[0]) / min(wa[-1], wb[-1])
    c = 1.0 / op_norm(_P(f, a, b))
    bound = kantorovich(xi ** (2 * p), alpha) * kantorovich(xi, p) ** alpha
    return _v_le(_scaled_pp(f, a, b, c, p), _eye(a.n, bound)), {"bound": bound}


def _cases_fmps(cfg):
    ps = _ps(cfg, [1.5, 2.0, 3.0], lambda p: p > 1, "(1, inf)")
    alphas = [1.5, 2.0, 3.0]
    if cfg.fn is not None:
        f = _fn(cfg.fn)
        if not isinstance(f, Power) or f.alpha <= 1:
            raise _Skip("precondition: needs pow(a) with a > 1")
        alphas = [float(f.alpha)]
    return [{"alpha": a, "p": p, "amp": p * a} for a in alphas for p in ps]


_register("FMPS", "P_{t^a}(A,B) <= I gives P_{t^a}(A^p,B^p) <= K(xi^2p, a) K(xi, p)^a I for m <= A, B <= M, xi = M/m",
          "a > 1; p > 1", ("core", "perspectives"),
          cases=_cases_fmps, make=_gen_pd2, evaluate=_ev_fmps)


# ---------------------------------------------------------------------------
# weak log-majorizations


def _ev_prop313(case, m):
    form = str(case["form"])
    if form == "araki":
        q = float(case["q"])
        x, y = m["A"], m["B"]
        xq = _pw(x, q / 2)
        lhs = _sym(xq.a @ _pw(y, q).a @ xq.a)
        xh = _pw(x, 0.5)
        rhs = _pw(_sym(xh.a @ y.a @ xh.a), q)
        return _v_maj(log_majorize(lhs, rhs)), {}
    g = _fn(case["fn"])
    p = float(case["p"])
    a, b = m["A"], m["B"]
    P = _P(g, a, b)
    Pp = _P(g, _pw(a, p), _pw(b, p))
    r = _ratio(g, _eigs(_whiten(b, a)), p)
    Q = _pw(P, 2 * p - 1)
    if form == "21":
        verdict = weak_log_majorize(Pp, Q * (r.max() * op_norm(P) ** (1 - p)))
    elif form == "22":
        verdict = log_supermajorize(Pp, Q * (r.min() * lambda_min(P) ** (1 - p)))
    elif form == "23":
        verdict = weak_log_majorize(Q * (r.min() * op_norm(P) ** (1 - p)), Pp)
    else:
        verdict = log_supermajorize(Q * (r.max() * lambda_min(P) ** (1 - p)), Pp)
    return _v_maj(verdict), {}


def _cases_prop313(form):
    lo = form in ("21", "22")

    def cases(cfg):
        fns = _fns(cfg, GF_ALL, _need_omd_or_ocz)
        if lo:
            ps = _ps(cfg, [0.5, 0.75, 1.0], lambda p: 0.5 <= p <= 1, "[1/2, 1]")
        else:
            ps = _ps(cfg, [1.0, 1.5, 2.0], lambda p: 1 <= p <= 2, "[1, 2]")
        out = _combos(fns, ps, form=form)
        for c in out:
            c["amp"] = 2.0 * max(1.0, c["p"])
        if form == "21" and cfg.fn is None:
            out += [{"form": "araki", "q": q, "amp": 2.0} for q in (0.25, 0.5, 0.75)]
        return out

    return cases


for _form, _txt_desc, _dom in [
    ("21", "P(A^p,B^p) <_wlog ||R|| ||P||^(1-p) P^(2p-1); also Araki X^q/2 Y^q X^q/2 <_log (X^1/2 Y X^1/2)^q", "1/2 <= p <= 1"),
    ("22", "P(A^p,B^p) <^wlog lambda_min(R) lambda_min(P)^(1-p) P^(2p-1)", "1/2 <= p <= 1"),
    ("23", "lambda_min(R) ||P||^(1-p) P^(2p-1) <_wlog P(A^p,B^p)", "1 <= p <= 2"),
    ("24", "||R|| lambda_min(P)^(1-p) P^(2p-1) <^wlog P(A^p,B^p)", "1 <= p <= 2"),
]:
    _register(f"PROP313-{_form}", _txt_desc,
              "g in OMD_+^1 or f in OC_+^1 with f(0+)=0; " + _dom, ("core", "majorization"),
              cases=_cases_prop313(_form), make=_gen_pd2, evaluate=_ev_prop313)


def _ev_cor314(case, m):
    g = _fn(case["fn"])
    p = float(case["p"])
    a, b = m["A"], m["B"]
    P = _P(g, a, b)
    Pp = _P(g, _pw(a, p), _pw(b, p))
    Q = _pw(P, 2 * p - 1)
    if case["kind"] == "pmi":
        ref = Q * (op_norm(P) ** (1 - p))
        verdict = weak_log_majorize(Pp, ref) if p < 1 else weak_log_majorize(ref, Pp)
    else:
        ref = Q * (lambda_min(P) ** (1 - p))
        verdict = log_supermajorize(Pp, ref) if p < 1 else log_supermajorize(ref, Pp)
    return _v_maj(verdict), {}


def _cases_cor314(cfg):
    if cfg.fn is not None:
        f = _fn(_fns(cfg, [], lambda f: _need_kind(f) or _need_omd_or_ocz(f))[0])
        rows = [(f.text(), _kind(f))]
    else:
        rows = [(_txt(f), "pmi") for f in G_PMI + F_PMI] + [(_txt(f), "pmd") for f in G_PMD + F_PMD]
    ps = _ps(cfg, [0.5, 0.75, 1.0, 1.5, 2.0], lambda p: 0.5 <= p <= 2, "[1/2, 2]")
    out = []
    for f, kind in rows:
        out += _combos([f], ps, kind=kind)
    for c in out:
        c["amp"] = 2.0 * max(1.0, c["p"])
    return out


_register("COR314", "pmi: P(A^p,B^p) <_wlog ||P||^(1-p) P^(2p-1) for p < 1 and reversed for p >= 1; pmd: the <^wlog versions with lambda_min",
          "pmi or pmd g in OMD_+^1 or f in OC_+^1 with f(0+)=0; 1/2 <= p <= 2", ("core", "majorization"),
          cases=_cases_cor314, make=_gen_pd2, evaluate=_ev_cor314)


# ---------------------------------------------------------------------------
# spectral ratio bounds


def _gen_ratio_c(spec, case):
    c = rand_spd(spec, "C")
    s = float(spec.stream("scale").log_uniform(1e-3, 1e3)[0])
    return {"C": c * s}


def _ev_prop315(case, m):
    h = _fn(case["fn"])
    p = float(case["p"])
    c = m["C"]
    s = eigh(c)
    w = np.asarray(s.eigenvalues, dtype=float)
    # h(C)^{-p/2} h(C^p) h(C)^{-p/2} is diagonal in the eigenbasis of C
    q = s.eigenvectors
    R = _sym((q * _ratio(h, w, p)) @ q.T)
    ends = _ratio(h, np.array([w[-1], w[0]]), p)
    n = c.n
    if p > 1:
        v = max(_v_le(_eye(n), R), _v_le(R, _eye(n, ends.max())))
    else:
        v = max(_v_le(R, _eye(n)), _v_le(_eye(n, ends.min()), R))
    info = {}
    if case.get("halfsum") and p > 1:
        bound = 2.0 ** (p - 1)
        top = lambda_max(R)
        v = max(v, _excess(top, bound))
        info["sup_over_bound"] = top / bound
    return v, info


def _cases_prop315(cfg):
    def need(f):
        r = classify(f)
        if not r.geom_convex.holds:
            return f"{f.text()} is not geometrically convex on the probe grid"
        return _need_om(f)

    fns = _fns(cfg, ["halfsum(0.1)", "halfsum(0.3)", "pow(1/2)", "logmean", "warith(1/2)",
                     "geodesic(0:1/4,1/2:1/2,1:1/4)"], need)
    ps = _ps(cfg, [0.5, 1.5, 2.0, 3.0], lambda p: p != 1, "p != 1")
    out = []
    for f in fns:
        for p in ps:
            out.append({"fn": f, "p": p, "halfsum": f.startswith("halfsum"), "cond": COND_CAP})
    return out


_register("PROP315", "geometrically convex h: I <= h(C^p)/h(C)^p <= max over the spectral endpoints for p > 1 (reversed for p < 1); HalfSum bound 2^(p-1)",
          "h geometrically convex in OM_+^1; p != 1", ("core", "means"),
          cases=_cases_prop315, make=_gen_ratio_c, evaluate=_ev_prop315)


# ---------------------------------------------------------------------------
# t^n h perspectives


def _cases_thm41(cfg):
    if cfg.fn is not None:
        hs = _fns(cfg, [], lambda f: _need_om(f) or _need_kind(f))
    else:
        hs = [_txt("pow(0.4)"), _txt("warith(1/2)"), _txt("wharm(1/2)")]
    ps = _ps(cfg, [0.1, 0.25, 0.5], lambda p: 0 < p <= 0.5, "(0, 1/2]")
    out = []
    for h in hs:
        mode = "AH" if _kind_of(h) == "pmi" else "AH2"
        for n in (2, 3):
            f = _f_of(h, n)
            for p in ps:
                out.append({"fn": f, "p": p, "mode": mode, "n": n, "base": h, "amp": n + 1.0})
    return out


_register("THM41", "P_{t^n h} satisfies AH for p in (0,1/2] when h is pmi (AH2 when pmd), n >= 2",
          "h pmi or pmd in OM_+^1; n in {2,3}; 0 < p <= 1/2", ("core", "perspectives"),
          cases=_cases_thm41, make=_gen_pd2, evaluate=_ev_ah)


class _InvPower:
    """t -> ((t^n h)^[-1](t))^r for matrix calculus."""

    domain = "positive"

    def __init__(self, n: int, h: ScalarFn, r: float):
        self.n, self.h, self.r = n, h, r

    def eval(self, w):
        return inverse_monotone(self.n, self.h, np.asarray(w, dtype=float)) ** self.r


def _gen_order(spec, case):
    a = rand_spd(spec, "A")
    n = spec.dim
    if spec.trial_index % 2:
        d = rand_psd_rank(spec, 1, "D")
    else:
        d = rand_spd(spec, "D")
    s = float(spec.stream("gap").log_uniform(1e-3, 1.0)[0])
    return {"A": a, "B": _sym(a.a + s * d.a / max(1e-300, op_norm(d)) * op_norm(a))}


def _ev_lemma42(case, m):
    phi = _InvPower(int(case["n"]), _fn(case["fn"]), float(case["r"]))
    v = _v_le(apply_fn(phi, m["A"]), apply_fn(phi, m["B"]))
    return v, {"unit_gap": abs(float(phi.eval(np.array([1.0]))[0]) - 1.0)}


def _cases_lemma42(cfg):
    hs = _fns(cfg, ["pow(1/2)", "warith(1/2)", "logmean"], _need_om)
    out = []
    for h in hs:
        for n in (1, 2, 3):
            for r in sorted({0.5 * n, float(n)}):
                out.append({"fn": h, "n": n, "r": r, "amp": 2.0})
    return out


_register("LEMMA42", "((t^n h)^[-1])^r is operator monotone for r in [0,n] (sampled A <= B pairs)",
          "h in OM_+^1; n in {1,2,3}; 0 <= r <= n", ("core", "means"),
          cases=_cases_lemma42, make=_gen_order, evaluate=_ev_lemma42)


# ---------------------------------------------------------------------------
# 2x2 counterexample construction and exponent-region scans


def counterexample_2x2(f: ScalarFn, a: float, b: float, theta: float, p: float):
    """Scalar pair from the rank-one construction for ``f = t g``.

    With ``A = [[c^2, cs], [cs, s^2]]`` and ``B = diag(1/a, 1/b)`` one has
    ``||P_f(A^p, B^p)|| = g(a^p c^2 + b^p s^2)`` and
    ``||P_f(A, B)||^p = g(a c^2 + b s^2)^p``; returns that pair.
    """
    if not (a > 0 and b > 0):
        raise DomainViolation("a and b must be positive")
    g = divide_by_t(f)
    c2, s2 = math.cos(theta) ** 2, math.sin(theta) ** 2
    lhs = float(g.eval(a**p * c2 + b**p * s2))
    rhs = float(g.eval(a * c2 + b * s2)) ** p
    return lhs, rhs


def _lemma_route(f: ScalarFn):
    """(function written as t g with t g(t) -> 0 at 0, swapped?) or None."""
    if f.value_at_zero == 0.0:
        return f, False
    ft = Transpose(f)
    if ft.value_at_zero == 0.0:
        return ft, True
    return None


def search_counterexample_2x2(f: ScalarFn, p: float, span: float | None = None, grid: int = 9,
                              iters: int = 80) -> dict:
    """Maximize ``log(lhs / rhs)`` of :func:`counterexample_2x2` over (a, b, theta).

    Starts from the best point of a log grid in (a, b) and a few angles, then
    runs coordinate descent with step halving. ``log a`` and ``log b`` stay in
    ``[-span, span]``; by default the span keeps ``diag(1/a, 1/b)^p`` inside
    the representable condition range.
    """
    g = divide_by_t(f)
    if span is None:
        span = math.log(DYN_RANGE) / (4.0 * max(1.0, p))

    def score(la, lb, th):
        c2, s2 = np.cos(th) ** 2, np.sin(th) ** 2
        a, b = np.exp(la), np.exp(lb)
        with np.errstate(all="ignore"):
            lhs = np.asarray(g.eval(a**p * c2 + b**p * s2), dtype=float)
            rhs = np.asarray(g.eval(a * c2 + b * s2), dtype=float) ** p
            out = np.log(lhs) - np.log(rhs)
        return np.where(np.isfinite(out), out, -np.inf)

    ax = np.linspace(-span, span, grid)
    ths = np.array([np.pi / 8, np.pi / 4, 3 * np.pi / 8])
    LA, LB, TH = np.meshgrid(ax, ax, ths, indexing="ij")
    sc = score(LA.ravel(), LB.ravel(), TH.ravel())
    k = int(np.argmax(sc))
    x = np.array([LA.ravel()[k], LB.ravel()[k], TH.ravel()[k]])
    best = float(sc[k])
    step = np.array([1.0, 1.0, np.pi / 16])
    for _ in range(iters):
        improved = False
        for i in range(3):
            for sgn in (1.0, -1.0):
                y = x.copy()
                y[i] += sgn * step[i]
                if i < 2:
                    y[i] = min(max(y[i], -span), span)
                else:
                    y[i] = min(max(y[i], 1e-3), np.pi / 2 - 1e-3)
                s = float(score(np.array([y[0]]), np.array([y[1]]), np.array([y[2]]))[0])
                if s > best:
                    best, x, improved = s, y, True
        if not improved:
            step = step / 2
            if step.max() < 1e-6:
                break
    a, b, th = math.exp(x[0]), math.exp(x[1]), float(x[2])
    lhs, rhs = counterexample_2x2(f, a, b, th, p)
    return {"a": a, "b": b, "theta": th, "lhs": lhs, "rhs": rhs, "ratio": lhs / rhs if rhs > 0 else math.inf}


def _lemma_matrices(a, b, th, swap: bool) -> dict:
    c, s = math.cos(th), math.sin(th)
    rank_one = SymMatrix([[c * c, c * s], [c * s, s * s]])
    diag = SymMatrix.diag([1.0 / a, 1.0 / b])
    if swap:
        return {"A": diag, "B": rank_one}
    return {"A": rank_one, "B": diag}


def _scalar_witness(f: ScalarFn, p: float):
    span = math.log(DYN_RANGE) / (2.0 * max(1.0, p))
    t = np.exp(np.linspace(-span, span, 193))
    with np.errstate(all="ignore"):
        r = np.asarray(f.eval(t**p), dtype=float) / np.asarray(f.eval(t), dtype=float) ** p
    r = np.where(np.isfinite(r), r, 0.0)
    k = int(np.argmax(r))
    if r[k] > 1 + CERT_MARGIN:
        tk = float(t[k])
        ft = float(f.eval(tk))
        return {"A": _eye(2, tk / ft), "B": _eye(2, 1.0 / ft)}, float(r[k])
    return None, float(r[k])


@dataclass
class RegionMap:
    fn: str
    p_grid: list
    entries: list
    interval: tuple | None
    unsettled: dict | None = None

    def verdict(self, p: float) -> str:
        for e in self.entries:
            if abs(e["p"] - p) < 1e-12:
                return e["verdict"]
        raise KeyError(p)

    def to_dict(self) -> dict:
        return _encode({"fn": self.fn, "pGrid": self.p_grid, "entries": self.entries,
                        "interval": list(self.interval) if self.interval else None,
                        "unsettled": self.unsettled})


def _unsettled_band(f: ScalarFn):
    if isinstance(f, TPowTimes) and f.n >= 2:
        return (0.5, 1.0)
    if isinstance(f, Power):
        a = f.alpha
        if a > 2:
            return (a / (2 * (a - 1)), 1.0)
        if a < -1:
            return ((1 - a) / (-2 * a), 1.0)
    return None


def _perturb_search(f, p, start: dict, cfg: SuiteConfig, label: str, steps: int = 40):
    """Greedy multiplicative perturbation of a matrix pair to grow the AH violation."""
    case = {"fn": f.text(), "p": p, "mode": "AH"}
    best_inputs = start
    best, _ = _ev_ah(case, start)
    s = Stream(cfg.seed, 0, label)
    scale = 0.3
    for _ in range(steps):
        n = best_inputs["A"].n
        trial = {}
        for key in ("A", "B"):
            g = s.normal(n * n).reshape(n, n) * scale
            e = np.eye(n) + 0.5 * (g + g.T)
            m = as_array(best_inputs[key])
            trial[key] = _sym(e @ m @ e.T)
        try:
            v, _ = _ev_ah(case, trial)
        except _NUMERIC:
            continue
        if v > best:
            best, best_inputs = v, trial
        else:
            scale *= 0.85
    return best, best_inputs


def _scan_point(f: ScalarFn, p: float, cfg: SuiteConfig, ci: int, label: str) -> dict:
    tol = cfg.tol
    case = {"fn": f.text(), "p": float(p), "mode": "AH", "amp": max(1.0, p)}
    check = REGISTRY["AH-NORM"]
    route = _lemma_route(f)
    if route is not None and p != 1:
        ff, swap = route
        best = search_counterexample_2x2(ff, p)
        if best["ratio"] > 1 + CERT_MARGIN:
            mats = _lemma_matrices(best["a"], best["b"], best["theta"], swap)
            try:
                v, info = _ev_ah(case, mats)
            except PerspecError:
                v, info = 0.0, {}
            if v > tol:
                w = _witness("AH-NORM", case, mats, v, cfg, None, tol, info)
                w["construction"] = {k: best[k] for k in ("a", "b", "theta", "ratio")} | {"swapped": swap}
                return {"p": p, "verdict": "violated", "trials": 0, "worst": v, "witness": w, "source": "rank-one 2x2"}
    mats, r = _scalar_witness(f, p)
    if mats is not None:
        try:
            v, info = _ev_ah(case, mats)
        except PerspecError:
            v, info = 0.0, {}
        if v > tol:
            w = _witness("AH-NORM", case, mats, v, cfg, None, tol, info)
            return {"p": p, "verdict": "violated", "trials": 0, "worst": v, "witness": w, "source": "scalar"}
    res = _pmap(lambda t: _one_trial(check, cfg, ci, case, t), range(cfg.trials), cfg)
    worst, worst_in, worst_spec, n_ok = 0.0, None, None, 0
    for out, _, spec in res:
        if out is None:
            continue
        n_ok += 1
        v, inputs, info = out
        if worst_in is None or v > worst:
            worst, worst_in, worst_spec = v, inputs, spec
    if worst > tol:
        w = _witness("AH-NORM", case, worst_in, worst, cfg, worst_spec, tol)
        return {"p": p, "verdict": "violated", "trials": n_ok, "worst": worst, "witness": w, "source": "random"}
    if worst_in is not None and p != 1:
        v, inputs = _perturb_search(f, p, worst_in, cfg, f"{label}:{ci}")
        if v > tol:
            w = _witness("AH-NORM", case, inputs, v, cfg, None, tol)
            return {"p": p, "verdict": "violated", "trials": n_ok, "worst": v, "witness": w, "source": "descent"}
        worst = max(worst, v)
    return {"p": p, "verdict": "survived", "trials": n_ok, "worst": worst, "witness": None, "source": None}


def lambda_region_scan(f: ScalarFn, p_grid, cfg: SuiteConfig | None = None, anchor: float = 1.0) -> RegionMap:
    """Survival / violation verdict of the Ando-Hiai implication for each grid p.

    Violations are certificates with replayable witnesses; survival only
    records how many trials were tried. The interval estimate is the largest
    contiguous run of survived grid points containing the grid point closest
    to ``anchor``.
    """
    cfg = cfg or SuiteConfig()
    if isinstance(f, str):
        f = parse_fn(f)
    grid = [float(p) for p in p_grid]
    if any(p <= 0 for p in grid):
        raise DomainViolation("grid values must be positive")
    label = f"scan:{f.text()}"
    entries = [_scan_point(f, p, cfg, ci, label) for ci, p in enumerate(grid)]
    order = sorted(range(len(grid)), key=lambda i: grid[i])
    k0 = min(order, key=lambda i: abs(grid[i] - anchor))
    interval = None
    if entries[k0]["verdict"] == "survived":
        pos = order.index(k0)
        lo = hi = pos
        while lo > 0 and entries[order[lo - 1]]["verdict"] == "survived":
            lo -= 1
        while hi < len(order) - 1 and entries[order[hi + 1]]["verdict"] == "survived":
            hi += 1
        interval = (grid[order[lo]], grid[order[hi]])
    band = _unsettled_band(f)
    unsettled = None
    if band is not None:
        inside = [e for e in entries if band[0] < e["p"] <= band[1]]
        unsettled = {"band": list(band), "survived": [e["p"] for e in inside if e["verdict"] == "survived"],
                     "violated": [e["p"] for e in inside if e["verdict"] == "violated"],
                     "note": "evidence only; membership in this band is open"}
    return RegionMap(f.text(), grid, entries, interval, unsettled)


def mean_bound_extension_scan(h: ScalarFn, p_grid, cfg: SuiteConfig | None = None) -> list[dict]:
    """Search for violations of the two p in [1,2] mean bounds at larger p.

    Absence of a violation is reported as such and not as a proof.
    """
    cfg = cfg or SuiteConfig()
    if isinstance(h, str):
        h = parse_fn(h)
    check = REGISTRY["THM32-71"]
    out = []
    for form in (71, 72):
        for ci, p in enumerate(p_grid):
            case = {"fn": h.text(), "p": float(p), "form": form, "amp": float(p)}
            agg = _loop(check, cfg, [case], cfg.tol)
            out.append({"form": form, "p": float(p), "trials": agg["trials"], "worst": agg["worst"],
                        "witness": agg["witness"]})
    return out


PROP46_ROWS = {
    3.0: {"member": lambda p: p <= 0.75, "violate": lambda p: p > 1},
    1.5: {"member": lambda p: p <= 1, "violate": lambda p: p > 1},
    0.5: {"member": lambda p: p >= 1, "violate": lambda p: p < 1},
    -0.5: {"member": lambda p: p <= 1, "violate": lambda p: p > 1},
    -2.0: {"member": lambda p: p <= 0.75, "violate": lambda p: p > 1},
}
PROP46_GRID = [round(0.05 * k, 2) for k in range(1, 41)] + [3.0, 4.0]


def _prop46_expect(alpha: float):
    if alpha > 2:
        cut = alpha / (2 * (alpha - 1))
        return (lambda p: p <= cut), (lambda p: p > 1)
    if 1 < alpha <= 2:
        return (lambda p: p <= 1), (lambda p: p > 1)
    if 0 < alpha < 1:
        return (lambda p: p >= 1), (lambda p: p < 1)
    if -1 <= alpha < 0:
        return (lambda p: p <= 1), (lambda p: p > 1)
    if alpha < -1:
        cut = (1 - alpha) / (-2 * alpha)
        return (lambda p: p <= cut), (lambda p: p > 1)
    return None


def _run_prop46(check: Check, cfg: SuiteConfig) -> CheckOutcome:
    tol = cfg.tol
    alphas = list(PROP46_ROWS)
    if cfg.fn is not None:
        f = _fn(cfg.fn)
        if not isinstance(f, Power) or _prop46_expect(f.alpha) is None:
            return CheckOutcome(check.check_id, "skipped", 0, 0.0, None, tol,
                                "precondition: needs pow(a) with a not in {0, 1}")
        alphas = [float(f.alpha)]
    grid = [float(p) for p in cfg.p] if cfg.p is not None else PROP46_GRID
    worst, witness, trials, missing, maps = 0.0, None, 0, [], {}
    for a in alphas:
        member, violate = _prop46_expect(a)
        pts = [p for p in grid if member(p) or violate(p)]
        if a != 0.5:
            pts = [p for p in pts if p <= 2.0]
        rm = lambda_region_scan(Power(a), pts, cfg)
        maps[Power(a).text()] = rm.to_dict()
        for e in rm.entries:
            trials += e["trials"]
            if member(e["p"]) and e["verdict"] == "violated":
                if e["worst"] > worst:
                    worst, witness = e["worst"], e["witness"]
            if violate(e["p"]) and e["verdict"] != "violated":
                missing.append(f"pow({a:g}) p={e['p']:g}")
            if member(e["p"]):
                worst = max(worst, e["worst"] if e["verdict"] == "survived" else worst)
    if witness is not None:
        return CheckOutcome(check.check_id, "fail", trials, worst, witness, tol,
                            "a guaranteed member exponent produced a violation", {"regions": maps})
    if missing:
        return CheckOutcome(check.check_id, "fail", trials, worst, None, tol,
                            "no counterexample found for: " + ", ".join(missing), {"regions": maps})
    return CheckOutcome(check.check_id, "pass", trials, worst, None, tol, None, {"regions": maps})


_register("PROP46", "exponent region of t^a: survival on the guaranteed part and certified violations outside, for the five ranges of a",
          "a in {3, 1.5, 0.5, -0.5, -2} or pow(a) given by --fn", ("perspectives",),
          runner=_run_prop46, evaluate=_ev_ah)


def _run_prop49(check: Check, cfg: SuiteConfig) -> CheckOutcome:
    tol = cfg.tol
    if cfg.fn is not None:
        f = _fn(cfg.fn)
        if isinstance(f, Power):
            return CheckOutcome(check.check_id, "skipped", 0, 0.0, None, tol, "precondition: f is a power function")
        k = _kind(f)
        if k is None:
            return CheckOutcome(check.check_id, "skipped", 0, 0.0, None, tol, "precondition: f is neither pmi nor pmd")
        rows = [(f.text(), k)]
    else:
        rows = [(_txt(s), "pmi") for s in ("warith(1/2)", "logmean", "halfsum(0.3)",
                                            "geodesic(0:1/4,1/2:1/2,1:1/4)", _f_of("warith(1/2)"))]
        rows += [(_txt(s), "pmd") for s in ("wharm(1/2)", "adjoint(logmean)")]
    found, missing, trials = {}, [], 0
    for f, kind in rows:
        default = [1.1, 1.5, 2.0, 3.0] if kind == "pmi" else [0.3, 0.5, 0.9]
        ps = [float(p) for p in (cfg.p if cfg.p is not None else default)]
        ps = [p for p in ps if (p > 1 if kind == "pmi" else p < 1)]
        rm = lambda_region_scan(_fn(f), ps, cfg)
        for e in rm.entries:
            trials += e["trials"]
            if e["verdict"] == "violated":
                found[f"{f} p={e['p']:g}"] = e["witness"]
            else:
                missing.append(f"{f} p={e['p']:g}")
    details = {"witnesses": found}
    if missing:
        return CheckOutcome(check.check_id, "fail", trials, 0.0, None, tol,
                            "no counterexample found for: " + ", ".join(missing), details)
    return CheckOutcome(check.check_id, "pass", trials, 0.0, None, tol, None, details)


_register("PROP49", "pmi f that is not a power has no exponent p > 1 in its region (pmd: none below 1); certified by search",
          "pmi or pmd non-power f", ("perspectives",), runner=_run_prop49, evaluate=_ev_ah)


# ---------------------------------------------------------------------------
# Lie-Trotter limits and log-Euclidean comparisons


LT_STEPS = [1e-2 * 2.0**-k for k in range(8)]
LT_NOISE = 1e-12


def lie_trotter_path(f: ScalarFn, a, b, ps) -> list[SymMatrix]:
    """``P_f(A^p, B^p)^{1/p}`` for each p."""
    return [_pw(_P(f, _pw(a, p), _pw(b, p)), 1.0 / p) for p in ps]


def _ev_lt(case, m):
    f = _fn(case["fn"])
    a, b = m["A"], m["B"]
    le = log_euclidean(_alpha(f), a, b)
    scale = op_norm(le)
    vals = lie_trotter_path(f, a, b, LT_STEPS + [1e-4])
    errs = [op_norm(_sym(v.a - le.a)) for v in vals]
    v = 0.0
    ratios = []
    for k in range(len(LT_STEPS) - 1):
        # taking the 1/p-th power amplifies round-off roughly like 1/p
        if errs[k + 1] <= LT_NOISE * scale / LT_STEPS[k + 1]:
            continue
        r = errs[k + 1] / errs[k]
        ratios.append(r)
        v = max(v, r - 0.7)
    v = max(v, errs[-1] / scale - 1e-3)
    return max(0.0, v), {"err_small_p": errs[-1] / scale,
                         "ratio_min": min(ratios) if ratios else 0.5,
                         "ratio_max": max(ratios) if ratios else 0.5}


def _cases_lt(cfg):
    fns = _fns(cfg, ["pow(0.7)", "logmean", _f_of("pow(1/2)")])
    return [{"fn": f, "cond": 1e2} for f in fns]


_register("LT-CONV", "P_f(A^p,B^p)^(1/p) -> exp(a log A + (1-a) log B), a = f'(1), with at least first-order rate: err(p/2)/err(p) <= 0.7",
          "f > 0 with f(1) = 1; p = 1e-2 2^-k; halving p must shrink the error by 0.7 or better", ("lie-trotter",),
          cases=_cases_lt, make=_gen_pd2, evaluate=_ev_lt)


def _ev_cor53(case, m):
    h = _fn(case["fn"])
    p = float(case["p"])
    a, b = m["A"], m["B"]
    al = _alpha(h)
    if case["form"] == "a":
        hs = _fn(f"adjoint({h.text()})")
        lhs = op_norm(_P(hs, _pw(a, p), _pw(b, p))) ** (1 / p)
        rhs = op_norm(log_euclidean(al, a, b))
    else:
        n = int(case["n"])
        lhs = op_norm(log_euclidean(n + al, a, b))
        rhs = op_norm(_P(times_t(h, n), _pw(a, p), _pw(b, p))) ** (1 / p)
    return _excess(lhs, rhs), {"lhs": lhs, "rhs": rhs}


def _cases_cor53(cfg):
    hs = _fns(cfg, ["warith(1/2)", "logmean", "pow(1/2)", "geodesic(0:1/4,1/2:1/2,1:1/4)"],
              lambda f: _need_om(f) or _need_pmi(f))
    ps = _ps(cfg, [0.25, 0.5, 1.0, 2.0, 4.0])
    out = []
    for h in hs:
        for p in ps:
            out.append({"fn": h, "p": p, "form": "a", "amp": max(p, 1 / p)})
            for n in (1, 2):
                out.append({"fn": h, "p": p, "form": "b", "n": n, "amp": max(p, 1 / p) * (n + 1)})
    return out


_register("COR53", "pmi h, a = h'(1): ||P_{h*}(A^p,B^p)^(1/p)|| <= ||exp(a log A + (1-a) log B)|| and ||exp((n+a) log A + (1-n-a) log B)|| <= ||P_{t^n h}(A^p,B^p)^(1/p)||",
          "h pmi in OM_+^1; p > 0; n in {1,2}", ("lie-trotter",),
          cases=_cases_cor53, make=_gen_pd2, evaluate=_ev_cor53)


def _gen_cor54(spec, case):
    m = _gen_pd2(spec, case)
    a, b = m["A"], m["B"]
    h = _fn(case["fn"])
    al = _alpha(h)
    if case["form"] == "a":
        L = _sym(al * apply_fn(LOG, a).a + (1 - al) * apply_fn(LOG, b).a)
        c = math.exp(-lambda_max(L))
    else:
        n = int(case["n"])
        c = 1.0 / op_norm(_P(times_t(h, n), a, b))
    return {"A": a * c, "B": b * c}


def _ev_cor54(case, m):
    h = _fn(case["fn"])
    a, b = m["A"], m["B"]
    al = _alpha(h)
    if case["form"] == "a":
        hs = _fn(f"adjoint({h.text()})")
        return _v_le(_P(hs, a, b), _eye(a.n)), {}
    n = int(case["n"])
    k = (n + al - 1) / (n + al)
    la = apply_fn(LOG, a)
    lb = apply_fn(LOG, b)
    return _v_le(la, lb * k), {}


def _cases_cor54(cfg):
    hs = _fns(cfg, ["warith(1/2)", "logmean", "pow(1/2)"], lambda f: _need_om(f) or _need_pmi(f))
    out = []
    for h in hs:
        out.append({"fn": h, "form": "a"})
        for n in (1, 2):
            out.append({"fn": h, "form": "b", "n": n, "amp": n + 1.0})
    return out


_register("COR54", "a log A + (1-a) log B <= 0 gives P_{h*}(A,B) <= I; P_{t^n h}(A,B) <= I gives log A <= (n+a-1)/(n+a) log B",
          "h pmi in OM_+^1; n in {1,2}", ("lie-trotter",),
          cases=_cases_cor54, make=_gen_cor54, evaluate=_ev_cor54)


def _ev_cor55(case, m):
    al = float(case["alpha"])
    p, q = float(case["p"]), float(case["q"])
    a, b = m["A"], m["B"]
    beta = al / (2 * al - 1)
    left = _pw(weighted_geo(beta, _pw(b, -q), _pw(a, q)), (2 * al - 1) / q)
    mid = log_euclidean(al, a, b)
    right = _pw(_P(Power(al), _pw(a, p), _pw(b, p)), 1 / p)
    if case["form"] == "norm":
        v = max(_excess(op_norm(left), op_norm(mid)), _excess(op_norm(mid), op_norm(right)))
    else:
        v = max(_v_maj(log_majorize(left, mid)), _v_maj(log_majorize(mid, right)))
    return v, {}


def _cases_cor55(cfg):
    alphas = [1.5, 2.0, 3.0]
    if cfg.fn is not None:
        f = _fn(cfg.fn)
        if not isinstance(f, Power) or f.alpha <= 1:
            raise _Skip("precondition: needs pow(a) with a > 1")
        alphas = [float(f.alpha)]
    ps = _ps(cfg, [0.5, 1.0, 2.0])
    out = []
    for al in alphas:
        for p in ps:
            for q in (0.5, 1.0, 2.0):
                for form in ("norm", "log"):
                    out.append({"alpha": al, "p": p, "q": q, "form": form,
                                "amp": (2 * al - 1) * max(1.0, p, q)})
    return out


_register("COR55", "a > 1: (B^-q #_{a/(2a-1)} A^q)^((2a-1)/q) <= exp(a log A + (1-a) log B) <= P_{t^a}(A^p,B^p)^(1/p) in norm and in log-majorization",
          "a > 1; p, q > 0", ("lie-trotter", "majorization"),
          cases=_cases_cor55, make=_gen_pd2, evaluate=_ev_cor55)


def _ev_prop56(case, m):
    f = _fn(case["fn"])
    al = float(case["alpha"])
    p = float(case["p"])
    a, b = m["A"], m["B"]
    le = log_euclidean(al, a, b)
    P1 = _P(f, a, b)
    Pp = _pw(_P(f, _pw(a, p), _pw(b, p)), 1 / p)
    if case["mode"] == "le":
        v = max(_excess(op_norm(P1), op_norm(le)), _excess(op_norm(Pp), op_norm(le)),
                _v_maj(weak_log_majorize(Pp, le)))
    else:
        v = max(_excess(op_norm(le), op_norm(P1)), _excess(op_norm(le), op_norm(Pp)),
                _v_maj(weak_log_majorize(le, Pp)))
    return v, {}


def _power_condition(f: ScalarFn, al: float, mode: str):
    """Check f <= t^a (mode 'le') or f >= t^a on the probe grid; returns the worst t."""
    t = ProbeGrid().t
    ft = np.asarray(f.eval(t), dtype=float)
    ta = t**al
    gap = (ft - ta) / np.maximum(ft, ta) if mode == "le" else (ta - ft) / np.maximum(ft, ta)
    k = int(np.argmax(gap))
    return gap[k] <= 1e-12, float(t[k])


def _prop56_rows(cfg):
    if cfg.fn is not None:
        f = _fn(cfg.fn)
        al = _alpha(f)
        if 0 < al < 1:
            return [(f.text(), al, "le")]
        if al <= 0 or al >= 1:
            return [(f.text(), al, "ge")]
    rows = [("wharm(1/2)", 0.5, "le"), ("pow(1/2)", 0.5, "le"), ("adjoint(logmean)", 0.5, "le"),
            ("warith(1/2)", 0.5, "le"), ("logmean", 0.5, "le"),
            (_f_of("warith(1/2)"), 1.5, "ge"), ("pow(2)", 2.0, "ge"), (_f_of("logmean"), 1.5, "ge"),
            ("pow(-1/2)", -0.5, "ge"), (_f_of("wharm(1/2)"), 1.5, "ge")]
    return [(_txt(f), al, mode) for f, al, mode in rows]


def _run_prop56(check: Check, cfg: SuiteConfig) -> CheckOutcome:
    tol = cfg.tol
    ps = [float(p) for p in (cfg.p if cfg.p is not None else [0.5, 1.0, 2.0])]
    cases, searched, missing = [], {}, []
    for f, al, mode in _prop56_rows(cfg):
        holds, t = _power_condition(_fn(f), al, mode)
        if holds:
            cases += [{"fn": f, "alpha": al, "mode": mode, "p": p, "amp": max(p, 1 / p) * 2} for p in ps]
            continue
        # condition fails: the scalar pair A = tI, B = I breaks the norm inequality
        case = {"fn": f, "alpha": al, "mode": mode, "p": 1.0}
        mats = {"A": _eye(2, t), "B": _eye(2)}
        v, _ = _ev_prop56(case, mats)
        key = f"{f} a={al:g}"
        if v > tol:
            searched[key] = _witness(check.check_id, case, mats, v, cfg, None, tol)
        else:
            missing.append(key)
    agg = _loop(check, cfg, cases, tol)
    extra = {"converseWitnesses": searched}
    out = _outcome_from_loop(check.check_id, agg, tol, extra)
    if out.status != "fail" and missing:
        out.status = "fail"
        out.reason = "condition fails but no violating pair was found for: " + ", ".join(missing)
    return out


_register("PROP56", "f <= t^a (a in [0,1]) iff the norm / weak log-majorization bounds against exp(a log A + (1-a) log B) hold; mirrored for a outside (0,1)",
          "f > 0; a real; p > 0", ("lie-trotter", "majorization"),
          runner=_run_prop56, make=_gen_pd2, evaluate=_ev_prop56)


COR58_P = [1.0, 0.5, 0.1, 0.01, 0.001]


def _gen_cor58(spec, case):
    m = _gen_pd2(spec, case)
    a, b = m["A"], m["B"]
    al = int(case["n"]) + _alpha(_fn(case["fn"]))
    L = _sym(al * apply_fn(LOG, a).a + (1 - al) * apply_fn(LOG, b).a)
    sign = -1.0 if spec.trial_index % 2 == 0 else 1.0
    delta = float(spec.stream("delta").uniform(1, 0.05, 1.0)[0])
    c = math.exp(-lambda_max(L) + sign * delta)
    return {"A": a * c, "B": b * c}


def _ev_cor58(case, m):
    h = _fn(case["fn"])
    n = int(case["n"])
    al = n + _alpha(h)
    a, b = m["A"], m["B"]
    L = _sym(al * apply_fn(LOG, a).a + (1 - al) * apply_fn(LOG, b).a)
    top = lambda_max(L)
    c1 = top < 0
    f = times_t(h, n)
    c2 = any(op_norm(_P(f, _pw(a, p), _pw(b, p))) < 1 for p in COR58_P)
    c3 = any(op_norm(_P(Power(al), _pw(a, p), _pw(b, p))) < 1 for p in COR58_P)
    beta = al / (2 * al - 1)
    xs = [op_norm(weighted_geo(beta, _pw(b, -p), _pw(a, p))) for p in COR58_P]
    if c1:
        r = math.exp(top) ** (1 / (2 * al - 1))
        c4 = all(x <= r**p * (1 + 1e-9) for x, p in zip(xs, COR58_P))
    else:
        c4 = all(x < 1 for x in xs)
    flags = [c1, c2, c3, c4]
    return (0.0 if len(set(flags)) == 1 else 1.0), {"lambda_max_log_sum": top}


def _cases_cor58(cfg):
    hs = _fns(cfg, ["warith(1/2)", "logmean", "pow(1/2)"], lambda f: _need_om(f) or _need_pmi(f))
    return [{"fn": h, "n": n, "amp": n + 1.0} for h in hs for n in (1, 2)]


_register("COR58", "with a = n + h'(1): a log A + (1-a) log B < 0 iff ||P_{t^n h}(A^p,B^p)|| < 1 for some p iff the same for t^a iff B^-p #_{a/(2a-1)} A^p <= r^p I",
          "h pmi in OM_+^1; n in {1,2}", ("lie-trotter",),
          cases=_cases_cor58, make=_gen_cor58, evaluate=_ev_cor58)


X_GRID = [0.0, 0.5, 1.0, 2.0, 4.0]


def _gen_monotone(spec, case):
    m = _gen_pd2(spec, case)
    a, b = m["A"], m["B"]
    al = _alpha(_fn(case["fn"]))
    L = _sym((1 - al) * apply_fn(LOG, a).a + al * apply_fn(LOG, b).a)
    delta = float(spec.stream("delta").uniform(1, 0.05, 0.5)[0])
    if case["kind"] == "pmd":
        # forward: lambda_max(L) <= 0; converse: lambda_max(L) = +delta
        shift = -lambda_max(L) + (delta if case["dir"] == "converse" else -delta * (spec.trial_index % 2))
    else:
        shift = -lambda_min(L) + (-delta if case["dir"] == "converse" else delta * (spec.trial_index % 2))
    c = math.exp(shift)
    return {"A": a * c, "B": b * c}


def _ev_monotone(case, m):
    h = _fn(case["fn"])
    a, b = m["A"], m["B"]
    al = _alpha(h)
    dec = case["kind"] == "pmd"

    def path(x):
        if x == 0:
            return _eye(a.n)
        if case.get("geo"):
            return weighted_geo(al, _pw(a, x), _pw(b, x))
        return mean_sigma(h, _pw(a, x), _pw(b, x))

    if case["dir"] == "forward":
        vals = [path(x) for x in X_GRID]
        v = 0.0
        for lo, hi in zip(vals, vals[1:]):
            v = max(v, _v_le(hi, lo) if dec else _v_le(lo, hi))
        return v, {}
    # converse: a tiny step from x = 0 must already leave the order
    step = path(1e-3)
    d = _sym(step.a - np.eye(a.n))
    broken = lambda_max(d) > 0 if dec else lambda_min(d) < 0
    return (0.0 if broken else 1.0), {}


def _cases_monotone(kind):
    def cases(cfg):
        default = ["wharm(1/2)", "pow(0.3)", "adjoint(logmean)"] if kind == "pmd" else \
            ["warith(1/2)", "pow(0.3)", "logmean"]
        need = (lambda f: _need_om(f) or (None if (is_pmd(f) if kind == "pmd" else is_pmi(f))
                                         else f"{f.text()} is not {kind}"))
        hs = _fns(cfg, default, need)
        out = []
        for h in hs:
            for geo in (False, True):
                for d in ("forward", "converse"):
                    out.append({"fn": h, "kind": kind, "geo": geo, "dir": d, "amp": 4.0})
        return out

    return cases


_register("PROP59", "pmd h, a = h'(1): (1-a) log A + a log B <= 0 iff x -> A^x s_h B^x (and A^x #_a B^x) is decreasing on the x-grid",
          "h pmd in OM_+^1; x in {0, 0.5, 1, 2, 4}", ("lie-trotter", "means"),
          cases=_cases_monotone("pmd"), make=_gen_monotone, evaluate=_ev_monotone)
_register("COR510", "pmi h, a = h'(1): (1-a) log A + a log B >= 0 iff x -> A^x s_h B^x (and A^x #_a B^x) is increasing on the x-grid",
          "h pmi in OM_+^1; x in {0, 0.5, 1, 2, 4}", ("lie-trotter", "means"),
          cases=_cases_monotone("pmi"), make=_gen_monotone, evaluate=_ev_monotone)


# ---------------------------------------------------------------------------
# singular extensions


def _ev_sing62(case, m):
    f = _fn(case["fn"])
    closed = perspective_singular(f, m["A"], m["B"])
    rep = eps_limit(f, m["A"], m["B"])
    scale = max(1.0, op_norm(closed))
    if rep.final is None:
        return 1.0, {"cauchy": 0.0}
    err = op_norm(_sym(rep.final.a - closed.a)) / scale
    v = err if rep.cauchy else max(err, 1.0)
    return v, {"err": err, "cauchy": float(rep.cauchy)}


def _cases_sing62(cfg):
    if cfg.fn is not None:
        f = _fn(cfg.fn)
        rows = []
        if f.value_at_zero is not None:
            rows.append((f.text(), False))
        if f.slope_at_inf is not None:
            rows.append((f.text(), True))
        if not rows:
            raise _Skip("precondition: f(0+) and f'(inf) are both infinite")
    else:
        rows = [(_txt(s), False) for s in ("pow(1/2)", "pow(2)", "warith(1/2)", "logmean", _f_of("warith(1/2)"))]
        rows += [(_txt(s), True) for s in ("pow(1/2)", "pow(-1/2)", "logmean")]
    return [{"fn": f, "mirror": mir, "amp": 3.0, "min_dim": 3} for f, mir in rows]


_register("SING-THM62", "closed form B^1/2 f(D(A/B)) B^1/2 (or the transposed one) equals the limit of P_f(A+eps I, B+eps I)",
          "f(0+) finite with s(A) <= s(B), or f'(inf) finite with s(B) <= s(A)", ("singular",),
          cases=_cases_sing62, make=_gen_ordered, evaluate=_ev_sing62, tol=LIMIT_TOL)


def _gen_sing63(spec, case):
    m = _gen_ordered(spec, case)
    n = spec.dim
    ls = []
    for k in range(int(case["steps"])):
        l = rand_spd(spec.child(cond_target=10.0), f"L{k}")
        ls.append(l * (2.0**-k / op_norm(l)))
    m["L"] = ls
    return m


def _perspective_gram(f, a, b) -> SymMatrix:
    """Perspective with the congruence formed as a Gram matrix Y^T Y.

    Along B + L_k -> B the congruence amplifies round-off in A by 1/||L_k||;
    the Gram form keeps it PSD.
    """
    root = mat_pow(b, 0.5).a
    iroot = mat_pow(b, -0.5).a
    y = mat_pow(a, 0.5).a @ iroot
    fc = apply_fn(f, _sym(y.T @ y))
    return _sym(root @ fc.a @ root)


def _ev_sing63(case, m):
    f = _fn(case["fn"])
    a, b = m["A"], m["B"]
    closed = perspective_singular(f, a, b)
    scale = max(1.0, op_norm(closed))
    seq = [_perspective_gram(f, a, _sym(b.a + l.a)) for l in m["L"]]
    rep = analyze_sequence(seq)
    e = 2.0 ** -(len(m["L"]) - 1)
    eps_val = _perspective_gram(f, a, _sym(b.a + e * np.eye(a.n)))
    err = op_norm(_sym(seq[-1].a - closed.a)) / scale
    err_eps = op_norm(_sym(eps_val.a - closed.a)) / scale
    v = max(err, err_eps)
    return v, {"err_seq": err, "err_eps": err_eps, "cauchy": float(rep.cauchy)}


def _cases_sing63(cfg):
    fns = _fns(cfg, ["pow(1/2)", "pow(2)", "warith(1/2)", _f_of("warith(1/2)"), _f_of("logmean")],
               lambda f: None if f.value_at_zero is not None else "f(0+) is infinite")
    return [{"fn": f, "steps": 25, "amp": 3.0, "min_dim": 3} for f in fns]


_register("SING-THM63", "P_f(A, B + L_k) with random PD L_k, ||L_k|| = 2^-k, converges to B^1/2 f(D(A/B)) B^1/2, as does P_f(A, B + eps I)",
          "f(0+) finite; A <= cB", ("singular",),
          cases=_cases_sing63, make=_gen_sing63, evaluate=_ev_sing63, tol=LIMIT_TOL)


def _gen_incomparable(spec, case):
    n = spec.dim
    r = max(1, n - 1)
    a = rand_psd_rank(spec, r, "A")
    b = rand_psd_rank(spec, r, "B")
    return {"A": a, "B": b}


def _ev_sing68(case, m):
    rep = eps_limit(_fn(case["fn"]), m["A"], m["B"])
    last = rep.diffs[-1] if rep.diffs else 0.0
    return (0.0 if rep.diverged else 1.0), {"last_diff": last}


def _cases_sing68(cfg):
    if cfg.fn is not None:
        f = _fn(cfg.fn)
        if f.slope_at_inf is not None and f.value_at_zero is not None:
            raise _Skip("precondition: needs f'(inf) = inf or f(0+) = inf")
        fns = [f.text()]
    else:
        fns = [_txt(s) for s in ("pow(2)", "pow(1.5)", _f_of("warith(1/2)"), _f_of("logmean"),
                                 "pow(-1/2)", _g_of("warith(1/2)"))]
    return [{"fn": f, "amp": 2.0} for f in fns]


_register("SING-PROP68", "supports in general position: the eps-regularized perspective diverges when f'(inf) = inf or f(0+) = inf",
          "A, B PSD with incomparable supports", ("singular",),
          cases=_cases_sing68, make=_gen_incomparable, evaluate=_ev_sing68)


def _cases_sing610(cfg):
    if cfg.fn is not None:
        f = _fn(_fns(cfg, [], lambda f: _need_pmi(f) or _need_omd_or_ocz(f))[0])
        rows = [(f.text(), _cls(f) == "omd")]
    else:
        rows = [(_txt(s), False) for s in F_PMI] + [(_txt(s), True) for s in G_PMI]
    ps = _ps(cfg, [0.25, 0.5, 0.75, 1.0], lambda p: 0 < p <= 1, "(0, 1]")
    return [{"fn": f, "p": p, "mode": "AH", "mirror": mir, "amp": 2.0} for f, mir in rows for p in ps]


_register("SING-PROP610", "pmi f in OC_+^1 with f(0+)=0 (pairs A <= cB) and pmi g in OMD_+^1 (pairs cA >= B) satisfy AH on (0,1]",
          "PSD pairs with ordered supports; 0 < p <= 1", ("singular",),
          cases=_cases_sing610, make=_gen_ordered, evaluate=_ev_ah)


def _ev_sing611(case, m):
    f = _fn(case["fn"])
    p = float(case["p"])
    a, b = m["A"], m["B"]
    P = _P(f, a, b)
    Pp = _P(f, _pw(a, p), _pw(b, p))
    ref = _pw(P, 2 * p - 1) * (op_norm(P) ** (1 - p))
    verdict = weak_log_majorize(Pp, ref) if p < 1 else weak_log_majorize(ref, Pp)
    return _v_maj(verdict), {}


def _cases_sing611(cfg):
    fns = _fns(cfg, F_PMI, lambda f: _need_pmi(f) or (None if f.value_at_zero == 0.0 else "f(0+) != 0"))
    ps = _ps(cfg, [0.5, 0.75, 1.0, 1.5, 2.0], lambda p: 0.5 <= p <= 2, "[1/2, 2]")
    return [{"fn": f, "p": p, "amp": 2 * max(1.0, p)} for f in fns for p in ps]


_register("SING-PROP611", "PSD pairs with s(A) <= s(B): P_f(A^p,B^p) <_wlog ||P||^(1-p) P^(2p-1) for p < 1, reversed for 1 <= p <= 2",
          "pmi f in OC_+^1 with f(0+)=0", ("singular", "majorization"),
          cases=_cases_sing611, make=_gen_ordered, evaluate=_ev_sing611)


def _cases_sing612(cfg):
    hs = _fns(cfg, ["pow(0.4)", "warith(1/2)", "logmean"], lambda f: _need_om(f) or _need_pmi(f))
    ps = _ps(cfg, [0.1, 0.25, 0.5], lambda p: 0 < p <= 0.5, "(0, 1/2]")
    return [{"fn": _f_of(h, n), "p": p, "mode": "AH", "n": n, "amp": n + 1.0}
            for h in hs for n in (2, 3) for p in ps]


_register("SING-PROP612", "PSD pairs with s(A) <= s(B): P_{t^n h} satisfies AH for p in (0,1/2], n >= 2, h pmi",
          "h pmi in OM_+^1; n in {2,3}", ("singular",),
          cases=_cases_sing612, make=_gen_ordered, evaluate=_ev_ah)


def ratio_limit_at_zero(f: ScalarFn, p: float):
    """Estimate ``lim_{t->0} f(t^p) / f(t)^p``; None when it appears to diverge.

    The ratio is sampled at t = 10^-k for k in {25, 50, 100, 200, 300} and
    its log is regressed on ``log |log t|``; a clearly positive slope with a
    growing tail is read as divergence, a clearly negative one as limit 0.
    """
    ks = np.array([25.0, 50.0, 100.0, 200.0, 300.0])
    t = 10.0**-ks
    with np.errstate(all="ignore"):
        r = np.asarray(f.eval(t**p), dtype=float) / np.asarray(f.eval(t), dtype=float) ** p
    if not np.all(np.isfinite(r)) or np.any(r <= 0):
        if np.all(np.isfinite(r)) and np.all(r == 0):
            return 0.0
        return None
    x = np.log(ks)
    y = np.log(r)
    slope = float(np.polyfit(x, y, 1)[0])
    if slope > 0.05 and r[-1] > r[0]:
        return None
    if slope < -0.05:
        return 0.0
    return float(r[-1])


def _ev_sing613(case, m):
    f = _fn(case["fn"])
    p = float(case["p"])
    a, b = m["A"], m["B"]
    lim0 = float(case["limit"])
    n = a.n
    P = _P(f, a, b)
    c = 1.0 / op_norm(P)
    Pp = _scaled_pp(f, a, b, c, p)
    from .perspective import _support_basis

    qs, _ = _support_basis(b)
    D = d_ratio(a, b)
    w = np.linalg.eigvalsh(qs.T @ D.a @ qs)
    w = np.where(np.abs(w) <= 1e-10 * max(1.0, float(np.max(np.abs(w)))), 0.0, w)
    vals = [lim0 if x == 0 else float(_ratio(f, np.array([x]), p)[0]) for x in w]
    if qs.shape[1] < n:
        vals.append(1.0)
    bound = max(vals)
    return _v_le(Pp, _eye(n, bound)), {"bound": bound}


def _cases_sing613(cfg):
    fns = _fns(cfg, [_f_of("logmean"), _f_of("warith(1/2)"), "pow(1.5)", _f_of("dual(logmean)")],
               lambda f: None if f.value_at_zero == 0.0 else "f(0+) != 0")
    ps = _ps(cfg, [0.5, 0.75, 1.0], lambda p: 0.5 <= p <= 1, "[1/2, 1]")
    out, gated = [], []
    for f in fns:
        lims = {p: ratio_limit_at_zero(_fn(f), p) for p in ps}
        for p in ps:
            if lims[p] is None and p < 1:
                gated.append(f"{f} p={p:g}")
                continue
            out.append({"fn": f, "p": p, "limit": 1.0 if p == 1 else lims[p], "amp": 2.0})
    if not out:
        raise _Skip("precondition: lim f(t^p)/f(t)^p at 0 is not finite for: " + ", ".join(gated))
    return out


def _run_sing613(check: Check, cfg: SuiteConfig) -> CheckOutcome:
    tol = cfg.tol
    try:
        cases = _cases_sing613(cfg)
    except _Skip as s:
        return CheckOutcome(check.check_id, "skipped", 0, 0.0, None, tol, s.reason)
    fns = {c["fn"] for c in cases}
    gated = []
    for f in (_fns(cfg, [_f_of("logmean"), _f_of("warith(1/2)"), "pow(1.5)", _f_of("dual(logmean)")])):
        if f not in fns:
            gated.append(f)
    agg = _loop(check, cfg, cases, tol)
    return _outcome_from_loop(check.check_id, agg, tol, {"gatedOut": gated})


_register("SING-PROP613", "PSD pairs with s(A) <= s(B), p in [1/2,1]: P_f(A,B) <= I gives P_f(A^p,B^p) <= ||f(D^p)/f(D)^p s(B) + s(B)^perp|| I when the ratio has a finite limit at 0",
          "f in OC_+^1 with f(0+)=0 and finite lim f(t^p)/f(t)^p at 0", ("singular",),
          runner=_run_sing613, make=_gen_ordered, evaluate=_ev_sing613)


def _ev_sing616(case, m):
    h = _fn(case["fn"])
    p = float(case["p"])
    a, b = m["A"], m["B"]
    al = _alpha(h)
    if case["form"] == "a":
        hs = _fn(f"adjoint({h.text()})")
        lhs = op_norm(_P(hs, _pw(a, p), _pw(b, p))) ** (1 / p)
        rhs = op_norm(dotted_exp(al, 1 - al, a, b))
    else:
        n = int(case["n"])
        lhs = op_norm(dotted_exp(n + al, 1 - n - al, a, b))
        rhs = op_norm(_P(times_t(h, n), _pw(a, p), _pw(b, p))) ** (1 / p)
    return _excess(lhs, rhs), {"lhs": lhs, "rhs": rhs}


def _cases_sing616(cfg):
    hs = _fns(cfg, ["warith(1/2)", "logmean", "geodesic(0:1/4,1/2:1/2,1:1/4)"],
              lambda f: _need_om(f) or _need_pmi(f))
    ps = _ps(cfg, [0.5, 1.0, 2.0])
    out = []
    for h in hs:
        for p in ps:
            amp = 2 * max(p, 1 / p)
            out.append({"fn": h, "p": p, "form": "a", "mirror": False, "amp": amp})
            out.append({"fn": h, "p": p, "form": "a", "mirror": True, "amp": amp})
            for n in (1, 2):
                out.append({"fn": h, "p": p, "form": "b", "n": n, "mirror": False, "amp": amp * (n + 1)})
    return out


_register("SING-PROP616", "PSD pairs: ||P_{h*}(A^p,B^p)^(1/p)|| <= ||exp(a log A +. (1-a) log B)||; for s(A) <= s(B) also ||exp((n+a) log A +. (1-n-a) log B)|| <= ||P_{t^n h}(A^p,B^p)^(1/p)||",
          "h pmi in OM_+^1 with h'(1) in (0,1); p > 0", ("singular",),
          cases=_cases_sing616, make=_gen_ordered, evaluate=_ev_sing616)


def _ev_cor617(case, m):
    al = float(case["alpha"])
    p = float(case["p"])
    a, b = m["A"], m["B"]
    P = _pw(_P(Power(al), _pw(a, p), _pw(b, p)), 1 / p)
    dx = dotted_exp(al, 1 - al, a, b)
    if al < 1:
        return _v_maj(log_majorize(P, dx)), {}
    return _v_maj(log_majorize(dx, P)), {}


def _cases_cor617(cfg):
    ps = _ps(cfg, [0.5, 1.0, 2.0])
    out = []
    for al in (0.3, 0.5, 0.8):
        for p in ps:
            for mir in (False, True):
                out.append({"alpha": al, "p": p, "mirror": mir, "amp": 2 * max(p, 1 / p)})
    for al in (1.5, 2.0):
        for p in ps:
            out.append({"alpha": al, "p": p, "mirror": False, "amp": 2 * al * max(p, 1 / p)})
    return out


_register("COR617", "PSD pairs: (B^p #_a A^p)^(1/p) <_log exp(a log A +. (1-a) log B) for a in (0,1); the reverse against P_{t^a} for a > 1 when s(A) <= s(B)",
          "a in (0,1) or a > 1; p > 0", ("singular", "majorization"),
          cases=_cases_cor617, make=_gen_ordered, evaluate=_ev_cor617)


# ---------------------------------------------------------------------------
# function-class equivalences


def _fn_margins(f: ScalarFn, m: dict) -> dict:
    """Sampled margins for the equivalent descriptions of t h(t), h operator monotone."""
    h = divide_by_t(f)
    g = Transpose(f)
    a, b, x, y = m["A"], m["B"], m["X"], m["Y"]
    mid = _sym(0.5 * (x.a + y.a))

    def convex_margin(fn):
        lhs = apply_fn(fn, mid)
        rhs = _sym(0.5 * (apply_fn(fn, x).a + apply_fn(fn, y).a))
        return loewner_margin(lhs, rhs)

    out = {
        "h_om": loewner_margin(apply_fn(h, a), apply_fn(h, b)),
        "g_omd": loewner_margin(apply_fn(g, b), apply_fn(g, a)),
        "g_oc": convex_margin(g),
        "f_oc": convex_margin(f),
    }
    return out


def _fn_scalar_flags(f: ScalarFn) -> dict:
    h = divide_by_t(f)
    g = Transpose(f)
    return {"g_bounded": math.isfinite(g.limits.inf), "f_zero": f.value_at_zero == 0.0,
            "h_zero_finite": math.isfinite(h.limits.zero)}


def _gen_fn_pairs(spec, case):
    m = _gen_order(spec, case)
    x = rand_spd(spec, "X")
    y = rand_spd(spec, "Y")
    return {"A": m["A"], "B": m["B"], "X": x, "Y": y}


def _ev_fn21(case, m):
    f = _fn(case["fn"])
    mg = _fn_margins(f, m)
    sc = _fn_scalar_flags(f)
    props = {
        "i": mg["h_om"],
        "ii": mg["g_omd"],
        "iii": mg["g_oc"] if sc["g_bounded"] else -math.inf,
        "iv": mg["f_oc"] if sc["f_zero"] else -math.inf,
        "v": mg["f_oc"] if sc["h_zero_finite"] else -math.inf,
    }
    return max(0.0, -min(props.values())), {f"margin_{k}": v for k, v in props.items()}


def _gen_fn22(spec, case):
    m = _gen_fn_pairs(spec, case)
    m["A2"] = rand_spd(spec, "A2")
    m["B2"] = rand_spd(spec, "B2")
    m["lam"] = float(spec.stream("lam").uniform(1)[0])
    return m


def _fn22_margins(f: ScalarFn, m: dict) -> dict:
    g = Transpose(f)
    a, b, x, y = m["A"], m["B"], m["X"], m["Y"]
    a2, b2, lam = m["A2"], m["B2"], float(m["lam"])
    mixed = _P(f, _sym(lam * x.a + (1 - lam) * a2.a), _sym(lam * y.a + (1 - lam) * b2.a))
    avg = _sym(lam * _P(f, x, y).a + (1 - lam) * _P(f, a2, b2).a)
    return {
        "vi": loewner_margin(mixed, avg) if f.value_at_zero == 0.0 else -math.inf,
        "vii": loewner_margin(_P(f, x, b), _P(f, x, a)),
        "viii": loewner_margin(_P(g, b, y), _P(g, a, y)),
    }


def _ev_fn22(case, m):
    props = _fn22_margins(_fn(case["fn"]), m)
    return max(0.0, -min(props.values())), {f"margin_{k}": v for k, v in props.items()}


FN_POSITIVE = [_f_of("warith(1/2)"), _f_of("logmean"), "pow(1.5)", "pow(2)", _f_of("wharm(1/2)"),
               _f_of("geodesic(0:1/4,1/2:1/2,1:1/4)")]
FN_NEGATIVE = ["pow(1/2)", "warith(1/2)", "pow(3)", "logmean"]
# refuting a property is a search, so it gets a floor on its budget
REFUTE_MIN_TRIALS = 50


def _fn_runner(margin_keys):
    def run(check: Check, cfg: SuiteConfig) -> CheckOutcome:
        tol = cfg.tol
        if cfg.fn is not None:
            f = _fn(cfg.fn)
            member = _need_om(divide_by_t(f)) is None and f.value_at_zero == 0.0
            pos, neg = ([f.text()], []) if member else ([], [f.text()])
        else:
            pos, neg = [_txt(s) for s in FN_POSITIVE], [_txt(s) for s in FN_NEGATIVE]
        cases = [{"fn": f, "expect": "all", "amp": 2.0} for f in pos]
        agg = _loop(check, cfg, cases, tol) if cases else \
            {"worst": 0.0, "witness": None, "trials": 0, "skips": 0, "cases": []}
        # outside the class every property must be refuted by some trial
        refute, unrefuted = {}, []
        for ci, f in enumerate(neg):
            case = {"fn": f, "expect": "none", "amp": 2.0}
            budget = max(cfg.trials, REFUTE_MIN_TRIALS)
            res = _pmap(lambda t: _one_trial(check, cfg, len(pos) + ci, case, t), range(budget), cfg)
            lowest = {k: math.inf for k in margin_keys}
            for out, _, _ in res:
                if out is None:
                    continue
                agg["trials"] += 1
                for k in margin_keys:
                    lowest[k] = min(lowest[k], out[2][f"margin_{k}"])
            refute[f] = {k: bool(lowest[k] < -tol) for k in margin_keys}
            miss = [k for k in margin_keys if not refute[f][k]]
            if miss:
                unrefuted.append(f"{f}: {','.join(miss)}")
        if agg["trials"] == 0:
            return CheckOutcome(check.check_id, "skipped", 0, 0.0, None, tol, "numeric: no trial completed")
        out = _outcome_from_loop(check.check_id, agg, tol, {"refuted": refute})
        if out.status != "fail" and unrefuted:
            out.status = "fail"
            out.reason = "properties neither all true nor all refuted: " + "; ".join(unrefuted)
        return out

    return run


_register("FN-PROP21", "h = f/t operator monotone iff g = t f(1/t) operator monotone decreasing iff g operator convex and bounded iff f operator convex with f(0+)=0 (sampled)",
          "f > 0 on (0,inf)", ("core", "perspectives"),
          runner=_fn_runner(["i", "ii", "iii", "iv", "v"]), make=_gen_fn_pairs, evaluate=_ev_fn21)
_register("FN-PROP22", "the same class iff P_f jointly convex with f(0+)=0 iff P_f right operator decreasing iff P_g left operator decreasing (sampled)",
          "f > 0 on (0,inf)", ("core", "perspectives"),
          runner=_fn_runner(["vi", "vii", "viii"]), make=_gen_fn22, evaluate=_ev_fn22)


# ---------------------------------------------------------------------------
# suites


SUITE_NAMES = ("core", "means", "perspectives", "majorization", "lie-trotter", "singular", "all")


def suite_members(name: str) -> list[str]:
    if name not in SUITE_NAMES:
        raise DomainViolation(f"unknown suite {name!r}; choose from {', '.join(SUITE_NAMES)}")
    if name == "all":
        return list(REGISTRY)
    return [cid for cid, c in REGISTRY.items() if name in c.suites]


def run_suite(name: str, cfg: SuiteConfig | None = None, progress: Callable | None = None) -> list[CheckOutcome]:
    """Outcomes for every registry id; ids outside the suite are reported as skipped."""
    cfg = cfg or SuiteConfig()
    members = set(suite_members(name))
    out = []
    for cid in REGISTRY:
        if cid in members:
            res = run_check(cid, cfg)
        else:
            res = CheckOutcome(cid, "skipped", 0, 0.0, None, cfg.tol, f"not-in-suite:{name}")
        if progress is not None:
            progress(res)
        out.append(res)
    return out


def describe() -> list[dict]:
    """Registry listing: id, statement and parameter domain."""
    return [{"checkId": c.check_id, "statement": c.summary, "domain": c.domain, "suites": list(c.suites)}
            for c in REGISTRY.values()]
