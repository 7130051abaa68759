"""Command-line front end: run checks, scan exponent regions, replay witnesses."""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys

import numpy as np

from . import __version__
from .funclib import parse_fn
from .majorization import LOG_TOL
from .matcore import PerspecError, SymMatrix, eigh
from .suite import (
    DEFAULT_TOL,
    LIMIT_TOL,
    REGISTRY,
    SUITE_NAMES,
    SuiteConfig,
    UnknownCheckId,
    _decode_inputs,
    _encode,
    describe,
    lambda_region_scan,
    replay_witness,
    run_check,
    run_suite,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
MAJORIZATION_CHECKS = {"PROP313-21", "PROP313-22", "PROP313-23", "PROP313-24", "COR314",
                       "COR55", "PROP56", "SING-PROP611", "COR617"}


class UsageError(Exception):
    pass


def parse_p(text: str) -> tuple:
    """``"1.5"``, ``"0.5,1,2"`` or an inclusive range ``"a:b:step"``."""
    try:
        if ":" in text:
            parts = [float(x) for x in text.split(":")]
            if len(parts) != 3 or parts[2] <= 0 or parts[1] < parts[0]:
                raise ValueError
            a, b, step = parts
            k = int(math.floor((b - a) / step + 1e-9))
            vals = [round(a + i * step, 12) for i in range(k + 1)]
        else:
            vals = [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"--p expects a number, a comma list or a:b:step, got {text!r}") from None
    if not vals or any(not math.isfinite(v) or v <= 0 for v in vals):
        raise UsageError("--p values must be positive and finite")
    return tuple(vals)


def _config(args) -> SuiteConfig:
    if args.fn is not None:
        parse_fn(args.fn)
    return SuiteConfig(
        trials=args.trials,
        dim_min=min(2, args.dim_max),
        dim_max=args.dim_max,
        cond_max=args.cond_max,
        seed=args.seed,
        tol=args.tol,
        fn=args.fn,
        p=parse_p(args.p) if args.p is not None else None,
    )


def _meta(cfg: SuiteConfig, **extra) -> dict:
    meta = {
        "seed": cfg.seed,
        "tolerances": {"relTol": cfg.tol, "limitTol": LIMIT_TOL, "logTol": LOG_TOL},
        "version": __version__,
        "config": cfg.to_dict(),
    }
    meta.update(extra)
    return meta


def dumps_report(doc: dict) -> str:
    """Canonical JSON text: sorted keys, fixed indentation, trailing newline."""
    return json.dumps(_encode(doc), sort_keys=True, indent=2, allow_nan=False) + "\n"


def _write(path: str, text: str):
    d = os.path.dirname(os.path.abspath(path))
    os.makedirs(d, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def outcomes_csv(outcomes) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["checkId", "status", "maxRelViolation"])
    for o in outcomes:
        w.writerow([o.check_id, o.status, repr(float(o.max_rel_violation))])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# plots


def _pyplot():
    try:
        import matplotlib
    except ImportError:
        raise UsageError("--plot-dir needs matplotlib (pip install 'artifact[plot]')") from None
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    plt.rcParams["svg.hashsalt"] = "perspec"
    plt.rcParams["svg.fonttype"] = "path"
    return plt


def _save(fig, path: str):
    fig.savefig(path, format="svg", metadata={"Date": None})


def plot_case_violations(outcome, path: str):
    """Worst relative violation per case against p (or case index)."""
    plt = _pyplot()
    cases = outcome.details.get("cases", [])
    fig, ax = plt.subplots(figsize=(6, 3.5))
    groups = {}
    for i, c in enumerate(cases):
        case = c["case"]
        key = case.get("fn", case.get("form", ""))
        x = case.get("p", i)
        groups.setdefault(str(key), []).append((float(x), max(float(c["maxRelViolation"]), 1e-18)))
    for key in sorted(groups):
        pts = sorted(groups[key])
        ax.plot([p for p, _ in pts], [v for _, v in pts], marker="o", label=key)
    ax.axhline(outcome.tolerance_used, color="k", ls="--", lw=0.8, label="tolerance")
    ax.set_yscale("log")
    ax.set_xlabel("p")
    ax.set_ylabel("max relative violation")
    ax.set_title(outcome.check_id)
    if groups:
        ax.legend(fontsize=6)
    fig.tight_layout()
    _save(fig, path)
    plt.close(fig)


def plot_staircase(a: SymMatrix, b: SymMatrix, path: str, title: str, labels=("left", "right")):
    """Prefix sums of descending log-eigenvalues of both sides."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(5, 3.5))
    for m, lab in zip((a, b), labels):
        w = np.asarray(eigh(m).eigenvalues, dtype=float)
        with np.errstate(divide="ignore"):
            s = np.cumsum(np.log(np.maximum(w, 1e-300)))
        ax.step(np.arange(1, len(s) + 1), s, where="mid", label=lab)
    ax.set_xlabel("k")
    ax.set_ylabel("sum of k largest log-eigenvalues")
    ax.set_title(title)
    ax.legend()
    fig.tight_layout()
    _save(fig, path)
    plt.close(fig)


def plot_region(region, path: str):
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6, 3.5))
    ps = [e["p"] for e in region.entries]
    vs = [max(float(e["worst"]), 1e-18) for e in region.entries]
    colors = ["tab:red" if e["verdict"] == "violated" else "tab:green" for e in region.entries]
    ax.plot(ps, vs, color="0.6", lw=0.8)
    ax.scatter(ps, vs, c=colors, s=18, zorder=3)
    if region.interval:
        ax.axvspan(region.interval[0], region.interval[1], color="tab:green", alpha=0.12)
    if region.unsettled:
        lo, hi = region.unsettled["band"]
        ax.axvspan(lo, hi, color="tab:orange", alpha=0.12)
    ax.set_yscale("log")
    ax.set_xlabel("p")
    ax.set_ylabel("worst relative violation")
    ax.set_title(f"exponent scan: {region.fn}")
    fig.tight_layout()
    _save(fig, path)
    plt.close(fig)


def _safe_name(s: str) -> str:
    return "".join(ch if ch.isalnum() or ch in "-_." else "_" for ch in s)


# ---------------------------------------------------------------------------
# commands


def cmd_run(args) -> int:
    cfg = _config(args)
    if args.check:
        if args.check not in REGISTRY:
            raise UnknownCheckId(args.check)
        outcomes = [run_check(args.check, cfg)]
        selection = {"check": args.check}
    else:
        name = args.suite or "core"
        if name not in SUITE_NAMES:
            raise UsageError(f"unknown suite {name!r}")
        outcomes = run_suite(name, cfg)
        selection = {"suite": name}
    doc = {"meta": _meta(cfg, selection=selection), "outcomes": [o.to_dict() for o in outcomes]}
    if args.report:
        _write(args.report, dumps_report(doc))
    if args.csv:
        _write(args.csv, outcomes_csv(outcomes))
    if args.plot_dir:
        os.makedirs(args.plot_dir, exist_ok=True)
        for o in outcomes:
            if o.status == "skipped" or not o.details.get("cases"):
                continue
            plot_case_violations(o, os.path.join(args.plot_dir, _safe_name(o.check_id) + ".svg"))
            if o.check_id in MAJORIZATION_CHECKS and o.witness:
                inp = _decode_inputs(o.witness["inputs"])
                mats = [v for v in inp.values() if isinstance(v, SymMatrix)]
                if len(mats) >= 2:
                    plot_staircase(mats[0], mats[1], os.path.join(
                        args.plot_dir, _safe_name(o.check_id) + "-witness-spectra.svg"),
                        f"{o.check_id} witness inputs", ("A", "B"))
    counts = {s: sum(o.status == s for o in outcomes) for s in ("pass", "fail", "skipped")}
    for o in outcomes:
        if o.reason and o.reason.startswith("not-in-suite"):
            continue
        line = f"{o.status.upper():7s} {o.check_id:14s} trials={o.trials:<7d} maxRelViolation={o.max_rel_violation:.3e}"
        if o.reason:
            line += f"  ({o.reason})"
        print(line)
    print(f"pass={counts['pass']} fail={counts['fail']} skipped={counts['skipped']}")
    return EXIT_FAIL if counts["fail"] else EXIT_OK


def cmd_scan(args) -> int:
    if args.fn is None:
        raise UsageError("scan needs --fn")
    cfg = _config(args)
    grid = cfg.p if cfg.p is not None else parse_p("0.05:2:0.05")
    region = lambda_region_scan(parse_fn(args.fn), grid, cfg)
    doc = {"meta": _meta(cfg, selection={"scan": region.fn}), "region": region.to_dict()}
    if args.report:
        _write(args.report, dumps_report(doc))
    if args.plot_dir:
        os.makedirs(args.plot_dir, exist_ok=True)
        plot_region(region, os.path.join(args.plot_dir, "scan-" + _safe_name(region.fn) + ".svg"))
    for e in region.entries:
        src = f" via {e['source']}" if e["source"] else ""
        print(f"p={e['p']:<8g} {e['verdict']:9s} trials={e['trials']:<5d} worst={e['worst']:.3e}{src}")
    if region.interval:
        print(f"survival interval around 1: [{region.interval[0]:g}, {region.interval[1]:g}]")
    else:
        print("survival interval around 1: none")
    if region.unsettled:
        print(f"open band {tuple(region.unsettled['band'])}: survived {region.unsettled['survived']}, "
              f"violated {region.unsettled['violated']}")
    return EXIT_OK


def _load_witness(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot read witness file: {exc}") from None
    if isinstance(doc, dict) and "check" in doc and "inputs" in doc:
        return doc
    if isinstance(doc, dict) and "outcomes" in doc:
        for o in doc["outcomes"]:
            if isinstance(o, dict) and o.get("witness"):
                return o["witness"]
        raise UsageError("report holds no witness")
    if isinstance(doc, dict) and "region" in doc:
        for e in doc["region"].get("entries", []):
            if e.get("witness"):
                return e["witness"]
        raise UsageError("scan report holds no witness")
    raise UsageError("file is neither a witness, a run report nor a scan report")


def cmd_replay(args) -> int:
    w = _load_witness(args.witness)
    try:
        res = replay_witness(w)
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"malformed witness: {exc}") from None
    print(f"check: {res['check']}")
    print(f"case: {json.dumps(w.get('case'), sort_keys=True)}")
    for k, v in sorted(res["info"].items()):
        print(f"  {k} = {v!r}")
    print(f"violation: {res['violation']!r} (recorded {res['recorded']!r}, tolerance {res['tolerance']!r})")
    if args.plot_dir and res["check"] in MAJORIZATION_CHECKS:
        inp = _decode_inputs(w["inputs"])
        mats = [v for v in inp.values() if isinstance(v, SymMatrix)]
        if len(mats) >= 2:
            os.makedirs(args.plot_dir, exist_ok=True)
            plot_staircase(mats[0], mats[1], os.path.join(args.plot_dir, "replay-spectra.svg"),
                           res["check"], ("A", "B"))
    reproduced = res["violation"] > res["tolerance"]
    print("reproduced" if reproduced else "not reproduced")
    return EXIT_OK if reproduced else EXIT_FAIL


def cmd_list(args) -> int:
    for d in describe():
        print(f"{d['checkId']}\n    {d['statement']}\n    domain: {d['domain']}\n    suites: {', '.join(d['suites'])}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="perspec", description="Randomized checks of operator perspective inequalities.")
    ap.add_argument("--version", action="version", version=f"perspec {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--fn", help="function descriptor, e.g. 'pow(0.5)' or 'tpow(1,warith(1/2))'")
        p.add_argument("--p", help="exponent: number, comma list or a:b:step")
        p.add_argument("--trials", type=int, default=200)
        p.add_argument("--dim-max", type=int, default=6)
        p.add_argument("--cond-max", type=float, default=1e3)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--tol", type=float, default=DEFAULT_TOL)
        p.add_argument("--report", help="write the JSON report here")
        p.add_argument("--plot-dir", help="write SVG plots into this directory")

    r = sub.add_parser("run", help="run a suite or a single check")
    g = r.add_mutually_exclusive_group()
    g.add_argument("--suite", choices=SUITE_NAMES)
    g.add_argument("--check")
    common(r)
    r.add_argument("--csv", help="write checkId,status,maxRelViolation rows here")
    r.set_defaults(func=cmd_run)

    s = sub.add_parser("scan", help="exponent-region scan of the Ando-Hiai implication")
    common(s)
    s.set_defaults(func=cmd_scan)

    rp = sub.add_parser("replay", help="re-evaluate a stored witness")
    rp.add_argument("witness", help="witness JSON, or a run/scan report holding one")
    rp.add_argument("--plot-dir")
    rp.set_defaults(func=cmd_replay)

    ls = sub.add_parser("list", help="list registry checks")
    ls.set_defaults(func=cmd_list)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"perspec: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except UnknownCheckId as exc:
        print(f"perspec: unknown check id {exc.args[0]!r}; see 'perspec list'", file=sys.stderr)
        return EXIT_USAGE
    except PerspecError as exc:
        print(f"perspec: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
