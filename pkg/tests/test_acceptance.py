"""Acceptance criteria 1-13 at desk scale.

Each test prints one ``criterion N: PASS|FAIL`` line. Run directly with
``python tests/test_acceptance.py`` to get the summary without pytest.
"""

import json
import math
import sys

import numpy as np
import pytest

from perspec.cli import main as cli_main
from perspec.funclib import Adjoint, HalfSum, LogMean, Power, TPowTimes, catalog
from perspec.matcore import SymMatrix, apply_fn, eigh, op_norm
from perspec.perspective import (
    EXP,
    adjoint_identity_check,
    dotted_exp,
    kantorovich,
    log_euclidean,
    mean_sigma,
    perspective,
    regularized_log_sum_exp,
    transpose_identity_check,
)
from perspec.randgen import Stream, TrialSpec, orthogonal, rand_ordered_pair, rand_psd_rank, rand_spd
from perspec.suite import SuiteConfig, lambda_region_scan, replay_witness, run_check

SEED = 2024
REL_TOL = 1e-8


def _line(n: int, ok: bool, detail: str = ""):
    text = f"criterion {n}: {'PASS' if ok else 'FAIL'}" + (f"  {detail}" if detail else "")
    capman = _line.capman
    if capman is not None:
        with capman.global_and_fixture_disabled():
            print("\n" + text, flush=True)
    else:
        print(text, flush=True)


_line.capman = None


@pytest.fixture(autouse=True)
def _uncaptured(request):
    _line.capman = request.config.pluginmanager.getplugin("capturemanager")
    yield
    _line.capman = None


def _cfg(trials, **kw):
    return SuiteConfig(trials=trials, seed=SEED, **kw)


def _checks(ids, cfg):
    """Run checks and return (all passed, failing ids with reasons)."""
    bad = []
    for cid in ids:
        out = run_check(cid, cfg)
        if out.status != "pass":
            bad.append(f"{cid}[{cfg.fn or '*'}]:{out.status}:{out.reason or ''}".rstrip(":"))
    return not bad, bad


def _np_sym(stream, n):
    g = stream.normal(n * n).reshape(n, n)
    return (g + g.T) / 2


class TestAcceptance:
    def test_criterion_01_functional_calculus(self):
        worst_exp = 0.0
        for k in range(50):
            s = Stream(SEED, k, "exp-oracle")
            n = 2 + k % 7
            m = _np_sym(s, n)
            m /= np.max(np.sum(np.abs(m), axis=1))
            term, taylor = np.eye(n), np.eye(n)
            for j in range(1, 30):
                term = term @ m / j
                taylor = taylor + term
            worst_exp = max(worst_exp, float(np.max(np.abs(apply_fn(EXP, m).a - taylor))))
        worst_eig = 0.0
        for k in range(200):
            n = 1 + k % 16
            m = _np_sym(Stream(SEED, k, "eigh"), n)
            r = eigh(m).reconstruct() - m
            worst_eig = max(worst_eig, float(np.max(np.abs(r))) / max(1.0, float(np.max(np.abs(m)))))
        ok = worst_exp <= 1e-10 and worst_eig <= 1e-10
        _line(1, ok, f"exp oracle {worst_exp:.1e}, eigh residual {worst_eig:.1e}")
        assert ok

    def test_criterion_02_identities(self):
        worst_id, worst_mean = 0.0, 0.0
        for name, f in catalog().items():
            # growth order k of f; the adjoint route inverts a matrix whose
            # condition number is about cond^(2k+1), so cond is capped to keep it
            # inside the zero-eigenvalue threshold
            k = max(abs(math.log(f.eval(1e6))), abs(math.log(f.eval(1e-6)))) / math.log(1e6)
            cap = min(1e3, 1e9 ** (1.0 / (2.0 * k + 1.0)))
            adj = Adjoint(f)
            for t in range(200):
                cond = cap if t % 8 == 7 else float(Stream(SEED, t, "c").log_uniform(1.0, cap)[0])
                spec = TrialSpec(SEED, t, 2 + t % 7, cond)
                a, b = rand_spd(spec, "A"), rand_spd(spec, "B")
                worst_id = max(worst_id,
                               transpose_identity_check(f, a, b) / max(1.0, op_norm(perspective(f, b, a))),
                               adjoint_identity_check(f, a, b) / max(1.0, op_norm(perspective(adj, a, b))))
                # independent route: LAPACK eigh for A^{+-1/2} and the inner function
                w, q = np.linalg.eigh(a.a)
                ra, ia = (q * np.sqrt(w)) @ q.T, (q / np.sqrt(w)) @ q.T
                c = ia @ b.a @ ia
                wc, qc = np.linalg.eigh((c + c.T) / 2)
                want = ra @ ((qc * f.eval(wc)) @ qc.T) @ ra
                got = mean_sigma(f, a, b).a
                worst_mean = max(worst_mean, float(np.max(np.abs(got - want))) / max(1.0, float(np.max(np.abs(want)))))
        ok = worst_id <= 1e-8 and worst_mean <= 1e-10
        _line(2, ok, f"identity residual {worst_id:.1e}, mean_sigma consistency {worst_mean:.1e}")
        assert ok

    def test_criterion_03_mean_bounds(self):
        hs = ["pow(1/2)", "warith(1/2)", "wharm(1/2)", "logmean", "halfsum(0.3)"]
        ps = (1.0, 1.3, 1.7, 2.0, 0.3, 0.6, 0.9)
        bad, gap_at_one = [], 0.0
        for h in hs:
            cfg = _cfg(200, fn=h, p=ps)
            for cid in ("THM32-71", "THM32-72", "THM32-73", "THM32-74"):
                out = run_check(cid, cfg)
                if out.status != "pass":
                    bad.append(f"{cid}[{h}]")
                for c in out.details.get("cases", []):
                    if c["case"]["p"] == 1.0:
                        gap_at_one = max(gap_at_one, c["max"]["gap"])
        ok = not bad and gap_at_one <= 1e-9
        _line(3, ok, f"failures {bad or 'none'}, p=1 gap {gap_at_one:.1e}")
        assert ok

    def test_criterion_04_power_monotone_means(self):
        ps = (1.0, 2.0, 4.0, 8.0) + tuple(round(0.1 * k, 10) for k in range(1, 11))
        ok, bad = _checks(["COR33-75", "COR33-76", "COR33-77", "COR33-78", "COR38", "THM37-EQUIV"], _cfg(500, p=ps))
        _line(4, ok, f"failures {bad or 'none'}")
        assert ok

    def test_criterion_05_kantorovich(self):
        ok_checks, bad = _checks(["PROP310", "COR311"], _cfg(300, p=(1.0, 1.5, 2.0)))
        k1 = max(abs(kantorovich(xi, 1.0) - 1.0) for xi in (1.0, 1.5, 4.0, 100.0))
        k2 = max(abs(kantorovich(xi, 2.0) - (xi + 1) ** 2 / (4 * xi)) / ((xi + 1) ** 2 / (4 * xi))
                 for xi in (1.5, 4.0, 100.0))
        ok = ok_checks and k1 <= 1e-12 and k2 <= 1e-10
        _line(5, ok, f"failures {bad or 'none'}, |K(xi,1)-1| {k1:.1e}, K(xi,2) rel err {k2:.1e}")
        assert ok

    def test_criterion_06_weak_log_majorization(self):
        ps = (0.5, 0.75, 1.0, 1.5, 2.0)
        ids = ["PROP313-21", "PROP313-22", "PROP313-23", "PROP313-24"]
        cfg = _cfg(300, p=ps)
        bad, araki_trials = [], 0
        for cid in ids:
            out = run_check(cid, cfg)
            if out.status != "pass":
                bad.append(cid)
            araki_trials += sum(c["trials"] for c in out.details.get("cases", []) if c["case"].get("form") == "araki")
        ok = not bad and araki_trials >= 300
        _line(6, ok, f"failures {bad or 'none'}, Araki trials {araki_trials}")
        assert ok

    def test_criterion_07_halfsum_bound(self):
        out = run_check("PROP315", _cfg(500, fn="halfsum(0.1)", p=(1.5, 2.0, 3.0)))
        out2 = run_check("PROP315", _cfg(500, fn="halfsum(0.3)", p=(1.5, 2.0, 3.0)))
        suite_ok = out.status == "pass" and out2.status == "pass"
        # independent route: the commuting ratio as a spectral function of C
        worst_excess, approach = 0.0, {}
        for alpha in (0.1, 0.3):
            h = HalfSum(alpha)
            for p in (1.5, 2.0, 3.0):
                bound = 2.0 ** (p - 1)
                ratio = lambda w, h=h, p=p: h.eval(w**p) / h.eval(w) ** p
                best = 0.0
                for t in range(500):
                    cond = 1e6 if t % 2 == 0 else float(Stream(SEED, t, "cond").log_uniform(1.0, 1e6)[0])
                    spec = TrialSpec(SEED, t, 2 + t % 5, cond)
                    c = rand_spd(spec, "C") * float(spec.stream("scale").log_uniform(1e-3, 1e3)[0])
                    sup = op_norm(apply_fn(ratio, c))
                    worst_excess = max(worst_excess, sup / bound - 1.0)
                    if cond == 1e6:
                        best = max(best, sup / bound)
                approach[(alpha, p)] = best
        ok = suite_ok and worst_excess <= 1e-8 and min(approach.values()) > 0.9
        _line(7, ok, f"suite {'pass' if suite_ok else 'fail'}, max excess {worst_excess:.1e}, "
                     f"min sup/bound at cond 1e6 {min(approach.values()):.3f}")
        assert ok

    def test_criterion_08_region_calibration(self):
        cfg = _cfg(200)
        low = [round(0.05 * k, 10) for k in range(4, 20)]
        plans = {
            "pow(1/2)": (Power(0.5), low + [1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0],
                         lambda p: "violated" if p < 1 else "survived"),
            "pow(-1/2)": (Power(-0.5), [round(0.05 * k, 10) for k in range(1, 21)] + [1.1, 1.5, 2.0],
                          lambda p: "survived" if p <= 1 else "violated"),
            "pow(2)": (Power(2.0), [round(0.05 * k, 10) for k in range(1, 21)] + [1.1, 1.5, 2.0],
                       lambda p: "survived" if p <= 1 else "violated"),
            "pow(3)": (Power(3.0), [round(0.05 * k, 10) for k in range(1, 16)] + [1.05, 1.1, 1.5, 2.0],
                       lambda p: "survived" if p <= 0.75 else "violated"),
        }
        bad, replayed = [], 0
        for name, (f, grid, want) in plans.items():
            region = lambda_region_scan(f, grid, cfg)
            for e in region.entries:
                if e["verdict"] != want(e["p"]):
                    bad.append(f"{name}@{e['p']}:{e['verdict']}")
                if e["verdict"] == "violated":
                    w = e["witness"]
                    res = replay_witness(w) if w else None
                    if res is None or not res["violation"] > res["tolerance"]:
                        bad.append(f"{name}@{e['p']}:no replay")
                    else:
                        replayed += 1
        ok = not bad
        _line(8, ok, f"mismatches {bad or 'none'}, witnesses replayed {replayed}")
        assert ok

    def test_criterion_09_tn_h(self):
        bad = []
        for h in ("pow(0.4)", "warith(1/2)"):
            out = run_check("THM41", _cfg(300, fn=h, p=(0.1, 0.25, 0.5)))
            ns = {c["case"]["n"] for c in out.details.get("cases", [])}
            if out.status != "pass" or ns != {2, 3}:
                bad.append(h)
        ok = not bad
        _line(9, ok, f"failures {bad or 'none'}")
        assert ok

    def test_criterion_10_lie_trotter_window(self):
        fns = {"pow(0.7)": (Power(0.7), 0.7), "logmean": (LogMean(), 0.5),
               "tpow(1,pow(0.5))": (TPowTimes(1, Power(0.5)), 1.5)}
        steps = [1e-2 * 2.0**-k for k in range(8)]
        summary, ok = [], True
        for name, (f, a1) in fns.items():
            lo, hi, small, fn_ok = math.inf, -math.inf, 0.0, True
            for t in range(20):
                spec = TrialSpec(SEED, t, 2 + t % 5, float(Stream(SEED, t, "c").log_uniform(1.0, 1e3)[0]))
                a, b = rand_spd(spec, "A"), rand_spd(spec, "B")
                target = log_euclidean(a1, a, b)
                scale = op_norm(target)

                def err(p):
                    wa, qa = np.linalg.eigh(a.a)
                    wb, qb = np.linalg.eigh(b.a)
                    ap = SymMatrix((qa * wa**p) @ qa.T)
                    bp = SymMatrix((qb * wb**p) @ qb.T)
                    m = perspective(f, ap, bp).a
                    wm, qm = np.linalg.eigh((m + m.T) / 2)
                    return float(np.max(np.abs((qm * wm ** (1 / p)) @ qm.T - target.a)))

                e = [err(p) for p in steps]
                r = [e[k + 1] / e[k] for k in range(7)]
                lo, hi = min(lo, min(r)), max(hi, max(r))
                small = max(small, err(1e-4) / scale)
                if min(r) < 0.3 or max(r) > 0.7 or small > 1e-3:
                    fn_ok = False
            ok &= fn_ok
            summary.append(f"{name} {'ok' if fn_ok else 'out'} ratios [{lo:.3f},{hi:.3f}] err(1e-4)/scale {small:.1e}")
        _line(10, ok, "; ".join(summary))
        assert ok

    def test_criterion_11_log_euclidean_bounds(self):
        ok, bad = _checks(["COR53", "COR55", "PROP56", "PROP59", "COR510"], _cfg(200))
        _line(11, ok, f"failures {bad or 'none'}")
        assert ok

    def test_criterion_12_singular(self):
        ok_checks, bad = _checks(["SING-THM62", "SING-PROP68", "SING-THM63", "SING-PROP616", "COR617"], _cfg(200))
        worst = {"positive": 0.0, "negative": 0.0}
        for t in range(100):
            n = 3 + t % 4
            spec = TrialSpec(SEED, t, n, float(Stream(SEED, t, "c").log_uniform(1.0, 1e2)[0]))
            # alpha, beta > 0 with supports in general position
            a = rand_psd_rank(spec, n - 1, "A")
            b = rand_psd_rank(spec, n - 1, "B")
            want = dotted_exp(0.6, 0.4, a, b)
            got = regularized_log_sum_exp(0.6, 0.4, a, b, log_eps=-1e6)
            worst["positive"] = max(worst["positive"], op_norm(got - want) / max(1.0, op_norm(want)))
            # s(A) <= s(B), beta < 0 < alpha + beta
            a, b, _ = rand_ordered_pair(spec.child(rank=n - 1), "ord")
            q = orthogonal(spec.stream("sub"), n - 1)
            sb = eigh(b)
            basis = sb.eigenvectors[:, : n - 1] @ q[:, : n - 2]
            a = SymMatrix(basis @ np.diag(np.linspace(0.5, 2.0, n - 2)) @ basis.T)
            want = dotted_exp(1.5, -0.5, a, b)
            got = regularized_log_sum_exp(1.5, -0.5, a, b, log_eps=-1e6)
            worst["negative"] = max(worst["negative"], op_norm(got - want) / max(1.0, op_norm(want)))
        ok = ok_checks and max(worst.values()) <= 1e-4
        _line(12, ok, f"failures {bad or 'none'}, dotted-exp vs eps oracle {worst['positive']:.1e} / {worst['negative']:.1e}")
        assert ok

    def test_criterion_13_byte_identical_reports(self, tmp_path, capsys):
        first = tmp_path / "out.json"
        code = cli_main(["run", "--suite", "core", "--trials", "200", "--dim-max", "6", "--seed", "7",
                         "--report", str(first)])
        meta = json.loads(first.read_text())["meta"]
        cfg = meta["config"]
        again = tmp_path / "again.json"
        argv = ["run", "--suite", meta["selection"]["suite"], "--trials", str(cfg["trials"]),
                "--dim-max", str(cfg["dim_max"]), "--cond-max", repr(cfg["cond_max"]),
                "--seed", str(meta["seed"]), "--tol", repr(cfg["tol"]), "--report", str(again)]
        code2 = cli_main(argv)
        capsys.readouterr()
        ok = code == 0 and code2 == 0 and first.read_bytes() == again.read_bytes()
        _line(13, ok, f"exit codes {code}/{code2}, identical {first.read_bytes() == again.read_bytes()}")
        assert ok


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
