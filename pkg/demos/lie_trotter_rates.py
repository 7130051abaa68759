"""Convergence of P_f(A^p, B^p)^{1/p} to the log-Euclidean mean as p -> 0.

Halving p divides the error by about 4 for symmetric power perspectives
and by about 2 for the logarithmic mean.
"""
import numpy as np

from perspec import SymMatrix, log_euclidean, op_norm, parse_fn
from perspec.suite import lie_trotter_path

rng = np.random.default_rng(3)


def spd(n, cond):
    q, _ = np.linalg.qr(rng.standard_normal((n, n)))
    w = np.geomspace(1.0, cond, n)
    return SymMatrix((q * w) @ q.T)


a, b = spd(4, 1e2), spd(4, 1e2)
ps = [1e-2 * 2.0**-k for k in range(6)]
for text, alpha in [("pow(0.7)", 0.7), ("logmean", 0.5), ("tpow(1,pow(0.5))", 1.5)]:
    le = log_euclidean(alpha, a, b)
    errs = [op_norm(SymMatrix(m.a - le.a)) for m in lie_trotter_path(parse_fn(text), a, b, ps)]
    ratios = np.array(errs[1:]) / np.array(errs[:-1])
    print(f"{text:18s} ratios", np.array2string(ratios, precision=3))
