"""Where does the Ando-Hiai implication survive for a few power functions?

Runs a coarse p grid for each function and prints the survival interval
around p = 1 together with the first violation found above it.
"""
import numpy as np

from perspec import parse_fn
from perspec.suite import SuiteConfig, lambda_region_scan

cfg = SuiteConfig(trials=40, dim_max=4, seed=11)
grid = np.round(np.arange(0.25, 2.01, 0.25), 2)

for text in ["pow(1/2)", "pow(-1/2)", "pow(2)", "pow(3)"]:
    region = lambda_region_scan(parse_fn(text), grid, cfg)
    bad = [e["p"] for e in region.entries if e["verdict"] == "violated"]
    print(f"{text:10s} survives on {region.interval}  violated at {bad or 'none'}")
    if region.unsettled:
        print(f"{'':10s} open band {region.unsettled['band']}")
