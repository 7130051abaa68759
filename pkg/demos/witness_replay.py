"""Find a norm-inequality violation, then replay it from the stored witness.

The witness is plain JSON, so it can be saved and re-checked later with
``perspec replay``.
"""
import json

from perspec.suite import SuiteConfig, replay_witness, run_check

cfg = SuiteConfig(trials=50, dim_max=4, seed=5, fn="pow(-1/2)", p=(1.5,))
out = run_check("AH-NORM", cfg)
print(out.check_id, out.status, f"worst violation {out.max_rel_violation:.3e}")

if out.witness is not None:
    text = json.dumps(out.witness)
    again = replay_witness(json.loads(text))
    print("replayed violation", f"{again['violation']:.3e}", "reproduced:", again["violation"] > again["tolerance"])
