"""Smoke test for the kaonbell_py extension module.

Build and install it first:

    pip install --no-build-isolation -e crates/py
"""

import csv
import io
import json
import math
import sys

import kaonbell_py as kb


def close(a, b, tol):
    return abs(a - b) <= tol


def main():
    failures = []

    def check(name, ok):
        print(("ok    " if ok else "FAIL  ") + name)
        if not ok:
            failures.append(name)

    params = kb.DecayParams()
    check("default constants", close(params.delta_m, 2 * math.pi / 13, 1e-15))
    check("survival at zero", kb.survival(0.0) == (1.0, 1.0))
    qp, qm = kb.q_weights(1.3)
    check("q weights sum to one", qp + qm == 1.0)

    check("asymmetry at 1.37", close(kb.qm_asymmetry(1.37), 0.634461, 1e-6))
    lo, hi = kb.lr_asymmetry_bounds(0.55, 1.92)
    check("LR bounds", close(lo, 0.330477, 1e-6) and close(hi, 0.471227, 1e-6))
    check("unlike strangeness at creation", kb.qm_joint("K0", "K0bar", 0.0, 0.0) == 0.5)

    model = kb.LrModel(0.5, 1.0)
    table = model.pair_state_table()
    check("pair table has 18 states summing to one", len(table) == 18 and close(sum(table), 1.0, 1e-12))
    check("LR single equals QM single",
          close(model.single("left", "K0"), kb.qm_single("K0", 0.5), 1e-12))
    check("LR asymmetry inside bounds",
          kb.lr_asymmetry_bounds(0.5, 1.0)[0] <= model.asymmetry() <= kb.lr_asymmetry_bounds(0.5, 1.0)[1])
    top = kb.LrModel.max_asymmetry(0.5, 1.0)
    check("max corner attains upper bound", close(top.asymmetry(), kb.lr_asymmetry_bounds(0.5, 1.0)[1], 1e-12))
    back = json.loads(model.to_json())
    check("model json", set(back) == {"tau1", "tau2", "p111_norm", "p112_norm", "p333_norm", "p334_norm"})

    sample = model.sample(200_000, seed=7)
    check("sampler counts", sum(sample["counts"]) == 200_000)
    check("sampler chi-square", sample["chi_square_p_value"] > 1e-3)
    check("sampler deterministic", model.sample(1000, seed=3)["counts"] == model.sample(1000, seed=3)["counts"])

    ext, text = kb.wigner_scan(p=1.5)
    rows = list(csv.DictReader(io.StringIO(text)))
    check("wigner scan", len(rows) == 2000 and 0.002 <= ext["value"] <= 0.003)
    check("spin wigner at pi/3", close(kb.wigner_w_spin(math.pi / 3), 0.125, 1e-15))

    lo_ext, _, _ = kb.chsh_scan(renormalized=True)
    check("renormalized CHSH minimum", -1.095 <= lo_ext["value"] <= -1.080)
    check("CHSH p independence", close(kb.chsh_s(0.7, p=0.0), kb.chsh_s(0.7, p=6.0), 1e-12))

    gap, _ = kb.asymmetry_discrepancy_scan(1.5)
    check("discrepancy scan", 0.18 <= gap["value"] <= 0.22)

    report = json.loads(kb.cplear_compare())
    check("CPLEAR rows compatible",
          all(r["qm_compatible"] and r["lr_compatible"] for r in report["rows"]))

    try:
        kb.qm_asymmetry(-1.0)
        check("negative time rejected", False)
    except ValueError:
        check("negative time rejected", True)

    print(f"{len(failures)} failure(s)")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
