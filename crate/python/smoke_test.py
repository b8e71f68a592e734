"""Smoke test for the weylspec extension module.

Build and install first, e.g.

    maturin build --release -m crates/py/Cargo.toml
    pip install target/wheels/weylspec-*.whl
"""

import json
import math

import weylspec


def check(name, ok, detail=""):
    print(f"{'ok  ' if ok else 'FAIL'} {name} {detail}")
    return ok


def main():
    results = []

    text = weylspec.parse_warp("r * exp(r^2 * sin(s/2)^2 + r)")
    results.append(check("parse_warp", "exp" in text, text))

    jet = weylspec.warp_jet("exp(r)", 1.5, 0.0)
    results.append(check("warp_jet", abs(jet["psi_rr"] - math.exp(1.5)) < 1e-12))

    k = weylspec.radial_curvature("appendix-surface(1)", 2.0, 0.0)
    results.append(check("appendix K(2,0)", abs(k + 2.0) < 1e-12, f"{k:.15f}"))

    rep = json.loads(weylspec.check_hypotheses("euclidean-cone(2)", "thm2", gamma=1.2))
    results.append(check("cone thm2", rep["verdict"] == "pass", rep["verdict"]))

    ratio, norm_u, _ = weylspec.residual("exp-model(2, 1, 0.5)", 0.5, 16)
    results.append(check("residual k=16", ratio < 0.05 and norm_u > 0, f"ratio={ratio:.4e}"))

    table = json.loads(weylspec.residual_sweep("exp-model(2, 1, 0.5)", [0.5], [8, 16, 32]))
    ratios = [row["ratio"] for row in table["rows"]]
    results.append(check("sweep decreasing", all(b < a for a, b in zip(ratios, ratios[1:]))))

    eigs = weylspec.radial_eigs("exp-model(2, 1, 0)", 0.0, 20.0, 1e-3, count=5)
    exact = [0.25 + (j * math.pi / 20) ** 2 for j in range(1, 6)]
    err = max(abs(a - b) / b for a, b in zip(eigs, exact))
    results.append(check("radial e^r oracle", err < 1e-4, f"max rel err {err:.2e}"))

    inside, margin = weylspec.horoball_margin(50.0, 400)
    results.append(check("horoball", inside and margin > 0, f"margin={margin:.4f}"))

    try:
        weylspec.residual("exp-model(2, 1, 0.5)", 0.1, 8)
        results.append(check("below-bottom rejected", False))
    except ValueError as e:
        results.append(check("below-bottom rejected", True, str(e)))

    if not all(results):
        raise SystemExit(1)


if __name__ == "__main__":
    main()
