"""Smoke test for the invcurve extension module.

Build and install first:
    pip install --no-build-isolation -e crates/python
"""

import json
import math

import invcurve

LV = "vars x, y; params a, b, c, d; x' = x*(a*y + b); y' = y*(c*x + d)"


def check(label, ok):
    print(("ok   " if ok else "FAIL ") + label)
    return ok


def main():
    results = []

    s = invcurve.VectorField(LV, {"a": "1", "b": "2", "c": "1", "d": "2"})
    results.append(check("variables", s.variables == ["x", "y"]))
    results.append(check("x - y invariant when b = d", s.is_invariant("x - y") == "2"))
    results.append(check("x + y not invariant", s.is_invariant("x + y") is None))

    report = s.darboux(2)
    polys = sorted(p for p, _ in report.curves)
    results.append(check("darboux finds x, x - y, y", polys == ["x", "x - y", "y"]))

    verdict, witness, _ = invcurve.VectorField(LV, {"a": "1", "b": "2", "c": "1", "d": "3"}).minimality(2)
    results.append(check("certified with witness (-3, -2)", verdict == "STRONGLY_MINIMAL_CERTIFIED" and witness == ["-3", "-2"]))
    verdict, _, _ = s.minimality(2)
    results.append(check("criterion fails when b = d", verdict == "CRITERION_FAILS"))

    times, states, stop = s.integrate([1.0, 1.0], 0.1, 1e-3)
    results.append(check("integration completes", stop == "Completed" and math.isclose(times[-1], 0.1)))

    sols = invcurve.enumerate_transform_solutions("2", "3", "2", "3")
    results.append(check("direct transform", sols == [("DIRECT", "1", "0")]))
    results.append(check("no transform", invcurve.enumerate_transform_solutions("2", "3", "4", "5") == []))

    poly, cofactor = invcurve.invariant_family_b_eq_d("1", "b", "1")
    results.append(check("b = d family cofactor", cofactor == "b"))
    results.append(check("omega1 invariant", invcurve.omega1_invariant("2", "3")))

    normalized = invcurve.rosenlicht_normalize([("2", "x"), ("4", "y")])
    results.append(check("rosenlicht merges dependent logs", len(normalized) == 1))

    lv = invcurve.LVSystem("1", "1", "1", "1")
    r = lv.varma_residuals(1.0, 2.0, 0.1)
    results.append(check("closed-form residuals", max(abs(v) for v in r) < 1e-6))

    code, out, _ = invcurve.run_cli(["lv-ortho", "--b1", "2", "--d1", "3", "--b2", "3", "--d2", "2"])
    results.append(check("cli lv-ortho", code == 0 and json.loads(out)["command"] == "lv-ortho"))

    try:
        invcurve.VectorField("vars x; x' = x; x' = 2*x")
        results.append(check("duplicate equation raises", False))
    except invcurve.InvcurveError as e:
        results.append(check("duplicate equation raises", "DuplicateEquation" in str(e)))

    print(f"{sum(results)}/{len(results)} passed")
    return 0 if all(results) else 1


if __name__ == "__main__":
    raise SystemExit(main())
