import math
import sys

import pyfracvar as fv


def check(cond, msg):
    if not cond:
        print("FAIL:", msg)
        sys.exit(1)


def main():
    check(abs(fv.gamma(0.5) - math.sqrt(math.pi)) < 1e-12, "gamma(1/2)")
    check(abs(fv.gamma(5.0) - 24.0) < 1e-10, "gamma(5)")

    w = fv.gl_weights(0.5, 8)
    check(w[0] == 1.0 and abs(w[1] + 0.5) < 1e-15, "GL weights")

    # Caputo half-derivative of t at t=1 is 2/sqrt(pi)
    n = 512
    t = [j / n for j in range(n + 1)]
    d = fv.caputo_deriv(t, 0.0, 1.0, 0.5, scheme="L1")
    check(abs(d[-1] - 2.0 / math.sqrt(math.pi)) < 1e-10, "power rule")

    ids = fv.case_ids()
    check("manu-cd-1d" in ids and "pure-time" in ids, "case registry")

    res = fv.solve("manu-cd-1d", nt=32, nx=32)
    check(res["scheme"] != "", "solve metadata")
    check(res["err_linf"] < 0.1, "manufactured solve accuracy, got %g" % res["err_linf"])

    ref = fv.solve("pure-time", nt=64, nx=8, solver="reference")
    var = fv.solve("pure-time", nt=64, nx=8)
    gap = max(abs(a - b) for a, b in zip(ref["values"], var["values"]))
    check(gap < 1e-12, "pure-time reduction, gap %g" % gap)

    rep = fv.run_lemmas(alpha=0.5, n=128, dim=1)
    check(rep["pass"], "lemma suite at n=128")
    check(len(rep["checks"]) >= 8, "lemma suite coverage")

    print("ok")


if __name__ == "__main__":
    main()
