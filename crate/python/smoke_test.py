"""Smoke test for the scarceval Python extension.

Build and install first:  pip install ./crates/py --no-build-isolation
Then run:                 python python/smoke_test.py
"""

import json
import math

import scarceval


def close(a, b, tol):
    assert math.isclose(a, b, abs_tol=tol), (a, b)


def main():
    assert math.isclose(scarceval.t_critical(1, one_tail=0.10), 3.0777, abs_tol=1e-4)
    close(scarceval.t_cdf(0.0, 5), 0.5, 1e-15)

    r = scarceval.t_interval([76.85, 81.99], 0.80, threshold=80)
    close(r.mean, 79.42, 1e-9)
    close(r.margin, 7.9096, 1e-3)
    close(r.lower, 71.51, 5e-3)
    close(r.upper, 87.33, 5e-3)
    assert r.df == 1
    assert r.verdict == "BORDERLINE_FAIL"
    second, first = r.agreement
    close(second, 0.9331, 1e-4)
    close(first, 0.9373, 1e-4)
    assert scarceval.EvaluationReport.from_json(r.to_json()) == r
    assert json.loads(r.to_json())["method"] == "T"

    a = scarceval.arf(85.2, 96.3, 0.25, threshold=80)
    close(a.lower, 70.77, 1e-9)
    assert a.upper == 100.0 and a.clamped == (False, True)
    assert a.verdict == "BORDERLINE_PASS"

    e = scarceval.evaluate([96.3], [85.2], 0.75)
    close(e.lower, 70.77, 1e-9)

    close(scarceval.kappa(0.6, 0.46), 0.2593, 1e-4)
    close(scarceval.kappa_matrix([[45, 15], [25, 15]]), 0.1304, 1e-4)
    close(scarceval.kappa_labels(["y", "n", "y", "n"], ["y", "n", "n", "n"]), 0.5, 1e-12)

    try:
        scarceval.arf(85, 90, 0.3)
    except scarceval.ScarcevalError as err:
        assert "0.3" in str(err)
    else:
        raise AssertionError("untabulated alpha accepted")
    assert issubclass(scarceval.ScarcevalError, ValueError)

    cov = scarceval.coverage(80, 5, 5, 0.9, 20_000, 7)
    close(cov["empirical_coverage"], 0.9, 0.01)
    rows = scarceval.sweep(80, 5, 0.8, 5_000, 1, [2, 5, 30])
    widths = [row["mean_halfwidth"] for row in rows]
    assert widths == sorted(widths, reverse=True), widths

    print("python smoke test passed")


if __name__ == "__main__":
    main()
