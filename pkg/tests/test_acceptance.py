"""Acceptance criteria 1 to 12 at their stated sample sizes and tolerances.

Each test appends one ``criterion N: PASS|FAIL ...`` line, printed in the
terminal summary.  Run directly (``python3 tests/test_acceptance.py``) to get
the same lines without pytest.  The full run takes roughly ten minutes.
"""

import json

import pytest

from dioflow import experiments as ex

pytestmark = pytest.mark.acceptance


def _brief(r: dict) -> str:
    stat = r["statistic"]
    if isinstance(stat, float):
        stat = f"{stat:.6g}"
    extra = ""
    for k in ("value", "mean", "expected", "tv", "max_prefix", "seconds", "argmin"):
        if k in r:
            v = r[k]
            extra += f" {k}={v:.6g}" if isinstance(v, float) else f" {k}={v}"
    return f"{r['law']}[N={r['N']}] stat={stat} gate={r['gate']}{extra} {'ok' if r['pass'] else 'FAILED'}"


def record(lines: list, n: int, recs: list[dict]) -> bool:
    ok = all(r["pass"] for r in recs)
    lines.append(f"criterion {n}: {'PASS' if ok else 'FAIL'} " + "; ".join(_brief(r) for r in recs))
    return ok


def _check(report, n, recs):
    ok = record(report, n, recs)
    assert ok, json.dumps(recs, default=str)


def test_criterion_01_oracle_equivalence(report):
    _check(report, 1, ex.check_oracle(100, 10**5))


def test_criterion_02_definition(report):
    _check(report, 2, ex.check_definition(20, 2000))


def test_criterion_03_doeblin_lenstra(report, d1_pool):
    _check(report, 3, ex.check_doeblin(d1_pool, 10**5, n_targets=50))


def test_criterion_04_lift_law(report, d1_pool):
    _check(report, 4, ex.check_lift(d1_pool, 10**5))


def test_criterion_05_congruences(report, d1_pool, d2_pool):
    _check(report, 5, ex.check_congruence(d1_pool, d2_pool, (2, 3, 4, 5), 10**5))


def test_criterion_06_khinchin_levy(report, d1_pool, d2_pool):
    _check(report, 6, ex.check_kl(d1_pool, d2_pool, n_targets=20))


def test_criterion_07_eps_radial(report, d1_pool, d2_pool):
    _check(report, 7, ex.check_eps_radial(d1_pool, d2_pool, 10**5))


def test_criterion_08_projected_lattices(report, d2_pool):
    _check(report, 8, ex.check_shape(d2_pool))


def test_criterion_09_case2_singularity(report):
    _check(report, 9, ex.check_case2(10**4))


def test_criterion_10_atoms(report):
    _check(report, 10, ex.check_atoms(10**3, 10**4, 1e-6))


def test_criterion_11_invariants(report):
    _check(report, 11, ex.check_invariants())


def test_criterion_12_performance(report):
    _check(report, 12, ex.check_performance(10**6, workers=8))


if __name__ == "__main__":
    lines: list[str] = []
    d1, d2 = ex.build_d1_pool(60), ex.build_d2_pool(48)
    runs = [
        (1, lambda: ex.check_oracle(100, 10**5)),
        (2, lambda: ex.check_definition(20, 2000)),
        (3, lambda: ex.check_doeblin(d1, 10**5, n_targets=50)),
        (4, lambda: ex.check_lift(d1, 10**5)),
        (5, lambda: ex.check_congruence(d1, d2, (2, 3, 4, 5), 10**5)),
        (6, lambda: ex.check_kl(d1, d2, n_targets=20)),
        (7, lambda: ex.check_eps_radial(d1, d2, 10**5)),
        (8, lambda: ex.check_shape(d2)),
        (9, lambda: ex.check_case2(10**4)),
        (10, lambda: ex.check_atoms(10**3, 10**4, 1e-6)),
        (11, ex.check_invariants),
        (12, lambda: ex.check_performance(10**6, workers=8)),
    ]
    for n, fn in runs:
        record(lines, n, fn())
        print(lines[-1], flush=True)
