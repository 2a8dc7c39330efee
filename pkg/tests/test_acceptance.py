"""Acceptance criteria, one check per criterion at its stated tolerance.

Run ``python3 tests/test_acceptance.py`` for a plain PASS/FAIL listing, or
through pytest (the listing is repeated in the terminal summary).
"""

import math
import time

import numpy as np
import pytest

from froude_bound.case_close import close_bound, close_params, jbar_integrals, phi
from froude_bound.case_far import far_case_bound
from froude_bound.case_moderate import (
    FIGURE1_REGION,
    dj_dhat,
    j1,
    j2,
    j_total,
    moderate_bound,
    verify_chain,
    verify_monotone,
)
from froude_bound.cli import TheoremConfig, cmd_optimize, cmd_theorem
from froude_bound.core import (
    R_MAX,
    bernoulli_from_depth,
    conjugate_depths,
    flow_force,
    script_S,
    verify_lemma_constants,
)
from froude_bound.numerics import integrate_adaptive

TABLE1 = {
    0.0: (0.80719, 1.37891),
    0.001: (0.80726, 1.37872),
    0.00201: (0.80739, 1.37838),
    0.005: (0.80796, 1.37694),
    0.01: (0.80924, 1.37368),
    0.05: (0.82508, 1.33429),
    0.09: (0.84498, 1.28744),
}
TABLE2 = {0.0: (0.80866, 1.37514), 0.001: (0.80800, 1.37683), 0.00201: (0.80740, 1.37837)}
THEOREM_FR = 1.37838

RESULTS: list[tuple[str, bool, str]] = []


def _timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0


def _table(solver, ref, tol_d, tol_fr, budget):
    rows, dt = _timed(lambda: {b: solver(b) for b in ref})
    worst_d = max(abs(rows[b].d_lower - d) for b, (d, _) in ref.items())
    worst_fr = max(abs(rows[b].fr_upper - fr) for b, (_, fr) in ref.items())
    ok = worst_d <= tol_d and worst_fr <= tol_fr and dt < budget
    return ok, f"max|dd|={worst_d:.1e} max|dFr|={worst_fr:.1e} time={dt:.2f}s"


def c01_table1():
    return _table(moderate_bound, TABLE1, 1e-4, 1.5e-4, 1.0)


def c02_table2():
    return _table(close_bound, TABLE2, 2e-4, 2e-4, 2.0)


def c03_far():
    b, dt = _timed(lambda: far_case_bound(0.95))
    ok = abs(b.d_lower - 0.82062) <= 1e-4 and abs(b.fr_upper - 1.34521) <= 1e-4 and dt < 0.1
    return ok, f"d={b.d_lower:.5f} Fr={b.fr_upper:.5f} time={dt:.3f}s"


def c04_endpoint():
    b = far_case_bound(1.0)
    ed = abs(b.d_raw - 2 ** (-1 / 3))
    ef = abs(b.fr_raw - math.sqrt(2))
    return ed <= 1e-9 and ef <= 1e-9, f"|d-2^(-1/3)|={ed:.1e} |Fr-sqrt2|={ef:.1e}"


def c05_monotone():
    cert, dt = _timed(lambda: verify_monotone(FIGURE1_REGION))
    rs = np.linspace(1.5, 1.5875, 50)
    edge = dj_dhat(rs, rs)
    ref = -1 / (18 * rs**5 * (1 - 2 * rs**3) ** 2)
    rel = float(np.max(np.abs(edge / ref - 1)))
    ok = cert.passed and rel <= 1e-12 and dt < 30
    return ok, f"max={cert.max_value:.3e} at {cert.worst_cell} edge_rel={rel:.1e} time={dt:.2f}s"


def c06_chain():
    rep = verify_chain()
    return rep.passed, f"steps={[c.name for c in rep.checks]} failures={rep.failures}"


def _j_oracle(e, r):
    y1 = r - 1 / (2 * e * e)
    g = lambda y: 1 / e - math.sqrt(2 * max(r - y, 0.0))  # noqa: E731
    i1 = integrate_adaptive(g, y1, e, tol=1e-13)
    i2 = integrate_adaptive(lambda y: g(y) ** 2, y1, e, tol=1e-13)
    return i1 * i1 / (2 * y1), 0.5 * i2


def c07_oracles():
    rng = np.random.default_rng(7)
    worst_j = 0.0
    for _ in range(200):
        r = rng.uniform(1.5, R_MAX)
        e = rng.uniform(0.95 * r, r)
        o1, o2 = _j_oracle(e, r)
        worst_j = max(worst_j, abs(j1(e, r) - o1), abs(j2(e, r) - o2))
    worst_b = 0.0
    for _ in range(200):
        p = close_params(rng.uniform(0.79, 0.82), rng.uniform(0.0, 0.005))
        c, q = jbar_integrals(p, "closed"), jbar_integrals(p, "quadrature")
        worst_b = max(worst_b, abs(c[0] - q[0]), abs(c[1] - q[1]))
    return max(worst_j, worst_b) <= 1e-10, f"J1/J2 {worst_j:.1e}, Jbar integrals {worst_b:.1e}"


def c08_derivative():
    rng = np.random.default_rng(8)
    h, worst = 1e-6, 0.0
    for _ in range(200):
        r = rng.uniform(1.5, R_MAX)
        e = rng.uniform(0.95 * r, r - 1e-3)
        fd = (j_total(e + h, r).j_total - j_total(e - h, r).j_total) / (2 * h)
        worst = max(worst, abs(dj_dhat(e, r) - fd))
    return worst <= 1e-6, f"max|dJ - FD|={worst:.1e}"


def c09a_optimize():
    res = cmd_optimize(1e-6)
    ok = 0.0019 <= res.beta_star <= 0.0021 and 1.37830 <= res.fr_star <= 1.37845
    return ok, f"beta*={res.beta_star:.7f} fr_star={res.fr_star:.5f}"


def c09b_theorem():
    rep = cmd_theorem(TheoremConfig())
    dev = abs(rep.fr_final - THEOREM_FR)
    ok = rep.passed and dev <= 1e-5 + 1e-12
    return ok, (
        f"fr_final={rep.fr_final:.5f} (target {THEOREM_FR} +/- 1e-5, off by {dev:.0e}) "
        f"beta*={rep.beta_star:.7f} certificates_passed={rep.certificates_passed}"
    )


def c10_lemma():
    rep = verify_lemma_constants(10_000)
    keys = ("c_hopf_depth", "d_crest_fraction_depth", "e_contradiction")
    ok = all(rep[k].passed for k in keys)
    return ok, " ".join(f"{k}={rep[k].value:.6g}" for k in keys)


def c11_properties():
    rng = np.random.default_rng(11)
    fails = []
    for r in rng.uniform(1.5 + 1e-6, R_MAX, 100):
        pair = conjugate_depths(r)
        if not (abs(bernoulli_from_depth(pair.d_minus) - r) < 1e-12 and abs(bernoulli_from_depth(pair.d_plus) - r) < 1e-12):
            fails.append("roundtrip")
    for d in rng.uniform(0.7, 1.0, 100):
        if abs(script_S(d, bernoulli_from_depth(d)) - flow_force(d)) > 1e-13:
            fails.append("S identity")
    for _ in range(100):
        r = rng.uniform(1.5, R_MAX)
        e = rng.uniform(0.95 * r, r)
        ev = j_total(e, r)
        if not (ev.j1 >= 0 and ev.j2 >= 0 and ev.j_total >= script_S(e, r)):
            fails.append("J >= S")
    for _ in range(100):
        p = close_params(rng.uniform(0.79, 0.9), rng.uniform(0.0, 0.05))
        y = rng.uniform(0.0, p.top)
        if phi(y, p) > math.sqrt(2 * (p.r - y)) * (1 + 1e-14):
            fails.append("phi envelope")
    mod = [moderate_bound(b).fr_upper for b in (0.0, 0.001, 0.005, 0.01, 0.05, 0.09)]
    close = [close_bound(b).fr_upper for b in (0.0, 0.0005, 0.001, 0.002, 0.003)]
    if any(a < b for a, b in zip(mod, mod[1:])):
        fails.append("moderate monotone")
    if any(a > b for a, b in zip(close, close[1:])):
        fails.append("close monotone")
    return not fails, "all properties hold" if not fails else f"failed: {sorted(set(fails))}"


CRITERIA = [
    ("1 moderate-case table", c01_table1),
    ("2 close-case table", c02_table2),
    ("3 far case", c03_far),
    ("4 endpoint exactness", c04_endpoint),
    ("5 monotonicity certificate", c05_monotone),
    ("6 chain verification", c06_chain),
    ("7 oracle equivalence", c07_oracles),
    ("8 derivative check", c08_derivative),
    ("9a optimization bracket", c09a_optimize),
    ("9b theorem constant", c09b_theorem),
    ("10 lemma constants", c10_lemma),
    ("11 property suite", c11_properties),
]


def _line(name, ok, detail):
    return f"{'PASS' if ok else 'FAIL'}  criterion {name}: {detail}"


@pytest.mark.parametrize("name, fn", CRITERIA, ids=[n.split()[0] for n, _ in CRITERIA])
def test_criterion(name, fn):
    ok, detail = fn()
    RESULTS.append((name, ok, detail))
    print(_line(name, ok, detail))
    assert ok, detail


if __name__ == "__main__":
    import sys

    failed = 0
    for name, fn in CRITERIA:
        ok, detail = fn()
        failed += not ok
        print(_line(name, ok, detail), flush=True)
    sys.exit(1 if failed else 0)
