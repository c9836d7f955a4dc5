"""Acceptance criteria on the default grid p in {3, 5, 7}, f in {1, 2}, N = 10.

Each test records one line (criterion number, PASS/FAIL, detail) that is
printed in the terminal summary.
"""

from __future__ import annotations

import pytest

from deltagl.cli import main
from deltagl.inner import charpoly_lift_eval, inner_obstruction_witness
from deltagl.lifts import legendre_matrix
from deltagl.linalg import PMatrix, random_regular_diagonal
from deltagl.padic import PadicContext, principal_root_scalar
from deltagl.suites import REGISTRY, _derive_rng, run_check

PRIMES = (3, 5, 7)
DEGREES = (1, 2)
GRID = [(p, f) for p in PRIMES for f in DEGREES]
N = 10
SAMPLES = 100
SEED = 2024


def _run(suite, names, sizes, samples=SAMPLES, grid=GRID):
    """Run the named checks over the grid; return (failures, skipped, total samples)."""
    checks = dict(REGISTRY[suite])
    failures, skipped, total = [], [], 0
    for p, f in grid:
        ctx = PadicContext(p, f, N)
        for n in sizes:
            k = samples(n) if callable(samples) else samples
            for name in names:
                entry = run_check(suite, name, checks[name], ctx, n, k, SEED)
                total += entry["samples"]
                if entry.get("skipped"):
                    skipped.append(f"{name}@p={p},f={f},n={n}")
                if not entry["passed"]:
                    failures.append({"p": p, "f": f, "n": n, **entry})
    return failures, skipped, total


def _record(log, k, desc, failures, skipped, total, extra=""):
    detail = f"{total} samples"
    if skipped:
        detail += f", {len(skipped)} skipped configurations"
    if failures:
        detail += f", {len(failures)} failing checks"
    if extra:
        detail += f", {extra}"
    log[k] = (not failures, desc, detail)
    assert not failures, failures[:2]


def test_criterion_01_p_derivation(criterion_log):
    res = _run("padic", ["delta_additive", "delta_multiplicative"], [1], samples=200)
    _record(criterion_log, 1, "p-derivation axioms at N-1", *res)


def test_criterion_02_jet_group(criterion_log):
    names = ["ghost_homomorphism", "ghost_injective", "jet_group_axioms", "nabla_multiplicative"]
    _record(criterion_log, 2, "ghost homomorphism and nabla multiplicativity", *_run("jet", names, [1, 2, 3]))


def test_criterion_03_bracket(criterion_log):
    names = ["mod_p_formula", "antisymmetry", "jacobi", "linearity", "ex_commutator"]
    _record(criterion_log, 3, "bracket identities; ex commutator at N-(r+s)", *_run("bracket", names, [1, 2, 3]))


def _forms_per_size(n):
    # symmetric and antisymmetric, random and split: 4 forms for even n, 2 for odd n
    return 4 if n % 2 == 0 else 2


def test_criterion_04_chern_lift(criterion_log):
    res = _run("outer", ["chern_h_horizontal", "chern_b_symmetric"], [2, 3],
               samples=lambda n: SAMPLES * _forms_per_size(n))
    _record(criterion_log, 4, "Chern lift H-horizontal and B-symmetric at N-1, 100 points per form", *res)


def test_criterion_05_lambda_uniqueness(criterion_log):
    _record(criterion_log, 5, "series Lambda equals Hensel Lambda at N-1",
            *_run("outer", ["chern_lambda_uniqueness"], [1, 2, 3]))


def test_criterion_06_matrix_legendre(criterion_log):
    failures, skipped, total = _run("outer", ["legendre_scalar"], [1])
    more = _run("outer", ["legendre_eigen_form"], [2])
    failures += more[0]
    total += more[2]
    # the frozen example and the special case q = [[a, b], [b, a]]
    ctx = PadicContext(5, 1, N)
    if legendre_matrix(PMatrix.from_ints(ctx, [[2]])).signed()[0][0] != -4:
        failures.append({"example": "p=5, q=2"})
    for p in PRIMES:
        ctx = PadicContext(p, 1, N)
        for al, be in ((1, 2), (2, 1), (1, 3), (3, 1)):
            a, b = ctx.scalar(al), ctx.scalar(be)
            if (al - be) % p == 0 or (al + be) % p == 0 or (a**p * b.delta() - b**p * a.delta()).is_zero():
                continue
            U = PMatrix.from_ints(ctx, [[1, 1], [-1, 1]])
            D = PMatrix.diag(ctx, [principal_root_scalar((a**p - b**p) * (a - b).inv(), 2),
                                   principal_root_scalar((a**p + b**p) * (a + b).inv(), 2)])
            total += 1
            if not (U @ D @ U.inverse()).eq_at(legendre_matrix(PMatrix.from_scalars(ctx, [[a, b], [b, a]])), N - 1):
                failures.append({"special_case": (p, al, be)})
    _record(criterion_log, 6, "matrix Legendre symbol, n = 1 and n = 2 eigen form", failures, skipped, total)


def test_criterion_07_sl2_equals_sp2(criterion_log):
    _record(criterion_log, 7, "SL_2 and Sp_2 lifts agree at N-1", *_run("outer", ["sl2_equals_sp2"], [2]))


def test_criterion_08_fixed_locus(criterion_log):
    _record(criterion_log, 8, "Chern lift is the standard lift on the fixed locus",
            *_run("outer", ["fixed_locus_coincidence"], [2, 3]))


def test_criterion_09_cartan(criterion_log):
    _record(criterion_log, 9, "Cartan decomposition; l-delta Chern = (l-delta_0)^+",
            *_run("outer", ["cartan_decomposition"], [2, 3]))


def test_criterion_10_inner_lifts(criterion_log):
    names = ["charpoly_preserved", "conjugation_well_defined", "isospectral_twist", "charpoly_regular_diagonal"]
    failures, skipped, total = _run("inner", names, [2, 3])
    literal = _literal_regular_diagonal_failures()
    passed = not failures and not literal
    criterion_log[10] = (
        passed,
        "inner lifts: P_i preserved, conjugation lift well defined, twists isospectral",
        f"{total} samples; literal clause Phi**(t) = t^(p) fails on "
        f"{literal} of {_LITERAL_TOTAL} regular diagonals (see test_criterion_10_literal_regular_diagonal)",
    )
    assert not failures, failures[:2]


_LITERAL_TOTAL = 0


def _literal_regular_diagonal_failures():
    """Count regular diagonals t on the grid with Phi**(t) != t^(p) at N - 1."""
    global _LITERAL_TOTAL
    bad = total = 0
    for p, f in GRID:
        ctx = PadicContext(p, f, N)
        for n in (2, 3):
            if n >= ctx.q:
                continue
            rng = _derive_rng(SEED, "acceptance", "regular_diagonal", p, f, n)
            for _ in range(SAMPLES):
                t = random_regular_diagonal(ctx, n, rng)
                total += 1
                bad += not charpoly_lift_eval(t).eq_at(t.p_power(), N - 1)
    _LITERAL_TOTAL = total
    return bad


@pytest.mark.xfail(strict=True, reason="P-horizontality forces trace Phi**(t) = (sum t_i)^p, "
                                       "which differs from sum t_i^p; Lambda(t) = 1 is impossible")
def test_criterion_10_literal_regular_diagonal():
    assert _literal_regular_diagonal_failures() == 0


def test_criterion_11_solver(criterion_log):
    names = ["standard_flow", "chern_flow", "special_linear_flow", "isospectral_flow"]
    failures, skipped, total = _run("solver", names, [1, 2, 3])
    _record(criterion_log, 11, "solver: three equation forms and prime integrals at N-2, 20 triples per family",
            failures, skipped, total)


def test_criterion_12_witness(criterion_log):
    rep = inner_obstruction_witness(PadicContext(3, 1, N), (1, 1, 1, 2))
    ok = rep.valuation == 3 and rep.det_defect_valuation == 3 and rep.defect.eq_at(PadicContext(3, 1, N).scalar(216), N)
    criterion_log[12] = (ok, "obstruction witness at p = 3, (1, 1, 1, 2)", f"valuation {rep.valuation}, defect 216")
    assert ok


def test_criterion_13_determinism(criterion_log, tmp_path, monkeypatch):
    outs = []
    for i, threads in enumerate(("1", "4")):
        monkeypatch.setenv("DELTAGL_THREADS", threads)
        path = tmp_path / f"run{i}.json"
        main(["verify", "--suite", "all", "--seed", "42", "--out", str(path)])
        outs.append(path.read_bytes())
    ok = outs[0] == outs[1] and len(outs[0]) > 0
    criterion_log[13] = (ok, "verify --suite all --seed 42 is byte-identical across runs", f"{len(outs[0])} bytes")
    assert ok
