"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run directly (``python tests/test_acceptance.py``) for the summary alone;
under pytest the lines also appear in the terminal summary.
"""

from __future__ import annotations

import contextlib
import io as _stdio
import math
import random
import sys
import time
from fractions import Fraction
from functools import lru_cache
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from queuetion import (  # noqa: E402
    BidProfile,
    MechanismKind,
    enumerate_equilibria,
    gsp_revenue_upper,
    is_nash,
    make_profile,
    near_sorted_check,
    oracle_optimal_ordering,
    revenue_bounds,
    run_mechanism,
    smith_order,
    total_weighted_waiting,
    validate_instance,
    vcg_outcome,
    vcg_revenue_lower_dp,
    vcg_pairwise_follower_rate_sum,
    vcg_revenue_upper,
    vcg_revenue_upper_efficient,
    window_check,
)
from queuetion.io import random_instance  # noqa: E402

from conftest import random_bids  # noqa: E402

VCG, GSP = MechanismKind.VCG, MechanismKind.GSP
RESULTS: dict[str, str] = {}


def report(tag: str, ok: bool, detail: str) -> None:
    line = f"[{tag}] {'PASS' if ok else 'FAIL'}: {detail}"
    RESULTS[tag] = line
    print(line)
    assert ok, line


@lru_cache(maxsize=None)
def oracle_suite():
    """60 exact instances, N in 2..5, pairwise distinct value rates, with both equilibrium sets."""
    rng = random.Random(2024)
    out = []
    for _ in range(60):
        inst = random_instance(rng.randint(2, 5), rng, exact=True, distinct=True)
        out.append((inst, enumerate_equilibria(inst, VCG), enumerate_equilibria(inst, GSP)))
    return tuple(out)


def test_c01_efficient_order_is_optimal():
    rng = random.Random(1)
    start = time.perf_counter()
    worst_rel = 0.0
    mismatches = 0
    for i in range(200):
        n = rng.randint(1, 8)
        exact = i % 2 == 0
        inst = random_instance(n, rng, dist=rng.choice(["uniform", "lognormal"]), exact=exact)
        _, best = oracle_optimal_ordering(inst)
        got = total_weighted_waiting(inst, smith_order(inst))
        if exact:
            mismatches += got != best
        else:
            rel = (got - best) / max(abs(best), 1e-300)
            worst_rel = max(worst_rel, rel)
            mismatches += rel > 1e-9
    elapsed = time.perf_counter() - start
    report(
        "C1",
        mismatches == 0 and elapsed < 10,
        f"200 instances (100 exact, 100 float), N<=8: {mismatches} mismatches, "
        f"worst float rel gap {worst_rel:.1e}, {elapsed:.2f}s (< 10s)",
    )


def _equivalence(kind, seed):
    rng = random.Random(seed)
    disagree = 0
    counts = {True: 0, False: 0}
    for _ in range(500):
        inst = random_instance(rng.randint(1, 6), rng, exact=True)
        if kind is GSP and rng.random() < 0.3:
            # perturb the efficient-order maximum to land on or near the boundary
            from queuetion import max_equilibrium_bids_gsp

            base = max_equilibrium_bids_gsp(inst).bids
            bids = [b + Fraction(rng.randint(-2, 2), 2) for b in base]
            bids = [max(b, Fraction(0)) for b in bids]
        else:
            bids = random_bids(inst, rng)
        prof = make_profile(inst, kind, bids)
        dev = is_nash(inst, prof).equilibrium
        win = window_check(inst, prof).satisfied
        disagree += dev != win
        counts[dev] += 1
    return disagree, counts


def test_c02_vcg_window_equivalence():
    bad, counts = _equivalence(VCG, 2)
    report(
        "C2",
        bad == 0 and counts[True] > 0 and counts[False] > 0,
        f"500 VCG pairs, N<=6, exact: {bad} disagreements "
        f"({counts[True]} equilibria, {counts[False]} non-equilibria)",
    )


def test_c03_gsp_window_equivalence():
    bad, counts = _equivalence(GSP, 3)
    report(
        "C3",
        bad == 0 and counts[True] > 0 and counts[False] > 0,
        f"500 GSP pairs, N<=6, exact: {bad} disagreements "
        f"({counts[True]} equilibria, {counts[False]} non-equilibria)",
    )


def test_c04_equilibrium_orders_near_sorted():
    total = bad = unsorted_orders = 0
    for inst, vcg, _ in oracle_suite():
        for e in vcg.entries:
            total += 1
            bad += not near_sorted_check(inst, e.ordering)
        unsorted_orders += sum(
            1 for e in vcg.entries if e.ordering.sigma != smith_order(inst).sigma
        )
    report(
        "C4",
        bad == 0 and total > 0,
        f"{len(oracle_suite())} instances, N<=5: {total} VCG equilibria over all N! orders, "
        f"{unsorted_orders} not in efficient order, {bad} near-sortedness violations",
    )


def test_c05_vcg_upper_matches_oracle():
    bad = differs_rate_sum = 0
    for inst, vcg, _ in oracle_suite():
        bound = vcg_revenue_upper(inst).value
        bad += bound != max(vcg.revenues())
        differs_rate_sum += vcg_pairwise_follower_rate_sum(inst) != bound
    i3 = validate_instance([("A", 1, 3), ("B", 2, 4), ("C", 1, 1)])
    ok_i3 = vcg_revenue_upper(i3).value == 12 and vcg_pairwise_follower_rate_sum(i3) == 7
    report(
        "C5",
        bad == 0 and ok_i3,
        f"{len(oracle_suite())} instances, N<=5, exact: {bad} mismatches vs oracle max; "
        f"follower-rate sum differs on {differs_rate_sum}; I3 upper 12 vs rate sum 7",
    )


def _fit_exponent(sizes, times):
    xs = [math.log(n) for n in sizes]
    ys = [math.log(t) for t in times]
    mx, my = sum(xs) / len(xs), sum(ys) / len(ys)
    return sum((x - mx) * (y - my) for x, y in zip(xs, ys)) / sum((x - mx) ** 2 for x in xs)


def test_c06_dp_lower_matches_oracle_and_scales():
    bad = 0
    for inst, vcg, _ in oracle_suite():
        bad += vcg_revenue_lower_dp(inst).value != min(vcg.revenues())
    rng = random.Random(6)
    sizes, times = [100, 1000, 10000], []
    for n in sizes:
        inst = random_instance(n, rng)
        best = math.inf
        for _ in range(3):
            t0 = time.perf_counter()
            vcg_revenue_lower_dp(inst)
            best = min(best, time.perf_counter() - t0)
        times.append(best)
    slope = _fit_exponent(sizes, times)
    report(
        "C6",
        bad == 0 and slope < 2.3,
        f"{len(oracle_suite())} instances: {bad} mismatches vs oracle min; "
        f"DP times {', '.join(f'N={n}: {t:.3f}s' for n, t in zip(sizes, times))}; "
        f"fitted exponent {slope:.2f} (< 2.3)",
    )


def test_c07_gsp_upper_equals_vcg_upper_and_gsp_oracle():
    rng = random.Random(7)
    vs_vcg = 0
    for _ in range(200):
        inst = random_instance(rng.randint(1, 8), rng, exact=True, distinct=True)
        vs_vcg += gsp_revenue_upper(inst).value != vcg_revenue_upper(inst).value
    vs_oracle = 0
    efficient_ok = 0
    for inst, _, gsp in oracle_suite():
        g = gsp_revenue_upper(inst).value
        vs_oracle += g != max(gsp.revenues())
        efficient_ok += g == vcg_revenue_upper_efficient(inst).value
    suite = len(oracle_suite())
    report(
        "C7",
        vs_vcg == 0 and vs_oracle == 0,
        f"gsp_revenue_upper != vcg_revenue_upper on {vs_vcg}/200; != GSP oracle max on "
        f"{vs_oracle}/{suite} (N<=5); equals the efficient-order VCG maximum on {efficient_ok}/{suite}",
    )


def test_c08_witnesses_are_sound():
    checked = bad = 0
    for inst, _, _ in oracle_suite():
        bounds = [vcg_revenue_upper(inst), vcg_revenue_lower_dp(inst), gsp_revenue_upper(inst)]
        for kind in (VCG, GSP):
            rb = revenue_bounds(inst, kind)
            for (order, prof), value in ((rb.witness_lower, rb.lower), (rb.witness_upper, rb.upper)):
                checked += 1
                ok = is_nash(inst, prof, ordering=order).equilibrium
                ok = ok and run_mechanism(inst, prof, order).revenue == value
                bad += not ok
        for b in bounds:
            checked += 1
            ok = is_nash(inst, b.profile, ordering=b.ordering).equilibrium
            bad += not (ok and run_mechanism(inst, b.profile, b.ordering).revenue == b.value)
    report("C8", bad == 0, f"{checked} witnesses checked (exact): {bad} unsound")


def test_c09_truthful_vcg_inside_bounds():
    rng = random.Random(9)
    insts = [inst for inst, _, _ in oracle_suite()]
    insts += [random_instance(rng.randint(1, 12), rng, exact=True, distinct=True) for _ in range(200)]
    bad = 0
    for inst in insts:
        truthful = vcg_outcome(inst, BidProfile(VCG, inst.v)).revenue
        bad += not (vcg_revenue_lower_dp(inst).value <= truthful <= vcg_revenue_upper(inst).value)
    report("C9", bad == 0, f"{len(insts)} instances: {bad} truthful revenues outside [lower, upper]")


def test_c10_cli_contract(tmp_path):
    import test_cli
    from queuetion import cli

    def invoke(argv):
        out, err = _stdio.StringIO(), _stdio.StringIO()
        with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
            code = cli.main([str(a) for a in argv])
        return code, out.getvalue()

    golden_bad = [
        name
        for name, argv in test_cli.GOLDEN_CASES.items()
        if invoke(argv) != (0, (test_cli.GOLDEN / f"{name}.txt").read_text())
    ]
    cases = test_cli.test_exit_codes.pytestmark[0].args[1]
    exit_bad = [argv for argv, code in cases if invoke(argv)[0] != code]
    from unittest import mock

    from queuetion.equilibrium import WindowReport

    with mock.patch.object(cli, "window_check", lambda *a, **k: WindowReport(False, [])):
        verify = ["verify", test_cli.DATA / "I2.json", test_cli.DATA / "I2_vcg.json"]
        if invoke(verify)[0] != 4:
            exit_bad.append(verify)
    cases = list(cases) + [(None, 4)]
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for path in (a, b):
        invoke(["gen", "--n", 4, "--seed", 7, "-o", path])
    deterministic = a.read_bytes() == b.read_bytes()
    classes = sorted({code for _, code in cases})
    report(
        "C10",
        not golden_bad and not exit_bad and deterministic,
        f"{len(test_cli.GOLDEN_CASES)} golden outputs ({len(golden_bad)} differ); "
        f"{len(cases)} exit-code cases over codes {classes} ({len(exit_bad)} wrong); "
        f"gen determinism {'ok' if deterministic else 'broken'}",
    )


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-s", "-p", "no:cacheprovider"]))
