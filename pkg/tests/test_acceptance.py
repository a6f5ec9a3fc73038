"""Acceptance criteria, one check per criterion.

Each ``check_cN`` returns a list of ``(part, ok, detail)`` triples.  The
matching test prints a single ``PASS``/``FAIL`` line for the criterion and
then asserts every part.  Run this file directly to print the summary
without pytest.
"""
import itertools
import math
import sys

import numpy as np
import pytest

from finsec import identities, matgen, seqlab
from finsec.symbols import FourierSymbol, random_symbol, sup_norm, winding_number

HORIZON = (32, 1024, 32)
T = FourierSymbol({1: 1})
T2 = FourierSymbol({2: 1})
T3 = FourierSymbol({3: 1})
TWO_PLUS_T = FourierSymbol({0: 2, 1: 1})
COS = FourierSymbol({1: 1, -1: 1})

_profiles = {}


def prof(seq_key, seq_factory, horizon):
    key = (seq_key, horizon)
    if key not in _profiles:
        _profiles[key] = seqlab.profile(seq_factory(), horizon)
    return _profiles[key]


def toeplitz_prof(a: FourierSymbol, horizon=HORIZON):
    return prof(("toeplitz", repr(a)), lambda: matgen.toeplitz_sequence(a), horizon)


# ---------------------------------------------------------------------------

def check_c1():
    rng = np.random.default_rng(20240101)
    worst_ratio, fails = 0.0, 0
    for _ in range(50):
        da, db = rng.integers(1, 9, size=2)
        a, b = random_symbol(rng, int(da)), random_symbol(rng, int(db))
        bound = 1e-12 * (1 + sup_norm(a) * sup_norm(b))
        for n in (16, 64, 256):
            r = identities.widom_check(a, b, n)
            worst_ratio = max(worst_ratio, r.max_residual / bound)
            fails += r.max_residual > bound
    return [("widom", fails == 0, f"150 checks, worst residual/bound = {worst_ratio:.3g}")]


def check_c2():
    v_good = seqlab.classify_stability(toeplitz_prof(TWO_PLUS_T))
    p_shift = toeplitz_prof(T)
    v_shift = seqlab.classify_stability(p_shift)
    tail_min = v_good.evidence["tail_min_sigma_1"]
    return [
        ("2+t Stable", v_good.label == "Stable" and tail_min >= 1 - 1e-6, f"{v_good.label}, tail-min {tail_min:.17g}"),
        ("t not Stable", v_shift.label != "Stable" and bool(np.all(p_shift.sigma(1) == 0)),
         f"{v_shift.label}, max sigma_1 {np.max(p_shift.sigma(1)):.3g}"),
    ]


def check_c3():
    parts = []
    for name, a in (("t", T), ("t^2", T2), ("t^3", T3), ("2+t", TWO_PLUS_T)):
        oracle = abs(winding_number(a))
        p = toeplitz_prof(a)
        v = seqlab.classify_fredholm(p)
        tail = p.tail_sizes(seqlab.TAIL, minimum=3)
        zero_ok = oracle == 0 or float(np.max(p.sigma(oracle, tail))) < 1e-6
        gap = float(np.min(p.sigma(oracle + 1, tail)))
        ok = v.alpha == oracle and zero_ok and gap >= 0.5
        parts.append((name, ok, f"{v.label}, winding oracle {oracle}, sigma_(alpha+1) tail-min {gap:.3g}"))
    return parts


def check_c4():
    p = toeplitz_prof(COS, (100, 1000, 30))
    parts = []
    for k in range(1, 6):
        at_1000 = float(p.sigma(k, [1000])[0])
        slope = seqlab.loglog_slope(p.sizes, p.sigma(k))
        parts.append((f"sigma_{k}", at_1000 < 0.05 and slope <= -0.9, f"{at_1000:.4g} at n=1000, slope {slope:.3f}"))
    return parts


def _rank3_block():
    rng = np.random.default_rng(3)
    U, _ = np.linalg.qr(rng.standard_normal((5, 5)))
    V, _ = np.linalg.qr(rng.standard_normal((5, 5)))
    return U @ np.diag([3.0, 2.0, 1.0, 0.0, 0.0]) @ V.T


def check_c5():
    v3 = seqlab.classify_compact(prof("rank3", lambda: matgen.compact_sequence(_rank3_block()), HORIZON))
    pg = prof("geometric", matgen.geometric_diagonal_sequence, HORIZON)
    vg = seqlab.classify_compact(pg)
    errs = [abs(seqlab.uniform_tail_sup(pg, k) - 2.0 ** (1 - k)) for k in range(1, seqlab.PROBE_DEPTH + 1)]
    return [
        ("rank 3", v3.label == "Compact(3)", v3.label),
        ("diag(2^-j)", vg.label == "Compact(inf)" and max(errs) <= 1e-12,
         f"{vg.label}, max |sup Sigma_k - 2^(1-k)| = {max(errs):.3g}"),
    ]


def check_c6():
    seq = matgen.toeplitz_sequence(T)
    p = prof("stab-t", lambda: seqlab.stabilize(seq, 1), HORIZON)
    ranks = [int(np.linalg.matrix_rank(seqlab.stabilizing_perturbation(seq(n), 1))) for n in p.sizes]
    s1 = float(np.min(p.sigma(1)))
    return [("stabilize t", max(ranks) <= 1 and s1 >= 1 - 1e-9, f"max rank {max(ranks)}, min sigma_1 {s1:.17g}")]


def check_c7():
    worst, nested = 0.0, True
    for seed in range(20):
        chain = matgen.random_interlace_chain(30, 10.0, np.random.default_rng(seed))
        seq = matgen.interlace_chain(chain)
        for n in range(1, 31):
            worst = max(worst, float(np.max(np.abs(np.linalg.eigvalsh(seq(n)) - chain.tuples[n - 1]))))
            if n < 30:
                nested &= bool(np.array_equal(seq(n), seq(n + 1)[:n, :n]))
    ex = matgen.exf340_sequence(40)
    ex_err, sets_ok = 0.0, True
    for n in range(4, 41):
        ev = np.linalg.eigvalsh(ex(n))
        target = np.array([0.0, 1.0, 3.0]) if n % 2 == 0 else np.array([0.0, 2.0, 3.0])
        ex_err = max(ex_err, float(np.max(np.min(np.abs(ev[:, None] - target[None, :]), axis=1))))
        sets_ok &= set(np.round(ev).astype(int)) == set(target.astype(int))
    return [
        ("random chains", worst <= 1e-9 and nested, f"20 chains, max error {worst:.3g}, nesting exact {nested}"),
        ("exf340", ex_err <= 1e-8 and sets_ok, f"max distance to target set {ex_err:.3g}"),
    ]


def _exf340_spectra():
    key = ("exf340-spectra",)
    if key not in _profiles:
        _profiles[key] = seqlab.sym_spectra(matgen.exf340_sequence(200), (20, 200, 5))
    return _profiles[key]


def check_c8():
    eps = [0.05, 0.1, 0.2]
    sp = _exf340_spectra()
    cls = {lam: seqlab.classify_point(None, lam, eps, spectra=sp) for lam in (0.0, 1.0, 2.0, 10.0)}
    parts = [
        ("exf340 lambda=0", cls[0.0].cls == "Essential", cls[0.0].cls),
        ("exf340 lambda=10", cls[10.0].cls == "Transient", cls[10.0].cls),
    ]
    for lam in (1.0, 2.0):
        pc = cls[lam]
        parts.append((f"exf340 lambda={lam:g}", pc.cls == "Mixed",
                      f"{pc.cls}, witnesses {pc.witnesses}"))
    grid = np.linspace(-3, 3, 41)
    rep = seqlab.dichotomy_scan(matgen.toeplitz_sequence(COS), grid, eps, (100, 1000, 50))
    e = max(eps)
    bad = [p.lam for p in rep.points
           if (abs(p.lam) < 2 - e and p.cls != "Essential") or (abs(p.lam) > 2 + e and p.cls != "Transient")
           or p.cls == "Mixed"]
    parts.append(("t+1/t scan", not bad, f"41 points, eps grid {eps}, offending {bad}"))
    return parts


def check_c9():
    seq = matgen.MatrixSequence(matgen.arveson_permutation, label="arveson")
    sp = seqlab.sym_spectra(seq, (100, 2000, 100))
    from finsec.spectra import count_in_interval

    counts = [count_in_interval(sp[n], -1e-8, 1e-8, snap=0.0) for n in sorted(sp)]
    mono = all(x <= y for x, y in zip(counts, counts[1:]))
    return [("zero multiplicity", mono and counts[-1] >= 2 * counts[0] > 0, f"counts {counts[0]} -> {counts[-1]}")]


def check_c10():
    rel_bad, proj_bad, diff_bad, boundary_bad = 0, 0, 0, 0
    for N in (2, 3):
        for n in range(1, 201):
            rel_bad += identities.cuntz_relations_check(N, n).max_residual != 0
            for k in (1, 2, 3):
                for word in itertools.product(range(N), repeat=k):
                    r = identities.cuntz_projection_check(N, word, n)
                    proj_bad += r.max_residual != 0
                    boundary_bad += r.details["boundary_mismatch"]
            diff_bad += identities.cuntz_difference_nonzero(N, n) != (n % N == 1)
        p = 1
        while N ** p <= 4096:
            diff_bad += identities.cuntz_difference_nonzero(N, N ** p)
            p += 1
    return [
        ("relations", rel_bad == 0, f"{rel_bad} nonzero residuals"),
        ("projection formula", proj_bad == 0, f"{proj_bad} mismatches, {boundary_bad} at ceiling boundaries"),
        ("difference pattern", diff_bad == 0, f"{diff_bad} violations"),
    ]


def check_c11():
    alt = matgen.MatrixSequence(matgen.alternating_diagonal, label="alternating_diag")
    sizes = list(range(10, 301))
    vf = seqlab.classify_fractal_normal(seqlab.normal_spectra(alt, sizes), eps=1e-9)
    p = prof("alt", lambda: alt, (10, 300, 1))
    even = p.restrict([n for n in sizes if n % 2 == 0])
    odd = p.restrict([n for n in sizes if n % 2])
    ve = seqlab.classify_compact(even)
    vo = seqlab.classify_fredholm(odd)
    odd_kernel = int(np.count_nonzero(np.diag(matgen.alternating_diagonal(11)) == 0))
    flip = matgen.MatrixSequence(matgen.block_flip, label="block_flip")
    vb = seqlab.classify_fractal_normal(seqlab.normal_spectra(flip, sizes), eps=0.1)
    kept = seqlab.extract_fractal_subsequence(prof("flip", lambda: flip, (10, 300, 1)))
    classes = {n % 2 for n in kept}
    return [
        ("alternating Fractal", vf.label == "Fractal", vf.label),
        ("even subsequence Compact", ve.classification == "Compact", ve.label),
        ("odd subsequence Fredholm", vo.classification == "Fredholm" and vo.alpha == odd_kernel,
         f"{vo.label}, kernel oracle {odd_kernel}"),
        ("block_flip NotFractal", vb.label == "NotFractal", f"{vb.label}, witness {vb.witness}"),
        ("block_flip extraction", len(classes) == 1, f"{len(kept)} sizes, parities {sorted(classes)}"),
    ]


def check_c12():
    r = identities.norm_formula_check(TWO_PLUS_T, HORIZON, bound=1e-2)
    return [("Sigma_1 -> 3", r.passed and r.details["monotone"],
             f"|Sigma_1(1024) - 3| = {r.max_residual:.3g}, monotone {r.details['monotone']}")]


def check_c13():
    rep = seqlab.alpha_parity_check(-np.eye(1), (10, 200, 1))
    ok = rep.kernel_dim == 1 and rep.odd_counts == (1,) and rep.even_counts == (2,)
    return [("d=1", ok, f"odd counts {rep.odd_counts}, even counts {rep.even_counts}")]


CRITERIA = {
    1: ("Widom identity exact", check_c1),
    2: ("stability criterion", check_c2),
    3: ("alpha-number formula", check_c3),
    4: ("not normally solvable", check_c4),
    5: ("compactness and essential rank", check_c5),
    6: ("stabilizing perturbation", check_c6),
    7: ("interlacing synthesis", check_c7),
    8: ("essential/transient classification", check_c8),
    9: ("Arveson permutation", check_c9),
    10: ("Cuntz identities", check_c10),
    11: ("fractality detectors", check_c11),
    12: ("norm formula", check_c12),
    13: ("non-constant weight", check_c13),
}


def summary_line(num: int, parts) -> str:
    title = CRITERIA[num][0]
    status = "PASS" if all(ok for _, ok, _ in parts) else "FAIL"
    body = "; ".join(f"{name} [{'ok' if ok else 'FAIL'}]: {detail}" for name, ok, detail in parts)
    return f"{status} C{num} {title} | {body}"


@pytest.mark.parametrize("num", sorted(CRITERIA), ids=lambda n: f"C{n}")
def test_criterion(num, capsys):
    parts = CRITERIA[num][1]()
    with capsys.disabled():
        print("\n" + summary_line(num, parts))
    failed = [f"{name}: {detail}" for name, ok, detail in parts if not ok]
    assert not failed, "; ".join(failed)


if __name__ == "__main__":
    status = 0
    for num in sorted(CRITERIA):
        parts = CRITERIA[num][1]()
        print(summary_line(num, parts))
        status |= not all(ok for _, ok, _ in parts)
    sys.exit(status)
