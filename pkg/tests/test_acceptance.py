"""Acceptance criteria, one check each.

Every check prints a single ``AC<n> PASS|FAIL: ...`` line.  Run with
``pytest -s tests/test_acceptance.py`` to see the lines inline, or as a
script (``python3 tests/test_acceptance.py``) for a plain report.
"""
import random
import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from hypercubical.cellcx import (  # noqa: E402
    CubicalComplex,
    chain_complex,
    complex_isomorphic,
    contract_edges,
    delete_edges,
    euler_characteristic,
    hm_skeleton,
    one_skeleton,
    tesseract_boundary,
)
from hypercubical.cover import check_covering, cover_complex, pi1_presentation, standard_labeling  # noqa: E402
from hypercubical.groups import (  # noqa: E402
    abelianization,
    cayley_graph,
    graph_isomorphic,
    parse_presentation,
    presentation_isomorphic_to,
    quaternion_group,
    relabel,
    todd_coxeter,
)
from hypercubical.homology import (  # noqa: E402
    HomologySignature as HS,
    IntegerMatrix,
    coinvariants,
    homology,
    restrict_to_z,
    smith_normal_form,
)
from hypercubical.resolution import (  # noqa: E402
    bar_complex_coinvariants,
    bar_resolution_oracle,
    group_homology,
    hm_resolution,
)
from oracles import FIGURE_EDGES, Q_HOMOLOGY, STATED_JOIN2_ZQ_RANKS  # noqa: E402

Q = quaternion_group()
CORPUS = Path(__file__).parent / "corpus"


def report(tag, ok, detail, elapsed, budget):
    within = elapsed < budget
    status = "PASS" if ok and within else "FAIL"
    line = f"{tag} {status}: {detail} [{elapsed:.2f}s, budget {budget:g}s]"
    print(line, flush=True)
    return ok and within, line


# ---------------------------------------------------------------------------


def ac1():
    texts = {
        "four-generator": "<e, i, j, k | i^2=e, j^2=e, k^2=e, ijk=e, e^2=1>",
        "two-generator": "<i, j | i^4=1, i^2=j^2, iji=j>",
        "symmetric": "<i, j | i=jij, j=iji>",
    }
    orders, isos = {}, {}
    for name, text in texts.items():
        P = parse_presentation(text)
        orders[name] = todd_coxeter(P)[0]
        isos[name] = presentation_isomorphic_to(P, Q) is not None
    ok = all(o == 8 for o in orders.values()) and all(isos.values())
    return ok, f"orders {orders}, isomorphic to Q: {all(isos.values())}"


def ac2():
    P = pi1_presentation(hm_skeleton(2), {"w"})
    assign = presentation_isomorphic_to(P, Q)
    ok = assign is not None
    shown = {P.generators[g]: Q.elements[x] for g, x in assign.items()} if ok else None
    return ok, f"pi1 {P} isomorphic to Q via {shown}"


def ac3():
    cov = cover_complex(hm_skeleton(3), standard_labeling())
    counts = cov.total.counts()
    iso = complex_isomorphic(cov.total, tesseract_boundary()) is not None
    phi = standard_labeling()
    one = cover_complex(hm_skeleton(1), phi).total
    n = Q.order
    rule = sum(
        one.edges[p * n + g] == (g, n + Q.mul(g, phi.label(p)))
        for p in range(4)
        for g in range(n)
    )
    seen = {}
    for k, (s, t) in enumerate(one.edges):
        seen.setdefault(one.vertices[s], {})[one.edge_names[k].split(".")[0]] = one.vertices[t]
    figure = seen == FIGURE_EDGES
    ok = counts == (16, 32, 24, 8) and iso and rule == 32 and figure
    return ok, f"counts {counts}, tesseract-isomorphic {iso}, edge rule {rule}/32, figure table match {figure}"


def ac4():
    cov = cover_complex(hm_skeleton(3), standard_labeling())
    problems = check_covering(cov)
    n = Q.order
    checked = 0
    free = True
    for d, cnt in enumerate(cov.total.counts()):
        for i in range(cnt):
            checked += 1
            orbit = {cov.action[h][d][i] for h in range(n)}
            free &= len(orbit) == n
    ok = not problems and free
    return ok, f"{checked} cover cells checked over {sum(cov.base.counts())} base cells, free {free}, problems {len(problems)}"


def ac5():
    h_hm = homology(chain_complex(hm_skeleton(3)))
    h_t = homology(chain_complex(tesseract_boundary()))
    ab = abelianization(parse_presentation("<i, j | i=jij, j=iji>"))
    ab_pi1 = abelianization(pi1_presentation(hm_skeleton(2), {"w"}))
    ok = (
        h_hm == [HS(1), HS(0, (2, 2)), HS(), HS(1)]
        and h_hm[1] == ab == ab_pi1
        and h_t == [HS(1), HS(), HS(), HS(1)]
    )
    return ok, f"H(HM) = ({'; '.join(map(str, h_hm))}), abelianization {ab}, H(tesseract) = ({'; '.join(map(str, h_t))})"


def ac6():
    cov = cover_complex(hm_skeleton(1), standard_labeling())
    g = contract_edges(one_skeleton(cov.total), lambda e: e.label.startswith("w."))
    g = delete_edges(g, lambda e: e.label.startswith("z."))
    target = cayley_graph(Q, [Q.index("i"), Q.index("j")])
    plain = graph_isomorphic(g, target, respect_labels=False) is not None
    named = graph_isomorphic(relabel(g, lambda l: {"x": "i", "y": "j"}[l[0]]), target) is not None
    ok = plain and named
    return ok, f"{len(g.vertices)} vertices, {len(g.edges)} edges, isomorphic {plain}, with labels x->i y->j {named}"


def ac7_exactness():
    details = []
    ok = True
    for n in (1, 2):
        hs = homology(restrict_to_z(hm_resolution(n)))
        top = 4 * n - 1
        good = hs[0] == HS(1) and all(h.is_zero() for h in hs[1:top]) and hs[top] == HS(1)
        ok &= good
        details.append(f"n={n}: H_1..H_{top - 1} = 0, H_{top} = {hs[top]}")
    return ok, "; ".join(details)


def ac7_ranks():
    ranks = tuple(hm_resolution(2).ranks)
    ok = ranks == STATED_JOIN2_ZQ_RANKS
    return ok, f"ZQ ranks at n=2 are {ranks}, criterion states {STATED_JOIN2_ZQ_RANKS}"


def ac8():
    oracle = bar_resolution_oracle(Q, 3)
    hm_resolution.cache_clear()
    gh = group_homology(2, 6)
    ok = gh == Q_HOMOLOGY and gh[:4] == oracle
    return ok, f"group homology ({'; '.join(map(str, gh))}), bar oracle degrees 0..3 ({'; '.join(map(str, oracle))})"


def ac9():
    notes = []
    # d d = 0 on every constructed complex
    complexes = [chain_complex(hm_skeleton(k)) for k in range(4)]
    complexes.append(chain_complex(tesseract_boundary()))
    for k in range(4):
        complexes.append(chain_complex(cover_complex(hm_skeleton(k), standard_labeling()).total))
    for n in (1, 2, 3):
        hm_resolution(n).check()
    for n in (1, 2):
        complexes += [restrict_to_z(hm_resolution(n)), coinvariants(hm_resolution(n))]
    complexes.append(bar_complex_coinvariants(Q, 3))
    for C in complexes:
        C.check()
    notes.append(f"dd=0 on {len(complexes)} Z complexes and 3 ZQ complexes")

    # SNF on 1000 random matrices
    rng = random.Random(9)
    snf_ok = True
    for _ in range(1000):
        m, n = rng.randint(1, 8), rng.randint(1, 8)
        rows = [[rng.randint(-9, 9) for _ in range(n)] for _ in range(m)]
        A = IntegerMatrix.from_rows(rows, ncols=n)
        res = smith_normal_form(A, want_transforms=True)
        D = IntegerMatrix(m, n, {(t, t): d for t, d in enumerate(res.diagonal) if d})
        nz = [d for d in res.diagonal if d]
        snf_ok &= (res.U @ A @ res.V) == D and all(b % a == 0 for a, b in zip(nz, nz[1:]))
    notes.append(f"SNF 1000 random ok {snf_ok}")

    # Euler-Poincare on the corpus
    import json

    euler_ok = True
    corpus = sorted(p for p in CORPUS.glob("*.json") if not p.stem.startswith("invalid"))
    for p in corpus:
        C = CubicalComplex.from_json(json.loads(p.read_text()))
        hs = homology(chain_complex(C))
        euler_ok &= sum((-1) ** k * h.free_rank for k, h in enumerate(hs)) == euler_characteristic(C)
    notes.append(f"Euler-Poincare on {len(corpus)} corpus complexes {euler_ok}")

    # join rank convolution, Z-ranks with the augmentation rank 1 in degree -1
    conv_ok = True
    one = [1] + [Q.order * r for r in hm_resolution(1).ranks]
    for n in (2, 3):
        prev = [1] + [Q.order * r for r in hm_resolution(n - 1).ranks]
        conv = [sum(prev[i] * one[k - i] for i in range(len(prev)) if 0 <= k - i < len(one)) for k in range(len(prev) + len(one) - 1)]
        conv_ok &= [1] + list(restrict_to_z(hm_resolution(n)).ranks) == conv
    notes.append(f"join rank convolution (Z-ranks) n<=3 {conv_ok}")
    return snf_ok and euler_ok and conv_ok, "; ".join(notes)


CRITERIA = [
    ("AC1", ac1, 1),
    ("AC2", ac2, 1),
    ("AC3", ac3, 1),
    ("AC4", ac4, 1),
    ("AC5", ac5, 1),
    ("AC6", ac6, 1),
    ("AC7a", ac7_exactness, 10),
    ("AC7b", ac7_ranks, 10),
    ("AC8", ac8, 60),
    ("AC9", ac9, 30),
]


def evaluate(tag, fn, budget):
    start = time.perf_counter()
    try:
        ok, detail = fn()
    except Exception as exc:  # report, do not hide
        ok, detail = False, f"raised {exc!r}"
    return report(tag, ok, detail, time.perf_counter() - start, budget)


@pytest.mark.parametrize("tag, fn, budget", CRITERIA, ids=[c[0] for c in CRITERIA])
def test_acceptance(tag, fn, budget, capsys):
    with capsys.disabled():
        ok, line = evaluate(tag, fn, budget)
    assert ok, line


if __name__ == "__main__":
    results = [evaluate(*c)[0] for c in CRITERIA]
    sys.exit(0 if all(results) else 1)
