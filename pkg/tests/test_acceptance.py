"""Acceptance criteria 1-10, one test per criterion (plus budget-guarded
remainders marked xfail).  Each test logs its parts; the terminal summary
prints one PASS/FAIL line per criterion.

Run alone with ``pytest tests/test_acceptance.py -s`` to see the parts live.
"""
from __future__ import annotations

import os
import random
from functools import lru_cache

import pytest

from lambdapq.algebra import make_lambda
from lambdapq.cli import main as cli_main
from lambdapq.complexes import (
    decompose,
    direct_sum,
    g_vector,
    hom_complex_dims,
    hom_dim,
    iso_in_homotopy,
    minimize,
    shift,
    stalk,
)
from lambdapq.endo import compare, end_algebra, make_lambda_m
from lambdapq.equiv import (
    AutoPair,
    apply_automorphism,
    check_comm,
    nakayama_nu,
    nu_via_omega,
    omega_inverse,
    omega_iterates,
    reduce_to_two_term,
    ringel_omega,
)
from lambdapq.silting import (
    build_tower,
    closed_form_pairs,
    explore,
    fan,
    gaps_contain_gray,
    lambda_node,
    make_C,
    make_node,
    mutate,
    random_two_term,
    recursion_dims,
    sample_gray_region,
    tower_checks,
)

pytestmark = pytest.mark.acceptance

GRID = [(p, q) for p in (1, 2, 3) for q in (1, 2, 3)] + [(2, 0), (3, 0)]
POSITIVE = [(p, q) for p, q in GRID if p and q]
M_MAX = 5


def euler_form(p, q, a, b):
    return a * a + b * b * (1 + p * q) - a * b * (p + q)


def dims(p, M=M_MAX + 2):
    return recursion_dims(p, M)


def c_range(p):
    """Indices m >= 0 for which C_m is built over Λ^{p,*} in the tests."""
    return range(0, 2) if p == 1 else range(0, M_MAX + 1)


@lru_cache(maxsize=None)
def walk6(p, q):
    return explore(p, q, 6)


# -- 1 ------------------------------------------------------------------------------


def test_criterion_01_euler_form(acceptance):
    acceptance.title(1, "Euler-form identity for random two-term complexes and all C_m")
    all_ok = True
    for p, q in GRID:
        A = make_lambda(p, q)
        rng = random.Random(f"euler:{p}:{q}")
        samples = []
        for _ in range(50):
            a, b = rng.randint(1, 4), rng.randint(1, 4)
            samples.append(random_two_term(A, a, b, rng))
        samples += [make_C(m, A) for m in c_range(p)]
        bad, cross = [], 0
        for k, X in enumerate(samples):
            a, b = X.term(-1)[0], X.term(0)[1]
            h = {r: hom_complex_dims(X, X, r)[2] for r in (-2, -1, 0, 1, 2)}
            alt = h[0] - h[1] - h[-1]
            if alt != euler_form(p, q, a, b) or h[2] or h[-2]:
                bad.append((a, b, h))
            if k < 12:
                # second route: the generic map-space computation
                cross += 1
                if any(hom_complex_dims(X, X, r, generic=True)[2] != h[r] for r in (-1, 0, 1)):
                    bad.append(("generic route disagrees", a, b))
        ok = acceptance.part(1, f"Λ^{{{p},{q}}}", not bad,
                             f"{len(samples)} complexes, {cross} cross-checked by the generic route"
                             + (f", mismatches {bad[:3]}" if bad else ""))
        all_ok &= ok
    assert all_ok


# -- 2 ------------------------------------------------------------------------------

# matrix checks run through the default grid bound m <= 5 for every p <= 5,
# and further where the dense cokernel bases stay small
TOWER_DEPTH = {2: 12, 3: 7, 4: 5, 5: 5}


def test_criterion_02_tower(acceptance):
    acceptance.title(2, "A_m tower identities")
    ok_num = True
    for p in range(0, 6):
        a = [0] + recursion_dims(p, 13)  # a[k + 1] = a_k, a[0] = a_{-1}
        for m in range(0, 13):
            am1, am, ap1 = a[m], a[m + 1], a[m + 2]
            if ap1 != p * am - am1 or am * am + am1 * am1 - p * am1 * am != 1:
                ok_num = False
    acceptance.part(2, "recursion and quadratic identity, p <= 5, m <= 12", ok_num)
    ok_mat = True
    for p, M in TOWER_DEPTH.items():
        T = build_tower(p, M)
        c = tower_checks(T, invertibility_limit=10**8)
        good = (all(c[k] for k in ("recursion", "quadratic", "pi_iota_zero", "pi_rank",
                                     "kappa_is_pi_slot", "ratio_decreasing"))
                and not c["skipped"] and all(c["invertible"].values())
                and list(T.dims) == recursion_dims(p, M))
        ok_mat &= acceptance.part(
            2, f"p={p}: π∘ι = 0, rank π, invertibility for m <= {M}", good,
            f"dims {T.dims[-3:]} (cokernel ranks agree with the recursion)")
    assert ok_num and ok_mat


# -- 3 ------------------------------------------------------------------------------


def test_criterion_03_tilting_chain(acceptance):
    acceptance.title(3, "C_{m-1} ⊕ C_m tilting with the End graded dimension table")
    all_ok = True
    for p, q in GRID:
        if p < 2:
            continue
        A = make_lambda(p, q)
        a = [0] + dims(p)

        def am(k):
            return a[k + 1]

        bad = []
        for m in range(1, M_MAX + 1):
            node = make_node(make_C(m - 1, A), make_C(m, A))
            want = {
                (1, 1, 0): 1 + q * am(m + 1) * am(m),      # End(C_m)
                (1, 0, 0): q * am(m) ** 2,                 # Hom(C_m, C_{m-1})
                (0, 1, 0): p + q * am(m + 1) * am(m - 1),  # Hom(C_{m-1}, C_m)
                (0, 0, 0): 1 + q * am(m) * am(m - 1),      # End(C_{m-1})
            }
            got = {k: node.homs[k] for k in want}
            if not node.tilting or got != want:
                bad.append((m, node.tilting, got, want))
        all_ok &= acceptance.part(3, f"Λ^{{{p},{q}}}, m <= {M_MAX}", not bad, str(bad[:1]) if bad else "")
    assert all_ok


# -- 4 ------------------------------------------------------------------------------

ENDO_FULL = [(2, q, m) for q in (1, 2, 3) for m in range(1, M_MAX + 1)]
ENDO_FULL += [(3, q, m) for q in (1, 2, 3) for m in (1, 2)] + [(3, 1, 3)]
ENDO_REST = [(3, 2, 3), (3, 3, 3)] + [(3, q, m) for q in (1, 2, 3) for m in (4, 5)]
# End algebras are handled with dense structure constants; beyond this
# dimension the computation does not fit a desk-scale budget
ENDO_BUDGET = int(os.environ.get("LAMBDAPQ_END_BUDGET", "2500"))


def _end_dim(p, q, m):
    a = [0] + dims(p, m + 2)
    am = lambda k: a[k + 1]  # noqa: E731
    return (2 + p + q * (am(m + 1) * am(m) + am(m) ** 2 + am(m + 1) * am(m - 1) + am(m) * am(m - 1)))


def test_criterion_04_endomorphism_presentation(acceptance):
    acceptance.title(4, "End_K(C_{m-1} ⊕ C_m) matches Λ^{p,q}_m")
    all_ok = True
    for p, q, m in ENDO_FULL:
        A = make_lambda(p, q)
        E = end_algebra([make_C(m - 1, A), make_C(m, A)])
        r = compare(E, make_lambda_m(p, q, m))
        extra = ""
        if (p, q, m) == (2, 1, 1):
            extra_ok = E.dim == 19 and r["relation_dims"] == (8, 8)
            r["match"] = r["match"] and extra_ok
            extra = f", total dim {E.dim}, relation dim {r['relation_dims'][0]}"
        all_ok &= acceptance.part(4, f"(p,q,m)=({p},{q},{m})", r["match"],
                                  f"dim {E.dim}{extra}" + (f" {r['mismatches']}" if r["mismatches"] else ""))
    assert all_ok


@pytest.mark.xfail(reason="End algebras of dimension 4413..311042 exceed the desk-scale memory budget", strict=False)
@pytest.mark.parametrize("p,q,m", ENDO_REST)
def test_criterion_04_remaining_grid(acceptance, p, q, m):
    n = _end_dim(p, q, m)
    if n > ENDO_BUDGET:
        acceptance.part(4, f"(p,q,m)=({p},{q},{m})", False,
                        f"End dimension {n} > budget {ENDO_BUDGET}; not computed")
        pytest.fail(f"End dimension {n} exceeds the budget {ENDO_BUDGET}")
    A = make_lambda(p, q)
    E = end_algebra([make_C(m - 1, A), make_C(m, A)])
    r = compare(E, make_lambda_m(p, q, m))
    acceptance.part(4, f"(p,q,m)=({p},{q},{m})", r["match"], f"dim {E.dim}")
    assert r["match"]


# -- 5 ------------------------------------------------------------------------------


def test_criterion_05_mutation_coherence(acceptance):
    acceptance.title(5, "mutation reproduces C_m, μ^+μ^- = id, two-term dichotomy")
    all_ok = True
    for p, q in GRID:
        A = make_lambda(p, q)
        if p >= 2:
            node = lambda_node(A)
            bad = []
            # μ^+ at P_1 replaces it by C_1, then at C_{m-1} by C_{m+1}
            cur = 0
            for m in range(0, M_MAX):
                want_old = g_vector(make_C(m - 1, A))
                idx = [i for i in (0, 1) if node.g[i] == want_old]
                if len(idx) != 1:
                    bad.append((m, "missing summand", node.g))
                    break
                node = mutate(node, idx[0], "+")
                new = node.summands[idx[0]]
                C = make_C(m + 1, A)
                if g_vector(new) != g_vector(C):
                    bad.append((m + 1, g_vector(new), g_vector(C)))
                elif m + 1 <= 3 and not iso_in_homotopy(new, C):
                    bad.append((m + 1, "not isomorphic"))
                cur = m + 1
            all_ok &= acceptance.part(5, f"Λ^{{{p},{q}}}: μ^+ chain reaches C_{cur}", not bad, str(bad) if bad else "")
        w = walk6(p, q)
        all_ok &= acceptance.part(
            5, f"Λ^{{{p},{q}}}: μ^∓μ^± = id and dichotomy on {len(w.nodes)} nodes",
            not w.inverse_failures and not w.dichotomy_failures,
            f"{len(w.edges)} edges checked")
    assert all_ok


# -- 6 ------------------------------------------------------------------------------


def test_criterion_06_classification(acceptance, tmp_path):
    acceptance.title(6, "walk = closed form, silting-not-tilting nodes, disjoint fan")
    all_ok = True
    for p, q in GRID:
        w = walk6(p, q)
        cf = closed_form_pairs(p, q, 6)
        same = w.keys() == set(cf)
        all_ok &= acceptance.part(6, f"Λ^{{{p},{q}}}: depth-6 walk = closed form", same,
                                  f"{len(w.nodes)} nodes")
        nt = [n for n in w.nodes if n.silting and not n.tilting]
        want_count = (1 if p else 0) + (1 if q else 0)
        tables = True
        for n in nt:
            gs = n.g
            if (-1, 0) in gs:
                # C_0^* ⊕ C_1^*: Hom(C_1^*, C_0^*) = k^p, Hom(C_1^*, C_0^*[-1]) = k^q
                j, i = gs.index((-1, 0)), 1 - gs.index((-1, 0))
                tables &= gs[i] == (-p, 1) and n.homs[(i, j, 0)] == p and n.homs[(i, j, -1)] == q
                tables &= all(n.homs[(j, i, r)] == 0 for r in (-1, 0, 1))
            else:
                # the mirror node P_1 ⊕ ω^{-1}(P_1)[1]: roles of p and q swapped
                i = gs.index((1, 0))
                j = 1 - i
                tables &= gs[j] == (q, -1) and n.homs[(i, j, 0)] == q and n.homs[(i, j, -1)] == p
                tables &= all(n.homs[(j, i, r)] == 0 for r in (-1, 0, 1))
        note = "" if q else " (q = 0: the C^* node is tilting since Hom(C_1^*, C_0^*[-1]) = k^q = 0)"
        all_ok &= acceptance.part(6, f"Λ^{{{p},{q}}}: {want_count} silting-not-tilting node(s), Hom tables",
                                  len(nt) == want_count and tables, f"{[n.g for n in nt]}{note}")
        try:
            geo = fan(w.nodes)
            disjoint = gaps_contain_gray(geo, p, q)
        except Exception:  # FanError
            disjoint = False
        code = cli_main(["walk", str(p), str(q), "--depth", "6", "--out", str(tmp_path / f"fan{p}{q}.json")])
        all_ok &= acceptance.part(6, f"Λ^{{{p},{q}}}: fan arcs interior-disjoint", disjoint and code == 0,
                                  f"cli exit code {code}")
    assert all_ok


# -- 7 ------------------------------------------------------------------------------


def test_criterion_07_negative_space(acceptance):
    acceptance.title(7, "gray region: no presilting samples, null-homotopy bound (sampling evidence)")
    all_ok = True
    for p, q in GRID:
        rows = sample_gray_region(p, q, bound=8, samples=100, seed=0)
        hits = sum(r["presilting"] for r in rows)
        bound = all(r["bound_ok"] for r in rows)
        all_ok &= acceptance.part(7, f"Λ^{{{p},{q}}}", hits == 0 and bound,
                                  f"{len(rows)} shapes x 100 samples, {hits} presilting, bound ok={bound}")
    assert all_ok


# -- 8 ------------------------------------------------------------------------------


def _listed(p, q):
    """P_1, P_1[1], ω_{q,p}(P_1) and ω_{p,q}^{-1}(P_1)[1], computed through the equivalences."""
    A = make_lambda(p, q)
    B = make_lambda(q, p)
    return {
        "P_1": stalk(A, (1, 0)),
        "P_1[1]": stalk(A, (1, 0), -1),
        "ω_{q,p}(P_1)": minimize(ringel_omega(stalk(B, (1, 0)))),
        "ω_{p,q}^{-1}(P_1)[1]": minimize(shift(omega_inverse(stalk(B, (1, 0))), 1)),
    }


def _pretilting_end_k(X) -> bool:
    return (hom_dim(X, X, 0) == 1 and hom_dim(X, X, 1) == 0 and hom_dim(X, X, -1) == 0)


def _shape_samples(A, kind, a, b, rng, n):
    if a == 0 or b == 0:
        # stalks: P_1^a in degree -1 or P_2^b in degree 0 (alpha); P_2^a / P_1^b (beta)
        if kind == "alpha":
            return [direct_sum(*[X for X in (stalk(A, (a, 0), -1) if a else None,
                                             stalk(A, (0, b)) if b else None) if X is not None])]
        return [direct_sum(*[X for X in (stalk(A, (0, a), -1) if a else None,
                                         stalk(A, (b, 0)) if b else None) if X is not None])]
    return [random_two_term(A, a, b, rng, kind=kind) for _ in range(n)]


def test_criterion_08_rigid_bricks(acceptance):
    acceptance.title(8, "two-term pretilting with End = k is one of four listed complexes")
    all_ok = True
    for p, q in POSITIVE:
        A = make_lambda(p, q)
        listed = _listed(p, q)
        gl = {name: g_vector(X) for name, X in listed.items()}
        expect = {"P_1": (1, 0), "P_1[1]": (-1, 0), "ω_{q,p}(P_1)": (-p, 1), "ω_{p,q}^{-1}(P_1)[1]": (q, -1)}
        listed_ok = gl == expect and all(_pretilting_end_k(X) for X in listed.values())
        rng = random.Random(f"p1:{p}:{q}")
        found, stray = {}, []
        for kind in ("alpha", "beta"):
            for a in range(0, 7):
                for b in range(0, 7 - a):
                    if a + b == 0:
                        continue
                    for X in _shape_samples(A, kind, a, b, rng, 12):
                        M = minimize(X)
                        if M.is_zero() or M.lo < -1 or M.hi > 0 or not _pretilting_end_k(M):
                            continue
                        g = g_vector(M)
                        names = [nm for nm, v in gl.items() if v == g]
                        if not names or not iso_in_homotopy(M, listed[names[0]]):
                            stray.append((kind, a, b, g))
                        else:
                            found[names[0]] = found.get(names[0], 0) + 1
        # Euler form = 1, abp <= a^2+b^2-1 and a <= bp leave only the shape (a, b) = (p, 1)
        forced = {(a, b) for a in range(0, 7) for b in range(1, 7 - a)
                  if euler_form(p, q, a, b) == 1 and a * b * p <= a * a + b * b - 1 and a <= b * p}
        forced_ok = forced == ({(p, 1)} if p + 1 <= 6 else set())
        ok = listed_ok and not stray and set(found) == set(listed) and forced_ok
        all_ok &= acceptance.part(8, f"Λ^{{{p},{q}}}", ok,
                                  f"hits {dict(sorted(found.items()))}, forced shapes {sorted(forced)}"
                                  + (f", stray {stray[:3]}" if stray else ""))
    assert all_ok


# -- 9 ------------------------------------------------------------------------------


def _reduce_cases(p, q):
    """Tilting walk nodes and twist exponents k checked for the reduction."""
    w = explore(p, q, 4, check_inverse=False)
    til = [n for n in w.nodes if n.tilting]
    if max(p, q) <= 2:
        return [(n, k) for n in til for k in (1, 2)]
    # ν^{-2} of deeper nodes has 10^4+ summands over these algebras
    out = [(n, 1) for n in til if n.depth <= 1]
    out += [(n, 2) for n in til if n.depth == 0]
    return out


def test_criterion_09_serre_ringel(acceptance):
    acceptance.title(9, "ν ≅ ωω, reduction to two terms, Serre dimensions, ω-span growth")
    all_ok = True
    for p, q in GRID:
        A = make_lambda(p, q)
        objs = {"P_1": stalk(A, (1, 0)), "P_2": stalk(A, (0, 1)),
                "C_0⊕C_1": direct_sum(make_C(0, A), make_C(1, A))}
        iso = {k: iso_in_homotopy(nakayama_nu(X), nu_via_omega(X)) for k, X in objs.items()}
        all_ok &= acceptance.part(9, f"Λ^{{{p},{q}}}: ν ≅ ω∘ω", all(iso.values()), str(iso))

        bad, shifted, cases = [], 0, _reduce_cases(p, q)
        for node, k in cases:
            T = node.complex()
            X = T
            for _ in range(k):
                X = nakayama_nu(X, "-")
            m, Y = reduce_to_two_term(X, max_steps=k + 2)
            if m == k:
                gs = sorted(g_vector(Z) for Z in decompose(Y))
                if gs != sorted(node.g):
                    bad.append((node.g, k, m, gs))
            else:
                # another member of the ν-orbit of T is already two-term
                shifted += 1
                Z = T
                for _ in range(abs(k - m)):
                    Z = nakayama_nu(Z, "-" if m < k else "+")
                if minimize(Z).terms != Y.terms or not iso_in_homotopy(Y, Z):
                    bad.append((node.g, k, m, "not ν^{m-k}(T)"))
        all_ok &= acceptance.part(9, f"Λ^{{{p},{q}}}: reduce(ν^-k T), {len(cases)} cases", not bad,
                                  f"{shifted} stop at another two-term ν-twist of T" + (f"; {bad[:2]}" if bad else ""))

        serre = {"P_1": objs["P_1"], "P_2": objs["P_2"], "C_1": make_C(1, A)}
        sbad = []
        for nx, X in serre.items():
            for ny, Y in serre.items():
                lhs = hom_dim(X, nakayama_nu(Y), 0)
                rhs = hom_dim(Y, X, 0)
                if lhs != rhs:
                    sbad.append((nx, ny, lhs, rhs))
        all_ok &= acceptance.part(9, f"Λ^{{{p},{q}}}: dim Hom(X, νY) = dim Hom(Y, X)", not sbad, str(sbad))

        if p and q:
            its = omega_iterates(p, q, 4)
            spans = [Z.span for Z in its]
            ends = all(Z.term(Z.lo)[1] == 0 and Z.term(Z.hi)[0] == 0 for Z in its[1:])
            all_ok &= acceptance.part(9, f"Λ^{{{p},{q}}}: span of ω^t(Λ) = t + 1, t <= 4",
                                      spans == [1, 2, 3, 4, 5] and ends, f"spans {spans}")
    assert all_ok


# -- 10 -----------------------------------------------------------------------------


def test_criterion_10_comm(acceptance):
    acceptance.title(10, "ω F ≅ Φ(F) ω for random automorphisms; inner pairs act trivially")
    all_ok = True
    for p, q in GRID:
        A = make_lambda(p, q)
        res = [check_comm(AutoPair.random(p, q, seed=s), p, q, seed=s) for s in range(20)]
        all_ok &= acceptance.part(10, f"Λ^{{{p},{q}}}: check_comm, 20 seeded pairs",
                                  all(r["passed"] for r in res))
        if p >= 2 or q >= 2:
            # the check must be able to fail: the identity in place of Φ(F)
            wrong = [check_comm(AutoPair.random(p, q, seed=s), p, q, seed=s,
                                partner=AutoPair.identity(q, p))["passed"] for s in range(20)]
            all_ok &= acceptance.part(10, f"Λ^{{{p},{q}}}: wrong partner detected", not all(wrong),
                                      f"{sum(not w for w in wrong)}/20 rejected")
        rng = random.Random(f"inner:{p}:{q}")
        objs = [make_C(1, A), direct_sum(make_C(0, A), make_C(1, A)),
                random_two_term(A, 2, 2, rng), random_two_term(A, 1, 2, rng)]
        if q:
            objs.append(random_two_term(A, 2, 1, rng, kind="beta"))
        inner = all(iso_in_homotopy(apply_automorphism(X, AutoPair.scalar(p, q, lam)), minimize(X))
                    for lam in (2, -3, "1/2") for X in objs)
        all_ok &= acceptance.part(10, f"Λ^{{{p},{q}}}: (λ, λ^-1) twists are isomorphic to the original",
                                  inner, f"{len(objs)} complexes x 3 scalars")
    assert all_ok
