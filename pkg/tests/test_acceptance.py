"""Acceptance suite: nine end-to-end criteria at their stated sizes and time budgets.

Each test prints one ``[criterion N] PASS/FAIL`` line; the lines are collected
and repeated in the terminal summary (see conftest.py).  Randomness comes from
fixed-seed ``random.Random`` instances so reruns are identical.
"""

import itertools
import json
import random
import time

import pytest

from conftest import abelian_catalog, finite_catalog, record_acceptance
from zariski_groups.abelian import FgAbelianGroup, enumerate_subgroup
from zariski_groups.cli import main
from zariski_groups.closed_sets import (
    EMPTY,
    FULL,
    Atom,
    Union_,
    closure_finite_set,
    contains,
    intersection,
    normalize,
    union,
)
from zariski_groups.club import diagonal_intersection, phi_closure
from zariski_groups.constructions import involutive_automorphisms, product_lemma_construct
from zariski_groups.cover import (
    CoverCertificate,
    candidate_equations,
    search_min_cover,
    singleton_certificate,
    verify_discreteness_cover,
)
from zariski_groups.equations import (
    ElementaryEquation,
    EquationSyntaxError,
    abelian_reduce,
    multiple_equation,
    parse_equation,
    print_equation,
    solve_bruteforce,
    solve_linear,
)
from zariski_groups.groups import cyclic, direct_product, symmetric
from zariski_groups.reflection import reflection_construct, verify_witnesses
from zariski_groups.subgroups import all_subgroups, as_subgroup, center, is_super_normal, subgroup_generated

pytestmark = pytest.mark.acceptance


def report(n: int, ok: bool, elapsed: float, budget: float | None, detail: str) -> None:
    within = budget is None or elapsed < budget
    line = f"[criterion {n}] {'PASS' if ok and within else 'FAIL'} {elapsed:6.1f}s"
    line += f" (budget {budget:.0f}s)" if budget else ""
    line += f"  {detail}"
    print(line)
    record_acceptance(line)
    assert ok, detail
    assert within, f"took {elapsed:.1f}s, budget {budget}s"


# -- independent arithmetic for abelian equations ---------------------------------------


def rand_element(rng: random.Random, G: FgAbelianGroup, radius: int = 12) -> tuple:
    return tuple(rng.randint(-radius, radius) if m == 0 else rng.randrange(m) for m in G.moduli)


def rand_equation(rng: random.Random, G: FgAbelianGroup, max_n: int = 4) -> ElementaryEquation:
    n = rng.randint(0, max_n)
    return ElementaryEquation(
        tuple(rand_element(rng, G) for _ in range(n + 1)),
        tuple(rng.choice((1, -1)) for _ in range(n + 1)),
    )


def holds(eq: ElementaryEquation, x: tuple, moduli: tuple) -> bool:
    """a_0 + e_0 x + ... + a_{n-1} + e_{n-1} x == a_n, coordinate by coordinate."""
    for i, m in enumerate(moduli):
        lhs = sum(a[i] for a in eq.coeffs[:-1]) + sum(eq.signs) * x[i]
        diff = lhs - eq.coeffs[-1][i]
        if (diff % m if m else diff) != 0:
            return False
    return True


def box(G: FgAbelianGroup, radius: int) -> list[tuple]:
    return list(itertools.product(*(range(-radius, radius + 1) if m == 0 else range(m) for m in G.moduli)))


# -- criterion 1 -------------------------------------------------------------------------


def test_criterion_1_abelian_solver():
    rng = random.Random(1)
    t = time.perf_counter()
    groups = abelian_catalog(200)
    windows = [FgAbelianGroup(1, ()), FgAbelianGroup(1, (6,)), FgAbelianGroup(2, ())]
    checked = mismatches = 0
    while checked < 2400:
        G = rng.choice(windows) if rng.random() < 0.15 else rng.choice(groups)
        eq = rand_equation(rng, G)
        sol = solve_linear(G, abelian_reduce(eq, G))
        pool = box(G, 20 if G.ngens == 1 else 8) if G.rank else G.elements()
        got = sol.materialize(G, pool)
        if got != solve_bruteforce(eq, G, pool):
            mismatches += 1
        if got != frozenset(x for x in pool if holds(eq, x, G.moduli)):
            mismatches += 1
        checked += 1
    report(1, mismatches == 0, time.perf_counter() - t, 60,
           f"{checked} equations over {len(groups)} groups + Z windows, {mismatches} mismatches")


# -- criterion 2 -------------------------------------------------------------------------


def _factor_subgroups(A, B):
    """A x {1} and {1} x B inside direct_product(A, B) (index a*|B| + b)."""
    P = direct_product(A, B)
    left = as_subgroup(P, [a * B.order + B.identity for a in range(A.order)])
    right = as_subgroup(P, [A.identity * B.order + b for b in range(B.order)])
    return P, [left, right]


def test_criterion_2_super_normal_equivalence():
    t = time.perf_counter()
    cat = finite_catalog(24)
    pairs = disagreements = 0
    for G in cat.values():
        for H in all_subgroups(G):
            a = is_super_normal(G, H, "definitional", require_normal=False).holds
            b = is_super_normal(G, H, "centralizer_product", require_normal=False).holds
            pairs += 1
            disagreements += a != b
    instances = failures = 0
    for G in cat.values():
        instances += 1
        failures += not is_super_normal(G, center(G)).holds
    small = [g for g in cat.values() if g.order <= 8]
    for A, B in itertools.product(small, repeat=2):
        if A.order * B.order > 24:
            continue
        P, factors = _factor_subgroups(A, B)
        for F in factors:
            instances += 1
            failures += not is_super_normal(P, F).holds
    ok = disagreements == 0 and failures == 0
    report(2, ok, time.perf_counter() - t, 60,
           f"{pairs} subgroups, {disagreements} disagreements; {instances} center/factor instances, {failures} failures")


# -- criterion 3 -------------------------------------------------------------------------


def rand_expr(rng: random.Random, G: FgAbelianGroup, depth: int = 4):
    if depth == 0 or rng.random() < 0.3:
        r = rng.random()
        if r < 0.05:
            return EMPTY
        if r < 0.1:
            return FULL
        if r < 0.6:
            k = rng.randint(-4, 8)
            return Atom(multiple_equation(G, k, G.scale(k, rand_element(rng, G))))
        return Atom(rand_equation(rng, G))
    kids = [rand_expr(rng, G, depth - 1) for _ in range(rng.randint(1, 3))]
    return union(*kids) if rng.random() < 0.5 else intersection(*kids)


def denotation(e, G: FgAbelianGroup, pool: list) -> frozenset:
    """The set denoted by an expression tree, by evaluating every atom on every element."""
    if e is EMPTY:
        return frozenset()
    if e is FULL:
        return frozenset(pool)
    if isinstance(e, Atom):
        return frozenset(x for x in pool if holds(e.equation, x, G.moduli))
    parts = [denotation(c, G, pool) for c in e.children]
    if isinstance(e, Union_):
        return frozenset().union(*parts)
    return frozenset.intersection(*parts)


def test_criterion_3_closed_set_algebra():
    rng = random.Random(3)
    t = time.perf_counter()
    groups = abelian_catalog(200)
    trees = mismatches = not_idempotent = 0
    normalized = []
    while trees < 1200:
        G = rng.choice(groups)
        e = rand_expr(rng, G)
        pool = G.elements()
        C = normalize(e, G)
        want = denotation(e, G, pool)
        mismatches += C.elements() != want
        not_idempotent += normalize(C, G) != C
        normalized.append((G, C, want))
        trees += 1
    by_group: dict = {}
    for G, C, s in normalized:
        by_group.setdefault(G, []).append((C, s))
    pairs = wrong = 0
    while pairs < 600:
        G = rng.choice([g for g, v in by_group.items() if len(v) >= 2])
        (A, sa), (B, sb) = rng.sample(by_group[G], 2)
        wrong += contains(A, B) != (sb <= sa)
        pairs += 1
    ok = mismatches == 0 and not_idempotent == 0 and wrong == 0
    report(3, ok, time.perf_counter() - t, 120,
           f"{trees} trees: {mismatches} mismatches, {not_idempotent} non-idempotent; {pairs} contains pairs, {wrong} wrong")


# -- criterion 4 -------------------------------------------------------------------------


def test_criterion_4_finite_sets_closed():
    rng = random.Random(4)
    t = time.perf_counter()
    groups = abelian_catalog(200) + [FgAbelianGroup(1, ()), FgAbelianGroup(1, (6,)), FgAbelianGroup(2, ())]
    cases = bad = 0
    while cases < 300:
        G = rng.choice(groups)
        pts = {rand_element(rng, G, 6) for _ in range(rng.randint(0, 7))}
        C = closure_finite_set(sorted(pts), G).closed
        pool = box(G, 9) if G.rank else G.elements()
        bad += {x for x in pool if C.member(x)} != pts
        cases += 1
    report(4, bad == 0, time.perf_counter() - t, None, f"{cases} finite sets, {bad} not denoted exactly")


# -- criterion 5 -------------------------------------------------------------------------


def rand_closed_target(rng: random.Random, G: FgAbelianGroup, m: int):
    r = rng.random()
    if r < 0.1:
        return EMPTY
    if r < 0.2:
        return FULL
    cosets = []
    for _ in range(rng.randint(1, 3)):
        k = rng.choice([d for d in range(1, m + 1) if m % d == 0])
        cosets.append(Atom(multiple_equation(G, k, G.scale(k, rand_element(rng, G)))))
    return union(*cosets)


def test_criterion_5_reflection():
    rng = random.Random(5)
    t = time.perf_counter()
    traces = stabilized = unequal = witness_problems = 0
    for N, m in [(8, 2), (16, 4), (32, 2)]:
        G = FgAbelianGroup(0, (m,) * N)
        for _ in range(50):
            A = rand_closed_target(rng, G, m)
            seed = [rand_element(rng, G) for _ in range(rng.randint(1, 3))]
            tr = reflection_construct(G, A, seed)
            traces += 1
            if not tr.stabilized:
                continue
            stabilized += 1
            unequal += not tr.equal
            witness_problems += bool(verify_witnesses(tr))
            assert enumerate_subgroup(G, seed) <= tr.subgroup
    ok = stabilized > 0 and unequal == 0 and witness_problems == 0
    report(5, ok, time.perf_counter() - t, 300,
           f"{traces} traces, {stabilized} stabilized, {unequal} unequal, {witness_problems} with bad witnesses")


# -- criterion 6 -------------------------------------------------------------------------


def saturate(seed, rules: dict, cap: int) -> frozenset:
    """Apply every premise set of size <= cap until nothing new appears."""
    Z = set(seed)
    while True:
        new = {
            out
            for premise, outs in rules.items()
            if len(premise) <= cap and premise <= Z
            for out in outs
        } - Z
        if not new:
            return frozenset(Z)
        Z |= new


def test_criterion_6_club_engine():
    rng = random.Random(6)
    t = time.perf_counter()
    runs = bad = 0
    while runs < 150:
        size = rng.randint(1, 64)
        cap = rng.randint(1, 3)
        rules: dict = {}
        for _ in range(rng.randint(0, 3 * size)):
            premise = frozenset(rng.sample(range(size), rng.randint(0, min(cap, size))))
            rules.setdefault(premise, set()).add(rng.randrange(size))
        seed = set(rng.sample(range(size), rng.randint(0, min(4, size))))

        def phi(Z, rules=rules):
            return rules.get(Z, ())

        res = phi_closure(seed, phi, arity_cap=cap, universe=range(size))
        bad += not res.stabilized or frozenset(res.elements) != saturate(seed, rules, cap)
        runs += 1

    S4 = symmetric(4)
    c = S4.parse_element("(1234)")

    def close(Y):
        return subgroup_generated(S4, Y).elements

    def close_conj(Y):
        return close(set(Y) | {S4.op(S4.op(S4.inv(c), y), c) for y in Y})

    diag = diagonal_intersection({S4.parse_element("(12)")}, [close, close_conj])
    Y = frozenset(diag.elements)
    in_both = close(Y) == Y and {S4.op(S4.op(S4.inv(c), y), c) for y in Y} == Y
    ok = bad == 0 and all(diag.in_club) and in_both
    report(6, ok, time.perf_counter() - t, None,
           f"{runs} random operators, {bad} mismatches; S4 diagonal |Y|={len(Y)} flags={diag.in_club}")


# -- criterion 7 -------------------------------------------------------------------------


def exhaustive_minimum(G, max_n: int, below: int) -> int:
    target = frozenset(g for g in G.elements() if g != G.identity)
    sets = {frozenset(x for x in G.elements() if _holds_finite(eq, x, G)) for eq in candidate_equations(G, max_n)}
    sets = [s for s in sets if s and G.identity not in s]
    for size in range(below):
        for combo in itertools.combinations(sets, size):
            if frozenset().union(*combo) == target:
                return size
    return below


def _holds_finite(eq: ElementaryEquation, x, G) -> bool:
    """x^e0 a_0 x^e1 a_1 ... x^en == a_n, multiplied out left to right."""
    acc = G.identity
    for i, s in enumerate(eq.signs):
        acc = G.op(acc, x if s == 1 else G.inv(x))
        if i < len(eq.signs) - 1:
            acc = G.op(acc, eq.coeffs[i])
    return acc == eq.coeffs[-1]


def test_criterion_7_cover_certificates():
    t = time.perf_counter()
    cat = finite_catalog(24)
    singles = deletions = wrong = 0
    for G in cat.values():
        cert = singleton_certificate(G)
        singles += 1
        wrong += not verify_discreteness_cover(cert).valid
        for i, eq in enumerate(cert.equations):
            v = verify_discreteness_cover(CoverCertificate(cert.equations[:i] + cert.equations[i + 1:], G))
            deletions += 1
            missing = v.uncovered
            wrong += v.valid or missing is None or missing == G.identity or _holds_finite(eq, missing, G) is False
    searched = reverify_fail = 0
    for G in (g for g in cat.values() if g.order <= 12):
        res = search_min_cover(G, 1)
        searched += 1
        reverify_fail += res.certificate is None or not verify_discreteness_cover(res.certificate).valid
    exact_fail = []
    for p in (2, 3, 5):
        G = cyclic(p)
        res = search_min_cover(G, 1)
        truth = exhaustive_minimum(G, 1, below=p - 1)
        if not res.exact or len(res.certificate.equations) != truth:
            exact_fail.append(p)
    ok = wrong == 0 and reverify_fail == 0 and not exact_fail
    report(7, ok, time.perf_counter() - t, 120,
           f"{singles} singleton certs, {deletions} deletions, {wrong} wrong verdicts; "
           f"{searched} searches, {reverify_fail} failed re-verification; exact Z/p failures {exact_fail}")


# -- criterion 8 -------------------------------------------------------------------------


def test_criterion_8_product_lemma():
    t = time.perf_counter()
    ab = [G for G in finite_catalog(16).values() if G.is_abelian]
    triples = failures = 0
    for N1, N2 in itertools.product(ab, repeat=2):
        if N1.order * N2.order > 16:
            continue
        for f in involutive_automorphisms(direct_product(N1, N2)):
            res = product_lemma_construct(N1, N2, f)
            G, H, star = res.G, res.H.elements, res.Gstar.elements
            # recomputed here from the raw element sets
            index_two = len(H) == 2 * len(star)
            proj = {G.value(h, 0) for h in star}
            iso = (
                len(proj) == len(star) == res.N.order
                and proj == set(range(res.N.order))
                and all(G.value(G.op(a, b), 0) == res.Gprime.op(G.value(a, 0), G.value(b, 0)) for a in star for b in star)
            )
            triples += 1
            failures += not (index_two and iso and res.passed)
    report(8, failures == 0, time.perf_counter() - t, None, f"{triples} admissible triples, {failures} failures")


# -- criterion 9 -------------------------------------------------------------------------

MALFORMED = [
    "", "x", "= 1", "x =", "x 3 x", "x x = 1", "x 3 = 1 = 2", "y = 1", "x = zz",
    "x ^ = 1", "x^-2 = 1", "3 = 3", "x 3 x ==", "x 1 (12 = 3", "x = 1 x",
]


def test_criterion_9_parser(tmp_path, capsys):
    rng = random.Random(9)
    t = time.perf_counter()
    finite = list(finite_catalog(12).values())
    abel = [FgAbelianGroup(0, (12,)), FgAbelianGroup(1, ()), FgAbelianGroup(1, (2, 4))]
    trips = broken = 0
    while trips < 1500:
        if rng.random() < 0.5:
            G = rng.choice(finite)
            n = rng.randint(0, 4)
            eq = ElementaryEquation(
                tuple(rng.randrange(G.order) for _ in range(n + 1)),
                tuple(rng.choice((1, -1)) for _ in range(n + 1)),
            )
        else:
            G = rng.choice(abel)
            eq = rand_equation(rng, G)
        broken += parse_equation(print_equation(eq, G), G) != eq
        trips += 1

    spec = tmp_path / "z12.json"
    spec.write_text(json.dumps({"kind": "cyclic", "n": 12}))
    cli_bad = []
    for text in MALFORMED:
        try:
            parse_equation(text, FgAbelianGroup(0, (12,)))
            direct = None
        except EquationSyntaxError as exc:
            direct = exc.position
        code = main(["solve", "--group", str(spec), "--eq", text])
        out = json.loads(capsys.readouterr().out)
        if code != 2 or not isinstance(out.get("position"), int) or out["position"] != direct:
            cli_bad.append(text)
    ok = broken == 0 and not cli_bad
    report(9, ok, time.perf_counter() - t, None,
           f"{trips} round trips, {broken} broken; {len(MALFORMED)} malformed inputs, exit-2 failures {cli_bad}")
