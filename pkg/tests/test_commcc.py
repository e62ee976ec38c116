import itertools

import pytest

from regcc.automata import CapError, CcError, builtin_language
from regcc.commcc import (
    CommFunction, Cover, Rectangle, RectangleMeasure, builtin_function,
    exact_deterministic_cc, format_indices, is_monochromatic, language_problem,
    language_problem_partition, max_fooling_set, max_rectangle_measure,
    min_cover, min_disjoint_cover, monochromatic_color, monoid_problem,
    serialize_cover, serialize_function, simulate_cover_protocol,
    validate_disjoint_cover,
)
from regcc.monoid import (
    FiniteMonoid, OrderedMonoid, ideal_generated, syntactic_ordered_monoid,
)


def log2ceil(k):
    return (k - 1).bit_length() if k > 1 else 0


def all_rects(f):
    rows = range(f.n_rows)
    cols = range(f.n_cols)
    for rs in range(1, 1 << f.n_rows):
        rset = tuple(i for i in rows if rs >> i & 1)
        for cs in range(1, 1 << f.n_cols):
            cset = tuple(j for j in cols if cs >> j & 1)
            yield Rectangle(rset, cset)


def brute_min_cover(f, z):
    """Oracle: exhaustive subset search over maximal z-monochromatic
    rectangles (every cover extends to one made of maximal rectangles)."""
    mono = [r for r in all_rects(f)
            if all(f.value(i, j) != 1 - z for i, j in r.cells())]
    mono_sets = [frozenset(r.cells()) for r in mono]
    maximal = [r for r, cs in zip(mono, mono_sets)
               if not any(cs < other for other in mono_sets)]
    cells = set(f.z_cells(z))
    for k in range(1, len(cells) + 1):
        for combo in itertools.combinations(maximal, k):
            covered = set()
            for r in combo:
                covered.update(r.cells())
            if cells <= covered:
                return k
    raise AssertionError


def brute_min_disjoint(f):
    """Oracle: plain first-cell backtracking over all monochromatic
    rectangles, no pruning beyond disjointness."""
    rects = [r for r in all_rects(f)
             if monochromatic_color(f, r, vacuous=0) is not None]
    cells = [(i, j) for i, j, _ in f.defined_cells()]
    best = [len(cells)]

    def dfs(covered, used, count):
        if count >= best[0]:
            return
        target = next((c for c in cells if c not in covered), None)
        if target is None:
            best[0] = count
            return
        for r in rects:
            rc = set(r.cells())
            if target in rc and not (rc & used):
                dfs(covered | (rc & set(cells)), used | rc, count + 1)

    dfs(set(), set(), 0)
    return best[0]


def brute_max_fooling(f, z):
    """Oracle: exhaustive subset search for the fooling condition with
    defined-opposite separation."""
    cells = list(f.z_cells(z))
    best = 0
    for k in range(len(cells), 0, -1):
        for combo in itertools.combinations(cells, k):
            ok = True
            for (x1, y1), (x2, y2) in itertools.combinations(combo, 2):
                if f.value(x1, y2) != 1 - z and f.value(x2, y1) != 1 - z:
                    ok = False
                    break
            if ok:
                return k
    return best


# --- built-ins ---------------------------------------------------------------

def test_eq_small():
    f = builtin_function("EQ", 1)
    assert f.rows == ("10", "01")


def test_disj_small():
    f = builtin_function("DISJ", 1)
    assert f.rows == ("11", "10")


def test_disj_counts_match_closed_form():
    for n in range(1, 13):
        assert builtin_function("DISJ", n).count(1) == 3 ** n


def test_pdisj_promise_cells():
    f = builtin_function("PDISJ", 2)
    undef = {(f.row_labels[i], f.col_labels[j])
             for i in range(4) for j in range(4) if f.value(i, j) is None}
    assert undef == {("11", "11")}


def test_ip_values():
    f = builtin_function("IP", 2, q=2)
    # <11,11> = 2 = 0 mod 2
    assert f.value(3, 3) == 1
    assert f.value(1, 1) == 0
    with pytest.raises(CcError):
        builtin_function("IP", 2)


def test_pip2_variants_differ():
    lit = builtin_function("PIP2", 2, variant="ZERO_SIDED")
    orc = builtin_function("PIP2", 2, variant="TWO_SIDED")
    assert lit.rows != orc.rows
    # every defined value agrees with IP_2 on both variants
    ip = builtin_function("IP", 2, q=2)
    for f in (lit, orc):
        for i, j, v in f.defined_cells():
            assert v == ip.value(i, j)
    with pytest.raises(CcError):
        builtin_function("PIP2", 2, variant="WHAT")


def test_materialization_cap():
    with pytest.raises(CapError):
        builtin_function("EQ", 13)
    with pytest.raises(CcError):
        builtin_function("NOPE", 2)


# --- language and monoid problems -------------------------------------------

def test_language_problem_z3():
    f = language_problem(builtin_language("Z3_LANG"), 1)
    assert f.row_labels == ("_", "a")
    assert f.rows == ("10", "00")


def test_language_problem_l5():
    f = language_problem(builtin_language("L5"), 1)
    assert f.n_rows == f.n_cols == 3


def test_language_problem_bounds():
    with pytest.raises(CcError):
        language_problem(builtin_language("Z3_LANG"), 0)
    with pytest.raises(CapError):
        language_problem(builtin_language("L5"), 12)


def test_monoid_problem_trivial():
    m = OrderedMonoid.with_equality(
        FiniteMonoid(1, 0, ((0,),), ("",), ()))
    ideal = ideal_generated(m, [0])
    f = monoid_problem(m, ideal, 2)
    assert f.rows == ("1",)


def test_monoid_problem_cap():
    om, _, ideal = syntactic_ordered_monoid(builtin_language("L5"))
    with pytest.raises(CapError):
        monoid_problem(om, ideal, 3)  # 31^3 rows


def test_min_cover_cap_on_distinct_rows():
    with pytest.raises(CapError):
        min_cover(builtin_function("EQ", 7), 1)


def test_monoid_problem_z3_depends_on_sum():
    om, _, ideal = syntactic_ordered_monoid(builtin_language("Z3_LANG"))
    f = monoid_problem(om, ideal, 1)
    for i in range(3):
        for j in range(3):
            assert f.value(i, j) == (1 if (i + j) % 3 == 0 else 0)


def test_worst_case_partition_cross_check():
    # the alternating split attains the maximum 1-cover over all ways to
    # deal out the padded positions (checked exhaustively at small sizes)
    for name, total in (("BA2_LANG", 2), ("Z3_LANG", 4), ("BA2_LANG", 4)):
        d = builtin_language(name)
        alternating = tuple(range(0, total, 2))
        best = 0
        for k in range(total + 1):
            for alice in itertools.combinations(range(total), k):
                f = language_problem_partition(d, total, alice)
                if f.count(1) == 0:
                    continue
                best = max(best, min_cover(f, 1)[0])
        reference = min_cover(language_problem_partition(d, total, alternating), 1)[0]
        assert best == reference


# --- rectangles and covers ----------------------------------------------------

def test_monochromatic_color():
    f = builtin_function("PDISJ", 2)
    assert monochromatic_color(f, Rectangle((0,), (0,))) == 1
    # an all-undefined rectangle is monochromatic for either color
    assert monochromatic_color(f, Rectangle((3,), (3,)), vacuous=1) == 1
    assert monochromatic_color(f, Rectangle((3,), (3,)), vacuous=0) == 0
    assert is_monochromatic(f, Rectangle((3,), (3,)), 0)
    assert is_monochromatic(f, Rectangle((3,), (3,)), 1)
    assert not is_monochromatic(f, Rectangle((0, 1), (0, 1)), 0)
    eq = builtin_function("EQ", 1)
    assert monochromatic_color(eq, Rectangle((0, 1), (0, 1))) is None


def test_rectangle_nonempty():
    with pytest.raises(CcError):
        Rectangle((), (0,))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_min_cover_eq(n):
    f = builtin_function("EQ", n)
    count, cover = min_cover(f, 1)
    assert count == 2 ** n
    cells = set(f.z_cells(1))
    covered = set()
    for r in cover.rectangles:
        assert monochromatic_color(f, r, vacuous=1) == 1
        covered.update(r.cells())
    assert cells <= covered


def test_min_cover_matches_brute_oracle():
    for name, n, z in (("EQ", 1, 0), ("EQ", 2, 1), ("DISJ", 2, 0),
                       ("PDISJ", 2, 1), ("PDISJ", 2, 0), ("LT", 2, 1)):
        f = builtin_function(name, n)
        assert min_cover(f, z)[0] == brute_min_cover(f, z), (name, n, z)


def test_min_cover_neq_frozen():
    # value recorded from the exhaustive oracle
    f = builtin_function("NEQ", 2)
    assert brute_min_cover(f, 1) == 4
    assert min_cover(f, 1)[0] == 4
    assert min_cover(builtin_function("NEQ", 3), 1)[0] <= 6  # 2n position cover


def test_min_cover_all_ones():
    f = CommFunction("ones", ("a", "b"), ("c", "d"), ("11", "11"))
    assert min_cover(f, 1)[0] == 1
    with pytest.raises(CcError):
        min_cover(f, 0)


def test_min_disjoint_cover_eq1_frozen():
    f = builtin_function("EQ", 1)
    assert brute_min_disjoint(f) == 4
    count, cover = min_disjoint_cover(f)
    assert count == 4
    validate_disjoint_cover(f, cover)


def test_min_disjoint_cover_constant():
    f = CommFunction("ones", ("a", "b"), ("c", "d"), ("11", "11"))
    assert min_disjoint_cover(f)[0] == 1


def test_min_disjoint_cover_eq2():
    f = builtin_function("EQ", 2)
    count, cover = min_disjoint_cover(f)
    validate_disjoint_cover(f, cover)
    assert count >= 2 ** 2 + 1


def test_min_disjoint_cover_promise_oracle():
    f = builtin_function("PDISJ", 2)
    count, cover = min_disjoint_cover(f)
    validate_disjoint_cover(f, cover)
    assert count == brute_min_disjoint(f)


def test_disjoint_cover_cap():
    with pytest.raises(CapError):
        min_disjoint_cover(builtin_function("EQ", 5))


# --- exact deterministic complexity -------------------------------------------

def test_exact_cc_eq():
    for n in (1, 2, 3):
        f = builtin_function("EQ", n)
        bits, tree = exact_deterministic_cc(f)
        assert bits == n + 1
        assert len(tree.leaves()) <= 2 ** bits
        for leaf in tree.leaves():
            rect = Rectangle(leaf.rows, leaf.cols)
            assert monochromatic_color(f, rect, vacuous=leaf.color) == leaf.color


def test_exact_cc_constant():
    f = CommFunction("ones", ("a", "b"), ("c", "d"), ("11", "11"))
    assert exact_deterministic_cc(f)[0] == 0


def test_exact_cc_cap():
    with pytest.raises(CapError):
        exact_deterministic_cc(builtin_function("EQ", 4))


def test_promise_monotonicity():
    # PDISJ is DISJ with cells knocked out; neither covers nor protocol
    # depth may grow
    for n in (2, 3):
        total = builtin_function("DISJ", n)
        promise = builtin_function("PDISJ", n)
        assert min_cover(promise, 1)[0] <= min_cover(total, 1)[0]
        assert min_cover(promise, 0)[0] <= min_cover(total, 0)[0]
        assert exact_deterministic_cc(promise)[0] <= exact_deterministic_cc(total)[0]


# --- fooling sets --------------------------------------------------------------

@pytest.mark.parametrize("name", ["EQ", "LT"])
@pytest.mark.parametrize("n", [1, 2, 3])
def test_fooling_eq_lt(name, n):
    f = builtin_function(name, n)
    assert len(max_fooling_set(f, 1)) == 2 ** n


def test_fooling_all_ones():
    f = CommFunction("ones", ("a", "b"), ("c", "d"), ("11", "11"))
    assert len(max_fooling_set(f, 1)) == 1


def test_fooling_matches_brute_oracle():
    for name, n, z in (("EQ", 2, 0), ("DISJ", 2, 1), ("PDISJ", 2, 0),
                       ("NEQ", 2, 1), ("LT", 2, 0)):
        f = builtin_function(name, n)
        assert len(max_fooling_set(f, z)) == brute_max_fooling(f, z), (name, n, z)


def test_fooling_set_is_valid():
    f = builtin_function("DISJ", 3)
    cells = max_fooling_set(f, 1)
    for (x1, y1), (x2, y2) in itertools.combinations(cells, 2):
        assert f.value(x1, y2) == 0 or f.value(x2, y1) == 0


# --- rectangle measures ---------------------------------------------------------

def test_measure_single_cell():
    f = builtin_function("EQ", 1)
    mu = RectangleMeasure.from_dict({(0, 0): 7})
    assert max_rectangle_measure(f, 1, mu) == 7


def test_measure_negative_rejected():
    with pytest.raises(CcError):
        RectangleMeasure.from_dict({(0, 0): -1})


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_disj_rectangle_mass(n):
    f = builtin_function("DISJ", n)
    mu = RectangleMeasure.indicator(f, 1)
    assert mu.total() == 3 ** n
    assert max_rectangle_measure(f, 1, mu) == 2 ** n


def test_rectangle_size_bound_for_covers():
    # count / max-mass lower-bounds the cover number, for several measures
    for name, n in (("DISJ", 2), ("DISJ", 3), ("EQ", 2), ("IP", 2)):
        f = builtin_function(name, n, q=2) if name == "IP" else builtin_function(name, n)
        for z in (0, 1):
            if not f.count(z):
                continue
            mu = RectangleMeasure.indicator(f, z)
            s = max_rectangle_measure(f, z, mu)
            need = -(-mu.total() // s)
            assert min_cover(f, z)[0] >= need


# --- protocol simulation ---------------------------------------------------------

def test_simulate_cover_protocol_eq2():
    f = builtin_function("EQ", 2)
    cd, cover = min_disjoint_cover(f)
    bound = (log2ceil(cd) + 2) * (log2ceil(cd) + 1)
    for x in range(4):
        for y in range(4):
            answer, bits = simulate_cover_protocol(f, cover, x, y)
            assert answer == f.value(x, y)
            assert bits <= bound


def test_simulate_cover_protocol_constant():
    f = CommFunction("ones", ("a", "b"), ("c", "d"), ("11", "11"))
    _, cover = min_disjoint_cover(f)
    answer, bits = simulate_cover_protocol(f, cover, 0, 1)
    assert answer == 1 and bits == 1


def test_simulate_rejects_invalid_cover():
    f = builtin_function("EQ", 1)
    bad = Cover(None, (Rectangle((0, 1), (0, 1)),))
    with pytest.raises(CcError):
        simulate_cover_protocol(f, bad, 0, 0)
    not_covering = Cover(None, (Rectangle((0,), (0,)),))
    with pytest.raises(CcError):
        simulate_cover_protocol(f, not_covering, 0, 0)


def test_simulate_promise_inputs():
    f = builtin_function("PDISJ", 2)
    _, cover = min_disjoint_cover(f)
    for i in range(4):
        for j in range(4):
            v = f.value(i, j)
            answer, _ = simulate_cover_protocol(f, cover, i, j)
            if v is not None:
                assert answer == v


# --- reports ----------------------------------------------------------------------

def test_format_indices():
    assert format_indices([0, 1, 2, 5]) == "0-2,5"
    assert format_indices([3]) == "3"
    assert format_indices([]) == ""


def test_serialize_function_round_shape():
    f = builtin_function("PDISJ", 1)
    text = serialize_function(f)
    assert "name: PDISJ" in text
    assert "matrix:" in text
    assert text.strip().splitlines()[-2:] == ["11", "10"]


def test_serialize_cover():
    f = builtin_function("EQ", 1)
    count, cover = min_cover(f, 1)
    text = serialize_cover(f, count, cover)
    assert text.startswith("count: 2\ncolor: 1\n")
    assert text.count("rect:") == 2
