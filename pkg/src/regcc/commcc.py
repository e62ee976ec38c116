"""Exact communication-complexity computations on small explicit functions.

Matrices are stored row-wise as strings over ``0``, ``1`` and ``*`` where
``*`` marks promise-excluded (undefined) cells.  Undefined cells act as
wildcards inside rectangles: a z-monochromatic rectangle must avoid defined
(1-z) cells only.

Exact solvers: minimum rectangle cover (branch and bound over maximal
rectangles), minimum disjoint cover (rank-bounded search with an integer
program as fallback), deterministic protocol depth (memoized bipartition
recursion), maximum fooling set (maximum clique), maximum rectangle
measure.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy import sparse
from scipy.optimize import Bounds, LinearConstraint, milp

from .automata import EPSILON, CapError, CcError, Dfa, accepts

UNDEF = "*"

MATERIALIZE_CAP = 12          # 2^n x 2^n builtin matrices
PROBLEM_CELL_CAP = 4096       # rows of language/monoid problems
COVER_CAP = 64                # per side, exact cover guarantee
DISJOINT_CAP = 16             # per side, partition search
EXACT_CC_CAP = 8              # per side, protocol-depth search
FOOLING_CAP = 64
MEASURE_CAP = 32
CONCEPT_CAP = 300_000


def _log2ceil(k: int) -> int:
    return (k - 1).bit_length() if k > 1 else 0


@dataclass(frozen=True)
class CommFunction:
    """Two-party (possibly promise) function as an explicit matrix."""

    name: str
    row_labels: tuple[str, ...]
    col_labels: tuple[str, ...]
    rows: tuple[str, ...]
    params: tuple[tuple[str, object], ...] = ()

    def __post_init__(self):
        if len(self.rows) != len(self.row_labels):
            raise CcError("row count does not match labels")
        if any(len(r) != len(self.col_labels) for r in self.rows):
            raise CcError("row width does not match column labels")
        if len(set(self.row_labels)) != len(self.row_labels) or \
                len(set(self.col_labels)) != len(self.col_labels):
            raise CcError("labels must be distinct")
        if not any(ch in "01" for r in self.rows for ch in r):
            raise CcError("function has no defined cell")

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    @property
    def n_cols(self) -> int:
        return len(self.col_labels)

    def value(self, i: int, j: int) -> int | None:
        ch = self.rows[i][j]
        return None if ch == UNDEF else int(ch)

    def defined_cells(self):
        for i, row in enumerate(self.rows):
            for j, ch in enumerate(row):
                if ch != UNDEF:
                    yield i, j, int(ch)

    def z_cells(self, z: int):
        target = str(z)
        for i, row in enumerate(self.rows):
            for j, ch in enumerate(row):
                if ch == target:
                    yield i, j

    def count(self, z: int) -> int:
        target = str(z)
        return sum(row.count(target) for row in self.rows)


@dataclass(frozen=True)
class Rectangle:
    rows: tuple[int, ...]
    cols: tuple[int, ...]

    def __post_init__(self):
        if not self.rows or not self.cols:
            raise CcError("rectangles must be nonempty on both sides")

    def cells(self):
        return itertools.product(self.rows, self.cols)


@dataclass(frozen=True)
class Cover:
    """Rectangle list; ``color`` is the covered color, or None for a
    mixed-color disjoint cover."""

    color: int | None
    rectangles: tuple[Rectangle, ...]


@dataclass(frozen=True)
class RectangleMeasure:
    """Non-negative cell weights, sparse; missing cells weigh zero."""

    weights: tuple[tuple[tuple[int, int], object], ...]

    @classmethod
    def from_dict(cls, d) -> "RectangleMeasure":
        for v in d.values():
            if v < 0:
                raise CcError("measure weights must be non-negative")
        return cls(tuple(sorted(d.items())))

    @classmethod
    def indicator(cls, f: CommFunction, z: int) -> "RectangleMeasure":
        return cls.from_dict({(i, j): 1 for i, j in f.z_cells(z)})

    def as_dict(self):
        return dict(self.weights)

    def total(self):
        return sum(v for _, v in self.weights)


# ---------------------------------------------------------------------------
# built-in functions

def _labels(n: int) -> tuple[str, ...]:
    return tuple(format(x, "0%db" % n) for x in range(1 << n))


def _row_strings_from_sets(n, fill, assignments):
    """Build 2^n rows from {row -> {col: char}} sparse assignments."""
    size = 1 << n
    rows = []
    for x in range(size):
        row = bytearray(fill.encode() * size)
        for y, ch in assignments(x):
            row[y] = ord(ch)
        rows.append(row.decode())
    return tuple(rows)


def _submasks(m: int):
    s = m
    while True:
        yield s
        if s == 0:
            return
        s = (s - 1) & m


def builtin_function(name: str, n: int, q: int | None = None,
                     variant: str = "TWO_SIDED") -> CommFunction:
    """Materialize a named two-party function on n-bit inputs.

    PIP2 (promise inner product mod 2) ships in two variants that differ
    in the orientation of the per-position prefix conditions and in which
    outputs carry the promise.  TWO_SIDED promises every input, requiring
    at each mixed position (0,1) an even and (1,0) an odd count of earlier
    common ones; it is the variant under which the block reduction to the
    five-state language verifies exhaustively.  ZERO_SIDED keeps the
    opposite orientation and restricts only the 0-inputs; the same block
    reduction demonstrably fails against it.
    """
    if not (1 <= n <= MATERIALIZE_CAP):
        raise CapError("n=%d outside materialization range 1..%d" % (n, MATERIALIZE_CAP))
    size = 1 << n
    labels = _labels(n)
    full = (1 << n) - 1

    if name == "EQ":
        rows = tuple("0" * x + "1" + "0" * (size - x - 1) for x in range(size))
    elif name == "NEQ":
        rows = tuple("1" * x + "0" + "1" * (size - x - 1) for x in range(size))
    elif name == "LT":
        rows = tuple("0" * x + "1" * (size - x) for x in range(size))
    elif name == "DISJ":
        rows = _row_strings_from_sets(
            n, "0", lambda x: ((y, "1") for y in _submasks(full & ~x)))
    elif name == "PDISJ":
        def cells(x):
            rest = full & ~x
            for s in _submasks(rest):
                yield s, "1"
            for k in range(n):
                if x >> k & 1:
                    for s in _submasks(rest):
                        yield s | (1 << k), "0"
        rows = _row_strings_from_sets(n, UNDEF, cells)
    elif name == "IP":
        if q is None or q < 2:
            raise CcError("IP requires q >= 2")
        rows = tuple(
            "".join("1" if (x & y).bit_count() % q == 0 else "0"
                    for y in range(size))
            for x in range(size))
    elif name == "PIP2":
        if variant not in ("TWO_SIDED", "ZERO_SIDED"):
            raise CcError("unknown PIP2 variant %r" % variant)
        rows = tuple("".join(_pip2_cell(labels[x], labels[y], variant)
                             for y in range(size)) for x in range(size))
    else:
        raise CcError("unknown built-in function %r" % name)

    params = [("n", n)]
    if name == "IP":
        params.append(("q", q))
        name = "IP_%d" % q
    if name == "PIP2":
        params.append(("variant", variant))
    return CommFunction(name, labels, labels, rows, tuple(params))


def _pip2_cell(xs: str, ys: str, variant: str) -> str:
    inter = sum(a == b == "1" for a, b in zip(xs, ys))
    value = "1" if inter % 2 == 0 else "0"
    prefix_even = True  # IP2 of the empty prefix is 1
    promised = True
    for a, b in zip(xs, ys):
        if variant == "ZERO_SIDED":
            # (0,1) wants an odd earlier count, (1,0) an even one
            if a == "0" and b == "1" and prefix_even:
                promised = False
            if a == "1" and b == "0" and not prefix_even:
                promised = False
        else:
            # (0,1) wants an even earlier count, (1,0) an odd one
            if a == "0" and b == "1" and not prefix_even:
                promised = False
            if a == "1" and b == "0" and prefix_even:
                promised = False
        if a == b == "1":
            prefix_even = not prefix_even
    if variant == "ZERO_SIDED":
        if value == "1":
            return "1"
        return "0" if promised else UNDEF
    return value if promised else UNDEF


BUILTIN_FUNCTION_NAMES = ("DISJ", "EQ", "IP", "LT", "NEQ", "PDISJ", "PIP2")


# ---------------------------------------------------------------------------
# language and monoid problems

def language_problem(d: Dfa, n: int) -> CommFunction:
    """Alternating-partition word problem: Alice holds the odd letters,
    Bob the even ones, each letter from the alphabet plus the empty letter."""
    if n < 1:
        raise CcError("language problem needs n >= 1")
    letters = (EPSILON,) + tuple(d.alphabet)
    if len(letters) ** n > PROBLEM_CELL_CAP:
        raise CapError("language problem size %d^%d exceeds cap"
                       % (len(letters), n))
    tuples = list(itertools.product(letters, repeat=n))
    labels = tuple("".join(t) for t in tuples)
    rows = []
    for r in tuples:
        row = []
        for c in tuples:
            word = "".join(a + b for a, b in zip(r, c))
            row.append("1" if accepts(d, word) else "0")
        rows.append("".join(row))
    return CommFunction("language:%s" % ",".join(d.alphabet), labels, labels,
                        tuple(rows), (("n", n),))


def language_problem_partition(d: Dfa, total: int, alice_positions) -> CommFunction:
    """Word problem under an arbitrary partition of ``total`` positions;
    cross-check helper for the worst-case-partition convention."""
    alice_positions = tuple(sorted(alice_positions))
    if any(not 0 <= p < total for p in alice_positions):
        raise CcError("partition positions out of range")
    bob_positions = tuple(p for p in range(total) if p not in alice_positions)
    letters = (EPSILON,) + tuple(d.alphabet)
    if len(letters) ** max(len(alice_positions), len(bob_positions), 1) > PROBLEM_CELL_CAP:
        raise CapError("partitioned problem exceeds cap")
    a_tuples = list(itertools.product(letters, repeat=len(alice_positions))) or [()]
    b_tuples = list(itertools.product(letters, repeat=len(bob_positions))) or [()]
    rows = []
    for ra in a_tuples:
        row = []
        for rb in b_tuples:
            slots = [EPSILON] * total
            for p, ch in zip(alice_positions, ra):
                slots[p] = ch
            for p, ch in zip(bob_positions, rb):
                slots[p] = ch
            row.append("1" if accepts(d, "".join(slots)) else "0")
        rows.append("".join(row))
    return CommFunction("language-partition", tuple("".join(t) or EPSILON for t in a_tuples),
                        tuple("".join(t) or EPSILON for t in b_tuples),
                        tuple(rows), (("total", total),))


def monoid_problem(om, ideal, n: int) -> CommFunction:
    """Alternating-partition evaluation problem for (M, I)."""
    m = om.monoid if hasattr(om, "monoid") else om
    if n < 1:
        raise CcError("monoid problem needs n >= 1")
    if m.size ** n > PROBLEM_CELL_CAP:
        raise CapError("monoid problem size %d^%d exceeds cap" % (m.size, n))
    members = ideal.members if hasattr(ideal, "members") else frozenset(ideal)
    tuples = list(itertools.product(range(m.size), repeat=n))
    labels = tuple(".".join(m.name_of(x) for x in t) for t in tuples)
    rows = []
    for r in tuples:
        row = []
        for c in tuples:
            p = m.identity
            for a, b in zip(r, c):
                p = m.table[m.table[p][a]][b]
            row.append("1" if p in members else "0")
        rows.append("".join(row))
    return CommFunction("monoid", labels, labels, tuple(rows), (("n", n),))


# ---------------------------------------------------------------------------
# rectangles

def monochromatic_color(f: CommFunction, rect: Rectangle,
                        vacuous: int | None = None) -> int | None:
    """The single defined color inside the rectangle (undefined cells are
    wildcards), None if both colors occur; an all-undefined rectangle is
    monochromatic for either color and reports ``vacuous``."""
    seen = set()
    for i, j in rect.cells():
        v = f.value(i, j)
        if v is not None:
            seen.add(v)
            if len(seen) == 2:
                return None
    if not seen:
        return vacuous
    return seen.pop()


def is_monochromatic(f: CommFunction, rect: Rectangle, z: int) -> bool:
    other = str(1 - z)
    return all(f.rows[i][j] != other for i, j in rect.cells())


def _dedup(f: CommFunction):
    """Group equal rows and columns; returns (row reps, col reps,
    row class lists, col class lists)."""
    row_class = {}
    row_groups = []
    for i, row in enumerate(f.rows):
        if row in row_class:
            row_groups[row_class[row]].append(i)
        else:
            row_class[row] = len(row_groups)
            row_groups.append([i])
    cols = ["".join(f.rows[i][j] for i in range(f.n_rows)) for j in range(f.n_cols)]
    col_class = {}
    col_groups = []
    for j, col in enumerate(cols):
        if col in col_class:
            col_groups[col_class[col]].append(j)
        else:
            col_class[col] = len(col_groups)
            col_groups.append([j])
    return ([g[0] for g in row_groups], [g[0] for g in col_groups],
            row_groups, col_groups)


def _concepts(compat_rows, n_rows, n_cols):
    """All maximal rectangles of a compatibility relation, as
    (row mask, col mask) pairs with both sides nonempty."""
    all_rows = (1 << n_rows) - 1
    col_rows = []
    for c in range(n_cols):
        mask = 0
        for r in range(n_rows):
            if compat_rows[r] >> c & 1:
                mask |= 1 << r
        col_rows.append(mask)

    def intent(rowmask):
        out = (1 << n_cols) - 1
        r = rowmask
        while r:
            low = r & -r
            out &= compat_rows[low.bit_length() - 1]
            r ^= low
        return out

    start = (all_rows, intent(all_rows))
    seen = {start}
    queue = [start]
    out = []
    while queue:
        ext, inte = queue.pop()
        if ext and inte:
            out.append((ext, inte))
        for c in range(n_cols):
            if inte >> c & 1:
                continue
            ext2 = ext & col_rows[c]
            if not ext2:
                continue
            inte2 = intent(ext2)
            node = (ext2, inte2)
            if node not in seen:
                if len(seen) > CONCEPT_CAP:
                    raise CapError("maximal-rectangle enumeration exceeds cap")
                seen.add(node)
                queue.append(node)
    out.sort()
    return out


def _mask_to_indices(mask):
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return tuple(out)


def min_cover(f: CommFunction, z: int):
    """Exact minimum number of z-monochromatic rectangles covering the
    z-cells.  Rectangles may overlap and may include undefined cells.
    Returns (count, Cover).  Branch and bound over maximal rectangles with
    a greedy incumbent."""
    if z not in (0, 1):
        raise CcError("color must be 0 or 1")
    if f.count(z) == 0:
        raise CcError("no %d-cells to cover" % z)
    row_reps, col_reps, row_groups, col_groups = _dedup(f)
    if len(row_reps) > COVER_CAP or len(col_reps) > COVER_CAP:
        raise CapError("cover search capped at %dx%d distinct rows/columns"
                       % (COVER_CAP, COVER_CAP))
    nr, nc = len(row_reps), len(col_reps)
    other = str(1 - z)
    compat = []
    for r in row_reps:
        mask = 0
        for cj, c in enumerate(col_reps):
            if f.rows[r][c] != other:
                mask |= 1 << cj
        compat.append(mask)
    zcells = [(ri, cj) for ri, r in enumerate(row_reps)
              for cj, c in enumerate(col_reps) if f.rows[r][c] == str(z)]
    cell_index = {cell: k for k, cell in enumerate(zcells)}
    universe = (1 << len(zcells)) - 1

    candidates = []
    for ext, inte in _concepts(compat, nr, nc):
        cover_mask = 0
        for ri in _mask_to_indices(ext):
            for cj in _mask_to_indices(inte):
                k = cell_index.get((ri, cj))
                if k is not None:
                    cover_mask |= 1 << k
        if cover_mask:
            candidates.append((ext, inte, cover_mask))

    # dominance: drop rectangles whose z-coverage is contained in an
    # earlier (larger-or-equal) candidate's
    candidates.sort(key=lambda c: -c[2].bit_count())
    kept = []
    for cand in candidates:
        if not any(cand[2] & ~other[2] == 0 for other in kept):
            kept.append(cand)
    candidates = kept

    count, picked = _set_cover_exact(universe, candidates)
    rects = tuple(
        Rectangle(
            tuple(sorted(i for ri in _mask_to_indices(ext) for i in row_groups[ri])),
            tuple(sorted(j for cj in _mask_to_indices(inte) for j in col_groups[cj])))
        for ext, inte, _ in picked)
    return count, Cover(z, rects)


def _set_cover_exact(universe, candidates):
    """Exact minimum set cover by branch and bound; candidates are
    (ext, inte, cover_mask) triples, deterministic order."""
    cell_cands = {}
    k = universe.bit_length()
    for idx in range(k):
        bit = 1 << idx
        cell_cands[idx] = [c for c in candidates if c[2] & bit]
        if not cell_cands[idx]:
            raise CcError("cell %d cannot be covered" % idx)

    # greedy incumbent; max() keeps the first of equally-covering candidates
    covered = 0
    greedy = []
    while covered != universe:
        best = max(candidates, key=lambda c: (c[2] & ~covered).bit_count())
        greedy.append(best)
        covered |= best[2]
    best_count = len(greedy)
    best_sel = list(greedy)
    max_size = max(c[2].bit_count() for c in candidates)

    def dfs(covered, sel):
        nonlocal best_count, best_sel
        if covered == universe:
            if len(sel) < best_count:
                best_count = len(sel)
                best_sel = list(sel)
            return
        remaining = (universe & ~covered).bit_count()
        if len(sel) + (remaining + max_size - 1) // max_size >= best_count:
            return
        # branch on the uncovered cell with fewest candidates
        pick_cands = None
        for idx in range(k):
            if covered >> idx & 1:
                continue
            cands = cell_cands[idx]
            if pick_cands is None or len(cands) < len(pick_cands):
                pick_cands = cands
                if len(cands) <= 1:
                    break
        for c in pick_cands:
            sel.append(c)
            dfs(covered | c[2], sel)
            sel.pop()

    dfs(0, [])
    return best_count, best_sel


def _rank_q(mat) -> int:
    """Exact rank over the rationals by Gaussian elimination."""
    m = [[Fraction(v) for v in row] for row in mat]
    if not m:
        return 0
    rows, cols = len(m), len(m[0])
    r = 0
    for c in range(cols):
        pivot = next((i for i in range(r, rows) if m[i][c]), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c]:
                factor = m[i][c]
                m[i] = [a - factor * b for a, b in zip(m[i], m[r])]
        r += 1
        if r == rows:
            break
    return r


def _greedy_partition(cands, cell_order, covered0=0, used0=0):
    """Deterministic greedy exact-cover: first uncovered cell, largest
    admissible candidate.  ``cands``: (rows, cols, color, def_mask, foot_mask).
    Always succeeds because single-cell hulls are among the candidates."""
    covered, used = covered0, used0
    picked = []
    for cellbit in cell_order:
        if covered & cellbit:
            continue
        best = None
        for cand in cands:
            if not (cand[3] & cellbit):
                continue
            if cand[3] & covered or cand[4] & used:
                continue
            if best is None or cand[3].bit_count() > best[3].bit_count():
                best = cand
        covered |= best[3]
        used |= best[4]
        picked.append(best)
    return picked


def _partition_color_exact(cands_z, order_z, nr, nc, upper, node_cap=300_000):
    """Minimum exact cover of one color's cells by its rectangles.

    Iterative deepening from the rank bound; at each node the rank of the
    still-uncovered cell matrix must fit in the remaining budget, which
    forces nearly every placement to strictly reduce rank.  Raises CapError
    past the node cap so the caller can fall back to the integer program.
    """
    full = 0
    for bit in order_z:
        full |= bit
    rank_cache = {}

    def rank_of(mask):
        got = rank_cache.get(mask)
        if got is None:
            got = _rank_q([[1 if mask >> (i * nc + j) & 1 else 0
                            for j in range(nc)] for i in range(nr)])
            rank_cache[mask] = got
        return got

    by_size = sorted(cands_z, key=lambda c: (-c[3].bit_count(), c[:2]))
    nodes = 0

    def dfs(remaining, budget, acc):
        nonlocal nodes
        if not remaining:
            return list(acc)
        if budget == 0:
            return None
        nodes += 1
        if nodes > node_cap:
            raise CapError("partition search exceeded the node cap")
        if rank_of(remaining) > budget:
            return None
        cellbit = remaining & -remaining
        for cand in by_size:
            if cand[3] & cellbit and cand[3] & ~remaining == 0:
                acc.append(cand)
                got = dfs(remaining & ~cand[3], budget - 1, acc)
                acc.pop()
                if got is not None:
                    return got
        return None

    budget = rank_of(full)
    while budget <= upper:
        got = dfs(full, budget, [])
        if got is not None:
            return got
        budget += 1
    raise CapError("partition search failed below the greedy bound")


def _partition_milp(cands, cell_bits, und_bits, lower, upper):
    """Exact minimum exact-cover of the defined cell bits by candidates,
    with at-most-once use of undefined cells; lower/upper are valid bounds
    supplied as constraints so optimality closes at the known bound."""
    n_vars = len(cands)
    eq_rows, eq_cols = [], []
    ub_rows, ub_cols = [], []
    cell_pos = {bit: k for k, bit in enumerate(cell_bits)}
    und_pos = {bit: k for k, bit in enumerate(und_bits)}
    for v, cand in enumerate(cands):
        for bit in _mask_to_indices(cand[3]):
            eq_rows.append(cell_pos[bit])
            eq_cols.append(v)
        for bit in _mask_to_indices(cand[4] & ~cand[3]):
            if bit in und_pos:
                ub_rows.append(und_pos[bit])
                ub_cols.append(v)
    constraints = [LinearConstraint(
        sparse.csr_matrix((np.ones(len(eq_rows)), (eq_rows, eq_cols)),
                          shape=(len(cell_bits), n_vars)), 1, 1)]
    if ub_rows:
        constraints.append(LinearConstraint(
            sparse.csr_matrix((np.ones(len(ub_rows)), (ub_rows, ub_cols)),
                              shape=(len(und_bits), n_vars)), 0, 1))
    constraints.append(LinearConstraint(np.ones((1, n_vars)), lower, upper))
    res = milp(c=np.ones(n_vars), constraints=constraints,
               integrality=np.ones(n_vars), bounds=Bounds(0, 1))
    if res.status != 0:
        raise CcError("partition solve failed: %s" % res.message)
    return [cands[v] for v in range(n_vars) if res.x[v] > 0.5]


def min_disjoint_cover(f: CommFunction):
    """Exact minimum partition of the defined cells into monochromatic
    rectangles (pairwise disjoint as cell sets).  Returns (count, Cover).

    Total functions split per color (opposite-color rectangles cannot
    meet without undefined cells) and each color is bounded below by the
    exact rank of its 0/1 matrix over Q: a partition sums outer products
    to that matrix.  A deterministic greedy supplies the upper bound and
    an integer program settles any remaining gap."""
    if f.n_rows > DISJOINT_CAP or f.n_cols > DISJOINT_CAP:
        raise CapError("disjoint-cover search capped at %dx%d" % (DISJOINT_CAP, DISJOINT_CAP))
    row_reps, col_reps, row_groups, col_groups = _dedup(f)
    nr, nc = len(row_reps), len(col_reps)
    vals = [[f.value(r, c) for c in col_reps] for r in row_reps]

    raw = _closed_rectangles(vals, nr, nc)
    cands = []
    for rows_mask, cols_mask, color in raw:
        def_mask = foot_mask = 0
        for i in _mask_to_indices(rows_mask):
            for j in _mask_to_indices(cols_mask):
                bit = 1 << (i * nc + j)
                foot_mask |= bit
                if vals[i][j] is not None:
                    def_mask |= bit
        cands.append((rows_mask, cols_mask, color, def_mask, foot_mask))

    has_undef = any(v is None for row in vals for v in row)
    cell_order = [1 << (i * nc + j) for i in range(nr) for j in range(nc)
                  if vals[i][j] is not None]
    und_bits = [i * nc + j for i in range(nr) for j in range(nc)
                if vals[i][j] is None]

    picked = []
    if not has_undef:
        for z in (0, 1):
            cands_z = [c for c in cands if c[2] == z]
            order_z = [1 << (i * nc + j) for i in range(nr) for j in range(nc)
                       if vals[i][j] == z]
            if not order_z:
                continue
            greedy = _greedy_partition(cands_z, order_z)
            try:
                picked.extend(_partition_color_exact(cands_z, order_z, nr, nc,
                                                     len(greedy)))
            except CapError:
                lower = _rank_q([[1 if vals[i][j] == z else 0 for j in range(nc)]
                                 for i in range(nr)])
                picked.extend(_partition_milp(
                    cands_z, [b.bit_length() - 1 for b in order_z], [],
                    lower, len(greedy)))
    else:
        greedy = _greedy_partition(cands, cell_order)
        lower = max(1, sum(len(max_fooling_set(f, z)) for z in (0, 1) if f.count(z)))
        if len(greedy) == lower:
            picked = greedy
        else:
            picked = _partition_milp(
                cands, [b.bit_length() - 1 for b in cell_order], und_bits,
                lower, len(greedy))

    rects = tuple(
        Rectangle(
            tuple(sorted(i for ri in _mask_to_indices(rm) for i in row_groups[ri])),
            tuple(sorted(j for cj in _mask_to_indices(cm) for j in col_groups[cj])))
        for rm, cm, _c, _d, _f in sorted(picked))
    return len(rects), Cover(None, rects)


def _closed_rectangles(vals, nr, nc):
    """All monochromatic rectangles that are hulls of their defined cells.

    Every partition can be rewritten to use only such rectangles: shrinking
    a part to the hull of its defined cells keeps it monochromatic and
    keeps the parts disjoint.
    """
    def close(color, def_mask):
        # def_mask over nr*nc cells
        while True:
            rows_mask = cols_mask = 0
            m = def_mask
            while m:
                low = m & -m
                k = low.bit_length() - 1
                rows_mask |= 1 << (k // nc)
                cols_mask |= 1 << (k % nc)
                m ^= low
            grown = 0
            for i in _mask_to_indices(rows_mask):
                for j in _mask_to_indices(cols_mask):
                    v = vals[i][j]
                    if v is not None:
                        if v != color:
                            return None
                        grown |= 1 << (i * nc + j)
            if grown == def_mask:
                return rows_mask, cols_mask, def_mask
            def_mask = grown

    seen = {}
    queue = []
    for i in range(nr):
        for j in range(nc):
            if vals[i][j] is None:
                continue
            color = vals[i][j]
            closed = close(color, 1 << (i * nc + j))
            key = (closed[0], closed[1], color)
            if key not in seen:
                seen[key] = closed[2]
                queue.append(key)
    while queue:
        rows_mask, cols_mask, color = queue.pop()
        def_mask = seen[(rows_mask, cols_mask, color)]
        for i in range(nr):
            for j in range(nc):
                if vals[i][j] != color or def_mask >> (i * nc + j) & 1:
                    continue
                closed = close(color, def_mask | (1 << (i * nc + j)))
                if closed is None:
                    continue
                key = (closed[0], closed[1], color)
                if key not in seen:
                    if len(seen) > CONCEPT_CAP:
                        raise CapError("partition candidate enumeration exceeds cap")
                    seen[key] = closed[2]
                    queue.append(key)
    return sorted((rm, cm, color) for (rm, cm, color) in seen)


# ---------------------------------------------------------------------------
# exact deterministic complexity

@dataclass(frozen=True)
class ProtocolNode:
    """Protocol partitioning tree over (row set, column set) rectangles."""

    rows: tuple[int, ...]
    cols: tuple[int, ...]
    color: int | None = None          # set on leaves
    split: str | None = None          # "rows" or "cols"
    children: tuple = ()

    def leaves(self):
        if not self.children:
            return [self]
        return [leaf for child in self.children for leaf in child.leaves()]


def exact_deterministic_cc(f: CommFunction):
    """Minimum worst-case bits of a deterministic protocol, with an optimal
    protocol tree.  Recursion: a rectangle costs 0 if monochromatic
    (undefined cells wildcard), else 1 plus the best worst-child over all
    nontrivial row or column bipartitions.  Matches the convention in which
    the answer bit is part of the transcript: EQ on n bits costs n+1."""
    if f.n_rows > EXACT_CC_CAP or f.n_cols > EXACT_CC_CAP:
        raise CapError("exact protocol search capped at %dx%d"
                       % (EXACT_CC_CAP, EXACT_CC_CAP))
    base = tuple(tuple(-1 if v is None else v
                       for v in (f.value(i, j) for j in range(f.n_cols)))
                 for i in range(f.n_rows))
    memo = {}

    def canon(rows):
        rows = tuple(sorted(set(rows)))
        for _ in range(4):
            cols = tuple(sorted(set(zip(*rows))))
            rows2 = tuple(sorted(set(zip(*cols))))
            if rows2 == rows:
                break
            rows = rows2
        return rows

    def mono(rows):
        seen = set()
        for row in rows:
            for v in row:
                if v != -1:
                    seen.add(v)
                    if len(seen) > 1:
                        return False
        return True

    def solve(rows):
        key = canon(rows)
        if key in memo:
            return memo[key]
        if mono(key):
            memo[key] = 0
            return 0
        rows = key
        k = len(rows)
        ncols = len(rows[0])
        best = 10 ** 9
        for side in ("rows", "cols"):
            items = rows if side == "rows" else tuple(zip(*rows))
            count = len(items)
            if count < 2:
                continue
            # part_a holds item 0; every proper complement appears once
            for pick in range((1 << (count - 1)) - 1):
                part_a = tuple(items[i] for i in range(count) if i == 0 or pick >> (i - 1) & 1)
                part_b = tuple(items[i] for i in range(1, count) if not pick >> (i - 1) & 1)
                if side == "cols":
                    part_a = tuple(zip(*part_a))
                    part_b = tuple(zip(*part_b))
                d1 = solve(part_a)
                if d1 + 1 >= best:
                    continue
                d2 = solve(part_b)
                best = min(best, 1 + max(d1, d2))
                if best == 1:
                    break
            if best == 1:
                break
        memo[key] = best
        return best

    def content(row_idx, col_idx):
        return tuple(tuple(base[i][j] for j in col_idx) for i in row_idx)

    def rebuild(row_idx, col_idx):
        sub = content(row_idx, col_idx)
        d = solve(sub)
        if d == 0:
            colors = {v for row in sub for v in row if v != -1}
            return ProtocolNode(tuple(row_idx), tuple(col_idx),
                                color=min(colors) if colors else None)
        # group duplicate rows/cols so splits mirror the solved recursion
        for side in ("rows", "cols"):
            if side == "rows":
                groups = {}
                for i in row_idx:
                    groups.setdefault(tuple(base[i][j] for j in col_idx), []).append(i)
            else:
                groups = {}
                for j in col_idx:
                    groups.setdefault(tuple(base[i][j] for i in row_idx), []).append(j)
            keys = sorted(groups)
            count = len(keys)
            if count < 2:
                continue
            for pick in range((1 << (count - 1)) - 1):
                sel = [keys[i] for i in range(count) if i == 0 or pick >> (i - 1) & 1]
                rest = [keys[i] for i in range(1, count) if not pick >> (i - 1) & 1]
                if side == "rows":
                    ra = sorted(i for kk in sel for i in groups[kk])
                    rb = sorted(i for kk in rest for i in groups[kk])
                    parts = ((ra, list(col_idx)), (rb, list(col_idx)))
                else:
                    ca = sorted(j for kk in sel for j in groups[kk])
                    cb = sorted(j for kk in rest for j in groups[kk])
                    parts = ((list(row_idx), ca), (list(row_idx), cb))
                d1 = solve(content(*parts[0]))
                d2 = solve(content(*parts[1]))
                if 1 + max(d1, d2) == d:
                    return ProtocolNode(tuple(row_idx), tuple(col_idx),
                                        split=side,
                                        children=(rebuild(*parts[0]),
                                                  rebuild(*parts[1])))
        raise AssertionError("no split matches the solved value")

    tree = rebuild(list(range(f.n_rows)), list(range(f.n_cols)))
    return solve(base), tree


# ---------------------------------------------------------------------------
# fooling sets

def max_fooling_set(f: CommFunction, z: int):
    """Maximum fooling set for color z, exact via maximum clique on the
    pairwise-separation graph.

    Two z-cells may coexist only if some cross cell carries the defined
    opposite value; an undefined cross cell is a wildcard, so it does not
    separate (the pair could still share a z-monochromatic rectangle, and
    the bound fooling <= C^z would break).
    """
    if f.n_rows > FOOLING_CAP or f.n_cols > FOOLING_CAP:
        raise CapError("fooling-set search capped at %dx%d" % (FOOLING_CAP, FOOLING_CAP))
    row_reps, col_reps, _, _ = _dedup(f)
    target = str(z)
    other = str(1 - z)
    cells = [(r, c) for r in row_reps for c in col_reps if f.rows[r][c] == target]
    n = len(cells)
    if n == 0:
        return []
    adj = [0] * n
    for a in range(n):
        xa, ya = cells[a]
        for b in range(a + 1, n):
            xb, yb = cells[b]
            if f.rows[xa][yb] == other or f.rows[xb][ya] == other:
                adj[a] |= 1 << b
                adj[b] |= 1 << a
    best_mask = _max_clique(adj, n)
    return sorted(cells[i] for i in _mask_to_indices(best_mask))


def _max_clique(adj, n):
    """Exact maximum clique with greedy-coloring bound."""
    order = sorted(range(n), key=lambda v: -adj[v].bit_count())
    best = [0, 0]  # size, mask

    def color_bound(p_mask):
        colors = []
        order_p = [v for v in order if p_mask >> v & 1]
        bounds = {}
        for v in order_p:
            for ci, cmask in enumerate(colors):
                if not (adj[v] & cmask):
                    colors[ci] |= 1 << v
                    bounds[v] = ci + 1
                    break
            else:
                colors.append(1 << v)
                bounds[v] = len(colors)
        return order_p, bounds

    def expand(r_mask, r_size, p_mask):
        if not p_mask:
            if r_size > best[0]:
                best[0], best[1] = r_size, r_mask
            return
        order_p, bounds = color_bound(p_mask)
        for v in sorted(order_p, key=lambda u: -bounds[u]):
            if r_size + bounds[v] <= best[0]:
                return
            expand(r_mask | (1 << v), r_size + 1, p_mask & adj[v])
            p_mask &= ~(1 << v)

    expand(0, 0, (1 << n) - 1)
    return best[1]


# ---------------------------------------------------------------------------
# rectangle measures

def max_rectangle_measure(f: CommFunction, z: int, measure: RectangleMeasure):
    """Maximum measure mass of any z-monochromatic rectangle; exact since
    weights are non-negative and the maximum is attained at a maximal
    rectangle."""
    if f.n_rows > MEASURE_CAP or f.n_cols > MEASURE_CAP:
        raise CapError("measure search capped at %dx%d" % (MEASURE_CAP, MEASURE_CAP))
    other = str(1 - z)
    compat = []
    for i in range(f.n_rows):
        mask = 0
        for j in range(f.n_cols):
            if f.rows[i][j] != other:
                mask |= 1 << j
        compat.append(mask)
    weights = measure.as_dict()
    best = 0
    for ext, inte in _concepts(compat, f.n_rows, f.n_cols):
        mass = sum(weights.get((i, j), 0)
                   for i in _mask_to_indices(ext) for j in _mask_to_indices(inte))
        if mass > best:
            best = mass
    return best


# ---------------------------------------------------------------------------
# the cover-based protocol

def validate_disjoint_cover(f: CommFunction, cover: Cover):
    used = {}
    for rect in cover.rectangles:
        color = monochromatic_color(f, rect)
        if color is None:
            raise CcError("invalid cover: rectangle is not monochromatic")
        for cell in rect.cells():
            if cell in used:
                raise CcError("invalid cover: overlapping rectangles at %r" % (cell,))
            used[cell] = True
    for i, j, _v in f.defined_cells():
        if (i, j) not in used:
            raise CcError("invalid cover: defined cell (%d,%d) uncovered" % (i, j))


def simulate_cover_protocol(f: CommFunction, cover: Cover, x: int, y: int):
    """Run the round protocol driven by a monochromatic disjoint cover.

    Each round, Alice looks for a 1-rectangle through her row that shares
    rows with at most half of the live 0-rectangles; failing that Bob tries
    the column version; if both fail the answer is 0.  An empty live set
    answers 1.  Returns (answer, bits used)."""
    validate_disjoint_cover(f, cover)
    rects = list(cover.rectangles)
    colored = [(r, monochromatic_color(f, r, vacuous=0)) for r in rects]
    zero_rects = [r for r, color in colored if color == 0]
    one_rects = [r for r, color in colored if color == 1]
    name_bits = _log2ceil(len(rects))
    live = list(zero_rects)
    bits = 0
    while True:
        if not live:
            bits += 1
            return 1, bits
        half = len(live) / 2

        found = None
        for r1 in one_rects:
            if x not in r1.rows:
                continue
            hits = [r0 for r0 in live if set(r0.rows) & set(r1.rows)]
            if len(hits) <= half:
                found = (r1, hits)
                break
        bits += 1  # Alice's found/failed flag
        if found:
            bits += name_bits
            live = found[1]
            continue

        found = None
        for r1 in one_rects:
            if y not in r1.cols:
                continue
            hits = [r0 for r0 in live if set(r0.cols) & set(r1.cols)]
            if len(hits) <= half:
                found = (r1, hits)
                break
        bits += 1  # Bob's flag doubles as the 0-answer
        if found:
            bits += name_bits
            live = found[1]
            continue
        return 0, bits


# ---------------------------------------------------------------------------
# reports

def serialize_function(f: CommFunction) -> str:
    lines = ["name: %s" % f.name]
    for key, value in f.params:
        lines.append("%s: %s" % (key, value))
    lines.append("rows: " + ",".join(f.row_labels))
    lines.append("cols: " + ",".join(f.col_labels))
    lines.append("matrix:")
    lines.extend(f.rows)
    return "\n".join(lines) + "\n"


def format_indices(indices) -> str:
    """Sorted indices compressed into ranges: 0,1,2,5 -> 0-2,5."""
    indices = sorted(indices)
    parts = []
    k = 0
    while k < len(indices):
        j = k
        while j + 1 < len(indices) and indices[j + 1] == indices[j] + 1:
            j += 1
        if j > k:
            parts.append("%d-%d" % (indices[k], indices[j]))
        else:
            parts.append(str(indices[k]))
        k = j + 1
    return ",".join(parts)


def serialize_cover(f: CommFunction, count: int, cover: Cover) -> str:
    lines = ["count: %d" % count]
    if cover.color is not None:
        lines.append("color: %d" % cover.color)
    for rect in cover.rectangles:
        color = monochromatic_color(f, rect, vacuous=cover.color)
        lines.append("rect: rows=%s cols=%s color=%s"
                     % (format_indices(rect.rows), format_indices(rect.cols), color))
    return "\n".join(lines) + "\n"


def serialize_tree(node: ProtocolNode, depth: int = 0) -> str:
    pad = "  " * depth
    if not node.children:
        return "%sleaf: rows=%s cols=%s color=%s\n" % (
            pad, format_indices(node.rows), format_indices(node.cols), node.color)
    out = "%ssplit %s: rows=%s cols=%s\n" % (
        pad, node.split, format_indices(node.rows), format_indices(node.cols))
    for child in node.children:
        out += serialize_tree(child, depth + 1)
    return out
