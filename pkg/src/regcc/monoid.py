"""Finite ordered monoids.

Monoids are stored as explicit multiplication tables with canonical element
names (shortest generator words, lexicographic tie-break).  The syntactic
ordered monoid of a regular language is computed from the minimal automaton:
its elements are the state maps of words, its order is context implication
of membership, and its accepting set is an order ideal.
"""

from __future__ import annotations

import itertools
import math
from collections import deque
from dataclasses import dataclass

from .automata import EPSILON, CapError, CcError, Dfa, minimize

MONOID_CAP = 5000
DIVIDES_CAP = 12


@dataclass(frozen=True)
class FiniteMonoid:
    """Multiplication table plus canonical names and generator letters."""

    size: int
    identity: int
    table: tuple[tuple[int, ...], ...]
    names: tuple[str, ...]
    generators: tuple[tuple[str, int], ...] = ()

    def mul(self, x: int, y: int) -> int:
        return self.table[x][y]

    def product(self, elements) -> int:
        p = self.identity
        for x in elements:
            p = self.table[p][x]
        return p

    def power(self, x: int, k: int) -> int:
        p = self.identity
        for _ in range(k):
            p = self.table[p][x]
        return p

    @property
    def generator_map(self) -> dict[str, int]:
        return dict(self.generators)

    def idempotents(self) -> list[int]:
        return [x for x in range(self.size) if self.table[x][x] == x]

    def name_of(self, x: int) -> str:
        return self.names[x] or EPSILON

    def validate(self):
        n = self.size
        if not (0 <= self.identity < n):
            raise CcError("identity out of range")
        for x in range(n):
            if self.table[self.identity][x] != x or self.table[x][self.identity] != x:
                raise CcError("identity law fails at element %d" % x)
        for x in range(n):
            for y in range(n):
                xy = self.table[x][y]
                for z in range(n):
                    if self.table[xy][z] != self.table[x][self.table[y][z]]:
                        raise CcError("associativity fails at (%d,%d,%d)" % (x, y, z))


@dataclass(frozen=True)
class StableOrder:
    """Boolean matrix of a stable partial order: leq[x][y] iff x <= y."""

    leq: tuple[tuple[bool, ...], ...]

    def holds(self, x: int, y: int) -> bool:
        return self.leq[x][y]

    @classmethod
    def equality(cls, size: int) -> "StableOrder":
        return cls(tuple(tuple(i == j for j in range(size)) for i in range(size)))

    def is_equality(self) -> bool:
        return all(not v for i, row in enumerate(self.leq)
                   for j, v in enumerate(row) if i != j)

    def validate(self, m: FiniteMonoid):
        n = len(self.leq)
        if n != m.size or any(len(row) != n for row in self.leq):
            raise CcError("order dimensions do not match the monoid")
        for x in range(n):
            if not self.leq[x][x]:
                raise CcError("order not reflexive at %d" % x)
            for y in range(n):
                if x != y and self.leq[x][y] and self.leq[y][x]:
                    raise CcError("order not antisymmetric at (%d,%d)" % (x, y))
                if not self.leq[x][y]:
                    continue
                for z in range(n):
                    if self.leq[y][z] and not self.leq[x][z]:
                        raise CcError("order not transitive at (%d,%d,%d)" % (x, y, z))
                    if not self.leq[m.mul(z, x)][m.mul(z, y)]:
                        raise CcError("order not left-stable at (%d,%d) by %d" % (x, y, z))
                    if not self.leq[m.mul(x, z)][m.mul(y, z)]:
                        raise CcError("order not right-stable at (%d,%d) by %d" % (x, y, z))


@dataclass(frozen=True)
class OrderedMonoid:
    monoid: FiniteMonoid
    order: StableOrder

    @property
    def size(self) -> int:
        return self.monoid.size

    def leq(self, x: int, y: int) -> bool:
        return self.order.leq[x][y]

    @classmethod
    def with_equality(cls, m: FiniteMonoid) -> "OrderedMonoid":
        return cls(m, StableOrder.equality(m.size))


@dataclass(frozen=True)
class OrderIdeal:
    """Downward-closed element set with a canonical generating set."""

    members: frozenset[int]
    generating: tuple[int, ...]


@dataclass(frozen=True)
class MonoidMorphism:
    """Element map between monoid tables; ``mapping[x]`` is the image of x."""

    source: FiniteMonoid
    target: FiniteMonoid
    mapping: tuple[int, ...]

    def __call__(self, x: int) -> int:
        return self.mapping[x]

    def validate(self):
        if self.mapping[self.source.identity] != self.target.identity:
            raise CcError("morphism does not preserve the identity")
        for x in range(self.source.size):
            for y in range(self.source.size):
                if self.mapping[self.source.mul(x, y)] != \
                        self.target.mul(self.mapping[x], self.mapping[y]):
                    raise CcError("morphism does not preserve products at (%d,%d)" % (x, y))


def _closure_from_actions(actions: dict[str, tuple[int, ...]], n_states: int, cap: int):
    """BFS closure of state maps under right multiplication by generators.

    Returns (transforms, names, generator element indices).  Discovery order
    is by word length then letter order, so names are canonical shortest
    words.
    """
    identity = tuple(range(n_states))
    index = {identity: 0}
    transforms = [identity]
    names = [""]
    letters = sorted(actions)
    queue = deque([0])
    while queue:
        i = queue.popleft()
        t = transforms[i]
        for a in letters:
            action = actions[a]
            nt = tuple(action[s] for s in t)
            if nt not in index:
                if len(transforms) >= cap:
                    raise CapError("transition monoid exceeds the cap of %d elements" % cap)
                index[nt] = len(transforms)
                transforms.append(nt)
                names.append(names[i] + a)
                queue.append(index[nt])
    gens = {a: index[tuple(actions[a])] for a in letters}
    return transforms, names, gens


def _monoid_from_transforms(transforms, names, gens) -> FiniteMonoid:
    index = {t: i for i, t in enumerate(transforms)}
    table = tuple(
        tuple(index[tuple(u[s] for s in t)] for u in transforms)
        for t in transforms
    )
    return FiniteMonoid(len(transforms), 0, table, tuple(names),
                        tuple(sorted(gens.items())))


def transition_monoid(d: Dfa, cap: int = MONOID_CAP):
    """Transformation monoid of the automaton and the letter morphism."""
    actions = {a: tuple(d.moves[k]) for k, a in enumerate(d.alphabet)}
    transforms, names, gens = _closure_from_actions(actions, d.state_count, cap)
    return _monoid_from_transforms(transforms, names, gens), gens


def syntactic_ordered_monoid(d: Dfa, cap: int = MONOID_CAP):
    """Syntactic ordered monoid of the language of ``d``.

    Minimizes first, takes the transition monoid, and orders it by context
    implication: x <= y iff every context (p, q) with p*y*q accepting also
    has p*x*q accepting.  Contexts range over monoid elements, which is
    sound because membership factors through the evaluation morphism.
    Returns (ordered monoid, letter morphism, accepting order ideal).
    """
    dmin = minimize(d)
    actions = {a: tuple(dmin.moves[k]) for k, a in enumerate(dmin.alphabet)}
    transforms, names, gens = _closure_from_actions(actions, dmin.state_count, cap)
    m = _monoid_from_transforms(transforms, names, gens)
    n = m.size
    accepting = [transforms[i][dmin.initial] in dmin.accepting for i in range(n)]

    # context set of x as a bitmask over (p, q) pairs
    context = [0] * n
    for x in range(n):
        mask = 0
        for p in range(n):
            pxq_row = m.table[m.table[p][x]]
            base = p * n
            for q in range(n):
                if accepting[pxq_row[q]]:
                    mask |= 1 << (base + q)
        context[x] = mask
    leq = tuple(
        tuple(context[y] & ~context[x] == 0 for y in range(n))
        for x in range(n)
    )
    order = StableOrder(leq)
    members = frozenset(i for i in range(n) if accepting[i])
    ideal = OrderIdeal(members, _maximal_elements(order, members))
    return OrderedMonoid(m, order), gens, ideal


def _maximal_elements(order: StableOrder, members) -> tuple[int, ...]:
    out = []
    for x in sorted(members):
        if not any(y != x and order.leq[x][y] for y in members):
            out.append(x)
    return tuple(out)


def ideal_generated(om: OrderedMonoid, gens) -> OrderIdeal:
    gens = tuple(gens)
    for g in gens:
        if not (0 <= g < om.size):
            raise CcError("ideal generator %d out of range" % g)
    members = frozenset(x for x in range(om.size)
                        if any(om.leq(x, g) for g in gens))
    return OrderIdeal(members, _maximal_elements(om.order, members))


def is_order_ideal(om: OrderedMonoid, members) -> bool:
    members = set(members)
    return all(x in members
               for y in members for x in range(om.size) if om.leq(x, y))


# ---------------------------------------------------------------------------
# words and omega-terms

def eval_word(m, word: str, assignment: dict[str, int] | None = None) -> int:
    """Evaluate a word over generator letters; ``_`` is skipped.

    ``m`` may be a FiniteMonoid or an OrderedMonoid.  With ``assignment``
    the letters are treated as variables mapped to elements.
    """
    mono = m.monoid if isinstance(m, OrderedMonoid) else m
    lookup = assignment if assignment is not None else mono.generator_map
    p = mono.identity
    for a in word:
        if a == EPSILON:
            continue
        if a not in lookup:
            raise CcError("unknown generator letter %r" % a)
        p = mono.table[p][lookup[a]]
    return p


def _parse_term(text: str):
    """Parse a term into a list of (atom, omega, offset) factors.

    Grammar: a term is a sequence of factors; a factor is a letter or a
    parenthesized term, optionally followed by ^k, ^w or ^(w+k).  The
    exponent value is ``omega*w + offset`` where omega is 0 or 1.
    ``1`` and ``_`` denote the identity.
    """
    pos = 0
    text = text.replace(" ", "")

    def parse_seq(stop=None):
        nonlocal pos
        factors = []
        while pos < len(text) and text[pos] != stop:
            c = text[pos]
            if c == "(":
                pos += 1
                inner = parse_seq(stop=")")
                if pos >= len(text) or text[pos] != ")":
                    raise CcError("unbalanced parentheses in term %r" % text)
                pos += 1
                atom = inner
            elif c.isalnum() or c == EPSILON:
                pos += 1
                atom = c
            else:
                raise CcError("unexpected character %r in term %r" % (c, text))
            omega, offset = 0, 1
            if pos < len(text) and text[pos] == "^":
                pos += 1
                omega, offset = parse_exponent()
            factors.append((atom, omega, offset))
        return factors

    def parse_exponent():
        nonlocal pos
        if pos < len(text) and text[pos] == "(":
            pos += 1
            omega, offset = parse_exponent_body(stop=")")
            if pos >= len(text) or text[pos] != ")":
                raise CcError("unbalanced parentheses in exponent of %r" % text)
            pos += 1
            return omega, offset
        return parse_exponent_body()

    def parse_exponent_body(stop=None):
        nonlocal pos
        omega, offset = 0, 0
        if pos < len(text) and text[pos] == "w":
            omega = 1
            pos += 1
            if pos < len(text) and text[pos] == "+":
                pos += 1
        digits = ""
        while pos < len(text) and text[pos].isdigit():
            digits += text[pos]
            pos += 1
        if digits:
            offset = int(digits)
        elif not omega:
            raise CcError("empty exponent in term %r" % text)
        return omega, offset

    factors = parse_seq()
    if pos != len(text):
        raise CcError("trailing input in term %r" % text)
    return factors


def term_variables(text: str) -> list[str]:
    out = []

    def walk(factors):
        for atom, _, _ in factors:
            if isinstance(atom, list):
                walk(atom)
            elif atom not in ("1", EPSILON) and atom not in out:
                out.append(atom)

    walk(_parse_term(text))
    return sorted(out)


def eval_term(m, text: str, assignment: dict[str, int] | None = None) -> int:
    """Evaluate a term with optional omega exponents.

    ``x^w`` is x raised to the exponent of the monoid, the least power at
    which every element becomes idempotent.
    """
    mono = m.monoid if isinstance(m, OrderedMonoid) else m
    lookup = assignment if assignment is not None else mono.generator_map
    omega_value = exponent(mono)

    def eval_factors(factors):
        p = mono.identity
        for atom, omega, offset in factors:
            if isinstance(atom, list):
                base = eval_factors(atom)
            elif atom in ("1", EPSILON):
                base = mono.identity
            else:
                if atom not in lookup:
                    raise CcError("unknown letter %r in term" % atom)
                base = lookup[atom]
            k = omega * omega_value + offset
            p = mono.table[p][mono.power(base, k)]
        return p

    return eval_factors(_parse_term(text))


def exponent(m: FiniteMonoid) -> int:
    """Least k such that x**k is idempotent for every x.

    Computed as the least multiple of lcm(cycle periods) that is at least
    the maximum cycle entry index.
    """
    mono = m.monoid if isinstance(m, OrderedMonoid) else m
    lcm = 1
    max_index = 1
    for x in range(mono.size):
        seen = {}
        p = x
        k = 1
        while p not in seen:
            seen[p] = k
            p = mono.table[p][x]
            k += 1
        period = k - seen[p]
        index = seen[p]
        lcm = lcm * period // math.gcd(lcm, period)
        max_index = max(max_index, index)
    return lcm * ((max_index + lcm - 1) // lcm)


# ---------------------------------------------------------------------------
# identities and structural predicates

MAX_IDENTITY_VARIABLES = 3


def satisfies_identity(om: OrderedMonoid | FiniteMonoid, lhs: str, rhs: str,
                       mode: str = "equals") -> bool:
    return identity_counterexample(om, lhs, rhs, mode) is None


def identity_counterexample(om, lhs: str, rhs: str, mode: str = "equals"):
    """First variable assignment violating the identity, or None.

    ``mode`` is ``equals`` (u = v) or ``leq`` (u <= v, needs an order).
    """
    if mode not in ("equals", "leq"):
        raise CcError("unknown identity mode %r" % mode)
    if mode == "leq" and not isinstance(om, OrderedMonoid):
        raise CcError("ordered identity requires an ordered monoid")
    mono = om.monoid if isinstance(om, OrderedMonoid) else om
    variables = sorted(set(term_variables(lhs)) | set(term_variables(rhs)))
    if len(variables) > MAX_IDENTITY_VARIABLES:
        raise CcError("too many variables in identity (%d > %d)"
                      % (len(variables), MAX_IDENTITY_VARIABLES))
    for values in itertools.product(range(mono.size), repeat=len(variables)):
        assignment = dict(zip(variables, values))
        left = eval_term(mono, lhs, assignment)
        right = eval_term(mono, rhs, assignment)
        ok = left == right if mode == "equals" else om.leq(left, right)
        if not ok:
            return assignment
    return None


PROPERTIES = (
    "commutative", "aperiodic", "group", "j_trivial",
    "idempotent", "locally_trivial", "identity_is_maximum",
)


def check_property(om: OrderedMonoid, prop: str):
    """Decide a named structural property; returns (bool, witness or None)."""
    m = om.monoid
    n = m.size
    if prop == "commutative":
        for x in range(n):
            for y in range(x + 1, n):
                if m.mul(x, y) != m.mul(y, x):
                    return False, (x, y)
        return True, None
    if prop == "aperiodic":
        w = exponent(m)
        for x in range(n):
            xw = m.power(x, w)
            if m.mul(xw, x) != xw:
                return False, (x,)
        return True, None
    if prop == "group":
        w = exponent(m)
        for x in range(n):
            if m.power(x, w) != m.identity:
                return False, (x,)
        return True, None
    if prop == "j_trivial":
        ideals = []
        for x in range(n):
            ideals.append(frozenset(m.mul(m.mul(p, x), q)
                                    for p in range(n) for q in range(n)))
        for x in range(n):
            for y in range(x + 1, n):
                if ideals[x] == ideals[y]:
                    return False, (x, y)
        return True, None
    if prop == "idempotent":
        for x in range(n):
            if m.mul(x, x) != x:
                return False, (x,)
        return True, None
    if prop == "locally_trivial":
        for e in m.idempotents():
            for y in range(n):
                if m.mul(m.mul(e, y), e) != e:
                    return False, (e, y)
        return True, None
    if prop == "identity_is_maximum":
        for x in range(n):
            if not om.leq(x, m.identity):
                return False, (x,)
        return True, None
    raise CcError("unknown property %r" % prop)


# ---------------------------------------------------------------------------
# quotients, subgroups, division

class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        p = self.parent
        while p[x] != x:
            x, p[x] = p[x], p[p[x]]
        return x

    def union(self, x, y):
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return False
        if ry < rx:
            rx, ry = ry, rx
        self.parent[ry] = rx
        return True


def commutative_quotient(m: FiniteMonoid):
    """Maximal commutative quotient: factor by the least congruence with xy = yx.

    Returns (quotient, projection morphism).  The congruence is closed
    under left and right translation via a union-find worklist.
    """
    mono = m.monoid if isinstance(m, OrderedMonoid) else m
    n = mono.size
    uf = _UnionFind(n)
    pending = deque()
    for x in range(n):
        for y in range(x + 1, n):
            pending.append((mono.mul(x, y), mono.mul(y, x)))
    while pending:
        a, b = pending.popleft()
        if not uf.union(a, b):
            continue
        for z in range(n):
            pending.append((mono.mul(z, a), mono.mul(z, b)))
            pending.append((mono.mul(a, z), mono.mul(b, z)))
    roots = sorted({uf.find(x) for x in range(n)})
    cls = {r: i for i, r in enumerate(roots)}
    proj = tuple(cls[uf.find(x)] for x in range(n))
    k = len(roots)
    table = tuple(
        tuple(proj[mono.mul(roots[i], roots[j])] for j in range(k))
        for i in range(k)
    )
    gens = tuple((a, proj[g]) for a, g in mono.generators)
    quotient = FiniteMonoid(k, proj[mono.identity], table,
                            _canonical_names(table, proj[mono.identity], gens, k), gens)
    return quotient, MonoidMorphism(mono, quotient, proj)


def _canonical_names(table, identity, gens, size) -> tuple[str, ...]:
    """Shortest generator words per element, BFS in letter order."""
    names = [None] * size
    names[identity] = ""
    queue = deque([identity])
    letters = sorted(dict(gens).items())
    while queue:
        x = queue.popleft()
        for a, g in letters:
            y = table[x][g]
            if names[y] is None:
                names[y] = names[x] + a
                queue.append(y)
    return tuple(name if name is not None else "#%d" % i
                 for i, name in enumerate(names))


def maximal_subgroups(m: FiniteMonoid):
    """For each idempotent e, the group of units of the local monoid eMe."""
    mono = m.monoid if isinstance(m, OrderedMonoid) else m
    n = mono.size
    out = []
    for e in mono.idempotents():
        local = sorted({mono.mul(mono.mul(e, x), e) for x in range(n)})
        units = set()
        for g in local:
            for h in local:
                if mono.mul(g, h) == e and mono.mul(h, g) == e:
                    units.add(g)
                    break
        out.append((e, frozenset(units)))
    return out


def nonabelian_subgroup_witness(m: FiniteMonoid):
    """(e, g1, g2) with g1, g2 in a maximal subgroup at e and g1*g2 != g2*g1."""
    mono = m.monoid if isinstance(m, OrderedMonoid) else m
    for e, group in maximal_subgroups(mono):
        for g1 in sorted(group):
            for g2 in sorted(group):
                if mono.mul(g1, g2) != mono.mul(g2, g1):
                    return e, g1, g2
    return None


def _submonoids_with_generators(m: FiniteMonoid):
    """Distinct submonoids of m, each with the smallest generator subset found."""
    n = m.size
    seen = {}
    elements = [x for x in range(n) if x != m.identity]
    for size in range(len(elements) + 1):
        for combo in itertools.combinations(elements, size):
            closure = {m.identity}
            queue = deque(combo)
            closure.update(combo)
            while queue:
                x = queue.popleft()
                for y in tuple(closure):
                    for z in (m.mul(x, y), m.mul(y, x)):
                        if z not in closure:
                            closure.add(z)
                            queue.append(z)
            key = frozenset(closure)
            if key not in seen:
                seen[key] = combo
    return seen


def divides(n_om: OrderedMonoid, m_om: OrderedMonoid, cap: int = DIVIDES_CAP):
    """Exhaustive ordered-monoid division test: does n divide m?

    True iff some submonoid of m maps onto n by a surjective morphism of
    ordered monoids.  Returns (bool, certificate) where the certificate is
    (generator subset, element map over the submonoid, submonoid elements).
    Raises CapError above the cap;
    callers needing divisor tests on larger monoids must use the specialized
    predicates (e.g. the maximal-subgroup scan for group divisors).
    """
    n_m, m_m = n_om.monoid, m_om.monoid
    if m_m.size > cap:
        raise CapError("division search capped at |M| <= %d (got %d)" % (cap, m_m.size))
    for closure, gens in sorted(_submonoids_with_generators(m_m).items(),
                                key=lambda kv: (len(kv[0]), sorted(kv[0]))):
        if len(closure) < n_m.size:
            continue
        mapping = _surjection_search(sorted(closure), gens, n_om, m_om)
        if mapping is not None:
            return True, (gens, mapping, frozenset(closure))
    return False, None


def _surjection_search(sub, gens, n_om: OrderedMonoid, m_om: OrderedMonoid):
    """Backtracking search for a surjective order-preserving morphism sub -> n."""
    n_m, m_m = n_om.monoid, m_om.monoid

    def extend(img):
        # close img under products; return closed dict or None on conflict
        img = dict(img)
        changed = True
        while changed:
            changed = False
            for x in list(img):
                for y in list(img):
                    xy = m_m.mul(x, y)
                    v = n_m.mul(img[x], img[y])
                    if xy in img:
                        if img[xy] != v:
                            return None
                    else:
                        img[xy] = v
                        changed = True
        return img

    def ok_order(img):
        for x in img:
            for y in img:
                if m_om.leq(x, y) and not n_om.leq(img[x], img[y]):
                    return False
        return True

    def dfs(i, img):
        if i == len(gens):
            closed = extend(img)
            if closed is None or len(closed) != len(sub):
                return None
            if set(closed.values()) != set(range(n_m.size)):
                return None
            if not ok_order(closed):
                return None
            return closed
        for v in range(n_m.size):
            trial = dict(img)
            trial[gens[i]] = v
            closed = extend(trial)
            if closed is None:
                continue
            result = dfs(i + 1, closed)
            if result is not None:
                return result
        return None

    return dfs(0, {m_m.identity: n_m.identity})


def find_tq(m: FiniteMonoid):
    """First idempotent pair (e, f) whose orbit (ef)^i e returns to e with
    exact period q > 1; returns (q, e, f) or None."""
    mono = m.monoid if isinstance(m, OrderedMonoid) else m
    idems = mono.idempotents()
    for e in idems:
        for f in idems:
            ef = mono.mul(e, f)
            x = e
            seen = {e}
            for q in range(1, mono.size + 2):
                x = mono.mul(ef, x)
                if x == e:
                    if q > 1:
                        return q, e, f
                    break
                if x in seen:
                    break
                seen.add(x)
    return None


# ---------------------------------------------------------------------------
# serialization

def serialize_monoid(m, order: StableOrder | None = None,
                     ideal: OrderIdeal | None = None) -> str:
    """Canonical text form: size, identity, table rows, names, generators,
    then optional order grid and ideal."""
    if isinstance(m, OrderedMonoid):
        order = m.order if order is None else order
        m = m.monoid
    lines = [
        "size: %d" % m.size,
        "identity: %d" % m.identity,
        "table:",
    ]
    for row in m.table:
        lines.append(",".join(str(x) for x in row))
    lines.append("names: " + ",".join(m.name_of(x) for x in range(m.size)))
    lines.append("generators: " + ",".join("%s=%d" % (a, g) for a, g in m.generators))
    if order is not None:
        lines.append("order:")
        for row in order.leq:
            lines.append("".join("1" if v else "0" for v in row))
    if ideal is not None:
        lines.append("ideal: " + ",".join(str(x) for x in sorted(ideal.members)))
        lines.append("ideal_generators: " + ",".join(str(x) for x in ideal.generating))
    return "\n".join(lines) + "\n"
