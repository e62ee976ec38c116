"""Complete deterministic finite automata: parsing, running, minimization.

Words are plain strings.  The reserved padding symbol ``_`` stands for the
empty letter and is skipped during evaluation; it may never be declared in
an alphabet.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

EPSILON = "_"


class CcError(Exception):
    """Base class for all domain errors raised by this package."""


class FormatError(CcError):
    """Malformed structured-text input."""


class CapError(CcError):
    """A desk-scale size cap was exceeded."""


@dataclass(frozen=True)
class Dfa:
    """Complete DFA over single-character letters.

    ``moves[k][s]`` is the successor of state ``s`` under letter
    ``alphabet[k]``; the table is total.
    """

    alphabet: tuple[str, ...]
    state_count: int
    initial: int
    accepting: frozenset[int]
    moves: tuple[tuple[int, ...], ...]
    _letter_index: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if self.state_count <= 0:
            raise FormatError("state count must be positive")
        if len(set(self.alphabet)) != len(self.alphabet):
            raise FormatError("alphabet letters must be distinct")
        for a in self.alphabet:
            if len(a) != 1:
                raise FormatError("letter %r is not a single character" % a)
            if a == EPSILON:
                raise FormatError("the padding letter %r is reserved" % EPSILON)
        if not (0 <= self.initial < self.state_count):
            raise FormatError("initial state %d out of range" % self.initial)
        for s in self.accepting:
            if not (0 <= s < self.state_count):
                raise FormatError("accepting state %d out of range" % s)
        if len(self.moves) != len(self.alphabet):
            raise FormatError("non-total transition table: %d letter rows for %d letters"
                              % (len(self.moves), len(self.alphabet)))
        for k, row in enumerate(self.moves):
            if len(row) != self.state_count:
                raise FormatError("non-total transition table for letter %r" % self.alphabet[k])
            for s, t in enumerate(row):
                if not (0 <= t < self.state_count):
                    raise FormatError("transition %r: %d -> %d out of range"
                                      % (self.alphabet[k], s, t))
        object.__setattr__(self, "_letter_index",
                           {a: k for k, a in enumerate(self.alphabet)})

    @classmethod
    def make(cls, alphabet, state_count, initial, accepting, transitions):
        """Build from a ``letter -> successor list`` mapping."""
        alphabet = tuple(alphabet)
        missing = [a for a in alphabet if a not in transitions]
        if missing:
            raise FormatError("non-total transition table: no row for letter %r" % missing[0])
        moves = tuple(tuple(transitions[a]) for a in alphabet)
        return cls(alphabet, state_count, initial, frozenset(accepting), moves)

    def step(self, state: int, letter: str) -> int:
        k = self._letter_index.get(letter)
        if k is None:
            raise CcError("unknown letter %r" % letter)
        return self.moves[k][state]

    def run(self, word: str, start: int | None = None) -> int:
        """State reached from ``start`` (default: initial); ``_`` is skipped."""
        s = self.initial if start is None else start
        for a in word:
            if a == EPSILON:
                continue
            s = self.step(s, a)
        return s

    def word_action(self, word: str) -> tuple[int, ...]:
        """The state map induced by ``word``, as a tuple indexed by state."""
        return tuple(self.run(word, start=s) for s in range(self.state_count))


def accepts(d: Dfa, word: str) -> bool:
    return d.run(word) in d.accepting


def parse_dfa(text: str) -> Dfa:
    """Parse the structured DFA format (see ``serialize_dfa``)."""
    fields = {}
    trans_lines = []
    in_transitions = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if in_transitions:
            trans_lines.append((lineno, line))
            continue
        if ":" not in line:
            raise FormatError("line %d: expected 'key: value'" % lineno)
        key, _, value = line.partition(":")
        key = key.strip()
        if key == "transitions":
            in_transitions = True
            continue
        fields[key] = (lineno, value.strip())

    def need(key):
        if key not in fields:
            raise FormatError("missing field %r" % key)
        return fields[key]

    def ints(lineno, value, what):
        if not value:
            return []
        try:
            return [int(tok) for tok in value.split(",")]
        except ValueError:
            raise FormatError("line %d: %s must be comma-separated integers" % (lineno, what))

    lineno, value = need("alphabet")
    alphabet = [tok for tok in value.split(",") if tok] if value else []
    lineno, value = need("states")
    try:
        state_count = int(value)
    except ValueError:
        raise FormatError("line %d: states must be an integer" % lineno)
    lineno, value = need("initial")
    try:
        initial = int(value)
    except ValueError:
        raise FormatError("line %d: initial must be an integer" % lineno)
    lineno, value = need("accepting")
    accepting = ints(lineno, value, "accepting")

    transitions = {}
    for lineno, line in trans_lines:
        if ":" not in line:
            raise FormatError("line %d: expected 'letter: successors'" % lineno)
        letter, _, value = line.partition(":")
        letter = letter.strip()
        if letter not in alphabet:
            raise FormatError("line %d: letter %r not in alphabet" % (lineno, letter))
        if letter in transitions:
            raise FormatError("line %d: duplicate transition row for %r" % (lineno, letter))
        transitions[letter] = ints(lineno, value.strip(), "transitions")
    return Dfa.make(alphabet, state_count, initial, accepting, transitions)


def serialize_dfa(d: Dfa) -> str:
    """Canonical text form: fixed key order, comma-separated lists."""
    lines = [
        "alphabet: " + ",".join(d.alphabet),
        "states: %d" % d.state_count,
        "initial: %d" % d.initial,
        "accepting: " + ",".join(str(s) for s in sorted(d.accepting)),
        "transitions:",
    ]
    for k, a in enumerate(d.alphabet):
        lines.append("%s: %s" % (a, ",".join(str(t) for t in d.moves[k])))
    return "\n".join(line.rstrip() for line in lines) + "\n"


def _reachable(d: Dfa) -> list[int]:
    seen = {d.initial}
    order = [d.initial]
    queue = deque([d.initial])
    while queue:
        s = queue.popleft()
        for k in range(len(d.alphabet)):
            t = d.moves[k][s]
            if t not in seen:
                seen.add(t)
                order.append(t)
                queue.append(t)
    return order


def minimize(d: Dfa) -> Dfa:
    """Minimal equivalent DFA via Moore partition refinement.

    States of the result are numbered by BFS from the initial state in
    alphabet order, so the output is canonical for the language.
    """
    reach = _reachable(d)
    # block id per reachable state, seeded by acceptance
    block = {s: (1 if s in d.accepting else 0) for s in reach}
    while True:
        signature = {}
        for s in reach:
            signature[s] = (block[s],) + tuple(block[d.moves[k][s]]
                                               for k in range(len(d.alphabet)))
        relabel = {}
        for s in reach:
            relabel.setdefault(signature[s], len(relabel))
        new_block = {s: relabel[signature[s]] for s in reach}
        if len(set(new_block.values())) == len(set(block.values())):
            block = new_block
            break
        block = new_block

    # canonical renumbering: BFS over blocks from the initial block
    rep = {}
    for s in reach:
        rep.setdefault(block[s], s)
    number = {block[d.initial]: 0}
    order = [block[d.initial]]
    queue = deque(order)
    while queue:
        b = queue.popleft()
        s = rep[b]
        for k in range(len(d.alphabet)):
            nb = block[d.moves[k][s]]
            if nb not in number:
                number[nb] = len(number)
                order.append(nb)
                queue.append(nb)

    n = len(number)
    moves = []
    for k in range(len(d.alphabet)):
        row = [0] * n
        for b, i in number.items():
            row[i] = number[block[d.moves[k][rep[b]]]]
        moves.append(tuple(row))
    accepting = frozenset(number[block[s]] for s in reach if s in d.accepting)
    return Dfa(d.alphabet, n, 0, accepting, tuple(moves))


def isomorphic(d1: Dfa, d2: Dfa) -> bool:
    """True iff the two DFAs are identical up to the canonical renumbering."""
    return serialize_dfa(minimize(d1)) == serialize_dfa(minimize(d2))


_BUILTIN_LANGUAGES = {}


def _register(name):
    def wrap(fn):
        _BUILTIN_LANGUAGES[name] = fn
        return fn
    return wrap


@_register("BA2_LANG")
def _ba2_lang() -> Dfa:
    # (ab)*
    return Dfa.make("ab", 3, 0, {0}, {"a": [1, 2, 2], "b": [2, 0, 2]})


@_register("U_MINUS_LANG")
def _u_minus_lang() -> Dfa:
    # (a|b)*aa(a|b)*
    return Dfa.make("ab", 3, 0, {2}, {"a": [1, 2, 2], "b": [0, 0, 2]})


@_register("U_PLUS_LANG")
def _u_plus_lang() -> Dfa:
    # complement of (a|b)*aa(a|b)*
    return Dfa.make("ab", 3, 0, {0, 1}, {"a": [1, 2, 2], "b": [0, 0, 2]})


@_register("Z3_LANG")
def _z3_lang() -> Dfa:
    # (aaa)*
    return Dfa.make("a", 3, 0, {0}, {"a": [1, 2, 0]})


@_register("L5")
def _l5() -> Dfa:
    # five-state language with accepting sink 5 (states here 0-indexed)
    return Dfa.make("ab", 5, 0, {4},
                    {"a": [1, 4, 3, 2, 4], "b": [1, 2, 4, 0, 4]})


def builtin_language(name: str) -> Dfa:
    try:
        builder = _BUILTIN_LANGUAGES[name]
    except KeyError:
        raise CcError("unknown built-in language %r" % name)
    return builder()


def builtin_language_names() -> list[str]:
    return sorted(_BUILTIN_LANGUAGES)
