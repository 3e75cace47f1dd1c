"""Explicit witness factors for the balance and Abelian complexity bounds.

Every constructed word is looked up in a prefix of u^(p) before it is
reported; a word not found within the search bound is reported as
unresolved, never as a non-factor.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import FormulaInvalid, MembershipUnresolved, NotFound
from .parikh import BALANCE_BOUNDS, ParikhVector, ScanPolicy, fixed_point_counts, parikh, spectrum
from .words import Letter, Substitution, encode, prefix, prefix_codes, strip_prefix_power, strip_suffix_power

VALIDATED = "validated"
FORMULA_INVALID = "formula_invalid"
MEMBERSHIP_UNRESOLVED = "membership_unresolved"


def search_bound(p: int, length: int, factor: int | None = None) -> int:
    k = 16 * (p + 1) if factor is None else factor
    return max(k * length, length)


def locate(p: int, word: str, factor: int | None = None, max_len: int | None = None) -> int:
    """Offset of the first occurrence of word in u^(p).

    Only the prefix of length ``factor * len(word)`` is searched.
    """
    bound = search_bound(p, len(word), factor)
    if max_len is not None:
        bound = min(bound, max_len)
    hay = prefix_codes(p, bound, max_len=max_len).tobytes()
    i = hay.find(encode(word).tobytes())
    if i < 0:
        raise MembershipUnresolved(f"{len(word)}-letter word not found in prefix of length {bound}", word, bound)
    return i


@dataclass(frozen=True)
class WitnessPair:
    p: int
    letter: Letter
    v: str
    w: str
    difference: int
    v_offset: int | None = None
    w_offset: int | None = None
    status: str = VALIDATED
    stated_length: int | None = None

    @property
    def length(self) -> int:
        return len(self.v)

    def to_json(self, words: bool = True) -> dict:
        doc = {
            "p": self.p,
            "letter": str(self.letter),
            "length": self.length,
            "difference": self.difference,
            "v_offset": self.v_offset,
            "w_offset": self.w_offset,
            "status": self.status,
        }
        if self.stated_length is not None:
            doc["stated_length"] = self.stated_length
        if words:
            doc["v"], doc["w"] = self.v, self.w
        return doc


def stated_length(p: int, letter) -> int:
    """Common length the optimality pairs are claimed to have."""
    return {"M": p * p + p + 1, "S": 2 * p * p + 2 * p + 1, "L": 5 * p * p + 6 * p + 5}[str(letter)]


def formula_words(p: int, letter) -> tuple[str, str]:
    """The unvalidated pair (v, w) built from the optimality formulas."""
    sub = Substitution(p)
    phi = sub.apply
    tail = "L" * (p - 2) + "SM"
    letter = str(letter)
    if letter == "M":
        v = "M" + phi("SM", 2)
        w = strip_suffix_power(phi("SL", 2), tail, 1)
    elif letter == "S":
        v = strip_suffix_power(strip_prefix_power(phi("LL", 2), "L", p), "M", 1)
        w = phi("ML", 2) + "L" * p
    elif letter == "L":
        v = strip_suffix_power(phi("M" + "L" * (p - 1), 3) + phi("LL", 2), tail, 1)
        w = "SM" + phi("SM", 2) + phi("SM", 4)
    else:
        raise ValueError(f"unknown letter {letter!r}")
    return v, w


def balance_witness_pair(p: int, letter, factor: int | None = None, max_len: int | None = None) -> WitnessPair:
    """Build and validate the optimality pair for one letter.

    Raises FormulaInvalid when the words differ in length or do not reach
    the bound, MembershipUnresolved when a word is not found in u^(p).
    """
    letter = Letter(str(letter))
    v, w = formula_words(p, letter)
    target = BALANCE_BOUNDS[letter.value]
    if len(v) != len(w):
        raise FormulaInvalid(f"p={p} {letter.value}-pair: lengths {len(v)} and {len(w)} differ", v, w)
    diff = abs(parikh(v).of(letter) - parikh(w).of(letter))
    if diff != target:
        raise FormulaInvalid(f"p={p} {letter.value}-pair: difference {diff}, expected {target}", v, w)
    return WitnessPair(
        p, letter, v, w, diff,
        v_offset=locate(p, v, factor, max_len),
        w_offset=locate(p, w, factor, max_len),
        stated_length=stated_length(p, letter),
    )


def search_witness_pair(p: int, letter, target_diff: int, max_n: int, policy: ScanPolicy | None = None) -> WitnessPair:
    """First window length n <= max_n at which two windows differ by target_diff.

    Window counts change by at most one per shift, so every value between
    the minimum and maximum is realized and a pair at exactly the target
    exists as soon as the spread reaches it.
    """
    if target_diff < 1:
        raise ValueError("target_diff must be >= 1")
    letter = Letter(str(letter))
    for n in range(1, max_n + 1):
        spec = spectrum(p, n, policy)
        if spec.spread(letter) < target_diff:
            continue
        counts = fixed_point_counts(p, spec.scanned_prefix_len)
        s, m = counts.windows(n, 0, spec.scanned_prefix_len - n + 1)
        c = {"L": n - s - m, "S": s, "M": m}[letter.value]
        i = int(np.argmax(c))
        j = int(np.flatnonzero(c == c[i] - target_diff)[0])
        u = prefix(p, max(i, j) + n)
        return WitnessPair(p, letter, u[i:i + n], u[j:j + n], target_diff, i, j)
    raise NotFound(f"p={p}: no two windows of length <= {max_n} differ by {target_diff} in {letter.value}")


# ---------------------------------------------------------------------------
# seven factors with distinct Parikh vectors


@dataclass(frozen=True)
class AC7Family:
    p: int
    N: int
    n_N: int
    members: tuple[str, ...]
    parikh_vectors: tuple[ParikhVector, ...]
    offsets: tuple[int, ...] = field(default=())

    def to_json(self, words: bool = False) -> dict:
        doc = {
            "p": self.p,
            "N": self.N,
            "length": self.n_N,
            "vectors": [list(v) for v in self.parikh_vectors],
            "offsets": list(self.offsets),
            "status": VALIDATED,
        }
        if words:
            doc["words"] = list(self.members)
        return doc


def auxiliary_words(p: int, N: int, max_len: int | None = None) -> tuple[str, str]:
    """The pair v^(N), w^(N) with equal Parikh vectors."""
    sub = Substitution(p)
    a = sub.iterate(2 * N + 2, max_len=max_len)
    b = sub.iterate(2 * N + 1, max_len=max_len)
    c = sub.iterate(2 * N, max_len=max_len)
    v = a + b
    w = strip_prefix_power(sub.apply("LS", 2 * N + 2, max_len=max_len), b, 1) + b + c
    return v, w


def ac7_family(p: int, N: int, factor: int | None = None, max_len: int | None = None) -> AC7Family:
    if N < 1:
        raise ValueError("N must be >= 1")
    sub = Substitution(p)
    v, w = auxiliary_words(p, N, max_len)
    tail_v = "SM" + "L" * (p - 1) + "S"
    tail_w = "L" * p + "SM"

    def require(ok, what):
        if not ok:
            raise FormulaInvalid(f"p={p} N={N}: {what}", v, w)

    require(sub.iterate(2 * N, max_len=max_len).endswith(tail_w), "phi^2N(L) does not end with L^p S M")
    require(sub.iterate(2 * N + 1, max_len=max_len).endswith(tail_v), "phi^(2N+1)(L) does not end with S M L^(p-1) S")
    require(v.endswith(tail_v), "v does not end with S M L^(p-1) S")
    require(w.endswith(tail_w), "w does not end with L^p S M")
    require(parikh(v) == parikh(w), f"Parikh vectors differ: {parikh(v)} vs {parikh(w)}")

    members = (
        strip_suffix_power(tail_w + v, tail_v, 1),
        strip_suffix_power("M" + v, "S", 1),
        strip_suffix_power("LS" + w, "SM", 1),
        v,
        strip_suffix_power("SM" + v, "LS", 1),
        strip_suffix_power("S" + w, "M", 1),
        strip_suffix_power(tail_v + w, tail_w, 1),
    )
    require(len({len(f) for f in members}) == 1 and len(v) == len(w), "members differ in length")
    vectors = tuple(parikh(f) for f in members)
    require(len(set(vectors)) == 7, "Parikh vectors are not pairwise distinct")
    offsets = tuple(locate(p, f, factor, max_len) for f in members)
    return AC7Family(p, N, len(v), members, vectors, offsets)


def ac7_length(p: int, N: int) -> int:
    sub = Substitution(p)
    return sub.iterate_length(2 * N + 2) + sub.iterate_length(2 * N + 1)


def ac_lower_bound_triple(p: int, n: int) -> tuple[str, str, str]:
    """The prefix of length n and two same-length words with other Parikh vectors."""
    if n < 1:
        raise ValueError("n must be >= 1")
    u = prefix(p, n)
    last = u[-1]
    if last == "L":
        return u, "S" + u[:-1], "M" + u[:-1]
    if last == "S":
        return u, "M" + u[:-1], "SM" + u[:-2]
    return u, "S" + u[:-1], "LS" + u[:-2]
