"""Parikh vectors of sliding windows, Abelian complexity and balance spreads."""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple

import numpy as np

from .errors import FrameViolation, NotStabilizedWarning
from .words import Letter, encode, prefix_codes, S_CODE, M_CODE


class ParikhVector(NamedTuple):
    nL: int
    nS: int
    nM: int

    def __add__(self, other):
        return ParikhVector(*(a + b for a, b in zip(self, other)))

    def __sub__(self, other):
        return ParikhVector(*(a - b for a, b in zip(self, other)))

    def of(self, letter) -> int:
        return self["LSM".index(str(letter))]


def parikh(w: str) -> ParikhVector:
    return ParikhVector(w.count("L"), w.count("S"), w.count("M"))


EXCLUDED_DIFFERENCE = ParikhVector(3, -2, -1)
BALANCE_BOUNDS = {"L": 3, "S": 2, "M": 2}


# ---------------------------------------------------------------------------
# window scans


def _cumulative(codes: np.ndarray):
    cs = np.zeros(len(codes) + 1, dtype=np.int64)
    cm = np.zeros(len(codes) + 1, dtype=np.int64)
    np.cumsum(codes == S_CODE, out=cs[1:])
    np.cumsum(codes == M_CODE, out=cm[1:])
    return cs, cm


def _pairs(s: np.ndarray, m: np.ndarray) -> set[tuple[int, int]]:
    """Distinct (s, m) pairs, via bincount when the value ranges are small."""
    if len(s) == 0:
        return set()
    smin, mmin = int(s.min()), int(m.min())
    sr, mr = int(s.max()) - smin + 1, int(m.max()) - mmin + 1
    if sr * mr <= 4096:
        hits = np.flatnonzero(np.bincount((s - smin) * mr + (m - mmin), minlength=sr * mr))
        return {(smin + int(k) // mr, mmin + int(k) % mr) for k in hits}
    return {(int(a), int(b)) for a, b in np.unique(np.stack([s, m], axis=1), axis=0)}


class _Counts:
    """Running S and M counts of a code array; window counts are differences."""

    def __init__(self, codes: np.ndarray):
        self.cs, self.cm = _cumulative(codes)

    def __len__(self):
        return len(self.cs) - 1

    def windows(self, n: int, start: int = 0, stop: int | None = None):
        """S and M counts of the windows starting at start..stop-1."""
        last = len(self) - n + 1
        stop = last if stop is None else min(stop, last)
        start = max(start, 0)
        if stop <= start:
            empty = np.zeros(0, dtype=np.int64)
            return empty, empty
        s = self.cs[start + n:stop + n] - self.cs[start:stop]
        m = self.cm[start + n:stop + n] - self.cm[start:stop]
        return s, m


def _to_vectors(n: int, pairs) -> frozenset[ParikhVector]:
    return frozenset(ParikhVector(n - s - m, s, m) for s, m in pairs)


def window_vectors(word: str | np.ndarray, n: int) -> frozenset[ParikhVector]:
    """Parikh vectors of all length-n windows of an arbitrary finite word."""
    if n < 1:
        raise ValueError("n must be >= 1")
    codes = encode(word) if isinstance(word, str) else np.asarray(word)
    s, m = _Counts(codes).windows(n)
    return _to_vectors(n, _pairs(s, m))


_COUNTS: dict[int, _Counts] = {}


def fixed_point_counts(p: int, m: int, max_len: int | None = None) -> _Counts:
    """Shared running counts over at least the first m letters of u^(p)."""
    c = _COUNTS.get(p)
    if c is None or len(c) < m:
        size = max(m, 2 * len(c) if c is not None else 0)
        if max_len is not None:
            size = max(m, min(size, max_len))
        c = _Counts(prefix_codes(p, size, max_len=max_len))
        _COUNTS[p] = c
    return c


@dataclass(frozen=True)
class ScanPolicy:
    """How much of u^(p) to scan for a window length n.

    With ``prefix_len`` set, exactly that prefix is scanned and the result
    counts as stabilized when its second half adds no new vector. Otherwise
    the scan starts at max(min_prefix, factor * n) letters and doubles until
    a doubling adds nothing, giving up after ``max_doublings``.
    """

    prefix_len: int | None = None
    min_prefix: int = 1000
    factor: int = 50
    max_doublings: int = 6
    max_len: int | None = None

    def initial(self, n: int) -> int:
        return max(self.min_prefix, self.factor * n)


DEFAULT_POLICY = ScanPolicy()


@dataclass(frozen=True)
class WindowSpectrum:
    p: int
    n: int
    vectors: frozenset
    scanned_prefix_len: int
    stabilized: bool

    @property
    def ac(self) -> int:
        return len(self.vectors)

    def letter_counts(self, letter) -> list[int]:
        i = "LSM".index(str(letter))
        return sorted({v[i] for v in self.vectors})

    def spread(self, letter) -> int:
        counts = self.letter_counts(letter)
        return counts[-1] - counts[0] if counts else 0

    def sorted_vectors(self) -> list[ParikhVector]:
        return sorted(self.vectors)

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "n": self.n,
            "stabilized": self.stabilized,
            "prefix_len": self.scanned_prefix_len,
            "vectors": [list(v) for v in self.sorted_vectors()],
        }


def spectrum(p: int, n: int, policy: ScanPolicy | None = None) -> WindowSpectrum:
    """The set of Parikh vectors of length-n factors seen in a prefix of u^(p)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    policy = policy or DEFAULT_POLICY
    if policy.prefix_len is not None:
        m = policy.prefix_len
        if m < n:
            raise ValueError(f"prefix length {m} is shorter than the window {n}")
        counts = fixed_point_counts(p, m, policy.max_len)
        half = m // 2
        first = _pairs(*counts.windows(n, 0, half - n + 1))
        rest = _pairs(*counts.windows(n, max(half - n + 1, 0), m - n + 1))
        stable = half >= n and rest <= first
        return WindowSpectrum(p, n, _to_vectors(n, first | rest), m, stable)

    m = policy.initial(n)
    counts = fixed_point_counts(p, m, policy.max_len)
    seen = _pairs(*counts.windows(n, 0, m - n + 1))
    stable = False
    for _ in range(policy.max_doublings):
        counts = fixed_point_counts(p, 2 * m, policy.max_len)
        new = _pairs(*counts.windows(n, m - n + 1, 2 * m - n + 1))
        m *= 2
        if new <= seen:
            stable = True
            break
        seen |= new
    if not stable:
        warnings.warn(f"p={p} n={n}: vector set still growing at prefix {m}", NotStabilizedWarning)
    return WindowSpectrum(p, n, _to_vectors(n, seen), m, stable)


def spectra(p: int, ns: Iterable[int], policy: ScanPolicy | None = None) -> list[WindowSpectrum]:
    return [spectrum(p, n, policy) for n in ns]


def abelian_complexity(p: int, n: int, policy: ScanPolicy | None = None) -> int:
    return spectrum(p, n, policy).ac


def balance_spread(p: int, letter, n: int, policy: ScanPolicy | None = None) -> int:
    return spectrum(p, n, policy).spread(letter)


@dataclass(frozen=True)
class BalanceProfile:
    p: int
    letter: Letter
    ns: tuple[int, ...]
    spreads: tuple[int, ...]
    cumulative_max: tuple[int, ...] = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "cumulative_max", tuple(itertools.accumulate(self.spreads, max)))

    def first_attaining(self, value: int) -> int | None:
        for n, s in zip(self.ns, self.spreads):
            if s >= value:
                return n
        return None


def balance_profile(p: int, letter, ns=None, spectra_=None, policy=None) -> BalanceProfile:
    """Spreads for one letter; pass precomputed spectra to avoid rescanning."""
    if spectra_ is None:
        spectra_ = spectra(p, ns, policy)
    letter = Letter(str(letter))
    return BalanceProfile(p, letter, tuple(s.n for s in spectra_), tuple(s.spread(letter) for s in spectra_))


# ---------------------------------------------------------------------------
# nine-candidate frame

# (S offset, M offset) of the nine candidates, in order
FRAME_OFFSETS = tuple((ds, dm) for ds in (-1, 0, 1) for dm in (-1, 0, 1))


@dataclass(frozen=True)
class CandidateFrame:
    n: int
    s_n: int
    m_n: int
    candidates: tuple[ParikhVector, ...]

    @classmethod
    def centered(cls, n: int, s_n: int, m_n: int) -> "CandidateFrame":
        cands = tuple(
            ParikhVector(n - (s_n + ds) - (m_n + dm), s_n + ds, m_n + dm) for ds, dm in FRAME_OFFSETS
        )
        return cls(n, s_n, m_n, cands)

    def index(self, v) -> int | None:
        """1-based candidate number of v, or None when v is outside the frame."""
        try:
            return self.candidates.index(tuple(v)) + 1
        except ValueError:
            return None

    def realized(self, vectors) -> list[int]:
        return sorted(i for i in (self.index(v) for v in vectors) if i is not None)


def candidate_frame(spec: WindowSpectrum) -> CandidateFrame:
    if not spec.vectors:
        raise ValueError("empty spectrum")
    # upper midpoint of the realized counts: min+1 for spreads 1 and 2, the
    # count itself for spread 0
    s = [v.nS for v in spec.vectors]
    m = [v.nM for v in spec.vectors]
    s_n = (min(s) + max(s) + 1) // 2
    m_n = (min(m) + max(m) + 1) // 2
    frame = CandidateFrame.centered(spec.n, s_n, m_n)
    outside = [v for v in spec.vectors if frame.index(v) is None]
    if outside:
        raise FrameViolation(f"p={spec.p} n={spec.n}: {sorted(outside)} outside the nine candidates", outside)
    return frame


def excluded_difference_check(vectors) -> bool:
    """True iff no ordered pair of vectors differs by exactly (3, -2, -1)."""
    if isinstance(vectors, WindowSpectrum):
        vectors = vectors.vectors
    vs = {tuple(v) for v in vectors}
    return not any(tuple(a + b for a, b in zip(w, EXCLUDED_DIFFERENCE)) in vs for w in vs)
