"""Words over {L, S, M}, the substitution phi_p and its fixed point.

Words are plain ``str`` objects. Long prefixes of the fixed point are also
available as ``numpy.uint8`` code arrays (L=0, S=1, M=2) for scanning.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import Inconsistent, NotAnImage, NotPresent, ResourceLimitError

DEFAULT_MAX_WORD_LEN = 2**27

L_CODE, S_CODE, M_CODE = 0, 1, 2
_ASCII = np.frombuffer(b"LSM", dtype=np.uint8)
_DECODE = np.full(256, 255, dtype=np.uint8)
_DECODE[_ASCII] = np.arange(3, dtype=np.uint8)


class Letter(str, enum.Enum):
    L = "L"
    S = "S"
    M = "M"

    @property
    def code(self) -> int:
        return "LSM".index(self.value)

    def __str__(self) -> str:
        return self.value


ALPHABET = "LSM"


def check_word(w: str) -> str:
    bad = set(w) - set(ALPHABET)
    if bad:
        raise ValueError(f"letters outside {{L,S,M}}: {sorted(bad)}")
    return w


def encode(w: str) -> np.ndarray:
    codes = _DECODE[np.frombuffer(w.encode("ascii"), dtype=np.uint8)]
    if codes.size and codes.max() > 2:
        raise ValueError("word contains letters outside {L,S,M}")
    return codes


def decode(codes: np.ndarray) -> str:
    return _ASCII[np.asarray(codes, dtype=np.uint8)].tobytes().decode("ascii")


def _check_cap(n: int, max_len: int | None) -> None:
    cap = DEFAULT_MAX_WORD_LEN if max_len is None else max_len
    if n > cap:
        raise ResourceLimitError(n, cap)


@dataclass(frozen=True)
class Substitution:
    """The morphism L -> L^p S, S -> M, M -> L^(p-1) S."""

    p: int

    def __post_init__(self):
        if not isinstance(self.p, (int, np.integer)) or self.p < 2:
            raise ValueError(f"p must be an integer >= 2, got {self.p!r}")

    @cached_property
    def images(self) -> dict[str, str]:
        p = self.p
        return {"L": "L" * p + "S", "S": "M", "M": "L" * (p - 1) + "S"}

    def image_length(self, w: str) -> int:
        """Length of apply(w) computed from letter counts alone."""
        return (self.p + 1) * len(w) - self.p * w.count("S") - w.count("M")

    def apply(self, w: str, times: int = 1, max_len: int | None = None) -> str:
        img = self.images
        for _ in range(times):
            _check_cap(self.image_length(w), max_len)
            w = "".join(img[c] for c in w)
        return w

    def iterate_length(self, n: int, start: str = "L") -> int:
        counts = [start.count(c) for c in ALPHABET]
        p = self.p
        for _ in range(n):
            nl, ns, nm = counts
            counts = [p * nl + (p - 1) * nm, nl + nm, ns]
        return sum(counts)

    def iterate(self, n: int, start: str = "L", max_len: int | None = None) -> str:
        """phi_p^n(start), refusing to build anything longer than the cap."""
        if n < 0:
            raise ValueError("n must be >= 0")
        _check_cap(self.iterate_length(n, start), max_len)
        if start == "L":
            return prefix(self.p, self.iterate_length(n), max_len=max_len)
        return self.apply(start, n, max_len=max_len)

    def preimage(self, v: str) -> str:
        """The unique x with apply(x) == v.

        ``v`` must split into blocks L^p S, L^(p-1) S and M.
        """
        return decode(self.preimage_codes(encode(v)))

    def preimage_codes(self, codes: np.ndarray) -> np.ndarray:
        if len(codes) == 0:
            raise NotAnImage("empty word is not accepted")
        ends = np.flatnonzero(codes != L_CODE)
        if len(ends) == 0 or ends[-1] != len(codes) - 1:
            start = 0 if len(ends) == 0 else int(ends[-1]) + 1
            raise NotAnImage(f"trailing L-run at offset {start} has no terminator")
        runs = np.diff(ends, prepend=-1) - 1
        term = codes[ends]
        out = np.full(len(ends), 255, dtype=np.uint8)
        out[(term == M_CODE) & (runs == 0)] = S_CODE
        out[(term == S_CODE) & (runs == self.p)] = L_CODE
        out[(term == S_CODE) & (runs == self.p - 1)] = M_CODE
        bad = np.flatnonzero(out == 255)
        if len(bad):
            k = int(bad[0])
            i = int(ends[k]) - int(runs[k])
            block = decode(codes[i:int(ends[k]) + 1])
            raise NotAnImage(f"block {block!r} at offset {i} is not an image of a letter")
        return out

    def inverse_counts(self, counts) -> tuple[int, int, int]:
        """Parikh vector of v from the Parikh vector (a, b, c) of apply(v).

        The result sums to b + c, the length of v.
        """
        a, b, c = (int(x) for x in counts)
        out = (a - (self.p - 1) * b, c, -a + self.p * b)
        if min(out) < 0:
            raise Inconsistent(f"{(a, b, c)} is not the Parikh vector of an image under phi_{self.p}")
        return out


def strip_prefix_power(v: str, w: str, k: int) -> str:
    """Remove k leading copies of w from v."""
    if k < 0:
        raise ValueError("k must be >= 0")
    head = w * k
    if not v.startswith(head):
        raise NotPresent(f"{w!r}^{k} is not a prefix of {v[:len(head) + 8]!r}")
    return v[len(head):]


def strip_suffix_power(v: str, w: str, k: int) -> str:
    """Remove k trailing copies of w from v."""
    if k < 0:
        raise ValueError("k must be >= 0")
    tail = w * k
    if not v.endswith(tail):
        raise NotPresent(f"{w!r}^{k} is not a suffix of ...{v[-len(tail) - 8:]!r}")
    return v[: len(v) - len(tail)]


# ---------------------------------------------------------------------------
# fixed point generation

_BUFFERS: dict[int, np.ndarray] = {}
_READ: dict[int, int] = {}


def _expand(p: int, codes: np.ndarray) -> np.ndarray:
    # every image is L^k followed by one terminator
    run = np.array([p, 0, p - 1], dtype=np.int64)[codes]
    term = np.array([S_CODE, M_CODE, S_CODE], dtype=np.uint8)[codes]
    ends = np.cumsum(run + 1) - 1
    out = np.zeros(int(ends[-1]) + 1 if len(ends) else 0, dtype=np.uint8)
    out[ends] = term
    return out


def prefix_codes(p: int, n: int, max_len: int | None = None) -> np.ndarray:
    """First n letters of the fixed point as a read-only code array.

    The buffer reads itself: letters already emitted are fed back through
    phi_p to extend it, which works because phi_p(L) starts with L.
    """
    Substitution(p)
    if n < 0:
        raise ValueError("n must be >= 0")
    _check_cap(n, max_len)
    buf = _BUFFERS.get(p)
    if buf is None:
        buf = np.array([L_CODE] * p + [S_CODE], dtype=np.uint8)
        _READ[p] = 1
    read = _READ[p]
    if len(buf) < n or p not in _BUFFERS:
        while len(buf) < n:
            take = min(len(buf) - read, n - len(buf))
            buf = np.concatenate([buf, _expand(p, buf[read:read + take])])
            read += take
        buf.flags.writeable = False
        _BUFFERS[p] = buf
        _READ[p] = read
    return buf[:n]


def prefix(p: int, n: int, max_len: int | None = None) -> str:
    return decode(prefix_codes(p, n, max_len=max_len))


class FixedPointStream:
    """Letter-by-letter generator of the fixed point.

    >>> "".join(FixedPointStream(2).take(7))
    'LLSLLSM'
    """

    def __init__(self, p: int, max_len: int | None = None):
        self.sub = Substitution(p)
        self.max_len = DEFAULT_MAX_WORD_LEN if max_len is None else max_len
        self.reset()

    @property
    def p(self) -> int:
        return self.sub.p

    def reset(self) -> None:
        self._buf = list(self.sub.images["L"])
        self._read = 1
        self.emitted = 0

    def __iter__(self):
        return self

    def __next__(self) -> str:
        if self.emitted >= self.max_len:
            raise ResourceLimitError(self.emitted + 1, self.max_len)
        if self.emitted == len(self._buf):
            self._buf.extend(self.sub.images[self._buf[self._read]])
            self._read += 1
        c = self._buf[self.emitted]
        self.emitted += 1
        return c

    def take(self, n: int) -> str:
        return "".join(next(self) for _ in range(n))
