"""Checkers for the structural and quantitative properties of u^(p).

Each checker returns CheckResult records; failures carry absolute offsets
into the scanned word together with the offending letters, so they can be
re-checked by hand.
"""

from __future__ import annotations

import logging
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from . import __version__
from .errors import ConfigError, FormulaInvalid, FrameViolation, MembershipUnresolved, NotFound, ResourceLimitError
from .parikh import (
    BALANCE_BOUNDS,
    ParikhVector,
    ScanPolicy,
    WindowSpectrum,
    candidate_frame,
    excluded_difference_check,
    fixed_point_counts,
    parikh,
    spectrum,
)
from .witnesses import (
    ac7_family,
    ac_lower_bound_triple,
    balance_witness_pair,
    formula_words,
    search_witness_pair,
    stated_length,
)
from .words import L_CODE, M_CODE, S_CODE, Substitution, decode, encode, prefix, prefix_codes

log = logging.getLogger(__name__)

PASS, FAIL, UNRESOLVED = "pass", "fail", "unresolved"


@dataclass
class CheckResult:
    claim: str
    params: dict
    status: str
    evidence: dict = field(default_factory=dict)
    elapsed: float = 0.0
    # known discrepancy in the source formulas; excluded from the exit status
    flagged: bool = False

    @property
    def ok(self) -> bool:
        return self.status == PASS or self.flagged

    def to_json(self) -> dict:
        return asdict(self)


class _timed:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = round(time.perf_counter() - self.t0, 4)


def _window(codes, i, j):
    i, j = max(int(i), 0), min(int(j), len(codes))
    return {"offset": i, "end": j, "letters": decode(codes[i:j])}


# ---------------------------------------------------------------------------
# structure


def _adjacency(codes) -> dict | None:
    n = len(codes)
    for letter, before, after in ((S_CODE, (L_CODE,), (L_CODE, M_CODE)), (M_CODE, (S_CODE,), (L_CODE,))):
        idx = np.flatnonzero(codes == letter)
        bad_prev = idx[(idx > 0)][~np.isin(codes[idx[idx > 0] - 1], before)]
        inner = idx[idx + 1 < n]
        bad_next = inner[~np.isin(codes[inner + 1], after)]
        bad = np.concatenate([bad_prev, bad_next])
        if len(bad):
            i = int(bad.min())
            return {**_window(codes, i - 1, i + 2), "position": i}
    return None


def _s_gaps(codes, p) -> dict | None:
    idx = np.flatnonzero(codes == S_CODE)
    if len(idx) < 2:
        return None
    a, b = idx[:-1], idx[1:]
    gap = b - a - 1
    cm = np.concatenate([[0], np.cumsum(codes == M_CODE)])
    n_m = cm[b] - cm[a + 1]
    first = codes[np.minimum(a + 1, len(codes) - 1)]
    ok = ((gap == p) & (n_m == 0)) | ((first == M_CODE) & (n_m == 1) & ((gap == p) | (gap == p + 1)))
    bad = np.flatnonzero(~ok)
    if len(bad):
        k = int(bad[0])
        return _window(codes, a[k], b[k] + 1)
    return None


def m_gap_words(p: int) -> tuple[str, str, str]:
    block = "L" * p + "S"
    head = "L" * (p - 1) + "S"
    return block * p, head + block * p, head + block * (p - 1)


def _m_gaps(codes, p) -> tuple[dict | None, tuple[int, int] | None]:
    idx = np.flatnonzero(codes == M_CODE)
    if len(idx) < 2:
        return None, None
    allowed = {len(z): encode(z).tobytes() for z in m_gap_words(p)}
    raw = codes.tobytes()
    gaps = np.diff(idx) - 1
    for a, b in zip(idx[:-1].tolist(), idx[1:].tolist()):
        if allowed.get(b - a - 1) != raw[a + 1:b]:
            return _window(codes, a, b + 1), None
    return None, (int(gaps.min()), int(gaps.max()))


def _m_density(codes, p) -> dict | None:
    # For factors running from one M to another, the bound reads
    # pos[j] - pos[i] >= (j - i) * (p^2 + p); all other factors hold no more
    # M's than the shortest such factor inside them.
    pos = np.flatnonzero(codes == M_CODE).astype(np.int64)
    if len(pos) < 2:
        return None
    r = pos - np.arange(len(pos)) * (p * p + p)
    best = np.maximum.accumulate(r)
    bad = np.flatnonzero(r[1:] < best[:-1]) + 1
    if len(bad):
        j = int(bad[0])
        i = int(np.argmax(r[:j]))
        ev = _window(codes, pos[i], pos[j] + 1)
        ev["m_count"] = j - i + 1
        return ev
    return None


def check_structure(p: int, prefix_len: int, word=None) -> list[CheckResult]:
    """Adjacency, S-gap, M-gap and M-density checks over one word.

    ``word`` defaults to the prefix of u^(p) of length prefix_len; passing a
    modified word is how negative controls are run.
    """
    Substitution(p)
    if prefix_len < p * p + 2 * p + 2:
        raise ConfigError(f"prefix_len must be at least {p * p + 2 * p + 2}")
    if word is None:
        codes = prefix_codes(p, prefix_len)
    else:
        codes = encode(word) if isinstance(word, str) else np.asarray(word, dtype=np.uint8)
        codes = codes[:prefix_len]
    params = {"p": p, "prefix_len": len(codes)}
    out = []

    def record(claim, fn, extra=None):
        with _timed() as t:
            ev = fn()
        status = PASS if ev is None else FAIL
        evidence = {"scanned": len(codes)} if ev is None else {"counterexample": ev}
        if extra:
            evidence.update(extra)
        out.append(CheckResult(claim, dict(params), status, evidence, t.elapsed))

    record("adjacency", lambda: _adjacency(codes))
    record("s-gaps", lambda: _s_gaps(codes, p))
    with _timed() as t:
        ev, span = _m_gaps(codes, p)
    lo, hi = p * p + p - 1, p * p + 2 * p
    if ev is None and span is not None and not (lo <= span[0] and span[1] <= hi):
        ev = {"gap_lengths": list(span)}
    evidence = {"counterexample": ev} if ev else {"scanned": len(codes), "gap_lengths": list(span or ()), "bounds": [lo, hi]}
    out.append(CheckResult("m-gaps", dict(params), FAIL if ev else PASS, evidence, t.elapsed))
    record("m-density", lambda: _m_density(codes, p))
    return out


# ---------------------------------------------------------------------------
# counting identities and preimages


def _random_factors(p, count, max_len, prefix_len, seed):
    rng = np.random.default_rng(seed)
    u = prefix(p, prefix_len)
    for _ in range(count):
        n = int(rng.integers(1, max_len + 1))
        i = int(rng.integers(0, prefix_len - n + 1))
        yield i, u[i:i + n]


def check_counting(p: int, samples: int = 1000, seed: int = 0, max_factor_len: int = 500,
                   prefix_len: int = 100_000) -> CheckResult:
    """Letter counts of random factors against the counts of their images."""
    if samples < 1:
        raise ConfigError("samples must be >= 1")
    sub = Substitution(p)
    params = {"p": p, "samples": samples, "seed": seed, "max_factor_len": max_factor_len}
    with _timed() as t:
        bad = None
        for i, v in _random_factors(p, samples, max_factor_len, prefix_len, seed):
            img = sub.apply(v)
            pv, pi = parikh(v), parikh(img)
            length_ok = len(img) == (p + 1) * len(v) - p * pv.nS - pv.nM
            forward_ok = pi == (p * pv.nL + (p - 1) * pv.nM, pv.nL + pv.nM, pv.nS)
            inverse_ok = sub.inverse_counts(pi) == tuple(pv) and len(v) == pi.nS + pi.nM
            if not (length_ok and forward_ok and inverse_ok):
                bad = {"offset": i, "end": i + len(v), "letters": v, "image_length": len(img)}
                break
    status = PASS if bad is None else FAIL
    return CheckResult("counting-identities", params, status, {"counterexample": bad} if bad else {}, t.elapsed)


def _block_aligned_factors(p, count, prefix_len, seed, max_len=500):
    """Random factors of u^(p) that start after and end on a terminator."""
    rng = np.random.default_rng(seed)
    codes = prefix_codes(p, prefix_len)
    ends = np.flatnonzero(codes != L_CODE)
    for _ in range(count):
        k = int(rng.integers(0, len(ends) - 1))
        width = int(rng.integers(1, max_len // p + 2))
        j = min(k + width, len(ends) - 1)
        start = int(ends[k]) + 1
        yield start, decode(codes[start:int(ends[j]) + 1])


def check_preimage(p: int, samples: int = 500, seed: int = 0, max_k: int = 12,
                   prefix_len: int = 100_000, max_len: int | None = None) -> CheckResult:
    sub = Substitution(p)
    params = {"p": p, "samples": samples, "seed": seed, "max_k": max_k}
    evidence = {}
    bad = None
    with _timed() as t:
        for i, v in _block_aligned_factors(p, samples, prefix_len, seed):
            x = sub.preimage(v)
            if sub.apply(x) != v:
                bad = {"offset": i, "end": i + len(v), "letters": v}
                break
        checked = []
        if bad is None:
            for k in range(1, max_k + 1):
                try:
                    big = sub.iterate(k, max_len=max_len)
                except ResourceLimitError as exc:
                    # iterates past the word-length cap are out of range, not failures
                    evidence["cap_limited_from_k"] = k
                    evidence["reason"] = str(exc)
                    break
                small = sub.iterate(k - 1, max_len=max_len)
                if decode(sub.preimage_codes(encode(big))) != small:
                    bad = {"k": k}
                    break
                checked.append(k)
        evidence["iterates_checked"] = checked
    if bad:
        evidence["counterexample"] = bad
    status = FAIL if bad else PASS
    return CheckResult("preimage-round-trip", params, status, evidence, t.elapsed)


# ---------------------------------------------------------------------------
# balance and Abelian complexity


def _spectra(p, max_n, policy, spectra_):
    if spectra_ is not None:
        return spectra_
    out = []
    for n in range(1, max_n + 1):
        out.append(spectrum(p, n, policy))
        if n % 250 == 0:
            log.info("p=%d: scanned n=%d/%d", p, n, max_n)
    return out


def _spread_offsets(p, spec: WindowSpectrum, letter):
    counts = fixed_point_counts(p, spec.scanned_prefix_len)
    n = spec.n
    s, m = counts.windows(n, 0, spec.scanned_prefix_len - n + 1)
    c = {"L": n - s - m, "S": s, "M": m}[letter]
    i, j = int(np.argmax(c)), int(np.argmin(c))
    u = prefix(p, max(i, j) + n)
    return {"n": n, "v_offset": i, "w_offset": j, "v": u[i:i + n], "w": u[j:j + n],
            "difference": int(c[i] - c[j])}


def check_balance(p: int, max_n: int, policy: ScanPolicy | None = None, spectra_=None) -> CheckResult:
    """Per-letter spreads against the bounds 3 (L), 2 (S), 2 (M)."""
    params = {"p": p, "max_n": max_n}
    with _timed() as t:
        specs = _spectra(p, max_n, policy, spectra_)
        first = {}
        worst = {}
        violation = None
        for spec in specs:
            for letter, bound in BALANCE_BOUNDS.items():
                s = spec.spread(letter)
                worst[letter] = max(worst.get(letter, 0), s)
                if s >= bound and letter not in first:
                    first[letter] = spec.n
                if s > bound and violation is None:
                    violation = {"letter": letter, **_spread_offsets(p, spec, letter)}
        unstable = [s.n for s in specs if not s.stabilized]
    evidence = {"max_spread": worst, "first_attaining_bound": first, "unstabilized": unstable}
    if violation:
        evidence["counterexample"] = violation
        status = FAIL
    else:
        status = UNRESOLVED if unstable else PASS
    return CheckResult("balance-bounds", params, status, evidence, t.elapsed)


# pairs of candidate numbers that can never both be realized
EXCLUSIVE_PAIRS = ((1, 8), (2, 9), (1, 9))


def check_ac(p: int, max_n: int, policy: ScanPolicy | None = None, spectra_=None) -> list[CheckResult]:
    """Bounds 3..7 on AC(n), nine-candidate containment, the excluded difference.

    A second record lists which values of 3..7 were attained.
    """
    params = {"p": p, "max_n": max_n}
    with _timed() as t:
        specs = _spectra(p, max_n, policy, spectra_)
        violation = None
        values = {}
        for spec in specs:
            values.setdefault(spec.ac, spec.n)
            problem = None
            if not 3 <= spec.ac <= 7:
                problem = f"AC={spec.ac}"
            else:
                try:
                    frame = candidate_frame(spec)
                except FrameViolation as exc:
                    problem = str(exc)
                else:
                    realized = set(frame.realized(spec.vectors))
                    for a, b in EXCLUSIVE_PAIRS:
                        if {a, b} <= realized:
                            problem = f"candidates {a} and {b} both realized"
                    if problem is None and not excluded_difference_check(spec):
                        problem = "two vectors differ by (3,-2,-1)"
            if problem and violation is None:
                violation = {"n": spec.n, "problem": problem, "vectors": [list(v) for v in spec.sorted_vectors()]}
        unstable = [s.n for s in specs if not s.stabilized]
    evidence = {"values_first_n": {str(k): v for k, v in sorted(values.items())}, "unstabilized": unstable}
    if violation:
        evidence["counterexample"] = violation
    status = FAIL if violation else (UNRESOLVED if unstable else PASS)
    bounds = CheckResult("ac-bounds", params, status, evidence, t.elapsed)
    missing = sorted(set(range(3, 8)) - set(values))
    attained = CheckResult(
        "ac-values",
        dict(params),
        PASS if not missing else UNRESOLVED,
        {"attained": sorted(values), "missing": missing},
    )
    return [bounds, attained]


def check_ac_lower_triple(p: int, max_n: int) -> CheckResult:
    params = {"p": p, "max_n": max_n}
    bad = None
    with _timed() as t:
        for n in range(1, max_n + 1):
            words = ac_lower_bound_triple(p, n)
            vecs = {parikh(w) for w in words}
            if len(vecs) != 3 or {len(w) for w in words} != {n}:
                bad = {"n": n, "words": list(words)}
                break
    return CheckResult("ac-lower-triple", params, FAIL if bad else PASS,
                       {"counterexample": bad} if bad else {}, t.elapsed)


# ---------------------------------------------------------------------------
# independent oracle


def oracle_spectrum(p: int, n: int, prefix_len: int) -> WindowSpectrum:
    """Parikh vectors of every length-n window, each recounted from scratch."""
    if n > prefix_len:
        raise ConfigError("window longer than the prefix")
    u = prefix(p, prefix_len)
    seen = set()
    for i in range(prefix_len - n + 1):
        w = u[i:i + n]
        seen.add((w.count("L"), w.count("S"), w.count("M")))
    return WindowSpectrum(p, n, frozenset(ParikhVector(*v) for v in seen), prefix_len, False)


def check_oracle(p: int, max_n: int = 64, prefix_len: int = 10_000) -> CheckResult:
    params = {"p": p, "max_n": max_n, "prefix_len": prefix_len}
    policy = ScanPolicy(prefix_len=prefix_len)
    bad = None
    with _timed() as t:
        for n in range(1, max_n + 1):
            fast = spectrum(p, n, policy).vectors
            slow = oracle_spectrum(p, n, prefix_len).vectors
            if fast != slow:
                bad = {"n": n, "rolling": sorted(map(list, fast)), "oracle": sorted(map(list, slow))}
                break
    return CheckResult("oracle-equivalence", params, FAIL if bad else PASS,
                       {"counterexample": bad} if bad else {}, t.elapsed)


# ---------------------------------------------------------------------------
# witnesses


def check_witnesses(p: int, Ns=(1, 2), search_max_n: int = 2000, policy: ScanPolicy | None = None) -> list[CheckResult]:
    out = []
    for letter in ("M", "L", "S"):
        params = {"p": p, "letter": letter}
        with _timed() as t:
            try:
                pair = balance_witness_pair(p, letter)
            except FormulaInvalid as exc:
                result = CheckResult(f"witness-{letter}-formula", params, FAIL,
                                     {"reason": str(exc), "lengths": [len(exc.v), len(exc.w)],
                                      "v": exc.v, "w": exc.w}, flagged=True)
            except MembershipUnresolved as exc:
                result = CheckResult(f"witness-{letter}-formula", params, UNRESOLVED, {"reason": str(exc)})
            else:
                result = CheckResult(f"witness-{letter}-formula", params, PASS, pair.to_json())
        result.elapsed = t.elapsed
        out.append(result)
        if letter == "L":
            v, _ = formula_words(p, "L")
            claimed = stated_length(p, "L")
            out.append(CheckResult("witness-L-stated-length", {"p": p}, PASS if len(v) == claimed else FAIL,
                                   {"stated": claimed, "actual": len(v)}, flagged=len(v) != claimed))
    for letter in ("M", "S", "L"):
        bound = BALANCE_BOUNDS[letter]
        params = {"p": p, "letter": letter, "target": bound, "max_n": search_max_n}
        with _timed() as t:
            try:
                pair = search_witness_pair(p, letter, bound, search_max_n, policy)
                result = CheckResult(f"witness-{letter}-search", params, PASS, pair.to_json())
            except NotFound as exc:
                result = CheckResult(f"witness-{letter}-search", params, UNRESOLVED, {"reason": str(exc)})
        result.elapsed = t.elapsed
        out.append(result)
    for N in Ns:
        params = {"p": p, "N": N}
        with _timed() as t:
            try:
                fam = ac7_family(p, N)
                ac = spectrum(p, fam.n_N, policy)
                doc = fam.to_json()
                doc["ac"] = ac.ac
                doc["stabilized"] = ac.stabilized
                status = PASS if ac.ac == 7 else FAIL
            except (FormulaInvalid, MembershipUnresolved) as exc:
                doc, status = {"reason": str(exc)}, FAIL
        out.append(CheckResult("ac7-family", params, status, doc, t.elapsed))
    return out


# ---------------------------------------------------------------------------
# full run

CHECKS = ("structure", "counting", "preimage", "oracle", "balance", "ac", "witnesses")


@dataclass
class VerifyConfig:
    ps: tuple[int, ...] = (2, 3, 4, 5)
    max_n: int = 2000
    prefix_len: int = 1_000_000
    seed: int = 0
    samples: int = 1000
    preimage_samples: int = 500
    max_factor_len: int = 500
    Ns: tuple[int, ...] = (1, 2)
    oracle_max_n: int = 64
    oracle_prefix_len: int = 10_000
    auto_stabilize: bool = True
    checks: tuple[str, ...] = CHECKS
    max_word_len: int | None = None

    def validate(self) -> None:
        if any(p < 2 for p in self.ps):
            raise ConfigError("every p must be >= 2")
        if self.max_n < 1:
            raise ConfigError("max_n must be >= 1")
        if self.prefix_len < self.max_n:
            raise ConfigError(f"prefix_len {self.prefix_len} is shorter than max_n {self.max_n}")
        if self.samples < 1 or self.preimage_samples < 1:
            raise ConfigError("sample counts must be >= 1")
        if self.oracle_prefix_len < self.oracle_max_n:
            raise ConfigError("oracle prefix shorter than oracle max_n")
        if any(N < 1 for N in self.Ns):
            raise ConfigError("N values must be >= 1")
        unknown = set(self.checks) - set(CHECKS)
        if unknown:
            raise ConfigError(f"unknown checks: {sorted(unknown)}")

    def policy(self) -> ScanPolicy:
        if self.auto_stabilize:
            return ScanPolicy(max_len=self.max_word_len)
        return ScanPolicy(prefix_len=self.prefix_len, max_len=self.max_word_len)


@dataclass
class VerificationReport:
    version: str
    config: dict
    results: list[CheckResult]

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results)

    def to_json(self) -> dict:
        return {"version": self.version, "config": self.config, "ok": self.ok,
                "results": [r.to_json() for r in self.results]}


def run_all(config: VerifyConfig | None = None) -> VerificationReport:
    config = config or VerifyConfig()
    config.validate()
    policy = config.policy()
    results = []
    for p in config.ps:
        enabled = set(config.checks)
        log.info("p=%d: running %s", p, ", ".join(c for c in CHECKS if c in enabled))
        if "structure" in enabled:
            results += check_structure(p, config.prefix_len)
        if "counting" in enabled:
            results.append(check_counting(p, config.samples, config.seed, config.max_factor_len,
                                          min(config.prefix_len, 100_000)))
        if "preimage" in enabled:
            results.append(check_preimage(p, config.preimage_samples, config.seed,
                                          max_len=config.max_word_len))
        if "oracle" in enabled:
            results.append(check_oracle(p, config.oracle_max_n, config.oracle_prefix_len))
        if enabled & {"balance", "ac"}:
            specs = _spectra(p, config.max_n, policy, None)
            if "balance" in enabled:
                results.append(check_balance(p, config.max_n, spectra_=specs))
            if "ac" in enabled:
                results += check_ac(p, config.max_n, spectra_=specs)
                results.append(check_ac_lower_triple(p, min(config.max_n, 500)))
        if "witnesses" in enabled:
            results += check_witnesses(p, config.Ns, config.max_n, policy)
    cfg = asdict(config)
    return VerificationReport(__version__, cfg, results)
