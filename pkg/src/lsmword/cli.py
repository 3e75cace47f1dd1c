"""Command line interface: ``lsmword {generate,ac,balance,witnesses,verify}``.

Data goes to stdout (or --output); progress and warnings go to stderr.
Exit status: 0 success, 1 verification failure, 2 usage or configuration
error (including exceeding --max-word-len).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys

from .errors import ConfigError, FormulaInvalid, MembershipUnresolved, NotFound, ResourceLimitError
from .parikh import BALANCE_BOUNDS, ScanPolicy, parikh, spectrum
from .verify import CHECKS, VerifyConfig, run_all
from .witnesses import FORMULA_INVALID, MEMBERSHIP_UNRESOLVED, ac7_family, balance_witness_pair, search_witness_pair
from .words import Substitution, prefix

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

log = logging.getLogger("lsmword")


def p_value(text: str) -> int:
    try:
        p = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if p < 2:
        raise argparse.ArgumentTypeError("p must be >= 2")
    return p


def p_list(text: str) -> tuple[int, ...]:
    return tuple(p_value(t) for t in text.split(",") if t.strip())


def int_list(text: str) -> tuple[int, ...]:
    return tuple(int(t) for t in text.split(",") if t.strip())


def n_range(text: str) -> range:
    """'52' or '1..300' (inclusive)."""
    try:
        if ".." in text:
            a, b = text.split("..", 1)
            lo, hi = int(a), int(b)
        else:
            lo = hi = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad n or range: {text!r}")
    if lo < 1 or hi < lo:
        raise argparse.ArgumentTypeError(f"empty or non-positive range: {text!r}")
    return range(lo, hi + 1)


def _policy(args) -> ScanPolicy:
    if args.auto_stabilize and args.prefix_len is None:
        return ScanPolicy(max_len=args.max_word_len)
    if args.prefix_len is None:
        raise ConfigError("--no-auto-stabilize needs --prefix-len")
    return ScanPolicy(prefix_len=args.prefix_len, max_len=args.max_word_len)


def _write(args, text: str) -> None:
    if args.output in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(args.output, "w") as fh:
            fh.write(text)


def _table(args, header, rows, docs) -> None:
    if args.format == "json":
        _write(args, json.dumps(docs, indent=2) + "\n")
        return
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    _write(args, buf.getvalue())


def cmd_generate(args) -> int:
    if args.iterate is not None:
        word = Substitution(args.p).iterate(args.iterate, max_len=args.max_word_len)
    else:
        word = prefix(args.p, args.prefix, max_len=args.max_word_len)
    _write(args, word + "\n")
    return EXIT_OK


def cmd_ac(args) -> int:
    policy = _policy(args)
    rows, docs = [], []
    for n in args.n:
        spec = spectrum(args.p, n, policy)
        rows.append((n, spec.ac, int(spec.stabilized)))
        doc = {"n": n, "ac": spec.ac, "stabilized": spec.stabilized}
        if args.vectors:
            doc = {**spec.to_json(), "ac": spec.ac}
        docs.append(doc)
        if n % 250 == 0:
            log.info("ac: n=%d", n)
    _table(args, ("n", "ac", "stabilized"), rows, docs)
    return EXIT_OK


def cmd_balance(args) -> int:
    policy = _policy(args)
    rows, docs = [], []
    for n in args.n:
        spec = spectrum(args.p, n, policy)
        spreads = [spec.spread(c) for c in "LSM"]
        rows.append((n, *spreads, int(spec.stabilized)))
        docs.append({"n": n, "spread_L": spreads[0], "spread_S": spreads[1], "spread_M": spreads[2],
                     "stabilized": spec.stabilized})
        if n % 250 == 0:
            log.info("balance: n=%d", n)
    _table(args, ("n", "spread_L", "spread_S", "spread_M", "stabilized"), rows, docs)
    return EXIT_OK


def _letter_reports(args, letter: str) -> list[dict]:
    out = []
    try:
        pair = balance_witness_pair(args.p, letter, max_len=args.max_word_len)
        out.append({"source": "formula", **pair.to_json()})
    except FormulaInvalid as exc:
        out.append({
            "source": "formula", "p": args.p, "letter": letter,
            "length": [len(exc.v), len(exc.w)],
            "difference": abs(parikh(exc.v).of(letter) - parikh(exc.w).of(letter)),
            "v_offset": None, "w_offset": None, "status": FORMULA_INVALID,
            "reason": str(exc), "v": exc.v, "w": exc.w,
        })
    except MembershipUnresolved as exc:
        out.append({"source": "formula", "p": args.p, "letter": letter, "status": MEMBERSHIP_UNRESOLVED,
                    "reason": str(exc)})
    if out[0]["status"] != "validated" or args.search:
        try:
            pair = search_witness_pair(args.p, letter, BALANCE_BOUNDS[letter], args.search_max_n, _policy(args))
            out.append({"source": "search", **pair.to_json()})
        except NotFound as exc:
            out.append({"source": "search", "p": args.p, "letter": letter, "status": "not_found", "reason": str(exc)})
    return out


def cmd_witnesses(args) -> int:
    reports = []
    for letter in args.letter or ():
        reports += _letter_reports(args, letter)
    if args.ac7:
        for N in args.N:
            try:
                fam = ac7_family(args.p, N, max_len=args.max_word_len)
                reports.append(fam.to_json(words=args.words))
            except (FormulaInvalid, MembershipUnresolved) as exc:
                status = FORMULA_INVALID if isinstance(exc, FormulaInvalid) else MEMBERSHIP_UNRESOLVED
                reports.append({"p": args.p, "N": N, "status": status, "reason": str(exc)})
    if not reports:
        raise ConfigError("choose --letter and/or --ac7")
    _write(args, json.dumps(reports, indent=2) + "\n")
    return EXIT_OK


def cmd_verify(args) -> int:
    config = VerifyConfig(
        ps=args.p,
        max_n=args.max_n,
        prefix_len=args.prefix_len if args.prefix_len is not None else 1_000_000,
        seed=args.seed,
        samples=args.samples,
        Ns=args.N,
        auto_stabilize=args.auto_stabilize,
        checks=args.checks,
        max_word_len=args.max_word_len,
    )
    report = run_all(config)
    _write(args, json.dumps(report.to_json(), indent=2) + "\n")
    for r in report.results:
        if not r.ok:
            log.warning("%s %s: %s", r.claim, r.params, r.status)
    return EXIT_OK if report.ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lsmword", description=__doc__.splitlines()[0])
    parser.add_argument("-q", "--quiet", action="store_true", help="no progress messages")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, p_type=p_value, p_default=None):
        sp.add_argument("--p", type=p_type, required=p_default is None, default=p_default)
        sp.add_argument("--output", "-o", default=None, help="output file (default stdout)")
        sp.add_argument("--max-word-len", type=int, default=None, help="cap on materialized word length")

    def scan(sp):
        sp.add_argument("--prefix-len", type=int, default=None, help="scan exactly this prefix")
        sp.add_argument("--auto-stabilize", action=argparse.BooleanOptionalAction, default=True)

    sp = sub.add_parser("generate", help="print a prefix or an iterate of the fixed point")
    common(sp)
    which = sp.add_mutually_exclusive_group(required=True)
    which.add_argument("--iterate", type=int, metavar="K")
    which.add_argument("--prefix", type=int, metavar="N")
    sp.set_defaults(func=cmd_generate)

    for name, func, help_ in (("ac", cmd_ac, "Abelian complexity per n"),
                              ("balance", cmd_balance, "per-letter spreads per n")):
        sp = sub.add_parser(name, help=help_)
        common(sp)
        scan(sp)
        sp.add_argument("--n", type=n_range, required=True, help="n or a..b")
        sp.add_argument("--format", choices=("csv", "json"), default="csv")
        if name == "ac":
            sp.add_argument("--vectors", action="store_true", help="include realized vectors (json)")
        sp.set_defaults(func=func)

    sp = sub.add_parser("witnesses", help="explicit and searched witness factors")
    common(sp)
    scan(sp)
    sp.add_argument("--letter", action="append", choices=("L", "S", "M"))
    sp.add_argument("--ac7", action="store_true", help="seven factors with distinct Parikh vectors")
    sp.add_argument("--N", type=int_list, default=(1,))
    sp.add_argument("--search", action="store_true", help="also search when the formula validates")
    sp.add_argument("--search-max-n", type=int, default=2000)
    sp.add_argument("--words", action="store_true", help="include the seven words")
    sp.set_defaults(func=cmd_witnesses)

    sp = sub.add_parser("verify", help="run the verification suite")
    common(sp, p_type=p_list, p_default=(2, 3, 4, 5))
    scan(sp)
    sp.add_argument("--max-n", type=int, default=2000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--samples", type=int, default=1000)
    sp.add_argument("--N", type=int_list, default=(1, 2))
    sp.add_argument("--checks", type=lambda s: tuple(x for x in s.split(",") if x), default=CHECKS,
                    help="comma list from: " + ",".join(CHECKS))
    sp.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(stream=sys.stderr, level=logging.WARNING if args.quiet else logging.INFO,
                        format="%(name)s: %(message)s")
    try:
        return args.func(args)
    except (ConfigError, ResourceLimitError, ValueError) as exc:
        print(f"lsmword: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
