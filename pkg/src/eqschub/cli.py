"""Command-line front end.

Commands: rootsys, restrict, mult, sweep.  Stdout carries only the result
payload and is byte-identical across reruns and across --jobs settings;
diagnostics (including wall time) go to stderr.

Exit codes: 0 success, 2 bad input, 3 resource/closure cap, 4 internal
solver inconsistency, 5 a positivity certificate failed.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from . import __version__
from .errors import (
    ClosureOverflow,
    DomainViolation,
    EqschubError,
    InsufficientBound,
    InternalInconsistency,
    InvalidCartan,
    NotDivisible,
    NotFiniteType,
    RankMismatch,
    ResourceCap,
    SingularCartan,
)
from .localize import CONVENTIONS, billey_restrict, restriction_table
from .rootsys import (
    BUILTIN_TYPES,
    CartanMatrix,
    FINITE,
    GENERAL,
    build_root_system,
    builtin_root_system,
    monomial_text,
)
from .structconst import (
    billey_evaluate,
    opposite_constants,
    positivity_certificate,
    structure_constants,
)
from .weyl import element_from_word, enumerate_upto, inverse, longest_element

CACHE_ENV = "EQSCHUB_CACHE"

EXIT_OK = 0
EXIT_BAD_INPUT = 2
EXIT_RESOURCE = 3
EXIT_INTERNAL = 4
EXIT_CERT_FAIL = 5


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_BAD_INPUT):
        super().__init__(message)
        self.code = code


# ---------------------------------------------------------------------------
# Input parsing


def load_root_system(args) -> "RootSystemHandle":
    if args.type and args.cartan:
        raise CliError("use either --type or --cartan, not both")
    if args.type:
        if args.type not in BUILTIN_TYPES:
            raise CliError(
                f"unknown type {args.type!r}; choose from {', '.join(BUILTIN_TYPES)}"
            )
        rs = builtin_root_system(args.type)
        entries, kind = BUILTIN_TYPES[args.type]
        return RootSystemHandle(rs, entries, kind)
    if args.cartan:
        try:
            with open(args.cartan, "r", encoding="utf-8") as fh:
                data = json.load(fh)
        except OSError as exc:
            raise CliError(f"cannot read cartan file: {exc}")
        except json.JSONDecodeError as exc:
            raise CliError(f"cartan file is not valid JSON: {exc}")
        if not isinstance(data, dict) or "entries" not in data:
            raise CliError('cartan file must be {"rank": n, "entries": [[..]]}')
        try:
            cartan = CartanMatrix.from_rows(data["entries"])
        except InvalidCartan as exc:
            raise CliError(f"invalid Cartan matrix: {exc}")
        if "rank" in data and int(data["rank"]) != cartan.rank:
            raise CliError("rank field does not match entries")
        kind = data.get("kind", FINITE)
        if kind not in (FINITE, GENERAL):
            raise CliError(f'kind must be "{FINITE}" or "{GENERAL}"')
        rs = build_root_system(cartan, kind)
        return RootSystemHandle(rs, cartan.entries, kind)
    raise CliError("one of --type or --cartan is required")


@dataclass
class RootSystemHandle:
    rs: object
    entries: tuple
    kind: str


def parse_word(text: str, rank: int, flag: str) -> tuple[int, ...]:
    text = text.strip()
    if not text or text == "e":
        return ()
    out = []
    for part in text.split(","):
        part = part.strip()
        if not part.isdigit():
            raise CliError(f"{flag}: malformed word {text!r}")
        i = int(part)
        if not 1 <= i <= rank:
            raise CliError(f"{flag}: letter {i} out of range for rank {rank}")
        out.append(i)
    return tuple(out)


def parse_eval_point(text: str, rank: int) -> tuple[Fraction, ...]:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != rank:
        raise CliError(f"--eval needs {rank} comma-separated values")
    try:
        return tuple(Fraction(p) for p in parts)
    except (ValueError, ZeroDivisionError) as exc:
        raise CliError(f"--eval: bad rational value: {exc}")


def word_text(word: tuple[int, ...]) -> str:
    return ",".join(str(i) for i in word) if word else "e"


def vector_text(coords) -> str:
    parts = []
    for i, c in enumerate(coords):
        if c == 0:
            continue
        mag = abs(c)
        body = f"a{i + 1}" if mag == 1 else f"{mag}*a{i + 1}"
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(parts) if parts else "0"


# ---------------------------------------------------------------------------
# rootsys


def cmd_rootsys(args, out) -> int:
    handle = load_root_system(args)
    rs = handle.rs
    if args.format == "json":
        payload = {
            "type": rs.descriptor,
            "kind": rs.kind,
            "rank": rs.rank,
            "cartan": [list(row) for row in rs.cartan.entries],
        }
        if rs.kind == FINITE:
            payload["positive_roots"] = [
                [int(c) for c in root.coords] for root in rs.positive_roots
            ]
            payload["fundamental_weights"] = [
                [str(c) for c in w.coords] for w in rs.fundamental_weights
            ]
        print(json.dumps(payload), file=out)
    elif args.format == "text":
        print(f"type: {rs.descriptor}", file=out)
        print(f"kind: {rs.kind}", file=out)
        print(f"rank: {rs.rank}", file=out)
        if rs.kind == FINITE:
            print(f"positive roots ({len(rs.positive_roots)}):", file=out)
            for root in rs.positive_roots:
                print(f"  {vector_text(root.coords)}", file=out)
            print("fundamental weights:", file=out)
            for j, w in enumerate(rs.fundamental_weights):
                print(f"  w{j + 1} = {vector_text(w.coords)}", file=out)
        else:
            print("positive roots: not enumerated for general kind", file=out)
    else:
        raise CliError(f"rootsys does not support --format {args.format}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# restrict


def cmd_restrict(args, out) -> int:
    handle = load_root_system(args)
    rs = handle.rs
    w_word = parse_word(args.w, rs.rank, "--w")
    v_word = parse_word(args.v, rs.rank, "--v")
    w = element_from_word(rs, w_word)
    v = element_from_word(rs, v_word)
    if args.convention != "KK":
        w, v = inverse(w), inverse(v)
    poly = billey_restrict(rs, w, v)
    if args.format == "json":
        payload = {
            "type": rs.descriptor,
            "w": list(w_word),
            "v": list(v_word),
            "convention": args.convention,
            "value": poly.to_json_dict(),
        }
        print(json.dumps(payload), file=out)
    elif args.format == "text":
        print(poly.to_text(), file=out)
    else:
        raise CliError(f"restrict does not support --format {args.format}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# mult


def _table_for_pair(handle: RootSystemHandle, total_length: int, max_length: int | None):
    rs = handle.rs
    if max_length is not None:
        bound = max_length
    elif rs.kind == FINITE:
        bound = len(rs.positive_roots)
    else:
        bound = total_length
    return restriction_table(rs, bound)


def cmd_mult(args, out) -> int:
    handle = load_root_system(args)
    rs = handle.rs
    u_word = parse_word(args.u, rs.rank, "--u")
    v_word = parse_word(args.v, rs.rank, "--v")
    u = element_from_word(rs, u_word)
    v = element_from_word(rs, v_word)
    if args.basis == "y" and rs.kind != FINITE:
        raise CliError("--basis y requires a finite-type root system")
    table = _table_for_pair(handle, u.length + v.length, args.max_length)
    try:
        s = structure_constants(table, u, v)
    except InsufficientBound as exc:
        raise CliError(str(exc))
    if args.basis == "y":
        s = opposite_constants(s, longest_element(rs))
    cert = positivity_certificate(s)
    evaluation = None
    if args.eval is not None:
        point = parse_eval_point(args.eval, rs.rank)
        try:
            evaluation = billey_evaluate(s, point)
        except DomainViolation as exc:
            raise CliError(str(exc))

    if args.format == "json":
        payload = s.to_json_dict()
        if evaluation is not None:
            payload["eval"] = {
                "nu": [str(x) for x in point],
                "values": [
                    {"w": list(w.word), "value": str(evaluation[w])} for w in s.order
                ],
            }
        print(json.dumps(payload), file=out)
    elif args.format == "csv":
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["w_word", "degree", "monomial", "coefficient"])
        for w in s.order:
            for exp, coeff in s.values[w].sorted_terms():
                writer.writerow([word_text(w.word), sum(exp), monomial_text(exp), coeff])
    elif args.format == "text":
        print(
            f"type={rs.descriptor} basis={args.basis} "
            f"u={word_text(u_word)} v={word_text(v_word)}",
            file=out,
        )
        for w in s.order:
            print(f"w={w.word_text()}: {s.values[w].to_text()}", file=out)
        print(f"certificate: {cert.verdict}", file=out)
        if evaluation is not None:
            nu_text = ",".join(str(x) for x in point)
            for w in s.order:
                print(f"eval nu={nu_text} w={w.word_text()}: {evaluation[w]}", file=out)
    else:
        raise CliError(f"mult does not support --format {args.format}")
    return EXIT_OK if cert else EXIT_CERT_FAIL


# ---------------------------------------------------------------------------
# sweep


_WORKER: dict = {}


def _sweep_setup(entries, kind, bound, basis):
    cartan = CartanMatrix(entries)
    rs = build_root_system(cartan, kind)
    table = restriction_table(rs, bound)
    w0 = longest_element(rs) if (basis == "y" and rs.kind == FINITE) else None
    return {"rs": rs, "table": table, "w0": w0, "basis": basis}


def _sweep_init(entries, kind, bound, basis):
    _WORKER["state"] = _sweep_setup(entries, kind, bound, basis)


def _sweep_pair_line(state, u_word, v_word) -> tuple[str, bool]:
    rs = state["rs"]
    table = state["table"]
    u = element_from_word(rs, u_word)
    v = element_from_word(rs, v_word)
    s = structure_constants(table, u, v)
    if state["basis"] == "y":
        s = opposite_constants(s, state["w0"])
    cert = positivity_certificate(s)
    return json.dumps(s.to_json_dict()), bool(cert)


def _sweep_task(pair):
    return _sweep_pair_line(_WORKER["state"], pair[0], pair[1])


@dataclass
class SweepReport:
    descriptor: str
    bound: int
    basis: str
    pair_count: int
    fails: list[tuple[tuple[int, ...], tuple[int, ...]]]
    wall_time: float
    cache_path: str | None

    @property
    def verdict(self) -> str:
        return "pass" if not self.fails else "fail"

    def to_json_dict(self) -> dict:
        return {
            "type": self.descriptor,
            "bound": self.bound,
            "basis": self.basis,
            "pair_count": self.pair_count,
            "fails": [
                {"u": list(u), "v": list(v)} for u, v in self.fails
            ],
            "verdict": self.verdict,
            "cache": self.cache_path,
        }


def run_sweep(
    entries,
    kind: str,
    bound: int,
    basis: str,
    *,
    jobs: int = 1,
    cache_path: str | None = None,
) -> SweepReport:
    """Certify every pair in range; cache lines are appended under their key."""
    start = time.perf_counter()
    cartan = CartanMatrix(entries)
    rs = build_root_system(cartan, kind)
    if basis == "y" and rs.kind != FINITE:
        raise NotFiniteType("y-basis sweep requires a finite-type root system")
    rng = enumerate_upto(rs, bound)
    if rng.complete:
        swept = list(rng.elements)
    else:
        half = bound // 2
        swept = [w for w in rng.elements if w.length <= half]
    pairs = [(u.word, v.word) for u in swept for v in swept]

    if jobs > 1:
        with ProcessPoolExecutor(
            max_workers=jobs,
            initializer=_sweep_init,
            initargs=(cartan.entries, kind, bound, basis),
        ) as pool:
            results = list(pool.map(_sweep_task, pairs, chunksize=16))
    else:
        state = _sweep_setup(cartan.entries, kind, bound, basis)
        results = [_sweep_pair_line(state, uw, vw) for uw, vw in pairs]

    fails = [pair for pair, (_, ok) in zip(pairs, results) if not ok]
    if cache_path:
        _append_cache(cache_path, rs.descriptor, basis, bound, pairs, results)
    wall = time.perf_counter() - start
    return SweepReport(
        rs.descriptor, bound, basis, len(pairs), fails, wall, cache_path
    )


def _cache_key(record: dict) -> tuple:
    return (
        record["type"],
        record["basis"],
        tuple(record["u"]),
        tuple(record["v"]),
    )


def _append_cache(path, descriptor, basis, bound, pairs, results):
    existing: set = set()
    header = {
        "engine": f"eqschub {__version__}",
        "convention": "KK",
        "format": 1,
    }
    lines_out = []
    if os.path.exists(path):
        with open(path, "r", encoding="utf-8") as fh:
            for idx, line in enumerate(fh):
                line = line.strip()
                if not line:
                    continue
                record = json.loads(line)
                if idx == 0 and "engine" in record:
                    continue
                existing.add(_cache_key(record))
    else:
        lines_out.append(json.dumps(header))
    for (u_word, v_word), (line, _) in zip(pairs, results):
        key = (descriptor, basis, tuple(u_word), tuple(v_word))
        if key not in existing:
            lines_out.append(line)
    if lines_out:
        with open(path, "a", encoding="utf-8") as fh:
            for line in lines_out:
                fh.write(line + "\n")


def cmd_sweep(args, out) -> int:
    handle = load_root_system(args)
    if args.max_length is None:
        raise CliError("sweep requires --max-length")
    if args.max_length < 0:
        raise CliError("--max-length must be nonnegative")
    if args.jobs < 1:
        raise CliError("--jobs must be at least 1")
    cache_path = args.cache or os.environ.get(CACHE_ENV) or None
    try:
        report = run_sweep(
            handle.entries,
            handle.kind,
            args.max_length,
            args.basis,
            jobs=args.jobs,
            cache_path=cache_path,
        )
    except NotFiniteType as exc:
        raise CliError(str(exc))
    if args.format == "json":
        print(json.dumps(report.to_json_dict()), file=out)
    elif args.format == "text":
        print(
            f"type={report.descriptor} bound={report.bound} basis={report.basis} "
            f"pairs={report.pair_count} fails={len(report.fails)} "
            f"verdict={report.verdict} cache={report.cache_path or '-'}",
            file=out,
        )
        for u, v in report.fails:
            print(f"fail: u={word_text(u)} v={word_text(v)}", file=out)
    else:
        raise CliError(f"sweep does not support --format {args.format}")
    print(f"sweep completed in {report.wall_time:.2f}s", file=sys.stderr)
    return EXIT_OK if report.verdict == "pass" else EXIT_CERT_FAIL


# ---------------------------------------------------------------------------
# argument plumbing


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--type", help="built-in root system name")
    common.add_argument("--cartan", help="JSON file with a Cartan matrix")
    common.add_argument(
        "--format", default="text", choices=["text", "json", "csv"]
    )
    common.add_argument("--cache", help="JSONL cache path")
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--max-length", type=int, default=None)

    parser = argparse.ArgumentParser(
        prog="eqschub",
        description="Exact equivariant Schubert structure constants",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("rootsys", parents=[common])

    p_restrict = sub.add_parser("restrict", parents=[common])
    p_restrict.add_argument("--w", required=True)
    p_restrict.add_argument("--v", required=True)
    p_restrict.add_argument("--convention", default="KK", choices=list(CONVENTIONS))

    p_mult = sub.add_parser("mult", parents=[common])
    p_mult.add_argument("--u", required=True)
    p_mult.add_argument("--v", required=True)
    p_mult.add_argument("--basis", default="x", choices=["x", "y"])
    p_mult.add_argument("--eval", default=None)

    p_sweep = sub.add_parser("sweep", parents=[common])
    p_sweep.add_argument("--basis", default="x", choices=["x", "y"])

    return parser


COMMANDS = {
    "rootsys": cmd_rootsys,
    "restrict": cmd_restrict,
    "mult": cmd_mult,
    "sweep": cmd_sweep,
}


def main(argv=None, out=None) -> int:
    out = out if out is not None else sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_BAD_INPUT if exc.code else EXIT_OK
    try:
        return COMMANDS[args.command](args, out)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (InvalidCartan, RankMismatch, DomainViolation, NotFiniteType, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except (ClosureOverflow, ResourceCap) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (NotDivisible, InternalInconsistency) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except SingularCartan as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except EqschubError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT


def entry_point():
    sys.exit(main())


if __name__ == "__main__":
    entry_point()
