"""Command-line interface.

Exit codes: 0 isomorphic / success, 1 not isomorphic / verification failed,
2 bad input, 3 minor evidence, 4 precondition violated or instance too large.
"""

from __future__ import annotations

import argparse
import json
import signal
import sys
from importlib import resources
from pathlib import Path

from .decomposition import decompose
from .errors import (DecompositionError, DomainError, FormatError, InstanceTooLarge,
                     MinorEvidence, PreconditionError)
from .formats import read_graph
from .graph import is_3_connected, is_isomorphism
from .oracle import brute_force_iso, load_corpus, run_corpus
from .tkwl import closure
from .wl import classes, diagonal, wl1_stable, wl2_stable

SCHEMA = 1

EXIT_OK = 0
EXIT_NO = 1
EXIT_INPUT = 2
EXIT_MINOR = 3
EXIT_PRECONDITION = 4

DEFAULT_ORACLE_CAP = 40


class _Timeout(Exception):
    pass


def _emit(payload: dict, as_json: bool, text: str | None = None) -> None:
    payload = {"schema": SCHEMA, **payload}
    if as_json or text is None:
        print(json.dumps(payload, sort_keys=True))
    else:
        print(text)


def _vertex_list(text: str | None, n: int) -> list[int]:
    if not text:
        return []
    try:
        xs = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise DomainError(f"bad vertex list {text!r}") from None
    bad = [x for x in xs if not 0 <= x < n]
    if bad:
        raise DomainError(f"vertex ids out of range: {bad}")
    return xs


def _h_from(args) -> int | None:
    if args.h is not None and args.genus is not None:
        raise DomainError("give at most one of --h and --genus")
    if args.genus is not None:
        if args.genus < 0:
            raise DomainError("genus must be non-negative")
        return 4 * args.genus + 3
    return args.h


# --- subcommands --------------------------------------------------------------------

def cmd_wl(args) -> int:
    g = read_graph(args.file)
    seed = json.loads(args.seed_colors) if args.seed_colors else None
    if seed is not None and len(seed) != g.n:
        raise DomainError("seed colors must list one value per vertex")
    coloring = wl1_stable(g, seed) if args.k == 1 else diagonal(wl2_stable(g, seed))
    parts = classes(coloring)
    _emit({"command": "wl", "k": args.k, "classes": parts}, args.json,
          "\n".join(" ".join(map(str, p)) for p in parts))
    return EXIT_OK


def cmd_closure(args) -> int:
    g = read_graph(args.file)
    xs = _vertex_list(args.x, g.n)
    out = sorted(closure(g, xs, args.t, args.k))
    _emit({"command": "closure", "x": xs, "t": args.t, "k": args.k, "closure": out},
          args.json, " ".join(map(str, out)))
    return EXIT_OK


def cmd_decompose(args) -> int:
    g = read_graph(args.file)
    s = _vertex_list(args.s, g.n)
    if len(set(s)) != len(s):
        raise DomainError("repeated vertex in S")
    d = decompose(g, s, args.h)
    _emit({"command": "decompose", "h": args.h, "decomposition": d.to_dict()}, True)
    return EXIT_OK


def _oracle_result(g1, g2, cap):
    if max(g1.n, g2.n) > cap:
        raise InstanceTooLarge(f"oracle refuses n={max(g1.n, g2.n)} above cap {cap}")
    phi = brute_force_iso(g1, g2)
    return {"verdict": "iso" if phi is not None else "non-iso",
            "witness": list(phi) if phi is not None else None}


def cmd_iso(args) -> int:
    from .fpt import isomorphic_k3h_free

    g1, g2 = read_graph(args.file1), read_graph(args.file2)
    h = _h_from(args)
    strategy = args.strategy
    if strategy == "auto":
        connected = is_3_connected(g1) and is_3_connected(g2)
        strategy = "fpt" if connected and h is not None else "oracle"
    if strategy == "fpt":
        if h is None:
            raise DomainError("strategy fpt needs --h or --genus")
        res = isomorphic_k3h_free(g1, g2, h)
        payload = {"verdict": res.verdict, "witness": list(res.witness) if res.witness else None,
                   "stats": res.stats}
    else:
        payload = _oracle_result(g1, g2, args.max_n)
    if payload["witness"] is not None and not is_isomorphism(g1, g2, payload["witness"]):
        raise RuntimeError("witness failed verification")
    _emit({"command": "iso", "strategy": strategy, "h": h, **payload}, args.json,
          payload["verdict"])
    return EXIT_OK if payload["verdict"] == "iso" else EXIT_NO


def _shipped_corpus() -> Path:
    return Path(str(resources.files("k3hiso") / "data" / "corpus_small.json"))


def cmd_verify(args) -> int:
    path = Path(args.manifest) if args.manifest else _shipped_corpus()
    if not path.exists():
        raise FileNotFoundError(str(path))
    try:
        corpus = load_corpus(path)
    except (KeyError, TypeError, json.JSONDecodeError) as exc:
        raise FormatError(f"bad corpus manifest: {exc}") from None
    report = run_corpus(corpus, engine=args.strategy, h=args.h if args.h is not None else 7)
    if args.json:
        _emit({"command": "verify", "manifest": path.name, "ok": report.ok, **report.to_dict()}, True)
    else:
        print(report.table())
    return EXIT_OK if report.ok else EXIT_NO


# --- argument parsing -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    # global flags are accepted before or after the subcommand
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="machine-readable output")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS,
                        help="seed for randomized steps")
    common.add_argument("--timeout", type=float, default=argparse.SUPPRESS,
                        help="wall-clock limit in seconds")
    p = argparse.ArgumentParser(prog="k3hiso", description=__doc__.splitlines()[0],
                                parents=[common])
    sub = p.add_subparsers(dest="command", required=True)

    w = sub.add_parser("wl", parents=[common], help="stable coloring classes")
    w.add_argument("file")
    w.add_argument("--k", type=int, choices=(1, 2), default=1)
    w.add_argument("--seed-colors", help="JSON list with one initial color per vertex")
    w.set_defaults(func=cmd_wl)

    c = sub.add_parser("closure", parents=[common], help="(t,k) closure of a vertex set")
    c.add_argument("file")
    c.add_argument("--x", default="", help="comma-separated vertex ids")
    c.add_argument("--t", type=int, default=2)
    c.add_argument("--k", type=int, default=2)
    c.set_defaults(func=cmd_closure)

    d = sub.add_parser("decompose", parents=[common], help="anchored tree decomposition as JSON")
    d.add_argument("file")
    d.add_argument("--s", required=True, help="comma-separated anchor set")
    d.add_argument("--h", type=int, required=True)
    d.set_defaults(func=cmd_decompose)

    i = sub.add_parser("iso", parents=[common], help="decide isomorphism of two graphs")
    i.add_argument("file1")
    i.add_argument("file2")
    i.add_argument("--h", type=int)
    i.add_argument("--genus", type=int)
    i.add_argument("--strategy", choices=("fpt", "oracle", "auto"), default="auto")
    i.add_argument("--max-n", type=int, default=DEFAULT_ORACLE_CAP,
                   help="largest graph the brute-force oracle accepts")
    i.set_defaults(func=cmd_iso)

    v = sub.add_parser("verify", parents=[common], help="run a corpus manifest against the oracle")
    v.add_argument("manifest", nargs="?", help="defaults to the shipped small corpus")
    v.add_argument("--h", type=int)
    v.add_argument("--strategy", choices=("fpt", "oracle"), default="fpt")
    v.set_defaults(func=cmd_verify)
    return p


def _on_alarm(signum, frame):
    raise _Timeout()


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    # the flag actions are shared with the subparsers, so fallbacks are applied here
    for name, value in (("json", False), ("seed", 0), ("timeout", None)):
        if not hasattr(args, name):
            setattr(args, name, value)
    if args.timeout:
        signal.signal(signal.SIGALRM, _on_alarm)
        signal.setitimer(signal.ITIMER_REAL, args.timeout)
    try:
        return args.func(args)
    except MinorEvidence as exc:
        _emit({"command": args.command, "verdict": "minor-evidence", "evidence": exc.to_dict()},
              args.json, f"minor-evidence: {exc}")
        return EXIT_MINOR
    except (PreconditionError, InstanceTooLarge, DecompositionError) as exc:
        _emit({"command": args.command, "error": "precondition", "message": str(exc)},
              args.json, f"precondition: {exc}")
        return EXIT_PRECONDITION
    except (FormatError, DomainError, FileNotFoundError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except _Timeout:
        print("error: timed out", file=sys.stderr)
        return EXIT_PRECONDITION
    finally:
        if args.timeout:
            signal.setitimer(signal.ITIMER_REAL, 0)


if __name__ == "__main__":
    sys.exit(main())
