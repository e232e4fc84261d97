"""Command-line interface.

Verbs: verify, enumerate, count, poly, auto, moves-test, vassiliev.
Results go to stdout, diagnostics to stderr.  Exit codes: 0 success /
valid, 1 invalid input or property failure, 2 usage error, 3 resource
budget exceeded.  All output is byte-deterministic for fixed inputs,
flags, and seeds; --jobs is a worker-count hint that never changes the
output bytes.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import algebra, diagram, moves, present
from .algebra import (AxiomError, StructureError, StructureBundle,
                      builtin_bundle, format_table_text, parse_table_text,
                      automorphisms, BUILTIN_BUNDLES)
from .diagram import CodeError, parse_code, extract_relations, builtin_code
from .enumeration import (ResourceBudgetExceeded, enumerate_semiquandles,
                          enumerate_virtual_structures)
from .present import (PresentationError, MissingExtensionError,
                      parse_presentation, count_colorings, enhanced_invariant,
                      builtin as builtin_presentation)
from .vassiliev import distinguish

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3

# bundles the randomized move suite probes, in reporting order
TRIAL_BUNDLES = ("t4", "ca3_op", "ts3_v13", "t4_sing")


class UsageError(Exception):
    pass


class InvalidInput(Exception):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None


def _load_bundle(spec: str) -> StructureBundle:
    """A bundle from a table file path, or a builtin bundle name."""
    if spec in BUILTIN_BUNDLES:
        return builtin_bundle(spec)
    try:
        return parse_table_text(_read(spec))
    except (StructureError, AxiomError) as e:
        raise InvalidInput(f"{spec}: {e}") from None


def _load_presentation(args) -> "present.Presentation":
    """Presentation from --presentation, --code, or --builtin."""
    sources = [s for s in (args.presentation, args.code, args.builtin) if s]
    if len(sources) != 1:
        raise UsageError("give exactly one of --presentation, --code, --builtin")
    try:
        if args.presentation:
            return parse_presentation(_read(args.presentation))
        if args.code:
            return extract_relations(parse_code(_read(args.code)))
        try:
            return builtin_presentation(args.builtin)
        except KeyError:
            return extract_relations(builtin_code(args.builtin))
    except (PresentationError, CodeError) as e:
        raise InvalidInput(str(e)) from None
    except KeyError as e:
        raise UsageError(f"unknown builtin {args.builtin!r}") from None


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, indent=2, sort_keys=True) + "\n")


# ---------------------------------------------------------------------------
# verbs

def _cmd_verify(args) -> int:
    if bool(args.table) == bool(args.builtin):
        raise UsageError("give exactly one of --table, --builtin")
    spec = args.table or args.builtin
    try:
        bundle = _load_bundle(spec)
    except InvalidInput as e:
        cause = e.args[0]
        if args.json:
            _emit({"valid": False, "error": cause})
        else:
            sys.stdout.write(f"invalid: {cause}\n")
        return EXIT_INVALID
    parts = ["semiquandle"]
    if bundle.has_singular:
        parts.append("singular")
    if bundle.has_virtual:
        parts.append("virtual")
    if args.json:
        _emit({"valid": True, "n": bundle.n, "structure": parts})
    else:
        sys.stdout.write(f"valid {' '.join(parts)} of order {bundle.n}\n")
    return EXIT_OK


def _cmd_enumerate(args) -> int:
    if args.n is None:
        raise UsageError("enumerate requires --n")
    found = []
    kw = {} if args.budget is None else {"node_budget": args.budget}
    stream = enumerate_semiquandles(args.n, up_to_iso=args.iso, **kw)
    if args.json:
        for t in stream:
            found.append({"up": [list(r) for r in t.up],
                          "dn": [list(r) for r in t.dn]})
        _emit({"n": args.n, "up_to_iso": args.iso,
               "count": len(found), "tables": found})
        return EXIT_OK
    count = 0
    for t in stream:
        sys.stdout.write(format_table_text(StructureBundle(t)))
        sys.stdout.write("%\n")
        count += 1
    sys.stdout.write(f"count: {count}\n")
    return EXIT_OK


def _cmd_invariant(args, full: bool) -> int:
    if not args.table:
        raise UsageError("requires --table (file or builtin bundle name)")
    bundle = _load_bundle(args.table)
    pres = _load_presentation(args)
    try:
        if full:
            _emit(enhanced_invariant(pres, bundle).as_dict())
        else:
            _emit({"count": count_colorings(pres, bundle)})
    except MissingExtensionError as e:
        raise InvalidInput(str(e)) from None
    return EXIT_OK


def _cmd_auto(args) -> int:
    if not args.table:
        raise UsageError("auto requires --table (file or builtin bundle name)")
    bundle = _load_bundle(args.table)
    autos = automorphisms(bundle)
    classes = enumerate_virtual_structures(bundle, up_to_conjugacy=True)
    report = {"n": bundle.n,
              "automorphisms": [list(a) for a in autos],
              "conjugacy_class_representatives": [list(c) for c in classes]}
    if args.json:
        _emit(report)
    else:
        sys.stdout.write("automorphisms:\n")
        for a in autos:
            sys.stdout.write("  " + " ".join(str(x) for x in a) + "\n")
        sys.stdout.write("conjugacy class representatives:\n")
        for c in classes:
            sys.stdout.write("  " + " ".join(str(x) for x in c) + "\n")
    return EXIT_OK


def _cmd_moves_test(args) -> int:
    bundles = [(name, builtin_bundle(name)) for name in TRIAL_BUNDLES]
    report = moves.run_move_trials(bundles, trials=args.trials, seed=args.seed)
    ok = not report["failures"]
    if args.json:
        _emit(report)
    else:
        sys.stdout.write(f"trials: {report['trials']}\nseed: {report['seed']}\n")
        for move in sorted(report["per_move"]):
            sys.stdout.write(f"  {move}: {report['per_move'][move]}\n")
        sys.stdout.write(f"failures: {len(report['failures'])}\n")
        for f in report["failures"]:
            sys.stdout.write(f"  {f}\n")
    return EXIT_OK if ok else EXIT_INVALID


def _cmd_vassiliev(args) -> int:
    if not (args.k1 and args.k2):
        raise UsageError("vassiliev requires --k1 and --k2")
    try:
        k1 = parse_code(_read(args.k1))
        k2 = parse_code(_read(args.k2))
    except CodeError as e:
        raise InvalidInput(str(e)) from None
    probes = [_load_bundle(p) for p in (args.probes or [])]
    try:
        report = distinguish(k1, k2, probes)
    except (CodeError, MissingExtensionError) as e:
        raise InvalidInput(str(e)) from None
    _emit(report)
    return EXIT_OK


# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="semiquandles",
        description="Finite semiquandles: verification, enumeration, "
                    "coloring invariants, move testing, resolution sums.")
    sub = top.add_subparsers(dest="verb", required=True)

    def add(verb, help_):
        p = sub.add_parser(verb, help=help_)
        p.add_argument("--table", help="table file, or builtin bundle name")
        p.add_argument("--presentation", help="presentation file")
        p.add_argument("--code", help="pass code file")
        p.add_argument("--builtin", help="builtin presentation or code name")
        p.add_argument("--n", type=int, help="order to enumerate")
        p.add_argument("--iso", action="store_true",
                       help="one representative per isomorphism class")
        p.add_argument("--budget", type=int,
                       help="search-node budget for enumeration")
        p.add_argument("--trials", type=int, default=500)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--jobs", type=int, default=1,
                       help="worker hint; never changes output bytes")
        p.add_argument("--json", action="store_true")
        return p

    add("verify", "check table axioms")
    add("enumerate", "stream all semiquandles of an order")
    add("count", "counting invariant of a presentation over a bundle")
    add("poly", "enhanced polynomial invariant")
    add("auto", "automorphisms and conjugacy classes of a bundle")
    add("moves-test", "randomized move-invariance suite")
    pv = add("vassiliev", "compare resolution sums of two classical codes")
    pv.add_argument("--k1", help="first pass code file")
    pv.add_argument("--k2", help="second pass code file")
    pv.add_argument("--probes", nargs="*",
                    help="probe table files or builtin bundle names")
    return top


_VERBS = {
    "verify": _cmd_verify,
    "enumerate": _cmd_enumerate,
    "count": lambda a: _cmd_invariant(a, full=False),
    "poly": lambda a: _cmd_invariant(a, full=True),
    "auto": _cmd_auto,
    "moves-test": _cmd_moves_test,
    "vassiliev": _cmd_vassiliev,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _VERBS[args.verb](args)
    except UsageError as e:
        sys.stderr.write(f"usage error: {e}\n")
        return EXIT_USAGE
    except InvalidInput as e:
        sys.stderr.write(f"invalid input: {e}\n")
        return EXIT_INVALID
    except ResourceBudgetExceeded as e:
        sys.stderr.write(f"budget exceeded: {e}\n")
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
