"""Command-line front end.

Every subcommand prints one JSON document on stdout and exits 0.
Failures print ``{"error": code, "detail": ...}`` on stderr and exit 1
for input errors or 2 for budget/tolerance failures.  Output is
deterministic: identical inputs and flags give byte-identical bytes.
``--human`` adds an indented rendering on stderr without touching the
stdout JSON.
"""

import argparse
import json
import os
import sys

from . import catalog, kz
from .diagram import (braid_closure, diagram_to_text, load_diagram,
                      mirror, parse_braid, writhe)
from .errors import (BudgetExceeded, IndexOutOfRange, InvalidParams,
                     MalformedSyntax, SingularityTooClose, StepUnderflow,
                     TooManyCrossings, WilsonKnotError)
from .jones import jones, kauffman_bracket
from .moves import (apply_r3, r1_removal_sites, r2_removal_sites,
                    r3_sites, remove_r1, remove_r2)
from .rewrite import SearchConfig, normalize
from .word import encode

# errors of resource/precision kind exit 2; everything else is input (1)
_RESOURCE_ERRORS = (BudgetExceeded, SingularityTooClose, StepUnderflow,
                    TooManyCrossings)


class _Parser(argparse.ArgumentParser):
    """argparse that reports problems as JSON instead of exiting itself."""

    def error(self, message):
        raise MalformedSyntax(message)


def _emit(obj, human=False):
    sys.stdout.write(json.dumps(obj, sort_keys=True,
                                separators=(",", ":")) + "\n")
    if human:
        sys.stderr.write(json.dumps(obj, sort_keys=True, indent=2) + "\n")


def _load(args):
    """Build a diagram from --pd (file path or literal text) or --braid."""
    if getattr(args, "pd", None) is not None:
        text = args.pd
        if os.path.exists(text):
            with open(text) as fh:
                text = fh.read()
        return load_diagram(text, unknots=args.unknots)
    if getattr(args, "braid", None) is not None:
        if args.strands is None:
            raise MalformedSyntax("--braid requires --strands")
        d = braid_closure(parse_braid(args.braid, args.strands))
        if args.unknots:
            d = load_diagram(json.dumps(d.to_json()), unknots=args.unknots)
        return d
    raise MalformedSyntax("need --pd or --braid")


def _encode_kwargs(args):
    kw = {}
    if getattr(args, "basepoint", None) is not None:
        parts = args.basepoint.split(",")
        vals = []
        for p in parts:
            p = p.strip()
            vals.append(int(p) if p.lstrip("-").isdigit() else p)
        if len(vals) == 1:
            kw["basepoint"] = vals[0]
        else:
            kw["basepoints"] = tuple(vals)
    if getattr(args, "ordering", None) is not None:
        kw["ordering"] = tuple(int(x) for x in args.ordering.split())
    return kw


def _add_diagram_flags(p):
    p.add_argument("--pd", help="PD text, PD file, or diagram JSON")
    p.add_argument("--braid", help="braid word, e.g. \"1 1 -2\"")
    p.add_argument("--strands", type=int)
    p.add_argument("--unknots", type=int, default=0,
                   help="extra split unknot components")
    p.add_argument("--mirror", action="store_true",
                   help="mirror the diagram before use")
    p.add_argument("--basepoint",
                   help="traversal start arc (comma list for links)")
    p.add_argument("--ordering", help="component order, e.g. \"2 1\"")


def _diagram(args):
    d = _load(args)
    if getattr(args, "mirror", False):
        d = mirror(d)
    return d


def _cmd_invariant(args):
    d = _diagram(args)
    word = encode(d, **_encode_kwargs(args))
    cfg = SearchConfig.from_env(unguarded=args.unguarded)
    nf, log = normalize(word, cfg)
    if args.trace:
        with open(args.trace, "w") as fh:
            for line in log.to_json_lines():
                fh.write(json.dumps(line, sort_keys=True,
                                    separators=(",", ":")) + "\n")
    _emit({"e": nf.e, "m": nf.m, "loops": len(nf.loops),
           "steps": len(log.steps)}, args.human)


def _cmd_jones(args):
    d = _diagram(args)
    _emit({"jones": jones(d).to_json(),
           "kauffman_bracket": kauffman_bracket(d).to_json(),
           "writhe": writhe(d)}, args.human)


def _cmd_kz(args):
    system = kz.build_system(args.N, args.k)
    mono = kz.monodromy(system, around=0, tol=args.tol)
    coupling = kz.r_matrix(args.N, args.k)
    det, tr, residual = kz.skein_coefficients(coupling.R)
    _emit({
        "system": system.to_json(),
        "monodromy": mono.to_json(),
        "r_matrix": coupling.to_json(),
        "skein": {"det": [det.real, det.imag], "tr": [tr.real, tr.imag],
                  "ch_residual": residual},
        "conformal_weight": str(kz.conformal_weight(args.N, args.k)),
    }, args.human)


def _cmd_table(args):
    table = catalog.load_table()
    if args.m is not None:
        entry = catalog.lookup_by_m(args.m, table)
        if entry is None:
            raise IndexOutOfRange("no table entry with m=%d" % args.m)
        _emit(entry.to_json(), args.human)
        return
    _emit({"entries": [e.to_json() for e in table],
           "consistency": catalog.prime_consistency_check(table)},
          args.human)


def _cmd_rmoves(args):
    d = _diagram(args)
    move = args.apply
    if move == 1:
        sites = r1_removal_sites(d)
        if not sites:
            raise InvalidParams("no removable R1 curl in diagram")
        out = remove_r1(d, sites[args.site])
    elif move == 2:
        sites = r2_removal_sites(d)
        if not sites:
            raise InvalidParams("no removable R2 poke in diagram")
        out = remove_r2(d, sites[args.site])
    elif move == 3:
        sites = r3_sites(d)
        if not sites:
            raise InvalidParams("no R3 slide site in diagram")
        out = apply_r3(d, sites[args.site])
    else:
        raise MalformedSyntax("--apply must be 1, 2 or 3")
    _emit({"pd": diagram_to_text(out),
           "crossings": len(out.crossings),
           "writhe": writhe(out),
           "sites": len(sites)}, args.human)


def _cmd_encode(args):
    d = _diagram(args)
    word = encode(d, **_encode_kwargs(args))
    _emit(word.to_json(), args.human)


def _build_parser():
    p = _Parser(prog="wilsonknot")
    sub = p.add_subparsers(dest="command", required=True)

    inv = sub.add_parser("invariant")
    _add_diagram_flags(inv)
    inv.add_argument("--trace", help="write the rewrite trace to this file")
    inv.add_argument("--unguarded", action="store_true",
                     help="also explore sign-reversed commutations")
    inv.set_defaults(fn=_cmd_invariant)

    jo = sub.add_parser("jones")
    _add_diagram_flags(jo)
    jo.set_defaults(fn=_cmd_jones)

    kzp = sub.add_parser("kz")
    kzp.add_argument("--N", type=int, required=True)
    kzp.add_argument("--k", type=int, required=True)
    kzp.add_argument("--tol", type=float, default=1e-10)
    kzp.set_defaults(fn=_cmd_kz)

    tab = sub.add_parser("table")
    tab.add_argument("--m", type=int)
    tab.set_defaults(fn=_cmd_table)

    rm = sub.add_parser("rmoves")
    _add_diagram_flags(rm)
    rm.add_argument("--apply", type=int, required=True, choices=(1, 2, 3))
    rm.add_argument("--site", type=int, default=0,
                    help="index into the enumerated applicable sites")
    rm.set_defaults(fn=_cmd_rmoves)

    enc = sub.add_parser("encode")
    _add_diagram_flags(enc)
    enc.set_defaults(fn=_cmd_encode)

    for name, spp in sub.choices.items():
        spp.add_argument("--human", action="store_true",
                         help="also pretty-print to stderr")
    return p


def run(argv=None):
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        args.fn(args)
    except WilsonKnotError as exc:
        sys.stderr.write(json.dumps(
            {"error": exc.code, "detail": exc.detail},
            sort_keys=True, separators=(",", ":")) + "\n")
        return 2 if isinstance(exc, _RESOURCE_ERRORS) else 1
    except (IndexError, ValueError) as exc:
        sys.stderr.write(json.dumps(
            {"error": "invalid-input", "detail": str(exc)},
            sort_keys=True, separators=(",", ":")) + "\n")
        return 1
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
