"""Command line front end.

Subcommands cover recognition with certificates, interval realization,
obstruction enumeration, necessary-set computation and verification,
and trace analysis (property report, multiplicative refinement, the
chain and catalog conditions, reduced products).  Output is a single
machine-parsable block on stdout; diagnostics go to stderr.

Exit codes: 0 affirmative, 1 negative verdict with a witness, 2 input
error, 3 capability bound exceeded.
"""

import argparse
import sys
from itertools import combinations

from . import distributions as dist
from . import ultragraph as ug
from .errors import CapabilityError, InputError
from .graphs import format_graph, parse_graph
from .necessary import (
    format_necessary_set,
    minimal_necessary_sets,
    parse_necessary_set,
    verify_claims,
)
from .shapes import (
    INTERVAL,
    TREE,
    IntervalModel,
    format_interval_model,
    format_witness,
    minimal_obstructions,
    realize_intervals,
    recognize,
)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


def _read(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as err:
        raise InputError("cannot read %s: %s" % (path, err))


def build_parser():
    top = _Parser(prog="ugl", description=__doc__.splitlines()[0])
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("recognize", help="shape membership with certificate")
    p.add_argument("--shape", choices=(TREE, INTERVAL), required=True)
    p.add_argument("graphfile")

    p = sub.add_parser("realize", help="interval model or obstruction")
    p.add_argument("--distinct-endpoints", action="store_true")
    p.add_argument("graphfile")

    p = sub.add_parser("obstructions", help="minimal non-members up to a size")
    p.add_argument("--shape", choices=(TREE, INTERVAL), required=True)
    p.add_argument("--max-n", type=int, required=True)
    p.add_argument("--jobs", type=int, default=1)

    p = sub.add_parser("necessary", help="necessary edge sets of a host")
    p.add_argument("--shape", choices=(TREE, INTERVAL), required=True)
    p.add_argument("graphfile")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--verify", metavar="SETFILE")
    group.add_argument("--all-minimal", action="store_true")
    p.add_argument("--jobs", type=int, default=1)

    p = sub.add_parser("trace-check", help="trace property report")
    p.add_argument("tracefile")

    p = sub.add_parser("trace-refine", help="multiplicative refinement search")
    p.add_argument("tracefile")

    p = sub.add_parser("trace-condition", help="single trace conditions")
    p.add_argument("--sop2", action="store_true")
    p.add_argument("--shape", choices=(TREE, INTERVAL))
    p.add_argument("tracefile")

    p = sub.add_parser("ultragraph", help="reduced product report")
    p.add_argument("--extend-eta", action="store_true")
    p.add_argument("tracefile")
    return top


def _cmd_recognize(args, out):
    g = parse_graph(_read(args.graphfile))
    w = recognize(args.shape, g)
    if w is None:
        out.write("member\n")
        return 0
    out.write(format_witness(w))
    return 1


def _cmd_realize(args, out):
    g = parse_graph(_read(args.graphfile))
    got = realize_intervals(g, args.distinct_endpoints)
    if isinstance(got, IntervalModel):
        out.write(format_interval_model(got))
        return 0
    out.write(format_witness(got))
    return 1


def _cmd_obstructions(args, out):
    reps = minimal_obstructions(args.shape, args.max_n, jobs=args.jobs)
    for i, g in enumerate(reps):
        if i:
            out.write("\n")
        out.write(format_graph(g))
    return 0


def _cmd_necessary(args, out):
    g = parse_graph(_read(args.graphfile))
    if args.verify is not None:
        ns = parse_necessary_set(_read(args.verify))
        ok, verdicts, evidence = verify_claims(args.shape, g, ns,
                                               jobs=args.jobs)
        if ok:
            out.write(format_necessary_set(ns))
            return 0
        for flag in ("necessary", "submin", "mincard", "unique"):
            if verdicts.get(flag) is False:
                out.write("flag %s fail\n" % flag)
                _write_evidence(out, evidence.get(flag))
        return 1
    sets = minimal_necessary_sets(args.shape, g)
    if not sets:
        out.write("none\n")
        return 1
    for i, ns in enumerate(sets):
        if i:
            out.write("\n")
        out.write(format_necessary_set(ns))
    return 0


def _write_evidence(out, ev):
    if ev is None:
        return
    tag = ev[0]
    if tag == "completion":
        _, g, psi = ev
        out.write("completion\n")
        out.write(format_graph(g))
        out.write("psi " + " ".join(str(v) for v in psi) + "\n")
    elif tag == "redundant":
        out.write("redundant %d-%d\n" % ev[1])
    elif tag == "smaller":
        out.write("smaller " + " ".join("%d-%d" % p for p in ev[1]) + "\n")


def _report_sop2(t, out):
    got = dist.check_sop2_condition(t)
    if got is None:
        out.write("sop2 holds\n")
        return True
    quad, alpha = got
    out.write("sop2 fails %s at %d\n"
              % (" ".join(str(x) for x in quad), alpha))
    return False


def _report_necessary(t, shape, out):
    got = dist.check_necessary_conditions(t, shape)
    if got is None:
        out.write("necessary %s holds\n" % shape)
        return True
    token, placement, alpha = got
    out.write("necessary %s fails %s %s at %d\n"
              % (shape, token, " ".join(str(x) for x in placement), alpha))
    return False


def _cmd_trace_check(args, out):
    t = dist.parse_trace(_read(args.tracefile))
    bad_b, bad_p = dist.adequacy_report(t)
    ok = not bad_b and not bad_p
    out.write("adequate %s\n" % ("yes" if ok else "no"))
    for b in bad_b:
        out.write("inadequate-formula %d\n" % b)
    for p in bad_p:
        out.write("inadequate-pair %d-%d\n" % p)
    out.write("multiplicative %s\n"
              % ("yes" if dist.is_multiplicative_trace(t) else "no"))
    if not _report_sop2(t, out):
        ok = False
    for shape in (TREE, INTERVAL):
        if not _report_necessary(t, shape, out):
            ok = False
    return 0 if ok else 1


def _cmd_trace_refine(args, out):
    t = dist.parse_trace(_read(args.tracefile))
    r = dist.find_multiplicative_refinement(t)
    if r is None:
        out.write("none\n")
        return 1
    out.write(dist.format_trace(r))
    return 0


def _cmd_trace_condition(args, out):
    if not args.sop2 and args.shape is None:
        raise InputError("trace-condition needs --sop2 or --shape")
    t = dist.parse_trace(_read(args.tracefile))
    ok = True
    if args.sop2:
        ok = _report_sop2(t, out) and ok
    if args.shape is not None:
        ok = _report_necessary(t, args.shape, out) and ok
    return 0 if ok else 1


def _cmd_ultragraph(args, out):
    t = dist.parse_trace(_read(args.tracefile))
    rp = ug.build(t)
    ug.eta(t)
    out.write("core " + " ".join(str(a) for a in rp.core) + "\n")
    out.write("vertices %d\n" % rp.size)
    if rp.size <= 1000:
        vs = rp.vertices()
        count = sum(1 for a, b in combinations(vs, 2) if rp.has_edge(a, b))
        out.write("edges %d\n" % count)
    else:
        out.write("edges symbolic\n")
    witness = ug.eta_clique_witness(t)
    if witness is None:
        out.write("eta complete\n")
        complete = True
    else:
        out.write("eta incomplete %d %d at %d\n" % witness)
        complete = False
    if args.extend_eta:
        s = ug.eta_extension(t)
        if s is None:
            out.write("none\n")
            return 1
        out.write(ug.format_internal_set(s))
        return 0
    return 0 if complete else 1


_HANDLERS = {
    "recognize": _cmd_recognize,
    "realize": _cmd_realize,
    "obstructions": _cmd_obstructions,
    "necessary": _cmd_necessary,
    "trace-check": _cmd_trace_check,
    "trace-refine": _cmd_trace_refine,
    "trace-condition": _cmd_trace_condition,
    "ultragraph": _cmd_ultragraph,
}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _HANDLERS[args.command](args, sys.stdout)
    except CapabilityError as err:
        print("capability: %s" % err, file=sys.stderr)
        return 3
    except InputError as err:
        print("error: %s" % err, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
