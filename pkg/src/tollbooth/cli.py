"""Command-line front end.

Exit codes: 0 success, 1 negative verdict, 2 parse or usage error,
3 network not series-parallel, 4 invalid flow or length request,
5 self-verification failure, 6 enumeration guard hit.

Primary output goes to stdout and is byte-for-byte reproducible; the run
report (including wall time) goes to stderr.
"""

from __future__ import annotations

import argparse
import hashlib
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import (
    CapExceeded,
    InfeasibleFlow,
    InvalidNetwork,
    LengthTooSmall,
    NoUsedPath,
    NotOptimalFlow,
    NotSeriesParallel,
    ParseError,
    PathExplosion,
)
from .flows import (
    Flow,
    build_l_instance,
    compute_equilibrium,
    compute_social_optimum,
    shortest_distances,
    social_cost,
    verify_opt_inducing,
    verify_social_optimum,
)
from .gadgets import PartitionInput, VcInput, gen_partition_gadget, gen_random_sp, gen_vc_gadget
from .instance import (
    Instance,
    fmt_fraction,
    fmt_length,
    format_flow,
    format_instance,
    format_tolls,
    parse_instance,
    parse_rational,
    parse_tolls,
)
from .mintb import INF, format_lists, solve_mintb
from .oracle import FREE, brute_force_mintb

EXIT_FALSE, EXIT_PARSE, EXIT_NOT_SP, EXIT_FLOW, EXIT_INTERNAL, EXIT_GUARD = 1, 2, 3, 4, 5, 6


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


@dataclass
class RunReport:
    command: str
    digest: str = "-"
    support: int | None = None
    induced_length: str | None = None
    wall_time: float = 0.0
    verdicts: dict[str, bool] = field(default_factory=dict)

    def lines(self) -> list[str]:
        out = [f"# command: {self.command}", f"# instance-sha256: {self.digest}"]
        if self.support is not None:
            out.append(f"# support: {self.support}")
        if self.induced_length is not None:
            out.append(f"# induced-length: {self.induced_length}")
        for name, ok in self.verdicts.items():
            out.append(f"# verdict {name}: {str(ok).lower()}")
        out.append(f"# wall-time: {self.wall_time:.3f}s")
        return out


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise CliError(str(exc), EXIT_PARSE) from None


def _load(path: str, report: RunReport) -> Instance:
    text = _read(path)
    report.digest = hashlib.sha256(text.encode()).hexdigest()[:16]
    return parse_instance(text)


def _demand(inst: Instance) -> Fraction:
    if inst.demand is None:
        raise CliError("instance has no demand", EXIT_FLOW)
    return inst.demand


def _optimal_flow(inst: Instance, compute: bool) -> Flow:
    if compute:
        return compute_social_optimum(inst.network, inst.latencies, _demand(inst))
    if inst.flow is None:
        raise CliError("instance has no flow annotation; pass --compute-optimum", EXIT_FLOW)
    return inst.flow


def _target(token: str | None):
    if token is None or token == "free":
        return FREE
    if token == "inf":
        return INF
    try:
        return parse_rational(token)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_PARSE) from None


def cmd_solve(args, out, report: RunReport) -> int:
    inst = _load(args.instance, report)
    inst.network.check_solver_input()
    flow = _optimal_flow(inst, args.compute_optimum)
    target = None if args.induce is None else _target(args.induce)
    if target is INF:
        raise CliError("cannot induce an infinite length", EXIT_FLOW)
    sol = solve_mintb(inst.network, inst.latencies, _demand(inst), flow,
                      check_optimal=not args.skip_optimality_check, target=target)
    ok = verify_opt_inducing(inst.network, inst.latencies, _demand(inst), flow, sol.tolls)
    report.verdicts["opt-inducing"] = ok
    report.support = sol.support
    report.induced_length = fmt_fraction(sol.induced_length)
    if not ok:
        raise CliError("internal error: computed tolls do not induce the optimal flow", EXIT_INTERNAL)
    lines = format_tolls(sol.tolls, sol.induced_length)
    if args.trace:
        lines.extend(format_lists(sol.tree, sol.lists))
    out.write("\n".join(lines) + "\n")
    return 0


def cmd_verify(args, out, report: RunReport) -> int:
    inst = _load(args.instance, report)
    flow = _optimal_flow(inst, args.compute_optimum)
    lines = []
    if args.tolls is None:
        ok = verify_social_optimum(inst.network, inst.latencies, flow)
        report.verdicts["social-optimum"] = ok
        lines.append(f"optimal {str(ok).lower()}")
    else:
        tolls, _ = parse_tolls(_read(args.tolls))
        unknown = [e for e in tolls.tolls if e not in inst.network]
        if unknown:
            raise ParseError(f"tolls on unknown edges {unknown}")
        ok = verify_opt_inducing(inst.network, inst.latencies, _demand(inst), flow, tolls)
        report.verdicts["opt-inducing"] = ok
        report.support = tolls.size
        lines.append(f"support {tolls.size}")
        lines.append(f"opt-inducing {str(ok).lower()}")
    lines.append(f"verdict {str(ok).lower()}")
    out.write("\n".join(lines) + "\n")
    return 0 if ok else EXIT_FALSE


def cmd_oracle(args, out, report: RunReport) -> int:
    inst = _load(args.instance, report)
    inst.network.check_solver_input()
    flow = _optimal_flow(inst, args.compute_optimum)
    if not args.skip_optimality_check and not verify_social_optimum(inst.network, inst.latencies, flow):
        raise NotOptimalFlow("flow is not a social optimum")
    linstance = build_l_instance(inst.network, inst.latencies, flow)
    target = _target(args.target_length)
    found = brute_force_mintb(linstance, args.max_support, target=target, max_checks=args.max_checks)
    if found is None:
        bound = "any size" if args.max_support is None else f"at most {args.max_support} edges"
        out.write(f"infeasible with {bound}\n")
        return EXIT_FALSE
    k, tolls = found
    lines = [] if tolls is None else [f"toll {e} {fmt_fraction(tolls[e])}" for e in tolls.support]
    lines.append(f"support {k}")
    if target is INF:
        lines.append("induced-length inf")
    else:
        costs = {e.id: linstance.lengths[e.id] + tolls[e.id] for e in inst.network.edges}
        induced = shortest_distances(inst.network, costs)[inst.network.sink]
        lines.append(f"induced-length {fmt_length(induced)}")
        ok = verify_opt_inducing(inst.network, inst.latencies, _demand(inst), flow, tolls)
        report.verdicts["opt-inducing"] = ok
        if target is FREE and not ok:
            raise CliError("internal error: oracle witness does not induce the flow", EXIT_INTERNAL)
    report.support = k
    out.write("\n".join(lines) + "\n")
    return 0


def _read_vc_graph(text: str) -> VcInput:
    n = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        tok = raw.split("#", 1)[0].split()
        if not tok:
            continue
        try:
            if tok[0] == "vertices" and len(tok) == 2:
                n = int(tok[1])
            elif len(tok) == 2:
                edges.append((int(tok[0]), int(tok[1])))
            else:
                raise ValueError("expected '<u> <v>' or 'vertices <n>'")
        except ValueError as exc:
            raise ParseError(str(exc), lineno) from None
    if n is None:
        n = max((max(e) for e in edges), default=0)
    try:
        return VcInput(n, tuple(edges))
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def cmd_gen(args, out, report: RunReport) -> int:
    if args.kind == "vc":
        vc = _read_vc_graph(_read(args.graph))
        g = gen_vc_gadget(vc)
        comments = [f"vertex-cover gadget: {vc.n} vertices, {vc.m} edges"]
    elif args.kind == "partition":
        try:
            alphas = tuple(parse_rational(x) for x in args.set.split(","))
            p = PartitionInput(alphas)
        except ValueError as exc:
            raise CliError(str(exc), EXIT_PARSE) from None
        g = gen_partition_gadget(p)
        comments = ["partition gadget: " + ",".join(fmt_fraction(a) for a in p.alphas)]
    else:
        g = gen_random_sp(args.seed, args.edges, args.coeff_bound)
        g.flow = compute_social_optimum(g.network, g.latencies, g.demand)
        comments = [f"random series-parallel: seed {args.seed}, {args.edges} edges"]
    names = {eid: name for name, eid in g.names.items()}
    comments += [f"edge {eid} = {names[eid]}" for eid in sorted(names)]
    out.write(format_instance(Instance(g.network, g.latencies, g.demand, g.flow), comments))
    return 0


def cmd_optflow(args, out, report: RunReport) -> int:
    inst = _load(args.instance, report)
    inst.network.check_solver_input()
    solver = compute_equilibrium if args.equilibrium else compute_social_optimum
    flow = solver(inst.network, inst.latencies, _demand(inst))
    lines = format_flow(flow)
    lines.append(f"demand {fmt_fraction(flow.demand)}")
    lines.append(f"social-cost {fmt_fraction(social_cost(inst.network, inst.latencies, flow))}")
    out.write("\n".join(lines) + "\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--trace", action="store_true", default=argparse.SUPPRESS,
                        help="dump every parse-tree node's edge-length list")
    common.add_argument("--format", choices=["text"], default=argparse.SUPPRESS)

    parser = argparse.ArgumentParser(prog="tollbooth", parents=[common],
                                     description="Minimum-support optimal tolls on series-parallel networks.")
    sub = parser.add_subparsers(dest="command", required=True)

    def instance_cmd(name, help_):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.add_argument("instance", help="instance file, or - for stdin")
        p.add_argument("--compute-optimum", action="store_true",
                       help="ignore flow annotations and route the social optimum")
        return p

    p = instance_cmd("solve", "minimum-support opt-inducing tolls")
    p.add_argument("--induce", metavar="P/Q", help="target length (default: longest used path)")
    p.add_argument("--skip-optimality-check", action="store_true")
    p.set_defaults(func=cmd_solve)

    p = instance_cmd("verify", "check flow optimality, or a toll file against the flow")
    p.add_argument("--tolls", metavar="FILE")
    p.set_defaults(func=cmd_verify)

    p = instance_cmd("oracle", "brute-force minimum support (small instances)")
    p.add_argument("--max-support", type=int, metavar="K")
    p.add_argument("--target-length", metavar="P/Q|inf|free", default="free")
    p.add_argument("--max-checks", type=int, default=10**6)
    p.add_argument("--skip-optimality-check", action="store_true")
    p.set_defaults(func=cmd_oracle)

    p = instance_cmd("optflow", "exact social optimum (or equilibrium) flow")
    p.add_argument("--equilibrium", action="store_true")
    p.set_defaults(func=cmd_optflow)

    gen = sub.add_parser("gen", parents=[common], help="generate instances")
    gsub = gen.add_subparsers(dest="kind", required=True)
    g = gsub.add_parser("vc", parents=[common])
    g.add_argument("--graph", required=True, help="edge list: '<u> <v>' per line, optional 'vertices <n>'")
    g = gsub.add_parser("partition", parents=[common])
    g.add_argument("--set", required=True, help="comma-separated positive rationals")
    g = gsub.add_parser("random", parents=[common])
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("--edges", type=int, required=True)
    g.add_argument("--coeff-bound", type=int, default=5)
    gen.set_defaults(func=cmd_gen)
    return parser


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    args = build_parser().parse_args(argv)
    args.trace = getattr(args, "trace", False)
    report = RunReport(args.command if args.command != "gen" else f"gen {args.kind}")
    start = time.perf_counter()
    code = 0
    try:
        code = args.func(args, stdout, report)
    except CliError as exc:
        print(f"error: {exc}", file=stderr)
        code = exc.code
    except ParseError as exc:
        print(f"parse error: {exc}", file=stderr)
        code = EXIT_PARSE
    except NotSeriesParallel as exc:
        print(f"error: {exc}", file=stderr)
        code = EXIT_NOT_SP
    except (InfeasibleFlow, NotOptimalFlow, LengthTooSmall, NoUsedPath, InvalidNetwork) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=stderr)
        code = EXIT_FLOW
    except (CapExceeded, PathExplosion) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=stderr)
        code = EXIT_GUARD
    report.wall_time = time.perf_counter() - start
    print("\n".join(report.lines()), file=stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
