"""Command-line front end: evaluators, identity verification, bound reports.

Exit codes: 0 when every ASSERT check passes, 1 on any ASSERT failure,
2 on usage or precondition errors.  Report files are written atomically
and are byte-identical for a fixed (command, seed, block size), regardless
of the parallelism width (CHARSUM_THREADS or --threads).
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass

from . import bounds, reports
from .bounds import BoundConfig
from .characters import conductor, enumerate_characters, unit_group_basis
from .integers import factor
from .sums import restricted_sum, shifted_prime_sum
from .util import PreconditionError, WorkBudgetError

log = logging.getLogger("charsum")


@dataclass(frozen=True)
class RunConfig:
    """Resolved invocation settings.  The seed and block size fully
    determine every sampled choice and reduction shape, so two runs with
    the same RunConfig produce byte-identical report files."""

    command: str
    bounds: BoundConfig
    seed: int
    block_size: int | None
    output_path: str | None
    format: str
    threads: int | None
    timings: bool

    def header(self) -> dict:
        # thread width deliberately excluded: it must not influence output
        return {
            "command": self.command,
            "seed": self.seed,
            "block_size": self.block_size,
            "format": self.format,
            "delta": self.bounds.delta,
        }


def run_config(args, command: str) -> RunConfig:
    return RunConfig(
        command=command,
        bounds=BoundConfig(delta=getattr(args, "delta", 1e-4)),
        seed=getattr(args, "seed", 0),
        block_size=getattr(args, "block_size", None),
        output_path=getattr(args, "output", None),
        format=getattr(args, "format", "jsonl"),
        threads=getattr(args, "threads", None),
        timings=bool(getattr(args, "timings", False)),
    )


def _add_output_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--output", help="report file path (default: stdout)")
    p.add_argument("--format", choices=("jsonl", "csv"), default="jsonl")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=None,
                   help="parallelism width (default: CHARSUM_THREADS or 1)")
    p.add_argument("--block-size", type=int, default=None)
    p.add_argument("--timings", action="store_true",
                   help="include measured runtimes (breaks byte-identical reruns)")
    p.add_argument("--delta", type=float, default=1e-4)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="charsum",
        description="Exact character-sum evaluation and bound verification.",
    )
    top = parser.add_subparsers(dest="command", required=True)

    p_factor = top.add_parser("factor", help="factor an integer")
    p_factor.add_argument("n", type=int)

    p_chars = top.add_parser("chars", help="character inspection")
    chars_sub = p_chars.add_subparsers(dest="subcommand", required=True)
    p_list = chars_sub.add_parser("list", help="list characters mod D")
    p_list.add_argument("--D", type=int, required=True)
    p_cond = chars_sub.add_parser("conductor", help="conductor of one character")
    p_cond.add_argument("--D", type=int, required=True)
    p_cond.add_argument("--exponents", required=True, help="comma-separated exponent vector")

    p_sum = top.add_parser("sum", help="evaluate one sum")
    sum_sub = p_sum.add_subparsers(dest="subcommand", required=True)
    p_t = sum_sub.add_parser("T", help="shifted-prime sum")
    p_t.add_argument("--D", type=int, required=True)
    p_t.add_argument("--l", type=int, required=True)
    p_t.add_argument("--x", type=int, required=True)
    p_t.add_argument("--chi-index", type=int, default=None)
    p_r = sum_sub.add_parser("restricted", help="restricted shifted-prime sum")
    p_r.add_argument("--q", type=int, required=True)
    p_r.add_argument("--nu", type=int, required=True)
    p_r.add_argument("--l", type=int, required=True)
    p_r.add_argument("--x", type=int, required=True)
    p_r.add_argument("--chi-index", type=int, default=None)

    p_verify = top.add_parser("verify", help="ASSERT suites")
    verify_sub = p_verify.add_subparsers(dest="subcommand", required=True)
    p_ident = verify_sub.add_parser("identities", help="exact identities and explicit bounds")
    p_ident.add_argument("--max-D", type=int, default=500)
    p_ident.add_argument("--gauss-max-q", type=int, default=200)
    p_ident.add_argument("--hb-cases", type=int, default=50)
    p_ident.add_argument("--coprime-max", type=int, default=1000)
    p_ident.add_argument("--recombination-cases", type=int, default=20)
    _add_output_options(p_ident)
    p_l8 = verify_sub.add_parser("lemma8", help="congruence census sub-bounds")
    p_l8.add_argument("--instances", help="JSONL file of instance parameter dicts")
    p_l8.add_argument("--random", type=int, default=0, help="number of seeded instances")
    p_l8.add_argument("--q-max", type=int, default=5000)
    _add_output_options(p_l8)

    p_report = top.add_parser("report", help="MONITOR ratio reports")
    report_sub = p_report.add_subparsers(dest="subcommand", required=True)
    p_th = report_sub.add_parser("theorem", help="main-sum ratios per modulus")
    p_th.add_argument("--D-list", help="comma-separated moduli")
    p_th.add_argument("--D", type=int, default=None, help="single modulus")
    p_th.add_argument("--eps", type=float, default=0.05)
    _add_output_options(p_th)
    p_bu = report_sub.add_parser("burgess", help="window-moment ratios over primes")
    p_bu.add_argument("--q-max", type=int, default=300)
    p_bu.add_argument("--Z", type=int, default=20)
    p_bu.add_argument("--r", type=int, default=2)
    _add_output_options(p_bu)
    p_dm = report_sub.add_parser("divisor-moments", help="tau_r^k moment ratios")
    p_dm.add_argument("--x-max", type=int, default=10**5)
    _add_output_options(p_dm)
    p_sm = report_sub.add_parser("smooth", help="smooth-count envelope ratios")
    _add_output_options(p_sm)
    p_tail = report_sub.add_parser("tail", help="big-divisor tail ratios")
    p_tail.add_argument("--q", type=int, default=None)
    p_tail.add_argument("--D", type=int, default=None)
    _add_output_options(p_tail)
    p_restr = report_sub.add_parser("restricted", help="restricted-sum envelope ratios")
    p_restr.add_argument("--D", type=int, required=True)
    p_restr.add_argument("--x", type=int, required=True)
    _add_output_options(p_restr)
    p_ss = report_sub.add_parser("shortsums", help="short-window envelope ratios")
    _add_output_options(p_ss)
    p_ds = report_sub.add_parser("doublesums", help="bilinear-sum envelope ratios")
    _add_output_options(p_ds)
    p_cn = report_sub.add_parser("constants", help="fitted envelope constants")
    p_cn.add_argument("--q-max", type=int, default=1000)
    _add_output_options(p_cn)

    return parser


def _emit(records, config: RunConfig, extra_header: dict) -> int:
    header = config.header() | extra_header
    data = reports.render_records(records, config.format, header, include_timings=config.timings)
    if config.output_path:
        reports.write_atomic(config.output_path, data)
    else:
        sys.stdout.buffer.write(data)
    return 1 if reports.any_assert_failure(records) else 0


def _nonprincipal(D: int, chi_index):
    basis = unit_group_basis(D)
    cs = list(enumerate_characters(basis))
    if chi_index is not None:
        if not 0 <= chi_index < len(cs):
            raise PreconditionError("chi-index", f"need 0 <= index < {len(cs)}")
        return [(chi_index, cs[chi_index])]
    return [(i, c) for i, c in enumerate(cs) if not c.is_principal]


def _cmd_factor(args) -> int:
    f = factor(args.n)
    pretty = " * ".join(f"{p}^{a}" if a > 1 else str(p) for p, a in f.factors) or "1"
    print(f"{f.value} = {pretty}")
    return 0


def _cmd_chars(args) -> int:
    if args.subcommand == "list":
        basis = unit_group_basis(args.D)
        for i, chi in enumerate(enumerate_characters(basis)):
            blob = chi.to_json_dict() | {
                "index": i,
                "conductor": conductor(chi).value,
                "principal": chi.is_principal,
            }
            print(json.dumps(blob, sort_keys=True))
        return 0
    exponents = tuple(int(v) for v in args.exponents.split(",") if v != "")
    basis = unit_group_basis(args.D)
    from .characters import DirichletCharacter

    chi = DirichletCharacter(basis, exponents)
    print(conductor(chi).value)
    return 0


def _cmd_sum(args) -> int:
    if args.subcommand == "T":
        for i, chi in _nonprincipal(args.D, args.chi_index):
            val = shifted_prime_sum(chi, args.l, args.x, threads=args_threads(args))
            print(
                f"chi_index={i} exponents={list(chi.exponents)} "
                f"T={val.value.real!r}{val.value.imag:+}j abs={abs(val.value)!r} "
                f"terms={val.term_count}"
            )
        return 0
    for i, chi in _nonprincipal(args.q, args.chi_index):
        val = restricted_sum(chi, args.nu, args.l, args.x, threads=args_threads(args))
        print(
            f"chi_index={i} exponents={list(chi.exponents)} "
            f"T_nu={val.value.real!r}{val.value.imag:+}j abs={abs(val.value)!r} "
            f"terms={val.term_count}"
        )
    return 0


def args_threads(args):
    return getattr(args, "threads", None)


def _cmd_verify(args) -> int:
    if args.subcommand == "identities":
        config = run_config(args, "verify identities")
        force_fail = os.environ.get("CHARSUM_TEST_FORCE_ASSERT_FAIL", "") == "1"
        records = bounds.identities_verify(
            max_D=args.max_D,
            gauss_max_q=args.gauss_max_q,
            hb_cases=args.hb_cases,
            coprime_max=args.coprime_max,
            recombination_cases=args.recombination_cases,
            seed=config.seed,
            force_fail=force_fail,
        )
        extra = {
            "max_D": args.max_D,
            "gauss_max_q": args.gauss_max_q,
            "hb_cases": args.hb_cases,
            "coprime_max": args.coprime_max,
            "recombination_cases": args.recombination_cases,
        }
        return _emit(records, config, extra)
    config = run_config(args, "verify lemma8")
    instances = None
    if args.instances:
        instances = []
        with open(args.instances, "r", encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                d = json.loads(line)
                instances.append((d["q"], d["d"], d["eta"], d["k"], d["M"], d["N"], d["Y"]))
    elif args.random <= 0:
        raise PreconditionError("instances", "need --instances FILE or --random N > 0")
    records = bounds.lemma8_verify(
        instances, random_count=args.random, seed=config.seed, q_max=args.q_max,
        delta=config.bounds.delta,
    )
    extra = {"random": args.random, "q_max": args.q_max, "instances_file": bool(args.instances)}
    return _emit(records, config, extra)


def _cmd_report(args) -> int:
    sub = args.subcommand
    config = run_config(args, f"report {sub}")
    if sub == "theorem":
        if (args.D_list is None) == (args.D is None):
            raise PreconditionError("D", "give exactly one of --D-list or --D")
        d_list = [args.D] if args.D is not None else [
            int(v) for v in args.D_list.split(",") if v != ""
        ]
        records = bounds.theorem_report(
            d_list, epsilon=args.eps, seed=config.seed, threads=config.threads
        )
        extra = {"D_list": d_list, "eps": args.eps}
    elif sub == "burgess":
        records = bounds.burgess_report(args.q_max, args.Z, args.r, config.bounds.delta)
        extra = {"q_max": args.q_max, "Z": args.Z, "r": args.r}
    elif sub == "divisor-moments":
        grid = tuple(x for x in (100, 1000, 10**4, 10**5) if x <= args.x_max)
        records = bounds.divisor_moment_report(x_grid=grid)
        extra = {"x_max": args.x_max}
    elif sub == "smooth":
        records = bounds.smooth_report()
        extra = {}
    elif sub == "tail":
        if (args.q is None) != (args.D is None):
            raise PreconditionError("q,D", "give both --q and --D, or neither")
        pairs = ((args.q, args.D),) if args.q is not None else None
        records = bounds.tail_report(pairs) if pairs else bounds.tail_report()
        extra = {"pairs": list(pairs) if pairs else "default"}
    elif sub == "restricted":
        records = bounds.restricted_report(args.D, args.x, seed=config.seed)
        extra = {"D": args.D, "x": args.x}
    elif sub == "shortsums":
        records = bounds.short_sum_report(seed=config.seed, config=config.bounds)
        extra = {}
    elif sub == "doublesums":
        records = bounds.double_sum_report(seed=config.seed, config=config.bounds)
        extra = {}
    else:
        records = bounds.constants_report(args.q_max)
        extra = {"q_max": args.q_max}
    return _emit(records, config, extra)


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, stream=sys.stderr, format="%(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors and 0 on --help; pass both through
        return int(exc.code or 0)
    try:
        if args.command == "factor":
            return _cmd_factor(args)
        if args.command == "chars":
            return _cmd_chars(args)
        if args.command == "sum":
            return _cmd_sum(args)
        if args.command == "verify":
            return _cmd_verify(args)
        return _cmd_report(args)
    except PreconditionError as exc:
        print(f"charsum: {exc}", file=sys.stderr)
        return 2
    except WorkBudgetError as exc:
        print(f"charsum: work budget exceeded: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
