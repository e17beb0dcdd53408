"""Command-line interface.

``verify`` runs scenarios and writes reports; ``eval`` computes one value.
Complex literals use the grammar ``RE(+|-)IMi`` with decimal floats
(e.g. ``0.3-0.12i``); a bare real is accepted.  Exit code 0 means every
report passed, 1 means at least one failed, 2 means the invocation or
configuration was unusable.
"""

from __future__ import annotations

import argparse
import re
import sys

from .config import Config, load_config
from .errors import EllSelbergError
from .integrand import c_constant, j_closed, psi
from .invariants import BalancingMode, ParameterSet, coefficient_c, fundamental_invariant
from .qseries import Nomes, elliptic_gamma, theta
from .report import write_report
from .sampling import sample_da_parameters, sample_parameters
from . import scenarios as scn

_FLOAT = r"[+-]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?"
_COMPLEX = re.compile(rf"^({_FLOAT})(?:([+-](?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?)i)?$")


def parse_complex(text: str) -> complex:
    """Parse ``RE(+|-)IMi`` (bare real accepted); raises ValueError otherwise."""
    m = _COMPLEX.match(text.strip())
    if not m:
        raise ValueError(
            f"bad complex literal {text!r}: expected RE(+|-)IMi, e.g. 0.3-0.12i"
        )
    re_part = float(m.group(1))
    im_part = float(m.group(2)) if m.group(2) else 0.0
    return complex(re_part, im_part)


def format_complex(z: complex) -> str:
    """Inverse of parse_complex; shortest float form that round-trips."""
    z = complex(z)
    if z.imag == 0.0:
        return repr(z.real)
    im = repr(z.imag)
    if not im.startswith("-"):
        im = "+" + im
    return f"{z.real!r}{im}i"


def _complex_arg(text: str) -> complex:
    try:
        return parse_complex(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _complex_list(text: str) -> tuple[complex, ...]:
    try:
        return tuple(parse_complex(part) for part in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


_MODES = {"pq": BalancingMode.PQ, "p": BalancingMode.P, "one": BalancingMode.ONE}


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="ellselberg",
        description="Verify BC_n elliptic Selberg integral identities numerically.",
    )
    sub = top.add_subparsers(dest="command", required=True)

    ver = sub.add_parser("verify", help="run verification scenarios")
    ver.add_argument("--scenario", choices=scn.SCENARIO_NAMES, help="restrict to one scenario")
    ver.add_argument("--config", help="key = value config file")
    ver.add_argument("--n", type=int, help="rank (number of integration variables)")
    ver.add_argument("--p", type=_complex_arg, help="first nome")
    ver.add_argument("--q", type=_complex_arg, help="second nome")
    ver.add_argument("--t", type=_complex_arg, help="coupling parameter")
    ver.add_argument("--a", type=_complex_list, metavar="C,C,...",
                     help="free parameters (solved entry appended unless --a6 given)")
    ver.add_argument("--a6", type=_complex_arg, help="explicit final parameter")
    ver.add_argument("--balancing", choices=sorted(_MODES), help="balancing mode")
    ver.add_argument("--grid", type=int, help="quadrature budget (max points per axis)")
    ver.add_argument("--tol", type=float, help="verdict tolerance")
    ver.add_argument("--seed", type=int, help="sampling seed")
    ver.add_argument("--count", type=int, help="sampled parameter sets per scenario row")
    ver.add_argument("--timing", choices=("on", "off"),
                     help="record runtime_ms (off keeps reports byte-identical)")
    ver.add_argument("--report", help="write the report array to this path")
    ver.add_argument("--format", choices=("json", "csv"), default="json")

    ev = sub.add_parser("eval", help="evaluate a single quantity")
    target = ev.add_subparsers(dest="target", required=True)

    def common(p, nomes=True, params=False, policy=True):
        if nomes:
            p.add_argument("--p", type=_complex_arg, required=True)
            p.add_argument("--q", type=_complex_arg, required=True)
        if params:
            p.add_argument("--n", type=int, required=True)
            p.add_argument("--t", type=_complex_arg, required=True)
            p.add_argument("--a", type=_complex_list, required=True, metavar="C,C,...")
            p.add_argument("--a6", type=_complex_arg)
            p.add_argument("--balancing", choices=sorted(_MODES), default="pq")
        if policy:
            p.add_argument("--tail-tol", type=float, default=None)
            p.add_argument("--max-terms", type=int, default=None)

    g = target.add_parser("gamma", help="elliptic gamma Gamma(u; p, q)")
    g.add_argument("--u", type=_complex_arg, required=True)
    common(g)

    th = target.add_parser("theta", help="theta(u; p)")
    th.add_argument("--u", type=_complex_arg, required=True)
    th.add_argument("--p", type=_complex_arg, required=True)
    common(th, nomes=False)

    ps = target.add_parser("psi", help="integrand Psi at a point z")
    ps.add_argument("--z", type=_complex_list, required=True, metavar="C,C,...")
    common(ps, params=True)

    ei = target.add_parser("E", help="fundamental invariant E_r(a, b; z)")
    ei.add_argument("--r", type=int, required=True)
    ei.add_argument("--a", type=_complex_arg, required=True)
    ei.add_argument("--b", type=_complex_arg, required=True)
    ei.add_argument("--z", type=_complex_list, required=True, metavar="C,C,...")
    ei.add_argument("--t", type=_complex_arg, required=True)
    ei.add_argument("--p", type=_complex_arg, required=True)
    common(ei, nomes=False)

    ci = target.add_parser("C", help="recurrence coefficient C_r (ONE balancing)")
    ci.add_argument("--r", type=int, required=True)
    common(ci, params=True)

    jj = target.add_parser("J", help="closed-form product J")
    common(jj, params=True)

    cn = target.add_parser("c_n", help="evaluation constant c_n")
    cn.add_argument("--n", type=int, required=True)
    cn.add_argument("--t", type=_complex_arg, required=True)
    common(cn)

    return top


def _build_config(args) -> Config:
    cfg = Config()
    if getattr(args, "config", None):
        cfg = load_config(args.config, cfg)
    overrides = {}
    for key in ("seed", "count", "tol", "grid"):
        val = getattr(args, key, None)
        if val is not None:
            overrides[key] = val
    if getattr(args, "timing", None) is not None:
        overrides["timing"] = args.timing == "on"
    if overrides:
        from dataclasses import replace

        cfg = replace(cfg, **overrides)
    return cfg


def _parameter_set(args, nomes: Nomes, mode: BalancingMode) -> ParameterSet:
    a = list(args.a)
    if args.a6 is not None:
        a.append(args.a6)
    if len(a) == 5:
        return ParameterSet.solved(args.n, args.t, a, nomes, mode)
    if len(a) == 6:
        return ParameterSet(
            args.n, args.t, tuple(a), balancing_mode=mode
        ).validate(nomes)
    raise EllSelbergError(
        f"expected 5 free parameters (plus optional --a6), got {len(a)}"
    )


def _default_tol(name: str, n: int) -> float:
    table = scn._SUITE_TOL
    return table.get((name, min(n, 2)), table.get((name, 1), 1e-6))


def _explicit_reports(args, cfg: Config) -> list:
    """One explicit parameter set; sweep the scenario's natural indices."""
    name = args.scenario
    nomes = Nomes(args.p, args.q)
    policy = cfg.policy()
    kw = dict(budget=cfg.grid, policy=policy, timing=cfg.timing)
    tol = cfg.tol if cfg.tol is not None else _default_tol(name, args.n or 1)
    if name == "dixon_anderson":
        a = list(args.a) + ([args.a6] if args.a6 is not None else [])
        n = args.n
        if len(a) == 2 * n + 3:
            prod = 1.0 + 0.0j
            for v in a:
                prod *= v
            a.append(nomes.pq / prod)
        return [scn.scenario_dixon_anderson(n, tuple(a), nomes, tol, **kw)]
    mode = _MODES[args.balancing] if args.balancing else {
        "eval_formula": BalancingMode.PQ,
        "qde": BalancingMode.PQ,
        "recurrence": BalancingMode.ONE,
        "recurrence_telescope": BalancingMode.ONE,
        "nabla": BalancingMode.ONE,
        "pinch": BalancingMode.PQ,
    }[name]
    ps = _parameter_set(args, nomes, mode)
    n = ps.n
    if name == "eval_formula":
        return [scn.scenario_eval_formula(n, ps, nomes, tol, **kw)]
    if name == "qde":
        return [scn.scenario_qde(n, k, ps, nomes, tol, **kw) for k in range(1, 6)]
    if name == "recurrence":
        return [
            scn.scenario_recurrence(n, r, ps, nomes, tol, **kw)
            for r in range(1, n + 1)
        ]
    if name == "recurrence_telescope":
        return [scn.scenario_recurrence_telescope(n, ps, nomes, tol, **kw)]
    if name == "nabla":
        return [
            scn.scenario_nabla(n, r, i, ps, nomes, tol, **kw)
            for r in range(1, n + 1)
            for i in range(1, n + 1)
        ]
    if name == "pinch":
        pinched = scn.make_pinched(ps, nomes)
        reports = [scn.scenario_pinch(pinched, nomes, tol, check="limit", **kw)]
        if n == 1:
            reports.append(
                scn.scenario_pinch(pinched, nomes, tol, check="integral", **kw)
            )
            reports.append(
                scn.scenario_pinch(
                    scn.make_continued(ps, nomes), nomes, tol, check="continued", **kw
                )
            )
        return reports
    raise EllSelbergError(f"unknown scenario {name!r}")


def _sampled_reports(args, cfg: Config) -> list:
    """Sample at user-supplied nomes, then sweep like the default suite."""
    name = args.scenario
    nomes = Nomes(args.p, args.q)
    n = args.n if args.n is not None else 1
    policy = cfg.policy()
    count = cfg.count if cfg.count is not None else 1
    kw = dict(budget=cfg.grid, policy=policy, timing=cfg.timing)
    tol = cfg.tol if cfg.tol is not None else _default_tol(name, n)
    box = cfg.box()
    reports = []
    if name == "dixon_anderson":
        for idx, a in enumerate(
            sample_da_parameters(n, nomes, cfg.seed, count, box=box)
        ):
            reports.append(
                scn.scenario_dixon_anderson(n, a, nomes, tol, seed_index=idx, **kw)
            )
        return reports
    mode = _MODES[args.balancing] if args.balancing else None
    if name in ("recurrence", "recurrence_telescope", "nabla"):
        mode = mode or BalancingMode.ONE
    else:
        mode = mode or BalancingMode.PQ
    predicate = scn._qde_predicate(nomes) if (name, mode) == ("qde", BalancingMode.PQ) else None
    t = args.t
    sets = sample_parameters(
        mode, n, nomes, cfg.seed, count, t=t, box=box, predicate=predicate
    )
    for idx, ps in enumerate(sets):
        if name == "eval_formula":
            reports.append(
                scn.scenario_eval_formula(n, ps, nomes, tol, seed_index=idx, **kw)
            )
        elif name == "qde":
            for k in range(1, 6):
                reports.append(
                    scn.scenario_qde(n, k, ps, nomes, tol, seed_index=idx, **kw)
                )
        elif name == "recurrence":
            for r in range(1, n + 1):
                reports.append(
                    scn.scenario_recurrence(n, r, ps, nomes, tol, seed_index=idx, **kw)
                )
        elif name == "recurrence_telescope":
            reports.append(
                scn.scenario_recurrence_telescope(
                    n, ps, nomes, tol, seed_index=idx, **kw
                )
            )
        elif name == "nabla":
            for r in range(1, n + 1):
                for i in range(1, n + 1):
                    reports.append(
                        scn.scenario_nabla(
                            n, r, i, ps, nomes, tol, seed_index=idx, **kw
                        )
                    )
        elif name == "pinch":
            pinched = scn.make_pinched(ps, nomes)
            reports.append(
                scn.scenario_pinch(
                    pinched, nomes, tol, check="limit", seed_index=idx, **kw
                )
            )
            if n == 1:
                reports.append(
                    scn.scenario_pinch(
                        pinched, nomes, tol, check="integral", seed_index=idx, **kw
                    )
                )
                reports.append(
                    scn.scenario_pinch(
                        scn.make_continued(ps, nomes), nomes, tol,
                        check="continued", seed_index=idx, **kw
                    )
                )
    return reports


def _print_reports(reports) -> None:
    for rep in reports:
        verdict = "PASS" if rep.passed else "FAIL"
        indices = "".join(
            f" {label}={val}"
            for label, val in (("k", rep.k), ("r", rep.r), ("i", rep.i))
            if val is not None
        )
        line = (
            f"{verdict} {rep.scenario} n={rep.n} seed={rep.seed_index}{indices} "
            f"rel_err={rep.rel_err:.3e} tol={rep.tol:.1e}"
        )
        if rep.detail and not rep.passed:
            line += f"  [{rep.detail}]"
        print(line)
    passed = sum(1 for rep in reports if rep.passed)
    print(f"{len(reports)} reports, {passed} passed, {len(reports) - passed} failed")


def _cmd_verify(args) -> int:
    cfg = _build_config(args)
    if args.a is not None:
        if args.scenario is None:
            print("--a requires --scenario", file=sys.stderr)
            return 2
        for flag in ("n", "p", "q"):
            if getattr(args, flag) is None:
                print(f"explicit runs require --{flag}", file=sys.stderr)
                return 2
        if args.t is None and args.scenario != "dixon_anderson":
            print("explicit runs require --t", file=sys.stderr)
            return 2
        reports = _explicit_reports(args, cfg)
    elif args.p is not None or args.q is not None:
        if args.scenario is None or args.p is None or args.q is None:
            print("sampled runs require --scenario, --p and --q", file=sys.stderr)
            return 2
        reports = _sampled_reports(args, cfg)
    else:
        reports = scn.run_suite(
            seed=cfg.seed,
            scenario=args.scenario,
            count=cfg.count,
            tol=cfg.tol,
            grid=cfg.grid,
            timing=cfg.timing,
            policy=cfg.policy(),
        )
    _print_reports(reports)
    if args.report:
        write_report(reports, args.report, args.format)
        print(f"wrote {args.format} report to {args.report}")
    return 0 if all(rep.passed for rep in reports) else 1


def _eval_policy(args):
    from .qseries import TruncationPolicy

    tail = getattr(args, "tail_tol", None)
    terms = getattr(args, "max_terms", None)
    if tail is None and terms is None:
        return None
    base = TruncationPolicy()
    return TruncationPolicy(
        tail_tol=tail if tail is not None else base.tail_tol,
        max_terms=terms if terms is not None else base.max_terms,
    )


def _cmd_eval(args) -> int:
    policy = _eval_policy(args)
    if args.target == "gamma":
        value = elliptic_gamma(args.u, Nomes(args.p, args.q), policy)
    elif args.target == "theta":
        value = theta(args.u, args.p, policy)
    elif args.target == "E":
        value = fundamental_invariant(
            args.r, args.a, args.b, list(args.z), args.t, args.p, policy
        )
    elif args.target == "c_n":
        value = c_constant(args.n, Nomes(args.p, args.q), args.t, policy)
    else:
        nomes = Nomes(args.p, args.q)
        ps = _parameter_set(args, nomes, _MODES[args.balancing])
        if args.target == "psi":
            if len(args.z) != ps.n:
                raise EllSelbergError(f"psi needs n={ps.n} z-values, got {len(args.z)}")
            value = psi(list(args.z), ps, nomes, policy)
        elif args.target == "C":
            value = coefficient_c(args.r, ps, nomes, policy)
        elif args.target == "J":
            value = j_closed(ps, nomes, policy)
        else:
            raise EllSelbergError(f"unknown eval target {args.target!r}")
    print(format_complex(complex(value)))
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "verify":
            return _cmd_verify(args)
        return _cmd_eval(args)
    except EllSelbergError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
