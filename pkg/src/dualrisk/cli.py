"""Command-line surface: evaluate, compare, generate, verify, reproduce.

Subcommands:
  eval        value and moment report for a lottery file
  dominance   degree-m dominance check between two lottery files
  pairgen     write a block-construction pair (two lottery files + provenance)
  verify      randomized runs of the six characterization statements
  paper-repro deterministic CSVs with the worked-example numbers
  selfprotect solve a self-protection problem from a config file

Rationals print as p/q next to a 12-significant-digit decimal; CSV cells
hold the p/q form unquoted. Exit codes: 0 success, 1 verification or
dominance-gate failure, 2 usage/parse/validation errors. The default
output directory comes from DUALRISK_OUTDIR when set.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction

from . import applications, harness
from .apportionment import make_blocks, make_pair, make_parsimonious_pair
from .dominance import dual_sd_check, primal_sd_check
from .errors import DomainError, DualRiskError, InputValidationError
from .lottery import (
    EqualProbLottery,
    canonical_distribution,
    equal_prob_from_lottery,
    format_lottery_text,
    make_lottery,
    mean,
    parse_lottery_text,
)
from .rationals import format_exact, parse_rational
from .valuation import QuadraticUtility, dt_value, dual_moment, eu_value, primal_moment
from .weighting import DualPower, Quadratic, eval_h_prime, parse_weighting


@dataclass(frozen=True)
class RunConfig:
    seed: int
    trials: int
    grid_count: int
    output: str
    format: str

    def __post_init__(self):
        if self.trials < 1:
            raise DomainError(f"trials must be >= 1, got {self.trials}")
        if self.grid_count < 8:
            raise DomainError(f"grid_count must be >= 8, got {self.grid_count}")
        if self.format not in ("csv", "table"):
            raise DomainError(f"format must be csv or table, got {self.format!r}")


def _default_outdir() -> str:
    return os.environ.get("DUALRISK_OUTDIR", ".")


def _config_from(args) -> RunConfig:
    return RunConfig(
        seed=getattr(args, "seed", 42),
        trials=getattr(args, "trials", 1),
        grid_count=getattr(args, "grid_count", 256),
        output=getattr(args, "outdir", None) or _default_outdir(),
        format=getattr(args, "format", "table"),
    )


def _cell(value) -> str:
    """Exact cell text: p/q for rationals, 12 significant digits for floats."""
    if isinstance(value, float):
        return f"{value:.12g}"
    if isinstance(value, (int, Fraction)):
        return format_exact(value)
    return str(value)


def _decimal(value) -> str:
    return f"{float(value):.12g}"


def _emit_rows(header: tuple[str, ...], rows: list[tuple], fmt: str, out=None) -> str:
    out = out if out is not None else sys.stdout
    if fmt == "csv":
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
    else:
        table = [header] + [tuple(str(c) for c in row) for row in rows]
        widths = [max(len(row[i]) for row in table) for i in range(len(header))]
        for row in table:
            out.write("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() + "\n")
    return ""


def _read_text(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise DomainError(f"cannot read {path}: {exc.strerror}") from None


def _load_lottery(path: str):
    return parse_lottery_text(_read_text(path), source=path)


# ---------------------------------------------------------------------------
# eval


def cmd_eval(args) -> int:
    cfg = _config_from(args)
    lot = _load_lottery(args.lottery)
    w = parse_weighting(args.weighting)
    value = dt_value(lot, w)
    rows: list[tuple] = [("value", _cell(value), _decimal(value))]
    rows.append(("mean", _cell(mean(lot)), _decimal(mean(lot))))
    for m in range(1, 5):
        dm = dual_moment(lot, m)
        rows.append((f"dual_moment_{m}", _cell(dm), _decimal(dm)))
    for k in range(2, 5):
        cm = primal_moment(lot, k)
        rows.append((f"central_moment_{k}", _cell(cm), _decimal(cm)))
    _emit_rows(("quantity", "exact", "decimal"), rows, cfg.format)
    return 0


# ---------------------------------------------------------------------------
# dominance


def cmd_dominance(args) -> int:
    cfg = _config_from(args)
    a = _load_lottery(args.lottery_a)
    b = _load_lottery(args.lottery_b)
    if args.kind == "dual":
        if args.ekern:
            raise DomainError("--ekern applies to primal checks only")
        report = dual_sd_check(a, b, args.degree)
    else:
        report = primal_sd_check(a, b, args.degree, ekern=args.ekern)
    rows = [
        ("kind", report.kind),
        ("degree", str(report.degree)),
        ("holds", "true" if report.holds else "false"),
        ("failed_condition", report.failed_condition or "-"),
        ("witness", _cell(report.witness) if report.witness is not None else "-"),
    ]
    _emit_rows(("field", "value"), rows, cfg.format)
    return 0


# ---------------------------------------------------------------------------
# pairgen


def _resolve_base(args, m: int) -> EqualProbLottery:
    if args.base is not None:
        if os.path.exists(args.base):
            return equal_prob_from_lottery(parse_lottery_text(_read_text(args.base), source=args.base))
        outcomes = tuple(parse_rational(tok) for tok in args.base.split(","))
        return EqualProbLottery(len(outcomes), outcomes)
    if args.random:
        import random

        rng = random.Random(args.seed * 1000003 + m)
        return harness.random_base(rng, m, args.n)
    raise DomainError("pairgen needs --base OUTCOMES|FILE or --random")


def cmd_pairgen(args) -> int:
    cfg = _config_from(args)
    m = args.order
    base = _resolve_base(args, m)
    big_m = args.M if args.M is not None else 2 ** (m + 1)
    if big_m < 1:
        raise DomainError(f"M must be >= 1, got {big_m}")
    if args.parsimonious:
        j = args.j if args.j is not None else 0
        pair = make_parsimonious_pair(
            base.outcomes, j, m, big_m, seed=args.seed if args.random else None
        )
    else:
        if args.j is not None:
            raise DomainError("--j positions the parsimonious bold block; add --parsimonious")
        delta = Fraction(1, big_m)
        good, bad = make_blocks(m, base.n, delta)
        pair = make_pair(base, good, bad, 1, 2, seed=args.seed if args.random else None)
    os.makedirs(cfg.output, exist_ok=True)
    prefix = args.prefix or f"order{m}"
    written = []
    for tag, member in (("c", pair.c), ("d", pair.d)):
        path = os.path.join(cfg.output, f"{prefix}_{tag}.txt")
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(format_lottery_text(member.to_lottery()))
        written.append(path)
    prov_path = os.path.join(cfg.output, f"{prefix}_provenance.json")
    with open(prov_path, "w", encoding="utf-8") as fh:
        fh.write(pair.provenance.to_json() + "\n")
    written.append(prov_path)
    for path in written:
        print(path)
    return 0


# ---------------------------------------------------------------------------
# verify


def cmd_verify(args) -> int:
    cfg = _config_from(args)
    reports = harness.run_theorem(args.theorem, cfg.trials, cfg.seed, cfg.grid_count)
    failed = False
    all_failures = []
    for rep in reports:
        status = "PASS" if rep.passed else "FAIL"
        print(
            f"theorem {rep.theorem} ({rep.kind}, order {rep.order}): "
            f"trials={rep.trials} failures={len(rep.failures)} {status}"
        )
        if not rep.passed:
            failed = True
            all_failures.append(
                {"order": rep.order, "kind": rep.kind, "failures": list(rep.failures)}
            )
    if failed:
        os.makedirs(cfg.output, exist_ok=True)
        replay = os.path.join(cfg.output, f"theorem{args.theorem}_failures.json")
        with open(replay, "w", encoding="utf-8") as fh:
            json.dump({"theorem": args.theorem, "seed": cfg.seed, "reports": all_failures}, fh, indent=2)
            fh.write("\n")
        print(f"replay records: {replay}", file=sys.stderr)
        return 1
    return 0


# ---------------------------------------------------------------------------
# paper-repro


def _sec22_rows() -> list[tuple]:
    a = make_lottery([(0, Fraction(1, 6)), (3, Fraction(5, 6))])
    b = make_lottery([(1, Fraction(1, 6)), (2, Fraction(1, 2)), (4, Fraction(1, 3))])
    rows: list[tuple] = [
        ("outcomes", "0 3", "1 2 4", ""),
        ("probabilities", "1/6 5/6", "1/6 1/2 1/3", ""),
        ("mean", _cell(mean(a)), _cell(mean(b)), ""),
        ("variance", _cell(primal_moment(a, 2)), _cell(primal_moment(b, 2)), ""),
        ("dual_moment_2", _cell(dual_moment(a, 2)), _cell(dual_moment(b, 2)), ""),
    ]
    u = QuadraticUtility(Fraction(1, 8))
    rows.append(("eu_quadratic_c_1/8", _cell(eu_value(a, u)), _cell(eu_value(b, u)), ""))
    for beta in (Fraction(0), Fraction(1, 4), Fraction(1, 2), Fraction(1)):
        w = Quadratic(beta)
        va, vb = dt_value(a, w), dt_value(b, w)
        rows.append((f"value_quadratic_beta_{format_exact(beta)}", _cell(va), _cell(vb), _cell(va - vb)))
    return rows


_SEC3_CASES = ((2, (1, 2), 4), (3, (1, 2, 4), 6), (4, (1, 2, 4, 7), 4))


def _sec3_rows() -> list[tuple]:
    rows: list[tuple] = []
    for m, outcomes, big_m in _SEC3_CASES:
        base = EqualProbLottery(len(outcomes), tuple(Fraction(x) for x in outcomes))
        good, bad = make_blocks(m, base.n, Fraction(1, big_m))
        pair = make_pair(base, good, bad, 1, 2)
        c, d = pair.c, pair.d

        def put(name, fc, fd):
            rows.append((str(m), name, _cell(fc), _cell(fd)))

        rows.append((str(m), "base_outcomes", " ".join(map(format_exact, base.outcomes)), ""))
        rows.append((str(m), "M", str(big_m), ""))
        put("outcomes", " ".join(map(format_exact, c.outcomes)), " ".join(map(format_exact, d.outcomes)))
        put("mean", mean(c), mean(d))
        put("variance", primal_moment(c, 2), primal_moment(d, 2))
        if m >= 3:
            put("central_moment_3", primal_moment(c, 3), primal_moment(d, 3))
            put("dual_moment_2", dual_moment(c, 2), dual_moment(d, 2))
        if m >= 4:
            put("central_moment_4", primal_moment(c, 4), primal_moment(d, 4))
            put("dual_moment_3", dual_moment(c, 3), dual_moment(d, 3))
    return rows


_SEC4_STOCKS = {
    2: EqualProbLottery(2, (Fraction(1), Fraction(3))),
    3: EqualProbLottery(4, (Fraction(1), Fraction(3), Fraction(5), Fraction(7))),
    4: EqualProbLottery(8, tuple(Fraction(x) for x in range(1, 16, 2))),
}


def _sec4_rows() -> list[tuple]:
    rows: list[tuple] = []
    for m, stock in _SEC4_STOCKS.items():
        menu = applications.build_menu(m, stock)
        prices = applications.supplemented_prices(stock, menu)
        s0 = mean(stock)
        pp = applications.PortfolioProblem(Fraction(1), Fraction(0), s0, stock)
        w = DualPower(m)
        v_plain = applications.portfolio_value(pp, None, w)
        v_supp = applications.portfolio_value(pp, menu, w)

        def put(name, value):
            rows.append((str(m), name, _cell(value)))

        put("stock", " ".join(map(format_exact, stock.outcomes)))
        put("payoffs", " ".join(format_exact(menu.payoff(s)) for s in stock.outcomes))
        put("premium", menu.premium(stock))
        put("portfolio_states", " ".join(map(format_exact, prices.outcomes)))
        support = canonical_distribution(prices.to_lottery())
        put("portfolio_support", " ".join(format_exact(x) for x, _ in support.states))
        put("s0", s0)
        put(f"value_plain_dualpower_{m}", v_plain)
        put(f"value_supplemented_dualpower_{m}", v_supp)
        put("value_gain", v_supp - v_plain)
        put("dominance_holds", "true" if dual_sd_check(stock, prices, m) else "false")
    return rows


def _sec5_rows() -> list[tuple]:
    import warnings

    rows: list[tuple] = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        w = DualPower(3)
        model = applications.calibrate_power_law(Fraction(4, 5), Fraction(1, 2), w, Fraction(1))
        sp = applications.SelfProtectionProblem(
            Fraction(4), Fraction(1), Fraction(1, 8), model, (Fraction(0), Fraction(1, 5))
        )
        rep = applications.sp_background_effect(sp, w)

        def put(instance, name, value):
            rows.append((instance, name, _cell(value)))

        put("calibrated_powerlaw", "effort_model", f"powerlaw:p0=4/5,c={model.c},gamma=1/2")
        put("calibrated_powerlaw", "e_with_background", rep.e_with)
        put("calibrated_powerlaw", "e_without_background", rep.e_without)
        put("calibrated_powerlaw", "direction", rep.direction)
        put("calibrated_powerlaw", "p_at_opt", rep.p_at_opt)
        put("calibrated_powerlaw", "h_prime_1/4", eval_h_prime(w, Fraction(1, 4)))
        put("calibrated_powerlaw", "h_prime_1/2", eval_h_prime(w, Fraction(1, 2)))
        put("calibrated_powerlaw", "h_prime_3/4", eval_h_prime(w, Fraction(3, 4)))
        put("calibrated_powerlaw", "shift_at_half", rep.shift_at_half)
        put("calibrated_powerlaw", "shift_at_opt", rep.shift_at_opt)

        from .weighting import Polynomial

        wrev = Polynomial((Fraction(0), Fraction(3, 2), Fraction(0), Fraction(-1, 2)))
        exp_model = applications.calibrate_exponential(Fraction(3, 5), wrev, Fraction(1))
        sprev = applications.SelfProtectionProblem(
            Fraction(4), Fraction(1), Fraction(1, 8), exp_model, (Fraction(0), Fraction(1))
        )
        reprev = applications.sp_background_effect(sprev, wrev)
        put("reverse_cubic", "effort_model", f"exponential:p0=3/5,k={exp_model.k}")
        put("reverse_cubic", "e_with_background", reprev.e_with)
        put("reverse_cubic", "e_without_background", reprev.e_without)
        put("reverse_cubic", "direction", reprev.direction)
        put("reverse_cubic", "shift_at_half", reprev.shift_at_half)

        import math

        from .weighting import Identity

        exp2 = applications.ExponentialEffort(Fraction(3, 5), Fraction(2))
        spi = applications.SelfProtectionProblem(
            Fraction(4), Fraction(1), Fraction(0), exp2, (Fraction(0), Fraction(1))
        )
        soli = applications.sp_solve(spi, Identity())
        closed = math.log(float(exp2.p0) * float(exp2.k)) / float(exp2.k)
        put("identity_exponential", "e_star", soli.e_star)
        put("identity_exponential", "closed_form", closed)
        put("identity_exponential", "abs_gap", abs(soli.e_star - closed))

        kink = applications.LinearEffort(
            Fraction(4, 5), Fraction(2), p_min=Fraction(1, 10), p_max=Fraction(99, 100)
        )
        spk = applications.SelfProtectionProblem(
            Fraction(4), Fraction(1), Fraction(0), kink, (Fraction(0), Fraction(1, 2))
        )
        solk = applications.sp_solve(spk, Identity())
        put("linear_kink", "e_star", solk.e_star)
        put("linear_kink", "kink_point", Fraction(7, 20))
    return rows


def cmd_paper_repro(args) -> int:
    cfg = _config_from(args)
    os.makedirs(cfg.output, exist_ok=True)
    sections = (
        ("sec22.csv", ("quantity", "lottery_a", "lottery_b", "gap"), _sec22_rows()),
        ("sec3.csv", ("order", "quantity", "c", "d"), _sec3_rows()),
        ("sec4.csv", ("order", "quantity", "value"), _sec4_rows()),
        ("sec5.csv", ("instance", "quantity", "value"), _sec5_rows()),
    )
    for name, header, rows in sections:
        path = os.path.join(cfg.output, name)
        buffer = io.StringIO()
        _emit_rows(header, rows, "csv", out=buffer)
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(buffer.getvalue())
        print(path)
    return 0


# ---------------------------------------------------------------------------
# selfprotect


def cmd_selfprotect(args) -> int:
    cfg = _config_from(args)
    sp, w = applications.parse_problem_config(_read_text(args.config), source=args.config)
    sol = applications.sp_solve(sp, w, cfg.grid_count)
    rows: list[tuple] = [
        ("e_star", _cell(sol.e_star)),
        ("value", _cell(sol.value)),
        ("p_at_opt", _cell(sol.diagnostics.p_at_opt)),
        ("interior", "true" if sol.diagnostics.interior else "false"),
        ("at_bound", sol.diagnostics.at_bound or "-"),
        ("concave_on_grid", "true" if sol.diagnostics.concave_on_grid else "false"),
        ("foc_sign_change", "true" if sol.diagnostics.foc_sign_change else "false"),
    ]
    if sp.epsilon > 0:
        rep = applications.sp_background_effect(sp, w)
        rows += [
            ("e_without_background", _cell(rep.e_without)),
            ("background_direction", rep.direction),
            ("shift_at_half", _cell(rep.shift_at_half)),
            ("shift_at_opt", _cell(rep.shift_at_opt)),
        ]
    _emit_rows(("quantity", "value"), rows, cfg.format)
    return 0


# ---------------------------------------------------------------------------
# parser plumbing


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dualrisk",
        description="Dual-theory lottery evaluation, dominance, and pair construction.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="value and moment report for a lottery file")
    p.add_argument("lottery", help="lottery file (one '<outcome> <probability>' per line)")
    p.add_argument("--weighting", default="identity", help="weighting spec, e.g. quadratic:beta=1")
    p.add_argument("--format", choices=("csv", "table"), default="table")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("dominance", help="stochastic dominance check between two lottery files")
    p.add_argument("lottery_a")
    p.add_argument("lottery_b")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--kind", choices=("primal", "dual"), default="dual")
    p.add_argument("--ekern", action="store_true", help="equal raw moments variant of the primal check")
    p.add_argument("--format", choices=("csv", "table"), default="table")
    p.set_defaults(func=cmd_dominance)

    p = sub.add_parser("pairgen", help="write a C/D pair and its provenance record")
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--base", help="base lottery: file path or comma-separated outcomes (1,2,4)")
    p.add_argument("--random", action="store_true", help="draw a random base lottery")
    p.add_argument("--n", type=int, default=None, help="state count for --random bases")
    p.add_argument("--M", type=int, default=None, help="block amplitude denominator (default 2^(order+1))")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--parsimonious", action="store_true", help="keep C = base; bold block at --j")
    p.add_argument("--j", type=int, default=None, help="states strictly before the bold block")
    p.add_argument("--prefix", default=None, help="output file prefix (default order<m>)")
    p.add_argument("--outdir", default=None)
    p.set_defaults(func=cmd_pairgen)

    p = sub.add_parser("verify", help="randomized checks of the characterization statements")
    p.add_argument("--theorem", type=int, required=True, choices=range(1, 7))
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--grid-count", dest="grid_count", type=int, default=256)
    p.add_argument("--outdir", default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("paper-repro", help="write the worked-example CSVs")
    p.add_argument("--outdir", default=None)
    p.set_defaults(func=cmd_paper_repro)

    p = sub.add_parser("selfprotect", help="solve a self-protection problem from a config file")
    p.add_argument("config", help="key = value problem file")
    p.add_argument("--grid-count", dest="grid_count", type=int, default=256)
    p.add_argument("--format", choices=("csv", "table"), default="table")
    p.set_defaults(func=cmd_selfprotect)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except InputValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except DualRiskError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
