"""Command-line interface.

Exit codes: 0 success (data EM-consistent), 2 E-feasible but EM-inconsistent,
3 E-infeasible, 4 input or validation error, 5 verification mismatch.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import analysis, closed_form, polyhedra
from .constraints import build_lp, event_functional
from .lp import Direction, solve
from .model import (
    ALL_EVENTS,
    AssumptionSet,
    DataDistribution,
    Event,
    ModelError,
    parse_data_distribution,
    parse_rational,
)

EXIT_OK = 0
EXIT_EM_INCONSISTENT = 2
EXIT_E_INFEASIBLE = 3
EXIT_INPUT = 4
EXIT_MISMATCH = 5

COMMANDS = ("check", "bounds", "content", "witness", "sample", "verify", "dual")


class UsageError(Exception):
    pass


@dataclass
class CliConfig:
    command: str
    input_path: Path | None = None
    assumptions: AssumptionSet = AssumptionSet.EM
    event: Event | None = None
    value: Fraction | None = None
    seed: int | None = None
    denominator: int | None = None
    count: int | None = None
    json: bool = False
    decimal: bool = False
    direction: Direction = Direction.MAX
    with_q: bool = False

    def validate(self):
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        needs_input = {"check", "bounds", "content", "witness", "dual"}
        if self.command in needs_input and self.input_path is None:
            raise UsageError(f"{self.command} needs an input file")
        if self.event is not None and self.command not in ("bounds", "witness", "dual"):
            raise UsageError("--event only applies to bounds, witness and dual")
        if self.value is not None and self.command != "witness":
            raise UsageError("--value only applies to witness")
        if self.command in ("witness", "dual") and self.event is None:
            raise UsageError(f"{self.command} needs --event")
        if self.command == "witness" and self.value is None:
            raise UsageError("witness needs --value")
        if self.command == "sample" and (self.seed is None or self.denominator is None):
            raise UsageError("sample needs --seed and --denominator")
        if self.command == "verify" and self.input_path is None:
            if self.seed is None or self.count is None:
                raise UsageError("verify needs an input file or --seed and --count")


def load_distribution(path: Path) -> DataDistribution:
    with open(path) as fh:
        return parse_data_distribution(json.load(fh))


def _fmt(x: Fraction, decimal: bool) -> str:
    return f"{x} (~{float(x):.6f})" if decimal and x.denominator != 1 else str(x)


def _table(headers: list[str], rows: list[list[str]]) -> str:
    widths = [max(len(h), *(len(r[k]) for r in rows)) for k, h in enumerate(headers)]
    line = "  ".join(h.ljust(w) for h, w in zip(headers, widths))
    out = [line.rstrip(), "  ".join("-" * w for w in widths)]
    out += ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in rows]
    return "\n".join(out)


def _event_label(e: Event) -> str:
    return ",".join(str(c) for c in e.members) or "{}"


def _misspecified(P: DataDistribution) -> tuple[int, analysis.ConsistencyReport] | None:
    rep = analysis.consistency_report(P)
    if rep.em_consistent:
        return None
    return rep.exit_code, rep


# --- commands ------------------------------------------------------------------


def cmd_check(cfg: CliConfig, P: DataDistribution):
    rep = analysis.consistency_report(P)
    if cfg.json:
        return rep.exit_code, json.dumps(rep.to_json(), indent=2)
    labels = ("P01|1 - P01|0", "P00|0 - P00|1", "P11|1 - P11|0", "P10|0 - P10|1")
    rows = [[lab, _fmt(m, cfg.decimal), "ok" if m >= 0 else "VIOLATED"] for lab, m in zip(labels, rep.margins)]
    text = [_table(["margin", "value", ""], rows), ""]
    text.append(f"EM consistent:            {rep.em_consistent}")
    text.append(f"E feasible:               {rep.e_feasible}")
    text.append(f"two-sided noncompliance:  {rep.two_sided_noncompliance}")
    if rep.e_certificate is not None:
        mult = ", ".join(map(str, rep.e_certificate.multipliers))
        text.append(f"infeasibility certificate: y = ({mult}), b'y = {rep.e_certificate.residual}")
    return rep.exit_code, "\n".join(text)


def cmd_bounds(cfg: CliConfig, P: DataDistribution):
    bad = _misspecified(P)
    if bad is not None:
        code, rep = bad
        if code == EXIT_E_INFEASIBLE:
            return code, "data are infeasible even under exogeneity alone; no bounds exist"
        ivs = analysis.lp_intervals(P, AssumptionSet.E)
        events = [cfg.event] if cfg.event is not None else list(ALL_EVENTS)
        if cfg.json:
            body = [{"event": e.to_json(), "E": ivs[e].to_json(), "EM": None, "strict": None} for e in events]
            return code, json.dumps(body[0] if cfg.event is not None else body, indent=2)
        rows = [[_event_label(e), _fmt(ivs[e].lo, cfg.decimal), _fmt(ivs[e].hi, cfg.decimal)] for e in events]
        note = "EM model is empty for these data; E bounds computed by LP only"
        return code, note + "\n" + _table(["event", "E lo", "E hi"], rows)
    table = closed_form.bounds_table(P)
    if cfg.json:
        body = table.to_json()
        if cfg.event is not None:
            body = next(r for r in body if Event.from_json(r["event"]) == cfg.event)
        return EXIT_OK, json.dumps(body, indent=2)
    events = [cfg.event] if cfg.event is not None else list(ALL_EVENTS)
    primary = cfg.assumptions
    other = AssumptionSet.E if primary is AssumptionSet.EM else AssumptionSet.EM
    rows = []
    for e in events:
        a, b = table[e, primary], table[e, other]
        mark = ""
        if e in table.strict_upper:
            mark += "hi"
        if e in table.strict_lower:
            mark += ("," if mark else "") + "lo"
        rows.append([_event_label(e), f"[{_fmt(a.lo, cfg.decimal)}, {_fmt(a.hi, cfg.decimal)}]",
                     f"[{_fmt(b.lo, cfg.decimal)}, {_fmt(b.hi, cfg.decimal)}]", mark])
    text = _table(["event", primary.value, other.value, "EM strictly tighter"], rows)
    if cfg.decimal:
        text += "\n(decimals are approximate; fractions are exact)"
    return EXIT_OK, text


def cmd_content(cfg: CliConfig, P: DataDistribution):
    bad = _misspecified(P)
    if bad is not None:
        code, _ = bad
        msg = "EM model is empty (monotonicity refuted by the data); content is not defined"
        if code == EXIT_E_INFEASIBLE:
            msg = "data are infeasible even under exogeneity alone"
        return code, json.dumps({"error": msg}) if cfg.json else msg
    rep = analysis.identifying_content(P)
    if cfg.json:
        return EXIT_OK, json.dumps(rep.to_json(), indent=2)
    rows = [
        [f"({p.i},{p.j})", _fmt(p.min_term, cfg.decimal), _fmt(p.base_sum, cfg.decimal), "yes" if p.holds else "no"]
        for p in rep.pairs
    ]
    text = [f"monotonicity has identifying content: {rep.verdict}"]
    if not rep.two_sided_noncompliance:
        text.append("no two-sided noncompliance: the data already imply monotonicity")
    text.append(_table(["(i,j)", "min{P_i0|1, P_j1|0}", "triple base sum", "witness"], rows))
    for p in rep.witnesses:
        text.append(f"EM upper bound on {_event_label(p.triple)} is {p.base_sum}, strictly below the E bound")
    return EXIT_OK, "\n".join(text)


def cmd_witness(cfg: CliConfig, P: DataDistribution):
    try:
        Q = analysis.sharpness_witness(P, cfg.event, cfg.assumptions, cfg.value)
    except closed_form.ConsistencyViolated as exc:
        rep = analysis.consistency_report(P)
        return (EXIT_E_INFEASIBLE if not rep.e_feasible else EXIT_EM_INCONSISTENT), str(exc)
    except analysis.TargetOutsideInterval as exc:
        return EXIT_INPUT, str(exc)
    body = {"event": cfg.event.to_json(), "value": str(cfg.value), "assumptions": cfg.assumptions.value, "Q": Q.to_json()}
    if cfg.json:
        return EXIT_OK, json.dumps(body, indent=2)
    rows = [[k, v] for k, v in Q.to_json().items() if v != "0"]
    return EXIT_OK, _table(["(y0,y1,d0,d1)", "Q"], rows)


def cmd_sample(cfg: CliConfig):
    P, Q = analysis.sample_consistent_P(cfg.seed, cfg.denominator, cfg.assumptions)
    body = {"P": P.to_json()}
    if cfg.with_q:
        body["Q"] = Q.to_json()
    # sample output always goes out as JSON so it can be fed back in
    return EXIT_OK, json.dumps(body if cfg.with_q else body["P"], indent=2)


def verify_distribution(P: DataDistribution) -> list[str]:
    """Compare every closed-form endpoint and the content verdict with LP."""
    problems = []
    cf = closed_form.bounds_table(P)
    lp = analysis.lp_bounds_table(P)
    for e in ALL_EVENTS:
        for a in AssumptionSet:
            if cf[e, a] != lp[e, a]:
                problems.append(f"{a.value} {_event_label(e)}: closed form {cf[e, a]} vs LP {lp[e, a]}")
    if analysis.identifying_content(P).verdict != lp.content:
        problems.append("content verdict disagrees with LP interval comparison")
    return problems


def cmd_verify(cfg: CliConfig, P: DataDistribution | None):
    if P is not None:
        bad = _misspecified(P)
        if bad is not None:
            return bad[0], "closed forms do not apply to EM-inconsistent data"
        dists = [P]
    else:
        children = np.random.SeedSequence(cfg.seed).spawn(cfg.count)
        dists = []
        for child in children:
            sub = int(child.generate_state(1)[0])
            if cfg.denominator is not None:
                den = cfg.denominator
            else:
                den = int(np.random.default_rng(child).integers(1, 1001))
            dists.append(analysis.sample_consistent_P(sub, den, AssumptionSet.EM)[0])
    failures = []
    for k, Pk in enumerate(dists):
        for msg in verify_distribution(Pk):
            failures.append({"sample": k, "P": Pk.to_json(), "problem": msg})
    code = EXIT_MISMATCH if failures else EXIT_OK
    if cfg.json:
        return code, json.dumps({"checked": len(dists), "endpoints_per_sample": 64, "mismatches": failures}, indent=2)
    text = f"checked {len(dists)} distribution(s), 64 endpoints each: {len(failures)} mismatch(es)"
    for f in failures[:20]:
        text += f"\n  sample {f['sample']}: {f['problem']}"
    return code, text


def cmd_dual(cfg: CliConfig, P: DataDistribution):
    spec = build_lp(P, cfg.assumptions)
    f = event_functional(cfg.event)
    try:
        verts = polyhedra.enumerate_dual_vertices(spec, f, cfg.direction)
    except polyhedra.SpecInfeasible:
        rep = analysis.consistency_report(P)
        return (EXIT_E_INFEASIBLE if not rep.e_feasible else EXIT_EM_INCONSISTENT), "program is infeasible"
    best = polyhedra.dual_optimum(verts, cfg.direction)
    primal = solve(spec, f, cfg.direction).value
    labels = [r.label for r in spec.rows]
    cols = [f"{lab}{s}" for lab in labels for s in ("+", "-")]
    if cfg.json:
        body = {
            "event": cfg.event.to_json(),
            "assumptions": cfg.assumptions.value,
            "direction": cfg.direction.value,
            "columns": cols,
            "vertices": [{"u": [str(x) for x in v.u], "objective_value": str(v.objective_value)} for v in verts],
            "dual_optimum": str(best),
            "primal_optimum": str(primal),
        }
        return EXIT_OK, json.dumps(body, indent=2)
    lines = [f"{len(verts)} dual vertices; best bound {best}; primal optimum {primal}"]
    for v in sorted(verts, key=lambda v: v.objective_value):
        support = ", ".join(f"{x}*{c}" for x, c in zip(v.u, cols) if x)
        lines.append(f"  {_fmt(v.objective_value, cfg.decimal):>12}  {support or '0'}")
    return EXIT_OK, "\n".join(lines)


def run(cfg: CliConfig) -> tuple[int, str]:
    """Dispatch one command; returns ``(exit_code, rendered_output)``."""
    try:
        cfg.validate()
        P = load_distribution(cfg.input_path) if cfg.input_path is not None else None
    except (UsageError, ModelError, ValueError, OSError, json.JSONDecodeError) as exc:
        return EXIT_INPUT, f"error: {exc}"
    handlers = {
        "check": lambda: cmd_check(cfg, P),
        "bounds": lambda: cmd_bounds(cfg, P),
        "content": lambda: cmd_content(cfg, P),
        "witness": lambda: cmd_witness(cfg, P),
        "sample": lambda: cmd_sample(cfg),
        "verify": lambda: cmd_verify(cfg, P),
        "dual": lambda: cmd_dual(cfg, P),
    }
    return handlers[cfg.command]()


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage, which would collide with EXIT_EM_INCONSISTENT
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="monobounds", description="Sharp bounds on the joint distribution of binary potential outcomes.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("input", nargs="?", type=Path, help="data distribution JSON file")
    p.add_argument("--assumptions", "-a", default="EM", help="E or EM (default EM)")
    p.add_argument("--event", "-e", help="cells as y0y1 pairs, e.g. 01,10")
    p.add_argument("--value", "-t", help="target probability for witness, e.g. 1/4")
    p.add_argument("--direction", choices=("min", "max"), default="max")
    p.add_argument("--seed", type=int)
    p.add_argument("--denominator", type=int)
    p.add_argument("--count", type=int)
    p.add_argument("--with-q", action="store_true", help="sample: include the generating mass function")
    p.add_argument("--json", action="store_true")
    p.add_argument("--decimal", action="store_true", help="also print approximate decimals")
    return p


def config_from_args(argv: list[str] | None = None) -> CliConfig:
    ns = build_parser().parse_args(argv)
    return CliConfig(
        command=ns.command,
        input_path=ns.input,
        assumptions=AssumptionSet.parse(ns.assumptions),
        event=Event.parse(ns.event) if ns.event is not None else None,
        value=parse_rational(ns.value) if ns.value is not None else None,
        seed=ns.seed,
        denominator=ns.denominator,
        count=ns.count,
        json=ns.json,
        decimal=ns.decimal,
        direction=Direction.parse(ns.direction),
        with_q=ns.with_q,
    )


def main(argv: list[str] | None = None) -> int:
    try:
        cfg = config_from_args(argv)
    except (UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    code, out = run(cfg)
    stream = sys.stderr if code == EXIT_INPUT else sys.stdout
    print(out, file=stream)
    return code


if __name__ == "__main__":
    sys.exit(main())
