"""Run the pipeline on a problem and build a deterministic report.

Stages: foliation -> monomialize -> analyze -> eliminate, with ``full`` adding
the ledger checks. Each leaf carries its own status so that a nongeneric or
unresolved leaf only stops later stages for that leaf. Verification verdicts
are ``"passed"``, ``"failed"`` or ``"skipped"``; only ``"failed"`` makes the
run fail.

The machine-readable report holds every polynomial and jet as text in the
package grammar, which is what :func:`verify_report` re-checks from.
"""
from __future__ import annotations

import json
from fractions import Fraction
from typing import Mapping

from .blowup import Chart, ChartTree, normal_crossings_at_origin, pullback
from .errors import NonGeneric, VerificationSkipped
from .foliation import DarbouxIntegral, OneForm, darboux_one_form, verify_integrating_factor, wedge_system
from .ledger import run_ledger
from .monomialize import ConstantFactor, MonomialSystem, monomialize_all, verify_system
from .polyring import Jet, Polynomial, parse_polynomial
from .problem import Problem
from .resonance import (
    ExponentMatrix,
    LogLinearField,
    generator_field,
    is_resonant,
    matrix_rank,
    primitive_vector,
    verify_annihilation,
)
from .unitelim import (
    ChangeOfVariables,
    PushedField,
    eliminate_units,
    normalize_units,
    push_forward_field,
    substitution_residuals,
    transversality_report,
)

__all__ = ["COMMANDS", "run", "render_text", "dumps", "verify_report", "FORMAT"]

FORMAT = "darbouxmono.report/1"
COMMANDS = ("foliation", "monomialize", "analyze", "eliminate", "full")
NONGENERIC_STATUS = "nongeneric: resonant exponents, unit elimination is an open question"


def _verdict(ok) -> str:
    if ok is None:
        return "skipped"
    return "passed" if ok else "failed"


def _vec(v) -> list:
    return [str(Fraction(x)) for x in v]


def _stage_index(command: str) -> int:
    if command not in COMMANDS:
        raise ValueError(f"unknown command {command!r}; choose from {COMMANDS}")
    return COMMANDS.index(command)


# -- stages ----------------------------------------------------------------

def _foliation_section(problem: Problem) -> dict:
    h = problem.integral
    omega = darboux_one_form(h)
    wedge = wedge_system(omega)
    try:
        ok = verify_integrating_factor(h, omega)
        check = _verdict(ok)
    except VerificationSkipped:
        check = "skipped"
    return {
        "one_form": {v: str(omega.coefficient(v)) for v in h.variables},
        "wedge": {"q1": str(wedge.q1), "q2": str(wedge.q2)},
        "verifications": {"integrating_factor": check},
    }


def _chart_record(tree: ChartTree, chart: Chart) -> dict:
    rec = {
        "id": chart.id,
        "roster": list(chart.roster),
        "map": chart.map_strings(),
        "divisor_vars": list(chart.divisor_vars),
        "depth": chart.depth,
    }
    center = tree.center_of(chart.id)
    if center is not None:
        rec["center"] = list(center.subspace_vars)
        rec["children"] = list(tree.children(chart.id))
    return rec


def _system_record(system: MonomialSystem) -> dict:
    rec = {
        "labels": list(system.labels),
        "gammas": [_vec(r) for r in system.rows],
        "units": [str(u.poly) for u in system.units],
        "dropped_constants": [str(c) for c in system.dropped_constants],
    }
    if system.factor_records:
        rec["factors"] = [
            {"beta": list(beta), "quotient": str(q), "exponent": str(a)}
            for beta, q, a in system.factor_records
        ]
    return rec


def _analysis(system: MonomialSystem) -> tuple[dict, LogLinearField | None]:
    m = ExponentMatrix(system.rows)
    rank = matrix_rank(m)
    need = len(system.rows)
    out = {
        "rank": rank,
        "maximal_rank": rank == need,
        "resonant": is_resonant(system.gamma0, system.gammas),
    }
    field = None
    if rank == need:
        field = generator_field(m)
        out["generator_field"] = _vec(field.alpha)
        out["verifications"] = {
            "kernel": _verdict(all(verify_annihilation(field, g) for g in system.rows))
        }
        out["status"] = "generic"
    else:
        out["generator_field"] = None
        out["status"] = NONGENERIC_STATUS
    return out, field


def _elimination(system: MonomialSystem, field: LogLinearField, order: int):
    change, transformed = eliminate_units(system, order)
    normalized = normalize_units(system)
    residuals = substitution_residuals(normalized, change)
    pushed = push_forward_field(field, change)
    annihilation = [pushed.annihilates(g, u.truncate(order)) for g, u in zip(normalized.rows, normalized.units)]
    rec = {
        "status": "ok",
        "columns": [system.roster[j] for j in change.columns],
        "factors": {v: str(f.poly) for v, f in zip(change.variables, change.factors)},
        "unit_exponents": {
            v: _vec(e) for v, e in zip(change.variables, change.unit_exponents)
        },
        "pushed_field": {
            "linear_part": _vec(pushed.linear_part.alpha),
            "coefficients": {v: str(c.poly) for v, c in zip(pushed.variables, pushed.coefficients)},
        },
        "transversality": {
            v: {
                "transversal": t["transversal"],
                "exceptional": v in system.chart.divisor_vars,
                "detail": t["detail"],
            }
            for v in system.roster
            for t in [transversality_report(pushed, v)]
        },
        "verifications": {
            "elimination_soundness": _verdict(all(r.is_zero() for r in residuals)),
            "pushed_field_annihilates": _verdict(all(annihilation)),
        },
    }
    return rec, change


def _ledger_entries(problem: Problem, systems: dict, changes: dict) -> list:
    out = []
    for entry in problem.ledger:
        chart_id = entry.get("chart")
        if chart_id is None:
            chart_id = next(iter(systems), None)
        if chart_id not in systems:
            out.append({"label": str(entry.get("label", "")), "status": f"no system in chart {chart_id!r}"})
            continue
        rec = {"chart": chart_id, **run_ledger(entry, systems[chart_id], problem.parameters)}
        change = changes.get(chart_id)
        if rec["kind"] == "substitution" and change is not None and "values" in rec.get("derived", {}):
            idx = systems[chart_id].labels.index(rec["unit"])
            solver = {v: str(e[idx]) for v, e in zip(change.variables, change.unit_exponents)}
            rec["solver_exponents"] = solver
            derived = rec["derived"]["values"]
            rec["derived_matches_solver"] = all(
                Fraction(derived.get(v, "0")) == Fraction(solver[v]) for v in change.variables
            )
        out.append(rec)
    return out


# -- driver ----------------------------------------------------------------

def run(problem: Problem, command: str = "full", jet_order: int | None = None, strategy=None, nc_points=()) -> dict:
    """Run ``command`` on ``problem`` and return the machine-readable report (a dict)."""
    stage = _stage_index(command)
    order = jet_order or problem.jet_order
    strategy = strategy or problem.strategy
    report: dict = {"format": FORMAT, "problem": problem.name, "command": command, "jet_order": order}
    inp: dict = {"parameters": {k: str(v) for k, v in problem.parameters.items()}}
    if problem.integral is not None:
        inp["variables"] = list(problem.variables)
        inp["factors"] = [
            {"poly": str(p), "exponent": str(a), "source": src[0], "exponent_source": src[1]}
            for (p, a), src in zip(problem.integral.factors, problem.factor_sources)
        ]
    if problem.imported is not None:
        inp["imported"] = {
            "variables": list(problem.imported.roster),
            "integrals": [
                {"label": lab, **src}
                for lab, src in zip(problem.imported.labels, problem.imported_sources)
            ],
        }
    report["input"] = inp

    if problem.integral is not None:
        report["foliation"] = _foliation_section(problem)
    if stage < 1:
        return _finish(report)

    leaves: list = []
    systems: dict = {}
    if problem.integral is not None:
        mono = monomialize_all(problem.integral, strategy, order)
        report["monomialize"] = {
            "strategy": {
                "kind": strategy.kind.value,
                "max_depth": strategy.max_depth,
                "script": [
                    {"chart": s.chart, "center": list(s.center.subspace_vars), "rename": dict(s.rename)}
                    for s in strategy.script
                ],
            },
            "charts": [_chart_record(mono.tree, c) for c in mono.tree.charts()],
            "unused_script": [s.chart for s in mono.unused_script],
        }
        by_id = {s.chart.id: s for s in mono.systems}
        for leaf in mono.tree.leaves():
            rec = {"chart": leaf.id, "roster": list(leaf.roster), "map": leaf.map_strings(),
                   "divisor_vars": list(leaf.divisor_vars)}
            if leaf.id in mono.failed:
                rec["status"] = mono.failed[leaf.id]
                leaves.append(rec)
                continue
            system = by_id[leaf.id]
            systems[leaf.id] = system
            rec["status"] = "ok"
            rec["system"] = _system_record(system)
            rec["verifications"] = {k: _verdict(v) for k, v in verify_system(system, problem.integral).items()}
            leaves.append(rec)
        for chart_id, at in nc_points or problem.nc_points:
            if chart_id not in mono.tree:
                continue
            chart = mono.tree.chart(chart_id)
            rec = next(r for r in report["monomialize"]["charts"] if r["id"] == chart_id)
            rec.setdefault("nc_points", []).append({
                "at": {k: str(v) for k, v in at.items()},
                "factors_ok": [
                    normal_crossings_at_origin(pullback(chart, p), at).ok for p, _ in problem.integral.factors
                ],
            })
    if problem.imported is not None:
        system = problem.imported
        systems[system.chart.id] = system
        leaves.append({
            "chart": system.chart.id,
            "roster": list(system.roster),
            "map": system.chart.map_strings(),
            "divisor_vars": list(system.chart.divisor_vars),
            "status": "ok",
            "system": _system_record(system),
        })
    report["leaves"] = leaves
    if stage < 2:
        return _finish(report)

    changes: dict = {}
    for rec in leaves:
        system = systems.get(rec["chart"])
        if system is None:
            continue
        analysis, field = _analysis(system)
        rec["analysis"] = analysis
        if stage < 3:
            continue
        if field is None:
            rec["elimination"] = {"status": NONGENERIC_STATUS}
            try:
                eliminate_units(system, order)
            except NonGeneric as exc:
                rec["elimination"]["detail"] = str(exc)
            continue
        rec["elimination"], changes[rec["chart"]] = _elimination(system, field, order)
    if stage >= 4 and problem.ledger:
        report["ledger"] = _ledger_entries(problem, systems, changes)
    return _finish(report)


def _collect_verdicts(obj, path=""):
    if isinstance(obj, dict):
        for k, v in obj.items():
            if k == "verifications" and isinstance(v, dict):
                for name, verdict in v.items():
                    yield f"{path}{name}", verdict
            else:
                yield from _collect_verdicts(v, f"{path}{k}.")
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            yield from _collect_verdicts(v, f"{path}{i}.")


def _finish(report: dict) -> dict:
    verdicts = list(_collect_verdicts(report))
    failed = [name for name, v in verdicts if v == "failed"]
    notes = []
    for leaf in report.get("leaves", []):
        if leaf["status"] != "ok":
            notes.append(f"{leaf['chart']}: {leaf['status']}")
        elif leaf.get("analysis", {}).get("status", "generic") != "generic":
            notes.append(f"{leaf['chart']}: {leaf['analysis']['status']}")
    report["summary"] = {
        "verification_failed": bool(failed),
        "failed_checks": failed,
        "checks_run": sum(1 for _, v in verdicts if v != "skipped"),
        "notes": notes,
    }
    return report


def dumps(report: dict) -> str:
    return json.dumps(report, indent=2, ensure_ascii=False) + "\n"


# -- human-readable rendering ---------------------------------------------

def render_text(report: dict) -> str:
    lines = [f"problem {report['problem']} | command {report['command']} | jet order {report['jet_order']}"]
    inp = report["input"]
    if "factors" in inp:
        lines.append(f"roster: {', '.join(inp['variables'])}")
        for f in inp["factors"]:
            lines.append(f"  factor ({f['poly']})^({f['exponent']})")
    if "foliation" in report:
        fol = report["foliation"]
        lines.append("one-form:")
        for v, c in fol["one_form"].items():
            lines.append(f"  d{v}: {c}")
        lines.append(f"wedge system: q1 = {fol['wedge']['q1']}; q2 = {fol['wedge']['q2']}")
        lines.append(f"integrating factor check: {fol['verifications']['integrating_factor']}")
    if "monomialize" in report:
        mono = report["monomialize"]
        lines.append(f"strategy {mono['strategy']['kind']} (max depth {mono['strategy']['max_depth']}); "
                     f"{len(mono['charts'])} charts")
        for c in mono["charts"]:
            if "center" in c:
                lines.append(f"  {c['id']}: blow up {{{','.join(c['center'])}}}")
    for leaf in report.get("leaves", []):
        lines.append(f"leaf {leaf['chart']} [{leaf['status']}] roster ({', '.join(leaf['roster'])})")
        if leaf["chart"] != "imported":
            lines.append("  map: " + "; ".join(f"{k} = {v}" for k, v in leaf["map"].items()))
        sysrec = leaf.get("system")
        if sysrec:
            for lab, g, u, c in zip(sysrec["labels"], sysrec["gammas"], sysrec["units"], sysrec["dropped_constants"]):
                shown = u if len(u) <= 60 else u[:57] + "..."
                lines.append(f"  {lab}: gamma=({', '.join(g)}) const={c} unit={shown}")
        an = leaf.get("analysis")
        if an:
            lines.append(f"  rank {an['rank']} (maximal: {an['maximal_rank']}), resonant: {an['resonant']}, "
                         f"field: {an['generator_field']}")
        el = leaf.get("elimination")
        if el:
            lines.append(f"  elimination: {el['status']}")
            if el["status"] == "ok":
                lines.append(f"    columns {el['columns']}, linear part {el['pushed_field']['linear_part']}")
                tv = [v for v, t in el["transversality"].items() if t["transversal"]]
                lines.append(f"    transversal to: {', '.join('{' + v + '=0}' for v in tv) or 'none'}")
        for where in (leaf, an or {}, el or {}):
            for name, v in where.get("verifications", {}).items():
                lines.append(f"  check {name}: {v}")
    for entry in report.get("ledger", []):
        lines.append(f"ledger: {entry.get('label', '')}")
        if "status" in entry:
            lines.append(f"  {entry['status']}")
        for side in ("reference", "derived"):
            if side in entry:
                s = entry[side]
                if "status" in s:
                    lines.append(f"  {side} exponents {s['exponents']}: {s['status']}")
                elif entry["kind"] == "substitution":
                    ex = ", ".join(f"{v}: {s['exponents'][v]} = {s['values'][v]}" for v in s["exponents"])
                    kept = ", ".join(f"{k}: {'monomial' if ok else 'NOT monomial'}"
                                     for k, ok in s["monomial_after_substitution"].items())
                    lines.append(f"  {side} exponents [{ex}] -> {kept}")
                else:
                    comp = ", ".join(f"{k}: {v}" for k, v in s["components"].items())
                    kept = ", ".join(f"{k}: {'killed' if c['annihilates'] else 'NOT killed'}"
                                     for k, c in s["checks"].items())
                    lines.append(f"  {side} field [{comp}] -> {kept}")
        if "derived_matches_solver" in entry:
            lines.append(f"  derived matches solver: {entry['derived_matches_solver']}")
    summ = report["summary"]
    for note in summ["notes"]:
        lines.append(f"note: {note}")
    lines.append(f"verification: {'FAILED ' + ', '.join(summ['failed_checks']) if summ['verification_failed'] else 'all passed'}"
                 f" ({summ['checks_run']} checks)")
    return "\n".join(lines) + "\n"


# -- independent re-verification --------------------------------------------

def _jet(text, roster, order):
    return Jet(parse_polynomial(text, roster), order)


def verify_report(report: Mapping) -> dict:
    """Re-check every identity in a machine-readable report from its text alone.

    Returns ``{check name: "passed" | "failed"}``.
    """
    if report.get("format") != FORMAT:
        raise ValueError(f"not a report of format {FORMAT}")
    order = int(report["jet_order"])
    inp = report["input"]
    results: dict = {}

    def record(name, ok):
        results[name] = _verdict(bool(ok))

    factors = []
    if "factors" in inp:
        root = tuple(inp["variables"])
        factors = [(parse_polynomial(f["poly"], root), Fraction(f["exponent"])) for f in inp["factors"]]
        if "foliation" in report:
            h = DarbouxIntegral(root, factors)
            omega = OneForm(root, {v: parse_polynomial(c, root) for v, c in report["foliation"]["one_form"].items()})
            record("foliation.one_form", omega == darboux_one_form(h))
            if h.has_integer_exponents():
                record("foliation.integrating_factor", verify_integrating_factor(h, omega))
    for leaf in report.get("leaves", []):
        cid = leaf["chart"]
        roster = tuple(leaf["roster"])
        sysrec = leaf.get("system")
        if sysrec is None:
            continue
        gammas = [[Fraction(x) for x in g] for g in sysrec["gammas"]]
        units = [_jet(u, roster, order) for u in sysrec["units"]]
        if cid != "imported":
            root = tuple(inp["variables"])
            cmap = {v: parse_polynomial(t, roster) for v, t in leaf["map"].items()}
            gamma0 = [Fraction(0)] * len(roster)
            unit0 = Jet.one(roster, order)
            ok = True
            for (p, a), frec in zip(factors, sysrec["factors"]):
                pb = p.substitute(cmap)
                q = parse_polynomial(frec["quotient"], roster)
                ok &= Polynomial.monomial(roster, frec["beta"]) * q == pb and q.constant_term() != 0
                gamma0 = [g + a * b for g, b in zip(gamma0, frec["beta"])]
                unit0 = unit0 * Jet(q / q.constant_term(), order).pow_rational(a)
            record(f"{cid}.factors_normal_crossings", ok)
            record(f"{cid}.gamma0", gamma0 == gammas[0])
            record(f"{cid}.unit0", unit0 == units[0])
            ok = True
            for e, g, u in zip(root[2:], gammas[1:], units[1:]):
                ok &= Polynomial.monomial(roster, [int(x) for x in g]) * u.poly == cmap[e]
            record(f"{cid}.eps_monomial", ok)
        an = leaf.get("analysis")
        if an:
            rank = matrix_rank(gammas)
            record(f"{cid}.rank", rank == an["rank"])
            record(f"{cid}.resonance", is_resonant(gammas[0], gammas[1:]) == an["resonant"])
            if an["generator_field"] is not None:
                alpha = [Fraction(x) for x in an["generator_field"]]
                record(f"{cid}.kernel", all(sum(a * g for a, g in zip(alpha, row)) == 0 for row in gammas)
                       and tuple(alpha) == primitive_vector(alpha))
        el = leaf.get("elimination")
        if el and el["status"] == "ok":
            normed = [u * (1 / u.constant_term()) for u in units]
            V = [_jet(el["factors"][v], roster, order) for v in roster]
            change = ChangeOfVariables(order, roster, tuple(V))
            rebuilt = MonomialSystem(Chart.root(roster), gammas[0], gammas[1:], normed,
                                     [ConstantFactor()] * len(normed))
            record(f"{cid}.elimination", all(r.is_zero() for r in substitution_residuals(rebuilt, change)))
            pf = el["pushed_field"]
            alpha = [Fraction(x) for x in pf["linear_part"]]
            coeffs = [_jet(pf["coefficients"][v], roster, order) for v in roster]
            pushed = PushedField(LogLinearField(alpha), tuple(c - a for c, a in zip(coeffs, alpha)), roster)
            record(f"{cid}.pushed_field", all(pushed.annihilates(g, u) for g, u in zip(gammas, normed)))
            record(f"{cid}.pushed_linear_part", all(c.constant_term() == a for c, a in zip(coeffs, alpha)))
            record(f"{cid}.transversality", all(
                el["transversality"][v]["transversal"] == (a != 0) for v, a in zip(roster, alpha)))
    return results
