"""
scenario_io.py - Scenario and report JSON documents, and the stage table.

Every rational is written as a "numerator/denominator" string in lowest
terms; floats are rejected on input so that a round trip is exact.
"""

import json
import logging
import re
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import pandas as pd

from discrepancy import DeltaReport, delta_bounds
from errors import ScenarioFormatError
from filtration_model import GeometricContext, LinearizationConfig, WeightedFiltration
from mult_filtration import build_tilde
from verdict import INVALID, CreepResult, StabilityReport, TailResult, Thresholds, certify
from virtual_profile import VirtualProfile, build_virtual
from xtilde_profile import XtildeFiltration, build_xtilde

logger = logging.getLogger(__name__)

RATIONAL_PATTERN = re.compile(r"^\s*(-?\d+)\s*(?:/\s*(\d+)\s*)?$")
SECTIONS = ("context", "linearization", "filtration", "run")
STAGE_COLUMNS = ["k", "w", "members", "codim", "weight", "codim_exact"]

# StabilityReport fields holding a rational or None
RATIONAL_FIELDS = (
    "epsilon", "epsilon_max", "A_bound", "Avir", "delta", "delta_bound",
    "Tvir", "Tvir_case_bound", "T_bound", "T_chain", "T_direct", "rhs",
)


@dataclass(frozen=True)
class Scenario:
    filtration: WeightedFiltration
    lin: LinearizationConfig
    u: int
    v: int

    @property
    def ctx(self) -> GeometricContext:
        return self.filtration.ctx


# ─── Rationals ────────────────────────────────────────────────────────────────

def format_rational(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(value, where: str) -> Fraction:
    """Accepts "p/q" strings, "p" strings and JSON integers; never floats."""
    if isinstance(value, bool):
        raise ScenarioFormatError("expected a rational, got a boolean", where)
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        raise ScenarioFormatError(f"floats are not allowed, write {value!r} as a \"p/q\" string", where)
    if not isinstance(value, str):
        raise ScenarioFormatError(f"expected a \"p/q\" string, got {type(value).__name__}", where)
    match = RATIONAL_PATTERN.match(value)
    if not match:
        raise ScenarioFormatError(f"malformed rational {value!r}", where)
    numerator, denominator = match.group(1), match.group(2)
    if denominator is not None and int(denominator) == 0:
        raise ScenarioFormatError(f"zero denominator in {value!r}", where)
    return Fraction(int(numerator), int(denominator or 1))


def _optional_rational(x) -> str | None:
    return None if x is None else format_rational(x)


# ─── Field Access ─────────────────────────────────────────────────────────────

def _section(doc: dict, name: str) -> dict:
    if name not in doc:
        raise ScenarioFormatError("missing section", name)
    value = doc[name]
    if not isinstance(value, dict):
        raise ScenarioFormatError("expected an object", name)
    return value


def _field(section: dict, path: str, key: str, default=...):
    if key not in section:
        if default is ...:
            raise ScenarioFormatError("missing field", f"{path}.{key}")
        return default
    return section[key]


def _integer(value, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ScenarioFormatError(f"expected an integer, got {value!r}", where)
    return value


def _list(value, where: str) -> list:
    if not isinstance(value, list):
        raise ScenarioFormatError(f"expected a list, got {type(value).__name__}", where)
    return value


def _rationals(value, where: str) -> tuple:
    return tuple(parse_rational(x, f"{where}[{i}]") for i, x in enumerate(_list(value, where)))


# ─── Scenario Documents ───────────────────────────────────────────────────────

def scenario_to_dict(scenario: Scenario) -> dict:
    ctx, lin, f = scenario.ctx, scenario.lin, scenario.filtration
    linearization = {
        "gamma": format_rational(lin.gamma),
        "b": [format_rational(x) for x in lin.b],
        "epsilon": format_rational(lin.epsilon),
    }
    if lin.nu is not None:
        linearization["nu"] = lin.nu
    if lin.a is not None:
        linearization["a"] = [format_rational(x) for x in lin.a]
    return {
        "context": {
            "g": ctx.g, "d": ctx.d, "N": ctx.N, "n": ctx.n, "q": ctx.q,
            "complete": ctx.complete, "h1": ctx.h1,
        },
        "linearization": linearization,
        "filtration": {
            "z": list(f.z),
            "r": [format_rational(x) for x in f.r],
            "c": [list(row) for row in f.c],
            "B": [format_rational(x) for x in f.B],
        },
        "run": {"u": scenario.u, "v": scenario.v},
    }


def scenario_from_dict(doc) -> Scenario:
    if not isinstance(doc, dict):
        raise ScenarioFormatError("scenario must be a JSON object")
    unknown = sorted(set(doc) - set(SECTIONS))
    if unknown:
        raise ScenarioFormatError(f"unknown sections {unknown}")

    section = _section(doc, "context")
    complete = _field(section, "context", "complete", True)
    if not isinstance(complete, bool):
        raise ScenarioFormatError("expected true or false", "context.complete")
    ctx = GeometricContext(
        **{key: _integer(_field(section, "context", key), f"context.{key}") for key in ("g", "d", "N", "n", "q")},
        complete=complete,
        h1=_integer(_field(section, "context", "h1", 0), "context.h1"),
    )

    section = _section(doc, "linearization")
    nu = _field(section, "linearization", "nu", None)
    a = _field(section, "linearization", "a", None)
    lin = LinearizationConfig(
        gamma=parse_rational(_field(section, "linearization", "gamma"), "linearization.gamma"),
        b=_rationals(_field(section, "linearization", "b"), "linearization.b"),
        epsilon=parse_rational(_field(section, "linearization", "epsilon"), "linearization.epsilon"),
        nu=None if nu is None else _integer(nu, "linearization.nu"),
        a=None if a is None else _rationals(a, "linearization.a"),
    )

    section = _section(doc, "filtration")
    z = tuple(
        _integer(x, f"filtration.z[{j}]")
        for j, x in enumerate(_list(_field(section, "filtration", "z"), "filtration.z"))
    )
    c = tuple(
        tuple(_integer(x, f"filtration.c[{j}][{i}]") for i, x in enumerate(_list(row, f"filtration.c[{j}]")))
        for j, row in enumerate(_list(_field(section, "filtration", "c"), "filtration.c"))
    )
    f = WeightedFiltration(
        ctx=ctx,
        z=z,
        r=_rationals(_field(section, "filtration", "r"), "filtration.r"),
        c=c,
        B=_rationals(_field(section, "filtration", "B"), "filtration.B"),
    )

    section = _section(doc, "run")
    return Scenario(
        filtration=f,
        lin=lin,
        u=_integer(_field(section, "run", "u"), "run.u"),
        v=_integer(_field(section, "run", "v"), "run.v"),
    )


def dumps(scenario: Scenario) -> str:
    return json.dumps(scenario_to_dict(scenario), indent=2) + "\n"


def loads(text: str) -> Scenario:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ScenarioFormatError(e.msg, f"line {e.lineno}, column {e.colno}")
    return scenario_from_dict(doc)


def load(path) -> Scenario:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise ScenarioFormatError(f"cannot read scenario: {e.strerror}", str(path))
    return loads(text)


def save(scenario: Scenario, path):
    Path(path).write_text(dumps(scenario))
    logger.debug("scenario written to %s", path)


# ─── Tables ───────────────────────────────────────────────────────────────────

def stage_table(xf: XtildeFiltration) -> pd.DataFrame:
    """One row per X̃ stage: (k, w, member spaces, codim bound, weight, exact codim)."""
    rows = [
        {
            "k": stage.k,
            "w": stage.w,
            "members": " + ".join(space.notation for space in stage.members),
            "codim": stage.codim_bound,
            "weight": stage.weight,
            "codim_exact": stage.codim_exact,
        }
        for stage in xf.stages
    ]
    # object dtype keeps exact ints next to missing oracle codims
    return pd.DataFrame(rows, columns=STAGE_COLUMNS, dtype=object)


def cell_table(delta: DeltaReport) -> pd.DataFrame:
    return pd.DataFrame(
        [
            {
                "k": cell.k, "i": cell.i, "case": cell.kind,
                "A": cell.A_exact, "Avir": cell.Avir, "delta": cell.delta,
                "bound": cell.bound, "holds": cell.holds,
            }
            for cell in delta.cells
        ],
        columns=["k", "i", "case", "A", "Avir", "delta", "bound", "holds"],
        dtype=object,
    )


def _records(df: pd.DataFrame) -> list:
    """DataFrame rows as JSON-ready dicts, rationals as strings."""
    out = []
    for record in df.to_dict(orient="records"):
        out.append({
            key: format_rational(value) if isinstance(value, Fraction) else value
            for key, value in record.items()
        })
    return out


# ─── Report Documents ─────────────────────────────────────────────────────────

def report_to_dict(report: StabilityReport) -> dict:
    out = {
        "u": report.u,
        "v": report.v,
        "verdict": report.verdict,
        "case": report.case_label,
        "violations": list(report.violations),
        "margin": _optional_rational(report.margin),
        "delta_holds": report.delta_holds,
    }
    for name in RATIONAL_FIELDS:
        out[name] = _optional_rational(getattr(report, name))
    if report.creep is not None:
        out["creep"] = {
            "lhs": format_rational(report.creep.lhs),
            "rhs": format_rational(report.creep.rhs),
            "mode": report.creep.mode,
            "z_excess": format_rational(report.creep.z_excess),
            "holds": report.creep.holds,
        }
    if report.tail is not None:
        out["tail"] = {
            "sum": format_rational(report.tail.tail),
            "bound": format_rational(report.tail.bound),
            "holds": report.tail.holds,
        }
    if report.thresholds is not None:
        out["thresholds"] = {
            "u0": report.thresholds.u0,
            "v0": report.thresholds.v0,
            "gotzmann": report.thresholds.gotzmann,
            "checks": [list(check) for check in report.thresholds.checks],
        }
    return out


def report_from_dict(doc: dict) -> StabilityReport:
    fields = {
        name: None if doc.get(name) is None else parse_rational(doc[name], name)
        for name in RATIONAL_FIELDS
    }
    creep = tail = thresholds = None
    if "creep" in doc:
        creep = CreepResult(
            lhs=parse_rational(doc["creep"]["lhs"], "creep.lhs"),
            rhs=parse_rational(doc["creep"]["rhs"], "creep.rhs"),
            mode=doc["creep"]["mode"],
            z_excess=parse_rational(doc["creep"]["z_excess"], "creep.z_excess"),
        )
    if "tail" in doc:
        tail = TailResult(
            tail=parse_rational(doc["tail"]["sum"], "tail.sum"),
            bound=parse_rational(doc["tail"]["bound"], "tail.bound"),
        )
    if "thresholds" in doc:
        t = doc["thresholds"]
        thresholds = Thresholds(
            u0=t["u0"], v0=t["v0"], gotzmann=t["gotzmann"],
            checks=tuple(tuple(check) for check in t["checks"]),
        )
    return StabilityReport(
        u=doc["u"], v=doc["v"], verdict=doc["verdict"], case_label=doc.get("case"),
        violations=tuple(doc.get("violations", ())), delta_holds=doc.get("delta_holds"),
        creep=creep, tail=tail, thresholds=thresholds, **fields,
    )


def build_report(scenario: Scenario, exact: bool = False, jobs: int = 1) -> dict:
    """
    Certify the scenario and assemble the full report document: the
    verdict summary plus the X̃ stage table, virtual vertices and cell table.
    """
    f, lin = scenario.filtration, scenario.lin
    report = certify(f, lin, scenario.u, scenario.v, jobs=jobs)
    doc = {"report": report_to_dict(report)}
    if report.verdict == INVALID:
        return doc

    mf = build_tilde(f, scenario.u, scenario.v, check_gotzmann=False)
    xf = build_xtilde(mf, exact=exact, jobs=jobs)
    vp = build_virtual(mf)
    doc["stages"] = _records(stage_table(xf))
    doc["vertices"] = [[format_rational(x), format_rational(y)] for x, y in vp.vertices]
    doc["cells"] = _records(cell_table(delta_bounds(mf)))
    return doc


def dumps_report(doc: dict) -> str:
    return json.dumps(doc, indent=2) + "\n"


def profile_data(scenario: Scenario) -> tuple[XtildeFiltration, VirtualProfile]:
    """X̃ and the virtual profile of a scenario, as needed by the renderers."""
    mf = build_tilde(scenario.filtration, scenario.u, scenario.v, check_gotzmann=False)
    return build_xtilde(mf), build_virtual(mf)
