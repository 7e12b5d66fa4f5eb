"""Case file formats: CaseJSON (native, round-trip) and IEEE CDF (import).

CaseJSON schema (all numbers p.u. unless noted):

    {
      "base_mva": 100.0,
      "name": "...",                      # optional
      "buses": [{"id", "kind": "slack"|"pv"|"pq", "p_load", "q_load",
                 "g_shunt", "b_shunt", "v_mag", "v_ang", "base_kv" (kV),
                 "v_min", "v_max"}, ...],
      "branches": [{"from_bus", "to_bus", "r", "x", "b_charging",
                    "tap", "shift", "in_service", "mva_rating"}, ...],
      "generators": [{"bus", "p_gen", "q_gen", "q_min", "q_max",
                      "v_set", "in_service"}, ...]
    }

The CDF reader follows the classic fixed-column layout: a title card whose
columns 32-37 hold the MVA base, a BUS DATA section terminated by -999, and
a BRANCH DATA section terminated by -999. MW/MVAr quantities are converted
to per-unit on the title-card base. Generator records are derived from bus
cards of type 2 (PV) and 3 (slack).
"""

from __future__ import annotations

import json
import math
from importlib import resources
from pathlib import Path
from typing import IO

from .network import (
    Branch,
    Bus,
    BusKind,
    CaseError,
    Generator,
    NetworkCase,
    validate_connectivity,
)


class ParseError(ValueError):
    """Malformed case text; carries the offending line number when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


_KIND_BY_CDF_TYPE = {
    0: BusKind.PQ,  # unregulated
    1: BusKind.PQ,  # within VAR limits
    2: BusKind.PV,
    3: BusKind.SLACK,
}


def _fnum(text: str, what: str, lineno: int) -> float:
    text = text.strip()
    if not text:
        return 0.0
    try:
        return float(text)
    except ValueError as exc:
        raise ParseError(f"bad {what}: {text!r}", lineno) from exc


def parse_cdf(text: str) -> NetworkCase:
    """Parse IEEE Common Data Format text into a validated case."""
    lines = text.splitlines()
    if not lines:
        raise ParseError("empty file", 1)
    title = lines[0]
    base_mva = _fnum(title[31:37], "MVA base", 1)
    if base_mva <= 0:
        raise ParseError("MVA base missing from title card", 1)

    buses: list[Bus] = []
    generators: list[Generator] = []
    branches: list[Branch] = []
    section = None
    for lineno, raw in enumerate(lines[1:], start=2):
        stripped = raw.strip()
        upper = stripped.upper()
        if upper.startswith("BUS DATA FOLLOWS"):
            section = "bus"
            continue
        if upper.startswith("BRANCH DATA FOLLOWS"):
            section = "branch"
            continue
        if stripped.startswith("-999") or stripped.startswith("-99"):
            section = None
            continue
        if upper.startswith(("LOSS ZONES", "INTERCHANGE DATA", "TIE LINES")):
            section = "skip"
            continue
        if section in (None, "skip") or not stripped:
            continue
        if section == "bus":
            bus_id = int(_fnum(raw[0:4], "bus number", lineno))
            kind_code = int(_fnum(raw[24:26], "bus type", lineno))
            if kind_code not in _KIND_BY_CDF_TYPE:
                raise ParseError(f"unknown bus type {kind_code}", lineno)
            kind = _KIND_BY_CDF_TYPE[kind_code]
            v_mag = _fnum(raw[27:33], "voltage", lineno) or 1.0
            v_ang = math.radians(_fnum(raw[33:40], "angle", lineno))
            p_load = _fnum(raw[40:49], "load MW", lineno) / base_mva
            q_load = _fnum(raw[49:59], "load MVAR", lineno) / base_mva
            p_gen = _fnum(raw[59:67], "gen MW", lineno) / base_mva
            q_gen = _fnum(raw[67:75], "gen MVAR", lineno) / base_mva
            base_kv = _fnum(raw[76:83], "base kV", lineno) or 1.0
            v_set = _fnum(raw[84:90], "desired volts", lineno)
            q_max = _fnum(raw[90:98], "max MVAR", lineno) / base_mva
            q_min = _fnum(raw[98:106], "min MVAR", lineno) / base_mva
            g_shunt = _fnum(raw[106:114], "shunt G", lineno)
            b_shunt = _fnum(raw[114:122], "shunt B", lineno)
            if kind is BusKind.PQ:
                # Net any generation on an unregulated bus into its load.
                p_load -= p_gen
                q_load -= q_gen
            buses.append(
                Bus(
                    id=bus_id,
                    kind=kind,
                    p_load=p_load,
                    q_load=q_load,
                    g_shunt=g_shunt,
                    b_shunt=b_shunt,
                    v_mag=v_mag,
                    v_ang=v_ang,
                    base_kv=base_kv,
                    v_min=0.5,
                    v_max=1.5,
                )
            )
            if kind in (BusKind.PV, BusKind.SLACK):
                if q_min > q_max:
                    q_min, q_max = q_max, q_min
                generators.append(
                    Generator(
                        bus=bus_id,
                        p_gen=p_gen,
                        q_gen=q_gen,
                        q_min=q_min,
                        q_max=q_max,
                        v_set=v_set if v_set > 0 else v_mag,
                    )
                )
        elif section == "branch":
            from_bus = int(_fnum(raw[0:4], "from bus", lineno))
            to_bus = int(_fnum(raw[5:9], "to bus", lineno))
            r = _fnum(raw[19:29], "resistance", lineno)
            x = _fnum(raw[29:40], "reactance", lineno)
            b = _fnum(raw[40:50], "line charging", lineno)
            rating = _fnum(raw[50:55], "MVA rating", lineno) / base_mva
            ratio = _fnum(raw[76:82], "turns ratio", lineno)
            shift = math.radians(_fnum(raw[83:90], "phase shift", lineno))
            branches.append(
                Branch(
                    from_bus=from_bus,
                    to_bus=to_bus,
                    r=r,
                    x=x,
                    b_charging=b,
                    tap=ratio if ratio > 0 else 1.0,
                    shift=shift,
                    mva_rating=rating,
                )
            )
    if not buses:
        raise ParseError("no bus data section found")
    slacks = [b.id for b in buses if b.kind is BusKind.SLACK]
    if len(slacks) > 1:
        raise CaseError(f"multiple slack buses: {slacks}")
    return NetworkCase(
        base_mva=base_mva,
        buses=tuple(buses),
        branches=tuple(branches),
        generators=tuple(generators),
        name=title[45:73].strip() or "cdf-case",
    )


def case_to_dict(case: NetworkCase) -> dict:
    return {
        "base_mva": case.base_mva,
        "name": case.name,
        "buses": [
            {
                "id": b.id,
                "kind": b.kind.value,
                "p_load": b.p_load,
                "q_load": b.q_load,
                "g_shunt": b.g_shunt,
                "b_shunt": b.b_shunt,
                "v_mag": b.v_mag,
                "v_ang": b.v_ang,
                "base_kv": b.base_kv,
                "v_min": b.v_min,
                "v_max": b.v_max,
            }
            for b in case.buses
        ],
        "branches": [
            {
                "from_bus": br.from_bus,
                "to_bus": br.to_bus,
                "r": br.r,
                "x": br.x,
                "b_charging": br.b_charging,
                "tap": br.tap,
                "shift": br.shift,
                "in_service": br.in_service,
                "mva_rating": br.mva_rating,
            }
            for br in case.branches
        ],
        "generators": [
            {
                "bus": g.bus,
                "p_gen": g.p_gen,
                "q_gen": g.q_gen,
                "q_min": g.q_min,
                "q_max": g.q_max,
                "v_set": g.v_set,
                "in_service": g.in_service,
            }
            for g in case.generators
        ],
    }


def case_from_dict(data: dict) -> NetworkCase:
    try:
        buses = tuple(
            Bus(
                id=int(b["id"]),
                kind=BusKind(b["kind"]),
                p_load=float(b.get("p_load", 0.0)),
                q_load=float(b.get("q_load", 0.0)),
                g_shunt=float(b.get("g_shunt", 0.0)),
                b_shunt=float(b.get("b_shunt", 0.0)),
                v_mag=float(b.get("v_mag", 1.0)),
                v_ang=float(b.get("v_ang", 0.0)),
                base_kv=float(b.get("base_kv", 1.0)),
                v_min=float(b.get("v_min", 0.5)),
                v_max=float(b.get("v_max", 1.5)),
            )
            for b in data["buses"]
        )
        branches = tuple(
            Branch(
                from_bus=int(br["from_bus"]),
                to_bus=int(br["to_bus"]),
                r=float(br.get("r", 0.0)),
                x=float(br["x"]),
                b_charging=float(br.get("b_charging", 0.0)),
                tap=float(br.get("tap", 1.0)),
                shift=float(br.get("shift", 0.0)),
                in_service=bool(br.get("in_service", True)),
                mva_rating=float(br.get("mva_rating", 0.0)),
            )
            for br in data.get("branches", ())
        )
        generators = tuple(
            Generator(
                bus=int(g["bus"]),
                p_gen=float(g.get("p_gen", 0.0)),
                q_gen=float(g.get("q_gen", 0.0)),
                q_min=float(g.get("q_min", -9.99)),
                q_max=float(g.get("q_max", 9.99)),
                v_set=float(g.get("v_set", 1.0)),
                in_service=bool(g.get("in_service", True)),
            )
            for g in data.get("generators", ())
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed CaseJSON: {exc}") from exc
    return NetworkCase(
        base_mva=float(data["base_mva"]),
        buses=buses,
        branches=branches,
        generators=generators,
        name=str(data.get("name", "")),
    )


def parse_case(text: str, fmt: str = "casejson") -> NetworkCase:
    """Parse case text in the named format ("casejson" or "ieee-cdf").

    Load-time gate for the connectivity invariant: disconnected buses are
    rejected here with their ids.
    """
    fmt = fmt.lower()
    if fmt in ("casejson", "json"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(exc.msg, exc.lineno) from exc
        return validate_connectivity(case_from_dict(data))
    if fmt in ("ieee-cdf", "cdf"):
        return validate_connectivity(parse_cdf(text))
    raise ValueError(f"unknown case format: {fmt}")


def load_case(path: str | Path) -> NetworkCase:
    """Load a case file, inferring the format from the extension."""
    path = Path(path)
    fmt = "ieee-cdf" if path.suffix.lower() in (".cdf", ".txt") else "casejson"
    return parse_case(path.read_text(), fmt)


def save_case(case: NetworkCase, path: str | Path) -> None:
    Path(path).write_text(case_to_json(case))


def case_to_json(case: NetworkCase) -> str:
    return json.dumps(case_to_dict(case), indent=1, sort_keys=True) + "\n"


def load_bundled_case(name: str) -> NetworkCase:
    """Load one of the packaged test systems: ieee14, ieee30, ieee118."""
    pkg = resources.files("gridpilot.data")
    candidate = pkg / f"{name}.cdf"
    if not candidate.is_file():
        candidate = pkg / f"{name}.json"
    if not candidate.is_file():
        raise FileNotFoundError(f"no bundled case named {name!r}")
    fmt = "ieee-cdf" if candidate.name.endswith(".cdf") else "casejson"
    return parse_case(candidate.read_text(), fmt)


def open_case_stream(stream: IO[str], fmt: str) -> NetworkCase:
    return parse_case(stream.read(), fmt)
