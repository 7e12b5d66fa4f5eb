"""Build the bundled CDF case files from the raw tables and validate them.

Validation solves each case and compares the converged voltages against the
published operating point carried in the bus tables (magnitudes at PQ buses
are the strong check; PV magnitudes are pinned by setpoints). Run from the
repo root:

    python scripts/make_cases.py
"""

from __future__ import annotations

import sys
from pathlib import Path

import numpy as np

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))
sys.path.insert(0, str(ROOT / "scripts"))

from case_tables import CASES  # noqa: E402
from gridpilot.caseio import parse_cdf  # noqa: E402
from gridpilot.network import BusKind  # noqa: E402
from gridpilot.powerflow import PowerFlowOptions, solve_power_flow  # noqa: E402


def _place(line: list[str], start: int, text: str) -> None:
    for i, ch in enumerate(text):
        line[start + i] = ch


def _field(value: str, width: int, right: bool = True) -> str:
    if len(value) > width:
        raise ValueError(f"field overflow: {value!r} > {width}")
    return value.rjust(width) if right else value.ljust(width)


def bus_card(row, gen) -> str:
    bid, btype, pd, qd, gs, bs, vm, va, kv = row
    line = [" "] * 128
    _place(line, 0, _field(str(bid), 4))
    _place(line, 5, _field(f"BUS {bid}", 12, right=False))
    _place(line, 18, _field("1", 2))
    _place(line, 20, _field("1", 3))
    _place(line, 24, _field(str(btype), 2))
    _place(line, 27, _field(f"{vm:.4f}", 6))
    _place(line, 33, _field(f"{va:.2f}", 7))
    _place(line, 40, _field(f"{pd:.2f}", 9))
    _place(line, 49, _field(f"{qd:.2f}", 10))
    pg, qmax, qmin = 0.0, 0.0, 0.0
    if gen is not None:
        _, pg, qmax, qmin = gen
    _place(line, 59, _field(f"{pg:.2f}", 8))
    _place(line, 67, _field("0.00", 8))
    _place(line, 76, _field(f"{kv:.2f}", 7))
    _place(line, 84, _field(f"{vm:.4f}" if gen is not None else "0.0", 6))
    _place(line, 90, _field(f"{qmax:.2f}", 8))
    _place(line, 98, _field(f"{qmin:.2f}", 8))
    _place(line, 106, _field(f"{gs / 100.0:.4f}", 8))
    _place(line, 114, _field(f"{bs / 100.0:.4f}", 8))
    _place(line, 123, _field("0", 4))
    return "".join(line).rstrip()


def branch_card(row) -> str:
    f, t, r, x, b, rate, ratio = row
    line = [" "] * 128
    _place(line, 0, _field(str(f), 4))
    _place(line, 5, _field(str(t), 4))
    _place(line, 10, _field("1", 2))
    _place(line, 12, _field("1", 3))
    _place(line, 16, _field("1", 1))
    _place(line, 18, _field("1" if ratio else "0", 1))
    _place(line, 19, _field(f"{r:.5f}", 10))
    _place(line, 29, _field(f"{x:.5f}", 11))
    _place(line, 40, _field(f"{b:.5f}", 10))
    _place(line, 50, _field(str(int(rate)), 5))
    _place(line, 56, _field("0", 5))
    _place(line, 62, _field("0", 5))
    _place(line, 68, _field("0", 4))
    _place(line, 73, _field("0", 1))
    _place(line, 76, _field(f"{ratio:.4f}" if ratio else "0.0", 6))
    _place(line, 83, _field("0.0", 7))
    return "".join(line).rstrip()


def to_cdf(name: str, title: str, bus, gen, branch) -> str:
    gen_by_bus = {g[0]: g for g in gen}
    head = [" "] * 128
    _place(head, 1, "08/11/93")
    _place(head, 10, "GRIDPILOT ARCHIVE")
    _place(head, 31, _field("100.0", 6, right=False))
    _place(head, 38, "1993 W")
    _place(head, 45, title.upper()[:28])
    lines = [
        "".join(head).rstrip(),
        f"BUS DATA FOLLOWS                            {len(bus)} ITEMS",
    ]
    for row in bus:
        lines.append(bus_card(row, gen_by_bus.get(row[0])))
    lines.append("-999")
    lines.append(f"BRANCH DATA FOLLOWS                         {len(branch)} ITEMS")
    for row in branch:
        lines.append(branch_card(row))
    lines.append("-999")
    lines.append("LOSS ZONES FOLLOWS                     1 ITEMS")
    lines.append("-99")
    lines.append("INTERCHANGE DATA FOLLOWS                 1 ITEMS")
    lines.append("-9")
    lines.append("TIE LINES FOLLOWS                     0 ITEMS")
    lines.append("-999")
    lines.append("END OF DATA")
    return "\n".join(lines) + "\n"


def validate(name: str, text: str, bus_rows) -> None:
    case = parse_cdf(text)
    n_gen = len([g for g in case.generators])
    print(
        f"{name}: {case.n} buses, {len(case.branches)} branches, "
        f"{n_gen} generator records, total load "
        f"{case.total_load()[0] * case.base_mva:.1f} MW"
    )
    sol = solve_power_flow(case, PowerFlowOptions(tolerance=1e-8, max_iter=20))
    assert sol.converged, f"{name} did not converge: {sol.failure}"
    published_vm = {row[0]: row[6] for row in bus_rows}
    published_va = {row[0]: row[7] for row in bus_rows}
    pq_err = []
    va_err = []
    for i, b in enumerate(case.buses):
        vm = abs(sol.v[i])
        va = np.degrees(np.angle(sol.v[i]))
        if case.effective_kind(b) is BusKind.PQ and published_vm[b.id] != 1.0:
            pq_err.append(abs(vm - published_vm[b.id]))
        va_err.append(abs(va - published_va[b.id]))
    print(
        f"  converged in {sol.iterations} iterations, "
        f"mismatch {sol.max_mismatch:.2e}, losses "
        f"{sol.total_loss * case.base_mva:.2f} MW, slack "
        f"{sol.p_slack * case.base_mva:.1f} MW"
    )
    if pq_err:
        print(
            f"  vs published point: max |dVm| at PQ = {max(pq_err):.4f}, "
            f"max |dVa| = {max(va_err):.3f} deg"
        )


def main() -> None:
    out = ROOT / "src" / "gridpilot" / "data"
    out.mkdir(parents=True, exist_ok=True)
    for name, (title, bus, gen, branch) in CASES.items():
        text = to_cdf(name, title, bus, gen, branch)
        (out / f"{name}.cdf").write_text(text)
        validate(name, text, bus)


if __name__ == "__main__":
    main()
