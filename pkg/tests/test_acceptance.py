"""Acceptance criteria, one test each, each printing a PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -s`` (or ``-v``).
Everything is exact integer arithmetic; the only numeric limits are the
runtime budgets (5 minutes for the theorem list, 2 minutes for E6).
"""

import json
import time

import pytest
from click.testing import CliRunner

from weylfan.automorphisms import semidirect_certificate
from weylfan.cli import expand_all, main
from weylfan.rootsystem import LieType, RootSystem, catalog
from weylfan.weyl import WeylGroup

THEOREM_TYPES = (
    [f"A{n}" for n in range(2, 7)]
    + [f"B{n}" for n in range(2, 7)]
    + [f"C{n}" for n in range(3, 7)]
    + [f"D{n}" for n in range(4, 7)]
    + ["G2", "F4", "E6"]
)
TOTAL_BUDGET_S = 300.0
E6_BUDGET_S = 120.0


def report(capsys, name, ok, detail=""):
    with capsys.disabled():
        print(f"\n[{'PASS' if ok else 'FAIL'}] {name}" + (f": {detail}" if detail else ""))
    assert ok, detail


def expected_d(t: LieType) -> int:
    if t.family == "A" and t.rank >= 2:
        return 2
    if t.family == "D":
        return 6 if t.rank == 4 else 2
    return 2 if t == LieType("E", 6) else 1


@pytest.fixture(scope="module")
def timed_certificates():
    certs, seconds = {}, {}
    for name in THEOREM_TYPES:
        t0 = time.perf_counter()
        certs[name] = semidirect_certificate(name)
        seconds[name] = time.perf_counter() - t0
    return certs, seconds


@pytest.fixture(scope="module")
def all_reports(tmp_path_factory):
    """Two independent runs of ``verify --all``; raw bytes and exit codes."""
    runner = CliRunner()
    out = []
    for k in range(2):
        path = tmp_path_factory.mktemp(f"run{k}") / "report.json"
        res = runner.invoke(main, ["verify", "--all", "--report", str(path)])
        out.append((res.exit_code, path.read_bytes()))
    return out


def test_theorem_certificates(capsys, timed_certificates):
    certs, seconds = timed_certificates
    failing = [n for n, c in certs.items() if not (c.passed and c.scope == "full" and all(c.checks.values()))]
    total = sum(seconds.values())
    ok = not failing and total < TOTAL_BUDGET_S and seconds["E6"] < E6_BUDGET_S
    report(
        capsys,
        "theorem certificate passes all five checks for A2-A6, B2-B6, C3-C6, D4-D6, G2, F4, E6",
        ok,
        f"{len(certs)} types, failing={failing}, total {total:.1f}s (< {TOTAL_BUDGET_S:.0f}), "
        f"E6 {seconds['E6']:.1f}s (< {E6_BUDGET_S:.0f})",
    )


def test_component_group_orders(capsys, all_reports):
    doc = json.loads(all_reports[0][1])
    bad = []
    for c in doc["certificates"]:
        t = LieType.parse(c["type"])
        if c["order_D"] != expected_d(t):
            bad.append(f"{t}: |D|={c['order_D']}")
        if c["scope"] == "full" and c["order_aut_fan"] != c["order_W"] * c["order_D"]:
            bad.append(f"{t}: |Aut|={c['order_aut_fan']}")
    report(
        capsys,
        "|Aut(fan)| = |W|·|D| with |D| = 2 (A>=2), 6 (D4), 2 (D>=5), 2 (E6), else 1",
        not bad,
        f"{len(doc['certificates'])} types checked; mismatches={bad}",
    )


def test_dual_oracle_aut(capsys, all_reports):
    doc = json.loads(all_reports[0][1])
    names = [str(t) for t in expand_all(8)]
    got = {c["type"]: c for c in doc["certificates"]}
    bad = []
    for n in names:
        c = got.get(n)
        if c is None:
            bad.append(f"{n}: missing")
        elif c["scope"] == "full":
            if not c["checks"]["fan_equals_rootsystem_aut"]:
                bad.append(n)
        elif not c["exception"]["lattice_group_equals_rootsystem_aut"]:
            bad.append(n)
    report(capsys, "Aut(fan) = Aut(Ř) as canonical matrix sets for every fan-scope type",
           not bad, f"{len(names)} types; mismatches={bad}")


def test_dual_weyl_order(capsys):
    types = [t for t in catalog(5)] + [LieType("F", 4), LieType("D", 5), LieType("E", 6)]
    bad = []
    for t in dict.fromkeys(types):
        w = WeylGroup.build(RootSystem.build(t), enumerate=False)
        if len(w.enumerate(cap=w.chain.order)) != w.chain.order:
            bad.append(str(t))
    big = {}
    for name, want in (("E7", 2_903_040), ("E8", 696_729_600)):
        chain = WeylGroup.build(RootSystem.build(name), enumerate=False).chain
        prod = 1
        for k in chain.orbit_lengths:
            prod *= k
        big[name] = (chain.order, prod, chain.verify())
        if not (chain.order == want == prod and chain.verify()):
            bad.append(name)
    report(
        capsys,
        "BFS order = stabilizer-chain order (rank <= 5, F4, D5, E6); E7/E8 chain orders",
        not bad,
        f"{len(set(types))} dual checks; E7/E8 (order, orbit product, verified)={big}; bad={bad}",
    )


def test_a1_exception(capsys):
    res = CliRunner().invoke(main, ["verify", "A1", "--format", "json"])
    doc = json.loads(res.output) if res.exit_code == 0 else {"certificates": [{}]}
    cert = doc["certificates"][0]
    exc = cert.get("exception") or {}
    ok = (
        res.exit_code == 0
        and cert.get("scope") == "exception"
        and exc.get("variety") == "CP1"
        and len(exc.get("fan", {}).get("max_cones", [])) == 2
        and "excludes" in exc.get("reason", "")
    )
    report(capsys, "verify A1 emits the CP1 exception certificate", ok,
           f"exit {res.exit_code}, cones {len(exc.get('fan', {}).get('max_cones', []))}")


def test_fan_property_suite(capsys, all_reports):
    doc = json.loads(all_reports[0][1])
    names = {
        "chamber_count", "facet_pairing", "smooth", "weyl_permutes_chambers",
        "random_points", "stabilizer_equals_diagram",
    }
    bad = []
    checked = 0
    for c in doc["certificates"]:
        if c["scope"] != "full":
            continue
        checked += 1
        fc = c["details"]["fan_checks"]
        if set(fc) != names or not all(fc.values()):
            bad.append(c["type"])
        if c["details"]["chambers"] != c["order_W"]:
            bad.append(c["type"])
    report(capsys, "fan property suite holds for every built fan", not bad and checked > 0,
           f"{checked} fans; failures={bad}")


def test_determinism(capsys, all_reports):
    (e1, r1), (e2, r2) = all_reports
    ok = e1 == 0 and e2 == 0 and r1 == r2
    report(capsys, "two runs of verify --all give byte-identical reports", ok,
           f"exit codes {e1}/{e2}, {len(r1)} bytes, identical={r1 == r2}")
