"""Command-line front end.

Exit codes: 0 all good, 1 a certificate check failed, 2 usage or scope error.
"""

from __future__ import annotations

import json
import logging
import sys

import click

from .automorphisms import component_group, semidirect_certificate
from .dynkin import diagram_automorphisms
from .fan import OutOfFanScope, build_fan, fan_scope_check
from .rootsystem import InvalidLieType, LieType, RootSystem, catalog
from .weyl import FAN_SCOPE_ORDER, WeylGroup

log = logging.getLogger("weylfan")


class LieTypeParam(click.ParamType):
    name = "TYPE"

    def convert(self, value, param, ctx):
        if isinstance(value, LieType):
            return value
        try:
            return LieType.parse(value)
        except InvalidLieType as exc:
            self.fail(str(exc), param, ctx)


LIE_TYPE = LieTypeParam()


def expand_all(max_rank: int, allow_e7: bool = False) -> list[LieType]:
    """Catalog types up to ``max_rank`` whose fan is in scope, catalog order."""
    out = []
    for t in catalog(max_rank):
        w = WeylGroup.build(RootSystem.build(t), enumerate=False)
        try:
            fan_scope_check(w, allow_e7=allow_e7)
        except OutOfFanScope:
            continue
        out.append(t)
    return out


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def _write(path, text: str):
    if path in (None, "-"):
        click.echo(text, nl=False)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


@click.group()
@click.option("-v", "--verbose", count=True, help="More logging.")
def main(verbose):
    """Weyl-chamber fans of torus closures and their automorphism groups."""
    logging.basicConfig(
        level=logging.WARNING - 10 * verbose, format="%(levelname)s %(name)s: %(message)s"
    )


@main.command()
@click.argument("lie_type", type=LIE_TYPE)
@click.option("--format", "fmt", type=click.Choice(["table", "json"]), default="table")
def info(lie_type, fmt):
    """Cartan matrix, coroot count, Weyl order and |D| for one type."""
    rs = RootSystem.build(lie_type)
    w = WeylGroup.build(rs, enumerate=False)
    order_chain = w.chain.order
    order_bfs = None
    if order_chain <= FAN_SCOPE_ORDER:
        order_bfs = len(w.enumerate(cap=order_chain))
    out = {
        "type": str(lie_type),
        "rank": rs.rank,
        "cartan": [list(r) for r in rs.cartan],
        "coroots": len(rs.coroots),
        "order_W_chain": order_chain,
        "order_W_enumerated": order_bfs,
        "order_D": len(diagram_automorphisms(rs.cartan)),
        "exception": None,
    }
    if lie_type == LieType("A", 1):
        out["exception"] = (
            "A1: the torus closure is CP1; its automorphism group PSL(2, C) is "
            "connected and the semidirect-product theorem does not apply"
        )
    if fmt == "json":
        click.echo(_dump(out), nl=False)
        return
    click.echo(f"type        {out['type']}")
    click.echo(f"rank        {out['rank']}")
    click.echo("cartan      " + "\n            ".join(" ".join(f"{x:>2}" for x in r) for r in rs.cartan))
    click.echo(f"|coroots|   {out['coroots']}")
    bfs = out["order_W_enumerated"]
    click.echo(f"|W|         {order_chain} (chain)" + (f", {bfs} (enumerated)" if bfs else ""))
    click.echo(f"|D|         {out['order_D']}")
    if out["exception"]:
        click.echo(f"note        {out['exception']}")


@main.command()
@click.argument("lie_type", type=LIE_TYPE)
@click.option("--json", "json_path", type=click.Path(dir_okay=False), default=None,
              help="Write the fan here (default: stdout).")
@click.option("--allow-e7", is_flag=True, help="Permit the 2.9M-chamber E7 fan.")
def fan(lie_type, json_path, allow_e7):
    """Build the Weyl fan and emit it as canonical JSON."""
    rs = RootSystem.build(lie_type)
    w = WeylGroup.build(rs, enumerate=False)
    try:
        fan_scope_check(w, allow_e7=allow_e7)
    except OutOfFanScope as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    w.enumerate(cap=w.chain.order)
    f = build_fan(rs, w)
    _write(json_path, _dump(f.to_json()))
    if json_path:
        click.echo(f"{lie_type}: {len(f.rays)} rays, {len(f.max_cones)} cones -> {json_path}", err=True)


@main.command()
@click.argument("lie_type", type=LIE_TYPE)
@click.option("--format", "fmt", type=click.Choice(["table", "json"]), default="table")
@click.option("--json", "json_path", type=click.Path(dir_okay=False), default=None)
@click.option("--allow-e7", is_flag=True)
@click.option("--seed", type=int, default=0, show_default=True)
def aut(lie_type, fmt, json_path, allow_e7, seed):
    """Automorphism groups of the fan and coroot system; component group."""
    try:
        cert = semidirect_certificate(lie_type, allow_e7=allow_e7, seed=seed)
    except OutOfFanScope as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    report = component_group(cert)
    report["order_aut_fan"] = cert.order_aut_fan
    report["order_aut_rootsystem"] = cert.order_aut_rootsystem
    if json_path:
        _write(json_path, _dump(report))
    if fmt == "json":
        click.echo(_dump(report), nl=False)
    else:
        for key in ("type", "status", "order", "isomorphic_to", "order_aut_fan", "order_aut_rootsystem"):
            if key in report:
                click.echo(f"{key:<22}{report[key]}")
        if "detail" in report:
            click.echo(f"{'detail':<22}{report['detail']}")
    sys.exit(0 if cert.passed else 1)


@main.command()
@click.argument("types", nargs=-1, type=LIE_TYPE)
@click.option("--all", "all_types", is_flag=True, help="Every catalog type in fan scope.")
@click.option("--max-rank", type=click.IntRange(1, 8), default=8, show_default=True)
@click.option("--report", type=click.Path(dir_okay=False), default=None,
              help="Write the JSON report here.")
@click.option("--format", "fmt", type=click.Choice(["table", "json"]), default="table")
@click.option("--allow-e7", is_flag=True)
@click.option("--timings", is_flag=True, help="Include wall-clock times (report is then not reproducible).")
@click.option("--seed", type=int, default=0, show_default=True)
def verify(types, all_types, max_rank, report, fmt, allow_e7, timings, seed):
    """Run the semidirect-product certificate for each type."""
    if all_types and types:
        raise click.UsageError("give either explicit types or --all, not both")
    if not all_types and not types:
        raise click.UsageError("no types given (use --all for the whole catalog)")
    todo = expand_all(max_rank, allow_e7) if all_types else sorted(set(types), key=lambda t: t.catalog_index)

    certs = []
    for t in todo:
        try:
            cert = semidirect_certificate(t, allow_e7=allow_e7, seed=seed)
        except OutOfFanScope as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(2)
        log.info("%s done in %.0f ms", t, cert.elapsed_ms)
        certs.append(cert)

    failed = [str(c.lie_type) for c in certs if not c.passed]
    doc = {
        "certificates": [c.to_json(timings=timings) for c in certs],
        "summary": {
            "count": len(certs),
            "passed": len(certs) - len(failed),
            "exceptions": [str(c.lie_type) for c in certs if c.scope == "exception"],
            "failed": failed,
        },
    }
    if report:
        _write(report, _dump(doc))
    if fmt == "json":
        click.echo(_dump(doc), nl=False)
    else:
        click.echo(f"{'type':<6}{'scope':<11}{'|W|':>12}{'|D|':>5}{'|Aut fan|':>12}{'|Aut R|':>12}  result")
        for c in certs:
            verdict = "exception" if c.scope == "exception" else ("pass" if c.passed else "FAIL")
            line = (
                f"{str(c.lie_type):<6}{c.scope:<11}{c.order_W:>12}{c.order_D:>5}"
                f"{_fmt(c.order_aut_fan):>12}{_fmt(c.order_aut_rootsystem):>12}  {verdict}"
            )
            if timings:
                line += f"  {c.elapsed_ms:.0f} ms"
            click.echo(line)
    sys.exit(1 if failed else 0)


def _fmt(x):
    return "-" if x is None else str(x)


if __name__ == "__main__":  # pragma: no cover
    main()
