"""Command line front end: input parsing, suite orchestration, reports.

Subcommands: verify-lemmas, counting, enumerate, analyze, ends.  All
report quantities are exact integers and reports are emitted as
canonical JSON (sorted keys, compact separators), so identical inputs
produce identical bytes.  Exit codes: 0 all assertions pass, 1 a
violation was found, 2 input error.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass

from . import cohomology, ends, fpcore, gog as gogmod, graphs

DEFAULT_LEMMA_ORDER = {2: 16, 3: 27}


class InputError(ValueError):
    """Parse or validation failure, with a location message."""


@dataclass
class WorkbenchConfig:
    prime: int = 2
    subcommand: str = ""
    input_path: str | None = None
    max_edges: int = 7
    max_vertices: int | None = None
    levels: tuple[int, ...] = ()
    order_bound: int = 64
    max_order: int | None = None
    seed: int = 0
    out: str | None = None
    witness_out: str | None = None

    def __post_init__(self):
        if self.prime not in (2, 3):
            raise InputError("prime must be 2 or 3")
        for bound in self.levels:
            if not _is_power(bound, self.prime):
                raise InputError(f"level {bound} is not a power of {self.prime}")


def _is_power(n: int, p: int) -> bool:
    if n < 1:
        return False
    while n % p == 0:
        n //= p
    return n == 1


# -- graph-of-groups JSON ------------------------------------------------


def _group_from_json(spec, prime: int, where: str) -> fpcore.FiniteGroup:
    if not isinstance(spec, dict):
        raise InputError(f"{where}: group spec must be an object")
    try:
        if "table" in spec:
            return fpcore.group_from_table(
                spec.get("name", "table-group"), spec["table"], spec.get("generators", []), prime
            )
        grp = fpcore.make_group(spec)
    except (fpcore.GroupError, KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{where}: {exc}") from exc
    if grp.prime != prime:
        raise InputError(f"{where}: group prime {grp.prime} differs from file prime {prime}")
    return grp


def gog_from_json(data) -> gogmod.GraphOfGroups:
    if not isinstance(data, dict):
        raise InputError("top level must be an object")
    for key in ("prime", "vertices", "edges"):
        if key not in data:
            raise InputError(f"missing top-level key {key!r}")
    prime = data["prime"]
    if prime not in (2, 3):
        raise InputError("prime must be 2 or 3")
    vertex_groups = {}
    vertex_ids = []
    for i, ventry in enumerate(data["vertices"]):
        where = f"vertices[{i}]"
        if "id" not in ventry or "group" not in ventry:
            raise InputError(f"{where}: need 'id' and 'group'")
        vid = ventry["id"]
        vertex_ids.append(vid)
        vertex_groups[vid] = _group_from_json(ventry["group"], prime, f"{where}.group")
    edges = []
    edge_groups, inj0, inj1 = {}, {}, {}
    for i, eentry in enumerate(data["edges"]):
        where = f"edges[{i}]"
        for key in ("id", "from", "to", "group", "inj0", "inj1"):
            if key not in eentry:
                raise InputError(f"{where}: missing key {key!r}")
        eid = eentry["id"]
        u, v = eentry["from"], eentry["to"]
        if u not in vertex_groups or v not in vertex_groups:
            raise InputError(f"{where}: endpoint references unknown vertex (edge {eid!r})")
        ge = _group_from_json(eentry["group"], prime, f"{where}.group")
        edge_groups[eid] = ge
        for key, target in (("inj0", u), ("inj1", v)):
            try:
                hom = fpcore.hom_from_images(ge, vertex_groups[target], eentry[key])
            except fpcore.GroupError as exc:
                raise InputError(f"{where}.{key}: {exc} (edge {eid!r})") from exc
            if not fpcore.is_injective(hom):
                raise InputError(f"{where}.{key}: edge map is not injective (edge {eid!r})")
            (inj0 if key == "inj0" else inj1)[eid] = hom
        edges.append((eid, u, v))
    try:
        return gogmod.GraphOfGroups(
            graph=graphs.Graph(tuple(vertex_ids), tuple(edges)),
            prime=prime,
            vertex_groups=vertex_groups,
            edge_groups=edge_groups,
            inj0=inj0,
            inj1=inj1,
        )
    except (graphs.GraphError, gogmod.GogError) as exc:
        raise InputError(str(exc)) from exc


def gog_to_json(g: gogmod.GraphOfGroups) -> dict:
    def spec_of(grp):
        if grp.spec is not None:
            return grp.spec
        return {
            "name": grp.name,
            "table": [list(map(int, row)) for row in grp.mult],
            "generators": list(grp.generators),
        }

    return {
        "prime": g.prime,
        "vertices": [{"id": v, "group": spec_of(g.vertex_groups[v])} for v in g.graph.vertices],
        "edges": [
            {
                "id": e,
                "from": u,
                "to": v,
                "group": spec_of(g.edge_groups[e]),
                "inj0": [g.inj0[e].image[x] for x in g.edge_groups[e].generators],
                "inj1": [g.inj1[e].image[x] for x in g.edge_groups[e].generators],
            }
            for e, u, v in g.graph.edges
        ],
    }


def parse_input(path: str) -> gogmod.GraphOfGroups:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON: {exc}") from exc
    return gog_from_json(data)


# -- report emission -----------------------------------------------------


def canonical_json(report) -> bytes:
    return (json.dumps(report, sort_keys=True, separators=(",", ":")) + "\n").encode("ascii")


def emit_report(report, path: str | None):
    payload = canonical_json(report)
    if path is None:
        sys.stdout.buffer.write(payload)
        sys.stdout.buffer.flush()
    else:
        with open(path, "wb") as fh:
            fh.write(payload)


# -- suites ---------------------------------------------------------------


def run_verify_lemmas(cfg: WorkbenchConfig) -> tuple[int, dict]:
    max_order = cfg.max_order or DEFAULT_LEMMA_ORDER[cfg.prime]
    findings = []
    checks = 0
    for G in fpcore.catalog_groups(cfg.prime, max_order):
        rep = cohomology.check_h1_regular_vanishes(G)
        checks += 1
        if not rep.ok:
            findings.append(rep.to_json())
        for K in fpcore.all_subgroups(G):
            for check in (
                cohomology.check_h0_norm_formula(K, G),
                cohomology.check_shapiro_dims(K, G, 0),
                cohomology.check_shapiro_dims(K, G, 1),
            ):
                checks += 1
                if not check.ok:
                    findings.append(check.to_json())
    report = {
        "suite": "verify-lemmas",
        "prime": cfg.prime,
        "max_order": max_order,
        "checks": checks,
        "findings": findings,
        "status": "pass" if not findings else "fail",
    }
    return (0 if not findings else 1), report


def run_counting(cfg: WorkbenchConfig) -> tuple[int, dict]:
    if cfg.max_edges <= 8:
        result = graphs.verify_counting_lemma(cfg.max_edges, cfg.max_vertices)
        report = result.to_json()
        report.update({"suite": "counting", "mode": "exhaustive", "max_edges": cfg.max_edges})
        return (0 if result.ok else 1), report
    # sampled mode beyond the exhaustive cap
    rng = random.Random(cfg.seed)
    out = graphs.CountingVerification()
    for _ in range(2000):
        g = graphs.random_multigraph(rng, cfg.max_edges, (cfg.max_vertices or cfg.max_edges + 1))
        if not graphs.graph_stats(g).connected:
            continue
        rep = graphs.counting_report(g)
        out.total += 1
        if not rep.holds:
            (out.exceptional_findings if rep.exceptional else out.violations).append(rep)
    report = out.to_json()
    report.update({"suite": "counting", "mode": "sampled", "max_edges": cfg.max_edges, "seed": cfg.seed})
    return (0 if out.ok else 1), report


def run_enumerate(cfg: WorkbenchConfig) -> tuple[int, dict]:
    reports = []
    for g in graphs.enumerate_connected_multigraphs(cfg.max_edges, cfg.max_vertices or cfg.max_edges + 1):
        reports.append(graphs.counting_report(g).to_json())
    return 0, {"suite": "enumerate", "max_edges": cfg.max_edges, "graphs": reports, "count": len(reports)}


def run_analyze(cfg: WorkbenchConfig) -> tuple[int, dict | list]:
    g = parse_input(cfg.input_path)
    levels = cfg.levels or (cfg.order_bound,)
    reports = []
    witnesses = []
    for bound in levels:
        witness = gogmod.proper_quotient_search(g, bound)
        reports.append(ends.ends_level(g, witness))
        witnesses.append(witness)
    _maybe_emit_witnesses(cfg, g, witnesses)
    payload = [r.to_json() for r in reports]
    bad = any(not (r.bound_holds and r.matching_le_gen) for r in reports)
    return (1 if bad else 0), payload


def run_ends(cfg: WorkbenchConfig) -> tuple[int, dict | list]:
    g = parse_input(cfg.input_path)
    witness = gogmod.proper_quotient_search(g, cfg.order_bound)
    report = ends.ends_level(g, witness)
    _maybe_emit_witnesses(cfg, g, [witness])
    bad = not (report.bound_holds and report.matching_le_gen)
    return (1 if bad else 0), [report.to_json()]


def _maybe_emit_witnesses(cfg: WorkbenchConfig, g, witnesses):
    if cfg.witness_out is None:
        return
    emit_report([w.to_json(g) for w in witnesses], cfg.witness_out)


def run_suite(cfg: WorkbenchConfig) -> tuple[int, object]:
    """Dispatch; returns (exit code, report object)."""
    if cfg.subcommand == "verify-lemmas":
        return run_verify_lemmas(cfg)
    if cfg.subcommand in ("counting", "verify-counting"):
        return run_counting(cfg)
    if cfg.subcommand == "enumerate":
        return run_enumerate(cfg)
    if cfg.subcommand == "analyze":
        return run_analyze(cfg)
    if cfg.subcommand == "ends":
        return run_ends(cfg)
    raise InputError(f"unknown subcommand {cfg.subcommand!r}")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gogends",
        description="Exact checks for ends of fundamental groups of graphs of finite p-groups",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p, with_input=False):
        p.add_argument("--prime", type=int, default=2, choices=(2, 3))
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", type=str, default=None)
        if with_input:
            p.add_argument("input", type=str)

    p = sub.add_parser("verify-lemmas", help="cohomology lemma suite over the group catalog")
    common(p)
    p.add_argument("--max-order", type=int, default=None)

    p = sub.add_parser(
        "counting",
        aliases=["verify-counting"],
        help="edge-count bound over all small connected multigraphs",
    )
    common(p)
    p.add_argument("--max-edges", type=int, default=7)
    p.add_argument("--max-vertices", type=int, default=None)

    p = sub.add_parser("enumerate", help="list connected multigraphs up to isomorphism")
    common(p)
    p.add_argument("--max-edges", type=int, default=4)
    p.add_argument("--max-vertices", type=int, default=None)

    p = sub.add_parser("analyze", help="per-level ends reports for a graph of groups file")
    common(p, with_input=True)
    p.add_argument("--levels", type=str, default="")
    p.add_argument("--order-bound", type=int, default=64)
    p.add_argument("--witness-out", type=str, default=None)

    p = sub.add_parser("ends", help="ends report at the minimal witness level")
    common(p, with_input=True)
    p.add_argument("--order-bound", type=int, default=64)
    p.add_argument("--witness-out", type=str, default=None)

    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        levels = tuple(int(x) for x in args.levels.split(",") if x) if getattr(args, "levels", "") else ()
        cfg = WorkbenchConfig(
            prime=args.prime,
            subcommand=args.subcommand,
            input_path=getattr(args, "input", None),
            max_edges=getattr(args, "max_edges", 7),
            max_vertices=getattr(args, "max_vertices", None),
            levels=levels,
            order_bound=getattr(args, "order_bound", 64),
            max_order=getattr(args, "max_order", None),
            seed=args.seed,
            out=args.out,
            witness_out=getattr(args, "witness_out", None),
        )
        code, report = run_suite(cfg)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except gogmod.NotFoundWithinBound as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ends.OracleMismatch as exc:
        print(f"oracle mismatch: {exc}", file=sys.stderr)
        return 1
    emit_report(report, cfg.out)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
