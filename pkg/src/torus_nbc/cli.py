"""Command line front end.

Subcommands: info, kappa, kappa-nb, verify, simulate, paths.  Exit codes:
0 success, 1 a verification found a violation, 2 usage or parse problems,
3 a search gave up because its subset budget was exhausted.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import random
import sys
import warnings
from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import (
    BudgetExceededError,
    InvalidVertexError,
    MeshParseError,
    TheoremOutOfScopeWarning,
    UnsupportedMeshError,
)
from .graphs import (
    AliveGraph,
    GraphState,
    classify,
    connected_components,
    disjoint_paths,
    fan,
    validate_path_bundle,
    vertex_connectivity,
)
from .mesh import Mesh, parse_mesh
from .neighbor import (
    common_neighbor_count,
    fault_profile,
    healthy_layer_check,
    healthy_pair_count,
    kappa_nb_exact,
    survival_graph,
    upper_bound_witness,
    verify_survival_lower_bound,
)
from .simulate import PoolPolicy, SimulationReport, run_simulation

#: Largest mesh the CLI will compute exact connectivity for on its own.
_EXACT_KAPPA_CAP = 4096
#: Subset budget for the searches `verify` runs implicitly.
_VERIFY_SEARCH_BUDGET = 2_000_000


@dataclass
class RunConfig:
    """Everything a subcommand needs, extracted from parsed arguments."""

    mesh: Mesh
    fmt: str = "text"
    out: Optional[str] = None
    workers: int = 1
    seed: int = 0
    trials: int = 0
    pool: PoolPolicy = PoolPolicy.EXCLUDE_SOURCES
    max_l: Optional[int] = None
    budget: int = 10_000_000
    samples: int = 1000
    faults: Optional[list[tuple[int, ...]]] = None
    vertices: Optional[list[tuple[int, ...]]] = None


def _default_workers() -> int:
    raw = os.environ.get("TORUS_NBC_WORKERS", "")
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            pass
    return 1


def _parse_vertex(text: str, mesh: Mesh) -> tuple[int, ...]:
    parts = [p.strip() for p in text.split(",")]
    try:
        coords = tuple(int(p) for p in parts)
    except ValueError:
        raise InvalidVertexError(f"cannot parse vertex {text!r}") from None
    return mesh.as_coords(coords)


def _parse_faults(text: str, mesh: Mesh) -> list[tuple[int, ...]]:
    if text.startswith("@"):
        with open(text[1:], "r", encoding="utf-8") as fh:
            text = fh.read()
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidVertexError(f"fault list is not valid JSON: {exc}") from None
    if not isinstance(raw, list):
        raise InvalidVertexError("fault list must be a JSON array of vertices")
    return [mesh.as_coords(v) for v in raw]


def _coords_json(vertices) -> list[list[int]]:
    return [list(v) for v in vertices]


def _emit(cfg: RunConfig, payload: dict, text_lines: list[str]) -> None:
    if cfg.fmt == "json":
        body = json.dumps(payload, indent=2)
    else:
        body = "\n".join(text_lines)
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(body + "\n")
    else:
        print(body)


# -- subcommands -----------------------------------------------------------


def cmd_info(cfg: RunConfig) -> int:
    m = cfg.mesh
    payload = {
        "mesh": m.literal,
        "n": m.n,
        "dims": list(m.dims),
        "vertices": m.vertex_count,
        "degree": m.degree,
    }
    lines = [
        f"mesh {m.literal}: n={m.n} vertices={m.vertex_count} degree={m.degree}",
    ]
    if m.all_dims_ge_3 and m.n >= 2:
        payload["connectivity"] = {"value": 2 * m.n, "method": "formula"}
        payload["nb_threshold"] = {"value": m.n, "method": "formula"}
        lines.append(f"connectivity: {2 * m.n} (formula)")
        lines.append(f"neighbor-fault threshold: {m.n} (formula)")
    elif m.vertex_count <= _EXACT_KAPPA_CAP:
        kappa = vertex_connectivity(AliveGraph.full(m))
        payload["connectivity"] = {"value": kappa, "method": "computed"}
        lines.append(f"connectivity: {kappa} (computed)")
    else:
        lines.append("connectivity: not computed (mesh too large)")
    _emit(cfg, payload, lines)
    return 0


def cmd_kappa(cfg: RunConfig) -> int:
    m = cfg.mesh
    if cfg.faults is not None:
        g = survival_graph(m, cfg.faults)
        label = f"survival graph of {m.literal} minus {len(g.faults.sources)} sources"
    else:
        g = AliveGraph.full(m)
        label = f"mesh {m.literal}"
    state = classify(g)
    kappa = vertex_connectivity(g)
    payload = {
        "mesh": m.literal,
        "faults": _coords_json(cfg.faults) if cfg.faults is not None else None,
        "alive": g.alive_count,
        "state": state.token,
        "connectivity": kappa,
    }
    lines = [
        f"{label}: alive={g.alive_count} state={state.token} connectivity={kappa}"
    ]
    _emit(cfg, payload, lines)
    return 0


def cmd_kappa_nb(cfg: RunConfig) -> int:
    m = cfg.mesh
    result = kappa_nb_exact(m, ell_max=cfg.max_l, max_subsets=cfg.budget,
                            workers=cfg.workers)
    payload = {
        "mesh": m.literal,
        "value": result.value,
        "witness": _coords_json(result.witness) if result.witness else None,
        "subsets_examined": result.subsets_examined,
        "resolved": result.resolved,
        "max_size_searched": result.max_size_searched,
    }
    if result.resolved:
        lines = [
            f"neighbor-fault threshold of {m.literal}: {result.value}",
            f"witness sources: {list(result.witness)}",
            f"subsets examined: {result.subsets_examined}",
        ]
    else:
        lines = [
            f"neighbor-fault threshold of {m.literal}: unresolved "
            f"(no fault set of size <= {result.max_size_searched} works)",
            f"subsets examined: {result.subsets_examined}",
        ]
    _emit(cfg, payload, lines)
    return 0


def _verify_battery(cfg: RunConfig, lines: list[str], checks: list[dict]) -> bool:
    """Run the verification battery; returns True if everything held."""
    m = cfg.mesh
    ok = True

    def record(name: str, passed: bool, detail: str) -> None:
        nonlocal ok
        ok = ok and passed
        checks.append({"check": name, "passed": passed, "detail": detail})
        lines.append(f"{'ok  ' if passed else 'FAIL'} {name}: {detail}")

    in_scope = m.all_dims_ge_3 and m.n >= 2
    if not in_scope:
        warnings.warn(
            f"{m.literal} has a dimension below 3; closed-form checks skipped",
            TheoremOutOfScopeWarning,
            stacklevel=2,
        )
        lines.append(f"note: {m.literal} is outside closed-form scope; "
                     "formula checks skipped")

    rng = random.Random(cfg.seed)
    v_count = m.vertex_count

    # exact connectivity against the closed form
    if in_scope and v_count <= _EXACT_KAPPA_CAP:
        kappa = vertex_connectivity(AliveGraph.full(m))
        record("connectivity", kappa == 2 * m.n,
               f"exact {kappa}, expected {2 * m.n}")

    # exact threshold against the closed form, when the search is affordable
    if in_scope:
        cost = sum(math.comb(v_count - 1, j) for j in range(m.n))
        if cost <= _VERIFY_SEARCH_BUDGET:
            result = kappa_nb_exact(m, workers=cfg.workers)
            record("nb-threshold", result.value == m.n,
                   f"exact {result.value}, expected {m.n}")
        else:
            lines.append("note: exhaustive threshold search skipped "
                         f"({cost} subsets exceed the verify budget)")

    # constructive witness breaks the mesh
    if in_scope:
        witness = upper_bound_witness(m)
        g = survival_graph(m, witness)
        state = classify(g)
        terminal = state in (GraphState.COMPLETE, GraphState.DISCONNECTED,
                             GraphState.EMPTY)
        detail = f"|U|={len(witness)} leaves state {state.token}"
        if state is GraphState.DISCONNECTED:
            comps = connected_components(g)
            zero = (0,) * m.n
            lone = any(c == (zero,) for c in comps)
            terminal = terminal and lone
            detail += f", all-zeros vertex isolated: {lone}"
        record("witness", terminal, detail)

    # common-neighbor counts stay within their ranges
    pairs = min(cfg.samples, v_count * (v_count - 1) // 2)
    bad = 0
    for _ in range(pairs):
        x = rng.randrange(v_count)
        y = rng.randrange(v_count)
        if x == y:
            continue
        c = common_neighbor_count(m, x, y)
        if c not in (0, 1, 2):
            bad += 1
        elif m.adjacent(x, y) and c == 2:
            bad += 1
    record("common-neighbors", bad == 0,
           f"{pairs} sampled pairs, {bad} out of range")

    # survival connectivity bound on random small fault sets
    if in_scope:
        violations = 0
        for _ in range(cfg.samples):
            ell = rng.randint(1, m.n)
            sources = rng.sample(range(v_count), ell)
            report = verify_survival_lower_bound(m, sources)
            if not report.holds:
                violations += 1
        record("survival-bound", violations == 0,
               f"{cfg.samples} random fault sets, {violations} below bound")

    # layer structure under small fault sets
    if in_scope and m.n >= 3:
        layer_bad = 0
        pair_bad = 0
        for _ in range(cfg.samples):
            ell = rng.randint(1, m.n - 1)
            sources = rng.sample(range(v_count), ell)
            axis = rng.randint(1, m.n)
            d = m.dims[axis - 1]
            if not healthy_layer_check(m, sources, axis):
                layer_bad += 1
            i = rng.randrange(d)
            j = (i + 1) % d
            hp = healthy_pair_count(m, sources, axis, i, j)
            if not hp.exceeds_threshold:
                pair_bad += 1
        record("healthy-layers", layer_bad == 0,
               f"{cfg.samples} fault sets, {layer_bad} with a dead layer")
        record("healthy-pairs", pair_bad == 0,
               f"{cfg.samples} fault sets, {pair_bad} at or below threshold")

    return ok


def cmd_verify(cfg: RunConfig) -> int:
    lines: list[str] = []
    checks: list[dict] = []
    ok = _verify_battery(cfg, lines, checks)
    payload = {"mesh": cfg.mesh.literal, "passed": ok, "checks": checks}
    lines.append("all checks passed" if ok else "violations found")
    _emit(cfg, payload, lines)
    return 0 if ok else 1


def cmd_simulate(cfg: RunConfig) -> int:
    report = run_simulation(cfg.mesh, cfg.trials, cfg.seed, cfg.pool,
                            workers=cfg.workers)
    if cfg.out:
        with open(cfg.out + ".json", "w", encoding="utf-8") as fh:
            fh.write(report.to_json() + "\n")
        with open(cfg.out + ".csv", "w", encoding="utf-8") as fh:
            fh.write(report.to_csv())
    if cfg.fmt == "json":
        print(report.to_json())
    elif cfg.fmt == "csv":
        print(report.to_csv(), end="")
    else:
        print(f"mesh {report.mesh.literal}: {report.trials} trials, "
              f"seed {report.seed}, pool {report.pool_policy.value}")
        print(f"mean {report.mean:.2f}  median {report.median}  "
              f"mode {report.mode}  min {report.min_observed}")
        for mu, count in report.histogram.items():
            share = count / report.trials
            print(f"  {mu:4d}  {count:10d}  {share:7.2%}")
        if cfg.out:
            print(f"wrote {cfg.out}.json and {cfg.out}.csv")
    return 0


def cmd_paths(cfg: RunConfig) -> int:
    m = cfg.mesh
    if cfg.faults is not None:
        g: AliveGraph = survival_graph(m, cfg.faults)
    else:
        g = AliveGraph.full(m)
    source, *targets = cfg.vertices
    if len(targets) == 1:
        bundle = disjoint_paths(g, source, targets[0])
    else:
        bundle = fan(g, source, targets)
    validate_path_bundle(g, bundle)
    payload = {
        "mesh": m.literal,
        "source": list(bundle.source),
        "targets": _coords_json(bundle.targets),
        "count": bundle.count,
        "partial": bundle.partial,
        "paths": [_coords_json(p) for p in bundle.paths],
    }
    lines = [
        f"{bundle.count} disjoint paths from {bundle.source} "
        f"to {list(bundle.targets)}" + (" (partial)" if bundle.partial else "")
    ]
    for p in bundle.paths:
        lines.append("  " + " -> ".join(str(v) for v in p))
    _emit(cfg, payload, lines)
    return 0


# -- argument plumbing -----------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="torus-nbc",
        description="Toroidal mesh connectivity and neighbor-fault analysis",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, formats=("text", "json")) -> None:
        p.add_argument("mesh", help="mesh literal, e.g. 3x4x5")
        p.add_argument("--format", choices=formats, default="text")
        p.add_argument("--out", default=None, help="write output to this path")
        p.add_argument("--workers", type=int, default=None,
                       help="worker threads (default: TORUS_NBC_WORKERS or 1)")

    p = sub.add_parser("info", help="structural summary of a mesh")
    common(p)

    p = sub.add_parser("kappa", help="exact connectivity, optionally after faults")
    common(p)
    p.add_argument("--faults", default=None,
                   help="JSON array of fault sources, or @file")

    p = sub.add_parser("kappa-nb", help="exact neighbor-fault threshold")
    common(p)
    p.add_argument("--max-l", type=int, default=None,
                   help="largest fault-set size to try (default: n)")
    p.add_argument("--budget", type=int, default=10_000_000,
                   help="subset budget for the search")

    p = sub.add_parser("verify", help="check the structural claims on a mesh")
    common(p)
    p.add_argument("--samples", type=int, default=1000,
                   help="random samples per check")
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("simulate", help="random fault accumulation experiment")
    common(p, formats=("text", "json", "csv"))
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--pool", choices=[pp.value for pp in PoolPolicy],
                   default=PoolPolicy.EXCLUDE_SOURCES.value,
                   help="which vertices stay eligible as sources")

    p = sub.add_parser("paths", help="disjoint paths between vertices")
    common(p)
    p.add_argument("vertices", nargs="+", metavar="VERTEX",
                   help="source then one or more targets, e.g. 0,0,0 1,2,3")
    p.add_argument("--faults", default=None,
                   help="JSON array of fault sources, or @file")

    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    mesh = parse_mesh(args.mesh)
    cfg = RunConfig(mesh=mesh)
    cfg.fmt = getattr(args, "format", "text")
    cfg.out = getattr(args, "out", None)
    workers = getattr(args, "workers", None)
    cfg.workers = workers if workers and workers > 0 else _default_workers()
    cfg.seed = getattr(args, "seed", 0)
    cfg.trials = getattr(args, "trials", 0)
    if hasattr(args, "pool"):
        cfg.pool = PoolPolicy.from_token(args.pool)
    cfg.max_l = getattr(args, "max_l", None)
    cfg.budget = getattr(args, "budget", 10_000_000)
    cfg.samples = getattr(args, "samples", 1000)
    if getattr(args, "faults", None) is not None:
        cfg.faults = _parse_faults(args.faults, mesh)
    if getattr(args, "vertices", None) is not None:
        if len(args.vertices) < 2:
            raise InvalidVertexError("need a source and at least one target")
        cfg.vertices = [_parse_vertex(v, mesh) for v in args.vertices]
    return cfg


_COMMANDS = {
    "info": cmd_info,
    "kappa": cmd_kappa,
    "kappa-nb": cmd_kappa_nb,
    "verify": cmd_verify,
    "simulate": cmd_simulate,
    "paths": cmd_paths,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _config_from_args(args)
    except (MeshParseError, InvalidVertexError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        return _COMMANDS[args.command](cfg)
    except BudgetExceededError as exc:
        print(f"budget exhausted: {exc} "
              f"({exc.examined} subsets examined)", file=sys.stderr)
        return 3
    except (InvalidVertexError, UnsupportedMeshError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
