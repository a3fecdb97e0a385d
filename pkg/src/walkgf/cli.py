"""Command-line front end.

Every subcommand reads a graph document, runs one analysis and writes a
report ``{"meta": ..., "payload": ..., "warnings": [...]}`` to stdout.
Exit status: 0 on success, 1 on analytic or I/O errors, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import csv
import datetime as _dt
import io
import json
import math
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import __version__
from .calculus import (
    avoid_links_matrix,
    avoid_nodes_matrix,
    compute_M,
    group_intercentrality,
    through_links_matrix,
    through_nodes_matrix,
)
from .diffusion import (
    DiffusionQuery,
    Mode,
    horizon_tail_bound,
    intermediary_report,
    simulate_diffusion,
    target_centrality_group,
    target_series_group,
)
from .errors import WalkGFError
from .graph import InterventionSpec, Network, apply_intervention, check_convergence, read_network, remove_nodes, spectral_bound
from .intervention import delta_M, key_group_search, key_link_search, single_link_change, total_walk_change
from .linkbuild import compare_constructions
from .oracle import Restriction, enumerate_walks
from .series import format_rational, parse_rational

__all__ = ["CommandRequest", "UsageError", "parse_request", "execute", "write_report", "main"]

DEFAULT_ORDER = 16
ORACLE_MAX_ORDER = 8

DOC_NOTE = "see docs/formula_notes.md"


class UsageError(Exception):
    pass


# -- argument types ---------------------------------------------------------


def _nodes(text: str) -> tuple:
    try:
        return tuple(int(tok) for tok in text.split(",") if tok.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _links(text: str) -> tuple:
    out = []
    for tok in text.split(","):
        tok = tok.strip()
        if not tok:
            continue
        a, sep, b = tok.partition("-")
        try:
            if not sep:
                raise ValueError
            out.append((int(a), int(b)))
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected links as a-b pairs, got {tok!r}") from None
    return tuple(out)


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected a rational p/q, got {text!r}") from None


def _mode(text: str) -> str:
    return text.strip().lower()


FLAGS = {
    "graph": dict(metavar="PATH", help="graph JSON document"),
    "order": dict(type=int, help=f"truncation order (default {DEFAULT_ORDER})"),
    "x": dict(type=_rational, help="evaluation point as p/q"),
    "delta": dict(type=float, help="per-link transmission probability"),
    "mode": dict(type=_mode, help="sender|target|both (diffusion) or exhaustive|greedy (key-group)"),
    "sender": dict(type=int),
    "targets": dict(type=_nodes, help="comma-separated nodes"),
    "set": dict(help="comma-separated nodes, or a-b links for avoid-links"),
    "remove": dict(type=_links, help="links to delete, a-b pairs"),
    "add": dict(type=_links, help="links to add, a-b pairs"),
    "size": dict(type=int),
    "i": dict(type=int),
    "j": dict(type=int),
    "tset": dict(type=_nodes, help="comma-separated nodes to connect"),
    "reps": dict(type=int, help="Monte Carlo replications (default 20000)"),
    "horizon": dict(type=int, help="simulation periods (default 40)"),
    "seed": dict(type=int, help="random seed (default 0)"),
}

MATRIX_COMMANDS = ("gf", "avoid-nodes", "avoid-links", "intervene")

# subcommand -> (required flags, optional flags)
COMMANDS = {
    "gf": (("graph",), ("order", "x")),
    "avoid-nodes": (("graph", "set"), ("order", "x")),
    "avoid-links": (("graph", "set"), ("order", "x")),
    "intervene": (("graph",), ("remove", "add", "order", "x")),
    "intercentrality": (("graph", "set"), ("order", "x")),
    "key-group": (("graph", "size", "x"), ("mode",)),
    "key-link": (("graph", "x"), ()),
    "target": (("graph", "sender", "targets", "delta"), ("mode", "order")),
    "intermediary": (("graph", "i", "j", "delta"), ("order",)),
    "simulate": (("graph", "sender", "targets", "delta"), ("mode", "reps", "horizon", "seed", "order")),
    "compare-links": (("graph", "i", "j", "tset"), ("order",)),
    "oracle-check": ((), ("graph", "order", "seed")),
}


@dataclass
class CommandRequest:
    subcommand: str
    graph_path: str | None
    format: str = "json"
    params: dict = field(default_factory=dict)

    def get(self, key, default=None):
        v = self.params.get(key)
        return default if v is None else v


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="walkgf", description="Exact walk generating functions for networks.")
    parser.add_argument("--version", action="version", version=f"walkgf {__version__}")
    sub = parser.add_subparsers(dest="subcommand", metavar="SUBCOMMAND", parser_class=_Parser)
    sub.required = True
    for name, (required, optional) in COMMANDS.items():
        p = sub.add_parser(name)
        for flag in required:
            p.add_argument(f"--{flag}", required=True, **FLAGS[flag])
        for flag in optional:
            p.add_argument(f"--{flag}", **FLAGS[flag])
        formats = ["json", "csv"] if name in MATRIX_COMMANDS else ["json"]
        p.add_argument("--format", choices=formats, default="json")
    return parser


def _check_duplicates(argv) -> None:
    seen = set()
    for tok in argv:
        if tok.startswith("--"):
            name = tok.split("=", 1)[0]
            if name in seen:
                raise UsageError(f"duplicate flag {name}")
            seen.add(name)


def parse_request(argv) -> CommandRequest:
    argv = list(argv)
    _check_duplicates(argv)
    ns = build_parser().parse_args(argv)
    params = {k: v for k, v in vars(ns).items() if k not in ("subcommand", "format") and v is not None}
    cmd = ns.subcommand
    if cmd == "avoid-links":
        params["set"] = _parse_with(_links, params["set"])
    elif "set" in params:
        params["set"] = _parse_with(_nodes, params["set"])
    if cmd == "intervene" and not params.get("remove") and not params.get("add"):
        raise UsageError("intervene needs --remove and/or --add")
    if "mode" in params:
        allowed = ("exhaustive", "greedy") if cmd == "key-group" else ("sender", "target", "both")
        if params["mode"] not in allowed:
            raise UsageError(f"--mode must be one of {', '.join(allowed)}")
    if cmd == "oracle-check" and params.get("order", 0) > ORACLE_MAX_ORDER:
        raise UsageError(f"oracle-check supports --order up to {ORACLE_MAX_ORDER}")
    for key in ("order", "size", "reps", "horizon"):
        if key in params and params[key] < (0 if key == "order" else 1):
            raise UsageError(f"--{key} out of range")
    return CommandRequest(cmd, params.pop("graph", None), ns.format, params)


def _parse_with(fn, text):
    try:
        return fn(text)
    except argparse.ArgumentTypeError as exc:
        raise UsageError(str(exc)) from None


# -- formatting helpers -----------------------------------------------------


def _num(v):
    v = float(v)
    if not math.isfinite(v):
        return None
    return float(f"{v:.12g}")


def _num_matrix(a: np.ndarray) -> list:
    return [[_num(v) for v in row] for row in a]


def _echo(v):
    if isinstance(v, Fraction):
        return format_rational(v)
    if isinstance(v, tuple):
        if v and isinstance(v[0], tuple):
            return [f"{a}-{b}" for a, b in v]
        return list(v)
    return v


def _timestamp():
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    if not epoch:
        return None
    return _dt.datetime.fromtimestamp(int(epoch), tz=_dt.timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def _orient(net: Network, links) -> tuple:
    # an undirected document's "a-b" means the edge, i.e. both orientations
    links = tuple(links or ())
    if net.directed:
        return links
    return tuple(sorted(set(links) | {(b, a) for a, b in links}))


def _tail_warnings(net: Network, x0: float, order: int) -> list:
    out = []
    lam = spectral_bound(net)
    if lam > 0 and x0 * lam > 0.95:
        out.append(f"evaluation point is within 5% of the convergence bound 1/lambda_max = {1 / lam:.12g}")
    tail = horizon_tail_bound(net, x0, order)
    if x0 > 0 and tail > 0:
        out.append(f"values are partial sums through order {order}; estimated omitted tail per entry {tail:.3g}")
    return out


# -- subcommand handlers ----------------------------------------------------


def _series_matrix_payload(mat, req, net, payload, warnings, key="matrix"):
    payload[key] = mat.to_json()
    x = req.get("x")
    if x is not None:
        check_convergence(net, float(x))
        payload["value"] = _num_matrix(mat.evaluate(float(x)))
        warnings.extend(_tail_warnings(net, float(x), mat.order))


def _run_gf(req, net, payload, warnings):
    M = compute_M(net, req.get("order", DEFAULT_ORDER))
    _series_matrix_payload(M, req, net, payload, warnings)


def _run_avoid_nodes(req, net, payload, warnings):
    M = compute_M(net, req.get("order", DEFAULT_ORDER))
    A = req.get("set")
    payload["set"] = list(A)
    _series_matrix_payload(avoid_nodes_matrix(M, A), req, net, payload, warnings)


def _run_avoid_links(req, net, payload, warnings):
    M = compute_M(net, req.get("order", DEFAULT_ORDER))
    L = _orient(net, req.get("set"))
    payload["links"] = [f"{a}-{b}" for a, b in L]
    absent = [f"{a}-{b}" for a, b in L if not (0 <= a < net.n and 0 <= b < net.n and net.has_link(a, b))]
    if absent:
        warnings.append(f"links not in the network are ignored: {', '.join(absent)}")
    _series_matrix_payload(avoid_links_matrix(M, L), req, net, payload, warnings)


def _run_intervene(req, net, payload, warnings):
    T = req.get("order", DEFAULT_ORDER)
    spec = InterventionSpec(remove=_orient(net, req.get("remove")), add=_orient(net, req.get("add")))
    spec.validate(net)
    M = compute_M(net, T)
    payload["remove"] = [f"{a}-{b}" for a, b in spec.remove]
    payload["add"] = [f"{a}-{b}" for a, b in spec.add]
    _series_matrix_payload(delta_M(M, spec), req, net, payload, warnings, key="delta_matrix")
    total = total_walk_change(M, None, spec)
    payload["total_change"] = total.to_json()
    if req.get("x") is not None:
        payload["total_change_value"] = _num(total.evaluate(float(req.get("x"))))
    warnings.append(f"generating-matrix change uses the ordering xMD(I - xMD)^-1 M; {DOC_NOTE}")
    if not net.directed and len(spec.remove) + len(spec.add) == 2:
        (i, j) = (spec.remove or spec.add)[0]
        action = "delete" if spec.remove else "add"
        payload["single_link_closed_form"] = single_link_change(M, None, i, j, action).to_json()
        if action == "delete":
            warnings.append(f"single-link deletion closed form carries the corrected sign pattern; {DOC_NOTE}")


def _run_intercentrality(req, net, payload, warnings):
    T = req.get("order", DEFAULT_ORDER)
    A = req.get("set")
    s = group_intercentrality(compute_M(net, T), A)
    payload["set"] = list(A)
    payload["series"] = s.to_json()
    x = req.get("x")
    if x is not None:
        check_convergence(net, float(x))
        payload["value"] = _num(s.evaluate(float(x)))
        warnings.extend(_tail_warnings(net, float(x), T))


def _ranking(rows, fmt) -> list:
    return [[fmt(c), _num(v)] for c, v in rows]


def _run_key_group(req, net, payload, warnings):
    mode = req.get("mode", "exhaustive")
    res = key_group_search(net, req.get("size"), float(req.get("x")), mode)
    payload.update(
        best_set=list(res.best_set),
        objective_value=_num(res.objective_value),
        ranking=_ranking(res.ranking, list),
        search=mode,
        tie_policy_applied=res.tie_policy_applied,
    )
    if res.tie_policy_applied:
        warnings.append("top objective values tie at 12 significant digits; smallest set reported")


def _run_key_link(req, net, payload, warnings):
    res = key_link_search(net, float(req.get("x")))
    fmt = lambda l: f"{l[0]}-{l[1]}"
    payload.update(
        best_link=fmt(res.best_set),
        objective_value=_num(res.objective_value),
        ranking=_ranking(res.ranking, fmt),
        tie_policy_applied=res.tie_policy_applied,
    )
    if res.tie_policy_applied:
        warnings.append("top objective values tie at 12 significant digits; smallest link reported")


def _run_target(req, net, payload, warnings):
    T = req.get("order", DEFAULT_ORDER)
    q = DiffusionQuery(req.get("sender"), req.get("targets"), req.get("delta"), req.get("mode", "both"))
    M = compute_M(net, T)
    payload.update(
        mode=q.mode.value,
        sender=q.sender,
        targets=list(q.targets),
        value=_num(target_centrality_group(M, q)),
        series=target_series_group(M, q.sender, q.targets, q.mode).to_json(),
    )
    warnings.extend(_tail_warnings(net, q.delta, T))


def _run_intermediary(req, net, payload, warnings):
    T = req.get("order", DEFAULT_ORDER)
    i, j = req.get("i"), req.get("j")
    rep = intermediary_report(compute_M(net, T), i, j, req.get("delta"))
    payload.update(
        pair=[i, j],
        key_intermediary=rep.key_intermediary,
        per_node=[
            {
                "node": k,
                "index": _num(e.index),
                "with_retransmission": _num(e.with_retrans),
                "without_retransmission": _num(e.without_retrans),
            }
            for k, e in sorted(rep.per_node.items())
        ],
    )
    warnings.append(f"without-retransmission counts use [2I - (M_B)^-1]_ij with B = {{i, j, k}}; {DOC_NOTE}")
    warnings.extend(_tail_warnings(net, req.get("delta"), T))


def _run_simulate(req, net, payload, warnings):
    T = req.get("order", DEFAULT_ORDER)
    q = DiffusionQuery(req.get("sender"), req.get("targets"), req.get("delta"), req.get("mode", "both"))
    reps, horizon, seed = req.get("reps", 20000), req.get("horizon", 40), req.get("seed", 0)
    analytic = target_centrality_group(compute_M(net, T), q)
    mean, se = simulate_diffusion(net, q, reps, horizon, seed)
    payload.update(
        mode=q.mode.value,
        sender=q.sender,
        targets=list(q.targets),
        reps=reps,
        horizon=horizon,
        seed=seed,
        mean=_num(mean),
        std_error=_num(se),
        analytic=_num(analytic),
    )
    tail = horizon_tail_bound(net, q.delta, horizon)
    if tail > 1e-4 * max(abs(mean), abs(analytic)):
        warnings.append(f"receptions after period {horizon} are not simulated; estimated omitted mass {tail:.3g}")


def _run_compare_links(req, net, payload, warnings):
    T = req.get("order", DEFAULT_ORDER)
    i, j = req.get("i"), req.get("j")
    v = compare_constructions(net, i, j, req.get("tset"), T)
    ce = v.counterexample
    payload.update(
        nested=v.nested,
        order=T,
        per_node=[{"node": l, "dominates": ok} for l, ok in sorted(v.per_node.items())],
        pair_sum=v.pair_sum,
        aggregate=v.aggregate,
        node_j_informational=v.node_j,
        counterexample=None if ce is None else {
            "scope": ce.scope,
            "length": ce.length,
            "hub_i": format_rational(ce.hat),
            "hub_j": format_rational(ce.ring),
        },
    )
    if v.nested and not v.all_hold:
        warnings.append("nested neighborhoods but dominance failed; this contradicts the expected ordering")


def _random_digraph(rng, n=5, p=0.4) -> Network:
    adj = (rng.random((n, n)) < p).astype(np.int8)
    np.fill_diagonal(adj, 0)
    return Network(adj, directed=True, name="random")


def _run_oracle_check(req, net, payload, warnings):
    T = req.get("order", ORACLE_MAX_ORDER)
    rng = np.random.default_rng(req.get("seed", 0))
    if net is None:
        net = _random_digraph(rng)
    n = net.n
    k = int(rng.integers(1, n)) if n > 1 else 1
    A = tuple(sorted(int(v) for v in rng.choice(n, size=k, replace=False)))
    links = net.links()
    L = tuple(l for l in links if rng.random() < 0.5) or links[:1]
    M = compute_M(net, T)

    def agrees(mat, restriction):
        table = enumerate_walks(net, restriction, T)
        return all(
            [int(c) for c in mat[a, b].coeffs] == table[a, b] for a in range(n) for b in range(n)
        )

    checks = [
        ("all_walks", agrees(M, Restriction.unrestricted())),
        ("avoid_nodes", agrees(avoid_nodes_matrix(M, A), Restriction.avoid_nodes(A))),
        ("through_nodes", agrees(through_nodes_matrix(M, A), Restriction.through_nodes(A))),
        ("avoid_links", agrees(avoid_links_matrix(M, L), Restriction.avoid_links(L))),
        ("through_links", agrees(through_links_matrix(M, L), Restriction.through_links(L))),
    ]
    closure = True
    for b in range(n):
        avoid_b = avoid_nodes_matrix(M, (b,))
        closure &= all(M[a, b] == avoid_b[a, b] * M[b, b] for a in range(n) if a != b)
    checks.append(("last_visit_factorization", closure))
    if n > len(A):
        sub, keep = remove_nodes(net, A)
        Ms = compute_M(sub, T)
        avoid = avoid_nodes_matrix(M, A)
        checks.append(("node_removal_subgraph", Ms == avoid.block(list(keep), list(keep))))
    if L:
        spec = InterventionSpec(remove=L)
        dM = delta_M(M, spec)
        after = compute_M(apply_intervention(net, spec), T)
        checks.append(("link_removal_change", after - M == dM))
        checks.append(("total_change_low_rank", total_walk_change(M, None, spec) == dM.total()))
    payload.update(
        n=n,
        order=T,
        node_set=list(A),
        link_set=[f"{a}-{b}" for a, b in L],
        checks=[{"identity": name, "pass": bool(ok)} for name, ok in checks],
        all_pass=all(ok for _, ok in checks),
    )


HANDLERS = {
    "gf": _run_gf,
    "avoid-nodes": _run_avoid_nodes,
    "avoid-links": _run_avoid_links,
    "intervene": _run_intervene,
    "intercentrality": _run_intercentrality,
    "key-group": _run_key_group,
    "key-link": _run_key_link,
    "target": _run_target,
    "intermediary": _run_intermediary,
    "simulate": _run_simulate,
    "compare-links": _run_compare_links,
    "oracle-check": _run_oracle_check,
}


def execute(req: CommandRequest) -> dict:
    net = read_network(req.graph_path) if req.graph_path else None
    payload: dict = {}
    warnings: list = []
    HANDLERS[req.subcommand](req, net, payload, warnings)
    name = None
    if net is not None:
        name = net.name or os.path.basename(req.graph_path)
    params = {k: _echo(v) for k, v in req.params.items()}
    if req.graph_path:
        params["graph"] = os.path.basename(req.graph_path)
    meta = {
        "graph": name,
        "parameters": params,
        "subcommand": req.subcommand,
        "timestamp": _timestamp(),
        "tool": "walkgf",
        "version": __version__,
    }
    return {"meta": meta, "payload": payload, "warnings": warnings}


def write_report(report: dict, fmt: str = "json", stream=None) -> None:
    stream = sys.stdout if stream is None else stream
    if fmt == "json":
        stream.write(json.dumps(report, sort_keys=True, indent=2, ensure_ascii=True) + "\n")
        return
    payload = report["payload"]
    mat = payload.get("matrix", payload.get("delta_matrix"))
    if mat is None:
        raise UsageError("csv output needs a matrix payload")
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["i", "j", "t", "coefficient"])
    for i, row in enumerate(mat):
        for j, coeffs in enumerate(row):
            for t, c in enumerate(coeffs):
                w.writerow([i, j, t, c])
    stream.write(buf.getvalue())


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    argv = sys.argv[1:] if argv is None else argv
    try:
        req = parse_request(argv)
    except UsageError as exc:
        stderr.write(f"usage error: {exc}\n")
        return 2
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    try:
        report = execute(req)
        write_report(report, req.format, stdout)
    except (OSError, json.JSONDecodeError) as exc:
        stderr.write(f"error: {exc}\n")
        return 1
    except (WalkGFError, ValueError, ArithmeticError) as exc:
        stderr.write(f"error: {type(exc).__name__}: {exc}\n")
        return 1
    if report["payload"].get("all_pass") is False:
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
