"""Command-line front end.

Results go to stdout as JSON (default) or CSV; diagnostics go to stderr.
Exit status is 0 on success, 1 when an input violates a mathematical
precondition and 2 on usage errors (bad flags, unreadable files).
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import io
from .bounds import BoundResult, entropic_lower_bound, has_common_eigenstate, infimum_bound, supremum_bound
from .conjugate import (
    DEFAULT_QUAD_ORDER,
    PhaseSpaceParams,
    leading_joint_probability,
    small_s_asymptote,
    solve_spectrum,
)
from .errors import DomainError
from .majorization import compare, infimum, prefix_envelope, supremum
from .measures import measure_by_name
from .optimal import least_uncertain_measurement, spectrum_descending, von_neumann_entropy
from .quantum import density_to_bloch, spin_component_measurement
from .reproduce import SCENARIOS, run_scenario
from .search import SearchConfig

log = logging.getLogger("quncertainty")

PRESETS = {"mub2": "xy", "mub3": "xyz", "xx": "xx"}


class UsageError(Exception):
    pass


def _common_options() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--seed", type=int, default=None, help="RNG seed (default 42)")
    p.add_argument("--restarts", type=int, default=None, help="search restarts (default 64)")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--quad-order", type=int, default=None, help=f"quadrature order (default {DEFAULT_QUAD_ORDER})")
    p.add_argument("--tolerance", type=float, default=None, help="common-eigenstate tolerance (default 1e-8)")
    p.add_argument("--input", type=Path, default=None, help="JSON file with the command's inputs (e.g. a previous output)")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common_options()
    parser = argparse.ArgumentParser(prog="quncertainty", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compare", parents=[common], help="majorization order of two vectors")
    p.add_argument("--a", help="first vector, e.g. 0.5,0.5")
    p.add_argument("--b", help="second vector")

    for name, what in (("inf", "infimum"), ("sup", "supremum")):
        p = sub.add_parser(name, parents=[common], help=f"{what} of a set of vectors")
        p.add_argument("--vectors", help="vectors separated by ';' or a JSON array of arrays")

    for name, what in (("bound", "majorization bound"), ("entropic-bound", "quasi-entropic lower bound")):
        p = sub.add_parser(name, parents=[common], help=f"{what} of a measurement set")
        src = p.add_mutually_exclusive_group()
        src.add_argument("--preset", choices=sorted(PRESETS), help="built-in spin measurement set")
        src.add_argument("--axes", help="spin components to measure, e.g. xyz")
        src.add_argument("--measurements", type=Path, help="JSON file with a list of measurements")
        p.add_argument("--pure-only", action="store_true", default=None, help="restrict the search to pure states")
        if name == "bound":
            p.add_argument("--kind", choices=["sup", "inf"], default=None, help="supremum (default) or infimum")
        else:
            p.add_argument("--measure", choices=["shannon", "tsallis"], default=None)
            p.add_argument("--q", type=float, default=None, help="Tsallis index (default 2)")

    p = sub.add_parser("conjugate", parents=[common], help="sinc-kernel spectrum for position/momentum bins")
    p.add_argument("--s", type=float, help="phase-space parameter dx*dp/(2 pi hbar)")
    p.add_argument("--delta-x", type=float)
    p.add_argument("--delta-p", type=float)
    p.add_argument("--hbar", type=float, default=None)
    p.add_argument("--samples", type=Path, help="write (node, eigenfunction) CSV here")

    p = sub.add_parser("least-uncertain", parents=[common], help="least uncertain rank-1 measurement of a state")
    p.add_argument("--state", type=Path, help="density matrix JSON file")

    p = sub.add_parser("reproduce", parents=[common], help="recompute a published number")
    p.add_argument("scenario", nargs="?", choices=sorted(SCENARIOS))
    return parser


def _load_json(path: Path):
    try:
        return json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc


def _merge_input(args, keys: dict[str, str]):
    """Fill unset arguments from ``--input`` (keys maps JSON field -> attribute)."""
    if args.input is None:
        return
    data = _load_json(args.input)
    if not isinstance(data, dict):
        data = {"vectors": data} if "vectors" in keys else {}
    for field, attr in keys.items():
        if getattr(args, attr, None) is None and field in data:
            setattr(args, attr, data[field])


def _vector(value, name):
    if value is None:
        raise UsageError(f"--{name} is required")
    if isinstance(value, str):
        try:
            return io.parse_vector(value)
        except (ValueError, json.JSONDecodeError) as exc:
            raise UsageError(f"--{name}: {exc}") from exc
    return [float(v) for v in value]


def _vectors(value):
    if value is None:
        raise UsageError("--vectors is required")
    if isinstance(value, str):
        try:
            return io.parse_vector_list(value)
        except (ValueError, json.JSONDecodeError) as exc:
            raise UsageError(f"--vectors: {exc}") from exc
    return [[float(x) for x in v] for v in value]


def _config(args) -> SearchConfig:
    return SearchConfig(
        restarts=args.restarts if args.restarts is not None else 64,
        seed=args.seed if args.seed is not None else 42,
        pure_only=bool(getattr(args, "pure_only", False)),
    )


def _measurement_set(args):
    if getattr(args, "measurements", None) is not None:
        data = args.measurements
        if isinstance(data, (str, Path)):
            data = _load_json(Path(data))
        return io.measurements_from_json(data)
    axes = PRESETS[args.preset] if getattr(args, "preset", None) else getattr(args, "axes", None)
    if not axes:
        raise UsageError("give --preset, --axes or --measurements")
    return [spin_component_measurement(a) for a in axes]


def _witness_json(w):
    out = {"j": w.j, "value": round(w.value, 6) + 0.0, "search": w.search, "converged": w.converged}
    if w.state.shape == (2, 2):
        out["bloch"] = io.rounded(density_to_bloch(w.state))
    else:
        out["state"] = io.density_to_json(np.round(w.state, 12))
    return out


def _bound_json(res: BoundResult) -> dict:
    common = res.common_eigenstate
    return {
        "envelope": io.rounded(res.envelope),
        "bound": io.rounded(res.bound),
        "witnesses": [_witness_json(w) for w in res.witnesses],
        "common_eigenstate": None if common is None else io.density_to_json(np.round(common.state, 12)),
    }


def cmd_compare(args):
    _merge_input(args, {"a": "a", "b": "b"})
    a, b = _vector(args.a, "a"), _vector(args.b, "b")
    return {"a": a, "b": b, "order": str(compare(a, b))}


def cmd_inf(args):
    _merge_input(args, {"vectors": "vectors"})
    vs = _vectors(args.vectors)
    return {"vectors": vs, "envelope": io.rounded(prefix_envelope(vs, "min"), 12), "infimum": io.rounded(infimum(vs), 12)}


def cmd_sup(args):
    _merge_input(args, {"vectors": "vectors"})
    vs = _vectors(args.vectors)
    return {"vectors": vs, "envelope": io.rounded(prefix_envelope(vs, "max"), 12), "supremum": io.rounded(supremum(vs), 12)}


_BOUND_KEYS = {"measurements": "measurements", "kind": "kind", "pure_only": "pure_only", "seed": "seed", "restarts": "restarts"}


def cmd_bound(args):
    _merge_input(args, _BOUND_KEYS)
    ms = _measurement_set(args)
    cfg = _config(args)
    kind = args.kind or "sup"
    res = supremum_bound(ms, cfg) if kind == "sup" else infimum_bound(ms, cfg)
    if args.tolerance is not None:
        res.common_eigenstate = has_common_eigenstate(ms, args.tolerance)
    out = {"kind": kind, "pure_only": cfg.pure_only, "seed": cfg.seed, "restarts": cfg.restarts}
    out.update(_bound_json(res))
    out["measurements"] = [io.measurement_to_json(m) for m in ms]
    return out


def cmd_entropic_bound(args):
    _merge_input(args, {**_BOUND_KEYS, "measure": "measure", "q": "q"})
    ms = _measurement_set(args)
    cfg = _config(args)
    name = args.measure or "shannon"
    measure = measure_by_name(name, args.q)
    res = supremum_bound(ms, cfg)
    return {
        "measure": name,
        "q": args.q,
        "value": round(entropic_lower_bound(measure, ms, bound=res), 6) + 0.0,
        "bound": io.rounded(res.bound),
        "pure_only": cfg.pure_only,
        "seed": cfg.seed,
        "restarts": cfg.restarts,
        "measurements": [io.measurement_to_json(m) for m in ms],
    }


def cmd_conjugate(args):
    _merge_input(args, {"s": "s", "quad_order": "quad_order", "delta_x": "delta_x", "delta_p": "delta_p", "hbar": "hbar"})
    hbar = args.hbar if args.hbar is not None else 1.0
    if args.delta_x is not None or args.delta_p is not None:
        if args.delta_x is None or args.delta_p is None:
            raise UsageError("--delta-x and --delta-p go together")
        params = PhaseSpaceParams(args.delta_x, args.delta_p, hbar)
    elif args.s is not None:
        params = PhaseSpaceParams.from_s(args.s, hbar)
    else:
        raise UsageError("give --s or --delta-x/--delta-p")
    order = args.quad_order or DEFAULT_QUAD_ORDER
    s_value = float(args.s) if args.s is not None and args.delta_x is None else params.s
    spec = solve_spectrum(s_value, order)
    if args.samples is not None:
        rows = "\n".join(f"{x!r},{f!r}" for x, f in zip(spec.nodes, spec.leading_eigenfunction))
        args.samples.write_text("node,eigenfunction\n" + rows + "\n")
    nonzero = spec.eigenvalues[spec.eigenvalues > 1e-15]
    return {
        "s": s_value,
        "delta_x": params.delta_x,
        "delta_p": params.delta_p,
        "hbar": params.hbar,
        "quad_order": order,
        "mu2": [float(v) for v in nonzero],
        "leading_joint_probability": leading_joint_probability(s_value, order),
        "asymptote": small_s_asymptote(s_value),
    }


def cmd_least_uncertain(args):
    _merge_input(args, {"state": "state"})
    if args.state is None:
        raise UsageError("--state is required")
    data = args.state if isinstance(args.state, dict) else _load_json(Path(args.state))
    rho = io.density_from_json(data)
    m = least_uncertain_measurement(rho)
    return {
        "state": io.density_to_json(rho),
        "spectrum": io.rounded(spectrum_descending(rho), 12),
        "projectors": [io.matrix_to_json(np.round(e, 12)) for e in m.elements],
        "von_neumann_entropy": von_neumann_entropy(rho),
        "measurement": io.measurement_to_json(m),
    }


def cmd_reproduce(args):
    _merge_input(args, {"scenario": "scenario"})
    if args.scenario is None:
        raise UsageError(f"choose a scenario: {', '.join(SCENARIOS)}")
    return run_scenario(args.scenario, _config(args))


COMMANDS = {
    "compare": cmd_compare,
    "inf": cmd_inf,
    "sup": cmd_sup,
    "bound": cmd_bound,
    "entropic-bound": cmd_entropic_bound,
    "conjugate": cmd_conjugate,
    "least-uncertain": cmd_least_uncertain,
    "reproduce": cmd_reproduce,
}


def run(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=sys.stderr)
    try:
        result = COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except (DomainError, ValueError, np.linalg.LinAlgError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    stdout.write(io.to_csv(result) if args.format == "csv" else io.dumps(result) + "\n")
    return 0


def main():
    sys.exit(run())
