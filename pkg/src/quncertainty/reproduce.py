"""Named scenarios recomputing the published numbers next to the reported ones."""

from __future__ import annotations

import math
from dataclasses import replace

import numpy as np

from .bounds import entropic_lower_bound, infimum_bound, supremum_bound
from .conjugate import leading_joint_probability, small_s_asymptote
from .majorization import compare
from .measures import SHANNON, shannon_entropy
from .optimal import least_uncertain_measurement, spectrum_descending, von_neumann_entropy
from .quantum import (
    born_probabilities,
    random_density_matrix,
    random_rank_one_povm,
    spin_component_measurement,
)
from .search import SearchConfig

MUB2_SUP = [(1.5 + math.sqrt(2)) / 4, (2.5 - math.sqrt(2)) / 4, 0.0, 0.0]
MUB3_SUP = [0.491, 0.238, 0.136, 0.136, 0.0, 0.0, 0.0, 0.0]
MUB3_ENTROPIC = 1.23
MUB2_PURE_INF = [0.5, 0.5, 0.0, 0.0]
MUB3_PURE_INF = [0.250, 0.250, 0.250, 0.104, 0.062, 0.040, 0.034, 0.011]


def spin_set(axes: str):
    return [spin_component_measurement(a) for a in axes]


def _row(quantity, reference, computed):
    dev = None if reference is None else abs(float(computed) - float(reference))
    return {
        "quantity": quantity,
        "reference": None if reference is None else float(reference),
        "computed": round(float(computed), 6) + 0.0,
        "deviation": None if dev is None else round(dev, 6),
    }


def _vector_rows(name, reference, computed):
    return [_row(f"{name}[{i + 1}]", r, c) for i, (r, c) in enumerate(zip(reference, computed))]


def mub2(cfg: SearchConfig):
    ms = spin_set("xy")
    res = supremum_bound(ms, cfg)
    return _vector_rows("sup bound", MUB2_SUP, res.bound) + [
        _row("entropic bound (nats)", None, entropic_lower_bound(SHANNON, ms, bound=res))
    ]


def mub3(cfg: SearchConfig):
    ms = spin_set("xyz")
    res = supremum_bound(ms, cfg)
    return _vector_rows("sup bound", MUB3_SUP, res.bound) + [
        _row("entropic bound (nats)", MUB3_ENTROPIC, entropic_lower_bound(SHANNON, ms, bound=res))
    ]


def _pure_inf(axes, reference, cfg):
    ms = spin_set(axes)
    pure = infimum_bound(ms, replace(cfg, pure_only=True))
    mixed = infimum_bound(ms, replace(cfg, pure_only=False))
    uniform = [1.0 / mixed.bound.size] * mixed.bound.size
    return _vector_rows("pure inf", reference, pure.bound) + _vector_rows("mixed inf", uniform, mixed.bound)


def mub2_pure_inf(cfg: SearchConfig):
    return _pure_inf("xy", MUB2_PURE_INF, cfg)


def mub3_pure_inf(cfg: SearchConfig):
    return _pure_inf("xyz", MUB3_PURE_INF, cfg)


def conjugate_small_s(cfg: SearchConfig, quad_order: int = 128):
    rows = []
    for s in (0.01, 0.005, 0.001, 0.0001):
        rows.append(_row(f"leading joint probability, s={s:g}", small_s_asymptote(s), leading_joint_probability(s, quad_order)))
    rows.append(_row("s -> 0 limit", 0.25, leading_joint_probability(1e-8, quad_order)))
    return rows


def least_uncertain_demo(cfg: SearchConfig, d: int = 3):
    rng = np.random.default_rng(cfg.seed)
    rho = random_density_matrix(d, rng)
    spec = spectrum_descending(rho)
    best = born_probabilities(least_uncertain_measurement(rho), rho)
    povm = random_rank_one_povm(d, d + 2, rng)
    probs = born_probabilities(povm, rho)
    rows = _vector_rows("outcomes of least uncertain measurement", list(spec), best)
    rows.append(_row("von Neumann entropy (nats)", None, von_neumann_entropy(rho)))
    rows.append(_row("Shannon entropy, random rank-1 POVM (nats)", None, shannon_entropy(probs)))
    rows.append(
        {"quantity": "random POVM vs spectrum", "reference": "StrictlyBelow or Equivalent",
         "computed": str(compare(probs, spec)), "deviation": None}
    )
    return rows


SCENARIOS = {
    "mub2": mub2,
    "mub3": mub3,
    "mub2-pure-inf": mub2_pure_inf,
    "mub3-pure-inf": mub3_pure_inf,
    "conjugate-small-s": conjugate_small_s,
    "theorem2-demo": least_uncertain_demo,
}


def run_scenario(name: str, cfg: SearchConfig = SearchConfig()) -> dict:
    try:
        fn = SCENARIOS[name]
    except KeyError:
        raise ValueError(f"unknown scenario {name!r}; choose from {', '.join(SCENARIOS)}") from None
    return {"scenario": name, "rows": fn(cfg)}
