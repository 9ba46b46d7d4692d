"""JSON file formats and the sweep configuration parser.

Instance files carry the agent count, costs, a reward descriptor, and
free-form metadata; result files carry a solved contract.  Everything is
plain JSON so witnesses stay inspectable.  Floats survive a round trip
exactly (Python's default float repr is shortest-exact).
"""

from __future__ import annotations

import json

import numpy as np

from .contracts import Contract, Instance, ModeSpec
from .errors import ParameterError
from .experiments import SweepSpec
from .rewards import reward_from_descriptor
from .solvers import SolveReport

FILE_VERSION = "1"


def instance_to_dict(inst: Instance) -> dict:
    return {
        "version": FILE_VERSION,
        "n": inst.n,
        "costs": inst.costs.tolist(),
        "reward": inst.reward.descriptor(),
        "metadata": inst.metadata or {},
    }


def instance_from_dict(data: dict) -> Instance:
    if data.get("version") != FILE_VERSION:
        raise ParameterError(f"unsupported instance file version {data.get('version')!r}")
    return Instance(
        n=int(data["n"]),
        costs=np.asarray(data["costs"], dtype=float),
        reward=reward_from_descriptor(data["reward"]),
        metadata=data.get("metadata") or None,
    )


def save_instance(inst: Instance, path) -> None:
    with open(path, "w") as handle:
        json.dump(instance_to_dict(inst), handle, indent=2)
        handle.write("\n")


def load_instance(path) -> Instance:
    with open(path) as handle:
        return instance_from_dict(json.load(handle))


def report_to_dict(report: SolveReport, timing_ms: float | None = None) -> dict:
    out = {
        "version": FILE_VERSION,
        "spec": {"mode": report.spec.mode, "beta": report.spec.beta},
        "method": report.method,
        "set": report.best.member_list(),
        "payments": report.best.payments.payments.tolist(),
        "utility": report.best.utility,
        "opt_reference": report.opt_reference,
        "timing_ms": timing_ms,
    }
    return out


def save_report(report: SolveReport, path, timing_ms: float | None = None) -> None:
    with open(path, "w") as handle:
        json.dump(report_to_dict(report, timing_ms), handle, indent=2)
        handle.write("\n")


def load_result(path) -> dict:
    with open(path) as handle:
        data = json.load(handle)
    if data.get("version") != FILE_VERSION:
        raise ParameterError(f"unsupported result file version {data.get('version')!r}")
    return data


def result_contract(data: dict, n: int) -> tuple[Contract, int]:
    """Contract and member bitmask from a loaded result file."""
    payments = np.asarray(data["payments"], dtype=float)
    if payments.size != n:
        raise ParameterError(
            f"result payments have length {payments.size}, instance has n={n}"
        )
    mask = 0
    for i in data["set"]:
        mask |= 1 << int(i)
    return Contract(payments), mask


def mode_spec_from_dict(data: dict) -> ModeSpec:
    mode = data.get("mode", "unconstrained")
    beta = data.get("beta")
    return ModeSpec(mode, float(beta) if beta is not None else None)


# ---------------------------------------------------------------------------
# sweep configuration: flat "key = value" lines, '#' comments

_LIST_KEYS = ("values",)


def parse_sweep_config(text: str) -> SweepSpec:
    """Parse a sweep configuration.

    Recognized keys: family, grid, values (comma-separated), mode,
    method_opt, method_nd, seed, and any family parameters (T, m, n, M,
    beta, delta, epsilon, cost_margin).
    """
    entries: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParameterError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if not key or not value:
            raise ParameterError(f"line {lineno}: empty key or value")
        entries[key] = value

    if "family" not in entries:
        raise ParameterError("sweep config needs a family")
    if "grid" not in entries:
        raise ParameterError("sweep config needs a grid parameter")
    values_raw = entries.get("values", "")
    grid_values = [float(v) for v in values_raw.split(",") if v.strip()]

    family = entries.pop("family")
    grid = entries.pop("grid")
    entries.pop("values", None)
    mode = entries.pop("mode", "beta_nd" if grid in ("beta", "delta") else "nd").replace("-", "_")
    method_opt = entries.pop("method_opt", "brute").replace("-", "_")
    method_nd = entries.pop("method_nd", "brute").replace("-", "_")
    seed = int(entries.pop("seed")) if "seed" in entries else None

    params: dict = {}
    for key, value in entries.items():
        try:
            params[key] = float(value)
        except ValueError:
            raise ParameterError(f"parameter {key!r} is not numeric: {value!r}") from None

    return SweepSpec(
        family=family,
        params=params,
        grid_param=grid,
        grid_values=grid_values,
        methods=(method_opt, method_nd),
        mode=mode,
        seed=seed,
    )


def load_sweep_config(path) -> SweepSpec:
    with open(path) as handle:
        return parse_sweep_config(handle.read())
