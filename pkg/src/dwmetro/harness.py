"""Scenario configs, engine dispatch and result serialisation.

A scenario is one interferometric protocol: ``M`` wells loaded with ``n``
bosons each in a named state family, optionally mixed by the beam-splitter
pulse, probed through ``Jy_total``.  A config evaluates to one result row,
or to one row per grid point when a sweep is requested.

Engines
-------
``BruteForce``
    enumerate the basis and use the exact pure/spectral routes (dimension
    must stay under the cap);
``FastProduct``
    per-well ladder monomials for pure product states, no basis;
``DiagonalProduct``
    closed pair sums for number-diagonal mixtures, no basis;
``Formula``
    closed-form references where one exists;
``Auto``
    diagonal mixtures go to ``DiagonalProduct``; pure scenarios use
    ``BruteForce`` under the cap, then ``FastProduct`` for products, then
    ``Formula``.
"""

from __future__ import annotations

import io
import json
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np
import yaml

from . import fisher, formulas, operators, states
from .fock import DEFAULT_CAP, FockBasis

__all__ = [
    "UsageError",
    "InfeasibleError",
    "StateSpec",
    "SweepSpec",
    "ScenarioConfig",
    "ResultRow",
    "run_scenario",
    "rows_to_csv",
    "rows_to_json",
    "write_rows",
    "load_config",
    "env_override",
]

SCHEMA_TAG = "dwmetro-results v1"

PURE_FAMILIES = ("fock", "css", "oat", "noon", "noon-global")
PRODUCT_FAMILIES = ("fock", "css", "oat", "noon")
DIAGONAL_FAMILIES = ("gaussian",)
ENGINES = ("Auto", "BruteForce", "DiagonalProduct", "FastProduct", "Formula")
SWEEP_PARAMS = ("chi_t", "sigma", "theta")


class UsageError(ValueError):
    """Malformed configuration or command line."""


class InfeasibleError(RuntimeError):
    """Scenario/engine combination that cannot be evaluated."""

    def __init__(self, message: str, feasible: Sequence[str] = ()):
        if feasible:
            message += "; feasible engines: " + ", ".join(feasible)
        super().__init__(message)
        self.feasible = tuple(feasible)


@dataclass(frozen=True)
class StateSpec:
    """Named input-state family plus its parameters."""

    family: str
    theta: float = math.pi / 2
    phi: float = 0.0
    chi_t: float = 0.0
    m_left: int = 0
    sigma: Optional[float] = None
    uniform: bool = False

    def local_amps(self, n: int) -> np.ndarray:
        return states.local_amplitudes(
            self.family,
            n,
            theta=self.theta,
            phi=self.phi,
            chi_t=self.chi_t,
            m_left=self.m_left,
        )

    def weights(self, n: int) -> np.ndarray:
        return states.gaussian_weights(n, sigma=self.sigma, uniform=self.uniform)


@dataclass(frozen=True)
class SweepSpec:
    param: str
    values: Tuple[float, ...]
    uniform_tail: bool = False  # sigma sweeps may append the flat-mixture point


@dataclass(frozen=True)
class ScenarioConfig:
    m_wells: int
    n: int
    state: StateSpec
    mixing: bool = True
    engine: str = "Auto"
    sweep: Optional[SweepSpec] = None
    cfi: str = "auto"
    cap: int = DEFAULT_CAP
    threads: int = 1
    out_path: Optional[str] = None
    out_format: str = "csv"


@dataclass(frozen=True)
class ResultRow:
    param: str
    value: Optional[float]
    qfi: float
    cfi: Optional[float]
    method: str
    seconds: float


def _as_bool(v, key: str) -> bool:
    if isinstance(v, bool):
        return v
    raise UsageError(f"config key {key!r} must be a boolean")


def _as_int(v, key: str) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        raise UsageError(f"config key {key!r} must be an integer")
    return v


def _as_float(v, key: str) -> float:
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise UsageError(f"config key {key!r} must be a number")
    return float(v)


def config_from_mapping(raw: dict) -> ScenarioConfig:
    """Validate a parsed config mapping into a :class:`ScenarioConfig`."""
    if not isinstance(raw, dict):
        raise UsageError("config must be a mapping")
    known = {"M", "n", "state", "mixing", "engine", "sweep", "cfi", "cap", "threads", "output"}
    unknown = set(raw) - known
    if unknown:
        raise UsageError(f"unknown config keys: {sorted(unknown)}")
    try:
        m_wells = _as_int(raw["M"], "M")
        n = _as_int(raw["n"], "n")
        state_raw = raw["state"]
    except KeyError as exc:
        raise UsageError(f"config key {exc.args[0]!r} is required") from None
    if m_wells < 1 or n < 0:
        raise UsageError("M must be >= 1 and n >= 0")

    if not isinstance(state_raw, dict) or "family" not in state_raw:
        raise UsageError("state must be a mapping with a 'family' key")
    family = state_raw["family"]
    if family not in PURE_FAMILIES + DIAGONAL_FAMILIES:
        raise UsageError(f"unknown state family {family!r}")
    spec_kwargs = {}
    for key in ("theta", "phi", "chi_t", "sigma"):
        if key in state_raw and state_raw[key] is not None:
            spec_kwargs[key] = _as_float(state_raw[key], f"state.{key}")
    if "m_left" in state_raw:
        spec_kwargs["m_left"] = _as_int(state_raw["m_left"], "state.m_left")
    if "uniform" in state_raw:
        spec_kwargs["uniform"] = _as_bool(state_raw["uniform"], "state.uniform")
    state = StateSpec(family=family, **spec_kwargs)
    if family == "gaussian" and state.sigma is None and not state.uniform:
        if not (isinstance(raw.get("sweep"), dict) and raw["sweep"].get("param") == "sigma"):
            raise UsageError("gaussian state needs sigma, uniform=true, or a sigma sweep")

    mixing = _as_bool(raw.get("mixing", True), "mixing")
    engine = raw.get("engine", "Auto")
    if engine not in ENGINES:
        raise UsageError(f"unknown engine {engine!r}; choose from {ENGINES}")

    sweep = None
    if raw.get("sweep") is not None:
        sw = raw["sweep"]
        if not isinstance(sw, dict) or "param" not in sw:
            raise UsageError("sweep must be a mapping with a 'param' key")
        param = sw["param"]
        if param not in SWEEP_PARAMS:
            raise UsageError(f"unknown sweep parameter {param!r}; choose from {SWEEP_PARAMS}")
        if "values" in sw:
            vals = sw["values"]
            if not isinstance(vals, list) or not vals:
                raise UsageError("sweep.values must be a non-empty list")
            values = tuple(_as_float(v, "sweep.values[]") for v in vals)
        else:
            try:
                start = _as_float(sw["start"], "sweep.start")
                stop = _as_float(sw["stop"], "sweep.stop")
                points = _as_int(sw["points"], "sweep.points")
            except KeyError as exc:
                raise UsageError(
                    f"sweep needs either 'values' or start/stop/points ({exc.args[0]!r} missing)"
                ) from None
            if points < 1:
                raise UsageError("sweep.points must be >= 1")
            values = tuple(float(v) for v in np.linspace(start, stop, points))
        uniform_tail = _as_bool(sw.get("uniform", False), "sweep.uniform")
        if uniform_tail and param != "sigma":
            raise UsageError("sweep.uniform is only meaningful for sigma sweeps")
        if param == "chi_t" and family != "oat":
            raise UsageError("chi_t sweeps need the oat state family")
        if param == "sigma" and family != "gaussian":
            raise UsageError("sigma sweeps need the gaussian state family")
        if param == "theta" and family not in PURE_FAMILIES:
            raise UsageError("theta sweeps need a pure state family")
        sweep = SweepSpec(param=param, values=values, uniform_tail=uniform_tail)

    cfi = raw.get("cfi", "auto")
    if cfi not in ("auto", "none"):
        raise UsageError("cfi must be 'auto' or 'none'")

    cap = _as_int(raw.get("cap", DEFAULT_CAP), "cap")
    threads = _as_int(raw.get("threads", 1), "threads")
    if cap < 1 or threads < 1:
        raise UsageError("cap and threads must be positive")

    out_path = None
    out_format = "csv"
    if raw.get("output") is not None:
        out = raw["output"]
        if not isinstance(out, dict):
            raise UsageError("output must be a mapping")
        out_path = out.get("path")
        out_format = out.get("format", "csv")
        if out_format not in ("csv", "json"):
            raise UsageError("output.format must be 'csv' or 'json'")

    return ScenarioConfig(
        m_wells=m_wells,
        n=n,
        state=state,
        mixing=mixing,
        engine=engine,
        sweep=sweep,
        cfi=cfi,
        cap=cap,
        threads=threads,
        out_path=out_path,
        out_format=out_format,
    )


def load_config(path: str) -> ScenarioConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = yaml.safe_load(fh)
    except FileNotFoundError:
        raise UsageError(f"config file not found: {path}") from None
    except yaml.YAMLError as exc:
        raise UsageError(f"config file {path} is not valid YAML: {exc}") from None
    return config_from_mapping(raw)


def env_override(name: str, default=None):
    """Read a ``DWMETRO_<NAME>`` environment override."""
    return os.environ.get(f"DWMETRO_{name.upper()}", default)


# ---------------------------------------------------------------------------
# engine dispatch


def _basis_dim(m_wells: int, total: int) -> int:
    return math.comb(total + 2 * m_wells - 1, 2 * m_wells - 1)


def _point_state(cfg: ScenarioConfig, value: Optional[float]) -> StateSpec:
    """State spec with the swept parameter substituted in."""
    if cfg.sweep is None or value is None:
        return cfg.state
    if cfg.sweep.param == "chi_t":
        return StateSpec(family="oat", chi_t=value)
    if cfg.sweep.param == "sigma":
        if math.isinf(value):
            return StateSpec(family="gaussian", uniform=True)
        return StateSpec(family="gaussian", sigma=value)
    return cfg.state  # theta sweeps keep the state fixed


def _formula_value(cfg: ScenarioConfig, spec: StateSpec) -> float:
    """Closed-form QFI for a scenario, or raise :class:`InfeasibleError`."""
    m, n = cfg.m_wells, cfg.n
    if spec.family == "fock" and spec.m_left == 0:
        return formulas.qfi_fock_loaded(m, n) if cfg.mixing else float(m * n)
    if not cfg.mixing:
        raise InfeasibleError(
            f"no closed form for family {spec.family!r} without mixing",
            _feasible(cfg, spec, exclude="Formula"),
        )
    if spec.family == "css" and spec.theta == math.pi / 2 and spec.phi == 0.0:
        return formulas.qfi_symmetric_css(m, n)
    if spec.family == "oat":
        return formulas.qfi_oat(m, n, spec.chi_t)
    if spec.family == "noon":
        return formulas.scaling_bounds(m, n).hl_local
    if spec.family == "noon-global":
        return formulas.scaling_bounds(m, n).hl_global
    if spec.family == "gaussian" and spec.uniform:
        return formulas.qfi_uniform_mixture(m, n)
    raise InfeasibleError(
        f"no closed form covers family {spec.family!r} with these parameters",
        _feasible(cfg, spec, exclude="Formula"),
    )


def _formula_covers(cfg: ScenarioConfig, spec: StateSpec) -> bool:
    try:
        _formula_value(cfg, spec)
        return True
    except InfeasibleError:
        return False


def _feasible(cfg: ScenarioConfig, spec: StateSpec, exclude: str = "") -> List[str]:
    out = []
    if _basis_dim(cfg.m_wells, cfg.m_wells * cfg.n) <= cfg.cap:
        out.append("BruteForce")
    if spec.family in PRODUCT_FAMILIES:
        out.append("FastProduct")
    if spec.family in DIAGONAL_FAMILIES:
        out.append("DiagonalProduct")
    if exclude != "Formula" and _formula_covers(cfg, spec):
        out.append("Formula")
    return [e for e in out if e != exclude]


def _pick_engine(cfg: ScenarioConfig, spec: StateSpec) -> str:
    if cfg.engine != "Auto":
        return cfg.engine
    if spec.family in DIAGONAL_FAMILIES:
        return "DiagonalProduct"
    if _basis_dim(cfg.m_wells, cfg.m_wells * cfg.n) <= cfg.cap:
        return "BruteForce"
    if spec.family in PRODUCT_FAMILIES:
        return "FastProduct"
    if _formula_covers(cfg, spec):
        return "Formula"
    raise InfeasibleError(
        f"no engine can evaluate family {cfg.state.family!r} at "
        f"M={cfg.m_wells}, n={cfg.n} under cap {cfg.cap}",
        (),
    )


class _BruteContext:
    """Shared read-only context for brute-force evaluation of a scenario."""

    def __init__(self, cfg: ScenarioConfig):
        total = cfg.m_wells * cfg.n
        dim = _basis_dim(cfg.m_wells, total)
        if dim > cfg.cap:
            raise InfeasibleError(
                f"BruteForce needs dimension {dim} <= cap {cfg.cap}",
                _feasible(cfg, cfg.state, exclude="BruteForce"),
            )
        self.basis = FockBasis(cfg.m_wells, total, cap=cfg.cap)
        self.jy = operators.jy_total(self.basis)
        self.sx = operators.sx_total(self.basis) if (cfg.mixing and cfg.m_wells > 1) else None
        self.sy = None  # built on demand for mixtures

    def probe(self, cfg: ScenarioConfig, spec: StateSpec) -> np.ndarray:
        if spec.family == "noon-global":
            psi = states.noon_global(self.basis, cfg.n)
        else:
            psi = states.product_state(self.basis, [spec.local_amps(cfg.n)] * cfg.m_wells)
        amps = psi.amps
        if self.sx is not None:
            amps = operators.apply_unitary(self.sx, math.pi / 2, amps)
        return amps

    def generator(self, cfg: ScenarioConfig):
        # For diagonal mixtures the mixing pulse is folded into the generator.
        if cfg.mixing and cfg.m_wells > 1:
            if self.sy is None:
                self.sy = operators.sy_total(self.basis)
            return self.sy
        return self.jy


def _evaluate_point(
    cfg: ScenarioConfig,
    engine: str,
    spec: StateSpec,
    theta: Optional[float],
    ctx: Optional[_BruteContext],
) -> Tuple[float, Optional[float], str]:
    """Return (qfi, cfi, method) for one grid point."""
    m, n = cfg.m_wells, cfg.n

    if engine == "Formula":
        return _formula_value(cfg, spec), None, "FormulaRef"

    if engine == "DiagonalProduct":
        if spec.family not in DIAGONAL_FAMILIES:
            raise InfeasibleError(
                f"DiagonalProduct needs a number-diagonal family, got {spec.family!r}",
                _feasible(cfg, spec, exclude="DiagonalProduct"),
            )
        dps = states.DiagonalProductState.iid(spec.weights(n), m)
        rep = fisher.qfi_diagonal_product(dps, mixing=cfg.mixing)
        return rep.value, None, rep.method

    if engine == "FastProduct":
        if spec.family not in PRODUCT_FAMILIES:
            raise InfeasibleError(
                f"FastProduct needs a pure product family, got {spec.family!r}",
                _feasible(cfg, spec, exclude="FastProduct"),
            )
        amps = spec.local_amps(n)
        rep = fisher.qfi_product_pure_fast([amps] * m, mixing=cfg.mixing)
        return rep.value, None, rep.method

    if engine != "BruteForce":
        raise UsageError(f"unknown engine {engine!r}")

    assert ctx is not None
    if spec.family in DIAGONAL_FAMILIES:
        dps = states.DiagonalProductState.iid(spec.weights(n), m)
        rho = states.materialize_density(dps, ctx.basis)
        rep = fisher.qfi_spectral(rho, ctx.generator(cfg))
        return rep.value, None, rep.method

    amps = ctx.probe(cfg, spec)
    rep = fisher.qfi_pure(amps, ctx.jy)
    cfi_val = None
    if cfg.cfi == "auto":
        sv = states.StateVector(ctx.basis, amps)
        t0 = theta if theta is not None else 0.0
        if t0 == 0.0:
            cfi_val = fisher.cfi_number(sv, ctx.jy, 0.0, mode="analytic-zero").value
        else:
            cfi_val = fisher.cfi_number(sv, ctx.jy, t0, mode="finite-difference").value
    return rep.value, cfi_val, rep.method


def _grid(cfg: ScenarioConfig) -> List[Tuple[str, Optional[float]]]:
    if cfg.sweep is None:
        return [("", None)]
    pts: List[Tuple[str, Optional[float]]] = [
        (cfg.sweep.param, v) for v in cfg.sweep.values
    ]
    if cfg.sweep.uniform_tail:
        pts.append((cfg.sweep.param, math.inf))
    return pts


def run_scenario(cfg: ScenarioConfig) -> List[ResultRow]:
    """Evaluate a scenario; one row per grid point, grid order preserved."""
    grid = _grid(cfg)

    # Resolve the engine once (sweeps never change the family class).
    spec0 = _point_state(cfg, grid[0][1] if cfg.sweep else None)
    engine = _pick_engine(cfg, spec0)
    ctx = _BruteContext(cfg) if engine == "BruteForce" else None
    if engine == "BruteForce" and ctx is not None and cfg.mixing and cfg.m_wells > 1:
        if spec0.family in DIAGONAL_FAMILIES:
            ctx.generator(cfg)  # warm the mixed-frame generator cache

    if cfg.sweep is not None and cfg.sweep.param == "theta" and engine != "BruteForce":
        raise InfeasibleError(
            "theta sweeps (CFI studies) need the BruteForce engine",
            [e for e in _feasible(cfg, spec0) if e == "BruteForce"],
        )

    def work(point: Tuple[str, Optional[float]]) -> ResultRow:
        pname, pval = point
        theta = pval if (cfg.sweep is not None and cfg.sweep.param == "theta") else None
        spec = _point_state(cfg, pval)
        t0 = time.perf_counter()
        qfi, cfi_val, method = _evaluate_point(cfg, engine, spec, theta, ctx)
        dt = time.perf_counter() - t0
        return ResultRow(pname, pval, qfi, cfi_val, method, dt)

    if cfg.threads > 1 and len(grid) > 1:
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            rows = list(pool.map(work, grid))
    else:
        rows = [work(p) for p in grid]
    return rows


# ---------------------------------------------------------------------------
# serialisation


def _sig(x: Optional[float]) -> str:
    if x is None:
        return ""
    return "%.12g" % x


def rows_to_csv(rows: Sequence[ResultRow]) -> str:
    buf = io.StringIO()
    buf.write(f"# {SCHEMA_TAG}\n")
    buf.write("param,value,qfi,cfi,method,seconds\n")
    for r in rows:
        buf.write(
            f"{r.param},{_sig(r.value)},{_sig(r.qfi)},{_sig(r.cfi)},"
            f"{r.method},{r.seconds:.3f}\n"
        )
    return buf.getvalue()


def _json_num(x: Optional[float]):
    if x is None:
        return None
    if math.isinf(x):
        return "inf"
    return float("%.12g" % x)


def rows_to_json(rows: Sequence[ResultRow]) -> str:
    payload = {
        "schema": SCHEMA_TAG,
        "rows": [
            {
                "param": r.param,
                "value": _json_num(r.value),
                "qfi": _json_num(r.qfi),
                "cfi": _json_num(r.cfi),
                "method": r.method,
                "seconds": round(r.seconds, 3),
            }
            for r in rows
        ],
    }
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def write_rows(rows: Sequence[ResultRow], path: Optional[str], fmt: str) -> str:
    """Serialise rows; write to ``path`` when given, return the text."""
    text = rows_to_csv(rows) if fmt == "csv" else rows_to_json(rows)
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    return text
