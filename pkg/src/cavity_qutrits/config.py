"""Run-configuration files.

A config is an INI-style file with four sections; every key is optional and
unknown sections or keys are rejected::

    [physics]
    g_over_2pi_hz = 25e3        # atom-cavity coupling g/2π
    delta_ratio = 10            # δ_eg / g
    delta_det_hz = 3.2e9        # δ_det/2π
    cavity_T_s = 1e-3           # photon storage time, κ = 1/T  (or kappa_hz)
    fock_dim = 5                # n_max + 1
    g_f_over_2pi_hz = 0         # f<->g leakage coupling g_f/2π
    delta_gf_sign = 1           # δ_gf = δ_eg + sign * δ_det

    [protocol]
    backend = paper_algebra
    lambda_t1 = pi/2
    lambda_t2 = pi/4
    timing_delta = 0
    timing_model = paper_faithful
    calibrate = true
    propagator = static_frame

    [numerics]
    steps_per_pi = 500
    tolerance = 1e-8

    [output]
    path = result.json
    format = json               # default: json for run, csv for sweeps

Frequencies marked ``/2π`` are in Hz and converted to rad/s on load.
``kappa_hz`` is the energy decay rate in s⁻¹ and is used as is. Numeric
values may be simple arithmetic in ``pi``, e.g. ``3*pi/4``.
"""

from __future__ import annotations

import ast
import configparser
import math
import operator
from dataclasses import dataclass, field
from pathlib import Path

from .dynamics import StepControl
from .errors import InvalidConfig
from .hamiltonians import TWO_PI, PhysParams
from .protocol import ProtocolConfig

SCHEMA = {
    "physics": {"g_over_2pi_hz", "delta_ratio", "delta_det_hz", "cavity_T_s", "kappa_hz",
                "fock_dim", "g_f_over_2pi_hz", "delta_gf_sign"},
    "protocol": {"backend", "lambda_t1", "lambda_t2", "timing_delta", "timing_model",
                 "calibrate", "propagator"},
    "numerics": {"steps_per_pi", "tolerance"},
    "output": {"path", "format"},
}
FORMATS = ("json", "csv")

_OPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
        ast.Div: operator.truediv, ast.Pow: operator.pow, ast.USub: operator.neg,
        ast.UAdd: operator.pos}


def parse_number(text: str) -> float:
    """Evaluate a float literal or simple arithmetic over ``pi``."""

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return float(node.value)
        if isinstance(node, ast.Name) and node.id == "pi":
            return math.pi
        if isinstance(node, ast.BinOp) and type(node.op) in _OPS:
            return _OPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and type(node.op) in _OPS:
            return _OPS[type(node.op)](ev(node.operand))
        raise ValueError

    try:
        value = ev(ast.parse(text.strip(), mode="eval"))
    except (SyntaxError, ValueError, ZeroDivisionError):
        raise InvalidConfig(f"not a number: {text!r}") from None
    if not math.isfinite(value):
        raise InvalidConfig(f"not a finite number: {text!r}")
    return value


@dataclass(frozen=True)
class RunConfig:
    protocol: ProtocolConfig = field(default_factory=ProtocolConfig)
    output_path: str | None = None
    output_format: str | None = None


def parse_config(text: str) -> RunConfig:
    cp = configparser.ConfigParser(inline_comment_prefixes=("#", ";"), interpolation=None)
    cp.optionxform = str
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise InvalidConfig(f"malformed config: {exc}") from None
    for section in cp.sections():
        if section not in SCHEMA:
            raise InvalidConfig(f"unknown section [{section}]")
        unknown = set(cp[section]) - SCHEMA[section]
        if unknown:
            raise InvalidConfig(f"unknown key(s) in [{section}]: {', '.join(sorted(unknown))}")

    def get(section, key, default=None):
        if cp.has_option(section, key):
            return cp.get(section, key).strip()
        return default

    def num(section, key, default):
        raw = get(section, key)
        return default if raw is None else parse_number(raw)

    def positive(name, value):
        if not value > 0:
            raise InvalidConfig(f"{name} must be positive, got {value}")
        return value

    def non_negative(name, value):
        if value < 0:
            raise InvalidConfig(f"{name} must be non-negative, got {value}")
        return value

    g_hz = positive("g_over_2pi_hz", num("physics", "g_over_2pi_hz", 25e3))
    ratio = positive("delta_ratio", num("physics", "delta_ratio", 10.0))
    det_hz = positive("delta_det_hz", num("physics", "delta_det_hz", 3.2e9))
    gf_hz = non_negative("g_f_over_2pi_hz", num("physics", "g_f_over_2pi_hz", 0.0))
    if get("physics", "cavity_T_s") is not None and get("physics", "kappa_hz") is not None:
        raise InvalidConfig("give either cavity_T_s or kappa_hz, not both")
    if get("physics", "cavity_T_s") is not None:
        kappa = 1.0 / positive("cavity_T_s", num("physics", "cavity_T_s", 0.0))
    else:
        kappa = non_negative("kappa_hz", num("physics", "kappa_hz", 0.0))
    fock = num("physics", "fock_dim", 5)
    if fock != int(fock) or fock < 2:
        raise InvalidConfig(f"fock_dim must be an integer >= 2, got {get('physics', 'fock_dim')}")
    sign = num("physics", "delta_gf_sign", 1)
    if sign not in (1, -1):
        raise InvalidConfig(f"delta_gf_sign must be 1 or -1, got {sign}")

    g = TWO_PI * g_hz
    params = PhysParams(g=g, delta_eg=ratio * g, delta_det=TWO_PI * det_hz, kappa=kappa,
                        g_f=TWO_PI * gf_hz, fock_dim=int(fock), delta_gf_sign=int(sign))

    calibrate_raw = get("protocol", "calibrate", "true").lower()
    if calibrate_raw not in ("true", "false", "yes", "no", "1", "0"):
        raise InvalidConfig(f"calibrate must be a boolean, got {calibrate_raw!r}")
    steps = num("numerics", "steps_per_pi", 500)
    if steps != int(steps) or steps < 1:
        raise InvalidConfig(f"steps_per_pi must be a positive integer, got {steps}")
    tol = positive("tolerance", num("numerics", "tolerance", 1e-8))

    fmt = get("output", "format")
    if fmt is not None and fmt not in FORMATS:
        raise InvalidConfig(f"format must be one of {FORMATS}, got {fmt!r}")

    protocol = ProtocolConfig(
        backend=get("protocol", "backend", "paper_algebra"),
        lambda_t1=num("protocol", "lambda_t1", math.pi / 2),
        lambda_t2=num("protocol", "lambda_t2", math.pi / 4),
        timing_delta=num("protocol", "timing_delta", 0.0),
        timing_model=get("protocol", "timing_model", "paper_faithful"),
        calibrate=calibrate_raw in ("true", "yes", "1"),
        params=params,
        step_control=StepControl(steps_per_pi=int(steps), tolerance=tol),
        propagator=get("protocol", "propagator", "static_frame"),
    )
    return RunConfig(protocol, get("output", "path") or None, fmt)


def load_config(path: str | Path | None) -> RunConfig:
    if path is None:
        return RunConfig()
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InvalidConfig(f"cannot read config {path}: {exc}") from None
    return parse_config(text)
