"""INI run configuration.

Angles are in degrees.  Lengths in the ``[output]`` block (grid bounds and the
far-field radius) are dimensionless multiples of ``1/|k1xz|``.

    [medium]       epsilon mu alpha beta omega
    [propagation]  ky loss
    [source]       r0 phi0   |  x0 z0
    [kernel]       strip_halfwidth tol node_budget
    [output]       dir quad_tol xmin xmax zmin zmax nx nz
                   far_angles far_radius far_method
    [verify]       checks seed
"""
from __future__ import annotations

import configparser
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .exceptions import ConfigError

ALL_CHECKS = ("spectral_identity", "incident_far", "factorization", "factorization_stability",
              "cancellation", "residue", "boundary", "boundary_negative", "continuity",
              "edge", "helmholtz", "helmholtz_negative")


@dataclass
class RunConfig:
    epsilon: float = 1.0
    mu: float = 1.0
    alpha: float = 1 / 12
    beta: float = 1 / 12
    omega: float = 12 / 7
    ky: float = 1.0
    loss: float = 0.02
    r0: float | None = 1000.0
    phi0_deg: float | None = -135.0
    x0: float | None = None
    z0: float | None = None
    strip_halfwidth: float | None = None
    kernel_tol: float = 1e-10
    node_budget: int = 400_000
    out_dir: str = "bwh-out"
    quad_tol: float = 1e-8
    xmin: float = -5.0
    xmax: float = 5.0
    zmin: float = -5.0
    zmax: float = 5.0
    nx: int = 101
    nz: int = 101
    far_angles_deg: list = field(default_factory=lambda: [float(a) for a in range(1, 180)])
    far_radius: float = 100.0
    far_method: str = "leading"
    checks: list = field(default_factory=lambda: list(ALL_CHECKS))
    seed: int = 42

    @property
    def phi0(self):
        return None if self.phi0_deg is None else math.radians(self.phi0_deg)

    def source_kwargs(self):
        if self.x0 is not None or self.z0 is not None:
            return {"x0": self.x0, "z0": self.z0}
        return {"r0": self.r0, "phi0": self.phi0}

    def grid(self, kxz_abs):
        xs = np.linspace(self.xmin, self.xmax, self.nx) / kxz_abs if self.nx > 0 else np.empty(0)
        zs = np.linspace(self.zmin, self.zmax, self.nz) / kxz_abs if self.nz > 0 else np.empty(0)
        return xs, zs

    def to_dict(self):
        return asdict(self)


_FLOAT = {"medium": ("epsilon", "mu", "alpha", "beta", "omega"),
          "propagation": ("ky", "loss"),
          "output": ("quad_tol", "xmin", "xmax", "zmin", "zmax", "far_radius")}
_KEYMAP = {("source", "phi0"): "phi0_deg", ("kernel", "tol"): "kernel_tol", ("output", "dir"): "out_dir",
           ("output", "far_angles"): "far_angles_deg"}
_KNOWN = {
    "medium": {"epsilon", "mu", "alpha", "beta", "omega"},
    "propagation": {"ky", "loss"},
    "source": {"r0", "phi0", "x0", "z0"},
    "kernel": {"strip_halfwidth", "tol", "node_budget"},
    "output": {"dir", "quad_tol", "xmin", "xmax", "zmin", "zmax", "nx", "nz", "far_angles", "far_radius",
               "far_method"},
    "verify": {"checks", "seed"},
}


def _number(section, key, text, kind=float):
    try:
        val = kind(text)
    except ValueError:
        raise ConfigError(f"[{section}] {key}: cannot parse {text!r} as {kind.__name__}") from None
    if kind is float and not math.isfinite(val):
        raise ConfigError(f"[{section}] {key}: must be finite")
    return val


def _angles(text):
    text = text.strip()
    if ":" in text:
        try:
            a, b, s = (float(v) for v in text.split(":"))
        except ValueError:
            raise ConfigError(f"[output] far_angles: expected start:stop:step, got {text!r}") from None
        if s <= 0:
            raise ConfigError("[output] far_angles: step must be positive")
        n = int(math.floor((b - a) / s + 1e-9)) + 1
        return [a + i * s for i in range(max(n, 0))]
    return [_number("output", "far_angles", v) for v in text.replace(",", " ").split()]


def parse_config(text: str) -> RunConfig:
    cp = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"malformed config: {exc}") from None
    cfg = RunConfig()
    for section in cp.sections():
        if section not in _KNOWN:
            raise ConfigError(f"unknown section [{section}]")
        for key, raw in cp.items(section):
            if key not in _KNOWN[section]:
                raise ConfigError(f"[{section}] unknown key {key!r}")
            name = _KEYMAP.get((section, key), key)
            if section == "source" or key in ("strip_halfwidth", "tol"):
                val = _number(section, key, raw)
            elif key in ("node_budget", "nx", "nz", "seed"):
                val = _number(section, key, raw, int)
            elif key == "far_angles":
                val = _angles(raw)
            elif key == "checks":
                val = [c.strip() for c in raw.replace(",", " ").split() if c.strip()]
                bad = [c for c in val if c not in ALL_CHECKS]
                if bad:
                    raise ConfigError(f"[verify] checks: unknown check(s) {bad}; known: {list(ALL_CHECKS)}")
            elif key in ("dir", "far_method"):
                val = raw.strip()
            else:
                val = _number(section, key, raw)
            setattr(cfg, name, val)
    if cp.has_section("source"):
        keys = set(cp.options("source"))
        if keys & {"x0", "z0"}:
            if keys & {"r0", "phi0"}:
                raise ConfigError("[source] give either r0/phi0 or x0/z0, not both")
            if not {"x0", "z0"} <= keys:
                raise ConfigError("[source] cartesian form needs both x0 and z0")
            cfg.r0 = cfg.phi0_deg = None
    if min(cfg.nx, cfg.nz) < 0:
        raise ConfigError("[output] nx and nz must be >= 0")
    if cfg.seed < 0:
        raise ConfigError("[verify] seed must be a non-negative integer")
    return cfg


def load_config(path) -> RunConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            return parse_config(fh.read())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
