from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

from dotenv import load_dotenv

from .errors import ConfigError


load_dotenv()


class BaseConfig:
	PRECISION = os.environ.get("QDUAL_PRECISION", "standard")
	TRIALS = int(os.environ.get("QDUAL_TRIALS", "200"))
	SEED = int(os.environ.get("QDUAL_SEED", "42"))
	LOG_LEVEL = os.environ.get("QDUAL_LOG_LEVEL", "WARNING")

	MAX_LATTICE = 20000
	QUADRATURE_POINTS = 4096
	AW_LIMIT_DEGREE = 40
	# terminating sums whose largest term exceeds the result by this factor are
	# summed again at extended precision
	CANCELLATION_RATIO = 1e3
	INVERSE_SIZES = {"N": 25, "M": 20, "K": 15, "fg-demo": 15}


class StandardConfig(BaseConfig):
	MODE = "standard"
	DPS = 15
	EPS_TERM = 1e-16
	EPS_PROD = 1e-17
	MAX_TERMS = 4000


class ExtendedConfig(BaseConfig):
	MODE = "extended"
	DPS = 40
	EPS_TERM = 1e-38
	EPS_PROD = 1e-38
	MAX_TERMS = 8000


def get_config(name: str | None = None):
	if name is None:
		name = os.environ.get("QDUAL_PRECISION", "standard")
	name = name.lower()
	if name.startswith("ext"):
		return ExtendedConfig
	if name.startswith("std") or name.startswith("standard"):
		return StandardConfig
	raise ConfigError(f"unknown precision mode {name!r} (expected standard or extended)")


# -----------------------------
# Parameter domains
# -----------------------------
# Positivity and convergence regimes are not stated with the results themselves,
# so these ranges are choices. Integer entries are inclusive.

_Q = (0.2, 0.8)

_LQJ = {"q": _Q, "aq": (0.05, 0.9), "bq": (0.05, 0.9), "n": (0, 8), "m": (0, 8)}
_QRACAH = {"q": _Q, "a": (0.1, 0.9), "b": (0.1, 0.9), "c": (0.1, 0.9), "N": (3, 12)}
_QLAG = {"q": _Q, "alpha": (-0.9, 3.0), "c": (0.1, 5.0), "n": (0, 8), "m": (0, 8)}
_QLAG_GEN = {"q": _Q, "y": (0.05, 0.9), "c": (0.1, 5.0), "n": (0, 8), "m": (0, 8)}
_BQJ = {"q": _Q, "aq": (0.05, 0.9), "bq": (0.05, 0.9), "cq": (-0.9, -0.05), "n": (0, 8), "m": (0, 8)}
_BQJ_3PHI2 = {"q": _Q, "aq": (0.1, 0.8), "bq": (0.1, 0.8), "cq": (-0.8, -0.1), "y": (1.0, 3.0), "z": (1.0, 3.0)}
# AW parameters are drawn with magnitude in "abcd" and a random sign
_AW = {"q": _Q, "abcd": (0.05, 0.7), "n": (0, 5), "m": (0, 5)}

DEFAULT_DOMAINS: dict[str, dict[str, tuple]] = {
	"LQJ-ORTH": _LQJ,
	"LQJ-DUAL-6W5": _LQJ,
	"LQJ-DUAL-MATRIX": {**_LQJ, "n": (0, 5), "m": (0, 5)},
	"QRACAH-ORTH": _QRACAH,
	"QRACAH-DUAL-8W7": _QRACAH,
	"QRACAH-DUAL-8W7-M0": _QRACAH,
	"SEARS-4PHI3": _QRACAH,
	"SEARS-4PHI3-AS-STATED": _QRACAH,
	"QLAG-ORTH": _QLAG,
	"QLAG-DUAL-FINITE": {**_QLAG, "xy": (-2.0, 2.0)},
	"QLAG-DUAL-BILATERAL": {**_QLAG, "n": (0, 6), "m": (0, 6)},
	"QLAG-GEN-ORTH": _QLAG_GEN,
	"BQJ-ORTH": _BQJ,
	"BQJ-INTEGRAL-3PHI2": {**_BQJ, "n": (0, 6), "m": (0, 6)},
	"BQJ-DUAL-MATRIX": {**_BQJ, "n": (0, 5), "m": (0, 5)},
	"BQJ-DUAL-3PHI2-A": _BQJ_3PHI2,
	"BQJ-DUAL-3PHI2-B": {"q": _Q, "abc": (0.2, 0.9), "de": (0.3, 0.9)},
	"QCHU-NONTERM": _BQJ_3PHI2,
	"BQJ-SPECIAL-I": {**_BQJ_3PHI2, "n": (0, 6)},
	"BQJ-SPECIAL-II": {**_BQJ, "n": (0, 3), "m": (0, 3)},
	"AW-ORTH": _AW,
	"AW-QBETA-8W7": _AW,
	"AW-MASS": _AW,
	"AW-LIMIT": _AW,
	"INV-N": {"q": _Q, "a": (-0.9, 0.9)},
	"INV-M": {"q": _Q, "a": (-0.9, 0.9)},
	"INV-K": {"q": _Q, "a": (-0.9, 0.9), "c": (-0.9, 0.9)},
	"INV-FG": {"q": _Q},
	"INV-ASSOC": {**_BQJ, "a0": (-0.9, 0.9), "size": (3, 6)},
	"SUPP-QBINOM": {"q": _Q, "a": (-2.0, 2.0), "z": (-0.8, 0.8)},
	"SUPP-1PSI1": {"q": _Q, "a": (1.2, 3.0), "b": (-0.5, 0.5), "z": (0.5, 0.9)},
	"SUPP-WATSON": {"q": _Q, "a": (0.1, 0.6), "bcde": (0.4, 0.95), "n": (0, 8)},
	"SUPP-SHIFT": {"q": _Q, "x": (0.1, 2.0), "n": (0, 10), "k": (0, 10)},
}

DEFAULT_TOLERANCES: dict[str, float] = {
	"LQJ-ORTH": 1e-8,
	"LQJ-DUAL-6W5": 1e-9,
	"LQJ-DUAL-MATRIX": 1e-8,
	"QRACAH-ORTH": 1e-9,
	"QRACAH-DUAL-8W7": 1e-9,
	"QRACAH-DUAL-8W7-M0": 1e-9,
	"SEARS-4PHI3": 1e-9,
	"SEARS-4PHI3-AS-STATED": 1e-9,
	"QLAG-ORTH": 1e-8,
	"QLAG-DUAL-FINITE": 1e-9,
	"QLAG-DUAL-BILATERAL": 1e-8,
	"QLAG-GEN-ORTH": 1e-8,
	"BQJ-ORTH": 1e-8,
	"BQJ-INTEGRAL-3PHI2": 1e-8,
	"BQJ-DUAL-MATRIX": 1e-8,
	"BQJ-DUAL-3PHI2-A": 1e-9,
	"BQJ-DUAL-3PHI2-B": 1e-9,
	"QCHU-NONTERM": 1e-9,
	"BQJ-SPECIAL-I": 1e-9,
	"BQJ-SPECIAL-II": 1e-9,
	"AW-ORTH": 1e-6,
	"AW-QBETA-8W7": 1e-6,
	"AW-MASS": 1e-6,
	"AW-LIMIT": 1e-6,
	"INV-N": 1e-10,
	"INV-M": 1e-9,
	"INV-K": 1e-8,
	"INV-FG": 1e-10,
	"INV-ASSOC": 1e-10,
	"SUPP-QBINOM": 1e-9,
	"SUPP-1PSI1": 1e-9,
	"SUPP-WATSON": 1e-9,
	"SUPP-SHIFT": 1e-9,
}

EXTENDED_TOLERANCES: dict[str, float] = {
	"BQJ-SPECIAL-II": 1e-20,
	"INV-N": 1e-24,
}

GRAM_TOLERANCES: dict[str, float] = {
	"little-qjacobi": 1e-9,
	"q-racah": 1e-9,
	"q-laguerre": 1e-9,
	"q-laguerre-gen": 1e-9,
	"big-qjacobi": 1e-9,
	"askey-wilson": 1e-6,
}


# -----------------------------
# Run configuration
# -----------------------------

@dataclass
class RunConfig:
	precision: str = "standard"
	trials: int = 200
	seed: int = 42
	tolerances: dict[str, float] = field(default_factory=dict)
	domains: dict[str, dict[str, tuple]] = field(default_factory=dict)
	params: dict[str, Any] = field(default_factory=dict)
	output: str = "json"
	out_path: Optional[str] = None
	workers: int = 1
	exploratory: bool = False

	def tolerance_for(self, identity_id: str) -> Optional[float]:
		return self.tolerances.get(identity_id)

	def domain_for(self, identity_id: str) -> dict[str, tuple]:
		base = dict(DEFAULT_DOMAINS.get(identity_id, {}))
		base.update(self.domains.get(identity_id, {}))
		return base


def _check_range(identity_id: str, param: str, value: Any) -> tuple:
	if not isinstance(value, (list, tuple)) or len(value) != 2:
		raise ConfigError(f"domain {identity_id}.{param} must be a [lo, hi] pair, got {value!r}")
	lo, hi = value
	if not all(isinstance(v, (int, float)) for v in (lo, hi)) or lo > hi:
		raise ConfigError(f"domain {identity_id}.{param} has an invalid range {value!r}")
	return (lo, hi)


def parse_complex(value: Any) -> complex:
	"""Accept ``0.3``, ``"0.3"``, ``"0.3+0.1i"`` or ``[0.3, 0.1]``."""
	if isinstance(value, (list, tuple)):
		if len(value) != 2:
			raise ConfigError(f"complex parameter must be [re, im], got {value!r}")
		return complex(float(value[0]), float(value[1]))
	if isinstance(value, (int, float, complex)):
		return complex(value)
	text = str(value).strip().replace(" ", "")
	if text.endswith("i"):
		text = text[:-1] + "j"
	try:
		return complex(text)
	except ValueError as e:
		raise ConfigError(f"cannot parse complex parameter {value!r}") from e


def load_run_config(path: Optional[str], overrides: Optional[dict[str, Any]] = None) -> RunConfig:
	"""Build a RunConfig from an optional JSON file; ``overrides`` (command-line flags) win."""
	cfg = RunConfig(
		precision=get_config(None).MODE,
		trials=BaseConfig.TRIALS,
		seed=BaseConfig.SEED,
	)
	if path:
		try:
			raw = json.loads(Path(path).read_text(encoding="utf-8"))
		except OSError as e:
			raise ConfigError(f"cannot read config file {path}: {e}") from e
		except json.JSONDecodeError as e:
			raise ConfigError(f"config file {path} is not valid JSON: {e}") from e
		if not isinstance(raw, dict):
			raise ConfigError("config file must contain a JSON object")
		unknown = set(raw) - {"precision", "trials", "seed", "tolerances", "domains", "params"}
		if unknown:
			raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
		if "precision" in raw:
			cfg.precision = get_config(str(raw["precision"])).MODE
		for key in ("trials", "seed"):
			if key in raw:
				if not isinstance(raw[key], int) or raw[key] < 0:
					raise ConfigError(f"{key} must be a nonnegative integer")
				setattr(cfg, key, raw[key])
		for identity_id, tol in (raw.get("tolerances") or {}).items():
			if not isinstance(tol, (int, float)) or tol <= 0:
				raise ConfigError(f"tolerance for {identity_id} must be a positive number")
			cfg.tolerances[identity_id] = float(tol)
		for identity_id, ranges in (raw.get("domains") or {}).items():
			if not isinstance(ranges, dict):
				raise ConfigError(f"domain for {identity_id} must be an object")
			cfg.domains[identity_id] = {p: _check_range(identity_id, p, v) for p, v in ranges.items()}
		for name, value in (raw.get("params") or {}).items():
			cfg.params[name] = value

	for key, value in (overrides or {}).items():
		if value is None:
			continue
		if key == "precision":
			cfg.precision = get_config(value).MODE
		elif key == "tolerances":
			cfg.tolerances.update(value)
		elif key == "domains":
			for identity_id, ranges in value.items():
				cfg.domains.setdefault(identity_id, {}).update(ranges)
		elif key == "params":
			cfg.params.update(value)
		else:
			setattr(cfg, key, value)
	if cfg.trials < 1:
		raise ConfigError("trials must be at least 1")
	return cfg
