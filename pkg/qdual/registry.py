"""Identity registry and the randomized verification engine."""

from __future__ import annotations

import logging
import math
import time
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Optional

import numpy as np

from .config import DEFAULT_DOMAINS, DEFAULT_TOLERANCES, EXTENDED_TOLERANCES
from .errors import QDualError, UnknownIdentity
from .identities import BUILDERS
from .qcore import STANDARD, PrecisionContext, magnitude
from .qpolys import FamilyParams, gram_block, norm_eval


logger = logging.getLogger(__name__)

FLOOR = 1e-300


@dataclass(frozen=True)
class IdentitySpec:
	id: str
	anchor: str
	sampler: Callable[[np.random.Generator, dict], dict]
	lhs: Callable[[dict, PrecisionContext], Any]
	rhs: Callable[[dict, PrecisionContext], Any]
	default_tol: float
	kind: str = "equality"
	scale: Optional[Callable[[dict, PrecisionContext], float]] = None
	slack: Optional[Callable[[dict], float]] = None
	exploratory: bool = False
	warning: Optional[str] = None

	def tolerance(self, ctx: PrecisionContext) -> float:
		if ctx.extended_mode:
			return EXTENDED_TOLERANCES.get(self.id, self.default_tol)
		return self.default_tol

	def domain(self) -> dict:
		return dict(DEFAULT_DOMAINS.get(self.id, {}))

	def domain_summary(self, domain: Optional[dict] = None) -> str:
		domain = self.domain() if domain is None else domain
		return ", ".join(f"{name} in [{lo}, {hi}]" for name, (lo, hi) in domain.items())


@dataclass
class TrialResult:
	index: int
	params: dict
	rel_err: float
	passed: bool
	lhs: Optional[complex] = None
	rhs: Optional[complex] = None
	error: Optional[str] = None
	elapsed_ms: float = 0.0


@dataclass
class VerificationReport:
	id: str
	trials: int
	passes: int
	worst_rel_err: float
	worst_params: dict
	seed: int
	precision: str = "standard"
	runtime_ms: float = 0.0
	tolerance: float = 0.0
	exploratory: bool = False
	diagnostics: list[TrialResult] = field(default_factory=list)

	@property
	def passed(self) -> bool:
		return self.passes == self.trials

	def to_record(self) -> dict:
		worst = self.worst_rel_err if math.isfinite(self.worst_rel_err) else None
		return {
			"id": self.id,
			"trials": self.trials,
			"passes": self.passes,
			"worst_rel_err": worst,
			"worst_params": self.worst_params,
			"seed": self.seed,
			"precision": self.precision,
			"runtime_ms": round(self.runtime_ms, 3),
		}


# -----------------------------
# Registry
# -----------------------------

_REGISTRY: dict[str, IdentitySpec] = {}


def _build() -> dict[str, IdentitySpec]:
	if not _REGISTRY:
		for identity_id, builder in BUILDERS.items():
			_REGISTRY[identity_id] = IdentitySpec(
				id=identity_id, default_tol=DEFAULT_TOLERANCES[identity_id], **builder()
			)
	return _REGISTRY


def get_identity(identity_id: str) -> IdentitySpec:
	registry = _build()
	try:
		return registry[identity_id.upper()]
	except KeyError:
		raise UnknownIdentity.among(identity_id, registry) from None


def identity_ids(exploratory: bool = False) -> list[str]:
	return [i for i, spec in _build().items() if exploratory or not spec.exploratory]


def list_identities() -> list[tuple[str, str, str]]:
	return [(spec.id, spec.anchor, spec.domain_summary()) for spec in _build().values()]


# -----------------------------
# Verification
# -----------------------------

def trial_rng(seed: int, index: int, identity_id: str) -> np.random.Generator:
	"""Per-trial stream, so serial and threaded runs draw the same parameters."""
	return np.random.default_rng([seed, index, zlib.crc32(identity_id.encode())])


def relative_error(lhs: Any, rhs: Any, scale: float = 0.0) -> float:
	gap = magnitude(lhs - rhs)
	return gap / max(magnitude(lhs), magnitude(rhs), scale, FLOOR)


def _cast(params: dict, ctx: PrecisionContext) -> dict:
	# floats enter the backend exactly; integers stay indices
	return {k: ctx.real(v) if isinstance(v, float) else v for k, v in params.items()}


def trial_error(spec: IdentitySpec, params: dict, ctx: PrecisionContext) -> tuple[Any, Any, float]:
	"""Both sides of one identity at ``params`` and their relative error."""
	p = _cast(params, ctx)
	lhs = ctx.check_finite(spec.lhs(p, ctx), f"{spec.id} left side")
	rhs = ctx.check_finite(spec.rhs(p, ctx), f"{spec.id} right side")
	scale = float(spec.scale(p, ctx)) if spec.scale is not None else 0.0
	return lhs, rhs, relative_error(lhs, rhs, scale)


def run_trial(spec: IdentitySpec, index: int, seed: int, ctx: PrecisionContext, tol: float,
			  domain: dict) -> TrialResult:
	start = time.perf_counter()
	params: dict = {}
	try:
		# sampler errors are recorded as failed trials too
		params = spec.sampler(trial_rng(seed, index, spec.id), domain)
		lhs, rhs, err = trial_error(spec, params, ctx)
		bound = tol + (spec.slack(params) if spec.slack is not None else 0.0)
		return TrialResult(index, params, err, err <= bound, complex(lhs), complex(rhs),
						   elapsed_ms=(time.perf_counter() - start) * 1e3)
	except (QDualError, ArithmeticError) as e:
		tag = getattr(e, "tag", type(e).__name__)
		logger.warning("%s trial %d failed with %s: %s", spec.id, index, tag, e)
		return TrialResult(index, params, math.inf, False, error=tag,
						   elapsed_ms=(time.perf_counter() - start) * 1e3)


def verify(identity_id: str, trials: int = 200, seed: int = 42, ctx: Optional[PrecisionContext] = None,
		   tol: Optional[float] = None, domain: Optional[dict] = None, workers: int = 1) -> VerificationReport:
	spec = get_identity(identity_id)
	ctx = ctx or STANDARD
	if trials < 1:
		raise ValueError("trials must be at least 1")
	tol = spec.tolerance(ctx) if tol is None else tol
	full_domain = spec.domain()
	full_domain.update(domain or {})
	if spec.warning:
		logger.warning("%s: %s", spec.id, spec.warning)
	if spec.exploratory:
		logger.warning("%s is exploratory; its result does not gate the exit code", spec.id)

	start = time.perf_counter()
	indices = range(trials)
	if workers > 1:
		with ThreadPoolExecutor(max_workers=workers) as pool:
			results = list(pool.map(lambda i: run_trial(spec, i, seed, ctx, tol, full_domain), indices))
	else:
		results = [run_trial(spec, i, seed, ctx, tol, full_domain) for i in indices]
	results.sort(key=lambda r: r.index)
	runtime = (time.perf_counter() - start) * 1e3

	worst = max(results, key=lambda r: r.rel_err)
	report = VerificationReport(
		id=spec.id,
		trials=trials,
		passes=sum(r.passed for r in results),
		worst_rel_err=worst.rel_err,
		worst_params=worst.params,
		seed=seed,
		precision=ctx.mode,
		runtime_ms=runtime,
		tolerance=tol,
		exploratory=spec.exploratory,
		diagnostics=results,
	)
	logger.info("%s: %d/%d passed, worst relative error %.3g", spec.id, report.passes, trials, worst.rel_err)
	return report


# -----------------------------
# Gram matrices
# -----------------------------

@dataclass
class GramReport:
	family: str
	size: int
	matrix: np.ndarray
	norms: list
	max_offdiag_rel: float
	max_diag_rel_err: float
	precision: str = "standard"
	runtime_ms: float = 0.0

	def to_record(self) -> dict:
		return {
			"family": self.family,
			"size": self.size,
			"max_offdiag_rel": self.max_offdiag_rel,
			"max_diag_rel_err": self.max_diag_rel_err,
			"precision": self.precision,
			"runtime_ms": round(self.runtime_ms, 3),
		}


def gram(family: str, size: int, params: dict, ctx: Optional[PrecisionContext] = None) -> GramReport:
	"""Gram block of the first ``size`` polynomials and its deviation from diag(norms)."""
	ctx = ctx or STANDARD
	params = dict(params)
	fp = FamilyParams(family, params, params.pop("q", 0.5))
	start = time.perf_counter()
	G = gram_block(fp, size, ctx)
	norms = [norm_eval(fp, n, ctx) for n in range(size)]
	offdiag = 0.0
	diag = 0.0
	for n in range(size):
		diag = max(diag, float(abs(G[n, n] - norms[n])) / max(float(abs(norms[n])), FLOOR))
		for m in range(n):
			mean = max(float(abs(G[n, n] * G[m, m])) ** 0.5, FLOOR)
			offdiag = max(offdiag, float(abs(G[n, m])) / mean)
	runtime = (time.perf_counter() - start) * 1e3
	logger.info("gram %s size %d: offdiag %.3g, diag %.3g", fp.family, size, offdiag, diag)
	return GramReport(fp.family, size, G, norms, offdiag, diag, ctx.mode, runtime)
