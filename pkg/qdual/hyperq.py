"""Basic hypergeometric series: _rφ_s, very-well-poised _{r+1}W_r and _1ψ_1."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Optional, Sequence

import numpy as np

from .config import BaseConfig
from .errors import (
	DenominatorVanishes,
	InvalidSeries,
	NearSingular,
	NoConvergence,
	ParameterOutsideAnnulus,
	VanishingDenominatorProduct,
)
from .qcore import (
	STANDARD,
	INF,
	PrecisionContext,
	QParam,
	coerce,
	any_zero,
	as_qparam,
	magnitude,
	narrow,
	qpoch_multi,
)


logger = logging.getLogger(__name__)


# -----------------------------
# Series descriptions
# -----------------------------

@dataclass(frozen=True)
class PhiSeries:
	numerators: tuple
	denominators: tuple
	q: Any
	z: Any

	def __post_init__(self):
		object.__setattr__(self, "numerators", tuple(as_qparam(a) for a in self.numerators))
		object.__setattr__(self, "denominators", tuple(as_qparam(b) for b in self.denominators))
		if self.r > self.s + 1:
			raise InvalidSeries(f"_{self.r}phi_{self.s} is outside the r <= s+1 regime")

	@property
	def r(self) -> int:
		return len(self.numerators)

	@property
	def s(self) -> int:
		return len(self.denominators)


@dataclass(frozen=True)
class WSeries:
	"""_{r+1}W_r(a1; upper; q, z), with ``upper`` holding a_4 .. a_{r+1}."""

	a1: Any
	upper: tuple
	q: Any
	z: Any

	def __post_init__(self):
		object.__setattr__(self, "a1", as_qparam(self.a1))
		object.__setattr__(self, "upper", tuple(as_qparam(a) for a in self.upper))


@dataclass
class SeriesValue:
	value: Any
	terms_used: int
	terminated: bool
	tail_estimate: float
	largest_term: float = 0.0

	def __post_init__(self):
		if self.terminated:
			self.tail_estimate = 0.0


# -----------------------------
# Stopping rule
# -----------------------------

@dataclass
class TermAccumulator:
	"""Running sum that stops after three consecutive negligible terms.

	A term is negligible when it is at most ``eps`` times the larger of the
	running sum and the largest term seen, so sums that cancel to zero
	still stop.
	"""

	eps: float
	total: Any = 0
	count: int = 0
	largest: float = 0.0
	run_length: int = 3
	_run: int = field(default=0, repr=False)
	_last: Optional[float] = field(default=None, repr=False)
	_prev: Optional[float] = field(default=None, repr=False)

	def add(self, term: Any) -> bool:
		self.total = self.total + term
		self.count += 1
		size = magnitude(term)
		self.largest = max(self.largest, size)
		if size <= self.eps * max(magnitude(self.total), self.largest):
			self._run += 1
		else:
			self._run = 0
		self._prev, self._last = self._last, size
		return self._run >= self.run_length

	def tail_estimate(self) -> float:
		if not self._last:
			return 0.0
		if not self._prev:
			return self._last
		ratio = self._last / self._prev
		if ratio >= 1:
			return self._last
		return self._last * ratio / (1 - ratio)


# -----------------------------
# _rφ_s
# -----------------------------

def termination_index(s: PhiSeries) -> Optional[int]:
	found = [-a.qexp for a in s.numerators if a.is_exact_power and a.qexp <= 0]
	return min(found) if found else None


def _factor(param: QParam, value: Any, q: Any, qk: Any, k: int) -> Any:
	# 1 - param*q^k, with exact q-powers evaluated as 1 - q^(e+k)
	if param.is_exact_power:
		if param.qexp + k == 0:
			return 0
		return 1 - q ** (param.qexp + k)
	return 1 - value * qk


def cancels(sv: SeriesValue) -> bool:
	"""A terminating sum whose largest term dwarfs its value."""
	if not sv.terminated or sv.largest_term == 0 or isinstance(sv.value, np.ndarray):
		return False
	return sv.largest_term > BaseConfig.CANCELLATION_RATIO * magnitude(sv.value)


def eval_guarded(build: Callable[[PrecisionContext], PhiSeries], ctx: Optional[PrecisionContext] = None) -> SeriesValue:
	"""Sum the series ``build(ctx)``.

	When the sum cancels, the series is built again from the caller's inputs
	in ``ctx.guard`` and summed there, so products formed from the inputs
	are not rounded to ctx first.
	"""
	ctx = ctx or STANDARD
	sv = _sum_phi(build(ctx), ctx)
	if ctx.extended_mode or not cancels(sv):
		return sv
	guard = ctx.guard
	exact = _sum_phi(build(guard), guard)
	logger.debug("sum cancelled by %.3g, rebuilt at %d digits", sv.largest_term / max(magnitude(sv.value), 1e-300), guard.dps)
	return SeriesValue(narrow(exact.value, ctx), sv.terms_used, True, 0.0, sv.largest_term)


def eval_phi(s: PhiSeries, ctx: Optional[PrecisionContext] = None) -> SeriesValue:
	return eval_guarded(lambda _ctx: s, ctx)


def _sum_phi(s: PhiSeries, ctx: PrecisionContext) -> SeriesValue:
	q = ctx.scalar(s.q)
	z = coerce(s.z, ctx)
	one = ctx.scalar(1)
	if magnitude(z) == 0:
		return SeriesValue(one, 1, True, 0.0, 1.0)

	stop = termination_index(s)
	if stop is None and s.r == s.s + 1 and magnitude(z) >= 1:
		raise NoConvergence(f"nonterminating _{s.r}phi_{s.s} needs |z| < 1, got {magnitude(z):.3g}")

	nums = [coerce(a.value(q), ctx) for a in s.numerators]
	dens = [coerce(b.value(q), ctx) for b in s.denominators]
	power = 1 + s.s - s.r
	sign = -1 if power % 2 else 1
	near_zero = 1e3 * ctx.machine_eps

	acc = TermAccumulator(ctx.eps_term, total=one * 0)
	term = one
	acc.add(term)
	qk = one
	k = 0
	while True:
		if stop is not None and k >= stop:
			break
		if stop is None and acc.count >= ctx.max_terms:
			raise NoConvergence(f"_{s.r}phi_{s.s} did not converge within {ctx.max_terms} terms")

		denominator = 1 - q * qk
		for b, value in zip(s.denominators, dens):
			factor = _factor(b, value, q, qk, k)
			if b.is_exact_power and any_zero(factor):
				raise DenominatorVanishes(k + 1)
			if magnitude(factor) < near_zero and not b.is_exact_power:
				raise NearSingular(k + 1, f"denominator factor {k} is numerically zero")
			denominator = denominator * factor

		numerator = one
		for a, value in zip(s.numerators, nums):
			numerator = numerator * _factor(a, value, q, qk, k)
		if power:
			numerator = numerator * sign * qk ** power

		term = term * numerator / denominator * z
		k += 1
		qk = qk * q
		if acc.add(term) and stop is None:
			break

	terminated = stop is not None
	logger.debug("_%dphi_%d summed %d terms (terminated=%s)", s.r, s.s, acc.count, terminated)
	return SeriesValue(acc.total, acc.count, terminated, acc.tail_estimate(), acc.largest)


# -----------------------------
# Very-well-poised series
# -----------------------------

def expand_w(s: WSeries, ctx: Optional[PrecisionContext] = None, branch: int = 1) -> PhiSeries:
	"""The _{r+1}φ_r behind a _{r+1}W_r; ``branch`` picks the sign of √a1."""
	ctx = ctx or STANDARD
	q = ctx.scalar(s.q)
	root = branch * ctx.sqrt(s.a1.value(q))
	numerators = [s.a1, QParam.generic(q * root), QParam.generic(-q * root), *s.upper]
	denominators = [QParam.generic(root), QParam.generic(-root)]
	denominators += [s.a1.shift(1) / a for a in s.upper]
	return PhiSeries(numerators, denominators, s.q, s.z)


def eval_w(s: WSeries, ctx: Optional[PrecisionContext] = None) -> SeriesValue:
	return eval_guarded(lambda c: expand_w(s, c), ctx)


def vwp(a1: Any, upper: Sequence[Any], q: Any, z: Any, ctx: Optional[PrecisionContext] = None) -> Any:
	"""Shorthand for the value of _{r+1}W_r(a1; upper; q, z)."""
	return eval_w(WSeries(a1, tuple(upper), q, z), ctx).value


def phi(numerators: Sequence[Any], denominators: Sequence[Any], q: Any, z: Any,
		ctx: Optional[PrecisionContext] = None) -> Any:
	return eval_phi(PhiSeries(tuple(numerators), tuple(denominators), q, z), ctx).value


# -----------------------------
# Ramanujan's bilateral sum
# -----------------------------

def eval_1psi1(a: Any, b: Any, q: Any, z: Any, ctx: Optional[PrecisionContext] = None) -> SeriesValue:
	ctx = ctx or STANDARD
	a, b, q, z = (ctx.scalar(v) for v in (a, b, q, z))
	if a == 0:
		raise ParameterOutsideAnnulus("_1psi_1 needs a != 0")
	inner = float(abs(b / a))
	if not inner < float(abs(z)) < 1:
		raise ParameterOutsideAnnulus(f"need |b/a| < |z| < 1, got |b/a|={inner:.3g}, |z|={float(abs(z)):.3g}")
	zero = ctx.scalar(0)
	one = ctx.scalar(1)
	near_zero = 1e3 * ctx.machine_eps

	upper = TermAccumulator(ctx.eps_term, total=zero)
	term = one
	upper.add(term)
	qk = one
	while True:
		factor = 1 - b * qk
		if abs(factor) < near_zero:
			raise DenominatorVanishes(upper.count, f"(b;q)_{upper.count} vanishes")
		term = term * (1 - a * qk) / factor * z
		qk = qk * q
		if upper.add(term):
			break
		if upper.count >= ctx.max_terms:
			raise NoConvergence("_1psi_1 positive side did not converge")

	lower = TermAccumulator(ctx.eps_term, total=zero)
	term = one
	qk = one
	while True:
		qk = qk / q
		factor = 1 - a * qk
		if abs(factor) < near_zero:
			raise DenominatorVanishes(-(lower.count + 1), f"(a;q)_-{lower.count + 1} vanishes")
		term = term * (1 - b * qk) / factor / z
		if lower.add(term):
			break
		if lower.count >= ctx.max_terms:
			raise NoConvergence("_1psi_1 negative side did not converge")

	logger.debug("_1psi_1 used %d + %d terms", upper.count, lower.count)
	return SeriesValue(
		upper.total + lower.total,
		upper.count + lower.count,
		False,
		upper.tail_estimate() + lower.tail_estimate(),
		max(upper.largest, lower.largest),
	)


def psi11_product(a: Any, b: Any, q: Any, z: Any, ctx: Optional[PrecisionContext] = None) -> Any:
	"""Closed form (az, q/az, q, b/a; q)_∞ / (z, b/az, q/a, b; q)_∞."""
	ctx = ctx or STANDARD
	a, b, q, z = (ctx.scalar(v) for v in (a, b, q, z))
	denominator = qpoch_multi([z, b / (a * z), q / a, b], q, INF, ctx)
	if denominator == 0:
		raise VanishingDenominatorProduct("_1psi_1 product denominator vanishes")
	return qpoch_multi([a * z, q / (a * z), q, b / a], q, INF, ctx) / denominator
