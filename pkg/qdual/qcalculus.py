"""Jackson q-integrals, lattice and bilateral sums, and θ-quadrature."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Optional

import numpy as np

from .config import BaseConfig
from .errors import ConfigError, NoConvergence, QuadratureNotConverged
from .hyperq import TermAccumulator
from .qcore import STANDARD, PrecisionContext, magnitude


logger = logging.getLogger(__name__)

Term = Callable[[int], Any]


@dataclass(frozen=True)
class QIntegralCtrl:
	ctx: PrecisionContext = field(default_factory=lambda: STANDARD)
	max_lattice: int = BaseConfig.MAX_LATTICE

	def __post_init__(self):
		if self.max_lattice < 128:
			raise ConfigError("max_lattice must be at least 128")


@dataclass(frozen=True)
class QuadratureCtrl:
	points: int = BaseConfig.QUADRATURE_POINTS
	refine: bool = True
	ctx: PrecisionContext = field(default_factory=lambda: STANDARD)
	rel_tol: float = 1e-6
	max_points: int = 4 * BaseConfig.QUADRATURE_POINTS

	def __post_init__(self):
		if self.points < 64:
			raise ConfigError("quadrature needs at least 64 points")
		if self.max_points < self.points:
			raise ConfigError("max_points must be at least points")
		if self.refine and self.points & (self.points - 1):
			raise ConfigError("refined quadrature needs a power-of-two point count")


# -----------------------------
# Lattice sums
# -----------------------------

def lattice_sum(term: Term, ctrl: Optional[QIntegralCtrl] = None, start: int = 0) -> Any:
	"""Σ_{k≥start} term(k) under the three-small-terms rule."""
	ctrl = ctrl or QIntegralCtrl()
	acc = TermAccumulator(ctrl.ctx.eps_term, total=ctrl.ctx.scalar(0))
	k = start
	while not acc.add(term(k)):
		k += 1
		if acc.count >= ctrl.max_lattice:
			raise NoConvergence(f"lattice sum did not settle within {ctrl.max_lattice} points")
	logger.debug("lattice sum used %d points", acc.count)
	return acc.total


def qintegral0(f: Callable[[Any], Any], a: Any, q: Any, ctrl: Optional[QIntegralCtrl] = None) -> Any:
	"""∫_0^a f(t) d_qt = a(1-q) Σ f(aq^k) q^k."""
	ctrl = ctrl or QIntegralCtrl()
	ctx = ctrl.ctx
	a = ctx.scalar(a)
	q = ctx.scalar(q)
	if a == 0:
		return ctx.scalar(0)
	state = {"qk": ctx.scalar(1)}

	def term(_k):
		qk = state["qk"]
		state["qk"] = qk * q
		return f(a * qk) * qk

	return a * (1 - q) * lattice_sum(term, ctrl)


def qintegral(f: Callable[[Any], Any], b: Any, a: Any, q: Any, ctrl: Optional[QIntegralCtrl] = None) -> Any:
	"""∫_b^a f(t) d_qt = ∫_0^a - ∫_0^b."""
	ctrl = ctrl or QIntegralCtrl()
	if b == a:
		return ctrl.ctx.scalar(0)
	return qintegral0(f, a, q, ctrl) - qintegral0(f, b, q, ctrl)


def bilateral_sum(term: Term, ctrl: Optional[QIntegralCtrl] = None, start: int = 0) -> Any:
	"""Σ_{k∈ℤ} term(k), visiting start, start+1, start-1, start+2, ...

	Each side stops on its own; the side that finishes first is not
	revisited while the other keeps going.
	"""
	ctrl = ctrl or QIntegralCtrl()
	eps = ctrl.ctx.eps_term
	zero = ctrl.ctx.scalar(0)
	centre = term(start)
	up = TermAccumulator(eps, total=zero)
	down = TermAccumulator(eps, total=zero)
	# both tails are measured against the centre term
	up.largest = down.largest = magnitude(centre)
	up_done = down_done = False
	k = 0
	while not (up_done and down_done):
		k += 1
		if not up_done:
			up_done = up.add(term(start + k))
		if not down_done:
			down_done = down.add(term(start - k))
		if k >= ctrl.max_lattice:
			side = "upper" if not up_done else "lower"
			raise NoConvergence(f"bilateral sum: {side} tail did not settle within {ctrl.max_lattice} points")
	logger.debug("bilateral sum used %d upper and %d lower points", up.count, down.count)
	return centre + up.total + down.total


# -----------------------------
# Continuous quadrature
# -----------------------------

def theta_grid(points: int, ctx: Optional[PrecisionContext] = None) -> tuple[np.ndarray, np.ndarray]:
	"""Nodes θ_j = jπ/points on [0, π] and trapezoid weights."""
	ctx = ctx or STANDARD
	if ctx.extended_mode:
		b = ctx.backend
		step = b.pi / points
		theta = np.empty(points + 1, dtype=object)
		theta[:] = [step * j for j in range(points + 1)]
		weights = np.empty(points + 1, dtype=object)
		weights[:] = [step] * (points + 1)
		weights[0] = weights[-1] = step / 2
		return theta, weights
	theta = np.linspace(0.0, np.pi, points + 1)
	weights = np.full(points + 1, np.pi / points)
	weights[0] = weights[-1] = np.pi / (2 * points)
	return theta, weights


def _integrate(values: np.ndarray, weights: np.ndarray, ctx: PrecisionContext) -> Any:
	total = ctx.scalar(0)
	if ctx.extended_mode:
		for v, w in zip(values, weights):
			total = total + v * w
		return total
	return complex(np.dot(values, weights))


def aw_quadrature(g: Callable[[np.ndarray], Any], ctrl: Optional[QuadratureCtrl] = None) -> Any:
	"""(1/2π)∫_0^π g(θ)dθ by the trapezoid rule on a uniform θ-grid.

	``g`` receives the whole θ array.  With ``refine`` the value on every
	other node is compared with the full grid; while they disagree by more
	than ``rel_tol`` the grid is doubled, up to ``max_points``, after which
	QuadratureNotConverged is raised.
	"""
	ctrl = ctrl or QuadratureCtrl()
	ctx = ctrl.ctx
	two_pi = 2 * ctx.pi
	points = ctrl.points
	while True:
		theta, weights = theta_grid(points, ctx)
		values = g(theta)
		if not isinstance(values, np.ndarray) or values.shape == ():
			values = np.full(theta.shape, values, dtype=object if ctx.extended_mode else complex)
		fine = _integrate(values, weights, ctx) / two_pi
		if not ctrl.refine:
			return fine

		coarse = _integrate(values[::2], 2 * weights[::2], ctx) / two_pi
		scale = max(abs(fine), _integrate(np.abs(values), weights, ctx).real / float(two_pi))
		gap = abs(fine - coarse)
		logger.debug("quadrature on %d points, doubling gap %.3g", points, float(gap))
		if gap <= ctrl.rel_tol * scale:
			return fine
		if 2 * points > ctrl.max_points:
			raise QuadratureNotConverged(
				f"θ-quadrature did not stabilise: |I(N) - I(N/2)| = {float(gap):.3g} on {points} points"
			)
		points *= 2


def gauss_legendre(f: Callable[[Any], Any], a: Any, b: Any, ctrl: Optional[QuadratureCtrl] = None) -> Any:
	"""∫_a^b f(x)dx by Gauss-Legendre with degree doubling.

	``f`` is called on one scalar node at a time.  The integral is accepted
	when the backend's error estimate is within ``rel_tol`` of the value;
	integrals that vanish are judged against √eps instead.
	"""
	ctrl = ctrl or QuadratureCtrl()
	ctx = ctrl.ctx
	backend = ctx.backend
	value, error = backend.quad(f, [ctx.real(a), ctx.real(b)], method="gauss-legendre", error=True)
	scale = max(float(abs(value)), ctx.machine_eps ** 0.5)
	logger.debug("Gauss-Legendre on [%s, %s], error estimate %.3g", a, b, float(error))
	if float(error) > ctrl.rel_tol * scale:
		raise QuadratureNotConverged(f"Gauss-Legendre error estimate {float(error):.3g} exceeds the tolerance")
	return ctx.scalar(value)
