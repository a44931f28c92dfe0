"""The q-orthogonal polynomial families, their measures and norms.

Nodes are family specific: an integer lattice index k for the discrete
families (x = q^k for little q-Jacobi, x = cq^k for q-Laguerre, x = k for
q-Racah), the point t itself for big q-Jacobi and the angle θ (x = cos θ)
for Askey-Wilson.  θ may be a numpy array.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Optional, Sequence

import numpy as np

from .errors import ConfigError, DegreeExceedsN, UnknownFamily, VanishingDenominatorProduct
from .hyperq import PhiSeries, eval_guarded, eval_phi
from .qcalculus import (
	QIntegralCtrl,
	QuadratureCtrl,
	aw_quadrature,
	bilateral_sum,
	lattice_sum,
	qintegral,
)
from .qcore import (
	INF,
	STANDARD,
	PochhammerLadder,
	PrecisionContext,
	QParam,
	any_zero,
	coerce,
	narrow,
	qpoch,
	qpoch_multi,
)


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FamilyParams:
	family: str
	params: dict = field(default_factory=dict)
	q: Any = 0.5

	def __getitem__(self, name: str) -> Any:
		return self.params[name]

	def get(self, name: str, default: Any = None) -> Any:
		return self.params.get(name, default)


@dataclass(frozen=True)
class WeightSpec:
	"""The measure of one family instance.

	``node`` maps a node argument (lattice index, or θ for Askey-Wilson) to
	its abscissa and ``weight`` gives the measure there.
	"""

	kind: str
	nodes: str
	node: Callable[[Any], Any]
	weight: Callable[[Any], Any]


# -----------------------------
# Families
# -----------------------------

class Family:
	"""Base class: one orthogonal family with its measure."""

	name = ""
	required: tuple = ()
	measure = ("discrete-lattice", "k = 0, 1, 2, ...")

	def validate(self, fp: FamilyParams) -> None:
		missing = [p for p in self.required if p not in fp.params]
		if missing:
			raise ConfigError(f"{self.name} needs parameters {', '.join(missing)}")
		if not 0 < abs(complex(fp.q)) < 1:
			raise ConfigError(f"{self.name}: |q| must lie in (0, 1)")

	def scalars(self, fp: FamilyParams, ctx: PrecisionContext) -> dict:
		values = {name: ctx.scalar(fp.params[name]) for name in self.required}
		values["q"] = ctx.scalar(fp.q)
		return values

	def poly(self, fp, n, node, ctx):
		raise NotImplementedError

	def weight(self, fp, node, ctx):
		raise NotImplementedError

	def node(self, fp, i, ctx):
		"""Abscissa of the node with argument ``i``."""
		raise NotImplementedError

	def node_weight(self, fp, i, ctx):
		return self.weight(fp, i, ctx)

	def weight_spec(self, fp: FamilyParams, ctx: PrecisionContext) -> WeightSpec:
		kind, rule = self.measure
		return WeightSpec(
			kind, rule,
			node=lambda i: self.node(fp, i, ctx),
			weight=lambda i: self.node_weight(fp, i, ctx),
		)

	def norm(self, fp, n, ctx):
		raise NotImplementedError

	def basis(self, fp, n, node, ctx):
		raise NotImplementedError

	def factorisation(self, fp, ctx):
		"""(kernel name, kernel parameter, row scale) with p_n = row_scale(n) [C X]_{n,node}."""
		raise NotImplementedError

	def gram(self, fp, degrees, ctx, qctrl, quadctrl):
		raise NotImplementedError

	def polys(self, fp, degrees, node, ctx) -> list:
		return [self.poly(fp, n, node, ctx) for n in degrees]


def _stack(values: list, ctx: PrecisionContext) -> np.ndarray:
	return ctx.array(values)


def _outer_term(weight: Any, values: np.ndarray) -> np.ndarray:
	return weight * np.outer(values, values)


class LittleQJacobi(Family):
	name = "little-qjacobi"
	required = ("a", "b")
	measure = ("discrete-lattice", "x = q^k, k = 0, 1, 2, ...")

	def poly(self, fp, n, k, ctx):
		def build(ctx):
			v = self.scalars(fp, ctx)
			a, b, q = v["a"], v["b"], v["q"]
			return PhiSeries((QParam.power(-n), QParam(a * b, n + 1)), (QParam(a, 1),), q, q ** (k + 1))

		return eval_guarded(build, ctx).value

	def weight(self, fp, k, ctx):
		v = self.scalars(fp, ctx)
		a, b, q = v["a"], v["b"], v["q"]
		return (a * q) ** k * qpoch(b * q, q, k, ctx) / qpoch(q, q, k, ctx)

	def node(self, fp, k, ctx):
		return ctx.scalar(fp.q) ** k

	def norm(self, fp, n, ctx):
		v = self.scalars(fp, ctx)
		a, b, q = v["a"], v["b"], v["q"]
		head = qpoch(a * b * q ** 2, q, INF, ctx) / qpoch(a * q, q, INF, ctx)
		ratio = qpoch_multi([q, b * q], q, n, ctx) / qpoch_multi([a * q, a * b * q], q, n, ctx)
		return head * ratio * (1 - a * b * q) * (a * q) ** n / (1 - a * b * q ** (2 * n + 1))

	def basis(self, fp, n, k, ctx):
		v = self.scalars(fp, ctx)
		a, b, q = v["a"], v["b"], v["q"]
		return qpoch(a * b * q ** 2, q, n, ctx) / qpoch(a * q, q, n, ctx) * q ** (n * k)

	def factorisation(self, fp, ctx):
		v = self.scalars(fp, ctx)
		return "N", v["a"] * v["b"] * v["q"], lambda n: 1

	def gram(self, fp, degrees, ctx, qctrl, quadctrl):
		v = self.scalars(fp, ctx)
		a, b, q = v["a"], v["b"], v["q"]
		bq_ladder = PochhammerLadder(b * q, q, ctx)
		q_ladder = PochhammerLadder(q, q, ctx)

		def term(k):
			w = (a * q) ** k * bq_ladder(k) / q_ladder(k)
			return _outer_term(w, _stack(self.polys(fp, degrees, k, ctx), ctx))

		return lattice_sum(term, qctrl)


class QRacah(Family):
	name = "q-racah"
	required = ("a", "b", "c", "N")
	measure = ("discrete-lattice", "x = q^-k + cq^(k-N), k = 0 .. N")

	def validate(self, fp):
		super().validate(fp)
		N = fp.params["N"]
		if int(N) != N or N < 0:
			raise ConfigError(f"q-racah needs a nonnegative integer N, got {N!r}")

	def _abcN(self, fp, ctx):
		v = self.scalars(fp, ctx)
		return v["a"], v["b"], v["c"], int(fp.params["N"]), v["q"]

	def poly(self, fp, n, x, ctx):
		N = int(fp.params["N"])
		if n > N:
			raise DegreeExceedsN(f"q-racah degree {n} exceeds N={N}")

		def build(ctx):
			a, b, c, N, q = self._abcN(fp, ctx)
			return PhiSeries(
				(QParam.power(-n), QParam(a * b, n + 1), QParam.power(-x), QParam(c, x - N)),
				(QParam(a, 1), QParam.power(-N), QParam(b * c, 1)),
				q, q,
			)

		return eval_guarded(build, ctx).value

	def weight(self, fp, k, ctx):
		a, b, c, N, q = self._abcN(fp, ctx)
		if k > N:
			return ctx.scalar(0)
		qN = q ** (-N)
		head = qpoch(c * qN, q, k, ctx) / qpoch(q, q, k, ctx) * (1 - c * q ** (2 * k - N)) / (1 - c * qN)
		num = qpoch_multi([a * q, b * c * q, qN], q, k, ctx)
		den = qpoch_multi([c * qN / a, qN / b, c * q], q, k, ctx)
		return head * num / den * (a * b * q) ** (-k)

	def node(self, fp, k, ctx):
		a, b, c, N, q = self._abcN(fp, ctx)
		return q ** (-k) + c * q ** (k - N)

	def h(self, fp, n, ctx):
		a, b, c, N, q = self._abcN(fp, ctx)
		head = qpoch_multi([b * q, a * q / c], q, N, ctx) / qpoch_multi([a * b * q ** 2, 1 / c], q, N, ctx)
		mid = (1 - a * b * q ** (2 * n + 1)) / (1 - a * b * q)
		num = qpoch_multi([a * b * q, a * q, b * c * q, q ** (-N)], q, n, ctx)
		den = qpoch_multi([q, b * q, a * q / c, a * b * q ** (N + 2)], q, n, ctx)
		return head * mid * num / den * (q ** N / c) ** n

	def norm(self, fp, n, ctx):
		# the Gram diagonal is 1/h_n
		return 1 / self.h(fp, n, ctx)

	def basis(self, fp, n, x, ctx):
		a, b, c, N, q = self._abcN(fp, ctx)
		num = qpoch_multi([a * b * q ** 2, q ** (-x), c * q ** (x - N)], q, n, ctx)
		return num / qpoch_multi([a * q, q ** (-N), b * c * q], q, n, ctx)

	def factorisation(self, fp, ctx):
		a, b, c, N, q = self._abcN(fp, ctx)
		return "N", a * b * q, lambda n: 1

	def gram(self, fp, degrees, ctx, qctrl, quadctrl):
		a, b, c, N, q = self._abcN(fp, ctx)
		if max(degrees) > N:
			raise DegreeExceedsN(f"q-racah Gram block needs degrees <= N={N}")
		# the weights change sign, so the finite sum is formed at guard precision
		guard = ctx.guard
		total = guard.scalar(0)
		for k in range(N + 1):
			total = total + _outer_term(self.weight(fp, k, guard), _stack(self.polys(fp, degrees, k, guard), guard))
		return narrow(total, ctx)


class QLaguerre(Family):
	name = "q-laguerre"
	required = ("alpha", "c")
	measure = ("discrete-bilateral", "x = cq^k, k in Z")

	def _y(self, fp, ctx):
		return ctx.scalar(fp.q) ** (ctx.real(fp.params["alpha"]) + 1)

	def validate(self, fp):
		super().validate(fp)
		if not float(fp.params["alpha"]) > -1:
			raise ConfigError("q-laguerre needs alpha > -1")
		if not float(fp.params["c"]) > 0:
			raise ConfigError("q-laguerre needs c > 0")

	def _cq(self, fp, ctx):
		return ctx.scalar(fp.params["c"]), ctx.scalar(fp.q)

	def poly(self, fp, n, k, ctx):
		def build(ctx):
			c, q = self._cq(fp, ctx)
			return PhiSeries((QParam.power(-n), QParam(-c, k)), (QParam.zero(),), q, self._y(fp, ctx) * q ** n)

		q = ctx.scalar(fp.q)
		return eval_guarded(build, ctx).value / qpoch(q, q, n, ctx)

	def weight(self, fp, k, ctx):
		c, q = self._cq(fp, ctx)
		tail = qpoch(-c, q, INF, ctx) / qpoch(-c, q, k, ctx)
		if tail == 0:
			raise VanishingDenominatorProduct(f"(-cq^{k};q)_inf vanishes")
		return self._y(fp, ctx) ** k / tail

	def node(self, fp, k, ctx):
		c, q = self._cq(fp, ctx)
		return c * q ** k

	def _head(self, fp, ctx):
		c, q = self._cq(fp, ctx)
		y = self._y(fp, ctx)
		num = qpoch_multi([q, -c * y, -q / (c * y)], q, INF, ctx)
		den = qpoch_multi([y, -c, -q / c], q, INF, ctx)
		if den == 0:
			raise VanishingDenominatorProduct("q-laguerre norm denominator vanishes")
		return num / den

	def norm(self, fp, n, ctx):
		c, q = self._cq(fp, ctx)
		y = self._y(fp, ctx)
		return self._head(fp, ctx) * qpoch(y, q, n, ctx) / qpoch(q, q, n, ctx) * q ** (-n)

	def basis(self, fp, n, k, ctx):
		c, q = self._cq(fp, ctx)
		return qpoch(-c * q ** k, q, n, ctx) * self._y(fp, ctx) ** n

	def factorisation(self, fp, ctx):
		c, q = self._cq(fp, ctx)
		return "N_inv", ctx.scalar(0), lambda n: 1 / qpoch(q, q, n, ctx)

	def gram(self, fp, degrees, ctx, qctrl, quadctrl):
		c, q = self._cq(fp, ctx)
		y = self._y(fp, ctx)
		ladder = PochhammerLadder(-c, q, ctx)
		full = qpoch(-c, q, INF, ctx)

		def term(k):
			w = y ** k * ladder(k) / full
			return _outer_term(w, _stack(self.polys(fp, degrees, k, ctx), ctx))

		return bilateral_sum(term, qctrl)


class QLaguerreGen(QLaguerre):
	"""Two-variable q-Laguerre: the q^{α+1} of the classical family becomes a free y, |y| < 1."""

	name = "q-laguerre-gen"
	required = ("y", "c")
	measure = ("discrete-bilateral", "x = cq^k, k in Z")

	def _y(self, fp, ctx):
		return ctx.scalar(fp.params["y"])

	def validate(self, fp):
		Family.validate(self, fp)
		if not abs(complex(fp.params["y"])) < 1:
			raise ConfigError("q-laguerre-gen needs |y| < 1")
		if not float(fp.params["c"]) > 0:
			raise ConfigError("q-laguerre-gen needs c > 0")


class BigQJacobi(Family):
	name = "big-qjacobi"
	required = ("a", "b", "c")
	measure = ("q-interval", "t on the q-lattices aq^(k+1) and cq^(k+1)")

	def poly(self, fp, n, t, ctx):
		def build(ctx):
			v = self.scalars(fp, ctx)
			a, b, c, q = v["a"], v["b"], v["c"], v["q"]
			return PhiSeries((QParam.power(-n), QParam(a * b, n + 1), QParam.generic(coerce(t, ctx))), (QParam(a, 1), QParam(c, 1)), q, q)

		return eval_guarded(build, ctx).value

	def weight(self, fp, t, ctx):
		v = self.scalars(fp, ctx)
		a, b, c, q = v["a"], v["b"], v["c"], v["q"]
		den = qpoch_multi([t, b * t / c], q, INF, ctx)
		if any_zero(den):
			raise VanishingDenominatorProduct("big q-Jacobi weight denominator vanishes")
		return qpoch_multi([t / a, t / c], q, INF, ctx) / den

	def node(self, fp, k, ctx):
		"""k >= 0 walks aq^(k+1), k < 0 walks cq^(-k)."""
		v = self.scalars(fp, ctx)
		if k >= 0:
			return v["a"] * v["q"] ** (k + 1)
		return v["c"] * v["q"] ** (-k)

	def node_weight(self, fp, k, ctx):
		return self.weight(fp, self.node(fp, k, ctx), ctx)

	def mass(self, fp, ctx):
		v = self.scalars(fp, ctx)
		a, b, c, q = v["a"], v["b"], v["c"], v["q"]
		num = qpoch_multi([q, c / a, a * q / c, a * b * q ** 2], q, INF, ctx)
		den = qpoch_multi([a * q, b * q, c * q, a * b * q / c], q, INF, ctx)
		return a * q * (1 - q) * num / den

	def norm(self, fp, n, ctx):
		v = self.scalars(fp, ctx)
		a, b, c, q = v["a"], v["b"], v["c"], v["q"]
		ratio = qpoch_multi([q, b * q, a * b * q / c], q, n, ctx) / qpoch_multi([a * q, c * q, a * b * q], q, n, ctx)
		return (self.mass(fp, ctx) * (1 - a * b * q) / (1 - a * b * q ** (2 * n + 1)) * ratio
				* (-a * c * q ** 2) ** n * q ** (n * (n - 1) // 2))

	def basis(self, fp, n, t, ctx):
		v = self.scalars(fp, ctx)
		a, b, c, q = v["a"], v["b"], v["c"], v["q"]
		return qpoch_multi([t, a * b * q ** 2], q, n, ctx) / qpoch_multi([a * q, c * q], q, n, ctx)

	def factorisation(self, fp, ctx):
		v = self.scalars(fp, ctx)
		return "N", v["a"] * v["b"] * v["q"], lambda n: 1

	def gram(self, fp, degrees, ctx, qctrl, quadctrl):
		v = self.scalars(fp, ctx)

		def f(t):
			return _outer_term(self.weight(fp, t, ctx), _stack(self.polys(fp, degrees, t, ctx), ctx))

		return qintegral(f, v["c"] * v["q"], v["a"] * v["q"], v["q"], qctrl)


class AskeyWilson(Family):
	name = "askey-wilson"
	required = ("a", "b", "c", "d")
	measure = ("continuous-interval", "x = cos θ, θ in [0, π]")

	def validate(self, fp):
		super().validate(fp)
		if max(abs(complex(fp.params[p])) for p in self.required) >= 1:
			raise ConfigError("askey-wilson needs max(|a|, |b|, |c|, |d|) < 1")

	@staticmethod
	def h(theta: Any, y: Any, q: Any, ctx: PrecisionContext) -> Any:
		"""(ye^{iθ}, ye^{-iθ}; q)_∞."""
		e = ctx.expj(theta)
		return qpoch(y * e, q, INF, ctx) * qpoch(y / e, q, INF, ctx)

	@staticmethod
	def _recurrence(a, b, c, d, q, k):
		"""(b_k, c_k) of the monic recurrence P_{k+1} = (x - b_k)P_k - c_k P_{k-1}."""
		abcd = a * b * c * d

		def up(j):
			if j == 0:
				return (1 - a * b) * (1 - a * c) * (1 - a * d) / (a * (1 - abcd))
			qj = q ** j
			num = (1 - a * b * qj) * (1 - a * c * qj) * (1 - a * d * qj) * (1 - abcd * qj / q)
			return num / (a * (1 - abcd * qj * qj / q) * (1 - abcd * qj * qj))

		def down(j):
			if j == 0:
				return 0
			qj = q ** j
			num = a * (1 - qj) * (1 - b * c * qj / q) * (1 - b * d * qj / q) * (1 - c * d * qj / q)
			return num / ((1 - abcd * qj * qj / (q * q)) * (1 - abcd * qj * qj / q))

		centre = (a + 1 / a - up(k) - down(k)) / 2
		return centre, (up(k - 1) * down(k) / 4 if k else 0)

	def poly(self, fp, n, theta, ctx):
		"""p_n(cos θ) through the three-term recurrence.

		Equal to (ab, ac, ad;q)_n a^-n times the terminating 4φ3, without the
		cancellation that series suffers once n grows.
		"""
		v = self.scalars(fp, ctx)
		a, b, c, d, q = v["a"], v["b"], v["c"], v["d"], v["q"]
		if n == 0:
			return ctx.scalar(1)
		e = coerce(ctx.expj(theta), ctx)
		x = (e + 1 / e) / 2
		prev, cur = ctx.scalar(0), ctx.scalar(1)
		for k in range(n):
			centre, step = self._recurrence(a, b, c, d, q, k)
			prev, cur = cur, (x - centre) * cur - step * prev
		return 2 ** n * qpoch(a * b * c * d * q ** (n - 1), q, n, ctx) * cur

	def series_poly(self, fp, n, theta, ctx):
		"""The defining 4φ3 form of p_n, kept for cross-checks."""
		v = self.scalars(fp, ctx)
		a, b, c, d, q = v["a"], v["b"], v["c"], v["d"], v["q"]
		e = coerce(ctx.expj(theta), ctx)
		s = PhiSeries(
			(QParam.power(-n), QParam(a * b * c * d, n - 1), QParam.generic(a * e), QParam.generic(a / e)),
			(QParam.generic(a * b), QParam.generic(a * c), QParam.generic(a * d)),
			q, q,
		)
		return qpoch_multi([a * b, a * c, a * d], q, n, ctx) / a ** n * eval_phi(s, ctx).value

	def node(self, fp, theta, ctx):
		e = ctx.expj(theta)
		return (e + 1 / e) / 2

	def weight(self, fp, theta, ctx):
		v = self.scalars(fp, ctx)
		q = v["q"]
		root = ctx.sqrt(q)
		num = self.h(theta, 1, q, ctx) * self.h(theta, -1, q, ctx) * self.h(theta, root, q, ctx) * self.h(theta, -root, q, ctx)
		den = self.h(theta, v["a"], q, ctx) * self.h(theta, v["b"], q, ctx) * self.h(theta, v["c"], q, ctx) * self.h(theta, v["d"], q, ctx)
		if any_zero(den):
			raise VanishingDenominatorProduct("Askey-Wilson weight denominator vanishes")
		return num / den

	def mass(self, fp, ctx):
		"""(abcd;q)_∞ / (q, ab, ac, ad, bc, bd, cd; q)_∞."""
		v = self.scalars(fp, ctx)
		a, b, c, d, q = v["a"], v["b"], v["c"], v["d"], v["q"]
		return qpoch(a * b * c * d, q, INF, ctx) / qpoch_multi([q, a * b, a * c, a * d, b * c, b * d, c * d], q, INF, ctx)

	def norm(self, fp, n, ctx):
		v = self.scalars(fp, ctx)
		a, b, c, d, q = v["a"], v["b"], v["c"], v["d"], v["q"]
		abcd = a * b * c * d
		qn = q ** n
		num = qpoch(abcd * q ** (n - 1), q, n, ctx) * qpoch(abcd * q ** (2 * n), q, INF, ctx)
		den = qpoch_multi([q * qn, a * b * qn, a * c * qn, a * d * qn, b * c * qn, b * d * qn, c * d * qn], q, INF, ctx)
		return num / den

	def basis(self, fp, n, theta, ctx):
		v = self.scalars(fp, ctx)
		a, b, c, d, q = v["a"], v["b"], v["c"], v["d"], v["q"]
		e = ctx.expj(theta)
		num = qpoch(a * b * c * d, q, n, ctx) * qpoch(a * e, q, n, ctx) * qpoch(a / e, q, n, ctx)
		return num / qpoch_multi([a * b, a * c, a * d], q, n, ctx)

	def factorisation(self, fp, ctx):
		v = self.scalars(fp, ctx)
		a, b, c, d, q = v["a"], v["b"], v["c"], v["d"], v["q"]
		return "N", a * b * c * d / q, lambda n: qpoch_multi([a * b, a * c, a * d], q, n, ctx) / a ** n

	def gram(self, fp, degrees, ctx, qctrl, quadctrl):
		# weight and polynomials per grid size, shared by every entry
		tables = {}

		def table(theta):
			if len(theta) not in tables:
				tables[len(theta)] = (self.weight(fp, theta, ctx), [self.poly(fp, n, theta, ctx) for n in degrees])
			return tables[len(theta)]

		def entry(i, j):
			def g(theta):
				w, values = table(theta)
				return w * values[i] * values[j]
			return g

		size = len(degrees)
		out = ctx.zeros((size, size))
		for i in range(size):
			for j in range(i, size):
				out[i, j] = out[j, i] = aw_quadrature(entry(i, j), quadctrl)
		return out


_FAMILIES: dict[str, Family] = {
	fam.name: fam
	for fam in (LittleQJacobi(), QRacah(), QLaguerre(), QLaguerreGen(), BigQJacobi(), AskeyWilson())
}


def families() -> dict[str, Family]:
	return dict(_FAMILIES)


def get_family(name: str) -> Family:
	try:
		return _FAMILIES[name.lower()]
	except KeyError:
		raise UnknownFamily.among(name, _FAMILIES) from None


# -----------------------------
# Public operations
# -----------------------------

def _resolve(fp: FamilyParams) -> Family:
	family = get_family(fp.family)
	family.validate(fp)
	return family


def poly_eval(fp: FamilyParams, n: int, x: Any, ctx: Optional[PrecisionContext] = None) -> Any:
	return _resolve(fp).poly(fp, n, x, ctx or STANDARD)


def weight_eval(fp: FamilyParams, x: Any, ctx: Optional[PrecisionContext] = None) -> Any:
	return _resolve(fp).weight(fp, x, ctx or STANDARD)


def weight_spec(fp: FamilyParams, ctx: Optional[PrecisionContext] = None) -> WeightSpec:
	return _resolve(fp).weight_spec(fp, ctx or STANDARD)


def norm_eval(fp: FamilyParams, n: int, ctx: Optional[PrecisionContext] = None) -> Any:
	return _resolve(fp).norm(fp, n, ctx or STANDARD)


def basis_eval(fp: FamilyParams, n: int, x: Any, ctx: Optional[PrecisionContext] = None) -> Any:
	return _resolve(fp).basis(fp, n, x, ctx or STANDARD)


def gram_entries(fp: FamilyParams, degrees: Sequence[int], ctx: Optional[PrecisionContext] = None,
				 qctrl: Optional[QIntegralCtrl] = None, quadctrl: Optional[QuadratureCtrl] = None) -> np.ndarray:
	"""Pairings <p_n, p_m> for n, m in ``degrees`` under the family's measure."""
	ctx = ctx or STANDARD
	qctrl = qctrl or QIntegralCtrl(ctx)
	quadctrl = quadctrl or QuadratureCtrl(ctx=ctx)
	family = _resolve(fp)
	logger.debug("gram block for %s, degrees %s", family.name, list(degrees))
	return family.gram(fp, list(degrees), ctx, qctrl, quadctrl)


def gram_block(fp: FamilyParams, size: int, ctx: Optional[PrecisionContext] = None,
			   qctrl: Optional[QIntegralCtrl] = None, quadctrl: Optional[QuadratureCtrl] = None) -> np.ndarray:
	if size < 1:
		raise ConfigError("gram block size must be at least 1")
	return gram_entries(fp, range(size), ctx, qctrl, quadctrl)
