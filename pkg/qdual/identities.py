"""The catalog of verifiable identities.

Each builder returns the keyword arguments of an IdentitySpec: a sampler drawing one admissible
parameter set from a numpy Generator and a domain, and the two sides as
functions of those parameters.  Domains live in config.DEFAULT_DOMAINS.
"""

from __future__ import annotations

import logging
from typing import Any

import numpy as np

from .config import BaseConfig
from .errors import ConfigError
from .hyperq import PhiSeries, WSeries, eval_1psi1, eval_phi, expand_w, phi, psi11_product, vwp
from .invrel import (
	TwoDimMatrix,
	associativity_gap,
	bio_check,
	fg_kernels,
	kernel_K,
	kernel_M,
	kernel_N,
	kernel_N_inv,
	random_system,
)
from .qcalculus import QIntegralCtrl, QuadratureCtrl, aw_quadrature, bilateral_sum, lattice_sum, qintegral
from .qcore import INF, PrecisionContext, QParam, narrow, pochhammer_shift, qbinom, qpoch, qpoch_multi
from .qpolys import FamilyParams, get_family, gram_entries, norm_eval


logger = logging.getLogger(__name__)

MAX_DRAWS = 1000


# -----------------------------
# Sampling helpers
# -----------------------------

def uniform(rng: np.random.Generator, domain: dict, name: str) -> float:
	lo, hi = domain[name]
	return float(rng.uniform(lo, hi))


def integer(rng: np.random.Generator, domain: dict, name: str, lo: int = None, hi: int = None) -> int:
	dlo, dhi = domain[name]
	lo = dlo if lo is None else max(lo, dlo)
	hi = dhi if hi is None else min(hi, dhi)
	return int(rng.integers(int(lo), int(hi) + 1))


def signed(rng: np.random.Generator, domain: dict, name: str) -> float:
	"""Magnitude from the domain, random sign."""
	return uniform(rng, domain, name) * (1 if rng.random() < 0.5 else -1)


def nonzero(rng: np.random.Generator, domain: dict, name: str, floor: float = 0.1) -> float:
	for _ in range(MAX_DRAWS):
		value = uniform(rng, domain, name)
		if abs(value) >= floor:
			return value
	raise ConfigError(f"domain for {name} leaves nothing with |{name}| >= {floor}")


def away_from_powers(ratio: complex, q: float, exponents: range, gap: float = 0.05) -> bool:
	"""True when ratio stays ``gap`` away (relatively) from every q^j."""
	return all(abs(1 - ratio / q ** j) > gap for j in exponents)


def rejection(draw, accept, what: str) -> dict:
	for attempt in range(MAX_DRAWS):
		params = draw()
		if accept(params):
			if attempt:
				logger.debug("%s: accepted after %d rejected draws", what, attempt)
			return params
	raise ConfigError(f"could not draw admissible parameters for {what}")


def from_q_scaled(rng, domain, q, *names) -> dict:
	"""Draw ``xq`` from the domain entry "xq" and return x."""
	return {name: uniform(rng, domain, name + "q") / q for name in names}


# -----------------------------
# Identity builders
# -----------------------------
# Each returns the keyword arguments of IdentitySpec; registry.py wraps them.

def _gram_pair(family: str, keys: tuple):
	def params_of(p):
		return FamilyParams(family, {k: p[k] for k in keys}, p["q"])

	def lhs(p, ctx):
		block = gram_entries(params_of(p), [p["n"], p["m"]], ctx)
		return block[0, 1]

	def rhs(p, ctx):
		return norm_eval(params_of(p), p["n"], ctx) if p["n"] == p["m"] else ctx.scalar(0)

	def scale(p, ctx):
		fp = params_of(p)
		return float(abs(norm_eval(fp, p["n"], ctx) * norm_eval(fp, p["m"], ctx))) ** 0.5

	return lhs, rhs, scale


def lqj_sampler(rng, domain):
	q = uniform(rng, domain, "q")
	return {"q": q, **from_q_scaled(rng, domain, q, "a", "b"),
			"n": integer(rng, domain, "n"), "m": integer(rng, domain, "m")}


def lqj_orth():
	lhs, rhs, scale = _gram_pair("little-qjacobi", ("a", "b"))
	return dict(
		anchor='little q-Jacobi orthogonality ("satisfy the orthogonality relation")',
		sampler=lqj_sampler, lhs=lhs, rhs=rhs, scale=scale,
	)


def lqj_dual_6w5():
	def lhs(p, ctx):
		a, b, q, n, m = p["a"], p["b"], p["q"], p["n"], p["m"]
		upper = [b * q, QParam.power(-n), QParam.power(-m)]
		return vwp(QParam(a * b, 1), upper, q, a * q ** (1 + m + n), ctx)

	def rhs(p, ctx):
		a, b, q, n, m = p["a"], p["b"], p["q"], p["n"], p["m"]
		abq2 = a * b * q ** 2
		num = qpoch(abq2, q, n, ctx) * qpoch(abq2, q, m, ctx) * qpoch(a * q, q, n + m, ctx)
		return num / (qpoch(a * q, q, n, ctx) * qpoch(a * q, q, m, ctx) * qpoch(abq2, q, n + m, ctx))

	return dict(
		anchor='little q-Jacobi dual form ("terminating _6phi_5 summation formula")',
		sampler=lqj_sampler, lhs=lhs, rhs=rhs,
	)


def _transported_norms(C_inv, h, n: int, m: int, ctx: PrecisionContext) -> Any:
	"""[C^-1 diag(h) C^-T]_{n,m}."""
	total = ctx.scalar(0)
	for j in range(min(n, m) + 1):
		total = total + C_inv(n, j) * h(j) * C_inv(m, j)
	return total


def lqj_dual_matrix():
	family = get_family("little-qjacobi")

	def fp_of(p):
		return FamilyParams("little-qjacobi", {"a": p["a"], "b": p["b"]}, p["q"])

	def lhs(p, ctx):
		fp = fp_of(p)
		n, m = p["n"], p["m"]
		return lattice_sum(
			lambda k: family.weight(fp, k, ctx) * family.basis(fp, n, k, ctx) * family.basis(fp, m, k, ctx),
			QIntegralCtrl(ctx),
		)

	def rhs(p, ctx):
		fp = fp_of(p)
		C_inv = kernel_N_inv(p["a"] * p["b"] * p["q"], p["q"], ctx)
		return _transported_norms(C_inv, lambda j: family.norm(fp, j, ctx), p["n"], p["m"], ctx)

	return dict(
		anchor="little q-Jacobi moment matrix X W X^T = N^-1 diag(h) N^-T",
		sampler=lqj_sampler, lhs=lhs, rhs=rhs,
	)


def qracah_sampler(rng, domain):
	N = integer(rng, domain, "N")
	return {"q": uniform(rng, domain, "q"), "a": uniform(rng, domain, "a"), "b": uniform(rng, domain, "b"),
			"c": uniform(rng, domain, "c"), "N": N,
			"n": int(rng.integers(0, N + 1)), "m": int(rng.integers(0, N + 1))}


def qracah_dual_sampler(rng, domain):
	"""N >= n >= m >= 1."""
	p = qracah_sampler(rng, domain)
	n = int(rng.integers(1, p["N"] + 1))
	p.update(n=n, m=int(rng.integers(1, n + 1)))
	return p


def qracah_m0_sampler(rng, domain):
	p = qracah_dual_sampler(rng, domain)
	p["m"] = 0
	return p


def qracah_orth():
	lhs, rhs, scale = _gram_pair("q-racah", ("a", "b", "c", "N"))
	return dict(
		anchor='q-Racah orthogonality ("satisfy the orthogonality relation")',
		sampler=qracah_sampler, lhs=lhs, rhs=rhs, scale=scale,
	)


def qracah_c0(a, b, c, N, n, m, q, ctx):
	num = (qpoch_multi([c * q ** (n - N) / a, q ** (n - N) / b], q, N - n, ctx)
		   * qpoch_multi([a * b * q ** 2, q ** (-n), c * q ** (n - N)], q, m, ctx))
	den = (qpoch_multi([q ** (-1 - N) / (a * b), c * q ** (2 * n - N + 1)], q, N - n, ctx)
		   * qpoch_multi([a * q, q ** (-N), b * c * q], q, m, ctx))
	return num / den


def _qracah_dual_sides():
	def lhs(p, ctx):
		a, b, c, q, N, n, m = p["a"], p["b"], p["c"], p["q"], p["N"], p["n"], p["m"]
		upper = [b * q, a * q / c, QParam(a * b, N + 2), QParam.power(-n), QParam.power(-m)]
		return vwp(QParam(a * b, 1), upper, q, c * q ** (m + n - N), ctx)

	def rhs(p, ctx):
		a, b, c, q, N, n, m = p["a"], p["b"], p["c"], p["q"], p["N"], p["n"], p["m"]
		upper = [QParam(c, m + n - N), QParam.power(1 + n), QParam(a, 1 + n), QParam(b * c, 1 + n),
				 QParam.power(n - N)]
		series = vwp(QParam(c, 2 * n - N), upper, q, 1 / (a * b * q ** (1 + n + m)), ctx)
		return qracah_c0(a, b, c, N, n, m, q, ctx) * series

	return lhs, rhs


def qracah_dual_8w7():
	lhs, rhs = _qracah_dual_sides()
	return dict(
		anchor='q-Racah dual form ("dual form of the orthogonality relation")',
		sampler=qracah_dual_sampler, lhs=lhs, rhs=rhs,
	)


def qracah_dual_8w7_m0():
	lhs, rhs = _qracah_dual_sides()
	return dict(
		anchor="q-Racah dual form at m = 0 (outside the stated range m > 0)",
		sampler=qracah_m0_sampler, lhs=lhs, rhs=rhs, exploratory=True,
	)


def _sears(extra_power: int):
	def lhs(p, ctx):
		a, b, c, q, N, n, m = p["a"], p["b"], p["c"], p["q"], p["N"], p["n"], p["m"]
		nums = [QParam.power(-m), a * q / c, QParam.power(-n), QParam(1 / b, -1 - N)]
		dens = [QParam.power(-N), QParam(a, 1), QParam(1 / (b * c), -m - n - extra_power)]
		return phi(nums, dens, q, q, ctx)

	def rhs(p, ctx):
		a, b, c, q, N, n, m = p["a"], p["b"], p["c"], p["q"], p["N"], p["n"], p["m"]
		prefactor = (qpoch_multi([a * b * q ** (2 + n), q ** (-n), c * q ** (n - N)], q, m, ctx)
					 / qpoch_multi([b * c * q ** (1 + n), q ** (-N), a * q], q, m, ctx))
		nums = [QParam.power(-m), QParam(a, 1 + n), QParam(b * c, 1 + n), QParam.power(n - N)]
		dens = [QParam.power(1 + n - m), QParam(c, n - N), QParam(a * b, 2 + n)]
		return prefactor * phi(nums, dens, q, q, ctx)

	return lhs, rhs


SEARS_WARNING = (
	"the stated Sears-type sum has q^(-1-m-n)/bc as its last denominator, which is not balanced "
	"and fails at m = n = N = 1; SEARS-4PHI3 checks the balanced q^(-m-n)/bc form instead"
)


def sears_4phi3():
	lhs, rhs = _sears(0)
	return dict(
		anchor='Sears-type transformation ("finite form of Sear\'s"), balanced denominator q^(-m-n)/bc',
		sampler=qracah_dual_sampler, lhs=lhs, rhs=rhs, warning=SEARS_WARNING,
	)


def sears_4phi3_as_stated():
	lhs, rhs = _sears(1)
	return dict(
		anchor="Sears-type transformation with the printed denominator q^(-1-m-n)/bc",
		sampler=qracah_dual_sampler, lhs=lhs, rhs=rhs, exploratory=True,
	)


def qlag_sampler(rng, domain):
	return {"q": uniform(rng, domain, "q"), "alpha": uniform(rng, domain, "alpha"),
			"c": uniform(rng, domain, "c"), "n": integer(rng, domain, "n"), "m": integer(rng, domain, "m")}


def qlag_orth():
	lhs, rhs, scale = _gram_pair("q-laguerre", ("alpha", "c"))
	return dict(
		anchor='q-Laguerre discrete orthogonality ("discrete orthogonality relation")',
		sampler=qlag_sampler, lhs=lhs, rhs=rhs, scale=scale,
	)


def qlag_finite_sampler(rng, domain):
	p = qlag_sampler(rng, domain)
	if rng.random() < 0.5:
		p.update(x=p["q"] ** (-p["m"]), y=p["q"] ** (p["alpha"] + 1), point="lattice")
	else:
		p.update(x=uniform(rng, domain, "xy"), y=uniform(rng, domain, "xy"), point="generic")
	return p


def qlag_dual_finite():
	def lhs(p, ctx):
		# x and y of either sign make the terms cancel
		guard = ctx.guard
		q, n = guard.scalar(p["q"]), p["n"]
		x, y = guard.scalar(p["x"]), guard.scalar(p["y"])
		total = guard.scalar(0)
		for k in range(n + 1):
			total = total + qbinom(n, k, q, guard) * y ** (n - k) * x ** k * qpoch(y, q, k, guard)
		return narrow(total, ctx)

	def rhs(p, ctx):
		zero = QParam.zero()
		return phi([QParam.power(-p["n"]), p["x"], p["y"]], [zero, zero], p["q"], p["q"], ctx)

	return dict(
		anchor='q-Laguerre dual finite identity ("is the basic identity"), lattice and generic (x, y)',
		sampler=qlag_finite_sampler, lhs=lhs, rhs=rhs,
	)


def qlag_dual_bilateral():
	def lhs(p, ctx):
		q, c, n, m = ctx.scalar(p["q"]), ctx.scalar(p["c"]), p["n"], p["m"]
		y = q ** (ctx.real(p["alpha"]) + 1)
		full = qpoch(-c, q, INF, ctx)

		def term(k):
			ck = c * q ** k
			return qpoch(-ck, q, m, ctx) * qpoch(-ck, q, n, ctx) * qpoch(-c, q, k, ctx) / full * y ** k

		return y ** (n + m) * bilateral_sum(term, QIntegralCtrl(ctx))

	def rhs(p, ctx):
		q, c, n, m = ctx.scalar(p["q"]), ctx.scalar(p["c"]), p["n"], p["m"]
		y = q ** (ctx.real(p["alpha"]) + 1)
		head = qpoch_multi([q, -c * y, -q / (c * y)], q, INF, ctx) / qpoch_multi([y, -c, -q / c], q, INF, ctx)
		zero = QParam.zero()
		return head * phi([QParam.power(-n), QParam.power(-m), y], [zero, zero], q, q, ctx)

	return dict(
		anchor="q-Laguerre bilateral moment form behind the dual identity",
		sampler=qlag_sampler, lhs=lhs, rhs=rhs,
	)


def qlag_gen_sampler(rng, domain):
	return {"q": uniform(rng, domain, "q"), "y": uniform(rng, domain, "y"), "c": uniform(rng, domain, "c"),
			"n": integer(rng, domain, "n"), "m": integer(rng, domain, "m")}


def qlag_gen_orth():
	lhs, rhs, scale = _gram_pair("q-laguerre-gen", ("y", "c"))
	return dict(
		anchor='two-variable q-Laguerre orthogonality ("we redefine the q-Laguerre polynomials")',
		sampler=qlag_gen_sampler, lhs=lhs, rhs=rhs, scale=scale,
	)


def bqj_sampler(rng, domain):
	q = uniform(rng, domain, "q")
	return {"q": q, **from_q_scaled(rng, domain, q, "a", "b", "c"),
			"n": integer(rng, domain, "n"), "m": integer(rng, domain, "m")}


def bqj_orth():
	lhs, rhs, scale = _gram_pair("big-qjacobi", ("a", "b", "c"))
	return dict(
		anchor='big q-Jacobi orthogonality ("satisfy the orthogonality relation")',
		sampler=bqj_sampler, lhs=lhs, rhs=rhs, scale=scale,
	)


def _bqj_fp(p):
	return FamilyParams("big-qjacobi", {"a": p["a"], "b": p["b"], "c": p["c"]}, p["q"])


def bqj_integral_3phi2():
	family = get_family("big-qjacobi")

	def lhs(p, ctx):
		fp = _bqj_fp(p)
		q, n, m = p["q"], p["n"], p["m"]

		def f(t):
			return qpoch(t, q, n, ctx) * qpoch(t, q, m, ctx) * family.weight(fp, t, ctx)

		return qintegral(f, p["c"] * q, p["a"] * q, q, QIntegralCtrl(ctx))

	def rhs(p, ctx):
		a, b, c, q = (ctx.scalar(p[k]) for k in ("a", "b", "c", "q"))
		n, m = p["n"], p["m"]
		head = (a * q * (1 - q) * qpoch_multi([q, c / a, a * q / c], q, INF, ctx)
				* qpoch(a * b * q ** (2 + m + n), q, INF, ctx) * qpoch_multi([a * q, c * q], q, m, ctx))
		den = qpoch_multi([a * q ** (1 + n), b * q, c * q ** (1 + n), a * b * q / c], q, INF, ctx)
		series = phi([c / b, QParam.power(-n), QParam.power(-m)], [QParam(a, 1), QParam(c, 1)],
					 q, a * b * q ** (2 + n + m), ctx)
		return head / den * series

	return dict(
		anchor="big q-Jacobi moment integral as a terminating _3phi_2",
		sampler=bqj_sampler, lhs=lhs, rhs=rhs,
	)


def bqj_dual_matrix():
	family = get_family("big-qjacobi")

	def lhs(p, ctx):
		fp = _bqj_fp(p)
		q, n, m = p["q"], p["n"], p["m"]

		def f(t):
			return family.weight(fp, t, ctx) * family.basis(fp, n, t, ctx) * family.basis(fp, m, t, ctx)

		return qintegral(f, p["c"] * q, p["a"] * q, q, QIntegralCtrl(ctx))

	def rhs(p, ctx):
		fp = _bqj_fp(p)
		C_inv = kernel_N_inv(p["a"] * p["b"] * p["q"], p["q"], ctx)
		return _transported_norms(C_inv, lambda j: family.norm(fp, j, ctx), p["n"], p["m"], ctx)

	return dict(
		anchor="big q-Jacobi moment matrix X •_q X^T = N^-1 diag(h) N^-T",
		sampler=bqj_sampler, lhs=lhs, rhs=rhs,
	)


def bqj_3phi2_sampler(rng, domain):
	q = uniform(rng, domain, "q")
	return {"q": q, **from_q_scaled(rng, domain, q, "a", "b", "c"),
			"y": uniform(rng, domain, "y"), "z": uniform(rng, domain, "z")}


def bqj_dual_3phi2_a():
	def lhs(p, ctx):
		a, b, c, q, y, z = (p[k] for k in ("a", "b", "c", "q", "y", "z"))
		return phi([y, z, c / b], [a * q, c * q], q, a * b * q ** 2 / (y * z), ctx)

	def rhs(p, ctx):
		a, b, c, q, y, z = (ctx.scalar(p[k]) for k in ("a", "b", "c", "q", "y", "z"))
		w = a * b * q ** 2 / (y * z)
		first = (qpoch_multi([c * q / y, c * q / z, b * q], q, INF, ctx)
				 / qpoch_multi([c * q, c / a, w], q, INF, ctx)
				 * phi([a * q / y, a * q / z, a * b * q / c], [a * q, a * q / c], q, q, ctx))
		second = (qpoch_multi([a * q / y, a * q / z, a * b * q / c], q, INF, ctx)
				  / qpoch_multi([a * q, a / c, w], q, INF, ctx)
				  * phi([c * q / y, c * q / z, b * q], [c * q, c * q / a], q, q, ctx))
		return first + second

	return dict(
		anchor='three-term _3phi_2 transformation ("following transformation of"), big q-Jacobi form',
		sampler=bqj_3phi2_sampler, lhs=lhs, rhs=rhs,
	)


def three_term_b_sampler(rng, domain):
	q = uniform(rng, domain, "q")

	def draw():
		a, b, c = (uniform(rng, domain, "abc") for _ in range(3))
		d, e = (uniform(rng, domain, "de") for _ in range(2))
		return {"q": q, "a": a, "b": b, "c": c, "d": d, "e": e}

	def accept(p):
		ratio = p["e"] / p["d"]
		return (p["d"] * p["e"] / (p["a"] * p["b"] * p["c"]) < 0.9
				and away_from_powers(ratio, q, range(-4, 5), 0.1))

	return rejection(draw, accept, "BQJ-DUAL-3PHI2-B")


def bqj_dual_3phi2_b():
	def lhs(p, ctx):
		a, b, c, d, e, q = (p[k] for k in ("a", "b", "c", "d", "e", "q"))
		return phi([a, b, c], [d, e], q, d * e / (a * b * c), ctx)

	def rhs(p, ctx):
		a, b, c, d, e, q = (ctx.scalar(p[k]) for k in ("a", "b", "c", "d", "e", "q"))
		w = d * e / (a * b * c)
		first = (qpoch_multi([e / a, e / b, e / c], q, INF, ctx) / qpoch_multi([e, e / d, w], q, INF, ctx)
				 * phi([d / a, d / b, d / c], [d, d * q / e], q, q, ctx))
		second = (qpoch_multi([d / a, d / b, d / c], q, INF, ctx) / qpoch_multi([d, d / e, w], q, INF, ctx)
				  * phi([e / a, e / b, e / c], [e, e * q / d], q, q, ctx))
		return first + second

	return dict(
		anchor='three-term _3phi_2 transformation ("following transformation of"), general form',
		sampler=three_term_b_sampler, lhs=lhs, rhs=rhs,
	)


def qchu_nonterm():
	def lhs(p, ctx):
		a, c, q, y, z = (ctx.scalar(p[k]) for k in ("a", "c", "q", "y", "z"))
		ratio = (qpoch_multi([c / a, a * q / y, a * q / z], q, INF, ctx)
				 / qpoch_multi([a / c, c * q / y, c * q / z], q, INF, ctx))
		return (phi([a * q / y, a * q / z], [a * q / c], q, q, ctx)
				+ ratio * phi([c * q / y, c * q / z], [c * q / a], q, q, ctx))

	def rhs(p, ctx):
		a, c, q, y, z = (ctx.scalar(p[k]) for k in ("a", "c", "q", "y", "z"))
		return (qpoch_multi([c / a, a * c * q ** 2 / (y * z)], q, INF, ctx)
				/ qpoch_multi([c * q / y, c * q / z], q, INF, ctx))

	return dict(
		anchor='nonterminating q-Chu-Vandermonde ("nonterminating form of the q-Chu-Vandermonde")',
		sampler=bqj_3phi2_sampler, lhs=lhs, rhs=rhs,
	)


def special_i_sampler(rng, domain):
	def draw():
		p = bqj_3phi2_sampler(rng, domain)
		p["n"] = integer(rng, domain, "n")
		return p

	def accept(p):
		return abs(p["a"] * p["b"] * p["q"] ** (1 - p["n"]) / (p["y"] * p["c"])) < 0.9

	return rejection(draw, accept, "BQJ-SPECIAL-I")


def bqj_special_i():
	def lhs(p, ctx):
		a, b, c, q, y, n = (p[k] for k in ("a", "b", "c", "q", "y", "n"))
		return phi([c / b, y, QParam(c, 1 + n)], [QParam(a, 1), QParam(c, 1)], q,
				   a * b * q ** (1 - n) / (y * c), ctx)

	def rhs(p, ctx):
		a, b, c, q, y = (ctx.scalar(p[k]) for k in ("a", "b", "c", "q", "y"))
		n = p["n"]
		head = (qpoch_multi([a * q / y, a * b * q / c], q, INF, ctx) * qpoch(c * q / a, q, n, ctx)
				/ (qpoch_multi([a * b * q / (y * c), a * q], q, INF, ctx) * qpoch(y * c / (a * b), q, n, ctx)))
		series = phi([QParam.power(-n), c * q / y, b * q], [QParam(c, 1), c * q / a], q, q, ctx)
		return head * (y / (b * q)) ** n * series

	return dict(
		anchor='big q-Jacobi special case z = cq^(1+n) ("special cases that z=cq^{1+n}")',
		sampler=special_i_sampler, lhs=lhs, rhs=rhs,
	)


def special_ii_sampler(rng, domain):
	def draw():
		return bqj_sampler(rng, domain)

	def accept(p):
		return abs(p["b"] * p["q"] ** (-p["m"] - p["n"]) / p["c"]) < 0.9

	return rejection(draw, accept, "BQJ-SPECIAL-II")


def _special_ii_series(p, ctx):
	a, b, c, q, n, m = (p[k] for k in ("a", "b", "c", "q", "n", "m"))
	s = PhiSeries((c / b, QParam(a, 1 + m), QParam(c, 1 + n)), (QParam(a, 1), QParam(c, 1)),
				  q, b * q ** (-m - n) / c)
	return eval_phi(s, ctx)


def bqj_special_ii():
	return dict(
		anchor='big q-Jacobi vanishing special case ("special cases that z=cq^{1+n}", "= 0")',
		sampler=special_ii_sampler,
		lhs=lambda p, ctx: _special_ii_series(p, ctx).value,
		rhs=lambda p, ctx: ctx.scalar(0),
		scale=lambda p, ctx: _special_ii_series(p, ctx).largest_term,
		kind="vanishing",
	)


def aw_sampler(rng, domain):
	return {"q": uniform(rng, domain, "q"),
			**{name: signed(rng, domain, "abcd") for name in ("a", "b", "c", "d")},
			"n": integer(rng, domain, "n"), "m": integer(rng, domain, "m")}


def _aw_fp(p):
	return FamilyParams("askey-wilson", {k: p[k] for k in ("a", "b", "c", "d")}, p["q"])


def aw_orth():
	lhs, rhs, scale = _gram_pair("askey-wilson", ("a", "b", "c", "d"))
	return dict(
		anchor='Askey-Wilson orthogonality ("satisfy the orthogonality relation")',
		sampler=aw_sampler, lhs=lhs, rhs=rhs, scale=scale,
	)


def _aw_moment(p, ctx, n, m):
	family = get_family("askey-wilson")
	fp = _aw_fp(p)
	a, q = ctx.scalar(p["a"]), ctx.scalar(p["q"])

	def g(theta):
		e = ctx.expj(theta)
		weight = family.weight(fp, theta, ctx)
		pair_n = qpoch(a * e, q, n, ctx) * qpoch(a / e, q, n, ctx)
		pair_m = qpoch(a * e, q, m, ctx) * qpoch(a / e, q, m, ctx)
		return weight * pair_n * pair_m

	return aw_quadrature(g, QuadratureCtrl(ctx=ctx))


def aw_qbeta_8w7():
	family = get_family("askey-wilson")

	def rhs(p, ctx):
		a, b, c, d, q = (ctx.scalar(p[k]) for k in ("a", "b", "c", "d", "q"))
		n, m = p["n"], p["m"]
		abcd = a * b * c * d
		triple = [a * b, a * c, a * d]
		ratio = (qpoch_multi(triple, q, m, ctx) * qpoch_multi(triple, q, n, ctx)
				 / (qpoch(abcd, q, m, ctx) * qpoch(abcd, q, n, ctx)))
		upper = [b * c, b * d, c * d, QParam.power(-m), QParam.power(-n)]
		series = vwp(abcd / q, upper, q, a ** 2 * q ** (m + n), ctx)
		return family.mass(_aw_fp(p), ctx) * ratio * series

	return dict(
		anchor='Askey-Wilson q-beta integral ("the Askey-Wilson q-beta integral")',
		sampler=aw_sampler, lhs=lambda p, ctx: _aw_moment(p, ctx, p["n"], p["m"]), rhs=rhs,
	)


def aw_mass():
	family = get_family("askey-wilson")
	return dict(
		anchor="Askey-Wilson total mass (n = m = 0 of the q-beta integral)",
		sampler=aw_sampler,
		lhs=lambda p, ctx: _aw_moment(p, ctx, 0, 0),
		rhs=lambda p, ctx: family.mass(_aw_fp(p), ctx),
	)


def aw_limit():
	degree = BaseConfig.AW_LIMIT_DEGREE

	def rhs(p, ctx):
		a, b, c, d, q = (ctx.scalar(p[k]) for k in ("a", "b", "c", "d", "q"))
		abcd = a * b * c * d
		head = (qpoch_multi([a * b, a * c, a * d], q, INF, ctx)
				/ qpoch_multi([q, b * c, b * d, c * d, abcd], q, INF, ctx))
		# the m, n -> oo limit of the q-beta series: two extra zero denominators supply q^(k(k-1))
		s = expand_w(WSeries(abcd / q, (b * c, b * d, c * d), q, a ** 2), ctx)
		s = PhiSeries(s.numerators, (*s.denominators, QParam.zero(), QParam.zero()), q, a ** 2)
		return head * eval_phi(s, ctx).value

	def slack(p):
		return 4 * abs(p["a"]) * abs(p["q"]) ** degree / (1 - abs(p["q"]))

	return dict(
		anchor='Askey-Wilson limit m, n -> oo of the q-beta integral ("limitation m,n→∞")',
		sampler=aw_sampler, lhs=lambda p, ctx: _aw_moment(p, ctx, degree, degree), rhs=rhs, slack=slack,
	)


# -----------------------------
# Inverse pairs
# -----------------------------

def _both_orders(F, G, size: int) -> float:
	return max(bio_check(F, G, size), bio_check(G, F, size))


def _inverse(kernels, size: int, anchor: str, sampler):
	return dict(
		anchor=anchor,
		sampler=sampler,
		lhs=lambda p, ctx: ctx.scalar(_both_orders(*kernels(p, ctx), size)),
		rhs=lambda p, ctx: ctx.scalar(0),
		scale=lambda p, ctx: 1.0,
		kind="vanishing",
	)


def inv_sampler(rng, domain):
	return {"q": uniform(rng, domain, "q"), "a": nonzero(rng, domain, "a")}


def inv_k_sampler(rng, domain):
	size = BaseConfig.INVERSE_SIZES["K"]

	def draw():
		return {"q": uniform(rng, domain, "q"), "a": nonzero(rng, domain, "a"), "c": nonzero(rng, domain, "c")}

	def accept(p):
		span = range(-size, size + 1)
		return (away_from_powers(p["c"] / p["a"], p["q"], span)
				and away_from_powers(p["a"] / p["c"], p["q"], span))

	return rejection(draw, accept, "INV-K")


def inv_n():
	return _inverse(lambda p, ctx: (kernel_N(p["a"], p["q"], ctx), kernel_N_inv(p["a"], p["q"], ctx)),
					BaseConfig.INVERSE_SIZES["N"], 'inverse pair N(a), N^-1(a) ("Let N(a) be the ILT matrix")',
					inv_sampler)


def inv_m():
	return _inverse(lambda p, ctx: (kernel_M(p["a"], p["q"], ctx), kernel_M(1 / p["a"], p["q"], ctx)),
					BaseConfig.INVERSE_SIZES["M"], 'inverse pair M(a), M(1/a) ("two ILT matrices with the")',
					inv_sampler)


def inv_k():
	return _inverse(lambda p, ctx: (kernel_K(p["a"], p["c"], p["q"], ctx), kernel_K(p["c"], p["a"], p["q"], ctx)),
					BaseConfig.INVERSE_SIZES["K"], 'inverse pair K(a,c), K(c,a) ("two ILT matrices with the")',
					inv_k_sampler)


def inv_fg_sampler(rng, domain):
	# the x_i coefficients are drawn lazily from their own stream
	return {"q": uniform(rng, domain, "q"), "stream": int(rng.integers(0, 2 ** 31))}


def inv_fg():
	return _inverse(
		lambda p, ctx: fg_kernels(random_system(p["q"], np.random.default_rng(p["stream"]), ctx)),
		BaseConfig.INVERSE_SIZES["fg-demo"],
		'(f,g)-inversion with f = g = x - y ("pair of inverse relations")',
		inv_fg_sampler,
	)


def inv_assoc_sampler(rng, domain):
	p = bqj_sampler(rng, domain)
	size = integer(rng, domain, "size")
	p.update(a0=uniform(rng, domain, "a0"), size=size,
			 entries=[(int(rng.integers(0, size)), int(rng.integers(0, size))) for _ in range(3)])
	return p


def inv_assoc():
	family = get_family("big-qjacobi")

	def gap(p, ctx):
		fp = _bqj_fp(p)
		X = TwoDimMatrix(lambda k, t: family.basis(fp, k, t, ctx), "Z", "C", ctx)
		q = p["q"]
		return associativity_gap(kernel_N(p["a0"], q, ctx), X, X.transpose(),
								 lambda t: family.weight(fp, t, ctx),
								 p["c"] * q, p["a"] * q, q, p["entries"], QIntegralCtrl(ctx))

	return dict(
		anchor='associativity of ∘ and •_q ("obey the associative law")',
		sampler=inv_assoc_sampler,
		lhs=lambda p, ctx: ctx.scalar(gap(p, ctx)),
		rhs=lambda p, ctx: ctx.scalar(0),
		scale=lambda p, ctx: 1.0,
		kind="vanishing",
	)


# -----------------------------
# Supporting identities
# -----------------------------

def supp_qbinom():
	return dict(
		anchor='q-binomial theorem ("by the q-binomial theorem")',
		sampler=lambda rng, d: {"q": uniform(rng, d, "q"), "a": uniform(rng, d, "a"), "z": uniform(rng, d, "z")},
		lhs=lambda p, ctx: phi([p["a"]], [], p["q"], p["z"], ctx),
		rhs=lambda p, ctx: qpoch(p["a"] * p["z"], p["q"], INF, ctx) / qpoch(p["z"], p["q"], INF, ctx),
		# the product vanishes where az hits q^-j, so the sum is judged by its terms
		scale=lambda p, ctx: eval_phi(PhiSeries((p["a"],), (), p["q"], p["z"]), ctx).largest_term,
	)


def supp_1psi1():
	return dict(
		anchor='Ramanujan\'s bilateral sum ("Ramanujan\'s _1psi_1 summation formula")',
		sampler=lambda rng, d: {k: uniform(rng, d, k) for k in ("q", "a", "b", "z")},
		lhs=lambda p, ctx: eval_1psi1(p["a"], p["b"], p["q"], p["z"], ctx).value,
		rhs=lambda p, ctx: psi11_product(p["a"], p["b"], p["q"], p["z"], ctx),
		scale=lambda p, ctx: eval_1psi1(p["a"], p["b"], p["q"], p["z"], ctx).largest_term,
	)


def watson_sampler(rng, domain):
	def draw():
		p = {"q": uniform(rng, domain, "q"), "a": uniform(rng, domain, "a"), "n": integer(rng, domain, "n")}
		p.update({k: uniform(rng, domain, "bcde") for k in ("b", "c", "d", "e")})
		return p

	def accept(p):
		return away_from_powers(p["d"] * p["e"] / p["a"], p["q"], range(0, p["n"] + 1), 0.02)

	return rejection(draw, accept, "SUPP-WATSON")


def supp_watson():
	def lhs(p, ctx):
		a, b, c, d, e, q, n = (p[k] for k in ("a", "b", "c", "d", "e", "q", "n"))
		return vwp(a, [b, c, d, e, QParam.power(-n)], q, a ** 2 * q ** (n + 2) / (b * c * d * e), ctx)

	def rhs(p, ctx):
		a, b, c, d, e, q = (ctx.scalar(p[k]) for k in ("a", "b", "c", "d", "e", "q"))
		n = p["n"]
		head = qpoch_multi([a * q, a * q / (d * e)], q, n, ctx) / qpoch_multi([a * q / d, a * q / e], q, n, ctx)
		return head * phi([QParam.power(-n), d, e, a * q / (b * c)],
						  [a * q / b, a * q / c, QParam(d * e / a, -n)], q, q, ctx)

	return dict(
		anchor='Watson\'s transformation ("Watson\'s ($q$-Whipple) transformation")',
		sampler=watson_sampler, lhs=lhs, rhs=rhs,
	)


def supp_shift():
	return dict(
		anchor='shift relation for q-shifted factorials ("in view of the basic relation")',
		sampler=lambda rng, d: {"q": uniform(rng, d, "q"), "x": uniform(rng, d, "x"),
								"n": integer(rng, d, "n"), "k": integer(rng, d, "k")},
		lhs=lambda p, ctx: pochhammer_shift(p["x"], p["q"], p["n"], p["k"], ctx)[0],
		rhs=lambda p, ctx: pochhammer_shift(p["x"], p["q"], p["n"], p["k"], ctx)[1],
	)


BUILDERS = {
	"LQJ-ORTH": lqj_orth,
	"LQJ-DUAL-6W5": lqj_dual_6w5,
	"LQJ-DUAL-MATRIX": lqj_dual_matrix,
	"QRACAH-ORTH": qracah_orth,
	"QRACAH-DUAL-8W7": qracah_dual_8w7,
	"QRACAH-DUAL-8W7-M0": qracah_dual_8w7_m0,
	"SEARS-4PHI3": sears_4phi3,
	"SEARS-4PHI3-AS-STATED": sears_4phi3_as_stated,
	"QLAG-ORTH": qlag_orth,
	"QLAG-DUAL-FINITE": qlag_dual_finite,
	"QLAG-DUAL-BILATERAL": qlag_dual_bilateral,
	"QLAG-GEN-ORTH": qlag_gen_orth,
	"BQJ-ORTH": bqj_orth,
	"BQJ-INTEGRAL-3PHI2": bqj_integral_3phi2,
	"BQJ-DUAL-MATRIX": bqj_dual_matrix,
	"BQJ-DUAL-3PHI2-A": bqj_dual_3phi2_a,
	"BQJ-DUAL-3PHI2-B": bqj_dual_3phi2_b,
	"QCHU-NONTERM": qchu_nonterm,
	"BQJ-SPECIAL-I": bqj_special_i,
	"BQJ-SPECIAL-II": bqj_special_ii,
	"AW-ORTH": aw_orth,
	"AW-QBETA-8W7": aw_qbeta_8w7,
	"AW-MASS": aw_mass,
	"AW-LIMIT": aw_limit,
	"INV-N": inv_n,
	"INV-M": inv_m,
	"INV-K": inv_k,
	"INV-FG": inv_fg,
	"INV-ASSOC": inv_assoc,
	"SUPP-QBINOM": supp_qbinom,
	"SUPP-1PSI1": supp_1psi1,
	"SUPP-WATSON": supp_watson,
	"SUPP-SHIFT": supp_shift,
}
