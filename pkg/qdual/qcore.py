"""Scalars, precision contexts and q-shifted factorials.

Scalars are whatever the active backend calls a complex number: Python
``complex`` in standard mode (``mpmath.fp``) and ``mpmath.mpc`` in extended
mode.  Most functions here also accept numpy arrays in place of a scalar
parameter, which is how the Askey-Wilson code evaluates a whole θ-grid in
one call.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Any, Iterable, Optional, Sequence, Union

import numpy as np

from .config import ExtendedConfig, StandardConfig
from .errors import (
	ConfigError,
	DivisionByVanishingFactor,
	IndexOutOfRange,
	InvalidSeries,
	NonFiniteValue,
)
from .extensions import extended_backend, standard_backend


logger = logging.getLogger(__name__)

Scalar = Any
INF = math.inf
ExtendedIndex = Union[int, float]


# -----------------------------
# Precision
# -----------------------------

@dataclass(frozen=True)
class PrecisionContext:
	mode: str
	eps_term: float
	eps_prod: float
	max_terms: int
	dps: int = 15

	def __post_init__(self):
		if self.mode not in ("standard", "extended"):
			raise ConfigError(f"unknown precision mode {self.mode!r}")
		bound = 1e-6 if self.mode == "standard" else 1e-20
		for name in ("eps_term", "eps_prod"):
			eps = getattr(self, name)
			if not 0 < eps < bound:
				raise ConfigError(f"{name}={eps} must lie in (0, {bound}) in {self.mode} mode")
		if self.max_terms < 64:
			raise ConfigError("max_terms must be at least 64")
		if self.mode == "extended" and self.dps < 30:
			raise ConfigError("extended mode needs at least 30 significant digits")

	@classmethod
	def from_config(cls, config) -> "PrecisionContext":
		return cls(
			mode=config.MODE,
			eps_term=config.EPS_TERM,
			eps_prod=config.EPS_PROD,
			max_terms=config.MAX_TERMS,
			dps=config.DPS,
		)

	@classmethod
	def standard(cls) -> "PrecisionContext":
		return cls.from_config(StandardConfig)

	@classmethod
	def extended(cls) -> "PrecisionContext":
		return cls.from_config(ExtendedConfig)

	@property
	def extended_mode(self) -> bool:
		return self.mode == "extended"

	@property
	def backend(self):
		if self.extended_mode:
			return extended_backend(self.dps)
		return standard_backend()

	@property
	def machine_eps(self) -> float:
		return float(self.backend.eps)

	@property
	def pi(self) -> Scalar:
		return self.backend.mpf(self.backend.pi)

	def scalar(self, value: Any) -> Scalar:
		if isinstance(value, np.ndarray):
			return self.array(value)
		if isinstance(value, str):
			text = value.strip().replace(" ", "")
			if text.endswith("i"):
				text = text[:-1] + "j"
			value = complex(text)
		return self.backend.mpc(value)

	def real(self, value: Any) -> Scalar:
		return self.backend.mpf(value)

	def array(self, values: Iterable[Any]) -> np.ndarray:
		if self.extended_mode:
			items = [self.scalar(v) for v in np.asarray(values, dtype=object).ravel()]
			out = np.empty(len(items), dtype=object)
			out[:] = items
			return out.reshape(np.shape(values))
		return np.asarray(values, dtype=complex)

	def zeros(self, shape) -> np.ndarray:
		if self.extended_mode:
			out = np.empty(shape, dtype=object)
			out.fill(self.scalar(0))
			return out
		return np.zeros(shape, dtype=complex)

	def sqrt(self, value: Any) -> Scalar:
		return self.backend.sqrt(self.scalar(value))

	def expj(self, theta: Any) -> Any:
		"""exp(iθ), elementwise for arrays."""
		if isinstance(theta, np.ndarray):
			if self.extended_mode:
				return self.array([self.backend.expj(t) for t in theta.ravel()]).reshape(theta.shape)
			return np.exp(1j * theta.astype(float))
		return self.backend.expj(theta)

	def is_finite(self, value: Any) -> bool:
		if isinstance(value, np.ndarray):
			if value.dtype == object:
				return all(self.is_finite(v) for v in value.flat)
			return bool(np.all(np.isfinite(value)))
		b = self.backend
		return not (b.isinf(value) or b.isnan(value))

	def check_finite(self, value: Any, what: str) -> Any:
		if not self.is_finite(value):
			raise NonFiniteValue(f"{what} is not finite")
		return value

	@property
	def guard(self) -> "PrecisionContext":
		"""The context to redo a cancelling computation in."""
		return self if self.extended_mode else EXTENDED


STANDARD = PrecisionContext.standard()
EXTENDED = PrecisionContext.extended()


def magnitude(value: Any) -> float:
	"""Largest absolute value (for arrays) as a float."""
	if isinstance(value, np.ndarray):
		if value.size == 0:
			return 0.0
		return float(np.max(np.abs(value)))
	return float(abs(value))


def any_zero(value: Any) -> bool:
	if isinstance(value, np.ndarray):
		return bool(np.any(value == 0))
	return value == 0


def coerce(value: Any, ctx: PrecisionContext) -> Any:
	if isinstance(value, np.ndarray):
		return value if value.dtype == object or not ctx.extended_mode else ctx.array(value)
	return ctx.scalar(value)


def narrow(value: Any, ctx: PrecisionContext) -> Any:
	"""Round a value computed in a guard context back to ctx."""
	if ctx.extended_mode:
		return coerce(value, ctx)
	if isinstance(value, np.ndarray):
		return np.asarray([complex(v) for v in value.flat], dtype=complex).reshape(value.shape)
	return ctx.scalar(complex(value))


def vanishes(value: Any, ctx: PrecisionContext) -> bool:
	"""True when a factor of the form 1 - x is zero up to rounding."""
	tol = 1e3 * ctx.machine_eps
	if isinstance(value, np.ndarray):
		return bool(value.size) and float(np.min(np.abs(value))) < tol
	return float(abs(value)) < tol


# -----------------------------
# Exact q-power parameters
# -----------------------------

@dataclass(frozen=True, eq=False)
class QParam:
	"""A series parameter ``coeff * q**qexp``.

	``qexp`` is None for a generic value.  Only ``coeff == 1`` with an
	exponent counts as an exact q-power, so termination and vanishing
	detection never rest on a floating comparison.
	"""

	coeff: Any
	qexp: Optional[int] = None

	@classmethod
	def power(cls, k: int) -> "QParam":
		return cls(1, int(k))

	@classmethod
	def generic(cls, value: Any) -> "QParam":
		return cls(value, None)

	@classmethod
	def zero(cls) -> "QParam":
		return cls(0, None)

	@property
	def is_exact_power(self) -> bool:
		if self.qexp is None or isinstance(self.coeff, np.ndarray):
			return False
		return self.coeff == 1

	@property
	def is_zero(self) -> bool:
		return not isinstance(self.coeff, np.ndarray) and self.coeff == 0

	def value(self, q: Scalar) -> Scalar:
		if not self.qexp:
			return self.coeff
		return self.coeff * q ** self.qexp

	def shift(self, k: int) -> "QParam":
		return QParam(self.coeff, (self.qexp or 0) + int(k))

	def scale(self, x: Any) -> "QParam":
		return QParam(self.coeff * x, self.qexp)

	def __mul__(self, other: Any) -> "QParam":
		if isinstance(other, QParam):
			if self.qexp is None and other.qexp is None:
				return QParam(self.coeff * other.coeff, None)
			return QParam(self.coeff * other.coeff, (self.qexp or 0) + (other.qexp or 0))
		return QParam(self.coeff * other, self.qexp)

	__rmul__ = __mul__

	def __truediv__(self, other: Any) -> "QParam":
		if isinstance(other, QParam):
			if self.qexp is None and other.qexp is None:
				return QParam(self.coeff / other.coeff, None)
			return QParam(self.coeff / other.coeff, (self.qexp or 0) - (other.qexp or 0))
		return QParam(self.coeff / other, self.qexp)

	def __rtruediv__(self, other: Any) -> "QParam":
		return QParam(other / self.coeff, None if self.qexp is None else -self.qexp)

	def __neg__(self) -> "QParam":
		return QParam(-self.coeff, self.qexp)

	def __repr__(self) -> str:
		if self.qexp is None:
			return f"QParam({self.coeff!r})"
		return f"QParam({self.coeff!r}, q^{self.qexp})"


def as_qparam(value: Any) -> QParam:
	return value if isinstance(value, QParam) else QParam.generic(value)


# -----------------------------
# q-shifted factorials
# -----------------------------

def truncation_index(amax: float, qabs: float, eps: float) -> int:
	"""Smallest K with 2|a||q|^K/(1-|q|) < eps."""
	if amax == 0:
		return 0
	k = math.ceil(math.log(eps * (1 - qabs) / (2 * amax)) / math.log(qabs))
	return max(k, 0)


def qpoch(a: Any, q: Any, n: ExtendedIndex, ctx: Optional[PrecisionContext] = None) -> Any:
	"""(a;q)_n for integer n (any sign) or n = INF."""
	ctx = ctx or STANDARD
	a = coerce(a, ctx)
	q = ctx.scalar(q)
	qabs = float(abs(q))
	if not 0 < qabs < 1:
		raise ValueError(f"|q| must lie in (0, 1), got {qabs}")
	one = ctx.scalar(1)

	if n == INF:
		terms = truncation_index(magnitude(a), qabs, ctx.eps_prod)
		result = one
		qi = one
		for _ in range(terms):
			result = result * (1 - a * qi)
			qi = qi * q
		return result

	if int(n) != n:
		raise IndexOutOfRange(f"q-shifted factorial index must be an integer or INF, got {n}")
	n = int(n)
	result = one
	if n >= 0:
		qi = one
		for _ in range(n):
			result = result * (1 - a * qi)
			qi = qi * q
		return result

	qi = one
	for i in range(1, -n + 1):
		qi = qi / q
		factor = 1 - a * qi
		if vanishes(factor, ctx):
			raise DivisionByVanishingFactor(f"(a;q)_{n}: factor 1 - a*q^-{i} vanishes")
		result = result * factor
	return one / result


def qpoch_multi(params: Sequence[Any], q: Any, n: ExtendedIndex, ctx: Optional[PrecisionContext] = None) -> Any:
	"""(a_1, ..., a_m; q)_n."""
	if len(params) == 0:
		raise InvalidSeries("qpoch_multi needs at least one parameter")
	ctx = ctx or STANDARD
	result = ctx.scalar(1)
	for idx, a in enumerate(params):
		try:
			result = result * qpoch(a, q, n, ctx)
		except DivisionByVanishingFactor as e:
			raise DivisionByVanishingFactor(f"entry {idx}: {e}", entry=idx) from e
	return result


def qbinom(n: int, k: int, q: Any, ctx: Optional[PrecisionContext] = None) -> Scalar:
	if int(n) != n or int(k) != k or n < 0 or k < 0:
		raise IndexOutOfRange(f"q-binomial indices must be nonnegative integers, got ({n}, {k})")
	if k > n:
		raise IndexOutOfRange(f"q-binomial needs k <= n, got k={k} > n={n}")
	ctx = ctx or STANDARD
	lo, hi = sorted((int(k), int(n) - int(k)))
	return qpoch(q, q, n, ctx) / (qpoch(q, q, lo, ctx) * qpoch(q, q, hi, ctx))


def pochhammer_shift(x: Any, q: Any, n: int, k: int, ctx: Optional[PrecisionContext] = None) -> tuple[Scalar, Scalar]:
	"""Both sides of (xq^{-k};q)_n = (x;q)_n (q/x;q)_k / (q^{1-n}/x;q)_k q^{-nk}."""
	ctx = ctx or STANDARD
	x = ctx.scalar(x)
	q = ctx.scalar(q)
	if x == 0:
		raise DivisionByVanishingFactor("pochhammer_shift needs x != 0")
	lhs = qpoch(x * q ** (-k), q, n, ctx)
	denominator = qpoch(q ** (1 - n) / x, q, k, ctx)
	if denominator == 0:
		raise DivisionByVanishingFactor(f"(q^(1-n)/x;q)_k vanishes for n={n}, k={k}")
	rhs = qpoch(x, q, n, ctx) * qpoch(q / x, q, k, ctx) / denominator * q ** (-n * k)
	return lhs, rhs


class PochhammerLadder:
	"""(a;q)_k for every integer k, extended one step at a time.

	Bilateral sums visit k = 0, ±1, ±2, ... so each new index is one factor
	away from a cached neighbour.
	"""

	def __init__(self, a: Any, q: Any, ctx: Optional[PrecisionContext] = None):
		self.ctx = ctx or STANDARD
		self.a = self.ctx.scalar(a)
		self.q = self.ctx.scalar(q)
		self._values = {0: self.ctx.scalar(1)}
		self._lo = 0
		self._hi = 0
		self._q_hi = self.ctx.scalar(1)
		self._q_lo = self.ctx.scalar(1)

	def __call__(self, k: int) -> Scalar:
		while k > self._hi:
			self._values[self._hi + 1] = self._values[self._hi] * (1 - self.a * self._q_hi)
			self._q_hi = self._q_hi * self.q
			self._hi += 1
		while k < self._lo:
			self._q_lo = self._q_lo / self.q
			factor = 1 - self.a * self._q_lo
			if vanishes(factor, self.ctx):
				raise DivisionByVanishingFactor(f"(a;q)_{self._lo - 1}: factor vanishes")
			self._values[self._lo - 1] = self._values[self._lo] / factor
			self._lo -= 1
		return self._values[k]
