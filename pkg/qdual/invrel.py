"""Infinite lower-triangular kernels, inverse pairs and two-dimensional matrices.

A Kernel is never materialised: it is an (n, k) rule with a cache, and
only finite leading blocks are built when two kernels are composed.
Lower-triangularity makes every such block product exact.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Optional, Sequence

import numpy as np

from .errors import IndexKindMismatch, VanishingDenominatorFactor
from .qcalculus import QIntegralCtrl, QuadratureCtrl, gauss_legendre, qintegral
from .qcore import STANDARD, PrecisionContext, magnitude, qpoch, qpoch_multi
from .qpolys import FamilyParams, basis_eval, get_family, poly_eval


logger = logging.getLogger(__name__)

Entry = Callable[[int, int], Any]


# -----------------------------
# Kernels
# -----------------------------

class Kernel:
	"""entry(n, k) for k <= n; zero above the diagonal."""

	def __init__(self, entry: Entry, ctx: Optional[PrecisionContext] = None, name: str = ""):
		self._entry = entry
		self.ctx = ctx or STANDARD
		self.name = name
		self._cache: dict[tuple[int, int], Any] = {}

	lower_triangular = True

	def __call__(self, n: int, k: int) -> Any:
		if k > n:
			return self.ctx.scalar(0)
		key = (n, k)
		if key not in self._cache:
			self._cache[key] = self._entry(n, k)
		return self._cache[key]

	def block(self, size: int) -> np.ndarray:
		out = self.ctx.zeros((size, size))
		for n in range(size):
			for k in range(n + 1):
				out[n, k] = self(n, k)
		return out

	def as_matrix(self) -> "TwoDimMatrix":
		return TwoDimMatrix(self, "Z", "Z", self.ctx)

	def __repr__(self) -> str:
		return f"Kernel({self.name or 'anonymous'})"


def identity_kernel(ctx: Optional[PrecisionContext] = None) -> Kernel:
	ctx = ctx or STANDARD
	return Kernel(lambda n, k: ctx.scalar(1 if n == k else 0), ctx, "I")


def _checked_ratio(numerator: Any, denominator: Any, n: int, k: int, what: str) -> Any:
	if denominator == 0:
		raise VanishingDenominatorFactor(f"{what}: denominator vanishes at ({n}, {k})", n, k)
	return numerator / denominator


def kernel_N(a: Any, q: Any, ctx: Optional[PrecisionContext] = None) -> Kernel:
	"""N(a)_{n,k} = (q^-n, aq^n; q)_k / (q, aq; q)_k q^k."""
	ctx = ctx or STANDARD
	a, q = ctx.scalar(a), ctx.scalar(q)

	def entry(n, k):
		num = qpoch_multi([q ** (-n), a * q ** n], q, k, ctx)
		return _checked_ratio(num, qpoch_multi([q, a * q], q, k, ctx), n, k, "N(a)") * q ** k

	return Kernel(entry, ctx, "N")


def _scaled_reverse_poch(n: int, k: int, q: Any, ctx: PrecisionContext) -> Any:
	"""(q^-n; q)_k q^(nk) as the product of q^n - q^i, i < k."""
	out = ctx.scalar(1)
	qn = q ** n
	qi = ctx.scalar(1)
	for _ in range(k):
		out = out * (qn - qi)
		qi = qi * q
	return out


def kernel_N_inv(a: Any, q: Any, ctx: Optional[PrecisionContext] = None) -> Kernel:
	"""N^-1(a)_{n,k} = (a, q^-n; q)_k / (q, aq^{1+n}; q)_k (1 - aq^2k)/(1 - a) q^kn."""
	ctx = ctx or STANDARD
	a, q = ctx.scalar(a), ctx.scalar(q)

	def entry(n, k):
		num = qpoch(a, q, k, ctx) * _scaled_reverse_poch(n, k, q, ctx) * (1 - a * q ** (2 * k))
		den = qpoch_multi([q, a * q ** (1 + n)], q, k, ctx) * (1 - a)
		return _checked_ratio(num, den, n, k, "N^-1(a)")

	return Kernel(entry, ctx, "N_inv")


def kernel_M(a: Any, q: Any, ctx: Optional[PrecisionContext] = None) -> Kernel:
	"""M(a)_{n,k} = (q^-n, 1/a; q)_k / (q, q^{1-n}/a; q)_k q^k; the inverse is M(1/a)."""
	ctx = ctx or STANDARD
	a, q = ctx.scalar(a), ctx.scalar(q)

	def entry(n, k):
		num = qpoch_multi([q ** (-n), 1 / a], q, k, ctx)
		return _checked_ratio(num, qpoch_multi([q, q ** (1 - n) / a], q, k, ctx), n, k, "M(a)") * q ** k

	return Kernel(entry, ctx, "M")


def kernel_K(a: Any, c: Any, q: Any, ctx: Optional[PrecisionContext] = None, branch: int = 1) -> Kernel:
	"""K(a, c); the inverse is K(c, a).

	The six-over-six ratio is kept as written, so flipping the branch of
	√c only permutes factors.
	"""
	ctx = ctx or STANDARD
	a, c, q = ctx.scalar(a), ctx.scalar(c), ctx.scalar(q)
	root = branch * ctx.sqrt(c)

	def entry(n, k):
		num = qpoch_multi([a * q ** n, q ** (-n), q * root, -q * root, c / a, c], q, k, ctx)
		den = qpoch_multi([c * q ** (1 - n) / a, c * q ** (n + 1), q, root, -root, a * q], q, k, ctx)
		return _checked_ratio(num, den, n, k, "K(a,c)") * q ** k

	return Kernel(entry, ctx, "K")


# -----------------------------
# (f, g)-inversion
# -----------------------------

@dataclass
class FGSystem:
	f: Callable[[Any, Any], Any]
	g: Callable[[Any, Any], Any]
	xs: Callable[[int], Any]
	bs: Callable[[int], Any]
	row_scale: Optional[Callable[[int], Any]] = None
	col_scale: Optional[Callable[[int], Any]] = None
	ctx: PrecisionContext = field(default_factory=lambda: STANDARD)


def difference(x: Any, y: Any) -> Any:
	return x - y


def carlitz_system(a: Any, q: Any, ctx: Optional[PrecisionContext] = None) -> FGSystem:
	"""f = g = x - y, b_i = q^-i, x_i = aq^i, scaled so the pair is (N(a), N^-1(a))."""
	ctx = ctx or STANDARD
	a, q = ctx.scalar(a), ctx.scalar(q)

	def row_scale(n):
		return (-1) ** n * q ** (-n * (n + 1) // 2) * qpoch(q, q, n, ctx) / qpoch(a, q, n, ctx)

	def col_scale(k):
		return qpoch(a, q, 2 * k, ctx) * q ** k / (qpoch(q, q, k, ctx) * qpoch(a * q, q, k, ctx))

	return FGSystem(
		difference, difference,
		xs=lambda i: a * q ** i,
		bs=lambda i: q ** (-i),
		row_scale=row_scale,
		col_scale=col_scale,
		ctx=ctx,
	)


def random_system(q: Any, rng: np.random.Generator, ctx: Optional[PrecisionContext] = None) -> FGSystem:
	"""f = g = x - y with b_i = q^-i and x_i = a_i q^i for random a_i in (-0.9, 0.9)."""
	ctx = ctx or STANDARD
	q = ctx.scalar(q)
	coeffs: list[Any] = []

	def xs(i):
		while len(coeffs) <= i:
			coeffs.append(ctx.scalar(float(rng.uniform(-0.9, 0.9))))
		return coeffs[i] * q ** i

	return FGSystem(difference, difference, xs=xs, bs=lambda i: q ** (-i), ctx=ctx)


def fg_kernels(sys: FGSystem) -> tuple[Kernel, Kernel]:
	ctx = sys.ctx
	one = ctx.scalar(1)

	def g_product(indices: Iterable[int], j: int) -> Any:
		out = one
		bj = sys.bs(j)
		for i in indices:
			factor = sys.g(sys.bs(i), bj)
			if factor == 0:
				raise VanishingDenominatorFactor(f"g(b_{i}, b_{j}) vanishes", i, j)
			out = out * factor
		return out

	def f_product(indices: Iterable[int], j: int) -> Any:
		out = one
		bj = sys.bs(j)
		for i in indices:
			out = out * sys.f(sys.xs(i), bj)
		return out

	def f_entry(n, k):
		value = f_product(range(k, n), k) / g_product(range(k + 1, n + 1), k)
		if sys.row_scale is not None:
			value = value * sys.row_scale(n) * sys.col_scale(k)
		return value

	def g_entry(n, k):
		tail = sys.f(sys.xs(n), sys.bs(n))
		if tail == 0:
			raise VanishingDenominatorFactor(f"f(x_{n}, b_{n}) vanishes", n, n)
		value = sys.f(sys.xs(k), sys.bs(k)) / tail
		value = value * f_product(range(k + 1, n + 1), n) / g_product(range(k, n), n)
		if sys.row_scale is not None:
			value = value / (sys.col_scale(n) * sys.row_scale(k))
		return value

	return Kernel(f_entry, ctx, "F"), Kernel(g_entry, ctx, "G")


def _span_product(factor: Callable[[int], Any], lo: int, hi: int, one: Any) -> Any:
	"""Π_{i=lo}^{hi} factor(i), read as 1 / Π_{i=hi+1}^{lo-1} when hi < lo - 1."""
	out = one
	if hi >= lo - 1:
		for i in range(lo, hi + 1):
			out = out * factor(i)
		return out
	for i in range(hi + 1, lo):
		out = out * factor(i)
	if out == 0:
		raise VanishingDenominatorFactor(f"reversed product over {hi + 1}..{lo - 1} vanishes", hi + 1, lo - 1)
	return one / out


def fg_forward(sys: FGSystem, G: Sequence[Any]) -> list[Any]:
	"""F_n = Σ_{k<=n} G_k f(x_k,b_k) Π_{i=0}^{k-1} g(b_i,b_n) / Π_{i=1}^{k} f(x_i,b_n)."""
	ctx = sys.ctx
	one = ctx.scalar(1)
	out = []
	for n in range(len(G)):
		bn = sys.bs(n)
		total = ctx.scalar(0)
		for k in range(n + 1):
			num = _span_product(lambda i: sys.g(sys.bs(i), bn), 0, k - 1, one)
			den = _span_product(lambda i: sys.f(sys.xs(i), bn), 1, k, one)
			if den == 0:
				raise VanishingDenominatorFactor(f"f(x_i, b_{n}) vanishes for some i <= {k}", k, n)
			total = total + G[k] * sys.f(sys.xs(k), sys.bs(k)) * num / den
		out.append(total)
	return out


def fg_backward(sys: FGSystem, F: Sequence[Any]) -> list[Any]:
	"""G_n = Σ_{k<=n} F_k Π_{i=1}^{n-1} f(x_i,b_k) / Π_{i=0, i≠k}^{n} g(b_i,b_k).

	Inverts fg_forward. At n = 0 the empty-range convention leaves
	G_0 = F_0 / f(x_0, b_0).
	"""
	ctx = sys.ctx
	one = ctx.scalar(1)
	out = []
	for n in range(len(F)):
		total = ctx.scalar(0)
		for k in range(n + 1):
			bk = sys.bs(k)
			num = _span_product(lambda i: sys.f(sys.xs(i), bk), 1, n - 1, one)
			den = one
			for i in range(n + 1):
				if i == k:
					continue
				factor = sys.g(sys.bs(i), bk)
				if factor == 0:
					raise VanishingDenominatorFactor(f"g(b_{i}, b_{k}) vanishes", i, k)
				den = den * factor
			total = total + F[k] * num / den
		out.append(total)
	return out


def _random_points(rng: np.random.Generator, count: int, ctx: PrecisionContext) -> list[Any]:
	re, im = rng.uniform(-1, 1, count), rng.uniform(-1, 1, count)
	return [ctx.scalar(complex(x, y)) for x, y in zip(re, im)]


def check_fg(sys: FGSystem, samples: int = 1000, rng: Optional[np.random.Generator] = None) -> float:
	"""Largest |g(b,c)f(x,a) + g(c,a)f(x,b) + g(a,b)f(x,c)| over random draws."""
	rng = rng if rng is not None else np.random.default_rng(0)
	f, g = sys.f, sys.g
	worst = 0.0
	for _ in range(samples):
		a, b, c, x = _random_points(rng, 4, sys.ctx)
		residual = g(b, c) * f(x, a) + g(c, a) * f(x, b) + g(a, b) * f(x, c)
		worst = max(worst, float(abs(residual)))
	return worst


def check_antisymmetry(sys: FGSystem, samples: int = 100, rng: Optional[np.random.Generator] = None) -> bool:
	rng = rng if rng is not None else np.random.default_rng(0)
	for _ in range(samples):
		x, y = _random_points(rng, 2, sys.ctx)
		gxy = sys.g(x, y)
		if abs(gxy + sys.g(y, x)) > 1e-12 * max(1.0, float(abs(gxy))):
			return False
	return True


def check_distinct(sys: FGSystem, size: int) -> bool:
	values = [sys.bs(i) for i in range(size)]
	return all(values[i] != values[j] for i in range(size) for j in range(i))


# -----------------------------
# Finite blocks
# -----------------------------

def compose(A: Kernel, B: Kernel, size: int) -> np.ndarray:
	"""Leading size x size block of A·B."""
	ctx = A.ctx
	out = ctx.zeros((size, size))
	for n in range(size):
		for k in range(n + 1):
			total = ctx.scalar(0)
			for i in range(k, n + 1):
				total = total + A(n, i) * B(i, k)
			out[n, k] = total
	return out


def bio_check(F: Kernel, G: Kernel, size: int, scaled: bool = True) -> float:
	"""Largest deviation of F·G from the identity on the leading block.

	With ``scaled`` each entry is measured against max(1, Σ_i |F_{n,i} G_{i,k}|):
	the entries of N(a) grow like q^(-nk), so off-diagonal sums cancel terms
	far larger than one. ``scaled=False`` gives the plain max |(F·G)_{n,k} - δ_{n,k}|.
	"""
	worst = 0.0
	for n in range(size):
		for k in range(n + 1):
			terms = [F(n, i) * G(i, k) for i in range(k, n + 1)]
			total = F.ctx.scalar(0)
			for t in terms:
				total = total + t
			scale = max(1.0, sum(float(abs(t)) for t in terms)) if scaled else 1.0
			worst = max(worst, float(abs(total - (1 if n == k else 0))) / scale)
	logger.debug("bio_check %r x %r at size %d: %.3g", F, G, size, worst)
	return worst


def transform(F: Kernel, seq: Sequence[Any], size: Optional[int] = None) -> list[Any]:
	"""b_n = Σ_{k<=n} F_{n,k} a_k."""
	size = len(seq) if size is None else size
	ctx = F.ctx
	out = []
	for n in range(size):
		total = ctx.scalar(0)
		for k in range(n + 1):
			total = total + F(n, k) * seq[k]
		out.append(total)
	return out


def inverse_pair(name: str, params: dict, ctx: Optional[PrecisionContext] = None,
				 rng: Optional[np.random.Generator] = None) -> tuple[Kernel, Kernel]:
	ctx = ctx or STANDARD
	q = params.get("q", 0.5)
	if name == "N":
		return kernel_N(params["a"], q, ctx), kernel_N_inv(params["a"], q, ctx)
	if name == "M":
		a = ctx.scalar(params["a"])
		return kernel_M(a, q, ctx), kernel_M(1 / a, q, ctx)
	if name == "K":
		return kernel_K(params["a"], params["c"], q, ctx), kernel_K(params["c"], params["a"], q, ctx)
	if name == "fg-demo":
		return fg_kernels(random_system(q, rng if rng is not None else np.random.default_rng(0), ctx))
	raise KeyError(name)


INVERSE_KERNELS = ("N", "M", "K", "fg-demo")


# -----------------------------
# Factorisation p_n = D·C∘X
# -----------------------------

def factorisation_residual(fp: FamilyParams, n: int, node: Any, ctx: Optional[PrecisionContext] = None) -> float:
	"""Relative gap between p_n(node) and row_scale(n) Σ_k C_{n,k} X_{k,node}."""
	ctx = ctx or STANDARD
	family = get_family(fp.family)
	kernel_name, param, row_scale = family.factorisation(fp, ctx)
	builder = kernel_N if kernel_name == "N" else kernel_N_inv
	C = builder(param, fp.q, ctx)
	total = ctx.scalar(0)
	for k in range(n + 1):
		total = total + C(n, k) * basis_eval(fp, k, node, ctx)
	assembled = row_scale(n) * total
	direct = poly_eval(fp, n, node, ctx)
	gap = magnitude(assembled - direct)
	return gap / max(magnitude(assembled), magnitude(direct), 1e-300)


# -----------------------------
# Two-dimensional matrices
# -----------------------------

INDEX_KINDS = ("Z", "C")


class TwoDimMatrix:
	"""entry(row, col) where each index set is integer ("Z") or continuous ("C")."""

	def __init__(self, entry: Callable[[Any, Any], Any], row_kind: str, col_kind: str,
				 ctx: Optional[PrecisionContext] = None):
		if row_kind not in INDEX_KINDS or col_kind not in INDEX_KINDS:
			raise IndexKindMismatch(f"index kinds must be Z or C, got ({row_kind}, {col_kind})")
		self.entry = entry
		self.row_kind = row_kind
		self.col_kind = col_kind
		self.ctx = ctx or STANDARD

	def __call__(self, row: Any, col: Any) -> Any:
		return self.entry(row, col)

	def transpose(self) -> "TwoDimMatrix":
		return TwoDimMatrix(lambda r, c: self.entry(c, r), self.col_kind, self.row_kind, self.ctx)


def _as_matrix(A: Any) -> TwoDimMatrix:
	return A.as_matrix() if isinstance(A, Kernel) else A


def op_circ(A: Kernel, X: TwoDimMatrix) -> TwoDimMatrix:
	"""[A∘X]_{m,x} = Σ_{k<=m} A_{m,k} X_{k,x}."""
	X = _as_matrix(X)
	if X.row_kind != "Z":
		raise IndexKindMismatch("A∘X needs X with integer rows")
	ctx = A.ctx

	def entry(m, x):
		total = ctx.scalar(0)
		for k in range(m + 1):
			total = total + A(m, k) * X(k, x)
		return total

	return TwoDimMatrix(entry, "Z", X.col_kind, ctx)


def _check_inner(X: TwoDimMatrix, Y: TwoDimMatrix) -> None:
	if X.col_kind != "C" or Y.row_kind != "C":
		raise IndexKindMismatch("X • Y needs a continuous inner index")


def op_bullet_cont(X: TwoDimMatrix, Y: TwoDimMatrix, W: Callable[[Any], Any], a: float, b: float,
				   ctrl: Optional[QuadratureCtrl] = None) -> TwoDimMatrix:
	"""[X •_(a,b) Y]_{m,n} = ∫_a^b W(x) X_{m,x} Y_{x,n} dx by Gauss-Legendre."""
	X, Y = _as_matrix(X), _as_matrix(Y)
	_check_inner(X, Y)
	ctrl = ctrl or QuadratureCtrl(ctx=X.ctx)

	def entry(m, n):
		return gauss_legendre(lambda x: W(x) * X(m, x) * Y(x, n), a, b, ctrl)

	return TwoDimMatrix(entry, X.row_kind, Y.col_kind, X.ctx)


def op_bullet_q(X: TwoDimMatrix, Y: TwoDimMatrix, W: Callable[[Any], Any], a: Any, b: Any, q: Any,
				ctrl: Optional[QIntegralCtrl] = None) -> TwoDimMatrix:
	"""[X •_(q;a,b) Y]_{m,n} = ∫_a^b W(t) X_{m,t} Y_{t,n} d_qt."""
	X, Y = _as_matrix(X), _as_matrix(Y)
	_check_inner(X, Y)
	ctrl = ctrl or QIntegralCtrl(X.ctx)

	def entry(m, n):
		return qintegral(lambda t: W(t) * X(m, t) * Y(t, n), a, b, q, ctrl)

	return TwoDimMatrix(entry, X.row_kind, Y.col_kind, X.ctx)


def associativity_gap(A: Kernel, X: TwoDimMatrix, Y: TwoDimMatrix, W: Callable[[Any], Any],
					  a: Any, b: Any, q: Any, entries: Iterable[tuple[int, int]],
					  ctrl: Optional[QIntegralCtrl] = None) -> float:
	"""Largest gap between A∘(X •_q Y) and (A∘X) •_q Y on the given entries.

	Each gap is relative to Σ_k |A_{m,k}| |(X •_q Y)_{k,n}|, the size of the
	terms that A∘ adds up, so entries where those terms cancel are not
	judged against a near-zero result.
	"""
	inner = op_bullet_q(X, Y, W, a, b, q, ctrl)
	right = op_bullet_q(op_circ(A, X), Y, W, a, b, q, ctrl)
	worst = 0.0
	for m, n in entries:
		parts = [A(m, k) * inner(k, n) for k in range(m + 1)]
		left = sum(parts[1:], parts[0])
		scale = sum(float(abs(p)) for p in parts)
		rv = right(m, n)
		worst = max(worst, float(abs(left - rv)) / max(scale, float(abs(rv)), 1e-300))
	return worst
