import pytest

from conftest import rel
from qdual.errors import DenominatorVanishes, InvalidSeries, NoConvergence, ParameterOutsideAnnulus
from qdual.hyperq import (
	PhiSeries,
	TermAccumulator,
	WSeries,
	cancels,
	eval_1psi1,
	eval_guarded,
	eval_phi,
	eval_w,
	expand_w,
	phi,
	psi11_product,
	termination_index,
	vwp,
)
from qdual.qcore import INF, PrecisionContext, QParam, qpoch


def test_termination_index():
	assert termination_index(PhiSeries((QParam.power(-3), 0.2), (0.4,), 0.5, 0.3)) == 3
	assert termination_index(PhiSeries((QParam.power(-3), QParam.power(-1)), (0.4,), 0.5, 0.3)) == 1
	assert termination_index(PhiSeries((0.2, 0.3), (0.4,), 0.5, 0.3)) is None
	# q^-3 scaled by a coefficient is not an exact power
	assert termination_index(PhiSeries((QParam(0.5, -3),), (), 0.5, 0.3)) is None


def test_series_shape_is_checked():
	with pytest.raises(InvalidSeries):
		PhiSeries((0.1, 0.2, 0.3), (0.4,), 0.5, 0.1)


def test_zero_argument(ctx):
	out = eval_phi(PhiSeries((0.3, 0.4), (0.6,), 0.5, 0), ctx)
	assert out.value == 1
	assert out.terminated


def test_one_phi_zero_terminating(ctx):
	out = eval_phi(PhiSeries((QParam.power(-1),), (), 0.5, 0.2), ctx)
	assert out.value == pytest.approx(0.6)
	assert out.terminated
	assert out.tail_estimate == 0.0


def test_q_binomial_theorem(ctx, rng):
	q = 0.5
	for _ in range(100):
		a = complex(*rng.uniform(-0.9, 0.9, 2))
		z = complex(*rng.uniform(-0.5, 0.5, 2))
		expected = qpoch(a * z, q, INF, ctx) / qpoch(z, q, INF, ctx)
		assert rel(phi([a], [], q, z, ctx), expected) < 1e-10


def test_terminating_sum_ignores_eps(ctx):
	s = PhiSeries((QParam.power(-6), 0.3, 0.7), (0.2, 0.9), 0.5, 0.5)
	loose = eval_phi(s, ctx).value
	tight = eval_phi(s, PrecisionContext("standard", ctx.eps_term / 100, ctx.eps_prod, ctx.max_terms)).value
	assert loose == tight


def test_nonterminating_balanced_series_needs_small_argument(ctx):
	with pytest.raises(NoConvergence):
		eval_phi(PhiSeries((0.3, 0.4), (0.6,), 0.5, 1.2), ctx)


def test_exact_vanishing_denominator(ctx):
	s = PhiSeries((0.3, 0.4), (QParam.power(-2),), 0.5, 0.5)
	with pytest.raises(DenominatorVanishes) as info:
		eval_phi(s, ctx)
	assert info.value.index == 3


def test_termination_precedes_vanishing_denominator(ctx):
	# the series stops at k = 1 before (q^-2; q)_3 reaches zero
	s = PhiSeries((QParam.power(-1), 0.4), (QParam.power(-2),), 0.5, 0.5)
	assert eval_phi(s, ctx).terminated


def test_6w5_summation(ctx):
	a, b, q, n, m = 0.3, 0.2, 0.5, 2, 1
	lhs = vwp(QParam(a * b, 1), [b * q, QParam.power(-n), QParam.power(-m)], q, a * q ** (1 + m + n), ctx)
	abq2 = a * b * q ** 2
	rhs = (qpoch(abq2, q, n, ctx) * qpoch(abq2, q, m, ctx) * qpoch(a * q, q, n + m, ctx)
		   / (qpoch(a * q, q, n, ctx) * qpoch(a * q, q, m, ctx) * qpoch(abq2, q, n + m, ctx)))
	assert rel(lhs, rhs) < 1e-12


def test_6w5_with_zero_degree_slot(ctx):
	w = WSeries(QParam(0.06, 1), (0.1, QParam.power(0), QParam.power(-2)), 0.5, 0.3)
	assert eval_w(w, ctx).value == 1


def test_vwp_branch_invariance(ctx, rng):
	for _ in range(50):
		a1 = complex(*rng.uniform(-0.8, 0.8, 2))
		upper = (complex(*rng.uniform(-0.8, 0.8, 2)), complex(*rng.uniform(-0.8, 0.8, 2)))
		w = WSeries(a1, upper, 0.5, 0.2)
		plus = eval_phi(expand_w(w, ctx, branch=1), ctx).value
		minus = eval_phi(expand_w(w, ctx, branch=-1), ctx).value
		assert rel(plus, minus) < 1e-10


def test_1psi1_matches_product(ctx):
	out = eval_1psi1(0.6, 0.1, 0.5, 0.3, ctx)
	assert not out.terminated
	assert rel(out.value, psi11_product(0.6, 0.1, 0.5, 0.3, ctx)) < 1e-9


def test_1psi1_with_zero_lower_parameter(ctx):
	value = eval_1psi1(0.6, 0, 0.5, 0.3, ctx).value
	assert rel(value, psi11_product(0.6, 0, 0.5, 0.3, ctx)) < 1e-9


def test_1psi1_reduces_to_one_sided_sum(ctx):
	a, q, z = 1.5, 0.5, 0.6
	value = eval_1psi1(a, q, q, z, ctx).value
	assert rel(value, qpoch(a * z, q, INF, ctx) / qpoch(z, q, INF, ctx)) < 1e-10


def test_1psi1_annulus(ctx):
	with pytest.raises(ParameterOutsideAnnulus):
		eval_1psi1(0.6, 0.1, 0.5, 1.1, ctx)
	with pytest.raises(ParameterOutsideAnnulus):
		eval_1psi1(0.2, 0.1, 0.5, 0.3, ctx)


def test_accumulator_stops_on_cancelling_sum():
	acc = TermAccumulator(1e-16)
	stopped = [acc.add(t) for t in (1.0, -1.0, 0.0, 0.0, 0.0)]
	assert stopped[-1]
	assert acc.total == 0
	assert acc.largest == 1.0


def test_largest_term_is_reported(ctx):
	# 1φ0(0.3;; 0.5, 0.4) has decreasing positive terms starting at 1
	s = eval_phi(PhiSeries((0.3,), (), 0.5, 0.4), ctx)
	assert s.largest_term == pytest.approx(1.0)
	assert not s.terminated
	assert s.terms_used > 3


def test_cancelling_terminating_sum_is_summed_at_guard_precision(ctx, ext_ctx):
	# q-Chu-Vandermonde 2φ1(q^-n, B; C; q, q) = (C/B;q)_n B^n / (C;q)_n; its terms exceed the value by ~1e16
	q, n = 0.45, 6
	B, C = 0.21 * q ** 7, 0.3 * q
	s = eval_phi(PhiSeries((QParam.power(-n), B), (C,), q, q), ctx)
	expected = qpoch(C / B, q, n, ctx) * B ** n / qpoch(C, q, n, ctx)
	assert s.terminated
	assert s.largest_term > 1e15 * abs(s.value)
	assert isinstance(s.value, complex)
	assert rel(s.value, expected) < 1e-12
	assert rel(eval_phi(PhiSeries((QParam.power(-n), B), (C,), q, q), ext_ctx).value, expected) < 1e-12


def test_guarded_builder_sees_the_guard_context(ctx):
	seen = []

	def build(c):
		seen.append(c.mode)
		q = c.scalar(0.45)
		return PhiSeries((QParam.power(-6), c.scalar(0.21) * q ** 7), (c.scalar(0.3) * q,), q, q)

	s = eval_guarded(build, ctx)
	assert seen == ["standard", "extended"]
	assert cancels(s)
	assert isinstance(s.value, complex)


def test_mild_sums_stay_in_standard_precision(ctx):
	seen = []

	def build(c):
		seen.append(c.mode)
		return PhiSeries((QParam.power(-3), 0.2), (0.4,), 0.5, 0.3)

	eval_guarded(build, ctx)
	assert seen == ["standard"]
