import pytest

from conftest import rel
from qdual.errors import ConfigError, DivisionByVanishingFactor, IndexOutOfRange, InvalidSeries
from qdual.qcore import (
	INF,
	PochhammerLadder,
	PrecisionContext,
	QParam,
	narrow,
	pochhammer_shift,
	qbinom,
	qpoch,
	qpoch_multi,
	truncation_index,
)


def test_qpoch_examples(ctx):
	assert qpoch(0.7, 0.5, 0, ctx) == 1
	assert qpoch(0.5, 0.5, 2, ctx) == pytest.approx(0.375)
	assert qpoch(0.25, 0.5, -1, ctx) == pytest.approx(2.0)
	assert qpoch(0, 0.5, INF, ctx) == 1


def test_qpoch_negative_index_with_vanishing_factor(ctx):
	with pytest.raises(DivisionByVanishingFactor):
		qpoch(0.5, 0.5, -1, ctx)


def test_qpoch_negative_index_with_rounded_vanishing_factor(ctx):
	# 0.3**2 * 0.3**-2 is one only up to rounding
	with pytest.raises(DivisionByVanishingFactor):
		qpoch(0.3 ** 2, 0.3, -2, ctx)
	with pytest.raises(DivisionByVanishingFactor):
		PochhammerLadder(0.3 ** 2, 0.3, ctx)(-2)


def test_qpoch_rejects_q_outside_unit_disc(ctx):
	with pytest.raises(ValueError):
		qpoch(0.3, 1.2, 3, ctx)


def test_qpoch_rejects_fractional_index(ctx):
	with pytest.raises(IndexOutOfRange):
		qpoch(0.3, 0.5, 1.5, ctx)


@pytest.mark.parametrize("n", [1, 2, 5, 9])
def test_qpoch_recurrence(ctx, n):
	a, q = 0.3 + 0.2j, 0.6
	assert rel(qpoch(a, q, n, ctx), qpoch(a, q, n - 1, ctx) * (1 - a * q ** (n - 1))) < 1e-14


@pytest.mark.parametrize("n", [0, 3, 17, 50])
def test_infinite_product_splits(ctx, n):
	a, q = 1.7, 0.45
	split = qpoch(a, q, n, ctx) * qpoch(a * q ** n, q, INF, ctx)
	assert rel(split, qpoch(a, q, INF, ctx)) < 1e-13


def test_truncation_index_bounds_tail():
	k = truncation_index(2.0, 0.5, 1e-17)
	assert 2 * 2.0 * 0.5 ** k / 0.5 < 1e-17
	assert truncation_index(0.0, 0.5, 1e-17) == 0


def test_qpoch_multi(ctx):
	assert qpoch_multi([0.2, 0.9], 0.5, 0, ctx) == 1
	assert qpoch_multi([0.5, 0.5], 0.5, 2, ctx) == pytest.approx(0.140625)
	assert qpoch_multi([0.5, 0], 0.5, 3, ctx) == pytest.approx(qpoch(0.5, 0.5, 3, ctx))
	with pytest.raises(InvalidSeries):
		qpoch_multi([], 0.5, 2, ctx)


def test_qpoch_multi_reports_offending_entry(ctx):
	with pytest.raises(DivisionByVanishingFactor) as info:
		qpoch_multi([0.3, 0.5], 0.5, -2, ctx)
	assert "entry 1" in str(info.value)


def test_qbinom(ctx):
	assert qbinom(6, 0, 0.5, ctx) == pytest.approx(1.0)
	assert qbinom(2, 1, 0.5, ctx) == pytest.approx(1.5)
	assert qbinom(4, 1, 0.3, ctx) == qbinom(4, 3, 0.3, ctx)
	with pytest.raises(IndexOutOfRange):
		qbinom(3, 4, 0.5, ctx)


def test_pochhammer_shift(ctx):
	lhs, rhs = pochhammer_shift(0.3 + 0.1j, 0.5, 3, 2, ctx)
	assert rel(lhs, rhs) < 1e-12
	lhs, rhs = pochhammer_shift(0.7, 0.5, 4, 0, ctx)
	assert lhs == pytest.approx(qpoch(0.7, 0.5, 4, ctx))
	lhs, rhs = pochhammer_shift(0.7, 0.5, 0, 3, ctx)
	assert lhs == pytest.approx(1.0) and rhs == pytest.approx(1.0)


def test_pochhammer_shift_random(ctx, rng):
	for _ in range(200):
		x = complex(*rng.uniform(-2, 2, 2))
		if not 0.1 <= abs(x) <= 2:
			continue
		n, k = (int(v) for v in rng.integers(0, 11, 2))
		try:
			lhs, rhs = pochhammer_shift(x, 0.5, n, k, ctx)
		except DivisionByVanishingFactor:
			continue
		assert rel(lhs, rhs) < 1e-10


def test_qparam_exponents():
	p = QParam.power(-3)
	assert p.is_exact_power
	assert (QParam.power(2) * QParam.power(3)).qexp == 5
	assert (QParam.power(2) / QParam.power(3)).qexp == -1
	mixed = QParam.power(2) * 0.3
	assert not mixed.is_exact_power
	assert mixed.value(0.5) == pytest.approx(0.075)
	assert QParam.generic(0.4).qexp is None
	assert QParam.zero().is_zero
	assert QParam(0.3, 1).shift(2).qexp == 3


def test_pochhammer_ladder_matches_qpoch(ctx):
	ladder = PochhammerLadder(0.3, 0.5, ctx)
	for k in (0, 3, -2, 5, -4, 1):
		assert rel(ladder(k), qpoch(0.3, 0.5, k, ctx)) < 1e-13


def test_precision_context_validation():
	with pytest.raises(ConfigError):
		PrecisionContext("standard", 1e-3, 1e-17, 4000)
	with pytest.raises(ConfigError):
		PrecisionContext("fast", 1e-16, 1e-17, 4000)
	with pytest.raises(ConfigError):
		PrecisionContext("standard", 1e-16, 1e-17, 10)
	with pytest.raises(ConfigError):
		PrecisionContext("extended", 1e-38, 1e-38, 8000, dps=20)


def test_extended_context_keeps_digits(ext_ctx):
	value = qpoch(ext_ctx.real(0.5), ext_ctx.real(0.5), 2, ext_ctx)
	assert abs(value - ext_ctx.real("0.375")) < 1e-35
	third = ext_ctx.real(1) / 3
	assert abs(third * 3 - 1) < 1e-35


def test_guard_context(ctx, ext_ctx):
	assert ctx.guard.extended_mode
	assert ext_ctx.guard is ext_ctx


def test_narrow_rounds_back_to_standard(ctx, ext_ctx):
	value = ext_ctx.scalar(1) / 3
	assert isinstance(narrow(value, ctx), complex)
	assert narrow(value, ctx) == pytest.approx(1 / 3, rel=1e-15)
	block = narrow(ext_ctx.array([1, 2]) / 3, ctx)
	assert block.dtype == complex
	assert narrow(value, ext_ctx) == value
