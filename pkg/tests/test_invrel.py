import numpy as np
import pytest

from conftest import rel
from qdual.errors import IndexKindMismatch, VanishingDenominatorFactor
from qdual.invrel import (
	FGSystem,
	Kernel,
	TwoDimMatrix,
	associativity_gap,
	bio_check,
	carlitz_system,
	check_antisymmetry,
	check_distinct,
	check_fg,
	compose,
	difference,
	fg_backward,
	fg_forward,
	fg_kernels,
	identity_kernel,
	inverse_pair,
	kernel_K,
	kernel_M,
	kernel_N,
	kernel_N_inv,
	op_bullet_cont,
	op_bullet_q,
	op_circ,
	random_system,
	transform,
)
from qdual.qcalculus import QuadratureCtrl
from qdual.qpolys import FamilyParams, get_family


def test_kernel_is_lower_triangular(ctx):
	N = kernel_N(0.3, 0.5, ctx)
	assert N(2, 5) == 0
	assert N(0, 0) == pytest.approx(1.0)
	block = N.block(4)
	assert block.shape == (4, 4)
	assert np.all(np.triu(block, 1) == 0)


def test_identity_kernel_composes_trivially(ctx):
	N = kernel_N(0.3, 0.5, ctx)
	assert np.allclose(compose(identity_kernel(ctx), N, 5), N.block(5))


def test_n_pair_is_inverse(ctx, rng):
	for _ in range(10):
		a = float(rng.uniform(0.1, 0.9)) * (1 if rng.random() < 0.5 else -1)
		q = float(rng.uniform(0.2, 0.8))
		N, N_inv = kernel_N(a, q, ctx), kernel_N_inv(a, q, ctx)
		assert bio_check(N, N_inv, 25) < 1e-10
		assert bio_check(N_inv, N, 25) < 1e-10


def test_small_q_does_not_underflow(ctx):
	N, N_inv = kernel_N(0.5, 0.2, ctx), kernel_N_inv(0.5, 0.2, ctx)
	assert N_inv(24, 24) != 0
	assert bio_check(N, N_inv, 25) < 1e-10


def test_plain_deviation_on_a_small_block(ctx):
	N, N_inv = kernel_N(0.3, 0.5, ctx), kernel_N_inv(0.3, 0.5, ctx)
	plain = bio_check(N, N_inv, 6, scaled=False)
	assert plain < 1e-9
	assert bio_check(N, N_inv, 6) <= plain


def test_m_pair_is_inverse(ctx):
	assert bio_check(kernel_M(0.4, 0.5, ctx), kernel_M(1 / 0.4, 0.5, ctx), 20) < 1e-9


def test_k_pair_is_inverse(ctx):
	K, K_rev = kernel_K(0.3, 0.2, 0.5, ctx), kernel_K(0.2, 0.3, 0.5, ctx)
	assert bio_check(K, K_rev, 15) < 1e-8
	assert abs(compose(K, K_rev, 4)[3, 1]) < 1e-12


def test_k_is_branch_independent(ctx):
	plus = kernel_K(0.3, 0.2, 0.5, ctx, branch=1)
	minus = kernel_K(0.3, 0.2, 0.5, ctx, branch=-1)
	for n in range(6):
		for k in range(n + 1):
			assert rel(plus(n, k), minus(n, k)) < 1e-12 or abs(plus(n, k)) < 1e-14


def test_vanishing_denominator_is_reported(ctx):
	# (aq; q)_1 = 0 when a = 1/q
	N = kernel_N(2.0, 0.5, ctx)
	with pytest.raises(VanishingDenominatorFactor) as info:
		N(3, 1)
	assert (info.value.i, info.value.j) == (3, 1)


def test_fg_conditions():
	sys = carlitz_system(0.3, 0.5)
	assert check_fg(sys, samples=200) < 1e-14
	assert check_antisymmetry(sys)
	assert check_distinct(sys, 20)

	one = FGSystem(lambda x, y: 1, difference, xs=lambda i: i, bs=lambda i: i + 1)
	assert check_fg(one, samples=200) < 1e-14

	product = FGSystem(lambda x, y: x * y, lambda x, y: x * y, xs=lambda i: i, bs=lambda i: i + 1)
	assert check_fg(product, samples=50) > 1e-3
	assert not check_antisymmetry(product)


def test_repeated_lattice_points():
	sys = FGSystem(difference, difference, xs=lambda i: i, bs=lambda i: i % 3)
	assert not check_distinct(sys, 5)


@pytest.mark.parametrize("a, q", [(0.3, 0.5), (-0.6, 0.35), (0.8, 0.7)])
def test_carlitz_system_reproduces_n(ctx, a, q):
	F, G = fg_kernels(carlitz_system(a, q, ctx))
	N, N_inv = kernel_N(a, q, ctx), kernel_N_inv(a, q, ctx)
	for n in range(16):
		for k in range(n + 1):
			assert rel(F(n, k), N(n, k)) < 1e-12
			assert rel(G(n, k), N_inv(n, k)) < 1e-12


def test_random_fg_system_is_inverse(ctx):
	F, G = fg_kernels(random_system(0.5, np.random.default_rng(7), ctx))
	assert bio_check(F, G, 12) < 1e-8
	assert bio_check(G, F, 12) < 1e-8


def test_transform_round_trip(ctx, rng):
	N, N_inv = kernel_N(0.3, 0.5, ctx), kernel_N_inv(0.3, 0.5, ctx)
	seq = list(rng.uniform(-1, 1, 10))
	back = transform(N_inv, transform(N, seq))
	assert np.allclose(np.array(back, dtype=complex), seq, rtol=0, atol=1e-11)


def test_inverse_pair_lookup(ctx):
	F, G = inverse_pair("M", {"a": 0.4, "q": 0.5}, ctx)
	assert bio_check(F, G, 8) < 1e-10
	F, G = inverse_pair("fg-demo", {"q": 0.5}, ctx, np.random.default_rng(3))
	assert bio_check(F, G, 8) < 1e-9
	with pytest.raises(KeyError):
		inverse_pair("Z", {"a": 0.4}, ctx)


def test_extended_precision_inverse(ext_ctx):
	a, q = ext_ctx.real(0.3), ext_ctx.real(0.5)
	assert bio_check(kernel_N(a, q, ext_ctx), kernel_N_inv(a, q, ext_ctx), 25) < 1e-30


def test_two_dim_matrix_kinds(ctx):
	with pytest.raises(IndexKindMismatch):
		TwoDimMatrix(lambda r, c: 0, "Z", "R", ctx)
	X = TwoDimMatrix(lambda n, x: x ** n, "Z", "C", ctx)
	assert X.transpose().row_kind == "C"
	assert X.transpose()(0.5, 2) == pytest.approx(0.25)
	with pytest.raises(IndexKindMismatch):
		op_circ(kernel_N(0.3, 0.5, ctx), X.transpose())
	with pytest.raises(IndexKindMismatch):
		op_bullet_q(X, X, lambda t: 1, 0, 1, 0.5)


def test_circ_applies_kernel(ctx):
	N = kernel_N(0.3, 0.5, ctx)
	X = TwoDimMatrix(lambda n, x: x ** n, "Z", "C", ctx)
	AX = op_circ(N, X)
	expected = sum(N(3, k) * 0.4 ** k for k in range(4))
	assert rel(AX(3, 0.4), expected) < 1e-14


def test_bullet_cont_moments(ctx):
	X = TwoDimMatrix(lambda n, x: x ** n, "Z", "C", ctx)
	ctrl = QuadratureCtrl(points=1024, ctx=ctx)
	# ∫_0^1 x^m x^n dx = 1/(m + n + 1)
	Y = op_bullet_cont(X, X.transpose(), lambda x: 1, 0.0, 1.0, ctrl)
	assert Y(1, 2) == pytest.approx(0.25, rel=1e-6)
	assert Y(0, 0) == pytest.approx(1.0, rel=1e-6)


def test_bullet_q_moments(ctx):
	X = TwoDimMatrix(lambda n, x: x ** n, "Z", "C", ctx)
	Y = op_bullet_q(X, X.transpose(), lambda t: 1, 0, 0.8, 0.5)
	# ∫_0^a t^j d_qt = a^{j+1}(1-q)/(1-q^{j+1})
	assert rel(Y(1, 2), 0.8 ** 4 * 0.5 / (1 - 0.5 ** 4)) < 1e-12


def test_associativity_with_big_qjacobi_basis(ctx):
	fp = FamilyParams("big-qjacobi", {"a": 0.5, "b": 0.3, "c": -0.4}, 0.5)
	family = get_family("big-qjacobi")
	X = TwoDimMatrix(lambda k, t: family.basis(fp, k, t, ctx), "Z", "C", ctx)
	gap = associativity_gap(kernel_N(0.2, 0.5, ctx), X, X.transpose(),
							lambda t: family.weight(fp, t, ctx), -0.2, 0.25, 0.5, [(2, 1), (3, 3)])
	assert gap < 1e-10


def test_anonymous_kernel_repr(ctx):
	assert repr(Kernel(lambda n, k: 1, ctx)) == "Kernel(anonymous)"


@pytest.mark.parametrize("q", [0.5, 0.3])
def test_sequence_form_round_trip(ctx, rng, q):
	sys = random_system(q, np.random.default_rng(5), ctx)
	G = [ctx.scalar(complex(x, y)) for x, y in rng.uniform(-1, 1, (10, 2))]
	F = fg_forward(sys, G)
	back = fg_backward(sys, F)
	assert np.allclose(np.array(back, dtype=complex), np.array(G, dtype=complex), rtol=0, atol=1e-11)
	assert np.allclose(np.array(fg_forward(sys, back), dtype=complex), np.array(F, dtype=complex), rtol=1e-11)


def test_sequence_form_first_terms(ctx):
	sys = carlitz_system(0.3, 0.5, ctx)
	f00 = sys.f(sys.xs(0), sys.bs(0))
	assert rel(fg_forward(sys, [2.0])[0], 2.0 * f00) < 1e-15
	assert rel(fg_backward(sys, [2.0])[0], 2.0 / f00) < 1e-15
	# F_1 = G_0 f(x_0, b_0) + G_1 g(b_0, b_1)
	F = fg_forward(sys, [1.0, 1.0])
	assert rel(F[1], f00 + sys.g(sys.bs(0), sys.bs(1))) < 1e-14


def test_sequence_form_vanishing_first_factor(ctx):
	sys = FGSystem(difference, difference, xs=lambda i: 0.5 ** -i, bs=lambda i: 0.5 ** -i, ctx=ctx)
	with pytest.raises(VanishingDenominatorFactor):
		fg_backward(sys, [1.0, 1.0])


def test_associativity_gap_tolerates_cancelling_entries(ctx):
	# rows 0 and 1 of X differ by 1e-12, and A takes their difference
	X = TwoDimMatrix(lambda k, t: (1 + 1e-12 * k) * (1 + t), "Z", "C", ctx)
	A = Kernel(lambda n, k: 1 if n == k else (-1 if k == n - 1 else 0), ctx)
	gap = associativity_gap(A, X, X.transpose(), lambda t: 1, 0, 0.8, 0.5, [(1, 0), (1, 1)])
	assert gap < 1e-12


def test_bullet_cont_with_weight(ctx, ext_ctx):
	X = TwoDimMatrix(lambda n, x: x ** n, "Z", "C", ctx)
	# ∫_0^1 e^x x dx = 1
	Y = op_bullet_cont(X, X.transpose(), ctx.backend.exp, 0.0, 1.0)
	assert rel(Y(1, 0), 1.0) < 1e-13
	Xe = TwoDimMatrix(lambda n, x: x ** n, "Z", "C", ext_ctx)
	Ye = op_bullet_cont(Xe, Xe.transpose(), lambda x: 1, 0.0, 1.0)
	assert abs(Ye(2, 3) - ext_ctx.real(1) / 6) < 1e-30
