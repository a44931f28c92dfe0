import dataclasses
import math

import pytest

from qdual.errors import ConfigError, QDualError, UnknownIdentity
from qdual.identities import qracah_dual_sampler
from qdual.qcore import STANDARD
from qdual.registry import (
	GramReport,
	VerificationReport,
	get_identity,
	gram,
	identity_ids,
	list_identities,
	relative_error,
	run_trial,
	trial_error,
	trial_rng,
	verify,
)


RECORD_KEYS = {"id", "trials", "passes", "worst_rel_err", "worst_params", "seed", "precision", "runtime_ms"}


def test_registry_has_the_core_identities():
	ids = identity_ids(exploratory=True)
	assert len(ids) >= 20
	for name in ("LQJ-DUAL-6W5", "QRACAH-DUAL-8W7", "QLAG-DUAL-BILATERAL", "BQJ-DUAL-MATRIX",
				 "AW-QBETA-8W7", "INV-N", "INV-K", "INV-FG"):
		assert name in ids


def test_lookup_ignores_case():
	assert get_identity("lqj-dual-6w5").id == "LQJ-DUAL-6W5"


def test_unknown_identity_suggests_close_names():
	with pytest.raises(UnknownIdentity) as err:
		get_identity("LQJ-DUAL-6W")
	assert "LQJ-DUAL-6W5" in err.value.suggestions
	assert "did you mean" in str(err.value)


def test_exploratory_ids_are_opt_in():
	gating = identity_ids()
	everything = identity_ids(exploratory=True)
	assert "SEARS-4PHI3-AS-STATED" in everything
	assert "SEARS-4PHI3-AS-STATED" not in gating
	assert "QRACAH-DUAL-8W7-M0" not in gating
	assert set(gating) < set(everything)


def test_listing_carries_anchor_and_domain():
	rows = {i: (anchor, domain) for i, anchor, domain in list_identities()}
	anchor, domain = rows["INV-N"]
	assert anchor
	assert "q in [0.2, 0.8]" in domain


def test_trial_streams_depend_on_seed_index_and_identity():
	first = trial_rng(1, 0, "INV-N").random()
	assert first == trial_rng(1, 0, "INV-N").random()
	assert first != trial_rng(1, 1, "INV-N").random()
	assert first != trial_rng(2, 0, "INV-N").random()
	assert first != trial_rng(1, 0, "INV-M").random()


def test_relative_error_floor():
	assert relative_error(0.0, 0.0) == 0.0
	assert relative_error(1.0, 1.0 + 1e-12) == pytest.approx(1e-12, rel=1e-3)
	assert relative_error(1e-20, 0.0, scale=1.0) == pytest.approx(1e-20)


@pytest.mark.parametrize("identity_id", ["LQJ-DUAL-6W5", "SUPP-QBINOM", "SUPP-SHIFT", "INV-N"])
def test_short_runs_pass(identity_id):
	report = verify(identity_id, trials=5, seed=1)
	assert report.passed, report.worst_params
	assert report.worst_rel_err <= report.tolerance


def test_runs_are_reproducible():
	a = verify("QLAG-DUAL-FINITE", trials=6, seed=7)
	b = verify("QLAG-DUAL-FINITE", trials=6, seed=7)
	assert a.worst_params == b.worst_params
	assert a.worst_rel_err == b.worst_rel_err


def test_workers_do_not_change_results():
	serial = verify("SUPP-WATSON", trials=8, seed=3)
	threaded = verify("SUPP-WATSON", trials=8, seed=3, workers=4)
	assert [t.params for t in serial.diagnostics] == [t.params for t in threaded.diagnostics]
	assert [t.rel_err for t in serial.diagnostics] == [t.rel_err for t in threaded.diagnostics]


def test_domain_override_is_respected():
	report = verify("SUPP-QBINOM", trials=10, seed=5, domain={"q": (0.5, 0.5)})
	assert all(t.params["q"] == 0.5 for t in report.diagnostics)


def test_extended_run_uses_tighter_tolerance(ext_ctx):
	report = verify("INV-N", trials=2, seed=1, ctx=ext_ctx)
	assert report.precision == "extended"
	assert report.tolerance == 1e-24
	assert report.passed


def test_trials_must_be_positive():
	with pytest.raises(ValueError):
		verify("SUPP-SHIFT", trials=0)


def test_record_shape():
	record = verify("SUPP-SHIFT", trials=3, seed=2).to_record()
	assert set(record) == RECORD_KEYS
	assert record["trials"] == 3
	assert record["seed"] == 2
	assert record["precision"] == "standard"


def test_non_finite_error_is_reported_as_null():
	report = VerificationReport("X", trials=1, passes=0, worst_rel_err=math.inf, worst_params={}, seed=0)
	assert report.to_record()["worst_rel_err"] is None
	assert not report.passed


def test_gram_report_record():
	report = gram("little-qjacobi", 4, {"a": 0.3, "b": 0.2, "q": 0.5})
	assert isinstance(report, GramReport)
	assert report.matrix.shape == (4, 4)
	assert report.max_offdiag_rel < 1e-9
	assert set(report.to_record()) == {"family", "size", "max_offdiag_rel", "max_diag_rel_err",
									   "precision", "runtime_ms"}


@pytest.mark.parametrize("identity_id", identity_ids())
def test_seeded_runs_pass(identity_id):
	report = verify(identity_id, trials=20, seed=42)
	assert report.passed, (report.worst_rel_err, report.worst_params)


@pytest.mark.parametrize("identity_id, limit", [
	("SUPP-QBINOM", 1e-10),
	("SUPP-1PSI1", 1e-9),
	("SUPP-WATSON", 1e-9),
	("SUPP-SHIFT", 1e-9),
])
def test_supplementary_identities_hold_across_their_domains(identity_id, limit):
	report = verify(identity_id, trials=500, seed=42)
	assert report.passed, (report.worst_rel_err, report.worst_params)
	assert report.worst_rel_err < limit


def test_sears_agrees_with_the_dual_8w7_on_shared_draws():
	dual, sears = get_identity("QRACAH-DUAL-8W7"), get_identity("SEARS-4PHI3")
	tol = dual.tolerance(STANDARD)
	checked = 0
	for i in range(100):
		params = qracah_dual_sampler(trial_rng(42, i, dual.id), dual.domain())
		try:
			_, _, err = trial_error(dual, params, STANDARD)
		except QDualError:
			continue
		if err > tol:
			continue
		checked += 1
		_, _, sears_err = trial_error(sears, params, STANDARD)
		assert sears_err <= 10 * tol, params
	assert checked >= 50


def test_sampler_failure_is_a_failed_trial():
	def sampler(rng, domain):
		raise ConfigError("empty range")

	spec = dataclasses.replace(get_identity("SUPP-SHIFT"), sampler=sampler)
	result = run_trial(spec, 0, 42, STANDARD, 1e-9, {})
	assert not result.passed
	assert result.error == "config_error"
	assert result.params == {}
	assert math.isinf(result.rel_err)


@pytest.mark.slow
@pytest.mark.parametrize("identity_id", identity_ids())
def test_full_acceptance_run(identity_id):
	report = verify(identity_id, trials=200, seed=42)
	assert report.passed, (report.worst_rel_err, report.worst_params)
