"""Tests for the verification suites.

The suites are exercised end to end once (shared across tests), the record
invariants and serialization determinism are checked, and the two standalone
certification entry points are driven through passing and faithfully failing
configurations.
"""

import json
from fractions import Fraction

import pytest
from mpmath import mpf

from stokeslab.solver import SolutionRequest
from stokeslab.specfun import ArgTrackedNumber
from stokeslab.verify import (
    SUITE_ORDER,
    CheckRecord,
    SuiteConfig,
    build_report,
    certify_stokes_basis,
    consecutive_bases_check,
    run_suite,
    seeded_parameters,
    seeded_z,
    summarize,
    theorem_interval,
)

D = 40


@pytest.fixture(scope="module")
def all_records():
    return run_suite("all", SuiteConfig())


# -- suite selection and config --------------------------------------------------


def test_unknown_suite_rejected():
    with pytest.raises(ValueError):
        run_suite("nonsense")


def test_all_concatenates_in_fixed_order(all_records):
    prefixes = []
    for record in all_records:
        prefix = record.check_id.split(".")[0]
        if not prefixes or prefixes[-1] != prefix:
            prefixes.append(prefix)
    assert prefixes == list(SUITE_ORDER)


def test_numeric_rank_focus_rejects_large_rank():
    with pytest.raises(ValueError):
        run_suite("solutions", SuiteConfig(n=7))


# -- record invariants --------------------------------------------------------------


def test_record_invariant_pass_iff_within_threshold(all_records):
    for record in all_records:
        if isinstance(record.residual, bool):
            assert record.threshold is None
            assert record.passed == record.residual
        else:
            assert record.threshold is not None
            assert record.passed == (record.residual <= record.threshold)


def test_wall_time_tracked_but_not_serialized(all_records):
    for record in all_records:
        assert record.wall_time >= 0
        assert "wall_time" not in record.to_dict()


def test_check_ids_unique(all_records):
    ids = [record.check_id for record in all_records]
    assert len(ids) == len(set(ids))


# -- faithful outcomes ----------------------------------------------------------------


def test_every_check_passes_except_rank_two_ray_characterization(all_records):
    failing = [record for record in all_records if not record.passed]
    assert [record.check_id for record in failing] == ["stokes.collision_rays"]
    bad = failing[0].parameters["counterexamples"]
    # the rank-2 characterization genuinely breaks at exactly the three
    # angles where the two vertices sit at 0 and a half turn
    assert bad == [[2, "-1/2"], [2, "0"], [2, "1/2"]]


def test_collision_check_passes_when_scoped_to_rank_three():
    records = run_suite("stokes", SuiteConfig(n=3))
    by_id = {record.check_id: record for record in records}
    assert by_id["stokes.collision_rays"].passed


def test_monodromy_residuals_at_default_seed():
    records = run_suite("monodromy", SuiteConfig(n=3))
    for record in records:
        assert record.passed
        if not isinstance(record.residual, bool):
            assert record.residual <= 1e-25


def test_braid_suite_exact_up_to_rank_eight():
    records = run_suite("braid", SuiteConfig(n_max=8))
    assert all(record.passed for record in records)
    by_id = {record.check_id: record for record in records}
    assert 8 in [int(v) for v in by_id["braid.delta_factorization"].parameters["ranks"]]


def test_gamma_decade_ratio_recorded(all_records):
    by_id = {record.check_id: record for record in all_records}
    ratio = by_id["gamma.error_decades"].parameters["decade_ratio"]
    assert 8 <= ratio <= 12


def test_relabeled_walks_agree(all_records):
    by_id = {record.check_id: record for record in all_records}
    record = by_id["stokes.relabeling"]
    assert record.passed
    assert record.parameters["structure_matches"] is True


# -- determinism ------------------------------------------------------------------------


@pytest.mark.parametrize("suite", ["algebra", "monodromy"])
def test_reports_byte_identical_for_same_seed(suite):
    config = SuiteConfig(seed=3)
    first = json.dumps(build_report(config, run_suite(suite, config), suite))
    second = json.dumps(build_report(config, run_suite(suite, config), suite))
    assert first == second


def test_seed_changes_sampled_records():
    a = run_suite("algebra", SuiteConfig(seed=0))
    b = run_suite("algebra", SuiteConfig(seed=1))
    dict_a = [record.to_dict() for record in a]
    dict_b = [record.to_dict() for record in b]
    assert dict_a != dict_b


def test_summary_counts(all_records):
    report = build_report(SuiteConfig(), all_records)
    assert report["summary"] == summarize(all_records)
    assert report["summary"]["pass"] + report["summary"]["fail"] == len(all_records)
    assert len(report["records"]) == len(all_records)


# -- seeded parameter draws ----------------------------------------------------------


def test_seeded_vectors_clear_the_resonance_margin():
    for n in (2, 3, 4):
        for seed in (0, 1, 5):
            z = seeded_z(n, seed)
            p = ArgTrackedNumber.from_polar(Fraction(5, 4), 0.6, D)
            SolutionRequest.make(n, z, p, D)  # raises on margin violation


def test_seeded_parameters_modulus_range():
    for z, p in seeded_parameters(3, 4, 6, D):
        assert len(z) == 3
        assert mpf("0.1") <= p.modulus <= mpf(5)


def test_seeded_z_rejects_large_rank():
    with pytest.raises(ValueError):
        seeded_z(5, 0)


# -- convergence failures become records -----------------------------------------------


def test_truncation_failure_marks_record_and_suite_continues():
    config = SuiteConfig(n=2, samples=1, r_max=5)
    records = run_suite("solutions", config)
    assert len(records) == 5  # every member reported despite the failures
    flow = records[0]
    assert flow.check_id == "solutions.flow_equation"
    assert not flow.passed
    assert "error" in flow.parameters


# -- the certification walk as records ---------------------------------------------------


def test_theorem_intervals():
    assert theorem_interval("Qprime", 0, 3) == (Fraction(1, 6), Fraction(1, 3))
    assert theorem_interval("Qdoubleprime", 0, 3) == (Fraction(0), Fraction(1, 6))
    assert theorem_interval("Qprime", 1, 3) == (Fraction(1, 2), Fraction(2, 3))
    with pytest.raises(ValueError):
        theorem_interval("Qmystery", 0, 3)


def test_certify_emits_one_record_per_element_and_subinterval():
    records = certify_stokes_basis("Qprime", 0, Fraction(1, 4), 3, SuiteConfig())
    # four subintervals, three elements each
    assert len(records) == 12
    assert all(record.passed for record in records)
    subintervals = {tuple(record.parameters["subinterval"]) for record in records}
    assert len(subintervals) == 4
    elements = {record.parameters["element"] for record in records}
    assert len(elements) >= 3
    assert all(record.parameters["a_in_stated_interval"] for record in records)


def test_certify_out_of_interval_runs_and_reports_the_failure():
    records = certify_stokes_basis("Qdoubleprime", 0, 0.2, 3, SuiteConfig())
    assert not records[0].parameters["a_in_stated_interval"]
    failing = [record for record in records if not record.passed]
    assert len(failing) == 1
    assert failing[0].parameters["element"] == "C^3(1)"
    assert failing[0].parameters["head_dominant"] is False


def test_certify_rejects_unknown_family():
    with pytest.raises(ValueError):
        certify_stokes_basis("Qmystery", 0, Fraction(1, 4), 3, SuiteConfig())


def test_certify_records_rewrites_on_entry():
    records = certify_stokes_basis("Qprime", 0, Fraction(1, 4), 3, SuiteConfig())
    rewrites = {
        record.parameters["entry_rewrite"]
        for record in records
        if record.parameters["entry_rewrite"]
    }
    assert rewrites == {"C^3(2) -> ~C^3(2)"}


# -- consecutive interleaved families -----------------------------------------------------


@pytest.mark.parametrize("n,k", [(3, 0), (2, 1), (3, -1)])
def test_consecutive_bases_numeric_echo(n, k):
    record = consecutive_bases_check(k, n, SuiteConfig())
    assert record.passed
    assert record.parameters["symbolic"] is True
    assert record.parameters["numeric_echo"] is True
    assert record.residual <= record.threshold


def test_consecutive_bases_symbolic_only_at_high_rank():
    record = consecutive_bases_check(1, 5, SuiteConfig())
    assert record.passed
    assert record.parameters["numeric_echo"] is False
