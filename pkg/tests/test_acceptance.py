"""The acceptance battery: every criterion at its contract tolerance.

Each test prints its one-line verdict so a plain ``pytest -s`` run shows
the per-criterion summary the CLI ``report`` subcommand also emits.
"""

from lamkit import acceptance

_RESULTS = {}


def _check(result):
    _RESULTS[result.index] = result
    print(result.line())
    assert result.passed, result.details


def test_criterion_1_cylinder_structure():
    _check(acceptance.criterion_cylinder_structure(max_genus=6))


def test_criterion_2_parabolicity_and_traces():
    _check(acceptance.criterion_parabolic_traces(max_genus=6))


def test_criterion_3_twist_limit_oracle():
    _check(acceptance.criterion_twist_limit_oracle(seed=7, n_seeds=200, k_max=10**4))


def test_criterion_4_area_identity():
    _check(acceptance.criterion_area_identity(max_genus=6))


def test_criterion_5_ratio_locus_genericity():
    _check(acceptance.criterion_ratio_locus_genericity(seed=7, n_samples=1000, max_genus=5))


def test_criterion_6_obstruction_witness():
    _check(acceptance.criterion_obstruction_witness(seed=7, n_negatives=500, max_genus=5))


def test_criterion_7_circle_map():
    _check(acceptance.criterion_circle_map(seed=7, n_samples=720))


def test_criterion_8_amalgam_normal_form():
    _check(acceptance.criterion_amalgam_normal_form())


def test_zz_summary():
    # compact recap of whatever ran above (all 8 under a full-file run)
    print()
    for index in sorted(_RESULTS):
        print(_RESULTS[index].line())
    assert all(r.passed for r in _RESULTS.values())
