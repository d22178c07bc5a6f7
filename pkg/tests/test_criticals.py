import math

import numpy as np
import pytest

from ptairy.criticals import (
    AtKind,
    asymptotic_table,
    build_table,
    eigenfunction_residual,
    knot_index,
    modulus_to_eps,
)
from ptairy.detcore import det_on_knot
from ptairy.locus import COLLISION, KNOT_CROSSING
from reference import ALPHA, BETA


@pytest.fixture(scope="module")
def table10():
    return build_table(10)


def test_rows_against_reference(table10):
    for row, a, b in zip(table10.rows, ALPHA, BETA):
        assert row.alpha == pytest.approx(a, rel=1e-13)
        assert row.beta == pytest.approx(b, rel=1e-13)


def test_formula_identity_and_roots(table10):
    for row in table10.rows[:5]:
        assert row.eps == (row.alpha * math.sqrt(3) / 2) ** 3
        assert row.delta == (row.beta * math.sqrt(3) / 2) ** 3
        for e in (row.delta, row.eps):
            v = det_on_knot(e)
            assert abs(v.d) <= 1e-8 * v.scale


def test_interlacing(table10):
    assert table10.interlaced()
    seq = [x for r in table10.rows for x in (r.delta, r.eps)]
    assert seq[0] > 0 and np.all(np.diff(seq) > 0)


def test_metadata_documents_indexing(table10):
    assert table10.metadata["alpha_0"] == 0.0
    assert "alpha_0" in table10.metadata["indexing"]
    assert table10.rows[0].k == 1


def test_known_first_row(table10):
    r = table10.rows[0]
    assert r.delta == pytest.approx(5.1, abs=0.1)
    assert r.eps == pytest.approx(12.3, abs=0.1)


def test_asymptotic_error_decreases():
    t = build_table(20, verify_critical=False)
    errs = [abs(r.eps - e) / r.eps for r, (_, e, _) in zip(t.rows, asymptotic_table(20))]
    errs_d = [abs(r.delta - d) / r.delta for r, (_, _, d) in zip(t.rows, asymptotic_table(20))]
    for seq in (errs, errs_d):
        tail = seq[2:]
        assert all(b < a for a, b in zip(tail, tail[1:]))
    assert errs[9] <= 1e-3 and errs_d[9] <= 1e-3


def test_asymptotic_formula_values():
    (_, e1, d1), = asymptotic_table(1)
    assert e1 == pytest.approx(12.12, abs=0.01)
    assert d1 == pytest.approx(4.91, abs=0.01)


def test_table_matches_traced_events(table10, branches_200):
    for j in (1, 2, 3):
        odd, even = branches_200[2 * j - 1], branches_200[2 * j]
        row = table10.rows[j - 1]
        assert odd.event(COLLISION).eps == pytest.approx(row.eps, abs=1e-6)
        assert even.event(COLLISION).eps == pytest.approx(row.eps, abs=1e-6)
        assert odd.event(KNOT_CROSSING).eps == pytest.approx(row.delta, abs=1e-6)


@pytest.mark.parametrize("k", [1, 2, 3])
@pytest.mark.parametrize("kind", list(AtKind))
def test_eigenfunction_endpoint_residuals(table10, k, kind):
    chk = eigenfunction_residual(kind, k, table=table10)
    assert chk.residual_minus1 < 1e-8
    assert chk.residual_plus1 < 1e-8
    # not the zero function
    assert chk.interior_norm > 1e-3


def test_eigenfunction_residual_sensitive_to_parameter(table10):
    chk = eigenfunction_residual("eps", 1, param=table10.rows[0].eps * 1.01)
    assert chk.residual_minus1 > 1e-4


def test_knot_eigenvalue_position(table10):
    for k in (1, 2):
        assert knot_index(table10.rows[k - 1].delta) == [2 * k - 1]
    assert knot_index(table10.rows[0].eps) == [1, 2]


def test_modulus_map():
    assert modulus_to_eps(2 / math.sqrt(3)) == pytest.approx(1.0)


def test_bad_kmax():
    with pytest.raises(ValueError):
        build_table(0)


def test_asymptotic_offset_is_bounded():
    # an O(1/k) term inside the square shifts eps_k by a bounded amount
    t = build_table(20, verify_critical=False)
    asym = asymptotic_table(20)
    de = [r.eps - e for r, (_, e, _) in zip(t.rows, asym)]
    dd = [r.delta - d for r, (_, _, d) in zip(t.rows, asym)]
    for diffs in (de, dd):
        assert max(abs(x) for x in diffs) < 0.5
        # converging: late differences change very little
        assert abs(diffs[-1] - diffs[-2]) < 1e-3
