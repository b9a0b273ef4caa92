import numpy as np
import pytest

from kreinfock.errors import BadParams, UnknownModel
from kreinfock.krein import indefinite_form
from kreinfock.models import (
    ETA0,
    MINKOWSKI,
    STATED_BRS_CONSTANT,
    REGISTRY,
    brs_build,
    brs_check,
    build_model,
    check_expected_relations,
    eta_family_check,
    eta_theta_xi,
    feynman_decomposition_check,
    model_names,
    two_field_model,
)

ALL = ["abnormal_bose", "abnormal_fermi", "froissart", "icar", "eta_theta_xi", "feynman", "brs", "two_field"]


def relations(spec):
    return {r.label: r.coefficient for r in spec.expected_relations}


def test_registry_contents():
    assert set(model_names()) == set(ALL)


def test_abnormal_bose():
    spec = build_model("abnormal_bose")
    assert (spec.d, spec.cutoff, spec.statistics) == (1, 3, "bose")
    assert relations(spec) == {"[a, a^dag]": -1}


def test_froissart_single_pair():
    assert relations(build_model("froissart", {"pairs": 1})) == {
        "[alpha_1, alpha_1^dag]": 0,
        "[alpha_1, beta_1^dag]": 1,
        "[beta_1, alpha_1^dag]": 1,
        "[beta_1, beta_1^dag]": 0,
    }


def test_feynman_coefficients_are_minus_g():
    spec = build_model("feynman")
    for mu in range(4):
        for nu in range(4):
            assert relations(spec)[f"[a_{mu}, a_{nu}^dag]"] == -MINKOWSKI[mu, nu]


def test_icar_signs():
    rel = relations(build_model("icar", {"pairs": 2}))
    assert [rel[f"[a_{n}, a_{n}^dag]"] for n in range(1, 5)] == [-1, 1, -1, 1]


def test_unknown_model_and_bad_params():
    with pytest.raises(UnknownModel):
        build_model("lee")
    with pytest.raises(BadParams):
        build_model("froissart", {"pairs": 0})
    with pytest.raises(BadParams):
        build_model("froissart", {"colour": 1})
    with pytest.raises(BadParams):
        build_model("brs", {"a": "not-a-number"})
    with pytest.raises(BadParams):
        build_model("eta_theta_xi", {"statistics": "full"})


def test_string_params_are_coerced():
    spec = build_model("eta_theta_xi", {"theta": "0", "xi": "1.5707963267948966"})
    np.testing.assert_allclose(spec.eta, ETA0, atol=1e-15)


@pytest.mark.parametrize("name", ALL)
def test_self_consistency(name):
    spec = build_model(name)
    assert spec.self_consistency_residual() <= 1e-12
    for r in spec.expected_relations:
        assert r.coefficient == pytest.approx(indefinite_form(spec.eta, r.f, r.g), abs=1e-12)


@pytest.mark.parametrize("name", [n for n in ALL if n != "brs"])
def test_expected_relations_hold(name):
    spec = build_model(name)
    checks = check_expected_relations(spec)
    assert checks
    assert max(c.residual for c in checks) <= 1e-10
    assert max(c.zero_residual for c in checks) <= 1e-10


def test_two_field_model():
    spec = two_field_model(1)
    np.testing.assert_array_equal(spec.eta, build_model("froissart", {"pairs": 1}).eta)
    spec2 = two_field_model(2)
    e = np.eye(4)
    assert indefinite_form(spec2.eta, e[0], e[3]) == 0
    assert indefinite_form(spec2.eta, e[0], e[1]) == 1
    assert relations(spec2)["[a(1), b(2)^dag]"] == 0
    assert relations(spec2)["[a(1), b(1)^dag]"] == 1


def test_eta_family_special_points():
    np.testing.assert_allclose(eta_theta_xi(0.3, 0.0), np.diag([1.0, -1.0]), atol=1e-15)
    np.testing.assert_allclose(eta_theta_xi(0.0, np.pi / 2), ETA0, atol=1e-15)


def test_eta_family_determinant(rng):
    for theta, xi in rng.uniform(0, 2 * np.pi, size=(10, 2)):
        assert np.linalg.det(eta_theta_xi(theta, xi)) == pytest.approx(-1.0, abs=1e-14)


def test_eta_family_check():
    r = eta_family_check(0.4, 2.2, N=3)
    assert r.passed
    assert max(r.metric_residuals) <= 1e-14
    assert r.det == pytest.approx(-1.0)


# Feynman decomposition


def test_feynman_decomposition_examples():
    r = feynman_decomposition_check(4)
    assert (0, 0, 0, 0) in r.parity_plus
    assert (1, 0, 0, 0) in r.parity_minus
    assert (2, 0, 0, 0) in r.parity_plus
    assert r.passed


def test_feynman_signs_of_form():
    from kreinfock.fields import FockRepresentation
    from kreinfock.krein import KreinTriplet

    rep = FockRepresentation(KreinTriplet(-MINKOWSKI), "bose", 2)
    G = rep.gamma.matrix
    for label, value in [((0, 0, 0, 0), 1.0), ((1, 0, 0, 0), -1.0), ((2, 0, 0, 0), 1.0), ((1, 1, 0, 0), -1.0)]:
        i = rep.basis.index(label)
        assert G[i, i].real == pytest.approx(value, abs=1e-15)


# BRS


def test_brs_build():
    rep = brs_build(0.0)
    np.testing.assert_array_equal(rep.Q_C, np.diag([0.5j, -0.5j]))
    np.testing.assert_array_equal(rep.U @ rep.U, np.eye(2))
    np.testing.assert_array_equal(rep.U, rep.U.conj().T)
    np.testing.assert_array_equal(rep.Q_B @ rep.Q_B, np.zeros((2, 2)))


@pytest.mark.parametrize("a", [0.0, 1.0, -2.5])
def test_brs_check(a):
    r = brs_check(brs_build(a), tol=1e-15)
    assert r.qb_selfadjoint <= 1e-15 and r.qc_selfadjoint <= 1e-15 and r.qb_nilpotent <= 1e-15
    assert r.null_norm == 0.0
    assert r.decomposition <= 1e-15
    assert r.nondegenerate
    assert r.kernel_cyclic_rank == 1


def test_brs_constant_by_hand():
    a = 0.75
    rep = brs_build(a)
    QcQb = rep.Q_C @ rep.Q_B
    QbQc = rep.Q_B @ rep.Q_C
    assert QcQb[0, 1] == a + 0.5j
    assert QbQc[0, 1] == a - 0.5j
    r = brs_check(rep)
    assert r.measured_constant == 1j
    assert r.measured_constant != STATED_BRS_CONSTANT


def test_catalog_anchors_present():
    for entry in REGISTRY.values():
        assert entry.anchor
