"""Stable images, the test module at exponent zero, test-element validation."""

import pytest

from cartierlab.cartmod import (
    CartierModuleDescriptor,
    fpure_replacement,
    tau_zero,
    underline,
    validate_test_element,
)
from cartierlab.errors import ValidationError
from cartierlab.frobenius import cartier_image
from cartierlab.ideals import Ideal, ideal_contains, ideal_equal


def descriptor(p, n=1, twist="1", c=None, f_regular=False):
    variables = ("x", "y")[:n]
    return CartierModuleDescriptor.from_strings(
        p, variables, twist=twist, test_element=c, assert_f_regular=f_regular
    )


def test_descriptor_validation():
    with pytest.raises(ValidationError):
        descriptor(5, twist="0")
    with pytest.raises(ValidationError):
        descriptor(5, twist="x", c="0")


def test_descriptor_json_roundtrip():
    module = descriptor(7, 2, twist="y^6", c="y", f_regular=False)
    doc = module.to_json()
    assert doc == {
        "p": 7, "vars": ["x", "y"], "twist": "y^6",
        "test_element": "y", "assert_f_regular": False,
    }
    assert CartierModuleDescriptor.from_json(doc) == module


# -- stable image -------------------------------------------------------------

def test_underline_plain_ring_is_unit():
    for p in (2, 3, 5, 7):
        stable = underline(descriptor(p, 2))
        assert stable.ideal.is_unit()
        assert stable.stabilization_level == 0
        assert stable.certified


@pytest.mark.parametrize("p", [2, 3, 5])
@pytest.mark.parametrize("n", [2, 3])
def test_underline_depth_n_twist(p, n):
    module = descriptor(p, twist=f"x^{n * (p - 1)}")
    stable = underline(module)
    expected = "x" if n == 2 else f"x^{n - 1}"
    assert stable.ideal.basis_strings() == (expected,)


def test_underline_fpure_twist_is_unit():
    for p in (2, 3, 5, 7):
        assert underline(descriptor(p, twist=f"x^{p - 1}")).ideal.is_unit()


def test_underline_is_kappa_fixed_and_idempotent():
    for p in (2, 3, 5):
        module = descriptor(p, twist=f"x^{3 * (p - 1)}")
        stable = underline(module).ideal
        image = cartier_image(module, module.ring.one(), stable, 1)
        assert ideal_equal(image, stable)
        assert fpure_replacement(module).ideal.reduced_basis() == stable.reduced_basis()


# -- test module at zero --------------------------------------------------------

def test_tau_zero_plain_ring():
    assert tau_zero(descriptor(5, 2)).is_unit()


@pytest.mark.parametrize("p", [2, 3, 5])
def test_tau_zero_depth_two_twist(p):
    module = descriptor(p, twist=f"x^{2 * (p - 1)}", c="x")
    assert tau_zero(module).basis_strings() == ("x^2",)


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_tau_zero_shifted_plane(p):
    module = descriptor(p, 2, twist=f"y^{p - 1}", c="y")
    assert tau_zero(module).basis_strings() == ("y",)


def test_tau_zero_requires_some_route():
    module = descriptor(5, twist="x^4")
    with pytest.raises(ValidationError):
        tau_zero(module)


def test_tau_zero_asserted_f_regular_falls_back_to_stable_image():
    module = descriptor(5, twist="x^4", f_regular=True)
    assert tau_zero(module).is_unit()


def test_tau_zero_is_stable_and_inside_stable_image():
    for p in (2, 3, 5):
        module = descriptor(p, twist=f"x^{2 * (p - 1)}", c="x")
        value = tau_zero(module)
        stable = underline(module).ideal
        assert ideal_contains(stable, value)
        image = cartier_image(module, module.ring.one(), value, 1)
        assert ideal_equal(image, value)


# -- test element validation ----------------------------------------------------

def test_validate_test_element_agreement():
    module = descriptor(5, twist="x^4", c="x")
    ring = module.ring
    report = validate_test_element(module, ring.parse("x"), [ring.parse("x^2")])
    assert report.all_agree
    assert report.baseline_ideal.basis_strings() == ("x",)


def test_validate_test_element_rejects_zero():
    module = descriptor(5, twist="x^4", c="x")
    with pytest.raises(ValidationError):
        validate_test_element(module, module.ring.zero(), [])


def test_validate_test_element_f_regular_triples():
    module = CartierModuleDescriptor.from_strings(3, ("x", "y"), test_element="x")
    ring = module.ring
    trials = [ring.parse("x"), ring.parse("y"), ring.parse("x+y")]
    report = validate_test_element(module, ring.parse("x"), trials)
    assert report.all_agree
    assert report.baseline_ideal.is_unit()
