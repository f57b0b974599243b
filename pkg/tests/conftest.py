"""Shared fixtures: canonical example sets and systems."""

from fractions import Fraction

import pytest

import fracdim as fd


@pytest.fixture(scope="session")
def third_spec():
    return fd.constant_spec(Fraction(1, 3), 40)


@pytest.fixture(scope="session")
def third_system(third_spec):
    return fd.cantor_to_ifs(third_spec)


@pytest.fixture(scope="session")
def c2(third_spec):
    return fd.cantor_prefractal(third_spec, 0, 2)


@pytest.fixture(scope="session")
def c10(third_spec):
    return fd.cantor_prefractal(third_spec, 0, 10)


@pytest.fixture(scope="session")
def block_spec():
    return fd.dyadic_block_spec(1100)


@pytest.fixture(scope="session")
def gap_set():
    return fd.dyadic_gap_points(20)


@pytest.fixture(scope="session")
def unit():
    return fd.unit_interval()
