import random

import pytest

from gcl.acceptance import EXAMPLE_FORMS, EXAMPLE_X, REFERENCE_FORMS
from gcl.forms_geometry import FormFamily


@pytest.fixture
def rng():
    return random.Random(1234)


@pytest.fixture
def example_family():
    return FormFamily(EXAMPLE_FORMS)


@pytest.fixture
def example_x():
    return list(EXAMPLE_X)


@pytest.fixture
def reference_family():
    return FormFamily(REFERENCE_FORMS)
