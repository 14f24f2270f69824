import random

import pytest

from graphbank.samples import (
    control_sentence,
    coordination_sentence,
    extraction_sentence,
    extraposition_sentence,
    sample_corpus,
    sample_tagsets,
)


@pytest.fixture
def tagsets():
    return sample_tagsets()


@pytest.fixture
def corpus():
    return sample_corpus()


@pytest.fixture
def extraction(tagsets):
    return extraction_sentence(tagsets)


@pytest.fixture
def extraposition(tagsets):
    return extraposition_sentence(tagsets)


@pytest.fixture
def control(tagsets):
    return control_sentence(tagsets)


@pytest.fixture
def coordination(tagsets):
    return coordination_sentence(tagsets)


@pytest.fixture
def rng():
    return random.Random(0xC0FFEE)
