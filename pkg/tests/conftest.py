import random
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import strategies as st

from g2forge.exterior import AltForm
from g2forge.catalog import Catalog


def rand_fraction(rng: random.Random, span: int = 5) -> Fraction:
    return Fraction(rng.randint(-span, span), rng.randint(1, 3))


def rand_form(rng: random.Random, dim: int, degree: int, density: float = 0.4) -> AltForm:
    terms = {}
    for idx in combinations(range(dim), degree):
        if rng.random() < density:
            terms[idx] = rand_fraction(rng)
    return AltForm(dim, degree, terms)


def rand_vector(rng: random.Random, dim: int) -> list:
    return [rand_fraction(rng) for _ in range(dim)]


fractions = st.fractions(min_value=-4, max_value=4, max_denominator=4)


@st.composite
def forms(draw, dim: int, degree: int):
    idx = list(combinations(range(dim), degree))
    chosen = draw(st.lists(st.sampled_from(idx), max_size=min(len(idx), 6), unique=True)) if idx else []
    return AltForm(dim, degree, {i: draw(fractions) for i in chosen})


@st.composite
def vectors(draw, dim: int):
    return [draw(fractions) for _ in range(dim)]


@pytest.fixture(scope="session")
def catalog():
    return Catalog()
