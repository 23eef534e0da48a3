import functools

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from cauchyquad.recipes import RecipeConfig, run_recipe

settings.register_profile(
    "default", max_examples=40, deadline=None,
    suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@functools.lru_cache(maxsize=None)
def _cached(recipe, items):
    return run_recipe(RecipeConfig(recipe, **dict(items)), write=False)


def recipe_result(recipe, **kwargs):
    """Run a recipe once per session for a given set of options."""
    items = tuple(sorted((k, tuple(v) if isinstance(v, list) else v)
                         for k, v in kwargs.items()))
    return _cached(recipe, items)


@pytest.fixture
def rng():
    return np.random.default_rng(20240531)
