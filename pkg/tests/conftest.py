import random
from fractions import Fraction

import pytest

from mldeg.models import golden_spec_paths, load_spec, model_from_spec

GOLDEN = {p.stem: p for p in golden_spec_paths()}


def golden(name: str, seed: int = 0):
    return model_from_spec(load_spec(GOLDEN[name]), seed=seed)


def positive_data(n: int, seed: int, hi: int = 100) -> list[Fraction]:
    rng = random.Random(f"data:{seed}")
    return [Fraction(rng.randint(1, hi)) for _ in range(n)]


@pytest.fixture(scope="session")
def four_cycle():
    return golden("binary_4cycle")


def random_model(seed: int, max_d: int = 3, max_n: int = 12, scale_hi: int = 5):
    """Seeded random model with ``d <= max_d`` and ``n <= max_n`` columns,
    points drawn from a small box, scalings from ``1..scale_hi``."""
    from mldeg.lattice_core import affine_rank
    from mldeg.models import model_from_points

    rng = random.Random(f"model:{seed}")
    while True:
        d = rng.randint(1, max_d)
        box = [tuple(rng.randint(0, 2) for _ in range(d)) for _ in range(40)]
        pts = sorted(set(box))
        rng.shuffle(pts)
        pts = pts[:rng.randint(d + 1, max_n)]
        if affine_rank(pts) == d:
            c = [rng.randint(1, scale_hi) for _ in pts]
            return model_from_points(pts, c, f"random model {seed}")
