import os
import random
from fractions import Fraction

import pytest

from saito_workbench.arrangement import FamilySpec, build_family
from saito_workbench.exact_arith import Polynomial
from saito_workbench.tangent_derivations import build_orthogonal_family

SEED = int(os.environ.get("SAITO_WORKBENCH_SEED", "20080"))


@pytest.fixture
def rng():
    return random.Random(SEED)


def rand_poly(nv, deg, rng, terms=4, coeff_range=3):
    t = {}
    for _ in range(terms):
        m = tuple(rng.randint(0, deg) for _ in range(nv))
        if sum(m) <= deg:
            t[m] = Fraction(rng.randint(-coeff_range, coeff_range))
    return Polynomial(nv, t)


def rand_nonzero_poly(nv, deg, rng, terms=4):
    while True:
        p = rand_poly(nv, deg, rng, terms)
        if not p.is_zero():
            return p


_FAMILY_CACHE = {}


def family(name, n, r=1):
    """Built family with its orthogonal family, cached across tests."""
    key = (name, n, r)
    if key not in _FAMILY_CACHE:
        spec = FamilySpec(name, n, r)
        arr, basis = build_family(spec)
        try:
            fam = build_orthogonal_family(spec)
        except Exception:
            fam = None
        _FAMILY_CACHE[key] = (spec, arr, basis, fam)
    return _FAMILY_CACHE[key]


def dense_rank(rows):
    """Independent oracle: plain Gaussian elimination over the field."""
    rows = [list(r) for r in rows if any(r)]
    if not rows:
        return 0
    ncols = len(rows[0])
    rank = 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][col]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        pr = rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i][col]:
                f = rows[i][col] / pr[col]
                rows[i] = [a - f * b for a, b in zip(rows[i], pr)]
        rank += 1
        if rank == len(rows):
            break
    return rank
