"""Seeded random instances for the property-test harness.

Chains are generated so that validity holds by construction: measures are
assigned backward along the chain, each one dominating the pushforward of
its successor (or equal to it in the measure-preserving variant), so no
rejection sampling is needed.  The test suite seeds the generator from the
FH_SEED environment variable.
"""

from __future__ import annotations

import random

from .category import Generator, Quiver
from .exactlinalg import ONE, ZERO, rat
from .filtration import Filtration
from .finprob import FiniteProbSpace, ProbMap
from .nerve import ParamSimplex


def random_positive_rational(rng: random.Random, max_num: int = 12):
    return rat(rng.randint(1, max_num)) / rat(rng.randint(1, max_num))


def random_weights(rng: random.Random, n_atoms: int, allow_null: bool = True):
    """Random rational weights summing to 1, each atom independently
    zeroed with probability 1/4 (at least one atom kept)."""
    raw = [random_positive_rational(rng) for _ in range(n_atoms)]
    if allow_null and n_atoms > 1:
        for i in range(n_atoms):
            if rng.random() < 0.25:
                raw[i] = ZERO
        if not any(raw):
            raw[rng.randrange(n_atoms)] = ONE
    total = sum(raw, ZERO)
    return tuple(w / total for w in raw)


def random_space(rng: random.Random, n_atoms: int,
                 allow_null: bool = True) -> FiniteProbSpace:
    atoms = tuple(f"a{i}" for i in range(n_atoms))
    return FiniteProbSpace(atoms, random_weights(rng, n_atoms, allow_null))


def random_images(rng: random.Random, source_atoms, target_atoms):
    """Uniformly random function between atom sets."""
    return tuple(rng.choice(target_atoms) for _ in source_atoms)


def random_chain(rng: random.Random, k: int, max_atoms: int = 5,
                 measure_preserving: bool = False):
    """Random valid filtration on a linear quiver plus its full simplex.

    Maps are uniform among functions.  Measures run backward from a random
    terminal measure; each earlier one is the mean of the pushforward and
    a fresh random measure, which guarantees null-preservation, or exactly
    the pushforward in the measure-preserving variant.
    """
    if k < 0:
        raise ValueError("chain length must be nonnegative")
    objects = tuple(f"t{i}" for i in range(k + 1))
    gens = tuple(Generator(f"g{i}", objects[i - 1], objects[i])
                 for i in range(1, k + 1))
    quiver = Quiver(objects, gens)

    atom_counts = [rng.randint(1, max_atoms) for _ in range(k + 1)]
    atom_lists = [tuple(f"a{i}" for i in range(c)) for c in atom_counts]
    images = [None] * (k + 1)  # images[ell]: atoms at ell -> atoms at ell-1
    for ell in range(1, k + 1):
        images[ell] = random_images(rng, atom_lists[ell], atom_lists[ell - 1])

    weights = [None] * (k + 1)
    weights[k] = random_weights(rng, atom_counts[k])
    for ell in range(k, 0, -1):
        pushed = {a: ZERO for a in atom_lists[ell - 1]}
        for i, w in enumerate(weights[ell]):
            pushed[images[ell][i]] += w
        pushed_vec = tuple(pushed[a] for a in atom_lists[ell - 1])
        if measure_preserving:
            weights[ell - 1] = pushed_vec
        else:
            fresh = random_weights(rng, atom_counts[ell - 1])
            half = rat(1) / 2
            weights[ell - 1] = tuple(
                half * p + half * f for p, f in zip(pushed_vec, fresh)
            )

    spaces = {
        objects[ell]: FiniteProbSpace(atom_lists[ell], weights[ell])
        for ell in range(k + 1)
    }
    maps = {
        f"g{ell}": ProbMap(spaces[objects[ell]], spaces[objects[ell - 1]],
                           images[ell])
        for ell in range(1, k + 1)
    }
    filtration = Filtration(quiver, spaces, maps)
    if k == 0:
        sigma = ParamSimplex.vertex(objects[0])
    else:
        sigma = ParamSimplex.from_arrow_names(
            quiver, [f"g{ell}" for ell in range(1, k + 1)]
        )
    return filtration, sigma


def random_bijective_loop(rng: random.Random, k: int, n_atoms: int):
    """Cycle filtration whose maps are measure-preserving bijections.

    The last map is chosen as the inverse of the composite of the others,
    which closes the cycle exactly.
    """
    if k < 2:
        raise ValueError("need a cycle of length >= 2")
    objects = tuple(f"t{i}" for i in range(k))
    gens = tuple(
        Generator(f"g{i}", objects[i - 1], objects[i % k])
        for i in range(1, k + 1)
    )
    quiver = Quiver(objects, gens)
    atoms = tuple(f"a{i}" for i in range(n_atoms))

    # permutations images[ell]: position ell atoms -> position ell-1 atoms
    perms = []
    for _ in range(1, k):
        p = list(atoms)
        rng.shuffle(p)
        perms.append(tuple(p))
    composite = list(atoms)
    for p in reversed(perms):
        composite = [p[atoms.index(a)] for a in composite]
    # composite sends the position-(k-1) atom labels through all maps
    inverse = [None] * n_atoms
    for i, a in enumerate(composite):
        inverse[atoms.index(a)] = atoms[i]
    perms.append(tuple(inverse))

    weights = [None] * k
    weights[0] = random_weights(rng, n_atoms, allow_null=False)
    for ell in range(1, k):
        # choose the measure at ell so the map into ell-1 preserves measure
        w = [None] * n_atoms
        for i, a in enumerate(atoms):
            w[i] = weights[ell - 1][atoms.index(perms[ell - 1][i])]
        weights[ell] = tuple(w)

    spaces = {objects[i]: FiniteProbSpace(atoms, weights[i]) for i in range(k)}
    maps = {}
    for ell in range(1, k + 1):
        src_obj = objects[ell % k]
        dst_obj = objects[ell - 1]
        maps[f"g{ell}"] = ProbMap(spaces[src_obj], spaces[dst_obj],
                                  perms[ell - 1])
    filtration = Filtration(quiver, spaces, maps)
    sigma = ParamSimplex.from_arrow_names(
        quiver, [f"g{ell}" for ell in range(1, k + 1)]
    )
    return filtration, sigma
