"""Measure where the Floer boundary disagrees with cellular homology on random fields.

Prints failure counts for the two random generators, the smallest failing
field of each kind, and how often the two ways of counting lower-family
classes disagree.

    python3 demos/limits.py [--fields N] [--seed S]
"""

import argparse
import collections
import itertools
import random

from cvfloer.dynamics import closed_orbits
from cvfloer.floer import (
    DSquaredNonzero,
    EmptyVP,
    RelationUndefined,
    build_floer_complex,
    check_exclusions,
    svp_lower_classes_direct,
    svp_upper_classes,
)
from cvfloer.homology_z2 import betti_cellular
from cvfloer.random_fields import planted_cycle_field, planted_pair_field, random_complex, random_field


def survey(make, seed, n):
    rng = random.Random(seed)
    st = collections.Counter()
    smallest = {}
    for i in range(n):
        cx = random_complex(rng)
        v = make(i, rng, cx)
        orbits = closed_orbits(v)
        if not check_exclusions(v, orbits).ok:
            continue
        st["admissible"] += 1
        st["with orbits"] += bool(orbits)
        try:
            kind = None if build_floer_complex(v).betti() == betti_cellular(cx) else "betti"
        except DSquaredNonzero:
            kind = "d2"
        if kind:
            st[kind] += 1
            if kind not in smallest or len(list(cx)) < len(list(smallest[kind].complex)):
                smallest[kind] = v
    return st, smallest


def lower_relation(seed, n):
    st = collections.Counter()
    for mc, mv in [(30, 7), (40, 8), (60, 9)]:
        rng = random.Random(seed)
        for _ in range(n):
            cx = random_complex(rng, max_cells=mc, max_vertices=mv)
            v = planted_pair_field(rng, cx)
            orbits = closed_orbits(v)
            if not check_exclusions(v, orbits).ok:
                continue
            for a, b in itertools.permutations(orbits, 2):
                if a.index != b.index + 1:
                    continue
                try:
                    st["agree" if svp_upper_classes(v, a, b) == svp_lower_classes_direct(v, a, b) else "disagree"] += 1
                except EmptyVP:
                    pass
                except RelationUndefined:
                    st["undefined"] += 1
    return st


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--fields", type=int, default=1500)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    gens = {
        "mixed": lambda i, rng, cx: (planted_cycle_field if i % 2 else random_field)(rng, cx),
        "two orbits": lambda i, rng, cx: planted_pair_field(rng, cx),
    }
    for label, make in gens.items():
        st, smallest = survey(make, args.seed, args.fields)
        print(f"{label}: {dict(st)}")
        for kind, v in smallest.items():
            print(f"-- smallest {kind} failure --")
            print(v.to_text())
    print("lower classes, upper count vs direct count:", dict(lower_relation(args.seed, args.fields // 3)))


if __name__ == "__main__":
    main()
