"""Walk through the bundled fixtures: orbits, exclusions, and three homology routes.

    python3 demos/tour.py
"""

from cvfloer import fixtures
from cvfloer.dynamics import closed_orbits
from cvfloer.floer import ExclusionsViolated, build_floer_complex, check_exclusions
from cvfloer.homology_z2 import betti_cellular
from cvfloer.surgery import morse_boundary, replace_all_orbits
from cvfloer.vector_field import rest_counts


def main():
    for name in fixtures.NAMES:
        v = fixtures.load(name)
        orbits = closed_orbits(v)
        print(f"== {name}: {len(list(v.complex))} cells, rest counts {rest_counts(v)}")
        for o in orbits:
            print(f"   orbit {o.name} index {o.index} length {o.length}{' twisted' if o.twisted else ''}")
        excl = check_exclusions(v, orbits)
        for x in excl.violations:
            print(f"   exclusion {x.kind}: {x.source} -> {x.target}")
        try:
            fc = build_floer_complex(v)
            floer = fc.betti()
            print(f"   floer dims {fc.dims()}")
        except ExclusionsViolated:
            floer = "refused"
        v2, recs = replace_all_orbits(v)
        print(f"   split at {[r.q_up for r in recs]}")
        print(f"   betti  floer {floer}  surgery {morse_boundary(v2).betti()}  cellular {betti_cellular(v.complex)}")


if __name__ == "__main__":
    main()
