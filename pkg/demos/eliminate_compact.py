"""Why (Q(sqrt 5), l0) carries the smallest compact 5-orbifold.

Walk the elimination for rank 3: degree cutoffs on D_k, then cutoffs on D_l
for each surviving k, then the refinements that use class numbers, ramified
places and the image of the units.
"""
import sys

from arithvol.search import Options, eliminate


def main(r=3):
    rep = eliminate("compact-odd", r)
    sys.stdout.write(rep.to_text())
    # the unit refinement is what separates the three quartic candidates
    loose = eliminate("compact-odd", r, options=Options(units=False))
    print()
    print("without the unit refinement:", ", ".join(map(str, loose.survivors)))


if __name__ == "__main__":
    main(int(sys.argv[1]) if len(sys.argv) > 1 else 3)
