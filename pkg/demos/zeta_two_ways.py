"""zeta_k(2) for k = Q(sqrt 5) by an Euler product and by Hurwitz character sums.

The Euler product is cut at a prime limit chosen from an explicit tail bound,
so its enclosure widens as the tolerance is relaxed.  The character sum is
accurate to a few ulps.
"""
import math

from arithvol.fields import builtin_table
from arithvol.lfun import dedekind_zeta, euler_product


def main():
    k0 = builtin_table()["k0"]
    exact = 2 * math.pi ** 4 / (75 * math.sqrt(5))
    c = dedekind_zeta(k0, 2, strategy="character")
    print(f"closed form     {exact:.12f}")
    print(f"character sums  {c.value:.12f}  rel err <= {c.rel_err:.1e}")
    for tol in (1e-4, 1e-6, 1e-8):
        e = euler_product(k0, 2, tol)
        lo, hi = e.interval()
        print(f"Euler, tol {tol:.0e}  [{lo:.12f}, {hi:.12f}]  overlaps: {e.agrees_with(c)}")


if __name__ == "__main__":
    main()
