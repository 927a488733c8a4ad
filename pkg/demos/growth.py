"""Compact minimum over non-compact minimum, against (r-1)!."""
import math

from arithvol.bounds import growth_ratio


def main():
    for n in range(5, 60, 4):
        r = (n + 1) // 2
        q = growth_ratio(n)
        print(f"n={n:>2}  log10 Q = {q.log10:9.3f}   log10 (r-1)! = "
              f"{math.lgamma(r) / math.log(10):7.3f}")


if __name__ == "__main__":
    main()
