"""Emit one JSON document covering a representative run of each acceptance check.

Run twice under different hash seeds; the outputs must match byte for byte.
"""
import json
import random
import sys
from fractions import Fraction

from tiltwalls import bg, nl, p3
from tiltwalls.lattice import INTEGRAL_CH2_LATTICE, ChernData, StabilityPoint, format_rational, nu, twist
from tiltwalls.walls import SearchBox, enumerate_walls, wall_between


def bundle() -> dict:
    out = {}
    out["modeII"] = nl.sweep_csv([nl.first_wall_analysis(nl.NlInput(n, h, l2, "ii"))
                                  for n, h, l2 in [(10, 1, -15), (12, 5, Fraction(-19, 2)), (14, 5, 0)]])
    out["modeI"] = nl.sweep_csv([nl.first_wall_analysis(nl.NlInput(n, h, nl.mode_l2_floor("i", n), "i"))
                                 for n in (4, 9, 12) for h in (1, 5)])
    out["walls"] = [w.to_json() for w in enumerate_walls(
        ChernData(0, 4, -8), -2, Fraction(13, 4), 4, SearchBox(20, 32, 256), INTEGRAL_CH2_LATTICE, 1)]
    v = nl.pushforward_class(nl.NlInput(6, 5, -3, "i"))
    out["bg"] = [bg.bg_check(v, StabilityPoint(-3, w), 5).to_json()
                 for w in (Fraction(43, 5), 9, Fraction(91, 10))]
    out["params"] = [bg.verify_bg_params("BG1", 4, 5).to_json(),
                     bg.verify_bg_params("BG2-rank-one", None, 5, -2).to_json()]
    out["exclusion"] = [nl.exclusion_chain(10, 1, -15, c).to_json() for c in (-1, -2)]
    out["bounds"] = [format_rational(nl.theorem_bound("B", n)) for n in range(10, 15)]
    out["appendix"] = p3.appendix_csv(p3.appendix_rows(range(5, 51)))
    rng = random.Random(7)
    props = []
    for _ in range(50):
        a = ChernData(rng.randint(-3, 3), rng.randint(-9, 9), Fraction(rng.randint(-20, 20), 2))
        b = ChernData(rng.randint(1, 3), rng.randint(-9, 9), Fraction(rng.randint(-20, 20), 2))
        line = wall_between(a, b, 1) if a.truncation != (0, 0, 0) else None
        props.append(str(line) if line else "-")
        props.append(str(twist(a, Fraction(rng.randint(-9, 9), 4), 1)))
        props.append(str(nu(a, StabilityPoint(0, 1), 1)))
    out["properties"] = props
    return out


if __name__ == "__main__":
    sys.stdout.write(json.dumps(bundle(), indent=1, sort_keys=True) + "\n")
