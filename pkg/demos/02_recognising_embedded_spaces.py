"""Telling embedded polar spaces apart from arbitrary generator sets.

Run with ``python3 demos/02_recognising_embedded_spaces.py``.
"""
import numpy as np

from polarscope import (
    GeneratorSet,
    check_alt,
    check_pseudopolar,
    check_strong_pseudopolar,
    equivalence_harness,
    polar_space,
    section_set,
    verify_embedded,
)


def show(report):
    print(f"  {report.definition:7s} passed={report.passed}")
    for c in report.conditions:
        print(f"    ({c.name}) observed={c.observed} expected={c.expected}"
              + ("  [vacuous]" if c.vacuous else ""))


P = polar_space("parabolic", 3, 2, 1)
S = section_set(P, [1, 0, 0, 0, 0, 0, 0])

# %% A hyperplane section passes every checker
print("section of", P.name)
for check in (check_strong_pseudopolar, check_pseudopolar, check_alt):
    show(check(P, S))

v = verify_embedded(P, S)
print("embedded polar space:", v.is_polar_space, "rank", v.rank, "e-1 =", v.param_half / 2)
print("  |O| =", v.point_count, " |E| per member =", v.e_counts)

# %% Random 30-subsets of the 135 planes fail
rng = np.random.default_rng(0)
R = GeneratorSet(P, indices=rng.choice(P.ngenerators, 30, replace=False))
print("random subset")
show(check_pseudopolar(P, R))
print("  embedded:", verify_embedded(P, R).is_polar_space)

# %% Replacing one member by an outside plane is already enough to break it
T = GeneratorSet(P, indices=np.append(S.indices[1:], S.complement()[0]))
print("one swap:", check_pseudopolar(P, T).failed)

# %% The whole harness on W(5,2): the hyperbolic quadric inside the symplectic space
W = polar_space("symplectic", 3, 2, 1)
summary = equivalence_harness(W, samples=20, seed=1)
print(W.name, "harness passed:", summary.passed,
      "| negatives rejected:", sum(n.rejected for n in summary.negatives), "/ 20")
