"""Counting points and generators, and slicing a quadric by hyperplanes.

Run with ``python3 demos/01_counting_and_sections.py``.
"""
import numpy as np

from polarscope import classify_hyperplane, polar_space, section_set
from polarscope.polarspace import intersection_spectrum
from polarscope.pseudopolar import dual_points

# %% The parabolic quadric Q(6,2): a polar space of rank 3 with e = 1
P = polar_space("parabolic", 3, 2, 1)
print(P, "form matrix:")
print(P.form.array)

# Closed forms against enumeration
print("points     ", P.expected_points(), "enumerated", P.npoints)
print("generators ", P.expected_generators(), "enumerated", P.ngenerators)
through = {len(t) for t in P.generators_by_point}
print("generators per point", through)

# %% A generator is a plane; look at one
pi = P.generator(0)
print("first generator (RREF basis):", pi.to_rows())

# %% Every hyperplane of PG(6,2) is tangent, or cuts out Q+(5,2) (same rank),
# or cuts out Q-(5,2) (rank drops to 2)
tally = {}
for a in dual_points(6, P.field):
    k = classify_hyperplane(P, a)
    tally[k.tag] = tally.get(k.tag, 0) + 1
print(tally)

# %% The section by x0 = 0: the 30 planes of a hyperbolic quadric
S = section_set(P, [1, 0, 0, 0, 0, 0, 0])
print(len(S), "generators inside the hyperplane")

# Members of S meet a plane of S, and a plane outside S, in characteristic ways
inside = S.members[0]
outside = P.generator(int(S.complement()[0]))
print("spectrum of a member:     ", intersection_spectrum(P, S, inside))
print("spectrum of a non-member: ", intersection_spectrum(P, S, outside))

# %% Coverage: each point of the section lies on 6 members, others on none
print("coverage values", np.unique(S.coverage))
