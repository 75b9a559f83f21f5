"""Lines satisfying the counting conditions without being a polar space.

Two dual hyperovals in planes of PG(4, q), q even, share a line l; dropping l
leaves 2(q + 1) lines that pass the four projective counts of a rank 2 set
with e = 1, just like the two reguli of Q+(3, q).

Run with ``python3 demos/03_dual_hyperovals.py``.
"""
from polarscope import dual_hyperoval_example, field_make

for h in (1, 2):
    F = field_make(2, h)
    lines, report = dual_hyperoval_example(F, 4)
    print(f"q = {F.q}: {len(lines)} lines")
    for c in report.conditions:
        print(f"  ({c.name}) observed={c.observed} expected={c.expected} passed={c.passed}")
    x = report.extras
    print("  span dimension", x["span_dim"], "| Q+(3,q) spans", x["classical_span_dim"])
    # in a generalised quadrangle no three lines pairwise meet in distinct points
    print("  triangle among the lines:", x["triangle"],
          "| triangle in Q+(3,q):", x["classical_triangle"])
