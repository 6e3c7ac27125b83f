"""Zeta function of a smooth plane cubic in projective mode.

x^3 + 2y^3 + z^3 over F_7 is a genus-1 curve in P^2.  The pipeline works
in projected coordinates internally; the report shows the quadratic
numerator P(T) with |inverse roots| = sqrt(7), and the counts are checked
against enumeration.

Run:  python3 demos/projective_cubic.py
"""

from dworkzeta.pipeline import Problem, compute_zeta, verify_against_oracle

prob = Problem(
    p=7, a=1, hbar=(0, 1), n=3, mode="projective",
    terms=[((3, 0, 0), (1,)), ((0, 3, 0), (2,)), ((0, 0, 3), (1,))],
)
zf = compute_zeta(prob).zeta
print("f = x^3 + 2y^3 + z^3 over F_7, projective mode")
print(f"numerator P(T) : {zf.numerator}")
print(f"denominator    : {zf.denominator}   (= (1-T)(1-7T))")
print(f"point counts   : {zf.point_counts}")
counts = verify_against_oracle(prob, zf, 2)
print(f"enumerated r<=2: {counts}  ->  match: {counts == zf.point_counts[:2]}")
