"""Recover the trace of Frobenius a_q of an elliptic curve.

The affine curve y^2 = x^3 + a x + b over F_p is fed to the pipeline in
affine mode as f = x^3 + a x + b - y^2.  The zeta numerator comes out as
1 - a_q T + q T^2, and a_q is cross-checked against an exhaustive count of
the projective curve.

Run:  python3 demos/elliptic_aq.py
"""

from dworkzeta.oracle import count_points
from dworkzeta.pipeline import Problem, compute_zeta

p, aa, bb = 13, 2, 6

prob = Problem(
    p=p, a=1, hbar=(0, 1), n=2, mode="affine",
    terms=[((3, 0), (1,)),        # x^3
           ((1, 0), (aa,)),       # a x
           ((0, 0), (bb,)),       # b
           ((0, 2), (p - 1,))],   # -y^2
)
zf = compute_zeta(prob).zeta
print(f"curve: y^2 = x^3 + {aa}x + {bb} over F_{p}")
print(f"zeta numerator   : {zf.numerator}   (1 - a_q T + q T^2)")
print(f"zeta denominator : {zf.denominator}")
a_q = -zf.numerator[1]
print(f"a_q = {a_q}, so #E(F_{p}) = {p + 1 - a_q}")

# independent check: count the projective curve by brute force
proj = [((3, 0, 0), (1,)), ((1, 0, 2), (aa,)),
        ((0, 0, 3), (bb,)), ((0, 2, 1), (p - 1,))]
n1 = count_points(p, 1, (0, 1), proj, "projective", 1)
print(f"enumerated #E(F_{p}) = {n1}  ->  match: {n1 == p + 1 - a_q}")
