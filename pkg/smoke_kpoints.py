import time
from fractions import Fraction

from heegnercert.elliptic import CurveQ
from heegnercert.kpoints import KElem, kelem, on_curve, ec_neg, ec_add, ec_mul, point_conj, embed_point

t0 = time.time()
D = -7

# field arithmetic
a = kelem(D, Fraction(3, 2), Fraction(-1, 3))
b = kelem(D, 2, 5)
assert (a * b / b - a).is_zero()
assert (a * a.conj() - kelem(D, a.norm())).is_zero()
assert a.trace() == Fraction(3)
print("field ops ok")

# rational points on 37a, exact group law
E37 = CurveQ(0, 0, 1, -1, 0)
P = (kelem(D, 0), kelem(D, 0))
assert on_curve(E37, P, D)
mult = {1: (0, 0), 2: (1, 0), 3: (-1, -1), 4: (2, -3), 6: (6, 14)}
for n, (xu, yu) in mult.items():
    Q = ec_mul(E37, n, P, D)
    assert Q is not None and Q[0].u == xu and Q[1].u == yu and Q[0].v == 0, (n, Q)
    assert on_curve(E37, Q, D)
Q5 = ec_mul(E37, 5, P, D)
assert on_curve(E37, Q5, D) and Q5[0].u == Fraction(1, 4) and Q5[1].u == Fraction(-5, 8)
# associativity spot check and inverses
A, B, C = ec_mul(E37, 2, P, D), ec_mul(E37, 3, P, D), ec_mul(E37, 5, P, D)
assert ec_add(E37, ec_add(E37, A, B, D), C, D) == ec_add(E37, A, ec_add(E37, B, C, D), D)
assert ec_add(E37, A, ec_neg(E37, A, D), D) is None
assert ec_mul(E37, -3, P, D) == ec_neg(E37, B, D)
print("37a group law ok")

# 2-torsion branch: y^2 = x^3 - x
E32 = CurveQ(0, 0, 0, -1, 0)
for xu in (0, 1, -1):
    T = (kelem(D, xu), kelem(D, 0))
    assert on_curve(E32, T, D)
    assert ec_mul(E32, 2, T, D) is None
T1 = (kelem(D, 0), kelem(D, 0))
T2 = (kelem(D, 1), kelem(D, 0))
T3 = ec_add(E32, T1, T2, D)
assert T3 == (kelem(D, -1), kelem(D, 0))
print("2-torsion ok")

# genuinely quadratic point on y^2 = x^3 + 1: (-2, sqrt(-7))
E36 = CurveQ(0, 0, 0, 0, 1)
Pq = (kelem(D, -2), kelem(D, 0, 1))
assert on_curve(E36, Pq, D)
assert point_conj(Pq) == ec_neg(E36, Pq, D)  # trace is O
for n in (2, 3, 5, 9):
    Qn = ec_mul(E36, n, Pq, D)
    assert on_curve(E36, Qn, D)
    assert point_conj(Qn) == ec_mul(E36, n, point_conj(Pq), D)
Q2 = ec_mul(E36, 2, Pq, D)
assert Q2[0].v != 0 or Q2[1].v != 0  # stays irrational
print("quadratic point ok")

# embedding
emb = embed_point(Pq, 200)
ex, ey = emb
assert abs(float(ex.re) + 2) < 1e-30 and abs(float(ex.im)) < 1e-30
assert abs(float(ey.im) - 7 ** 0.5) < 1e-12
# curve equation numerically
from heegnercert.bigfloat import BigComplex
lhs = ey * ey
rhs = ex * ex * ex + BigComplex.one(200)
assert float((lhs - rhs).abs()) < 1e-30
print("embed ok")
print(f"kpoints smoke ok {time.time() - t0:.2f} s")
