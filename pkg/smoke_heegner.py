import time
from fractions import Fraction

from heegnercert.elliptic import CurveQ
from heegnercert.quadfield import build_field
from heegnercert.kpoints import ec_mul, kelem
from heegnercert.heegner import (
    heegner_trace, result_from_log, p_divisibility_test, norm_relation_check,
    universal_norm_unit, z_K_construction, nontorsion_certificate,
)

t0 = time.time()
E = CurveQ(0, 0, 1, -1, 0)   # conductor 37
F = build_field(-7)

y = heegner_trace(E, F, 1, 60)
print("trace point:", None if y.point is None else (str(y.point[0]), str(y.point[1])))
print("residual digits:", y.residual_digits, "conj:", y.conj_consistent, "retried:", y.retried)
assert y.point is not None
assert y.residual_digits > 30
assert y.conj_consistent
print(f"[{time.time()-t0:.2f}s] trace ok")

# nontorsion proof
nt = nontorsion_certificate(E, F, y.point)
print("nontorsion:", nt)
assert nt["nontorsion"]

# the trace should be a small multiple of the rank-1 generator (0,0)
G = (kelem(-7, 0), kelem(-7, 0))
hit = None
for n in range(-8, 9):
    if n and ec_mul(E, n, G, -7) == y.point:
        hit = n
        break
print("y_K = n*(0,0) with n =", hit)

# synthetic log round trip: 5*z reconstructs to exactly 5*y_K
r5 = result_from_log(E, F, y.z.mul_int(5), 60, lat=y.lat)
assert r5.point == ec_mul(E, 5, y.point, -7)
print(f"[{time.time()-t0:.2f}s] log round trip ok")

# divisibility: 5*y_K is divisible with exact witness y_K; y_K itself is not
rep = p_divisibility_test(r5, 5)
print("div(5*y_K, 5):", rep.status, "m0:", rep.m0_estimate, "tried:", rep.tried)
assert rep.divisible and rep.exact and rep.witness == y.point
rep0 = p_divisibility_test(y, 5)
print("div(y_K, 5):", rep0.status, "tried:", rep0.tried)
assert not rep0.divisible and rep0.status == "numeric-negative"
print(f"[{time.time()-t0:.2f}s] divisibility ok")

# norm relations at the two smallest admissible primes
for q in (2, 3):
    nr = norm_relation_check(E, F, q, 60, y1=y)
    print(f"q={q}: coeff={nr.coeff} residual_digits={nr.residual_digits:.1f} "
          f"exact={nr.exact_match} passed={nr.passed}")
    assert nr.passed and nr.exact_match
print(f"[{time.time()-t0:.2f}s] norm relations ok")

# local unit criterion at p=5
un = universal_norm_unit(E, F, 5)
print("unit:", un)
assert un["unit"] and un["congruence_ok"]

# D=-3 route: 43a1, good ordinary at 3, all primes of N split in Q(sqrt(-3))
E43 = CurveQ(0, 1, 1, 0, 0)
F3 = build_field(-3)
y43 = heegner_trace(E43, F3, 1, 60)
print("43a/-3 trace:", None if y43.point is None else (str(y43.point[0]), str(y43.point[1])))
zk = z_K_construction(E43, F3, 60, y1=y43)
print("z_K: q =", zk["q"], "coeff =", zk["coefficient"], "checks:", zk["checks"])
assert zk["in_3E"] and zk["checks"]["three_z_is_yK"]
zp = zk["point"]
assert ec_mul(E43, 3, zp, -3) == y43.point
print(f"[{time.time()-t0:.2f}s] z_K construction ok")

print(f"heegner smoke ok {time.time()-t0:.2f} s")
