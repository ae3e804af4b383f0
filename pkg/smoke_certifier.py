"""Scratch smoke test for certifier.py (absorbed into tests/ later)."""
import json
import time

from heegnercert.certifier import CertificationRequest, certify, batch_certify

t0 = time.time()

# 1. (37a, -7, 5): expect certified, route 4.9.
req = CertificationRequest(curve=(0, 0, 1, -1, 0), disc=-7, p=5)
cert = certify(req)
print("== 37a / -7 / 5 ==")
print("verdict:", cert.verdict, "route:", cert.route, "exit:", cert.exit_code)
for h in cert.hypotheses:
    print("  ", h.id, "->", h.status)
assert cert.verdict == "certified", cert.to_json()
assert cert.route == "4.9"
assert cert.exit_code == 0
st = {h.id: h.status for h in cert.hypotheses}
assert st["Heeg"] == "verified"
assert st["4.9(a)"] == "verified"
assert st["4.9(b')"] == "verified"
assert st["4.9(c')"] == "numeric-negative-based"
assert st["6.7-irreducibility"] == "verified"
assert st["4.9(d)"] == "numeric-negative-based"
assert cert.conclusions, "expected nonempty conclusions"

# Determinism: byte-identical serialization across two fresh runs.
cert2 = certify(CertificationRequest(curve=(0, 0, 1, -1, 0), disc=-7, p=5))
assert cert.to_json() == cert2.to_json(), "non-deterministic certificate"
print("byte-identical rerun: ok")

# Round trip parse -> serialize.
blob = cert.to_json()
assert json.dumps(json.loads(blob), indent=2, sort_keys=True) == blob
print("round-trip: ok")

# 2. (79a, -3, 3): expect certified, route 4.17/6.10.
req3 = CertificationRequest(curve=(1, 1, 1, -2, 0), disc=-3, p=3)
cert3 = certify(req3)
print("== 79a / -3 / 3 ==")
print("verdict:", cert3.verdict, "route:", cert3.route)
for h in cert3.hypotheses:
    print("  ", h.id, "->", h.status)
print("  guard (y_K in 3E):",
      cert3.diagnostics.get("divisibility_y_K", {}).get("status"))
assert cert3.verdict == "certified", cert3.to_json()
assert cert3.route == "4.17/6.10"
st3 = {h.id: h.status for h in cert3.hypotheses}
assert st3["4.17(c')"] == "numeric-negative-based"
guard = cert3.diagnostics["divisibility_y_K"]
assert guard["divisible"] is True, guard   # forced divisibility when p = u_K
assert "z_K" in cert3.diagnostics

# 2b. (43a, -3, 3): a_3 = -2 so 3 | (a_3 - 1): exactly (b') fails.
certc = certify(CertificationRequest(curve=(0, 1, 1, 0, 0), disc=-3, p=3))
stc = {h.id: h.status for h in certc.hypotheses}
print("== 43a / -3 / 3 ==", certc.verdict,
      "failed:", sorted(h for h, s in stc.items() if s == "failed"))
assert certc.verdict == "not-certified"
bad = [h for h, s in stc.items() if s == "failed"]
assert bad == ["4.17(b')"], bad
rec = next(h for h in certc.hypotheses if h.id == "4.17(b')")
assert rec.evidence["failed_factors"] == ["a_p - 1"]

# 3. Flip: (37a, -8, 5) -> Heegner condition fails (2 ramifies? 37 inert?).
certf = certify(CertificationRequest(curve=(0, 0, 1, -1, 0), disc=-8, p=5))
print("== 37a / -8 / 5 ==", certf.verdict, certf.route)
stf = {h.id: h.status for h in certf.hypotheses}
print("  Heeg:", stf.get("Heeg"))
assert certf.verdict == "not-certified"
assert certf.exit_code == 2

# 4. Flip: (37a, -7, 3): a_3 = -3 so p | a_p -> (b') fails, only that one.
certb = certify(CertificationRequest(curve=(0, 0, 1, -1, 0), disc=-7, p=3))
print("== 37a / -7 / 3 ==", certb.verdict, certb.route)
for h in certb.hypotheses:
    print("  ", h.id, "->", h.status)
stb = {h.id: h.status for h in certb.hypotheses}
failed = sorted(hid for hid, s in stb.items() if s == "failed")
print("  failed:", failed)
assert certb.verdict == "not-certified"

# 5. assumed path: assert flag turns (d) into assumed -> partially-certified
#    only when (d) could not be derived. On 37a/-7/5 (d) derives numerically,
#    so the flag should leave it numeric-negative-based and verdict certified.
certa = certify(CertificationRequest(curve=(0, 0, 1, -1, 0), disc=-7, p=5,
                                     assert_rank_one_sha_trivial=True))
sta = {h.id: h.status for h in certa.hypotheses}
print("== 37a / -7 / 5 + assert ==", certa.verdict, "(d):", sta["4.9(d)"])

# 6. Batch on a tiny CSV.
import os
os.makedirs("/tmp/certs", exist_ok=True)
with open("/tmp/batch.csv", "w") as fh:
    fh.write("label,a1,a2,a3,a4,a6,disc,prime\n")
    fh.write("37a,0,0,1,-1,0,-7,5\n")
    fh.write("bad,0,0,1,-1,0,-8,5\n")
    fh.write("oops,0,0,1,-1,0,-7,not_a_prime\n")
summary = batch_certify("/tmp/batch.csv", "/tmp/certs")
print("== batch ==")
print(json.dumps({k: v for k, v in summary.items() if k != "results"},
                 indent=2, sort_keys=True))
for r in summary["results"]:
    print("  row", r["row"], r.get("label"), r.get("verdict") or r.get("error"))
assert summary["rows"] == 3
assert summary["certified"] == 1
assert summary["errors"] == 1
assert os.path.exists("/tmp/certs/37a.json")

print(f"certifier smoke ok {time.time() - t0:.2f} s")
