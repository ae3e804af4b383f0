"""End-to-end certification: verdicts, hypothesis records, batch mode."""

import json

import pytest

from heegnercert.certifier import CertificationRequest, batch_certify, certify


@pytest.fixture(scope="module")
def cert_37a_m7_5():
    return certify(CertificationRequest(curve=(0, 0, 1, -1, 0), disc=-7, p=5))


def test_route_49_certified(cert_37a_m7_5):
    cert = cert_37a_m7_5
    assert cert.verdict == "certified"
    assert cert.route == "4.9"
    assert cert.exit_code == 0
    st = {h.id: h.status for h in cert.hypotheses}
    assert st == {"Heeg": "verified",
                  "4.9(a)": "verified",
                  "4.9(b')": "verified",
                  "4.9(c')": "numeric-negative-based",
                  "6.7-irreducibility": "verified",
                  "4.9(d)": "numeric-negative-based"}
    assert cert.conclusions
    layers = {c["layer"] for c in cert.conclusions}
    assert layers        # at least one concluded layer


def test_deterministic_and_round_trip(cert_37a_m7_5):
    blob = cert_37a_m7_5.to_json()
    cert2 = certify(CertificationRequest(curve=(0, 0, 1, -1, 0), disc=-7,
                                         p=5))
    assert cert2.to_json() == blob
    assert json.dumps(json.loads(blob), indent=2, sort_keys=True) == blob


def test_schema_fields(cert_37a_m7_5):
    doc = json.loads(cert_37a_m7_5.to_json())
    assert set(doc) >= {"request", "route", "hypotheses", "conclusions",
                        "diagnostics", "tool", "verdict"}
    assert doc["tool"]["version"]
    assert doc["request"]["curve"] == [0, 0, 1, -1, 0]
    for h in doc["hypotheses"]:
        assert set(h) == {"id", "status", "evidence"}
        assert h["status"] in {"verified", "failed", "assumed",
                               "numeric-negative-based"}
    for c in doc["conclusions"]:
        assert set(c) >= {"layer", "statement", "basis"}


def test_route_48_certified():
    # 3 | (a_3 - eta(3)) on this curve, so the anomalous-route hypotheses
    # apply; the point (0, 0) is provably non-torsion, so (c) is verified.
    cert = certify(CertificationRequest(curve=(1, 1, 1, -2, 0), disc=-7, p=3))
    assert cert.verdict == "certified"
    assert cert.route == "4.8"
    st = {h.id: h.status for h in cert.hypotheses}
    assert st == {"Heeg": "verified",
                  "4.8(a)": "verified",
                  "4.8(b)": "verified",
                  "4.8(c)": "verified",
                  "6.7-irreducibility": "verified",
                  "4.8(d)": "numeric-negative-based"}


def test_route_417_certified_with_guard():
    cert = certify(CertificationRequest(curve=(1, 1, 1, -2, 0), disc=-3, p=3))
    assert cert.verdict == "certified"
    assert cert.route == "4.17/6.10"
    st = {h.id: h.status for h in cert.hypotheses}
    assert st["4.17(c')"] == "numeric-negative-based"
    guard = cert.diagnostics["divisibility_y_K"]
    assert guard["divisible"] is True
    assert "z_K" in cert.diagnostics


def test_b_prime_sole_failure_on_43a():
    cert = certify(CertificationRequest(curve=(0, 1, 1, 0, 0), disc=-3, p=3))
    assert cert.verdict == "not-certified"
    st = {h.id: h.status for h in cert.hypotheses}
    failed = [h for h, s in st.items() if s == "failed"]
    assert failed == ["4.17(b')"]
    rec = next(h for h in cert.hypotheses if h.id == "4.17(b')")
    assert rec.evidence["failed_factors"] == ["a_p - 1"]


def test_heegner_condition_failure():
    cert = certify(CertificationRequest(curve=(0, 0, 1, -1, 0), disc=-8, p=5))
    assert cert.verdict == "not-certified"
    assert cert.exit_code == 2
    assert cert.hypothesis("Heeg").status == "failed"


def test_supersingular_prime_fails_b_prime():
    cert = certify(CertificationRequest(curve=(0, 0, 1, -1, 0), disc=-7, p=3))
    assert cert.verdict == "not-certified"
    st = {h.id: h.status for h in cert.hypotheses}
    failed = sorted(h for h, s in st.items() if s == "failed")
    assert failed == ["4.9(b')"]


def test_request_validation():
    with pytest.raises(ValueError):
        CertificationRequest(curve=(0, 0, 1, -1, 0), disc=-7, p=4)
    with pytest.raises(ValueError):
        CertificationRequest(curve=(0, 0, 1, -1, 0), disc=5, p=5)
    with pytest.raises(ValueError):
        CertificationRequest(curve=(0, 0, 1, -1, 0), disc=-7, p=5, prec=10)


def test_assert_flag_not_needed_when_derivable():
    cert = certify(CertificationRequest(curve=(0, 0, 1, -1, 0), disc=-7, p=5,
                                        assert_rank_one_sha_trivial=True))
    st = {h.id: h.status for h in cert.hypotheses}
    assert st["4.9(d)"] == "numeric-negative-based"
    assert cert.verdict == "certified"


def test_batch_csv(tmp_path):
    csv = tmp_path / "batch.csv"
    csv.write_text("label,a1,a2,a3,a4,a6,disc,prime\n"
                   "37a,0,0,1,-1,0,-7,5\n"
                   "bad,0,0,1,-1,0,-8,5\n"
                   "oops,0,0,1,-1,0,-7,not_a_prime\n")
    out = tmp_path / "certs"
    summary = batch_certify(str(csv), str(out))
    assert summary["rows"] == 3
    assert summary["certified"] == 1
    assert summary["not_certified"] == 1
    assert summary["errors"] == 1
    assert (out / "37a.json").exists()
    doc = json.loads((out / "37a.json").read_text())
    assert doc["verdict"] == "certified"


def test_batch_missing_columns_become_row_errors(tmp_path):
    csv = tmp_path / "bad.csv"
    csv.write_text("a1,a2,a3\n0,0,1\n")
    summary = batch_certify(str(csv), str(tmp_path / "out"))
    assert summary["rows"] == 1 and summary["errors"] == 1
    assert "missing column" in summary["results"][0]["error"]
