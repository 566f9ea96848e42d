from hankelbound import errata, reference


def test_required_entries_confirmed():
    entries = errata.ledger()
    keys = {e.key for e in entries if e.confirmed}
    assert set(errata.REQUIRED) <= keys
    assert errata.ledger_ok(entries)


def test_entries_carry_evidence():
    for e in errata.ledger():
        assert e.evidence
        js = e.to_json()
        assert js["confirmed"] and js["printed"] and js["computed"]


def test_fixing_the_typo_drops_the_entry(monkeypatch):
    patched = {**reference.PRINTED_COEFFS, "F": {**reference.PRINTED_COEFFS["F"], "a4": reference.CORRECTED_A4_F}}
    monkeypatch.setattr(reference, "PRINTED_COEFFS", patched)
    (a4,) = [e for e in errata.ledger() if e.key == "a4-prefactor"]
    assert not a4.confirmed
    assert not errata.ledger_ok()


def test_cubic_display_drops_the_entry(monkeypatch):
    d = errata.builtin_decomposition(errata.G_CLASS)
    monkeypatch.setattr(reference, "PRINTED_G_BOUND_DISPLAY", d.majorant + d.constant)
    (e,) = [e for e in errata.ledger() if e.key == "c2-square-vs-cube"]
    assert not e.confirmed


def test_critical_point_evidence():
    (e,) = [e for e in errata.ledger() if e.key == "critical-point-0.5-0.75"]
    details = " ".join(ev.detail for ev in e.evidence)
    assert "10701/160" in details
    assert "('1/2', '0')" in details


def test_for_class():
    assert [e.key for e in errata.for_class("G")] == ["c2-square-vs-cube", "critical-point-0.5-0.75",
                                                       "corner-label-x-1"]
