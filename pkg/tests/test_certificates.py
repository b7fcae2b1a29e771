from fractions import Fraction

import pytest

from src.core.harbourne.certificates import (
    CertificateDatabase,
    general_position,
    generated_certificates,
    named_certificates,
    pencil,
)
from src.core.harbourne.criteria import Mode, hirzebruch_filter, multiplicity_sum_filter, parity_profile_filter, two_pencils_filter
from src.core.harbourne.errors import CertificateError
from src.core.harbourne.geometry import certificate_configuration, harbourne_value
from src.core.harbourne.tspace import check_combinatorial_identity

from .factories import tv

LABELS = [c.label for c in generated_certificates() + named_certificates()]


@pytest.mark.parametrize(
    "label, d, counts, value",
    [
        ("fano-f2", 7, (0, 7), Fraction(-2)),
        ("dual-hesse-eisenstein", 9, (0, 12), Fraction(-9, 4)),
        ("pg23-minus-pencil4", 9, (0, 12), Fraction(-9, 4)),
        ("dual-hesse-plus-line", 10, (3, 10, 2), Fraction(-34, 15)),
        ("pg23-minus-pencil3", 10, (0, 9, 3), Fraction(-29, 12)),
        ("quadrilateral-6", 6, (3, 4), Fraction(-12, 7)),
        ("quadrilateral-7", 7, (3, 6), Fraction(-17, 9)),
        ("d8-t4-config", 8, (4, 6, 1), Fraction(-2)),
        ("dual-hesse-minus-line", 8, (4, 8), Fraction(-2)),
        ("quadrilateral-minus-line-5", 5, (4, 2), Fraction(-3, 2)),
        ("pencil3-plus-two-5", 5, (7, 1), Fraction(-3, 2)),
    ],
)
def test_named_entries(db, label, d, counts, value):
    report = db.get(label).report
    assert report.tvector == tv(d, *counts)
    assert report.value.value == value


@pytest.mark.parametrize("d", range(2, 11))
def test_generators(db, d):
    general = db.get(f"general-{d}").report
    assert general.value.value == -2 + Fraction(2, d - 1)
    assert general.s == d * (d - 1) // 2
    assert db.get(f"pencil-{d}").report.value.value == 0
    assert harbourne_value(general_position(d)) == general.value.value
    assert pencil(d).s == 1


def test_general_position_six(db):
    assert db.get("general-6").report.value.value == Fraction(-8, 5)


def test_field_tags(db):
    assert db.get("fano-f2").report.field.tag == "F2"
    assert db.get("pg23-minus-pencil3").report.field.tag == "F3"
    assert db.get("dual-hesse-plus-line").report.field.tag == "Q(w)"
    assert db.get("quadrilateral-6").report.field.tag == "Q"


@pytest.mark.parametrize("label", LABELS)
class TestEveryEntry:
    def test_pair_count(self, db, label):
        assert check_combinatorial_identity(db.get(label).report.tvector)

    def test_every_line_meets_the_others_once(self, db, label):
        config = certificate_configuration(db.get(label).certificate)
        partition = config.clique_partition()
        for line in range(config.d):
            assert sum(m - 1 for m in partition.line_profile(line)) == config.d - 1

    def test_necessary_conditions_hold(self, db, label):
        t = db.get(label).report.tvector
        assert not multiplicity_sum_filter(t).excluded
        assert not two_pencils_filter(t).excluded
        assert not parity_profile_filter(t).excluded

    def test_hirzebruch_holds_in_characteristic_zero(self, db, label):
        entry = db.get(label)
        t = entry.report.tvector
        if entry.characteristic == 0 and t.d >= 3 and t.t(t.d) == 0 and t.t(t.d - 1) == 0:
            assert not hirzebruch_filter(t).excluded


class TestDatabase:
    def test_size(self, db):
        assert len(db) == len(LABELS) == 29
        assert "fano-f2" in db

    def test_lookup_absolute(self, db, dual_hesse_t):
        assert [e.label for e in db.lookup(dual_hesse_t, Mode.ABSOLUTE)] == ["pg23-minus-pencil4", "dual-hesse-eisenstein"]

    def test_lookup_complex_keeps_characteristic_zero(self, db, dual_hesse_t, fano_t):
        assert [e.label for e in db.lookup(dual_hesse_t, Mode.COMPLEX)] == ["dual-hesse-eisenstein"]
        assert db.lookup(fano_t, Mode.COMPLEX) == []
        assert [e.label for e in db.lookup(fano_t)] == ["fano-f2"]

    def test_duplicate_label(self):
        fresh = CertificateDatabase()
        fresh.add(named_certificates()[0])
        with pytest.raises(ValueError):
            fresh.add(named_certificates()[0])

    def test_wrong_claim_is_refused(self):
        cert = named_certificates()[0]
        cert.claimed_tvector = "15,0,0,0,0"
        with pytest.raises(CertificateError):
            CertificateDatabase().add(cert)
