import pytest

from modcount.schemas import CheckRow, VerifyReport
from modcount.services import verify_service
from modcount.services.verify_service import Check


@pytest.mark.parametrize(
    "check",
    [
        verify_service.check_harer_zagier,
        verify_service.check_epsilon_recursion,
        verify_service.check_elsv,
        verify_service.check_conjugation_invariance,
        verify_service.check_vector_partitions,
        verify_service.check_binomial_basis,
        verify_service.check_weil_petersson,
        verify_service.check_chamber,
    ],
)
def test_quick_checks_pass(check):
    passed, detail = check(True, 1)
    assert passed, detail


def test_lattice_count_table_quick():
    passed, detail = verify_service.check_lattice_count_table(True, 1)
    assert passed, detail
    assert detail == "5 rows"


def test_lattice_rows_agree_with_recursion():
    for (g, n), parity, poly in verify_service.lattice_count_rows():
        if (g, n) == (2, 1):
            continue
        b = tuple(p + 2 * (i + 1) for i, p in enumerate(parity))
        assert poly.evaluate(b) == verify_service.moduli_service.n_recursive(g, n, b)


def test_failing_check_becomes_fail_row(monkeypatch):
    def broken(quick, jobs):
        raise RuntimeError("boom")

    checks = (Check("fine", lambda quick, jobs: (True, "ok")), Check("broken", broken))
    monkeypatch.setattr(verify_service, "CHECKS", checks)
    report = verify_service.run_checks(quick=True)
    assert [row.passed for row in report.rows] == [True, False]
    assert report.rows[1].detail == "RuntimeError: boom"
    assert not report.passed


def test_report_passes_only_when_every_row_passes():
    rows = [CheckRow(name="a", passed=True, detail=""), CheckRow(name="b", passed=True, detail="")]
    assert VerifyReport(quick=True, rows=rows).passed
    rows.append(CheckRow(name="c", passed=False, detail="x"))
    assert not VerifyReport(quick=True, rows=rows).passed


@pytest.mark.slow
def test_quick_suite_passes():
    report = verify_service.run_checks(quick=True)
    assert report.passed, [row for row in report.rows if not row.passed]
