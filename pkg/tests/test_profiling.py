from __future__ import annotations

from levyrange.utils.profiling import profile_section


def test_profile_section_records_elapsed_ms() -> None:
    timings: dict[str, float] = {}
    with profile_section("increments", timings):
        sum(range(1000))

    assert set(timings) == {"increments"}
    assert timings["increments"] >= 0.0


def test_profile_section_accumulates_repeated_sections() -> None:
    timings = {"increments": 5.0}
    with profile_section("increments", timings):
        pass

    assert timings["increments"] >= 5.0


def test_profile_section_without_store_is_a_no_op() -> None:
    with profile_section("increments", None) as section:
        assert section is None


def test_profile_section_records_on_exception() -> None:
    timings: dict[str, float] = {}
    try:
        with profile_section("fails", timings):
            raise RuntimeError("boom")
    except RuntimeError:
        pass

    assert "fails" in timings
