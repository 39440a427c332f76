from fractions import Fraction

import pytest

from tiltwalls import _kernels
from tiltwalls.lattice import DEFAULT_LATTICE, INTEGRAL_CH2_LATTICE, ChernData, StabilityPoint
from tiltwalls.surd import Surd
from tiltwalls.walls import (
    SearchBox,
    WallLine,
    WallReport,
    default_box,
    enumerate_walls,
    first_wall,
    heart_numeric_ok,
    heart_ok_on_segment,
    segment_in_u,
    wall_between,
)

F = Fraction
N4 = ChernData(0, 4, -8)
N10 = ChernData(0, 10, -50)
BOX = SearchBox(5, 10, 20)


def pushforward(n, h3=1):
    h3 = F(h3)
    return ChernData(0, n * h3, -n * n * h3 / 2)


def test_wall_between_examples():
    assert wall_between(N4, ChernData(1, 0, 0), 1) == WallLine.sloped(-2, 0)
    assert wall_between(N4, ChernData(1, -4, 8), 1) == WallLine.sloped(-2, 0)
    assert wall_between(N4, ChernData(0, 2, -4), 1) is None


def test_wall_between_vertical():
    line = wall_between(ChernData(1, 0, 0), ChernData(2, 0, -3), 1)
    assert line.is_vertical and line.vertical_b == 0
    assert wall_between(ChernData(1, 0, 0), ChernData(0, 0, 1), 1) == WallLine.vertical(0)


def test_wall_line_text_and_json():
    line = WallLine.sloped(F(-5, 2), F(3, 4))
    assert str(line) == "w = -5/2*b + 3/4"
    assert WallLine.from_json(line.to_json()) == line
    vertical = WallLine.vertical(-2)
    assert WallLine.from_json(vertical.to_json()) == vertical
    with pytest.raises(ValueError):
        vertical.height_at(0)


def test_segment_examples():
    seg = segment_in_u(WallLine.sloped(-2, 0))
    assert (seg.b_left, seg.b_right) == (Surd(-4), Surd(0))
    for n in (4, 7, 10):
        seg = segment_in_u(WallLine.sloped(F(-n, 2), 0))
        assert (seg.b_left, seg.b_right) == (Surd(-n), Surd(0))
    assert segment_in_u(WallLine.sloped(-2, -2)) is None
    irrational = segment_in_u(WallLine.sloped(-5, F(-9, 4)))
    assert irrational.b_right == Surd(-5, 1, F(41, 2))


def test_heart_numeric_examples():
    for pt in (StabilityPoint(-2, 5), StabilityPoint(3, 9)):
        assert heart_numeric_ok(pushforward(6, 5), pt, 5)
    assert heart_numeric_ok(ChernData(1, 0, 0), StabilityPoint(-1, 1), 1)
    assert not heart_numeric_ok(ChernData(-1, 4, 0), StabilityPoint(-5, 13), 1)


def test_heart_segment_examples():
    assert heart_ok_on_segment(ChernData(1, 0, 0), segment_in_u(WallLine.sloped(-2, 0)), 1)
    seg = segment_in_u(WallLine.sloped(-5, 0))
    assert not heart_ok_on_segment(ChernData(-2, 10, 0), seg, 1)
    assert not heart_ok_on_segment(ChernData(-1, 9, 0), seg, 1)


def test_enumerate_degree_four():
    walls = enumerate_walls(N4, -2, F(13, 4), 4, BOX, INTEGRAL_CH2_LATTICE, 1)
    assert len(walls) == 1
    (report,) = walls
    assert report.line == WallLine.sloped(-2, 0)
    assert report.height_at_b0 == 4
    assert report.candidate_triples() == [(1, 0, 0)]
    assert report.complements[0].truncation == (-1, 4, -8)
    assert not report.box_saturated


def test_enumerate_degree_ten():
    walls = enumerate_walls(N10, -5, F(91, 4), 25, None, INTEGRAL_CH2_LATTICE, 1)
    assert [w.height_at_b0 for w in walls] == [25, 24, 23]
    assert [w.candidate_triples() for w in walls] == [[(1, 0, 0)], [(1, 0, -1)], [(1, 0, -2)]]
    top = first_wall(N10, -5, F(91, 4), 25, None, INTEGRAL_CH2_LATTICE, 1)
    assert top.line == WallLine.sloped(-5, 0)


def test_window_edges():
    assert enumerate_walls(N4, -2, 5, 4, BOX, INTEGRAL_CH2_LATTICE, 1) == []
    # a window of one height is closed and still valid
    assert len(enumerate_walls(N4, -2, 4, 4, BOX, INTEGRAL_CH2_LATTICE, 1)) == 1
    assert first_wall(N4, -2, F(7, 2), F(15, 4), BOX, INTEGRAL_CH2_LATTICE, 1) is None


def test_enumerate_errors():
    with pytest.raises(ValueError, match="inside U"):
        enumerate_walls(N4, -2, 2, 4, BOX, INTEGRAL_CH2_LATTICE, 1)
    with pytest.raises(ValueError, match="degenerate"):
        enumerate_walls(ChernData(0, 0, 0), -2, 3, 4, BOX)
    with pytest.raises(ValueError, match="lattice"):
        enumerate_walls(ChernData(0, 4, F(-1, 3)), -2, 3, 4, BOX)
    with pytest.raises(ValueError):
        SearchBox(0, 1, 1)


def test_default_box():
    box = default_box(N10, 1)
    assert (box.r_max, box.c1_span, box.c2_span) == (5, 20, 400)
    assert SearchBox.from_json(box.to_json()) == box
    assert box.scaled(4) == SearchBox(20, 80, 1600)


def test_half_integer_lattice_adds_candidates():
    coarse = enumerate_walls(N4, -2, F(13, 4), 4, BOX, INTEGRAL_CH2_LATTICE, 1)
    fine = enumerate_walls(N4, -2, F(13, 4), 4, BOX, DEFAULT_LATTICE, 1)
    coarse_set = {t for w in coarse for t in w.candidate_triples()}
    fine_set = {t for w in fine for t in w.candidate_triples()}
    assert coarse_set < fine_set


@pytest.mark.parametrize("n", range(4, 15))
def test_rank_zero_slope(n):
    h3 = 1 if n % 2 else 5
    wf = F(n * n, 4) - F(1, 2 * h3)
    for report in enumerate_walls(pushforward(n, h3), F(-n, 2), wf, F(n * n, 4), None, INTEGRAL_CH2_LATTICE, h3):
        assert report.line.slope == F(-n, 2)


def test_monotone_refinement():
    small = enumerate_walls(N10, -5, F(91, 4), 25, SearchBox(1, 1, 1), INTEGRAL_CH2_LATTICE, 1)
    large = enumerate_walls(N10, -5, F(91, 4), 25, SearchBox(8, 40, 800), INTEGRAL_CH2_LATTICE, 1)
    big = {(w.line, t) for w in large for t in w.candidate_triples()}
    assert {(w.line, t) for w in small for t in w.candidate_triples()} <= big


def test_saturation_flag_is_sound():
    # a rank cap of 1 puts every candidate on the box boundary
    walls = enumerate_walls(N10, -5, F(91, 4), 25, SearchBox(1, 2, 2), INTEGRAL_CH2_LATTICE, 1)
    assert walls and all(w.box_saturated for w in walls)


def test_report_json_round_trip():
    for report in enumerate_walls(N10, -5, F(91, 4), 25, None, INTEGRAL_CH2_LATTICE, 1):
        data = report.to_json()
        assert WallReport.from_json(data) == report
        assert set(data) >= {"line", "heightAtB0", "segment", "candidates", "complements", "boxSaturated"}


# -- backends -----------------------------------------------------------------

def _problem(v, b0, lo, hi, box, spec=INTEGRAL_CH2_LATTICE, h3=1):
    return _kernels.ScanProblem.build(v.truncation, h3, b0, lo, hi, box.r_max, box.c1_span, box.c2_span,
                                      (spec.d0, spec.d1, spec.d2))


CASES = [
    (N4, -2, F(13, 4), 4, SearchBox(6, 12, 40), INTEGRAL_CH2_LATTICE, 1),
    (N10, -5, F(91, 4), 25, SearchBox(5, 20, 400), DEFAULT_LATTICE, 1),
    (pushforward(12, 5), -6, 36 - F(3, 5), 36, SearchBox(4, 30, 300), INTEGRAL_CH2_LATTICE, 5),
    (ChernData(1, 2, -3), 0, F(1, 3), 5, SearchBox(4, 10, 20), DEFAULT_LATTICE, 2),
]


@pytest.mark.parametrize("case", CASES, ids=range(len(CASES)))
def test_backends_agree(case):
    prob = _problem(*case)
    assert prob.int64_safe
    numpy_out = _kernels._scan_numpy(prob, dtype=_kernels.np.int64)
    assert _kernels._scan_numpy(prob, dtype=object) == numpy_out
    if _kernels.HAS_NUMBA:
        assert _kernels._scan_numba(prob) == numpy_out


def test_overflow_falls_back_to_objects():
    huge = 10 ** 6
    v = ChernData(0, huge, -huge * huge // 2)
    prob = _problem(v, -huge // 2, F(huge * huge, 4) - 1, F(huge * huge, 4), SearchBox(2, 3, 3))
    assert not prob.int64_safe
    assert _kernels.scan(prob, "numba") == _kernels._scan_numpy(prob, dtype=object)


def test_backend_selection(monkeypatch):
    monkeypatch.setenv("TILTWALLS_BACKEND", "numpy")
    assert _kernels.selected_backend() == "numpy"
    assert _kernels.selected_backend("numpy") == "numpy"
    with pytest.raises(ValueError):
        _kernels.selected_backend("cuda")
