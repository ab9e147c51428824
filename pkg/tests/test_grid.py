"""Map/scenario parsing and grid geometry."""
import pytest

from anytime_mapf import MapFormatError, parse_map, parse_scenario, random_grid

from conftest import grid_from

MAP_3X3 = "type octile\nheight 3\nwidth 3\nmap\n...\n...\n...\n"


def test_parse_all_open():
    g = parse_map(MAP_3X3)
    assert (g.width, g.height) == (3, 3)
    assert int(g.passable.sum()) == 9


def test_parse_single_obstacle():
    g = parse_map("type octile\nheight 3\nwidth 3\nmap\n...\n.@.\n...\n")
    assert int(g.passable.sum()) == 8
    assert not g.is_passable((1, 1))


def test_terrain_characters():
    g = parse_map("type octile\nheight 1\nwidth 6\nmap\n.G@OTW\n")
    assert [g.is_passable((0, c)) for c in range(6)] == [True, True, False, False, False, False]


def test_missing_rows_reports_line():
    with pytest.raises(MapFormatError) as exc:
        parse_map("type octile\nheight 3\nwidth 3\nmap\n...\n...\n")
    assert "2" in str(exc.value) and "3" in str(exc.value)


@pytest.mark.parametrize(
    "text,line",
    [
        ("type octile\nheight x\nwidth 3\nmap\n...\n", 2),
        ("type octile\nwidth 3\nheight 3\nmap\n...\n", 2),
        ("type octile\nheight 1\nwidth 3\nnotmap\n...\n", 4),
        ("type octile\nheight 1\nwidth 3\nmap\n....\n", 5),
    ],
)
def test_header_and_row_errors(text, line):
    with pytest.raises(MapFormatError) as exc:
        parse_map(text)
    assert exc.value.line == line


def test_trailing_whitespace_ignored():
    g = parse_map("type octile\nheight 2\nwidth 3\nmap\n...  \n...\n\n")
    assert int(g.passable.sum()) == 6


def test_scenario_field_mapping():
    g = parse_map("type octile\nheight 8\nwidth 8\nmap\n" + "........\n" * 8)
    entries = parse_scenario("version 1\n0\tm.map\t8\t8\t1\t2\t3\t4\t6\n", g)
    assert len(entries) == 1
    assert entries[0].start == (2, 1)
    assert entries[0].goal == (4, 3)
    assert entries[0].reference_distance == 6.0


def test_scenario_empty_body():
    g = parse_map(MAP_3X3)
    assert parse_scenario("version 1\n", g) == []


def test_scenario_blocked_start():
    g = parse_map("type octile\nheight 3\nwidth 3\nmap\n...\n.@.\n...\n")
    with pytest.raises(MapFormatError) as exc:
        parse_scenario("version 1\n0\tm\t3\t3\t1\t1\t0\t0\t2\n", g)
    assert exc.value.line == 2


def test_scenario_bad_field_count():
    g = parse_map(MAP_3X3)
    with pytest.raises(MapFormatError):
        parse_scenario("version 1\n0\tm\t3\t3\t0\t0\t1\n", g)


def test_scenario_dimension_mismatch():
    g = parse_map(MAP_3X3)
    with pytest.raises(MapFormatError):
        parse_scenario("version 1\n0\tm\t8\t8\t0\t0\t1\t1\t2\n", g)


def test_neighbors_interior_corner_boxed(open3x3):
    assert len(open3x3.neighbors((1, 1))) == 5
    assert open3x3.neighbors((1, 1))[0] == (1, 1)  # stay first
    assert len(open3x3.neighbors((0, 0))) == 3
    boxed = grid_from([".@.", "@@@", "..."])
    assert boxed.neighbors((0, 0)) == [(0, 0)]


def test_neighbors_requires_passable():
    g = grid_from([".@", ".."])
    with pytest.raises(ValueError):
        g.neighbors((0, 1))


def test_roundtrip_reserialization():
    for seed in range(20):
        g = random_grid(12, 9, 0.3, seed)
        g2 = parse_map(g.to_text())
        assert (g2.passable == g.passable).all()


def test_neighbor_properties_random():
    for seed in range(20):
        g = random_grid(10, 10, 0.25, seed)
        for idx in range(g.num_cells):
            if not g.passable.ravel()[idx]:
                continue
            cell = g.cell(idx)
            nbrs = g.neighbors(cell)
            assert cell in nbrs and nbrs[0] == cell
            assert 1 <= len(nbrs) <= 5
            for other in nbrs[1:]:
                assert cell in g.neighbors(other)  # symmetry of moves
