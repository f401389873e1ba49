import json

import numpy as np
import pytest

from pbif_homology.bifurcation import BifurcationPlot
from pbif_homology.config import VERSION
from pbif_homology.cubical import BettiVector, PersistenceDiagram
from pbif_homology.errors import FormatError
from pbif_homology.simplicial import PointCloud
from pbif_homology.store import (
    load_json,
    metadata_path,
    read_diagram,
    read_errors,
    read_grid,
    read_plot,
    read_points,
    write_betti,
    write_diagram,
    write_errors,
    write_grid,
    write_metadata,
    write_plot,
    write_points,
)


@pytest.fixture
def small_plot():
    params = np.array([-1.0, -0.1, 0.3])
    levels = np.array([0.1, 1 / 3, 0.9])
    betti = {
        0: np.array([[1, 2, 2], [1, 1, 2], [1, 1, 1]]),
        1: np.zeros((3, 3), dtype=int),
    }
    return BifurcationPlot("duffing", "h", params, levels, betti, "analytical")


def test_grid_values_survive_exactly(tmp_path, duffing_field):
    field = duffing_field(-0.7, 21)
    path = tmp_path / "grid.csv"
    write_grid(field, path)
    back = read_grid(path)
    assert np.array_equal(back.values, field.values)
    assert (back.x_min, back.y_min, back.dx, back.dy) == (field.x_min, field.y_min, field.dx, field.dy)
    assert path.read_text().startswith("# x_min y_min dx dy nx ny\n")


def test_grid_header_must_match_the_table(tmp_path):
    path = tmp_path / "grid.csv"
    path.write_text("# x_min y_min dx dy nx ny\n# 0 0 1 1 3 2\n1,2\n3,4\n")
    with pytest.raises(FormatError, match="2x3"):
        read_grid(path)
    path.write_text("# x_min y_min dx dy nx ny\n# 0 0 1\n1,2\n")
    with pytest.raises(FormatError):
        read_grid(path)
    path.write_text("1,2\n3,4\n")
    with pytest.raises(FormatError):
        read_grid(path)


def test_diagram_keeps_essential_classes(tmp_path):
    diag = PersistenceDiagram.from_rows("superlevel", [(0, 1.0, -np.inf), (0, 0.8, 0.5), (1, 0.4, 0.2)])
    path = tmp_path / "diagram.csv"
    write_diagram(diag, path)
    back = read_diagram(path)
    assert back.direction == "superlevel"
    assert back.rows() == diag.rows()
    assert back.essential(0) == 1


def test_empty_diagram(tmp_path):
    path = tmp_path / "diagram.csv"
    write_diagram(PersistenceDiagram.from_rows("sublevel", []), path)
    back = read_diagram(path)
    assert back.direction == "sublevel"
    assert len(back) == 0


def test_diagram_with_unknown_direction(tmp_path):
    path = tmp_path / "diagram.csv"
    path.write_text("# direction=sideways\ndim,birth,death\n0,1,0\n")
    with pytest.raises(FormatError, match="sideways"):
        read_diagram(path)


def test_points(tmp_path, rng):
    cloud = PointCloud(rng.normal(size=(7, 2)))
    path = tmp_path / "points.csv"
    write_points(cloud, path)
    assert np.array_equal(read_points(path).points, cloud.points)


def test_empty_points_file(tmp_path):
    path = tmp_path / "points.csv"
    path.write_text("")
    with pytest.raises(FormatError):
        read_points(path)


def test_betti_table(tmp_path):
    path = tmp_path / "betti.csv"
    write_betti([BettiVector(0, np.array([0.5, 1.0]), np.array([2, 1]))], path)
    assert path.read_text().splitlines() == ["L,dim,beta", "0.5,0,2", "1,0,1"]


def test_plot_file(tmp_path, small_plot):
    path = tmp_path / "plot.csv"
    write_plot(small_plot, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "# provenance=analytical family=duffing param=h"
    assert lines[1] == "h,L,dim,beta"
    assert len(lines) == 2 + 2 * 9

    back = read_plot(path)
    assert (back.family, back.sweep_param, back.provenance) == ("duffing", "h", "analytical")
    assert np.array_equal(back.params, small_plot.params)
    assert np.array_equal(back.levels, small_plot.levels)
    for p in (0, 1):
        assert np.array_equal(back.betti[p], small_plot.betti[p])


def test_plot_with_missing_cells(tmp_path):
    path = tmp_path / "plot.csv"
    path.write_text("h,L,dim,beta\n0,0.5,0,1\n0,1,0,1\n1,0.5,0,2\n")
    with pytest.raises(FormatError, match="rows"):
        read_plot(path)


def test_plot_with_missing_column(tmp_path):
    path = tmp_path / "plot.csv"
    path.write_text("h,L,beta\n0,0.5,1\n")
    with pytest.raises(FormatError, match="dim"):
        read_plot(path)


def test_error_file(tmp_path, small_plot):
    errors = {0: small_plot.betti[0] - 1}
    path = tmp_path / "err.csv"
    write_errors(small_plot, errors, path)
    assert path.read_text().startswith("# provenance=error family=duffing param=h\nh,L,dim,err\n")
    params, levels, back = read_errors(path)
    assert np.array_equal(params, small_plot.params)
    assert list(back) == [0]
    assert np.array_equal(back[0], errors[0])


def test_metadata_sidecar(tmp_path):
    out = tmp_path / "plot.csv"
    path = write_metadata(out, np.int64(42), {"window": (-3.0, 3.0), "nx": np.int64(21), "dims": [0, 1]})
    assert path == metadata_path(out) == tmp_path / "plot.csv.meta.json"
    text = path.read_text()
    data = json.loads(text)
    assert data == {"seed": 42, "version": VERSION, "config": {"dims": [0, 1], "nx": 21, "window": [-3.0, 3.0]}}
    assert text.index('"config"') < text.index('"seed"') < text.index('"version"')


def test_load_json_allows_comments(tmp_path):
    path = tmp_path / "spec.json"
    path.write_text('{\n  // bistable\n  "family": "duffing",\n  "params": {"h": -1.0,},\n}\n')
    assert load_json(path) == {"family": "duffing", "params": {"h": -1.0}}


def test_load_json_rejects_non_objects(tmp_path):
    path = tmp_path / "spec.json"
    path.write_text("[1, 2]")
    with pytest.raises(FormatError):
        load_json(path)
    path.write_text("{family: ")
    with pytest.raises(FormatError):
        load_json(path)
