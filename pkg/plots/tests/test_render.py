"""Rendering tests against synthetic CSV curves in the runner's schema."""

import json

import pytest

from tkplots import CurveFormatError, PlotSpec, build_figure, main, read_curve_csv, render

HEADER = "n,error,log10_n,log10_error,cum_work,storage"


def write_curve(path, rows):
    import math

    lines = [HEADER]
    for n, err, work, storage in rows:
        lines.append(f"{n},{err!r},{math.log10(n)!r},{math.log10(err)!r},{work},{storage}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def power_law_rows(n_checkpoints=12, slope=-0.75):
    rows = []
    for j in range(n_checkpoints):
        n = int(round(10 ** (1 + j / 4)))
        rows.append((n, 0.5 * n**slope, 12 * n, 6))
    return rows


@pytest.fixture
def curve_csv(tmp_path):
    return write_curve(tmp_path / "curve.csv", power_law_rows())


def test_read_curve(curve_csv):
    c = read_curve_csv(curve_csv)
    assert c.label == "curve"
    assert len(c.ns) == 12
    assert c.ns == tuple(sorted(c.ns))


def test_read_rejects_bad_header(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("a,b\n1,2\n", encoding="utf-8")
    with pytest.raises(CurveFormatError, match="row 1"):
        read_curve_csv(bad)


def test_read_malformed_row_names_row(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text(HEADER + "\n10,0.5,1.0,-0.3,120,6\nnope,x,,,,\n", encoding="utf-8")
    with pytest.raises(CurveFormatError, match="row 3"):
        read_curve_csv(bad)


def test_render_outputs(tmp_path, curve_csv):
    spec = PlotSpec(
        curves=((str(curve_csv), "T-kernel"),),
        slopes=(-0.75,),
        out=str(tmp_path / "fig"),
    )
    meta = render(spec)
    assert (tmp_path / "fig.png").exists()
    assert (tmp_path / "fig.svg").exists()
    doc = json.loads((tmp_path / "fig.meta.json").read_text(encoding="utf-8"))
    assert doc == meta
    assert abs(doc["slopes"][0] - (-0.75)) < 1e-12
    assert doc["curves"][0]["label"] == "T-kernel"


def test_guide_anchored_at_last_checkpoint(tmp_path, curve_csv):
    spec = PlotSpec(curves=((str(curve_csv), "c"),), slopes=(-0.5,), out=str(tmp_path / "f"))
    fig, meta = build_figure(spec)
    rows = power_law_rows()
    guide = meta["guides"][0]
    assert guide["anchor_n"] == rows[-1][0]
    assert guide["anchor_value"] == pytest.approx(rows[-1][1], rel=1e-15)
    # the drawn guide is the second line; it ends at the anchor and extends left
    line = fig.axes[0].lines[1]
    xs, ys = line.get_xdata(), line.get_ydata()
    assert xs[-1] == rows[-1][0] and xs[0] == rows[0][0]
    assert ys[-1] == pytest.approx(rows[-1][1], rel=1e-15)


def test_multiple_curves_one_axis(tmp_path):
    paths = []
    for i, slope in enumerate((-0.3, -0.5, -0.7)):
        paths.append(write_curve(tmp_path / f"c{i}.csv", power_law_rows(slope=slope)))
    spec = PlotSpec(
        curves=tuple((str(p), f"theta{i}") for i, p in enumerate(paths)),
        slopes=(-2.0 / 3.0,),
        out=str(tmp_path / "sweep"),
    )
    meta = render(spec)
    assert [c["label"] for c in meta["curves"]] == ["theta0", "theta1", "theta2"]
    assert abs(meta["slopes"][0] - (-2.0 / 3.0)) < 1e-12


def test_empty_csv_errors_and_writes_nothing(tmp_path):
    empty = tmp_path / "empty.csv"
    empty.write_text(HEADER + "\n", encoding="utf-8")
    spec = PlotSpec(curves=((str(empty), "e"),), out=str(tmp_path / "out"))
    with pytest.raises(CurveFormatError, match="no data rows"):
        render(spec)
    assert not (tmp_path / "out.png").exists()
    assert not (tmp_path / "out.svg").exists()
    assert not (tmp_path / "out.meta.json").exists()


def test_layout_is_deterministic(tmp_path, curve_csv):
    spec = PlotSpec(curves=((str(curve_csv), "c"),), slopes=(-0.75,), out=str(tmp_path / "d"))
    fig1, _ = build_figure(spec)
    fig2, _ = build_figure(spec)
    ax1, ax2 = fig1.axes[0], fig2.axes[0]
    assert ax1.get_xlim() == ax2.get_xlim()
    assert ax1.get_ylim() == ax2.get_ylim()
    legend1 = [t.get_text() for t in ax1.get_legend().get_texts()]
    legend2 = [t.get_text() for t in ax2.get_legend().get_texts()]
    assert legend1 == legend2 == ["c", "slope -0.75"]


def test_cli_positional_with_slope(tmp_path, curve_csv):
    out = tmp_path / "cli"
    code = main(["render", str(curve_csv), "--slope", "-0.75", "--out", str(out)])
    assert code == 0
    assert out.with_suffix(".png").exists() and out.with_suffix(".svg").exists()


def test_cli_spec_file(tmp_path, curve_csv):
    doc = {
        "curves": [{"path": str(curve_csv), "label": "run"}],
        "slopes": [-0.875],
        "title": "saturation",
        "out": str(tmp_path / "spec_fig"),
    }
    spec_path = tmp_path / "spec.json"
    spec_path.write_text(json.dumps(doc), encoding="utf-8")
    assert main(["render", "--spec", str(spec_path)]) == 0
    meta = json.loads((tmp_path / "spec_fig.meta.json").read_text(encoding="utf-8"))
    assert abs(meta["slopes"][0] - (-0.875)) < 1e-12


def test_cli_errors_exit_1(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("junk\n", encoding="utf-8")
    assert main(["render", str(bad), "--out", str(tmp_path / "x")]) == 1
    assert "row 1" in capsys.readouterr().err
    assert main(["render"]) == 1


def test_spec_rejects_unknown_fields():
    with pytest.raises(CurveFormatError):
        PlotSpec.from_dict({"curves": [], "bogus": 1})
