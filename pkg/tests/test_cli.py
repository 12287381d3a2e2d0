"""The command-line interface: subcommands, exit codes, output contracts."""

import subprocess
import sys

import numpy as np
import pytest

from sweephull import cli

QUAD_POINTS = "4 3 points\n0 0 0\n2 2 8\n0 3 9\n3 0 9\n"
# wrong diagonal for that quad: (0,3)-(3,0) leaves a site inside each
# circumcircle (both triangles are wound CCW and the adjacency is mutual,
# so only the empty-circle property is at fault)
QUAD_BAD_TRIANGLES = ("2 6 point-ids (1,2,3) adjacent triangle-ids "
                      "( limbs ab ac bc )\n"
                      "1 4 3 0 0 2\n"
                      "2 3 4 0 0 1\n")


def run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


class TestEntryPoints:
    def test_module_invocation(self):
        proc = subprocess.run([sys.executable, "-m", "sweephull.cli", "--version"],
                              capture_output=True, text=True)
        assert proc.returncode == 0
        assert proc.stdout.strip().startswith("sweephull ")

    def test_no_subcommand_is_usage_error(self, capsys):
        assert run([], capsys)[0] == 2


class TestDelaunayCommand:
    def test_generate_and_triangulate(self, tmp_path, capsys):
        out = tmp_path / "tri.mat"
        code, _, err = run(["delaunay", "--gen", "100", "--seed", "2",
                            "-o", str(out)], capsys)
        assert code == 0
        assert "100 points generated" in err
        assert "duplicates filtered 0" in err
        assert "seconds for triangulation" in err
        assert "triangles written to" in err
        assert out.exists()

    def test_reads_points_file(self, tmp_path, capsys):
        src = tmp_path / "pts.mat"
        src.write_text("4 3 points\n0 0\n0 1\n1 0\n1 1\n")
        out = tmp_path / "tri.mat"
        code, _, err = run(["delaunay", str(src), "-o", str(out)], capsys)
        assert code == 0
        assert "4 points read" in err
        assert out.read_text().splitlines()[1] == "1 3 2 0 0 2"

    def test_two_runs_byte_identical(self, tmp_path, capsys):
        a = tmp_path / "a.mat"
        b = tmp_path / "b.mat"
        for out in (a, b):
            assert run(["delaunay", "--gen", "500", "--seed", "3",
                        "-o", str(out)], capsys)[0] == 0
        assert a.read_bytes() == b.read_bytes()

    def test_engines_agree_at_file_level(self, tmp_path, capsys):
        files = {}
        for engine in ("python", "auto"):
            out = tmp_path / f"{engine}.mat"
            pts = tmp_path / f"{engine}-pts.mat"
            code, _, _ = run(["delaunay", "--gen", "400", "--seed", "7",
                              "--engine", engine, "-o", str(out),
                              "--points-out", str(pts)], capsys)
            assert code == 0
            files[engine] = out.read_bytes() + pts.read_bytes()
        assert files["python"] == files["auto"]

    def test_svg_output(self, tmp_path, capsys):
        svg = tmp_path / "plot.svg"
        code, _, err = run(["delaunay", "--gen", "30", "--svg", str(svg),
                            "-o", str(tmp_path / "t.mat")], capsys)
        assert code == 0
        assert "edge plot written" in err
        assert svg.read_text().startswith("<svg ")

    def test_gen_and_input_conflict(self, tmp_path, capsys):
        src = tmp_path / "pts.mat"
        src.write_text("1 2 3\n")
        code, _, err = run(["delaunay", str(src), "--gen", "10"], capsys)
        assert code == 2
        assert "not both" in err

    def test_neither_gen_nor_input(self, capsys):
        code, _, err = run(["delaunay"], capsys)
        assert code == 2

    def test_missing_file(self, tmp_path, capsys):
        code, _, _ = run(["delaunay", str(tmp_path / "nope.mat")], capsys)
        assert code == 2

    def test_collinear_sites_exit_1(self, tmp_path, capsys):
        src = tmp_path / "line.mat"
        src.write_text("3 3 points\n0 0 0\n1 1 2\n2 2 8\n")
        code, _, err = run(["delaunay", str(src)], capsys)
        assert code == 1
        assert "error [DEGENERATE_COPLANAR_SET]" in err

    def test_identical_points_exit_1(self, tmp_path, capsys):
        src = tmp_path / "same.mat"
        src.write_text("3 3 points\n5 5 50\n5 5 50\n5 5 50\n")
        code, _, err = run(["delaunay", str(src)], capsys)
        assert code == 1
        assert "error [TOO_FEW_POINTS]" in err


class TestHull3dCommand:
    def test_box_cloud(self, tmp_path, capsys):
        out = tmp_path / "hull.mat"
        code, _, err = run(["hull3d", "--gen", "60", "--seed", "2",
                            "--mode", "box3d", "-o", str(out)], capsys)
        assert code == 0
        rows = out.read_text().splitlines()
        n_facets = int(rows[0].split()[0])
        assert n_facets == len(rows) - 1
        assert all(len(r.split()) == 6 for r in rows[1:])

    def test_coplanar_cloud_exit_1(self, tmp_path, capsys):
        code, _, err = run(["hull3d", "--gen", "40", "--mode", "square2d"],
                           capsys)
        assert code == 1
        assert "error [DEGENERATE_COPLANAR_SET]" in err


class TestGenCommand:
    def test_writes_points_file(self, tmp_path, capsys):
        out = tmp_path / "pts.mat"
        code, _, err = run(["gen", "25", str(out), "--seed", "4"], capsys)
        assert code == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "25 3 points"
        assert len(lines) == 26

    def test_compat_precision_changes_formatting(self, tmp_path, capsys):
        full = tmp_path / "full.mat"
        compat = tmp_path / "compat.mat"
        run(["gen", "5", str(full)], capsys)
        run(["gen", "5", str(compat), "--compat-precision"], capsys)
        assert full.read_bytes() != compat.read_bytes()
        assert len(compat.read_text()) < len(full.read_text())


class TestVerifyCommand:
    def make_good_pair(self, tmp_path, capsys):
        pts = tmp_path / "pts.mat"
        tri = tmp_path / "tri.mat"
        code, _, _ = run(["delaunay", "--gen", "200", "--seed", "5",
                          "-o", str(tri), "--points-out", str(pts)], capsys)
        assert code == 0
        return pts, tri

    def test_clean_delaunay_pair(self, tmp_path, capsys):
        pts, tri = self.make_good_pair(tmp_path, capsys)
        code, out, _ = run(["verify", str(pts), str(tri),
                            "--mode", "delaunay"], capsys)
        assert code == 0
        assert out.startswith("clean")

    def test_wrong_diagonal_fails(self, tmp_path, capsys):
        pts = tmp_path / "pts.mat"
        tri = tmp_path / "tri.mat"
        pts.write_text(QUAD_POINTS)
        tri.write_text(QUAD_BAD_TRIANGLES)
        code, out, _ = run(["verify", str(pts), str(tri),
                            "--mode", "delaunay"], capsys)
        assert code == 1
        assert "violation" in out
        assert "circumcircle" in out

    def test_clean_hull_pair(self, tmp_path, capsys):
        pts = tmp_path / "pts.mat"
        tri = tmp_path / "hull.mat"
        code, _, _ = run(["hull3d", "--gen", "50", "--seed", "3",
                          "--mode", "box3d", "-o", str(tri),
                          "--points-out", str(pts)], capsys)
        assert code == 0
        code, out, _ = run(["verify", str(pts), str(tri), "--mode", "hull"],
                           capsys)
        assert code == 0
        assert out.startswith("clean")

    def test_vertex_id_out_of_range_exit_2(self, tmp_path, capsys):
        pts = tmp_path / "pts.mat"
        tri = tmp_path / "tri.mat"
        pts.write_text(QUAD_POINTS)
        tri.write_text("header\n1 4 9 0 0 0\n")
        code, _, err = run(["verify", str(pts), str(tri),
                            "--mode", "delaunay"], capsys)
        assert code == 2
        assert "error" in err

    def test_containment_tolerance_env(self, tmp_path, capsys, monkeypatch):
        pts = tmp_path / "pts.mat"
        tri = tmp_path / "hull.mat"
        run(["hull3d", "--gen", "50", "--seed", "3", "--mode", "box3d",
             "-o", str(tri), "--points-out", str(pts)], capsys)
        monkeypatch.setenv("NAW_EPSILON", "1e-6")
        code, out, _ = run(["verify", str(pts), str(tri), "--mode", "hull"],
                           capsys)
        assert code == 0 and out.startswith("clean")

    def test_bad_tolerance_env_exit_2(self, tmp_path, capsys, monkeypatch):
        pts = tmp_path / "pts.mat"
        tri = tmp_path / "hull.mat"
        run(["hull3d", "--gen", "50", "--seed", "3", "--mode", "box3d",
             "-o", str(tri), "--points-out", str(pts)], capsys)
        monkeypatch.setenv("NAW_EPSILON", "not-a-number")
        code, _, err = run(["verify", str(pts), str(tri), "--mode", "hull"],
                           capsys)
        assert code == 2
        assert "NAW_EPSILON" in err


class TestStatsCommand:
    def test_csv_schema(self, capsys):
        code, out, _ = run(["stats", "--sizes", "50,80", "--seeds", "1,2"],
                           capsys)
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == cli.CSV_HEADER
        assert len(lines) == 5
        for line in lines[1:]:
            n, seed, mode, wall, facets, mean_v, max_v, scan = line.split(",")
            assert mode == "parabola"
            assert int(facets) > 0
            assert float(mean_v) >= 1.0
            assert int(max_v) >= 1

    def test_per_insertion_series(self, tmp_path, capsys):
        series = tmp_path / "series.csv"
        code, out, err = run(["stats", "--sizes", "40", "--seeds", "9",
                              "--per-insertion", str(series)], capsys)
        assert code == 0
        lines = series.read_text().splitlines()
        assert lines[0] == cli.INSERTION_HEADER
        assert len(lines) == 1 + (40 - 3)
        first = lines[1].split(",")
        assert first[0] == "40" and first[1] == "9" and first[2] == "3"

    def test_tiny_sizes_rejected(self, capsys):
        code, _, err = run(["stats", "--sizes", "5"], capsys)
        assert code == 2
        assert ">= 10" in err

    def test_parallel_workers_match_serial(self, tmp_path, capsys):
        code1, out1, _ = run(["stats", "--sizes", "60,90", "--seeds", "1,2",
                              "--parallel", "1"], capsys)
        code2, out2, _ = run(["stats", "--sizes", "60,90", "--seeds", "1,2",
                              "--parallel", "2"], capsys)
        assert code1 == code2 == 0

        def strip_wall(text):
            rows = []
            for line in text.strip().splitlines()[1:]:
                f = line.split(",")
                rows.append((f[0], f[1], f[2], f[4], f[5], f[6], f[7]))
            return rows

        assert strip_wall(out1) == strip_wall(out2)


class TestBenchCommand:
    def test_csv_and_repeats(self, capsys):
        code, out, _ = run(["bench", "--sizes", "60", "--repeats", "3"],
                           capsys)
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == cli.CSV_HEADER
        assert len(lines) == 2
        assert lines[1].startswith("60,1,square2d,")

    def test_comparison_table(self, tmp_path, capsys):
        comp = tmp_path / "others.csv"
        comp.write_text("tool,n,wall_s\nreftool,60,0.0123\nfasttool,60,<0.001\n")
        code, out, err = run(["bench", "--sizes", "60", "--repeats", "1",
                              "--compare", str(comp)], capsys)
        assert code == 0
        assert "reftool" in err and "fasttool" in err
        assert "0.0123" in err
        assert "≤0.001" in err

    def test_malformed_comparison_exit_2(self, tmp_path, capsys):
        comp = tmp_path / "others.csv"
        comp.write_text("reftool,60\n")
        code, _, err = run(["bench", "--sizes", "60", "--repeats", "1",
                            "--compare", str(comp)], capsys)
        assert code == 2
