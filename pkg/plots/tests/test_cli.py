import os

from cohabitat_plots.cli import main


class TestCli:
    def test_renders_via_arguments(self, run_dir, tmp_path):
        out = str(tmp_path / "timeline.png")
        rc = main(["activity_timeline", "--in", run_dir, "--out", out,
                   "--seed", "3", "--arm", "without", "--episode", "1"])
        assert rc == 0
        assert os.path.exists(out)

    def test_input_problems_exit_2(self, tmp_path, capsys):
        rc = main(["mts_bars", "--in", str(tmp_path / "nope"),
                   "--out", str(tmp_path / "x.png")])
        assert rc == 2
        assert "error:" in capsys.readouterr().err

    def test_bad_kind_rejected_by_argparse(self, run_dir, tmp_path, capsys):
        rc = main(["pie_chart", "--in", run_dir,
                   "--out", str(tmp_path / "x.png")])
        assert rc == 2
