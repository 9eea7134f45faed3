import pytest

from cohabitat.persist import (ArtifactError, read_dict_csv, read_manifest,
                               render_aligned, tick_header,
                               write_dict_csv, write_episode_summary,
                               write_manifest, write_tick_log)
from cohabitat.sim import EpisodeLog


def make_log(episode=0):
    return EpisodeLog(episode=episode,
                      ticks=[(episode, 0, 22.0, 45.0, 22.0, 45.0, -1, 0.0,
                              0, 1, 4, 1.25, 0.3, 0.0, 0.0)],
                      human_totals=[12.5], th_changes=[3], switches=[1],
                      completed=[True], shs_total=-2.0, n_ticks=1)


class TestDictCsv:
    def test_round_trip_preserves_floats_exactly(self, tmp_path):
        path = str(tmp_path / "t.csv")
        rows = [{"a": 0.1 + 0.2, "b": -7, "c": "x"}]
        write_dict_csv(path, rows)
        back = read_dict_csv(path)
        assert float(back[0]["a"]) == 0.1 + 0.2
        assert back[0]["b"] == "-7"
        assert back[0]["c"] == "x"

    def test_refuses_empty_table(self, tmp_path):
        with pytest.raises(ArtifactError):
            write_dict_csv(str(tmp_path / "t.csv"), [])

    def test_missing_file(self, tmp_path):
        with pytest.raises(ArtifactError, match="missing"):
            read_dict_csv(str(tmp_path / "nope.csv"))

    def test_malformed_row_reports_line_number(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("a,b\n1,2\n3\n", encoding="utf-8")
        with pytest.raises(ArtifactError, match="line 3"):
            read_dict_csv(str(path))

    def test_lf_line_endings(self, tmp_path):
        path = tmp_path / "t.csv"
        write_dict_csv(str(path), [{"a": 1}])
        assert b"\r" not in path.read_bytes()


class TestEpisodeArtifacts:
    def test_tick_header_widths(self):
        assert len(tick_header(1)) == 8 + 7
        assert len(tick_header(2)) == 8 + 14
        assert tick_header(2)[8] == "h0_activity"
        assert tick_header(2)[15] == "h1_activity"

    def test_tick_log_round_trip(self, tmp_path):
        path = str(tmp_path / "ticks.csv")
        write_tick_log(path, [make_log()], n_humans=1)
        rows = read_dict_csv(path)
        assert len(rows) == 1
        assert rows[0]["temp"] == "22.0"
        assert rows[0]["h0_reward"] == "1.25"

    def test_episode_summary_columns(self, tmp_path):
        path = str(tmp_path / "ep.csv")
        write_episode_summary(path, [make_log(3)], n_humans=1)
        rows = read_dict_csv(path)
        assert rows[0]["episode"] == "3"
        assert rows[0]["h0_total_reward"] == "12.5"
        assert rows[0]["h0_completed"] == "1"


class TestManifest:
    def test_round_trip_with_nesting(self, tmp_path):
        path = str(tmp_path / "manifest.txt")
        write_manifest(path, {"b": 2, "a": {"y": 1.5, "x": "hi"}})
        back = read_manifest(path)
        assert back == {"a.x": "hi", "a.y": "1.5", "b": "2"}

    def test_keys_are_sorted(self, tmp_path):
        path = tmp_path / "manifest.txt"
        write_manifest(str(path), {"z": 1, "a": 2, "m": 3})
        keys = [line.split(" = ")[0]
                for line in path.read_text().splitlines()]
        assert keys == sorted(keys)

    def test_bad_line_raises(self, tmp_path):
        path = tmp_path / "manifest.txt"
        path.write_text("fine = 1\nbroken-line\n", encoding="utf-8")
        with pytest.raises(ArtifactError, match="line 2"):
            read_manifest(str(path))

    def test_missing_manifest(self, tmp_path):
        with pytest.raises(ArtifactError):
            read_manifest(str(tmp_path / "nope.txt"))


class TestRenderAligned:
    def test_columns_line_up(self):
        text = render_aligned([{"model": "H_A", "mts": 21.0},
                               {"model": "H_C_prime", "mts": 3.5}])
        lines = text.splitlines()
        assert lines[0].startswith("model")
        assert lines[0].index("mts") == lines[1].index("H_A") + 11
        assert "21.000" in lines[1]

    def test_empty_rows_rejected(self):
        with pytest.raises(ArtifactError):
            render_aligned([])
