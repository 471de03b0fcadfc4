import json

import pytest

from bibx import cli
from bibx.corpus import Corpus


@pytest.fixture
def corpus_file(tmp_path, data_dir):
    out = tmp_path / "corpus.json"
    code = cli.run(
        [
            "merge",
            "--in", f"{data_dir / 'scopus.bib'}:scopus",
            "--in", f"{data_dir / 'wos.bib'}:wos",
            "--in", f"{data_dir / 'pubmed.txt'}:pubmed",
            "-o", str(out),
        ]
    )
    assert code == 0
    return out


class TestHelp:
    @pytest.mark.parametrize("name", cli.COMMANDS + ("cocitation",))
    def test_every_command_has_help(self, name, capsys):
        with pytest.raises(SystemExit) as excinfo:
            cli.run([name, "--help"])
        assert excinfo.value.code == 0
        out = capsys.readouterr().out
        assert "usage:" in out
        assert name in out

    def test_no_command_prints_help_and_fails(self, capsys):
        assert cli.run([]) == 1
        assert "usage:" in capsys.readouterr().out

    def test_unknown_command_exits_one(self, capsys):
        assert cli.run(["frobnicate"]) == 1
        assert "error:" in capsys.readouterr().err


class TestExitCodes:
    def test_missing_corpus_is_data_error(self, tmp_path, capsys):
        assert cli.run(["report", str(tmp_path / "missing.json")]) == 2
        assert "not found" in capsys.readouterr().err

    def test_invalid_corpus_json_is_data_error(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        assert cli.run(["report", str(bad)]) == 2

    def test_missing_config_is_data_error(self, tmp_path, corpus_file):
        code = cli.run(
            ["--config", str(tmp_path / "nope.ini"), "report", str(corpus_file)]
        )
        assert code == 2

    def test_bad_year_range_is_usage_error(self, tmp_path, corpus_file, capsys):
        code = cli.run(
            ["filter", str(corpus_file), "--years", "abc",
             "-o", str(tmp_path / "f.json")]
        )
        assert code == 1
        assert "min:max" in capsys.readouterr().err

    def test_ask_without_key_is_configuration_error(
        self, corpus_file, capsys, monkeypatch
    ):
        monkeypatch.delenv("BIBX_LLM_API_KEY", raising=False)
        code = cli.run(["ask", str(corpus_file), "--q", "how many?"])
        assert code == 1
        assert "BIBX_LLM_API_KEY" in capsys.readouterr().err

    def test_bad_palette_is_usage_error(self, tmp_path, corpus_file):
        code = cli.run(
            ["treemap", str(corpus_file), "--kind", "sources",
             "--palette", "red,blue", "-o", str(tmp_path / "t.svg")]
        )
        assert code == 1


class TestPipeline:
    def test_ingest_writes_loadable_corpus(self, tmp_path, data_dir, capsys):
        out = tmp_path / "c.json"
        code = cli.run(
            ["ingest", "--in", f"{data_dir / 'scopus.bib'}:scopus",
             "-o", str(out)]
        )
        assert code == 0
        corpus = Corpus.load(out)
        assert len(corpus.documents) == 4
        assert "4 documents" in capsys.readouterr().out

    def test_merge_reports_duplicates(self, corpus_file, capsys):
        corpus = Corpus.load(corpus_file)
        assert len(corpus.documents) == 6

    def test_filter_then_report(self, tmp_path, corpus_file, capsys):
        filtered = tmp_path / "filtered.json"
        provenance = tmp_path / "prov.json"
        code = cli.run(
            ["filter", str(corpus_file), "--years", "2018:2021",
             "--provenance", str(provenance), "-o", str(filtered)]
        )
        assert code == 0
        kept = Corpus.load(filtered)
        assert all(2018 <= d.year <= 2021 for d in kept.documents)
        mapping = json.loads(provenance.read_text())
        assert len(mapping) == len(kept.documents)
        capsys.readouterr()
        assert cli.run(["report", str(filtered)]) == 0
        out = capsys.readouterr().out
        assert "Documents" in out

    def test_report_json_parses(self, corpus_file, capsys):
        assert cli.run(["report", str(corpus_file), "--format", "json"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["Total Number of Documents"] == "6"

    def test_bar_csv_to_stdout(self, corpus_file, capsys):
        code = cli.run(
            ["bar", str(corpus_file), "--kind", "documents_per_year"]
        )
        assert code == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == "category,value"
        assert len(lines) > 1

    def test_ngram_csv(self, corpus_file, capsys):
        code = cli.run(["ngram", str(corpus_file), "--field", "title", "--n", "1"])
        assert code == 0
        assert capsys.readouterr().out.startswith("ngram,count")

    def test_network_edge_list_to_stdout(self, corpus_file, capsys):
        assert cli.run(["network", str(corpus_file)]) == 0
        out = capsys.readouterr().out
        assert "\t" in out

    def test_history_prints_chains(self, corpus_file, capsys):
        assert cli.run(["history", str(corpus_file), "--doc", "0"]) == 0
        out = capsys.readouterr().out
        assert "backward:" in out and "forward:" in out

    def test_summarize_prints_sentences(self, corpus_file, capsys):
        code = cli.run(
            ["summarize", str(corpus_file), "--docs", "0,1", "--sentences", "2"]
        )
        assert code == 0
        assert capsys.readouterr().out.strip()

    def test_export_bibtex(self, corpus_file, capsys):
        assert cli.run(["export", str(corpus_file), "--format", "bibtex"]) == 0
        out = capsys.readouterr().out
        assert out.lstrip().startswith("@")

    def test_export_csv_file(self, tmp_path, corpus_file):
        out = tmp_path / "corpus.csv"
        assert cli.run(
            ["export", str(corpus_file), "--format", "csv", "-o", str(out)]
        ) == 0
        assert out.read_text().startswith("id,title,authors")


class TestFigures:
    def test_treemap_writes_svg_and_data(self, tmp_path, corpus_file, capsys):
        out = tmp_path / "treemap.svg"
        code = cli.run(
            ["treemap", str(corpus_file), "--kind", "sources", "-o", str(out)]
        )
        assert code == 0
        assert out.read_bytes().startswith(b"<?xml")
        payload = json.loads((tmp_path / "treemap.json").read_text())
        assert payload["seed"] == 42
        assert payload["data"]["points"]

    def test_wordcloud_replay_is_byte_identical(self, tmp_path, corpus_file):
        first = tmp_path / "wc1.svg"
        second = tmp_path / "wc2.svg"
        for out in (first, second):
            code = cli.run(
                ["wordcloud", str(corpus_file), "--field", "title",
                 "--seed", "7", "-o", str(out)]
            )
            assert code == 0
        assert first.read_bytes() == second.read_bytes()

    def test_network_figure_writes_edge_list_too(self, tmp_path, corpus_file):
        out = tmp_path / "net.svg"
        assert cli.run(["network", str(corpus_file), "-o", str(out)]) == 0
        assert (tmp_path / "net.edges.tsv").exists()

    def test_collab_html_output(self, tmp_path, corpus_file):
        out = tmp_path / "collab.html"
        assert cli.run(["collab", str(corpus_file), "-o", str(out)]) == 0
        assert out.read_text().startswith("<!DOCTYPE html>")

    def test_worldmap(self, tmp_path, corpus_file):
        out = tmp_path / "map.svg"
        assert cli.run(["worldmap", str(corpus_file), "-o", str(out)]) == 0
        assert out.read_bytes().startswith(b"<?xml")

    def test_project_writes_coordinates(self, tmp_path, corpus_file):
        out = tmp_path / "map.svg"
        assert cli.run(["project", str(corpus_file), "-o", str(out)]) == 0
        payload = json.loads((tmp_path / "map.json").read_text())
        assert len(payload["data"]["coordinates"]) == 6

    def test_cocitation_alias_matches_similarity(self, tmp_path, corpus_file, capsys):
        assert cli.run(
            ["similarity", str(corpus_file), "--min-shared", "1"]
        ) == 0
        first = capsys.readouterr().out
        assert cli.run(
            ["cocitation", str(corpus_file), "--min-shared", "1"]
        ) == 0
        assert capsys.readouterr().out == first
