import json
from pathlib import Path

import pytest

from stream_tfidf.config_manager import BenchConfig, ConfigManager, SyntheticSpec
from stream_tfidf.stream_driver import StreamMode

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


@pytest.fixture
def manager(tmp_path):
    return ConfigManager(backup_dir=str(tmp_path / "backups"), max_backups=3)


def test_bundled_configs_are_valid():
    manager = ConfigManager()
    spec = manager.load_synthetic_spec(CONFIGS / "synthetic_default.json")
    assert spec.n_snapshots * spec.docs_per_snapshot == 300
    bench = manager.load_bench_config(CONFIGS / "bench_default.json")
    assert bench.mode == StreamMode.SDS
    assert bench.warmup_days == 1
    assert bench.repetitions == 3


class TestValidateConfig:

    def test_valid(self, manager):
        assert manager.validate_config({"input_path": "corpus.jsonl", "mode": "sds"}) == (True, "")

    def test_needs_a_source(self, manager):
        ok, message = manager.validate_config({"mode": "ods"})
        assert not ok
        assert "input_path" in message

    def test_sources_are_exclusive(self, manager):
        ok, message = manager.validate_config({"input_path": "corpus.jsonl",
                                               "synthetic_spec_path": "synthetic.json"})
        assert not ok
        assert "mutually exclusive" in message

    @pytest.mark.parametrize("field, value", [
        ("mode", "both"),
        ("warmup_days", 0),
        ("repetitions", 0),
        ("refresh_every", -1),
        ("min_token_length", 0),
        ("weighting", "bm25"),
    ])
    def test_rejects_bad_values(self, manager, field, value):
        ok, message = manager.validate_config({"input_path": "corpus.jsonl", field: value})
        assert not ok
        assert field in message

    def test_rejects_unknown_keys(self, manager):
        ok, message = manager.validate_config({"input_path": "corpus.jsonl", "colour": "red"})
        assert not ok
        assert "colour" in message

    def test_not_an_object(self, manager):
        assert manager.validate_config(["input_path"]) == (False, "Configuration must be a JSON object")

    def test_synthetic_spec(self, manager):
        assert manager.validate_config({"revisit_probability": 0.5}, SyntheticSpec)[0]
        ok, message = manager.validate_config({"revisit_probability": 1.0}, SyntheticSpec)
        assert not ok
        assert "revisit_probability" in message


class TestLoad:

    def test_missing_file(self, manager, tmp_path):
        with pytest.raises(FileNotFoundError):
            manager.load_bench_config(tmp_path / "missing.json")

    def test_invalid_json(self, manager, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json", encoding="utf-8")
        with pytest.raises(json.JSONDecodeError):
            manager.load_bench_config(path)

    def test_invalid_values(self, manager, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"input_path": "x.jsonl", "warmup_days": 0}), encoding="utf-8")
        with pytest.raises(ValueError, match="warmup_days"):
            manager.load_bench_config(path)


class TestSave:

    def test_round_trip(self, manager, tmp_path):
        config = BenchConfig(input_path="corpus.jsonl", mode="sds", refresh_every=5)
        manager.save_config(config, tmp_path / "bench.json")
        assert manager.load_bench_config(tmp_path / "bench.json") == config

    def test_backup_on_overwrite(self, manager, tmp_path):
        path = tmp_path / "bench.json"
        manager.save_config(BenchConfig(input_path="a.jsonl"), path)
        manager.save_config(BenchConfig(input_path="b.jsonl"), path)

        backups = list((tmp_path / "backups").glob("bench_*.json"))
        assert len(backups) == 1
        assert json.loads(backups[0].read_text(encoding="utf-8"))["input_path"] == "a.jsonl"

    def test_backups_are_pruned(self, manager, tmp_path):
        path = tmp_path / "bench.json"
        for i in range(6):
            manager.save_config(BenchConfig(input_path=f"{i}.jsonl"), path)
        assert len(list((tmp_path / "backups").glob("bench_*.json"))) == 3

    def test_no_backup_when_disabled(self, manager, tmp_path):
        path = tmp_path / "bench.json"
        manager.save_config(BenchConfig(input_path="a.jsonl"), path)
        manager.save_config(BenchConfig(input_path="b.jsonl"), path, create_backup=False)
        assert not (tmp_path / "backups").exists()
