import json

import pytest

from claimarg import harness as h
from claimarg import pipeline as p
from claimarg.generation import MockBackend


def write_jsonl(path, rows):
    path.write_text("\n".join(json.dumps(r) for r in rows) + "\n", "utf-8")
    return path


def small_rows(n_true=2, n_false=2, context=False):
    rows = []
    for i in range(n_true + n_false):
        row = {"id": f"c{i}", "claim": f"claim number {i}", "label": i < n_true}
        if context:
            row["context"] = f"background {i}"
        rows.append(row)
    return rows


class ConstantBackend:
    """Always answers so that direct_question yields True."""

    def complete(self, prompt, purpose):
        return "True"


class FailingBackend:
    def __init__(self, fail_ids):
        self.fail_ids = fail_ids

    def complete(self, prompt, purpose):
        for marker in self.fail_ids:
            if marker in prompt:
                raise RuntimeError("backend exploded")
        return "True"


class TestLoadDataset:
    def test_loads_and_balances(self, tmp_path):
        path = write_jsonl(tmp_path / "d.jsonl", small_rows())
        dataset = h.load_dataset(path)
        assert dataset.name == "d"
        assert len(dataset) == 4
        assert dataset.label_balance == 0.5
        assert dataset.conditioned is False

    def test_conditioned_iff_every_claim_has_context(self, tmp_path):
        path = write_jsonl(tmp_path / "d.jsonl", small_rows(context=True))
        assert h.load_dataset(path).conditioned is True
        rows = small_rows(context=True)
        del rows[1]["context"]
        partial = write_jsonl(tmp_path / "e.jsonl", rows)
        assert h.load_dataset(partial).conditioned is False

    def test_invalid_json_reports_line(self, tmp_path):
        path = tmp_path / "bad.jsonl"
        path.write_text('{"id": "a", "claim": "x", "label": true}\n{oops\n', "utf-8")
        with pytest.raises(h.DatasetError, match=r"bad\.jsonl:2"):
            h.load_dataset(path)

    def test_missing_field_reports_line(self, tmp_path):
        path = write_jsonl(tmp_path / "m.jsonl", [{"id": "a", "claim": "x"}])
        with pytest.raises(h.DatasetError, match=r"m\.jsonl:1.*label"):
            h.load_dataset(path)

    def test_blank_lines_skipped(self, tmp_path):
        path = tmp_path / "g.jsonl"
        path.write_text(
            '\n{"id": "a", "claim": "x", "label": true}\n\n', "utf-8"
        )
        assert len(h.load_dataset(path)) == 1

    def test_empty_file_is_error(self, tmp_path):
        path = tmp_path / "empty.jsonl"
        path.write_text("", "utf-8")
        with pytest.raises(h.DatasetError, match="no claims"):
            h.load_dataset(path)


class TestBalancedSample:
    def dataset(self, tmp_path):
        return h.load_dataset(
            write_jsonl(tmp_path / "d.jsonl", small_rows(n_true=5, n_false=5))
        )

    def test_sample_is_balanced(self, tmp_path):
        chosen = h.balanced_sample(self.dataset(tmp_path), 6, seed=1)
        assert sum(1 for c in chosen if c.gold_label) == 3

    def test_deterministic_per_seed(self, tmp_path):
        dataset = self.dataset(tmp_path)
        first = [c.id for c in h.balanced_sample(dataset, 6, seed=9)]
        second = [c.id for c in h.balanced_sample(dataset, 6, seed=9)]
        assert first == second

    def test_preserves_dataset_order(self, tmp_path):
        dataset = self.dataset(tmp_path)
        order = {c.id: i for i, c in enumerate(dataset.claims)}
        chosen = h.balanced_sample(dataset, 8, seed=4)
        positions = [order[c.id] for c in chosen]
        assert positions == sorted(positions)

    def test_too_large_sample(self, tmp_path):
        with pytest.raises(h.DatasetError):
            h.balanced_sample(self.dataset(tmp_path), 11, seed=0)

    def test_unbalanceable_sample(self, tmp_path):
        dataset = h.load_dataset(
            write_jsonl(tmp_path / "skew.jsonl", small_rows(n_true=1, n_false=5))
        )
        with pytest.raises(h.DatasetError):
            h.balanced_sample(dataset, 4, seed=0)


class TestRun:
    def dataset(self, tmp_path, **kwargs):
        return h.load_dataset(write_jsonl(tmp_path / "d.jsonl", small_rows(**kwargs)))

    def test_constant_true_scores_half_on_balanced_set(self, tmp_path):
        dataset = self.dataset(tmp_path)
        config = p.MethodConfig(p.DIRECT_QUESTION, ConstantBackend())
        (result,) = h.run(dataset, [config])
        assert result.accuracy == 0.5
        assert result.skipped == 0

    def test_failures_become_skips(self, tmp_path):
        dataset = self.dataset(tmp_path)
        config = p.MethodConfig(p.DIRECT_QUESTION, FailingBackend(["claim number 0"]))
        (result,) = h.run(dataset, [config])
        assert result.skipped == 1
        assert "backend exploded" in result.records[0].error
        # Accuracy is over the scored claims only: 1 correct of 3.
        assert result.accuracy == pytest.approx(1 / 3)

    def test_multiple_methods_share_claims(self, tmp_path):
        dataset = self.dataset(tmp_path)
        methods = [
            p.MethodConfig(p.ARGLLM, MockBackend(1)),
            p.MethodConfig(p.DIRECT_QUESTION, ConstantBackend()),
        ]
        results = h.run(dataset, methods, sample=2, seed=0)
        assert [r.method for r in results] == ["argllm-0.5-d1", "direct_question"]
        assert all(len(r.records) == 2 for r in results)

    def test_argllm_records_framework(self, tmp_path):
        dataset = self.dataset(tmp_path)
        (result,) = h.run(dataset, [p.MethodConfig(p.ARGLLM, MockBackend(1))])
        assert all(r.verdict.qbaf is not None for r in result.records)


class TestOutputs:
    def results(self, tmp_path):
        dataset = h.load_dataset(
            write_jsonl(tmp_path / "d.jsonl", small_rows())
        )
        return h.run(
            dataset,
            [
                p.MethodConfig(p.ARGLLM, MockBackend(1)),
                p.MethodConfig(p.DIRECT_QUESTION, ConstantBackend()),
            ],
        )

    def test_table_layout(self, tmp_path):
        table = h.format_table(self.results(tmp_path))
        lines = table.splitlines()
        assert lines[0].split("|")[0].strip() == "dataset"
        assert "argllm-0.5-d1" in lines[0]
        assert "direct_question" in lines[0]
        assert lines[2].startswith("d")

    def test_repeat_runs_byte_identical(self, tmp_path):
        first = h.format_table(self.results(tmp_path))
        second = h.format_table(self.results(tmp_path))
        assert first == second

    def test_write_results_files(self, tmp_path):
        paths = h.write_results(self.results(tmp_path), tmp_path / "out")
        assert paths["table"].read_text("utf-8").startswith("dataset")
        csv = paths["csv"].read_text("utf-8").splitlines()
        assert csv[0] == "dataset,method,accuracy,total,skipped"
        assert len(csv) == 3

        records = [
            json.loads(line)
            for line in paths["records"].read_text("utf-8").splitlines()
        ]
        assert len(records) == 8
        argllm_records = [r for r in records if r["method"] == "argllm-0.5-d1"]
        assert all("qbaf" in r for r in argllm_records)
        assert all("strengths" in r["qbaf"] for r in argllm_records)

        audit = [
            json.loads(line)
            for line in paths["audit"].read_text("utf-8").splitlines()
        ]
        assert all({"prompt", "response", "purpose"} <= set(a) for a in audit)
        # argllm needs several turns per claim, direct question exactly one.
        assert len(audit) > 8

    def test_skip_marked_in_records(self, tmp_path):
        dataset = h.load_dataset(write_jsonl(tmp_path / "d.jsonl", small_rows()))
        results = h.run(
            dataset,
            [p.MethodConfig(p.DIRECT_QUESTION, FailingBackend(["claim number 2"]))],
        )
        paths = h.write_results(results, tmp_path / "out")
        records = [
            json.loads(line)
            for line in paths["records"].read_text("utf-8").splitlines()
        ]
        skipped = [r for r in records if r.get("skipped")]
        assert len(skipped) == 1
        assert "backend exploded" in skipped[0]["error"]
        assert "(1 skipped)" in paths["table"].read_text("utf-8")
