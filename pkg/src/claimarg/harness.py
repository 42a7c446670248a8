"""Batch execution of verification methods over claim datasets.

Datasets are line-delimited JSON (one claim per line). A run executes
each configured method over the claims, records per-claim verdicts,
and emits an accuracy table (plain text and CSV). Table files contain
no timestamps so repeat runs are byte-identical.
"""

from __future__ import annotations

import json
import logging
import random
import time
from dataclasses import dataclass, field
from pathlib import Path

from claimarg import qbaf as qbaf_mod
from claimarg.pipeline import Claim, MethodConfig, Verdict, verify

log = logging.getLogger(__name__)


class DatasetError(Exception):
    pass


@dataclass
class Dataset:
    name: str
    claims: list[Claim]
    conditioned: bool

    def __len__(self) -> int:
        return len(self.claims)

    @property
    def label_balance(self) -> float:
        """Fraction of claims labelled true."""
        if not self.claims:
            return 0.0
        return sum(1 for c in self.claims if c.gold_label) / len(self.claims)


@dataclass
class ClaimRecord:
    claim: Claim
    verdict: Verdict | None
    error: str | None = None

    @property
    def correct(self) -> bool | None:
        if self.verdict is None or self.claim.gold_label is None:
            return None
        return self.verdict.label == self.claim.gold_label


@dataclass
class RunResult:
    method: str
    dataset: str
    records: list[ClaimRecord] = field(default_factory=list)
    wall_time: float = 0.0

    @property
    def skipped(self) -> int:
        return sum(1 for r in self.records if r.verdict is None)

    @property
    def accuracy(self) -> float:
        scored = [r for r in self.records if r.correct is not None]
        if not scored:
            return 0.0
        return sum(1 for r in scored if r.correct) / len(scored)


def load_dataset(path: str | Path, name: str | None = None) -> Dataset:
    """Parse a line-delimited claim file; every line needs id, claim and
    label. The dataset counts as conditioned iff every claim has context."""
    path = Path(path)
    claims: list[Claim] = []
    with path.open("r", encoding="utf-8") as handle:
        for line_number, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DatasetError(f"{path}:{line_number}: invalid JSON: {exc}") from exc
            try:
                claims.append(
                    Claim(
                        id=str(record["id"]),
                        text=record["claim"],
                        context=record.get("context"),
                        gold_label=bool(record["label"]),
                    )
                )
            except KeyError as exc:
                raise DatasetError(
                    f"{path}:{line_number}: missing field {exc.args[0]!r}"
                ) from exc
            except ValueError as exc:
                raise DatasetError(f"{path}:{line_number}: {exc}") from exc
    if not claims:
        raise DatasetError(f"{path}: no claims found")
    dataset = Dataset(
        name=name or path.stem,
        claims=claims,
        conditioned=all(c.context is not None for c in claims),
    )
    log.info(
        "loaded %s: %d claims, balance %.2f, conditioned=%s",
        dataset.name, len(dataset), dataset.label_balance, dataset.conditioned,
    )
    return dataset


def balanced_sample(dataset: Dataset, sample: int, seed: int) -> list[Claim]:
    """A label-balanced subset, reproducible from the seed."""
    if sample > len(dataset):
        raise DatasetError(
            f"sample size {sample} exceeds dataset size {len(dataset)}"
        )
    trues = [c for c in dataset.claims if c.gold_label]
    falses = [c for c in dataset.claims if not c.gold_label]
    n_true = sample // 2
    n_false = sample - n_true
    if n_true > len(trues) or n_false > len(falses):
        raise DatasetError(
            f"cannot draw a balanced sample of {sample} from "
            f"{len(trues)} true / {len(falses)} false claims"
        )
    rng = random.Random(seed)
    chosen = rng.sample(trues, n_true) + rng.sample(falses, n_false)
    order = {c.id: i for i, c in enumerate(dataset.claims)}
    return sorted(chosen, key=lambda c: order[c.id])


def run(
    dataset: Dataset,
    methods: list[MethodConfig],
    sample: int | None = None,
    seed: int = 0,
) -> list[RunResult]:
    """Execute every method over the (sub)set. Per-claim failures become
    skips and never abort the run."""
    claims = dataset.claims if sample is None else balanced_sample(dataset, sample, seed)
    results = []
    for config in methods:
        started = time.monotonic()
        result = RunResult(method=config.name, dataset=dataset.name)
        for claim in claims:
            try:
                verdict = verify(claim, config)
            except Exception as exc:
                log.warning("claim %s skipped under %s: %s", claim.id, config.name, exc)
                result.records.append(ClaimRecord(claim, None, error=str(exc)))
            else:
                result.records.append(ClaimRecord(claim, verdict))
        result.wall_time = time.monotonic() - started
        results.append(result)
    return results


def format_table(results: list[RunResult]) -> str:
    """Plain-text accuracy grid: datasets as rows, methods as columns."""
    methods = list(dict.fromkeys(r.method for r in results))
    datasets = list(dict.fromkeys(r.dataset for r in results))
    cell = {(r.dataset, r.method): r for r in results}
    widths = [max(len(m), 7) for m in methods]
    name_width = max([len(d) for d in datasets] + [len("dataset")])

    def row(label: str, cells: list[str]) -> str:
        return " | ".join(
            [label.ljust(name_width)] + [c.rjust(w) for c, w in zip(cells, widths)]
        )

    lines = [row("dataset", methods)]
    lines.append("-" * len(lines[0]))
    for dataset in datasets:
        cells = []
        for method in methods:
            result = cell.get((dataset, method))
            if result is None:
                cells.append("-")
            elif result.skipped:
                cells.append(f"{result.accuracy:.3f} ({result.skipped} skipped)")
            else:
                cells.append(f"{result.accuracy:.3f}")
        lines.append(row(dataset, cells))
    return "\n".join(lines) + "\n"


def write_results(results: list[RunResult], outdir: str | Path) -> dict[str, Path]:
    """Emit the table (txt + csv), per-claim records, and the audit log of
    every prompt/response pair."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    paths = {
        "table": outdir / "results.txt",
        "csv": outdir / "results.csv",
        "records": outdir / "claims.jsonl",
        "audit": outdir / "audit.jsonl",
    }
    paths["table"].write_text(format_table(results), "utf-8")

    csv_lines = ["dataset,method,accuracy,total,skipped"]
    for r in results:
        csv_lines.append(f"{r.dataset},{r.method},{r.accuracy:.6f},{len(r.records)},{r.skipped}")
    paths["csv"].write_text("\n".join(csv_lines) + "\n", "utf-8")

    with paths["records"].open("w", encoding="utf-8") as records_out, paths[
        "audit"
    ].open("w", encoding="utf-8") as audit_out:
        for result in results:
            for record in result.records:
                doc: dict = {
                    "dataset": result.dataset,
                    "method": result.method,
                    "claim_id": record.claim.id,
                    "gold_label": record.claim.gold_label,
                }
                if record.verdict is None:
                    doc["skipped"] = True
                    doc["error"] = record.error
                else:
                    doc["label"] = record.verdict.label
                    doc["root_strength"] = record.verdict.root_strength
                    if record.verdict.qbaf is not None:
                        strengths = {
                            record.verdict.semantics or "unknown": record.verdict.strengths
                            or {}
                        }
                        doc["qbaf"] = qbaf_mod.to_dict(record.verdict.qbaf, strengths)
                records_out.write(json.dumps(doc, sort_keys=True) + "\n")
                if record.verdict is not None:
                    for turn in record.verdict.transcript.turns:
                        audit_out.write(
                            json.dumps(
                                {
                                    "claim_id": record.claim.id,
                                    "method": result.method,
                                    **turn,
                                },
                                sort_keys=True,
                            )
                            + "\n"
                        )
    return paths
