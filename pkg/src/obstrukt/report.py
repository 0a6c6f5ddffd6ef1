"""Run reports: canonical JSON, delimited summaries, and figures.

Reports are deterministic for identical inputs: canonical JSON with
sorted keys on stdout, a flat key/value CSV next to it, and a bar-chart
PNG of the numeric content when figures are requested.  Wall-clock
timing goes to stderr only, never into the report, so repeated runs are
byte-identical.
"""

from __future__ import annotations

import csv
import os
import sys

from .serialize import canonical_dumps, sha256_file


class RunReport:
    def __init__(self, command: str, inputs: dict, outcome: str,
                 payload: dict):
        self.command = command
        self.inputs = inputs
        self.outcome = outcome
        self.payload = payload

    @classmethod
    def from_files(cls, command, paths, outcome, payload):
        inputs = {os.path.basename(p): sha256_file(p) for p in paths if p}
        return cls(command, inputs, outcome, payload)

    def to_json(self):
        return {"command": self.command, "inputs": self.inputs,
                "outcome": self.outcome, "report": self.payload}

    def dumps(self) -> str:
        return canonical_dumps(self.to_json())


def _flatten_payload(payload):
    rows = []

    def walk(obj, prefix):
        if isinstance(obj, dict):
            for k in sorted(obj, key=str):
                walk(obj[k], f"{prefix}.{k}" if prefix else str(k))
        elif isinstance(obj, (list, tuple)):
            rows.append((prefix, " ".join(str(x) for x in obj)))
        else:
            rows.append((prefix, obj))

    walk(payload, "")
    return rows


def write_csv(report: RunReport, path):
    rows = _flatten_payload(report.payload)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["key", "value"])
        for key, value in rows:
            writer.writerow([key, value])


def render_figure(report: RunReport, path):
    """Bar chart of the report's numeric entries, written as PNG."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    entries = [(k, v) for k, v in _flatten_payload(report.payload)
               if isinstance(v, (int, bool)) and not isinstance(v, str)]
    entries = [(k, int(v)) for k, v in entries]
    if not entries:
        entries = [("(no numeric entries)", 0)]
    labels = [k for k, _ in entries]
    values = [v for _, v in entries]
    height = max(2.0, 0.35 * len(entries) + 1.2)
    fig, ax = plt.subplots(figsize=(7.0, height))
    ax.barh(range(len(entries)), values, color="#4878a8")
    ax.set_yticks(range(len(entries)))
    ax.set_yticklabels(labels, fontsize=7)
    ax.invert_yaxis()
    ax.set_xlabel("value")
    ax.set_title(report.command, fontsize=9)
    fig.tight_layout()
    fig.savefig(path, dpi=100, metadata={"Software": None})
    plt.close(fig)


def emit(report: RunReport, out_dir=None, figures=False, stream=None):
    text = report.dumps()
    (stream or sys.stdout).write(text)
    if out_dir:
        os.makedirs(out_dir, exist_ok=True)
        with open(os.path.join(out_dir, "report.json"), "w") as fh:
            fh.write(text)
        write_csv(report, os.path.join(out_dir, "report.csv"))
        if figures:
            render_figure(report, os.path.join(out_dir, "report.png"))
