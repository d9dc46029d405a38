"""CSV and report rendering for experiment outputs.

All numbers are rendered with shortest round-trip formatting of
binary64 (Python's ``repr``), so a written CSV carries the exact
computed values and re-running a saved config reproduces every file
byte for byte on the same platform.

Plot emission is a generated standalone script plus the raw CSVs; the
package itself depends on no plotting library.
"""

from __future__ import annotations

from typing import Iterable, Mapping, Optional, Sequence

__all__ = [
    "classification_csv",
    "fig1_plot_script",
    "fig2_plot_script",
    "fmt",
    "key_value_block",
    "ladder_csv",
    "order_points_csv",
    "sampled_csv",
    "series_csv",
]


def fmt(value) -> str:
    """Shortest round-trip rendering of one scalar."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _csv(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(fmt(cell) for cell in row))
    return "\n".join(lines) + "\n"


def sampled_csv(times: Sequence[float], states: Sequence[Sequence[float]]) -> str:
    """Trajectory-style CSV: t, x1..xn."""
    dim = len(states[0]) if states else 0
    header = ["t"] + [f"x{i + 1}" for i in range(dim)]
    return _csv(header, ([t, *row] for t, row in zip(times, states)))


def series_csv(times: Sequence[float], values: Sequence[float]) -> str:
    return _csv(["t", "diff"], zip(times, values))


def ladder_csv(levels: Sequence[Mapping]) -> str:
    return _csv(
        ["level", "dt", "max_diff"],
        ([lv["level"], lv["dt"], lv["max_diff"]] for lv in levels),
    )


def order_points_csv(points: Sequence[Mapping]) -> str:
    return _csv(["dt", "error"], ([p["dt"], p["error"]] for p in points))


def classification_csv(rows: Sequence[Mapping]) -> str:
    return _csv(
        ["t", "max_real_part", "class"],
        ([r["t"], r["max_real_part"], r["class"]] for r in rows),
    )


def key_value_block(entries: Mapping[str, object], title: Optional[str] = None) -> str:
    lines = [] if title is None else [f"# {title}"]
    for key, value in entries.items():
        lines.append(f"{key} = {fmt(value)}")
    return "\n".join(lines) + "\n"


FIG1_PLOT_SCRIPT = """\
#!/usr/bin/env python3
\"\"\"Plot the two fixed-step runs against the exact solution.

Standalone script: reads the CSVs written next to it and needs only
matplotlib.  Sample labels show simulation time t.
\"\"\"

import csv
import os

import matplotlib.pyplot as plt

HERE = os.path.dirname(os.path.abspath(__file__))


def read_csv(name):
    with open(os.path.join(HERE, name)) as fh:
        rows = list(csv.DictReader(fh))
    return rows


def column(rows, key):
    return [float(r[key]) for r in rows]


run_a = read_csv("run_a.csv")
run_b = read_csv("run_b.csv")
exact = read_csv("exact.csv")

fig, ax = plt.subplots(figsize=(7, 5))
ax.plot(column(exact, "t"), column(exact, "x1"), "-", color="black", label="exact")
ax.plot(column(run_a, "t"), column(run_a, "x1"), "o--", label="run A")
ax.plot(column(run_b, "t"), column(run_b, "x1"), "s--", label="run B")
for rows in (run_a, run_b):
    for r in rows:
        ax.annotate(r["t"][:4], (float(r["t"]), float(r["x1"])), fontsize=7,
                    xytext=(4, 2), textcoords="offset points")
ax.set_xlabel("t")
ax.set_ylabel("u")
ax.legend()
ax.set_title("Two step sizes vs the exact solution")
fig.tight_layout()
out = os.path.join(HERE, "fig1.png")
fig.savefig(out, dpi=150)
print("wrote", out)
"""


FIG2_PLOT_SCRIPT = """\
#!/usr/bin/env python3
\"\"\"Plot the log-scale difference between the two step sizes.

Standalone script: reads difference.csv written next to it and needs
only matplotlib.
\"\"\"

import csv
import os

import matplotlib.pyplot as plt

HERE = os.path.dirname(os.path.abspath(__file__))

with open(os.path.join(HERE, "difference.csv")) as fh:
    rows = list(csv.DictReader(fh))

t = [float(r["t"]) for r in rows]
d = [float(r["diff"]) for r in rows]

fig, ax = plt.subplots(figsize=(7, 5))
ax.semilogy(t, [max(v, 1e-18) for v in d], lw=0.6)
ax.set_xlabel("t")
ax.set_ylabel("|difference|")
ax.set_title("Pairwise difference of two step sizes")
fig.tight_layout()
out = os.path.join(HERE, "fig2.png")
fig.savefig(out, dpi=150)
print("wrote", out)
"""


def fig1_plot_script() -> str:
    return FIG1_PLOT_SCRIPT


def fig2_plot_script() -> str:
    return FIG2_PLOT_SCRIPT
