"""Render a schedule as a Gantt chart image, one lane per resource."""

from __future__ import annotations

from pathlib import Path

from .graph import local_name


def render_gantt(schedule_data: dict, out_path: str | Path, title: str = "Schedule") -> Path:
    """Write a PNG/SVG/PDF Gantt chart for a schedule JSON payload.

    Lanes are resources (sorted), bars sit at (start_s, duration_s) and the
    makespan is marked with a dashed line. The format follows the file
    extension.
    """
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    rows = schedule_data.get("assignments", [])
    makespan = schedule_data.get("makespan_s", 0)
    resources = sorted({row["resource"] for row in rows})
    lane = {resource: index for index, resource in enumerate(resources)}

    fig_height = max(2.0, 0.7 * len(resources) + 1.2)
    fig, ax = plt.subplots(figsize=(10, fig_height))
    cmap = plt.get_cmap("tab10")
    for row in sorted(rows, key=lambda r: (r["start_s"], r["step"])):
        y = lane[row["resource"]]
        ax.barh(
            y,
            row["duration_s"],
            left=row["start_s"],
            height=0.6,
            color=cmap(y % 10),
            edgecolor="black",
            linewidth=0.5,
        )
        ax.text(
            row["start_s"] + row["duration_s"] / 2,
            y,
            local_name(row["step"]),
            ha="center",
            va="center",
            fontsize=8,
        )
    if makespan:
        ax.axvline(makespan, color="red", linestyle="--", linewidth=1)
        ax.text(makespan, -0.45, f"{makespan} s", color="red", fontsize=8, ha="center")
    ax.set_yticks(range(len(resources)))
    ax.set_yticklabels([local_name(resource) for resource in resources])
    ax.set_xlabel("time [s]")
    ax.set_title(title)
    ax.set_xlim(0, max(makespan, 1) * 1.05)
    ax.grid(axis="x", linestyle=":", alpha=0.5)
    fig.tight_layout()
    out = Path(out_path)
    fig.savefig(out)
    plt.close(fig)
    return out
