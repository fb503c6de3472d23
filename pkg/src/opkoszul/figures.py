"""Optional figures for CLI reports.  matplotlib is imported lazily so the
library and the delimited output work without it."""

from __future__ import annotations

from pathlib import Path
from typing import Dict, List, Mapping, Sequence


def _pyplot():
    try:
        import matplotlib
    except ImportError as e:  # pragma: no cover - depends on the environment
        raise RuntimeError("figures need matplotlib: pip install 'artifact[figures]'") from e
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    return plt


def homology_figure(table: Mapping[int, int], title: str, path: Path) -> Path:
    """Bar chart of homology dimensions by degree."""
    plt = _pyplot()
    degrees = sorted(table)
    fig, ax = plt.subplots(figsize=(5, 3))
    ax.bar(degrees, [table[d] for d in degrees], color="#4C72B0")
    ax.set_xlabel("degree")
    ax.set_ylabel("dim H")
    ax.set_xticks(degrees)
    ax.set_title(title)
    fig.savefig(path, bbox_inches="tight")
    plt.close(fig)
    return path


def tower_figure(stages: Sequence[Mapping[int, int]], title: str, path: Path) -> Path:
    """Heat map of ``dim H_i(stage k)`` with stages on the vertical axis."""
    plt = _pyplot()
    degrees = sorted({d for s in stages for d in s})
    grid = [[s.get(d, 0) for d in degrees] for s in stages]
    fig, ax = plt.subplots(figsize=(1 + 0.6 * len(degrees), 1 + 0.5 * len(stages)))
    im = ax.imshow(grid, cmap="Blues", aspect="auto", origin="lower")
    for k, row in enumerate(grid):
        for j, v in enumerate(row):
            ax.text(j, k, str(v), ha="center", va="center", fontsize=8)
    ax.set_xticks(range(len(degrees)), [str(d) for d in degrees])
    ax.set_yticks(range(len(stages)), [str(k) for k in range(len(stages))])
    ax.set_xlabel("degree")
    ax.set_ylabel("stage")
    ax.set_title(title)
    fig.colorbar(im, ax=ax)
    fig.savefig(path, bbox_inches="tight")
    plt.close(fig)
    return path


def render(figures: Dict[str, dict], directory: str) -> List[Path]:
    """Write every figure request ``name -> {"kind", "title", "data"}`` as PNG."""
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    for name, spec in sorted(figures.items()):
        path = out / f"{name}.png"
        if spec["kind"] == "homology":
            paths.append(homology_figure(spec["data"], spec["title"], path))
        else:
            paths.append(tower_figure(spec["data"], spec["title"], path))
    return paths
