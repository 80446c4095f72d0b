"""CSV and SVG emission for experiment records.

Both outputs are byte-deterministic for fixed input: floats are printed
with a fixed format, matplotlib's SVG hash salt is pinned, and the SVG
date metadata is stripped.  Wall-clock times live only on the in-memory
records; the CSV's ms column is written as 0 unless timings are requested
explicitly, which keeps reruns byte-identical.
"""

from __future__ import annotations

import math

__all__ = ["emit_csv", "emit_svg_plot", "CSV_HEADER"]

CSV_HEADER = "game,algorithm,perturbation,eps,size,rep,seed,iterations,terminated,exploitability,ms"


def _fmt(x: float) -> str:
    if isinstance(x, float) and math.isnan(x):
        return "nan"
    return f"{x:.12g}"


def _cell(value: str) -> str:
    # game specs and perturbation specs may carry commas; quote per RFC 4180
    if "," in value or '"' in value:
        return '"' + value.replace('"', '""') + '"'
    return value


def emit_csv(records, path, timings: bool = False) -> None:
    """Write sorted records as CSV; `timings` opts into real wall-clock ms."""
    lines = [CSV_HEADER]
    for rec in sorted(records, key=lambda r: r.sort_key()):
        ms = _fmt(rec.wall_ms) if timings else "0"
        lines.append(
            f"{_cell(rec.game)},{rec.algorithm},{_cell(rec.perturbation)},{_fmt(rec.eps)},"
            f"{rec.size},{rec.rep},{rec.seed},{rec.iterations},"
            f"{'true' if rec.terminated else 'false'},{_fmt(rec.exploitability)},{ms}"
        )
    text = "\n".join(lines) + "\n"
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write CSV to {path}: {exc}") from exc


def _geometric(sizes) -> bool:
    if len(sizes) < 3:
        return False
    ratios = [b / a for a, b in zip(sizes, sizes[1:])]
    return min(ratios) > 1.2 and max(ratios) / min(ratios) < 1.5


def emit_svg_plot(summary, path, title: str = "") -> None:
    """Line plot of mean iterations vs size with a +-1 sd band per series.

    One line per (game, algorithm) pair; the x axis switches to log2 scale
    when the size sweep is geometric.
    """
    from matplotlib import rc_context
    from matplotlib.backends.backend_svg import FigureCanvasSVG
    from matplotlib.figure import Figure

    series: dict[tuple, list] = {}
    for row in summary:
        series.setdefault((row.game, row.algorithm), []).append(row)
    single_game = len({g for g, _ in series}) == 1

    with rc_context({"svg.hashsalt": "pbro"}):
        fig = Figure(figsize=(6.0, 4.0))
        FigureCanvasSVG(fig)
        ax = fig.add_subplot(111)
        all_sizes = set()
        for (game, algorithm), rows in sorted(series.items()):
            rows = sorted(rows, key=lambda r: r.size)
            xs = [r.size for r in rows]
            means = [r.mean_iterations for r in rows]
            sds = [r.sd_iterations for r in rows]
            label = algorithm if single_game else f"{game} {algorithm}"
            ax.plot(xs, means, marker="o", markersize=3.5, linewidth=1.4, label=label)
            ax.fill_between(xs, [m - s for m, s in zip(means, sds)],
                            [m + s for m, s in zip(means, sds)], alpha=0.18)
            all_sizes.update(xs)
        if _geometric(sorted(all_sizes)):
            ax.set_xscale("log", base=2)
        ax.set_xlabel("size")
        ax.set_ylabel("iterations")
        if title:
            ax.set_title(title)
        ax.legend(frameon=False, fontsize=9)
        ax.spines["top"].set_visible(False)
        ax.spines["right"].set_visible(False)
        try:
            fig.savefig(path, format="svg", metadata={"Date": None})
        except OSError as exc:
            raise OSError(f"cannot write SVG to {path}: {exc}") from exc
