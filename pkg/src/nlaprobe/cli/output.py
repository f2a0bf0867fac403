"""CSV and SVG writers for experiment tables."""

import csv
import io
import math

import numpy as np

from .config import format_value


def _cell(v):
    return format_value(v)


def table_csv(cfg, table) -> str:
    """CSV text: ``#`` config echo, ``#`` result lines, header row, data rows (LF)."""
    buf = io.StringIO()
    for line in cfg.echo():
        buf.write(f"# {line}\n")
    for k in sorted(table.results):
        buf.write(f"# result.{k}={format_value(table.results[k])}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(table.columns)
    for row in table.rows:
        w.writerow([_cell(v) for v in row])
    return buf.getvalue()


def table_svg(cfg, table) -> str:
    """Line or histogram plot as SVG text, byte-stable across runs."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    col = {c: i for i, c in enumerate(table.columns)}

    def column(name):
        out = []
        for r in table.rows:
            v = r[col[name]]
            out.append(float(v) if isinstance(v, (int, float, np.number)) else math.nan)
        return out

    with matplotlib.rc_context({"svg.hashsalt": "nlaprobe", "svg.fonttype": "none"}):
        fig, ax = plt.subplots(figsize=(6, 4))
        kind = table.plot[0]
        if kind == "line":
            _, x, ys, logy = table.plot
            xs = column(x)
            for y in ys:
                ax.plot(xs, column(y), marker=".", lw=1, label=y)
            ax.set_xlabel(x)
            if logy:
                ax.set_yscale("log")
            ax.legend()
        else:
            _, c, logx = table.plot
            vals = [v for v in column(c) if math.isfinite(v) and (v > 0 or not logx)]
            if logx:
                vals = [math.log10(v) for v in vals]
            ax.hist(vals, bins=20)
            ax.set_xlabel(f"log10 {c}" if logx else c)
            ax.set_ylabel("count")
        ax.set_title(cfg.experiment)
        buf = io.StringIO()
        fig.savefig(buf, format="svg", metadata={"Date": None})
        plt.close(fig)
    return buf.getvalue()
