#!/usr/bin/env python3
"""Plot the scatter CSV written by `durfee cohort --scatter`.

usage: plot_scatter.py scatter.csv out.png

Needs matplotlib. One panel per series (raw, nonbook) with the y = x line.
"""
import csv
import sys
from collections import defaultdict

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt


def main():
    if len(sys.argv) != 3:
        sys.exit(__doc__)
    series = defaultdict(list)
    with open(sys.argv[1], newline="") as f:
        for row in csv.DictReader(f):
            series[row["series"]].append((float(row["estimate"]), int(row["h"])))

    fig, axes = plt.subplots(1, len(series), figsize=(5 * len(series), 5), squeeze=False)
    for ax, (name, points) in zip(axes[0], sorted(series.items(), key=lambda kv: kv[0] != "raw")):
        xs, ys = zip(*points)
        top = max(max(xs), max(ys)) * 1.05
        ax.scatter(xs, ys, s=12)
        ax.plot([0, top], [0, top], color="grey", linewidth=0.8)
        ax.set_xlim(0, top)
        ax.set_ylim(0, top)
        ax.set_xlabel("estimated h")
        ax.set_ylabel("h")
        ax.set_title(name)
    fig.tight_layout()
    fig.savefig(sys.argv[2], dpi=150)


if __name__ == "__main__":
    main()
