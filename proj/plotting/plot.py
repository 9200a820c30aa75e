#!/usr/bin/env python3
"""Render a cslfa CSV or JSON result. Needs pandas and matplotlib."""
import argparse
import json
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import pandas as pd  # noqa: E402


def read_csv(path):
    meta = {}
    with open(path) as f:
        for line in f:
            if not line.startswith("#"):
                break
            key, _, value = line[2:].partition(":")
            meta[key.strip()] = value.strip()
    return pd.read_csv(path, comment="#"), meta


def curve(df, ax, metrics, by="mu"):
    for metric in metrics:
        sub = df[(df.metric == metric) & (df.status == "ok")]
        if sub.empty:
            continue
        groups = sub.groupby(by) if by in sub and sub[by].notna().any() else [(None, sub)]
        for key, g in groups:
            label = metric if key is None else f"{metric}, {by}={key:g}"
            style = "o" if metric.startswith("experimental") else "-"
            ax.plot(g.sigma, g.value, style, ms=3, label=label)
    ax.set_xlabel("sigma")
    ax.set_ylabel("beta")
    ax.legend()


def heatmap(df, ax):
    sub = df[df.metric == "iterations"]
    grid = sub.pivot_table(index="beta", columns="sigma", values="value")
    mesh = ax.pcolormesh(grid.columns, grid.index, grid.values, shading="nearest")
    plt.colorbar(mesh, ax=ax, label="iterations")
    ax.set_xscale("symlog")
    ax.set_xlabel("sigma")
    ax.set_ylabel("beta")


def iterations_vs_beta(df, ax):
    sub = df[df.metric == "iterations"]
    for (s, mu), g in sub.groupby(["sigma", "mu"]):
        ax.plot(g.beta, g.value, label=f"sigma={s:g}, mu={mu:g}")
    ax.set_xlabel("beta")
    ax.set_ylabel("iterations")
    ax.legend()


def profile(df, ax):
    sub = df[df.metric == "amplification"]
    for (s, b), g in sub.groupby(["sigma", "beta"]):
        ax.plot(g.theta1, g.value, label=f"sigma={s:g}, beta={b:g}")
    ax.axhline(1.0, color="grey", lw=0.5)
    ax.set_xlabel("theta")
    ax.set_ylabel("G")
    ax.legend()


def table(path):
    with open(path) as f:
        doc = json.load(f)
    rows = pd.DataFrame(doc["rows"])
    print(rows.pivot_table(index="metric", columns="beta", values="value").to_string())


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("result")
    ap.add_argument("-o", "--output")
    ap.add_argument("--iterations-vs-beta", action="store_true",
                    help="plot iteration-minimum output as count against beta")
    args = ap.parse_args()

    if args.result.endswith(".json"):
        table(args.result)
        return 0

    df, meta = read_csv(args.result)
    kind = meta.get("kind")
    fig, ax = plt.subplots(figsize=(6, 4))
    if kind == "beta-curve":
        curve(df, ax, ["beta_min", "experimental_beta_min"])
    elif kind == "smoother-curve":
        curve(df, ax, ["bound_theta_zero", "bound_theta_pi", "numeric_beta_min"])
    elif kind == "hpc-curve":
        curve(df, ax, ["hpc_min_beta", "beta_min"])
    elif kind == "iteration-minimum" and not args.iterations_vs_beta:
        curve(df, ax, ["iteration_minimum_beta"])
    elif kind == "iteration-minimum":
        iterations_vs_beta(df, ax)
    elif kind == "heatmap":
        heatmap(df, ax)
    elif kind == "amplification-profile":
        profile(df, ax)
    else:
        print(f"unsupported kind {kind}", file=sys.stderr)
        return 1
    ax.set_title(meta.get("figure", ""), fontsize=8)
    fig.tight_layout()
    fig.savefig(args.output or args.result.rsplit(".", 1)[0] + ".png", dpi=150)
    return 0


if __name__ == "__main__":
    sys.exit(main())
