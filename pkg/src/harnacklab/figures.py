"""Figure rendering for the CLI report path.

Each emitter takes a finished report dict and saves PNG files next to the
delimited output.  Core modules stay plot-free; only the CLI calls in here.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

FIGSIZE = (6.0, 4.0)
DPI = 130


def _save(fig, path: Path) -> Path:
    fig.tight_layout()
    fig.savefig(path, dpi=DPI)
    plt.close(fig)
    return path


def scale_figure(records: list[dict], stem: Path) -> list[Path]:
    rs = [row["radius"] for row in records]
    fig, ax = plt.subplots(figsize=FIGSIZE)
    for key, marker in (("volume", "o"), ("killed_capacity", "s"),
                        ("killed_scale", "^"), ("scale", "v")):
        ax.loglog(rs, [row[key] for row in records], marker=marker, label=key)
    ax.set_xlabel("radius r")
    ax.set_ylabel("value")
    ax.set_title("volume, capacity, and scale profile")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    return [_save(fig, stem.with_name(stem.name + "_scale.png"))]

def audit_figure(records: list[dict], stem: Path) -> list[Path]:
    rs = [row["radius"] for row in records]
    fig, ax = plt.subplots(figsize=FIGSIZE)
    for key in ("v_doubling", "c_growth", "e_growth"):
        ax.plot(rs, [row[key] for row in records], marker="o", label=key)
    ax.set_xlabel("radius r")
    ax.set_ylabel("dyadic ratio")
    ax.set_title("regularity audit ratios")
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig2, ax2 = plt.subplots(figsize=FIGSIZE)
    ax2.bar([str(r) for r in rs], [row["covering_m"] for row in records])
    ax2.set_xlabel("radius r")
    ax2.set_ylabel("covering number M")
    ax2.set_title("greedy sphere-covering bound")
    return [_save(fig, stem.with_name(stem.name + "_audit.png")),
            _save(fig2, stem.with_name(stem.name + "_covering.png"))]


def harnack_figure(payload: dict, stem: Path) -> list[Path]:
    ratios = payload.get("boundary_ratios", {})
    if not ratios:
        return []
    zs = list(ratios.keys())
    fig, ax = plt.subplots(figsize=FIGSIZE)
    ax.bar(range(len(zs)), [ratios[z] for z in zs])
    ax.axhline(payload["H"], color="crimson", linestyle="--",
               label=f"H = {payload['H']:.4g}")
    ax.set_xlabel("boundary vertex (sorted)")
    ax.set_ylabel("max/min kernel ratio")
    ax.set_title("extreme-ray ratios per boundary vertex")
    ax.set_xticks([])
    ax.legend()
    return [_save(fig, stem.with_name(stem.name + "_harnack.png"))]


def certificates_figure(certs: list[dict], stem: Path) -> list[Path]:
    certs = [c for c in certs if c["band_min"] > 0]
    if not certs:
        return []
    fig, ax = plt.subplots(figsize=FIGSIZE)
    for i, cert in enumerate(certs):
        color = "tab:green" if cert["passed"] else "tab:red"
        ax.plot([i, i], [cert["band_min"], cert["band_max"]], color=color,
                linewidth=4, solid_capstyle="round")
    ax.set_yscale("log")
    ax.set_xticks(range(len(certs)))
    ax.set_xticklabels([c["tag"] for c in certs], rotation=30)
    ax.set_ylabel("empirical constant band")
    ax.set_title("estimate certificate bands")
    ax.grid(True, axis="y", alpha=0.3)
    return [_save(fig, stem.with_name(stem.name + "_certificates.png"))]


def coi_figure(payload: dict, stem: Path) -> list[Path]:
    rows = payload["rows"]
    fig, ax = plt.subplots(figsize=FIGSIZE)
    ss = sorted({row["s"] for row in rows})
    for s in ss:
        ratios = [row["ratio"] for row in rows if row["s"] == s]
        ax.scatter([s] * len(ratios), ratios, alpha=0.6, s=18)
    ax.axhline(payload["kappa4"], color="crimson", linestyle="--",
               label=f"kappa4 = {payload['kappa4']:.4g}")
    ax.set_xlabel("probe radius s")
    ax.set_ylabel("scaled LHS/RHS ratio")
    ax.set_title(f"cut-off inequality ratios ({payload['kind']})")
    ax.legend()
    return [_save(fig, stem.with_name(stem.name + "_coi.png"))]


def simulate_figure(payload: dict, stem: Path) -> list[Path]:
    freq = payload["exit_freq"]
    zs = list(freq.keys())
    xs = range(len(zs))
    fig, ax = plt.subplots(figsize=FIGSIZE)
    ax.bar(xs, [freq[z] for z in zs],
           yerr=[3 * payload["exit_se"][z] for z in zs], capsize=3,
           label="empirical (3 s.e.)")
    exact = payload.get("exact", {}).get("exit_probabilities")
    if exact:
        ax.plot(xs, [exact[z] for z in zs], "k_", markersize=14, label="exact")
    ax.set_xticks(list(xs))
    ax.set_xticklabels(zs, rotation=90, fontsize=7)
    ax.set_xlabel("boundary vertex")
    ax.set_ylabel("exit probability")
    ax.set_title("exit distribution")
    ax.legend()
    return [_save(fig, stem.with_name(stem.name + "_exit.png"))]


def stability_figure(payload: dict, stem: Path) -> list[Path]:
    paths = []
    if payload["perturbations"]:
        fig, ax = plt.subplots(figsize=FIGSIZE)
        keys = ("killed_capacity", "killed_scale", "kappa1", "h_ball")
        data = []
        for key in keys:
            vals = []
            for row in payload["perturbations"]:
                vals.extend(row["ratios"][key].values())
            data.append(vals)
        ax.boxplot(data, tick_labels=keys)
        lam = payload["ratio_bound"]
        for level, style in ((lam, "--"), (1 / lam, "--")):
            ax.axhline(level, color="gray", linestyle=style, linewidth=1)
        ax.set_yscale("log")
        ax.set_ylabel("perturbed / base ratio")
        ax.set_title(f"stability ratios, {payload['n_perturbations']} perturbations, "
                     f"lambda = {lam:g}")
        paths.append(_save(fig, stem.with_name(stem.name + "_stability.png")))
    return paths
