"""Delimited summaries and figures for a certification run.

Writes the transition-set profile as CSV alongside rendered figures so
the numbers and the pictures come from the same pipeline run.
"""
from __future__ import annotations

import csv
import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .dad import build_cover, compute_f_set, equivalence_classes
from .markers import find_marker
from .spaces import ODOMETER, ClopenSet, SpacePresentation


def _set_size(space: SpacePresentation, C: ClopenSet) -> int:
    if C.backend == ODOMETER:
        return len(C.states)
    return len(C.words)


def write_report(space: SpacePresentation, N: int, outdir: str) -> list[str]:
    os.makedirs(outdir, exist_ok=True)
    spec = space.group
    marker = find_marker(space, 5 * N)
    cover = build_cover(space, N, marker)
    E = list(spec.preimage_ball(N))
    fsets = {
        "U0": compute_f_set(space, cover.U0, E, 3 * N),
        "U1": compute_f_set(space, cover.U1, E, 2 * marker.M + N),
    }
    paths = []

    csv_path = os.path.join(outdir, "fsets.csv")
    with open(csv_path, "w", newline="") as fh:
        writer = csv.writer(fh, delimiter=";")
        writer.writerow(["piece", "element", "word_length", "attain_size"])
        for name, fs in fsets.items():
            for g in fs.elements:
                writer.writerow(
                    [
                        name,
                        str(spec.element_to_json(g)),
                        spec.word_length(spec.quotient_map(g)),
                        _set_size(space, fs.attain[g]),
                    ]
                )
    paths.append(csv_path)

    fig, ax = plt.subplots(figsize=(7, 4))
    for name, fs in fsets.items():
        counts: dict[int, int] = {}
        for g in fs.elements:
            wl = spec.word_length(spec.quotient_map(g))
            counts[wl] = counts.get(wl, 0) + 1
        xs = sorted(counts)
        ax.plot(xs, [counts[x] for x in xs], marker="o", label=name)
    ax.set_xlabel("quotient word length")
    ax.set_ylabel("elements")
    ax.set_title(f"transition-set profile, N = {N}, M = {marker.M}")
    ax.legend()
    fig.tight_layout()
    profile_path = os.path.join(outdir, "fset_profile.png")
    fig.savefig(profile_path, dpi=120)
    plt.close(fig)
    paths.append(profile_path)

    fig, ax = plt.subplots(figsize=(7, 4))
    for name, fs in fsets.items():
        sizes = [_set_size(space, fs.attain[g]) for g in fs.elements]
        ax.plot(range(len(sizes)), sorted(sizes, reverse=True), marker=".", label=name)
    ax.set_xlabel("element rank")
    ax.set_ylabel("attainability set size")
    ax.set_title("attainability sets, largest first")
    ax.legend()
    fig.tight_layout()
    attain_path = os.path.join(outdir, "attain_sizes.png")
    fig.savefig(attain_path, dpi=120)
    plt.close(fig)
    paths.append(attain_path)

    if space.kind == ODOMETER:
        level = space.depth
        while level > 1 and space.levels[level].group.size > 64:
            level -= 1
        rows = []
        for name, U in (("U0", cover.U0), ("U1", cover.U1)):
            rep = equivalence_classes(
                space, U, E, level=level, bound=len(fsets[name].elements)
            )
            for prefix, size in rep.samples:
                rows.append((name, level, "/".join(map(str, prefix)), size))
        classes_path = os.path.join(outdir, "classes.csv")
        with open(classes_path, "w", newline="") as fh:
            writer = csv.writer(fh, delimiter=";")
            writer.writerow(["piece", "level", "representative", "class_size"])
            writer.writerows(rows)
        paths.append(classes_path)

        fig, ax = plt.subplots(figsize=(7, 4))
        for name in ("U0", "U1"):
            sizes = sorted((r[3] for r in rows if r[0] == name), reverse=True)
            ax.plot(range(len(sizes)), sizes, marker=".", label=name)
        ax.set_xlabel("class rank")
        ax.set_ylabel("class size")
        ax.set_title(f"orbit-piece classes at level {level}")
        ax.legend()
        fig.tight_layout()
        classes_fig = os.path.join(outdir, "classes.png")
        fig.savefig(classes_fig, dpi=120)
        plt.close(fig)
        paths.append(classes_fig)

    return paths
