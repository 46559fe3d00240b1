"""Report figures: abelianization spectrum and the transition graph with its
eventual range.  Rendering is optional; nothing here feeds back into any
exact computation.
"""

from __future__ import annotations

from pathlib import Path


def _plt():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def render_eigenvalue_figure(s, path) -> Path:
    """Eigenvalues of the abelianization in the complex plane, with the unit
    circle and the Perron root highlighted."""
    import mpmath

    from .algebra import minimal_polynomial_of_dilatation

    plt = _plt()
    pisot = minimal_polynomial_of_dilatation(s)
    points = []
    for f, mult in pisot.char_factorization.factors:
        with mpmath.workdps(40):
            roots = mpmath.polyroots([mpmath.mpf(c) for c in reversed(f.coeffs)])
        for r in roots:
            points.append((float(mpmath.re(r)), float(mpmath.im(r)), mult, f == pisot.min_poly))

    fig, ax = plt.subplots(figsize=(5, 5))
    theta = [i / 256 * 6.283185307179586 for i in range(257)]
    import math

    ax.plot([math.cos(t) for t in theta], [math.sin(t) for t in theta],
            color="0.7", linewidth=1, zorder=1)
    for x, y, mult, is_perron_factor in points:
        color = "tab:red" if is_perron_factor else "tab:blue"
        ax.scatter([x], [y], s=60 + 40 * (mult - 1), color=color, zorder=3,
                   edgecolors="black", linewidths=0.5)
    ax.axhline(0, color="0.85", linewidth=0.8, zorder=0)
    ax.axvline(0, color="0.85", linewidth=0.8, zorder=0)
    ax.set_aspect("equal")
    ax.set_title("abelianization spectrum (red: Perron factor)")
    ax.set_xlabel("Re")
    ax.set_ylabel("Im")
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def render_transition_figure(s, path) -> Path:
    """Transition edges as a bipartite out/in diagram; eventual-range edges
    are solid, transient edges dashed."""
    from .cohomology import build_transition_complex, edge_dynamics, eventual_range

    plt = _plt()
    complex_ = build_transition_complex(s)
    er = eventual_range(complex_, edge_dynamics(s))
    n = s.size
    fig, ax = plt.subplots(figsize=(6, max(3, 0.6 * n)))
    for i in range(n):
        ax.scatter([0], [n - 1 - i], color="black", zorder=3)
        ax.annotate(f"{s.alphabet[i]} out", (0, n - 1 - i),
                    textcoords="offset points", xytext=(-10, 0), ha="right", fontsize=9)
        ax.scatter([1], [n - 1 - i], color="black", zorder=3)
        ax.annotate(f"in {s.alphabet[i]}", (1, n - 1 - i),
                    textcoords="offset points", xytext=(10, 0), ha="left", fontsize=9)
    for (i, j) in sorted(complex_.transition_edges):
        in_er = (i, j) in er.er_edges
        ax.plot([0, 1], [n - 1 - i, n - 1 - j],
                color="tab:red" if in_er else "0.6",
                linestyle="-" if in_er else "--",
                linewidth=2 if in_er else 1, zorder=2)
    ax.set_xlim(-0.6, 1.6)
    ax.set_ylim(-0.8, n - 0.2)
    ax.axis("off")
    ax.set_title(
        f"transition edges (red: eventual range; {er.components} components, "
        f"{er.independent_cycles} independent cycles)"
    )
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
