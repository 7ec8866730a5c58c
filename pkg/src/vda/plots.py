"""Matplotlib figure rendering for the CLI report paths.

These helpers live outside the numerical core; only the CLI imports them,
and only when a --plot path is requested.
"""

import numpy as np
import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402


def stability_figure(report, path):
    """Selection-probability paths over lambda_l, stable set highlighted."""
    cells = report.grid.cells
    lam = np.array([c[0] for c in cells])
    probs = report.probabilities
    stable = set(report.stable_set)
    fig, ax = plt.subplots(figsize=(7, 5))
    for pred in range(probs.shape[1]):
        if pred in stable:
            ax.plot(lam, probs[:, pred], color="crimson", lw=1.8, zorder=3)
        else:
            ax.plot(lam, probs[:, pred], color="0.4", lw=0.6, ls="--",
                    alpha=0.6)
    ax.axhline(report.pi, color="steelblue", ls=":",
               label=f"threshold pi = {report.pi:g}")
    ax.set_xlabel(r"$\lambda_L$")
    ax.set_ylabel("selection probability")
    ax.set_ylim(-0.02, 1.02)
    ax.set_title(f"stability selection "
                 f"(q = {report.q:.2f}, fp bound = {report.fp_bound:.3f})")
    ax.legend(loc="best")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def consistency_figure(grid_rows, landscape, path):
    """Risk contours with the simplex vertices and the located minimizer."""
    z1 = np.unique(grid_rows[:, 0])
    z2 = np.unique(grid_rows[:, 1])
    vals = grid_rows[:, 2].reshape(len(z1), len(z2))
    fig, ax = plt.subplots(figsize=(6, 5.5))
    cs = ax.contour(z1, z2, vals.T, levels=25, cmap="viridis")
    ax.clabel(cs, inline=True, fontsize=6, fmt="%.2f")
    from vda.simplex import build_simplex
    verts = build_simplex(landscape.k).vertices
    ax.scatter(verts[:, 0], verts[:, 1], marker="^", color="black", zorder=4)
    for j, v in enumerate(verts, start=1):
        ax.annotate(f"v{j}", v, textcoords="offset points", xytext=(5, 5))
        circle = plt.Circle(v, landscape.epsilon, fill=False, color="0.6",
                            ls=":")
        ax.add_patch(circle)
    ax.scatter(*landscape.minimizer, marker="*", s=120, color="crimson",
               zorder=5, label="risk minimizer")
    ax.set_aspect("equal")
    ax.set_xlabel("z1")
    ax.set_ylabel("z2")
    p_txt = ", ".join(f"{v:.3f}" for v in landscape.probs)
    ax.set_title(f"population risk, p = ({p_txt})")
    ax.legend(loc="lower left")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def cv_figure(result, path):
    """Heatmap of mean cross-validated error over the penalty grid."""
    fig, ax = plt.subplots(figsize=(6.5, 5))
    im = ax.imshow(result.mean_error, origin="lower", aspect="auto",
                   cmap="viridis")
    ax.set_xticks(range(len(result.grid.lambda_e)))
    ax.set_xticklabels([f"{v:.3g}" for v in result.grid.lambda_e],
                       rotation=45)
    ax.set_yticks(range(len(result.grid.lambda_l)))
    ax.set_yticklabels([f"{v:.3g}" for v in result.grid.lambda_l])
    ax.set_xlabel(r"$\lambda_E$")
    ax.set_ylabel(r"$\lambda_L$")
    fig.colorbar(im, ax=ax, label="mean CV error")
    ax.set_title(f"best cell: lambda_l={result.best_lambda_l:.4g}, "
                 f"lambda_e={result.best_lambda_e:.4g}")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
