"""Time-history figures for a scenario run."""

import logging
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from vpquad.core.sim_engine import (  # noqa: E402
    COLLECTIVE_DEG_COLUMNS,
    CT_COLUMNS,
    POSITION_COLUMNS,
    REFERENCE_COLUMNS,
    ScenarioResult,
)

logger = logging.getLogger(__name__)


def _attitude(ax_list, df):
    for ax, name in zip(ax_list, ("phi", "theta", "psi")):
        ax.plot(df["t [s]"], df[f"{name} [deg]"], label=name)
        ax.set_ylabel(f"{name} [deg]")
        ax.grid(True, alpha=0.3)


def _position(ax_list, df):
    for ax, col, ref in zip(ax_list, POSITION_COLUMNS, REFERENCE_COLUMNS):
        ax.plot(df["t [s]"], df[col], label="actual")
        ax.plot(df["t [s]"], df[ref], "--", label="reference")
        ax.set_ylabel(col)
        ax.grid(True, alpha=0.3)
    ax_list[0].legend()


def _rotors(ax, df, columns, ylabel):
    for i, col in enumerate(columns, start=1):
        ax.plot(df["t [s]"], df[col], label=f"rotor {i}")
    ax.set_ylabel(ylabel)
    ax.grid(True, alpha=0.3)
    ax.legend()


def save_time_histories(result: ScenarioResult, out_dir) -> list[Path]:
    """Write attitude, position, thrust-coefficient and collective figures; return their paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    df = result.decimated if not result.decimated.empty else result.telemetry
    paths = []

    figures = [
        ("attitude", 3, lambda axes: _attitude(axes, df)),
        ("position", 3, lambda axes: _position(axes, df)),
        ("thrust_coeff", 1, lambda axes: _rotors(axes[0], df, CT_COLUMNS, "C_T [-]")),
        ("collective", 1, lambda axes: _rotors(axes[0], df, COLLECTIVE_DEG_COLUMNS, "theta0 [deg]")),
    ]
    for name, rows, draw in figures:
        fig, axes = plt.subplots(rows, 1, figsize=(10, 2.6 * rows + 1), sharex=True, squeeze=False)
        axes = axes[:, 0]
        draw(axes)
        axes[-1].set_xlabel("t [s]")
        fig.suptitle(f"{result.name}: {name.replace('_', ' ')}", fontsize=14)
        fig.tight_layout()
        path = out_dir / f"{result.name}_{name}.png"
        fig.savefig(path)
        plt.close(fig)
        paths.append(path)
    logger.info("Saved %d figures to %s", len(paths), out_dir)
    return paths
