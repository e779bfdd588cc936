"""Geodesic flow on the circle diffeomorphism group: conservation in action.

Integrates an H^1 geodesic from moderate initial data and prints the energy
and momentum diagnostics along the way, then pushes amplitude-one data until
the flow map loses invertibility to show that breakdown, not the integrator,
limits the time of existence.
"""

import numpy as np

from geoflow import (
    BlowupError,
    GridSpec,
    PeriodicField,
    SolverConfig,
    integrate_geodesic,
)


def main():
    grid = GridSpec(256)
    x = grid.nodes

    print("=== small-amplitude geodesic: conserved quantities ===")
    u0 = PeriodicField(grid, 0.05 * (np.sin(2 * np.pi * x)
                                     + 0.5 * np.cos(4 * np.pi * x)))
    cfg = SolverConfig(k=1, grid=grid, dt=1e-3, t_end=1.0, record_every=100)
    traj = integrate_geodesic(u0, cfg)
    print(f"{'t':>6} {'energy':>22} {'momentum dev':>14}")
    for state, e, m in zip(traj.states, traj.energy,
                           traj.momentum_deviation):
        print(f"{state.t:6.2f} {e:22.15e} {m:14.2e}")
    drift = np.max(np.abs(traj.energy - traj.energy[0])) / traj.energy[0]
    print(f"relative energy drift over [0, 1]: {drift:.2e}")

    print()
    print("=== amplitude-one data: finite time of existence ===")
    steep = PeriodicField(grid, np.sin(2 * np.pi * x)
                          + 0.5 * np.cos(4 * np.pi * x))
    try:
        integrate_geodesic(steep, cfg.with_(record_every=10**9))
    except BlowupError as exc:
        print(f"flow map degenerates: {exc}")
        print("The H^1 geodesic from this data genuinely breaks down; "
              "halving the amplitude doubles the breakdown time.")


if __name__ == "__main__":
    main()
