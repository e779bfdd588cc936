"""The degenerate L2 case: u_t + 3 u u_x = 0, gradient catastrophe included.

Solves the k = 0 geodesic equation by characteristics, cross-validates the
pseudo-spectral integrator against it, locates the blow-up time two
independent ways, and probes the loss of smoothness of the time-one flow map
as the breakdown is approached.
"""

import numpy as np

from geoflow import (
    GridSpec,
    PeriodicField,
    SolverConfig,
    blowup_time,
    characteristics_solve,
    detect_blowup_time,
    flow_map_k0,
    integrate_geodesic,
)


def main():
    grid = GridSpec(256)
    x = grid.nodes
    u0 = PeriodicField(grid, np.sin(2 * np.pi * x))

    print("=== blow-up time, two ways ===")
    tstar = blowup_time(u0)
    detected = detect_blowup_time(u0)
    print(f"analytic  T* = -1/(3 min u0') = {tstar:.9f}")
    print(f"detected  (characteristic monotonicity bisection) = {detected:.9f}")
    print(f"closed form 1/(6 pi)                              = "
          f"{1.0 / (6.0 * np.pi):.9f}")

    print()
    print("=== characteristics vs pseudo-spectral integrator ===")
    for frac in (0.2, 0.5, 0.8):
        t = frac * tstar
        sol = characteristics_solve(u0, t)
        cfg = SolverConfig(k=0, grid=grid, dt=1e-5, t_end=t,
                           record_every=10**9)
        traj = integrate_geodesic(u0, cfg)
        gap = np.max(np.abs(traj.final.u.values - sol.u_values))
        print(f"t = {frac:.1f} T*: sup gap = {gap:.2e}")

    print()
    print("=== the flow map steepens toward the catastrophe ===")
    for frac in (0.2, 0.5, 0.8, 0.95):
        phi = flow_map_k0(u0, frac * tstar)
        print(f"t = {frac:.2f} T*: min slope of the flow map = "
              f"{phi.min_slope():.4f}")
    print("As t -> T* the slope tends to zero: the map leaves the "
          "diffeomorphism group, and no H^0 geodesic continues past it.")


if __name__ == "__main__":
    main()
