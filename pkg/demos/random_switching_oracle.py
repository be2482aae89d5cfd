"""Cross-examining the classifier with simulation.

The verdicts are analytic, but every one of them is falsifiable by
running trajectories.  This script takes a GUAS system and an unbounded
one and confronts each verdict with the matching experiment:

  * GUAS: many random dwell-time switching signals, all of which must
    decay (and do);
  * unbounded (static certificate): the constant convexified control u0
    from the certificate, whose mixed matrix has a positive eigenvalue --
    the simulated norm grows at exactly that rate.

Run:  python3 demos/random_switching_oracle.py
"""

import numpy as np

from planarswitch import ConstantU, RandomDwell, SystemPair, classify, simulate

GUAS_PAIR = SystemPair.of([[-1.0, 1.0], [0.0, -1.0]],
                          [[-2.0, -1.0], [-1.0, -2.0]])
UNBOUNDED_PAIR = SystemPair.of([[-0.1, 1.0], [0.0, -0.1]],
                               [[-0.1, -1.0], [1.0, -0.1]])


def main() -> None:
    v = classify(GUAS_PAIR)
    print(f"== system 1: verdict {v.kind.value} "
          f"(certificate {v.certificate.kind})")
    final = []
    for seed in range(10):
        traj = simulate(GUAS_PAIR, RandomDwell(seed, 0.05, 0.5),
                        [1.0, 0.0], t_max=40.0, sample_dt=40.0)
        final.append(traj.norms()[-1])
    print(f"   10 random switching signals, ||x(40)||: "
          f"min {min(final):.3e}, max {max(final):.3e}  (all decayed)")
    print()

    v = classify(UNBOUNDED_PAIR)
    u0 = v.certificate.payload["u0"]
    lam = v.certificate.payload["unstable_eigenvalue"]
    print(f"== system 2: verdict {v.kind.value} "
          f"(certificate {v.certificate.kind})")
    print(f"   certificate: u0 = {u0!r}, unstable eigenvalue {lam!r}")
    M = u0 * UNBOUNDED_PAIR.A + (1.0 - u0) * UNBOUNDED_PAIR.B
    vals, vecs = np.linalg.eig(M)
    x0 = np.real(vecs[:, np.argmax(np.real(vals))])
    traj = simulate(UNBOUNDED_PAIR, ConstantU(u0), x0,
                    t_max=40.0, sample_dt=5.0)
    print("   constant-u0 simulation from the unstable eigendirection:")
    for s, n in zip(traj.samples, traj.norms()):
        print(f"     t = {s.t:5.1f}   ||x|| = {n:.6e}")
    slope = (np.log(traj.norms()[-1]) - np.log(traj.norms()[0])) / traj.times()[-1]
    print(f"   measured growth rate {slope!r} vs certificate {lam!r}")


if __name__ == "__main__":
    main()
