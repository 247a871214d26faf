"""Tour of the distance layer: brackets, decisions, simplification.

Run with: python3 demos/distance_basics.py
"""

import numpy as np

from curveclust import Curve, discrete_frechet, frechet_decision, frechet_distance, simplify


def main():
    # a gentle arc and a noisy copy of it
    rng = np.random.default_rng(7)
    t = np.linspace(0.0, np.pi, 9)
    arc = Curve(np.c_[np.cos(t), np.sin(t)], label="arc")
    noisy = Curve(arc.vertices + rng.normal(0.0, 0.05, arc.vertices.shape), label="noisy")

    r = frechet_distance(arc, noisy)
    print(f"continuous distance  {r.value:.6f}")
    print(f"certified bracket    [{r.lower:.6f}, {r.upper:.6f}]")
    print(f"discrete distance    {discrete_frechet(arc, noisy):.6f}")
    print(f"decision at value*2  {frechet_decision(arc, noisy, 2.0 * r.value)}")
    print(f"decision at value/2  {frechet_decision(arc, noisy, 0.5 * r.value)}")

    # segments admit a closed form: the larger endpoint distance
    a = Curve([[0.0, 0.0], [4.0, 0.0]])
    b = Curve([[0.0, 1.0], [4.0, 3.0]])
    print(f"\nsegment pair         {frechet_distance(a, b).value:.6f} (closed form 3)")

    # summarizing the arc down to budgets of 3..6 vertices
    print("\nvertex budget  summary error")
    for l in (3, 4, 5, 6):
        s = simplify(arc, l)
        err = frechet_distance(s, arc)
        print(f"{l:13d}  {err.value:.6f}")


if __name__ == "__main__":
    main()
