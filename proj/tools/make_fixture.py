"""Generate data/synthetic_panel.csv: 7 variables x 18 yearly periods from a known stable VAR(1)."""

import numpy as np

NAMES = ["accidents", "population", "gdp", "private_vehicles", "buses", "subway_km", "road_speed"]
# Generating coefficient matrix (row = equation). Spectral radius ~0.75.
A1 = np.array([
    [0.55, 0.10, -0.10, 0.05, -0.05, -0.10, 0.10],
    [0.00, 0.60, 0.05, 0.00, 0.00, 0.00, 0.00],
    [0.00, 0.05, 0.65, 0.00, 0.00, 0.05, 0.00],
    [0.00, 0.05, 0.05, 0.50, 0.00, 0.00, 0.00],
    [0.00, 0.00, 0.05, 0.00, 0.45, 0.00, 0.00],
    [0.00, 0.00, 0.10, 0.00, 0.00, 0.60, 0.00],
    [0.05, 0.00, 0.00, -0.05, 0.00, 0.00, 0.40],
])
C = np.array([0.2, 0.3, 0.2, 0.1, 0.1, 0.2, 0.1])
NOISE_SD = 0.25
LEVEL = np.array([5100.0, 1870.0, 1600.0, 340.0, 2.1, 350.0, 30.4])
SCALE = np.array([2700.0, 290.0, 990.0, 130.0, 0.3, 210.0, 2.7])


def main() -> None:
    rng = np.random.default_rng(20031218)
    burn, T = 50, 18
    y = np.zeros((burn + T, 7))
    for t in range(1, burn + T):
        y[t] = C + A1 @ y[t - 1] + NOISE_SD * rng.standard_normal(7)
    y = y[burn:]
    y = LEVEL + SCALE * (y - y.mean(axis=0)) / y.std(axis=0)
    with open("data/synthetic_panel.csv", "w") as f:
        f.write("time," + ",".join(NAMES) + "\n")
        for t in range(T):
            f.write(str(2003 + t) + "," + ",".join(f"{v:.4f}" for v in y[t]) + "\n")


if __name__ == "__main__":
    main()
