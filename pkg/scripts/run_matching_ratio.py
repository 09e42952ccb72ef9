import sys
from pathlib import Path

src_path = Path(__file__).parent.parent / "src"
sys.path.insert(0, str(src_path))

from sandkit.domain.approx import matching_solve  # noqa: E402
from sandkit.domain.core import plan_cost  # noqa: E402
from sandkit.domain.lp import solve_exact  # noqa: E402
from sandkit.generators.random_instances import gen_random  # noqa: E402


def main(runs: int = 200) -> None:
    worst = 0.0
    for seed in range(runs):
        n = 5 + seed % 6
        instance = gen_random(n, 2, min(3, n - 1), seed=seed)
        exact = solve_exact(instance).require_optimal()
        matching = plan_cost(instance, matching_solve(instance).plan)
        ratio = float(matching / exact.optimum) if exact.optimum else 1.0
        worst = max(worst, ratio)
        if ratio > 1:
            print(f"seed={seed} n={n} exact={exact.optimum} matching={matching} ratio={ratio:.4f}")
    print(f"\nWorst matching/exact ratio over {runs} instances: {worst:.4f}")


if __name__ == "__main__":
    main(int(sys.argv[1]) if len(sys.argv) > 1 else 200)
