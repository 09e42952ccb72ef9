import sys
from pathlib import Path

src_path = Path(__file__).parent.parent / "src"
sys.path.insert(0, str(src_path))

from sandkit.services.gap_report import expander_rows, kneser_rows, rows_to_csv  # noqa: E402


def main() -> None:
    print("Kneser family (fractional plan vs MST bound, with LP):")
    print(rows_to_csv(kneser_rows([2, 3], with_lp=True)))

    print("Expander family (reference plan vs tree-embedding solutions):")
    rows = expander_rows(16, 6, 4, 50, seed=0, frt_seeds=range(16))
    print(rows_to_csv(rows))
    middle = rows[-1]
    verdict = "above" if middle.cost > middle.bound else "not above"
    print(f"Median tree-embedding cost {middle.cost:.1f} is {verdict} reference {middle.bound:.1f}")


if __name__ == "__main__":
    main()
