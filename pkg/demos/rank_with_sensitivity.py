"""Rank three packages with AHP and see which single-point changes reorder them.

Run with ``python demos/rank_with_sensitivity.py``.
"""

from sotpkit import QUALITIES, rank_packages, sensitivity

# scores on the 1..10 scale, in the order of QUALITIES
SCORES = {
    "a": [8, 9, 9, 6, 8, 7, 5, 9, 6],
    "b": [7, 8, 8, 7, 7, 8, 6, 8, 7],
    "c": [10, 1, 5, 10, 6, 5, 9, 4, 10],
}


def main():
    scores = {pid: dict(zip(QUALITIES, s)) for pid, s in SCORES.items()}
    ranking = rank_packages(scores)
    print("order:", ", ".join(ranking.order))
    for pid, p in zip(ranking.package_ids, ranking.aggregate):
        print(f"  {pid}: {p:.4f}")

    report = sensitivity(scores, delta=1.0)
    print(f"\n{len(report.perturbations)} perturbations, "
          f"order kept in {report.stability:.0%} of them")
    for p in report.changes():
        print(f"  {p.package}.{p.quality} {p.original:g} -> {p.perturbed:g}: "
              + ", ".join(p.order))


if __name__ == "__main__":
    main()
