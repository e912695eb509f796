"""Score a filled-in measurement template.

Usage: ``python demos/score_answers.py [answers.txt]``. Without an argument the
all-best fixture from the test suite is scored.
"""

import sys
from pathlib import Path

from sotpkit import QUALITIES, parse_answers, score_quality

DEFAULT = Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "answers_best.txt"


def main(argv):
    path = Path(argv[0]) if argv else DEFAULT
    answers = parse_answers(path.read_text(encoding="utf-8"))
    print(f"package {answers.package_id}")
    for q in QUALITIES:
        score, rows = score_quality(q, answers)
        print(f"{q:>18}: {score:2d}  (raw {sum(rows.values())})")
        for qid, pts in rows.items():
            print(f"{'':>22}{qid} = {pts}")


if __name__ == "__main__":
    main(sys.argv[1:])
