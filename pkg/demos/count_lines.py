"""Count code, comment and blank lines under a directory, per language.

Usage: ``python demos/count_lines.py [path]`` (default: the current directory).
"""

import sys

from sotpkit import aggregate_tree


def main(argv):
    metrics = aggregate_tree(argv[0] if argv else ".", workers=4)
    print(f"{'language':<16}{'files':>7}{'code':>9}{'comment':>9}{'blank':>9}")
    for lang in sorted(metrics.per_language):
        c = metrics.per_language[lang]
        print(f"{lang:<16}{metrics.files_per_language[lang]:>7}{c.code:>9}"
              f"{c.comment:>9}{c.blank:>9}")
    t = metrics.totals
    print(f"{'total':<16}{metrics.text_files:>7}{t.code:>9}{t.comment:>9}{t.blank:>9}")
    print(f"{metrics.binary_files} binary files skipped")


if __name__ == "__main__":
    main(sys.argv[1:])
