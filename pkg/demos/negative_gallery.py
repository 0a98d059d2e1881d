"""Each curated negative instance breaks one proper-stack axiom; print the
axiom that fails and the witness the checker reports."""

from finstack.gallery import negative_fixtures
from finstack.proper import check_proper_stack, is_stack


def main() -> None:
    for fx in negative_fixtures():
        report = check_proper_stack(fx.prestack, fx.topology)
        statuses = " ".join(f"{a}={v.status}" for a, v in report.axioms.items())
        print(f"{fx.name} (built to break {fx.fails})")
        print(f"  {statuses}")
        print(f"  witness: {report.axioms[fx.fails].witness}")
        print(f"  stack: {bool(is_stack(fx.prestack, fx.topology))}")


if __name__ == "__main__":
    main()
