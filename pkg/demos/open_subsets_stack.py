"""Open subsets of a three-point space, glued along its standard cover.

Builds the V-shaped poset a, b < u where {a, b} covers u, checks the five
proper-stack axioms, then glues a descent datum over the cover back into an
open of u and shows it is the join of its pieces.
"""

from finstack.gallery import open_subsets_stack, vee_site
from finstack.prestack import descent_category, pullback_datum
from finstack.presheaf import Sieve
from finstack.proper import adjoint_over_a, verify_theorem


def main() -> None:
    site = vee_site()
    stack = open_subsets_stack(site)
    for u in site.base.objects:
        print(f"S({u}) has objects {list(stack.fibers[u].objects)}")

    report = verify_theorem(stack, site)
    for axiom, verdict in report.axioms.items():
        print(f"{axiom}: {verdict.status} ({verdict.checked} checks)")
    print("stack:", bool(report.theorem.stack), " replay agrees:", report.theorem.agrees)

    cover = Sieve.generated(site.base, "u", ["a<=u", "b<=u"])
    data = descent_category(stack, cover.inclusion().source).data
    print(f"\n{len(data)} descent data over the cover {cover.sorted_members()}")
    for datum in data:
        glued = adjoint_over_a(stack, cover.inclusion(), datum).apex
        print(f"  pieces {datum.objects} glue to {glued}")

    whole = pullback_datum(stack, cover.inclusion(), "{a,b,u}")
    print("\nrestricting {a,b,u} to the cover gives", whole.objects)


if __name__ == "__main__":
    main()
