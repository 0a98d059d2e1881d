"""Two small presheaves on the V poset: one with two sections that agree on
the cover (not separated), one where a compatible family has no gluing."""

from finstack.gallery import vee_site
from finstack.presheaf import FinPresheaf
from finstack.sheaves import is_separated_presheaf, is_sheaf_presheaf


def main() -> None:
    site = vee_site()
    twins = FinPresheaf(site.base, {"a": ["x"], "b": ["x"], "u": ["s", "t"]},
                        {"a<=u": {"s": "x", "t": "x"}, "b<=u": {"s": "x", "t": "x"}}, name="twins")
    gap = FinPresheaf(site.base, {"a": ["0", "1"], "b": ["0"], "u": ["s"]},
                      {"a<=u": {"s": "0"}, "b<=u": {"s": "0"}}, name="gap")
    for f in (twins, gap):
        sep, sheaf = is_separated_presheaf(site, f), is_sheaf_presheaf(site, f)
        print(f"{f.name}: separated={bool(sep)} sheaf={bool(sheaf)}")
        print(f"  witness: {sheaf.witness}")


if __name__ == "__main__":
    main()
