"""Built-in example algebras.

Four stock bundles are exposed through :func:`library`: two tiny Poisson
superalgebras given by explicit tables, and two divided-power Poisson
algebras (one per bracket family) built on demand. Tests also use the
matrix superalgebra helper, which is the standard source of noncommutative
associative input.
"""

from __future__ import annotations

from .core import AlgebraBundle, bundle_from_strings
from .field import GF2, Field


def example_1_1(field: Field = GF2) -> AlgebraBundle:
    """Dim (1|1): unit e, odd f with ef = f, zero bracket, s(f) = e."""
    return bundle_from_strings(
        field,
        basis=[("e", 0), ("f", 1)],
        product={("e", "e"): {"e": 1}, ("e", "f"): {"f": 1}},
        bracket={},
        squaring={"f": {"e": 1}},
        unit="e",
        name="example_1_1",
    )


def example_2_2(field: Field = GF2) -> AlgebraBundle:
    """Dim (2|2): unit e1, e3*e4 = e2, zero bracket, s(e3) = e1, s(e4) = e2."""
    return bundle_from_strings(
        field,
        basis=[("e1", 0), ("e2", 0), ("e3", 1), ("e4", 1)],
        product={
            ("e1", "e1"): {"e1": 1},
            ("e1", "e2"): {"e2": 1},
            ("e1", "e3"): {"e3": 1},
            ("e1", "e4"): {"e4": 1},
            ("e3", "e4"): {"e2": 1},
        },
        bracket={},
        squaring={"e3": {"e1": 1}, "e4": {"e2": 1}},
        unit="e1",
        name="example_2_2",
    )


def matrix_superalgebra(field: Field, dim_ev: int, dim_od: int, name: str = "") -> AlgebraBundle:
    """Endomorphisms of a (dim_ev | dim_od) space: matrix units E_ij.

    E_ij is even when rows i and columns j sit in blocks of equal parity,
    odd otherwise; E_ij E_kl = delta_jk E_il. Noncommutative, associative,
    unital — the stock input for the commutator-Lie construction.
    """
    total = dim_ev + dim_od

    def par(i: int) -> int:
        return 0 if i < dim_ev else 1

    # past nine rows the concatenated form becomes ambiguous (E1,12 vs E11,2)
    sep = "_" if total > 9 else ""

    def nm(i: int, j: int) -> str:
        return f"E{i + 1}{sep}{j + 1}"

    basis = []
    for i in range(total):
        for j in range(total):
            basis.append((nm(i, j), (par(i) + par(j)) & 1))

    product = {}
    for i in range(total):
        for j in range(total):
            for k in range(total):
                for l in range(total):
                    if j == k:
                        product[(nm(i, j), nm(k, l))] = {nm(i, l): 1}
    bundle = bundle_from_strings(
        field, basis, product=product, commutative=False,
        name=name or f"end({dim_ev}|{dim_od})")
    unit = bundle.space.zero()
    for i in range(total):
        unit = unit + bundle.space.basis(bundle.space.index(nm(i, i)))
    return AlgebraBundle(bundle.space, bundle.product, None, None, unit,
                         name=bundle.name)


def library() -> dict[str, AlgebraBundle]:
    """The stock examples, keyed by the names the CLI accepts."""
    from .divided_powers import build_pi_i, build_pi_pi

    return {
        "example_1_1": example_1_1(),
        "example_2_2": example_2_2(),
        "pi_pi_1_1": build_pi_pi(even_pairs=1, odd_pairs=1, heights=(1, 1)),
        "pi_i_1_2": build_pi_i(even_pairs=1, odd=2, heights=(1, 1)),
    }
