#!/usr/bin/env python3
"""Survey the fixture modules: lattices, scalar rings, duality spot checks.

Prints one block per module with its pp-lattice profile and the
definable scalar summary, then cross-checks the tensor zero test on a
few tuples. Everything here is deterministic.
"""

import numpy as np

from ppmod import (
    direct_sum,
    dual,
    equivalent,
    evaluate,
    herzog_zero_test,
    pp_lattice,
    regular_module,
    scalar_ring,
    tensor_product,
)
from ppmod.fixtures import (
    formula_corpus,
    mod_lr,
    mod_rr,
    mod_rr_alt,
    mod_s,
    r2,
    tri2,
)


def survey_module(name, m):
    lat = pp_lattice(m, 1)
    ring = scalar_ring(m)
    dims = ",".join(str(e.dim) for e in lat.elements)
    print(f"{name}: dim {m.dim}, lattice size {lat.size} (subgroup dims {dims})")
    print(f"  end dim {ring.end.dim}, biend dim {ring.biend.dim}, "
          f"scalars match biend: {ring.matches_biend}")
    for i, syn in enumerate(ring.syntheses):
        print(f"  scalar {i}: total {syn.total}, functional {syn.functional}")


def duality_spot_check():
    alg = r2()
    ok = 0
    for phi in formula_corpus(alg, "right"):
        if equivalent(dual(dual(phi)), phi):
            ok += 1
    total = len(formula_corpus(alg, "right"))
    print(f"double dual identity: {ok}/{total} corpus formulas")


def tensor_spot_check():
    m, l_mod = mod_rr(), mod_lr()
    tp = tensor_product(m, l_mod)
    agree = 0
    checked = 0
    for v in m.enumerate_elements():
        for w in l_mod.enumerate_elements():
            direct = not tp.class_of(v, w).any()
            bridged = herzog_zero_test(m, v.reshape(1, -1), l_mod, w.reshape(1, -1))
            checked += 1
            agree += direct == bridged
    print(f"tensor zero test vs direct classes: {agree}/{checked} agree")


def main():
    fixtures = [
        ("RR", mod_rr()),
        ("RR-alt", mod_rr_alt()),
        ("S", mod_s()),
        ("S+S", direct_sum([mod_s(), mod_s()]).module),
        ("RR+S", direct_sum([mod_rr(), mod_s()]).module),
        ("tri2 regular", regular_module(tri2(), "right")),
    ]
    for name, m in fixtures:
        survey_module(name, m)
    print()
    duality_spot_check()
    tensor_spot_check()


if __name__ == "__main__":
    main()
