"""Compare the closed-form model expressions with the computed ones."""
from covspde.models3d import (ModelParams, compare_determinant, compare_green_higgs3, compare_green_vector2,
                              compare_poisson_higgs3, compare_poisson_vector2, dirac_factorization_check,
                              proca_gaussian_check)


def main():
    for fam in ("higgs3", "vector2", "spinor"):
        cmp = compare_determinant(ModelParams(fam, {}))
        print(f"determinant {fam:8s} agrees={cmp.agrees} {cmp.note or ''}")
    print(f"green higgs3 c=0 residual {compare_green_higgs3(ModelParams('higgs3', {})):.3e}")
    g = compare_green_vector2(ModelParams("vector2", dict(a=0.3, b=1.0, c=-0.5, d=0.2, m1=1.2, m2=0.8)))
    print(f"green vector2 raw={g['raw_residual']:.3e} rescaled={g['rescaled_residual']:.3e}: {g['verdict']}")
    for c in (0.0, 0.5):
        r = compare_poisson_higgs3(ModelParams("higgs3", {"c": c}))
        print(f"poisson higgs3 c={c}: {r.verdict}")
    r = compare_poisson_vector2(ModelParams("vector2", {}), alpha=[1.0, 0.5, 0.2, 0.0, 0.0, 0.0])
    print(f"poisson vector2: {r.verdict}")
    for side in ("left", "right", "DT"):
        print(f"dirac {side}: passed={dirac_factorization_check(side).passed}")
    print(f"proca gaussian: passed={proca_gaussian_check(1.0).passed}")


if __name__ == "__main__":
    main()
