"""Grid refinement and mass continuity of the Green function shell check."""
import argparse

from covspde.flwightman import verify_fl_green
from covspde.models3d import higgs3, klein_gordon


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--x", type=float, nargs=3, default=[3.0, 0.5, 0.2])
    args = ap.parse_args()
    print("grid refinement, higgs3 defaults")
    for L in (16, 32, 64):
        r = verify_fl_green(higgs3(), args.x, L=L)
        print(f"  L={L:3d}  residual={r.residual:.3e}")
    print("mass continuity, klein_gordon")
    for m in (0.5, 0.1, 0.02):
        r = verify_fl_green(klein_gordon(m), args.x, L=64)
        print(f"  m={m:5.2f}  residual={r.residual:.3e}")


if __name__ == "__main__":
    main()
