"""Compare the compiled corpus sweep against the pure Python route.

Run as a script. Depth 2 by default (2871 diagrams, both routes are
quick); --depth 3 is 61k diagrams and the pure route starts to crawl;
--depth 4 is the full 557k corpus, where only the compiled kernel is
pleasant. Records are compared for equality unless --skip-pure is
given.
"""

import argparse
import time

from bratteli import _kernel_py, kernels


def run(label, fn, depth):
    t0 = time.perf_counter()
    out = fn(depth)
    dt = time.perf_counter() - t0
    rate = len(out) / dt if dt > 0 else float("inf")
    print(f"{label:>10}: {len(out):>7} records in {dt:8.3f}s "
          f"({rate:,.0f}/s)")
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--depth", type=int, default=2, choices=[1, 2, 3, 4])
    ap.add_argument("--skip-pure", action="store_true",
                    help="time the active backend only")
    args = ap.parse_args()
    print(f"active backend: {kernels.backend_name}, depth {args.depth}")
    fast = run(kernels.backend_name, kernels.sweep, args.depth)
    if args.skip_pure:
        return
    if kernels.backend_name == "pure":
        print("compiled kernel unavailable, nothing to compare")
        return
    slow = run("pure", _kernel_py.sweep, args.depth)
    if fast != slow:
        raise SystemExit("backends disagree")
    print("records agree bit for bit")


if __name__ == "__main__":
    main()
