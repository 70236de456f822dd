#!/usr/bin/env python3
"""Generate the frozen erfc oracle table used by tests/test_detection.cpp.

Evaluates erfc at 50 points spanning [-6, 6] with mpmath at 50 decimal
digits, rounds each value to the nearest IEEE double, and emits a C++
array literal. The output file is committed; rerunning this script must
reproduce it bit-for-bit.

Usage: python3 tools/make_erfc_table.py > tests/erfc_oracle.inc
"""

import mpmath as mp

mp.mp.dps = 50

N = 50
LO, HI = -6.0, 6.0


def main() -> None:
    print("// Generated by tools/make_erfc_table.py. Do not edit by hand.")
    print("// 50 points uniform on [-6, 6]; values are erfc(z) evaluated at")
    print("// 50 decimal digits and rounded to the nearest double.")
    print("static constexpr struct { double z; double erfc_z; } kErfcOracle[] = {")
    for i in range(N):
        z = LO + (HI - LO) * i / (N - 1)
        val = float(mp.erfc(mp.mpf(z)))
        print(f"    {{{z!r}, {val!r}}},")
    print("};")


if __name__ == "__main__":
    main()
