"""Regenerates the hard-coded production group parameters.

Deterministic safe-prime search: start from SHA-256 of a fixed label, force a
255-bit odd candidate q, and step by 2 until both q and p = 2q + 1 are prime.
G = 4 generates the order-q subgroup (quadratic residues) of Z_p^*.
"""
import hashlib

import sympy

LABEL = b"ZTC/production-group/v1"


def main() -> None:
    seed = int.from_bytes(hashlib.sha256(LABEL).digest(), "big")
    q = (seed >> 1) | (1 << 254) | 1
    while not (sympy.isprime(q) and sympy.isprime(2 * q + 1)):
        q += 2
    p = 2 * q + 1
    g = 4
    assert pow(g, q, p) == 1 and g != 1
    print(f"p = 0x{p:x}")
    print(f"q = 0x{q:x}")
    print(f"G = {g}")
    print(f"bits(p) = {p.bit_length()}, bits(q) = {q.bit_length()}")


if __name__ == "__main__":
    main()
