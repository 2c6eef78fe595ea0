"""Regenerate the embedded group parameter sets in ``lpp/_params.py``.

Procedure, per parameter set:

1. Seed ``random.Random`` with the set's label.
2. Draw a random ``qbits``-bit odd integer with the top bit set and take the
   next prime: that is ``q``.
3. Repeatedly draw a random even cofactor ``k`` of ``pbits - qbits`` bits until
   ``p = k*q + 1`` is a ``pbits``-bit prime.
4. ``g = h^((p-1)/q) mod p`` for the smallest ``h >= 2`` giving ``g != 1``.

Primality is checked with gmpy2's Miller-Rabin (50 rounds). The output is
deterministic, so re-running reproduces the committed constants.
"""

import random
import sys

import gmpy2

SETS = {
    "toy": (1024, 160),
    "secure": (2048, 224),
}


def generate(label: str, pbits: int, qbits: int):
    rng = random.Random(f"lpp-{label}-{pbits}-{qbits}")
    q = int(gmpy2.next_prime(rng.getrandbits(qbits) | (1 << (qbits - 1)) | 1))
    assert q.bit_length() == qbits
    kbits = pbits - qbits
    while True:
        k = rng.getrandbits(kbits) | (1 << (kbits - 1))
        k &= ~1
        p = k * q + 1
        if p.bit_length() == pbits and gmpy2.is_prime(p, 50):
            break
    h = 2
    while True:
        g = pow(h, (p - 1) // q, p)
        if g != 1:
            break
        h += 1
    return p, q, g


def main() -> None:
    out = ['"""Embedded group parameters. Generated by scripts/gen_params.py; do not edit."""', ""]
    for label, (pbits, qbits) in SETS.items():
        p, q, g = generate(label, pbits, qbits)
        out.append(f"{label.upper()}_P = 0x{p:x}")
        out.append(f"{label.upper()}_Q = 0x{q:x}")
        out.append(f"{label.upper()}_G = 0x{g:x}")
        out.append("")
    sys.stdout.write("\n".join(out))


if __name__ == "__main__":
    main()
