"""Stable 64-bit seed derivation (splitmix64), shared by anything that
needs independent per-item RNG streams from one master seed."""

_MASK64 = (1 << 64) - 1


def splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def derive_seed(seed: int, *indices: int) -> int:
    """Deterministic stream id for (seed, index...); order-sensitive."""
    state = seed & _MASK64
    for p in indices:
        state = splitmix64(state ^ splitmix64(p & _MASK64))
    return state
