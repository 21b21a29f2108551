"""Independent reference implementations used as test oracles."""


def naive_polymul_mod(a, b, modulus, p):
    """Schoolbook product of coefficient lists reduced by a monic modulus."""
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            prod[i + j] = (prod[i + j] + x * y) % p
    k = len(modulus) - 1
    for i in range(len(prod) - 1, k - 1, -1):
        c = prod[i]
        if c:
            for j in range(k + 1):
                prod[i - k + j] = (prod[i - k + j] - c * modulus[j]) % p
    out = prod[:k] + [0] * max(0, k - len(prod))
    return out
