"""Pure-Python fallback for the packed series multiply kernel.

Terms are dicts mapping a packed exponent key to a nonzero integer
coefficient.  A key packs the fields [total_degree, e_1, ..., e_r], each
`width` bits wide, with the total degree in the most significant field so
that integer comparison of keys is graded-lexicographic order.  Field widths
are chosen by the caller so that adding two valid keys never carries across
fields; truncation only needs the total-degree field.
"""

BACKEND = "python"


def mul_packed(a, b, shift, dmax):
    """Multiply two packed term dicts, dropping total degree > dmax.

    `shift` is the bit offset of the total-degree field (r * width).
    """
    if not a or not b:
        return {}
    if len(a) > len(b):
        a, b = b, a
    out = {}
    bitems = list(b.items())
    for ka, ca in a.items():
        for kb, cb in bitems:
            k = ka + kb
            if (k >> shift) > dmax:
                continue
            v = out.get(k, 0) + ca * cb
            if v:
                out[k] = v
            else:
                out.pop(k, None)
    return out
