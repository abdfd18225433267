# Forgets to round: the three cases with repeating fractions fail.
def jaccard(first, second):
    a, b = set(first), set(second)
    if not a and not b:
        return 1.0
    return len(a & b) / len(a | b)
