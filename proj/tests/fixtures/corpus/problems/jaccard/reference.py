def jaccard(first, second):
    a, b = set(first), set(second)
    if not a and not b:
        return 1.0
    return round(len(a & b) / len(a | b), 3)
