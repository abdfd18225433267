def jaccard(first, second)
    return 1.0
