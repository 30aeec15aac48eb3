def unpack((a, b)):
    return a + b


def swap((x, y), flip):
    if flip:
        return (y, x)
    return (x, y)
