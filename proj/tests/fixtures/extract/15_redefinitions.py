def dup():
    return 1


def dup():
    return 2


class Shape:
    pass


def Shape(kind):
    return kind
