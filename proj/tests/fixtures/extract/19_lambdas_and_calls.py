import functools

VALUES = [3, 1, 2]
LIMIT = 10

sorted_values = sorted(VALUES, key=lambda v: -v)
squared = list(map(lambda v: v * v, VALUES))
reduced = functools.reduce(lambda acc, v: acc + v, VALUES, 0)


def only_function_here():
    return sorted_values
