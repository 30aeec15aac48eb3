import functools


def wraps_nothing(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        return fn(*args, **kwargs)
    return wrapper


@wraps_nothing
def decorated(a, b=2):
    return a + b


@wraps_nothing
class Registered:
    pass
