def spread(first,
           second,
           third=None):
    return (first, second, third)


def weird \
        ():
    return "joined"


total = 1 + \
    2 + \
    3
