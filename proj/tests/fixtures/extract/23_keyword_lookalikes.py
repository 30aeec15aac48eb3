def define(term):
    return term


def classify(item):
    return type(item)


class classdef:
    defclass = "attribute, not a declaration"


undefined = None
subclass = classdef
