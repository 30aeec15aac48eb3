"""Module docstring mentioning def not_a_function(): pass.

class NotAClass:
    def also_not(self): pass
"""

DOC = '''
def still_fake(x):
    return x
'''


def real_one():
    """Docstring with def inner_fake(): pass inside."""
    return DOC
