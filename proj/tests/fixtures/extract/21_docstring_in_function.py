def documented(x):
    '''Usage:

        def example_usage():   # this is documentation, not code
            return documented(1)

    '''
    return x


class Documented:
    """class FakeInside: should not appear"""

    def method(self):
        "def one_line_doc_fake(): pass"
        return None
