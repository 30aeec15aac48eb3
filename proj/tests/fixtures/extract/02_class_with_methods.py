class Widget:
    """A widget."""

    def __init__(self, name):
        self.name = name

    def render(self):
        return "<%s>" % self.name

    def resize(self, w, h):
        self.w, self.h = w, h
