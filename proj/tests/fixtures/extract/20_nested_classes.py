class Outer:
    class Inner:
        def method(self):
            return "inner"

        class Meta:
            ordering = ["id"]

    def outer_method(self):
        return Outer.Inner()
