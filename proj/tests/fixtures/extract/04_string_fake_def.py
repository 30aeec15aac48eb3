x = 'def fake(): pass'
y = "class NotReal:"
z = "def another_fake(a, b): return a"
snippet = 'class Phantom(object):\n    def ghost(self): pass'
