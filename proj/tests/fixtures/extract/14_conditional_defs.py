import sys

if sys.version_info >= (3, 0):
    def compat(data):
        return data.decode("utf-8")
else:
    def compat(data):
        return unicode(data, "utf-8")

if __name__ == "__main__":
    def entry():
        return compat(b"x")
    entry()
